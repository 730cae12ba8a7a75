//! Dense univariate polynomials (constant term first) and factorization over
//! finite fields.

use alloc::vec;
use alloc::vec::Vec;

use super::field::Field;
use super::fq::{FiniteField, Gf};

pub type Poly<E> = Vec<E>;

pub fn trim<F: Field>(f: &F, a: &mut Poly<F::Elem>) {
    while a.last().is_some_and(|c| f.is_zero(c)) {
        a.pop();
    }
}

/// Degree, `None` for the zero polynomial.
pub fn degree<E>(a: &[E]) -> Option<usize> {
    a.len().checked_sub(1)
}

pub fn add<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F::Elem> {
    let n = a.len().max(b.len());
    let mut out: Vec<F::Elem> = (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => f.add(x, y),
            (Some(x), None) | (None, Some(x)) => x.clone(),
            (None, None) => f.zero(),
        })
        .collect();
    trim(f, &mut out);
    out
}

pub fn sub<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F::Elem> {
    let nb: Vec<F::Elem> = b.iter().map(|x| f.neg(x)).collect();
    add(f, a, &nb)
}

pub fn mul<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.mul_add(x, y, &out[i + j]);
        }
    }
    trim(f, &mut out);
    out
}

pub fn scale<F: Field>(f: &F, a: &[F::Elem], c: &F::Elem) -> Poly<F::Elem> {
    let mut out: Vec<F::Elem> = a.iter().map(|x| f.mul(x, c)).collect();
    trim(f, &mut out);
    out
}

/// Quotient and remainder; panics on division by the zero polynomial.
pub fn divrem<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> (Poly<F::Elem>, Poly<F::Elem>) {
    let db = degree(b).expect("division by zero polynomial");
    let lead_inv = f.inv(&b[db]).expect("nonzero leading coefficient");
    let mut r: Vec<F::Elem> = a.to_vec();
    trim(f, &mut r);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![f.zero(); r.len() - db];
    while r.len() > db {
        let top = r.len() - 1;
        let c = f.mul(&r[top], &lead_inv);
        let shift = top - db;
        for (i, bi) in b.iter().enumerate() {
            let t = f.mul(&c, bi);
            r[shift + i] = f.sub(&r[shift + i], &t);
        }
        q[shift] = c;
        r.pop();
        trim(f, &mut r);
    }
    trim(f, &mut q);
    (q, r)
}

pub fn rem<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F::Elem> {
    divrem(f, a, b).1
}

pub fn monic<F: Field>(f: &F, a: &[F::Elem]) -> Poly<F::Elem> {
    match a.last() {
        None => Vec::new(),
        Some(l) => {
            let li = f.inv(l).expect("nonzero leading coefficient");
            scale(f, a, &li)
        }
    }
}

/// Monic gcd (zero if both inputs vanish).
pub fn gcd<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F::Elem> {
    let mut x: Vec<F::Elem> = a.to_vec();
    let mut y: Vec<F::Elem> = b.to_vec();
    trim(f, &mut x);
    trim(f, &mut y);
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    monic(f, &x)
}

pub fn derivative<F: Field>(f: &F, a: &[F::Elem]) -> Poly<F::Elem> {
    let mut out: Vec<F::Elem> = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| f.mul(&f.from_i64(i as i64), c))
        .collect();
    trim(f, &mut out);
    out
}

pub fn eval<F: Field>(f: &F, a: &[F::Elem], x: &F::Elem) -> F::Elem {
    a.iter().rev().fold(f.zero(), |acc, c| f.mul_add(&acc, x, c))
}

pub fn is_one<F: Field>(f: &F, a: &[F::Elem]) -> bool {
    a.len() == 1 && f.is_one(&a[0])
}

/// `base^e mod m`.
pub fn powmod<F: Field>(f: &F, base: &[F::Elem], mut e: u128, m: &[F::Elem]) -> Poly<F::Elem> {
    let mut acc = rem(f, &[f.one()], m);
    let mut b = rem(f, base, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(f, &mul(f, &acc, &b), m);
        }
        b = rem(f, &mul(f, &b, &b), m);
        e >>= 1;
    }
    acc
}

/// `(x - r)` for each root, i.e. the product `prod (x - r_i)`.
pub fn from_roots<F: Field>(f: &F, roots: &[F::Elem]) -> Poly<F::Elem> {
    roots.iter().fold(vec![f.one()], |acc, r| mul(f, &acc, &[f.neg(r), f.one()]))
}

// --- factorization over F_q ---

fn sqfree(k: &FiniteField, a: &[Gf]) -> Vec<(Poly<Gf>, u32)> {
    let p = k.p();
    let mut out = Vec::new();
    let da = derivative(k, a);
    let mut c = gcd(k, a, &da);
    let mut w = divrem(k, a, &c).0;
    let mut i = 1u32;
    while !is_one(k, &w) {
        let y = gcd(k, &w, &c);
        let fac = divrem(k, &w, &y).0;
        if !is_one(k, &fac) {
            out.push((fac, i));
        }
        w = y.clone();
        c = divrem(k, &c, &y).0;
        i += 1;
    }
    if !is_one(k, &c) {
        // c is a polynomial in x^p; take the p-th root coefficientwise
        let root_exp = (k.order() / p) as u128;
        let deg = c.len() - 1;
        let rootc: Vec<Gf> = (0..=deg / p as usize).map(|j| k.pow(&c[j * p as usize], root_exp)).collect();
        for (g, m) in sqfree(k, &rootc) {
            out.push((g, m * p as u32));
        }
    }
    out
}

fn ddf(k: &FiniteField, a: &[Gf]) -> Vec<(Poly<Gf>, usize)> {
    let q = k.order() as u128;
    let x: Poly<Gf> = vec![k.zero(), k.one()];
    let mut out = Vec::new();
    let mut fstar = a.to_vec();
    let mut h = rem(k, &x, &fstar);
    let mut i = 1usize;
    while degree(&fstar).unwrap_or(0) >= 2 * i {
        h = powmod(k, &h, q, &fstar);
        let g = gcd(k, &fstar, &sub(k, &h, &x));
        if !is_one(k, &g) {
            fstar = divrem(k, &fstar, &g).0;
            h = rem(k, &h, &fstar);
            out.push((g, i));
        }
        i += 1;
    }
    if degree(&fstar).unwrap_or(0) > 0 {
        let d = fstar.len() - 1;
        out.push((fstar, d));
    }
    out
}

fn candidate(k: &FiniteField, n: u64) -> Poly<Gf> {
    let q = k.order();
    let mut out = Vec::new();
    let mut m = n;
    while m > 0 {
        out.push(Gf((m % q) as u32));
        m /= q;
    }
    out
}

fn edf(k: &FiniteField, g: &[Gf], d: usize) -> Vec<Poly<Gf>> {
    let n = g.len() - 1;
    if n == d {
        return vec![g.to_vec()];
    }
    let q = k.order();
    let qd = (q as u128).pow(d as u32);
    let mut t = q;
    loop {
        let a = rem(k, &candidate(k, t), g);
        t += 1;
        if degree(&a).unwrap_or(0) == 0 {
            continue;
        }
        let b = if q % 2 == 1 {
            sub(k, &powmod(k, &a, (qd - 1) / 2, g), &[k.one()])
        } else {
            // absolute trace to F_2
            let bits = k.degree() as usize * d;
            let mut acc: Poly<Gf> = Vec::new();
            let mut cur = a.clone();
            for _ in 0..bits {
                acc = add(k, &acc, &cur);
                cur = rem(k, &mul(k, &cur, &cur), g);
            }
            acc
        };
        let h = gcd(k, g, &b);
        let dh = degree(&h).unwrap_or(0);
        if dh > 0 && dh < n {
            let mut out = edf(k, &h, d);
            out.extend(edf(k, &divrem(k, g, &h).0, d));
            return out;
        }
    }
}

/// Irreducible factorization of a nonzero polynomial over F_q into monic
/// factors with multiplicities, sorted by degree and then coefficients.
/// The leading coefficient is dropped.
pub fn factor(k: &FiniteField, a: &[Gf]) -> Vec<(Poly<Gf>, u32)> {
    let mut a = a.to_vec();
    trim(k, &mut a);
    assert!(!a.is_empty(), "cannot factor the zero polynomial");
    let a = monic(k, &a);
    let mut out = Vec::new();
    if degree(&a) == Some(0) {
        return out;
    }
    for (s, m) in sqfree(k, &a) {
        for (g, d) in ddf(k, &s) {
            for h in edf(k, &g, d) {
                out.push((h, m));
            }
        }
    }
    // merge equal factors coming from different square-free layers
    out.sort_by(|x, y| (x.0.len(), &x.0).cmp(&(y.0.len(), &y.0)));
    let mut merged: Vec<(Poly<Gf>, u32)> = Vec::new();
    for (g, m) in out {
        match merged.last_mut() {
            Some((h, mm)) if *h == g => *mm += m,
            _ => merged.push((g, m)),
        }
    }
    merged
}

/// Roots in F_q, sorted by encoding.
pub fn roots(k: &FiniteField, a: &[Gf]) -> Vec<Gf> {
    let mut r: Vec<Gf> = factor(k, a)
        .into_iter()
        .filter(|(g, _)| g.len() == 2)
        .map(|(g, _)| k.neg(&g[0]))
        .collect();
    r.sort();
    r
}

pub fn is_irreducible(k: &FiniteField, a: &[Gf]) -> bool {
    let f = factor(k, a);
    f.len() == 1 && f[0].1 == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u32]) -> Vec<Gf> {
        v.iter().map(|&x| Gf(x)).collect()
    }

    #[test]
    fn x2_plus_1_mod_7_has_no_root() {
        let k = FiniteField::new(7, 1).unwrap();
        let f = p(&[1, 0, 1]);
        // oracle: exhaustion
        assert!((0..7).all(|x| (x * x + 1) % 7 != 0));
        assert!(roots(&k, &f).is_empty());
        assert!(is_irreducible(&k, &f));
    }

    #[test]
    fn factor_product_recovers_input() {
        let k = FiniteField::new(5, 1).unwrap();
        // (x-1)^2 (x^2+x+1) (x+3)^5
        let a = from_roots(&k, &[Gf(1), Gf(1)]);
        let b = p(&[1, 1, 1]);
        let c = (0..5).fold(vec![Gf(1)], |acc, _| mul(&k, &acc, &p(&[3, 1])));
        let f = mul(&k, &mul(&k, &a, &b), &c);
        let fac = factor(&k, &f);
        assert_eq!(fac, vec![(p(&[3, 1]), 5), (p(&[4, 1]), 2), (p(&[1, 1, 1]), 1)]);
        let mut prod = vec![Gf(1)];
        for (g, m) in &fac {
            for _ in 0..*m {
                prod = mul(&k, &prod, g);
            }
        }
        assert_eq!(prod, f);
    }
}
