//! Finite fields F_{p^d} with a deterministic defining polynomial.
//!
//! An element is encoded as the integer `sum c_i p^i`, where `c_0 + c_1 x + ...`
//! is its representative modulo the defining polynomial. Fields of size at most
//! `TABLE_LIMIT` multiply through discrete-log tables; larger ones fall back to
//! schoolbook polynomial multiplication.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::field::Field;
use super::int::{is_prime, prime_divisors};
use crate::error::{Error, Result};

const TABLE_LIMIT: u64 = 1 << 20;
const SIZE_LIMIT: u64 = 1 << 31;

/// Encoded element of a [`FiniteField`].
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Gf(pub u32);

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

struct Inner {
    p: u32,
    d: u32,
    q: u64,
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

#[derive(Clone)]
pub struct FiniteField {
    inner: Arc<Inner>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.inner.p, self.inner.d, self.inner.modulus)
    }
}

// --- polynomials over the prime field, as raw digit vectors (low degree first) ---

fn trim(v: &mut Vec<u32>) {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
}

fn raw_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    let lead_inv = inv_prime(m[dm], p);
    while r.len() > dm && !(r.len() == 1 && r[0] == 0) {
        let top = r.len() - 1;
        let c = (r[top] as u64 * lead_inv as u64 % p as u64) as u32;
        if c != 0 {
            for i in 0..=dm {
                let idx = top - dm + i;
                let sub = (c as u64 * m[i] as u64 % p as u64) as u32;
                r[idx] = (r[idx] + p - sub) % p;
            }
        }
        r.pop();
    }
    if r.is_empty() {
        r.push(0);
    }
    trim(&mut r);
    r
}

fn raw_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let mut v: Vec<u32> = out.into_iter().map(|x| x as u32).collect();
    trim(&mut v);
    v
}

fn inv_prime(a: u32, p: u32) -> u32 {
    super::int::inv_mod(a as i64, p as u64).expect("nonzero residue mod a prime") as u32
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
fn raw_is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    for dd in 1..=deg / 2 {
        let count = (p as u64).pow(dd as u32);
        for n in 0..count {
            let mut g = vec![0u32; dd + 1];
            let mut m = n;
            for c in g.iter_mut().take(dd) {
                *c = (m % p as u64) as u32;
                m /= p as u64;
            }
            g[dd] = 1;
            let r = raw_rem(f, &g, p);
            if r.len() == 1 && r[0] == 0 {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of degree `d`, comparing the
/// constant coefficient first.
pub(crate) fn smallest_irreducible(p: u32, d: u32) -> Option<Vec<u32>> {
    let count = (p as u64).checked_pow(d)?;
    for n in 0..count {
        // most significant digit of n is the constant term
        let mut coeffs = vec![0u32; d as usize + 1];
        let mut m = n;
        for i in (0..d as usize).rev() {
            coeffs[i] = (m % p as u64) as u32;
            m /= p as u64;
        }
        coeffs[d as usize] = 1;
        if raw_is_irreducible(&coeffs, p) {
            return Some(coeffs);
        }
    }
    None
}

impl FiniteField {
    /// The deterministic field F_{p^d}.
    pub fn new(p: u64, d: u32) -> Result<Self> {
        if !is_prime(p) || p > u32::MAX as u64 {
            return Err(Error::NotPrime(p));
        }
        if d == 0 {
            return Err(Error::InvalidDegree(d));
        }
        let q = p
            .checked_pow(d)
            .filter(|&q| q <= SIZE_LIMIT)
            .ok_or(Error::InvalidDegree(d))?;
        let p32 = p as u32;
        let modulus = smallest_irreducible(p32, d).ok_or(Error::NoIrreducible { p, d })?;
        let mut inner = Inner { p: p32, d, q, modulus, tables: None };
        if q <= TABLE_LIMIT && q > 2 {
            inner.tables = Some(build_tables(&inner));
        }
        Ok(FiniteField { inner: Arc::new(inner) })
    }

    pub fn p(&self) -> u64 {
        self.inner.p as u64
    }

    pub fn degree(&self) -> u32 {
        self.inner.d
    }

    pub fn order(&self) -> u64 {
        self.inner.q
    }

    /// Monic defining polynomial, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = Gf> {
        (0..self.inner.q as u32).map(Gf)
    }

    /// Coefficient vector (length `d`) of the representative polynomial.
    pub fn coeffs(&self, a: Gf) -> Vec<u32> {
        let mut v = vec![0u32; self.inner.d as usize];
        let mut m = a.0;
        for c in v.iter_mut() {
            *c = m % self.inner.p;
            m /= self.inner.p;
        }
        v
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Result<Gf> {
        if c.len() > self.inner.d as usize || c.iter().any(|&x| x >= self.inner.p) {
            return Err(Error::OutOfRange(alloc::format!("coefficients {c:?}")));
        }
        let mut acc = 0u64;
        for &x in c.iter().rev() {
            acc = acc * self.inner.p as u64 + x as u64;
        }
        Ok(Gf(acc as u32))
    }

    /// Class of the polynomial variable `x` (for `d = 1`, the root of `x`, i.e. 0).
    pub fn generator(&self) -> Gf {
        if self.inner.d == 1 {
            Gf(0)
        } else {
            Gf(self.inner.p)
        }
    }

    /// Embeds a prime-field residue.
    pub fn prime(&self, v: u64) -> Gf {
        Gf((v % self.inner.p as u64) as u32)
    }

    /// Inverse of [`FiniteField::prime`] on the prime subfield.
    pub fn as_prime(&self, a: Gf) -> Option<u64> {
        if a.0 < self.inner.p {
            Some(a.0 as u64)
        } else {
            None
        }
    }

    pub fn frobenius(&self, a: Gf) -> Gf {
        self.pow(&a, self.inner.p as u128)
    }

    pub fn frobenius_pow(&self, a: Gf, times: u32) -> Gf {
        let mut x = a;
        for _ in 0..(times % self.inner.d) {
            x = self.frobenius(x);
        }
        x
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: Gf) -> Option<u64> {
        if a.0 == 0 {
            return None;
        }
        let n = self.inner.q - 1;
        let mut ord = n;
        for l in prime_divisors(n) {
            while ord % l == 0 && self.is_one(&self.pow(&a, (ord / l) as u128)) {
                ord /= l;
            }
        }
        Some(ord)
    }

    fn slow_mul(inner: &Inner, a: u32, b: u32) -> u32 {
        let p = inner.p;
        let da = digits(a, p, inner.d);
        let db = digits(b, p, inner.d);
        let prod = raw_mul(&da, &db, p);
        let r = raw_rem(&prod, &inner.modulus, p);
        undigits(&r, p)
    }
}

fn digits(a: u32, p: u32, d: u32) -> Vec<u32> {
    let mut v = vec![0u32; d as usize];
    let mut m = a;
    for c in v.iter_mut() {
        *c = m % p;
        m /= p;
    }
    trim(&mut v);
    v
}

fn undigits(v: &[u32], p: u32) -> u32 {
    let mut acc = 0u32;
    for &x in v.iter().rev() {
        acc = acc * p + x;
    }
    acc
}

fn build_tables(inner: &Inner) -> Tables {
    let q = inner.q;
    let n = q - 1;
    let ls = prime_divisors(n);
    let slow_pow = |g: u32, mut e: u64| {
        let mut base = g;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = FiniteField::slow_mul(inner, acc, base);
            }
            base = FiniteField::slow_mul(inner, base, base);
            e >>= 1;
        }
        acc
    };
    let gen = (2..q as u32)
        .find(|&g| ls.iter().all(|&l| slow_pow(g, n / l) != 1))
        .unwrap_or(1);
    let mut exp = vec![0u32; n as usize];
    let mut log = vec![0u32; q as usize];
    let mut x = 1u32;
    for (i, slot) in exp.iter_mut().enumerate() {
        *slot = x;
        log[x as usize] = i as u32;
        x = FiniteField::slow_mul(inner, x, gen);
    }
    Tables { exp, log }
}

impl Field for FiniteField {
    type Elem = Gf;

    fn characteristic(&self) -> u64 {
        self.inner.p as u64
    }

    fn zero(&self) -> Gf {
        Gf(0)
    }

    fn one(&self) -> Gf {
        Gf(1)
    }

    fn from_i64(&self, v: i64) -> Gf {
        Gf(v.rem_euclid(self.inner.p as i64) as u32)
    }

    fn add(&self, a: &Gf, b: &Gf) -> Gf {
        let p = self.inner.p;
        if self.inner.d == 1 {
            return Gf((a.0 + b.0) % p);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut acc = 0u32;
        let mut w = 1u32;
        while x > 0 || y > 0 {
            acc += ((x % p + y % p) % p) * w;
            x /= p;
            y /= p;
            w = w.wrapping_mul(p);
        }
        Gf(acc)
    }

    fn sub(&self, a: &Gf, b: &Gf) -> Gf {
        self.add(a, &self.neg(b))
    }

    fn neg(&self, a: &Gf) -> Gf {
        let p = self.inner.p;
        if self.inner.d == 1 {
            return Gf((p - a.0) % p);
        }
        let mut x = a.0;
        let mut acc = 0u32;
        let mut w = 1u32;
        while x > 0 {
            acc += ((p - x % p) % p) * w;
            x /= p;
            w = w.wrapping_mul(p);
        }
        Gf(acc)
    }

    fn mul(&self, a: &Gf, b: &Gf) -> Gf {
        if a.0 == 0 || b.0 == 0 {
            return Gf(0);
        }
        if self.inner.d == 1 {
            return Gf((a.0 as u64 * b.0 as u64 % self.inner.p as u64) as u32);
        }
        match &self.inner.tables {
            Some(t) => {
                let n = (self.inner.q - 1) as u64;
                let e = (t.log[a.0 as usize] as u64 + t.log[b.0 as usize] as u64) % n;
                Gf(t.exp[e as usize])
            }
            None => Gf(Self::slow_mul(&self.inner, a.0, b.0)),
        }
    }

    fn inv(&self, a: &Gf) -> Option<Gf> {
        if a.0 == 0 {
            return None;
        }
        if self.inner.d == 1 {
            return Some(Gf(inv_prime(a.0, self.inner.p)));
        }
        match &self.inner.tables {
            Some(t) => {
                let n = (self.inner.q - 1) as u32;
                let l = t.log[a.0 as usize];
                Some(Gf(t.exp[((n - l) % n) as usize]))
            }
            None => Some(self.pow(a, (self.inner.q - 2) as u128)),
        }
    }

    fn is_zero(&self, a: &Gf) -> bool {
        a.0 == 0
    }

    fn descriptor(&self) -> alloc::string::String {
        alloc::format!("GF({}^{}){:?}", self.inner.p, self.inner.d, self.inner.modulus)
    }

    fn frobenius_power(&self, a: &Gf, e: u32) -> Gf {
        self.frobenius_pow(*a, e)
    }

    fn same_field(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.modulus == other.inner.modulus)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverse() {
        let f = FiniteField::new(5, 1).unwrap();
        assert_eq!(f.inv(&Gf(2)), Some(Gf(3)));
        assert_eq!(f.inv(&Gf(0)), None);
    }

    #[test]
    fn order_of_three_mod_seven() {
        let f = FiniteField::new(7, 1).unwrap();
        // oracle: enumerate powers directly
        let mut x = 1u64;
        let mut k = 0;
        loop {
            x = x * 3 % 7;
            k += 1;
            if x == 1 {
                break;
            }
        }
        assert_eq!(k, 6);
        assert_eq!(f.mult_order(Gf(3)), Some(k));
    }

    #[test]
    fn frobenius_squared_is_identity_on_f25() {
        let f = FiniteField::new(5, 2).unwrap();
        for a in f.elements() {
            assert_eq!(f.frobenius(f.frobenius(a)), a);
        }
        // and Frobenius is not the identity
        assert!(f.elements().any(|a| f.frobenius(a) != a));
    }

    #[test]
    fn defining_polynomials_are_deterministic() {
        assert_eq!(FiniteField::new(5, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(FiniteField::new(7, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(FiniteField::new(7, 1).unwrap().modulus(), &[0, 1]);
        let a = FiniteField::new(3, 4).unwrap();
        let b = FiniteField::new(3, 4).unwrap();
        assert_eq!(a.modulus(), b.modulus());
    }

    #[test]
    fn rejects_composite() {
        assert_eq!(FiniteField::new(6, 1).unwrap_err(), Error::NotPrime(6));
        assert!(FiniteField::new(5, 0).is_err());
    }

    #[test]
    fn table_and_slow_paths_agree() {
        let f = FiniteField::new(3, 3).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.mul(&a, &b).0, FiniteField::slow_mul(&f.inner, a.0, b.0));
            }
            if a.0 != 0 {
                assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), Gf(1));
            }
        }
    }

    #[test]
    fn large_field_without_tables() {
        // 5^9 exceeds the table limit
        let f = FiniteField::new(5, 9).unwrap();
        assert!(f.inner.tables.is_none());
        let x = f.generator();
        let y = f.add(&x, &Gf(3));
        let yi = f.inv(&y).unwrap();
        assert_eq!(f.mul(&y, &yi), Gf(1));
        assert_eq!(f.frobenius_pow(y, 9), y);
    }

    #[test]
    fn field_axioms_f49() {
        let f = FiniteField::new(7, 2).unwrap();
        let els: Vec<Gf> = f.elements().step_by(5).collect();
        for a in &els {
            assert_eq!(f.add(a, &f.neg(a)), Gf(0));
            for b in &els {
                for c in &els {
                    let lhs = f.mul(a, &f.add(b, c));
                    let rhs = f.add(&f.mul(a, b), &f.mul(a, c));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
