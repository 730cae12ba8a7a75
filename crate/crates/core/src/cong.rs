//! P^1(Z/N), cosets of Gamma_H(N) in SL_2(Z), lifts and cusps.
//!
//! A coset `Gamma_H(N) g` is determined by the bottom row `(c, d)` of `g`
//! modulo `N`, up to scaling by `H`. Taking `H` to be all of `(Z/N)^x` gives
//! `Gamma_0(N)` and the cosets are exactly P^1(Z/N); `H = {1}` gives
//! `Gamma_1(N)`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gfq::int::{ext_gcd, gcd, inv_mod, is_prime, modp, prime_divisors};

/// Integer 2x2 matrix `[a, b, c, d]` (row-major).
pub type Mat2 = [i64; 4];

pub fn mat_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    [
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    ]
}

pub fn det(x: &Mat2) -> i64 {
    x[0] * x[3] - x[1] * x[2]
}

/// Adjugate `[[d, -b], [-c, a]]`.
pub fn adj(x: &Mat2) -> Mat2 {
    [x[3], -x[1], -x[2], x[0]]
}

pub const IDENTITY: Mat2 = [1, 0, 0, 1];
pub const MINUS_I: Mat2 = [-1, 0, 0, -1];
pub const SIGMA: Mat2 = [0, -1, 1, 0];
pub const TAU: Mat2 = [0, -1, 1, -1];
pub const T: Mat2 = [1, 1, 0, 1];

/// A point of P^1(Z/N) in normalized form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct P1Class {
    pub modulus: u64,
    pub c: u64,
    pub d: u64,
}

fn check_point(c: i64, d: i64, n: u64) -> Result<(u64, u64)> {
    if n == 0 {
        return Err(Error::InvalidPoint { c, d, modulus: n });
    }
    let (cr, dr) = (modp(c, n), modp(d, n));
    if gcd(gcd(cr as i64, dr as i64), n as i64) != 1 {
        return Err(Error::InvalidPoint { c, d, modulus: n });
    }
    Ok((cr, dr))
}

/// Units of `Z/N` in increasing order.
pub fn units(n: u64) -> Vec<u64> {
    if n == 1 {
        return vec![0];
    }
    (1..n).filter(|&u| gcd(u as i64, n as i64) == 1).collect()
}

/// Lexicographically least `(u c, u d)` over `u` in `scalars`.
fn min_scaled(c: u64, d: u64, n: u64, scalars: &[u64]) -> (u64, u64) {
    scalars
        .iter()
        .map(|&u| ((u * c) % n, (u * d) % n))
        .min()
        .unwrap_or((c % n, d % n))
}

/// Canonical representative of `(c : d)` in P^1(Z/N): the smallest `c`, then
/// the smallest `d`, over all unit multiples.
pub fn p1_normalize(c: i64, d: i64, n: u64) -> Result<P1Class> {
    let (cr, dr) = check_point(c, d, n)?;
    let (c, d) = min_scaled(cr, dr, n, &units(n));
    Ok(P1Class { modulus: n, c, d })
}

/// All classes of P^1(Z/N), sorted.
pub fn p1_list(n: u64) -> Vec<P1Class> {
    Cosets::new(&SubgroupSpec::gamma0(n)).classes()
}

/// `N * prod_{l | N} (1 + 1/l)`.
pub fn p1_count(n: u64) -> u64 {
    prime_divisors(n).iter().fold(n, |acc, &l| acc / l * (l + 1))
}

/// A matrix in SL_2(Z) with bottom row congruent to `(c, d)` mod N.
///
/// Entries are bounded by `N^2 + N` in absolute value: the bottom row is
/// `(c', d + tN)` with `0 <= c' <= N` and `t < N`.
pub fn lift_to_sl2z(x: &P1Class) -> Mat2 {
    lift_pair(x.c as i64, x.d as i64, x.modulus)
}

/// Same as [`lift_to_sl2z`] for any pair with `gcd(c, d, N) = 1`.
pub fn lift_pair(c: i64, d: i64, n: u64) -> Mat2 {
    if n == 1 {
        return IDENTITY;
    }
    let n = n as i64;
    let mut c = c.rem_euclid(n);
    let d0 = d.rem_euclid(n);
    if c == 0 && d0 == 1 {
        return IDENTITY;
    }
    if c == 0 {
        c = n;
    }
    let mut d = d0;
    while gcd(c, d) != 1 {
        d += n;
    }
    // a d - b c = 1
    let (_, x, y) = ext_gcd(d, c);
    [x, -y, c, d]
}

/// Congruence subgroup selector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubgroupSpec {
    level: u64,
    /// Generators of `H <= (Z/N)^x`.
    gens: Vec<u64>,
    /// Auxiliary prime `p` for `Gamma_H(N) ∩ Gamma_0(p)`.
    aux_prime: Option<u64>,
}

impl SubgroupSpec {
    pub fn gamma0(n: u64) -> Self {
        let gens = if n <= 2 { Vec::new() } else { units(n) };
        SubgroupSpec { level: n.max(1), gens, aux_prime: None }
    }

    pub fn gamma1(n: u64) -> Self {
        SubgroupSpec { level: n.max(1), gens: Vec::new(), aux_prime: None }
    }

    /// `Gamma_H(N)` with `H` generated by `gens`.
    pub fn gamma_h(n: u64, gens: &[u64]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSubgroup(format!("level must be positive")));
        }
        for &g in gens {
            if inv_mod(g as i64, n).is_none() {
                return Err(Error::NotAUnit { value: g as i64, modulus: n });
            }
        }
        let mut g: Vec<u64> = gens.iter().map(|&x| x % n).collect();
        g.sort_unstable();
        g.dedup();
        Ok(SubgroupSpec { level: n, gens: g, aux_prime: None })
    }

    /// Intersect with `Gamma_0(p)` for a prime `p` not dividing the level.
    pub fn with_aux_prime(&self, p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if self.level % p == 0 || self.aux_prime.is_some() {
            return Err(Error::InvalidSubgroup(format!("auxiliary prime {p} must not divide level {}", self.level)));
        }
        Ok(SubgroupSpec { aux_prime: Some(p), ..self.clone() })
    }

    /// Level of the underlying `Gamma_H(N)`, ignoring any auxiliary prime.
    pub fn base_level(&self) -> u64 {
        self.level
    }

    pub fn aux_prime(&self) -> Option<u64> {
        self.aux_prime
    }

    /// Level of the group as a `Gamma_H'(M)`: `N` or `Np`.
    pub fn level(&self) -> u64 {
        self.level * self.aux_prime.unwrap_or(1)
    }

    /// The spec with the auxiliary prime dropped.
    pub fn base(&self) -> Self {
        SubgroupSpec { aux_prime: None, ..self.clone() }
    }

    /// The subgroup `H <= (Z/N)^x` as a sorted element list.
    pub fn h_elements(&self) -> Vec<u64> {
        let n = self.level;
        if n == 1 {
            return vec![0];
        }
        let mut seen = BTreeSet::new();
        seen.insert(1 % n);
        let mut frontier = vec![1 % n];
        while let Some(x) = frontier.pop() {
            for &g in &self.gens {
                let y = (x * g) % n;
                if seen.insert(y) {
                    frontier.push(y);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// The equivalent `(M, H')` with `H'` listed explicitly; with an auxiliary
    /// prime this is the preimage of `H` in `(Z/Np)^x`.
    pub fn effective(&self) -> (u64, Vec<u64>) {
        let h = self.h_elements();
        match self.aux_prime {
            None => (self.level, h),
            Some(p) => {
                let m = self.level * p;
                let hs: BTreeSet<u64> = h.into_iter().collect();
                let big = units(m).into_iter().filter(|u| hs.contains(&(u % self.level))).collect();
                (m, big)
            }
        }
    }

    pub fn is_gamma0(&self) -> bool {
        let n = self.level;
        self.h_elements().len() as u64 == units(n).len() as u64
    }

    pub fn contains_minus_one(&self) -> bool {
        let (m, h) = self.effective();
        m <= 2 || h.contains(&(m - 1))
    }

    /// `[SL_2(Z) : Gamma]`, counted exactly.
    pub fn index(&self) -> u64 {
        let (m, h) = self.effective();
        let primitive = prime_divisors(m).iter().fold(m * m, |acc, &l| acc / (l * l) * (l * l - 1));
        primitive / h.len() as u64
    }

    /// Whether `g` (an integer matrix of determinant 1) lies in the group.
    pub fn contains(&self, g: &Mat2) -> bool {
        let (m, h) = self.effective();
        det(g) == 1 && modp(g[2], m) == 0 && (m == 1 || h.contains(&modp(g[3], m)))
    }

    /// Canonical text form, used for cache keys and reports.
    pub fn descriptor(&self) -> alloc::string::String {
        let kind = if self.is_gamma0() {
            format!("Gamma0({})", self.level)
        } else if self.h_elements().len() == 1 {
            format!("Gamma1({})", self.level)
        } else {
            format!("GammaH({},{:?})", self.level, self.h_elements())
        };
        match self.aux_prime {
            None => kind,
            Some(p) => format!("{kind}∩Gamma0({p})"),
        }
    }
}

/// The coset space `Gamma \ SL_2(Z)` with a dense lookup table.
#[derive(Clone, Debug)]
pub struct Cosets {
    modulus: u64,
    h: Vec<u64>,
    reps: Vec<(u64, u64)>,
    table: Vec<u32>,
}

const NONE: u32 = u32::MAX;

impl Cosets {
    pub fn new(spec: &SubgroupSpec) -> Self {
        let (m, h) = spec.effective();
        let mut reps = BTreeSet::new();
        for c in 0..m {
            for d in 0..m {
                if gcd(gcd(c as i64, d as i64), m as i64) == 1 {
                    reps.insert(min_scaled(c, d, m, &h));
                }
            }
        }
        let reps: Vec<(u64, u64)> = reps.into_iter().collect();
        let index: BTreeMap<(u64, u64), u32> = reps.iter().enumerate().map(|(i, &r)| (r, i as u32)).collect();
        let mut table = vec![NONE; (m * m) as usize];
        for c in 0..m {
            for d in 0..m {
                if gcd(gcd(c as i64, d as i64), m as i64) == 1 {
                    table[(c * m + d) as usize] = index[&min_scaled(c, d, m, &h)];
                }
            }
        }
        Cosets { modulus: m, h, reps, table }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn rep(&self, i: usize) -> (u64, u64) {
        self.reps[i]
    }

    pub fn reps(&self) -> &[(u64, u64)] {
        &self.reps
    }

    pub fn h(&self) -> &[u64] {
        &self.h
    }

    /// Index of the coset with bottom row `(c, d)`, if the pair is primitive.
    pub fn index(&self, c: i64, d: i64) -> Option<usize> {
        let m = self.modulus;
        let t = self.table[(modp(c, m) * m + modp(d, m)) as usize];
        (t != NONE).then_some(t as usize)
    }

    /// Coset `x * g`.
    pub fn act(&self, i: usize, g: &Mat2) -> Option<usize> {
        let (c, d) = self.reps[i];
        let (c, d) = (c as i64, d as i64);
        self.index(c * g[0] + d * g[2], c * g[1] + d * g[3])
    }

    pub fn lift(&self, i: usize) -> Mat2 {
        let (c, d) = self.reps[i];
        lift_pair(c as i64, d as i64, self.modulus)
    }

    pub fn classes(&self) -> Vec<P1Class> {
        self.reps.iter().map(|&(c, d)| P1Class { modulus: self.modulus, c, d }).collect()
    }
}

/// A cusp `a/c` in lowest terms, `c >= 0`; infinity is `1/0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cusp {
    pub a: i64,
    pub c: i64,
}

impl Cusp {
    pub fn new(a: i64, c: i64) -> Result<Self> {
        if a == 0 && c == 0 {
            return Err(Error::OutOfRange(format!("0/0 is not a cusp")));
        }
        let g = gcd(a, c);
        let (mut a, mut c) = (a / g, c / g);
        if c < 0 || (c == 0 && a < 0) {
            a = -a;
            c = -c;
        }
        Ok(Cusp { a, c })
    }

    pub fn infinity() -> Self {
        Cusp { a: 1, c: 0 }
    }

    /// `g` in SL_2(Z) with `g(inf) = a/c`.
    pub fn lift(&self) -> Mat2 {
        let (_, x, y) = ext_gcd(self.a, self.c);
        // a x + c y = 1  =>  [[a, -y], [c, x]]
        [self.a, -y, self.c, x]
    }

    pub fn act(&self, g: &Mat2) -> Self {
        let a = g[0] * self.a + g[1] * self.c;
        let c = g[2] * self.a + g[3] * self.c;
        Cusp::new(a, c).expect("determinant-one action of a cusp")
    }
}

/// One class of cusps for a congruence subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuspClass {
    pub modulus: u64,
    pub representative: Cusp,
    pub spec: SubgroupSpec,
}

/// Cusp classes with a total classifier.
#[derive(Clone, Debug)]
pub struct CuspClasses {
    spec: SubgroupSpec,
    cosets: Cosets,
    /// Class id per coset.
    orbit: Vec<usize>,
    classes: Vec<CuspClass>,
}

impl CuspClasses {
    pub fn classes(&self) -> &[CuspClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn spec(&self) -> &SubgroupSpec {
        &self.spec
    }

    /// Class id of the cusp `g(inf)` for the coset of `g`.
    pub fn class_of_coset(&self, i: usize) -> usize {
        self.orbit[i]
    }

    /// Class id of an arbitrary cusp.
    pub fn classify(&self, x: &Cusp) -> usize {
        let g = x.lift();
        let i = self.cosets.index(g[2], g[3]).expect("SL_2(Z) bottom row is primitive");
        self.orbit[i]
    }

    pub fn class_of(&self, x: &Cusp) -> &CuspClass {
        &self.classes[self.classify(x)]
    }
}

/// Cusps of the group: orbits of the cosets under right multiplication by
/// `T` and `-I`. Each class is represented by the cusp of its first coset.
pub fn cusp_classes(spec: &SubgroupSpec) -> CuspClasses {
    let cosets = Cosets::new(spec);
    let n = cosets.len();
    let mut orbit = vec![usize::MAX; n];
    let mut classes = Vec::new();
    for start in 0..n {
        if orbit[start] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let mut stack = vec![start];
        orbit[start] = id;
        while let Some(i) = stack.pop() {
            for g in [T, MINUS_I] {
                let j = cosets.act(i, &g).expect("coset action");
                if orbit[j] == usize::MAX {
                    orbit[j] = id;
                    stack.push(j);
                }
            }
        }
        let g = cosets.lift(start);
        let representative = Cusp::new(g[0], g[2]).expect("column of SL_2(Z) matrix");
        classes.push(CuspClass { modulus: cosets.modulus(), representative, spec: spec.clone() });
    }
    CuspClasses { spec: spec.clone(), cosets, orbit, classes }
}
