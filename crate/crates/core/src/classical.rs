//! Exact q-expansions: Bernoulli numbers, Eisenstein series, Theta, Delta.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::gfq::int::{divisors, is_prime, prime_divisors};

pub const BERNOULLI_BOUND: u32 = 60;
pub const DELTA_BOUND: usize = 2000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ring {
    Rational,
    Fp(u64),
}

/// Truncated power series `a_0 + a_1 q + ... + a_{n-1} q^{n-1}`; the
/// precision is the stored length. Over `Fp(p)` coefficients are kept as
/// integers in `0..p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QExpansion {
    ring: Ring,
    coeffs: Vec<BigRational>,
}

fn reduce(c: &BigRational, p: u64) -> Result<BigRational> {
    let pb = BigInt::from(p);
    let den = c.denom().mod_floor(&pb);
    if den.is_zero() {
        return Err(Error::NotInvertible);
    }
    // den^{-1} via Fermat
    let inv = den.modpow(&BigInt::from(p - 2), &pb);
    let v = (c.numer().mod_floor(&pb) * inv).mod_floor(&pb);
    Ok(BigRational::from_integer(v))
}

impl QExpansion {
    pub fn new(ring: Ring, coeffs: Vec<BigRational>) -> Result<Self> {
        match ring {
            Ring::Rational => Ok(QExpansion { ring, coeffs }),
            Ring::Fp(p) => {
                if !is_prime(p) {
                    return Err(Error::NotPrime(p));
                }
                let coeffs = coeffs.iter().map(|c| reduce(c, p)).collect::<Result<_>>()?;
                Ok(QExpansion { ring, coeffs })
            }
        }
    }

    pub fn from_integers(ring: Ring, coeffs: &[i64]) -> Result<Self> {
        Self::new(ring, coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn zero(ring: Ring, precision: usize) -> Result<Self> {
        Self::new(ring, vec![BigRational::zero(); precision])
    }

    pub fn one(ring: Ring, precision: usize) -> Result<Self> {
        let mut c = vec![BigRational::zero(); precision];
        if let Some(x) = c.first_mut() {
            *x = BigRational::one();
        }
        Self::new(ring, c)
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Option<&BigRational> {
        self.coeffs.get(n)
    }

    /// Integer value of `a_n`, if integral and in range.
    pub fn coeff_i64(&self, n: usize) -> Option<i64> {
        let c = self.coeffs.get(n)?;
        if !c.is_integer() {
            return None;
        }
        i64::try_from(c.to_integer()).ok()
    }

    fn check(&self, other: &Self) -> Result<usize> {
        if self.ring != other.ring {
            return Err(Error::FieldMismatch);
        }
        Ok(self.precision().min(other.precision()))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let n = self.check(other)?;
        Self::new(self.ring, (0..n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let n = self.check(other)?;
        Self::new(self.ring, (0..n).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect())
    }

    /// Product to the smaller operand precision.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let n = self.check(other)?;
        let mut c = vec![BigRational::zero(); n];
        for i in 0..n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..n - i {
                c[i + j] += &self.coeffs[i] * &other.coeffs[j];
            }
        }
        Self::new(self.ring, c)
    }

    pub fn truncate(&self, precision: usize) -> Result<Self> {
        if precision > self.precision() {
            return Err(Error::OutOfRange(format!("cannot raise precision {} to {precision}", self.precision())));
        }
        Ok(QExpansion { ring: self.ring, coeffs: self.coeffs[..precision].to_vec() })
    }

    pub fn reduce_mod(&self, p: u64) -> Result<Self> {
        match self.ring {
            Ring::Fp(q) if q == p => Ok(self.clone()),
            Ring::Fp(_) => Err(Error::FieldMismatch),
            Ring::Rational => Self::new(Ring::Fp(p), self.coeffs.clone()),
        }
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.iter().enumerate().all(|(i, c)| if i == 0 { c.is_one() } else { c.is_zero() })
    }
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// `B_k` by `sum_{j<=m} C(m+1, j) B_j = 0`. Odd `k > 1` gives 0.
pub fn bernoulli(k: u32) -> Result<BigRational> {
    if k > BERNOULLI_BOUND {
        return Err(Error::OutOfRange(format!("k = {k} exceeds {BERNOULLI_BOUND}")));
    }
    let mut b: Vec<BigRational> = vec![BigRational::one()];
    for m in 1..=k {
        let mut s = BigRational::zero();
        for (j, bj) in b.iter().enumerate() {
            s += BigRational::from_integer(binomial(m + 1, j as u32)) * bj;
        }
        b.push(-s / BigRational::from_integer(BigInt::from(m + 1)));
    }
    Ok(b.swap_remove(k as usize))
}

/// Product of the primes `l` with `(l - 1) | k`.
pub fn von_staudt_clausen(k: u32) -> BigInt {
    let mut d = BigInt::one();
    for l in divisors(k as u64) {
        if is_prime(l + 1) {
            d *= BigInt::from(l + 1);
        }
    }
    d
}

/// `sigma_e(n)`, summing over every divisor.
pub fn sigma(e: u32, n: u64) -> BigInt {
    let mut s = BigInt::zero();
    for d in 1..=n {
        if n % d == 0 {
            s += BigInt::from(d).pow(e);
        }
    }
    s
}

/// `E_k = 1 - (2k / B_k) sum sigma_{k-1}(n) q^n`.
pub fn eisenstein_qexp(k: u32, precision: usize, ring: Ring) -> Result<QExpansion> {
    if k % 2 == 1 || k < 4 {
        return Err(Error::InvalidWeight(k));
    }
    let c = BigRational::from_integer(BigInt::from(2 * k)) / bernoulli(k)?;
    let mut coeffs = Vec::with_capacity(precision);
    for n in 0..precision {
        coeffs.push(if n == 0 { BigRational::one() } else { -(&c * BigRational::from_integer(sigma(k - 1, n as u64))) });
    }
    QExpansion::new(ring, coeffs)
}

/// `Theta(sum a_n q^n) = sum n a_n q^n`, mod p only.
pub fn theta_op(f: &QExpansion) -> Result<QExpansion> {
    match f.ring {
        Ring::Rational => Err(Error::FieldMismatch),
        Ring::Fp(_) => QExpansion::new(
            f.ring,
            f.coeffs.iter().enumerate().map(|(n, c)| c * BigRational::from_integer(BigInt::from(n))).collect(),
        ),
    }
}

/// `q prod (1 - q^n)^24`.
pub fn delta_qexp(precision: usize, ring: Ring) -> Result<QExpansion> {
    if precision > DELTA_BOUND {
        return Err(Error::OutOfRange(format!("precision {precision} exceeds {DELTA_BOUND}")));
    }
    if precision == 0 {
        return QExpansion::new(ring, Vec::new());
    }
    let m = precision - 1;
    let mut a = vec![BigInt::zero(); m];
    if m > 0 {
        a[0] = BigInt::one();
    }
    for n in 1..m {
        for _ in 0..24 {
            for i in (n..m).rev() {
                let t = a[i - n].clone();
                a[i] -= t;
            }
        }
    }
    let mut coeffs = vec![BigRational::zero()];
    coeffs.extend(a.into_iter().map(BigRational::from_integer));
    QExpansion::new(ring, coeffs)
}

/// Newform q-expansion from `a_r` at primes: multiplicative, with
/// `a_{r^{j+1}} = a_r a_{r^j} - r^{k-1} a_{r^{j-1}}` at good `r` and
/// `a_{r^j} = a_r^j` at `r | level`.
pub fn from_prime_coefficients(ap: &BTreeMap<u64, i64>, level: u64, weight: u32, precision: usize, ring: Ring) -> Result<QExpansion> {
    let mut c: Vec<Option<BigInt>> = vec![None; precision.max(2)];
    c[0] = Some(BigInt::zero());
    c[1] = Some(BigInt::one());
    for n in 2..precision {
        let ps = prime_divisors(n as u64);
        let r = ps[0];
        let mut e = 0;
        let mut m = n as u64;
        while m % r == 0 {
            m /= r;
            e += 1;
        }
        let ar = BigInt::from(*ap.get(&r).ok_or(Error::MissingPrime(r))?);
        let v = if m > 1 {
            let rpart = n as u64 / m;
            c[rpart as usize].clone().expect("smaller index") * c[m as usize].clone().expect("smaller index")
        } else if level % r == 0 {
            ar.pow(e)
        } else if e == 1 {
            ar
        } else {
            let rk = BigInt::from(r).pow(weight - 1);
            let a1 = c[(n as u64 / r) as usize].clone().expect("smaller index");
            let a2 = c[(n as u64 / r / r) as usize].clone().expect("smaller index");
            ar * a1 - rk * a2
        };
        c[n] = Some(v);
    }
    c.truncate(precision);
    QExpansion::new(ring, c.into_iter().map(|x| BigRational::from_integer(x.expect("filled"))).collect())
}

/// `a_r = r + 1 - #E(F_r)` for `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`
/// at a prime of good reduction (projective count).
pub fn weierstrass_ap(a: [i64; 5], r: u64) -> i64 {
    let [a1, a2, a3, a4, a6] = a.map(|x| x.rem_euclid(r as i64));
    let r = r as i64;
    let mut count = 1; // point at infinity
    for x in 0..r {
        let rhs = ((x * x % r * x + a2 * x % r * x + a4 * x + a6) % r + r) % r;
        for y in 0..r {
            let lhs = (y * y + a1 * x % r * y + a3 * y) % r;
            if lhs == rhs {
                count += 1;
            }
        }
    }
    r + 1 - count
}

/// Sign-aware absolute value helper for reports.
pub fn denominator(b: &BigRational) -> BigInt {
    b.denom().abs()
}
