use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::field::Field;

/// The exact rational field.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn characteristic(&self) -> u64 {
        0
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn descriptor(&self) -> alloc::string::String {
        alloc::string::String::from("QQ")
    }

    fn same_field(&self, _other: &Self) -> bool {
        true
    }
}

/// Reduces a rational whose denominator is prime to `p` into F_p.
pub fn reduce_mod_p(x: &BigRational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let num = ((x.numer() % &pb) + &pb) % &pb;
    let den = ((x.denom() % &pb) + &pb) % &pb;
    let num: u64 = num.try_into().ok()?;
    let den: u64 = den.try_into().ok()?;
    let di = super::int::inv_mod(den as i64, p)?;
    Some(num * di % p)
}
