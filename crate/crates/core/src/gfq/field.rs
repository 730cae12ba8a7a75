use core::fmt::Debug;

/// An exact field with explicit context.
///
/// Elements carry no reference to their field; every operation goes through
/// the context so that extension fields can share lookup tables.
pub trait Field: Clone + Debug {
    type Elem: Clone + PartialEq + Eq + Ord + Debug;

    /// 0 for the rationals.
    fn characteristic(&self) -> u64;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// True when both contexts describe the same field with the same
    /// element encoding.
    fn same_field(&self, other: &Self) -> bool;
    /// Canonical text form including the defining polynomial.
    fn descriptor(&self) -> alloc::string::String;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn pow(&self, a: &Self::Elem, mut e: u128) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `x -> x^(p^e)`; the identity on the rationals.
    fn frobenius_power(&self, a: &Self::Elem, _e: u32) -> Self::Elem {
        a.clone()
    }

    /// `a * b + c`.
    fn mul_add(&self, a: &Self::Elem, b: &Self::Elem, c: &Self::Elem) -> Self::Elem {
        self.add(&self.mul(a, b), c)
    }
}
