//! Characteristic-polynomial factorization and eigenspaces over extensions.

use alloc::string::String;
use alloc::vec::Vec;

use super::field::Field;
use super::fq::{FiniteField, Gf};
use super::matrix::Matrix;
use super::poly;
use crate::error::{Error, Result};

/// Field embedding `from -> to` determined by the image of the generator.
#[derive(Clone, Debug)]
pub struct Embedding {
    from: FiniteField,
    to: FiniteField,
    image: Gf,
}

impl Embedding {
    /// The deterministic embedding sending the generator of `from` to the
    /// smallest (by encoding) root of its defining polynomial in `to`.
    pub fn new(from: &FiniteField, to: &FiniteField) -> Result<Self> {
        if from.p() != to.p() || to.degree() % from.degree() != 0 {
            return Err(Error::FieldMismatch);
        }
        if from.degree() == 1 {
            return Ok(Embedding { from: from.clone(), to: to.clone(), image: Gf(0) });
        }
        let m: Vec<Gf> = from.modulus().iter().map(|&c| to.prime(c as u64)).collect();
        let r = poly::roots(to, &m);
        let image = *r.first().ok_or_else(|| Error::Internal(String::from("defining polynomial has no root")))?;
        Ok(Embedding { from: from.clone(), to: to.clone(), image })
    }

    pub fn source(&self) -> &FiniteField {
        &self.from
    }

    pub fn target(&self) -> &FiniteField {
        &self.to
    }

    pub fn apply(&self, a: &Gf) -> Gf {
        if self.from.degree() == 1 {
            return self.to.prime(a.0 as u64);
        }
        let c = self.from.coeffs(*a);
        let mut acc = self.to.zero();
        for &ci in c.iter().rev() {
            acc = self.to.mul_add(&acc, &self.image, &self.to.prime(ci as u64));
        }
        acc
    }

    pub fn apply_matrix(&self, m: &Matrix<FiniteField>) -> Matrix<FiniteField> {
        m.map_into(&self.to, |x| self.apply(x))
    }

    pub fn apply_poly(&self, a: &[Gf]) -> Vec<Gf> {
        a.iter().map(|x| self.apply(x)).collect()
    }
}

/// Eigenvalue data for one irreducible factor of the characteristic
/// polynomial, computed over the field generated by one of its roots.
#[derive(Clone, Debug)]
pub struct Eigenspace {
    pub field: FiniteField,
    pub embedding: Embedding,
    pub eigenvalue: Gf,
    /// Right eigenvectors `M v = lambda v`, as rows.
    pub basis: Matrix<FiniteField>,
}

#[derive(Clone, Debug)]
pub struct EigenFactor {
    /// Monic irreducible factor over the base field, constant term first.
    pub factor: Vec<Gf>,
    pub multiplicity: u32,
    /// `None` when the factor degree exceeds the requested cap.
    pub eigen: Option<Eigenspace>,
}

impl EigenFactor {
    pub fn degree(&self) -> usize {
        self.factor.len() - 1
    }
}

/// Factors the characteristic polynomial of `m` over its base field and,
/// for each factor of degree at most `up_to_degree`, computes the eigenspace
/// of one root over the corresponding extension.
pub fn charpoly_and_eigenspaces(m: &Matrix<FiniteField>, up_to_degree: usize) -> Result<Vec<EigenFactor>> {
    let base = m.field();
    let cp = m.charpoly()?;
    let mut out = Vec::new();
    for (g, mult) in poly::factor(base, &cp) {
        let e = g.len() - 1;
        let eigen = if e <= up_to_degree {
            let ext = FiniteField::new(base.p(), base.degree() * e as u32)?;
            let emb = Embedding::new(base, &ext)?;
            let gk = emb.apply_poly(&g);
            let lambda = *poly::roots(&ext, &gk)
                .first()
                .ok_or_else(|| Error::Internal(String::from("irreducible factor has no root in its splitting field")))?;
            let mk = emb.apply_matrix(m);
            let basis = mk.sub_scalar(&lambda).kernel();
            Some(Eigenspace { field: ext, embedding: emb, eigenvalue: lambda, basis })
        } else {
            None
        };
        out.push(EigenFactor { factor: g, multiplicity: mult, eigen });
    }
    Ok(out)
}
