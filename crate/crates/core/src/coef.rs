//! Coefficient modules with a right action of 2x2 matrices.
//!
//! Elements are row vectors and `act(g)` has the image of the i-th basis
//! vector as its i-th row, so `act(g) act(h) = act(gh)`.
//!
//! * `Symm(k)`: binary forms of degree `k`, basis `X^i Y^(k-i)`, with
//!   `P|g = P(aX + bY, cX + dY)`.
//! * `Induced(q)`: functions on P^1(F_q), basis of delta functions, with
//!   `delta_y | g = delta_(y g)` for row vectors `y`.
//! * `TwistedTensor`: tensor product of Frobenius twists of `Symm(p-1)`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::cong::Mat2;
use crate::error::{Error, Result};
use crate::gfq::int::prime_power;
use crate::gfq::{Field, FiniteField, Matrix};

#[derive(Clone, Debug)]
pub enum CoefKind<F: Field> {
    Trivial,
    Symm(u32),
    /// Points of P^1(F_q) are `(0:1)` then `(1:b)` for `b` in `subfield`.
    Induced { q: u64, subfield: Vec<F::Elem> },
    TwistedTensor { exponents: Vec<u32> },
    DirectSum(Vec<CoefModule<F>>),
    /// `A (x) B`, basis `a_i (x) b_j` at index `i * dim(B) + j`.
    Tensor(alloc::boxed::Box<CoefModule<F>>, alloc::boxed::Box<CoefModule<F>>),
}

#[derive(Clone, Debug)]
pub struct CoefModule<F: Field> {
    field: F,
    kind: CoefKind<F>,
    dim: usize,
}

/// `[a, b, c, d]` over the field.
pub type FieldMat2<E> = [E; 4];

impl<F: Field> CoefModule<F> {
    pub fn trivial(field: &F) -> Self {
        CoefModule { field: field.clone(), kind: CoefKind::Trivial, dim: 1 }
    }

    pub fn symm(field: &F, k: u32) -> Self {
        CoefModule { field: field.clone(), kind: CoefKind::Symm(k), dim: k as usize + 1 }
    }

    pub fn direct_sum(parts: &[CoefModule<F>]) -> Result<Self> {
        let field = parts
            .first()
            .ok_or_else(|| Error::InvalidModule(String::from("empty direct sum")))?
            .field
            .clone();
        if parts.iter().any(|m| !m.field.same_field(&field)) {
            return Err(Error::FieldMismatch);
        }
        let dim = parts.iter().map(|m| m.dim).sum();
        Ok(CoefModule { field, kind: CoefKind::DirectSum(parts.to_vec()), dim })
    }

    pub fn tensor(a: &CoefModule<F>, b: &CoefModule<F>) -> Result<Self> {
        if !a.field.same_field(&b.field) {
            return Err(Error::FieldMismatch);
        }
        Ok(CoefModule {
            field: a.field.clone(),
            dim: a.dim * b.dim,
            kind: CoefKind::Tensor(alloc::boxed::Box::new(a.clone()), alloc::boxed::Box::new(b.clone())),
        })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn kind(&self) -> &CoefKind<F> {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Short stable name, used in cache keys and seeds.
    pub fn descriptor(&self) -> String {
        match &self.kind {
            CoefKind::Trivial => String::from("triv"),
            CoefKind::Symm(k) => format!("symm({k})"),
            CoefKind::Induced { q, .. } => format!("ind({q})"),
            CoefKind::TwistedTensor { exponents } => format!("tw{exponents:?}"),
            CoefKind::DirectSum(parts) => {
                let names: Vec<String> = parts.iter().map(|m| m.descriptor()).collect();
                format!("sum[{}]", names.join(","))
            }
            CoefKind::Tensor(a, b) => format!("{}*{}", a.descriptor(), b.descriptor()),
        }
    }

    pub fn basis_labels(&self) -> Vec<String> {
        match &self.kind {
            CoefKind::Trivial => vec![String::from("1")],
            CoefKind::Symm(k) => (0..=*k).map(|i| format!("X^{i}Y^{}", k - i)).collect(),
            CoefKind::Induced { subfield, .. } => {
                let mut v = vec![String::from("(0:1)")];
                v.extend(subfield.iter().map(|b| format!("(1:{b:?})")));
                v
            }
            CoefKind::TwistedTensor { .. } | CoefKind::DirectSum(_) | CoefKind::Tensor(..) => (0..self.dim).map(|i| format!("e{i}")).collect(),
        }
    }

    pub fn act_int(&self, g: &Mat2) -> Result<Matrix<F>> {
        let f = &self.field;
        self.act(&[f.from_i64(g[0]), f.from_i64(g[1]), f.from_i64(g[2]), f.from_i64(g[3])])
    }

    /// Action of an invertible matrix over the field.
    pub fn act(&self, g: &FieldMat2<F::Elem>) -> Result<Matrix<F>> {
        let f = &self.field;
        let det = f.sub(&f.mul(&g[0], &g[3]), &f.mul(&g[1], &g[2]));
        if f.is_zero(&det) {
            return Err(Error::SingularAction);
        }
        Ok(self.act_unchecked(g))
    }

    /// Action without the determinant check. For `Trivial` and `Symm` this is
    /// polynomial substitution, defined for every matrix.
    pub fn act_unchecked(&self, g: &FieldMat2<F::Elem>) -> Matrix<F> {
        let f = &self.field;
        match &self.kind {
            CoefKind::Trivial => Matrix::identity(f, 1),
            CoefKind::Symm(k) => symm_matrix(f, *k, g),
            CoefKind::Induced { subfield, .. } => {
                let n = self.dim;
                let mut m = Matrix::zeros(f, n, n);
                for i in 0..n {
                    let (x, y) = induced_point(f, subfield, i);
                    let x2 = f.add(&f.mul(&x, &g[0]), &f.mul(&y, &g[2]));
                    let y2 = f.add(&f.mul(&x, &g[1]), &f.mul(&y, &g[3]));
                    let j = induced_index(f, subfield, &x2, &y2).expect("projective image of a point");
                    m.set(i, j, f.one());
                }
                m
            }
            CoefKind::TwistedTensor { exponents } => {
                let p = (f.characteristic() as usize) - 1;
                let mut acc = Matrix::identity(f, 1);
                for &e in exponents {
                    let ge = [
                        f.frobenius_power(&g[0], e),
                        f.frobenius_power(&g[1], e),
                        f.frobenius_power(&g[2], e),
                        f.frobenius_power(&g[3], e),
                    ];
                    acc = kron(&acc, &symm_matrix(f, p as u32, &ge));
                }
                acc
            }
            CoefKind::DirectSum(parts) => {
                let mut acc = Matrix::zeros(f, 0, 0);
                for m in parts {
                    acc = acc.block_diag(&m.act_unchecked(g)).expect("same field");
                }
                acc
            }
            CoefKind::Tensor(a, b) => kron(&a.act_unchecked(g), &b.act_unchecked(g)),
        }
    }

    /// Action of an integer matrix, allowing determinant divisible by the
    /// characteristic for `Trivial` and `Symm`.
    pub fn act_int_unchecked(&self, g: &Mat2) -> Result<Matrix<F>> {
        let f = &self.field;
        let gf = [f.from_i64(g[0]), f.from_i64(g[1]), f.from_i64(g[2]), f.from_i64(g[3])];
        match self.kind {
            CoefKind::Trivial | CoefKind::Symm(_) => Ok(self.act_unchecked(&gf)),
            _ => self.act(&gf),
        }
    }
}

/// Matrix of `P -> P(aX + bY, cX + dY)` on `Symm(k)`.
pub fn symm_matrix<F: Field>(f: &F, k: u32, g: &FieldMat2<F::Elem>) -> Matrix<F> {
    let k = k as usize;
    // powers of (aX + bY) and (cX + dY), coefficient of X^j at index j
    let pow_lin = |u: &F::Elem, v: &F::Elem| -> Vec<Vec<F::Elem>> {
        let mut out = vec![vec![f.one()]];
        for n in 1..=k {
            let prev = &out[n - 1];
            let mut next = vec![f.zero(); n + 1];
            for (j, c) in prev.iter().enumerate() {
                next[j + 1] = f.add(&next[j + 1], &f.mul(c, u));
                next[j] = f.add(&next[j], &f.mul(c, v));
            }
            out.push(next);
        }
        out
    };
    let ab = pow_lin(&g[0], &g[1]);
    let cd = pow_lin(&g[2], &g[3]);
    let mut m = Matrix::zeros(f, k + 1, k + 1);
    for i in 0..=k {
        let (x, y) = (&ab[i], &cd[k - i]);
        for (s, xs) in x.iter().enumerate() {
            for (t, yt) in y.iter().enumerate() {
                let cur = m.get(i, s + t).clone();
                m.set(i, s + t, f.mul_add(xs, yt, &cur));
            }
        }
    }
    m
}

pub fn kron<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    let f = a.field();
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    Matrix::from_fn(f, ar * br, ac * bc, |i, j| f.mul(a.get(i / br, j / bc), b.get(i % br, j % bc)))
}

fn induced_point<F: Field>(f: &F, sub: &[F::Elem], i: usize) -> (F::Elem, F::Elem) {
    if i == 0 {
        (f.zero(), f.one())
    } else {
        (f.one(), sub[i - 1].clone())
    }
}

fn induced_index<F: Field>(f: &F, sub: &[F::Elem], x: &F::Elem, y: &F::Elem) -> Option<usize> {
    if f.is_zero(x) {
        if f.is_zero(y) {
            None
        } else {
            Some(0)
        }
    } else {
        let b = f.div(y, x)?;
        sub.binary_search(&b).ok().map(|j| j + 1)
    }
}

impl CoefModule<FiniteField> {
    /// `F[P^1(F_q)]` for `F_q` inside `F`.
    pub fn induced(field: &FiniteField, q: u64) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or_else(|| Error::InvalidModule(format!("{q} is not a prime power")))?;
        if p != field.p() || field.degree() % e != 0 {
            return Err(Error::InvalidModule(format!("F_{q} is not a subfield of F_{}", field.order())));
        }
        let subfield: Vec<_> = field.elements().filter(|x| field.pow(x, q as u128) == *x).collect();
        Ok(CoefModule { field: field.clone(), dim: subfield.len() + 1, kind: CoefKind::Induced { q, subfield } })
    }

    /// Tensor product of `Symm(p-1)` twisted by `x -> x^(p^e)` for each `e`.
    pub fn twisted_tensor(field: &FiniteField, exponents: &[u32]) -> Result<Self> {
        let p = field.p();
        let e = field.degree();
        let mut seen: Vec<u32> = exponents.iter().map(|x| x % e).collect();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != exponents.len() || exponents.is_empty() {
            return Err(Error::InvalidModule(format!("exponents {exponents:?} not distinct mod {e}")));
        }
        let dim = (p as usize).pow(exponents.len() as u32);
        Ok(CoefModule { field: field.clone(), kind: CoefKind::TwistedTensor { exponents: exponents.to_vec() }, dim })
    }
}

/// Evaluation at the points of P^1(F_q) of an induced module, as an
/// F_q-valued vector (used by the intertwiner).
pub fn induced_points(m: &CoefModule<FiniteField>) -> Result<Vec<(crate::gfq::Gf, crate::gfq::Gf)>> {
    match m.kind() {
        CoefKind::Induced { subfield, .. } => Ok((0..m.dim()).map(|i| induced_point(m.field(), subfield, i)).collect()),
        _ => Err(Error::InvalidModule(String::from("not an induced module"))),
    }
}

/// Equivariant splitting of an induced module into constants and zero-sum
/// functions.
#[derive(Clone, Debug)]
pub struct Splitting {
    pub parent: CoefModule<FiniteField>,
    pub proj_const: Matrix<FiniteField>,
    pub proj_zero_sum: Matrix<FiniteField>,
    /// `1 x n`: the constant function 1.
    pub incl_const: Matrix<FiniteField>,
    /// `(n-1) x n`: basis `delta_i - delta_0` of the zero-sum functions.
    pub incl_zero_sum: Matrix<FiniteField>,
}

pub fn split_induced(m: &CoefModule<FiniteField>) -> Result<Splitting> {
    if !matches!(m.kind(), CoefKind::Induced { .. }) {
        return Err(Error::InvalidModule(String::from("split_induced needs an induced module")));
    }
    let f = m.field();
    let n = m.dim();
    let inv = f.inv(&f.from_i64(n as i64)).ok_or(Error::NotInvertible)?;
    let proj_const = Matrix::from_fn(f, n, n, |_, _| inv);
    let proj_zero_sum = Matrix::identity(f, n).sub(&proj_const)?;
    let incl_const = Matrix::from_fn(f, 1, n, |_, _| f.one());
    let incl_zero_sum = Matrix::from_fn(f, n - 1, n, |i, j| {
        if j == i + 1 {
            f.one()
        } else if j == 0 {
            f.neg(&f.one())
        } else {
            f.zero()
        }
    });
    Ok(Splitting { parent: m.clone(), proj_const, proj_zero_sum, incl_const, incl_zero_sum })
}

/// `ev : Symm^(p-1) -> F_p[P^1(F_p)]`, `ev(P)(c : d) = P(-d, c)`, as a
/// `p x (p+1)` matrix in the row convention.
///
/// With `J = [[0, -1], [1, 0]]` one has `g J = det(g) J g^(-T)`, and
/// `det(g)^(p-1) = 1`, so `ev(P|g) = ev(P)|g` for every integral `g` with
/// determinant prime to `p`.
pub fn ev_intertwiner(field: &FiniteField) -> Result<Matrix<FiniteField>> {
    let p = field.p();
    if p < 5 {
        return Err(Error::UnsupportedCharacteristic(p));
    }
    let ind = CoefModule::induced(field, p)?;
    let pts = induced_points(&ind)?;
    let k = (p - 1) as usize;
    let f = field;
    Ok(Matrix::from_fn(f, k + 1, pts.len(), |i, j| {
        let (c, d) = pts[j];
        // X^i Y^(k-i) at (X, Y) = (-d, c)
        f.mul(&f.pow(&f.neg(&d), i as u128), &f.pow(&c, (k - i) as u128))
    }))
}

/// The isomorphism `triv + Symm^(p-1) -> F_p[P^1(F_p)]`: the constant
/// function stacked over [`ev_intertwiner`].
pub fn splitting_iso(field: &FiniteField) -> Result<Matrix<FiniteField>> {
    let ind = CoefModule::induced(field, field.p())?;
    let s = split_induced(&ind)?;
    s.incl_const.vstack(&ev_intertwiner(field)?)
}
