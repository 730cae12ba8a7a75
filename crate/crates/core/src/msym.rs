//! Manin-symbol spaces of weight `k` for `Gamma_H(N)` over an exact field.
//!
//! A generator `[v, x]` pairs a coefficient basis vector `v` with a coset
//! `x` of the group in SL_2(Z); it stands for the modular symbol
//! `g (P {0, inf})` where `x = Gamma g`. Matrices act on the right of both
//! parts, `[v, x] g = [v rho(g), x g]`, and the relations are
//!
//! ```text
//! x + x sigma = 0,   x + x tau + x tau^2 = 0,   x = x (-I)
//! ```
//!
//! with `sigma = [[0,-1],[1,0]]`, `tau = [[0,-1],[1,-1]]`.
//!
//! Elements of a space are row vectors in the quotient basis and every
//! operator acts on the right: `v -> v T`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::coef::{CoefKind, CoefModule};
use crate::cong::{self, adj, mat_mul, Cosets, Mat2, SubgroupSpec, MINUS_I, SIGMA, T, TAU};
use crate::error::{Error, Result};
use crate::gfq::int::{gcd, inv_mod, is_prime};
use crate::gfq::{Field, FiniteField, Matrix, Subspace};

/// Two families of Heilbronn matrices for `T_r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HeilbronnFamily {
    /// `{[[a, b], [c, d]] : a > b >= 0, d > c >= 0, ad - bc = r}`.
    Merel,
    /// Cremona's continued-fraction family.
    Cremona,
}

/// Merel's set `X_r`. Since `r = ad - bc >= a + d - 1`, both `a` and `d` are
/// at most `r`.
pub fn heilbronn_merel(r: u64) -> Vec<Mat2> {
    let n = r as i64;
    let mut out = Vec::new();
    for a in 1..=n {
        for d in 1..=(n + 1 - a) {
            let bc = a * d - n;
            if bc < 0 {
                continue;
            }
            if bc == 0 {
                for c in 0..d {
                    out.push([a, 0, c, d]);
                }
                for b in 1..a {
                    out.push([a, b, 0, d]);
                }
            } else {
                for c in 1..d {
                    if bc % c == 0 && bc / c < a {
                        out.push([a, bc / c, c, d]);
                    }
                }
            }
        }
    }
    out
}

/// Cremona's family for a prime `r`.
pub fn heilbronn_cremona(r: u64) -> Vec<Mat2> {
    let p = r as i64;
    if p == 2 {
        return vec![[1, 0, 0, 2], [2, 0, 0, 1], [2, 1, 0, 1], [1, 0, 1, 2]];
    }
    let mut out = vec![[1, 0, 0, p]];
    let half = (p - 1) / 2;
    for r in -half..=half {
        let (mut x1, mut x2, mut y1, mut y2) = (p, -r, 0i64, 1i64);
        let (mut a, mut b) = (-p, r);
        out.push([x1, x2, y1, y2]);
        while b != 0 {
            let q = round_div(a, b);
            let c = a - b * q;
            a = -b;
            b = c;
            let x3 = q * x2 - x1;
            x1 = x2;
            x2 = x3;
            let y3 = q * y2 - y1;
            y1 = y2;
            y2 = y3;
            out.push([x1, x2, y1, y2]);
        }
    }
    out
}

/// `a / b` rounded to the nearest integer, halves away from zero.
fn round_div(a: i64, b: i64) -> i64 {
    let (n, d) = if b < 0 { (-a, -b) } else { (a, b) };
    let q = n.div_euclid(d);
    let r = n.rem_euclid(d);
    if 2 * r > d || (2 * r == d && n > 0) {
        q + 1
    } else {
        q
    }
}

/// Key under which an operator matrix may be persisted.
pub trait OperatorStore<F: Field> {
    fn load(&self, key: &str) -> Option<Matrix<F>>;
    fn store(&self, key: &str, m: &Matrix<F>);
}

/// Store that never hits.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoStore;

impl<F: Field> OperatorStore<F> for NoStore {
    fn load(&self, _key: &str) -> Option<Matrix<F>> {
        None
    }
    fn store(&self, _key: &str, _m: &Matrix<F>) {}
}

#[derive(Clone, Debug)]
pub struct ManinSpace<F: Field> {
    spec: SubgroupSpec,
    weight: u32,
    coef: CoefModule<F>,
    cosets: Cosets,
    /// Generator `(i, x)` sits at row `x * coef.dim() + i`; each row is the
    /// generator in the quotient basis.
    expr: Matrix<F>,
    basis_gens: Vec<usize>,
}

/// Builds a space; refuses characteristics 2 and 3.
pub fn build_space<F: Field>(spec: &SubgroupSpec, k: u32, coef: &CoefModule<F>) -> Result<ManinSpace<F>> {
    ManinSpace::new(spec, k, coef)
}

impl<F: Field> ManinSpace<F> {
    pub fn new(spec: &SubgroupSpec, k: u32, coef: &CoefModule<F>) -> Result<Self> {
        let field = coef.field();
        let ch = field.characteristic();
        if ch == 2 || ch == 3 {
            return Err(Error::UnsupportedCharacteristic(ch));
        }
        if k < 2 {
            return Err(Error::InvalidWeight(k));
        }
        match coef.kind() {
            CoefKind::Symm(j) if *j + 2 != k => {
                return Err(Error::InvalidModule(format!("symm({j}) does not match weight {k}")))
            }
            CoefKind::Symm(_) => {}
            CoefKind::Tensor(a, _) => {
                if let CoefKind::Symm(j) = a.kind() {
                    if *j + 2 != k {
                        return Err(Error::InvalidModule(format!("symm({j}) does not match weight {k}")));
                    }
                } else if k != 2 {
                    return Err(Error::InvalidModule(format!("{} at weight {k}", coef.descriptor())));
                }
            }
            _ if k != 2 => return Err(Error::InvalidModule(format!("{} at weight {k}", coef.descriptor()))),
            _ => {}
        }
        let cosets = Cosets::new(spec);
        let m = coef.dim();
        let ngens = m * cosets.len();
        let rho_s = coef.act_int(&SIGMA)?;
        let rho_t = coef.act_int(&TAU)?;
        let rho_t2 = coef.act_int(&mat_mul(&TAU, &TAU))?;
        let rho_m = coef.act_int(&MINUS_I)?;
        let one = field.one();
        let minus = field.neg(&one);
        let mut two_term = Vec::with_capacity(2 * ngens);
        let mut three_term = Vec::with_capacity(ngens);
        for x in 0..cosets.len() {
            let xs = cosets.act(x, &SIGMA).expect("coset action");
            let xt = cosets.act(x, &TAU).expect("coset action");
            let xt2 = cosets.act(xt, &TAU).expect("coset action");
            let xm = cosets.act(x, &MINUS_I).expect("coset action");
            for i in 0..m {
                let g = x * m + i;
                let mut r = vec![(g, one.clone())];
                push_sparse(field, &mut r, rho_s.row(i), xs * m, &one);
                two_term.push(r);
                let mut r = vec![(g, one.clone())];
                push_sparse(field, &mut r, rho_m.row(i), xm * m, &minus);
                two_term.push(r);
                let mut r = vec![(g, one.clone())];
                push_sparse(field, &mut r, rho_t.row(i), xt * m, &one);
                push_sparse(field, &mut r, rho_t2.row(i), xt2 * m, &one);
                three_term.push(r);
            }
        }
        two_term.extend(three_term);
        let (expr, basis_gens) = quotient(field, ngens, two_term);
        Ok(ManinSpace { spec: spec.clone(), weight: k, coef: coef.clone(), cosets, expr, basis_gens })
    }

    /// Weight-`k` space with `Symm(k-2)` coefficients (trivial for `k = 2`).
    pub fn weight_k(spec: &SubgroupSpec, k: u32, field: &F) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidWeight(k));
        }
        let coef = if k == 2 { CoefModule::trivial(field) } else { CoefModule::symm(field, k - 2) };
        Self::new(spec, k, &coef)
    }

    pub fn dim(&self) -> usize {
        self.basis_gens.len()
    }

    pub fn ngens(&self) -> usize {
        self.expr.rows()
    }

    pub fn field(&self) -> &F {
        self.coef.field()
    }

    pub fn spec(&self) -> &SubgroupSpec {
        &self.spec
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn coef(&self) -> &CoefModule<F> {
        &self.coef
    }

    pub fn cosets(&self) -> &Cosets {
        &self.cosets
    }

    pub fn level(&self) -> u64 {
        self.cosets.modulus()
    }

    /// `(coefficient index, coset)` of the j-th basis vector.
    pub fn basis_symbol(&self, j: usize) -> (usize, usize) {
        let g = self.basis_gens[j];
        (g % self.coef.dim(), g / self.coef.dim())
    }

    /// Row `g` of the generator-to-basis map.
    pub fn generator(&self, g: usize) -> &[F::Elem] {
        self.expr.row(g)
    }

    /// Canonical description for cache keys.
    pub fn descriptor(&self) -> String {
        format!("{}|k={}|{}|{}", self.spec.descriptor(), self.weight, self.coef.descriptor(), self.field().descriptor())
    }

    /// The quotient element `[v, x]` for a coefficient vector `v`.
    pub fn symbol(&self, v: &[F::Elem], x: usize) -> Vec<F::Elem> {
        let mut acc = vec![self.field().zero(); self.dim()];
        self.add_symbol(&mut acc, v, x, &self.field().one());
        acc
    }

    /// `acc += s [v, x]` in quotient coordinates.
    fn add_symbol(&self, acc: &mut [F::Elem], v: &[F::Elem], x: usize, s: &F::Elem) {
        let f = self.field();
        let m = self.coef.dim();
        for (i, c) in v.iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            let cs = f.mul(c, s);
            for (a, e) in acc.iter_mut().zip(self.expr.row(x * m + i)) {
                if !f.is_zero(e) {
                    *a = f.mul_add(&cs, e, a);
                }
            }
        }
    }

    fn operator_from(&self, rows: Vec<Vec<F::Elem>>, cols: usize) -> Result<Matrix<F>> {
        Matrix::from_rows(self.field(), cols, &rows)
    }

    /// `sum_h [v rho(h), x h]` on every basis vector. Coset images that are
    /// not primitive are dropped.
    fn apply_family(&self, mats: &[Mat2], allow_singular: bool) -> Result<Matrix<F>> {
        let acts: Vec<Matrix<F>> = mats
            .iter()
            .map(|h| if allow_singular { self.coef.act_int_unchecked(h) } else { self.coef.act_int(h) })
            .collect::<Result<_>>()?;
        let one = self.field().one();
        let mut rows = Vec::with_capacity(self.dim());
        for j in 0..self.dim() {
            let (i, x) = self.basis_symbol(j);
            let mut acc = vec![self.field().zero(); self.dim()];
            for (h, a) in mats.iter().zip(&acts) {
                if let Some(y) = self.cosets.act(x, h) {
                    self.add_symbol(&mut acc, a.row(i), y, &one);
                }
            }
            rows.push(acc);
        }
        self.operator_from(rows, self.dim())
    }

    /// `T_r` for a prime `r` prime to the level and the characteristic.
    pub fn hecke_operator(&self, r: u64) -> Result<Matrix<F>> {
        self.hecke_with_family(r, HeilbronnFamily::Merel)
    }

    pub fn hecke_with_family(&self, r: u64, family: HeilbronnFamily) -> Result<Matrix<F>> {
        let ch = self.field().characteristic();
        if ch != 0 && r % ch == 0 {
            return Err(Error::HeckeIndex { r, reason: "divides the characteristic" });
        }
        self.hecke_unchecked(r, family)
    }

    /// `T_r` allowing `r` equal to the characteristic (used for `a_p` in
    /// characteristic `p`, where only trivial and symmetric-power
    /// coefficients are defined).
    pub fn hecke_unchecked(&self, r: u64, family: HeilbronnFamily) -> Result<Matrix<F>> {
        if !is_prime(r) {
            return Err(Error::HeckeIndex { r, reason: "not prime" });
        }
        if self.level() % r == 0 {
            return Err(Error::HeckeIndex { r, reason: "divides the level" });
        }
        let mats = match family {
            HeilbronnFamily::Merel => heilbronn_merel(r),
            HeilbronnFamily::Cremona => heilbronn_cremona(r),
        };
        self.apply_family(&mats, true)
    }

    /// Cached `T_r` through an [`OperatorStore`].
    pub fn hecke_cached(&self, r: u64, store: &dyn OperatorStore<F>) -> Result<Matrix<F>> {
        let key = format!("{}|T{r}", self.descriptor());
        if let Some(m) = store.load(&key) {
            if m.shape() == (self.dim(), self.dim()) {
                return Ok(m);
            }
        }
        let m = self.hecke_operator(r)?;
        store.store(&key, &m);
        Ok(m)
    }

    /// Diamond operator `<d>`: `[v, (c, d')] -> [v, (dc, dd')]`.
    pub fn diamond_operator(&self, d: u64) -> Result<Matrix<F>> {
        let n = self.level();
        let d = d % n.max(1);
        if inv_mod(d as i64, n).is_none() {
            return Err(Error::NotAUnit { value: d as i64, modulus: n });
        }
        let f = self.field();
        let mut rows = Vec::with_capacity(self.dim());
        let mut e = vec![f.zero(); self.coef.dim()];
        for j in 0..self.dim() {
            let (i, x) = self.basis_symbol(j);
            let (c, dd) = self.cosets.rep(x);
            let y = self.cosets.index((c * d) as i64, (dd * d) as i64).expect("unit scaling");
            e[i] = f.one();
            rows.push(self.symbol(&e, y));
            e[i] = f.zero();
        }
        self.operator_from(rows, self.dim())
    }

    /// The involution induced by `eta = [[-1, 0], [0, 1]]`.
    pub fn star_involution(&self) -> Result<Matrix<F>> {
        self.apply_family(&[[-1, 0, 0, 1]], false)
    }

    /// Boundary map. For trivial and `Symm(k-2)` coefficients a boundary
    /// symbol at the cusp `g inf` is evaluation at the column `g e_1`:
    /// `d[P, x] = P(1, 0) e_x - P(0, 1) e_(x sigma)`, with `e_(xT) = e_x` and
    /// `e_(x(-I)) = (-1)^k e_x`. The kernel is Hecke-stable in every
    /// characteristic and matches the characteristic-zero cuspidal dimension
    /// when `k - 2 >= p`, where the coinvariant version is larger. Other
    /// coefficients use coinvariants: `E(v rho(T), xT) = E(v, x)`,
    /// `E(v rho(-I), x(-I)) = E(v, x)`.
    pub fn boundary_map(&self) -> Result<Matrix<F>> {
        match self.coef.kind() {
            CoefKind::Trivial | CoefKind::Symm(_) => self.boundary_by_evaluation(),
            _ => self.boundary_by_coinvariants(),
        }
    }

    fn boundary_by_evaluation(&self) -> Result<Matrix<F>> {
        let f = self.field();
        let one = f.one();
        let ncos = self.cosets.len();
        let sign = if self.weight % 2 == 0 { one.clone() } else { f.neg(&one) };
        let mut rel = Vec::with_capacity(2 * ncos);
        for x in 0..ncos {
            let xt = self.cosets.act(x, &T).expect("coset action");
            let xm = self.cosets.act(x, &MINUS_I).expect("coset action");
            rel.push(vec![(x, one.clone()), (xt, f.neg(&one))]);
            rel.push(vec![(x, one.clone()), (xm, f.neg(&sign))]);
        }
        let (bexpr, bbasis) = quotient(f, ncos, rel);
        let top = self.coef.dim() - 1;
        let mut rows = Vec::with_capacity(self.dim());
        for j in 0..self.dim() {
            let (i, x) = self.basis_symbol(j);
            let mut acc = vec![f.zero(); bbasis.len()];
            if i == top {
                for (a, e) in acc.iter_mut().zip(bexpr.row(x)) {
                    *a = f.add(a, e);
                }
            }
            if i == 0 {
                let xs = self.cosets.act(x, &SIGMA).expect("coset action");
                for (a, e) in acc.iter_mut().zip(bexpr.row(xs)) {
                    *a = f.sub(a, e);
                }
            }
            rows.push(acc);
        }
        Matrix::from_rows(f, bbasis.len(), &rows)
    }

    fn boundary_by_coinvariants(&self) -> Result<Matrix<F>> {
        let f = self.field();
        let m = self.coef.dim();
        let ngens = self.ngens();
        let rho_t = self.coef.act_int(&T)?;
        let rho_m = self.coef.act_int(&MINUS_I)?;
        let rho_s = self.coef.act_int(&SIGMA)?;
        let one = f.one();
        let minus = f.neg(&one);
        let mut rel = Vec::with_capacity(2 * ngens);
        for x in 0..self.cosets.len() {
            let xt = self.cosets.act(x, &T).expect("coset action");
            let xm = self.cosets.act(x, &MINUS_I).expect("coset action");
            for i in 0..m {
                for (rho, y) in [(&rho_t, xt), (&rho_m, xm)] {
                    let mut r = vec![(x * m + i, one.clone())];
                    push_sparse(f, &mut r, rho.row(i), y * m, &minus);
                    rel.push(r);
                }
            }
        }
        let (bexpr, bbasis) = quotient(f, ngens, rel);
        let nb = bbasis.len();
        let mut rows = Vec::with_capacity(self.dim());
        for j in 0..self.dim() {
            let (i, x) = self.basis_symbol(j);
            let xs = self.cosets.act(x, &SIGMA).expect("coset action");
            let mut acc: Vec<F::Elem> = bexpr.row(x * m + i).to_vec();
            for (t, c) in rho_s.row(i).iter().enumerate() {
                if f.is_zero(c) {
                    continue;
                }
                for (a, e) in acc.iter_mut().zip(bexpr.row(xs * m + t)) {
                    *a = f.sub(a, &f.mul(c, e));
                }
            }
            rows.push(acc);
        }
        Matrix::from_rows(f, nb, &rows)
    }

    /// Kernel of the boundary map.
    pub fn cuspidal_subspace(&self) -> Result<Subspace<F>> {
        let b = self.boundary_map()?;
        Subspace::full(self.field(), self.dim()).kernel_of(&b)
    }

    /// `[v, x] -> [v phi, x]` for a module map `phi` (rows: source basis)
    /// into a space with the same group and weight.
    pub fn module_map(&self, target: &ManinSpace<F>, phi: &Matrix<F>) -> Result<Matrix<F>> {
        if self.cosets.reps() != target.cosets.reps() {
            return Err(Error::IncompatibleSpaces(String::from("different groups")));
        }
        if phi.shape() != (self.coef.dim(), target.coef.dim()) {
            return Err(Error::ShapeMismatch { expected: (self.coef.dim(), target.coef.dim()), found: phi.shape() });
        }
        let one = self.field().one();
        let mut rows = Vec::with_capacity(self.dim());
        for j in 0..self.dim() {
            let (i, x) = self.basis_symbol(j);
            let mut acc = vec![self.field().zero(); target.dim()];
            target.add_symbol(&mut acc, phi.row(i), x, &one);
            rows.push(acc);
        }
        Matrix::from_rows(self.field(), target.dim(), &rows)
    }
}

/// `r[offset + t] += s * v[t]`.
/// Quotient of `F^n` by the row span of `rel`: returns the `n x dim` matrix
/// expressing each coordinate vector in the basis of free columns, and the
/// free columns.
/// Sparse row `s * w` placed at `offset`, appended to `r`.
fn push_sparse<F: Field>(f: &F, r: &mut Vec<(usize, F::Elem)>, w: &[F::Elem], offset: usize, s: &F::Elem) {
    for (t, c) in w.iter().enumerate() {
        if !f.is_zero(c) {
            r.push((offset + t, f.mul(c, s)));
        }
    }
}

/// Eliminates sparse relations over `n` generators. Returns the expression
/// of every generator in the free generators, and the free generators.
fn quotient<F: Field>(f: &F, n: usize, rels: Vec<Vec<(usize, F::Elem)>>) -> (Matrix<F>, Vec<usize>) {
    // pivot rows: pivot is the smallest column, coefficient 1
    let mut pivot: Vec<Option<Vec<(usize, F::Elem)>>> = vec![None; n];
    let mut dense = vec![f.zero(); n];
    let mut touched: Vec<usize> = Vec::new();
    let mut mark = vec![false; n];
    for rel in rels {
        for (c, v) in rel {
            dense[c] = f.add(&dense[c], &v);
            if !mark[c] {
                mark[c] = true;
                touched.push(c);
            }
        }
        // ascending scan; subtraction only touches columns above the pivot
        let mut heap: alloc::collections::BinaryHeap<core::cmp::Reverse<usize>> = touched.iter().map(|&c| core::cmp::Reverse(c)).collect();
        let mut lead = None;
        while let Some(core::cmp::Reverse(c)) = heap.pop() {
            if f.is_zero(&dense[c]) {
                continue;
            }
            match &pivot[c] {
                Some(row) => {
                    let k = dense[c].clone();
                    for (cc, v) in row {
                        dense[*cc] = f.sub(&dense[*cc], &f.mul(&k, v));
                        if !mark[*cc] {
                            mark[*cc] = true;
                            touched.push(*cc);
                            heap.push(core::cmp::Reverse(*cc));
                        }
                    }
                }
                None => {
                    if lead.is_none() {
                        lead = Some(c);
                    }
                }
            }
        }
        if let Some(c0) = lead {
            let inv = f.inv(&dense[c0]).expect("nonzero lead");
            let mut row: Vec<(usize, F::Elem)> =
                touched.iter().filter(|&&c| !f.is_zero(&dense[c])).map(|&c| (c, f.mul(&dense[c], &inv))).collect();
            row.sort_by_key(|e| e.0);
            pivot[c0] = Some(row);
        }
        for &c in &touched {
            dense[c] = f.zero();
            mark[c] = false;
        }
        touched.clear();
    }
    // back substitution, highest pivot first
    for c in (0..n).rev() {
        let Some(row) = pivot[c].take() else { continue };
        for (cc, v) in row.iter().filter(|e| e.0 != c) {
            match &pivot[*cc] {
                None => dense[*cc] = f.add(&dense[*cc], v),
                Some(prow) => {
                    for (c2, w) in prow.iter().filter(|e| e.0 != *cc) {
                        dense[*c2] = f.sub(&dense[*c2], &f.mul(v, w));
                    }
                }
            }
        }
        let mut reduced: Vec<(usize, F::Elem)> = vec![(c, f.one())];
        for (c2, v) in dense.iter_mut().enumerate().skip(c + 1) {
            if !f.is_zero(v) {
                reduced.push((c2, v.clone()));
                *v = f.zero();
            }
        }
        pivot[c] = Some(reduced);
    }
    let free: Vec<usize> = (0..n).filter(|&c| pivot[c].is_none()).collect();
    let mut pos = vec![usize::MAX; n];
    for (t, &c) in free.iter().enumerate() {
        pos[c] = t;
    }
    let mut expr = Matrix::zeros(f, n, free.len());
    for c in 0..n {
        match &pivot[c] {
            None => expr.set(c, pos[c], f.one()),
            Some(row) => {
                for (cc, v) in row {
                    if *cc != c {
                        expr.set(c, pos[*cc], f.neg(v));
                    }
                }
            }
        }
    }
    (expr, free)
}

fn check_level_pair<F: Field>(big: &ManinSpace<F>, small: &ManinSpace<F>) -> Result<u64> {
    let (m, n) = (big.level(), small.level());
    if m % n != 0 || !is_prime(m / n) || n % (m / n) == 0 {
        return Err(Error::IncompatibleSpaces(format!("levels {m} and {n} are not N p and N")));
    }
    if big.weight != small.weight || big.coef.descriptor() != small.coef.descriptor() {
        return Err(Error::IncompatibleSpaces(String::from("weights or coefficient modules differ")));
    }
    if !matches!(big.coef.kind(), CoefKind::Trivial | CoefKind::Symm(_)) {
        return Err(Error::IncompatibleSpaces(String::from("degeneracy maps need trivial or symmetric-power coefficients")));
    }
    if !big.field().same_field(small.field()) {
        return Err(Error::FieldMismatch);
    }
    // H' must reduce into H
    let hs = small.cosets.h();
    if n > 1 && big.cosets.h().iter().any(|h| hs.binary_search(&(h % n)).is_err()) {
        return Err(Error::IncompatibleSpaces(String::from("subgroup does not reduce into the lower-level subgroup")));
    }
    Ok(m / n)
}

/// Degeneracy map from level `Np` to level `N` for `t` in `{1, p}`:
/// `x -> diag(t, 1) x` on modular symbols. `t = 1` is the forgetful map on
/// cosets.
pub fn degeneracy_down<F: Field>(big: &ManinSpace<F>, small: &ManinSpace<F>, t: u64) -> Result<Matrix<F>> {
    let p = check_level_pair(big, small)?;
    if t == 1 {
        let one = big.field().one();
        let mut e = vec![big.field().zero(); big.coef.dim()];
        let mut rows = Vec::with_capacity(big.dim());
        for j in 0..big.dim() {
            let (i, x) = big.basis_symbol(j);
            let (c, d) = big.cosets.rep(x);
            let y = small.cosets.index(c as i64, d as i64).expect("reduction of a primitive pair");
            e[i] = one.clone();
            rows.push(small.symbol(&e, y));
            e[i] = big.field().zero();
        }
        return Matrix::from_rows(big.field(), small.dim(), &rows);
    }
    if t != p {
        return Err(Error::IncompatibleSpaces(format!("t = {t} must be 1 or {p}")));
    }
    degeneracy_via_continued_fractions(big, small, t)
}

/// The general path: `[P, g] -> (P | adj(D g)) {t b/d, t a/c}` with
/// `D = diag(t, 1)`, expanded into level-`N` Manin symbols by continued
/// fractions.
pub fn degeneracy_via_continued_fractions<F: Field>(
    big: &ManinSpace<F>,
    small: &ManinSpace<F>,
    t: u64,
) -> Result<Matrix<F>> {
    let p = check_level_pair(big, small)?;
    if t != 1 && t != p {
        return Err(Error::IncompatibleSpaces(format!("t = {t} must be 1 or {p}")));
    }
    let f = big.field();
    let t = t as i64;
    let mut rows = Vec::with_capacity(big.dim());
    for j in 0..big.dim() {
        let (i, x) = big.basis_symbol(j);
        let g = big.cosets.lift(x);
        let dg = [t * g[0], t * g[1], g[2], g[3]];
        let rho = big.coef.act_int_unchecked(&adj(&dg))?;
        let w = rho.row(i);
        let mut acc = vec![f.zero(); small.dim()];
        // {alpha, beta} = {0, beta} - {0, alpha}
        zero_to(small, &mut acc, w, t * g[0], g[2], &f.one())?;
        zero_to(small, &mut acc, w, t * g[1], g[3], &f.neg(&f.one()))?;
        rows.push(acc);
    }
    Matrix::from_rows(f, small.dim(), &rows)
}

/// Level-raising transfer from level `N` to level `Np`, the pullback along
/// `z -> t z`: `x -> sum_h diag(1, t) h x` over `h` in
/// `(Gamma ∩ Gamma^0(t)) \ Gamma` (just the coset fibre when `t = 1`). Under
/// Lefschetz duality Manin symbols compute `H^1`, and these are the
/// restriction maps `alpha_1`, `alpha_2` of Lemma 1.
pub fn degeneracy_up<F: Field>(small: &ManinSpace<F>, big: &ManinSpace<F>, t: u64) -> Result<Matrix<F>> {
    let p = check_level_pair(big, small)?;
    let f = big.field();
    let n = small.level() as i64;
    let pi = p as i64;
    let mut rows = Vec::with_capacity(small.dim());
    if t == 1 {
        let mut e = vec![f.zero(); small.coef.dim()];
        for j in 0..small.dim() {
            let (i, x) = small.basis_symbol(j);
            e[i] = f.one();
            let mut acc = vec![f.zero(); big.dim()];
            for (y, &(c, d)) in big.cosets.reps().iter().enumerate() {
                if small.cosets.index(c as i64, d as i64) == Some(x) {
                    big.add_symbol(&mut acc, &e, y, &f.one());
                }
            }
            e[i] = f.zero();
            rows.push(acc);
        }
        return Matrix::from_rows(f, big.dim(), &rows);
    }
    if t != p {
        return Err(Error::IncompatibleSpaces(format!("t = {t} must be 1 or {p}")));
    }
    // first rows (1, j) and (0, 1) mod p, all inside Gamma_1(N)
    let u = if n == 1 { 1 } else { inv_mod(pi, n as u64).expect("p prime to N") as i64 };
    let mut hs: Vec<Mat2> = (0..pi).map(|j| [1, j, 0, 1]).collect();
    hs.push([pi * u, (pi * u - 1) / n, n, 1]);
    for j in 0..small.dim() {
        let (i, x) = small.basis_symbol(j);
        let g = small.cosets.lift(x);
        let mut acc = vec![f.zero(); big.dim()];
        for h in &hs {
            let hg = mat_mul(h, &g);
            let gam = [hg[0], hg[1], pi * hg[2], pi * hg[3]];
            let rho = big.coef.act_int_unchecked(&adj(&gam))?;
            let w = rho.row(i);
            zero_to(big, &mut acc, w, gam[0], gam[2], &f.one())?;
            zero_to(big, &mut acc, w, gam[1], gam[3], &f.neg(&f.one()))?;
        }
        rows.push(acc);
    }
    Matrix::from_rows(f, big.dim(), &rows)
}

/// `acc += s * w{0, a/b}` via the convergents of `a/b`.
fn zero_to<F: Field>(space: &ManinSpace<F>, acc: &mut [F::Elem], w: &[F::Elem], a: i64, b: i64, s: &F::Elem) -> Result<()> {
    for g in convergent_matrices(a, b) {
        let rho = space.coef.act_int(&g)?;
        let v = rho.vec_mul(w);
        let x = space
            .cosets
            .index(g[2], g[3])
            .ok_or_else(|| Error::Internal(String::from("convergent with non-primitive bottom row")))?;
        space.add_symbol(acc, &v, x, s);
    }
    Ok(())
}

/// Matrices `g_j` in SL_2(Z), `j = -1..n`, with `g_j {0, inf} =
/// {p_(j-1)/q_(j-1), p_j/q_j}`, summing to `{0, a/b}`.
pub fn convergent_matrices(a: i64, b: i64) -> Vec<Mat2> {
    let mut out = vec![cong::IDENTITY];
    let (mut a, mut b) = if b < 0 { (-a, -b) } else { (a, b) };
    if b == 0 {
        return out;
    }
    let (mut p2, mut p1, mut q2, mut q1) = (0i64, 1i64, 1i64, 0i64);
    let mut j = 0i64;
    loop {
        let aj = a.div_euclid(b);
        let r = a.rem_euclid(b);
        let (pj, qj) = (aj * p1 + p2, aj * q1 + q2);
        let s = if (j - 1).rem_euclid(2) == 0 { 1 } else { -1 };
        out.push([s * pj, p1, s * qj, q1]);
        (p2, p1, q2, q1) = (p1, pj, q1, qj);
        if r == 0 {
            break;
        }
        (a, b) = (b, r);
        j += 1;
    }
    out
}

/// Explicit Shapiro isomorphism from the level-`Np` space with coefficients
/// `A` to the level-`N` space with coefficients `A (x) F_p[P^1(F_p)]` (or
/// `F_p[P^1(F_p)]` for trivial `A`), from the CRT bijection on cosets.
pub fn shapiro_map(big: &ManinSpace<FiniteField>, small: &ManinSpace<FiniteField>) -> Result<Matrix<FiniteField>> {
    let (m, n) = (big.level(), small.level());
    if m % n != 0 || gcd((m / n) as i64, n as i64) != 1 || !is_prime(m / n) {
        return Err(Error::IncompatibleSpaces(format!("levels {m} and {n}")));
    }
    let p = m / n;
    let f = big.field();
    let (inner_dim, ind_dim) = match small.coef.kind() {
        CoefKind::Induced { q, .. } if *q == p && matches!(big.coef.kind(), CoefKind::Trivial) => (1, p as usize + 1),
        CoefKind::Tensor(a, b) if matches!(b.kind(), CoefKind::Induced { q, .. } if *q == p) && a.descriptor() == big.coef.descriptor() => {
            (a.dim(), p as usize + 1)
        }
        _ => return Err(Error::IncompatibleSpaces(String::from("target must carry induced coefficients"))),
    };
    if f.degree() != 1 || f.p() != p {
        return Err(Error::IncompatibleSpaces(format!("Shapiro map is built over F_{p}")));
    }
    let mut e = vec![f.zero(); small.coef.dim()];
    let mut rows = Vec::with_capacity(big.dim());
    for j in 0..big.dim() {
        let (i, x) = big.basis_symbol(j);
        let (c, d) = big.cosets.rep(x);
        let y = small.cosets.index(c as i64, d as i64).expect("reduction of a primitive pair");
        let (cp, dp) = (c % p, d % p);
        let pt = if cp == 0 { 0 } else { 1 + ((dp * inv_mod(cp as i64, p).expect("unit")) % p) as usize };
        let idx = i * ind_dim + pt;
        debug_assert!(i < inner_dim);
        e[idx] = f.one();
        rows.push(small.symbol(&e, y));
        e[idx] = f.zero();
    }
    Matrix::from_rows(f, small.dim(), &rows)
}

/// Both sides of Shapiro's lemma for `Gamma_0(N)` and the explicit
/// isomorphism between them.
pub struct Shapiro {
    pub big: ManinSpace<FiniteField>,
    pub small: ManinSpace<FiniteField>,
    pub iso: Matrix<FiniteField>,
}

pub fn shapiro_iso(n: u64, p: u64, k: u32, field: &FiniteField) -> Result<Shapiro> {
    shapiro_iso_for(&SubgroupSpec::gamma0(n), p, k, field)
}

pub fn shapiro_iso_for(spec: &SubgroupSpec, p: u64, k: u32, field: &FiniteField) -> Result<Shapiro> {
    if spec.base_level() % p == 0 {
        return Err(Error::Hypothesis(format!("gcd(N, p) = 1 fails for N = {}, p = {p}", spec.base_level())));
    }
    let big = ManinSpace::weight_k(&spec.with_aux_prime(p)?, k, field)?;
    let ind = CoefModule::induced(field, p)?;
    let coef = if k == 2 { ind } else { CoefModule::tensor(&CoefModule::symm(field, k - 2), &ind)? };
    let small = ManinSpace::new(spec, k, &coef)?;
    let iso = shapiro_map(&big, &small)?;
    Ok(Shapiro { big, small, iso })
}

/// `cuspidal ∩ ker delta_1 ∩ ker delta_p` at level `Np`.
pub fn pnew_subspace<F: Field>(big: &ManinSpace<F>, small: &ManinSpace<F>) -> Result<Subspace<F>> {
    let p = check_level_pair(big, small)?;
    let d1 = degeneracy_down(big, small, 1)?;
    let dp = degeneracy_down(big, small, p)?;
    big.cuspidal_subspace()?.kernel_of(&d1.hstack(&dp)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merel_sizes() {
        assert_eq!(heilbronn_merel(2).len(), 4);
        assert_eq!(heilbronn_merel(3).len(), 7);
        assert!(heilbronn_merel(7).iter().all(|h| cong::det(h) == 7));
        assert!(heilbronn_cremona(5).iter().all(|h| cong::det(h) == 5));
        assert_eq!(heilbronn_cremona(3).len(), 6);
    }

    #[test]
    fn convergents_telescope() {
        for (a, b) in [(7, 5), (-3, 8), (0, 1), (13, 1), (5, -3)] {
            let gs = convergent_matrices(a, b);
            for g in &gs {
                assert_eq!(cong::det(g), 1);
            }
            // last matrix sends inf to a/b
            let l = gs.last().unwrap();
            assert_eq!(l[0] as i128 * b as i128, a as i128 * l[2] as i128);
        }
    }

    #[test]
    fn level_one_weight_two_vanishes() {
        let f = FiniteField::new(5, 1).unwrap();
        let s = ManinSpace::weight_k(&SubgroupSpec::gamma0(1), 2, &f).unwrap();
        assert_eq!(s.dim(), 0);
        assert_eq!(s.cuspidal_subspace().unwrap().dim(), 0);
    }

    #[test]
    fn refuses_small_characteristic() {
        let f = FiniteField::new(3, 1).unwrap();
        assert!(ManinSpace::weight_k(&SubgroupSpec::gamma0(11), 2, &f).is_err());
    }
}
