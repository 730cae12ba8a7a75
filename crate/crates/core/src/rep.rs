//! SL_2(F_q) at desk scale: conjugacy classes, Brauer signatures (the
//! characteristic polynomial on each p-regular class), and a Norton-criterion
//! MeatAxe.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::coef::{split_induced, CoefKind, CoefModule};
use crate::error::{Error, Result};
use crate::gfq::int::prime_power;
use crate::gfq::{poly, Field, FiniteField, Gf, Matrix, Subspace};

pub type Elem = [Gf; 4];

/// Largest `q` handled.
pub const DESK_BOUND: u64 = 49;

#[derive(Clone, Debug)]
pub struct ConjClass {
    pub rep: usize,
    /// A second member (equal to `rep` for central classes).
    pub second: usize,
    pub size: usize,
    pub order: u64,
    pub p_regular: bool,
}

#[derive(Clone, Debug)]
pub struct GroupTable {
    field: FiniteField,
    elements: Vec<Elem>,
    index: Vec<u32>,
    gens: Vec<usize>,
    classes: Vec<ConjClass>,
    class_of: Vec<u32>,
}

impl GroupTable {
    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.field.order()
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Elem {
        &self.elements[i]
    }

    pub fn classes(&self) -> &[ConjClass] {
        &self.classes
    }

    pub fn class_of(&self, i: usize) -> usize {
        self.class_of[i] as usize
    }

    pub fn generators(&self) -> Vec<Elem> {
        self.gens.iter().map(|&i| self.elements[i]).collect()
    }

    fn key(&self, g: &Elem) -> usize {
        let q = self.field.order() as usize;
        ((g[0].0 as usize * q + g[1].0 as usize) * q + g[2].0 as usize) * q + g[3].0 as usize
    }

    pub fn index_of(&self, g: &Elem) -> Option<usize> {
        let i = self.index[self.key(g)];
        (i != u32::MAX).then_some(i as usize)
    }

    pub fn mul(&self, x: &Elem, y: &Elem) -> Elem {
        let f = &self.field;
        [
            f.add(&f.mul(&x[0], &y[0]), &f.mul(&x[1], &y[2])),
            f.add(&f.mul(&x[0], &y[1]), &f.mul(&x[1], &y[3])),
            f.add(&f.mul(&x[2], &y[0]), &f.mul(&x[3], &y[2])),
            f.add(&f.mul(&x[2], &y[1]), &f.mul(&x[3], &y[3])),
        ]
    }

    pub fn inverse(&self, x: &Elem) -> Elem {
        let f = &self.field;
        [x[3], f.neg(&x[1]), f.neg(&x[2]), x[0]]
    }

    pub fn identity(&self) -> Elem {
        [Gf(1), Gf(0), Gf(0), Gf(1)]
    }

    pub fn element_order(&self, x: &Elem) -> u64 {
        let id = self.identity();
        let mut y = *x;
        let mut n = 1;
        while y != id {
            y = self.mul(&y, x);
            n += 1;
        }
        n
    }
}

/// Exhaustive SL_2(F_q) with classes by conjugation orbits under the
/// generators `u_b = [[1, b], [0, 1]]`, `l_b = [[1, 0], [b, 1]]`, `b` in the
/// power basis of F_q over F_p.
pub fn group_table(q: u64) -> Result<GroupTable> {
    let (p, e) = prime_power(q).ok_or_else(|| Error::GroupTable(format!("{q} is not a prime power")))?;
    if p < 5 {
        return Err(Error::UnsupportedCharacteristic(p));
    }
    if q > DESK_BOUND {
        return Err(Error::OutOfRange(format!("q = {q} exceeds the desk bound {DESK_BOUND}")));
    }
    let f = FiniteField::new(p, e)?;
    let mut elements = Vec::new();
    let one = f.one();
    for a in f.elements() {
        for b in f.elements() {
            for c in f.elements() {
                if let Some(ai) = f.inv(&a) {
                    let d = f.mul(&f.add(&one, &f.mul(&b, &c)), &ai);
                    elements.push([a, b, c, d]);
                } else if let Some(bi) = f.inv(&b) {
                    if c == f.neg(&bi) {
                        for d in f.elements() {
                            elements.push([a, b, c, d]);
                        }
                    }
                }
            }
        }
    }
    elements.sort();
    let qs = q as usize;
    let mut index = vec![u32::MAX; qs * qs * qs * qs];
    let mut t = GroupTable { field: f.clone(), elements, index: Vec::new(), gens: Vec::new(), classes: Vec::new(), class_of: Vec::new() };
    for (i, g) in t.elements.iter().enumerate() {
        index[t.key(g)] = i as u32;
    }
    t.index = index;
    let mut gens = Vec::new();
    let mut b = 1u32;
    for _ in 0..e {
        gens.push(t.index_of(&[one, Gf(b), Gf(0), one]).expect("unipotent"));
        gens.push(t.index_of(&[one, Gf(0), Gf(b), one]).expect("unipotent"));
        b *= p as u32;
    }
    t.gens = gens;
    // generation check
    let n = t.elements.len();
    let mut seen = vec![false; n];
    let start = t.index_of(&t.identity()).expect("identity");
    seen[start] = true;
    let mut stack = vec![start];
    let mut reached = 1;
    let gen_elems = t.generators();
    while let Some(i) = stack.pop() {
        for g in &gen_elems {
            let j = t.index_of(&t.mul(&t.elements[i], g)).expect("closed");
            if !seen[j] {
                seen[j] = true;
                reached += 1;
                stack.push(j);
            }
        }
    }
    if reached != n {
        return Err(Error::Internal(format!("generators reach {reached} of {n} elements")));
    }
    // conjugacy classes
    let gen_inv: Vec<Elem> = gen_elems.iter().map(|g| t.inverse(g)).collect();
    let mut class_of = vec![u32::MAX; n];
    let mut classes = Vec::new();
    for i in 0..n {
        if class_of[i] != u32::MAX {
            continue;
        }
        let id = classes.len() as u32;
        class_of[i] = id;
        let mut stack = vec![i];
        let mut members = vec![i];
        while let Some(x) = stack.pop() {
            for (g, gi) in gen_elems.iter().zip(&gen_inv) {
                let y = t.mul(&t.mul(g, &t.elements[x]), gi);
                let j = t.index_of(&y).expect("closed");
                if class_of[j] == u32::MAX {
                    class_of[j] = id;
                    members.push(j);
                    stack.push(j);
                }
            }
        }
        let order = t.element_order(&t.elements[i]);
        classes.push(ConjClass {
            rep: i,
            second: *members.get(1).unwrap_or(&i),
            size: members.len(),
            order,
            p_regular: order % p != 0,
        });
    }
    t.classes = classes;
    t.class_of = class_of;
    Ok(t)
}

/// Characteristic polynomial of the acting matrix on every p-regular class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrauerSignature {
    pub q: u64,
    pub dim: usize,
    /// `(class index, charpoly)` in class order.
    pub polys: Vec<(usize, Vec<Gf>)>,
}

pub fn brauer_signature(m: &CoefModule<FiniteField>, g: &GroupTable) -> Result<BrauerSignature> {
    if !m.field().same_field(g.field()) {
        return Err(Error::FieldMismatch);
    }
    let mut polys = Vec::new();
    for (ci, c) in g.classes().iter().enumerate() {
        if !c.p_regular {
            continue;
        }
        let cp = m.act(g.element(c.rep))?.charpoly()?;
        let cp2 = m.act(g.element(c.second))?.charpoly()?;
        if cp != cp2 {
            return Err(Error::Internal(format!("signature differs on two members of class {ci}")));
        }
        polys.push((ci, cp));
    }
    Ok(BrauerSignature { q: g.q(), dim: m.dim(), polys })
}

/// Pointwise product, the signature of a direct sum.
pub fn signature_sum(a: &BrauerSignature, b: &BrauerSignature, f: &FiniteField) -> Result<BrauerSignature> {
    if a.q != b.q || a.polys.len() != b.polys.len() {
        return Err(Error::GroupTable(String::from("signatures from different group tables")));
    }
    let polys = a.polys.iter().zip(&b.polys).map(|((c, x), (_, y))| (*c, poly::mul(f, x, y))).collect();
    Ok(BrauerSignature { q: a.q, dim: a.dim + b.dim, polys })
}

/// Equality of semisimplifications, decided on p-regular classes.
pub fn ss_equal(a: &BrauerSignature, b: &BrauerSignature) -> Result<bool> {
    if a.q != b.q || a.polys.len() != b.polys.len() || a.polys.iter().zip(&b.polys).any(|(x, y)| x.0 != y.0) {
        return Err(Error::GroupTable(String::from("signatures from different group tables")));
    }
    Ok(a == b)
}

#[derive(Clone, Debug, PartialEq)]
pub enum MeataxeVerdict {
    Irreducible,
    /// Basis of a proper nonzero submodule.
    Reducible(Matrix<FiniteField>),
}

impl MeataxeVerdict {
    pub fn is_irreducible(&self) -> bool {
        matches!(self, MeataxeVerdict::Irreducible)
    }
}

pub const MEATAXE_MAX_DIM: usize = 64;

/// Incremental echelon basis for spinning.
struct Echelon {
    f: FiniteField,
    rows: Vec<Vec<Gf>>,
    pivots: Vec<usize>,
}

impl Echelon {
    fn new(f: &FiniteField) -> Self {
        Echelon { f: f.clone(), rows: Vec::new(), pivots: Vec::new() }
    }

    /// Adds `v` if independent; returns the reduced vector when added.
    fn insert(&mut self, mut v: Vec<Gf>) -> bool {
        let f = &self.f;
        for (r, &pc) in self.rows.iter().zip(&self.pivots) {
            if !f.is_zero(&v[pc]) {
                let c = v[pc];
                for (x, y) in v.iter_mut().zip(r) {
                    *x = f.sub(x, &f.mul(&c, y));
                }
            }
        }
        match v.iter().position(|x| !f.is_zero(x)) {
            None => false,
            Some(pc) => {
                let inv = f.inv(&v[pc]).expect("nonzero");
                for x in v.iter_mut() {
                    *x = f.mul(x, &inv);
                }
                for r in self.rows.iter_mut() {
                    if !f.is_zero(&r[pc]) {
                        let c = r[pc];
                        for (x, y) in r.iter_mut().zip(&v) {
                            *x = f.sub(x, &f.mul(&c, y));
                        }
                    }
                }
                self.rows.push(v);
                self.pivots.push(pc);
                true
            }
        }
    }
}

/// Smallest submodule containing `v` (row vectors, `v -> v A`).
pub fn spin(v: &[Gf], gens: &[Matrix<FiniteField>]) -> Result<Subspace<FiniteField>> {
    let f = gens.first().ok_or_else(|| Error::Internal(String::from("no generators")))?.field().clone();
    let n = v.len();
    let mut ech = Echelon::new(&f);
    let mut queue = Vec::new();
    if ech.insert(v.to_vec()) {
        queue.push(v.to_vec());
    }
    while let Some(w) = queue.pop() {
        for a in gens {
            let u = a.vec_mul(&w);
            if ech.insert(u.clone()) {
                queue.push(u);
            }
        }
        if ech.rows.len() == n {
            break;
        }
    }
    Ok(Subspace::span(&Matrix::from_rows(&f, n, &ech.rows)?))
}

fn try_theta(theta: &Matrix<FiniteField>, gens: &[Matrix<FiniteField>], gens_t: &[Matrix<FiniteField>]) -> Result<Option<MeataxeVerdict>> {
    let f = theta.field();
    let n = theta.rows();
    let mut factors = poly::factor(f, &theta.charpoly()?);
    factors.sort_by_key(|(g, _)| g.len());
    for (g, _) in factors {
        let nm = theta.eval_poly(&g)?;
        let left = nm.left_kernel();
        if left.rows() == 0 {
            continue;
        }
        let nullity = left.rows();
        let s = spin(left.row(0), gens)?;
        if s.dim() < n {
            return Ok(Some(MeataxeVerdict::Reducible(s.basis().clone())));
        }
        let right = nm.kernel();
        let sd = spin(right.row(0), gens_t)?;
        if sd.dim() < n {
            // annihilator of a proper submodule of the dual
            let ann = sd.basis().kernel();
            return Ok(Some(MeataxeVerdict::Reducible(Subspace::span(&ann).basis().clone())));
        }
        if nullity == g.len() - 1 {
            return Ok(Some(MeataxeVerdict::Irreducible));
        }
    }
    let _ = f;
    Ok(None)
}

fn random_elem(rng: &mut ChaCha8Rng, f: &FiniteField) -> Gf {
    Gf((rng.next_u64() % f.order()) as u32)
}

/// Norton-criterion MeatAxe on the algebra generated by `gens`.
pub fn meataxe(gens: &[Matrix<FiniteField>], seed: u64) -> Result<MeataxeVerdict> {
    let first = gens.first().ok_or_else(|| Error::Internal(String::from("no generators")))?;
    let f = first.field().clone();
    let n = first.rows();
    if n > MEATAXE_MAX_DIM {
        return Err(Error::OutOfRange(format!("dimension {n} exceeds {MEATAXE_MAX_DIM}")));
    }
    if n <= 1 {
        return if n == 1 { Ok(MeataxeVerdict::Irreducible) } else { Err(Error::InvalidModule(String::from("zero module"))) };
    }
    let gens_t: Vec<Matrix<FiniteField>> = gens.iter().map(|a| a.transpose()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool: Vec<Matrix<FiniteField>> = gens.to_vec();
    for _ in 0..64 {
        if pool.len() < 24 {
            let a = (rng.next_u32() as usize) % pool.len();
            let b = (rng.next_u32() as usize) % pool.len();
            let prod = pool[a].mul(&pool[b])?;
            pool.push(prod);
        }
        let mut theta = Matrix::zeros(&f, n, n);
        for w in &pool {
            theta = theta.add(&w.scale(&random_elem(&mut rng, &f)))?;
        }
        if let Some(v) = try_theta(&theta, gens, &gens_t)? {
            return Ok(v);
        }
    }
    // deterministic fallback: w_i + c w_j over the pool
    for i in 0..pool.len() {
        for j in 0..pool.len() {
            for c in 0..f.order().min(8) {
                let theta = pool[i].add(&pool[j].scale(&Gf(c as u32)))?;
                if let Some(v) = try_theta(&theta, gens, &gens_t)? {
                    return Ok(v);
                }
            }
        }
    }
    Err(Error::Internal(String::from("MeatAxe did not reach a verdict")))
}

/// FNV-1a of `q|descriptor`.
fn seed_for(q: u64, kind: &str) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in format!("{q}|{kind}").bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

pub fn module_generators(m: &CoefModule<FiniteField>, g: &GroupTable) -> Result<Vec<Matrix<FiniteField>>> {
    g.generators().iter().map(|x| m.act(x)).collect()
}

pub fn meataxe_irreducible(m: &CoefModule<FiniteField>, g: &GroupTable) -> Result<MeataxeVerdict> {
    if !m.field().same_field(g.field()) {
        return Err(Error::FieldMismatch);
    }
    meataxe(&module_generators(m, g)?, seed_for(g.q(), &m.descriptor()))
}

/// True when `basis` spans a subspace stable under every generator.
pub fn is_submodule(basis: &Matrix<FiniteField>, gens: &[Matrix<FiniteField>]) -> Result<bool> {
    let s = Subspace::span(basis);
    for a in gens {
        if !s.contains_subspace(&s.image(a)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug)]
pub struct SemisimplicityReport {
    pub semisimple: bool,
    pub summand_dims: Vec<usize>,
    pub projectors_commute: bool,
    pub verdicts: Vec<MeataxeVerdict>,
}

/// Exhibits `F[P^1(F_q)] = constants + zero-sum` and checks both summands
/// are irreducible. A module the MeatAxe finds irreducible is trivially
/// semisimple.
pub fn verify_semisimplicity(m: &CoefModule<FiniteField>, g: &GroupTable) -> Result<SemisimplicityReport> {
    match m.kind() {
        CoefKind::Induced { .. } => {
            let split = split_induced(m)?;
            let gens = module_generators(m, g)?;
            let mut commute = true;
            for a in &gens {
                commute &= split.proj_const.mul(a)? == a.mul(&split.proj_const)?;
                commute &= split.proj_zero_sum.mul(a)? == a.mul(&split.proj_zero_sum)?;
            }
            let mut verdicts = Vec::new();
            let mut dims = Vec::new();
            for (k, basis) in [&split.incl_const, &split.incl_zero_sum].into_iter().enumerate() {
                let s = Subspace::span(basis);
                let restricted: Vec<_> = gens.iter().map(|a| s.restrict(a)).collect::<Result<_>>()?;
                dims.push(s.dim());
                verdicts.push(meataxe(&restricted, seed_for(g.q(), &format!("{}#{k}", m.descriptor())))?);
            }
            let semisimple = commute && verdicts.iter().all(|v| v.is_irreducible());
            Ok(SemisimplicityReport { semisimple, summand_dims: dims, projectors_commute: commute, verdicts })
        }
        _ => {
            let v = meataxe_irreducible(m, g)?;
            Ok(SemisimplicityReport { semisimple: v.is_irreducible(), summand_dims: vec![m.dim()], projectors_commute: true, verdicts: vec![v] })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_f5() {
        let g = group_table(5).unwrap();
        assert_eq!(g.order(), 120);
        assert_eq!(g.classes().len(), 9);
        assert_eq!(g.classes().iter().map(|c| c.size).sum::<usize>(), 120);
        let id = g.class_of(g.index_of(&g.identity()).unwrap());
        assert_eq!(g.classes()[id].size, 1);
        assert!(g.classes()[id].p_regular);
        assert!(group_table(121).is_err());
        assert!(group_table(9).is_err());
    }

    #[test]
    fn small_modules() {
        let g = group_table(5).unwrap();
        let f = g.field().clone();
        let t = brauer_signature(&CoefModule::trivial(&f), &g).unwrap();
        assert!(t.polys.iter().all(|(_, c)| *c == alloc::vec![Gf(4), Gf(1)]));
        assert!(meataxe_irreducible(&CoefModule::symm(&f, 4), &g).unwrap().is_irreducible());
        match meataxe_irreducible(&CoefModule::induced(&f, 5).unwrap(), &g).unwrap() {
            MeataxeVerdict::Reducible(b) => {
                let gens = module_generators(&CoefModule::induced(&f, 5).unwrap(), &g).unwrap();
                assert!(is_submodule(&b, &gens).unwrap());
                assert!(b.rows() > 0 && b.rows() < 6);
            }
            MeataxeVerdict::Irreducible => panic!("induced module is reducible"),
        }
    }
}
