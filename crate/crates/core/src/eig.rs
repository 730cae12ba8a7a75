//! Hecke eigensystems, occurrence checks and the verification drivers.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::coef::{ev_intertwiner, split_induced, CoefModule};
use crate::cong::SubgroupSpec;
use crate::error::{Error, Result};
use crate::gfq::int::{gcd, is_prime, primes_up_to};
use crate::gfq::{poly, Embedding, Field, FiniteField, Gf, Matrix, Subspace};
use crate::msym::{degeneracy_down, degeneracy_up, pnew_subspace, shapiro_iso_for, HeilbronnFamily, ManinSpace, NoStore, OperatorStore};

/// A system of Hecke eigenvalues `r -> a_r` in `F_(p^d)`.
#[derive(Clone, Debug)]
pub struct Eigensystem {
    pub p: u64,
    /// Field containing every `a_r`; its degree is the field of definition.
    pub field: FiniteField,
    /// Increasing primes.
    pub values: Vec<(u64, Gf)>,
    /// Dimension of the joint generalized eigenspace over `field`.
    pub multiplicity: usize,
    /// Galois orbit id; conjugate systems share it.
    pub orbit: usize,
    pub source: String,
    /// Joint generalized eigenspace over `field`, in the coordinates of the
    /// module the system was extracted from.
    pub eigenspace: Matrix<FiniteField>,
}

impl Eigensystem {
    pub fn degree(&self) -> u32 {
        self.field.degree()
    }

    pub fn get(&self, r: u64) -> Option<Gf> {
        self.values.iter().find(|(s, _)| *s == r).map(|(_, a)| *a)
    }

    pub fn primes(&self) -> Vec<u64> {
        self.values.iter().map(|(r, _)| *r).collect()
    }

    /// Entrywise Frobenius.
    pub fn frobenius(&self) -> Vec<(u64, Gf)> {
        self.values.iter().map(|&(r, a)| (r, self.field.frobenius(a))).collect()
    }

    /// Drops the primes in `skip`.
    pub fn restrict_away(&self, skip: &[u64]) -> Eigensystem {
        let mut e = self.clone();
        e.values.retain(|(r, _)| !skip.contains(r));
        e
    }

    /// `a_r` as coefficients in the generator of `field`.
    pub fn value_coeffs(&self, r: u64) -> Option<Vec<u32>> {
        self.get(r).map(|a| self.field.coeffs(a))
    }
}

/// Operators on a finite-dimensional Hecke module over a prime field.
#[derive(Clone, Debug)]
pub struct HeckeModule {
    pub label: String,
    pub level: u64,
    pub p: u64,
    pub dim: usize,
    pub ops: BTreeMap<u64, Matrix<FiniteField>>,
}

impl HeckeModule {
    /// `T_r` for `r` in `primes` restricted to `sub` (the whole space when `None`).
    pub fn from_space(space: &ManinSpace<FiniteField>, sub: Option<&Subspace<FiniteField>>, primes: &[u64]) -> Result<Self> {
        Self::from_space_cached(space, sub, primes, &NoStore)
    }

    /// [`HeckeModule::from_space`] with the full-space `T_r` taken from `store`.
    pub fn from_space_cached(
        space: &ManinSpace<FiniteField>,
        sub: Option<&Subspace<FiniteField>>,
        primes: &[u64],
        store: &dyn OperatorStore<FiniteField>,
    ) -> Result<Self> {
        let full;
        let sub = match sub {
            Some(s) => s,
            None => {
                full = Subspace::full(space.field(), space.dim());
                &full
            }
        };
        let mut ops = BTreeMap::new();
        for &r in primes {
            let t = space.hecke_cached(r, store)?;
            ops.insert(r, sub.restrict(&t)?);
        }
        Ok(HeckeModule {
            label: format!("{}{}", space.descriptor(), if sub.dim() == space.dim() { "" } else { "|sub" }),
            level: space.level(),
            p: space.field().p(),
            dim: sub.dim(),
            ops,
        })
    }

    pub fn add_operator(&mut self, r: u64, m: Matrix<FiniteField>) -> Result<()> {
        if m.shape() != (self.dim, self.dim) {
            return Err(Error::ShapeMismatch { expected: (self.dim, self.dim), found: m.shape() });
        }
        self.ops.insert(r, m);
        Ok(())
    }

    fn field(&self) -> Option<&FiniteField> {
        self.ops.values().next().map(|m| m.field())
    }
}

/// A block whose characteristic polynomial factor exceeded the degree cap.
#[derive(Clone, Debug)]
pub struct UnsplitBlock {
    pub dim: usize,
    pub prime: u64,
    pub factor: Vec<Gf>,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub dim: usize,
    pub systems: Vec<Eigensystem>,
    pub unsplit: Vec<UnsplitBlock>,
}

impl Decomposition {
    /// `sum over orbits of multiplicity x degree`, which equals the sum of
    /// multiplicities over all listed systems.
    pub fn accounted_dim(&self) -> usize {
        self.systems.iter().map(|e| e.multiplicity).sum::<usize>() + self.unsplit.iter().map(|b| b.dim).sum::<usize>()
    }
}

fn lcm(a: u32, b: u32) -> u32 {
    a / gcd(a as i64, b as i64) as u32 * b
}

/// Generalized eigenspace of `op` (acting on the row space of `v`, which it
/// must preserve) for the factor `f`, as a subspace of the ambient space.
fn primary_part(v: &Subspace<FiniteField>, op: &Matrix<FiniteField>, f: &[Gf]) -> Result<Subspace<FiniteField>> {
    let r = v.restrict(op)?;
    let fr = r.eval_poly(f)?.pow(v.dim() as u64)?;
    let coords = fr.left_kernel();
    Ok(Subspace::span(&v.lift(&coords)?))
}

/// Simultaneous eigenspace decomposition of a Hecke module.
pub fn decompose(module: &HeckeModule, max_degree: usize) -> Result<Decomposition> {
    let mut out = Decomposition { dim: module.dim, systems: Vec::new(), unsplit: Vec::new() };
    let field = match module.field() {
        Some(f) => f.clone(),
        None => return Ok(out),
    };
    if module.dim == 0 {
        return Ok(out);
    }
    for &r in module.ops.keys() {
        if module.level % r == 0 {
            return Err(Error::HeckeIndex { r, reason: "divides the level" });
        }
    }
    // F_p-primary blocks
    let mut blocks: Vec<(Subspace<FiniteField>, Vec<(u64, Vec<Gf>)>)> = vec![(Subspace::full(&field, module.dim), Vec::new())];
    for (&r, op) in &module.ops {
        let mut next = Vec::new();
        for (v, facs) in blocks {
            let r_op = v.restrict(op)?;
            for (f, _) in poly::factor(&field, &r_op.charpoly()?) {
                let w = primary_part(&v, op, &f)?;
                if w.dim() == 0 {
                    continue;
                }
                if f.len() - 1 > max_degree {
                    out.unsplit.push(UnsplitBlock { dim: w.dim(), prime: r, factor: f });
                    continue;
                }
                let mut nf = facs.clone();
                nf.push((r, f));
                next.push((w, nf));
            }
        }
        blocks = next;
    }
    let mut orbit_base = 0;
    for (v, facs) in blocks {
        let e = facs.iter().fold(1u32, |acc, (_, f)| lcm(acc, (f.len() - 1) as u32));
        let k = FiniteField::new(field.p(), field.degree() * e)?;
        let emb = Embedding::new(&field, &k)?;
        let basis_k = emb.apply_matrix(v.basis());
        // operators restricted to the block, over K
        let mut pieces: Vec<(Subspace<FiniteField>, Vec<(u64, Gf)>)> = vec![(Subspace::full(&k, v.dim()), Vec::new())];
        for (r, f) in &facs {
            let rk = emb.apply_matrix(&v.restrict(&module.ops[r])?);
            let roots = poly::roots(&k, &emb.apply_poly(f));
            let mut next = Vec::new();
            for (u, vals) in pieces {
                for &lam in &roots {
                    let w = primary_part(&u, &rk, &[k.neg(&lam), k.one()])?;
                    if w.dim() > 0 {
                        let mut nv = vals.clone();
                        nv.push((*r, lam));
                        next.push((w, nv));
                    }
                }
            }
            pieces = next;
        }
        // orbits under Frobenius
        let mut orbit_of: Vec<Option<usize>> = vec![None; pieces.len()];
        let mut n_orbits = 0;
        for i in 0..pieces.len() {
            if orbit_of[i].is_some() {
                continue;
            }
            let id = orbit_base + n_orbits;
            n_orbits += 1;
            let mut cur = pieces[i].1.clone();
            loop {
                let j = match pieces.iter().position(|(_, vals)| *vals == cur) {
                    Some(j) => j,
                    None => break,
                };
                if orbit_of[j].is_some() {
                    break;
                }
                orbit_of[j] = Some(id);
                cur = cur.iter().map(|&(r, a)| (r, k.frobenius(a))).collect();
            }
        }
        orbit_base += n_orbits;
        for (i, (u, vals)) in pieces.into_iter().enumerate() {
            out.systems.push(Eigensystem {
                p: field.p(),
                field: k.clone(),
                multiplicity: u.dim(),
                orbit: orbit_of[i].unwrap_or(0),
                source: module.label.clone(),
                eigenspace: u.basis().mul(&basis_k)?,
                values: vals,
            });
        }
    }
    Ok(out)
}

/// Result of [`occurs_in`].
#[derive(Clone, Debug)]
pub struct Occurrence {
    pub found: bool,
    /// Basis (over the system's field) of the joint eigenspace in the target.
    pub witness: Matrix<FiniteField>,
    pub used: Vec<u64>,
    /// Primes `<= B` skipped because they divide the target level or the
    /// characteristic.
    pub skipped: Vec<u64>,
}

/// Whether `e` is a system of eigenvalues on `target` for all primes `r <= bound`.
pub fn occurs_in(e: &Eigensystem, target: &HeckeModule, bound: u64) -> Result<Occurrence> {
    let k = &e.field;
    let mut used = Vec::new();
    let mut skipped = Vec::new();
    let tfield = match target.field() {
        Some(f) => f.clone(),
        None => FiniteField::new(e.p, 1)?,
    };
    if tfield.p() != e.p {
        return Err(Error::FieldMismatch);
    }
    let emb = Embedding::new(&tfield, k)?;
    let mut w = Subspace::full(k, target.dim);
    for r in primes_up_to(bound) {
        if target.level % r == 0 || r == e.p {
            skipped.push(r);
            continue;
        }
        let a = e.get(r).ok_or(Error::MissingPrime(r))?;
        let t = target.ops.get(&r).ok_or(Error::MissingPrime(r))?;
        let tk = emb.apply_matrix(t);
        w = w.kernel_of(&tk.sub_scalar(&a))?;
        used.push(r);
        if w.dim() == 0 {
            break;
        }
    }
    Ok(Occurrence { found: w.dim() > 0, witness: w.basis().clone(), used, skipped })
}

/// `ceil(k [SL_2(Z) : Gamma] / 12)`.
pub fn sturm_bound(spec: &SubgroupSpec, k: u32) -> u64 {
    (k as u64 * spec.index()).div_ceil(12)
}

/// Primes `<= bound` not dividing `n`.
pub fn good_primes(bound: u64, n: u64) -> Vec<u64> {
    primes_up_to(bound).into_iter().filter(|r| n % r != 0).collect()
}

/// One pass/fail item of a verification report.
#[derive(Clone, Debug)]
pub struct CheckItem {
    pub name: String,
    pub pass: bool,
    /// Named integer witnesses (dimensions, ranks).
    pub witnesses: Vec<(String, i64)>,
    pub detail: String,
}

impl CheckItem {
    fn new(name: &str, pass: bool, witnesses: Vec<(&str, i64)>, detail: String) -> Self {
        CheckItem {
            name: String::from(name),
            pass,
            witnesses: witnesses.into_iter().map(|(k, v)| (String::from(k), v)).collect(),
            detail,
        }
    }
}

#[derive(Clone, Debug)]
pub struct WeightRaisingReport {
    pub level: u64,
    pub p: u64,
    pub bound: u64,
    pub items: Vec<CheckItem>,
    /// Weight-2 cuspidal systems with their occurrence flags in weight p+1.
    pub systems: Vec<(Eigensystem, bool)>,
}

impl WeightRaisingReport {
    pub fn all_pass(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Matching bound; defaults to the Sturm bound at weight `p + 1`.
    pub bound: Option<u64>,
    pub max_degree: usize,
    /// Defaults to `Gamma_1(N)`, the group of the lemmas.
    pub spec: Option<SubgroupSpec>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { bound: None, max_degree: 4, spec: None }
    }
}

fn check_hypotheses(n: u64, p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::Hypothesis(format!("p = {p} is not prime")));
    }
    if p < 5 {
        return Err(Error::Hypothesis(format!("p >= 5 fails for p = {p}")));
    }
    if n % p == 0 {
        return Err(Error::Hypothesis(format!("p does not divide N fails: {p} | {n}")));
    }
    Ok(())
}

/// The weight-raising suite over F_p at level `N`: (a) Lemma 1, (b) Shapiro,
/// (c) coefficient splitting, (d) Lemma 2, (e) occurrence of every weight-2
/// cuspidal eigensystem in weight `p + 1`.
pub fn verify_weight_raising(n: u64, p: u64, opts: &VerifyOptions) -> Result<WeightRaisingReport> {
    verify_weight_raising_cached(n, p, opts, &NoStore)
}

/// [`verify_weight_raising`] reading and writing Hecke matrices through `store`.
pub fn verify_weight_raising_cached(n: u64, p: u64, opts: &VerifyOptions, store: &dyn OperatorStore<FiniteField>) -> Result<WeightRaisingReport> {
    check_hypotheses(n, p)?;
    if n < 5 {
        return Err(Error::Hypothesis(format!("N >= 5 fails for N = {n}")));
    }
    let spec = opts.spec.clone().unwrap_or_else(|| SubgroupSpec::gamma1(n));
    if spec.base_level() != n {
        return Err(Error::Hypothesis(String::from("subgroup level differs from N")));
    }
    let f = FiniteField::new(p, 1)?;
    let small = ManinSpace::weight_k(&spec, 2, &f)?;
    let big = ManinSpace::weight_k(&spec.with_aux_prime(p)?, 2, &f)?;
    let test_primes: Vec<u64> = good_primes(60, n * p).into_iter().take(2).collect();
    let mut items = Vec::new();

    // (a) Lemma 1. Manin symbols compute H^1 (Lefschetz duality), where
    // alpha_1, alpha_2 are the level-raising transfers; alpha is injective
    // iff the stacked matrix has rank 2 dim. The kernel is Hom(Delta, F_p).
    let u1 = degeneracy_up(&small, &big, 1)?;
    let up = degeneracy_up(&small, &big, p)?;
    let rank = u1.vstack(&up)?.rank();
    let d1 = degeneracy_down(&big, &small, 1)?;
    let dp = degeneracy_down(&big, &small, p)?;
    let down_rank = d1.hstack(&dp)?.rank();
    items.push(CheckItem::new(
        "lemma1_dual_rank",
        rank == 2 * small.dim(),
        vec![
            ("rank", rank as i64),
            ("expected", 2 * small.dim() as i64),
            ("dim_level_np", big.dim() as i64),
            ("down_rank", down_rank as i64),
        ],
        format!("rank(alpha_1, alpha_{p}) from {} at weight 2", spec.descriptor()),
    ));

    // (b) Shapiro
    let sh = shapiro_iso_for(&spec, p, 2, &f)?;
    let mut ok = sh.big.dim() == sh.small.dim() && sh.iso.is_square() && sh.iso.rank() == sh.iso.rows();
    for &r in &test_primes {
        let tb = sh.big.hecke_cached(r, store)?;
        let ts = sh.small.hecke_cached(r, store)?;
        ok &= tb.mul(&sh.iso)? == sh.iso.mul(&ts)?;
    }
    items.push(CheckItem::new(
        "shapiro",
        ok,
        vec![("dim_level_np_trivial", sh.big.dim() as i64), ("dim_level_n_induced", sh.small.dim() as i64), ("iso_rank", sh.iso.rank() as i64)],
        format!("explicit iso transports T_r for r in {test_primes:?}"),
    ));

    // (c) splitting F_p[P^1] = triv + Symm^(p-1)
    let ind = CoefModule::induced(&f, p)?;
    let split = split_induced(&ind)?;
    let triv_space = small.clone();
    let symm_space = ManinSpace::new(&spec, (p + 1) as u32, &CoefModule::symm(&f, (p - 1) as u32))?;
    let incl_c = triv_space.module_map(&sh.small, &split.incl_const)?;
    let incl_s = symm_space.module_map(&sh.small, &ev_intertwiner(&f)?)?;
    let psi = incl_c.vstack(&incl_s)?;
    let pi = sh.small.module_map(&sh.small, &split.proj_const)?;
    let mut ok = psi.is_square() && psi.rank() == psi.rows();
    for &r in &test_primes {
        let ti = sh.small.hecke_cached(r, store)?;
        let blocks = triv_space.hecke_cached(r, store)?.block_diag(&symm_space.hecke_cached(r, store)?)?;
        ok &= psi.mul(&ti)? == blocks.mul(&psi)?;
        ok &= pi.mul(&ti)? == ti.mul(&pi)?;
    }
    items.push(CheckItem::new(
        "coefficient_splitting",
        ok,
        vec![
            ("dim_induced", sh.small.dim() as i64),
            ("dim_trivial", triv_space.dim() as i64),
            ("dim_symm", symm_space.dim() as i64),
            ("psi_rank", psi.rank() as i64),
        ],
        format!("Psi T_ind = (T_triv + T_symm) Psi for r in {test_primes:?}"),
    ));

    // (d) Lemma 2: beta = (zero-sum projection) o shapiro o alpha_p is
    // injective, i.e. has rank dim H^1(Gamma, F_p).
    let pz = sh.small.module_map(&sh.small, &split.proj_zero_sum)?;
    let beta = up.mul(&sh.iso)?.mul(&pz)?;
    let rank = beta.rank();
    items.push(CheckItem::new(
        "lemma2_dual_surjective",
        rank == small.dim(),
        vec![("rank", rank as i64), ("expected", small.dim() as i64), ("dim_symm", symm_space.dim() as i64)],
        format!("beta = proj_symm o shapiro o alpha_{p}"),
    ));

    // (e) Corollary 1
    let high = symm_space;
    let bound = opts.bound.unwrap_or_else(|| sturm_bound(&spec, (p + 1) as u32));
    let primes = good_primes(bound.max(2), n * p);
    let low_cusp = small.cuspidal_subspace()?;
    let high_cusp = high.cuspidal_subspace()?;
    let low_mod = HeckeModule::from_space_cached(&small, Some(&low_cusp), &primes, store)?;
    let high_mod = HeckeModule::from_space_cached(&high, Some(&high_cusp), &primes, store)?;
    let dec = decompose(&low_mod, opts.max_degree)?;
    let mut systems = Vec::new();
    let mut ok = dec.unsplit.is_empty();
    let mut witness_dims = 0i64;
    for e in &dec.systems {
        let occ = occurs_in(e, &high_mod, bound)?;
        ok &= occ.found;
        witness_dims += occ.witness.rows() as i64;
        systems.push((e.clone(), occ.found));
    }
    items.push(CheckItem::new(
        "corollary1_occurrence",
        ok,
        vec![
            ("systems", dec.systems.len() as i64),
            ("unsplit_dim", dec.unsplit.iter().map(|b| b.dim as i64).sum()),
            ("weight2_cusp_dim", low_cusp.dim() as i64),
            ("weight_p1_cusp_dim", high_cusp.dim() as i64),
            ("witness_dims", witness_dims),
        ],
        format!("primes <= {bound} away from {}", n * p),
    ));
    Ok(WeightRaisingReport { level: n, p, bound, items, systems })
}

/// Which bullet of the level-raising criterion applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bullet {
    /// `k = 2`: `a_p^2 = <p>`.
    WeightTwo,
    /// `2 < k <= p + 1`: `a_p = 0`.
    Middle,
    /// `k > p + 1`: always.
    High,
}

#[derive(Clone, Debug)]
pub struct LevelRaiseRow {
    pub system: Eigensystem,
    pub a_p: Gf,
    pub diamond_p: Option<Gf>,
    pub bullet: Bullet,
    pub criterion: bool,
    pub occurs: bool,
    pub agreement: bool,
    pub witness_dim: usize,
}

#[derive(Clone, Debug)]
pub struct LevelRaiseReport {
    pub level: u64,
    pub weight: u32,
    pub p: u64,
    pub bound: u64,
    pub pnew_dim: usize,
    pub rows: Vec<LevelRaiseRow>,
    pub caveat: &'static str,
}

pub const MOD_P_SHADOW: &str =
    "mod-p shadow: occurrence in the p-new subspace mod p is tested; congruences of characteristic-zero newforms are not certified";

impl LevelRaiseReport {
    pub fn all_agree(&self) -> bool {
        self.rows.iter().all(|r| r.agreement)
    }
}

/// The level-raising criterion tested against p-new occurrence mod `p`.
pub fn levelraise_check(n: u64, k: u32, p: u64, bound: Option<u64>, max_degree: usize) -> Result<LevelRaiseReport> {
    levelraise_check_cached(n, k, p, bound, max_degree, &NoStore)
}

/// [`levelraise_check`] reading and writing Hecke matrices through `store`.
pub fn levelraise_check_cached(
    n: u64,
    k: u32,
    p: u64,
    bound: Option<u64>,
    max_degree: usize,
    store: &dyn OperatorStore<FiniteField>,
) -> Result<LevelRaiseReport> {
    if k < 2 {
        return Err(Error::InvalidWeight(k));
    }
    check_hypotheses(n, p)?;
    let f = FiniteField::new(p, 1)?;
    let spec = SubgroupSpec::gamma0(n);
    let big_spec = spec.with_aux_prime(p)?;
    let small = ManinSpace::weight_k(&spec, k, &f)?;
    let big = ManinSpace::weight_k(&big_spec, k, &f)?;
    let bound = bound.unwrap_or_else(|| sturm_bound(&big_spec, k).max(sturm_bound(&spec, k)));
    let primes = good_primes(bound.max(2), n * p);
    let cusp = small.cuspidal_subspace()?;
    let mut module = HeckeModule::from_space_cached(&small, Some(&cusp), &primes, store)?;
    // a_p in characteristic p
    let tp = small.hecke_unchecked(p, HeilbronnFamily::Merel)?;
    module.add_operator(p, cusp.restrict(&tp)?)?;
    let dec = decompose(&module, max_degree)?;
    let pnew = pnew_subspace(&big, &small)?;
    let target = HeckeModule::from_space_cached(&big, Some(&pnew), &primes, store)?;
    let diamond = cusp.restrict(&small.diamond_operator(p)?)?;
    let mut rows = Vec::new();
    for e in &dec.systems {
        let a_p = e.get(p).ok_or(Error::MissingPrime(p))?;
        let kf = &e.field;
        let emb = Embedding::new(&f, kf)?;
        let dk = emb.apply_matrix(&diamond);
        let diamond_p = scalar_on(&e.eigenspace, &dk);
        let bullet = if k == 2 {
            Bullet::WeightTwo
        } else if (k as u64) <= p + 1 {
            Bullet::Middle
        } else {
            Bullet::High
        };
        let criterion = match bullet {
            Bullet::WeightTwo => diamond_p.is_some_and(|d| kf.mul(&a_p, &a_p) == d),
            Bullet::Middle => kf.is_zero(&a_p),
            Bullet::High => true,
        };
        let occ = occurs_in(&e.restrict_away(&[p]), &target, bound)?;
        rows.push(LevelRaiseRow {
            system: e.clone(),
            a_p,
            diamond_p,
            bullet,
            criterion,
            occurs: occ.found,
            agreement: criterion == occ.found,
            witness_dim: occ.witness.rows(),
        });
    }
    Ok(LevelRaiseReport { level: n, weight: k, p, bound, pnew_dim: pnew.dim(), rows, caveat: MOD_P_SHADOW })
}

/// The scalar by which `op` acts on the row space of `basis`, if it does.
fn scalar_on(basis: &Matrix<FiniteField>, op: &Matrix<FiniteField>) -> Option<Gf> {
    if basis.rows() == 0 {
        return None;
    }
    let img = basis.mul(op).ok()?;
    let f = basis.field();
    let (i, j) = (0..basis.cols()).find_map(|j| (!f.is_zero(basis.get(0, j))).then_some((0, j)))?;
    let lam = f.div(img.get(i, j), basis.get(i, j))?;
    (basis.scale(&lam) == img).then_some(lam)
}
