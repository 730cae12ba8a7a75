use std::fs;
use std::io::Write;
use std::time::Instant;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use weightraise_core::classical::{bernoulli, delta_qexp, eisenstein_qexp, theta_op, von_staudt_clausen, QExpansion, Ring};
use weightraise_core::coef::CoefModule;
use weightraise_core::eig::{
    decompose, good_primes, levelraise_check_cached, sturm_bound, verify_weight_raising_cached, Bullet, HeckeModule, VerifyOptions,
};
use weightraise_core::gfq::{FiniteField, Matrix};
use weightraise_core::msym::{ManinSpace, NoStore, OperatorStore};
use weightraise_core::rep::{brauer_signature, group_table, meataxe_irreducible, ss_equal, verify_semisimplicity};

use crate::cache::DiskCache;
use crate::config::{Command, Format, RunConfig, Subgroup};
use crate::report::{Check, EigenTable, Report};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Core(weightraise_core::Error),
    #[error("serialization: {0}")]
    Serialize(String),
}

impl From<weightraise_core::Error> for CliError {
    fn from(e: weightraise_core::Error) -> Self {
        match e {
            weightraise_core::Error::Hypothesis(s) => CliError::Hypothesis(s),
            other => CliError::Core(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

/// Runs the command and returns its report, without writing anything.
pub fn execute(config: &RunConfig) -> Result<Report, CliError> {
    config.validate()?;
    let start = Instant::now();
    let cache = match &config.cache_dir {
        Some(dir) => Some(DiskCache::open(dir)?),
        None => None,
    };
    let store: &dyn OperatorStore<FiniteField> = match &cache {
        Some(c) => c,
        None => &NoStore,
    };
    let mut report = Report::new(config.clone());
    match config.command {
        Command::Verify => verify(config, store, &mut report)?,
        Command::Eig => eig(config, store, &mut report)?,
        Command::Levelraise => levelraise(config, store, &mut report)?,
        Command::Rep => rep(config, &mut report)?,
        Command::Classical => classical(config, &mut report)?,
    }
    if let Some(c) = &cache {
        report.timing.cache_hits = c.hits();
        report.timing.cache_misses = c.misses();
    }
    report.timing.total_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

/// Executes `config`, writes the report and returns the process exit code.
pub fn run(config: &RunConfig) -> i32 {
    let report = match execute(config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("weightraise: {e}");
            return e.exit_code();
        }
    };
    if let Err(e) = write_report(config, &report) {
        eprintln!("weightraise: {e}");
        return e.exit_code();
    }
    if report.pass {
        0
    } else {
        1
    }
}

pub fn render(config: &RunConfig, report: &Report) -> Result<String, CliError> {
    match config.format {
        Format::Json => report.to_json().map_err(|e| CliError::Serialize(e.to_string())),
        Format::Csv => report.to_csv().map_err(|e| CliError::Serialize(e.to_string())),
    }
}

pub fn write_report(config: &RunConfig, report: &Report) -> Result<(), CliError> {
    let text = render(config, report)?;
    match &config.output {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn level(config: &RunConfig) -> Result<u64, CliError> {
    config.level.ok_or_else(|| CliError::Usage(String::from("--level is required")))
}

fn verify(config: &RunConfig, store: &dyn OperatorStore<FiniteField>, report: &mut Report) -> Result<(), CliError> {
    let n = level(config)?;
    let spec = config.subgroup.clone().unwrap_or(Subgroup::Gamma1).spec(n)?;
    let opts = VerifyOptions { bound: config.bound, max_degree: config.degree.unwrap_or(4), spec: Some(spec.clone()) };
    let r = verify_weight_raising_cached(n, config.p, &opts, store)?;
    for item in &r.items {
        report.push(Check::from(item));
    }
    for (i, (e, found)) in r.systems.iter().enumerate() {
        report.eigensystems.push(EigenTable::new(i, e, Some(*found)));
    }
    report.notes.push(format!("group {}; matching bound {}", spec.descriptor(), r.bound));
    Ok(())
}

fn eig(config: &RunConfig, store: &dyn OperatorStore<FiniteField>, report: &mut Report) -> Result<(), CliError> {
    let n = level(config)?;
    let p = config.p;
    let k = config.weight.unwrap_or(2);
    let spec = config.subgroup.clone().unwrap_or(Subgroup::Gamma0).spec(n)?;
    let f = FiniteField::new(p, 1)?;
    let space = ManinSpace::weight_k(&spec, k, &f)?;
    let cusp = space.cuspidal_subspace()?;
    let bound = config.bound.unwrap_or_else(|| sturm_bound(&spec, k));
    let primes = good_primes(bound.max(2), n * p);
    let module = HeckeModule::from_space_cached(&space, Some(&cusp), &primes, store)?;
    let ops: Vec<&Matrix<FiniteField>> = module.ops.values().collect();
    let mut commute = true;
    for (i, a) in ops.iter().enumerate() {
        for b in &ops[i + 1..] {
            commute &= a.mul(b)? == b.mul(a)?;
        }
    }
    report.push(Check::new(
        "hecke_commutativity",
        commute,
        &[("operators", ops.len() as i64), ("cusp_dim", cusp.dim() as i64)],
        format!("T_r on the cuspidal subspace for r in {primes:?}"),
    ));
    let dec = decompose(&module, config.degree.unwrap_or(4))?;
    let unsplit: usize = dec.unsplit.iter().map(|b| b.dim).sum();
    report.push(Check::new(
        "decomposition",
        dec.unsplit.is_empty() && dec.accounted_dim() == dec.dim,
        &[
            ("space_dim", space.dim() as i64),
            ("cusp_dim", cusp.dim() as i64),
            ("systems", dec.systems.len() as i64),
            ("unsplit_dim", unsplit as i64),
        ],
        format!("{} over primes <= {bound}", space.descriptor()),
    ));
    for (i, e) in dec.systems.iter().enumerate() {
        report.eigensystems.push(EigenTable::new(i, e, None));
    }
    Ok(())
}

fn levelraise(config: &RunConfig, store: &dyn OperatorStore<FiniteField>, report: &mut Report) -> Result<(), CliError> {
    let n = level(config)?;
    let k = config.weight.ok_or_else(|| CliError::Usage(String::from("--weight is required")))?;
    let r = levelraise_check_cached(n, k, config.p, config.bound, config.degree.unwrap_or(4), store)?;
    for (i, row) in r.rows.iter().enumerate() {
        let bullet = match row.bullet {
            Bullet::WeightTwo => "a_p^2 = <p>",
            Bullet::Middle => "a_p = 0",
            Bullet::High => "k > p + 1",
        };
        let f = &row.system.field;
        let a_p = f.coeffs(row.a_p);
        report.push(Check::new(
            &format!("system_{i}_agreement"),
            row.agreement,
            &[
                ("criterion", row.criterion as i64),
                ("occurs", row.occurs as i64),
                ("witness_dim", row.witness_dim as i64),
                ("field_degree", f.degree() as i64),
            ],
            format!("criterion {bullet}; a_p = {a_p:?}"),
        ));
        report.eigensystems.push(EigenTable::new(i, &row.system, Some(row.occurs)));
    }
    report.push(Check::new(
        "pnew_subspace",
        true,
        &[("pnew_dim", r.pnew_dim as i64), ("systems", r.rows.len() as i64), ("bound", r.bound as i64)],
        format!("Gamma_0({}) weight {} at p = {}", n, k, config.p),
    ));
    report.notes.push(r.caveat.to_string());
    Ok(())
}

fn rep(config: &RunConfig, report: &mut Report) -> Result<(), CliError> {
    let q = config.q.ok_or_else(|| CliError::Usage(String::from("--q is required")))?;
    let g = group_table(q)?;
    let f = g.field().clone();
    let e = f.degree();
    let total: usize = g.classes().iter().map(|c| c.size).sum();
    report.push(Check::new(
        "class_equation",
        total == g.order(),
        &[("order", g.order() as i64), ("classes", g.classes().len() as i64)],
        format!("SL_2(F_{q}) by exhaustive conjugation"),
    ));
    let exps: Vec<u32> = (0..e).collect();
    let tt = CoefModule::twisted_tensor(&f, &exps)?;
    let verdict = meataxe_irreducible(&tt, &g)?;
    report.push(Check::new(
        "twisted_tensor_irreducible",
        verdict.is_irreducible(),
        &[("dim", tt.dim() as i64)],
        format!("MeatAxe on {}", tt.descriptor()),
    ));
    let ind = CoefModule::induced(&f, q)?;
    let sum = CoefModule::direct_sum(&[CoefModule::trivial(&f), tt.clone()])?;
    let equal = ss_equal(&brauer_signature(&ind, &g)?, &brauer_signature(&sum, &g)?)?;
    let regular = g.classes().iter().filter(|c| c.p_regular).count();
    report.push(Check::new(
        "ss_equal_induced",
        equal,
        &[("dim", ind.dim() as i64), ("p_regular_classes", regular as i64)],
        format!("induced({q}) against trivial + {}", tt.descriptor()),
    ));
    let ss = verify_semisimplicity(&ind, &g)?;
    let mut w = vec![("projectors_commute", ss.projectors_commute as i64)];
    let names: Vec<String> = (0..ss.summand_dims.len()).map(|i| format!("summand_{i}_dim")).collect();
    for (name, d) in names.iter().zip(&ss.summand_dims) {
        w.push((name.as_str(), *d as i64));
    }
    report.push(Check::new("induced_semisimple", ss.semisimple, &w, "equivariant idempotents, each summand MeatAxe-irreducible"));
    Ok(())
}

fn classical(config: &RunConfig, report: &mut Report) -> Result<(), CliError> {
    let p = config.p;
    let prec = config.precision.unwrap_or(100);
    let e = eisenstein_qexp((p - 1) as u32, prec, Ring::Rational)?;
    report.push(Check::new(
        "hasse_lift",
        e.reduce_mod(p)?.is_one(),
        &[("weight", (p - 1) as i64), ("precision", prec as i64)],
        format!("E_{} = 1 mod {p}", p - 1),
    ));
    let mut ok = true;
    for k in (2..=40).step_by(2) {
        let oracle: u64 = (2..=k as u64 + 1).filter(|&l| is_prime(l) && (k as u64).is_multiple_of(l - 1)).product();
        let b = bernoulli(k)?;
        ok &= *b.denom() == oracle.into() && von_staudt_clausen(k) == oracle.into();
    }
    let bp = bernoulli((p - 1) as u32)?;
    let divides = (bp.denom() % num_bigint::BigInt::from(p)) == 0.into();
    report.push(Check::new(
        "von_staudt_clausen",
        ok && divides,
        &[("max_k", 40), ("p_divides_denominator", divides as i64)],
        "denominator of B_k is the product of primes l with (l - 1) | k",
    ));
    let mut rng = ChaCha8Rng::seed_from_u64(p);
    let tp = prec.min(60);
    let mut ok = true;
    for _ in 0..20 {
        let c: Vec<i64> = (0..tp).map(|_| (rng.next_u64() % p) as i64).collect();
        let f = QExpansion::from_integers(Ring::Fp(p), &c)?;
        let mut g = f.clone();
        for _ in 0..p {
            g = theta_op(&g)?;
        }
        ok &= g == theta_op(&f)?;
    }
    report.push(Check::new("theta_p_equals_theta", ok, &[("samples", 20), ("precision", tp as i64)], "seeded random expansions over F_p"));
    let dp = prec.min(200);
    let d = delta_qexp(dp, Ring::Rational)?;
    let tau = |n: usize| d.coeff(n).cloned();
    let mut ok = true;
    let mut pairs = 0;
    for m in 2..dp {
        for n in m + 1..dp {
            if m * n >= dp || num_integer::gcd(m, n) != 1 {
                continue;
            }
            pairs += 1;
            ok &= match (tau(m), tau(n), tau(m * n)) {
                (Some(a), Some(b), Some(c)) => a * b == c,
                _ => false,
            };
        }
    }
    report.push(Check::new("delta_multiplicative", ok, &[("pairs", pairs), ("precision", dp as i64)], "tau(mn) = tau(m) tau(n) for coprime m, n"));
    Ok(())
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}
