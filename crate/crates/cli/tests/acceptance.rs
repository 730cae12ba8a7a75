//! One line per acceptance criterion. Exits nonzero if any criterion deviates
//! from its recorded outcome.

use std::time::Instant;

use weightraise::{execute, RunConfig};
use weightraise_core::classical::{bernoulli, eisenstein_qexp, theta_op, QExpansion, Ring};
use weightraise_core::coef::{split_induced, CoefModule};
use weightraise_core::cong::SubgroupSpec;
use weightraise_core::eig::{decompose, good_primes, levelraise_check, occurs_in, verify_weight_raising, Bullet, HeckeModule, VerifyOptions};
use weightraise_core::gfq::{FiniteField, Gf, Matrix};
use weightraise_core::msym::{degeneracy_down, degeneracy_up, HeilbronnFamily, ManinSpace, OperatorStore};
use weightraise_core::rep::{brauer_signature, group_table, meataxe_irreducible, ss_equal, verify_semisimplicity};

const PAIRS: [(u64, u64); 4] = [(7, 5), (11, 5), (13, 5), (11, 7)];

struct Outcome {
    pass: bool,
    detail: String,
    /// Expected result when it is not a pass, with the reason.
    known_failure: Option<&'static str>,
}

fn fp(p: u64) -> FiniteField {
    FiniteField::new(p, 1).unwrap()
}

fn g0(n: u64, k: u32, p: u64) -> ManinSpace<FiniteField> {
    ManinSpace::weight_k(&SubgroupSpec::gamma0(n), k, &fp(p)).unwrap()
}

/// #E(F_r) for E: y^2 + y = x^3 - x^2 - 10x - 20 (11a), by brute force.
fn points_11a(r: i64) -> i64 {
    let mut n = 1;
    for x in 0..r {
        for y in 0..r {
            if (y * y + y - (x * x * x - x * x - 10 * x - 20)).rem_euclid(r) == 0 {
                n += 1;
            }
        }
    }
    n
}

/// tau(n) mod m from q prod (1 - q^k)^24.
fn tau_mod(n: usize, m: i64) -> i64 {
    let mut c = vec![0i64; n + 1];
    c[0] = 1;
    for k in 1..=n {
        for _ in 0..24 {
            for i in (k..=n).rev() {
                c[i] = (c[i] - c[i - k]).rem_euclid(m);
            }
        }
    }
    c[n - 1]
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed().as_secs_f64())
}

fn gamma0_report(n: u64, p: u64) -> (weightraise_core::eig::WeightRaisingReport, f64) {
    let opts = VerifyOptions { spec: Some(SubgroupSpec::gamma0(n)), ..VerifyOptions::default() };
    timed(|| verify_weight_raising(n, p, &opts).unwrap())
}

fn criterion1() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    let mut obstruction_as_analysed = true;
    for (n, p) in PAIRS {
        let ((rank, dim, down), secs) = timed(|| {
            let small = g0(n, 2, p);
            let big = ManinSpace::weight_k(&SubgroupSpec::gamma0(n).with_aux_prime(p).unwrap(), 2, &fp(p)).unwrap();
            let up = degeneracy_up(&small, &big, 1).unwrap().vstack(&degeneracy_up(&small, &big, p).unwrap()).unwrap();
            let down = degeneracy_down(&big, &small, 1).unwrap().hstack(&degeneracy_down(&big, &small, p).unwrap()).unwrap();
            (up.rank(), small.dim(), down.rank())
        });
        let ok = rank == 2 * dim && secs < 10.0;
        pass &= ok;
        if (n, p) == (11, 5) {
            obstruction_as_analysed = rank + 1 == 2 * dim;
        } else {
            obstruction_as_analysed &= ok;
        }
        parts.push(format!("({n},{p}) rank {rank}/{} down {down} {secs:.2}s", 2 * dim));
    }
    // the paper's group
    let r = verify_weight_raising(11, 5, &VerifyOptions::default()).unwrap();
    let g1 = r.items[0].pass;
    parts.push(format!("Gamma1(11),5 full rank {g1}"));
    Outcome {
        pass,
        detail: parts.join("; "),
        known_failure: (obstruction_as_analysed && g1)
            .then_some("Gamma0(11), p = 5: ker alpha = Hom(Delta, F_5) != 0 (Delta ->> (Z/11)^*, 5 | 10); Eisenstein congruence of 11a"),
    }
}

fn criterion2_3_4(which: usize) -> Outcome {
    let name = ["shapiro", "coefficient_splitting", "lemma2_dual_surjective"][which];
    let mut parts = Vec::new();
    let mut pass = true;
    let mut as_analysed = true;
    for (n, p) in PAIRS {
        let (r, secs) = gamma0_report(n, p);
        let item = r.items.iter().find(|i| i.name == name).unwrap();
        pass &= item.pass;
        if (n, p) == (11, 5) && which == 2 {
            let rank = item.witnesses.iter().find(|w| w.0 == "rank").unwrap().1;
            let exp = item.witnesses.iter().find(|w| w.0 == "expected").unwrap().1;
            as_analysed &= rank + 1 == exp;
        } else {
            as_analysed &= item.pass;
        }
        let w: Vec<String> = item.witnesses.iter().map(|(k, v)| format!("{k}={v}")).collect();
        parts.push(format!("({n},{p}) {} {secs:.2}s", w.join(",")));
    }
    let known = if which == 2 && as_analysed {
        let r = verify_weight_raising(11, 5, &VerifyOptions::default()).unwrap();
        r.items[3].pass.then_some("Gamma0(11), p = 5: beta = proj o shapiro o alpha_5 loses the same Hom(Delta, F_5) class; passes on Gamma1(11)")
    } else {
        None
    };
    Outcome { pass, detail: parts.join("; "), known_failure: known }
}

fn criterion5() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for (p, k) in [(5u64, 6u32), (7, 8)] {
        let (found, secs) = timed(|| {
            let primes = good_primes(60, 11 * p);
            let low = g0(11, 2, p);
            let high = g0(11, k, p);
            let lc = low.cuspidal_subspace().unwrap();
            let hc = high.cuspidal_subspace().unwrap();
            let lm = HeckeModule::from_space(&low, Some(&lc), &primes).unwrap();
            let hm = HeckeModule::from_space(&high, Some(&hc), &primes).unwrap();
            let dec = decompose(&lm, 4).unwrap();
            let mut all = dec.unsplit.is_empty() && !dec.systems.is_empty();
            let mut wit = 0;
            for e in &dec.systems {
                let occ = occurs_in(e, &hm, 60).unwrap();
                all &= occ.found && occ.skipped.contains(&p) && occ.skipped.contains(&11);
                wit += occ.witness.rows();
            }
            (all, dec.systems.len(), wit)
        });
        pass &= found.0 && secs < 60.0;
        parts.push(format!("p={p} k={k}: {} systems, witness dim {}, {secs:.2}s", found.1, found.2));
    }
    Outcome { pass, detail: parts.join("; "), known_failure: None }
}

fn criterion6() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for p in [5u64, 7] {
        let s = g0(11, 2, p);
        let c = s.cuspidal_subspace().unwrap();
        let f = fp(p);
        for r in [2u64, 3, 7, 13] {
            let a = (r as i64 + 1 - points_11a(r as i64)).rem_euclid(p as i64);
            // T_p at weight 2 with trivial coefficients is integral, so r = p is allowed here
            let t = if r == p { s.hecke_unchecked(r, HeilbronnFamily::Merel) } else { s.hecke_operator(r) };
            let t = c.restrict(&t.unwrap()).unwrap();
            let ok = t == Matrix::identity(&f, c.dim()).scale(&Gf(a as u32));
            pass &= ok;
            if p == 5 {
                parts.push(format!("a_{r}={}", r as i64 + 1 - points_11a(r as i64)));
            }
        }
    }
    Outcome { pass, detail: format!("{} (mod 5 and mod 7)", parts.join(",")), known_failure: None }
}

fn criterion7() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for p in [5u64, 7] {
        let g = group_table(p).unwrap();
        let f = g.field().clone();
        let ind = CoefModule::induced(&f, p).unwrap();
        let sym = CoefModule::symm(&f, (p - 1) as u32);
        let sum = CoefModule::direct_sum(&[CoefModule::trivial(&f), sym.clone()]).unwrap();
        let eq = ss_equal(&brauer_signature(&ind, &g).unwrap(), &brauer_signature(&sum, &g).unwrap()).unwrap();
        let irr = meataxe_irreducible(&sym, &g).unwrap().is_irreducible();
        let ss = verify_semisimplicity(&ind, &g).unwrap();
        let split = split_induced(&ind).unwrap();
        let eqv = [[0i64, -1, 1, 0], [1, 1, 0, 1]].iter().all(|m| {
            let a = ind.act_int(m).unwrap();
            a.mul(&split.proj_zero_sum).unwrap() == split.proj_zero_sum.mul(&a).unwrap()
        });
        pass &= eq && irr && ss.semisimple && ss.projectors_commute && eqv;
        parts.push(format!("p={p}: ss_equal {eq}, Symm irreducible {irr}, split {:?}", ss.summand_dims));
    }
    Outcome { pass, detail: parts.join("; "), known_failure: None }
}

fn criterion8() -> Outcome {
    let ((ok, classes, dim), secs) = timed(|| {
        let g = group_table(25).unwrap();
        let f = g.field().clone();
        let tt = CoefModule::twisted_tensor(&f, &[0, 1]).unwrap();
        let irr = meataxe_irreducible(&tt, &g).unwrap().is_irreducible();
        let ind = CoefModule::induced(&f, 25).unwrap();
        let sum = CoefModule::direct_sum(&[CoefModule::trivial(&f), tt.clone()]).unwrap();
        let eq = ss_equal(&brauer_signature(&ind, &g).unwrap(), &brauer_signature(&sum, &g).unwrap()).unwrap();
        let total: usize = g.classes().iter().map(|c| c.size).sum();
        (irr && eq && tt.dim() == 25 && total == 15600, g.classes().len(), tt.dim())
    });
    Outcome {
        pass: ok && secs < 300.0,
        detail: format!("SL2(F25) {classes} classes, twisted tensor dim {dim}, {secs:.2}s"),
        known_failure: None,
    }
}

fn criterion9() -> Outcome {
    let mut pass = true;
    for p in [5u64, 7, 11, 13] {
        pass &= eisenstein_qexp((p - 1) as u32, 100, Ring::Rational).unwrap().reduce_mod(p).unwrap().is_one();
    }
    let prime = |n: u64| n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d));
    for k in (2..=40u32).step_by(2) {
        let d: u64 = (2..=k as u64 + 1).filter(|&l| prime(l) && (k as u64).is_multiple_of(l - 1)).product();
        pass &= *bernoulli(k).unwrap().denom() == d.into();
    }
    let mut s = 0x9e3779b97f4a7c15u64;
    for i in 0..20 {
        let p = [5u64, 7, 11, 13][i % 4];
        let c: Vec<i64> = (0..50)
            .map(|_| {
                s ^= s << 13;
                s ^= s >> 7;
                s ^= s << 17;
                (s % p) as i64
            })
            .collect();
        let f = QExpansion::from_integers(Ring::Fp(p), &c).unwrap();
        let mut g = f.clone();
        for _ in 0..p {
            g = theta_op(&g).unwrap();
        }
        pass &= g == theta_op(&f).unwrap();
    }
    Outcome { pass, detail: String::from("E_(p-1) = 1 mod p to q^100, denominators B_2..B_40, Theta^p = Theta on 20 samples"), known_failure: None }
}

fn criterion10() -> Outcome {
    let r7 = levelraise_check(1, 12, 7, None, 4).unwrap();
    let ok7 = r7.rows.len() == 1 && r7.rows[0].bullet == Bullet::High && r7.rows[0].occurs;
    let r11 = levelraise_check(1, 12, 11, None, 4).unwrap();
    let oracle = tau_mod(11, 11) == 0;
    let ok11 = r11.rows.len() == 1 && r11.rows[0].criterion == oracle && r11.rows[0].occurs == oracle;
    let caveat = r7.caveat.contains("not certified") && r11.caveat == r7.caveat;
    Outcome {
        pass: ok7 && ok11 && caveat,
        detail: format!(
            "p=7 occurs {} (pnew dim {}); p=11 tau(11) mod 11 = {}, criterion {}, occurs {}; caveat carried",
            r7.rows.first().map(|r| r.occurs).unwrap_or(false),
            r7.pnew_dim,
            tau_mod(11, 11),
            oracle,
            r11.rows.first().map(|r| r.occurs).unwrap_or(true)
        ),
        known_failure: None,
    }
}

fn criterion11() -> Outcome {
    let mut parts = Vec::new();
    // Hecke commutativity and star
    let mut hecke = true;
    let mut star = true;
    for s in [g0(37, 2, 5), g0(11, 6, 7), ManinSpace::weight_k(&SubgroupSpec::gamma1(13), 2, &fp(5)).unwrap()] {
        let ts: Vec<Matrix<FiniteField>> = [2, 3, 19].iter().map(|&r| s.hecke_operator(r).unwrap()).collect();
        for a in &ts {
            for b in &ts {
                hecke &= a.mul(b).unwrap() == b.mul(a).unwrap();
            }
        }
        let st = s.star_involution().unwrap();
        star &= st.mul(&st).unwrap().is_identity();
        for t in &ts {
            star &= st.mul(t).unwrap() == t.mul(&st).unwrap();
        }
    }
    parts.push(format!("hecke {hecke}, star {star}"));
    // rank-nullity
    let f = fp(7);
    let mut rn = true;
    for seed in 0..20u32 {
        let m = Matrix::from_fn(&f, 5, 7, |i, j| Gf((seed * 31 + (i as u32) * 7 + (j as u32) * (j as u32 + seed)) % 7));
        rn &= m.rank() + m.kernel().rows() == 7;
    }
    parts.push(format!("rank-nullity {rn}"));
    // cache round trip
    let dir = tempfile::tempdir().unwrap();
    let cache = weightraise::DiskCache::open(dir.path()).unwrap();
    let s = g0(11, 2, 5);
    let t2 = s.hecke_operator(2).unwrap();
    cache.store("T2", &t2);
    let rt = cache.load("T2").as_ref() == Some(&t2);
    parts.push(format!("cache {rt}"));
    // determinism
    let cfg = config(&["weightraise", "verify", "--level", "11", "--p", "5"]);
    let mut a = execute(&cfg).unwrap();
    let mut b = execute(&cfg).unwrap();
    a.timing = Default::default();
    b.timing = Default::default();
    let det = a.to_json().unwrap() == b.to_json().unwrap();
    parts.push(format!("determinism {det}"));
    Outcome { pass: hecke && star && rn && rt && det, detail: parts.join(", "), known_failure: None }
}

fn config(args: &[&str]) -> RunConfig {
    use clap::Parser;
    RunConfig::from_cli(weightraise::config::Cli::try_parse_from(args).unwrap()).unwrap()
}

fn main() {
    let start = Instant::now();
    let criteria: Vec<(usize, Box<dyn Fn() -> Outcome>)> = vec![
        (1, Box::new(criterion1)),
        (2, Box::new(|| criterion2_3_4(0))),
        (3, Box::new(|| criterion2_3_4(1))),
        (4, Box::new(|| criterion2_3_4(2))),
        (5, Box::new(criterion5)),
        (6, Box::new(criterion6)),
        (7, Box::new(criterion7)),
        (8, Box::new(criterion8)),
        (9, Box::new(criterion9)),
        (10, Box::new(criterion10)),
        (11, Box::new(criterion11)),
    ];
    let mut unexpected = 0;
    for (i, c) in criteria {
        let o = c();
        match (o.pass, o.known_failure) {
            (true, _) => println!("criterion {i:>2}: PASS  {}", o.detail),
            (false, Some(why)) => println!("criterion {i:>2}: FAIL  {} [known: {why}]", o.detail),
            (false, None) => {
                unexpected += 1;
                println!("criterion {i:>2}: FAIL  {}", o.detail);
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    println!("acceptance total {secs:.1}s");
    if unexpected > 0 || secs > 600.0 {
        std::process::exit(1);
    }
}
