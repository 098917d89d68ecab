//! Acceptance suite: one PASS/FAIL line per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use albertkit_core::clifford::{arf_trivial, clifford_iso_check};
use albertkit_core::corestriction::{
    albert_form_with_kappa, albert_value, corestriction, f_map_check, split_identification, TensorAlgebra,
};
use albertkit_core::error::Error;
use albertkit_core::field::{Elem, Field};
use albertkit_core::form::QuadraticForm;
use albertkit_core::harness::{
    albert_data, check_equivalence, generate_instance, run_batch, verify_certificate, CondIii, Instance,
    EquivalenceReport, FAMILIES,
};
use albertkit_core::linalg;
use albertkit_core::oracle::{self, finite::structured_isotropic, hilbert_symbol_q, IsotropyVerdict};
use albertkit_core::quaternion::{validate_subalgebra, Condition, QuatElem, Quaternion};
use albertkit_core::transfer::{descend, transfer, verify_descent};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn quadratic(base: &Field, alpha: i64, beta: i64, symbol: &str) -> Field {
    Field::quadratic(base, &base.from_i64(alpha), &base.from_i64(beta), symbol).unwrap()
}

fn q_sqrt(d: i64) -> Field {
    quadratic(&Field::rationals(), 0, d, "r")
}

fn f9_over_f3() -> Field {
    quadratic(&Field::finite(3).unwrap(), 0, -1, "w")
}

fn f4_over_f2() -> Field {
    quadratic(&Field::finite(2).unwrap(), 1, 1, "w")
}

fn random_elem(f: &Field, rng: &mut ChaCha8Rng) -> Elem {
    f.random(rng, 5)
}

fn random_quat(q: &Quaternion, rng: &mut ChaCha8Rng) -> QuatElem {
    let f = q.base();
    q.elem(std::array::from_fn(|_| random_elem(f, rng)))
}

/// Random upper triangular form of dimension `n`, resampled until nonsingular.
fn random_nonsingular(f: &Field, n: usize, rng: &mut ChaCha8Rng) -> QuadraticForm {
    loop {
        let upper: Vec<Vec<Elem>> = (0..n)
            .map(|i| (0..n).map(|j| if j < i { f.zero() } else { f.random(rng, 4) }).collect())
            .collect();
        let phi = QuadraticForm::new(f, upper).unwrap();
        if phi.classify().unwrap().nonsingular {
            return phi;
        }
    }
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let f5 = Field::finite(5).unwrap();
    let f4 = Field::finite(4).unwrap();
    let g = f4.generator();
    let q = Field::rationals();
    let k = q_sqrt(2);
    let algebras = vec![
        Quaternion::new(&f5, &f5.zero(), &f5.from_i64(2), &f5.from_i64(3)).unwrap(),
        Quaternion::new(&f4, &f4.one(), &g, &(g.clone() + f4.one())).unwrap(),
        Quaternion::hamilton(&q).unwrap(),
        Quaternion::new(&q, &q.one(), &q.from_i64(-3), &q.from_i64(7)).unwrap(),
        Quaternion::hamilton(&k).unwrap(),
        Quaternion::new(&k, &k.zero(), &(k.generator() + k.from_i64(3)), &k.from_i64(-5)).unwrap(),
    ];
    let start = Instant::now();
    let mut checked = 0;
    for alg in &algebras {
        for _ in 0..500 {
            let x = random_quat(alg, &mut rng);
            let y = random_quat(alg, &mut rng);
            let ch = alg.add(&alg.sub(&alg.mul(&x, &x), &alg.scale(&alg.trd(&x), &x)), &alg.scalar(&alg.nrd(&x)));
            ensure(ch.is_zero(), || format!("Cayley-Hamilton fails for {x} over {}", alg.base()))?;
            let xy = alg.mul(&x, &y);
            ensure(alg.nrd(&xy) == alg.nrd(&x) * alg.nrd(&y), || format!("Nrd not multiplicative at {x}, {y}"))?;
            ensure(alg.sigma(&alg.sigma(&x)) == x, || format!("sigma not an involution at {x}"))?;
            ensure(alg.sigma(&xy) == alg.mul(&alg.sigma(&y), &alg.sigma(&x)), || {
                format!("sigma not an anti-automorphism at {x}, {y}")
            })?;
            checked += 1;
        }
    }
    let secs = start.elapsed();
    ensure(secs < Duration::from_secs(10), || format!("took {secs:?}"))?;
    Ok(format!("{checked} elements over F5, F4, Q, Q(sqrt2) in {:.2}s", secs.as_secs_f64()))
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let fields = [q_sqrt(2), q_sqrt(3), f9_over_f3(), f4_over_f2()];
    let mut count = 0;
    for k in &fields {
        for i in 0..200 {
            let n = if i % 2 == 0 { 2 } else { 4 };
            let phi = random_nonsingular(k, n, &mut rng);
            let t = transfer(&phi).map_err(|e| e.to_string())?;
            ensure(t.dim() == 2 * n, || "transfer has the wrong dimension".into())?;
            ensure(t.classify().unwrap().nonsingular, || format!("transfer of {phi:?} is singular"))?;
            count += 1;
        }
    }
    let k = q_sqrt(2);
    let q = Field::rationals();
    let t = transfer(&QuadraticForm::diagonal(&k, &[k.one()])).map_err(|e| e.to_string())?;
    ensure(t.upper() == &vec![vec![q.zero(), q.from_i64(2)], vec![q.zero(), q.zero()]], || {
        format!("transfer of <1> is {:?}", t.upper())
    })?;
    let d = oracle::witt_decompose(&t).map_err(|e| e.to_string())?;
    ensure(d.hyperbolic_count == 1 && d.radical_dim == 0, || "transfer of <1> is not hyperbolic".into())?;
    Ok(format!("{count} forms stay nonsingular; s_*<1> = 2xy"))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let fields = [q_sqrt(2), q_sqrt(3), f9_over_f3(), f4_over_f2()];
    let mut odd_char2 = 0;
    let mut total = 0;
    let mut undecided = 0;
    for (fi, k) in fields.iter().enumerate() {
        let mut i = 0;
        while i < 25 {
            let n = [2, 3, 4, 2][i % 4];
            let n = if k.characteristic() == 2 { 2 * (n / 2).max(1) } else { n };
            // over number fields: small diagonal forms, since the K-oracle is a
            // bounded search in dims 3, 4
            let phi = if k.characteristic() == 0 {
                let d: Vec<Elem> = (0..n).map(|_| loop {
                    let c = k.random(&mut rng, 3);
                    if !c.is_zero() {
                        break c;
                    }
                }).collect();
                QuadraticForm::diagonal(k, &d)
            } else {
                random_nonsingular(k, n, &mut rng)
            };
            let r = match descend(&phi) {
                Err(Error::OracleIncomplete(_)) if k.characteristic() == 0 => {
                    undecided += 1;
                    continue;
                }
                r => r.map_err(|e| format!("field {fi}, {phi:?}: {e}"))?,
            };
            i += 1;
            verify_descent(&phi, &r).map_err(|e| format!("field {fi}: {e}"))?;
            let independent = oracle::witt_index(&transfer(&phi).unwrap()).map_err(|e| e.to_string())?;
            ensure(r.psi.dim() == independent, || {
                format!("dim psi = {}, i0 = {independent}", r.psi.dim())
            })?;
            let class = r.psi.classify().unwrap();
            ensure(r.psi.dim() == 0 || class.nondegenerate, || "psi degenerate".into())?;
            if k.characteristic() == 2 && r.psi.dim() % 2 == 1 {
                ensure(!class.nonsingular, || "odd psi in characteristic 2 is nonsingular".into())?;
                odd_char2 += 1;
            }
            total += 1;
        }
    }
    ensure(odd_char2 > 0, || "no odd-index instance in characteristic 2".into())?;
    Ok(format!(
        "{total} descents verified, {odd_char2} with odd index in characteristic 2, {undecided} resampled (K-oracle undecided)"
    ))
}

/// Diagonal forms and `[a, 1, b] ⟂ diag` over `f` with `dim <= 4`, all coefficients.
fn sweep(f: &Field) -> Vec<QuadraticForm> {
    let els = f.elements().unwrap();
    let mut out = Vec::new();
    let tuples = |n: usize| -> Vec<Vec<Elem>> {
        let mut acc: Vec<Vec<Elem>> = vec![vec![]];
        for _ in 0..n {
            acc = acc
                .into_iter()
                .flat_map(|t| els.iter().map(move |e| [t.clone(), vec![e.clone()]].concat()))
                .collect();
        }
        acc
    };
    for n in 1..=4 {
        for c in tuples(n) {
            out.push(QuadraticForm::diagonal(f, &c));
        }
    }
    for rest in 0..=2 {
        for c in tuples(2 + rest) {
            let b = QuadraticForm::new(f, vec![vec![c[0].clone(), f.one()], vec![f.zero(), c[1].clone()]]).unwrap();
            out.push(b.orthogonal_sum(&QuadraticForm::diagonal(f, &c[2..])));
        }
    }
    out
}

fn criterion_4() -> Outcome {
    let mut count = 0;
    for p in [3, 5] {
        let f = Field::finite(p).unwrap();
        for phi in sweep(&f) {
            if !phi.classify().unwrap().regular {
                continue;
            }
            let v = match oracle::isotropy(&phi) {
                IsotropyVerdict::Isotropic(v) => v,
                _ => continue,
            };
            let s = phi.isotropic_spanning_set(&v).map_err(|e| format!("{phi:?}: {e}"))?;
            ensure(s.len() == phi.dim() && linalg::rank(&s) == phi.dim(), || format!("{phi:?}: not a basis"))?;
            ensure(s.iter().all(|x| phi.evaluate(x).unwrap().is_zero()), || format!("{phi:?}: anisotropic member"))?;
            count += 1;
        }
    }
    Ok(format!("{count} regular isotropic forms over F3, F5"))
}

fn family_instances(per_family: u64) -> Vec<Instance> {
    FAMILIES
        .iter()
        .flat_map(|f| (0..per_family).map(move |s| generate_instance(f, s).unwrap()))
        .collect()
}

fn criterion_5() -> Outcome {
    let mut split = 0;
    for inst in family_instances(10) {
        let q = inst.build().map_err(|e| e.to_string())?;
        let cor = corestriction(&q).map_err(|e| e.to_string())?;
        let tag = format!("{} seed {}", inst.family, inst.seed);
        ensure(cor.dim() == 16, || format!("{tag}: dim {}", cor.dim()))?;
        ensure(cor.algebra().is_associative() && cor.algebra().is_unital(), || format!("{tag}: not a unital algebra"))?;
        ensure(cor.base_change_rank() == 32, || format!("{tag}: Cor ⊗ K has rank {}", cor.base_change_rank()))?;
        if q.base().is_split() {
            let (direct, images) = split_identification(&cor).map_err(|e| e.to_string())?;
            ensure(cor.algebra().is_isomorphism(&direct, &images).unwrap(), || {
                format!("{tag}: split identification is not an isomorphism")
            })?;
            split += 1;
        }
    }
    ensure(split >= 20, || format!("only {split} split instances"))?;
    Ok(format!("50 corestrictions of dimension 16, {split} split identifications"))
}

fn criterion_6() -> Outcome {
    for inst in family_instances(10) {
        let q = inst.build().map_err(|e| e.to_string())?;
        let tag = format!("{} seed {}", inst.family, inst.seed);
        let (t, data) = albert_data(&q).map_err(|e| format!("{tag}: {e}"))?;
        let class = data.albert.classify().unwrap();
        ensure(data.albert.field() == t.f() && data.albert.dim() == 6, || format!("{tag}: not a 6-dim form over F"))?;
        ensure(class.nonsingular, || format!("{tag}: Albert form singular"))?;
        ensure(arf_trivial(&data.albert).map_err(|e| e.to_string())?.is_some(), || format!("{tag}: Arf nontrivial"))?;
        let rep = f_map_check(&t, &data, 100, inst.seed).map_err(|e| format!("{tag}: {e}"))?;
        ensure(rep.checked == 106 && rep.entries_in_cor, || format!("{tag}: f-map entries leave Cor"))?;
        let iso = clifford_iso_check(&t, &data).map_err(|e| format!("{tag}: {e}"))?;
        ensure(iso.rank == 64 && iso.even_diagonal, || format!("{tag}: Clifford rank {}", iso.rank))?;
    }
    // worked values over Q(sqrt2) for Hamilton's quaternions, kappa = sqrt2
    let k = q_sqrt(2);
    let q = Quaternion::hamilton(&k).unwrap();
    let r = k.generator();
    let i = q.elem([k.zero(), k.one(), k.zero(), k.zero()]);
    let j = q.elem([k.zero(), k.one() + r.clone(), k.zero(), k.zero()]);
    let f = Field::rationals();
    let v0 = albert_value(&q, &r, &i).map_err(|e| e.to_string())?;
    let v1 = albert_value(&q, &r, &j).map_err(|e| e.to_string())?;
    ensure(v0 == f.zero() && v1 == f.from_i64(-8), || format!("values {v0}, {v1}"))?;
    let t = TensorAlgebra::new(&q).unwrap();
    let data = albert_form_with_kappa(&t, &r).map_err(|e| e.to_string())?;
    for (y, expect) in [(&i, 0), (&j, -8)] {
        let c = data.coordinates(&t, &t.xi(y)).map_err(|e| e.to_string())?;
        let v = data.albert.evaluate(&c).unwrap();
        ensure(v == f.from_i64(expect), || format!("phi(xi({y})) = {v}, expected {expect}"))?;
    }
    Ok("50 Albert forms: nonsingular, Arf trivial, f(ξ)² = φ(ξ), Clifford rank 64; φ = 0 and −8 reproduced".into())
}

fn named_checks(reports: &[EquivalenceReport]) -> Result<(), String> {
    let [h, hh, bq] = reports else { return Err("missing named reports".into()) };
    // Hamilton over Q(sqrt2): all yes; (ii) witness generates Q(sqrt-2); (iii) realised by y = i
    let q = h.instance.build().unwrap();
    let f = Field::rationals();
    for c in [&h.cond_i, &h.cond_ii] {
        ensure(matches!(c, albertkit_core::harness::Cond::Yes { .. }), || "Hamilton/Q(sqrt2): expected yes".into())?;
    }
    if let albertkit_core::harness::Cond::Yes { witness, .. } = &h.cond_ii {
        let (t, n) = validate_subalgebra(&q, witness, Condition::Etale).map_err(|e| e.to_string())?;
        let disc = t.clone() * t - f.from_i64(4) * n;
        let ratio = disc / f.from_i64(-2);
        ensure(f.is_square(&ratio).unwrap(), || "(ii) witness does not generate Q(sqrt-2)".into())?;
        let listed = q.from_strs(&["2", "r", "0", "0"]).unwrap();
        let (lt, ln) = validate_subalgebra(&q, &listed, Condition::Etale).map_err(|e| e.to_string())?;
        ensure(lt.to_string() == "4" && ln.to_string() == "6", || "2+sqrt2 i has the wrong polynomial".into())?;
    }
    ensure(matches!(h.cond_iii, CondIii::Yes { .. }), || "Hamilton/Q(sqrt2): (iii) not yes".into())?;
    let i = q.from_strs(&["0", "1", "0", "0"]).unwrap();
    ensure(albert_value(&q, &q.base().kappa(), &i).unwrap().is_zero(), || "y = i is not isotropic".into())?;
    ensure(hh.exit_code() == 0 && matches!(hh.cond_iii, CondIii::Yes { .. }), || "(H,H): expected all yes".into())?;
    ensure(
        bq.exit_code() == 0 && matches!(bq.cond_iii, CondIii::NoProven(_)),
        || "((-1,-1),(t,2)): expected all no-proven".into(),
    )?;
    Ok(())
}

fn harness_reports() -> Result<(Vec<EquivalenceReport>, Duration), String> {
    let start = Instant::now();
    let mut instances = vec![Instance::hamilton_sqrt2(), Instance::hamilton_pair(), Instance::biquaternion_qt()];
    instances.extend(family_instances(40));
    let threads = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let reports = run_batch(&instances, threads)
        .into_iter()
        .zip(&instances)
        .map(|(r, i)| r.map_err(|e| format!("{} seed {}: {e}", i.family, i.seed)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((reports, start.elapsed()))
}

fn criterion_7(reports: &[EquivalenceReport], elapsed: Duration) -> Outcome {
    named_checks(&reports[..3])?;
    // the transfer cross-check on the flagship instance
    let r = check_equivalence(&Instance::hamilton_sqrt2(), true).map_err(|e| e.to_string())?;
    ensure(r.exit_code() == 0 && r.transfer_path.is_some(), || "transfer path failed".into())?;
    for r in reports {
        ensure(r.exit_code() == 0, || {
            format!("{} seed {}: exit code {}", r.instance.family, r.instance.seed, r.exit_code())
        })?;
    }
    ensure(elapsed < Duration::from_secs(300), || format!("took {elapsed:?}"))?;
    Ok(format!("{} instances complete and consistent in {:.1}s", reports.len(), elapsed.as_secs_f64()))
}

fn criterion_8() -> Outcome {
    let mut forms = 0;
    for q in [3, 4, 5] {
        let f = Field::finite(q).unwrap();
        for phi in sweep(&f) {
            let enumerated = oracle::isotropy(&phi).is_isotropic();
            ensure(enumerated == structured_isotropic(&phi), || format!("disagreement on {phi:?}"))?;
            forms += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let q = Field::rationals();
    for _ in 0..200 {
        let pick = |rng: &mut ChaCha8Rng| loop {
            let n: i64 = rng.gen_range(-60..=60);
            let d: i64 = rng.gen_range(1..=12);
            if n != 0 {
                return q.from_i64(n) / q.from_i64(d);
            }
        };
        let (a, b) = (pick(&mut rng), pick(&mut rng));
        let (ra, rb) = (a.as_rational().unwrap().clone(), b.as_rational().unwrap().clone());
        let ints = [ra.numer().clone(), ra.denom().clone(), rb.numer().clone(), rb.denom().clone()];
        let product: i64 = oracle::rational::relevant_places(&ints)
            .into_iter()
            .map(|v| hilbert_symbol_q(&ra, &rb, v) as i64)
            .product();
        ensure(product == 1, || format!("reciprocity fails for ({a}, {b})"))?;
    }
    Ok(format!("{forms} finite-field forms agree; 200 Hilbert symbols satisfy reciprocity"))
}

/// Paths to every certificate coordinate in a report.
fn coordinate_paths(v: &Value) -> Vec<Vec<Value>> {
    let mut out = Vec::new();
    let mut push_vec = |prefix: Vec<Value>, arr: &Value| {
        if let Some(a) = arr.as_array() {
            for (i, x) in a.iter().enumerate() {
                if x.is_string() {
                    out.push([prefix.clone(), vec![Value::from(i)]].concat());
                }
            }
        }
    };
    for key in ["cond_i", "cond_ii"] {
        push_vec(vec![key.into(), "witness".into()], &v[key]["witness"]);
    }
    push_vec(vec!["cond_iii_not_division".into(), "xi".into()], &v["cond_iii_not_division"]["xi"]);
    for r in 0..4 {
        push_vec(
            vec!["cond_iii_not_division".into(), "nilpotent".into(), Value::from(r)],
            &v["cond_iii_not_division"]["nilpotent"][r],
        );
    }
    push_vec(vec!["i_to_iii".into(), "x".into()], &v["i_to_iii"]["x"]);
    push_vec(vec!["i_to_iii".into(), "xi".into()], &v["i_to_iii"]["xi"]);
    for r in 0..6 {
        push_vec(vec!["albert_gram_upper".into(), Value::from(r)], &v["albert_gram_upper"][r]);
    }
    out
}

fn at<'a>(v: &'a mut Value, path: &[Value]) -> &'a mut Value {
    path.iter().fold(v, |acc, p| match p {
        Value::String(s) => &mut acc[s.as_str()],
        Value::Number(n) => &mut acc[n.as_u64().unwrap() as usize],
        _ => unreachable!(),
    })
}

fn criterion_9(reports: &[EquivalenceReport]) -> Outcome {
    let jsons: Vec<Value> = reports.iter().map(|r| r.to_json()).collect();
    for (r, j) in reports.iter().zip(&jsons) {
        ensure(verify_certificate(j) == Ok(true), || {
            format!("{} seed {}: certificate rejected", r.instance.family, r.instance.seed)
        })?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut rejected = 0;
    let mut conjugates = 0;
    let mut n = 0;
    while n < 100 {
        let pick = rng.gen_range(0..jsons.len());
        let j = &jsons[pick];
        let paths = coordinate_paths(j);
        let path = &paths[rng.gen_range(0..paths.len())];
        let mut bad = j.clone();
        let slot = at(&mut bad, path);
        let old = slot.as_str().unwrap().to_string();
        *slot = Value::String(format!("({old})+1"));
        // x -> x + 1 equals sigma(x) when char 2 and Trd x = 1: same subalgebra, not a forgery
        if path[1] == "witness" || path[1] == "x" {
            let q = reports[pick].instance.build().unwrap();
            let parse = |v: &Value| {
                let c: Vec<&str> = v.as_array().unwrap().iter().map(|s| s.as_str().unwrap()).collect();
                q.from_strs(&c).unwrap()
            };
            let before = parse(&j[path[0].as_str().unwrap()][path[1].as_str().unwrap()]);
            let after = parse(&bad[path[0].as_str().unwrap()][path[1].as_str().unwrap()]);
            if after == q.sigma(&before) {
                conjugates += 1;
                continue;
            }
        }
        n += 1;
        match verify_certificate(&bad) {
            Ok(false) | Err(_) => rejected += 1,
            Ok(true) => return Err(format!("tampering {n} at {path:?} accepted")),
        }
    }
    Ok(format!(
        "{} certificates accepted, {rejected}/100 tamperings rejected ({conjugates} conjugate rewrites redrawn)",
        jsons.len()
    ))
}

/// `ACCEPTANCE_ONLY=3,9` restricts the run to the listed criteria.
fn selected(n: usize) -> bool {
    match std::env::var("ACCEPTANCE_ONLY") {
        Ok(list) => list.split(',').any(|s| s.trim() == n.to_string()),
        Err(_) => true,
    }
}

fn run(n: usize, name: &str, f: impl FnOnce() -> Outcome) -> bool {
    if !selected(n) {
        println!("criterion {n} ({name}): SKIPPED");
        return true;
    }
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
    });
    let secs = start.elapsed().as_secs_f64();
    match result {
        Ok(detail) => {
            println!("criterion {n} ({name}): PASS [{secs:.1}s] {detail}");
            true
        }
        Err(e) => {
            println!("criterion {n} ({name}): FAIL [{secs:.1}s] {e}");
            false
        }
    }
}

fn main() -> ExitCode {
    let mut ok = true;
    ok &= run(1, "algebraic identities", criterion_1);
    ok &= run(2, "transfer", criterion_2);
    ok &= run(3, "descent", criterion_3);
    ok &= run(4, "isotropic spanning sets", criterion_4);
    ok &= run(5, "corestriction", criterion_5);
    ok &= run(6, "Albert form", criterion_6);
    if !(selected(7) || selected(9)) {
        run(7, "equivalence harness", || unreachable!());
        ok &= run(8, "oracle cross-validation", criterion_8);
        run(9, "certificate integrity", || unreachable!());
        return if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE };
    }
    match harness_reports() {
        Ok((reports, elapsed)) => {
            ok &= run(7, "equivalence harness", || criterion_7(&reports, elapsed));
            ok &= run(8, "oracle cross-validation", criterion_8);
            ok &= run(9, "certificate integrity", || criterion_9(&reports));
        }
        Err(e) => {
            println!("criterion 7 (equivalence harness): FAIL {e}");
            run(8, "oracle cross-validation", criterion_8);
            println!("criterion 9 (certificate integrity): FAIL no reports");
            ok = false;
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
