//! Instance generation, the three-way equivalence check with certificates,
//! and independent certificate verification.
//!
//! For a quaternion algebra `Q` over a quadratic étale `K/F` the checked
//! conditions are
//!   (i)   `Q` contains a quadratic F-algebra disjoint from K,
//!   (ii)  the same with an étale F-algebra,
//!   (iii) `Cor_{K/F} Q` is not a division algebra.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::clifford;
use crate::corestriction::{
    albert_form, cor_is_division, f_matrix, generator_to_isotropic, isotropic_to_generator,
    m2_is_zero, m2_mul, AlbertData, DivisionVerdict, TensorAlgebra, M2,
};
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::form::QuadraticForm;
use crate::literal::{parse_vector, QuaternionLiteral};
use crate::oracle::{self, IsotropyVerdict};
use crate::quaternion::{
    find_disjoint_quadratic_subalgebra, validate_subalgebra, Condition, QuatElem, Quaternion,
};
use crate::transfer;

pub const SCHEMA: &str = "albertkit/1";

pub const FAMILIES: [&str; 5] = [
    "split-K-over-Q",
    "quad-K-over-Q",
    "split-K-over-Qt",
    "char2-finite",
    "char2-function-field",
];

fn default_budget() -> u64 {
    2000
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub schema: String,
    pub family: String,
    pub seed: u64,
    pub quaternion: QuaternionLiteral,
    /// Candidate budget for witness searches.
    #[serde(default = "default_budget")]
    pub budget: u64,
}

impl Instance {
    pub fn new(family: &str, seed: u64, quaternion: QuaternionLiteral) -> Self {
        Instance {
            schema: SCHEMA.into(),
            family: family.into(),
            seed,
            quaternion,
            budget: default_budget(),
        }
    }

    pub fn build(&self) -> Result<Quaternion> {
        if self.schema != SCHEMA {
            return Err(Error::Parse(format!("unsupported schema {:?}", self.schema)));
        }
        let q = self.quaternion.to_quaternion()?;
        if q.base().base().is_none() {
            return Err(Error::Precondition("instance needs a quadratic extension K/F".into()));
        }
        Ok(q)
    }

    /// Hamilton's quaternions over `Q(√2)`.
    pub fn hamilton_sqrt2() -> Self {
        let lit = QuaternionLiteral {
            f: "Q".into(),
            ext: Some("x^2-2".into()),
            symbol: "r".into(),
            e: Some(crate::literal::ELiteral { alpha: "0".into(), beta: "-1".into() }),
            a: Some("-1".into()),
            components: None,
        };
        Instance::new("named", 1, lit)
    }

    /// `(H, H)` over `Q × Q`.
    pub fn hamilton_pair() -> Self {
        Instance::new("named", 2, QuaternionLiteral::split("Q", ["0", "-1", "-1"], ["0", "-1", "-1"]))
    }

    /// `((-1,-1), (t,2))` over `Q(t) × Q(t)`.
    pub fn biquaternion_qt() -> Self {
        Instance::new("named", 3, QuaternionLiteral::split("Q(t)", ["0", "-1", "-1"], ["0", "t", "2"]))
    }
}

fn pick<'a, T>(rng: &mut ChaCha8Rng, xs: &'a [T]) -> &'a T {
    &xs[rng.gen_range(0..xs.len())]
}

fn nonzero(rng: &mut ChaCha8Rng, bound: i64) -> i64 {
    loop {
        let v = rng.gen_range(-bound..=bound);
        if v != 0 {
            return v;
        }
    }
}

fn int_params(rng: &mut ChaCha8Rng) -> [String; 3] {
    let alpha = if rng.gen_bool(0.3) { 1 } else { 0 };
    [alpha.to_string(), nonzero(rng, 10).to_string(), nonzero(rng, 10).to_string()]
}

fn monomial(rng: &mut ChaCha8Rng) -> String {
    let c = *pick(rng, &[1i64, -1, 2, -2, 3, -3]);
    if rng.gen_bool(0.5) {
        format!("{c}*t")
    } else {
        c.to_string()
    }
}

/// Deterministic instance for `(family, seed)`.
pub fn generate_instance(family: &str, seed: u64) -> Result<Instance> {
    let idx = FAMILIES
        .iter()
        .position(|f| *f == family)
        .ok_or_else(|| Error::UnknownFamily(family.into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ idx as u64);
    let lit = match idx {
        0 => {
            let (c1, c2) = (int_params(&mut rng), int_params(&mut rng));
            let r = |c: &[String; 3]| [c[0].clone(), c[1].clone(), c[2].clone()];
            let (a, b) = (r(&c1), r(&c2));
            QuaternionLiteral::split(
                "Q",
                [&a[0], &a[1], &a[2]],
                [&b[0], &b[1], &b[2]],
            )
        }
        1 => {
            let d = *pick(&mut rng, &[2i64, 3, 5, 6, 7, 10, -1, -2, -3, -5, -6, -7]);
            let k_elem = |rng: &mut ChaCha8Rng| {
                let b1 = if rng.gen_bool(0.5) { rng.gen_range(-3..=3) } else { 0 };
                let b0 = if b1 == 0 { nonzero(rng, 10) } else { rng.gen_range(-10..=10) };
                format!("{b0}+({b1})*r")
            };
            let beta = k_elem(&mut rng);
            let a = k_elem(&mut rng);
            QuaternionLiteral {
                f: "Q".into(),
                ext: Some(format!("x^2-({d})")),
                symbol: "r".into(),
                e: Some(crate::literal::ELiteral { alpha: "0".into(), beta }),
                a: Some(a),
                components: None,
            }
        }
        2 => {
            let m: Vec<String> = (0..4).map(|_| monomial(&mut rng)).collect();
            QuaternionLiteral::split("Q(t)", ["0", &m[0], &m[1]], ["0", &m[2], &m[3]])
        }
        3 => {
            let (f, ext, symbol) = *pick(
                &mut rng,
                &[
                    ("F(2)", "x^2+x+1", "w"),
                    ("F(2)", "split", "w"),
                    ("F(4):u^2+u+1", "x^2+x+u", "w"),
                ],
            );
            let k = crate::literal::parse_extension(&Field::parse(f)?, ext, symbol)?;
            let els = k.elements().expect("finite");
            let units: Vec<&Elem> = els.iter().filter(|x| x.inv().is_some()).collect();
            let beta = pick(&mut rng, &els).to_string();
            let a = pick(&mut rng, &units).to_string();
            QuaternionLiteral {
                f: f.into(),
                ext: Some(ext.into()),
                symbol: symbol.into(),
                e: Some(crate::literal::ELiteral { alpha: "1".into(), beta }),
                a: Some(a),
                components: None,
            }
        }
        _ => {
            let ext = *pick(&mut rng, &["x^2+x+t", "x^2+x+1", "split"]);
            let betas = ["0", "1", "t", "w", "t*w", "1+w", "t+w"];
            let aa = ["1", "t", "w", "t+w", "1+t*w", "t+1"];
            let k = crate::literal::parse_extension(&Field::parse("F(2)(t)")?, ext, "w")?;
            let units: Vec<&str> = aa
                .iter()
                .copied()
                .filter(|s| k.parse_elem(s).map(|x| x.inv().is_some()).unwrap_or(false))
                .collect();
            QuaternionLiteral {
                f: "F(2)(t)".into(),
                ext: Some(ext.into()),
                symbol: "w".into(),
                e: Some(crate::literal::ELiteral {
                    alpha: "1".into(),
                    beta: pick(&mut rng, &betas).to_string(),
                }),
                a: Some(pick(&mut rng, &units).to_string()),
                components: None,
            }
        }
    };
    Ok(Instance::new(family, seed, lit))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cond {
    Yes { witness: QuatElem, via: String },
    NoProven(String),
    Unknown(String),
}

impl Cond {
    fn class(&self) -> Option<bool> {
        match self {
            Cond::Yes { .. } => Some(true),
            Cond::NoProven(_) => Some(false),
            Cond::Unknown(_) => None,
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cond::Yes { witness, via } => {
                json!({"verdict": "yes", "witness": witness.to_strings(), "via": via})
            }
            Cond::NoProven(m) => json!({"verdict": "no-proven", "reason": m}),
            Cond::Unknown(m) => json!({"verdict": "unknown", "reason": m}),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CondIii {
    /// Isotropic Albert vector and the nilpotent `f(ξ)`.
    Yes { xi: Vec<Elem>, nilpotent: M2 },
    /// Anisotropy method of the Albert form.
    NoProven(String),
    Unknown(String),
}

impl CondIii {
    fn class(&self) -> Option<bool> {
        match self {
            CondIii::Yes { .. } => Some(true),
            CondIii::NoProven(_) => Some(false),
            CondIii::Unknown(_) => None,
        }
    }

    fn to_json(&self) -> Value {
        match self {
            CondIii::Yes { xi, nilpotent } => json!({
                "verdict": "yes",
                "xi": xi.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "nilpotent": nilpotent.iter()
                    .map(|e| e.iter().map(|c| c.to_string()).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            }),
            CondIii::NoProven(m) => json!({"verdict": "no-proven", "method": m}),
            CondIii::Unknown(m) => json!({"verdict": "unknown", "reason": m}),
        }
    }
}

#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    pub instance: Instance,
    pub cond_i: Cond,
    pub cond_ii: Cond,
    pub cond_iii: CondIii,
    /// A condition-(i) witness and the isotropic Albert vector it maps to.
    pub i_to_iii: Option<(QuatElem, Vec<Elem>)>,
    pub transfer_path: Option<Value>,
    pub derivations: Vec<String>,
    pub albert: QuadraticForm,
}

impl EquivalenceReport {
    pub fn complete(&self) -> bool {
        self.cond_i.class().is_some() && self.cond_ii.class().is_some() && self.cond_iii.class().is_some()
    }

    /// No two known verdicts disagree.
    pub fn consistent(&self) -> bool {
        let known: Vec<bool> = [self.cond_i.class(), self.cond_ii.class(), self.cond_iii.class()]
            .into_iter()
            .flatten()
            .collect();
        known.windows(2).all(|w| w[0] == w[1])
    }

    /// 0 consistent and complete, 2 inconsistent, 3 unknowns present.
    pub fn exit_code(&self) -> i32 {
        if !self.consistent() {
            2
        } else if !self.complete() {
            3
        } else {
            0
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "schema": SCHEMA,
            "instance": self.instance,
            "albert_gram_upper": self.albert.upper().iter()
                .map(|r| r.iter().map(|c| c.to_string()).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "cond_i": self.cond_i.to_json(),
            "cond_ii": self.cond_ii.to_json(),
            "cond_iii_not_division": self.cond_iii.to_json(),
            "consistent": self.consistent(),
            "complete": self.complete(),
            "derivations": self.derivations,
        });
        // minimal polynomial data pins each witness against tampering
        if let Ok(q) = self.instance.build() {
            for (key, c, cond) in [("cond_i", &self.cond_i, Condition::Quadratic), ("cond_ii", &self.cond_ii, Condition::Etale)] {
                if let Cond::Yes { witness, .. } = c {
                    if let Ok((t, n)) = validate_subalgebra(&q, witness, cond) {
                        v[key]["trd"] = json!(t.to_string());
                        v[key]["nrd"] = json!(n.to_string());
                    }
                }
            }
        }
        if let Some((x, xi)) = &self.i_to_iii {
            let q = self.instance.build().ok();
            v["i_to_iii"] = json!({
                "x": x.to_strings(),
                "trd": q.as_ref().map(|q| q.trd(x).to_string()),
                "nrd": q.as_ref().map(|q| q.nrd(x).to_string()),
                "xi": xi.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            });
        }
        if let Some(t) = &self.transfer_path {
            v["transfer_path"] = t.clone();
        }
        v
    }
}

fn cond_from_search(
    q: &Quaternion,
    cond: Condition,
    extra: &[QuatElem],
) -> Option<Cond> {
    match find_disjoint_quadratic_subalgebra(q, cond, extra) {
        Ok(Some(x)) => Some(Cond::Yes { witness: x, via: "direct search".into() }),
        Ok(None) => Some(Cond::NoProven("exhaustive search over all elements".into())),
        Err(_) => None,
    }
}

/// Evaluate (i), (ii) and (iii) with witnesses; `with_transfer` adds the
/// cross-check through the transfer of the norm form and descent.
pub fn check_equivalence(inst: &Instance, with_transfer: bool) -> Result<EquivalenceReport> {
    let q = inst.build()?;
    let t = TensorAlgebra::new(&q)?;
    let data = albert_form(&t)?;
    let mut derivations = Vec::new();
    let cond_iii = match cor_is_division(&t, &data)? {
        DivisionVerdict::NotDivision { xi, nilpotent } => CondIii::Yes { xi, nilpotent },
        DivisionVerdict::Division(m) => CondIii::NoProven(m),
        DivisionVerdict::Unknown(h) => CondIii::Unknown(format!("albert form undecided at height {h}")),
    };
    // a direct attempt at (i), used for the (i) => (iii) conversion and as a
    // falsification attempt when the Albert form is anisotropic
    let direct_i = find_disjoint_quadratic_subalgebra(&q, Condition::Quadratic, &[]);
    let mut i_to_iii = None;
    let mut cond_iii = cond_iii;
    if let Ok(Some(x)) = &direct_i {
        let xi = generator_to_isotropic(&t, &data, x)?;
        derivations.push("(i) => (iii): ξ(κx) is isotropic".into());
        if matches!(cond_iii, CondIii::Unknown(_)) {
            let nilpotent = crate::corestriction::nilpotent_certificate(&t, &data, &xi)?;
            cond_iii = CondIii::Yes { xi: xi.clone(), nilpotent };
        }
        i_to_iii = Some((x.clone(), xi));
    }
    let (cond_i, cond_ii) = match &cond_iii {
        CondIii::Yes { xi, .. } => {
            let ii = match isotropic_to_generator(&t, &data, xi, inst.budget) {
                Ok((x, _)) => {
                    derivations.push("(iii) => (ii): κy from an isotropic Albert vector".into());
                    Cond::Yes { witness: x, via: "isotropic_to_generator".into() }
                }
                Err(e) => cond_from_search(&q, Condition::Etale, &[])
                    .unwrap_or(Cond::Unknown(format!("no étale generator found: {e}"))),
            };
            let i = match (&direct_i, &ii) {
                (Ok(Some(x)), _) => Cond::Yes { witness: x.clone(), via: "direct search".into() },
                (_, Cond::Yes { witness, .. }) => {
                    derivations.push("(ii) => (i)".into());
                    Cond::Yes { witness: witness.clone(), via: "(ii) witness".into() }
                }
                (Ok(None), _) => Cond::NoProven("exhaustive search over all elements".into()),
                _ => Cond::Unknown("no witness within budget".into()),
            };
            (i, ii)
        }
        CondIii::NoProven(m) => {
            let reason = format!(
                "albert form anisotropic ({m}); a witness x would make ξ(κx) isotropic"
            );
            match &direct_i {
                Ok(Some(x)) => (
                    Cond::Yes { witness: x.clone(), via: "direct search".into() },
                    Cond::NoProven(reason),
                ),
                _ => {
                    derivations.push("not (iii) => not (i), not (ii)".into());
                    (Cond::NoProven(reason.clone()), Cond::NoProven(reason))
                }
            }
        }
        CondIii::Unknown(_) => {
            let ii = cond_from_search(&q, Condition::Etale, &[])
                .unwrap_or(Cond::Unknown("no witness within budget".into()));
            let i = match &direct_i {
                Ok(Some(_)) => unreachable!("a direct (i) witness settles (iii)"),
                Ok(None) => Cond::NoProven("exhaustive search over all elements".into()),
                Err(_) => Cond::Unknown("no witness within budget".into()),
            };
            (i, ii)
        }
    };
    let transfer_path = if with_transfer { Some(transfer_path(&q)) } else { None };
    Ok(EquivalenceReport {
        instance: inst.clone(),
        cond_i,
        cond_ii,
        cond_iii,
        i_to_iii,
        transfer_path,
        derivations,
        albert: data.albert.clone(),
    })
}

/// Cross-check through the transfer: `i0(s_* n_Q) >= 2`, a binary subform
/// `ψ` of the descended form, `L = C_0(ψ)`, and a generator of `KL` in `Q`
/// with the trace and norm of `e1 e2`.
pub fn transfer_path(q: &Quaternion) -> Value {
    let run = || -> Result<Value> {
        let n = q.norm_form();
        let tr = transfer::transfer(&n)?;
        let idx = oracle::witt_index(&tr)?;
        if idx < 2 {
            return Ok(json!({"transfer_index": idx}));
        }
        let d = transfer::descend(&n)?;
        let psi = &d.psi;
        let f = psi.field().clone();
        for i in 0..psi.dim() {
            for j in i + 1..psi.dim() {
                let sub = psi.restrict(&[crate::form::unit(&f, psi.dim(), i), crate::form::unit(&f, psi.dim(), j)])?;
                if !sub.classify()?.nonsingular {
                    continue;
                }
                let nf = clifford::even_norm_form(&sub)?;
                let (p, r) = (nf.coeff(0, 1).clone(), nf.coeff(1, 1).clone());
                let k = q.base();
                if let Ok(Some(x)) = q.embed_quadratic_algebra(&k.lift(&p), &k.lift(&r)) {
                    validate_subalgebra(q, &x, Condition::Quadratic)?;
                    return Ok(json!({
                        "transfer_index": idx,
                        "psi": crate::form::FormLiteral::from_form(&sub),
                        "trace": p.to_string(),
                        "norm": r.to_string(),
                        "x": x.to_strings(),
                    }));
                }
            }
        }
        Ok(json!({"transfer_index": idx, "note": "no binary subform embedded"}))
    };
    run().unwrap_or_else(|e| json!({"error": e.to_string()}))
}

fn malformed(what: &str) -> Error {
    Error::MalformedCertificate(what.into())
}

fn strings(v: &Value, what: &str) -> Result<Vec<String>> {
    v.as_array()
        .ok_or_else(|| malformed(what))?
        .iter()
        .map(|s| s.as_str().map(String::from).ok_or_else(|| malformed(what)))
        .collect()
}

fn quat_elem(q: &Quaternion, v: &Value, what: &str) -> Result<QuatElem> {
    let c = parse_vector(q.base(), &strings(v, what)?).map_err(|_| malformed(what))?;
    if c.len() != 4 {
        return Err(malformed(what));
    }
    Ok(q.elem([c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone()]))
}

fn verdict(v: &Value, what: &str) -> Result<String> {
    v.get("verdict").and_then(|s| s.as_str()).map(String::from).ok_or_else(|| malformed(what))
}

/// Re-verify every witness of a report from scratch. `Ok(false)` when a
/// witness fails or a claimed flag does not match the verdicts.
pub fn verify_certificate(report: &Value) -> Result<bool> {
    if report.get("schema").and_then(|s| s.as_str()) != Some(SCHEMA) {
        return Err(malformed("schema"));
    }
    let inst: Instance = serde_json::from_value(report.get("instance").cloned().ok_or_else(|| malformed("instance"))?)
        .map_err(|_| malformed("instance"))?;
    let q = inst.build().map_err(|_| malformed("instance"))?;
    let t = TensorAlgebra::new(&q)?;
    let data = albert_form(&t)?;
    let f = t.f().clone();
    let gram = report.get("albert_gram_upper").ok_or_else(|| malformed("albert_gram_upper"))?;
    let expected_gram: Vec<Vec<String>> =
        data.albert.upper().iter().map(|r| r.iter().map(|c| c.to_string()).collect()).collect();
    if *gram != json!(expected_gram) {
        return Ok(false);
    }
    let mut classes = Vec::new();
    for (key, cond) in [("cond_i", Condition::Quadratic), ("cond_ii", Condition::Etale)] {
        let c = report.get(key).ok_or_else(|| malformed(key))?;
        match verdict(c, key)?.as_str() {
            "yes" => {
                let x = quat_elem(&q, c.get("witness").unwrap_or(&Value::Null), key)?;
                let recorded = (c.get("trd").and_then(|s| s.as_str()), c.get("nrd").and_then(|s| s.as_str()));
                match validate_subalgebra(&q, &x, cond) {
                    Ok((t, n)) if recorded == (Some(t.to_string().as_str()), Some(n.to_string().as_str())) => {}
                    _ => return Ok(false),
                }
                classes.push(Some(true));
            }
            "no-proven" => classes.push(Some(false)),
            "unknown" => classes.push(None),
            _ => return Err(malformed(key)),
        }
    }
    let c3 = report.get("cond_iii_not_division").ok_or_else(|| malformed("cond_iii"))?;
    match verdict(c3, "cond_iii")?.as_str() {
        "yes" => {
            let xi = parse_vector(&f, &strings(c3.get("xi").unwrap_or(&Value::Null), "xi")?)
                .map_err(|_| malformed("xi"))?;
            if xi.len() != 6 || xi.iter().all(|c| c.is_zero()) || !data.albert.eval(&xi).is_zero() {
                return Ok(false);
            }
            let rows = c3.get("nilpotent").and_then(|m| m.as_array()).ok_or_else(|| malformed("nilpotent"))?;
            if rows.len() != 4 {
                return Err(malformed("nilpotent"));
            }
            let mut m: Vec<Vec<Elem>> = Vec::new();
            for r in rows {
                let e = parse_vector(t.k(), &strings(r, "nilpotent")?).map_err(|_| malformed("nilpotent"))?;
                if e.len() != 16 {
                    return Err(malformed("nilpotent"));
                }
                m.push(e);
            }
            let m: M2 = [m[0].clone(), m[1].clone(), m[2].clone(), m[3].clone()];
            let expected = f_matrix(&t, &data.kappa, &data.xi_of(&t, &xi));
            if m != expected || m2_is_zero(&m) || !m2_is_zero(&m2_mul(&t, &m, &m)) {
                return Ok(false);
            }
            classes.push(Some(true));
        }
        "no-proven" => {
            // re-run the named anisotropy method
            let method = c3.get("method").and_then(|s| s.as_str()).ok_or_else(|| malformed("method"))?;
            match oracle::isotropy(&data.albert) {
                IsotropyVerdict::Anisotropic(m) if m == method => classes.push(Some(false)),
                _ => return Ok(false),
            }
        }
        "unknown" => classes.push(None),
        _ => return Err(malformed("cond_iii")),
    }
    if let Some(c) = report.get("i_to_iii") {
        let x = quat_elem(&q, c.get("x").unwrap_or(&Value::Null), "i_to_iii")?;
        let xi = parse_vector(&f, &strings(c.get("xi").unwrap_or(&Value::Null), "i_to_iii")?)
            .map_err(|_| malformed("i_to_iii"))?;
        let recorded = (c.get("trd").and_then(|s| s.as_str()), c.get("nrd").and_then(|s| s.as_str()));
        if recorded != (Some(q.trd(&x).to_string().as_str()), Some(q.nrd(&x).to_string().as_str())) {
            return Ok(false);
        }
        match generator_to_isotropic(&t, &data, &x) {
            Ok(v) if v == xi => {}
            _ => return Ok(false),
        }
    }
    let known: Vec<bool> = classes.iter().flatten().copied().collect();
    let consistent = known.windows(2).all(|w| w[0] == w[1]);
    let complete = classes.iter().all(|c| c.is_some());
    Ok(report.get("consistent").and_then(|v| v.as_bool()) == Some(consistent)
        && report.get("complete").and_then(|v| v.as_bool()) == Some(complete))
}

/// Check instances on `threads` worker threads; results keep input order.
pub fn run_batch(instances: &[Instance], threads: usize) -> Vec<Result<EquivalenceReport>> {
    let threads = threads.max(1);
    let mut out: Vec<Option<Result<EquivalenceReport>>> = (0..instances.len()).map(|_| None).collect();
    std::thread::scope(|s| {
        let chunks: Vec<_> = out.chunks_mut(instances.len().div_ceil(threads).max(1)).collect();
        let mut start = 0;
        for chunk in chunks {
            let begin = start;
            start += chunk.len();
            s.spawn(move || {
                for (k, slot) in chunk.iter_mut().enumerate() {
                    *slot = Some(check_equivalence(&instances[begin + k], false));
                }
            });
        }
    });
    out.into_iter().map(|r| r.unwrap()).collect()
}

/// Convenience accessor for tests and the CLI.
pub fn albert_data(q: &Quaternion) -> Result<(TensorAlgebra, AlbertData)> {
    let t = TensorAlgebra::new(q)?;
    let d = albert_form(&t)?;
    Ok((t, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_instances() {
        let r = check_equivalence(&Instance::hamilton_sqrt2(), true).unwrap();
        assert!(matches!(r.cond_iii, CondIii::Yes { .. }), "{:?}", r.cond_iii);
        assert!(matches!(r.cond_ii, Cond::Yes { .. }));
        assert_eq!(r.exit_code(), 0);
        assert!(verify_certificate(&r.to_json()).unwrap());
        let r = check_equivalence(&Instance::hamilton_pair(), false).unwrap();
        assert_eq!(r.exit_code(), 0);
        assert!(matches!(r.cond_i, Cond::Yes { .. }));
        let r = check_equivalence(&Instance::biquaternion_qt(), false).unwrap();
        assert!(matches!(r.cond_iii, CondIii::NoProven(_)));
        assert!(matches!(r.cond_i, Cond::NoProven(_)));
        assert_eq!(r.exit_code(), 0);
        assert!(verify_certificate(&r.to_json()).unwrap());
    }

    #[test]
    fn generation_is_deterministic() {
        for fam in FAMILIES {
            let a = generate_instance(fam, 5).unwrap();
            assert_eq!(a, generate_instance(fam, 5).unwrap());
            a.build().unwrap();
        }
        assert!(matches!(generate_instance("nope", 1), Err(Error::UnknownFamily(_))));
    }
}
