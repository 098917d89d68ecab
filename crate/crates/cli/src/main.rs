use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use albertkit_core::clifford;
use albertkit_core::corestriction::{self, DivisionVerdict};
use albertkit_core::form::{FormLiteral, QuadraticForm};
use albertkit_core::harness::{self, Instance};
use albertkit_core::literal::{parse_vector, ExtLiteral, QuaternionLiteral};
use albertkit_core::oracle;
use albertkit_core::quaternion::{self, Condition, SplitVerdict};
use albertkit_core::transfer;

#[derive(Parser)]
#[command(name = "albertkit", version, about = "Quadratic forms, quaternion algebras and Albert forms over exact fields")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide isotropy of a quadratic form.
    Isotropy {
        #[arg(long)]
        form: PathBuf,
        #[arg(long)]
        height: Option<u32>,
    },
    /// Transfer a form over K down to F.
    Transfer {
        #[arg(long)]
        ext: PathBuf,
        #[arg(long)]
        form: PathBuf,
    },
    /// Descend a form over K to a form over F.
    Descend {
        #[arg(long)]
        ext: PathBuf,
        #[arg(long)]
        form: PathBuf,
    },
    /// Quaternion algebra operations.
    Quat {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_enum)]
        cmd: QuatCmd,
        /// Element coordinates in the basis 1, e, z, ez (comma separated).
        #[arg(long)]
        elem: Option<String>,
        /// Require an étale subalgebra for `subalg`.
        #[arg(long)]
        etale: bool,
    },
    /// Corestriction and Albert form of an instance.
    Cor {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum)]
        cmd: CorCmd,
        /// Include structure constants.
        #[arg(long)]
        constants: bool,
    },
    /// Clifford algebra of a form.
    Clifford {
        #[arg(long)]
        form: PathBuf,
        #[arg(long, value_enum)]
        cmd: CliffordCmd,
    },
    /// Check the three conditions on one instance or a generated batch.
    Check {
        #[arg(long, conflicts_with = "family")]
        instance: Option<PathBuf>,
        #[arg(long)]
        family: Option<String>,
        #[arg(long, default_value_t = 0)]
        start: u64,
        #[arg(long, default_value_t = 10)]
        count: u64,
        #[arg(long, default_value_t = 4)]
        threads: usize,
        /// Also run the cross-check through transfer and descent.
        #[arg(long, value_enum)]
        path: Option<PathKind>,
    },
    /// Generate an instance.
    Gen {
        #[arg(long)]
        family: String,
        #[arg(long)]
        seed: u64,
    },
    /// Verify a report produced by `check --json`.
    Verify {
        #[arg(long)]
        report: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum QuatCmd {
    Nrd,
    Split,
    Subalg,
}

#[derive(Clone, Copy, ValueEnum)]
enum CorCmd {
    Build,
    Albert,
    Fcheck,
    Division,
}

#[derive(Clone, Copy, ValueEnum)]
enum CliffordCmd {
    Build,
    Arf,
}

#[derive(Clone, Copy, ValueEnum)]
enum PathKind {
    Transfer,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(json_mode: bool, value: &Value, text: impl FnOnce() -> String) {
    if json_mode {
        println!("{}", serde_json::to_string_pretty(value).unwrap());
    } else {
        println!("{}", text());
    }
}

fn form_text(phi: &QuadraticForm) -> String {
    phi.upper()
        .iter()
        .map(|r| r.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("  "))
        .collect::<Vec<_>>()
        .join("\n")
}

fn form_over_ext(ext: &Path, form: &Path) -> Result<QuadraticForm> {
    let k = read_json::<ExtLiteral>(ext)?.to_field()?;
    Ok(read_json::<FormLiteral>(form)?.to_form_over(&k)?)
}

fn run(cli: Cli) -> Result<u8> {
    let js = cli.json;
    match cli.cmd {
        Cmd::Isotropy { form, height } => {
            let phi = read_json::<FormLiteral>(&form)?.to_form()?;
            let v = match height {
                Some(h) => oracle::isotropy_with_height(&phi, h),
                None => oracle::isotropy(&phi),
            };
            let out = v.to_json();
            emit(js, &out, || match &v {
                oracle::IsotropyVerdict::Isotropic(w) => format!(
                    "isotropic, witness ({})",
                    w.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
                ),
                oracle::IsotropyVerdict::Anisotropic(m) => format!("anisotropic ({m})"),
                oracle::IsotropyVerdict::Unknown(h) => format!("unknown (searched to height {h})"),
            });
            Ok(if matches!(v, oracle::IsotropyVerdict::Unknown(_)) { 3 } else { 0 })
        }
        Cmd::Transfer { ext, form } => {
            let phi = form_over_ext(&ext, &form)?;
            let t = transfer::transfer(&phi)?;
            let out = json!({"transfer": FormLiteral::from_form(&t)});
            emit(js, &out, || form_text(&t));
            Ok(0)
        }
        Cmd::Descend { ext, form } => {
            let phi = form_over_ext(&ext, &form)?;
            let d = transfer::descend(&phi)?;
            let out = d.to_json();
            emit(js, &out, || {
                format!(
                    "transfer index {}, psi of dim {}\n{}",
                    d.transfer_index,
                    d.psi.dim(),
                    form_text(&d.psi)
                )
            });
            Ok(0)
        }
        Cmd::Quat { spec, cmd, elem, etale } => {
            let q = read_json::<QuaternionLiteral>(&spec)?.to_quaternion()?;
            match cmd {
                QuatCmd::Nrd => {
                    let Some(e) = elem else { bail!("--elem is required for nrd") };
                    let parts: Vec<String> = e.split(',').map(|s| s.trim().to_string()).collect();
                    let c = parse_vector(q.base(), &parts)?;
                    if c.len() != 4 {
                        bail!("expected 4 coordinates");
                    }
                    let x = q.elem([c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone()]);
                    let (t, n) = (q.trd(&x), q.nrd(&x));
                    let out = json!({"trd": t.to_string(), "nrd": n.to_string()});
                    emit(js, &out, || format!("Trd = {t}\nNrd = {n}"));
                }
                QuatCmd::Split => {
                    let v = q.is_split();
                    let out = match &v {
                        SplitVerdict::Split(z) => json!({"verdict": "split", "zero_divisor": z.to_strings()}),
                        SplitVerdict::Division(m) => json!({"verdict": "division", "method": m}),
                        SplitVerdict::Unknown => json!({"verdict": "unknown"}),
                    };
                    emit(js, &out, || match &v {
                        SplitVerdict::Split(z) => format!("split, zero divisor {z}"),
                        SplitVerdict::Division(m) => format!("division ({m})"),
                        SplitVerdict::Unknown => "unknown".into(),
                    });
                    if matches!(v, SplitVerdict::Unknown) {
                        return Ok(3);
                    }
                }
                QuatCmd::Subalg => {
                    let cond = if etale { Condition::Etale } else { Condition::Quadratic };
                    let r = quaternion::find_disjoint_quadratic_subalgebra(&q, cond, &[]);
                    let (out, code) = match &r {
                        Ok(Some(x)) => {
                            let (t, n) = quaternion::validate_subalgebra(&q, x, cond)?;
                            (json!({"verdict": "yes", "witness": x.to_strings(), "trd": t.to_string(), "nrd": n.to_string()}), 0)
                        }
                        Ok(None) => (json!({"verdict": "no-proven"}), 0),
                        Err(e) => (json!({"verdict": "unknown", "reason": e.to_string()}), 3),
                    };
                    emit(js, &out, || match &r {
                        Ok(Some(x)) => format!("witness {x}"),
                        Ok(None) => "none (exhaustive)".into(),
                        Err(e) => format!("unknown: {e}"),
                    });
                    return Ok(code);
                }
            }
            Ok(0)
        }
        Cmd::Cor { instance, cmd, constants } => {
            let inst: Instance = read_json(&instance)?;
            let q = inst.build()?;
            match cmd {
                CorCmd::Build => {
                    let cor = corestriction::corestriction(&q)?;
                    let mut out = cor.to_json(constants);
                    out["base_change_rank"] = json!(cor.base_change_rank());
                    emit(js, &out, || {
                        format!("Cor has dimension {} over {}; rank of Cor ⊗ K: {}", cor.dim(), cor.tensor().f(), cor.base_change_rank())
                    });
                }
                CorCmd::Albert => {
                    let (_, data) = harness::albert_data(&q)?;
                    let arf = clifford::arf_trivial(&data.albert)?;
                    let mut out = data.to_json();
                    out["arf_trivial"] = json!(arf.is_some());
                    emit(js, &out, || format!("kappa = {}\n{}\narf trivial: {}", data.kappa, form_text(&data.albert), arf.is_some()));
                }
                CorCmd::Fcheck => {
                    let (t, data) = harness::albert_data(&q)?;
                    let rep = corestriction::f_map_check(&t, &data, 100, inst.seed)?;
                    let iso = clifford::clifford_iso_check(&t, &data)?;
                    let out = json!({"checked": rep.checked, "entries_in_cor": rep.entries_in_cor, "clifford": iso.to_json()});
                    emit(js, &out, || {
                        format!(
                            "f(ξ)^2 = φ(ξ) on {} vectors; entries in Cor: {}; Clifford image rank {}",
                            rep.checked, rep.entries_in_cor, iso.rank
                        )
                    });
                }
                CorCmd::Division => {
                    let (t, data) = harness::albert_data(&q)?;
                    let v = corestriction::cor_is_division(&t, &data)?;
                    emit(js, &v.to_json(), || match &v {
                        DivisionVerdict::NotDivision { xi, .. } => format!(
                            "not division; isotropic Albert vector ({})",
                            xi.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
                        ),
                        DivisionVerdict::Division(m) => format!("division ({m})"),
                        DivisionVerdict::Unknown(h) => format!("unknown (height {h})"),
                    });
                    if matches!(v, DivisionVerdict::Unknown(_)) {
                        return Ok(3);
                    }
                }
            }
            Ok(0)
        }
        Cmd::Clifford { form, cmd } => {
            let phi = read_json::<FormLiteral>(&form)?.to_form()?;
            match cmd {
                CliffordCmd::Build => {
                    let c = clifford::clifford(&phi)?;
                    let out = c.to_json();
                    emit(js, &out, || format!("Clifford algebra of dimension {}", c.dim()));
                }
                CliffordCmd::Arf => {
                    let e = clifford::arf_trivial(&phi)?;
                    let out = json!({
                        "trivial": e.is_some(),
                        "idempotent": e.as_ref().map(|v| v.iter().map(|c| c.to_string()).collect::<Vec<_>>()),
                    });
                    emit(js, &out, || format!("arf trivial: {}", e.is_some()));
                }
            }
            Ok(0)
        }
        Cmd::Check { instance, family, start, count, threads, path } => {
            let with_transfer = path.is_some();
            let instances: Vec<Instance> = match (instance, family) {
                (Some(p), None) => vec![read_json(&p)?],
                (None, Some(f)) => (start..start + count)
                    .map(|s| harness::generate_instance(&f, s))
                    .collect::<Result<_, _>>()?,
                _ => bail!("give --instance or --family"),
            };
            let reports: Vec<_> = if with_transfer || instances.len() == 1 {
                instances.iter().map(|i| harness::check_equivalence(i, with_transfer)).collect()
            } else {
                harness::run_batch(&instances, threads)
            };
            let mut code = 0u8;
            let mut jsons = Vec::new();
            for r in reports {
                let r = r?;
                code = match (code, r.exit_code()) {
                    (2, _) | (_, 2) => 2,
                    (3, _) | (_, 3) => 3,
                    _ => 0,
                };
                if !js {
                    println!(
                        "{} seed {}: (i) {} (ii) {} (iii) {} -> {}",
                        r.instance.family,
                        r.instance.seed,
                        short(&r.to_json()["cond_i"]),
                        short(&r.to_json()["cond_ii"]),
                        short(&r.to_json()["cond_iii_not_division"]),
                        if r.consistent() { "consistent" } else { "INCONSISTENT" }
                    );
                }
                jsons.push(r.to_json());
            }
            if js {
                let out = if jsons.len() == 1 { jsons.pop().unwrap() } else { Value::Array(jsons) };
                println!("{}", serde_json::to_string_pretty(&out)?);
            }
            Ok(code)
        }
        Cmd::Gen { family, seed } => {
            let inst = harness::generate_instance(&family, seed)?;
            println!("{}", serde_json::to_string_pretty(&inst)?);
            Ok(0)
        }
        Cmd::Verify { report } => {
            let v: Value = read_json(&report)?;
            let items = match v {
                Value::Array(a) => a,
                other => vec![other],
            };
            let mut ok = true;
            for item in &items {
                ok &= harness::verify_certificate(item)?;
            }
            let out = json!({"accepted": ok, "reports": items.len()});
            emit(js, &out, || if ok { "accepted".into() } else { "rejected".into() });
            Ok(if ok { 0 } else { 2 })
        }
    }
}

fn short(v: &Value) -> String {
    v["verdict"].as_str().unwrap_or("?").to_string()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
