//! `gfe`: command-line front end for the `gfe-core` library.
//!
//! Exit codes: 0 success, 1 internal error, 2 parse or usage error, 3 a
//! mathematical precondition failed, 4 the local test was inconclusive.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use gfe_core::localtest::{local_test, DEFAULT_MAX_DEPTH};
use gfe_core::sieve::combine;
use gfe_core::solutions::{point_search, recover_solution, reproduce_theorem, septic_search, subset_filter};
use gfe_core::twists::{catalog, enumerate_case1, x_e7_minus_quartic, x_e7_quartic};
use gfe_core::zeta::{count_points, counts, LPolynomial};
use gfe_core::{
    models, CovariantSet, EllipticCoeffs, Error, Fq, IntersectionData, JValue, ProjPoint, SepticCurve, SieveConstraint,
    SieveState, TernaryForm,
};

#[derive(Parser)]
#[command(name = "gfe", version, about = "Exact tools for twists of the Klein quartic and x^2 + y^3 = z^7")]
struct Cli {
    /// Output format: plain text, or one JSON object per result line.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    #[value(alias = "json-lines")]
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Invariant Psi0, covariants Psi6, Psi14, Psi21 and the syzygy check.
    Covariants { poly: String },
    /// j-map value at a point of the curve.
    J { poly: String, x: BigInt, y: BigInt, z: BigInt },
    /// Primitive solution attached to a point of the curve.
    Recover { poly: String, x: BigInt, y: BigInt, z: BigInt },
    /// Residue-class local test at one prime.
    Localtest {
        poly: String,
        #[arg(long)]
        p: u64,
        #[arg(long, env = "GFE_MAX_DEPTH", default_value_t = DEFAULT_MAX_DEPTH)]
        max_depth: u32,
    },
    /// Rational points of bounded height.
    Search {
        curve: String,
        #[arg(long)]
        bound: u64,
        /// Keep only points in the admissible classes at 2 and 3.
        #[arg(long)]
        subset: bool,
        #[arg(long, env = "GFE_MAX_DEPTH", default_value_t = DEFAULT_MAX_DEPTH)]
        max_depth: u32,
    },
    /// Number of points over the field with p^k elements.
    Count {
        curve: String,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
    },
    /// Order of the Jacobian over F_p.
    JacobianOrder {
        curve: String,
        #[arg(long)]
        p: u64,
    },
    /// Component group of a fiber given by its intersection matrix.
    ComponentGroup { file: PathBuf },
    /// Combine sieve constraint files in order.
    Sieve {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Points of c1 X^7 + c2 Y^7 + c3 Z^7 = 0 of bounded height.
    Septic {
        #[arg(allow_hyphen_values = true)]
        c1: BigInt,
        #[arg(allow_hyphen_values = true)]
        c2: BigInt,
        #[arg(allow_hyphen_values = true)]
        c3: BigInt,
        #[arg(long)]
        bound: u64,
    },
    /// Twist constructions.
    #[command(subcommand)]
    Twists(TwistCommand),
    /// All primitive solutions recovered from the catalog points.
    VerifyTheorem,
}

#[derive(Subcommand)]
enum TwistCommand {
    /// Normalized diagonal twists a x^3y + b y^3z + c z^3x.
    Case1,
    /// The quartic X_E(7) (or X_E^-(7)) of Y^2 = X^3 + aX + b.
    FromCurve {
        #[arg(allow_hyphen_values = true)]
        a: BigInt,
        #[arg(allow_hyphen_values = true)]
        b: BigInt,
        #[arg(long)]
        minus: bool,
    },
}

enum Failure {
    Core(Error),
    Io(PathBuf, std::io::Error),
    Inconclusive,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<(), Failure>;

/// Collects result lines in either format.
struct Out {
    format: Format,
}

impl Out {
    fn line(&self, text: impl std::fmt::Display, value: Value) {
        match self.format {
            Format::Text => println!("{text}"),
            Format::Json => println!("{value}"),
        }
    }
}

fn resolve(name: &str) -> Result<TernaryForm, Error> {
    match catalog().get(name) {
        Some(c) => Ok(c.form.clone()),
        None => name.parse(),
    }
}

fn point(x: BigInt, y: BigInt, z: BigInt) -> Result<ProjPoint, Error> {
    ProjPoint::new(x, y, z)
}

fn point_json(p: &ProjPoint) -> Value {
    json!(p.coords().iter().map(ToString::to_string).collect::<Vec<_>>())
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(path.clone(), e))
}

fn run(cli: Cli) -> Outcome {
    let out = Out { format: cli.format };
    match cli.command {
        Command::Covariants { poly } => {
            let cov = CovariantSet::new(&resolve(&poly)?)?;
            let psi0 = gfe_core::arith::rational_to_string(&cov.psi0);
            out.line(format!("psi0 {psi0}"), json!({"name": "psi0", "value": psi0}));
            for (name, f) in [("psi6", &cov.psi6), ("psi14", &cov.psi14), ("psi21", &cov.psi21)] {
                out.line(format!("{name} {f}"), json!({"name": name, "value": f.to_string()}));
            }
            let ok = cov.syzygy_residue().is_zero();
            out.line(format!("syzygy {}", if ok { "holds" } else { "fails" }), json!({"name": "syzygy", "value": ok}));
        }
        Command::J { poly, x, y, z } => {
            let cov = CovariantSet::new(&resolve(&poly)?)?;
            let pt = point(x, y, z)?;
            let j = cov.j_at(pt.coords())?;
            let finite = matches!(j, JValue::Finite(_));
            out.line(&j, json!({"point": point_json(&pt), "j": j.to_string(), "finite": finite}));
        }
        Command::Recover { poly, x, y, z } => {
            let pt = point(x, y, z)?;
            let r = recover_solution(&resolve(&poly)?, &pt)?;
            let value = match &r {
                gfe_core::Recovery::Solution(s) => {
                    json!({"point": point_json(&pt), "a": s.a().to_string(), "b": s.b().to_string(), "c": s.c().to_string()})
                }
                gfe_core::Recovery::NoPrimitiveScaling { prime } => {
                    json!({"point": point_json(&pt), "obstruction": prime.to_string()})
                }
            };
            out.line(&r, value);
        }
        Command::Localtest { poly, p, max_depth } => {
            let v = local_test(&resolve(&poly)?, p, max_depth)?;
            out.line(format!("{} {}", p, v.label()), json!({"p": p, "verdict": v.label()}));
            for (classes, kind) in [(&v.admissible_classes, "admissible"), (&v.undecided, "undecided")] {
                for c in classes {
                    let reduction = c.reduction().map(|r| json!(r));
                    out.line(
                        format!("{p} {c} {kind}"),
                        json!({"p": p, "class": c.to_string(), "verdict": kind, "reduction": reduction}),
                    );
                }
            }
            if v.label() == "inconclusive" {
                return Err(Failure::Inconclusive);
            }
        }
        Command::Search { curve, bound, subset, max_depth } => {
            let f = resolve(&curve)?;
            let found = if subset {
                let keep = subset_filter(&f, max_depth)?;
                point_search(&f, bound, Some(&keep))?
            } else {
                point_search(&f, bound, None)?
            };
            for pt in found {
                out.line(&pt, json!({"point": point_json(&pt)}));
            }
        }
        Command::Count { curve, p, k } => {
            let field = Fq::new(p, k)?;
            let n = count_points(&resolve(&curve)?, &field)?;
            out.line(n, json!({"p": p, "k": k, "count": n}));
        }
        Command::JacobianOrder { curve, p } => {
            let n = counts(&resolve(&curve)?, p)?;
            let l = LPolynomial::from_counts(p, n)?;
            let order = l.at_one();
            if order <= 0 {
                return Err(Error::Internal("nonpositive Jacobian order".into()).into());
            }
            let coeffs: Vec<String> = l.coefficients().iter().map(ToString::to_string).collect();
            out.line(
                format!("counts {} {} {}\nl-polynomial {}\norder {order}", n[0], n[1], n[2], coeffs.join(" ")),
                json!({"p": p, "counts": n, "l_polynomial": coeffs, "order": order.to_string()}),
            );
        }
        Command::ComponentGroup { file } => {
            let data: IntersectionData = read(&file)?.parse()?;
            let g = models::component_group(&data)?;
            let factors: Vec<String> = g.invariant_factors.iter().map(ToString::to_string).collect();
            out.line(&g, json!({"group": g.to_string(), "invariant_factors": factors, "order": g.order().to_string()}));
        }
        Command::Sieve { files } => {
            let mut state = SieveState::new();
            for file in &files {
                let c: SieveConstraint = read(file)?.parse()?;
                state = combine(&state, &c);
                out.line(
                    format!("{}: {state}", file.display()),
                    json!({"file": file.display().to_string(), "modulus": state.modulus(), "survivors": state.survivors()}),
                );
            }
        }
        Command::Septic { c1, c2, c3, bound } => {
            let curve = SepticCurve::new(c1, c2, c3)?;
            for pt in septic_search(&curve, bound)? {
                out.line(&pt, json!({"point": point_json(&pt)}));
            }
        }
        Command::Twists(TwistCommand::Case1) => {
            for t in enumerate_case1() {
                out.line(t, json!({"a": t.a, "b": t.b, "c": t.c, "form": t.form().to_string()}));
            }
        }
        Command::Twists(TwistCommand::FromCurve { a, b, minus }) => {
            let e = EllipticCoeffs::new(a, b)?;
            let f = if minus { x_e7_minus_quartic(&e) } else { x_e7_quartic(&e) };
            out.line(&f, json!({"form": f.to_string(), "minus": minus}));
        }
        Command::VerifyTheorem => {
            for s in reproduce_theorem()? {
                out.line(&s, json!({"a": s.a().to_string(), "b": s.b().to_string(), "c": s.c().to_string()}));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Inconclusive) => ExitCode::from(4),
        Err(Failure::Io(path, e)) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            ExitCode::from(2)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Parse(_) => 2,
                Error::Internal(_) => 1,
                _ => 3,
            })
        }
    }
}
