//! `carnot` — command-line surface over the exact/Monte-Carlo toolkit.
//!
//! Every command is deterministic: identical flags produce byte-identical
//! output. Numeric output is exact rational text in `--exact` mode and
//! shortest round-trip doubles otherwise. Exit codes: 0 success, 1
//! verification failure, 2 usage error.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use carnot_core::csets::{
    cantor_build, monotonicity_test, resolve_set, CantorSpec, ZSpec,
};
use carnot_core::density::{blowup_experiment, density_profile, mc_density};
use carnot_core::f23::{flow_horiz, parse_pt1, parse_pt2, pt2_strings, Pt2};
use carnot_core::liecore::CarnotAlgebra;
use carnot_core::rectifier;
use carnot_core::scalar::parse_rational;
use carnot_core::semigroup::{factor_in_w6, member_s, member_wedge, w3_separation, ZigZag};
use carnot_core::verify::run_identity_suite;

#[derive(Parser)]
#[command(
    name = "carnot",
    version,
    about = "Exact group arithmetic, semigroup membership, constant-normal set checks, \
             and Monte-Carlo density estimation in the free rank-2 step-3 Carnot group"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum CoordKind {
    First,
    Second,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Multiply two points (second-kind coordinates by default)
    Mul {
        /// first factor, five comma-separated rationals or decimals
        #[arg(long)]
        x: String,
        /// second factor
        #[arg(long)]
        y: String,
        #[arg(long, value_enum, default_value = "second")]
        coords: CoordKind,
        /// print exact rationals instead of doubles
        #[arg(long)]
        exact: bool,
    },
    /// Convert a point between the two exponential coordinate systems
    Coords {
        #[arg(long)]
        point: String,
        #[arg(long, value_enum)]
        to: CoordKind,
        #[arg(long)]
        exact: bool,
    },
    /// Evaluate the horizontal flow exp(t (a X1 + X2))
    Flow {
        #[arg(long)]
        a: String,
        #[arg(long)]
        t: String,
        #[arg(long)]
        exact: bool,
    },
    /// Classify a point against the half-space semigroup
    Member {
        /// point in second-kind coordinates
        #[arg(long, alias = "x")]
        point: String,
    },
    /// Evaluate a zig-zag endpoint, or factor an interior point (--invert)
    Zigzag {
        /// steps as `a:b,a:b,...`, each flowing along a X1 + b X2 for unit time
        #[arg(long, conflicts_with = "invert")]
        steps: Option<String>,
        /// factor the --point into at most six half-space steps
        #[arg(long, requires = "point")]
        invert: bool,
        #[arg(long)]
        point: Option<String>,
        /// check the alternating separation bound instead (steps as a:b pairs)
        #[arg(long, conflicts_with_all = ["invert", "steps"])]
        separation: Option<String>,
    },
    /// Test wedge membership of a first-kind point
    Wedge {
        #[arg(long)]
        point: String,
    },
    /// Run the exact identity suite, one PASS/FAIL line per identity
    VerifyIdentities,
    /// Flow sampled members of a set along half-space directions and report violations
    MonotoneCheck {
        /// registry name: halfspace, halfspace-complement, E1, E2, S-interior,
        /// coneAB:a:b, pathE:depth
        #[arg(long)]
        set: String,
        #[arg(long, default_value_t = 400)]
        points: usize,
        #[arg(long, default_value_t = 5)]
        directions: usize,
        #[arg(long, default_value_t = 5)]
        times: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Monte-Carlo density of a set in a gauge ball
    /// (CSV columns: r,mean,ci95,n,seed)
    Density {
        #[arg(long)]
        set: String,
        #[arg(long, default_value = "0,0,0,0,0")]
        center: String,
        /// ball radius; ignored when --radii is given
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        /// comma-separated radius schedule for a profile
        #[arg(long)]
        radii: Option<String>,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Density sequences of the dilated translated-cone family
    /// (CSV columns: branch,ell,zoom_cubed,mean,ci95,n,seed)
    Blowup {
        #[arg(long, default_value_t = 2)]
        n1: u64,
        #[arg(long, default_value_t = 2)]
        lmax: usize,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Exact interval lists of the positive-measure Cantor construction
    Cantor {
        #[arg(long)]
        depth: usize,
        /// also print slope witnesses through the given level
        #[arg(long)]
        slopes: Option<usize>,
    },
    /// Run the direction-propagation engine on a Carnot algebra
    Rectify {
        /// builtin name (f23, f24, free:RANK:STEP) or a structure-table file
        #[arg(long)]
        algebra: String,
        /// 1-based index of the monotone (normal) direction
        #[arg(long)]
        normal: usize,
        /// comma-separated invariant indices; default: the other first-layer
        /// basis directions
        #[arg(long)]
        invariants: Option<String>,
    },
}

#[derive(Serialize)]
struct PointOut {
    schema: u32,
    coords: Vec<String>,
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn emit_point_exact(p: &carnot_core::f23::QPt2) {
    let out = PointOut { schema: 1, coords: pt2_strings(p) };
    println!("{}", serde_json::to_string(&out).expect("serializable"));
}

fn emit_point(p: &carnot_core::f23::QPt2, exact: bool) {
    if exact {
        emit_point_exact(p);
    } else {
        let out = json!({
            "schema": 1,
            "coords": p.approx().0.to_vec(),
        });
        println!("{out}");
    }
}

fn run() -> Result<ExitCode, String> {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Mul { x, y, coords, exact } => {
            match coords {
                CoordKind::Second => {
                    let x = parse_pt2(&x)?;
                    let y = parse_pt2(&y)?;
                    emit_point(&x.mul(&y), exact);
                }
                CoordKind::First => {
                    let x = parse_pt1(&x)?;
                    let y = parse_pt1(&y)?;
                    emit_point(&Pt2(x.mul(&y).0), exact);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Coords { point, to, exact } => {
            match to {
                CoordKind::First => {
                    let p = parse_pt2(&point)?;
                    emit_point(&Pt2(p.to_first().0), exact);
                }
                CoordKind::Second => {
                    let p = parse_pt1(&point)?;
                    emit_point(&p.to_second(), exact);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Flow { a, t, exact } => {
            let a = parse_rational(&a)?;
            let t = parse_rational(&t)?;
            emit_point(&flow_horiz(&a, &t), exact);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Member { point } => {
            let p = parse_pt2(&point)?;
            let m = member_s(&p);
            let out = json!({
                "schema": 1,
                "verdict": format!("{:?}", m.verdict),
                "p_value": m.p_value,
                "residuals": m.residuals,
            });
            println!("{out}");
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Zigzag { steps, invert, point, separation } => {
            if let Some(pairs) = separation {
                let controls = parse_pairs(&pairs)?;
                let rep = w3_separation(&controls).map_err(|e| e.to_string())?;
                let out = json!({
                    "schema": 1,
                    "q2": rep.q2, "q4": rep.q4,
                    "lower_bound": rep.lower_bound,
                    "satisfied": rep.satisfied,
                });
                println!("{out}");
                return Ok(if rep.satisfied { ExitCode::SUCCESS } else { ExitCode::from(1) });
            }
            if invert {
                let p = parse_pt2(point.as_deref().ok_or("--invert needs --point")?)?;
                match factor_in_w6(&p) {
                    Ok(zz) => {
                        let out = json!({
                            "schema": 1,
                            "steps": zz.steps.iter()
                                .map(|(a, b)| format!("{a}:{b}"))
                                .collect::<Vec<_>>(),
                            "endpoint": pt2_strings(&zz.endpoint()),
                        });
                        println!("{out}");
                        Ok(ExitCode::SUCCESS)
                    }
                    Err(e) => {
                        println!("{}", json!({"schema": 1, "error": e.to_string()}));
                        Ok(ExitCode::from(1))
                    }
                }
            } else {
                let steps = steps.ok_or("zigzag needs --steps, --separation, or --invert")?;
                let controls = parse_pairs(&steps)?;
                let zz = ZigZag::new(controls);
                emit_point_exact(&zz.endpoint());
                Ok(ExitCode::SUCCESS)
            }
        }
        Cmd::Wedge { point } => {
            let p = parse_pt1(&point)?;
            let out = json!({"schema": 1, "member": member_wedge(&p)});
            println!("{out}");
            Ok(ExitCode::SUCCESS)
        }
        Cmd::VerifyIdentities => {
            let results = run_identity_suite();
            let mut all = true;
            for r in &results {
                println!("{}  {}", if r.passed { "PASS" } else { "FAIL" }, r.name);
                all &= r.passed;
            }
            println!(
                "note: adjoint expansions use exact 1/k! series coefficients, \
                 cross-checked against group conjugation"
            );
            Ok(if all { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Cmd::MonotoneCheck { set, points, directions, times, seed } => {
            let oracle = resolve_set(&set).map_err(|e| e.to_string())?;
            let rep = monotonicity_test(&oracle, points, directions, times, seed)
                .map_err(|e| e.to_string())?;
            println!("{}", serde_json::to_string(&rep).expect("serializable"));
            Ok(if rep.passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Cmd::Density { set, center, r, radii, samples, seed, format } => {
            let oracle = resolve_set(&set).map_err(|e| e.to_string())?;
            let center = parse_pt2(&center)?.approx();
            let estimates = match radii {
                Some(list) => {
                    let rs: Vec<f64> = list
                        .split(',')
                        .map(|s| s.trim().parse::<f64>().map_err(|e| e.to_string()))
                        .collect::<Result<_, _>>()?;
                    density_profile(&oracle, &center, &rs, samples, seed)
                }
                None => vec![mc_density(&oracle, &center, r, samples, seed)],
            };
            match format {
                Format::Json => {
                    println!(
                        "{}",
                        json!({"schema": 1, "set": oracle.name, "estimates": estimates})
                    );
                }
                Format::Csv => {
                    println!("r,mean,ci95,n,seed");
                    for e in &estimates {
                        println!("{},{},{},{},{}", e.radius, e.mean, e.half_width_95, e.n_samples, e.seed);
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Blowup { n1, lmax, samples, seed, format } => {
            let spec = ZSpec::new(n1, 2 * lmax + 1).map_err(|e| e.to_string())?;
            let exp = blowup_experiment(&spec, lmax, samples, seed);
            match format {
                Format::Json => {
                    println!("{}", json!({"schema": 1, "experiment": exp}));
                }
                Format::Csv => {
                    println!("branch,ell,zoom_cubed,mean,ci95,n,seed");
                    for row in &exp.rows {
                        println!(
                            "coarse,{},{},{},{},{},{}",
                            row.ell, row.zoom_cubed_big, row.big.mean, row.big.half_width_95,
                            row.big.n_samples, row.big.seed
                        );
                        println!(
                            "fine,{},{},{},{},{},{}",
                            row.ell, row.zoom_cubed_small, row.small.mean, row.small.half_width_95,
                            row.small.n_samples, row.small.seed
                        );
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Cantor { depth, slopes } => {
            let spec = CantorSpec::default_tail(depth);
            let levels = cantor_build(&spec).map_err(|e| e.to_string())?;
            let mut out = json!({
                "schema": 1,
                "depth": depth,
                "levels": levels.iter().map(|level| {
                    level.iter().map(|(lo, hi)| vec![lo.to_string(), hi.to_string()]).collect::<Vec<_>>()
                }).collect::<Vec<_>>(),
            });
            if let Some(upto) = slopes {
                let mut ws = Vec::new();
                for n in 0..=upto {
                    let w = carnot_core::csets::slope_witness(&spec, n, &parse_rational("1")?)
                        .map_err(|e| e.to_string())?;
                    ws.push(w);
                }
                out["slopes"] = serde_json::to_value(ws).expect("serializable");
            }
            println!("{out}");
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Rectify { algebra, normal, invariants } => {
            let alg = load_algebra(&algebra)?;
            let invariant_idxs: Vec<usize> = match invariants {
                Some(list) => list
                    .split(',')
                    .map(|s| s.trim().parse::<usize>().map_err(|e| e.to_string()))
                    .collect::<Result<_, _>>()?,
                None => alg
                    .layer_indices(1)
                    .into_iter()
                    .map(|i| i + 1)
                    .filter(|&i| i != normal)
                    .collect(),
            };
            let verdict = rectifier::run(&alg, normal, &invariant_idxs).map_err(|e| e.to_string())?;
            let replayed = rectifier::replay(&alg, normal, &invariant_idxs, verdict.log())
                .map_err(|e| e.to_string())?;
            let out = json!({
                "schema": 1,
                "algebra": alg.name,
                "normal": normal,
                "invariants": invariant_idxs,
                "replay_consistent": replayed.residual_layers().is_empty() == verdict.is_vertical(),
                "verdict": verdict,
            });
            println!("{out}");
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn parse_pairs(s: &str) -> Result<Vec<(carnot_core::Q, carnot_core::Q)>, String> {
    s.split(',')
        .map(|tok| {
            let (a, b) = tok.split_once(':').ok_or_else(|| format!("expected a:b, got {tok:?}"))?;
            Ok((parse_rational(a)?, parse_rational(b)?))
        })
        .collect()
}

fn load_algebra(name: &str) -> Result<std::sync::Arc<CarnotAlgebra>, String> {
    match name {
        "f23" => return Ok(CarnotAlgebra::f23()),
        "f24" => return Ok(CarnotAlgebra::f24()),
        _ => {}
    }
    if let Some(rest) = name.strip_prefix("free:") {
        let (r, s) = rest.split_once(':').ok_or("expected free:RANK:STEP")?;
        let rank: usize = r.parse().map_err(|e| format!("bad rank: {e}"))?;
        let step: usize = s.parse().map_err(|e| format!("bad step: {e}"))?;
        return CarnotAlgebra::free_nilpotent(rank, step).map_err(|e| e.to_string());
    }
    let text = std::fs::read_to_string(name)
        .map_err(|e| format!("cannot read algebra table {name:?}: {e}"))?;
    CarnotAlgebra::from_table_str(name, &text).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(msg) => usage_error(&msg),
    }
}
