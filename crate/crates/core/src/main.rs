use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use latgap::enumeration::{self, Ball, VPolytope};
use latgap::experiments::{self, csv_row, sort_reports, Body, ExperimentReport, CSV_HEADER};
use latgap::gap::{self, Gap};
use latgap::random_lattice::{self, RandomLatticeConfig, DEFAULT_PRIME};
use latgap::sumset::{self, PointSet};
use latgap::{rational, Error, LatticeBasis, Result, Subspace};

#[derive(Parser)]
#[command(name = "latgap", version, about = "Exact lattice-point, sumset and GAP experiments")]
struct Cli {
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Tabular output for report-producing commands.
    #[arg(long, global = true)]
    csv: bool,
    /// Zero all runtime fields so output is byte-stable.
    #[arg(long, global = true)]
    no_timing: bool,
    #[command(subcommand)]
    command: Command,
}

/// Lattice source: a JSON basis, a random sample, or `Z^n`.
#[derive(Args, Clone)]
struct LatticeArgs {
    /// Basis JSON (inline or a file path).
    #[arg(long)]
    basis: Option<String>,
    /// Dimension for `Z^n` or a random lattice.
    #[arg(long)]
    n: Option<usize>,
    /// Sample a random determinant-one lattice instead of `Z^n`.
    #[arg(long)]
    random: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    p: u64,
}

impl LatticeArgs {
    fn load(&self) -> Result<LatticeBasis> {
        if let Some(b) = &self.basis {
            return LatticeBasis::from_json(&read_json(b)?);
        }
        let n = self
            .n
            .ok_or_else(|| Error::InvalidArgument("pass --basis or --n".into()))?;
        if self.random {
            let cfg = RandomLatticeConfig::new(n, self.p, self.seed)?;
            Ok(random_lattice::sample_random_lattice(&cfg).basis)
        } else {
            Ok(LatticeBasis::identity(n))
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Lattice points in an origin-centered (or shifted) ball.
    Ball {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long)]
        radius: String,
        /// Center point JSON.
        #[arg(long)]
        center: Option<String>,
        #[arg(long)]
        count_only: bool,
    },
    /// Lattice points in the convex hull of a vertex list.
    Polytope {
        #[command(flatten)]
        lattice: LatticeArgs,
        /// Vertex list JSON.
        #[arg(long)]
        vertices: String,
        #[arg(long)]
        count_only: bool,
    },
    /// Minkowski sum A+B (B defaults to A).
    Sumset {
        #[arg(long = "in")]
        input: String,
        #[arg(long)]
        with: Option<String>,
        #[arg(long)]
        count_only: bool,
    },
    /// |A|, |A+A| and the doubling factor.
    Doubling {
        #[arg(long = "in")]
        input: String,
    },
    /// GAP utilities.
    Gap {
        #[command(subcommand)]
        action: GapAction,
    },
    /// Random lattice sampling and validation.
    Randlat {
        #[command(subcommand)]
        action: RandlatAction,
    },
    /// |A+A| ≤ 5^n |A| for a symmetric body.
    Claim1 {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long)]
        radius: Option<String>,
        /// Symmetric polytope vertex list JSON, used instead of a ball.
        #[arg(long)]
        polytope: Option<String>,
        #[arg(long, default_value_t = experiments::DEFAULT_MAX_DIM)]
        max_dim: usize,
    },
    /// Sizes for the non-symmetric hull of (±N,0,0), (0,±N,1).
    Nonsym {
        #[arg(long = "N")]
        big_n: u32,
        /// Run every N up to this value.
        #[arg(long)]
        to: Option<u32>,
    },
    /// Point count against 2^{-n} vol(B(r)).
    Blichfeldt {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long)]
        radius: String,
    },
    /// |Λ ∩ W ∩ B(r)| against the half-dimensional counting bound.
    Corollary {
        #[command(flatten)]
        lattice: LatticeArgs,
        /// Subspace JSON (spanning vectors).
        #[arg(long)]
        w: String,
        #[arg(long)]
        radius: f64,
        #[arg(long, default_value_t = 1.0)]
        c1: f64,
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Every link of the covering chain for one GAP.
    Proofchain {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long)]
        radius: String,
        /// GAP JSON; dimensions are sorted before checking.
        #[arg(long)]
        gap: String,
        /// Defaults to ⌈n/2⌉, clamped to d+1.
        #[arg(long)]
        cut: Option<usize>,
    },
    /// |Λ ∩ B(n^{5/8})| against n^{n/8}.
    Minkbound {
        #[command(flatten)]
        lattice: LatticeArgs,
    },
    /// Point count against the reverse Minkowski bound.
    Revmink {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long)]
        radius: f64,
    },
    /// Random lattice, A = Λ ∩ B(n^{5/8}) and a family of random GAPs.
    Main {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        gaps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long, default_value_t = DEFAULT_PRIME)]
        p: u64,
        /// Include every per-GAP report in the JSON output.
        #[arg(long)]
        reports: bool,
    },
}

#[derive(Subcommand)]
enum GapAction {
    /// Distinct points of the GAP.
    Points {
        #[arg(long)]
        gap: String,
        #[arg(long)]
        count_only: bool,
    },
    /// Multiset and distinct sizes.
    Size {
        #[arg(long)]
        gap: String,
    },
    /// Restrictions fixing dimensions cut..d.
    Restrict {
        #[arg(long)]
        gap: String,
        #[arg(long)]
        cut: usize,
    },
}

#[derive(Subcommand)]
enum RandlatAction {
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_PRIME)]
        p: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    Siegel {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        vol: f64,
        #[arg(long, default_value_t = 2000)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_PRIME)]
        p: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Inline JSON if it looks like JSON, otherwise a file path.
fn read_json(arg: &str) -> Result<Value> {
    let t = arg.trim_start();
    let text = if t.starts_with('{') || t.starts_with('[') {
        arg.to_string()
    } else {
        fs::read_to_string(arg)?
    };
    Ok(serde_json::from_str(&text)?)
}

enum Output {
    Json(Value),
    Reports(Vec<ExperimentReport>),
}

fn run(cli: &Cli) -> Result<(Output, bool)> {
    let plain = |v: Value| Ok((Output::Json(v), true));
    let reports = |r: Vec<ExperimentReport>| {
        let ok = r.iter().all(ExperimentReport::ok);
        Ok((Output::Reports(r), ok))
    };
    match &cli.command {
        Command::Ball { lattice, radius, center, count_only } => {
            let basis = lattice.load()?;
            let mut ball = Ball::new(rational::parse(radius)?)?;
            if let Some(c) = center {
                ball = ball.with_center(latgap::Point::from_json(&read_json(c)?)?);
            }
            if *count_only {
                plain(json!({ "count": enumeration::count_points_in_ball(&basis, &ball)? }))
            } else {
                plain(enumeration::points_in_ball(&basis, &ball)?.to_json())
            }
        }
        Command::Polytope { lattice, vertices, count_only } => {
            let basis = lattice.load()?;
            let poly = VPolytope::from_json(&read_json(vertices)?)?;
            let pts = enumeration::lattice_points_in_polytope(&basis, &poly)?;
            if *count_only {
                plain(json!({ "count": pts.len() }))
            } else {
                plain(pts.to_json())
            }
        }
        Command::Sumset { input, with, count_only } => {
            let a = PointSet::from_json(&read_json(input)?)?;
            let b = match with {
                Some(w) => PointSet::from_json(&read_json(w)?)?,
                None => a.clone(),
            };
            let s = sumset::minkowski_sum(&a, &b)?;
            if *count_only {
                plain(json!({ "count": s.len() }))
            } else {
                plain(s.to_json())
            }
        }
        Command::Doubling { input } => {
            let a = PointSet::from_json(&read_json(input)?)?;
            plain(serde_json::to_value(sumset::doubling_factor(&a)?)?)
        }
        Command::Gap { action } => match action {
            GapAction::Points { gap, count_only } => {
                let g = Gap::from_json(&read_json(gap)?)?;
                let pts = gap::gap_points(&g)?;
                if *count_only {
                    plain(json!({ "count": pts.len() }))
                } else {
                    plain(pts.to_json())
                }
            }
            GapAction::Size { gap } => {
                let g = Gap::from_json(&read_json(gap)?)?;
                let multiset = gap::gap_size_multiset(&g);
                let distinct = gap::gap_points(&g)?.len();
                plain(json!({ "multiset": multiset.to_string(), "distinct": distinct, "proper": multiset == distinct as u128 }))
            }
            GapAction::Restrict { gap, cut } => {
                let g = Gap::from_json(&read_json(gap)?)?;
                let rs: Vec<Value> = gap::restrictions(&g, *cut)?
                    .into_iter()
                    .map(|(t, r)| json!({ "t": t, "gap": r.to_json() }))
                    .collect();
                plain(Value::Array(rs))
            }
        },
        Command::Randlat { action } => match action {
            RandlatAction::Sample { n, p, seed } => {
                let cfg = RandomLatticeConfig::new(*n, *p, *seed)?;
                plain(random_lattice::sample_random_lattice(&cfg).basis.to_json())
            }
            RandlatAction::Siegel { n, vol, trials, p, seed } => {
                let cfg = RandomLatticeConfig::new(*n, *p, *seed)?;
                let r = random_lattice::siegel_mean_value_check(&cfg, *vol, *trials)?;
                let ok = r.z <= 4.0;
                Ok((Output::Json(serde_json::to_value(r)?), ok))
            }
        },
        Command::Claim1 { lattice, radius, polytope, max_dim } => {
            let basis = lattice.load()?;
            let body = match (radius, polytope) {
                (Some(r), None) => Body::Ball(Ball::new(rational::parse(r)?)?),
                (None, Some(v)) => Body::Polytope(VPolytope::from_json(&read_json(v)?)?),
                _ => return Err(Error::InvalidArgument("pass exactly one of --radius or --polytope".into())),
            };
            reports(vec![experiments::check_claim1(&basis, &body, *max_dim)?])
        }
        Command::Nonsym { big_n, to } => {
            let last = to.unwrap_or(*big_n).max(*big_n);
            reports((*big_n..=last).map(experiments::check_nonsymmetric).collect::<Result<_>>()?)
        }
        Command::Blichfeldt { lattice, radius } => {
            let basis = lattice.load()?;
            reports(vec![experiments::check_blichfeldt(&basis, &rational::parse(radius)?)?])
        }
        Command::Corollary { lattice, w, radius, c1, dim } => {
            let basis = lattice.load()?;
            let w = Subspace::from_json(&read_json(w)?)?;
            reports(vec![experiments::check_corollary_count(&basis, &w, *radius, *c1, *dim)?])
        }
        Command::Proofchain { lattice, radius, gap, cut } => {
            let basis = lattice.load()?;
            let ball = Ball::new(rational::parse(radius)?)?;
            let g = gap::sort_dims_nonincreasing(&Gap::from_json(&read_json(gap)?)?);
            let cut = cut.unwrap_or_else(|| basis.ambient_dim().div_ceil(2).min(g.rank() + 1));
            reports(experiments::check_proof_chain(&basis, &ball, &g, cut)?)
        }
        Command::Minkbound { lattice } => reports(vec![experiments::check_minkbound(&lattice.load()?)?]),
        Command::Revmink { lattice, radius } => {
            let basis = lattice.load()?;
            reports(vec![random_lattice::check_reverse_minkowski(&basis, *radius)?])
        }
        Command::Main { n, gaps, seed, c, p, reports: full } => {
            let cfg = RandomLatticeConfig::new(*n, *p, *seed)?;
            let mut run = experiments::run_main_experiment(&cfg, *gaps, *c)?;
            let ok = run.summary.pass;
            if cli.no_timing {
                run.summary.runtime_ms = 0;
            }
            if cli.csv {
                return Ok((Output::Reports(run.reports), ok));
            }
            let mut v = serde_json::to_value(&run.summary)?;
            if *full {
                let mut rs = run.reports;
                strip_timing(&mut rs, cli.no_timing);
                v["reports"] = serde_json::to_value(rs)?;
            }
            Ok((Output::Json(v), ok))
        }
    }
}

fn strip_timing(reports: &mut [ExperimentReport], no_timing: bool) {
    if no_timing {
        for r in reports {
            r.runtime_ms = 0;
        }
    }
}

fn to_pretty<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn render(cli: &Cli, out: Output) -> Result<String> {
    match out {
        Output::Json(v) => to_pretty(&v),
        Output::Reports(mut rs) => {
            sort_reports(&mut rs);
            strip_timing(&mut rs, cli.no_timing);
            if cli.csv {
                let mut s = String::from(CSV_HEADER);
                s.push('\n');
                for r in &rs {
                    s.push_str(&csv_row(r));
                    s.push('\n');
                }
                Ok(s)
            } else {
                to_pretty(&rs)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|(out, ok)| {
        let text = render(&cli, out)?;
        match &cli.out {
            Some(path) => fs::write(path, text)?,
            None => std::io::stdout().write_all(text.as_bytes())?,
        }
        Ok(ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
