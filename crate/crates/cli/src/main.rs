use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use fibermahler::alexander::{
    abelian_cover_alexander, char_poly_fibered, pullback_class_specialization, ManifoldRecord,
};
use fibermahler::mahler::{mahler_measure, QuadratureConfig};
use fibermahler::pipeline::{run_pipeline, PipelineConfig};
use fibermahler::surfcover::{spectral_lift_search, FreeAutomorphism};
use fibermahler::torsion::growth_series;
use fibermahler::{IntLinearMap, LaurentPoly};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "fibermahler",
    version,
    about = "Mahler measures, Alexander polynomials and lifted surface automorphisms"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Mahler measure of a polynomial fixture.
    Mahler {
        input: PathBuf,
        #[arg(long, default_value_t = 64)]
        grid: usize,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
    },
    /// Alexander polynomial of a manifold record.
    Alexander { input: PathBuf },
    /// Alexander polynomial of a finite abelian cover.
    CoverAlex {
        input: PathBuf,
        /// Order of the cyclic factors.
        #[arg(long)]
        k: u64,
        /// Twisted variables, 1-based.
        #[arg(long, value_delimiter = ',', required = true)]
        twist: Vec<usize>,
        /// Optional class to specialize along, e.g. `1,0`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        class: Option<Vec<i64>>,
    },
    /// Torsion of cyclic covers and its exponential growth rate.
    TorsionGrowth {
        input: PathBuf,
        #[arg(long, default_value_t = 30)]
        n_max: u64,
    },
    /// Search finite covers for a lift with spectral radius above one.
    LiftSearch {
        input: PathBuf,
        #[arg(long, default_value_t = 4)]
        d_max: usize,
    },
    /// The end-to-end check on a manifold record.
    Pipeline {
        input: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        threshold: f64,
        #[arg(long, default_value_t = 64)]
        grid: usize,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
        #[arg(long, default_value_t = 24)]
        max_denominator: i64,
    },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// A polynomial fixture `{name, poly}` or a manifold record.
fn load_poly(path: &Path) -> Result<(String, LaurentPoly)> {
    let text = read(path)?;
    let doc: Value =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if let Some(poly) = doc.get("poly") {
        let p: LaurentPoly = serde_json::from_value(poly.clone()).context("parsing polynomial")?;
        let name = doc
            .get("name")
            .and_then(Value::as_str)
            .unwrap_or("")
            .to_string();
        if let Some(n) = doc.get("num_vars").and_then(Value::as_u64) {
            return Ok((name, p.with_num_vars(n as usize)?));
        }
        return Ok((name, p));
    }
    let rec = ManifoldRecord::from_json(&text)?;
    let delta = rec
        .alexander_polynomial()?
        .ok_or_else(|| anyhow!("record {} has no Alexander polynomial", rec.name))?;
    Ok((rec.name, delta))
}

fn load_record(path: &Path) -> Result<ManifoldRecord> {
    Ok(ManifoldRecord::from_json(&read(path)?)?)
}

fn cmd_mahler(input: &Path, grid: usize, tol: f64, format: Format) -> Result<String> {
    let (name, p) = load_poly(input)?;
    let cfg = QuadratureConfig {
        grid,
        tol,
        ..QuadratureConfig::default()
    };
    let m = mahler_measure(&p, &cfg)?;
    Ok(match format {
        Format::Machine => pretty(&json!({ "name": name, "poly": p, "result": m })),
        Format::Text => format!(
            "polynomial: {p}\nvalue: {:.10}\nlog_value: {:.10}\nmethod: {}\nerror_estimate: {:.3e}\n",
            m.value, m.log_value, m.method, m.error_estimate
        ),
    })
}

fn cmd_alexander(input: &Path, format: Format) -> Result<String> {
    let rec = load_record(input)?;
    let delta = rec.alexander_polynomial()?.map(|d| d.normalized());
    let from_presentation = match &rec.presentation {
        Some(p) => Some(fibermahler::alexander::alexander_of_group(p)?),
        None => None,
    };
    let mut classes = Vec::new();
    for fc in &rec.fibered_classes {
        let cp = char_poly_fibered(fc)?;
        let spec = match &delta {
            Some(d) => Some(d.substitute_linear(&fc.class_map())?.normalized()),
            None => None,
        };
        classes.push((fc.a.clone(), cp, spec));
    }
    Ok(match format {
        Format::Machine => pretty(&json!({
            "name": rec.name,
            "b1": rec.b1,
            "delta": delta,
            "from_presentation": from_presentation,
            "classes": classes.iter().map(|(a, cp, spec)| json!({
                "class": a,
                "char_poly": cp,
                "specialization": spec,
            })).collect::<Vec<_>>(),
        })),
        Format::Text => {
            let mut s = format!("manifold: {}\nb1: {}\n", rec.name, rec.b1);
            match &delta {
                Some(d) => writeln!(s, "delta: {d}")?,
                None => writeln!(s, "delta: unavailable")?,
            }
            if let Some(f) = &from_presentation {
                writeln!(s, "from presentation: {f}")?;
            }
            for (a, cp, spec) in &classes {
                write!(s, "class {a:?}: char poly {cp}")?;
                if let Some(sp) = spec {
                    write!(s, ", specialization {sp}")?;
                }
                writeln!(s)?;
            }
            s
        }
    })
}

fn cmd_cover_alex(
    input: &Path,
    k: u64,
    twist: &[usize],
    class: Option<&[i64]>,
    format: Format,
) -> Result<String> {
    let (name, p) = load_poly(input)?;
    if twist.contains(&0) {
        bail!("twisted variables are numbered from 1");
    }
    let vars: Vec<usize> = twist.iter().map(|j| j - 1).collect();
    let cover = abelian_cover_alexander(&p, k, &vars)?;
    let pullback = match class {
        Some(a) => Some(pullback_class_specialization(
            &cover,
            &IntLinearMap::row(a),
        )?),
        None => None,
    };
    Ok(match format {
        Format::Machine => pretty(&json!({
            "name": name,
            "delta": p,
            "k": k,
            "twisted": twist,
            "cover_delta": cover,
            "pullback": pullback,
        })),
        Format::Text => {
            let mut s = format!(
                "delta: {p}\ncover: Z_{k}^{} on {twist:?}\ncover delta: {cover}\n",
                twist.len()
            );
            if let (Some(pb), Some(a)) = (&pullback, class) {
                writeln!(s, "pullback along {a:?}: {}", pb.poly)?;
                writeln!(s, "leading coefficient +-1: {}", pb.leading_unit)?;
            }
            s
        }
    })
}

fn cmd_torsion_growth(input: &Path, n_max: u64, format: Format) -> Result<String> {
    let (name, p) = load_poly(input)?;
    let series = growth_series(&p.normalized(), n_max)?;
    Ok(match format {
        Format::Machine => pretty(&json!({ "name": name, "delta": p, "series": series })),
        Format::Text => {
            let mut s = format!(
                "delta: {p}\n{:>4}  {:>24}  {:>14}\n",
                "n", "torsion", "log(torsion)/n"
            );
            for g in &series {
                let t = g.torsion.as_ref().map_or("infinite".to_string(), |t| {
                    let d = t.to_string();
                    if d.len() > 24 {
                        format!("~1e{}", d.len() - 1)
                    } else {
                        d
                    }
                });
                let r = g.log_growth.map_or("-".to_string(), |v| format!("{v:.10}"));
                writeln!(s, "{:>4}  {t:>24}  {r:>14}", g.n)?;
            }
            s
        }
    })
}

fn cmd_lift_search(input: &Path, d_max: usize, format: Format) -> Result<String> {
    let phi: FreeAutomorphism =
        serde_json::from_str(&read(input)?).context("parsing automorphism")?;
    let out = spectral_lift_search(&phi, d_max)?;
    Ok(match format {
        Format::Machine => pretty(&json!({ "automorphism": phi, "outcome": out })),
        Format::Text => {
            let mut s = format!(
                "automorphism: {}\n{:>6}  {:>7}  {:>5}  {:>9}  {:>14}\n",
                phi.name().unwrap_or("(unnamed)"),
                "degree",
                "classes",
                "lifts",
                "max power",
                "max radius"
            );
            for d in &out.degrees {
                writeln!(
                    s,
                    "{:>6}  {:>7}  {:>5}  {:>9}  {:>14.10}",
                    d.degree, d.classes, d.lifts, d.max_power, d.max_radius
                )?;
            }
            match &out.found {
                Some(hit) => writeln!(
                    s,
                    "found: degree {} cover {:?}, power {}, radius {:.10}",
                    hit.cover.degree(),
                    hit.cover.one_line(),
                    hit.lift.power,
                    hit.lift.radius
                )?,
                None => writeln!(s, "found: none up to degree {d_max} (inconclusive)")?,
            }
            if let Some(n) = &out.note {
                writeln!(s, "note: {n}")?;
            }
            s
        }
    })
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("output serializes");
    s.push('\n');
    s
}

fn run(cli: &Cli) -> Result<String> {
    if let Some(j) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build_global()
            .context("configuring worker pool")?;
    }
    let f = cli.format;
    match &cli.command {
        Command::Mahler { input, grid, tol } => cmd_mahler(input, *grid, *tol, f),
        Command::Alexander { input } => cmd_alexander(input, f),
        Command::CoverAlex {
            input,
            k,
            twist,
            class,
        } => cmd_cover_alex(input, *k, twist, class.as_deref(), f),
        Command::TorsionGrowth { input, n_max } => cmd_torsion_growth(input, *n_max, f),
        Command::LiftSearch { input, d_max } => cmd_lift_search(input, *d_max, f),
        Command::Pipeline {
            input,
            threshold,
            grid,
            tol,
            max_denominator,
        } => {
            let rec = load_record(input)?;
            let cfg = PipelineConfig {
                threshold: *threshold,
                quadrature: QuadratureConfig {
                    grid: *grid,
                    tol: *tol,
                    ..QuadratureConfig::default()
                },
                max_slice_denominator: *max_denominator,
                ..PipelineConfig::default()
            };
            let report = run_pipeline(&rec, &cfg)?;
            Ok(match f {
                Format::Machine => report.to_machine() + "\n",
                Format::Text => report.to_text(),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
