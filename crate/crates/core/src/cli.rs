//! The `trisym` command line.
//!
//! Exit status: 0 success, 1 verification failure, 2 usage or input
//! error, 3 the solver found no rule.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::exactnum::default_precision;
use crate::moments::CertifyTolerances;
use crate::rulefile::{format17, RuleFile};
use crate::rulesdb::{self, CatalogEntry};
use crate::solver::{solve_analytic, solve_numeric, SolutionSet, SolverConfig};
use crate::system::{consistent_types, minimal_type};
use crate::triangle::{CubatureRule, QualityLabel, RuleType};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NOTHING_FOUND: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "trisym", version, about = "Fully symmetric cubature rules on the triangle")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the rule types that can reach degree D.
    Types {
        #[arg(allow_negative_numbers = true)]
        degree: i64,
        /// Largest point count to list [default: minimal count + 2].
        #[arg(long)]
        max_points: Option<u32>,
    },
    /// Find the rules of one type.
    Solve {
        degree: u32,
        /// Orbit counts n0,n1,n2.
        #[arg(name = "TYPE")]
        rtype: RuleType,
        /// Evaluate the closed form instead of searching numerically.
        #[arg(long)]
        analytic: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2000)]
        starts: usize,
        /// Search a type that fails the consistency conditions.
        #[arg(long)]
        force: bool,
        /// Directory for one rule file per real solution.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Print the summary only.
        #[arg(long)]
        no_write: bool,
    },
    /// Certify a rule file, or every catalog rule.
    Verify {
        #[arg(required_unless_present = "catalog")]
        file: Option<PathBuf>,
        #[arg(long, conflicts_with = "file")]
        catalog: bool,
        /// Residual counted as exact [default: 1e-12 for tabulated rules,
        /// 1e-30 for computed ones].
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Best catalog rule of a degree.
    Lookup {
        degree: u32,
        /// Acceptable qualities in order of preference.
        #[arg(long, value_delimiter = ',', default_value = "PI,NI")]
        quality: Vec<QualityLabel>,
        /// Print the rule file instead of a summary.
        #[arg(long)]
        json: bool,
    },
    /// Print a rule in another layout.
    Export {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Orbit)]
        format: Format,
        /// Vertices x1,y1,x2,y2,x3,y3 for points-cartesian.
        #[arg(long, value_delimiter = ',', num_args = 1, allow_negative_numbers = true, default_value = "0,0,1,0,0,1")]
        triangle: Vec<f64>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// The rule file itself.
    Orbit,
    /// `weight L1 L2 L3` per point.
    PointsAreal,
    /// `weight x y` per point, weights scaled by the triangle's area.
    PointsCartesian,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Types { degree, max_points } => cmd_types(degree, max_points, out),
        Command::Solve {
            degree,
            rtype,
            analytic,
            seed,
            starts,
            force,
            out: dir,
            no_write,
        } => {
            let cfg = SolverConfig {
                seed,
                starts,
                force,
                ..SolverConfig::default()
            };
            cmd_solve(degree, rtype, analytic, &cfg, (!no_write).then_some(dir.as_path()), out)
        }
        Command::Verify { file, catalog, tol } => match file {
            Some(path) if !catalog => cmd_verify_file(&path, tol, out),
            _ => cmd_verify_catalog(tol, out),
        },
        Command::Lookup { degree, quality, json } => cmd_lookup(degree, &quality, json, out),
        Command::Export { file, format, triangle } => cmd_export(&file, format, &triangle, out),
    }
}

pub fn cmd_types(degree: i64, max_points: Option<u32>, out: &mut dyn Write) -> Result<i32> {
    if degree < 1 {
        return Err(Error::InvalidDegree(degree));
    }
    let d = degree as u32;
    let minimal = minimal_type(d)?;
    let max = max_points.unwrap_or(minimal.npoints() + 2);
    for t in consistent_types(d, max)? {
        let mark = if t == minimal { "*" } else { "" };
        writeln!(out, "{t}{mark} {}", t.npoints())?;
    }
    Ok(EXIT_OK)
}

pub fn cmd_solve(
    d: u32,
    t: RuleType,
    analytic: bool,
    cfg: &SolverConfig,
    dir: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32> {
    let set = if analytic {
        solve_analytic(d, t, default_precision())?
    } else {
        solve_numeric(d, t, cfg)?
    };
    write_summary(&set, out)?;
    if set.is_empty() {
        return Ok(EXIT_NOTHING_FOUND);
    }
    if let Some(dir) = dir {
        std::fs::create_dir_all(dir)?;
        for (k, rule) in set.rules().filter(|r| r.is_real()).enumerate() {
            let name = format!("d{d}-{}-{}-{}.json", type_tag(t), k + 1, rule.quality);
            let path = dir.join(name);
            std::fs::write(&path, RuleFile::from_rule(rule, true)?.to_json())?;
            writeln!(out, "wrote {}", path.display())?;
        }
    }
    Ok(EXIT_OK)
}

fn type_tag(t: RuleType) -> String {
    format!("{}{}{}", t.n0, t.n1, t.n2)
}

fn write_summary(set: &SolutionSet, out: &mut dyn Write) -> Result<()> {
    writeln!(out, "degree {} type {} ({}): {set}", set.degree, set.rtype, set.completeness)?;
    if let Some(diag) = &set.diagnostics {
        writeln!(
            out,
            "starts {}, converged {}, positive-dimensional {}, rejected {}, best residual {:.3e}",
            diag.starts, diag.converged, diag.positive_dimensional, diag.rejected, diag.best_residual
        )?;
    }
    for (k, s) in set.solutions.iter().enumerate() {
        writeln!(out, "  {:>3}  {}  residual {:.3e}", k + 1, s.rule.quality, s.residual)?;
    }
    Ok(())
}

pub fn cmd_verify_file(path: &Path, tol: Option<f64>, out: &mut dyn Write) -> Result<i32> {
    let text = std::fs::read_to_string(path)?;
    let file = RuleFile::parse(&text)?;
    let rule = file.to_rule()?;
    let mut t = CertifyTolerances::for_rule(&rule);
    if let Some(tol) = tol {
        t.exact = tol;
    }
    let v = rulesdb::verify_rule(&rule, file.degree, file.quality, &t)?;
    let certified = v.certification.degree().map_or("none".to_string(), |d| d.to_string());
    writeln!(
        out,
        "{}: certified degree {certified} (stated {}), max residual {:.3e}, next {:.3e} at ({}, {}), quality {} (stated {})",
        path.display(),
        file.degree,
        v.residual,
        v.next_residual,
        v.next_worst.0,
        v.next_worst.1,
        v.quality,
        file.quality
    )?;
    for p in &v.problems {
        writeln!(out, "  {p}")?;
    }
    writeln!(out, "{}", if v.passed { "pass" } else { "FAIL" })?;
    Ok(if v.passed { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

pub fn cmd_verify_catalog(tol: Option<f64>, out: &mut dyn Write) -> Result<i32> {
    let report = rulesdb::verify_all(tol.unwrap_or(CertifyTolerances::CATALOG.exact))?;
    for e in &report.entries {
        write_entry(e, out)?;
        for p in &e.verification.problems {
            writeln!(out, "    {p}")?;
        }
    }
    let failed = report.failures().count();
    writeln!(out, "{} entries, {failed} failed", report.entries.len())?;
    Ok(if report.passed() { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn write_entry(e: &CatalogEntry, out: &mut dyn Write) -> Result<()> {
    let v = &e.verification;
    writeln!(
        out,
        "{} d={:<2} {:<9} {:>2} points {}  residual {:.2e}  next {:.2e}  {}",
        e.source,
        e.rule.degree,
        e.rule.rtype.to_string(),
        e.rule.npoints(),
        v.quality,
        v.residual,
        v.next_residual,
        if v.passed { "pass" } else { "FAIL" }
    )?;
    Ok(())
}

pub fn cmd_lookup(d: u32, prefs: &[QualityLabel], json: bool, out: &mut dyn Write) -> Result<i32> {
    let e = rulesdb::lookup(d, prefs)?;
    if json {
        out.write_all(RuleFile::from_rule(&e.rule, false)?.to_json().as_bytes())?;
    } else {
        write_entry(&e, out)?;
    }
    Ok(EXIT_OK)
}

pub fn cmd_export(path: &Path, format: Format, triangle: &[f64], out: &mut dyn Write) -> Result<i32> {
    let file = RuleFile::parse(&std::fs::read_to_string(path)?)?;
    match format {
        Format::Orbit => out.write_all(file.to_json().as_bytes())?,
        Format::PointsAreal => {
            for (w, l) in areal_points(&file.to_rule()?)? {
                writeln!(out, "{} {} {} {}", format17(w), format17(l[0]), format17(l[1]), format17(l[2]))?;
            }
        }
        Format::PointsCartesian => {
            let vertices: [f64; 6] = triangle.try_into().map_err(|_| Error::Parse {
                line: 0,
                msg: format!("--triangle needs 6 numbers, got {}", triangle.len()),
            })?;
            for (w, x, y) in cartesian_points(&file.to_rule()?, &vertices)? {
                writeln!(out, "{} {} {}", format17(w), format17(x), format17(y))?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn areal_points(rule: &CubatureRule) -> Result<Vec<(f64, [f64; 3])>> {
    Ok(rule
        .expand()?
        .iter()
        .map(|p| (p.weight.to_f64(), p.point.l.clone().map(|c| c.to_f64())))
        .collect())
}

/// Points mapped onto the triangle `x1,y1,x2,y2,x3,y3`, weights scaled by
/// its area so that they integrate rather than average.
pub fn cartesian_points(rule: &CubatureRule, v: &[f64; 6]) -> Result<Vec<(f64, f64, f64)>> {
    let area = 0.5 * ((v[2] - v[0]) * (v[5] - v[1]) - (v[4] - v[0]) * (v[3] - v[1])).abs();
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(f64::MIN_POSITIVE);
    if !(area > 1e-14 * scale * scale) {
        return Err(Error::DegenerateTriangle);
    }
    Ok(areal_points(rule)?
        .into_iter()
        .map(|(w, l)| {
            let x = l[0] * v[0] + l[1] * v[2] + l[2] * v[4];
            let y = l[0] * v[1] + l[1] * v[3] + l[2] * v[5];
            (w * area, x, y)
        })
        .collect())
}
