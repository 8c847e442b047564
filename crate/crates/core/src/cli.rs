//! Command-line front end: `generate`, `mul`, `verify` and `classify`.
//!
//! Commands write to the supplied streams and return the process exit code,
//! so they can be driven from tests without spawning a process.

use std::io::{self, Write};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::axioms::{verify_space, AxiomReport, VerifyConfig};
use crate::coset::{round12, Base, CosetSpace, TieWarning};
use crate::quaternion::{Quaternion, UnitQuaternion};
use crate::rotgroups::{build_group, element_order, GroupSpec};
use crate::tol::{EPS, INPUT_NORM_TOL, UNIT_EPS};
use crate::topology::classify;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "coset-nvalued", version)]
#[command(about = "Coset n-valued groups Sp(1)/G and SO(3)/G over finite rotation groups")]
pub struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the elements of G with their orders and the size of the cover 2G.
    Generate {
        /// Group: Cn, Dm, T, O or I (case-insensitive).
        spec: GroupSpec,
        #[arg(long, default_value = "sp1")]
        base: Base,
    },
    /// Multiply two points of W/G: prints the n-element product multiset.
    Mul {
        spec: GroupSpec,
        /// First point as "w,x,y,z".
        #[arg(allow_hyphen_values = true)]
        a: String,
        /// Second point as "w,x,y,z".
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[arg(long, default_value = "sp1")]
        base: Base,
    },
    /// Run the identity, inverse, associativity and well-definedness suites.
    Verify(VerifyArgs),
    /// Predicted homeomorphism type of W/G with supporting evidence.
    Classify {
        spec: GroupSpec,
        #[arg(long, default_value = "sp1")]
        base: Base,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Group to verify; omit with --all.
    #[arg(required_unless_present = "all", conflicts_with = "all")]
    pub spec: Option<GroupSpec>,
    /// Verify every group of the catalog C1..C8, D1..D6, T, O, I.
    #[arg(long)]
    pub all: bool,
    /// Restrict to one base; both are verified by default.
    #[arg(long)]
    pub base: Option<Base>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Samples for the identity, inverse and well-definedness suites
    /// (defaults 200, 200, 100).
    #[arg(long, value_parser = positive)]
    pub samples: Option<usize>,
    /// Triples for the associativity suite (default 50, 20 for I).
    #[arg(long, value_parser = positive)]
    pub triples: Option<usize>,
    /// Matched-pair tolerance (default 1e-6).
    #[arg(long, value_parser = positive_real)]
    pub tol: Option<f64>,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("count must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn positive_real(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        Ok(_) => Err("tolerance must be a positive number".into()),
        Err(e) => Err(e.to_string()),
    }
}

/// Parses `"w,x,y,z"` into a unit quaternion.
///
/// Inputs within `INPUT_NORM_TOL` of unit norm are normalized, with a warning
/// when the correction exceeds `UNIT_EPS`; anything else is rejected.
pub fn parse_point(s: &str) -> Result<(UnitQuaternion, Option<String>), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(format!("point {s:?}: expected four comma-separated reals w,x,y,z"));
    }
    let mut c = [0.0; 4];
    for (slot, part) in c.iter_mut().zip(&parts) {
        *slot = part.parse::<f64>().map_err(|e| format!("point {s:?}: {e}"))?;
        if !slot.is_finite() {
            return Err(format!("point {s:?}: coordinates must be finite"));
        }
    }
    let q = Quaternion::from_array(c);
    let norm = q.norm();
    let unit = UnitQuaternion::new_normalize(q).map_err(|_| format!("point {s:?}: zero quaternion"))?;
    if (norm - 1.0).abs() >= INPUT_NORM_TOL {
        return Err(format!("point {s:?} has norm {norm}, not a unit quaternion"));
    }
    let warning = ((norm - 1.0).abs() > UNIT_EPS).then(|| format!("point {s:?} had norm {norm}; normalized"));
    Ok((unit, warning))
}

fn fmt_quat(c: [f64; 4]) -> String {
    let c = c.map(round12);
    format!("[{:>15.12}, {:>15.12}, {:>15.12}, {:>15.12}]", c[0], c[1], c[2], c[3])
}

fn emit_json<W: Write, T: Serialize>(out: &mut W, value: &T) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)
}

/// Executes a parsed command line.
pub fn run<W: Write, E: Write>(cli: &Cli, out: &mut W, err: &mut E) -> io::Result<u8> {
    match &cli.command {
        Command::Generate { spec, base } => cmd_generate(*spec, *base, cli.json, out, err),
        Command::Mul { spec, a, b, base } => cmd_mul(*spec, *base, a, b, cli.json, out, err),
        Command::Verify(args) => cmd_verify(args, cli.json, out, err),
        Command::Classify { spec, base } => cmd_classify(*spec, *base, cli.json, out, err),
    }
}

#[derive(Serialize)]
struct ElementRecord {
    index: usize,
    rep: [f64; 4],
    order: usize,
    angle: f64,
    axis: Option<[f64; 3]>,
}

pub fn cmd_generate<W: Write, E: Write>(
    spec: GroupSpec,
    base: Base,
    json: bool,
    out: &mut W,
    err: &mut E,
) -> io::Result<u8> {
    let group = match build_group(spec) {
        Ok(g) => g,
        Err(e) => {
            writeln!(err, "error: {e}")?;
            return Ok(EXIT_FAILURE);
        }
    };
    let mut records = Vec::with_capacity(group.order());
    for (index, &g) in group.elements().iter().enumerate() {
        let order = element_order(g, &group).expect("element of its own group");
        let r = g.rotation();
        records.push(ElementRecord {
            index,
            rep: g.to_array().map(round12),
            order,
            angle: round12(r.angle),
            axis: r.axis.map(|a| a.to_array().map(round12)),
        });
    }
    if json {
        emit_json(
            out,
            &json!({
                "group": spec.to_string(),
                "base": base,
                "n": group.order(),
                "cover_size": group.cover().len(),
                "conjugate_to": spec.conjugate_alias().map(|s| s.to_string()),
                "elements": records,
            }),
        )?;
    } else {
        writeln!(
            out,
            "group {spec}  base {base}  n = {}  cover size = {}",
            group.order(),
            group.cover().len()
        )?;
        if let Some(alias) = spec.conjugate_alias() {
            writeln!(out, "note: {spec} is conjugate to {alias} in SO(3)")?;
        }
        writeln!(out, "{:>4}  {:>5}  {:>14}  representative", "#", "order", "angle")?;
        for r in &records {
            writeln!(
                out,
                "{:>4}  {:>5}  {:>14.12}  {}",
                r.index,
                r.order,
                r.angle,
                fmt_quat(r.rep)
            )?;
        }
    }
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_mul<W: Write, E: Write>(
    spec: GroupSpec,
    base: Base,
    a: &str,
    b: &str,
    json: bool,
    out: &mut W,
    err: &mut E,
) -> io::Result<u8> {
    let mut warnings = Vec::new();
    let mut points = Vec::with_capacity(2);
    for s in [a, b] {
        match parse_point(s) {
            Ok((q, w)) => {
                warnings.extend(w);
                points.push(q);
            }
            Err(e) => {
                writeln!(err, "error: {e}")?;
                return Ok(EXIT_USAGE);
            }
        }
    }
    let group = match build_group(spec) {
        Ok(g) => g,
        Err(e) => {
            writeln!(err, "error: {e}")?;
            return Ok(EXIT_FAILURE);
        }
    };
    let space = CosetSpace::new(base, group);
    let (pa, pb) = (space.point(points[0]), space.point(points[1]));
    let product = match space.mu_points(pa, pb) {
        Ok(p) => p,
        Err(TieWarning { value, gap }) => {
            warnings.push(format!(
                "degenerate canonicalization (images {gap:.3e} apart); representatives may differ"
            ));
            value
        }
    };
    for w in &warnings {
        writeln!(err, "warning: {w}")?;
    }
    let grouped = product.grouped(EPS);
    if json {
        let entries: Vec<_> = grouped
            .iter()
            .map(|(o, m)| json!({"rep": space.record(o).rep, "multiplicity": m}))
            .collect();
        emit_json(
            out,
            &json!({
                "space": space.descriptor(),
                "a": pa.to_array().map(round12),
                "b": pb.to_array().map(round12),
                "product": entries,
                "total": product.len(),
                "warnings": warnings,
            }),
        )?;
    } else {
        writeln!(out, "space {}", space.descriptor())?;
        writeln!(out, "mu(a, b) with {} entries:", product.len())?;
        for (o, m) in &grouped {
            writeln!(out, "  {m:>3} x {}", fmt_quat(o.representative().to_array()))?;
        }
    }
    Ok(EXIT_OK)
}

/// Runs the suites over the requested spaces, in catalog order and sp1
/// before so3.
pub fn verify_reports(args: &VerifyArgs) -> Result<Vec<AxiomReport>, String> {
    let specs = match (args.all, args.spec) {
        (true, _) => GroupSpec::catalog(),
        (false, Some(spec)) => vec![spec],
        (false, None) => return Err("verify needs a group spec or --all".into()),
    };
    let bases: Vec<Base> = match args.base {
        Some(b) => vec![b],
        None => Base::ALL.to_vec(),
    };
    let mut reports = Vec::new();
    for &spec in &specs {
        let group = build_group(spec).map_err(|e| e.to_string())?;
        let mut cfg = VerifyConfig::defaults_for(spec);
        cfg.seed = args.seed;
        if let Some(s) = args.samples {
            cfg.identity_samples = s;
            cfg.inverse_samples = s;
            cfg.well_defined_samples = s;
        }
        if let Some(t) = args.triples {
            cfg.triples = t;
        }
        if let Some(tol) = args.tol {
            cfg.tolerance = tol;
        }
        for &base in &bases {
            let space = CosetSpace::new(base, group.clone());
            reports.push(verify_space(&space, &cfg));
        }
    }
    Ok(reports)
}

pub fn cmd_verify<W: Write, E: Write>(args: &VerifyArgs, json: bool, out: &mut W, err: &mut E) -> io::Result<u8> {
    let reports = match verify_reports(args) {
        Ok(r) => r,
        Err(e) => {
            writeln!(err, "error: {e}")?;
            return Ok(EXIT_USAGE);
        }
    };
    let passed = reports.iter().all(AxiomReport::passed);
    if json {
        emit_json(
            out,
            &json!({
                "seed": args.seed,
                "samples": args.samples,
                "triples": args.triples,
                "tolerance": args.tol.unwrap_or(crate::tol::AXIOM_TOL),
                "passed": passed,
                "reports": reports,
            }),
        )?;
    } else {
        writeln!(
            out,
            "seed {}  tolerance {:e}",
            args.seed,
            args.tol.unwrap_or(crate::tol::AXIOM_TOL)
        )?;
        for r in &reports {
            let verdict = if r.passed() { "PASS" } else { "FAIL" };
            writeln!(out, "{verdict}  {}", r.space)?;
            for c in &r.checks {
                writeln!(
                    out,
                    "      {:<14} trials {:>4}  failures {:>4}  max deviation {:.3e}  warnings {}",
                    c.axiom.to_string(),
                    c.trials,
                    c.failures,
                    c.max_deviation,
                    c.warnings
                )?;
            }
        }
        let failed = reports.iter().filter(|r| !r.passed()).count();
        writeln!(out, "{} spaces, {} failed", reports.len(), failed)?;
    }
    Ok(if passed { EXIT_OK } else { EXIT_FAILURE })
}

pub fn cmd_classify<W: Write, E: Write>(
    spec: GroupSpec,
    base: Base,
    json: bool,
    out: &mut W,
    err: &mut E,
) -> io::Result<u8> {
    let report = match classify(base, spec) {
        Ok(r) => r,
        Err(e) => {
            writeln!(err, "error: {e}")?;
            return Ok(EXIT_FAILURE);
        }
    };
    if json {
        emit_json(out, &report)?;
    } else {
        let yes_no = |b: bool| if b { "yes" } else { "no" };
        let ok = |b: bool| if b { "pass" } else { "FAIL" };
        writeln!(out, "{}/{}  n = {} ({})", base, spec, report.n, report.parity)?;
        writeln!(out, "  tau has fixed points   {}", yes_no(report.tau_fixed_points))?;
        writeln!(out, "  predicted space        {}", report.predicted_space)?;
        writeln!(out, "  evidence")?;
        writeln!(out, "    suspension           {}", ok(report.evidence.suspension))?;
        writeln!(out, "    riemann-hurwitz      {}", ok(report.evidence.riemann_hurwitz))?;
        writeln!(
            out,
            "    parity consistent    {}",
            ok(report.evidence.parity_consistent)
        )?;
    }
    Ok(if report.all_evidence() { EXIT_OK } else { EXIT_FAILURE })
}
