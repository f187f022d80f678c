//! The `grasscrit` command-line front end.
//!
//! [`run`] parses arguments, reads JSON input from `--json` or `--in`, runs one
//! subcommand and returns the exit code with the report text. Exit codes are
//! 0 on success, 2 for malformed input, 3 for violated preconditions and 4 for
//! numerical failures; failures carry `{code, message, path}`.

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{Map, Value};

use crate::critical::{g24_det_identity_check, g24_scan, gdc_estimate, pfaffian_bound};
use crate::cutlocus::{cut_stratum, restricted_critical_test, sample_orthogonal_group, subdiff_affine_dimension, subdiff_generators, CriticalTest};
use crate::grassmann::{
    complete_frame, exp, geodesic_point, grassmann_distance, log_with_tol, plucker_coords, principal_angles, FramedPlane, Plane, TangentMatrix,
};
use crate::io::{
    emit, field, float, floats, indices, matrix, parse_matrix, parse_plane, parse_polynomial, parse_usize, CliError, CliResult, SCHEMA_VERSION,
};
use crate::linalg::k_subsets;
use crate::lowrank::ey_critical_set;
use crate::schubert::{chart_tangent_basis, ey_schubert_critical_points, global_max, global_min, SchubertVariety};
use crate::Tolerances;

#[derive(Debug, Parser)]
#[command(name = "grasscrit", version, about = "Distance problems on real Grassmannians")]
struct Args {
    #[command(subcommand)]
    command: Command,
    /// Inline JSON input.
    #[arg(long, global = true)]
    json: Option<String>,
    /// Read JSON input from a file.
    #[arg(long = "in", global = true)]
    input: Option<PathBuf>,
    /// Also write the report to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomized commands.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol_orth: f64,
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol_cut: f64,
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol_gen: f64,
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol_sv: f64,
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol_solver: f64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Principal angles between planes E and F.
    Angles,
    /// Grassmann distance between E and F.
    Distance,
    /// exp_E(A) with A in the completed frame of E.
    Exp,
    /// log_E(F) in the completed frame of E.
    Log,
    /// Points exp_E(tA) for the listed t (A given, or A = log_E(F)).
    Geodesic,
    /// Normalized Plücker coordinates of E.
    Plucker,
    /// Cut-locus stratum of E relative to L.
    CutStratum,
    /// Sampled affine dimension of the subdifferential of delta_L at S.
    SubdiffDim {
        /// Samples per connected component of O(j).
        #[arg(long, default_value_t = 12)]
        samples: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol_rank: f64,
    },
    /// Whether 0 lies in the projected subdifferential at S.
    SubdiffZeroTest {
        #[arg(long, default_value_t = 12)]
        samples: usize,
    },
    /// Eckart-Young critical points of a matrix A at rank r.
    Ey,
    /// The binomial(k, s) critical points of delta_L on Omega_s(W).
    SchubertCritical,
    /// Global minimum of delta_L on Omega_s(W).
    SchubertMin,
    /// A global maximizer of delta_L on Omega_s(W).
    SchubertMax,
    /// Empirical distance complexity of a hypersurface.
    GdcSample {
        #[arg(long, default_value_t = 4)]
        trials: usize,
        #[arg(long, default_value_t = 32)]
        starts: usize,
    },
    /// The explicit complexity bound c1(k, n) d^c2(k, n).
    Bound {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: u64,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
    },
    /// Determinant identity and residual scan for the G~(2,4) slice family.
    G24Demo {
        #[arg(long, value_delimiter = ',', default_values_t = [0.5, 1.0, 2.0])]
        beta: Vec<f64>,
        #[arg(long, default_value_t = 2001)]
        grid: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Angles => "angles",
            Command::Distance => "distance",
            Command::Exp => "exp",
            Command::Log => "log",
            Command::Geodesic => "geodesic",
            Command::Plucker => "plucker",
            Command::CutStratum => "cut-stratum",
            Command::SubdiffDim { .. } => "subdiff-dim",
            Command::SubdiffZeroTest { .. } => "subdiff-zero-test",
            Command::Ey => "ey",
            Command::SchubertCritical => "schubert-critical",
            Command::SchubertMin => "schubert-min",
            Command::SchubertMax => "schubert-max",
            Command::GdcSample { .. } => "gdc-sample",
            Command::Bound { .. } => "bound",
            Command::G24Demo { .. } => "g24-demo",
        }
    }

    fn needs_input(&self) -> bool {
        !matches!(self, Command::Bound { .. } | Command::G24Demo { .. })
    }

    fn randomized(&self) -> bool {
        matches!(self, Command::SubdiffDim { .. } | Command::SubdiffZeroTest { .. } | Command::SchubertMax | Command::GdcSample { .. })
    }
}

/// Runs the tool on `argv` (including the program name).
pub fn run<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand) {
                return (0, e.to_string());
            }
            let message = e.to_string().lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ").to_string();
            let err = CliError::input("ParseError", message, "argv");
            return (err.exit, emit(&err.to_json()));
        }
    };
    match execute(&args) {
        Ok(report) => {
            let text = emit(&report);
            if let Some(path) = &args.out {
                if let Err(e) = std::fs::write(path, &text) {
                    let err = CliError::input("IoError", e.to_string(), path.display().to_string());
                    return (err.exit, emit(&err.to_json()));
                }
            }
            (0, text)
        }
        Err(err) => (err.exit, emit(&err.to_json())),
    }
}

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("GRASSCRIT_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::input("InvalidArgument", format!("GRASSCRIT_THREADS must be a positive integer, got {raw:?}"), "GRASSCRIT_THREADS"))?;
    // Only the first call in a process can size the global pool.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn tolerances(args: &Args) -> CliResult<Tolerances> {
    for (name, v) in [
        ("--tol-orth", args.tol_orth),
        ("--tol-cut", args.tol_cut),
        ("--tol-gen", args.tol_gen),
        ("--tol-sv", args.tol_sv),
        ("--tol-solver", args.tol_solver),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(CliError::input("InvalidArgument", format!("{name} must be positive, got {v}"), name));
        }
    }
    Ok(Tolerances { orth: args.tol_orth, cut: args.tol_cut, gen: args.tol_gen, sv: args.tol_sv, solver: args.tol_solver })
}

fn load_input(args: &Args) -> CliResult<Value> {
    let text = match (&args.json, &args.input) {
        (Some(_), Some(_)) => return Err(CliError::input("InvalidArgument", "give either --json or --in, not both", "argv")),
        (Some(s), None) => s.clone(),
        (None, Some(p)) => std::fs::read_to_string(p).map_err(|e| CliError::input("IoError", e.to_string(), p.display().to_string()))?,
        (None, None) => return Err(CliError::input("MissingInput", "this command needs --json or --in", "argv")),
    };
    let v: Value = serde_json::from_str(&text).map_err(|e| CliError::input("ParseError", e.to_string(), "$"))?;
    if !v.is_object() {
        return Err(CliError::input("ParseError", "input must be a JSON object", "$"));
    }
    Ok(v)
}

fn execute(args: &Args) -> CliResult<Value> {
    configure_threads()?;
    let tol = tolerances(args)?;
    let cmd = &args.command;
    let seed = match (cmd.randomized(), args.seed) {
        (true, None) => return Err(CliError::input("MissingSeed", format!("{} is randomized and needs --seed", cmd.name()), "--seed")),
        (_, s) => s,
    };
    let input = if cmd.needs_input() { load_input(args)? } else { Value::Null };
    let mut report = dispatch(cmd, &input, seed.unwrap_or(0), &tol)?;
    report.insert("schema_version".into(), Value::from(SCHEMA_VERSION));
    report.insert("command".into(), Value::from(cmd.name()));
    report.insert("version".into(), Value::from(env!("CARGO_PKG_VERSION")));
    if let Some(s) = seed {
        report.insert("seed".into(), Value::from(s));
    }
    Ok(Value::Object(report))
}

fn grass<T>(r: crate::Result<T>, path: &str) -> CliResult<T> {
    r.map_err(|e| CliError::from_grass(e, path))
}

fn tangent_at(frame: &FramedPlane, input: &Value, key: &str) -> CliResult<TangentMatrix> {
    let path = format!("$.{key}");
    let a = parse_matrix(field(input, key)?, &path)?;
    grass(frame.tangent(a), &path)
}

fn schubert_input(input: &Value, tol: &Tolerances) -> CliResult<(SchubertVariety, Plane)> {
    let w = parse_plane(input, "W", tol.orth)?;
    let s = parse_usize(input, "s")?;
    let l = parse_plane(input, "L", tol.orth)?;
    let omega = grass(SchubertVariety::new(&w, s), "$.s")?;
    Ok((omega, l))
}

fn insert(map: &mut Map<String, Value>, key: &str, v: Value) {
    map.insert(key.into(), v);
}

fn dispatch(cmd: &Command, input: &Value, seed: u64, tol: &Tolerances) -> CliResult<Map<String, Value>> {
    let mut r = Map::new();
    match cmd {
        Command::Angles => {
            let (e, f) = (parse_plane(input, "E", tol.orth)?, parse_plane(input, "F", tol.orth)?);
            insert(&mut r, "angles", floats(&grass(principal_angles(&e, &f), "$.F")?));
        }
        Command::Distance => {
            let (e, f) = (parse_plane(input, "E", tol.orth)?, parse_plane(input, "F", tol.orth)?);
            insert(&mut r, "delta", float(grass(grassmann_distance(&e, &f), "$.F")?));
        }
        Command::Exp => {
            let frame = complete_frame(&parse_plane(input, "E", tol.orth)?);
            let a = tangent_at(&frame, input, "A")?;
            let p = grass(exp(&frame, &a), "$.A")?;
            insert(&mut r, "frame", matrix(frame.frame()));
            insert(&mut r, "basis", matrix(p.basis()));
        }
        Command::Log => {
            let frame = complete_frame(&parse_plane(input, "E", tol.orth)?);
            let f = parse_plane(input, "F", tol.orth)?;
            let a = grass(log_with_tol(&frame, &f, tol.cut), "$.F")?;
            insert(&mut r, "frame", matrix(frame.frame()));
            insert(&mut r, "A", matrix(&a.a));
            insert(&mut r, "norm", float(a.norm()));
        }
        Command::Geodesic => {
            let frame = complete_frame(&parse_plane(input, "E", tol.orth)?);
            let a = if input.get("A").is_some() {
                tangent_at(&frame, input, "A")?
            } else {
                let f = parse_plane(input, "F", tol.orth)?;
                grass(log_with_tol(&frame, &f, tol.cut), "$.F")?
            };
            let ts: Vec<f64> = match input.get("t") {
                None => vec![0.0, 0.25, 0.5, 0.75, 1.0],
                Some(Value::Array(xs)) => xs
                    .iter()
                    .enumerate()
                    .map(|(i, x)| x.as_f64().ok_or_else(|| CliError::input("ParseError", "expected a number", format!("$.t[{i}]"))))
                    .collect::<CliResult<_>>()?,
                Some(x) => vec![x.as_f64().ok_or_else(|| CliError::input("ParseError", "t must be a number or an array", "$.t"))?],
            };
            let points = ts
                .iter()
                .map(|&t| {
                    let p = grass(geodesic_point(&frame, &a, t), "$.t")?;
                    let mut m = Map::new();
                    insert(&mut m, "t", float(t));
                    insert(&mut m, "basis", matrix(p.basis()));
                    Ok(Value::Object(m))
                })
                .collect::<CliResult<Vec<_>>>()?;
            insert(&mut r, "frame", matrix(frame.frame()));
            insert(&mut r, "A", matrix(&a.a));
            insert(&mut r, "points", Value::Array(points));
        }
        Command::Plucker => {
            let e = parse_plane(input, "E", tol.orth)?;
            insert(&mut r, "coords", floats(&plucker_coords(&e).coords));
            insert(&mut r, "subsets", Value::Array(k_subsets(e.n(), e.k()).iter().map(|s| indices(s)).collect()));
        }
        Command::CutStratum => {
            let (l, e) = (parse_plane(input, "L", tol.orth)?, parse_plane(input, "E", tol.orth)?);
            let rep = grass(cut_stratum(&l, &e, tol.cut), "$.E")?;
            insert(&mut r, "j", Value::from(rep.j as u64));
            insert(&mut r, "angles", floats(&rep.angles));
            insert(&mut r, "tol", float(rep.tol));
        }
        Command::SubdiffDim { samples, tol_rank } => {
            let (l, s) = (parse_plane(input, "L", tol.orth)?, parse_plane(input, "S", tol.orth)?);
            let j = grass(cut_stratum(&l, &s, tol.cut), "$.S")?.j;
            let w_list = sample_orthogonal_group(j, *samples, seed);
            let set = grass(subdiff_generators(&l, &complete_frame(&s), &w_list, tol.cut), "$.S")?;
            let dim = grass(subdiff_affine_dimension(&set, *tol_rank), "$.S")?;
            insert(&mut r, "j", Value::from(j as u64));
            insert(&mut r, "generators", Value::from(set.generators.len() as u64));
            insert(&mut r, "dimension", Value::from(dim as u64));
            insert(&mut r, "expected_dimension", Value::from((j * j) as u64));
            insert(&mut r, "delta", float(set.delta));
        }
        Command::SubdiffZeroTest { samples } => {
            let (l, s) = (parse_plane(input, "L", tol.orth)?, parse_plane(input, "S", tol.orth)?);
            let (frame, basis) = if input.get("W").is_some() {
                let w = parse_plane(input, "W", tol.orth)?;
                let omega = grass(SchubertVariety::new(&w, parse_usize(input, "s")?), "$.s")?;
                let ct = grass(chart_tangent_basis(&omega, &s, tol), "$.S")?;
                (ct.frame, ct.basis)
            } else {
                let frame = complete_frame(&s);
                let raw = field(input, "tangent_basis")?
                    .as_array()
                    .ok_or_else(|| CliError::input("ParseError", "expected an array of matrices", "$.tangent_basis"))?;
                let basis = raw
                    .iter()
                    .enumerate()
                    .map(|(i, m)| {
                        let path = format!("$.tangent_basis[{i}]");
                        grass(frame.tangent(parse_matrix(m, &path)?), &path)
                    })
                    .collect::<CliResult<Vec<_>>>()?;
                (frame, basis)
            };
            let j = grass(cut_stratum(&l, &s, tol.cut), "$.S")?.j;
            let set = grass(subdiff_generators(&l, &frame, &sample_orthogonal_group(j, *samples, seed), tol.cut), "$.S")?;
            let test = grass(restricted_critical_test(&set, &basis, tol.gen), "$.S")?;
            insert(&mut r, "j", Value::from(j as u64));
            insert(&mut r, "tangent_dimension", Value::from(basis.len() as u64));
            match test {
                CriticalTest::Witness { weights, residual } => {
                    insert(&mut r, "critical", Value::Bool(true));
                    insert(&mut r, "residual", float(residual));
                    insert(&mut r, "weights", floats(&weights));
                }
                CriticalTest::NotFound { residual } => {
                    insert(&mut r, "critical", Value::Bool(false));
                    insert(&mut r, "residual", float(residual));
                }
            }
        }
        Command::Ey => {
            let a = parse_matrix(field(input, "A")?, "$.A")?;
            let rank = parse_usize(input, "r")?;
            let points = grass(ey_critical_set(&a, rank, tol.sv), "$.A")?;
            let list = points
                .iter()
                .map(|p| {
                    let mut m = Map::new();
                    insert(&mut m, "index_set", indices(&p.index_set));
                    insert(&mut m, "distance", float(p.distance));
                    insert(&mut m, "matrix", matrix(&p.matrix));
                    Value::Object(m)
                })
                .collect();
            insert(&mut r, "minimizer_distance", float(points[0].distance));
            insert(&mut r, "critical_points", Value::Array(list));
        }
        Command::SchubertCritical => {
            let (omega, l) = schubert_input(input, tol)?;
            let records = grass(ey_schubert_critical_points(&omega, &l, tol), "$.L")?;
            let list = records
                .iter()
                .map(|rec| {
                    let mut m = Map::new();
                    insert(&mut m, "index_set", indices(&rec.index_set));
                    insert(&mut m, "value", float(rec.value));
                    insert(&mut m, "normality_residual", float(rec.normality_residual));
                    insert(&mut m, "on_cut_of_l", Value::Bool(rec.on_cut_of_l));
                    insert(&mut m, "point", matrix(rec.point.basis()));
                    Value::Object(m)
                })
                .collect();
            insert(&mut r, "records", Value::Array(list));
        }
        Command::SchubertMin => {
            let (omega, l) = schubert_input(input, tol)?;
            let (value, point) = grass(global_min(&omega, &l, tol), "$.L")?;
            insert(&mut r, "value", float(value));
            insert(&mut r, "point", matrix(point.basis()));
            insert(&mut r, "angles_to_w", floats(&grass(principal_angles(&l, omega.w.plane()), "$.L")?));
        }
        Command::SchubertMax => {
            let (omega, l) = schubert_input(input, tol)?;
            let (value, point) = grass(global_max(&omega, &l, seed, tol), "$.L")?;
            insert(&mut r, "value", float(value));
            insert(&mut r, "point", matrix(point.basis()));
            insert(&mut r, "cut_stratum_j", Value::from(grass(cut_stratum(&l, &point, tol.cut), "$.L")?.j as u64));
        }
        Command::GdcSample { trials, starts } => {
            let p = parse_polynomial(input)?;
            let rep = grass(gdc_estimate(&p, *trials, *starts, seed, tol.solver), "$")?;
            let per_trial = rep
                .per_trial
                .iter()
                .map(|t| {
                    let mut m = Map::new();
                    insert(&mut m, "L", matrix(t.l.basis()));
                    insert(&mut m, "count", Value::from(t.count as u64));
                    insert(&mut m, "values", floats(&t.values));
                    insert(&mut m, "converged_starts", Value::from(t.converged_starts as u64));
                    insert(&mut m, "error", t.error.clone().map_or(Value::Null, Value::from));
                    Value::Object(m)
                })
                .collect();
            let bound = grass(pfaffian_bound(p.k, p.n, p.degree as u64, 1.0), "$")?;
            insert(&mut r, "trials", Value::from(rep.trials as u64));
            insert(&mut r, "starts", Value::from(rep.n_starts as u64));
            insert(&mut r, "solver_tol", float(rep.tol));
            insert(&mut r, "degree", Value::from(p.degree as u64));
            insert(&mut r, "counts", Value::Array(rep.counts().iter().map(|&c| Value::from(c as u64)).collect()));
            insert(&mut r, "max_count", Value::from(rep.max_count as u64));
            insert(&mut r, "log10_bound_c1", float(bound.log10_bound));
            insert(&mut r, "per_trial", Value::Array(per_trial));
        }
        Command::Bound { k, n, d, c } => {
            let b = grass(pfaffian_bound(*k, *n, *d, *c), "argv")?;
            insert(&mut r, "k", Value::from(b.k as u64));
            insert(&mut r, "n", Value::from(b.n as u64));
            insert(&mut r, "d", Value::from(b.d));
            insert(&mut r, "c_param", float(b.c_param));
            insert(&mut r, "c1_over_c", Value::from(b.c1_over_c.to_string()));
            insert(&mut r, "log10_c1", float(b.log10_c1));
            insert(&mut r, "c2", Value::from(b.c2));
            insert(&mut r, "log10_bound", float(b.log10_bound));
        }
        Command::G24Demo { beta, grid } => {
            let example = grass(g24_det_identity_check(&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0], 2.0), "argv")?;
            let mut ex = Map::new();
            insert(&mut ex, "x", floats(&[0.0, 1.0, 0.0]));
            insert(&mut ex, "y", floats(&[0.0, 0.0, 1.0]));
            insert(&mut ex, "beta", float(2.0));
            insert(&mut ex, "lhs", float(example.lhs));
            insert(&mut ex, "rhs", float(example.rhs));
            insert(&mut ex, "relative", float(example.relative));
            let rows = grass(g24_scan(beta, 0.999, *grid), "--beta")?;
            let scan = rows
                .iter()
                .map(|row| {
                    let mut m = Map::new();
                    insert(&mut m, "beta", float(row.beta));
                    insert(&mut m, "samples", Value::from(row.samples as u64));
                    insert(&mut m, "min", float(row.min));
                    insert(&mut m, "max", float(row.max));
                    insert(&mut m, "roots", floats(&row.roots));
                    insert(&mut m, "positive_on_grid", Value::Bool(row.min > 0.0));
                    Value::Object(m)
                })
                .collect();
            insert(&mut r, "identity_example", Value::Object(ex));
            insert(&mut r, "scan", Value::Array(scan));
        }
    }
    Ok(r)
}
