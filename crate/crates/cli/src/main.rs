mod config;
mod figure;
mod points;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use cylpack::certifier::{
    certify_quartic, check_cos_lemma, check_one_minus_c_bound, geometric_grid, identity_suite, lemma1_certificate,
    phi, verify_packing, Mode, VerifyOptions, COS_LEMMA_BOUND,
};
use cylpack::density::{
    axis_clearance, congruence_check, covered_volume, global_density_series, write_estimates_csv, TiltParam,
    MIN_SAMPLES,
};
use cylpack::line_families::{
    global_family, local_family, max_local_eps, perpendicular_family, CylinderFamily, FamilyKind,
};
use cylpack::point_lattice::{
    build_set, closed_form_count, point_density, random_separated_points, write_points_csv, PlanarPoint, FIRST_RING,
};

use config::{Command, Common, Eps, Family, Format, RunConfig, VerifyMode, Which};

#[derive(Parser)]
#[command(name = "cylpack", version, about = "Nonparallel cylinder packings: construction, certification, density")]
struct Cli {
    #[command(subcommand)]
    sub: Sub,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand)]
enum Sub {
    /// Dump the ring set within D(R).
    Rings,
    /// Build a family of axes and export it.
    Construct,
    /// Pairwise distance and parallelism check of a family.
    Verify,
    /// Monte Carlo density inside B(R).
    Density(DensityArgs),
    /// Certificates for the supporting inequalities.
    Lemmas(LemmaArgs),
    /// Free space along the vertical axis.
    Hole(HoleArgs),
    /// SVG scatter of the planar points.
    Figure,
}

#[derive(Debug, Clone, Args, Serialize)]
struct DensityArgs {
    /// Comma-separated increasing radii; runs the perpendicular/global series.
    #[arg(long, value_delimiter = ',')]
    series: Vec<u32>,
    /// Compare tilted and vertical cylinder volumes one by one.
    #[arg(long)]
    congruence: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
struct LemmaArgs {
    #[arg(long, value_enum, default_value = "all")]
    which: Which,
    /// Last `n` in the quartic certificate.
    #[arg(long, default_value_t = 1_000_000)]
    n_max: u64,
    /// Points of the geometric grid on [32, 1e6].
    #[arg(long, default_value_t = 20_000)]
    grid: usize,
    /// Largest ring in the gap bound check.
    #[arg(long, default_value_t = 4096)]
    ring_max: u32,
    /// Random pairs in the identity suite.
    #[arg(long, default_value_t = 100_000)]
    identity_pairs: usize,
    /// Points per random set in the tilted-line bound (ignored with --points).
    #[arg(long, default_value_t = 20)]
    count: usize,
    /// Disk radius for random sets in the tilted-line bound.
    #[arg(long, default_value_t = 10.0)]
    disk: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
struct HoleArgs {
    #[arg(long, default_value_t = 10_000.0)]
    z_max: f64,
    #[arg(long, default_value_t = 101)]
    steps: usize,
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<cylpack::Error> for Failure {
    fn from(e: cylpack::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Run<T> = std::result::Result<T, Failure>;

fn usage<T>(msg: impl Into<String>) -> Run<T> {
    Err(Failure::Usage(msg.into()))
}

fn command_of(sub: &Sub) -> Command {
    match sub {
        Sub::Rings => Command::Rings,
        Sub::Construct => Command::Construct,
        Sub::Verify => Command::Verify,
        Sub::Density(_) => Command::Density,
        Sub::Lemmas(_) => Command::Lemmas,
        Sub::Hole(_) => Command::Hole,
        Sub::Figure => Command::Figure,
    }
}

fn format_of(cmd: Command, c: &Common) -> Run<Format> {
    let allowed: &[Format] = match cmd {
        Command::Figure => &[Format::Svg],
        Command::Rings | Command::Density | Command::Hole => &[Format::Json, Format::Csv],
        _ => &[Format::Json],
    };
    let f = c.format.unwrap_or(allowed[0]);
    if !allowed.contains(&f) {
        return usage(format!("format {f:?} is not available for this command").to_lowercase());
    }
    Ok(f)
}

fn validate(cmd: Command, c: &Common, sub: &Sub) -> Run<()> {
    if c.points.is_none() && c.big_r < FIRST_RING && cmd != Command::Lemmas {
        return usage(format!("--R must be at least {FIRST_RING}"));
    }
    if !(c.r > 0.0 && c.r.is_finite()) {
        return usage("--r must be positive");
    }
    if !c.l.is_finite() {
        return usage("--L must be finite");
    }
    if let Eps::Value(e) = c.eps {
        if !(e > 0.0 && e < 1.0) {
            return usage("--eps must lie in (0, 1)");
        }
    }
    if c.threads == Some(0) {
        return usage("--threads must be at least 1");
    }
    if c.mode == VerifyMode::Sampled && c.pairs == 0 {
        return usage("--pairs must be positive");
    }
    if cmd == Command::Density && c.samples < MIN_SAMPLES {
        return usage(format!("--samples must be at least {MIN_SAMPLES}"));
    }
    match sub {
        Sub::Density(d) if !d.series.is_empty() && d.congruence => {
            usage("--series and --congruence are separate runs")
        }
        Sub::Density(d) if !d.series.is_empty() && c.points.is_some() => usage("--series builds its own ring sets"),
        Sub::Hole(h) if !(h.z_max > 0.0 && h.z_max.is_finite()) || h.steps == 0 => {
            usage("--z-max must be positive and --steps at least 1")
        }
        Sub::Lemmas(l) if !(l.disk > 0.0) || l.count == 0 || l.grid < 2 || l.ring_max < FIRST_RING => {
            usage("lemma parameters out of range")
        }
        _ => Ok(()),
    }
}

fn planar_points(c: &Common) -> Run<Vec<PlanarPoint>> {
    match &c.points {
        Some(path) => Ok(points::read_points(path)?),
        None => Ok(build_set(c.big_r)?),
    }
}

fn resolved_eps(c: &Common) -> Option<f64> {
    match c.eps {
        Eps::Auto => None,
        Eps::Value(v) => Some(v),
    }
}

fn build_family(c: &Common, pts: &[PlanarPoint]) -> Run<CylinderFamily> {
    Ok(match c.family {
        Family::Perp => perpendicular_family(pts, c.r)?,
        Family::Local => local_family(pts, c.r, resolved_eps(c))?,
        Family::Global => global_family(pts, c.l, c.allow_unsafe)?,
    })
}

struct Output {
    body: Vec<u8>,
    ok: bool,
    summary: String,
}

fn json_output(cfg: &RunConfig, key: &str, report: Value, ok: bool, summary: String) -> Output {
    let doc = json!({ "run_config": cfg, key: report, "passed": ok });
    let mut body = serde_json::to_vec_pretty(&doc).expect("serializable");
    body.push(b'\n');
    Output { body, ok, summary }
}

fn csv_preamble(cfg: &RunConfig) -> Vec<u8> {
    format!("# run_config: {}\n", serde_json::to_string(cfg).expect("serializable")).into_bytes()
}

fn strip_timing(v: &mut Value, keep: bool) {
    if keep {
        return;
    }
    match v {
        Value::Object(map) => {
            if let Some(t) = map.get_mut("runtime_ms") {
                *t = Value::Null;
            }
            map.values_mut().for_each(|x| strip_timing(x, false));
        }
        Value::Array(items) => items.iter_mut().for_each(|x| strip_timing(x, false)),
        _ => {}
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn rings(cfg: &RunConfig, fmt: Format) -> Run<Output> {
    let c = &cfg.common;
    let pts = planar_points(c)?;
    let summary = format!("{} points", pts.len());
    if fmt == Format::Csv {
        let mut body = csv_preamble(cfg);
        write_points_csv(&pts, &mut body)?;
        return Ok(Output { body, ok: true, summary });
    }
    let closed = (c.points.is_none() && c.big_r.is_power_of_two()).then(|| closed_form_count(c.big_r.trailing_zeros()));
    let report = json!({
        "count": pts.len(),
        "closed_form_count": closed.transpose()?,
        "point_density": if c.points.is_none() { Some(point_density(c.big_r)?) } else { None },
        "points": pts,
    });
    Ok(json_output(cfg, "rings", report, true, summary))
}

fn construct(cfg: &RunConfig) -> Run<Output> {
    let fam = build_family(&cfg.common, &planar_points(&cfg.common)?)?;
    let summary = format!("{} axes, radius {}", fam.len(), fam.radius);
    Ok(json_output(cfg, "family", fam.to_json(), true, summary))
}

fn verify(cfg: &RunConfig) -> Run<Output> {
    let c = &cfg.common;
    let fam = build_family(c, &planar_points(c)?)?;
    let mode = match c.mode {
        VerifyMode::Exhaustive => Mode::Exhaustive,
        VerifyMode::Sampled => Mode::Sampled { count: c.pairs, seed: c.seed },
    };
    let rep = verify_packing(&fam, &VerifyOptions { mode, ..Default::default() })?;
    let parallel_ok = fam.kind == FamilyKind::Perpendicular || rep.parallel_count == 0;
    let ok = rep.is_valid() && parallel_ok;
    let summary = format!(
        "{} {} lines, {} pairs, min distance {:?}, {} violations, {} parallel pairs",
        fam.kind,
        rep.lines,
        rep.pairs_checked,
        rep.min_distance,
        rep.violation_count,
        rep.parallel_count
    );
    let mut v = rep.to_json();
    strip_timing(&mut v, c.timing);
    v["family_params"] = to_value(&fam.params);
    v["radius"] = json!(fam.radius);
    Ok(json_output(cfg, "verification", v, ok, summary))
}

fn density(cfg: &RunConfig, args: &DensityArgs, fmt: Format) -> Run<Output> {
    let c = &cfg.common;
    if !args.series.is_empty() {
        let series = global_density_series(&args.series, c.samples, c.seed, c.l)?;
        let summary = series
            .rows
            .iter()
            .map(|r| format!("R={} perp={:.5} global={:.5}", r.big_r, r.perpendicular.density, r.global.density))
            .collect::<Vec<_>>()
            .join("; ");
        if fmt == Format::Csv {
            let mut body = csv_preamble(cfg);
            write_estimates_csv(&series.estimates(), &mut body)?;
            return Ok(Output { body, ok: true, summary });
        }
        return Ok(json_output(cfg, "series", to_value(&series), true, summary));
    }
    let pts = planar_points(c)?;
    let ball = c.big_r as f64;
    if args.congruence {
        let param = match c.family {
            Family::Perp => return usage("congruence compares a tilted family with the vertical one"),
            Family::Local => TiltParam::Eps(resolved_eps(c)),
            Family::Global => TiltParam::L(c.l),
        };
        if fmt == Format::Csv {
            return usage("congruence reports are json only");
        }
        let rep = congruence_check(&pts, c.r, param, ball, c.samples, c.seed)?;
        let summary = format!(
            "{} cylinders, {} outside {}σ, aggregate {}",
            rep.cylinders.len(),
            rep.failures.len(),
            cylpack::density::PER_CYLINDER_SIGMAS,
            if rep.aggregate_ok { "ok" } else { "outside 2σ" }
        );
        let ok = rep.passed();
        return Ok(json_output(cfg, "congruence", to_value(&rep), ok, summary));
    }
    let fam = build_family(c, &pts)?;
    let est = covered_volume(&fam, ball, c.samples, c.seed)?;
    let summary = format!("{} density {:.6} ± {:.1e}", fam.kind, est.density, est.std_error);
    if fmt == Format::Csv {
        let mut body = csv_preamble(cfg);
        write_estimates_csv(std::slice::from_ref(&est), &mut body)?;
        return Ok(Output { body, ok: true, summary });
    }
    let mut v = to_value(&est);
    v["family_params"] = to_value(&fam.params);
    v["radius"] = json!(fam.radius);
    Ok(json_output(cfg, "density", v, true, summary))
}

fn lemmas(cfg: &RunConfig, args: &LemmaArgs) -> Run<Output> {
    let c = &cfg.common;
    let all = args.which == Which::All;
    let mut report = serde_json::Map::new();
    let mut ok = true;
    let mut lines = Vec::new();
    if all || args.which == Which::Quartic {
        let cert = certify_quartic(args.n_max);
        ok &= cert.passed();
        lines.push(format!("quartic n<={}: {} negative coefficients", args.n_max, cert.failures.len()));
        report.insert("quartic".into(), to_value(&cert));
    }
    if all || args.which == Which::Cos {
        let rep = check_cos_lemma(&geometric_grid(32.0, 1e6, args.grid))?;
        ok &= rep.passed() && rep.min_phi > COS_LEMMA_BOUND;
        let mut v = to_value(&rep);
        v["phi_1e6"] = json!(phi(1e6));
        lines.push(format!("cos: min {:.6}, nondecreasing {}", rep.min_phi, rep.nondecreasing));
        report.insert("cos".into(), v);
    }
    if all || args.which == Which::Gap {
        let rep = check_one_minus_c_bound(FIRST_RING..=args.ring_max, c.l)?;
        ok &= rep.passed();
        lines.push(format!("gap: {} rings, {} violations", rep.rings_checked, rep.violations.len()));
        report.insert("gap".into(), to_value(&rep));
    }
    if all || args.which == Which::Lemma1 {
        let pts = match &c.points {
            Some(p) => points::read_points(p)?,
            None => random_separated_points(args.count, args.disk, 2.0 * c.r, c.seed)?,
        };
        let disk = pts.iter().map(PlanarPoint::radius).fold(0.0, f64::max);
        let t = match c.eps {
            Eps::Value(e) => 1.0 / e,
            Eps::Auto => 1.0 / max_local_eps(c.r, disk),
        };
        let rep = lemma1_certificate(&pts, c.r, t)?;
        ok &= rep.passed();
        lines.push(format!("tilted-line bound: {} pairs, {} violations", rep.pairs, rep.violations.len()));
        report.insert("lemma1".into(), to_value(&rep));
    }
    if all || args.which == Which::Identities {
        let rep = identity_suite(args.identity_pairs, args.ring_max, c.seed, c.l, 1e-9, 1e-6)?;
        ok &= rep.passed();
        lines.push(format!(
            "identities: {} pairs, max rel {:.2e}/{:.2e}/{:.2e}",
            rep.pairs, rep.max_rel_triple, rep.max_rel_cross, rep.max_scaled_delta
        ));
        report.insert("identities".into(), to_value(&rep));
    }
    let mut v = Value::Object(report);
    strip_timing(&mut v, c.timing);
    Ok(json_output(cfg, "lemmas", v, ok, lines.join("; ")))
}

fn hole(cfg: &RunConfig, args: &HoleArgs, fmt: Format) -> Run<Output> {
    let fam = build_family(&cfg.common, &planar_points(&cfg.common)?)?;
    let prof = axis_clearance(&fam, args.z_max, args.steps)?;
    let summary = format!("largest clearance {}", prof.max_clearance);
    if fmt == Format::Csv {
        let mut body = csv_preamble(cfg);
        prof.write_csv(&mut body)?;
        return Ok(Output { body, ok: true, summary });
    }
    Ok(json_output(cfg, "clearance", to_value(&prof), true, summary))
}

fn figure(cfg: &RunConfig) -> Run<Output> {
    let pts = planar_points(&cfg.common)?;
    let comment = format!("run_config: {}", serde_json::to_string(cfg).expect("serializable"));
    let summary = format!("{} points", pts.len());
    if let Some(path) = &cfg.common.out_path {
        figure::emit_figure(&pts, path, &comment)?;
        return Ok(Output { body: Vec::new(), ok: true, summary });
    }
    let body = figure::render_svg(&pts, &comment)?.into_bytes();
    Ok(Output { body, ok: true, summary })
}

fn run(cli: Cli) -> Run<()> {
    let cmd = command_of(&cli.sub);
    validate(cmd, &cli.common, &cli.sub)?;
    let fmt = format_of(cmd, &cli.common)?;
    if let Some(n) = cli.common.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let extra = match &cli.sub {
        Sub::Density(a) => to_value(a),
        Sub::Lemmas(a) => to_value(a),
        Sub::Hole(a) => to_value(a),
        _ => Value::Null,
    };
    let cfg = RunConfig { command: cmd, common: cli.common.clone(), extra };
    let start = Instant::now();
    let out = match &cli.sub {
        Sub::Rings => rings(&cfg, fmt)?,
        Sub::Construct => construct(&cfg)?,
        Sub::Verify => verify(&cfg)?,
        Sub::Density(a) => density(&cfg, a, fmt)?,
        Sub::Lemmas(a) => lemmas(&cfg, a)?,
        Sub::Hole(a) => hole(&cfg, a, fmt)?,
        Sub::Figure => figure(&cfg)?,
    };
    match &cfg.common.out_path {
        Some(_) if cmd == Command::Figure => {}
        Some(path) => std::fs::write(path, &out.body)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?,
        None => std::io::stdout()
            .write_all(&out.body)
            .map_err(|e| Failure::Usage(e.to_string()))?,
    }
    eprintln!("{} ({:.2}s)", out.summary, start.elapsed().as_secs_f64());
    if out.ok {
        Ok(())
    } else {
        Err(Failure::Verification(out.summary))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(2)
        }
    }
}
