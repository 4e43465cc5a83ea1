//! Batch command-line front end.
//!
//! `run` parses the arguments, does the work, writes documents to `stdout`
//! and diagnostics to `stderr`, and returns the process exit code.

use std::collections::BTreeSet;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::assembly::{export_obj, load_assembly, save_assembly, AnyAssembly, Assembly, AssemblyError};
use crate::contacts::find_contacts;
use crate::generators::{
    cube_grid, interlocked_cubes, interlocked_cubes_centered, rhomblock, versatile_fixture, FramePolicy,
    GridSpec,
};
use crate::geometry::{Rational, Scalar, Vec3, DEFAULT_TOLERANCE};
use crate::lozenge::{
    assemble_rhomblocks, boundary_frame, brick_tiling, fingerprint, flip_shuffle, orientation_counts,
    tiling_from_json, tiling_to_json, LozengeError, Tiling, Variant,
};
use crate::matrix::{
    build_matrix, edge_fan_matrix, edge_rank_check, matrix_rank, reduce_rows, EdgeFanInput,
    InterlockingMatrix, Mode,
};
use crate::solver::{verify, verify_matrix, SolverError, Status, Verdict};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SOLVER: i32 = 1;
pub const EXIT_FLAGS: i32 = 2;
pub const EXIT_SCHEMA: i32 = 3;
pub const EXIT_VALIDITY: i32 = 4;

/// Exit code of `verify` for each verdict status.
pub fn status_exit_code(s: Status) -> i32 {
    match s {
        Status::Interlocked => 0,
        Status::Sliding => 10,
        Status::Escape => 11,
        Status::Vacuous => 12,
    }
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Flag(String),
    #[error("{0}")]
    Schema(String),
    #[error("{0}")]
    Validity(String),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Flag(_) | CliError::Io(_) => EXIT_FLAGS,
            CliError::Schema(_) => EXIT_SCHEMA,
            CliError::Validity(_) => EXIT_VALIDITY,
            CliError::Solver(_) => EXIT_SOLVER,
        }
    }
}

impl From<AssemblyError> for CliError {
    fn from(e: AssemblyError) -> Self {
        match e {
            AssemblyError::FrameIndex { .. } => CliError::Flag(e.to_string()),
            _ => CliError::Schema(e.to_string()),
        }
    }
}

impl From<LozengeError> for CliError {
    fn from(e: LozengeError) -> Self {
        match e {
            LozengeError::BadHexagon(..) | LozengeError::BadPartition(_) => CliError::Flag(e.to_string()),
            LozengeError::Schema(_) => CliError::Schema(e.to_string()),
            LozengeError::InvalidTiling => CliError::Validity(e.to_string()),
            LozengeError::InvalidAssembly(ref r) => {
                CliError::Validity(format!("{e}: {}", serde_json::to_string(r).unwrap_or_default()))
            }
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "interlock",
    version,
    about = "Infinitesimal interlocking checks for block assemblies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write an assembly or tiling document.
    Generate {
        #[command(subcommand)]
        what: GenerateCmd,
    },
    /// Verify an assembly or tiling document and print the verdict.
    Verify(VerifyArgs),
    /// Write the blocks of a document as OBJ.
    Export(ExportArgs),
    /// Print mesh, contact and matrix statistics.
    Info(InfoArgs),
    /// Run a named example end to end.
    Demo(DemoArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Full,
    Translational,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Full => Mode::Full,
            ModeArg::Translational => Mode::Translational,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantArg {
    First,
    Second,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::First => Variant::First,
            VariantArg::Second => Variant::Second,
        }
    }
}

/// `--frame boundary`, `--frame none` or `--frame ids 0,3,5`.
#[derive(Clone, Debug, PartialEq, Eq)]
enum FrameArg {
    Boundary,
    None,
    Ids(BTreeSet<usize>),
}

fn parse_frame(values: &[String]) -> Result<FrameArg, CliError> {
    let bad = || {
        CliError::Flag(format!(
            "bad --frame {values:?}: expected boundary, none or ids a,b,c"
        ))
    };
    match values {
        [k] if k == "boundary" => Ok(FrameArg::Boundary),
        [k] if k == "none" => Ok(FrameArg::None),
        [k, ids] if k == "ids" => {
            let set = ids
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| s.trim().parse::<usize>())
                .collect::<Result<BTreeSet<_>, _>>()
                .map_err(|_| bad())?;
            Ok(FrameArg::Ids(set))
        }
        _ => Err(bad()),
    }
}

#[derive(Args, Debug, Clone)]
struct FrameFlag {
    /// boundary | none | ids a,b,c
    #[arg(long, num_args = 1..=2, value_names = ["KIND", "IDS"])]
    frame: Option<Vec<String>>,
}

impl FrameFlag {
    fn get(&self) -> Result<Option<FrameArg>, CliError> {
        self.frame.as_deref().map(parse_frame).transpose()
    }
}

#[derive(Args, Debug, Clone)]
struct OutFlag {
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum GenerateCmd {
    /// Unit cubes on a grid.
    CubeGrid {
        #[arg(long, default_value_t = 3)]
        nx: usize,
        #[arg(long, default_value_t = 3)]
        ny: usize,
        #[command(flatten)]
        frame: FrameFlag,
        #[command(flatten)]
        out: OutFlag,
    },
    /// Side-2 cubes on the skew lattice.
    SkewCubes {
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Translate so that the middle cube is centred at the origin.
        #[arg(long)]
        centered: bool,
        #[command(flatten)]
        frame: FrameFlag,
        #[command(flatten)]
        out: OutFlag,
    },
    /// A single RhomBlock.
    Rhomblock {
        #[command(flatten)]
        out: OutFlag,
    },
    /// A lozenge tiling of a hexagon, or its RhomBlock assembly.
    Lozenge {
        #[arg(long, num_args = 3, value_names = ["A", "B", "C"], default_values_t = [3, 3, 3])]
        hexagon: Vec<i64>,
        /// Number of random flips applied to the brick tiling.
        #[arg(long, default_value_t = 0)]
        shuffle: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the RhomBlock assembly with this placement rule instead of the tiling.
        #[arg(long, value_enum)]
        variant: Option<VariantArg>,
        #[command(flatten)]
        frame: FrameFlag,
        #[command(flatten)]
        out: OutFlag,
    },
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Document path; standard input when absent or `-`.
    input: Option<PathBuf>,
    /// Placement rule used when the input is a tiling.
    #[arg(long, value_enum, default_value = "first")]
    variant: VariantArg,
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value = "full")]
    mode: ModeArg,
    #[command(flatten)]
    frame: FrameFlag,
    #[arg(long, value_enum)]
    backend: Option<BackendArg>,
    #[command(flatten)]
    out: OutFlag,
}

#[derive(Args, Debug)]
struct ExportArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    out: OutFlag,
}

#[derive(Args, Debug)]
struct InfoArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    frame: FrameFlag,
    #[command(flatten)]
    out: OutFlag,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DemoName {
    CubeGrid,
    SkewCubes,
    Versatile,
    EdgeFan,
    RhomblockHex,
}

#[derive(Args, Debug)]
struct DemoArgs {
    #[arg(value_enum)]
    name: DemoName,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Flips applied to the brick tiling in `rhomblock-hex`.
    #[arg(long, default_value_t = 200)]
    shuffle: usize,
    #[arg(long, num_args = 3, value_names = ["A", "B", "C"], default_values_t = [3, 3, 3])]
    hexagon: Vec<i64>,
    /// Random samples in `edge-fan`.
    #[arg(long, default_value_t = 5)]
    samples: usize,
    #[command(flatten)]
    out: OutFlag,
}

/// Parses `args` (including the program name) and runs one command.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_FLAGS } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let mut ctx = Ctx {
        stdin,
        stdout,
        stderr,
    };
    match dispatch(cli.command, &mut ctx) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(ctx.stderr, "error: {e}");
            e.code()
        }
    }
}

struct Ctx<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn emit(&mut self, out: &OutFlag, text: &str) -> Result<(), CliError> {
        match &out.out {
            Some(path) => std::fs::write(path, text)?,
            None => self.stdout.write_all(text.as_bytes())?,
        }
        Ok(())
    }

    fn emit_json(&mut self, out: &OutFlag, v: &Value) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(v).expect("json value serializes");
        text.push('\n');
        self.emit(out, &text)
    }

    fn warn(&mut self, msg: &str) {
        let _ = writeln!(self.stderr, "warning: {msg}");
    }
}

fn dispatch(cmd: Command, ctx: &mut Ctx) -> Result<i32, CliError> {
    match cmd {
        Command::Generate { what } => generate(what, ctx),
        Command::Verify(a) => verify_cmd(a, ctx),
        Command::Export(a) => export_cmd(a, ctx),
        Command::Info(a) => info_cmd(a, ctx),
        Command::Demo(a) => demo_cmd(a, ctx),
    }
}

fn grid_policy(frame: Option<FrameArg>) -> FramePolicy {
    match frame {
        None | Some(FrameArg::Boundary) => FramePolicy::Border,
        Some(FrameArg::None) => FramePolicy::None,
        Some(FrameArg::Ids(s)) => FramePolicy::Explicit(s),
    }
}

fn hexagon(dims: &[i64]) -> Result<Tiling, CliError> {
    let [a, b, c] =
        <[i64; 3]>::try_from(dims).map_err(|_| CliError::Flag("--hexagon takes three sides".into()))?;
    if a < 1 || b < 1 || c < 1 {
        return Err(LozengeError::BadHexagon(a, b, c).into());
    }
    Ok(brick_tiling(a as usize, b as usize, c as usize)?)
}

fn apply_frame<S: Scalar>(a: Assembly<S>, frame: Option<FrameArg>) -> Result<Assembly<S>, CliError> {
    Ok(match frame {
        None | Some(FrameArg::Boundary) => a,
        Some(FrameArg::None) => a.with_frame([])?,
        Some(FrameArg::Ids(s)) => a.with_frame(s)?,
    })
}

fn tiling_assembly(t: &Tiling, variant: Variant, frame: Option<FrameArg>) -> Result<Assembly<f64>, CliError> {
    let a = assemble_rhomblocks(t, variant)?;
    Ok(match frame {
        None | Some(FrameArg::Boundary) => a.with_frame(boundary_frame(t))?,
        Some(FrameArg::None) => a,
        Some(FrameArg::Ids(s)) => a.with_frame(s)?,
    })
}

fn generate(what: GenerateCmd, ctx: &mut Ctx) -> Result<i32, CliError> {
    match what {
        GenerateCmd::CubeGrid { nx, ny, frame, out } => {
            let a = cube_grid(&GridSpec::new(nx, ny, grid_policy(frame.get()?)));
            ctx.emit_json(&out, &save_assembly(&a))?;
        }
        GenerateCmd::SkewCubes {
            n,
            centered,
            frame,
            out,
        } => {
            let policy = grid_policy(frame.get()?);
            let a = if centered {
                interlocked_cubes_centered(n, &policy)
            } else {
                interlocked_cubes(n, &policy)
            };
            ctx.emit_json(&out, &save_assembly(&a))?;
        }
        GenerateCmd::Rhomblock { out } => {
            let a = Assembly::new(vec![rhomblock()], BTreeSet::new(), DEFAULT_TOLERANCE)?;
            ctx.emit_json(&out, &save_assembly(&a))?;
        }
        GenerateCmd::Lozenge {
            hexagon: dims,
            shuffle,
            seed,
            variant,
            frame,
            out,
        } => {
            let t = flip_shuffle(&hexagon(&dims)?, shuffle, seed);
            match variant {
                Some(v) => {
                    let a = tiling_assembly(&t, v.into(), frame.get()?)?;
                    ctx.emit_json(&out, &save_assembly(&a))?;
                }
                None => {
                    if frame.frame.is_some() {
                        ctx.warn("--frame is ignored when writing a tiling document");
                    }
                    ctx.emit_json(&out, &tiling_to_json(&t))?;
                }
            }
        }
    }
    Ok(EXIT_OK)
}

enum Input {
    Assembly(AnyAssembly),
    Tiling(Tiling),
}

fn read_input(args: &InputArgs, ctx: &mut Ctx) -> Result<Input, CliError> {
    let text = match args.input.as_deref() {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p)
            .map_err(|e| CliError::Flag(format!("cannot read {}: {e}", p.display())))?,
        _ => {
            let mut s = String::new();
            ctx.stdin.read_to_string(&mut s)?;
            s
        }
    };
    let value: Value =
        serde_json::from_str(&text).map_err(|e| CliError::Schema(format!("invalid JSON: {e}")))?;
    let is_tiling = value.get("lozenges").is_some() || value.get("region").is_some();
    if is_tiling {
        return Ok(Input::Tiling(tiling_from_json(&value)?));
    }
    let loaded = load_assembly(&value)?;
    for w in &loaded.warnings {
        ctx.warn(w);
    }
    let mut a = loaded.assembly;
    if let Some(tol) = args.tolerance {
        a = a.with_tolerance(check_tolerance(tol)?);
    }
    Ok(Input::Assembly(a))
}

fn check_tolerance(tol: f64) -> Result<f64, CliError> {
    if tol.is_finite() && tol >= 0.0 {
        Ok(tol)
    } else {
        Err(CliError::Flag(format!(
            "--tolerance must be finite and non-negative, got {tol}"
        )))
    }
}

fn resolve(input: Input, args: &InputArgs, frame: Option<FrameArg>) -> Result<AnyAssembly, CliError> {
    Ok(match input {
        Input::Assembly(a) => match a {
            AnyAssembly::Exact(a) => AnyAssembly::Exact(apply_frame(a, frame)?),
            AnyAssembly::Float(a) => AnyAssembly::Float(apply_frame(a, frame)?),
        },
        Input::Tiling(t) => {
            let mut a = tiling_assembly(&t, args.variant.into(), frame)?;
            if let Some(tol) = args.tolerance {
                a = a.with_tolerance(check_tolerance(tol)?);
            }
            AnyAssembly::Float(a)
        }
    })
}

fn require_valid(a: &AnyAssembly) -> Result<(), CliError> {
    let report = a.validate();
    if report.ok {
        Ok(())
    } else {
        Err(CliError::Validity(format!(
            "assembly is not valid: {}",
            serde_json::to_string(&report).unwrap_or_default()
        )))
    }
}

fn verdict_exit<S: Scalar>(v: &Verdict<S>) -> i32 {
    status_exit_code(v.status)
}

fn verify_cmd(args: VerifyArgs, ctx: &mut Ctx) -> Result<i32, CliError> {
    let frame = args.frame.get()?;
    let input = read_input(&args.input, ctx)?;
    let mut a = resolve(input, &args.input, frame)?;
    match (args.backend, &a) {
        (Some(BackendArg::Exact), AnyAssembly::Float(_)) => {
            return Err(CliError::Flag(
                "--backend exact requested but the coordinates are not exact rationals".into(),
            ))
        }
        (Some(BackendArg::Float), AnyAssembly::Exact(e)) => a = AnyAssembly::Float(e.to_float()),
        _ => {}
    }
    require_valid(&a)?;
    let mode: Mode = args.mode.into();
    let (doc, code) = match &a {
        AnyAssembly::Exact(e) => {
            let v = verify(e, mode)?;
            (v.to_json(), verdict_exit(&v))
        }
        AnyAssembly::Float(f) => {
            let v = verify(f, mode)?;
            (v.to_json(), verdict_exit(&v))
        }
    };
    ctx.emit_json(&args.out, &doc)?;
    Ok(code)
}

fn export_cmd(args: ExportArgs, ctx: &mut Ctx) -> Result<i32, CliError> {
    let input = read_input(&args.input, ctx)?;
    let a = resolve(input, &args.input, None)?;
    let obj = match &a {
        AnyAssembly::Exact(e) => export_obj(e),
        AnyAssembly::Float(f) => export_obj(f),
    };
    ctx.emit(&args.out, &obj)?;
    Ok(EXIT_OK)
}

fn matrix_dims<S: Scalar>(a: &Assembly<S>) -> Value {
    let dims = |mode| {
        let m = build_matrix(a, mode);
        let r = reduce_rows(&m);
        json!({"rows": m.nrows(), "reduced_rows": r.nrows(), "cols": m.ncols()})
    };
    json!({"full": dims(Mode::Full), "translational": dims(Mode::Translational)})
}

fn assembly_info<S: Scalar>(a: &Assembly<S>) -> Value {
    let report = crate::assembly::validate_assembly(a);
    let meshes: Vec<Value> = a
        .blocks()
        .iter()
        .map(|b| json!({"label": b.label, "stats": b.stats(), "volume": b.signed_volume().to_f64()}))
        .collect();
    let patches = find_contacts(a);
    json!({
        "backend": S::BACKEND,
        "tolerance": a.tolerance(),
        "blocks": a.len(),
        "frame": a.frame(),
        "free_blocks": a.free_blocks().len(),
        "valid": report.ok,
        "violations": report.violations.len(),
        "contact_patches": patches.len(),
        "contact_points": patches.iter().map(|p| p.points.len()).sum::<usize>(),
        "matrix": matrix_dims(a),
        "meshes": meshes,
    })
}

fn info_cmd(args: InfoArgs, ctx: &mut Ctx) -> Result<i32, CliError> {
    let frame = args.frame.get()?;
    let input = read_input(&args.input, ctx)?;
    let tiling = match &input {
        Input::Tiling(t) => Some(json!({
            "triangles": t.region.len(),
            "lozenges": t.lozenges.len(),
            "orientation_counts": orientation_counts(t),
            "fingerprint": fingerprint(t),
            "variant": Variant::from(args.input.variant),
        })),
        Input::Assembly(_) => None,
    };
    let a = resolve(input, &args.input, frame)?;
    let mut doc = match &a {
        AnyAssembly::Exact(e) => assembly_info(e),
        AnyAssembly::Float(f) => assembly_info(f),
    };
    if let Some(t) = tiling {
        doc["tiling"] = t;
    }
    ctx.emit_json(&args.out, &doc)?;
    Ok(EXIT_OK)
}

fn dense_json<S: Scalar>(m: &InterlockingMatrix<S>) -> Value {
    json!({
        "rows": m.nrows(),
        "cols": m.ncols(),
        "entries": m.dense().iter().map(|r| r.iter().map(|v| v.to_json()).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

fn exact_demo(a: &Assembly<Rational>) -> Result<Value, CliError> {
    let m = reduce_rows(&build_matrix(a, Mode::Full));
    let v = verify_matrix(&m)?;
    Ok(json!({"matrix": dense_json(&m), "verdict": v.to_json()}))
}

fn demo_cmd(args: DemoArgs, ctx: &mut Ctx) -> Result<i32, CliError> {
    let doc = match args.name {
        DemoName::CubeGrid => {
            let a = cube_grid(&GridSpec::new(3, 3, FramePolicy::Border));
            let mut d = exact_demo(&a)?;
            d["demo"] = json!("cube-grid");
            d
        }
        DemoName::SkewCubes => {
            let a = interlocked_cubes(3, &FramePolicy::Border);
            let c = interlocked_cubes_centered(3, &FramePolicy::Border);
            let mut d = exact_demo(&a)?;
            d["centered_matrix"] = dense_json(&reduce_rows(&build_matrix(&c, Mode::Full)));
            let t = verify(&a, Mode::Translational)?;
            d["translational_verdict"] = t.to_json();
            d["demo"] = json!("skew-cubes");
            d
        }
        DemoName::Versatile => {
            let f = versatile_fixture();
            let vec_json = |v: &Vec3<Rational>| json!([v.x.to_json(), v.y.to_json(), v.z.to_json()]);
            json!({
                "demo": "versatile",
                "points": f.points.iter().map(vec_json).collect::<Vec<_>>(),
                "normal": vec_json(&f.normal),
                "omega": vec_json(&f.twist.omega),
                "t": vec_json(&f.twist.trans),
                "products": f.products().iter().map(|p| p.to_json()).collect::<Vec<_>>(),
            })
        }
        DemoName::EdgeFan => edge_fan_demo(args.seed, args.samples)?,
        DemoName::RhomblockHex => rhomblock_demo(&args)?,
    };
    ctx.emit_json(&args.out, &doc)?;
    Ok(EXIT_OK)
}

fn edge_fan_demo(seed: u64, samples: usize) -> Result<Value, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rat = |nonzero: bool| loop {
        let num = rng.random_range(-20i64..=20);
        let den = rng.random_range(1i64..=9);
        if !nonzero || num != 0 {
            return Rational::new(num.into(), den.into());
        }
    };
    let v1 = [Rational::from_i64(0), Rational::from_i64(0)];
    let v2 = [Rational::from_i64(1), Rational::from_i64(0)];
    let mut ps: Vec<[Rational; 2]> = (0..samples).map(|_| [rat(false), rat(true)]).collect();
    ps.push([Rational::new(1.into(), 2.into()), Rational::from_i64(0)]);
    let mut rows = Vec::new();
    for p in ps {
        let pj = json!([p[0].to_json(), p[1].to_json()]);
        match edge_rank_check(v1.clone(), v2.clone(), p.clone(), 0.0) {
            Ok(r) => rows.push(json!({"p": pj, "report": r})),
            Err(e) => {
                let collapsed = EdgeFanInput {
                    v1: Vec3::zero(),
                    v2: Vec3::from_i64(1, 0, 0),
                    p: Vec3::new(p[0].clone(), p[1].clone(), Rational::from_i64(1)),
                };
                let rank = matrix_rank(&edge_fan_matrix(&collapsed), 6, 0.0);
                rows.push(json!({"p": pj, "error": e.to_string(), "rank": rank}));
            }
        }
    }
    Ok(json!({"demo": "edge-fan", "samples": rows}))
}

fn rhomblock_demo(args: &DemoArgs) -> Result<Value, CliError> {
    let t = flip_shuffle(&hexagon(&args.hexagon)?, args.shuffle, args.seed);
    let frame = boundary_frame(&t);
    let mut runs = Vec::new();
    for variant in [Variant::First, Variant::Second] {
        let a = assemble_rhomblocks(&t, variant)?.with_frame(frame.clone())?;
        for mode in [Mode::Translational, Mode::Full] {
            let v = verify(&a, mode)?;
            runs.push(json!({
                "variant": variant,
                "mode": mode,
                "status": v.status,
                "lp_residual": v.certificate.lp_residual,
                "rows": v.certificate.rows,
                "cols": v.certificate.cols,
            }));
        }
        let open = verify(&a.with_frame([])?, Mode::Translational)?;
        runs.push(
            json!({"variant": variant, "mode": Mode::Translational, "frame": "none", "status": open.status}),
        );
    }
    Ok(json!({
        "demo": "rhomblock-hex",
        "hexagon": args.hexagon,
        "fingerprint": fingerprint(&t),
        "lozenges": t.lozenges.len(),
        "frame": frame.len(),
        "runs": runs,
    }))
}
