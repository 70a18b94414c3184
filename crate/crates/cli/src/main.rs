use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use flatmod::components::{enumerate_spin_square_classes, involutions_sp, involutions_su, InvolutionClass, InvolutionSignature};
use flatmod::encoding::{decode_element, encode_element, parse_group, EncodedElement, RepresentationFile};
use flatmod::groups::{covering_kernel, enumerate_center, project_cover, random_element, Family, GroupDescriptor};
use flatmod::obstruction::{h2_coefficients, obstruction_detail, predict_component_count, ObstructionClass, Prediction};
use flatmod::paths::{connect_even, connect_odd, validate_path, PathCertificate, PATH_TOL};
use flatmod::selftest::{run_selftest, SelftestReport};
use flatmod::surfaces::{
    sample_fiber_nonorientable, sample_fiber_orientable, Representation, SurfacePresentation, RELATION_TOL,
};
use flatmod::Error;

const EXIT_FAILED: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_RELATION: u8 = 3;
const EXIT_KERNEL: u8 = 4;
const EXIT_UNSUPPORTED: u8 = 5;

#[derive(Parser)]
#[command(name = "flatmod", version, about = "Surface group representations in compact Lie groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Random seed; FLATMOD_SEED takes precedence.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Obstruction class of a representation file.
    Obstruction {
        input: PathBuf,
        /// Skip the relation check on load.
        #[arg(long)]
        no_validate: bool,
        #[arg(long, default_value_t = RELATION_TOL)]
        tol: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Closed-form path inside a relation fiber of SU(n).
    Connect {
        #[arg(long)]
        group: String,
        #[arg(long)]
        crosscaps: usize,
        /// Index of the central element k (k = e^{2 pi i m / n} I for index m).
        #[arg(long, default_value_t = 0)]
        central_k: usize,
        /// JSON file `{"targets": [...]}` with one target (odd crosscaps) or two
        /// (even); random targets if absent.
        #[arg(long)]
        target: Option<PathBuf>,
        #[arg(long, default_value_t = 101)]
        samples: usize,
        #[arg(long, default_value_t = PATH_TOL)]
        tol: f64,
        /// Include the per-sample residuals.
        #[arg(long)]
        residuals: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Predicted number of connected components.
    Predict {
        #[arg(long)]
        group: String,
        /// `orientable:g` or `nonorientable:k`.
        #[arg(long)]
        surface: String,
        #[command(flatten)]
        common: Common,
    },
    /// Conjugacy classes of elements with g^2 = e.
    Involutions {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Random representation whose obstruction is a chosen kernel element.
    SampleFiber {
        #[arg(long)]
        group: String,
        #[arg(long)]
        surface: String,
        /// Index into the kernel of the universal cover.
        #[arg(long, default_value_t = 0)]
        central_k: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Runs the internal consistency suite.
    Selftest {
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Obstruction { common, .. }
            | Command::Connect { common, .. }
            | Command::Predict { common, .. }
            | Command::Involutions { common, .. }
            | Command::SampleFiber { common, .. }
            | Command::Selftest { common } => common,
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::RelationViolation { .. } => EXIT_RELATION,
            Error::KernelRecognition(_) => EXIT_KERNEL,
            Error::Unsupported(_) | Error::OpenCase(_) => EXIT_UNSUPPORTED,
            Error::Parse(_) | Error::Validation(_) | Error::Dimension { .. } | Error::DescriptorMismatch { .. } => EXIT_PARSE,
        };
        Failure { code, message: e.to_string() }
    }
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

#[derive(Serialize)]
struct Report<T: Serialize> {
    command: Vec<String>,
    inputs_digest: String,
    seed: u64,
    tolerances: BTreeMap<&'static str, f64>,
    outputs: T,
}

struct Context {
    argv: Vec<String>,
    seed: u64,
    inputs: Vec<Vec<u8>>,
}

impl Context {
    fn read(&mut self, path: &Path) -> Result<Vec<u8>, Failure> {
        let bytes = std::fs::read(path).map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", path.display())))?;
        self.inputs.push(bytes.clone());
        Ok(bytes)
    }

    fn read_json<T: for<'de> Deserialize<'de>>(&mut self, path: &Path) -> Result<T, Failure> {
        let bytes = self.read(path)?;
        serde_json::from_slice(&bytes).map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", path.display())))
    }

    /// SHA-256 over the arguments and the input file contents.
    fn digest(&self) -> String {
        let mut h = Sha256::new();
        for a in &self.argv {
            h.update(a.as_bytes());
            h.update([0]);
        }
        for input in &self.inputs {
            h.update((input.len() as u64).to_le_bytes());
            h.update(input);
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    fn report<T: Serialize>(&self, tolerances: &[(&'static str, f64)], outputs: T) -> Report<T> {
        Report {
            command: self.argv.clone(),
            inputs_digest: self.digest(),
            seed: self.seed,
            tolerances: tolerances.iter().copied().collect(),
            outputs,
        }
    }
}

/// Writes `text` to a temporary file beside `path` and renames it into place.
fn write_atomically(path: &Path, text: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn emit<T: Serialize>(common: &Common, report: &Report<T>) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(report).map_err(|e| fail(EXIT_FAILED, e.to_string()))?;
    text.push('\n');
    match &common.output {
        Some(path) => write_atomically(path, &text).map_err(|e| fail(EXIT_FAILED, format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn effective_seed(flag: u64) -> Result<u64, Failure> {
    match std::env::var("FLATMOD_SEED") {
        Ok(v) => v.trim().parse().map_err(|_| fail(EXIT_PARSE, format!("FLATMOD_SEED must be an unsigned integer, got {v:?}"))),
        Err(_) => Ok(flag),
    }
}

#[derive(Serialize)]
struct ObstructionOutput {
    group: String,
    surface: String,
    class: ObstructionClass,
    kernel_value: Vec<u64>,
    match_distance: f64,
    relation_residual: f64,
}

fn cmd_obstruction(ctx: &mut Context, common: &Common, input: &Path, no_validate: bool, tol: f64) -> Result<(), Failure> {
    let file: RepresentationFile = ctx.read_json(input)?;
    let rep = file.to_representation(!no_validate, tol)?;
    let detail = obstruction_detail(&rep)?;
    let out = ObstructionOutput {
        group: rep.descriptor().to_string(),
        surface: rep.presentation().to_string(),
        class: detail.class,
        kernel_value: detail.kernel_value,
        match_distance: detail.match_distance,
        relation_residual: rep.residual(),
    };
    let mut tolerances = vec![("kernel_match", flatmod::obstruction::KERNEL_MATCH_TOL)];
    if !no_validate {
        tolerances.push(("relation", tol));
    }
    emit(common, &ctx.report(&tolerances, out))
}

#[derive(Deserialize)]
struct TargetFile {
    targets: Vec<EncodedElement>,
}

#[allow(clippy::too_many_arguments)]
fn cmd_connect(
    ctx: &mut Context,
    common: &Common,
    group: &str,
    crosscaps: usize,
    central_k: usize,
    target: Option<&Path>,
    samples: usize,
    tol: f64,
    residuals: bool,
) -> Result<bool, Failure> {
    let d = parse_group(group)?;
    if d.family() != Family::SU || !d.is_simply_connected() {
        return Err(fail(EXIT_UNSUPPORTED, format!("connect builds paths in SU(n) only, got {d}")));
    }
    let needed = match crosscaps {
        0 => return Err(fail(EXIT_PARSE, "crosscaps must be at least 1")),
        1 => {
            return Err(fail(
                EXIT_UNSUPPORTED,
                "1 crosscap (k = 1): no handle is available for a path; the projective plane is counted by `flatmod involutions`",
            ))
        }
        2 | 4 => {
            return Err(fail(
                EXIT_UNSUPPORTED,
                format!("{crosscaps} crosscaps is an open case: the construction needs more handles and no component count is known"),
            ))
        }
        k if k % 2 == 1 => 1,
        _ => 2,
    };
    if samples < 2 {
        return Err(fail(EXIT_PARSE, "--samples must be at least 2"));
    }
    let (_, center) = enumerate_center(&d)?;
    let k = center
        .get(central_k)
        .ok_or_else(|| fail(EXIT_PARSE, format!("--central-k must be below {}", center.len())))?;
    let targets = match target {
        Some(path) => {
            let encoded = ctx.read_json::<TargetFile>(path)?.targets;
            if encoded.len() != needed {
                return Err(fail(EXIT_PARSE, format!("{crosscaps} crosscaps need {needed} target(s), file has {}", encoded.len())));
            }
            encoded.iter().map(|e| decode_element(&d, e)).collect::<flatmod::Result<Vec<_>>>()?
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
            (0..needed).map(|_| random_element(&d, &mut rng)).collect()
        }
    };
    let path = if needed == 1 {
        connect_odd(k, &targets[0], (crosscaps - 1) / 2)?
    } else {
        connect_even(k, &targets[0], &targets[1], (crosscaps - 2) / 2)?
    };
    let report = validate_path(&path, &targets, samples, tol)?;
    let cert = PathCertificate::new(&path, &report, residuals);
    let passed = cert.passed;
    emit(common, &ctx.report(&[("path", tol), ("endpoint", flatmod::paths::ENDPOINT_TOL)], cert))?;
    Ok(passed)
}

#[derive(Serialize)]
struct PredictOutput {
    group: String,
    surface: String,
    h2_orders: Vec<u64>,
    prediction: Prediction,
}

fn cmd_predict(ctx: &mut Context, common: &Common, group: &str, surface: &str) -> Result<(), Failure> {
    let d = parse_group(group)?;
    let s = SurfacePresentation::parse(surface)?;
    let out = PredictOutput {
        group: d.to_string(),
        surface: s.to_string(),
        h2_orders: h2_coefficients(&s, &d)?.orders().to_vec(),
        prediction: predict_component_count(&s, &d)?,
    };
    emit(common, &ctx.report(&[], out))
}

#[derive(Serialize)]
struct ClassOutput {
    index: usize,
    representative: EncodedElement,
    signature: InvolutionSignature,
}

#[derive(Serialize)]
#[serde(untagged)]
enum InvolutionOutput {
    Matrix { group: String, count: usize, classes: Vec<ClassOutput> },
    Spin(Box<flatmod::components::SpinSquareReport>),
}

fn class_output(c: InvolutionClass) -> ClassOutput {
    ClassOutput { index: c.index, representative: encode_element(&c.representative), signature: c.signature }
}

fn cmd_involutions(ctx: &mut Context, common: &Common, family: &str, n: usize) -> Result<(), Failure> {
    let family = Family::parse(family)?;
    let out = match family {
        Family::SU | Family::Sp => {
            let (d, classes) = if family == Family::SU {
                (GroupDescriptor::su(n)?, involutions_su(n)?)
            } else {
                (GroupDescriptor::sp(n)?, involutions_sp(n)?)
            };
            InvolutionOutput::Matrix {
                group: d.to_string(),
                count: classes.len(),
                classes: classes.into_iter().map(class_output).collect(),
            }
        }
        Family::Spin => InvolutionOutput::Spin(Box::new(enumerate_spin_square_classes(n)?)),
        Family::SO => return Err(fail(EXIT_UNSUPPORTED, "involutions are enumerated for SU, Sp and Spin")),
    };
    emit(common, &ctx.report(&[("involution", flatmod::components::INVOLUTION_TOL)], out))
}

#[derive(Serialize)]
struct SampleOutput {
    kernel_element: Vec<u64>,
    cover_residual: f64,
    class: ObstructionClass,
    representation: RepresentationFile,
}

fn cmd_sample_fiber(ctx: &mut Context, common: &Common, group: &str, surface: &str, central_k: usize) -> Result<(), Failure> {
    let d = parse_group(group)?;
    let s = SurfacePresentation::parse(surface)?;
    let kernel = covering_kernel(&d)?;
    let k = kernel
        .elements()
        .get(central_k)
        .ok_or_else(|| fail(EXIT_PARSE, format!("--central-k must be below {}", kernel.elements().len())))?;
    let sample = match s {
        SurfacePresentation::Orientable { genus } => sample_fiber_orientable(genus, k, ctx.seed)?,
        _ => sample_fiber_nonorientable(&s, k, ctx.seed)?,
    };
    let images = sample.images.iter().map(|x| project_cover(x, &d)).collect::<flatmod::Result<Vec<_>>>()?;
    let rep = Representation::new(s, d, images)?;
    let detail = obstruction_detail(&rep)?;
    let out = SampleOutput {
        kernel_element: kernel.to_kernel_coords(&k.coords).expect("kernel element"),
        cover_residual: sample.residual,
        class: detail.class,
        representation: RepresentationFile::from_representation(&rep),
    };
    emit(common, &ctx.report(&[("relation", RELATION_TOL)], out))
}

fn cmd_selftest(ctx: &mut Context, common: &Common) -> Result<bool, Failure> {
    let report: SelftestReport = run_selftest(ctx.seed);
    let passed = report.passed;
    emit(common, &ctx.report(&[], report))?;
    Ok(passed)
}

fn run(cli: Cli, argv: Vec<String>) -> Result<bool, Failure> {
    let common = cli.command.common().clone();
    let mut ctx = Context { argv, seed: effective_seed(common.seed)?, inputs: Vec::new() };
    match &cli.command {
        Command::Obstruction { input, no_validate, tol, .. } => {
            cmd_obstruction(&mut ctx, &common, input, *no_validate, *tol).map(|_| true)
        }
        Command::Connect { group, crosscaps, central_k, target, samples, tol, residuals, .. } => cmd_connect(
            &mut ctx,
            &common,
            group,
            *crosscaps,
            *central_k,
            target.as_deref(),
            *samples,
            *tol,
            *residuals,
        ),
        Command::Predict { group, surface, .. } => cmd_predict(&mut ctx, &common, group, surface).map(|_| true),
        Command::Involutions { family, n, .. } => cmd_involutions(&mut ctx, &common, family, *n).map(|_| true),
        Command::SampleFiber { group, surface, central_k, .. } => {
            cmd_sample_fiber(&mut ctx, &common, group, surface, *central_k).map(|_| true)
        }
        Command::Selftest { .. } => cmd_selftest(&mut ctx, &common),
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli, argv) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAILED),
        Err(f) => {
            eprintln!("flatmod: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
