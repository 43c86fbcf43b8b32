use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hyperdef::hyper::{build_u_r_chi, center, PCharacter};
use hyperdef::linalg::DEFAULT_SEED;
use hyperdef::repthy::ChiContext;
use hyperdef::serial::{algebra_to_json, dist_dump, representation_to_json};
use hyperdef::verify::{run_suite, GridConfig};
use hyperdef::Field;

/// Higher reduced enveloping algebras of SL2 over small finite fields.
#[derive(Parser)]
#[command(name = "hyperdef", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Distribution algebras of Frobenius kernels.
    Dist {
        #[command(subcommand)]
        command: DistCommand,
    },
    /// Structure-constant algebras U^[r]_chi.
    Algebra {
        #[command(subcommand)]
        command: AlgebraCommand,
    },
    /// Dump the teenage Verma module Z^r_chi(P, lambda) = P~ (x) Z_chi(lambda) as JSON.
    ///
    /// chi is first conjugated into chi(e) = 0 form over a splitting field; the
    /// module is over U^[r] at that conjugate, whose label is recorded in the output.
    Verma(VermaArgs),
    /// Table of irreducible U^[r]_chi-modules via the Steinberg bijection
    /// M <-> (P, Hom_{G_r}(P, M)).
    ///
    /// Columns: class id, dim M, dim P, digits of P (least significant first),
    /// dim N, and the central-character fingerprint of M.
    Irr(IrrArgs),
    /// Run the named theorem checks over a grid of (p, r) cells.
    ///
    /// Exits 1 if any check fails. Skipped checks name the hypothesis that fails.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum DistCommand {
    /// Structure constants of Di(G_r) in the divided-power basis e^(i) h^[k] f^(j).
    Dump {
        #[command(flatten)]
        level: Level,
        /// Output file; standard output if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum AlgebraCommand {
    /// Build U^[r]_chi, dimension p^{3(r+1)}; U^[r]_0 is Di(G_{r+1}).
    Build {
        #[command(flatten)]
        level: Level,
        #[command(flatten)]
        chi: ChiArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Level {
    /// Characteristic (a prime).
    #[arg(long)]
    p: u32,
    /// Level r >= 0.
    #[arg(long)]
    r: u32,
    /// Degree of the base field F_{p^k}.
    #[arg(long, default_value_t = 1)]
    k: u32,
}

#[derive(Args)]
struct ChiArg {
    /// p-character as "e,h,f"; extension-field values as coefficient vectors like [1,2].
    #[arg(long, default_value = "0,0,0", allow_hyphen_values = true)]
    chi: String,
}

#[derive(Args)]
struct VermaArgs {
    #[command(flatten)]
    level: Level,
    #[command(flatten)]
    chi: ChiArg,
    /// Digits of the highest weight of the Di(G_r)-simple P, comma-separated,
    /// least significant first. Defaults to all zeros.
    #[arg(long = "P")]
    p_digits: Option<String>,
    /// Index of lambda in the sorted list Lambda_chi.
    #[arg(long, default_value_t = 0)]
    lambda: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct IrrArgs {
    #[command(flatten)]
    level: Level,
    #[command(flatten)]
    chi: ChiArg,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Seed for the randomized isomorphism and irreducibility tests.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// "default" (p in {2,3}, r in {0,1}), "empty", or cells like "5:0,3:1".
    #[arg(long, default_value = "default")]
    grid: String,
    /// Report file. JSON gets the full bundle, CSV one row per check.
    #[arg(long, default_value = "report.json")]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Writes through a temporary file in the target directory and renames it into place.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating a file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    // temporary files are created private; outputs are ordinary files
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        tmp.as_file().set_permissions(std::fs::Permissions::from_mode(0o644))?;
    }
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => write_atomic(path, text.as_bytes()),
        None => {
            let mut stdout = std::io::stdout().lock();
            let written = stdout.write_all(text.as_bytes()).and_then(|_| {
                if text.ends_with('\n') {
                    Ok(())
                } else {
                    stdout.write_all(b"\n")
                }
            });
            match written {
                // a closed pipe (e.g. `| head`) is not an error
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                other => Ok(other?),
            }
        }
    }
}

fn field_of(level: &Level) -> Result<Arc<Field>> {
    Ok(Field::new(level.p, level.k)?)
}

fn parse_digits(s: Option<&str>, p: u32, r: u32) -> Result<Vec<u32>> {
    let Some(s) = s.map(str::trim).filter(|s| !s.is_empty()) else {
        return Ok(vec![0; r as usize]);
    };
    let digits = s
        .split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|e| anyhow!(hyperdef::Error::Parse(format!("--P digit {t:?}: {e}")))))
        .collect::<Result<Vec<_>>>()?;
    if digits.len() != r as usize || digits.iter().any(|&d| d >= p) {
        return Err(anyhow!(hyperdef::Error::Parse(format!(
            "--P needs {r} digits in 0..{p}, got {s:?}"
        ))));
    }
    Ok(digits)
}

fn dist_cmd(level: &Level, out: Option<&Path>) -> Result<()> {
    let f = field_of(level)?;
    let dump = dist_dump(level.r, &f)?;
    emit(out, &serde_json::to_string_pretty(&dump)?)
}

fn algebra_cmd(level: &Level, chi: &ChiArg, out: Option<&Path>) -> Result<()> {
    let f = field_of(level)?;
    let chi = PCharacter::parse(&chi.chi, &f)?;
    let alg = build_u_r_chi(level.r, chi, f)?;
    emit(out, &algebra_to_json(&alg)?)
}

fn verma_cmd(a: &VermaArgs) -> Result<()> {
    let f = field_of(&a.level)?;
    let chi = PCharacter::parse(&a.chi.chi, &f)?;
    let digits = parse_digits(a.p_digits.as_deref(), a.level.p, a.level.r)?;
    let ctx = ChiContext::new(a.level.r, &chi, &f)?;
    let pi = ctx
        .simples
        .iter()
        .position(|s| s.digits == digits)
        .ok_or_else(|| anyhow!(hyperdef::Error::Parse(format!("no simple with digits {digits:?}"))))?;
    if a.lambda >= ctx.lambdas.len() {
        bail!(hyperdef::Error::Parse(format!("--lambda {} out of range 0..{}", a.lambda, ctx.lambdas.len())));
    }
    let z = ctx.teenage_verma(pi, a.lambda)?;
    emit(a.out.as_deref(), &representation_to_json(&z)?)
}

fn irr_cmd(a: &IrrArgs) -> Result<()> {
    let f = field_of(&a.level)?;
    let chi = PCharacter::parse(&a.chi.chi, &f)?;
    let ctx = ChiContext::new(a.level.r, &chi, &f)?;
    let en = ctx.enumerate_irreducibles(a.seed)?;
    let cd = center(&ctx.ur)?;
    let mut rows = Vec::new();
    for (id, c) in en.classes.iter().enumerate() {
        let report = ctx.central_character_check(&c.pair, &cd)?;
        let fingerprint: Vec<String> = report.fingerprint.iter().map(|&x| ctx.field.format(x)).collect();
        rows.push((id, c, fingerprint));
    }
    let text = match a.format {
        Format::Json => {
            let table: Vec<Value> = rows
                .iter()
                .map(|(id, c, fp)| {
                    json!({
                        "class": id,
                        "dim_m": c.pair.m.dim,
                        "dim_p": c.pair.p_dim,
                        "p_digits": c.pair.p_digits,
                        "dim_n": c.pair.n.dim,
                        "fingerprint": fp,
                    })
                })
                .collect();
            serde_json::to_string_pretty(&json!({
                "field": format!("F_{}", ctx.field.order()),
                "chi": ctx.chi_input.format(&ctx.field),
                "classes": table,
            }))?
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["class", "dim_m", "dim_p", "p_digits", "dim_n", "fingerprint"])?;
            for (id, c, fp) in &rows {
                let digits: Vec<String> = c.pair.p_digits.iter().map(u32::to_string).collect();
                w.write_record([
                    id.to_string(),
                    c.pair.m.dim.to_string(),
                    c.pair.p_dim.to_string(),
                    digits.join(" "),
                    c.pair.n.dim.to_string(),
                    fp.join(" "),
                ])?;
            }
            String::from_utf8(w.into_inner()?)?
        }
    };
    emit(a.out.as_deref(), &text)
}

/// Returns whether every check passed or was skipped.
fn verify_cmd(a: &VerifyArgs) -> Result<bool> {
    let grid = GridConfig::parse(&a.grid)?;
    let bundle = run_suite(&grid)?;
    let text = match a.format {
        Format::Json => serde_json::to_string_pretty(&bundle)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["id", "p", "r", "verdict"])?;
            for row in bundle.summary_rows() {
                w.write_record(&row)?;
            }
            String::from_utf8(w.into_inner()?)?
        }
    };
    write_atomic(&a.out, text.as_bytes())?;
    let s = &bundle.summary;
    println!("{} checks: {} pass, {} fail, {} skipped", s.total, s.pass, s.fail, s.skipped);
    for c in bundle.checks.iter().filter(|c| c.verdict == hyperdef::verify::Verdict::Fail) {
        eprintln!("FAIL {} at p={} r={}", c.id, c.params["p"], c.params["r"]);
    }
    Ok(!bundle.any_failed())
}

fn run(cli: Cli) -> Result<bool> {
    match &cli.command {
        Command::Dist { command: DistCommand::Dump { level, out } } => dist_cmd(level, out.as_deref())?,
        Command::Algebra { command: AlgebraCommand::Build { level, chi, out } } => algebra_cmd(level, chi, out.as_deref())?,
        Command::Verma(a) => verma_cmd(a)?,
        Command::Irr(a) => irr_cmd(a)?,
        Command::Verify(a) => return verify_cmd(a),
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => match e.downcast_ref::<hyperdef::Error>() {
            Some(he) => {
                eprintln!("error[{}]: {he}", he.code());
                ExitCode::from(if he.is_usage() { 2 } else { 1 })
            }
            None => {
                eprintln!("error[E_IO]: {e:#}");
                ExitCode::from(1)
            }
        },
    }
}
