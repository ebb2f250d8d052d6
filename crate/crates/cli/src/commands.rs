use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use log::{debug, info};
use ncg_core::fermion::{det_identity_residual, fermion_integral};
use ncg_core::fluctuations::{connes_one_form, extract_coefficients, total_fluctuation, FluctuatedDirac, OneFormGenerators};
use ncg_core::geometry::{sample_random_geometry, verify_axioms, AlgebraKind, GeometryError, MatrixGeometry};
use ncg_core::io::{
    axiom_report_to_value, coefficients_to_value, fermion_report_to_value, geometry_to_value, one_form_to_value,
    parse_geometry, parse_one_form, to_canonical_string, write_geometry, OneFormFile, FORMAT_VERSION,
};
use ncg_core::numerics::{determinant, eig_hermitian, Tolerance};
use ncg_core::product::{build_product_triple, ProductTriple};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::{Cli, Command};

/// A finished command: the document to write and the exit status.
struct Outcome {
    value: Value,
    code: u8,
}

impl Outcome {
    fn ok(value: Value) -> Self {
        Self { value, code: 0 }
    }
}

pub fn run(cli: &Cli) -> Result<u8, CliError> {
    let tol = cli.tolerance()?;
    if cli.command == Command::Sample {
        return sample(cli);
    }
    match cli.geometry.as_slice() {
        [] => Err(CliError::Usage(format!("{:?} requires --geometry", cli.command).to_lowercase())),
        [single] => {
            let outcome = run_one(cli, single, tol)?;
            emit(cli.out.as_deref(), &outcome.value)?;
            Ok(outcome.code)
        }
        many => run_batch(cli, many, tol),
    }
}

fn run_batch(cli: &Cli, inputs: &[PathBuf], tol: Tolerance) -> Result<u8, CliError> {
    let dir = cli
        .out
        .as_deref()
        .ok_or_else(|| CliError::Usage("a batch run needs --out DIR".into()))?;
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.unwrap_or(1))
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let results: Vec<Result<u8, CliError>> = pool.install(|| {
        inputs
            .par_iter()
            .enumerate()
            .map(|(k, path)| {
                let outcome = run_one(cli, path, tol)?;
                emit(Some(&batch_target(dir, k, path, cli.command)), &outcome.value)?;
                Ok(outcome.code)
            })
            .collect()
    });
    let mut code = 0;
    for (path, result) in inputs.iter().zip(results) {
        match result {
            Ok(c) => code = code.max(c),
            Err(e) => {
                eprintln!("ncg: {}: {e}", path.display());
                code = code.max(e.exit_code());
            }
        }
    }
    Ok(code)
}

/// `<index>-<stem>.<command>.json` keeps outputs distinct even for inputs
/// sharing a file name.
fn batch_target(dir: &Path, k: usize, input: &Path, command: Command) -> PathBuf {
    let stem = input.file_stem().and_then(|s| s.to_str()).unwrap_or("geometry");
    let cmd = format!("{command:?}").to_lowercase();
    dir.join(format!("{k:03}-{stem}.{cmd}.json"))
}

fn sample(cli: &Cli) -> Result<u8, CliError> {
    if !(cli.scale.is_finite() && cli.scale >= 0.0) {
        return Err(CliError::Usage(format!("--scale must be finite and nonnegative, got {}", cli.scale)));
    }
    let kind = AlgebraKind::new(cli.algebra.into(), cli.n)?;
    let geom = sample_random_geometry(kind, cli.scale, cli.seed)?;
    info!("sampled {}{} with seed {}", kind.tag().symbol(), kind.n(), cli.seed);
    write_text(cli.out.as_deref(), &write_geometry(&geom))?;
    Ok(0)
}

fn run_one(cli: &Cli, path: &Path, tol: Tolerance) -> Result<Outcome, CliError> {
    info!("{:?} {}", cli.command, path.display());
    let text = read(path)?;
    let raw = parse_geometry(&text).map_err(|source| CliError::Format {
        path: path.to_path_buf(),
        source,
    })?;
    if cli.command == Command::Verify {
        return Ok(match raw.validate(tol) {
            Ok(geom) => {
                let report = verify_axioms(&geom, tol);
                debug!("max axiom residual {:e}", report.max_residual());
                Outcome {
                    code: if report.all_pass() { 0 } else { 1 },
                    value: axiom_report_to_value(&report),
                }
            }
            Err(e) => Outcome {
                value: invalid_report(&e),
                code: 1,
            },
        });
    }
    let geom = raw.validate(tol)?;
    let t = build_product_triple(&geom)?;
    let one_form = match &cli.one_form {
        Some(p) => Some(load_one_form(cli, p, t.n())?),
        None => None,
    };
    let fd = fluctuate(&t, one_form.as_ref(), tol)?;
    match cli.command {
        Command::Fluctuate => {
            let form = one_form.ok_or_else(|| CliError::Usage("fluctuate requires --one-form".into()))?;
            fluctuate_bundle(&geom, &t, &form, &fd, tol).map(Outcome::ok)
        }
        Command::Spectrum => spectrum(&t, &fd, tol).map(Outcome::ok),
        Command::Integrate => integrate(&t, &fd, tol).map(Outcome::ok),
        Command::Sample | Command::Verify => unreachable!("handled above"),
    }
}

fn load_one_form(cli: &Cli, path: &Path, n: usize) -> Result<OneFormFile, CliError> {
    let mut form = parse_one_form(&read(path)?, n).map_err(|source| CliError::Format {
        path: path.to_path_buf(),
        source,
    })?;
    if let Some(s) = cli.symmetrize {
        form.symmetrize = s;
    }
    Ok(form)
}

fn fluctuate(t: &ProductTriple, form: Option<&OneFormFile>, tol: Tolerance) -> Result<FluctuatedDirac, CliError> {
    let Some(form) = form else {
        return Ok(FluctuatedDirac::vacuum(t));
    };
    let gen = OneFormGenerators::new(t, &form.pairs)?;
    let coeffs = connes_one_form(t, &gen, form.symmetrize, tol)?;
    Ok(total_fluctuation(t, &coeffs))
}

/// A report for a file whose matrices violate the geometry invariants.
fn invalid_report(e: &GeometryError) -> Value {
    let debug = format!("{e:?}");
    let kind = debug.split(|c: char| !c.is_alphanumeric()).next().unwrap_or_default();
    json!({
        "all_pass": false,
        "error": e.to_string(),
        "error_kind": kind,
    })
}

fn fluctuate_bundle(
    geom: &MatrixGeometry,
    t: &ProductTriple,
    form: &OneFormFile,
    fd: &FluctuatedDirac,
    tol: Tolerance,
) -> Result<Value, CliError> {
    let (_, residual) = extract_coefficients(t, &fd.assembled, tol)?;
    Ok(json!({
        "version": FORMAT_VERSION,
        "geometry": geometry_to_value(geom),
        "one_form": one_form_to_value(form),
        "fluctuated": coefficients_to_value(&fd.coefficients),
        "extraction_residual": residual,
    }))
}

fn spectrum(t: &ProductTriple, fd: &FluctuatedDirac, tol: Tolerance) -> Result<Value, CliError> {
    let d_prime = fd.d_prime(t);
    Ok(json!({
        "spectrum": eig_hermitian(&fd.assembled, tol)?,
        "manifold_spectrum": eig_hermitian(&d_prime, tol)?,
        "manifold_det": determinant(&d_prime)?.re,
    }))
}

fn integrate(t: &ProductTriple, fd: &FluctuatedDirac, tol: Tolerance) -> Result<Value, CliError> {
    let integral = fermion_integral(t, &fd.assembled)?;
    if integral.condition_flag {
        info!("operator is close to singular; Z may be dominated by rounding");
    }
    let residual = det_identity_residual(t, fd)?;
    let spectrum = eig_hermitian(&fd.assembled, tol)?;
    Ok(fermion_report_to_value(&integral, residual, &spectrum))
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(out: Option<&Path>, value: &Value) -> Result<(), CliError> {
    write_text(out, &to_canonical_string(value))
}

/// Writes to a sibling temporary file and renames it into place.
fn write_text(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    let Some(path) = out else {
        print!("{text}");
        return Ok(());
    };
    let io_err = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(text.as_bytes()).map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}
