//! Command-line surface over the tpslab library.
//!
//! Data goes to stdout (or `--out`); diagnostics go to stderr. Exit codes:
//! 0 success, 1 I/O failure, 2 invalid input, 3 numerical-quality failure
//! (non-convergence or ambiguous clustering under `--strict`), 4 selftest
//! failure.

use std::f64::consts::FRAC_PI_2;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use tpslab::entangle::{canonical_probe_family, entropy_trajectory, DEFAULT_HAAR_PROBES};
use tpslab::lab::{
    parse_initial_state, persist_report, preset_factor_dims, preset_matrix, qudit_table,
    run_dimension_scan, run_experiment, run_selftests, ExperimentConfig, TimeGrid,
};
use tpslab::numkernel::rank::{commutation_map, nullspace_dim_with_scale, RANK_TOL};
use tpslab::numkernel::{stream_from_seed, ComplexMatrix};
use tpslab::spectrum::{cluster_spectrum, cluster_spectrum_auto, Hamiltonian};
use tpslab::tps::{
    algebra_sets_equal, certify_nonequivalence, check_tps_conditions, dimension_ledger,
    local_unitary_group_dimension, standard_tps, TensorProductStructure, CERT_THRESHOLD,
};
use tpslab::{Error, Result};

#[derive(Parser)]
#[command(name = "tpslab", version, about = "Numerical laboratory for Hamiltonian symmetries and tensor product structures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Dimension-ledger arithmetic: one tuple, a qudit scaling table, or an
    /// exhaustive factorization scan.
    Dims {
        /// Factor dimensions, comma separated (e.g. 2,2,3).
        #[arg(long, value_delimiter = ',', conflicts_with_all = ["table", "scan"])]
        factors: Option<Vec<usize>>,
        /// Scaling table: qudit dimension and maximal site count.
        #[arg(long, num_args = 2, value_names = ["D", "N_MAX"], conflicts_with = "scan")]
        table: Option<Vec<usize>>,
        /// Scan every factorization of every total dimension up to this.
        #[arg(long)]
        scan: Option<usize>,
        /// Cross-check the ledger against the numeric group dimension
        /// (with --factors only).
        #[arg(long)]
        verify_rank: bool,
        /// Write output here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cluster a Hamiltonian's spectrum and report its commutant dimensions.
    Commutant {
        /// JSON file holding the matrix.
        #[arg(long)]
        hamiltonian: PathBuf,
        /// Absolute eigenvalue clustering tolerance; default scales with the
        /// spectral norm.
        #[arg(long)]
        cluster_tol: Option<f64>,
        /// Also compute the commutant dimension from the nullspace of the
        /// vectorized commutation map (costly beyond dimension ~20).
        #[arg(long)]
        verify_oracle: bool,
        /// Fail (exit 3) instead of warning when clustering is ambiguous.
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify the defining algebra conditions of a serialized structure.
    TpsCheck {
        /// JSON file holding {"factor_dims": .., "frame": ..}.
        #[arg(long)]
        tps: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Push the computational structure around a Hamiltonian's commutant and
    /// certify which samples land on nonequivalent structures.
    Orbit {
        #[arg(long)]
        hamiltonian: PathBuf,
        /// Factor dimensions of the reference structure.
        #[arg(long, value_delimiter = ',', required = true)]
        factors: Vec<usize>,
        /// Seed for commutant samples and probe states.
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, default_value_t = CERT_THRESHOLD)]
        threshold: f64,
        #[arg(long, default_value_t = DEFAULT_HAAR_PROBES)]
        haar_probes: usize,
        #[arg(long)]
        cluster_tol: Option<f64>,
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a configured experiment and persist its records.
    Counterexamples {
        /// JSON experiment configuration.
        #[arg(long)]
        config: PathBuf,
        /// Root directory for run records.
        #[arg(long, default_value = "runs")]
        out: PathBuf,
    },
    /// Entropies and product residual of an evolving state, against the
    /// computational structure.
    EntropyTrajectory {
        /// Named Hamiltonian (ising2, local2, heisenberg2, gue(N)).
        #[arg(long, conflicts_with = "hamiltonian")]
        preset: Option<String>,
        /// JSON file holding the matrix.
        #[arg(long)]
        hamiltonian: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', required = true)]
        factors: Vec<usize>,
        /// Initial state: basis:K, uniform, or haar.
        #[arg(long, default_value = "basis:0")]
        state: String,
        /// start:stop:count, endpoints inclusive.
        #[arg(long)]
        t_grid: Option<String>,
        /// Required when the Hamiltonian or state involves random draws.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run built-in health checks; exits 4 on any failure.
    Selftest,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Dims { factors, table, scan, verify_rank, out } => {
            cmd_dims(factors, table, scan, verify_rank, out.as_deref())?
        }
        Command::Commutant { hamiltonian, cluster_tol, verify_oracle, strict, out } => {
            cmd_commutant(&hamiltonian, cluster_tol, verify_oracle, strict, out.as_deref())?
        }
        Command::TpsCheck { tps, out } => cmd_tps_check(&tps, out.as_deref())?,
        Command::Orbit {
            hamiltonian,
            factors,
            seed,
            samples,
            threshold,
            haar_probes,
            cluster_tol,
            strict,
            out,
        } => cmd_orbit(
            &hamiltonian,
            &factors,
            seed,
            samples,
            threshold,
            haar_probes,
            cluster_tol,
            strict,
            out.as_deref(),
        )?,
        Command::Counterexamples { config, out } => cmd_counterexamples(&config, &out)?,
        Command::EntropyTrajectory {
            preset,
            hamiltonian,
            factors,
            state,
            t_grid,
            seed,
            format,
            out,
        } => cmd_trajectory(
            preset.as_deref(),
            hamiltonian.as_deref(),
            &factors,
            &state,
            t_grid.as_deref(),
            seed,
            format,
            out.as_deref(),
        )?,
        Command::Selftest => return cmd_selftest(),
    }
    Ok(ExitCode::SUCCESS)
}

// -- Output helpers ------------------------------------------------------------

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, text)?;
            Ok(())
        }
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

/// Serializes a report with the tool version stamped alongside it.
fn emit_json<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    let mut wrapped = serde_json::to_value(value)?;
    if let Some(obj) = wrapped.as_object_mut() {
        obj.insert(
            "version".to_string(),
            serde_json::Value::String(env!("CARGO_PKG_VERSION").to_string()),
        );
    }
    emit(&serde_json::to_string_pretty(&wrapped)?, out)
}

fn read_matrix(path: &Path) -> Result<ComplexMatrix> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn cluster(matrix: &ComplexMatrix, cluster_tol: Option<f64>, strict: bool) -> Result<Hamiltonian> {
    let h = match cluster_tol {
        Some(tol) => cluster_spectrum(matrix, tol)?,
        None => cluster_spectrum_auto(matrix)?,
    };
    if h.is_ambiguous() {
        if strict {
            h.require_unambiguous()?;
        } else {
            eprintln!(
                "warning: eigenvalue clustering is tolerance-sensitive (witness {:.3e}, tol {:.3e}); pass --cluster-tol to pin it or --strict to fail",
                h.ambiguity_witness().unwrap_or(f64::NAN),
                h.cluster_tol()
            );
        }
    }
    Ok(h)
}

fn parse_t_grid(spec: Option<&str>) -> Result<TimeGrid> {
    let Some(spec) = spec else {
        return Ok(TimeGrid { start: 0.0, stop: FRAC_PI_2, count: 21 });
    };
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::InvalidInput(format!(
            "bad t-grid '{spec}': expected start:stop:count"
        )));
    }
    let start: f64 = parts[0]
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad t-grid start '{}'", parts[0])))?;
    let stop: f64 = parts[1]
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad t-grid stop '{}'", parts[1])))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad t-grid count '{}'", parts[2])))?;
    Ok(TimeGrid { start, stop, count })
}

// -- Subcommands ----------------------------------------------------------------

#[derive(Serialize)]
struct LedgerOutput {
    #[serde(flatten)]
    ledger: tpslab::tps::DimensionLedger,
    #[serde(skip_serializing_if = "Option::is_none")]
    numeric_local_unitary_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rank_agrees: Option<bool>,
}

fn cmd_dims(
    factors: Option<Vec<usize>>,
    table: Option<Vec<usize>>,
    scan: Option<usize>,
    verify_rank: bool,
    out: Option<&Path>,
) -> Result<()> {
    if let Some(dims) = factors {
        let ledger = dimension_ledger(&dims)?;
        let (numeric, agrees) = if verify_rank {
            let numeric = local_unitary_group_dimension(&standard_tps(&dims)?)?;
            (Some(numeric), Some(numeric == ledger.local_unitary_dim))
        } else {
            (None, None)
        };
        return emit_json(
            &LedgerOutput { ledger, numeric_local_unitary_dim: numeric, rank_agrees: agrees },
            out,
        );
    }
    if let Some(spec) = table {
        let (d, n_max) = (spec[0], spec[1]);
        let rows = qudit_table(d, n_max)?;
        let mut text = String::from("n,local_unitary_dim,commutant_dim_nondegenerate,exponential_dominates\n");
        for r in &rows {
            text.push_str(&format!(
                "{},{},{},{}\n",
                r.n, r.local_unitary_dim, r.commutant_dim_nondegenerate, r.exponential_dominates
            ));
        }
        return emit(text.trim_end(), out);
    }
    if let Some(max_dim) = scan {
        return emit_json(&run_dimension_scan(max_dim)?, out);
    }
    Err(Error::InvalidInput(
        "dims needs one of --factors, --table, or --scan".into(),
    ))
}

#[derive(Serialize)]
struct CommutantOutput {
    multiplicities: Vec<usize>,
    dimension: usize,
    torus_dimension: usize,
    cluster_values: Vec<f64>,
    cluster_tol: f64,
    ambiguous: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    ambiguity_witness: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_dimension: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_agrees: Option<bool>,
}

fn cmd_commutant(
    path: &Path,
    cluster_tol: Option<f64>,
    verify_oracle: bool,
    strict: bool,
    out: Option<&Path>,
) -> Result<()> {
    let matrix = read_matrix(path)?;
    let h = cluster(&matrix, cluster_tol, strict)?;
    let desc = h.commutant();
    let (oracle, agrees) = if verify_oracle {
        let numeric = nullspace_dim_with_scale(&commutation_map(&matrix)?, RANK_TOL, matrix.max_abs());
        (Some(numeric), Some(numeric == desc.dimension))
    } else {
        (None, None)
    };
    emit_json(
        &CommutantOutput {
            multiplicities: desc.multiplicities,
            dimension: desc.dimension,
            torus_dimension: desc.torus_dimension,
            cluster_values: h.cluster_values(),
            cluster_tol: h.cluster_tol(),
            ambiguous: h.is_ambiguous(),
            ambiguity_witness: h.ambiguity_witness(),
            oracle_dimension: oracle,
            oracle_agrees: agrees,
        },
        out,
    )
}

fn cmd_tps_check(path: &Path, out: Option<&Path>) -> Result<()> {
    let text = fs::read_to_string(path)?;
    let tps: TensorProductStructure = serde_json::from_str(&text)?;
    let report = check_tps_conditions(&tps)?;
    emit_json(&report, out)
}

#[derive(Serialize)]
struct OrbitSample {
    index: usize,
    algebras_unchanged: bool,
    certified: bool,
    max_discrepancy: f64,
    witness_probe: Option<usize>,
}

#[derive(Serialize)]
struct OrbitOutput {
    factor_dims: Vec<usize>,
    multiplicities: Vec<usize>,
    commutant_dimension: usize,
    local_torus_dim: usize,
    torus_surplus: usize,
    ambiguous: bool,
    threshold: f64,
    probe_count: usize,
    sample_count: usize,
    moved_count: usize,
    certified_count: usize,
    samples: Vec<OrbitSample>,
}

#[allow(clippy::too_many_arguments)]
fn cmd_orbit(
    path: &Path,
    factors: &[usize],
    seed: u64,
    samples: usize,
    threshold: f64,
    haar_probes: usize,
    cluster_tol: Option<f64>,
    strict: bool,
    out: Option<&Path>,
) -> Result<()> {
    let matrix = read_matrix(path)?;
    let tps = standard_tps(factors)?;
    if matrix.dim() != tps.dim() {
        return Err(Error::DimensionMismatch(format!(
            "hamiltonian is {}x{} but the factor dimensions multiply to {}",
            matrix.rows(),
            matrix.cols(),
            tps.dim()
        )));
    }
    let h = cluster(&matrix, cluster_tol, strict)?;
    let ledger = dimension_ledger(factors)?;
    let mut rng = stream_from_seed(seed);
    let probes = canonical_probe_family(tps.dim(), haar_probes, &mut rng)?;

    let mut rows = Vec::with_capacity(samples);
    let mut moved = 0usize;
    let mut certified = 0usize;
    for index in 0..samples {
        let s = h.sample_commuting_unitary(&mut rng);
        let pushed = tps.transform(&s)?;
        let unchanged = algebra_sets_equal(&tps, &pushed)?;
        let cert = certify_nonequivalence(&tps, &pushed, &probes, threshold)?;
        if !unchanged {
            moved += 1;
        }
        if cert.certified {
            certified += 1;
        }
        rows.push(OrbitSample {
            index,
            algebras_unchanged: unchanged,
            certified: cert.certified,
            max_discrepancy: cert.max_discrepancy,
            witness_probe: cert.witness_probe,
        });
    }

    emit_json(
        &OrbitOutput {
            factor_dims: factors.to_vec(),
            multiplicities: h.multiplicities(),
            commutant_dimension: h.commutant().dimension,
            local_torus_dim: ledger.local_torus_dim,
            torus_surplus: ledger.torus_surplus,
            ambiguous: h.is_ambiguous(),
            threshold,
            probe_count: probes.len(),
            sample_count: samples,
            moved_count: moved,
            certified_count: certified,
            samples: rows,
        },
        out,
    )
}

fn cmd_counterexamples(config_path: &Path, out_root: &Path) -> Result<()> {
    let text = fs::read_to_string(config_path)?;
    let config = ExperimentConfig::from_json(&text)?;
    let report = run_experiment(&config)?;
    let dir = persist_report(&report, &config, out_root)?;
    eprintln!("records written to {}", dir.display());
    // Pretty-print the same payload that was persisted.
    let value: serde_json::Value = serde_json::from_str(&report.to_json_string()?)?;
    emit_json(&value, None)
}

#[allow(clippy::too_many_arguments)]
fn cmd_trajectory(
    preset: Option<&str>,
    hamiltonian: Option<&Path>,
    factors: &[usize],
    state: &str,
    t_grid: Option<&str>,
    seed: Option<u64>,
    format: Format,
    out: Option<&Path>,
) -> Result<()> {
    let tps = standard_tps(factors)?;
    let needs_seed =
        preset.is_some_and(|p| p.starts_with("gue(")) || state == "haar";
    if needs_seed && seed.is_none() {
        return Err(Error::InvalidInput(
            "--seed is required when the Hamiltonian or state is random".into(),
        ));
    }
    let mut rng = stream_from_seed(seed.unwrap_or(0));

    let matrix = match (preset, hamiltonian) {
        (Some(name), None) => {
            if let Some(natural) = preset_factor_dims(name) {
                if natural.iter().product::<usize>() != tps.dim() {
                    return Err(Error::DimensionMismatch(format!(
                        "preset '{name}' lives on dimension {}, factors give {}",
                        natural.iter().product::<usize>(),
                        tps.dim()
                    )));
                }
            }
            preset_matrix(name, &mut rng)?
        }
        (None, Some(path)) => read_matrix(path)?,
        _ => {
            return Err(Error::InvalidInput(
                "exactly one of --preset or --hamiltonian is required".into(),
            ))
        }
    };
    if matrix.dim() != tps.dim() {
        return Err(Error::DimensionMismatch(format!(
            "hamiltonian is {}x{} but the factor dimensions multiply to {}",
            matrix.rows(),
            matrix.cols(),
            tps.dim()
        )));
    }

    let h = cluster_spectrum_auto(&matrix)?;
    let initial = parse_initial_state(state, tps.dim(), &mut rng)?;
    let times = parse_t_grid(t_grid)?.times()?;
    let points = entropy_trajectory(&initial, &h, &tps, &times)?;

    match format {
        Format::Json => emit(&serde_json::to_string_pretty(&points)?, out),
        Format::Csv => {
            let n = factors.len();
            let mut text = String::from("t,product_residual");
            for j in 0..n {
                text.push_str(&format!(",s_{j}"));
            }
            for j in 0..n {
                for k in (j + 1)..n {
                    text.push_str(&format!(",mi_{j}_{k}"));
                }
            }
            text.push('\n');
            for p in &points {
                text.push_str(&format!("{},{}", p.t, p.product_residual));
                for s in &p.profile.per_factor {
                    text.push_str(&format!(",{s}"));
                }
                for m in &p.profile.pair_mutual_information {
                    text.push_str(&format!(",{}", m.value));
                }
                text.push('\n');
            }
            emit(text.trim_end(), out)
        }
    }
}

fn cmd_selftest() -> Result<ExitCode> {
    let results = run_selftests();
    let mut any_failed = false;
    for r in &results {
        let mark = if r.ok { "ok" } else { "FAIL" };
        println!("[{mark}] {}: {}", r.name, r.detail);
        if !r.ok {
            any_failed = true;
        }
    }
    if any_failed {
        eprintln!("selftest failed");
        Ok(ExitCode::from(4))
    } else {
        println!("all {} checks passed", results.len());
        Ok(ExitCode::SUCCESS)
    }
}
