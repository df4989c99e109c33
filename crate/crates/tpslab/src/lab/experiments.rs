//! Experiment drivers: the dimension-ledger scan, the qudit scaling table,
//! counterexample families generated from a Hamiltonian's own symmetries,
//! and the entangling-evolution contradiction.

use std::f64::consts::FRAC_PI_2;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use serde::Serialize;

use crate::entangle::{
    canonical_probe_family, default_separability_tol, entropy_trajectory, product_residual,
    DensityState,
};
use crate::error::{Error, Result};
use crate::numkernel::matrix::ComplexMatrix;
use crate::numkernel::random::{haar_state_vector, haar_unitary, stream_from_seed, RngStream};
use crate::spectrum::{cluster_spectrum, cluster_spectrum_auto, Hamiltonian};
use crate::tps::{
    algebra_sets_equal, certify_nonequivalence, dimension_ledger, enumerate_factorizations,
    standard_tps,
};

use super::config::{ExperimentConfig, ExperimentKind};
use super::record::RunWriter;

/// Product residual above which an evolution counts as entangling.
pub const ENTANGLING_RESIDUAL: f64 = 0.1;

// -- Ledger sweeps -------------------------------------------------------------

/// Result of sweeping the dimension ledger over every factorization of every
/// total dimension up to a bound.
#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub max_dim: usize,
    pub tuples_checked: usize,
    /// Smallest symmetry surplus seen, with a witness tuple.
    pub min_surplus: usize,
    pub min_surplus_dims: Vec<usize>,
    /// True when every factorization left a strictly positive surplus.
    pub all_positive: bool,
}

/// Evaluates the ledger for every nontrivial factorization (at least two
/// factors of dimension at least two) of every total dimension `4..=max_dim`.
pub fn run_dimension_scan(max_dim: usize) -> Result<ScanReport> {
    let mut tuples_checked = 0usize;
    let mut min_surplus = usize::MAX;
    let mut min_surplus_dims = Vec::new();
    for total in 4..=max_dim {
        for dims in enumerate_factorizations(total) {
            let ledger = dimension_ledger(&dims)?;
            tuples_checked += 1;
            if ledger.torus_surplus < min_surplus {
                min_surplus = ledger.torus_surplus;
                min_surplus_dims = dims;
            }
        }
    }
    if tuples_checked == 0 {
        return Err(Error::InvalidInput(format!(
            "no factorization with at least two factors exists up to dimension {max_dim}"
        )));
    }
    Ok(ScanReport {
        max_dim,
        tuples_checked,
        min_surplus,
        min_surplus_dims,
        all_positive: min_surplus > 0,
    })
}

/// One row of the homogeneous-qudit scaling table.
#[derive(Debug, Clone, Serialize)]
pub struct QuditTableRow {
    pub n: usize,
    /// `n (d^2 - 1) + 1`, linear in the number of sites.
    pub local_unitary_dim: usize,
    /// `d^n`, the commutant dimension of a nondegenerate Hamiltonian.
    pub commutant_dim_nondegenerate: usize,
    /// True once the exponential count overtakes the linear one.
    pub exponential_dominates: bool,
}

/// The scaling table for `n = 1..=n_max` sites of dimension `d`.
pub fn qudit_table(d: usize, n_max: usize) -> Result<Vec<QuditTableRow>> {
    (1..=n_max)
        .map(|n| {
            let ledger = dimension_ledger(&vec![d; n])?;
            Ok(QuditTableRow {
                n,
                local_unitary_dim: ledger.local_unitary_dim,
                commutant_dim_nondegenerate: ledger.commutant_dim_nondegenerate,
                exponential_dominates: ledger.commutant_dim_nondegenerate
                    > ledger.local_unitary_dim,
            })
        })
        .collect()
}

// -- Shared run plumbing ---------------------------------------------------------

fn clustered_hamiltonian(
    config: &ExperimentConfig,
    matrix: &ComplexMatrix,
) -> Result<Hamiltonian> {
    match config.cluster_tol {
        Some(tol) => cluster_spectrum(matrix, tol),
        None => cluster_spectrum_auto(matrix),
    }
}

/// Resolves an initial-state spec: `basis:K`, `uniform`, or `haar`.
pub fn parse_initial_state(spec: &str, dim: usize, rng: &mut RngStream) -> Result<DensityState> {
    if spec == "uniform" {
        return DensityState::pure_state(&vec![num_complex::Complex64::ONE; dim]);
    }
    if spec == "haar" {
        return DensityState::pure_state(&haar_state_vector(dim, rng));
    }
    if let Some(k) = spec.strip_prefix("basis:") {
        let k: usize = k
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad basis index in '{spec}'")))?;
        return DensityState::basis_state(dim, k);
    }
    Err(Error::InvalidInput(format!(
        "unknown initial state '{spec}'; expected basis:K, uniform, or haar"
    )))
}

/// A uniformly random permutation that moves factors only between positions
/// of equal dimension, via within-group shuffles.
fn random_dims_preserving_permutation(dims: &[usize], rng: &mut RngStream) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..dims.len()).collect();
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for (pos, &d) in dims.iter().enumerate() {
        groups.entry(d).or_default().push(pos);
    }
    for positions in groups.values() {
        let mut shuffled = positions.clone();
        shuffled.shuffle(rng);
        for (&slot, &src) in positions.iter().zip(&shuffled) {
            perm[slot] = src;
        }
    }
    perm
}

// -- Counterexample families -----------------------------------------------------

/// Verdict on a single transformed structure.
#[derive(Debug, Clone, Serialize)]
pub struct TransformOutcome {
    pub index: usize,
    pub label: String,
    /// Whether the factor algebras survived the transform as sets.
    pub algebras_unchanged: bool,
    pub certified: bool,
    pub max_discrepancy: f64,
    pub witness_probe: Option<usize>,
}

/// Outcome of a counterexample-family run.
#[derive(Debug, Clone, Serialize)]
pub struct FamilyReport {
    pub kind: String,
    pub seed: u64,
    pub factor_dims: Vec<usize>,
    pub hamiltonian: String,
    pub multiplicities: Vec<usize>,
    pub commutant_dimension: usize,
    pub ambiguous_clustering: bool,
    pub entropy_threshold: f64,
    pub probe_count: usize,
    /// Structures generated from spectrum-preserving transforms.
    pub family: Vec<TransformOutcome>,
    pub certified_count: usize,
    pub family_size: usize,
    /// True when at least 80 percent of the family was certified.
    pub success: bool,
    /// Equivalent-by-construction structures that must never certify.
    pub controls: Vec<TransformOutcome>,
    pub control_false_positives: usize,
}

/// Builds a family of structures by applying spectrum-preserving unitaries
/// (evolution operators and commutant samples) to the computational
/// structure, then certifies each against the original. Local-unitary and
/// permutation controls ride along as a false-positive check.
pub fn run_family(config: &ExperimentConfig) -> Result<FamilyReport> {
    let mut rng = stream_from_seed(config.seed);
    let tps = standard_tps(&config.factor_dims)?;
    let dim = tps.dim();
    let matrix = config.hamiltonian.materialize(dim, &mut rng)?;
    let h = clustered_hamiltonian(config, &matrix)?;
    let probes = canonical_probe_family(dim, config.haar_probes, &mut rng)?;

    let family_size = config.transforms;
    let evolution_slots = family_size.div_ceil(2);
    let times: Vec<f64> = match &config.t_grid {
        Some(grid) => {
            let interior: Vec<f64> =
                grid.times()?.into_iter().filter(|t| t.abs() > 1e-12).collect();
            if interior.is_empty() {
                return Err(Error::InvalidInput(
                    "time grid provides no nonzero evolution times".into(),
                ));
            }
            (0..evolution_slots).map(|k| interior[k % interior.len()]).collect()
        }
        None => (0..evolution_slots)
            .map(|k| (k + 1) as f64 * FRAC_PI_2 / (evolution_slots + 1) as f64)
            .collect(),
    };

    let judge = |index: usize,
                     label: String,
                     transform: &ComplexMatrix|
      -> Result<TransformOutcome> {
        let moved = tps.transform(transform)?;
        let cert = certify_nonequivalence(&tps, &moved, &probes, config.entropy_threshold)?;
        Ok(TransformOutcome {
            index,
            label,
            algebras_unchanged: algebra_sets_equal(&tps, &moved)?,
            certified: cert.certified,
            max_discrepancy: cert.max_discrepancy,
            witness_probe: cert.witness_probe,
        })
    };

    let mut family = Vec::with_capacity(family_size);
    for (k, &t) in times.iter().enumerate() {
        let u = h.evolution_operator(t);
        family.push(judge(k, format!("evolution t={t:.6}"), &u)?);
    }
    for k in evolution_slots..family_size {
        let s = h.sample_commuting_unitary(&mut rng);
        family.push(judge(k, format!("commutant sample {}", k - evolution_slots), &s)?);
    }
    let certified_count = family.iter().filter(|o| o.certified).count();

    let mut controls = Vec::with_capacity(config.controls);
    for c in 0..config.controls {
        let blocks: Vec<ComplexMatrix> = config
            .factor_dims
            .iter()
            .map(|&d| haar_unitary(d, &mut rng))
            .collect();
        let perm = random_dims_preserving_permutation(&config.factor_dims, &mut rng);
        let s = &tps.local_unitary(&blocks)? * &tps.factor_permutation(&perm)?;
        controls.push(judge(c, format!("local unitary x permutation {c}"), &s)?);
    }
    let control_false_positives = controls.iter().filter(|o| o.certified).count();

    Ok(FamilyReport {
        kind: ExperimentKind::CounterexampleFamily.as_str().to_string(),
        seed: config.seed,
        factor_dims: config.factor_dims.clone(),
        hamiltonian: config.hamiltonian.label(),
        multiplicities: h.multiplicities(),
        commutant_dimension: h.commutant().dimension,
        ambiguous_clustering: h.is_ambiguous(),
        entropy_threshold: config.entropy_threshold,
        probe_count: probes.len(),
        family,
        certified_count,
        family_size,
        success: certified_count * 5 >= family_size * 4,
        controls,
        control_false_positives,
    })
}

// -- Entangling contradiction ------------------------------------------------------

/// Outcome of an entangling-contradiction run.
#[derive(Debug, Clone, Serialize)]
pub struct EntanglingReport {
    pub kind: String,
    pub seed: u64,
    pub factor_dims: Vec<usize>,
    pub hamiltonian: String,
    pub initial_state: String,
    pub multiplicities: Vec<usize>,
    pub ambiguous_clustering: bool,
    pub times: Vec<f64>,
    /// Row per time point, column per factor.
    pub per_factor_entropies: Vec<Vec<f64>>,
    /// Row per time point, column per factor pair in (0,1), (0,2), .. order.
    pub mutual_information: Vec<Vec<f64>>,
    pub product_residuals: Vec<f64>,
    pub max_residual: f64,
    pub argmax_t: f64,
    pub separability_tol: f64,
    /// True when the state stayed a product at every sampled time.
    pub persists: bool,
    /// True when the residual exceeded the entangling threshold somewhere.
    pub entangling: bool,
    /// True when the initial state is (near) maximally mixed, which makes
    /// the probe blind: such a state never evolves at all.
    pub degenerate_probe: bool,
    pub verdict: String,
}

/// Evolves a product state and tracks how far it leaves the product manifold
/// of the computational structure. An evolution that entangles here cannot
/// be relabeled into one that preserves separability, so any structure with
/// that property is nonequivalent.
pub fn run_entangling(config: &ExperimentConfig) -> Result<EntanglingReport> {
    let mut rng = stream_from_seed(config.seed);
    let tps = standard_tps(&config.factor_dims)?;
    let dim = tps.dim();
    let matrix = config.hamiltonian.materialize(dim, &mut rng)?;
    let h = clustered_hamiltonian(config, &matrix)?;
    let initial = parse_initial_state(&config.initial_state, dim, &mut rng)?;

    let tol = default_separability_tol(dim);
    let initial_residual = product_residual(&initial, &tps)?;
    if initial_residual > tol {
        return Err(Error::NotProductState { residual: initial_residual, tol });
    }

    let times = config
        .t_grid
        .unwrap_or(super::config::TimeGrid { start: 0.0, stop: FRAC_PI_2, count: 21 })
        .times()?;
    let trajectory = entropy_trajectory(&initial, &h, &tps, &times)?;

    let per_factor_entropies: Vec<Vec<f64>> =
        trajectory.iter().map(|p| p.profile.per_factor.clone()).collect();
    let mutual_information: Vec<Vec<f64>> = trajectory
        .iter()
        .map(|p| p.profile.pair_mutual_information.iter().map(|m| m.value).collect())
        .collect();
    let product_residuals: Vec<f64> =
        trajectory.iter().map(|p| p.product_residual).collect();

    let (mut max_residual, mut argmax_t) = (initial_residual, times.first().copied().unwrap_or(0.0));
    for (t, &r) in times.iter().zip(&product_residuals) {
        if r > max_residual {
            max_residual = r;
            argmax_t = *t;
        }
    }

    let maximally_mixed = ComplexMatrix::identity(dim).scale(num_complex::Complex64::new(
        1.0 / dim as f64,
        0.0,
    ));
    let degenerate_probe =
        (initial.matrix() - &maximally_mixed).frobenius_norm() < 1e-9;

    let entangling = max_residual > ENTANGLING_RESIDUAL;
    let verdict = if degenerate_probe {
        "the probe state is maximally mixed and cannot move; this run separates nothing".to_string()
    } else if entangling {
        format!(
            "the evolution entangles this structure's factors (residual {max_residual:.6} at t={argmax_t:.6}); a structure in which the same evolution preserves separability cannot be a relabeling of this one"
        )
    } else {
        format!(
            "no residual above {ENTANGLING_RESIDUAL} was observed; this run does not separate structures"
        )
    };

    Ok(EntanglingReport {
        kind: ExperimentKind::EntanglingContradiction.as_str().to_string(),
        seed: config.seed,
        factor_dims: config.factor_dims.clone(),
        hamiltonian: config.hamiltonian.label(),
        initial_state: config.initial_state.clone(),
        multiplicities: h.multiplicities(),
        ambiguous_clustering: h.is_ambiguous(),
        times,
        per_factor_entropies,
        mutual_information,
        product_residuals,
        max_residual,
        argmax_t,
        separability_tol: tol,
        persists: max_residual <= tol,
        entangling,
        degenerate_probe,
        verdict,
    })
}

// -- Dispatch and persistence ---------------------------------------------------------

/// A finished experiment, ready for serialization.
#[derive(Debug, Clone)]
pub enum ExperimentReport {
    Family(FamilyReport),
    Entangling(EntanglingReport),
}

impl ExperimentReport {
    /// Canonical JSON bytes of the report payload.
    pub fn to_json_string(&self) -> Result<String> {
        Ok(match self {
            ExperimentReport::Family(r) => serde_json::to_string(r)?,
            ExperimentReport::Entangling(r) => serde_json::to_string(r)?,
        })
    }
}

/// Runs the experiment a configuration describes.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    match config.kind {
        ExperimentKind::CounterexampleFamily => Ok(ExperimentReport::Family(run_family(config)?)),
        ExperimentKind::EntanglingContradiction => {
            Ok(ExperimentReport::Entangling(run_entangling(config)?))
        }
    }
}

fn outcome_csv_row(role: &str, o: &TransformOutcome) -> String {
    let witness = o.witness_probe.map(|w| w.to_string()).unwrap_or_default();
    let label = o.label.replace(',', ";");
    format!(
        "{},{role},{label},{},{},{},{witness}",
        o.index, o.algebras_unchanged, o.certified, o.max_discrepancy
    )
}

/// Appends the report to `<out_root>/<run_id>/<seed>/record.jsonl` and
/// writes the kind-specific CSV sidecar. Returns the run directory.
pub fn persist_report(
    report: &ExperimentReport,
    config: &ExperimentConfig,
    out_root: &Path,
) -> Result<PathBuf> {
    let writer = RunWriter::create(out_root, &config.run_id(), config.seed)?;
    match report {
        ExperimentReport::Family(r) => {
            writer.append(r)?;
            let rows: Vec<String> = r
                .family
                .iter()
                .map(|o| outcome_csv_row("family", o))
                .chain(r.controls.iter().map(|o| outcome_csv_row("control", o)))
                .collect();
            writer.write_csv(
                "transforms.csv",
                "index,role,label,algebras_unchanged,certified,max_discrepancy,witness_probe",
                &rows,
            )?;
        }
        ExperimentReport::Entangling(r) => {
            writer.append(r)?;
            let n = r.factor_dims.len();
            let mut header = String::from("t,product_residual");
            for j in 0..n {
                header.push_str(&format!(",s_{j}"));
            }
            for j in 0..n {
                for k in (j + 1)..n {
                    header.push_str(&format!(",mi_{j}_{k}"));
                }
            }
            let rows: Vec<String> = r
                .times
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    let mut row = format!("{t},{}", r.product_residuals[i]);
                    for s in &r.per_factor_entropies[i] {
                        row.push_str(&format!(",{s}"));
                    }
                    for m in &r.mutual_information[i] {
                        row.push_str(&format!(",{m}"));
                    }
                    row
                })
                .collect();
            writer.write_csv("trajectory.csv", &header, &rows)?;
        }
    }
    Ok(writer.dir().to_path_buf())
}
