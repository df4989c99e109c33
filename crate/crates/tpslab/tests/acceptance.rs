//! Acceptance suite: one test per release criterion, each printing a
//! `[PASS] criterion N` line on success. Run with
//! `cargo test --test acceptance -- --nocapture` to see the lines.

use std::f64::consts::{FRAC_PI_4, LN_2, SQRT_2};
use std::time::Instant;

use rand::Rng;

use tpslab::entangle::{entropy_profile, DensityState};
use tpslab::lab::{
    persist_report, qudit_table, run_dimension_scan, run_entangling, run_experiment, run_family,
    read_payload_strings, ExperimentConfig, ExperimentKind, HamiltonianSource,
};
use tpslab::numkernel::{
    c, commutation_map, gue, haar_unitary, hermitian_with_multiplicities, kron,
    nullspace_dim_with_scale,
    pauli_x, stream_from_seed, ComplexMatrix, RngStream, RANK_TOL,
};
use tpslab::spectrum::cluster_spectrum_auto;
use tpslab::tps::{
    certify_nonequivalence, local_unitary_group_dimension, standard_tps, CERT_THRESHOLD,
};

/// Random composition of `dim` with at least one part of size two or more.
fn planted_multiplicities(dim: usize, rng: &mut RngStream) -> Vec<usize> {
    let mut parts = Vec::new();
    let mut remaining = dim;
    while remaining > 0 {
        let cap = remaining.min(4);
        let part = rng.random_range(1..=cap);
        parts.push(part);
        remaining -= part;
    }
    if parts.iter().all(|&m| m == 1) {
        parts.pop();
        parts[0] = 2;
    }
    parts
}

fn family_config(seed: u64, transforms: usize, controls: usize) -> ExperimentConfig {
    ExperimentConfig {
        kind: ExperimentKind::CounterexampleFamily,
        seed,
        factor_dims: vec![2, 2],
        hamiltonian: HamiltonianSource::Preset { preset: "ising2".into() },
        run_id: None,
        transforms,
        controls,
        haar_probes: 8,
        entropy_threshold: CERT_THRESHOLD,
        t_grid: None,
        initial_state: "basis:0".into(),
        cluster_tol: None,
    }
}

#[test]
fn criterion_1_commutant_formula_matches_nullspace_oracle() {
    let started = Instant::now();
    let mut rng = stream_from_seed(0xC0FFEE);
    for trial in 0..100 {
        let dim = 4 + trial % 13;
        let planted = planted_multiplicities(dim, &mut rng);
        let matrix = hermitian_with_multiplicities(&planted, &mut rng).unwrap();

        let h = cluster_spectrum_auto(&matrix).unwrap();
        let mut recovered = h.multiplicities();
        recovered.sort_unstable();
        let mut expected = planted.clone();
        expected.sort_unstable();
        assert_eq!(recovered, expected, "trial {trial}: clustering missed the planted blocks");

        let analytic = h.commutant().dimension;
        let oracle =
            nullspace_dim_with_scale(&commutation_map(&matrix).unwrap(), RANK_TOL, matrix.max_abs());
        assert_eq!(
            analytic, oracle,
            "trial {trial} (dim {dim}, blocks {planted:?}): formula {analytic} vs nullspace {oracle}"
        );
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "oracle sweep took {elapsed:?}");
    println!(
        "[PASS] criterion 1: commutant dimension formula matched the nullspace oracle on 100 seeded Hamiltonians (dims 4..=16) in {elapsed:.2?}"
    );
}

#[test]
fn criterion_2_commutant_dimension_bounds() {
    let mut rng = stream_from_seed(0xB0);
    for trial in 0..40 {
        let dim = 4 + trial % 13;
        let planted = planted_multiplicities(dim, &mut rng);
        let matrix = hermitian_with_multiplicities(&planted, &mut rng).unwrap();
        let d = cluster_spectrum_auto(&matrix).unwrap().commutant().dimension;
        assert!(dim <= d && d <= dim * dim, "dim {dim}: commutant {d} out of bounds");
    }

    // Distinct eigenvalues pin the commutant to its minimum.
    let nondegenerate = gue(6, &mut rng);
    let low = cluster_spectrum_auto(&nondegenerate).unwrap().commutant();
    assert_eq!(low.multiplicities, vec![1; 6]);
    assert_eq!(low.dimension, 6);

    // A single eigenspace (the identity) reaches the maximum.
    let all = cluster_spectrum_auto(&ComplexMatrix::identity(6)).unwrap().commutant();
    assert_eq!(all.dimension, 36);

    println!(
        "[PASS] criterion 2: dim <= commutant dimension <= dim^2 held on 40 samples, with both bounds attained"
    );
}

#[test]
fn criterion_3_torus_gap_positive_on_exhaustive_scan() {
    let started = Instant::now();
    let report = run_dimension_scan(64).unwrap();
    let elapsed = started.elapsed();
    assert!(report.tuples_checked > 0);
    assert!(report.all_positive, "a factorization closed the torus gap: {report:?}");
    assert!(report.min_surplus >= 1);
    assert!(elapsed.as_secs_f64() < 5.0, "scan took {elapsed:?}");
    println!(
        "[PASS] criterion 3: torus surplus positive on all {} factorizations of dims 4..=64 (min {} at {:?}) in {elapsed:.2?}",
        report.tuples_checked, report.min_surplus, report.min_surplus_dims
    );
}

#[test]
fn criterion_4_qubit_scaling_table() {
    let rows = qudit_table(2, 12).unwrap();
    assert_eq!(rows.len(), 12);
    for r in &rows {
        assert_eq!(r.local_unitary_dim, 3 * r.n + 1, "n = {}", r.n);
        assert_eq!(r.commutant_dim_nondegenerate, 1usize << r.n, "n = {}", r.n);
        assert_eq!(r.exponential_dominates, r.n >= 4, "n = {}", r.n);
    }
    for n in 1..=6usize {
        let tps = standard_tps(&vec![2; n]).unwrap();
        let numeric = local_unitary_group_dimension(&tps).unwrap();
        assert_eq!(numeric, 3 * n + 1, "numeric rank disagrees at n = {n}");
    }
    println!(
        "[PASS] criterion 4: qubit group dimension is 3n+1 for n = 1..=12, overtaken by 2^n from n = 4, numeric rank agrees for n <= 6"
    );
}

#[test]
fn criterion_5_entropy_ground_truth() {
    let tps = standard_tps(&[2, 2]).unwrap();

    // Ising evolution from |00> for a quarter period: the Schmidt
    // coefficients of cos(t)|00> - i sin(t)|11> are both 1/2 at t = pi/4,
    // so each factor carries exactly ln 2.
    let ising = kron(&pauli_x(), &pauli_x()).unwrap();
    let h = cluster_spectrum_auto(&ising).unwrap();
    let state = DensityState::basis_state(4, 0).unwrap().evolve(&h, FRAC_PI_4);
    let profile = entropy_profile(&state, &tps).unwrap();
    for (j, s) in profile.per_factor.iter().enumerate() {
        assert!((s - LN_2).abs() < 1e-9, "factor {j}: entropy {s} != ln 2");
    }

    // Bell state (|00> + |11>)/sqrt(2).
    let amp = 1.0 / SQRT_2;
    let bell = DensityState::pure_state(&[c(amp, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(amp, 0.0)])
        .unwrap();
    let bell_profile = entropy_profile(&bell, &tps).unwrap();
    assert!((bell_profile.per_factor[0] - LN_2).abs() < 1e-9);
    assert!((bell_profile.per_factor[1] - LN_2).abs() < 1e-9);
    assert!((bell_profile.pair_mutual_information[0].value - 2.0 * LN_2).abs() < 1e-9);

    println!(
        "[PASS] criterion 5: Ising quarter-period entropies and the Bell profile match ln 2 and 2 ln 2 within 1e-9"
    );
}

#[test]
fn criterion_6_local_transforms_never_certify() {
    let mut rng = stream_from_seed(0x517E);
    let shapes: [&[usize]; 3] = [&[2, 2], &[2, 3], &[2, 2, 2]];
    let mut max_seen = 0.0f64;
    for trial in 0..1000 {
        let dims = shapes[trial % shapes.len()];
        let tps = standard_tps(dims).unwrap();

        let blocks: Vec<ComplexMatrix> =
            dims.iter().map(|&d| haar_unitary(d, &mut rng)).collect();
        let mut s = tps.local_unitary(&blocks).unwrap();
        // Factors of equal dimension may additionally be swapped.
        if dims.iter().all(|&d| d == dims[0]) {
            let mut perm: Vec<usize> = (0..dims.len()).collect();
            for k in (1..perm.len()).rev() {
                perm.swap(k, rng.random_range(0..=k));
            }
            s = &tps.factor_permutation(&perm).unwrap() * &s;
        }
        let moved = tps.transform(&s).unwrap();

        let probes = tpslab::entangle::canonical_probe_family(tps.dim(), 4, &mut rng).unwrap();
        let cert = certify_nonequivalence(&tps, &moved, &probes, CERT_THRESHOLD).unwrap();
        assert!(
            !cert.certified,
            "trial {trial} ({dims:?}): spurious certificate, discrepancy {}",
            cert.max_discrepancy
        );
        assert!(
            cert.max_discrepancy < 1e-9,
            "trial {trial} ({dims:?}): multiset moved by {}",
            cert.max_discrepancy
        );
        max_seen = max_seen.max(cert.max_discrepancy);
    }
    println!(
        "[PASS] criterion 6: 1000 local-unitary and permutation trials produced zero certificates (worst multiset drift {max_seen:.2e})"
    );
}

#[test]
fn criterion_7_counterexample_family_and_entangling_run() {
    let started = Instant::now();

    let family = run_family(&family_config(42, 10, 5)).unwrap();
    assert_eq!(family.family_size, 10);
    assert!(
        family.certified_count >= 8,
        "only {}/10 transformed structures certified",
        family.certified_count
    );
    assert_eq!(family.control_false_positives, 0);
    assert!(family.success);

    let mut entangling_config = family_config(42, 10, 5);
    entangling_config.kind = ExperimentKind::EntanglingContradiction;
    let run = run_entangling(&entangling_config).unwrap();
    assert!(run.entangling, "verdict was '{}'", run.verdict);
    assert!(!run.persists);
    assert!(run.max_residual > 0.1, "max residual {}", run.max_residual);
    assert!((run.argmax_t - FRAC_PI_4).abs() < 1e-12);

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "contradiction run took {elapsed:?}");
    println!(
        "[PASS] criterion 7: {}/10 evolved structures certified nonequivalent and the Ising run is entangling (residual {:.3} at t = pi/4) in {elapsed:.2?}",
        family.certified_count, run.max_residual
    );
}

#[test]
fn criterion_8_reruns_are_byte_identical() {
    let config = family_config(7, 6, 3);
    let mut entangling_config = family_config(7, 6, 3);
    entangling_config.kind = ExperimentKind::EntanglingContradiction;

    for cfg in [&config, &entangling_config] {
        let mut payloads = Vec::new();
        for _ in 0..2 {
            let dir = tempfile::tempdir().unwrap();
            let report = run_experiment(cfg).unwrap();
            let run_dir = persist_report(&report, cfg, dir.path()).unwrap();
            payloads.push(read_payload_strings(&run_dir.join("record.jsonl")).unwrap());
        }
        assert!(!payloads[0].is_empty());
        assert_eq!(payloads[0], payloads[1], "rerun diverged for {:?}", cfg.kind);
    }
    println!(
        "[PASS] criterion 8: same-seed reruns of both experiment kinds reproduced byte-identical record payloads"
    );
}
