//! A small battery of end-to-end checks with hardcoded expectations, meant
//! for quick health verification of an installed binary.

use crate::entangle::{entropy_profile, DensityState};
use crate::error::Result;
use crate::lab::config::{ExperimentConfig, ExperimentKind, HamiltonianSource};
use crate::lab::experiments::{run_dimension_scan, run_family};
use crate::lab::presets::local2;
use crate::lab::record::{read_payload_strings, RunWriter};
use crate::numkernel::eigh::eigh;
use crate::numkernel::rank::{commutation_map, nullspace_dim_with_scale, RANK_TOL};
use crate::numkernel::random::{random_hermitian, stream_from_seed};
use crate::spectrum::cluster_spectrum_auto;
use crate::tps::standard_tps;
use num_complex::Complex64;

/// One named check with a pass flag and a human-readable detail line.
#[derive(Debug, Clone)]
pub struct SelftestResult {
    pub name: &'static str,
    pub ok: bool,
    pub detail: String,
}

fn check(name: &'static str, run: impl FnOnce() -> Result<String>) -> SelftestResult {
    match run() {
        Ok(detail) => SelftestResult { name, ok: true, detail },
        Err(e) => SelftestResult { name, ok: false, detail: format!("failed: {e}") },
    }
}

fn expect(cond: bool, detail: String) -> Result<String> {
    if cond {
        Ok(detail)
    } else {
        Err(crate::error::Error::InvalidInput(detail))
    }
}

/// Runs every check; the process-level caller decides what a failure means.
pub fn run_selftests() -> Vec<SelftestResult> {
    vec![
        check("eigensolver-reconstruction", || {
            let mut rng = stream_from_seed(101);
            let a = random_hermitian(8, &mut rng);
            let dec = eigh(&a)?;
            let res = (&dec.reconstruct() - &a).frobenius_norm() / a.frobenius_norm();
            expect(res < 1e-12, format!("relative residual {res:.3e}"))
        }),
        check("commutant-oracle", || {
            let m = local2();
            let analytic = cluster_spectrum_auto(&m)?.commutant().dimension;
            let numeric = nullspace_dim_with_scale(&commutation_map(&m)?, RANK_TOL, m.max_abs());
            expect(
                analytic == 6 && numeric == 6,
                format!("analytic {analytic}, nullspace {numeric}"),
            )
        }),
        check("ledger-scan", || {
            let report = run_dimension_scan(32)?;
            expect(
                report.all_positive,
                format!("min surplus {} over {} tuples", report.min_surplus, report.tuples_checked),
            )
        }),
        check("bell-entropy", || {
            let bell = DensityState::pure_state(&[
                Complex64::ONE,
                Complex64::ZERO,
                Complex64::ZERO,
                Complex64::ONE,
            ])?;
            let tps = standard_tps(&[2, 2])?;
            let profile = entropy_profile(&bell, &tps)?;
            let gap = (profile.per_factor[0] - std::f64::consts::LN_2).abs();
            expect(gap < 1e-9, format!("entropy gap {gap:.3e}"))
        }),
        check("counterexample-family", || {
            let config = ExperimentConfig {
                kind: ExperimentKind::CounterexampleFamily,
                seed: 5,
                factor_dims: vec![2, 2],
                hamiltonian: HamiltonianSource::Preset { preset: "ising2".into() },
                run_id: None,
                transforms: 4,
                controls: 2,
                haar_probes: 4,
                entropy_threshold: 1e-6,
                t_grid: None,
                initial_state: "basis:0".into(),
                cluster_tol: None,
            };
            let report = run_family(&config)?;
            expect(
                report.success && report.control_false_positives == 0,
                format!(
                    "{}/{} certified, {} control false positives",
                    report.certified_count, report.family_size, report.control_false_positives
                ),
            )
        }),
        check("record-determinism", || {
            let root = std::env::temp_dir()
                .join(format!("tpslab-selftest-{}", std::process::id()));
            let _ = std::fs::remove_dir_all(&root);
            let result = (|| -> Result<String> {
                let payload =
                    crate::lab::experiments::ExperimentReport::Family(run_family(
                        &ExperimentConfig {
                            kind: ExperimentKind::CounterexampleFamily,
                            seed: 9,
                            factor_dims: vec![2, 2],
                            hamiltonian: HamiltonianSource::Preset { preset: "ising2".into() },
                            run_id: None,
                            transforms: 2,
                            controls: 1,
                            haar_probes: 2,
                            entropy_threshold: 1e-6,
                            t_grid: None,
                            initial_state: "basis:0".into(),
                            cluster_tol: None,
                        },
                    )?)
                    .to_json_string()?;
                let w1 = RunWriter::create(&root, "a", 9)?;
                let w2 = RunWriter::create(&root, "b", 9)?;
                let raw1: Box<serde_json::value::RawValue> =
                    serde_json::value::RawValue::from_string(payload.clone())?;
                let raw2: Box<serde_json::value::RawValue> =
                    serde_json::value::RawValue::from_string(payload)?;
                w1.append(&raw1)?;
                w2.append(&raw2)?;
                let p1 = read_payload_strings(w1.record_path())?;
                let p2 = read_payload_strings(w2.record_path())?;
                expect(p1 == p2 && p1.len() == 1, "payload bytes match".into())
            })();
            let _ = std::fs::remove_dir_all(&root);
            result
        }),
    ]
}
