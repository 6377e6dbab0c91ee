use teleflow::gaussian::{run_cv, run_cv_with_resource, stage2_closed_form, CovMatrix, IDEAL_G1};
use teleflow::metrics::gaussian_fidelity_1mode;

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

/// Output variance of the principal mode, built by hand from the stage-2
/// blocks and the beam-splitter combination `τ V11 + (1−τ) V33 − 2√(τ(1−τ)) V13`.
fn output_oracle(v: f64, g1: f64, g2: f64) -> f64 {
    let tau = 1.0 / g2;
    let v11 = 2.0 * g1 * (g2 - 1.0) + g2 * (v - 1.0) + 1.0;
    let v33 = 2.0 * g1 - 1.0;
    let v13 = 2.0 * (g1 * (g1 - 1.0) * (g2 - 1.0)).sqrt();
    tau * v11 + (1.0 - tau) * v33 - 2.0 * (tau * (1.0 - tau)).sqrt() * v13
}

#[test]
fn stage2_matches_closed_form_on_grid() {
    for g1 in [1.0, 4.0, 100.0] {
        for v in [1.0, 2.0, 5.0] {
            for g2 in [2.0, 3.0, 10.0] {
                let trace = run_cv(v, g1, g2).unwrap();
                let got = trace.global_covs[2].matrix();
                let want = stage2_closed_form(v, g1, g2).unwrap();
                for (a, b) in got.iter().zip(want.iter()) {
                    assert!(rel_err(*a, *b) < 1e-9, "v={v} g1={g1} g2={g2}: {a} vs {b}");
                }
            }
        }
    }
}

#[test]
fn output_matches_scalar_oracle() {
    for g1 in [1.0, 1.5, 4.0, 100.0] {
        for v in [1.0, 3.0] {
            for g2 in [1.5, 2.0, 7.0] {
                let out = run_cv(v, g1, g2).unwrap();
                let m = out.output().matrix();
                let want = output_oracle(v, g1, g2);
                assert!(rel_err(m[(0, 0)], want) < 1e-9);
                assert!(rel_err(m[(1, 1)], want) < 1e-9);
                assert!(m[(0, 1)].abs() < 1e-9);
            }
        }
    }
}

#[test]
fn every_stage_is_physical() {
    for g1 in [1.0, 4.0, 100.0] {
        for g2 in [1.2, 2.0, 10.0] {
            let trace = run_cv(2.0, g1, g2).unwrap();
            for cov in trace.stage_covs.iter().chain(&trace.global_covs) {
                assert!(cov.physicality_margin() >= -1e-9);
            }
        }
    }
}

#[test]
fn excess_noise_shrinks_with_resource_gain() {
    let excess = |g1: f64| run_cv(1.0, g1, 2.0).unwrap().output().matrix()[(0, 0)] - 1.0;
    let seq: Vec<f64> = [10.0, 1e3, 1e6].iter().map(|&g| excess(g)).collect();
    assert!(seq.windows(2).all(|w| w[1] < w[0]), "{seq:?}");
}

#[test]
fn ideal_resource_recovers_input() {
    for v in [1.0, 2.0] {
        for g2 in [2.0, 3.0] {
            let out = run_cv(v, IDEAL_G1, g2).unwrap();
            let m = out.output().matrix();
            let excess = m[(0, 0)] - v;
            let predicted = (g2 - 1.0) / (2.0 * IDEAL_G1 * g2);
            assert!(
                (excess - predicted).abs() <= 0.1 * predicted,
                "{excess} vs {predicted}"
            );
            assert!(m[(1, 1)] - v < 1e-5 && m[(0, 1)].abs() < 1e-9);
        }
    }
}

#[test]
fn vacuum_fidelity_curve() {
    let vac = CovMatrix::vacuum(1);
    for r in [0.0, 0.3, 1.0, 2.0] {
        let out = run_cv_with_resource(1.0, r, 3.0).unwrap();
        let f = gaussian_fidelity_1mode(&vac, out.output()).unwrap();
        let want = 1.0 / (1.0 + (2.0 / 3.0) * (-2.0 * r).exp());
        assert!((f - want).abs() < 1e-9, "r={r}: {f} vs {want}");
    }
    let out = run_cv_with_resource(1.0, 2.0, 3.0).unwrap();
    let want = 1.0 + (4.0 / 3.0) * (-4.0f64).exp();
    assert!((out.output().matrix()[(0, 0)] - want).abs() < 1e-9);
}

#[test]
fn classical_limit_is_sixty_percent() {
    let out = run_cv_with_resource(1.0, 0.0, 3.0).unwrap();
    let f = gaussian_fidelity_1mode(&CovMatrix::vacuum(1), out.output()).unwrap();
    assert!((f - 0.6).abs() < 1e-12);
}

#[test]
fn bad_parameters_rejected() {
    assert!(run_cv(0.5, 2.0, 2.0).is_err());
    assert!(run_cv(1.0, 0.5, 2.0).is_err());
    assert!(run_cv(1.0, 2.0, 1.0).is_err());
    assert!(run_cv_with_resource(1.0, -0.1, 2.0).is_err());
}
