//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fail.

use std::f64::consts::TAU;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use teleflow::dv::DvTeleport;
use teleflow::gaussian::{
    bs_symplectic, run_cv, stage2_closed_form, tms_symplectic, CovMatrix, SymplecticOp,
};
use teleflow::linalg::{self, CMatrix};
use teleflow::metrics::{gaussian_fidelity_1mode, trace_distance, uhlmann_fidelity};
use teleflow::nonmarkov::{
    blp_trace, divisibility_residual, prefix_channels, BlpVerdict, TransferMatrix, Verdict,
};
use teleflow::qudit::{bell_phi, cnot, cphase, hadamard, swap, Ket, SystemLayout};
use teleflow::random::{haar_ket, haar_unitary, random_mixed};
use teleflow_cli::{run_sweep, SweepConfig};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn timed(f: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
    let start = Instant::now();
    let o = f();
    (o, start.elapsed())
}

fn werner_sweep() -> Outcome {
    let (res, elapsed) = timed(|| {
        let rows = run_sweep(&SweepConfig::dv(2, 101)).unwrap();
        let mut worst = 0.0f64;
        let mut ok = rows.len() == 101;
        for row in &rows {
            let p = row.param;
            worst = worst.max((row.fidelity[2] - (1.0 + p) / 2.0).abs());
            ok &= (row.fidelity[0] - 1.0).abs() <= 1e-9;
            ok &= (row.fidelity[1] - 0.5).abs() <= 1e-9;
            if p <= 1.0 / 3.0 {
                ok &= row.eof.abs() <= 1e-12;
            }
        }
        let above: Vec<f64> = rows
            .iter()
            .filter(|r| r.param > 1.0 / 3.0)
            .map(|r| r.eof)
            .collect();
        ok &= above.windows(2).all(|w| w[1] > w[0]);
        let last = rows.last().unwrap();
        ok &= (last.fidelity[2] - 1.0).abs() <= 1e-9 && (last.eof - 1.0).abs() <= 1e-9;
        outcome(
            ok && worst <= 1e-9,
            format!("max |f3 - (1+p)/2| = {worst:.2e}"),
        )
    });
    outcome(
        res.pass && elapsed < Duration::from_secs(1),
        format!("{}, {:.3} s", res.detail, elapsed.as_secs_f64()),
    )
}

fn teleportation_identity() -> Outcome {
    let (res, elapsed) = timed(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut worst = 1.0f64;
        for d in 2..=5 {
            let tele = DvTeleport::new(d).unwrap();
            for _ in 0..20 {
                let rho = random_mixed(d, &mut rng).unwrap();
                let out = tele.run_ideal(&rho).unwrap();
                worst = worst.min(uhlmann_fidelity(&rho, out.output()).unwrap());
            }
        }
        outcome(worst >= 1.0 - 1e-9, format!("min fidelity {worst:.12}"))
    });
    outcome(
        res.pass && elapsed < Duration::from_secs(10),
        format!("{}, {:.3} s", res.detail, elapsed.as_secs_f64()),
    )
}

fn stage_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for d in 2..=5 {
        let tele = DvTeleport::new(d).unwrap();
        for _ in 0..10 {
            let s = haar_ket(d, &mut rng).unwrap();
            let report = tele.check_stage_identities(&s).unwrap();
            worst = report.residuals.iter().fold(worst, |a, &b| a.max(b));
        }
    }
    outcome(worst <= 1e-10, format!("max residual {worst:.2e}"))
}

/// Output variance for a vacuum input, from the stage-2 blocks and the
/// beam-splitter combination, independent of the matrix simulation.
fn cv_output_oracle(g1: f64, g2: f64) -> f64 {
    let tau = 1.0 / g2;
    let v11 = 2.0 * g1 * (g2 - 1.0) + 1.0;
    let v33 = 2.0 * g1 - 1.0;
    let v13 = 2.0 * (g1 * (g1 - 1.0) * (g2 - 1.0)).sqrt();
    tau * v11 + (1.0 - tau) * v33 - 2.0 * (tau * (1.0 - tau)).sqrt() * v13
}

fn squeezing_sweep() -> Outcome {
    let (res, elapsed) = timed(|| {
        let closed = |r: f64| 1.0 / (1.0 + (2.0 / 3.0) * (-2.0 * r).exp());
        let eof = |r: f64| {
            let (c, s) = (r.cosh().powi(2), r.sinh().powi(2));
            if r == 0.0 {
                0.0
            } else {
                c * c.log2() - s * s.log2()
            }
        };
        let rows = run_sweep(&SweepConfig::cv(3.0, 2.0, 201)).unwrap();
        let mut oracle_gap = 0.0f64;
        let mut sim_gap = 0.0f64;
        let mut eof_gap = 0.0f64;
        for row in &rows {
            let r = row.param;
            // vacuum fidelity 2 / (1 + V)
            let oracle = 2.0 / (1.0 + cv_output_oracle(r.cosh().powi(2), 3.0));
            oracle_gap = oracle_gap.max((oracle - closed(r)).abs());
            sim_gap = sim_gap.max((row.fidelity[2] - closed(r)).abs());
            eof_gap = eof_gap.max((row.eof - eof(r)).abs());
        }
        let f0 = rows[0].fidelity[2];
        let monotone = rows
            .windows(2)
            .all(|w| w[1].fidelity[2] >= w[0].fidelity[2]);
        outcome(
            rows.len() == 201
                && (f0 - 0.6).abs() <= 1e-6
                && oracle_gap <= 1e-9
                && sim_gap <= 1e-9
                && monotone
                && eof_gap <= 1e-12,
            format!(
                "f3(0) = {f0:.9}, oracle gap {oracle_gap:.1e}, sim gap {sim_gap:.1e}, eof gap {eof_gap:.1e}, monotone {monotone}"
            ),
        )
    });
    outcome(
        res.pass && elapsed < Duration::from_secs(1),
        format!("{}, {:.3} s", res.detail, elapsed.as_secs_f64()),
    )
}

fn stage2_covariance() -> Outcome {
    let mut worst = 0.0f64;
    for v in [1.0, 2.0, 5.0] {
        for g1 in [1.0, 4.0, 100.0] {
            for g2 in [2.0, 3.0, 10.0] {
                let sim = run_cv(v, g1, g2).unwrap();
                let want = stage2_closed_form(v, g1, g2).unwrap();
                for (a, b) in sim.global_covs[2].matrix().iter().zip(want.iter()) {
                    worst = worst.max((a - b).abs() / b.abs().max(1.0));
                }
            }
        }
    }
    outcome(
        worst <= 1e-9,
        format!("max relative gap {worst:.2e} over 27 points"),
    )
}

fn ideal_cv_recovery() -> Outcome {
    let (v, g1, g2) = (2.0, 1e6, 3.0);
    let out = run_cv(v, g1, g2).unwrap();
    let m = out.output().matrix();
    let gap = linalg::max_abs_diff_real(m, &(teleflow::linalg::RMatrix::identity(2, 2) * v));
    let excess = m[(0, 0)] - v;
    let bound = (g2 - 1.0) / (2.0 * g1 * g2);
    outcome(
        gap <= 1e-5 && (excess - bound).abs() <= 0.1 * bound,
        format!("max gap {gap:.2e}, excess {excess:.3e} vs {bound:.3e}"),
    )
}

/// `ρ ↦ tr_E[U (ρ ⊗ |0><0|) U†]`, `U = cos θ I + i sin θ SWAP`, applied `steps`
/// times with a fresh environment each time.
fn collision_channel(theta: f64, steps: usize) -> TransferMatrix {
    let s = swap(2, TAU, TAU).unwrap();
    let u = CMatrix::identity(4, 4) * Complex64::new(theta.cos(), 0.0)
        + s.matrix() * Complex64::new(0.0, theta.sin());
    let env = Ket::basis(2, 0).unwrap().projector();
    let layout = SystemLayout::uniform(2, 2).unwrap();
    TransferMatrix::from_map(2, |m| {
        let mut rho = m.clone();
        for _ in 0..steps {
            let joint = linalg::tensor_product(&rho, env.matrix());
            rho = layout.partial_trace_matrix(&(&u * joint * u.adjoint()), &[0])?;
        }
        Ok(rho)
    })
    .unwrap()
}

fn depolarizing_transfer(d: usize) -> CMatrix {
    TransferMatrix::from_map(d, |m| Ok(CMatrix::identity(d, d) * (m.trace() / d as f64)))
        .unwrap()
        .matrix()
        .clone()
}

fn non_divisibility() -> Outcome {
    let tele = DvTeleport::new(2).unwrap();
    let prefixes = prefix_channels(&tele, &bell_phi(2).unwrap().projector()).unwrap();
    let id = TransferMatrix::identity(2);
    let gaps = [
        linalg::max_abs_diff(prefixes[0].matrix(), id.matrix()),
        linalg::max_abs_diff(prefixes[1].matrix(), &depolarizing_transfer(2)),
        linalg::max_abs_diff(prefixes[2].matrix(), id.matrix()),
    ];
    let shape_ok = gaps.iter().all(|&g| g <= 1e-9);
    let tele_report = divisibility_residual(&prefixes[1], &prefixes[2]).unwrap();
    let witness_ok = tele_report.verdict == Verdict::NonDivisible && tele_report.residual > 0.1;
    let control =
        divisibility_residual(&collision_channel(0.7, 2), &collision_channel(0.7, 3)).unwrap();
    let control_ok = control.residual < 1e-9
        && control.verdict == Verdict::Divisible
        && control.intermediate_cp_min_eig.is_some_and(|e| e >= -1e-9);
    outcome(
        shape_ok && witness_ok && control_ok,
        format!(
            "prefix gaps to (id, depolarizing, id) = {:.2e}/{:.2e}/{:.2e}; residual {:.6} ({:?}); control residual {:.1e} ({:?})",
            gaps[0], gaps[1], gaps[2], tele_report.residual, tele_report.verdict, control.residual, control.verdict
        ),
    )
}

fn blp_witness() -> Outcome {
    let tele = DvTeleport::new(2).unwrap();
    let bell = bell_phi(2).unwrap().projector();
    let k0 = Ket::basis(2, 0).unwrap().projector();
    let k1 = Ket::basis(2, 1).unwrap().projector();
    let trace = blp_trace(&tele, &bell, &k0, &k1).unwrap();
    let want = [1.0, 1.0, 0.0, 1.0];
    let gap = trace
        .distances
        .iter()
        .zip(want)
        .fold(0.0f64, |a, (g, w)| a.max((g - w).abs()));
    outcome(
        gap <= 1e-9 && trace.verdict == BlpVerdict::NonMarkovian,
        format!(
            "sequence {:?}, verdict {:?}",
            trace.distances, trace.verdict
        ),
    )
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn symplectic_ok(op: &SymplecticOp) -> bool {
    op.symplectic_defect() <= 1e-10
}

fn property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut violations = 0usize;
    let mut checks = 0usize;
    let mut check = |ok: bool| {
        checks += 1;
        if !ok {
            violations += 1;
        }
    };

    for d in 2..=10 {
        for _ in 0..5 {
            let k = loop {
                let k = rng.random_range(1..=3 * d);
                if gcd(k, d) == 1 {
                    break k;
                }
            };
            let theta = TAU * k as f64;
            let phi = TAU * rng.random_range(0..=3 * d) as f64 + rng.random_range(-3.0..3.0);
            check(hadamard(d, theta).unwrap().unitarity_defect() <= 1e-10);
            check(cphase(d, phi).unwrap().unitarity_defect() <= 1e-10);
            check(cnot(d, phi, theta).unwrap().unitarity_defect() <= 1e-10);
            check(swap(d, TAU, theta).unwrap().unitarity_defect() <= 1e-10);
        }
    }

    for _ in 0..50 {
        let r = rng.random_range(0.0..2.5);
        let tau = rng.random_range(0.0..=1.0);
        let tms = tms_symplectic(r).unwrap();
        check(symplectic_ok(&tms));
        check(symplectic_ok(&bs_symplectic(tau).unwrap()));
        check(symplectic_ok(&tms.embed(&[2, 0], 3).unwrap()));

        let v = rng.random_range(1.0..6.0);
        let g1 = rng.random_range(1.0..200.0);
        let g2 = rng.random_range(1.01..12.0);
        let trace = run_cv(v, g1, g2).unwrap();
        for cov in trace.stage_covs.iter().chain(&trace.global_covs) {
            check(cov.physicality_margin() >= -1e-9);
        }
    }

    for _ in 0..50 {
        let d = rng.random_range(2..=4);
        let a = random_mixed(d, &mut rng).unwrap();
        let u = haar_unitary(d, &mut rng).unwrap();
        let b = a.conjugate(&u).unwrap();
        let c = random_mixed(d, &mut rng).unwrap();
        for (x, y) in [(&a, &b), (&a, &c), (&b, &c)] {
            let f = uhlmann_fidelity(x, y).unwrap();
            let t = trace_distance(x, y).unwrap();
            check((f - uhlmann_fidelity(y, x).unwrap()).abs() <= 1e-10);
            check((t - trace_distance(y, x).unwrap()).abs() <= 1e-10);
            check((-1e-9..=1.0 + 1e-9).contains(&f) && (0.0..=1.0 + 1e-9).contains(&t));
        }
        let va = CovMatrix::thermal(rng.random_range(1.0..5.0)).unwrap();
        let vb = CovMatrix::thermal(rng.random_range(1.0..5.0)).unwrap();
        let f = gaussian_fidelity_1mode(&va, &vb).unwrap();
        check((f - gaussian_fidelity_1mode(&vb, &va).unwrap()).abs() <= 1e-10);
        check((0.0..=1.0 + 1e-9).contains(&f));
    }

    outcome(
        violations == 0,
        format!("{violations} violations in {checks} checks"),
    )
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("werner sweep d=2, 101 points", werner_sweep),
        ("teleportation identity d=2..5", teleportation_identity),
        ("stage identities d=2..5", stage_identities),
        ("squeezing sweep g2=3, 201 points", squeezing_sweep),
        ("stage-2 covariance blocks", stage2_covariance),
        ("near-ideal gaussian recovery", ideal_cv_recovery),
        ("non-divisibility witness", non_divisibility),
        ("distinguishability revival |0>,|1>", blp_witness),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "[{}] {} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            n + 1,
            o.detail
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
