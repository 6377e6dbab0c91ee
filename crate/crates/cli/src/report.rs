//! Stage dumps, divisibility reports and distinguishability traces.

use std::fmt::Write;

use teleflow::dv::{DvTeleport, DIM_RANGE};
use teleflow::gaussian::run_cv_with_resource;
use teleflow::metrics::{gaussian_fidelity_1mode, uhlmann_fidelity};
use teleflow::nonmarkov::{blp_trace, divisibility_residual, prefix_channels, BlpVerdict, Verdict};
use teleflow::qudit::{pauli_z, werner, DensityMatrix, Ket};

use crate::error::{CliError, CliResult};
use crate::input::{format_matrix, InputSelector};

pub fn check_dv(d: usize, p: f64) -> CliResult<()> {
    if !DIM_RANGE.contains(&d) {
        return Err(CliError::arg(format!("--d must be in 2..=10, got {d}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(CliError::arg(format!("--p must be in [0, 1], got {p}")));
    }
    Ok(())
}

/// Per-stage fidelity and purity of the principal system, followed by each
/// stage state in the input matrix format.
pub fn dv_stages(d: usize, p: f64, input: &InputSelector, seed: u64) -> CliResult<String> {
    check_dv(d, p)?;
    let rho = input.resolve(d, seed)?;
    let trace = DvTeleport::new(d)?.run_with_resource(&rho, &werner(d, p)?)?;
    let mut out = String::from("stage,fidelity,purity\n");
    for (k, state) in trace.stage_states.iter().enumerate() {
        let f = uhlmann_fidelity(&rho, state)?;
        writeln!(out, "{k},{f:.9},{:.9}", state.purity()).unwrap();
    }
    for (k, state) in trace.stage_states.iter().enumerate() {
        writeln!(out, "# stage {k}").unwrap();
        out.push_str(&format_matrix(state.matrix()));
    }
    Ok(out)
}

/// Per-stage fidelity to the vacuum input and the principal covariance entries.
pub fn cv_stages(r: f64, g2: f64) -> CliResult<String> {
    if !(0.0..=2.0).contains(&r) {
        return Err(CliError::arg(format!("r must be in [0, 2], got {r}")));
    }
    if !(g2 > 1.0 && g2.is_finite()) {
        return Err(CliError::arg(format!("--g2 must exceed 1, got {g2}")));
    }
    let trace = run_cv_with_resource(1.0, r, g2)?;
    let mut out = String::from("stage,fidelity,v_xx,v_xp,v_pp\n");
    for (k, cov) in trace.stage_covs.iter().enumerate() {
        let f = gaussian_fidelity_1mode(&trace.stage_covs[0], cov)?;
        let m = cov.matrix();
        writeln!(
            out,
            "{k},{f:.9},{:.9},{:.9},{:.9}",
            m[(0, 0)],
            m[(0, 1)],
            m[(1, 1)]
        )
        .unwrap();
    }
    Ok(out)
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Divisible => "divisible",
        Verdict::NonDivisible => "non_divisible",
        Verdict::RankDeficient => "rank_deficient",
    }
}

/// Divisibility of every later prefix channel through every earlier one,
/// with a Werner resource of weight `p`.
pub fn divisibility(d: usize, p: f64) -> CliResult<String> {
    check_dv(d, p)?;
    let tele = DvTeleport::new(d)?;
    let prefixes = prefix_channels(&tele, &werner(d, p)?)?;
    let mut out =
        String::from("prefix,total,residual,prefix_rank,intermediate_cp_min_eig,verdict\n");
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        let report = divisibility_residual(&prefixes[a], &prefixes[b])?;
        let eig = report
            .intermediate_cp_min_eig
            .map_or_else(|| "none".to_string(), |e| format!("{e:.9}"));
        writeln!(
            out,
            "{},{},{:.9},{},{eig},{}",
            a + 1,
            b + 1,
            report.residual,
            report.prefix_rank,
            verdict_name(report.verdict)
        )
        .unwrap();
    }
    Ok(out)
}

/// Which pair of orthogonal inputs a distinguishability trace follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum InputPair {
    /// `|+⟩` and `Z|+⟩`.
    Conjugate,
    /// `|0⟩` and `|1⟩`.
    Computational,
}

impl InputPair {
    pub fn states(self, d: usize) -> CliResult<(DensityMatrix, DensityMatrix)> {
        Ok(match self {
            InputPair::Conjugate => {
                let plus = Ket::plus(d)?;
                let shifted = pauli_z(d)?.apply(&plus)?;
                (plus.projector(), shifted.projector())
            }
            InputPair::Computational => {
                (Ket::basis(d, 0)?.projector(), Ket::basis(d, 1)?.projector())
            }
        })
    }
}

pub fn blp(d: usize, p: f64, pair: InputPair) -> CliResult<String> {
    check_dv(d, p)?;
    let (a, b) = pair.states(d)?;
    let trace = blp_trace(&DvTeleport::new(d)?, &werner(d, p)?, &a, &b)?;
    let mut out = String::from("stage,trace_distance\n");
    for (k, t) in trace.distances.iter().enumerate() {
        writeln!(out, "{k},{t:.9}").unwrap();
    }
    let verdict = match trace.verdict {
        BlpVerdict::NonMarkovian => "non_markovian",
        BlpVerdict::Inconclusive => "inconclusive",
    };
    writeln!(out, "# verdict {verdict}").unwrap();
    Ok(out)
}
