//! Parameter sweeps behind the two figure panels.

use std::path::PathBuf;

use rayon::prelude::*;
use teleflow::dv::{DvTeleport, DIM_RANGE};
use teleflow::gaussian::run_cv_with_resource;
use teleflow::metrics::{eof_tmsv, eof_two_qubit, gaussian_fidelity_1mode, uhlmann_fidelity};
use teleflow::qudit::werner;

use crate::error::{CliError, CliResult};
use crate::input::InputSelector;

pub const CSV_HEADER: &str = "param,f_stage1,f_stage2,f_stage3,eof";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Dv,
    Cv,
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub mode: Mode,
    /// Upper end of the swept parameter: `p` for DV, `r` for CV.
    pub max: f64,
    pub steps: usize,
    pub d: usize,
    pub g2: f64,
    pub input: InputSelector,
    pub out: Option<PathBuf>,
    pub emit_svg: bool,
    pub seed: u64,
}

impl SweepConfig {
    pub fn dv(d: usize, steps: usize) -> Self {
        Self {
            mode: Mode::Dv,
            max: 1.0,
            steps,
            d,
            g2: 3.0,
            input: InputSelector::Ket0,
            out: None,
            emit_svg: false,
            seed: 0,
        }
    }

    pub fn cv(g2: f64, r_max: f64, steps: usize) -> Self {
        Self {
            mode: Mode::Cv,
            max: r_max,
            g2,
            ..Self::dv(2, steps)
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.steps < 2 {
            return Err(CliError::arg(format!(
                "--steps must be at least 2, got {}",
                self.steps
            )));
        }
        if self.emit_svg && self.out.is_none() {
            return Err(CliError::arg("--svg needs --out"));
        }
        match self.mode {
            Mode::Dv => {
                if !DIM_RANGE.contains(&self.d) {
                    return Err(CliError::arg(format!(
                        "--d must be in 2..=10, got {}",
                        self.d
                    )));
                }
                if !(0.0..=1.0).contains(&self.max) || self.max == 0.0 {
                    return Err(CliError::arg(format!(
                        "p range end must be in (0, 1], got {}",
                        self.max
                    )));
                }
            }
            Mode::Cv => {
                if !(self.max > 0.0 && self.max <= 2.0) {
                    return Err(CliError::arg(format!(
                        "--r-max must be in (0, 2], got {}",
                        self.max
                    )));
                }
                if !(self.g2 > 1.0 && self.g2.is_finite()) {
                    return Err(CliError::arg(format!(
                        "--g2 must exceed 1, got {}",
                        self.g2
                    )));
                }
                if self.input != InputSelector::Ket0 {
                    return Err(CliError::arg(
                        "cv sweeps start from the vacuum; --input is not supported",
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| self.max * k as f64 / last)
            .collect()
    }
}

/// One CSV row: the swept parameter, the principal fidelity to the input
/// after each stage, and the resource entanglement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub param: f64,
    pub fidelity: [f64; 3],
    pub eof: f64,
}

pub fn run_sweep(cfg: &SweepConfig) -> CliResult<Vec<SweepRow>> {
    cfg.validate()?;
    match cfg.mode {
        Mode::Dv => dv_rows(cfg),
        Mode::Cv => cv_rows(cfg),
    }
}

fn dv_rows(cfg: &SweepConfig) -> CliResult<Vec<SweepRow>> {
    let tele = DvTeleport::new(cfg.d)?;
    let input = cfg.input.resolve(cfg.d, cfg.seed)?;
    cfg.grid()
        .into_par_iter()
        .map(|p| {
            let resource = werner(cfg.d, p)?;
            let trace = tele.run_with_resource(&input, &resource)?;
            let mut fidelity = [0.0; 3];
            for (k, f) in fidelity.iter_mut().enumerate() {
                *f = uhlmann_fidelity(&input, &trace.stage_states[k + 1])?;
            }
            // Only the two-qubit EoF has a closed form.
            let eof = if cfg.d == 2 {
                eof_two_qubit(&resource)?
            } else {
                f64::NAN
            };
            Ok(SweepRow {
                param: p,
                fidelity,
                eof,
            })
        })
        .collect()
}

fn cv_rows(cfg: &SweepConfig) -> CliResult<Vec<SweepRow>> {
    cfg.grid()
        .into_par_iter()
        .map(|r| {
            let trace = run_cv_with_resource(1.0, r, cfg.g2)?;
            let input = &trace.stage_covs[0];
            let mut fidelity = [0.0; 3];
            for (k, f) in fidelity.iter_mut().enumerate() {
                *f = gaussian_fidelity_1mode(input, &trace.stage_covs[k + 1])?;
            }
            Ok(SweepRow {
                param: r,
                fidelity,
                eof: eof_tmsv(r)?,
            })
        })
        .collect()
}

pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&format!(
            "{:.9},{:.9},{:.9},{:.9},{:.9}\n",
            row.param, row.fidelity[0], row.fidelity[1], row.fidelity[2], row.eof
        ));
    }
    out
}
