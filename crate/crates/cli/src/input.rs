//! Input state selection and the text matrix format.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use teleflow::linalg::CMatrix;
use teleflow::qudit::{DensityMatrix, Ket};

use crate::error::{CliError, CliResult};

/// Which principal input a DV command starts from.
#[derive(Debug, Clone, PartialEq)]
pub enum InputSelector {
    Ket0,
    MaximallyMixed,
    /// Haar-random pure state drawn from the command's seed.
    Random,
    File(PathBuf),
}

impl std::str::FromStr for InputSelector {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "ket0" => InputSelector::Ket0,
            "maximally_mixed" => InputSelector::MaximallyMixed,
            "random" => InputSelector::Random,
            path => InputSelector::File(PathBuf::from(path)),
        })
    }
}

impl InputSelector {
    pub fn resolve(&self, d: usize, seed: u64) -> CliResult<DensityMatrix> {
        match self {
            InputSelector::Ket0 => Ok(Ket::basis(d, 0)?.projector()),
            InputSelector::MaximallyMixed => Ok(DensityMatrix::maximally_mixed(d)?),
            InputSelector::Random => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                Ok(teleflow::random::haar_ket(d, &mut rng)?.projector())
            }
            InputSelector::File(path) => {
                let rho = load_density_matrix(path)?;
                if rho.dim() != d {
                    return Err(CliError::arg(format!(
                        "{} holds a {}-dimensional state, expected {d}",
                        path.display(),
                        rho.dim()
                    )));
                }
                Ok(rho)
            }
        }
    }
}

/// Parses rows of whitespace-separated `re,im` pairs. Blank lines and lines
/// starting with `#` are skipped.
pub fn parse_matrix(text: &str) -> CliResult<CMatrix> {
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|pair| {
                parse_entry(pair)
                    .ok_or_else(|| CliError::arg(format!("line {}: bad entry `{pair}`", n + 1)))
            })
            .collect::<CliResult<Vec<_>>>()?;
        rows.push(row);
    }
    let n = rows.len();
    if n == 0 {
        return Err(CliError::arg("empty matrix"));
    }
    if let Some(bad) = rows.iter().find(|r| r.len() != n) {
        return Err(CliError::arg(format!(
            "matrix is not square: {n} rows but a row of {}",
            bad.len()
        )));
    }
    let flat: Vec<Complex64> = rows.into_iter().flatten().collect();
    Ok(CMatrix::from_row_slice(n, n, &flat))
}

fn parse_entry(pair: &str) -> Option<Complex64> {
    let (re, im) = pair.split_once(',')?;
    Some(Complex64::new(re.parse().ok()?, im.parse().ok()?))
}

/// Loads and validates a density matrix file.
pub fn load_density_matrix(path: &Path) -> CliResult<DensityMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path.display(), e))?;
    Ok(DensityMatrix::new(parse_matrix(&text)?)?)
}

/// Inverse of [`parse_matrix`].
pub fn format_matrix(m: &CMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            .map(|j| format!("{:.9},{:.9}", m[(i, j)].re, m[(i, j)].im))
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}
