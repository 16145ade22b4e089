//! Dense non-Hermitian effective Hamiltonian of the chain.
//!
//! Both the guided and the free-space couplings depend on the atom pair only
//! through the lag |j − l|, so each part is assembled from its first row.

use std::io::Write;
use std::path::Path;

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels::coupling_unchecked;
use crate::params::ChainParams;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone)]
pub struct EffectiveHamiltonian {
    matrix: Array2<Complex64>,
    parts: Option<(Array2<Complex64>, Array2<Complex64>)>,
    params: ChainParams,
}

impl EffectiveHamiltonian {
    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }

    /// `(guided, free_space)` when assembled with `retain_parts`.
    pub fn parts(&self) -> Option<(&Array2<Complex64>, &Array2<Complex64>)> {
        self.parts.as_ref().map(|(g, f)| (g, f))
    }

    pub fn params(&self) -> &ChainParams {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.diag().sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Wrap an arbitrary square matrix, e.g. for solver tests.
    pub fn from_matrix(matrix: Array2<Complex64>, params: ChainParams) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() != params.n_atoms() {
            return Err(Error::argument(
                "matrix",
                format!(
                    "expected {n}x{n}, got {}x{}",
                    matrix.nrows(),
                    matrix.ncols(),
                    n = params.n_atoms()
                ),
            ));
        }
        Ok(Self {
            matrix,
            parts: None,
            params,
        })
    }

    /// Text dump for debugging: one header line, then one line per row with
    /// space-separated `re,im` pairs. Not a stable interchange format.
    pub fn write_text(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = std::io::BufWriter::new(file);
        let p = &self.params;
        let mut body = format!(
            "# effective hamiltonian N={} d_over_lambda={} gamma_over_Gamma={} layout=row-major entries=re,im\n",
            p.n_atoms(),
            p.spacing(),
            p.gamma_fs()
        );
        for row in self.matrix.rows() {
            let line: Vec<String> = row.iter().map(|z| format!("{:e},{:e}", z.re, z.im)).collect();
            body.push_str(&line.join(" "));
            body.push('\n');
        }
        w.write_all(body.as_bytes()).map_err(|e| Error::io(path, e))?;
        w.flush().map_err(|e| Error::io(path, e))
    }
}

/// First row of the guided part: −(i/2)e^{iβΔ}, Δ = 0..N−1 (Γ = 1, k_1D = k₀).
pub fn guided_row(params: &ChainParams) -> Vec<Complex64> {
    let beta = params.beta();
    (0..params.n_atoms())
        .map(|d| -0.5 * I * Complex64::from_polar(1.0, beta * d as f64))
        .collect()
}

/// First row of the free-space part: −iγ/2 on the diagonal and
/// −i·V(βΔ)·e^{iβΔ} off it. The geometry-independent Lamb shift is not included.
pub fn freespace_row(params: &ChainParams) -> Vec<Complex64> {
    let beta = params.beta();
    let gamma = params.gamma_fs();
    (0..params.n_atoms())
        .map(|d| {
            if d == 0 {
                -0.5 * gamma * I
            } else {
                let x = beta * d as f64;
                -I * coupling_unchecked(x, gamma) * Complex64::from_polar(1.0, x)
            }
        })
        .collect()
}

fn toeplitz(row: &[Complex64]) -> Array2<Complex64> {
    let n = row.len();
    Array2::from_shape_fn((n, n), |(j, l)| row[j.abs_diff(l)])
}

pub fn build_guided(params: &ChainParams) -> Array2<Complex64> {
    toeplitz(&guided_row(params))
}

pub fn build_freespace(params: &ChainParams) -> Array2<Complex64> {
    toeplitz(&freespace_row(params))
}

/// H_eff = H_1D + H_fs. The two parts are kept only when `retain_parts` is set.
pub fn build_total(params: &ChainParams, retain_parts: bool) -> EffectiveHamiltonian {
    let guided = guided_row(params);
    let free = freespace_row(params);
    let total: Vec<Complex64> = guided.iter().zip(&free).map(|(g, f)| g + f).collect();
    let parts = retain_parts.then(|| (toeplitz(&guided), toeplitz(&free)));
    EffectiveHamiltonian {
        matrix: toeplitz(&total),
        parts,
        params: *params,
    }
}
