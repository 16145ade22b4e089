//! Dense complex eigensolver for general (non-normal) matrices.
//!
//! Householder reduction to upper Hessenberg form, then implicit single-shift
//! QR with Givens rotations to complex Schur form A = Z·T·Zᴴ, and finally
//! eigenvectors of T by back substitution, mapped back through Z.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Right eigenpairs of a square complex matrix, in Schur order.
#[derive(Debug, Clone)]
pub struct Eigenpairs {
    pub values: Vec<Complex64>,
    /// Unit-norm eigenvectors, `vectors[k]` belongs to `values[k]`.
    pub vectors: Vec<Vec<Complex64>>,
    /// QR sweeps spent on the Schur form.
    pub sweeps: usize,
}

#[inline]
fn cabs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Square row-major working matrix.
struct Dense {
    n: usize,
    a: Vec<Complex64>,
}

impl Dense {
    fn from_array(m: &Array2<Complex64>) -> Self {
        let n = m.nrows();
        Self {
            n,
            a: m.iter().copied().collect(),
        }
    }

    fn identity(n: usize) -> Self {
        let mut a = vec![ZERO; n * n];
        for i in 0..n {
            a[i * n + i] = ONE;
        }
        Self { n, a }
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> Complex64 {
        self.a[i * self.n + j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, z: Complex64) {
        self.a[i * self.n + j] = z;
    }

    /// Rows `i0` and `i1` ← G·rows with G = [[c, s], [−s̄, c]], columns `cols`.
    #[inline]
    fn rotate_rows(&mut self, i0: usize, i1: usize, c: f64, s: Complex64, cols: std::ops::Range<usize>) {
        let n = self.n;
        for j in cols {
            let x = self.a[i0 * n + j];
            let y = self.a[i1 * n + j];
            self.a[i0 * n + j] = c * x + s * y;
            self.a[i1 * n + j] = -s.conj() * x + c * y;
        }
    }

    /// Columns `j0` and `j1` ← columns·Gᴴ, rows `rows`.
    #[inline]
    fn rotate_cols(&mut self, j0: usize, j1: usize, c: f64, s: Complex64, rows: std::ops::Range<usize>) {
        let n = self.n;
        for i in rows {
            let x = self.a[i * n + j0];
            let y = self.a[i * n + j1];
            self.a[i * n + j0] = c * x + s.conj() * y;
            self.a[i * n + j1] = -s * x + c * y;
        }
    }
}

/// Rotation (c, s, r) with [[c, s], [−s̄, c]]·(x, y)ᵀ = (r, 0)ᵀ.
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64, Complex64) {
    let ay = y.norm();
    if ay == 0.0 {
        return (1.0, ZERO, x);
    }
    let ax = x.norm();
    if ax == 0.0 {
        return (0.0, y.conj() / ay, Complex64::new(ay, 0.0));
    }
    let rho = ax.hypot(ay);
    let phase = x / ax;
    (ax / rho, phase * y.conj() / rho, phase * rho)
}

/// Householder reduction A → QᴴAQ (upper Hessenberg); returns Q.
#[allow(clippy::needless_range_loop)]
fn hessenberg(h: &mut Dense) -> Dense {
    let n = h.n;
    let mut q = Dense::identity(n);
    let mut v = vec![ZERO; n];
    for k in 0..n.saturating_sub(2) {
        let norm = (k + 1..n).map(|i| h.get(i, k).norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = h.get(k + 1, k);
        let phase = if x0.norm() == 0.0 { ONE } else { x0 / x0.norm() };
        for i in k + 1..n {
            v[i] = h.get(i, k);
        }
        v[k + 1] += phase * norm;
        let vnorm2: f64 = (k + 1..n).map(|i| v[i].norm_sqr()).sum();
        let tau = 2.0 / vnorm2;

        // rows k+1.. ← (I − τvvᴴ)·rows
        for j in k..n {
            let s: Complex64 = (k + 1..n).map(|i| v[i].conj() * h.get(i, j)).sum();
            let s = s * tau;
            for i in k + 1..n {
                let z = h.get(i, j) - s * v[i];
                h.set(i, j, z);
            }
        }
        // columns k+1.. ← columns·(I − τvvᴴ), for H and Q
        for m in [&mut *h, &mut q] {
            for i in 0..n {
                let row = &mut m.a[i * n..(i + 1) * n];
                let s: Complex64 = (k + 1..n).map(|j| row[j] * v[j]).sum();
                let s = s * tau;
                for j in k + 1..n {
                    row[j] -= s * v[j].conj();
                }
            }
        }
        h.set(k + 1, k, -phase * norm);
        for i in k + 2..n {
            h.set(i, k, ZERO);
        }
    }
    q
}

/// Shift from the trailing 2×2 block [[a, b], [c, d]]: its eigenvalue closer to d.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let p = 0.5 * (a - d);
    let bc = b * c;
    let disc = (p * p + bc).sqrt();
    let denom = if (p.conj() * disc).re >= 0.0 {
        p + disc
    } else {
        p - disc
    };
    if denom.norm() == 0.0 {
        d
    } else {
        d - bc / denom
    }
}

/// Reduce Hessenberg `h` to upper-triangular Schur form, accumulating into `z`.
fn schur(h: &mut Dense, z: &mut Dense, max_sweeps: usize) -> Result<usize> {
    let n = h.n;
    if n < 2 {
        return Ok(0);
    }
    let ulp = f64::EPSILON;
    let safe_min = f64::MIN_POSITIVE * (n as f64 / ulp);
    let norm_est = h.a.iter().map(|z| cabs1(*z)).fold(0.0, f64::max);

    let mut hi = n - 1;
    let mut since_deflation = 0usize;
    let mut sweeps = 0usize;
    while hi >= 1 {
        let mut lo = hi;
        while lo > 0 {
            let sub = cabs1(h.get(lo, lo - 1));
            let mut tst = cabs1(h.get(lo - 1, lo - 1)) + cabs1(h.get(lo, lo));
            if tst == 0.0 {
                tst = norm_est;
            }
            if sub <= safe_min || sub <= ulp * tst {
                h.set(lo, lo - 1, ZERO);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        if sweeps >= max_sweeps {
            return Err(Error::NoConvergence {
                sweeps,
                deflated: n - 1 - hi,
                n,
            });
        }
        sweeps += 1;
        since_deflation += 1;

        let shift = if since_deflation.is_multiple_of(10) {
            // exceptional shift to break cycles
            h.get(hi, hi) + 0.75 * cabs1(h.get(hi, hi - 1))
        } else {
            wilkinson_shift(
                h.get(hi - 1, hi - 1),
                h.get(hi - 1, hi),
                h.get(hi, hi - 1),
                h.get(hi, hi),
            )
        };

        for k in lo..hi {
            let (x, y) = if k == lo {
                (h.get(lo, lo) - shift, h.get(lo + 1, lo))
            } else {
                (h.get(k, k - 1), h.get(k + 1, k - 1))
            };
            let (c, s, r) = givens(x, y);
            let first_col = if k == lo {
                lo
            } else {
                h.set(k, k - 1, r);
                h.set(k + 1, k - 1, ZERO);
                k
            };
            h.rotate_rows(k, k + 1, c, s, first_col..n);
            h.rotate_cols(k, k + 1, c, s, 0..(k + 3).min(hi + 1));
            z.rotate_cols(k, k + 1, c, s, 0..n);
        }
    }
    Ok(sweeps)
}

/// Eigenvectors of upper-triangular `t`, transformed by `z`.
fn schur_vectors(t: &Dense, z: &Dense) -> Vec<Vec<Complex64>> {
    let n = t.n;
    let ulp = f64::EPSILON;
    let small = f64::MIN_POSITIVE * (n as f64 / ulp);
    let mut out = Vec::with_capacity(n);
    let mut y = vec![ZERO; n];
    for k in 0..n {
        let lambda = t.get(k, k);
        let smin = (ulp * cabs1(lambda)).max(small);
        y[..=k].fill(ZERO);
        y[k] = ONE;
        for j in (0..k).rev() {
            let s: Complex64 = (j + 1..=k).map(|m| t.get(j, m) * y[m]).sum();
            let mut den = t.get(j, j) - lambda;
            if cabs1(den) < smin {
                den = Complex64::new(smin, 0.0);
            }
            y[j] = -s / den;
            let grow = cabs1(y[j]);
            if grow > 1e150 {
                let scale = 1.0 / grow;
                for v in y[j..=k].iter_mut() {
                    *v *= scale;
                }
            }
        }
        let mut v = vec![ZERO; n];
        for (i, vi) in v.iter_mut().enumerate() {
            let row = &z.a[i * n..i * n + k + 1];
            *vi = row.iter().zip(&y[..=k]).map(|(a, b)| a * b).sum();
        }
        let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        for c in v.iter_mut() {
            *c /= norm;
        }
        out.push(v);
    }
    out
}

/// Full eigendecomposition of a dense complex matrix.
pub fn eigenpairs(matrix: &Array2<Complex64>, max_sweeps: usize) -> Result<Eigenpairs> {
    if matrix.nrows() != matrix.ncols() {
        return Err(Error::argument("matrix", "must be square"));
    }
    if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::argument("matrix", "entries must be finite"));
    }
    let mut h = Dense::from_array(matrix);
    let mut z = hessenberg(&mut h);
    let sweeps = schur(&mut h, &mut z, max_sweeps)?;
    let values = (0..h.n).map(|k| h.get(k, k)).collect();
    let vectors = schur_vectors(&h, &z);
    Ok(Eigenpairs {
        values,
        vectors,
        sweeps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn residual(m: &Array2<Complex64>, lambda: Complex64, v: &[Complex64]) -> f64 {
        let n = m.nrows();
        (0..n)
            .map(|i| {
                let hv: Complex64 = (0..n).map(|j| m[[i, j]] * v[j]).sum();
                (hv - lambda * v[i]).norm_sqr()
            })
            .sum::<f64>()
            .sqrt()
    }

    fn random_matrix(n: usize, seed: u64) -> Array2<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Array2::from_shape_fn((n, n), |_| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
    }

    #[test]
    fn givens_annihilates_second_component() {
        let x = Complex64::new(0.3, -1.2);
        let y = Complex64::new(-2.0, 0.7);
        let (c, s, r) = givens(x, y);
        assert!((c * x + s * y - r).norm() < 1e-15);
        assert!((-s.conj() * x + c * y).norm() < 1e-15);
        assert!((c * c + s.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn one_by_one() {
        let m = Array2::from_elem((1, 1), Complex64::new(0.0, -0.55));
        let e = eigenpairs(&m, 100).unwrap();
        assert_eq!(e.values, vec![Complex64::new(0.0, -0.55)]);
        assert_eq!(e.vectors[0], vec![ONE]);
    }

    #[test]
    fn random_matrices_satisfy_residual_and_trace() {
        for (seed, n) in [(1u64, 2usize), (2, 7), (3, 31), (4, 64)] {
            let m = random_matrix(n, seed);
            let e = eigenpairs(&m, 100 * n).unwrap();
            let norm = m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            for (l, v) in e.values.iter().zip(&e.vectors) {
                assert!(residual(&m, *l, v) < 1e-12 * norm, "n = {n}");
            }
            let tr: Complex64 = m.diag().sum();
            let sum: Complex64 = e.values.iter().sum();
            assert!((tr - sum).norm() < 1e-11 * norm);
        }
    }

    #[test]
    fn upper_triangular_input_keeps_its_diagonal() {
        let n = 5;
        let mut m = Array2::from_elem((n, n), ZERO);
        for i in 0..n {
            for j in i..n {
                m[[i, j]] = Complex64::new(i as f64 + 1.0, j as f64 * 0.1);
            }
        }
        let e = eigenpairs(&m, 500).unwrap();
        let mut got: Vec<f64> = e.values.iter().map(|z| z.re).collect();
        got.sort_by(f64::total_cmp);
        for (i, g) in got.iter().enumerate() {
            assert!((g - (i as f64 + 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn jordan_like_block_does_not_hang() {
        // defective: single eigenvalue 2 with a 3-long Jordan chain
        let mut m = Array2::from_elem((3, 3), ZERO);
        for i in 0..3 {
            m[[i, i]] = Complex64::new(2.0, 0.0);
        }
        m[[0, 1]] = ONE;
        m[[1, 2]] = ONE;
        let e = eigenpairs(&m, 300).unwrap();
        for l in e.values {
            assert!((l - Complex64::new(2.0, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn rejects_non_finite_input() {
        let mut m = random_matrix(3, 9);
        m[[1, 2]] = Complex64::new(f64::NAN, 0.0);
        assert!(matches!(eigenpairs(&m, 100), Err(Error::Argument { .. })));
    }

    #[test]
    fn sweep_cap_is_enforced() {
        let m = random_matrix(20, 5);
        assert!(matches!(eigenpairs(&m, 1), Err(Error::NoConvergence { .. })));
    }
}
