//! Dense symmetric matrices, the normalized Laplacian, and a cyclic Jacobi
//! eigensolver. Jacobi is slow but robust and dependency-free; everything
//! spectral here feeds inequality checks, so eigenvalue accuracy (1e-9)
//! matters more than speed.

use crate::error::Error;
use crate::graph::Graph;
use crate::Result;

/// Largest n for which dense spectral computations are allowed.
pub const DEFAULT_DENSE_LIMIT: usize = 4096;

const SYMMETRY_TOL: f64 = 1e-12;
const OFF_NORM_TARGET: f64 = 1e-12;
const EIGENVALUE_TOL: f64 = 1e-9;
const MAX_SWEEPS: usize = 60;

/// Row-major dense symmetric matrix.
#[derive(Clone, Debug)]
pub struct SymMatrix {
    n: usize,
    a: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix {
            n,
            a: vec![0.0; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.n + j] = v;
        self.a[j * self.n + i] = v;
    }

    /// Maximum asymmetry |a_ij - a_ji|.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in i + 1..self.n {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// Frobenius norm of the strict upper triangle.
    fn off_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in i + 1..self.n {
                let x = self.get(i, j);
                s += x * x;
            }
        }
        s.sqrt()
    }

    /// y = x A (row vector times matrix).
    pub fn mul_left(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y = vec![0.0; n];
        for i in 0..n {
            let xi = x[i];
            if xi == 0.0 {
                continue;
            }
            let row = &self.a[i * n..(i + 1) * n];
            for (yj, &aij) in y.iter_mut().zip(row) {
                *yj += xi * aij;
            }
        }
        y
    }
}

/// Sorted eigenvalues of a normalized Laplacian plus achieved accuracy.
#[derive(Clone, Debug)]
pub struct SpectralProfile {
    pub eigenvalues: Vec<f64>,
    pub tolerance: f64,
}

impl SpectralProfile {
    /// Certified conductance lower bound lambda_2 / 2 (Cheeger).
    pub fn phi_lower_bound(&self) -> f64 {
        self.eigenvalues[1] / 2.0
    }

    pub fn lambda(&self, k: usize) -> f64 {
        self.eigenvalues[k - 1]
    }

    pub fn lambda_max(&self) -> f64 {
        *self.eigenvalues.last().unwrap()
    }
}

/// The normalized Laplacian I - D^{-1/2} A D^{-1/2} of a connected simple
/// graph with n at most `dense_limit`.
pub fn normalized_laplacian(g: &Graph, dense_limit: usize) -> Result<SymMatrix> {
    if g.n() > dense_limit {
        return Err(Error::BruteForceLimit(format!(
            "n = {} exceeds dense limit {dense_limit}",
            g.n()
        )));
    }
    g.check_simple()?;
    g.check_min_degree()?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(normalized_laplacian_unchecked(g))
}

/// Same as [`normalized_laplacian`] but skips the connectivity check, for
/// callers that explicitly work with disconnected graphs (e.g. label-extended
/// graphs of satisfiable instances).
pub fn normalized_laplacian_unchecked(g: &Graph) -> SymMatrix {
    let n = g.n();
    let mut m = SymMatrix::zeros(n);
    for v in 0..n {
        m.set(v, v, 1.0);
    }
    for v in 0..n {
        let dv = g.degree(v) as f64;
        for &w in g.neighbors(v) {
            let w = w as usize;
            if v < w {
                let x = -1.0 / (dv * g.degree(w) as f64).sqrt();
                m.set(v, w, x);
            }
        }
    }
    m
}

/// Eigen-decomposition output; `vectors[i]` (when requested) is the
/// normalized eigenvector of `profile.eigenvalues[i]`.
pub struct JacobiOutput {
    pub profile: SpectralProfile,
    pub vectors: Option<Vec<Vec<f64>>>,
}

/// Matrix sizes up to this run cyclic Jacobi; larger ones take the
/// Householder tridiagonalization + implicit-shift QL path, which has the
/// same O(n^3) flops but sequential memory access. Every desk-scale lemma
/// check stays under this limit.
pub const JACOBI_LIMIT: usize = 320;

/// All eigenvalues of a symmetric matrix to 1e-9. Cyclic Jacobi (iterated to
/// off-diagonal norm < 1e-12) up to [`JACOBI_LIMIT`]; tridiagonal QL beyond.
/// The two routes cross-check each other in tests.
pub fn eigenvalues_symmetric(m: &SymMatrix) -> Result<SpectralProfile> {
    if m.n() <= JACOBI_LIMIT {
        Ok(jacobi_eigen(m.clone(), false)?.profile)
    } else {
        Ok(tridiagonal_eigen(m.clone(), false)?.profile)
    }
}

/// Eigen-decomposition choosing the route by size, with eigenvectors.
pub fn eigen_with_vectors(m: &SymMatrix) -> Result<JacobiOutput> {
    if m.n() <= JACOBI_LIMIT {
        jacobi_eigen(m.clone(), true)
    } else {
        tridiagonal_eigen(m.clone(), true)
    }
}

/// Cyclic Jacobi with optional eigenvector accumulation.
pub fn jacobi_eigen(mut m: SymMatrix, want_vectors: bool) -> Result<JacobiOutput> {
    if m.asymmetry() > SYMMETRY_TOL {
        return Err(Error::NotSymmetric);
    }
    let n = m.n;
    // rows of vt are the accumulated eigenvectors
    let mut vt: Vec<f64> = if want_vectors {
        let mut v = vec![0.0; n * n];
        for i in 0..n {
            v[i * n + i] = 1.0;
        }
        v
    } else {
        Vec::new()
    };

    for sweep in 0..MAX_SWEEPS {
        let off = m.off_norm();
        if off < OFF_NORM_TARGET {
            break;
        }
        // skip tiny pivots early on (threshold strategy of cyclic Jacobi)
        let thresh = if sweep < 3 {
            0.2 * off * off / (n * n) as f64
        } else {
            0.0
        };
        for p in 0..n {
            for q in p + 1..n {
                let apq = m.a[p * n + q];
                if apq == 0.0 || apq.abs() <= thresh {
                    continue;
                }
                let app = m.a[p * n + p];
                let aqq = m.a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    1.0 / (2.0 * theta)
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                let tg = t * apq;

                // rotate full rows (branchless), then pin the pivot entries
                rotate_full_rows(&mut m.a, n, p, q, s, tau);
                m.a[p * n + p] = app - tg;
                m.a[q * n + q] = aqq + tg;
                m.a[p * n + q] = 0.0;
                m.a[q * n + p] = 0.0;
                // restore column symmetry from the updated rows
                for j in 0..n {
                    if j != p && j != q {
                        m.a[j * n + p] = m.a[p * n + j];
                        m.a[j * n + q] = m.a[q * n + j];
                    }
                }
                if want_vectors {
                    rotate_full_rows(&mut vt, n, p, q, s, tau);
                }
            }
        }
    }
    let achieved = m.off_norm();
    if achieved >= 1e-8 {
        return Err(Error::Internal(format!(
            "jacobi did not converge: off-norm {achieved:.3e}"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m.a[i * n + i]).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let vectors = want_vectors.then(|| {
        order
            .iter()
            .map(|&i| vt[i * n..(i + 1) * n].to_vec())
            .collect()
    });
    Ok(JacobiOutput {
        profile: SpectralProfile {
            eigenvalues,
            tolerance: EIGENVALUE_TOL.max(achieved),
        },
        vectors,
    })
}

/// Apply the (p,q) rotation to every column of rows p and q.
#[inline]
fn rotate_full_rows(a: &mut [f64], n: usize, p: usize, q: usize, s: f64, tau: f64) {
    let (lo, hi) = (p.min(q), p.max(q));
    let (head, rest) = a.split_at_mut(hi * n);
    let row_p = &mut head[lo * n..lo * n + n];
    let row_q = &mut rest[..n];
    for j in 0..n {
        let g = row_p[j];
        let h = row_q[j];
        row_p[j] = g - s * (h + g * tau);
        row_q[j] = h + s * (g - h * tau);
    }
}

/// Householder reduction to tridiagonal form followed by implicit-shift QL
/// (the classic tred2/tql2 pair). Destroys `m`; when `want_vectors` is set
/// the accumulated transformations come back as rows, sorted with the
/// eigenvalues.
pub fn tridiagonal_eigen(mut m: SymMatrix, want_vectors: bool) -> Result<JacobiOutput> {
    if m.asymmetry() > SYMMETRY_TOL {
        return Err(Error::NotSymmetric);
    }
    let n = m.n();
    let a = &mut m.a;
    let mut d = vec![0.0f64; n]; // diagonal
    let mut e = vec![0.0f64; n]; // sub-diagonal

    // --- tred2: Householder reduction, accumulating transforms in `a` ---
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0f64;
        if l > 0 {
            let scale: f64 = a[i * n..i * n + l + 1].iter().map(|x| x.abs()).sum();
            if scale == 0.0 {
                e[i] = a[i * n + l];
            } else {
                for k in 0..=l {
                    a[i * n + k] /= scale;
                    h += a[i * n + k] * a[i * n + k];
                }
                let f = a[i * n + l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[i * n + l] = f - g;
                let mut f_acc = 0.0;
                for j in 0..=l {
                    if want_vectors {
                        a[j * n + i] = a[i * n + j] / h;
                    }
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += a[j * n + k] * a[i * n + k];
                    }
                    for k in j + 1..=l {
                        g += a[k * n + j] * a[i * n + k];
                    }
                    e[j] = g / h;
                    f_acc += e[j] * a[i * n + j];
                }
                let hh = f_acc / (h + h);
                for j in 0..=l {
                    let f = a[i * n + j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[j * n + k] -= f * e[k] + g * a[i * n + k];
                    }
                }
            }
        } else {
            e[i] = a[i * n + l];
        }
        d[i] = h;
    }
    if want_vectors {
        d[0] = 0.0;
    }
    e[0] = 0.0;
    for i in 0..n {
        if want_vectors {
            if d[i] != 0.0 {
                for j in 0..i {
                    let mut g = 0.0;
                    for k in 0..i {
                        g += a[i * n + k] * a[k * n + j];
                    }
                    for k in 0..i {
                        a[k * n + j] -= g * a[k * n + i];
                    }
                }
            }
            d[i] = a[i * n + i];
            a[i * n + i] = 1.0;
            for j in 0..i {
                a[j * n + i] = 0.0;
                a[i * n + j] = 0.0;
            }
        } else {
            d[i] = a[i * n + i];
        }
    }

    // --- tql2: implicit-shift QL on (d, e) ---
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m_idx = l;
            while m_idx < n - 1 {
                let dd = d[m_idx].abs() + d[m_idx + 1].abs();
                if e[m_idx].abs() <= f64::EPSILON * dd {
                    break;
                }
                m_idx += 1;
            }
            if m_idx == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(Error::Internal("tql2 did not converge".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            let sign_r = if g >= 0.0 { r.abs() } else { -r.abs() };
            g = d[m_idx] - d[l] + e[l] / (g + sign_r);
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0f64;
            let mut broke_early = false;
            for i in (l..m_idx).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m_idx] = 0.0;
                    broke_early = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if want_vectors {
                    for k in 0..n {
                        f = a[k * n + i + 1];
                        a[k * n + i + 1] = s * a[k * n + i] + c * f;
                        a[k * n + i] = c * a[k * n + i] - s * f;
                    }
                }
            }
            if broke_early {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m_idx] = 0.0;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let vectors = want_vectors.then(|| {
        order
            .iter()
            .map(|&col| (0..n).map(|row| a[row * n + col]).collect())
            .collect()
    });
    Ok(JacobiOutput {
        profile: SpectralProfile {
            eigenvalues,
            tolerance: EIGENVALUE_TOL,
        },
        vectors,
    })
}

/// Validate the invariants a spectral profile of a connected normalized
/// Laplacian must satisfy; used by tests and the generation certificates.
pub fn check_profile_invariants(p: &SpectralProfile, n: usize) -> Result<()> {
    let tol = 1e-8;
    if p.eigenvalues.len() != n {
        return Err(Error::Internal("eigenvalue count mismatch".into()));
    }
    if p.eigenvalues[0].abs() > tol {
        return Err(Error::Internal(format!(
            "lambda_1 = {} not zero",
            p.eigenvalues[0]
        )));
    }
    if p.eigenvalues.iter().any(|&l| l < -tol || l > 2.0 + tol) {
        return Err(Error::Internal("eigenvalue outside [0, 2]".into()));
    }
    let trace: f64 = p.eigenvalues.iter().sum();
    if (trace - n as f64).abs() > n as f64 * 1e-9 {
        return Err(Error::Internal(format!(
            "trace {} deviates from n = {n}",
            trace
        )));
    }
    Ok(())
}
