//! Hermitian eigendecomposition, operator 2-norm, PSD square roots and
//! pseudoinverses, and general complex eigenvalues.
//!
//! Everything here is written for the small dense matrices (n <= 16) the
//! rest of the crate works with: cyclic Jacobi for Hermitian problems and a
//! shifted Hessenberg QR iteration for non-normal spectra.

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Real;

const MAX_JACOBI_SWEEPS: usize = 64;
const MAX_QR_ITERATIONS_PER_EIGENVALUE: usize = 60;

/// Numerical thresholds used across the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances<T: Real = f64> {
    /// Relative cutoff below which eigenvalues of a weight count as zero.
    pub rank_tol: T,
    /// Residual target of the Jacobi eigensolver.
    pub eig_tol: T,
    /// Slack allowance when comparing inequality chains.
    pub chain_tol: T,
    /// Target error of the theta optimizer.
    pub theta_tol: T,
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        // f64 gets the nominal values; f32 is floored at a few ulps.
        let eps = T::epsilon();
        Self {
            rank_tol: T::lit(1e-12).max(eps * T::lit(8.0)),
            eig_tol: T::lit(1e-12).max(eps * T::lit(8.0)),
            chain_tol: T::lit(1e-7).max(eps * T::lit(1e3)),
            theta_tol: T::lit(1e-10).max(eps * T::lit(64.0)),
        }
    }
}

impl<T: Real> Tolerances<T> {
    pub fn validate(&self) -> Result<()> {
        let all_positive = [self.rank_tol, self.eig_tol, self.chain_tol, self.theta_tol]
            .iter()
            .all(|&v| v > T::zero() && v.is_finite());
        if !all_positive {
            return Err(Error::InvalidTolerances("all tolerances must be finite and strictly positive".into()));
        }
        if self.rank_tol >= T::lit(1e-6) {
            return Err(Error::InvalidTolerances(format!(
                "rank_tol must be below 1e-6, got {}",
                self.rank_tol
            )));
        }
        Ok(())
    }

    pub fn with_chain_tol(mut self, chain_tol: T) -> Self {
        self.chain_tol = chain_tol;
        self
    }
}

/// Eigendecomposition `M = V diag(values) V^*` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T: Real = f64> {
    /// Eigenvalues in ascending order.
    pub values: Vec<T>,
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub vectors: Matrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    /// `V diag(f(λ)) V^*`.
    pub fn apply_fn(&self, mut f: impl FnMut(T) -> T) -> Matrix<T> {
        let n = self.values.len();
        let fv: Vec<T> = self.values.iter().map(|&l| f(l)).collect();
        let v = &self.vectors;
        Matrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| v[(i, k)] * v[(j, k)].conj() * fv[k])
                .sum::<Complex<T>>()
        })
    }

    pub fn reconstruct(&self) -> Matrix<T> {
        self.apply_fn(|l| l)
    }

    pub fn max_value(&self) -> T {
        self.values.last().copied().unwrap_or_else(T::zero)
    }

    pub fn min_value(&self) -> T {
        self.values.first().copied().unwrap_or_else(T::zero)
    }
}

fn check_hermitian<T: Real>(m: &Matrix<T>, eig_tol: T) -> Result<usize> {
    let n = m.square_dim()?;
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let defect = m.hermitian_defect();
    if defect > eig_tol * (T::one() + m.frobenius_norm()) {
        return Err(Error::NotHermitian {
            defect: defect.to_f64_lossy(),
        });
    }
    Ok(n)
}

/// Cyclic complex Jacobi. Works in place on a Hermitian matrix; when
/// `vectors` is given the rotations are accumulated into it.
fn jacobi_in_place<T: Real>(a: &mut Matrix<T>, mut vectors: Option<&mut Matrix<T>>, eig_tol: T) -> Result<()> {
    let n = a.rows();
    let scale = a.frobenius_norm();
    if scale == T::zero() || n < 2 {
        return Ok(());
    }
    let target = eig_tol * scale;
    let tiny = T::min_positive_value() / T::epsilon();
    for _ in 0..MAX_JACOBI_SWEEPS {
        if a.off_diagonal_norm() <= target {
            return Ok(());
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let b = a[(p, q)];
                let abs_b = b.norm();
                if abs_b <= tiny {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let phase = b / abs_b; // e^{iφ}
                let theta = (aqq - app) / (abs_b + abs_b);
                let t = if theta >= T::zero() {
                    T::one() / (theta + (theta * theta + T::one()).sqrt())
                } else {
                    -T::one() / (-theta + (theta * theta + T::one()).sqrt())
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                // Rotation V = [[c, s e^{iφ}], [-s e^{-iφ}, c]] on columns p, q.
                let vpq = phase * s;
                let vqp = -phase.conj() * s;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c + akq * vqp;
                    a[(k, q)] = akp * vpq + akq * c;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c + aqk * vqp.conj();
                    a[(q, k)] = apk * vpq.conj() + aqk * c;
                }
                a[(p, q)] = Complex::zero();
                a[(q, p)] = Complex::zero();
                a[(p, p)].im = T::zero();
                a[(q, q)].im = T::zero();
                if let Some(v) = vectors.as_deref_mut() {
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * c + vkq * vqp;
                        v[(k, q)] = vkp * vpq + vkq * c;
                    }
                }
            }
        }
    }
    if a.off_diagonal_norm() <= target {
        Ok(())
    } else {
        Err(Error::NoConvergence)
    }
}

/// Full Hermitian eigendecomposition with ascending eigenvalues.
pub fn hermitian_eig<T: Real>(m: &Matrix<T>, tol: &Tolerances<T>) -> Result<HermitianEigen<T>> {
    let n = check_hermitian(m, tol.eig_tol)?;
    let mut a = m.hermitian_part();
    let mut v = Matrix::identity(n);
    jacobi_in_place(&mut a, Some(&mut v), tol.eig_tol)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).expect("finite eigenvalues"));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = Matrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

/// Eigenvalues only (ascending); skips eigenvector accumulation.
pub fn hermitian_eigenvalues<T: Real>(m: &Matrix<T>, tol: &Tolerances<T>) -> Result<Vec<T>> {
    check_hermitian(m, tol.eig_tol)?;
    let mut a = m.hermitian_part();
    jacobi_in_place(&mut a, None, tol.eig_tol)?;
    let mut values: Vec<T> = a.diagonal().iter().map(|z| z.re).collect();
    values.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    Ok(values)
}

/// Largest eigenvalue of a Hermitian matrix. The input is not re-validated;
/// callers pass matrices that are Hermitian by construction.
pub(crate) fn lambda_max_unchecked<T: Real>(m: &Matrix<T>, eig_tol: T) -> T {
    let n = m.rows();
    match n {
        0 => T::zero(),
        1 => m[(0, 0)].re,
        2 => {
            let a = m[(0, 0)].re;
            let d = m[(1, 1)].re;
            let b = (m[(0, 1)] + m[(1, 0)].conj()) * T::lit(0.5);
            let half = (a - d) * T::lit(0.5);
            (a + d) * T::lit(0.5) + (half * half + b.norm_sqr()).sqrt()
        }
        3 | 4 => lambda_max_small(m, eig_tol),
        _ => {
            let mut a = m.hermitian_part();
            // Jacobi on a Hermitian input converges within the sweep cap.
            let _ = jacobi_in_place(&mut a, None, eig_tol);
            a.diagonal().iter().map(|z| z.re).fold(T::neg_infinity(), T::max)
        }
    }
}

/// Eigenvalue-only cyclic Jacobi on a stack copy, for n <= 4. Only the upper
/// triangle is kept; the pivot diagonal uses `a_pp - t|b|`, `a_qq + t|b|`.
fn lambda_max_small<T: Real>(m: &Matrix<T>, eig_tol: T) -> T {
    let n = m.rows();
    let half = T::lit(0.5);
    let mut d = [T::zero(); 4];
    let mut a = [[Complex::<T>::zero(); 4]; 4];
    let mut scale = T::zero();
    for i in 0..n {
        d[i] = m[(i, i)].re;
        scale += d[i] * d[i];
        for j in i + 1..n {
            a[i][j] = (m[(i, j)] + m[(j, i)].conj()) * half;
            scale += a[i][j].norm_sqr() * T::lit(2.0);
        }
    }
    let target = eig_tol * eig_tol * scale;
    let tiny = T::min_positive_value() / T::epsilon();
    for _ in 0..MAX_JACOBI_SWEEPS {
        let mut off = T::zero();
        for i in 0..n {
            for j in i + 1..n {
                off += a[i][j].norm_sqr();
            }
        }
        if off + off <= target {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let b = a[p][q];
                let abs_b = b.norm();
                if abs_b <= tiny {
                    continue;
                }
                let phase = b / abs_b;
                let theta = (d[q] - d[p]) / (abs_b + abs_b);
                let t = if theta >= T::zero() {
                    T::one() / (theta + (theta * theta + T::one()).sqrt())
                } else {
                    -T::one() / (-theta + (theta * theta + T::one()).sqrt())
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                d[p] -= t * abs_b;
                d[q] += t * abs_b;
                a[p][q] = Complex::zero();
                let vpq = phase * s;
                let vqp = -phase.conj() * s;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    // Column entries (k, p), (k, q) of the full Hermitian matrix.
                    let akp = if k < p { a[k][p] } else { a[p][k].conj() };
                    let akq = if k < q { a[k][q] } else { a[q][k].conj() };
                    let nkp = akp * c + akq * vqp;
                    let nkq = akp * vpq + akq * c;
                    if k < p {
                        a[k][p] = nkp;
                    } else {
                        a[p][k] = nkp.conj();
                    }
                    if k < q {
                        a[k][q] = nkq;
                    } else {
                        a[q][k] = nkq.conj();
                    }
                }
            }
        }
    }
    d[..n].iter().copied().fold(T::neg_infinity(), T::max)
}

/// Largest eigenvalue and a unit eigenvector of a Hermitian matrix.
pub(crate) fn top_eigenpair<T: Real>(m: &Matrix<T>, tol: &Tolerances<T>) -> Result<(T, Vec<Complex<T>>)> {
    let e = hermitian_eig(m, tol)?;
    let n = e.values.len();
    Ok((e.max_value(), e.vectors.column(n - 1)))
}

/// Operator 2-norm (largest singular value) via the spectrum of `M^* M`.
pub fn operator_norm<T: Real>(m: &Matrix<T>) -> Result<T> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let tol = Tolerances::<T>::default();
    Ok(operator_norm_unchecked(m, tol.eig_tol))
}

pub(crate) fn operator_norm_unchecked<T: Real>(m: &Matrix<T>, eig_tol: T) -> T {
    if m.rows() == 0 || m.cols() == 0 {
        return T::zero();
    }
    let gram = if m.cols() <= m.rows() {
        m.adjoint().matmul(m)
    } else {
        m.matmul(&m.adjoint())
    };
    lambda_max_unchecked(&gram, eig_tol).max(T::zero()).sqrt()
}

/// Square root, pseudoinverses and range data of a PSD matrix.
#[derive(Debug, Clone)]
pub struct PsdFunctions<T: Real = f64> {
    pub sqrt: Matrix<T>,
    pub sqrt_pinv: Matrix<T>,
    pub pinv: Matrix<T>,
    pub range_proj: Matrix<T>,
    pub rank: usize,
    /// Eigenvalues after clipping (ascending).
    pub eigenvalues: Vec<T>,
    /// Columns spanning the range, one per retained eigenvalue.
    pub range_basis: Matrix<T>,
    /// Retained (positive) eigenvalues matching `range_basis` columns.
    pub range_eigenvalues: Vec<T>,
}

/// Spectral functions of a PSD matrix with a relative zero cutoff
/// `rank_tol * λ_max`.
pub fn psd_functions<T: Real>(a: &Matrix<T>, tol: &Tolerances<T>) -> Result<PsdFunctions<T>> {
    let e = hermitian_eig(a, tol)?;
    let n = e.values.len();
    let lmax = e.max_value();
    let lmin = e.min_value();
    let cutoff = tol.rank_tol * lmax.max(T::zero());
    if lmin < -cutoff {
        return Err(Error::NotPsd {
            min_eigenvalue: lmin.to_f64_lossy(),
        });
    }
    let clipped: Vec<T> = e
        .values
        .iter()
        .map(|&l| if lmax <= T::zero() || l <= cutoff { T::zero() } else { l })
        .collect();
    let keep: Vec<usize> = (0..n).filter(|&k| clipped[k] > T::zero()).collect();
    let rank = keep.len();
    let clipped_eig = HermitianEigen {
        values: clipped.clone(),
        vectors: e.vectors.clone(),
    };
    let inv = |l: T| if l > T::zero() { T::one() / l } else { T::zero() };
    let sqrt = clipped_eig.apply_fn(|l| l.sqrt());
    let sqrt_pinv = clipped_eig.apply_fn(|l| inv(l).sqrt());
    let pinv = clipped_eig.apply_fn(inv);
    let range_proj = clipped_eig.apply_fn(|l| if l > T::zero() { T::one() } else { T::zero() });
    let range_basis = Matrix::from_fn(n, rank, |i, j| e.vectors[(i, keep[j])]);
    let range_eigenvalues = keep.iter().map(|&k| clipped[k]).collect();
    Ok(PsdFunctions {
        sqrt,
        sqrt_pinv,
        pinv,
        range_proj,
        rank,
        eigenvalues: clipped,
        range_basis,
        range_eigenvalues,
    })
}

/// Eigenvalues of a general square complex matrix (Hessenberg reduction
/// followed by shifted QR with deflation). Order is unspecified.
pub fn eigenvalues<T: Real>(m: &Matrix<T>) -> Result<Vec<Complex<T>>> {
    let n = m.square_dim()?;
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut h = m.clone();
    hessenberg_in_place(&mut h);
    let eps = T::epsilon();
    let mut out = Vec::with_capacity(n);
    let mut hi = n - 1;
    let mut iters = 0usize;
    loop {
        if hi == 0 {
            out.push(h[(0, 0)]);
            break;
        }
        // Find the start of the active unreduced block.
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let diag = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
            let floor = if diag > T::zero() { diag } else { h.max_abs() };
            if sub <= eps * floor {
                h[(lo, lo - 1)] = Complex::zero();
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            out.push(h[(hi, hi)]);
            hi -= 1;
            iters = 0;
            continue;
        }
        iters += 1;
        if iters > MAX_QR_ITERATIONS_PER_EIGENVALUE {
            return Err(Error::NoConvergence);
        }
        let shift = if iters % 11 == 0 {
            // Exceptional shift to break cycles.
            h[(hi, hi)] + Complex::new(h[(hi, hi - 1)].norm() * T::lit(0.75), T::zero())
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        qr_step(&mut h, lo, hi, shift);
    }
    Ok(out)
}

fn wilkinson_shift<T: Real>(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> Complex<T> {
    let half = T::lit(0.5);
    let mean = (a + d) * half;
    let disc = ((a - d) * half * ((a - d) * half) + b * c).sqrt();
    let l1 = mean + disc;
    let l2 = mean - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// One explicitly shifted QR step on the window `lo..=hi` using Givens rotations.
fn qr_step<T: Real>(h: &mut Matrix<T>, lo: usize, hi: usize, shift: Complex<T>) {
    for k in lo..=hi {
        h[(k, k)] -= shift;
    }
    let mut rotations = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let x = h[(k, k)];
        let y = h[(k + 1, k)];
        let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
        let (c, s) = if r == T::zero() {
            (Complex::one(), Complex::zero())
        } else {
            (x / r, y / r)
        };
        // G = [[c̄, s̄], [-s, c]] zeroes the subdiagonal entry.
        for j in k..=hi {
            let a = h[(k, j)];
            let b = h[(k + 1, j)];
            h[(k, j)] = c.conj() * a + s.conj() * b;
            h[(k + 1, j)] = -s * a + c * b;
        }
        rotations.push((c, s));
    }
    for (idx, &(c, s)) in rotations.iter().enumerate() {
        let k = lo + idx;
        // Multiply on the right by G^*.
        for i in lo..=k + 1 {
            let a = h[(i, k)];
            let b = h[(i, k + 1)];
            h[(i, k)] = a * c + b * s;
            h[(i, k + 1)] = -a * s.conj() + b * c.conj();
        }
    }
    for k in lo..=hi {
        h[(k, k)] += shift;
    }
}

fn hessenberg_in_place<T: Real>(h: &mut Matrix<T>) {
    let n = h.rows();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let mut v: Vec<Complex<T>> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let norm_x = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if norm_x == T::zero() {
            continue;
        }
        let x0 = v[0];
        let phase = if x0.norm() == T::zero() {
            Complex::one()
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm_x;
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if vnorm == T::zero() {
            continue;
        }
        for z in &mut v {
            *z = *z / vnorm;
        }
        let two = T::lit(2.0);
        // H <- (I - 2vv^*) H on rows k+1..n.
        for j in 0..n {
            let dot: Complex<T> = v.iter().enumerate().map(|(idx, vi)| vi.conj() * h[(k + 1 + idx, j)]).sum();
            for (idx, vi) in v.iter().enumerate() {
                h[(k + 1 + idx, j)] -= *vi * dot * two;
            }
        }
        // H <- H (I - 2vv^*) on columns k+1..n.
        for i in 0..n {
            let dot: Complex<T> = v.iter().enumerate().map(|(idx, vi)| h[(i, k + 1 + idx)] * *vi).sum();
            for (idx, vi) in v.iter().enumerate() {
                h[(i, k + 1 + idx)] -= dot * vi.conj() * two;
            }
        }
        for i in k + 2..n {
            h[(i, k)] = Complex::zero();
        }
    }
}

/// Largest eigenvalue modulus.
pub fn spectral_radius<T: Real>(m: &Matrix<T>) -> Result<T> {
    Ok(eigenvalues(m)?.iter().map(|z| z.norm()).fold(T::zero(), T::max))
}
