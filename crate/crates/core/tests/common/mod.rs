//! Independent oracles built on nalgebra's dense decompositions.
#![allow(dead_code)]

use nalgebra::{Complex, DMatrix, SymmetricEigen};
use weighted_radius::Matrix;

pub type C = Complex<f64>;
pub type M = DMatrix<C>;

pub fn to_na(m: &Matrix<f64>) -> M {
    let n = m.rows();
    DMatrix::from_fn(n, m.cols(), |i, j| m[(i, j)])
}

pub fn from_na(m: &M) -> Matrix<f64> {
    Matrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

pub fn lambda_max(h: &M) -> f64 {
    let h = (h + h.adjoint()).scale(0.5);
    SymmetricEigen::new(h).eigenvalues.max()
}

pub fn op_norm(m: &M) -> f64 {
    m.singular_values().max()
}

/// `A^{1/2}` and `(A^{1/2})^+` with a relative cutoff.
pub fn psd_sqrt_pair(a: &M) -> (M, M) {
    let e = SymmetricEigen::new(a.clone());
    let top = e.eigenvalues.iter().cloned().fold(0.0, f64::max);
    let n = a.nrows();
    let mut s = DMatrix::<C>::zeros(n, n);
    let mut sp = DMatrix::<C>::zeros(n, n);
    for k in 0..n {
        let l = e.eigenvalues[k];
        if l > 1e-12 * top {
            let v = e.eigenvectors.column(k);
            let outer = &v * v.adjoint();
            s += outer.scale(l.sqrt());
            sp += outer.scale(1.0 / l.sqrt());
        }
    }
    (s, sp)
}

/// `A^{1/2} x (A^{1/2})^+`.
pub fn compressed(a: &Matrix<f64>, x: &Matrix<f64>) -> M {
    let (s, sp) = psd_sqrt_pair(&to_na(a));
    s * to_na(x) * sp
}

/// `‖x‖_a` as `‖A^{1/2} x (A^{1/2})^+‖`.
pub fn seminorm(a: &Matrix<f64>, x: &Matrix<f64>) -> f64 {
    op_norm(&compressed(a, x))
}

fn hermitian_part_at(m: &M, theta: f64) -> M {
    let e = Complex::from_polar(1.0, theta);
    (m * e + m.adjoint() * e.conj()).scale(0.5)
}

fn golden(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - g * (hi - lo);
    let mut d = lo + g * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    while hi - lo > 1e-11 {
        if fc >= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - g * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + g * (hi - lo);
            fd = f(d);
        }
    }
    fc.max(fd)
}

/// Classical numerical radius: dense angle grid, then golden refinement
/// around the best few grid points.
pub fn numerical_radius(m: &M) -> f64 {
    let n_grid = 4096;
    let h = std::f64::consts::TAU / n_grid as f64;
    let f = |th: f64| lambda_max(&hermitian_part_at(m, th));
    let vals: Vec<f64> = (0..n_grid).map(|k| f(k as f64 * h)).collect();
    let mut idx: Vec<usize> = (0..n_grid).collect();
    idx.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]));
    let mut best = vals[idx[0]];
    for &k in idx.iter().take(8) {
        let th = k as f64 * h;
        best = best.max(golden(&f, th - h, th + h));
    }
    best
}

/// Numerical radius of a 2×2 matrix from its elliptical range:
/// foci at the eigenvalues, minor semi-axis ½√(‖M‖_F² − |λ₁|² − |λ₂|²).
pub fn radius_2x2(m: &M, samples: usize) -> f64 {
    let tr = m[(0, 0)] + m[(1, 1)];
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let disc = (tr * tr - det * 4.0).sqrt();
    let (l1, l2) = ((tr + disc) * 0.5, (tr - disc) * 0.5);
    let fro2: f64 = m.iter().map(|z| z.norm_sqr()).sum();
    let b = 0.5 * (fro2 - l1.norm_sqr() - l2.norm_sqr()).max(0.0).sqrt();
    let half_gap = (l1 - l2).norm() * 0.5;
    let a = (b * b + half_gap * half_gap).sqrt();
    let dir = if half_gap > 0.0 { (l1 - l2) / (l1 - l2).norm() } else { Complex::new(1.0, 0.0) };
    let c = (l1 + l2) * 0.5;
    (0..samples)
        .map(|k| {
            let phi = std::f64::consts::TAU * k as f64 / samples as f64;
            (c + dir * Complex::new(a * phi.cos(), b * phi.sin())).norm()
        })
        .fold(0.0, f64::max)
}

pub fn spectral_radius(m: &M) -> f64 {
    m.clone()
        .schur()
        .eigenvalues()
        .expect("complex Schur form yields eigenvalues")
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}
