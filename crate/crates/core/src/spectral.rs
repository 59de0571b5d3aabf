//! `A`-spectral radius, distance to the scalars, the `A`-numerical index and
//! the character model of the commutative (diagonal) case.

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::ensemble::{complex_gaussian, stream_rng};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, lambda_max_unchecked, operator_norm_unchecked, spectral_radius};
use crate::matrix::Matrix;
use crate::radius::{a_numerical_radius, sup_from_grid, Bounds, COARSE_GRID};
use crate::scalar::{cis, Real};
use crate::weighted::{structural_tol, Weight};

/// Number of squarings used by the limit method (power `2^11`).
pub const LIMIT_SQUARINGS: u32 = 11;
const POLAR_ANGLES: usize = 24;
const POLAR_RADII: usize = 16;
const DESCENT_STEPS: usize = 48;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralRadius<T: Real = f64> {
    /// Largest eigenvalue modulus of the compressed matrix.
    pub r_eig: T,
    /// `‖x^(2^k)‖_a^(1/2^k)`.
    pub r_limit: T,
}

/// `r_a(x)` by eigenvalues of the compression and by repeated squaring.
pub fn a_spectral_radius<T: Real>(w: &Weight<T>, x: &Matrix<T>) -> Result<SpectralRadius<T>> {
    let xr = w.compress_reduced(x)?;
    let r_eig = spectral_radius(&xr)?;
    Ok(SpectralRadius {
        r_eig,
        r_limit: power_limit(&xr, LIMIT_SQUARINGS, w.tolerances().eig_tol),
    })
}

/// `‖m^(2^k)‖^(1/2^k)` with the log of the norm tracked separately.
fn power_limit<T: Real>(m: &Matrix<T>, squarings: u32, eig_tol: T) -> T {
    let n0 = operator_norm_unchecked(m, eig_tol);
    if n0 == T::zero() {
        return T::zero();
    }
    let mut log_norm = n0.ln();
    let mut cur = m.scale_real(n0.recip());
    for _ in 0..squarings {
        let sq = cur.matmul(&cur);
        let nrm = operator_norm_unchecked(&sq, eig_tol);
        if nrm == T::zero() || !nrm.is_finite() {
            return T::zero();
        }
        log_norm = log_norm + log_norm + nrm.ln();
        cur = sq.scale_real(nrm.recip());
    }
    (log_norm / T::lit(2f64.powi(squarings as i32))).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceResult<T: Real = f64> {
    /// `d_a(x) = inf_ζ v_a(x − ζ1)`.
    pub value: T,
    pub zeta_star: Complex<T>,
    /// Objective evaluations spent.
    pub iterations: usize,
}

/// `v_a(x − ζ1)` for many `ζ`, through the support function
/// `h(θ) = λ_max(ℜ(e^{iθ} x~))`: `v_a(x − ζ1) = max_θ [h(θ) − Re(e^{iθ} ζ)]`.
struct ShiftedRadius<T: Real> {
    xr: Matrix<T>,
    adj: Matrix<T>,
    grid: Vec<T>,
    cis_grid: Vec<Complex<T>>,
    norm: T,
    eig_tol: T,
    theta_tol: T,
    evaluations: usize,
}

impl<T: Real> ShiftedRadius<T> {
    fn new(w: &Weight<T>, x: &Matrix<T>) -> Result<Self> {
        let xr = w.compress_reduced(x)?;
        let adj = xr.adjoint();
        let eig_tol = w.tolerances().eig_tol;
        let n = 2 * COARSE_GRID;
        let cis_grid: Vec<Complex<T>> = (0..n)
            .map(|k| cis(T::lit(2.0 * std::f64::consts::PI * k as f64 / n as f64)))
            .collect();
        let mut s = Self {
            norm: operator_norm_unchecked(&xr, eig_tol),
            xr,
            adj,
            grid: Vec::new(),
            cis_grid,
            eig_tol,
            theta_tol: w.tolerances().theta_tol,
            evaluations: 0,
        };
        s.grid = s.cis_grid.iter().map(|&e| s.support(e)).collect();
        Ok(s)
    }

    fn support(&self, e: Complex<T>) -> T {
        let half = T::lit(0.5);
        lambda_max_unchecked(&self.xr.lin_comb(e * half, &self.adj, e.conj() * half), self.eig_tol)
    }

    fn eval(&mut self, zeta: Complex<T>) -> Result<T> {
        self.evaluations += 1;
        let shifted: Vec<T> = self
            .grid
            .iter()
            .zip(&self.cis_grid)
            .map(|(&h, &e)| h - (e * zeta).re)
            .collect();
        let opt = sup_from_grid(
            &shifted,
            T::PI() + T::PI(),
            |th| {
                let e = cis(th);
                self.support(e) - (e * zeta).re
            },
            Bounds::sinusoidal(self.norm + zeta.norm()),
            self.theta_tol,
        )?;
        Ok(opt.value)
    }
}

/// Golden-section minimisation of a convex function on `[lo, hi]`.
fn golden_min<T: Real>(
    mut f: impl FnMut(T) -> Result<T>,
    mut lo: T,
    mut hi: T,
    width: T,
) -> Result<(T, T)> {
    let inv_phi = T::lit(0.618_033_988_749_894_9);
    let mut c = hi - (hi - lo) * inv_phi;
    let mut d = lo + (hi - lo) * inv_phi;
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let mut best = if fc <= fd { (c, fc) } else { (d, fd) };
    for _ in 0..200 {
        if hi - lo <= width {
            break;
        }
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - (hi - lo) * inv_phi;
            fc = f(c)?;
            if fc < best.1 {
                best = (c, fc);
            }
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + (hi - lo) * inv_phi;
            fd = f(d)?;
            if fd < best.1 {
                best = (d, fd);
            }
        }
    }
    Ok(best)
}

/// `d_a(x)`. The objective `ζ ↦ v_a(x − ζ1)` is convex, so a polar grid
/// over the disk `|ζ| ≤ 2 v_a(x)` followed by nested golden-section search
/// (a convex partial minimum is convex) locates the global minimum.
pub fn distance_to_scalars<T: Real>(w: &Weight<T>, x: &Matrix<T>) -> Result<DistanceResult<T>> {
    let v = a_numerical_radius(w, x)?.value;
    if v == T::zero() {
        return Ok(DistanceResult {
            value: T::zero(),
            zeta_star: Complex::zero(),
            iterations: 0,
        });
    }
    let mut obj = ShiftedRadius::new(w, x)?;
    let radius = v + v;
    let mut best = (Complex::zero(), obj.eval(Complex::zero())?);
    for i in 1..=POLAR_RADII {
        let rho = radius * T::lit(i as f64 / POLAR_RADII as f64);
        for k in 0..POLAR_ANGLES {
            let z = cis(T::lit(2.0 * std::f64::consts::PI * k as f64 / POLAR_ANGLES as f64)) * rho;
            let val = obj.eval(z)?;
            if val < best.1 {
                best = (z, val);
            }
        }
    }

    let width = T::lit(1e-9) * (T::one() + radius);
    let (re_star, _) = golden_min(
        |re| {
            let (_, val) = golden_min(|im| obj.eval(Complex::new(re, im)), -radius, radius, width)?;
            Ok(val)
        },
        -radius,
        radius,
        width,
    )?;
    let (im_star, val) = golden_min(|im| obj.eval(Complex::new(re_star, im)), -radius, radius, width)?;
    if val < best.1 {
        best = (Complex::new(re_star, im_star), val);
    }

    // Short compass polish at the final step size.
    let mut step = width * T::lit(16.0);
    for _ in 0..DESCENT_STEPS {
        if step < width {
            break;
        }
        let mut moved = false;
        for d in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)] {
            let z = best.0 + Complex::new(T::lit(d.0), T::lit(d.1)) * step;
            let val = obj.eval(z)?;
            if val < best.1 {
                best = (z, val);
                moved = true;
                break;
            }
        }
        if !moved {
            step = step * T::lit(0.5);
        }
    }

    let shifted = x - &Matrix::identity(w.dim()).scale(best.0);
    let at_best = a_numerical_radius(w, &shifted)?.value;
    let (value, zeta_star) = if at_best <= v { (at_best, best.0) } else { (v, Complex::zero()) };
    Ok(DistanceResult {
        value,
        zeta_star,
        iterations: obj.evaluations,
    })
}

/// Subalgebras over which the index can be estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Subalgebra {
    Full,
    LowerTriangular,
    UpperTriangular,
    Diagonal,
}

impl Subalgebra {
    pub fn name(&self) -> &'static str {
        match self {
            Subalgebra::Full => "full",
            Subalgebra::LowerTriangular => "lower-triangular",
            Subalgebra::UpperTriangular => "upper-triangular",
            Subalgebra::Diagonal => "diagonal",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "full" => Some(Subalgebra::Full),
            "lower-triangular" => Some(Subalgebra::LowerTriangular),
            "upper-triangular" => Some(Subalgebra::UpperTriangular),
            "diagonal" | "commutative-diagonal" => Some(Subalgebra::Diagonal),
            _ => None,
        }
    }

    fn contains(&self, i: usize, j: usize) -> bool {
        match self {
            Subalgebra::Full => true,
            Subalgebra::LowerTriangular => i >= j,
            Subalgebra::UpperTriangular => i <= j,
            Subalgebra::Diagonal => i == j,
        }
    }

    /// Matrix units spanning the subalgebra.
    fn units<T: Real>(&self, n: usize) -> Vec<Matrix<T>> {
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.contains(i, j) {
                    let mut e = Matrix::zeros(n, n);
                    e[(i, j)] = Complex::new(T::one(), T::zero());
                    out.push(e);
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndexVerdict {
    One,
    Half,
    Unresolved,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexEstimate<T: Real = f64> {
    /// Smallest ratio `v_a(x)/‖x‖_a` found.
    pub upper: T,
    /// Certified floor: 1 for verdict one, 1/2 otherwise.
    pub lower: T,
    pub witness: Matrix<T>,
    /// `v_a(witness)/‖witness‖_a`, re-evaluated.
    pub witness_ratio: T,
    pub verdict: IndexVerdict,
    /// Largest ratio among the random samples.
    pub max_sampled_ratio: T,
    pub samples: usize,
}

/// Basis of `{x in subalgebra : P x (I−P) = 0}`.
fn member_basis<T: Real>(w: &Weight<T>, sub: Subalgebra) -> Result<Vec<Matrix<T>>> {
    let n = w.dim();
    let units = sub.units::<T>(n);
    let p = w.range_proj();
    let q = w.kernel_proj();
    let images: Vec<Matrix<T>> = units.iter().map(|e| p.matmul(e).matmul(q)).collect();
    let m = units.len();
    let gram = Matrix::from_fn(m, m, |i, j| {
        images[i]
            .as_slice()
            .iter()
            .zip(images[j].as_slice())
            .map(|(a, b)| a.conj() * b)
            .sum()
    });
    let eig = hermitian_eig(&gram.hermitian_part(), w.tolerances())?;
    let cutoff = structural_tol::<T>() * (T::one() + eig.max_value().abs());
    let mut basis = Vec::new();
    for k in 0..m {
        if eig.values[k] > cutoff {
            continue;
        }
        let mut b = Matrix::zeros(n, n);
        for (l, u) in units.iter().enumerate() {
            b += &u.scale(eig.vectors[(l, k)]);
        }
        // Remove the numerically negligible leakage out of the member space.
        let leak = p.matmul(&b).matmul(q);
        basis.push(&b - &leak);
    }
    Ok(basis)
}

/// Compressed images pairwise commute and are normal: the compressed
/// algebra is commutative, so every member has `v_a(x) = ‖x‖_a`.
fn commutative_certificate<T: Real>(w: &Weight<T>, basis: &[Matrix<T>]) -> bool {
    let red: Vec<Matrix<T>> = basis.iter().map(|b| w.reduce_unchecked(b)).collect();
    let tol = structural_tol::<T>() * T::lit(100.0);
    let scale = |m: &Matrix<T>| T::one() + m.frobenius_norm() * m.frobenius_norm();
    for (i, a) in red.iter().enumerate() {
        if a.commutator(&a.adjoint()).frobenius_norm() > tol * scale(a) {
            return false;
        }
        for b in &red[i + 1..] {
            let s = T::one() + a.frobenius_norm() * b.frobenius_norm();
            if a.commutator(b).frobenius_norm() > tol * s {
                return false;
            }
        }
    }
    true
}

fn ratio<T: Real>(w: &Weight<T>, x: &Matrix<T>) -> Result<Option<T>> {
    let norm = w.seminorm_of_member(x)?;
    if norm <= structural_tol::<T>() {
        return Ok(None);
    }
    Ok(Some(a_numerical_radius(w, &x.scale_real(T::one() / norm))?.value))
}

/// Nilpotent witnesses: `A^{-1/2} E₀₁ A^{1/2}` when `A` is invertible and
/// the subalgebra is full, else member basis elements with `Ax ≠ 0`, `Ax² = 0`,
/// else (full subalgebra) a rank-one nilpotent lifted from range coordinates.
fn half_witness<T: Real>(w: &Weight<T>, sub: Subalgebra, basis: &[Matrix<T>]) -> Result<Option<Matrix<T>>> {
    let n = w.dim();
    let tol = w.tolerances().chain_tol;
    if sub == Subalgebra::Full && n >= 2 && w.is_invertible() {
        let mut e = Matrix::zeros(n, n);
        e[(0, 1)] = Complex::new(T::one(), T::zero());
        return Ok(Some(w.sqrt_pinv().matmul(&e).matmul(w.sqrt())));
    }
    for b in basis {
        if !w.annihilates(b, tol)? && w.annihilates_square(b, tol)? {
            return Ok(Some(b.clone()));
        }
    }
    if sub == Subalgebra::Full && w.rank() >= 2 {
        let mut e = Matrix::zeros(w.rank(), w.rank());
        e[(0, 1)] = Complex::new(T::one(), T::zero());
        return Ok(Some(w.lift_reduced(&e)?));
    }
    Ok(None)
}

/// Estimates `n_a` over a subalgebra (the full matrix algebra by default).
pub fn numerical_index<T: Real>(
    w: &Weight<T>,
    restrict_to: Option<Subalgebra>,
    budget: usize,
    seed: u64,
) -> Result<IndexEstimate<T>> {
    if budget == 0 {
        return Err(Error::InvalidArgument("budget must be >= 1".into()));
    }
    let sub = restrict_to.unwrap_or(Subalgebra::Full);
    let basis = member_basis(w, sub)?;
    let mut rng = stream_rng(seed, 0x1DE7);
    let draw = |rng: &mut rand_chacha::ChaCha8Rng| -> Matrix<T> {
        let mut x = Matrix::zeros(w.dim(), w.dim());
        for b in &basis {
            x += &b.scale(complex_gaussian(rng));
        }
        x
    };

    let mut best: Option<(T, Matrix<T>)> = None;
    let mut max_ratio = T::zero();
    let mut samples = 0;
    if !basis.is_empty() {
        for _ in 0..budget {
            let x = draw(&mut rng);
            if let Some(r) = ratio(w, &x)? {
                samples += 1;
                max_ratio = max_ratio.max(r);
                if best.as_ref().map_or(true, |(b, _)| r < *b) {
                    best = Some((r, x));
                }
            }
        }
    }
    let Some((mut upper, mut witness)) = best else {
        return Err(Error::NoNonzeroSample { budget });
    };

    // Perturbation descent from the best sample.
    let mut eps = T::lit(0.25);
    for _ in 0..budget.min(64) {
        let dir = draw(&mut rng);
        let scale = w.seminorm_of_member(&witness)? / (T::one() + w.seminorm_of_member(&dir)?);
        let cand = &witness + &dir.scale_real(eps * scale);
        match ratio(w, &cand)? {
            Some(r) if r < upper => {
                upper = r;
                witness = cand;
            }
            _ => eps = eps * T::lit(0.5),
        }
    }

    let half = T::lit(0.5);
    let tol = w.tolerances().chain_tol;
    let (verdict, lower) = if commutative_certificate(w, &basis) {
        (IndexVerdict::One, T::one())
    } else if let Some(x) = half_witness(w, sub, &basis)? {
        match ratio(w, &x)? {
            Some(r) if (r - half).abs() <= tol => {
                upper = r;
                witness = x;
                (IndexVerdict::Half, half)
            }
            _ => (IndexVerdict::Unresolved, half),
        }
    } else {
        (IndexVerdict::Unresolved, half)
    };
    let witness_ratio = ratio(w, &witness)?.unwrap_or(upper);
    Ok(IndexEstimate {
        upper,
        lower,
        witness,
        witness_ratio,
        verdict,
        max_sampled_ratio: max_ratio,
        samples,
    })
}

/// Characters of the diagonal model: `x_kk` for every `k` with `A_kk` above
/// the rank cutoff.
pub fn character_values<T: Real>(w: &Weight<T>, x: &Matrix<T>) -> Result<Vec<Complex<T>>> {
    w.check_dim(x)?;
    let a = w.matrix();
    let tol = structural_tol::<T>();
    for m in [a, x] {
        let off = m.off_diagonal_norm();
        if off > tol * (T::one() + m.frobenius_norm()) {
            return Err(Error::NotDiagonal {
                defect: off.to_f64_lossy(),
            });
        }
    }
    let diag = a.diagonal();
    let amax = diag.iter().map(|z| z.re).fold(T::zero(), T::max);
    let cutoff = w.tolerances().rank_tol * amax;
    Ok(diag
        .iter()
        .zip(x.diagonal())
        .filter(|(ak, _)| ak.re > cutoff)
        .map(|(_, xk)| xk)
        .collect())
}
