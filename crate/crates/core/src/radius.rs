//! Weighted real/imaginary parts and the weighted radius
//! `v_(a,(t,s))(x) = sup_θ ‖t e^{iθ} x + s e^{-iθ} x^♯‖_a`, together with the
//! classical numerical radius used as an independent oracle.

use std::f64::consts::PI;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::ensemble::{complex_gaussian, stream_rng};
use crate::error::{Error, Result};
use crate::linalg::{lambda_max_unchecked, operator_norm_unchecked, top_eigenpair, Tolerances};
use crate::matrix::Matrix;
use crate::scalar::{cis, imag_unit, real, Real};
use crate::weighted::Weight;

/// Points of the coarse grid on one period.
pub const COARSE_GRID: usize = 1024;
/// Side of the grid used by the two-angle formula.
pub const TWO_ANGLE_GRID: usize = 256;
/// Refined candidate peaks per supremum.
const MAX_CANDIDATES: usize = 16;
const MAX_GOLDEN_STEPS: usize = 120;

/// Weights `(t, s)` with `t, s >= 0` and `t + s > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightPair<T: Real = f64> {
    t: T,
    s: T,
}

impl<T: Real> WeightPair<T> {
    pub fn new(t: T, s: T) -> Result<Self> {
        if !(t >= T::zero() && s >= T::zero() && t.is_finite() && s.is_finite()) || t + s <= T::zero() {
            return Err(Error::InvalidArgument(format!(
                "weight pair needs t, s >= 0 with t + s > 0, got ({t}, {s})"
            )));
        }
        Ok(Self { t, s })
    }

    /// `(1/2, 1/2)`: the plain `a`-numerical radius.
    pub fn half() -> Self {
        let h = T::lit(0.5);
        Self { t: h, s: h }
    }

    pub fn t(&self) -> T {
        self.t
    }

    pub fn s(&self) -> T {
        self.s
    }

    pub fn max(&self) -> T {
        self.t.max(self.s)
    }

    pub fn sum(&self) -> T {
        self.t + self.s
    }

    pub fn scaled(&self, c: T) -> Result<Self> {
        Self::new(self.t * c, self.s * c)
    }
}

/// Result of a supremum over an angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaOptimum<T: Real = f64> {
    pub value: T,
    /// Maximising angle, reduced into `[0, period)`.
    pub theta_star: T,
    /// Bound on `sup - value` over the refined cells.
    pub certified_error: T,
}

fn check_finite<T: Real>(v: T, theta: T) -> Result<T> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFiniteObjective {
            theta: theta.to_f64_lossy(),
        })
    }
}

/// Golden-section maximisation on `[lo, hi]` given the endpoint values.
/// Stops once the bound on the final bracket is within `gap` of the best
/// value; returns `(best_theta, best_value, bracket_upper_bound)`.
fn golden_max<T: Real>(
    g: &mut impl FnMut(T) -> T,
    (mut lo, mut g_lo): (T, T),
    (mut hi, mut g_hi): (T, T),
    seed: (T, T),
    bounds: Bounds<T>,
    gap: T,
) -> Result<(T, T, T)> {
    let inv_phi = T::lit(0.618_033_988_749_894_9);
    let (mut best_theta, mut best_val) = seed;
    let mut c = hi - (hi - lo) * inv_phi;
    let mut d = lo + (hi - lo) * inv_phi;
    let mut gc = check_finite(g(c), c)?;
    let mut gd = check_finite(g(d), d)?;
    let mut upper = T::infinity();
    for step in 0..=MAX_GOLDEN_STEPS {
        for (th, v) in [(c, gc), (d, gd)] {
            if v > best_val {
                best_val = v;
                best_theta = th;
            }
        }
        let top = g_lo.max(g_hi).max(gc).max(gd);
        let widest = (c - lo).max(d - c).max(hi - d);
        upper = top + bounds.margin(widest);
        if upper - best_val <= gap || step == MAX_GOLDEN_STEPS {
            break;
        }
        if gc >= gd {
            hi = d;
            g_hi = gd;
            d = c;
            gd = gc;
            c = hi - (hi - lo) * inv_phi;
            gc = check_finite(g(c), c)?;
        } else {
            lo = c;
            g_lo = gc;
            c = d;
            gc = gd;
            d = lo + (hi - lo) * inv_phi;
            gd = check_finite(g(d), d)?;
        }
    }
    Ok((best_theta, best_val, upper))
}

fn wrap<T: Real>(theta: T, period: T) -> T {
    let r = theta % period;
    if r < T::zero() {
        r + period
    } else {
        r
    }
}

/// Bounds on the objective used to screen and certify a supremum.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Bounds<T: Real> {
    pub lipschitz: T,
    /// Bound on `|f''|` over a family of smooth functions whose pointwise
    /// supremum is the objective. Every `θ ↦ Re⟨M(θ)v, u⟩` with `M(θ)` a
    /// combination of `e^{±iθ}` satisfies `f'' = -f`, so `sup_θ ‖M(θ)‖` works.
    pub curvature: Option<T>,
}

impl<T: Real> Bounds<T> {
    pub fn lipschitz(l: T) -> Self {
        Self {
            lipschitz: l,
            curvature: None,
        }
    }

    pub fn sinusoidal(l: T) -> Self {
        Self {
            lipschitz: l,
            curvature: Some(l),
        }
    }

    /// How far the objective can rise above the larger endpoint value on
    /// a cell of width `w`.
    fn margin(&self, w: T) -> T {
        match self.curvature {
            Some(k) => (k * w * w / T::lit(8.0)).min(self.lipschitz * w / T::lit(2.0)),
            None => self.lipschitz * w / T::lit(2.0),
        }
    }
}

/// Refines a supremum from precomputed values on the uniform grid
/// `θ_k = k · period / n`. Candidate cells are the discrete local maxima
/// that could still beat the grid maximum (within `K h²/8` under a
/// curvature bound, `L h` otherwise); each is refined by golden section
/// until the bound on its final bracket is within `theta_tol·(1+value)/2`.
pub(crate) fn sup_from_grid<T: Real>(
    grid: &[T],
    period: T,
    mut g: impl FnMut(T) -> T,
    bounds: Bounds<T>,
    theta_tol: T,
) -> Result<ThetaOptimum<T>> {
    let lipschitz = bounds.lipschitz;
    let n = grid.len();
    assert!(n >= 3, "grid too small");
    let h = period / T::lit(n as f64);
    for (k, &v) in grid.iter().enumerate() {
        check_finite(v, h * T::lit(k as f64))?;
    }
    let (mut arg, mut best) = (0usize, grid[0]);
    for (k, &v) in grid.iter().enumerate() {
        if v > best {
            best = v;
            arg = k;
        }
    }
    let grid_best = best;
    let lipschitz = lipschitz.max(T::zero());
    if lipschitz == T::zero() {
        return Ok(ThetaOptimum {
            value: best,
            theta_star: h * T::lit(arg as f64),
            certified_error: T::zero(),
        });
    }
    let margin = match bounds.curvature {
        Some(k) => k * h * h / T::lit(8.0) + theta_tol * (T::one() + grid_best.abs()),
        None => lipschitz * h,
    };
    let screen = grid_best - margin;
    let mut candidates: Vec<usize> = (0..n)
        .filter(|&k| {
            let prev = grid[(k + n - 1) % n];
            let next = grid[(k + 1) % n];
            grid[k] > prev && grid[k] >= next && grid[k] >= screen
        })
        .collect();
    if !candidates.contains(&arg) {
        candidates.push(arg);
    }
    candidates.sort_by(|&a, &b| grid[b].partial_cmp(&grid[a]).expect("finite grid"));
    candidates.truncate(MAX_CANDIDATES);

    let gap = theta_tol * (T::one() + grid_best.abs()) / T::lit(2.0);
    let mut theta_star = h * T::lit(arg as f64);
    let mut uppers = Vec::with_capacity(candidates.len());
    for &k in &candidates {
        let center = h * T::lit(k as f64);
        let left = (center - h, grid[(k + n - 1) % n]);
        let right = (center + h, grid[(k + 1) % n]);
        let (th, val, upper) = golden_max(&mut g, left, right, (center, grid[k]), bounds, gap)?;
        if val > best {
            best = val;
            theta_star = th;
        }
        uppers.push(upper);
    }
    let certified_error = uppers.iter().map(|&u| (u - best).max(T::zero())).fold(T::zero(), T::max);
    Ok(ThetaOptimum {
        value: best,
        theta_star: wrap(theta_star, period),
        certified_error,
    })
}

/// Supremum of a `period`-periodic function.
pub(crate) fn sup_periodic<T: Real>(
    mut g: impl FnMut(T) -> T,
    period: T,
    n_grid: usize,
    bounds: Bounds<T>,
    theta_tol: T,
) -> Result<ThetaOptimum<T>> {
    let h = period / T::lit(n_grid as f64);
    let grid: Vec<T> = (0..n_grid).map(|k| g(h * T::lit(k as f64))).collect();
    sup_from_grid(&grid, period, g, bounds, theta_tol)
}

/// Supremum over `θ ∈ [0, π)` of a continuous π-periodic function whose
/// Lipschitz constant is at most `lipschitz_bound`.
pub fn sup_over_theta<T: Real>(g: impl FnMut(T) -> T, lipschitz_bound: T, theta_tol: T) -> Result<ThetaOptimum<T>> {
    if !(lipschitz_bound >= T::zero()) {
        return Err(Error::InvalidArgument("lipschitz bound must be nonnegative".into()));
    }
    sup_periodic(g, T::PI(), COARSE_GRID, Bounds::lipschitz(lipschitz_bound), theta_tol)
}

/// [`sup_over_theta`] for objectives of the form `θ ↦ ‖M(θ)‖` or
/// `λ_max(M(θ))` with `M(θ)` linear in `(cos θ, sin θ)`, whose norm is at
/// most `bound`; the curvature bound narrows the set of refined cells.
pub fn sup_over_theta_sinusoidal<T: Real>(g: impl FnMut(T) -> T, bound: T, theta_tol: T) -> Result<ThetaOptimum<T>> {
    if !(bound >= T::zero()) {
        return Err(Error::InvalidArgument("bound must be nonnegative".into()));
    }
    sup_periodic(g, T::PI(), COARSE_GRID, Bounds::sinusoidal(bound), theta_tol)
}

/// Reduced compressions of `x` and of its distinguished `A`-adjoint.
#[derive(Debug, Clone)]
pub(crate) struct ReducedPair<T: Real> {
    pub x: Matrix<T>,
    pub sharp: Matrix<T>,
    pub norm: T,
}

pub(crate) fn reduced_pair<T: Real>(w: &Weight<T>, x: &Matrix<T>) -> Result<ReducedPair<T>> {
    w.require_member(x)?;
    let sharp = w.adjoint_unchecked(x);
    let xr = w.reduce_unchecked(x);
    let sr = w.reduce_unchecked(&sharp);
    let norm = operator_norm_unchecked(&xr, w.eig_tol());
    Ok(ReducedPair { x: xr, sharp: sr, norm })
}

/// `(ℜ_(t,s)(x), ℑ_(t,s)(x)) = (t x + s x^♯, -i t x + i s x^♯)`.
pub fn weighted_parts<T: Real>(w: &Weight<T>, x: &Matrix<T>, p: WeightPair<T>) -> Result<(Matrix<T>, Matrix<T>)> {
    let sharp = w.adjoint(x)?;
    let re = x.lin_comb(real(p.t), &sharp, real(p.s));
    let i = imag_unit::<T>();
    let im = x.lin_comb(-i * p.t, &sharp, i * p.s);
    Ok((re, im))
}

impl<T: Real> ReducedPair<T> {
    /// Reduced compression of `ℜ_(t,s)(e^{iθ} x)`.
    fn real_part_at(&self, p: WeightPair<T>, theta: T) -> Matrix<T> {
        let e = cis(theta);
        self.x.lin_comb(e * p.t, &self.sharp, e.conj() * p.s)
    }

    /// Reduced compression of `ℑ_(t,s)(e^{iθ} x)`.
    fn imag_part_at(&self, p: WeightPair<T>, theta: T) -> Matrix<T> {
        let e = cis(theta);
        let i = imag_unit::<T>();
        self.x.lin_comb(-i * e * p.t, &self.sharp, i * e.conj() * p.s)
    }
}

/// `v_(a,(t,s))(x)`: supremum over θ of `‖ℜ_(t,s)(e^{iθ}x)‖_a`.
pub fn weighted_radius<T: Real>(w: &Weight<T>, x: &Matrix<T>, p: WeightPair<T>) -> Result<ThetaOptimum<T>> {
    let rp = reduced_pair(w, x)?;
    let eig_tol = w.eig_tol();
    sup_over_theta_sinusoidal(
        |th| operator_norm_unchecked(&rp.real_part_at(p, th), eig_tol),
        p.sum() * rp.norm,
        w.tolerances().theta_tol,
    )
}

/// The same supremum taken over the weighted imaginary parts.
pub fn weighted_radius_imaginary<T: Real>(
    w: &Weight<T>,
    x: &Matrix<T>,
    p: WeightPair<T>,
) -> Result<ThetaOptimum<T>> {
    let rp = reduced_pair(w, x)?;
    let eig_tol = w.eig_tol();
    sup_over_theta_sinusoidal(
        |th| operator_norm_unchecked(&rp.imag_part_at(p, th), eig_tol),
        p.sum() * rp.norm,
        w.tolerances().theta_tol,
    )
}

/// `θ ↦ ‖ℜ_(t,s)(e^{iθ}x)‖_a` sampled at the given angles.
pub fn real_part_profile<T: Real>(w: &Weight<T>, x: &Matrix<T>, p: WeightPair<T>, thetas: &[T]) -> Result<Vec<T>> {
    let rp = reduced_pair(w, x)?;
    Ok(thetas
        .iter()
        .map(|&th| operator_norm_unchecked(&rp.real_part_at(p, th), w.eig_tol()))
        .collect())
}

/// `sup_θ |‖ℜ_(t,s)(e^{iθ}x)‖²_a − ‖ℑ_(t,s)(e^{iθ}x)‖²_a|`.
pub fn sup_real_imag_gap<T: Real>(w: &Weight<T>, x: &Matrix<T>, p: WeightPair<T>) -> Result<ThetaOptimum<T>> {
    let rp = reduced_pair(w, x)?;
    let eig_tol = w.eig_tol();
    let bound = p.sum() * rp.norm;
    sup_over_theta(
        |th| {
            let r = operator_norm_unchecked(&rp.real_part_at(p, th), eig_tol);
            let i = operator_norm_unchecked(&rp.imag_part_at(p, th), eig_tol);
            (r * r - i * i).abs()
        },
        T::lit(4.0) * bound * bound,
        w.tolerances().theta_tol,
    )
}

/// `v_a(x)`, the weighted radius at `(1/2, 1/2)`.
pub fn a_numerical_radius<T: Real>(w: &Weight<T>, x: &Matrix<T>) -> Result<ThetaOptimum<T>> {
    weighted_radius(w, x, WeightPair::half())
}

/// Classical numerical radius `max{|⟨Mξ, ξ⟩| : ‖ξ‖ = 1}` computed as
/// `sup_{θ ∈ [0, 2π)} λ_max((e^{iθ}M + e^{-iθ}M^*)/2)`.
pub fn classical_numerical_radius_opt<T: Real>(m: &Matrix<T>) -> Result<ThetaOptimum<T>> {
    m.square_dim()?;
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let tol = Tolerances::<T>::default();
    let adj = m.adjoint();
    let half = T::lit(0.5);
    let bound = operator_norm_unchecked(m, tol.eig_tol);
    sup_periodic(
        |th| {
            let e = cis(th);
            lambda_max_unchecked(&m.lin_comb(e * half, &adj, e.conj() * half), tol.eig_tol)
        },
        T::PI() + T::PI(),
        2 * COARSE_GRID,
        Bounds::sinusoidal(bound),
        tol.theta_tol,
    )
}

pub fn classical_numerical_radius<T: Real>(m: &Matrix<T>) -> Result<T> {
    Ok(classical_numerical_radius_opt(m)?.value)
}

/// The two alternative formulas for the weighted radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AltFormulas<T: Real = f64> {
    /// `sup_{α²+β²=1} ‖α ℜ_(t,s)(x) + β ℑ_(t,s)(x)‖_a`.
    pub circle: T,
    /// `½ sup_{θ,φ} ‖ℜ_(t,s)((e^{iθ} − i e^{iφ}) x)‖_a`.
    pub two_angle: T,
}

/// Evaluates both alternative formulas: a one-dimensional supremum over the
/// unit circle of coefficients and a two-dimensional supremum over `(θ, φ)`.
pub fn check_alt_formulas<T: Real>(w: &Weight<T>, x: &Matrix<T>, p: WeightPair<T>) -> Result<AltFormulas<T>> {
    let (re, im) = weighted_parts(w, x, p)?;
    let eig_tol = w.eig_tol();
    let re_r = w.reduce_unchecked(&re);
    let im_r = w.reduce_unchecked(&im);
    let bound = {
        let a = operator_norm_unchecked(&re_r, eig_tol);
        let b = operator_norm_unchecked(&im_r, eig_tol);
        (a * a + b * b).sqrt()
    };
    // α = cos ψ, β = sin ψ; (α, β) and (−α, −β) give the same norm.
    let circle = sup_over_theta_sinusoidal(
        |psi| operator_norm_unchecked(&re_r.lin_comb(real(psi.cos()), &im_r, real(psi.sin())), eig_tol),
        bound,
        w.tolerances().theta_tol,
    )?
    .value;

    let rp = reduced_pair(w, x)?;
    let i = imag_unit::<T>();
    let f = |theta: T, phi: T| -> T {
        let c = cis(theta) - i * cis(phi);
        let m = rp.x.lin_comb(c * p.t, &rp.sharp, c.conj() * p.s);
        operator_norm_unchecked(&m, eig_tol) * T::lit(0.5)
    };
    let two_angle = maximize_two_angle(f, w.tolerances().theta_tol)?;
    Ok(AltFormulas { circle, two_angle })
}

/// 256×256 grid on `[0, 2π)²` followed by a compass search with
/// diagonal directions, halving the step down to `1e-9`.
fn maximize_two_angle<T: Real>(f: impl Fn(T, T) -> T, theta_tol: T) -> Result<T> {
    let n = TWO_ANGLE_GRID;
    let two_pi = T::lit(2.0 * PI);
    let h = two_pi / T::lit(n as f64);
    let (mut bt, mut bp, mut best) = (T::zero(), T::zero(), T::neg_infinity());
    for i in 0..n {
        let th = h * T::lit(i as f64);
        for j in 0..n {
            let ph = h * T::lit(j as f64);
            let v = check_finite(f(th, ph), th)?;
            if v > best {
                best = v;
                bt = th;
                bp = ph;
            }
        }
    }
    let dirs: [(f64, f64); 8] = [
        (1.0, 0.0),
        (-1.0, 0.0),
        (0.0, 1.0),
        (0.0, -1.0),
        (1.0, 1.0),
        (-1.0, -1.0),
        (1.0, -1.0),
        (-1.0, 1.0),
    ];
    let mut step = h;
    let min_step = T::lit(1e-9).min(theta_tol * T::lit(10.0)).max(T::epsilon() * T::lit(16.0));
    let mut guard = 0usize;
    while step > min_step && guard < 10_000 {
        guard += 1;
        let mut improved = false;
        for &(dt, dp) in &dirs {
            let (t2, p2) = (bt + step * T::lit(dt), bp + step * T::lit(dp));
            let v = check_finite(f(t2, p2), t2)?;
            if v > best {
                best = v;
                bt = t2;
                bp = p2;
                improved = true;
                break;
            }
        }
        if !improved {
            step = step * T::lit(0.5);
        }
    }
    Ok(best)
}

/// Sampled `A`-numerical range: vector states on `range(A)` plus support
/// points from the top eigenvectors of `ℜ(e^{iθ} x~)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeCloud<T: Real = f64> {
    pub interior_points: Vec<Complex<T>>,
    pub boundary_points: Vec<Complex<T>>,
    pub radius_estimate: T,
}

impl<T: Real> RangeCloud<T> {
    /// CSV with header `re,im,kind`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im,kind\n");
        for (pts, kind) in [(&self.interior_points, "interior"), (&self.boundary_points, "boundary")] {
            for z in pts {
                out.push_str(&format!("{:e},{:e},{}\n", z.re, z.im, kind));
            }
        }
        out
    }
}

pub fn numerical_range_cloud<T: Real>(
    w: &Weight<T>,
    x: &Matrix<T>,
    n_random: usize,
    n_boundary: usize,
    seed: u64,
) -> Result<RangeCloud<T>> {
    if n_random == 0 || n_boundary == 0 {
        return Err(Error::InvalidArgument("n_random and n_boundary must be >= 1".into()));
    }
    let xr = w.compress_reduced(x)?;
    let r = xr.rows();
    let form = |v: &[Complex<T>]| -> Complex<T> {
        let xv = xr.mul_vec(v);
        v.iter().zip(&xv).map(|(a, b)| a.conj() * b).sum()
    };
    let mut rng = stream_rng(seed, 0x5A17);
    let interior_points = (0..n_random)
        .map(|_| {
            let mut v: Vec<Complex<T>> = (0..r).map(|_| complex_gaussian(&mut rng)).collect();
            let mut nrm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
            while nrm == T::zero() {
                v = (0..r).map(|_| complex_gaussian(&mut rng)).collect();
                nrm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
            }
            let v: Vec<_> = v.iter().map(|z| z / nrm).collect();
            form(&v)
        })
        .collect::<Vec<_>>();
    let adj = xr.adjoint();
    let half = T::lit(0.5);
    let tol = *w.tolerances();
    let mut boundary_points = Vec::with_capacity(n_boundary);
    for k in 0..n_boundary {
        let th = T::lit(2.0 * PI * k as f64 / n_boundary as f64);
        let e = cis(th);
        let h = xr.lin_comb(e * half, &adj, e.conj() * half);
        let (_, v) = top_eigenpair(&h, &tol)?;
        boundary_points.push(form(&v));
    }
    let radius_estimate = interior_points
        .iter()
        .chain(&boundary_points)
        .map(|z| z.norm())
        .fold(T::zero(), T::max);
    Ok(RangeCloud {
        interior_points,
        boundary_points,
        radius_estimate,
    })
}

/// Weighted radius, or the infinite marker for non-members.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadiusOutcome<T: Real = f64> {
    Finite(ThetaOptimum<T>),
    Infinite { membership_defect: T },
}

pub fn weighted_radius_outcome<T: Real>(w: &Weight<T>, x: &Matrix<T>, p: WeightPair<T>) -> Result<RadiusOutcome<T>> {
    match weighted_radius(w, x, p) {
        Ok(opt) => Ok(RadiusOutcome::Finite(opt)),
        Err(Error::NotMember { .. }) => Ok(RadiusOutcome::Infinite {
            membership_defect: w.membership_defect(x)?,
        }),
        Err(e) => Err(e),
    }
}
