//! The semi-Hilbertian structure induced by a positive semidefinite weight.
//!
//! For a weight `A` with range projection `P`, an element `x` admits an
//! `A`-adjoint exactly when it maps `ker A` into itself, i.e. `P x (I-P) = 0`.
//! In finite dimension the same condition characterises finiteness of the
//! seminorm, so one membership predicate serves both subalgebras.
//!
//! All seminorm-level quantities are evaluated on the compressed matrix
//! `x~ = A^{1/2} x (A^{1/2})^+`, which is multiplicative on members and turns
//! suprema over states into vector-state suprema.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, operator_norm_unchecked, psd_functions, Tolerances};
use crate::matrix::Matrix;
use crate::scalar::Real;

/// Relative threshold for structural predicates (membership, `A`-self-adjointness).
pub fn structural_tol<T: Real>() -> T {
    T::lit(1e-10).max(T::epsilon() * T::lit(256.0))
}

/// A positive semidefinite weight together with its cached spectral data.
#[derive(Debug, Clone)]
pub struct Weight<T: Real = f64> {
    a: Matrix<T>,
    sqrt: Matrix<T>,
    sqrt_pinv: Matrix<T>,
    pinv: Matrix<T>,
    range_proj: Matrix<T>,
    kernel_proj: Matrix<T>,
    rank: usize,
    tol: Tolerances<T>,
    /// `Λ_r^{1/2} U_r^*` (r x n): maps into coordinates of the range.
    left_reduce: Matrix<T>,
    /// `U_r Λ_r^{-1/2}` (n x r).
    right_reduce: Matrix<T>,
}

/// Value of the `A`-operator seminorm; `finite == false` marks non-members.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeminormValue<T: Real = f64> {
    pub finite: bool,
    pub value: T,
    /// `‖P x (I-P)‖₂`.
    pub membership_defect: T,
}

impl<T: Real> SeminormValue<T> {
    pub fn finite_value(&self) -> Option<T> {
        self.finite.then_some(self.value)
    }
}

/// Builds a weight from a Hermitian PSD matrix. Rejects `A = 0`.
pub fn make_weight<T: Real>(a: &Matrix<T>, tol: Tolerances<T>) -> Result<Weight<T>> {
    tol.validate()?;
    let f = psd_functions(a, &tol)?;
    if f.rank == 0 {
        return Err(Error::ZeroWeight);
    }
    let n = a.rows();
    let r = f.rank;
    let basis = &f.range_basis;
    let left_reduce = Matrix::from_fn(r, n, |i, j| basis[(j, i)].conj() * f.range_eigenvalues[i].sqrt());
    let right_reduce = Matrix::from_fn(n, r, |i, j| basis[(i, j)] / f.range_eigenvalues[j].sqrt());
    let kernel_proj = &Matrix::identity(n) - &f.range_proj;
    Ok(Weight {
        a: a.hermitian_part(),
        sqrt: f.sqrt,
        sqrt_pinv: f.sqrt_pinv,
        pinv: f.pinv,
        range_proj: f.range_proj,
        kernel_proj,
        rank: r,
        tol,
        left_reduce,
        right_reduce,
    })
}

impl<T: Real> Weight<T> {
    pub fn new(a: &Matrix<T>) -> Result<Self> {
        make_weight(a, Tolerances::default())
    }

    pub fn identity(n: usize) -> Self {
        Self::new(&Matrix::identity(n)).expect("identity is a valid weight")
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.a
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_invertible(&self) -> bool {
        self.rank == self.dim()
    }

    pub fn tolerances(&self) -> &Tolerances<T> {
        &self.tol
    }

    pub fn sqrt(&self) -> &Matrix<T> {
        &self.sqrt
    }

    pub fn sqrt_pinv(&self) -> &Matrix<T> {
        &self.sqrt_pinv
    }

    pub fn pinv(&self) -> &Matrix<T> {
        &self.pinv
    }

    pub fn range_proj(&self) -> &Matrix<T> {
        &self.range_proj
    }

    pub fn kernel_proj(&self) -> &Matrix<T> {
        &self.kernel_proj
    }

    /// Weight built from `A^{1/2}` with the same tolerances.
    pub fn sqrt_weight(&self) -> Result<Self> {
        make_weight(&self.sqrt, self.tol)
    }

    pub(crate) fn check_dim(&self, x: &Matrix<T>) -> Result<()> {
        let n = x.square_dim()?;
        if n != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: n,
            });
        }
        if !x.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(())
    }

    /// `‖P x (I-P)‖₂`.
    pub fn membership_defect(&self, x: &Matrix<T>) -> Result<T> {
        self.check_dim(x)?;
        let m = self.range_proj.matmul(x).matmul(&self.kernel_proj);
        Ok(operator_norm_unchecked(&m, self.tol.eig_tol))
    }

    fn membership_threshold(&self, x: &Matrix<T>) -> T {
        structural_tol::<T>() * (T::one() + operator_norm_unchecked(x, self.tol.eig_tol))
    }

    /// Membership in the subalgebra of elements admitting an `A`-adjoint
    /// (equivalently, of finite seminorm).
    pub fn is_member(&self, x: &Matrix<T>) -> Result<bool> {
        let defect = self.membership_defect(x)?;
        Ok(defect <= self.membership_threshold(x))
    }

    pub(crate) fn require_member(&self, x: &Matrix<T>) -> Result<()> {
        let defect = self.membership_defect(x)?;
        if defect <= self.membership_threshold(x) {
            Ok(())
        } else {
            Err(Error::NotMember {
                defect: defect.to_f64_lossy(),
            })
        }
    }

    /// The `A`-operator seminorm, infinite for non-members.
    pub fn seminorm(&self, x: &Matrix<T>) -> Result<SeminormValue<T>> {
        let defect = self.membership_defect(x)?;
        if defect > self.membership_threshold(x) {
            return Ok(SeminormValue {
                finite: false,
                value: T::infinity(),
                membership_defect: defect,
            });
        }
        Ok(SeminormValue {
            finite: true,
            value: self.seminorm_unchecked(x),
            membership_defect: defect,
        })
    }

    /// Seminorm of an element already known to be a member.
    pub(crate) fn seminorm_unchecked(&self, x: &Matrix<T>) -> T {
        operator_norm_unchecked(&self.reduce_unchecked(x), self.tol.eig_tol)
    }

    /// Finite seminorm, or `NotMember`.
    pub fn seminorm_of_member(&self, x: &Matrix<T>) -> Result<T> {
        self.require_member(x)?;
        Ok(self.seminorm_unchecked(x))
    }

    /// Compressed matrix `A^{1/2} x (A^{1/2})^+` (n x n).
    pub fn compress(&self, x: &Matrix<T>) -> Result<Matrix<T>> {
        self.require_member(x)?;
        Ok(self.sqrt.matmul(x).matmul(&self.sqrt_pinv))
    }

    /// The compressed matrix expressed in an orthonormal eigenbasis of
    /// `range(A)` (r x r, r = rank). Unitarily equivalent to the restriction
    /// of [`Weight::compress`] to the range, so norms, numerical radii and
    /// spectra agree.
    pub fn compress_reduced(&self, x: &Matrix<T>) -> Result<Matrix<T>> {
        self.require_member(x)?;
        Ok(self.reduce_unchecked(x))
    }

    pub(crate) fn reduce_unchecked(&self, x: &Matrix<T>) -> Matrix<T> {
        self.left_reduce.matmul(x).matmul(&self.right_reduce)
    }

    /// Lifts an r x r matrix acting on range coordinates back to a member
    /// whose reduced compression is that matrix.
    pub fn lift_reduced(&self, y: &Matrix<T>) -> Result<Matrix<T>> {
        let r = y.square_dim()?;
        if r != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                found: r,
            });
        }
        Ok(self.right_reduce.matmul(y).matmul(&self.left_reduce))
    }

    /// The distinguished `A`-adjoint `A^+ x^* A`.
    pub fn adjoint(&self, x: &Matrix<T>) -> Result<Matrix<T>> {
        self.require_member(x)?;
        Ok(self.adjoint_unchecked(x))
    }

    pub(crate) fn adjoint_unchecked(&self, x: &Matrix<T>) -> Matrix<T> {
        self.pinv.matmul(&x.adjoint()).matmul(&self.a)
    }

    /// `A x` is Hermitian (within the structural tolerance).
    pub fn is_a_self_adjoint(&self, x: &Matrix<T>) -> Result<bool> {
        self.check_dim(x)?;
        let ax = self.a.matmul(x);
        let defect = operator_norm_unchecked(&(&ax - &ax.adjoint()), self.tol.eig_tol);
        Ok(defect <= structural_tol::<T>() * (T::one() + operator_norm_unchecked(&ax, self.tol.eig_tol)))
    }

    /// `A x` is Hermitian and positive semidefinite.
    pub fn is_a_positive(&self, x: &Matrix<T>) -> Result<bool> {
        if !self.is_a_self_adjoint(x)? {
            return Ok(false);
        }
        let ax = self.a.matmul(x);
        let lmin = hermitian_eigenvalues(&ax.hermitian_part(), &self.tol)?[0];
        let scale = T::one() + operator_norm_unchecked(&ax, self.tol.eig_tol);
        Ok(lmin >= -structural_tol::<T>() * scale)
    }

    /// `‖A x‖₂`, used for the `ax = 0` style hypotheses.
    pub fn weighted_product_norm(&self, x: &Matrix<T>) -> Result<T> {
        self.check_dim(x)?;
        Ok(operator_norm_unchecked(&self.a.matmul(x), self.tol.eig_tol))
    }

    /// `A x = 0` in the mixed sense `‖A x‖₂ ≤ tol·(1 + ‖A‖‖x‖)`.
    pub fn annihilates(&self, x: &Matrix<T>, tol: T) -> Result<bool> {
        let ax = self.weighted_product_norm(x)?;
        let xn = operator_norm_unchecked(x, self.tol.eig_tol);
        Ok(ax <= tol * (T::one() + self.norm() * xn))
    }

    /// `A x² = 0` in the mixed sense `‖A x²‖₂ ≤ tol·(1 + ‖A‖‖x‖²)`.
    pub fn annihilates_square(&self, x: &Matrix<T>, tol: T) -> Result<bool> {
        self.check_dim(x)?;
        let x2 = x.matmul(x);
        let ax2 = operator_norm_unchecked(&self.a.matmul(&x2), self.tol.eig_tol);
        let xn = operator_norm_unchecked(x, self.tol.eig_tol);
        Ok(ax2 <= tol * (T::one() + self.norm() * xn * xn))
    }

    /// `‖A‖₂`.
    pub fn norm(&self) -> T {
        operator_norm_unchecked(&self.a, self.tol.eig_tol)
    }

    pub(crate) fn eig_tol(&self) -> T {
        self.tol.eig_tol
    }
}

/// Free-function form of [`Weight::is_member`].
pub fn is_member<T: Real>(w: &Weight<T>, x: &Matrix<T>) -> Result<bool> {
    w.is_member(x)
}

/// Free-function form of [`Weight::seminorm`].
pub fn a_seminorm<T: Real>(w: &Weight<T>, x: &Matrix<T>) -> Result<SeminormValue<T>> {
    w.seminorm(x)
}

pub fn compress<T: Real>(w: &Weight<T>, x: &Matrix<T>) -> Result<Matrix<T>> {
    w.compress(x)
}

pub fn a_adjoint<T: Real>(w: &Weight<T>, x: &Matrix<T>) -> Result<Matrix<T>> {
    w.adjoint(x)
}

pub fn is_a_self_adjoint<T: Real>(w: &Weight<T>, x: &Matrix<T>) -> Result<bool> {
    w.is_a_self_adjoint(x)
}

pub fn is_a_positive<T: Real>(w: &Weight<T>, x: &Matrix<T>) -> Result<bool> {
    w.is_a_positive(x)
}

/// `(x + x^♯) / 2`, which is always `A`-self-adjoint.
pub fn a_real_part<T: Real>(w: &Weight<T>, x: &Matrix<T>) -> Result<Matrix<T>> {
    let adj = w.adjoint(x)?;
    let half = Complex::new(T::lit(0.5), T::zero());
    Ok(x.lin_comb(half, &adj, half))
}
