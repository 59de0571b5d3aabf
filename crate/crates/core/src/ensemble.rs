//! Seeded random ensembles of weights and members.
//!
//! Every draw is a pure function of `(seed, stream)`: the generator for a
//! draw is re-derived from those two integers, so trials can be evaluated in
//! any order and reproduced from their recorded seed alone.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, Tolerances};
use crate::matrix::Matrix;
use crate::scalar::Real;
use crate::weighted::{make_weight, Weight};

/// Structural family of a sampled element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnsembleKind {
    GeneralMember,
    ASelfAdjoint,
    NilpotentAx2Zero,
    CommutativeDiagonal,
    APositive,
}

impl EnsembleKind {
    pub const ALL: [EnsembleKind; 5] = [
        EnsembleKind::GeneralMember,
        EnsembleKind::ASelfAdjoint,
        EnsembleKind::NilpotentAx2Zero,
        EnsembleKind::CommutativeDiagonal,
        EnsembleKind::APositive,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            EnsembleKind::GeneralMember => "general-member",
            EnsembleKind::ASelfAdjoint => "a-self-adjoint",
            EnsembleKind::NilpotentAx2Zero => "nilpotent-ax2-zero",
            EnsembleKind::CommutativeDiagonal => "commutative-diagonal",
            EnsembleKind::APositive => "a-positive",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub seed: u64,
    pub dim: usize,
    pub weight_rank: usize,
    pub kind: EnsembleKind,
    pub scale: f64,
}

impl EnsembleConfig {
    pub fn new(seed: u64, dim: usize, weight_rank: usize, kind: EnsembleKind) -> Self {
        Self {
            seed,
            dim,
            weight_rank,
            kind,
            scale: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::InvalidArgument(format!("ensemble dim must be >= 2, got {}", self.dim)));
        }
        if self.weight_rank < 1 || self.weight_rank > self.dim {
            return Err(Error::InvalidArgument(format!(
                "weight_rank must lie in 1..={}, got {}",
                self.dim, self.weight_rank
            )));
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(Error::InvalidArgument(format!("scale must be positive, got {}", self.scale)));
        }
        if self.kind == EnsembleKind::NilpotentAx2Zero && self.weight_rank < 2 {
            return Err(Error::Unsatisfiable(
                "ax != 0 with ax^2 = 0 needs a weight of rank >= 2".into(),
            ));
        }
        Ok(())
    }

    /// Same config with a different seed.
    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..*self }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes a seed and a stream index into a fresh 64-bit seed.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    splitmix64(seed ^ splitmix64(stream.wrapping_add(0x5851_F42D_4C95_7F2D)))
}

/// Generator for stream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, stream))
}

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Standard complex Gaussian entry, `E|z|² = 1`.
pub fn complex_gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Complex::new(T::lit(gaussian(rng) * s), T::lit(gaussian(rng) * s))
}

pub fn gaussian_matrix<T: Real, R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Matrix<T> {
    Matrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

pub fn hermitian_gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix<T> {
    gaussian_matrix::<T, R>(rng, n, n).hermitian_part()
}

/// Unitary matrix from the eigenvectors of a random Hermitian matrix.
pub fn random_unitary<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix<T> {
    let h = hermitian_gaussian::<T, R>(rng, n);
    hermitian_eig(&h, &Tolerances::default())
        .expect("Hermitian by construction")
        .vectors
}

/// Random PSD weight of the requested rank with eigenvalues in `[0.1, 2]`.
/// `diagonal` keeps it diagonal in the standard basis (commutative model).
pub fn random_weight<T: Real>(seed: u64, dim: usize, rank: usize, diagonal: bool) -> Result<Weight<T>> {
    if rank == 0 || rank > dim {
        return Err(Error::InvalidArgument(format!("rank must lie in 1..={dim}, got {rank}")));
    }
    let mut rng = stream_rng(seed, 0xA11CE);
    let mut eig: Vec<f64> = (0..dim)
        .map(|k| if k < rank { rng.gen_range(0.1..2.0) } else { 0.0 })
        .collect();
    if diagonal {
        // Shuffle so the kernel is not always the trailing block.
        for i in (1..dim).rev() {
            let j = rng.gen_range(0..=i);
            eig.swap(i, j);
        }
        return make_weight(&Matrix::real_diag(&eig), Tolerances::default());
    }
    let u = random_unitary::<T, _>(&mut rng, dim);
    let d = Matrix::<T>::real_diag(&eig);
    let a = u.matmul(&d).matmul(&u.adjoint()).hermitian_part();
    make_weight(&a, Tolerances::default())
}

/// Draws one element of the requested kind. Every result is a member of the
/// weight's subalgebra.
pub fn sample<T: Real>(config: &EnsembleConfig, w: &Weight<T>) -> Result<Matrix<T>> {
    config.validate()?;
    if config.dim != w.dim() {
        return Err(Error::DimensionMismatch {
            expected: w.dim(),
            found: config.dim,
        });
    }
    if config.kind == EnsembleKind::NilpotentAx2Zero && w.rank() < 2 {
        return Err(Error::Unsatisfiable(
            "ax != 0 with ax^2 = 0 needs a weight of rank >= 2".into(),
        ));
    }
    let n = config.dim;
    let mut rng = stream_rng(config.seed, config.kind as u64 + 1);
    let scale = T::lit(config.scale);
    let p = w.range_proj();
    let q = w.kernel_proj();
    let x = match config.kind {
        EnsembleKind::GeneralMember => {
            let y = gaussian_matrix::<T, _>(&mut rng, n, n);
            let z = gaussian_matrix::<T, _>(&mut rng, n, n);
            let v = gaussian_matrix::<T, _>(&mut rng, n, n);
            let mut x = p.matmul(&y).matmul(p);
            x += &q.matmul(&z).matmul(q);
            x += &q.matmul(&v).matmul(p);
            x
        }
        EnsembleKind::ASelfAdjoint => {
            // A x = P h P is Hermitian; the kernel part is invisible to A.
            let h = hermitian_gaussian::<T, _>(&mut rng, n);
            let h = p.matmul(&h).matmul(p);
            let z = gaussian_matrix::<T, _>(&mut rng, n, n);
            &w.pinv().matmul(&h) + &q.matmul(&z)
        }
        EnsembleKind::APositive => {
            let g = gaussian_matrix::<T, _>(&mut rng, n, n);
            let h = p.matmul(&g).matmul(&g.adjoint()).matmul(p).scale_real(T::lit(1.0 / n as f64));
            let z = gaussian_matrix::<T, _>(&mut rng, n, n);
            &w.pinv().matmul(&h) + &q.matmul(&z)
        }
        EnsembleKind::NilpotentAx2Zero => {
            // Strictly block upper triangular N on range coordinates, conjugated
            // by a random unitary, so N² = 0; lifting keeps A x² = 0.
            let r = w.rank();
            let split = rng.gen_range(1..r);
            let u = random_unitary::<T, _>(&mut rng, r);
            let mut nil = Matrix::<T>::zeros(r, r);
            for i in 0..split {
                for j in split..r {
                    nil[(i, j)] = complex_gaussian(&mut rng);
                }
            }
            let nil = u.matmul(&nil).matmul(&u.adjoint());
            let lifted = w.lift_reduced(&nil)?;
            let z = gaussian_matrix::<T, _>(&mut rng, n, n);
            &lifted + &q.matmul(&z).matmul(q)
        }
        EnsembleKind::CommutativeDiagonal => {
            let off = w.matrix().off_diagonal_norm();
            if off > T::lit(1e-12) * (T::one() + w.matrix().frobenius_norm()) {
                return Err(Error::NotDiagonal {
                    defect: off.to_f64_lossy(),
                });
            }
            let d: Vec<Complex<T>> = (0..n).map(|_| complex_gaussian(&mut rng)).collect();
            Matrix::diag(&d)
        }
    };
    Ok(x.scale_real(scale))
}

/// An `A`-self-adjoint diagonal element: real diagonal entries.
pub fn sample_real_diagonal<T: Real>(seed: u64, n: usize) -> Matrix<T> {
    let mut rng = stream_rng(seed, 0xD1A6);
    let d: Vec<f64> = (0..n).map(|_| gaussian(&mut rng)).collect();
    Matrix::real_diag(&d)
}
