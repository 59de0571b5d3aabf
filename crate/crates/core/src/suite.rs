//! Inequality checkers as monotone value chains, the seeded suite runner,
//! and the tightness and κ-ratio searches.
//!
//! A chain `[c₀, c₁, …]` passes when every adjacent pair satisfies
//! `cᵢ ≤ cᵢ₊₁ + tol·(1 + |cᵢ₊₁|)`. Equalities are encoded as palindromes
//! `[a, b, a]`. Everything here works in `f64`.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use num_complex::Complex;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::ensemble::{derive_seed, random_weight, sample, stream_rng, EnsembleConfig, EnsembleKind};
use crate::error::{Error, Result};
use crate::io::MatrixJson;
use crate::linalg::{operator_norm_unchecked, Tolerances};
use crate::matrix::Matrix;
use crate::radius::{
    a_numerical_radius, check_alt_formulas, real_part_profile, reduced_pair, sup_over_theta, sup_real_imag_gap,
    weighted_radius, WeightPair,
};
use crate::scalar::{imag_unit, real};
use crate::spectral::{a_spectral_radius, character_values, distance_to_scalars};
use crate::weighted::{structural_tol, Weight};

/// Which ensembles a checker runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Compat {
    AllKinds,
    DiagonalOnly,
}

#[derive(Debug, Clone, Copy)]
pub struct CheckerInfo {
    pub id: &'static str,
    pub compat: Compat,
    /// Number of matrix inputs.
    pub arity: usize,
    /// Needs the distance to the scalars (reduced trial count).
    pub heavy: bool,
    /// Multiplier on `chain_tol`.
    pub tol_scale: f64,
    /// Labels for the (lower, upper) pair used by the tightness search.
    pub description: &'static str,
}

const fn info(id: &'static str, compat: Compat, arity: usize, heavy: bool, description: &'static str) -> CheckerInfo {
    CheckerInfo {
        id,
        compat,
        arity,
        heavy,
        tol_scale: 1.0,
        description,
    }
}

/// Every registered checker.
pub const CHECKERS: [CheckerInfo; 23] = [
    info("eq-1-2", Compat::AllKinds, 1, false, "½‖x‖ ≤ v(x) ≤ ‖x‖"),
    info("thm-2-6", Compat::AllKinds, 1, false, "max{t,s}‖x‖ ≤ v_(t,s)(x) ≤ (t+s)‖x‖"),
    info("thm-2-9", Compat::AllKinds, 1, false, "v²_(t,s)(x) ≤ (t²+s²)‖x‖² + 2ts v(x²) ≤ (t+s)²‖x‖²"),
    info("cor-2-10", Compat::AllKinds, 1, false, "v_(t,s)(x) = (t+s)‖x‖ implies ‖x²‖ = ‖x‖²"),
    info("thm-2-11", Compat::AllKinds, 1, false, "ts‖xx♯+x♯x‖ + ½ sup|‖ℜ‖²−‖ℑ‖²| ≤ v²_(t,s)(x)"),
    info("thm-3-1", Compat::AllKinds, 1, false, "v⁴ ≤ ¼v²(x²) + ⅛v(x²M+Mx²) + 1/16‖M²‖"),
    info("rem-3-2", Compat::AllKinds, 1, false, "refinement chain ending at ‖x‖⁴"),
    info("thm-3-3", Compat::AllKinds, 1, false, "v² ≤ ½v(x²) + ¼‖xx♯+x♯x‖"),
    info("power", Compat::AllKinds, 1, false, "v(x²) ≤ v²(x)"),
    info("cor-3-5", Compat::AllKinds, 1, false, "¼‖M‖ ≤ v² ≤ ½‖M‖"),
    info("rem-3-7", Compat::AllKinds, 1, false, "¼‖x‖² ≤ ¼‖M‖ + ⅛ sup|…| ≤ v²"),
    info("cor-3-8", Compat::AllKinds, 1, false, "ax² = 0 implies v² = ¼‖M‖"),
    info("rem-3-9", Compat::AllKinds, 1, false, "ax ≠ 0, ax² = 0 implies v = ½‖x‖"),
    info("thm-3-10", Compat::AllKinds, 1, false, "½‖x‖ + ¼|‖x+ix♯‖ − ‖x−ix♯‖| ≤ v"),
    info("thm-3-11", Compat::AllKinds, 1, true, "¼‖M‖ ≤ ½(v² + d²) ≤ v²"),
    info("thm-3-12", Compat::AllKinds, 2, true, "v(xy) ≤ ‖xy‖ ≤ min K ≤ 4v(x)v(y)"),
    info("thm-4-3", Compat::AllKinds, 2, false, "‖x+y‖ ≤ 1 + 2‖xy‖"),
    info("cor-4-4", Compat::AllKinds, 2, false, "‖x+y‖ ≤ ‖x‖ + 2‖xy‖/‖x‖"),
    info("thm-4-6", Compat::DiagonalOnly, 2, false, "‖x+y‖ ≤ ‖x‖ + ‖xy‖/‖x‖"),
    info("lem-4-1", Compat::DiagonalOnly, 1, false, "‖x‖ = v(x) = r(x) = ‖x‖_(a^½)"),
    info("lem-4-2", Compat::AllKinds, 2, false, "r(xy) = r(yx)"),
    CheckerInfo {
        tol_scale: 10.0,
        ..info("thm-2-5", Compat::AllKinds, 1, false, "both alternative formulas equal v_(t,s)")
    },
    info("thm-2-8", Compat::AllKinds, 1, false, "max_θ |‖ℜ(e^{iθ}x)‖ − max{t,s}‖x‖| = v_(t,s) − max{t,s}‖x‖"),
];

pub fn checker_info(id: &str) -> Result<&'static CheckerInfo> {
    CHECKERS
        .iter()
        .find(|c| c.id == id)
        .ok_or_else(|| Error::UnknownChecker(id.to_string()))
}

pub fn checker_ids() -> Vec<&'static str> {
    CHECKERS.iter().map(|c| c.id).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChainStatus {
    Pass,
    Fail,
    Skip,
}

/// Where an instance came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainContext {
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ensemble: Option<EnsembleConfig>,
    pub weight: MatrixJson,
    pub inputs: Vec<MatrixJson>,
    pub t: f64,
    pub s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueChain {
    pub checker_id: String,
    pub labels: Vec<String>,
    pub values: Vec<f64>,
    /// Smallest adjacent gap `values[i+1] − values[i]`; absent for skips.
    pub slack: Option<f64>,
    pub status: ChainStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skip_reason: Option<String>,
    pub context: ChainContext,
}

impl ValueChain {
    pub fn passed(&self) -> bool {
        self.status == ChainStatus::Pass
    }
}

/// Decides a chain under the mixed tolerance.
pub fn chain_holds(values: &[f64], tol: f64) -> bool {
    values.windows(2).all(|p| p[0] <= p[1] + tol * (1.0 + p[1].abs()))
}

fn min_gap(values: &[f64]) -> Option<f64> {
    values.windows(2).map(|p| p[1] - p[0]).reduce(f64::min)
}

/// Inputs of one check: `y` is required by the two-element checkers.
#[derive(Debug, Clone)]
pub struct CheckInputs {
    pub x: Matrix<f64>,
    pub y: Option<Matrix<f64>>,
    pub p: WeightPair<f64>,
    pub seed: u64,
    pub ensemble: Option<EnsembleConfig>,
}

enum Outcome {
    Chain(Vec<(&'static str, f64)>),
    Skip(String),
}

/// Lazily evaluated quantities of one `(W, x, y, p)` instance, shared
/// between the checkers of a trial. Element arithmetic runs on the reduced
/// compressions under the identity weight; the reduction is multiplicative
/// on members, so products never pick up a spurious kernel defect.
struct Ctx<'a> {
    full: &'a Weight<f64>,
    raw_x: &'a Matrix<f64>,
    raw_y: Option<&'a Matrix<f64>>,
    w: Weight<f64>,
    x: Matrix<f64>,
    y: Option<Matrix<f64>>,
    p: WeightPair<f64>,
    tol: f64,
    scalars: RefCell<HashMap<&'static str, f64>>,
    mats: RefCell<HashMap<&'static str, Matrix<f64>>>,
}

impl<'a> Ctx<'a> {
    fn new(full: &'a Weight<f64>, inputs: &'a CheckInputs) -> Result<Self> {
        let x = full.compress_reduced(&inputs.x)?;
        let y = inputs.y.as_ref().map(|y| full.compress_reduced(y)).transpose()?;
        let w = crate::weighted::make_weight(&Matrix::identity(full.rank()), *full.tolerances())?;
        Ok(Self {
            full,
            raw_x: &inputs.x,
            raw_y: inputs.y.as_ref(),
            w,
            x,
            y,
            p: inputs.p,
            tol: full.tolerances().chain_tol,
            scalars: RefCell::new(HashMap::new()),
            mats: RefCell::new(HashMap::new()),
        })
    }

    fn scalar(&self, key: &'static str, f: impl FnOnce() -> Result<f64>) -> Result<f64> {
        if let Some(&v) = self.scalars.borrow().get(key) {
            return Ok(v);
        }
        let v = f()?;
        self.scalars.borrow_mut().insert(key, v);
        Ok(v)
    }

    fn mat(&self, key: &'static str, f: impl FnOnce() -> Result<Matrix<f64>>) -> Result<Matrix<f64>> {
        if let Some(m) = self.mats.borrow().get(key) {
            return Ok(m.clone());
        }
        let m = f()?;
        self.mats.borrow_mut().insert(key, m.clone());
        Ok(m)
    }

    fn y(&self) -> Result<&Matrix<f64>> {
        self.y
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("this checker needs a second input y".into()))
    }

    fn norm(&self, m: &Matrix<f64>) -> Result<f64> {
        self.w.seminorm_of_member(m)
    }

    fn v(&self, m: &Matrix<f64>) -> Result<f64> {
        Ok(a_numerical_radius(&self.w, m)?.value)
    }

    fn sharp(&self) -> Result<Matrix<f64>> {
        self.mat("x#", || Ok(self.x.adjoint()))
    }

    fn x2(&self) -> Result<Matrix<f64>> {
        self.mat("x2", || Ok(self.x.matmul(&self.x)))
    }

    /// `M = x x♯ + x♯ x`.
    fn big_m(&self) -> Result<Matrix<f64>> {
        self.mat("M", || {
            let s = self.sharp()?;
            Ok(&self.x.matmul(&s) + &s.matmul(&self.x))
        })
    }

    fn nx(&self) -> Result<f64> {
        self.scalar("|x|", || self.norm(&self.x))
    }

    fn vx(&self) -> Result<f64> {
        self.scalar("v(x)", || self.v(&self.x))
    }

    fn vpx(&self) -> Result<f64> {
        self.scalar("v_p(x)", || Ok(weighted_radius(&self.w, &self.x, self.p)?.value))
    }

    fn nx2(&self) -> Result<f64> {
        self.scalar("|x2|", || self.norm(&self.x2()?))
    }

    fn vx2(&self) -> Result<f64> {
        self.scalar("v(x2)", || self.v(&self.x2()?))
    }

    fn nm(&self) -> Result<f64> {
        self.scalar("|M|", || self.norm(&self.big_m()?))
    }

    fn dx(&self) -> Result<f64> {
        self.scalar("d(x)", || Ok(distance_to_scalars(&self.w, &self.x)?.value))
    }

    fn ny(&self) -> Result<f64> {
        self.scalar("|y|", || self.norm(self.y()?))
    }

    fn vy(&self) -> Result<f64> {
        self.scalar("v(y)", || self.v(self.y()?))
    }

    fn dy(&self) -> Result<f64> {
        self.scalar("d(y)", || Ok(distance_to_scalars(&self.w, self.y()?)?.value))
    }

    fn ax_zero(&self) -> Result<bool> {
        self.full.annihilates(self.raw_x, self.tol)
    }

    fn ax2_zero(&self) -> Result<bool> {
        self.full.annihilates_square(self.raw_x, self.tol)
    }

    /// `x, y` are `A`-self-adjoint with `‖y‖ ≤ ‖x‖`.
    fn self_adjoint_pair(&self) -> Result<Option<String>> {
        let y = self.raw_y.ok_or_else(|| Error::InvalidArgument("this checker needs a second input y".into()))?;
        if !self.full.is_a_self_adjoint(self.raw_x)? || !self.full.is_a_self_adjoint(y)? {
            return Ok(Some("x and y must be a-self-adjoint".into()));
        }
        let (nx, ny) = (self.nx()?, self.ny()?);
        if ny > nx * (1.0 + structural_tol::<f64>()) {
            return Ok(Some("needs ‖y‖_a ≤ ‖x‖_a".into()));
        }
        if nx <= structural_tol::<f64>() {
            return Ok(Some("needs ‖x‖_a ≠ 0".into()));
        }
        Ok(None)
    }

    fn diagonal_model(&self) -> Option<String> {
        let s = structural_tol::<f64>();
        let mut all = vec![self.full.matrix(), self.raw_x];
        if let Some(y) = self.raw_y {
            all.push(y);
        }
        all.iter()
            .any(|m| m.off_diagonal_norm() > s * (1.0 + m.frobenius_norm()))
            .then(|| "needs the diagonal (commutative) model".to_string())
    }
}

fn evaluate(id: &str, c: &Ctx<'_>) -> Result<Outcome> {
    let (t, s) = (c.p.t(), c.p.s());
    let chain = |v: Vec<(&'static str, f64)>| Ok(Outcome::Chain(v));
    match id {
        "eq-1-2" => {
            let (nx, v) = (c.nx()?, c.vx()?);
            chain(vec![("½‖x‖_a", 0.5 * nx), ("v_a(x)", v), ("‖x‖_a", nx)])
        }
        "thm-2-6" => {
            let (nx, v) = (c.nx()?, c.vpx()?);
            chain(vec![
                ("max{t,s}‖x‖_a", t.max(s) * nx),
                ("v_(a,(t,s))(x)", v),
                ("(t+s)‖x‖_a", (t + s) * nx),
            ])
        }
        "thm-2-9" => {
            let (nx, v) = (c.nx()?, c.vpx()?);
            chain(vec![
                ("v²_(a,(t,s))(x)", v * v),
                ("(t²+s²)‖x‖²_a + 2ts·v_a(x²)", (t * t + s * s) * nx * nx + 2.0 * t * s * c.vx2()?),
                ("(t+s)²‖x‖²_a", (t + s) * (t + s) * nx * nx),
            ])
        }
        "cor-2-10" => {
            let (nx, v) = (c.nx()?, c.vpx()?);
            if t * s == 0.0 {
                return Ok(Outcome::Skip("needs t, s > 0".into()));
            }
            let bound = (t + s) * nx;
            let weight = t * s / ((t + s) * (t + s));
            if v < bound - c.tol * weight * (1.0 + bound) {
                return Ok(Outcome::Skip("v_(a,(t,s))(x) < (t+s)‖x‖_a".into()));
            }
            let n2 = c.nx2()?;
            chain(vec![("‖x²‖_a", n2), ("‖x‖²_a", nx * nx), ("‖x²‖_a", n2)])
        }
        "thm-2-11" => {
            let v = c.vpx()?;
            let gap = sup_real_imag_gap(&c.w, &c.x, c.p)?.value;
            chain(vec![
                ("ts‖xx♯+x♯x‖_a + ½sup|‖ℜ‖²−‖ℑ‖²|", t * s * c.nm()? + 0.5 * gap),
                ("v²_(a,(t,s))(x)", v * v),
            ])
        }
        "thm-3-1" => {
            let v = c.vx()?;
            let x2 = c.x2()?;
            let m = c.big_m()?;
            let mixed = &x2.matmul(&m) + &m.matmul(&x2);
            let vx2 = c.vx2()?;
            let rhs = 0.25 * vx2 * vx2 + 0.125 * c.v(&mixed)? + c.norm(&m.matmul(&m))? / 16.0;
            chain(vec![("v⁴_a(x)", v.powi(4)), ("¼v²(x²) + ⅛v(x²M+Mx²) + 1/16‖M²‖", rhs)])
        }
        "rem-3-2" => {
            let v = c.vx()?;
            let nx = c.nx()?;
            let n2 = c.nx2()?;
            let m = c.big_m()?;
            let x2 = c.x2()?;
            let nm = c.nm()?;
            let mixed = c.norm(&(&x2.matmul(&m) + &m.matmul(&x2)))?;
            let sharp = c.sharp()?;
            let split = c.norm(&c.x.matmul(&sharp))? + c.norm(&sharp.matmul(&c.x))?;
            let nx4 = nx.powi(4);
            chain(vec![
                ("v⁴_a(x)", v.powi(4)),
                ("¼‖x²‖² + ⅛‖x²M+Mx²‖ + 1/16‖M‖²", 0.25 * n2 * n2 + 0.125 * mixed + nm * nm / 16.0),
                (
                    "¼‖x‖⁴ + ¼‖x²‖‖M‖ + 1/16(‖xx♯‖+‖x♯x‖)²",
                    0.25 * nx4 + 0.25 * n2 * nm + split * split / 16.0,
                ),
                ("¼‖x‖⁴ + ¼‖x‖²(‖xx♯‖+‖x♯x‖) + ¼‖x‖⁴", 0.5 * nx4 + 0.25 * nx * nx * split),
                ("‖x‖⁴_a", nx4),
            ])
        }
        "thm-3-3" => {
            let v = c.vx()?;
            chain(vec![("v²_a(x)", v * v), ("½v_a(x²) + ¼‖xx♯+x♯x‖_a", 0.5 * c.vx2()? + 0.25 * c.nm()?)])
        }
        "power" => {
            let v = c.vx()?;
            chain(vec![("v_a(x²)", c.vx2()?), ("v²_a(x)", v * v)])
        }
        "cor-3-5" => {
            let (v, nm) = (c.vx()?, c.nm()?);
            chain(vec![("¼‖xx♯+x♯x‖_a", 0.25 * nm), ("v²_a(x)", v * v), ("½‖xx♯+x♯x‖_a", 0.5 * nm)])
        }
        "rem-3-7" => {
            let (v, nx, nm) = (c.vx()?, c.nx()?, c.nm()?);
            let rp = reduced_pair(&c.w, &c.x)?;
            let eig_tol = c.w.tolerances().eig_tol;
            let gap = sup_over_theta(
                |th| {
                    let e = crate::scalar::cis(th);
                    let plus = operator_norm_unchecked(&rp.x.lin_comb(e, &rp.sharp, e.conj()), eig_tol);
                    let minus = operator_norm_unchecked(&rp.x.lin_comb(e, &rp.sharp, -e.conj()), eig_tol);
                    (plus * plus - minus * minus).abs()
                },
                16.0 * rp.norm * rp.norm,
                c.w.tolerances().theta_tol,
            )?
            .value;
            chain(vec![
                ("¼‖x‖²_a", 0.25 * nx * nx),
                ("¼‖xx♯+x♯x‖_a + ⅛sup|‖e^{iθ}x+e^{-iθ}x♯‖² − ‖e^{iθ}x−e^{-iθ}x♯‖²|", 0.25 * nm + 0.125 * gap),
                ("v²_a(x)", v * v),
            ])
        }
        "cor-3-8" => {
            if !c.ax2_zero()? {
                return Ok(Outcome::Skip("ax² ≠ 0".into()));
            }
            let (v, nm) = (c.vx()?, c.nm()?);
            chain(vec![("v²_a(x)", v * v), ("¼‖xx♯+x♯x‖_a", 0.25 * nm), ("v²_a(x)", v * v)])
        }
        "rem-3-9" => {
            if c.ax_zero()? {
                return Ok(Outcome::Skip("ax = 0".into()));
            }
            if !c.ax2_zero()? {
                return Ok(Outcome::Skip("ax² ≠ 0".into()));
            }
            let (v, nx) = (c.vx()?, c.nx()?);
            chain(vec![("v_a(x)", v), ("½‖x‖_a", 0.5 * nx), ("v_a(x)", v)])
        }
        "thm-3-10" => {
            let sharp = c.sharp()?;
            let i = imag_unit::<f64>();
            let plus = c.norm(&c.x.lin_comb(real(1.0), &sharp, i))?;
            let minus = c.norm(&c.x.lin_comb(real(1.0), &sharp, -i))?;
            chain(vec![
                ("½‖x‖_a + ¼|‖x+ix♯‖_a − ‖x−ix♯‖_a|", 0.5 * c.nx()? + 0.25 * (plus - minus).abs()),
                ("v_a(x)", c.vx()?),
            ])
        }
        "thm-3-11" => {
            let (v, d, nm) = (c.vx()?, c.dx()?, c.nm()?);
            chain(vec![
                ("¼‖xx♯+x♯x‖_a", 0.25 * nm),
                ("½(v²_a(x) + d²_a(x))", 0.5 * (v * v + d * d)),
                ("v²_a(x)", v * v),
            ])
        }
        "thm-3-12" => {
            let y = c.y()?;
            let xy = c.x.matmul(y);
            let (vx, vy, dx, dy) = (c.vx()?, c.vy()?, c.dx()?, c.dy()?);
            let k1 = c.nx()? * (vy + dy);
            let k2 = c.ny()? * (vx + dx);
            let k3 = (vx + dx) * (vy + dy);
            chain(vec![
                ("v_a(xy)", c.v(&xy)?),
                ("‖xy‖_a", c.norm(&xy)?),
                ("min{K1,K2,K3}", k1.min(k2).min(k3)),
                ("4v_a(x)v_a(y)", 4.0 * vx * vy),
            ])
        }
        "thm-4-3" => {
            if let Some(reason) = c.self_adjoint_pair()? {
                return Ok(Outcome::Skip(reason));
            }
            if c.nx()? > 1.0 + structural_tol::<f64>() {
                return Ok(Outcome::Skip("needs ‖x‖_a ≤ 1".into()));
            }
            let y = c.y()?;
            chain(vec![
                ("‖x+y‖_a", c.norm(&(&c.x + y))?),
                ("1 + 2‖xy‖_a", 1.0 + 2.0 * c.norm(&c.x.matmul(y))?),
            ])
        }
        "cor-4-4" => {
            if let Some(reason) = c.self_adjoint_pair()? {
                return Ok(Outcome::Skip(reason));
            }
            let y = c.y()?;
            let nx = c.nx()?;
            chain(vec![
                ("‖x+y‖_a", c.norm(&(&c.x + y))?),
                ("‖x‖_a + 2‖xy‖_a/‖x‖_a", nx + 2.0 * c.norm(&c.x.matmul(y))? / nx),
            ])
        }
        "thm-4-6" => {
            if let Some(reason) = c.diagonal_model() {
                return Ok(Outcome::Skip(reason));
            }
            if let Some(reason) = c.self_adjoint_pair()? {
                return Ok(Outcome::Skip(reason));
            }
            let y = c.y()?;
            let nx = c.nx()?;
            chain(vec![
                ("‖x+y‖_a", c.norm(&(&c.x + y))?),
                ("‖x‖_a + ‖xy‖_a/‖x‖_a", nx + c.norm(&c.x.matmul(y))? / nx),
            ])
        }
        "lem-4-1" => {
            if let Some(reason) = c.diagonal_model() {
                return Ok(Outcome::Skip(reason));
            }
            let nx = c.nx()?;
            let r = a_spectral_radius(&c.w, &c.x)?.r_eig;
            let half = c.full.sqrt_weight()?.seminorm_of_member(c.raw_x)?;
            let chars = character_values(c.full, c.raw_x)?
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            chain(vec![
                ("‖x‖_a", nx),
                ("v_a(x)", c.vx()?),
                ("r_a(x)", r),
                ("‖x‖_(a^½)", half),
                ("max|φ(x)|", chars),
                ("‖x‖_a", nx),
            ])
        }
        "lem-4-2" => {
            let y = c.y()?;
            let rxy = a_spectral_radius(&c.w, &c.x.matmul(y))?.r_eig;
            let ryx = a_spectral_radius(&c.w, &y.matmul(&c.x))?.r_eig;
            chain(vec![("r_a(xy)", rxy), ("r_a(yx)", ryx), ("r_a(xy)", rxy)])
        }
        "thm-2-5" => {
            let v = c.vpx()?;
            let alt = check_alt_formulas(&c.w, &c.x, c.p)?;
            chain(vec![
                ("v_(a,(t,s))(x)", v),
                ("sup_(α²+β²=1)‖αℜ + βℑ‖_a", alt.circle),
                ("v_(a,(t,s))(x)", v),
                ("½sup_(θ,φ)‖ℜ((e^{iθ}−ie^{iφ})x)‖_a", alt.two_angle),
                ("v_(a,(t,s))(x)", v),
            ])
        }
        "thm-2-8" => {
            let opt = weighted_radius(&c.w, &c.x, c.p)?;
            let m = t.max(s) * c.nx()?;
            let mut thetas: Vec<f64> = (0..64).map(|k| std::f64::consts::PI * k as f64 / 64.0).collect();
            thetas.push(opt.theta_star);
            let dev = real_part_profile(&c.w, &c.x, c.p, &thetas)?
                .iter()
                .map(|&pv| (pv - m).abs())
                .fold(0.0, f64::max);
            let excess = opt.value - m;
            chain(vec![
                ("v_(a,(t,s))(x) − max{t,s}‖x‖_a", excess),
                ("max_θ|‖ℜ_(t,s)(e^{iθ}x)‖_a − max{t,s}‖x‖_a|", dev),
                ("v_(a,(t,s))(x) − max{t,s}‖x‖_a", excess),
            ])
        }
        other => Err(Error::UnknownChecker(other.to_string())),
    }
}

fn context_of(w: &Weight<f64>, inputs: &CheckInputs) -> ChainContext {
    let mut mats = vec![MatrixJson::from(&inputs.x)];
    if let Some(y) = &inputs.y {
        mats.push(MatrixJson::from(y));
    }
    ChainContext {
        seed: inputs.seed,
        ensemble: inputs.ensemble,
        weight: MatrixJson::from(w.matrix()),
        inputs: mats,
        t: inputs.p.t(),
        s: inputs.p.s(),
    }
}

fn run_checker(id: &str, ctx: &Ctx<'_>, inputs: &CheckInputs) -> Result<ValueChain> {
    let info = checker_info(id)?;
    if info.arity == 2 && inputs.y.is_none() {
        return Err(Error::InvalidArgument(format!("checker {id} needs two inputs")));
    }
    let context = context_of(ctx.full, inputs);
    Ok(match evaluate(id, ctx)? {
        Outcome::Skip(reason) => ValueChain {
            checker_id: id.to_string(),
            labels: Vec::new(),
            values: Vec::new(),
            slack: None,
            status: ChainStatus::Skip,
            skip_reason: Some(reason),
            context,
        },
        Outcome::Chain(entries) => {
            let labels = entries.iter().map(|(l, _)| l.to_string()).collect();
            let values: Vec<f64> = entries.iter().map(|&(_, v)| v).collect();
            let ok = chain_holds(&values, ctx.tol * info.tol_scale);
            ValueChain {
                checker_id: id.to_string(),
                labels,
                slack: min_gap(&values),
                values,
                status: if ok { ChainStatus::Pass } else { ChainStatus::Fail },
                skip_reason: None,
                context,
            }
        }
    })
}

/// Evaluates one checker on one instance.
pub fn check(checker_id: &str, w: &Weight<f64>, inputs: &CheckInputs) -> Result<ValueChain> {
    checker_info(checker_id)?;
    let ctx = Ctx::new(w, inputs)?;
    run_checker(checker_id, &ctx, inputs)
}

/// Ensemble family entry of a suite: a kind at a dimension and weight rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteEnsemble {
    pub kind: EnsembleKind,
    pub dim: usize,
    pub rank: usize,
}

/// Kinds {general-member, a-self-adjoint, nilpotent-ax2-zero,
/// commutative-diagonal} × n ∈ {2,3,4} × rank ∈ {n, n−1}; the nilpotent kind
/// needs rank ≥ 2.
pub fn default_ensembles() -> Vec<SuiteEnsemble> {
    let kinds = [
        EnsembleKind::GeneralMember,
        EnsembleKind::ASelfAdjoint,
        EnsembleKind::NilpotentAx2Zero,
        EnsembleKind::CommutativeDiagonal,
    ];
    let mut out = Vec::new();
    for kind in kinds {
        for dim in 2..=4 {
            for rank in [dim, dim - 1] {
                if kind == EnsembleKind::NilpotentAx2Zero && rank < 2 {
                    continue;
                }
                out.push(SuiteEnsemble { kind, dim, rank });
            }
        }
    }
    out
}

/// One sampled instance of a suite trial.
#[derive(Debug, Clone)]
pub struct Trial {
    pub weight: Weight<f64>,
    pub inputs: CheckInputs,
    /// Uniform draw in `(0, 1]` used to rescale inputs where a checker needs it.
    pub unit: f64,
}

/// Builds the instance of a trial; a pure function of its arguments.
pub fn build_trial(ens: SuiteEnsemble, trial_seed: u64) -> Result<Trial> {
    let diagonal = ens.kind == EnsembleKind::CommutativeDiagonal;
    let weight = random_weight::<f64>(derive_seed(trial_seed, 1), ens.dim, ens.rank, diagonal)?;
    let mut rng = stream_rng(trial_seed, 2);
    let scale = (rng.gen_range(-1.5f64..1.5)).exp();
    let cfg = |s: u64| EnsembleConfig {
        seed: derive_seed(trial_seed, s),
        dim: ens.dim,
        weight_rank: ens.rank,
        kind: ens.kind,
        scale,
    };
    let x = sample(&cfg(3), &weight)?;
    let y = sample(&cfg(4), &weight)?;
    let (t, s) = match rng.gen_range(0..10) {
        0 => (rng.gen_range(0.05..2.0), 0.0),
        1 => (0.0, rng.gen_range(0.05..2.0)),
        2 => {
            let t = rng.gen_range(0.05..2.0);
            (t, t)
        }
        _ => (rng.gen_range(0.05..2.0), rng.gen_range(0.05..2.0)),
    };
    let unit = 1.0 - rng.gen::<f64>();
    Ok(Trial {
        weight,
        inputs: CheckInputs {
            x,
            y: Some(y),
            p: WeightPair::new(t, s)?,
            seed: trial_seed,
            ensemble: Some(cfg(3)),
        },
        unit,
    })
}

/// Per-checker adjustments of a raw trial. `None` means the raw inputs are used.
fn prepare(id: &str, trial: &Trial) -> Result<Option<CheckInputs>> {
    let w = &trial.weight;
    let raw = &trial.inputs;
    let kind = raw.ensemble.map(|e| e.kind);
    match id {
        "thm-4-3" | "cor-4-4" | "thm-4-6" => {
            let mut x = crate::weighted::a_real_part(w, &raw.x)?;
            let mut y = crate::weighted::a_real_part(w, raw.y.as_ref().expect("pair trial"))?;
            if kind == Some(EnsembleKind::CommutativeDiagonal) {
                // Only the support of A matters; keep the elements diagonal.
                x = Matrix::diag(&x.diagonal());
                y = Matrix::diag(&y.diagonal());
            }
            let (nx, ny) = (w.seminorm_of_member(&x)?, w.seminorm_of_member(&y)?);
            if ny > nx {
                std::mem::swap(&mut x, &mut y);
            }
            if id == "thm-4-3" {
                let top = nx.max(ny);
                if top > 0.0 {
                    let c = trial.unit / top;
                    x = x.scale_real(c);
                    y = y.scale_real(c);
                }
            }
            Ok(Some(CheckInputs {
                x,
                y: Some(y),
                ..raw.clone()
            }))
        }
        "thm-2-8" if kind == Some(EnsembleKind::NilpotentAx2Zero) => {
            let t = raw.p.sum() / 2.0;
            Ok(Some(CheckInputs {
                p: WeightPair::new(t, t)?,
                ..raw.clone()
            }))
        }
        _ => Ok(None),
    }
}

fn compatible(info: &CheckerInfo, kind: EnsembleKind) -> bool {
    match info.compat {
        Compat::AllKinds => true,
        Compat::DiagonalOnly => kind == EnsembleKind::CommutativeDiagonal,
    }
}

/// Reproduction record of a failing chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub seed: u64,
    pub weight: MatrixJson,
    pub inputs: Vec<MatrixJson>,
    pub t: f64,
    pub s: f64,
    pub ensemble: Option<EnsembleConfig>,
    pub labels: Vec<String>,
    pub chain: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckerReport {
    pub trials: usize,
    pub skips: usize,
    pub failures: Vec<FailureRecord>,
    pub min_slack: Option<f64>,
    pub median_slack: Option<f64>,
    pub tightest: Option<ValueChain>,
}

/// `{checker_id: report}`, ordered by checker id.
pub type SuiteReport = BTreeMap<String, CheckerReport>;

/// Suite parameters: `trials` per ensemble kind and checker; checkers that
/// need `d_a` run `heavy_trials` per kind.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub ensembles: Vec<SuiteEnsemble>,
    pub checkers: Vec<String>,
    pub trials: usize,
    pub heavy_trials: usize,
    pub seed: u64,
    pub chain_tol: f64,
}

impl SuiteConfig {
    /// Defaults: every checker, the default ensembles, d_a checkers at a quarter of the trials.
    pub fn new(trials: usize, seed: u64) -> Self {
        Self {
            ensembles: default_ensembles(),
            checkers: checker_ids().into_iter().map(String::from).collect(),
            trials,
            heavy_trials: trials.div_ceil(4),
            seed,
            chain_tol: Tolerances::<f64>::default().chain_tol,
        }
    }
}

fn with_chain_tol(w: Weight<f64>, chain_tol: f64) -> Result<Weight<f64>> {
    let tol = w.tolerances().with_chain_tol(chain_tol);
    crate::weighted::make_weight(w.matrix(), tol)
}

/// Runs every selected checker on every compatible ensemble. Trial `i` of a
/// kind uses that kind's `(dim, rank)` entries round-robin and the seed
/// `derive_seed(derive_seed(seed, kind), i)`, so all checkers see the same
/// instances and any failure is reproducible from its record.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    if config.checkers.is_empty() {
        return Err(Error::EmptyCheckers);
    }
    if config.trials == 0 {
        return Err(Error::InvalidArgument("trials must be >= 1".into()));
    }
    let infos: Vec<&CheckerInfo> = config
        .checkers
        .iter()
        .map(|id| checker_info(id))
        .collect::<Result<_>>()?;
    let mut kinds: Vec<EnsembleKind> = config.ensembles.iter().map(|e| e.kind).collect();
    kinds.sort();
    kinds.dedup();

    let mut slacks: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    let mut report: SuiteReport = infos
        .iter()
        .map(|i| {
            (
                i.id.to_string(),
                CheckerReport {
                    trials: 0,
                    skips: 0,
                    failures: Vec::new(),
                    min_slack: None,
                    median_slack: None,
                    tightest: None,
                },
            )
        })
        .collect();

    for kind in kinds {
        let members: Vec<SuiteEnsemble> = config.ensembles.iter().copied().filter(|e| e.kind == kind).collect();
        let active: Vec<&CheckerInfo> = infos.iter().copied().filter(|i| compatible(i, kind)).collect();
        if active.is_empty() {
            continue;
        }
        let kind_seed = derive_seed(config.seed, kind as u64 + 1);
        let max_trials = active
            .iter()
            .map(|i| if i.heavy { config.heavy_trials.min(config.trials) } else { config.trials })
            .max()
            .unwrap_or(0);
        for n in 0..max_trials {
            let ens = members[n % members.len()];
            let trial_seed = derive_seed(kind_seed, n as u64);
            let mut trial = build_trial(ens, trial_seed)?;
            trial.weight = with_chain_tol(trial.weight, config.chain_tol)?;
            let base = Ctx::new(&trial.weight, &trial.inputs)?;
            for info in &active {
                let limit = if info.heavy { config.heavy_trials.min(config.trials) } else { config.trials };
                if n >= limit {
                    continue;
                }
                let chain = match prepare(info.id, &trial)? {
                    None => run_checker(info.id, &base, &trial.inputs)?,
                    Some(inputs) => {
                        let ctx = Ctx::new(&trial.weight, &inputs)?;
                        run_checker(info.id, &ctx, &inputs)?
                    }
                };
                let entry = report.get_mut(info.id).expect("registered");
                entry.trials += 1;
                match chain.status {
                    ChainStatus::Skip => entry.skips += 1,
                    status => {
                        let slack = chain.slack.unwrap_or(f64::INFINITY);
                        slacks.entry(info.id).or_default().push(slack);
                        let tighter = entry
                            .tightest
                            .as_ref()
                            .map_or(true, |c| slack < c.slack.unwrap_or(f64::INFINITY));
                        if status == ChainStatus::Fail {
                            entry.failures.push(FailureRecord {
                                seed: chain.context.seed,
                                weight: chain.context.weight.clone(),
                                inputs: chain.context.inputs.clone(),
                                t: chain.context.t,
                                s: chain.context.s,
                                ensemble: chain.context.ensemble,
                                labels: chain.labels.clone(),
                                chain: chain.values.clone(),
                            });
                        }
                        if tighter {
                            entry.tightest = Some(chain);
                        }
                    }
                }
            }
        }
    }
    for (id, mut s) in slacks {
        s.sort_by(|a, b| a.total_cmp(b));
        let entry = report.get_mut(id).expect("registered");
        entry.min_slack = s.first().copied();
        entry.median_slack = Some(s[s.len() / 2]);
    }
    Ok(report)
}

pub fn report_to_json(report: &SuiteReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes")
}

/// Total failures across checkers.
pub fn failure_count(report: &SuiteReport) -> usize {
    report.values().map(|r| r.failures.len()).sum()
}

/// Re-evaluates a recorded failure from its matrices.
pub fn reproduce(checker_id: &str, record: &FailureRecord, chain_tol: f64) -> Result<ValueChain> {
    let a = record.weight.to_matrix::<f64>()?;
    let w = crate::weighted::make_weight(&a, Tolerances::default().with_chain_tol(chain_tol))?;
    let x = record
        .inputs
        .first()
        .ok_or_else(|| Error::InvalidArgument("record has no inputs".into()))?
        .to_matrix()?;
    let y = record.inputs.get(1).map(|m| m.to_matrix()).transpose()?;
    let inputs = CheckInputs {
        x,
        y,
        p: WeightPair::new(record.t, record.s)?,
        seed: record.seed,
        ensemble: record.ensemble,
    };
    check(checker_id, &w, &inputs)
}

/// Best instance of a tightness search.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TightnessResult {
    /// `values[pair] / values[pair + 1]` of the best chain.
    pub ratio: f64,
    pub pair: usize,
    pub chain: ValueChain,
    pub evaluations: usize,
}

fn ratio_at(chain: &ValueChain, pair: usize) -> Option<f64> {
    if chain.status == ChainStatus::Skip || pair + 1 >= chain.values.len() {
        return None;
    }
    let (a, b) = (chain.values[pair], chain.values[pair + 1]);
    (b.abs() > 1e-12 && a.is_finite() && b.is_finite()).then(|| a / b)
}

/// Structure-preserving perturbation of a member of the given kind.
fn perturb(w: &Weight<f64>, x: &Matrix<f64>, kind: EnsembleKind, eps: f64, seed: u64) -> Result<Matrix<f64>> {
    let n = w.dim();
    let cfg = EnsembleConfig::new(seed, n, w.rank(), kind);
    let nx = 1.0 + w.seminorm_of_member(x)?;
    match kind {
        EnsembleKind::NilpotentAx2Zero => {
            // Similarity by a member S = I + εZ keeps x² mapped into ker A.
            let z = sample(&EnsembleConfig::new(seed, n, w.rank(), EnsembleKind::GeneralMember), w)?;
            let zn = 1.0 + w.seminorm_of_member(&z)?;
            let s = &Matrix::identity(n) + &z.scale_real(eps / zn);
            let s_inv = inverse(&s)?;
            Ok(s.matmul(x).matmul(&s_inv))
        }
        _ => {
            let z = sample(&cfg, w)?;
            let zn = 1.0 + w.seminorm_of_member(&z)?;
            Ok(x + &z.scale_real(eps * nx / zn))
        }
    }
}

/// Gauss-Jordan inverse with partial pivoting.
fn inverse(m: &Matrix<f64>) -> Result<Matrix<f64>> {
    let n = m.square_dim()?;
    let mut a = m.clone();
    let mut inv = Matrix::<f64>::identity(n);
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[(i, col)].norm().total_cmp(&a[(j, col)].norm()))
            .expect("nonempty");
        if a[(piv, col)].norm() < 1e-14 {
            return Err(Error::InvalidArgument("singular perturbation".into()));
        }
        for k in 0..n {
            let (t1, t2) = (a[(col, k)], a[(piv, k)]);
            a[(col, k)] = t2;
            a[(piv, k)] = t1;
            let (u1, u2) = (inv[(col, k)], inv[(piv, k)]);
            inv[(col, k)] = u2;
            inv[(piv, k)] = u1;
        }
        let d = Complex::new(1.0, 0.0) / a[(col, col)];
        for k in 0..n {
            a[(col, k)] *= d;
            inv[(col, k)] *= d;
        }
        for i in 0..n {
            if i == col {
                continue;
            }
            let f = a[(i, col)];
            if f == Complex::new(0.0, 0.0) {
                continue;
            }
            for k in 0..n {
                let (ak, ik) = (a[(col, k)], inv[(col, k)]);
                a[(i, k)] -= f * ak;
                inv[(i, k)] -= f * ik;
            }
        }
    }
    Ok(inv)
}

/// Maximises `values[pair]/values[pair+1]` of a checker over an ensemble
/// by random restarts followed by perturbation descent on the best instance.
pub fn tightness_search(checker_id: &str, pair: usize, ens: SuiteEnsemble, budget: usize, seed: u64) -> Result<TightnessResult> {
    let info = checker_info(checker_id)?;
    if budget == 0 {
        return Err(Error::InvalidArgument("budget must be >= 1".into()));
    }
    if !compatible(info, ens.kind) {
        return Err(Error::InvalidArgument(format!(
            "checker {checker_id} does not run on {}",
            ens.kind.name()
        )));
    }
    let restarts = budget.div_ceil(2);
    let mut best: Option<(f64, Trial, ValueChain)> = None;
    let mut evaluations = 0;
    let eval = |trial: &Trial| -> Result<ValueChain> {
        match prepare(checker_id, trial)? {
            Some(inputs) => check(checker_id, &trial.weight, &inputs),
            None => check(checker_id, &trial.weight, &trial.inputs),
        }
    };
    for n in 0..restarts {
        let trial = build_trial(ens, derive_seed(seed, n as u64))?;
        let chain = eval(&trial)?;
        evaluations += 1;
        if let Some(r) = ratio_at(&chain, pair) {
            if best.as_ref().map_or(true, |(b, _, _)| r > *b) {
                best = Some((r, trial, chain));
            }
        }
    }
    let Some((mut ratio, mut trial, mut chain)) = best else {
        return Err(Error::Unsatisfiable(format!(
            "no instance of {checker_id} with a nonzero denominator at pair {pair}"
        )));
    };
    let mut eps = 0.1;
    for n in 0..budget - restarts {
        let step_seed = derive_seed(seed ^ 0x7E57, n as u64);
        let mut cand = trial.clone();
        let kind = ens.kind;
        cand.inputs.x = match perturb(&trial.weight, &trial.inputs.x, kind, eps, step_seed) {
            Ok(m) => m,
            Err(_) => continue,
        };
        if let Some(y) = &trial.inputs.y {
            if let Ok(m) = perturb(&trial.weight, y, kind, eps, derive_seed(step_seed, 1)) {
                cand.inputs.y = Some(m);
            }
        }
        let c = eval(&cand)?;
        evaluations += 1;
        match ratio_at(&c, pair) {
            Some(r) if r > ratio => {
                ratio = r;
                trial = cand;
                chain = c;
            }
            _ => eps *= 0.5,
        }
        if eps < 1e-9 {
            break;
        }
    }
    Ok(TightnessResult {
        ratio,
        pair,
        chain,
        evaluations,
    })
}

/// Best pair found by the κ-ratio search.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KappaResult {
    /// `sup (‖x+y‖_a − ‖x‖_a)·‖x‖_a/‖xy‖_a` over the sampled pairs.
    pub sup_ratio: f64,
    pub witness_x: Matrix<f64>,
    pub witness_y: Matrix<f64>,
    pub samples: usize,
}

/// `(‖x+y‖_a − ‖x‖_a)·‖x‖_a/‖xy‖_a`, or `None` when `‖xy‖_a` vanishes.
pub fn kappa_ratio(w: &Weight<f64>, x: &Matrix<f64>, y: &Matrix<f64>) -> Result<Option<f64>> {
    let nx = w.seminorm_of_member(x)?;
    let ny = w.seminorm_of_member(y)?;
    let (xr, yr) = (w.compress_reduced(x)?, w.compress_reduced(y)?);
    let eig_tol = w.tolerances().eig_tol;
    let nxy = operator_norm_unchecked(&xr.matmul(&yr), eig_tol);
    if nx <= structural_tol::<f64>() || nxy <= 1e-12 * (1.0 + nx * ny) {
        return Ok(None);
    }
    let sum = operator_norm_unchecked(&(&xr + &yr), eig_tol);
    Ok(Some((sum - nx) * nx / nxy))
}

/// Samples `A`-self-adjoint pairs with `‖y‖_a ≤ ‖x‖_a` (real diagonal pairs
/// when `diagonal` is set) and records the largest κ-ratio. Candidate `i`
/// depends only on `(seed, i)`, so the result is monotone in `budget`.
pub fn kappa_ratio_search(w: &Weight<f64>, diagonal: bool, budget: usize, seed: u64) -> Result<KappaResult> {
    if budget == 0 {
        return Err(Error::InvalidArgument("budget must be >= 1".into()));
    }
    let n = w.dim();
    let kind = if diagonal {
        EnsembleKind::CommutativeDiagonal
    } else {
        EnsembleKind::ASelfAdjoint
    };
    let draw = |s: u64| -> Result<Matrix<f64>> {
        let m = sample(&EnsembleConfig::new(s, n, w.rank(), kind), w)?;
        if diagonal {
            let d: Vec<f64> = m.diagonal().iter().map(|z| z.re).collect();
            Ok(Matrix::real_diag(&d))
        } else {
            Ok(m)
        }
    };
    let mut best: Option<(f64, Matrix<f64>, Matrix<f64>)> = None;
    let mut samples = 0;
    for i in 0..budget {
        let s = derive_seed(seed, i as u64);
        let mut x = draw(derive_seed(s, 1))?;
        let mut y = draw(derive_seed(s, 2))?;
        // Vary the relative size so near-equal norms are explored.
        let mut rng = stream_rng(s, 3);
        y = y.scale_real(rng.gen_range(0.05..1.0));
        if w.seminorm_of_member(&y)? > w.seminorm_of_member(&x)? {
            std::mem::swap(&mut x, &mut y);
        }
        let Some(r) = kappa_ratio(w, &x, &y)? else {
            continue;
        };
        samples += 1;
        if best.as_ref().map_or(true, |(b, _, _)| r > *b) {
            best = Some((r, x, y));
        }
    }
    let (sup_ratio, witness_x, witness_y) = best.ok_or(Error::NoNonzeroSample { budget })?;
    Ok(KappaResult {
        sup_ratio,
        witness_x,
        witness_y,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inputs(x: Matrix<f64>, y: Option<Matrix<f64>>, t: f64, s: f64) -> CheckInputs {
        CheckInputs {
            x,
            y,
            p: WeightPair::new(t, s).unwrap(),
            seed: 0,
            ensemble: None,
        }
    }

    #[test]
    fn registry_has_every_checker_once() {
        let mut ids = checker_ids();
        assert_eq!(ids.len(), 23);
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), 23);
        assert!(matches!(checker_info("nope"), Err(Error::UnknownChecker(_))));
    }

    #[test]
    fn chain_semantics() {
        assert!(chain_holds(&[0.5, 0.5, 1.0], 1e-7));
        assert!(chain_holds(&[1.0 + 1e-8, 1.0], 1e-7));
        assert!(!chain_holds(&[1.0 + 1e-6, 1.0], 1e-7));
    }

    #[test]
    fn jordan_block_eq_1_2() {
        let w = Weight::<f64>::identity(2);
        let x = Matrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let c = check("eq-1-2", &w, &inputs(x, None, 0.5, 0.5)).unwrap();
        assert!(c.passed());
        for (v, e) in c.values.iter().zip([0.5, 0.5, 1.0]) {
            assert!((v - e).abs() < 1e-12);
        }
    }

    #[test]
    fn thm_2_6_collapses_at_unit_pair() {
        let w = Weight::<f64>::new(&Matrix::real_diag(&[2.0, 1.0])).unwrap();
        let x = Matrix::from_real_rows(&[&[1.0, -2.0], &[0.5, 3.0]]);
        let c = check("thm-2-6", &w, &inputs(x, None, 1.0, 0.0)).unwrap();
        assert!(c.passed());
        assert!(c.slack.unwrap().abs() < 1e-10);
    }

    #[test]
    fn rem_3_9_skips_when_ax_vanishes() {
        let w = Weight::<f64>::new(&Matrix::real_diag(&[1.0, 0.0])).unwrap();
        let y = Matrix::from_real_rows(&[&[0.0, 0.0], &[1.0, 0.0]]);
        let c = check("rem-3-9", &w, &inputs(y, None, 0.5, 0.5)).unwrap();
        assert_eq!(c.status, ChainStatus::Skip);
    }

    #[test]
    fn suite_rejects_empty_checker_list() {
        let mut cfg = SuiteConfig::new(1, 1);
        cfg.checkers.clear();
        assert!(matches!(run_suite(&cfg), Err(Error::EmptyCheckers)));
    }

    #[test]
    fn kappa_diagonal_bound() {
        let w = Weight::<f64>::new(&Matrix::real_diag(&[1.0, 0.5, 2.0])).unwrap();
        let k = kappa_ratio_search(&w, true, 200, 3).unwrap();
        assert!(k.sup_ratio <= 1.0 + 1e-6);
    }

    #[test]
    fn inverse_round_trip() {
        let m = Matrix::<f64>::from_complex_rows(&[&[(1.0, 1.0), (2.0, 0.0)], &[(0.0, -1.0), (3.0, 0.5)]]);
        let p = m.matmul(&inverse(&m).unwrap());
        assert!((&p - &Matrix::identity(2)).frobenius_norm() < 1e-14);
    }
}
