use super::current::field;
use super::state::KgState;
use crate::error::{Error, Result};
use crate::spectral::{analyze, Dispersion, Epsilon, GridSpec};
use crate::vec3::norm;
use crate::Real;
use num_complex::Complex;
use serde::Serialize;

/// Which frequency components of the field are propagated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CausalityMode {
    PositiveOnly,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CausalityReport {
    pub t: f64,
    pub outside_fraction: f64,
    pub radius: f64,
}

/// Real Gaussian field φ₀(x) = exp(−|x|²/(2σ²)) with zero time derivative,
/// split into φ⁺ = φ⁻ = φ₀/2 at t = 0.
pub fn localized_gaussian<T: Real>(grid: GridSpec<T>, disp: Dispersion<T>, sigma: T) -> Result<KgState<T>> {
    if !(sigma > T::zero()) {
        return Err(Error::InvalidParameter(format!("width must be positive, got {sigma}")));
    }
    let half = T::lit(0.5);
    let phi0: Vec<Complex<T>> = grid
        .positions()
        .map(|x| {
            let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
            Complex::new(half * (-r2 / (T::lit(2.0) * sigma * sigma)).exp(), T::zero())
        })
        .collect();
    let plus = analyze(&phi0, Epsilon::Plus, &disp, &grid, T::zero())?;
    let minus = analyze(&phi0, Epsilon::Minus, &disp, &grid, T::zero())?;
    KgState::new(plus, minus, disp)
}

/// Light-cone radius at t = 0 for a Gaussian of width σ: 4σ plus two cells.
pub fn default_radius<T: Real>(grid: &GridSpec<T>, sigma: T) -> T {
    T::lit(4.0) * sigma + T::lit(2.0) * grid.dx()
}

/// Fraction of Σ_x |φ_sel(x, t)|² outside the ball |x| ≤ r₀ + t, where
/// φ_sel is φ⁺ alone or φ⁺ + φ⁻.
pub fn causality_probe<T: Real>(initial: &KgState<T>, t: T, mode: CausalityMode, r0: T) -> Result<CausalityReport> {
    if t < T::zero() {
        return Err(Error::NegativeTime(t.to_f64_lossy()));
    }
    let grid = *initial.grid()?;
    let which = match mode {
        CausalityMode::PositiveOnly => Some(Epsilon::Plus),
        CausalityMode::Both => None,
    };
    let phi = field(initial, which, t)?;
    let radius = r0 + t;
    let (mut out, mut total) = (0.0f64, 0.0f64);
    for (i, v) in phi.iter().enumerate() {
        let a = v.norm_sqr().to_f64_lossy();
        total += a;
        if norm(&grid.x_at(i)) > radius {
            out += a;
        }
    }
    if total == 0.0 {
        return Err(Error::ZeroNorm);
    }
    Ok(CausalityReport { t: t.to_f64_lossy(), outside_fraction: out / total, radius: radius.to_f64_lossy() })
}
