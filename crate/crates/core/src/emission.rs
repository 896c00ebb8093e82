//! First-order spontaneous emission from a two-level atom in the dipole
//! approximation.

use crate::error::{Error, Result};
use crate::photon::{helicity_triad, photon_dual_norm, photon_squared_norm, PhotonState};
use crate::spectral::{gauss_legendre, Epsilon, Helicity, SphericalQuadrature, Support};
use crate::vec3::{norm, CVec3, Vec3};
use crate::Real;
use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// |δ|·t below which the resonance factor switches to its Taylor series.
pub const SERIES_THRESHOLD: f64 = 1e-6;

/// (1 − e^{iδt})/δ, with the removable singularity at δ = 0 handled by
/// the series −it·e^{iδt/2}(1 − (δt)²/24).
pub fn resonance_factor<T: Real>(delta: T, t: T) -> Complex<T> {
    let half = T::lit(0.5);
    let y = delta * t;
    let phase = Complex::from_polar(T::one(), half * y);
    if y.abs() < T::lit(SERIES_THRESHOLD) {
        Complex::new(T::zero(), -t) * phase * (T::one() - y * y / T::lit(24.0))
    } else {
        Complex::new(T::zero(), T::lit(-2.0) * (half * y).sin() / delta) * phase
    }
}

/// Direct evaluation of (1 − e^{iδt})/δ without the series branch.
pub fn resonance_factor_direct<T: Real>(delta: T, t: T) -> Complex<T> {
    let half = T::lit(0.5);
    let y = delta * t;
    Complex::new(T::zero(), T::lit(-2.0) * (half * y).sin() / delta) * Complex::from_polar(T::one(), half * y)
}

/// Helicity projector e_λ e_λ† = ½(δ_ij − k̂_i k̂_j − iλ ε_ijl k̂_l); no
/// azimuthal phase convention enters.
pub fn helicity_projector<T: Real>(k_hat: &Vec3<T>, h: Helicity) -> [[Complex<T>; 3]; 3] {
    let l: T = h.sign();
    let half = T::lit(0.5);
    let mut m = [[Complex::new(T::zero(), T::zero()); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let d = if i == j { T::one() } else { T::zero() };
            let mut im = T::zero();
            for (q, kq) in k_hat.iter().enumerate() {
                im = im + levi_civita::<T>(i, j, q) * *kq;
            }
            m[i][j] = Complex::new(half * (d - k_hat[i] * k_hat[j]), -half * l * im);
        }
    }
    m
}

fn levi_civita<T: Real>(i: usize, j: usize, k: usize) -> T {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => T::one(),
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -T::one(),
        _ => T::zero(),
    }
}

/// JSON-facing emission parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmissionConfig {
    pub omega0: f64,
    /// Three (re, im) pairs.
    pub dipole: [[f64; 2]; 3],
    #[serde(default = "one")]
    pub g0: f64,
    /// Window half-width W; defaults to ω₀/2.
    #[serde(rename = "W", default)]
    pub w: Option<f64>,
    #[serde(default)]
    pub n_radial: Option<usize>,
    #[serde(default = "default_n_theta")]
    pub n_theta: usize,
    #[serde(default = "default_n_phi")]
    pub n_phi: usize,
}

fn one() -> f64 {
    1.0
}
fn default_n_theta() -> usize {
    8
}
fn default_n_phi() -> usize {
    8
}

impl Default for EmissionConfig {
    fn default() -> Self {
        Self {
            omega0: 1.0,
            dipole: [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]],
            g0: 1.0,
            w: None,
            n_radial: None,
            n_theta: default_n_theta(),
            n_phi: default_n_phi(),
        }
    }
}

/// Two-level atom: level separation ω₀, dipole direction d, coupling g₀
/// and the momentum quadrature on which amplitudes are sampled.
#[derive(Debug, Clone)]
pub struct EmissionModel<T> {
    pub omega0: T,
    pub dipole: CVec3<T>,
    pub g0: T,
    pub quad: Arc<SphericalQuadrature<T>>,
}

impl<T: Real> EmissionModel<T> {
    pub fn new(omega0: T, dipole: CVec3<T>, g0: T, quad: Arc<SphericalQuadrature<T>>) -> Result<Self> {
        if !(omega0 > T::zero()) {
            return Err(Error::InvalidParameter(format!("ω₀ must be positive, got {omega0}")));
        }
        let dn = dipole.iter().fold(T::zero(), |a, v| a + v.norm_sqr());
        if !(dn > T::zero()) {
            return Err(Error::ZeroVector);
        }
        let (lo, hi) = quad.radial_bounds();
        if !(lo < omega0 && omega0 < hi) {
            return Err(Error::WindowMisplaced { lo: lo.to_f64_lossy(), hi: hi.to_f64_lossy(), center: omega0.to_f64_lossy() });
        }
        Ok(Self { omega0, dipole, g0, quad })
    }

    /// Model with the resonance window [ω₀ − W, ω₀ + W] sized for times up
    /// to `t_max`.
    pub fn with_window(omega0: T, dipole: CVec3<T>, g0: T, half_width: T, t_max: T, n_theta: usize, n_phi: usize) -> Result<Self> {
        let q = SphericalQuadrature::resonance_window(omega0, half_width, t_max, n_theta, n_phi)?;
        Self::new(omega0, dipole, g0, Arc::new(q))
    }

    pub fn from_config(cfg: &EmissionConfig, t_max: T) -> Result<Self> {
        let omega0 = T::lit(cfg.omega0);
        let dipole = cfg.dipole.map(|[re, im]| Complex::new(T::lit(re), T::lit(im)));
        let w = T::lit(cfg.w.unwrap_or(cfg.omega0 / 2.0));
        match cfg.n_radial {
            None => Self::with_window(omega0, dipole, T::lit(cfg.g0), w, t_max, cfg.n_theta, cfg.n_phi),
            Some(nr) => {
                let order = 8;
                let panels = nr.div_ceil(order).max(1);
                let q = SphericalQuadrature::new(omega0 - w, omega0 + w, panels, order, cfg.n_theta, cfg.n_phi)?;
                Self::new(omega0, dipole, T::lit(cfg.g0), Arc::new(q))
            }
        }
    }

    /// M_λ(k) = g₀·conj(e_λ(k))·d.
    pub fn coupling(&self, h: Helicity, k: &Vec3<T>) -> Result<Complex<T>> {
        let tr = helicity_triad(k)?;
        let e = tr.e(h);
        Ok((e[0].conj() * self.dipole[0] + e[1].conj() * self.dipole[1] + e[2].conj() * self.dipole[2]) * self.g0)
    }

    /// c_{g,λ}(k, t) = M_λ(k)·(1 − e^{i(ω−ω₀)t})/(ω − ω₀).
    pub fn amplitude(&self, h: Helicity, k: &Vec3<T>, t: T) -> Result<Complex<T>> {
        if t < T::zero() {
            return Err(Error::NegativeTime(t.to_f64_lossy()));
        }
        Ok(self.coupling(h, k)? * resonance_factor(norm(k) - self.omega0, t))
    }

    /// Emitted photon state on the model quadrature: c_λ⁺ = i·c_{g,λ},
    /// ε = − components zero.
    pub fn emitted_state(&self, t: T) -> Result<PhotonState<T>> {
        if t < T::zero() {
            return Err(Error::NegativeTime(t.to_f64_lossy()));
        }
        let (lo, hi) = self.quad.radial_bounds();
        if !(lo < self.omega0 && self.omega0 < hi) {
            return Err(Error::WindowMisplaced { lo: lo.to_f64_lossy(), hi: hi.to_f64_lossy(), center: self.omega0.to_f64_lossy() });
        }
        let support = Support::Sphere(self.quad.clone());
        let i = Complex::new(T::zero(), T::one());
        let mut s = PhotonState::zeros(support.clone());
        for h in Helicity::BOTH {
            let samples: Vec<Complex<T>> = (0..support.len())
                .into_par_iter()
                .map(|n| self.amplitude(h, &support.momentum(n), t).map(|c| i * c).unwrap_or_else(|_| Complex::new(T::zero(), T::zero())))
                .collect();
            let f = s.component_mut(Epsilon::Plus, h);
            f.samples = samples;
            f.time_label = t;
        }
        Ok(s)
    }

    /// n(t) = Σ_λ ∫dk/((2π)³2)·|c_{g,λ}|², the dual norm of the emitted state.
    pub fn photon_number(&self, t: T) -> Result<T> {
        Ok(photon_dual_norm(&self.emitted_state(t)?))
    }

    /// ⟨ψ|ψ⟩(t) with the covariant weight 1/(2ω).
    pub fn covariant_norm(&self, t: T) -> Result<T> {
        Ok(photon_squared_norm(&self.emitted_state(t)?))
    }

    /// n(t)/⟨ψ|ψ⟩(t).
    pub fn norm_ratio(&self, t: T) -> Result<T> {
        let s = self.emitted_state(t)?;
        let c = photon_squared_norm(&s);
        if !(c > T::zero()) {
            return Err(Error::ZeroNorm);
        }
        Ok(photon_dual_norm(&s) / c)
    }

    /// ψ_λ(x) = i∫dk/((2π)³2)·e_λ(k)·e^{−i(ωt − k·x)}·c_λ⁺(k) at each point.
    ///
    /// The radial window of the model is kept but its node count is raised
    /// to resolve the phase k(t + |x|); the angular integral uses a
    /// Gauss-Legendre rule about the direction of x sized by k|x|.
    pub fn emitted_wavefunction(&self, h: Helicity, t: T, points: &[Vec3<T>]) -> Result<Vec<CVec3<T>>> {
        if t < T::zero() {
            return Err(Error::NegativeTime(t.to_f64_lossy()));
        }
        let r_max = points.iter().fold(T::zero(), |m, x| m.max(norm(x)));
        let radial = self.radial_rule(t, r_max);
        let ev = EvalContext::new(self, h, t, &radial);
        Ok(points.par_iter().map(|x| ev.at(x)).collect())
    }

    fn radial_rule(&self, t: T, r_max: T) -> Vec<(T, T)> {
        let (lo, hi) = self.quad.radial_bounds();
        let (lo, hi) = (lo.to_f64_lossy(), hi.to_f64_lossy());
        let phase = (hi - lo) * (t + r_max).to_f64_lossy();
        let nodes = (8.0 * phase / std::f64::consts::PI).ceil().max(self.quad.n_radial() as f64).max(64.0) as usize;
        if nodes > 50_000 {
            log::warn!("emitted wave function needs {nodes} radial nodes; window·(t + r) is large");
        }
        let order = 8;
        crate::spectral::composite_gauss_legendre(lo, hi, nodes.div_ceil(order), order)
            .into_iter()
            .map(|(k, w)| (T::lit(k), T::lit(w)))
            .collect()
    }

    /// Glauber counting density 2Σ_λ|ψ_λ(x)|²/n(t) at each point.
    pub fn detection_probability(&self, t: T, points: &[Vec3<T>]) -> Result<Vec<T>> {
        let n = self.photon_number(t)?;
        if !(n > T::zero()) {
            return Err(Error::ZeroNorm);
        }
        let mut acc = vec![T::zero(); points.len()];
        for h in Helicity::BOTH {
            let psi = self.emitted_wavefunction(h, t, points)?;
            for (a, v) in acc.iter_mut().zip(&psi) {
                *a = *a + v.iter().fold(T::zero(), |s, c| s + c.norm_sqr());
            }
        }
        let scale = T::lit(2.0) / n;
        Ok(acc.into_iter().map(|v| v * scale).collect())
    }

    /// ρ(r) = r²∫dΩ·p(r n̂) on the given radii. The angular integral uses a
    /// product rule exact for the quadratic angular dependence of |ψ|².
    pub fn radial_density(&self, t: T, radii: &[T]) -> Result<RadialProfile<T>> {
        let (ct, wt) = gauss_legendre(3);
        let n_phi = 4;
        let mut dirs = Vec::new();
        for (c, w) in ct.iter().zip(&wt) {
            let s = (1.0 - c * c).sqrt();
            for j in 0..n_phi {
                let p = (j as f64 + 0.5) * std::f64::consts::TAU / n_phi as f64;
                dirs.push(([s * p.cos(), s * p.sin(), *c], w * std::f64::consts::TAU / n_phi as f64));
            }
        }
        let points: Vec<Vec3<T>> = radii
            .iter()
            .flat_map(|&r| dirs.iter().map(move |(d, _)| [T::lit(d[0]) * r, T::lit(d[1]) * r, T::lit(d[2]) * r]))
            .collect();
        let p = self.detection_probability(t, &points)?;
        let density = radii
            .iter()
            .enumerate()
            .map(|(i, &r)| {
                let ang = dirs.iter().enumerate().fold(T::zero(), |a, (j, (_, w))| a + p[i * dirs.len() + j] * T::lit(*w));
                r * r * ang
            })
            .collect();
        Ok(RadialProfile { r: radii.to_vec(), density, t })
    }
}

struct EvalContext<'a, T: Real> {
    model: &'a EmissionModel<T>,
    h: Helicity,
    // (k, weight·k²·F(k,t)·e^{−ikt}/((2π)³2))
    radial: Vec<(T, Complex<T>)>,
}

impl<'a, T: Real> EvalContext<'a, T> {
    fn new(model: &'a EmissionModel<T>, h: Helicity, t: T, rule: &[(T, T)]) -> Self {
        let c = T::two_pi_cubed() * T::lit(2.0);
        let radial = rule
            .iter()
            .map(|&(k, w)| {
                let f = resonance_factor(k - model.omega0, t) * Complex::from_polar(T::one(), -k * t);
                (k, f * (w * k * k / c))
            })
            .collect();
        Self { model, h, radial }
    }

    fn at(&self, x: &Vec3<T>) -> CVec3<T> {
        let r = norm(x);
        let zero = Complex::new(T::zero(), T::zero());
        let axis = if r > T::zero() { [x[0] / r, x[1] / r, x[2] / r] } else { [T::zero(), T::zero(), T::one()] };
        let k_hi = self.radial.last().map(|v| v.0).unwrap_or_else(T::one);
        let n_theta = ((k_hi * r).to_f64_lossy().ceil() as usize + 24).max(8);
        let (ct, wt) = gauss_legendre(n_theta);
        let n_phi = 6;
        let frame = orthonormal_frame(&axis);
        // c_λ⁺ e_λ = i·c_g·e_λ = i g₀ F (e_λ e_λ†) d, and ψ carries another i
        let pref = -self.model.g0;
        let mut out = [zero; 3];
        for (u, wu) in ct.iter().zip(&wt) {
            let u = T::lit(*u);
            let s = (T::one() - u * u).sqrt();
            // angular vector G(u) = Σ_φ w_φ H_λ(k̂) d
            let mut g = [zero; 3];
            for j in 0..n_phi {
                let p = T::lit((j as f64 + 0.5) * std::f64::consts::TAU / n_phi as f64);
                let (sp, cp) = p.sin_cos();
                let mut kh = [T::zero(); 3];
                for d in 0..3 {
                    kh[d] = s * cp * frame[0][d] + s * sp * frame[1][d] + u * axis[d];
                }
                let hm = helicity_projector(&kh, self.h);
                for a in 0..3 {
                    for b in 0..3 {
                        g[a] = g[a] + hm[a][b] * self.model.dipole[b];
                    }
                }
            }
            let wphi = T::TAU() / T::from_count(n_phi);
            let radial_sum = self
                .radial
                .iter()
                .fold(zero, |acc, (k, c)| acc + *c * Complex::from_polar(T::one(), *k * r * u));
            let coef = radial_sum * (T::lit(*wu) * wphi * pref);
            for a in 0..3 {
                out[a] = out[a] + g[a] * coef;
            }
        }
        out
    }
}

fn orthonormal_frame<T: Real>(a: &Vec3<T>) -> [Vec3<T>; 2] {
    let mut best = 0;
    for i in 1..3 {
        if a[i].abs() < a[best].abs() {
            best = i;
        }
    }
    let mut helper = [T::zero(); 3];
    helper[best] = T::one();
    let e1 = crate::vec3::cross(&helper, a);
    let e1 = crate::vec3::scale(&e1, T::one() / norm(&e1));
    let e2 = crate::vec3::cross(a, &e1);
    [e1, e2]
}

/// Radial detection density ρ(r) at time t.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile<T> {
    pub r: Vec<T>,
    pub density: Vec<T>,
    pub t: T,
}

impl<T: Real> RadialProfile<T> {
    /// Location of the steepest decrease of the amplitude profile √ρ(r),
    /// i.e. the midpoint of the smoothed step that closes the emitted
    /// shell. Central differences on the sampled radii.
    pub fn wavefront(&self) -> Option<T> {
        if self.r.len() < 3 {
            return None;
        }
        let amp: Vec<T> = self.density.iter().map(|d| d.max(T::zero()).sqrt()).collect();
        let mut best: Option<(T, T)> = None;
        for i in 1..self.r.len() - 1 {
            let slope = (amp[i + 1] - amp[i - 1]) / (self.r[i + 1] - self.r[i - 1]);
            if best.is_none_or(|(s, _)| slope < s) {
                best = Some((slope, self.r[i]));
            }
        }
        best.map(|(_, r)| r)
    }

    pub fn argmax(&self) -> Option<T> {
        self.r
            .iter()
            .zip(&self.density)
            .fold(None, |acc: Option<(T, T)>, (&r, &d)| match acc {
                Some((_, bd)) if bd >= d => acc,
                _ => Some((r, d)),
            })
            .map(|(r, _)| r)
    }

    /// Trapezoid integral of ρ over the sampled radii.
    pub fn integral(&self) -> T {
        let mut acc = T::zero();
        for i in 1..self.r.len() {
            acc = acc + (self.r[i] - self.r[i - 1]) * (self.density[i] + self.density[i - 1]) * T::lit(0.5);
        }
        acc
    }
}
