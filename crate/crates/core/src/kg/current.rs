use super::state::KgState;
use crate::error::Result;
use crate::spectral::{synthesize_with, Dispersion, Epsilon, SpectralField};
use crate::vec3::Vec3;
use crate::Real;
use num_complex::Complex;
use rayon::prelude::*;

/// Four-current J^μ sampled on the position grid (mostly-minus metric,
/// J^a the spatial components).
///
/// Samples are complex: the biorthogonal current pairs φ with φ_c and is
/// not real in general. The conventional current is real up to rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct FourCurrentSamples<T> {
    pub j0: Vec<Complex<T>>,
    pub j_vec: [Vec<Complex<T>>; 3],
    /// ∂_t J⁰ + ∇·J evaluated with exact spectral derivatives.
    pub divergence: Vec<Complex<T>>,
    pub time_label: T,
    /// Largest frequency among the populated modes.
    pub omega_max: T,
}

impl<T: Real> FourCurrentSamples<T> {
    pub fn j0_real(&self) -> Vec<T> {
        self.j0.iter().map(|v| v.re).collect()
    }

    pub fn j0_max_abs(&self) -> T {
        self.j0.iter().fold(T::zero(), |m, v| m.max(v.norm()))
    }

    /// ‖∂_μJ^μ‖_∞ / (‖J⁰‖_∞·ω_max).
    pub fn continuity_residual(&self) -> T {
        let div = self.divergence.iter().fold(T::zero(), |m, v| m.max(v.norm()));
        let scale = self.j0_max_abs() * self.omega_max;
        if scale > T::zero() {
            div / scale
        } else {
            div
        }
    }

    pub fn add(&mut self, other: &Self) {
        let add = |a: &mut Vec<Complex<T>>, b: &Vec<Complex<T>>| a.iter_mut().zip(b).for_each(|(x, y)| *x = *x + *y);
        add(&mut self.j0, &other.j0);
        for a in 0..3 {
            add(&mut self.j_vec[a], &other.j_vec[a]);
        }
        add(&mut self.divergence, &other.divergence);
        self.omega_max = self.omega_max.max(other.omega_max);
    }
}

/// A field with its first and second space-time derivatives on the grid.
#[derive(Debug, Clone)]
pub struct Jet<T> {
    pub v: Vec<Complex<T>>,
    pub dt: Vec<Complex<T>>,
    pub dtt: Vec<Complex<T>>,
    pub d: [Vec<Complex<T>>; 3],
    pub dd: [Vec<Complex<T>>; 3],
}

impl<T: Real> Jet<T> {
    /// Jet of Σ_k g(k)·c(k)·e^{−iε(ωt − k·x)}.
    pub fn from_field<G>(f: &SpectralField<T>, disp: &Dispersion<T>, t: T, g: G) -> Result<Self>
    where
        G: Fn(&Vec3<T>, T) -> Complex<T> + Sync,
    {
        let e: T = f.epsilon.sign();
        let i = Complex::new(T::zero(), T::one());
        let syn = |h: &(dyn Fn(&Vec3<T>, T) -> Complex<T> + Sync)| synthesize_with(f, disp, t, |k, w| g(k, w) * h(k, w));
        let v = syn(&|_, _| Complex::new(T::one(), T::zero()))?;
        let dt = syn(&|_, w| -i * e * w)?;
        let dtt = syn(&|_, w| Complex::new(-w * w, T::zero()))?;
        let d = [
            syn(&|k, _| i * e * k[0])?,
            syn(&|k, _| i * e * k[1])?,
            syn(&|k, _| i * e * k[2])?,
        ];
        let dd = [
            syn(&|k, _| Complex::new(-k[0] * k[0], T::zero()))?,
            syn(&|k, _| Complex::new(-k[1] * k[1], T::zero()))?,
            syn(&|k, _| Complex::new(-k[2] * k[2], T::zero()))?,
        ];
        Ok(Self { v, dt, dtt, d, dd })
    }

    pub fn zeros(n: usize) -> Self {
        let z = vec![Complex::new(T::zero(), T::zero()); n];
        Self { v: z.clone(), dt: z.clone(), dtt: z.clone(), d: [z.clone(), z.clone(), z.clone()], dd: [z.clone(), z.clone(), z] }
    }

    /// self + s·other
    pub fn axpy(&self, s: T, other: &Self) -> Self {
        let f = |a: &Vec<Complex<T>>, b: &Vec<Complex<T>>| a.iter().zip(b).map(|(x, y)| *x + *y * s).collect();
        Self {
            v: f(&self.v, &other.v),
            dt: f(&self.dt, &other.dt),
            dtt: f(&self.dtt, &other.dtt),
            d: [f(&self.d[0], &other.d[0]), f(&self.d[1], &other.d[1]), f(&self.d[2], &other.d[2])],
            dd: [f(&self.dd[0], &other.dd[0]), f(&self.dd[1], &other.dd[1]), f(&self.dd[2], &other.dd[2])],
        }
    }
}

/// J^μ = i·a* ∂↔^μ b for two jets: J⁰ = i(a*∂_t b − ∂_t a* b),
/// J^a = −i(a*∂_a b − ∂_a a* b), with the exact divergence.
pub fn bilinear_current<T: Real>(a: &Jet<T>, b: &Jet<T>, time_label: T, omega_max: T) -> FourCurrentSamples<T> {
    let i = Complex::new(T::zero(), T::one());
    let n = a.v.len();
    let j0: Vec<_> = (0..n).into_par_iter().map(|x| i * (a.v[x].conj() * b.dt[x] - a.dt[x].conj() * b.v[x])).collect();
    let jv = |ax: usize| -> Vec<Complex<T>> {
        (0..n).into_par_iter().map(|x| -i * (a.v[x].conj() * b.d[ax][x] - a.d[ax][x].conj() * b.v[x])).collect()
    };
    let divergence = (0..n)
        .into_par_iter()
        .map(|x| {
            let mut s = i * (a.v[x].conj() * b.dtt[x] - a.dtt[x].conj() * b.v[x]);
            for ax in 0..3 {
                s = s - i * (a.v[x].conj() * b.dd[ax][x] - a.dd[ax][x].conj() * b.v[x]);
            }
            s
        })
        .collect();
    FourCurrentSamples { j0, j_vec: [jv(0), jv(1), jv(2)], divergence, time_label, omega_max }
}

fn covariant_jets<T: Real>(s: &KgState<T>, t: T) -> Result<(Jet<T>, Jet<T>)> {
    let grid = s.grid()?;
    let cell = grid.cell_k() / (T::two_pi_cubed() * T::lit(2.0));
    let w = |_: &Vec3<T>, om: T| Complex::new(cell / om, T::zero());
    Ok((Jet::from_field(&s.plus, &s.disp, t, w)?, Jet::from_field(&s.minus, &s.disp, t, w)?))
}

pub(crate) fn populated_omega_max<T: Real>(fields: &[&SpectralField<T>], disp: &Dispersion<T>) -> T {
    let mut m = T::zero();
    for f in fields {
        for (i, v) in f.samples.iter().enumerate() {
            if v.norm_sqr() > T::zero() {
                m = m.max(disp.omega(&f.support.momentum(i)));
            }
        }
    }
    m
}

/// Biorthogonal current J^μ = i φ* ∂↔^μ φ_c with φ_c = φ⁺ − φ⁻.
pub fn current_biorthogonal<T: Real>(s: &KgState<T>, t: T) -> Result<FourCurrentSamples<T>> {
    let (p, m) = covariant_jets(s, t)?;
    let phi = p.axpy(T::one(), &m);
    let phic = p.axpy(-T::one(), &m);
    Ok(bilinear_current(&phi, &phic, t, populated_omega_max(&[&s.plus, &s.minus], &s.disp)))
}

/// Conventional Klein-Gordon current J^μ = i φ* ∂↔^μ φ (charge g = 1).
pub fn current_conventional<T: Real>(s: &KgState<T>, t: T) -> Result<FourCurrentSamples<T>> {
    let (p, m) = covariant_jets(s, t)?;
    let phi = p.axpy(T::one(), &m);
    Ok(bilinear_current(&phi, &phi, t, populated_omega_max(&[&s.plus, &s.minus], &s.disp)))
}

/// Configuration-space scalar product (φ₁, φ₂) = i Σ_x dx³ φ₁* ∂↔_t φ₂c
/// on the t-slice.
pub fn scalar_product_config<T: Real>(a: &KgState<T>, b: &KgState<T>, t: T) -> Result<Complex<T>> {
    let grid = *a.grid()?;
    let (ap, am) = covariant_jets(a, t)?;
    let (bp, bm) = covariant_jets(b, t)?;
    let phi = ap.axpy(T::one(), &am);
    let phic = bp.axpy(-T::one(), &bm);
    let i = Complex::new(T::zero(), T::one());
    let sum = (0..grid.len())
        .into_par_iter()
        .map(|x| i * (phi.v[x].conj() * phic.dt[x] - phi.dt[x].conj() * phic.v[x]))
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Complex::new(T::zero(), T::zero()), |u, v| u + v);
    Ok(sum * grid.cell_x())
}

/// Field values φ = φ⁺ + φ⁻ (or one component) on the position grid.
pub fn field<T: Real>(s: &KgState<T>, which: Option<Epsilon>, t: T) -> Result<Vec<Complex<T>>> {
    let grid = s.grid()?;
    let cell = grid.cell_k() / (T::two_pi_cubed() * T::lit(2.0));
    let w = |_: &Vec3<T>, om: T| Complex::new(cell / om, T::zero());
    let p = synthesize_with(&s.plus, &s.disp, t, w)?;
    let m = synthesize_with(&s.minus, &s.disp, t, w)?;
    Ok(match which {
        Some(Epsilon::Plus) => p,
        Some(Epsilon::Minus) => m,
        None => p.iter().zip(&m).map(|(a, b)| *a + *b).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kg::kg_scalar_product;
    use crate::spectral::GridSpec;

    #[test]
    fn single_mode_currents() {
        let g = GridSpec::new(8, 0.5f64).unwrap();
        let d = Dispersion::new(1.0).unwrap();
        let idx = g.flat(5, 4, 6);
        let k0 = g.k_at(idx);
        let w0 = d.omega(&k0);
        let s = KgState::single_mode(g, d, Epsilon::Plus, idx, Complex::new(3.0, 1.0));
        let j = current_conventional(&s, 0.4).unwrap();
        let jb = current_biorthogonal(&s, 0.4).unwrap();
        let j00 = j.j0[0];
        assert!(j00.re > 0.0);
        for x in 0..g.len() {
            assert!((j.j0[x] - j00).norm() < 1e-12 * j00.norm());
            assert!((jb.j0[x] - j00).norm() < 1e-12 * j00.norm());
            for a in 0..3 {
                // J = (k/ω) J⁰ for a plane wave
                assert!((j.j_vec[a][x] - j00 * (k0[a] / w0)).norm() < 1e-12 * j00.norm());
            }
        }
        let neg = KgState::single_mode(g, d, Epsilon::Minus, idx, Complex::new(1.0, 0.0));
        let jn = current_conventional(&neg, 0.0).unwrap();
        assert!(jn.j0.iter().all(|v| v.re < 0.0));
    }

    #[test]
    fn config_product_matches_momentum_form() {
        let g = GridSpec::new(8, 0.5f64).unwrap();
        let d = Dispersion::new(0.7).unwrap();
        let a = KgState::from_fns(g, d, |k| Complex::new(k[0], 1.0), |k| Complex::new(0.2, k[2]));
        let b = KgState::from_fns(g, d, |k| Complex::new(k[1].sin(), 0.1), |k| Complex::new(k[0] * k[1], -1.0));
        let m = kg_scalar_product(&a, &b).unwrap();
        for t in [0.0, 1.0] {
            let c = scalar_product_config(&a, &b, t).unwrap();
            assert!((c - m).norm() < 1e-10 * m.norm(), "{c} vs {m}");
        }
    }
}
