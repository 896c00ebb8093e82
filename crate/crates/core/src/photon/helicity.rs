use crate::error::{Error, Result};
use crate::vec3::{complexify, norm, CVec3, Vec3};
use crate::Real;
use crate::spectral::Helicity;
use num_complex::Complex;

/// Threshold on sin θ below which a momentum counts as on the polar axis.
pub const POLAR_TOLERANCE: f64 = 1e-12;

/// Spherical-polar frame at k and the helicity vectors
/// e_λ = (e_θ + iλ e_φ)/√2.
///
/// Phase table: e_θ = (cosθ cosφ, cosθ sinφ, −sinθ), e_φ = (−sinφ, cosφ, 0),
/// so conj(e_λ) = e_{−λ} and k̂·e_λ = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HelicityTriad<T> {
    pub k_hat: Vec3<T>,
    pub e_theta: Vec3<T>,
    pub e_phi: Vec3<T>,
    pub e_plus: CVec3<T>,
    pub e_minus: CVec3<T>,
}

impl<T: Real> HelicityTriad<T> {
    pub fn e(&self, h: Helicity) -> &CVec3<T> {
        match h {
            Helicity::Plus => &self.e_plus,
            Helicity::Minus => &self.e_minus,
        }
    }

    /// Rows e_θ, e_φ, k̂: the rotation carrying the local frame onto the
    /// Cartesian axes.
    pub fn rotation(&self) -> [Vec3<T>; 3] {
        [self.e_theta, self.e_phi, self.k_hat]
    }
}

pub fn helicity_triad<T: Real>(k: &Vec3<T>) -> Result<HelicityTriad<T>> {
    let kn = norm(k);
    if kn == T::zero() {
        return Err(Error::ZeroVector);
    }
    let rho = (k[0] * k[0] + k[1] * k[1]).sqrt();
    let sin_t = rho / kn;
    if sin_t < T::lit(POLAR_TOLERANCE) {
        return Err(Error::PolarAxis { sin_theta: sin_t.to_f64_lossy() });
    }
    let cos_t = k[2] / kn;
    let (cos_p, sin_p) = (k[0] / rho, k[1] / rho);
    let k_hat = [k[0] / kn, k[1] / kn, k[2] / kn];
    let e_theta = [cos_t * cos_p, cos_t * sin_p, -sin_t];
    let e_phi = [-sin_p, cos_p, T::zero()];
    let r = T::FRAC_1_SQRT_2();
    let build = |l: T| -> CVec3<T> {
        let mut out = complexify(&e_theta);
        for (o, p) in out.iter_mut().zip(&e_phi) {
            *o = Complex::new(o.re * r, l * *p * r);
        }
        out
    };
    Ok(HelicityTriad { k_hat, e_theta, e_phi, e_plus: build(T::one()), e_minus: build(-T::one()) })
}

/// e_λ(k), or zero on the polar axis and at k = 0.
pub fn helicity_vector_or_zero<T: Real>(k: &Vec3<T>, h: Helicity) -> CVec3<T> {
    match helicity_triad(k) {
        Ok(tr) => *tr.e(h),
        Err(_) => [Complex::new(T::zero(), T::zero()); 3],
    }
}

pub type Matrix3<T> = [[Complex<T>; 3]; 3];

/// P_ij(k) = Σ_λ e_λi(k)·conj(e_λj(k)).
pub fn transverse_projector<T: Real>(k: &Vec3<T>) -> Result<Matrix3<T>> {
    let tr = helicity_triad(k)?;
    let mut p = [[Complex::new(T::zero(), T::zero()); 3]; 3];
    for e in [&tr.e_plus, &tr.e_minus] {
        for i in 0..3 {
            for j in 0..3 {
                p[i][j] = p[i][j] + e[i] * e[j].conj();
            }
        }
    }
    Ok(p)
}

/// δ_ij − k_i k_j/|k|².
pub fn closed_form_projector<T: Real>(k: &Vec3<T>) -> [[T; 3]; 3] {
    let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    let mut p = [[T::zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let d = if i == j { T::one() } else { T::zero() };
            p[i][j] = d - k[i] * k[j] / k2;
        }
    }
    p
}

/// Max over the sample of the entrywise distance between the helicity sum
/// and δ_ij − k̂_i k̂_j. Polar-axis momenta are skipped.
pub fn transverse_delta_check<T: Real>(ks: &[Vec3<T>]) -> T {
    let mut worst = T::zero();
    for k in ks {
        let Ok(p) = transverse_projector(k) else { continue };
        let q = closed_form_projector(k);
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max((p[i][j] - Complex::new(q[i][j], T::zero())).norm());
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vec3::{cdot, cross, dot, hdot};

    #[test]
    fn x_axis_frame() {
        let tr = helicity_triad(&[1.0f64, 0.0, 0.0]).unwrap();
        let close = |a: &Vec3<f64>, b: &Vec3<f64>| a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-15);
        assert!(close(&tr.e_theta, &[0.0, 0.0, -1.0]));
        assert!(close(&tr.e_phi, &[0.0, 1.0, 0.0]));
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let ep = [Complex::new(0.0, 0.0), Complex::new(0.0, r), Complex::new(-r, 0.0)];
        for i in 0..3 {
            assert!((tr.e_plus[i] - ep[i]).norm() < 1e-15);
        }
    }

    #[test]
    fn polar_and_zero_errors() {
        assert!(matches!(helicity_triad(&[0.0f64, 0.0, 1.0]), Err(Error::PolarAxis { .. })));
        assert!(matches!(helicity_triad(&[0.0f64, 0.0, 0.0]), Err(Error::ZeroVector)));
    }

    #[test]
    fn triad_invariants() {
        let k = [0.3f64, -1.2, 0.7];
        let tr = helicity_triad(&k).unwrap();
        let c = cross(&tr.e_theta, &tr.e_phi);
        for i in 0..3 {
            assert!((c[i] - tr.k_hat[i]).abs() < 1e-14);
        }
        assert!(dot(&tr.e_theta, &tr.e_phi).abs() < 1e-15);
        let kc = complexify(&k);
        for h in Helicity::BOTH {
            let e = tr.e(h);
            assert!(cdot(&kc, e).norm() < 1e-14);
            assert!((hdot(e, e).re - 1.0).abs() < 1e-14);
            let ce = crate::vec3::conj3(e);
            let other = tr.e(h.flip());
            for i in 0..3 {
                assert!((ce[i] - other[i]).norm() < 1e-15);
            }
        }
        assert!(hdot(&tr.e_plus, &tr.e_minus).norm() < 1e-15);
    }

    #[test]
    fn projector_trace_and_transversality() {
        let k = [-0.4f64, 0.9, 2.0];
        let p = transverse_projector(&k).unwrap();
        let tr = p[0][0] + p[1][1] + p[2][2];
        assert!((tr - Complex::new(2.0, 0.0)).norm() < 1e-14);
        for row in &p {
            let pk = row[0] * k[0] + row[1] * k[1] + row[2] * k[2];
            assert!(pk.norm() < 1e-14);
        }
        assert!(transverse_delta_check(&[k, [1.0, 1.0, 1.0], [0.0, 0.0, 3.0]]) < 1e-14);
    }
}
