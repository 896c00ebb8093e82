use crate::error::{Error, Result};
use crate::vec3::{cross, norm, scale, Vec3};
use crate::Real;

/// Gauss-Legendre nodes and weights on [-1, 1], computed in f64.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "Gauss-Legendre rule needs at least one node");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..(n + 1) / 2 {
        // Tricomi initial guess
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * z * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// Composite Gauss-Legendre rule on [a, b] with `panels` equal panels of
/// `order` nodes each.
pub fn composite_gauss_legendre(a: f64, b: f64, panels: usize, order: usize) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let lo = a + h * p as f64;
        for (xi, wi) in x.iter().zip(&w) {
            out.push((lo + 0.5 * h * (xi + 1.0), 0.5 * h * wi));
        }
    }
    out
}

/// Product quadrature over a spherical shell region in momentum space:
/// composite Gauss-Legendre in |k|, Gauss-Legendre in cos θ and the
/// uniform rule in φ. The polar axis may be oriented along any direction.
#[derive(Debug, Clone)]
pub struct SphericalQuadrature<T> {
    radial: Vec<(T, T)>,
    cos_theta: Vec<T>,
    w_theta: Vec<T>,
    phi: Vec<T>,
    radial_degree: usize,
    // columns: e1, e2, polar axis
    frame: [Vec3<T>; 3],
}

impl<T: Real> SphericalQuadrature<T> {
    /// Radial window [k_lo, k_hi] split into `panels` panels of
    /// `order` Gauss-Legendre nodes.
    pub fn new(
        k_lo: T,
        k_hi: T,
        panels: usize,
        order: usize,
        n_theta: usize,
        n_phi: usize,
    ) -> Result<Self> {
        if !(k_lo > T::zero()) || !(k_hi > k_lo) {
            return Err(Error::InvalidParameter(format!(
                "radial window must satisfy 0 < k_lo < k_hi, got [{k_lo}, {k_hi}]"
            )));
        }
        if panels == 0 || order == 0 || n_theta == 0 || n_phi == 0 {
            return Err(Error::InvalidParameter("quadrature node counts must be positive".into()));
        }
        let radial = composite_gauss_legendre(k_lo.to_f64_lossy(), k_hi.to_f64_lossy(), panels, order)
            .into_iter()
            .map(|(k, w)| (T::lit(k), T::lit(w)))
            .collect();
        let (ct, wt) = gauss_legendre(n_theta);
        let tau = std::f64::consts::TAU;
        let phi = (0..n_phi)
            .map(|j| T::lit((j as f64 + 0.5) * tau / n_phi as f64))
            .collect();
        let one = T::one();
        let zero = T::zero();
        Ok(Self {
            radial,
            cos_theta: ct.into_iter().map(T::lit).collect(),
            w_theta: wt.into_iter().map(T::lit).collect(),
            phi,
            radial_degree: 2 * order - 1,
            frame: [[one, zero, zero], [zero, one, zero], [zero, zero, one]],
        })
    }

    /// Resonance window [ω₀ − W, ω₀ + W] with enough radial nodes to resolve
    /// a phase (|k| − ω₀)·t using at least eight nodes per π.
    pub fn resonance_window(
        omega0: T,
        half_width: T,
        t: T,
        n_theta: usize,
        n_phi: usize,
    ) -> Result<Self> {
        if !(half_width > T::zero()) || !(half_width < omega0) {
            return Err(Error::InvalidParameter(format!(
                "window half-width must lie in (0, ω₀), got {half_width}"
            )));
        }
        let order = 8;
        let phase = (half_width * t).to_f64_lossy().abs() * 2.0;
        let nodes = ((phase / std::f64::consts::PI) * 8.0).ceil().max(64.0) as usize;
        let panels = nodes.div_ceil(order);
        Self::new(omega0 - half_width, omega0 + half_width, panels, order, n_theta, n_phi)
    }

    /// Copy of the rule with the polar axis along `axis`.
    pub fn oriented(&self, axis: &Vec3<T>) -> Result<Self> {
        let len = norm(axis);
        if !(len > T::zero()) {
            return Err(Error::ZeroVector);
        }
        let a = scale(axis, T::one() / len);
        // pick the coordinate axis least aligned with a
        let mut helper = [T::zero(); 3];
        let mut best = 0;
        for i in 1..3 {
            if a[i].abs() < a[best].abs() {
                best = i;
            }
        }
        helper[best] = T::one();
        let e1 = cross(&helper, &a);
        let e1 = scale(&e1, T::one() / norm(&e1));
        let e2 = cross(&a, &e1);
        let mut out = self.clone();
        out.frame = [e1, e2, a];
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.radial.len() * self.cos_theta.len() * self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn n_radial(&self) -> usize {
        self.radial.len()
    }

    pub fn n_theta(&self) -> usize {
        self.cos_theta.len()
    }

    pub fn n_phi(&self) -> usize {
        self.phi.len()
    }

    pub fn radial_nodes(&self) -> &[(T, T)] {
        &self.radial
    }

    pub fn cos_theta_nodes(&self) -> &[T] {
        &self.cos_theta
    }

    pub fn theta_weights(&self) -> &[T] {
        &self.w_theta
    }

    pub fn phi_nodes(&self) -> &[T] {
        &self.phi
    }

    pub fn axis(&self) -> Vec3<T> {
        self.frame[2]
    }

    /// Largest polynomial degree in |k| integrated exactly by the radial rule.
    pub fn radial_degree(&self) -> usize {
        self.radial_degree
    }

    #[inline]
    pub fn split(&self, i: usize) -> (usize, usize, usize) {
        let nt = self.cos_theta.len();
        let np = self.phi.len();
        (i / (nt * np), (i / np) % nt, i % np)
    }

    /// Unit direction for angular node (θ index, φ index).
    pub fn direction(&self, it: usize, ip: usize) -> Vec3<T> {
        let c = self.cos_theta[it];
        let s = (T::one() - c * c).sqrt();
        let (sp, cp) = self.phi[ip].sin_cos();
        let [e1, e2, a] = &self.frame;
        let mut out = [T::zero(); 3];
        for d in 0..3 {
            out[d] = s * cp * e1[d] + s * sp * e2[d] + c * a[d];
        }
        out
    }

    pub fn momentum(&self, i: usize) -> Vec3<T> {
        let (ir, it, ip) = self.split(i);
        scale(&self.direction(it, ip), self.radial[ir].0)
    }

    /// Volume element k² dk dΩ carried by node i.
    pub fn measure(&self, i: usize) -> T {
        let (ir, it, _) = self.split(i);
        let (k, wk) = self.radial[ir];
        let wphi = T::TAU() / T::from_count(self.phi.len());
        k * k * wk * self.w_theta[it] * wphi
    }

    /// Maximum relative error integrating k^d over the radial window for
    /// every d up to the declared degree.
    pub fn self_test(&self) -> f64 {
        let (lo, hi) = self.bounds_f64();
        let mut worst: f64 = 0.0;
        for d in 0..=self.radial_degree {
            let exact = (hi.powi(d as i32 + 1) - lo.powi(d as i32 + 1)) / (d as f64 + 1.0);
            let approx: f64 = self
                .radial
                .iter()
                .map(|&(k, w)| w.to_f64_lossy() * k.to_f64_lossy().powi(d as i32))
                .sum();
            worst = worst.max(((approx - exact) / exact).abs());
        }
        worst
    }

    fn bounds_f64(&self) -> (f64, f64) {
        // Recover the window from the first and last panel: total weight is the width.
        let width: f64 = self.radial.iter().map(|r| r.1.to_f64_lossy()).sum();
        let centroid: f64 = self
            .radial
            .iter()
            .map(|r| r.0.to_f64_lossy() * r.1.to_f64_lossy())
            .sum::<f64>()
            / width;
        (centroid - width / 2.0, centroid + width / 2.0)
    }

    /// Radial integration window [k_lo, k_hi].
    pub fn radial_bounds(&self) -> (T, T) {
        let (a, b) = self.bounds_f64();
        (T::lit(a), T::lit(b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_integrates_polynomials() {
        for n in 1..12 {
            let (x, w) = gauss_legendre(n);
            for d in 0..(2 * n) {
                let approx: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(d as i32)).sum();
                let exact = if d % 2 == 1 { 0.0 } else { 2.0 / (d as f64 + 1.0) };
                assert!((approx - exact).abs() < 1e-13, "n={n} d={d}");
            }
            assert!(x.iter().all(|v| v.abs() < 1.0));
        }
    }

    #[test]
    fn sphere_area_and_self_test() {
        let q = SphericalQuadrature::<f64>::new(0.5, 1.5, 3, 6, 8, 9).unwrap();
        let total: f64 = (0..q.len()).map(|i| q.measure(i)).sum();
        let exact = 4.0 * std::f64::consts::PI * (1.5f64.powi(3) - 0.5f64.powi(3)) / 3.0;
        assert!((total - exact).abs() < 1e-12 * exact);
        assert!(q.self_test() < 1e-12);
        let (a, b) = q.radial_bounds();
        assert!((a - 0.5).abs() < 1e-12 && (b - 1.5).abs() < 1e-12);
    }

    #[test]
    fn oriented_rule_keeps_unit_directions() {
        let q = SphericalQuadrature::<f64>::new(0.5, 1.5, 1, 4, 6, 7).unwrap();
        let r = q.oriented(&[1.0, 2.0, -0.5]).unwrap();
        let mut mean = [0.0; 3];
        for it in 0..r.n_theta() {
            for ip in 0..r.n_phi() {
                let d = r.direction(it, ip);
                assert!((norm(&d) - 1.0).abs() < 1e-14);
                for a in 0..3 {
                    mean[a] += r.theta_weights()[it] * d[a];
                }
            }
        }
        assert!(mean.iter().all(|m| m.abs() < 1e-12));
    }
}
