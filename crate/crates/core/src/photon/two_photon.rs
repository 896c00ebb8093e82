use super::density::{photon_wavefunction, photon_wavefunction_at};
use super::helicity::Matrix3;
use super::state::{photon_dual_norm, photon_dual_product, PhotonState};
use crate::error::{Error, Result};
use crate::spectral::{Epsilon, Helicity};
use crate::vec3::{CVec3, Vec3};
use crate::Real;
use num_complex::Complex;

fn outer<T: Real>(a: &CVec3<T>, b: &CVec3<T>) -> Matrix3<T> {
    let mut m = [[Complex::new(T::zero(), T::zero()); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = a[i] * b[j];
        }
    }
    m
}

/// Normalization 1/√(2(1 + |o|²)) of the symmetrized product, with o the
/// normalized dual overlap of the two one-photon states.
pub fn symmetrization_factor<T: Real>(c1: &PhotonState<T>, c2: &PhotonState<T>) -> Result<T> {
    let (n1, n2) = (photon_dual_norm(c1), photon_dual_norm(c2));
    if !(n1 > T::zero() && n2 > T::zero()) {
        return Err(Error::ZeroNorm);
    }
    let o = photon_dual_product(c1, c2)?.norm_sqr() / (n1 * n2);
    Ok(T::one() / (T::lit(2.0) * (T::one() + o)).sqrt())
}

/// Two-photon amplitude ψ_{λ1λ2,ij}(x1, x2) = ψ⁽¹⁾_{λ1,i}(x1)·ψ⁽²⁾_{λ2,j}(x2)
/// for the product of two positive-frequency one-photon states, or its
/// normalized symmetric combination.
#[allow(clippy::too_many_arguments)]
pub fn two_photon_amplitude<T: Real>(
    c1: &PhotonState<T>,
    c2: &PhotonState<T>,
    symmetrize: bool,
    x1: &Vec3<T>,
    x2: &Vec3<T>,
    l1: Helicity,
    l2: Helicity,
    t: T,
) -> Result<Matrix3<T>> {
    let eval = |s: &PhotonState<T>, h, x: &Vec3<T>| photon_wavefunction_at(s, Epsilon::Plus, h, t, std::slice::from_ref(x))[0];
    let direct = outer(&eval(c1, l1, x1), &eval(c2, l2, x2));
    if !symmetrize {
        return Ok(direct);
    }
    let swapped = outer(&eval(c2, l1, x1), &eval(c1, l2, x2));
    let n = symmetrization_factor(c1, c2)?;
    let mut out = direct;
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (direct[i][j] + swapped[i][j]) * n;
        }
    }
    Ok(out)
}

/// Two-photon amplitude tabulated from full-grid one-photon wave functions,
/// for evaluation over many grid-point pairs.
pub struct TwoPhotonField<T> {
    psi1: [[Vec<Complex<T>>; 3]; 2],
    psi2: [[Vec<Complex<T>>; 3]; 2],
    factor: Option<T>,
}

impl<T: Real> TwoPhotonField<T> {
    pub fn new(c1: &PhotonState<T>, c2: &PhotonState<T>, symmetrize: bool, t: T) -> Result<Self> {
        let tab = |s: &PhotonState<T>| -> Result<[[Vec<Complex<T>>; 3]; 2]> {
            Ok([
                photon_wavefunction(s, Epsilon::Plus, Helicity::Plus, t)?,
                photon_wavefunction(s, Epsilon::Plus, Helicity::Minus, t)?,
            ])
        };
        let factor = if symmetrize { Some(symmetrization_factor(c1, c2)?) } else { None };
        Ok(Self { psi1: tab(c1)?, psi2: tab(c2)?, factor })
    }

    /// Amplitude at grid indices (x1, x2).
    pub fn at(&self, x1: usize, l1: Helicity, x2: usize, l2: Helicity) -> Matrix3<T> {
        let v = |p: &[[Vec<Complex<T>>; 3]; 2], h: Helicity, x: usize| -> CVec3<T> {
            let c = &p[h.index()];
            [c[0][x], c[1][x], c[2][x]]
        };
        let direct = outer(&v(&self.psi1, l1, x1), &v(&self.psi2, l2, x2));
        match self.factor {
            None => direct,
            Some(n) => {
                let swapped = outer(&v(&self.psi2, l1, x1), &v(&self.psi1, l2, x2));
                let mut out = direct;
                for i in 0..3 {
                    for j in 0..3 {
                        out[i][j] = (direct[i][j] + swapped[i][j]) * n;
                    }
                }
                out
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::GridSpec;

    #[test]
    fn symmetric_under_exchange() {
        let g = GridSpec::new(6, 0.6f64).unwrap();
        let a = PhotonState::from_fn(g, |e, _, k| if e == Epsilon::Plus { Complex::new(k[0], 1.0) } else { Complex::new(0.0, 0.0) });
        let b = PhotonState::from_fn(g, |e, h, k| {
            if e == Epsilon::Plus { Complex::new(h.sign::<f64>(), k[2]) } else { Complex::new(0.0, 0.0) }
        });
        let (x1, x2) = ([0.3, -1.0, 2.0], [1.1, 0.0, -0.4]);
        let s12 = two_photon_amplitude(&a, &b, true, &x1, &x2, Helicity::Plus, Helicity::Minus, 0.2).unwrap();
        let s21 = two_photon_amplitude(&a, &b, true, &x2, &x1, Helicity::Minus, Helicity::Plus, 0.2).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((s12[i][j] - s21[j][i]).norm() < 1e-14);
            }
        }
        let tab = TwoPhotonField::new(&a, &b, false, 0.2).unwrap();
        let (i1, i2) = (10usize, 150usize);
        let direct = two_photon_amplitude(&a, &b, false, &g.x_at(i1), &g.x_at(i2), Helicity::Plus, Helicity::Plus, 0.2).unwrap();
        let fast = tab.at(i1, Helicity::Plus, i2, Helicity::Plus);
        for i in 0..3 {
            for j in 0..3 {
                assert!((direct[i][j] - fast[i][j]).norm() < 1e-12 * (1.0 + direct[i][j].norm()));
            }
        }
    }
}
