//! Small fixed-size vector helpers over `[T; 3]`.

use crate::Real;
use num_complex::Complex;

pub type Vec3<T> = [T; 3];
pub type CVec3<T> = [Complex<T>; 3];

#[inline]
pub fn dot<T: Real>(a: &Vec3<T>, b: &Vec3<T>) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn cross<T: Real>(a: &Vec3<T>, b: &Vec3<T>) -> Vec3<T> {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub fn norm_sqr<T: Real>(a: &Vec3<T>) -> T {
    dot(a, a)
}

#[inline]
pub fn norm<T: Real>(a: &Vec3<T>) -> T {
    norm_sqr(a).sqrt()
}

#[inline]
pub fn scale<T: Real>(a: &Vec3<T>, s: T) -> Vec3<T> {
    [a[0] * s, a[1] * s, a[2] * s]
}

#[inline]
pub fn add<T: Real>(a: &Vec3<T>, b: &Vec3<T>) -> Vec3<T> {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub fn sub<T: Real>(a: &Vec3<T>, b: &Vec3<T>) -> Vec3<T> {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// Bilinear (non-conjugating) product Σ aᵢ bᵢ.
#[inline]
pub fn cdot<T: Real>(a: &CVec3<T>, b: &CVec3<T>) -> Complex<T> {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Hermitian product Σ conj(aᵢ) bᵢ.
#[inline]
pub fn hdot<T: Real>(a: &CVec3<T>, b: &CVec3<T>) -> Complex<T> {
    a[0].conj() * b[0] + a[1].conj() * b[1] + a[2].conj() * b[2]
}

#[inline]
pub fn cnorm_sqr<T: Real>(a: &CVec3<T>) -> T {
    a[0].norm_sqr() + a[1].norm_sqr() + a[2].norm_sqr()
}

#[inline]
pub fn complexify<T: Real>(a: &Vec3<T>) -> CVec3<T> {
    [
        Complex::new(a[0], T::zero()),
        Complex::new(a[1], T::zero()),
        Complex::new(a[2], T::zero()),
    ]
}

#[inline]
pub fn conj3<T: Real>(a: &CVec3<T>) -> CVec3<T> {
    [a[0].conj(), a[1].conj(), a[2].conj()]
}

/// Real vector dotted into a complex one.
#[inline]
pub fn rdot<T: Real>(a: &Vec3<T>, b: &CVec3<T>) -> Complex<T> {
    b[0] * a[0] + b[1] * a[1] + b[2] * a[2]
}
