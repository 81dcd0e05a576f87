//! Scalar helpers routed through `libm` so the crate builds without `std`.

use num_complex::Complex64;

pub use core::f64::consts::{E as E_CONST, FRAC_PI_2, PI, TAU};

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}
#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}
#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}
#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}
#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}
#[inline]
pub fn acos(x: f64) -> f64 {
    libm::acos(x.clamp(-1.0, 1.0))
}
#[inline]
pub fn atan2(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}
#[inline]
pub fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}
#[inline]
pub fn powi(x: f64, n: i32) -> f64 {
    libm::pow(x, n as f64)
}
#[inline]
pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}
#[inline]
pub fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

/// Complex exponential.
#[inline]
pub fn cexp(z: Complex64) -> Complex64 {
    let m = exp(z.re);
    Complex64::new(m * cos(z.im), m * sin(z.im))
}

/// Principal-branch complex power `z^a` for real `a`.
pub fn cpow_real(z: Complex64, a: f64) -> Complex64 {
    if z.re == 0.0 && z.im == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let r = sqrt(z.re * z.re + z.im * z.im);
    let arg = atan2(z.im, z.re);
    let m = powf(r, a);
    Complex64::new(m * cos(a * arg), m * sin(a * arg))
}

/// Order-zero spherical Bessel function `sin(x)/x`.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        sin(x) / x
    }
}

#[inline]
pub fn i() -> Complex64 {
    Complex64::new(0.0, 1.0)
}

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn cabs(z: Complex64) -> f64 {
    libm::hypot(z.re, z.im)
}
