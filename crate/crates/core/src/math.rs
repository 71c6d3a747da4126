//! Float shims so the crate builds without `std`.
//!
//! `core` provides no transcendental methods on `f64`; this module supplies
//! them through [`libm`] when the `std` feature is disabled. Modules that
//! need them import [`FloatExt`] under `cfg(not(feature = "std"))`; with
//! `std` enabled the inherent methods win and the trait is unused.

#![allow(dead_code)]

#[cfg(not(feature = "std"))]
pub(crate) trait FloatExt: Sized {
    fn abs(self) -> Self;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn exp_m1(self) -> Self;
    fn ln(self) -> Self;
    fn ln_1p(self) -> Self;
    fn powf(self, e: Self) -> Self;
    fn powi(self, e: i32) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn tan(self) -> Self;
    fn asin(self) -> Self;
    fn acos(self) -> Self;
    fn atan2(self, other: Self) -> Self;
    fn floor(self) -> Self;
    fn copysign(self, sign: Self) -> Self;
}

#[cfg(not(feature = "std"))]
impl FloatExt for f64 {
    fn abs(self) -> f64 {
        libm::fabs(self)
    }
    fn sqrt(self) -> f64 {
        libm::sqrt(self)
    }
    fn exp(self) -> f64 {
        libm::exp(self)
    }
    fn exp_m1(self) -> f64 {
        libm::expm1(self)
    }
    fn ln(self) -> f64 {
        libm::log(self)
    }
    fn ln_1p(self) -> f64 {
        libm::log1p(self)
    }
    fn powf(self, e: f64) -> f64 {
        libm::pow(self, e)
    }
    fn powi(self, e: i32) -> f64 {
        // Exponentiation by squaring; mirrors the std semantics closely
        // enough for the small exponents used here.
        let mut base = if e < 0 { 1.0 / self } else { self };
        let mut n = e.unsigned_abs();
        let mut acc = 1.0;
        while n > 0 {
            if n & 1 == 1 {
                acc *= base;
            }
            base *= base;
            n >>= 1;
        }
        acc
    }
    fn sin(self) -> f64 {
        libm::sin(self)
    }
    fn cos(self) -> f64 {
        libm::cos(self)
    }
    fn tan(self) -> f64 {
        libm::tan(self)
    }
    fn asin(self) -> f64 {
        libm::asin(self)
    }
    fn acos(self) -> f64 {
        libm::acos(self)
    }
    fn atan2(self, other: f64) -> f64 {
        libm::atan2(self, other)
    }
    fn floor(self) -> f64 {
        libm::floor(self)
    }
    fn copysign(self, sign: f64) -> f64 {
        libm::copysign(self, sign)
    }
}
