//! Thin float shims so the numerical code builds with or without `std`.

use num_complex::Complex64;

macro_rules! unary {
    ($($name:ident),*) => {
        $(
            #[cfg(feature = "std")]
            #[inline(always)]
            pub fn $name(x: f64) -> f64 {
                x.$name()
            }

            #[cfg(not(feature = "std"))]
            #[inline(always)]
            pub fn $name(x: f64) -> f64 {
                libm::$name(x)
            }
        )*
    };
}

unary!(sqrt, exp, sin, cos, tan, floor, ceil, round);

#[cfg(feature = "std")]
#[inline(always)]
pub fn ln(x: f64) -> f64 {
    x.ln()
}

#[cfg(not(feature = "std"))]
#[inline(always)]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[cfg(feature = "std")]
#[inline(always)]
pub fn sin_cos(x: f64) -> (f64, f64) {
    x.sin_cos()
}

#[cfg(not(feature = "std"))]
#[inline(always)]
pub fn sin_cos(x: f64) -> (f64, f64) {
    libm::sincos(x)
}

#[cfg(feature = "std")]
#[inline(always)]
pub fn hypot(x: f64, y: f64) -> f64 {
    x.hypot(y)
}

#[cfg(not(feature = "std"))]
#[inline(always)]
pub fn hypot(x: f64, y: f64) -> f64 {
    libm::hypot(x, y)
}

/// `e^{i theta}`.
#[inline(always)]
pub fn cis(theta: f64) -> Complex64 {
    let (s, c) = sin_cos(theta);
    Complex64::new(c, s)
}

/// `e^{z}` for complex `z`.
#[inline]
pub fn cexp(z: Complex64) -> Complex64 {
    cis(z.im) * exp(z.re)
}

/// Principal square root with the cut on the negative real axis of the argument.
pub fn csqrt(z: Complex64) -> Complex64 {
    let r = hypot(z.re, z.im);
    if r == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let re = sqrt(0.5 * (r + z.re.abs()));
    if z.re >= 0.0 {
        Complex64::new(re, z.im / (2.0 * re))
    } else {
        let im = if z.im < 0.0 { -re } else { re };
        Complex64::new(z.im.abs() / (2.0 * re), im)
    }
}

pub fn powi(x: f64, n: u32) -> f64 {
    let mut acc = 1.0;
    for _ in 0..n {
        acc *= x;
    }
    acc
}

pub fn cpowi(z: Complex64, n: u32) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for _ in 0..n {
        acc *= z;
    }
    acc
}
