//! Scalar helpers: the smooth step and bump profiles, sinc, and the
//! cancellation-free interval integral of a complex exponential.

use num_complex::Complex64;

/// `e^{-1/x}` for `x > 0`, zero otherwise.
fn psi(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

/// Standard C^∞ step: 0 for `x <= 0`, 1 for `x >= 1`, strictly monotone between.
pub fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let a = psi(x);
    a / (a + psi(1.0 - x))
}

/// The band profile φ: even, equal to 1 on `1 <= |z| <= 2`, supported in
/// `1/2 < |z| < 5/2`.
pub fn band_profile(z: f64) -> f64 {
    let r = z.abs();
    if (1.0..=2.0).contains(&r) {
        return 1.0;
    }
    smooth_step((r - 0.5) / 0.5) * smooth_step((2.5 - r) / 0.5)
}

/// Compactly supported bump `exp(β(1 - 1/(1 - y²)))` on `|y| < 1`, with
/// peak value 1 at `y = 0`. Larger `β` concentrates the profile and makes
/// its Fourier coefficients decay faster at moderate frequencies.
pub fn bump(y: f64, sharpness: f64) -> f64 {
    let y2 = y * y;
    if y2 >= 1.0 {
        0.0
    } else {
        (sharpness * (1.0 - 1.0 / (1.0 - y2))).exp()
    }
}

/// `sin(x)/x` with the removable singularity filled in.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// `∫_a^b e^{-iθt} dt`, written as `e^{-iθ m} (b-a) sinc(θ(b-a)/2)` with
/// `m` the midpoint so that small `θ` loses no digits.
pub fn exp_integral(a: f64, b: f64, theta: f64) -> Complex64 {
    let len = b - a;
    if theta.abs() < 1e-12 {
        return Complex64::new(len, 0.0);
    }
    let mid = 0.5 * (a + b);
    Complex64::from_polar(len * sinc(0.5 * theta * len), -theta * mid)
}

/// `∫_a^b cos(νx) dx`.
pub fn cos_integral(a: f64, b: f64, nu: f64) -> f64 {
    let len = b - a;
    let mid = 0.5 * (a + b);
    len * sinc(0.5 * nu * len) * (nu * mid).cos()
}
