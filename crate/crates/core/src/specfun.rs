//! Special functions needed by the kernels: the gamma function, the modified
//! Bessel functions of the second kind `K₀` and `K₁`, and the closed-form
//! integral of `ln|s|` over a straight element.

use std::f64::consts::PI;

use crate::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_61;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function for positive arguments.
pub fn gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("gamma requires a finite x > 0, got {x}")));
    }
    Ok(gamma_positive(x))
}

pub(crate) fn gamma_positive(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection keeps the Lanczos sum in its accurate range.
        return PI / ((PI * x).sin() * gamma_positive(1.0 - x));
    }
    let z = x - 1.0;
    let mut sum = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * sum
}

/// Modified Bessel function of the second kind, order zero.
pub fn bessel_k0(x: f64) -> Result<f64> {
    check_bessel_arg("bessel_k0", x)?;
    Ok(bessel_k01(x).0)
}

/// Modified Bessel function of the second kind, order one.
pub fn bessel_k1(x: f64) -> Result<f64> {
    check_bessel_arg("bessel_k1", x)?;
    Ok(bessel_k01(x).1)
}

fn check_bessel_arg(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && !x.is_nan() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} requires x > 0, got {x}")))
    }
}

/// `(K₀(x), K₁(x))` for `x > 0`, without argument checks.
///
/// The ascending series coupled to `I₀`/`I₁` is used up to `x = 2`; above
/// that, Steed's continued fraction (Temme's CF2 for order zero) converges
/// quickly and delivers both orders from a single pass.
pub(crate) fn bessel_k01(x: f64) -> (f64, f64) {
    if x <= 2.0 {
        k01_series(x)
    } else {
        k01_continued_fraction(x)
    }
}

fn k01_series(x: f64) -> (f64, f64) {
    let y = 0.25 * x * x;
    // term0 = y^k / (k!)^2, term1 = (x/2) y^k / (k! (k+1)!)
    let mut term0 = 1.0;
    let mut term1 = 0.5 * x;
    let mut harmonic = 0.0;
    let (mut i0, mut i1) = (0.0, 0.0);
    let (mut sum0, mut sum1) = (0.0, 0.0);
    let mut k = 0u32;
    loop {
        if k > 0 {
            harmonic += 1.0 / f64::from(k);
        }
        let psi_k1 = harmonic - EULER_GAMMA;
        let psi_k2 = psi_k1 + 1.0 / f64::from(k + 1);
        i0 += term0;
        i1 += term1;
        sum0 += harmonic * term0;
        sum1 += (psi_k1 + psi_k2) * term1;
        if k > 2 && term0 < 1e-18 * i0 {
            break;
        }
        k += 1;
        let kf = f64::from(k);
        term0 *= y / (kf * kf);
        term1 *= y / (kf * (kf + 1.0));
    }
    let log_half = (0.5 * x).ln();
    let k0 = -(log_half + EULER_GAMMA) * i0 + sum0;
    let k1 = 1.0 / x + log_half * i1 - 0.5 * sum1;
    (k0, k1)
}

fn k01_continued_fraction(x: f64) -> (f64, f64) {
    const A1: f64 = 0.25;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = d;
    let (mut q1, mut q2) = (0.0, 1.0);
    let mut c = A1;
    let mut q = A1;
    let mut a = -A1;
    let mut s = 1.0 + q * delh;
    for i in 1..10_000 {
        let fi = f64::from(i);
        a -= 2.0 * fi;
        c = -a * c / (fi + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    h *= A1;
    let k0 = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}

/// `∫_{−ℓ/2}^{ℓ/2} ln|s| ds = ℓ (ln(ℓ/2) − 1)`.
pub fn log_element_integral(length: f64) -> f64 {
    debug_assert!(length > 0.0);
    length * ((0.5 * length).ln() - 1.0)
}
