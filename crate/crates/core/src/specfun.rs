//! Scalar error-function kernels.
//!
//! Every closed-form term of the solution is a product `exp(p) * erfc(q)`
//! whose factors over- and underflow long before the product does. The
//! kernels here evaluate those products in scaled form so that only the
//! true result can overflow.

use core::f64::consts::FRAC_2_SQRT_PI;

use num_complex::Complex64;
use thiserror::Error;

const FRAC_1_SQRT_PI: f64 = 0.5 * FRAC_2_SQRT_PI;

/// Natural log of `f64::MAX`.
const LN_MAX: f64 = 709.782_712_893_384;

/// Past this point `erfc` is computed by the Laplace continued fraction.
const ERFCX_CF_THRESHOLD: f64 = 12.0;

/// Number of continued-fraction levels used for `erfcx(x)`, `x >= 12`.
const ERFCX_CF_TERMS: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum SpecfunError {
    #[error("domain error: non-finite argument {0}")]
    Domain(f64),
    #[error("domain error: faddeeva kernel requires Im z >= 0, got {0}")]
    LowerHalfPlane(f64),
    #[error("overflow: exp({p}) * erfc({q}) exceeds the double range")]
    Overflow { p: f64, q: f64 },
}

/// Complementary error function.
pub fn erfc(x: f64) -> Result<f64, SpecfunError> {
    if !x.is_finite() {
        return Err(SpecfunError::Domain(x));
    }
    Ok(libm::erfc(x))
}

/// Scaled complementary error function `exp(x^2) * erfc(x)`.
///
/// Overflows only for `x < -26.6` where the true value exceeds the double
/// range.
pub fn erfcx(x: f64) -> Result<f64, SpecfunError> {
    if !x.is_finite() {
        return Err(SpecfunError::Domain(x));
    }
    if x >= 0.0 {
        return Ok(erfcx_nonneg(x));
    }
    // erfcx(-x) = 2 exp(x^2) - erfcx(x)
    let v = 2.0 * exp_square(x) - erfcx_nonneg(-x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(SpecfunError::Overflow { p: x * x, q: x })
    }
}

/// `exp(p) * erfc(q)` without intermediate overflow or underflow.
///
/// For `q > 0` this is `exp(p - q^2) * erfcx(q)`, with `q^2` split into an
/// exact head and tail so that the exponent keeps full precision even when
/// `p` and `q^2` nearly cancel.
pub fn exp_erfc(p: f64, q: f64) -> Result<f64, SpecfunError> {
    if !p.is_finite() {
        return Err(SpecfunError::Domain(p));
    }
    if !q.is_finite() {
        return Err(SpecfunError::Domain(q));
    }
    let v = if q > 0.0 {
        let (hi, lo) = two_square(q);
        let (s, err) = two_diff(p, hi);
        scaled_exp(s, erfcx_nonneg(q) * (1.0 + (err - lo)))
    } else {
        scaled_exp(p, libm::erfc(q))
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(SpecfunError::Overflow { p, q })
    }
}

/// Faddeeva function `w(z) = exp(-z^2) erfc(-iz)` on the closed upper half
/// plane.
///
/// Weideman's rational approximation with 40 terms. The error is about
/// `2e-14 * |w(z)|`; it is absolute with respect to `|w|`, so `Re w` loses
/// relative accuracy where it is exponentially smaller than `Im w` (large
/// `|Re z|` on the real axis).
pub fn faddeeva(z: Complex64) -> Result<Complex64, SpecfunError> {
    if !z.re.is_finite() {
        return Err(SpecfunError::Domain(z.re));
    }
    if !z.im.is_finite() {
        return Err(SpecfunError::Domain(z.im));
    }
    if z.im < 0.0 {
        return Err(SpecfunError::LowerHalfPlane(z.im));
    }
    let iz = Complex64::new(-z.im, z.re);
    let den = Complex64::new(WEIDEMAN_L, 0.0) - iz;
    let ratio = (Complex64::new(WEIDEMAN_L, 0.0) + iz) / den;
    let poly = WEIDEMAN_COEFFS
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * ratio + c);
    Ok(poly * 2.0 / (den * den) + Complex64::new(FRAC_1_SQRT_PI, 0.0) / den)
}

/// `exp(x^2)` with the rounding error of `x*x` folded back in.
fn exp_square(x: f64) -> f64 {
    let (hi, lo) = two_square(x);
    libm::exp(hi) * (1.0 + lo)
}

/// `x*x` as an unevaluated sum `hi + lo`.
fn two_square(x: f64) -> (f64, f64) {
    let hi = x * x;
    (hi, libm::fma(x, x, -hi))
}

/// `a - b` as an unevaluated sum `s + err`.
fn two_diff(a: f64, b: f64) -> (f64, f64) {
    let s = a - b;
    let bv = s - a;
    let av = s - bv;
    (s, (a - av) - (b + bv))
}

/// `exp(s) * m` for `m > 0`, avoiding a spurious overflow of `exp(s)`.
fn scaled_exp(s: f64, m: f64) -> f64 {
    if s > LN_MAX - 1.0 && m > 0.0 {
        libm::exp(s + libm::log(m))
    } else {
        libm::exp(s) * m
    }
}

fn erfcx_nonneg(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x < ERFCX_CF_THRESHOLD {
        exp_square(x) * libm::erfc(x)
    } else {
        // erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
        let mut f = x;
        for k in (1..=ERFCX_CF_TERMS).rev() {
            f = x + (0.5 * k as f64) / f;
        }
        FRAC_1_SQRT_PI / f
    }
}

/// Scale parameter `sqrt(N / sqrt(2))` of the rational approximation, N = 40.
const WEIDEMAN_L: f64 = 5.318_295_896_944_988_6;

/// Polynomial coefficients, constant term first.
#[allow(clippy::excessive_precision)]
const WEIDEMAN_COEFFS: [f64; 40] = [
    2.8996245093897052475,
    2.6160541527618603689,
    2.2015137948783119299,
    1.725383084817977807,
    1.2563815675765132352,
    0.84721745765938182153,
    0.5266528988277086387,
    0.2998943799615006298,
    0.15504263802479494272,
    0.071823617790743368281,
    0.02920291647124186709,
    0.010048186242783424125,
    0.0027054056330737913119,
    0.00043980701598696678275,
    -0.000039393631454895687296,
    -0.000055913092642483182232,
    -0.000018007447144750957155,
    -1.0660138984947143888e-6,
    1.4835661132200779868e-6,
    5.9121369518994938457e-7,
    1.4198642399935674566e-8,
    -6.3517734850442910835e-8,
    -1.8315616783040463185e-8,
    3.2497465180436973908e-9,
    3.0177805400090708496e-9,
    2.1086006347066517903e-10,
    -3.5632339865976532683e-10,
    -9.0551244509282926874e-11,
    3.4727267093045500073e-11,
    1.7714495214011191861e-11,
    -2.727602315820045184e-12,
    -2.9076883421828669205e-12,
    1.2031458219387987553e-13,
    4.5329666782606727739e-13,
    1.3725620586715500429e-14,
    -7.0740862602868555223e-14,
    -5.4093102828821422337e-15,
    1.135768719899924165e-14,
    1.1280735623644020605e-15,
    -1.8996949473949269957e-15,
];
