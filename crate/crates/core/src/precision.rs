//! Working-precision control for the trigonometric parts of the analysis.
//!
//! Eigenvalues of the graphs handled here are sums of terms `2 - 2cos(a*pi)`
//! with rational `a`. Deciding whether two such sums coincide, or whether a
//! small determinant of their eigenvector components is exactly zero, needs
//! far more headroom than `f64` offers. All such decisions run through
//! [`Precision`], an MPFR-backed evaluator with a configurable number of
//! significant decimal digits (default 30, the floor for every tolerance used
//! in this crate).

use num_rational::Ratio;
use rug::float::Constant;
use rug::Float;

use crate::error::{GridError, Result};

/// Smallest accepted working precision, in significant decimal digits.
pub const MIN_DIGITS: u32 = 15;
/// Largest accepted working precision. Generous; this is a safety rail, not a
/// target.
pub const MAX_DIGITS: u32 = 100_000;
/// Default working precision in significant decimal digits.
pub const DEFAULT_DIGITS: u32 = 30;

/// Absolute tolerance under which two numeric eigenvalues are merged.
pub const GROUP_TOLERANCE: f64 = 1e-9;
/// Distinct eigenvalues must be separated by at least this multiple of
/// [`GROUP_TOLERANCE`]; spacings in between abort the analysis.
pub const GROUP_GUARD_FACTOR: f64 = 10.0;

/// High-precision evaluation context.
///
/// Cheap to clone; carries only the digit count. Every `Float` it produces
/// uses the same mantissa width, so arithmetic between them never silently
/// mixes precisions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Precision {
    digits: u32,
    bits: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Self::new(DEFAULT_DIGITS).expect("default digit count is in range")
    }
}

impl Precision {
    /// Context with the given number of significant decimal digits.
    pub fn new(digits: u32) -> Result<Self> {
        if !(MIN_DIGITS..=MAX_DIGITS).contains(&digits) {
            return Err(GridError::PrecisionOutOfRange {
                digits,
                min: MIN_DIGITS,
                max: MAX_DIGITS,
            });
        }
        // 10^digits needs digits*log2(10) mantissa bits; 32 guard bits absorb
        // the rounding of pi, the cosine, and short sums.
        let bits = (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 32;
        Ok(Self { digits, bits })
    }

    /// Significant decimal digits carried by this context.
    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Mantissa width in bits.
    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// A fresh zero at this precision.
    pub fn zero(&self) -> Float {
        Float::with_val(self.bits, 0)
    }

    /// Lift an `f64` into this precision.
    pub fn from_f64(&self, v: f64) -> Float {
        Float::with_val(self.bits, v)
    }

    /// `cos(angle * pi)` for a rational angle, correctly rounded.
    pub fn cos_pi(&self, angle: Ratio<i64>) -> Float {
        let pi = Float::with_val(self.bits, Constant::Pi);
        let arg = pi * *angle.numer() / *angle.denom();
        arg.cos()
    }

    /// `2 - 2cos(angle * pi)`: the eigenvalue contribution of one axis.
    pub fn eigenvalue_term(&self, angle: Ratio<i64>) -> Float {
        let c = self.cos_pi(angle);
        2f64 - 2f64 * c
    }

    /// Eigenvalue of the length-`n` path at (1-based) index `k`:
    /// `2 - 2cos((k-1)pi/n)`.
    pub fn path_eigenvalue(&self, n: usize, k: usize) -> Float {
        self.eigenvalue_term(Ratio::new(k as i64 - 1, n as i64))
    }
}

/// Plain-decimal rendering of a high-precision value with the requested
/// number of significant digits (e.g. `3.1980622642478621` rather than
/// MPFR's mantissa-exponent form).
pub fn to_decimal_string(value: &Float, significant: usize) -> String {
    if value.is_zero() {
        return "0".to_string();
    }
    let raw = value.to_string_radix(10, Some(significant));
    // `raw` is either positional ("23.00") or scientific with a single digit
    // before the point ("-1.234567e-2"). Rebuild plain positional notation.
    let (mantissa, exp) = match raw.split_once('e') {
        Some((m, e)) => (m, e.parse::<i32>().unwrap_or(0)),
        None => (raw.as_str(), 0),
    };
    let negative = mantissa.starts_with('-');
    let unsigned = mantissa.trim_start_matches('-');
    // Digits before the decimal point, counting the shift from the exponent.
    let lead = unsigned.find('.').unwrap_or(unsigned.len()) as i32;
    let point = lead + exp;
    let digits: String = unsigned.chars().filter(|c| c.is_ascii_digit()).collect();
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if point <= 0 {
        out.push_str("0.");
        for _ in 0..(-point) {
            out.push('0');
        }
        out.push_str(digits);
    } else if (point as usize) >= digits.len() {
        out.push_str(digits);
        for _ in 0..(point as usize - digits.len()) {
            out.push('0');
        }
    } else {
        out.push_str(&digits[..point as usize]);
        out.push('.');
        out.push_str(&digits[point as usize..]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digit_bounds_enforced() {
        assert!(Precision::new(14).is_err());
        assert!(Precision::new(15).is_ok());
        assert!(Precision::new(30).is_ok());
        assert!(Precision::new(200_000).is_err());
    }

    #[test]
    fn cos_pi_matches_known_values() {
        let prec = Precision::default();
        let half = prec.cos_pi(Ratio::new(1, 2));
        assert!(half.to_f64().abs() < 1e-28);
        let third = prec.cos_pi(Ratio::new(1, 3));
        assert!((third.to_f64() - 0.5).abs() < 1e-28);
        let full = prec.cos_pi(Ratio::new(0, 1));
        assert_eq!(full.to_f64(), 1.0);
    }

    #[test]
    fn eigenvalue_term_range() {
        let prec = Precision::default();
        for (num, den) in [(0i64, 1i64), (1, 7), (3, 5), (1, 2), (9, 10)] {
            let v = prec.eigenvalue_term(Ratio::new(num, den)).to_f64();
            assert!((0.0..=4.0).contains(&v), "term {num}/{den} out of range: {v}");
        }
    }

    #[test]
    fn identical_angles_give_identical_floats() {
        let prec = Precision::default();
        let a = prec.eigenvalue_term(Ratio::new(2, 6));
        let b = prec.eigenvalue_term(Ratio::new(1, 3));
        assert_eq!(a, b, "reduced and unreduced forms of the same angle must agree exactly");
    }

    #[test]
    fn decimal_rendering() {
        let prec = Precision::default();
        let v = prec.from_f64(1.5);
        assert_eq!(to_decimal_string(&v, 17), "1.5");
        let pi = Float::with_val(prec.bits(), Constant::Pi);
        assert_eq!(to_decimal_string(&pi, 6), "3.14159");
        let small = prec.from_f64(0.03125);
        assert_eq!(to_decimal_string(&small, 17), "0.03125");
        let neg = prec.from_f64(-2048.0);
        assert_eq!(to_decimal_string(&neg, 5), "-2048");
        assert_eq!(to_decimal_string(&prec.zero(), 17), "0");
    }
}
