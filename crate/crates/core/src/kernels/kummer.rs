//! Confluent hypergeometric function Φ(a, b, y) = ₁F₁(a; b; y) for the
//! parameter family the sampling kernels need: positive integer `a` and
//! `b ∈ {1/2, 3/2}`.
//!
//! For `y ≥ 0` every series term is positive and the ascending series is
//! summed directly. For `y < 0` the Kummer transformation
//! Φ(a, b, y) = e^y Φ(b − a, b, −y) is applied; the transformed series has
//! a negative first parameter, so its leading terms alternate and cancel.
//! That sum is carried in double-double arithmetic.

use crate::error::{argument, numerical, Result};

pub const MAX_A: u32 = 16;
const MAX_TERMS: usize = 20_000;

/// Φ(a, b, y) for `1 ≤ a ≤ 16`, `b ∈ {1/2, 3/2}`.
pub fn kummer_phi(a: u32, b: f64, y: f64) -> Result<f64> {
    if !(1..=MAX_A).contains(&a) {
        return Err(argument(format!("Kummer parameter a = {a} outside 1..={MAX_A}")));
    }
    if b != 0.5 && b != 1.5 {
        return Err(argument(format!("Kummer parameter b = {b} is not 1/2 or 3/2")));
    }
    if !y.is_finite() {
        return Err(argument(format!("Kummer argument y = {y} is not finite")));
    }
    let value = kummer_unchecked(a, b, y);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(numerical(format!("Φ({a}, {b}, {y}) overflows double precision")))
    }
}

/// Same as [`kummer_phi`] without parameter validation.
pub(crate) fn kummer_unchecked(a: u32, b: f64, y: f64) -> f64 {
    if y == 0.0 {
        1.0
    } else if y > 0.0 {
        ascending_positive(a as f64, b, y)
    } else {
        y.exp() * transformed_series(b - a as f64, b, -y)
    }
}

fn ascending_positive(a: f64, b: f64, y: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..MAX_TERMS {
        let n = n as f64;
        term *= (a + n) * y / ((b + n) * (n + 1.0));
        sum += term;
        if term <= 1e-17 * sum {
            break;
        }
    }
    sum
}

/// Σ_n (c)_n / ((b)_n n!) Y^n for c < 0 (non-integer), Y > 0.
fn transformed_series(c: f64, b: f64, big_y: f64) -> f64 {
    let mut term = DoubleDouble::from(1.0);
    let mut sum = term;
    let mut largest = 1.0_f64;
    let past = (-c).max(big_y) + 1.0;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        // (c + n) and (b + n)(n + 1) are exact in binary for half-integer c, b.
        let numerator = DoubleDouble::product(c + nf, big_y);
        term = term.mul(numerator).div_f64((b + nf) * (nf + 1.0));
        sum = sum.add(term);
        let t = term.hi.abs();
        largest = largest.max(t);
        if nf > past && (t <= 1e-18 * sum.hi.abs() || t <= 1e-33 * largest) {
            break;
        }
    }
    sum.to_f64()
}

/// Unevaluated sum `hi + lo` carrying roughly 106 bits of significand.
#[derive(Debug, Clone, Copy)]
struct DoubleDouble {
    hi: f64,
    lo: f64,
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

impl DoubleDouble {
    fn product(a: f64, b: f64) -> Self {
        let p = a * b;
        Self {
            hi: p,
            lo: a.mul_add(b, -p),
        }
    }

    fn add(self, other: Self) -> Self {
        let (s, e) = two_sum(self.hi, other.hi);
        let (hi, lo) = quick_two_sum(s, e + self.lo + other.lo);
        Self { hi, lo }
    }

    fn mul(self, other: Self) -> Self {
        let p = self.hi * other.hi;
        let e = self.hi.mul_add(other.hi, -p) + (self.hi * other.lo + self.lo * other.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }

    fn div_f64(self, d: f64) -> Self {
        let q1 = self.hi / d;
        let r = self.add(Self::product(q1, d).neg());
        let q2 = r.hi / d;
        let r = r.add(Self::product(q2, d).neg());
        let q3 = r.hi / d;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo }.add(Self::from(q3))
    }

    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_at_origin_is_one() {
        for a in 1..=MAX_A {
            assert_eq!(kummer_phi(a, 0.5, 0.0).unwrap(), 1.0);
            assert_eq!(kummer_phi(a, 1.5, 0.0).unwrap(), 1.0);
        }
    }

    #[test]
    fn closed_forms() {
        // Φ(1, 1/2, y) = 1 + √(πy) e^y erf(√y)
        for &y in &[0.1_f64, 1.0, 4.0, 16.0, 30.0] {
            let r = y.sqrt();
            let expected = 1.0 + (std::f64::consts::PI * y).sqrt() * y.exp() * statrs::function::erf::erf(r);
            let got = kummer_phi(1, 0.5, y).unwrap();
            assert!(
                (got - expected).abs() < 1e-10 * expected.abs(),
                "y={y}: {got} vs {expected}"
            );
        }
        // contiguous relation b Φ(a,b,y) - b Φ(a-1,b,y) = y Φ(a,b+1,y)
        for &y in &[-7.5_f64, -1.0, 2.0, 9.0] {
            let b = 0.5;
            let lhs = b * kummer_phi(3, b, y).unwrap() - b * kummer_phi(2, b, y).unwrap();
            let rhs = y * kummer_phi(3, b + 1.0, y).unwrap();
            assert!(
                (lhs - rhs).abs() < 1e-12 * (lhs.abs() + rhs.abs() + 1.0),
                "y={y}: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn rejects_unsupported_parameters() {
        assert!(kummer_phi(0, 0.5, 1.0).is_err());
        assert!(kummer_phi(17, 0.5, 1.0).is_err());
        assert!(kummer_phi(2, 2.5, 1.0).is_err());
        assert!(kummer_phi(2, 0.5, f64::NAN).is_err());
    }
}
