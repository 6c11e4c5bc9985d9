//! Exact rational scalar helpers.
//!
//! Everything downstream computes over arbitrary-precision rationals; this
//! module collects the combinatorial scalars that appear in period and
//! I-function coefficients:
//!
//!   factorial(n)        = n!
//!   binomial(n, k)      = n! / (k! (n-k)!)  for 0 <= k <= n
//!   neg_binomial(n, k)  = C(n-1+k, k), the k-th coefficient of (1-t)^(-n)
//!   harmonic(a, b)      = sum_{j=a}^{b} 1/j   (empty sum when a > b)
//!
//! plus parsing and printing of rationals in the "p/q" wire format used by
//! reports and golden files.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};

pub type Q = BigRational;
pub type Z = BigInt;

/// Integer as a rational.
pub fn qi(n: i64) -> Q {
    Q::from_integer(Z::from(n))
}

/// Ratio of two integers as a rational. Panics on zero denominator.
pub fn qr(num: i64, den: i64) -> Q {
    assert!(den != 0, "zero denominator");
    Q::new(Z::from(num), Z::from(den))
}

/// n! as a big integer.
pub fn factorial(n: u32) -> Z {
    let mut acc = Z::one();
    for k in 2..=n as u64 {
        acc *= Z::from(k);
    }
    acc
}

/// n! as a rational.
pub fn q_factorial(n: u32) -> Q {
    Q::from_integer(factorial(n))
}

/// Binomial coefficient C(n, k) for 0 <= k <= n.
pub fn binomial(n: u32, k: u32) -> Z {
    assert!(k <= n, "binomial requires k <= n");
    let k = k.min(n - k);
    let mut acc = Z::one();
    for j in 0..k {
        acc = acc * Z::from((n - j) as u64) / Z::from((j + 1) as u64);
    }
    acc
}

/// Coefficient of t^k in the geometric expansion (1 - t)^(-n), that is
/// C(n - 1 + k, k). For n = 0 this is 1 at k = 0 and 0 otherwise.
pub fn neg_binomial(n: u32, k: u32) -> Z {
    if n == 0 {
        return if k == 0 { Z::one() } else { Z::zero() };
    }
    binomial(n - 1 + k, k)
}

/// Partial harmonic sum  sum_{j=a}^{b} 1/j. Empty (zero) when a > b.
/// Requires a >= 1 so every summand is defined.
pub fn harmonic(a: u32, b: u32) -> Q {
    assert!(a >= 1, "harmonic sum starts at j >= 1");
    let mut acc = Q::zero();
    for j in a..=b {
        acc += Q::new(Z::one(), Z::from(j as u64));
    }
    acc
}

/// Render a rational as "p" (integral) or "p/q" (reduced, q > 0).
pub fn q_to_string(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parse the formats produced by `q_to_string`: optional sign, integer
/// numerator, optional "/denominator". Returns None on malformed input.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    let (num_s, den_s) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), Some(b.trim())),
        None => (s, None),
    };
    let num: Z = num_s.parse().ok()?;
    match den_s {
        None => Some(Q::from_integer(num)),
        Some(d) => {
            let den: Z = d.parse().ok()?;
            if den.is_zero() {
                None
            } else {
                Some(Q::new(num, den))
            }
        }
    }
}

/// Integer power with negative exponents allowed (x must be nonzero for
/// negative k).
pub fn q_pow(x: &Q, k: i32) -> Q {
    if k >= 0 {
        num::traits::Pow::pow(x, k as u32)
    } else {
        assert!(!x.is_zero(), "negative power of zero");
        num::traits::Pow::pow(&x.recip(), (-k) as u32)
    }
}

/// True if x is a negative rational.
pub fn q_is_negative(x: &Q) -> bool {
    x.is_negative()
}

// ============================================================
// Tests
// ============================================================

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_small_values() {
        let want = [1u64, 1, 2, 6, 24, 120, 720, 5040];
        for (n, w) in want.iter().enumerate() {
            assert_eq!(factorial(n as u32), Z::from(*w));
        }
    }

    #[test]
    fn binomial_row_five() {
        let want = [1u64, 5, 10, 10, 5, 1];
        for (k, w) in want.iter().enumerate() {
            assert_eq!(binomial(5, k as u32), Z::from(*w));
        }
    }

    #[test]
    fn neg_binomial_matches_geometric_series() {
        // (1-t)^(-3) = 1 + 3t + 6t^2 + 10t^3 + ...
        let want = [1u64, 3, 6, 10, 15];
        for (k, w) in want.iter().enumerate() {
            assert_eq!(neg_binomial(3, k as u32), Z::from(*w));
        }
        assert_eq!(neg_binomial(0, 0), Z::one());
        assert_eq!(neg_binomial(0, 4), Z::zero());
    }

    #[test]
    fn harmonic_partial_sums() {
        assert_eq!(harmonic(1, 5), qr(137, 60));
        assert_eq!(harmonic(2, 4), qr(13, 12));
        assert_eq!(harmonic(3, 2), Q::zero());
    }

    #[test]
    fn rational_wire_format_round_trip() {
        for s in ["0", "5", "-7", "22/7", "-3/4"] {
            let x = parse_q(s).unwrap();
            assert_eq!(q_to_string(&x), s);
        }
        assert_eq!(parse_q("6/4").unwrap(), qr(3, 2));
        assert!(parse_q("1/0").is_none());
        assert!(parse_q("a/b").is_none());
    }

    #[test]
    fn q_pow_negative_exponents() {
        assert_eq!(q_pow(&qr(2, 3), -2), qr(9, 4));
        assert_eq!(q_pow(&qi(5), 0), qi(1));
        assert_eq!(q_pow(&qi(2), 10), qi(1024));
    }
}
