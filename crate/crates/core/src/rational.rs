//! Exact rational helpers.
//!
//! Every size, load and bound in the solvers is a [`Rational`]. Floats only
//! show up when rendering reports.

use num_integer::Integer;
use num_traits::{One, Zero};

/// Lowest-terms rational with positive denominator.
pub type Rational = num_rational::Ratio<i128>;

pub fn int(n: i128) -> Rational {
    Rational::from_integer(n)
}

pub fn ratio(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

pub fn floor(r: &Rational) -> i128 {
    r.floor().to_integer()
}

pub fn ceil(r: &Rational) -> i128 {
    r.ceil().to_integer()
}

pub fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Renders `r` with four decimals.
pub fn decimal(r: &Rational) -> String {
    format!("{:.4}", to_f64(r))
}

/// `num/den` form, with the `/1` kept for integers.
pub fn to_fraction_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `num/den` or a bare integer. Decimals are rejected.
pub fn parse(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (
            n.trim().parse::<i128>().ok()?,
            d.trim().parse::<i128>().ok()?,
        ),
        None => (text.parse::<i128>().ok()?, 1),
    };
    if d == 0 {
        return None;
    }
    Some(Rational::new(n, d))
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> i128 {
    values.into_iter().fold(1i128, |acc, r| acc.lcm(r.denom()))
}

pub fn min(a: Rational, b: Rational) -> Rational {
    if a <= b {
        a
    } else {
        b
    }
}

pub fn max(a: Rational, b: Rational) -> Rational {
    if a >= b {
        a
    } else {
        b
    }
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}
