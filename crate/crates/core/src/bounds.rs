//! Guarantee arithmetic for the size-rounding reductions.
//!
//! With sizes normalized to `{1/alpha, 1}`, rounding the small size down to
//! `1/ceil(alpha)` loses a factor `f1 = ceil(alpha)/alpha`, rounding it up to
//! `1/floor(alpha)` a factor `f2 = floor(alpha)/alpha`. Each direction has its
//! own ratio expression and the solver keeps the better of the two.

use std::cmp::Ordering;

use crate::rational::{self, ceil, floor, int, ratio, Rational};

pub fn f1(alpha: Rational) -> Rational {
    int(ceil(&alpha)) / alpha
}

pub fn f2(alpha: Rational) -> Rational {
    int(floor(&alpha)) / alpha
}

/// `(1 + f1 - 1/alpha, 1/f2 + 1 - 1/floor(alpha))`.
pub fn ratio_expressions(alpha: Rational) -> (Rational, Rational) {
    let one = rational::one();
    let e1 = one + f1(alpha) - one / alpha;
    let e2 = one / f2(alpha) + one - one / int(floor(&alpha));
    (e1, e2)
}

/// `(1 + f1/2, 1/f2 + 1/2)` for graph balancing.
pub fn gb_ratio_expressions(alpha: Rational) -> (Rational, Rational) {
    let half = ratio(1, 2);
    (
        rational::one() + f1(alpha) * half,
        rational::one() / f2(alpha) + half,
    )
}

pub fn min_expression(alpha: Rational) -> Rational {
    let (a, b) = ratio_expressions(alpha);
    rational::min(a, b)
}

pub fn gb_min_expression(alpha: Rational) -> Rational {
    let (a, b) = gb_ratio_expressions(alpha);
    rational::min(a, b)
}

/// Small sizes below this switch the report to the configuration-LP note.
pub fn nonconstructive_threshold() -> Rational {
    ratio(1, 5)
}

/// `s >= 13/20` selects the forest and Lenstra branches for graph balancing
/// with `alpha < 2`.
pub fn gb_small_threshold() -> Rational {
    ratio(13, 20)
}

/// `(1 + 1.65) / 1.65`.
pub fn gb_lenstra_case_bound() -> Rational {
    ratio(53, 33)
}

/// 1.652, the overall graph balancing guarantee.
pub fn gb_overall_bound() -> Rational {
    ratio(413, 250)
}

/// Best rational approximation with denominator at most `max_den` to the root
/// of `sign` in `(n, n + 1)`. `sign` must be increasing there, negative at `n`
/// and positive at `n + 1`. Walks the Stern-Brocot tree with runs collapsed
/// by exponential search.
pub fn bracket_root(n: i128, max_den: i128, sign: impl Fn(Rational) -> Ordering) -> Rational {
    let at = |num: i128, den: i128| sign(int(n) + ratio(num, den));
    let (mut lo, mut hi) = ((0i128, 1i128), (1i128, 1i128));
    loop {
        // Largest t with lo + t*hi still below the root.
        let below = |t: i128| {
            let (p, q) = (lo.0 + t * hi.0, lo.1 + t * hi.1);
            q <= max_den && at(p, q) == Ordering::Less
        };
        let t = largest_true(below);
        lo = (lo.0 + t * hi.0, lo.1 + t * hi.1);
        let above = |t: i128| {
            let (p, q) = (hi.0 + t * lo.0, hi.1 + t * lo.1);
            q <= max_den && at(p, q) == Ordering::Greater
        };
        let u = largest_true(above);
        hi = (hi.0 + u * lo.0, hi.1 + u * lo.1);
        if t == 0 && u == 0 {
            let (p, q) = (lo.0 + hi.0, lo.1 + hi.1);
            if q <= max_den && at(p, q) == Ordering::Equal {
                return int(n) + ratio(p, q);
            }
            break;
        }
    }
    let (a, b) = (int(n) + ratio(lo.0, lo.1), int(n) + ratio(hi.0, hi.1));
    // The closer bracket end is on the root's side of the midpoint.
    let mid = (a + b) / int(2);
    if sign(mid) == Ordering::Greater {
        a
    } else {
        b
    }
}

fn largest_true(pred: impl Fn(i128) -> bool) -> i128 {
    if !pred(1) {
        return 0;
    }
    let mut good = 1;
    let mut bad = 2;
    while pred(bad) {
        good = bad;
        bad *= 2;
    }
    while bad - good > 1 {
        let mid = good + (bad - good) / 2;
        if pred(mid) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    good
}

/// Denominator cap for the worst-case roots.
pub const ROOT_DENOMINATOR: i128 = 1_000_000;

/// `alpha^2 - alpha - n^2`, where both expressions agree on `(n, n + 1)`.
pub fn balance_quadratic(n: i128, alpha: Rational) -> Rational {
    alpha * alpha - alpha - int(n * n)
}

/// `2 alpha^2 - n alpha - (n + 1) n`, the graph balancing analogue.
pub fn gb_balance_quadratic(n: i128, alpha: Rational) -> Rational {
    int(2) * alpha * alpha - int(n) * alpha - int((n + 1) * n)
}

/// Rational approximation of `(1 + sqrt(1 + 4 n^2)) / 2`, the worst `alpha`
/// in `(n, n + 1)`.
pub fn worst_case_alpha(n: i128) -> Rational {
    bracket_root(n, ROOT_DENOMINATOR, |a| {
        balance_quadratic(n, a).cmp(&rational::zero())
    })
}

/// Rational approximation of `(n + sqrt(9 n^2 + 8 n)) / 4`.
pub fn gb_worst_case_alpha(n: i128) -> Rational {
    bracket_root(n, ROOT_DENOMINATOR, |a| {
        gb_balance_quadratic(n, a).cmp(&rational::zero())
    })
}

/// Which guarantee family applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    General,
    GraphBalancing,
}

/// What is known about the optimum relative to twice the big size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// A schedule below `2b` was found.
    BelowTwoBig,
    /// A lower bound at or above `2b` was found.
    AtLeastTwoBig,
    Unknown,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::BelowTwoBig => "opt<2b",
            Regime::AtLeastTwoBig => "opt>=2b",
            Regime::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuaranteeReport {
    pub family: Family,
    pub alpha: Rational,
    pub f1: Rational,
    pub f2: Rational,
    pub expr1: Rational,
    pub expr2: Rational,
    /// Ratio guaranteed by the reductions while the optimum is below `2b`.
    pub constructive_bound: Rational,
    /// `5/3 + s` when `s < 1/5`. Reported, never claimed for a schedule.
    pub nonconstructive_note: Option<Rational>,
    pub regime: Regime,
    /// Ratio the returned schedule is guaranteed to meet.
    pub certified: Rational,
}

impl GuaranteeReport {
    /// Expressions for `alpha`, with the regime left unknown.
    pub fn new(family: Family, alpha: Rational) -> Self {
        let one = rational::one();
        let small = one / alpha;
        let nonconstructive_note =
            (small < nonconstructive_threshold()).then(|| ratio(5, 3) + small);
        let (expr1, expr2, constructive) = if alpha == one {
            (one, one, one)
        } else {
            match family {
                Family::General => {
                    let (a, b) = ratio_expressions(alpha);
                    (a, b, rational::min(a, b))
                }
                Family::GraphBalancing => {
                    let (a, b) = gb_ratio_expressions(alpha);
                    if alpha < int(2) {
                        let case = if small < gb_small_threshold() {
                            a
                        } else {
                            gb_lenstra_case_bound()
                        };
                        (a, b, case)
                    } else {
                        (a, b, rational::min(a, b))
                    }
                }
            }
        };
        let mut report = GuaranteeReport {
            family,
            alpha,
            f1: f1(alpha),
            f2: f2(alpha),
            expr1,
            expr2,
            constructive_bound: constructive,
            nonconstructive_note,
            regime: Regime::Unknown,
            certified: one,
        };
        report.set_regime(Regime::Unknown);
        report
    }

    /// Fixes the certified ratio once the regime is known. Above `2b` the
    /// forest rounding alone gives `3/2`.
    pub fn set_regime(&mut self, regime: Regime) {
        self.regime = regime;
        let three_halves = ratio(3, 2);
        let one = rational::one();
        self.certified = if self.alpha == one {
            one
        } else if self.family == Family::GraphBalancing && self.alpha < int(2) {
            // The case analysis for alpha < 2 already covers every optimum.
            self.constructive_bound
        } else {
            match regime {
                Regime::BelowTwoBig => self.constructive_bound,
                Regime::AtLeastTwoBig => three_halves,
                Regime::Unknown => rational::max(self.constructive_bound, three_halves),
            }
        };
    }
}

type Expressions = fn(Rational) -> (Rational, Rational);

/// One row of the `bound` command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundTable {
    pub family: Family,
    pub alpha: Rational,
    pub f1: Rational,
    pub f2: Rational,
    pub expr1: Rational,
    pub expr2: Rational,
    pub min: Rational,
    /// `floor(alpha)`; the worst case sits in `(n, n + 1)`.
    pub interval: i128,
    pub worst_alpha: Rational,
    pub worst_expr1: Rational,
    pub worst_expr2: Rational,
}

impl BoundTable {
    pub fn new(family: Family, alpha: Rational) -> Self {
        let (exprs, root): (Expressions, fn(i128) -> Rational) = match family {
            Family::General => (ratio_expressions, worst_case_alpha),
            Family::GraphBalancing => (gb_ratio_expressions, gb_worst_case_alpha),
        };
        let (expr1, expr2) = exprs(alpha);
        let n = floor(&alpha).max(1);
        let worst_alpha = root(n);
        let (worst_expr1, worst_expr2) = exprs(worst_alpha);
        BoundTable {
            family,
            alpha,
            f1: f1(alpha),
            f2: f2(alpha),
            expr1,
            expr2,
            min: rational::min(expr1, expr2),
            interval: n,
            worst_alpha,
            worst_expr1,
            worst_expr2,
        }
    }
}

/// Largest min-expression over every `p/q` in `(lo, hi]` with `q <= max_den`,
/// with the first `alpha` attaining it.
pub fn scan_max(family: Family, lo: i128, hi: i128, max_den: i128) -> (Rational, Rational) {
    let eval = match family {
        Family::General => min_expression,
        Family::GraphBalancing => gb_min_expression,
    };
    let mut best = (int(lo), rational::zero());
    for q in 1..=max_den {
        for p in (lo * q + 1)..=(hi * q) {
            let a = ratio(p, q);
            if *a.denom() != q {
                continue;
            }
            let v = eval(a);
            if v > best.1 {
                best = (a, v);
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_factors() {
        let a = ratio(5, 2);
        assert_eq!((f1(a), f2(a)), (ratio(6, 5), ratio(4, 5)));
        assert_eq!((f1(int(3)), f2(int(3))), (int(1), int(1)));
        let a = ratio(8, 5);
        assert_eq!((f1(a), f2(a)), (ratio(5, 4), ratio(5, 8)));
    }

    #[test]
    fn expressions_by_hand() {
        assert_eq!(ratio_expressions(ratio(5, 2)), (ratio(9, 5), ratio(7, 4)));
        assert_eq!(
            gb_ratio_expressions(ratio(5, 2)),
            (ratio(8, 5), ratio(7, 4))
        );
        assert_eq!(gb_ratio_expressions(int(3)), (ratio(3, 2), ratio(3, 2)));
        assert_eq!(ratio_expressions(int(2)), (ratio(3, 2), ratio(3, 2)));
    }

    #[test]
    fn roots_land_in_their_interval() {
        for n in 1..=8 {
            let a = worst_case_alpha(n);
            assert!(a > int(n) && a < int(n + 1));
            assert!(*a.denom() <= ROOT_DENOMINATOR);
            let g = gb_worst_case_alpha(n);
            assert!(g > int(n) && g < int(n + 1));
        }
    }

    #[test]
    fn golden_ratio_root() {
        // Best approximations of the golden ratio are Fibonacci quotients;
        // F(31)/F(30) = 1346269/832040 is the last with denominator <= 10^6.
        assert_eq!(worst_case_alpha(1), ratio(1346269, 832040));
        let d = rational::to_f64(&worst_case_alpha(1)) - (1.0 + 5f64.sqrt()) / 2.0;
        assert!(d.abs() < 1e-11);
    }

    #[test]
    fn roots_match_closed_forms() {
        for n in 1..=6i128 {
            let closed = (1.0 + (1.0 + 4.0 * (n * n) as f64).sqrt()) / 2.0;
            assert!((rational::to_f64(&worst_case_alpha(n)) - closed).abs() < 1e-9);
            let nf = n as f64;
            let gb = (nf + (9.0 * nf * nf + 8.0 * nf).sqrt()) / 4.0;
            assert!((rational::to_f64(&gb_worst_case_alpha(n)) - gb).abs() < 1e-9);
        }
    }

    #[test]
    fn rational_root_is_exact() {
        // 4 alpha - 9 has root 9/4 in (2, 3).
        let r = bracket_root(2, 1000, |a| (int(4) * a - int(9)).cmp(&rational::zero()));
        assert_eq!(r, ratio(9, 4));
    }

    #[test]
    fn gb_small_alpha_report() {
        let r = GuaranteeReport::new(Family::GraphBalancing, ratio(10, 7));
        assert_eq!(r.certified, ratio(53, 33));
        let r = GuaranteeReport::new(Family::GraphBalancing, ratio(5, 3));
        assert_eq!(r.certified, ratio(8, 5));
        assert!(r.certified < gb_overall_bound());
    }

    #[test]
    fn regime_selects_certificate() {
        let mut r = GuaranteeReport::new(Family::General, ratio(5, 2));
        assert_eq!(r.constructive_bound, ratio(7, 4));
        assert_eq!(r.certified, ratio(7, 4));
        r.set_regime(Regime::AtLeastTwoBig);
        assert_eq!(r.certified, ratio(3, 2));
        let mut r = GuaranteeReport::new(Family::General, ratio(6, 5));
        assert_eq!(r.constructive_bound, ratio(6, 5));
        assert_eq!(r.certified, ratio(3, 2));
        r.set_regime(Regime::BelowTwoBig);
        assert_eq!(r.certified, ratio(6, 5));
        assert_eq!(
            GuaranteeReport::new(Family::General, int(7)).nonconstructive_note,
            Some(ratio(38, 21))
        );
    }
}
