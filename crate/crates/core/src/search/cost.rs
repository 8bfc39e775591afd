//! Closed-form work bounds of the greedy heuristics.
//!
//! Costs are returned as rational coefficients of `T_E` (entropy coding of
//! the whole image, `p` symbols) and `T_D` (a full `t`-level DWT), and as
//! per-pixel symbol and lifting-step counts for checking counters.

use num_rational::Ratio;

type Q = Ratio<i64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CostHeuristic {
    Bh,
    Rh,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PredictedCost {
    pub te: Q,
    pub td: Q,
    /// Upper bound on encoded symbols divided by `p`.
    pub symbols_per_pixel: Q,
    /// Upper bound on lifting steps divided by `p`.
    pub lifting_per_pixel: Q,
}

fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

/// `2^e` as a rational, `e` may be negative.
fn pow2(e: i64) -> Q {
    if e >= 0 {
        Q::from_integer(1 << e)
    } else {
        q(1, 1 << -e)
    }
}

/// Lifting steps of a full DWT per pixel on power-of-two grids.
pub fn dwt_lifting_per_pixel(t: usize) -> Q {
    q(8, 3) * (Q::from_integer(1) - pow2(-2 * t as i64))
}

/// Predicted cost of `heuristic` with `n` step-B passes. `t = None` gives
/// the bounds for an unlimited number of levels.
///
/// For RH only the level-independent bound is known; it is returned for
/// finite `t` as well, with `T_D` taken as the unlimited-level DWT.
pub fn predicted_cost(heuristic: CostHeuristic, n: usize, t: Option<usize>) -> PredictedCost {
    assert!(
        t.is_none_or(|t| (1..=12).contains(&t)),
        "levels out of range"
    );
    let n = Q::from_integer(n as i64);
    let one = Q::from_integer(1);
    let two = Q::from_integer(2);
    match (heuristic, t) {
        (CostHeuristic::Bh, Some(t)) => {
            let ti = t as i64;
            let shrink = one - pow2(-2 * ti);
            let symbols = two + q(16, 3) * shrink * n;
            let lifting = dwt_lifting_per_pixel(t)
                + (q(104, 9) - q(1, 3) * pow2(5 - 2 * ti) * ti - q(13, 9) * pow2(3 - 2 * ti)) * n;
            PredictedCost {
                te: symbols,
                td: lifting / dwt_lifting_per_pixel(t),
                symbols_per_pixel: symbols,
                lifting_per_pixel: lifting,
            }
        }
        (CostHeuristic::Bh, None) => {
            let te = two + q(16, 3) * n;
            let td = one + q(13, 3) * n;
            PredictedCost {
                te,
                td,
                symbols_per_pixel: te,
                lifting_per_pixel: td * q(8, 3),
            }
        }
        (CostHeuristic::Rh, _) => {
            let te = two + q(10, 3) * n;
            let td = one + q(29, 12) * n;
            PredictedCost {
                te,
                td,
                symbols_per_pixel: te,
                lifting_per_pixel: td * q(8, 3),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unlimited_level_coefficients() {
        let bh1 = predicted_cost(CostHeuristic::Bh, 1, None);
        assert_eq!((bh1.te, bh1.td), (q(22, 3), q(16, 3)));
        let rh1 = predicted_cost(CostHeuristic::Rh, 1, None);
        assert_eq!((rh1.te, rh1.td), (q(16, 3), q(41, 12)));
        let bh0 = predicted_cost(CostHeuristic::Bh, 0, None);
        assert_eq!((bh0.te, bh0.td), (q(2, 1), q(1, 1)));
        let bh2 = predicted_cost(CostHeuristic::Bh, 2, None);
        assert_eq!((bh2.te, bh2.td), (q(38, 3), q(29, 3)));
    }

    #[test]
    fn finite_levels_approach_the_limit() {
        let limit = predicted_cost(CostHeuristic::Bh, 1, None);
        let mut prev = predicted_cost(CostHeuristic::Bh, 1, Some(1));
        for t in 2..=12 {
            let c = predicted_cost(CostHeuristic::Bh, 1, Some(t));
            assert!(c.symbols_per_pixel > prev.symbols_per_pixel);
            assert!(c.symbols_per_pixel < limit.symbols_per_pixel);
            assert!(c.lifting_per_pixel < limit.lifting_per_pixel);
            prev = c;
        }
        let zero = predicted_cost(CostHeuristic::Bh, 0, Some(3));
        assert_eq!((zero.te, zero.td), (q(2, 1), q(1, 1)));
    }

    #[test]
    fn one_level_values() {
        // step A plus 4p symbols and 6p lifting steps per pass
        let c = predicted_cost(CostHeuristic::Bh, 1, Some(1));
        assert_eq!(c.symbols_per_pixel, q(6, 1));
        assert_eq!(c.lifting_per_pixel, q(8, 1));
        assert_eq!(dwt_lifting_per_pixel(3) * 4096, q(10752, 1));
    }
}
