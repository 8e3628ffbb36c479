//! Shared by the integration tests.

use socmdp::{PhysicalGoal, SocialGoal, SocialTermInput};
use SocialGoal::*;

/// Coefficients on (R~, r(g_i), r(g~_j)), or `None` for an impossible cell.
pub type Coef = Option<(f64, f64, f64)>;

pub fn expected(own: SocialGoal, other: SocialGoal, level: u8, same_goal: bool, n: f64) -> Coef {
    if level == 1 {
        return match own {
            None => Some((0.0, 0.0, 0.0)),
            Cooperation => Some((0.0, 0.0, 1.0)),
            Conflict | Competition => Some((0.0, 0.0, -1.0)),
            Coercion => Some((0.0, 1.0, 0.0)),
            Exchange => Option::None,
        };
    }
    let plus = Some((1.0, 0.0, 0.0));
    let minus = Some((-1.0, 0.0, 0.0));
    match (own, other) {
        (None, _) => Some((0.0, 0.0, 0.0)),
        (Cooperation, _) => plus,
        (Conflict, _) => minus,
        (Competition, Cooperation | Exchange | None) => plus,
        (Competition, Conflict | Competition) => minus,
        (Competition, Coercion) => {
            if same_goal {
                plus
            } else {
                minus
            }
        }
        (Coercion, Cooperation | Exchange | None) => Some((1.0, 1.0, 0.0)),
        (Coercion, Conflict | Coercion) => Some((-1.0, 1.0, 0.0)),
        (Coercion, Competition) => {
            if same_goal {
                plus
            } else {
                Some((-1.0, 1.0, 0.0))
            }
        }
        (Exchange, Exchange) => Some((1.0, 0.0, n)),
        (Exchange, _) => Option::None,
    }
}

pub fn eval(c: Coef, v: (f64, f64, f64)) -> Option<f64> {
    c.map(|(a, b, d)| a * v.0 + b * v.1 + d * v.2)
}

/// Table input with distinct values for the three rewards.
pub fn input(
    own: SocialGoal,
    other: SocialGoal,
    level: u8,
    same_goal: bool,
    v: (f64, f64, f64),
) -> SocialTermInput<f64> {
    let mine = PhysicalGoal::new(0, 0);
    SocialTermInput {
        own_social: own,
        own_physical: mine,
        est_other_physical: if same_goal { mine } else { PhysicalGoal::new(1, 1) },
        est_other_social: other,
        level,
        est_other_reward: v.0,
        r_own: v.1,
        r_est_other: v.2,
        n_exchange: 0.2,
    }
}
