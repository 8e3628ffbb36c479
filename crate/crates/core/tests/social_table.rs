//! Every cell of the substitution table, checked against a hand transcription.

use proptest::prelude::*;
use socmdp::{social_term, SocialGoal};
use SocialGoal::*;

mod common;
use common::{eval, expected, input};

#[test]
fn every_cell_matches_the_table() {
    let v = (0.37, 0.61, 0.23);
    let mut cells = 0;
    for level in [1u8, 2, 3] {
        for own in SocialGoal::ALL {
            for other in SocialGoal::ALL {
                for same in [false, true] {
                    let got = social_term(&input(own, other, level, same, v));
                    let want = eval(expected(own, other, level, same, 0.2), v);
                    match (got, want) {
                        (Some(g), Some(w)) => {
                            assert!((g - w).abs() < 1e-12, "{own}/{other} l={level} same={same}: {g} vs {w}")
                        }
                        (Option::None, Option::None) => {}
                        _ => panic!("{own}/{other} l={level} same={same}: {got:?} vs {want:?}"),
                    }
                    cells += 1;
                }
            }
        }
    }
    assert_eq!(cells, 3 * 36 * 2);
}

#[test]
fn conditional_branches_differ() {
    let v = (0.5, 0.9, 0.0);
    let t = |own, other, same| social_term(&input(own, other, 2, same, v)).unwrap();
    assert_eq!(t(Competition, Coercion, true), 0.5);
    assert_eq!(t(Competition, Coercion, false), -0.5);
    assert_eq!(t(Coercion, Competition, true), 0.5);
    assert!((t(Coercion, Competition, false) - 0.4).abs() < 1e-15);
}

#[test]
fn exchange_cells_are_undefined_without_a_willing_partner() {
    let v = (0.5, 0.9, 0.3);
    assert!(social_term(&input(Exchange, Exchange, 1, false, v)).is_none());
    for other in SocialGoal::ALL.into_iter().filter(|&o| o != Exchange) {
        assert!(social_term(&input(Exchange, other, 2, false, v)).is_none());
    }
    let x = social_term(&input(Exchange, Exchange, 2, false, v)).unwrap();
    assert!((x - (0.2 * 0.3 + 0.5)).abs() < 1e-15);
}

fn social() -> impl Strategy<Value = SocialGoal> {
    (0..6usize).prop_map(|i| SocialGoal::ALL[i])
}

proptest! {
    #[test]
    fn conflict_negates_cooperation(other in social(), level in 1u8..4, same: bool, a in -3.0..3.0f64, b in -3.0..3.0f64, c in -3.0..3.0f64) {
        let coop = social_term(&input(Cooperation, other, level, same, (a, b, c))).unwrap();
        let conf = social_term(&input(Conflict, other, level, same, (a, b, c))).unwrap();
        prop_assert_eq!(conf, -coop);
    }

    #[test]
    fn competition_is_conflict_at_level_one(other in social(), same: bool, a in -3.0..3.0f64, b in -3.0..3.0f64, c in -3.0..3.0f64) {
        let comp = social_term(&input(Competition, other, 1, same, (a, b, c)));
        let conf = social_term(&input(Conflict, other, 1, same, (a, b, c)));
        prop_assert_eq!(comp, conf);
    }
}
