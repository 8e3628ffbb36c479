//! Print the social term for every pair of social goals.
//!
//! Rewards are fed as symbols: R~ is the partner's estimated reward one
//! level down, r is the actor's physical reward, r~ the partner's.

use socmdp::{social_term, PhysicalGoal, SocialGoal, SocialTermInput};

fn describe(own: SocialGoal, other: SocialGoal, level: u8, same_goal: bool) -> String {
    let probe = |rt: f64, r: f64, ro: f64| {
        social_term(&SocialTermInput {
            own_social: own,
            own_physical: PhysicalGoal::new(0, 0),
            est_other_physical: if same_goal { PhysicalGoal::new(0, 0) } else { PhysicalGoal::new(1, 1) },
            est_other_social: other,
            level,
            est_other_reward: rt,
            r_own: r,
            r_est_other: ro,
            n_exchange: 0.2,
        })
    };
    let Some(base) = probe(0.0, 0.0, 0.0) else { return "N/A".into() };
    let terms = [(probe(1.0, 0.0, 0.0), "R~"), (probe(0.0, 1.0, 0.0), "r"), (probe(0.0, 0.0, 1.0), "r~")];
    let mut out = String::new();
    for (v, name) in terms {
        let c = v.expect("defined") - base;
        if c != 0.0 {
            let sign = if c < 0.0 {
                "-"
            } else if out.is_empty() {
                ""
            } else {
                "+"
            };
            let mag = if c.abs() == 1.0 { String::new() } else { format!("{}*", c.abs()) };
            out.push_str(&format!("{sign}{mag}{name}"));
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn main() {
    for level in [1u8, 2] {
        println!("level {level}{}", if level == 1 { "" } else { " (same goal / different goal)" });
        print!("{:<12}", "");
        for other in SocialGoal::ALL {
            print!("{:<16}", other.name());
        }
        println!();
        for own in SocialGoal::ALL {
            print!("{:<12}", own.name());
            for other in SocialGoal::ALL {
                let diff = describe(own, other, level, false);
                let same = describe(own, other, level, true);
                let cell = if same == diff { diff } else { format!("{same} / {diff}") };
                print!("{cell:<16}");
            }
            println!();
        }
        println!();
    }
}
