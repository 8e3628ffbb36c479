//! Check the planner against brute-force expectimax on the 4x4 fixture.
//!
//! cargo run --release --example oracle -- 1

use socmdp::harness::oracle::compare_on_fixture;
use socmdp::SocialGoal;

fn main() -> socmdp::Result<()> {
    let max_level: u8 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(1);
    for level in 0..=max_level {
        let socials: &[SocialGoal] = if level == 0 { &[SocialGoal::None] } else { &SocialGoal::ALL };
        for &social in socials {
            let t = std::time::Instant::now();
            let c = compare_on_fixture(level, social, 3)?;
            println!(
                "level {level} {social:<12} {} states, max |dQ| {:.1e}, {:.1?}",
                c.states,
                c.max_abs_diff,
                t.elapsed()
            );
        }
    }
    Ok(())
}
