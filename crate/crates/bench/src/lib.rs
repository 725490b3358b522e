//! Shared inputs for the nelab benchmarks.

use nelab_core::{random_rankone, Field, RankOne, SpaceDesc};

/// Spaces exercising each norm engine path.
pub const SPACES: [&str; 6] =
    ["linf(4)", "l1(4)", "l2(8)", "sum2(l1(2),linf(2))", "sum2(l2(3),l1(3))", "sum2(re(l2(2)),linf(3))"];

/// `count` seeded operators of norm 1.5 on the space given by `dsl`.
pub fn operators(dsl: &str, field: Field, count: u64) -> (SpaceDesc, Vec<RankOne>) {
    let space = SpaceDesc::parse(dsl, field).expect("benchmark spaces parse");
    let ops = (0..count).map(|k| random_rankone(&space, k, 1.5).expect("sampling succeeds")).collect();
    (space, ops)
}
