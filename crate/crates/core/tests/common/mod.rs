#![allow(dead_code)]

use pentachain::{AttachmentMode, ChainBlueprint};
use proptest::prelude::*;

pub fn mode() -> impl Strategy<Value = AttachmentMode> {
    prop_oneof![Just(AttachmentMode::Mode1), Just(AttachmentMode::Mode2)]
}

pub fn blueprint(max_n: usize) -> impl Strategy<Value = ChainBlueprint> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(mode(), n.saturating_sub(2))
            .prop_map(move |choices| ChainBlueprint::new(n, choices).unwrap())
    })
}

/// Every blueprint with exactly `n` pentagons.
pub fn all_blueprints(n: usize) -> Vec<ChainBlueprint> {
    let steps = n.saturating_sub(2);
    (0..1u32 << steps)
        .map(|code| {
            let choices = (0..steps)
                .map(|i| if code >> i & 1 == 0 { AttachmentMode::Mode1 } else { AttachmentMode::Mode2 })
                .collect();
            ChainBlueprint::new(n, choices).unwrap()
        })
        .collect()
}
