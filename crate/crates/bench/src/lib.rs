//! Shared fixtures for the benchmarks.

use cocfg::*;

pub fn base_scheme(p: u64) -> Scheme {
    let b = build_paper_group(p).expect("p is a valid prime");
    cayley_scheme(&b.group, &paper_partition(&b))
}

pub fn bundle_and_seeds(p: u64) -> (PaperGroupBundle, PermGroup) {
    let b = build_paper_group(p).expect("p is a valid prime");
    let seeds = right_translation_group(&b.group).expect("translations form a group");
    (b, seeds)
}
