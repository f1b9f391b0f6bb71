//! Enumeration of distance sequences and valid specs.

use crate::region::{build_region, InvalidReason, RegionSpec};

/// All compositions of `total` in lexicographic order.
pub fn compositions(total: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for first in 1..=rest {
            prefix.push(first);
            go(rest - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if total > 0 {
        go(total, &mut Vec::new(), &mut out);
    }
    out
}

/// Every `(a, d)` with `1 <= T <= max_total` and `1 <= a <= T`, ordered by
/// `T`, then `d`, then `a`.
pub fn candidate_specs(max_total: u32) -> Vec<RegionSpec> {
    let mut out = Vec::new();
    for t in 1..=max_total {
        for d in compositions(t) {
            for a in 1..=t {
                out.push(RegionSpec::new(a, d.clone()));
            }
        }
    }
    out
}

/// Outcome of sweeping a spec space.
#[derive(Clone, Debug, Default)]
pub struct Sweep {
    pub valid: Vec<RegionSpec>,
    pub rejected: Vec<(RegionSpec, InvalidReason)>,
}

pub fn sweep(max_total: u32) -> Sweep {
    let mut out = Sweep::default();
    for spec in candidate_specs(max_total) {
        match build_region(&spec) {
            Ok(_) => out.valid.push(spec),
            Err(e) => out.rejected.push((spec, e.reason)),
        }
    }
    out
}

/// Valid specs with `T <= max_total`, in [`candidate_specs`] order.
pub fn valid_specs(max_total: u32) -> Vec<RegionSpec> {
    sweep(max_total).valid
}
