//! Slot-grid arithmetic for synchronous (LAA/NR-U) nodes.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::model::{NodeConfig, SyncMode};
use crate::time::Ns;

/// The instants `phase + m * delta` (m = 0, 1, ...) at which a synchronous
/// node may start its data transmission.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SlotGrid {
    pub delta: Ns,
    pub phase: Ns,
}

impl SlotGrid {
    pub fn new(delta: Ns, phase: Ns) -> Self {
        assert!(delta > Ns::ZERO, "slot grid needs a positive period");
        assert!(phase < delta, "grid phase must lie in [0, delta)");
        SlotGrid { delta, phase }
    }

    pub fn of(node: &NodeConfig) -> Option<SlotGrid> {
        node.kind
            .is_synchronous()
            .then(|| SlotGrid::new(node.delta, node.phase))
    }

    /// First grid point at or after `t`.
    pub fn next_point(&self, t: Ns) -> Ns {
        t + sync_time(*self, t)
    }

    pub fn is_on_grid(&self, t: Ns) -> bool {
        t >= self.phase && (t.0 - self.phase.0).is_multiple_of(self.delta.0)
    }
}

/// Time from `zeta` to the next grid point (zero when `zeta` is on the grid).
///
/// With a zero phase this is `ceil(zeta / delta) * delta - zeta`.
pub fn sync_time(grid: SlotGrid, zeta: Ns) -> Ns {
    let (z, phase, delta) = (zeta.0, grid.phase.0, grid.delta.0);
    if z <= phase {
        return Ns(phase - z);
    }
    match (z - phase) % delta {
        0 => Ns::ZERO,
        r => Ns(delta - r),
    }
}

/// Draws the grid phase of every node.
///
/// Random-access nodes always get zero and consume no randomness; in
/// desynchronized mode each synchronous node, in id order, gets a phase
/// uniform over the integer nanoseconds of `[0, delta)`.
pub fn draw_offsets<R: Rng + ?Sized>(nodes: &[NodeConfig], mode: SyncMode, rng: &mut R) -> Vec<Ns> {
    nodes
        .iter()
        .map(|node| {
            if !node.kind.is_synchronous() {
                return Ns::ZERO;
            }
            match mode {
                SyncMode::Synchronized => Ns::ZERO,
                SyncMode::Desynchronized => Ns(rng.gen_range(0..node.delta.0)),
                SyncMode::Explicit => node.phase,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{PriorityClassParams, TechnologyKind};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn grid_us(delta: u64, phase: u64) -> SlotGrid {
        SlotGrid::new(Ns::from_us(delta), Ns::from_us(phase))
    }

    /// Scans grid points one by one.
    fn brute_force(grid: SlotGrid, zeta: Ns) -> Ns {
        let mut point = grid.phase;
        while point < zeta {
            point += grid.delta;
        }
        point - zeta
    }

    #[test]
    fn worked_values() {
        assert_eq!(sync_time(grid_us(1000, 0), Ns::from_us(2500)), Ns::from_us(500));
        assert_eq!(sync_time(grid_us(1000, 0), Ns::from_us(3000)), Ns::ZERO);
        assert_eq!(sync_time(grid_us(1000, 300), Ns::from_us(2500)), Ns::from_us(800));
        assert_eq!(sync_time(grid_us(9, 0), Ns::from_us(100)), Ns::from_us(8));
        assert_eq!(sync_time(grid_us(1000, 300), Ns::from_us(100)), Ns::from_us(200));
        assert_eq!(sync_time(grid_us(1000, 300), Ns::ZERO), Ns::from_us(300));
    }

    #[test]
    fn next_point_and_membership() {
        let g = grid_us(63, 10);
        assert_eq!(g.next_point(Ns::from_us(100)), Ns::from_us(136));
        assert!(g.is_on_grid(Ns::from_us(136)));
        assert!(!g.is_on_grid(Ns::from_us(5)));
    }

    fn node(kind: TechnologyKind, delta_us: u64) -> NodeConfig {
        NodeConfig {
            id: 0,
            kind,
            class: PriorityClassParams {
                p: 3,
                cw_min: 15,
                cw_max: 63,
                o_max: Ns::from_ms(8),
            },
            delta: Ns::from_us(delta_us),
            phase: Ns::ZERO,
            data_duration: Ns::from_ms(6),
            ack_duration: Ns::ZERO,
        }
    }

    #[test]
    fn synchronized_offsets_are_zero() {
        let nodes = vec![node(TechnologyKind::SyncGap, 1000), node(TechnologyKind::SyncRs, 9)];
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        assert_eq!(
            draw_offsets(&nodes, SyncMode::Synchronized, &mut rng),
            vec![Ns::ZERO, Ns::ZERO]
        );
    }

    #[test]
    fn random_access_never_gets_an_offset() {
        let nodes = vec![node(TechnologyKind::RandomAccess, 0); 4];
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        assert!(draw_offsets(&nodes, SyncMode::Desynchronized, &mut rng)
            .iter()
            .all(|&p| p == Ns::ZERO));
    }

    #[test]
    fn desynchronized_offsets_are_uniform() {
        // Chi-square goodness of fit over 10 equal bins of [0, 1000 us).
        let nodes = vec![node(TechnologyKind::SyncGap, 1000)];
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let draws = 10_000;
        let mut bins = [0u32; 10];
        for _ in 0..draws {
            let phase = draw_offsets(&nodes, SyncMode::Desynchronized, &mut rng)[0];
            assert!(phase < Ns::from_us(1000));
            bins[(phase.0 / 100_000) as usize] += 1;
        }
        let expected = draws as f64 / 10.0;
        let chi2: f64 = bins
            .iter()
            .map(|&o| (o as f64 - expected).powi(2) / expected)
            .sum();
        // 99.9th percentile of chi-square with 9 degrees of freedom.
        assert!(chi2 < 27.88, "chi2 = {chi2}, bins = {bins:?}");
    }

    proptest! {
        #[test]
        fn matches_brute_force(delta_idx in 0usize..8, phase_frac in 0.0f64..1.0, zeta in 0u64..20_000_000) {
            let delta = crate::model::SYNC_SLOT_DURATIONS[delta_idx];
            let phase = Ns(((delta.0 as f64) * phase_frac) as u64).min(Ns(delta.0 - 1));
            let grid = SlotGrid::new(delta, phase);
            let beta = sync_time(grid, Ns(zeta));
            prop_assert_eq!(beta, brute_force(grid, Ns(zeta)));
            prop_assert!(beta < delta);
            prop_assert!(grid.is_on_grid(Ns(zeta) + beta));
            prop_assert_eq!(beta == Ns::ZERO, grid.is_on_grid(Ns(zeta)));
        }

        #[test]
        fn periodic_in_delta(delta_idx in 0usize..8, phase in 0u64..1_000_000, zeta in 0u64..50_000_000) {
            let delta = crate::model::SYNC_SLOT_DURATIONS[delta_idx];
            let grid = SlotGrid::new(delta, Ns(phase % delta.0));
            prop_assert_eq!(sync_time(grid, Ns(zeta) + delta), sync_time(grid, Ns(zeta)));
        }

        #[test]
        fn decreasing_within_a_period(delta_idx in 0usize..8, m in 0u64..1000, a in 0u64..1_000_000, b in 0u64..1_000_000) {
            let delta = crate::model::SYNC_SLOT_DURATIONS[delta_idx];
            let grid = SlotGrid::new(delta, Ns::ZERO);
            let (lo, hi) = (a.min(b) % delta.0, a.max(b) % delta.0);
            prop_assume!(lo > 0 && lo < hi);
            let base = delta * m;
            prop_assert!(sync_time(grid, base + Ns(hi)) < sync_time(grid, base + Ns(lo)));
            prop_assert_eq!(sync_time(grid, base), Ns::ZERO);
        }
    }
}
