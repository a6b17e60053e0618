//! Family-level behavior of the unfolding pipeline: strata depend only on
//! the corner count, and widening the fundamental domain (an unramified
//! cyclic cover) leaves the extracted diffusion rate unchanged.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use windtree_core::exact::rat;
use windtree_core::origami::SingularityProfile;
use windtree_core::teichcurve::{lambda_plus_from_cover, orbit, sum_lyapunov};
use windtree_core::windtree::{
    family_index, unfold_to_origami, windtree_symmetries, FamilyIndex, IntegerTable,
};

/// Nested-rectangle cross with m steps per quadrant: half-extents strictly
/// decreasing in x, increasing in y.
fn cross_table(rng: &mut StdRng, m: usize) -> IntegerTable {
    let mut a: Vec<i64> = rand::seq::index::sample(rng, m + 3, m)
        .into_iter()
        .map(|v| v as i64)
        .collect();
    let mut b: Vec<i64> = rand::seq::index::sample(rng, m + 3, m)
        .into_iter()
        .map(|v| v as i64)
        .collect();
    a.sort_unstable_by(|x, y| y.cmp(x));
    b.sort_unstable();
    let span_x = 2 * a[0] + 1;
    let span_y = 2 * b[m - 1] + 1;
    let l1 = span_x + rng.gen_range(2..5);
    let l2 = span_y + rng.gen_range(2..5);
    let cx = a[0] + 1;
    let cy = b[m - 1] + 1;
    let mut blocked = Vec::new();
    for i in 0..m {
        for x in -a[i]..=a[i] {
            for y in -b[i]..=b[i] {
                blocked.push((cx + x, cy + y));
            }
        }
    }
    IntegerTable::new(l1, l2, blocked).expect("generated cross table is valid")
}

#[test]
fn stratum_depends_only_on_corner_count() {
    let mut rng = StdRng::seed_from_u64(0x57a7_0001);
    for m in 1..=3usize {
        let mut quotient_profiles: Vec<SingularityProfile> = Vec::new();
        for _ in 0..6 {
            let table = cross_table(&mut rng, m);
            assert_eq!(family_index(&table).unwrap(), FamilyIndex { m: m as u64 });
            let unf = unfold_to_origami(&table).unwrap();
            let p = unf.origami.singularity_profile();
            assert_eq!(
                p.orders(),
                vec![2i64; 4 * m].as_slice(),
                "unfolded stratum for m = {m}, table {table:?}"
            );
            let syms = windtree_symmetries(&unf).unwrap();
            let q = unf
                .origami
                .quotient_by_translation_involution(&syms.tau_v)
                .unwrap();
            quotient_profiles.push(q.singularity_profile());
        }
        for p in &quotient_profiles {
            assert_eq!(
                p, &quotient_profiles[0],
                "quotient stratum must not depend on cell-level geometry (m = {m})"
            );
            assert_eq!(p.orders(), vec![2i64; 2 * m].as_slice());
        }
    }
}

/// Widening the classical table to 2k x 2 with k obstacles gives a degree-k
/// unramified cover; the extracted diffusion rate stays 2/3.
#[test]
fn cyclic_covers_keep_diffusion_rate() {
    for k in 1..=3i64 {
        let blocked: Vec<(i64, i64)> = (0..k).map(|j| (2 * j + 1, 1)).collect();
        let table = IntegerTable::new(2 * k, 2, blocked).unwrap();
        let unf = unfold_to_origami(&table).unwrap();
        assert_eq!(unf.origami.n() as i64, 12 * k);
        let syms = windtree_symmetries(&unf).unwrap();
        let h_hat = unf
            .origami
            .quotient_by_translation_involution(&syms.tau_v)
            .unwrap();
        assert_eq!(h_hat.n() as i64, 6 * k);
        assert_eq!(
            h_hat.singularity_profile().orders(),
            vec![2i64; 2 * k as usize].as_slice()
        );
        let data = orbit(&h_hat, 1_000_000).unwrap();
        let report = sum_lyapunov(&data, data.profile());
        let mut q_orders = vec![1i64; 2 * k as usize];
        q_orders.extend(vec![-1i64; 2 * k as usize]);
        let q = SingularityProfile::new(q_orders).unwrap();
        let lambda = lambda_plus_from_cover(&report.total, &q).unwrap();
        assert_eq!(lambda, rat(2, 3), "k = {k}: total {}", report.total);
    }
}
