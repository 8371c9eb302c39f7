use proptest::prelude::*;
use unibound_core::complexity::{comparison_report, gaussian_mc, rademacher_exact, rademacher_mc};
use unibound_core::{PointSet, Sequential};

fn point_set(dim: usize, rows: usize) -> impl Strategy<Value = PointSet> {
    prop::collection::vec(prop::collection::vec(-2.0f64..2.0, dim), 1..=rows)
        .prop_map(|rows| PointSet::from_rows(&rows).unwrap())
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn homogeneity(y in point_set(6, 8), alpha in 0.0f64..5.0, seed in any::<u64>()) {
        let scaled = y.map(|v| alpha * v);
        let ex = rademacher_exact(&y).unwrap().value;
        prop_assert!(close(rademacher_exact(&scaled).unwrap().value, alpha * ex, 1e-12));
        let r = rademacher_mc(&y, 400, seed, &Sequential).unwrap().value;
        prop_assert!(close(rademacher_mc(&scaled, 400, seed, &Sequential).unwrap().value, alpha * r, 1e-12));
        let g = gaussian_mc(&y, 400, seed, &Sequential).unwrap().value;
        prop_assert!(close(gaussian_mc(&scaled, 400, seed, &Sequential).unwrap().value, alpha * g, 1e-12));
    }

    #[test]
    fn translation_invariance(y in point_set(5, 6), shift in prop::collection::vec(-3.0f64..3.0, 5), seed in any::<u64>()) {
        let moved = y.translate(&shift).unwrap();
        prop_assert!(close(rademacher_exact(&moved).unwrap().value, rademacher_exact(&y).unwrap().value, 1e-12));
        prop_assert!(close(
            rademacher_mc(&moved, 300, seed, &Sequential).unwrap().value,
            rademacher_mc(&y, 300, seed, &Sequential).unwrap().value,
            1e-12
        ));
        prop_assert!(close(
            gaussian_mc(&moved, 300, seed, &Sequential).unwrap().value,
            gaussian_mc(&y, 300, seed, &Sequential).unwrap().value,
            1e-12
        ));
    }

    #[test]
    fn monotone_under_inclusion(y in point_set(6, 5), extra in point_set(6, 4), seed in any::<u64>()) {
        let mut bigger = y.clone();
        for row in extra.rows() {
            bigger.push(row).unwrap();
        }
        prop_assert!(rademacher_exact(&y).unwrap().value <= rademacher_exact(&bigger).unwrap().value + 1e-12);
        prop_assert!(
            rademacher_mc(&y, 200, seed, &Sequential).unwrap().value
                <= rademacher_mc(&bigger, 200, seed, &Sequential).unwrap().value + 1e-12
        );
        prop_assert!(
            gaussian_mc(&y, 200, seed, &Sequential).unwrap().value
                <= gaussian_mc(&bigger, 200, seed, &Sequential).unwrap().value + 1e-12
        );
    }

    #[test]
    fn averages_are_nonnegative(y in point_set(7, 6), seed in any::<u64>()) {
        prop_assert!(rademacher_exact(&y).unwrap().value >= -1e-12);
        prop_assert!(rademacher_mc(&y, 200, seed, &Sequential).unwrap().value >= 0.0);
        prop_assert!(gaussian_mc(&y, 200, seed, &Sequential).unwrap().value >= 0.0);
    }

    #[test]
    fn comparisons_hold(y in point_set(8, 10), seed in any::<u64>()) {
        let report = comparison_report(&y, 4000, seed, &Sequential).unwrap();
        prop_assert!(!report.violated(), "{:?}", report);
    }
}

#[test]
fn monte_carlo_tracks_exact_across_seeds() {
    let rows: Vec<Vec<f64>> =
        (0..12).map(|i| (0..10).map(|j| ((i * 7 + j * 3) % 11) as f64 / 10.0).collect()).collect();
    let y = PointSet::from_rows(&rows).unwrap();
    let exact = rademacher_exact(&y).unwrap().value;
    let seeds = 400u64;
    let hits = (0..seeds)
        .filter(|&seed| {
            let est = rademacher_mc(&y, 1000, seed, &Sequential).unwrap();
            (est.value - exact).abs() <= 4.0 * est.stderr.unwrap()
        })
        .count();
    assert!(hits as f64 >= 0.99 * seeds as f64, "{hits}/{seeds}");
}
