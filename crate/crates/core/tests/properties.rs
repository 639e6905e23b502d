use std::sync::Arc;

use proptest::prelude::*;
use rand::Rng;

use locmst::bounds::{
    beta_low, beta_up, c1_of_a, c2_of_a, geometric_moment, moment_upper_bound, BoundsInput,
};
use locmst::experiments::{gap_stat, GapStat};
use locmst::geometry::{build_tiling, dist, CellIndex, Point, Rect};
use locmst::mst::{
    brute_force_mst, degree_histogram, max_degree, mst_kruskal, mst_prim_dense,
    verify_cut_property, verify_mst_path_criterion, CutVerdict, PathVerdict,
};
use locmst::sampling::{
    derive_seed, draw_points, rng_from_seed, sample_binomial, sample_poisson, uniform_in, Density,
    SimRng,
};
use locmst::weights::{HotspotLayout, WeightSpec};

fn layout() -> Arc<HotspotLayout> {
    Arc::new(HotspotLayout::build(2, 3).unwrap())
}

fn specs() -> Vec<WeightSpec> {
    vec![
        WeightSpec::euclidean(1.0),
        WeightSpec::shifted(0.5, 1.0),
        WeightSpec::hotspot(layout(), 1.0),
    ]
}

/// Uniform points, with a third of them pushed into a planted square so
/// hotspot weights actually see their cheap cells.
fn mixed_points(n: usize, l: &HotspotLayout, rng: &mut SimRng) -> Vec<Point> {
    (0..n)
        .map(|_| {
            if rng.random::<f64>() < 1.0 / 3.0 {
                let lv = &l.levels[rng.random_range(0..l.levels.len())];
                uniform_in(&lv.square, rng)
            } else {
                uniform_in(&Rect::new(0.0, 0.0, 1.0, 1.0), rng)
            }
        })
        .collect()
}

fn distinct(pts: &[Point]) -> bool {
    (0..pts.len()).all(|i| (i + 1..pts.len()).all(|j| pts[i] != pts[j]))
}

fn unit_point() -> impl Strategy<Value = Point> {
    (0.0..=1.0f64, 0.0..=1.0f64).prop_map(|(x, y)| Point::new(x, y))
}

// ---------------------------------------------------------------- geometry

#[test]
fn snake_consecutive_cells_share_an_edge() {
    for s in 2..=50usize {
        let t = build_tiling(s * s, 1.0).unwrap();
        assert_eq!(t.s, s);
        let order = t.snake_order();
        assert_eq!(order.len(), s * s);
        for w in order.windows(2) {
            let (c0, r0) = t.coords(w[0]);
            let (c1, r1) = t.coords(w[1]);
            let dc = c0.abs_diff(c1);
            let dr = r0.abs_diff(r1);
            assert_eq!(dc + dr, 1, "s={s}: {w:?}");
        }
        assert_eq!(t.coords(order[0]), (0, 0));
    }
}

#[test]
fn cell_of_partitions_a_million_points() {
    let t = build_tiling(10_000, 1.3).unwrap();
    let mut rng = rng_from_seed(11);
    let mut counts = vec![0usize; t.num_cells() + 1];
    let unit = Rect::new(0.0, 0.0, 1.0, 1.0);
    for _ in 0..1_000_000 {
        let p = uniform_in(&unit, &mut rng);
        let c = t.cell_of(p).unwrap();
        assert!((1..=t.num_cells()).contains(&c.0));
        assert!(t.cell_rect(c).contains(p));
        counts[c.0] += 1;
    }
    assert_eq!(counts[0], 0);
    assert_eq!(counts.iter().sum::<usize>(), 1_000_000);
}

proptest! {
    #[test]
    fn a_n_bracket(n in 3usize..200_000, a in 0.05f64..4.0) {
        if let Ok(t) = build_tiling(n, a) {
            prop_assert!(t.a_n >= a);
            prop_assert!(t.a_n <= a + 1.0 / (n as f64).ln());
            prop_assert!((t.a_n - (n as f64).sqrt() / t.s as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn cell_rect_round_trip(n in 3usize..5000, p in unit_point()) {
        if let Ok(t) = build_tiling(n, 1.0) {
            let c = t.cell_of(p).unwrap();
            prop_assert!(t.cell_rect(c).contains(p));
            let (col, row) = t.coords(c);
            prop_assert_eq!(t.index_of(col, row), c);
        }
    }

    #[test]
    fn corner_neighbors_touch(n in 9usize..3000, k in 1usize..10_000) {
        if let Ok(t) = build_tiling(n, 1.0) {
            let c = CellIndex(1 + k % t.num_cells());
            let r = t.cell_rect(c);
            for nb in t.corner_neighbors(c) {
                let q = t.cell_rect(nb);
                // Touching: the larger axis gap is zero, up to rounding.
                let gap_x = (q.x0 - r.x1).max(r.x0 - q.x1);
                let gap_y = (q.y0 - r.y1).max(r.y0 - q.y1);
                prop_assert!(gap_x.max(gap_y).abs() < 1e-12);
            }
        }
    }
}

// ---------------------------------------------------------------- sampling

#[test]
fn same_seed_same_points() {
    let f = Density::split_example();
    assert_eq!(sample_binomial(500, &f, 3).unwrap(), sample_binomial(500, &f, 3).unwrap());
    assert_eq!(sample_poisson(500.0, &f, 3).unwrap(), sample_poisson(500.0, &f, 3).unwrap());
    assert_ne!(sample_binomial(500, &f, 3).unwrap(), sample_binomial(500, &f, 4).unwrap());
    assert_ne!(derive_seed(1, 0, 1), derive_seed(1, 1, 0));
}

#[test]
fn binomial_cell_counts_concentrate() {
    let ps = sample_binomial(100_000, &Density::uniform(), 21).unwrap();
    let mut counts = [[0usize; 10]; 10];
    for p in &ps.points {
        counts[((p.x * 10.0) as usize).min(9)][((p.y * 10.0) as usize).min(9)] += 1;
    }
    let sigma = (100_000.0f64 * 0.01 * 0.99).sqrt();
    for row in counts {
        for c in row {
            assert!((c as f64 - 1000.0).abs() <= 5.0 * sigma, "{c}");
        }
    }
}

#[test]
fn poisson_count_concentrates() {
    for seed in 0..20 {
        let ps = sample_poisson(100_000.0, &Density::uniform(), seed).unwrap();
        assert!((ps.len() as f64 - 1e5).abs() <= 5.0 * 1e5f64.sqrt());
    }
}

fn quadrant_counts(points: &[Point]) -> [f64; 4] {
    let mut c = [0.0; 4];
    for p in points {
        c[(p.x >= 0.5) as usize + 2 * (p.y >= 0.5) as usize] += 1.0;
    }
    c
}

#[test]
fn split_density_respects_bounds() {
    // χ² on the four quadrants at p = 1e−6 (3 d.o.f. → 30.66).
    let f = Density::split_example();
    let mut rng = rng_from_seed(5);
    let n = 200_000;
    let pts = draw_points(n, &f, &mut rng).unwrap();
    let obs = quadrant_counts(&pts);
    let expect = [0.125, 7.0 / 24.0, 7.0 / 24.0, 7.0 / 24.0].map(|m| m * n as f64);
    let chi2: f64 = obs.iter().zip(expect).map(|(o, e)| (o - e).powi(2) / e).sum();
    assert!(chi2 < 30.66, "{chi2}");
}

#[test]
fn poisson_thinning_matches_superposition() {
    let f = Density::split_example();
    let (excess, mass) = f.excess_over(f.eps1()).unwrap();
    let n = 2000.0;
    let reps = 400u64;
    let mut direct = [0.0; 4];
    let mut direct_sq = [0.0; 4];
    let mut sup = [0.0; 4];
    let mut sup_sq = [0.0; 4];
    for r in 0..reps {
        let a = quadrant_counts(&sample_poisson(n, &f, derive_seed(9, 0, r)).unwrap().points);
        let base = sample_poisson(n * f.eps1(), &Density::uniform(), derive_seed(9, 1, r)).unwrap();
        let extra = sample_poisson(n * mass, &excess, derive_seed(9, 2, r)).unwrap();
        let mut all = base.points;
        all.extend(extra.points);
        let b = quadrant_counts(&all);
        for q in 0..4 {
            direct[q] += a[q];
            direct_sq[q] += a[q] * a[q];
            sup[q] += b[q];
            sup_sq[q] += b[q] * b[q];
        }
    }
    let m = reps as f64;
    for q in 0..4 {
        let (ma, mb) = (direct[q] / m, sup[q] / m);
        let va = direct_sq[q] / m - ma * ma;
        let vb = sup_sq[q] / m - mb * mb;
        let z = (ma - mb) / ((va + vb) / m).sqrt();
        assert!(z.abs() < 5.0, "quadrant {q}: {ma} vs {mb}");
        // Poisson cell counts: variance equals mean.
        assert!((va / ma - 1.0).abs() < 0.35 && (vb / mb - 1.0).abs() < 0.35);
    }
}

// ---------------------------------------------------------------- weights

/// Rounding scale for the weights at `u, v`: the shifted term subtracts two
/// norms, so its error follows `|u| + |v|` rather than the weight itself.
fn round_off(u: Point, v: Point, d: f64) -> f64 {
    let o = Point::new(0.0, 0.0);
    16.0 * f64::EPSILON * (d + dist(u, o) + dist(v, o))
}

proptest! {
    #[test]
    fn weights_symmetric_and_bracketed(u in unit_point(), v in unit_point()) {
        prop_assume!(u != v);
        let d = dist(u, v);
        for spec in specs() {
            let h = spec.weight(u, v).unwrap();
            prop_assert_eq!(h, spec.weight(v, u).unwrap());
            let slack = round_off(u, v, d);
            prop_assert!(h >= spec.c1 * d - slack);
            prop_assert!(h <= spec.c2 * d + slack);
        }
    }

    #[test]
    fn euclidean_and_shifted_are_homogeneous(u in unit_point(), v in unit_point(), a in 1e-3f64..1e3) {
        prop_assume!(u != v);
        for spec in [WeightSpec::euclidean(1.0), WeightSpec::shifted(0.5, 1.0)] {
            let h = spec.weight(u, v).unwrap();
            let ha = spec.weight(u.scaled(a), v.scaled(a)).unwrap();
            prop_assert!((ha - a * h).abs() <= a * round_off(u, v, dist(u, v)), "{} vs {}", ha, a * h);
        }
    }
}

#[test]
fn shifted_translation_constant() {
    let spec = WeightSpec::shifted(0.5, 1.0);
    assert_eq!(spec.h0, Some(1.5));
    let mut rng = rng_from_seed(17);
    let box_ = Rect::new(-2.0, -2.0, 2.0, 2.0);
    for _ in 0..100_000 {
        let u = uniform_in(&box_, &mut rng);
        let v = uniform_in(&box_, &mut rng);
        let b = uniform_in(&box_, &mut rng);
        let h = spec.weight(u, v).unwrap();
        let hb = spec.weight(u.translated(b), v.translated(b)).unwrap();
        assert!(hb <= 1.5 * h * (1.0 + 1e-15), "{u:?} {v:?} {b:?}");
    }
}

// ---------------------------------------------------------------- mst

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn prim_kruskal_brute_force_agree(seed in any::<u64>(), n in 1usize..=7) {
        let l = layout();
        let mut rng = rng_from_seed(seed);
        let pts = mixed_points(n, &l, &mut rng);
        prop_assume!(distinct(&pts));
        for spec in specs() {
            let p = mst_prim_dense(&pts, &spec).unwrap();
            let k = mst_kruskal(&pts, &spec).unwrap();
            let b = brute_force_mst(&pts, &spec).unwrap();
            prop_assert_eq!(p.edge_pairs(), k.edge_pairs());
            prop_assert_eq!(p.edge_pairs(), b.edge_pairs());
            prop_assert!((p.total_weight - b.total_weight).abs() <= 1e-12 * b.total_weight.max(1.0));
            prop_assert!((p.total_weight - k.total_weight).abs() <= 1e-12 * k.total_weight.max(1.0));
        }
    }

    #[test]
    fn trees_are_minimal(seed in any::<u64>(), n in 2usize..120, alpha in 0.25f64..4.0) {
        let l = layout();
        let mut rng = rng_from_seed(seed);
        let pts = mixed_points(n, &l, &mut rng);
        prop_assume!(distinct(&pts));
        for spec in specs() {
            let spec = spec.with_alpha(alpha);
            let t = mst_prim_dense(&pts, &spec).unwrap();
            prop_assert_eq!(t.edges.len(), n - 1);
            prop_assert_eq!(t.degrees.iter().map(|&d| d as usize).sum::<usize>(), 2 * (n - 1));
            prop_assert_eq!(degree_histogram(&t).values().sum::<usize>(), n);
            prop_assert_eq!(verify_mst_path_criterion(&pts, &spec, &t).unwrap(), PathVerdict::Pass);
            prop_assert_eq!(verify_cut_property(&pts, &spec, &t).unwrap(), CutVerdict::Pass);
            if spec.kind_name() == "euclidean" {
                prop_assert!(max_degree(&t) <= 6);
            }
        }
    }
}

// ---------------------------------------------------------------- experiments

proptest! {
    #[test]
    fn gaps_partition_the_snake(cells in 1usize..400, picks in prop::collection::btree_set(1usize..400, 0..40)) {
        let occ: Vec<usize> = picks.into_iter().filter(|&c| c <= cells).collect();
        let g = GapStat::from_occupied(cells, occ.clone());
        prop_assert_eq!(g.gaps.iter().sum::<usize>(), cells - 1);
        prop_assert_eq!(g.gaps.len(), if occ.is_empty() { 1 } else { occ.len() + 1 });
    }

    #[test]
    fn gap_stat_from_points(seed in any::<u64>(), n in 3usize..400) {
        let ps = sample_binomial(n, &Density::uniform(), seed).unwrap();
        if let Ok(t) = build_tiling(n, 1.0) {
            let g = gap_stat(&ps.points, &t).unwrap();
            prop_assert_eq!(g.gaps.iter().sum::<usize>(), t.num_cells() - 1);
            prop_assert!(g.occupied.len() <= n.min(t.num_cells()));
        }
    }
}

// ---------------------------------------------------------------- bounds

proptest! {
    #[test]
    fn moment_bound_dominates(r in 1u32..=6, theta in 0.05f64..6.0) {
        let p = -(-theta).exp_m1();
        let m = geometric_moment(r as f64, p, 1e-12).unwrap();
        let bound = moment_upper_bound(r, theta);
        prop_assert!(m <= bound * (1.0 + 1e-12), "{} > {}", m, bound);
        if r == 1 {
            prop_assert!((m - bound).abs() <= 1e-12 * bound);
        }
    }
}

#[test]
fn optimizers_find_local_extrema() {
    for alpha in [0.5, 1.0, 1.5, 2.0, 3.0] {
        let b = BoundsInput::uniform(alpha);
        let (lo, a_lo) = beta_low(&b).unwrap();
        let (hi, a_hi) = beta_up(&b).unwrap();
        for d in [-1e-3, 1e-3] {
            assert!(c1_of_a(a_lo + d, &b) <= lo * (1.0 + 1e-12), "alpha {alpha}");
            assert!(c2_of_a(a_hi + d, &b) >= hi * (1.0 - 1e-12), "alpha {alpha}");
        }
        assert!((c1_of_a(a_lo, &b) - lo).abs() <= 1e-12 * lo);
    }
}

#[test]
fn delta_switches_at_one() {
    let b = BoundsInput::new(1.0, 0.5, 7.0 / 6.0, 1.0, 1.0).unwrap();
    assert_eq!(b.delta(), 0.5);
    let b = BoundsInput::new(1.0 + 1e-12, 0.5, 7.0 / 6.0, 1.0, 1.0).unwrap();
    assert_eq!(b.delta(), 7.0 / 6.0);
}

#[test]
fn betas_monotone_in_alpha() {
    let alphas: Vec<f64> = (0..=10).map(|k| 0.5 + 0.25 * k as f64).collect();
    let vals: Vec<(f64, f64)> = alphas
        .iter()
        .map(|&a| {
            let b = BoundsInput::uniform(a);
            (beta_low(&b).unwrap().0, beta_up(&b).unwrap().0)
        })
        .collect();
    for w in vals.windows(2) {
        assert!(w[1].0 < w[0].0, "{vals:?}");
        assert!(w[1].1 > w[0].1, "{vals:?}");
    }
}
