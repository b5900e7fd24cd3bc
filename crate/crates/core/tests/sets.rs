use fractal_calculus::refinement::MassRegime;
use fractal_calculus::sets::{
    build_cantor_cover, build_staircase, coarse_mass, flag, full_interval_cover, gamma_dimension, mass_function,
    CoverFamily, SetGenerator,
};
use fractal_calculus::{AlphaOrder, Interval};
use proptest::prelude::*;

// Γ(1 + ln2/ln3), 30-digit reference.
const GAMMA_CANTOR: f64 = 0.897_370_940_672_666_4;

fn unit() -> Interval {
    Interval::new(0.0, 1.0).unwrap()
}

fn cantor_dim() -> f64 {
    2f64.ln() / 3f64.ln()
}

/// Middle-third cover by brute force: keep the `3^n` cells whose base-3
/// digits avoid 1.
fn ternary_oracle(depth: u32) -> Vec<(f64, f64)> {
    let n = 3u64.pow(depth);
    (0..n)
        .filter(|&i| {
            let mut k = i;
            (0..depth).all(|_| {
                let d = k % 3;
                k /= 3;
                d != 1
            })
        })
        .map(|i| (i as f64 / n as f64, (i + 1) as f64 / n as f64))
        .collect()
}

#[test]
fn depth_two_cover_matches_ternary_oracle() {
    let got = build_cantor_cover(1.0 / 3.0, 2, unit()).unwrap().intervals().unwrap();
    let want = [
        (0.0, 1.0 / 9.0),
        (2.0 / 9.0, 1.0 / 3.0),
        (2.0 / 3.0, 7.0 / 9.0),
        (8.0 / 9.0, 1.0),
    ];
    assert_eq!(ternary_oracle(2).len(), 4);
    for ((g, o), w) in got.iter().zip(ternary_oracle(2)).zip(want) {
        assert!((g.lo - o.0).abs() < 1e-15 && (g.hi - o.1).abs() < 1e-15);
        assert!((g.lo - w.0).abs() < 1e-15 && (g.hi - w.1).abs() < 1e-15);
    }
}

#[test]
fn deeper_covers_match_ternary_oracle() {
    for depth in 3..=7 {
        let got = build_cantor_cover(1.0 / 3.0, depth, unit())
            .unwrap()
            .intervals()
            .unwrap();
        let want = ternary_oracle(depth);
        assert_eq!(got.len(), 1 << depth);
        for (g, w) in got.iter().zip(want) {
            assert!((g.lo - w.0).abs() < 1e-13 && (g.hi - w.1).abs() < 1e-13);
        }
    }
}

#[test]
fn mass_at_dimension_is_gamma_weight() {
    let alpha = AlphaOrder::for_set(cantor_dim()).unwrap();
    for n in [1, 5, 10, 20] {
        let cover = build_cantor_cover(1.0 / 3.0, n, unit()).unwrap();
        let m = coarse_mass(&cover, alpha, unit(), 3f64.powi(-(n as i32))).unwrap();
        assert!((m - GAMMA_CANTOR).abs() < 1e-12, "depth {n}: {m}");
    }
}

#[test]
fn unit_order_mass_is_flagged_length() {
    let alpha = AlphaOrder::for_set(1.0).unwrap();
    for n in [1, 4, 9] {
        let cover = build_cantor_cover(1.0 / 3.0, n, unit()).unwrap();
        let m = coarse_mass(&cover, alpha, unit(), cover.leaf_width()).unwrap();
        assert!((m - (2.0f64 / 3.0).powi(n as i32)).abs() < 1e-13);
    }
}

#[test]
fn mass_function_examples() {
    let interval = CoverFamily::new(SetGenerator::Interval, unit()).unwrap();
    let e = mass_function(&interval, AlphaOrder::for_set(1.0).unwrap(), unit(), 1e-9).unwrap();
    assert!(e.converged && (e.value - 1.0).abs() < 1e-12);
    assert_eq!(e.limit(), e.value);

    let cantor = CoverFamily::new(SetGenerator::middle_cantor(1.0 / 3.0).unwrap(), unit()).unwrap();
    let e = mass_function(&cantor, AlphaOrder::for_set(0.9).unwrap(), unit(), 1e-6).unwrap();
    assert!(e.converged && !e.diverged);
    assert_eq!(e.limit(), 0.0);
    assert!(e.value < 1e-5);

    let e = mass_function(&cantor, AlphaOrder::for_set(0.4).unwrap(), unit(), 1e-6).unwrap();
    assert!(e.diverged && !e.converged);
    assert_eq!(e.limit(), f64::INFINITY);
}

/// Oracle: the depth sweep of the closed form `Γ(α+1)(2 r^α)^n` classifies
/// each order by whether `2 r^α` is below or above one.
#[test]
fn dichotomy_grid_around_cantor_dimension() {
    let cantor = CoverFamily::new(SetGenerator::middle_cantor(1.0 / 3.0).unwrap(), unit()).unwrap();
    for i in 1..=19 {
        let a = 0.05 * i as f64;
        let oracle_vanishes = 2.0 * (1.0f64 / 3.0).powf(a) < 1.0;
        let e = mass_function(&cantor, AlphaOrder::for_set(a).unwrap(), unit(), 1e-6).unwrap();
        let want = if oracle_vanishes {
            MassRegime::Vanishing
        } else {
            MassRegime::Diverging
        };
        assert_eq!(e.regime(), want, "alpha = {a}");
    }
}

#[test]
fn dimensions_of_three_families() {
    let interval = CoverFamily::new(SetGenerator::Interval, unit()).unwrap();
    assert!((gamma_dimension(&interval, unit(), 1e-3).unwrap() - 1.0).abs() <= 1e-3);
    let third = CoverFamily::new(SetGenerator::middle_cantor(1.0 / 3.0).unwrap(), unit()).unwrap();
    assert!((gamma_dimension(&third, unit(), 1e-3).unwrap() - cantor_dim()).abs() < 0.02);
    let half = CoverFamily::new(SetGenerator::middle_cantor(0.5).unwrap(), unit()).unwrap();
    assert!((gamma_dimension(&half, unit(), 1e-3).unwrap() - 0.5).abs() < 0.02);
}

#[test]
fn staircase_examples() {
    let ident = build_staircase(
        &full_interval_cover(4, unit()).unwrap(),
        AlphaOrder::for_set(1.0).unwrap(),
        0.0,
        11,
    )
    .unwrap();
    for &x in &[0.0, 0.1, 0.25, 0.5, 0.93, 1.0] {
        assert!((ident.eval(x).unwrap() - x).abs() < 1e-12);
    }

    let alpha = AlphaOrder::for_set(cantor_dim()).unwrap();
    let cover = build_cantor_cover(1.0 / 3.0, 8, unit()).unwrap();
    let t = build_staircase(&cover, alpha, 0.0, 65).unwrap();
    assert!((t.eval(1.0).unwrap() - GAMMA_CANTOR).abs() < 1e-12);
    assert!((t.eval(1.0 / 3.0).unwrap() - GAMMA_CANTOR / 2.0).abs() < 1e-12);
    assert_eq!(t.eval(0.4).unwrap(), t.eval(0.6).unwrap());
    assert!((t.invert(GAMMA_CANTOR / 2.0).unwrap() - 1.0 / 3.0).abs() < 1e-9);
    assert_eq!(t.eval(0.0).unwrap(), 0.0);
}

#[test]
fn staircase_with_interior_origin_is_signed() {
    let alpha = AlphaOrder::for_set(cantor_dim()).unwrap();
    let cover = build_cantor_cover(1.0 / 3.0, 6, unit()).unwrap();
    let t = build_staircase(&cover, alpha, 0.5, 9).unwrap();
    assert_eq!(t.eval(0.5).unwrap(), 0.0);
    assert!((t.eval(0.0).unwrap() + GAMMA_CANTOR / 2.0).abs() < 1e-12);
    assert!((t.eval(1.0).unwrap() - GAMMA_CANTOR / 2.0).abs() < 1e-12);
}

#[test]
fn staircase_is_flat_on_every_gap() {
    let alpha = AlphaOrder::for_set(cantor_dim()).unwrap();
    let cover = build_cantor_cover(1.0 / 3.0, 6, unit()).unwrap();
    let t = build_staircase(&cover, alpha, 0.0, 2).unwrap();
    let ivs = cover.intervals().unwrap();
    for w in ivs.windows(2) {
        let (a, b) = (w[0].hi, w[1].lo);
        let s = t.eval(a).unwrap();
        for k in 1..4 {
            let x = a + (b - a) * k as f64 / 4.0;
            assert_eq!(t.eval(x).unwrap(), s);
            assert!(!flag(&cover, Interval::point(x)));
        }
    }
}

proptest! {
    #[test]
    fn closed_form_scaling(n in 0u32..=20, xi_third in proptest::bool::ANY, alpha in 0.05f64..1.0) {
        let xi = if xi_third { 1.0 / 3.0 } else { 0.5 };
        let r = (1.0 - xi) / 2.0;
        let cover = build_cantor_cover(xi, n, unit()).unwrap();
        let a = AlphaOrder::for_set(alpha).unwrap();
        let m = coarse_mass(&cover, a, unit(), cover.leaf_width()).unwrap();
        let gamma = fractal_calculus::gamma::mass_weight(alpha);
        let want = gamma * (2.0 * r.powf(alpha)).powi(n as i32);
        prop_assert!(((m - want) / want).abs() < 1e-12);
    }

    #[test]
    fn coarse_mass_non_increasing_in_delta(n in 0u32..12, alpha in 0.05f64..1.0, lo in 0.0f64..0.5, w in 0.1f64..0.5, shrink in 1.0f64..50.0) {
        let range = Interval::new(lo, lo + w).unwrap();
        let a = AlphaOrder::for_set(alpha).unwrap();
        let cover = build_cantor_cover(1.0 / 3.0, n, unit()).unwrap();
        let wide = cover.leaf_width();
        let m_wide = coarse_mass(&cover, a, range, wide).unwrap();
        let m_narrow = coarse_mass(&cover, a, range, wide / shrink).unwrap();
        prop_assert!(m_narrow >= m_wide * (1.0 - 1e-12));
    }

    #[test]
    fn refinement_moves_mass_toward_its_limit(n in 0u32..12, alpha in 0.05f64..1.0) {
        let a = AlphaOrder::for_set(alpha).unwrap();
        let coarse = build_cantor_cover(1.0 / 3.0, n, unit()).unwrap();
        let fine = coarse.refine();
        let m0 = coarse_mass(&coarse, a, unit(), coarse.leaf_width()).unwrap();
        let m1 = coarse_mass(&fine, a, unit(), fine.leaf_width()).unwrap();
        if alpha >= cantor_dim() {
            prop_assert!(m1 <= m0 * (1.0 + 1e-12));
        } else {
            prop_assert!(m1 >= m0 * (1.0 - 1e-12));
        }
    }

    #[test]
    fn staircase_pseudo_inverse(s_frac in 0.0f64..=1.0) {
        let alpha = AlphaOrder::for_set(cantor_dim()).unwrap();
        let cover = build_cantor_cover(1.0 / 3.0, 7, unit()).unwrap();
        let t = build_staircase(&cover, alpha, 0.0, 33).unwrap();
        let (lo, hi) = t.value_range();
        let s = lo + s_frac * (hi - lo);
        let x = t.invert(s).unwrap();
        prop_assert!((t.eval(x).unwrap() - s).abs() < 1e-9);
    }
}
