use fractal_calculus::curves::{
    build_koch, build_rise, curve_gamma_dimension, curve_mass, CurveApprox, CurveSegment, CurveVariant,
};
use fractal_calculus::AlphaOrder;
use proptest::prelude::*;

// 1 / Γ(1 + ln4/ln3), 30-digit reference.
const KOCH_MASS: f64 = 0.876_603_109_987_812;

fn koch_dim() -> f64 {
    4f64.ln() / 3f64.ln()
}

fn order(a: f64) -> AlphaOrder {
    AlphaOrder::for_curve(a, 2).unwrap()
}

fn whole() -> CurveSegment {
    CurveSegment::new(0.0, 1.0).unwrap()
}

#[test]
fn koch_length_grows_by_four_thirds() {
    for n in 0..=6 {
        let c = build_koch(n, &CurveVariant::Koch).unwrap();
        assert_eq!(c.len(), 4usize.pow(n) + 1);
        let want = (4.0f64 / 3.0).powi(n as i32);
        assert!((c.total_length() - want).abs() < 1e-12 * want);
        for l in c.chord_lengths() {
            assert!((l - 3f64.powi(-(n as i32))).abs() < 1e-13);
        }
    }
}

#[test]
fn straight_segment_has_unit_mass() {
    let c = build_koch(3, &CurveVariant::Line).unwrap();
    let m = curve_mass(&c, order(1.0), whole()).unwrap();
    assert!((m - 1.0).abs() < 1e-14);
}

#[test]
fn koch_mass_at_dimension_is_depth_independent() {
    for n in [1, 3, 6, 8] {
        let c = build_koch(n, &CurveVariant::Koch).unwrap();
        let m = curve_mass(&c, order(koch_dim()), whole()).unwrap();
        assert!((m - KOCH_MASS).abs() < 1e-12, "depth {n}: {m}");
    }
}

#[test]
fn koch_unit_order_mass_diverges_with_depth() {
    let masses: Vec<f64> = (0..8)
        .map(|n| curve_mass(&build_koch(n, &CurveVariant::Koch).unwrap(), order(1.0), whole()).unwrap())
        .collect();
    for (n, m) in masses.iter().enumerate() {
        assert!((m - (4.0f64 / 3.0).powi(n as i32)).abs() < 1e-12 * m);
    }
}

#[test]
fn empty_segment_has_zero_mass() {
    let c = build_koch(2, &CurveVariant::Koch).unwrap();
    let seg = CurveSegment { t_lo: 0.5, t_hi: 0.5 };
    assert_eq!(curve_mass(&c, order(1.2), seg).unwrap(), 0.0);
}

#[test]
fn curve_dimensions() {
    let line = curve_gamma_dimension(&CurveVariant::Line, 1e-3).unwrap();
    assert!((line - 1.0).abs() < 1e-3, "{line}");
    let koch = curve_gamma_dimension(&CurveVariant::Koch, 1e-3).unwrap();
    assert!((koch - koch_dim()).abs() < 0.03, "{koch}");
    let quad = curve_gamma_dimension(&CurveVariant::QuadraticKoch, 1e-3).unwrap();
    assert!((quad - 5f64.ln() / 3f64.ln()).abs() < 0.03, "{quad}");
}

#[test]
fn dichotomy_grid_around_koch_dimension() {
    let masses = |a: f64| -> Vec<f64> {
        (0..=7)
            .map(|n| curve_mass(&build_koch(n, &CurveVariant::Koch).unwrap(), order(a), whole()).unwrap())
            .collect()
    };
    for k in 1..=9 {
        let a = 1.0 + 0.1 * k as f64;
        let m = masses(a);
        if a < koch_dim() - 0.01 {
            assert!(m[7] > m[6] && m[6] > m[5], "α={a} should grow");
        } else if a > koch_dim() + 0.01 {
            assert!(m[7] < m[6] && m[6] < m[5], "α={a} should shrink");
        }
    }
}

#[test]
fn line_rise_is_identity() {
    let c = build_rise(&build_koch(4, &CurveVariant::Line).unwrap(), order(1.0), 0.0).unwrap();
    for (u, j) in c.params().iter().zip(c.rise().unwrap()) {
        assert!((u - j).abs() < 1e-14);
    }
}

#[test]
fn koch_rise_splits_in_quarters() {
    let c = build_rise(&build_koch(5, &CurveVariant::Koch).unwrap(), order(koch_dim()), 0.0).unwrap();
    let table = c.rise_table().unwrap();
    let total = table.eval(1.0).unwrap();
    assert!((total - KOCH_MASS).abs() < 1e-12);
    assert!((table.eval(0.25).unwrap() - total / 4.0).abs() < 1e-12);
    assert_eq!(table.eval(0.0).unwrap(), 0.0);
}

#[test]
fn interior_origin_gives_signed_rise() {
    let c = build_rise(&build_koch(3, &CurveVariant::Koch).unwrap(), order(1.3), 0.5).unwrap();
    let table = c.rise_table().unwrap();
    assert!(table.eval(0.5).unwrap().abs() < 1e-15);
    assert!(table.eval(0.0).unwrap() < 0.0);
    assert!(table.eval(1.0).unwrap() > 0.0);
}

#[test]
fn polyline_in_three_dimensions() {
    let c = CurveApprox::from_polyline(
        vec![0.0, 1.0, 2.0],
        vec![vec![0.0, 0.0, 0.0], vec![1.0, 2.0, 2.0], vec![1.0, 2.0, 5.0]],
    )
    .unwrap();
    let m = curve_mass(
        &c,
        AlphaOrder::for_curve(1.0, 3).unwrap(),
        CurveSegment::new(0.0, 2.0).unwrap(),
    )
    .unwrap();
    assert!((m - 6.0).abs() < 1e-14);
    assert!((c.distance_from_origin(1) - 3.0).abs() < 1e-15);
}

#[test]
fn csv_and_descriptor() {
    let c = build_rise(&build_koch(1, &CurveVariant::Koch).unwrap(), order(1.0), 0.0).unwrap();
    let mut buf = Vec::new();
    c.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().next(), Some("u,x1,x2,J"));
    assert_eq!(text.lines().count(), 6);
    let json = serde_json::to_value(c.descriptor()).unwrap();
    assert_eq!(json["variant"]["kind"], "koch");
    assert_eq!(json["depth"], 1);
    assert_eq!(json["origin_param"], 0.0);
}

proptest! {
    #[test]
    fn mass_is_additive(depth in 0u32..6, a in 1.0f64..2.0, cuts in prop::array::uniform3(0.0f64..1.0)) {
        let mut t = cuts;
        t.sort_by(f64::total_cmp);
        prop_assume!(t[0] < t[1] && t[1] < t[2]);
        let c = build_koch(depth, &CurveVariant::Koch).unwrap();
        let al = order(a);
        let ab = curve_mass(&c, al, CurveSegment::new(t[0], t[1]).unwrap()).unwrap();
        let bc = curve_mass(&c, al, CurveSegment::new(t[1], t[2]).unwrap()).unwrap();
        let ac = curve_mass(&c, al, CurveSegment::new(t[0], t[2]).unwrap()).unwrap();
        prop_assert!(ab >= 0.0 && bc >= 0.0);
        prop_assert!((ab + bc - ac).abs() <= 1e-12 * ac.max(1e-300));
    }

    #[test]
    fn rise_differences_reproduce_mass(depth in 1u32..5, a in 1.0f64..2.0, origin in 0.0f64..1.0) {
        let c = build_rise(&build_koch(depth, &CurveVariant::QuadraticKoch).unwrap(), order(a), origin).unwrap();
        let j = c.rise().unwrap();
        prop_assert!(j.windows(2).all(|w| w[1] >= w[0]));
        let table = c.rise_table().unwrap();
        prop_assert!(table.eval(origin).unwrap().abs() < 1e-12);
        let u = c.params();
        for i in (0..u.len() - 1).step_by(7) {
            let seg = CurveSegment::new(u[i], u[u.len() - 1]).unwrap();
            let m = curve_mass(&c, order(a), seg).unwrap();
            prop_assert!((j[u.len() - 1] - j[i] - m).abs() < 1e-12 * m.max(1.0));
        }
    }
}
