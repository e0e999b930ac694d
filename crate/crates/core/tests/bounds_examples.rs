mod common;

use common::rel;
use marcumq::asymptotics::{marcum_asym, nuttall_norm_asym, nuttall_std_asym};
use marcumq::bounds::{
    marcum_bound, marcum_lb1, marcum_lb2, marcum_ub1, marcum_ub3, marcum_ub4, nuttall_norm_bound, nuttall_std_bounds,
    select_marcum_bounds, select_nuttall_bounds, BoundKind, NuttallBracket, OrderBracket, Target,
};
use marcumq::closed_form::{marcum_central, marcum_half_odd, nuttall_norm_half_odd, HalfOddOrder, NuttallHalfOddOrders};
use marcumq::harness::{
    check_logconcave, check_logconvex, check_monotone, run_theorem_suite, Axis, Direction, GridSpec, Params, Transform,
    DEFAULT_TOL,
};
use marcumq::moment::{truncated_moment, truncated_moment_quad, ScaledChiSquare};
use marcumq::oracle::grid;
use marcumq::{MarcumArgs, NuttallArgs, Oracle};

fn q(nu: f64, a: f64, b: f64) -> f64 {
    Oracle::default().marcum_q(MarcumArgs::new(nu, a, b).unwrap()).unwrap().value
}

fn qn(mu: f64, nu: f64, a: f64, b: f64) -> f64 {
    Oracle::default().nuttall_q_norm(NuttallArgs::new(mu, nu, a, b).unwrap()).unwrap().value
}

fn fine_b() -> impl Iterator<Item = f64> {
    (1..=120).map(|i| 0.25 * f64::from(i))
}

const SLACK: f64 = 1e-10;

#[test]
fn half_odd_order_bounds_are_exact() {
    let br = OrderBracket::new(2.5).unwrap();
    let exact = marcum_half_odd(HalfOddOrder::new(2.5).unwrap(), 1.0, 2.0).unwrap().value;
    for k in BoundKind::MARCUM {
        assert_eq!(marcum_bound(k, &br, 1.0, 2.0).unwrap(), exact, "{k}");
    }
    let r = select_marcum_bounds(MarcumArgs::new(2.5, 1.0, 2.0).unwrap(), &Oracle::default()).unwrap();
    assert!(r.exact_order);
    let nb = NuttallBracket::new(4.5, 1.5).unwrap();
    let exact = nuttall_norm_half_odd(NuttallHalfOddOrders::new(4.5, 1.5).unwrap(), 2.0, 3.0).unwrap().value;
    for k in BoundKind::NUTTALL {
        assert!(rel(nuttall_norm_bound(k, &nb, 2.0, 3.0).unwrap(), exact) < 1e-15);
    }
}

#[test]
fn lb1_below_oracle() {
    let br = OrderBracket::new(2.0).unwrap();
    for b in fine_b() {
        let x = q(2.0, 1.5, b);
        if x > 1e-280 {
            assert!(marcum_lb1(&br, 1.5, b).unwrap() <= x * (1.0 + SLACK), "b={b}");
        }
    }
}

#[test]
fn ub1_between_oracle_and_upper_neighbour() {
    let br = OrderBracket::new(2.0).unwrap();
    let ub = marcum_ub1(&br, 2.0, 10.0).unwrap();
    assert!(ub >= q(2.0, 2.0, 10.0));
    assert!(ub <= marcum_half_odd(HalfOddOrder::new(2.5).unwrap(), 2.0, 10.0).unwrap().value);
}

#[test]
fn lb2_central_limit() {
    let br = OrderBracket::new(2.3).unwrap();
    for b in [0.5, 2.0, 4.0] {
        let central = marcum_central(2.3, b).unwrap();
        assert!(rel(marcum_lb2(&br, 1e-7, b).unwrap(), central) < 1e-9);
        assert!(rel(marcum_lb2(&br, 0.0, b).unwrap(), central) < 1e-15);
    }
}

#[test]
fn small_a_family_brackets_oracle() {
    let br = OrderBracket::new(1.8).unwrap();
    for b in fine_b() {
        let x = q(1.8, 1.8, b);
        if x < 1e-280 {
            continue;
        }
        assert!(marcum_lb2(&br, 1.8, b).unwrap() <= x * (1.0 + SLACK), "lb2 b={b}");
        assert!(marcum_ub3(&br, 1.8, b).unwrap() >= x * (1.0 - SLACK), "ub3 b={b}");
        assert!(marcum_ub4(&br, 1.8, b).unwrap() >= x * (1.0 - SLACK), "ub4 b={b}");
    }
}

#[test]
fn ub3_ub4_crossover() {
    // nu = 5.1 sits nearer its upper half-odd neighbour, nu = 1.8 nearer the lower one
    let (b51, b18) = (OrderBracket::new(5.1).unwrap(), OrderBracket::new(1.8).unwrap());
    for b in fine_b() {
        if q(5.1, 1.8, b) > 1e-280 {
            assert!(marcum_ub3(&b51, 1.8, b).unwrap() <= marcum_ub4(&b51, 1.8, b).unwrap(), "nu=5.1 b={b}");
        }
        if q(1.8, 1.8, b) > 1e-280 {
            assert!(marcum_ub4(&b18, 1.8, b).unwrap() <= marcum_ub3(&b18, 1.8, b).unwrap(), "nu=1.8 b={b}");
        }
    }
}

#[test]
fn nuttall_sandwich_at_unit_argument() {
    let br = NuttallBracket::new(4.0, 2.0).unwrap();
    let side = |nu: f64, b: f64| nuttall_norm_half_odd(NuttallHalfOddOrders::new(nu + 2.0, nu).unwrap(), 1.0, b).unwrap().value;
    for b in fine_b() {
        let x = qn(4.0, 2.0, 1.0, b);
        if x < 1e-280 {
            continue;
        }
        let lb = nuttall_norm_bound(BoundKind::Lb1, &br, 1.0, b).unwrap();
        let ub = nuttall_norm_bound(BoundKind::Ub1, &br, 1.0, b).unwrap();
        assert!(side(1.5, b) <= lb * (1.0 + SLACK) && lb <= x * (1.0 + SLACK), "b={b}");
        assert!(x <= ub * (1.0 + SLACK) && ub <= side(2.5, b) * (1.0 + SLACK), "b={b}");
    }
}

#[test]
fn nuttall_ub2_beats_ub1_near_lower_neighbour() {
    let br = NuttallBracket::new(3.7, 1.7).unwrap();
    for b in fine_b() {
        if qn(3.7, 1.7, 1.0, b) < 1e-280 {
            continue;
        }
        let u1 = nuttall_norm_bound(BoundKind::Ub1, &br, 1.0, b).unwrap();
        let u2 = nuttall_norm_bound(BoundKind::Ub2, &br, 1.0, b).unwrap();
        assert!(u2 <= u1, "b={b}");
    }
}

#[test]
fn standard_nuttall_report_brackets() {
    let o = Oracle::default();
    for b in fine_b() {
        let r = nuttall_std_bounds(NuttallArgs::new(3.0, 1.0, 1.5, b).unwrap(), &o).unwrap();
        if r.exact.value < 1e-280 {
            continue;
        }
        assert!(r.violations(SLACK).is_empty(), "b={b}");
        assert_eq!(r.target, Target::NuttallStd);
    }
}

#[test]
fn recommendation_follows_fractional_part() {
    let o = Oracle::default();
    let r = select_marcum_bounds(MarcumArgs::new(5.1, 1.8, 3.0).unwrap(), &o).unwrap();
    assert_eq!(r.recommended_upper, Some(BoundKind::Ub1));
    let r = select_marcum_bounds(MarcumArgs::new(5.1, 0.8, 3.0).unwrap(), &o).unwrap();
    assert_eq!(r.recommended_upper, Some(BoundKind::Ub3));
    let r = select_marcum_bounds(MarcumArgs::new(2.8, 1.8, 3.0).unwrap(), &o).unwrap();
    assert_eq!(r.recommended_upper, Some(BoundKind::Ub2));
    // UB2 needs nu >= 2.5, so the same-side UB4 stands in
    let r = select_marcum_bounds(MarcumArgs::new(1.8, 1.8, 3.0).unwrap(), &o).unwrap();
    assert_eq!(r.recommended_upper, Some(BoundKind::Ub4));
    let r = select_marcum_bounds(MarcumArgs::new(1.8, 0.8, 3.0).unwrap(), &o).unwrap();
    assert_eq!(r.recommended_upper, Some(BoundKind::Ub4));
    let r = select_marcum_bounds(MarcumArgs::new(1.2, 3.0, 1.0).unwrap(), &o).unwrap();
    assert!(r.lb1().is_none() && r.ub2().is_none() && r.ub4().is_none());
    assert!(r.lb2().is_some() && r.ub1().is_some() && r.ub3().is_some());
    let r = select_nuttall_bounds(NuttallArgs::new(3.7, 1.7, 1.0, 2.0).unwrap(), Target::NuttallNorm, &o).unwrap();
    assert_eq!(r.recommended_upper, Some(BoundKind::Ub2));
}

#[test]
fn bound_errors_shrink_with_b() {
    let br = OrderBracket::new(2.0).unwrap();
    let bs = [10.0, 15.0, 20.0, 30.0];
    for k in BoundKind::MARCUM {
        let Ok(_) = marcum_bound(k, &br, 2.0, 10.0) else { continue };
        let errs: Vec<f64> = bs.iter().map(|&b| rel(marcum_bound(k, &br, 2.0, b).unwrap(), q(2.0, 2.0, b))).collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "{k}: {errs:?}");
    }
}

#[test]
fn half_order_neighbours_do_not_converge() {
    // Q_{nu1}/Q_nu tends to (b/a)^{nu1-nu}, not 1
    for b in [10.0, 20.0, 30.0] {
        let ratio = q(2.5, 2.0, b) / q(2.0, 2.0, b);
        assert!(rel(ratio, (b / 2.0f64).sqrt()) < 0.05, "b={b}");
    }
}

#[test]
fn asymptotes_track_exact_values() {
    assert!(rel(marcum_asym(MarcumArgs::new(2.0, 2.0, 20.0).unwrap()).unwrap(), q(2.0, 2.0, 20.0)) < 0.05);
    // leading-order error here is (4 nu^2 - 1)/(8ab), about 7.5% at b = 25
    let err = |b: f64| rel(nuttall_norm_asym(NuttallArgs::new(4.0, 2.0, 1.0, b).unwrap()).unwrap(), qn(4.0, 2.0, 1.0, b));
    assert!(err(25.0) < 0.08 && err(25.0) < err(15.0), "{} {}", err(15.0), err(25.0));
    let args = NuttallArgs::new(3.0, 1.0, 1.5, 20.0).unwrap();
    let want = Oracle::default().nuttall_q(args).unwrap().value;
    assert!(rel(nuttall_std_asym(args).unwrap(), want) < 0.05);
    let half = marcum_asym(MarcumArgs::new(0.5, 1.0, 6.0).unwrap()).unwrap();
    assert_eq!(half, marcumq::scalar::gaussian_q(5.0));
}

fn grid(axis: Axis, lo: f64, hi: f64, h: f64, fixed: Params) -> GridSpec {
    GridSpec::uniform(axis, lo, hi, h, fixed, Transform::Identity).unwrap()
}

#[test]
fn monotone_checks() {
    let g = grid(Axis::Nu, 1.0, 6.0, 0.5, Params::marcum(0.0, 2.0, 3.0));
    let v = check_monotone("nu", |nu| Ok(q(nu, 2.0, 3.0)), &g, Direction::Increasing, DEFAULT_TOL).unwrap();
    assert!(v.pass && v.checked_points == 10);
    let g = grid(Axis::A, 0.0, 5.0, 0.5, Params::marcum(2.0, 0.0, 3.0));
    let v = check_monotone("a", |a| Ok(q(2.0, a, 3.0)), &g, Direction::Increasing, DEFAULT_TOL).unwrap();
    assert!(v.pass);
    let v = check_monotone("a", |a| Ok(q(2.0, a, 3.0)), &g, Direction::Decreasing, DEFAULT_TOL).unwrap();
    assert!(!v.pass);
}

#[test]
fn log_concavity_checks() {
    let g = grid(Axis::Nu, 1.0, 8.0, 0.25, Params::marcum(0.0, 2.0, 3.0));
    assert!(check_logconcave("t3b", |nu| Ok(q(nu, 2.0, 3.0)), &g, DEFAULT_TOL).unwrap().pass);

    let g = GridSpec::uniform(Axis::B, 0.25, 30.0, 0.25, Params::marcum(2.0, 1.0, 0.0), Transform::Sqrt).unwrap();
    let p = |x: f64| Ok(Oracle::default().marcum_p(MarcumArgs::new(2.0, 1.0, x.sqrt()).unwrap())?.value);
    assert!(check_logconcave("t2", p, &g, DEFAULT_TOL).unwrap().pass);

    let g = grid(Axis::Mu, 0.0, 6.0, 0.25, Params::nuttall(0.0, 2.0, 1.0, 1.5));
    let f = |mu| Ok(qn(mu, 2.0, 1.0, 1.5));
    assert!(!check_logconcave("t7", f, &g, DEFAULT_TOL).unwrap().pass);
    assert!(check_logconvex("t7", f, &g, DEFAULT_TOL).unwrap().pass);
}

#[test]
fn log_convexity_checks() {
    let g = grid(Axis::Mu, 0.0, 6.0, 0.25, Params::nuttall(0.0, 1.0, 2.0, 1.0));
    let f = |mu| Ok(Oracle::default().nuttall_q(NuttallArgs::new(mu, 1.0, 2.0, 1.0).unwrap())?.value);
    assert!(check_logconvex("t7a", f, &g, DEFAULT_TOL).unwrap().pass);

    let g = grid(Axis::Nu, 0.5, 6.0, 0.5, Params::default());
    let power = |nu: f64| Ok(3f64.powf(nu));
    assert!(check_logconcave("lin", power, &g, DEFAULT_TOL).unwrap().pass);
    assert!(check_logconvex("lin", power, &g, DEFAULT_TOL).unwrap().pass);

    let g = grid(Axis::Mu, 0.0, 6.0, 0.25, Params::nuttall(0.0, 2.0, 1.5, 2.0));
    let lower = |mu| Ok(Oracle::default().nuttall_lower(NuttallArgs::new(mu, 2.0, 1.5, 2.0).unwrap())?.value);
    assert!(check_logconvex("t7b", lower, &g, DEFAULT_TOL).unwrap().pass);
}

#[test]
fn suite_filter_selects_one_clause() {
    let v = run_theorem_suite(&Oracle::default(), DEFAULT_TOL, Some("theorem3b")).unwrap();
    assert_eq!(v.len(), 1);
    assert_eq!(v[0].property_id, "theorem3b");
    assert!(v[0].pass);
}

#[test]
fn moment_examples() {
    let o = Oracle::default();
    let d = ScaledChiSquare::new(4.0, 1.0, 1.0).unwrap();
    assert_eq!(truncated_moment(&d, 1.0, 3.0, 3.0, &o, false).unwrap().value, 0.0);
    let m = truncated_moment(&d, 1.0, 1.0, 4.0, &o, false).unwrap().value;
    let want = truncated_moment_quad(&d, 1.0, 1.0, 4.0, &o).unwrap().value;
    assert!(rel(m, want) < 1e-8);
    // full range: sigma^{2j} times the normalized Nuttall value at b = 0
    let d = ScaledChiSquare::new(5.0, 1.3, 0.7).unwrap();
    let full = truncated_moment(&d, 2.0, 0.0, f64::INFINITY, &o, false).unwrap().value;
    let (mu, nu) = d.nuttall_orders(2.0);
    let want = 0.7f64.powi(4) * qn(mu, nu, 1.3 / 0.7, 0.0);
    assert!(rel(full, want) < 1e-12);
    // half-odd orders take the closed form, and forcing the oracle agrees
    let fast = truncated_moment(&d, 1.0, 0.5, 6.0, &o, false).unwrap().value;
    let slow = truncated_moment(&d, 1.0, 0.5, 6.0, &o, true).unwrap().value;
    assert!(rel(fast, slow) < 1e-10);
}

#[test]
fn report_recommendation_is_checked() {
    let o = Oracle::default();
    let mut agree = 0;
    let mut total = 0;
    for &nu in &[1.7, 2.2, 4.9] {
        for &a in grid::a().iter() {
            for &b in &grid::b() {
                let r = select_marcum_bounds(MarcumArgs::new(nu, a, b).unwrap(), &o).unwrap();
                total += 1;
                agree += usize::from(r.recommendation_is_tightest());
            }
        }
    }
    assert!(agree > 0 && agree <= total);
}
