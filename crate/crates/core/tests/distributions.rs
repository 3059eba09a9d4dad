use cornergrowth::stats::{ks_one_sample, ks_two_sample};
use cornergrowth::{
    characteristic_point, dual_geodesic, generate_bulk, make_stream, make_sw_boundary, nested_boundary_from_increments,
    semi_infinite_geodesic, stationary_forward, BusemannWindow, ExpRate, LatticePoint, LatticeRect, Step,
};

#[test]
fn dual_steps_match_reflected_primal_steps() {
    // Fraction of e1 steps among the first k primal steps from the origin,
    // against the fraction of -e1 steps among the first k dual steps from the
    // top corner of the dual domain.
    let k = 20;
    let window = LatticeRect::from_origin(LatticePoint::new(k, k)).unwrap();
    let (mut primal, mut dual) = (Vec::new(), Vec::new());
    for r in 0..2000 {
        let b = BusemannWindow::sample(0.5, 120, 4.0, window, &mut make_stream(41, r), usize::MAX).unwrap();
        let p = semi_infinite_geodesic(&b, LatticePoint::ORIGIN).unwrap();
        let d = dual_geodesic(&b, b.dual_rect().hi()).unwrap();
        let frac = |steps: &[Step], s: Step| steps.iter().take(k as usize).filter(|&&x| x == s).count() as f64 / k as f64;
        primal.push(frac(&p.steps, Step::E1));
        dual.push(frac(&d.steps, Step::NegE1));
    }
    let ks = ks_two_sample(&primal, &dual);
    assert!(ks.passes(1e-3), "{ks:?}");
}

#[test]
fn nested_boundary_is_stationary() {
    let rho = 0.35;
    let rate = ExpRate::new(1.0 - rho).unwrap();
    let mut sample = Vec::new();
    for r in 0..500 {
        let s = make_stream(42, r);
        let hi = LatticePoint::new(40, 40);
        let bulk = generate_bulk(LatticeRect::new(LatticePoint::new(1, 1), hi).unwrap(), &mut s.fork(1)).unwrap();
        let boundary = make_sw_boundary(rho, LatticePoint::ORIGIN, 40, 40, &mut s.fork(2)).unwrap();
        let process = stationary_forward(&boundary, &bulk).unwrap();
        let nested = nested_boundary_from_increments(&process, LatticePoint::new(10, 15)).unwrap();
        sample.extend_from_slice(&nested.horizontal()[..20]);
    }
    assert_eq!(sample.len(), 10_000);
    let ks = ks_one_sample(&sample, |t| rate.cdf(t));
    assert!(ks.passes(1e-3), "{ks:?}");
}

#[test]
fn exit_scale_grows_like_two_thirds_power() {
    let mean_abs = |n: u64| {
        let v = characteristic_point(0.5, n).unwrap().point;
        let total: i64 = (0..400)
            .map(|r| {
                let s = make_stream(43, r);
                let bulk = generate_bulk(LatticeRect::new(LatticePoint::new(1, 1), v).unwrap(), &mut s.fork(1)).unwrap();
                let b = make_sw_boundary(0.5, LatticePoint::ORIGIN, v.x1 as usize, v.x2 as usize, &mut s.fork(2)).unwrap();
                cornergrowth::exit_time(&stationary_forward(&b, &bulk).unwrap(), v).unwrap().abs()
            })
            .sum();
        total as f64 / 400.0
    };
    // Eightfold N should scale |Z| by about 4.
    let ratio = mean_abs(1600) / mean_abs(200);
    assert!((3.0..5.3).contains(&ratio), "ratio {ratio}");
}
