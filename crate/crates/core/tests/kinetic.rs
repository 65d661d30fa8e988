use cfcolor::kinetic::{
    crossing_pairs, lowerbound_scenario, lowerbound_until, random_scenario, recolorings_by_pair,
    simulate, Audit, KineticState, Trajectory,
};
use cfcolor::oracle;
use cfcolor::workload::rng;
use num_rational::BigRational;

/// Endpoint order at time `t` straight from the trajectories.
fn order_at(sc: &[Trajectory], t: f64) -> Vec<(u64, bool)> {
    let mut pts: Vec<(f64, (u64, bool))> = Vec::new();
    for tr in sc {
        pts.push((tr.left_at(t), (tr.id, false)));
        pts.push((tr.right_at(t), (tr.id, true)));
    }
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    pts.into_iter().map(|p| p.1).collect()
}

#[test]
fn random_motion_keeps_invariants() {
    let mut r = rng(11);
    for _ in 0..20 {
        let sc = random_scenario(&mut r, 40, 60.0, 10.0);
        let run = simulate::<f64>(&sc, 0.0, 10.0, Audit::Every).unwrap();
        assert!(run.max_recolorings <= 3);
        assert!(run.colors_ever <= 4);
    }
}

#[test]
fn exact_and_float_agree() {
    let mut r = rng(5);
    for _ in 0..5 {
        let sc = random_scenario(&mut r, 25, 40.0, 8.0);
        let a = simulate::<f64>(&sc, 0.0, 8.0, Audit::Final).unwrap();
        let b = simulate::<BigRational>(&sc, 0.0, 8.0, Audit::Final).unwrap();
        let kinds = |run: &cfcolor::kinetic::KineticRun| {
            run.events
                .iter()
                .map(|e| (e.kind, e.first, e.second))
                .collect::<Vec<_>>()
        };
        assert_eq!(kinds(&a), kinds(&b));
        assert_eq!(a.total_recolorings, b.total_recolorings);
    }
}

#[test]
fn tracked_order_matches_geometry() {
    let mut r = rng(21);
    let sc = random_scenario(&mut r, 30, 40.0, 6.0);
    let mut s = KineticState::<BigRational>::initialize(&sc, 0.0).unwrap();
    let mut last = 0.0;
    while let Some(ev) = s.next_event() {
        let t = cfcolor::kinetic::Scalar::to_f64(&ev.time);
        if t > 6.0 {
            break;
        }
        // between two events the geometric order is the tracked one
        let mid = (last + t) / 2.0;
        let ranks = s.rank_snapshot();
        let mut tracked: Vec<(f64, (u64, bool))> = Vec::new();
        for iv in &ranks {
            tracked.push((iv.left, (iv.id, false)));
            tracked.push((iv.right, (iv.id, true)));
        }
        tracked.sort_by(|a, b| a.0.total_cmp(&b.0));
        let tracked: Vec<_> = tracked.into_iter().map(|p| p.1).collect();
        assert_eq!(tracked, order_at(&sc, mid));
        s.handle_event(&ev).unwrap();
        last = t;
    }
    let snap: Vec<_> = sc.iter().map(|t| t.at(last).unwrap()).collect();
    let _ = oracle::elementary_regions(&snap);
}

#[test]
fn lowerbound_every_crossing_pays() {
    for n in [2, 4, 6] {
        let run = simulate::<f64>(
            &lowerbound_scenario(n),
            0.0,
            lowerbound_until(n),
            Audit::Every,
        )
        .unwrap();
        assert_eq!(crossing_pairs(&run.events, n).len(), n * n);
        assert!(
            run.total_recolorings >= (n * n) as u64,
            "n={n}: {}",
            run.total_recolorings
        );
        let per_pair = recolorings_by_pair(&run.events, n);
        assert_eq!(per_pair.len(), n * n);
    }
}

#[test]
fn lowerbound_twenty() {
    let n = 20;
    let run = simulate::<f64>(
        &lowerbound_scenario(n),
        0.0,
        lowerbound_until(n),
        Audit::Final,
    )
    .unwrap();
    assert!(run.total_recolorings >= 400, "{}", run.total_recolorings);
    assert!(run.max_recolorings <= 3);
}
