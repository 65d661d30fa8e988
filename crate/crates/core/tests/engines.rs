use cfcolor::dynamic::DynamicEngine;
use cfcolor::fixed::{FixedEngine, FixedScheme};
use cfcolor::trace::UpdateOp;
use cfcolor::workload::{random_trace, Shape, TraceSpec};
use cfcolor::ColoringEngine;

fn replay_checked(e: &mut dyn ColoringEngine, ops: &[UpdateOp]) -> usize {
    let mut max_r = 0;
    for (k, op) in ops.iter().enumerate() {
        let r = e.apply(op).unwrap();
        max_r = max_r.max(r.recolorings);
        e.check_invariants()
            .unwrap_or_else(|err| panic!("op {k}: {err}"));
        assert!(e.verify().unwrap().is_ok(), "op {k} not conflict-free");
    }
    max_r
}

#[test]
fn dynamic_random_small_t() {
    for t in [2, 3, 4] {
        for seed in 0..6 {
            let spec = TraceSpec::new(
                400,
                Shape::Free {
                    span: 60.0,
                    max_len: 12.0,
                },
            );
            let mut e = DynamicEngine::with_t(t).unwrap();
            replay_checked(&mut e, &random_trace(&spec, seed));
        }
    }
}

#[test]
fn eps_random() {
    for seed in 0..4 {
        let spec = TraceSpec::new(
            600,
            Shape::Free {
                span: 80.0,
                max_len: 10.0,
            },
        )
        .delete_prob(0.45);
        let mut e = DynamicEngine::with_eps(0.5).unwrap();
        replay_checked(&mut e, &random_trace(&spec, seed));
    }
}

#[test]
fn fixed_random() {
    for scheme in [FixedScheme::DistinctColors, FixedScheme::ChainPerNode] {
        for seed in 0..4 {
            let spec = TraceSpec::new(
                600,
                Shape::Universe {
                    u: 256,
                    max_len: 30,
                },
            );
            let mut e = FixedEngine::new(256, 2, scheme).unwrap();
            let max_r = replay_checked(&mut e, &random_trace(&spec, seed));
            let bound = e.declared_budget().unwrap();
            assert!(max_r <= bound.recolorings);
            assert!(e.coloring().colors_ever().len() <= bound.colors);
        }
    }
}
