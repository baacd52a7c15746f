use moreau_pi::hysteresis::{
    memory_evaluate, EvalMode, LoadingCurve, MainExtremaMemory, PiOperator, Signal, StopState,
};
use moreau_pi::linalg::max_abs_diff;
use moreau_pi::network::{ConfigurationGeometry, SpringNetwork};
use moreau_pi::sweep::{simulate, ProjectionConfig, Projector, SimulationConfig};
use moreau_pi::trace::{trace_loading_polyline, TraceConfig};
use proptest::prelude::*;

fn turning_points() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-5.0..5.0f64, 1..30)
}

fn stops() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0.1..3.0f64, 0.05..1.0f64), 1..8).prop_map(|raw| {
        let mut rho = 0.0;
        raw.into_iter()
            .map(|(a, gap)| {
                rho += gap;
                (a, rho)
            })
            .collect()
    })
}

fn triangle() -> SpringNetwork {
    SpringNetwork::new(
        4,
        &[
            (1, 2, 1.0, 0.8),
            (1, 3, 2.0, 1.5),
            (2, 3, 0.7, 0.5),
            (2, 4, 1.2, 1.0),
            (3, 4, 0.9, 2.0),
        ],
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn stop_output_stays_in_band(rho in 0.01..5.0f64, steps in prop::collection::vec(-3.0..3.0f64, 0..50)) {
        let mut s = StopState::relaxed(rho);
        for d in steps {
            s = s.step(d);
            prop_assert!(s.e.abs() <= rho);
        }
    }

    #[test]
    fn memory_chain_survives_every_update(values in turning_points()) {
        let mut mem = MainExtremaMemory::new(f64::INFINITY);
        for g in values {
            mem.update(g).unwrap();
            prop_assert!(mem.chain_holds(), "{:?}", mem.extrema());
            prop_assert_eq!(mem.current(), g);
        }
    }

    #[test]
    fn memory_formula_reproduces_stop_sums(pairs in stops(), values in turning_points()) {
        let pi = PiOperator::from_pairs(&pairs).unwrap();
        let curve = pi.loading_curve();
        let signal = Signal::from_values(&values).unwrap();
        let direct = pi.apply_direct(&signal);
        let mut mem = MainExtremaMemory::new(f64::INFINITY);
        for (g, d) in signal.values().iter().zip(&direct) {
            mem.update(*g).unwrap();
            let m = memory_evaluate(&curve, &mem, EvalMode::Extend).unwrap();
            prop_assert!((m - d).abs() <= 1e-9 * d.abs().max(1.0));
        }
    }

    #[test]
    fn curve_round_trips_through_stops(pairs in stops()) {
        let curve = PiOperator::from_pairs(&pairs).unwrap().loading_curve();
        let back = curve.to_pi().unwrap().loading_curve();
        prop_assert!(curve.max_abs_diff(&back) <= 1e-12);
    }

    #[test]
    fn inverse_composes_to_identity(slopes in prop::collection::vec(0.1..4.0f64, 1..6), tail in 0.1..2.0f64) {
        let mut pts = vec![(0.0, 0.0)];
        for (k, s) in slopes.iter().enumerate() {
            let (x, y) = pts[k];
            pts.push((x + 0.5, y + 0.5 * s));
        }
        let c = LoadingCurve::new(pts, tail).unwrap();
        let inv = c.inverse().unwrap();
        for x in [-3.0, -0.7, 0.0, 0.3, 1.1, 2.9, 7.0] {
            prop_assert!((inv.eval(c.eval(x)) - x).abs() <= 1e-12 * x.abs().max(1.0));
        }
    }

    #[test]
    fn sweep_is_rate_independent_and_odd(values in prop::collection::vec(-3.0..3.0f64, 1..8), warp in 0.2..5.0f64) {
        let net = triangle();
        let geom = ConfigurationGeometry::build(&net).unwrap();
        let cfg = SimulationConfig {
            max_dg: 0.05,
            projection: ProjectionConfig { projector: Projector::Dykstra, ..Default::default() },
        };
        let signal = Signal::from_values(&values).unwrap();
        let base = simulate(&net, &geom, &signal, &cfg).unwrap();
        let slow = signal.reparametrized(|t| warp * t + t * t).unwrap();
        let other = simulate(&net, &geom, &slow, &cfg).unwrap();
        prop_assert_eq!(base.len(), other.len());
        for (a, b) in base.iter().zip(&other) {
            prop_assert!(max_abs_diff(&a.sigma, &b.sigma) <= 1e-10);
        }
        let mirrored = simulate(&net, &geom, &signal.negated(), &cfg).unwrap();
        for (a, b) in base.iter().zip(&mirrored) {
            let neg: Vec<f64> = b.sigma.iter().map(|x| -x).collect();
            prop_assert!(max_abs_diff(&a.sigma, &neg) <= 1e-12);
            prop_assert!(geom.validate_balance(&a.sigma, 1e-9));
        }
    }

    #[test]
    fn vector_memory_agrees_per_coordinate(values in prop::collection::vec(-1.0..1.0f64, 1..12)) {
        let net = SpringNetwork::new(
            5,
            &[(1, 2, 1.0, 1.0), (2, 5, 2.0, 1.5), (1, 3, 0.5, 0.7), (3, 4, 1.5, 2.0), (4, 5, 1.0, 0.9)],
        )
        .unwrap();
        let geom = ConfigurationGeometry::build(&net).unwrap();
        let trace = trace_loading_polyline(&geom, &TraceConfig::default()).unwrap();
        let l = trace.length();
        let mut mem = MainExtremaMemory::new(l);
        for v in values {
            mem.update(v * l).unwrap();
        }
        let u = trace.memory_evaluate(&mem, EvalMode::Strict).unwrap();
        for i in 0..geom.dim() {
            let pts = trace.distances().iter().zip(trace.points()).map(|(&d, b)| (d, b[i])).collect();
            let coord = LoadingCurve::new(pts, 0.0).unwrap();
            let scalar = memory_evaluate(&coord, &mem, EvalMode::Strict).unwrap();
            prop_assert!((scalar - u[i]).abs() <= 1e-12);
        }
    }
}
