//! Property tests for the path algebra and the metric axioms on random
//! step functions.

use proptest::prelude::*;

use cadlag_limits_core::metrics::{m1_distance, uniform_distance, weak_m1_distance};
use cadlag_limits_core::StepFunction;

const TOL: f64 = 1e-3;

/// Random step function with up to five jumps, values in [-1, 1], jump
/// times on a millesimal grid inside (0,1). Null jumps are dropped rather
/// than rejected so shrinking stays well behaved.
fn step_fn(dim: usize) -> impl Strategy<Value = StepFunction> {
    let times = prop::collection::btree_set(10usize..990, 0..=5);
    let values = prop::collection::vec(-1.0f64..1.0, 18);
    (times, values).prop_map(move |(times, values)| {
        let initial = values[0..dim].to_vec();
        let mut jumps = Vec::new();
        let mut prev = initial.clone();
        for (i, t) in times.into_iter().enumerate() {
            let row = values[(i + 1) * dim..(i + 2) * dim].to_vec();
            if row != prev {
                prev = row.clone();
                jumps.push((t as f64 / 1000.0, row));
            }
        }
        StepFunction::new(dim, initial, jumps).expect("well-formed jumps")
    })
}

/// Nondecreasing scalar step function ending at one.
fn monotone_unit() -> impl Strategy<Value = StepFunction> {
    let times = prop::collection::btree_set(10usize..990, 1..=5);
    let values = prop::collection::vec(0.01f64..1.0, 6);
    (times, values).prop_map(|(times, incr)| {
        let k = times.len();
        let total: f64 = incr[..k].iter().sum();
        let mut acc = 0.0;
        let mut jumps = Vec::new();
        for (i, t) in times.into_iter().enumerate() {
            acc += incr[i] / total;
            jumps.push((t as f64 / 1000.0, vec![acc.min(1.0)]));
        }
        if let Some(last) = jumps.last_mut() {
            last.1 = vec![1.0];
        }
        StepFunction::new(1, vec![0.0], jumps).expect("monotone jumps")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn graph_order_is_respected(f in step_fn(2)) {
        prop_assert!(f.completed_graph().verify_order(&f));
    }

    #[test]
    fn left_limit_matches_eval_off_jumps(f in step_fn(2), t in 0.001f64..1.0) {
        // The grid times are multiples of 1e-3; t avoids them a.s.
        prop_assume!(f.jump_times().iter().all(|&s| (s - t).abs() > 1e-9));
        prop_assert_eq!(f.left_limit(t).unwrap(), f.eval(t).unwrap());
    }

    #[test]
    fn linear_combination_norm_bound(f in step_fn(3), c in prop::array::uniform3(-2.0f64..2.0)) {
        prop_assume!(c.iter().any(|&w| w != 0.0));
        let lc = f.linear_combination(&c).unwrap();
        let l1: f64 = c.iter().map(|w| w.abs()).sum();
        prop_assert!(lc.sup_norm() <= l1 * f.sup_norm() + 1e-12);
    }

    #[test]
    fn basis_combination_is_projection(f in step_fn(3), j in 0usize..3) {
        let mut e = [0.0; 3];
        e[j] = 1.0;
        let lc = f.linear_combination(&e).unwrap();
        prop_assert_eq!(lc, f.project(j).unwrap());
    }

    #[test]
    fn serde_round_trip(f in step_fn(2)) {
        let json = serde_json::to_string(&f).unwrap();
        let back: StepFunction = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(f, back);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn m1_symmetry_and_identity(x in step_fn(1), y in step_fn(1)) {
        let xy = m1_distance(&x, &y, TOL).unwrap();
        let yx = m1_distance(&y, &x, TOL).unwrap();
        prop_assert_eq!(xy.value, yx.value);
        prop_assert!(m1_distance(&x, &x, TOL).unwrap().value <= TOL);
        prop_assert!(xy.lower_bound <= xy.value && xy.value <= xy.upper_bound);
    }

    #[test]
    fn m1_triangle_within_slack(x in step_fn(1), y in step_fn(1), z in step_fn(1)) {
        let xz = m1_distance(&x, &z, TOL).unwrap().value;
        let xy = m1_distance(&x, &y, TOL).unwrap().value;
        let yz = m1_distance(&y, &z, TOL).unwrap().value;
        prop_assert!(xz <= xy + yz + 3.0 * TOL, "{} vs {} + {}", xz, xy, yz);
    }

    #[test]
    fn weak_m1_dominated_by_uniform(x in step_fn(2), y in step_fn(2)) {
        let d = weak_m1_distance(&x, &y, TOL).unwrap();
        let u = uniform_distance(&x, &y).unwrap();
        prop_assert!(d.value <= u + TOL, "d_p {} uniform {}", d.value, u);
    }

    #[test]
    fn monotone_pairs_stay_bracketed(x in monotone_unit(), y in monotone_unit()) {
        let d = m1_distance(&x, &y, TOL).unwrap();
        let u = uniform_distance(&x, &y).unwrap();
        prop_assert!(d.value <= u + TOL);
        prop_assert!(d.lower_bound >= 0.0);
    }
}
