//! The JSON wire format of step functions is consumed by the CLI and by
//! test fixtures; pin its exact shape.

use cadlag_limits_core::StepFunction;
use serde_json::json;

#[test]
fn step_function_json_shape() {
    let f = StepFunction::new(2, vec![0.0, 0.0], vec![(0.5, vec![2.0, -3.0])]).unwrap();
    let value = serde_json::to_value(&f).unwrap();
    assert_eq!(
        value,
        json!({
            "dim": 2,
            "initial": [0.0, 0.0],
            "jumps": [{"t": 0.5, "v": [2.0, -3.0]}]
        })
    );
}

#[test]
fn step_function_json_read_back() {
    let text = r#"{"dim":1,"initial":[1.5],"jumps":[{"t":0.25,"v":[2.0]},{"t":0.75,"v":[0.0]}]}"#;
    let f: StepFunction = serde_json::from_str(text).unwrap();
    assert_eq!(f.eval(0.5).unwrap(), vec![2.0]);
    assert_eq!(f.eval(0.8).unwrap(), vec![0.0]);
    assert_eq!(f.eval(0.0).unwrap(), vec![1.5]);
}

#[test]
fn invalid_json_paths_are_rejected() {
    // Decreasing jump times.
    let bad = r#"{"dim":1,"initial":[0.0],"jumps":[{"t":0.5,"v":[1.0]},{"t":0.25,"v":[2.0]}]}"#;
    assert!(serde_json::from_str::<StepFunction>(bad).is_err());
    // Null jump.
    let bad = r#"{"dim":1,"initial":[0.0],"jumps":[{"t":0.5,"v":[0.0]}]}"#;
    assert!(serde_json::from_str::<StepFunction>(bad).is_err());
}
