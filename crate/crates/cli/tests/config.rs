//! Config-file parsing and validation behaviour.

use simkv_cli::{parse_config_str, ConfigError, ModelConfig, ScheduleConfig};

#[test]
fn reference_nnet_setup_parses_and_validates() {
    // dt = 0.5, T = 1e6, gamma = 0.0025, sigma^2/2 = 0.05, lambda = 4^-4.
    let cfg = parse_config_str(
        r#"{
            "model": {"type": "nnet", "K": 16, "L_trunc": 30.0,
                      "sigma2_half": 0.05, "gamma": 0.0025},
            "schedule": {"type": "constant", "lambda": 0.00390625},
            "dt": 0.5, "T": 1e6, "reps": 100, "master_seed": 1
        }"#,
    )
    .unwrap();
    assert_eq!(cfg.dt, 0.5);
    assert_eq!(cfg.horizon, 1e6);
    assert_eq!(cfg.reps, 100);
    assert_eq!(cfg.record_stride, 100);
    assert_eq!(cfg.burn_in, 5e5);
    assert!(matches!(cfg.model, ModelConfig::Nnet { k: 16, .. }));
    assert!(matches!(cfg.schedule, ScheduleConfig::Constant { .. }));
}

#[test]
fn annealing_schedule_parses_by_wire_name() {
    let cfg = parse_config_str(
        r#"{
            "model": {"type": "gaussian", "d": 1},
            "schedule": {"type": "paper_annealing"},
            "dt": 0.5, "T": 100.0, "reps": 1, "master_seed": 0
        }"#,
    )
    .unwrap();
    assert!(matches!(
        cfg.schedule,
        ScheduleConfig::PowerOfFourAnnealing
    ));
    let schedule = cfg.schedule.build().unwrap();
    assert_eq!(schedule.value_at(0.0).unwrap(), 0.0625);
}

#[test]
fn unit_lambda_dt_is_rejected_with_a_stability_message() {
    let err = parse_config_str(
        r#"{
            "model": {"type": "gaussian", "d": 1},
            "schedule": {"type": "constant", "lambda": 2.0},
            "dt": 0.5, "T": 10.0, "reps": 1, "master_seed": 0
        }"#,
    )
    .unwrap_err();
    let message = err.to_string();
    assert!(message.contains("stability"), "message: {message}");
    assert!(message.contains("lambda*dt"), "message: {message}");
}

#[test]
fn missing_model_section_is_an_error() {
    let err = parse_config_str(
        r#"{
            "schedule": {"type": "constant", "lambda": 0.5},
            "dt": 0.1, "T": 10.0, "reps": 1, "master_seed": 0
        }"#,
    )
    .unwrap_err();
    assert!(err.to_string().contains("model"), "message: {err}");
}

#[test]
fn unknown_keys_are_rejected() {
    let err = parse_config_str(
        r#"{
            "model": {"type": "gaussian", "d": 1},
            "schedule": {"type": "constant", "lambda": 0.5},
            "dt": 0.1, "T": 10.0, "reps": 1, "master_seed": 0,
            "typo_field": 3
        }"#,
    )
    .unwrap_err();
    assert!(err.to_string().contains("typo_field"), "message: {err}");
}

#[test]
fn custom_schedule_accepts_the_inf_sentinel() {
    let cfg = parse_config_str(
        r#"{
            "model": {"type": "gaussian", "d": 1},
            "schedule": {"type": "custom", "segments": [
                {"duration": 16.0, "value": 0.0625},
                {"duration": "inf", "value": 0.015625}
            ]},
            "dt": 0.1, "T": 1000.0, "reps": 1, "master_seed": 0
        }"#,
    )
    .unwrap();
    let schedule = cfg.schedule.build().unwrap();
    assert_eq!(schedule.value_at(15.9).unwrap(), 0.0625);
    assert_eq!(schedule.value_at(16.0).unwrap(), 0.015625);
    assert!(schedule.covers(1e9));
}

#[test]
fn custom_schedule_must_cover_the_horizon() {
    let err = parse_config_str(
        r#"{
            "model": {"type": "gaussian", "d": 1},
            "schedule": {"type": "custom", "segments": [
                {"duration": 16.0, "value": 0.0625}
            ]},
            "dt": 0.1, "T": 1000.0, "reps": 1, "master_seed": 0
        }"#,
    )
    .unwrap_err();
    assert!(matches!(err, ConfigError::Invalid { field: "schedule", .. }));
}

#[test]
fn increasing_custom_schedule_is_rejected() {
    let err = parse_config_str(
        r#"{
            "model": {"type": "gaussian", "d": 1},
            "schedule": {"type": "custom", "segments": [
                {"duration": 16.0, "value": 0.0625},
                {"duration": "inf", "value": 0.25}
            ]},
            "dt": 0.1, "T": 100.0, "reps": 1, "master_seed": 0
        }"#,
    )
    .unwrap_err();
    assert!(err.to_string().contains("non-increasing"), "message: {err}");
}

#[test]
fn burn_in_beyond_horizon_is_rejected() {
    let err = parse_config_str(
        r#"{
            "model": {"type": "gaussian", "d": 1},
            "schedule": {"type": "constant", "lambda": 0.5},
            "dt": 0.1, "T": 10.0, "reps": 1, "master_seed": 0,
            "burn_in": 20.0
        }"#,
    )
    .unwrap_err();
    assert!(matches!(err, ConfigError::Invalid { field: "burn_in", .. }));
}
