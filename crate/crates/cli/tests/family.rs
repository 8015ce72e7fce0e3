use ncps_cli::config::{parse_list, theta_matrix};
use ncps_cli::family::FamilySpec;
use ncps_cli::report::{CheckReport, Level, Status};
use ncps_core::symbol::FamilyKind;
use ncps_num::NumericFamily;

#[test]
fn conformal_file_gives_both_models() {
    let spec = FamilySpec::from_json(
        r#"{"kind":"conformal","dim":2,"t_order":1,"generators":[{"name":"w"}],"weyl_factor":"w",
            "numeric":{"weyl_factor":[{"mode":[1,0],"re":0.1},{"mode":[-1,0],"re":0.1}]}}"#,
    )
    .unwrap();
    let f = spec.operator_family().unwrap();
    assert_eq!(f.t_cap(), 1);
    match f.kind() {
        FamilyKind::Conformal { weyl_factor } => assert_eq!(weyl_factor.name(), "w"),
        other => panic!("{:?}", other),
    }
    assert!(matches!(spec.numeric_family().unwrap(), NumericFamily::ConformalDirac { .. }));
}

#[test]
fn coupled_defaults_and_rejections() {
    let spec = FamilySpec::from_json(r#"{"kind":"coupled","dim":3}"#).unwrap();
    assert_eq!(spec.operator_family().unwrap().name(), "coupled_dirac");
    assert!(spec.numeric_family().is_err());
    // undeclared potential
    let bad = FamilySpec::from_json(r#"{"kind":"coupled","dim":2,"generators":[{"name":"A1"}],"potentials":["A1","A2"]}"#).unwrap();
    assert!(bad.operator_family().is_err());
    // non-self-adjoint potentials are refused by the engine
    let free = FamilySpec::from_json(
        r#"{"kind":"coupled","dim":2,"generators":[{"name":"A1","self_adjoint":false},{"name":"A2"}]}"#,
    )
    .unwrap();
    assert!(free.operator_family().is_err());
    assert!(FamilySpec::from_json(r#"{"kind":"coupled","dim":3,"colour":"red"}"#).is_err());
    assert!(FamilySpec::from_json(r#"{"kind":"conformal","dim":3,"generators":[{"name":"h"},{"name":"h"}]}"#)
        .unwrap()
        .operator_family()
        .is_err());
}

#[test]
fn unitary_flow_parameter_is_rational() {
    let spec = FamilySpec::from_json(r#"{"kind":"unitary_flow","dim":3,"k":[1,0,0],"t":"2/3"}"#).unwrap();
    match spec.operator_family().unwrap().kind() {
        FamilyKind::UnitaryFlow { t, .. } => assert_eq!(t.to_string(), "2/3"),
        other => panic!("{:?}", other),
    }
    let bad = FamilySpec::from_json(r#"{"kind":"unitary_flow","dim":3,"k":[1,0,0],"t":"0.5"}"#).unwrap();
    assert!(bad.operator_family().is_err());
    assert!(FamilySpec::from_json(r#"{"kind":"unitary_flow","dim":3}"#).unwrap().operator_family().is_err());
}

#[test]
fn flag_lists_and_theta() {
    assert_eq!(parse_list::<i64>("--u", "1, 0,-1").unwrap(), vec![1, 0, -1]);
    assert!(parse_list::<i64>("--u", "1,a").is_err());
    let t = theta_matrix(&[0.1, 0.2, 0.3], 3).unwrap();
    assert_eq!(t.entries()[1][2], 0.3);
    assert_eq!(t.entries()[2][0], -0.2);
    assert_eq!(theta_matrix(&[0.4], 3).unwrap().entries()[0][1], 0.4);
    assert!(theta_matrix(&[0.1, 0.2], 3).is_err());
}

#[test]
fn report_invariants() {
    let mut r = CheckReport::new("x", Default::default());
    assert_eq!(r.status.exit_code(), 0);
    assert!(r.witness.is_none());
    r.fail("first");
    r.fail("second");
    assert_eq!(r.status, Status::Fail);
    assert_eq!(r.witness.as_deref(), Some("first"));
    assert_eq!(r.status.exit_code(), 1);
    assert_eq!(Status::Error.exit_code(), 2);
    assert_eq!(Level::Density.weakest(Level::Tau), Level::Tau);
    assert_eq!(Level::None.weakest(Level::Trace), Level::None);
    let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(json["vanishing_level"], "n-a");
    assert_eq!(json["status"], "fail");
}
