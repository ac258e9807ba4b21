use std::io::Write;
use std::process::{Command, Output, Stdio};

use higgs_cli::commands::{cmd_check, cmd_dim, cmd_jh, cmd_rays, cmd_sweep, Mode, Options};
use higgs_cli::doc::{PairDocument, SweepDocument};
use higgs_cli::from_json;
use serde_json::{json, Value};

fn pair(text: &str) -> PairDocument {
    from_json(text).unwrap()
}

fn sweep(text: &str) -> SweepDocument {
    from_json(text).unwrap()
}

fn higgs(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_higgs"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn stable_sl2_pair_in_both_modes() {
    let doc = pair(r#"{"group":"SLnC","n":2,"degrees":[1,-1],"supp":[[2,1]]}"#);
    let out = cmd_check(&doc, Mode::Both, &Options::default());
    assert_eq!(out.exit, 0);
    assert_eq!(out.report["verdict"], "stable");
    assert_eq!(out.report["general"]["verdict"], "stable");
    assert_eq!(out.report["simplified"]["verdict"], "stable");
    assert_eq!(out.report["agreement"], json!({ "semistable": true, "stable": true }));
    assert!(out.report["engine"].get("elapsed_ms").is_none());
}

#[test]
fn unstable_pair_carries_a_destabilizing_certificate() {
    // No field, unbalanced degrees: the summand of degree 1 destabilizes.
    let doc = pair(r#"{"group":"SLnC","n":2,"degrees":[1,-1]}"#);
    let out = cmd_check(&doc, Mode::General, &Options::default());
    assert_eq!(out.exit, 0);
    assert_eq!(out.report["verdict"], "unstable");
    let cert = &out.report["certificate"];
    assert_eq!(cert["kind"], "destabilizer");
    assert!(cert["value"].as_str().unwrap().starts_with('-'));
    assert!(out.report.get("simplified").is_none());
}

#[test]
fn zero_field_sp2r_at_slope_is_stable() {
    let doc = pair(r#"{"group":"Sp2nR","n":1,"degrees":[0],"alpha":"mu"}"#);
    let out = cmd_check(&doc, Mode::Both, &Options::default());
    assert_eq!(out.exit, 0);
    assert_eq!(out.report["verdict"], "stable");
    assert_eq!(out.report["alpha"], "0");
}

#[test]
fn malformed_degrees_name_the_field() {
    let out = higgs(&["check", "-"], r#"{"group":"SLnC","n":2,"degrees":[1,"x"]}"#);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["diagnostics"][0]["field"], "degrees[1]");

    let out = higgs(&["check", "-"], r#"{"group":"SLnC","n":2,"degrees":[1,0]}"#);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["diagnostics"][0]["field"], "degrees");

    let out = higgs(&["check", "-"], r#"{"group":"SLnC","n":2,"degrees":[0,0],"colour":1}"#);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn rays_of_the_full_flag_on_empty_rank_four_symplectic() {
    let doc = pair(r#"{"group":"Sp2nC","n":2,"degrees":[0,0,0,0]}"#);
    let flag = vec![vec![1], vec![2], vec![3], vec![4]];
    let out = cmd_rays(&doc, Some(&flag), &Options::default());
    assert_eq!(out.exit, 0);
    assert_eq!(out.report["rays"], json!([[-1, -1, 1, 1], [-1, 0, 0, 1]]));
    assert_eq!(out.report["oracle"]["agrees"], true);
}

#[test]
fn trivial_flag_has_no_rays() {
    let doc = pair(r#"{"group":"SLnC","n":3,"degrees":[1,0,-1],"flag":[[1,2,3]]}"#);
    let out = cmd_rays(&doc, None, &Options::default());
    assert_eq!(out.exit, 0);
    assert_eq!(out.report["rays"], json!([]));
    assert_eq!(out.report["lineality"], json!([]));
}

#[test]
fn non_isotropic_flag_is_rejected() {
    // {1, 4} pairs with itself under the symplectic form.
    let doc = pair(r#"{"group":"Sp2nC","n":2,"degrees":[0,0,0,0]}"#);
    let out = cmd_rays(&doc, Some(&[vec![1, 4], vec![2, 3]]), &Options::default());
    assert_eq!(out.exit, 1);
    assert_eq!(out.report["diagnostics"][0]["field"], "flag");
}

#[test]
fn dimension_table() {
    for (group, n, genus, dim) in [("Sp2nR", 1, 2, 3), ("Sp2nR", 2, 2, 10), ("SLnC", 2, 3, 6), ("SLnC", 3, 2, 8), ("Sp2nC", 1, 3, 6)] {
        let out = cmd_dim(group, n, genus, None);
        assert_eq!(out.exit, 0);
        assert_eq!(out.report["dimension"], dim, "{group} {n} {genus}");
    }
    assert_eq!(cmd_dim("GLnR", 2, 2, None).exit, 1);
    assert_eq!(cmd_dim("SLnC", 2, 1, None).report["diagnostics"][0]["field"], "genus");
    assert_eq!(cmd_dim("SLnC", 2, 2, Some((2, 1))).report["euler_char"]["value"], -1);
}

#[test]
fn jordan_holder_of_a_mixed_pair() {
    let doc = pair(
        r#"{"group":"Sp2nR","n":4,"degrees":[0,0,0,0],
            "beta_supp":[[2,3],[3,2],[4,4]],"gamma_supp":[[2,3],[3,2],[4,4]]}"#,
    );
    let out = cmd_jh(&doc, &Options::default());
    assert_eq!(out.exit, 0);
    let labels: Vec<&str> = out.report["factors"].as_array().unwrap().iter().map(|f| f["label"].as_str().unwrap()).collect();
    let mut sorted = labels.clone();
    sorted.sort();
    assert_eq!(sorted, vec!["Sp(2,R)", "U(1)", "U(1,1)"]);
    assert!(out.report["factors"].as_array().unwrap().iter().all(|f| f["stable"] == true));
    let r = &out.report["reassembly"];
    assert_eq!(r["matches"], true);
    assert_eq!(r["hash"], r["input_hash"]);
}

#[test]
fn jordan_holder_rejects_unstable_pairs() {
    let doc = pair(r#"{"group":"Sp2nR","n":1,"degrees":[1],"alpha":"0"}"#);
    let out = cmd_jh(&doc, &Options::default());
    assert_eq!(out.exit, 1);
    assert_eq!(out.report["verdict"], "unstable");
    assert!(out.report["certificate"].is_object());

    let not_real = pair(r#"{"group":"SLnC","n":2,"degrees":[0,0]}"#);
    assert_eq!(cmd_jh(&not_real, &Options::default()).exit, 1);
}

#[test]
fn sweep_agrees_and_respects_the_budget() {
    let doc = sweep(r#"{"group":"SLnC","n_max":2,"d_min":-1,"d_max":1}"#);
    let out = cmd_sweep(&doc, &Options::default());
    assert_eq!(out.exit, 0);
    assert_eq!(out.report["instances"], 34);
    assert_eq!(out.report["agreement"]["semistable_rate"], "1");
    assert_eq!(out.report["disagreements"], json!([]));

    let capped = cmd_sweep(&doc, &Options { budget: Some(5), ..Options::default() });
    assert_eq!(capped.exit, 1);
    assert_eq!(capped.report["diagnostics"][0]["field"], "budget");
}

#[test]
fn empty_ranges_are_not_errors() {
    let doc = sweep(r#"{"group":"Sp2nR","n_min":3,"n_max":2,"d_min":0,"d_max":0}"#);
    let out = cmd_sweep(&doc, &Options::default());
    assert_eq!(out.exit, 0);
    assert_eq!(out.report["instances"], 0);
    assert_eq!(out.report["agreement"]["semistable_rate"], Value::Null);
}

#[test]
fn output_is_byte_identical_across_job_counts() {
    let spec = r#"{"group":"Sp2nR","n_max":2,"d_min":-1,"d_max":1,"alphas":["0","mu"]}"#;
    let one = higgs(&["--jobs", "1", "sweep", "-"], spec);
    let four = higgs(&["--jobs", "4", "sweep", "-"], spec);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
}

mod documents {
    use higgs_cli::doc::PairDocument;
    use higgs_core::stability::Alpha;
    use higgs_core::sweep::{pattern_bits, pattern_from_mask};
    use higgs_core::{Group, HiggsPair, Rat};
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn documents_round_trip(
            n in 1usize..=3,
            raw in prop::collection::vec(-3i64..=3, 3),
            mask in any::<u64>(),
            num in -4i64..=4,
            den in 1i64..=3,
        ) {
            let group = Group::Sp2nR;
            let mask = u128::from(mask) & ((1u128 << pattern_bits(group, n)) - 1);
            let pair = HiggsPair::new(group, raw[..n].to_vec(), pattern_from_mask(group, n, mask));
            let alpha = Alpha::Value(Rat::new(num, den));
            let text = serde_json::to_string(&PairDocument::from_pair(&pair, Some(alpha)).to_json()).unwrap();
            let doc: PairDocument = higgs_cli::from_json(&text).unwrap();
            let (back, back_alpha) = doc.to_pair(false).unwrap();
            prop_assert_eq!(back, pair);
            prop_assert_eq!(back_alpha, alpha);
        }
    }
}
