use std::process::{Command, Output};

use serde_json::{json, Value};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_billiards"))
        .args(args)
        .env_remove("BILLIARD_SIM_CAP")
        .env_remove("BILLIARD_ENUM_CAP")
        .output()
        .unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn crossing_reports_box_metadata() {
    let out = run(&["crossing", "--sides", "4,3", "--point", "1,1"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["m"], 2);
    assert_eq!(v["method"], "csp");
    assert_eq!(v["ell"], 12);
    assert_eq!(v["scale"], 1);
    assert_eq!(v["convention"], "visits-exclude-start");
    assert_eq!(v["sides"], json!([4, 3]));
}

#[test]
fn crossing_both_agrees() {
    for (point, m) in [("1,1", 2), ("1,2", 0), ("0,0", 1), ("4,0", 1), ("4,3", 0)] {
        let out = run(&["crossing", "--sides", "4,3", "--point", point, "--method", "both"]);
        assert!(out.status.success(), "{point}");
        let v = json_of(&out);
        assert_eq!(v["agree"], true);
        assert_eq!(v["m"], m, "{point}");
        assert_eq!(v["simulated"]["m"], m, "{point}");
    }
}

#[test]
fn corners_use_convention() {
    let v = json_of(&run(&["crossing", "--sides", "4,3", "--point", "0,3"]));
    assert_eq!(v["m"], 0);
    assert_eq!(v["method"], "corner-convention");
}

#[test]
fn rational_input_is_rescaled() {
    let v = json_of(&run(&["crossing", "--sides", "3/2,1", "--point", "1/2,1/2"]));
    assert_eq!(v["sides"], json!([3, 2]));
    assert_eq!(v["scale"], 2);
    assert_eq!(v["lattice_point"], json!([1, 1]));
    assert_eq!(v["box"], json!(["3/2", "1"]));

    // the point forces a finer scale than the box alone
    let v = json_of(&run(&["crossing", "--sides", "3,5", "--point", "1/2,1/2"]));
    assert_eq!(v["sides"], json!([6, 10]));
    assert_eq!(v["m"], 1);
}

#[test]
fn times_lists_steps() {
    let v = json_of(&run(&["times", "--sides", "4,3", "--point", "1,1"]));
    assert_eq!(v["times"], json!([1, 7]));
    let v = json_of(&run(&["times", "--sides", "2,6", "--point", "2,6", "--method", "both"]));
    assert_eq!(v["times"], json!([6]));
    assert_eq!(v["agree"], true);
    let v = json_of(&run(&["times", "--sides", "2,6", "--point", "0,0"]));
    assert_eq!(v["times"], json!([]));
}

#[test]
fn simulate_csv_has_one_row_per_step() {
    let out = run(&["simulate", "--sides", "2,6", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,v1,v2");
    assert_eq!(lines.len(), 7);
    assert_eq!(lines[6], "6,2,6");
}

#[test]
fn simulate_json_visits() {
    let v = json_of(&run(&["simulate", "--sides", "4,3"]));
    assert_eq!(v["t_final"], 12);
    assert_eq!(v["end_corner"], json!([4, 0]));
    let visits = v["visits"].as_array().unwrap();
    let total: u64 = visits.iter().map(|x| x["count"].as_u64().unwrap()).sum();
    assert_eq!(total, 12);
    let p11 = visits.iter().find(|x| x["point"] == json!([1, 1])).unwrap();
    assert_eq!(p11["times"], json!([1, 7]));
}

#[test]
fn svg_is_deterministic() {
    let args = ["simulate", "--sides", "4,3", "--format", "svg", "--unfolded", "--colored"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with("<svg"));
    assert!(text.contains("stroke-dasharray"));

    let plain = String::from_utf8(run(&["simulate", "--sides", "4,3", "--format", "svg"]).stdout).unwrap();
    assert!(plain.contains(r#"points="0,0 3,3 4,2 2,0 0,2 1,3 4,0""#));
}

#[test]
fn svg_needs_two_dimensions() {
    let out = run(&["simulate", "--sides", "4,3,2", "--format", "svg"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bounce_tables() {
    let v = json_of(&run(&["bounce", "--sides", "4,3", "--check"]));
    assert_eq!(v["by_k"], json!([3, 5, 2]));
    assert_eq!(v["agree"], true);
    let v = json_of(&run(&["bounce", "--sides", "4,6"]));
    assert_eq!(v["method"], "enumeration");
    assert!(v["notice"].as_str().unwrap().contains("skipped"));
}

#[test]
fn verify_family_and_explicit() {
    let out = run(&["verify", "--max-dim", "2", "--max-side", "5"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["boxes_checked"], 30);
    assert_eq!(v["clean"], true);

    let out = run(&["verify", "--sides", "4,3", "--sides", "2,6,5"]);
    assert!(out.status.success());
    assert_eq!(json_of(&out)["boxes_checked"], 2);
}

#[test]
fn exit_codes() {
    // usage
    assert_eq!(run(&["crossing", "--sides", "4,0", "--point", "1,1"]).status.code(), Some(1));
    assert_eq!(run(&["crossing", "--sides", "4,3", "--point", "5,1"]).status.code(), Some(1));
    assert_eq!(run(&["crossing", "--sides", "4,x", "--point", "1,1"]).status.code(), Some(1));
    assert_eq!(run(&["crossing", "--sides", "4,3", "--point", "1,1,1"]).status.code(), Some(1));
    assert_eq!(run(&["verify"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));

    // cap refusal
    let out = run(&["--sim-cap", "5", "simulate", "--sides", "4,3"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("use analytic method"));
    let out = Command::new(env!("CARGO_BIN_EXE_billiards"))
        .args(["crossing", "--sides", "4,3", "--point", "1,1", "--method", "simulate"])
        .env("BILLIARD_SIM_CAP", "11")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(run(&["--sim-cap", "5", "verify", "--sides", "4,3"]).status.code(), Some(3));
    assert_eq!(run(&["--enum-cap", "5", "bounce", "--sides", "4,6"]).status.code(), Some(3));

    // analytic queries ignore the simulation cap
    let out = run(&["--sim-cap", "5", "crossing", "--sides", "4,3", "--point", "1,1"]);
    assert!(out.status.success());
}

#[test]
fn bench_skips_simulation_over_cap() {
    let out = run(&["--sim-cap", "100", "bench", "--sides", "2,3,5,7", "--point", "1,1,1,1", "--repeat", "3"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["simulate_ns"], "skipped");
    assert_eq!(v["analytic_m"], 8);
}

#[test]
fn documented_examples() {
    let v = json_of(&run(&["simulate", "--sides", "1,3/4"]));
    assert_eq!(v["scale"], 4);
    assert_eq!(v["polyline"], json!([[0, 0], [3, 3], [4, 2], [2, 0], [0, 2], [1, 3], [4, 0]]));

    assert_eq!(json_of(&run(&["crossing", "--sides", "2,6", "--point", "2,4"]))["m"], 0);

    let v = json_of(&run(&["verify", "--max-dim", "3", "--max-side", "5", "--max-lcm", "1000"]));
    assert_eq!(v["clean"], true);
    assert_eq!(v["complete"], true);
    let v = json_of(&run(&["verify", "--sides", "4,3"]));
    assert_eq!(v["points_checked"], 20);
    assert_eq!(v["mismatches"], json!([]));
    assert_eq!(json_of(&run(&["verify", "--sides", "2,4"]))["clean"], true);

    assert_eq!(json_of(&run(&["bounce", "--sides", "1,1"]))["by_k"], json!([0, 0, 2]));
    let v = json_of(&run(&["bounce", "--sides", "2,6"]));
    assert_eq!(v["method"], "enumeration");
}
