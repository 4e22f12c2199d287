use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dyadic-sparse")).args(args).output().expect("binary runs")
}

#[test]
fn csv_output_is_byte_reproducible() {
    let args = ["domination", "--depth", "6", "--seeds", "3", "--functions", "3", "--seed", "11"];
    let (a, b) = (run(&args), run(&args));
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with("seed,functions,trivial,cubes,"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn out_file_json_and_plot_data() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("buckley.json");
    let plots = dir.path().join("plots");
    let r = run(&[
        "buckley",
        "--depth",
        "7",
        "--p",
        "2",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
        "--plotdata",
        plots.to_str().unwrap(),
    ]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    assert!(r.stdout.is_empty());
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(json["experiment"], "buckley");
    assert_eq!(json["rows"].as_array().unwrap().len(), 4);
    let plot = std::fs::read_to_string(plots.join("buckley_maximal_ratio.dat")).unwrap();
    assert_eq!(plot.lines().count(), 5);
    assert!(plot.lines().skip(1).all(|l| l.split(' ').count() == 2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("refinement_delta = "));
}

#[test]
fn sharpness_reports_the_slope_on_stderr() {
    let r = run(&["sharpness", "--deltas", "0.4,0.2", "--depth", "12"]);
    assert!(r.status.success());
    let err = String::from_utf8_lossy(&r.stderr);
    assert!(err.contains("ratio_slope = "), "{err}");
    assert!(String::from_utf8_lossy(&r.stdout)
        .starts_with("delta,ap_constant,f_norm_pow,f_norm,ta_norm,ratio,lower_bound\n"));
}

#[test]
fn parameter_errors_exit_with_two() {
    assert_eq!(run(&["sharpness", "--p", "0.5"]).status.code(), Some(2));
    assert_eq!(run(&["sharpness", "--deltas", "0.7,0.2"]).status.code(), Some(2));
    assert_eq!(run(&["endpoint", "--omega", "nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn resolution_errors_exit_with_three() {
    let r = run(&["sharpness", "--deltas", "0.4,0.2", "--depth", "6"]);
    assert_eq!(r.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&r.stderr).contains("octaves"));
}

#[test]
fn zero_input_rows_are_flagged_trivial() {
    let r = run(&["domination", "--depth", "6", "--seeds", "2", "--zero-input"]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let text = String::from_utf8(r.stdout).unwrap();
    for row in text.lines().skip(1) {
        let cells: Vec<&str> = row.split(',').collect();
        assert_eq!((cells[2], cells[3]), ("1", "0"), "{row}");
    }
}
