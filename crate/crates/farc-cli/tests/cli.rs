//! End-to-end tests of the `farc` binary: output formats, exit codes, and
//! determinism.

use farc_cli::io::{self, format_significant, DISPLAY_SIG_DIGITS};
use farc_cli::materials;
use farc_core::measurement::GridPolicy;
use farc_core::measurement::MeasurementGrid;
use farc_core::reflection::{statfarc_eval, IncidenceGeometry, MaterialClass};
use std::process::{Command, Output};

fn farc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_farc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is UTF-8")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("process exits normally")
}

#[test]
fn eval_fresnel_glass_normal_incidence() {
    let out = farc(&[
        "eval",
        "--model",
        "fresnel",
        "--material",
        "glass",
        "--theta",
        "0",
        "--freq",
        "260",
    ]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("magnitude: 0.303337"), "{text}");
    assert!(text.contains("re: -0.303337"), "{text}");
}

#[test]
fn eval_statfarc_matches_library_bit_for_bit() {
    let out = farc(&[
        "eval",
        "--model",
        "statfarc",
        "--material",
        "glass",
        "--theta",
        "40",
        "--freq",
        "260",
    ]);
    assert_eq!(exit_code(&out), 0);
    let entry = materials::find("glass").unwrap();
    let geom = IncidenceGeometry::new(40.0, 260.0).unwrap();
    let gamma = statfarc_eval(&entry.stat_params(), &geom);
    let expected = format!(
        "magnitude: {}\nre: {}\nim: {}\n",
        format_significant(gamma.magnitude(), DISPLAY_SIG_DIGITS),
        format_significant(gamma.re(), DISPLAY_SIG_DIGITS),
        format_significant(gamma.im(), DISPLAY_SIG_DIGITS),
    );
    assert_eq!(stdout(&out), expected);
}

#[test]
fn eval_unknown_material_exits_2() {
    let out = farc(&[
        "eval",
        "--model",
        "fresnel",
        "--material",
        "unobtainium",
        "--theta",
        "0",
        "--freq",
        "260",
    ]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("unknown material"));
}

#[test]
fn eval_invalid_angle_and_frequency_exit_2() {
    let out = farc(&[
        "eval",
        "--model",
        "fresnel",
        "--material",
        "glass",
        "--theta",
        "95",
        "--freq",
        "260",
    ]);
    assert_eq!(exit_code(&out), 2);
    let out = farc(&[
        "eval",
        "--model",
        "fresnel",
        "--material",
        "glass",
        "--theta",
        "40",
        "--freq",
        "0",
    ]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn eval_explicit_parameter_validation() {
    // Explicit statistical parameters work without a material.
    let out = farc(&[
        "eval",
        "--model",
        "statfarc",
        "--class",
        "non-metallic",
        "--a",
        "-15.45",
        "--b",
        "3.93",
        "--c",
        "3.97",
        "--d",
        "0.06",
        "--theta",
        "40",
        "--freq",
        "260",
    ]);
    assert_eq!(exit_code(&out), 0);

    // Metallic parameters must not carry c.
    let out = farc(&[
        "eval", "--model", "statfarc", "--class", "metallic", "--a", "-15.31", "--b", "6.26",
        "--c", "4.0", "--d", "0.002", "--theta", "40", "--freq", "260",
    ]);
    assert_eq!(exit_code(&out), 2);

    // Material and explicit parameters conflict.
    let out = farc(&[
        "eval",
        "--model",
        "fresnel",
        "--material",
        "glass",
        "--delta",
        "3.5",
        "--theta",
        "0",
        "--freq",
        "260",
    ]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn sweep_default_grid_round_trips() {
    let out = farc(&["sweep", "--model", "statfarc", "--material", "glass"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 73, "header plus 72 grid rows");
    assert!(text.starts_with("frequency_ghz,theta_deg,gamma_mag\n"));

    // Reload what the sweep wrote and rewrite it: byte-identical.
    let dataset = io::load_samples_csv(
        text.as_bytes(),
        "glass",
        MaterialClass::NonMetallic,
        MeasurementGrid::standard(),
        GridPolicy::Strict,
    )
    .expect("sweep output loads strictly");
    let mut rewritten = Vec::new();
    io::write_dataset_csv(&mut rewritten, &dataset).unwrap();
    assert_eq!(text.as_bytes(), rewritten.as_slice());
}

#[test]
fn sweep_angle_range_spec() {
    let out = farc(&[
        "sweep",
        "--model",
        "statfarc",
        "--material",
        "glass",
        "--angles",
        "10:80:1",
    ]);
    assert_eq!(exit_code(&out), 0);
    // 71 angles per frequency, 9 standard frequencies, plus the header.
    assert_eq!(stdout(&out).lines().count(), 1 + 71 * 9);
}

#[test]
fn sweep_plasterboard_grows_beyond_50_degrees() {
    let out = farc(&[
        "sweep",
        "--model",
        "statfarc",
        "--material",
        "plasterboard",
        "--angles",
        "50:80:10",
    ]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    let mut by_freq: std::collections::BTreeMap<String, Vec<f64>> = Default::default();
    for line in text.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        by_freq
            .entry(fields[0].to_string())
            .or_default()
            .push(fields[2].parse().unwrap());
    }
    assert_eq!(by_freq.len(), 9);
    for (freq, magnitudes) in by_freq {
        assert!(
            magnitudes.windows(2).all(|w| w[0] <= w[1]),
            "non-monotone at {freq} GHz: {magnitudes:?}"
        );
    }
}

#[test]
fn sweep_unwritable_path_exits_3() {
    let out = farc(&[
        "sweep",
        "--model",
        "statfarc",
        "--material",
        "glass",
        "--output",
        "/nonexistent-dir/out.csv",
    ]);
    assert_eq!(exit_code(&out), 3);
}

#[test]
fn fit_round_trip_through_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("glass.csv");
    let out = farc(&[
        "sweep",
        "--model",
        "statfarc",
        "--material",
        "glass",
        "--output",
        csv_path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);

    let out = farc(&[
        "fit",
        "--input",
        csv_path.to_str().unwrap(),
        "--class",
        "non-metallic",
        "--seed",
        "7",
    ]);
    assert_eq!(exit_code(&out), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["material"], "glass");
    assert_eq!(report["class"], "non-metallic");
    assert!(report["rmse"].as_f64().unwrap() < 1e-6);
    assert_eq!(report["n_samples"], 72);
}

#[test]
fn fit_underdetermined_csv_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("three.csv");
    std::fs::write(
        &path,
        "frequency_ghz,theta_deg,gamma_mag\n220,10,0.2\n260,40,0.3\n320,80,0.6\n",
    )
    .unwrap();
    let out = farc(&[
        "fit",
        "--input",
        path.to_str().unwrap(),
        "--class",
        "non-metallic",
    ]);
    assert_eq!(exit_code(&out), 2);
    assert!(
        stderr(&out).contains("under-determined"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn fit_duplicate_row_exits_2_naming_the_row() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dup.csv");
    std::fs::write(
        &path,
        "frequency_ghz,theta_deg,gamma_mag\n220,10,0.2\n260,40,0.3\n260,40,0.4\n320,80,0.6\n",
    )
    .unwrap();
    let out = farc(&[
        "fit",
        "--input",
        path.to_str().unwrap(),
        "--class",
        "non-metallic",
    ]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("row 4"), "{}", stderr(&out));
}

#[test]
fn fit_off_grid_needs_the_permissive_flag() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("glass.csv");
    let out = farc(&[
        "sweep",
        "--model",
        "statfarc",
        "--material",
        "glass",
        "--freqs",
        "220,240,260,270,280,300",
        "--output",
        csv_path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);

    let strict = farc(&[
        "fit",
        "--input",
        csv_path.to_str().unwrap(),
        "--class",
        "non-metallic",
    ]);
    assert_eq!(exit_code(&strict), 2);
    assert!(stderr(&strict).contains("off the declared grid"));

    let permissive = farc(&[
        "fit",
        "--input",
        csv_path.to_str().unwrap(),
        "--class",
        "non-metallic",
        "--permissive",
    ]);
    assert_eq!(exit_code(&permissive), 0);
}

#[test]
fn fit_exits_zero_when_not_converged() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("glass.csv");
    farc(&[
        "sweep",
        "--model",
        "statfarc",
        "--material",
        "glass",
        "--output",
        csv_path.to_str().unwrap(),
    ]);
    // One iteration per local search cannot converge; status is carried in
    // the report, not the exit code.
    let out = farc(&[
        "fit",
        "--input",
        csv_path.to_str().unwrap(),
        "--class",
        "non-metallic",
        "--max-iterations",
        "1",
        "--starts-per-dim",
        "1",
    ]);
    assert_eq!(exit_code(&out), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["converged"], false);
}

#[test]
fn fit_is_byte_deterministic_given_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("glass.csv");
    farc(&[
        "sweep",
        "--model",
        "statfarc",
        "--material",
        "glass",
        "--output",
        csv_path.to_str().unwrap(),
    ]);
    let args = [
        "fit",
        "--input",
        csv_path.to_str().unwrap(),
        "--class",
        "non-metallic",
        "--seed",
        "7",
        "--random-starts",
        "3",
    ];
    let first = farc(&args);
    let second = farc(&args);
    assert_eq!(exit_code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn convert_reference_geometry_and_db() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("power.csv");
    std::fs::write(
        &path,
        "frequency_ghz,theta_deg,p_r,p_ref,d_t_m,d_r_m,d_ref_m\n260,40,1.0,1.0,0.05,0.05,0.10\n",
    )
    .unwrap();
    let out = farc(&["convert", "--input", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("260.000000,40.0000000,1.00000000"));

    // -3 dB relative to a 0 dB reference: sqrt(10^-0.3).
    std::fs::write(
        &path,
        "frequency_ghz,theta_deg,p_r,p_ref,d_t_m,d_r_m,d_ref_m\n260,40,-3,0,0.05,0.05,0.10\n",
    )
    .unwrap();
    let out = farc(&["convert", "--input", path.to_str().unwrap(), "--db"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("0.707945784"), "{}", stdout(&out));
}

#[test]
fn convert_missing_column_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("power.csv");
    std::fs::write(
        &path,
        "frequency_ghz,theta_deg,p_r,p_ref,d_t_m,d_r_m\n260,40,1.0,1.0,0.05,0.05\n",
    )
    .unwrap();
    let out = farc(&["convert", "--input", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn convert_warns_when_magnitude_exceeds_unity() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("power.csv");
    std::fs::write(
        &path,
        "frequency_ghz,theta_deg,p_r,p_ref,d_t_m,d_r_m,d_ref_m\n260,40,4.0,1.0,0.05,0.05,0.10\n",
    )
    .unwrap();
    let out = farc(&["convert", "--input", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    assert!(stderr(&out).contains("exceeds 1"), "{}", stderr(&out));
    assert!(stdout(&out).contains("2.00000000"));
}

#[test]
fn convert_missing_input_exits_3() {
    let out = farc(&["convert", "--input", "/nonexistent-dir/power.csv"]);
    assert_eq!(exit_code(&out), 3);
}

#[test]
fn materials_table_and_json() {
    let out = farc(&["materials"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("glass"));
    assert!(text.contains("3.5"));
    assert!(text.contains("0.006"));
    assert!(text.contains("plasterboard"));
    assert!(text.contains("-15.66"));
    assert!(text.contains("aluminium-alloy"));

    let out = farc(&["materials", "--json"]);
    assert_eq!(exit_code(&out), 0);
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let entries = parsed.as_array().unwrap();
    assert_eq!(entries.len(), 5);
    let aluminium = entries
        .iter()
        .find(|e| e["name"] == "aluminium-alloy")
        .unwrap();
    assert!(aluminium["params"]["c"].is_null());
    assert_eq!(aluminium["perfect_conductor"], true);
    let plasterboard = entries
        .iter()
        .find(|e| e["name"] == "plasterboard")
        .unwrap();
    assert_eq!(plasterboard["params"]["a"], -15.66);
    assert_eq!(plasterboard["params"]["b"], 3.57);
    assert_eq!(plasterboard["params"]["c"], 4.33);
    assert_eq!(plasterboard["params"]["d"], 0.10);
}
