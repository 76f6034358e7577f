use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn tra(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tra")).args(args).env_remove("TRA_DEFAULT_TRUNCATION").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Data rows of a CSV table, header dropped.
fn csv_rows(o: &Output) -> Vec<Vec<String>> {
    stdout(o).lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn coulomb_spectrum_rows() {
    let o = tra(&["spectrum", "--case", "coulomb", "--Z", "1", "--ell", "0", "--m-max", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().next(), Some("m,E,E_oracle,abs_diff"));
    let rows = csv_rows(&o);
    assert_eq!(rows.len(), 3);
    for (row, want) in rows.iter().zip([-0.5, -0.125, -1.0 / 18.0]) {
        assert!((num(&row[1]) - want).abs() < 1e-15);
        assert!(num(&row[3]) < 1e-3 * want.abs());
    }
}

#[test]
fn oscillator_spectrum_p_wave() {
    let o = tra(&["spectrum", "--case", "oscillator", "--omega", "1", "--ell", "1", "--m-max", "0"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = csv_rows(&o);
    assert_eq!(rows.len(), 1);
    assert_eq!(num(&rows[0][1]), 2.5);
}

#[test]
fn shallow_morse_has_no_bound_states() {
    let o = tra(&["spectrum", "--case", "morse", "--v1", "0.25", "--lambda", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("NoBoundStates"), "{}", stderr(&o));
}

#[test]
fn domain_error_in_json_mode_is_structured() {
    let o = tra(&["spectrum", "--case", "morse", "--v1", "0.1", "--lambda", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 0);
    assert_eq!(v["diagnostics"][0]["level"], "error");
    assert!(v["diagnostics"][0]["message"].as_str().unwrap().starts_with("NoBoundStates"));
}

#[test]
fn coulomb_phase_shift_single_energy() {
    let o = tra(&["phaseshift", "--case", "coulomb", "--Z", "1", "--ell", "0", "--energy", "0.5"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = csv_rows(&o);
    assert_eq!(rows.len(), 1);
    assert!((num(&rows[0][1]) - 0.301640).abs() < 1e-6);
}

#[test]
fn phase_shift_grid_and_bad_grids() {
    let o = tra(&["phaseshift", "--case", "morse", "--v1", "1", "--e-min", "0.1", "--e-max", "1", "--points", "4"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(csv_rows(&o).len(), 4);
    let o = tra(&["phaseshift", "--case", "morse", "--v1", "1", "--energy", "0.5,0.2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("ConfigError"));
    let o = tra(&["phaseshift", "--case", "morse", "--v1", "1", "--e-min", "0.1", "--e-max", "1", "--points", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let o = tra(&["phaseshift", "--case", "oscillator", "--energy", "1"]);
    assert!(stderr(&o).contains("NoContinuum"));
}

#[test]
fn polytable_degree_zero_is_one() {
    let o = tra(&["polytable", "--family", "meixner", "--nu", "0", "--tau", "0.25", "--z", "3", "--n-max", "0"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), "n,P_n\n0,1.0000000000000000e0\n");
}

#[test]
fn polytable_finite_family_bounds() {
    let o = tra(&["polytable", "--family", "krawtchouk", "--N", "4", "--tau", "0.3", "--z", "2", "--n-max", "4"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(csv_rows(&o).len(), 5);
    let o = tra(&["polytable", "--family", "krawtchouk", "--N", "4", "--tau", "0.3", "--z", "2", "--n-max", "5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("IndexOutOfValidity"));
}

#[test]
fn coulomb_continuum_matches_meixner_pollaczek() {
    let o = tra(&["match", "--case", "coulomb", "--Z", "1", "--lambda", "1", "--energy", "0.5"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = csv_rows(&o);
    let get = |k: &str| rows.iter().find(|r| r[0] == k).map(|r| r[1].clone()).unwrap();
    assert_eq!(get("family"), "MeixnerPollaczek");
    // kappa = 1, lambda = 1: cos theta = (4 - 1) / (4 + 1).
    assert!((num(&get("cos_theta")) - 0.6).abs() < 1e-12);
    assert!((num(&get("family_value")) - 1.0).abs() < 1e-12);
}

#[test]
fn raw_ode_match() {
    let o = tra(&[
        "match", "--equation", "laguerre", "--ode-a", "0.3", "--ode-b", "0.4", "--a-plus", "1.2", "--a-minus", "-0.5", "--a-zero", "0.7",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("family,MeixnerPollaczek"));
    let o = tra(&["match", "--case", "coulomb", "--equation", "laguerre", "--energy", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_passes_and_fails_with_status() {
    let o = tra(&["verify"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(csv_rows(&o).iter().all(|r| r[3] == "1"));
    let o = tra(&["verify", "--case", "eckart", "--A", "2", "--B", "-30", "--m-max", "1"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let o = tra(&["verify", "--case", "coulomb", "--m-max", "0", "--tolerance", "1e-14"]);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
}

#[test]
fn hydrogen_wavefunction_profile() {
    let o = tra(&["wavefunction", "--case", "coulomb", "--r-min", "0.5", "--r-max", "4", "--points", "8"]);
    assert!(o.status.success(), "{}", stderr(&o));
    for row in csv_rows(&o) {
        let r = num(&row[0]);
        assert!((num(&row[2]) - 2.0 * r * (-r).exp()).abs() < 1e-8, "{row:?}");
    }
}

#[test]
fn output_is_byte_stable() {
    let args = ["wavefunction", "--case", "poschl-teller", "--A", "2", "--B", "-100", "--level", "1", "--points", "9"];
    let a = tra(&args);
    let b = tra(&args);
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let mut json = args.to_vec();
    json.extend(["--format", "json"]);
    assert_eq!(tra(&json).stdout, tra(&json).stdout);
}

#[test]
fn json_output_reruns_as_config() {
    let first = scratch("phase.json");
    let o = tra(&["phaseshift", "--case", "eckart", "--A", "2", "--B", "-30", "--e-min", "16", "--e-max", "20", "--points", "3", "--format", "json", "--out", first.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let second = scratch("phase_again.json");
    let o = tra(&["--config", first.to_str().unwrap(), "--out", second.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(std::fs::read(&first).unwrap(), std::fs::read(&second).unwrap());
    // Flags override file values.
    let o = tra(&["--config", first.to_str().unwrap(), "--format", "csv", "--points", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(csv_rows(&o).len(), 2);
}

#[test]
fn truncation_from_environment() {
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_tra"));
        c.args(["wavefunction", "--case", "coulomb", "--energy", "0.5", "--points", "2", "--format", "json"]).args(extra);
        match env {
            Some(v) => c.env("TRA_DEFAULT_TRUNCATION", v),
            None => c.env_remove("TRA_DEFAULT_TRUNCATION"),
        };
        let o = c.output().unwrap();
        assert!(o.status.success(), "{}", stderr(&o));
        serde_json::from_str::<Value>(&stdout(&o)).unwrap()["config"]["truncation"].as_u64().unwrap()
    };
    assert_eq!(run(None, &[]), 60);
    assert_eq!(run(Some("25"), &[]), 25);
    assert_eq!(run(Some("25"), &["--truncation", "30"]), 30);
}

#[test]
fn unknown_config_key_is_rejected() {
    let path = scratch("bad.json");
    std::fs::write(&path, r#"{"command":"spectrum","case":"coulomb","charge_typo":1}"#).unwrap();
    let o = tra(&["--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("ConfigError"));
}
