use std::process::{Command, Output};

use sedosc::table::EstimateTable;
use sedosc_cli::output::{Cell, ValueTable};

fn sedosc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sedosc")).args(args).output().expect("binary runs")
}

fn sedosc_threads(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sedosc"))
        .args(args)
        .env("SEDOSC_THREADS", threads)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn value(args: &[&str]) -> f64 {
    let o = sedosc(args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    stdout(&o).trim().parse().unwrap()
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

#[test]
fn oracle_examples() {
    assert_eq!(value(&["oracle", "--quantity", "L2", "--side", "classical", "--T", "0"]), 1.5);
    assert_eq!(value(&["oracle", "--quantity", "H2", "--side", "quantum", "--T", "0"]), 0.25);
    let z = value(&["oracle", "--quantity", "Z", "--T", "1"]);
    assert!((z - 1.0 / (2.0 * 0.5f64.sinh())).abs() < 1e-11);
    assert_eq!(value(&["oracle", "--quantity", "coth", "--T", "0"]), 1.0);
    assert_eq!(value(&["oracle", "--quantity", "EP", "--T", "0"]), 0.0);
    let e = value(&["oracle", "--quantity", "E", "--temperature", "1", "--omega", "2"]);
    assert!((e - 1.0 / 1f64.tanh()).abs() < 1e-11);
    let lz = value(&["oracle", "--quantity", "Lz2", "--side", "quantum", "--T", "0"]);
    assert_eq!(lz, 0.0);
    let rho = value(&["oracle", "--quantity", "rho0", "--x", "0"]);
    assert!((rho - std::f64::consts::FRAC_1_PI.sqrt()).abs() < 1e-11);
    let x4 = value(&["oracle", "--quantity", "x4", "--T", "0"]);
    assert!((x4 - 0.75).abs() < 1e-15);
}

#[test]
fn oracle_prints_twelve_significant_digits() {
    let o = sedosc(&["oracle", "--quantity", "H", "--T", "1"]);
    assert_eq!(stdout(&o), "1.08197670687\n");
}

#[test]
fn invalid_combinations_exit_two_naming_the_constraint() {
    let cases: [(&[&str], &str); 6] = [
        (&["oracle", "--quantity", "Z", "--side", "classical"], "side=quantum"),
        (&["oracle", "--quantity", "L2", "--dims", "1"], "dims=3"),
        (&["oracle", "--quantity", "H", "--T", "-1"], "temperature"),
        (&["oracle", "--quantity", "Q"], "unknown quantity"),
        (&["oracle", "--quantity", "H", "--mass", "0"], "mass"),
        (&["simulate", "--dt", "0.5"], "dt*omega0"),
    ];
    for (args, needle) in cases {
        let o = sedosc(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stderr(&o).contains(needle), "{args:?}: {}", stderr(&o));
    }
    let o = sedosc(&["sample", "--bogus", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = sedosc_threads(&["oracle", "--quantity", "H"], "zero");
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("SEDOSC_THREADS"));
}

#[test]
fn config_file_precedence_and_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("oracle.cfg");
    std::fs::write(&cfg, "# thermal query\nquantity = H\nT = 1\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    assert_eq!(stdout(&sedosc(&["oracle", "--config", cfg])), "1.08197670687\n");
    // The flag wins over the file.
    assert_eq!(stdout(&sedosc(&["oracle", "--config", cfg, "--T", "0"])), "0.5\n");

    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "quantity=H\nsteps=10\n").unwrap();
    let o = sedosc(&["oracle", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown config key `steps`"));
}

#[test]
fn compare_matches_golden_and_constant_differences() {
    let o = sedosc(&["compare", "--temps", "0,1,10", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text, golden("compare.csv"));
    let t = ValueTable::from_csv(&text).unwrap();
    for c in t.column("H2_diff").unwrap() {
        assert!((c.as_f64().unwrap() - 0.25).abs() < 1e-12);
    }
    for c in t.column("L2_diff").unwrap() {
        assert!((c.as_f64().unwrap() - 1.5).abs() < 1e-12);
    }
    assert_eq!(t.column("L2_quantum").unwrap()[0], Cell::Num(0.0));
    assert!(t.column("diff_constant").unwrap().iter().all(|c| *c == Cell::Bool(true)));
}

#[test]
fn algebra_suite_passes() {
    let o = sedosc(&["algebra"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for needle in ["PASS  poisson     {L_x, L_y} = L_z", "[L^2, L_x] = 0", "[x_x, p_x] = i*hbar"] {
        assert!(text.contains(needle), "missing {needle}:\n{text}");
    }
    assert!(!text.contains("FAIL"));
    let o = sedosc(&["algebra", "--check", "poisson", "--format", "csv"]);
    assert_eq!(stdout(&o), golden("algebra_poisson.csv"));
    let o = sedosc(&["algebra", "--check", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_outputs() {
    let o = sedosc(&["sweep", "--quantity", "H2", "--side", "quantum", "--from", "0", "--to", "2", "--points", "5"]);
    assert_eq!(stdout(&o), golden("sweep_h2_quantum.csv"));

    let o = sedosc(&["sweep", "--quantity", "L2", "--from", "1", "--to", "100", "--points", "9", "--spacing", "log"]);
    let t = ValueTable::from_csv(&stdout(&o)).unwrap();
    let temps: Vec<f64> = t.column("T").unwrap().iter().map(|c| c.as_f64().unwrap()).collect();
    assert!(temps.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(*temps.last().unwrap(), 100.0);
    let last = t.rows.last().unwrap()[1].as_f64().unwrap();
    assert!((last / (6.0 * 100.0f64.powi(2)) - 1.0).abs() < 1.7e-5);

    let o = sedosc(&["sweep", "--quantity", "H", "--from", "0", "--to", "0.05", "--points", "6"]);
    let t = ValueTable::from_csv(&stdout(&o)).unwrap();
    assert_eq!(t.columns, ["T", "value"]);
    assert!(t.rows.iter().all(|r| (r[1].as_f64().unwrap() - 0.5).abs() < 1e-8));

    let o = sedosc(&["sweep", "--quantity", "EP", "--from", "0", "--to", "1", "--points", "11"]);
    let t = ValueTable::from_csv(&stdout(&o)).unwrap();
    let v: Vec<f64> = t.column("value").unwrap().iter().map(|c| c.as_f64().unwrap()).collect();
    assert_eq!(v[0], 0.0);
    assert!(v.windows(2).all(|w| w[0] <= w[1]) && v[1] < 1e-4);

    for bad in [["--points", "1"], ["--to", "0"]] {
        let mut args = vec!["sweep", "--quantity", "H"];
        args.extend(bad);
        assert_eq!(sedosc(&args).status.code(), Some(2), "{bad:?}");
    }
}

#[test]
fn sample_rows_and_round_trips() {
    let o = sedosc(&["sample", "--dims", "3", "--T", "0", "--n", "200000", "--seed", "7", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = stdout(&o);
    let t = EstimateTable::from_csv(&csv).unwrap();
    assert_eq!(t.get("<L^2>").unwrap().reference, Some(1.5));
    assert_eq!(t.to_csv().unwrap(), csv);

    let o = sedosc(&["sample", "--dims", "1", "--T", "1", "--n", "200000", "--format", "json", "--law", "true"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let json = stdout(&o);
    assert!(json.contains("\"energy_law_passed\""));
    let t = EstimateTable::from_json(&json).unwrap();
    assert_eq!(t.get("<H^2>/<H>^2").unwrap().reference, Some(2.0));
    let again = t.to_json("sample", &[]).unwrap();
    assert_eq!(EstimateTable::from_json(&again).unwrap(), t);
}

#[test]
fn sample_writes_points_and_matches_chunked_path() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("pts.csv");
    let base = ["sample", "--dims", "3", "--n", "5000", "--seed", "3", "--format", "csv"];
    let chunked = stdout(&sedosc(&base));
    let mut args = base.to_vec();
    args.extend(["--samples", pts.to_str().unwrap()]);
    assert_eq!(stdout(&sedosc(&args)), chunked);
    let text = std::fs::read_to_string(&pts).unwrap();
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 5001);
}

#[test]
fn outputs_are_byte_identical_across_runs_and_thread_counts() {
    let args = ["sample", "--dims", "3", "--T", "0.5", "--n", "100000", "--seed", "11", "--format", "json"];
    let a = sedosc_threads(&args, "1");
    let b = sedosc_threads(&args, "4");
    let c = sedosc(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let args = ["sample", "--dims", "1", "--n", "100000", "--seed", "11", "--chunks", "3"];
    let d = sedosc(&args);
    let mut more = args.to_vec();
    more[8] = "13";
    assert_eq!(d.stdout, sedosc(&more).stdout);
}

#[test]
fn simulate_reports_and_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let traj = dir.path().join("traj.bin");
    let table = dir.path().join("table.csv");
    let args = [
        "simulate",
        "--T",
        "1",
        "--tau",
        "4e-3",
        "--steps",
        "1000000",
        "--seed",
        "5",
        "--trajectory",
        traj.to_str().unwrap(),
        "--output",
        table.to_str().unwrap(),
        "--format",
        "csv",
    ];
    let o = sedosc(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
    let t = EstimateTable::from_csv(&std::fs::read_to_string(&table).unwrap()).unwrap();
    let h = t.get("<H>").unwrap();
    assert!((h.reference.unwrap() - 1.081976706869).abs() < 1e-9);
    assert!(h.z.unwrap().abs() < 5.0);
    let bin = std::fs::read(&traj).unwrap();
    assert_eq!(&bin[..8], b"ZPFTRAJ\0");
    let first = std::fs::read(&table).unwrap();
    assert_eq!(sedosc(&args).status.code(), Some(0));
    assert_eq!(std::fs::read(&table).unwrap(), first);

    let text = stdout(&sedosc(&["simulate", "--tau", "4e-3", "--steps", "1000000"]));
    assert!(text.starts_with("# mass=1\n"));
    assert!(text.contains("<H>"));
}

#[test]
fn tiny_samples_trip_the_statistical_exit_code() {
    // With two points the standard errors are themselves noisy, so some seeds
    // give |z| > 5. Every run must exit with 0 or 3 and report the failure.
    let mut failures = 0;
    for seed in 0..40 {
        let o = sedosc(&["sample", "--n", "2", "--T", "1", "--seed", &seed.to_string(), "--format", "csv"]);
        let t = EstimateTable::from_csv(&stdout(&o)).unwrap();
        match o.status.code() {
            Some(3) => {
                failures += 1;
                assert!(t.max_abs_z() > 5.0);
                assert!(stderr(&o).contains("statistical failure"));
            }
            Some(0) => assert!(t.max_abs_z() <= 5.0),
            other => panic!("unexpected exit {other:?}"),
        }
    }
    assert!(failures > 0);
    let o = sedosc(&["sample", "--n", "1000", "--law", "true", "--T", "0"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn help_exits_zero() {
    let o = sedosc(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("simulate"));
}
