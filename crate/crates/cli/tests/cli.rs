use std::path::Path;
use std::process::{Command, Output};

use sphereperc_cli::args::Format;
use sphereperc_cli::output::{read_file, HexRecord, LayoutRecord, SweepRecord};
use sphereperc_core::constellation::{full_coverage_layout, sample_constellation};
use sphereperc_core::hexlattice::{classify_cells, hex_lattice, CellAngle};
use sphereperc_core::percolation::{sweep_lenient, SweepSpec};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sphereperc"))
}

fn run(args: &[&str]) -> Output {
    bin()
        .args(args)
        .env_remove("SPHEREPERC_THREADS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analyze_reports_bounds() {
    let o = run(&["analyze", "--gamma-deg", "5.2", "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["n_l"], 17);
    assert_eq!(v["n_u"], 1435);
    assert_eq!(v["m"], 35);
    assert_eq!(v["layout_n"], 41);
    assert!((v["n_c"].as_f64().unwrap() - 336.5).abs() < 0.05);
    assert!((v["gamma_deg"].as_f64().unwrap() - 5.2).abs() < 1e-12);

    let o = run(&[
        "analyze",
        "--h",
        "550",
        "--elevation-deg",
        "40",
        "--N",
        "500",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("5.156865 deg"), "{text}");
    assert!(text.contains("h^c(N, d_m)"), "{text}");
}

#[test]
fn domain_and_config_errors_exit_2() {
    let o = run(&["analyze", "--gamma-deg", "200"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("gamma"));

    let o = run(&["analyze", "--h", "550", "--eta-deg", "80"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("eta"));

    let o = run(&["analyze"]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["simulate", "--gamma-deg", "5", "--N", "10", "--trials", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("trials"));

    let o = bin()
        .args(["analyze", "--gamma-deg", "5"])
        .env("SPHEREPERC_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "# sweep recipe\ngamma_deg = 5.2\ntrials = 40\nseed = 9\ncoupled = true\n",
    )
    .unwrap();
    let o = run(&[
        "simulate",
        "--config",
        path_str(&cfg),
        "--N",
        "300",
        "--trials",
        "30",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rec: Vec<SweepRecord> = csv::Reader::from_reader(o.stdout.as_slice())
        .deserialize()
        .collect::<Result<_, _>>()
        .unwrap();
    assert_eq!(rec[0].trials, 30);
    assert_eq!(rec[0].seed, 9);

    std::fs::write(&cfg, "gamma_deg = 5.2\nno_such_key = 1\n").unwrap();
    let o = run(&["simulate", "--config", path_str(&cfg), "--N", "300"]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::write(&cfg, "gamma_deg 5.2\n").unwrap();
    let o = run(&["simulate", "--config", path_str(&cfg), "--N", "300"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let gamma = 5.2_f64.to_radians();
    let expected = sweep_lenient(
        SweepSpec::Count { gamma },
        &[300.0, 400.0, 500.0, 600.0],
        60,
        5,
        true,
    )
    .unwrap()
    .rows;
    for (format, name) in [(Format::Csv, "csv"), (Format::Json, "json")] {
        let out = dir.path().join(format!("sweep.{name}"));
        let o = run(&[
            "sweep",
            "--axis",
            "N",
            "--from",
            "300",
            "--to",
            "600",
            "--step",
            "100",
            "--gamma-deg",
            "5.2",
            "--trials",
            "60",
            "--seed",
            "5",
            "--coupled",
            "--format",
            name,
            "--out",
            path_str(&out),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        let back: Vec<SweepRecord> = read_file(&out, format).unwrap();
        assert_eq!(back.len(), expected.len());
        for (r, e) in back.iter().zip(&expected) {
            assert_eq!(r.axis, "N");
            assert!(close(r.value, e.value));
            assert!(close(r.gamma_rad, e.gamma_rad));
            assert!(close(r.theta_hat, e.theta_hat));
            assert!(close(r.ci95, e.ci95));
            assert!(close(r.p_cov_analytic, e.p_cov_analytic));
            assert!(close(r.critical.unwrap(), e.critical.unwrap()));
            assert_eq!((r.trials, r.seed), (e.trials, e.seed));
        }
    }
}

#[test]
fn coupled_count_sweep_is_monotone() {
    let o = run(&[
        "sweep",
        "--axis",
        "N",
        "--from",
        "50",
        "--to",
        "600",
        "--step",
        "25",
        "--gamma-deg",
        "5.2",
        "--trials",
        "400",
        "--seed",
        "1",
        "--coupled",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows: Vec<SweepRecord> = csv::Reader::from_reader(o.stdout.as_slice())
        .deserialize()
        .collect::<Result<_, _>>()
        .unwrap();
    assert_eq!(rows.len(), 23);
    assert!(rows.windows(2).all(|w| w[1].theta_hat >= w[0].theta_hat));
}

#[test]
fn altitude_sweep_marks_critical_altitude_and_flags_infeasible_points() {
    let args = [
        "sweep",
        "--axis",
        "altitude",
        "--from",
        "300",
        "--to",
        "1200",
        "--step",
        "50",
        "--dm-km",
        "809.5",
        "--N",
        "500",
        "--trials",
        "100",
        "--seed",
        "1",
        "--coupled",
    ];
    let o = run(&args);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("infeasible altitude=850"));
    let rows: Vec<SweepRecord> = csv::Reader::from_reader(o.stdout.as_slice())
        .deserialize()
        .collect::<Result<_, _>>()
        .unwrap();
    assert_eq!(rows.len(), 11);
    assert!(rows.windows(2).all(|w| w[1].theta_hat <= w[0].theta_hat));
    for r in &rows {
        assert!((r.critical.unwrap() - 638.6).abs() < 0.05);
    }

    let mut skip = args.to_vec();
    skip.push("--skip-infeasible");
    let o = run(&skip);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn output_is_independent_of_worker_count() {
    let args = [
        "sweep",
        "--axis",
        "slant_range",
        "--from",
        "600",
        "--to",
        "1400",
        "--step",
        "200",
        "--h",
        "550",
        "--N",
        "500",
        "--trials",
        "150",
        "--seed",
        "11",
    ];
    let outputs: Vec<Vec<u8>> = ["1", "2", "5"]
        .iter()
        .map(|t| {
            let o = bin()
                .args(args)
                .env("SPHEREPERC_THREADS", t)
                .output()
                .unwrap();
            assert!(o.status.success(), "{}", stderr(&o));
            o.stdout
        })
        .collect();
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
    assert!(!outputs[0].is_empty());
}

#[test]
fn layout_file_and_audit() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("layout.csv");
    let o = run(&[
        "layout",
        "--gamma-deg",
        "5.2",
        "--audit-samples",
        "1000000",
        "--out",
        path_str(&out),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(
        stdout(&o).lines().any(|l| l.ends_with("uncovered=0")),
        "{}",
        stdout(&o)
    );

    let back: Vec<LayoutRecord> = read_file(&out, Format::Csv).unwrap();
    let (c, _) = full_coverage_layout(5.2_f64.to_radians()).unwrap();
    assert_eq!(back.len(), 1435);
    for (r, p) in back.iter().zip(&c.centers) {
        assert!(close(r.ux, p.x()) && close(r.uy, p.y()) && close(r.uz, p.z()));
    }
    let json = dir.path().join("layout.json");
    let o = run(&[
        "layout",
        "--gamma-deg",
        "5.2",
        "--format",
        "json",
        "--out",
        path_str(&json),
    ]);
    assert!(o.status.success());
    let back_json: Vec<LayoutRecord> = read_file(&json, Format::Json).unwrap();
    // Shortest round-trip formatting makes both encodings exact.
    assert_eq!(back_json, back);
    for (r, p) in back.iter().zip(&c.centers) {
        assert_eq!((r.ux, r.uy, r.uz), (p.x(), p.y(), p.z()));
    }
}

#[test]
fn hexgrid_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("hex.csv");
    let o = run(&[
        "hexgrid",
        "--gamma-deg",
        "5.2",
        "--N",
        "1000",
        "--a-km",
        "50",
        "--extent-km",
        "1500",
        "--seed",
        "4",
        "--out",
        path_str(&out),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let back: Vec<HexRecord> = read_file(&out, Format::Csv).unwrap();

    let c = sample_constellation(1000, 5.2_f64.to_radians(), 4).unwrap();
    let cells = hex_lattice(50.0, 1500.0).unwrap();
    let labels = classify_cells(&cells, &c, CellAngle::Exact).unwrap();
    assert_eq!(back.len(), cells.len());
    for ((r, cell), label) in back.iter().zip(&cells).zip(&labels) {
        assert_eq!((r.q, r.r), (cell.q, cell.r));
        assert!(close(r.center_x_km, cell.center.x) && close(r.center_y_km, cell.center.y));
        assert_eq!(r.label, label.to_string());
    }
    // A dense window mixes all three labels.
    for want in ["open_certified", "closed_certified", "undetermined"] {
        assert!(back.iter().any(|r| r.label == want), "no {want}");
    }
}
