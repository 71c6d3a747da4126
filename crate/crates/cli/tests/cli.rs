//! End-to-end tests of the `crossmap` binary: formats, determinism, and
//! the exit-code contract.

use std::io::Write;
use std::process::{Command, Output};

fn crossmap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crossmap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_lines(output: &Output) -> Vec<String> {
    String::from_utf8_lossy(&output.stdout)
        .lines()
        .map(String::from)
        .collect()
}

#[test]
fn grid28_reproduces_784_points() {
    let output = crossmap(&[
        "gen",
        "--target",
        "sphere:2",
        "--sampler",
        "grid:28",
        "--format",
        "csv",
    ]);
    assert!(output.status.success());
    let lines = stdout_lines(&output);
    assert_eq!(lines.len(), 785); // header + 28^2 rows
    assert_eq!(lines[0], "x0,x1,x2");
    for line in &lines[1..] {
        let row: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        let norm: f64 = row.iter().map(|c| c * c).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-12);
    }
}

#[test]
fn gen_is_deterministic_across_runs() {
    let args = [
        "gen",
        "--target",
        "ball:3",
        "--sampler",
        "random",
        "--count",
        "10",
        "--seed",
        "7",
    ];
    let first = crossmap(&args);
    let second = crossmap(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn halton_on_cp2_emits_unit_rows() {
    let output = crossmap(&[
        "gen",
        "--target",
        "cp:2",
        "--sampler",
        "halton",
        "--count",
        "1000",
        "--format",
        "csv",
        "--verify",
    ]);
    assert!(output.status.success());
    let lines = stdout_lines(&output);
    assert_eq!(lines.len(), 1001);
    assert_eq!(lines[0], "x0,x1,x2,x3,x4,x5");
    let row: Vec<f64> = lines[500].split(',').map(|v| v.parse().unwrap()).collect();
    let norm: f64 = row.iter().map(|c| c * c).sum::<f64>().sqrt();
    assert!((norm - 1.0).abs() < 1e-12);
}

#[test]
fn stratified_sampler_fixes_count() {
    let output = crossmap(&[
        "gen",
        "--target",
        "ball:2",
        "--sampler",
        "stratified:5",
        "--seed",
        "3",
    ]);
    assert!(output.status.success());
    assert_eq!(stdout_lines(&output).len(), 26); // header + 5^2

    // Conflicting --count is a usage error.
    let clash = crossmap(&[
        "gen",
        "--target",
        "ball:2",
        "--sampler",
        "stratified:5",
        "--count",
        "7",
    ]);
    assert_eq!(clash.status.code(), Some(2));
}

#[test]
fn exit_codes() {
    // 2: bad flags / unparseable target.
    assert_eq!(
        crossmap(&["gen", "--target", "nope:1"]).status.code(),
        Some(2)
    );
    assert_eq!(crossmap(&["gen", "--bogus-flag"]).status.code(), Some(2));
    // 3: unwritable output path.
    let io = crossmap(&[
        "gen",
        "--target",
        "sphere:2",
        "--count",
        "4",
        "--out",
        "/nonexistent/dir/points.csv",
    ]);
    assert_eq!(io.status.code(), Some(3));
    // 4: numeric failure (radius outside the map's domain).
    let numeric = crossmap(&["rho", "--target", "sphere:2", "--r=-1"]);
    assert_eq!(numeric.status.code(), Some(4));
    // 1: designed validation failure.
    let warped = crossmap(&[
        "validate",
        "--target",
        "sphere:2",
        "--test",
        "radial-ks",
        "--n",
        "20000",
        "--warp",
    ]);
    assert_eq!(warped.status.code(), Some(1));
}

#[test]
fn validate_passes_on_honest_targets() {
    let run = crossmap(&[
        "validate",
        "--target",
        "sphere:3",
        "--test",
        "radial-ks",
        "--n",
        "100000",
        "--seed",
        "1",
    ]);
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    let lines = stdout_lines(&run);
    assert_eq!(lines.len(), 1);
    assert!(lines[0].starts_with("test=radial-ks"));
    assert!(lines[0].contains("passed=true"));

    let jacobian = crossmap(&["validate", "--target", "hp:1", "--test", "jacobian"]);
    assert!(jacobian.status.success());
}

#[test]
fn rho_table_shape_and_residuals() {
    let output = crossmap(&["rho", "--target", "sphere:2", "--r", "2"]);
    assert!(output.status.success());
    let lines = stdout_lines(&output);
    assert_eq!(lines.len(), 2);
    let fields: Vec<&str> = lines[1].split_whitespace().collect();
    let rho: f64 = fields[1].parse().unwrap();
    // 2 arccos(e^{-1}), the closed form at r = 2.
    assert!((rho - 2.388137637472643).abs() < 1e-10);
    let residual: f64 = fields[2].parse().unwrap();
    assert!(residual <= 1e-10);

    // Monotone rho column on the Cayley plane.
    let op2 = crossmap(&["rho", "--target", "op2", "--r-max", "5", "--steps", "20"]);
    assert!(op2.status.success());
    let mut previous = -1.0;
    for line in &stdout_lines(&op2)[1..] {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let rho: f64 = fields[1].parse().unwrap();
        let residual: f64 = fields[2].parse().unwrap();
        assert!(rho > previous);
        assert!(residual <= 1e-10);
        previous = rho;
    }
}

#[test]
fn grid_polylines_and_audit() {
    let output = crossmap(&[
        "grid",
        "--target",
        "sphere:2",
        "--k",
        "4",
        "--samples-per-line",
        "5",
    ]);
    assert!(output.status.success());
    let lines = stdout_lines(&output);
    // header + 2 * (k+1) lines * 5 vertices.
    assert_eq!(lines.len(), 1 + 2 * 5 * 5);
    assert_eq!(lines[0], "line,vertex,x0,x1,x2");

    let audit = crossmap(&[
        "grid",
        "--target",
        "sphere:2",
        "--k",
        "6",
        "--audit",
        "--n",
        "50000",
        "--out",
        "/dev/null",
    ]);
    assert!(
        audit.status.success(),
        "{}",
        String::from_utf8_lossy(&audit.stderr)
    );
    assert!(String::from_utf8_lossy(&audit.stderr).contains("passed=true"));

    // Polylines cannot be binary.
    let bin = crossmap(&[
        "grid", "--target", "sphere:2", "--k", "2", "--format", "bin",
    ]);
    assert_eq!(bin.status.code(), Some(2));
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gen.conf");
    let mut file = std::fs::File::create(&path).unwrap();
    writeln!(file, "# defaults\ntarget = ball:2\ncount = 5\nseed = 9").unwrap();
    drop(file);

    let from_config = crossmap(&["gen", "--config", path.to_str().unwrap()]);
    assert!(from_config.status.success());
    assert_eq!(stdout_lines(&from_config).len(), 6);

    // Flags override the file.
    let overridden = crossmap(&["gen", "--config", path.to_str().unwrap(), "--count", "2"]);
    assert!(overridden.status.success());
    assert_eq!(stdout_lines(&overridden).len(), 3);

    // Missing config file is an I/O error.
    let missing = crossmap(&["gen", "--config", "/nonexistent.conf", "--target", "ball:2"]);
    assert_eq!(missing.status.code(), Some(3));
}

#[test]
fn binary_format_header() {
    let output = crossmap(&[
        "gen", "--target", "sphere:2", "--count", "3", "--seed", "1", "--format", "bin",
    ]);
    assert!(output.status.success());
    let bytes = &output.stdout;
    assert_eq!(&bytes[0..4], b"CMAP");
    assert_eq!(u32::from_le_bytes(bytes[4..8].try_into().unwrap()), 1);
    assert_eq!(u32::from_le_bytes(bytes[8..12].try_into().unwrap()), 3);
    assert_eq!(u64::from_le_bytes(bytes[12..20].try_into().unwrap()), 3);
    assert_eq!(bytes.len(), 20 + 3 * 3 * 8);
}

#[test]
fn product_target_round_trip_through_cli() {
    let output = crossmap(&[
        "gen",
        "--target",
        "product:sphere:2+ball:3",
        "--count",
        "8",
        "--seed",
        "5",
        "--verify",
    ]);
    assert!(output.status.success());
    let lines = stdout_lines(&output);
    assert_eq!(lines[0], "x0,x1,x2,x3,x4,x5");
    assert_eq!(lines.len(), 9);
}
