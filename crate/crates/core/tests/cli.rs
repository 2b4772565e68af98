use std::path::Path;
use std::process::{Command, Output};

fn lrp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lrp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_then_diameter_prints_one_integer() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.lrp");
    let o = lrp(&[
        "generate", "--d", "1", "--n", "100", "--s", "2", "--beta", "1", "--seed", "7", "--trial", "0",
        "--out", path_str(&g),
    ]);
    assert!(o.status.success(), "{o:?}");
    let o = lrp(&["diameter", path_str(&g), "--mode", "exact"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 1);
    let d: u32 = text.trim().parse().unwrap();
    assert!((1..=100).contains(&d));

    for mode in ["auto", "estimate", "corner"] {
        let o = lrp(&["diameter", path_str(&g), "--mode", mode]);
        assert!(stdout(&o).trim().parse::<u32>().is_ok(), "{mode}");
    }
}

#[test]
fn stats_descent_renorm_commands() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.lrp");
    assert!(lrp(&["generate", "--d", "1", "--n", "400", "--s", "1.5", "--beta", "3", "--out", path_str(&g)])
        .status
        .success());

    let o = lrp(&["stats", path_str(&g), "--psi", "0.4"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("d,N,s,beta,trial,edges,"));
    assert!(lines.next().unwrap().starts_with("1,400,1.5,3,0,"));

    let o = lrp(&["stats", path_str(&g), "--histogram"]);
    assert!(stdout(&o).starts_with("k,count\n"));

    let o = lrp(&["stats", path_str(&g), "--interval", "20"]);
    assert!(stdout(&o).starts_with("intervals 21\n"));

    let o = lrp(&["descent", path_str(&g)]);
    assert!(stdout(&o).starts_with("descent start=400 c=2"));

    let o = lrp(&["renorm", path_str(&g), "--alpha", "0.9", "--m", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("renorm alpha=0.9 m=1 valid="));

    let o = lrp(&["renorm", path_str(&g), "--alpha", "0.1", "--m", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn fit_recovers_square_root() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("report.csv");
    let mut text = String::from(
        "d,N,s,beta,trial,edges,diameter,diam_mode,corner_path,cuts,isolated,ball2,descent_steps,renorm_valid,wall_ms\n",
    );
    for n in [16u32, 64, 256, 1024, 4096] {
        let root = (n as f64).sqrt() as u32;
        text.push_str(&format!("1,{n},3,1,0,0,{root},exact,,,,,,,\n"));
    }
    std::fs::write(&csv, text).unwrap();
    let o = lrp(&["fit", "--input", path_str(&csv), "--regime", "power"]);
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    let out = stdout(&o);
    let slope: f64 = out.lines().next().unwrap().strip_prefix("slope ").unwrap().parse().unwrap();
    assert!((slope - 0.5).abs() < 1e-12);

    let o = lrp(&["fit", "--input", path_str(&csv), "--regime", "s=d"]);
    assert!(stdout(&o).starts_with("ratio "));
    let o = lrp(&["fit", "--input", path_str(&csv), "--regime", "power", "--metric", "cuts"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn experiment_reproduces_archived_csv() {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data");
    let archived = std::fs::read(data.join("sweep.csv")).unwrap();
    let dir = tempfile::tempdir().unwrap();
    for workers in ["1", "3"] {
        let out = dir.path().join(format!("run{workers}.csv"));
        let o = lrp(&[
            "experiment", "--config", path_str(&data.join("sweep.json")), "--out", path_str(&out),
            "--workers", workers,
        ]);
        assert_eq!(o.status.code(), Some(0), "{o:?}");
        assert_eq!(std::fs::read(&out).unwrap(), archived);
        assert!(dir.path().join(format!("run{workers}.csv.cells.csv")).exists());
    }
    let o = Command::new(env!("CARGO_BIN_EXE_lrp"))
        .args(["experiment", "--config", path_str(&data.join("sweep.json")), "--out", "-"])
        .env("LRP_WORKERS", "5")
        .output()
        .unwrap();
    assert_eq!(o.stdout, archived);
}

#[test]
fn usage_and_runtime_exit_codes() {
    assert_eq!(lrp(&["nonsense"]).status.code(), Some(1));
    assert_eq!(lrp(&["diameter"]).status.code(), Some(1));
    assert_eq!(lrp(&["generate", "--d", "1", "--n", "5", "--s", "2", "--beta", "1", "--wat"]).status.code(), Some(1));
    assert_eq!(lrp(&["diameter", "/no/such/file.lrp"]).status.code(), Some(2));
    let o = lrp(&["generate", "--d", "0", "--n", "5", "--s", "2", "--beta", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error:"));
}
