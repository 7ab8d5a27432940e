//! End-to-end tests of the command-line interface: file formats, printed
//! output, error handling, and the documented behavior of each subcommand.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_granulate"))
}

fn run(args: &[&str]) -> Output {
    binary().args(args).output().expect("command runs")
}

fn run_ok(args: &[&str]) -> String {
    let output = run(args);
    assert!(
        output.status.success(),
        "command {:?} failed: {}",
        args,
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8(output.stdout).unwrap()
}

fn iris_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/iris.csv")
}

fn path_str(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_string_lossy().into_owned()
}

#[test]
fn gen_gaussian_writes_dataset_and_metadata() {
    let dir = TempDir::new().unwrap();
    let out = path_str(&dir, "g.csv");
    let stdout = run_ok(&[
        "gen", "--source", "gaussian", "--sigma", "0.2", "--n", "100", "--seed", "7", "--out", &out,
    ]);
    assert!(stdout.contains("wrote 100 elements"));

    let rows = std::fs::read_to_string(&out).unwrap();
    assert_eq!(rows.lines().count(), 100);

    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(format!("{out}.meta.json")).unwrap())
            .unwrap();
    assert_eq!(meta["source"], "gaussian");
    assert_eq!(meta["seed"], 7);
    let entropy = meta["entropy"].as_f64().unwrap();
    assert!((entropy - (-0.19050)).abs() < 1e-3, "entropy = {entropy}");
}

#[test]
fn gen_exponential_metadata_entropy_is_one_at_unit_rate() {
    let dir = TempDir::new().unwrap();
    let out = path_str(&dir, "e.csv");
    run_ok(&[
        "gen",
        "--source",
        "exponential",
        "--lambda",
        "1",
        "--n",
        "50",
        "--seed",
        "1",
        "--out",
        &out,
    ]);
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(format!("{out}.meta.json")).unwrap())
            .unwrap();
    assert_eq!(meta["entropy"].as_f64().unwrap(), 1.0);
}

#[test]
fn gen_same_flags_give_byte_identical_files() {
    let dir = TempDir::new().unwrap();
    let a = path_str(&dir, "a.csv");
    let b = path_str(&dir, "b.csv");
    for out in [&a, &b] {
        run_ok(&[
            "gen", "--source", "gaussian", "--sigma", "0.3", "--n", "64", "--seed", "11", "--out",
            out,
        ]);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn granulate_single_element_prints_zero_entropy() {
    let dir = TempDir::new().unwrap();
    let data = path_str(&dir, "one.csv");
    std::fs::write(&data, "3.5\n").unwrap();
    let out = path_str(&dir, "one.json");
    let stdout = run_ok(&["granulate", &data, "--out", &out]);
    assert!(stdout.contains("fuzzy_entropy 0.00000000e0"), "{stdout}");
}

/// Interval widths grow away from the representative on a centered Gaussian
/// sample (positive rank correlation between distance and width).
#[test]
fn granulate_widths_grow_away_from_the_center() {
    let dir = TempDir::new().unwrap();
    let data = path_str(&dir, "g.csv");
    run_ok(&[
        "gen", "--source", "gaussian", "--sigma", "0.2", "--n", "100", "--seed", "7", "--out",
        &data,
    ]);
    let out = path_str(&dir, "g.granule.json");
    run_ok(&[
        "granulate",
        &data,
        "--width",
        "2",
        "--beta",
        "0.5",
        "--out",
        &out,
    ]);

    let record: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let rep = record["representative_index"].as_u64().unwrap() as usize;
    let values: Vec<f64> = std::fs::read_to_string(&data)
        .unwrap()
        .lines()
        .map(|l| l.trim().parse().unwrap())
        .collect();
    let widths: Vec<f64> = std::fs::read_to_string(format!("{out}.widths.tsv"))
        .unwrap()
        .lines()
        .map(|l| l.split('\t').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(widths.len(), values.len());

    let distances: Vec<f64> = values.iter().map(|x| (x - values[rep]).abs()).collect();
    let rho = spearman(&distances, &widths);
    assert!(rho > 0.0, "rank correlation {rho} should be positive");
}

fn ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut out = vec![0.0; values.len()];
    for (rank, &index) in order.iter().enumerate() {
        out[index] = rank as f64;
    }
    out
}

fn spearman(a: &[f64], b: &[f64]) -> f64 {
    let (ra, rb) = (ranks(a), ranks(b));
    let n = a.len() as f64;
    let mean = (n - 1.0) / 2.0;
    let mut num = 0.0;
    let mut da = 0.0;
    let mut db = 0.0;
    for i in 0..a.len() {
        num += (ra[i] - mean) * (rb[i] - mean);
        da += (ra[i] - mean) * (ra[i] - mean);
        db += (rb[i] - mean) * (rb[i] - mean);
    }
    num / (da * db).sqrt()
}

#[test]
fn granule_records_round_trip_through_the_parser() {
    let dir = TempDir::new().unwrap();
    let data = path_str(&dir, "d.csv");
    std::fs::write(&data, "1\n2\n3\n10\n").unwrap();
    let out = path_str(&dir, "d.granule.json");
    run_ok(&[
        "granulate",
        &data,
        "--width",
        "5",
        "--beta",
        "0.1",
        "--out",
        &out,
    ]);
    let text = std::fs::read_to_string(&out).unwrap();
    let parsed = granulate_core::IT2FSGranule::from_record(text.trim()).unwrap();
    assert_eq!(parsed.to_record(), text.trim());
    assert_eq!(parsed.representative(), 1);
}

#[test]
fn granulate_handles_graph_datasets() {
    let dir = TempDir::new().unwrap();
    let data = path_str(&dir, "g.jsonl");
    run_ok(&[
        "gen",
        "--source",
        "graph",
        "--difficulty",
        "0.4",
        "--classes",
        "2",
        "--n",
        "8",
        "--nodes",
        "8",
        "--alphabet",
        "8",
        "--seed",
        "5",
        "--out",
        &data,
    ]);
    let out = path_str(&dir, "g.granule.json");
    let stdout = run_ok(&[
        "granulate",
        &data,
        "--width",
        "30",
        "--beta",
        "0.05",
        "--out",
        &out,
    ]);
    let entropy: f64 = stdout
        .trim()
        .strip_prefix("fuzzy_entropy ")
        .unwrap()
        .parse()
        .unwrap();
    assert!((0.0..=1.0).contains(&entropy));
    assert_eq!(
        std::fs::read_to_string(format!("{out}.widths.tsv"))
            .unwrap()
            .lines()
            .count(),
        16
    );
}

#[test]
fn calibrate_gaussian_meets_the_fit_quality_bounds() {
    let dir = TempDir::new().unwrap();
    let out = path_str(&dir, "cal.json");
    let stdout = run_ok(&[
        "calibrate",
        "--source",
        "gaussian",
        "--seed",
        "42",
        "--out",
        &out,
    ]);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(report["r_squared"].as_f64().unwrap() >= 0.90);
    assert_eq!(report["points"].as_array().unwrap().len(), 10);
    assert!(stdout.contains("best_width"));
}

#[test]
fn calibrate_exponential_meets_the_fit_quality_bounds() {
    let dir = TempDir::new().unwrap();
    let out = path_str(&dir, "cal.json");
    run_ok(&[
        "calibrate",
        "--source",
        "exponential",
        "--seed",
        "0",
        "--out",
        &out,
    ]);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(report["r_squared"].as_f64().unwrap() >= 0.75);
}

#[test]
fn calibrate_rejects_a_degenerate_sweep() {
    let dir = TempDir::new().unwrap();
    let out = path_str(&dir, "cal.json");
    let output = run(&[
        "calibrate",
        "--source",
        "gaussian",
        "--param-lo",
        "0.2",
        "--param-hi",
        "0.2",
        "--out",
        &out,
    ]);
    assert!(!output.status.success());
    assert!(String::from_utf8_lossy(&output.stderr).contains("degenerate sweep"));
    assert!(!Path::new(&out).exists(), "no partial output on failure");
}

#[test]
fn cluster_iris_finds_the_pure_low_entropy_cluster() {
    let dir = TempDir::new().unwrap();
    let out = path_str(&dir, "iris.json");
    let stdout = run_ok(&[
        "cluster",
        iris_path().to_str().unwrap(),
        "--k",
        "3",
        "--restarts",
        "20",
        "--seed",
        "0",
        "--width",
        "5",
        "--pca",
        "2",
        "--out",
        &out,
    ]);
    assert_eq!(stdout.lines().count(), 3);

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let clusters = report["clusters"].as_array().unwrap();
    assert_eq!(clusters.len(), 3);
    // Report is sorted by ascending entropy; the first cluster is the pure
    // 50-element one.
    assert_eq!(clusters[0]["size"], 50);
    assert_eq!(clusters[0]["purity"], 1.0);
    assert_eq!(clusters[0]["majority_class"], "Iris-setosa");
    assert!(clusters[0]["entropy"].as_f64().unwrap() < clusters[1]["entropy"].as_f64().unwrap());

    let pca = std::fs::read_to_string(format!("{out}.pca.tsv")).unwrap();
    assert_eq!(pca.lines().count(), 150);
    assert!(pca.lines().all(|l| l.split('\t').count() == 2));
}

#[test]
fn cluster_with_k_one_equals_whole_dataset_granulation() {
    let dir = TempDir::new().unwrap();
    let data = path_str(&dir, "d.csv");
    std::fs::write(&data, "1\n2\n3\n10\n").unwrap();

    let cluster_out = path_str(&dir, "c.json");
    let stdout = run_ok(&[
        "cluster",
        &data,
        "--k",
        "1",
        "--width",
        "5",
        "--out",
        &cluster_out,
    ]);
    let entropy: f64 = stdout
        .lines()
        .next()
        .unwrap()
        .rsplit(' ')
        .next()
        .unwrap()
        .parse()
        .unwrap();

    let granule_out = path_str(&dir, "g.json");
    let direct = run_ok(&["granulate", &data, "--width", "5", "--out", &granule_out]);
    let direct_entropy: f64 = direct
        .trim()
        .strip_prefix("fuzzy_entropy ")
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(entropy, direct_entropy);
}

#[test]
fn cluster_rejects_k_larger_than_n() {
    let dir = TempDir::new().unwrap();
    let out = path_str(&dir, "c.json");
    let output = run(&[
        "cluster",
        iris_path().to_str().unwrap(),
        "--k",
        "200",
        "--out",
        &out,
    ]);
    assert!(!output.status.success());
    assert!(!Path::new(&out).exists());
}

#[test]
fn missing_input_fails_with_a_diagnostic() {
    let dir = TempDir::new().unwrap();
    let out = path_str(&dir, "g.json");
    let output = run(&["granulate", "no-such-file.csv", "--out", &out]);
    assert!(!output.status.success());
    assert!(String::from_utf8_lossy(&output.stderr).contains("no-such-file.csv"));
    assert!(!Path::new(&out).exists());
}

#[test]
fn mixed_label_rows_are_rejected() {
    let dir = TempDir::new().unwrap();
    let data = path_str(&dir, "bad.csv");
    std::fs::write(&data, "1.0,a\n2.0\n").unwrap();
    let out = path_str(&dir, "g.json");
    let output = run(&["granulate", &data, "--out", &out]);
    assert!(!output.status.success());
    assert!(String::from_utf8_lossy(&output.stderr).contains("labels"));
}
