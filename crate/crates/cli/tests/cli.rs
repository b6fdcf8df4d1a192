use std::path::Path;
use std::process::{Command, Output};

use ford_spheres::moment::{self, Caps, Method, MomentReport, Normalization};
use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ford-spheres"));
    cmd.env_remove("FORD_DIRECT_CAP").env_remove("FORD_COUNTING_CAP");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn error_record(o: &Output) -> Value {
    let text = String::from_utf8(o.stderr.clone()).unwrap();
    serde_json::from_str(text.trim()).unwrap_or_else(|_| panic!("stderr is not a JSON record: {text}"))
}

#[test]
fn enumerate_prints_nine_fractions_at_s2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g2.csv");
    let o = run(&["enumerate", "--S", "2", "--out", "csv", "-o", path.to_str().unwrap()]);
    assert!(o.status.success());
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 9);
    assert_eq!(lines[0], "0/1");
    let artifact = std::fs::read_to_string(&path).unwrap();
    let data: Vec<&str> = artifact.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data.len(), 10, "header plus nine rows");
    assert!(artifact.starts_with("# "));
}

#[test]
fn enumerate_real_farey() {
    let o = run(&["enumerate", "--Q", "3"]);
    assert!(o.status.success());
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let fr: Vec<&str> = doc["body"]["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["fraction"].as_str().unwrap())
        .collect();
    assert_eq!(fr, ["0/1", "1/3", "1/2", "2/3", "1/1"]);
}

#[test]
fn constants_json_has_c() {
    let o = run(&["constants", "--no-z2"]);
    assert!(o.status.success());
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let c = doc["body"]["result"]["C"].as_f64().unwrap();
    assert!((c - 0.68644).abs() < 1e-4);
    assert_eq!(doc["metadata"]["tool"], "ford-spheres");
    assert!(doc["metadata"]["config"]["seed"].is_u64());
}

#[test]
fn area_record() {
    let o = run(&["area", "--s", "-1+i", "--S", "4", "--samples", "0"]);
    assert!(o.status.success());
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let r = &doc["body"]["result"];
    assert_eq!(r["s"], "1+i");
    assert_eq!(r["lattice_count_coprime"], 12);
    for key in ["area_closed_form", "lattice_count", "prediction"] {
        assert!(r[key].is_number(), "{key}");
    }
    assert!(r.get("area_monte_carlo").is_none());
}

fn moment_artifact(dir: &Path, name: &str, threads: &str, format: &str) -> Vec<u8> {
    let path = dir.join(name);
    let o = run(&[
        "--threads", threads, "moment", "--S", "3,6,10", "--out", format, "-o", path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    std::fs::read(path).unwrap()
}

#[test]
fn artifacts_identical_across_runs_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    for format in ["csv", "json"] {
        let one = moment_artifact(dir.path(), &format!("a.{format}"), "1", format);
        let four = moment_artifact(dir.path(), &format!("b.{format}"), "4", format);
        let again = moment_artifact(dir.path(), &format!("c.{format}"), "4", format);
        assert_eq!(one, four, "{format} differs between 1 and 4 threads");
        assert_eq!(four, again, "{format} differs between runs");
    }
}

fn library_rows() -> Vec<MomentReport> {
    let mut rows = Vec::new();
    for s in [3, 6, 10] {
        for m in [Method::Direct, Method::Counting, Method::MainTerm] {
            rows.push(moment::run_method(s, m, Normalization::OmegaFull, Caps::default(), false).unwrap());
        }
    }
    rows
}

#[test]
fn csv_round_trips_to_reports() {
    let dir = tempfile::tempdir().unwrap();
    let bytes = moment_artifact(dir.path(), "m.csv", "2", "csv");
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(bytes.as_slice());
    let parsed: Vec<MomentReport> = reader.deserialize().collect::<Result<_, _>>().unwrap();
    assert_eq!(parsed, library_rows());
}

#[test]
fn json_round_trips_to_reports() {
    let dir = tempfile::tempdir().unwrap();
    let bytes = moment_artifact(dir.path(), "m.json", "2", "json");
    let doc: Value = serde_json::from_slice(&bytes).unwrap();
    let parsed: Vec<MomentReport> = serde_json::from_value(doc["body"]["rows"].clone()).unwrap();
    assert_eq!(parsed, library_rows());
    let cal = doc["metadata"]["calibration"]["constant"].as_f64().unwrap();
    let counting = &doc["body"]["rows"][1];
    assert_eq!(counting["calibrated_value"].as_f64().unwrap(), cal * counting["value"].as_f64().unwrap());
}

#[test]
fn timing_is_opt_in() {
    let o = run(&["moment", "--S", "2", "--method", "direct", "--out", "csv"]);
    let text = stdout(&o);
    let row = text.lines().find(|l| l.starts_with("2,direct")).unwrap();
    assert!(row.contains(",,"), "{row}");
    let o = run(&["--timing", "moment", "--S", "2", "--method", "direct"]);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(doc["body"]["rows"][0]["elapsed_s"].is_f64());
}

#[test]
fn invalid_gint_exits_2() {
    let o = run(&["area", "--s", "2x", "--S", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_record(&o)["error"], "input");
}

#[test]
fn usage_error_exits_2() {
    let o = run(&["moment"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["verify", "--suite", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn cap_exceeded_exits_5() {
    let o = run(&["moment", "--S", "13", "--method", "direct"]);
    assert_eq!(o.status.code(), Some(5));
    let rec = error_record(&o);
    assert_eq!(rec["error"], "cap-exceeded");
    assert_eq!(rec["exit_code"], 5);
    let o = bin()
        .args(["moment", "--S", "3", "--method", "direct"])
        .env("FORD_DIRECT_CAP", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(5));
}

#[test]
fn unwritable_path_exits_6() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("out.json");
    let o = run(&["enumerate", "--S", "1", "-o", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(6));
    assert_eq!(error_record(&o)["error"], "io");
}

#[test]
fn verify_all_passes() {
    let o = run(&["verify", "--suite", "all"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("mediant closure equals enumeration"));
    assert!(text.contains("direct and counting agree"));
    assert!(!text.contains("FAIL"));
}
