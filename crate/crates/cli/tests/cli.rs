use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn genbound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_genbound")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn rows(csv_text: &str) -> Vec<csv::StringRecord> {
    csv::Reader::from_reader(csv_text.as_bytes()).records().map(Result::unwrap).collect()
}

fn column(header: &csv::StringRecord, name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap()
}

#[test]
fn json_output_is_canonical() {
    let o = genbound(&["--poly", "x^2 + 1", "--output", "json", "--list-ideals"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["version"], 1);
    assert_eq!(v["bdydf"]["T"], 5);
    assert_eq!(v["field"]["disc"], "-4");
    assert_eq!(v["field"]["disc_source"], "computed_exact");
    assert!(v["multistep"]["certificate"]["N"].as_u64().unwrap() > 0);
    assert!(v["ideals"].as_array().is_some());
    assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", text);
}

#[test]
fn text_output_and_closed_forms() {
    let o = genbound(&["--poly", "x^3 - x - 1", "--algorithms", "bdydf,closed_forms"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("T   (bdydf)"));
    assert!(text.contains("cap T0"));
    assert!(!text.contains("multistep"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(genbound(&[]).status.code(), Some(2));
    assert_eq!(genbound(&["--poly", "x^2 +* 1"]).status.code(), Some(2));
    assert_eq!(genbound(&["--poly", "x^2 - 4"]).status.code(), Some(2));
    assert_eq!(genbound(&["--poly", "x^2 + 1", "--delta-grid", "0"]).status.code(), Some(2));
    let o = genbound(&["--poly", "x^2 + 1", "--disc", "-3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("genbound:"));
    let o = genbound(&["--poly", "x^2 + 1", "--algorithms", "bdydf", "--certificate", "c.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn user_discriminant_is_used() {
    let o = genbound(&["--poly", "x^2 + 4", "--disc", "-4", "--output", "json", "--algorithms", "bdydf"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["field"]["disc_source"], "user_supplied");
    assert_eq!(v["bdydf"]["T"], 5);
}

#[test]
fn certificate_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    let o = genbound(&[
        "--poly",
        "x^3 - x - 1",
        "--algorithms",
        "multistep",
        "--certificate",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let cert: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert!(cert["q_value"].as_f64().unwrap() < 0.0);
    assert_eq!(cert["v"].as_array().unwrap().len() as u64, cert["N"].as_u64().unwrap());
    assert_eq!(cert["field_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn batch_csv() {
    let dir = tempfile::tempdir().unwrap();
    let list = dir.path().join("fields.txt");
    fs::write(&list, "# small fields\nx^2 + 1\nx^2 + 3\n\nx^2 - x - 1 ; 5\n").unwrap();
    let o = genbound(&["--poly-file", list.to_str().unwrap(), "--jobs", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let header = rd.headers().unwrap().clone();
    let rs = rows(&text);
    let t = column(&header, "T");
    assert_eq!(rs.iter().map(|r| &r[t]).collect::<Vec<_>>(), ["5", "5", "7"]);
    assert_eq!(rs.iter().map(|r| &r[column(&header, "line")]).collect::<Vec<_>>(), ["2", "3", "5"]);
    assert!(rs.iter().all(|r| &r[0] == "1"));
    let ratio = column(&header, "ratio_T1_logdisc2");
    assert!(rs.iter().all(|r| r[ratio].parse::<f64>().unwrap() <= 4.01));
}

#[test]
fn empty_batch_writes_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let list = dir.path().join("empty.txt");
    fs::write(&list, "").unwrap();
    let o = genbound(&["--poly-file", list.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("version,line,poly"));
}

#[test]
fn bad_batch_lines_are_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let list = dir.path().join("mixed.txt");
    fs::write(&list, "x^2 + 1\nnot a polynomial\nx^2 + 1 ; 17\n").unwrap();
    let o = genbound(&["--poly-file", list.to_str().unwrap(), "--algorithms", "bdydf"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let header = csv::Reader::from_reader(text.as_bytes()).headers().unwrap().clone();
    let e = column(&header, "errors");
    let rs = rows(&text);
    assert_eq!(rs.len(), 3);
    assert_eq!(&rs[0][e], "");
    assert_ne!(&rs[1][e], "");
    assert_ne!(&rs[2][e], "");
}

#[test]
fn batch_resumes_from_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let list = dir.path().join("fields.txt");
    let out = dir.path().join("out.csv");
    fs::write(&list, "x^2 + 1\nx^2 + 3\nx^2 - x - 1\n").unwrap();
    let args = ["--poly-file", list.to_str().unwrap(), "--out", out.to_str().unwrap(), "--algorithms", "bdydf"];

    let o = genbound(&args);
    assert_eq!(o.status.code(), Some(0));
    let full = fs::read_to_string(&out).unwrap();
    assert!(!dir.path().join("out.csv.ckpt").exists());

    // Interrupted after the first line: header and one row, checkpoint at 1.
    let partial: Vec<&str> = full.lines().take(2).collect();
    fs::write(&out, partial.join("\n") + "\n").unwrap();
    fs::write(dir.path().join("out.csv.ckpt"), "1\n").unwrap();
    let o = genbound(&args);
    assert_eq!(o.status.code(), Some(0));
    let resumed = fs::read_to_string(&out).unwrap();
    let key = |s: &str| rows(s).iter().map(|r| (r[1].to_string(), r[7].to_string())).collect::<Vec<_>>();
    assert_eq!(key(&resumed), key(&full));
    assert!(!dir.path().join("out.csv.ckpt").exists());
}

#[test]
fn cache_directory() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    fs::create_dir(&cache).unwrap();
    let args = ["--poly", "x^3 - 2", "--algorithms", "bdydf", "--cache", cache.to_str().unwrap()];
    let first = genbound(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(fs::read_dir(&cache).unwrap().count(), 1);
    let second = genbound(&args);
    assert_eq!(stdout(&first).lines().nth(3), stdout(&second).lines().nth(3));
}

#[test]
fn cubic_multistep() {
    let o = genbound(&[
        "--poly",
        "x^3+559752270111028720*x+55137512477462689",
        "--algorithms",
        "multistep",
        "--output",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["multistep"]["T"], 11071);
    assert_eq!(v["multistep"]["ideal_count"], 1343);
}

#[test]
fn output_keys_follow_the_schema() {
    let schema: Value = serde_json::from_str(include_str!("../../../docs/schema.json")).unwrap();
    let o = genbound(&["--poly", "x^3 - 2", "--output", "json", "--list-ideals"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let check = |obj: &Value, s: &Value| {
        let props = s["properties"].as_object().unwrap();
        for k in obj.as_object().unwrap().keys() {
            assert!(props.contains_key(k), "{k} not in schema");
        }
        for r in s["required"].as_array().unwrap() {
            assert!(obj.get(r.as_str().unwrap()).is_some(), "{r} missing");
        }
    };
    check(&v, &schema);
    check(&v["field"], &schema["properties"]["field"]);
    check(&v["closed_forms"], &schema["properties"]["closed_forms"]);
    for a in ["bdydf", "multistep", "simplified"] {
        check(&v[a], &schema["$defs"]["result"]);
    }
    check(&v["multistep"]["certificate"], &schema["$defs"]["certificate"]);
}
