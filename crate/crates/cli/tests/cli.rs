use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn sublcs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sublcs")).args(args).output().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sublcs-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &Path, name: &str, body: &[u8]) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn exact_reports_json() {
    let dir = scratch("exact");
    let a = write(&dir, "a.txt", b"banana");
    let b = write(&dir, "b.txt", b"ananas");
    let v = json(&sublcs(&["exact", "--tau", "2", "--d", "2", &a, &b]));
    assert_eq!(v["length"], 5);
    assert_eq!(v["count_verified"], 2);
    for key in ["doc", "start", "peak_words", "millis"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    let oracle = json(&sublcs(&["oracle", "--d", "2", &a, &b]));
    assert_eq!(oracle["length"], 5);
}

#[test]
fn verify_directory_and_tsv() {
    let dir = scratch("verify");
    write(&dir, "1", b"abab");
    write(&dir, "2", b"babc");
    write(&dir, "3", b"abca");
    let out = sublcs(&["verify", "--d", "2", "--tsv", dir.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 5);
    assert!(rows[0].starts_with("algorithm\ttau\tlength"));
    assert!(rows[1..].iter().all(|r| r.split('\t').nth(2) == Some("3")));
}

#[test]
fn single_file_separators_and_decimal_tokens() {
    let dir = scratch("sep");
    let f = write(&dir, "all", b"xhellox\x1fyhelloy\x1f");
    assert_eq!(json(&sublcs(&["classic", "--d", "2", &f]))["length"], 5);
    let f = write(&dir, "comma", b"xhellox,yhelloy");
    assert_eq!(json(&sublcs(&["exact", "--d", "2", "--sep", ",", "--tau", "3", &f]))["length"], 5);
    let f = write(&dir, "dec", b"3 1 4 1 5 | 9 1 4 1 2");
    let v = json(&sublcs(&["approx", "--d", "2", "--alphabet", "decimal", "--tau", "1", &f]));
    assert_eq!(v["length"], 3);
    assert_eq!(v["start"], 2);
}

#[test]
fn exit_codes() {
    let dir = scratch("codes");
    let a = write(&dir, "a", b"ab");
    let b = write(&dir, "b", b"cd");
    let v = json(&sublcs(&["exact", "--d", "2", "--tau", "1", &a, &b]));
    assert_eq!(v["length"], 0);
    assert_eq!(sublcs(&["exact", "--d", "3", &a, &b]).status.code(), Some(2));
    assert_eq!(sublcs(&["exact", "--d", "2"]).status.code(), Some(2));
    assert_eq!(sublcs(&["frobnicate"]).status.code(), Some(2));
    let missing = dir.join("nope");
    assert_eq!(sublcs(&["exact", "--d", "2", missing.to_str().unwrap(), &a]).status.code(), Some(2));
    let f = write(&dir, "bad", b"1 2 x | 3");
    assert_eq!(sublcs(&["exact", "--d", "2", "--alphabet", "decimal", &f]).status.code(), Some(2));
}

#[test]
fn bench_table_trends() {
    let out = sublcs(&["bench", "--sizes", "1000,2000", "--tau-list", "16,64,256", "--seed", "3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split('\t').collect();
    assert_eq!(header, ["n", "m", "d", "sigma", "tau", "algorithm", "millis", "peak_words", "length"]);
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split('\t').collect()).collect();
    for n in ["1000", "2000"] {
        let exact: Vec<usize> = rows
            .iter()
            .filter(|r| r[0] == n && r[5] == "exact")
            .map(|r| r[7].parse().unwrap())
            .collect();
        assert_eq!(exact.len(), 3);
        assert!(exact.windows(2).all(|w| w[0] <= w[1]), "{exact:?}");
    }
    let json_out = sublcs(&["bench", "--sizes", "500", "--tau-list", "8", "--json", "--algorithms", "exact,oracle"]);
    let rows: Vec<serde_json::Value> = String::from_utf8(json_out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["length"], rows[1]["length"]);
}

#[test]
fn label_audit_via_environment() {
    let dir = scratch("audit");
    let a = write(&dir, "a", b"abracadabra");
    let b = write(&dir, "b", b"cadabrabra");
    let out = Command::new(env!("CARGO_BIN_EXE_sublcs"))
        .args(["exact", "--d", "2", "--tau", "2", &a, &b])
        .env("SUBLCS_DEBUG_LABEL_LOG", "1")
        .output()
        .unwrap();
    assert_eq!(json(&out)["length"], 7);
}
