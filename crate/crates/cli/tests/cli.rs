use std::process::{Command, Output};

use mckay_core::counting::{self, CountReport, Kind, Route};
use mckay_core::{GroupSpec, Series, Twist};

fn mckay(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mckay")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn count_report_json_round_trip() {
    let out = mckay(&["count", "classes", "--series", "A", "--rank", "2", "--isogeny", "adjoint", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let parsed: CountReport = serde_json::from_str(&stdout(&out)).unwrap();
    let spec = GroupSpec::adjoint(Series::A, 2, Twist::Split).unwrap();
    let expected =
        CountReport::new(&spec, Kind::Classes, Route::Theorem, counting::semisimple_class_count(&spec).unwrap());
    let expected = CountReport { result: counting::restrict_to_good(&spec, &expected.result).unwrap(), ..expected };
    assert_eq!(parsed, expected);
    assert!(parsed.result.equal(&expected.result).is_ok());
}

#[test]
fn evaluation_at_q() {
    let out = mckay(&["count", "ss-chars", "--series", "A", "--rank", "1", "--q", "5", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["value"], "8");
    assert_eq!(v["spec"]["q"], 5);

    let out = mckay(&["count", "gg", "--series", "A", "--rank", "1", "--z2", "1", "--q", "7"]);
    assert!(stdout(&out).contains("at q = 7: 6"), "{}", stdout(&out));
}

#[test]
fn non_split_twist_parses() {
    let out = mckay(&["count", "classes", "--series", "A", "--rank", "2", "--twist", "-", "--q", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("at q = 2: 4"));
}

#[test]
fn td_emits_four_reports() {
    let out = mckay(&["count", "td", "--series", "A", "--rank", "2", "--format", "json"]);
    let parsed: Vec<CountReport> = serde_json::from_str(&stdout(&out)).unwrap();
    let kinds: Vec<Kind> = parsed.iter().map(|r| r.kind).collect();
    assert_eq!(kinds, vec![Kind::H1, Kind::TdTotal, Kind::TdOne, Kind::TdEll]);
}

#[test]
fn refusals_exit_with_two() {
    for args in [
        &["count", "classes", "--series", "E8", "--rank", "8", "--q", "5"][..],
        &["count", "classes", "--series", "A", "--rank", "2", "--q", "6"],
        &["count", "classes", "--series", "D", "--rank", "5", "--isogeny", "HS"],
        &["count", "ss-chars", "--series", "D", "--rank", "4"],
        &["oracle", "compare", "--group", "SL3", "--q", "7"],
    ] {
        let out = mckay(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("error"), "{args:?}");
    }
    let out = mckay(&["count", "classes", "--series", "E8", "--rank", "8", "--q", "5"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("hypothesis: p good"));
}

#[test]
fn verify_reports_equality() {
    let out = mckay(&["verify", "mckay", "--series", "A", "--rank", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("A_3 sc: equal"));

    let out = mckay(&["verify", "mckay", "--all", "--max-rank", "3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).lines().count() > 10);
    assert!(!stdout(&out).contains("mismatch"));
}

#[test]
fn oracle_commands() {
    let out = mckay(&["oracle", "compare", "--group", "SL2", "--q", "3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["outcome"] == "pass"));

    let out = mckay(&["oracle", "table", "--group", "sl2", "--q", "3", "--format", "json"]);
    let snap: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(snap["classCount"], 7);
}

#[test]
fn emit_table_csv() {
    let out = mckay(&["emit-table", "1", "--max-rank", "2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rows.headers().unwrap().iter().next(), Some("group"));
    assert!(rows.records().count() >= 4);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(mckay(&["count", "bogus"]).status.code(), Some(2));
    assert_eq!(mckay(&["count", "classes", "--series", "Z9", "--rank", "1"]).status.code(), Some(2));
}
