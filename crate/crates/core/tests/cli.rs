//! End-to-end runs of the command-line front end.

use magnus::cli::{run, Outcome};
use magnus::lab::{Report, Verdict};
use magnus::membership::{MembershipAnswer, Status};
use magnus::words::Word;

fn pres(name: &str) -> String {
    format!("{}/presentations/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn magnus(args: &[&str]) -> Outcome {
    run(std::iter::once("magnus").chain(args.iter().copied()))
}

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

#[test]
fn wp_relator_rotation() {
    let out = magnus(&["wp", "-p", &pres("g1.pres"), "c^-1 a b a^-1"]);
    assert_eq!((out.code, out.stdout.as_str()), (0, "trivial\n"));
    let out = magnus(&["wp", "-p", &pres("g1.pres"), "c a"]);
    assert_eq!((out.code, out.stdout.as_str()), (0, "nontrivial\n"));
    let out = magnus(&["wp", "-p", &pres("bs12.pres"), "t a t^-1", "a^2"]);
    assert_eq!((out.code, out.stdout.as_str()), (0, "equal\n"));
}

#[test]
fn member_with_witness() {
    let out = magnus(&["member", "-p", &pres("g1.pres"), "--subset", "a,b", "--witness", "c"]);
    assert_eq!((out.code, out.stdout.as_str()), (0, "yes: a b a^-1\n"));
    let out = magnus(&["member", "-p", &pres("g1.pres"), "-S", "b,c", "a"]);
    assert_eq!((out.code, out.stdout.as_str()), (0, "no\n"));
}

#[test]
fn member_json_round_trip() {
    let out = magnus(&[
        "member", "-p", &pres("g1.pres"), "-S", "a,b", "--format", "json", "c b",
    ]);
    assert_eq!(out.code, 0);
    let ans: MembershipAnswer = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(ans.status, Status::Yes);
    assert_eq!(ans.witness, Some(w("a b a^-1 b")));
}

#[test]
fn unknown_exits_two() {
    let out = magnus(&[
        "member", "-p", &pres("bs12.pres"), "-S", "a", "--max-steps", "1", "--radius", "0",
        "t a^2 t^-1",
    ]);
    assert_eq!(out.code, 2, "{out:?}");
    assert!(out.stdout.starts_with("unknown"));
}

#[test]
fn theorem2_cyclic_example() {
    let args = [
        "check-theorem2", "-p", &pres("g1.pres"), "-S", "b,c", "-T", "b,c", "-g", "a",
        "--radius", "6", "--format", "json",
    ];
    let out = magnus(&args);
    assert_eq!(out.code, 0);
    let report: Report = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(report.verdict, Verdict::Cyclic { root: w("c") });
    // parse(print(report)) = report, and printing is stable
    let again = serde_json::to_string_pretty(&report).unwrap() + "\n";
    assert_eq!(again, out.stdout);
}

#[test]
fn identical_runs_are_byte_identical() {
    let args = [
        "check-corollary", "-p", &pres("g1.pres"), "-S", "a,b", "-T", "b,c", "-g", "c a",
        "--g2", "c", "--radius", "4", "--format", "json",
    ];
    let first = magnus(&args);
    let mut with_workers = args.to_vec();
    with_workers.extend(["--workers", "2"]);
    let second = magnus(&with_workers);
    assert_eq!(first.code, 0);
    assert_eq!(first.stdout, second.stdout);
    let report: Report = serde_json::from_str(&first.stdout).unwrap();
    assert!(report.certificates.iter().all(|c| c.holds));
}

#[test]
fn theorem1_on_g1() {
    let out = magnus(&["check-theorem1", "-p", &pres("g1.pres"), "-S", "a,b", "-T", "b,c"]);
    assert_eq!(out.code, 0, "{out:?}");
    assert!(out.stdout.contains("verdict"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(magnus(&["wp"]).code, 1);
    assert_eq!(magnus(&["wp", "-p", "/nonexistent.pres", "a"]).code, 1);
    assert_eq!(magnus(&["wp", "-p", &pres("g1.pres"), "z"]).code, 1);
    assert_eq!(magnus(&["member", "-p", &pres("g1.pres"), "-S", "a,b,c", "a"]).code, 1);
    let big = magnus(&[
        "check-theorem1", "-p", &pres("g1.pres"), "-S", "a,b", "-T", "b,c", "--radius", "11",
    ]);
    assert_eq!(big.code, 1);
    let help = magnus(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("check-theorem2"));
}

#[test]
fn large_radius_warns() {
    let out = magnus(&[
        "check-theorem2", "-p", &pres("g1.pres"), "-S", "b", "-T", "b", "-g", "a", "--radius",
        "7",
    ]);
    assert_eq!(out.code, 0);
    assert!(out.stderr.contains("warning"));
}

#[test]
fn reduce_and_hierarchy() {
    let out = magnus(&["reduce", "a^-1 b c a"]);
    assert_eq!(out.stdout, "reduced: a^-1 b c a\ncyclic core: b c\nconjugator: a^-1\n");
    let out = magnus(&["hierarchy", "-p", &pres("bs12.pres"), "--format", "json"]);
    assert_eq!(out.code, 0);
    let tree: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(tree["root"]["stable"], "t");
}

#[test]
fn nf_trace() {
    let out = magnus(&["nf", "-p", &pres("bs12.pres"), "--trace", "t a t^-1 a^-1"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("pinch 0"));
    assert!(out.stdout.contains("stable length 0"));
}
