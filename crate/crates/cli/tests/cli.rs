use std::fs;
use std::path::{Path, PathBuf};

use lda_core::report::{Report, Status};

fn lda(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let code = lda_cli::run(std::iter::once("lda").chain(args.iter().copied()), &mut out);
    (code, String::from_utf8(out).expect("utf-8 output"))
}

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/corpus")
}

fn copy_dir(from: &Path, to: &Path) {
    fs::create_dir_all(to).unwrap();
    for e in fs::read_dir(from).unwrap() {
        let e = e.unwrap();
        let dest = to.join(e.file_name());
        if e.file_type().unwrap().is_dir() {
            copy_dir(&e.path(), &dest);
        } else {
            fs::copy(e.path(), dest).unwrap();
        }
    }
}

#[test]
fn documented_examples() {
    assert_eq!(lda(&["crit", "j16", "--max-n", "6"]), (0, "gamma_4\n".into()));
    assert_eq!(lda(&["growth", "Ctfunc[3,5](1)"]).1.lines().next(), Some("256"));
    assert_eq!(lda(&["compare", "j", "j", "--max-n", "5"]), (0, "equal images through A_5\n".into()));
    assert_eq!(lda(&["eval", "j16", "--n", "4"]), (0, "16\n".into()));
    let (code, out) = lda(&["compare", "jj", "j", "--max-n", "5"]);
    assert_eq!(code, 0);
    assert!(out.contains("images differ in A_0") || out.contains("images differ in A_1"), "{out}");
}

#[test]
fn table_dump_and_verify() {
    let (code, out) = lda(&["table", "2"]);
    assert_eq!(code, 0);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows.len(), 4, "{out}");
    assert!(rows[3].ends_with("1 2 3 4"), "{out}");
    let (code, out) = lda(&["table", "5", "--verify"]);
    assert_eq!(code, 0);
    assert!(out.contains("pass") && !out.contains("fail"), "{out}");
}

#[test]
fn growth_comparison_has_a_trace() {
    let (code, out) = lda(&["growth", "F[4](F[4](254))", "F[5](1)"]);
    assert_eq!(code, 0);
    assert!(out.contains("ProvenGT"), "{out}");
    assert!(out.lines().any(|l| l.trim_start().starts_with('[')), "{out}");
}

#[test]
fn check_prints_a_trace_to_the_goal() {
    let script = corpus_dir().join("final-kappa4.lds");
    let (code, out) = lda(&["check", script.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    let last_step = out.lines().filter(|l| l.trim_start().starts_with("proven")).last().unwrap();
    assert!(last_step.contains("final") && last_step.ends_with("< kappa4"), "{last_step}");
    assert!(out.contains("goal final:") && out.contains("[proven]"));
}

#[test]
fn order_prints_a_matrix() {
    let (code, out) = lda(&["order", "kappa0", "kappa1", "sigma1"]);
    assert_eq!(code, 0);
    assert!(out.contains("strict chain: true"), "{out}");
}

#[test]
fn exit_codes() {
    assert_eq!(lda(&["--bogus"]).0, 2);
    assert_eq!(lda(&["eval", "j(", "--n", "3"]).0, 2);
    assert_eq!(lda(&["growth", "Ct[12](1)"]).0, 2);
    assert_eq!(lda(&["check", "/nonexistent/x.lds"]).0, 2);
    assert_eq!(lda(&["table", "17"]).0, 3);
    assert_eq!(lda(&["table", "13"]).0, 3);
    assert_eq!(lda(&["eval", "j", "--n", "20"]).0, 3);
    assert_eq!(lda(&["--help"]).0, 0);
}

#[test]
fn edited_corpus_fails_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    copy_dir(&corpus_dir(), dir.path());
    let f = dir.path().join("final-kappa4.lds");
    let text = fs::read_to_string(&f).unwrap();
    let bad = text.replace("< kappa4 by chain from f9, m_lo", "< kappa3 by chain from f9, m_lo");
    assert_ne!(bad, text);
    fs::write(&f, bad).unwrap();
    let d = dir.path().to_str().unwrap();
    let (code, out) = lda(&["--corpus", d, "check", f.to_str().unwrap()]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("FAIL final-kappa4"), "{out}");

    let json = dir.path().join("r.json");
    let code = lda(&["--corpus", d, "--json", json.to_str().unwrap(), "verify-all", "--samples", "1000"]).0;
    assert_eq!(code, 1);
    let r: Report = serde_json::from_str(&fs::read_to_string(json).unwrap()).unwrap();
    let corpus = r.records.iter().find(|x| x.id == "c08.corpus").unwrap();
    assert_eq!(corpus.status, Status::Fail);
    assert!(corpus.witness["error"].as_str().unwrap().starts_with("final-kappa4/"));
}

#[test]
fn verify_all_is_byte_identical_without_timing() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let p = dir.path().join(name);
        let (code, out) = lda(&["--json", p.to_str().unwrap(), "--no-timing", "verify-all", "--samples", "1000"]);
        assert_eq!(code, 0, "{out}");
        fs::read(p).unwrap()
    };
    let (a, b) = (run("a.json"), run("b.json"));
    assert_eq!(a, b);
    let r: Report = serde_json::from_slice(&a).unwrap();
    assert_eq!(r.counts.fail, 0);
    assert!(r.counts.pass > 0 && r.counts.claimed > 0);
    assert_eq!(r.generated_at_unix, 0);
    assert!(r.records.windows(2).all(|w| w[0].id < w[1].id));
}
