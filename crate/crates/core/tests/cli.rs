//! The `pkb` binary: output formats, exit codes and the REPL.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use tempfile::TempDir;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn finish(out: Output) -> Run {
    Run {
        code: out.status.code().expect("terminated by signal"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn pkb(dir: &Path, args: &[&str]) -> Run {
    finish(
        Command::new(env!("CARGO_BIN_EXE_pkb"))
            .current_dir(dir)
            .args(args)
            .output()
            .unwrap(),
    )
}

fn pkb_stdin(dir: &Path, args: &[&str], input: &str) -> Run {
    let mut child = Command::new(env!("CARGO_BIN_EXE_pkb"))
        .current_dir(dir)
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    finish(child.wait_with_output().unwrap())
}

/// A scratch directory holding copies of the fixtures as `s.pkb` and `t.pkb`.
fn workspace() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(fixture("anne4.pkb"), dir.path().join("s.pkb")).unwrap();
    std::fs::copy(fixture("anne4_testimony.pkb"), dir.path().join("t.pkb")).unwrap();
    dir
}

fn ok(run: Run) -> String {
    assert_eq!(run.code, 0, "stderr: {}", run.stderr);
    assert_eq!(run.stderr, "");
    run.stdout
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn load_and_check_summarize() {
    let w = workspace();
    let d = w.path();
    assert_eq!(
        ok(pkb(d, &["load", "s.pkb"])),
        "contexts: 1\nepoch: 0\nindividuals: 33\npossibilities: 9\nstages: 1\nworlds: 4\n"
    );
    assert_eq!(ok(pkb(d, &["check", "s.pkb"])), "consistent | epoch=0\n");
}

#[test]
fn assert_then_query() {
    let w = workspace();
    let d = w.path();
    assert_eq!(
        ok(pkb(
            d,
            &["assert", "s.pkb", "root", "contingent", "AnneInEdiOnDay"]
        )),
        "accepted | epoch=1\n"
    );
    assert_eq!(
        ok(pkb(
            d,
            &["query", "s.pkb", "root", "possibly", "AnneInEdiOnDay"]
        )),
        "yes | status=contingent | owner=Mes | epoch=1\n"
    );
    assert_eq!(
        ok(pkb(
            d,
            &[
                "query",
                "s.pkb",
                "root",
                "classify",
                "AnneInEdiOnDay",
                "--at",
                "0"
            ]
        )),
        "contingent | owner=Mes | epoch=0\n"
    );
    assert_eq!(
        ok(pkb(
            d,
            &[
                "query",
                "s.pkb",
                "root",
                "ratio",
                "AnneMetEffie",
                "AnneInEdiOnDay"
            ]
        )),
        "1/2 | owner=Mes | epoch=1\n"
    );
    assert_eq!(
        ok(pkb(
            d,
            &[
                "credence",
                "s.pkb",
                "root",
                "AnneMetEffie",
                "AnneInEdiOnDay"
            ]
        )),
        "1/2 | owner=Mes | epoch=1\n"
    );
    assert_eq!(
        ok(pkb(d, &["history", "s.pkb", "root", "AnneInEdiOnDay"])),
        "contingent | asserted=1 | superseded=-\n"
    );
    assert_eq!(
        ok(pkb(d, &["lineage", "s.pkb"])),
        "root [0, ..) parents=- events=2\n"
    );
}

#[test]
fn assert_with_out_leaves_the_input_alone() {
    let w = workspace();
    let d = w.path();
    let before = read(d, "s.pkb");
    ok(pkb(
        d,
        &[
            "assert",
            "s.pkb",
            "root",
            "impossible",
            "AnneInBriOnDay",
            "--out",
            "o.pkb",
        ],
    ));
    assert_eq!(read(d, "s.pkb"), before);
    assert!(read(d, "o.pkb").ends_with("assert root impossible AnneInBriOnDay\n"));
}

#[test]
fn explain_lists_the_world_sets() {
    let w = workspace();
    let d = w.path();
    ok(pkb(
        d,
        &["assert", "s.pkb", "root", "contingent", "AnneInEdiOnDay"],
    ));
    assert_eq!(
        ok(pkb(
            d,
            &[
                "query",
                "s.pkb",
                "root",
                "possibly",
                "AnneInEdiOnDay",
                "--explain"
            ]
        )),
        "candidates = {w1, w2, w3, w4}\n\
         allowed = {w1, w2, w3, w4}\n\
         live contingent AnneInEdiOnDay (epoch 1)\n\
         worlds(AnneInEdiOnDay) = {w1, w4}\n\
         yes | status=contingent | owner=Mes | epoch=1\n"
    );
}

#[test]
fn inconsistent_assertion_exits_2_and_keeps_the_file() {
    let w = workspace();
    let d = w.path();
    ok(pkb(
        d,
        &["assert", "s.pkb", "root", "contingent", "AnneInEdiOnDay"],
    ));
    let before = read(d, "s.pkb");
    let r = pkb(
        d,
        &["assert", "s.pkb", "root", "necessary", "AnneInBriOnDay"],
    );
    assert_eq!(r.code, 2);
    assert_eq!(r.stdout, "");
    assert_eq!(
        r.stderr,
        "error: modal inconsistency in context `root`: contingent AnneInEdiOnDay (epoch 1, stage root), \
         necessary AnneInBriOnDay (proposed)\n"
    );
    assert_eq!(read(d, "s.pkb"), before);
}

#[test]
fn unknown_names_exit_3() {
    let w = workspace();
    let d = w.path();
    for (args, msg) in [
        (
            vec!["assert", "s.pkb", "nowhere", "necessary", "AnneInBriOnDay"],
            "error: unknown context `nowhere`\n",
        ),
        (
            vec!["assert", "s.pkb", "root", "necessary", "Nobody"],
            "error: unknown possibility `Nobody`\n",
        ),
        (
            vec!["query", "s.pkb", "root", "possibly", "Nobody"],
            "error: unknown possibility `Nobody`\n",
        ),
    ] {
        let r = pkb(d, &args);
        assert_eq!((r.code, r.stderr.as_str()), (3, msg), "{args:?}");
    }
}

#[test]
fn malformed_input_exits_1() {
    let w = workspace();
    let d = w.path();
    std::fs::write(d.join("bad.pkb"), "world w1 { x y }\nind w1 a { x q }\n").unwrap();
    let r = pkb(d, &["load", "bad.pkb"]);
    assert_eq!(r.code, 1);
    assert_eq!(
        r.stderr,
        "bad.pkb:2:14: error: atom `q` is not declared in world `w1` (at `q`)\n"
    );

    let r = pkb(d, &["load", "missing.pkb"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.starts_with("missing.pkb: cannot read:"));

    for args in [
        vec!["assert", "s.pkb", "root", "sure", "AnneInBriOnDay"],
        vec!["query", "s.pkb", "root", "wonder", "AnneInEdiOnDay"],
        vec![
            "query",
            "s.pkb",
            "root",
            "possibly",
            "AnneInEdiOnDay",
            "--at",
            "9",
        ],
        vec!["frobnicate"],
    ] {
        let r = pkb(d, &args);
        assert_eq!(r.code, 1, "{args:?}");
        assert!(!r.stderr.is_empty());
    }
    assert_eq!(
        pkb(
            d,
            &[
                "query",
                "s.pkb",
                "root",
                "possibly",
                "AnneInEdiOnDay",
                "--at",
                "9"
            ]
        )
        .stderr,
        "error: epoch 9 is in the future (current epoch is 0)\n"
    );
}

#[test]
fn script_exec_errors_carry_the_line() {
    let w = workspace();
    let d = w.path();
    std::fs::write(
        d.join("c.pkb"),
        "world w1 { x }\nworld w2 { x }\nind w1 a { x }\nposs P { a@w1 }\ncontext c = ctx(P, P)\nassert c contingent P\n",
    )
    .unwrap();
    let r = pkb(d, &["load", "c.pkb"]);
    assert_eq!(r.code, 2);
    assert_eq!(
        r.stderr,
        "c.pkb:6: error: modal inconsistency in context `c`: contingent P (proposed)\n"
    );
}

#[test]
fn fork_merge_and_lineage() {
    let w = workspace();
    let d = w.path();
    ok(pkb(
        d,
        &["assert", "s.pkb", "root", "contingent", "AnneInEdiOnDay"],
    ));
    assert_eq!(
        ok(pkb(d, &["fork", "s.pkb", "a.pkb", "b.pkb"])),
        "root.1 -> a.pkb\nroot.2 -> b.pkb\n"
    );
    ok(pkb(
        d,
        &["assert", "a.pkb", "root", "impossible", "AnneInBriOnDay"],
    ));
    assert_eq!(
        ok(pkb(d, &["merge", "--out", "m.pkb", "a.pkb", "b.pkb"])),
        "merged | stage=root.1_root.2 | epoch=2\n"
    );
    assert_eq!(
        ok(pkb(d, &["lineage", "m.pkb"])),
        "root [0, 2) parents=- events=2\n\
         root.1 [2, 3) parents=root events=1\n\
         root.2 [2, 3) parents=root events=0\n\
         root.1_root.2 [3, ..) parents=root.1,root.2 events=0\n"
    );
    assert_eq!(ok(pkb(d, &["check", "m.pkb"])), "consistent | epoch=2\n");
    // the other order gives the same store
    ok(pkb(d, &["merge", "--out", "n.pkb", "b.pkb", "a.pkb"]));
    assert_eq!(read(d, "m.pkb"), read(d, "n.pkb"));

    // fine on its own branch, but branch a ruled out every AnneInBriOnDay world
    ok(pkb(
        d,
        &["assert", "b.pkb", "root", "contingent", "AnneInBriOnDay"],
    ));
    let r = pkb(d, &["merge", "--out", "x.pkb", "a.pkb", "b.pkb"]);
    assert_eq!(r.code, 2);
    assert!(!d.join("x.pkb").exists());
}

#[test]
fn agents_and_nested_contexts() {
    let w = workspace();
    let d = w.path();
    let r = pkb_stdin(
        d,
        &["repl", "t.pkb"],
        "agent root Bindis necessary\n\
         testify root Bindis @Day30s necessary AnneInEdiOnDay\n\
         agent root Carols possible\n",
    );
    assert_eq!(ok(r), "");
    assert_eq!(
        ok(pkb(d, &["agents", "t.pkb", "root"])),
        "Bindis | existence=necessary | registered=1\nCarols | existence=possible | registered=3\n"
    );
    assert_eq!(
        ok(pkb(
            d,
            &["history", "t.pkb", "root.Bindis@2", "AnneInEdiOnDay"]
        )),
        "necessary | asserted=2 | superseded=-\n"
    );
    assert_eq!(ok(pkb(d, &["agents", "s.pkb", "root"])), "");
}

#[test]
fn repl_matches_the_batch_script() {
    let w = workspace();
    let d = w.path();
    let statements = "assert root contingent AnneInEdiOnDay\n\
                      assert root impossible AnneInBriOnDay\n\
                      epoch\n\
                      assert root possible AnneMetEffie\n";
    let r = pkb_stdin(d, &["repl", "s.pkb", "--out", "r.pkb"], statements);
    assert_eq!(ok(r), "");
    let batch = format!("{}{}", read(d, "s.pkb"), statements);
    std::fs::write(d.join("batch.pkb"), &batch).unwrap();
    let via_batch = modalkb::dsl::serialize(&modalkb::dsl::load_str(&batch).unwrap().into_store());
    assert_eq!(read(d, "r.pkb"), via_batch);
    assert_eq!(ok(pkb(d, &["check", "r.pkb"])), "consistent | epoch=4\n");
}

#[test]
fn repl_reports_and_continues() {
    let w = workspace();
    let d = w.path();
    let r = pkb_stdin(
        d,
        &["repl", "s.pkb", "--out", "r.pkb"],
        "assert root impossible AnneInEdiOnDay\n\
         query root classify AnneInEdiOnDay\n\
         bogus\n\
         assert root possible AnneMetEffie\n\
         :nope\n\
         :lineage\n\
         :save other.pkb\n\
         :quit\n\
         assert root contingent AnneInBriOnDay\n",
    );
    assert_eq!(r.code, 0);
    assert_eq!(
        r.stdout,
        "impossible | owner=Mes | epoch=1\nroot [0, ..) parents=- events=2\n"
    );
    let err: Vec<&str> = r.stderr.lines().collect();
    assert_eq!(err.len(), 3);
    assert_eq!(err[0], "3:1: error: unknown statement `bogus` (at `bogus`)");
    assert!(err[1].starts_with("4: error: modal inconsistency in context `root`"));
    assert_eq!(err[2], "5: error: unknown command `:nope`");
    // nothing after :quit runs, and both saves hold the same store
    assert_eq!(read(d, "r.pkb"), read(d, "other.pkb"));
    assert!(read(d, "r.pkb").ends_with("assert root impossible AnneInEdiOnDay\n"));
}

#[test]
fn repl_serialize_prints_the_canonical_store() {
    let w = workspace();
    let d = w.path();
    let r = pkb_stdin(d, &["repl", "s.pkb", "--out", "r.pkb"], ":serialize\n");
    assert_eq!(
        ok(r),
        std::fs::read_to_string(fixture("anne4.golden.pkb")).unwrap()
    );
}

#[test]
fn output_is_deterministic() {
    let w = workspace();
    let d = w.path();
    ok(pkb(
        d,
        &["assert", "s.pkb", "root", "contingent", "AnneInEdiOnDay"],
    ));
    let args = [
        "query",
        "s.pkb",
        "root",
        "possibly",
        "AnneInEdiOnDay",
        "--explain",
    ];
    let first = ok(pkb(d, &args));
    for _ in 0..5 {
        assert_eq!(ok(pkb(d, &args)), first);
    }
    ok(pkb(d, &["fork", "s.pkb", "a1.pkb", "b1.pkb"]));
    ok(pkb(d, &["fork", "s.pkb", "a2.pkb", "b2.pkb"]));
    assert_eq!(read(d, "a1.pkb"), read(d, "a2.pkb"));
    assert_eq!(read(d, "b1.pkb"), read(d, "b2.pkb"));
}

#[test]
fn in_process_runner_matches_the_binary() {
    let w = workspace();
    let d = w.path();
    let file = d.join("s.pkb");
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = modalkb::cli::run(
        ["pkb", "check", file.to_str().unwrap()],
        &mut std::io::empty(),
        &mut out,
        &mut err,
    );
    assert_eq!(code, 0);
    assert_eq!(
        String::from_utf8(out).unwrap(),
        ok(pkb(d, &["check", "s.pkb"]))
    );
}
