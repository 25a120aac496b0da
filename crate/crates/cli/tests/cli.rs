use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn mgg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mgg"))
        .args(args)
        .output()
        .unwrap()
}

fn mgg_with_input(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_mgg"))
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
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

const SINGLE_RM: &str = "mgg-pos 1\ngame nimg-rm\nconvention misere\nkind ugraph\nvertices 1\nedges 0\nstart 0\nw 0 1\n";

const PATH_RM: &str = "mgg-pos 1
game nimg-rm
convention misere
kind ugraph
vertices 3
edges 2
start 0
w 0 1
w 1 2
w 2 1
e 0 1
e 1 2
";

const TRIANGLE_DIGRAPH: &str = "mgg-pos 1
game vgeo
convention normal
kind digraph
vertices 3
edges 3
start 0
e 0 1
e 1 2
e 2 0
";

#[test]
fn solve_single_vertex_is_p() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "one.pos", SINGLE_RM);
    let o = mgg(&["solve", &f]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("outcome P"));
}

#[test]
fn solve_bipartite_reports_matching_strategy() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "path.pos", PATH_RM);
    let fast = mgg(&["solve", &f, "--method", "matching"]);
    assert_eq!(fast.status.code(), Some(0));
    let text = stdout(&fast);
    assert!(text.contains("solver bipartite-matching"), "{text}");
    let slow = stdout(&mgg(&["solve", &f, "--method", "exhaustive"]));
    let outcome = |t: &str| {
        t.lines()
            .find(|l| l.starts_with("outcome"))
            .unwrap()
            .to_owned()
    };
    assert_eq!(outcome(&text), outcome(&slow));
    if outcome(&text) == "outcome N" {
        assert!(text.contains("strategy: matching-following"));
        assert!(text.contains("move "));
    }
}

#[test]
fn matching_method_not_applicable() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "tri.pos", TRIANGLE_DIGRAPH);
    let o = mgg(&["solve", &f, "--method", "matching"]);
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(mgg(&["solve", &f]).status.code(), Some(0));
}

#[test]
fn tiny_budget_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let mut text =
        String::from("mgg-pos 1\ngame vgeo\nconvention normal\nkind digraph\nvertices 8\n");
    let edges: Vec<(usize, usize)> = (0..8)
        .flat_map(|u| (0..8).filter(move |&v| v != u).map(move |v| (u, v)))
        .collect();
    text += &format!("edges {}\nstart 0\n", edges.len());
    for (u, v) in edges {
        text += &format!("e {u} {v}\n");
    }
    let f = write(dir.path(), "k8.pos", &text);
    let o = mgg(&["solve", &f, "--method", "exhaustive", "--budget", "5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn parse_error_exits_1_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "bad.pos",
        "mgg-pos 1\ngame nimg-rm\nconvention sideways\n",
    );
    let o = mgg(&["solve", &f]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn reduce_vgeo_dir_doubles_vertices() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "tri.pos", TRIANGLE_DIGRAPH);
    let out = dir.path().join("out.pos");
    let o = mgg(&["reduce", "vgeo-dir", &f, out.to_str().unwrap()]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let target = fs::read_to_string(&out).unwrap();
    assert!(target.contains("vertices 6"));
    assert!(target.contains("convention misere"));
    let names = fs::read_to_string(dir.path().join("out.pos.names")).unwrap();
    assert_eq!(names.lines().count(), 6);
    assert!(names.contains("v2_2 -> 5"));

    let src = stdout(&mgg(&["solve", &f]));
    let tgt = stdout(&mgg(&["solve", out.to_str().unwrap()]));
    assert_eq!(src.lines().next(), tgt.lines().next());
}

#[test]
fn reduce_rejects_wrong_source() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "one.pos", SINGLE_RM);
    let out = dir.path().join("out.pos");
    assert_eq!(
        mgg(&["reduce", "vgeo-dir", &f, out.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        mgg(&["reduce", "nope", &f, out.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn verify_nimg_mr_grid_agrees() {
    let o = mgg(&[
        "verify", "nimg-mr", "--n", "3", "--m", "3", "--wmax", "2", "--trials", "200", "--seed",
        "7",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(
        stdout(&o).contains("nimg-mr: 200/200 agree"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn verify_is_identical_sequential_and_parallel() {
    let args = [
        "verify", "egeo-dir", "--n", "4", "--m", "5", "--trials", "30", "--seed", "3",
    ];
    let a = stdout(&mgg(&args));
    let mut seq = args.to_vec();
    seq.push("--sequential");
    let b = stdout(&mgg(&seq));
    let table = |s: &str| {
        s.lines()
            .filter(|l| !l.contains("agree,"))
            .map(str::to_owned)
            .collect::<Vec<_>>()
    };
    assert_eq!(table(&a), table(&b));
}

#[test]
fn verify_infeasible_grid_exits_1() {
    let o = mgg(&[
        "verify", "vgeo-dir", "--n", "2", "--m", "5", "--trials", "3",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_budget_exhaustion_exits_2() {
    let o = mgg(&[
        "verify",
        "vgeo-undir",
        "--n",
        "4",
        "--m",
        "4",
        "--trials",
        "3",
        "--budget",
        "2",
        "-q",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bench_prints_size_and_time() {
    let o = mgg(&[
        "bench", "matching", "--n", "2000", "--m", "10000", "--seed", "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("size ") && text.contains(" ms"), "{text}");
}

#[test]
fn play_reprompts_on_illegal_input() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "path.pos", PATH_RM);
    let o = mgg_with_input(&["play", &f], "banana\n0 2\n0 1\n0 1\n0 2\n0 0\n");
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("illegal move \"banana\""), "{text}");
    assert!(text.contains("illegal move \"0 2\""), "{text}");
    assert!(text.contains("*0 w=1: 1"));
    assert!(text.contains("engine"));
}

#[test]
fn play_engine_first_wins_n_position() {
    let dir = tempfile::tempdir().unwrap();
    let edge = "mgg-pos 1\ngame nimg-rm\nconvention misere\nkind ugraph\nvertices 2\nedges 1\nstart 0\nw 0 1\nw 1 1\ne 0 1\n";
    let f = write(dir.path(), "edge.pos", edge);
    let o = mgg_with_input(&["play", &f, "--engine-first"], "0 0\n0 1\n");
    let text = stdout(&o);
    assert!(
        text.contains("engine (bipartite-matching) plays 0 1"),
        "{text}"
    );
    assert!(text.contains("engine wins"), "{text}");
}
