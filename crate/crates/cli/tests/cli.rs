use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const A1: &str = r#"dim = 2
extra_generators = [["1/2", "1/2"]]
rays = [[1, 0], [0, 1]]
coefficients = ["0", "0"]
"#;

const FOUR_RAYS: &str = r#"dim = 3
extra_generators = []
rays = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, -1]]
coefficients = ["0", "0", "0", "0"]
"#;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_toric-mld"));
    c.env_remove("TORIC_MLD_CACHE")
        .env("TORIC_MLD_NO_TIMING", "1");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn germ_file(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.display().to_string()
}

/// Runs and expects exit 1 with a diagnostic starting with `code`.
fn assert_fails_with(args: &[&str], code: &str) {
    let o = run(args);
    assert_eq!(o.status.code(), Some(1), "{args:?}: {}", stderr(&o));
    let err = stderr(&o);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with(&format!("{code}:")), "{err}");
}

#[test]
fn germ_mld_of_a1() {
    let dir = tempfile::tempdir().unwrap();
    let f = germ_file(dir.path(), "a1.germ", A1);
    let o = run(&["germ-mld", &f]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("mld: 1\nwitness: 1/2,1/2\n"), "{out}");
}

#[test]
fn germ_mld_at_face_point() {
    let dir = tempfile::tempdir().unwrap();
    let f = germ_file(dir.path(), "a1.germ", A1);
    let o = run(&["germ-mld", &f, "--face", "0", "--codim", "2"]);
    assert!(stdout(&o).starts_with("mld: 2\n"), "{}", stdout(&o));
    let o = run(&["germ-mld", &f, "--face", "", "--codim", "1"]);
    assert!(stdout(&o).starts_with("mld: 1\n"), "{}", stdout(&o));
}

#[test]
fn divisor_log_discrepancy() {
    let dir = tempfile::tempdir().unwrap();
    let f = germ_file(dir.path(), "a1.germ", A1);
    assert_eq!(stdout(&run(&["divisor-ld", &f, "--e", "1/2,1/2"])), "1\n");
    assert_eq!(stdout(&run(&["divisor-ld", &f, "--e", "3/2,1/2"])), "2\n");
    assert_fails_with(&["divisor-ld", &f, "--e", "-1/2,1/2"], "NotInCone");
    assert_fails_with(&["divisor-ld", &f, "--e", "1,1"], "NotPrimitive");
}

#[test]
fn membership_verdicts_exit_zero() {
    let o = run(&["vcheck", "-x", "1/2,1", "-a", "1,1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "no: index(x_1)=2 does not divide 1\n");
    assert_eq!(
        stdout(&run(&["vcheck", "-x", "1/5,2/5", "-a", "1,1"])),
        "yes\n"
    );
    assert_eq!(
        stdout(&run(&["tilde-check", "-x", "1/2,1", "-a", "1,1"])),
        "yes\n"
    );
    let o = run(&["tilde-check", "-x", "2/3,2/3", "-a", "1,1"]);
    assert_eq!(stdout(&o), "no: m=2 gives <x^(m)-x,a>=-2/3 < 0\n");
}

#[test]
fn classify_single_coordinate() {
    assert_eq!(
        stdout(&run(&["classify-v1", "-x", "1/5", "-a", "3/4"])),
        "yes: x=1/5\n"
    );
    assert!(stdout(&run(&["classify-v1", "-x", "2/5", "-a", "3/4"])).starts_with("no:"));
    assert_eq!(
        stdout(&run(&["classify-v1", "-x", "2/5", "-a", "0"])),
        "yes: a=0\n"
    );
    assert_fails_with(&["classify-v1", "-x", "3/2", "-a", "1"], "InvalidPair");
}

#[test]
fn transfer_output() {
    let o = run(&["transfer", "-x", "1/2,1", "-a", "1,1"]);
    assert_eq!(stdout(&o), "x=(1,1) a=(1/2,1)\nn=(2,1)\npairing: 3/2\n");
    assert_fails_with(&["transfer", "-x", "1/2,1", "-a", "0,1"], "ZeroCoefficient");
    assert_fails_with(&["transfer", "-x", "2/3,2/3", "-a", "1,1"], "NotInTildeV");
}

#[test]
fn enumerate_table() {
    let o = run(&["enumerate", "-d", "2", "-A", "1", "--max-index", "3"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let values: Vec<&str> = out
        .lines()
        .skip(2)
        .map(|l| l.split('\t').next().unwrap())
        .collect();
    assert_eq!(values, vec!["2/3", "1", "2"]);
}

#[test]
fn enumerate_exports() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let json = dir.path().join("out.json");
    let germs = dir.path().join("germs");
    let o = run(&[
        "enumerate",
        "-d",
        "2",
        "-A",
        "1/2,1",
        "--max-index",
        "4",
        "--csv",
        csv.to_str().unwrap(),
        "--json",
        json.to_str().unwrap(),
        "--germs",
        germs.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(&csv).unwrap();
    let mut rows = text.lines();
    assert_eq!(rows.next(), Some("value,s,x,a,germ"));
    for row in rows {
        // the germ column names a file whose mld is the row value
        let germ_path = row.rsplit(',').next().unwrap();
        let value = row.split(',').next().unwrap();
        let o = run(&["germ-mld", germ_path]);
        assert!(stdout(&o).starts_with(&format!("mld: {value}\n")), "{row}");
    }
    assert!(fs::read_to_string(&json).unwrap().contains("\"entries\""));
}

#[test]
fn realize_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for (x, a, d, value) in [
        ("1/2,1/2", "1,1", "2", "1"),
        ("1/2,1/2", "1,1", "4", "1"),
        ("1/3,2/3", "1,1/2", "3", "2/3"),
    ] {
        let out = dir.path().join(format!("g{d}.germ"));
        let o = run(&[
            "realize",
            "-x",
            x,
            "-a",
            a,
            "-d",
            d,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        assert!(stdout(&o).starts_with(&format!("mld: {value}\n")));
        let o = run(&["germ-mld", out.to_str().unwrap()]);
        assert!(
            stdout(&o).starts_with(&format!("mld: {value}\n")),
            "{}",
            stdout(&o)
        );
    }
    assert_fails_with(
        &["realize", "-x", "1/2,1", "-a", "1,1", "-d", "2"],
        "NotInV",
    );
}

#[test]
fn accum_summary_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("acc.csv");
    let o = run(&[
        "accum",
        "-d",
        "2",
        "-A",
        "1",
        "--stages",
        "3,5,9",
        "--radius",
        "1/4",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("not a proof"));
    assert!(out.contains("inclusion: holds"));
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("stage,target,nearest,gap\n"));
    assert!(text.contains("9,1/2,"));
}

#[test]
fn output_is_deterministic() {
    let args = ["enumerate", "-d", "3", "-A", "1/2,1", "--max-index", "3"];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn timing_footer_is_suppressible() {
    let o = Command::new(env!("CARGO_BIN_EXE_toric-mld"))
        .env_remove("TORIC_MLD_NO_TIMING")
        .args(["vcheck", "-x", "1,1", "-a", "1,1"])
        .output()
        .unwrap();
    assert!(stderr(&o).starts_with("time: "));
    let o = Command::new(env!("CARGO_BIN_EXE_toric-mld"))
        .env_remove("TORIC_MLD_NO_TIMING")
        .args(["--no-timing", "vcheck", "-x", "1,1", "-a", "1,1"])
        .output()
        .unwrap();
    assert!(stderr(&o).is_empty());
}

#[test]
fn cache_hits_match_and_audit_detects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let cached = |extra: &[&str]| {
        let mut args = vec!["enumerate", "-d", "2", "-A", "0,1", "--max-index", "4"];
        args.extend_from_slice(extra);
        bin()
            .env("TORIC_MLD_CACHE", dir.path())
            .args(&args)
            .output()
            .unwrap()
    };
    let fresh = run(&["enumerate", "-d", "2", "-A", "0,1", "--max-index", "4"]);
    let miss = cached(&[]);
    let entries: Vec<_> = fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(entries.len(), 1);
    let hit = cached(&[]);
    assert_eq!(fresh.stdout, miss.stdout);
    assert_eq!(fresh.stdout, hit.stdout);
    assert!(cached(&["--audit-cache"]).status.success());

    let path = entries[0].as_ref().unwrap().path();
    let text = fs::read_to_string(&path).unwrap();
    fs::write(
        &path,
        text.replacen("\"value\": \"0\"", "\"value\": \"1/7\"", 1),
    )
    .unwrap();
    let o = cached(&["--audit-cache"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stderr(&o).starts_with("VerificationFailed:"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn invalid_input_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let not_cartier = germ_file(
        dir.path(),
        "nc.germ",
        &FOUR_RAYS.replace(r#"["0", "0", "0", "0"]"#, r#"["0", "0", "0", "1/2"]"#),
    );
    assert_fails_with(&["germ-mld", &not_cartier], "NotRCartier");
    let not_lc = germ_file(
        dir.path(),
        "nlc.germ",
        &A1.replace(r#"["0", "0"]"#, r#"["3/2", "0"]"#),
    );
    assert_fails_with(&["germ-mld", &not_lc], "NotLogCanonical");
    let not_prim = germ_file(
        dir.path(),
        "np.germ",
        &A1.replace("[[1, 0], [0, 1]]", "[[2, 0], [0, 1]]"),
    );
    assert_fails_with(&["germ-mld", &not_prim], "NotPrimitive");
    let non_convex = germ_file(
        dir.path(),
        "ncv.germ",
        "dim = 2\nrays = [[1, 0], [0, 1], [-1, -1]]\ncoefficients = [0, 0, 0]\n",
    );
    assert_fails_with(&["germ-mld", &non_convex], "NonConvex");
    let four = germ_file(dir.path(), "four.germ", FOUR_RAYS);
    assert_fails_with(&["germ-mld", &four, "--face", "2,3"], "NotAFace");
    assert_fails_with(
        &[
            "enumerate",
            "-d",
            "5",
            "-A",
            "0,1/2,1",
            "--max-index",
            "100",
        ],
        "ResourceLimit",
    );
    assert_fails_with(&["vcheck", "-x", "0.5,1", "-a", "1,1"], "Parse");
    assert_fails_with(
        &["enumerate", "-d", "2", "-A", "1/2", "--max-index", "3"],
        "InvalidCoefficientSet",
    );
    assert_fails_with(&["no-such-command"], "Parse");
    assert_fails_with(&["germ-mld", "/nonexistent/file.germ"], "Parse");
}

#[test]
fn help_succeeds() {
    let o = run(&["--help"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("enumerate"));
}
