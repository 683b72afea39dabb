use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use hmn::io::{read_hmnf, read_histogram};
use hmn::metrics::ks_distance;

fn hmn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hmn"))
        .args(args)
        .stdin(Stdio::null())
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn ok(args: &[&str]) -> String {
    let out = hmn(args);
    assert_eq!(code(&out), 0, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn path(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const TRIANGLE_HMNF: &str = "hmnf 1\ndirected false\n[layers] 1\n0\t1\n[node_types] 1\n0\t⊥\n\
[edge_types] 1\n0\t⊥\n[nodes] 3\n0\t0\t0\n1\t0\t0\n2\t0\t0\n[edges] 3\n\
0\t0\t1\t0\t0\t1\n0\t0\t2\t0\t0\t1\n1\t0\t2\t0\t0\t1\n";

#[test]
fn homogeneous_preset() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "g.hmnf");
    ok(&["generate", "--preset", "homogeneous", "--nodes", "100", "--seed", "7", "--out", s(&out)]);
    let g = read_hmnf(&fs::read(&out).unwrap()).unwrap();
    assert_eq!(g.node_count(), 100);
    assert_eq!(g.layer_count(), 1);
    assert_eq!(g.node_type_count(), 1);
    let manifest = fs::read_to_string(dir.path().join("g.hmnf.manifest")).unwrap();
    assert!(manifest.contains("seed=7\n"));
    assert!(manifest.lines().any(|l| l.starts_with("m=")));
    assert!(manifest.contains("stream.intra=2\n"));
}

#[test]
fn presets_shape_the_network() {
    let g = read_hmnf(ok(&["generate", "--preset", "hmn", "--nodes", "60", "--seed", "1"]).as_bytes()).unwrap();
    assert_eq!((g.layer_count(), g.node_type_count()), (3, 3));
    let g = read_hmnf(
        ok(&["generate", "--preset", "heterogeneous", "--types-per-layer", "4", "--nodes", "30"]).as_bytes(),
    )
    .unwrap();
    assert_eq!((g.layer_count(), g.node_type_count()), (1, 4));
    let g = read_hmnf(ok(&["generate", "--preset", "multilayer", "--layers", "5", "--nodes", "50"]).as_bytes()).unwrap();
    assert_eq!((g.layer_count(), g.node_type_count()), (5, 1));
}

#[test]
fn thirty_seven_layer_run() {
    let out = ok(&[
        "generate", "--nodes", "2000", "--layers", "37", "--m", "const", "2", "--alpha", "1", "--beta", "0",
        "--seed", "3",
    ]);
    let g = read_hmnf(out.as_bytes()).unwrap();
    assert_eq!(g.layer_count(), 37);
    assert_eq!(g.node_count(), 2000);
}

#[test]
fn identical_flags_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = path(dir.path(), name);
        let manifest = path(dir.path(), &format!("{name}.txt"));
        ok(&[
            "generate", "--nodes", "500", "--layers", "3", "--m", "normal", "2,1", "--alpha", "1",
            "--beta", "0.5", "--seed", "11", "--out", s(&out), "--manifest", s(&manifest),
        ]);
        let text = fs::read_to_string(&manifest).unwrap();
        let stable: Vec<&str> = text.lines().filter(|l| !l.starts_with("output=")).collect();
        (fs::read(&out).unwrap(), stable.join("\n"))
    };
    assert_eq!(run("a"), run("b"));
}

#[test]
fn m_forms() {
    let dir = tempfile::tempdir().unwrap();
    let mfile = path(dir.path(), "m.txt");
    fs::write(&mfile, "2 1\n0 3\n").unwrap();
    let manifest = path(dir.path(), "m.manifest");
    let out = hmn(&[
        "generate", "--nodes", "40", "--layers", "2", "--m", "file", s(&mfile), "--manifest", s(&manifest),
    ]);
    assert_eq!(code(&out), 0);
    assert!(fs::read_to_string(&manifest).unwrap().contains("m=2 1; 0 3\n"));
    assert_eq!(code(&hmn(&["generate", "--nodes", "10", "--m", "3"])), 0);
    let single = path(dir.path(), "single.manifest");
    ok(&["generate", "--nodes", "10", "--m", "3", "--seed", "5", "--manifest", s(&single)]);
    let text = fs::read_to_string(&single).unwrap();
    assert!(text.contains("m=3\n") && text.contains("seed=5\n"), "{text}");
    assert_eq!(code(&hmn(&["generate", "--nodes", "10", "--m", "sometimes", "3"])), 1);
    assert_eq!(code(&hmn(&["generate", "--nodes", "10", "--layers", "2", "--m", "file", s(&mfile), "--layers", "3"])), 1);
    assert_eq!(code(&hmn(&["generate", "--nodes", "10", "--m", "file", "/nonexistent/m.txt"])), 2);
}

#[test]
fn config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = path(dir.path(), "gen.toml");
    fs::write(&cfg, "nodes = 80\nlayers = 2\nm = [[2, 1], [1, 2]]\nalpha = 1.0\nbeta = 0.0\nseed = 5\n").unwrap();
    let a = ok(&["generate", "--config", s(&cfg)]);
    let g = read_hmnf(a.as_bytes()).unwrap();
    assert_eq!((g.node_count(), g.layer_count()), (80, 2));
    let b = ok(&["generate", "--config", s(&cfg), "--nodes", "90"]);
    assert_eq!(read_hmnf(b.as_bytes()).unwrap().node_count(), 90);
    fs::write(&cfg, "nodes = 80\nunknown = 1\n").unwrap();
    assert_eq!(code(&hmn(&["generate", "--config", s(&cfg)])), 2);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&hmn(&["generate", "--nodes", "5", "--bogus"])), 1);
    assert_eq!(code(&hmn(&["frobnicate"])), 1);
    assert_eq!(code(&hmn(&[])), 1);
    assert_eq!(code(&hmn(&["generate"])), 1);
    assert_eq!(code(&hmn(&["generate", "--nodes", "5", "--alpha", "0", "--beta", "0"])), 1);
    assert_eq!(code(&hmn(&["generate", "--preset", "homogeneous", "--layers", "2", "--nodes", "5"])), 1);
    assert_eq!(code(&hmn(&["--help"])), 0);
    assert_eq!(code(&hmn(&["--version"])), 0);
}

#[test]
fn triangle_stats() {
    let dir = tempfile::tempdir().unwrap();
    let tri = path(dir.path(), "tri.hmnf");
    fs::write(&tri, TRIANGLE_HMNF).unwrap();
    let out = ok(&["stats", "--in", s(&tri)]);
    let mut lines = out.lines();
    assert!(lines
        .next()
        .unwrap()
        .starts_with("Nodes,Edges,Density,AvgDegree,Assortativity,Triangles,AvgTrianglesPerNode,AvgCC,CliqueNumber"));
    assert!(lines.next().unwrap().starts_with("3,3,1.0,2.0,NA,1,1.0,1.0,3,"));
    let json: serde_json::Value = serde_json::from_str(&ok(&["stats", "--in", s(&tri), "--format", "json"])).unwrap();
    assert_eq!(json["summary"]["density"], 1.0);
    assert_eq!(json["averages"]["degree"], 1.0);
}

#[test]
fn empty_scope_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let f = path(dir.path(), "two_types.hmnf");
    let text = TRIANGLE_HMNF.replace("[node_types] 1\n0\t⊥\n", "[node_types] 2\n0\ta\n1\tb\n");
    fs::write(&f, text).unwrap();
    assert_eq!(code(&hmn(&["stats", "--in", s(&f), "--types", "a"])), 0);
    assert_eq!(code(&hmn(&["stats", "--in", s(&f), "--types", "b"])), 2);
    assert_eq!(code(&hmn(&["dist", "--in", s(&f), "--types", "b"])), 2);
    assert_eq!(code(&hmn(&["stats", "--in", s(&f), "--layers", "nope"])), 2);
    fs::write(&f, "hmnf 1\ndirected false\n[layers] 1\n").unwrap();
    assert_eq!(code(&hmn(&["stats", "--in", s(&f)])), 2);
}

#[test]
fn per_layer_stats() {
    let dir = tempfile::tempdir().unwrap();
    let mux = path(dir.path(), "mux.txt");
    // layer 1: triangle; layer 2: a single edge, node 2 isolated there
    fs::write(&mux, "1 0 1\n1 1 2\n1 0 2\n2 0 1\n").unwrap();
    let out = ok(&["stats", "--in", s(&mux), "--from", "multiplex", "--per-layer"]);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[1].starts_with("1,3.0,3.0,1.0,"));
    assert!(rows[2].starts_with("2,2.0,1.0,1.0,"));
    assert!(rows[3].starts_with("mean,2.5,2.0,1.0,"));
    let kept = ok(&["stats", "--in", s(&mux), "--from", "multiplex", "--per-layer", "--keep-isolated"]);
    assert!(kept.lines().nth(2).unwrap().starts_with("2,3.0,1.0,"));
    assert_eq!(code(&hmn(&["stats", "--in", s(&mux), "--from", "multiplex", "--per-layer", "--layers", "1"])), 1);
}

#[test]
fn star_distribution_and_handshake() {
    let dir = tempfile::tempdir().unwrap();
    let star = path(dir.path(), "star.txt");
    fs::write(&star, "0 1\n0 2\n0 3\n").unwrap();
    let out = ok(&["dist", "--in", s(&star), "--from", "edgelist"]);
    assert_eq!(out, "degree,count\n1,3\n3,1\n");

    let g = ok(&["generate", "--preset", "multilayer", "--nodes", "300", "--m", "const", "2", "--seed", "4"]);
    let gfile = path(dir.path(), "g.hmnf");
    fs::write(&gfile, &g).unwrap();
    let edges = read_hmnf(g.as_bytes()).unwrap().edge_count();
    let h = read_histogram(ok(&["dist", "--in", s(&gfile)]).as_bytes()).unwrap();
    assert_eq!(h.degree_sum(), 2 * edges);
}

#[test]
fn inter_split_on_multiplex_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let mux = path(dir.path(), "mux.txt");
    fs::write(&mux, "1 0 1\n2 1 2\n3 0 2\n").unwrap();
    let out = ok(&["dist", "--in", s(&mux), "--from", "multiplex", "--split", "inter"]);
    assert_eq!(out, "degree,count\n0,9\n");
}

#[test]
fn smoothed_distribution() {
    let dir = tempfile::tempdir().unwrap();
    let f = path(dir.path(), "ba.hmnf");
    fs::write(&f, ok(&["generate", "--baseline", "ba", "--nodes", "3000", "--m", "const", "2", "--seed", "1"])).unwrap();
    let out = ok(&["dist", "--in", s(&f), "--smooth", "8"]);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("bin_low,bin_high,center,count,density"));
    let total: usize = lines.map(|l| l.split(',').nth(3).unwrap().parse::<usize>().unwrap()).sum();
    assert_eq!(total, 3000);
    assert_eq!(code(&hmn(&["dist", "--in", s(&f), "--smooth", "0"])), 1);
}

#[test]
fn compare_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let a = path(dir.path(), "a.csv");
    let b = path(dir.path(), "b.csv");
    fs::write(&a, "degree,count\n1,4\n2,2\n").unwrap();
    fs::write(&b, "degree,count\n5,1\n7,3\n").unwrap();
    let out = hmn(&["compare", "--a", s(&a), "--b", s(&a), "--threshold", "0"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("0.0\n"));
    let out = hmn(&["compare", "--a", s(&a), "--b", s(&b)]);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8_lossy(&out.stdout), "1.0\n");
    assert_eq!(code(&hmn(&["compare", "--a", s(&a), "--b", s(&b), "--threshold", "0.5"])), 3);
    fs::write(&b, "degree,count\n1,x\n").unwrap();
    assert_eq!(code(&hmn(&["compare", "--a", s(&a), "--b", s(&b)])), 2);
}

#[test]
fn generator_matches_ba_histogram() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..5u64 {
        let seed = seed.to_string();
        let ba = path(dir.path(), "ba.hmnf");
        let gen = path(dir.path(), "gen.hmnf");
        ok(&["generate", "--baseline", "ba", "--nodes", "10000", "--m", "const", "2", "--seed", &seed, "--out", s(&ba)]);
        ok(&[
            "generate", "--nodes", "10000", "--layers", "1", "--m", "const", "2", "--alpha", "1", "--beta", "0",
            "--seed", &seed, "--out", s(&gen),
        ]);
        let ha = path(dir.path(), "ba.csv");
        let hg = path(dir.path(), "gen.csv");
        ok(&["dist", "--in", s(&ba), "--out", s(&ha)]);
        ok(&["dist", "--in", s(&gen), "--out", s(&hg)]);
        let out = hmn(&["compare", "--a", s(&ha), "--b", s(&hg), "--threshold", "0.15"]);
        assert_eq!(code(&out), 0, "seed {seed}: {}", String::from_utf8_lossy(&out.stdout));
        let a = read_histogram(&fs::read(&ha).unwrap()).unwrap();
        let b = read_histogram(&fs::read(&hg).unwrap()).unwrap();
        assert!(ks_distance(&a, &b).unwrap() <= 0.15);
    }
}

#[test]
fn convert_embeddings() {
    let dir = tempfile::tempdir().unwrap();
    let mux = path(dir.path(), "mux.txt");
    fs::write(&mux, "1 0 1 1\n2 0 1 1\n").unwrap();
    let g = read_hmnf(ok(&["convert", "--from", "multiplex", "--in", s(&mux)]).as_bytes()).unwrap();
    assert_eq!((g.node_count(), g.layer_count(), g.edge_count()), (2, 2, 2));

    let tri = path(dir.path(), "tri.txt");
    fs::write(&tri, "0 1\n1 2\n2 0\n").unwrap();
    let once = path(dir.path(), "once.hmnf");
    ok(&["convert", "--from", "edgelist", "--in", s(&tri), "--out", s(&once)]);
    let g = read_hmnf(&fs::read(&once).unwrap()).unwrap();
    assert_eq!((g.layer_count(), g.edge_count()), (1, 3));
    assert_eq!(fs::read_to_string(&once).unwrap(), TRIANGLE_HMNF);

    let twice = path(dir.path(), "twice.hmnf");
    ok(&["convert", "--from", "hmnf", "--in", s(&once), "--out", s(&twice)]);
    assert_eq!(fs::read(&once).unwrap(), fs::read(&twice).unwrap());
}

#[test]
fn convert_reports_parse_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = path(dir.path(), "bad.txt");
    fs::write(&bad, "0 1\n1 1\n").unwrap();
    let out = hmn(&["convert", "--from", "edgelist", "--in", s(&bad)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert_eq!(code(&hmn(&["convert", "--from", "multiplex", "--in", s(&path(dir.path(), "missing"))])), 2);
}

#[test]
fn stats_on_homogeneous_input_matches_classic_values() {
    let dir = tempfile::tempdir().unwrap();
    // path 0-1-2-3
    let p = path(dir.path(), "path.txt");
    fs::write(&p, "0 1\n1 2\n2 3\n").unwrap();
    let json: serde_json::Value =
        serde_json::from_str(&ok(&["stats", "--in", s(&p), "--from", "edgelist", "--format", "json"])).unwrap();
    let avg = &json["averages"];
    // degree centralities 1/3, 2/3, 2/3, 1/3
    assert!((avg["degree"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    // betweenness 0, 2, 2, 0 over unordered pairs
    assert!((avg["betweenness"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    // harmonic closeness: (1 + 1/2 + 1/3) * 2 + (1 + 1 + 1/2) * 2
    let expect = (2.0 * (1.0 + 0.5 + 1.0 / 3.0) + 2.0 * 2.5) / 4.0;
    assert!((avg["closeness"].as_f64().unwrap() - expect).abs() < 1e-12);
    assert_eq!(json["summary"]["clique_number"], 2);
}
