//! File-format contracts: matrix CSV round-trips, edge-list parsing, and
//! the blockmodel spec reader.

use ndarray::{array, Array2};
use netsmooth::graphons::eval_graphon;
use netsmooth::model::{build_probability_matrix, sample_adjacency, sample_latent};
use netsmooth::nbs::estimate_nbs;
use netsmooth::{GraphonSpec, RngSeed};
use netsmooth_cli::io::{
    parse_edge_list, read_blockmodel_spec, read_edge_list, read_matrix_csv, write_edge_list,
    write_matrix_csv, Indexing,
};

fn tmp() -> tempfile::TempDir {
    tempfile::tempdir().expect("tempdir")
}

#[test]
fn identity_round_trips_exactly() {
    let dir = tmp();
    let path = dir.path().join("eye.csv");
    let m: Array2<f64> = Array2::eye(2);
    write_matrix_csv(&path, &m).unwrap();
    let back = read_matrix_csv(&path).unwrap();
    assert_eq!(back, m);
}

#[test]
fn estimate_output_round_trips_exactly() {
    let dir = tmp();
    let path = dir.path().join("phat.csv");
    let seed = RngSeed(4);
    let spec = GraphonSpec::builtin("2", 40).unwrap();
    let xi = sample_latent(40, seed).unwrap();
    let p = build_probability_matrix(&spec, &xi).unwrap();
    let a = sample_adjacency(&p, seed);
    let phat = estimate_nbs(&a, 1.0).unwrap();
    write_matrix_csv(&path, phat.values()).unwrap();
    let back = read_matrix_csv(&path).unwrap();
    // Shortest round-trip formatting restores each entry bit for bit,
    // comfortably inside the 1e-12 contract.
    assert_eq!(&back, phat.values());
}

#[test]
fn empty_file_is_a_format_error() {
    let dir = tmp();
    let path = dir.path().join("empty.csv");
    std::fs::write(&path, "").unwrap();
    let err = read_matrix_csv(&path).unwrap_err();
    assert!(err.to_string().contains("no data rows"), "got: {err}");
}

#[test]
fn comment_only_file_is_a_format_error() {
    let dir = tmp();
    let path = dir.path().join("comments.csv");
    std::fs::write(&path, "# n=3\n\n# nothing else\n").unwrap();
    assert!(read_matrix_csv(&path).is_err());
}

#[test]
fn ragged_rows_are_rejected_with_line_number() {
    let dir = tmp();
    let path = dir.path().join("ragged.csv");
    std::fs::write(&path, "0,1\n0,1,1\n").unwrap();
    let err = read_matrix_csv(&path).unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("line 2") && msg.contains("ragged"), "got: {msg}");
}

#[test]
fn non_numeric_cell_is_rejected_with_line_number() {
    let dir = tmp();
    let path = dir.path().join("bad.csv");
    std::fs::write(&path, "0,1\nx,0\n").unwrap();
    let err = read_matrix_csv(&path).unwrap_err();
    assert!(err.to_string().contains("line 2"), "got: {err}");
}

#[test]
fn zero_indexed_path_graph() {
    let (a, loops) = parse_edge_list("0 1\n1 2\n", Indexing::Zero, None).unwrap();
    assert_eq!(loops, 0);
    let expect = array![[0.0, 1.0, 0.0], [1.0, 0.0, 1.0], [0.0, 1.0, 0.0]];
    assert_eq!(a.values(), &expect);
}

#[test]
fn one_indexed_duplicate_edge_collapses() {
    let (a, loops) = parse_edge_list("1 2\n2 1\n", Indexing::One, None).unwrap();
    assert_eq!(loops, 0);
    assert_eq!(a.n(), 2);
    assert_eq!(a.values()[[0, 1]], 1.0);
    assert_eq!(a.values()[[1, 0]], 1.0);
}

#[test]
fn self_loop_dropped_and_counted() {
    let (a, loops) = parse_edge_list("0 1\n3 3\n", Indexing::Zero, Some(4)).unwrap();
    assert_eq!(loops, 1);
    assert_eq!(a.values()[[3, 3]], 0.0);
    assert_eq!(a.n(), 4);
}

#[test]
fn commas_and_whitespace_both_separate() {
    let (a, _) = parse_edge_list("0,1\n1\t2\n 2 , 3 \n", Indexing::Zero, None).unwrap();
    assert_eq!(a.n(), 4);
    assert_eq!(a.degrees(), vec![1.0, 2.0, 2.0, 1.0]);
}

#[test]
fn malformed_lines_name_the_line() {
    for (text, line) in [
        ("0 1\n2\n", "line 2"),
        ("0 1 2\n", "line 1"),
        ("0 one\n", "line 1"),
    ] {
        let err = parse_edge_list(text, Indexing::Zero, None).unwrap_err();
        assert!(err.to_string().contains(line), "text {text:?} gave: {err}");
    }
}

#[test]
fn negative_id_is_rejected() {
    let err = parse_edge_list("0 -1\n", Indexing::Zero, None).unwrap_err();
    assert!(err.to_string().contains("negative"), "got: {err}");
}

#[test]
fn one_indexed_zero_id_is_rejected() {
    assert!(parse_edge_list("0 1\n", Indexing::One, None).is_err());
}

#[test]
fn declared_node_count_bounds_ids() {
    assert!(parse_edge_list("0 5\n", Indexing::Zero, Some(4)).is_err());
    let (a, _) = parse_edge_list("0 1\n", Indexing::Zero, Some(6)).unwrap();
    assert_eq!(a.n(), 6);
}

#[test]
fn empty_edge_list_needs_a_declared_size() {
    assert!(parse_edge_list("# nothing\n", Indexing::Zero, None).is_err());
}

#[test]
fn edge_list_round_trip_is_identity() {
    let seed = RngSeed(11);
    let spec = GraphonSpec::builtin("3", 30).unwrap();
    let xi = sample_latent(30, seed).unwrap();
    let p = build_probability_matrix(&spec, &xi).unwrap();
    let a = sample_adjacency(&p, seed);

    let dir = tmp();
    let path = dir.path().join("edges.txt");
    write_edge_list(&path, &a).unwrap();
    let (back, loops) = read_edge_list(&path, Indexing::Zero, Some(30)).unwrap();
    assert_eq!(loops, 0);
    assert_eq!(back.values(), a.values());
}

#[test]
fn blockmodel_spec_reads_json() {
    let dir = tmp();
    let path = dir.path().join("bm.json");
    std::fs::write(
        &path,
        r#"{"B": [[0.8, 0.1], [0.1, 0.6]], "boundaries": [0.0, 0.25, 1.0]}"#,
    )
    .unwrap();
    let spec = read_blockmodel_spec(&path).unwrap();
    assert_eq!(spec.id(), "blockmodel");
    assert_eq!(eval_graphon(&spec, 0.1, 0.1).unwrap(), 0.8);
    assert_eq!(eval_graphon(&spec, 0.1, 0.9).unwrap(), 0.1);
    assert_eq!(eval_graphon(&spec, 0.5, 0.9).unwrap(), 0.6);
}

#[test]
fn blockmodel_boundaries_default_to_equal_widths() {
    let dir = tmp();
    let path = dir.path().join("bm.json");
    std::fs::write(&path, r#"{"B": [[0.9, 0.2], [0.2, 0.4]]}"#).unwrap();
    let spec = read_blockmodel_spec(&path).unwrap();
    assert_eq!(eval_graphon(&spec, 0.49, 0.49).unwrap(), 0.9);
    assert_eq!(eval_graphon(&spec, 0.51, 0.51).unwrap(), 0.4);
}

#[test]
fn blockmodel_rejects_bad_files() {
    let dir = tmp();
    for (name, text) in [
        ("not-json.json", "B = 1"),
        ("ragged.json", r#"{"B": [[0.5, 0.5], [0.5]]}"#),
        ("asym.json", r#"{"B": [[0.5, 0.4], [0.3, 0.5]]}"#),
        ("range.json", r#"{"B": [[1.5]]}"#),
        ("empty.json", r#"{"B": []}"#),
        ("bounds.json", r#"{"B": [[0.5]], "boundaries": [0.0, 0.5]}"#),
    ] {
        let path = dir.path().join(name);
        std::fs::write(&path, text).unwrap();
        assert!(read_blockmodel_spec(&path).is_err(), "{name} should fail");
    }
}
