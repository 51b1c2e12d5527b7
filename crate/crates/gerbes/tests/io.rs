use std::fs;
use std::path::PathBuf;

use gerbes::json::{self, Node, ReadError};
use serde_json::json;

fn fixture_files() -> Vec<PathBuf> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    files
}

#[test]
fn every_fixture_round_trips_byte_for_byte() {
    let files = fixture_files();
    assert!(files.len() >= 8);
    for path in files {
        let text = fs::read_to_string(&path).unwrap();
        let v = json::parse(&text).unwrap();
        let out = json::reencode(Node::root(&v)).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(json::render(&out), text, "{}", path.display());
    }
}

#[test]
fn gerbe_round_trip_keeps_the_cocycle_verdict() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/cup_gerbe.json");
    let v = json::parse(&fs::read_to_string(path).unwrap()).unwrap();
    let (k, g) = json::read_datum_doc::<3>(Node::root(&v)).unwrap();
    assert!(g.is_cocycle(&k));
    let again = json::render(&json::datum_doc(&k, &g));
    let (k2, g2) = json::read_datum_doc::<3>(Node::root(&json::parse(&again).unwrap())).unwrap();
    assert_eq!((k2, &g2), (k.clone(), &g));

    // break one curving value; the verdict must survive the trip as well
    let mut broken = v.clone();
    let entry = &mut broken["B"][0][1]["values"][0][1];
    *entry = json!("1/7");
    let (k, g) = json::read_datum_doc::<3>(Node::root(&broken)).unwrap();
    assert!(!g.is_cocycle(&k));
    let text = json::render(&json::datum_doc(&k, &g));
    let (k, g) = json::read_datum_doc::<3>(Node::root(&json::parse(&text).unwrap())).unwrap();
    assert!(!g.is_cocycle(&k));
}

#[test]
fn zero_denominator_is_reported_at_its_pointer() {
    let doc = json!({
        "schema": "v1",
        "kind": "cochain",
        "complex": "sphere2",
        "degree": 1,
        "ring": "Q",
        "values": [[[0, 1], "1/2"], [[1, 2], "1/0"]],
    });
    match json::read_cochain_doc(Node::root(&doc)) {
        Err(ReadError::Io(e)) => assert_eq!(e.pointer, "/values/1/1"),
        other => panic!("expected an IO error, got {other:?}"),
    }
}

#[test]
fn malformed_documents_point_at_the_problem() {
    let bad_schema = json!({ "schema": "v2", "kind": "complex", "maximal_simplices": [] });
    let bad_simplex = json!({ "schema": "v1", "kind": "complex", "maximal_simplices": [[0, 1], [2, 1]] });
    let bad_ring = json!({ "schema": "v1", "kind": "cochain", "complex": "sphere2", "degree": 0, "ring": "R", "values": [] });
    let wrong_kind = json!({ "schema": "v1", "kind": "line", "complex": "sphere2" });
    let cases = [
        (json::read_complex_doc(Node::root(&bad_schema)).err(), "/schema"),
        (json::read_complex_doc(Node::root(&bad_simplex)).err(), "/maximal_simplices/1"),
        (json::read_cochain_doc(Node::root(&bad_ring)).err(), "/ring"),
        (json::read_datum_doc::<3>(Node::root(&wrong_kind)).err(), "/kind"),
    ];
    for (err, pointer) in cases {
        match err {
            Some(ReadError::Io(e)) => assert_eq!(e.pointer, pointer, "{e}"),
            other => panic!("expected an IO error at {pointer}, got {other:?}"),
        }
    }
    // a value outside the complex is a domain error, still located
    let off = json!({ "schema": "v1", "kind": "cochain", "complex": "sphere2", "degree": 1, "ring": "Q", "values": [[[0, 9], "1/2"]] });
    match json::read_cochain_doc(Node::root(&off)) {
        Err(ReadError::Domain { pointer, .. }) => assert_eq!(pointer, ""),
        other => panic!("expected a domain error, got {other:?}"),
    }
    assert!(json::parse("{").unwrap_err().pointer.is_empty());
}

#[test]
fn fractions_are_written_in_lowest_terms() {
    let doc = json!({ "schema": "v1", "kind": "cochain", "complex": "circle:3", "degree": 0, "ring": "Q", "values": [[[0], "4/6"], [[1], "-3"]] });
    let (k, c) = json::read_cochain_doc(Node::root(&doc)).unwrap();
    let out = json::cochain_doc(&k, &c);
    assert_eq!(out["values"], json!([[[0], "2/3"], [[1], "-3/1"]]));
}
