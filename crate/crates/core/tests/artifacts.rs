use std::path::PathBuf;

use cohoquant::artifact::{self, Artifact, Kind};
use cohoquant::associator::{solve_associator, AssocOptions};
use cohoquant::specialize::LieBialgebra;
use cohoquant::twist::{build_r, solve_twist};
use cohoquant::ualg::{make_r, USeries};
use cohoquant::Error;

fn golden(name: &str, text: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("COHOQUANT_BLESS").is_some() {
        std::fs::write(&path, text).unwrap();
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(text, want, "golden file {name} differs");
}

#[test]
fn r_golden() {
    let r = USeries::from_element(&make_r(), 1);
    golden("r.art", &Artifact::new(Kind::USeries, artifact::encode_useries(&r)).to_text());
}

#[test]
fn borel_golden() {
    golden("borel.art", &Artifact::new(Kind::Bialgebra, artifact::encode_bialgebra(&LieBialgebra::borel())).to_text());
}

#[test]
fn associator_golden() {
    let phi = solve_associator(3, AssocOptions::default()).unwrap();
    golden("phi3.art", &Artifact::new(Kind::Associator, artifact::encode_associator(&phi)).to_text());
}

#[test]
fn solver_outputs_round_trip() {
    let phi = solve_associator(3, AssocOptions::default()).unwrap();
    let tw = solve_twist(&phi, 3).unwrap();
    let rm = build_r(&tw.j).unwrap();

    let text = Artifact::new(Kind::Twist, artifact::encode_twist(&tw, &phi)).to_text();
    let a = Artifact::parse_kind(&text, Kind::Twist).unwrap();
    let (tw2, phi2) = artifact::decode_twist(&a.payload, "$").unwrap();
    assert_eq!((tw2, phi2), (tw, phi));

    let text = Artifact::new(Kind::RMatrix, artifact::encode_rmatrix(&rm)).to_text();
    let a = Artifact::parse_kind(&text, Kind::RMatrix).unwrap();
    assert_eq!(artifact::decode_rmatrix(&a.payload, "$").unwrap(), rm);
    assert!(matches!(Artifact::parse_kind(&text, Kind::Twist), Err(Error::Decode { .. })));
}

#[test]
fn rejects_bad_envelopes() {
    let good = Artifact::new(Kind::Bialgebra, artifact::encode_bialgebra(&LieBialgebra::borel())).to_text();
    let cases = [
        good.replace("\"version\": 1", "\"version\": 2"),
        good.replace("\"kind\": \"bialgebra\"", "\"kind\": \"widget\""),
        good.replace("\"version\": 1", "\"version\": 1,\n  \"extra\": 0"),
        good.replace("\"H\"", "\"K\""),
    ];
    for c in &cases {
        assert!(matches!(Artifact::parse(c), Err(Error::Decode { .. })), "{c}");
    }
    match Artifact::parse(&good[..good.len() / 2]) {
        Err(Error::Parse { line, column, .. }) => assert!(line > 1 && column > 0),
        other => panic!("{other:?}"),
    }
}

#[test]
fn rejects_bad_payloads() {
    let bad = [
        (Kind::Bialgebra, r#"{"bracket":[[0,1,1,"1/1"],[0,1,1,"2/1"]],"cobracket":[],"names":["H","E"]}"#),
        (Kind::Bialgebra, r#"{"bracket":[[0,1,5,"1/1"]],"cobracket":[],"names":["H","E"]}"#),
        (Kind::Bialgebra, r#"{"bracket":[],"cobracket":[],"names":[]}"#),
        (Kind::USeries, r#"{"comps":[[],[[[[[1],[]],[[],[1]]],"1/1"]]],"order":1,"slots":3}"#),
        (Kind::USeries, r#"{"comps":[[[[[[1],[]],[[],[1]]],"1/1"]]],"order":0,"slots":2}"#),
        (Kind::USeries, r#"{"comps":[[],[[[[[2],[]],[[],[2]]],"1/1"]]],"order":1,"slots":2}"#),
        (Kind::USeries, r#"{"comps":[],"order":99,"slots":2}"#),
        (Kind::ChordSeries, r#"{"comps":[[],[[[[2,1]],"1/1"]]],"order":1,"strands":3}"#),
        (Kind::ChordSeries, r#"{"comps":[[],[[[[1,4]],"1/1"]]],"order":1,"strands":3}"#),
        (Kind::ChordSeries, r#"{"comps":[[],[],[[[[2,3],[1,2]],"1/1"]]],"order":2,"strands":3}"#),
        (Kind::Associator, r#"{"order":1,"phi":{"comps":[[],[]],"order":1,"strands":2}}"#),
        (Kind::Report, r#"{"anchor":"x","checks":{},"ok":"yes"}"#),
    ];
    for (kind, payload) in bad {
        let v: serde_json::Value = serde_json::from_str(payload).unwrap();
        let res = artifact::decode_any(&Artifact::new(kind, v));
        assert!(matches!(res, Err(Error::Decode { .. })), "{payload}: {res:?}");
    }
}
