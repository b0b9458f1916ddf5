use freespin::fixtures::{armstrong_text, flat_text};

fn read(name: &str) -> String {
    let path = format!("{}/../../fixtures/{name}.frame", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

#[test]
fn shipped_frames_match_builders() {
    for l in 4..=6 {
        assert_eq!(read(&format!("flat_l{l}")), flat_text(l));
        assert_eq!(read(&format!("armstrong_l{l}")), armstrong_text(l));
    }
}

#[test]
fn obstructed_frame_parses() {
    let r = freespin::report::analyze_text(&read("obstructed_l4")).unwrap();
    assert!(!r.T.is_empty());
    assert_eq!(r.extension_verdict, freespin::normalization::ExtensionVerdict::ObstructedByT);
}
