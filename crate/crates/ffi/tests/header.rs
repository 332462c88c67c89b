use std::path::PathBuf;
use std::process::Command;

fn header() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/reslie.h")
}

#[test]
fn header_declares_every_entry_point() {
    let text = std::fs::read_to_string(header()).expect("header generated by the build script");
    for name in [
        "reslie_last_error",
        "reslie_algebra_from_json",
        "reslie_algebra_heisenberg",
        "reslie_algebra_witt",
        "reslie_algebra_free",
        "reslie_algebra_shape",
        "reslie_pmap_eval",
        "reslie_cohomology_dim",
        "reslie_deformation_check",
        "reslie_classify_heisenberg",
        "reslie_algebra_to_json",
        "reslie_string_free",
    ] {
        assert!(text.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(text.contains("typedef struct ReslieAlgebra ReslieAlgebra;"));
    assert!(text.contains("RESLIE_STATUS_OK = 0"));
}

#[test]
fn header_compiles_as_c() {
    let Ok(status) = Command::new("cc").args(["-fsyntax-only", "-x", "c", "-std=c99", "-Wall", "-Werror"]).arg(header()).status() else {
        eprintln!("no C compiler available; skipping");
        return;
    };
    assert!(status.success());
}
