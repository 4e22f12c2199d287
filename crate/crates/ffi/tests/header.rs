use std::path::PathBuf;
use std::process::Command;

fn header() -> (PathBuf, String) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/dyadic_sparse.h");
    let text = std::fs::read_to_string(&path).expect("header is generated by the build script");
    (path, text)
}

#[test]
fn header_declares_every_exported_function() {
    let (_, text) = header();
    let src = include_str!("../src/lib.rs");
    let names: Vec<&str> = src.split("extern \"C\" fn ").skip(1).map(|rest| rest.split('(').next().unwrap()).collect();
    assert!(names.len() > 15);
    for name in names {
        assert!(text.contains(&format!("{name}(")), "{name} missing from the header");
    }
    for ty in ["DsStatus", "DsFormat", "DsCube", "DsSharpness", "DsGridFunction", "DsWeight", "DsSparseFamily"] {
        assert!(text.contains(ty), "{ty} missing from the header");
    }
}

#[test]
fn header_compiles_as_c() {
    let (path, _) = header();
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let dir = tempfile::tempdir().unwrap();
    let main = dir.path().join("main.c");
    std::fs::write(
        &main,
        format!("#include \"{}\"\nint main(void) {{ DsCube c; (void)c; return DS_STATUS_OK; }}\n", path.display()),
    )
    .unwrap();
    match Command::new(&cc).args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only"]).arg(&main).output() {
        Ok(out) => assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr)),
        Err(e) => eprintln!("skipping: C compiler '{cc}' unavailable ({e})"),
    }
}
