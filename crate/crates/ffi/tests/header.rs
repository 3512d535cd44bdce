//! The generated header must declare the whole API and compile as C.

use std::path::PathBuf;
use std::process::Command;

const HEADER: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/include/metaverify.h");

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(HEADER).unwrap();
    let source = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/src/lib.rs")).unwrap();
    let exports: Vec<&str> = source
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert_eq!(exports.len(), 12);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(header.contains("typedef struct MvNormTable MvNormTable;"));
}

#[test]
fn c_program_links_and_runs() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("no C compiler ({cc}); header not compiled");
        return;
    }
    // target/<profile>/deps/header-* -> target/<profile>
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let archive = profile_dir.join("libmetaverify_ffi.a");
    assert!(archive.exists(), "{} not built", archive.display());

    let dir = tempfile::tempdir().unwrap();
    let program = dir.path().join("probe.c");
    std::fs::write(
        &program,
        r#"
#include <stdio.h>
#include <string.h>
#include "metaverify.h"

int main(void) {
    MvTestResult r;
    if (mv_binomial_test(0, 49, 0.5, MV_SIDEDNESS_TWO_SIDED, &r) != MV_STATUS_OK) return 1;
    if (r.p_value >= 0.0001) return 2;
    if (mv_binomial_test(9, 3, 0.5, MV_SIDEDNESS_TWO_SIDED, &r) != MV_STATUS_INVALID_ARGUMENT) return 3;
    if (mv_last_error() == NULL) return 4;
    char buf[16];
    size_t needed = 0;
    if (mv_lemmatize("geese", MV_UPOS_NOUN, buf, sizeof buf, &needed) != MV_STATUS_OK) return 5;
    if (strcmp(buf, "goose") != 0) return 6;
    MvNormTable *t = NULL;
    if (mv_norm_table_load("/nonexistent", MV_NORM_KIND_CONCRETENESS, &t) != MV_STATUS_DATA || t != NULL) return 7;
    puts("ok");
    return 0;
}
"#,
    )
    .unwrap();
    let binary = dir.path().join("probe");
    let include = PathBuf::from(HEADER).parent().unwrap().to_path_buf();
    let status = Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&program)
        .arg(&archive)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&binary)
        .status()
        .unwrap();
    assert!(status.success(), "C probe failed to compile");
    let output = Command::new(&binary).output().unwrap();
    assert!(output.status.success(), "probe exited with {:?}", output.status.code());
    assert_eq!(String::from_utf8_lossy(&output.stdout), "ok\n");
}
