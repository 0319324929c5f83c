//! The generated header must be valid C and match the exported symbols.

use std::path::PathBuf;
use std::process::Command;

fn header() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/su2ym.h")
}

#[test]
fn header_compiles_as_c() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        r#"#include "su2ym.h"
int main(void) {
    char *json = 0;
    bool ok = false;
    Su2ymStatus st = su2ym_verify_json(&json, &ok);
    Su2ymComplex z = {1.0, 0.0};
    Su2ymTrajectory *t = 0;
    (void)z; (void)t;
    su2ym_string_free(json);
    return st == SU2YM_STATUS_OK ? 0 : 1;
}
"#,
    )
    .unwrap();
    let include = header().parent().unwrap().to_path_buf();
    let out = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(&include)
        .arg(&src)
        .output()
        .expect("a C compiler on PATH");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

/// Links a C program against the static library that cargo builds next to
/// the test binaries and runs it.
#[test]
fn c_program_links_and_runs() {
    let exe = std::env::current_exe().unwrap();
    let lib = exe.parent().unwrap().parent().unwrap().join("libsu2ym_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("run.c");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include <string.h>
#include "su2ym.h"
int main(void) {
    Su2ymComplex x[4] = {{1.0, 0.2}, {1.0, -0.1}, {0.3, 0.0}, {-0.2, 0.0}};
    Su2ymComplex a = {1.0, 0.0}, t0 = {0.0, 0.0}, t1 = {2.0, 0.0};
    Su2ymTrajectory *t = NULL;
    if (su2ym_integrate("4d", x, 4, a, t0, t1, 0.0, 0.0, &t) != SU2YM_STATUS_OK) return 1;
    if (!su2ym_trajectory_completed(t) || su2ym_trajectory_dim(t) != 4) return 2;
    char *json = NULL;
    if (su2ym_trajectory_drift_json(t, &json) != SU2YM_STATUS_OK) return 3;
    su2ym_string_free(json);
    su2ym_trajectory_free(t);
    if (su2ym_integrate("4d", x, 3, a, t0, t1, 0.0, 0.0, &t) != SU2YM_STATUS_INVALID_INPUT) return 4;
    if (strstr(su2ym_last_error_message(), "dimension") == NULL) return 5;
    int64_t g = 0;
    if (su2ym_genus_riemann_hurwitz(2, 6, &g) != SU2YM_STATUS_OK || g != 2) return 6;
    puts("ok");
    return 0;
}
"#,
    )
    .unwrap();
    let prog = dir.path().join("run");
    let out = Command::new("cc")
        .args(["-std=c99", "-I"])
        .arg(header().parent().unwrap())
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&prog)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&prog).output().unwrap();
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
}

#[test]
fn header_declares_every_export() {
    let text = std::fs::read_to_string(header()).unwrap();
    let src = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .split("extern \"C\" fn ")
        .skip(1)
        .map(|s| s.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 12);
    for name in exports {
        assert!(text.contains(&format!("{name}(")), "{name} missing from header");
    }
}
