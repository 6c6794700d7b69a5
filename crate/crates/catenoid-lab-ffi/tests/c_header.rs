//! Compiles a small C program against the generated header and the static
//! library, then runs it.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include "catenoid_lab.h"

int main(void) {
    ClGeometry *g = NULL;
    if (cl_geometry_new(1.0, &g) != CL_STATUS_OK) return 10;
    ClGeometryView v;
    if (cl_geometry_view(g, &v) != CL_STATUS_OK) return 11;
    double mu[2];
    if (cl_eigenvalues(g, 0, CL_PARITY_EVEN, mu, 2) != CL_STATUS_OK) return 12;
    cl_geometry_free(g);
    if (!(mu[0] < 0.0 && mu[1] > 0.0)) return 13;
    if (cl_geometry_new(0.25, &g) != CL_STATUS_DOMAIN || g != NULL) return 14;
    ClConstants c;
    if (cl_constants(&c) != CL_STATUS_OK) return 15;
    printf("%.12f %.12f\n", v.s0, c.c0);
    return 0;
}
"#;

fn target_dir() -> PathBuf {
    // tests run from target/<profile>/deps/
    let exe = std::env::current_exe().expect("test executable path");
    exe.parent().and_then(|p| p.parent()).expect("profile directory").to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let lib = target_dir().join("libcatenoid_lab_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let work = tempfile::tempdir().expect("temp dir");
    let source = work.path().join("smoke.c");
    let binary = work.path().join("smoke");
    std::fs::write(&source, PROGRAM).expect("write C source");
    let status = Command::new("cc")
        .arg(&source)
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&binary)
        .status()
        .expect("C compiler `cc` must be on PATH");
    assert!(status.success(), "cc failed");
    let out = Command::new(&binary).output().expect("run smoke binary");
    assert!(out.status.success(), "exit {:?}", out.status.code());
    let text = String::from_utf8(out.stdout).unwrap();
    let fields: Vec<f64> = text.split_whitespace().map(|t| t.parse().unwrap()).collect();
    assert!((fields[1] - 0.490173359677).abs() < 1e-9);
}
