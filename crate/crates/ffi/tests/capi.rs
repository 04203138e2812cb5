use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use hurwitz_codes_ffi::*;

fn last_error() -> String {
    let mut buf = [0 as c_char; 256];
    unsafe {
        hc_last_error(buf.as_mut_ptr(), buf.len());
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

fn parse(s: &str) -> *mut HcModulus {
    let text = CString::new(s).unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(
        unsafe { hc_modulus_parse(text.as_ptr(), &mut m) },
        HcStatus::Ok
    );
    m
}

#[test]
fn modulus_handles() {
    let m = parse("3+2i");
    let mut norm = 0;
    let mut alpha = [0i64; 4];
    unsafe {
        assert_eq!(hc_modulus_norm(m, &mut norm), HcStatus::Ok);
        assert_eq!(hc_modulus_alpha(m, alpha.as_mut_ptr()), HcStatus::Ok);
        hc_modulus_free(m);
    }
    assert_eq!(norm, 13);
    assert_eq!(alpha, [6, 4, 0, 0]);

    let mut m = ptr::null_mut();
    let d = [5i64, 3, 3, 3];
    assert_eq!(unsafe { hc_modulus_new(d.as_ptr(), &mut m) }, HcStatus::Ok);
    unsafe { hc_modulus_free(m) };
}

#[test]
fn error_codes() {
    let mut m = ptr::null_mut();
    let bad = [4i64, 4, 0, 0];
    assert_eq!(
        unsafe { hc_modulus_new(bad.as_ptr(), &mut m) },
        HcStatus::NotPrime
    );
    assert!(m.is_null());
    assert!(last_error().contains("not prime"));

    let mixed = [5i64, 2, 0, 0];
    assert_eq!(
        unsafe { hc_modulus_new(mixed.as_ptr(), &mut m) },
        HcStatus::Parse
    );

    let text = CString::new("3+q").unwrap();
    assert_eq!(
        unsafe { hc_modulus_parse(text.as_ptr(), &mut m) },
        HcStatus::Parse
    );
    assert_eq!(
        unsafe { hc_modulus_parse(ptr::null(), &mut m) },
        HcStatus::NullPointer
    );
    assert_eq!(
        unsafe { hc_modulus_norm(ptr::null(), ptr::null_mut()) },
        HcStatus::NullPointer
    );

    let mut r = HcCodeRate::default();
    assert_eq!(
        unsafe { hc_code_rate(71, 1, &mut r) },
        HcStatus::RateModulus
    );
    assert_eq!(
        unsafe { hc_code_rate(73, 0, &mut r) },
        HcStatus::ZeroDimension
    );
    assert_eq!(unsafe { hc_code_rate(73, 20, &mut r) }, HcStatus::Overflow);
    unsafe {
        hc_modulus_free(ptr::null_mut());
        hc_residue_table_free(ptr::null_mut());
    }
}

#[test]
fn residue_table_through_the_abi() {
    let m = parse("5/2+3/2i+3/2j+3/2k");
    let mut t = ptr::null_mut();
    let mut len = 0;
    let mut e = HcResidueEntry::default();
    unsafe {
        assert_eq!(hc_residue_table_new(m, &mut t), HcStatus::Ok);
        assert_eq!(hc_residue_table_len(t, &mut len), HcStatus::Ok);
        assert_eq!(len, 13);
        assert_eq!(hc_residue_table_entry(t, 0, &mut e), HcStatus::Ok);
        assert_eq!((e.z, e.branch, e.residue_doubled), (0, 1, [0; 4]));
        assert_eq!(hc_residue_table_entry(t, 13, &mut e), HcStatus::OutOfRange);

        let mut direct = HcResidueEntry::default();
        for z in 0..13 {
            hc_residue_table_entry(t, z, &mut e);
            hc_mu(m, z as i64, &mut direct);
            assert_eq!(e, direct);
        }

        let (mut num, mut den) = (0, 0);
        assert_eq!(hc_average_energy(m, &mut num, &mut den), HcStatus::Ok);
        assert_eq!((num, den), (24, 13));

        let mut same = false;
        let z7 = [14i64, 0, 0, 0];
        hc_residue_table_entry(t, 7, &mut e);
        assert_eq!(
            hc_left_congruent(m, e.residue_doubled.as_ptr(), z7.as_ptr(), &mut same),
            HcStatus::Ok
        );
        assert!(same);

        hc_residue_table_free(t);
        hc_modulus_free(m);
    }
}

#[test]
fn rates_and_verification() {
    let mut r = HcCodeRate::default();
    assert_eq!(unsafe { hc_code_rate(97, 1, &mut r) }, HcStatus::Ok);
    assert_eq!((r.n, r.k, r.rate_num, r.rate_den), (4, 1, 1, 4));

    let mut failures = 99;
    assert_eq!(unsafe { hc_verify_suite(30, &mut failures) }, HcStatus::Ok);
    assert_eq!(failures, 0);
    let m = parse("3+i+j");
    assert_eq!(unsafe { hc_verify_modulus(m, &mut failures) }, HcStatus::Ok);
    unsafe { hc_modulus_free(m) };
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(hc_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn header() -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/hurwitz_codes.h"))
        .unwrap()
}

#[test]
fn header_declares_the_abi() {
    let h = header();
    for name in [
        "hc_last_error",
        "hc_version",
        "hc_modulus_new",
        "hc_modulus_parse",
        "hc_modulus_free",
        "hc_modulus_norm",
        "hc_modulus_alpha",
        "hc_mu",
        "hc_left_congruent",
        "hc_average_energy",
        "hc_residue_table_new",
        "hc_residue_table_free",
        "hc_residue_table_len",
        "hc_residue_table_entry",
        "hc_code_rate",
        "hc_verify_suite",
        "hc_verify_modulus",
    ] {
        assert!(h.contains(&format!("{name}(")), "missing {name}");
    }
    assert!(h.contains("typedef struct HcModulus HcModulus;"));
    assert!(h.contains("HC_STATUS_VERIFICATION_FAILED = 9"));
    assert!(h.starts_with("#ifndef HURWITZ_CODES_H"));
}

/// `target/<profile>`, two levels above the test executable.
fn profile_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_the_static_library() {
    let lib = profile_dir().join("libhurwitz_codes_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or static library");
        return;
    }
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let out = Path::new(env!("CARGO_TARGET_TMPDIR")).join("hc_smoke");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg(dir.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let run = Command::new(&out).output().unwrap();
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("ok "));
}
