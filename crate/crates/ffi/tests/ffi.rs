use std::ffi::{c_char, CStr, CString};
use std::ptr;

use detmld_ffi::*;

unsafe fn take(s: *mut c_char) -> String {
    let text = CStr::from_ptr(s).to_str().unwrap().to_owned();
    detmld_string_free(s);
    text
}

unsafe fn pair(m: usize, k: usize, num: &[i64], den: &[i64]) -> *mut DetmldPair {
    let mut out = ptr::null_mut();
    let status = detmld_pair_new(m, k, num.as_ptr(), den.as_ptr(), num.len(), &mut out);
    assert_eq!(status, DetmldStatus::Ok);
    out
}

unsafe fn last_error() -> String {
    let p = detmld_last_error_message();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_str().unwrap().to_owned()
}

#[test]
fn mld_values() {
    unsafe {
        let p = pair(3, 2, &[0, 0], &[1, 1]);
        let mut s = ptr::null_mut();
        assert_eq!(detmld_mld_at_rank(p, 0, &mut s), DetmldStatus::Ok);
        assert_eq!(take(s), "6");
        assert_eq!(detmld_mld_along(p, 1, &mut s), DetmldStatus::Ok);
        assert_eq!(take(s), "2");
        detmld_pair_free(p);

        let p = pair(3, 2, &[1, 7], &[1, 2]);
        assert_eq!(detmld_mld_at_rank(p, 0, &mut s), DetmldStatus::Ok);
        assert_eq!(take(s), "-inf");
        let mut lc = true;
        assert_eq!(detmld_is_lc_at_rank(p, 0, &mut lc), DetmldStatus::Ok);
        assert!(!lc);
        assert_eq!(detmld_is_lc_along(p, 1, &mut lc), DetmldStatus::Ok);
        assert!(!lc);
        detmld_pair_free(p);

        let mut terminal = false;
        assert_eq!(detmld_is_terminal(4, 2, &mut terminal), DetmldStatus::Ok);
        assert!(terminal);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut out = ptr::null_mut();
        let status = detmld_pair_new(2, 3, ptr::null(), ptr::null(), 0, &mut out);
        assert_eq!(status, DetmldStatus::Invalid);
        assert!(out.is_null());
        assert!(last_error().contains("k"));
        assert_eq!(detmld_pair_new(2, 1, [1].as_ptr(), [0].as_ptr(), 1, &mut out), DetmldStatus::Invalid);

        let p = pair(2, 1, &[], &[]);
        let mut s = ptr::null_mut();
        assert_eq!(detmld_mld_at_rank(p, 5, &mut s), DetmldStatus::Invalid);
        assert_eq!(detmld_mld_at_rank(p, 0, ptr::null_mut()), DetmldStatus::NullPointer);
        assert_eq!(detmld_mld_at_rank(ptr::null(), 0, &mut s), DetmldStatus::NullPointer);
        detmld_pair_free(p);
        assert_eq!(detmld_nash_verify_json(4, 1, &mut s), DetmldStatus::Guard);
        // a successful call clears the message
        let mut t = false;
        assert_eq!(detmld_is_terminal(2, 1, &mut t), DetmldStatus::Ok);
        assert!(detmld_last_error_message().is_null());
        detmld_pair_free(ptr::null_mut());
        detmld_string_free(ptr::null_mut());
    }
}

#[test]
fn orbit_data() {
    unsafe {
        let lambda = [DETMLD_INF, 2, 1];
        let mut v = 0;
        assert_eq!(detmld_orbit_codim(3, 2, lambda.as_ptr(), 3, &mut v), DetmldStatus::Ok);
        assert_eq!(v, 11);
        assert_eq!(detmld_contact_order(3, 2, lambda.as_ptr(), 3, 1, &mut v), DetmldStatus::Ok);
        assert_eq!(v, 3);
        let increasing = [1u64, 2, 3];
        assert_eq!(detmld_orbit_codim(3, 2, increasing.as_ptr(), 3, &mut v), DetmldStatus::Invalid);
    }
}

#[test]
fn json_reports() {
    unsafe {
        let p = pair(3, 2, &[1, 7], &[1, 2]);
        let mut s = ptr::null_mut();
        assert_eq!(detmld_oracle_json(p, DetmldTargetKind::Point, 0, 6, &mut s), DetmldStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        assert_eq!(v["agree"], false);
        assert_eq!(v["oracle"]["minimum"], "1/2");
        detmld_pair_free(p);

        let dt = CString::new(r#"{"left":{"shape":[1,1],"rows":[[1],[2]]},"right":{"shape":[1,1],"rows":[[2],[1]]}}"#).unwrap();
        assert_eq!(detmld_straighten_json(dt.as_ptr(), 2, 1, &mut s), DetmldStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        assert_eq!(v["terms"].as_array().unwrap().len(), 1);
        let bad = CString::new("{").unwrap();
        assert_eq!(detmld_straighten_json(bad.as_ptr(), 2, 0, &mut s), DetmldStatus::Parse);

        assert_eq!(detmld_nash_verify_json(2, 1, &mut s), DetmldStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        assert_eq!(v["passed"], true);
    }
}

/// The generated header is valid C and C++.
#[test]
fn header_compiles() {
    let include = concat!(env!("CARGO_MANIFEST_DIR"), "/include");
    let header = std::fs::read_to_string(format!("{include}/detmld.h")).unwrap();
    for name in ["detmld_pair_new", "detmld_string_free", "detmld_last_error_message", "DETMLD_STATUS_GUARD"] {
        assert!(header.contains(name), "{name} missing from header");
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("probe.c");
    std::fs::write(
        &src,
        "#include \"detmld.h\"\nint main(void) { DetmldPair *p = 0; (void)p; return DETMLD_STATUS_OK; }\n",
    )
    .unwrap();
    for compiler in ["cc", "c++"] {
        let mut cmd = std::process::Command::new(compiler);
        if compiler == "c++" {
            cmd.args(["-x", "c++"]);
        }
        match cmd.args(["-fsyntax-only", "-Wall", "-Werror", "-I", include]).arg(&src).output() {
            Ok(out) => assert!(out.status.success(), "{compiler}: {}", String::from_utf8_lossy(&out.stderr)),
            Err(_) => eprintln!("{compiler} not found, skipping"),
        }
    }
}
