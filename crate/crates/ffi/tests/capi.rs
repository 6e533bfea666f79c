use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use libc::c_char;

use fimreg_ffi::*;

unsafe fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    fimreg_string_free(s);
    out
}

fn last_error() -> String {
    let p = fimreg_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p).to_str().unwrap().to_owned() }
}

fn build(m: usize, d: i64, r: i64, top: usize, seed: u64, field: Option<&str>) -> *mut FimregModule {
    let field = field.map(|f| CString::new(f).unwrap());
    let mut h = ptr::null_mut();
    let s = unsafe {
        fimreg_module_build(m, d, r, top, 3, 2, seed, field.as_ref().map_or(ptr::null(), |f| f.as_ptr()), &mut h)
    };
    assert_eq!(s, FimregStatus::Ok);
    h
}

#[test]
fn version_is_package_version() {
    let v = unsafe { CStr::from_ptr(fimreg_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn build_shape_validate_free() {
    let h = build(2, 1, 2, 4, 7, None);
    let (mut m, mut top, mut dim, mut bad) = (0, 0, 0, 99);
    unsafe {
        assert_eq!(fimreg_module_shape(h, &mut m, &mut top, &mut dim), FimregStatus::Ok);
        assert_eq!(fimreg_module_validate(h, &mut bad), FimregStatus::Ok);
        fimreg_module_free(h);
    }
    assert_eq!((m, top, bad), (2, 4, 0));
    assert!(dim > 0);
}

#[test]
fn engines_agree_through_the_abi() {
    let h = build(1, 1, 2, 3, 11, Some("p=2"));
    let mut tables = Vec::new();
    for engine in ["resolution", "koszul", "oracle"] {
        let e = CString::new(engine).unwrap();
        let mut out = ptr::null_mut();
        unsafe {
            assert_eq!(fimreg_module_homology(h, 2, e.as_ptr(), &mut out), FimregStatus::Ok);
            tables.push(take(out));
        }
    }
    unsafe { fimreg_module_free(h) };
    assert_eq!(tables[0], tables[1]);
    assert_eq!(tables[0], tables[2]);
    assert!(tables[0].starts_with("{\"I\":2,\"N\":3,"));
}

#[test]
fn json_round_trip_keeps_the_module() {
    let h = build(2, 1, 1, 3, 3, Some("rationals"));
    unsafe {
        let mut pres = ptr::null_mut();
        assert_eq!(fimreg_module_presentation_json(h, &mut pres), FimregStatus::Ok);
        let pres = CString::new(take(pres)).unwrap();
        let mut module = ptr::null_mut();
        assert_eq!(fimreg_module_to_json(h, &mut module), FimregStatus::Ok);
        let module = take(module);

        let mut h2 = ptr::null_mut();
        assert_eq!(fimreg_module_from_json(pres.as_ptr(), &mut h2), FimregStatus::Ok);
        let mut again = ptr::null_mut();
        assert_eq!(fimreg_module_to_json(h2, &mut again), FimregStatus::Ok);
        assert_eq!(take(again), module);

        let module_c = CString::new(module).unwrap();
        let mut h3 = ptr::null_mut();
        assert_eq!(fimreg_module_from_json(module_c.as_ptr(), &mut h3), FimregStatus::Ok);
        let mut none = ptr::null_mut();
        assert_eq!(fimreg_module_presentation_json(h3, &mut none), FimregStatus::Input);
        assert!(none.is_null());
        assert!(last_error().contains("no presentation"));
        for x in [h, h2, h3] {
            fimreg_module_free(x);
        }
    }
}

#[test]
fn functor_checks_pass() {
    let h = build(2, 1, 2, 4, 5, None);
    for check in ["four-term", "two-row", "church", "split-h0", "restrict-free"] {
        let c = CString::new(check).unwrap();
        let mut out = ptr::null_mut();
        unsafe {
            assert_eq!(fimreg_module_check(h, c.as_ptr(), 2, &mut out), FimregStatus::Ok, "{check}");
            assert!(take(out).contains("\"violations\":[]"));
        }
    }
    unsafe { fimreg_module_free(h) };
}

#[test]
fn rho_values() {
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(fimreg_rho(2, 0, 0, &mut out), FimregStatus::Ok);
        assert_eq!(take(out), "5");
        assert_eq!(fimreg_rho(2, 1, 1, &mut out), FimregStatus::Ok);
        assert_eq!(take(out), "21");
        assert_eq!(fimreg_rho(0, 1, 1, &mut out), FimregStatus::Input);
    }
    assert!(!last_error().is_empty());
}

#[test]
fn campaign_report_and_verdict() {
    let cfg = CString::new(r#"{"campaign":"four-term","m":2,"d":1,"r":2,"N":4,"I":2,"count":3,"seed":1}"#).unwrap();
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(fimreg_run_campaign(cfg.as_ptr(), &mut out), FimregStatus::Ok);
        assert!(take(out).contains("\"verdict\": \"pass\""));
    }
    let bad = CString::new(r#"{"campaign":"four-term","m":2}"#).unwrap();
    unsafe { assert_eq!(fimreg_run_campaign(bad.as_ptr(), &mut out), FimregStatus::Input) };
}

#[test]
fn errors_are_reported_not_raised() {
    let junk = CString::new("{\"m\": 1}").unwrap();
    let bad_utf8 = [0xffu8 as c_char, 0];
    let mut h = ptr::null_mut();
    unsafe {
        assert_eq!(fimreg_module_from_json(junk.as_ptr(), &mut h), FimregStatus::Input);
        assert!(h.is_null());
        assert_eq!(fimreg_module_from_json(bad_utf8.as_ptr(), &mut h), FimregStatus::Input);
        assert_eq!(fimreg_module_from_json(ptr::null(), &mut h), FimregStatus::Input);
        assert_eq!(fimreg_module_from_json(junk.as_ptr(), ptr::null_mut()), FimregStatus::NullPointer);
        let field = CString::new("p=4").unwrap();
        assert_eq!(fimreg_module_build(1, 1, 1, 3, 1, 1, 0, field.as_ptr(), &mut h), FimregStatus::Input);
        let mut n = 0;
        assert_eq!(fimreg_module_validate(ptr::null(), &mut n), FimregStatus::NullPointer);
        fimreg_module_free(ptr::null_mut());
        fimreg_string_free(ptr::null_mut());
    }
}

#[test]
fn oracle_budget_is_a_distinct_status() {
    let h = build(2, 2, 2, 8, 0, None);
    let e = CString::new("oracle").unwrap();
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(fimreg_module_homology(h, 2, e.as_ptr(), &mut out), FimregStatus::Budget);
        fimreg_module_free(h);
    }
    assert!(last_error().starts_with("budget exceeded"));
}

#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include").join("fimreg.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["fimreg_module_build", "fimreg_run_campaign", "FIMREG_STATUS_BUDGET", "typedef struct FimregModule"] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("probe.c");
    std::fs::write(&src, "#include \"fimreg.h\"\nint main(void) { return fimreg_version() == 0; }\n").unwrap();
    let status = match Command::new("cc")
        .arg("-fsyntax-only")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(header.parent().unwrap())
        .arg(&src)
        .status()
    {
        Ok(s) => s,
        Err(_) => {
            eprintln!("no C compiler; header syntax not checked");
            return;
        }
    };
    assert!(status.success());
}
