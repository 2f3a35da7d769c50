use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use toric_okounkov_ffi::*;

fn take(p: *mut std::ffi::c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { okb_string_free(p) };
    s
}

fn last_error() -> String {
    let p = okb_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

#[test]
fn handles_round_trip() {
    let spec = CString::new("\"P1xF1\"").unwrap();
    let mut fan = ptr::null_mut();
    assert_eq!(unsafe { okb_fan_from_json(spec.as_ptr(), &mut fan) }, OkbStatus::Ok);
    assert_eq!(unsafe { okb_fan_rank(fan) }, 3);
    assert_eq!(unsafe { okb_fan_ray_count(fan) }, 6);
    let owned: Vec<CString> = ["0", "0", "0", "1", "2", "1"].iter().map(|s| CString::new(*s).unwrap()).collect();
    let ptrs: Vec<_> = owned.iter().map(|c| c.as_ptr()).collect();
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { okb_divisor_new(fan, ptrs.as_ptr(), ptrs.len(), &mut d) }, OkbStatus::Ok);
    let mut vol = ptr::null_mut();
    assert_eq!(unsafe { okb_divisor_volume(d, &mut vol) }, OkbStatus::Ok);
    assert_eq!(take(vol), "3/2");
    let v = [1i64, 3, -1];
    let (mut s, mut t) = (ptr::null_mut(), ptr::null_mut());
    assert_eq!(unsafe { okb_divisor_s_t(d, v.as_ptr(), 3, &mut s, &mut t) }, OkbStatus::Ok);
    assert_eq!(take(s), "59/18");
    take(t);
    unsafe {
        okb_divisor_free(d);
        okb_fan_free(fan);
    }
}

#[test]
fn errors_are_reported() {
    let spec = CString::new(r#"{"rank": 2, "rays": [[2, 0], [0, 1], [-1, -1]], "cones": [[0, 1], [1, 2], [2, 0]]}"#).unwrap();
    let mut fan = ptr::null_mut();
    assert_eq!(unsafe { okb_fan_from_json(spec.as_ptr(), &mut fan) }, OkbStatus::Validation);
    assert!(fan.is_null());
    assert!(last_error().starts_with("NonPrimitiveRay"));
    assert_eq!(unsafe { okb_fan_from_json(ptr::null(), &mut fan) }, OkbStatus::NullArgument);

    let p2 = CString::new("\"P2\"").unwrap();
    assert_eq!(unsafe { okb_fan_from_json(p2.as_ptr(), &mut fan) }, OkbStatus::Ok);
    let zero: Vec<CString> = (0..3).map(|_| CString::new("0").unwrap()).collect();
    let ptrs: Vec<_> = zero.iter().map(|c| c.as_ptr()).collect();
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { okb_divisor_new(fan, ptrs.as_ptr(), 3, &mut d) }, OkbStatus::Ok);
    let mut vol = ptr::null_mut();
    assert_eq!(unsafe { okb_divisor_volume(d, &mut vol) }, OkbStatus::Mathematical);
    let decimal = CString::new("1.5").unwrap();
    let bp = [decimal.as_ptr(); 3];
    let mut d2 = ptr::null_mut();
    assert_eq!(unsafe { okb_divisor_new(fan, bp.as_ptr(), 3, &mut d2) }, OkbStatus::Ok);
    unsafe {
        okb_divisor_free(d2);
        okb_divisor_free(d);
        okb_fan_free(fan);
    }
}

#[test]
fn run_json_matches_library() {
    let cmd = CString::new("delta").unwrap();
    let input = CString::new(r#"{"fan": "F1", "terms": [{"weight": 1, "coefficients": [3, 2, 0, 0]}], "fixed_point_flags": true}"#).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { okb_run_json(cmd.as_ptr(), input.as_ptr(), 128, &mut out) }, OkbStatus::Ok);
    let report = take(out);
    let direct = toric_okounkov::io::run_str(
        toric_okounkov::io::Command::Delta,
        input.to_str().unwrap(),
        &toric_okounkov::io::JobOptions::default(),
    );
    assert_eq!(report, direct.report);

    let unknown = CString::new("nope").unwrap();
    assert_eq!(unsafe { okb_run_json(unknown.as_ptr(), input.as_ptr(), 128, &mut out) }, OkbStatus::Validation);
    let broken = CString::new("{").unwrap();
    let mut out2 = ptr::null_mut();
    assert_eq!(unsafe { okb_run_json(cmd.as_ptr(), broken.as_ptr(), 128, &mut out2) }, OkbStatus::Validation);
    assert!(take(out2).contains("ParseError"));
}

fn staticlib() -> Option<PathBuf> {
    let exe = std::env::current_exe().ok()?;
    let dir = exe.parent()?.parent()?;
    let lib = dir.join("libtoric_okounkov_ffi.a");
    lib.exists().then_some(lib)
}

#[test]
fn header_compiles_and_links_from_c() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = root.join("include/toric_okounkov.h");
    assert!(header.exists(), "generated header missing");
    let text = std::fs::read_to_string(&header).unwrap();
    for sym in ["okb_run_json", "okb_string_free", "okb_last_error", "OkbFan", "OKB_STATUS_MATHEMATICAL"] {
        assert!(text.contains(sym), "{sym} not in header");
    }
    let Some(lib) = staticlib() else {
        eprintln!("static library not found next to the test binary; link step skipped");
        return;
    };
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler; link step skipped");
        return;
    };
    let out = std::env::temp_dir().join(format!("okb_smoke_{}", std::process::id()));
    let status = Command::new(cc)
        .arg(root.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(root.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success(), "C smoke test failed to build");
    let run = Command::new(&out).output().unwrap();
    let _ = std::fs::remove_file(&out);
    assert!(run.status.success(), "C smoke test exited with {:?}", run.status.code());
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "c smoke ok");
}

fn which_cc() -> Result<&'static str, ()> {
    for cc in ["cc", "gcc", "clang"] {
        if Command::new(cc).arg("--version").output().is_ok() {
            return Ok(cc);
        }
    }
    Err(())
}
