use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use hopsi_ffi::*;

const COUNTEREXAMPLE: &str = include_str!("../../core/tests/data/counterexample.hopi");
const COMM: &str = include_str!("../../core/tests/data/comm.rho");
const MOBILITY: &str = include_str!("../../core/tests/data/mobility.hopi");

fn parse(src: &str, instance: Option<&str>) -> (HopsiStatus, *mut HopsiProgram, Option<String>) {
    let src = CString::new(src).unwrap();
    let inst = instance.map(|i| CString::new(i).unwrap());
    let mut out = ptr::null_mut();
    let mut msg: *mut c_char = ptr::null_mut();
    let status = unsafe {
        hopsi_program_parse(src.as_ptr(), inst.as_ref().map_or(ptr::null(), |c| c.as_ptr()), &mut out, &mut msg)
    };
    (status, out, unsafe { take(msg) })
}

unsafe fn take(s: *mut c_char) -> Option<String> {
    if s.is_null() {
        return None;
    }
    let text = CStr::from_ptr(s).to_str().unwrap().to_owned();
    hopsi_string_free(s);
    Some(text)
}

#[test]
fn parse_check_and_free() {
    let (status, p, msg) = parse(MOBILITY, None);
    assert_eq!(status, HopsiStatus::Ok);
    assert!(msg.is_none());
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { hopsi_program_check(p, false, &mut out) }, HopsiStatus::Ok);
    assert!(unsafe { take(out) }.is_some());
    unsafe { hopsi_program_free(p) };
}

#[test]
fn counterexample_is_rejected_and_goes_wrong() {
    let (_, p, _) = parse(COUNTEREXAMPLE, None);
    assert_eq!(unsafe { hopsi_program_check(p, true, ptr::null_mut()) }, HopsiStatus::TypeError);
    let mut out = ptr::null_mut();
    let status = unsafe { hopsi_program_run(p, 20, HopsiStrategy::First, 0, false, true, &mut out) };
    assert_eq!(status, HopsiStatus::Wrong);
    assert!(unsafe { take(out) }.unwrap().contains("WRONG"));
    unsafe { hopsi_program_free(p) };
}

#[test]
fn parse_errors_report_a_position() {
    let (status, p, msg) = parse("0 |", Some("hopi"));
    assert_eq!(status, HopsiStatus::ParseError);
    assert!(p.is_null());
    assert!(msg.unwrap().starts_with("1:"));
    let (status, _, msg) = parse("0", Some("lambda"));
    assert_eq!(status, HopsiStatus::UnknownInstance);
    assert!(msg.unwrap().contains("lambda"));
}

#[test]
fn null_arguments_are_refused() {
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(hopsi_program_parse(ptr::null(), ptr::null(), &mut out, ptr::null_mut()), HopsiStatus::NullArgument);
        assert_eq!(hopsi_program_check(ptr::null(), false, ptr::null_mut()), HopsiStatus::NullArgument);
        assert_eq!(hopsi_program_eq(ptr::null(), ptr::null(), true, ptr::null_mut()), HopsiStatus::NullArgument);
        hopsi_program_free(ptr::null_mut());
        hopsi_string_free(ptr::null_mut());
    }
}

#[test]
fn invalid_utf8_is_refused() {
    let bytes = CString::new(vec![0xffu8, 0xfe]).unwrap();
    let mut out = ptr::null_mut();
    let status = unsafe { hopsi_program_parse(bytes.as_ptr(), ptr::null(), &mut out, ptr::null_mut()) };
    assert_eq!(status, HopsiStatus::InvalidUtf8);
}

#[test]
fn print_round_trips_and_eq_agrees() {
    let (_, p, _) = parse(MOBILITY, None);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { hopsi_program_print(p, &mut out) }, HopsiStatus::Ok);
    let printed = unsafe { take(out) }.unwrap();
    let (status, q, _) = parse(&printed, None);
    assert_eq!(status, HopsiStatus::Ok);
    let mut again = ptr::null_mut();
    unsafe { hopsi_program_print(q, &mut again) };
    assert_eq!(unsafe { take(again) }.unwrap(), printed);

    let (_, a, _) = parse("instance rho\n@0!(0)", None);
    let (_, b, _) = parse("instance rho\n0 | @0!(0)", None);
    let (_, c, _) = parse("instance rho\n0", None);
    unsafe {
        assert_eq!(hopsi_program_eq(a, b, true, ptr::null_mut()), HopsiStatus::Ok);
        assert_eq!(hopsi_program_eq(a, c, true, ptr::null_mut()), HopsiStatus::Counterexample);
        for h in [p, q, a, b, c] {
            hopsi_program_free(h);
        }
    }
}

#[test]
fn encode_of_an_untyped_rho_program() {
    let (_, p, _) = parse(COMM, Some("rho"));
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { hopsi_program_encode(p, false, &mut out) }, HopsiStatus::Ok);
    assert!(!unsafe { take(out) }.unwrap().is_empty());
    unsafe { hopsi_program_free(p) };
}

#[test]
fn header_declares_every_export_and_compiles_as_c() {
    let header = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/hopsi.h");
    let text = std::fs::read_to_string(&header).unwrap();
    let src = include_str!("../src/lib.rs");
    for line in src.lines().filter(|l| l.contains("pub unsafe extern \"C\" fn ")) {
        let name = line.split("fn ").nth(1).unwrap().split('(').next().unwrap();
        assert!(text.contains(&format!("{name}(")), "{name} missing from the header");
    }
    let Ok(status) = Command::new("cc").args(["-fsyntax-only", "-x", "c", "-std=c99"]).arg(&header).status() else {
        return;
    };
    assert!(status.success());
}
