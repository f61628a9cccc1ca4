//! C ABI over the `hopsi` command layer.
//!
//! A program is parsed once into an opaque [`HopsiProgram`] handle and can
//! then be checked, run or encoded. Every call returns a [`HopsiStatus`];
//! text results are handed out as NUL-terminated strings that the caller
//! releases with [`hopsi_string_free`].

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hopsi::cli::{
    cmd_check, cmd_encode, cmd_eq, cmd_run, parse_source, Instance, Outcome, Program, Relation, RunConfig, StrategyArg,
    TraceFormat,
};

/// Result codes. The first five agree with the exit codes of the `hopsi` binary.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HopsiStatus {
    Ok = 0,
    TypeError = 1,
    ParseError = 2,
    Wrong = 3,
    Counterexample = 4,
    NullArgument = 5,
    InvalidUtf8 = 6,
    UnknownInstance = 7,
    Panic = 8,
}

impl HopsiStatus {
    fn from_code(code: i32) -> Self {
        match code {
            0 => HopsiStatus::Ok,
            1 => HopsiStatus::TypeError,
            2 => HopsiStatus::ParseError,
            3 => HopsiStatus::Wrong,
            4 => HopsiStatus::Counterexample,
            _ => HopsiStatus::Panic,
        }
    }
}

/// Strategy selector for [`hopsi_program_run`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HopsiStrategy {
    First = 0,
    Random = 1,
    All = 2,
}

/// A parsed program.
pub struct HopsiProgram {
    program: Program,
}

fn guard(f: impl FnOnce() -> HopsiStatus) -> HopsiStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(HopsiStatus::Panic)
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, HopsiStatus> {
    if s.is_null() {
        return Err(HopsiStatus::NullArgument);
    }
    CStr::from_ptr(s).to_str().map_err(|_| HopsiStatus::InvalidUtf8)
}

unsafe fn write_text(out: *mut *mut c_char, text: &str) {
    if out.is_null() {
        return;
    }
    let c = CString::new(text.replace('\0', "")).expect("NULs removed");
    *out = c.into_raw();
}

unsafe fn finish(outcome: Outcome, out: *mut *mut c_char) -> HopsiStatus {
    write_text(out, &outcome.stdout);
    HopsiStatus::from_code(outcome.code)
}

unsafe fn program<'a>(p: *const HopsiProgram) -> Result<&'a Program, HopsiStatus> {
    p.as_ref().map(|h| &h.program).ok_or(HopsiStatus::NullArgument)
}

/// Parses `source`. `instance` may be null when the source has an
/// `instance` header. On success `*out` receives a handle to release with
/// [`hopsi_program_free`]; on a parse error `*message` (when not null)
/// receives the error text.
///
/// # Safety
/// `source` and a non-null `instance` must be valid NUL-terminated strings;
/// `out` must be valid for writes; `message` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hopsi_program_parse(
    source: *const c_char,
    instance: *const c_char,
    out: *mut *mut HopsiProgram,
    message: *mut *mut c_char,
) -> HopsiStatus {
    guard(|| {
        if out.is_null() {
            return HopsiStatus::NullArgument;
        }
        *out = ptr::null_mut();
        let src = match read_str(source) {
            Ok(s) => s,
            Err(e) => return e,
        };
        let forced = if instance.is_null() {
            None
        } else {
            match read_str(instance).map(str::parse::<Instance>) {
                Ok(Ok(i)) => Some(i),
                Ok(Err(e)) => {
                    write_text(message, &e);
                    return HopsiStatus::UnknownInstance;
                }
                Err(e) => return e,
            }
        };
        match parse_source(src, forced) {
            Ok(program) => {
                *out = Box::into_raw(Box::new(HopsiProgram { program }));
                HopsiStatus::Ok
            }
            Err(e) => {
                write_text(message, &e.to_string());
                HopsiStatus::ParseError
            }
        }
    })
}

/// Releases a handle from [`hopsi_program_parse`]. Null is ignored.
///
/// # Safety
/// `p` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hopsi_program_free(p: *mut HopsiProgram) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// The canonical source text of a program.
///
/// # Safety
/// `p` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hopsi_program_print(p: *const HopsiProgram, out: *mut *mut c_char) -> HopsiStatus {
    guard(|| match program(p) {
        Ok(prog) if !out.is_null() => {
            write_text(out, &prog.to_string());
            HopsiStatus::Ok
        }
        Ok(_) => HopsiStatus::NullArgument,
        Err(e) => e,
    })
}

/// Type-checks a program. `*out` (when not null) receives the report,
/// as JSON when `json` is non-zero.
///
/// # Safety
/// `p` must be a live handle; `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hopsi_program_check(p: *const HopsiProgram, json: bool, out: *mut *mut c_char) -> HopsiStatus {
    guard(|| match program(p) {
        Ok(prog) => finish(cmd_check(prog, json), out),
        Err(e) => e,
    })
}

/// Reduces a program for at most `max_steps` steps and writes the trace.
/// Returns [`HopsiStatus::Wrong`] when `detect_wrong` is set and a WRONG
/// state is reached.
///
/// # Safety
/// `p` must be a live handle; `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hopsi_program_run(
    p: *const HopsiProgram,
    max_steps: usize,
    strategy: HopsiStrategy,
    seed: u64,
    json: bool,
    detect_wrong: bool,
    out: *mut *mut c_char,
) -> HopsiStatus {
    guard(|| match program(p) {
        Ok(prog) => {
            let strategy = match strategy {
                HopsiStrategy::First => StrategyArg::First,
                HopsiStrategy::Random => StrategyArg::Random,
                HopsiStrategy::All => StrategyArg::All,
            };
            let trace = if json { TraceFormat::Json } else { TraceFormat::Text };
            finish(cmd_run(prog, &RunConfig { max_steps, strategy, seed, trace, detect_wrong }), out)
        }
        Err(e) => e,
    })
}

/// Translates a rho program.
///
/// # Safety
/// `p` must be a live handle; `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hopsi_program_encode(p: *const HopsiProgram, typed: bool, out: *mut *mut c_char) -> HopsiStatus {
    guard(|| match program(p) {
        Ok(prog) => finish(cmd_encode(prog, typed), out),
        Err(e) => e,
    })
}

/// Compares two programs by name equivalence (`structural` false) or
/// structural congruence. Returns [`HopsiStatus::Counterexample`] when
/// they differ.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hopsi_program_eq(
    a: *const HopsiProgram,
    b: *const HopsiProgram,
    structural: bool,
    out: *mut *mut c_char,
) -> HopsiStatus {
    guard(|| match (program(a), program(b)) {
        (Ok(a), Ok(b)) => {
            let relation = if structural { Relation::Structcong } else { Relation::Nameeq };
            finish(cmd_eq(a, b, relation, false), out)
        }
        (Err(e), _) | (_, Err(e)) => e,
    })
}

/// Releases a string handed out by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hopsi_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
