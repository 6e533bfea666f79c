//! C ABI over `fimreg`.
//!
//! Every call returns a [`FimregStatus`]. On a non-OK status the message is
//! available from [`fimreg_last_error`] on the same thread. Strings handed out
//! by the library are NUL-terminated UTF-8 and must be released with
//! [`fimreg_string_free`]; module handles with [`fimreg_module_free`].

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use libc::{c_char, size_t};

use fimreg::campaign::{self, CampaignConfig};
use fimreg::homology::{homology_with, tor_oracle, Engine, OracleBudget};
use fimreg::linalg::{FieldConfig, PrimeField, Rationals};
use fimreg::module::{
    from_presentation, random_presentation, validate, InputFile, ModuleFile, Presentation, PresentationFile,
    TruncatedModule, Window,
};
use fimreg::rho;
use fimreg::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FimregStatus {
    Ok = 0,
    /// A check or campaign ran and found a violation.
    Violation = 1,
    Input = 2,
    Budget = 3,
    Internal = 4,
    NullPointer = 5,
    Panic = 6,
}

enum Inner {
    Prime(TruncatedModule<PrimeField>, Option<Presentation<PrimeField>>),
    Rational(TruncatedModule<Rationals>, Option<Presentation<Rationals>>),
}

/// Opaque module handle, optionally carrying the presentation it came from.
pub struct FimregModule {
    inner: Inner,
}

macro_rules! on_module {
    ($h:expr, ($v:ident, $p:ident) => $body:expr) => {
        match &$h.inner {
            Inner::Prime($v, $p) => $body,
            Inner::Rational($v, $p) => $body,
        }
    };
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> FimregStatus {
    match e {
        Error::Input(_) | Error::Io(_) | Error::Json(_) => FimregStatus::Input,
        Error::Budget(_) => FimregStatus::Budget,
        Error::Internal(_) => FimregStatus::Internal,
    }
}

/// Runs `f`, recording errors and panics for [`fimreg_last_error`].
fn guard(f: impl FnOnce() -> Result<FimregStatus, Error>) -> FimregStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err(e)) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("panic inside fimreg");
            FimregStatus::Panic
        }
    }
}

unsafe fn arg_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Error> {
    if p.is_null() {
        return Err(Error::Input(format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Error::Input(format!("{what} is not UTF-8")))
}

fn null_out(what: &str) -> FimregStatus {
    set_error(&format!("{what} is null"));
    FimregStatus::NullPointer
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Error> {
    let c = CString::new(s).map_err(|_| Error::Internal("output contains NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

fn load(file: &InputFile) -> Result<Inner, Error> {
    Ok(match file.field() {
        FieldConfig::Prime { p } => {
            let (v, pres) = file.load(&PrimeField::new(p)?)?;
            Inner::Prime(v, pres)
        }
        FieldConfig::Rationals => {
            let (v, pres) = file.load(&Rationals)?;
            Inner::Rational(v, pres)
        }
    })
}

fn boxed(inner: Inner) -> *mut FimregModule {
    Box::into_raw(Box::new(FimregModule { inner }))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fimreg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message of the last failed call on this thread, or null. The pointer stays
/// valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn fimreg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fimreg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a presentation or module file given as JSON text.
///
/// # Safety
/// `json` must be a valid C string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fimreg_module_from_json(json: *const c_char, out: *mut *mut FimregModule) -> FimregStatus {
    if out.is_null() {
        return null_out("out");
    }
    guard(|| {
        let file = InputFile::from_json(arg_str(json, "json")?)?;
        *out = boxed(load(&file)?);
        Ok(FimregStatus::Ok)
    })
}

/// Builds the seeded random presentation `(m, d, r)` on the window `N = top`.
/// `field` is `p=<prime>` or `rationals`; null means `p=101`.
///
/// # Safety
/// `field` must be null or a valid C string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fimreg_module_build(
    m: size_t,
    d: i64,
    r: i64,
    top: size_t,
    generators: size_t,
    relations: size_t,
    seed: u64,
    field: *const c_char,
    out: *mut *mut FimregModule,
) -> FimregStatus {
    if out.is_null() {
        return null_out("out");
    }
    guard(|| {
        let cfg = if field.is_null() { FieldConfig::default() } else { FieldConfig::parse(arg_str(field, "field")?)? };
        let window = Window::new(m, top);
        let inner = match cfg {
            FieldConfig::Prime { p } => {
                let f = PrimeField::new(p)?;
                let pres = random_presentation(&f, m, d, r, generators, relations, seed)?;
                let (v, _) = from_presentation(&pres, window, &f)?;
                Inner::Prime(v, Some(pres))
            }
            FieldConfig::Rationals => {
                let pres = random_presentation(&Rationals, m, d, r, generators, relations, seed)?;
                let (v, _) = from_presentation(&pres, window, &Rationals)?;
                Inner::Rational(v, Some(pres))
            }
        };
        *out = boxed(inner);
        Ok(FimregStatus::Ok)
    })
}

/// # Safety
/// `h` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fimreg_module_free(h: *mut FimregModule) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Writes `m`, `N` and the total dimension over the window.
///
/// # Safety
/// `h` must be a live handle; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn fimreg_module_shape(
    h: *const FimregModule,
    m: *mut size_t,
    top: *mut size_t,
    total_dim: *mut size_t,
) -> FimregStatus {
    if h.is_null() || m.is_null() || top.is_null() || total_dim.is_null() {
        return null_out("argument");
    }
    guard(|| {
        on_module!(&*h, (v, _p) => {
            *m = v.m();
            *top = v.top();
            *total_dim = v.total_dim();
        });
        Ok(FimregStatus::Ok)
    })
}

/// Serializes the module (not the presentation) as a module file.
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fimreg_module_to_json(h: *const FimregModule, out: *mut *mut c_char) -> FimregStatus {
    if h.is_null() || out.is_null() {
        return null_out("argument");
    }
    guard(|| {
        let json = on_module!(&*h, (v, _p) => ModuleFile::new(v).to_json());
        put_string(out, json)?;
        Ok(FimregStatus::Ok)
    })
}

/// Serializes the presentation the module was built from, if any.
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fimreg_module_presentation_json(
    h: *const FimregModule,
    out: *mut *mut c_char,
) -> FimregStatus {
    if h.is_null() || out.is_null() {
        return null_out("argument");
    }
    guard(|| {
        let json = on_module!(&*h, (v, p) => match p {
            Some(p) => PresentationFile::new(p, v.top(), v.field()).to_json(),
            None => return Err(Error::Input("module has no presentation".into())),
        });
        put_string(out, json)?;
        Ok(FimregStatus::Ok)
    })
}

/// Counts violated functor relations; `Violation` when any.
///
/// # Safety
/// `h` must be a live handle and `violations` writable.
#[no_mangle]
pub unsafe extern "C" fn fimreg_module_validate(h: *const FimregModule, violations: *mut size_t) -> FimregStatus {
    if h.is_null() || violations.is_null() {
        return null_out("argument");
    }
    guard(|| {
        let n = on_module!(&*h, (v, _p) => validate(v).len());
        *violations = n;
        Ok(if n == 0 { FimregStatus::Ok } else { FimregStatus::Violation })
    })
}

/// Homology table as JSON. `engine` is `resolution`, `koszul` or `oracle`;
/// null means `resolution`.
///
/// # Safety
/// `h` must be a live handle, `engine` null or a valid C string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fimreg_module_homology(
    h: *const FimregModule,
    max_i: size_t,
    engine: *const c_char,
    out: *mut *mut c_char,
) -> FimregStatus {
    if h.is_null() || out.is_null() {
        return null_out("argument");
    }
    guard(|| {
        let name = if engine.is_null() { "resolution" } else { arg_str(engine, "engine")? };
        let table = on_module!(&*h, (v, _p) => match name {
            "oracle" => tor_oracle(v, max_i, OracleBudget::default())?,
            other => homology_with(v, max_i, Engine::parse(other)?)?,
        });
        put_string(out, table.to_json())?;
        Ok(FimregStatus::Ok)
    })
}

/// Runs one functor check (`four-term`, `two-row`, `church`, `split-h0`,
/// `restrict-free`) and writes its JSON report; `Violation` when it fails.
///
/// # Safety
/// `h` must be a live handle, `check` a valid C string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fimreg_module_check(
    h: *const FimregModule,
    check: *const c_char,
    max_i: size_t,
    out: *mut *mut c_char,
) -> FimregStatus {
    if h.is_null() || out.is_null() {
        return null_out("argument");
    }
    guard(|| {
        let name = arg_str(check, "check")?;
        let engine = Engine::parse("resolution")?;
        let report = on_module!(&*h, (v, p) => campaign::module_check(v, p.as_ref(), name, max_i, engine, 0)?);
        put_string(out, report.to_json())?;
        Ok(if report.passed() { FimregStatus::Ok } else { FimregStatus::Violation })
    })
}

/// `rho_m(d, r)` as a decimal string, or a symbolic form over atoms when the
/// value is too large to expand.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fimreg_rho(m: size_t, d: i64, r: i64, out: *mut *mut c_char) -> FimregStatus {
    if out.is_null() {
        return null_out("out");
    }
    guard(|| {
        put_string(out, rho::rho(m, d, r)?.to_string())?;
        Ok(FimregStatus::Ok)
    })
}

/// Runs a campaign from its JSON config and writes the JSON report;
/// `Violation` when the verdict is `fail`.
///
/// # Safety
/// `config` must be a valid C string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fimreg_run_campaign(config: *const c_char, out: *mut *mut c_char) -> FimregStatus {
    if out.is_null() {
        return null_out("out");
    }
    guard(|| {
        let cfg = CampaignConfig::from_json(arg_str(config, "config")?)?;
        let report = campaign::run_campaign(&cfg)?;
        put_string(out, report.to_json())?;
        Ok(if report.passed() { FimregStatus::Ok } else { FimregStatus::Violation })
    })
}
