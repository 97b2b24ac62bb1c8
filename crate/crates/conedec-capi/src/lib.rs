//! C ABI for the conedec engine.
//!
//! All functions follow one convention: inputs are UTF-8 C strings, results
//! are newly allocated JSON C strings the caller releases with
//! [`conedec_string_free`], and the return value is a status code. Parsed
//! documents are opaque handles released with [`conedec_document_free`].
//! On any failure the thread-local message from
//! [`conedec_last_error_message`] describes the problem.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use conedec::document::{self, InputDocument};
use conedec::{gallery, svg, Error};

/// Status codes; validation and refusal mirror the CLI exit codes.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ConedecStatus {
    Ok = 0,
    /// Malformed input: bad JSON, bad rational, inconsistent declared data.
    Validation = 2,
    /// Well-formed input refused on mathematical grounds.
    MathRefusal = 3,
    /// Unexpected internal failure.
    Internal = 4,
    /// A required pointer argument was null.
    NullArgument = 5,
}

/// Opaque parsed document handle.
pub struct ConedecDocument {
    doc: InputDocument,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> ConedecStatus {
    match err.exit_code() {
        2 => ConedecStatus::Validation,
        _ => ConedecStatus::MathRefusal,
    }
}

/// Last error message for this thread, or null when no error occurred.
/// The caller frees the returned string with `conedec_string_free`.
#[no_mangle]
pub extern "C" fn conedec_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| match &*e.borrow() {
        Some(c) => c.clone().into_raw(),
        None => ptr::null_mut(),
    })
}

/// Frees a string allocated by this library. Null is ignored.
///
/// # Safety
/// `s` must be a pointer previously returned by a conedec function and not
/// yet freed.
#[no_mangle]
pub unsafe extern "C" fn conedec_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, ConedecStatus> {
    if ptr.is_null() {
        set_error("null string argument".to_string());
        return Err(ConedecStatus::NullArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8".to_string());
        ConedecStatus::Validation
    })
}

fn write_out(out: *mut *mut c_char, text: String) -> ConedecStatus {
    if out.is_null() {
        set_error("null output pointer".to_string());
        return ConedecStatus::NullArgument;
    }
    match CString::new(text) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            ConedecStatus::Ok
        }
        Err(_) => {
            set_error("result contained an interior NUL".to_string());
            ConedecStatus::Internal
        }
    }
}

fn guarded(f: impl FnOnce() -> ConedecStatus) -> ConedecStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic".to_string());
            ConedecStatus::Internal
        }
    }
}

fn run_json(
    out: *mut *mut c_char,
    f: impl FnOnce() -> Result<serde_json::Value, Error>,
) -> ConedecStatus {
    match f() {
        Ok(v) => write_out(out, v.to_string()),
        Err(e) => {
            set_error(e.to_string());
            status_of(&e)
        }
    }
}

/// Parses a JSON input document into an opaque handle.
///
/// # Safety
/// `json` must be a valid NUL-terminated string; `out` must be a valid
/// pointer to receive the handle.
#[no_mangle]
pub unsafe extern "C" fn conedec_document_parse(
    json: *const c_char,
    out: *mut *mut ConedecDocument,
) -> ConedecStatus {
    guarded(|| {
        if out.is_null() {
            set_error("null output pointer".to_string());
            return ConedecStatus::NullArgument;
        }
        *out = ptr::null_mut();
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match document::parse_document(text) {
            Ok(doc) => {
                *out = Box::into_raw(Box::new(ConedecDocument { doc }));
                ConedecStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Releases a document handle. Null is ignored.
///
/// # Safety
/// `doc` must come from `conedec_document_parse` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn conedec_document_free(doc: *mut ConedecDocument) {
    if !doc.is_null() {
        drop(Box::from_raw(doc));
    }
}

unsafe fn doc_ref<'a>(doc: *const ConedecDocument) -> Result<&'a InputDocument, ConedecStatus> {
    if doc.is_null() {
        set_error("null document handle".to_string());
        return Err(ConedecStatus::NullArgument);
    }
    Ok(&(*doc).doc)
}

/// Zariski decomposition of a divisor expression (for example `"2C0+1C1"`).
///
/// # Safety
/// Pointer arguments must satisfy the crate-level convention.
#[no_mangle]
pub unsafe extern "C" fn conedec_zariski(
    doc: *const ConedecDocument,
    divisor: *const c_char,
    out_json: *mut *mut c_char,
) -> ConedecStatus {
    guarded(|| {
        let (doc, divisor) = match (doc_ref(doc), read_str(divisor)) {
            (Ok(d), Ok(s)) => (d, s),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        run_json(out_json, || document::cmd_zariski(doc, divisor))
    })
}

/// MMP with scaling for comma-separated boundary coefficients.
///
/// # Safety
/// Pointer arguments must satisfy the crate-level convention.
#[no_mangle]
pub unsafe extern "C" fn conedec_mmp(
    doc: *const ConedecDocument,
    coefficients: *const c_char,
    out_json: *mut *mut c_char,
) -> ConedecStatus {
    guarded(|| {
        let (doc, coeffs) = match (doc_ref(doc), read_str(coefficients)) {
            (Ok(d), Ok(s)) => (d, s),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        run_json(out_json, || document::cmd_mmp(doc, coeffs))
    })
}

/// Canonical and minimal chamber decompositions of the boundary polytope.
///
/// # Safety
/// Pointer arguments must satisfy the crate-level convention.
#[no_mangle]
pub unsafe extern "C" fn conedec_chambers(
    doc: *const ConedecDocument,
    out_json: *mut *mut c_char,
) -> ConedecStatus {
    guarded(|| {
        let doc = match doc_ref(doc) {
            Ok(d) => d,
            Err(s) => return s,
        };
        run_json(out_json, || document::cmd_chambers(doc).map(|(v, _)| v))
    })
}

/// Chamber indices of an infinite family meeting a region
/// (`"box x0 x1 y0 y1"` or `"point x y"`).
///
/// # Safety
/// Pointer arguments must satisfy the crate-level convention.
#[no_mangle]
pub unsafe extern "C" fn conedec_walk(
    doc: *const ConedecDocument,
    region: *const c_char,
    out_json: *mut *mut c_char,
) -> ConedecStatus {
    guarded(|| {
        let (doc, region) = match (doc_ref(doc), read_str(region)) {
            (Ok(d), Ok(s)) => (d, s),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        run_json(out_json, || document::cmd_walk(doc, region))
    })
}

/// Names and summaries of the built-in fixtures.
///
/// # Safety
/// `out_json` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn conedec_gallery_list(out_json: *mut *mut c_char) -> ConedecStatus {
    guarded(|| run_json(out_json, || Ok(gallery::list())))
}

/// Runs a fixture's self-checking computation.
///
/// # Safety
/// Pointer arguments must satisfy the crate-level convention.
#[no_mangle]
pub unsafe extern "C" fn conedec_gallery_run(
    name: *const c_char,
    out_json: *mut *mut c_char,
) -> ConedecStatus {
    guarded(|| {
        let name = match read_str(name) {
            Ok(s) => s,
            Err(s) => return s,
        };
        run_json(out_json, || gallery::run(name))
    })
}

/// Exports a fixture as an editable input document.
///
/// # Safety
/// Pointer arguments must satisfy the crate-level convention.
#[no_mangle]
pub unsafe extern "C" fn conedec_gallery_export(
    name: *const c_char,
    out_json: *mut *mut c_char,
) -> ConedecStatus {
    guarded(|| {
        let name = match read_str(name) {
            Ok(s) => s,
            Err(s) => return s,
        };
        run_json(out_json, || document::export_fixture(name))
    })
}

/// Renders a chamber decomposition JSON to an SVG string.
///
/// # Safety
/// Pointer arguments must satisfy the crate-level convention.
#[no_mangle]
pub unsafe extern "C" fn conedec_render_svg(
    decomposition_json: *const c_char,
    out_svg: *mut *mut c_char,
) -> ConedecStatus {
    guarded(|| {
        let text = match read_str(decomposition_json) {
            Ok(s) => s,
            Err(s) => return s,
        };
        let value: serde_json::Value = match serde_json::from_str(text) {
            Ok(v) => v,
            Err(e) => {
                set_error(format!("malformed JSON: {e}"));
                return ConedecStatus::Validation;
            }
        };
        match svg::render_decomposition(&value) {
            Ok(s) => write_out(out_svg, s),
            Err(e) => {
                set_error(e.to_string());
                status_of(&e)
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cstr(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    unsafe fn take(out: *mut c_char) -> String {
        let s = CStr::from_ptr(out).to_str().unwrap().to_string();
        conedec_string_free(out);
        s
    }

    #[test]
    fn full_walk_through_the_abi() {
        unsafe {
            let mut doc_json: *mut c_char = ptr::null_mut();
            let name = cstr("example3");
            assert_eq!(
                conedec_gallery_export(name.as_ptr(), &mut doc_json),
                ConedecStatus::Ok
            );
            let text = take(doc_json);

            let mut handle: *mut ConedecDocument = ptr::null_mut();
            let c_text = cstr(&text);
            assert_eq!(
                conedec_document_parse(c_text.as_ptr(), &mut handle),
                ConedecStatus::Ok
            );

            let mut out: *mut c_char = ptr::null_mut();
            let region = cstr("box 1 2 -1/2 1/2");
            assert_eq!(
                conedec_walk(handle, region.as_ptr(), &mut out),
                ConedecStatus::Ok
            );
            let result: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
            assert_eq!(result, serde_json::json!({"chambers": [0, 1, 2]}));

            // Accumulation refusal surfaces as MathRefusal with a message.
            let bad_region = cstr("box 0 2 -2 0");
            let mut out2: *mut c_char = ptr::null_mut();
            assert_eq!(
                conedec_walk(handle, bad_region.as_ptr(), &mut out2),
                ConedecStatus::MathRefusal
            );
            let msg = conedec_last_error_message();
            assert!(!msg.is_null());
            assert!(take(msg).contains("accumulation"));

            conedec_document_free(handle);
        }
    }

    #[test]
    fn zariski_and_chambers_through_the_abi() {
        unsafe {
            let mut doc_json: *mut c_char = ptr::null_mut();
            let name = cstr("example1");
            assert_eq!(
                conedec_gallery_export(name.as_ptr(), &mut doc_json),
                ConedecStatus::Ok
            );
            let text = take(doc_json);
            let c_text = cstr(&text);
            let mut handle: *mut ConedecDocument = ptr::null_mut();
            assert_eq!(
                conedec_document_parse(c_text.as_ptr(), &mut handle),
                ConedecStatus::Ok
            );

            let mut out: *mut c_char = ptr::null_mut();
            let divisor = cstr("2C0+1C1");
            assert_eq!(
                conedec_zariski(handle, divisor.as_ptr(), &mut out),
                ConedecStatus::Ok
            );
            let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
            assert_eq!(v["zariski"]["N"][0]["curve"], serde_json::json!("C0"));

            let mut dec: *mut c_char = ptr::null_mut();
            assert_eq!(conedec_chambers(handle, &mut dec), ConedecStatus::Ok);
            let dec_text = take(dec);
            let c_dec = cstr(&dec_text);
            let mut svg_out: *mut c_char = ptr::null_mut();
            assert_eq!(
                conedec_render_svg(c_dec.as_ptr(), &mut svg_out),
                ConedecStatus::Ok
            );
            assert!(take(svg_out).starts_with("<svg"));

            conedec_document_free(handle);
        }
    }

    #[test]
    fn parse_rejects_bad_documents() {
        unsafe {
            let mut handle: *mut ConedecDocument = ptr::null_mut();
            let bad = cstr("{\"name\": \"x\", \"kind\": \"surface\"}");
            assert_eq!(
                conedec_document_parse(bad.as_ptr(), &mut handle),
                ConedecStatus::Validation
            );
            assert!(handle.is_null());
            let msg = conedec_last_error_message();
            assert!(!msg.is_null());
            conedec_string_free(msg);

            assert_eq!(
                conedec_document_parse(ptr::null(), &mut handle),
                ConedecStatus::NullArgument
            );
        }
    }
}
