//! C ABI over the `finsler` crate.
//!
//! Every function returns a [`FinslerStatus`]. On failure a message is kept
//! per thread and can be read with [`finsler_last_error_message`]. Fixtures
//! are opaque handles created by [`finsler_fixture_new`] and released with
//! [`finsler_fixture_free`]; JSON strings returned through out-pointers are
//! released with [`finsler_string_free`].

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use finsler::analysis::{self, extract_scalar_curvature, numata_pipeline, Tolerances};
use finsler::connections::spray;
use finsler::error::FinslerError;
use finsler::metrics::{builtin_fixture, guard_metric, ChartPoint, MetricFixture, SampleSpec};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FinslerStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    UnknownFixture = 3,
    InvalidParams = 4,
    Domain = 5,
    DegenerateMetric = 6,
    Internal = 7,
}

/// Opaque handle to a metric fixture.
pub struct FinslerFixture {
    inner: MetricFixture,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(FinslerStatus, String);

impl From<FinslerError> for Failure {
    fn from(e: FinslerError) -> Self {
        let status = match &e {
            FinslerError::UnknownFixture { .. } => FinslerStatus::UnknownFixture,
            FinslerError::InvalidParams { .. } => FinslerStatus::InvalidParams,
            FinslerError::OutsideDomain { .. } => FinslerStatus::Domain,
            FinslerError::DegenerateMetric { .. } | FinslerError::FixtureInvalid { .. } => FinslerStatus::DegenerateMetric,
            FinslerError::InvalidArgument(_) | FinslerError::Refused(_) | FinslerError::SamplingExhausted { .. } => {
                FinslerStatus::InvalidArgument
            }
            FinslerError::Jet(_) | FinslerError::NotJetCapable(_) => FinslerStatus::Internal,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(FinslerStatus::NullPointer, format!("`{what}` is null"))
}

fn guarded(f: impl FnOnce() -> Result<(), Failure>) -> FinslerStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FinslerStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal error: {msg}"));
            FinslerStatus::Internal
        }
    }
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(FinslerStatus::InvalidArgument, format!("`{what}` is not UTF-8")))
}

fn parse_params(s: &str) -> Result<BTreeMap<String, f64>, Failure> {
    let bad = |m: String| Failure(FinslerStatus::InvalidParams, m);
    let mut out = BTreeMap::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| bad(format!("expected key=value, got `{item}`")))?;
        let v: f64 = v.trim().parse().map_err(|e| bad(format!("bad value for `{k}`: {e}")))?;
        if out.insert(k.trim().to_string(), v).is_some() {
            return Err(bad(format!("parameter `{}` given twice", k.trim())));
        }
    }
    Ok(out)
}

unsafe fn fixture<'a>(fx: *const FinslerFixture) -> Result<&'a MetricFixture, Failure> {
    fx.as_ref().map(|f| &f.inner).ok_or_else(|| null("fixture"))
}

unsafe fn point(f: &MetricFixture, x: *const f64, y: *const f64, n: usize) -> Result<ChartPoint, Failure> {
    if x.is_null() {
        return Err(null("x"));
    }
    if y.is_null() {
        return Err(null("y"));
    }
    if n != f.dim() {
        return Err(Failure(
            FinslerStatus::InvalidArgument,
            format!("fixture has dimension {}, got {n} coordinates", f.dim()),
        ));
    }
    let x = std::slice::from_raw_parts(x, n).to_vec();
    let y = std::slice::from_raw_parts(y, n).to_vec();
    Ok(ChartPoint::new(x, y)?)
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

/// Creates a built-in fixture. `params` is a comma-separated `key=value`
/// list and may be null or empty for the defaults.
///
/// # Safety
/// `name` and a non-null `params` must be nul-terminated strings; `out` must
/// be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn finsler_fixture_new(
    name: *const c_char,
    dim: usize,
    params: *const c_char,
    out: *mut *mut FinslerFixture,
) -> FinslerStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        out.write(ptr::null_mut());
        let name = c_str(name, "name")?;
        let params = if params.is_null() { BTreeMap::new() } else { parse_params(c_str(params, "params")?)? };
        let inner = builtin_fixture(name, dim, &params)?;
        out.write(Box::into_raw(Box::new(FinslerFixture { inner })));
        Ok(())
    })
}

/// Releases a fixture. Null is ignored.
///
/// # Safety
/// `fx` must come from [`finsler_fixture_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn finsler_fixture_free(fx: *mut FinslerFixture) {
    if !fx.is_null() {
        drop(Box::from_raw(fx));
    }
}

/// Dimension of the fixture, or 0 for a null handle.
///
/// # Safety
/// `fx` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn finsler_fixture_dim(fx: *const FinslerFixture) -> usize {
    fx.as_ref().map_or(0, |f| f.inner.dim())
}

/// `L(x, y)`. `x` and `y` hold `n` values each.
///
/// # Safety
/// Pointers must be valid for the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn finsler_eval(
    fx: *const FinslerFixture,
    x: *const f64,
    y: *const f64,
    n: usize,
    out: *mut f64,
) -> FinslerStatus {
    guarded(|| {
        let f = fixture(fx)?;
        let p = point(f, x, y, n)?;
        write_out(out, f.finsler_value(&p)?, "out")
    })
}

/// Fundamental tensor `g_ij`, written row-major into `out[n * n]`.
///
/// # Safety
/// Pointers must be valid for the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn finsler_fundamental_tensor(
    fx: *const FinslerFixture,
    x: *const f64,
    y: *const f64,
    n: usize,
    out: *mut f64,
) -> FinslerStatus {
    guarded(|| {
        let f = fixture(fx)?;
        let p = point(f, x, y, n)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let g = f.fundamental_tensor_raw(&p)?;
        guard_metric(&g, &p)?;
        std::slice::from_raw_parts_mut(out, n * n).copy_from_slice(g.comps());
        Ok(())
    })
}

/// Spray coefficients `G^i`, written into `out[n]`.
///
/// # Safety
/// Pointers must be valid for the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn finsler_spray(
    fx: *const FinslerFixture,
    x: *const f64,
    y: *const f64,
    n: usize,
    out: *mut f64,
) -> FinslerStatus {
    guarded(|| {
        let f = fixture(fx)?;
        let p = point(f, x, y, n)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let g = spray(f, &p)?;
        std::slice::from_raw_parts_mut(out, n).copy_from_slice(g.comps());
        Ok(())
    })
}

/// Scalar curvature `r` fitted at a point, with the relative fit residual
/// and whether the deviation tensor vanished there (then `r = 0`).
/// `residual` and `flat` may be null.
///
/// # Safety
/// Pointers must be valid for the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn finsler_scalar_curvature(
    fx: *const FinslerFixture,
    x: *const f64,
    y: *const f64,
    n: usize,
    r: *mut f64,
    residual: *mut f64,
    flat: *mut bool,
) -> FinslerStatus {
    guarded(|| {
        let f = fixture(fx)?;
        let p = point(f, x, y, n)?;
        if r.is_null() {
            return Err(null("r"));
        }
        let fit = extract_scalar_curvature(f, &p)?;
        r.write(fit.r);
        if !residual.is_null() {
            residual.write(fit.residual);
        }
        if !flat.is_null() {
            flat.write(fit.flat);
        }
        Ok(())
    })
}

/// Sampling and tolerance settings for the report functions.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct FinslerRunConfig {
    pub samples: usize,
    pub seed: u64,
    pub tol_identity: f64,
    pub tol_zero: f64,
    /// 0 uses the global thread pool.
    pub threads: usize,
}

/// Default settings: 30 samples, seed 1, tolerances 1e-6 and 1e-7.
#[no_mangle]
pub extern "C" fn finsler_run_config_default() -> FinslerRunConfig {
    let t = Tolerances::default();
    FinslerRunConfig {
        samples: 30,
        seed: 1,
        tol_identity: t.identity,
        tol_zero: t.zero,
        threads: 0,
    }
}

enum Report {
    Classify,
    Verify,
    Numata,
}

unsafe fn report_json(
    fx: *const FinslerFixture,
    cfg: *const FinslerRunConfig,
    out: *mut *mut c_char,
    kind: Report,
) -> FinslerStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        out.write(ptr::null_mut());
        let f = fixture(fx)?;
        let cfg = cfg.as_ref().copied().unwrap_or_else(|| finsler_run_config_default());
        if cfg.samples == 0 {
            return Err(Failure(FinslerStatus::InvalidArgument, "samples must be at least 1".into()));
        }
        let tol = Tolerances::new(cfg.tol_identity, cfg.tol_zero)?;
        let spec = SampleSpec::new(cfg.samples, cfg.seed);
        let threads = (cfg.threads > 0).then_some(cfg.threads);
        let value = match kind {
            Report::Classify => serde_json::to_value(analysis::classify(f, &spec, tol, threads)?),
            Report::Verify => serde_json::to_value(analysis::verify(f, &spec, tol, threads)?),
            Report::Numata => serde_json::to_value(numata_pipeline(f, &spec, tol, threads)?),
        }
        .map_err(|e| Failure(FinslerStatus::Internal, e.to_string()))?;
        let s = CString::new(value.to_string()).map_err(|e| Failure(FinslerStatus::Internal, e.to_string()))?;
        out.write(s.into_raw());
        Ok(())
    })
}

/// Classification report as JSON. `cfg` may be null for the defaults.
///
/// # Safety
/// `fx` must be a live handle; `out` must be valid. Free the string with
/// [`finsler_string_free`].
#[no_mangle]
pub unsafe extern "C" fn finsler_classify_json(
    fx: *const FinslerFixture,
    cfg: *const FinslerRunConfig,
    out: *mut *mut c_char,
) -> FinslerStatus {
    report_json(fx, cfg, out, Report::Classify)
}

/// Classification plus the full identity suite as JSON.
///
/// # Safety
/// As for [`finsler_classify_json`].
#[no_mangle]
pub unsafe extern "C" fn finsler_verify_json(
    fx: *const FinslerFixture,
    cfg: *const FinslerRunConfig,
    out: *mut *mut c_char,
) -> FinslerStatus {
    report_json(fx, cfg, out, Report::Verify)
}

/// The Landsberg/scalar-curvature rigidity pipeline as JSON. Fails with
/// `INVALID_ARGUMENT` below dimension 3.
///
/// # Safety
/// As for [`finsler_classify_json`].
#[no_mangle]
pub unsafe extern "C" fn finsler_numata_json(
    fx: *const FinslerFixture,
    cfg: *const FinslerRunConfig,
    out: *mut *mut c_char,
) -> FinslerStatus {
    report_json(fx, cfg, out, Report::Numata)
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn finsler_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn finsler_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_parse() {
        let p = parse_params(" k = 1.5 ,c=2,").ok().unwrap();
        assert_eq!(p["k"], 1.5);
        assert_eq!(p["c"], 2.0);
        assert!(parse_params("k").is_err());
        assert!(parse_params("k=x").is_err());
        assert!(parse_params("k=1,k=2").is_err());
        assert!(parse_params("").ok().unwrap().is_empty());
    }

    #[test]
    fn panics_become_internal() {
        let s = guarded(|| panic!("boom"));
        assert_eq!(s, FinslerStatus::Internal);
        let msg = unsafe { CStr::from_ptr(finsler_last_error_message()) };
        assert!(msg.to_str().unwrap().contains("boom"));
    }
}
