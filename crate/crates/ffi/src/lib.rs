//! C interface to `detmld`.
//!
//! Pairs live behind an opaque handle. Every function returns a
//! [`DetmldStatus`]; on failure the message is available from
//! [`detmld_last_error_message`] until the next call on the same thread.
//! Values that may not fit a machine integer (rationals, `-inf`) come back
//! as strings, and structured reports as JSON; both must be released with
//! [`detmld_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use detmld::oracle::Target;
use detmld::pairs::rational;
use detmld::tableaux::{DoubleTableau, Guard, Straightener};
use detmld::{DeterminantalPair, Error, ExtendedPartition, Order};

/// Marks an infinite entry of an extended partition.
pub const DETMLD_INF: u64 = u64::MAX;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetmldStatus {
    Ok = 0,
    /// An input violated a precondition.
    Invalid = 1,
    /// The computation is outside the supported size.
    Guard = 2,
    /// An internal consistency check failed.
    Inconsistent = 3,
    /// Malformed text input.
    Parse = 4,
    NullPointer = 5,
    Panic = 6,
}

/// Opaque determinantal pair `(M, α_1 D^{m-1} + … + α_k D^{m-k})`.
pub struct DetmldPair {
    inner: DeterminantalPair,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetmldTargetKind {
    /// At a matrix of rank `index`.
    Point = 0,
    /// Along `D^{k-index}`.
    Locus = 1,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let text = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

fn fail(e: Error) -> DetmldStatus {
    let status = match e {
        Error::Invalid(_) => DetmldStatus::Invalid,
        Error::Guard(_) => DetmldStatus::Guard,
        Error::Inconsistent(_) => DetmldStatus::Inconsistent,
        Error::Parse(_) => DetmldStatus::Parse,
    };
    set_error(e.to_string());
    status
}

fn null(what: &str) -> DetmldStatus {
    set_error(format!("{what} is null"));
    DetmldStatus::NullPointer
}

/// Runs `f`, turning library errors and panics into status codes.
fn guarded(f: impl FnOnce() -> Result<(), DetmldStatus>) -> DetmldStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DetmldStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("internal panic".into());
            DetmldStatus::Panic
        }
    }
}

fn lib<T>(r: detmld::Result<T>) -> Result<T, DetmldStatus> {
    r.map_err(fail)
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), DetmldStatus> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    let c = CString::new(s).map_err(|_| fail(Error::Inconsistent("output contains a nul byte".into())))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn pair_ref<'a>(pair: *const DetmldPair) -> Result<&'a DeterminantalPair, DetmldStatus> {
    pair.as_ref().map(|p| &p.inner).ok_or_else(|| null("pair"))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), DetmldStatus> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = value;
    Ok(())
}

/// Creates a pair from `len` coefficients `alpha_num[i] / alpha_den[i]`
/// (missing ones are zero). `alpha_num` and `alpha_den` may be null when
/// `len` is 0.
///
/// # Safety
/// The coefficient arrays must hold `len` readable values and `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn detmld_pair_new(
    m: usize,
    k: usize,
    alpha_num: *const i64,
    alpha_den: *const i64,
    len: usize,
    out: *mut *mut DetmldPair,
) -> DetmldStatus {
    guarded(|| {
        if len > 0 && (alpha_num.is_null() || alpha_den.is_null()) {
            return Err(null("coefficient array"));
        }
        let mut alphas = Vec::with_capacity(len);
        for i in 0..len {
            let (n, d) = (*alpha_num.add(i), *alpha_den.add(i));
            if d == 0 {
                return Err(fail(Error::Invalid(format!("coefficient {} has denominator 0", i + 1))));
            }
            alphas.push(rational(n, d));
        }
        let inner = lib(DeterminantalPair::new(m, k, alphas))?;
        write(out, Box::into_raw(Box::new(DetmldPair { inner })))
    })
}

/// # Safety
/// `pair` must come from [`detmld_pair_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn detmld_pair_free(pair: *mut DetmldPair) {
    if !pair.is_null() {
        drop(Box::from_raw(pair));
    }
}

/// mld at a rank-`q` matrix as `"p/q"` or `"-inf"`.
///
/// # Safety
/// `pair` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn detmld_mld_at_rank(pair: *const DetmldPair, q: usize, out: *mut *mut c_char) -> DetmldStatus {
    guarded(|| {
        let v = lib(detmld::mld::mld_at_rank(pair_ref(pair)?, q))?;
        write_string(out, v.to_string())
    })
}

/// mld along `D^{k-j}` as `"p/q"` or `"-inf"`.
///
/// # Safety
/// `pair` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn detmld_mld_along(pair: *const DetmldPair, j: usize, out: *mut *mut c_char) -> DetmldStatus {
    guarded(|| {
        let v = lib(detmld::mld::mld_along(pair_ref(pair)?, j))?;
        write_string(out, v.to_string())
    })
}

/// # Safety
/// `pair` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn detmld_is_lc_at_rank(pair: *const DetmldPair, q: usize, out: *mut bool) -> DetmldStatus {
    guarded(|| write(out, lib(detmld::mld::is_lc_at_rank(pair_ref(pair)?, q))?))
}

/// # Safety
/// `pair` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn detmld_is_lc_along(pair: *const DetmldPair, j: usize, out: *mut bool) -> DetmldStatus {
    guarded(|| write(out, lib(detmld::mld::is_lc_along(pair_ref(pair)?, j))?))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn detmld_is_terminal(m: usize, k: usize, out: *mut bool) -> DetmldStatus {
    guarded(|| write(out, lib(detmld::mld::is_terminal(m, k))?))
}

unsafe fn read_partition(lambda: *const u64, len: usize) -> Result<ExtendedPartition, DetmldStatus> {
    if lambda.is_null() && len > 0 {
        return Err(null("lambda"));
    }
    let entries = (0..len)
        .map(|i| match *lambda.add(i) {
            DETMLD_INF => Order::Inf,
            x => Order::Finite(x),
        })
        .collect();
    lib(ExtendedPartition::new(entries))
}

/// Codimension of the orbit of `diag(t^λ)` in the arcs of `D^k`; entries
/// equal to [`DETMLD_INF`] are infinite.
///
/// # Safety
/// `lambda` must hold `len` values and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn detmld_orbit_codim(
    m: usize,
    k: usize,
    lambda: *const u64,
    len: usize,
    out: *mut u64,
) -> DetmldStatus {
    guarded(|| {
        let lambda = read_partition(lambda, len)?;
        let pair = lib(DeterminantalPair::bare(m, k))?;
        write(out, lib(detmld::orbit::orbit_codim(&lambda, &pair))?)
    })
}

/// Contact order `w_i` along `D^{k-i}`; [`DETMLD_INF`] when infinite.
///
/// # Safety
/// `lambda` must hold `len` values and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn detmld_contact_order(
    m: usize,
    k: usize,
    lambda: *const u64,
    len: usize,
    i: usize,
    out: *mut u64,
) -> DetmldStatus {
    guarded(|| {
        let lambda = read_partition(lambda, len)?;
        let pair = lib(DeterminantalPair::bare(m, k))?;
        let w = lib(detmld::orbit::contact_order_subvariety(&lambda, &pair, i))?;
        write(out, w.finite().unwrap_or(DETMLD_INF))
    })
}

/// Oracle search with tails bounded by `bound`, compared with the closed
/// form, as JSON `{"oracle": …, "closed_form": …, "agree": …}`.
///
/// # Safety
/// `pair` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn detmld_oracle_json(
    pair: *const DetmldPair,
    kind: DetmldTargetKind,
    index: usize,
    bound: u64,
    out: *mut *mut c_char,
) -> DetmldStatus {
    guarded(|| {
        let target = match kind {
            DetmldTargetKind::Point => Target::Point { q: index },
            DetmldTargetKind::Locus => Target::Locus { j: index },
        };
        let cmp = lib(detmld::oracle::mld_via_oracle(pair_ref(pair)?, target, bound))?;
        write_string(out, serde_json::to_string(&cmp).expect("reports serialize"))
    })
}

/// Straightens a double tableau given as JSON
/// `{"left": {"shape": …, "rows": …}, "right": …}`. `k_bound` 0 means no
/// bound.
///
/// # Safety
/// `tableau_json` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn detmld_straighten_json(
    tableau_json: *const c_char,
    m: usize,
    k_bound: usize,
    out: *mut *mut c_char,
) -> DetmldStatus {
    guarded(|| {
        if tableau_json.is_null() {
            return Err(null("tableau_json"));
        }
        let text = CStr::from_ptr(tableau_json).to_str().map_err(|e| fail(Error::Parse(e.to_string())))?;
        let dt: DoubleTableau = serde_json::from_str(text).map_err(|e| fail(Error::Parse(e.to_string())))?;
        let bound = (k_bound > 0).then_some(k_bound);
        let expansion = lib(Straightener::new(m, Guard::default()).straighten(&dt, bound))?;
        write_string(out, serde_json::to_string(&expansion).expect("expansions serialize"))
    })
}

/// Full canonical-form report for `D^k` in `m × m` matrices (`m ≤ 3`).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn detmld_nash_verify_json(m: usize, k: usize, out: *mut *mut c_char) -> DetmldStatus {
    guarded(|| {
        let report = lib(detmld::forms::verify_nash(m, k))?;
        write_string(out, serde_json::to_string(&report).expect("reports serialize"))
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn detmld_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn detmld_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
