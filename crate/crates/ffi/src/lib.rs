//! C ABI over the metaverify statistics, norm tables and lemmatizer.
//!
//! Every fallible function returns an [`MvStatus`]; on failure a message is
//! kept per thread and can be read with [`mv_last_error`]. Results are written
//! through caller-provided out pointers. Norm tables are opaque handles owned
//! by the caller and released with [`mv_norm_table_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use metaverify::analysis::{classify_pair, PairClass, PairRecord};
use metaverify::corpus::{lemmatize, Upos};
use metaverify::norms::{self, NormKind, NormTable};
use metaverify::stats::{self, PermutationConfig, PermutationMode, Sidedness};
use metaverify::error::ErrorKind;
use metaverify::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MvStatus {
    Ok = 0,
    /// A required pointer was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// A parameter was outside its domain.
    InvalidArgument = 3,
    /// Input data could not be read or was inconsistent.
    Data = 4,
    /// The lookup found no entry.
    NotFound = 5,
    /// The output buffer is too small; the required size was written.
    BufferTooSmall = 6,
    /// A Rust panic was caught at the boundary.
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MvSidedness {
    TwoSided = 0,
    Greater = 1,
    Less = 2,
}

impl From<MvSidedness> for Sidedness {
    fn from(s: MvSidedness) -> Self {
        match s {
            MvSidedness::TwoSided => Sidedness::TwoSided,
            MvSidedness::Greater => Sidedness::Greater,
            MvSidedness::Less => Sidedness::Less,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MvPermutationMode {
    Auto = 0,
    Exhaustive = 1,
    MonteCarlo = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MvPairClass {
    Metaphorical = 0,
    Literal = 1,
    Ambiguous = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MvNormKind {
    Concreteness = 0,
    Imageability = 1,
    /// Word complexity ratings, stored as familiarity `6 - c`.
    Complexity = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MvUpos {
    Verb = 0,
    Noun = 1,
    Pron = 2,
    Adj = 3,
    Adv = 4,
    Other = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MvTestResult {
    pub statistic: f64,
    pub p_value: f64,
    /// Zero when the p-value is exact.
    pub replicates: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MvInterval {
    pub low: f64,
    pub high: f64,
}

/// Opaque norm table.
pub struct MvNormTable {
    table: NormTable,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    let c = CString::new(text).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: MvStatus, message: impl Into<String>) -> MvStatus {
    set_error(message);
    status
}

fn from_error(e: Error) -> MvStatus {
    let status = match e.kind() {
        ErrorKind::Validation => MvStatus::InvalidArgument,
        ErrorKind::Data => MvStatus::Data,
    };
    fail(status, e.to_string())
}

/// Runs `f`, clearing the last error first and turning panics into a status.
fn guard(f: impl FnOnce() -> MvStatus) -> MvStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(MvStatus::Panic, "panic in metaverify"),
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, MvStatus> {
    if p.is_null() {
        return Err(fail(MvStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(MvStatus::InvalidUtf8, format!("{name} is not UTF-8")))
}

unsafe fn slice_arg<'a, T>(p: *const T, len: usize, name: &str) -> Result<&'a [T], MvStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(fail(MvStatus::NullPointer, format!("{name} is null")));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

macro_rules! out_ptr {
    ($p:expr) => {
        if $p.is_null() {
            return fail(MvStatus::NullPointer, concat!(stringify!($p), " is null"));
        }
    };
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn mv_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Exact binomial test of `k` successes in `n` trials against `p0`.
///
/// # Safety
/// `out` must point to writable memory for one `MvTestResult`.
#[no_mangle]
pub unsafe extern "C" fn mv_binomial_test(
    k: u64,
    n: u64,
    p0: f64,
    sidedness: MvSidedness,
    out: *mut MvTestResult,
) -> MvStatus {
    guard(|| {
        out_ptr!(out);
        match stats::binomial_test(k, n, p0, sidedness.into()) {
            Ok(r) => {
                *out = MvTestResult {
                    statistic: r.statistic,
                    p_value: r.p_value,
                    replicates: 0,
                };
                MvStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Permutation test for `ka/na - kb/nb` from counts of ones per group.
///
/// # Safety
/// `out` must point to writable memory for one `MvTestResult`.
#[no_mangle]
pub unsafe extern "C" fn mv_permutation_test(
    ka: u64,
    na: u64,
    kb: u64,
    nb: u64,
    replicates: u64,
    seed: u64,
    sidedness: MvSidedness,
    mode: MvPermutationMode,
    out: *mut MvTestResult,
) -> MvStatus {
    guard(|| {
        out_ptr!(out);
        let config = PermutationConfig {
            replicates,
            seed,
            sidedness: sidedness.into(),
            mode: match mode {
                MvPermutationMode::Auto => PermutationMode::Auto,
                MvPermutationMode::Exhaustive => PermutationMode::Exhaustive,
                MvPermutationMode::MonteCarlo => PermutationMode::MonteCarlo,
            },
        };
        match stats::permutation_test_counts(ka, na, kb, nb, &config) {
            Ok(r) => {
                *out = MvTestResult {
                    statistic: r.statistic,
                    p_value: r.p_value,
                    replicates: r.replicates.unwrap_or(0),
                };
                MvStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Percentile bootstrap interval for the mean of `values`.
///
/// # Safety
/// `values` must point to `len` readable doubles; `out` to one `MvInterval`.
#[no_mangle]
pub unsafe extern "C" fn mv_bootstrap_ci(
    values: *const f64,
    len: usize,
    level: f64,
    replicates: u64,
    seed: u64,
    out: *mut MvInterval,
) -> MvStatus {
    guard(|| {
        out_ptr!(out);
        let values = try_status!(slice_arg(values, len, "values"));
        match stats::bootstrap_ci(values, level, replicates, seed) {
            Ok(ci) => {
                *out = MvInterval {
                    low: ci.low,
                    high: ci.high,
                };
                MvStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Bonferroni correction of `len` p-values. Writes adjusted p-values to
/// `adjusted` and 0/1 rejection flags to `reject`; either may be null.
///
/// # Safety
/// `p_values` must hold `len` doubles; non-null outputs must hold `len` slots.
#[no_mangle]
pub unsafe extern "C" fn mv_bonferroni(
    p_values: *const f64,
    len: usize,
    alpha: f64,
    adjusted: *mut f64,
    reject: *mut u8,
) -> MvStatus {
    guard(|| {
        let p_values = try_status!(slice_arg(p_values, len, "p_values"));
        match stats::bonferroni_adjust(p_values, alpha) {
            Ok(results) => {
                for (i, r) in results.iter().enumerate() {
                    if !adjusted.is_null() {
                        *adjusted.add(i) = r.p_value;
                    }
                    if !reject.is_null() {
                        *reject.add(i) = u8::from(r.reject);
                    }
                }
                MvStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Familiarity `6 - c` for a complexity rating in `[1, 6]`.
///
/// # Safety
/// `out` must point to one writable double.
#[no_mangle]
pub unsafe extern "C" fn mv_familiarity_from_complexity(complexity: f64, out: *mut f64) -> MvStatus {
    guard(|| {
        out_ptr!(out);
        match norms::familiarity_from_complexity(complexity) {
            Ok(f) => {
                *out = f;
                MvStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Classifies a pair with `metaphorical` of `total` occurrences annotated
/// metaphorical against the `hi`/`lo` rate thresholds.
///
/// # Safety
/// `out` must point to one writable `MvPairClass`.
#[no_mangle]
pub unsafe extern "C" fn mv_classify_pair(
    total: u64,
    metaphorical: u64,
    hi: f64,
    lo: f64,
    out: *mut MvPairClass,
) -> MvStatus {
    guard(|| {
        out_ptr!(out);
        if total == 0 || metaphorical > total {
            return fail(MvStatus::InvalidArgument, "need 0 <= metaphorical <= total and total > 0");
        }
        if !(0.0 <= lo && lo < hi && hi <= 1.0) {
            return fail(MvStatus::InvalidArgument, format!("thresholds need 0 <= lo < hi <= 1 (lo={lo}, hi={hi})"));
        }
        let record = PairRecord {
            verb_lemma: String::new(),
            object_lemma: String::new(),
            total,
            metaphorical,
        };
        *out = match classify_pair(&record, hi, lo) {
            PairClass::Metaphorical => MvPairClass::Metaphorical,
            PairClass::Literal => MvPairClass::Literal,
            PairClass::Ambiguous => MvPairClass::Ambiguous,
        };
        MvStatus::Ok
    })
}

/// Loads a norm file. On success `*out` owns a table to be released with
/// [`mv_norm_table_free`].
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` one writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn mv_norm_table_load(
    path: *const c_char,
    kind: MvNormKind,
    out: *mut *mut MvNormTable,
) -> MvStatus {
    guard(|| {
        out_ptr!(out);
        *out = ptr::null_mut();
        let path = try_status!(str_arg(path, "path"));
        let kind = match kind {
            MvNormKind::Concreteness => NormKind::Concreteness,
            MvNormKind::Imageability => NormKind::Imageability,
            MvNormKind::Complexity => NormKind::Complexity,
        };
        match norms::load_norm_table(Path::new(path), kind) {
            Ok((table, _)) => {
                *out = Box::into_raw(Box::new(MvNormTable { table }));
                MvStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Score for `lemma`, or `MV_STATUS_NOT_FOUND`.
///
/// # Safety
/// `table` must come from [`mv_norm_table_load`] and not be freed.
#[no_mangle]
pub unsafe extern "C" fn mv_norm_table_lookup(
    table: *const MvNormTable,
    lemma: *const c_char,
    out: *mut f64,
) -> MvStatus {
    guard(|| {
        out_ptr!(out);
        if table.is_null() {
            return fail(MvStatus::NullPointer, "table is null");
        }
        let lemma = try_status!(str_arg(lemma, "lemma"));
        match norms::lookup(&(*table).table, lemma) {
            Some(score) => {
                *out = score;
                MvStatus::Ok
            }
            None => fail(MvStatus::NotFound, format!("no score for {lemma:?}")),
        }
    })
}

/// Number of entries, or 0 for a null table.
///
/// # Safety
/// `table` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mv_norm_table_len(table: *const MvNormTable) -> usize {
    if table.is_null() {
        0
    } else {
        (*table).table.len()
    }
}

/// Releases a table. Null is ignored.
///
/// # Safety
/// `table` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mv_norm_table_free(table: *mut MvNormTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Lemmatizes `surface` into `buf` as a NUL-terminated string. When `cap` is
/// too small nothing is written except the required size (terminator
/// included) to `needed`, which may be null.
///
/// # Safety
/// `surface` must be NUL-terminated; `buf` must have `cap` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn mv_lemmatize(
    surface: *const c_char,
    upos: MvUpos,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> MvStatus {
    guard(|| {
        let surface = try_status!(str_arg(surface, "surface"));
        let upos = match upos {
            MvUpos::Verb => Upos::Verb,
            MvUpos::Noun => Upos::Noun,
            MvUpos::Pron => Upos::Pron,
            MvUpos::Adj => Upos::Adj,
            MvUpos::Adv => Upos::Adv,
            MvUpos::Other => Upos::Other,
        };
        let lemma = lemmatize(surface, upos);
        let size = lemma.len() + 1;
        if !needed.is_null() {
            *needed = size;
        }
        if buf.is_null() || cap < size {
            return fail(MvStatus::BufferTooSmall, format!("lemma needs {size} bytes"));
        }
        ptr::copy_nonoverlapping(lemma.as_ptr(), buf.cast::<u8>(), lemma.len());
        *buf.add(lemma.len()) = 0;
        MvStatus::Ok
    })
}
