//! C ABI for paramine.
//!
//! Every fallible call returns a [`ParamineStatus`]; on failure a message is
//! available from [`paramine_last_error`] on the same thread. Handles are
//! opaque and must be released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use paramine::annotation::{adjudicate_categories, levenshtein, AnnotationCategory, AdjudicatedLabel, EditFilter};
use paramine::miner::RankedList;
use paramine::pipeline;
use paramine::scoring::{SchemeId, Scorer};
use paramine::stats::CooccurrenceTable;
use paramine::{Error, Lang, PairKey, Phrase};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamineStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    Io = 4,
    Parse = 5,
    UnknownPhrase = 6,
    NoCooccurrence = 7,
    AsymmetricScheme = 8,
    OutOfRange = 9,
    Panic = 10,
    Other = 11,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamineScheme {
    CondProb = 0,
    JointProb = 1,
    Pmi = 2,
    JointTimesPmi = 3,
    SumPmi = 4,
}

impl From<ParamineScheme> for SchemeId {
    fn from(s: ParamineScheme) -> Self {
        match s {
            ParamineScheme::CondProb => SchemeId::CondProb,
            ParamineScheme::JointProb => SchemeId::JointProb,
            ParamineScheme::Pmi => SchemeId::Pmi,
            ParamineScheme::JointTimesPmi => SchemeId::JointTimesPmi,
            ParamineScheme::SumPmi => SchemeId::SumPmi,
        }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamineCategory {
    Good = 4,
    MostlyGood = 3,
    MostlyBad = 2,
    Bad = 1,
    Trash = 0,
}

impl From<ParamineCategory> for AnnotationCategory {
    fn from(c: ParamineCategory) -> Self {
        match c {
            ParamineCategory::Good => AnnotationCategory::Good,
            ParamineCategory::MostlyGood => AnnotationCategory::MostlyGood,
            ParamineCategory::MostlyBad => AnnotationCategory::MostlyBad,
            ParamineCategory::Bad => AnnotationCategory::Bad,
            ParamineCategory::Trash => AnnotationCategory::Trash,
        }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamineLabel {
    Good = 0,
    MostlyGood = 1,
    MostlyBad = 2,
    Bad = 3,
    DiscardedTrash = 4,
    DiscardedDisagree = 5,
}

impl From<AdjudicatedLabel> for ParamineLabel {
    fn from(l: AdjudicatedLabel) -> Self {
        match l {
            AdjudicatedLabel::Good => ParamineLabel::Good,
            AdjudicatedLabel::MostlyGood => ParamineLabel::MostlyGood,
            AdjudicatedLabel::MostlyBad => ParamineLabel::MostlyBad,
            AdjudicatedLabel::Bad => ParamineLabel::Bad,
            AdjudicatedLabel::DiscardedTrash => ParamineLabel::DiscardedTrash,
            AdjudicatedLabel::DiscardedDisagree => ParamineLabel::DiscardedDisagree,
        }
    }
}

/// One or more co-occurrence tables, one per pivot corpus.
pub struct ParamineTables {
    tables: Vec<CooccurrenceTable>,
}

/// A ranked candidate list.
pub struct ParamineRanked {
    list: RankedList,
    text: Vec<(CString, CString)>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> ParamineStatus {
    match e {
        Error::InvalidArgument(_) | Error::EmptyCorpus => ParamineStatus::InvalidArgument,
        Error::Io(_) => ParamineStatus::Io,
        Error::Parse { .. } | Error::Json(_) => ParamineStatus::Parse,
        Error::UnknownPhrase(_) => ParamineStatus::UnknownPhrase,
        Error::NoCooccurrence | Error::NoCooccurrenceInAnyPivot => ParamineStatus::NoCooccurrence,
        Error::AsymmetricScheme(_) => ParamineStatus::AsymmetricScheme,
        _ => ParamineStatus::Other,
    }
}

struct Fail(ParamineStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> ParamineStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ParamineStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside paramine".into());
            ParamineStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(ParamineStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(ParamineStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    // SAFETY: callers promise `p` is either null or valid for writes.
    unsafe { p.as_mut() }.ok_or_else(|| Fail(ParamineStatus::NullPointer, format!("{what} is null")))
}

/// Build identifier, e.g. `paramine 0.1.0`. Static; do not free.
#[no_mangle]
pub extern "C" fn paramine_version() -> *const c_char {
    static V: &CStr = match CStr::from_bytes_with_nul(concat!("paramine ", env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version contains NUL"),
    };
    V.as_ptr()
}

/// Message of the last failed call on this thread. Valid until the next
/// failing call on the same thread.
#[no_mangle]
pub extern "C" fn paramine_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Loads `n` saved `.counts` files.
///
/// # Safety
/// `paths` must point to `n` NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn paramine_tables_load(
    paths: *const *const c_char,
    n: usize,
    out_tables: *mut *mut ParamineTables,
) -> ParamineStatus {
    guard(|| {
        let slot = out(out_tables, "out")?;
        if paths.is_null() || n == 0 {
            return Err(Fail(ParamineStatus::InvalidArgument, "no table paths".into()));
        }
        let paths = std::slice::from_raw_parts(paths, n)
            .iter()
            .map(|&p| text(p, "path").map(PathBuf::from))
            .collect::<Result<Vec<_>, _>>()?;
        let tables = pipeline::load_tables(&paths)?;
        *slot = Box::into_raw(Box::new(ParamineTables { tables }));
        Ok(())
    })
}

/// Counts a `target<TAB>pivot[<TAB>year]` bitext file into a single table.
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn paramine_tables_from_bitext(
    path: *const c_char,
    pivot_lang: *const c_char,
    out_tables: *mut *mut ParamineTables,
) -> ParamineStatus {
    guard(|| {
        let slot = out(out_tables, "out")?;
        let path = PathBuf::from(text(path, "path")?);
        let lang = Lang::new(text(pivot_lang, "pivot_lang")?)?;
        let table = pipeline::count_file(&path, Some(&lang))?;
        *slot = Box::into_raw(Box::new(ParamineTables { tables: vec![table] }));
        Ok(())
    })
}

/// Number of pivot corpora in the handle.
///
/// # Safety
/// `t` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn paramine_tables_len(t: *const ParamineTables) -> usize {
    t.as_ref().map_or(0, |t| t.tables.len())
}

/// # Safety
/// `t` must come from a `paramine_tables_*` constructor and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn paramine_tables_free(t: *mut ParamineTables) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Scores one pair. Non-sum schemes use the merged table.
///
/// # Safety
/// `t` must be a live handle; strings NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn paramine_score(
    t: *const ParamineTables,
    scheme: ParamineScheme,
    e1: *const c_char,
    e2: *const c_char,
    out_score: *mut f64,
) -> ParamineStatus {
    guard(|| {
        let slot = out(out_score, "out")?;
        let t = t
            .as_ref()
            .ok_or_else(|| Fail(ParamineStatus::NullPointer, "tables is null".into()))?;
        let scorer = Scorer::new(scheme.into(), &t.tables)?;
        *slot = scorer.score(text(e1, "e1")?, text(e2, "e2")?)?;
        Ok(())
    })
}

/// Enumerates and ranks every candidate pair.
///
/// # Safety
/// `t` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn paramine_mine(
    t: *const ParamineTables,
    scheme: ParamineScheme,
    min_support: usize,
    out_ranked: *mut *mut ParamineRanked,
) -> ParamineStatus {
    guard(|| {
        let slot = out(out_ranked, "out")?;
        let t = t
            .as_ref()
            .ok_or_else(|| Fail(ParamineStatus::NullPointer, "tables is null".into()))?;
        let list = pipeline::mine(&t.tables, scheme.into(), min_support)?;
        let text = list
            .entries
            .iter()
            .map(|e| {
                let c = |p: &Phrase| CString::new(p.as_str()).expect("phrases have no NUL");
                (c(e.pair.lo()), c(e.pair.hi()))
            })
            .collect();
        *slot = Box::into_raw(Box::new(ParamineRanked { list, text }));
        Ok(())
    })
}

/// # Safety
/// `r` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn paramine_ranked_len(r: *const ParamineRanked) -> usize {
    r.as_ref().map_or(0, |r| r.list.len())
}

/// Reads entry `i` (0-based). The phrase pointers live as long as `r`.
///
/// # Safety
/// `r` must be a live handle; out pointers writable.
#[no_mangle]
pub unsafe extern "C" fn paramine_ranked_get(
    r: *const ParamineRanked,
    i: usize,
    out_score: *mut f64,
    out_phrase1: *mut *const c_char,
    out_phrase2: *mut *const c_char,
) -> ParamineStatus {
    guard(|| {
        let r = r
            .as_ref()
            .ok_or_else(|| Fail(ParamineStatus::NullPointer, "ranked is null".into()))?;
        let (Some(e), Some((a, b))) = (r.list.entries.get(i), r.text.get(i)) else {
            return Err(Fail(ParamineStatus::OutOfRange, format!("index {i} out of range")));
        };
        *out(out_score, "out_score")? = e.score;
        *out(out_phrase1, "out_phrase1")? = a.as_ptr();
        *out(out_phrase2, "out_phrase2")? = b.as_ptr();
        Ok(())
    })
}

/// Writes the list in `ranked.tsv` format.
///
/// # Safety
/// `r` must be a live handle; `path` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn paramine_ranked_save(r: *const ParamineRanked, path: *const c_char) -> ParamineStatus {
    guard(|| {
        let r = r
            .as_ref()
            .ok_or_else(|| Fail(ParamineStatus::NullPointer, "ranked is null".into()))?;
        r.list.save(&PathBuf::from(text(path, "path")?))?;
        Ok(())
    })
}

/// # Safety
/// `r` must come from `paramine_mine` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn paramine_ranked_free(r: *mut ParamineRanked) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Character edit distance between two normalized sentences.
///
/// # Safety
/// Strings NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn paramine_levenshtein(a: *const c_char, b: *const c_char, out_distance: *mut usize) -> ParamineStatus {
    guard(|| {
        let slot = out(out_distance, "out")?;
        let a = paramine::phrase::normalize(text(a, "a")?);
        let b = paramine::phrase::normalize(text(b, "b")?);
        *slot = levenshtein(&a, &b);
        Ok(())
    })
}

/// Relative edit-distance filter. Pass `short_cutoff = 0` and negative
/// thresholds to use the defaults (24, 0.4, 0.6).
///
/// # Safety
/// Strings NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn paramine_edit_filter(
    a: *const c_char,
    b: *const c_char,
    short_cutoff: usize,
    base_threshold: f64,
    short_threshold: f64,
    out_accept: *mut bool,
) -> ParamineStatus {
    guard(|| {
        let slot = out(out_accept, "out")?;
        let d = EditFilter::default();
        let f = EditFilter {
            short_cutoff: if short_cutoff == 0 { d.short_cutoff } else { short_cutoff },
            base_threshold: if base_threshold < 0.0 { d.base_threshold } else { base_threshold },
            short_threshold: if short_threshold < 0.0 { d.short_threshold } else { short_threshold },
        };
        let pa = Phrase::new(text(a, "a")?);
        let pb = Phrase::new(text(b, "b")?);
        *slot = match (pa, pb) {
            (Some(x), Some(y)) => f.accepts(&x, &y),
            _ => false,
        };
        Ok(())
    })
}

/// Merges two annotators' categories.
#[no_mangle]
pub extern "C" fn paramine_adjudicate(a: ParamineCategory, b: ParamineCategory) -> ParamineLabel {
    adjudicate_categories(a.into(), b.into()).into()
}

/// Writes the 24-character hex pair id plus NUL into `buf`.
///
/// # Safety
/// Strings NUL-terminated; `buf` valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn paramine_pair_id(a: *const c_char, b: *const c_char, buf: *mut c_char, len: usize) -> ParamineStatus {
    guard(|| {
        if buf.is_null() {
            return Err(Fail(ParamineStatus::NullPointer, "buf is null".into()));
        }
        let pair = PairKey::from_raw(text(a, "a")?, text(b, "b")?)
            .ok_or_else(|| Fail(ParamineStatus::InvalidArgument, "identical or empty phrases".into()))?;
        let id = pair.pair_id();
        if len < id.len() + 1 {
            return Err(Fail(ParamineStatus::OutOfRange, format!("buffer needs {} bytes", id.len() + 1)));
        }
        ptr::copy_nonoverlapping(id.as_ptr().cast::<c_char>(), buf, id.len());
        *buf.add(id.len()) = 0;
        Ok(())
    })
}
