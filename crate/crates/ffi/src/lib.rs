//! C interface to `evstruct`.
//!
//! Every function returns an [`EvsStatus`]; results go through out-pointers.
//! On failure a message is kept per thread and read with
//! [`evs_last_error`]. Strings handed out by the library are released with
//! [`evs_string_free`], documents with [`evs_document_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use evstruct::cells::{CellAnalysis, CellHost};
use evstruct::eventset::EventSet;
use evstruct::io::{self, dot, Document, Kind};
use evstruct::probability::{CellOrder, DistributionSource, LocallyRandomized};
use evstruct::structure::parse_event_list;
use evstruct::translation::associated_es;
use evstruct::{Error, EventStructure, PrimeEs, StableEs};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvsStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    /// Missing header or a malformed line.
    Syntax = 3,
    /// The text parsed but the structure it describes is invalid.
    Invalid = 4,
    NotAConfiguration = 5,
    NotRStopped = 6,
    Precondition = 7,
    NotBinaryGenerable = 8,
    Distribution = 9,
    Net = 10,
    TooLarge = 11,
    /// The document has the wrong kind for the call.
    WrongKind = 12,
    /// Probabilities were requested on a truncated unfolding.
    Truncated = 13,
    Panic = 14,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvsKind {
    Es = 0,
    Ses = 1,
    Net = 2,
    Prob = 3,
}

/// A parsed document: an event structure, a stable event structure, a net
/// or a distribution table.
pub struct EvsDocument {
    doc: Document,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(EvsStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

type Outcome<T> = Result<T, Failure>;

fn status_of(e: &Error) -> EvsStatus {
    match e {
        Error::Located { source, .. } => status_of(source),
        Error::MissingHeader | Error::Syntax { .. } => EvsStatus::Syntax,
        Error::NotAConfiguration(_) | Error::EventNotInConfiguration { .. } => EvsStatus::NotAConfiguration,
        Error::NotRStopped(_) => EvsStatus::NotRStopped,
        Error::Precondition(_) | Error::MorphismNotTotal(_) => EvsStatus::Precondition,
        Error::NotBinaryGenerable(_) => EvsStatus::NotBinaryGenerable,
        Error::Distribution(_) | Error::Measure(_) => EvsStatus::Distribution,
        Error::Net(_) | Error::UnsafeNet(_) | Error::ZeroMaxEvents => EvsStatus::Net,
        Error::TooLarge(_) => EvsStatus::TooLarge,
        _ => EvsStatus::Invalid,
    }
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Outcome<()>) -> EvsStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EvsStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            EvsStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(EvsStatus::NullArgument, format!("{what} is null"))
}

unsafe fn arg<'a>(p: *const c_char, what: &str) -> Outcome<&'a str> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(EvsStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn doc<'a>(p: *const EvsDocument, what: &str) -> Outcome<&'a Document> {
    p.as_ref().map(|d| &d.doc).ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, value: T) -> Outcome<()> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw()
}

fn boxed(doc: Document) -> *mut EvsDocument {
    Box::into_raw(Box::new(EvsDocument { doc }))
}

fn wrong_kind(doc: &Document, wanted: &str) -> Failure {
    Failure(
        EvsStatus::WrongKind,
        format!("expected {wanted}, found {}", doc.kind().keyword()),
    )
}

enum Host<'a> {
    Es(&'a PrimeEs),
    Ses(&'a StableEs),
}

fn host(doc: &Document) -> Outcome<Host<'_>> {
    match doc {
        Document::Es(es, _) => Ok(Host::Es(es)),
        Document::Ses(ses, _) => Ok(Host::Ses(ses)),
        other => Err(wrong_kind(other, "an es or ses document")),
    }
}

/// Reparses serialized output so the returned document carries the same
/// reports as one read from text.
fn reparse(text: &str) -> Outcome<Document> {
    Ok(io::parse(text)?)
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn evs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn evs_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn evs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a document in the text format.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn evs_document_parse(text: *const c_char, out: *mut *mut EvsDocument) -> EvsStatus {
    guard(|| {
        let t = arg(text, "text")?;
        let d = io::parse(t)?;
        put(out, boxed(d))
    })
}

/// # Safety
/// `doc` must be null or a document returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn evs_document_free(doc: *mut EvsDocument) {
    if !doc.is_null() {
        drop(Box::from_raw(doc));
    }
}

/// # Safety
/// `d` must be a live document; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn evs_document_kind(d: *const EvsDocument, out: *mut EvsKind) -> EvsStatus {
    guard(|| {
        let kind = match doc(d, "document")?.kind() {
            Kind::Es => EvsKind::Es,
            Kind::Ses => EvsKind::Ses,
            Kind::Net => EvsKind::Net,
            Kind::Prob => EvsKind::Prob,
        };
        put(out, kind)
    })
}

/// Number of events of an es or ses document.
///
/// # Safety
/// `d` must be a live document; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn evs_document_event_count(d: *const EvsDocument, out: *mut usize) -> EvsStatus {
    guard(|| {
        let n = match host(doc(d, "document")?)? {
            Host::Es(es) => es.live().len(),
            Host::Ses(ses) => ses.live().len(),
        };
        put(out, n)
    })
}

/// The document in the text format.
///
/// # Safety
/// `d` must be a live document; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn evs_document_serialize(d: *const EvsDocument, out: *mut *mut c_char) -> EvsStatus {
    guard(|| {
        let s = doc(d, "document")?.serialize();
        put(out, c_string(s))
    })
}

/// Graphviz rendering. When `at` is not null it names an R-stopped
/// configuration (comma-separated events) whose enabled cells are drawn as
/// clusters.
///
/// # Safety
/// `d` must be a live document, `at` null or a NUL-terminated string, and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn evs_document_to_dot(
    d: *const EvsDocument,
    at: *const c_char,
    out: *mut *mut c_char,
) -> EvsStatus {
    guard(|| {
        let at = if at.is_null() {
            None
        } else {
            Some(arg(at, "configuration")?)
        };
        let s = match (host(doc(d, "document")?)?, at) {
            (Host::Es(es), None) => dot::es_to_dot(es),
            (Host::Ses(ses), None) => dot::ses_to_dot(ses),
            (Host::Es(es), Some(a)) => dot::es_cells_to_dot(es, configuration(es, a)?)?,
            (Host::Ses(ses), Some(a)) => dot::ses_cells_to_dot(ses, configuration(ses, a)?)?,
        };
        put(out, c_string(s))
    })
}

fn configuration<H: EventStructure>(h: &H, list: &str) -> Outcome<EventSet> {
    let v = parse_event_list(h.names(), list)?;
    h.check_configuration(v)?;
    Ok(v)
}

/// The report of `evstruct check` as a JSON object. `holds` receives
/// whether every checked property holds.
///
/// # Safety
/// `d` must be a live document; `out_json` and `holds` must be writable.
#[no_mangle]
pub unsafe extern "C" fn evs_check_json(
    d: *const EvsDocument,
    out_json: *mut *mut c_char,
    holds: *mut bool,
) -> EvsStatus {
    guard(|| {
        let (ok, fields) = evstruct::cli::check_report(doc(d, "document")?);
        let json = serde_json::Value::Object(fields).to_string();
        put(holds, ok)?;
        put(out_json, c_string(json))
    })
}

/// Whether `config` is an R-stopped configuration.
///
/// # Safety
/// `d` must be a live document, `config` a NUL-terminated string and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn evs_is_r_stopped(d: *const EvsDocument, config: *const c_char, out: *mut bool) -> EvsStatus {
    guard(|| {
        let list = arg(config, "configuration")?;
        let r = match host(doc(d, "document")?)? {
            Host::Es(es) => CellAnalysis::new(es.clone()).is_r_stopped(configuration(es, list)?),
            Host::Ses(ses) => CellAnalysis::new(ses.clone()).is_r_stopped(configuration(ses, list)?),
        };
        put(out, r)
    })
}

/// The associated binary-conflict event structure of a ses document.
///
/// # Safety
/// `d` must be a live document; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn evs_translate(d: *const EvsDocument, out: *mut *mut EvsDocument) -> EvsStatus {
    guard(|| {
        let ses = match doc(d, "document")? {
            Document::Ses(ses, _) => ses,
            other => return Err(wrong_kind(other, "a ses document")),
        };
        let (es, _, _) = associated_es(ses)?;
        put(out, boxed(reparse(&io::serialize_es(&es))?))
    })
}

/// Unfolds a net document into an event structure of at most `max_events`
/// events. `truncated` receives whether the bound cut the unfolding short.
///
/// # Safety
/// `d` must be a live document; `out` and `truncated` must be writable.
#[no_mangle]
pub unsafe extern "C" fn evs_unfold(
    d: *const EvsDocument,
    max_events: usize,
    out: *mut *mut EvsDocument,
    truncated: *mut bool,
) -> EvsStatus {
    guard(|| {
        let net = match doc(d, "document")? {
            Document::Net(net) => net,
            other => return Err(wrong_kind(other, "a net document")),
        };
        let (es, report) = io::unfold_net(net, max_events)?;
        put(truncated, report.truncated)?;
        put(out, boxed(reparse(&io::serialize_es(&es))?))
    })
}

fn source<H: EventStructure>(h: &H, dist: *const EvsDocument) -> Outcome<DistributionSource> {
    match unsafe { dist.as_ref() } {
        None => Ok(DistributionSource::Uniform),
        Some(EvsDocument { doc: Document::Prob(t) }) => Ok(t.resolve(h.names())?),
        Some(EvsDocument { doc }) => Err(wrong_kind(doc, "a prob document")),
    }
}

fn randomized<H: CellHost>(h: &H, dist: *const EvsDocument) -> Outcome<LocallyRandomized<H>> {
    let src = source(h, dist)?;
    Ok(LocallyRandomized::attach(h.clone(), &src)?)
}

#[derive(Clone, Copy)]
enum Query {
    Likelihood,
    Shadow,
}

fn probability<H: CellHost>(h: &H, dist: *const EvsDocument, list: &str, q: Query) -> Outcome<f64> {
    let v = configuration(h, list)?;
    let lr = randomized(h, dist)?;
    Ok(match q {
        Query::Likelihood => lr.likelihood(v)?,
        Query::Shadow => lr.shadow_probability(v)?,
    })
}

unsafe fn query(
    d: *const EvsDocument,
    dist: *const EvsDocument,
    config: *const c_char,
    allow_truncated: bool,
    out: *mut f64,
    q: Query,
) -> EvsStatus {
    guard(|| {
        let list = arg(config, "configuration")?;
        let p = match host(doc(d, "document")?)? {
            Host::Es(es) => {
                if es.is_truncated() && !allow_truncated {
                    return Err(Failure(
                        EvsStatus::Truncated,
                        format!("{} is a truncated unfolding", es.name()),
                    ));
                }
                probability(es, dist, list, q)?
            }
            Host::Ses(ses) => probability(ses, dist, list, q)?,
        };
        put(out, p)
    })
}

/// Likelihood of an R-stopped configuration: the product of the local
/// choice probabilities along its covering. `dist` is a prob document, or
/// null for uniform choices.
///
/// # Safety
/// `d` must be a live document, `dist` null or a live document, `config` a
/// NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn evs_likelihood(
    d: *const EvsDocument,
    dist: *const EvsDocument,
    config: *const c_char,
    allow_truncated: bool,
    out: *mut f64,
) -> EvsStatus {
    query(d, dist, config, allow_truncated, out, Query::Likelihood)
}

/// Measure of the maximal configurations extending `config`.
///
/// # Safety
/// As for [`evs_likelihood`].
#[no_mangle]
pub unsafe extern "C" fn evs_shadow_probability(
    d: *const EvsDocument,
    dist: *const EvsDocument,
    config: *const c_char,
    allow_truncated: bool,
    out: *mut f64,
) -> EvsStatus {
    query(d, dist, config, allow_truncated, out, Query::Shadow)
}

/// One seeded run to a maximal configuration, written as a braced event
/// list.
///
/// # Safety
/// `d` must be a live document, `dist` null or a live document, and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn evs_sample(
    d: *const EvsDocument,
    dist: *const EvsDocument,
    seed: u64,
    out: *mut *mut c_char,
) -> EvsStatus {
    guard(|| {
        let s = match host(doc(d, "document")?)? {
            Host::Es(es) => {
                let run = randomized(es, dist)?.sample_run(seed, CellOrder::First)?;
                es.show(run.outcome)
            }
            Host::Ses(ses) => {
                let run = randomized(ses, dist)?.sample_run(seed, CellOrder::First)?;
                ses.show(run.outcome)
            }
        };
        put(out, c_string(s))
    })
}
