use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::ptr;

use evstruct_ffi::*;

fn fixture(name: &str) -> CString {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name);
    CString::new(std::fs::read_to_string(path).unwrap()).unwrap()
}

fn parse(text: &CString) -> *mut EvsDocument {
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { evs_document_parse(text.as_ptr(), &mut d) }, EvsStatus::Ok);
    d
}

fn take(s: *mut c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { evs_string_free(s) };
    out
}

fn last_error() -> String {
    let p = evs_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

#[test]
fn parse_kind_and_round_trip() {
    let text = fixture("example.ses");
    let d = parse(&text);
    let mut kind = EvsKind::Es;
    let mut n = 0usize;
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(evs_document_kind(d, &mut kind), EvsStatus::Ok);
        assert_eq!(evs_document_event_count(d, &mut n), EvsStatus::Ok);
        assert_eq!(evs_document_serialize(d, &mut s), EvsStatus::Ok);
    }
    assert_eq!(kind, EvsKind::Ses);
    assert_eq!(n, 6);
    let again = CString::new(take(s)).unwrap();
    let d2 = parse(&again);
    let mut s2 = ptr::null_mut();
    unsafe {
        assert_eq!(evs_document_serialize(d2, &mut s2), EvsStatus::Ok);
        evs_document_free(d2);
        evs_document_free(d);
    }
    assert_eq!(take(s2), again.to_str().unwrap());
    assert!(evs_last_error().is_null());
}

#[test]
fn errors_carry_codes_and_messages() {
    let mut d = ptr::null_mut();
    let bad = CString::new("es x\nevents a b\nconflict a a\n").unwrap();
    assert_eq!(unsafe { evs_document_parse(bad.as_ptr(), &mut d) }, EvsStatus::Invalid);
    assert!(last_error().starts_with("line 3"));
    assert!(d.is_null());
    let bad = CString::new("nonsense").unwrap();
    assert_eq!(unsafe { evs_document_parse(bad.as_ptr(), &mut d) }, EvsStatus::Syntax);
    assert_eq!(
        unsafe { evs_document_parse(ptr::null(), &mut d) },
        EvsStatus::NullArgument
    );
    let raw = [0xffu8 as c_char, 0];
    assert_eq!(
        unsafe { evs_document_parse(raw.as_ptr(), &mut d) },
        EvsStatus::InvalidUtf8
    );
    let mut kind = EvsKind::Es;
    assert_eq!(
        unsafe { evs_document_kind(ptr::null(), &mut kind) },
        EvsStatus::NullArgument
    );
}

#[test]
fn check_json_matches_cli_fields() {
    let text = fixture("jump.es");
    let d = parse(&text);
    let mut json = ptr::null_mut();
    let mut holds = true;
    assert_eq!(unsafe { evs_check_json(d, &mut json, &mut holds) }, EvsStatus::Ok);
    assert!(!holds);
    let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
    assert_eq!(v["jump-free"], false);
    assert_eq!(v["jump-witness"]["chain"], "e - x1 - x2 - e'");
    unsafe { evs_document_free(d) };
}

#[test]
fn probabilities_with_table_and_uniform() {
    let es = parse(&fixture("conf.es"));
    let table = parse(&fixture("conf.prob"));
    let b = CString::new("b").unwrap();
    let a = CString::new("a").unwrap();
    let mut p = 0.0;
    unsafe {
        assert_eq!(evs_likelihood(es, table, b.as_ptr(), false, &mut p), EvsStatus::Ok);
        assert!((p - 0.4).abs() < 1e-12);
        assert_eq!(
            evs_shadow_probability(es, table, b.as_ptr(), false, &mut p),
            EvsStatus::Ok
        );
        assert!((p - 0.4).abs() < 1e-12);
        assert_eq!(
            evs_likelihood(es, ptr::null(), b.as_ptr(), false, &mut p),
            EvsStatus::Ok
        );
        assert!((p - 0.5).abs() < 1e-12);
        assert_eq!(
            evs_likelihood(es, table, a.as_ptr(), false, &mut p),
            EvsStatus::NotRStopped
        );
        assert_eq!(evs_likelihood(es, es, b.as_ptr(), false, &mut p), EvsStatus::WrongKind);
        let mut r = true;
        assert_eq!(evs_is_r_stopped(es, a.as_ptr(), &mut r), EvsStatus::Ok);
        assert!(!r);
        let mut s = ptr::null_mut();
        assert_eq!(evs_sample(es, table, 7, &mut s), EvsStatus::Ok);
        let first = take(s);
        assert_eq!(evs_sample(es, table, 7, &mut s), EvsStatus::Ok);
        assert_eq!(take(s), first);
        assert!(first == "{b}" || first == "{a,c}", "{first}");
        evs_document_free(table);
        evs_document_free(es);
    }
}

#[test]
fn translate_and_unfold() {
    let ses = parse(&fixture("example.ses"));
    let net = parse(&fixture("loops.net"));
    let mut out = ptr::null_mut();
    let mut n = 0usize;
    let mut truncated = false;
    unsafe {
        assert_eq!(evs_translate(ses, &mut out), EvsStatus::Ok);
        assert_eq!(evs_document_event_count(out, &mut n), EvsStatus::Ok);
        assert_eq!(n, 7);
        evs_document_free(out);
        let ternary = parse(&fixture("ternary.ses"));
        assert_eq!(evs_translate(ternary, &mut out), EvsStatus::NotBinaryGenerable);
        assert_eq!(evs_translate(net, &mut out), EvsStatus::WrongKind);
        evs_document_free(ternary);

        assert_eq!(evs_unfold(net, 6, &mut out, &mut truncated), EvsStatus::Ok);
        assert!(truncated);
        let empty = CString::new("").unwrap();
        let mut p = 0.0;
        assert_eq!(
            evs_likelihood(out, ptr::null(), empty.as_ptr(), false, &mut p),
            EvsStatus::Truncated
        );
        assert_eq!(
            evs_likelihood(out, ptr::null(), empty.as_ptr(), true, &mut p),
            EvsStatus::Ok
        );
        evs_document_free(out);
        assert_eq!(evs_unfold(net, 0, &mut out, &mut truncated), EvsStatus::Net);
        evs_document_free(net);
        evs_document_free(ses);
    }
}

#[test]
fn dot_with_and_without_cells() {
    let d = parse(&fixture("twocell.es"));
    let mut s = ptr::null_mut();
    let empty = CString::new("").unwrap();
    unsafe {
        assert_eq!(evs_document_to_dot(d, ptr::null(), &mut s), EvsStatus::Ok);
        assert!(take(s).starts_with("digraph"));
        assert_eq!(evs_document_to_dot(d, empty.as_ptr(), &mut s), EvsStatus::Ok);
        assert_eq!(take(s).matches("subgraph cluster_").count(), 2);
        evs_document_free(d);
    }
}

#[test]
fn version_and_null_frees() {
    let v = unsafe { CStr::from_ptr(evs_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    unsafe {
        evs_string_free(ptr::null_mut());
        evs_document_free(ptr::null_mut());
    }
}
