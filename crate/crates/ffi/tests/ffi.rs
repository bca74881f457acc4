use std::ffi::{c_char, CStr, CString};
use std::ptr;

use bh_ffi::*;

const SIMPLE3: &str = include_str!("../../core/data/simple3.json");
const PATH4_GRAPH: &str = include_str!("../../core/data/path4_graph.json");

fn cover(json: &str) -> (BhStatus, *mut BhCover) {
    let text = CString::new(json).unwrap();
    let mut out = ptr::null_mut();
    let status = unsafe { bh_cover_from_json(text.as_ptr(), &mut out) };
    (status, out)
}

unsafe fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let owned = CStr::from_ptr(s).to_str().unwrap().to_string();
    bh_string_free(s);
    owned
}

#[test]
fn simple3_round_trip_and_verdict() {
    let (status, h) = cover(SIMPLE3);
    assert_eq!(status, BhStatus::Ok);
    unsafe {
        assert_eq!(bh_cover_degree(h), 3);
        let (mut chi, mut genus) = (0, 0);
        assert_eq!(bh_cover_total_space(h, &mut chi, &mut genus), BhStatus::Ok);
        assert_eq!((chi, genus), (-4, 3));

        let mut json = ptr::null_mut();
        assert_eq!(bh_cover_to_json(h, &mut json), BhStatus::Ok);
        let text = take(json);
        assert!(text.contains("\"branch_points\": 10"));
        let (status, again) = cover(&text);
        assert_eq!(status, BhStatus::Ok);
        bh_cover_free(again);

        let mut verdict = BhVerdictStatus::Holds;
        let mut json = ptr::null_mut();
        assert_eq!(bh_verdict(h, 1000, &mut verdict, &mut json), BhStatus::Ok);
        assert_eq!(verdict, BhVerdictStatus::Fails);
        assert!(take(json).contains("\"rule\": \"simple-cover\""));

        let mut holds = 1;
        let mut json = ptr::null_mut();
        assert_eq!(bh_wcl(h, 1000, &mut holds, &mut json), BhStatus::Ok);
        assert_eq!(holds, 0);
        assert!(take(json).contains("\"result\": \"fails\""));

        let mut json = ptr::null_mut();
        assert_eq!(bh_analyze(h, 1000, &mut json), BhStatus::Ok);
        assert!(take(json).contains("\"input_sha256\""));

        bh_cover_free(h);
    }
}

#[test]
fn graph_cover_holds() {
    let text = CString::new(PATH4_GRAPH).unwrap();
    let mut h = ptr::null_mut();
    unsafe {
        assert_eq!(bh_cover_from_graph_json(text.as_ptr(), &mut h), BhStatus::Ok);
        assert_eq!(bh_cover_degree(h), 6);
        let mut verdict = BhVerdictStatus::Fails;
        let mut json = ptr::null_mut();
        assert_eq!(bh_verdict(h, 1000, &mut verdict, &mut json), BhStatus::Ok);
        assert_eq!(verdict, BhVerdictStatus::Holds);
        bh_string_free(json);

        let mut holds = 0;
        let mut json = ptr::null_mut();
        assert_eq!(bh_wcl(h, 1000, &mut holds, &mut json), BhStatus::NotApplicable);
        assert!(json.is_null());
        bh_cover_free(h);
    }
}

#[test]
fn errors_are_reported() {
    let (status, h) = cover("{ nope");
    assert_eq!(status, BhStatus::InvalidInput);
    assert!(h.is_null());
    unsafe {
        let msg = take(bh_last_error());
        assert!(msg.contains("cover file"), "{msg}");

        let (status, _) = cover(r#"{"genus":0,"branch_points":2,"degree":2,"c":[[1,0],[0,1]]}"#);
        assert_eq!(status, BhStatus::InvalidInput);
        assert!(take(bh_last_error()).contains("relation"));

        let mut out = ptr::null_mut();
        assert_eq!(bh_cover_from_json(ptr::null(), &mut out), BhStatus::NullPointer);
        let bad = [0xffu8, 0];
        assert_eq!(
            bh_cover_from_json(bad.as_ptr() as *const c_char, &mut out),
            BhStatus::InvalidUtf8
        );
        assert_eq!(bh_cover_degree(ptr::null()), 0);
        let mut json = ptr::null_mut();
        assert_eq!(bh_cover_to_json(ptr::null(), &mut json), BhStatus::NullPointer);
        bh_cover_free(ptr::null_mut());
        bh_string_free(ptr::null_mut());
    }
}

#[test]
fn limit_and_domain_errors() {
    let (_, h) = cover(SIMPLE3);
    let sphere = r#"{"genus":0,"branch_points":2,"degree":2,"c":[[1,0],[1,0]]}"#;
    let (_, s) = cover(sphere);
    unsafe {
        let mut holds = 0;
        let mut json = ptr::null_mut();
        assert_eq!(bh_wcl(h, 0, &mut holds, &mut json), BhStatus::LimitExceeded);
        let mut v = BhVerdictStatus::Holds;
        assert_eq!(bh_verdict(s, 10, &mut v, &mut json), BhStatus::NotApplicable);
        assert!(take(bh_last_error()).contains("Euler characteristic 2"));
        bh_cover_free(h);
        bh_cover_free(s);
    }
}

#[test]
fn header_declares_the_api() {
    let header = include_str!("../include/bh.h");
    for name in [
        "bh_cover_from_json",
        "bh_cover_from_graph_json",
        "bh_cover_free",
        "bh_cover_degree",
        "bh_cover_total_space",
        "bh_cover_to_json",
        "bh_analyze",
        "bh_verdict",
        "bh_wcl",
        "bh_last_error",
        "bh_string_free",
        "typedef struct BhCover BhCover;",
        "BH_STATUS_LIMIT_EXCEEDED = 5",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}
