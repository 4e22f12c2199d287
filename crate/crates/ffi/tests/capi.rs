use std::ffi::{CStr, CString};
use std::ptr;

use dyadic_sparse_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(ds_last_error_message()) }.to_str().unwrap().to_owned()
}

fn function(depth: u32, f: impl Fn(f64) -> f64) -> *mut DsGridFunction {
    let n = 1usize << depth;
    let h = 4.0 / n as f64;
    let values: Vec<f64> = (0..n).map(|i| f(-2.0 + (i as f64 + 0.5) * h)).collect();
    let mut out = ptr::null_mut();
    let st = unsafe { ds_function_new(1, [-2.0].as_ptr(), 4.0, depth, values.as_ptr(), values.len(), &mut out) };
    assert_eq!(st, DsStatus::Ok, "{}", last_error());
    out
}

fn values(f: *const DsGridFunction) -> Vec<f64> {
    let len = unsafe { ds_function_len(f) };
    let mut buf = vec![0.0; len];
    assert_eq!(unsafe { ds_function_values(f, buf.as_mut_ptr(), len) }, DsStatus::Ok);
    buf
}

#[test]
fn function_round_trip_and_maximal_of_a_constant() {
    let f = function(6, |_| 3.0);
    assert_eq!(values(f), vec![3.0; 64]);
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { ds_hl_maximal(f, &mut m) }, DsStatus::Ok);
    for v in values(m) {
        assert!((v - 3.0).abs() < 1e-12);
    }
    unsafe {
        ds_function_free(m);
        ds_function_free(f);
    }
}

#[test]
fn wrong_length_is_a_format_error_with_message() {
    let mut out = ptr::null_mut();
    let st = unsafe { ds_function_new(1, [0.0].as_ptr(), 1.0, 4, [1.0; 3].as_ptr(), 3, &mut out) };
    assert_eq!(st, DsStatus::Format);
    assert!(out.is_null());
    assert!(!last_error().is_empty());
}

#[test]
fn null_arguments_are_reported() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { ds_hl_maximal(ptr::null(), &mut out) }, DsStatus::NullPointer);
    assert_eq!(unsafe { ds_function_len(ptr::null()) }, 0);
    unsafe { ds_function_free(ptr::null_mut()) };
    unsafe { ds_string_free(ptr::null_mut()) };
}

#[test]
fn small_buffer_is_refused() {
    let f = function(4, |x| x);
    let mut buf = [0.0; 4];
    assert_eq!(unsafe { ds_function_values(f, buf.as_mut_ptr(), 4) }, DsStatus::BufferTooSmall);
    unsafe { ds_function_free(f) };
}

#[test]
fn success_clears_the_last_error() {
    let mut out = ptr::null_mut();
    let _ = unsafe { ds_hl_maximal(ptr::null(), &mut out) };
    assert!(!last_error().is_empty());
    let f = function(3, |_| 1.0);
    assert!(last_error().is_empty());
    unsafe { ds_function_free(f) };
}

#[test]
fn luxemburg_norm_of_a_constant_solves_the_young_equation() {
    // For f = 1 the norm is the lambda with (1/lambda) log(1 + 1/lambda) = 1.
    let f = function(6, |_| 1.0);
    let mut norm = 0.0;
    let st = unsafe { ds_luxemburg_norm(f, 0, 0, [0i64].as_ptr(), 1.0, &mut norm) };
    assert_eq!(st, DsStatus::Ok, "{}", last_error());
    let (mut lo, mut hi) = (1e-6f64, 10.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let t = 1.0 / mid;
        if t * (1.0 + t).ln() > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    assert!((norm - lo).abs() < 1e-6 * lo, "{norm} vs {lo}");
    unsafe { ds_function_free(f) };
}

#[test]
fn unit_weight_constants_are_one() {
    let mut w = ptr::null_mut();
    let st = unsafe { ds_weight_power(1, [-2.0].as_ptr(), 4.0, 6, [0.0].as_ptr(), 0.0, &mut w) };
    assert_eq!(st, DsStatus::Ok, "{}", last_error());
    let (mut ap, mut ainf, mut a1) = (0.0, 0.0, 0.0);
    unsafe {
        assert_eq!(ds_ap_constant(w, 2.0, &mut ap), DsStatus::Ok);
        assert_eq!(ds_ainf_constant(w, &mut ainf), DsStatus::Ok);
        assert_eq!(ds_a1_constant(w, &mut a1), DsStatus::Ok);
        ds_weight_free(w);
    }
    for v in [ap, ainf, a1] {
        assert!((v - 1.0).abs() < 1e-12, "{v}");
    }
}

#[test]
fn power_weight_ap_constant_grows_with_the_exponent() {
    let ap = |e: f64| {
        let mut w = ptr::null_mut();
        let mut v = 0.0;
        unsafe {
            assert_eq!(ds_weight_power(1, [-2.0].as_ptr(), 4.0, 10, [0.0].as_ptr(), e, &mut w), DsStatus::Ok);
            assert_eq!(ds_ap_constant(w, 2.0, &mut v), DsStatus::Ok);
            ds_weight_free(w);
        }
        v
    };
    assert!(ap(0.8) > ap(0.4));
    let mut v = 0.0;
    assert_eq!(unsafe { ds_ap_constant(ptr::null(), 2.0, &mut v) }, DsStatus::NullPointer);
}

#[test]
fn commutator_with_affine_amplitude_vanishes() {
    let f = function(7, |x| if x.abs() < 1.0 { 1.0 + x * x } else { 0.0 });
    let omega = CString::new("const1").unwrap();
    let amp = CString::new("affine:2").unwrap();
    for maximal in [false, true] {
        let mut g = ptr::null_mut();
        let st = unsafe { ds_commutator(f, omega.as_ptr(), amp.as_ptr(), maximal, &mut g) };
        assert_eq!(st, DsStatus::Ok, "{}", last_error());
        assert!(values(g).iter().all(|v| v.abs() < 1e-9));
        unsafe { ds_function_free(g) };
    }
    let bad = CString::new("nonsense").unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { ds_commutator(f, bad.as_ptr(), amp.as_ptr(), false, &mut g) }, DsStatus::Parameter);
    unsafe { ds_function_free(f) };
}

#[test]
fn sparse_family_is_sparse_and_dominates_its_own_averages() {
    let f = function(8, |x| {
        if (-1.0..-0.5).contains(&x) {
            4.0
        } else if (0.0..1.0).contains(&x) {
            x
        } else {
            0.0
        }
    });
    let omega = CString::new("const1").unwrap();
    let amp = CString::new("xlogx").unwrap();
    let mut family = ptr::null_mut();
    let fs = [f as *const DsGridFunction];
    let st = unsafe { ds_sparse_build(fs.as_ptr(), 1, omega.as_ptr(), amp.as_ptr(), 2.0, 1.0, 0.25, &mut family) };
    assert_eq!(st, DsStatus::Ok, "{}", last_error());
    let len = unsafe { ds_sparse_len(family) };
    assert!(len >= 1);
    for i in 0..len {
        let mut c = DsCube::default();
        assert_eq!(unsafe { ds_sparse_cube(family, i, &mut c) }, DsStatus::Ok);
        assert!(c.witness_fraction >= 0.5, "{c:?}");
    }
    let mut c = DsCube::default();
    assert_eq!(unsafe { ds_sparse_cube(family, len, &mut c) }, DsStatus::Parameter);
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { ds_sparse_apply(family, f, 1.0, &mut g) }, DsStatus::Ok);
    assert!(values(g).iter().all(|v| *v >= 0.0));
    assert!(values(g).iter().any(|v| *v > 0.0));
    unsafe {
        ds_function_free(g);
        ds_sparse_free(family);
        ds_function_free(f);
    }
}

#[test]
fn sharpness_norms_through_the_abi() {
    let mut s = DsSharpness::default();
    assert_eq!(unsafe { ds_sharpness_norms(1.5, 0.4, 14, 1e-3, &mut s) }, DsStatus::Ok, "{}", last_error());
    assert!((s.f_norm_pow - 2.5).abs() < 0.05);
    assert!(s.ratio >= 0.5 / (0.4 * 0.4));
    assert_eq!(unsafe { ds_sharpness_norms(1.5, 0.4, 5, 1e-3, &mut s) }, DsStatus::Resolution);
    assert_eq!(unsafe { ds_sharpness_norms(0.5, 0.4, 14, 1e-3, &mut s) }, DsStatus::Parameter);
}

#[test]
fn experiments_run_by_name_and_are_reproducible() {
    let cmd = CString::new("buckley").unwrap();
    let cfg = CString::new(r#"{"depth": 7, "p": 2.0}"#).unwrap();
    let run = || {
        let mut out = ptr::null_mut();
        assert_eq!(unsafe { ds_run_experiment(cmd.as_ptr(), cfg.as_ptr(), DsFormat::Csv, &mut out) }, DsStatus::Ok);
        let s = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_owned();
        unsafe { ds_string_free(out) };
        s
    };
    let a = run();
    assert!(a.starts_with("delta,ap_constant,maximal_ratio\n"));
    assert_eq!(a, run());

    let mut out = ptr::null_mut();
    let unknown = CString::new("nope").unwrap();
    assert_eq!(
        unsafe { ds_run_experiment(unknown.as_ptr(), ptr::null(), DsFormat::Json, &mut out) },
        DsStatus::Parameter
    );
    let broken = CString::new("{not json").unwrap();
    assert_eq!(unsafe { ds_run_experiment(cmd.as_ptr(), broken.as_ptr(), DsFormat::Json, &mut out) }, DsStatus::Format);
}
