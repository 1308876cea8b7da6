use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use bandspec_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(bandspec_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

#[test]
fn spectrum_round_trip() {
    let law = CString::new("deterministic").unwrap();
    let mut ch = ptr::null_mut();
    let st = unsafe { bandspec_channel_wyner(128, 1, 0.5, 0.5, law.as_ptr(), 10.0, &mut ch) };
    assert_eq!(st, BandspecStatus::Ok);
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { bandspec_spectrum_sample(ch, 1, 0, &mut s) },
        BandspecStatus::Ok
    );
    let n = unsafe { bandspec_spectrum_len(s) };
    assert_eq!(n, 128);
    let mut buf = vec![0.0; n];
    let mut written = 0;
    let st = unsafe { bandspec_spectrum_copy(s, buf.as_mut_ptr(), n, &mut written) };
    assert_eq!((st, written), (BandspecStatus::Ok, n));
    assert!(buf.windows(2).all(|w| w[0] <= w[1]));
    // (1 + 2α cos(kπ/(N+1)))² for the tridiagonal Toeplitz factor
    let mut expected: Vec<f64> = (1..=n)
        .map(|k| (1.0 + (k as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos()).powi(2))
        .collect();
    expected.sort_by(f64::total_cmp);
    for (x, y) in buf.iter().zip(&expected) {
        assert!((x - y).abs() < 1e-10);
    }
    let mut c = 0.0;
    assert_eq!(
        unsafe { bandspec_spectrum_shannon(s, 10.0, &mut c) },
        BandspecStatus::Ok
    );
    let direct: f64 = buf.iter().map(|l| (10.0 * l).ln_1p()).sum::<f64>() / n as f64;
    assert!((c - direct).abs() < 1e-12);
    let mut ldl = 0.0;
    assert_eq!(
        unsafe { bandspec_capacity_sample(ch, 1, 0, &mut ldl) },
        BandspecStatus::Ok
    );
    assert!((ldl - c).abs() < 1e-10);
    unsafe {
        bandspec_spectrum_free(s);
        bandspec_channel_free(ch);
        bandspec_spectrum_free(ptr::null_mut());
        bandspec_channel_free(ptr::null_mut());
    }
}

#[test]
fn same_stream_same_spectrum() {
    let law = CString::new("rayleigh").unwrap();
    let mut ch = ptr::null_mut();
    unsafe { bandspec_channel_two_diagonal(64, law.as_ptr(), law.as_ptr(), 1.0, &mut ch) };
    let sample = |index| {
        let mut s = ptr::null_mut();
        unsafe { bandspec_spectrum_sample(ch, 9, index, &mut s) };
        let mut buf = vec![0.0; 64];
        let mut w = 0;
        unsafe {
            bandspec_spectrum_copy(s, buf.as_mut_ptr(), 64, &mut w);
            bandspec_spectrum_free(s);
        }
        buf
    };
    assert_eq!(sample(3), sample(3));
    assert_ne!(sample(3), sample(4));
    unsafe { bandspec_channel_free(ch) };
}

#[test]
fn errors_are_reported() {
    let bad = CString::new("gamma").unwrap();
    let mut ch = ptr::null_mut();
    let st = unsafe { bandspec_channel_wyner(16, 1, 0.5, 0.5, bad.as_ptr(), 1.0, &mut ch) };
    assert_eq!(st, BandspecStatus::InvalidArgument);
    assert!(ch.is_null());
    assert!(last_error().contains("gamma"));

    let law = CString::new("rayleigh").unwrap();
    let st = unsafe { bandspec_channel_wyner(1, 1, 0.5, 0.5, law.as_ptr(), 1.0, &mut ch) };
    assert_eq!(st, BandspecStatus::InvalidArgument);

    let mut v = 0.0;
    assert_eq!(
        unsafe { bandspec_exp_integral(-1.0, &mut v) },
        BandspecStatus::Domain
    );
    assert_eq!(
        unsafe { bandspec_exp_integral(1.0, ptr::null_mut()) },
        BandspecStatus::NullPointer
    );
    assert_eq!(
        unsafe { bandspec_spectrum_sample(ptr::null(), 0, 0, &mut ptr::null_mut()) },
        BandspecStatus::NullPointer
    );
    let atom = CString::new("rician:nu=0,s2=0").unwrap();
    let (mut a, mut b) = (0.0, 0.0);
    let st = unsafe { bandspec_high_snr_params(atom.as_ptr(), atom.as_ptr(), &mut a, &mut b) };
    assert_eq!(st, BandspecStatus::Domain);
}

#[test]
fn closed_forms() {
    let mut v = 0.0;
    unsafe {
        assert_eq!(
            bandspec_wyner_capacity_nonfading(7.0, 0.0, &mut v),
            BandspecStatus::Ok
        );
        assert!((v - 8f64.ln()).abs() < 1e-15);
        bandspec_wyner_capacity_large_k(10.0, 0.5, 1.0, 0.0, 0.0, &mut v);
        assert!((v - 16f64.ln()).abs() < 1e-15);
        bandspec_exp_integral(1.0, &mut v);
        assert!((v - 0.219_383_934_395_520_3).abs() < 1e-15);
        bandspec_narula_stationary_pdf(1.0, 2.0, &mut v);
        assert_eq!(v, 0.0);
        bandspec_narula_stationary_cdf(1e6, 2.0, &mut v);
        assert!((v - 1.0).abs() < 1e-12);
        bandspec_narula_capacity(1e-4, &mut v);
        assert!(v < 1e-3);
        bandspec_marchenko_pastur_cdf(5.0, 1, 1.0, &mut v);
        assert_eq!(v, 1.0);
        let mut m = [0.0; 3];
        bandspec_limiting_moments(1.0, 1.0, 1.0, 1.0, m.as_mut_ptr());
        assert_eq!(m, [3.0, 15.0, 87.0]);
        let (mut eb, mut s0) = (0.0, 0.0);
        bandspec_low_snr_params(1, 0.0, 1.0, 2.0, &mut eb, &mut s0);
        assert!((eb - std::f64::consts::LN_2).abs() < 1e-15 && (s0 - 1.0).abs() < 1e-15);
        let r = CString::new("rayleigh").unwrap();
        let (mut si, mut li) = (0.0, 0.0);
        bandspec_high_snr_params(r.as_ptr(), r.as_ptr(), &mut si, &mut li);
        assert_eq!(si, 1.0);
        assert!((li - 0.832_746_177_276_867).abs() < 1e-12);
    }
}

#[test]
fn header_compiles_as_c() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = root.join("include").join("bandspec.h");
    let text = std::fs::read_to_string(&header).expect("generated header");
    for name in [
        "bandspec_channel_wyner",
        "bandspec_spectrum_free",
        "BANDSPEC_STATUS_OK",
    ] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(root.join("include"))
        .arg(root.join("c").join("smoke.c"))
        .status()
        .expect("a C compiler on PATH");
    assert!(status.success());
}
