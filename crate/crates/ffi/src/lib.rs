//! C ABI over `bandspec`.
//!
//! Every fallible call returns a [`BandspecStatus`] and writes results through
//! out-pointers. On failure a message is kept per thread and can be read with
//! [`bandspec_last_error_message`]. Objects are opaque handles released by
//! their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bandspec::band_matrix::{generate_channel, gram, log_det_shifted, ChannelParams};
use bandspec::closed_forms as cf;
use bandspec::{derive_stream, eigenvalues, EmpiricalSpectrum, Error, FadingSpec};
use num_complex::Complex64;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BandspecStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    Numerical = 4,
    Panic = 5,
}

/// Channel ensemble parameters.
pub struct BandspecChannel(ChannelParams);

/// Sorted eigenvalues of one Gram matrix realization.
pub struct BandspecSpectrum(EmpiricalSpectrum);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> BandspecStatus {
    match e {
        Error::InvalidParams(_) | Error::FadingTag(_) | Error::Config(_) => {
            BandspecStatus::InvalidArgument
        }
        Error::Domain(_) | Error::MomentUnavailable { .. } | Error::DivergentOffset(_) => {
            BandspecStatus::Domain
        }
        _ => BandspecStatus::Numerical,
    }
}

/// Runs `f`, turning errors and panics into a status and an error message.
fn guard<F: FnOnce() -> Result<(), (BandspecStatus, String)>>(f: F) -> BandspecStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BandspecStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside bandspec".into());
            BandspecStatus::Panic
        }
    }
}

fn lift<T>(r: bandspec::Result<T>) -> Result<T, (BandspecStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (BandspecStatus, String) {
    (BandspecStatus::NullPointer, format!("`{what}` is NULL"))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), (BandspecStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn parse_law(tag: *const c_char) -> Result<FadingSpec, (BandspecStatus, String)> {
    if tag.is_null() {
        return Err(null("fading"));
    }
    let s = CStr::from_ptr(tag).to_str().map_err(|_| {
        (
            BandspecStatus::InvalidArgument,
            "fading tag is not UTF-8".to_string(),
        )
    })?;
    lift(s.parse())
}

/// Message for the last failed call on this thread; empty if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn bandspec_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Symmetric-law Wyner channel: `alpha` below and `beta` above the block
/// diagonal, all taps drawn from `fading` (e.g. `"rayleigh"`).
///
/// # Safety
/// `fading` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bandspec_channel_wyner(
    n: usize,
    k: usize,
    alpha: f64,
    beta: f64,
    fading: *const c_char,
    power: f64,
    out: *mut *mut BandspecChannel,
) -> BandspecStatus {
    guard(|| {
        let law = parse_law(fading)?;
        let params = lift(ChannelParams::wyner_iid(n, k, alpha, beta, law, power))?;
        write(out, Box::into_raw(Box::new(BandspecChannel(params))), "out")
    })
}

/// Two-tap channel (`K = 1`): `fading_a` on the diagonal, `fading_b` one
/// column to the left.
///
/// # Safety
/// Both tags must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bandspec_channel_two_diagonal(
    n: usize,
    fading_a: *const c_char,
    fading_b: *const c_char,
    power: f64,
    out: *mut *mut BandspecChannel,
) -> BandspecStatus {
    guard(|| {
        let a = parse_law(fading_a)?;
        let b = parse_law(fading_b)?;
        let params = lift(ChannelParams::two_diagonal(n, a, b, power))?;
        write(out, Box::into_raw(Box::new(BandspecChannel(params))), "out")
    })
}

/// # Safety
/// `channel` must come from a `bandspec_channel_*` constructor and not be
/// used afterwards. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn bandspec_channel_free(channel: *mut BandspecChannel) {
    if !channel.is_null() {
        drop(Box::from_raw(channel));
    }
}

/// Eigenvalues of `HH†` for the realization drawn from stream `index` of
/// `seed`.
///
/// # Safety
/// `channel` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bandspec_spectrum_sample(
    channel: *const BandspecChannel,
    seed: u64,
    index: u64,
    out: *mut *mut BandspecSpectrum,
) -> BandspecStatus {
    guard(|| {
        let ch = channel.as_ref().ok_or_else(|| null("channel"))?;
        let mut rng = derive_stream(seed, index);
        let s = eigenvalues(&gram(&generate_channel(&ch.0, &mut rng)));
        write(out, Box::into_raw(Box::new(BandspecSpectrum(s))), "out")
    })
}

/// Number of eigenvalues; 0 for NULL.
///
/// # Safety
/// `spectrum` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bandspec_spectrum_len(spectrum: *const BandspecSpectrum) -> usize {
    spectrum.as_ref().map_or(0, |s| s.0.len())
}

/// Copies up to `capacity` eigenvalues (ascending) into `buf` and stores the
/// number written in `written`.
///
/// # Safety
/// `buf` must hold `capacity` doubles; `spectrum` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn bandspec_spectrum_copy(
    spectrum: *const BandspecSpectrum,
    buf: *mut f64,
    capacity: usize,
    written: *mut usize,
) -> BandspecStatus {
    guard(|| {
        let s = spectrum.as_ref().ok_or_else(|| null("spectrum"))?;
        if buf.is_null() && capacity > 0 {
            return Err(null("buf"));
        }
        let n = capacity.min(s.0.len());
        if n > 0 {
            ptr::copy_nonoverlapping(s.0.eigenvalues().as_ptr(), buf, n);
        }
        write(written, n, "written")
    })
}

/// `(1/N)·Σ ln(1 + rho·λ)` in nats.
///
/// # Safety
/// `spectrum` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bandspec_spectrum_shannon(
    spectrum: *const BandspecSpectrum,
    rho: f64,
    out: *mut f64,
) -> BandspecStatus {
    guard(|| {
        let s = spectrum.as_ref().ok_or_else(|| null("spectrum"))?;
        if !(rho >= 0.0) {
            return Err((BandspecStatus::Domain, format!("rho {rho} must be >= 0")));
        }
        write(out, s.0.shannon_transform(rho), "out")
    })
}

/// # Safety
/// `spectrum` must come from [`bandspec_spectrum_sample`] and not be used
/// afterwards. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn bandspec_spectrum_free(spectrum: *mut BandspecSpectrum) {
    if !spectrum.is_null() {
        drop(Box::from_raw(spectrum));
    }
}

/// Per-cell capacity `(1/N)·ln det(I + (P/K)·HH†)` of one realization,
/// through banded LDL.
///
/// # Safety
/// `channel` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bandspec_capacity_sample(
    channel: *const BandspecChannel,
    seed: u64,
    index: u64,
    out: *mut f64,
) -> BandspecStatus {
    guard(|| {
        let ch = channel.as_ref().ok_or_else(|| null("channel"))?;
        let mut rng = derive_stream(seed, index);
        let a = gram(&generate_channel(&ch.0, &mut rng));
        let v = lift(log_det_shifted(&a, ch.0.rho()))? / ch.0.n() as f64;
        write(out, v, "out")
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bandspec_wyner_capacity_nonfading(
    power: f64,
    alpha: f64,
    out: *mut f64,
) -> BandspecStatus {
    guard(|| {
        write(
            out,
            lift(cf::wyner_capacity_nonfading(power, alpha))?,
            "out",
        )
    })
}

/// Large-K Wyner capacity with second moment `m2` and mean `mu_re + i·mu_im`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bandspec_wyner_capacity_large_k(
    power: f64,
    alpha: f64,
    m2: f64,
    mu_re: f64,
    mu_im: f64,
    out: *mut f64,
) -> BandspecStatus {
    guard(|| {
        let v = cf::wyner_capacity_large_k(power, alpha, m2, Complex64::new(mu_re, mu_im));
        write(out, lift(v)?, "out")
    })
}

/// Writes `M1, M2, M3` to `out[0..3]`.
///
/// # Safety
/// `out` must hold three doubles.
#[no_mangle]
pub unsafe extern "C" fn bandspec_limiting_moments(
    m2: f64,
    m4: f64,
    m6: f64,
    alpha: f64,
    out: *mut f64,
) -> BandspecStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let m = cf::limiting_moments(m2, m4, m6, alpha);
        for (i, v) in [m.m1, m.m2, m.m3].into_iter().enumerate() {
            out.add(i).write(v);
        }
        Ok(())
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bandspec_exp_integral(x: f64, out: *mut f64) -> BandspecStatus {
    guard(|| write(out, lift(cf::exp_integral(x))?, "out"))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bandspec_narula_stationary_pdf(
    x: f64,
    pbar: f64,
    out: *mut f64,
) -> BandspecStatus {
    guard(|| write(out, lift(cf::narula_stationary_pdf(x, pbar))?, "out"))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bandspec_narula_stationary_cdf(
    x: f64,
    pbar: f64,
    out: *mut f64,
) -> BandspecStatus {
    guard(|| write(out, lift(cf::narula_stationary_cdf(x, pbar))?, "out"))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bandspec_narula_capacity(pbar: f64, out: *mut f64) -> BandspecStatus {
    guard(|| write(out, lift(cf::narula_capacity(pbar))?, "out"))
}

/// Minimum `Eb/N0` (linear) and wideband slope.
///
/// # Safety
/// Both out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn bandspec_low_snr_params(
    k: usize,
    alpha: f64,
    m2: f64,
    m4: f64,
    eb_n0_min: *mut f64,
    s0: *mut f64,
) -> BandspecStatus {
    guard(|| {
        let p = lift(cf::low_snr_params(k, alpha, m2, m4))?;
        write(eb_n0_min, p.eb_n0_min, "eb_n0_min")?;
        write(s0, p.s0, "s0")
    })
}

/// High-SNR slope and power offset (3-dB units) of the two-tap channel.
///
/// # Safety
/// Tags must be NUL-terminated strings; out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn bandspec_high_snr_params(
    fading_a: *const c_char,
    fading_b: *const c_char,
    s_inf: *mut f64,
    l_inf: *mut f64,
) -> BandspecStatus {
    guard(|| {
        let a = parse_law(fading_a)?;
        let b = parse_law(fading_b)?;
        let p = lift(cf::high_snr_params(&a, &b))?;
        write(s_inf, p.s_inf, "s_inf")?;
        write(l_inf, p.l_inf, "l_inf")
    })
}

/// Marchenko–Pastur CDF with ratio `1/K` and scale `sigma2`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bandspec_marchenko_pastur_cdf(
    x: f64,
    k: usize,
    sigma2: f64,
    out: *mut f64,
) -> BandspecStatus {
    guard(|| write(out, lift(cf::marchenko_pastur_cdf(x, k, sigma2))?, "out"))
}
