//! All eigenvalues of a Hermitian band matrix without densification.
//!
//! The band is peeled off one outer diagonal at a time with complex plane
//! rotations on adjacent rows/columns; each annihilation creates a single
//! bulge one position outside the band which is chased to the bottom of the
//! matrix. The surviving Hermitian tridiagonal is made real by a diagonal
//! unitary similarity and solved by Sturm-count bisection.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::band_matrix::BandedHermitian;
use crate::spectral::EmpiricalSpectrum;

/// Real symmetric tridiagonal matrix with nonnegative off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct RealTridiagonal {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

impl RealTridiagonal {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Self {
        assert_eq!(
            offdiag.len(),
            diag.len().saturating_sub(1),
            "off-diagonal must have N-1 entries"
        );
        Self { diag, offdiag }
    }

    pub fn order(&self) -> usize {
        self.diag.len()
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn sturm_count(&self, x: f64) -> usize {
        let squares: Vec<f64> = self.offdiag.iter().map(|e| e * e).collect();
        sturm_count(&self.diag, &squares, pivmin(&squares), x)
    }

    /// Gershgorin interval containing the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.order();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 {
                self.offdiag[i - 1].abs()
            } else {
                0.0
            };
            let right = if i + 1 < n {
                self.offdiag[i].abs()
            } else {
                0.0
            };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }
}

/// Lower band of a Hermitian matrix with room for one bulge diagonal.
struct Workspace {
    n: usize,
    /// `bands[m][j] = A[j+m][j]`
    bands: Vec<Vec<Complex64>>,
}

impl Workspace {
    fn new(a: &BandedHermitian) -> Self {
        let n = a.order();
        let b = a.bandwidth();
        let mut bands = Vec::with_capacity(b + 2);
        bands.push(
            a.diagonal()
                .iter()
                .map(|&x| Complex64::new(x, 0.0))
                .collect(),
        );
        for m in 1..=b {
            bands.push(a.subdiagonal(m).to_vec());
        }
        bands.push(vec![Complex64::new(0.0, 0.0); n.saturating_sub(b + 1)]);
        Self { n, bands }
    }

    fn reach(&self) -> usize {
        self.bands.len() - 1
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> Complex64 {
        if i >= j {
            self.bands
                .get(i - j)
                .map_or(Complex64::new(0.0, 0.0), |d| d[j])
        } else {
            self.bands
                .get(j - i)
                .map_or(Complex64::new(0.0, 0.0), |d| d[i].conj())
        }
    }

    /// Stores `A[i][j] = value` (and implicitly its mirror). Entries beyond
    /// the reach are structurally zero and are dropped.
    #[inline]
    fn set(&mut self, i: usize, j: usize, value: Complex64) {
        let (hi, lo, v) = if i >= j {
            (i, j, value)
        } else {
            (j, i, value.conj())
        };
        match self.bands.get_mut(hi - lo) {
            Some(d) => d[lo] = v,
            None => debug_assert!(
                v == Complex64::new(0.0, 0.0),
                "fill outside the bulge diagonal"
            ),
        }
    }

    /// Similarity `A ← G A G†` with `G = [[c, s], [-s̄, c]]` acting on indices
    /// `p` and `p + 1`.
    fn rotate(&mut self, p: usize, c: f64, s: Complex64) {
        let q = p + 1;
        let reach = self.reach();
        let lo = p.saturating_sub(reach);
        let hi = (q + reach).min(self.n - 1);
        for i in lo..=hi {
            if i == p || i == q {
                continue;
            }
            let x = self.get(p, i);
            let y = self.get(q, i);
            self.set(p, i, x * c + s * y);
            self.set(q, i, -s.conj() * x + y * c);
        }
        let a = self.bands[0][p].re;
        let d = self.bands[0][q].re;
        let z = self.bands[1][p];
        let cross = 2.0 * c * (s * z).re;
        let s2 = s.norm_sqr();
        self.bands[0][p] = Complex64::new(c * c * a + cross + s2 * d, 0.0);
        self.bands[0][q] = Complex64::new(s2 * a - cross + c * c * d, 0.0);
        self.bands[1][p] =
            -s.conj() * a * c + z * (c * c) - s.conj() * s.conj() * z.conj() + s.conj() * d * c;
    }
}

/// Rotation `(c, s)` mapping `(x, y)` to `(r, 0)`.
#[inline]
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64) {
    let ax = x.norm();
    let ay = y.norm();
    if ay == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    if ax == 0.0 {
        return (0.0, Complex64::new(1.0, 0.0));
    }
    let r = ax.hypot(ay);
    let phase = x / ax;
    (ax / r, phase * y.conj() / r)
}

/// Unitary reduction of a Hermitian band matrix to real symmetric tridiagonal
/// form.
pub fn reduce_to_tridiagonal(a: &BandedHermitian) -> RealTridiagonal {
    let n = a.order();
    let b = a.bandwidth();
    if n == 0 {
        return RealTridiagonal::new(Vec::new(), Vec::new());
    }
    let mut w = Workspace::new(a);
    for m in (2..=b).rev() {
        for k in 0..n.saturating_sub(m) {
            // Zero A[k+m][k] against A[k+m-1][k], then chase the bulge that
            // appears at (row + m, row - 1).
            let mut row = k + m;
            let mut col = k;
            while row < n {
                let y = w.get(row, col);
                if y == Complex64::new(0.0, 0.0) {
                    break;
                }
                let x = w.get(row - 1, col);
                let (c, s) = givens(x, y);
                w.rotate(row - 1, c, s);
                w.set(row, col, Complex64::new(0.0, 0.0));
                col = row - 1;
                row += m;
            }
        }
    }
    let diag = w.bands[0].iter().map(|z| z.re).collect();
    let offdiag = if b == 0 {
        vec![0.0; n - 1]
    } else {
        w.bands[1].iter().map(|z| z.norm()).collect()
    };
    RealTridiagonal::new(diag, offdiag)
}

fn pivmin(squares: &[f64]) -> f64 {
    let largest = squares.iter().copied().fold(1.0, f64::max);
    f64::MIN_POSITIVE * largest
}

/// Sturm count on `T - xI` via the LDLᵀ pivots, with tiny pivots replaced by
/// `-pivmin`.
fn sturm_count(diag: &[f64], off_sq: &[f64], pivmin: f64, x: f64) -> usize {
    let mut count = 0;
    let mut q = diag[0] - x;
    if q.abs() <= pivmin {
        q = -pivmin;
    }
    if q < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        q = (diag[i] - x) - off_sq[i - 1] / q;
        if q.abs() <= pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

struct Bisection<'a> {
    diag: &'a [f64],
    off_sq: &'a [f64],
    pivmin: f64,
    abs_tol: f64,
}

const PARALLEL_SLICE: usize = 32;

impl Bisection<'_> {
    fn count(&self, x: f64) -> usize {
        sturm_count(self.diag, self.off_sq, self.pivmin, x)
    }

    fn converged(&self, lo: f64, hi: f64) -> bool {
        let mid = 0.5 * (lo + hi);
        hi - lo
            <= self
                .abs_tol
                .max(2.0 * f64::EPSILON * lo.abs().max(hi.abs()))
            || mid <= lo
            || mid >= hi
    }

    /// Fills `out` with the eigenvalues of indices `first..first + out.len()`,
    /// all of which lie in `[lo, hi)`.
    fn solve(&self, lo: f64, hi: f64, first: usize, out: &mut [f64]) {
        if out.is_empty() {
            return;
        }
        if self.converged(lo, hi) {
            out.fill(0.5 * (lo + hi));
            return;
        }
        let mid = 0.5 * (lo + hi);
        let split = self.count(mid).clamp(first, first + out.len()) - first;
        let (left, right) = out.split_at_mut(split);
        if left.len() + right.len() > PARALLEL_SLICE && !left.is_empty() && !right.is_empty() {
            rayon::join(
                || self.solve(lo, mid, first, left),
                || self.solve(mid, hi, first + split, right),
            );
        } else {
            self.solve(lo, mid, first, left);
            self.solve(mid, hi, first + split, right);
        }
    }
}

/// All eigenvalues of `t` in nondecreasing order by Sturm-sequence bisection.
pub fn tridiag_eigenvalues(t: &RealTridiagonal) -> Vec<f64> {
    let n = t.order();
    match n {
        0 => return Vec::new(),
        1 => return vec![t.diag[0]],
        _ => {}
    }
    let off_sq: Vec<f64> = t.offdiag.iter().map(|e| e * e).collect();
    let (g_lo, g_hi) = t.gershgorin();
    let scale = g_lo.abs().max(g_hi.abs()).max(f64::MIN_POSITIVE);
    let margin = 2.0 * f64::EPSILON * scale * n as f64 + f64::MIN_POSITIVE;
    let solver = Bisection {
        diag: &t.diag,
        off_sq: &off_sq,
        pivmin: pivmin(&off_sq),
        abs_tol: (4.0 * f64::EPSILON * scale).max(1e-300),
    };
    let mut out = vec![0.0; n];
    solver.solve(g_lo - margin, g_hi + margin, 0, &mut out);
    // Interval midpoints are already ordered; this only guards ties.
    out.sort_by(f64::total_cmp);
    out
}

/// Full spectrum of a Hermitian band matrix.
pub fn eigenvalues(a: &BandedHermitian) -> EmpiricalSpectrum {
    let t = reduce_to_tridiagonal(a);
    EmpiricalSpectrum::from_sorted(tridiag_eigenvalues(&t))
}

/// Spectra of many matrices in parallel; output order follows input order.
pub fn eigenvalues_many(mats: &[BandedHermitian]) -> Vec<EmpiricalSpectrum> {
    mats.par_iter().map(eigenvalues).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::band_matrix::{generate_channel, gram, ChannelParams};
    use crate::fading::FadingSpec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;
    use std::f64::consts::PI;

    fn random_band(n: usize, b: usize, rng: &mut ChaCha20Rng) -> BandedHermitian {
        let diag = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
        let sub = (1..=b)
            .map(|m| {
                (0..n - m)
                    .map(|_| {
                        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                    })
                    .collect()
            })
            .collect();
        BandedHermitian::from_parts(diag, sub).unwrap()
    }

    #[test]
    fn real_tridiagonal_passes_through() {
        let a = BandedHermitian::from_parts(
            vec![1.0, 2.0, 3.0],
            vec![vec![Complex64::new(-0.5, 0.0), Complex64::new(0.25, 0.0)]],
        )
        .unwrap();
        let t = reduce_to_tridiagonal(&a);
        assert_eq!(t.diag, vec![1.0, 2.0, 3.0]);
        assert_eq!(t.offdiag, vec![0.5, 0.25]);
    }

    #[test]
    fn diagonal_input() {
        let a = BandedHermitian::from_parts(vec![3.0, -1.0, 2.0], vec![]).unwrap();
        let t = reduce_to_tridiagonal(&a);
        assert_eq!(t.diag, vec![3.0, -1.0, 2.0]);
        assert_eq!(t.offdiag, vec![0.0, 0.0]);
        let got = eigenvalues(&a);
        for (x, y) in got.eigenvalues().iter().zip([-1.0, 2.0, 3.0]) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn small_orders() {
        let t = RealTridiagonal::new(vec![4.2], vec![]);
        assert_eq!(tridiag_eigenvalues(&t), vec![4.2]);
        let (a, c, b) = (1.0, 3.0, 0.7f64);
        let t = RealTridiagonal::new(vec![a, c], vec![b]);
        let disc = ((a + c) * (a + c) - 4.0 * (a * c - b * b)).sqrt();
        let expect = [0.5 * (a + c - disc), 0.5 * (a + c + disc)];
        let got = tridiag_eigenvalues(&t);
        for (x, y) in got.iter().zip(expect) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn toeplitz_tridiagonal_closed_form() {
        let n = 512;
        let alpha = 0.37;
        let t = RealTridiagonal::new(vec![1.0; n], vec![alpha; n - 1]);
        let got = tridiag_eigenvalues(&t);
        let mut expect: Vec<f64> = (1..=n)
            .map(|k| 1.0 + 2.0 * alpha * (k as f64 * PI / (n as f64 + 1.0)).cos())
            .collect();
        expect.sort_by(f64::total_cmp);
        let err = got
            .iter()
            .zip(&expect)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-13, "max error {err}");
    }

    #[test]
    fn sturm_counts_match_spectrum() {
        let mut rng = ChaCha20Rng::seed_from_u64(21);
        let a = random_band(40, 3, &mut rng);
        let t = reduce_to_tridiagonal(&a);
        let spectrum = tridiag_eigenvalues(&t);
        for _ in 0..100 {
            let x: f64 = rng.random_range(-6.0..6.0);
            let below = spectrum.iter().filter(|&&l| l < x).count();
            assert_eq!(t.sturm_count(x), below, "x = {x}");
        }
    }

    #[test]
    fn trace_and_frobenius_conserved() {
        let mut rng = ChaCha20Rng::seed_from_u64(22);
        for b in 1..=4 {
            let a = random_band(60, b, &mut rng);
            let s = eigenvalues(&a);
            let sum: f64 = s.eigenvalues().iter().sum();
            let sq: f64 = s.eigenvalues().iter().map(|x| x * x).sum();
            assert!((sum - a.trace()).abs() <= 1e-9 * a.trace().abs().max(1.0));
            assert!((sq - a.frobenius_norm_sqr()).abs() <= 1e-9 * a.frobenius_norm_sqr());
        }
    }

    #[test]
    fn deterministic_wyner_gram_spectrum() {
        let n = 512;
        let alpha = 0.45;
        let params =
            ChannelParams::wyner_iid(n, 1, alpha, alpha, FadingSpec::Deterministic, 1.0).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(0);
        let s = eigenvalues(&gram(&generate_channel(&params, &mut rng)));
        let mut expect: Vec<f64> = (1..=n)
            .map(|k| (1.0 + 2.0 * alpha * (k as f64 * PI / (n as f64 + 1.0)).cos()).powi(2))
            .collect();
        expect.sort_by(f64::total_cmp);
        let err = s
            .eigenvalues()
            .iter()
            .zip(&expect)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-9, "max error {err}");
        assert!(s.eigenvalues()[0] >= -1e-12);
    }

    #[test]
    fn parallel_batch_matches_serial() {
        let mut rng = ChaCha20Rng::seed_from_u64(23);
        let mats: Vec<_> = (0..6).map(|_| random_band(50, 2, &mut rng)).collect();
        let batch = eigenvalues_many(&mats);
        for (m, s) in mats.iter().zip(&batch) {
            assert_eq!(eigenvalues(m).eigenvalues(), s.eigenvalues());
        }
    }
}
