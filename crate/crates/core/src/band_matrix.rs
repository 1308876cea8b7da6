//! Block-banded channel matrices, their banded Gram matrices, and the banded
//! LDL factorization behind the O(N·b²) log-determinant path.

use std::io::{Read, Write};

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::fading::FadingSpec;

/// One block diagonal of the channel: row `i` carries a `1×K` block at block
/// column `i + offset`, scaled by `gain`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagonal {
    pub offset: i64,
    pub gain: f64,
    pub fading: FadingSpec,
}

impl Diagonal {
    pub fn new(offset: i64, gain: f64, fading: FadingSpec) -> Self {
        Self {
            offset,
            gain,
            fading,
        }
    }
}

/// The channel ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelParams {
    n: usize,
    k: usize,
    diagonals: Vec<Diagonal>,
    power: f64,
}

impl ChannelParams {
    pub fn new(n: usize, k: usize, diagonals: Vec<Diagonal>, power: f64) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(Error::InvalidParams("N and K must be positive".into()));
        }
        if diagonals.is_empty() {
            return Err(Error::InvalidParams(
                "at least one diagonal is required".into(),
            ));
        }
        for (idx, d) in diagonals.iter().enumerate() {
            if !(0.0..=1.0).contains(&d.gain) {
                return Err(Error::InvalidParams(format!(
                    "gain {} of offset {} outside [0, 1]",
                    d.gain, d.offset
                )));
            }
            if diagonals[..idx].iter().any(|e| e.offset == d.offset) {
                return Err(Error::InvalidParams(format!(
                    "offset {} listed twice",
                    d.offset
                )));
            }
        }
        if !(power >= 0.0) || !power.is_finite() {
            return Err(Error::InvalidParams(format!(
                "power {power} must be finite and >= 0"
            )));
        }
        let max_offset = diagonals
            .iter()
            .map(|d| d.offset.unsigned_abs())
            .max()
            .unwrap_or(0);
        if (n as u64) < 2 * max_offset + 1 {
            return Err(Error::InvalidParams(format!(
                "N = {n} too small for offsets up to {max_offset}"
            )));
        }
        Ok(Self {
            n,
            k,
            diagonals,
            power,
        })
    }

    /// Wyner's linear model: `α·b` below, `a` on, and `β·c` above the block diagonal.
    #[allow(clippy::too_many_arguments)]
    pub fn wyner(
        n: usize,
        k: usize,
        alpha: f64,
        beta: f64,
        pi_a: FadingSpec,
        pi_b: FadingSpec,
        pi_c: FadingSpec,
        power: f64,
    ) -> Result<Self> {
        Self::new(
            n,
            k,
            vec![
                Diagonal::new(-1, alpha, pi_b),
                Diagonal::new(0, 1.0, pi_a),
                Diagonal::new(1, beta, pi_c),
            ],
            power,
        )
    }

    /// Wyner model with one law shared by all three diagonals.
    pub fn wyner_iid(
        n: usize,
        k: usize,
        alpha: f64,
        beta: f64,
        fading: FadingSpec,
        power: f64,
    ) -> Result<Self> {
        Self::wyner(n, k, alpha, beta, fading, fading, fading, power)
    }

    /// `K = 1`, `α = 1`, `β = 0`: the Jacobi (two-diagonal) case.
    pub fn two_diagonal(n: usize, pi_a: FadingSpec, pi_b: FadingSpec, power: f64) -> Result<Self> {
        Self::new(
            n,
            1,
            vec![Diagonal::new(-1, 1.0, pi_b), Diagonal::new(0, 1.0, pi_a)],
            power,
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    pub fn diagonals(&self) -> &[Diagonal] {
        &self.diagonals
    }

    /// Per-user transmit SNR `ρ = P / K`.
    pub fn rho(&self) -> f64 {
        self.power / self.k as f64
    }

    pub fn max_offset(&self) -> u64 {
        self.diagonals
            .iter()
            .map(|d| d.offset.unsigned_abs())
            .max()
            .unwrap_or(0)
    }

    pub fn with_n(&self, n: usize) -> Result<Self> {
        Self::new(n, self.k, self.diagonals.clone(), self.power)
    }

    pub fn with_power(&self, power: f64) -> Result<Self> {
        Self::new(self.n, self.k, self.diagonals.clone(), power)
    }

    pub fn diagonal_at(&self, offset: i64) -> Option<&Diagonal> {
        self.diagonals.iter().find(|d| d.offset == offset)
    }

    /// `Some((α, β, law))` when this is the symmetric (`α = β`) Wyner model
    /// with one law on every diagonal.
    pub fn symmetric_wyner(&self) -> Option<(f64, FadingSpec)> {
        let lower = self.diagonal_at(-1)?;
        let main = self.diagonal_at(0)?;
        let upper = self.diagonal_at(1)?;
        let same_law = lower.fading == main.fading && upper.fading == main.fading;
        (self.diagonals.len() == 3 && main.gain == 1.0 && lower.gain == upper.gain && same_law)
            .then_some((lower.gain, main.fading))
    }
}

/// A realized `N × NK` channel matrix stored as `1×K` row blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockBandedChannel {
    n: usize,
    k: usize,
    offsets: Vec<i64>,
    /// `blocks[d][i*k..(i+1)*k]` is row `i`'s block on diagonal `d`; zeros
    /// when the block column `i + offsets[d]` is out of range.
    blocks: Vec<Vec<Complex64>>,
}

impl BlockBandedChannel {
    /// Assembles a channel from explicit blocks. Entries of out-of-range
    /// blocks are ignored and stored as zero.
    pub fn from_blocks(
        n: usize,
        k: usize,
        offsets: Vec<i64>,
        mut blocks: Vec<Vec<Complex64>>,
    ) -> Result<Self> {
        if offsets.len() != blocks.len() {
            return Err(Error::InvalidParams(
                "one block array per offset required".into(),
            ));
        }
        for (d, (&offset, block)) in offsets.iter().zip(blocks.iter_mut()).enumerate() {
            if block.len() != n * k {
                return Err(Error::InvalidParams(format!(
                    "diagonal {d} has {} entries, expected {}",
                    block.len(),
                    n * k
                )));
            }
            if offsets[..d].contains(&offset) {
                return Err(Error::InvalidParams(format!(
                    "offset {offset} listed twice"
                )));
            }
            for i in 0..n {
                if !block_in_range(n, i, offset) {
                    block[i * k..(i + 1) * k].fill(Complex64::new(0.0, 0.0));
                }
            }
        }
        Ok(Self {
            n,
            k,
            offsets,
            blocks,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn offsets(&self) -> &[i64] {
        &self.offsets
    }

    /// Row `row`'s block on the diagonal at index `diag`, if present.
    pub fn block(&self, row: usize, diag: usize) -> Option<&[Complex64]> {
        block_in_range(self.n, row, self.offsets[diag])
            .then(|| &self.blocks[diag][row * self.k..(row + 1) * self.k])
    }

    /// Dense entry `[H]_{row, col}` with `col` in `0..N·K`.
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        let block_col = (col / self.k) as i64;
        let within = col % self.k;
        for (d, &offset) in self.offsets.iter().enumerate() {
            if row as i64 + offset == block_col {
                if let Some(block) = self.block(row, d) {
                    return block[within];
                }
            }
        }
        Complex64::new(0.0, 0.0)
    }

    /// Dense `N × NK` expansion, row-major.
    pub fn to_dense(&self) -> Vec<Vec<Complex64>> {
        (0..self.n)
            .map(|i| (0..self.n * self.k).map(|j| self.entry(i, j)).collect())
            .collect()
    }

    /// Number of stored entries belonging to in-range blocks.
    pub fn structural_nonzeros(&self) -> usize {
        (0..self.n)
            .map(|i| {
                (0..self.offsets.len())
                    .filter(|&d| self.block(i, d).is_some())
                    .count()
                    * self.k
            })
            .sum()
    }

    pub fn frobenius_norm_sqr(&self) -> f64 {
        self.blocks
            .iter()
            .flat_map(|b| b.iter())
            .map(|z| z.norm_sqr())
            .sum()
    }
}

fn block_in_range(n: usize, row: usize, offset: i64) -> bool {
    let col = row as i64 + offset;
    col >= 0 && col < n as i64
}

/// Draws one channel realization. Draw order: row by row, and within a row
/// diagonal by diagonal in configured order, `K` draws per present block.
pub fn generate_channel<R: Rng + ?Sized>(
    params: &ChannelParams,
    rng: &mut R,
) -> BlockBandedChannel {
    let (n, k) = (params.n, params.k);
    let mut blocks = vec![vec![Complex64::new(0.0, 0.0); n * k]; params.diagonals.len()];
    for i in 0..n {
        for (d, diag) in params.diagonals.iter().enumerate() {
            if !block_in_range(n, i, diag.offset) {
                continue;
            }
            for slot in &mut blocks[d][i * k..(i + 1) * k] {
                *slot = diag.fading.sample(rng) * diag.gain;
            }
        }
    }
    BlockBandedChannel {
        n,
        k,
        offsets: params.diagonals.iter().map(|d| d.offset).collect(),
        blocks,
    }
}

/// Hermitian band matrix in diagonal-major storage: a real main diagonal and
/// `bandwidth` complex sub-diagonals (`sub[m-1][j] = A[j+m][j]`).
#[derive(Debug, Clone, PartialEq)]
pub struct BandedHermitian {
    diag: Vec<f64>,
    sub: Vec<Vec<Complex64>>,
}

const BAND_MAGIC: &[u8; 4] = b"BNDH";
const BAND_VERSION: u32 = 1;

impl BandedHermitian {
    pub fn zeros(n: usize, bandwidth: usize) -> Self {
        let sub = (1..=bandwidth)
            .map(|m| vec![Complex64::new(0.0, 0.0); n.saturating_sub(m)])
            .collect();
        Self {
            diag: vec![0.0; n],
            sub,
        }
    }

    /// Builds from a main diagonal and sub-diagonals; sub-diagonal `m` (1-based)
    /// must have length `N - m`.
    pub fn from_parts(diag: Vec<f64>, sub: Vec<Vec<Complex64>>) -> Result<Self> {
        let n = diag.len();
        for (idx, s) in sub.iter().enumerate() {
            if s.len() != n.saturating_sub(idx + 1) {
                return Err(Error::InvalidParams(format!(
                    "sub-diagonal {} has length {}, expected {}",
                    idx + 1,
                    s.len(),
                    n.saturating_sub(idx + 1)
                )));
            }
        }
        Ok(Self { diag, sub })
    }

    pub fn order(&self) -> usize {
        self.diag.len()
    }

    pub fn bandwidth(&self) -> usize {
        self.sub.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    /// Sub-diagonal `m >= 1`.
    pub fn subdiagonal(&self, m: usize) -> &[Complex64] {
        &self.sub[m - 1]
    }

    /// `A[i][j]`; zero outside the band.
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        if i == j {
            return Complex64::new(self.diag[i], 0.0);
        }
        let (hi, lo) = if i > j { (i, j) } else { (j, i) };
        let m = hi - lo;
        if m > self.bandwidth() {
            return Complex64::new(0.0, 0.0);
        }
        let v = self.sub[m - 1][lo];
        if i > j {
            v
        } else {
            v.conj()
        }
    }

    /// Sets a lower-triangle entry `A[i][j]` with `i >= j` (the mirror is implied).
    pub fn set_lower(&mut self, i: usize, j: usize, value: Complex64) {
        assert!(i >= j, "set_lower expects i >= j");
        if i == j {
            self.diag[i] = value.re;
        } else {
            self.sub[i - j - 1][j] = value;
        }
    }

    pub fn trace(&self) -> f64 {
        self.diag.iter().sum()
    }

    /// `Σ_ij |A_ij|^2` over both triangles.
    pub fn frobenius_norm_sqr(&self) -> f64 {
        let d: f64 = self.diag.iter().map(|x| x * x).sum();
        let off: f64 = self.sub.iter().flatten().map(|z| z.norm_sqr()).sum();
        d + 2.0 * off
    }

    /// Largest absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        let n = self.order();
        let b = self.bandwidth();
        (0..n)
            .map(|i| {
                let lo = i.saturating_sub(b);
                let hi = (i + b).min(n.saturating_sub(1));
                (lo..=hi).map(|j| self.get(i, j).norm()).sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    /// Dense row-major expansion (test oracles and small instances only).
    pub fn to_dense(&self) -> Vec<Vec<Complex64>> {
        let n = self.order();
        (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// Writes the little-endian band dump: magic `BNDH`, `u32` version,
    /// `u64` order, `u32` bandwidth, then the main diagonal followed by each
    /// sub-diagonal as `(re, im)` `f64` pairs.
    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(BAND_MAGIC)?;
        out.write_all(&BAND_VERSION.to_le_bytes())?;
        out.write_all(&(self.order() as u64).to_le_bytes())?;
        out.write_all(&(self.bandwidth() as u32).to_le_bytes())?;
        for &x in &self.diag {
            out.write_all(&x.to_le_bytes())?;
            out.write_all(&0.0f64.to_le_bytes())?;
        }
        for z in self.sub.iter().flatten() {
            out.write_all(&z.re.to_le_bytes())?;
            out.write_all(&z.im.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_from<R: Read>(mut input: R) -> Result<Self> {
        let mut magic = [0u8; 4];
        input.read_exact(&mut magic)?;
        if &magic != BAND_MAGIC {
            return Err(Error::BandFormat("bad magic".into()));
        }
        let version = read_u32(&mut input)?;
        if version != BAND_VERSION {
            return Err(Error::BandFormat(format!("unsupported version {version}")));
        }
        let n = usize::try_from(read_u64(&mut input)?)
            .map_err(|_| Error::BandFormat("order does not fit in memory".into()))?;
        let b = read_u32(&mut input)? as usize;
        if b >= n.max(1) && !(n == 0 && b == 0) {
            return Err(Error::BandFormat(format!(
                "bandwidth {b} too large for order {n}"
            )));
        }
        let mut diag = Vec::with_capacity(n);
        for _ in 0..n {
            let z = read_complex(&mut input)?;
            if z.im != 0.0 {
                return Err(Error::BandFormat("main diagonal must be real".into()));
            }
            diag.push(z.re);
        }
        let mut sub = Vec::with_capacity(b);
        for m in 1..=b {
            let mut row = Vec::with_capacity(n - m);
            for _ in 0..n - m {
                row.push(read_complex(&mut input)?);
            }
            sub.push(row);
        }
        Ok(Self { diag, sub })
    }
}

fn read_u32<R: Read>(input: &mut R) -> Result<u32> {
    let mut buf = [0u8; 4];
    input.read_exact(&mut buf)?;
    Ok(u32::from_le_bytes(buf))
}

fn read_u64<R: Read>(input: &mut R) -> Result<u64> {
    let mut buf = [0u8; 8];
    input.read_exact(&mut buf)?;
    Ok(u64::from_le_bytes(buf))
}

fn read_complex<R: Read>(input: &mut R) -> Result<Complex64> {
    let mut buf = [0u8; 16];
    input.read_exact(&mut buf)?;
    let re = f64::from_le_bytes(buf[..8].try_into().unwrap());
    let im = f64::from_le_bytes(buf[8..].try_into().unwrap());
    Ok(Complex64::new(re, im))
}

/// `H·H†` in band form, computed from the row blocks without densifying `H`.
/// The bandwidth is the span of the configured offsets.
pub fn gram(h: &BlockBandedChannel) -> BandedHermitian {
    let n = h.n;
    let offsets = &h.offsets;
    let min_off = offsets.iter().copied().min().unwrap_or(0);
    let max_off = offsets.iter().copied().max().unwrap_or(0);
    let bandwidth = ((max_off - min_off) as usize).min(n.saturating_sub(1));
    let mut out = BandedHermitian::zeros(n, bandwidth);

    for i in 0..n {
        // Main diagonal: squared norm of the whole row.
        let mut d = 0.0;
        for di in 0..offsets.len() {
            if let Some(block) = h.block(i, di) {
                d += block.iter().map(|z| z.norm_sqr()).sum::<f64>();
            }
        }
        out.diag[i] = d;

        // A[i][i-m] = Σ over shared block columns of <row i, row i-m>.
        for m in 1..=bandwidth.min(i) {
            let j = i - m;
            let mut acc = Complex64::new(0.0, 0.0);
            for (di, &off_i) in offsets.iter().enumerate() {
                let Some(bi) = h.block(i, di) else { continue };
                let Some(dj) = offsets.iter().position(|&o| o == off_i + m as i64) else {
                    continue;
                };
                let Some(bj) = h.block(j, dj) else { continue };
                acc += bi
                    .iter()
                    .zip(bj)
                    .map(|(x, y)| x * y.conj())
                    .sum::<Complex64>();
            }
            out.sub[m - 1][j] = acc;
        }
    }
    out
}

/// Smallest admissible LDL pivot of `I + ρA`.
pub const PIVOT_TOLERANCE: f64 = 1e-14;

/// Diagonal `D` of the unit-lower-triangular factorization `I + ρA = L D L†`.
///
/// Runs in O(N·b²) time and O(N·b) memory. `Σ ln d_i = ln det(I + ρA)`.
pub fn ldl_shifted(a: &BandedHermitian, rho: f64) -> Result<Vec<f64>> {
    if !(rho >= 0.0) || !rho.is_finite() {
        return Err(Error::Domain(format!(
            "shift rho = {rho} must be finite and >= 0"
        )));
    }
    let n = a.order();
    let b = a.bandwidth();
    let mut d = vec![0.0; n];
    // l[i*b + (j + b - i)] holds L[i][j] for i-b <= j < i.
    let mut l = vec![Complex64::new(0.0, 0.0); n * b];
    let idx = |i: usize, j: usize| i * b + (j + b - i);

    for i in 0..n {
        let lo = i.saturating_sub(b);
        for j in lo..i {
            let mut s = a.get(i, j) * rho;
            for k in lo.max(j.saturating_sub(b))..j {
                s -= l[idx(i, k)] * l[idx(j, k)].conj() * d[k];
            }
            l[idx(i, j)] = s / d[j];
        }
        let mut di = 1.0 + rho * a.diag[i];
        for k in lo..i {
            di -= l[idx(i, k)].norm_sqr() * d[k];
        }
        if !(di >= PIVOT_TOLERANCE) {
            return Err(Error::NonPositivePivot { row: i, value: di });
        }
        d[i] = di;
    }
    Ok(d)
}

/// `ln det(I + ρA)` through [`ldl_shifted`].
pub fn log_det_shifted(a: &BandedHermitian, rho: f64) -> Result<f64> {
    Ok(ldl_shifted(a, rho)?.iter().map(|d| d.ln()).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn dense_gram(h: &BlockBandedChannel) -> Vec<Vec<Complex64>> {
        let dense = h.to_dense();
        let n = dense.len();
        let cols = h.n() * h.k();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..cols).map(|c| dense[i][c] * dense[j][c].conj()).sum())
                    .collect()
            })
            .collect()
    }

    #[test]
    fn zero_side_gains_give_diagonal_channel() {
        let params =
            ChannelParams::wyner_iid(3, 1, 0.0, 0.0, FadingSpec::ComplexGaussianUnit, 1.0).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let h = generate_channel(&params, &mut rng);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert_eq!(h.entry(i, j), Complex64::new(0.0, 0.0));
                }
            }
            assert!(h.entry(i, i).norm() > 0.0);
        }
        let g = gram(&h);
        for i in 0..3 {
            assert!((g.diagonal()[i] - h.entry(i, i).norm_sqr()).abs() < 1e-15);
        }
        assert!(g.subdiagonal(1).iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn deterministic_two_by_two_is_all_ones() {
        let params = ChannelParams::new(
            2,
            2,
            vec![
                Diagonal::new(-1, 1.0, FadingSpec::Deterministic),
                Diagonal::new(0, 1.0, FadingSpec::Deterministic),
                Diagonal::new(1, 1.0, FadingSpec::Deterministic),
            ],
            1.0,
        );
        // N = 2 is below the non-degeneracy bound for offsets ±1.
        assert!(params.is_err());
        let h = BlockBandedChannel::from_blocks(
            2,
            2,
            vec![-1, 0, 1],
            vec![vec![Complex64::new(1.0, 0.0); 4]; 3],
        )
        .unwrap();
        let dense = h.to_dense();
        for row in &dense {
            assert_eq!(row.len(), 4);
            assert!(row.iter().all(|z| *z == Complex64::new(1.0, 0.0)));
        }
    }

    #[test]
    fn structural_nonzero_count() {
        let params =
            ChannelParams::wyner_iid(10, 3, 0.5, 0.5, FadingSpec::ComplexGaussianUnit, 1.0)
                .unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(6);
        let h = generate_channel(&params, &mut rng);
        // Edge rows hold two blocks, interior rows three.
        assert_eq!(h.structural_nonzeros(), 3 * (2 + 2 + 8 * 3));
        let dense_nonzeros = h
            .to_dense()
            .iter()
            .flatten()
            .filter(|z| z.norm() > 0.0)
            .count();
        assert_eq!(dense_nonzeros, h.structural_nonzeros());
    }

    #[test]
    fn deterministic_gram_stencil() {
        let alpha = 0.3;
        let params =
            ChannelParams::wyner_iid(9, 1, alpha, alpha, FadingSpec::Deterministic, 1.0).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        let g = gram(&generate_channel(&params, &mut rng));
        assert_eq!(g.bandwidth(), 2);
        let i = 4;
        let row: Vec<f64> = (i - 2..=i + 2).map(|j| g.get(i, j).re).collect();
        let expect = [
            alpha * alpha,
            2.0 * alpha,
            1.0 + 2.0 * alpha * alpha,
            2.0 * alpha,
            alpha * alpha,
        ];
        for (x, y) in row.iter().zip(expect) {
            assert!((x - y).abs() < 1e-15, "{row:?}");
        }
    }

    #[test]
    fn gram_matches_dense_product() {
        let mut rng = ChaCha20Rng::seed_from_u64(8);
        for k in [1, 2, 3] {
            let params = ChannelParams::wyner(
                8,
                k,
                0.7,
                0.4,
                FadingSpec::ComplexGaussianUnit,
                FadingSpec::rician(0.5, 0.75).unwrap(),
                FadingSpec::UniformPhaseUnit,
                1.0,
            )
            .unwrap();
            let h = generate_channel(&params, &mut rng);
            let g = gram(&h);
            let dense = dense_gram(&h);
            for i in 0..8 {
                for j in 0..8 {
                    assert!((g.get(i, j) - dense[i][j]).norm() < 1e-12);
                    if i.abs_diff(j) > 2 {
                        assert!(dense[i][j].norm() < 1e-14);
                    }
                }
            }
            assert!((g.trace() - h.frobenius_norm_sqr()).abs() < 1e-12);
        }
    }

    #[test]
    fn gram_handles_wider_and_asymmetric_offsets() {
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        let params = ChannelParams::new(
            11,
            2,
            vec![
                Diagonal::new(-2, 0.5, FadingSpec::ComplexGaussianUnit),
                Diagonal::new(0, 1.0, FadingSpec::ComplexGaussianUnit),
                Diagonal::new(1, 0.8, FadingSpec::UniformPhaseUnit),
            ],
            1.0,
        )
        .unwrap();
        let h = generate_channel(&params, &mut rng);
        let g = gram(&h);
        assert_eq!(g.bandwidth(), 3);
        let dense = dense_gram(&h);
        for i in 0..11 {
            for j in 0..11 {
                assert!((g.get(i, j) - dense[i][j]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn ldl_of_diagonal_matrix() {
        let a = BandedHermitian::from_parts(vec![0.0, 1.0, 2.5, 4.0], vec![]).unwrap();
        let d = ldl_shifted(&a, 3.0).unwrap();
        assert_eq!(d, vec![1.0, 4.0, 8.5, 13.0]);
    }

    #[test]
    fn ldl_reproduces_narula_recursion() {
        let p = 2.5;
        let params = ChannelParams::two_diagonal(
            64,
            FadingSpec::ComplexGaussianUnit,
            FadingSpec::ComplexGaussianUnit,
            p,
        )
        .unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(10);
        let h = generate_channel(&params, &mut rng);
        let d = ldl_shifted(&gram(&h), p).unwrap();
        let a = |n: usize| h.entry(n, n).norm_sqr();
        let b = |n: usize| {
            if n == 0 {
                0.0
            } else {
                h.entry(n, n - 1).norm_sqr()
            }
        };
        let mut prev = 1.0 + p * a(0);
        assert!((d[0] - prev).abs() < 1e-12);
        for n in 1..64 {
            let next = 1.0 + p * a(n) + p * b(n) * (1.0 - p * a(n - 1) / prev);
            assert!((d[n] - next).abs() < 1e-12 * next);
            assert!(d[n] >= 1.0);
            prev = next;
        }
    }

    #[test]
    fn ldl_pivots_at_least_one() {
        let mut rng = ChaCha20Rng::seed_from_u64(12);
        let params =
            ChannelParams::wyner_iid(100, 2, 0.9, 0.6, FadingSpec::ComplexGaussianUnit, 1.0)
                .unwrap();
        let g = gram(&generate_channel(&params, &mut rng));
        for rho in [0.0, 0.1, 10.0, 1e4] {
            let d = ldl_shifted(&g, rho).unwrap();
            assert!(d.iter().all(|&x| x >= 1.0 - 1e-12), "rho {rho}");
        }
    }

    #[test]
    fn ldl_rejects_indefinite_input() {
        let a = BandedHermitian::from_parts(vec![-2.0, 1.0], vec![vec![Complex64::new(0.0, 0.0)]])
            .unwrap();
        assert!(matches!(
            ldl_shifted(&a, 1.0),
            Err(Error::NonPositivePivot { row: 0, .. })
        ));
        assert!(ldl_shifted(&a, -1.0).is_err());
    }

    #[test]
    fn band_dump_round_trip_and_layout() {
        let mut rng = ChaCha20Rng::seed_from_u64(13);
        let params =
            ChannelParams::wyner_iid(6, 1, 0.5, 0.5, FadingSpec::ComplexGaussianUnit, 1.0).unwrap();
        let g = gram(&generate_channel(&params, &mut rng));
        let mut buf = Vec::new();
        g.write_to(&mut buf).unwrap();
        assert_eq!(&buf[..4], b"BNDH");
        assert_eq!(u32::from_le_bytes(buf[4..8].try_into().unwrap()), 1);
        assert_eq!(u64::from_le_bytes(buf[8..16].try_into().unwrap()), 6);
        assert_eq!(u32::from_le_bytes(buf[16..20].try_into().unwrap()), 2);
        assert_eq!(buf.len(), 20 + 16 * (6 + 5 + 4));
        let back = BandedHermitian::read_from(&buf[..]).unwrap();
        assert_eq!(back, g);
        let mut bad = buf.clone();
        bad[0] = b'X';
        assert!(BandedHermitian::read_from(&bad[..]).is_err());
        assert!(BandedHermitian::read_from(&buf[..buf.len() - 3]).is_err());
    }

    #[test]
    fn params_validation() {
        let f = FadingSpec::Deterministic;
        assert!(ChannelParams::wyner_iid(0, 1, 0.5, 0.5, f, 1.0).is_err());
        assert!(ChannelParams::wyner_iid(5, 0, 0.5, 0.5, f, 1.0).is_err());
        assert!(ChannelParams::wyner_iid(5, 1, 1.5, 0.5, f, 1.0).is_err());
        assert!(ChannelParams::wyner_iid(5, 1, 0.5, 0.5, f, -1.0).is_err());
        assert!(ChannelParams::new(
            5,
            1,
            vec![Diagonal::new(0, 1.0, f), Diagonal::new(0, 0.5, f)],
            1.0
        )
        .is_err());
        let p = ChannelParams::wyner_iid(5, 4, 0.5, 0.5, f, 8.0).unwrap();
        assert_eq!(p.rho(), 2.0);
        assert_eq!(p.max_offset(), 1);
        assert_eq!(p.symmetric_wyner(), Some((0.5, f)));
    }
}
