//! MFCC front-end: pre-emphasis, framing, Hamming taper, power spectrum,
//! mel filterbank, DCT-II, and regression deltas, producing 13 static
//! coefficients plus Δ and ΔΔ per frame.
//!
//! Defaults assume 16 kHz audio with 16 ms frames and an 8 ms hop, i.e. 125
//! frames per second.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Static coefficients per frame; the full vector carries three blocks.
pub const N_STATIC: usize = 13;
pub const N_FEATURES: usize = 3 * N_STATIC;

#[derive(Debug, Clone, PartialEq)]
pub struct AudioBuffer {
    samples: Vec<f64>,
    sample_rate: u32,
}

impl AudioBuffer {
    pub fn new(samples: Vec<f64>, sample_rate: u32) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::invalid("audio buffer is empty"));
        }
        if sample_rate == 0 {
            return Err(Error::invalid("sample rate must be positive"));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("audio contains non-finite samples"));
        }
        Ok(AudioBuffer { samples, sample_rate })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MfccConfig {
    /// Seconds.
    pub frame_length: f64,
    /// Seconds.
    pub hop: f64,
    pub pre_emphasis: f64,
    pub n_fft: usize,
    pub n_mels: usize,
    pub n_ceps: usize,
    pub log_floor: f64,
    /// Replace c0 with the frame log-energy.
    pub use_energy: bool,
    pub delta_window: usize,
}

impl Default for MfccConfig {
    fn default() -> Self {
        MfccConfig {
            frame_length: 0.016,
            hop: 0.008,
            pre_emphasis: 0.97,
            n_fft: 256,
            n_mels: 26,
            n_ceps: N_STATIC,
            log_floor: 1e-10,
            use_energy: true,
            delta_window: 2,
        }
    }
}

impl MfccConfig {
    pub fn frame_samples(&self, sample_rate: u32) -> usize {
        (self.frame_length * sample_rate as f64).round() as usize
    }

    pub fn hop_samples(&self, sample_rate: u32) -> usize {
        (self.hop * sample_rate as f64).round() as usize
    }

    /// Frames per second implied by the hop.
    pub fn frame_rate(&self) -> f64 {
        1.0 / self.hop
    }

    pub fn validate(&self, sample_rate: u32) -> Result<()> {
        let frame = self.frame_samples(sample_rate);
        let hop = self.hop_samples(sample_rate);
        if frame == 0 || hop == 0 {
            return Err(Error::invalid("frame and hop must span at least one sample"));
        }
        if hop > frame {
            return Err(Error::invalid("hop longer than frame"));
        }
        if !(0.0..1.0).contains(&self.pre_emphasis) {
            return Err(Error::invalid("pre-emphasis must be in [0, 1)"));
        }
        if !self.n_fft.is_power_of_two() || frame > self.n_fft {
            return Err(Error::invalid(format!(
                "n_fft {} must be a power of two ≥ frame length {frame}",
                self.n_fft
            )));
        }
        if self.n_mels < 2 || self.n_ceps == 0 || self.n_ceps > self.n_mels {
            return Err(Error::invalid("need 2 ≤ n_mels and 1 ≤ n_ceps ≤ n_mels"));
        }
        if !(self.log_floor > 0.0) {
            return Err(Error::invalid("log floor must be positive"));
        }
        if self.delta_window == 0 {
            return Err(Error::invalid("delta window must be ≥ 1"));
        }
        Ok(())
    }
}

/// Row-major frame matrix: statics, then Δ, then ΔΔ.
#[derive(Debug, Clone, PartialEq)]
pub struct MfccFrames {
    rows: Vec<Vec<f64>>,
}

impl MfccFrames {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        for r in &rows {
            if r.len() != N_FEATURES {
                return Err(Error::DimensionMismatch {
                    expected: N_FEATURES,
                    found: r.len(),
                });
            }
            if r.iter().any(|v| !v.is_finite()) {
                return Err(Error::invalid("non-finite MFCC value"));
            }
        }
        Ok(MfccFrames { rows })
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn n_frames(&self) -> usize {
        self.rows.len()
    }
}

// ---------------------------------------------------------------------------
// Stages
// ---------------------------------------------------------------------------

/// `y[t] = x[t] − α·x[t−1]`, `y[0] = x[0]`.
pub fn pre_emphasize(a: &AudioBuffer, alpha: f64) -> Result<AudioBuffer> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::invalid("pre-emphasis must be in [0, 1)"));
    }
    let x = &a.samples;
    let mut y = Vec::with_capacity(x.len());
    y.push(x[0]);
    y.extend(x.windows(2).map(|w| w[1] - alpha * w[0]));
    Ok(AudioBuffer {
        samples: y,
        sample_rate: a.sample_rate,
    })
}

/// Splits into frames of `L` samples at stride `H`. A trailing partial frame
/// is zero-padded when samples remain after the last full frame.
pub fn frame_signal(a: &AudioBuffer, cfg: &MfccConfig) -> Result<Vec<Vec<f64>>> {
    let len = cfg.frame_samples(a.sample_rate);
    let hop = cfg.hop_samples(a.sample_rate);
    if len == 0 || hop == 0 {
        return Err(Error::invalid("frame and hop must span at least one sample"));
    }
    frame_samples(&a.samples, len, hop)
}

pub(crate) fn frame_samples(x: &[f64], len: usize, hop: usize) -> Result<Vec<Vec<f64>>> {
    let n = x.len();
    if n < len {
        return Err(Error::invalid(format!(
            "signal of {n} samples shorter than one frame ({len})"
        )));
    }
    let full = 1 + (n - len) / hop;
    let mut frames: Vec<Vec<f64>> = (0..full).map(|i| x[i * hop..i * hop + len].to_vec()).collect();
    let start = full * hop;
    if !(n - len).is_multiple_of(hop) {
        let mut tail = x[start..].to_vec();
        tail.resize(len, 0.0);
        frames.push(tail);
    }
    Ok(frames)
}

/// Applies `0.54 − 0.46·cos(2πk/(N−1))`. A single-sample frame is unchanged.
pub fn hamming(frame: &[f64]) -> Vec<f64> {
    let n = frame.len();
    if n <= 1 {
        return frame.to_vec();
    }
    let denom = (n - 1) as f64;
    frame
        .iter()
        .enumerate()
        .map(|(k, &v)| v * (0.54 - 0.46 * (2.0 * PI * k as f64 / denom).cos()))
        .collect()
}

/// In-place iterative radix-2 FFT. `buf.len()` must be a power of two.
pub(crate) fn fft_in_place(buf: &mut [Complex64]) {
    let n = buf.len();
    debug_assert!(n.is_power_of_two());
    let bits = n.trailing_zeros();
    if bits == 0 {
        return;
    }
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if i < j {
            buf.swap(i, j);
        }
    }
    let mut size = 2;
    while size <= n {
        let half = size / 2;
        let step = Complex64::from_polar(1.0, -2.0 * PI / size as f64);
        for chunk in buf.chunks_mut(size) {
            let mut w = Complex64::new(1.0, 0.0);
            for k in 0..half {
                let t = w * chunk[k + half];
                chunk[k + half] = chunk[k] - t;
                chunk[k] += t;
                w *= step;
            }
        }
        size *= 2;
    }
}

/// `|DFT|²` of the zero-padded frame for bins `0..=n_fft/2`.
pub fn power_spectrum(frame: &[f64], n_fft: usize) -> Result<Vec<f64>> {
    if !n_fft.is_power_of_two() {
        return Err(Error::invalid(format!("n_fft {n_fft} is not a power of two")));
    }
    if frame.len() > n_fft {
        return Err(Error::invalid(format!(
            "frame of {} samples exceeds n_fft {n_fft}",
            frame.len()
        )));
    }
    let mut buf = vec![Complex64::new(0.0, 0.0); n_fft];
    for (b, &v) in buf.iter_mut().zip(frame) {
        b.re = v;
    }
    fft_in_place(&mut buf);
    Ok(buf[..=n_fft / 2].iter().map(|c| c.norm_sqr()).collect())
}

pub fn hz_to_mel(f: f64) -> f64 {
    2595.0 * (1.0 + f / 700.0).log10()
}

pub fn mel_to_hz(m: f64) -> f64 {
    700.0 * (10f64.powf(m / 2595.0) - 1.0)
}

/// Triangular filters on the mel scale between 0 Hz and Nyquist.
///
/// Filter `m` rises from edge `m` to a unit peak at edge `m+1` and falls to
/// zero at edge `m+2`, where the `n_mels + 2` edges are equally spaced in mel.
#[derive(Debug, Clone, PartialEq)]
pub struct MelFilterbank {
    weights: Vec<Vec<f64>>,
    edges_hz: Vec<f64>,
}

impl MelFilterbank {
    pub fn new(n_mels: usize, n_fft: usize, sample_rate: u32) -> Result<Self> {
        if n_mels < 2 {
            return Err(Error::invalid("need at least 2 mel filters"));
        }
        if !n_fft.is_power_of_two() || n_fft < 2 {
            return Err(Error::invalid("n_fft must be a power of two ≥ 2"));
        }
        let nyquist = sample_rate as f64 / 2.0;
        let top = hz_to_mel(nyquist);
        let edges_hz: Vec<f64> = (0..n_mels + 2)
            .map(|i| mel_to_hz(top * i as f64 / (n_mels + 1) as f64))
            .collect();
        let bin_hz = sample_rate as f64 / n_fft as f64;
        let n_bins = n_fft / 2 + 1;
        let weights = (0..n_mels)
            .map(|m| {
                let (lo, mid, hi) = (edges_hz[m], edges_hz[m + 1], edges_hz[m + 2]);
                (0..n_bins)
                    .map(|k| {
                        let f = k as f64 * bin_hz;
                        if f <= lo || f >= hi {
                            0.0
                        } else if f <= mid {
                            (f - lo) / (mid - lo)
                        } else {
                            (hi - f) / (hi - mid)
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(MelFilterbank { weights, edges_hz })
    }

    pub fn n_mels(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Vec<f64>] {
        &self.weights
    }

    pub fn edges_hz(&self) -> &[f64] {
        &self.edges_hz
    }

    /// Filter energies (dot products with each triangle), unfloored.
    pub fn apply(&self, spectrum: &[f64]) -> Result<Vec<f64>> {
        let n_bins = self.weights.first().map_or(0, Vec::len);
        if spectrum.len() != n_bins {
            return Err(Error::DimensionMismatch {
                expected: n_bins,
                found: spectrum.len(),
            });
        }
        Ok(self
            .weights
            .iter()
            .map(|w| w.iter().zip(spectrum).map(|(a, b)| a * b).sum())
            .collect())
    }
}

/// One-shot filterbank application; the spectrum length fixes `n_fft`.
pub fn mel_filterbank(spectrum: &[f64], n_mels: usize, sample_rate: u32) -> Result<Vec<f64>> {
    if spectrum.len() < 2 {
        return Err(Error::invalid("spectrum needs at least 2 bins"));
    }
    let n_fft = 2 * (spectrum.len() - 1);
    MelFilterbank::new(n_mels, n_fft, sample_rate)?.apply(spectrum)
}

/// Orthonormal DCT-II, first `n_ceps` coefficients.
pub fn dct_ii(input: &[f64], n_ceps: usize) -> Result<Vec<f64>> {
    let n = input.len();
    if n == 0 || n_ceps > n {
        return Err(Error::invalid(format!(
            "cannot keep {n_ceps} coefficients of a length-{n} DCT"
        )));
    }
    let nf = n as f64;
    Ok((0..n_ceps)
        .map(|k| {
            let scale = if k == 0 { (1.0 / nf).sqrt() } else { (2.0 / nf).sqrt() };
            let sum: f64 = input
                .iter()
                .enumerate()
                .map(|(i, &x)| x * (PI * k as f64 * (2 * i + 1) as f64 / (2.0 * nf)).cos())
                .sum();
            scale * sum
        })
        .collect())
}

/// Inverse of the orthonormal DCT-II (a DCT-III), full length.
pub fn idct_ii(coeffs: &[f64]) -> Vec<f64> {
    let n = coeffs.len();
    let nf = n as f64;
    (0..n)
        .map(|i| {
            coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| {
                    let scale = if k == 0 { (1.0 / nf).sqrt() } else { (2.0 / nf).sqrt() };
                    scale * c * (PI * k as f64 * (2 * i + 1) as f64 / (2.0 * nf)).cos()
                })
                .sum()
        })
        .collect()
}

/// Regression deltas `Σ_k k·(c[t+k] − c[t−k]) / (2Σk²)` with clamped edges.
pub fn deltas(frames: &[Vec<f64>], window: usize) -> Result<Vec<Vec<f64>>> {
    if window == 0 {
        return Err(Error::invalid("delta window must be ≥ 1"));
    }
    let t_max = frames.len();
    if t_max == 0 {
        return Ok(Vec::new());
    }
    let cols = frames[0].len();
    let denom = 2.0 * (1..=window).map(|k| (k * k) as f64).sum::<f64>();
    let at = |t: isize| &frames[t.clamp(0, t_max as isize - 1) as usize];
    Ok((0..t_max as isize)
        .map(|t| {
            (0..cols)
                .map(|j| {
                    (1..=window as isize)
                        .map(|k| k as f64 * (at(t + k)[j] - at(t - k)[j]))
                        .sum::<f64>()
                        / denom
                })
                .collect()
        })
        .collect())
}

/// Full pipeline. Requires `n_ceps = 13` and at least five frames of audio.
pub fn extract_39(a: &AudioBuffer, cfg: &MfccConfig) -> Result<MfccFrames> {
    cfg.validate(a.sample_rate)?;
    if cfg.n_ceps != N_STATIC {
        return Err(Error::invalid(format!(
            "39-feature extraction needs n_ceps = {N_STATIC}, got {}",
            cfg.n_ceps
        )));
    }
    let len = cfg.frame_samples(a.sample_rate);
    let hop = cfg.hop_samples(a.sample_rate);
    let min_len = len + 4 * hop;
    if a.len() < min_len {
        return Err(Error::invalid(format!(
            "audio of {} samples is too short: need ≥ {min_len} for 5 frames",
            a.len()
        )));
    }
    let emphasized = pre_emphasize(a, cfg.pre_emphasis)?;
    let frames = frame_samples(&emphasized.samples, len, hop)?;
    let bank = MelFilterbank::new(cfg.n_mels, cfg.n_fft, a.sample_rate)?;
    let statics = frames
        .iter()
        .map(|frame| {
            let spectrum = power_spectrum(&hamming(frame), cfg.n_fft)?;
            let log_mel: Vec<f64> = bank
                .apply(&spectrum)?
                .into_iter()
                .map(|e| e.max(cfg.log_floor).ln())
                .collect();
            let mut ceps = dct_ii(&log_mel, cfg.n_ceps)?;
            if cfg.use_energy {
                let energy: f64 = frame.iter().map(|v| v * v).sum();
                ceps[0] = energy.max(cfg.log_floor).ln();
            }
            Ok(ceps)
        })
        .collect::<Result<Vec<_>>>()?;
    let d1 = deltas(&statics, cfg.delta_window)?;
    let d2 = deltas(&d1, cfg.delta_window)?;
    let rows = statics
        .into_iter()
        .zip(d1)
        .zip(d2)
        .map(|((mut s, a), b)| {
            s.extend(a);
            s.extend(b);
            s
        })
        .collect();
    MfccFrames::from_rows(rows)
}

/// How the middle frames of a segment are collapsed into one vector.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StackMode {
    /// Mean of the selected frames (39 features).
    #[default]
    Average,
    /// Selected frames laid end to end (39·k features).
    Concatenate,
}

/// Index of the first of the `k` middle frames: `F/2 − k/2` (integer).
pub fn middle_window_start(n_frames: usize, k: usize) -> usize {
    n_frames / 2 - k / 2
}

/// Collapses the `k` frames around the segment midpoint into a feature vector.
pub fn middle_window_stack(frames: &MfccFrames, k: usize, mode: StackMode) -> Result<Vec<f64>> {
    let f = frames.n_frames();
    if k == 0 || f < k {
        return Err(Error::invalid(format!(
            "segment has {f} frames; need at least {k} (k ≥ 1)"
        )));
    }
    let start = middle_window_start(f, k);
    let window = &frames.rows[start..start + k];
    Ok(match mode {
        StackMode::Average => {
            let mut mean = vec![0.0; N_FEATURES];
            for row in window {
                for (m, v) in mean.iter_mut().zip(row) {
                    *m += v;
                }
            }
            mean.iter_mut().for_each(|m| *m /= k as f64);
            mean
        }
        StackMode::Concatenate => window.iter().flatten().copied().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn buf(x: Vec<f64>) -> AudioBuffer {
        AudioBuffer::new(x, 16_000).unwrap()
    }

    #[test]
    fn pre_emphasis_identity_and_constant() {
        let x = vec![0.1, -0.3, 0.5, 0.2];
        assert_eq!(pre_emphasize(&buf(x.clone()), 0.0).unwrap().samples(), &x[..]);
        let y = pre_emphasize(&buf(vec![0.5; 6]), 0.97).unwrap();
        assert_eq!(y.samples()[0], 0.5);
        for v in &y.samples()[1..] {
            assert!((v - 0.03 * 0.5).abs() < 1e-15);
        }
        assert!(pre_emphasize(&buf(x), 1.0).is_err());
    }

    #[test]
    fn one_second_frame_count() {
        let cfg = MfccConfig::default();
        assert_eq!(cfg.frame_samples(16_000), 256);
        assert_eq!(cfg.hop_samples(16_000), 128);
        let frames = frame_signal(&buf(vec![0.0; 16_000]), &cfg).unwrap();
        assert_eq!(frames.len(), 124);
        // one residual sample adds a padded frame
        let frames = frame_signal(&buf(vec![1.0; 16_001]), &cfg).unwrap();
        assert_eq!(frames.len(), 125);
        let tail = frames.last().unwrap();
        assert_eq!(tail.len(), 256);
        assert_eq!(tail.iter().filter(|&&v| v == 1.0).count(), 16_001 - 124 * 128);
    }

    #[test]
    fn exact_single_frame_and_tiling() {
        let cfg = MfccConfig::default();
        assert_eq!(frame_signal(&buf(vec![0.0; 256]), &cfg).unwrap().len(), 1);
        assert!(frame_signal(&buf(vec![0.0; 255]), &cfg).is_err());
        let x: Vec<f64> = (0..12).map(f64::from).collect();
        let frames = frame_samples(&x, 4, 4).unwrap();
        assert_eq!(frames.len(), 3);
        assert_eq!(frames.concat(), x);
    }

    #[test]
    fn hamming_endpoints_and_midpoint() {
        let w = hamming(&[1.0; 9]);
        assert!((w[0] - 0.08).abs() < 1e-15);
        assert!((w[8] - 0.08).abs() < 1e-15);
        assert!((w[4] - 1.0).abs() < 1e-15);
        let x: Vec<f64> = (0..32).map(|i| (i as f64 * 0.7).sin()).collect();
        let e0: f64 = x.iter().map(|v| v * v).sum();
        let e1: f64 = hamming(&x).iter().map(|v| v * v).sum();
        assert!(e1 <= e0);
    }

    #[test]
    fn zero_frame_spectrum() {
        let s = power_spectrum(&[0.0; 100], 128).unwrap();
        assert_eq!(s.len(), 65);
        assert!(s.iter().all(|&v| v == 0.0));
        assert!(power_spectrum(&[0.0; 200], 128).is_err());
        assert!(power_spectrum(&[0.0; 10], 100).is_err());
    }

    #[test]
    fn mel_formula() {
        assert!((hz_to_mel(700.0) - 781.172_838_748).abs() < 1e-8);
        assert!((hz_to_mel(700.0) - 781.17).abs() < 5e-3);
        assert!((mel_to_hz(hz_to_mel(1234.5)) - 1234.5).abs() < 1e-9);
    }

    #[test]
    fn filterbank_shape() {
        let bank = MelFilterbank::new(26, 512, 16_000).unwrap();
        assert_eq!(bank.n_mels(), 26);
        assert!(bank.weights().iter().flatten().all(|&w| w >= 0.0));
        let mels: Vec<f64> = bank.edges_hz().iter().map(|&f| hz_to_mel(f)).collect();
        let step = mels[1] - mels[0];
        for w in mels.windows(2) {
            assert!((w[1] - w[0] - step).abs() < 1e-9);
        }
        // triangle m spans edges m..m+2, so neighbours share half their support
        assert!((mels[0]).abs() < 1e-12);
        assert!((mels[27] - hz_to_mel(8000.0)).abs() < 1e-9);
        assert!(MelFilterbank::new(1, 512, 16_000).is_err());
    }

    #[test]
    fn dct_of_constant() {
        let c = dct_ii(&[2.0; 8], 8).unwrap();
        assert!((c[0] - 2.0 * 8f64.sqrt()).abs() < 1e-12);
        assert!(c[1..].iter().all(|v| v.abs() < 1e-12));
        assert!(dct_ii(&[1.0; 4], 5).is_err());
    }

    #[test]
    fn deltas_constant_and_ramp() {
        let flat = vec![vec![3.0, -1.0]; 7];
        for row in deltas(&flat, 2).unwrap() {
            assert_eq!(row, vec![0.0, 0.0]);
        }
        let ramp: Vec<Vec<f64>> = (0..10).map(|t| vec![t as f64]).collect();
        let d = deltas(&ramp, 2).unwrap();
        for row in &d[2..8] {
            assert!((row[0] - 1.0).abs() < 1e-15);
        }
        assert!(d[0][0] < 1.0);
        assert!(deltas(&ramp, 0).is_err());
    }

    #[test]
    fn silence_hits_the_floor() {
        let cfg = MfccConfig::default();
        let out = extract_39(&buf(vec![0.0; 4000]), &cfg).unwrap();
        let floor = cfg.log_floor.ln();
        for row in out.rows() {
            assert_eq!(row.len(), 39);
            assert!((row[0] - floor).abs() < 1e-9);
            assert!(row[1..13].iter().all(|v| v.abs() < 1e-9));
            assert!(row[13..].iter().all(|v| v.abs() < 1e-9));
        }
    }

    #[test]
    fn too_short_audio_rejected() {
        let cfg = MfccConfig::default();
        assert!(extract_39(&buf(vec![0.0; 256 + 3 * 128]), &cfg).is_err());
        assert!(extract_39(&buf(vec![0.0; 256 + 4 * 128]), &cfg).is_ok());
    }

    #[test]
    fn c0_mode_keeps_dct_coefficient() {
        let cfg = MfccConfig {
            use_energy: false,
            ..MfccConfig::default()
        };
        let out = extract_39(&buf(vec![0.0; 2000]), &cfg).unwrap();
        let expected = cfg.log_floor.ln() * (cfg.n_mels as f64).sqrt();
        assert!((out.rows()[0][0] - expected).abs() < 1e-9);
    }

    fn frames_of(n: usize) -> MfccFrames {
        MfccFrames::from_rows((0..n).map(|i| vec![i as f64; N_FEATURES]).collect()).unwrap()
    }

    #[test]
    fn middle_windows() {
        let three = frames_of(3);
        let v = middle_window_stack(&three, 3, StackMode::Average).unwrap();
        assert_eq!(v, vec![1.0; 39]);
        // 4 frames: picks {1,2,3}
        assert_eq!(middle_window_start(4, 3), 1);
        let v = middle_window_stack(&frames_of(4), 3, StackMode::Average).unwrap();
        assert_eq!(v, vec![2.0; 39]);
        let same = MfccFrames::from_rows(vec![vec![0.25; 39]; 5]).unwrap();
        assert_eq!(
            middle_window_stack(&same, 3, StackMode::Average).unwrap(),
            vec![0.25; 39]
        );
        let cat = middle_window_stack(&frames_of(5), 3, StackMode::Concatenate).unwrap();
        assert_eq!(cat.len(), 117);
        assert_eq!(cat[0], 1.0);
        assert_eq!(cat[116], 3.0);
        assert!(middle_window_stack(&frames_of(2), 3, StackMode::Average).is_err());
    }

    #[test]
    fn config_validation() {
        let cfg = MfccConfig::default();
        assert!(cfg.validate(16_000).is_ok());
        assert!((cfg.frame_rate() - 125.0).abs() < 1e-9);
        let bad = MfccConfig {
            n_fft: 128,
            ..cfg.clone()
        };
        assert!(bad.validate(16_000).is_err());
        let bad = MfccConfig {
            hop: 0.032,
            ..cfg.clone()
        };
        assert!(bad.validate(16_000).is_err());
        let bad = MfccConfig { n_ceps: 30, ..cfg };
        assert!(bad.validate(16_000).is_err());
    }
}
