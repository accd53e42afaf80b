//! Baseline texture descriptors: gray-level co-occurrence statistics, a
//! Gabor filter bank and radial Fourier energy rings, plus the crawler
//! signature wrapped in the same [`FeatureVector`] currency.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rustfft::num_complex::Complex64;
use rustfft::FftDirection;

use crate::crawler::{self, CrawlerConfig};
use crate::error::{Error, Result};
use crate::fft::{fft2, signed_bin};
use crate::imgio::GrayImage;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Acrawler,
    Glcm,
    Gabor,
    Fourier,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Acrawler => "acrawler",
            Method::Glcm => "glcm",
            Method::Gabor => "gabor",
            Method::Fourier => "fourier",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Descriptor values tagged with the method and parameters that made them.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub values: Vec<f64>,
    pub method: Method,
    pub digest: String,
}

impl FeatureVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlcmParams {
    pub distances: Vec<usize>,
    pub levels: usize,
}

impl Default for GlcmParams {
    fn default() -> Self {
        GlcmParams {
            distances: vec![1, 2],
            levels: 64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GaborParams {
    pub scales: usize,
    pub orientations: usize,
}

impl Default for GaborParams {
    fn default() -> Self {
        GaborParams {
            scales: 4,
            orientations: 6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FourierParams {
    pub rings: usize,
}

impl Default for FourierParams {
    fn default() -> Self {
        FourierParams { rings: 32 }
    }
}

/// A fully parameterised descriptor.
#[derive(Debug, Clone, PartialEq)]
pub enum Descriptor {
    Crawler { config: CrawlerConfig, normalized: bool },
    Glcm(GlcmParams),
    Gabor(GaborParams),
    Fourier(FourierParams),
}

impl Descriptor {
    pub fn method(&self) -> Method {
        match self {
            Descriptor::Crawler { .. } => Method::Acrawler,
            Descriptor::Glcm(_) => Method::Glcm,
            Descriptor::Gabor(_) => Method::Gabor,
            Descriptor::Fourier(_) => Method::Fourier,
        }
    }

    pub fn digest(&self) -> String {
        match self {
            Descriptor::Crawler { config, normalized } => {
                format!("{};norm={}", config.digest(), u8::from(*normalized))
            }
            Descriptor::Glcm(p) => {
                let d: Vec<String> = p.distances.iter().map(usize::to_string).collect();
                format!("d={};levels={}", d.join("+"), p.levels)
            }
            Descriptor::Gabor(p) => format!("scales={};orient={}", p.scales, p.orientations),
            Descriptor::Fourier(p) => format!("rings={}", p.rings),
        }
    }

    pub fn extract(&self, image: &GrayImage) -> Result<FeatureVector> {
        match self {
            Descriptor::Crawler { config, normalized } => {
                let sig = crawler::signature(image, config, *normalized)?;
                Ok(FeatureVector {
                    values: sig.values,
                    method: Method::Acrawler,
                    digest: self.digest(),
                })
            }
            Descriptor::Glcm(p) => glcm_features(image, &p.distances, p.levels),
            Descriptor::Gabor(p) => gabor_features(image, p.scales, p.orientations),
            Descriptor::Fourier(p) => fourier_features(image, p.rings),
        }
    }
}

/// Offsets for 0°, 45°, 90° and 135° at distance `d`; y grows downward.
fn glcm_offsets(d: isize) -> [(isize, isize); 4] {
    [(d, 0), (d, -d), (0, -d), (-d, -d)]
}

/// Symmetric, normalised co-occurrence matrix of `quantized` for one offset.
fn cooccurrence(quantized: &[usize], width: usize, height: usize, levels: usize, (dx, dy): (isize, isize)) -> Vec<f64> {
    let mut counts = vec![0u64; levels * levels];
    for y in 0..height as isize {
        let ny = y + dy;
        if ny < 0 || ny >= height as isize {
            continue;
        }
        for x in 0..width as isize {
            let nx = x + dx;
            if nx < 0 || nx >= width as isize {
                continue;
            }
            let a = quantized[(y as usize) * width + x as usize];
            let b = quantized[(ny as usize) * width + nx as usize];
            counts[a * levels + b] += 1;
            counts[b * levels + a] += 1;
        }
    }
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return vec![0.0; counts.len()];
    }
    counts.into_iter().map(|c| c as f64 / total as f64).collect()
}

/// Energy, contrast, correlation, homogeneity and entropy of a normalised
/// symmetric co-occurrence matrix.
fn haralick(p: &[f64], levels: usize) -> [f64; 5] {
    let mut energy = 0.0;
    let mut contrast = 0.0;
    let mut homogeneity = 0.0;
    let mut entropy = 0.0;
    let mut mean = 0.0;
    for i in 0..levels {
        for j in 0..levels {
            let v = p[i * levels + j];
            if v == 0.0 {
                continue;
            }
            let diff = (i as f64 - j as f64).powi(2);
            energy += v * v;
            contrast += diff * v;
            homogeneity += v / (1.0 + diff);
            entropy -= v * v.ln();
            mean += i as f64 * v;
        }
    }
    let mut variance = 0.0;
    let mut covariance = 0.0;
    for i in 0..levels {
        for j in 0..levels {
            let v = p[i * levels + j];
            if v == 0.0 {
                continue;
            }
            variance += (i as f64 - mean).powi(2) * v;
            covariance += (i as f64 - mean) * (j as f64 - mean) * v;
        }
    }
    // a single occupied gray level is perfectly correlated with itself
    let correlation = if variance > 1e-15 { covariance / variance } else { 1.0 };
    [energy, contrast, correlation, homogeneity, entropy]
}

/// Haralick statistics for every `(distance, angle)` pair.
///
/// Layout: for each distance, for each angle in 0°, 45°, 90°, 135°: energy,
/// contrast, correlation, homogeneity, entropy.
pub fn glcm_features(image: &GrayImage, distances: &[usize], levels: usize) -> Result<FeatureVector> {
    if !(2..=256).contains(&levels) {
        return Err(Error::Parameter(format!("quantization levels {levels} outside [2, 256]")));
    }
    if distances.is_empty() {
        return Err(Error::Parameter("at least one co-occurrence distance is required".into()));
    }
    let (w, h) = (image.width(), image.height());
    if let Some(&d) = distances.iter().find(|&&d| d == 0 || d >= w || d >= h) {
        return Err(Error::Parameter(format!("co-occurrence distance {d} invalid for a {w}x{h} image")));
    }
    let quantized: Vec<usize> = image.pixels().iter().map(|&v| v as usize * levels / 256).collect();
    let mut values = Vec::with_capacity(20 * distances.len());
    for &d in distances {
        for offset in glcm_offsets(d as isize) {
            let p = cooccurrence(&quantized, w, h, levels, offset);
            values.extend_from_slice(&haralick(&p, levels));
        }
    }
    Ok(FeatureVector {
        values,
        method: Method::Glcm,
        digest: Descriptor::Glcm(GlcmParams {
            distances: distances.to_vec(),
            levels,
        })
        .digest(),
    })
}

const GABOR_MAX_FREQUENCY: f64 = 0.3;

/// Centre frequency (cycles/pixel) of scale `s`; half-octave spacing.
pub fn gabor_frequency(scale: usize) -> f64 {
    GABOR_MAX_FREQUENCY / 2f64.sqrt().powi(scale as i32)
}

/// Gaussian width giving roughly one octave of bandwidth.
fn gabor_sigma(frequency: f64) -> f64 {
    0.56 / frequency
}

/// Half-width of the square support of a filter at `scale`.
pub fn gabor_radius(scale: usize) -> usize {
    (3.0 * gabor_sigma(gabor_frequency(scale))).ceil() as usize
}

/// Complex Gabor kernel with the DC component removed, `(2r+1)^2` taps.
fn gabor_kernel(frequency: f64, theta: f64, radius: usize) -> Vec<Complex64> {
    let sigma = gabor_sigma(frequency);
    let r = radius as isize;
    let (s, c) = theta.sin_cos();
    let mut envelope = Vec::new();
    let mut carrier = Vec::new();
    for y in -r..=r {
        for x in -r..=r {
            let (xf, yf) = (x as f64, y as f64);
            envelope.push((-(xf * xf + yf * yf) / (2.0 * sigma * sigma)).exp());
            carrier.push(Complex64::from_polar(1.0, 2.0 * PI * frequency * (xf * c + yf * s)));
        }
    }
    let env_sum: f64 = envelope.iter().sum();
    let dc: Complex64 = envelope.iter().zip(&carrier).map(|(e, w)| w * e).sum::<Complex64>() / env_sum;
    envelope
        .iter()
        .zip(&carrier)
        .map(|(e, w)| (w - dc) * (e / env_sum))
        .collect()
}

fn reflect(i: isize, n: usize) -> usize {
    if n == 1 {
        return 0;
    }
    let period = 2 * (n as isize - 1);
    let m = i.rem_euclid(period);
    if m < n as isize {
        m as usize
    } else {
        (period - m) as usize
    }
}

/// Mean and standard deviation of each filter's response magnitude.
///
/// Layout: for each scale, for each orientation `o·π/orientations`: mean,
/// standard deviation. Borders are handled by mirror reflection.
pub fn gabor_features(image: &GrayImage, scales: usize, orientations: usize) -> Result<FeatureVector> {
    if scales == 0 || orientations == 0 {
        return Err(Error::Parameter("Gabor bank needs at least one scale and one orientation".into()));
    }
    let (w, h) = (image.width(), image.height());
    let radius = gabor_radius(scales - 1);
    let side = 2 * radius + 1;
    if side > w || side > h {
        return Err(Error::Parameter(format!(
            "largest Gabor filter ({side}x{side}) exceeds the {w}x{h} image"
        )));
    }
    let (pw, ph) = (w + 2 * radius, h + 2 * radius);
    let r = radius as isize;
    let mut padded = vec![Complex64::default(); pw * ph];
    for py in 0..ph {
        let sy = reflect(py as isize - r, h);
        for px in 0..pw {
            let sx = reflect(px as isize - r, w);
            padded[py * pw + px] = Complex64::new(image.get(sx, sy) as f64, 0.0);
        }
    }
    fft2(&mut padded, pw, ph, FftDirection::Forward);

    let norm = 1.0 / (pw * ph) as f64;
    let mut values = Vec::with_capacity(2 * scales * orientations);
    for s in 0..scales {
        let freq = gabor_frequency(s);
        let kr = gabor_radius(s) as isize;
        for o in 0..orientations {
            let theta = o as f64 * PI / orientations as f64;
            let taps = gabor_kernel(freq, theta, kr as usize);
            let kside = 2 * kr + 1;
            let mut kernel = vec![Complex64::default(); pw * ph];
            for ky in -kr..=kr {
                for kx in -kr..=kr {
                    let tap = taps[((ky + kr) * kside + kx + kr) as usize];
                    let (x, y) = (kx.rem_euclid(pw as isize) as usize, ky.rem_euclid(ph as isize) as usize);
                    kernel[y * pw + x] = tap;
                }
            }
            fft2(&mut kernel, pw, ph, FftDirection::Forward);
            for (k, p) in kernel.iter_mut().zip(&padded) {
                *k *= p;
            }
            fft2(&mut kernel, pw, ph, FftDirection::Inverse);

            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            for y in 0..h {
                let row = (y + radius) * pw + radius;
                for v in &kernel[row..row + w] {
                    let m = v.norm() * norm;
                    sum += m;
                    sum_sq += m * m;
                }
            }
            let n = (w * h) as f64;
            let mean = sum / n;
            values.push(mean);
            values.push((sum_sq / n - mean * mean).max(0.0).sqrt());
        }
    }
    Ok(FeatureVector {
        values,
        method: Method::Gabor,
        digest: Descriptor::Gabor(GaborParams { scales, orientations }).digest(),
    })
}

/// Index of the radial band holding normalised frequency `radius`
/// (cycles/pixel); bands split `[0, 0.5]` evenly and the corners beyond
/// Nyquist fold into the last band.
pub fn fourier_ring(radius: f64, rings: usize) -> usize {
    ((radius / 0.5 * rings as f64).floor() as usize).min(rings - 1)
}

/// Power spectrum of the mean-subtracted image accumulated into `rings`
/// radial bands, excluding DC and normalised to sum to one.
pub fn fourier_features(image: &GrayImage, rings: usize) -> Result<FeatureVector> {
    if rings == 0 {
        return Err(Error::Parameter("at least one Fourier ring is required".into()));
    }
    let (w, h) = (image.width(), image.height());
    let mean = image.pixels().iter().map(|&v| v as f64).sum::<f64>() / image.len() as f64;
    let mut spectrum: Vec<Complex64> = image
        .pixels()
        .iter()
        .map(|&v| Complex64::new(v as f64 - mean, 0.0))
        .collect();
    fft2(&mut spectrum, w, h, FftDirection::Forward);

    let mut values = vec![0.0; rings];
    for v in 0..h {
        let fv = signed_bin(v, h) / h as f64;
        for u in 0..w {
            if u == 0 && v == 0 {
                continue;
            }
            let fu = signed_bin(u, w) / w as f64;
            values[fourier_ring(fu.hypot(fv), rings)] += spectrum[v * w + u].norm_sqr();
        }
    }
    let total: f64 = values.iter().sum();
    if total > 0.0 {
        values.iter_mut().for_each(|e| *e /= total);
    }
    Ok(FeatureVector {
        values,
        method: Method::Fourier,
        digest: Descriptor::Fourier(FourierParams { rings }).digest(),
    })
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "acrawler" => Ok(Method::Acrawler),
            "glcm" => Ok(Method::Glcm),
            "gabor" => Ok(Method::Gabor),
            "fourier" => Ok(Method::Fourier),
            other => Err(Error::Parameter(format!("unknown method {other:?}"))),
        }
    }
}
