//! Grayscale image decoding, class-labelled dataset ingestion and synthetic
//! textures.
//!
//! Only binary PGM (`P5`, maxval 255) and 8-bit grayscale PNG are accepted.
//! Colour or high bit-depth inputs are rejected instead of converted so that
//! every intensity is exactly the byte stored in the file.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A finite pixel grid with 8-bit intensities, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Parameter(format!(
                "image dimensions must be positive, got {width}x{height}"
            )));
        }
        if pixels.len() != width * height {
            return Err(Error::Parameter(format!(
                "{width}x{height} image needs {} pixels, got {}",
                width * height,
                pixels.len()
            )));
        }
        Ok(GrayImage {
            width,
            height,
            pixels,
        })
    }

    /// Builds an image by evaluating `f(x, y)` at every pixel.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        GrayImage::new(width, height, pixels)
    }

    pub fn constant(width: usize, height: usize, value: u8) -> Result<Self> {
        GrayImage::new(width, height, vec![value; width * height])
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    #[inline]
    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    /// Photometric negative, `255 - I(p)`.
    pub fn inverted(&self) -> GrayImage {
        GrayImage {
            width: self.width,
            height: self.height,
            pixels: self.pixels.iter().map(|&v| 255 - v).collect(),
        }
    }

    /// Rotates the image by 180 degrees.
    pub fn rotated_180(&self) -> GrayImage {
        let mut pixels = self.pixels.clone();
        pixels.reverse();
        GrayImage {
            width: self.width,
            height: self.height,
            pixels,
        }
    }

    /// Encodes as binary PGM (`P5`, maxval 255).
    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }
}

const PNG_SIGNATURE: [u8; 8] = [0x89, b'P', b'N', b'G', 0x0D, 0x0A, 0x1A, 0x0A];

/// Decodes a PGM (`P5`, maxval 255) or 8-bit grayscale PNG.
pub fn load_gray(bytes: &[u8]) -> Result<GrayImage> {
    if bytes.starts_with(&PNG_SIGNATURE) {
        return decode_png(bytes);
    }
    match bytes.get(..2) {
        Some(b"P5") => decode_pgm(bytes),
        Some([b'P', b'1'..=b'7']) => Err(Error::UnsupportedFormat(format!(
            "netpbm variant {} (only binary graymap P5 is supported)",
            String::from_utf8_lossy(&bytes[..2])
        ))),
        _ => Err(Error::Decode("unrecognised image signature".into())),
    }
}

pub fn load_gray_file(path: &Path) -> Result<GrayImage> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    load_gray(&bytes)
}

struct HeaderCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl HeaderCursor<'_> {
    fn skip_whitespace_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Decode(format!("PGM header: missing {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Decode(format!("PGM header: {what} out of range")))
    }
}

fn decode_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let mut cur = HeaderCursor { bytes, pos: 2 };
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    let maxval = cur.number("maxval")?;
    // exactly one whitespace byte separates the header from the raster
    match bytes.get(cur.pos) {
        Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
        _ => return Err(Error::Decode("PGM header: missing separator before raster".into())),
    }
    if width == 0 || height == 0 {
        return Err(Error::Decode(format!("PGM header: zero dimension {width}x{height}")));
    }
    if maxval != 255 {
        return Err(Error::UnsupportedFormat(format!("PGM maxval {maxval} (only 255 is supported)")));
    }
    let len = width
        .checked_mul(height)
        .ok_or_else(|| Error::Decode("PGM header: dimensions overflow".into()))?;
    let raster = bytes
        .get(cur.pos..cur.pos + len)
        .ok_or_else(|| Error::Decode(format!("PGM raster truncated: need {len} bytes")))?;
    GrayImage::new(width, height, raster.to_vec())
}

fn decode_png(bytes: &[u8]) -> Result<GrayImage> {
    let mut decoder = png::Decoder::new(std::io::Cursor::new(bytes));
    decoder.set_transformations(png::Transformations::IDENTITY);
    let mut reader = decoder.read_info().map_err(|e| Error::Decode(format!("PNG: {e}")))?;
    let (color, depth) = reader.output_color_type();
    if color != png::ColorType::Grayscale {
        return Err(Error::UnsupportedFormat(format!("PNG colour type {color:?}")));
    }
    if depth != png::BitDepth::Eight {
        return Err(Error::UnsupportedFormat(format!("PNG bit depth {depth:?}")));
    }
    let size = reader
        .output_buffer_size()
        .ok_or_else(|| Error::Decode("PNG: image too large".into()))?;
    let mut buf = vec![0u8; size];
    let info = reader
        .next_frame(&mut buf)
        .map_err(|e| Error::Decode(format!("PNG: {e}")))?;
    let (width, height) = (info.width as usize, info.height as usize);
    // rows may carry no padding for 8-bit gray, but stay honest about line_size
    let mut pixels = Vec::with_capacity(width * height);
    for row in buf[..info.buffer_size()].chunks(info.line_size).take(height) {
        pixels.extend_from_slice(&row[..width]);
    }
    GrayImage::new(width, height, pixels)
}

/// One image of a [`LabeledDataset`].
#[derive(Debug, Clone)]
pub struct Sample {
    pub path: PathBuf,
    pub label: String,
    pub image: GrayImage,
}

/// Images grouped by class, one subdirectory per class.
#[derive(Debug, Clone, Default)]
pub struct LabeledDataset {
    pub samples: Vec<Sample>,
    /// Distinct labels, sorted lexicographically.
    pub classes: Vec<String>,
    /// Skipped files and empty classes encountered while loading.
    pub warnings: Vec<String>,
}

impl LabeledDataset {
    /// Builds a dataset from in-memory samples; classes are the sorted
    /// distinct labels.
    pub fn from_samples(samples: Vec<Sample>) -> Self {
        let mut classes: Vec<String> = samples.iter().map(|s| s.label.clone()).collect();
        classes.sort();
        classes.dedup();
        LabeledDataset {
            samples,
            classes,
            warnings: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Class index of every sample, in sample order.
    pub fn label_indices(&self) -> Vec<usize> {
        self.samples
            .iter()
            .map(|s| {
                self.classes
                    .binary_search(&s.label)
                    .expect("sample label missing from class list")
            })
            .collect()
    }

    pub fn images(&self) -> impl Iterator<Item = &GrayImage> {
        self.samples.iter().map(|s| &s.image)
    }
}

fn sorted_entries(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut entries = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .map(|entry| entry.map(|e| e.path()).map_err(|e| Error::io(dir, e)))
        .collect::<Result<Vec<_>>>()?;
    entries.sort();
    Ok(entries)
}

/// Loads every decodable image under `root/<class>/`.
///
/// Files that fail to decode and classes without any image are skipped and
/// reported in [`LabeledDataset::warnings`].
pub fn load_dataset(root: &Path) -> Result<LabeledDataset> {
    let mut samples = Vec::new();
    let mut warnings = Vec::new();
    for class_dir in sorted_entries(root)? {
        if !class_dir.is_dir() {
            warnings.push(format!("{}: not a class directory, skipped", class_dir.display()));
            continue;
        }
        let label = class_dir
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        let before = samples.len();
        for path in sorted_entries(&class_dir)? {
            if !path.is_file() {
                warnings.push(format!("{}: not a file, skipped", path.display()));
                continue;
            }
            match load_gray_file(&path) {
                Ok(image) => samples.push(Sample {
                    path,
                    label: label.clone(),
                    image,
                }),
                Err(e) => warnings.push(format!("{}: {e}, skipped", path.display())),
            }
        }
        if samples.len() == before {
            warnings.push(format!("class {label:?} has no decodable images, skipped"));
        }
    }
    if samples.is_empty() {
        return Err(Error::EmptyDataset(root.to_path_buf()));
    }
    for w in &warnings {
        log::warn!("{w}");
    }
    let mut dataset = LabeledDataset::from_samples(samples);
    dataset.warnings = warnings;
    Ok(dataset)
}

/// Synthetic texture families used as stand-ins for real texture corpora.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TextureKind {
    /// Sinusoidal grating with optional per-pixel noise.
    Grating,
    /// Checkerboard of `period`-sized cells.
    Checker,
    /// Uniform i.i.d. noise.
    Noise,
    /// Constant image.
    Plateau,
}

impl FromStr for TextureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "grating" => Ok(TextureKind::Grating),
            "checker" => Ok(TextureKind::Checker),
            "noise" => Ok(TextureKind::Noise),
            "plateau" => Ok(TextureKind::Plateau),
            other => Err(Error::Parameter(format!("unknown texture kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthParams {
    /// Grating frequency in cycles per pixel.
    pub frequency: f64,
    /// Grating orientation in radians; 0 varies along x.
    pub angle: f64,
    /// Intensity range `[low, high]` covered by grating, checker and noise.
    pub low: u8,
    pub high: u8,
    /// Checker cell size in pixels.
    pub period: usize,
    /// Plateau intensity.
    pub value: u8,
    /// Fraction of uniform noise mixed into a grating, in `[0, 1]`.
    pub noise: f64,
    /// Drives grating phase and noise.
    pub seed: u64,
}

impl Default for SynthParams {
    fn default() -> Self {
        SynthParams {
            frequency: 0.1,
            angle: 0.0,
            low: 0,
            high: 255,
            period: 1,
            value: 128,
            noise: 0.0,
            seed: 0,
        }
    }
}

/// Generates a deterministic synthetic texture.
pub fn synth_texture(kind: TextureKind, params: &SynthParams, width: usize, height: usize) -> Result<GrayImage> {
    if width == 0 || height == 0 {
        return Err(Error::Parameter(format!("texture size must be positive, got {width}x{height}")));
    }
    if params.low > params.high {
        return Err(Error::Parameter(format!(
            "amplitude range [{}, {}] is empty",
            params.low, params.high
        )));
    }
    let (low, high) = (params.low as f64, params.high as f64);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    match kind {
        TextureKind::Plateau => GrayImage::constant(width, height, params.value),
        TextureKind::Checker => {
            if params.period == 0 {
                return Err(Error::Parameter("checker period must be positive".into()));
            }
            let p = params.period;
            GrayImage::from_fn(width, height, |x, y| {
                if (x / p + y / p) % 2 == 0 {
                    params.low
                } else {
                    params.high
                }
            })
        }
        TextureKind::Noise => GrayImage::from_fn(width, height, |_, _| rng.random_range(params.low..=params.high)),
        TextureKind::Grating => {
            if !(params.frequency.is_finite() && params.frequency > 0.0) {
                return Err(Error::Parameter(format!("grating frequency {} must be positive", params.frequency)));
            }
            if !(0.0..=1.0).contains(&params.noise) {
                return Err(Error::Parameter(format!("noise fraction {} outside [0, 1]", params.noise)));
            }
            let phase = rng.random_range(0.0..2.0 * PI);
            let (s, c) = params.angle.sin_cos();
            let k = 2.0 * PI * params.frequency;
            GrayImage::from_fn(width, height, |x, y| {
                let wave = 0.5 + 0.5 * (k * (x as f64 * c + y as f64 * s) + phase).cos();
                let mixed = if params.noise > 0.0 {
                    (1.0 - params.noise) * wave + params.noise * rng.random::<f64>()
                } else {
                    wave
                };
                (low + (high - low) * mixed).round().clamp(low, high) as u8
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decodes_small_pgm() {
        let mut bytes = b"P5 2 2 255\n".to_vec();
        bytes.extend_from_slice(&[0, 255, 7, 9]);
        let img = load_gray(&bytes).unwrap();
        assert_eq!((img.width(), img.height()), (2, 2));
        assert_eq!(img.pixels(), &[0, 255, 7, 9]);
    }

    #[test]
    fn decodes_single_pixel() {
        let img = load_gray(b"P5\n1 1\n255\n\x80").unwrap();
        assert_eq!(img.pixels(), &[128]);
    }

    #[test]
    fn header_comments_are_skipped() {
        let img = load_gray(b"P5\n# made by hand\n2 1\n# depth\n255\n\x01\x02").unwrap();
        assert_eq!(img.pixels(), &[1, 2]);
    }

    #[test]
    fn sixteen_bit_pgm_is_unsupported() {
        let bytes = b"P5 1 1 65535\n\x00\x00";
        assert!(matches!(load_gray(bytes), Err(Error::UnsupportedFormat(_))));
    }

    #[test]
    fn colour_pnm_is_unsupported() {
        assert!(matches!(load_gray(b"P6 1 1 255\n\x00\x00\x00"), Err(Error::UnsupportedFormat(_))));
    }

    #[test]
    fn malformed_headers() {
        for bad in [&b"P5 2 255\n"[..], b"P5 x 2 255\n", b"P5 2 2 255\n\x00", b"P5 0 2 255\n", b"GIF89a", b""] {
            assert!(matches!(load_gray(bad), Err(Error::Decode(_))), "{:?}", String::from_utf8_lossy(bad));
        }
    }

    fn encode_png(width: u32, height: u32, color: png::ColorType, depth: png::BitDepth, data: &[u8]) -> Vec<u8> {
        let mut out = Vec::new();
        {
            let mut enc = png::Encoder::new(&mut out, width, height);
            enc.set_color(color);
            enc.set_depth(depth);
            let mut writer = enc.write_header().unwrap();
            writer.write_image_data(data).unwrap();
        }
        out
    }

    #[test]
    fn decodes_gray_png() {
        let data: Vec<u8> = (0..12).map(|v| v * 20).collect();
        let bytes = encode_png(4, 3, png::ColorType::Grayscale, png::BitDepth::Eight, &data);
        let img = load_gray(&bytes).unwrap();
        assert_eq!((img.width(), img.height()), (4, 3));
        assert_eq!(img.pixels(), &data[..]);
    }

    #[test]
    fn rejects_rgb_and_deep_png() {
        let rgb = encode_png(1, 1, png::ColorType::Rgb, png::BitDepth::Eight, &[1, 2, 3]);
        assert!(matches!(load_gray(&rgb), Err(Error::UnsupportedFormat(_))));
        let deep = encode_png(1, 1, png::ColorType::Grayscale, png::BitDepth::Sixteen, &[1, 2]);
        assert!(matches!(load_gray(&deep), Err(Error::UnsupportedFormat(_))));
    }

    #[test]
    fn plateau_and_checker() {
        let p = SynthParams {
            value: 100,
            ..Default::default()
        };
        let img = synth_texture(TextureKind::Plateau, &p, 4, 4).unwrap();
        assert!(img.pixels().iter().all(|&v| v == 100));

        let img = synth_texture(TextureKind::Checker, &SynthParams::default(), 2, 2).unwrap();
        assert_eq!(img.pixels(), &[0, 255, 255, 0]);
    }

    #[test]
    fn unknown_kind() {
        assert!(matches!("zebra".parse::<TextureKind>(), Err(Error::Parameter(_))));
        assert_eq!("grating".parse::<TextureKind>().unwrap(), TextureKind::Grating);
    }

    #[test]
    fn grating_frequency_changes_pixels() {
        let f = SynthParams {
            frequency: 0.05,
            seed: 3,
            ..Default::default()
        };
        let f2 = SynthParams {
            frequency: 0.1,
            ..f.clone()
        };
        let a = synth_texture(TextureKind::Grating, &f, 32, 32).unwrap();
        let b = synth_texture(TextureKind::Grating, &f2, 32, 32).unwrap();
        let differing = a.pixels().iter().zip(b.pixels()).filter(|(x, y)| x != y).count();
        assert!(differing * 10 >= a.len(), "only {differing} of {} pixels differ", a.len());
    }

    #[test]
    fn grating_stays_in_amplitude_range() {
        let p = SynthParams {
            frequency: 0.13,
            angle: 0.7,
            low: 40,
            high: 200,
            noise: 0.2,
            seed: 9,
            ..Default::default()
        };
        let img = synth_texture(TextureKind::Grating, &p, 40, 40).unwrap();
        let (lo, hi) = img.pixels().iter().fold((255u8, 0u8), |(l, h), &v| (l.min(v), h.max(v)));
        assert!(lo >= 40 && hi <= 200);
        assert!(hi - lo > 100);
        assert_eq!(img, synth_texture(TextureKind::Grating, &p, 40, 40).unwrap());
    }

    #[test]
    fn rejects_bad_dimensions() {
        assert!(GrayImage::new(0, 3, vec![]).is_err());
        assert!(GrayImage::new(2, 2, vec![0; 3]).is_err());
    }
}
