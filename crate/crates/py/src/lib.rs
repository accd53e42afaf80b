//! Python bindings for the acrawler texture toolkit.
//!
//! Built as the `acrawler` extension module (see `pyproject.toml`). Images
//! cross the boundary as `GrayImage` objects; features and curves come back
//! as plain lists.

use std::path::PathBuf;

use acrawler::crawler::{self, Placement};
use acrawler::descriptors;
use acrawler::imgio::{self, SynthParams, TextureKind};
use acrawler::ml::{self, LdaConfig};
use acrawler::{Direction, Error, Kernel};
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyBytes, PyDict};

fn to_py(err: Error) -> PyErr {
    match err {
        Error::Io { .. } => PyOSError::new_err(err.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn parse<T: std::str::FromStr>(value: &str) -> PyResult<T>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e: T::Err| PyValueError::new_err(e.to_string()))
}

fn parse_direction(value: &str) -> PyResult<Direction> {
    match value {
        "max" => Ok(Direction::Max),
        "min" => Ok(Direction::Min),
        other => Err(PyValueError::new_err(format!("direction must be 'max' or 'min', got {other:?}"))),
    }
}

/// 8-bit grayscale image stored row-major.
#[pyclass(name = "GrayImage", module = "acrawler", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGrayImage {
    inner: imgio::GrayImage,
}

#[pymethods]
impl PyGrayImage {
    #[new]
    fn new(width: usize, height: usize, pixels: Vec<u8>) -> PyResult<Self> {
        let inner = imgio::GrayImage::new(width, height, pixels).map_err(to_py)?;
        Ok(PyGrayImage { inner })
    }

    #[staticmethod]
    fn constant(width: usize, height: usize, value: u8) -> PyResult<Self> {
        let inner = imgio::GrayImage::constant(width, height, value).map_err(to_py)?;
        Ok(PyGrayImage { inner })
    }

    #[getter]
    fn width(&self) -> usize {
        self.inner.width()
    }

    #[getter]
    fn height(&self) -> usize {
        self.inner.height()
    }

    #[getter]
    fn pixels<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, self.inner.pixels())
    }

    fn get(&self, x: usize, y: usize) -> PyResult<u8> {
        if x >= self.inner.width() || y >= self.inner.height() {
            return Err(PyValueError::new_err(format!("pixel ({x}, {y}) is outside the image")));
        }
        Ok(self.inner.get(x, y))
    }

    fn inverted(&self) -> Self {
        PyGrayImage {
            inner: self.inner.inverted(),
        }
    }

    fn to_pgm<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, &self.inner.to_pgm())
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("GrayImage(width={}, height={})", self.inner.width(), self.inner.height())
    }
}

/// Decodes PNG or binary PGM bytes.
#[pyfunction]
fn load_gray(data: &[u8]) -> PyResult<PyGrayImage> {
    let inner = imgio::load_gray(data).map_err(to_py)?;
    Ok(PyGrayImage { inner })
}

#[pyfunction]
fn load_gray_file(path: PathBuf) -> PyResult<PyGrayImage> {
    let inner = imgio::load_gray_file(&path).map_err(to_py)?;
    Ok(PyGrayImage { inner })
}

/// Deterministic synthetic texture: `grating`, `checker`, `noise` or `plateau`.
#[pyfunction]
#[pyo3(signature = (kind, width, height, *, frequency=0.1, angle=0.0, low=0, high=255, period=1, value=128, noise=0.0, seed=0))]
#[allow(clippy::too_many_arguments)]
fn synth_texture(
    kind: &str,
    width: usize,
    height: usize,
    frequency: f64,
    angle: f64,
    low: u8,
    high: u8,
    period: usize,
    value: u8,
    noise: f64,
    seed: u64,
) -> PyResult<PyGrayImage> {
    let kind: TextureKind = parse(kind)?;
    let params = SynthParams {
        frequency,
        angle,
        low,
        high,
        period,
        value,
        noise,
        seed,
    };
    let inner = imgio::synth_texture(kind, &params, width, height).map_err(to_py)?;
    Ok(PyGrayImage { inner })
}

/// Crawler evolution parameters. `kernel` is `max`, `min` or `both`;
/// `placement` is `random` or `all-pixels`.
#[pyclass(name = "CrawlerConfig", module = "acrawler", get_all, set_all, skip_from_py_object)]
#[derive(Clone)]
struct PyCrawlerConfig {
    initial_energy: f64,
    min_energy: f64,
    max_energy: f64,
    energy_per_step: f64,
    absorption: f64,
    n_agents: usize,
    t_max: usize,
    kernel: String,
    placement: String,
    seed: u64,
}

impl PyCrawlerConfig {
    fn to_core(&self) -> PyResult<crawler::CrawlerConfig> {
        let kernel: Kernel = parse(&self.kernel)?;
        let placement: Placement = parse(&self.placement)?;
        let config = crawler::CrawlerConfig {
            initial_energy: self.initial_energy,
            min_energy: self.min_energy,
            max_energy: self.max_energy,
            energy_per_step: self.energy_per_step,
            absorption: self.absorption,
            n_agents: self.n_agents,
            t_max: self.t_max,
            kernel,
            placement,
            seed: self.seed,
        };
        config.validate().map_err(to_py)?;
        Ok(config)
    }
}

#[pymethods]
impl PyCrawlerConfig {
    #[new]
    #[pyo3(signature = (*, initial_energy=10.0, min_energy=1.0, max_energy=12.0, energy_per_step=1.0, absorption=0.01, n_agents=1000, t_max=41, kernel="both", placement="random", seed=0))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        initial_energy: f64,
        min_energy: f64,
        max_energy: f64,
        energy_per_step: f64,
        absorption: f64,
        n_agents: usize,
        t_max: usize,
        kernel: &str,
        placement: &str,
        seed: u64,
    ) -> PyResult<Self> {
        let config = PyCrawlerConfig {
            initial_energy,
            min_energy,
            max_energy,
            energy_per_step,
            absorption,
            n_agents,
            t_max,
            kernel: kernel.to_string(),
            placement: placement.to_string(),
            seed,
        };
        config.to_core()?;
        Ok(config)
    }

    fn digest(&self) -> PyResult<String> {
        Ok(self.to_core()?.digest())
    }

    fn __repr__(&self) -> PyResult<String> {
        Ok(format!("CrawlerConfig({})", self.digest()?))
    }
}

/// Runs one direction. Returns `(counts, agents)` where each agent is
/// `(x, y, energy, alive)`.
#[pyfunction]
#[pyo3(signature = (image, config, direction="max"))]
#[allow(clippy::type_complexity)]
fn evolve(
    py: Python<'_>,
    image: &PyGrayImage,
    config: &PyCrawlerConfig,
    direction: &str,
) -> PyResult<(Vec<usize>, Vec<(usize, usize, f64, bool)>)> {
    let cfg = config.to_core()?;
    let direction = parse_direction(direction)?;
    let evo = py
        .detach(|| crawler::evolve(&image.inner, &cfg, direction))
        .map_err(to_py)?;
    let agents = evo
        .agents
        .iter()
        .map(|a| (a.position.x, a.position.y, a.energy, a.alive))
        .collect();
    Ok((evo.curve.counts, agents))
}

/// Live-agent curves for every direction of the configured kernel, keyed
/// by `"max"` / `"min"`. Both directions share one placement.
#[pyfunction]
fn curves<'py>(py: Python<'py>, image: &PyGrayImage, config: &PyCrawlerConfig) -> PyResult<Bound<'py, PyDict>> {
    let cfg = config.to_core()?;
    let curves = py.detach(|| crawler::curves(&image.inner, &cfg)).map_err(to_py)?;
    let out = PyDict::new(py);
    for c in curves {
        out.set_item(c.direction.name(), c.counts)?;
    }
    Ok(out)
}

/// Concatenated curves, divided by the agent count unless `normalized=False`.
#[pyfunction]
#[pyo3(signature = (image, config, normalized=true))]
fn signature(py: Python<'_>, image: &PyGrayImage, config: &PyCrawlerConfig, normalized: bool) -> PyResult<Vec<f64>> {
    let cfg = config.to_core()?;
    let sig = py
        .detach(|| crawler::signature(&image.inner, &cfg, normalized))
        .map_err(to_py)?;
    Ok(sig.values)
}

#[pyfunction]
#[pyo3(signature = (image, distances=vec![1, 2], levels=64))]
fn glcm_features(image: &PyGrayImage, distances: Vec<usize>, levels: usize) -> PyResult<Vec<f64>> {
    let fv = descriptors::glcm_features(&image.inner, &distances, levels).map_err(to_py)?;
    Ok(fv.values)
}

#[pyfunction]
#[pyo3(signature = (image, scales=4, orientations=6))]
fn gabor_features(py: Python<'_>, image: &PyGrayImage, scales: usize, orientations: usize) -> PyResult<Vec<f64>> {
    let fv = py
        .detach(|| descriptors::gabor_features(&image.inner, scales, orientations))
        .map_err(to_py)?;
    Ok(fv.values)
}

#[pyfunction]
#[pyo3(signature = (image, rings=32))]
fn fourier_features(image: &PyGrayImage, rings: usize) -> PyResult<Vec<f64>> {
    let fv = descriptors::fourier_features(&image.inner, rings).map_err(to_py)?;
    Ok(fv.values)
}

/// Shared-covariance linear discriminant.
#[pyclass(name = "LdaModel", module = "acrawler", frozen)]
struct PyLdaModel {
    inner: ml::LdaModel,
}

#[pymethods]
impl PyLdaModel {
    #[staticmethod]
    #[pyo3(signature = (features, labels, shrinkage=1e-4))]
    fn fit(features: Vec<Vec<f64>>, labels: Vec<usize>, shrinkage: f64) -> PyResult<Self> {
        let inner = ml::LdaModel::fit(&features, &labels, &LdaConfig { shrinkage }).map_err(to_py)?;
        Ok(PyLdaModel { inner })
    }

    #[getter]
    fn classes(&self) -> Vec<usize> {
        self.inner.classes.clone()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn scores(&self, feature: Vec<f64>) -> PyResult<Vec<f64>> {
        self.inner.scores(&feature).map_err(to_py)
    }

    fn predict(&self, feature: Vec<f64>) -> PyResult<usize> {
        Ok(self.inner.predict(&feature).map_err(to_py)?.label)
    }
}

/// Result of stratified k-fold cross-validation.
#[pyclass(name = "FoldReport", module = "acrawler", frozen, get_all)]
struct PyFoldReport {
    classes: Vec<usize>,
    fold_accuracies: Vec<f64>,
    mean: f64,
    std: f64,
    correct: usize,
    total: usize,
    confusion: Vec<Vec<usize>>,
    predictions: Vec<usize>,
    warnings: Vec<String>,
}

#[pymethods]
impl PyFoldReport {
    fn __repr__(&self) -> String {
        format!(
            "FoldReport(mean={:.4}, std={:.4}, correct={}, total={})",
            self.mean, self.std, self.correct, self.total
        )
    }
}

#[pyfunction]
#[pyo3(signature = (features, labels, folds=10, seed=0, shrinkage=1e-4))]
fn cross_validate(
    py: Python<'_>,
    features: Vec<Vec<f64>>,
    labels: Vec<usize>,
    folds: usize,
    seed: u64,
    shrinkage: f64,
) -> PyResult<PyFoldReport> {
    let r = py
        .detach(|| ml::cross_validate(&features, &labels, folds, seed, &LdaConfig { shrinkage }))
        .map_err(to_py)?;
    Ok(PyFoldReport {
        classes: r.classes,
        fold_accuracies: r.fold_accuracies,
        mean: r.mean,
        std: r.std,
        correct: r.correct,
        total: r.total,
        confusion: r.confusion,
        predictions: r.predictions,
        warnings: r.warnings,
    })
}

#[pymodule(name = "acrawler")]
fn acrawler_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGrayImage>()?;
    m.add_class::<PyCrawlerConfig>()?;
    m.add_class::<PyLdaModel>()?;
    m.add_class::<PyFoldReport>()?;
    m.add_function(wrap_pyfunction!(load_gray, m)?)?;
    m.add_function(wrap_pyfunction!(load_gray_file, m)?)?;
    m.add_function(wrap_pyfunction!(synth_texture, m)?)?;
    m.add_function(wrap_pyfunction!(evolve, m)?)?;
    m.add_function(wrap_pyfunction!(curves, m)?)?;
    m.add_function(wrap_pyfunction!(signature, m)?)?;
    m.add_function(wrap_pyfunction!(glcm_features, m)?)?;
    m.add_function(wrap_pyfunction!(gabor_features, m)?)?;
    m.add_function(wrap_pyfunction!(fourier_features, m)?)?;
    m.add_function(wrap_pyfunction!(cross_validate, m)?)?;
    Ok(())
}
