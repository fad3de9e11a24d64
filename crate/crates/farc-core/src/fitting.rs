//! Fitting the statistical model to measured datasets.
//!
//! The objective is the root-mean-square error between modeled and measured
//! magnitudes over all (frequency, angle) samples. Measurements are
//! magnitudes, so the objective compares `|Gamma|`, never complex residuals.
//!
//! The minimizer is a derivative-free bounded simplex descent: the objective
//! passes through a complex square root whose gradient is awkward near branch
//! points, so no derivatives are used. Robustness against local minima comes
//! from a deterministic multistart over a coarse grid inside the bounds
//! (optionally augmented with seeded random starts); the best start wins,
//! ties broken by the lowest start index, so a fit is reproducible
//! bit-for-bit given its configuration.
//!
//! Internally the search minimizes the mean squared error, a smooth monotone
//! transform of the RMSE with the same minimizers; reports always state RMSE.

use crate::measurement::{Dataset, GridPolicy, MeasurementGrid, ReflectionSample};
use crate::reflection::{statfarc_eval, IncidenceGeometry, MaterialClass, StatFarcParams};
use alloc::vec;
use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use thiserror::Error;

/// Scaled-coordinate simplex diameter below which a local search is treated
/// as converged (coordinates are normalized to the bound box).
const SIMPLEX_DIAMETER_TOL: f64 = 1e-10;

/// Initial simplex step, as a fraction of each parameter's bound range.
const INITIAL_STEP: f64 = 0.15;

/// Errors from fitting operations.
#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum FitError {
    #[error("dataset is empty")]
    EmptyDataset,
    /// Parameter class and dataset class disagree.
    #[error("parameter class {params:?} does not match dataset class {dataset:?}")]
    ClassMismatch {
        params: MaterialClass,
        dataset: MaterialClass,
    },
    /// Too little data to pin down the parameters.
    #[error("under-determined fit: {0}")]
    UnderDetermined(&'static str),
    #[error("invalid fit configuration: {0}")]
    InvalidConfig(&'static str),
}

/// Box bounds for the four statistical parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamBounds {
    a: (f64, f64),
    b: (f64, f64),
    c: (f64, f64),
    d: (f64, f64),
}

impl ParamBounds {
    /// Each pair is `(lower, upper)` with `lower < upper`; the lower bound of
    /// `d` must be positive.
    pub fn new(
        a: (f64, f64),
        b: (f64, f64),
        c: (f64, f64),
        d: (f64, f64),
    ) -> Result<Self, FitError> {
        for (lo, hi) in [a, b, c, d] {
            if !lo.is_finite() || !hi.is_finite() || lo >= hi {
                return Err(FitError::InvalidConfig(
                    "bounds must be finite with lower < upper",
                ));
            }
        }
        if d.0 <= 0.0 {
            return Err(FitError::InvalidConfig("lower bound of d must be positive"));
        }
        Ok(Self { a, b, c, d })
    }

    pub fn a(&self) -> (f64, f64) {
        self.a
    }

    pub fn b(&self) -> (f64, f64) {
        self.b
    }

    pub fn c(&self) -> (f64, f64) {
        self.c
    }

    pub fn d(&self) -> (f64, f64) {
        self.d
    }
}

impl Default for ParamBounds {
    /// Wide enough to contain every bundled fitted material row.
    fn default() -> Self {
        Self {
            a: (-20.0, -10.0),
            b: (2.0, 8.0),
            c: (2.0, 6.0),
            d: (1e-4, 1.0),
        }
    }
}

/// Configuration of one fit run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitConfig {
    pub bounds: ParamBounds,
    /// Multistart grid resolution per free parameter (`k` gives `k^3` or
    /// `k^4` starts depending on the material class).
    pub starts_per_dim: usize,
    /// Additional random starts drawn uniformly inside the bounds from the
    /// seeded generator.
    pub extra_random_starts: usize,
    /// Absolute convergence tolerance on the objective spread of the simplex
    /// (the objective is the mean squared magnitude error).
    pub tolerance: f64,
    /// Iteration cap for each local search.
    pub max_iterations: usize,
    /// Seed for the random extra starts.
    pub seed: u64,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            bounds: ParamBounds::default(),
            starts_per_dim: 3,
            extra_random_starts: 0,
            tolerance: 1e-15,
            max_iterations: 1200,
            seed: 0,
        }
    }
}

impl FitConfig {
    fn validate(&self) -> Result<(), FitError> {
        if !self.tolerance.is_finite() || self.tolerance <= 0.0 {
            return Err(FitError::InvalidConfig("tolerance must be positive"));
        }
        if self.starts_per_dim == 0 {
            return Err(FitError::InvalidConfig("starts_per_dim must be at least 1"));
        }
        if self.max_iterations == 0 {
            return Err(FitError::InvalidConfig("max_iterations must be at least 1"));
        }
        Ok(())
    }
}

/// Result of a fit: the winning parameters plus diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    params: StatFarcParams,
    rmse: f64,
    residuals: Vec<f64>,
    starts_tried: usize,
    converged: bool,
    iterations: usize,
}

impl FitReport {
    pub fn params(&self) -> &StatFarcParams {
        &self.params
    }

    /// Root-mean-square error of the fitted parameters on the dataset;
    /// always equals `rmse(self.params(), dataset)` recomputed from the
    /// residuals.
    pub fn rmse(&self) -> f64 {
        self.rmse
    }

    /// Per-sample `modeled - measured` magnitudes, in dataset sample order.
    pub fn residuals(&self) -> &[f64] {
        &self.residuals
    }

    pub fn starts_tried(&self) -> usize {
        self.starts_tried
    }

    /// False when the winning local search hit its iteration cap before
    /// meeting the tolerance; the report still carries the best point found.
    pub fn converged(&self) -> bool {
        self.converged
    }

    /// Iterations spent in the winning local search (including the final
    /// polishing pass).
    pub fn iterations(&self) -> usize {
        self.iterations
    }
}

/// Per-sample `modeled - measured` magnitude residuals, in dataset order.
pub fn residuals(params: &StatFarcParams, dataset: &Dataset) -> Result<Vec<f64>, FitError> {
    if dataset.is_empty() {
        return Err(FitError::EmptyDataset);
    }
    if params.material_class() != dataset.material_class() {
        return Err(FitError::ClassMismatch {
            params: params.material_class(),
            dataset: dataset.material_class(),
        });
    }
    Ok(dataset
        .samples()
        .iter()
        .map(|s| {
            let geom = sample_geometry(s);
            statfarc_eval(params, &geom).magnitude() - s.gamma_mag()
        })
        .collect())
}

/// Root-mean-square error of the statistical model against a dataset:
/// `sqrt(mean((|Gamma_model| - gamma_measured)^2))`.
pub fn rmse(params: &StatFarcParams, dataset: &Dataset) -> Result<f64, FitError> {
    Ok(rmse_of(&residuals(params, dataset)?))
}

fn rmse_of(residuals: &[f64]) -> f64 {
    (residuals.iter().map(|r| r * r).sum::<f64>() / residuals.len() as f64).sqrt()
}

fn sample_geometry(sample: &ReflectionSample) -> IncidenceGeometry {
    IncidenceGeometry::new(sample.theta_deg(), sample.frequency_ghz())
        .expect("sample coordinates are validated at construction")
}

/// Fit the statistical parameters to a dataset by multistart simplex descent
/// on the RMSE objective.
///
/// Requires at least four samples spanning two or more distinct frequencies
/// and two or more distinct angles. Deterministic given the configuration:
/// the same dataset and config produce a bit-identical report.
pub fn fit_statfarc(dataset: &Dataset, config: &FitConfig) -> Result<FitReport, FitError> {
    config.validate()?;
    if dataset.is_empty() {
        return Err(FitError::EmptyDataset);
    }
    if dataset.len() < 4 {
        return Err(FitError::UnderDetermined(
            "at least four samples are required",
        ));
    }
    if dataset.distinct_frequencies().len() < 2 {
        return Err(FitError::UnderDetermined(
            "samples must span at least two distinct frequencies",
        ));
    }
    if dataset.distinct_angles().len() < 2 {
        return Err(FitError::UnderDetermined(
            "samples must span at least two distinct angles",
        ));
    }

    let class = dataset.material_class();
    let boxes = bound_boxes(&config.bounds, class);
    let geoms: Vec<IncidenceGeometry> = dataset.samples().iter().map(sample_geometry).collect();
    let measured: Vec<f64> = dataset.samples().iter().map(|s| s.gamma_mag()).collect();

    // Objective: mean squared magnitude error at box-scaled coordinates.
    let objective = |z: &[f64]| -> f64 {
        let params = params_from_scaled(class, &boxes, z);
        let mut sum = 0.0;
        for (geom, meas) in geoms.iter().zip(&measured) {
            let r = statfarc_eval(&params, geom).magnitude() - meas;
            sum += r * r;
        }
        sum / measured.len() as f64
    };

    let starts = multistart_points(boxes.len(), config);
    let starts_tried = starts.len();

    let mut best: Option<LocalMinimum> = None;
    for start in &starts {
        let local = simplex_descent(&objective, start, config.tolerance, config.max_iterations);
        let better = match &best {
            None => true,
            Some(b) => local.value < b.value,
        };
        if better {
            best = Some(local);
        }
    }
    let winner = best.expect("at least one start is guaranteed");

    // Polish: restart once from the winner with a fresh simplex. The local
    // search never returns worse than its starting point.
    let polished = simplex_descent(
        &objective,
        &winner.position,
        config.tolerance,
        config.max_iterations,
    );

    let params = params_from_scaled(class, &boxes, &polished.position);
    let residuals = residuals(&params, dataset)?;
    let rmse = rmse_of(&residuals);
    Ok(FitReport {
        params,
        rmse,
        residuals,
        starts_tried,
        converged: polished.converged,
        iterations: winner.iterations + polished.iterations,
    })
}

/// Synthesize a dataset from known parameters on a grid, with additive
/// Gaussian noise on the magnitude, clipped at zero from below (never from
/// above). Deterministic given the seed; samples are emitted frequency-major.
pub fn synth_dataset(
    params: &StatFarcParams,
    grid: &MeasurementGrid,
    noise_std: f64,
    seed: u64,
) -> Result<Dataset, FitError> {
    if !noise_std.is_finite() || noise_std < 0.0 {
        return Err(FitError::InvalidConfig(
            "noise_std must be non-negative and finite",
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, noise_std)
        .map_err(|_| FitError::InvalidConfig("noise_std must be a valid standard deviation"))?;
    let samples: Vec<ReflectionSample> = grid
        .points()
        .map(|(f, theta)| {
            let geom = IncidenceGeometry::new(theta, f)
                .expect("grid coordinates are validated at construction");
            let clean = statfarc_eval(params, &geom).magnitude();
            let noisy = (clean + normal.sample(&mut rng)).max(0.0);
            ReflectionSample::new(f, theta, noisy).expect("clipped magnitude is in domain")
        })
        .collect();
    Ok(Dataset::new(
        "synthetic",
        params.material_class(),
        grid.clone(),
        samples,
        GridPolicy::Strict,
    )
    .expect("grid-generated samples are on-grid and duplicate-free"))
}

/// Per-free-parameter `(lower, upper)` boxes in fit order: `a, b, [c,] d`.
fn bound_boxes(bounds: &ParamBounds, class: MaterialClass) -> Vec<(f64, f64)> {
    match class {
        MaterialClass::NonMetallic => vec![bounds.a, bounds.b, bounds.c, bounds.d],
        MaterialClass::Metallic => vec![bounds.a, bounds.b, bounds.d],
    }
}

fn params_from_scaled(class: MaterialClass, boxes: &[(f64, f64)], z: &[f64]) -> StatFarcParams {
    let x = |i: usize| boxes[i].0 + z[i] * (boxes[i].1 - boxes[i].0);
    match class {
        MaterialClass::NonMetallic => StatFarcParams::non_metallic(x(0), x(1), x(2), x(3)),
        MaterialClass::Metallic => StatFarcParams::metallic(x(0), x(1), x(2)),
    }
    .expect("in-bounds parameters satisfy the type invariants")
}

/// Deterministic multistart points in scaled coordinates: the centers of a
/// `k^n` cell grid, in lexicographic order, then any seeded random extras.
fn multistart_points(dims: usize, config: &FitConfig) -> Vec<Vec<f64>> {
    let k = config.starts_per_dim;
    let total = k.pow(dims as u32);
    let mut starts = Vec::with_capacity(total + config.extra_random_starts);
    for index in 0..total {
        let mut z = vec![0.0; dims];
        let mut rest = index;
        for slot in z.iter_mut().rev() {
            *slot = (rest % k) as f64 / k as f64 + 0.5 / k as f64;
            rest /= k;
        }
        starts.push(z);
    }
    if config.extra_random_starts > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        for _ in 0..config.extra_random_starts {
            starts.push((0..dims).map(|_| rng.random::<f64>()).collect());
        }
    }
    starts
}

struct LocalMinimum {
    position: Vec<f64>,
    value: f64,
    iterations: usize,
    converged: bool,
}

fn clamp01(z: &mut [f64]) {
    for v in z.iter_mut() {
        *v = v.clamp(0.0, 1.0);
    }
}

/// Bounded Nelder-Mead simplex descent on the unit box. Candidate points are
/// projected onto the box before evaluation. The best vertex never worsens,
/// so the result is never worse than the starting point.
fn simplex_descent(
    objective: &impl Fn(&[f64]) -> f64,
    start: &[f64],
    tolerance: f64,
    max_iterations: usize,
) -> LocalMinimum {
    const ALPHA: f64 = 1.0; // reflection
    const GAMMA: f64 = 2.0; // expansion
    const RHO: f64 = 0.5; // contraction
    const SIGMA: f64 = 0.5; // shrink

    let n = start.len();
    let mut vertices: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    let mut origin = start.to_vec();
    clamp01(&mut origin);
    vertices.push(origin.clone());
    for i in 0..n {
        let mut v = origin.clone();
        v[i] += if v[i] + INITIAL_STEP <= 1.0 {
            INITIAL_STEP
        } else {
            -INITIAL_STEP
        };
        vertices.push(v);
    }
    let mut values: Vec<f64> = vertices.iter().map(|v| objective(v)).collect();

    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iterations {
        // Ascending by objective; stable sort keeps ties deterministic.
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        vertices = order.iter().map(|&i| vertices[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let spread = values[n] - values[0];
        let diameter = (0..n)
            .map(|d| {
                let lo = vertices.iter().map(|v| v[d]).fold(f64::INFINITY, f64::min);
                let hi = vertices
                    .iter()
                    .map(|v| v[d])
                    .fold(f64::NEG_INFINITY, f64::max);
                hi - lo
            })
            .fold(0.0, f64::max);
        if spread <= tolerance || diameter <= SIMPLEX_DIAMETER_TOL {
            converged = true;
            break;
        }
        iterations += 1;

        let centroid: Vec<f64> = (0..n)
            .map(|d| vertices[..n].iter().map(|v| v[d]).sum::<f64>() / n as f64)
            .collect();
        let worst = vertices[n].clone();

        let mut reflected: Vec<f64> = (0..n)
            .map(|d| centroid[d] + ALPHA * (centroid[d] - worst[d]))
            .collect();
        clamp01(&mut reflected);
        let f_reflected = objective(&reflected);

        if f_reflected < values[0] {
            let mut expanded: Vec<f64> = (0..n)
                .map(|d| centroid[d] + GAMMA * (centroid[d] - worst[d]))
                .collect();
            clamp01(&mut expanded);
            let f_expanded = objective(&expanded);
            if f_expanded < f_reflected {
                vertices[n] = expanded;
                values[n] = f_expanded;
            } else {
                vertices[n] = reflected;
                values[n] = f_reflected;
            }
            continue;
        }
        if f_reflected < values[n - 1] {
            vertices[n] = reflected;
            values[n] = f_reflected;
            continue;
        }

        // Contract toward the better of the worst vertex and its reflection.
        let (toward, f_toward) = if f_reflected < values[n] {
            (&reflected, f_reflected)
        } else {
            (&worst, values[n])
        };
        let mut contracted: Vec<f64> = (0..n)
            .map(|d| centroid[d] + RHO * (toward[d] - centroid[d]))
            .collect();
        clamp01(&mut contracted);
        let f_contracted = objective(&contracted);
        if f_contracted < f_toward {
            vertices[n] = contracted;
            values[n] = f_contracted;
            continue;
        }

        // Shrink everything toward the best vertex.
        let best = vertices[0].clone();
        for i in 1..=n {
            for d in 0..n {
                vertices[i][d] = best[d] + SIGMA * (vertices[i][d] - best[d]);
            }
            values[i] = objective(&vertices[i]);
        }
    }

    let mut order: Vec<usize> = (0..=n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    LocalMinimum {
        position: vertices[order[0]].clone(),
        value: values[order[0]],
        iterations,
        converged,
    }
}
