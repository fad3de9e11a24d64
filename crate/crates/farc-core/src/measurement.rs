//! Measurement-side data processing.
//!
//! Converts calibrated power records into reflection-coefficient samples,
//! validates sample collections against the frequency x angle grid they were
//! measured on, and computes angle-averaged coefficients per frequency.
//!
//! Powers are already averaged and calibrated upstream; any consistent linear
//! unit works because only the ratio `p_r / p_ref` enters. Samples whose
//! magnitude exceeds one are kept (measurement noise can push past unity) and
//! merely flagged.

use crate::reflection::MaterialClass;
use alloc::string::String;
use alloc::vec::Vec;
use thiserror::Error;

/// Measured carrier frequencies in GHz: 220 to 320 in 10 GHz steps, minus the
/// two points (270 and 310) the sounder could not hold stable.
pub const STANDARD_FREQUENCIES_GHZ: [f64; 9] = [
    220.0, 230.0, 240.0, 250.0, 260.0, 280.0, 290.0, 300.0, 320.0,
];

/// Measured incidence angles in degrees: 10 to 80 in 10 degree steps.
pub const STANDARD_ANGLES_DEG: [f64; 8] = [10.0, 20.0, 30.0, 40.0, 50.0, 60.0, 70.0, 80.0];

/// Relative tolerance used to match sample coordinates against grid points
/// (and against each other for duplicate detection).
const GRID_MATCH_TOL: f64 = 1e-9;

/// Errors from measurement processing and dataset validation.
#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum MeasurementError {
    /// A numeric field violated its domain.
    #[error("{field} is out of domain: {value}")]
    InvalidField { field: &'static str, value: f64 },
    /// Grid construction failed.
    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),
    /// Two samples share one (frequency, angle) point.
    #[error("duplicate sample at ({frequency_ghz} GHz, {theta_deg} deg), sample index {index}")]
    DuplicateSample {
        index: usize,
        frequency_ghz: f64,
        theta_deg: f64,
    },
    /// A sample lies off the declared grid (strict mode only).
    #[error("sample at ({frequency_ghz} GHz, {theta_deg} deg) is off the declared grid, sample index {index}")]
    OffGridSample {
        index: usize,
        frequency_ghz: f64,
        theta_deg: f64,
    },
    /// A grid frequency has no samples at all (strict averaging).
    #[error("no samples at {frequency_ghz} GHz")]
    EmptyFrequencyGroup { frequency_ghz: f64 },
    /// A grid frequency is missing angle coverage (strict averaging).
    #[error("incomplete angle coverage at {frequency_ghz} GHz: {found} of {expected} angles")]
    MissingAngles {
        frequency_ghz: f64,
        expected: usize,
        found: usize,
    },
}

/// How strictly sample coordinates are held to the declared grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GridPolicy {
    /// Samples must lie on the grid; angle averages require full coverage.
    #[default]
    Strict,
    /// Off-grid samples pass through; averages use whatever is present.
    Permissive,
}

/// One calibrated power measurement with its reference and geometry.
///
/// Distances are in metres; powers in any consistent linear unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerRecord {
    frequency_ghz: f64,
    theta_deg: f64,
    p_r: f64,
    p_ref: f64,
    d_t: f64,
    d_r: f64,
    d_ref: f64,
}

impl PowerRecord {
    /// `p_r >= 0`, `p_ref > 0`, all distances `> 0`, frequency `> 0`, angle
    /// in `[0, 90)`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        frequency_ghz: f64,
        theta_deg: f64,
        p_r: f64,
        p_ref: f64,
        d_t: f64,
        d_r: f64,
        d_ref: f64,
    ) -> Result<Self, MeasurementError> {
        let check = |field: &'static str, value: f64, ok: bool| {
            if ok && value.is_finite() {
                Ok(())
            } else {
                Err(MeasurementError::InvalidField { field, value })
            }
        };
        check("frequency_ghz", frequency_ghz, frequency_ghz > 0.0)?;
        check("theta_deg", theta_deg, (0.0..90.0).contains(&theta_deg))?;
        check("p_r", p_r, p_r >= 0.0)?;
        check("p_ref", p_ref, p_ref > 0.0)?;
        check("d_t", d_t, d_t > 0.0)?;
        check("d_r", d_r, d_r > 0.0)?;
        check("d_ref", d_ref, d_ref > 0.0)?;
        Ok(Self {
            frequency_ghz,
            theta_deg,
            p_r,
            p_ref,
            d_t,
            d_r,
            d_ref,
        })
    }

    pub fn frequency_ghz(&self) -> f64 {
        self.frequency_ghz
    }

    pub fn theta_deg(&self) -> f64 {
        self.theta_deg
    }

    pub fn p_r(&self) -> f64 {
        self.p_r
    }

    pub fn p_ref(&self) -> f64 {
        self.p_ref
    }

    pub fn d_t(&self) -> f64 {
        self.d_t
    }

    pub fn d_r(&self) -> f64 {
        self.d_r
    }

    pub fn d_ref(&self) -> f64 {
        self.d_ref
    }
}

/// One measured reflection-coefficient magnitude at a (frequency, angle)
/// point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionSample {
    frequency_ghz: f64,
    theta_deg: f64,
    gamma_mag: f64,
}

impl ReflectionSample {
    /// Frequency `> 0`, angle in `[0, 90)`, magnitude finite and `>= 0`.
    /// Magnitudes above one are accepted; see [`ReflectionSample::exceeds_unity`].
    pub fn new(
        frequency_ghz: f64,
        theta_deg: f64,
        gamma_mag: f64,
    ) -> Result<Self, MeasurementError> {
        if !frequency_ghz.is_finite() || frequency_ghz <= 0.0 {
            return Err(MeasurementError::InvalidField {
                field: "frequency_ghz",
                value: frequency_ghz,
            });
        }
        if !theta_deg.is_finite() || !(0.0..90.0).contains(&theta_deg) {
            return Err(MeasurementError::InvalidField {
                field: "theta_deg",
                value: theta_deg,
            });
        }
        if !gamma_mag.is_finite() || gamma_mag < 0.0 {
            return Err(MeasurementError::InvalidField {
                field: "gamma_mag",
                value: gamma_mag,
            });
        }
        Ok(Self {
            frequency_ghz,
            theta_deg,
            gamma_mag,
        })
    }

    pub fn frequency_ghz(&self) -> f64 {
        self.frequency_ghz
    }

    pub fn theta_deg(&self) -> f64 {
        self.theta_deg
    }

    pub fn gamma_mag(&self) -> f64 {
        self.gamma_mag
    }

    /// True when the measured magnitude exceeds one. Such samples stay in the
    /// dataset (noise can push a passive measurement past unity) but callers
    /// may want to warn.
    pub fn exceeds_unity(&self) -> bool {
        self.gamma_mag > 1.0
    }
}

/// Convert one power record into a reflection sample:
/// `|Gamma| = ((d_t + d_r) / d_ref) * sqrt(p_r / p_ref)`.
///
/// Scale-invariant in the power unit and monotone in `p_r`. With the
/// reference geometry `d_t = d_r = 5 cm`, `d_ref = 10 cm` the distance ratio
/// is exactly one and the result is exactly `sqrt(p_r / p_ref)`.
pub fn gamma_from_powers(record: &PowerRecord) -> ReflectionSample {
    let gamma = (record.d_t + record.d_r) / record.d_ref * (record.p_r / record.p_ref).sqrt();
    ReflectionSample {
        frequency_ghz: record.frequency_ghz,
        theta_deg: record.theta_deg,
        gamma_mag: gamma,
    }
}

/// The expected (frequency, angle) grid of a dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementGrid {
    frequencies_ghz: Vec<f64>,
    angles_deg: Vec<f64>,
}

impl MeasurementGrid {
    /// Build a grid from frequency and angle axes. Axes are sorted
    /// ascending; they must be non-empty, within domain, and duplicate-free.
    pub fn new(
        mut frequencies_ghz: Vec<f64>,
        mut angles_deg: Vec<f64>,
    ) -> Result<Self, MeasurementError> {
        if frequencies_ghz.is_empty() || angles_deg.is_empty() {
            return Err(MeasurementError::InvalidGrid("axes must be non-empty"));
        }
        if frequencies_ghz.iter().any(|f| !f.is_finite() || *f <= 0.0) {
            return Err(MeasurementError::InvalidGrid(
                "frequencies must be positive and finite",
            ));
        }
        if angles_deg
            .iter()
            .any(|t| !t.is_finite() || !(0.0..90.0).contains(t))
        {
            return Err(MeasurementError::InvalidGrid(
                "angles must lie in [0, 90) degrees",
            ));
        }
        frequencies_ghz.sort_by(f64::total_cmp);
        angles_deg.sort_by(f64::total_cmp);
        if frequencies_ghz.windows(2).any(|w| close(w[0], w[1]))
            || angles_deg.windows(2).any(|w| close(w[0], w[1]))
        {
            return Err(MeasurementError::InvalidGrid("axes must be duplicate-free"));
        }
        Ok(Self {
            frequencies_ghz,
            angles_deg,
        })
    }

    /// The nine-frequency, eight-angle measurement grid used throughout:
    /// 220-320 GHz in 10 GHz steps minus 270 and 310, and 10-80 degrees in
    /// 10 degree steps.
    pub fn standard() -> Self {
        Self {
            frequencies_ghz: STANDARD_FREQUENCIES_GHZ.to_vec(),
            angles_deg: STANDARD_ANGLES_DEG.to_vec(),
        }
    }

    pub fn frequencies_ghz(&self) -> &[f64] {
        &self.frequencies_ghz
    }

    pub fn angles_deg(&self) -> &[f64] {
        &self.angles_deg
    }

    /// Number of (frequency, angle) points.
    pub fn len(&self) -> usize {
        self.frequencies_ghz.len() * self.angles_deg.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Iterate grid points frequency-major (all angles of the lowest
    /// frequency first).
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.frequencies_ghz
            .iter()
            .flat_map(move |&f| self.angles_deg.iter().map(move |&t| (f, t)))
    }

    pub fn contains(&self, frequency_ghz: f64, theta_deg: f64) -> bool {
        self.find_frequency(frequency_ghz).is_some() && self.find_angle(theta_deg).is_some()
    }

    fn find_frequency(&self, frequency_ghz: f64) -> Option<usize> {
        self.frequencies_ghz
            .iter()
            .position(|&f| close(f, frequency_ghz))
    }

    fn find_angle(&self, theta_deg: f64) -> Option<usize> {
        self.angles_deg.iter().position(|&t| close(t, theta_deg))
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= GRID_MATCH_TOL * a.abs().max(b.abs()).max(1.0)
}

/// A material's full collection of reflection samples on a declared grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    material_name: String,
    material_class: MaterialClass,
    grid: MeasurementGrid,
    policy: GridPolicy,
    samples: Vec<ReflectionSample>,
}

impl Dataset {
    /// Validate and assemble a dataset. Duplicate (frequency, angle) points
    /// are rejected under either policy; off-grid samples are rejected only
    /// under [`GridPolicy::Strict`]. Sample order is preserved.
    pub fn new(
        material_name: impl Into<String>,
        material_class: MaterialClass,
        grid: MeasurementGrid,
        samples: Vec<ReflectionSample>,
        policy: GridPolicy,
    ) -> Result<Self, MeasurementError> {
        if policy == GridPolicy::Strict {
            for (index, s) in samples.iter().enumerate() {
                if !grid.contains(s.frequency_ghz, s.theta_deg) {
                    return Err(MeasurementError::OffGridSample {
                        index,
                        frequency_ghz: s.frequency_ghz,
                        theta_deg: s.theta_deg,
                    });
                }
            }
        }
        // Duplicate detection: sort indices by coordinates, compare neighbours.
        let mut order: Vec<usize> = (0..samples.len()).collect();
        order.sort_by(|&i, &j| {
            samples[i]
                .frequency_ghz
                .total_cmp(&samples[j].frequency_ghz)
                .then(samples[i].theta_deg.total_cmp(&samples[j].theta_deg))
        });
        for w in order.windows(2) {
            let (a, b) = (&samples[w[0]], &samples[w[1]]);
            if close(a.frequency_ghz, b.frequency_ghz) && close(a.theta_deg, b.theta_deg) {
                let index = w[0].max(w[1]);
                return Err(MeasurementError::DuplicateSample {
                    index,
                    frequency_ghz: samples[index].frequency_ghz,
                    theta_deg: samples[index].theta_deg,
                });
            }
        }
        Ok(Self {
            material_name: material_name.into(),
            material_class,
            grid,
            policy,
            samples,
        })
    }

    pub fn material_name(&self) -> &str {
        &self.material_name
    }

    pub fn material_class(&self) -> MaterialClass {
        self.material_class
    }

    pub fn grid(&self) -> &MeasurementGrid {
        &self.grid
    }

    pub fn policy(&self) -> GridPolicy {
        self.policy
    }

    pub fn samples(&self) -> &[ReflectionSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Distinct sample frequencies, ascending.
    pub fn distinct_frequencies(&self) -> Vec<f64> {
        distinct_sorted(self.samples.iter().map(|s| s.frequency_ghz))
    }

    /// Distinct sample angles, ascending.
    pub fn distinct_angles(&self) -> Vec<f64> {
        distinct_sorted(self.samples.iter().map(|s| s.theta_deg))
    }
}

fn distinct_sorted(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| close(*a, *b));
    v
}

/// Mean measured magnitude over all angles at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyMean {
    pub frequency_ghz: f64,
    pub mean_gamma_mag: f64,
    pub n_angles: usize,
}

/// Arithmetic mean of the sample magnitudes over angles, per frequency,
/// ascending in frequency.
///
/// Under [`GridPolicy::Strict`] (the dataset's own policy) every grid
/// frequency must carry a sample at every grid angle. Under
/// [`GridPolicy::Permissive`] whatever samples exist are averaged and
/// frequencies without samples are omitted.
pub fn average_over_angles(dataset: &Dataset) -> Result<Vec<FrequencyMean>, MeasurementError> {
    match dataset.policy() {
        GridPolicy::Strict => {
            let expected = dataset.grid().angles_deg().len();
            let mut out = Vec::with_capacity(dataset.grid().frequencies_ghz().len());
            for &f in dataset.grid().frequencies_ghz() {
                let group: Vec<&ReflectionSample> = dataset
                    .samples()
                    .iter()
                    .filter(|s| close(s.frequency_ghz(), f))
                    .collect();
                if group.is_empty() {
                    return Err(MeasurementError::EmptyFrequencyGroup { frequency_ghz: f });
                }
                if group.len() != expected {
                    return Err(MeasurementError::MissingAngles {
                        frequency_ghz: f,
                        expected,
                        found: group.len(),
                    });
                }
                let sum: f64 = group.iter().map(|s| s.gamma_mag()).sum();
                out.push(FrequencyMean {
                    frequency_ghz: f,
                    mean_gamma_mag: sum / group.len() as f64,
                    n_angles: group.len(),
                });
            }
            Ok(out)
        }
        GridPolicy::Permissive => {
            let mut out = Vec::new();
            for f in dataset.distinct_frequencies() {
                let group: Vec<&ReflectionSample> = dataset
                    .samples()
                    .iter()
                    .filter(|s| close(s.frequency_ghz(), f))
                    .collect();
                let sum: f64 = group.iter().map(|s| s.gamma_mag()).sum();
                out.push(FrequencyMean {
                    frequency_ghz: f,
                    mean_gamma_mag: sum / group.len() as f64,
                    n_angles: group.len(),
                });
            }
            Ok(out)
        }
    }
}
