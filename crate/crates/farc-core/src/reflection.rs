//! Reflection-coefficient models.
//!
//! Everything here evaluates the same physical picture: a plane wave hits a
//! rough material half-space at incidence angle `theta` and the complex ratio
//! of reflected to incident field amplitude is
//!
//! ```text
//! Gamma = exp(-8*(pi*sigma*cos(theta)/lambda)^2)
//!         * (cos(theta) - sqrt(delta - sin^2(theta)))
//!         / (cos(theta) + sqrt(delta - sin^2(theta)))
//! ```
//!
//! with `sigma` the surface-roughness standard deviation, `lambda = c/f` the
//! wavelength and `delta` the relative permittivity. The variants differ only
//! in where `delta` comes from:
//!
//! - [`fresnel_reflection`]: a static real `delta` (or a perfect conductor).
//! - [`farc_nonmetallic`] / [`farc_metallic`]: `delta` from the oscillator
//!   models in [`crate::dielectric`], making the coefficient a joint function
//!   of frequency and angle (the FARC models).
//! - [`statfarc_eval`]: the FARC models rewritten in four fittable constants
//!   `(a, b, c, d)` with the frequency entering as a plain GHz number.
//!
//! [`map_physical_to_statistical`] and [`recover_physical_params`] convert
//! between the physical and statistical parameter sets; the two forms agree
//! to floating-point accuracy.
//!
//! # Units
//!
//! Statistical parameters take the frequency in GHz. For the physical side to
//! match without hidden factors, oscillator parameters used by the FARC
//! operations and the mapping are expressed in rad/ns (so `omega = 2*pi*f`
//! holds with `f` in GHz), while `sigma` stays in metres. The roughness
//! coefficient `a` absorbs the GHz-vs-Hz change of `f^2` as an explicit
//! `+18` shift: `a = lg(8*pi^2*sigma^2/c^2) + 18`.
//!
//! # Branch choice
//!
//! Complex square roots use the principal branch (non-negative real part,
//! non-negative imaginary part on the cut). That corresponds to a decaying
//! transmitted wave and keeps every magnitude produced here at or below one.

use crate::dielectric::{DielectricParams, DrudeParams, LorenzParams, SPEED_OF_LIGHT};
use core::f64::consts::PI;
use num_complex::Complex;
use thiserror::Error;

/// Shift applied to the log-roughness coefficient so that `10^a * f_GHz^2`
/// reproduces `8*pi^2*sigma^2*f_Hz^2/c^2` in SI units (`f_Hz^2 = 1e18 * f_GHz^2`).
const GHZ_LOG10_SHIFT: f64 = 18.0;

/// Errors from constructing or evaluating reflection models.
#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum ReflectionError {
    /// Incidence angle outside `[0, 90)` degrees.
    #[error("incidence angle must lie in [0, 90) degrees, got {0}")]
    InvalidAngle(f64),
    /// Frequency must be positive and finite.
    #[error("frequency must be positive and finite, got {0} GHz")]
    InvalidFrequency(f64),
    /// Real relative permittivity below one (or not finite).
    #[error("real relative permittivity must be >= 1 and finite, got {0}")]
    InvalidPermittivity(f64),
    /// Negative or non-finite surface roughness.
    #[error("surface roughness must be non-negative and finite, got {0} m")]
    InvalidRoughness(f64),
    /// A statistical parameter was not finite.
    #[error("statistical parameter {name} must be finite, got {value}")]
    NonFiniteParameter { name: &'static str, value: f64 },
    /// The damping-scale coefficient `d` must be positive.
    #[error("damping-scale coefficient d must be positive and finite, got {0}")]
    InvalidDampingScale(f64),
    /// A smooth surface has no finite log-roughness coefficient; evaluate the
    /// physical model directly instead of mapping it.
    #[error("roughness must be positive to map to the statistical form; use the physical model directly for smooth surfaces")]
    SmoothSurfaceUnmappable,
    /// A zero oscillator strength has no finite log coefficient; the material
    /// is vacuum-like and reflects nothing.
    #[error("squared plasma frequency must be positive to map to the statistical form")]
    ZeroOscillatorUnmappable,
    /// Recovered oscillator parameters overflowed f64.
    #[error("statistical parameters are too extreme to recover finite physical parameters")]
    UnrecoverableParameters,
}

/// Material class of a reflection model or dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MaterialClass {
    NonMetallic,
    Metallic,
}

/// Real relative permittivity of a surface, or the ideal-conductor limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SurfacePermittivity {
    /// Finite real relative permittivity, `>= 1`.
    Real(f64),
    /// Ideal conductor: the smooth reflection coefficient is exactly `-1`.
    PerfectConductor,
}

/// A material half-space as the classical Fresnel model sees it: a real
/// permittivity (or conductor marker) plus a roughness standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialSurface {
    permittivity: SurfacePermittivity,
    roughness_sigma: f64,
}

impl MaterialSurface {
    /// `Real(delta)` requires `delta >= 1`; `roughness_sigma` is in metres,
    /// `>= 0`.
    pub fn new(
        permittivity: SurfacePermittivity,
        roughness_sigma: f64,
    ) -> Result<Self, ReflectionError> {
        if let SurfacePermittivity::Real(delta) = permittivity {
            if !delta.is_finite() || delta < 1.0 {
                return Err(ReflectionError::InvalidPermittivity(delta));
            }
        }
        if !roughness_sigma.is_finite() || roughness_sigma < 0.0 {
            return Err(ReflectionError::InvalidRoughness(roughness_sigma));
        }
        Ok(Self {
            permittivity,
            roughness_sigma,
        })
    }

    /// Dielectric surface with the given real permittivity.
    pub fn dielectric(delta: f64, roughness_sigma: f64) -> Result<Self, ReflectionError> {
        Self::new(SurfacePermittivity::Real(delta), roughness_sigma)
    }

    /// Perfectly conducting surface.
    pub fn conductor(roughness_sigma: f64) -> Result<Self, ReflectionError> {
        Self::new(SurfacePermittivity::PerfectConductor, roughness_sigma)
    }

    pub fn permittivity(&self) -> SurfacePermittivity {
        self.permittivity
    }

    /// Surface-roughness standard deviation in metres.
    pub fn roughness_sigma(&self) -> f64 {
        self.roughness_sigma
    }
}

/// Incidence angle and carrier frequency of an evaluation point.
///
/// The angle is measured from the surface normal and must lie in
/// `[0, 90)` degrees; exactly grazing incidence is ill-posed in floating
/// point (the smooth term degenerates to `0/0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncidenceGeometry {
    theta_deg: f64,
    frequency_ghz: f64,
}

impl IncidenceGeometry {
    pub fn new(theta_deg: f64, frequency_ghz: f64) -> Result<Self, ReflectionError> {
        if !theta_deg.is_finite() || !(0.0..90.0).contains(&theta_deg) {
            return Err(ReflectionError::InvalidAngle(theta_deg));
        }
        if !frequency_ghz.is_finite() || frequency_ghz <= 0.0 {
            return Err(ReflectionError::InvalidFrequency(frequency_ghz));
        }
        Ok(Self {
            theta_deg,
            frequency_ghz,
        })
    }

    pub fn theta_deg(&self) -> f64 {
        self.theta_deg
    }

    pub fn theta_rad(&self) -> f64 {
        self.theta_deg.to_radians()
    }

    pub fn frequency_ghz(&self) -> f64 {
        self.frequency_ghz
    }

    pub fn frequency_hz(&self) -> f64 {
        self.frequency_ghz * 1e9
    }

    /// Free-space wavelength `c/f` in metres.
    pub fn wavelength_m(&self) -> f64 {
        SPEED_OF_LIGHT / self.frequency_hz()
    }
}

/// The four statistical FARC constants plus the material class they fit.
///
/// `a` is the log10 roughness coefficient, `b` the log10 oscillator-strength
/// coefficient, `c` the log10 resonance coefficient (absent for metals) and
/// `d` the damping scale; all are dimensionless with the frequency in GHz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatFarcParams {
    a: f64,
    b: f64,
    c: Option<f64>,
    d: f64,
    class: MaterialClass,
}

impl StatFarcParams {
    /// Parameters for a non-metallic material; all four constants required.
    pub fn non_metallic(a: f64, b: f64, c: f64, d: f64) -> Result<Self, ReflectionError> {
        Self::validate_common(a, b, d)?;
        if !c.is_finite() {
            return Err(ReflectionError::NonFiniteParameter {
                name: "c",
                value: c,
            });
        }
        Ok(Self {
            a,
            b,
            c: Some(c),
            d,
            class: MaterialClass::NonMetallic,
        })
    }

    /// Parameters for a metallic material; the resonance coefficient `c` is
    /// structurally absent.
    pub fn metallic(a: f64, b: f64, d: f64) -> Result<Self, ReflectionError> {
        Self::validate_common(a, b, d)?;
        Ok(Self {
            a,
            b,
            c: None,
            d,
            class: MaterialClass::Metallic,
        })
    }

    fn validate_common(a: f64, b: f64, d: f64) -> Result<(), ReflectionError> {
        if !a.is_finite() {
            return Err(ReflectionError::NonFiniteParameter {
                name: "a",
                value: a,
            });
        }
        if !b.is_finite() {
            return Err(ReflectionError::NonFiniteParameter {
                name: "b",
                value: b,
            });
        }
        if !d.is_finite() || d <= 0.0 {
            return Err(ReflectionError::InvalidDampingScale(d));
        }
        Ok(())
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// `Some` for non-metallic parameters, `None` for metallic ones.
    pub fn c(&self) -> Option<f64> {
        self.c
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn material_class(&self) -> MaterialClass {
        self.class
    }
}

/// Complex reflection coefficient returned by the model evaluations.
///
/// Measurements observe the magnitude; the complex value is kept so callers
/// can inspect phase and sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionCoefficient(Complex<f64>);

impl ReflectionCoefficient {
    pub fn new(value: Complex<f64>) -> Self {
        Self(value)
    }

    pub fn value(&self) -> Complex<f64> {
        self.0
    }

    pub fn re(&self) -> f64 {
        self.0.re
    }

    pub fn im(&self) -> f64 {
        self.0.im
    }

    /// `|Gamma|`.
    pub fn magnitude(&self) -> f64 {
        self.0.norm()
    }
}

/// Rayleigh roughness attenuation `exp(-8*(pi*sigma*cos(theta)/lambda)^2)`
/// with `lambda = c/f`. Always in `(0, 1]`; monotone non-increasing in both
/// `sigma` and frequency at a fixed angle.
pub fn roughness_factor(sigma_m: f64, theta_deg: f64, frequency_ghz: f64) -> f64 {
    debug_assert!(sigma_m.is_finite() && sigma_m >= 0.0);
    debug_assert!((0.0..90.0).contains(&theta_deg));
    debug_assert!(frequency_ghz > 0.0);
    let lambda = SPEED_OF_LIGHT / (frequency_ghz * 1e9);
    let x = PI * sigma_m * theta_deg.to_radians().cos() / lambda;
    (-8.0 * x * x).exp()
}

/// Smooth (roughness-free) reflection coefficient for a complex relative
/// permittivity: `(cos(theta) - s)/(cos(theta) + s)` with
/// `s = sqrt(delta - sin^2(theta))` on the principal branch.
///
/// For any `delta` with `Re >= 1` and `Im >= 0` the branch choice keeps the
/// magnitude at or below one.
pub fn smooth_reflection(delta: Complex<f64>, theta_deg: f64) -> Complex<f64> {
    debug_assert!((0.0..90.0).contains(&theta_deg));
    let cos_t = theta_deg.to_radians().cos();
    // The radicand delta - sin^2 is evaluated as (delta - 1) + cos^2: the
    // same quantity, but exact in the vacuum limit (delta = 1 gives a zero
    // coefficient bit-for-bit) and free of cancellation near grazing where
    // delta approaches sin^2 from above.
    let radicand = Complex::new((delta.re - 1.0) + cos_t * cos_t, delta.im);
    let s = radicand.sqrt();
    (cos_t - s) / (cos_t + s)
}

/// Rough-surface Fresnel reflection coefficient for a static material surface.
///
/// For the perfect-conductor marker the smooth term is exactly `-1` (the
/// `delta -> infinity` limit); a surface with `delta = 1` reflects nothing.
pub fn fresnel_reflection(
    surface: &MaterialSurface,
    geom: &IncidenceGeometry,
) -> ReflectionCoefficient {
    let rough = roughness_factor(surface.roughness_sigma, geom.theta_deg, geom.frequency_ghz);
    let smooth = match surface.permittivity {
        SurfacePermittivity::PerfectConductor => Complex::new(-1.0, 0.0),
        SurfacePermittivity::Real(delta) => {
            smooth_reflection(Complex::new(delta, 0.0), geom.theta_deg)
        }
    };
    ReflectionCoefficient(rough * smooth)
}

/// FARC model for non-metallic materials: the Fresnel form with the
/// permittivity supplied by the bound-electron oscillator model at
/// `omega = 2*pi*f`.
///
/// `params` must be in rad/ns (see the module-level unit note); `sigma_m` is
/// the roughness standard deviation in metres.
pub fn farc_nonmetallic(
    params: &LorenzParams,
    sigma_m: f64,
    geom: &IncidenceGeometry,
) -> Result<ReflectionCoefficient, ReflectionError> {
    if !sigma_m.is_finite() || sigma_m < 0.0 {
        return Err(ReflectionError::InvalidRoughness(sigma_m));
    }
    let omega = 2.0 * PI * geom.frequency_ghz;
    let delta = params.permittivity(omega).as_complex();
    let rough = roughness_factor(sigma_m, geom.theta_deg, geom.frequency_ghz);
    Ok(ReflectionCoefficient(
        rough * smooth_reflection(delta, geom.theta_deg),
    ))
}

/// FARC model for metallic materials: the Fresnel form with the permittivity
/// supplied by the free-electron model at `omega = 2*pi*f`.
///
/// Same unit conventions as [`farc_nonmetallic`]. The geometry type already
/// guarantees `f > 0`, which keeps the evaluation away from the
/// zero-frequency pole.
pub fn farc_metallic(
    params: &DrudeParams,
    sigma_m: f64,
    geom: &IncidenceGeometry,
) -> Result<ReflectionCoefficient, ReflectionError> {
    if !sigma_m.is_finite() || sigma_m < 0.0 {
        return Err(ReflectionError::InvalidRoughness(sigma_m));
    }
    let omega = 2.0 * PI * geom.frequency_ghz;
    let delta = params
        .permittivity(omega)
        .map_err(|_| ReflectionError::InvalidFrequency(geom.frequency_ghz))?
        .as_complex();
    let rough = roughness_factor(sigma_m, geom.theta_deg, geom.frequency_ghz);
    Ok(ReflectionCoefficient(
        rough * smooth_reflection(delta, geom.theta_deg),
    ))
}

/// Statistical FARC model.
///
/// With `f` the frequency in GHz and `theta` the incidence angle:
///
/// - non-metallic: `exp(-10^a*f^2*cos^2(theta))` times the smooth term for
///   `delta = 1 + 10^b/(10^c - d*f^2 - j*f)`;
/// - metallic: the same with `delta = 1 - 10^b/(d*f^2 + j*f)`.
pub fn statfarc_eval(params: &StatFarcParams, geom: &IncidenceGeometry) -> ReflectionCoefficient {
    let f = geom.frequency_ghz;
    let cos_t = geom.theta_rad().cos();
    let rough = (-(10.0f64.powf(params.a)) * f * f * cos_t * cos_t).exp();
    let inner = match params.class {
        MaterialClass::NonMetallic => {
            let c = params.c.expect("non-metallic parameters carry c");
            10.0f64.powf(params.b) / Complex::new(10.0f64.powf(c) - params.d * f * f, -f)
        }
        MaterialClass::Metallic => -(10.0f64.powf(params.b) / Complex::new(params.d * f * f, f)),
    };
    let delta = Complex::new(1.0, 0.0) + inner;
    ReflectionCoefficient(rough * smooth_reflection(delta, geom.theta_deg))
}

/// Map physical parameters (roughness in metres, oscillator parameters in
/// rad/ns) to the statistical constants:
///
/// ```text
/// a = lg(8*pi^2*sigma^2/c^2) + 18      (the +18 absorbs f in GHz vs Hz)
/// b = lg(omega_p^2 / (2*pi*gamma))
/// c = lg(omega_0^2 / (2*pi*gamma))     (non-metallic only)
/// d = 2*pi / gamma
/// ```
///
/// Requires `sigma > 0` and `omega_p^2 > 0` so the logarithms are finite.
pub fn map_physical_to_statistical(
    sigma_m: f64,
    params: &DielectricParams,
) -> Result<StatFarcParams, ReflectionError> {
    if !sigma_m.is_finite() || sigma_m < 0.0 {
        return Err(ReflectionError::InvalidRoughness(sigma_m));
    }
    if sigma_m == 0.0 {
        return Err(ReflectionError::SmoothSurfaceUnmappable);
    }
    let a = (8.0 * PI * PI * sigma_m * sigma_m / (SPEED_OF_LIGHT * SPEED_OF_LIGHT)).log10()
        + GHZ_LOG10_SHIFT;
    match params {
        DielectricParams::Lorenz(p) => {
            if p.omega_p_sq() == 0.0 {
                return Err(ReflectionError::ZeroOscillatorUnmappable);
            }
            let b = (p.omega_p_sq() / (2.0 * PI * p.gamma())).log10();
            let c = (p.omega_0() * p.omega_0() / (2.0 * PI * p.gamma())).log10();
            let d = 2.0 * PI / p.gamma();
            StatFarcParams::non_metallic(a, b, c, d)
        }
        DielectricParams::Drude(p) => {
            if p.omega_p_sq() == 0.0 {
                return Err(ReflectionError::ZeroOscillatorUnmappable);
            }
            let b = (p.omega_p_sq() / (2.0 * PI * p.gamma())).log10();
            let d = 2.0 * PI / p.gamma();
            StatFarcParams::metallic(a, b, d)
        }
    }
}

/// Exact inverse of [`map_physical_to_statistical`] under the same unit
/// conventions:
///
/// ```text
/// gamma     = 2*pi / d                 (rad/ns)
/// omega_p^2 = 10^b * 4*pi^2 / d        ((rad/ns)^2)
/// omega_0^2 = 10^c * 4*pi^2 / d        (non-metallic only)
/// sigma     = c0 * sqrt(10^(a-18) / (8*pi^2))   (metres)
/// ```
pub fn recover_physical_params(
    params: &StatFarcParams,
) -> Result<(f64, DielectricParams), ReflectionError> {
    let gamma = 2.0 * PI / params.d;
    let omega_p_sq = 10.0f64.powf(params.b) * 4.0 * PI * PI / params.d;
    let sigma =
        SPEED_OF_LIGHT * (10.0f64.powf(params.a - GHZ_LOG10_SHIFT) / (8.0 * PI * PI)).sqrt();
    if !sigma.is_finite() || !omega_p_sq.is_finite() {
        return Err(ReflectionError::UnrecoverableParameters);
    }
    let dielectric = match params.c {
        Some(c) => {
            let omega_0 = (10.0f64.powf(c) * 4.0 * PI * PI / params.d).sqrt();
            let lorenz = LorenzParams::new(omega_p_sq, omega_0, gamma)
                .map_err(|_| ReflectionError::UnrecoverableParameters)?;
            DielectricParams::Lorenz(lorenz)
        }
        None => {
            let drude = DrudeParams::new(omega_p_sq, gamma)
                .map_err(|_| ReflectionError::UnrecoverableParameters)?;
            DielectricParams::Drude(drude)
        }
    };
    Ok((sigma, dielectric))
}
