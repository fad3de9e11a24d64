//! Frequency-dependent complex relative permittivity models.
//!
//! Two single-resonance models are provided: a bound-electron oscillator
//! (non-metallic materials) and a free-electron model (metals). Both are
//! homogeneous in angular frequency: the oscillator parameters and the
//! evaluation frequency only have to share one angular unit (rad/s, rad/ns,
//! ...), and the resulting permittivity is dimensionless either way. The
//! conversion `omega = 2*pi*f` lives in callers.

use num_complex::Complex;
use thiserror::Error;

/// Elementary charge (C).
pub const ELEMENTARY_CHARGE: f64 = 1.6e-19;

/// Electron mass (kg).
pub const ELECTRON_MASS: f64 = 9.3e-31;

/// Permittivity of free space (F/m).
pub const VACUUM_PERMITTIVITY: f64 = 8.85e-12;

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 2.998e8;

/// The bundle of physical constants used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Elementary charge (C).
    pub e: f64,
    /// Electron mass (kg).
    pub m: f64,
    /// Permittivity of free space (F/m).
    pub eps0: f64,
    /// Speed of light in vacuum (m/s).
    pub c: f64,
}

impl PhysicalConstants {
    /// The fixed constants used by every operation in this crate.
    pub const fn standard() -> Self {
        Self {
            e: ELEMENTARY_CHARGE,
            m: ELECTRON_MASS,
            eps0: VACUUM_PERMITTIVITY,
            c: SPEED_OF_LIGHT,
        }
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::standard()
    }
}

/// Errors from constructing or evaluating dielectric models.
#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum DielectricError {
    /// Electron density fed to [`plasma_frequency_sq`] was negative or not finite.
    #[error("electron density must be non-negative and finite, got {0}")]
    InvalidElectronDensity(f64),
    /// An oscillator parameter violated its domain.
    #[error("invalid oscillator parameter: {0}")]
    InvalidParameter(&'static str),
    /// The free-electron model has a pole at zero frequency.
    #[error("frequency must be positive and finite (free-electron pole at zero), got {0}")]
    NonPositiveFrequency(f64),
}

/// Complex relative permittivity (dimensionless).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexPermittivity {
    /// Real part.
    pub re: f64,
    /// Imaginary part.
    pub im: f64,
}

impl ComplexPermittivity {
    pub fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    pub fn as_complex(self) -> Complex<f64> {
        Complex::new(self.re, self.im)
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl From<Complex<f64>> for ComplexPermittivity {
    fn from(value: Complex<f64>) -> Self {
        Self::new(value.re, value.im)
    }
}

/// Squared plasma angular frequency `N*e^2 / (m*eps0)` for an electron
/// density `N` in electrons per cubic metre. Result is in (rad/s)^2.
pub fn plasma_frequency_sq(electron_density: f64) -> Result<f64, DielectricError> {
    if !electron_density.is_finite() || electron_density < 0.0 {
        return Err(DielectricError::InvalidElectronDensity(electron_density));
    }
    Ok(electron_density * ELEMENTARY_CHARGE * ELEMENTARY_CHARGE
        / (ELECTRON_MASS * VACUUM_PERMITTIVITY))
}

/// Bound-electron (resonant) oscillator parameters for non-metallic materials.
///
/// All three values must be expressed in one consistent angular-frequency
/// unit; [`LorenzParams::permittivity`] expects its argument in that same
/// unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorenzParams {
    omega_p_sq: f64,
    omega_0: f64,
    gamma: f64,
}

impl LorenzParams {
    /// `omega_p_sq >= 0`, `omega_0 > 0`, `gamma > 0`, all finite.
    pub fn new(omega_p_sq: f64, omega_0: f64, gamma: f64) -> Result<Self, DielectricError> {
        if !omega_p_sq.is_finite() || omega_p_sq < 0.0 {
            return Err(DielectricError::InvalidParameter(
                "squared plasma frequency must be non-negative and finite",
            ));
        }
        if !omega_0.is_finite() || omega_0 <= 0.0 {
            return Err(DielectricError::InvalidParameter(
                "resonant frequency must be positive and finite",
            ));
        }
        if !gamma.is_finite() || gamma <= 0.0 {
            return Err(DielectricError::InvalidParameter(
                "damping constant must be positive and finite",
            ));
        }
        Ok(Self {
            omega_p_sq,
            omega_0,
            gamma,
        })
    }

    /// Squared plasma angular frequency.
    pub fn omega_p_sq(&self) -> f64 {
        self.omega_p_sq
    }

    /// Resonant angular frequency.
    pub fn omega_0(&self) -> f64 {
        self.omega_0
    }

    /// Damping constant (angular frequency).
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Relative permittivity `1 + omega_p^2 / (omega_0^2 - omega^2 - j*gamma*omega)`
    /// at angular frequency `omega >= 0`.
    ///
    /// The denominator never vanishes for `gamma > 0`: it is real and positive
    /// at `omega = 0` and has a strictly negative imaginary part for
    /// `omega > 0`.
    pub fn permittivity(&self, omega: f64) -> ComplexPermittivity {
        debug_assert!(omega.is_finite() && omega >= 0.0);
        let den = Complex::new(
            self.omega_0 * self.omega_0 - omega * omega,
            -(self.gamma * omega),
        );
        ComplexPermittivity::from(Complex::new(1.0, 0.0) + self.omega_p_sq / den)
    }
}

/// Free-electron model parameters for metallic materials.
///
/// Same unit rule as [`LorenzParams`]: parameters and evaluation frequency
/// share one angular unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrudeParams {
    omega_p_sq: f64,
    gamma: f64,
}

impl DrudeParams {
    /// `omega_p_sq >= 0`, `gamma > 0`, both finite.
    pub fn new(omega_p_sq: f64, gamma: f64) -> Result<Self, DielectricError> {
        if !omega_p_sq.is_finite() || omega_p_sq < 0.0 {
            return Err(DielectricError::InvalidParameter(
                "squared plasma frequency must be non-negative and finite",
            ));
        }
        if !gamma.is_finite() || gamma <= 0.0 {
            return Err(DielectricError::InvalidParameter(
                "damping constant must be positive and finite",
            ));
        }
        Ok(Self { omega_p_sq, gamma })
    }

    /// Squared plasma angular frequency.
    pub fn omega_p_sq(&self) -> f64 {
        self.omega_p_sq
    }

    /// Damping constant (angular frequency).
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Relative permittivity `1 - omega_p^2 / (omega^2 + j*gamma*omega)` at
    /// angular frequency `omega > 0`.
    pub fn permittivity(&self, omega: f64) -> Result<ComplexPermittivity, DielectricError> {
        if !omega.is_finite() || omega <= 0.0 {
            return Err(DielectricError::NonPositiveFrequency(omega));
        }
        let den = Complex::new(omega * omega, self.gamma * omega);
        Ok(ComplexPermittivity::from(
            Complex::new(1.0, 0.0) - self.omega_p_sq / den,
        ))
    }
}

/// Either dielectric model, tagging the material class it applies to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DielectricParams {
    /// Bound-electron oscillator (non-metallic materials).
    Lorenz(LorenzParams),
    /// Free-electron model (metallic materials).
    Drude(DrudeParams),
}

impl DielectricParams {
    /// Evaluate whichever model this is at angular frequency `omega`.
    pub fn permittivity(&self, omega: f64) -> Result<ComplexPermittivity, DielectricError> {
        match self {
            DielectricParams::Lorenz(p) => Ok(p.permittivity(omega)),
            DielectricParams::Drude(p) => p.permittivity(omega),
        }
    }
}
