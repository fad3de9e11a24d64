//! The bundled material library: five common building materials with their
//! classical surface properties (real permittivity and roughness) and their
//! fitted statistical parameters for the 220-320 GHz band.

use farc_core::reflection::{MaterialClass, MaterialSurface, StatFarcParams, SurfacePermittivity};

/// One bundled material: classical Fresnel inputs plus fitted statistical
/// parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialLibraryEntry {
    /// Lookup key (lowercase, hyphenated).
    pub name: &'static str,
    pub class: MaterialClass,
    /// Real relative permittivity, or the perfect-conductor marker.
    pub permittivity: SurfacePermittivity,
    /// Surface-roughness standard deviation in micrometres.
    pub roughness_sigma_um: f64,
    /// Fitted log10 roughness coefficient.
    pub a: f64,
    /// Fitted log10 oscillator-strength coefficient.
    pub b: f64,
    /// Fitted log10 resonance coefficient; absent for metals.
    pub c: Option<f64>,
    /// Fitted damping-scale coefficient.
    pub d: f64,
}

impl MaterialLibraryEntry {
    /// Classical surface for the Fresnel model.
    pub fn surface(&self) -> MaterialSurface {
        MaterialSurface::new(self.permittivity, self.roughness_sigma_um * 1e-6)
            .expect("library surface values are valid")
    }

    /// Fitted statistical parameters.
    pub fn stat_params(&self) -> StatFarcParams {
        match self.c {
            Some(c) => StatFarcParams::non_metallic(self.a, self.b, c, self.d),
            None => StatFarcParams::metallic(self.a, self.b, self.d),
        }
        .expect("library statistical parameters are valid")
    }
}

/// The five bundled materials.
pub const LIBRARY: [MaterialLibraryEntry; 5] = [
    MaterialLibraryEntry {
        name: "glass",
        class: MaterialClass::NonMetallic,
        permittivity: SurfacePermittivity::Real(3.5),
        roughness_sigma_um: 0.006,
        a: -15.45,
        b: 3.93,
        c: Some(3.97),
        d: 0.06,
    },
    MaterialLibraryEntry {
        name: "tile",
        class: MaterialClass::NonMetallic,
        permittivity: SurfacePermittivity::Real(5.5),
        roughness_sigma_um: 0.050,
        a: -15.18,
        b: 3.96,
        c: Some(3.72),
        d: 0.02,
    },
    MaterialLibraryEntry {
        name: "board",
        class: MaterialClass::NonMetallic,
        permittivity: SurfacePermittivity::Real(2.8),
        roughness_sigma_um: 4.800,
        a: -15.30,
        b: 3.89,
        c: Some(4.04),
        d: 0.03,
    },
    MaterialLibraryEntry {
        name: "plasterboard",
        class: MaterialClass::NonMetallic,
        permittivity: SurfacePermittivity::Real(1.8),
        roughness_sigma_um: 2.200,
        a: -15.66,
        b: 3.57,
        c: Some(4.33),
        d: 0.10,
    },
    MaterialLibraryEntry {
        name: "aluminium-alloy",
        class: MaterialClass::Metallic,
        permittivity: SurfacePermittivity::PerfectConductor,
        roughness_sigma_um: 4.000,
        a: -15.31,
        b: 6.26,
        c: None,
        d: 0.002,
    },
];

/// Case-insensitive lookup; spaces and underscores match hyphens, and
/// `aluminium` is accepted for the alloy entry.
pub fn find(name: &str) -> Option<&'static MaterialLibraryEntry> {
    let normalized: String = name
        .trim()
        .chars()
        .map(|c| match c {
            ' ' | '_' => '-',
            other => other.to_ascii_lowercase(),
        })
        .collect();
    LIBRARY
        .iter()
        .find(|entry| entry.name == normalized || (normalized == "aluminium" && entry.c.is_none()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn library_has_five_entries() {
        assert_eq!(LIBRARY.len(), 5);
    }

    #[test]
    fn lookup_is_forgiving() {
        assert!(find("glass").is_some());
        assert!(find("Glass").is_some());
        assert!(find("aluminium alloy").is_some());
        assert!(find("ALUMINIUM_ALLOY").is_some());
        assert!(find("aluminium").is_some());
        assert!(find("unobtainium").is_none());
    }

    #[test]
    fn entries_build_valid_models() {
        for entry in &LIBRARY {
            let _ = entry.surface();
            let params = entry.stat_params();
            assert_eq!(params.material_class(), entry.class);
            assert_eq!(params.c().is_none(), entry.class == MaterialClass::Metallic);
        }
    }

    #[test]
    fn glass_reference_values() {
        let glass = find("glass").unwrap();
        assert_eq!(glass.permittivity, SurfacePermittivity::Real(3.5));
        assert_eq!(glass.roughness_sigma_um, 0.006);
        assert_eq!(glass.a, -15.45);
    }
}
