//! The fit-report JSON document.

use farc_core::fitting::FitReport;
use farc_core::measurement::Dataset;
use farc_core::reflection::MaterialClass;
use serde::Serialize;

/// Stable class labels used in JSON documents and CLI flags.
pub fn class_label(class: MaterialClass) -> &'static str {
    match class {
        MaterialClass::NonMetallic => "non-metallic",
        MaterialClass::Metallic => "metallic",
    }
}

#[derive(Debug, Serialize)]
struct ParamsDoc {
    a: f64,
    b: f64,
    /// `null` for metallic fits.
    c: Option<f64>,
    d: f64,
}

/// Serializable fit report: material, class, fitted parameters, RMSE, and
/// per-sample residuals in dataset order.
#[derive(Debug, Serialize)]
pub struct FitReportDoc {
    material: String,
    class: &'static str,
    params: ParamsDoc,
    rmse: f64,
    n_samples: usize,
    converged: bool,
    starts_tried: usize,
    residuals: Vec<f64>,
}

impl FitReportDoc {
    pub fn new(dataset: &Dataset, report: &FitReport) -> Self {
        let p = report.params();
        Self {
            material: dataset.material_name().to_string(),
            class: class_label(p.material_class()),
            params: ParamsDoc {
                a: p.a(),
                b: p.b(),
                c: p.c(),
                d: p.d(),
            },
            rmse: report.rmse(),
            n_samples: dataset.len(),
            converged: report.converged(),
            starts_tried: report.starts_tried(),
            residuals: report.residuals().to_vec(),
        }
    }

    /// Pretty JSON with a trailing newline; byte-deterministic for a given
    /// report.
    pub fn to_json(&self) -> String {
        let mut text =
            serde_json::to_string_pretty(self).expect("fit report is plain serializable data");
        text.push('\n');
        text
    }
}
