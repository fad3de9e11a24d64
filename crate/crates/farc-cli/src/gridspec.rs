//! Parsing of frequency/angle axis specifications from CLI flags.
//!
//! Three forms are accepted:
//!
//! - a single value: `260`
//! - a comma list: `220,260,320`
//! - an inclusive range `start:stop:step`: `10:80:1`

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GridSpecError {
    #[error("cannot parse `{0}` as a number")]
    BadNumber(String),
    #[error("range `{0}` must be start:stop:step with step > 0 and stop >= start")]
    BadRange(String),
    #[error("axis specification is empty")]
    Empty,
}

/// Parse one axis specification into an ascending-friendly list of values.
pub fn parse_axis_spec(spec: &str) -> Result<Vec<f64>, GridSpecError> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Err(GridSpecError::Empty);
    }
    if spec.contains(':') {
        return parse_range(spec);
    }
    spec.split(',')
        .map(|part| {
            let part = part.trim();
            part.parse::<f64>()
                .map_err(|_| GridSpecError::BadNumber(part.to_string()))
        })
        .collect()
}

fn parse_range(spec: &str) -> Result<Vec<f64>, GridSpecError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(GridSpecError::BadRange(spec.to_string()));
    }
    let numbers: Vec<f64> = parts
        .iter()
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| GridSpecError::BadNumber(p.trim().to_string()))
        })
        .collect::<Result<_, _>>()?;
    let (start, stop, step) = (numbers[0], numbers[1], numbers[2]);
    if !step.is_finite() || step <= 0.0 || stop < start || !start.is_finite() || !stop.is_finite() {
        return Err(GridSpecError::BadRange(spec.to_string()));
    }
    // Inclusive of `stop` up to a small tolerance against step accumulation.
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_value() {
        assert_eq!(parse_axis_spec("260").unwrap(), vec![260.0]);
    }

    #[test]
    fn comma_list() {
        assert_eq!(
            parse_axis_spec("220, 260,320").unwrap(),
            vec![220.0, 260.0, 320.0]
        );
    }

    #[test]
    fn inclusive_range_has_both_endpoints() {
        let values = parse_axis_spec("10:80:1").unwrap();
        assert_eq!(values.len(), 71);
        assert_eq!(values[0], 10.0);
        assert_eq!(*values.last().unwrap(), 80.0);
    }

    #[test]
    fn fractional_step() {
        let values = parse_axis_spec("0:1:0.25").unwrap();
        assert_eq!(values.len(), 5);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_axis_spec("").is_err());
        assert!(parse_axis_spec("abc").is_err());
        assert!(parse_axis_spec("10:80").is_err());
        assert!(parse_axis_spec("80:10:1").is_err());
        assert!(parse_axis_spec("10:80:0").is_err());
        assert!(parse_axis_spec("10:80:-1").is_err());
    }
}
