use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{validate_system, CanonicalSystem, RightEndpoint, Segment};
use crate::error::{Error, Result};

/// On-disk description of a canonical system.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub p: usize,
    #[serde(default)]
    pub a: f64,
    pub endpoint_right: EndpointSpec,
    pub segments: Vec<SegmentSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<SegmentSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum EndpointSpec {
    Regular,
    LimitPoint,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentSpec {
    pub length: f64,
    #[serde(rename = "H")]
    pub h: Vec<Vec<f64>>,
    #[serde(rename = "F", default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<Vec<f64>>>,
}

fn matrix(path: &str, rows: &[Vec<f64>], n: usize) -> Result<DMatrix<f64>> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidInput(format!("{path}: expected a {n}×{n} matrix")));
    }
    Ok(DMatrix::from_fn(n, n, |r, c| rows[r][c]))
}

impl SegmentSpec {
    fn to_segment(&self, path: &str, n: usize) -> Result<Segment> {
        if !(self.length > 0.0) || !self.length.is_finite() {
            return Err(Error::InvalidInput(format!("{path}.length: must be positive and finite")));
        }
        let h = matrix(&format!("{path}.H"), &self.h, n)?;
        let f = match &self.f {
            Some(f) => matrix(&format!("{path}.F"), f, n)?,
            None => DMatrix::zeros(n, n),
        };
        Ok(Segment::new(self.length, h, f))
    }

    fn from_segment(s: &Segment) -> Self {
        let rows = |m: &DMatrix<f64>| -> Vec<Vec<f64>> {
            (0..m.nrows()).map(|r| m.row(r).iter().copied().collect()).collect()
        };
        Self {
            length: s.length,
            h: rows(&s.h),
            f: if s.f.iter().all(|&x| x == 0.0) { None } else { Some(rows(&s.f)) },
        }
    }
}

impl SystemSpec {
    /// Parse JSON text, reporting the path of any schema violation.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::InvalidInput(format!("{path}: {}", e.inner()))
        })
    }

    /// Build and validate the system.
    pub fn build(&self) -> Result<CanonicalSystem> {
        if self.p == 0 {
            return Err(Error::InvalidInput("p: must be at least 1".into()));
        }
        let n = 2 * self.p;
        let segments = self
            .segments
            .iter()
            .enumerate()
            .map(|(k, s)| s.to_segment(&format!("segments[{k}]"), n))
            .collect::<Result<Vec<_>>>()?;
        let tail = self.tail.as_ref().map(|t| t.to_segment("tail", n)).transpose()?;
        let endpoint = match self.endpoint_right {
            EndpointSpec::Regular => RightEndpoint::Regular,
            EndpointSpec::LimitPoint => RightEndpoint::LimitPoint,
        };
        let mut sys = CanonicalSystem::new(self.p, self.a, segments, endpoint, tail)?;
        validate_system(&sys)?;
        if let Some(name) = &self.name {
            sys = sys.with_name(name.clone());
        }
        Ok(sys)
    }

    pub fn from_system(sys: &CanonicalSystem) -> Self {
        Self {
            p: sys.p(),
            a: sys.a(),
            endpoint_right: if sys.is_regular() {
                EndpointSpec::Regular
            } else {
                EndpointSpec::LimitPoint
            },
            segments: sys.segments().iter().map(SegmentSpec::from_segment).collect(),
            tail: sys.tail().map(SegmentSpec::from_segment),
            name: Some(sys.name().to_string()),
        }
    }
}

impl CanonicalSystem {
    /// Parse, build and validate a system from JSON text.
    pub fn from_json(text: &str) -> Result<Self> {
        SystemSpec::from_json(text)?.build()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&SystemSpec::from_system(self)).expect("spec serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let sys = CanonicalSystem::free(1, 2.0);
        let back = CanonicalSystem::from_json(&sys.to_json()).unwrap();
        assert_eq!(back.segments(), sys.segments());
        assert_eq!(back.name(), "free");
    }

    #[test]
    fn schema_errors_carry_paths() {
        let text = r#"{"p":1,"a":0,"endpoint_right":"regular","segments":[{"length":1,"H":[[1,0],[0]]}]}"#;
        let err = CanonicalSystem::from_json(text).unwrap_err().to_string();
        assert!(err.contains("segments[0].H"), "{err}");

        let text = r#"{"p":1,"endpoint_right":"regular","segments":[{"length":"x","H":[[1,0],[0,0]]}]}"#;
        let err = CanonicalSystem::from_json(text).unwrap_err().to_string();
        assert!(err.contains("segments[0].length"), "{err}");

        let text = r#"{"p":1,"endpoint_right":"regular","segments":[{"length":1,"H":[[1,0],[0,1]]}]}"#;
        let err = CanonicalSystem::from_json(text).unwrap_err();
        assert!(matches!(err, Error::InvalidCoefficients(_)));
        assert!(err.to_string().contains("segments[0].H"));
    }

    #[test]
    fn half_line_with_tail() {
        let text = r#"{"p":1,"endpoint_right":"limit_point","segments":[],"tail":{"length":1,"H":[[0.5,0],[0,0.5]]}}"#;
        let sys = CanonicalSystem::from_json(text).unwrap();
        assert!(!sys.is_regular());
    }
}
