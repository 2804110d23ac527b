//! Weight configuration files (JSON).

use std::path::Path;

use anyhow::{bail, Context};
use mbp_core::orthopoly::Precision;
use mbp_core::weights::{Family, MatrixWeightSpec, ScalarWeightSpec};
use serde::Deserialize;

/// Overrides the `precision` key of every config.
pub const PRECISION_ENV: &str = "MBP_PRECISION";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyName {
    Hermite,
    Laguerre,
    Jacobi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrecisionName {
    F64,
    Extended,
}

impl PrecisionName {
    fn parse(s: &str) -> anyhow::Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "f64" => Ok(PrecisionName::F64),
            "extended" => Ok(PrecisionName::Extended),
            other => bail!("{PRECISION_ENV}={other:?}: expected \"f64\" or \"extended\""),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JacobiRow {
    pub alpha: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LaguerreRow {
    pub alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HermiteRow {
    pub b: f64,
}

// variants are tried in order, so the two-key record comes first
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged, expecting = "a row record {\"b\": ..}, {\"alpha\": ..} or {\"alpha\": .., \"beta\": ..}")]
pub enum Row {
    Jacobi(JacobiRow),
    Laguerre(LaguerreRow),
    Hermite(HermiteRow),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub family: FamilyName,
    pub n: usize,
    pub rows: Vec<Row>,
    pub a: Vec<f64>,
    #[serde(default)]
    pub precision: Option<PrecisionName>,
    #[serde(default)]
    pub tolerance: Option<f64>,
}

/// A parsed config with the environment override applied.
#[derive(Debug, Clone, PartialEq)]
pub struct Loaded {
    pub spec: MatrixWeightSpec,
    pub precision: Precision,
}

impl ConfigFile {
    pub fn parse(text: &str) -> anyhow::Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// The weight spec exactly as written; validity is left to the caller.
    pub fn spec(&self) -> MatrixWeightSpec {
        let family = match self.family {
            FamilyName::Hermite => Family::Hermite,
            FamilyName::Laguerre => Family::Laguerre,
            FamilyName::Jacobi => Family::Jacobi,
        };
        let rows = self
            .rows
            .iter()
            .map(|r| match *r {
                Row::Hermite(HermiteRow { b }) => ScalarWeightSpec::Hermite { b },
                Row::Laguerre(LaguerreRow { alpha }) => ScalarWeightSpec::Laguerre { alpha },
                Row::Jacobi(JacobiRow { alpha, beta }) => ScalarWeightSpec::Jacobi { alpha, beta },
            })
            .collect();
        let mut spec = MatrixWeightSpec::new(family, rows, self.a.clone());
        spec.size = self.n;
        if let Some(t) = self.tolerance {
            spec = spec.with_tolerance(t);
        }
        spec
    }
}

fn resolve_precision(file: Option<PrecisionName>, env: Option<&str>) -> anyhow::Result<Precision> {
    let name = match env {
        Some(v) if !v.trim().is_empty() => Some(PrecisionName::parse(v)?),
        _ => file,
    };
    Ok(match name {
        Some(PrecisionName::F64) => Precision::Binary64,
        Some(PrecisionName::Extended) => Precision::Extended,
        None => Precision::default(),
    })
}

pub fn load(path: &Path) -> anyhow::Result<Loaded> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let cfg = ConfigFile::parse(&text).with_context(|| format!("parsing {}", path.display()))?;
    let env = std::env::var(PRECISION_ENV).ok();
    let precision = resolve_precision(cfg.precision, env.as_deref())?;
    Ok(Loaded { spec: cfg.spec(), precision })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_each_family() {
        let h = ConfigFile::parse(r#"{"family":"hermite","n":2,"rows":[{"b":1},{"b":0}],"a":[1]}"#).unwrap();
        assert_eq!(h.spec(), MatrixWeightSpec::hermite(&[1.0, 0.0], &[1.0]));
        let l = ConfigFile::parse(r#"{"family":"laguerre","n":2,"rows":[{"alpha":0.3},{"alpha":1.7}],"a":[1],"precision":"f64"}"#)
            .unwrap();
        assert_eq!(l.spec(), MatrixWeightSpec::laguerre(&[0.3, 1.7], &[1.0]));
        assert_eq!(l.precision, Some(PrecisionName::F64));
        let j = ConfigFile::parse(
            r#"{"family":"jacobi","n":2,"rows":[{"alpha":0.5,"beta":1.25},{"alpha":0.25,"beta":-0.5}],"a":[1],"tolerance":1e-10}"#,
        )
        .unwrap();
        assert_eq!(j.spec().working_tolerance, 1e-10);
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(ConfigFile::parse(r#"{"family":"hermite","n":1,"rows":[{"b":1}],"a":[],"extra":0}"#).is_err());
        assert!(ConfigFile::parse(r#"{"family":"hermite","n":1,"rows":[{"b":1,"c":2}],"a":[]}"#).is_err());
        assert!(ConfigFile::parse(r#"{"family":"gegenbauer","n":1,"rows":[{"b":1}],"a":[]}"#).is_err());
        assert!(ConfigFile::parse(r#"{"family":"hermite","n":1,"rows":[{"b":1}],"a":[],"precision":"quad"}"#).is_err());
    }

    #[test]
    fn mismatched_size_is_reported_by_validation() {
        let c = ConfigFile::parse(r#"{"family":"hermite","n":3,"rows":[{"b":1},{"b":0}],"a":[1]}"#).unwrap();
        assert!(!c.spec().violations().is_empty());
    }

    #[test]
    fn environment_wins() {
        assert_eq!(resolve_precision(Some(PrecisionName::Extended), Some("f64")).unwrap(), Precision::Binary64);
        assert_eq!(resolve_precision(Some(PrecisionName::F64), None).unwrap(), Precision::Binary64);
        assert_eq!(resolve_precision(None, Some("")).unwrap(), Precision::default());
        assert!(resolve_precision(None, Some("f32")).is_err());
    }
}
