//! Plain-text `key=value` curve and field configuration.
//!
//! Recognized keys: `p`, `k`, `modulus` (comma list, constant term first),
//! `a4`, `a6` for short-Weierstrass curves and `f` for genus-2 models.
//! Unknown keys are rejected so typos fail loudly.

use std::collections::BTreeMap;
use std::path::Path;

use crate::ec::EllipticCurve;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::jacobian::HyperellipticCurve;
use crate::poly::Poly;

#[derive(Debug, Clone, Default)]
pub struct CurveConfig {
    pub p: Option<u64>,
    pub k: Option<usize>,
    pub modulus: Option<Vec<u64>>,
    pub a4: Option<Vec<u64>>,
    pub a6: Option<Vec<u64>>,
    pub f: Option<Vec<u64>>,
}

const KNOWN_KEYS: &[&str] = &["p", "k", "modulus", "a4", "a6", "f"];

impl CurveConfig {
    pub fn parse(text: &str) -> Result<CurveConfig> {
        let mut map: BTreeMap<String, String> = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key=value", lineno + 1)))?;
            let key = key.trim().to_string();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(Error::Config(format!("unknown key {key:?}")));
            }
            if map.insert(key.clone(), value.trim().to_string()).is_some() {
                return Err(Error::Config(format!("duplicate key {key:?}")));
            }
        }
        let num = |s: &str| -> Result<u64> {
            s.parse::<u64>()
                .map_err(|_| Error::Config(format!("bad integer {s:?}")))
        };
        let list = |s: &str| -> Result<Vec<u64>> { s.split(',').map(|t| num(t.trim())).collect() };
        let mut cfg = CurveConfig::default();
        if let Some(v) = map.get("p") {
            cfg.p = Some(num(v)?);
        }
        if let Some(v) = map.get("k") {
            cfg.k = Some(num(v)? as usize);
        }
        if let Some(v) = map.get("modulus") {
            cfg.modulus = Some(list(v)?);
        }
        if let Some(v) = map.get("a4") {
            cfg.a4 = Some(list(v)?);
        }
        if let Some(v) = map.get("a6") {
            cfg.a6 = Some(list(v)?);
        }
        if let Some(v) = map.get("f") {
            cfg.f = Some(list(v)?);
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<CurveConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        CurveConfig::parse(&text)
    }

    pub fn field(&self) -> Result<Field> {
        let p = self
            .p
            .ok_or_else(|| Error::Config("missing key p".into()))?;
        let k = self.k.unwrap_or(1);
        Field::extension(p, k, self.modulus.clone())
    }

    pub fn ec_curve(&self) -> Result<EllipticCurve> {
        let field = self.field()?;
        let a4 = self
            .a4
            .as_ref()
            .ok_or_else(|| Error::Config("missing key a4".into()))?;
        let a6 = self
            .a6
            .as_ref()
            .ok_or_else(|| Error::Config("missing key a6".into()))?;
        EllipticCurve::new(
            field.clone(),
            field.element_from_coeffs(a4)?,
            field.element_from_coeffs(a6)?,
        )
    }

    pub fn hec_curve(&self) -> Result<HyperellipticCurve> {
        let field = self.field()?;
        if field.k() != 1 {
            return Err(Error::Config("genus-2 curves expect k = 1".into()));
        }
        let f = self
            .f
            .as_ref()
            .ok_or_else(|| Error::Config("missing key f".into()))?;
        for &c in f {
            if c >= field.p() {
                return Err(Error::Config("f coefficient out of range".into()));
            }
        }
        HyperellipticCurve::new(field.clone(), Poly::from_u64s(&field, f))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_builds() {
        let cfg = CurveConfig::parse("p=31\nk=1\nf=1,11,4,2,13,1 # demo\n").unwrap();
        assert!(cfg.hec_curve().is_ok());
        let cfg = CurveConfig::parse("p=7\na4=0\na6=1\n").unwrap();
        assert!(cfg.ec_curve().is_ok());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(CurveConfig::parse("p=31\nbogus=1\n").is_err());
        assert!(CurveConfig::parse("p=31\np=37\n").is_err());
        assert!(CurveConfig::parse("p31\n").is_err());
        let cfg = CurveConfig::parse("p=31\n").unwrap();
        assert!(cfg.ec_curve().is_err());
        let cfg = CurveConfig::parse("p=31\nf=1,11,4,2,13,2\n").unwrap();
        assert!(cfg.hec_curve().is_err());
    }
}
