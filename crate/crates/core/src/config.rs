//! Configuration files.
//!
//! [`DcfParams`] load from either JSON or a flat `key = value` text file using
//! the serialized field names; missing keys keep their default values.
//! Experiment files are JSON objects with optional sections, merged under
//! command-line flags.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::dcf::DcfParams;
use crate::error::{Error, Result};
use crate::polling::PollingConfig;

pub fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Sets one parameter by its configuration key.
pub fn apply_param(params: &mut DcfParams, key: &str, value: &str) -> Result<()> {
    fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
        value
            .trim()
            .parse()
            .map_err(|_| Error::config(format!("invalid value {value:?} for {key}")))
    }
    match key.trim() {
        "cw_min_W" => params.cw_min = parse(key, value)?,
        "max_stage_m" => params.max_stage = parse(key, value)?,
        "slot_time" => params.slot_time = parse(key, value)?,
        "sifs" => params.sifs = parse(key, value)?,
        "difs" => params.difs = parse(key, value)?,
        "phy_header_time" => params.phy_header_time = parse(key, value)?,
        "mac_header_bits" => params.mac_header_bits = parse(key, value)?,
        "payload_bits" => params.payload_bits = parse(key, value)?,
        "ack_bits" => params.ack_bits = parse(key, value)?,
        "data_rate" => params.data_rate = parse(key, value)?,
        "propagation_delay" => params.propagation_delay = parse(key, value)?,
        // Convenience alias; the tables quote packet sizes in bytes.
        "payload_bytes" => params.payload_bits = parse::<u64>(key, value)? * 8,
        other => return Err(Error::config(format!("unknown parameter {other:?}"))),
    }
    Ok(())
}

fn apply_json_params(params: &mut DcfParams, value: &Value) -> Result<()> {
    let object = value
        .as_object()
        .ok_or_else(|| Error::config("DCF parameters must be a JSON object"))?;
    for (key, v) in object {
        let text = match v {
            Value::Number(n) => n.to_string(),
            Value::String(s) => s.clone(),
            other => return Err(Error::config(format!("invalid value {other} for {key}"))),
        };
        apply_param(params, key, &text)?;
    }
    Ok(())
}

/// Parses DCF parameters from JSON or flat `key = value` text (`:` also
/// accepted as separator, `#` starts a comment).
pub fn parse_dcf_params(text: &str) -> Result<DcfParams> {
    let mut params = DcfParams::default();
    if text.trim_start().starts_with('{') {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::config(e.to_string()))?;
        apply_json_params(&mut params, &value)?;
    } else {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .or_else(|| line.split_once(':'))
                .ok_or_else(|| {
                    Error::config(format!("line {}: expected key = value", lineno + 1))
                })?;
            apply_param(&mut params, key, value)?;
        }
    }
    params.validate()?;
    Ok(params)
}

pub fn load_dcf_params(path: &Path) -> Result<DcfParams> {
    parse_dcf_params(&read_file(path)?)
}

/// Shared experiment configuration file. Every field is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Partial DCF parameter set, keyed like [`DcfParams`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dcf: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polling: Option<PollingConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_override: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reps: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warmup: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&read_file(path)?)
    }

    /// DCF parameters: defaults overridden by the `dcf` section.
    pub fn dcf_params(&self) -> Result<DcfParams> {
        let mut params = DcfParams::default();
        if let Some(section) = &self.dcf {
            apply_json_params(&mut params, section)?;
        }
        params.validate()?;
        Ok(params)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_text_overrides_defaults() {
        let text = "# 1 Mbit/s\ncw_min_W = 16\nslot_time: 9\n\npayload_bits = 8000  # 1000 B\n";
        let params = parse_dcf_params(text).unwrap();
        assert_eq!(params.cw_min, 16);
        assert_eq!(params.slot_time, 9.0);
        assert_eq!(params.payload_bits, 8000);
        assert_eq!(params.difs, DcfParams::default().difs);
    }

    #[test]
    fn json_params() {
        let text = r#"{"cw_min_W": 64, "max_stage_m": 3, "data_rate": 2e6}"#;
        let params = parse_dcf_params(text).unwrap();
        assert_eq!(
            (params.cw_min, params.max_stage, params.data_rate),
            (64, 3, 2e6)
        );
        let full = serde_json::to_string(&DcfParams::default()).unwrap();
        assert_eq!(parse_dcf_params(&full).unwrap(), DcfParams::default());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            parse_dcf_params("bogus = 1"),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            parse_dcf_params("cw_min_W = many"),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            parse_dcf_params("cw_min_W 32"),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            parse_dcf_params("cw_min_W = 1"),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            parse_dcf_params(r#"{"sifs": [1]}"#),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn experiment_config_sections() {
        let text = r#"{"dcf": {"payload_bytes": 1000}, "lambda": [1, 2.5], "seed": 9}"#;
        let cfg = ExperimentConfig::parse(text).unwrap();
        assert_eq!(cfg.dcf_params().unwrap().payload_bits, 8000);
        assert_eq!(cfg.lambda, Some(vec![1.0, 2.5]));
        assert_eq!(cfg.seed, Some(9));
        assert!(ExperimentConfig::parse(r#"{"sed": 9}"#).is_err());
    }

    #[test]
    fn missing_file_reports_path() {
        let err = load_dcf_params(Path::new("/nonexistent/params.txt")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/params.txt"));
    }
}
