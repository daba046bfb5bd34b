//! Weight spec mini-language: `constant:<c>`, `power:<alpha>`,
//! `explicit:@<file.json>` and `alternating:<spec>`.

use std::path::Path;

use maxineq_core::weights::WeightSequence;

use crate::error::{CliError, CliResult};
use crate::formats::read_json;

fn bad(spec: &str, reason: impl Into<String>) -> CliError {
    CliError::WeightSpec {
        spec: spec.to_string(),
        reason: reason.into(),
    }
}

fn number(spec: &str, text: &str) -> CliResult<f64> {
    let v: f64 = text
        .trim()
        .parse()
        .map_err(|_| bad(spec, format!("`{text}` is not a number")))?;
    if !v.is_finite() {
        return Err(bad(spec, "value must be finite"));
    }
    Ok(v)
}

/// Parses a weight spec. Relative `@file` paths resolve against `base`.
pub fn parse_weight_spec(spec: &str, base: &Path) -> CliResult<WeightSequence> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| bad(spec, "expected `kind:value`"))?;
    match kind {
        "constant" => Ok(WeightSequence::Constant(number(spec, rest)?)),
        "power" => Ok(WeightSequence::Power(number(spec, rest)?)),
        "explicit" => {
            let file = rest
                .strip_prefix('@')
                .ok_or_else(|| bad(spec, "explicit weights are read from `@file.json`"))?;
            let path = base.join(file);
            let list: Vec<f64> = read_json(&path)?;
            if list.is_empty() {
                return Err(bad(spec, "explicit weight list is empty"));
            }
            if let Some(i) = list.iter().position(|v| !v.is_finite()) {
                return Err(bad(spec, format!("entry {i} is not finite")));
            }
            Ok(WeightSequence::Explicit(list))
        }
        "alternating" => {
            if rest.is_empty() {
                return Err(bad(spec, "alternating needs an inner spec"));
            }
            Ok(WeightSequence::alternating(parse_weight_spec(rest, base)?))
        }
        other => Err(bad(
            spec,
            format!("unknown kind `{other}` (constant, power, explicit, alternating)"),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_each_kind() {
        let here = Path::new(".");
        assert_eq!(parse_weight_spec("constant:1.0", here).unwrap(), WeightSequence::Constant(1.0));
        assert_eq!(parse_weight_spec("power:-0.5", here).unwrap(), WeightSequence::Power(-0.5));
        assert_eq!(
            parse_weight_spec("alternating:power:-0.5", here).unwrap(),
            WeightSequence::alternating(WeightSequence::Power(-0.5))
        );
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("w.json"), "[0.5, -1, 2]").unwrap();
        assert_eq!(
            parse_weight_spec("explicit:@w.json", dir.path()).unwrap(),
            WeightSequence::Explicit(vec![0.5, -1.0, 2.0])
        );
    }

    #[test]
    fn rejects_garbage() {
        let here = Path::new(".");
        for spec in ["", "power", "power:x", "cubic:2", "explicit:w.json", "alternating:", "constant:inf"] {
            assert!(parse_weight_spec(spec, here).is_err(), "{spec}");
        }
    }
}
