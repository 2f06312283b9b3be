use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::parse_scalar;
use crate::moment::{ReductionDatum, TorusData};
use crate::qweyl::{AlgebraSpec, Normalization};
use crate::root_of_unity::SlotData;
use crate::scalars::{FieldDescriptor, FieldKind, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldChoice {
    Rational,
    RationalFunctionQ,
    Cyclotomic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalizationChoice {
    Unscaled,
    Rescaled,
}

/// `"single_parameter"` or explicit integer rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixChoice {
    Preset(String),
    Rows(Vec<Vec<i64>>),
}

impl Default for MatrixChoice {
    fn default() -> Self {
        MatrixChoice::Preset("single_parameter".into())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlotKind {
    Diag,
    Nilpotent,
}

/// One coordinate of a representation. For `diag`, `b` holds all `l` cyclic
/// entries, or only the first `l − 1` when `root` is given; the last entry
/// is then solved so that `α^l = root^l`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlotConfig {
    pub kind: SlotKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Bounds {
    pub degree_bound: u32,
    pub exponent_bound: u32,
    pub random_cases: usize,
    pub enumeration_cap: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            degree_bound: 3,
            exponent_bound: 4,
            random_cases: 20,
            enumeration_cap: 10_000,
        }
    }
}

/// The JSON configuration read by every subcommand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkbenchConfig {
    pub field: FieldChoice,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<u32>,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(rename = "M", default)]
    pub m: MatrixChoice,
    #[serde(default = "default_normalization")]
    pub normalization: NormalizationChoice,
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<Vec<i64>>>,
    #[serde(default)]
    pub eta: Vec<String>,
    #[serde(default)]
    pub reps: Vec<Vec<SlotConfig>>,
    #[serde(default)]
    pub bounds: Bounds,
    #[serde(default)]
    pub seed: u64,
}

fn default_normalization() -> NormalizationChoice {
    NormalizationChoice::Rescaled
}

/// Builder data for one representation, already in the field.
#[derive(Clone, Debug)]
pub struct RepSetup {
    pub slots: Vec<SlotData>,
    /// `t_i` with `α_i^l = t_i^l`, when every slot supplies one.
    pub roots: Option<Vec<Scalar>>,
}

/// A validated configuration with every object constructed.
#[derive(Clone, Debug)]
pub struct Workbench {
    pub config: WorkbenchConfig,
    pub field: FieldDescriptor,
    pub spec: Arc<AlgebraSpec>,
    pub torus: Option<TorusData>,
    pub eta: Vec<Scalar>,
    pub reps: Vec<RepSetup>,
}

impl Workbench {
    pub fn from_json(src: &str) -> Result<Self> {
        let config: WorkbenchConfig =
            serde_json::from_str(src).map_err(|e| Error::Config(vec![format!("json: {e}")]))?;
        Self::new(config)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let src = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&src)
    }

    /// Validates every field, collecting all problems before failing.
    pub fn new(config: WorkbenchConfig) -> Result<Self> {
        let mut errors = Vec::new();
        let field = match config.field {
            FieldChoice::Rational => Some(FieldDescriptor::rational()),
            FieldChoice::RationalFunctionQ => Some(FieldDescriptor::rational_function()),
            FieldChoice::Cyclotomic => match config.l {
                None => {
                    errors.push("l: required for the cyclotomic field".to_string());
                    None
                }
                Some(l) => match FieldDescriptor::new(FieldKind::Cyclotomic, Some(l)) {
                    Ok(f) => Some(f),
                    Err(_) => {
                        errors.push(format!("l: must be an odd integer greater than 1, got {l}"));
                        None
                    }
                },
            },
        };
        if config.l.is_some() && config.field != FieldChoice::Cyclotomic {
            errors.push("l: only meaningful for the cyclotomic field".to_string());
        }
        let n = config.n;
        if n == 0 {
            errors.push("n: must be at least 1".to_string());
        }
        let normalization = match config.normalization {
            NormalizationChoice::Unscaled => Normalization::Unscaled,
            NormalizationChoice::Rescaled => Normalization::Rescaled,
        };
        let m = match &config.m {
            MatrixChoice::Preset(p) if p == "single_parameter" => Some(AlgebraSpec::single_parameter_matrix(n)),
            MatrixChoice::Preset(p) => {
                errors.push(format!(
                    "M: unknown preset `{p}` (expected \"single_parameter\" or integer rows)"
                ));
                None
            }
            MatrixChoice::Rows(rows) => Some(rows.clone()),
        };
        let spec = match (&field, m) {
            (Some(f), Some(m)) if n > 0 => match AlgebraSpec::new(m, normalization, f.clone()) {
                Ok(s) => Some(s),
                Err(e) => {
                    errors.push(format!("M: {}", strip(&e)));
                    None
                }
            },
            _ => None,
        };
        let torus = match &config.a {
            None => {
                if config.d.is_some_and(|d| d > 0) {
                    errors.push("A: required when d is given".to_string());
                }
                None
            }
            Some(rows) => {
                let mut ok = true;
                if rows.len() != n {
                    errors.push(format!("A: has {} rows, expected n = {n}", rows.len()));
                    ok = false;
                }
                for (i, r) in rows.iter().enumerate() {
                    if Some(r.len()) != config.d {
                        errors.push(format!(
                            "A[{i}]: has {} entries, expected d = {}",
                            r.len(),
                            config.d.map_or("(missing)".to_string(), |d| d.to_string())
                        ));
                        ok = false;
                    }
                }
                if config.d.is_some_and(|d| d > n) {
                    errors.push("d: must not exceed n".to_string());
                    ok = false;
                }
                if ok {
                    match TorusData::new(rows.clone()) {
                        Ok(t) => Some(t),
                        Err(e) => {
                            errors.push(format!("A: {}", strip(&e)));
                            None
                        }
                    }
                } else {
                    None
                }
            }
        };
        let mut eta = Vec::new();
        if let Some(f) = &field {
            if let Some(d) = config.d {
                if !config.eta.is_empty() && config.eta.len() != d {
                    errors.push(format!("eta: has {} entries, expected d = {d}", config.eta.len()));
                }
            }
            for (j, s) in config.eta.iter().enumerate() {
                match parse_scalar(s, f) {
                    Ok(v) if v.is_zero() => errors.push(format!("eta[{j}]: must be nonzero")),
                    Ok(v) => eta.push(v),
                    Err(e) => errors.push(format!("eta[{j}]: {}", strip(&e))),
                }
            }
        }
        let mut reps = Vec::new();
        if !config.reps.is_empty() {
            if config.field != FieldChoice::Cyclotomic {
                errors.push("reps: representations need the cyclotomic field".to_string());
            }
            if config.m != MatrixChoice::default() || config.normalization != NormalizationChoice::Rescaled {
                errors.push(
                    "reps: representations need M = \"single_parameter\" and the rescaled normalization".to_string(),
                );
            }
        }
        if let (Some(f), Some(l)) = (field.as_ref().filter(|f| f.kind() == FieldKind::Cyclotomic), config.l) {
            for (k, slots) in config.reps.iter().enumerate() {
                if slots.len() != n {
                    errors.push(format!("reps[{k}]: has {} slots, expected n = {n}", slots.len()));
                    continue;
                }
                let mut built = Vec::new();
                let mut roots = Some(Vec::new());
                for (i, slot) in slots.iter().enumerate() {
                    let path = format!("reps[{k}][{i}]");
                    match parse_slot(slot, f, l, &path, &mut errors) {
                        Some((data, root)) => {
                            built.push(data);
                            match (root, roots.as_mut()) {
                                (Some(t), Some(r)) => r.push(t),
                                _ => roots = None,
                            }
                        }
                        None => roots = None,
                    }
                }
                reps.push(RepSetup { slots: built, roots });
            }
        }
        if !errors.is_empty() {
            return Err(Error::Config(errors));
        }
        Ok(Workbench {
            field: field.expect("validated"),
            spec: spec.expect("validated"),
            torus,
            eta,
            reps,
            config,
        })
    }

    /// Torus data and `η` as a reduction datum, when both are configured.
    pub fn datum(&self) -> Result<ReductionDatum> {
        match &self.torus {
            Some(t) if self.eta.len() == t.d() => ReductionDatum::new(t.clone(), self.eta.clone(), self.field.l()),
            Some(_) => Err(Error::Config(vec!["eta: required for reduction".into()])),
            None => Err(Error::Config(vec!["A: required for reduction".into()])),
        }
    }
}

fn strip(e: &Error) -> String {
    match e {
        Error::Parameter(s) | Error::Domain(s) | Error::Invariant(s) => s.clone(),
        other => other.to_string(),
    }
}

fn parse_slot(
    slot: &SlotConfig,
    f: &FieldDescriptor,
    l: u32,
    path: &str,
    errors: &mut Vec<String>,
) -> Option<(SlotData, Option<Scalar>)> {
    let before = errors.len();
    let scalar = |name: &str, s: &str, errors: &mut Vec<String>| match parse_scalar(s, f) {
        Ok(v) => Some(v),
        Err(e) => {
            errors.push(format!("{path}.{name}: {}", strip(&e)));
            None
        }
    };
    match slot.kind {
        SlotKind::Nilpotent => {
            if slot.lambda.is_some() || slot.b.is_some() || slot.root.is_some() {
                errors.push(format!("{path}: nilpotent slots take no lambda, b or root"));
                return None;
            }
            Some((SlotData::Nilpotent, None))
        }
        SlotKind::Diag => {
            let lambda = match &slot.lambda {
                Some(s) => scalar("lambda", s, errors),
                None => {
                    errors.push(format!("{path}.lambda: required for diag slots"));
                    None
                }
            };
            let root = slot.root.as_deref().and_then(|s| scalar("root", s, errors));
            let b: Option<Vec<Scalar>> = match &slot.b {
                Some(v) => v
                    .iter()
                    .enumerate()
                    .map(|(i, s)| scalar(&format!("b[{i}]"), s, errors))
                    .collect(),
                None => {
                    errors.push(format!("{path}.b: required for diag slots"));
                    None
                }
            };
            let want = if slot.root.is_some() { l - 1 } else { l } as usize;
            if let Some(b) = &b {
                if b.len() != want {
                    errors.push(format!("{path}.b: has {} entries, expected {want}", b.len()));
                }
            }
            if lambda.as_ref().is_some_and(Scalar::is_zero) {
                errors.push(format!("{path}.lambda: must be nonzero"));
            }
            if errors.len() > before {
                return None;
            }
            let (lambda, b) = (lambda?, b?);
            match root {
                Some(t) => match crate::reduction::slot_with_root(&lambda, &b, &t) {
                    Ok(data) => Some((data, Some(t))),
                    Err(e) => {
                        errors.push(format!("{path}.root: {}", strip(&e)));
                        None
                    }
                },
                None => Some((SlotData::Rank1 { lambda, b }, None)),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn even_l_names_the_field() {
        let err = Workbench::from_json(r#"{"field": "cyclotomic", "l": 2, "n": 1}"#).unwrap_err();
        let Error::Config(list) = err else {
            panic!("expected a config error")
        };
        assert!(list[0].starts_with("l:"), "{list:?}");
    }

    #[test]
    fn all_problems_are_listed() {
        let src = r#"{"field": "rational_function_q", "n": 2, "d": 1, "A": [[1], [1, 2]], "eta": ["0"],
                      "reps": [[{"kind": "diag"}]]}"#;
        let Error::Config(list) = Workbench::from_json(src).unwrap_err() else {
            panic!()
        };
        assert!(list.iter().any(|e| e.starts_with("A[1]")));
        assert!(list.iter().any(|e| e.starts_with("eta[0]")));
        assert!(list.iter().any(|e| e.starts_with("reps:")));
    }

    #[test]
    fn roots_are_collected() {
        let src = r#"{"field": "cyclotomic", "l": 3, "n": 1, "d": 1, "A": [[1]], "eta": ["2"],
                      "reps": [[{"kind": "diag", "lambda": "2", "b": ["1", "1"], "root": "2"}], [{"kind": "nilpotent"}]]}"#;
        let wb = Workbench::from_json(src).unwrap();
        assert_eq!(wb.reps.len(), 2);
        assert!(wb.reps[0].roots.is_some());
        assert!(wb.reps[1].roots.is_none());
        assert!(wb.datum().is_ok());
    }
}
