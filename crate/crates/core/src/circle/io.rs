use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{CircleDiffeo, CircleError};

/// File and command-line form of a diffeomorphism.
///
/// JSON: `{"kind": "mobius", "theta": 0.0, "c": [0.3, 0.0]}`,
/// `{"kind": "trig", "a0": 0.1, "coeffs": [[0.0, 0.05]]}` or
/// `{"kind": "rotation", "alpha": 0.25}`. Strings: `mobius:θ,re[,im]`,
/// `trig:a0[,a1,b1,...]`, `rotation:α`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DiffeoSpec {
    Mobius { theta: f64, c: [f64; 2] },
    Trig {
        a0: f64,
        #[serde(default)]
        coeffs: Vec<[f64; 2]>,
    },
    Rotation { alpha: f64 },
}

impl DiffeoSpec {
    pub fn build(&self) -> Result<CircleDiffeo, CircleError> {
        match self {
            DiffeoSpec::Mobius { theta, c } => CircleDiffeo::mobius(*theta, Complex64::new(c[0], c[1])),
            DiffeoSpec::Trig { a0, coeffs } => CircleDiffeo::trig(*a0, coeffs.iter().map(|[a, b]| (*a, *b)).collect()),
            DiffeoSpec::Rotation { alpha } => Ok(CircleDiffeo::rotation(*alpha)),
        }
    }
}

impl FromStr for DiffeoSpec {
    type Err = CircleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |msg: &str| CircleError::InvalidParameter(format!("{msg} in map `{s}`"));
        let (kind, rest) = s.split_once(':').ok_or_else(|| bad("missing `kind:`"))?;
        let nums = rest
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<Result<Vec<f64>, _>>()
            .map_err(|_| bad("bad number"))?;
        match (kind.trim(), nums.as_slice()) {
            ("mobius", [theta, re]) => Ok(DiffeoSpec::Mobius { theta: *theta, c: [*re, 0.0] }),
            ("mobius", [theta, re, im]) => Ok(DiffeoSpec::Mobius { theta: *theta, c: [*re, *im] }),
            ("rotation", [alpha]) => Ok(DiffeoSpec::Rotation { alpha: *alpha }),
            ("trig", [a0, rest @ ..]) if rest.len() % 2 == 0 => Ok(DiffeoSpec::Trig {
                a0: *a0,
                coeffs: rest.chunks(2).map(|p| [p[0], p[1]]).collect(),
            }),
            _ => Err(bad("unrecognised shape")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strings_and_json_agree() {
        let a: DiffeoSpec = "mobius:0.0,0.3".parse().unwrap();
        let b: DiffeoSpec = serde_json::from_str(r#"{"kind":"mobius","theta":0.0,"c":[0.3,0.0]}"#).unwrap();
        assert_eq!(a, b);
        let t: DiffeoSpec = "trig:0.1,0.0,0.05".parse().unwrap();
        assert_eq!(
            serde_json::to_string(&t).unwrap(),
            r#"{"kind":"trig","a0":0.1,"coeffs":[[0.0,0.05]]}"#
        );
        assert!(t.build().is_ok());
        assert!("trig:0.1,0.2".parse::<DiffeoSpec>().is_err());
        assert!("spiral:1".parse::<DiffeoSpec>().is_err());
        assert!("mobius:0,1.5".parse::<DiffeoSpec>().unwrap().build().is_err());
    }
}
