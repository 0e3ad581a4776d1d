//! JSON wire formats: direction lists, rational vectors serialized as
//! `p/q` strings, lattice functions, and the output records of the CLI.

use num_complex::Complex64;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::cyclotomic::Cyc;
use crate::directions::{validate, DirectionList, LatticeFunction, ParameterList};
use crate::error::Error;
use crate::rat::{format_rat, parse_rat, QComplex, Rat, RationalVector};
use crate::Result;

/// Parses `{"dim": d, "vectors": [[..], ..]}` and validates the list.
pub fn parse_phi(text: &str) -> Result<DirectionList> {
    #[derive(Deserialize)]
    struct Raw {
        dim: usize,
        vectors: Vec<Vec<i64>>,
    }
    let raw: Raw = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("direction list: {e}")))?;
    validate(DirectionList {
        dim: raw.dim,
        vectors: raw.vectors,
        spans: false,
        salient: false,
    })
}

pub fn phi_to_json(phi: &DirectionList) -> Value {
    json!({ "dim": phi.dim, "vectors": phi.vectors })
}

/// A rational vector from either a bare `p/q` (dimension one) or a JSON
/// array of `p/q` strings.
pub fn parse_rational_vector(text: &str) -> Result<RationalVector> {
    let trimmed = text.trim();
    if trimmed.starts_with('[') {
        let parts: Vec<String> = serde_json::from_str(trimmed)
            .map_err(|e| Error::Parse(format!("rational vector: {e}")))?;
        let coords = parts
            .iter()
            .map(|p| parse_rat(p))
            .collect::<Result<Vec<Rat>>>()?;
        Ok(RationalVector::new(coords))
    } else {
        Ok(RationalVector::new(vec![parse_rat(trimmed)?]))
    }
}

pub fn rational_vector_to_json(v: &RationalVector) -> Value {
    Value::Array(
        v.coords
            .iter()
            .map(|c| Value::String(format_rat(c)))
            .collect(),
    )
}

/// An integer lattice point from `[2,1]` or a bare integer.
pub fn parse_lattice_point(text: &str) -> Result<Vec<i64>> {
    let trimmed = text.trim();
    if trimmed.starts_with('[') {
        serde_json::from_str(trimmed).map_err(|e| Error::Parse(format!("lattice point: {e}")))
    } else {
        let single: i64 = trimmed
            .parse()
            .map_err(|_| Error::Parse(format!("lattice point: {trimmed:?}")))?;
        Ok(vec![single])
    }
}

/// Parses `{"support": [[..],..], "values": ["re,im",..]}` with exact
/// rational (or decimal) component strings.
pub fn parse_lattice_function(text: &str) -> Result<LatticeFunction> {
    #[derive(Deserialize)]
    struct Raw {
        support: Vec<Vec<i64>>,
        values: Vec<String>,
    }
    let raw: Raw = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("lattice function: {e}")))?;
    if raw.support.len() != raw.values.len() {
        return Err(Error::Parse(format!(
            "lattice function: {} support points vs {} values",
            raw.support.len(),
            raw.values.len()
        )));
    }
    let mut f = LatticeFunction::new();
    for (point, value) in raw.support.into_iter().zip(&raw.values) {
        f.set(point, QComplex::parse(value)?);
    }
    Ok(f)
}

pub fn lattice_function_to_json(f: &LatticeFunction) -> Value {
    let support: Vec<&Vec<i64>> = f.entries.keys().collect();
    let values: Vec<String> = f.entries.values().map(|v| v.format()).collect();
    json!({ "support": support, "values": values })
}

/// Parses the parameter list from a JSON array of `re,im` strings (decimal
/// or rational components).
pub fn parse_parameters(text: &str, expected: usize) -> Result<ParameterList> {
    let parts: Vec<String> = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("parameter list: {e}")))?;
    if parts.len() != expected {
        return Err(Error::Parse(format!(
            "parameter list has {} entries, expected {}",
            parts.len(),
            expected
        )));
    }
    let values = parts
        .iter()
        .map(|p| QComplex::parse(p).map(|q| q.to_complex64()))
        .collect::<Result<Vec<Complex64>>>()?;
    Ok(ParameterList::new(values))
}

/// Output record for an exact rational value.
pub fn exact_value_json(value: &Rat) -> Value {
    json!({ "value": format_rat(value), "exact": true })
}

/// Output record for an exact complex value; falls back to floats when the
/// cyclotomic value has no rational-complex form.
pub fn cyc_value_json(value: &Cyc) -> Value {
    match value.as_qcomplex() {
        Some(q) => {
            let c = q.to_complex64();
            json!({
                "value": q.format(),
                "value_re": c.re,
                "value_im": c.im,
                "exact": true
            })
        }
        None => {
            let c = value.to_complex64();
            json!({ "value_re": c.re, "value_im": c.im, "exact": false })
        }
    }
}

pub fn complex_value_json(value: Complex64) -> Value {
    json!({ "value_re": value.re, "value_im": value.im, "exact": false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn phi_roundtrip() {
        let phi = parse_phi(r#"{"dim":2,"vectors":[[1,0],[0,1],[1,1]]}"#).unwrap();
        assert!(phi.spans && phi.salient);
        let back = phi_to_json(&phi);
        let again = parse_phi(&back.to_string()).unwrap();
        assert_eq!(phi, again);
        assert!(parse_phi(r#"{"dim":2,"vectors":[[1],[0,1]]}"#).is_err());
    }

    #[test]
    fn vectors_and_points() {
        let v = parse_rational_vector("3/2").unwrap();
        assert_eq!(v.coords, vec![rat(3, 2)]);
        let w = parse_rational_vector(r#"["1/2", "-2/3"]"#).unwrap();
        assert_eq!(w.coords, vec![rat(1, 2), rat(-2, 3)]);
        assert_eq!(parse_lattice_point("[2,-1]").unwrap(), vec![2, -1]);
        assert_eq!(parse_lattice_point("7").unwrap(), vec![7]);
    }

    #[test]
    fn lattice_function_roundtrip() {
        let f = parse_lattice_function(
            r#"{"support": [[0],[2]], "values": ["1/2,-1/3", "4"]}"#,
        )
        .unwrap();
        assert_eq!(f.value(&[0]), QComplex::new(rat(1, 2), rat(-1, 3)));
        assert_eq!(f.value(&[2]), QComplex::from_rat(rat(4, 1)));
        let back = lattice_function_to_json(&f).to_string();
        let again = parse_lattice_function(&back).unwrap();
        assert_eq!(f, again);
    }
}
