//! JSON documents for spaces, systems, elements, functions and certificates.
//!
//! Rationals are read from integers or `"p/q"` strings and always written
//! as canonical strings. Object keys come out sorted, so output is
//! byte-stable.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::metric::{FiniteMetricSpace, RawSpace};
use crate::molecule::{MoleculeSystem, PointMassElement};
use crate::norming::LipschitzFunction;
use crate::potential::NegativeCycleWitness;
use crate::rational::{from_json, to_json, Rational};
use crate::transport::TransportCertificate;

fn field<'a>(doc: &'a Value, name: &str, what: &str) -> Result<&'a Value> {
    doc.get(name)
        .ok_or_else(|| Error::Parse(format!("{what} document has no \"{name}\" field")))
}

fn array<'a>(value: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    value
        .as_array()
        .ok_or_else(|| Error::Parse(format!("{what} must be an array")))
}

fn string<'a>(value: &'a Value, what: &str) -> Result<&'a str> {
    value
        .as_str()
        .ok_or_else(|| Error::Parse(format!("{what} must be a string")))
}

fn resolve(space: &FiniteMetricSpace, label: &str) -> Result<usize> {
    space
        .index_of(label)
        .ok_or_else(|| Error::Parse(format!("unknown label {label:?}")))
}

/// `{"labels": [...], "base": "<label>", "dist": [[...]]}`.
pub fn parse_space(doc: &Value) -> Result<RawSpace> {
    let labels = array(field(doc, "labels", "space")?, "labels")?
        .iter()
        .map(|l| string(l, "label").map(str::to_owned))
        .collect::<Result<Vec<_>>>()?;
    let base = string(field(doc, "base", "space")?, "base")?.to_owned();
    let dist = array(field(doc, "dist", "space")?, "dist")?
        .iter()
        .map(|row| array(row, "dist row")?.iter().map(from_json).collect())
        .collect::<Result<Vec<Vec<Rational>>>>()?;
    Ok(RawSpace { labels, base, dist })
}

pub fn space_to_json(space: &FiniteMetricSpace) -> Value {
    json!({
        "labels": space.labels(),
        "base": space.label(space.base()),
        "dist": space
            .dist()
            .iter()
            .map(|row| row.iter().map(to_json).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    })
}

/// `{"pairs": [["a", "0"], ...], "weights": ["1/2", ...]}`.
pub fn parse_system(space: &FiniteMetricSpace, doc: &Value) -> Result<MoleculeSystem> {
    let pairs = array(field(doc, "pairs", "system")?, "pairs")?
        .iter()
        .map(|p| {
            let p = array(p, "pair")?;
            if p.len() != 2 {
                return Err(Error::Parse("each pair must have two labels".into()));
            }
            Ok((
                resolve(space, string(&p[0], "pair label")?)?,
                resolve(space, string(&p[1], "pair label")?)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let weights = array(field(doc, "weights", "system")?, "weights")?
        .iter()
        .map(from_json)
        .collect::<Result<Vec<_>>>()?;
    MoleculeSystem::new(space, pairs, weights)
}

pub fn system_to_json(space: &FiniteMetricSpace, system: &MoleculeSystem) -> Value {
    json!({
        "pairs": system
            .pairs()
            .iter()
            .map(|&(x, y)| json!([space.label(x), space.label(y)]))
            .collect::<Vec<_>>(),
        "weights": system.weights().iter().map(to_json).collect::<Vec<_>>(),
    })
}

/// `{"coeffs": {"a": "1/4", ...}}`.
pub fn parse_element(space: &FiniteMetricSpace, doc: &Value) -> Result<PointMassElement> {
    let coeffs = field(doc, "coeffs", "element")?
        .as_object()
        .ok_or_else(|| Error::Parse("coeffs must be an object".into()))?;
    let mut map = BTreeMap::new();
    for (label, c) in coeffs {
        map.insert(resolve(space, label)?, from_json(c)?);
    }
    PointMassElement::new(space, map)
}

pub fn element_to_json(space: &FiniteMetricSpace, element: &PointMassElement) -> Value {
    let coeffs: Map<String, Value> = element
        .coeffs()
        .iter()
        .map(|(&p, c)| (space.label(p).to_owned(), to_json(c)))
        .collect();
    json!({ "coeffs": coeffs })
}

/// `{"values": {"label": "p/q", ...}, "lip": "p/q"}`. Every point needs a
/// value; a stated `lip` must match the recomputed constant.
pub fn parse_function(space: &FiniteMetricSpace, doc: &Value) -> Result<LipschitzFunction> {
    let values = field(doc, "values", "function")?
        .as_object()
        .ok_or_else(|| Error::Parse("values must be an object".into()))?;
    let mut out: Vec<Option<Rational>> = vec![None; space.len()];
    for (label, v) in values {
        out[resolve(space, label)?] = Some(from_json(v)?);
    }
    let values = out
        .into_iter()
        .enumerate()
        .map(|(p, v)| {
            v.ok_or_else(|| Error::Parse(format!("function has no value at {}", space.label(p))))
        })
        .collect::<Result<Vec<_>>>()?;
    let f = LipschitzFunction::new(space, values)?;
    if let Some(stated) = doc.get("lip") {
        let stated = from_json(stated)?;
        if &stated != f.lip() {
            return Err(Error::invalid(format!(
                "stated Lipschitz constant {} differs from the actual {}",
                crate::rational::render(&stated),
                crate::rational::render(f.lip())
            )));
        }
    }
    Ok(f)
}

pub fn function_to_json(space: &FiniteMetricSpace, f: &LipschitzFunction) -> Value {
    json!({
        "values": labelled_values(space, f.values()),
        "lip": to_json(f.lip()),
    })
}

/// `{"label": value}` for a full vector of values.
pub fn labelled_values(space: &FiniteMetricSpace, values: &[Rational]) -> Value {
    let map: Map<String, Value> = values
        .iter()
        .enumerate()
        .map(|(p, v)| (space.label(p).to_owned(), to_json(v)))
        .collect();
    Value::Object(map)
}

pub fn certificate_to_json(space: &FiniteMetricSpace, cert: &TransportCertificate) -> Value {
    json!({
        "value": to_json(&cert.value),
        "plan": cert
            .plan
            .iter()
            .map(|l| json!([space.label(l.source), space.label(l.sink), to_json(&l.mass)]))
            .collect::<Vec<_>>(),
        "dual": function_to_json(space, &cert.dual),
    })
}

/// Cycle with 1-based pair indices, its β-sum and the violated inequality.
pub fn witness_to_json(
    space: &FiniteMetricSpace,
    pairs: &[(usize, usize)],
    witness: &NegativeCycleWitness,
) -> Value {
    json!({
        "cycle": witness.cycle.iter().map(|i| i + 1).collect::<Vec<_>>(),
        "pairs": witness
            .cycle
            .iter()
            .map(|&i| json!([space.label(pairs[i].0), space.label(pairs[i].1)]))
            .collect::<Vec<_>>(),
        "sum": to_json(&witness.sum),
        "inequality": witness.render_inequality(space, pairs),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::triangle;
    use crate::rational::{int, ratio};

    #[test]
    fn space_round_trip() {
        let space = triangle();
        let doc = space_to_json(&space);
        let back = FiniteMetricSpace::new(parse_space(&doc).unwrap()).unwrap();
        assert_eq!(back, space);
    }

    #[test]
    fn mixed_rational_encodings() {
        let doc = json!({"labels": ["0", "a"], "base": "0", "dist": [[0, "1/2"], ["2/4", 0]]});
        let raw = parse_space(&doc).unwrap();
        assert_eq!(raw.dist[0][1], ratio(1, 2));
        let bad = json!({"labels": ["0", "a"], "base": "0", "dist": [[0, 0.5], [0.5, 0]]});
        assert!(matches!(parse_space(&bad), Err(Error::Parse(_))));
        assert!(parse_space(&json!({"labels": []})).is_err());
    }

    #[test]
    fn system_and_element() {
        let space = triangle();
        let sys = parse_system(
            &space,
            &json!({"pairs": [["a", "0"], ["0", "b"]], "weights": ["1/2", "1/2"]}),
        )
        .unwrap();
        assert_eq!(sys.pairs(), &[(1, 0), (0, 2)]);
        assert_eq!(
            parse_system(&space, &system_to_json(&space, &sys)).unwrap(),
            sys
        );
        assert!(parse_system(&space, &json!({"pairs": [["a", "z"]], "weights": [1]})).is_err());

        let e = parse_element(
            &space,
            &json!({"coeffs": {"a": "1/4", "b": "-1/2", "0": 5}}),
        )
        .unwrap();
        assert_eq!(e.coeff(1), ratio(1, 4));
        assert_eq!(e.coeff(0), int(0));
        assert_eq!(
            element_to_json(&space, &e),
            json!({"coeffs": {"a": "1/4", "b": "-1/2"}})
        );
    }

    #[test]
    fn functions() {
        let space = triangle();
        let f = parse_function(&space, &json!({"values": {"0": 0, "a": 2, "b": "1"}})).unwrap();
        assert_eq!(f.lip(), &int(1));
        assert_eq!(
            parse_function(&space, &function_to_json(&space, &f)).unwrap(),
            f
        );
        assert!(parse_function(&space, &json!({"values": {"0": 0, "a": 2}})).is_err());
        assert!(parse_function(
            &space,
            &json!({"values": {"0": 0, "a": 2, "b": 1}, "lip": "1/2"})
        )
        .is_err());
    }
}
