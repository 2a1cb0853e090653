//! Canonical JSON for machines and interpretations: object keys sorted,
//! list-valued fields sorted and deduplicated (except the machine's state
//! list, whose order is the machine's total state order and therefore
//! semantic), compact whitespace.

use serde_json::{json, Map, Value};

use crate::atm::{Atm, Dir, RawAtm, Transition};
use crate::dl::Interpretation;
use crate::serial::SerialError;

pub fn emit_atm(atm: &Atm) -> String {
    let delta: Vec<Value> = atm
        .delta()
        .iter()
        .map(|t| {
            json!([
                t.source,
                u8::from(t.read),
                u8::from(t.write),
                t.target,
                t.dir.offset()
            ])
        })
        .collect();
    let existential: Vec<&String> = atm.existential_states().iter().collect();
    let mut m = Map::new();
    m.insert("accepting".into(), json!(atm.accepting_state()));
    m.insert("delta".into(), Value::Array(delta));
    m.insert("existential".into(), json!(existential));
    m.insert("initial".into(), json!(atm.initial_state()));
    m.insert("n".into(), json!(atm.n()));
    m.insert("rejecting".into(), json!(atm.rejecting_state()));
    m.insert("states".into(), json!(atm.states()));
    Value::Object(m).to_string()
}

fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>, SerialError> {
    v.as_object()
        .ok_or_else(|| SerialError::Schema(format!("{what} must be an object")))
}

fn string_field(m: &Map<String, Value>, key: &str) -> Result<String, SerialError> {
    m.get(key)
        .and_then(Value::as_str)
        .map(str::to_string)
        .ok_or_else(|| SerialError::Schema(format!("missing or non-string field {key:?}")))
}

fn string_array(m: &Map<String, Value>, key: &str) -> Result<Vec<String>, SerialError> {
    let arr = m
        .get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| SerialError::Schema(format!("missing or non-array field {key:?}")))?;
    arr.iter()
        .map(|v| {
            v.as_str()
                .map(str::to_string)
                .ok_or_else(|| SerialError::Schema(format!("{key:?} entries must be strings")))
        })
        .collect()
}

fn parse_letter(v: &Value, what: &str) -> Result<bool, SerialError> {
    match v.as_i64() {
        Some(0) => Ok(false),
        Some(1) => Ok(true),
        _ => Err(SerialError::Schema(format!("{what} must be 0 or 1"))),
    }
}

/// Parses and validates a machine. Returns the machine together with any
/// warnings (currently only duplicate-transition deduplication notes).
pub fn parse_atm(text: &str) -> Result<(Atm, Vec<String>), SerialError> {
    let value: Value = serde_json::from_str(text).map_err(|e| SerialError::Json(e.to_string()))?;
    let m = as_object(&value, "a machine description")?;
    for key in m.keys() {
        if !matches!(
            key.as_str(),
            "accepting" | "delta" | "existential" | "initial" | "n" | "rejecting" | "states"
        ) {
            return Err(SerialError::Schema(format!("unknown field {key:?}")));
        }
    }
    let n = m
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| SerialError::Schema("missing or non-numeric field \"n\"".into()))?;
    let delta_value = m
        .get("delta")
        .and_then(Value::as_array)
        .ok_or_else(|| SerialError::Schema("missing or non-array field \"delta\"".into()))?;

    let mut delta = Vec::new();
    let mut warnings = Vec::new();
    for (i, row) in delta_value.iter().enumerate() {
        let row = row
            .as_array()
            .filter(|r| r.len() == 5)
            .ok_or_else(|| SerialError::Schema(format!("delta[{i}] must be a 5-tuple")))?;
        let source = row[0]
            .as_str()
            .ok_or_else(|| SerialError::Schema(format!("delta[{i}]: s must be a string")))?;
        let target = row[3]
            .as_str()
            .ok_or_else(|| SerialError::Schema(format!("delta[{i}]: s' must be a string")))?;
        let dir = row[4]
            .as_i64()
            .and_then(Dir::from_offset)
            .ok_or_else(|| SerialError::Schema(format!("delta[{i}]: d must be -1 or 1")))?;
        let t = Transition {
            source: source.to_string(),
            read: parse_letter(&row[1], &format!("delta[{i}]: a"))?,
            write: parse_letter(&row[2], &format!("delta[{i}]: b"))?,
            target: target.to_string(),
            dir,
        };
        if delta.contains(&t) {
            warnings.push(format!("duplicate transition {t} deduplicated"));
        } else {
            delta.push(t);
        }
    }

    let raw = RawAtm {
        n: u32::try_from(n).map_err(|_| SerialError::Schema("\"n\" too large".into()))?,
        states: string_array(m, "states")?,
        existential: string_array(m, "existential")?,
        initial: string_field(m, "initial")?,
        accepting: string_field(m, "accepting")?,
        rejecting: string_field(m, "rejecting")?,
        delta,
    };
    let atm = raw.validate().map_err(|violations| {
        SerialError::InvalidAtm(
            violations
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join("; "),
        )
    })?;
    Ok((atm, warnings))
}

pub fn emit_interp(interp: &Interpretation) -> String {
    let mut concepts = Map::new();
    for name in interp.concept_names() {
        let ext: Vec<String> = interp.concept_ext(name).into_iter().collect();
        concepts.insert(name.clone(), json!(ext));
    }
    let mut roles = Map::new();
    for name in interp.role_names() {
        let ext: Vec<Value> = interp
            .role_ext(name)
            .into_iter()
            .map(|(a, b)| json!([a, b]))
            .collect();
        roles.insert(name.clone(), Value::Array(ext));
    }
    let mut individuals = Map::new();
    for (name, elem) in interp.individuals() {
        individuals.insert(name.clone(), json!(elem));
    }
    let mut m = Map::new();
    m.insert("concepts".into(), Value::Object(concepts));
    m.insert(
        "domain".into(),
        json!(interp.domain().iter().collect::<Vec<_>>()),
    );
    m.insert("individuals".into(), Value::Object(individuals));
    m.insert("roles".into(), Value::Object(roles));
    Value::Object(m).to_string()
}

pub fn parse_interp(text: &str) -> Result<Interpretation, SerialError> {
    let value: Value = serde_json::from_str(text).map_err(|e| SerialError::Json(e.to_string()))?;
    let m = as_object(&value, "an interpretation")?;
    for key in m.keys() {
        if !matches!(
            key.as_str(),
            "concepts" | "domain" | "individuals" | "roles"
        ) {
            return Err(SerialError::Schema(format!("unknown field {key:?}")));
        }
    }
    let mut interp = Interpretation::new();
    let domain = string_array(m, "domain")?;
    for e in &domain {
        interp.add_element(e.clone());
    }
    let in_domain = |e: &str| domain.iter().any(|d| d == e);

    if let Some(concepts) = m.get("concepts") {
        for (name, ext) in as_object(concepts, "\"concepts\"")? {
            let ext = ext
                .as_array()
                .ok_or_else(|| SerialError::Schema(format!("concept {name:?} must be an array")))?;
            for e in ext {
                let e = e.as_str().ok_or_else(|| {
                    SerialError::Schema(format!("concept {name:?} entries must be strings"))
                })?;
                if !in_domain(e) {
                    return Err(SerialError::OutsideDomain {
                        element: e.to_string(),
                    });
                }
                interp.add_to_concept(name.clone(), e);
            }
        }
    }
    if let Some(roles) = m.get("roles") {
        for (name, ext) in as_object(roles, "\"roles\"")? {
            let ext = ext
                .as_array()
                .ok_or_else(|| SerialError::Schema(format!("role {name:?} must be an array")))?;
            for pair in ext {
                let pair = pair.as_array().filter(|p| p.len() == 2).ok_or_else(|| {
                    SerialError::Schema(format!("role {name:?} entries must be pairs"))
                })?;
                let (a, b) = (pair[0].as_str(), pair[1].as_str());
                let (a, b) = match (a, b) {
                    (Some(a), Some(b)) => (a, b),
                    _ => {
                        return Err(SerialError::Schema(format!(
                            "role {name:?} entries must be string pairs"
                        )))
                    }
                };
                for e in [a, b] {
                    if !in_domain(e) {
                        return Err(SerialError::OutsideDomain {
                            element: e.to_string(),
                        });
                    }
                }
                interp.add_role_pair(name.clone(), a, b);
            }
        }
    }
    if let Some(individuals) = m.get("individuals") {
        for (name, elem) in as_object(individuals, "\"individuals\"")? {
            let elem = elem.as_str().ok_or_else(|| {
                SerialError::Schema(format!("individual {name:?} must map to a string"))
            })?;
            if !in_domain(elem) {
                return Err(SerialError::OutsideDomain {
                    element: elem.to_string(),
                });
            }
            interp.set_individual(name.clone(), elem);
        }
    }
    Ok(interp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atm::tiny_acceptor;
    use crate::witness::build_unit;

    #[test]
    fn atm_round_trip() {
        let atm = tiny_acceptor();
        let text = emit_atm(&atm);
        let (back, warnings) = parse_atm(&text).unwrap();
        assert!(warnings.is_empty());
        assert_eq!(atm, back);
        assert_eq!(emit_atm(&back), text);
    }

    #[test]
    fn zero_direction_is_a_schema_error() {
        let text = emit_atm(&tiny_acceptor()).replace("-1", "0");
        let err = parse_atm(&text).unwrap_err();
        assert!(matches!(err, SerialError::Schema(_)), "{err}");
    }

    #[test]
    fn duplicate_transitions_warn_and_deduplicate() {
        let atm = tiny_acceptor();
        let mut v: serde_json::Value = serde_json::from_str(&emit_atm(&atm)).unwrap();
        let delta = v["delta"].as_array_mut().unwrap();
        let dup = delta[0].clone();
        delta.push(dup);
        let (back, warnings) = parse_atm(&v.to_string()).unwrap();
        assert_eq!(warnings.len(), 1);
        assert_eq!(back, atm);
    }

    #[test]
    fn unit_interp_emission_matches_the_documented_shape() {
        let text = emit_interp(&build_unit(1).unwrap());
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["domain"], serde_json::json!(["", "0", "1"]));
        assert_eq!(
            v["roles"]["next"],
            serde_json::json!([["0", "0"], ["1", "1"]])
        );
    }

    #[test]
    fn interp_round_trip_and_domain_check() {
        let u = build_unit(2).unwrap();
        let text = emit_interp(&u);
        let back = parse_interp(&text).unwrap();
        assert_eq!(u, back);
        assert_eq!(emit_interp(&back), text);

        let bad = r#"{"concepts":{"A":["x"]},"domain":["y"],"individuals":{},"roles":{}}"#;
        assert!(matches!(
            parse_interp(bad),
            Err(SerialError::OutsideDomain { .. })
        ));
    }
}
