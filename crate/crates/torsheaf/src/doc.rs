//! JSON documents carrying one sheaf, either as rank-2 reflexive data or as
//! a family of multifiltrations.
//!
//! The canonical form is compact JSON with sorted keys:
//! `{"data": {...}, "kind": "reflexive", "label": "...", "n": 4, "rank": 2}`.
//! Bare reflexive or multifiltration objects are accepted on input.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::multifilt::{multifiltration_from_json, multifiltration_to_json, Multifiltration};
use crate::reflexive_r2::R2Filtration;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SheafBody {
    Reflexive(R2Filtration),
    Multifiltration(Multifiltration),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SheafDocument {
    pub label: Option<String>,
    pub body: SheafBody,
}

impl SheafDocument {
    pub fn reflexive(f: R2Filtration) -> Self {
        SheafDocument { label: None, body: SheafBody::Reflexive(f) }
    }

    pub fn multifiltration(m: Multifiltration) -> Self {
        SheafDocument { label: None, body: SheafBody::Multifiltration(m) }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn n(&self) -> usize {
        match &self.body {
            SheafBody::Reflexive(f) => f.n(),
            SheafBody::Multifiltration(m) => m.n(),
        }
    }

    pub fn rank(&self) -> usize {
        match &self.body {
            SheafBody::Reflexive(_) => 2,
            SheafBody::Multifiltration(m) => m.rank(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match &self.body {
            SheafBody::Reflexive(_) => "reflexive",
            SheafBody::Multifiltration(_) => "multifiltration",
        }
    }

    pub fn as_reflexive(&self) -> Option<&R2Filtration> {
        match &self.body {
            SheafBody::Reflexive(f) => Some(f),
            SheafBody::Multifiltration(_) => None,
        }
    }

    pub fn to_multifiltration(&self) -> Multifiltration {
        match &self.body {
            SheafBody::Reflexive(f) => f.to_multifiltration(),
            SheafBody::Multifiltration(m) => m.clone(),
        }
    }

    pub fn to_json(&self) -> Value {
        let data = match &self.body {
            SheafBody::Reflexive(f) => f.to_json(),
            SheafBody::Multifiltration(m) => multifiltration_to_json(m),
        };
        let mut obj = Map::new();
        obj.insert("kind".into(), json!(self.kind()));
        obj.insert("n".into(), json!(self.n()));
        obj.insert("rank".into(), json!(self.rank()));
        obj.insert("data".into(), Value::Object(data));
        if let Some(l) = &self.label {
            obj.insert("label".into(), json!(l));
        }
        Value::Object(obj)
    }

    pub fn to_canonical_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("values serialize")
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("a sheaf document must be an object".into()))?;
        let doc = match obj.get("kind") {
            None if obj.contains_key("rays") => SheafDocument::reflexive(R2Filtration::from_json(v)?),
            None if obj.contains_key("cones") => SheafDocument::multifiltration(multifiltration_from_json(v)?),
            None => return Err(Error::Parse("missing \"kind\"".into())),
            Some(kind) => {
                let data = obj.get("data").ok_or_else(|| Error::Parse("missing \"data\"".into()))?;
                let body = match kind.as_str() {
                    Some("reflexive") => SheafBody::Reflexive(R2Filtration::from_json(data)?),
                    Some("multifiltration") => SheafBody::Multifiltration(multifiltration_from_json(data)?),
                    _ => return Err(Error::Parse(format!("unknown document kind {kind}"))),
                };
                let label = match obj.get("label") {
                    None | Some(Value::Null) => None,
                    Some(Value::String(s)) => Some(s.clone()),
                    Some(_) => return Err(Error::Parse("label must be a string".into())),
                };
                SheafDocument { label, body }
            }
        };
        for (key, actual) in [("n", doc.n()), ("rank", doc.rank())] {
            if let Some(declared) = obj.get(key) {
                if declared.as_u64() != Some(actual as u64) {
                    return Err(Error::Parse(format!("declared {key} = {declared} but the data has {actual}")));
                }
            }
        }
        Ok(doc)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&v)
    }
}

/// Compact JSON with sorted keys.
pub fn canonical(v: &Value) -> String {
    serde_json::to_string(v).expect("values serialize")
}
