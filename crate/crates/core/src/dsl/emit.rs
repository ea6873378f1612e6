use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::Extension;
use crate::theory::{Conjunction, Literal};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ExtensionFormat {
    #[default]
    Json,
    Text,
}

#[derive(Serialize, Deserialize)]
struct Wire {
    factual_pos: Vec<String>,
    factual_neg: Vec<String>,
    obligation_pos: Vec<String>,
    obligation_neg: Vec<String>,
    conj_pos: Vec<String>,
    conj_neg: Vec<String>,
}

fn sorted<T: ToString>(items: impl IntoIterator<Item = T>) -> Vec<String> {
    let mut v: Vec<String> = items.into_iter().map(|x| x.to_string()).collect();
    v.sort();
    v
}

impl Wire {
    fn of(e: &Extension) -> Self {
        Wire {
            factual_pos: sorted(&e.factual_pos),
            factual_neg: sorted(&e.factual_neg),
            obligation_pos: sorted(&e.obligation_pos),
            obligation_neg: sorted(&e.obligation_neg),
            conj_pos: sorted(&e.conj_pos),
            conj_neg: sorted(&e.conj_neg),
        }
    }

    fn fields(&self) -> [(&'static str, &[String]); 6] {
        [
            ("factual_pos", &self.factual_pos),
            ("factual_neg", &self.factual_neg),
            ("obligation_pos", &self.obligation_pos),
            ("obligation_neg", &self.obligation_neg),
            ("conj_pos", &self.conj_pos),
            ("conj_neg", &self.conj_neg),
        ]
    }
}

/// Renders `e` with the six sets under fixed keys, each sorted by its
/// rendered form. Output ends with a newline.
pub fn emit_extension(e: &Extension, format: ExtensionFormat) -> String {
    let w = Wire::of(e);
    match format {
        ExtensionFormat::Json => {
            let mut s = serde_json::to_string_pretty(&w).expect("string arrays serialise");
            s.push('\n');
            s
        }
        ExtensionFormat::Text => {
            let mut s = String::new();
            for (k, v) in w.fields() {
                s.push_str(&format!("{k}: {}\n", v.join(", ")));
            }
            s
        }
    }
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("malformed extension JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("`{0}` is not a literal")]
    Literal(String),
    #[error("`{0}` is not a conjunction")]
    Conjunction(String),
}

/// Reads back the JSON produced by [`emit_extension`].
pub fn ingest_extension(json: &str) -> Result<Extension, IngestError> {
    let w: Wire = serde_json::from_str(json)?;
    let lits = |v: Vec<String>| {
        v.into_iter()
            .map(|s| Literal::parse(&s).ok_or(IngestError::Literal(s)))
            .collect::<Result<_, _>>()
    };
    let conjs = |v: Vec<String>| {
        v.into_iter()
            .map(|s| Conjunction::parse(&s).ok_or(IngestError::Conjunction(s)))
            .collect::<Result<_, _>>()
    };
    Ok(Extension {
        factual_pos: lits(w.factual_pos)?,
        factual_neg: lits(w.factual_neg)?,
        obligation_pos: lits(w.obligation_pos)?,
        obligation_neg: lits(w.obligation_neg)?,
        conj_pos: conjs(w.conj_pos)?,
        conj_neg: conjs(w.conj_neg)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_extension() {
        let s = emit_extension(&Extension::default(), ExtensionFormat::Json);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        let obj = v.as_object().unwrap();
        assert_eq!(obj.len(), 6);
        assert!(obj.values().all(|a| a.as_array().unwrap().is_empty()));
        let keys: Vec<_> = s
            .lines()
            .filter_map(|l| l.trim().strip_prefix('"'))
            .map(|l| l.split('"').next().unwrap())
            .collect();
        assert_eq!(
            keys,
            ["factual_pos", "factual_neg", "obligation_pos", "obligation_neg", "conj_pos", "conj_neg"]
        );
    }

    #[test]
    fn sorted_by_rendering_and_round_trips() {
        let mut e = Extension::default();
        for l in ["~a", "b", "a", "B"] {
            e.factual_pos.insert(Literal::parse(l).unwrap());
        }
        e.conj_neg.insert(Conjunction::parse("c & d").unwrap());
        let s = emit_extension(&e, ExtensionFormat::Json);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["factual_pos"], serde_json::json!(["B", "a", "b", "~a"]));
        assert_eq!(v["conj_neg"], serde_json::json!(["c & d"]));
        assert_eq!(ingest_extension(&s).unwrap(), e);
        let text = emit_extension(&e, ExtensionFormat::Text);
        assert!(text.contains("factual_pos: B, a, b, ~a\n"));
        assert!(matches!(ingest_extension("{}"), Err(IngestError::Json(_))));
    }
}
