//! Tagged expressions and linear derivations, with the line-oriented file
//! format `+d a`, `-dO a`, `+dO a & b`.

use std::fmt;

use thiserror::Error;

use crate::theory::{Conjunction, Literal};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn is_plus(self) -> bool {
        self == Sign::Plus
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// One of the six tagged forms: `±d q`, `±dO q`, `±dO c1 & ... & cm`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TaggedExpression {
    Factual(Sign, Literal),
    Obligation(Sign, Literal),
    Conjunctive(Sign, Conjunction),
}

impl TaggedExpression {
    pub fn sign(&self) -> Sign {
        match self {
            TaggedExpression::Factual(s, _)
            | TaggedExpression::Obligation(s, _)
            | TaggedExpression::Conjunctive(s, _) => *s,
        }
    }

    /// Same target and tag, opposite sign.
    pub fn negated(&self) -> TaggedExpression {
        match self {
            TaggedExpression::Factual(s, l) => TaggedExpression::Factual(s.flip(), l.clone()),
            TaggedExpression::Obligation(s, l) => TaggedExpression::Obligation(s.flip(), l.clone()),
            TaggedExpression::Conjunctive(s, c) => {
                TaggedExpression::Conjunctive(s.flip(), c.clone())
            }
        }
    }

    pub fn plus_d(l: Literal) -> Self {
        TaggedExpression::Factual(Sign::Plus, l)
    }

    pub fn minus_d(l: Literal) -> Self {
        TaggedExpression::Factual(Sign::Minus, l)
    }

    pub fn plus_o(l: Literal) -> Self {
        TaggedExpression::Obligation(Sign::Plus, l)
    }

    pub fn minus_o(l: Literal) -> Self {
        TaggedExpression::Obligation(Sign::Minus, l)
    }

    pub fn plus_and(c: Conjunction) -> Self {
        TaggedExpression::Conjunctive(Sign::Plus, c)
    }

    pub fn minus_and(c: Conjunction) -> Self {
        TaggedExpression::Conjunctive(Sign::Minus, c)
    }

    /// Parses `+d a`, `-dO ~b`, `+dO a & b`.
    pub fn parse(s: &str) -> Result<Self, StepParseError> {
        let s = s.trim();
        let bad = || StepParseError::Malformed(s.to_string());
        let sign = match s.chars().next() {
            Some('+') => Sign::Plus,
            Some('-') => Sign::Minus,
            _ => return Err(bad()),
        };
        let rest = &s[1..];
        let (obligation, target) = if let Some(t) = rest.strip_prefix("dO") {
            (true, t)
        } else if let Some(t) = rest.strip_prefix('d') {
            (false, t)
        } else {
            return Err(bad());
        };
        if !target.starts_with(char::is_whitespace) {
            return Err(bad());
        }
        if target.contains('&') {
            if !obligation {
                return Err(StepParseError::FactualConjunction(s.to_string()));
            }
            let c = Conjunction::parse(target).ok_or_else(bad)?;
            return Ok(TaggedExpression::Conjunctive(sign, c));
        }
        let l = Literal::parse(target).ok_or_else(bad)?;
        Ok(if obligation {
            TaggedExpression::Obligation(sign, l)
        } else {
            TaggedExpression::Factual(sign, l)
        })
    }
}

impl fmt::Display for TaggedExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TaggedExpression::Factual(s, l) => write!(f, "{}d {l}", s.symbol()),
            TaggedExpression::Obligation(s, l) => write!(f, "{}dO {l}", s.symbol()),
            TaggedExpression::Conjunctive(s, c) => write!(f, "{}dO {c}", s.symbol()),
        }
    }
}

impl fmt::Debug for TaggedExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StepParseError {
    #[error("malformed step `{0}`")]
    Malformed(String),
    #[error("conjunctions only take the dO tag: `{0}`")]
    FactualConjunction(String),
    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<StepParseError>,
    },
}

/// A linear sequence of tagged expressions. Positions are 1-based.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Derivation {
    steps: Vec<TaggedExpression>,
}

impl Derivation {
    pub fn new(steps: Vec<TaggedExpression>) -> Self {
        Derivation { steps }
    }

    pub fn steps(&self) -> &[TaggedExpression] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn push(&mut self, e: TaggedExpression) {
        self.steps.push(e);
    }

    /// `P(1..i)`.
    pub fn prefix(&self, i: usize) -> &[TaggedExpression] {
        &self.steps[..i.min(self.steps.len())]
    }

    /// One step per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, StepParseError> {
        let mut steps = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let step = TaggedExpression::parse(line).map_err(|e| StepParseError::AtLine {
                line: i + 1,
                source: Box::new(e),
            })?;
            steps.push(step);
        }
        Ok(Derivation { steps })
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromIterator<TaggedExpression> for Derivation {
    fn from_iter<I: IntoIterator<Item = TaggedExpression>>(iter: I) -> Self {
        Derivation::new(iter.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        for s in ["+d a", "-d ~a", "+dO b", "-dO ~c", "+dO a & b", "-dO a & ~b & c"] {
            let e = TaggedExpression::parse(s).unwrap();
            assert_eq!(e.to_string(), s);
        }
        assert_eq!(
            TaggedExpression::parse("+dO b & a").unwrap().to_string(),
            "+dO a & b"
        );
    }

    #[test]
    fn parse_rejects_malformed() {
        for s in ["", "d a", "+x a", "+da", "+d", "+d a & b", "+dO a &", "+dO ~"] {
            assert!(TaggedExpression::parse(s).is_err(), "{s}");
        }
    }

    #[test]
    fn derivation_file() {
        let d = Derivation::parse("# header\n+d ~a\n\n+dO a   # r1\n+dO a & b\n").unwrap();
        assert_eq!(d.len(), 3);
        assert_eq!(d.prefix(1), &[TaggedExpression::plus_d(Literal::neg("a"))]);
        let err = Derivation::parse("+d a\n+q b\n").unwrap_err();
        assert!(matches!(err, StepParseError::AtLine { line: 2, .. }));
        assert!(Derivation::parse("").unwrap().is_empty());
    }
}
