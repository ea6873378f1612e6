//! Recursive-descent parser. Each statement ends at `.`; after an error
//! the parser skips to the next `.` and carries on, so one pass reports
//! every broken statement.

use std::collections::{BTreeMap, BTreeSet};

use super::lexer::{lex, Tok, Token};
use super::{Diagnostic, Parsed, SourceSpan};
use crate::theory::{
    Arrow, BodyAtom, Conjunction, Literal, OtimesChain, Rule, Theory, TheoryError, TheoryWarning,
};

struct RawRule {
    label: String,
    label_span: SourceSpan,
    span: SourceSpan,
    body: Vec<BodyAtom>,
    arrow: Arrow,
    head: Vec<Literal>,
    head_span: SourceSpan,
}

struct RawSup {
    stronger: (String, SourceSpan),
    weaker: (String, SourceSpan),
    span: SourceSpan,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    eof: SourceSpan,
    diags: Vec<Diagnostic>,
    facts: Vec<(Literal, SourceSpan)>,
    rules: Vec<RawRule>,
    sups: Vec<RawSup>,
}

type PResult<T> = Result<T, Diagnostic>;

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.tok)
    }

    fn span(&self) -> SourceSpan {
        self.toks.get(self.pos).map_or(self.eof, |t| t.span)
    }

    fn prev_span(&self) -> SourceSpan {
        self.pos
            .checked_sub(1)
            .and_then(|i| self.toks.get(i))
            .map_or(self.eof, |t| t.span)
    }

    fn unexpected(&self, wanted: &str) -> Diagnostic {
        let found = self
            .peek()
            .map_or_else(|| "end of input".to_string(), Tok::describe);
        Diagnostic::error(format!("expected {wanted}, found {found}"), self.span())
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok, wanted: &str) -> PResult<SourceSpan> {
        if self.eat(t) {
            Ok(self.prev_span())
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn ident(&mut self, wanted: &str) -> PResult<(String, SourceSpan)> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok((s, self.prev_span()))
            }
            _ => Err(self.unexpected(wanted)),
        }
    }

    fn literal(&mut self) -> PResult<(Literal, SourceSpan)> {
        let start = self.span();
        let positive = !self.eat(&Tok::Tilde);
        let (name, end) = self.ident("a literal")?;
        Ok((Literal::new(crate::theory::Atom::new(name), positive), start.join(end)))
    }

    fn recover(&mut self) {
        while let Some(t) = self.peek() {
            let dot = *t == Tok::Dot;
            self.pos += 1;
            if dot {
                break;
            }
        }
    }

    fn statement(&mut self) -> PResult<()> {
        let start = self.span();
        let is_fact_kw = matches!(self.peek(), Some(Tok::Ident(s)) if s == "fact")
            && !matches!(self.peek_at(1), Some(Tok::Colon | Tok::Gt));
        if is_fact_kw {
            self.pos += 1;
            if matches!(self.peek(), Some(Tok::OblOpen | Tok::NegOblOpen)) {
                return Err(Diagnostic::error(
                    "deontic literal not allowed as fact",
                    self.span(),
                ));
            }
            let (l, _) = self.literal()?;
            let end = self.expect(&Tok::Dot, "`.`")?;
            self.facts.push((l, start.join(end)));
            return Ok(());
        }
        let (label, label_span) = self.ident("`fact`, a rule label or a superiority statement")?;
        match self.peek() {
            Some(Tok::Colon) => {
                self.pos += 1;
                self.rule(label, label_span, start)
            }
            Some(Tok::Gt) => {
                self.pos += 1;
                let weaker = self.ident("a rule label")?;
                let end = self.expect(&Tok::Dot, "`.`")?;
                self.sups.push(RawSup {
                    stronger: (label, label_span),
                    weaker,
                    span: start.join(end),
                });
                Ok(())
            }
            _ => Err(self.unexpected("`:` or `>`")),
        }
    }

    fn body_atom(&mut self) -> PResult<BodyAtom> {
        match self.peek() {
            Some(Tok::OblOpen) => {
                let open = self.span();
                self.pos += 1;
                let mut lits = vec![self.literal()?.0];
                while self.eat(&Tok::Amp) {
                    lits.push(self.literal()?.0);
                }
                let close = self.expect(&Tok::Close, "`]` or `&`")?;
                if lits.len() == 1 {
                    return Ok(BodyAtom::Obl(lits.pop().unwrap()));
                }
                Conjunction::new(lits)
                    .map(BodyAtom::ConjObl)
                    .map_err(|e| Diagnostic::error(e.to_string(), open.join(close)))
            }
            Some(Tok::NegOblOpen) => {
                self.pos += 1;
                let (l, _) = self.literal()?;
                self.expect(&Tok::Close, "`]`")?;
                Ok(BodyAtom::NegObl(l))
            }
            _ => Ok(BodyAtom::Plain(self.literal()?.0)),
        }
    }

    fn rule(&mut self, label: String, label_span: SourceSpan, start: SourceSpan) -> PResult<()> {
        let mut body = Vec::new();
        if !matches!(self.peek(), Some(Tok::Arrow(_))) {
            body.push(self.body_atom()?);
            while self.eat(&Tok::Comma) {
                body.push(self.body_atom()?);
            }
        }
        let arrow = match self.peek() {
            Some(Tok::Arrow(a)) => *a,
            _ => return Err(self.unexpected("an arrow (`=>`, `~>`, `=O>`, `~O>`)")),
        };
        self.pos += 1;
        let (first, first_span) = self.literal()?;
        let mut head = vec![first];
        let mut head_span = first_span;
        while self.eat(&Tok::Star) {
            let (l, s) = self.literal()?;
            head.push(l);
            head_span = head_span.join(s);
        }
        let end = self.expect(&Tok::Dot, "`*` or `.`")?;
        self.rules.push(RawRule {
            label,
            label_span,
            span: start.join(end),
            body,
            arrow,
            head,
            head_span,
        });
        Ok(())
    }
}

pub(crate) fn parse(src: &str) -> Result<Parsed, Vec<Diagnostic>> {
    let (toks, lex_diags) = lex(src);
    let eof = SourceSpan::at_end(src);
    let mut p = Parser {
        toks,
        pos: 0,
        eof,
        diags: lex_diags,
        facts: Vec::new(),
        rules: Vec::new(),
        sups: Vec::new(),
    };
    while p.peek().is_some() {
        if let Err(d) = p.statement() {
            p.diags.push(d);
            p.recover();
        }
    }

    let mut diags = p.diags;
    let mut rules = Vec::new();
    let mut rule_spans: BTreeMap<String, SourceSpan> = BTreeMap::new();
    for raw in p.rules {
        if rule_spans.contains_key(&raw.label) {
            diags.push(Diagnostic::error(
                TheoryError::DuplicateLabel(raw.label.clone()).to_string(),
                raw.label_span,
            ));
            continue;
        }
        let head = OtimesChain::new(raw.head).expect("parser yields a nonempty head");
        match Rule::new(raw.label.clone(), raw.body, raw.arrow, head) {
            Ok(r) => {
                rule_spans.insert(raw.label, raw.span);
                rules.push(r);
            }
            Err(e) => {
                let span = match e {
                    TheoryError::ChainOnSingleHeadRule { .. } => raw.head_span,
                    _ => raw.label_span,
                };
                rule_spans.insert(raw.label, raw.span);
                diags.push(Diagnostic::error(e.to_string(), span));
            }
        }
    }
    let mut sup = BTreeSet::new();
    let mut sup_spans: BTreeMap<(String, String), SourceSpan> = BTreeMap::new();
    for s in p.sups {
        let mut ok = true;
        for (l, span) in [&s.stronger, &s.weaker] {
            if !rule_spans.contains_key(l) {
                diags.push(Diagnostic::error(
                    TheoryError::UnknownLabel(l.clone()).to_string(),
                    *span,
                ));
                ok = false;
            }
        }
        if ok {
            let pair = (s.stronger.0, s.weaker.0);
            sup_spans.entry(pair.clone()).or_insert(s.span);
            sup.insert(pair);
        }
    }
    if !diags.is_empty() {
        diags.sort_by_key(|d| d.span.start);
        return Err(diags);
    }

    let mut fact_spans: BTreeMap<Literal, SourceSpan> = BTreeMap::new();
    for (l, s) in &p.facts {
        fact_spans.entry(l.clone()).or_insert(*s);
    }
    let theory = Theory::new(p.facts.into_iter().map(|(l, _)| l), rules, sup)
        .expect("labels and superiority were checked above");
    let warnings = theory
        .warnings()
        .iter()
        .map(|w| {
            let span = match w {
                TheoryWarning::ComplementaryFacts(l) => fact_spans[&l.complement()],
                TheoryWarning::SuperiorityCycle(cycle) => {
                    sup_spans[&(cycle[0].clone(), cycle[1].clone())]
                }
                TheoryWarning::ComplementaryConjunction { rule, .. } => rule_spans[rule],
            };
            Diagnostic::warning(w.to_string(), span)
        })
        .collect();
    Ok(Parsed { theory, warnings })
}
