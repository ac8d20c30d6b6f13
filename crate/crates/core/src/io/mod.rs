//! Line-oriented text formats for structures, nets and distribution tables.
//!
//! ```text
//! es NAME                     ses NAME
//! events a b c                events a b
//! cause a < b                 enabling { } |- a
//! conflict b c                enabling { a } |- b
//!                             forbidden { a b }
//! net NAME                    prob NAME
//! places p q                  cell { a b }
//! transitions t               config { a } 0.25
//! arc p -> t                  config { b } 0.75
//! marking p
//! ```
//!
//! Tokens are separated by whitespace and `//` starts a comment. An `es`
//! document may carry a `truncated` line, written for cut-off unfoldings.

pub mod dot;
pub mod net;

use crate::error::{Error, Result};
use crate::eventset::EventSet;
use crate::prime::{validate_prime, ClosureReport, PrimeEs, RawPrime};
use crate::probability::{DistributionSource, DistributionTable};
use crate::stable::{validate_stable, RawStable, StableEs, StableReport};
use crate::structure::{valid_id, EventStructure, Names};

pub use net::{unfold_net, SafeNet, UnfoldReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Es,
    Ses,
    Net,
    Prob,
}

impl Kind {
    pub fn keyword(self) -> &'static str {
        match self {
            Kind::Es => "es",
            Kind::Ses => "ses",
            Kind::Net => "net",
            Kind::Prob => "prob",
        }
    }
}

/// A distribution table with event names not yet resolved against a host.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbTable {
    pub name: String,
    pub cells: Vec<ProbCell>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbCell {
    pub line: usize,
    pub events: Vec<String>,
    pub configs: Vec<(Vec<String>, f64)>,
}

impl ProbTable {
    pub fn resolve(&self, names: &Names) -> Result<DistributionSource> {
        let at = |line: usize, e: Error| Error::Located {
            line,
            source: Box::new(e),
        };
        let mut table: DistributionTable = Vec::new();
        for cell in &self.cells {
            let events = names.set(cell.events.iter()).map_err(|e| at(cell.line, e))?;
            let mut rows = Vec::new();
            for (config, w) in &cell.configs {
                rows.push((names.set(config.iter()).map_err(|e| at(cell.line, e))?, *w));
            }
            table.push((events, rows));
        }
        Ok(DistributionSource::Table(table))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    Es(PrimeEs, ClosureReport),
    Ses(StableEs, StableReport),
    Net(SafeNet),
    Prob(ProbTable),
}

impl Document {
    pub fn kind(&self) -> Kind {
        match self {
            Document::Es(..) => Kind::Es,
            Document::Ses(..) => Kind::Ses,
            Document::Net(..) => Kind::Net,
            Document::Prob(..) => Kind::Prob,
        }
    }

    pub fn serialize(&self) -> String {
        match self {
            Document::Es(es, _) => serialize_es(es),
            Document::Ses(ses, _) => serialize_ses(ses),
            Document::Net(net) => serialize_net(net),
            Document::Prob(p) => serialize_prob(p),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
    indented: bool,
}

fn lex(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.find("//").map_or(raw, |k| &raw[..k]);
        let mut tokens = Vec::new();
        let mut start: Option<usize> = None;
        for (byte, ch) in content.char_indices().chain([(content.len(), ' ')]) {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(byte),
                (true, Some(s)) => {
                    tokens.push(Token {
                        text: &content[s..byte],
                        column: content[..s].chars().count() + 1,
                    });
                    start = None;
                }
                _ => {}
            }
        }
        if !tokens.is_empty() {
            out.push(Line {
                number: i + 1,
                indented: raw.starts_with(char::is_whitespace),
                tokens,
            });
        }
    }
    out
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

struct Cursor<'a, 'b> {
    line: &'b Line<'a>,
    pos: usize,
}

impl<'a> Cursor<'a, '_> {
    fn end_column(&self) -> usize {
        self.line.tokens.last().map_or(1, |t| t.column + t.text.chars().count())
    }

    fn next(&mut self, what: &str) -> Result<Token<'a>> {
        let t = self
            .line
            .tokens
            .get(self.pos)
            .copied()
            .ok_or_else(|| syntax(self.line.number, self.end_column(), format!("expected {what}")))?;
        self.pos += 1;
        Ok(t)
    }

    fn id(&mut self) -> Result<String> {
        let t = self.next("an identifier")?;
        if !valid_id(t.text) || matches!(t.text, "{}" | "<" | "->" | "|-") {
            return Err(syntax(
                self.line.number,
                t.column,
                format!("`{}` is not an identifier", t.text),
            ));
        }
        Ok(t.text.to_string())
    }

    fn expect(&mut self, word: &str) -> Result<()> {
        let t = self.next(&format!("`{word}`"))?;
        if t.text != word {
            return Err(syntax(
                self.line.number,
                t.column,
                format!("expected `{word}`, found `{}`", t.text),
            ));
        }
        Ok(())
    }

    /// `{ a b c }`; `{}` is accepted as the empty set.
    fn braced(&mut self) -> Result<Vec<String>> {
        let t = self.next("`{`")?;
        if t.text == "{}" {
            return Ok(Vec::new());
        }
        if t.text != "{" {
            return Err(syntax(
                self.line.number,
                t.column,
                format!("expected `{{`, found `{}`", t.text),
            ));
        }
        let mut ids = Vec::new();
        loop {
            let t = self.next("`}`")?;
            if t.text == "}" {
                return Ok(ids);
            }
            self.pos -= 1;
            ids.push(self.id()?);
        }
    }

    fn rest_ids(&mut self) -> Result<Vec<String>> {
        let mut ids = Vec::new();
        while self.pos < self.line.tokens.len() {
            ids.push(self.id()?);
        }
        Ok(ids)
    }

    fn done(&self) -> Result<()> {
        match self.line.tokens.get(self.pos) {
            None => Ok(()),
            Some(t) => Err(syntax(self.line.number, t.column, format!("unexpected `{}`", t.text))),
        }
    }
}

fn located(line: usize, e: Error) -> Error {
    match e {
        Error::Syntax { .. } | Error::Located { .. } => e,
        other => Error::Located {
            line,
            source: Box::new(other),
        },
    }
}

/// Parses any of the four document kinds, dispatching on the header.
pub fn parse(text: &str) -> Result<Document> {
    let lines = lex(text);
    let first = lines.first().ok_or(Error::MissingHeader)?;
    let mut cur = Cursor { line: first, pos: 0 };
    let kw = cur.next("a header")?;
    let kind = match kw.text {
        "es" => Kind::Es,
        "ses" => Kind::Ses,
        "net" => Kind::Net,
        "prob" => Kind::Prob,
        other => {
            return Err(syntax(
                first.number,
                kw.column,
                format!("expected a header `es`, `ses`, `net` or `prob`, found `{other}`"),
            ))
        }
    };
    let name = cur.id()?;
    cur.done()?;
    let body = &lines[1..];
    match kind {
        Kind::Es => parse_es(name, body),
        Kind::Ses => parse_ses(name, body),
        Kind::Net => parse_net(name, body),
        Kind::Prob => parse_prob(name, body),
    }
}

/// Finds the first body line whose tokens mention every one of `ids`.
fn line_mentioning(lines: &[Line], keyword: &str, ids: &[&str]) -> Option<usize> {
    lines
        .iter()
        .filter(|l| l.tokens[0].text == keyword)
        .find(|l| ids.iter().all(|id| l.tokens.iter().any(|t| t.text == *id)))
        .map(|l| l.number)
}

fn parse_es(name: String, lines: &[Line]) -> Result<Document> {
    let mut raw = RawPrime {
        name,
        ..Default::default()
    };
    let mut events_line = None;
    for line in lines {
        let mut cur = Cursor { line, pos: 0 };
        let kw = cur.next("a directive")?;
        match kw.text {
            "events" => {
                events_line.get_or_insert(line.number);
                raw.events.extend(cur.rest_ids()?);
            }
            "cause" => {
                let a = cur.id()?;
                cur.expect("<")?;
                let b = cur.id()?;
                raw.causes.push((a, b));
            }
            "conflict" => {
                let a = cur.id()?;
                let b = cur.id()?;
                raw.conflicts.push((a, b));
            }
            "truncated" => raw.truncated = true,
            other => return Err(syntax(line.number, kw.column, format!("unknown directive `{other}`"))),
        }
        cur.done()?;
    }
    match validate_prime(&raw) {
        Ok((es, report)) => Ok(Document::Es(es, report)),
        Err(e) => {
            let line = match &e {
                Error::UnknownEvent(id) => line_mentioning(lines, "cause", &[id])
                    .into_iter()
                    .chain(line_mentioning(lines, "conflict", &[id]))
                    .min(),
                Error::SelfConflict(id) => {
                    line_mentioning(lines, "conflict", &[id, id]).or_else(|| line_mentioning(lines, "conflict", &[id]))
                }
                Error::CausalityCycle(cycle) => {
                    let ids: Vec<&str> = cycle.iter().map(String::as_str).collect();
                    lines
                        .iter()
                        .filter(|l| l.tokens[0].text == "cause")
                        .filter(|l| {
                            ids.contains(&l.tokens[1].text) && l.tokens.get(3).is_some_and(|t| ids.contains(&t.text))
                        })
                        .map(|l| l.number)
                        .next_back()
                }
                Error::DuplicateEvent(_) | Error::InvalidEventId(_) | Error::TooManyEvents(_) => events_line,
                _ => None,
            };
            Err(match line {
                Some(l) => located(l, e),
                None => e,
            })
        }
    }
}

fn parse_ses(name: String, lines: &[Line]) -> Result<Document> {
    let mut raw = RawStable {
        name,
        ..Default::default()
    };
    let mut rule_lines = Vec::new();
    let mut forbidden_lines = Vec::new();
    let mut events_line = None;
    for line in lines {
        let mut cur = Cursor { line, pos: 0 };
        let kw = cur.next("a directive")?;
        match kw.text {
            "events" => {
                events_line.get_or_insert(line.number);
                raw.events.extend(cur.rest_ids()?);
            }
            "enabling" => {
                let premise = cur.braced()?;
                cur.expect("|-")?;
                let conclusion = cur.id()?;
                rule_lines.push(line.number);
                raw.rules.push((premise, conclusion));
            }
            "forbidden" => {
                let set = cur.braced()?;
                forbidden_lines.push(line.number);
                raw.forbidden.push(set);
            }
            other => return Err(syntax(line.number, kw.column, format!("unknown directive `{other}`"))),
        }
        cur.done()?;
    }
    // validate piecewise first so that errors point at their line
    let names = Names::new(raw.events.iter().cloned()).map_err(|e| match events_line {
        Some(l) => located(l, e),
        None => e,
    })?;
    for (set, &line) in raw.forbidden.iter().zip(&forbidden_lines) {
        let s = names.set(set.iter()).map_err(|e| located(line, e))?;
        if s.len() < 2 {
            return Err(located(line, Error::ForbiddenTooSmall(s.display(names.as_slice()))));
        }
    }
    for (i, &line) in rule_lines.iter().enumerate() {
        let (premise, conclusion) = &raw.rules[i];
        names.set(premise.iter()).map_err(|e| located(line, e))?;
        names.index(conclusion).map_err(|e| located(line, e))?;
        let single = RawStable {
            rules: vec![raw.rules[i].clone()],
            ..raw.clone()
        };
        if let Err(e) = validate_stable(&single) {
            return Err(located(line, e));
        }
    }
    match validate_stable(&raw) {
        Ok((ses, report)) => Ok(Document::Ses(ses, report)),
        Err(e) => {
            let line = match &e {
                Error::StabilityViolation { event, second, .. } => rule_lines
                    .iter()
                    .zip(&raw.rules)
                    .filter(|(_, (p, c))| {
                        c == event
                            && names.set(p.iter()).ok().map(|s| s.display(names.as_slice())).as_ref() == Some(second)
                    })
                    .map(|(&l, _)| l)
                    .next(),
                _ => None,
            };
            Err(match line {
                Some(l) => located(l, e),
                None => e,
            })
        }
    }
}

fn parse_net(name: String, lines: &[Line]) -> Result<Document> {
    let (mut places, mut transitions, mut arcs, mut marking) = (vec![], vec![], vec![], vec![]);
    for line in lines {
        let mut cur = Cursor { line, pos: 0 };
        let kw = cur.next("a directive")?;
        match kw.text {
            "places" => places.extend(cur.rest_ids()?),
            "transitions" => transitions.extend(cur.rest_ids()?),
            "marking" => marking.extend(cur.rest_ids()?),
            "arc" => {
                let a = cur.id()?;
                cur.expect("->")?;
                let b = cur.id()?;
                arcs.push((a, b, line.number));
            }
            other => return Err(syntax(line.number, kw.column, format!("unknown directive `{other}`"))),
        }
        cur.done()?;
    }
    let plain: Vec<(String, String)> = arcs.iter().map(|(a, b, _)| (a.clone(), b.clone())).collect();
    match SafeNet::validate(name, places, transitions, plain, marking) {
        Ok(net) => Ok(Document::Net(net)),
        Err(e) => {
            let line = match &e {
                Error::Net(msg) if msg.starts_with("arc ") => arcs
                    .iter()
                    .find(|(a, b, _)| msg == &format!("arc {a} -> {b} must join a place and a transition"))
                    .map(|(_, _, l)| *l),
                _ => None,
            };
            Err(match line {
                Some(l) => located(l, e),
                None => e,
            })
        }
    }
}

fn parse_prob(name: String, lines: &[Line]) -> Result<Document> {
    let mut cells: Vec<ProbCell> = Vec::new();
    for line in lines {
        let mut cur = Cursor { line, pos: 0 };
        let kw = cur.next("a directive")?;
        match kw.text {
            "cell" => {
                let events = cur.braced()?;
                cells.push(ProbCell {
                    line: line.number,
                    events,
                    configs: Vec::new(),
                });
            }
            "config" => {
                if !line.indented {
                    return Err(syntax(line.number, kw.column, "`config` lines must be indented"));
                }
                let set = cur.braced()?;
                let t = cur.next("a weight")?;
                let w: f64 =
                    t.text.parse().ok().filter(|w: &f64| w.is_finite()).ok_or_else(|| {
                        syntax(line.number, t.column, format!("`{}` is not a decimal weight", t.text))
                    })?;
                let cell = cells
                    .last_mut()
                    .ok_or_else(|| syntax(line.number, kw.column, "`config` before any `cell`"))?;
                cell.configs.push((set, w));
            }
            other => return Err(syntax(line.number, kw.column, format!("unknown directive `{other}`"))),
        }
        cur.done()?;
    }
    Ok(Document::Prob(ProbTable { name, cells }))
}

fn braced(ids: &[&str]) -> String {
    if ids.is_empty() {
        "{ }".to_string()
    } else {
        format!("{{ {} }}", ids.join(" "))
    }
}

/// Writes causality as covering pairs and conflict as immediate conflict;
/// both close back to the full relations.
pub fn serialize_es(es: &PrimeEs) -> String {
    let n = es.names().as_slice();
    let mut out = format!("es {}\n", es.name());
    let events = es.live().names(n);
    if !events.is_empty() {
        out += &format!("events {}\n", events.join(" "));
    }
    for (a, b) in es.hasse_pairs() {
        out += &format!("cause {} < {}\n", n[a], n[b]);
    }
    for (a, b) in es.immediate_conflict_pairs() {
        out += &format!("conflict {} {}\n", n[a], n[b]);
    }
    if es.is_truncated() {
        out += "truncated\n";
    }
    out
}

pub fn serialize_ses(ses: &StableEs) -> String {
    let n = ses.names().as_slice();
    let mut out = format!("ses {}\n", ses.name());
    let events = ses.live().names(n);
    if !events.is_empty() {
        out += &format!("events {}\n", events.join(" "));
    }
    for r in ses.rules() {
        out += &format!("enabling {} |- {}\n", braced(&r.premise.names(n)), n[r.conclusion]);
    }
    for f in ses.forbidden() {
        out += &format!("forbidden {}\n", braced(&f.names(n)));
    }
    out
}

pub fn serialize_net(net: &SafeNet) -> String {
    let mut out = format!("net {}\n", net.name);
    if !net.places.is_empty() {
        out += &format!("places {}\n", net.places.join(" "));
    }
    if !net.transitions.is_empty() {
        out += &format!("transitions {}\n", net.transitions.join(" "));
    }
    for (a, b) in &net.arcs {
        out += &format!("arc {a} -> {b}\n");
    }
    if !net.marking.is_empty() {
        out += &format!("marking {}\n", net.marking.join(" "));
    }
    out
}

pub fn serialize_prob(p: &ProbTable) -> String {
    let mut out = format!("prob {}\n", p.name);
    for c in &p.cells {
        let ids: Vec<&str> = c.events.iter().map(String::as_str).collect();
        out += &format!("cell {}\n", braced(&ids));
        for (config, w) in &c.configs {
            let ids: Vec<&str> = config.iter().map(String::as_str).collect();
            out += &format!("  config {} {w}\n", braced(&ids));
        }
    }
    out
}

/// Writes the distributions of a randomized structure as a table.
pub fn prob_table(name: &str, names: &[String], dists: &[(EventSet, Vec<(EventSet, f64)>)]) -> ProbTable {
    let own = |s: EventSet| s.names(names).into_iter().map(String::from).collect::<Vec<_>>();
    ProbTable {
        name: name.to_string(),
        cells: dists
            .iter()
            .map(|(c, rows)| ProbCell {
                line: 0,
                events: own(*c),
                configs: rows.iter().map(|&(w, p)| (own(w), p)).collect(),
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn missing_header() {
        assert_eq!(parse("").unwrap_err(), Error::MissingHeader);
        assert_eq!(parse("// only a comment\n\n").unwrap_err(), Error::MissingHeader);
    }

    #[test]
    fn self_conflict_is_located() {
        let err = parse("es X\nevents a b\nconflict a a").unwrap_err();
        assert_eq!(err.line(), Some(3));
        assert!(matches!(err, Error::Located { ref source, .. } if **source == Error::SelfConflict("a".into())));
    }

    #[test]
    fn syntax_errors_have_columns() {
        match parse("ses X\nevents a\nenabling { a |- a").unwrap_err() {
            Error::Syntax { line, .. } => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        match parse("es X\nevents a b\ncause a > b").unwrap_err() {
            Error::Syntax { line, column, .. } => assert_eq!((line, column), (3, 9)),
            other => panic!("{other:?}"),
        }
        assert!(parse("es X\nevents a\nfrobnicate").is_err());
        assert!(parse("prob X\nconfig { a } 1").is_err());
    }

    #[test]
    fn ses_errors_are_located() {
        let text =
            "ses X\nevents a b c\nenabling { } |- a\nenabling { } |- b\nenabling { a } |- c\nenabling { b } |- c\n";
        let err = parse(text).unwrap_err();
        assert_eq!(err.line(), Some(6));
        let err = parse("ses X\nevents a\nforbidden { a }\n").unwrap_err();
        assert_eq!(err.line(), Some(3));
        let err = parse("ses X\nevents a\nenabling { z } |- a\n").unwrap_err();
        assert_eq!(err.line(), Some(3));
    }

    #[test]
    fn round_trips() {
        for es in fixtures::prime_fixtures() {
            let text = serialize_es(&es);
            match parse(&text).unwrap() {
                Document::Es(back, _) => assert_eq!(back, es, "{text}"),
                other => panic!("{other:?}"),
            }
        }
        for ses in fixtures::stable_fixtures() {
            let text = serialize_ses(&ses);
            match parse(&text).unwrap() {
                Document::Ses(back, _) => assert_eq!(back, ses, "{text}"),
                other => panic!("{other:?}"),
            }
        }
        for net in [net::confusion_net(), net::loops_net()] {
            let doc = Document::Net(net.clone());
            assert_eq!(parse(&doc.serialize()).unwrap(), doc);
        }
        let prob = "prob q\ncell { a b c }\n  config { a c } 0.6\n  config { b } 0.4\n";
        let doc = parse(prob).unwrap();
        assert_eq!(doc.serialize(), prob);
    }

    #[test]
    fn example_source_parses() {
        let text = "ses example\n\
                    events e1 e2 e3 e4 ea eb\n\
                    enabling { } |- e1\n\
                    enabling {} |- e2\n\
                    enabling { } |- e3\n\
                    enabling { } |- e4\n\
                    enabling { e1 } |- ea\n\
                    enabling { e2 } |- ea\n\
                    enabling { e3 } |- eb // the only cause of eb\n\
                    forbidden { e1 e2 }\n\
                    forbidden { e2 e3 }\n\
                    forbidden { e3 e4 }\n\
                    forbidden { e1 ea eb }\n";
        match parse(text).unwrap() {
            Document::Ses(ses, _) => assert_eq!(ses, fixtures::ses_example()),
            other => panic!("{other:?}"),
        }
    }
}
