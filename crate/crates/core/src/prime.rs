//! Event structures generated by a causality order and a binary conflict
//! relation.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::eventset::EventSet;
use crate::structure::{EventStructure, Names};

/// Unvalidated input: event ids plus generating pairs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawPrime {
    pub name: String,
    pub events: Vec<String>,
    /// `(a, b)` means `a < b`.
    pub causes: Vec<(String, String)>,
    pub conflicts: Vec<(String, String)>,
    pub truncated: bool,
}

impl RawPrime {
    pub fn new(name: &str, events: &[&str]) -> Self {
        RawPrime {
            name: name.to_string(),
            events: events.iter().map(|s| s.to_string()).collect(),
            ..Default::default()
        }
    }

    pub fn cause(mut self, a: &str, b: &str) -> Self {
        self.causes.push((a.to_string(), b.to_string()));
        self
    }

    pub fn conflict(mut self, a: &str, b: &str) -> Self {
        self.conflicts.push((a.to_string(), b.to_string()));
        self
    }
}

/// Pairs that normalization added on top of the input.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ClosureReport {
    pub added_causes: Vec<(String, String)>,
    pub added_conflicts: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeEs {
    name: String,
    names: Names,
    live: EventSet,
    /// Strict causes, transitively closed.
    causes: Vec<EventSet>,
    /// Symmetric, irreflexive and inherited along causality.
    conflict: Vec<EventSet>,
    truncated: bool,
}

pub fn validate_prime(raw: &RawPrime) -> Result<(PrimeEs, ClosureReport)> {
    let names = Names::new(raw.events.iter().cloned())?;
    let n = names.len();
    let pair = |a: &str, b: &str| -> Result<(usize, usize)> { Ok((names.index(a)?, names.index(b)?)) };

    let mut causes = vec![EventSet::EMPTY; n];
    let mut given_causes = Vec::new();
    for (a, b) in &raw.causes {
        let (a, b) = pair(a, b)?;
        if a == b {
            return Err(Error::CausalityCycle(vec![names.get(a).to_string(); 2]));
        }
        causes[b].insert(a);
        given_causes.push((a, b));
    }
    // transitive closure, Warshall style over the intermediate event
    for k in 0..n {
        for e in 0..n {
            if causes[e].contains(k) {
                causes[e] = causes[e] | causes[k];
            }
        }
    }
    if let Some(e) = (0..n).find(|&e| causes[e].contains(e)) {
        let mut cycle: Vec<String> = (0..n)
            .filter(|&x| causes[e].contains(x) && causes[x].contains(e))
            .map(|x| names.get(x).to_string())
            .collect();
        cycle.push(cycle[0].clone());
        return Err(Error::CausalityCycle(cycle));
    }

    let mut raw_conflict = vec![EventSet::EMPTY; n];
    for (a, b) in &raw.conflicts {
        let (a, b) = pair(a, b)?;
        if a == b {
            return Err(Error::SelfConflict(names.get(a).to_string()));
        }
        raw_conflict[a].insert(b);
        raw_conflict[b].insert(a);
    }
    // x # y iff some x' <= x and y' <= y are in raw conflict
    let down = |e: usize| causes[e].with(e);
    let mut conflict = vec![EventSet::EMPTY; n];
    for x in 0..n {
        for y in 0..n {
            if down(x).iter().any(|x0| raw_conflict[x0].intersects(down(y))) {
                conflict[x].insert(y);
            }
        }
    }
    if let Some(e) = (0..n).find(|&e| conflict[e].contains(e)) {
        return Err(Error::SelfConflict(names.get(e).to_string()));
    }

    let mut report = ClosureReport::default();
    for b in 0..n {
        for a in causes[b].iter() {
            if !given_causes.contains(&(a, b)) {
                report
                    .added_causes
                    .push((names.get(a).to_string(), names.get(b).to_string()));
            }
        }
    }
    for a in 0..n {
        for b in conflict[a].iter().filter(|&b| b > a) {
            if !raw_conflict[a].contains(b) {
                report
                    .added_conflicts
                    .push((names.get(a).to_string(), names.get(b).to_string()));
            }
        }
    }

    let es = PrimeEs {
        name: raw.name.clone(),
        live: names.all(),
        names,
        causes,
        conflict,
        truncated: raw.truncated,
    };
    Ok((es, report))
}

impl PrimeEs {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn set_truncated(&mut self, truncated: bool) {
        self.truncated = truncated;
    }

    /// Strict live causes of `e`.
    pub fn causes_of(&self, e: usize) -> EventSet {
        self.causes[e] & self.live
    }

    /// `⌈e⌉`, reflexive.
    pub fn down(&self, e: usize) -> EventSet {
        self.causes_of(e).with(e)
    }

    /// `⌈x⌉`.
    pub fn down_set(&self, x: EventSet) -> EventSet {
        x.iter().fold(EventSet::EMPTY, |acc, e| acc | self.down(e))
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        self.causes_of(b).contains(a)
    }

    pub fn conflicts_of(&self, e: usize) -> EventSet {
        self.conflict[e] & self.live
    }

    pub fn in_conflict(&self, a: usize, b: usize) -> bool {
        self.conflicts_of(a).contains(b)
    }

    /// `#` restricted to the histories of `a` and `b` is exactly `{(a, b)}`.
    pub fn immediate_conflict_idx(&self, a: usize, b: usize) -> bool {
        if a == b || !self.in_conflict(a, b) {
            return false;
        }
        let (da, db) = (self.down(a), self.down(b));
        da.iter().all(|x| {
            let hits = self.conflicts_of(x) & db;
            if x == a {
                hits == EventSet::singleton(b)
            } else {
                hits.is_empty()
            }
        })
    }

    pub fn immediate_conflict(&self, a: &str, b: &str) -> Result<bool> {
        Ok(self.immediate_conflict_idx(self.event(a)?, self.event(b)?))
    }

    pub fn immediate_partners(&self, e: usize) -> EventSet {
        self.conflicts_of(e)
            .iter()
            .filter(|&f| self.immediate_conflict_idx(e, f))
            .collect()
    }

    /// Live strict-order pairs `(a, b)` with `a < b`, in index order.
    pub fn cause_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for b in self.live.iter() {
            for a in self.causes_of(b).iter() {
                out.push((a, b));
            }
        }
        out.sort();
        out
    }

    /// Covering pairs of the causal order.
    pub fn hasse_pairs(&self) -> Vec<(usize, usize)> {
        self.cause_pairs()
            .into_iter()
            .filter(|&(a, b)| !self.causes_of(b).iter().any(|m| self.lt(a, m)))
            .collect()
    }

    /// Unordered conflict pairs `(a, b)` with `a < b` by index.
    pub fn conflict_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in self.live.iter() {
            for b in self.conflicts_of(a).iter().filter(|&b| b > a) {
                out.push((a, b));
            }
        }
        out
    }

    pub fn immediate_conflict_pairs(&self) -> Vec<(usize, usize)> {
        self.conflict_pairs()
            .into_iter()
            .filter(|&(a, b)| self.immediate_conflict_idx(a, b))
            .collect()
    }

    /// Sub-structure on `events` with the relations restricted.
    pub fn restrict(&self, events: EventSet) -> PrimeEs {
        PrimeEs {
            live: events & self.live,
            ..self.clone()
        }
    }

    /// `E^v`: events outside `v` whose history is compatible with `v`.
    pub fn future(&self, v: EventSet) -> Result<PrimeEs> {
        self.check_configuration(v)?;
        Ok(self.future_unchecked(v))
    }

    pub(crate) fn future_unchecked(&self, v: EventSet) -> PrimeEs {
        let live = (self.live - v)
            .iter()
            .filter(|&e| self.conflict_free(self.down(e) | v))
            .collect();
        self.restrict(live)
    }

    fn conflict_free(&self, x: EventSet) -> bool {
        x.iter().all(|e| !self.conflicts_of(e).intersects(x))
    }

    /// Least set containing `x` closed under `⌈-⌉` and immediate conflict.
    pub fn minimal_stopping_prefix(&self, x: EventSet) -> EventSet {
        let mut cur = x & self.live;
        loop {
            let mut next = self.down_set(cur);
            for e in next.iter() {
                next = next | self.immediate_partners(e);
            }
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    /// Relations as generating pairs, for serialization.
    pub fn to_raw(&self) -> RawPrime {
        let n = self.names.as_slice();
        RawPrime {
            name: self.name.clone(),
            events: self.live.iter().map(|e| n[e].clone()).collect(),
            causes: self
                .cause_pairs()
                .into_iter()
                .map(|(a, b)| (n[a].clone(), n[b].clone()))
                .collect(),
            conflicts: self
                .conflict_pairs()
                .into_iter()
                .map(|(a, b)| (n[a].clone(), n[b].clone()))
                .collect(),
            truncated: self.truncated,
        }
    }
}

impl EventStructure for PrimeEs {
    fn names(&self) -> &Names {
        &self.names
    }

    fn live(&self) -> EventSet {
        self.live
    }

    fn is_consistent(&self, x: EventSet) -> bool {
        self.conflict_free(x & self.live)
    }

    fn enables(&self, x: EventSet, e: usize) -> bool {
        self.is_consistent(x) && self.causes_of(e).is_subset(x)
    }

    fn can_extend(&self, v: EventSet, e: usize) -> bool {
        self.live.contains(e) && !v.contains(e) && self.causes_of(e).is_subset(v) && !self.conflicts_of(e).intersects(v)
    }

    fn is_configuration(&self, x: EventSet) -> bool {
        x.is_subset(self.live) && self.down_set(x) == x && self.conflict_free(x)
    }
}

/// `v ⊕ w` for `w` a configuration of the future at `v`.
pub fn concat(v: EventSet, w: EventSet) -> EventSet {
    v | w
}

/// `u ⊖ v` for `v ⊆ u`.
pub fn subtract(u: EventSet, v: EventSet) -> EventSet {
    u - v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn set(es: &PrimeEs, ids: &[&str]) -> EventSet {
        es.names().set(ids.iter()).unwrap()
    }

    #[test]
    fn pair_is_symmetrized() {
        let es = fixtures::pair();
        let (a, b) = (es.event("a").unwrap(), es.event("b").unwrap());
        assert!(es.in_conflict(a, b) && es.in_conflict(b, a));
        assert!(es.cause_pairs().is_empty());
    }

    #[test]
    fn two_cycle_is_rejected() {
        let raw = RawPrime::new("x", &["a", "b"]).cause("a", "b").cause("b", "a");
        assert!(matches!(validate_prime(&raw), Err(Error::CausalityCycle(_))));
    }

    #[test]
    fn self_conflict_and_unknown_event() {
        let raw = RawPrime::new("x", &["a"]).conflict("a", "a");
        assert_eq!(validate_prime(&raw).unwrap_err(), Error::SelfConflict("a".into()));
        let raw = RawPrime::new("x", &["a"]).conflict("a", "z");
        assert_eq!(validate_prime(&raw).unwrap_err(), Error::UnknownEvent("z".into()));
        // conflict with one's own cause is inherited into a self-conflict
        let raw = RawPrime::new("x", &["a", "b"]).cause("a", "b").conflict("a", "b");
        assert!(matches!(validate_prime(&raw), Err(Error::SelfConflict(_))));
    }

    #[test]
    fn example_es_closure_adds_inherited_pairs() {
        let (_, report) = validate_prime(&fixtures::es_example_raw()).unwrap();
        let mut added: Vec<(String, String)> = report.added_conflicts.clone();
        added.sort();
        let mut expected: Vec<(String, String)> = [
            ("e1", "ea'"),
            ("e2", "ea"),
            ("e2", "eb"),
            ("e3", "ea'"),
            ("e4", "eb"),
            ("ea", "ea'"),
            ("ea'", "eb"),
        ]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
        expected.sort();
        assert_eq!(added, expected);
    }

    #[test]
    fn futures() {
        let conf = fixtures::confusion();
        let f = conf.future(set(&conf, &["a"])).unwrap();
        assert_eq!(f.live(), set(&conf, &["c"]));

        let pair = fixtures::pair();
        assert_eq!(pair.future(EventSet::EMPTY).unwrap().live(), pair.live());

        let es = fixtures::es_example();
        let f = es.future(set(&es, &["e1", "e3"])).unwrap();
        assert_eq!(f.live(), set(&es, &["ea", "eb"]));
        assert!(f.immediate_conflict("ea", "eb").unwrap());

        assert!(matches!(
            conf.future(set(&conf, &["a", "b"])),
            Err(Error::NotAConfiguration(_))
        ));
    }

    #[test]
    fn immediate_conflicts() {
        assert!(fixtures::pair().immediate_conflict("a", "b").unwrap());
        let es = fixtures::es_example();
        assert!(es.immediate_conflict("ea", "eb").unwrap());
        assert!(!es.immediate_conflict("ea'", "eb").unwrap());
        assert!(!es.immediate_conflict("ea", "ea'").unwrap());
        assert!(es.immediate_conflict("e2", "e3").unwrap());
        assert!(es.immediate_conflict("a", "b").is_err());
    }

    #[test]
    fn minimal_stopping_prefixes() {
        let es = fixtures::es_example();
        assert_eq!(
            es.minimal_stopping_prefix(set(&es, &["e4"])),
            set(&es, &["e1", "e2", "e3", "e4"])
        );
        assert_eq!(
            es.minimal_stopping_prefix(set(&es, &["ea"])),
            set(&es, &["e1", "e2", "e3", "e4", "ea", "eb"])
        );
        let pair = fixtures::pair();
        assert_eq!(pair.minimal_stopping_prefix(set(&pair, &["a"])), pair.live());
    }
}
