//! Stable event structures: a consistency predicate given by minimal
//! forbidden sets and an enabling relation given by minimal rules.
//!
//! A structure may also be a *view*: the future of a configuration `v` keeps
//! the parent's events and rules and records `v` as its past, so that
//! `X` is consistent in the view iff `X ∪ v` is consistent in the parent and
//! `X ⊢ e` in the view iff `X ∪ v ⊢ e` in the parent.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::eventset::{canonical_sort, minimal_sets, EventSet};
use crate::structure::{EventStructure, Names};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rule {
    pub conclusion: usize,
    pub premise: EventSet,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawStable {
    pub name: String,
    pub events: Vec<String>,
    pub rules: Vec<(Vec<String>, String)>,
    pub forbidden: Vec<Vec<String>>,
}

impl RawStable {
    pub fn new(name: &str, events: &[&str]) -> Self {
        RawStable {
            name: name.to_string(),
            events: events.iter().map(|s| s.to_string()).collect(),
            ..Default::default()
        }
    }

    pub fn rule(mut self, premise: &[&str], conclusion: &str) -> Self {
        self.rules
            .push((premise.iter().map(|s| s.to_string()).collect(), conclusion.to_string()));
        self
    }

    pub fn forbid(mut self, set: &[&str]) -> Self {
        self.forbidden.push(set.iter().map(|s| s.to_string()).collect());
        self
    }
}

/// Non-fatal findings of validation.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct StableReport {
    /// Events without any enabling rule.
    pub dead_events: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableEs {
    name: String,
    names: Names,
    live: EventSet,
    past: EventSet,
    forbidden: Vec<EventSet>,
    /// Sorted by conclusion, then premise; minimal per conclusion.
    rules: Vec<Rule>,
}

fn minimal_rules(rules: &[Rule]) -> Vec<Rule> {
    let mut out: Vec<Rule> = rules
        .iter()
        .copied()
        .filter(|r| {
            !rules
                .iter()
                .any(|s| s.conclusion == r.conclusion && s.premise.is_proper_subset(r.premise))
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

pub fn validate_stable(raw: &RawStable) -> Result<(StableEs, StableReport)> {
    let names = Names::new(raw.events.iter().cloned())?;
    let show = |s: EventSet| s.display(names.as_slice());

    let mut forbidden = Vec::new();
    for f in &raw.forbidden {
        let set = names.set(f.iter())?;
        if set.len() < 2 {
            return Err(Error::ForbiddenTooSmall(show(set)));
        }
        forbidden.push(set);
    }
    let forbidden = minimal_sets(&forbidden);
    let consistent = |x: EventSet| !forbidden.iter().any(|f| f.is_subset(x));

    let mut rules = Vec::new();
    for (premise, conclusion) in &raw.rules {
        let premise = names.set(premise.iter())?;
        let c = names.index(conclusion)?;
        if premise.contains(c) {
            return Err(Error::ReflexiveRule {
                premise: show(premise),
                conclusion: conclusion.clone(),
            });
        }
        if !consistent(premise.with(c)) {
            return Err(Error::InconsistentRule {
                premise: show(premise),
                conclusion: conclusion.clone(),
            });
        }
        rules.push(Rule { premise, conclusion: c });
    }
    let rules = minimal_rules(&rules);

    // Two distinct minimal rules for one event share no smaller rule, so
    // stability forbids them from being jointly consistent with the event.
    for (i, r) in rules.iter().enumerate() {
        for s in rules[i + 1..].iter().filter(|s| s.conclusion == r.conclusion) {
            if consistent((r.premise | s.premise).with(r.conclusion)) {
                return Err(Error::StabilityViolation {
                    event: names.get(r.conclusion).to_string(),
                    first: show(r.premise),
                    second: show(s.premise),
                });
            }
        }
    }

    let dead_events = (0..names.len())
        .filter(|&e| !rules.iter().any(|r| r.conclusion == e))
        .map(|e| names.get(e).to_string())
        .collect();

    let es = StableEs {
        name: raw.name.clone(),
        live: names.all(),
        names,
        past: EventSet::EMPTY,
        forbidden,
        rules,
    };
    Ok((es, StableReport { dead_events }))
}

impl StableEs {
    pub fn name(&self) -> &str {
        &self.name
    }

    /// The configuration this view is the future of (empty for a root).
    pub fn past(&self) -> EventSet {
        self.past
    }

    /// Minimal forbidden sets as seen from this view.
    pub fn forbidden(&self) -> Vec<EventSet> {
        let sets: Vec<EventSet> = self
            .forbidden
            .iter()
            .map(|&f| f - self.past)
            .filter(|f| f.is_subset(self.live))
            .collect();
        minimal_sets(&sets)
    }

    /// Minimal enabling rules as seen from this view.
    pub fn rules(&self) -> Vec<Rule> {
        let rules: Vec<Rule> = self
            .rules
            .iter()
            .filter(|r| self.live.contains(r.conclusion))
            .map(|r| Rule {
                premise: r.premise - self.past,
                conclusion: r.conclusion,
            })
            .filter(|r| r.premise.is_subset(self.live))
            .collect();
        minimal_rules(&rules)
    }

    fn rules_for(&self, e: usize) -> impl Iterator<Item = &Rule> + '_ {
        self.rules.iter().filter(move |r| r.conclusion == e)
    }

    /// The unique rule enabling `e` inside the consistent set `u`.
    fn enabling_rule(&self, e: usize, u: EventSet) -> Option<&Rule> {
        let ctx = u | self.past;
        self.rules_for(e).find(|r| r.premise.is_subset(ctx))
    }

    /// `⌈e⌉_u` without checking that `u` is a configuration containing `e`.
    pub(crate) fn history_in(&self, e: usize, u: EventSet) -> EventSet {
        let mut hist = EventSet::singleton(e);
        let mut todo = vec![e];
        while let Some(x) = todo.pop() {
            if let Some(r) = self.enabling_rule(x, u) {
                for f in (r.premise - self.past).iter() {
                    if !hist.contains(f) {
                        hist.insert(f);
                        todo.push(f);
                    }
                }
            }
        }
        hist
    }

    /// Least configuration contained in `u` that contains `e`.
    pub fn local_history(&self, e: usize, u: EventSet) -> Result<EventSet> {
        self.check_configuration(u)?;
        if !u.contains(e) {
            return Err(Error::EventNotInConfiguration {
                event: self.names.get(e).to_string(),
                config: self.show(u),
            });
        }
        Ok(self.history_in(e, u))
    }

    /// `e #_v e'`: `{e, e'} ∪ v` is inconsistent.
    pub fn conflict_under(&self, e: usize, f: usize, v: EventSet) -> bool {
        !self.is_consistent(v.with(e).with(f))
    }

    /// Global `#`: conflict under every configuration. Consistency is
    /// subset-closed and `∅` is a configuration, so this is `{e, e'} ∉ Con`.
    pub fn conflict_global(&self, e: usize, f: usize) -> bool {
        self.conflict_under(e, f, EventSet::EMPTY)
    }

    pub fn conflict(&self, e: usize, f: usize, v: Option<EventSet>) -> Result<bool> {
        match v {
            Some(v) => {
                self.check_configuration(v)?;
                Ok(self.conflict_under(e, f, v))
            }
            None => Ok(self.conflict_global(e, f)),
        }
    }

    /// `e #_{μ,v} e'`. Here `v ⊢ e` is read as: `e ∉ v` and `v + e` is a
    /// configuration, and `⌈e⌉_v` is the history of `e` in `v + e`.
    pub fn immediate_conflict_under(&self, e: usize, f: usize, v: EventSet) -> bool {
        if e == f || !self.can_extend(v, e) || !self.can_extend(v, f) {
            return false;
        }
        let he = self.history_in(e, v.with(e));
        let hf = self.history_in(f, v.with(f));
        he.iter()
            .all(|x| hf.iter().all(|y| self.conflict_under(x, y, v) == (x == e && y == f)))
    }

    pub fn immediate_conflict(&self, e: usize, f: usize, v: Option<EventSet>) -> Result<bool> {
        match v {
            Some(v) => {
                self.check_configuration(v)?;
                Ok(self.immediate_conflict_under(e, f, v))
            }
            None => Ok(self.tables().global_immediate(e, f)),
        }
    }

    pub fn tables(&self) -> ConflictTables {
        ConflictTables::new(self)
    }

    /// Distinct local histories of `e` over all configurations containing it.
    pub fn histories_of(&self, e: usize, configs: &[EventSet]) -> Vec<EventSet> {
        let mut out: Vec<EventSet> = configs
            .iter()
            .filter(|v| v.contains(e))
            .map(|&v| self.history_in(e, v))
            .collect();
        canonical_sort(&mut out);
        out
    }

    /// `*X`: one local history per event of `x`, in every combination.
    /// Each selection lists the histories in the index order of `x`.
    pub fn star_histories(&self, x: EventSet) -> Vec<Vec<EventSet>> {
        let configs = self.configurations();
        star_product(x.iter().map(|e| self.histories_of(e, &configs)).collect())
    }

    pub fn check_sensible(&self) -> SensibleReport {
        let maximal = self.maximal_configurations();
        let reachable = |x: EventSet| maximal.iter().any(|&w| x.is_subset(w));
        let mut pruned = Vec::new();

        // Level-wise search: a minimal unreachable set has all its
        // one-smaller subsets reachable.
        let mut level: HashSet<EventSet> = HashSet::from([EventSet::EMPTY]);
        while !level.is_empty() {
            let mut next = HashSet::new();
            let mut seen = HashSet::new();
            for &y in &level {
                for e in (self.live - y).iter() {
                    let x = y.with(e);
                    if !seen.insert(x) || !self.is_consistent(x) {
                        continue;
                    }
                    if reachable(x) {
                        next.insert(x);
                    } else if x.iter().all(|f| level.contains(&x.without(f))) {
                        pruned.push(x);
                    }
                }
            }
            level = next;
        }
        canonical_sort(&mut pruned);

        let structure = if pruned.is_empty() {
            self.normalized()
        } else {
            self.normalized().with_extra_forbidden(&pruned)
        };
        SensibleReport {
            sensible: pruned.is_empty(),
            pruned,
            structure,
        }
    }

    /// Materialize a view as a root structure over the same index space.
    pub fn normalized(&self) -> StableEs {
        StableEs {
            name: self.name.clone(),
            names: self.names.clone(),
            live: self.live,
            past: EventSet::EMPTY,
            forbidden: self.forbidden(),
            rules: self.rules(),
        }
    }

    fn with_extra_forbidden(&self, extra: &[EventSet]) -> StableEs {
        let mut all = self.forbidden.clone();
        all.extend_from_slice(extra);
        let forbidden = minimal_sets(&all);
        let consistent = |x: EventSet| !forbidden.iter().any(|f| f.is_subset(x));
        let rules = self
            .rules
            .iter()
            .copied()
            .filter(|r| consistent(r.premise.with(r.conclusion)))
            .collect();
        StableEs {
            forbidden,
            rules,
            ..self.clone()
        }
    }

    pub fn check_conflict_driven(&self) -> ConflictDrivenReport {
        let sensible = self.check_sensible();
        let tables = self.tables();

        let mut unresolved = None;
        'outer: for f in self.forbidden() {
            for selection in star_product(f.iter().map(|e| self.histories_of(e, &tables.configs)).collect()) {
                let union = selection.iter().fold(EventSet::EMPTY, |a, &h| a | h);
                let hit = union.iter().any(|a| tables.global_imm[a].intersects(union));
                if !hit {
                    unresolved = Some((f, selection));
                    break 'outer;
                }
            }
        }

        let mut transient = None;
        'scan: for (i, &v) in tables.configs.iter().enumerate() {
            for e in self.live.iter() {
                for f in tables.imm[i][e].iter().filter(|&f| f > e) {
                    if !self.conflict_global(e, f) {
                        transient = Some((e, f, v));
                        break 'scan;
                    }
                }
            }
        }

        ConflictDrivenReport {
            sensible: sensible.sensible,
            pruned: sensible.pruned,
            unresolved_inconsistency: unresolved,
            transient_immediate_conflict: transient,
        }
    }

    /// The future `E^v` as a view.
    pub fn future(&self, v: EventSet) -> Result<StableEs> {
        self.check_configuration(v)?;
        Ok(self.future_unchecked(v))
    }

    pub(crate) fn future_unchecked(&self, v: EventSet) -> StableEs {
        let past = self.past | v;
        let live = (self.live - v)
            .iter()
            .filter(|&e| self.is_consistent(v.with(e)))
            .collect();
        StableEs {
            live,
            past,
            ..self.clone()
        }
    }

    /// Sub-structure induced by the events `b`; a rule survives when its
    /// whole premise lies in `b`.
    pub fn restrict(&self, b: EventSet) -> StableEs {
        StableEs {
            live: self.live & b,
            ..self.clone()
        }
    }

    /// Every `e ∈ b` has an enabling set inside `b`.
    pub fn is_prefix(&self, b: EventSet) -> bool {
        b.is_subset(self.live)
            && b.iter().all(|e| {
                self.rules_for(e).any(|r| {
                    let p = r.premise - self.past;
                    p.is_subset(b) && self.is_consistent(p)
                })
            })
    }

    pub fn to_raw(&self) -> RawStable {
        let n = self.names.as_slice();
        let ids = |s: EventSet| s.iter().map(|e| n[e].clone()).collect::<Vec<_>>();
        RawStable {
            name: self.name.clone(),
            events: ids(self.live),
            rules: self
                .rules()
                .into_iter()
                .map(|r| (ids(r.premise), n[r.conclusion].clone()))
                .collect(),
            forbidden: self.forbidden().into_iter().map(ids).collect(),
        }
    }
}

impl EventStructure for StableEs {
    fn names(&self) -> &Names {
        &self.names
    }

    fn live(&self) -> EventSet {
        self.live
    }

    fn is_consistent(&self, x: EventSet) -> bool {
        let x = (x & self.live) | self.past;
        !self.forbidden.iter().any(|f| f.is_subset(x))
    }

    fn enables(&self, x: EventSet, e: usize) -> bool {
        self.is_consistent(x) && self.enabling_rule(e, x & self.live).is_some()
    }

    fn can_extend(&self, v: EventSet, e: usize) -> bool {
        self.live.contains(e) && !v.contains(e) && self.is_consistent(v.with(e)) && self.enabling_rule(e, v).is_some()
    }
}

/// Cartesian product of per-event choice lists.
pub fn star_product(choices: Vec<Vec<EventSet>>) -> Vec<Vec<EventSet>> {
    let mut out: Vec<Vec<EventSet>> = vec![Vec::new()];
    for options in choices {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                options.iter().map(move |&h| {
                    let mut p = prefix.clone();
                    p.push(h);
                    p
                })
            })
            .collect();
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct SensibleReport {
    pub sensible: bool,
    /// Minimal consistent sets that no configuration reaches.
    pub pruned: Vec<EventSet>,
    /// The structure with those sets forbidden.
    pub structure: StableEs,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConflictDrivenReport {
    pub sensible: bool,
    pub pruned: Vec<EventSet>,
    /// A forbidden set and a history selection whose union holds no
    /// immediate-conflict pair.
    pub unresolved_inconsistency: Option<(EventSet, Vec<EventSet>)>,
    /// `(e, e', v)` with `e #_{μ,v} e'` but not `e # e'`.
    pub transient_immediate_conflict: Option<(usize, usize, EventSet)>,
}

impl ConflictDrivenReport {
    pub fn holds(&self) -> bool {
        self.sensible && self.unresolved_inconsistency.is_none() && self.transient_immediate_conflict.is_none()
    }
}

/// Per-configuration immediate conflicts and the derived global relation.
#[derive(Debug, Clone)]
pub struct ConflictTables {
    pub configs: Vec<EventSet>,
    index: HashMap<EventSet, usize>,
    /// `imm[i][e]`: partners of `e` under `#_{μ, configs[i]}`.
    pub imm: Vec<Vec<EventSet>>,
    /// Global `#_μ` partners.
    pub global_imm: Vec<EventSet>,
    /// `(⌈e⌉_v, ⌈e'⌉_v)` for every `e #_{μ,v} e'`, both orientations.
    pub conflicting_histories: Vec<(EventSet, EventSet)>,
}

impl ConflictTables {
    pub fn new(es: &StableEs) -> Self {
        let mut t = Self::local(es);
        t.compute_global(es);
        t
    }

    /// Only the per-configuration relations; `global_imm` stays empty.
    pub fn local(es: &StableEs) -> Self {
        let n = es.names.len();
        let configs = es.configurations();
        let index = configs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let imm: Vec<Vec<EventSet>> = configs
            .iter()
            .map(|&v| {
                let enabled: EventSet = es.live.iter().filter(|&e| es.can_extend(v, e)).collect();
                (0..n)
                    .map(|e| {
                        if !enabled.contains(e) {
                            return EventSet::EMPTY;
                        }
                        enabled
                            .iter()
                            .filter(|&f| es.immediate_conflict_under(e, f, v))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let mut pairs = HashSet::new();
        for (&v, row) in configs.iter().zip(&imm) {
            for e in 0..n {
                for f in row[e].iter() {
                    pairs.insert((es.history_in(e, v.with(e)), es.history_in(f, v.with(f))));
                }
            }
        }
        let mut conflicting_histories: Vec<(EventSet, EventSet)> = pairs.into_iter().collect();
        conflicting_histories.sort();
        ConflictTables {
            configs,
            index,
            imm,
            global_imm: vec![EventSet::EMPTY; n],
            conflicting_histories,
        }
    }

    fn compute_global(&mut self, es: &StableEs) {
        let n = es.names.len();
        let (configs, imm) = (&self.configs, &self.imm);
        let enabling: Vec<Vec<EventSet>> = (0..n)
            .map(|e| configs.iter().copied().filter(|&v| es.can_extend(v, e)).collect())
            .collect();
        let mut global_imm = vec![EventSet::EMPTY; n];
        for e in es.live.iter() {
            for f in es.live.iter().filter(|&f| f > e) {
                let witnesses: Vec<EventSet> = configs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| imm[*i][e].contains(f))
                    .map(|(_, &v)| v)
                    .collect();
                if witnesses.is_empty() || enabling[e].is_empty() || enabling[f].is_empty() {
                    continue;
                }
                let holds = enabling[e].iter().all(|&v| {
                    enabling[f]
                        .iter()
                        .all(|&w| witnesses.iter().any(|u| u.is_subset(v | w)))
                });
                if holds {
                    global_imm[e].insert(f);
                    global_imm[f].insert(e);
                }
            }
        }
        self.global_imm = global_imm;
    }

    /// `#_{μ,w}` partners of `e`, over every configuration `w ⊆ within`.
    pub fn partners_within(&self, e: usize, within: EventSet) -> EventSet {
        self.configs
            .iter()
            .zip(&self.imm)
            .filter(|(w, _)| w.is_subset(within))
            .fold(EventSet::EMPTY, |acc, (_, row)| acc | row[e])
    }

    /// Events that must join `b` for it to be `#_μ`-closed: whenever a
    /// history inside `b` is in immediate conflict with another history,
    /// that history must lie in `b` too.
    pub fn forced(&self, b: EventSet) -> EventSet {
        self.conflicting_histories
            .iter()
            .filter(|(h, _)| h.is_subset(b))
            .fold(EventSet::EMPTY, |acc, &(_, g)| acc | g)
            - b
    }

    pub fn global_immediate(&self, e: usize, f: usize) -> bool {
        self.global_imm[e].contains(f)
    }

    /// `e #_{μ,v} e'` looked up by configuration.
    pub fn immediate_under(&self, e: usize, f: usize, v: EventSet) -> bool {
        self.index.get(&v).is_some_and(|&i| self.imm[i][e].contains(f))
    }

    pub fn config_index(&self, v: EventSet) -> Option<usize> {
        self.index.get(&v).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn ids(es: &StableEs, s: &[&str]) -> EventSet {
        es.names().set(s.iter()).unwrap()
    }

    #[test]
    fn stability_violation_is_reported() {
        let raw = RawStable::new("x", &["a", "b", "c"])
            .rule(&[], "a")
            .rule(&[], "b")
            .rule(&["a"], "c")
            .rule(&["b"], "c");
        match validate_stable(&raw) {
            Err(Error::StabilityViolation { event, .. }) => assert_eq!(event, "c"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rule_errors() {
        let raw = RawStable::new("x", &["a", "b"]).forbid(&["a", "b"]).rule(&["a"], "b");
        assert!(matches!(validate_stable(&raw), Err(Error::InconsistentRule { .. })));
        let raw = RawStable::new("x", &["a"]).forbid(&["a"]);
        assert!(matches!(validate_stable(&raw), Err(Error::ForbiddenTooSmall(_))));
        let raw = RawStable::new("x", &["a"]).rule(&["q"], "a");
        assert_eq!(validate_stable(&raw).unwrap_err(), Error::UnknownEvent("q".into()));
    }

    #[test]
    fn dead_events_are_warnings() {
        let (_, report) = validate_stable(&RawStable::new("x", &["a"])).unwrap();
        assert_eq!(report.dead_events, vec!["a".to_string()]);
    }

    #[test]
    fn example_structure_basics() {
        let es = fixtures::ses_example();
        assert!(es.is_consistent(ids(&es, &["e1", "e3"])));
        assert!(!es.is_consistent(ids(&es, &["e1", "e2"])));
        assert!(es.is_configuration(ids(&es, &["e1", "e3", "ea"])));
        assert!(es.is_configuration(ids(&es, &["e1", "e3", "eb"])));
        assert!(!es.is_configuration(ids(&es, &["e1", "ea", "eb"])));
        let ea = es.event("ea").unwrap();
        assert_eq!(
            es.local_history(ea, ids(&es, &["e1", "e3", "ea"])).unwrap(),
            ids(&es, &["e1", "ea"])
        );
        assert_eq!(
            es.local_history(ea, ids(&es, &["e2", "e4", "ea"])).unwrap(),
            ids(&es, &["e2", "ea"])
        );
    }

    #[test]
    fn example_conflicts() {
        let es = fixtures::ses_example();
        let e = |s| es.event(s).unwrap();
        let (e1, e2, e4, ea, eb) = (e("e1"), e("e2"), e("e4"), e("ea"), e("eb"));
        assert!(es.conflict(e1, e2, Some(EventSet::EMPTY)).unwrap());
        assert!(es.conflict(ea, eb, Some(ids(&es, &["e1"]))).unwrap());
        assert!(!es.conflict(ea, eb, Some(ids(&es, &["e2"]))).unwrap());
        assert!(!es.conflict(ea, eb, None).unwrap());

        assert!(es.immediate_conflict(ea, eb, Some(ids(&es, &["e1", "e3"]))).unwrap());
        assert!(!es.immediate_conflict(ea, eb, Some(ids(&es, &["e1"]))).unwrap());
        assert!(es.immediate_conflict(e1, e2, Some(EventSet::EMPTY)).unwrap());
        assert!(!es.immediate_conflict(e2, e4, Some(EventSet::EMPTY)).unwrap());
    }

    #[test]
    fn star_histories_of_example() {
        let es = fixtures::ses_example();
        let star = es.star_histories(ids(&es, &["ea"]));
        assert_eq!(star, vec![vec![ids(&es, &["e1", "ea"])], vec![ids(&es, &["e2", "ea"])]]);
        assert_eq!(es.star_histories(ids(&es, &["ea", "eb"])).len(), 2);
        assert_eq!(es.star_histories(EventSet::EMPTY), vec![Vec::<EventSet>::new()]);
    }

    #[test]
    fn non_sensible_example_is_pruned() {
        let es = fixtures::ses_not_sensible();
        let report = es.check_sensible();
        assert!(!report.sensible);
        let expected: Vec<EventSet> = [["e1", "e4"], ["e2", "e3"], ["e2", "e4"]]
            .iter()
            .map(|p| ids(&es, p))
            .collect();
        assert_eq!(report.pruned, expected);
        let again = report.structure.check_sensible();
        assert!(again.sensible);
        assert_eq!(again.structure, report.structure);
        assert!(!es.check_conflict_driven().holds());
    }

    #[test]
    fn transient_conflict_breaks_condition_three() {
        let es = fixtures::ses_transient_conflict();
        let report = es.check_conflict_driven();
        assert!(report.sensible);
        assert!(report.transient_immediate_conflict.is_some());
    }

    #[test]
    fn futures_are_views() {
        let es = fixtures::ses_example();
        let v = ids(&es, &["e1"]);
        let f = es.future(v).unwrap();
        assert_eq!(f.live(), ids(&es, &["e3", "e4", "ea", "eb"]));
        // ea and eb are jointly forbidden after e1
        assert_eq!(f.forbidden(), vec![ids(&es, &["e3", "e4"]), ids(&es, &["ea", "eb"])]);
        assert!(f.initial_events().contains(es.event("ea").unwrap()));
    }
}
