//! Stopping prefixes, branching cells, coverings and the structural checks
//! built on them.

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::eventset::{canonical_sort, minimal_sets, EventSet};
use crate::prime::PrimeEs;
use crate::stable::{ConflictTables, StableEs};
use crate::structure::EventStructure;
use crate::translation::{associated_es, theta, EXHAUSTIVE_LIMIT};

/// A causally ordered pair joined by an immediate-conflict walk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JumpWitness {
    pub from: usize,
    pub to: usize,
    /// The walk `from, e1, .., ek, to` with `k > 1`.
    pub chain: Vec<usize>,
    /// The configuration `v` of `from <_v to`, for stable hosts.
    pub config: Option<EventSet>,
}

/// Structures on which branching cells are defined.
pub trait CellHost: EventStructure + Clone {
    /// The future at a configuration, in the same index space.
    fn future_at(&self, v: EventSet) -> Self;

    /// Sub-structure on the events `b`.
    fn restrict_to(&self, b: EventSet) -> Self;

    fn is_prefix(&self, b: EventSet) -> bool;

    fn is_stopping_prefix(&self, b: EventSet) -> bool;

    /// Minimal nonempty stopping prefixes containing `e`.
    fn stopping_prefixes_containing(&self, e: usize) -> Vec<EventSet>;

    fn initial_stopping_prefixes(&self) -> Vec<EventSet> {
        let found: Vec<EventSet> = self
            .live()
            .iter()
            .flat_map(|e| self.stopping_prefixes_containing(e))
            .collect();
        minimal_sets(&found)
    }

    fn find_jump(&self) -> Option<JumpWitness>;
}

/// Shortest path from `from` to `to` in an undirected graph given as
/// neighbour sets, padded to at least two intermediate events.
fn jump_chain(adj: &[EventSet], from: usize, to: usize) -> Option<Vec<usize>> {
    let mut prev: HashMap<usize, usize> = HashMap::new();
    let mut queue = VecDeque::from([from]);
    let mut seen = EventSet::singleton(from);
    while let Some(x) = queue.pop_front() {
        if x == to {
            let mut path = vec![to];
            let mut cur = to;
            while let Some(&p) = prev.get(&cur) {
                path.push(p);
                cur = p;
            }
            path.reverse();
            if path.len() == 3 {
                // e, x, e' has a single intermediate; walk back and forth once
                let (a, m, b) = (path[0], path[1], path[2]);
                path = vec![a, m, a, m, b];
            }
            return Some(path);
        }
        for y in (adj[x] - seen).iter() {
            seen.insert(y);
            prev.insert(y, x);
            queue.push_back(y);
        }
    }
    None
}

impl CellHost for PrimeEs {
    fn future_at(&self, v: EventSet) -> Self {
        self.future_unchecked(v)
    }

    fn restrict_to(&self, b: EventSet) -> Self {
        self.restrict(b)
    }

    fn is_prefix(&self, b: EventSet) -> bool {
        b.is_subset(self.live()) && self.down_set(b) == b
    }

    fn is_stopping_prefix(&self, b: EventSet) -> bool {
        self.is_prefix(b) && b.iter().all(|e| self.immediate_partners(e).is_subset(b))
    }

    /// `{e}*` is the least stopping prefix containing `e`.
    fn stopping_prefixes_containing(&self, e: usize) -> Vec<EventSet> {
        vec![self.minimal_stopping_prefix(EventSet::singleton(e))]
    }

    fn find_jump(&self) -> Option<JumpWitness> {
        let n = self.names().len();
        let adj: Vec<EventSet> = (0..n).map(|e| self.immediate_partners(e)).collect();
        self.cause_pairs().into_iter().find_map(|(a, b)| {
            jump_chain(&adj, a, b).map(|chain| JumpWitness {
                from: a,
                to: b,
                chain,
                config: None,
            })
        })
    }
}

impl CellHost for StableEs {
    fn future_at(&self, v: EventSet) -> Self {
        self.future_unchecked(v)
    }

    fn restrict_to(&self, b: EventSet) -> Self {
        self.restrict(b)
    }

    fn is_prefix(&self, b: EventSet) -> bool {
        StableEs::is_prefix(self, b)
    }

    /// For every configuration `w` with `e #_{μ,w} e'` and `⌈e⌉_w ⊆ b`,
    /// also `⌈e'⌉_w ⊆ b`.
    fn is_stopping_prefix(&self, b: EventSet) -> bool {
        self.is_prefix(b) && ConflictTables::local(self).forced(b).is_empty()
    }

    /// Grows `{e}` by forced immediate-conflict histories and, for events
    /// still lacking an enabling set, by each candidate rule premise in
    /// turn. Every minimal stopping prefix containing `e` is reached by
    /// choosing the premises it contains.
    fn stopping_prefixes_containing(&self, e: usize) -> Vec<EventSet> {
        let tables = ConflictTables::local(self);
        let rules = self.rules();
        let mut found = Vec::new();
        let mut seen = HashSet::new();
        let mut stack = vec![EventSet::singleton(e)];
        while let Some(b) = stack.pop() {
            if !seen.insert(b) {
                continue;
            }
            let forced = tables.forced(b);
            if !forced.is_empty() {
                stack.push(b | forced);
                continue;
            }
            let usable = |p: EventSet| self.is_consistent(p);
            let lacking = b.iter().find(|&x| {
                !rules
                    .iter()
                    .any(|r| r.conclusion == x && r.premise.is_subset(b) && usable(r.premise))
            });
            match lacking {
                None => found.push(b),
                Some(x) => {
                    for r in rules.iter().filter(|r| r.conclusion == x && usable(r.premise)) {
                        stack.push(b | r.premise);
                    }
                }
            }
        }
        minimal_sets(&found)
    }

    fn find_jump(&self) -> Option<JumpWitness> {
        let n = self.names().len();
        let tables = ConflictTables::local(self);
        for &v in &tables.configs {
            let adj: Vec<EventSet> = (0..n).map(|x| tables.partners_within(x, v)).collect();
            for b in v.iter() {
                let below = self.history_in(b, v).without(b);
                for a in below.iter() {
                    if let Some(chain) = jump_chain(&adj, a, b) {
                        return Some(JumpWitness {
                            from: a,
                            to: b,
                            chain,
                            config: Some(v),
                        });
                    }
                }
            }
        }
        None
    }
}

/// Every nonempty stopping prefix, by subset enumeration. Used to
/// cross-check the closure search.
pub fn all_stopping_prefixes<H: CellHost>(host: &H) -> Result<Vec<EventSet>> {
    let live = host.live();
    if live.len() > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge(format!("{} events", live.len())));
    }
    let mut out: Vec<EventSet> = live
        .subsets()
        .filter(|&b| !b.is_empty() && host.is_stopping_prefix(b))
        .collect();
    canonical_sort(&mut out);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchingCell {
    pub events: EventSet,
    pub enabled_at: EventSet,
    /// `Ω_c`, in canonical order.
    pub maximal_configs: Vec<EventSet>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoveringStep {
    pub cell: EventSet,
    pub enabled_at: EventSet,
    pub choice: EventSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Covering {
    pub configuration: EventSet,
    pub steps: Vec<CoveringStep>,
}

impl Covering {
    /// `Δ(v)` in canonical order.
    pub fn cells(&self) -> Vec<EventSet> {
        let mut cells: Vec<EventSet> = self.steps.iter().map(|s| s.cell).collect();
        canonical_sort(&mut cells);
        cells
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreRegularReport {
    pub holds: bool,
    pub max_enabled: usize,
    /// `(configuration, number of enabled events)` in canonical order.
    pub enabled_counts: Vec<(EventSet, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocallyFiniteReport {
    pub holds: bool,
    pub uncovered: EventSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatReport {
    pub holds: bool,
    /// A configuration and one of its cells holding a non-initial event.
    pub witness: Option<(EventSet, EventSet)>,
}

/// Analysis context over one host. The cache of enabled cells is local to
/// the context.
pub struct CellAnalysis<H: CellHost> {
    host: H,
    cells: RefCell<HashMap<EventSet, Vec<BranchingCell>>>,
}

impl<H: CellHost> CellAnalysis<H> {
    pub fn new(host: H) -> Self {
        CellAnalysis {
            host,
            cells: RefCell::new(HashMap::new()),
        }
    }

    pub fn host(&self) -> &H {
        &self.host
    }

    /// `δ(v)` without checking that `v` is R-stopped. Cells whose only
    /// maximal configuration is empty hold no choice and are left out.
    pub fn cells_at(&self, v: EventSet) -> Vec<BranchingCell> {
        if let Some(c) = self.cells.borrow().get(&v) {
            return c.clone();
        }
        let future = self.host.future_at(v);
        let cells: Vec<BranchingCell> = future
            .initial_stopping_prefixes()
            .into_iter()
            .map(|c| BranchingCell {
                events: c,
                enabled_at: v,
                maximal_configs: future.restrict_to(c).maximal_configurations(),
            })
            .filter(|c| c.maximal_configs != [EventSet::EMPTY])
            .collect();
        self.cells.borrow_mut().insert(v, cells.clone());
        cells
    }

    pub fn enabled_cells(&self, v: EventSet) -> Result<Vec<BranchingCell>> {
        self.host.check_configuration(v)?;
        if self.valid_decomposition(v).is_none() {
            return Err(Error::NotRStopped(self.host.show(v)));
        }
        Ok(self.cells_at(v))
    }

    /// Steps available at `u` toward `v`.
    fn steps_toward(&self, u: EventSet, v: EventSet) -> Vec<CoveringStep> {
        self.cells_at(u)
            .into_iter()
            .filter_map(|c| {
                let choice = (v - u) & c.events;
                (!choice.is_empty() && c.maximal_configs.contains(&choice)).then_some(CoveringStep {
                    cell: c.events,
                    enabled_at: u,
                    choice,
                })
            })
            .collect()
    }

    /// A covering of `v`, or `None` when `v` is not R-stopped.
    pub fn valid_decomposition(&self, v: EventSet) -> Option<Covering> {
        if !self.host.is_configuration(v) {
            return None;
        }
        let mut dead = HashSet::new();
        let mut steps = Vec::new();
        self.decompose(EventSet::EMPTY, v, &mut steps, &mut dead)
            .then_some(Covering {
                configuration: v,
                steps,
            })
    }

    fn decompose(&self, u: EventSet, v: EventSet, steps: &mut Vec<CoveringStep>, dead: &mut HashSet<EventSet>) -> bool {
        if u == v {
            return true;
        }
        if dead.contains(&u) {
            return false;
        }
        for step in self.steps_toward(u, v) {
            steps.push(step);
            if self.decompose(u | step.choice, v, steps, dead) {
                return true;
            }
            steps.pop();
        }
        dead.insert(u);
        false
    }

    pub fn is_r_stopped(&self, v: EventSet) -> bool {
        self.valid_decomposition(v).is_some()
    }

    /// The cell sets of every valid decomposition of `v`.
    pub fn all_cell_sets(&self, v: EventSet) -> BTreeSet<Vec<EventSet>> {
        let mut memo = HashMap::new();
        self.cell_sets_from(EventSet::EMPTY, v, &mut memo)
    }

    fn cell_sets_from(
        &self,
        u: EventSet,
        v: EventSet,
        memo: &mut HashMap<EventSet, BTreeSet<Vec<EventSet>>>,
    ) -> BTreeSet<Vec<EventSet>> {
        if u == v {
            return BTreeSet::from([Vec::new()]);
        }
        if let Some(r) = memo.get(&u) {
            return r.clone();
        }
        let mut out = BTreeSet::new();
        for step in self.steps_toward(u, v) {
            for rest in self.cell_sets_from(u | step.choice, v, memo) {
                let mut cells = rest;
                cells.push(step.cell);
                cells.sort();
                out.insert(cells);
            }
        }
        memo.insert(u, out.clone());
        out
    }

    /// The covering of `v`, after checking that all decompositions agree.
    pub fn covering(&self, v: EventSet) -> Result<Covering> {
        let cov = self
            .valid_decomposition(v)
            .ok_or_else(|| Error::NotRStopped(self.host.show(v)))?;
        let sets = self.all_cell_sets(v);
        if sets.len() != 1 {
            return Err(Error::Precondition(format!(
                "decompositions of {} yield {} different cell sets",
                self.host.show(v),
                sets.len()
            )));
        }
        Ok(cov)
    }

    /// Every finite R-stopped configuration, in canonical order.
    pub fn reachable_r_stopped(&self) -> Vec<EventSet> {
        let mut seen = HashSet::from([EventSet::EMPTY]);
        let mut queue = VecDeque::from([EventSet::EMPTY]);
        while let Some(u) = queue.pop_front() {
            for c in self.cells_at(u) {
                for &w in c.maximal_configs.iter().filter(|w| !w.is_empty()) {
                    if seen.insert(u | w) {
                        queue.push_back(u | w);
                    }
                }
            }
        }
        let mut out: Vec<EventSet> = seen.into_iter().collect();
        canonical_sort(&mut out);
        out
    }

    /// Every branching cell met at a reachable R-stopped configuration.
    pub fn all_cells(&self) -> Vec<BranchingCell> {
        self.reachable_r_stopped()
            .into_iter()
            .flat_map(|v| self.cells_at(v))
            .collect()
    }

    pub fn check_pre_regular(&self) -> PreRegularReport {
        let enabled_counts: Vec<(EventSet, usize)> = self
            .host
            .configurations()
            .into_iter()
            .map(|v| {
                let n = (self.host.live() - v)
                    .iter()
                    .filter(|&e| self.host.can_extend(v, e))
                    .count();
                (v, n)
            })
            .collect();
        PreRegularReport {
            holds: true,
            max_enabled: enabled_counts.iter().map(|&(_, n)| n).max().unwrap_or(0),
            enabled_counts,
        }
    }

    pub fn check_locally_finite(&self) -> LocallyFiniteReport {
        let uncovered: EventSet = self
            .host
            .live()
            .iter()
            .filter(|&e| self.host.stopping_prefixes_containing(e).is_empty())
            .collect();
        LocallyFiniteReport {
            holds: uncovered.is_empty(),
            uncovered,
        }
    }

    pub fn check_jump_free(&self) -> Option<JumpWitness> {
        self.host.find_jump()
    }

    /// Cells consist of initial events of their future only.
    pub fn check_cells_flat(&self) -> Result<FlatReport> {
        if let Some(j) = self.host.find_jump() {
            return Err(Error::Precondition(format!(
                "not jump-free: {}",
                self.show_chain(&j.chain)
            )));
        }
        Ok(self.cells_flat())
    }

    /// Whether every cell at every reachable R-stopped configuration holds
    /// initial events of its future only, without the jump precondition.
    pub fn cells_flat(&self) -> FlatReport {
        for v in self.reachable_r_stopped() {
            let initial = self.host.future_at(v).initial_events();
            for c in self.cells_at(v) {
                if !c.events.is_subset(initial) {
                    return FlatReport {
                        holds: false,
                        witness: Some((v, c.events)),
                    };
                }
            }
        }
        FlatReport {
            holds: true,
            witness: None,
        }
    }

    /// Distinct cells, met anywhere, that share events.
    pub fn overlapping_cells(&self) -> Vec<(EventSet, EventSet)> {
        let mut cells: Vec<EventSet> = self.all_cells().into_iter().map(|c| c.events).collect();
        canonical_sort(&mut cells);
        let mut out = Vec::new();
        for (i, &a) in cells.iter().enumerate() {
            for &b in &cells[i + 1..] {
                if a.intersects(b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn show_chain(&self, chain: &[usize]) -> String {
        chain
            .iter()
            .map(|&e| self.host.names().get(e))
            .collect::<Vec<_>>()
            .join(" - ")
    }
}

/// Classical confusion in a binary-conflict structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Confusion {
    /// `e #_μ f #_μ g` with `e`, `g` distinct and not in immediate conflict.
    Symmetric(usize, usize, usize),
    /// `e #_μ f` with different strict pasts.
    Asymmetric(usize, usize),
}

pub fn find_confusion(es: &PrimeEs) -> Option<Confusion> {
    let pairs = es.immediate_conflict_pairs();
    for &(e, f) in &pairs {
        if es.causes_of(e) != es.causes_of(f) {
            return Some(Confusion::Asymmetric(e, f));
        }
    }
    for e in es.live().iter() {
        let pe = es.immediate_partners(e);
        for f in pe.iter() {
            for g in es.immediate_partners(f).without(e).iter() {
                if !pe.contains(g) {
                    return Some(Confusion::Symmetric(e, f, g));
                }
            }
        }
    }
    None
}

/// Cell-by-cell comparison between a stable structure and its associated
/// binary-conflict structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellIsoReport {
    pub holds: bool,
    pub configurations_checked: usize,
    pub cells_checked: usize,
    /// A configuration of the stable structure where the cells differ.
    pub mismatch: Option<EventSet>,
}

pub fn check_cell_isomorphism(ses: &StableEs) -> Result<CellIsoReport> {
    let driven = ses.check_conflict_driven();
    if !driven.holds() {
        return Err(Error::Precondition("not conflict-driven".into()));
    }
    let left = CellAnalysis::new(ses.clone());
    if let Some(j) = left.check_jump_free() {
        return Err(Error::Precondition(format!(
            "not jump-free: {}",
            left.show_chain(&j.chain)
        )));
    }
    Ok(compare_cells(ses))
}

/// The comparison itself, without the precondition checks.
pub fn compare_cells(ses: &StableEs) -> CellIsoReport {
    let (hat, map, pes) = match associated_es(ses) {
        Ok(x) => x,
        Err(_) => {
            return CellIsoReport {
                holds: false,
                configurations_checked: 0,
                cells_checked: 0,
                mismatch: Some(EventSet::EMPTY),
            }
        }
    };
    let left = CellAnalysis::new(ses.clone());
    let right = CellAnalysis::new(hat);
    let lift = |v: EventSet| -> EventSet {
        v.iter()
            .filter_map(|e| pes.index_of_history(ses.history_in(e, v)))
            .collect()
    };
    let reach_left = left.reachable_r_stopped();
    let reach_right: HashSet<EventSet> = right.reachable_r_stopped().into_iter().collect();
    let lifted: HashSet<EventSet> = reach_left.iter().map(|&v| lift(v)).collect();
    let mut cells_checked = 0;
    if lifted != reach_right {
        let bad = reach_left
            .iter()
            .copied()
            .find(|&v| !reach_right.contains(&lift(v)))
            .unwrap_or(EventSet::EMPTY);
        return CellIsoReport {
            holds: false,
            configurations_checked: reach_left.len(),
            cells_checked,
            mismatch: Some(bad),
        };
    }
    for &v in &reach_left {
        let mut ours: Vec<(EventSet, Vec<EventSet>)> = left
            .cells_at(v)
            .into_iter()
            .map(|c| (c.events, c.maximal_configs))
            .collect();
        let mut theirs: Vec<(EventSet, Vec<EventSet>)> = right
            .cells_at(lift(v))
            .into_iter()
            .map(|c| {
                let mut omega: Vec<EventSet> = c.maximal_configs.iter().map(|&w| map.image(w)).collect();
                canonical_sort(&mut omega);
                (map.image(c.events), omega)
            })
            .collect();
        // a cell maps bijectively only if no two of its events collapse
        let injective = right
            .cells_at(lift(v))
            .iter()
            .all(|c| map.image(c.events).len() == c.events.len());
        ours.sort();
        theirs.sort();
        cells_checked += ours.len();
        if ours != theirs || !injective {
            return CellIsoReport {
                holds: false,
                configurations_checked: reach_left.len(),
                cells_checked,
                mismatch: Some(v),
            };
        }
    }
    CellIsoReport {
        holds: true,
        configurations_checked: reach_left.len(),
        cells_checked,
        mismatch: None,
    }
}

/// Maps a configuration of a stable structure to the matching configuration
/// of `Θ`: the histories of its events.
pub fn lift_configuration(ses: &StableEs, v: EventSet) -> EventSet {
    let pes = theta(ses);
    v.iter()
        .filter_map(|e| pes.index_of_history(ses.history_in(e, v)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn set<H: EventStructure>(h: &H, ids: &[&str]) -> EventSet {
        h.names().set(ids.iter()).unwrap()
    }

    #[test]
    fn stopping_prefixes_of_example_es() {
        let es = fixtures::es_example();
        assert!(es.is_stopping_prefix(set(&es, &["e1", "e2", "e3", "e4"])));
        assert!(!es.is_stopping_prefix(set(&es, &["e1"])));
        assert!(es.is_stopping_prefix(EventSet::EMPTY));
        assert!(es.is_stopping_prefix(es.live()));
    }

    #[test]
    fn closure_search_matches_enumeration() {
        let es = fixtures::es_example();
        let all = all_stopping_prefixes(&es).unwrap();
        assert_eq!(es.initial_stopping_prefixes(), minimal_sets(&all));
        for ses in fixtures::stable_fixtures() {
            let all = all_stopping_prefixes(&ses).unwrap();
            assert_eq!(ses.initial_stopping_prefixes(), minimal_sets(&all), "{}", ses.name());
        }
    }

    #[test]
    fn cells_of_small_fixtures() {
        let two = CellAnalysis::new(fixtures::two_cell());
        let cells: Vec<EventSet> = two.cells_at(EventSet::EMPTY).iter().map(|c| c.events).collect();
        assert_eq!(
            cells,
            vec![set(two.host(), &["a1", "a2"]), set(two.host(), &["b1", "b2"])]
        );

        let conf = CellAnalysis::new(fixtures::confusion());
        let cells = conf.cells_at(EventSet::EMPTY);
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].events, conf.host().live());
        assert_eq!(
            cells[0].maximal_configs,
            vec![set(conf.host(), &["b"]), set(conf.host(), &["a", "c"])]
        );
    }

    #[test]
    fn example_es_cells_follow_minimality() {
        let an = CellAnalysis::new(fixtures::es_example());
        let h = an.host();
        let at = |ids: &[&str]| -> Vec<EventSet> { an.cells_at(set(h, ids)).iter().map(|c| c.events).collect() };
        assert_eq!(at(&[]), vec![set(h, &["e1", "e2", "e3", "e4"])]);
        assert_eq!(at(&["e1", "e3"]), vec![set(h, &["ea", "eb"])]);
        assert_eq!(at(&["e2", "e4"]), vec![set(h, &["ea'"])]);
        assert_eq!(at(&["e1", "e4"]), vec![set(h, &["ea"])]);
    }

    #[test]
    fn decompositions() {
        let two = CellAnalysis::new(fixtures::two_cell());
        let h = two.host();
        let cov = two.valid_decomposition(set(h, &["a1"])).unwrap();
        assert_eq!(cov.steps.len(), 1);
        assert_eq!(cov.steps[0].choice, set(h, &["a1"]));
        let cov = two.covering(set(h, &["a1", "b2"])).unwrap();
        assert_eq!(cov.cells(), vec![set(h, &["a1", "a2"]), set(h, &["b1", "b2"])]);
        assert_eq!(two.all_cell_sets(set(h, &["a1", "b2"])).len(), 1);
        assert!(two.covering(EventSet::EMPTY).unwrap().steps.is_empty());

        let conf = CellAnalysis::new(fixtures::confusion());
        let h = conf.host();
        assert!(conf.valid_decomposition(set(h, &["a"])).is_none());
        assert!(matches!(conf.covering(set(h, &["a"])), Err(Error::NotRStopped(_))));
        assert_eq!(conf.covering(set(h, &["b"])).unwrap().cells(), vec![h.live()]);
    }

    #[test]
    fn structural_checks() {
        let two = CellAnalysis::new(fixtures::two_cell());
        let pre = two.check_pre_regular();
        assert!(pre.holds);
        assert_eq!(pre.max_enabled, 4);
        assert!(two.check_locally_finite().holds);
        assert!(two.check_jump_free().is_none());
        assert!(two.check_cells_flat().unwrap().holds);

        let es = CellAnalysis::new(fixtures::es_example());
        assert!(es.check_locally_finite().holds);
        assert!(CellAnalysis::new(fixtures::empty()).check_locally_finite().holds);

        let jump = CellAnalysis::new(fixtures::jump());
        let w = jump.check_jump_free().unwrap();
        assert_eq!(jump.show_chain(&w.chain), "e - x1 - x2 - e'");
        assert!(jump.check_cells_flat().is_err());

        let conf = CellAnalysis::new(fixtures::confusion());
        assert!(conf.check_cells_flat().unwrap().holds);
        let flat = CellAnalysis::new(fixtures::ses_jump_free());
        assert!(flat.check_cells_flat().unwrap().holds);
    }

    #[test]
    fn example_ses_jump_search() {
        // Its immediate conflicts form the components {e1..e4} and {ea, eb},
        // and no causal pair straddles one of them.
        let an = CellAnalysis::new(fixtures::ses_example());
        assert!(an.check_jump_free().is_none());
    }

    #[test]
    fn confusion_detection() {
        assert!(matches!(
            find_confusion(&fixtures::confusion()),
            Some(Confusion::Symmetric(..))
        ));
        assert_eq!(find_confusion(&fixtures::two_cell()), None);
        assert!(matches!(
            find_confusion(&fixtures::jump()),
            Some(Confusion::Asymmetric(..))
        ));
    }

    #[test]
    fn cell_isomorphism() {
        assert!(check_cell_isomorphism(&fixtures::ses_jump_free()).unwrap().holds);
        assert!(check_cell_isomorphism(&fixtures::ses_empty()).unwrap().holds);
        assert!(check_cell_isomorphism(&fixtures::ses_nested_choice()).unwrap().holds);
        assert!(matches!(
            check_cell_isomorphism(&fixtures::ses_example()),
            Err(Error::Precondition(_))
        ));
    }
}
