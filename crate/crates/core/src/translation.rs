//! From stable structures to prime ones: events become local histories.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::eventset::EventSet;
use crate::prime::{validate_prime, PrimeEs, RawPrime};
use crate::stable::StableEs;
use crate::structure::{EventStructure, Names};

/// Subset enumeration above this many events is refused.
pub const EXHAUSTIVE_LIMIT: usize = 22;

/// A partial map on event indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub map: Vec<Option<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MorphismReport {
    pub preserves_consistency: bool,
    pub locally_injective: bool,
    pub preserves_enabling: bool,
}

impl MorphismReport {
    pub fn holds(&self) -> bool {
        self.preserves_consistency && self.locally_injective && self.preserves_enabling
    }
}

impl Morphism {
    pub fn identity(n: usize) -> Self {
        Morphism {
            map: (0..n).map(Some).collect(),
        }
    }

    pub fn image(&self, x: EventSet) -> EventSet {
        x.iter().filter_map(|e| self.map.get(e).copied().flatten()).collect()
    }

    pub fn is_total_on(&self, events: EventSet) -> bool {
        events.iter().all(|e| matches!(self.map.get(e), Some(Some(_))))
    }

    /// Checks the three morphism conditions by enumerating every subset of
    /// the source.
    pub fn check<S, T>(&self, source: &S, target: &T) -> Result<MorphismReport>
    where
        S: EventStructure + ?Sized,
        T: EventStructure + ?Sized,
    {
        let live = source.live();
        if live.len() > EXHAUSTIVE_LIMIT {
            return Err(Error::TooLarge(format!("{} events", live.len())));
        }
        let mut report = MorphismReport {
            preserves_consistency: true,
            locally_injective: true,
            preserves_enabling: true,
        };
        for x in live.subsets().filter(|&x| source.is_consistent(x)) {
            let image = self.image(x);
            if !target.is_consistent(image) {
                report.preserves_consistency = false;
            }
            if x.len() == 2 && image.len() < 2 && self.is_total_on(x) {
                report.locally_injective = false;
            }
            for e in live.iter() {
                if let Some(Some(t)) = self.map.get(e) {
                    if source.enables(x, e) && !target.enables(image, *t) {
                        report.preserves_enabling = false;
                    }
                }
            }
        }
        Ok(report)
    }
}

/// `Θ(E)`: events are the distinct local histories of a stable structure.
#[derive(Debug, Clone)]
pub struct ThetaPes {
    source: StableEs,
    names: Names,
    histories: Vec<EventSet>,
    events: Vec<usize>,
    /// Strict predecessors under inclusion.
    below: Vec<EventSet>,
    by_history: HashMap<EventSet, usize>,
}

impl ThetaPes {
    pub fn source(&self) -> &StableEs {
        &self.source
    }

    pub fn history(&self, p: usize) -> EventSet {
        self.histories[p]
    }

    /// The source event whose history `p` is.
    pub fn event_of(&self, p: usize) -> usize {
        self.events[p]
    }

    pub fn below(&self, p: usize) -> EventSet {
        self.below[p]
    }

    pub fn index_of_history(&self, h: EventSet) -> Option<usize> {
        self.by_history.get(&h).copied()
    }

    /// Union of the histories in `x`.
    pub fn flatten(&self, x: EventSet) -> EventSet {
        x.iter().fold(EventSet::EMPTY, |acc, p| acc | self.histories[p])
    }

    /// The counit, sending each history to its event.
    pub fn counit(&self) -> Morphism {
        Morphism {
            map: self.events.iter().map(|&e| Some(e)).collect(),
        }
    }

    /// `p # p'` iff `{p, p'} ∉ Con_P`.
    pub fn binary_conflict(&self) -> Vec<EventSet> {
        let n = self.names.len();
        (0..n)
            .map(|p| {
                (0..n)
                    .filter(|&q| !self.is_consistent(EventSet::singleton(p).with(q)))
                    .collect()
            })
            .collect()
    }
}

impl EventStructure for ThetaPes {
    fn names(&self) -> &Names {
        &self.names
    }

    fn live(&self) -> EventSet {
        self.names.all()
    }

    /// Histories are compatible when their union is a configuration.
    fn is_consistent(&self, x: EventSet) -> bool {
        self.source.is_configuration(self.flatten(x))
    }

    fn enables(&self, x: EventSet, p: usize) -> bool {
        self.is_consistent(x) && self.below[p].is_subset(x)
    }

    fn can_extend(&self, v: EventSet, p: usize) -> bool {
        p < self.names.len() && !v.contains(p) && self.below[p].is_subset(v) && self.is_consistent(v.with(p))
    }
}

/// Canonical name of the history `h` of `e`: `e@{a,b,e}`.
pub fn history_name(source: &StableEs, e: usize, h: EventSet) -> String {
    format!("{}@{}", source.names().get(e), source.show(h))
}

pub fn theta(ses: &StableEs) -> ThetaPes {
    let mut found: HashSet<(usize, EventSet)> = HashSet::new();
    for v in ses.configurations() {
        for e in v.iter() {
            found.insert((e, ses.history_in(e, v)));
        }
    }
    let mut items: Vec<(String, usize, EventSet)> = found
        .into_iter()
        .map(|(e, h)| (history_name(ses, e, h), e, h))
        .collect();
    items.sort();
    let names = Names::new(items.iter().map(|(n, _, _)| n.clone())).expect("history names are distinct");
    let histories: Vec<EventSet> = items.iter().map(|(_, _, h)| *h).collect();
    let events = items.iter().map(|(_, e, _)| *e).collect();
    let below = histories
        .iter()
        .map(|&h| {
            histories
                .iter()
                .enumerate()
                .filter(|(_, &g)| g.is_proper_subset(h))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let by_history = histories.iter().enumerate().map(|(i, &h)| (h, i)).collect();
    ThetaPes {
        source: ses.clone(),
        names,
        histories,
        events,
        below,
        by_history,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Generability {
    /// Consistency is pairwise absence of the returned conflict relation.
    Binary(Vec<EventSet>),
    /// A pairwise consistent but jointly inconsistent set, of least size.
    Witness(EventSet),
}

pub fn binary_conflict_generable(pes: &ThetaPes) -> Generability {
    let conflict = pes.binary_conflict();
    let n = pes.names.len();
    // grow pairwise-compatible sets level by level in index order
    let mut level: Vec<EventSet> = vec![EventSet::EMPTY];
    while !level.is_empty() {
        let mut next = Vec::new();
        for &x in &level {
            let start = x.iter().last().map_or(0, |m| m + 1);
            for p in start..n {
                if conflict[p].intersects(x) || conflict[p].contains(p) {
                    continue;
                }
                let y = x.with(p);
                if !pes.is_consistent(y) {
                    return Generability::Witness(y);
                }
                next.push(y);
            }
        }
        level = next;
    }
    Generability::Binary(conflict)
}

/// `Ê` together with the composite map back to the source events.
pub fn associated_es(ses: &StableEs) -> Result<(PrimeEs, Morphism, ThetaPes)> {
    let pes = theta(ses);
    let conflict = match binary_conflict_generable(&pes) {
        Generability::Binary(c) => c,
        Generability::Witness(w) => return Err(Error::NotBinaryGenerable(pes.show(w))),
    };
    let names = pes.names.as_slice();
    let mut raw = RawPrime {
        name: ses.name().to_string(),
        events: names.to_vec(),
        ..Default::default()
    };
    for p in 0..names.len() {
        for q in pes.below[p].iter() {
            raw.causes.push((names[q].clone(), names[p].clone()));
        }
        for q in conflict[p].iter().filter(|&q| q > p) {
            raw.conflicts.push((names[p].clone(), names[q].clone()));
        }
    }
    let (es, _) = validate_prime(&raw)?;
    let map = pes.counit();
    Ok((es, map, pes))
}

/// `v ↦ f(v)` is an order isomorphism between the configuration posets.
pub fn domains_isomorphic<A, B>(a: &A, b: &B, f: &Morphism) -> Result<bool>
where
    A: EventStructure + ?Sized,
    B: EventStructure + ?Sized,
{
    if let Some(e) = a.live().iter().find(|&e| !f.is_total_on(EventSet::singleton(e))) {
        return Err(Error::MorphismNotTotal(a.names().get(e).to_string()));
    }
    let va = a.configurations();
    let vb: HashSet<EventSet> = b.configurations().into_iter().collect();
    let images: Vec<EventSet> = va.iter().map(|&v| f.image(v)).collect();
    let distinct: HashSet<EventSet> = images.iter().copied().collect();
    if distinct.len() != va.len() || distinct != vb {
        return Ok(false);
    }
    for (i, &v) in va.iter().enumerate() {
        for (j, &w) in va.iter().enumerate() {
            if v.is_subset(w) != images[i].is_subset(images[j]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Distinct histories of one event: pairs `(p, p')` with equal counit
/// image, reported with whether `p # p'` and `p #_μ p'` hold in `Ê`.
pub fn collapsed_pairs(es: &PrimeEs, pes: &ThetaPes) -> Vec<(usize, usize, bool, bool)> {
    let n = pes.names.len();
    let mut out = Vec::new();
    for p in 0..n {
        for q in (p + 1)..n {
            if pes.event_of(p) == pes.event_of(q) {
                out.push((p, q, es.in_conflict(p, q), es.immediate_conflict_idx(p, q)));
            }
        }
    }
    out
}
