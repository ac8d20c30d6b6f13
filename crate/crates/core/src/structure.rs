//! The view shared by every kind of event structure: a consistency predicate,
//! an enabling relation and the configurations they generate.

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::eventset::{canonical_sort, EventSet, MAX_EVENTS};

/// Sorted, unique event names. Index `i` is the event with the `i`-th
/// smallest name.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Names(Vec<String>);

/// Identifiers are non-empty, free of whitespace and `//`, and keep any
/// commas inside balanced braces so that CLI lists can split on the rest.
pub(crate) fn valid_id(id: &str) -> bool {
    !id.is_empty()
        && !id.chars().any(char::is_whitespace)
        && !id.contains("//")
        && split_top_level(id).len() == 1
        && brace_depth_ok(id)
}

fn brace_depth_ok(id: &str) -> bool {
    let mut depth = 0i32;
    for c in id.chars() {
        match c {
            '{' => depth += 1,
            '}' => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return false;
        }
    }
    depth == 0
}

fn split_top_level(list: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in list.char_indices() {
        match c {
            '{' => depth += 1,
            '}' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&list[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&list[start..]);
    parts
}

impl Names {
    pub fn new<I, S>(ids: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut names: Vec<String> = Vec::new();
        for id in ids {
            let id = id.into();
            if !valid_id(&id) {
                return Err(Error::InvalidEventId(id));
            }
            names.push(id);
        }
        names.sort();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEvent(w[0].clone()));
        }
        if names.len() > MAX_EVENTS {
            return Err(Error::TooManyEvents(names.len()));
        }
        Ok(Names(names))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[String] {
        &self.0
    }

    pub fn get(&self, e: usize) -> &str {
        &self.0[e]
    }

    pub fn index(&self, id: &str) -> Result<usize> {
        self.0
            .binary_search_by(|n| n.as_str().cmp(id))
            .map_err(|_| Error::UnknownEvent(id.to_string()))
    }

    pub fn set<I, S>(&self, ids: I) -> Result<EventSet>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        ids.into_iter()
            .map(|id| self.index(id.as_ref()))
            .collect::<Result<EventSet>>()
    }

    pub fn all(&self) -> EventSet {
        EventSet::full(self.len())
    }
}

/// Parse a comma-separated list of event names (the CLI's CONFIG syntax).
pub fn parse_event_list(names: &Names, list: &str) -> Result<EventSet> {
    names.set(
        split_top_level(list)
            .into_iter()
            .map(str::trim)
            .filter(|s| !s.is_empty()),
    )
}

pub trait EventStructure {
    fn names(&self) -> &Names;

    /// Events still present. Futures keep the parent's index space and
    /// shrink this set.
    fn live(&self) -> EventSet;

    fn is_consistent(&self, x: EventSet) -> bool;

    /// `x |- e`: `x` is consistent and contains a cause set of `e`.
    fn enables(&self, x: EventSet, e: usize) -> bool;

    /// `v` is a configuration, `e` is not in it, and `v + e` is again a
    /// configuration.
    fn can_extend(&self, v: EventSet, e: usize) -> bool;

    fn is_configuration(&self, x: EventSet) -> bool {
        if !x.is_subset(self.live()) || !self.is_consistent(x) {
            return false;
        }
        // secured: grow from the empty set one enabled event at a time
        let mut got = EventSet::EMPTY;
        loop {
            let next = (x - got).iter().find(|&e| self.enables(got, e));
            match next {
                Some(e) => got.insert(e),
                None => return got == x,
            }
        }
    }

    /// All finite configurations, breadth-first from the empty one, in
    /// canonical order.
    fn configurations(&self) -> Vec<EventSet> {
        let mut seen: HashSet<EventSet> = HashSet::new();
        let mut queue = VecDeque::from([EventSet::EMPTY]);
        seen.insert(EventSet::EMPTY);
        while let Some(v) = queue.pop_front() {
            for e in (self.live() - v).iter() {
                if self.can_extend(v, e) {
                    let w = v.with(e);
                    if seen.insert(w) {
                        queue.push_back(w);
                    }
                }
            }
        }
        let mut out: Vec<EventSet> = seen.into_iter().collect();
        canonical_sort(&mut out);
        out
    }

    fn maximal_configurations(&self) -> Vec<EventSet> {
        self.configurations()
            .into_iter()
            .filter(|&v| !(self.live() - v).iter().any(|e| self.can_extend(v, e)))
            .collect()
    }

    /// Events enabled at the empty configuration.
    fn initial_events(&self) -> EventSet {
        self.live()
            .iter()
            .filter(|&e| self.can_extend(EventSet::EMPTY, e))
            .collect()
    }

    fn check_configuration(&self, v: EventSet) -> Result<()> {
        if self.is_configuration(v) {
            Ok(())
        } else {
            Err(Error::NotAConfiguration(v.display(self.names().as_slice())))
        }
    }

    fn event(&self, id: &str) -> Result<usize> {
        let e = self.names().index(id)?;
        if self.live().contains(e) {
            Ok(e)
        } else {
            Err(Error::UnknownEvent(id.to_string()))
        }
    }

    fn show(&self, v: EventSet) -> String {
        v.display(self.names().as_slice())
    }
}

/// The three axioms every configuration family satisfies, checked by
/// exhaustive quantification over `family`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyAxioms {
    pub finite_complete: bool,
    pub finitely_based: bool,
    pub coincidence_free: bool,
}

impl FamilyAxioms {
    pub fn all(&self) -> bool {
        self.finite_complete && self.finitely_based && self.coincidence_free
    }
}

pub fn family_axioms(family: &[EventSet]) -> FamilyAxioms {
    let members: HashSet<EventSet> = family.iter().copied().collect();
    let upper = |a: EventSet, b: EventSet| family.iter().any(|&w| (a | b).is_subset(w));

    // Finite completeness. A compatible subfamily can be folded one member
    // at a time; every partial union stays under the same upper bound, so
    // closure under compatible pairwise unions plus the empty union suffice.
    let pairwise = family.iter().enumerate().all(|(i, &a)| {
        family[i + 1..]
            .iter()
            .all(|&b| !upper(a, b) || members.contains(&(a | b)))
    });
    let finite_complete = pairwise && members.contains(&EventSet::EMPTY);

    // Every family member is finite, so it is its own finite witness.
    let finitely_based = family.iter().all(|&u| {
        u.iter()
            .all(|e| family.iter().any(|&v| v.contains(e) && v.is_subset(u)))
    });

    let coincidence_free = family.iter().all(|&u| {
        u.iter().all(|e| {
            u.iter().filter(|&f| f != e).all(|f| {
                family
                    .iter()
                    .any(|&v| v.is_subset(u) && (v.contains(e) != v.contains(f)))
            })
        })
    });

    FamilyAxioms {
        finite_complete,
        finitely_based,
        coincidence_free,
    }
}

/// Nonempty compatible families are closed under intersection; pairwise
/// closure is equivalent on finite families.
pub fn stable_family_closed_under_intersection(family: &[EventSet]) -> bool {
    let members: HashSet<EventSet> = family.iter().copied().collect();
    family.iter().enumerate().all(|(i, &a)| {
        family[i + 1..]
            .iter()
            .all(|&b| !family.iter().any(|&w| (a | b).is_subset(w)) || members.contains(&(a & b)))
    })
}
