//! Safe place/transition nets and their occurrence-net unfolding.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::eventset::{EventSet, MAX_EVENTS};
use crate::prime::{validate_prime, PrimeEs, RawPrime};
use crate::structure::valid_id;

/// A net with arcs between places and transitions and a set of marked
/// places. Lists are kept sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SafeNet {
    pub name: String,
    pub places: Vec<String>,
    pub transitions: Vec<String>,
    pub arcs: Vec<(String, String)>,
    pub marking: Vec<String>,
}

impl SafeNet {
    pub fn new(
        name: &str,
        places: &[&str],
        transitions: &[&str],
        arcs: &[(&str, &str)],
        marking: &[&str],
    ) -> Result<Self> {
        let own = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        Self::validate(
            name.to_string(),
            own(places),
            own(transitions),
            arcs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
            own(marking),
        )
    }

    pub fn validate(
        name: String,
        mut places: Vec<String>,
        mut transitions: Vec<String>,
        mut arcs: Vec<(String, String)>,
        mut marking: Vec<String>,
    ) -> Result<Self> {
        places.sort();
        transitions.sort();
        arcs.sort();
        arcs.dedup();
        marking.sort();
        marking.dedup();
        let mut seen = HashSet::new();
        for id in places.iter().chain(&transitions) {
            if !valid_id(id) {
                return Err(Error::InvalidEventId(id.clone()));
            }
            if !seen.insert(id.as_str()) {
                return Err(Error::Net(format!("`{id}` is declared twice")));
            }
        }
        let is_place = |s: &str| places.binary_search_by(|p| p.as_str().cmp(s)).is_ok();
        let is_transition = |s: &str| transitions.binary_search_by(|p| p.as_str().cmp(s)).is_ok();
        for (a, b) in &arcs {
            let ok = (is_place(a) && is_transition(b)) || (is_transition(a) && is_place(b));
            if !ok {
                return Err(Error::Net(format!("arc {a} -> {b} must join a place and a transition")));
            }
        }
        if let Some(m) = marking.iter().find(|m| !is_place(m)) {
            return Err(Error::Net(format!("marked `{m}` is not a place")));
        }
        Ok(SafeNet {
            name,
            places,
            transitions,
            arcs,
            marking,
        })
    }

    fn place_index(&self, p: &str) -> usize {
        self.places
            .binary_search_by(|x| x.as_str().cmp(p))
            .expect("validated place")
    }

    fn preset(&self, t: &str) -> Vec<usize> {
        self.arcs
            .iter()
            .filter(|(_, b)| b == t)
            .map(|(a, _)| self.place_index(a))
            .collect()
    }

    fn postset(&self, t: &str) -> Vec<usize> {
        self.arcs
            .iter()
            .filter(|(a, _)| a == t)
            .map(|(_, b)| self.place_index(b))
            .collect()
    }
}

/// What the unfolding produced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnfoldReport {
    pub events: usize,
    pub conditions: usize,
    /// More events could be added beyond the bound.
    pub truncated: bool,
}

struct Condition {
    place: usize,
    /// Local configuration of the producing event (empty for initial ones).
    past: EventSet,
}

struct OccEvent {
    transition: usize,
    preset: Vec<usize>,
    /// Local configuration, including the event itself.
    local: EventSet,
}

struct Unfolder<'a> {
    net: &'a SafeNet,
    presets: Vec<Vec<usize>>,
    postsets: Vec<Vec<usize>>,
    conditions: Vec<Condition>,
    events: Vec<OccEvent>,
    /// `consumers[b]`: events with `b` in their preset.
    consumers: Vec<EventSet>,
}

impl Unfolder<'_> {
    fn conflict_free(&self, u: EventSet) -> bool {
        let mut used = HashSet::new();
        u.iter().all(|e| self.events[e].preset.iter().all(|&b| used.insert(b)))
    }

    /// Distinct conditions that can hold together.
    fn is_coset(&self, conds: &[usize]) -> bool {
        let u = conds
            .iter()
            .fold(EventSet::EMPTY, |acc, &b| acc | self.conditions[b].past);
        let distinct: HashSet<usize> = conds.iter().copied().collect();
        distinct.len() == conds.len()
            && self.conflict_free(u)
            && conds.iter().all(|&b| !self.consumers[b].intersects(u))
    }

    /// Candidate events, each as `(transition, preset conditions)`.
    fn extensions(&self) -> Vec<(usize, Vec<usize>)> {
        let mut out = Vec::new();
        for (t, pre) in self.presets.iter().enumerate() {
            if pre.is_empty() {
                // source transitions would unfold without bound from nothing
                continue;
            }
            let choices: Vec<Vec<usize>> = pre
                .iter()
                .map(|&p| {
                    (0..self.conditions.len())
                        .filter(|&b| self.conditions[b].place == p)
                        .collect()
                })
                .collect();
            let mut combos: Vec<Vec<usize>> = vec![Vec::new()];
            for opts in &choices {
                combos = combos
                    .into_iter()
                    .flat_map(|c| {
                        opts.iter().map(move |&b| {
                            let mut c = c.clone();
                            c.push(b);
                            c
                        })
                    })
                    .filter(|c| self.is_coset(c))
                    .collect();
            }
            for mut c in combos {
                c.sort();
                let exists = self.events.iter().any(|e| e.transition == t && e.preset == c);
                if !exists {
                    out.push((t, c));
                }
            }
        }
        out
    }

    fn local_of(&self, preset: &[usize]) -> EventSet {
        preset
            .iter()
            .fold(EventSet::EMPTY, |acc, &b| acc | self.conditions[b].past)
    }

    fn firing_sequence(&self, u: EventSet) -> Vec<String> {
        // event indices follow the order in which events were added,
        // which is a causal order
        u.iter()
            .map(|e| self.net.transitions[self.events[e].transition].clone())
            .collect()
    }

    fn add_event(&mut self, t: usize, preset: Vec<usize>) -> Result<()> {
        let e = self.events.len();
        let local = self.local_of(&preset).with(e);
        for &b in &preset {
            self.consumers[b].insert(e);
        }
        self.events.push(OccEvent {
            transition: t,
            preset,
            local,
        });
        for &p in &self.postsets[t].clone() {
            let b = self.conditions.len();
            self.conditions.push(Condition { place: p, past: local });
            self.consumers.push(EventSet::EMPTY);
            let clash = (0..b).find(|&other| self.conditions[other].place == p && self.is_coset(&[b, other]));
            if let Some(other) = clash {
                let witness = local | self.conditions[other].past;
                return Err(Error::UnsafeNet(self.firing_sequence(witness)));
            }
        }
        Ok(())
    }
}

/// Unfolds `net` up to `max_events` events into a binary-conflict
/// structure. Events are named `t.k` for the `k`-th occurrence of `t`.
pub fn unfold_net(net: &SafeNet, max_events: usize) -> Result<(PrimeEs, UnfoldReport)> {
    if max_events == 0 {
        return Err(Error::ZeroMaxEvents);
    }
    if max_events > MAX_EVENTS {
        return Err(Error::TooManyEvents(max_events));
    }
    let mut u = Unfolder {
        net,
        presets: net.transitions.iter().map(|t| net.preset(t)).collect(),
        postsets: net.transitions.iter().map(|t| net.postset(t)).collect(),
        conditions: Vec::new(),
        events: Vec::new(),
        consumers: Vec::new(),
    };
    for m in &net.marking {
        u.conditions.push(Condition {
            place: net.place_index(m),
            past: EventSet::EMPTY,
        });
        u.consumers.push(EventSet::EMPTY);
    }
    let mut truncated = false;
    loop {
        let mut ext = u.extensions();
        if ext.is_empty() {
            break;
        }
        if u.events.len() == max_events {
            truncated = true;
            break;
        }
        ext.sort_by_key(|(t, pre)| (u.local_of(pre).len(), net.transitions[*t].clone(), pre.clone()));
        let (t, pre) = ext.swap_remove(0);
        u.add_event(t, pre)?;
    }

    let mut counts = vec![0usize; net.transitions.len()];
    let names: Vec<String> = u
        .events
        .iter()
        .map(|e| {
            counts[e.transition] += 1;
            format!("{}.{}", net.transitions[e.transition], counts[e.transition])
        })
        .collect();
    let mut raw = RawPrime {
        name: net.name.clone(),
        events: names.clone(),
        truncated,
        ..Default::default()
    };
    for (i, e) in u.events.iter().enumerate() {
        for j in e.local.without(i).iter() {
            raw.causes.push((names[j].clone(), names[i].clone()));
        }
    }
    for b in 0..u.conditions.len() {
        let cons: Vec<usize> = u.consumers[b].iter().collect();
        for (k, &x) in cons.iter().enumerate() {
            for &y in &cons[k + 1..] {
                raw.conflicts.push((names[x].clone(), names[y].clone()));
            }
        }
    }
    let (es, _) = validate_prime(&raw)?;
    let report = UnfoldReport {
        events: u.events.len(),
        conditions: u.conditions.len(),
        truncated,
    };
    Ok((es, report))
}

/// Three marked places feeding the overlapping choices `t1`/`t2`, `t2`/`t3`, `t3`/`t4`, followed by `ta`
/// and `tb`.
pub fn confusion_net() -> SafeNet {
    SafeNet::new(
        "confusion",
        &["p1", "p2", "p3", "p5", "p6"],
        &["t1", "t2", "t3", "t4", "ta", "tb"],
        &[
            ("p1", "t1"),
            ("p1", "t2"),
            ("p2", "t2"),
            ("p2", "t3"),
            ("p3", "t3"),
            ("p3", "t4"),
            ("t1", "p5"),
            ("t2", "p5"),
            ("p5", "ta"),
            ("t3", "p6"),
            ("p6", "tb"),
        ],
        &["p1", "p2", "p3"],
    )
    .expect("fixture is valid")
}

/// Two self-loops and a transition consuming both tokens.
pub fn loops_net() -> SafeNet {
    SafeNet::new(
        "loops",
        &["q1", "q2"],
        &["u1", "u2", "v"],
        &[
            ("q1", "u1"),
            ("u1", "q1"),
            ("q2", "u2"),
            ("u2", "q2"),
            ("q1", "v"),
            ("q2", "v"),
        ],
        &["q1", "q2"],
    )
    .expect("fixture is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::EventStructure;

    #[test]
    fn single_transition() {
        let net = SafeNet::new("one", &["p"], &["t"], &[("p", "t")], &["p"]).unwrap();
        let (es, report) = unfold_net(&net, 5).unwrap();
        assert_eq!(es.names().as_slice(), &["t.1".to_string()]);
        assert!(!report.truncated);
    }

    #[test]
    fn confusion_net_unfolds_completely() {
        let (es, report) = unfold_net(&confusion_net(), 10).unwrap();
        assert_eq!(report.events, 7);
        assert!(!report.truncated);
        let names: Vec<&str> = es.names().as_slice().iter().map(String::as_str).collect();
        assert_eq!(names, vec!["t1.1", "t2.1", "t3.1", "t4.1", "ta.1", "ta.2", "tb.1"]);
        assert!(es.immediate_conflict("t1.1", "t2.1").unwrap());
        assert!(es.immediate_conflict("t2.1", "t3.1").unwrap());
        assert!(!es.immediate_conflict("t1.1", "t3.1").unwrap());
    }

    #[test]
    fn loops_are_truncated() {
        let (es, report) = unfold_net(&loops_net(), 6).unwrap();
        assert!(report.truncated);
        assert_eq!(report.events, 6);
        assert!(es.is_truncated());
    }

    #[test]
    fn errors() {
        let net = SafeNet::new("one", &["p"], &["t"], &[("p", "t")], &["p"]).unwrap();
        assert_eq!(unfold_net(&net, 0).unwrap_err(), Error::ZeroMaxEvents);
        let unsafe_net = SafeNet::new(
            "two",
            &["p", "q", "r"],
            &["s", "t"],
            &[("p", "s"), ("s", "r"), ("q", "t"), ("t", "r")],
            &["p", "q"],
        )
        .unwrap();
        match unfold_net(&unsafe_net, 10) {
            Err(Error::UnsafeNet(seq)) => assert_eq!(seq, vec!["s".to_string(), "t".to_string()]),
            other => panic!("{other:?}"),
        }
        assert!(SafeNet::new("x", &["p"], &["t"], &[("p", "p")], &[]).is_err());
    }
}
