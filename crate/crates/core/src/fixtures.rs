//! Small named structures used by tests, the CLI fixtures and the docs.

use crate::prime::{validate_prime, PrimeEs, RawPrime};
use crate::stable::{validate_stable, RawStable, StableEs};

fn prime(raw: RawPrime) -> PrimeEs {
    validate_prime(&raw).expect("fixture is valid").0
}

fn stable(raw: RawStable) -> StableEs {
    validate_stable(&raw).expect("fixture is valid").0
}

pub fn empty() -> PrimeEs {
    prime(RawPrime::new("empty", &[]))
}

/// `a # b`.
pub fn pair() -> PrimeEs {
    prime(RawPrime::new("pair", &["a", "b"]).conflict("a", "b"))
}

/// `a # b # c` with `a` and `c` concurrent.
pub fn confusion() -> PrimeEs {
    prime(
        RawPrime::new("confusion", &["a", "b", "c"])
            .conflict("a", "b")
            .conflict("b", "c"),
    )
}

/// Two independent binary choices.
pub fn two_cell() -> PrimeEs {
    prime(
        RawPrime::new("twocell", &["a1", "a2", "b1", "b2"])
            .conflict("a1", "a2")
            .conflict("b1", "b2"),
    )
}

/// `e < e'` joined by the immediate-conflict chain `e, x1, x2, e'`.
pub fn jump() -> PrimeEs {
    prime(
        RawPrime::new("jump", &["e", "e'", "x1", "x2"])
            .cause("e", "e'")
            .conflict("e", "x1")
            .conflict("x1", "x2")
            .conflict("x2", "e'"),
    )
}

pub fn es_example_raw() -> RawPrime {
    RawPrime::new("example", &["e1", "e2", "e3", "e4", "ea", "ea'", "eb"])
        .cause("e1", "ea")
        .cause("e2", "ea'")
        .cause("e3", "eb")
        .conflict("e1", "e2")
        .conflict("e2", "e3")
        .conflict("e3", "e4")
        .conflict("ea", "eb")
}

/// The binary-conflict structure associated with [`ses_example`].
pub fn es_example() -> PrimeEs {
    prime(es_example_raw())
}

pub fn ses_example_raw() -> RawStable {
    RawStable::new("example", &["e1", "e2", "e3", "e4", "ea", "eb"])
        .rule(&[], "e1")
        .rule(&[], "e2")
        .rule(&[], "e3")
        .rule(&[], "e4")
        .rule(&["e1"], "ea")
        .rule(&["e2"], "ea")
        .rule(&["e3"], "eb")
        .forbid(&["e1", "e2"])
        .forbid(&["e2", "e3"])
        .forbid(&["e3", "e4"])
        .forbid(&["e1", "ea", "eb"])
}

/// Four initial choices; `ea` has two possible causes and conflicts with
/// `eb` only after `e1`.
pub fn ses_example() -> StableEs {
    stable(ses_example_raw())
}

pub fn ses_empty() -> StableEs {
    stable(RawStable::new("empty", &[]))
}

/// A causal chain `a` then `b`.
pub fn ses_chain() -> StableEs {
    stable(RawStable::new("chain", &["a", "b"]).rule(&[], "a").rule(&["a"], "b"))
}

/// Consistency records only the conflict between the two initial events,
/// not the conflicts their successors inherit.
pub fn ses_not_sensible() -> StableEs {
    stable(
        RawStable::new("unsensible", &["e1", "e2", "e3", "e4"])
            .rule(&[], "e1")
            .rule(&[], "e3")
            .rule(&["e1"], "e2")
            .rule(&["e3"], "e4")
            .forbid(&["e1", "e3"]),
    )
}

/// Three pairwise consistent initial events that are jointly forbidden.
pub fn ses_ternary() -> StableEs {
    stable(
        RawStable::new("ternary", &["a", "b", "c"])
            .rule(&[], "a")
            .rule(&[], "b")
            .rule(&[], "c")
            .forbid(&["a", "b", "c"]),
    )
}

/// `c` and `d` are in immediate conflict after `a`, but compatible after `b`.
pub fn ses_transient_conflict() -> StableEs {
    stable(
        RawStable::new("transient", &["a", "b", "c", "d"])
            .rule(&[], "a")
            .rule(&[], "b")
            .rule(&[], "c")
            .rule(&[], "d")
            .forbid(&["a", "b"])
            .forbid(&["a", "c", "d"]),
    )
}

/// [`ses_example`] without the ternary forbidden set and with `eb` initial.
pub fn ses_jump_free() -> StableEs {
    stable(
        RawStable::new("jumpfree", &["e1", "e2", "e3", "e4", "ea", "eb"])
            .rule(&[], "e1")
            .rule(&[], "e2")
            .rule(&[], "e3")
            .rule(&[], "e4")
            .rule(&["e1"], "ea")
            .rule(&["e2"], "ea")
            .rule(&[], "eb")
            .forbid(&["e1", "e2"])
            .forbid(&["e2", "e3"])
            .forbid(&["e3", "e4"]),
    )
}

/// A binary choice followed on one branch by a second choice.
pub fn ses_nested_choice() -> StableEs {
    stable(
        RawStable::new("nested", &["a", "b", "c", "d"])
            .rule(&[], "a")
            .rule(&[], "b")
            .rule(&["a"], "c")
            .rule(&["a"], "d")
            .forbid(&["a", "b"])
            .forbid(&["b", "c"])
            .forbid(&["b", "d"])
            .forbid(&["c", "d"]),
    )
}

pub fn prime_fixtures() -> Vec<PrimeEs> {
    vec![empty(), pair(), confusion(), two_cell(), jump(), es_example()]
}

pub fn stable_fixtures() -> Vec<StableEs> {
    vec![
        ses_empty(),
        ses_chain(),
        ses_example(),
        ses_not_sensible(),
        ses_ternary(),
        ses_transient_conflict(),
        ses_jump_free(),
        ses_nested_choice(),
    ]
}

const RANDOM_NAMES: [&str; 8] = ["a", "b", "c", "d", "e", "f", "g", "h"];

/// Shape of the structures drawn by [`random_stable`].
#[derive(Debug, Clone, Copy)]
pub struct RandomShape {
    pub events: usize,
    /// Chance that a pair of events is forbidden.
    pub pair_conflict: f64,
    /// Chance that a pairwise consistent triple is forbidden.
    pub triple_conflict: f64,
    /// Chance that an event has the empty enabling.
    pub initial: f64,
}

impl RandomShape {
    pub fn new(events: usize) -> Self {
        RandomShape {
            events,
            pair_conflict: 0.3,
            triple_conflict: 0.05,
            initial: 0.5,
        }
    }

    pub fn binary(events: usize) -> Self {
        RandomShape {
            triple_conflict: 0.0,
            ..Self::new(events)
        }
    }
}

/// A random valid stable structure. Enablings that would break stability
/// are skipped, so some events may end up never enabled.
pub fn random_stable(rng: &mut impl rand::Rng, shape: RandomShape) -> StableEs {
    let n = shape.events.min(RANDOM_NAMES.len());
    let names = &RANDOM_NAMES[..n];
    let mut raw = RawStable::new("random", names);
    let mut pairs = std::collections::HashSet::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(shape.pair_conflict) {
                raw = raw.forbid(&[names[i], names[j]]);
                pairs.insert((i, j));
            }
        }
    }
    if shape.triple_conflict > 0.0 {
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let free = !pairs.contains(&(i, j)) && !pairs.contains(&(i, k)) && !pairs.contains(&(j, k));
                    if free && rng.gen_bool(shape.triple_conflict) {
                        raw = raw.forbid(&[names[i], names[j], names[k]]);
                    }
                }
            }
        }
    }
    for e in 0..n {
        let mut premises: Vec<Vec<&str>> = Vec::new();
        if rng.gen_bool(shape.initial) {
            premises.push(Vec::new());
        } else {
            for _ in 0..rng.gen_range(1..=2) {
                let size = rng.gen_range(1..=2);
                let mut p: Vec<&str> = Vec::new();
                for _ in 0..size {
                    let q = rng.gen_range(0..n);
                    if q != e && !p.contains(&names[q]) {
                        p.push(names[q]);
                    }
                }
                if !p.is_empty() {
                    premises.push(p);
                }
            }
        }
        for p in premises {
            let next = raw.clone().rule(&p, names[e]);
            if validate_stable(&next).is_ok() {
                raw = next;
            }
        }
    }
    validate_stable(&raw).expect("every step kept the structure valid").0
}

/// A random valid prime structure: causality follows name order and each
/// conflict is kept only if no event ends up in conflict with itself.
pub fn random_prime(rng: &mut impl rand::Rng, events: usize, cause: f64, conflict: f64) -> PrimeEs {
    let n = events.min(RANDOM_NAMES.len());
    let names = &RANDOM_NAMES[..n];
    let mut raw = RawPrime::new("random", names);
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(cause) {
                raw = raw.cause(names[i], names[j]);
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(conflict) {
                let next = raw.clone().conflict(names[i], names[j]);
                if validate_prime(&next).is_ok() {
                    raw = next;
                }
            }
        }
    }
    prime(raw)
}
