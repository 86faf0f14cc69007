//! Fixed-point-free involutions (perfect matchings) on finite label sets.
//!
//! A [`Pairing`] partitions its carrier into two-element subsets. Two
//! pairings that share a middle set `Y` compose by stacking: alternating
//! chains that leave `Y` give the result pairing on `X ⊔ Z`, and chains that
//! stay inside `Y` close up into cycles, which are counted.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;

/// A perfect matching on a finite, totally ordered carrier.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pairing<L: Ord + Clone = String> {
    partner: BTreeMap<L, L>,
}

fn show<L: Debug>(l: &L) -> String {
    format!("{l:?}")
}

impl<L: Ord + Clone + Debug> Pairing<L> {
    /// The unique pairing on the empty carrier.
    pub fn empty() -> Self {
        Pairing { partner: BTreeMap::new() }
    }

    /// Validates `pairs` against `carrier`.
    pub fn new<I, P>(carrier: I, pairs: P) -> Result<Self>
    where
        I: IntoIterator<Item = L>,
        P: IntoIterator<Item = (L, L)>,
    {
        let mut set = BTreeSet::new();
        for l in carrier {
            if !set.insert(l.clone()) {
                return Err(Error::DuplicateLabel(show(&l)));
            }
        }
        let mut partner = BTreeMap::new();
        for (a, b) in pairs {
            if a == b {
                return Err(Error::SelfPair(show(&a)));
            }
            for x in [&a, &b] {
                if !set.contains(x) {
                    return Err(Error::UnknownLabel(show(x)));
                }
                if partner.contains_key(x) {
                    return Err(Error::DuplicateLabel(show(x)));
                }
            }
            partner.insert(a.clone(), b.clone());
            partner.insert(b, a);
        }
        if let Some(l) = set.iter().find(|l| !partner.contains_key(*l)) {
            return Err(Error::UncoveredLabel(show(l)));
        }
        Ok(Pairing { partner })
    }

    /// Builds a pairing whose carrier is exactly the labels in `pairs`.
    pub fn from_pairs<P>(pairs: P) -> Result<Self>
    where
        P: IntoIterator<Item = (L, L)>,
    {
        let pairs: Vec<(L, L)> = pairs.into_iter().collect();
        let carrier: Vec<L> = pairs.iter().flat_map(|(a, b)| [a.clone(), b.clone()]).collect();
        Pairing::new(carrier, pairs)
    }

    /// The partner of `x`, if `x` is in the carrier.
    pub fn apply(&self, x: &L) -> Option<&L> {
        self.partner.get(x)
    }

    pub fn carrier(&self) -> impl Iterator<Item = &L> {
        self.partner.keys()
    }

    pub fn contains(&self, x: &L) -> bool {
        self.partner.contains_key(x)
    }

    pub fn len(&self) -> usize {
        self.partner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partner.is_empty()
    }

    /// The two-element orbits, each ordered and the list sorted by least label.
    pub fn orbits(&self) -> Vec<(L, L)> {
        self.partner
            .iter()
            .filter(|(a, b)| a < b)
            .map(|(a, b)| (a.clone(), b.clone()))
            .collect()
    }

    /// Relabels the carrier along an injective map.
    pub fn map_labels<M: Ord + Clone + Debug>(&self, f: impl Fn(&L) -> M) -> Result<Pairing<M>> {
        Pairing::from_pairs(self.orbits().iter().map(|(a, b)| (f(a), f(b))))
    }
}

/// Composes `p_xy` on `X ⊔ Y` with `p_yz` on `Y ⊔ Z` along the shared set `Y`.
///
/// Returns the pairing on `X ⊔ Z` and the number of closed cycles inside `Y`.
pub fn compose_pairings<L: Ord + Clone + Debug>(
    p_xy: &Pairing<L>,
    p_yz: &Pairing<L>,
    shared: &BTreeSet<L>,
) -> Result<(Pairing<L>, usize)> {
    for y in shared {
        if !p_xy.contains(y) || !p_yz.contains(y) {
            return Err(Error::SharedSetMismatch(format!("{} is not in both carriers", show(y))));
        }
    }
    let xs: Vec<&L> = p_xy.carrier().filter(|l| !shared.contains(*l)).collect();
    let zs: Vec<&L> = p_yz.carrier().filter(|l| !shared.contains(*l)).collect();
    if let Some(x) = xs.iter().find(|x| p_yz.contains(x)) {
        return Err(Error::SharedSetMismatch(format!(
            "{} lies in both outer sets",
            show(*x)
        )));
    }

    let mut visited: BTreeSet<L> = BTreeSet::new();
    let mut pairs = Vec::new();
    // Open chains start at an outer label and alternate until leaving Y.
    for (start, first_is_xy) in xs.iter().map(|x| (*x, true)).chain(zs.iter().map(|z| (*z, false))) {
        if visited.contains(start) {
            continue;
        }
        visited.insert(start.clone());
        let mut use_xy = first_is_xy;
        let mut cur = start.clone();
        loop {
            let p = if use_xy { p_xy } else { p_yz };
            let next = p.apply(&cur).expect("carrier label").clone();
            if !shared.contains(&next) {
                visited.insert(next.clone());
                pairs.push((start.clone(), next));
                break;
            }
            visited.insert(next.clone());
            cur = next;
            use_xy = !use_xy;
        }
    }
    // Whatever remains in Y lies on closed alternating cycles.
    let mut closed = 0;
    for y in shared {
        if visited.contains(y) {
            continue;
        }
        closed += 1;
        let mut cur = y.clone();
        let mut use_xy = true;
        loop {
            visited.insert(cur.clone());
            let p = if use_xy { p_xy } else { p_yz };
            cur = p.apply(&cur).expect("carrier label").clone();
            use_xy = !use_xy;
            if &cur == y {
                break;
            }
        }
    }
    Ok((Pairing::from_pairs(pairs)?, closed))
}

/// All perfect matchings of `items`, built by pairing the least unmatched
/// item with each remaining one in turn.
pub fn all_matchings<L: Clone>(items: &[L]) -> Vec<Vec<(L, L)>> {
    fn rec<L: Clone>(rest: &[L], acc: &mut Vec<(L, L)>, out: &mut Vec<Vec<(L, L)>>) {
        if rest.is_empty() {
            out.push(acc.clone());
            return;
        }
        let first = &rest[0];
        for i in 1..rest.len() {
            acc.push((first.clone(), rest[i].clone()));
            let remaining: Vec<L> = rest[1..]
                .iter()
                .enumerate()
                .filter(|(j, _)| j + 1 != i)
                .map(|(_, l)| l.clone())
                .collect();
            rec(&remaining, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if items.len().is_multiple_of(2) {
        rec(items, &mut Vec::new(), &mut out);
    }
    out
}

#[derive(Serialize, Deserialize)]
struct PairingWire {
    carrier: Vec<String>,
    pairs: Vec<[String; 2]>,
}

impl Serialize for Pairing<String> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PairingWire {
            carrier: self.carrier().cloned().collect(),
            pairs: self.orbits().into_iter().map(|(a, b)| [a, b]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Pairing<String> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = PairingWire::deserialize(d)?;
        Pairing::new(w.carrier, w.pairs.into_iter().map(|[a, b]| (a, b)))
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> String {
        x.to_string()
    }

    fn set(xs: &[&str]) -> BTreeSet<String> {
        xs.iter().map(|x| s(x)).collect()
    }

    #[test]
    fn validation_errors() {
        assert!(Pairing::new([s("s"), s("t")], [(s("s"), s("t"))]).is_ok());
        assert_eq!(
            Pairing::new([s("a")], [(s("a"), s("a"))]),
            Err(Error::SelfPair("\"a\"".into()))
        );
        assert!(matches!(
            Pairing::new([s("a"), s("b"), s("c")], [(s("a"), s("b"))]),
            Err(Error::UncoveredLabel(_))
        ));
        assert!(matches!(
            Pairing::new([s("a"), s("a")], [(s("a"), s("b"))]),
            Err(Error::DuplicateLabel(_))
        ));
        assert!(matches!(
            Pairing::new([s("a"), s("b"), s("c")], [(s("a"), s("b")), (s("b"), s("c"))]),
            Err(Error::DuplicateLabel(_))
        ));
    }

    #[test]
    fn orbits_sorted() {
        let p = Pairing::from_pairs([(s("c"), s("d")), (s("b"), s("a"))]).unwrap();
        assert_eq!(p.orbits(), vec![(s("a"), s("b")), (s("c"), s("d"))]);
        assert!(Pairing::<String>::empty().orbits().is_empty());
    }

    #[test]
    fn single_chain_and_trace() {
        let a = Pairing::from_pairs([(s("x1"), s("y1"))]).unwrap();
        let b = Pairing::from_pairs([(s("y1"), s("z1"))]).unwrap();
        let (r, k) = compose_pairings(&a, &b, &set(&["y1"])).unwrap();
        assert_eq!(r.orbits(), vec![(s("x1"), s("z1"))]);
        assert_eq!(k, 0);

        let c = Pairing::from_pairs([(s("y1"), s("y2"))]).unwrap();
        let (r, k) = compose_pairings(&c, &c, &set(&["y1", "y2"])).unwrap();
        assert!(r.is_empty());
        assert_eq!(k, 1);
    }

    #[test]
    fn four_cycle_is_one_component() {
        let a = Pairing::from_pairs([(s("y1"), s("y2")), (s("y3"), s("y4"))]).unwrap();
        let b = Pairing::from_pairs([(s("y2"), s("y3")), (s("y4"), s("y1"))]).unwrap();
        let (r, k) = compose_pairings(&a, &b, &set(&["y1", "y2", "y3", "y4"])).unwrap();
        assert!(r.is_empty());
        assert_eq!(k, 1);
    }

    #[test]
    fn shared_set_must_lie_in_both() {
        let a = Pairing::from_pairs([(s("x"), s("y"))]).unwrap();
        let b = Pairing::from_pairs([(s("w"), s("z"))]).unwrap();
        assert!(matches!(
            compose_pairings(&a, &b, &set(&["y"])),
            Err(Error::SharedSetMismatch(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let p = Pairing::from_pairs([(s("b"), s("a"))]).unwrap();
        let j = serde_json::to_string(&p).unwrap();
        assert_eq!(j, r#"{"carrier":["a","b"],"pairs":[["a","b"]]}"#);
        let q: Pairing = serde_json::from_str(&j).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn matching_counts_are_double_factorials() {
        let counts: Vec<usize> = (0..=8).map(|n| all_matchings(&(0..n).collect::<Vec<_>>()).len()).collect();
        assert_eq!(counts, vec![1, 0, 1, 0, 3, 0, 15, 0, 105]);
    }
}
