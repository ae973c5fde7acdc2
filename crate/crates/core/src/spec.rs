//! Finite state spaces, specifications (nonempty subsets of states) and
//! element-wise maps between specification spaces.
//!
//! A [`SpecMap`] stores only the image of every singleton. Its action on a
//! larger specification is the union of the images of its members, so every
//! map is a join-semilattice homomorphism by construction.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::bits::BitSet;
use crate::error::{Error, Result};

#[derive(Debug)]
struct SpaceInner {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

/// An ordered set of distinct state labels. Cheap to clone.
#[derive(Clone)]
pub struct StateSpace(Arc<SpaceInner>);

impl StateSpace {
    pub fn new<S: AsRef<str>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(|s| s.as_ref().to_string()).collect();
        if labels.is_empty() {
            return Err(Error::EmptySpecification);
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() || l.chars().any(char::is_whitespace) {
                return Err(Error::UnknownState(l.clone()));
            }
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateState(l.clone()));
            }
        }
        Ok(StateSpace(Arc::new(SpaceInner { labels, index })))
    }

    /// All bit strings of the given width, in lexicographic order.
    pub fn bit_strings(width: usize) -> Self {
        let labels = (0..1usize << width).map(|i| {
            (0..width)
                .map(|b| if i >> (width - 1 - b) & 1 == 1 { '1' } else { '0' })
                .collect::<String>()
        });
        StateSpace::new(labels).expect("bit strings are distinct")
    }

    pub fn size(&self) -> usize {
        self.0.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.0.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.0.labels[i]
    }

    pub fn index(&self, label: &str) -> Option<usize> {
        self.0.index.get(label).copied()
    }

    pub fn full(&self) -> Specification {
        Specification {
            space: self.clone(),
            members: BitSet::full(self.size()),
        }
    }

    pub fn singleton(&self, i: usize) -> Specification {
        Specification {
            space: self.clone(),
            members: BitSet::singleton(self.size(), i),
        }
    }

    /// Every specification of the space, in increasing bit-mask order.
    /// Only meaningful for small spaces.
    pub fn all_specs(&self) -> impl Iterator<Item = Specification> + '_ {
        assert!(self.size() < 31, "exhaustive enumeration over {} states", self.size());
        (1u64..(1 << self.size())).map(move |m| Specification {
            space: self.clone(),
            members: BitSet::from_mask(self.size(), m),
        })
    }

    pub(crate) fn check_same(&self, other: &StateSpace, what: &str) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::SpaceMismatch(format!(
                "{what}: {} vs {}",
                self, other
            )))
        }
    }
}

impl PartialEq for StateSpace {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.labels == other.0.labels
    }
}

impl Eq for StateSpace {}

impl fmt::Display for StateSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.labels.join(","))
    }
}

impl fmt::Debug for StateSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StateSpace{self}")
    }
}

/// A nonempty set of states: a state of knowledge.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Specification {
    space: StateSpace,
    members: BitSet,
}

impl std::hash::Hash for StateSpace {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.labels.hash(state)
    }
}

impl Specification {
    /// Builds a specification from state labels; duplicates collapse.
    pub fn from_labels<S: AsRef<str>>(space: &StateSpace, names: impl IntoIterator<Item = S>) -> Result<Self> {
        let mut members = BitSet::empty(space.size());
        for n in names {
            let n = n.as_ref();
            let i = space.index(n).ok_or_else(|| Error::UnknownState(n.to_string()))?;
            members.insert(i);
        }
        Self::from_bits(space, members)
    }

    pub fn from_indices(space: &StateSpace, idx: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members = BitSet::empty(space.size());
        for i in idx {
            if i >= space.size() {
                return Err(Error::UnknownState(format!("#{i}")));
            }
            members.insert(i);
        }
        Self::from_bits(space, members)
    }

    pub fn from_bits(space: &StateSpace, members: BitSet) -> Result<Self> {
        if members.universe() != space.size() {
            return Err(Error::SpaceMismatch("bit width differs from space size".into()));
        }
        if members.is_empty() {
            return Err(Error::EmptySpecification);
        }
        Ok(Specification {
            space: space.clone(),
            members,
        })
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn bits(&self) -> &BitSet {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.count()
    }

    /// Always false; kept for API symmetry with collections.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.contains(i)
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.members.iter().map(|i| self.space.label(i)).collect()
    }

    pub fn is_full(&self) -> bool {
        self.members.is_full()
    }

    pub fn is_subset(&self, other: &Specification) -> bool {
        self.space == other.space && self.members.is_subset(&other.members)
    }

    /// Combined knowledge `V ∩ W`.
    pub fn combine(&self, other: &Specification) -> Result<Specification> {
        self.space.check_same(&other.space, "combine")?;
        let members = self.members.intersection(&other.members);
        if members.is_empty() {
            return Err(Error::Incompatible(format!("{self} ∩ {other} = ∅")));
        }
        Ok(Specification {
            space: self.space.clone(),
            members,
        })
    }

    /// Forgetting: `V ∪ W`.
    pub fn forget(&self, other: &Specification) -> Result<Specification> {
        self.space.check_same(&other.space, "forget")?;
        Ok(Specification {
            space: self.space.clone(),
            members: self.members.union(&other.members),
        })
    }

    pub fn is_compatible(&self, other: &Specification) -> bool {
        self.space == other.space && self.members.intersects(&other.members)
    }
}

impl fmt::Display for Specification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.labels().join(","))
    }
}

impl fmt::Debug for Specification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// An element-wise map `S^source → S^target`, given by its singleton images.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SpecMap {
    source: StateSpace,
    target: StateSpace,
    table: Vec<BitSet>,
}

impl SpecMap {
    pub fn from_table(source: &StateSpace, target: &StateSpace, table: Vec<Specification>) -> Result<Self> {
        if table.len() != source.size() {
            return Err(Error::SpaceMismatch(format!(
                "table has {} entries for {} states",
                table.len(),
                source.size()
            )));
        }
        let mut bits = Vec::with_capacity(table.len());
        for s in table {
            target.check_same(s.space(), "map image")?;
            bits.push(s.members);
        }
        Ok(SpecMap {
            source: source.clone(),
            target: target.clone(),
            table: bits,
        })
    }

    pub fn from_bits(source: &StateSpace, target: &StateSpace, table: Vec<BitSet>) -> Result<Self> {
        if table.len() != source.size() {
            return Err(Error::SpaceMismatch(format!(
                "table has {} entries for {} states",
                table.len(),
                source.size()
            )));
        }
        for b in &table {
            if b.universe() != target.size() {
                return Err(Error::SpaceMismatch("image width differs from target size".into()));
            }
            if b.is_empty() {
                return Err(Error::EmptySpecification);
            }
        }
        Ok(SpecMap {
            source: source.clone(),
            target: target.clone(),
            table,
        })
    }

    /// A deterministic map induced by a function on states.
    pub fn from_fn(source: &StateSpace, target: &StateSpace, f: impl Fn(usize) -> usize) -> Self {
        let table = (0..source.size())
            .map(|i| BitSet::singleton(target.size(), f(i)))
            .collect();
        SpecMap {
            source: source.clone(),
            target: target.clone(),
            table,
        }
    }

    pub fn endo_from_fn(space: &StateSpace, f: impl Fn(usize) -> usize) -> Self {
        Self::from_fn(space, space, f)
    }

    pub fn identity(space: &StateSpace) -> Self {
        Self::endo_from_fn(space, |i| i)
    }

    pub fn constant(space: &StateSpace, image: &Specification) -> Self {
        SpecMap {
            source: space.clone(),
            target: image.space().clone(),
            table: vec![image.members.clone(); space.size()],
        }
    }

    pub fn source(&self) -> &StateSpace {
        &self.source
    }

    pub fn target(&self) -> &StateSpace {
        &self.target
    }

    pub fn is_endomorphism(&self) -> bool {
        self.source == self.target
    }

    pub fn table(&self) -> &[BitSet] {
        &self.table
    }

    /// `f̃(ω)`, the image of a singleton.
    pub fn image(&self, state: usize) -> Specification {
        Specification {
            space: self.target.clone(),
            members: self.table[state].clone(),
        }
    }

    pub fn image_bits(&self, state: usize) -> &BitSet {
        &self.table[state]
    }

    pub(crate) fn apply_bits(&self, members: &BitSet) -> BitSet {
        let mut out = BitSet::empty(self.target.size());
        for i in members.iter() {
            out.union_with(&self.table[i]);
        }
        out
    }

    /// `f(V) = ⋃_{ω∈V} f̃(ω)`.
    pub fn apply(&self, v: &Specification) -> Result<Specification> {
        self.source.check_same(&v.space, "apply")?;
        Ok(Specification {
            space: self.target.clone(),
            members: self.apply_bits(&v.members),
        })
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn compose(&self, inner: &SpecMap) -> Result<SpecMap> {
        self.source.check_same(&inner.target, "compose")?;
        Ok(self.compose_unchecked(inner))
    }

    pub(crate) fn compose_unchecked(&self, inner: &SpecMap) -> SpecMap {
        SpecMap {
            source: inner.source.clone(),
            target: self.target.clone(),
            table: inner.table.iter().map(|b| self.apply_bits(b)).collect(),
        }
    }

    /// Equality of maps, decided on singletons.
    pub fn maps_equal(&self, other: &SpecMap) -> Result<bool> {
        self.source.check_same(&other.source, "maps_equal source")?;
        self.target.check_same(&other.target, "maps_equal target")?;
        Ok(self.table == other.table)
    }

    /// `ω ∈ f̃(ω)` for every state, equivalently `W ⊆ f(W)` for every `W`.
    pub fn is_inflating(&self) -> Result<bool> {
        if !self.is_endomorphism() {
            return Err(Error::NotEndomorphism);
        }
        Ok(self.table.iter().enumerate().all(|(i, b)| b.contains(i)))
    }

    pub fn is_deterministic(&self) -> bool {
        self.table.iter().all(|b| b.count() == 1)
    }

    pub fn is_identity(&self) -> bool {
        self.is_endomorphism() && self.table.iter().enumerate().all(|(i, b)| b.count() == 1 && b.contains(i))
    }

    /// Reinterprets the table between relabelled spaces of the same sizes.
    pub fn with_spaces(&self, source: &StateSpace, target: &StateSpace) -> SpecMap {
        debug_assert_eq!(source.size(), self.source.size());
        debug_assert_eq!(target.size(), self.target.size());
        SpecMap {
            source: source.clone(),
            target: target.clone(),
            table: self.table.clone(),
        }
    }
}

impl fmt::Display for SpecMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.table.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            let labels: Vec<&str> = b.iter().map(|j| self.target.label(j)).collect();
            if labels.len() == 1 {
                write!(f, "{}->{}", self.source.label(i), labels[0])?;
            } else {
                write!(f, "{}->{{{}}}", self.source.label(i), labels.join(","))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SpecMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn omega4() -> StateSpace {
        StateSpace::new(["a", "b", "c", "d"]).unwrap()
    }

    fn swap_ab(s: &StateSpace) -> SpecMap {
        SpecMap::endo_from_fn(s, |i| match i {
            0 => 1,
            1 => 0,
            j => j,
        })
    }

    fn blur(s: &StateSpace) -> SpecMap {
        let ab = Specification::from_labels(s, ["a", "b"]).unwrap();
        SpecMap::from_table(
            s,
            s,
            vec![ab.clone(), ab, s.singleton(2), s.singleton(3)],
        )
        .unwrap()
    }

    fn spec(s: &StateSpace, l: &[&str]) -> Specification {
        Specification::from_labels(s, l.iter().copied()).unwrap()
    }

    #[test]
    fn make_spec_examples() {
        let s = omega4();
        assert_eq!(spec(&s, &["a"]).labels(), vec!["a"]);
        assert_eq!(spec(&s, &["a", "b", "a"]).labels(), vec!["a", "b"]);
        assert_eq!(
            Specification::from_labels(&s, Vec::<&str>::new()),
            Err(Error::EmptySpecification)
        );
        assert_eq!(
            Specification::from_labels(&s, ["z"]),
            Err(Error::UnknownState("z".into()))
        );
    }

    #[test]
    fn duplicate_labels_rejected() {
        assert!(matches!(StateSpace::new(["a", "a"]), Err(Error::DuplicateState(_))));
        assert!(StateSpace::new(Vec::<&str>::new()).is_err());
    }

    #[test]
    fn combine_and_forget() {
        let s = StateSpace::new(["cheetah", "jaguar", "leopard", "lynx", "puma"]).unwrap();
        let v = spec(&s, &["cheetah", "leopard"]);
        let w = spec(&s, &["jaguar", "leopard"]);
        assert_eq!(v.combine(&w).unwrap(), spec(&s, &["leopard"]));
        assert_eq!(v.combine(&v).unwrap(), v);
        assert!(matches!(
            spec(&s, &["cheetah"]).combine(&spec(&s, &["puma"])),
            Err(Error::Incompatible(_))
        ));
        let a = spec(&s, &["cheetah"]);
        assert_eq!(a.forget(&spec(&s, &["jaguar"])).unwrap(), spec(&s, &["cheetah", "jaguar"]));
        assert_eq!(a.forget(&a).unwrap(), a);
        assert_eq!(a.forget(&s.full()).unwrap(), s.full());
        let other = omega4();
        assert!(matches!(a.combine(&other.full()), Err(Error::SpaceMismatch(_))));
    }

    #[test]
    fn apply_examples() {
        let s = omega4();
        assert_eq!(swap_ab(&s).apply(&spec(&s, &["a", "c"])).unwrap(), spec(&s, &["b", "c"]));
        let v = spec(&s, &["b", "d"]);
        assert_eq!(SpecMap::identity(&s).apply(&v).unwrap(), v);
        assert_eq!(blur(&s).apply(&spec(&s, &["a"])).unwrap(), spec(&s, &["a", "b"]));
    }

    #[test]
    fn compose_examples() {
        let s = omega4();
        let id = SpecMap::identity(&s);
        let sw = swap_ab(&s);
        assert!(sw.compose(&sw).unwrap().maps_equal(&id).unwrap());
        assert!(blur(&s).compose(&id).unwrap().maps_equal(&blur(&s)).unwrap());
        assert!(blur(&s).compose(&sw).unwrap().maps_equal(&blur(&s)).unwrap());
        assert!(!sw.maps_equal(&id).unwrap());
        assert!(id.maps_equal(&id).unwrap());
    }

    #[test]
    fn inflating_examples() {
        let s = omega4();
        assert!(blur(&s).is_inflating().unwrap());
        assert!(SpecMap::identity(&s).is_inflating().unwrap());
        assert!(!swap_ab(&s).is_inflating().unwrap());
        let t = StateSpace::new(["x"]).unwrap();
        let e = SpecMap::from_fn(&t, &s, |_| 0);
        assert_eq!(e.is_inflating(), Err(Error::NotEndomorphism));
    }

    #[test]
    fn empty_image_rejected() {
        let s = omega4();
        let mut table = vec![BitSet::singleton(4, 0); 4];
        table[2] = BitSet::empty(4);
        assert!(SpecMap::from_bits(&s, &s, table).is_err());
    }

    #[test]
    fn display() {
        let s = omega4();
        assert_eq!(blur(&s).to_string(), "a->{a,b} b->{a,b} c->c d->d");
        assert_eq!(spec(&s, &["d", "a"]).to_string(), "{a,d}");
        assert_eq!(StateSpace::bit_strings(2).labels(), ["00", "01", "10", "11"]);
    }
}
