//! Transformation monoids, resource theories and the reachability pre-order.

use std::collections::{HashMap, VecDeque};

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::spec::{SpecMap, Specification, StateSpace};

pub const DEFAULT_CAP: usize = 100_000;

/// The monoid cap, honouring the `RTK_CAP` environment variable.
pub fn default_cap() -> usize {
    std::env::var("RTK_CAP")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .filter(|&c: &usize| c >= 1)
        .unwrap_or(DEFAULT_CAP)
}

/// A finite composition-closed set of endomorphisms containing the identity.
///
/// Element 0 is always the identity. Every element carries a word over the
/// generators: `[g0, g1, .., gk]` denotes `g0 ∘ g1 ∘ .. ∘ gk`.
#[derive(Clone, Debug)]
pub struct TransformationMonoid {
    space: StateSpace,
    generators: Vec<SpecMap>,
    elements: Vec<SpecMap>,
    words: Vec<Vec<usize>>,
    index: HashMap<Vec<BitSet>, usize>,
}

impl TransformationMonoid {
    /// Saturates `generators` under composition, breadth first.
    pub fn close(space: &StateSpace, generators: Vec<SpecMap>, cap: usize) -> Result<Self> {
        for g in &generators {
            space.check_same(g.source(), "generator source")?;
            space.check_same(g.target(), "generator target")?;
        }
        let mut m = TransformationMonoid {
            space: space.clone(),
            generators,
            elements: Vec::new(),
            words: Vec::new(),
            index: HashMap::new(),
        };
        m.push(SpecMap::identity(space), Vec::new(), cap)?;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for gi in 0..m.generators.len() {
                let prod = m.generators[gi].compose_unchecked(&m.elements[x]);
                if m.index.contains_key(prod.table()) {
                    continue;
                }
                let mut word = Vec::with_capacity(m.words[x].len() + 1);
                word.push(gi);
                word.extend_from_slice(&m.words[x]);
                let k = m.push(prod, word, cap)?;
                queue.push_back(k);
            }
        }
        Ok(m)
    }

    /// Every deterministic map `Ω → Ω` (|Ω|^|Ω| elements).
    pub fn all_functions(space: &StateSpace, cap: usize) -> Result<Self> {
        let n = space.size();
        let total = (n as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if total > cap as u128 {
            return Err(Error::CapExceeded(cap));
        }
        let mut gens = Vec::new();
        let mut digits = vec![0usize; n];
        loop {
            gens.push(SpecMap::endo_from_fn(space, |i| digits[i]));
            let mut k = n;
            loop {
                if k == 0 {
                    return Self::from_closed(space, gens);
                }
                k -= 1;
                digits[k] += 1;
                if digits[k] < n {
                    break;
                }
                digits[k] = 0;
            }
        }
    }

    /// The symmetric group on Ω.
    pub fn permutations(space: &StateSpace, cap: usize) -> Result<Self> {
        let n = space.size();
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(SpecMap::endo_from_fn(space, |i| match i {
                0 => 1,
                1 => 0,
                j => j,
            }));
            gens.push(SpecMap::endo_from_fn(space, |i| (i + 1) % n));
        }
        Self::close(space, gens, cap)
    }

    /// Wraps an already composition-closed list. Each non-identity element
    /// becomes its own generator; closure is verified.
    pub fn from_closed(space: &StateSpace, maps: Vec<SpecMap>) -> Result<Self> {
        let mut m = TransformationMonoid {
            space: space.clone(),
            generators: Vec::new(),
            elements: Vec::new(),
            words: Vec::new(),
            index: HashMap::new(),
        };
        m.push(SpecMap::identity(space), Vec::new(), usize::MAX)?;
        for f in maps {
            space.check_same(f.source(), "element source")?;
            space.check_same(f.target(), "element target")?;
            if m.index.contains_key(f.table()) {
                continue;
            }
            let g = m.generators.len();
            m.generators.push(f.clone());
            m.push(f, vec![g], usize::MAX)?;
        }
        m.check_closed()?;
        Ok(m)
    }

    /// Keeps the elements of `self` selected by `keep`, preserving order and
    /// words. The selection must itself be a monoid.
    pub fn submonoid(&self, keep: &BitSet) -> Result<Self> {
        if !keep.contains(0) {
            return Err(Error::NotSubmonoid("identity missing".into()));
        }
        let mut m = TransformationMonoid {
            space: self.space.clone(),
            generators: self.generators.clone(),
            elements: Vec::new(),
            words: Vec::new(),
            index: HashMap::new(),
        };
        for i in keep.iter() {
            m.push(self.elements[i].clone(), self.words[i].clone(), usize::MAX)?;
        }
        m.check_closed()?;
        Ok(m)
    }

    fn push(&mut self, f: SpecMap, word: Vec<usize>, cap: usize) -> Result<usize> {
        if self.elements.len() >= cap {
            return Err(Error::CapExceeded(cap));
        }
        let k = self.elements.len();
        self.index.insert(f.table().to_vec(), k);
        self.elements.push(f);
        self.words.push(word);
        Ok(k)
    }

    fn check_closed(&self) -> Result<()> {
        for f in &self.elements {
            for g in &self.elements {
                let p = f.compose_unchecked(g);
                if !self.index.contains_key(p.table()) {
                    return Err(Error::NotSubmonoid(format!("{f:?} ∘ {g:?} missing")));
                }
            }
        }
        Ok(())
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    /// Never true: the identity is always present.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn elements(&self) -> &[SpecMap] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &SpecMap {
        &self.elements[i]
    }

    pub fn generators(&self) -> &[SpecMap] {
        &self.generators
    }

    pub fn word(&self, i: usize) -> &[usize] {
        &self.words[i]
    }

    pub fn index_of(&self, f: &SpecMap) -> Option<usize> {
        if f.source() != &self.space || f.target() != &self.space {
            return None;
        }
        self.index.get(f.table()).copied()
    }

    pub fn contains(&self, f: &SpecMap) -> bool {
        self.index_of(f).is_some()
    }

    /// Indices of the given maps, or `NotInMonoid` naming the first stranger.
    pub fn indices_of<'a>(&self, maps: impl IntoIterator<Item = &'a SpecMap>) -> Result<BitSet> {
        let mut set = BitSet::empty(self.len());
        for f in maps {
            let i = self.index_of(f).ok_or_else(|| Error::NotInMonoid(f.to_string()))?;
            set.insert(i);
        }
        Ok(set)
    }

    /// Renders element `i` as a composition of generator names.
    pub fn describe(&self, i: usize, names: &[String]) -> String {
        let w = &self.words[i];
        if w.is_empty() {
            return "id".to_string();
        }
        w.iter()
            .map(|&g| names.get(g).cloned().unwrap_or_else(|| format!("g{g}")))
            .collect::<Vec<_>>()
            .join("∘")
    }
}

/// A specification space together with its allowed transformations.
#[derive(Clone, Debug)]
pub struct ResourceTheory {
    monoid: TransformationMonoid,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReachWitness {
    pub found: bool,
    /// Index of the witnessing element in the monoid.
    pub index: Option<usize>,
    pub map: Option<SpecMap>,
}

impl ReachWitness {
    pub(crate) fn from_index(m: &TransformationMonoid, i: Option<usize>) -> Self {
        ReachWitness {
            found: i.is_some(),
            index: i,
            map: i.map(|i| m.element(i).clone()),
        }
    }
}

/// Partition of candidate specifications into mutual-reachability classes.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub classes: Vec<Vec<Specification>>,
    /// `reach[i][j]`: members of class `i` reach members of class `j`.
    pub reach: Vec<Vec<bool>>,
    /// The class containing Ω, i.e. the free resources among the candidates.
    pub top: usize,
}

impl Quotient {
    /// Covering pairs `(i, j)` of the strict order `i → j`.
    pub fn hasse(&self) -> Vec<(usize, usize)> {
        let n = self.classes.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j || !self.reach[i][j] {
                    continue;
                }
                let covered = (0..n).any(|k| k != i && k != j && self.reach[i][k] && self.reach[k][j]);
                if !covered {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

impl ResourceTheory {
    pub fn new(monoid: TransformationMonoid) -> Self {
        ResourceTheory { monoid }
    }

    pub fn space(&self) -> &StateSpace {
        self.monoid.space()
    }

    pub fn monoid(&self) -> &TransformationMonoid {
        &self.monoid
    }

    /// First element `f` in canonical order with `f(V) ⊆ W`.
    pub fn reaches(&self, v: &Specification, w: &Specification) -> Result<ReachWitness> {
        self.space().check_same(v.space(), "reaches source")?;
        self.space().check_same(w.space(), "reaches target")?;
        let hit = self
            .monoid
            .elements()
            .iter()
            .position(|f| f.apply_bits(v.bits()).is_subset(w.bits()));
        Ok(ReachWitness::from_index(&self.monoid, hit))
    }

    pub fn is_free(&self, v: &Specification) -> Result<bool> {
        Ok(self.reaches(&self.space().full(), v)?.found)
    }

    pub fn quotient(&self, candidates: &[Specification]) -> Result<Quotient> {
        let mut specs: Vec<Specification> = Vec::new();
        for c in candidates {
            self.space().check_same(c.space(), "quotient candidate")?;
            if !specs.contains(c) {
                specs.push(c.clone());
            }
        }
        let full = self.space().full();
        if !specs.contains(&full) {
            specs.push(full.clone());
        }
        let n = specs.len();
        let mut r = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                r[i][j] = self.reaches(&specs[i], &specs[j])?.found;
            }
        }
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for i in 0..n {
            if class_of[i] != usize::MAX {
                continue;
            }
            let c = classes.len();
            let mut members = Vec::new();
            for j in i..n {
                if class_of[j] == usize::MAX && r[i][j] && r[j][i] {
                    class_of[j] = c;
                    members.push(j);
                }
            }
            classes.push(members);
        }
        let reach = classes
            .iter()
            .map(|a| classes.iter().map(|b| r[a[0]][b[0]]).collect())
            .collect();
        let top = class_of[specs.iter().position(|s| *s == full).expect("Ω added")];
        Ok(Quotient {
            classes: classes
                .into_iter()
                .map(|c| c.into_iter().map(|i| specs[i].clone()).collect())
                .collect(),
            reach,
            top,
        })
    }

    /// Quotient of the whole specification lattice; limited to 5 states.
    pub fn quotient_all(&self) -> Result<Quotient> {
        if self.space().size() > 5 {
            return Err(Error::TooLarge(format!(
                "exhaustive quotient over {} states (limit 5)",
                self.space().size()
            )));
        }
        let all: Vec<Specification> = self.space().all_specs().collect();
        self.quotient(&all)
    }

    /// `f(V) = V` for every element.
    pub fn is_conserved(&self, v: &Specification) -> Result<bool> {
        self.space().check_same(v.space(), "is_conserved")?;
        Ok(self
            .monoid
            .elements()
            .iter()
            .all(|f| &f.apply_bits(v.bits()) == v.bits()))
    }

    /// Elements whose output ignores the input, with their constant value.
    pub fn resource_independent_maps(&self) -> Vec<(usize, Specification)> {
        let full = self.space().full();
        self.monoid
            .elements()
            .iter()
            .enumerate()
            .filter(|(_, f)| f.table().windows(2).all(|w| w[0] == w[1]))
            .map(|(i, f)| (i, f.apply(&full).expect("endomorphism")))
            .collect()
    }

    /// The theory whose monoid is `T ∩ F`, in the order of `T`.
    pub fn combine(&self, other: &ResourceTheory) -> Result<ResourceTheory> {
        self.space().check_same(other.space(), "combine_theories")?;
        let mut keep = BitSet::empty(self.monoid.len());
        for (i, f) in self.monoid.elements().iter().enumerate() {
            if other.monoid.contains(f) {
                keep.insert(i);
            }
        }
        Ok(ResourceTheory::new(self.monoid.submonoid(&keep)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn omega4() -> StateSpace {
        StateSpace::new(["a", "b", "c", "d"]).unwrap()
    }

    fn spec(s: &StateSpace, l: &[&str]) -> Specification {
        Specification::from_labels(s, l.iter().copied()).unwrap()
    }

    fn swap_ab(s: &StateSpace) -> SpecMap {
        SpecMap::endo_from_fn(s, |i| [1, 0, 2, 3][i])
    }

    fn merge_ab(s: &StateSpace) -> SpecMap {
        SpecMap::endo_from_fn(s, |i| [0, 0, 2, 3][i])
    }

    fn theory(s: &StateSpace, gens: Vec<SpecMap>) -> ResourceTheory {
        ResourceTheory::new(TransformationMonoid::close(s, gens, DEFAULT_CAP).unwrap())
    }

    #[test]
    fn closure_examples() {
        let s = omega4();
        let m = TransformationMonoid::close(&s, vec![swap_ab(&s)], 10).unwrap();
        assert_eq!(m.len(), 2);
        assert!(m.element(0).is_identity());
        assert_eq!(TransformationMonoid::close(&s, vec![], 10).unwrap().len(), 1);
        assert_eq!(TransformationMonoid::all_functions(&s, 100).unwrap_err(), Error::CapExceeded(100));
        let full = TransformationMonoid::all_functions(&s, DEFAULT_CAP).unwrap();
        assert_eq!(full.len(), 256);
        let gens: Vec<SpecMap> = full.elements().to_vec();
        assert_eq!(TransformationMonoid::close(&s, gens, 100).unwrap_err(), Error::CapExceeded(100));
        assert_eq!(TransformationMonoid::permutations(&s, DEFAULT_CAP).unwrap().len(), 24);
    }

    #[test]
    fn words_reconstruct_elements() {
        let s = omega4();
        let cyc = SpecMap::endo_from_fn(&s, |i| (i + 1) % 4);
        let m = TransformationMonoid::close(&s, vec![swap_ab(&s), cyc, merge_ab(&s)], DEFAULT_CAP).unwrap();
        for i in 0..m.len() {
            let mut f = SpecMap::identity(&s);
            for &g in m.word(i) {
                f = f.compose(&m.generators()[g]).unwrap();
            }
            assert!(f.maps_equal(m.element(i)).unwrap());
        }
    }

    #[test]
    fn reach_examples() {
        let s = omega4();
        let t = theory(&s, vec![merge_ab(&s)]);
        let w = t.reaches(&spec(&s, &["a", "b"]), &spec(&s, &["a"])).unwrap();
        assert!(w.found);
        assert!(w.map.unwrap().maps_equal(&merge_ab(&s)).unwrap());
        let v = spec(&s, &["c", "d"]);
        assert_eq!(t.reaches(&v, &v).unwrap().index, Some(0));
        let id = theory(&s, vec![]);
        assert!(!id.reaches(&spec(&s, &["a"]), &spec(&s, &["b"])).unwrap().found);
    }

    #[test]
    fn free_examples() {
        let s = omega4();
        let c = s.singleton(2);
        let t = theory(&s, vec![SpecMap::constant(&s, &c)]);
        assert!(t.is_free(&c).unwrap());
        assert!(t.is_free(&s.full()).unwrap());
        assert!(!theory(&s, vec![]).is_free(&spec(&s, &["a"])).unwrap());
    }

    #[test]
    fn quotient_examples() {
        let s = omega4();
        let t = theory(&s, vec![swap_ab(&s)]);
        let q = t
            .quotient(&[spec(&s, &["a"]), spec(&s, &["b"]), spec(&s, &["c"])])
            .unwrap();
        assert_eq!(q.classes.len(), 3);
        assert_eq!(q.classes[0], vec![spec(&s, &["a"]), spec(&s, &["b"])]);
        assert_eq!(q.classes[1], vec![spec(&s, &["c"])]);
        assert_eq!(q.classes[q.top], vec![s.full()]);
        assert!(q.reach[0][q.top]);
        let id = theory(&s, vec![]);
        let q = id.quotient(&[spec(&s, &["a"]), spec(&s, &["b"])]).unwrap();
        assert_eq!(q.classes.len(), 3);
        assert_eq!(q.hasse(), vec![(0, 2), (1, 2)]);
        assert_eq!(id.quotient_all().unwrap().classes.len(), 15);
    }

    #[test]
    fn conserved_examples() {
        let s = omega4();
        assert!(theory(&s, vec![swap_ab(&s)]).is_conserved(&spec(&s, &["a", "b"])).unwrap());
        let perms = ResourceTheory::new(TransformationMonoid::permutations(&s, DEFAULT_CAP).unwrap());
        assert!(perms.is_conserved(&s.full()).unwrap());
        assert!(!theory(&s, vec![merge_ab(&s)]).is_conserved(&spec(&s, &["a", "b"])).unwrap());
    }

    #[test]
    fn resource_independent_examples() {
        let s = omega4();
        let c = s.singleton(2);
        let t = theory(&s, vec![SpecMap::constant(&s, &c)]);
        let ri = t.resource_independent_maps();
        assert_eq!(ri.len(), 1);
        assert_eq!(ri[0].1, c);
        assert!(t.is_free(&ri[0].1).unwrap());
        assert!(theory(&s, vec![]).resource_independent_maps().is_empty());
        let full = ResourceTheory::new(TransformationMonoid::all_functions(&s, DEFAULT_CAP).unwrap());
        assert_eq!(full.resource_independent_maps().len(), 4);
    }

    #[test]
    fn combine_examples() {
        let s = StateSpace::bit_strings(2);
        let t = theory(&s, vec![SpecMap::endo_from_fn(&s, |i| i ^ 1)]);
        assert_eq!(t.combine(&t).unwrap().monoid().len(), 2);
        assert_eq!(t.combine(&theory(&s, vec![])).unwrap().monoid().len(), 1);
        let flip1 = SpecMap::endo_from_fn(&s, |i| i ^ 2);
        let set0 = SpecMap::endo_from_fn(&s, |i| i & 1);
        let set1 = SpecMap::endo_from_fn(&s, |i| i | 2);
        let bit1 = theory(&s, vec![flip1.clone(), set0, set1]);
        assert_eq!(bit1.monoid().len(), 4);
        let perms = ResourceTheory::new(TransformationMonoid::permutations(&s, DEFAULT_CAP).unwrap());
        let both = bit1.combine(&perms).unwrap();
        assert_eq!(both.monoid().len(), 2);
        assert!(both.monoid().contains(&flip1));
    }

    #[test]
    fn preorder_on_small_theory() {
        let s = omega4();
        let blur = SpecMap::from_table(
            &s,
            &s,
            vec![spec(&s, &["a", "b"]), spec(&s, &["a", "b"]), s.singleton(2), s.singleton(3)],
        )
        .unwrap();
        let t = theory(&s, vec![blur, SpecMap::endo_from_fn(&s, |i| [2, 3, 2, 0][i])]);
        let all: Vec<Specification> = s.all_specs().collect();
        for u in &all {
            assert!(t.reaches(u, u).unwrap().found);
            for v in &all {
                if u.is_subset(v) {
                    assert!(t.reaches(u, v).unwrap().found);
                }
                for w in &all {
                    if t.reaches(u, v).unwrap().found && t.reaches(v, w).unwrap().found {
                        assert!(t.reaches(u, w).unwrap().found);
                    }
                }
            }
        }
    }
}
