//! Approximation structures: poset-indexed families of inflating
//! endomorphisms `W ↦ W^ε`, with triangle inequalities, robustness and
//! reduction through Galois insertions.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::BitSet;
use crate::embed::{self, GaloisInsertion};
use crate::error::{Error, Result};
use crate::report::Report;
use crate::spec::{SpecMap, Specification, StateSpace};
use crate::theory::ResourceTheory;

/// A chain of the index poset carrying a commutative addition. Sums missing
/// from the table clamp to the top element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub members: Vec<usize>,
    add: HashMap<(usize, usize), usize>,
}

impl Chain {
    pub fn sum(&self, a: usize, b: usize, top: usize) -> usize {
        *self.add.get(&(a.min(b), a.max(b))).unwrap_or(&top)
    }
}

/// The finite poset `(𝓔, ≤)` with its top, optional zero and chains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxIndex {
    labels: Vec<String>,
    /// `up[i]` holds every `j` with `i ≤ j`.
    up: Vec<BitSet>,
    max: usize,
    zero: Option<usize>,
    chains: Vec<Chain>,
}

impl ApproxIndex {
    /// Builds the order generated by `le` pairs (reflexive-transitive
    /// closure) and checks antisymmetry, the top and every chain.
    pub fn new<S: AsRef<str>>(
        labels: &[S],
        le: &[(S, S)],
        max: &str,
        zero: Option<&str>,
        chains: &[(Vec<S>, Vec<(S, S, S)>)],
    ) -> Result<Self> {
        let labels: Vec<String> = labels.iter().map(|l| l.as_ref().to_string()).collect();
        if labels.is_empty() {
            return Err(Error::InvalidIndex("no index elements".into()));
        }
        let n = labels.len();
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::DuplicateName(l.clone()));
            }
        }
        let find = |l: &str| labels.iter().position(|x| x == l).ok_or_else(|| Error::UnknownIndex(l.to_string()));
        let mut up: Vec<BitSet> = (0..n).map(|i| BitSet::singleton(n, i)).collect();
        for (a, b) in le {
            let (a, b) = (find(a.as_ref())?, find(b.as_ref())?);
            up[a].insert(b);
        }
        // Warshall closure.
        for k in 0..n {
            for i in 0..n {
                if up[i].contains(k) {
                    let via = up[k].clone();
                    up[i].union_with(&via);
                }
            }
        }
        for i in 0..n {
            for j in up[i].iter() {
                if j != i && up[j].contains(i) {
                    return Err(Error::InvalidIndex(format!("{} and {} are mutually below", labels[i], labels[j])));
                }
            }
        }
        let max = find(max)?;
        if let Some(i) = (0..n).find(|&i| !up[i].contains(max)) {
            return Err(Error::InvalidIndex(format!("{} is not below the top {}", labels[i], labels[max])));
        }
        let zero = zero.map(find).transpose()?;
        let mut out = Vec::new();
        for (members, table) in chains {
            let members: Vec<usize> = members.iter().map(|m| find(m.as_ref())).collect::<Result<_>>()?;
            for &a in &members {
                for &b in &members {
                    if !up[a].contains(b) && !up[b].contains(a) {
                        return Err(Error::InvalidIndex(format!(
                            "{} and {} are incomparable in a chain",
                            labels[a], labels[b]
                        )));
                    }
                }
            }
            let mut add = HashMap::new();
            for (a, b, c) in table {
                let (a, b, c) = (find(a.as_ref())?, find(b.as_ref())?, find(c.as_ref())?);
                if [a, b, c].iter().any(|x| !members.contains(x)) {
                    return Err(Error::InvalidIndex(format!(
                        "{} + {} = {} leaves its chain",
                        labels[a], labels[b], labels[c]
                    )));
                }
                if let Some(&prev) = add.get(&(a.min(b), a.max(b))) {
                    if prev != c {
                        return Err(Error::InvalidIndex(format!(
                            "{} + {} is not commutative",
                            labels[a], labels[b]
                        )));
                    }
                }
                add.insert((a.min(b), a.max(b)), c);
            }
            out.push(Chain { members, add });
        }
        Ok(ApproxIndex {
            labels,
            up,
            max,
            zero,
            chains: out,
        })
    }

    /// `0 < 1 < … < top` labelled by numerals, one chain with addition
    /// saturating at `top`; `zero` declares `0` as the zero element.
    pub fn integers(top: usize, zero: bool) -> Self {
        let labels: Vec<String> = (0..=top).map(|i| i.to_string()).collect();
        let le: Vec<(String, String)> = (0..top).map(|i| (labels[i].clone(), labels[i + 1].clone())).collect();
        let mut table = Vec::new();
        for a in 0..=top {
            for b in a..=top {
                table.push((labels[a].clone(), labels[b].clone(), labels[(a + b).min(top)].clone()));
            }
        }
        let top_label = labels[top].clone();
        ApproxIndex::new(
            &labels,
            &le,
            &top_label,
            zero.then_some("0"),
            &[(labels.clone(), table)],
        )
        .expect("integer chain is a valid index")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownIndex(label.to_string()))
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    pub fn max(&self) -> usize {
        self.max
    }

    pub fn zero(&self) -> Option<usize> {
        self.zero
    }

    pub fn chains(&self) -> &[Chain] {
        &self.chains
    }
}

/// A family `{·^ε}` of endomorphisms on one space, one per index element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproximationStructure {
    index: ApproxIndex,
    family: Vec<SpecMap>,
}

impl ApproximationStructure {
    /// Pairs an index with its maps. The structure laws are not enforced
    /// here; see [`verify_structure`].
    pub fn new(index: ApproxIndex, family: Vec<SpecMap>) -> Result<Self> {
        if family.len() != index.len() {
            return Err(Error::InvalidIndex(format!(
                "{} maps for {} index elements",
                family.len(),
                index.len()
            )));
        }
        let space = family[0].source().clone();
        for f in &family {
            if !f.is_endomorphism() {
                return Err(Error::NotEndomorphism);
            }
            f.source().check_same(&space, "approximation family")?;
        }
        Ok(ApproximationStructure { index, family })
    }

    /// Hamming balls `ω^r = {ω' : d(ω, ω') ≤ r}` on `width`-bit strings,
    /// indexed by `0..=width`.
    pub fn hamming(width: usize) -> Self {
        let space = StateSpace::bit_strings(width);
        let n = space.size();
        let family = (0..=width)
            .map(|r| {
                let table = (0..n)
                    .map(|i| BitSet::from_indices(n, (0..n).filter(|&j| ((i ^ j) as u64).count_ones() as usize <= r)))
                    .collect();
                SpecMap::from_bits(&space, &space, table).expect("balls are nonempty")
            })
            .collect();
        ApproximationStructure {
            index: ApproxIndex::integers(width, true),
            family,
        }
    }

    pub fn space(&self) -> &StateSpace {
        self.family[0].source()
    }

    pub fn index(&self) -> &ApproxIndex {
        &self.index
    }

    pub fn family(&self) -> &[SpecMap] {
        &self.family
    }

    pub fn map(&self, eps: usize) -> &SpecMap {
        &self.family[eps]
    }

    /// A zero is declared and acts as the identity.
    pub fn is_attainable(&self) -> bool {
        self.index.zero.is_some_and(|z| self.family[z].is_identity())
    }

    /// `V^ε`.
    pub fn approximate(&self, v: &Specification, eps: &str) -> Result<Specification> {
        let k = self.index.position(eps)?;
        self.family[k].apply(v)
    }
}

/// Inflating, monotone and saturating laws, plus `W^0 = W` when a zero is
/// declared. Whether the structure is attainable is recorded as a note.
pub fn verify_structure(s: &ApproximationStructure) -> Report {
    let n = s.space().size();
    let idx = &s.index;
    let mut r = Report::new();
    let inflating = (0..idx.len()).find_map(|e| {
        (0..n)
            .find(|&w| !s.family[e].image_bits(w).contains(w))
            .map(|w| format!("{} ∉ {{{}}}^{}", s.space().label(w), s.space().label(w), idx.label(e)))
    });
    r.push("inflating", inflating);
    let mut monotone = None;
    'm: for a in 0..idx.len() {
        for b in idx.up[a].iter() {
            for w in 0..n {
                if !s.family[a].image_bits(w).is_subset(s.family[b].image_bits(w)) {
                    monotone = Some(format!(
                        "{{{w}}}^{} ⊄ {{{w}}}^{}",
                        idx.label(a),
                        idx.label(b),
                        w = s.space().label(w)
                    ));
                    break 'm;
                }
            }
        }
    }
    r.push("monotone", monotone);
    let saturating = (0..n)
        .find(|&w| !s.family[idx.max].image_bits(w).is_full())
        .map(|w| format!("{{{}}}^{} = {}", s.space().label(w), idx.label(idx.max), s.family[idx.max].image(w)));
    r.push("saturating", saturating);
    if let Some(z) = idx.zero {
        let zero = (0..n)
            .find(|&w| s.family[z].image_bits(w).count() != 1)
            .map(|w| format!("{{{}}}^{} = {}", s.space().label(w), idx.label(z), s.family[z].image(w)));
        r.push("zero is identity", zero);
    }
    r.note(if s.is_attainable() { "attainable" } else { "not attainable" });
    r
}

const TRIANGLE_SAMPLES: usize = 2000;

/// `(W^ε)^{ε′} ⊆ W^{ε+ε′}` on every declared chain, checked on singletons,
/// and the consequence "V ⊆ W^ε, Ṽ ⊆ V^{ε′} ⇒ Ṽ ⊆ W^{ε+ε′}" on seeded
/// random triples.
pub fn check_triangle(s: &ApproximationStructure, seed: u64) -> Result<Report> {
    let idx = &s.index;
    if idx.chains.is_empty() {
        return Err(Error::NoChainsDeclared);
    }
    let space = s.space();
    let n = space.size();
    let mut r = Report::new();
    let mut ineq = None;
    'c: for chain in &idx.chains {
        for &a in &chain.members {
            for &b in &chain.members {
                let c = chain.sum(a, b, idx.max);
                for w in 0..n {
                    let twice = s.family[b].apply_bits(s.family[a].image_bits(w));
                    if !twice.is_subset(s.family[c].image_bits(w)) {
                        ineq = Some(format!(
                            "({{{}}}^{})^{} = {} ⊄ {}",
                            space.label(w),
                            idx.label(a),
                            idx.label(b),
                            Specification::from_bits(space, twice)?,
                            s.family[c].image(w)
                        ));
                        break 'c;
                    }
                }
            }
        }
    }
    r.push("triangle inequality", ineq);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chained = None;
    for _ in 0..TRIANGLE_SAMPLES {
        let chain = &idx.chains[rng.gen_range(0..idx.chains.len())];
        let a = chain.members[rng.gen_range(0..chain.members.len())];
        let b = chain.members[rng.gen_range(0..chain.members.len())];
        let w = embed::random_nonempty(&mut rng, n);
        let wa = s.family[a].apply_bits(&w);
        let v = random_subset(&mut rng, &wa);
        let vb = s.family[b].apply_bits(&v);
        let vt = random_subset(&mut rng, &vb);
        let target = s.family[chain.sum(a, b, idx.max)].apply_bits(&w);
        if !vt.is_subset(&target) {
            chained = Some(format!(
                "W = {}, V = {}, Ṽ = {} with ε = {}, ε′ = {}",
                Specification::from_bits(space, w)?,
                Specification::from_bits(space, v)?,
                Specification::from_bits(space, vt)?,
                idx.label(a),
                idx.label(b)
            ));
            break;
        }
    }
    r.push("chained approximations", chained);
    r.note(format!("chained approximations sampled {TRIANGLE_SAMPLES} times (seed {seed:#x})"));
    Ok(r)
}

/// A nonempty subset of the nonempty `of`.
fn random_subset(rng: &mut ChaCha8Rng, of: &BitSet) -> BitSet {
    let members: Vec<usize> = of.iter().collect();
    loop {
        let pick = BitSet::from_indices(of.universe(), members.iter().copied().filter(|_| rng.gen_bool(0.5)));
        if !pick.is_empty() {
            return pick;
        }
    }
}

/// The neighbourhoods `{ω}^ε` of all states, without repeats, ordered by
/// size and then members.
pub fn approximation_space(s: &ApproximationStructure) -> Vec<Specification> {
    let n = s.space().size();
    let mut sets: Vec<BitSet> = Vec::new();
    for f in &s.family {
        for w in 0..n {
            let b = f.image_bits(w);
            if !sets.contains(b) {
                sets.push(b.clone());
            }
        }
    }
    sets.sort_by(|a, b| a.count().cmp(&b.count()).then_with(|| a.iter().cmp(b.iter())));
    sets.into_iter()
        .map(|b| Specification::from_bits(s.space(), b).expect("neighbourhoods are nonempty"))
        .collect()
}

/// First `(f, ε, ω)` with `f({ω}^ε) ⊄ f({ω})^ε`, if any.
pub fn stability_violation(t: &ResourceTheory, s: &ApproximationStructure) -> Result<Option<String>> {
    t.space().check_same(s.space(), "theory and approximation structure")?;
    let n = s.space().size();
    let m = t.monoid();
    for (i, f) in m.elements().iter().enumerate() {
        for (e, a) in s.family.iter().enumerate() {
            for w in 0..n {
                let lhs = f.apply_bits(a.image_bits(w));
                let rhs = a.apply_bits(f.image_bits(w));
                if !lhs.is_subset(&rhs) {
                    return Ok(Some(format!(
                        "element {i} at {} with ε = {}: {} ⊄ {}",
                        s.space().label(w),
                        s.index.label(e),
                        Specification::from_bits(s.space(), lhs)?,
                        Specification::from_bits(s.space(), rhs)?
                    )));
                }
            }
        }
    }
    Ok(None)
}

pub fn is_stable(t: &ResourceTheory, s: &ApproximationStructure) -> Result<bool> {
    Ok(stability_violation(t, s)?.is_none())
}

/// `V` is ε-robust when `V^ε` is not free.
pub fn is_robust(t: &ResourceTheory, s: &ApproximationStructure, v: &Specification, eps: &str) -> Result<bool> {
    t.space().check_same(s.space(), "theory and approximation structure")?;
    Ok(!t.is_free(&s.approximate(v, eps)?)?)
}

/// A structure carried to the small space of an insertion.
#[derive(Clone, Debug)]
pub struct Reduced {
    pub structure: ApproximationStructure,
    /// Index pairs with distinct maps upstairs and equal maps downstairs.
    pub collapsed: Vec<(String, String)>,
    pub report: Report,
}

/// `W^ε := h((e(W))^ε)` on the small space of `ins`.
pub fn reduce_structure(s: &ApproximationStructure, ins: &GaloisInsertion) -> Result<Reduced> {
    ins.big().check_same(s.space(), "insertion and approximation structure")?;
    let family: Vec<SpecMap> = s
        .family
        .iter()
        .map(|f| ins.h().compose_unchecked(&f.compose_unchecked(ins.e())))
        .collect();
    let structure = ApproximationStructure {
        index: s.index.clone(),
        family,
    };
    let k = s.index.len();
    let mut collapsed = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            if s.family[a] != s.family[b] && structure.family[a] == structure.family[b] {
                collapsed.push((s.index.label(a).to_string(), s.index.label(b).to_string()));
            }
        }
    }
    let mut report = verify_structure(&structure);
    if s.is_attainable() && !structure.is_attainable() {
        report.fail("attainability kept", "zero no longer acts as the identity");
    }
    for (a, b) in &collapsed {
        report.note(format!("·^{a} and ·^{b} coincide after reduction"));
    }
    Ok(Reduced {
        structure,
        collapsed,
        report,
    })
}

/// `h∘·^ε = h∘·^ε∘Λ` for every ε, with `Λ = e∘h`.
pub fn preserves_structure(s: &ApproximationStructure, ins: &GaloisInsertion) -> Result<bool> {
    ins.big().check_same(s.space(), "insertion and approximation structure")?;
    let lump = ins.lumping();
    Ok(s.family.iter().all(|f| {
        let hf = ins.h().compose_unchecked(f);
        hf == hf.compose_unchecked(lump.map())
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::Lumping;
    use crate::theory::TransformationMonoid;

    fn spec(s: &StateSpace, l: &[&str]) -> Specification {
        Specification::from_labels(s, l.iter().copied()).unwrap()
    }

    #[test]
    fn hamming_structure() {
        let h = ApproximationStructure::hamming(2);
        let r = verify_structure(&h);
        assert!(r.ok(), "{r}");
        assert!(h.is_attainable());
        let s = h.space().clone();
        assert_eq!(h.approximate(&spec(&s, &["00"]), "1").unwrap(), spec(&s, &["00", "01", "10"]));
        assert!(h.approximate(&spec(&s, &["01"]), "2").unwrap().is_full());
        assert_eq!(h.approximate(&spec(&s, &["01", "10"]), "0").unwrap(), spec(&s, &["01", "10"]));
        assert_eq!(h.approximate(&spec(&s, &["00"]), "7"), Err(Error::UnknownIndex("7".into())));
        assert!(check_triangle(&h, 1).unwrap().ok());
        let sp = approximation_space(&h);
        assert_eq!(sp.len(), 9);
        assert_eq!(sp.iter().filter(|v| v.len() == 1).count(), 4);
        assert_eq!(sp.iter().filter(|v| v.len() == 3).count(), 4);
        assert!(sp[8].is_full());
    }

    #[test]
    fn structure_failures() {
        let s = StateSpace::new(["a", "b"]).unwrap();
        let idx = ApproxIndex::integers(1, true);
        let flat = ApproximationStructure::new(idx, vec![SpecMap::identity(&s), SpecMap::identity(&s)]).unwrap();
        let r = verify_structure(&flat);
        assert!(!r.get("saturating").unwrap().ok);
        assert!(r.get("inflating").unwrap().ok);

        let one = ApproxIndex::new(&["top"], &[], "top", None, &[]).unwrap();
        let total = ApproximationStructure::new(one, vec![SpecMap::constant(&s, &s.full())]).unwrap();
        let r = verify_structure(&total);
        assert!(r.ok());
        assert!(!total.is_attainable());
        assert_eq!(approximation_space(&total), vec![s.full()]);
        assert_eq!(check_triangle(&total, 0).unwrap_err(), Error::NoChainsDeclared);

        let only = ApproxIndex::new(&["0", "1"], &[("0", "1")], "1", Some("0"), &[]).unwrap();
        let id = ApproximationStructure::new(only, vec![SpecMap::identity(&s), SpecMap::constant(&s, &s.full())])
            .unwrap();
        assert_eq!(approximation_space(&id), vec![spec(&s, &["a"]), spec(&s, &["b"]), s.full()]);
    }

    #[test]
    fn triangle_counterexample() {
        // Path a - b - c with ·^1 the radius-one ball but ·^2 no larger.
        let s = StateSpace::new(["a", "b", "c"]).unwrap();
        let ball = |sets: [&[&str]; 3]| SpecMap::from_table(&s, &s, sets.iter().map(|l| spec(&s, l)).collect()).unwrap();
        let zero = SpecMap::identity(&s);
        let one = ball([&["a", "b"], &["a", "b", "c"], &["b", "c"]]);
        let two = one.clone();
        let three = SpecMap::constant(&s, &s.full());
        let idx = ApproxIndex::new(
            &["0", "1", "2", "3"],
            &[("0", "1"), ("1", "2"), ("2", "3")],
            "3",
            Some("0"),
            &[(vec!["0", "1", "2"], vec![("0", "0", "0"), ("0", "1", "1"), ("0", "2", "2"), ("1", "1", "2")])],
        )
        .unwrap();
        let st = ApproximationStructure::new(idx, vec![zero, one, two, three]).unwrap();
        assert!(verify_structure(&st).ok());
        let r = check_triangle(&st, 3).unwrap();
        let c = r.get("triangle inequality").unwrap();
        assert!(!c.ok);
        assert!(c.witness.as_ref().unwrap().contains("^1)^1"));

        let single = ApproxIndex::new(&["0"], &[], "0", Some("0"), &[(vec!["0"], vec![("0", "0", "0")])]).unwrap();
        let one_point = StateSpace::new(["x"]).unwrap();
        let st = ApproximationStructure::new(single, vec![SpecMap::identity(&one_point)]).unwrap();
        assert!(check_triangle(&st, 0).unwrap().ok());
    }

    #[test]
    fn index_validation() {
        let cyc = ApproxIndex::new(&["a", "b"], &[("a", "b"), ("b", "a")], "b", None, &[]);
        assert!(matches!(cyc, Err(Error::InvalidIndex(_))));
        let no_top = ApproxIndex::new(&["a", "b"], &[], "b", None, &[]);
        assert!(matches!(no_top, Err(Error::InvalidIndex(_))));
        let anti = ApproxIndex::new(
            &["0", "a", "b", "t"],
            &[("0", "a"), ("0", "b"), ("a", "t"), ("b", "t")],
            "t",
            None,
            &[(vec!["a", "b"], vec![])],
        );
        assert!(matches!(anti, Err(Error::InvalidIndex(_))));
        let noncomm = ApproxIndex::new(
            &["0", "1"],
            &[("0", "1")],
            "1",
            None,
            &[(vec!["0", "1"], vec![("0", "1", "1"), ("1", "0", "0")])],
        );
        assert!(matches!(noncomm, Err(Error::InvalidIndex(_))));
        let leaves = ApproxIndex::new(
            &["0", "1", "2"],
            &[("0", "1"), ("1", "2")],
            "2",
            None,
            &[(vec!["0", "1"], vec![("1", "1", "2")])],
        );
        assert!(matches!(leaves, Err(Error::InvalidIndex(_))));
        let idx = ApproxIndex::integers(3, false);
        assert!(idx.le(0, 3) && !idx.le(2, 1));
        assert_eq!(idx.chains()[0].sum(2, 3, idx.max()), 3);
    }

    #[test]
    fn stability_and_robustness() {
        let h = ApproximationStructure::hamming(2);
        let s = h.space().clone();
        let id = ResourceTheory::new(TransformationMonoid::close(&s, vec![], 1).unwrap());
        assert!(is_stable(&id, &h).unwrap());
        let v = spec(&s, &["00"]);
        assert!(is_robust(&id, &h, &v, "1").unwrap());
        assert!(!is_robust(&id, &h, &v, "2").unwrap());
        let into_ball = SpecMap::constant(&s, &spec(&s, &["01"]));
        let t = ResourceTheory::new(TransformationMonoid::close(&s, vec![into_ball], 10).unwrap());
        assert!(!is_robust(&t, &h, &v, "1").unwrap());

        // Bit flips and the coordinate exchange are Hamming isometries.
        let flip = SpecMap::endo_from_fn(&s, |i| i ^ 1);
        let swap = SpecMap::endo_from_fn(&s, |i| ((i & 1) << 1) | (i >> 1));
        let iso = ResourceTheory::new(TransformationMonoid::close(&s, vec![flip, swap], 100).unwrap());
        assert!(is_stable(&iso, &h).unwrap());

        let abc = StateSpace::new(["a", "b", "c"]).unwrap();
        let balls = ApproximationStructure::new(
            ApproxIndex::integers(1, true),
            vec![
                SpecMap::identity(&abc),
                SpecMap::from_table(
                    &abc,
                    &abc,
                    vec![spec(&abc, &["a"]), spec(&abc, &["b", "c"]), spec(&abc, &["c"])],
                )
                .unwrap(),
            ],
        )
        .unwrap();
        // ·^1 is not saturating here; stability does not need it. Merging b
        // into a sends b's ball {b,c} outside a's ball {a}.
        let merge = SpecMap::endo_from_fn(&abc, |i| if i == 1 { 0 } else { i });
        let t = ResourceTheory::new(TransformationMonoid::close(&abc, vec![merge], 10).unwrap());
        let w = stability_violation(&t, &balls).unwrap().unwrap();
        assert!(w.contains("⊄"), "{w}");

        let other = ResourceTheory::new(TransformationMonoid::close(&abc, vec![], 1).unwrap());
        assert!(matches!(is_stable(&other, &h), Err(Error::SpaceMismatch(_))));
    }

    #[test]
    fn reduction() {
        let h = ApproximationStructure::hamming(2);
        let s = h.space().clone();
        let first_bit = Lumping::from_partition(&s, |i| i >> 1);
        let ins = GaloisInsertion::from_lumping(&first_bit).unwrap();
        let red = reduce_structure(&h, &ins).unwrap();
        assert!(red.report.ok(), "{}", red.report);
        let small = ins.small().clone();
        assert_eq!(small.labels(), ["00+01", "10+11"]);
        assert!(red.structure.approximate(&small.singleton(0), "1").unwrap().is_full());
        assert_eq!(red.collapsed, vec![("1".to_string(), "2".to_string())]);
        assert!(red.structure.is_attainable());
        assert!(preserves_structure(&h, &ins).unwrap());
        assert!(check_triangle(&red.structure, 0).unwrap().ok());

        let same = reduce_structure(&h, &GaloisInsertion::identity(&s)).unwrap();
        assert_eq!(same.structure, h);
        assert!(same.collapsed.is_empty());
    }

    #[test]
    fn intersection_corollary() {
        let h = ApproximationStructure::hamming(2);
        let s = h.space().clone();
        let specs: Vec<Specification> = s.all_specs().collect();
        for v in &specs {
            for w in specs.iter().filter(|w| v.is_compatible(w)) {
                let vw = v.combine(w).unwrap();
                for e in h.index().labels() {
                    let lhs = h.approximate(&vw, e).unwrap();
                    let rhs = h.approximate(v, e).unwrap().combine(&h.approximate(w, e).unwrap()).unwrap();
                    assert!(lhs.is_subset(&rhs));
                }
            }
        }
    }
}
