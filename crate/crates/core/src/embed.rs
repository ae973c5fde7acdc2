//! Lumpings, Galois insertions and specification embeddings.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::report::Report;
use crate::spec::{SpecMap, Specification, StateSpace};
use crate::theory::{ResourceTheory, TransformationMonoid};

/// Seed used by sampled checks when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x7274_6b00;
/// Number of sampled `(V, Z)` pairs for large adjunction checks.
pub const SAMPLED_PAIRS: usize = 10_000;
const EXHAUSTIVE_SMALL: usize = 5;
const EXHAUSTIVE_BIG: usize = 12;

/// Checks the two lumping axioms: inflating and idempotent.
pub fn verify_lumping(f: &SpecMap) -> Result<Report> {
    if !f.is_endomorphism() {
        return Err(Error::NotEndomorphism);
    }
    let s = f.source();
    let mut r = Report::new();
    let bad = (0..s.size()).find(|&i| !f.image_bits(i).contains(i));
    r.push("inflating", bad.map(|i| format!("{} ∉ {}", s.label(i), f.image(i))));
    let ff = f.compose_unchecked(f);
    let bad = (0..s.size()).find(|&i| ff.image_bits(i) != f.image_bits(i));
    r.push(
        "idempotent",
        bad.map(|i| format!("state {}: {} vs {}", s.label(i), ff.image(i), f.image(i))),
    );
    Ok(r)
}

/// An idempotent inflating endomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lumping {
    map: SpecMap,
}

impl Lumping {
    pub fn new(map: SpecMap) -> Result<Self> {
        let r = verify_lumping(&map)?;
        if let Some(c) = r.first_failure() {
            return Err(Error::NotLumping(format!(
                "{}: {}",
                c.name,
                c.witness.clone().unwrap_or_default()
            )));
        }
        Ok(Lumping { map })
    }

    pub fn identity(space: &StateSpace) -> Self {
        Lumping {
            map: SpecMap::identity(space),
        }
    }

    /// The lumping that forgets everything.
    pub fn total(space: &StateSpace) -> Self {
        Lumping {
            map: SpecMap::constant(space, &space.full()),
        }
    }

    /// The lumping whose classes are the fibres of `class_of`.
    pub fn from_partition(space: &StateSpace, class_of: impl Fn(usize) -> usize) -> Self {
        let n = space.size();
        let keys: Vec<usize> = (0..n).map(&class_of).collect();
        let table = (0..n)
            .map(|i| BitSet::from_indices(n, (0..n).filter(|&j| keys[j] == keys[i])))
            .collect();
        Lumping {
            map: SpecMap::from_bits(space, space, table).expect("classes are nonempty"),
        }
    }

    pub fn map(&self) -> &SpecMap {
        &self.map
    }

    pub fn space(&self) -> &StateSpace {
        self.map.source()
    }

    pub fn apply(&self, v: &Specification) -> Result<Specification> {
        self.map.apply(v)
    }

    /// `Λ(V) = V`.
    pub fn is_local(&self, v: &Specification) -> Result<bool> {
        Ok(&self.map.apply(v)? == v)
    }

    /// Pointwise containment `Λ_self(ω) ⊆ Λ_other(ω)`.
    pub fn is_finer_than(&self, other: &Lumping) -> bool {
        self.space() == other.space()
            && self
                .map
                .table()
                .iter()
                .zip(other.map.table())
                .all(|(a, b)| a.is_subset(b))
    }
}

/// A lumping generated by a family of homomorphisms, with the number of
/// extra squaring rounds needed to reach idempotence.
#[derive(Clone, Debug)]
pub struct GeneratedLumping {
    pub lumping: Lumping,
    pub iterations: usize,
}

/// `Λ_F(ω) = ⋃_{f∈F} {ω' : f(ω') ⊆ f(ω)}`, extended element-wise and
/// iterated until idempotent.
pub fn lumping_from_maps(space: &StateSpace, maps: &[SpecMap]) -> Result<GeneratedLumping> {
    for f in maps {
        space.check_same(f.source(), "lumping_from_maps")?;
    }
    let n = space.size();
    let mut table: Vec<BitSet> = (0..n).map(|i| BitSet::singleton(n, i)).collect();
    for f in maps {
        for (i, row) in table.iter_mut().enumerate() {
            let fi = f.image_bits(i);
            for j in 0..n {
                if f.image_bits(j).is_subset(fi) {
                    row.insert(j);
                }
            }
        }
    }
    let mut map = SpecMap::from_bits(space, space, table).expect("rows contain their state");
    let mut iterations = 0;
    loop {
        let sq = map.compose_unchecked(&map);
        if sq.table() == map.table() {
            break;
        }
        map = sq;
        iterations += 1;
    }
    Ok(GeneratedLumping {
        lumping: Lumping::new(map)?,
        iterations,
    })
}

/// An adjoint pair `(e, h)` with `h ∘ e = 1` embedding `S^small` in `S^big`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisInsertion {
    e: SpecMap,
    h: SpecMap,
}

impl GaloisInsertion {
    /// Pairs two maps without verifying the insertion laws.
    pub fn new(e: SpecMap, h: SpecMap) -> Result<Self> {
        e.source().check_same(h.target(), "insertion small space")?;
        e.target().check_same(h.source(), "insertion big space")?;
        Ok(GaloisInsertion { e, h })
    }

    pub fn identity(space: &StateSpace) -> Self {
        GaloisInsertion {
            e: SpecMap::identity(space),
            h: SpecMap::identity(space),
        }
    }

    /// The reduced space of a lumping: one state per class `Λ({ω})`,
    /// labelled by its members joined with `+`.
    pub fn from_lumping(l: &Lumping) -> Result<Self> {
        let big = l.space();
        let n = big.size();
        let mut classes: Vec<BitSet> = Vec::new();
        let mut class_of = vec![0usize; n];
        for (i, c) in class_of.iter_mut().enumerate() {
            let img = l.map().image_bits(i);
            *c = match classes.iter().position(|k| k == img) {
                Some(k) => k,
                None => {
                    if let Some(k) = classes.iter().find(|k| k.intersects(img)) {
                        return Err(Error::OverlappingImages(format!(
                            "lumping classes {} and {} overlap without coinciding",
                            Specification::from_bits(big, k.clone())?,
                            l.map().image(i)
                        )));
                    }
                    classes.push(img.clone());
                    classes.len() - 1
                }
            };
        }
        let labels: Vec<String> = classes
            .iter()
            .map(|c| c.iter().map(|i| big.label(i)).collect::<Vec<_>>().join("+"))
            .collect();
        let small = StateSpace::new(&labels)?;
        let e = SpecMap::from_bits(&small, big, classes).expect("nonempty classes");
        let h = SpecMap::from_fn(big, &small, |i| class_of[i]);
        Ok(GaloisInsertion { e, h })
    }

    /// The insertion whose adjoint sends each big state to the unique small
    /// state whose image contains it. Requires images that partition `big`.
    pub fn from_embedding(e: &SpecMap) -> Result<Self> {
        let h = partition_adjoint(e)?;
        Ok(GaloisInsertion { e: e.clone(), h })
    }

    pub fn small(&self) -> &StateSpace {
        self.e.source()
    }

    pub fn big(&self) -> &StateSpace {
        self.e.target()
    }

    pub fn e(&self) -> &SpecMap {
        &self.e
    }

    pub fn h(&self) -> &SpecMap {
        &self.h
    }

    /// `Λ = e ∘ h` on the big space.
    pub fn lumping(&self) -> Lumping {
        Lumping {
            map: self.e.compose_unchecked(&self.h),
        }
    }

    /// Checks `h∘e = 1`, the adjunction `h(Z) ⊆ V ⇔ Z ⊆ e(V)`, that `e` is an
    /// order embedding and that `h` is single-valued on states.
    pub fn verify(&self, seed: u64) -> Report {
        let mut r = Report::new();
        let small = self.small();
        let big = self.big();
        let he = self.h.compose_unchecked(&self.e);
        let bad = (0..small.size()).find(|&i| !(he.image_bits(i).count() == 1 && he.image_bits(i).contains(i)));
        r.push("h∘e = 1", bad.map(|i| format!("h(e({})) = {}", small.label(i), he.image(i))));

        let adj = |v: &BitSet, z: &BitSet| -> Option<String> {
            let lhs = self.h.apply_bits(z).is_subset(v);
            let rhs = z.is_subset(&self.e.apply_bits(v));
            (lhs != rhs).then(|| {
                format!(
                    "V={} Z={}: h(Z)⊆V is {lhs}, Z⊆e(V) is {rhs}",
                    Specification::from_bits(small, v.clone()).expect("nonempty"),
                    Specification::from_bits(big, z.clone()).expect("nonempty")
                )
            })
        };
        let mut witness = None;
        if small.size() <= EXHAUSTIVE_SMALL && big.size() <= EXHAUSTIVE_BIG {
            'outer: for v in small.all_specs() {
                for z in big.all_specs() {
                    if let Some(w) = adj(v.bits(), z.bits()) {
                        witness = Some(w);
                        break 'outer;
                    }
                }
            }
            r.push("adjunction", witness);
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..SAMPLED_PAIRS {
                let v = random_nonempty(&mut rng, small.size());
                let z = random_nonempty(&mut rng, big.size());
                if let Some(w) = adj(&v, &z) {
                    witness = Some(w);
                    break;
                }
            }
            r.push("adjunction", witness);
            r.note(format!("adjunction sampled on {SAMPLED_PAIRS} pairs, seed {seed}"));
        }
        r.push("e order embedding", order_embedding_violation(&self.e));
        let bad = (0..big.size()).find(|&i| self.h.image_bits(i).count() != 1);
        r.push("|h(σ)| = 1", bad.map(|i| format!("h({}) = {}", big.label(i), self.h.image(i))));
        r
    }
}

pub(crate) fn random_nonempty(rng: &mut ChaCha8Rng, n: usize) -> BitSet {
    loop {
        let b = BitSet::from_indices(n, (0..n).filter(|_| rng.gen_bool(0.5)));
        if !b.is_empty() {
            return b;
        }
    }
}

/// First state whose image is covered by the images of the others.
pub fn order_embedding_violation(e: &SpecMap) -> Option<String> {
    let n = e.source().size();
    (0..n).find_map(|i| {
        let mut rest = BitSet::empty(e.target().size());
        for j in (0..n).filter(|&j| j != i) {
            rest.union_with(e.image_bits(j));
        }
        e.image_bits(i).is_subset(&rest).then(|| {
            format!(
                "e({}) = {} is covered by the other images",
                e.source().label(i),
                e.image(i)
            )
        })
    })
}

fn partition_adjoint(e: &SpecMap) -> Result<SpecMap> {
    let big = e.target();
    let mut owner = vec![None; big.size()];
    for i in 0..e.source().size() {
        for s in e.image_bits(i).iter() {
            if let Some(j) = owner[s] {
                return Err(Error::NotIntensive(format!(
                    "{} lies in the images of {} and {}",
                    big.label(s),
                    e.source().label(j),
                    e.source().label(i)
                )));
            }
            owner[s] = Some(i);
        }
    }
    if let Some(s) = owner.iter().position(Option::is_none) {
        return Err(Error::NotIntensive(format!("{} lies in no image", big.label(s))));
    }
    Ok(SpecMap::from_fn(big, e.source(), |s| owner[s].expect("checked")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmbeddingKind {
    Extensive,
    Intensive,
    General,
}

impl std::fmt::Display for EmbeddingKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EmbeddingKind::Extensive => "extensive",
            EmbeddingKind::Intensive => "intensive",
            EmbeddingKind::General => "general",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Embedding {
    pub e: SpecMap,
    pub extensive: bool,
    /// Present exactly when the embedding is intensive.
    pub adjoint: Option<SpecMap>,
}

impl Embedding {
    /// Extensive takes precedence for maps that are both (bijections).
    pub fn kind(&self) -> EmbeddingKind {
        if self.extensive {
            EmbeddingKind::Extensive
        } else if self.adjoint.is_some() {
            EmbeddingKind::Intensive
        } else {
            EmbeddingKind::General
        }
    }

    pub fn is_intensive(&self) -> bool {
        self.adjoint.is_some()
    }
}

pub fn classify_embedding(e: &SpecMap) -> Result<Embedding> {
    if let Some(w) = order_embedding_violation(e) {
        return Err(Error::NotOrderEmbedding(w));
    }
    let extensive = e.is_deterministic();
    let adjoint = partition_adjoint(e).ok().filter(|h| {
        GaloisInsertion {
            e: e.clone(),
            h: h.clone(),
        }
        .verify(DEFAULT_SEED)
        .ok()
    });
    Ok(Embedding {
        e: e.clone(),
        extensive,
        adjoint,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FactorOrder {
    /// `e = e_ext ∘ e_int`
    #[default]
    ExtensiveAfterIntensive,
    /// `e = e_int ∘ e_ext`
    IntensiveAfterExtensive,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub order: FactorOrder,
    pub gamma: StateSpace,
    pub e_ext: SpecMap,
    pub e_int: SpecMap,
    pub h_int: SpecMap,
}

impl Decomposition {
    pub fn composed(&self) -> SpecMap {
        match self.order {
            FactorOrder::ExtensiveAfterIntensive => self.e_ext.compose_unchecked(&self.e_int),
            FactorOrder::IntensiveAfterExtensive => self.e_int.compose_unchecked(&self.e_ext),
        }
    }
}

/// Factors an embedding with pairwise disjoint singleton images into an
/// extensive and an intensive part.
pub fn decompose_embedding(e: &SpecMap, order: FactorOrder) -> Result<Decomposition> {
    if let Some(w) = order_embedding_violation(e) {
        return Err(Error::NotOrderEmbedding(w));
    }
    let omega = e.source();
    let sigma = e.target();
    let mut hit = BitSet::empty(sigma.size());
    for i in 0..omega.size() {
        if hit.intersects(e.image_bits(i)) {
            return Err(Error::OverlappingImages(format!(
                "e({}) = {} meets an earlier image",
                omega.label(i),
                e.image(i)
            )));
        }
        hit.union_with(e.image_bits(i));
    }
    match order {
        FactorOrder::ExtensiveAfterIntensive => {
            let members: Vec<usize> = hit.iter().collect();
            let gamma = StateSpace::new(members.iter().map(|&s| sigma.label(s)))?;
            let pos = |s: usize| members.binary_search(&s).expect("hit state");
            let e_ext = SpecMap::from_fn(&gamma, sigma, |g| members[g]);
            let table = (0..omega.size())
                .map(|i| BitSet::from_indices(gamma.size(), e.image_bits(i).iter().map(pos)))
                .collect();
            let e_int = SpecMap::from_bits(omega, &gamma, table)?;
            let h_int = partition_adjoint(&e_int)?;
            Ok(Decomposition { order, gamma, e_ext, e_int, h_int })
        }
        FactorOrder::IntensiveAfterExtensive => {
            let unhit: Vec<usize> = (0..sigma.size()).filter(|&s| !hit.contains(s)).collect();
            let mut labels: Vec<String> = omega.labels().to_vec();
            for &s in &unhit {
                let mut l = sigma.label(s).to_string();
                while labels.contains(&l) {
                    l.push('\'');
                }
                labels.push(l);
            }
            let gamma = StateSpace::new(&labels)?;
            let e_ext = SpecMap::from_fn(omega, &gamma, |i| i);
            let k = omega.size();
            let table = (0..gamma.size())
                .map(|g| {
                    if g < k {
                        e.image_bits(g).clone()
                    } else {
                        BitSet::singleton(sigma.size(), unhit[g - k])
                    }
                })
                .collect();
            let e_int = SpecMap::from_bits(&gamma, sigma, table)?;
            let h_int = partition_adjoint(&e_int)?;
            Ok(Decomposition { order, gamma, e_ext, e_int, h_int })
        }
    }
}

/// `(e2∘e1, h1∘h2)` for `inner: A→AB` and `outer: AB→ABC`.
pub fn nest_compose(inner: &GaloisInsertion, outer: &GaloisInsertion) -> Result<GaloisInsertion> {
    inner.big().check_same(outer.small(), "nest")?;
    Ok(GaloisInsertion {
        e: outer.e.compose_unchecked(&inner.e),
        h: inner.h.compose_unchecked(&outer.h),
    })
}

/// Recovers `A→AB` from `ab: AB→ABC` and `a: A→ABC` when `Λ_ab ⊆ Λ_a`.
pub fn nest_middle(ab: &GaloisInsertion, a: &GaloisInsertion) -> Result<GaloisInsertion> {
    ab.big().check_same(a.big(), "nest middle")?;
    let la = a.lumping();
    let lab = ab.lumping();
    if let Some(i) = (0..ab.big().size()).find(|&i| !lab.map.image_bits(i).is_subset(la.map.image_bits(i))) {
        return Err(Error::LumpingOrderViolated(format!(
            "at {}: {} ⊄ {}",
            ab.big().label(i),
            lab.map.image(i),
            la.map.image(i)
        )));
    }
    Ok(GaloisInsertion {
        e: ab.h.compose_unchecked(&a.e),
        h: a.h.compose_unchecked(&ab.e),
    })
}

fn check_submonoid(t: &ResourceTheory, a: &TransformationMonoid) -> Result<()> {
    t.space().check_same(a.space(), "agent monoid")?;
    for f in a.elements() {
        if !t.monoid().contains(f) {
            return Err(Error::NotSubmonoid(format!("{f:?} is not in the theory")));
        }
    }
    Ok(())
}

/// The restricted agent: closure of `{h∘f∘e : f ∈ A}` on the small space.
pub fn restrict_theory(
    t: &ResourceTheory,
    a: &TransformationMonoid,
    ins: &GaloisInsertion,
    cap: usize,
) -> Result<ResourceTheory> {
    check_submonoid(t, a)?;
    t.space().check_same(ins.big(), "restrict_theory")?;
    let maps = a
        .elements()
        .iter()
        .map(|f| ins.h.compose_unchecked(&f.compose_unchecked(&ins.e)))
        .collect();
    Ok(ResourceTheory::new(TransformationMonoid::close(ins.small(), maps, cap)?))
}

/// The effective theory induced by a side resource `K`.
pub fn effective_theory(
    t: &ResourceTheory,
    a: &TransformationMonoid,
    ins: &GaloisInsertion,
    k: &Specification,
    cap: usize,
) -> Result<ResourceTheory> {
    check_submonoid(t, a)?;
    t.space().check_same(ins.big(), "effective_theory")?;
    t.space().check_same(k.space(), "side resource")?;
    let hk = ins.h.apply(k)?;
    if !hk.is_full() {
        return Err(Error::IncompatibleSideResource(format!("h(K) = {hk}")));
    }
    let small = ins.small();
    let mut maps = Vec::with_capacity(a.len());
    for f in a.elements() {
        let mut table = Vec::with_capacity(small.size());
        for v in 0..small.size() {
            let cut = ins.e.image_bits(v).intersection(k.bits());
            if cut.is_empty() {
                return Err(Error::EmptyIntersection(small.label(v).to_string()));
            }
            table.push(ins.h.apply_bits(&f.apply_bits(&cut)));
        }
        maps.push(SpecMap::from_bits(small, small, table)?);
    }
    Ok(ResourceTheory::new(TransformationMonoid::close(small, maps, cap)?))
}
