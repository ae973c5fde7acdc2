//! Commutants, complete subsystems and the agents they induce.
//!
//! Subsets of a parent monoid are bit sets over its element indices. All
//! commutation questions go through a precomputed table.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::BitSet;
use crate::embed::{self, GaloisInsertion, GeneratedLumping};
use crate::error::{Error, Result};
use crate::report::Report;
use crate::spec::{SpecMap, Specification};
use crate::theory::{ResourceTheory, TransformationMonoid};

/// A parent monoid with its commutation table.
#[derive(Clone, Debug)]
pub struct MonoidAlgebra {
    monoid: TransformationMonoid,
    commute: Vec<BitSet>,
}

/// Complete subsystems found by [`MonoidAlgebra::enumerate_complete`],
/// sorted by size then by member indices.
#[derive(Clone, Debug)]
pub struct SubsystemLattice {
    pub nodes: Vec<BitSet>,
    pub bottom: usize,
    pub top: usize,
    pub join: Vec<Vec<usize>>,
    pub meet: Vec<Vec<usize>>,
}

impl SubsystemLattice {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn position(&self, s: &BitSet) -> Option<usize> {
        self.nodes.iter().position(|n| n == s)
    }

    /// Covering pairs `(lower, upper)` of set inclusion.
    pub fn hasse(&self) -> Vec<(usize, usize)> {
        let n = self.nodes.len();
        let mut by_size: Vec<usize> = (0..n).collect();
        by_size.sort_by_key(|&k| self.nodes[k].count());
        let mut out = Vec::new();
        for i in 0..n {
            // Strict supersets in order of size; a cover is one containing no
            // smaller cover.
            let mut covers: Vec<usize> = Vec::new();
            for &j in &by_size {
                if j == i || !self.nodes[i].is_subset(&self.nodes[j]) {
                    continue;
                }
                if !covers.iter().any(|&c| self.nodes[c].is_subset(&self.nodes[j])) {
                    covers.push(j);
                }
            }
            out.extend(covers.into_iter().map(|j| (i, j)));
        }
        out.sort_unstable();
        out
    }

    /// Associativity, commutativity, absorption, idempotence and the bound laws.
    ///
    /// Laws in two variables are checked on every pair. Laws in three are
    /// checked on every triple up to `EXHAUSTIVE_TRIPLES` nodes and on seeded
    /// random triples beyond that; the report notes which.
    pub fn check_laws(&self, seed: u64) -> Report {
        let n = self.nodes.len();
        let (j, m) = (&self.join, &self.meet);
        let nodes = &self.nodes;
        let mut r = Report::new();
        let pairs = |pred: &dyn Fn(usize, usize) -> bool| -> Option<String> {
            for a in 0..n {
                for b in 0..n {
                    if !pred(a, b) {
                        return Some(format!("nodes {a}, {b}"));
                    }
                }
            }
            None
        };
        let exhaustive = n <= EXHAUSTIVE_TRIPLES;
        let triples = |pred: &dyn Fn(usize, usize, usize) -> bool| -> Option<String> {
            let test = |a, b, c| (!pred(a, b, c)).then(|| format!("nodes {a}, {b}, {c}"));
            if exhaustive {
                for a in 0..n {
                    for b in 0..n {
                        for c in 0..n {
                            if let Some(w) = test(a, b, c) {
                                return Some(w);
                            }
                        }
                    }
                }
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..SAMPLED_TRIPLES {
                    let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                    if let Some(w) = test(a, b, c) {
                        return Some(w);
                    }
                }
            }
            None
        };
        r.push("join associative", triples(&|a, b, c| j[j[a][b]][c] == j[a][j[b][c]]));
        r.push("meet associative", triples(&|a, b, c| m[m[a][b]][c] == m[a][m[b][c]]));
        r.push("join commutative", pairs(&|a, b| j[a][b] == j[b][a]));
        r.push("meet commutative", pairs(&|a, b| m[a][b] == m[b][a]));
        r.push("absorption ∨∧", pairs(&|a, b| j[a][m[a][b]] == a));
        r.push("absorption ∧∨", pairs(&|a, b| m[a][j[a][b]] == a));
        r.push("idempotent", pairs(&|a, _| j[a][a] == a && m[a][a] == a));
        r.push("bottom identity", pairs(&|a, _| j[a][self.bottom] == a && m[a][self.bottom] == self.bottom));
        r.push("top identity", pairs(&|a, _| m[a][self.top] == a && j[a][self.top] == self.top));
        r.push(
            "join is upper bound",
            pairs(&|a, b| nodes[a].is_subset(&nodes[j[a][b]]) && nodes[b].is_subset(&nodes[j[a][b]])),
        );
        r.push(
            "meet is lower bound",
            pairs(&|a, b| nodes[m[a][b]].is_subset(&nodes[a]) && nodes[m[a][b]].is_subset(&nodes[b])),
        );
        r.push(
            "join is least upper bound",
            triples(&|a, b, c| {
                let ub = nodes[a].is_subset(&nodes[c]) && nodes[b].is_subset(&nodes[c]);
                !ub || nodes[j[a][b]].is_subset(&nodes[c])
            }),
        );
        r.push(
            "meet is greatest lower bound",
            triples(&|a, b, c| {
                let lb = nodes[c].is_subset(&nodes[a]) && nodes[c].is_subset(&nodes[b]);
                !lb || nodes[c].is_subset(&nodes[m[a][b]])
            }),
        );
        if exhaustive {
            r.note(format!("three-variable laws checked on all {n}^3 triples"));
        } else {
            r.note(format!("three-variable laws checked on {SAMPLED_TRIPLES} random triples (seed {seed:#x})"));
        }
        r
    }
}

impl SubsystemLattice {
    /// Checks on every pair that the meet is the plain intersection and the
    /// join is the completion `(A′ ∩ B′)′` of the union. Since completion is
    /// a closure operator, these make the tables the lattice of Sys(T) and so
    /// imply associativity and the bound laws on all triples.
    pub fn certify_tables(&self, alg: &MonoidAlgebra) -> Report {
        let n = self.nodes.len();
        let comms: Vec<BitSet> = self.nodes.iter().map(|x| alg.commutant(x)).collect();
        let mut r = Report::new();
        let complete = (0..n)
            .find(|&k| alg.commutant(&comms[k]) != self.nodes[k])
            .map(|k| format!("node {k}"));
        r.push("nodes complete", complete);
        let mut meet = None;
        let mut join = None;
        'outer: for a in 0..n {
            for b in a..n {
                if meet.is_none() && self.nodes[self.meet[a][b]] != self.nodes[a].intersection(&self.nodes[b]) {
                    meet = Some(format!("nodes {a}, {b}"));
                }
                if join.is_none() && self.nodes[self.join[a][b]] != alg.commutant(&comms[a].intersection(&comms[b])) {
                    join = Some(format!("nodes {a}, {b}"));
                }
                if meet.is_some() && join.is_some() {
                    break 'outer;
                }
            }
        }
        r.push("meet is intersection", meet);
        r.push("join is completion of union", join);
        r
    }
}

const EXHAUSTIVE_TRIPLES: usize = 160;
const SAMPLED_TRIPLES: usize = 200_000;

/// Restricted theories of two independent complete subsystems.
#[derive(Clone, Debug)]
pub struct Agents {
    pub ins_a: GaloisInsertion,
    pub ins_b: GaloisInsertion,
    pub theory_a: ResourceTheory,
    pub theory_b: ResourceTheory,
    pub a: BitSet,
    pub b: BitSet,
    /// `h_A∘f_B∘e_A(V_A) ⊆ V_A` and its mirror image.
    pub certificate: Report,
}

/// Verdicts of the three equivalent free-composition conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Compatibility {
    pub compatible: bool,
    pub realizable: bool,
    pub composable: bool,
    /// Whether condition (2) was decided by enumerating every `Z`.
    pub brute_force: bool,
}

impl Compatibility {
    pub fn verdict(&self) -> bool {
        self.compatible
    }
}

const BRUTE_FORCE_Z: usize = 14;
const LOCAL_PAIR_LIMIT: usize = 12;

impl MonoidAlgebra {
    pub fn new(monoid: TransformationMonoid) -> Self {
        let n = monoid.len();
        let mut commute = vec![BitSet::empty(n); n];
        for i in 0..n {
            commute[i].insert(i);
            for j in (i + 1)..n {
                let f = monoid.element(i);
                let g = monoid.element(j);
                if f.compose_unchecked(g).table() == g.compose_unchecked(f).table() {
                    commute[i].insert(j);
                    commute[j].insert(i);
                }
            }
        }
        MonoidAlgebra { monoid, commute }
    }

    pub fn monoid(&self) -> &TransformationMonoid {
        &self.monoid
    }

    pub fn len(&self) -> usize {
        self.monoid.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn all(&self) -> BitSet {
        BitSet::full(self.len())
    }

    pub fn identity_only(&self) -> BitSet {
        BitSet::singleton(self.len(), 0)
    }

    pub fn subset_of<'a>(&self, maps: impl IntoIterator<Item = &'a SpecMap>) -> Result<BitSet> {
        self.monoid.indices_of(maps)
    }

    pub fn maps(&self, a: &BitSet) -> Vec<SpecMap> {
        a.iter().map(|i| self.monoid.element(i).clone()).collect()
    }

    pub fn commute(&self, i: usize, j: usize) -> bool {
        self.commute[i].contains(j)
    }

    /// Everything in the parent commuting with every member of `a`.
    pub fn commutant(&self, a: &BitSet) -> BitSet {
        let mut out = self.all();
        for i in a.iter() {
            out.intersect_with(&self.commute[i]);
        }
        out
    }

    pub fn bicommutant(&self, a: &BitSet) -> BitSet {
        self.commutant(&self.commutant(a))
    }

    pub fn is_complete(&self, a: &BitSet) -> bool {
        &self.bicommutant(a) == a
    }

    fn require_complete(&self, a: &BitSet) -> Result<()> {
        if self.is_complete(a) {
            Ok(())
        } else {
            Err(Error::NotComplete)
        }
    }

    pub fn join(&self, a: &BitSet, b: &BitSet) -> Result<BitSet> {
        self.require_complete(a)?;
        self.require_complete(b)?;
        Ok(self.bicommutant(&a.union(b)))
    }

    pub fn meet(&self, a: &BitSet, b: &BitSet) -> Result<BitSet> {
        self.require_complete(a)?;
        self.require_complete(b)?;
        Ok(self.bicommutant(&a.intersection(b)))
    }

    /// The element index of `f∘g`.
    pub fn product(&self, i: usize, j: usize) -> usize {
        let p = self.monoid.element(i).compose_unchecked(self.monoid.element(j));
        self.monoid.index_of(&p).expect("monoid is closed")
    }

    pub fn is_submonoid(&self, a: &BitSet) -> bool {
        a.contains(0) && a.iter().all(|i| a.iter().all(|j| a.contains(self.product(i, j))))
    }

    fn require_submonoid(&self, a: &BitSet) -> Result<()> {
        if self.is_submonoid(a) {
            Ok(())
        } else {
            Err(Error::NotSubmonoid(format!("{} elements", a.count())))
        }
    }

    /// `A ∩ A′`.
    pub fn centre(&self, a: &BitSet) -> Result<BitSet> {
        self.require_submonoid(a)?;
        Ok(a.intersection(&self.commutant(a)))
    }

    pub fn is_centreless(&self, a: &BitSet) -> Result<bool> {
        Ok(self.centre(a)? == self.identity_only())
    }

    pub fn are_independent(&self, a: &BitSet, b: &BitSet) -> Result<bool> {
        self.require_submonoid(a)?;
        self.require_submonoid(b)?;
        Ok(a.is_subset(&self.commutant(b))
            && b.is_subset(&self.commutant(a))
            && a.intersection(b) == self.identity_only())
    }

    /// Closes the bicommutants of `seeds` (default: of every single element)
    /// under join and meet.
    ///
    /// With the default seeds the result is all of Sys(T): every complete
    /// `A` is the join of the bicommutants `{f}″` of its members.
    pub fn enumerate_complete(&self, seeds: Option<&[BitSet]>, cap: usize) -> Result<SubsystemLattice> {
        let mut nodes: Vec<BitSet> = Vec::new();
        let mut comms: Vec<BitSet> = Vec::new();
        let mut index: HashMap<BitSet, usize> = HashMap::new();
        let mut add = |s: BitSet, nodes: &mut Vec<BitSet>, comms: &mut Vec<BitSet>| -> Result<usize> {
            if let Some(&k) = index.get(&s) {
                return Ok(k);
            }
            if nodes.len() >= cap {
                return Err(Error::CapExceeded(cap));
            }
            index.insert(s.clone(), nodes.len());
            comms.push(self.commutant(&s));
            nodes.push(s);
            Ok(nodes.len() - 1)
        };
        add(self.commutant(&self.all()), &mut nodes, &mut comms)?;
        add(self.all(), &mut nodes, &mut comms)?;
        match seeds {
            Some(seeds) => {
                for s in seeds {
                    add(self.bicommutant(s), &mut nodes, &mut comms)?;
                }
            }
            None => {
                for i in 0..self.len() {
                    add(self.bicommutant(&BitSet::singleton(self.len(), i)), &mut nodes, &mut comms)?;
                }
            }
        }
        // Each unordered pair is combined once; nodes appended meanwhile are
        // picked up by the outer loop.
        let mut joins: Vec<Vec<usize>> = Vec::new();
        let mut meets: Vec<Vec<usize>> = Vec::new();
        let mut j = 0;
        while j < nodes.len() {
            let (mut jrow, mut mrow) = (Vec::with_capacity(j + 1), Vec::with_capacity(j + 1));
            for i in 0..=j {
                // (A ∪ B)″ = (A′ ∩ B′)′, and A ∩ B is already complete.
                let join = self.commutant(&comms[i].intersection(&comms[j]));
                let meet = nodes[i].intersection(&nodes[j]);
                jrow.push(add(join, &mut nodes, &mut comms)?);
                mrow.push(add(meet, &mut nodes, &mut comms)?);
            }
            joins.push(jrow);
            meets.push(mrow);
            j += 1;
        }
        let mut order: Vec<usize> = (0..nodes.len()).collect();
        order.sort_by(|&a, &b| {
            nodes[a]
                .count()
                .cmp(&nodes[b].count())
                .then_with(|| nodes[a].iter().cmp(nodes[b].iter()))
        });
        let mut rank = vec![0; nodes.len()];
        for (r, &k) in order.iter().enumerate() {
            rank[k] = r;
        }
        let k = nodes.len();
        let mut join = vec![vec![0; k]; k];
        let mut meet = vec![vec![0; k]; k];
        for b in 0..k {
            for a in 0..=b {
                let (ra, rb) = (rank[a], rank[b]);
                join[ra][rb] = rank[joins[b][a]];
                join[rb][ra] = rank[joins[b][a]];
                meet[ra][rb] = rank[meets[b][a]];
                meet[rb][ra] = rank[meets[b][a]];
            }
        }
        let bottom = rank[0];
        let top = rank[index[&self.all()]];
        let nodes: Vec<BitSet> = order.into_iter().map(|k| nodes[k].clone()).collect();
        Ok(SubsystemLattice {
            nodes,
            bottom,
            top,
            join,
            meet,
        })
    }

    /// `Λ_{¬A}`: states identified by some element of `A`.
    pub fn generated_lumping(&self, a: &BitSet) -> Result<GeneratedLumping> {
        self.require_submonoid(a)?;
        embed::lumping_from_maps(self.monoid.space(), &self.maps(a))
    }

    /// Agents for two independent complete subsystems, built from the
    /// lumpings generated by their commutants.
    pub fn derive_agents(&self, a: &BitSet, b: &BitSet, cap: usize) -> Result<Agents> {
        self.require_complete(a)?;
        self.require_complete(b)?;
        if !self.are_independent(a, b)? {
            return Err(Error::NotIndependent(format!(
                "{} and {} elements do not commute or share non-identity elements",
                a.count(),
                b.count()
            )));
        }
        let t = ResourceTheory::new(self.monoid.clone());
        let ins_a = GaloisInsertion::from_lumping(&self.generated_lumping(&self.commutant(a))?.lumping)?;
        let ins_b = GaloisInsertion::from_lumping(&self.generated_lumping(&self.commutant(b))?.lumping)?;
        let ma = self.monoid.submonoid(a)?;
        let mb = self.monoid.submonoid(b)?;
        let theory_a = embed::restrict_theory(&t, &ma, &ins_a, cap)?;
        let theory_b = embed::restrict_theory(&t, &mb, &ins_b, cap)?;
        let mut certificate = Report::new();
        certificate.push("S^A independent of B", independence_violation(&ins_a, &mb));
        certificate.push("S^B independent of A", independence_violation(&ins_b, &ma));
        Ok(Agents {
            ins_a,
            ins_b,
            theory_a,
            theory_b,
            a: a.clone(),
            b: b.clone(),
            certificate,
        })
    }

    /// `A ∩ T` for every node of `lattice` (a lattice of `self`), as subsets
    /// of `t`, deduplicated in lattice order.
    pub fn inherited_subsystems(&self, lattice: &SubsystemLattice, t: &TransformationMonoid) -> Result<Vec<BitSet>> {
        let mut map = Vec::with_capacity(t.len());
        for f in t.elements() {
            map.push(
                self.monoid
                    .index_of(f)
                    .ok_or_else(|| Error::NotSubtheory(f.to_string()))?,
            );
        }
        let mut out: Vec<BitSet> = Vec::new();
        for node in &lattice.nodes {
            let s = BitSet::from_indices(t.len(), (0..t.len()).filter(|&k| node.contains(map[k])));
            t.submonoid(&s)?;
            if !out.contains(&s) {
                out.push(s);
            }
        }
        Ok(out)
    }

    /// The map `f ↦ u∘f∘u_inv`, as an isomorphism candidate from `a` to its
    /// conjugate.
    pub fn conjugation_iso(&self, a: &BitSet, u: &SpecMap, u_inv: &SpecMap) -> Result<Vec<(usize, usize)>> {
        a.iter()
            .map(|i| {
                let c = u.compose(&self.monoid.element(i).compose(u_inv)?)?;
                let j = self.monoid.index_of(&c).ok_or_else(|| Error::NotInMonoid(c.to_string()))?;
                Ok((i, j))
            })
            .collect()
    }

    /// Checks that `(u, u_inv)` swaps `a` and `b` along `iso`.
    pub fn verify_swap(
        &self,
        a: &BitSet,
        b: &BitSet,
        iso: &[(usize, usize)],
        u: &SpecMap,
        u_inv: &SpecMap,
    ) -> Result<Report> {
        self.require_complete(a)?;
        self.require_complete(b)?;
        let fwd = self.check_iso(a, b, iso)?;
        let mut r = Report::new();
        let indep = self.are_independent(a, b)?;
        r.push("independent", (!indep).then(|| "A and B are not independent".to_string()));
        let ab = self.bicommutant(&a.union(b));
        for (name, m) in [("u", u), ("u_inv", u_inv)] {
            let i = self.monoid.index_of(m).ok_or_else(|| Error::NotInMonoid(m.to_string()))?;
            if !ab.contains(i) {
                return Err(Error::NotInJoin(name.to_string()));
            }
        }
        let id = SpecMap::identity(self.monoid.space());
        let inv_ok = u.compose(u_inv)?.maps_equal(&id)? && u_inv.compose(u)?.maps_equal(&id)?;
        r.push("u invertible", (!inv_ok).then(|| "u∘u_inv or u_inv∘u is not the identity".to_string()));
        let bwd = |j: usize| fwd.iter().find(|&&(_, y)| y == j).map(|&(x, _)| x).expect("bijection");
        let mut witness = None;
        'outer: for (fa, fb) in fwd.iter().copied() {
            for gb in b.iter() {
                let ga = bwd(gb);
                let inner = self.monoid.element(fa).compose_unchecked(self.monoid.element(gb));
                let want = self.monoid.element(fb).compose_unchecked(self.monoid.element(ga));
                let left = u_inv.compose(&inner.compose(u)?)?;
                let right = u.compose(&inner.compose(u_inv)?)?;
                if left.table() != want.table() || right.table() != want.table() {
                    witness = Some(format!(
                        "f_A = {}, g_B = {}",
                        self.monoid.element(fa),
                        self.monoid.element(gb)
                    ));
                    break 'outer;
                }
            }
        }
        r.push("conjugation", witness);
        Ok(r)
    }

    fn check_iso(&self, a: &BitSet, b: &BitSet, iso: &[(usize, usize)]) -> Result<Vec<(usize, usize)>> {
        let bad = |m: &str| Err(Error::NotIsomorphism(m.to_string()));
        let mut dom = BitSet::empty(self.len());
        let mut cod = BitSet::empty(self.len());
        for &(x, y) in iso {
            if !a.contains(x) || !b.contains(y) {
                return bad("pair outside the subsystems");
            }
            if dom.contains(x) || cod.contains(y) {
                return bad("not injective or not a function");
            }
            dom.insert(x);
            cod.insert(y);
        }
        if &dom != a || &cod != b {
            return bad("not a bijection");
        }
        let f = |x: usize| iso.iter().find(|p| p.0 == x).expect("total").1;
        if f(0) != 0 {
            return bad("identity not preserved");
        }
        for &(x, fx) in iso {
            for &(y, fy) in iso {
                if f(self.product(x, y)) != self.product(fx, fy) {
                    return Err(Error::NotIsomorphism(format!(
                        "i({}∘{}) ≠ i({})∘i({})",
                        self.monoid.element(x),
                        self.monoid.element(y),
                        self.monoid.element(x),
                        self.monoid.element(y)
                    )));
                }
            }
        }
        Ok(iso.to_vec())
    }

    /// The existential side condition under which independent subsystems
    /// yield freely composable agents: for all `V, W` there are `X`,
    /// `f ∈ A′`, `g ∈ B′` with `f(V) = f(X)` and `g(W) = g(X)`.
    pub fn free_composability_condition(&self, a: &BitSet, b: &BitSet) -> Result<bool> {
        let space = self.monoid.space();
        if space.size() > 5 {
            return Err(Error::TooLarge(format!("{} states (limit 5)", space.size())));
        }
        let fa = self.maps(&self.commutant(a));
        let fb = self.maps(&self.commutant(b));
        let specs: Vec<Specification> = space.all_specs().collect();
        let imgs = |fs: &[SpecMap]| -> Vec<Vec<BitSet>> {
            specs
                .iter()
                .map(|x| fs.iter().map(|f| f.apply_bits(x.bits())).collect())
                .collect()
        };
        let ia = imgs(&fa);
        let ib = imgs(&fb);
        Ok((0..specs.len()).all(|v| {
            (0..specs.len()).all(|w| {
                (0..specs.len()).any(|x| {
                    (0..fa.len()).any(|k| ia[v][k] == ia[x][k]) && (0..fb.len()).any(|k| ib[w][k] == ib[x][k])
                })
            })
        }))
    }
}

fn independence_violation(ins: &GaloisInsertion, others: &TransformationMonoid) -> Option<String> {
    // Singletons suffice: the maps are element-wise.
    for f in others.elements() {
        let m = ins.h().compose_unchecked(&f.compose_unchecked(ins.e()));
        for v in 0..ins.small().size() {
            if !m.image_bits(v).is_subset(&BitSet::singleton(ins.small().size(), v)) {
                return Some(format!("f = {f}, V = {{{}}}", ins.small().label(v)));
            }
        }
    }
    None
}

/// Whether an insertion is independent of a set of transformations.
pub fn is_independent_of(ins: &GaloisInsertion, maps: &TransformationMonoid) -> Result<bool> {
    ins.big().check_same(maps.space(), "independence")?;
    Ok(independence_violation(ins, maps).is_none())
}

fn check_pair_sizes(a: &GaloisInsertion, b: &GaloisInsertion) -> Result<()> {
    a.big().check_same(b.big(), "compatibility")?;
    for s in [a.small(), b.small()] {
        if s.size() > LOCAL_PAIR_LIMIT {
            return Err(Error::TooLarge(format!("local space of {} states", s.size())));
        }
    }
    Ok(())
}

/// Evaluates the three conditions of free composition separately and
/// insists they agree.
pub fn check_compatibility(a: &GaloisInsertion, b: &GaloisInsertion) -> Result<Compatibility> {
    check_pair_sizes(a, b)?;
    let big = a.big();
    let covers = |x: &GaloisInsertion, y: &GaloisInsertion| {
        (0..x.small().size()).all(|v| y.h().apply_bits(x.e().image_bits(v)).is_full())
    };
    let compatible = covers(a, b) && covers(b, a);

    let na = a.small().size();
    let nb = b.small().size();
    let brute_force = big.size() <= BRUTE_FORCE_Z;
    let realizable = if brute_force {
        let mut seen = std::collections::HashSet::new();
        for z in big.all_specs() {
            seen.insert((a.h().apply_bits(z.bits()), b.h().apply_bits(z.bits())));
        }
        seen.len() == ((1usize << na) - 1) * ((1usize << nb) - 1)
    } else {
        a.small().all_specs().all(|v| {
            b.small().all_specs().all(|w| {
                let z = a.e().apply_bits(v.bits()).intersection(&b.e().apply_bits(w.bits()));
                !z.is_empty() && &a.h().apply_bits(&z) == v.bits() && &b.h().apply_bits(&z) == w.bits()
            })
        })
    };

    let composable = a.small().all_specs().all(|v| {
        b.small().all_specs().all(|w| {
            let z = a.e().apply_bits(v.bits()).intersection(&b.e().apply_bits(w.bits()));
            !z.is_empty() && &a.h().apply_bits(&z) == v.bits()
        })
    });
    if compatible != realizable || compatible != composable {
        return Err(Error::InternalInconsistency(format!(
            "compatible={compatible} realizable={realizable} composable={composable}"
        )));
    }
    Ok(Compatibility {
        compatible,
        realizable,
        composable,
        brute_force,
    })
}

/// `f_B(e_A(V_A) ∩ W) = e_A(V_A) ∩ f_B(W)`; returns the first state where
/// the two sides differ.
pub fn check_independent_processing(
    ins: &GaloisInsertion,
    f_b: &SpecMap,
    v_a: &Specification,
    w: &Specification,
) -> Result<Option<String>> {
    ins.small().check_same(v_a.space(), "local specification")?;
    ins.big().check_same(w.space(), "W")?;
    let m = ins.h().compose_unchecked(&f_b.compose_unchecked(ins.e()));
    if let Some(v) = (0..ins.small().size()).find(|&v| !m.image_bits(v).is_subset(&BitSet::singleton(ins.small().size(), v))) {
        return Err(Error::NotIndependent(format!("{f_b} moves local state {}", ins.small().label(v))));
    }
    let ev = ins.e().apply(v_a)?;
    let cut = ev.bits().intersection(w.bits());
    if cut.is_empty() {
        return Err(Error::IncompatibleW);
    }
    let lhs = f_b.apply_bits(&cut);
    let rhs = ev.bits().intersection(&f_b.apply_bits(w.bits()));
    if lhs == rhs {
        return Ok(None);
    }
    let mut diff = lhs.union(&rhs);
    diff.difference_with(&lhs.intersection(&rhs));
    let s = diff.first().expect("sides differ");
    Ok(Some(format!(
        "state {} is on one side only ({} vs {})",
        ins.big().label(s),
        Specification::from_bits(ins.big(), lhs.clone()).map(|x| x.to_string()).unwrap_or_else(|_| "∅".into()),
        Specification::from_bits(ins.big(), rhs.clone()).map(|x| x.to_string()).unwrap_or_else(|_| "∅".into()),
    )))
}

/// `(f_A∘g_B)(V) ⊆ e_A(f̃_A(h_A(V))) ∩ e_B(g̃_B(h_B(V)))`.
pub fn check_agents_theorem(agents: &Agents, f_a: &SpecMap, g_b: &SpecMap, v: &Specification) -> Result<bool> {
    let (ia, ib) = (&agents.ins_a, &agents.ins_b);
    let lhs = f_a.compose(g_b)?.apply(v)?;
    let reduced = |ins: &GaloisInsertion, f: &SpecMap| ins.h().compose_unchecked(&f.compose_unchecked(ins.e()));
    let ra = ia.e().apply_bits(&reduced(ia, f_a).apply_bits(&ia.h().apply(v)?.bits().clone()));
    let rb = ib.e().apply_bits(&reduced(ib, g_b).apply_bits(&ib.h().apply(v)?.bits().clone()));
    Ok(lhs.bits().is_subset(&ra.intersection(&rb)))
}

/// `u(e_A(V_A))`.
pub fn copy_spec(u: &SpecMap, ins: &GaloisInsertion, v_a: &Specification) -> Result<Specification> {
    u.apply(&ins.e().apply(v_a)?)
}

/// `⋂_i u_i(e_A(V_A))`; zero supports give Ω.
pub fn n_copies(ins: &GaloisInsertion, v_a: &Specification, swaps: &[SpecMap]) -> Result<Specification> {
    let mut acc = ins.big().full();
    for (k, u) in swaps.iter().enumerate() {
        let c = copy_spec(u, ins, v_a)?;
        acc = acc
            .combine(&c)
            .map_err(|_| Error::Incompatible(format!("copy {k} ({c}) clashes with the previous {k} copies")))?;
    }
    Ok(acc)
}
