//! Seeded random instances for property checks and the law suite.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::bits::BitSet;
use crate::convex::{q, Distribution, PointSpec, RationalPoint, Q};
use crate::embed::{self, GaloisInsertion, Lumping};
use crate::error::Error;
use crate::spec::{SpecMap, Specification, StateSpace};
use crate::theory::{ResourceTheory, TransformationMonoid};

pub use rand::SeedableRng;
pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// States `s0 … s{n-1}`.
pub fn space(n: usize) -> StateSpace {
    StateSpace::new((0..n).map(|i| format!("s{i}"))).expect("distinct labels")
}

pub fn spec(rng: &mut Rng8, space: &StateSpace) -> Specification {
    Specification::from_bits(space, embed::random_nonempty(rng, space.size())).expect("nonempty")
}

/// An endomorphism that is deterministic about half the time.
pub fn map(rng: &mut Rng8, space: &StateSpace) -> SpecMap {
    let n = space.size();
    if rng.gen_bool(0.5) {
        let t: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
        SpecMap::endo_from_fn(space, |i| t[i])
    } else {
        let t = (0..n)
            .map(|_| {
                // Small images keep the generated monoids varied.
                let mut b = BitSet::singleton(n, rng.gen_range(0..n));
                if rng.gen_bool(0.3) {
                    b.insert(rng.gen_range(0..n));
                }
                b
            })
            .collect();
        SpecMap::from_bits(space, space, t).expect("nonempty images")
    }
}

/// A theory on at most `max_states` states with at most `max_elements`
/// monoid elements, closed from up to three random generators.
pub fn theory(rng: &mut Rng8, max_states: usize, max_elements: usize) -> ResourceTheory {
    let n = rng.gen_range(1..=max_states);
    let s = space(n);
    let k = rng.gen_range(0..=3);
    let mut gens: Vec<SpecMap> = (0..k).map(|_| map(rng, &s)).collect();
    loop {
        match TransformationMonoid::close(&s, gens.clone(), max_elements) {
            Ok(m) => return ResourceTheory::new(m),
            Err(Error::CapExceeded(_)) => {
                gens.pop();
            }
            Err(e) => panic!("closing random generators: {e}"),
        }
    }
}

/// A lumping from a uniformly random assignment of states to classes.
pub fn partition_lumping(rng: &mut Rng8, space: &StateSpace) -> Lumping {
    let n = space.size();
    let k = rng.gen_range(1..=n);
    let class: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
    Lumping::from_partition(space, |i| class[i])
}

/// An order embedding with pairwise disjoint images from a random small
/// space into a random big space of at most `max_big` states.
pub fn disjoint_embedding(rng: &mut Rng8, max_big: usize) -> SpecMap {
    let big_n = rng.gen_range(1..=max_big);
    let small_n = rng.gen_range(1..=big_n);
    let big = space(big_n);
    let small = StateSpace::new((0..small_n).map(|i| format!("t{i}"))).expect("distinct labels");
    let mut order: Vec<usize> = (0..big_n).collect();
    order.shuffle(rng);
    // Each small state gets one state of its own; the rest are handed out
    // or left unhit.
    let mut images: Vec<BitSet> = (0..small_n).map(|i| BitSet::singleton(big_n, order[i])).collect();
    for &s in &order[small_n..] {
        let slot = rng.gen_range(0..=small_n);
        if slot < small_n {
            images[slot].insert(s);
        }
    }
    SpecMap::from_bits(&small, &big, images).expect("nonempty images")
}

/// Two insertions into one space of at most `max_big` states. Half of the
/// pairs are the factors of a product space, the rest come from independent
/// random partitions.
pub fn insertion_pair(rng: &mut Rng8, max_big: usize) -> (GaloisInsertion, GaloisInsertion) {
    if rng.gen_bool(0.5) {
        let na = rng.gen_range(1..=3usize);
        let nb = rng.gen_range(1..=(max_big / na).clamp(1, 3));
        let big = StateSpace::new((0..na * nb).map(|i| format!("{}{}", i / nb, i % nb))).expect("distinct");
        let a = Lumping::from_partition(&big, |i| i / nb);
        let b = Lumping::from_partition(&big, |i| i % nb);
        (
            GaloisInsertion::from_lumping(&a).expect("partition"),
            GaloisInsertion::from_lumping(&b).expect("partition"),
        )
    } else {
        let s = space(rng.gen_range(1..=max_big));
        let a = partition_lumping(rng, &s);
        let b = partition_lumping(rng, &s);
        (
            GaloisInsertion::from_lumping(&a).expect("partition"),
            GaloisInsertion::from_lumping(&b).expect("partition"),
        )
    }
}

/// A rational in `[0, 1]` with denominator at most `den`.
pub fn probability(rng: &mut Rng8, den: i64) -> Q {
    let d = rng.gen_range(1..=den);
    q(rng.gen_range(0..=d), d)
}

pub fn rational(rng: &mut Rng8, range: i64, den: i64) -> Q {
    q(rng.gen_range(-range * den..=range * den), rng.gen_range(1..=den))
}

pub fn point(rng: &mut Rng8, dim: usize) -> RationalPoint {
    RationalPoint::new((0..dim).map(|_| rational(rng, 3, 4)).collect())
}

/// `n` weights, some of them zero, summing to one.
pub fn distribution(rng: &mut Rng8, n: usize) -> Distribution {
    let raw: Vec<i64> = (0..n).map(|_| if rng.gen_bool(0.2) { 0 } else { rng.gen_range(1..=6) }).collect();
    let total: i64 = raw.iter().sum();
    if total == 0 {
        return Distribution::point_mass(n, rng.gen_range(0..n));
    }
    Distribution::new(raw.iter().map(|&w| q(w, total)).collect()).expect("normalised")
}

pub fn point_spec(rng: &mut Rng8, dim: usize, max_points: usize) -> PointSpec {
    let k = rng.gen_range(1..=max_points);
    PointSpec::new((0..k).map(|_| point(rng, dim)).collect()).expect("nonempty")
}
