//! Seeded property suites over generated instances. Each returns a report
//! with one check per law and notes with the instance counts.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::approx::{self, ApproximationStructure};
use crate::convex::{self, Distribution, RationalPoint, Q};
use crate::embed::{self, FactorOrder, GaloisInsertion};
use crate::gen::{self, Rng8};
use crate::locality;
use crate::oracle;
use crate::report::Report;
use crate::spec::{SpecMap, Specification};
use crate::theory::{ResourceTheory, TransformationMonoid};

/// Keeps the first counterexample per law.
struct Laws {
    names: Vec<&'static str>,
    witness: Vec<Option<String>>,
}

impl Laws {
    fn new(names: &[&'static str]) -> Self {
        Laws {
            names: names.to_vec(),
            witness: vec![None; names.len()],
        }
    }

    fn check(&mut self, name: &str, ok: bool, witness: impl FnOnce() -> String) {
        let k = self.names.iter().position(|n| *n == name).expect("declared law");
        if !ok && self.witness[k].is_none() {
            self.witness[k] = Some(witness());
        }
    }

    fn report(self) -> Report {
        let mut r = Report::new();
        for (n, w) in self.names.into_iter().zip(self.witness) {
            r.push(n, w);
        }
        r
    }
}

/// Reflexivity, transitivity and `V→Z ⇒ V∩W→Z` on random theories, with
/// every query cross-checked against the scanning oracle and every monoid
/// against an independently computed closure.
pub fn preorder(seed: u64, theories: usize) -> Report {
    let mut rng = gen::rng(seed);
    let mut laws = Laws::new(&["reflexive", "transitive", "combining keeps reach", "oracle agreement", "closure agreement"]);
    let mut queries = 0;
    for t_i in 0..theories {
        let t = gen::theory(&mut rng, 5, 20);
        let s = t.space().clone();
        let closure = oracle::oracle_closure(&s, t.monoid().generators()).expect("small theory");
        let ours: BTreeSet<Vec<Vec<bool>>> = t
            .monoid()
            .elements()
            .iter()
            .map(|f| (0..s.size()).map(|i| (0..s.size()).map(|j| f.image_bits(i).contains(j)).collect()).collect())
            .collect();
        laws.check("closure agreement", closure == ours, || format!("theory {t_i}: {} vs {} elements", ours.len(), closure.len()));
        for _ in 0..8 {
            let (v, w, z) = (gen::spec(&mut rng, &s), gen::spec(&mut rng, &s), gen::spec(&mut rng, &s));
            queries += 1;
            let reach = |a: &Specification, b: &Specification| {
                let fast = t.reaches(a, b).expect("same space");
                let slow = oracle::oracle_reaches(&t, a, b).expect("small theory");
                (fast, slow)
            };
            let (vv, vv_o) = reach(&v, &v);
            laws.check("reflexive", vv.found, || format!("theory {t_i}, V = {v}"));
            let (vw, vw_o) = reach(&v, &w);
            let (wz, wz_o) = reach(&w, &z);
            let (vz, vz_o) = reach(&v, &z);
            laws.check("transitive", !(vw.found && wz.found) || vz.found, || {
                format!("theory {t_i}, V = {v}, W = {w}, Z = {z}")
            });
            let mut agree = vv == vv_o && vw == vw_o && wz == wz_o && vz == vz_o;
            if let Ok(vw_cut) = v.combine(&w) {
                let (cz, cz_o) = reach(&vw_cut, &z);
                agree &= cz == cz_o;
                laws.check("combining keeps reach", !vz.found || cz.found, || {
                    format!("theory {t_i}, V = {v}, W = {w}, Z = {z}")
                });
            }
            laws.check("oracle agreement", agree, || format!("theory {t_i}, V = {v}, W = {w}, Z = {z}"));
        }
    }
    let mut r = laws.report();
    r.note(format!("{theories} theories, {queries} query triples, seed {seed:#x}"));
    r
}

/// Random partition lumpings give verified insertions with `Λ = e∘h`.
pub fn lumping_insertion(seed: u64, count: usize) -> Report {
    let mut rng = gen::rng(seed);
    let mut laws = Laws::new(&["lumping laws", "insertion verified", "checked exhaustively", "Λ = e∘h"]);
    for k in 0..count {
        let s = gen::space(rng.gen_range(1..=5));
        let l = gen::partition_lumping(&mut rng, &s);
        let lr = embed::verify_lumping(l.map()).expect("endomorphism");
        laws.check("lumping laws", lr.ok(), || format!("instance {k}: {lr}"));
        let ins = GaloisInsertion::from_lumping(&l).expect("partition lumping");
        let r = ins.verify(seed);
        laws.check("insertion verified", r.ok(), || format!("instance {k}: {}", r.first_failure().map_or(String::new(), |c| c.name.clone())));
        laws.check("checked exhaustively", r.notes.is_empty(), || format!("instance {k}"));
        let lam = ins.lumping();
        laws.check("Λ = e∘h", lam.map() == l.map(), || format!("instance {k}: {} vs {}", lam.map(), l.map()));
    }
    let mut r = laws.report();
    r.note(format!("{count} lumpings on at most 5 states, seed {seed:#x}"));
    r
}

/// Both factor orders reproduce random disjoint-image embeddings with
/// factors of the right kinds.
pub fn decomposition(seed: u64, count: usize) -> Report {
    let mut rng = gen::rng(seed);
    let mut laws = Laws::new(&["order embedding", "factors compose to e", "extensive factor", "intensive factor"]);
    for k in 0..count {
        let e = gen::disjoint_embedding(&mut rng, 5);
        laws.check("order embedding", embed::classify_embedding(&e).is_ok(), || format!("instance {k}: {e}"));
        for order in [FactorOrder::ExtensiveAfterIntensive, FactorOrder::IntensiveAfterExtensive] {
            let d = match embed::decompose_embedding(&e, order) {
                Ok(d) => d,
                Err(err) => {
                    laws.check("factors compose to e", false, || format!("instance {k}: {err}"));
                    continue;
                }
            };
            laws.check("factors compose to e", d.composed() == e, || format!("instance {k} ({order:?}): {e}"));
            let ext = embed::classify_embedding(&d.e_ext).map(|c| c.extensive).unwrap_or(false);
            laws.check("extensive factor", ext, || format!("instance {k} ({order:?}): {}", d.e_ext));
            let int = embed::classify_embedding(&d.e_int).map(|c| c.is_intensive()).unwrap_or(false);
            laws.check("intensive factor", int, || format!("instance {k} ({order:?}): {}", d.e_int));
        }
    }
    let mut r = laws.report();
    r.note(format!("{count} embeddings into at most 5 states, both factor orders, seed {seed:#x}"));
    r
}

/// The three free-composition conditions agree on random insertion pairs.
pub fn free_composition(seed: u64, count: usize) -> Report {
    let mut rng = gen::rng(seed);
    let mut laws = Laws::new(&["conditions agree"]);
    let (mut yes, mut no) = (0, 0);
    for k in 0..count {
        let (a, b) = gen::insertion_pair(&mut rng, 6);
        match locality::check_compatibility(&a, &b) {
            Ok(c) => {
                if c.verdict() {
                    yes += 1;
                } else {
                    no += 1;
                }
            }
            Err(e) => laws.check("conditions agree", false, || format!("pair {k}: {e}")),
        }
    }
    let mut r = laws.report();
    r.note(format!("{count} pairs: {yes} freely composable, {no} not; seed {seed:#x}"));
    r
}

/// Bit flips composed with a coordinate permutation.
fn isometry(rng: &mut Rng8, width: usize, s: &crate::spec::StateSpace) -> SpecMap {
    let mask: usize = rng.gen_range(0..1 << width);
    let mut perm: Vec<usize> = (0..width).collect();
    perm.shuffle(rng);
    SpecMap::endo_from_fn(s, move |i| {
        let moved = (0..width).fold(0, |acc, b| acc | (((i >> b) & 1) << perm[b]));
        moved ^ mask
    })
}

/// Robustness transfers along reachability in stable theories, and
/// non-robustness survives reduction through a lumping.
pub fn robustness(seed: u64, count: usize) -> Report {
    let mut rng = gen::rng(seed);
    let mut laws = Laws::new(&[
        "robust W and V → W give robust V",
        "non-robust survives reduction",
        "intersection approximations",
    ]);
    let (mut stable, mut premise, mut converse, mut skipped, mut reduced) = (0, 0, 0, 0, 0);
    for k in 0..count {
        let width = rng.gen_range(1..=3);
        let h = ApproximationStructure::hamming(width);
        let s = h.space().clone();
        // Isometries and constants are stable; an arbitrary map usually is not.
        let mut gens: Vec<SpecMap> = (0..rng.gen_range(0..=2)).map(|_| isometry(&mut rng, width, &s)).collect();
        if rng.gen_bool(0.5) {
            gens.push(SpecMap::constant(&s, &gen::spec(&mut rng, &s)));
        }
        if rng.gen_bool(0.25) {
            gens.push(gen::map(&mut rng, &s));
        }
        let t = loop {
            match TransformationMonoid::close(&s, gens.clone(), 5000) {
                Ok(m) => break ResourceTheory::new(m),
                Err(_) => {
                    gens.pop();
                }
            }
        };
        let is_stable = approx::is_stable(&t, &h).expect("same space");
        stable += usize::from(is_stable);
        for _ in 0..6 {
            let v = gen::spec(&mut rng, &s);
            let w = gen::spec(&mut rng, &s);
            let eps = h.index().label(rng.gen_range(0..h.index().len())).to_string();
            let rv = approx::is_robust(&t, &h, &v, &eps).expect("same space");
            let rw = approx::is_robust(&t, &h, &w, &eps).expect("same space");
            let vw = t.reaches(&v, &w).expect("same space").found;
            if is_stable && vw {
                premise += 1;
                laws.check("robust W and V → W give robust V", !rw || rv, || {
                    format!("instance {k}: V = {v}, W = {w}, ε = {eps}")
                });
                if !rw && rv {
                    converse += 1;
                }
            }
            for e in h.index().labels() {
                if let Ok(vw_cut) = v.combine(&w) {
                    let lhs = h.approximate(&vw_cut, e).expect("known index");
                    let rhs = h.approximate(&v, e).expect("known index").bits().intersection(h.approximate(&w, e).expect("known index").bits());
                    laws.check("intersection approximations", lhs.bits().is_subset(&rhs), || {
                        format!("instance {k}: V = {v}, W = {w}, ε = {e}")
                    });
                }
            }
        }
        // Reduction through a random partition lumping.
        let l = gen::partition_lumping(&mut rng, &s);
        let ins = GaloisInsertion::from_lumping(&l).expect("partition");
        let red = approx::reduce_structure(&h, &ins).expect("same space");
        let Ok(small) = embed::restrict_theory(&t, t.monoid(), &ins, 5000) else {
            skipped += 1;
            continue;
        };
        let v = gen::spec(&mut rng, &s);
        let eps = h.index().label(rng.gen_range(0..h.index().len())).to_string();
        if !approx::is_robust(&t, &h, &v, &eps).expect("same space") {
            let hv = ins.h().apply(&v).expect("same space");
            reduced += 1;
            let down = approx::is_robust(&small, &red.structure, &hv, &eps).expect("same space");
            laws.check("non-robust survives reduction", !down, || format!("instance {k}: V = {v}, ε = {eps}"));
        }
    }
    let mut r = laws.report();
    r.note(format!(
        "{count} theories ({stable} stable), {premise} instances with a stable theory and V → W; seed {seed:#x}"
    ));
    r.note(format!("{reduced} non-robust specifications reduced, {skipped} skipped because the restricted monoid passed 5000 elements"));
    r.note(format!("{converse} of those have W not robust but V robust, so the converse implication fails"));
    r
}

fn permute<T: Clone>(v: &[T], perm: &[usize]) -> Vec<T> {
    perm.iter().map(|&i| v[i].clone()).collect()
}

/// Mixture lemmas, hull laws and oracle agreement on random rational
/// instances.
pub fn convexity(seed: u64, count: usize, hull_count: usize) -> Report {
    let mut rng = gen::rng(seed);
    let mut laws = Laws::new(&[
        "nested mixture is the weighted sum",
        "combining mixtures",
        "permuting mixtures",
        "mixture of distributions",
        "repetitions",
        "distributivity",
        "hull of mixtures",
        "hull operator laws",
        "hull oracle agreement",
    ]);
    let one = Q::from_integer(1.into());
    for k in 0..count {
        let dim = rng.gen_range(1..=3);
        let n = rng.gen_range(1..=5);
        let pts: Vec<RationalPoint> = (0..n).map(|_| gen::point(&mut rng, dim)).collect();
        let p = gen::distribution(&mut rng, n);
        let nested = convex::nested_mixture(&p, &pts).expect("consistent");
        let direct = convex::weighted_sum(&p, &pts).expect("consistent");
        laws.check("nested mixture is the weighted sum", nested == direct, || format!("instance {k}"));

        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let pp = Distribution::new(permute(p.weights(), &perm)).expect("permuted");
        let permuted = convex::nested_mixture(&pp, &permute(&pts, &perm)).expect("consistent");
        laws.check("permuting mixtures", permuted == nested, || format!("instance {k}"));

        let (nu, om, ta) = (gen::point(&mut rng, dim), gen::point(&mut rng, dim), gen::point(&mut rng, dim));
        let (r, a, b) = (gen::probability(&mut rng, 6), gen::probability(&mut rng, 6), gen::probability(&mut rng, 6));
        let lhs = convex::mix(&r, &convex::mix(&a, &nu, &om).unwrap(), &convex::mix(&b, &nu, &ta).unwrap()).unwrap();
        let c = &r * &a + (&one - &r) * &b;
        let alpha = if c == one { Q::from_integer(0.into()) } else { &r * (&one - &a) / (&one - &c) };
        let rhs = convex::mix(&c, &nu, &convex::mix(&alpha, &om, &ta).unwrap()).unwrap();
        laws.check("combining mixtures", lhs == rhs, || format!("instance {k}: r = {r}, p = {a}, q = {b}"));

        let qd = gen::distribution(&mut rng, n);
        let blend = p.blend(&r, &qd).expect("same length");
        let lhs = convex::mix(&r, &nested, &convex::nested_mixture(&qd, &pts).unwrap()).unwrap();
        laws.check("mixture of distributions", lhs == convex::nested_mixture(&blend, &pts).unwrap(), || {
            format!("instance {k}")
        });

        // Repeat the last point.
        let mut rep = pts.clone();
        rep.push(pts[n - 1].clone());
        let pr = gen::distribution(&mut rng, n + 1);
        let mut merged = pr.weights()[..n].to_vec();
        merged[n - 1] += &pr.weights()[n];
        let lhs = convex::nested_mixture(&pr, &rep).unwrap();
        let rhs = convex::nested_mixture(&Distribution::new(merged).unwrap(), &pts).unwrap();
        laws.check("repetitions", lhs == rhs, || format!("instance {k}"));

        // Split the last point into a mixture of two.
        let mut split = pts[..n - 1].to_vec();
        split.push(convex::mix(&r, &nu, &om).unwrap());
        let mut wide = pts[..n - 1].to_vec();
        wide.extend([nu.clone(), om.clone()]);
        let mut wts = p.weights()[..n - 1].to_vec();
        wts.push(&r * &p.weights()[n - 1]);
        wts.push((&one - &r) * &p.weights()[n - 1]);
        let lhs = convex::nested_mixture(&p, &split).unwrap();
        let rhs = convex::nested_mixture(&Distribution::new(wts).unwrap(), &wide).unwrap();
        laws.check("distributivity", lhs == rhs, || format!("instance {k}"));
    }
    for k in 0..hull_count {
        let dim = rng.gen_range(1..=2);
        let v = gen::point_spec(&mut rng, dim, 4);
        let w = gen::point_spec(&mut rng, dim, 4);
        let r = gen::probability(&mut rng, 5);
        let (ev, ew) = (convex::extreme_points(&v), convex::extreme_points(&w));
        let direct = convex::mix_specs(&r, &v, &w).unwrap();
        let via = convex::mix_specs(&r, &ev, &ew).unwrap();
        laws.check("hull of mixtures", convex::prob_equivalent(&direct, &via).unwrap(), || {
            format!("instance {k}: r = {r}, V = {v}, W = {w}")
        });

        let inflating = v.points().iter().all(|x| convex::hull_contains(&ev, x).unwrap());
        let union = v.union(&w).unwrap();
        let monotone = ev.points().iter().all(|x| convex::hull_contains(&union, x).unwrap());
        let idempotent = convex::extreme_points(&ev) == ev;
        let union_law = convex::prob_equivalent(&union, &ev.union(&ew).unwrap()).unwrap();
        laws.check("hull operator laws", inflating && monotone && idempotent && union_law, || {
            format!("instance {k}: V = {v}, W = {w}")
        });

        // Points inside (random mixtures) and anywhere (random points).
        let big = gen::point_spec(&mut rng, dim, 6);
        let inside = convex::weighted_sum(&gen::distribution(&mut rng, big.len()), big.points()).unwrap();
        for x in [inside, gen::point(&mut rng, dim), big.points()[0].clone()] {
            let fast = convex::hull_contains(&big, &x).unwrap();
            let slow = oracle::oracle_hull_contains(&big, &x).unwrap();
            laws.check("hull oracle agreement", fast == slow, || format!("instance {k}: {x} in {big}"));
        }
    }
    let mut r = laws.report();
    r.note(format!("{count} mixture instances, {hull_count} hull instances, seed {seed:#x}"));
    r
}

/// All suites at their acceptance sizes.
pub fn full_suite(seed: u64) -> Vec<(&'static str, Report)> {
    vec![
        ("preorder", preorder(seed, 500)),
        ("lumping", lumping_insertion(seed, 200)),
        ("decomposition", decomposition(seed, 100)),
        ("free composition", free_composition(seed, 200)),
        ("robustness", robustness(seed, 200)),
        ("convexity", convexity(seed, 1000, 200)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        for r in [
            preorder(7, 40),
            lumping_insertion(7, 30),
            decomposition(7, 20),
            free_composition(7, 30),
            robustness(7, 30),
            convexity(7, 100, 30),
        ] {
            assert!(r.ok(), "{r}");
        }
    }
}
