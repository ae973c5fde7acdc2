//! Brute-force reference implementations for small instances. Nothing here
//! calls the optimized paths; only the data types are shared.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::bits::BitSet;
use crate::convex::{PointSpec, RationalPoint, Q};
use crate::error::{Error, Result};
use crate::spec::{SpecMap, Specification, StateSpace};
use crate::theory::{ReachWitness, ResourceTheory, TransformationMonoid};

pub const MAX_REACH_STATES: usize = 6;
pub const MAX_COMMUTANT_ELEMENTS: usize = 4096;
pub const MAX_HULL_DIM: usize = 2;
pub const MAX_HULL_POINTS: usize = 6;

type Table = Vec<Vec<bool>>;

fn table_of(f: &SpecMap) -> Table {
    let n = f.target().size();
    (0..f.source().size())
        .map(|s| (0..n).map(|t| f.image_bits(s).contains(t)).collect())
        .collect()
}

/// Image of a membership vector under a table.
fn image(t: &Table, v: &[bool]) -> Vec<bool> {
    let mut out = vec![false; t.first().map_or(0, |r| r.len())];
    for (s, row) in t.iter().enumerate() {
        if v[s] {
            for (o, &b) in out.iter_mut().zip(row) {
                *o |= b;
            }
        }
    }
    out
}

/// `(f ∘ g)` as tables.
fn compose(f: &Table, g: &Table) -> Table {
    g.iter().map(|row| image(f, row)).collect()
}

fn members(v: &Specification) -> Vec<bool> {
    (0..v.space().size()).map(|i| v.contains(i)).collect()
}

/// Scans every element of the monoid in order for `f(V) ⊆ W`.
pub fn oracle_reaches(t: &ResourceTheory, v: &Specification, w: &Specification) -> Result<ReachWitness> {
    let n = t.space().size();
    if n > MAX_REACH_STATES {
        return Err(Error::TooLarge(format!("{n} states (limit {MAX_REACH_STATES})")));
    }
    if v.space() != t.space() || w.space() != t.space() {
        return Err(Error::SpaceMismatch("oracle reaches".into()));
    }
    let (vm, wm) = (members(v), members(w));
    for (i, f) in t.monoid().elements().iter().enumerate() {
        let img = image(&table_of(f), &vm);
        if img.iter().zip(&wm).all(|(&a, &b)| !a || b) {
            return Ok(ReachWitness {
                found: true,
                index: Some(i),
                map: Some(f.clone()),
            });
        }
    }
    Ok(ReachWitness {
        found: false,
        index: None,
        map: None,
    })
}

/// The set of tables generated by `gens` and the identity, closed under all
/// pairwise products until nothing new appears.
pub fn oracle_closure(space: &StateSpace, gens: &[SpecMap]) -> Result<BTreeSet<Table>> {
    let n = space.size();
    if n > MAX_REACH_STATES {
        return Err(Error::TooLarge(format!("{n} states (limit {MAX_REACH_STATES})")));
    }
    let id: Table = (0..n).map(|s| (0..n).map(|t| s == t).collect()).collect();
    let mut set: BTreeSet<Table> = gens.iter().map(table_of).collect();
    set.insert(id);
    loop {
        let cur: Vec<Table> = set.iter().cloned().collect();
        let mut grew = false;
        for f in &cur {
            for g in &cur {
                if set.insert(compose(f, g)) {
                    grew = true;
                }
            }
        }
        if set.len() > MAX_COMMUTANT_ELEMENTS {
            return Err(Error::TooLarge(format!("closure passed {MAX_COMMUTANT_ELEMENTS} elements")));
        }
        if !grew {
            return Ok(set);
        }
    }
}

/// Elements of `T` commuting with every member of `A`, by a full pairwise
/// scan of composed tables.
pub fn oracle_commutant(t: &TransformationMonoid, a: &BitSet) -> Result<BitSet> {
    let k = t.len();
    if k > MAX_COMMUTANT_ELEMENTS {
        return Err(Error::TooLarge(format!("{k} elements (limit {MAX_COMMUTANT_ELEMENTS})")));
    }
    let tables: Vec<Table> = t.elements().iter().map(table_of).collect();
    let mut out = BitSet::empty(k);
    for g in 0..k {
        let ok = a
            .iter()
            .all(|f| compose(&tables[f], &tables[g]) == compose(&tables[g], &tables[f]));
        if ok {
            out.insert(g);
        }
    }
    Ok(out)
}

fn det2(a: (&Q, &Q), b: (&Q, &Q)) -> Q {
    a.0 * b.1 - a.1 * b.0
}

/// Membership by case analysis: an interval in one dimension; in two, a
/// point, some segment or some triangle of the points must contain `x`.
pub fn oracle_hull_contains(v: &PointSpec, x: &RationalPoint) -> Result<bool> {
    let d = v.dim();
    if d > MAX_HULL_DIM || v.len() > MAX_HULL_POINTS {
        return Err(Error::TooLarge(format!(
            "dimension {d} with {} points (limit {MAX_HULL_DIM}, {MAX_HULL_POINTS})",
            v.len()
        )));
    }
    if x.dim() != d {
        return Err(Error::DimMismatch {
            expected: d,
            found: x.dim(),
        });
    }
    let pts = v.points();
    match d {
        0 => Ok(true),
        1 => {
            let c = |p: &RationalPoint| p.coords()[0].clone();
            let lo = pts.iter().map(c).min().expect("nonempty");
            let hi = pts.iter().map(c).max().expect("nonempty");
            Ok(lo <= x.coords()[0] && x.coords()[0] <= hi)
        }
        _ => {
            let xy = |p: &RationalPoint| (p.coords()[0].clone(), p.coords()[1].clone());
            let x = xy(x);
            let ps: Vec<(Q, Q)> = pts.iter().map(xy).collect();
            let sub = |a: &(Q, Q), b: &(Q, Q)| (&a.0 - &b.0, &a.1 - &b.1);
            if ps.contains(&x) {
                return Ok(true);
            }
            for i in 0..ps.len() {
                for j in i + 1..ps.len() {
                    // On segment: collinear and within the bounding box.
                    let (u, w) = (sub(&ps[j], &ps[i]), sub(&x, &ps[i]));
                    if det2((&u.0, &u.1), (&w.0, &w.1)).is_zero() {
                        let dot = &u.0 * &w.0 + &u.1 * &w.1;
                        let len = &u.0 * &u.0 + &u.1 * &u.1;
                        if !dot.is_negative() && dot <= len {
                            return Ok(true);
                        }
                    }
                    for k in j + 1..ps.len() {
                        let (e1, e2) = (sub(&ps[j], &ps[i]), sub(&ps[k], &ps[i]));
                        let den = det2((&e1.0, &e1.1), (&e2.0, &e2.1));
                        if den.is_zero() {
                            continue;
                        }
                        // Barycentric coordinates by Cramer's rule.
                        let b1 = det2((&w.0, &w.1), (&e2.0, &e2.1)) / &den;
                        let b2 = det2((&e1.0, &e1.1), (&w.0, &w.1)) / &den;
                        let b0 = Q::from_integer(1.into()) - &b1 - &b2;
                        if !b0.is_negative() && !b1.is_negative() && !b2.is_negative() {
                            return Ok(true);
                        }
                    }
                }
            }
            Ok(false)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::q;

    #[test]
    fn reach_examples() {
        let s = StateSpace::new(["a", "b"]).unwrap();
        let id = ResourceTheory::new(TransformationMonoid::close(&s, vec![], 1).unwrap());
        let a = Specification::from_labels(&s, ["a"]).unwrap();
        let b = Specification::from_labels(&s, ["b"]).unwrap();
        assert!(oracle_reaches(&id, &a, &a).unwrap().found);
        assert!(!oracle_reaches(&id, &a, &b).unwrap().found);
        let big = StateSpace::bit_strings(3);
        let t = ResourceTheory::new(TransformationMonoid::close(&big, vec![], 1).unwrap());
        assert!(matches!(oracle_reaches(&t, &big.full(), &big.full()), Err(Error::TooLarge(_))));
    }

    #[test]
    fn closure_matches_size() {
        let s = StateSpace::new(["a", "b", "c"]).unwrap();
        let all = oracle_closure(&s, &[]).unwrap();
        assert_eq!(all.len(), 1);
        let cyc = SpecMap::endo_from_fn(&s, |i| (i + 1) % 3);
        let swap = SpecMap::endo_from_fn(&s, |i| [1, 0, 2][i]);
        assert_eq!(oracle_closure(&s, &[cyc, swap]).unwrap().len(), 6);
    }

    #[test]
    fn commutant_examples() {
        let s = StateSpace::bit_strings(2);
        let m = TransformationMonoid::all_functions(&s, 1000).unwrap();
        let bit1: Vec<SpecMap> = (0..4)
            .map(|k| {
                SpecMap::endo_from_fn(&s, move |i| {
                    let hi = i >> 1;
                    let v = [0, 1, hi, 1 - hi][k];
                    (v << 1) | (i & 1)
                })
            })
            .collect();
        let a = m.indices_of(bit1.iter()).unwrap();
        let c = oracle_commutant(&m, &a).unwrap();
        assert_eq!(c.count(), 4);
        for i in c.iter() {
            let f = m.element(i);
            assert!((0..4).all(|x| f.image_bits(x).iter().all(|y| y >> 1 == x >> 1)));
        }
        let id = BitSet::singleton(m.len(), 0);
        assert!(oracle_commutant(&m, &id).unwrap().is_full());
        let ab = StateSpace::new(["a", "b"]).unwrap();
        let cyc = TransformationMonoid::close(&ab, vec![SpecMap::endo_from_fn(&ab, |i| 1 - i)], 4).unwrap();
        assert!(oracle_commutant(&cyc, &BitSet::full(cyc.len())).unwrap().is_full());
    }

    #[test]
    fn hull_examples() {
        let unit = PointSpec::line(&[0, 1]).unwrap();
        assert!(oracle_hull_contains(&unit, &RationalPoint::new(vec![q(1, 3)])).unwrap());
        assert!(oracle_hull_contains(&unit, &RationalPoint::from_ints(&[1])).unwrap());
        assert!(!oracle_hull_contains(&unit, &RationalPoint::from_ints(&[2])).unwrap());
        let sq = PointSpec::new(
            [[0, 0], [1, 0], [0, 1], [1, 1]].iter().map(|c| RationalPoint::from_ints(c)).collect(),
        )
        .unwrap();
        assert!(!oracle_hull_contains(&sq, &RationalPoint::from_ints(&[2, 2])).unwrap());
        assert!(oracle_hull_contains(&sq, &RationalPoint::new(vec![q(1, 2), q(1, 2)])).unwrap());
        let seg = PointSpec::new(vec![RationalPoint::from_ints(&[0, 0]), RationalPoint::from_ints(&[2, 2])]).unwrap();
        assert!(oracle_hull_contains(&seg, &RationalPoint::from_ints(&[1, 1])).unwrap());
        assert!(!oracle_hull_contains(&seg, &RationalPoint::from_ints(&[3, 3])).unwrap());
        let cube = PointSpec::new(vec![RationalPoint::from_ints(&[0, 0, 0])]).unwrap();
        assert!(matches!(
            oracle_hull_contains(&cube, &RationalPoint::from_ints(&[0, 0, 0])),
            Err(Error::TooLarge(_))
        ));
    }
}
