//! Exact rational convex structures on finite point sets.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::report::Report;

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `n`, `-n` or `n/d`.
pub fn parse_q(s: &str) -> Option<Q> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.parse::<BigInt>().ok()?, d.parse::<BigInt>().ok()?),
        None => (s.parse::<BigInt>().ok()?, BigInt::one()),
    };
    (!d.is_zero()).then(|| Q::new(n, d))
}

fn check_probability(p: &Q) -> Result<()> {
    if p.is_negative() || p > &Q::one() {
        return Err(Error::BadProbability(p.to_string()));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalPoint {
    coords: Vec<Q>,
}

impl RationalPoint {
    pub fn new(coords: Vec<Q>) -> Self {
        RationalPoint { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        RationalPoint::new(coords.iter().map(|&c| q(c, 1)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        RationalPoint::new(vec![Q::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Q] {
        &self.coords
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::DimMismatch {
                expected: dim,
                found: self.dim(),
            });
        }
        Ok(())
    }

    fn scaled(&self, s: &Q) -> RationalPoint {
        RationalPoint::new(self.coords.iter().map(|c| c * s).collect())
    }

    fn plus(&self, other: &RationalPoint) -> RationalPoint {
        RationalPoint::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Nonnegative rational weights summing to exactly one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distribution {
    weights: Vec<Q>,
}

impl Distribution {
    pub fn new(weights: Vec<Q>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::BadDistribution("no weights".into()));
        }
        if let Some(w) = weights.iter().find(|w| w.is_negative()) {
            return Err(Error::BadDistribution(format!("negative weight {w}")));
        }
        let total: Q = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::BadDistribution(format!("weights sum to {total}")));
        }
        Ok(Distribution { weights })
    }

    pub fn point_mass(n: usize, at: usize) -> Self {
        let weights = (0..n).map(|i| if i == at { Q::one() } else { Q::zero() }).collect();
        Distribution { weights }
    }

    pub fn weights(&self) -> &[Q] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `r·self + (1−r)·other`.
    pub fn blend(&self, r: &Q, other: &Distribution) -> Result<Distribution> {
        check_probability(r)?;
        if self.len() != other.len() {
            return Err(Error::LengthMismatch(other.len(), self.len()));
        }
        let s = Q::one() - r;
        Ok(Distribution {
            weights: self.weights.iter().zip(&other.weights).map(|(a, b)| r * a + &s * b).collect(),
        })
    }

    /// The coefficients `p′_k` of the nested form. When the remaining mass
    /// is zero the coefficient is irrelevant and taken to be zero.
    pub fn nested_coefficients(&self) -> Vec<Q> {
        let mut rest = Q::one();
        let mut out = Vec::with_capacity(self.len());
        for p in &self.weights {
            let c = if rest.is_zero() { Q::zero() } else { p / &rest };
            rest *= Q::one() - &c;
            out.push(c);
        }
        out
    }
}

/// A finite nonempty generating set, sorted and without repeats.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointSpec {
    points: Vec<RationalPoint>,
}

impl PointSpec {
    pub fn new(mut points: Vec<RationalPoint>) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptySpecification)?;
        let dim = first.dim();
        for p in &points {
            p.check_dim(dim)?;
        }
        points.sort();
        points.dedup();
        Ok(PointSpec { points })
    }

    /// One-dimensional points from integers.
    pub fn line(values: &[i64]) -> Result<Self> {
        PointSpec::new(values.iter().map(|&v| RationalPoint::from_ints(&[v])).collect())
    }

    pub fn points(&self) -> &[RationalPoint] {
        &self.points
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &RationalPoint) -> bool {
        self.points.binary_search(p).is_ok()
    }

    pub fn union(&self, other: &PointSpec) -> Result<PointSpec> {
        PointSpec::new(self.points.iter().chain(&other.points).cloned().collect())
    }

    fn check_dim(&self, other: &PointSpec) -> Result<()> {
        other.points[0].check_dim(self.dim())
    }
}

impl fmt::Display for PointSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.points.iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// `p·x + (1−p)·y`.
pub fn mix(p: &Q, x: &RationalPoint, y: &RationalPoint) -> Result<RationalPoint> {
    check_probability(p)?;
    y.check_dim(x.dim())?;
    Ok(x.scaled(p).plus(&y.scaled(&(Q::one() - p))))
}

/// `∑ p_i ν_i`.
pub fn weighted_sum(dist: &Distribution, points: &[RationalPoint]) -> Result<RationalPoint> {
    if dist.len() != points.len() {
        return Err(Error::LengthMismatch(dist.len(), points.len()));
    }
    let dim = points[0].dim();
    let mut acc = RationalPoint::zero(dim);
    for (w, p) in dist.weights.iter().zip(points) {
        p.check_dim(dim)?;
        acc = acc.plus(&p.scaled(w));
    }
    Ok(acc)
}

/// `f_{p′_1}(ν_1, f_{p′_2}(ν_2, … f_{p′_{n−1}}(ν_{n−1}, ν_n)))`.
pub fn nested_mixture(dist: &Distribution, points: &[RationalPoint]) -> Result<RationalPoint> {
    if dist.len() != points.len() {
        return Err(Error::LengthMismatch(dist.len(), points.len()));
    }
    let coeffs = dist.nested_coefficients();
    let n = points.len();
    let mut acc = points[n - 1].clone();
    for k in (0..n - 1).rev() {
        acc = mix(&coeffs[k], &points[k], &acc)?;
    }
    Ok(acc)
}

/// `{ mix(p, ν, ω) : ν ∈ V, ω ∈ W }`.
pub fn mix_specs(p: &Q, v: &PointSpec, w: &PointSpec) -> Result<PointSpec> {
    v.check_dim(w)?;
    let mut out = Vec::with_capacity(v.len() * w.len());
    for a in &v.points {
        for b in &w.points {
            out.push(mix(p, a, b)?);
        }
    }
    PointSpec::new(out)
}

/// Weights of `points` that mix to `x`, if any. Exact phase-one simplex
/// with Bland's rule on `∑ λ_i ν_i = x, ∑ λ_i = 1, λ ≥ 0`.
pub fn hull_weights(points: &[RationalPoint], x: &RationalPoint) -> Result<Option<Distribution>> {
    let n = points.len();
    if n == 0 {
        return Err(Error::EmptySpecification);
    }
    let d = points[0].dim();
    x.check_dim(d)?;
    for p in points {
        p.check_dim(d)?;
    }
    let m = d + 1;
    let cols = n + m;
    // Rows: coordinates, then normalisation. Artificial columns n..n+m.
    let mut t: Vec<Vec<Q>> = Vec::with_capacity(m + 1);
    for r in 0..m {
        let mut row = vec![Q::zero(); cols + 1];
        for (j, p) in points.iter().enumerate() {
            row[j] = if r < d { p.coords[r].clone() } else { Q::one() };
        }
        row[cols] = if r < d { x.coords[r].clone() } else { Q::one() };
        if row[cols].is_negative() {
            for c in row.iter_mut() {
                *c = -c.clone();
            }
        }
        row[n + r] = Q::one();
        t.push(row);
    }
    // Reduced costs of the sum of artificials.
    let mut z = vec![Q::zero(); cols + 1];
    for row in &t {
        for j in 0..n {
            z[j] -= &row[j];
        }
        z[cols] -= &row[cols];
    }
    t.push(z);
    let mut basis: Vec<usize> = (n..cols).collect();
    loop {
        let Some(enter) = (0..cols).find(|&j| t[m][j].is_negative()) else {
            break;
        };
        let mut leave: Option<usize> = None;
        for r in 0..m {
            if !t[r][enter].is_positive() {
                continue;
            }
            let ratio = &t[r][cols] / &t[r][enter];
            leave = match leave {
                None => Some(r),
                Some(l) => {
                    let best = &t[l][cols] / &t[l][enter];
                    if ratio < best || (ratio == best && basis[r] < basis[l]) {
                        Some(r)
                    } else {
                        Some(l)
                    }
                }
            };
        }
        // Phase one is bounded below by zero, so some row always qualifies.
        let r = leave.expect("phase one is bounded");
        let piv = t[r][enter].clone();
        for c in t[r].iter_mut() {
            *c /= &piv;
        }
        let pivot_row = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != r && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (c, p) in row.iter_mut().zip(&pivot_row) {
                    *c -= &f * p;
                }
            }
        }
        basis[r] = enter;
    }
    if !t[m][cols].is_zero() {
        return Ok(None);
    }
    let mut weights = vec![Q::zero(); n];
    for (r, &b) in basis.iter().enumerate() {
        if b < n {
            weights[b] = t[r][cols].clone();
        }
    }
    let dist = Distribution::new(weights).expect("simplex solution is a distribution");
    debug_assert_eq!(weighted_sum(&dist, points).ok().as_ref(), Some(x));
    Ok(Some(dist))
}

pub fn hull_contains(v: &PointSpec, x: &RationalPoint) -> Result<bool> {
    Ok(hull_weights(&v.points, x)?.is_some())
}

/// The points of `V` that are not mixtures of the others.
pub fn extreme_points(v: &PointSpec) -> PointSpec {
    let keep: Vec<RationalPoint> = (0..v.len())
        .filter(|&i| {
            let others: Vec<RationalPoint> =
                v.points.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, p)| p.clone()).collect();
            others.is_empty() || hull_weights(&others, &v.points[i]).expect("same dimension").is_none()
        })
        .map(|i| v.points[i].clone())
        .collect();
    PointSpec::new(keep).expect("a nonempty set has an extreme point")
}

/// Equal convex hulls.
pub fn prob_equivalent(v: &PointSpec, w: &PointSpec) -> Result<bool> {
    v.check_dim(w)?;
    Ok(extreme_points(v) == extreme_points(w))
}

/// A map between rational vector spaces.
pub trait PointMap {
    fn in_dim(&self) -> usize;
    fn out_dim(&self) -> usize;
    fn apply_point(&self, x: &RationalPoint) -> Result<RationalPoint>;

    fn apply_spec(&self, v: &PointSpec) -> Result<PointSpec> {
        PointSpec::new(v.points.iter().map(|p| self.apply_point(p)).collect::<Result<_>>()?)
    }
}

/// `x ↦ Mx + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    matrix: Vec<Vec<Q>>,
    offset: Vec<Q>,
    in_dim: usize,
}

impl AffineMap {
    pub fn new(matrix: Vec<Vec<Q>>, offset: Vec<Q>, in_dim: usize) -> Result<Self> {
        if matrix.len() != offset.len() {
            return Err(Error::DimMismatch {
                expected: matrix.len(),
                found: offset.len(),
            });
        }
        if let Some(row) = matrix.iter().find(|r| r.len() != in_dim) {
            return Err(Error::DimMismatch {
                expected: in_dim,
                found: row.len(),
            });
        }
        Ok(AffineMap { matrix, offset, in_dim })
    }

    pub fn identity(dim: usize) -> Self {
        let matrix = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
            .collect();
        AffineMap {
            matrix,
            offset: vec![Q::zero(); dim],
            in_dim: dim,
        }
    }

    pub fn constant(in_dim: usize, value: &RationalPoint) -> Self {
        AffineMap {
            matrix: vec![vec![Q::zero(); in_dim]; value.dim()],
            offset: value.coords.clone(),
            in_dim,
        }
    }

    pub fn matrix(&self) -> &[Vec<Q>] {
        &self.matrix
    }

    pub fn offset(&self) -> &[Q] {
        &self.offset
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AffineMap) -> Result<AffineMap> {
        if inner.out_dim() != self.in_dim {
            return Err(Error::DimMismatch {
                expected: self.in_dim,
                found: inner.out_dim(),
            });
        }
        let matrix = self
            .matrix
            .iter()
            .map(|row| {
                (0..inner.in_dim)
                    .map(|j| row.iter().zip(&inner.matrix).map(|(a, r)| a * &r[j]).sum())
                    .collect()
            })
            .collect();
        let offset = self
            .matrix
            .iter()
            .zip(&self.offset)
            .map(|(row, b)| row.iter().zip(&inner.offset).map(|(a, c)| a * c).sum::<Q>() + b)
            .collect();
        Ok(AffineMap {
            matrix,
            offset,
            in_dim: inner.in_dim,
        })
    }
}

impl PointMap for AffineMap {
    fn in_dim(&self) -> usize {
        self.in_dim
    }

    fn out_dim(&self) -> usize {
        self.matrix.len()
    }

    fn apply_point(&self, x: &RationalPoint) -> Result<RationalPoint> {
        x.check_dim(self.in_dim)?;
        Ok(RationalPoint::new(
            self.matrix
                .iter()
                .zip(&self.offset)
                .map(|(row, b)| row.iter().zip(&x.coords).map(|(a, c)| a * c).sum::<Q>() + b)
                .collect(),
        ))
    }
}

/// Squares every coordinate; the standard map that is not affine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoordinateSquare {
    pub dim: usize,
}

impl PointMap for CoordinateSquare {
    fn in_dim(&self) -> usize {
        self.dim
    }

    fn out_dim(&self) -> usize {
        self.dim
    }

    fn apply_point(&self, x: &RationalPoint) -> Result<RationalPoint> {
        x.check_dim(self.dim)?;
        Ok(RationalPoint::new(x.coords.iter().map(|c| c * c).collect()))
    }
}

/// Entrywise `p·f + (1−p)·g`, so `c_p(f, g)(x) = mix(p, f(x), g(x))`.
pub fn mix_maps(p: &Q, f: &AffineMap, g: &AffineMap) -> Result<AffineMap> {
    check_probability(p)?;
    if f.in_dim != g.in_dim || f.out_dim() != g.out_dim() {
        return Err(Error::DimMismatch {
            expected: f.out_dim(),
            found: g.out_dim(),
        });
    }
    let s = Q::one() - p;
    let blend = |a: &Q, b: &Q| p * a + &s * b;
    Ok(AffineMap {
        matrix: f
            .matrix
            .iter()
            .zip(&g.matrix)
            .map(|(r, t)| r.iter().zip(t).map(|(a, b)| blend(a, b)).collect())
            .collect(),
        offset: f.offset.iter().zip(&g.offset).map(|(a, b)| blend(a, b)).collect(),
        in_dim: f.in_dim,
    })
}

/// `g(mix(p, ν, ω)) = mix(p, g(ν), g(ω))` for every sampled `p`, `ν ∈ V`,
/// `ω ∈ W`, and every image of such a mixture lies in the hull of `g(V ∪ W)`.
pub fn check_convexity_preserving(g: &dyn PointMap, v: &PointSpec, w: &PointSpec, ps: &[Q]) -> Result<Report> {
    v.check_dim(w)?;
    if v.dim() != g.in_dim() {
        return Err(Error::DimMismatch {
            expected: g.in_dim(),
            found: v.dim(),
        });
    }
    let image = g.apply_spec(&v.union(w)?)?;
    let mut preserved = None;
    let mut in_hull = None;
    for p in ps {
        for a in &v.points {
            for b in &w.points {
                let m = mix(p, a, b)?;
                let gm = g.apply_point(&m)?;
                if preserved.is_none() {
                    let mg = mix(p, &g.apply_point(a)?, &g.apply_point(b)?)?;
                    if gm != mg {
                        preserved = Some(format!("p = {p}, ν = {a}, ω = {b}: g(mix) = {gm}, mix of images = {mg}"));
                    }
                }
                if in_hull.is_none() && !hull_contains(&image, &gm)? {
                    in_hull = Some(format!("g(mix({p}, {a}, {b})) = {gm} outside the hull of {image}"));
                }
            }
        }
    }
    let mut r = Report::new();
    r.push("mixtures preserved", preserved);
    r.push("images stay in hull", in_hull);
    Ok(r)
}

/// Doubly-convex laws for a family of affine endomorphisms: `c_p(f, f) = f`,
/// `c_p(f, g)(V) ∼ mix(p, f(V), g(V))`, and compatibility of `c_p` with
/// composition on either side.
pub fn check_doubly_convex(maps: &[AffineMap], domain: &[PointSpec], ps: &[Q]) -> Result<Report> {
    let Some(first) = maps.first() else {
        return Ok(Report::new());
    };
    let d = first.in_dim;
    for f in maps {
        if f.in_dim != d || f.out_dim() != d {
            return Err(Error::DimMismatch {
                expected: d,
                found: f.out_dim(),
            });
        }
    }
    for v in domain {
        if v.dim() != d {
            return Err(Error::DimMismatch { expected: d, found: v.dim() });
        }
    }
    let mut idem = None;
    let mut equiv = None;
    let mut left = None;
    let mut right = None;
    for p in ps {
        for (i, f) in maps.iter().enumerate() {
            if idem.is_none() && mix_maps(p, f, f)? != *f {
                idem = Some(format!("map {i}, p = {p}"));
            }
            for (j, g) in maps.iter().enumerate() {
                let c = mix_maps(p, f, g)?;
                for v in domain {
                    if equiv.is_none() {
                        let lhs = c.apply_spec(v)?;
                        let rhs = mix_specs(p, &f.apply_spec(v)?, &g.apply_spec(v)?)?;
                        if !prob_equivalent(&lhs, &rhs)? {
                            equiv = Some(format!("maps {i}, {j}, p = {p}, V = {v}: {lhs} vs {rhs}"));
                        }
                    }
                }
                for (k, h) in maps.iter().enumerate() {
                    if left.is_none() && mix_maps(p, &f.compose(g)?, &f.compose(h)?)? != f.compose(&mix_maps(p, g, h)?)? {
                        left = Some(format!("maps {i}, {j}, {k}, p = {p}"));
                    }
                    if right.is_none() && mix_maps(p, &g.compose(f)?, &h.compose(f)?)? != mix_maps(p, g, h)?.compose(f)? {
                        right = Some(format!("maps {i}, {j}, {k}, p = {p}"));
                    }
                }
            }
        }
    }
    let mut r = Report::new();
    r.push("mixing a map with itself", idem);
    r.push("mixed map equivalent to mixed images", equiv);
    r.push("composition on the left", left);
    r.push("composition on the right", right);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(v: &[(i64, i64)]) -> RationalPoint {
        RationalPoint::new(v.iter().map(|&(n, d)| q(n, d)).collect())
    }

    #[test]
    fn mix_examples() {
        let x = RationalPoint::from_ints(&[0]);
        let y = RationalPoint::from_ints(&[1]);
        assert_eq!(mix(&q(1, 1), &x, &y).unwrap(), x);
        assert_eq!(mix(&q(1, 3), &y, &y).unwrap(), y);
        assert_eq!(mix(&q(1, 2), &x, &y).unwrap(), pt(&[(1, 2)]));
        assert!(matches!(mix(&q(3, 2), &x, &y), Err(Error::BadProbability(_))));
        let z = RationalPoint::from_ints(&[0, 0]);
        assert!(matches!(mix(&q(1, 2), &x, &z), Err(Error::DimMismatch { .. })));
    }

    #[test]
    fn nested_examples() {
        let pts: Vec<RationalPoint> = (0..3).map(|i| RationalPoint::from_ints(&[i])).collect();
        let p = Distribution::new(vec![q(1, 2), q(1, 4), q(1, 4)]).unwrap();
        assert_eq!(nested_mixture(&p, &pts).unwrap(), pt(&[(3, 4)]));
        assert_eq!(weighted_sum(&p, &pts).unwrap(), pt(&[(3, 4)]));
        let first = Distribution::new(vec![q(1, 1), q(0, 1), q(0, 1)]).unwrap();
        assert_eq!(nested_mixture(&first, &pts).unwrap(), pts[0]);
        let last = Distribution::new(vec![q(0, 1), q(0, 1), q(1, 1)]).unwrap();
        assert_eq!(nested_mixture(&last, &pts).unwrap(), pts[2]);
        assert_eq!(nested_mixture(&last, &pts[..2]), Err(Error::LengthMismatch(3, 2)));
        assert!(Distribution::new(vec![q(1, 2)]).is_err());
        assert!(Distribution::new(vec![q(3, 2), q(-1, 2)]).is_err());
    }

    #[test]
    fn spec_mixing() {
        let v = PointSpec::line(&[0, 1]).unwrap();
        let w = PointSpec::line(&[2]).unwrap();
        let m = mix_specs(&q(1, 2), &v, &w).unwrap();
        assert_eq!(m, PointSpec::new(vec![pt(&[(1, 1)]), pt(&[(3, 2)])]).unwrap());
        assert_eq!(mix_specs(&q(1, 1), &v, &w).unwrap(), v);
        let vv = mix_specs(&q(1, 3), &v, &v).unwrap();
        assert!(vv.points().iter().all(|p| hull_contains(&v, p).unwrap()));
        assert_ne!(vv, v);
    }

    #[test]
    fn hulls() {
        let v = PointSpec::new(vec![pt(&[(0, 1)]), pt(&[(1, 2)]), pt(&[(1, 1)])]).unwrap();
        assert_eq!(extreme_points(&v), PointSpec::line(&[0, 1]).unwrap());
        let one = PointSpec::line(&[5]).unwrap();
        assert_eq!(extreme_points(&one), one);
        let sq = PointSpec::new(vec![
            RationalPoint::from_ints(&[0, 0]),
            RationalPoint::from_ints(&[1, 0]),
            RationalPoint::from_ints(&[0, 1]),
            pt(&[(1, 4), (1, 4)]),
        ])
        .unwrap();
        assert_eq!(extreme_points(&sq).len(), 3);
        assert!(!extreme_points(&sq).contains(&pt(&[(1, 4), (1, 4)])));

        let unit = PointSpec::line(&[0, 1]).unwrap();
        let w = hull_weights(unit.points(), &pt(&[(1, 3)])).unwrap().unwrap();
        assert_eq!(w.weights(), [q(2, 3), q(1, 3)]);
        assert!(hull_contains(&unit, &pt(&[(1, 1)])).unwrap());
        assert!(!hull_contains(&unit, &pt(&[(2, 1)])).unwrap());
        assert!(!hull_contains(&sq, &pt(&[(1, 2), (3, 4)])).unwrap());
        assert!(hull_contains(&sq, &pt(&[(1, 2), (1, 2)])).unwrap());
        assert!(matches!(hull_contains(&sq, &pt(&[(1, 2)])), Err(Error::DimMismatch { .. })));

        assert!(prob_equivalent(&unit, &v).unwrap());
        assert!(!prob_equivalent(&unit, &PointSpec::line(&[0, 2]).unwrap()).unwrap());
        assert!(prob_equivalent(&sq, &sq).unwrap());
    }

    #[test]
    fn degenerate_hull() {
        // Collinear points in the plane and repeated coordinates.
        let v = PointSpec::new(vec![
            RationalPoint::from_ints(&[0, 0]),
            RationalPoint::from_ints(&[1, 1]),
            RationalPoint::from_ints(&[2, 2]),
        ])
        .unwrap();
        assert_eq!(extreme_points(&v).len(), 2);
        assert!(hull_contains(&v, &pt(&[(3, 2), (3, 2)])).unwrap());
        assert!(!hull_contains(&v, &pt(&[(1, 1), (0, 1)])).unwrap());
    }

    #[test]
    fn convexity_preservation() {
        let v = PointSpec::line(&[0, 1]).unwrap();
        let ps = [q(0, 1), q(1, 3), q(1, 2), q(1, 1)];
        let g = AffineMap::new(vec![vec![q(2, 1)]], vec![q(-1, 1)], 1).unwrap();
        assert!(check_convexity_preserving(&g, &v, &v, &ps).unwrap().ok());
        assert!(check_convexity_preserving(&AffineMap::identity(1), &v, &v, &ps).unwrap().ok());
        let r = check_convexity_preserving(&CoordinateSquare { dim: 1 }, &v, &v, &[q(1, 2)]).unwrap();
        let c = r.get("mixtures preserved").unwrap();
        assert!(!c.ok);
        assert!(c.witness.as_ref().unwrap().starts_with("p = 1/2"));
    }

    #[test]
    fn affine_algebra() {
        let f = AffineMap::new(vec![vec![q(1, 1), q(2, 1)]], vec![q(1, 1)], 2).unwrap();
        let g = AffineMap::new(vec![vec![q(1, 1)], vec![q(-1, 1)]], vec![q(0, 1), q(3, 1)], 1).unwrap();
        let fg = f.compose(&g).unwrap();
        let x = RationalPoint::from_ints(&[5]);
        assert_eq!(fg.apply_point(&x).unwrap(), f.apply_point(&g.apply_point(&x).unwrap()).unwrap());
        assert!(g.compose(&g).is_err());
        assert!(AffineMap::new(vec![vec![q(1, 1)]], vec![], 1).is_err());
    }

    #[test]
    fn doubly_convex_examples() {
        let id = AffineMap::identity(1);
        let zero = AffineMap::constant(1, &RationalPoint::from_ints(&[0]));
        let half = q(1, 2);
        assert_eq!(mix_maps(&half, &id, &id).unwrap(), id);
        let c = mix_maps(&half, &id, &zero).unwrap();
        let v = PointSpec::line(&[1]).unwrap();
        assert_eq!(c.apply_spec(&v).unwrap(), PointSpec::new(vec![pt(&[(1, 2)])]).unwrap());
        let r = check_doubly_convex(&[id.clone(), zero.clone()], &[v], std::slice::from_ref(&half)).unwrap();
        assert!(r.ok(), "{r}");

        // Free states: constant witnesses to ν and ω mix to a witness for
        // their mixture.
        let nu = RationalPoint::from_ints(&[2]);
        let om = RationalPoint::from_ints(&[6]);
        let f = AffineMap::constant(1, &nu);
        let g = AffineMap::constant(1, &om);
        let all = PointSpec::line(&[-3, 0, 9]).unwrap();
        let m = mix_maps(&q(1, 4), &f, &g).unwrap().apply_spec(&all).unwrap();
        assert_eq!(m, PointSpec::new(vec![mix(&q(1, 4), &nu, &om).unwrap()]).unwrap());

        // Negation mixed with the identity collapses {0,1}, while the
        // pairwise mixtures of the images spread out.
        let neg = AffineMap::new(vec![vec![q(-1, 1)]], vec![q(0, 1)], 1).unwrap();
        let r = check_doubly_convex(&[id, neg], &[PointSpec::line(&[0, 1]).unwrap()], &[half]).unwrap();
        assert!(!r.get("mixed map equivalent to mixed images").unwrap().ok);
        assert!(r.get("composition on the left").unwrap().ok);
        assert!(r.get("composition on the right").unwrap().ok);
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_q("3/4"), Some(q(3, 4)));
        assert_eq!(parse_q("-2"), Some(q(-2, 1)));
        assert_eq!(parse_q("1/0"), None);
        assert_eq!(parse_q("x"), None);
    }
}
