use std::fmt;

use crate::error::{Error, Result};
use crate::interval::{Endpoint, Interval, IntervalSet};
use crate::rat::Rat;

/// A piecewise-linear order-automorphism of ℚ with slope-1 tails outside the
/// anchor hull. Canonical form keeps exactly the slope-change points; a pure
/// translation is normalized to a single anchor at x = 0; the identity is the
/// empty anchor list. Equality of canonical forms is equality of maps.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PLMap {
    anchors: Vec<(Rat, Rat)>,
}

impl PLMap {
    pub fn identity() -> PLMap {
        PLMap { anchors: Vec::new() }
    }

    pub fn translation(c: Rat) -> PLMap {
        if c.is_zero() {
            PLMap::identity()
        } else {
            PLMap { anchors: vec![(Rat::zero(), c)] }
        }
    }

    /// Build from anchor pairs; both coordinate sequences must be strictly
    /// increasing. The result is canonicalized.
    pub fn from_anchors(pairs: Vec<(Rat, Rat)>) -> Result<PLMap> {
        for w in pairs.windows(2) {
            if w[0].0 >= w[1].0 || w[0].1 >= w[1].1 {
                return Err(Error::NonMonotonicInput);
            }
        }
        Ok(PLMap::canonical(pairs))
    }

    /// Keep exactly the anchors where the slope changes; normalize a pure
    /// translation to its anchor at 0.
    fn canonical(pairs: Vec<(Rat, Rat)>) -> PLMap {
        if pairs.is_empty() {
            return PLMap::identity();
        }
        let m = pairs.len();
        let slope = |i: usize, j: usize| -> Rat {
            (&pairs[j].1 - &pairs[i].1) / (&pairs[j].0 - &pairs[i].0)
        };
        let mut kept = Vec::with_capacity(m);
        for (i, pair) in pairs.iter().enumerate() {
            let left = if i == 0 { Rat::one() } else { slope(i - 1, i) };
            let right = if i == m - 1 { Rat::one() } else { slope(i, i + 1) };
            if left != right {
                kept.push(pair.clone());
            }
        }
        if kept.is_empty() {
            let c = &pairs[0].1 - &pairs[0].0;
            return PLMap::translation(c);
        }
        PLMap { anchors: kept }
    }

    pub fn anchors(&self) -> &[(Rat, Rat)] {
        &self.anchors
    }

    pub fn is_identity(&self) -> bool {
        self.anchors.is_empty()
    }

    /// Exact image of x.
    pub fn eval(&self, x: &Rat) -> Rat {
        if self.anchors.is_empty() {
            return x.clone();
        }
        let first = &self.anchors[0];
        if *x <= first.0 {
            return x + &(&first.1 - &first.0);
        }
        let last = self.anchors.last().unwrap();
        if *x >= last.0 {
            return x + &(&last.1 - &last.0);
        }
        // x strictly between first and last anchor: interpolate on its piece
        let mut lo = 0;
        let mut hi = self.anchors.len() - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.anchors[mid].0 <= *x {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let (x0, y0) = &self.anchors[lo];
        let (x1, y1) = &self.anchors[hi];
        y0 + &((x - x0) * (y1 - y0) / (x1 - x0))
    }

    pub fn eval_inverse(&self, y: &Rat) -> Rat {
        self.inverse().eval(y)
    }

    pub fn inverse(&self) -> PLMap {
        let pairs = self.anchors.iter().map(|(x, y)| (y.clone(), x.clone())).collect();
        PLMap::canonical(pairs)
    }

    /// Right-action composition: (x)(self·other) = ((x)self)other.
    pub fn compose(&self, other: &PLMap) -> PLMap {
        let mut xs: Vec<Rat> = self.anchors.iter().map(|(x, _)| x.clone()).collect();
        if !other.anchors.is_empty() {
            let inv = self.inverse();
            xs.extend(other.anchors.iter().map(|(x, _)| inv.eval(x)));
        }
        xs.sort();
        xs.dedup();
        if xs.is_empty() {
            return PLMap::identity();
        }
        let pairs = xs.into_iter().map(|x| { let y = other.eval(&self.eval(&x)); (x, y) }).collect();
        PLMap::canonical(pairs)
    }

    pub fn conjugate_by(&self, f: &PLMap) -> PLMap {
        f.inverse().compose(self).compose(f)
    }

    /// [f,g] = f⁻¹·g⁻¹·f·g.
    pub fn commutator(f: &PLMap, g: &PLMap) -> PLMap {
        f.inverse().compose(&g.inverse()).compose(f).compose(g)
    }

    fn lattice_op(&self, other: &PLMap, take_max: bool) -> PLMap {
        let mut xs: Vec<Rat> = self.anchors.iter().map(|(x, _)| x.clone()).collect();
        xs.extend(other.anchors.iter().map(|(x, _)| x.clone()));
        xs.sort();
        xs.dedup();
        if xs.is_empty() {
            return PLMap::identity();
        }
        // crossing points strictly inside each piece of the common partition
        let mut crossings = Vec::new();
        for w in xs.windows(2) {
            let (p, q) = (&w[0], &w[1]);
            let dp = self.eval(p) - other.eval(p);
            let dq = self.eval(q) - other.eval(q);
            if !dp.is_zero() && !dq.is_zero() && dp.is_positive() != dq.is_positive() {
                // d is affine on [p,q]; its zero is p + (q-p)·dp/(dp-dq)
                let z = p + &((q - p) * &dp / (&dp - &dq));
                crossings.push(z);
            }
        }
        xs.extend(crossings);
        xs.sort();
        xs.dedup();
        let pairs = xs
            .into_iter()
            .map(|x| {
                let a = self.eval(&x);
                let b = other.eval(&x);
                let y = if (a >= b) == take_max { a } else { b };
                (x, y)
            })
            .collect();
        PLMap::canonical(pairs)
    }

    /// Pointwise maximum.
    pub fn vee(&self, other: &PLMap) -> PLMap {
        self.lattice_op(other, true)
    }

    /// Pointwise minimum.
    pub fn wedge(&self, other: &PLMap) -> PLMap {
        self.lattice_op(other, false)
    }

    /// Exact support {x : (x)f ≠ x} as a canonical interval set; the fixed
    /// points are the rational zeros of f(x) − x.
    pub fn support(&self) -> IntervalSet {
        if self.anchors.is_empty() {
            return IntervalSet::empty();
        }
        let displacement = |x: &Rat| self.eval(x) - x;
        // critical points: anchors plus interior zeros of the displacement
        let mut criticals: Vec<Rat> = self.anchors.iter().map(|(x, _)| x.clone()).collect();
        for w in self.anchors.windows(2) {
            let (x0, y0) = &w[0];
            let (x1, y1) = &w[1];
            let d0 = y0 - x0;
            let d1 = y1 - x1;
            if !d0.is_zero() && !d1.is_zero() && d0.is_positive() != d1.is_positive() {
                let z = x0 + &((x1 - x0) * &d0 / (&d0 - &d1));
                criticals.push(z);
            }
        }
        criticals.sort();
        criticals.dedup();

        let first = criticals.first().unwrap().clone();
        let last = criticals.last().unwrap().clone();
        // region sequence: lower tail, then alternating point / open segment
        let mut regions: Vec<(Endpoint, Endpoint, bool)> = Vec::new();
        let low_nz = !displacement(&(&first - &Rat::one())).is_zero();
        regions.push((Endpoint::NegInf, Endpoint::Fin(first.clone()), low_nz));
        for i in 0..criticals.len() {
            let k = &criticals[i];
            let nz = !displacement(k).is_zero();
            regions.push((Endpoint::Fin(k.clone()), Endpoint::Fin(k.clone()), nz));
            if i + 1 < criticals.len() {
                let next = &criticals[i + 1];
                let mid = Rat::midpoint(k, next);
                regions.push((
                    Endpoint::Fin(k.clone()),
                    Endpoint::Fin(next.clone()),
                    !displacement(&mid).is_zero(),
                ));
            }
        }
        let high_nz = !displacement(&(&last + &Rat::one())).is_zero();
        regions.push((Endpoint::Fin(last), Endpoint::PosInf, high_nz));

        let mut parts = Vec::new();
        let mut start: Option<Endpoint> = None;
        for (lo, hi, nz) in regions {
            if nz {
                if start.is_none() {
                    start = Some(lo);
                }
            } else if let Some(s) = start.take() {
                parts.push(Interval::new(s, lo));
            }
            let _ = hi;
        }
        if let Some(s) = start {
            parts.push(Interval::new(s, Endpoint::PosInf));
        }
        IntervalSet::from_parts(parts)
    }

    /// Exact image of an interval set: endpoints map through the automorphism,
    /// infinities stay fixed.
    pub fn image_of_set(&self, s: &IntervalSet) -> IntervalSet {
        let map_ep = |e: &Endpoint| match e {
            Endpoint::Fin(r) => Endpoint::Fin(self.eval(r)),
            other => other.clone(),
        };
        IntervalSet::from_parts(
            s.parts().iter().map(|iv| Interval::new(map_ep(iv.lo()), map_ep(iv.hi()))).collect(),
        )
    }

    /// A rational moved by the map, if any. Canonical non-identity maps always
    /// move one of their anchor abscissae.
    pub fn moved_value(&self) -> Option<Rat> {
        self.anchors.iter().find(|(x, y)| x != y).map(|(x, _)| x.clone())
    }

    /// A rational where the two maps differ, if they differ anywhere. Two PL
    /// maps that agree on the union of their anchor abscissae (plus 0, so
    /// translation pairs are covered) agree everywhere.
    pub fn distinguishing_value(f: &PLMap, g: &PLMap) -> Option<Rat> {
        let mut xs: Vec<Rat> = f.anchors.iter().chain(g.anchors.iter()).map(|(x, _)| x.clone()).collect();
        xs.push(Rat::zero());
        xs.sort();
        xs.dedup();
        xs.into_iter().find(|x| f.eval(x) != g.eval(x))
    }
}

/// Constructive o-n transitivity: the map sending ξ_i to η_i for every i,
/// with slope-1 tails. Input sequences must be strictly increasing and of
/// equal nonzero length.
pub fn interpolate(points: &[(Rat, Rat)]) -> Result<PLMap> {
    if points.is_empty() {
        return Err(Error::NonMonotonicInput);
    }
    PLMap::from_anchors(points.to_vec())
}

/// Convenience form taking separate source/target sequences.
pub fn interpolate_seqs(xs: &[Rat], ys: &[Rat]) -> Result<PLMap> {
    if xs.len() != ys.len() {
        return Err(Error::NonMonotonicInput);
    }
    interpolate(&xs.iter().cloned().zip(ys.iter().cloned()).collect::<Vec<_>>())
}

/// The positive bump fixing everything outside (lo, hi), sending mid_from to
/// mid_to: anchors [(lo,lo),(mid_from,mid_to),(hi,hi)]. Its support is exactly
/// (lo, hi) and it dominates the identity pointwise.
pub fn bump(lo: Rat, mid_from: Rat, mid_to: Rat, hi: Rat) -> Result<PLMap> {
    if !(lo < mid_from && mid_from < mid_to && mid_to < hi) {
        return Err(Error::NonMonotonicInput);
    }
    PLMap::from_anchors(vec![(lo.clone(), lo), (mid_from, mid_to), (hi.clone(), hi)])
}

/// Depression: agrees with f on Λ and with the identity elsewhere. Every part
/// of Λ must be setwise f-invariant, i.e. its finite endpoints are fixed.
pub fn depress(f: &PLMap, lambda: &IntervalSet) -> Result<PLMap> {
    for part in lambda.parts() {
        for ep in [part.lo(), part.hi()] {
            if let Some(r) = ep.fin() {
                if &f.eval(r) != r {
                    return Err(Error::NotInvariant);
                }
            }
        }
    }
    let mut pairs: Vec<(Rat, Rat)> = Vec::new();
    for part in lambda.parts() {
        if let Some(r) = part.lo().fin() {
            pairs.push((r.clone(), r.clone()));
        }
        for (x, y) in f.anchors() {
            if part.contains(x) {
                pairs.push((x.clone(), y.clone()));
            }
        }
        if let Some(r) = part.hi().fin() {
            pairs.push((r.clone(), r.clone()));
        }
    }
    pairs.sort_by(|a, b| a.0.cmp(&b.0));
    pairs.dedup_by(|a, b| a.0 == b.0);
    PLMap::from_anchors(pairs)
}

/// Setwise-permutation check on a finite family of pairwise-disjoint
/// intervals:
/// returns None when f does not permute the family setwise; otherwise Some
/// telling whether every member maps onto itself (order preservation forces
/// this whenever the family is preserved).
pub fn setwise_fixed_family(f: &PLMap, family: &[Interval]) -> Option<bool> {
    for (i, a) in family.iter().enumerate() {
        for b in &family[i + 1..] {
            if !IntervalSet::single(a.clone()).is_disjoint_from(&IntervalSet::single(b.clone())) {
                return None;
            }
        }
    }
    let image = |iv: &Interval| {
        let map_ep = |e: &Endpoint| match e {
            Endpoint::Fin(r) => Endpoint::Fin(f.eval(r)),
            other => other.clone(),
        };
        Interval::new(map_ep(iv.lo()), map_ep(iv.hi()))
    };
    let mut sorted: Vec<Interval> = family.to_vec();
    sorted.sort();
    let mut images: Vec<Interval> = family.iter().map(image).collect();
    images.sort();
    if sorted != images {
        return None;
    }
    Some(family.iter().all(|iv| &image(iv) == iv))
}

/// Text form "PL[(x1,y1),…,(xm,ym)]"; "PL[]" is the identity.
impl fmt::Display for PLMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PL[")?;
        for (i, (x, y)) in self.anchors.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "({},{})", x, y)?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for PLMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl std::str::FromStr for PLMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<PLMap> {
        let s = s.trim();
        let inner = s
            .strip_prefix("PL[")
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::parse(1, 1, format!("expected PL[...], got {:?}", s)))?;
        if inner.trim().is_empty() {
            return Ok(PLMap::identity());
        }
        let mut pairs = Vec::new();
        // split "(a,b),(c,d)" at the commas between closing and opening parens
        for (i, chunk) in inner.split("),(").enumerate() {
            let chunk = chunk.trim_start_matches('(').trim_end_matches(')');
            let (xs, ys) = chunk
                .split_once(',')
                .ok_or_else(|| Error::parse(1, i + 1, "expected (x,y) pair"))?;
            let x: Rat = xs.trim().parse()?;
            let y: Rat = ys.trim().parse()?;
            pairs.push((x, y));
        }
        PLMap::from_anchors(pairs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    fn plmap(pairs: &[(i64, i64)]) -> PLMap {
        PLMap::from_anchors(pairs.iter().map(|&(x, y)| (Rat::int(x), Rat::int(y))).collect()).unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(PLMap::identity().eval(&r(7, 3)), r(7, 3));
        // single anchor with slope-1 tails is a translation
        assert_eq!(plmap(&[(0, 1)]).eval(&Rat::int(5)), Rat::int(6));
        // affine interpolation on the piece [0,1] with slope 2
        assert_eq!(plmap(&[(0, 0), (1, 2), (3, 3)]).eval(&r(1, 2)), Rat::int(1));
    }

    #[test]
    fn canonical_translation_is_anchored_at_zero() {
        let t = PLMap::from_anchors(vec![(Rat::int(5), Rat::int(6))]).unwrap();
        assert_eq!(t, PLMap::translation(Rat::one()));
        assert_eq!(t.to_string(), "PL[(0,1)]");
    }

    #[test]
    fn collinear_anchors_are_removed() {
        let f = plmap(&[(0, 0), (1, 2), (2, 4), (4, 5)]);
        assert_eq!(f.anchors().len(), 3);
        assert_eq!(f.eval(&Rat::int(2)), Rat::int(4));
    }

    #[test]
    fn compose_identity_and_inverse() {
        let f = plmap(&[(0, 0), (1, 2), (3, 3)]);
        assert_eq!(f.compose(&PLMap::identity()), f);
        assert_eq!(
            PLMap::translation(Rat::one()).compose(&PLMap::translation(Rat::int(-1))),
            PLMap::identity()
        );
        assert!(f.compose(&f.inverse()).is_identity());
    }

    #[test]
    fn compose_matches_pointwise_oracle() {
        let f = plmap(&[(0, 0), (1, 2)]);
        let g = plmap(&[(0, 0), (2, 1)]);
        let fg = f.compose(&g);
        for x in [Rat::int(-1), r(1, 2), Rat::int(1), Rat::int(3)] {
            assert_eq!(fg.eval(&x), g.eval(&f.eval(&x)), "at {}", x);
        }
        assert!(fg.anchors().len() <= f.anchors().len() + g.anchors().len());
    }

    #[test]
    fn right_action_convention() {
        // (x)(f·g) applies f first
        let f = PLMap::translation(Rat::int(1));
        let g = plmap(&[(0, 0), (1, 3), (4, 4)]);
        let fg = f.compose(&g);
        assert_eq!(fg.eval(&Rat::zero()), g.eval(&Rat::int(1)));
    }

    #[test]
    fn vee_examples() {
        let f = plmap(&[(0, 0), (1, 2), (3, 3)]);
        assert_eq!(f.vee(&f), f);
        let up = PLMap::translation(Rat::one());
        assert_eq!(up.vee(&PLMap::identity()), up);
        // crossing translations: pointwise max on a grid including crossings
        let a = PLMap::translation(Rat::one());
        let b = PLMap::translation(Rat::int(-1));
        let v = a.vee(&b);
        for k in -6..=6 {
            let x = r(k, 2);
            assert_eq!(v.eval(&x), Rat::max(&a.eval(&x), &b.eval(&x)));
        }
    }

    #[test]
    fn vee_with_genuine_crossing() {
        // f crosses the identity transversally at 4/3, strictly inside its
        // single interior piece; the crossing must appear as an anchor.
        let f = PLMap::from_anchors(vec![(Rat::int(0), Rat::int(1)), (Rat::int(4), Rat::int(2))])
            .unwrap();
        let g = PLMap::identity();
        let v = f.vee(&g);
        let w = f.wedge(&g);
        assert!(v.anchors().iter().any(|(x, _)| *x == r(4, 3)));
        for k in -4..=20 {
            let x = r(k, 3);
            assert_eq!(v.eval(&x), Rat::max(&f.eval(&x), &g.eval(&x)), "vee at {}", x);
            assert_eq!(w.eval(&x), Rat::min(&f.eval(&x), &g.eval(&x)), "wedge at {}", x);
        }
        // absorption laws
        assert_eq!(f.wedge(&f.vee(&g)), f);
        assert_eq!(v.wedge(&w), w);
    }

    #[test]
    fn support_examples() {
        assert!(PLMap::identity().support().is_empty());
        assert_eq!(PLMap::translation(Rat::one()).support(), IntervalSet::whole_line());
        let b = plmap(&[(0, 0), (1, 2), (3, 3)]);
        assert_eq!(b.support(), IntervalSet::single(Interval::of_i64(0, 3)));
    }

    #[test]
    fn support_with_interior_fixed_point() {
        // map fixing 0, 2 and 4 but moving (0,2) up and (2,4) down
        let f = PLMap::from_anchors(vec![
            (Rat::int(0), Rat::int(0)),
            (Rat::int(1), r(3, 2)),
            (Rat::int(2), Rat::int(2)),
            (Rat::int(3), r(5, 2)),
            (Rat::int(4), Rat::int(4)),
        ])
        .unwrap();
        let s = f.support();
        assert_eq!(
            s,
            IntervalSet::from_parts(vec![Interval::of_i64(0, 2), Interval::of_i64(2, 4)])
        );
        assert!(!s.contains(&Rat::int(2)));
    }

    #[test]
    fn support_zero_crossing_inside_piece() {
        // one linear piece passes through the diagonal strictly inside
        let f = PLMap::from_anchors(vec![(Rat::int(0), Rat::int(1)), (Rat::int(4), Rat::int(2))])
            .unwrap();
        // f(x) - x is 1 at 0 and -2 at 4, zero at x = 4/3
        let s = f.support();
        assert!(!s.contains(&r(4, 3)));
        assert!(s.contains(&Rat::int(0)));
        assert!(s.contains(&Rat::int(2)));
        assert_eq!(f.eval(&r(4, 3)), r(4, 3));
    }

    #[test]
    fn interpolate_examples() {
        assert!(interpolate(&[(Rat::zero(), Rat::zero())]).unwrap().is_identity());
        assert_eq!(
            interpolate(&[(Rat::zero(), Rat::one())]).unwrap(),
            PLMap::translation(Rat::one())
        );
        let pts: Vec<(Rat, Rat)> =
            vec![(0, 1), (1, 3), (2, 4), (5, 9), (6, 10), (8, 12)].into_iter()
                .map(|(a, b)| (Rat::int(a), Rat::int(b)))
                .collect();
        let k = interpolate(&pts).unwrap();
        for (x, y) in &pts {
            assert_eq!(&k.eval(x), y);
        }
        assert!(interpolate(&[(Rat::int(0), Rat::int(1)), (Rat::int(1), Rat::int(1))]).is_err());
        assert!(interpolate_seqs(&[Rat::zero()], &[Rat::zero(), Rat::one()]).is_err());
    }

    #[test]
    fn bump_examples() {
        let g = bump(Rat::int(0), Rat::int(1), Rat::int(2), Rat::int(3)).unwrap();
        assert_eq!(g, plmap(&[(0, 0), (1, 2), (3, 3)]));
        assert_eq!(g.support(), IntervalSet::single(Interval::of_i64(0, 3)));
        assert_eq!(g.eval(&Rat::int(1)), Rat::int(2));
        for x in [Rat::int(-5), Rat::int(0), Rat::int(3), Rat::int(10)] {
            assert_eq!(g.eval(&x), x);
        }
        // near-identity bump keeps full support
        let eps = r(1, 1000);
        let tiny = bump(Rat::int(0), Rat::int(1), Rat::int(1) + eps, Rat::int(3)).unwrap();
        assert_eq!(tiny.support(), IntervalSet::single(Interval::of_i64(0, 3)));
        // degenerate request
        assert_eq!(
            bump(Rat::int(0), Rat::int(1), Rat::int(1), Rat::int(3)).unwrap_err(),
            Error::NonMonotonicInput
        );
    }

    #[test]
    fn bump_dominates_identity() {
        let g = bump(Rat::int(0), Rat::int(1), Rat::int(2), Rat::int(3)).unwrap();
        for k in -4..=16 {
            let x = r(k, 4);
            assert!(g.eval(&x) >= x);
        }
    }

    #[test]
    fn depress_examples() {
        let f = plmap(&[(0, 0), (1, 2), (3, 3)]);
        assert!(depress(&f, &IntervalSet::empty()).unwrap().is_identity());
        assert_eq!(depress(&f, &f.support()).unwrap(), f);

        // support (0,1) ∪ (2,3): keep only the first component
        let b1 = bump(Rat::int(0), r(1, 4), r(1, 2), Rat::int(1)).unwrap();
        let b2 = bump(Rat::int(2), r(9, 4), r(5, 2), Rat::int(3)).unwrap();
        let f2 = b1.compose(&b2);
        assert_eq!(
            f2.support(),
            IntervalSet::from_parts(vec![Interval::of_i64(0, 1), Interval::of_i64(2, 3)])
        );
        let d = depress(&f2, &IntervalSet::single(Interval::of_i64(0, 1))).unwrap();
        assert_eq!(d.eval(&r(1, 2)), f2.eval(&r(1, 2)));
        assert_eq!(d.eval(&r(5, 2)), r(5, 2));
        assert_eq!(d, b1);

        // a non-invariant region is rejected
        assert_eq!(
            depress(&f, &IntervalSet::single(Interval::of_i64(0, 1))).unwrap_err(),
            Error::NotInvariant
        );
    }

    #[test]
    fn depress_onto_unbounded_region() {
        // the map acts below 0 and fixes 0; depressing onto (-inf, 0) keeps
        // the action including the slope-1 tail behavior
        let low = bump(Rat::int(-10), Rat::int(-9), Rat::int(-8), Rat::int(-7)).unwrap();
        let high = bump(Rat::int(1), Rat::int(2), Rat::new(5, 2), Rat::int(3)).unwrap();
        let f = low.compose(&high);
        let lambda = IntervalSet::single(Interval::new(
            crate::interval::Endpoint::NegInf,
            crate::interval::Endpoint::Fin(Rat::zero()),
        ));
        let d = depress(&f, &lambda).unwrap();
        assert_eq!(d, low);
        assert_eq!(d.eval(&Rat::int(-100)), Rat::int(-100));
        assert_eq!(d.eval(&Rat::new(-17, 2)), f.eval(&Rat::new(-17, 2)));
        assert_eq!(d.eval(&Rat::int(2)), Rat::int(2));
        // a translation cannot be depressed onto a half-line it moves
        assert_eq!(
            depress(&PLMap::translation(Rat::one()), &lambda).unwrap_err(),
            Error::NotInvariant
        );
    }

    #[test]
    fn depress_support_is_the_intersection() {
        let b1 = bump(Rat::int(0), r(1, 4), r(1, 2), Rat::int(1)).unwrap();
        let b2 = bump(Rat::int(2), r(9, 4), r(5, 2), Rat::int(3)).unwrap();
        let f = b1.compose(&b2);
        for lambda in [
            IntervalSet::empty(),
            IntervalSet::single(Interval::of_i64(0, 1)),
            IntervalSet::single(Interval::of_i64(2, 3)),
            IntervalSet::from_parts(vec![Interval::of_i64(0, 1), Interval::of_i64(2, 3)]),
            IntervalSet::single(Interval::of_i64(-5, 1)),
        ] {
            let d = depress(&f, &lambda).unwrap();
            assert_eq!(d.support(), f.support().intersect(&lambda));
        }
    }

    #[test]
    fn conjugation_and_commutator() {
        let g = plmap(&[(0, 0), (1, 2), (3, 3)]);
        assert_eq!(g.conjugate_by(&PLMap::identity()), g);
        assert!(PLMap::commutator(&g, &g).is_identity());
        let t = PLMap::translation(Rat::int(10));
        let conj = g.conjugate_by(&t);
        assert_eq!(conj.support(), IntervalSet::single(Interval::of_i64(10, 13)));
        assert_eq!(g.image_of_set(&g.support()), g.support());
        assert_eq!(t.image_of_set(&g.support()), conj.support());
    }

    #[test]
    fn setwise_family_check() {
        let f = bump(Rat::int(0), r(1, 4), r(1, 2), Rat::int(1)).unwrap();
        let fam = vec![Interval::of_i64(0, 1), Interval::of_i64(2, 3)];
        assert_eq!(setwise_fixed_family(&f, &fam), Some(true));
        let t = PLMap::translation(Rat::int(2));
        assert_eq!(setwise_fixed_family(&t, &fam), None);
    }

    #[test]
    fn display_parse_roundtrip() {
        for f in [
            PLMap::identity(),
            PLMap::translation(r(-3, 2)),
            plmap(&[(0, 0), (1, 2), (3, 3)]),
        ] {
            let s = f.to_string();
            assert_eq!(s.parse::<PLMap>().unwrap(), f);
        }
        assert_eq!("PL[]".parse::<PLMap>().unwrap(), PLMap::identity());
        assert!("PL[(0,1),(1,1)]".parse::<PLMap>().is_err());
    }

    #[test]
    fn distinguishing_value_finds_difference() {
        let f = plmap(&[(0, 0), (1, 2), (3, 3)]);
        let g = plmap(&[(0, 0), (1, 2), (4, 4)]);
        let x = PLMap::distinguishing_value(&f, &g).unwrap();
        assert_ne!(f.eval(&x), g.eval(&x));
        assert!(PLMap::distinguishing_value(&f, &f).is_none());
    }
}
