use std::fmt;

use crate::error::Error;
use crate::rat::Rat;

/// One end of an open interval: a rational or an infinity.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Endpoint {
    NegInf,
    Fin(Rat),
    PosInf,
}

impl Endpoint {
    pub fn fin(&self) -> Option<&Rat> {
        match self {
            Endpoint::Fin(r) => Some(r),
            _ => None,
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::NegInf => write!(f, "-inf"),
            Endpoint::Fin(r) => write!(f, "{}", r),
            Endpoint::PosInf => write!(f, "+inf"),
        }
    }
}

/// A nonempty open interval (lo, hi) with lo < hi; endpoints excluded.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Interval {
    lo: Endpoint,
    hi: Endpoint,
}

impl Interval {
    pub fn new(lo: Endpoint, hi: Endpoint) -> Interval {
        assert!(lo < hi, "empty interval ({}, {})", lo, hi);
        assert!(lo != Endpoint::PosInf && hi != Endpoint::NegInf);
        Interval { lo, hi }
    }

    pub fn fin(lo: Rat, hi: Rat) -> Interval {
        Interval::new(Endpoint::Fin(lo), Endpoint::Fin(hi))
    }

    pub fn of_i64(lo: i64, hi: i64) -> Interval {
        Interval::fin(Rat::int(lo), Rat::int(hi))
    }

    pub fn whole_line() -> Interval {
        Interval::new(Endpoint::NegInf, Endpoint::PosInf)
    }

    pub fn lo(&self) -> &Endpoint {
        &self.lo
    }

    pub fn hi(&self) -> &Endpoint {
        &self.hi
    }

    pub fn contains(&self, x: &Rat) -> bool {
        let above_lo = match &self.lo {
            Endpoint::NegInf => true,
            Endpoint::Fin(a) => a < x,
            Endpoint::PosInf => false,
        };
        let below_hi = match &self.hi {
            Endpoint::PosInf => true,
            Endpoint::Fin(b) => x < b,
            Endpoint::NegInf => false,
        };
        above_lo && below_hi
    }

    /// A representative interior point, exact.
    pub fn interior_point(&self) -> Rat {
        match (&self.lo, &self.hi) {
            (Endpoint::Fin(a), Endpoint::Fin(b)) => Rat::midpoint(a, b),
            (Endpoint::NegInf, Endpoint::Fin(b)) => b - Rat::one(),
            (Endpoint::Fin(a), Endpoint::PosInf) => a + Rat::one(),
            (Endpoint::NegInf, Endpoint::PosInf) => Rat::zero(),
            _ => unreachable!(),
        }
    }

    fn overlaps(&self, other: &Interval) -> bool {
        // Open intervals intersect iff each starts below the other's end.
        self.lo < other.hi && other.lo < self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.lo, self.hi)
    }
}

/// How two interval sets relate as point sets.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SetRelation {
    Disjoint,
    Equal,
    Subset,
    Superset,
    Overlapping,
}

/// A finite union of disjoint open intervals in canonical form: parts sorted,
/// pairwise disjoint and maximal. Open intervals sharing an endpoint stay
/// separate parts ((0,1) and (1,2) differ from (0,2) as point sets).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct IntervalSet {
    parts: Vec<Interval>,
}

impl IntervalSet {
    pub fn empty() -> IntervalSet {
        IntervalSet { parts: Vec::new() }
    }

    pub fn whole_line() -> IntervalSet {
        IntervalSet::from_parts(vec![Interval::whole_line()])
    }

    pub fn single(iv: Interval) -> IntervalSet {
        IntervalSet { parts: vec![iv] }
    }

    /// Canonicalize an arbitrary list of intervals: sort and merge every
    /// overlapping pair. Touching open intervals are not merged.
    pub fn from_parts(mut parts: Vec<Interval>) -> IntervalSet {
        parts.sort();
        let mut out: Vec<Interval> = Vec::with_capacity(parts.len());
        for iv in parts {
            match out.last_mut() {
                Some(last) if iv.lo < last.hi => {
                    if iv.hi > last.hi {
                        last.hi = iv.hi;
                    }
                }
                _ => out.push(iv),
            }
        }
        IntervalSet { parts: out }
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn contains(&self, x: &Rat) -> bool {
        self.parts.iter().any(|iv| iv.contains(x))
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        let mut parts = self.parts.clone();
        parts.extend(other.parts.iter().cloned());
        IntervalSet::from_parts(parts)
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        for a in &self.parts {
            for b in &other.parts {
                if a.overlaps(b) {
                    let lo = if a.lo >= b.lo { a.lo.clone() } else { b.lo.clone() };
                    let hi = if a.hi <= b.hi { a.hi.clone() } else { b.hi.clone() };
                    out.push(Interval::new(lo, hi));
                }
            }
        }
        IntervalSet::from_parts(out)
    }

    /// Open complement within a bounding interval: the interior of
    /// bound ∖ self. Finite endpoints of removed parts are excluded, so the
    /// result stays a union of open intervals.
    pub fn complement_within(&self, bound: &Interval) -> IntervalSet {
        let clipped = self.intersect(&IntervalSet::single(bound.clone()));
        let mut out = Vec::new();
        let mut cursor = bound.lo.clone();
        for p in &clipped.parts {
            if cursor < p.lo {
                out.push(Interval::new(cursor, p.lo.clone()));
            }
            cursor = p.hi.clone();
        }
        if cursor < bound.hi {
            out.push(Interval::new(cursor, bound.hi.clone()));
        }
        IntervalSet::from_parts(out)
    }

    /// Open set difference: the interior of self ∖ other.
    pub fn difference(&self, other: &IntervalSet) -> IntervalSet {
        self.intersect(&other.complement_within(&Interval::whole_line()))
    }

    pub fn relate(&self, other: &IntervalSet) -> SetRelation {
        if self == other {
            return SetRelation::Equal;
        }
        let both = self.intersect(other);
        if &both == self {
            SetRelation::Subset
        } else if &both == other {
            SetRelation::Superset
        } else if both.is_empty() {
            SetRelation::Disjoint
        } else {
            SetRelation::Overlapping
        }
    }

    pub fn is_disjoint_from(&self, other: &IntervalSet) -> bool {
        self.intersect(other).is_empty()
    }

    pub fn is_subset_of(&self, other: &IntervalSet) -> bool {
        &self.intersect(other) == self
    }

    /// All finite endpoints, in order, for oracle sampling.
    pub fn finite_endpoints(&self) -> Vec<Rat> {
        let mut out = Vec::new();
        for p in &self.parts {
            if let Endpoint::Fin(r) = &p.lo {
                out.push(r.clone());
            }
            if let Endpoint::Fin(r) = &p.hi {
                out.push(r.clone());
            }
        }
        out
    }
}

/// Text form "(lo,hi)∪(lo,hi)…" with "-inf"/"+inf"; the empty set is "∅".
impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "∅");
        }
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, "∪")?;
            }
            write!(f, "{}", p)?;
        }
        Ok(())
    }
}

impl std::str::FromStr for IntervalSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<IntervalSet, Error> {
        let s = s.trim();
        if s == "∅" {
            return Ok(IntervalSet::empty());
        }
        let mut parts = Vec::new();
        for (i, chunk) in s.split('∪').enumerate() {
            let chunk = chunk.trim();
            let inner = chunk
                .strip_prefix('(')
                .and_then(|c| c.strip_suffix(')'))
                .ok_or_else(|| Error::parse(1, i + 1, format!("expected (lo,hi), got {:?}", chunk)))?;
            let (lo_s, hi_s) = inner
                .split_once(',')
                .ok_or_else(|| Error::parse(1, i + 1, "expected two endpoints"))?;
            let parse_ep = |t: &str, low: bool| -> Result<Endpoint, Error> {
                match t.trim() {
                    "-inf" => Ok(Endpoint::NegInf),
                    "+inf" => Ok(Endpoint::PosInf),
                    other => other.parse::<Rat>().map(Endpoint::Fin).map_err(|_| {
                        Error::parse(1, i + 1, format!("bad {} endpoint {:?}", if low { "lower" } else { "upper" }, t))
                    }),
                }
            };
            let lo = parse_ep(lo_s, true)?;
            let hi = parse_ep(hi_s, false)?;
            if lo >= hi {
                return Err(Error::parse(1, i + 1, format!("empty interval {:?}", chunk)));
            }
            parts.push(Interval::new(lo, hi));
        }
        Ok(IntervalSet::from_parts(parts))
    }
}
