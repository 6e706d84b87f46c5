//! Finite unions of closed subintervals of `[0, 1]`.
//!
//! Every set the solver manipulates (scalar solution sets, per-cell sets,
//! column bounds, box factors) is an [`IntervalUnion`]. Values are kept in
//! canonical form: pieces sorted, pairwise separated by more than the
//! separation tolerance, each with `lo ≤ hi`. Singletons are ordinary pieces.
//!
//! Endpoints are stored as computed. Floating error is absorbed by the
//! comparisons, which all accept a tolerance (`EPS` unless overridden).

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Default tolerance for emptiness, containment and piece separation.
pub const EPS: f64 = 1e-9;

/// A closed interval `[lo, hi]`, possibly degenerate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_singleton(&self, eps: f64) -> bool {
        self.hi - self.lo <= eps
    }

    fn contains(&self, x: f64, eps: f64) -> bool {
        self.lo - eps <= x && x <= self.hi + eps
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct IntervalUnion {
    pieces: Vec<Interval>,
}

impl IntervalUnion {
    pub fn empty() -> Self {
        IntervalUnion { pieces: Vec::new() }
    }

    /// The universe `[0, 1]`.
    pub fn full() -> Self {
        IntervalUnion::interval(0.0, 1.0)
    }

    /// `[lo, hi]`, or the empty set when `hi < lo − EPS`.
    pub fn interval(lo: f64, hi: f64) -> Self {
        IntervalUnion::from_pieces_eps([(lo, hi)], EPS)
    }

    pub fn singleton(x: f64) -> Self {
        IntervalUnion::interval(x, x)
    }

    /// Canonicalizes an arbitrary list of `(lo, hi)` pairs.
    pub fn from_pieces<I: IntoIterator<Item = (f64, f64)>>(pieces: I) -> Self {
        IntervalUnion::from_pieces_eps(pieces, EPS)
    }

    /// Canonical form: pieces with `hi < lo − eps` are dropped, widths in
    /// `[−eps, 0)` collapse to the midpoint singleton, everything is clipped
    /// to `[0, 1]`, sorted, and pieces closer than `eps` are merged.
    pub fn from_pieces_eps<I: IntoIterator<Item = (f64, f64)>>(pieces: I, eps: f64) -> Self {
        let mut v: Vec<Interval> = pieces
            .into_iter()
            .filter_map(|(lo, hi)| {
                if lo.is_nan() || hi.is_nan() || hi < lo - eps {
                    return None;
                }
                let (lo, hi) = if hi < lo {
                    let mid = 0.5 * (lo + hi);
                    (mid, mid)
                } else {
                    (lo, hi)
                };
                let lo = lo.clamp(0.0, 1.0);
                let hi = hi.clamp(0.0, 1.0);
                Some(Interval { lo, hi })
            })
            .collect();
        v.sort_by(|a, b| a.lo.total_cmp(&b.lo).then(a.hi.total_cmp(&b.hi)));
        let mut out: Vec<Interval> = Vec::with_capacity(v.len());
        for p in v {
            match out.last_mut() {
                Some(last) if p.lo <= last.hi + eps => last.hi = last.hi.max(p.hi),
                _ => out.push(p),
            }
        }
        IntervalUnion { pieces: out }
    }

    pub fn pieces(&self) -> &[Interval] {
        &self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Total measure.
    pub fn width(&self) -> f64 {
        self.pieces.iter().map(Interval::width).sum()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.contains_eps(x, EPS)
    }

    pub fn contains_eps(&self, x: f64, eps: f64) -> bool {
        self.pieces.iter().any(|p| p.contains(x, eps))
    }

    pub fn min_elem(&self) -> Result<f64> {
        self.pieces.first().map(|p| p.lo).ok_or(Error::EmptySet)
    }

    pub fn max_elem(&self) -> Result<f64> {
        self.pieces.last().map(|p| p.hi).ok_or(Error::EmptySet)
    }

    /// The point `k` if this set is `{k}` (a single piece no wider than `eps`).
    pub fn as_singleton(&self, eps: f64) -> Option<f64> {
        match self.pieces.as_slice() {
            [p] if p.is_singleton(eps) => Some(p.lo),
            _ => None,
        }
    }

    pub fn intersect(&self, other: &IntervalUnion) -> IntervalUnion {
        self.intersect_eps(other, EPS)
    }

    pub fn intersect_eps(&self, other: &IntervalUnion, eps: f64) -> IntervalUnion {
        let mut raw = Vec::new();
        for a in &self.pieces {
            for b in &other.pieces {
                let lo = a.lo.max(b.lo);
                let hi = a.hi.min(b.hi);
                if hi >= lo - eps {
                    raw.push((lo, hi));
                }
            }
        }
        IntervalUnion::from_pieces_eps(raw, eps)
    }

    pub fn union_of(&self, other: &IntervalUnion) -> IntervalUnion {
        self.union_eps(other, EPS)
    }

    pub fn union_eps(&self, other: &IntervalUnion, eps: f64) -> IntervalUnion {
        IntervalUnion::from_pieces_eps(
            self.pieces.iter().chain(&other.pieces).map(|p| (p.lo, p.hi)),
            eps,
        )
    }

    /// Closure of `[0, 1] \ self`: boundary points belong to both sets.
    pub fn complement(&self) -> IntervalUnion {
        if self.is_empty() {
            return IntervalUnion::full();
        }
        let mut raw = Vec::new();
        let mut cursor = 0.0;
        for p in &self.pieces {
            if p.lo > cursor {
                raw.push((cursor, p.lo));
            }
            cursor = p.hi;
        }
        if cursor < 1.0 {
            raw.push((cursor, 1.0));
        }
        IntervalUnion::from_pieces(raw)
    }

    /// Whether every piece of `self` sits inside a piece of `other`, up to `eps`.
    pub fn is_subset_eps(&self, other: &IntervalUnion, eps: f64) -> bool {
        self.pieces.iter().all(|p| {
            other
                .pieces
                .iter()
                .any(|q| q.lo - eps <= p.lo && p.hi <= q.hi + eps)
        })
    }

    pub fn is_subset(&self, other: &IntervalUnion) -> bool {
        self.is_subset_eps(other, EPS)
    }

    /// Set equality up to `eps` on every endpoint.
    pub fn approx_eq(&self, other: &IntervalUnion, eps: f64) -> bool {
        self.pieces.len() == other.pieces.len()
            && self
                .pieces
                .iter()
                .zip(&other.pieces)
                .all(|(p, q)| (p.lo - q.lo).abs() <= eps && (p.hi - q.hi).abs() <= eps)
    }

    /// All piece endpoints in ascending order (singletons contribute once).
    pub fn endpoints(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(2 * self.pieces.len());
        for p in &self.pieces {
            v.push(p.lo);
            if p.hi != p.lo {
                v.push(p.hi);
            }
        }
        v
    }
}

impl fmt::Display for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pieces.is_empty() {
            return f.write_str("∅");
        }
        for (k, p) in self.pieces.iter().enumerate() {
            if k > 0 {
                f.write_str(" ∪ ")?;
            }
            if p.lo == p.hi {
                write!(f, "{{{}}}", p.lo)?;
            } else {
                write!(f, "[{}, {}]", p.lo, p.hi)?;
            }
        }
        Ok(())
    }
}

impl Serialize for IntervalUnion {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.pieces.iter().map(|p| [p.lo, p.hi]).collect();
        pairs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IntervalUnion {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(deserializer)?;
        for [lo, hi] in &pairs {
            if !(0.0..=1.0).contains(lo) || !(0.0..=1.0).contains(hi) || lo > hi {
                return Err(D::Error::custom(format!("invalid piece [{lo}, {hi}]")));
            }
        }
        Ok(IntervalUnion::from_pieces(pairs.into_iter().map(|[lo, hi]| (lo, hi))))
    }
}
