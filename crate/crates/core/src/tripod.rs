//! Tripods formed by the axis of a cyclically reduced word and the axes of
//! two of its conjugates.
//!
//! All coordinates are edge coordinates along λ = axis(W), shifted so that
//! the designated copy of W occupies `[0, L(W))`. The copy starts at the
//! vertex where λ∩λ₁ begins.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tree::{axis_of, axis_overlap, translate_axis, Axis, Overlap};
use crate::word::{cyclic_reduce, CyclicWord, ReducedWord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TripodError {
    #[error("the word must be non-empty")]
    EmptyWord,
    #[error("axis {which} does not meet the axis of W")]
    Disjoint { which: u8 },
    #[error("axis {which} coincides with the axis of W")]
    SameLine { which: u8 },
}

/// Half-open edge interval `[lo, hi)`; serialised as `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct Interval {
    pub lo: i64,
    pub hi: i64,
}

impl Interval {
    pub fn len(&self) -> usize {
        (self.hi - self.lo) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.hi == self.lo
    }

    pub fn contains(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

impl From<[i64; 2]> for Interval {
    fn from([lo, hi]: [i64; 2]) -> Interval {
        Interval { lo, hi }
    }
}

impl From<Interval> for [i64; 2] {
    fn from(i: Interval) -> [i64; 2] {
        [i.lo, i.hi]
    }
}

/// How the two overlaps meet along λ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "label", rename_all = "lowercase")]
pub enum Meet {
    Disjoint,
    Point,
    Segment(ReducedWord),
}

impl Meet {
    pub fn is_edge_disjoint(&self) -> bool {
        !matches!(self, Meet::Segment(_))
    }
}

/// Classifies the closed vertex ranges `[u.lo, u.hi]` and `[v.lo, v.hi]`.
pub fn meet_of(w: &CyclicWord, origin: i64, u: Interval, v: Interval) -> Meet {
    let lo = u.lo.max(v.lo);
    let hi = u.hi.min(v.hi);
    if lo > hi {
        Meet::Disjoint
    } else if lo == hi {
        Meet::Point
    } else {
        Meet::Segment(w.periodic_subword(origin + lo, origin + hi))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripodReport {
    #[serde(rename = "W")]
    pub w: CyclicWord,
    pub g1: ReducedWord,
    pub g2: ReducedWord,
    /// Cyclically reduced label words of the conjugates.
    pub w1: CyclicWord,
    pub w2: CyclicWord,
    #[serde(rename = "U")]
    pub u: ReducedWord,
    #[serde(rename = "V")]
    pub v: ReducedWord,
    /// Coordinate on λ (in W̃ indexing) where the designated copy starts.
    pub copy_offset: i64,
    pub u_interval: Interval,
    pub v_interval: Interval,
    pub uv_meet: Meet,
    pub covers: bool,
    pub union_label: Option<ReducedWord>,
    pub excess: usize,
}

fn overlap_range(lambda: &Axis, other: &Axis, which: u8) -> Result<(i64, i64), TripodError> {
    match axis_overlap(lambda, other) {
        Overlap::Range { lo, hi } => Ok((lo, hi)),
        Overlap::Empty => Err(TripodError::Disjoint { which }),
        Overlap::SameLine => Err(TripodError::SameLine { which }),
    }
}

pub fn tripod_config(w: &CyclicWord, g1: &ReducedWord, g2: &ReducedWord) -> Result<TripodReport, TripodError> {
    let lambda = axis_of(w.word()).map_err(|_| TripodError::EmptyWord)?;
    let lambda1 = translate_axis(g1, &lambda);
    let lambda2 = translate_axis(g2, &lambda);
    let (u_lo, u_hi) = overlap_range(&lambda, &lambda1, 1)?;
    let (v_lo, v_hi) = overlap_range(&lambda, &lambda2, 2)?;

    let origin = u_lo;
    let u_interval = Interval { lo: 0, hi: u_hi - origin };
    let v_interval = Interval {
        lo: v_lo - origin,
        hi: v_hi - origin,
    };
    let uv_meet = meet_of(w, origin, u_interval, v_interval);
    let n = w.len() as i64;
    let (union_label, covers, excess) = if uv_meet == Meet::Disjoint {
        (None, false, 0)
    } else {
        let union = Interval {
            lo: u_interval.lo.min(v_interval.lo),
            hi: u_interval.hi.max(v_interval.hi),
        };
        let covers = union.contains(&Interval { lo: 0, hi: n });
        let excess = if covers { union.len() - w.len() } else { 0 };
        (
            Some(w.periodic_subword(origin + union.lo, origin + union.hi)),
            covers,
            excess,
        )
    };

    Ok(TripodReport {
        w: w.clone(),
        g1: g1.clone(),
        g2: g2.clone(),
        w1: lambda1.core().clone(),
        w2: lambda2.core().clone(),
        u: lambda.label_between(u_lo, u_hi),
        v: lambda.label_between(v_lo, v_hi),
        copy_offset: origin,
        u_interval,
        v_interval,
        uv_meet,
        covers,
        union_label,
        excess,
    })
}

/// A conjugator `g` such that g·λ meets λ along the run of W̃ that agrees
/// with its `shift`-translate starting at coordinate `lo`.
///
/// `g = v(lo)·v(lo + shift)⁻¹`, where `v(i)` is the vertex of λ at
/// coordinate `i`; among the representatives for `shift` and `shift - L(W)`
/// the shorter one is returned.
pub fn realizing_conjugator(w: &CyclicWord, lo: i64, shift: i64) -> ReducedWord {
    let lambda = axis_of(w.word()).expect("non-empty word");
    let n = w.len() as i64;
    let candidate = |s: i64| {
        lambda
            .vertex_at(lo)
            .address()
            .concat(&lambda.vertex_at(lo + s).address().invert())
    };
    let a = candidate(shift);
    let b = candidate(shift - n);
    if b.len() < a.len() {
        b
    } else {
        a
    }
}

/// A worked configuration, given by the two runs of W̃ that the overlaps
/// realise: `(lo, shift)` for U and for V.
#[derive(Clone, Debug)]
pub struct WorkedExample {
    pub name: &'static str,
    pub w: &'static str,
    pub u_run: (i64, i64),
    pub v_run: (i64, i64),
}

pub const WORKED_EXAMPLES: [WorkedExample; 4] = [
    WorkedExample {
        name: "example-1",
        w: "xyxyx",
        u_run: (0, 2),
        v_run: (2, 3),
    },
    WorkedExample {
        name: "example-2",
        w: "xyyxyyx",
        u_run: (0, 3),
        v_run: (3, 4),
    },
    WorkedExample {
        name: "example-3",
        w: "yxyyxyyx",
        u_run: (0, 3),
        v_run: (6, 2),
    },
    WorkedExample {
        name: "example-4",
        w: "yxyxyyxyxyyx",
        u_run: (0, 5),
        v_run: (10, 2),
    },
];

impl WorkedExample {
    pub fn word(&self) -> CyclicWord {
        self.w.parse().expect("worked examples are cyclically reduced")
    }

    pub fn conjugators(&self) -> (ReducedWord, ReducedWord) {
        let w = self.word();
        (
            realizing_conjugator(&w, self.u_run.0, self.u_run.1),
            realizing_conjugator(&w, self.v_run.0, self.v_run.1),
        )
    }

    pub fn report(&self) -> TripodReport {
        let (g1, g2) = self.conjugators();
        tripod_config(&self.word(), &g1, &g2).expect("worked examples are valid tripods")
    }
}

pub fn example_suite() -> Vec<TripodReport> {
    WORKED_EXAMPLES.iter().map(WorkedExample::report).collect()
}

/// Cyclically reduced core of `g·W·g⁻¹`.
pub fn conjugate_core(w: &CyclicWord, g: &ReducedWord) -> CyclicWord {
    cyclic_reduce(&w.word().conjugate_by(g)).core
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> ReducedWord {
        s.parse().unwrap()
    }

    fn c(s: &str) -> CyclicWord {
        s.parse().unwrap()
    }

    #[test]
    fn example_one() {
        let rep = WORKED_EXAMPLES[0].report();
        assert_eq!((rep.g1.to_string(), rep.g2.to_string()), ("YX".into(), "xy".into()));
        assert_eq!(rep.u, r("xyx"));
        assert_eq!(rep.v, r("xyx"));
        assert_eq!(rep.uv_meet, Meet::Segment(r("x")));
        assert!(rep.covers);
        assert_eq!(rep.union_label, Some(r("xyxyx")));
        assert_eq!(rep.excess, 0);
    }

    #[test]
    fn example_three() {
        let rep = WORKED_EXAMPLES[2].report();
        assert_eq!(rep.u, r("yxyyxy"));
        assert_eq!(rep.v, r("yxy"));
        assert_eq!(rep.uv_meet, Meet::Point);
        assert_eq!(rep.union_label, Some(r("yxyyxyyxy")));
        assert_eq!(rep.excess, 1);
        assert!(rep.covers);
    }

    #[test]
    fn literal_generator_conjugates_meet_in_one_edge() {
        let rep = tripod_config(&c("xyxyx"), &r("X"), &r("x")).unwrap();
        assert_eq!((rep.u.clone(), rep.v.clone()), (r("x"), r("x")));
        assert_eq!(rep.uv_meet, Meet::Point);
        assert!(!rep.covers);
        assert_eq!(rep.union_label, Some(r("xx")));
    }

    #[test]
    fn errors_name_the_axis() {
        assert_eq!(
            tripod_config(&c("xyxyx"), &r("xyxyx"), &r("x")),
            Err(TripodError::SameLine { which: 1 })
        );
        assert_eq!(
            tripod_config(&c("x"), &r("y"), &r("yy")),
            Err(TripodError::Disjoint { which: 1 })
        );
        assert_eq!(tripod_config(&c(""), &r("y"), &r("x")), Err(TripodError::EmptyWord));
    }

    #[test]
    fn vertex_overlap_gives_empty_label() {
        let rep = tripod_config(&c("xy"), &r("X"), &r("y")).unwrap();
        assert!(rep.u.is_empty() && rep.u_interval.is_empty());
    }

    #[test]
    fn report_json_shape() {
        let rep = WORKED_EXAMPLES[3].report();
        let value = serde_json::to_value(&rep).unwrap();
        assert_eq!(value["U"], "yxyxyyxyxy");
        assert_eq!(value["uv_meet"]["kind"], "point");
        assert_eq!(value["u_interval"], serde_json::json!([0, 10]));
        let back: TripodReport = serde_json::from_value(value).unwrap();
        assert_eq!(back, rep);
    }
}
