//! The Cayley tree of F₂ and axes of its elements.
//!
//! Vertices are addressed by reduced words (the path from the basepoint 1),
//! and the edge from `v` to `v·ℓ` carries the label `ℓ`. A non-trivial
//! element `g = a·W·a⁻¹` (reduced as written, `W` cyclically reduced)
//! translates the line through `a` labelled by the periodic word W̃ a
//! distance of `L(W)`.
//!
//! Every axis carries a coordinate system: the vertex `a` sits at 0 and
//! coordinate `i` is the vertex reached by reading `i` letters of W̃ forward
//! (or `-i` letters backward). The edge from `i` to `i + 1` is labelled
//! W̃[i].

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::word::{cyclic_reduce, CyclicWord, Letter, ReducedWord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("identity has no axis")]
    IdentityHasNoAxis,
    #[error("conjugator {conjugator:?} and core {core:?} do not form a reduced axis")]
    InvalidAxis { conjugator: String, core: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TreeVertex(pub ReducedWord);

impl TreeVertex {
    pub fn address(&self) -> &ReducedWord {
        &self.0
    }

    /// Edge distance `d_T(self, other)`.
    pub fn distance(&self, other: &TreeVertex) -> usize {
        self.0.invert().concat(&other.0).len()
    }
}

impl fmt::Display for TreeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// An infinite, eventually periodic reduced word `prefix · period^∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct End {
    pub prefix: ReducedWord,
    pub period: ReducedWord,
}

impl End {
    pub fn letter(&self, i: usize) -> Letter {
        let p = self.prefix.len();
        if i < p {
            self.prefix.letters()[i]
        } else {
            self.period.letters()[(i - p) % self.period.len()]
        }
    }

    /// Length of the longest common prefix, or `None` if the ends are equal.
    ///
    /// Past both prefixes the two words are periodic, so agreement on
    /// `q₁ + q₂` further letters forces agreement forever.
    pub fn common_prefix_len(&self, other: &End) -> Option<usize> {
        let bound = self.prefix.len().max(other.prefix.len()) + self.period.len() + other.period.len();
        (0..bound).find(|&i| self.letter(i) != other.letter(i))
    }

    fn has_prefix(&self, w: &ReducedWord) -> bool {
        w.letters().iter().enumerate().all(|(i, &l)| self.letter(i) == l)
    }
}

/// The axis of a non-trivial element, oriented by that element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Axis {
    conjugator: ReducedWord,
    core: CyclicWord,
}

impl Axis {
    pub fn new(conjugator: ReducedWord, core: CyclicWord) -> Result<Axis, TreeError> {
        let invalid = || TreeError::InvalidAxis {
            conjugator: conjugator.to_string(),
            core: core.to_string(),
        };
        if core.is_empty() {
            return Err(invalid());
        }
        conjugator
            .join(core.word())
            .and_then(|w| w.join(&conjugator.invert()))
            .ok_or_else(invalid)?;
        Ok(Axis { conjugator, core })
    }

    pub fn conjugator(&self) -> &ReducedWord {
        &self.conjugator
    }

    pub fn core(&self) -> &CyclicWord {
        &self.core
    }

    /// `a·W·a⁻¹`.
    pub fn element(&self) -> ReducedWord {
        self.conjugator
            .join(self.core.word())
            .and_then(|w| w.join(&self.conjugator.invert()))
            .expect("axis invariant: reduced as written")
    }

    pub fn translation_length(&self) -> usize {
        self.core.len()
    }

    pub fn attracting_end(&self) -> End {
        End {
            prefix: self.conjugator.clone(),
            period: self.core.word().clone(),
        }
    }

    pub fn repelling_end(&self) -> End {
        End {
            prefix: self.conjugator.clone(),
            period: self.core.word().invert(),
        }
    }

    /// Label of the edge from coordinate `i` to `i + 1`.
    pub fn label_at(&self, i: i64) -> Letter {
        self.core.periodic_letter(i)
    }

    /// Labels of the edges in `[lo, hi)`.
    pub fn label_between(&self, lo: i64, hi: i64) -> ReducedWord {
        self.core.periodic_subword(lo, hi)
    }

    pub fn vertex_at(&self, i: i64) -> TreeVertex {
        let n = i.unsigned_abs() as usize;
        let end = if i >= 0 { self.attracting_end() } else { self.repelling_end() };
        let mut letters = self.conjugator.letters().to_vec();
        letters.extend((0..n).map(|j| end.letter(self.conjugator.len() + j)));
        TreeVertex(ReducedWord::from_letters_unchecked(letters))
    }

    pub fn contains(&self, v: &TreeVertex) -> bool {
        v.0.len() >= self.conjugator.len()
            && (self.attracting_end().has_prefix(&v.0) || self.repelling_end().has_prefix(&v.0))
    }

    /// Coordinate of `v` if it lies on the axis.
    pub fn coordinate_of(&self, v: &TreeVertex) -> Option<i64> {
        if v.0.len() < self.conjugator.len() {
            return None;
        }
        let offset = (v.0.len() - self.conjugator.len()) as i64;
        if self.attracting_end().has_prefix(&v.0) {
            Some(offset)
        } else if self.repelling_end().has_prefix(&v.0) {
            Some(-offset)
        } else {
            None
        }
    }

    /// Coordinate of the point where the ray from the axis towards `end`
    /// leaves the axis. `None` if `end` is one of the axis's own ends.
    fn projection_of_end(&self, end: &End) -> Option<i64> {
        let base = self.conjugator.len();
        let forward = self.attracting_end().common_prefix_len(end)?;
        let backward = self.repelling_end().common_prefix_len(end)?;
        Some(if forward > base {
            (forward - base) as i64
        } else if backward > base {
            -((backward - base) as i64)
        } else {
            0
        })
    }
}

impl Serialize for Axis {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        AxisJson {
            conjugator: self.conjugator.clone(),
            core: self.core.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Axis {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Axis, D::Error> {
        let j = AxisJson::deserialize(deserializer)?;
        Axis::new(j.conjugator, j.core).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AxisJson {
    conjugator: ReducedWord,
    core: CyclicWord,
}

/// A path along an axis, read in that axis's attracting direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeSegment {
    pub start: TreeVertex,
    pub label: ReducedWord,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntersectionResult {
    Empty,
    Vertex(TreeVertex),
    Segment(TreeSegment),
    SameLine,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IntersectionJson {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    start: Option<ReducedWord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<ReducedWord>,
}

impl Serialize for IntersectionResult {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let (kind, start, label) = match self {
            IntersectionResult::Empty => ("empty", None, None),
            IntersectionResult::Vertex(v) => ("vertex", Some(v.0.clone()), None),
            IntersectionResult::Segment(s) => ("segment", Some(s.start.0.clone()), Some(s.label.clone())),
            IntersectionResult::SameLine => ("line", None, None),
        };
        IntersectionJson {
            kind: kind.to_owned(),
            start,
            label,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IntersectionResult {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<IntersectionResult, D::Error> {
        use serde::de::Error;
        let j = IntersectionJson::deserialize(deserializer)?;
        match (j.kind.as_str(), j.start, j.label) {
            ("empty", None, None) => Ok(IntersectionResult::Empty),
            ("line", None, None) => Ok(IntersectionResult::SameLine),
            ("vertex", Some(v), None) => Ok(IntersectionResult::Vertex(TreeVertex(v))),
            ("segment", Some(v), Some(label)) => Ok(IntersectionResult::Segment(TreeSegment {
                start: TreeVertex(v),
                label,
            })),
            (kind, _, _) => Err(D::Error::custom(format!("malformed intersection of kind {kind:?}"))),
        }
    }
}

/// Intersection of two axes in the coordinates of the first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Overlap {
    Empty,
    /// Vertices with coordinates in the closed range `[lo, hi]`.
    Range { lo: i64, hi: i64 },
    SameLine,
}

pub fn axis_of(g: &ReducedWord) -> Result<Axis, TreeError> {
    if g.is_empty() {
        return Err(TreeError::IdentityHasNoAxis);
    }
    let d = cyclic_reduce(g);
    Ok(Axis {
        conjugator: d.conjugator,
        core: d.core,
    })
}

pub fn translation_length(g: &ReducedWord) -> usize {
    cyclic_reduce(g).core.len()
}

/// The image of `axis` under left multiplication by `g`.
pub fn translate_axis(g: &ReducedWord, axis: &Axis) -> Axis {
    axis_of(&axis.element().conjugate_by(g)).expect("conjugates of non-trivial elements are non-trivial")
}

/// Computes the intersection from the positions at which the ends of `b`
/// branch off `a`.
pub fn axis_overlap(a: &Axis, b: &Axis) -> Overlap {
    let (b_plus, b_minus) = (b.attracting_end(), b.repelling_end());
    let p_plus = a.projection_of_end(&b_plus);
    let p_minus = a.projection_of_end(&b_minus);
    let (p_plus, p_minus) = match (p_plus, p_minus) {
        (Some(p), Some(m)) => (p, m),
        (None, None) => return Overlap::SameLine,
        // The stabiliser of an end under a free action is cyclic, so axes
        // sharing one end share both.
        _ => unreachable!("axes of {} and {} share exactly one end", a.element(), b.element()),
    };
    if p_plus != p_minus {
        return Overlap::Range {
            lo: p_plus.min(p_minus),
            hi: p_plus.max(p_minus),
        };
    }
    if b.contains(&a.vertex_at(p_plus)) {
        Overlap::Range { lo: p_plus, hi: p_plus }
    } else {
        Overlap::Empty
    }
}

pub fn axis_intersection(a: &Axis, b: &Axis) -> IntersectionResult {
    match axis_overlap(a, b) {
        Overlap::Empty => IntersectionResult::Empty,
        Overlap::SameLine => IntersectionResult::SameLine,
        Overlap::Range { lo, hi } if lo == hi => IntersectionResult::Vertex(a.vertex_at(lo)),
        Overlap::Range { lo, hi } => IntersectionResult::Segment(TreeSegment {
            start: a.vertex_at(lo),
            label: a.label_between(lo, hi),
        }),
    }
}

/// Axis vertices within `radius` edges of the conjugator vertex.
pub fn axis_window(axis: &Axis, radius: usize) -> BTreeSet<TreeVertex> {
    let r = radius as i64;
    (-r..=r).map(|i| axis.vertex_at(i)).collect()
}
