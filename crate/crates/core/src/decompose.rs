//! Periodic decompositions `W = B·Cᵏ·I` forced by self-overlaps of W̃, and
//! the finite check of the power-form conjecture `W = D·Cᵏ`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tripod::TripodReport;
use crate::word::{is_initial_subword, is_terminal_subword, periodicity_decompose, CyclicWord, ReducedWord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecomposeError {
    #[error("overlap length {u_len} must lie in [1, {max}]")]
    InvalidOverlapLength { u_len: usize, max: usize },
    #[error("{0:?} is not an initial subword of the periodic word")]
    NotPrefixPositioned(String),
    #[error("decomposition hypotheses unrealized: no non-equivalent copy of U begins inside U")]
    HypothesesUnrealized,
    #[error("degenerate configuration: W is the square of the overlap, so the axes coincide")]
    DegenerateConfiguration,
    #[error("period {shift} does not extend across W")]
    PeriodBreak { shift: usize },
    #[error("configuration must cover W with edge-disjoint overlaps")]
    NotCoveringEdgeDisjoint,
}

/// `W = B·Cᵏ·I` with `B` terminal and `I` initial in `C`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Decomposition {
    #[serde(rename = "B")]
    pub b: ReducedWord,
    #[serde(rename = "C")]
    pub c: ReducedWord,
    pub k: usize,
    #[serde(rename = "I")]
    pub i: ReducedWord,
}

impl Decomposition {
    /// `T` in `C = I·T`.
    pub fn tail(&self) -> ReducedWord {
        self.c.suffix(self.c.len() - self.i.len())
    }

    fn expand(&self) -> Vec<crate::word::Letter> {
        let mut letters = self.b.letters().to_vec();
        for _ in 0..self.k {
            letters.extend_from_slice(self.c.letters());
        }
        letters.extend_from_slice(self.i.letters());
        letters
    }

    /// The same decomposition read backwards: `W⁻¹ = I⁻¹·(C⁻¹)ᵏ·B⁻¹`.
    pub fn inverted(&self) -> Decomposition {
        Decomposition {
            b: self.i.invert(),
            c: self.c.invert(),
            k: self.k,
            i: self.b.invert(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum Theorem2Outcome {
    Decomposed(Decomposition),
    /// `U ∪ U₂` is a proper subword of W.
    Inconclusive { shift: usize, union_len: usize },
}

/// Shifts `t ∈ [1, L(W))` with `W̃[t, t + L(U)) = U`.
pub fn find_nonequivalent_occurrence(w: &CyclicWord, u: &ReducedWord) -> Result<Vec<usize>, DecomposeError> {
    let not_prefix = || DecomposeError::NotPrefixPositioned(u.to_string());
    if u.is_empty() || w.is_empty() {
        return Err(not_prefix());
    }
    let matches_at = |t: usize| {
        u.letters()
            .iter()
            .enumerate()
            .all(|(i, &l)| w.periodic_letter((t + i) as i64) == l)
    };
    if !matches_at(0) {
        return Err(not_prefix());
    }
    Ok((1..w.len()).filter(|&t| matches_at(t)).collect())
}

/// Periodicity argument applied to the overlap `U = W[0, u_len)`.
///
/// Among occurrences of U beginning inside U, takes the smallest shift `t`
/// for which `U ∪ U₂` reaches the end of W, splits `U = B·Cᵏ⁰` with
/// `L(C) = t`, and lets the remaining letters of W form `I`.
pub fn theorem2_decompose(w: &CyclicWord, u_len: usize) -> Result<Theorem2Outcome, DecomposeError> {
    let n = w.len();
    if u_len == 0 || u_len >= n {
        return Err(DecomposeError::InvalidOverlapLength {
            u_len,
            max: n.saturating_sub(1),
        });
    }
    let u = w.word().prefix(u_len);
    if 2 * u_len == n && w.word().suffix(u_len) == u {
        return Err(DecomposeError::DegenerateConfiguration);
    }
    let inside: Vec<usize> = find_nonequivalent_occurrence(w, &u)?
        .into_iter()
        .filter(|&t| t < u_len)
        .collect();
    let Some(&smallest) = inside.first() else {
        return Err(DecomposeError::HypothesesUnrealized);
    };
    let Some(&shift) = inside.iter().find(|&&t| u_len + t >= n) else {
        return Ok(Theorem2Outcome::Inconclusive {
            shift: smallest,
            union_len: u_len + smallest,
        });
    };

    let p = periodicity_decompose(&u, shift).map_err(|_| DecomposeError::PeriodBreak { shift })?;
    let mut d = Decomposition {
        b: p.head,
        c: p.period,
        k: p.power,
        i: w.word().suffix(n - u_len),
    };
    if d.i.len() == shift {
        d.k += 1;
        d.i = ReducedWord::empty();
    }
    if !verify_decomposition(w, &d) {
        return Err(DecomposeError::PeriodBreak { shift });
    }
    Ok(Theorem2Outcome::Decomposed(d))
}

pub fn verify_decomposition(w: &CyclicWord, d: &Decomposition) -> bool {
    d.k > 0
        && !d.c.is_empty()
        && is_terminal_subword(&d.b, &d.c)
        && is_initial_subword(&d.i, &d.c)
        && d.expand() == w.letters()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConjectureWitness {
    #[serde(rename = "D")]
    pub d: ReducedWord,
    #[serde(rename = "C")]
    pub c: ReducedWord,
    pub k: usize,
    pub r: usize,
    pub s: usize,
}

/// `W = D·Cᵏ` with `k > 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSplit {
    pub d: ReducedWord,
    pub c: ReducedWord,
    pub k: usize,
}

impl PowerSplit {
    /// `Cʳ·D·Cᵏ⁻ʳ`, a rotation of W.
    pub fn conjugate_form(&self, r: usize) -> ReducedWord {
        let mut letters = Vec::new();
        for _ in 0..r {
            letters.extend_from_slice(self.c.letters());
        }
        letters.extend_from_slice(self.d.letters());
        for _ in r..self.k {
            letters.extend_from_slice(self.c.letters());
        }
        ReducedWord::from_letters(letters).expect("rotations of a cyclically reduced word are reduced")
    }
}

/// All splits `W = D·Cᵏ`, `k > 1`, ordered by `L(C)` then `k`.
pub fn power_suffix_splits(w: &CyclicWord) -> Vec<PowerSplit> {
    let n = w.len();
    let letters = w.letters();
    let mut splits = Vec::new();
    for period in 1..=n / 2 {
        for k in 2..=n / period {
            let start = n - k * period;
            let tail = &letters[start..];
            if (0..tail.len() - period).all(|i| tail[i] == tail[i + period]) {
                splits.push(PowerSplit {
                    d: w.word().prefix(start),
                    c: w.word().suffix(period),
                    k,
                });
            }
        }
    }
    splits
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureCheck {
    pub witness: Option<ConjectureWitness>,
    /// Some split matches one of the two conjugates, or both with `r = s`.
    pub near_miss: bool,
}

/// Searches all `(C, k, D)` with `W = D·Cᵏ`, `k > 1`, and `r ≠ s` such that
/// the conjugate words equal `Cʳ·D·Cᵏ⁻ʳ` and `Cˢ·D·Cᵏ⁻ˢ` letterwise.
pub fn conjecture_form_check_words(w: &CyclicWord, w1: &CyclicWord, w2: &CyclicWord) -> ConjectureCheck {
    let mut near_miss = false;
    for split in power_suffix_splits(w) {
        let forms: Vec<ReducedWord> = (0..=split.k).map(|r| split.conjugate_form(r)).collect();
        let rs: Vec<usize> = (0..=split.k).filter(|&r| &forms[r] == w1.word()).collect();
        let ss: Vec<usize> = (0..=split.k).filter(|&s| &forms[s] == w2.word()).collect();
        near_miss |= !rs.is_empty() || !ss.is_empty();
        for &r in &rs {
            if let Some(&s) = ss.iter().find(|&&s| s != r) {
                return ConjectureCheck {
                    witness: Some(ConjectureWitness {
                        d: split.d,
                        c: split.c,
                        k: split.k,
                        r,
                        s,
                    }),
                    near_miss: false,
                };
            }
        }
    }
    ConjectureCheck {
        witness: None,
        near_miss,
    }
}

/// The conjecture check for a tripod, with W taken at the report's copy.
pub fn conjecture_form_check(report: &TripodReport) -> Result<ConjectureCheck, DecomposeError> {
    if !report.covers || !report.uv_meet.is_edge_disjoint() {
        return Err(DecomposeError::NotCoveringEdgeDisjoint);
    }
    let w = report.w.rotate(report.copy_offset);
    let w1 = crate::tripod::conjugate_core(&w, &report.g1.conjugate_by(&shift_to_copy(report)));
    let w2 = crate::tripod::conjugate_core(&w, &report.g2.conjugate_by(&shift_to_copy(report)));
    Ok(conjecture_form_check_words(&w, &w1, &w2))
}

/// `h` with `h·axis(W) = axis(rotate(W, offset))` sending the copy's start
/// vertex to the basepoint.
fn shift_to_copy(report: &TripodReport) -> ReducedWord {
    let lambda = crate::tree::axis_of(report.w.word()).expect("non-empty");
    lambda.vertex_at(report.copy_offset).address().invert()
}
