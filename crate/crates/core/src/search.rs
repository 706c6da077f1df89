//! Exhaustive search over cyclically reduced words for covering,
//! edge-disjoint overlap configurations.
//!
//! A conjugate axis g·λ that shares at least one edge with λ = axis(W), with
//! matching orientation, is the same thing as a maximal run of W̃ agreeing
//! with its translate by some shift `t ∈ [1, L(W))`. Configurations are built
//! from pairs of such runs, so no tree geometry is needed on the hot path;
//! [`crate::tripod::realizing_conjugator`] recovers explicit conjugators.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decompose::{
    conjecture_form_check_words, theorem2_decompose, verify_decomposition, ConjectureWitness, Decomposition,
    Theorem2Outcome,
};
use crate::tripod::{conjugate_core, realizing_conjugator, Interval, Meet};
use crate::word::{cyclic_reduce, CyclicWord, Letter, ReducedWord};

pub const SCHEMA_VERSION: u32 = 1;

/// Words per parallel batch; output is written batch by batch in order.
const BATCH: usize = 2048;

/// Every reduced word of length `n`, in lexicographic order, restricted to
/// those starting with `first` when given.
fn reduced_words(n: usize, first: Option<Letter>) -> Vec<Vec<Letter>> {
    fn extend(prefix: &mut Vec<Letter>, n: usize, out: &mut Vec<Vec<Letter>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for l in Letter::ALL {
            if prefix.last() == Some(&l.inverse()) {
                continue;
            }
            prefix.push(l);
            extend(prefix, n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
        return out;
    }
    let starts: Vec<Letter> = match first {
        Some(l) => vec![l],
        None => Letter::ALL.to_vec(),
    };
    for l in starts {
        let mut prefix = vec![l];
        extend(&mut prefix, n, &mut out);
    }
    out
}

/// Images of `x` and `y` under the eight automorphisms permuting
/// `{x, y, x⁻¹, y⁻¹}` compatibly with inversion.
fn letter_automorphisms() -> Vec<[Letter; 4]> {
    use Letter::*;
    let mut maps = Vec::new();
    for (ix, iy) in [(X, Y), (Y, X)] {
        for sx in [false, true] {
            for sy in [false, true] {
                let fx = if sx { ix.inverse() } else { ix };
                let fy = if sy { iy.inverse() } else { iy };
                maps.push([fx, fy, fx.inverse(), fy.inverse()]);
            }
        }
    }
    maps
}

fn apply(map: &[Letter; 4], l: Letter) -> Letter {
    match l {
        Letter::X => map[0],
        Letter::Y => map[1],
        Letter::XInv => map[2],
        Letter::YInv => map[3],
    }
}

/// Whether `w` is the lexicographically least word in its orbit under
/// rotation, inversion and the letter automorphisms.
pub fn is_orbit_representative(w: &[Letter]) -> bool {
    let n = w.len();
    let inverse: Vec<Letter> = w.iter().rev().map(|l| l.inverse()).collect();
    for map in letter_automorphisms() {
        for source in [w, inverse.as_slice()] {
            let image: Vec<Letter> = source.iter().map(|&l| apply(&map, l)).collect();
            for r in 0..n {
                let rotated = image[r..].iter().chain(&image[..r]);
                if rotated.lt(w.iter()) {
                    return false;
                }
            }
        }
    }
    true
}

/// Cyclically reduced words of length exactly `n` in lexicographic order.
pub fn enumerate_cyclically_reduced(n: usize, modulo_symmetry: bool) -> Vec<CyclicWord> {
    // Every orbit contains a word beginning with x, and x is the least letter.
    let first = modulo_symmetry.then_some(Letter::X);
    reduced_words(n, first)
        .into_par_iter()
        .filter(|w| n <= 1 || w[n - 1] != w[0].inverse())
        .filter(|w| !modulo_symmetry || is_orbit_representative(w))
        .map(|w| CyclicWord::new_unchecked(ReducedWord::from_letters_unchecked(w)))
        .collect()
}

/// A maximal run `[lo, hi)` of W̃ agreeing with its translate by `shift`.
/// `lo` is normalised into `[0, L(W))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatchRun {
    pub shift: usize,
    pub interval: Interval,
    pub label: ReducedWord,
}

impl MatchRun {
    pub fn len(&self) -> usize {
        self.interval.len()
    }

    pub fn is_empty(&self) -> bool {
        self.interval.is_empty()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MatchRuns {
    /// Runs of length at least one edge and at most `L(W) − 2`.
    pub runs: Vec<MatchRun>,
    /// Shifts under which W̃ is invariant (W a proper power).
    pub coincident_shifts: Vec<usize>,
    /// Runs of length `L(W) − 1`; always empty, since distinct axes overlap in at most `L(W) − 2` edges.
    pub long_runs: Vec<MatchRun>,
}

pub fn match_runs(w: &CyclicWord) -> MatchRuns {
    let n = w.len();
    let mut out = MatchRuns::default();
    for shift in 1..n {
        let mismatches: Vec<usize> = (0..n)
            .filter(|&i| w.periodic_letter(i as i64) != w.periodic_letter((i + shift) as i64))
            .collect();
        if mismatches.is_empty() {
            out.coincident_shifts.push(shift);
            continue;
        }
        for (j, &m) in mismatches.iter().enumerate() {
            let next = mismatches.get(j + 1).copied().unwrap_or(mismatches[0] + n);
            let len = next - m - 1;
            if len == 0 {
                continue;
            }
            let lo = ((m + 1) % n) as i64;
            let run = MatchRun {
                shift,
                interval: Interval { lo, hi: lo + len as i64 },
                label: w.periodic_subword(lo, lo + len as i64),
            };
            if len + 1 >= n {
                out.long_runs.push(run);
            } else {
                out.runs.push(run);
            }
        }
    }
    out.runs.sort_by_key(|r| (r.shift, r.interval.lo));
    out
}

/// Two runs whose overlaps cover a copy of W and share exactly one vertex.
/// The copy starts where `u` starts; `v` starts where `u` ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub u: MatchRun,
    pub v: MatchRun,
}

impl Config {
    pub fn rotation(&self) -> i64 {
        self.u.interval.lo
    }

    pub fn excess(&self, n: usize) -> usize {
        self.u.len() + self.v.len() - n
    }
}

pub fn configs_for(w: &CyclicWord) -> Vec<Config> {
    configs_from_runs(w, &match_runs(w).runs)
}

fn configs_from_runs(w: &CyclicWord, runs: &[MatchRun]) -> Vec<Config> {
    let n = w.len() as i64;
    let mut configs = Vec::new();
    for u in runs {
        let v_start = u.interval.hi.rem_euclid(n);
        for v in runs {
            if v.interval.lo == v_start && u.len() + v.len() >= w.len() {
                configs.push(Config { u: u.clone(), v: v.clone() });
            }
        }
    }
    configs
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Forward,
    Reverse,
}

/// `(T, B)` with `C = I·T`, for inspecting when `T ≠ B`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailPair {
    #[serde(rename = "T")]
    pub t: ReducedWord,
    #[serde(rename = "B")]
    pub b: ReducedWord,
}

/// Which overlap a decomposition was read from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    U,
    V,
}

/// One way of reading an overlap as an initial subword: forwards from its
/// start, or inverted from its end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Reading {
    pub side: Side,
    pub orientation: Orientation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "lowercase", deny_unknown_fields)]
pub enum Theorem2Record {
    Decomposed {
        reading: Reading,
        /// The rotation of W that the decomposition spells out.
        word: CyclicWord,
        decomposition: Decomposition,
        tail: TailPair,
    },
    Inconclusive {
        reading: Reading,
        word: CyclicWord,
        shift: usize,
        union_len: usize,
    },
    Failure {
        reading: Reading,
        word: CyclicWord,
        reason: String,
    },
}

impl Theorem2Record {
    pub fn is_decomposed(&self) -> bool {
        matches!(self, Theorem2Record::Decomposed { .. })
    }
}

fn try_reading(rotated: &CyclicWord, config: &Config, reading: Reading) -> Theorem2Record {
    let (lo, len) = match reading.side {
        Side::U => (0, config.u.len()),
        Side::V => (config.u.len() as i64, config.v.len()),
    };
    let (word, target) = match reading.orientation {
        Orientation::Forward => {
            let word = rotated.rotate(lo);
            (word.clone(), word)
        }
        Orientation::Reverse => {
            let word = rotated.rotate(lo + len as i64);
            (word.clone(), word.inverse())
        }
    };
    match theorem2_decompose(&target, len) {
        Ok(Theorem2Outcome::Decomposed(d)) => {
            let decomposition = match reading.orientation {
                Orientation::Forward => d,
                Orientation::Reverse => d.inverted(),
            };
            if !verify_decomposition(&word, &decomposition) {
                return Theorem2Record::Failure {
                    reading,
                    word,
                    reason: "decomposition failed verification".into(),
                };
            }
            let tail = TailPair {
                t: decomposition.tail(),
                b: decomposition.b.clone(),
            };
            Theorem2Record::Decomposed {
                reading,
                word,
                decomposition,
                tail,
            }
        }
        Ok(Theorem2Outcome::Inconclusive { shift, union_len }) => Theorem2Record::Inconclusive {
            reading,
            word,
            shift,
            union_len,
        },
        Err(e) => Theorem2Record::Failure {
            reading,
            word,
            reason: e.to_string(),
        },
    }
}

/// Applies the decomposition to the longer overlap. Its non-equivalent copy
/// overlaps it in positive length on at least one end, so both directions
/// are tried, forwards first.
pub fn theorem2_for_config(w: &CyclicWord, config: &Config) -> Theorem2Record {
    let rotated = w.rotate(config.rotation());
    let sides: &[Side] = match config.u.len().cmp(&config.v.len()) {
        std::cmp::Ordering::Greater => &[Side::U],
        std::cmp::Ordering::Less => &[Side::V],
        std::cmp::Ordering::Equal => &[Side::U, Side::V],
    };
    let mut fallback: Option<Theorem2Record> = None;
    for &side in sides {
        for orientation in [Orientation::Forward, Orientation::Reverse] {
            let record = try_reading(&rotated, config, Reading { side, orientation });
            match record {
                Theorem2Record::Decomposed { .. } => return record,
                Theorem2Record::Inconclusive { .. } => {
                    if !matches!(fallback, Some(Theorem2Record::Inconclusive { .. })) {
                        fallback = Some(record);
                    }
                }
                Theorem2Record::Failure { .. } => {
                    fallback.get_or_insert(record);
                }
            }
        }
    }
    fallback.expect("at least one reading is tried")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigRecord {
    pub rotation: i64,
    pub u: MatchRun,
    pub v: MatchRun,
    pub covers: bool,
    pub meet: Meet,
    pub excess: usize,
    /// Conjugators realising the two overlaps against the axis of the
    /// rotated word.
    pub g1: ReducedWord,
    pub g2: ReducedWord,
    pub w1: CyclicWord,
    pub w2: CyclicWord,
    pub theorem2: Theorem2Record,
    pub conjecture: Option<FramedWitness>,
    pub near_miss: bool,
}

/// A conjecture witness read with the base point moved `frame` edges along
/// λ from the start of the copy; `W`, `w1`, `w2` are the labels seen from
/// there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FramedWitness {
    pub frame: usize,
    #[serde(rename = "W")]
    pub w: CyclicWord,
    pub w1: CyclicWord,
    pub w2: CyclicWord,
    pub witness: ConjectureWitness,
}

/// Checks every base point on one period of λ.
pub fn conjecture_over_frames(
    rotated: &CyclicWord,
    g1: &ReducedWord,
    g2: &ReducedWord,
) -> (Option<FramedWitness>, bool) {
    let e1 = rotated.word().conjugate_by(g1);
    let e2 = rotated.word().conjugate_by(g2);
    let mut near_miss = false;
    for frame in 0..rotated.len() {
        let back = rotated.periodic_subword(0, frame as i64).invert();
        let w = rotated.rotate(frame as i64);
        let w1 = cyclic_reduce(&e1.conjugate_by(&back)).core;
        let w2 = cyclic_reduce(&e2.conjugate_by(&back)).core;
        let check = conjecture_form_check_words(&w, &w1, &w2);
        if let Some(witness) = check.witness {
            return (
                Some(FramedWitness {
                    frame,
                    w,
                    w1,
                    w2,
                    witness,
                }),
                false,
            );
        }
        near_miss |= check.near_miss;
    }
    (None, near_miss)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchRecord {
    pub v: u32,
    #[serde(rename = "W")]
    pub w: CyclicWord,
    pub coincident_shifts: Vec<usize>,
    pub lemma1_exceptions: Vec<MatchRun>,
    pub configs: Vec<ConfigRecord>,
    pub counterexample: bool,
}

pub fn config_record(w: &CyclicWord, config: &Config) -> ConfigRecord {
    let rotated = w.rotate(config.rotation());
    let g1 = realizing_conjugator(&rotated, 0, config.u.shift as i64);
    let g2 = realizing_conjugator(&rotated, config.u.len() as i64, config.v.shift as i64);
    let w1 = conjugate_core(&rotated, &g1);
    let w2 = conjugate_core(&rotated, &g2);
    let (conjecture, near_miss) = conjecture_over_frames(&rotated, &g1, &g2);
    ConfigRecord {
        rotation: config.rotation(),
        u: config.u.clone(),
        v: config.v.clone(),
        covers: true,
        meet: Meet::Point,
        excess: config.excess(w.len()),
        g1,
        g2,
        w1,
        w2,
        theorem2: theorem2_for_config(w, config),
        conjecture,
        near_miss,
    }
}

pub fn search_record(w: &CyclicWord) -> SearchRecord {
    let runs = match_runs(w);
    let configs: Vec<ConfigRecord> = configs_from_runs(w, &runs.runs)
        .iter()
        .map(|c| config_record(w, c))
        .collect();
    let counterexample = configs
        .iter()
        .any(|c| c.covers && c.meet.is_edge_disjoint() && c.conjecture.is_none());
    SearchRecord {
        v: SCHEMA_VERSION,
        w: w.clone(),
        coincident_shifts: runs.coincident_shifts,
        lemma1_exceptions: runs.long_runs,
        configs,
        counterexample,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub min_len: usize,
    pub max_len: usize,
    pub symmetry: bool,
    /// Worker threads; `None` uses rayon's default.
    pub jobs: Option<usize>,
}

impl SearchOptions {
    pub fn new(max_len: usize) -> SearchOptions {
        SearchOptions {
            min_len: 1,
            max_len,
            symmetry: true,
            jobs: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchSummary {
    pub v: u32,
    pub min_len: usize,
    pub max_len: usize,
    pub symmetry: bool,
    pub words_scanned: u64,
    pub configs_found: u64,
    pub theorem2_successes: u64,
    pub theorem2_inconclusive: u64,
    pub theorem2_failures: u64,
    pub conjecture_witnesses: u64,
    pub near_misses: u64,
    pub counterexamples: u64,
    pub lemma1_exceptions: u64,
}

impl SearchSummary {
    fn absorb(&mut self, record: &SearchRecord) {
        self.words_scanned += 1;
        self.configs_found += record.configs.len() as u64;
        self.lemma1_exceptions += record.lemma1_exceptions.len() as u64;
        for c in &record.configs {
            match c.theorem2 {
                Theorem2Record::Decomposed { .. } => self.theorem2_successes += 1,
                Theorem2Record::Inconclusive { .. } => self.theorem2_inconclusive += 1,
                Theorem2Record::Failure { .. } => self.theorem2_failures += 1,
            }
            if c.conjecture.is_some() {
                self.conjecture_witnesses += 1;
            } else if c.near_miss {
                self.near_misses += 1;
            }
        }
        if record.counterexample {
            self.counterexamples += 1;
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SearchError {
    #[error("max_len must be at least 2, got {0}")]
    MaxLenTooSmall(usize),
    #[error("failed to start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
    #[error("report sink: {0}")]
    Io(#[from] io::Error),
}

/// Runs the search, writing one JSON line per word to `sink` ordered by
/// length and then lexicographically.
pub fn run_search<W: Write + Send>(options: &SearchOptions, sink: &mut W) -> Result<SearchSummary, SearchError> {
    if options.max_len < 2 {
        return Err(SearchError::MaxLenTooSmall(options.max_len));
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = options.jobs {
        builder = builder.num_threads(jobs);
    }
    let pool = builder.build()?;
    let mut summary = SearchSummary {
        v: SCHEMA_VERSION,
        min_len: options.min_len,
        max_len: options.max_len,
        symmetry: options.symmetry,
        ..SearchSummary::default()
    };
    pool.install(|| -> Result<(), SearchError> {
        for n in options.min_len.max(1)..=options.max_len {
            let words = enumerate_cyclically_reduced(n, options.symmetry);
            for batch in words.chunks(BATCH) {
                let lines: Vec<(SearchRecord, String)> = batch
                    .par_iter()
                    .map(|w| {
                        let record = search_record(w);
                        let line = serde_json::to_string(&record).expect("records serialise");
                        (record, line)
                    })
                    .collect();
                for (record, line) in &lines {
                    summary.absorb(record);
                    writeln!(sink, "{line}")?;
                }
            }
        }
        Ok(())
    })?;
    sink.flush()?;
    Ok(summary)
}
