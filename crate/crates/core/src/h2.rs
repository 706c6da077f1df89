//! The punctured torus group acting on the upper half-plane, and a numerical
//! scan of triangles cut out by lifts of a closed geodesic.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::word::{Letter, ReducedWord};

/// Tolerance for deciding that two lifts share an endpoint.
pub const DEDUP_TOL: f64 = 1e-8;
/// Minimum separation between triangle vertices.
pub const VERTEX_SEPARATION: f64 = 1e-7;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum H2Error {
    #[error("element with trace {trace} is not hyperbolic")]
    NotHyperbolic { trace: f64 },
    #[error("geodesics are identical")]
    IdenticalGeodesics,
    #[error("geodesic endpoints must be distinct")]
    DegenerateGeodesic,
    #[error("invalid representation: {0}")]
    InvalidRep(String),
    #[error("word {0} is not cyclically reduced")]
    NotCyclicallyReduced(String),
    #[error("cannot parse matrix {0:?}: expected \"a,b,c,d\"")]
    MatrixSyntax(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Mat2 {
        Mat2 { a, b, c, d }
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    /// Inverse of a determinant-one matrix.
    pub fn inverse(&self) -> Mat2 {
        Mat2 {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn max_abs_diff(&self, o: &Mat2) -> f64 {
        [self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d]
            .iter()
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn apply_point(&self, p: PointH2) -> PointH2 {
        let z = Complex64::new(p.re, p.im);
        let w = (z * self.a + self.b) / (z * self.c + self.d);
        PointH2 { re: w.re, im: w.im }
    }

    pub fn apply_ideal(&self, t: IdealPoint) -> IdealPoint {
        match t {
            IdealPoint::Infinity if self.c == 0.0 => IdealPoint::Infinity,
            IdealPoint::Infinity => IdealPoint::Finite(self.a / self.c),
            IdealPoint::Finite(t) => {
                let den = self.c * t + self.d;
                if den.abs() <= 1e-14 * (self.c * t).abs().max(self.d.abs()) {
                    IdealPoint::Infinity
                } else {
                    IdealPoint::Finite((self.a * t + self.b) / den)
                }
            }
        }
    }

    pub fn apply_geodesic(&self, g: &GeodesicH2) -> GeodesicH2 {
        let (p, q) = g.endpoints();
        GeodesicH2::new(self.apply_ideal(p), self.apply_ideal(q)).expect("Möbius maps are injective on the boundary")
    }
}

impl FromStr for Mat2 {
    type Err = H2Error;

    fn from_str(s: &str) -> Result<Mat2, H2Error> {
        let err = || H2Error::MatrixSyntax(s.to_string());
        let v: Vec<f64> = s
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| err())?;
        match v.as_slice() {
            &[a, b, c, d] => Ok(Mat2 { a, b, c, d }),
            _ => Err(err()),
        }
    }
}

/// Integer matrices for exact determinant and trace checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntMat2 {
    pub a: i128,
    pub b: i128,
    pub c: i128,
    pub d: i128,
}

impl IntMat2 {
    pub const IDENTITY: IntMat2 = IntMat2 { a: 1, b: 0, c: 0, d: 1 };

    /// `None` on overflow.
    pub fn mul(&self, o: &IntMat2) -> Option<IntMat2> {
        let dot = |p: i128, q: i128, r: i128, s: i128| p.checked_mul(q)?.checked_add(r.checked_mul(s)?);
        Some(IntMat2 {
            a: dot(self.a, o.a, self.b, o.c)?,
            b: dot(self.a, o.b, self.b, o.d)?,
            c: dot(self.c, o.a, self.d, o.c)?,
            d: dot(self.c, o.b, self.d, o.d)?,
        })
    }

    pub fn inverse(&self) -> IntMat2 {
        IntMat2 {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    pub fn det(&self) -> i128 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> i128 {
        self.a + self.d
    }

    pub fn to_f64(&self) -> Mat2 {
        Mat2::new(self.a as f64, self.b as f64, self.c as f64, self.d as f64)
    }
}

pub const DEFAULT_GEN_X: IntMat2 = IntMat2 { a: 1, b: 1, c: 1, d: 2 };
pub const DEFAULT_GEN_Y: IntMat2 = IntMat2 { a: 1, b: -1, c: -1, d: 2 };

/// Exact image of `w` under the default representation; `None` on overflow.
pub fn evaluate_exact(w: &ReducedWord) -> Option<IntMat2> {
    w.letters().iter().try_fold(IntMat2::IDENTITY, |m, &l| {
        let g = match l {
            Letter::X => DEFAULT_GEN_X,
            Letter::Y => DEFAULT_GEN_Y,
            Letter::XInv => DEFAULT_GEN_X.inverse(),
            Letter::YInv => DEFAULT_GEN_Y.inverse(),
        };
        m.mul(&g)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PuncturedTorusRep {
    pub gen_x: Mat2,
    pub gen_y: Mat2,
}

impl Default for PuncturedTorusRep {
    fn default() -> Self {
        PuncturedTorusRep {
            gen_x: DEFAULT_GEN_X.to_f64(),
            gen_y: DEFAULT_GEN_Y.to_f64(),
        }
    }
}

impl PuncturedTorusRep {
    /// Checks unit determinants and a parabolic commutator of trace −2.
    pub fn new(gen_x: Mat2, gen_y: Mat2) -> Result<PuncturedTorusRep, H2Error> {
        let rep = PuncturedTorusRep { gen_x, gen_y };
        rep.self_check()?;
        Ok(rep)
    }

    pub fn self_check(&self) -> Result<(), H2Error> {
        for (name, m) in [("x", self.gen_x), ("y", self.gen_y)] {
            if (m.det() - 1.0).abs() > 1e-9 {
                return Err(H2Error::InvalidRep(format!("det of {name} is {}", m.det())));
            }
        }
        let t = self.commutator().trace();
        if (t + 2.0).abs() > 1e-9 {
            return Err(H2Error::InvalidRep(format!("commutator trace is {t}, expected -2")));
        }
        Ok(())
    }

    pub fn commutator(&self) -> Mat2 {
        self.gen_x
            .mul(&self.gen_y)
            .mul(&self.gen_x.inverse())
            .mul(&self.gen_y.inverse())
    }

    pub fn letter(&self, l: Letter) -> Mat2 {
        match l {
            Letter::X => self.gen_x,
            Letter::Y => self.gen_y,
            Letter::XInv => self.gen_x.inverse(),
            Letter::YInv => self.gen_y.inverse(),
        }
    }
}

pub fn evaluate(rep: &PuncturedTorusRep, w: &ReducedWord) -> Mat2 {
    w.letters()
        .iter()
        .fold(Mat2::IDENTITY, |m, &l| m.mul(&rep.letter(l)))
}

fn check_hyperbolic(m: &Mat2) -> Result<(), H2Error> {
    if m.trace().abs() <= 2.0 + 1e-9 {
        Err(H2Error::NotHyperbolic { trace: m.trace() })
    } else {
        Ok(())
    }
}

pub fn translation_length_h2(m: &Mat2) -> Result<f64, H2Error> {
    check_hyperbolic(m)?;
    Ok(2.0 * (m.trace().abs() / 2.0).acosh())
}

/// A point of ℝ ∪ {∞}. Serialised as a number or the string `"inf"`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum IdealPoint {
    Finite(f64),
    Infinity,
}

impl IdealPoint {
    pub fn close_to(&self, o: &IdealPoint, tol: f64) -> bool {
        match (self, o) {
            (IdealPoint::Finite(a), IdealPoint::Finite(b)) => (a - b).abs() <= tol,
            (IdealPoint::Infinity, IdealPoint::Infinity) => true,
            _ => false,
        }
    }
}

impl fmt::Display for IdealPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdealPoint::Finite(t) => write!(f, "{t}"),
            IdealPoint::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for IdealPoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            IdealPoint::Finite(t) => s.serialize_f64(*t),
            IdealPoint::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for IdealPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(t) => Ok(IdealPoint::Finite(t)),
            Repr::Str(s) if s == "inf" => Ok(IdealPoint::Infinity),
            Repr::Str(s) => Err(serde::de::Error::custom(format!("bad ideal point {s:?}"))),
        }
    }
}

/// A complete geodesic, stored with endpoints `(lo, hi)` for a semicircle
/// or `(t, ∞)` for a vertical ray.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[IdealPoint; 2]", into = "[IdealPoint; 2]")]
pub struct GeodesicH2 {
    p: IdealPoint,
    q: IdealPoint,
}

impl TryFrom<[IdealPoint; 2]> for GeodesicH2 {
    type Error = H2Error;

    fn try_from([p, q]: [IdealPoint; 2]) -> Result<Self, H2Error> {
        GeodesicH2::new(p, q)
    }
}

impl From<GeodesicH2> for [IdealPoint; 2] {
    fn from(g: GeodesicH2) -> Self {
        [g.p, g.q]
    }
}

impl GeodesicH2 {
    pub fn new(p: IdealPoint, q: IdealPoint) -> Result<GeodesicH2, H2Error> {
        use IdealPoint::*;
        match (p, q) {
            (Finite(a), Finite(b)) if a == b || !a.is_finite() || !b.is_finite() => Err(H2Error::DegenerateGeodesic),
            (Finite(a), Finite(b)) => Ok(GeodesicH2 {
                p: Finite(a.min(b)),
                q: Finite(a.max(b)),
            }),
            (Finite(a), Infinity) | (Infinity, Finite(a)) if a.is_finite() => Ok(GeodesicH2 {
                p: Finite(a),
                q: Infinity,
            }),
            _ => Err(H2Error::DegenerateGeodesic),
        }
    }

    pub fn endpoints(&self) -> (IdealPoint, IdealPoint) {
        (self.p, self.q)
    }

    pub fn close_to(&self, o: &GeodesicH2, tol: f64) -> bool {
        self.p.close_to(&o.p, tol) && self.q.close_to(&o.q, tol)
    }

    /// How far `z` is from lying on the geodesic, in Euclidean terms.
    pub fn residual(&self, z: PointH2) -> f64 {
        match (self.p, self.q) {
            (IdealPoint::Finite(a), IdealPoint::Finite(b)) => {
                let (c, r) = ((a + b) / 2.0, (b - a) / 2.0);
                (((z.re - c).powi(2) + z.im.powi(2)).sqrt() - r).abs()
            }
            (IdealPoint::Finite(a), IdealPoint::Infinity) => (z.re - a).abs(),
            _ => unreachable!("normalised geodesics have a finite first endpoint"),
        }
    }
}

pub fn axis_geodesic_h2(m: &Mat2) -> Result<GeodesicH2, H2Error> {
    check_hyperbolic(m)?;
    let Mat2 { a, b, c, d } = *m;
    if c == 0.0 {
        return GeodesicH2::new(IdealPoint::Finite(b / (d - a)), IdealPoint::Infinity);
    }
    // Roots of c·t² + (d − a)·t − b, in cancellation-free form.
    let (qa, qb, qc) = (c, d - a, -b);
    let disc = (qb * qb - 4.0 * qa * qc).max(0.0).sqrt();
    let q = -0.5 * (qb + qb.signum() * disc);
    let q = if q == 0.0 { -0.5 * disc } else { q };
    GeodesicH2::new(IdealPoint::Finite(q / qa), IdealPoint::Finite(qc / q))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointH2 {
    pub re: f64,
    pub im: f64,
}

impl PointH2 {
    pub fn new(re: f64, im: f64) -> PointH2 {
        debug_assert!(im > 0.0);
        PointH2 { re, im }
    }
}

pub fn geodesic_intersect_h2(g1: &GeodesicH2, g2: &GeodesicH2) -> Result<Option<PointH2>, H2Error> {
    use IdealPoint::*;
    if g1 == g2 {
        return Err(H2Error::IdenticalGeodesics);
    }
    let point = match (g1.endpoints(), g2.endpoints()) {
        ((Finite(a1), Finite(b1)), (Finite(a2), Finite(b2))) => {
            let interleaved = (a1 < a2 && a2 < b1 && b1 < b2) || (a2 < a1 && a1 < b2 && b2 < b1);
            if !interleaved {
                return Ok(None);
            }
            let (c1, r1) = ((a1 + b1) / 2.0, (b1 - a1) / 2.0);
            let (c2, r2) = ((a2 + b2) / 2.0, (b2 - a2) / 2.0);
            let re = (c2 * c2 - c1 * c1 + r1 * r1 - r2 * r2) / (2.0 * (c2 - c1));
            (re, r1 * r1 - (re - c1).powi(2))
        }
        ((Finite(a), Finite(b)), (Finite(t), Infinity)) | ((Finite(t), Infinity), (Finite(a), Finite(b))) => {
            if !(a < t && t < b) {
                return Ok(None);
            }
            let (c, r) = ((a + b) / 2.0, (b - a) / 2.0);
            (t, r * r - (t - c).powi(2))
        }
        _ => return Ok(None),
    };
    let (re, im2) = point;
    if im2 <= 0.0 {
        return Ok(None);
    }
    Ok(Some(PointH2::new(re, im2.sqrt())))
}

pub fn hyp_distance(p: PointH2, q: PointH2) -> f64 {
    let num = (p.re - q.re).powi(2) + (p.im - q.im).powi(2);
    (1.0 + num / (2.0 * p.im * q.im)).acosh()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Lift {
    pub conjugator: ReducedWord,
    pub axis: GeodesicH2,
}

/// Reduced words of length at most `depth`, by length then lexicographically.
fn conjugators(depth: usize) -> Vec<ReducedWord> {
    let mut layer = vec![ReducedWord::empty()];
    let mut all = layer.clone();
    for _ in 0..depth {
        layer = layer
            .iter()
            .flat_map(|g| {
                Letter::ALL
                    .into_iter()
                    .filter(move |&l| g.last() != Some(l.inverse()))
                    .map(move |l| g.concat(&ReducedWord::from_letters_unchecked(vec![l])))
            })
            .collect();
        all.extend(layer.iter().cloned());
    }
    all
}

pub fn lifts_of(rep: &PuncturedTorusRep, w: &ReducedWord, depth: usize) -> Result<Vec<Lift>, H2Error> {
    if !w.is_cyclically_reduced() {
        return Err(H2Error::NotCyclicallyReduced(w.to_string()));
    }
    check_hyperbolic(&evaluate(rep, w))?;
    let mut lifts: Vec<Lift> = Vec::new();
    for g in conjugators(depth) {
        let axis = axis_geodesic_h2(&evaluate(rep, &w.conjugate_by(&g)))?;
        if !lifts.iter().any(|l| l.axis.close_to(&axis, DEDUP_TOL)) {
            lifts.push(Lift { conjugator: g, axis });
        }
    }
    Ok(lifts)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TriangleReport {
    pub axes: [Lift; 3],
    /// Pairwise intersections of axes (0,1), (1,2), (0,2).
    pub vertices: [PointH2; 3],
    /// The side lying on each axis, in axis order.
    pub edge_lengths: [f64; 3],
    pub gamma_length: f64,
    pub max_edge_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Violation {
    pub triangle: usize,
    pub edge: usize,
    pub length: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Theorem1Scan {
    pub word: ReducedWord,
    pub depth: usize,
    pub tolerance: f64,
    pub gamma_length: f64,
    pub lift_count: usize,
    pub triangles: Vec<TriangleReport>,
    pub degenerate: usize,
    pub violations: Vec<Violation>,
}

enum Triple {
    Triangle(Box<TriangleReport>),
    Degenerate,
}

pub fn theorem1_scan(
    rep: &PuncturedTorusRep,
    w: &ReducedWord,
    depth: usize,
    tolerance: f64,
) -> Result<Theorem1Scan, H2Error> {
    let gamma = translation_length_h2(&evaluate(rep, w))?;
    let lifts = lifts_of(rep, w, depth)?;
    let n = lifts.len();
    let mut meets = vec![None; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let p = geodesic_intersect_h2(&lifts[i].axis, &lifts[j].axis)?;
            meets[i * n + j] = p;
            meets[j * n + i] = p;
        }
    }
    let found: Vec<Triple> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let (lifts, meets) = (&lifts, &meets);
            (i + 1..n).flat_map(move |j| {
                (j + 1..n).filter_map(move |k| {
                    let (pij, pjk, pik) = (meets[i * n + j]?, meets[j * n + k]?, meets[i * n + k]?);
                    let sides = [hyp_distance(pij, pik), hyp_distance(pij, pjk), hyp_distance(pik, pjk)];
                    if sides.iter().any(|&s| s < VERTEX_SEPARATION) {
                        return Some(Triple::Degenerate);
                    }
                    let max = sides.iter().cloned().fold(0.0, f64::max);
                    Some(Triple::Triangle(Box::new(TriangleReport {
                        axes: [lifts[i].clone(), lifts[j].clone(), lifts[k].clone()],
                        vertices: [pij, pjk, pik],
                        edge_lengths: sides,
                        gamma_length: gamma,
                        max_edge_ratio: max / gamma,
                    })))
                })
            })
        })
        .collect();

    let mut triangles = Vec::new();
    let mut degenerate = 0;
    for t in found {
        match t {
            Triple::Triangle(r) => triangles.push(*r),
            Triple::Degenerate => degenerate += 1,
        }
    }
    let violations = triangles
        .iter()
        .enumerate()
        .flat_map(|(t, r)| {
            r.edge_lengths
                .iter()
                .enumerate()
                .filter(|(_, &len)| len >= gamma - tolerance)
                .map(move |(edge, &length)| Violation { triangle: t, edge, length })
        })
        .collect();
    Ok(Theorem1Scan {
        word: w.clone(),
        depth,
        tolerance,
        gamma_length: gamma,
        lift_count: n,
        triangles,
        degenerate,
        violations,
    })
}
