use proptest::prelude::*;
use treeaxes::tree::*;
use treeaxes::word::*;

fn r(s: &str) -> ReducedWord {
    s.parse().unwrap()
}

fn reduced_upto(n: usize) -> Vec<ReducedWord> {
    let mut layer = vec![ReducedWord::empty()];
    let mut all = layer.clone();
    for _ in 0..n {
        layer = layer
            .iter()
            .flat_map(|w| {
                Letter::ALL.into_iter().filter_map(move |l| {
                    let next = w.concat(&ReducedWord::from_letters(vec![l]).unwrap());
                    (next.len() == w.len() + 1).then_some(next)
                })
            })
            .collect();
        all.extend(layer.iter().cloned());
    }
    all
}

fn displacement(g: &ReducedWord, v: &ReducedWord) -> usize {
    v.invert().concat(g).concat(v).len()
}

/// Vertices of a's axis within `radius` of its base vertex that some
/// independent test places on b's axis: minimal displacement under b.
fn brute_intersection(a: &Axis, b: &Axis, radius: i64) -> Vec<(i64, TreeVertex)> {
    let gb = b.element();
    let lb = b.translation_length();
    (-radius..=radius)
        .map(|i| (i, a.vertex_at(i)))
        .filter(|(_, v)| displacement(&gb, v.address()) == lb)
        .collect()
}

fn check_against_oracle(a: &Axis, b: &Axis) {
    let radius = 2 * (a.element().len() + b.element().len()) as i64 + 4;
    let hits = brute_intersection(a, b, radius);
    let got = axis_intersection(a, b);
    if hits.len() as i64 == 2 * radius + 1 {
        assert_eq!(got, IntersectionResult::SameLine, "{:?} {:?}", a, b);
        return;
    }
    match hits.as_slice() {
        [] => assert_eq!(got, IntersectionResult::Empty),
        [(_, v)] => assert_eq!(got, IntersectionResult::Vertex(v.clone())),
        many => {
            // Contiguous along a, then read edge labels from successive vertices.
            assert!(many.windows(2).all(|w| w[1].0 == w[0].0 + 1));
            let letters: Vec<Letter> = many
                .windows(2)
                .map(|w| w[0].1.address().invert().concat(w[1].1.address()).letters()[0])
                .collect();
            let expected = TreeSegment {
                start: many[0].1.clone(),
                label: ReducedWord::from_letters(letters).unwrap(),
            };
            assert_eq!(got, IntersectionResult::Segment(expected), "{:?} {:?}", a.element(), b.element());
        }
    }
}

#[test]
fn intersection_matches_displacement_oracle() {
    let words = reduced_upto(3);
    let cores: Vec<ReducedWord> = words.iter().filter(|w| !w.is_empty() && w.is_cyclically_reduced()).cloned().collect();
    let short: Vec<ReducedWord> = words.iter().filter(|w| w.len() <= 1).cloned().collect();
    let medium: Vec<ReducedWord> = words.iter().filter(|w| w.len() <= 2).cloned().collect();
    let left: Vec<Axis> = cores
        .iter()
        .flat_map(|c| short.iter().map(move |g| axis_of(&c.conjugate_by(g)).unwrap()))
        .collect();
    let right: Vec<Axis> = cores
        .iter()
        .filter(|c| c.len() <= 2)
        .flat_map(|c| medium.iter().map(move |g| axis_of(&c.conjugate_by(g)).unwrap()))
        .collect();
    for a in &left {
        for b in &right {
            check_against_oracle(a, b);
        }
    }
}

#[test]
fn axis_vertices_have_minimal_displacement() {
    for g in reduced_upto(5).into_iter().filter(|g| !g.is_empty()) {
        let axis = axis_of(&g).unwrap();
        let l = translation_length(&g);
        assert_eq!(l, cyclic_reduce(&g).core.len());
        for v in axis_window(&axis, 6) {
            assert_eq!(displacement(&g, v.address()), l);
            assert!(axis.contains(&v));
            // Off-axis neighbours move by two more edges per step away.
            for letter in Letter::ALL {
                let u = v.address().concat(&ReducedWord::from_letters(vec![letter]).unwrap());
                let w = TreeVertex(u.clone());
                if !axis.contains(&w) {
                    assert_eq!(displacement(&g, &u), l + 2, "{g} {u}");
                }
            }
        }
    }
}

#[test]
fn element_translates_along_its_axis() {
    for g in reduced_upto(4).into_iter().filter(|g| !g.is_empty()) {
        let axis = axis_of(&g).unwrap();
        let l = axis.translation_length() as i64;
        for i in -8..8 {
            let moved = g.concat(axis.vertex_at(i).address());
            assert_eq!(TreeVertex(moved), axis.vertex_at(i + l));
            assert_eq!(axis.coordinate_of(&axis.vertex_at(i)), Some(i));
        }
    }
}

#[test]
fn identity_has_no_axis() {
    assert!(axis_of(&r("")).is_err());
    assert_eq!(translation_length(&r("")), 0);
}

fn element() -> impl Strategy<Value = ReducedWord> {
    prop::collection::vec(prop::sample::select(vec!['x', 'y', 'X', 'Y']), 1..9)
        .prop_map(|v| ReducedWord::parse_reducing(&v.into_iter().collect::<String>()).unwrap())
        .prop_filter("non-trivial", |w| !w.is_empty())
}

fn translated(h: &ReducedWord, r: IntersectionResult) -> IntersectionResult {
    match r {
        IntersectionResult::Vertex(v) => IntersectionResult::Vertex(TreeVertex(h.concat(v.address()))),
        IntersectionResult::Segment(s) => IntersectionResult::Segment(TreeSegment {
            start: TreeVertex(h.concat(s.start.address())),
            label: s.label,
        }),
        other => other,
    }
}

proptest! {
    #[test]
    fn intersection_is_equivariant(a in element(), b in element(), h in element()) {
        let (aa, ab) = (axis_of(&a).unwrap(), axis_of(&b).unwrap());
        let moved = axis_intersection(&translate_axis(&h, &aa), &translate_axis(&h, &ab));
        prop_assert_eq!(moved, translated(&h, axis_intersection(&aa, &ab)));
    }

    #[test]
    fn random_pairs_match_oracle(a in element(), b in element()) {
        check_against_oracle(&axis_of(&a).unwrap(), &axis_of(&b).unwrap());
    }

    #[test]
    fn overlap_length_is_symmetric(a in element(), b in element()) {
        let (aa, ab) = (axis_of(&a).unwrap(), axis_of(&b).unwrap());
        let len = |r: IntersectionResult| match r {
            IntersectionResult::Segment(s) => Some(s.label.len()),
            IntersectionResult::Vertex(_) => Some(0),
            IntersectionResult::Empty => None,
            IntersectionResult::SameLine => Some(usize::MAX),
        };
        prop_assert_eq!(len(axis_intersection(&aa, &ab)), len(axis_intersection(&ab, &aa)));
    }
}
