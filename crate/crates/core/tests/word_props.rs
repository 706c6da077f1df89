use proptest::prelude::*;
use treeaxes::word::*;

const ALPHABET: [char; 4] = ['x', 'y', 'X', 'Y'];

fn inverse_char(c: char) -> char {
    if c.is_ascii_lowercase() {
        c.to_ascii_uppercase()
    } else {
        c.to_ascii_lowercase()
    }
}

/// Every string over the alphabet of length exactly `n`.
fn all_strings(n: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    for _ in 0..n {
        out = out
            .iter()
            .flat_map(|s| ALPHABET.iter().map(move |&c| format!("{s}{c}")))
            .collect();
    }
    out
}

/// Stack-based reduction, written independently of the library.
fn stack_reduce(s: &str) -> String {
    let mut stack: Vec<char> = Vec::new();
    for c in s.chars() {
        if stack.last() == Some(&inverse_char(c)) {
            stack.pop();
        } else {
            stack.push(c);
        }
    }
    stack.into_iter().collect()
}

fn reduced_strings(n: usize) -> Vec<String> {
    all_strings(n).into_iter().filter(|s| stack_reduce(s) == *s).collect()
}

fn r(s: &str) -> ReducedWord {
    s.parse().unwrap()
}

fn word_strategy(max: usize) -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(ALPHABET.to_vec()), 0..max).prop_map(|v| v.into_iter().collect())
}

#[test]
fn reduction_matches_stack_oracle_exhaustively() {
    for n in 0..=8 {
        for s in all_strings(n) {
            let reduced = free_reduce(&parse_word(&s).unwrap());
            assert_eq!(reduced.to_string(), stack_reduce(&s), "{s}");
            assert_eq!(free_reduce(&reduced.to_word()), reduced);
        }
    }
}

#[test]
fn cyclic_reduction_round_trips() {
    for n in 0..=9 {
        for s in reduced_strings(n) {
            let w = r(&s);
            let c = cyclic_reduce(&w);
            assert!(c.core.word().is_cyclically_reduced());
            assert_eq!(c.core.word().conjugate_by(&c.conjugator), w, "{s}");
            assert_eq!(c.conjugator.len() * 2 + c.core.len(), w.len());
        }
    }
}

#[test]
fn counts_of_reduced_words() {
    for n in 1..=7 {
        assert_eq!(reduced_strings(n).len(), 4 * 3usize.pow(n as u32 - 1));
    }
}

#[test]
fn commuting_pairs_share_an_axis() {
    let words: Vec<ReducedWord> = (1..=4).flat_map(reduced_strings).map(|s| r(&s)).collect();
    for u in &words {
        let cu = cyclic_reduce(u);
        let (ru, _) = primitive_root(cu.core.word(), true).unwrap();
        for v in &words {
            let commute = u.concat(v) == v.concat(u);
            let cv = cyclic_reduce(v);
            let (rv, _) = primitive_root(cv.core.word(), true).unwrap();
            let same_axis = cu.conjugator == cv.conjugator && (ru == rv || ru == rv.invert());
            assert_eq!(commute, same_axis, "{u} {v}");
        }
    }
}

#[test]
fn subword_predicates() {
    assert!(is_initial_subword(&r(""), &r("xy")));
    assert!(is_initial_subword(&r("xy"), &r("xyX")));
    assert!(!is_initial_subword(&r("y"), &r("xy")));
    assert!(is_terminal_subword(&r("yX"), &r("xyX")));
    assert!(!is_terminal_subword(&r("xyXy"), &r("xyX")));
}

#[test]
fn strict_parsing_rejects_unreduced_input() {
    assert!("xX".parse::<ReducedWord>().is_err());
    assert!("xyX".parse::<CyclicWord>().is_err());
    assert!("xa".parse::<ReducedWord>().is_err());
    assert_eq!(ReducedWord::parse_reducing("xXy").unwrap(), r("y"));
}

proptest! {
    #[test]
    fn reduction_is_idempotent(s in word_strategy(40)) {
        let w = free_reduce(&parse_word(&s).unwrap());
        prop_assert_eq!(w.to_string(), stack_reduce(&s));
        prop_assert_eq!(free_reduce(&w.to_word()), w);
    }

    #[test]
    fn inverse_cancels(s in word_strategy(30)) {
        let w = ReducedWord::parse_reducing(&s).unwrap();
        prop_assert!(concat(&w, &invert(&w)).is_empty());
        prop_assert!(concat(&invert(&w), &w).is_empty());
        prop_assert_eq!(invert(&invert(&w)), w);
    }

    #[test]
    fn multiplication_is_associative(a in word_strategy(12), b in word_strategy(12), c in word_strategy(12)) {
        let (a, b, c) = (
            ReducedWord::parse_reducing(&a).unwrap(),
            ReducedWord::parse_reducing(&b).unwrap(),
            ReducedWord::parse_reducing(&c).unwrap(),
        );
        prop_assert_eq!(a.concat(&b).concat(&c), a.concat(&b.concat(&c)));
        prop_assert_eq!(a.concat(&b).invert(), b.invert().concat(&a.invert()));
    }

    #[test]
    fn conjugation_preserves_core(s in word_strategy(20), g in word_strategy(8)) {
        let w = ReducedWord::parse_reducing(&s).unwrap();
        let g = ReducedWord::parse_reducing(&g).unwrap();
        let a = cyclic_reduce(&w).core;
        let b = cyclic_reduce(&conjugate(&g, &w)).core;
        prop_assert!(a.is_rotation_of(&b));
    }

    #[test]
    fn periodicity_reconstructs(s in word_strategy(16), shift in 1usize..8) {
        let u = ReducedWord::parse_reducing(&s).unwrap();
        if let Ok(p) = periodicity_decompose(&u, shift) {
            prop_assert_eq!(p.period.len(), shift);
            prop_assert!(p.power >= 1);
            prop_assert!(p.head.len() < shift);
            prop_assert!(is_terminal_subword(&p.head, &p.period));
            let mut rebuilt = p.head.to_string();
            for _ in 0..p.power {
                rebuilt.push_str(&p.period.to_string());
            }
            prop_assert_eq!(rebuilt, u.to_string());
        }
    }

    #[test]
    fn rotations_stay_cyclically_reduced(s in word_strategy(20), k in -30i64..30) {
        let core = cyclic_reduce(&ReducedWord::parse_reducing(&s).unwrap()).core;
        let rotated = core.rotate(k);
        prop_assert!(rotated.word().is_cyclically_reduced());
        prop_assert!(rotated.is_rotation_of(&core));
        prop_assert_eq!(rotated.rotate(-k), core);
    }
}
