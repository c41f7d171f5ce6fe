mod common;

use common::strategies::{atom, expr, render, shuffle};
use fourfold::manifold::reverse;
use fourfold::obstruction::{EqualityDiagnosis, Outcome, Parity, Tag};
use fourfold::{
    evaluate, format, freedman_class, homeomorphic, invariants, normalize, parse, parse_expr, Atom,
    InvariantRecord, Manifold, ManifoldExpr, Tri,
};
use proptest::prelude::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn record(m: &Manifold) -> InvariantRecord {
    invariants(m).unwrap_or_else(|e| panic!("{m}: {e}"))
}

fn without_complex(mut r: InvariantRecord) -> InvariantRecord {
    r.complex = None;
    r
}

/// A second representative of the same odd Freedman triple, when one exists.
fn odd_alternative(b_plus: i64, b_minus: i64) -> Option<Manifold> {
    (b_plus >= 1 && b_minus >= 1 && b_plus + b_minus > 2).then(|| {
        let text = format!("{}*CP2 # {}*CP2~ # S2xS2", b_plus - 1, b_minus - 1);
        parse(&text).unwrap()
    })
}

proptest! {
    #![proptest_config(config(10_000))]

    #[test]
    fn verdicts_are_exclusive(e in expr()) {
        let m = normalize(&e);
        let ev = evaluate(&m).unwrap_or_else(|err| panic!("{m}: {err}"));
        let ht = &ev.hitchin_thorpe;
        let sw = &ev.seiberg_witten;
        let obstructed = [ht.plus.outcome, ht.minus.outcome]
            .into_iter()
            .chain(sw.plus.iter().chain(sw.minus.iter()).map(|s| s.outcome))
            .any(|o| o == Outcome::Obstructed);
        let c = &ev.verdict.conclusion;
        prop_assert!(!(c.is_exists() && c.is_obstructed()));
        prop_assert_eq!(c.is_obstructed(), obstructed, "{}", m);
        if c.is_exists() {
            prop_assert!(!obstructed);
            prop_assert!(ht.plus_ok() && ht.minus_ok(), "{}", m);
        }
    }

    #[test]
    fn reversal_is_an_involution(e in expr()) {
        let m = normalize(&e);
        prop_assert_eq!(m.reverse().reverse(), m.clone());
        prop_assert_eq!(reverse(&e), m.reverse());
        let r = record(&m);
        let rev = record(&m.reverse());
        prop_assert_eq!(without_complex(rev.clone()), without_complex(r.reversed()), "{}", m);
        prop_assert_eq!((rev.tau, rev.b_plus, rev.b_minus), (-r.tau, r.b_minus, r.b_plus));
    }

    #[test]
    fn normalize_is_idempotent(e in expr()) {
        let m = normalize(&e);
        prop_assert_eq!(normalize(&m.to_expr()), m);
    }

    #[test]
    fn summand_order_is_irrelevant(e in expr(), seed in any::<u64>()) {
        let m = normalize(&e);
        let shuffled = normalize(&shuffle(&e, seed));
        prop_assert_eq!(&shuffled, &m);
        let (r, rs) = (record(&m), record(&shuffled));
        match (freedman_class(&m, &r), freedman_class(&shuffled, &rs)) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (Err(a), Err(b)) => prop_assert_eq!(a.to_string(), b.to_string()),
            (a, b) => prop_assert!(false, "{:?} vs {:?}", a, b),
        }
    }

    #[test]
    fn parser_round_trip(e in expr()) {
        let text = render(&e);
        let parsed = parse(&text).unwrap_or_else(|err| panic!("{text}: {err}"));
        prop_assert_eq!(&parsed, &normalize(&e), "{}", text);
        prop_assert_eq!(parse(&format(&parsed)).unwrap(), parsed.clone());
        prop_assert_eq!(parse_expr(&text).map(|x| normalize(&x)).unwrap(), parsed);
    }

    #[test]
    fn error_positions_are_monotone(e in expr(), cut in any::<prop::sample::Index>(), junk in "[#*~()0-9a-z$ ]{1,3}") {
        let mut text = render(&e);
        let at = cut.index(text.len() + 1);
        let at = (0..=at).rev().find(|&i| text.is_char_boundary(i)).unwrap();
        text.insert_str(at, &junk);
        if let Err(err) = parse(&text) {
            let p = err.position();
            prop_assert!(p <= text.len());
            if let Err(prefix_err) = parse(&text[..p]) {
                prop_assert!(prefix_err.position() <= p, "{} at {}: prefix fails at {}", text, p, prefix_err.position());
            }
        }
    }

    #[test]
    fn betti_numbers_of_simply_connected_sums(e in expr()) {
        let r = record(&normalize(&e));
        if r.simply_connected.is_yes() {
            prop_assert_eq!(r.chi - 2, r.b_plus + r.b_minus);
        }
        prop_assert_eq!(r.tau, r.b_plus - r.b_minus);
    }

    #[test]
    fn rokhlin(e in expr()) {
        let r = record(&normalize(&e));
        if r.spin == Tri::Yes {
            prop_assert_eq!(r.tau % 16, 0, "{:?}", r);
        }
    }

    #[test]
    fn connected_sum_is_additive(a in expr(), b in expr()) {
        let (ma, mb) = (normalize(&a), normalize(&b));
        let sum = normalize(&ManifoldExpr::sum([a, b]));
        prop_assert_eq!(&sum, &ma.connect(&mb));
        let (ra, rb, rs) = (record(&ma), record(&mb), record(&sum));
        prop_assert_eq!(rs.chi, ra.chi + rb.chi - 2);
        prop_assert_eq!(rs.tau, ra.tau + rb.tau);
        prop_assert_eq!(rs.b_plus, ra.b_plus + rb.b_plus);
        prop_assert_eq!(rs.b_minus, ra.b_minus + rb.b_minus);
    }

    #[test]
    fn homeomorphism_is_reflexive_and_symmetric(a in expr(), b in expr()) {
        let (ma, mb) = (normalize(&a), normalize(&b));
        prop_assert_eq!(homeomorphic(&ma, &ma).unwrap(), Tri::Yes);
        let ab = homeomorphic(&ma, &mb).unwrap();
        prop_assert_eq!(ab, homeomorphic(&mb, &ma).unwrap());
        let (ra, rb) = (record(&ma), record(&mb));
        if let (Ok(ta), Ok(tb)) = (freedman_class(&ma, &ra), freedman_class(&mb, &rb)) {
            prop_assert_eq!(ab == Tri::Yes, ta.triple() == tb.triple(), "{} vs {}", ma, mb);
            prop_assert_ne!(ab, Tri::Unknown);
        }
    }

    #[test]
    fn homeomorphism_is_transitive(e in expr()) {
        let a = normalize(&e);
        let r = record(&a);
        let Ok(class) = freedman_class(&a, &r) else { return Ok(()) };
        let Some(canonical) = &class.canonical else { return Ok(()) };
        let b = parse(canonical).unwrap();
        let rb = record(&b);
        let class_b = freedman_class(&b, &rb).unwrap();
        prop_assert_eq!(class_b.triple(), class.triple());
        prop_assert_eq!(class_b.canonical.as_ref(), Some(canonical));
        prop_assert_eq!(homeomorphic(&a, &b).unwrap(), Tri::Yes, "{} vs {}", a, canonical);
        if class.parity == Parity::Odd {
            if let Some(c) = odd_alternative(r.b_plus, r.b_minus) {
                prop_assert_eq!(homeomorphic(&b, &c).unwrap(), Tri::Yes);
                prop_assert_eq!(homeomorphic(&a, &c).unwrap(), Tri::Yes, "{} vs {}", a, c);
            }
        }
    }

    #[test]
    fn plane_sums(k in 1i64..200, l in 0i64..1200) {
        let m = parse(&format!("{k}*CP2 # {l}*CP2~")).unwrap();
        let r = record(&m);
        prop_assert_eq!(r.plus(), 4 + 5 * k - l);
        prop_assert_eq!(r.minus(), 4 - k + 5 * l);
        let ev = evaluate(&m).unwrap();
        if l > 4 + 5 * k {
            prop_assert_eq!(ev.verdict.conclusion.tag(), Some(Tag::HtPlus));
        }
        if l == 4 + 5 * k {
            prop_assert_eq!(ev.hitchin_thorpe.plus.equality, Some(EqualityDiagnosis::Obstructed));
        }
    }

    #[test]
    fn atom_pairs_are_additive(a in atom(), b in atom()) {
        let (ma, mb) = (Manifold::from_atom(a.clone()), Manifold::from_atom(b.clone()));
        let sum = Manifold::from_counts([(a, 1), (b, 1)]);
        let (ra, rb, rs) = (record(&ma), record(&mb), record(&sum));
        prop_assert_eq!(rs.chi, ra.chi + rb.chi - 2);
        prop_assert_eq!(rs.tau, ra.tau + rb.tau);
    }
}

/// Atoms where a reversed orientation differs from the standard one.
#[test]
fn orientation_matters_for_alpha() {
    let cover = parse("Cover(2,8)").unwrap();
    let a = fourfold::alpha_squared_of(&cover).unwrap();
    assert_eq!(
        a.status,
        fourfold::AlphaStatus::Exact(fourfold::Rational::from_integer(2))
    );
    let b = fourfold::alpha_squared_of(&cover.reverse()).unwrap();
    assert_eq!(b.status, fourfold::AlphaStatus::Unknown);
    assert!(Atom::cp2().reverse().is_cp2_rev());
}

/// Some expression is ruled out by the Seiberg-Witten estimate while passing
/// both Hitchin-Thorpe inequalities.
#[test]
fn seiberg_witten_is_strictly_stronger() {
    let mut witnesses = Vec::new();
    for base in [
        "Cover(2,8)",
        "Cover(3,6)",
        "Hyp(5)",
        "Hyp(6)",
        "Cover(2,10)",
        "Cover(4,8)",
    ] {
        for k in 0..12 {
            let m = parse(&format!("{base} # {k}*CP2~")).unwrap();
            let ev = evaluate(&m).unwrap();
            let strict = ev
                .seiberg_witten
                .plus
                .as_ref()
                .is_some_and(|s| s.lhs < s.rhs);
            if strict && ev.hitchin_thorpe.plus.value > 0 && ev.hitchin_thorpe.minus.value > 0 {
                assert_eq!(ev.verdict.conclusion.tag(), Some(Tag::SwPlus));
                witnesses.push(m.to_string());
            }
        }
    }
    assert!(
        witnesses.contains(&"Cover(2,8) # CP2~".to_string()),
        "{witnesses:?}"
    );
}
