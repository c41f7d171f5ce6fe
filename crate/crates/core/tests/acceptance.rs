//! Acceptance suite: prints one line per criterion and exits nonzero if any fails.

mod common;

use common::strategies::{expr, render};
use fourfold::alpha::{mixed_bound_constants, scalar_l2_lower_bound};
use fourfold::curvature::{
    check_model, gauss_bonnet_check, kaehler_spectrum_check, saturation_check,
    weitzenboeck_parallel_check,
};
use fourfold::obstruction::{EqualityDiagnosis, Tag};
use fourfold::{
    alpha_brute_oracle, alpha_squared_numeric, alpha_squared_of, builtin_models, evaluate, format,
    freedman_class, homeomorphic, invariants, normalize, parse, ExactModel, Manifold,
    NumericOptions, QuadraticFormSpace, Rational, Tri,
};
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn m(text: &str) -> Manifold {
    parse(text).unwrap_or_else(|e| panic!("{text}: {e}"))
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn reproduce_invariants() -> Check {
    let x = invariants(&m("Cover(3,6)")).map_err(|e| e.to_string())?;
    let cx = x.complex.as_ref().ok_or("Cover(3,6) has no complex data")?;
    ensure(cx.c1sq == 3 && cx.chi_h == 4, || {
        format!("Cover(3,6): c1^2 = {}, chi_h = {}", cx.c1sq, cx.chi_h)
    })?;
    let n = invariants(&m("Cover(2,8)")).map_err(|e| e.to_string())?;
    let cn = n.complex.as_ref().ok_or("Cover(2,8) has no complex data")?;
    let got = (cn.c1sq, n.b_plus, n.b_minus, n.tau);
    ensure(got == (2, 7, 37, -30), || {
        format!("Cover(2,8): (c1^2, b+, b-, tau) = {got:?}")
    })?;
    Ok("c1^2 = 3, chi_h = 4; c1^2 = 2, b+ = 7, b- = 37, tau = -30".into())
}

fn reproduce_verdicts() -> Check {
    let x = m("Cover(3,6) # CP2~");
    let ev = evaluate(&x).map_err(|e| e.to_string())?;
    let c = &ev.verdict.conclusion;
    ensure(c.is_obstructed() && c.tag() == Some(Tag::SwPlus), || {
        format!("got {c}")
    })?;
    let sw = ev.seiberg_witten.plus.as_ref().ok_or("no SW+ check")?;
    ensure(sw.lhs == q(2, 1) && sw.rhs == q(2, 1), || {
        format!("SW+: {} vs {}", sw.lhs, sw.rhs)
    })?;
    ensure(ev.alpha.status.exact() == Some(q(3, 1)), || {
        format!("alpha^2 = {}", ev.alpha.status)
    })?;
    ensure(c.reason().contains("equality"), || {
        format!("reason does not cite equality: {}", c.reason())
    })?;

    let n = m("Cover(2,8)");
    let c = evaluate(&n).map_err(|e| e.to_string())?.verdict.conclusion;
    ensure(c.is_exists() && c.tag() == Some(Tag::AubinYau), || {
        format!("Cover(2,8): got {c}")
    })?;

    ensure(homeomorphic(&x, &n) == Ok(Tri::Yes), || {
        "not homeomorphic".into()
    })?;
    for y in [&x, &n] {
        let class = freedman_class(y, &invariants(y).unwrap()).map_err(|e| e.to_string())?;
        ensure(
            class.canonical.as_deref() == Some("7*CP2 # 37*CP2~"),
            || format!("{y}: {:?}", class.canonical),
        )?;
    }
    Ok("Obstructed(SW+) with 2 = (2/3)*3, Exists(AY), homeomorphic to 7*CP2 # 37*CP2~".into())
}

fn plane_sums() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut obstructed = 0;
    for _ in 0..50 {
        let (k, l) = (rng.gen_range(1..=20i64), rng.gen_range(0..=150i64));
        let x = m(&format!("{k}*CP2 # {l}*CP2~"));
        let r = invariants(&x).map_err(|e| e.to_string())?;
        ensure(r.plus() == 4 + 5 * k - l, || {
            format!("({k}, {l}): 2chi+3tau = {}", r.plus())
        })?;
        if l > 4 + 5 * k {
            let c = evaluate(&x).map_err(|e| e.to_string())?.verdict.conclusion;
            ensure(c.tag() == Some(Tag::HtPlus), || {
                format!("({k}, {l}): got {c}")
            })?;
            obstructed += 1;
        }
    }
    Ok(format!("50 pairs, {obstructed} of them Obstructed(HT+)"))
}

fn equality_cases() -> Check {
    for (text, tag) in [("K3", Tag::HyperKaehler), ("T4", Tag::Flat)] {
        let ev = evaluate(&m(text)).map_err(|e| e.to_string())?;
        let ht = &ev.hitchin_thorpe;
        ensure(ht.plus_ok() && ht.minus_ok(), || {
            format!("{text} fails Hitchin-Thorpe")
        })?;
        for side in [&ht.plus, &ht.minus] {
            if side.value == 0 {
                ensure(side.equality == Some(EqualityDiagnosis::Permitted), || {
                    format!("{text}: {:?}", side.equality)
                })?;
            }
        }
        let c = &ev.verdict.conclusion;
        ensure(c.is_exists() && c.tag() == Some(tag), || {
            format!("{text}: got {c}")
        })?;
    }
    let ev = evaluate(&m("3*CP2 # 19*CP2~")).map_err(|e| e.to_string())?;
    let c = &ev.verdict.conclusion;
    ensure(c.tag() == Some(Tag::HtPlus), || {
        format!("3*CP2 # 19*CP2~: got {c}")
    })?;
    ensure(ev.hitchin_thorpe.plus.value == 0, || {
        "not an equality case".into()
    })?;
    ensure(
        ev.hitchin_thorpe.plus.equality == Some(EqualityDiagnosis::Obstructed),
        || format!("diagnosis {:?}", ev.hitchin_thorpe.plus.equality),
    )?;
    Ok("K3 Exists(HK), T4 Exists(FLAT), 3*CP2 # 19*CP2~ Obstructed(HT+) at equality".into())
}

fn stronger_than_hitchin_thorpe() -> Check {
    let ev = evaluate(&m("Cover(2,8) # CP2~")).map_err(|e| e.to_string())?;
    let c = &ev.verdict.conclusion;
    ensure(c.tag() == Some(Tag::SwPlus), || format!("got {c}"))?;
    let sw = ev.seiberg_witten.plus.as_ref().ok_or("no SW+ check")?;
    ensure(sw.lhs == q(1, 1) && sw.rhs == q(4, 3), || {
        format!("SW+: {} vs {}", sw.lhs, sw.rhs)
    })?;
    ensure(ev.hitchin_thorpe.plus.value == 1, || {
        format!("HT+ = {}", ev.hitchin_thorpe.plus.value)
    })?;
    Ok("SW+: 1 < 4/3 while 2chi+3tau = 1 > 0".into())
}

fn curvature_models() -> Check {
    let models: Vec<ExactModel> = builtin_models();
    let get = |name: &str| models.iter().find(|x| x.name == name).unwrap();
    let zero = Rational::from_integer(0);
    for name in ["S4", "T4", "CP2", "CP2~", "S2xS2"] {
        let res = gauss_bonnet_check(get(name)).map_err(|e| e.to_string())?;
        ensure(res == (zero, zero), || format!("{name}: residuals {res:?}"))?;
    }
    for name in ["CP2", "CH2", "S2xS2"] {
        ensure(kaehler_spectrum_check(get(name)), || {
            format!("{name}: Kaehler spectrum")
        })?;
    }
    let mut ke = 0;
    for model in models.iter().filter(|x| x.kaehler && x.einstein) {
        let r = weitzenboeck_parallel_check(model).map_err(|e| e.to_string())?;
        ensure(r == zero, || {
            format!("{}: Weitzenboeck residual {r}", model.name)
        })?;
        ke += 1;
    }
    ensure(saturation_check(get("CH2")) == Ok(true), || {
        "CH2 saturation".into()
    })?;
    ensure(models.iter().all(|x| check_model(x).passes()), || {
        "model check failed".into()
    })?;
    Ok(format!(
        "Gauss-Bonnet residuals 0 on 5 models, Weitzenboeck 0 on {ke} Kaehler-Einstein models"
    ))
}

fn numeric_matches_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut compared, mut worst) = (0, 0.0f64);
    for attempt in 0..400 {
        if compared >= 20 {
            break;
        }
        let space = common::random_space(&mut rng, 5, 4);
        let oracle = alpha_brute_oracle(&space, 9).map_err(|e| e.to_string())?;
        if !oracle.attained {
            continue;
        }
        let opts = NumericOptions {
            seed: attempt,
            ..NumericOptions::default()
        };
        let got = alpha_squared_numeric::<f64>(&space, &opts).map_err(|e| e.to_string())?;
        // Relative error, with an absolute floor for values that are exactly 0.
        let err = (got.value - oracle.value).abs();
        let rel = if oracle.value.abs() > 1e-8 {
            err / oracle.value.abs()
        } else {
            err
        };
        worst = worst.max(rel);
        ensure(rel <= 1e-4 || err <= 1e-8, || {
            format!(
                "form {:?}, classes {:?}: {} vs {}",
                space.gram(),
                space.classes(),
                got.value,
                oracle.value
            )
        })?;
        compared += 1;
    }
    ensure(compared >= 20, || {
        format!("only {compared} instances compared")
    })?;

    let single = QuadraticFormSpace::new(
        vec![
            vec![1, 0, 0, 0],
            vec![0, 1, 0, 0],
            vec![0, 0, -1, 0],
            vec![0, 0, 0, -1],
        ],
        vec![vec![2, 1, 1, 1]],
    )
    .map_err(|e| e.to_string())?;
    let square = single.square(&single.classes()[0]) as f64;
    let got = alpha_squared_numeric::<f64>(&single, &NumericOptions::default())
        .map_err(|e| e.to_string())?;
    ensure((got.value - square).abs() <= 1e-6, || {
        format!("single class: {} vs {square}", got.value)
    })?;
    Ok(format!(
        "{compared} instances, worst relative error {worst:.1e}; single class {:.9} = Q(a,a)",
        got.value
    ))
}

fn fuzzed_properties() -> Check {
    let mut runner = TestRunner::new(Config {
        cases: 10_000,
        failure_persistence: None,
        ..Config::default()
    });
    let fail = |msg: String| TestCaseError::fail(msg);
    runner
        .run(&expr(), |e| {
            let x = normalize(&e);
            let c = evaluate(&x)
                .map_err(|err| fail(format!("{x}: {err}")))?
                .verdict
                .conclusion;
            if c.is_exists() && c.is_obstructed() {
                return Err(fail(format!("{x}: exists and obstructed")));
            }
            let (r, rev) = (invariants(&x).unwrap(), invariants(&x.reverse()).unwrap());
            if x.reverse().reverse() != x
                || (rev.tau, rev.b_plus, rev.b_minus) != (-r.tau, r.b_minus, r.b_plus)
            {
                return Err(fail(format!("{x}: reversal")));
            }
            if normalize(&x.to_expr()) != x {
                return Err(fail(format!("{x}: normalize not idempotent")));
            }
            let text = render(&e);
            let parsed = parse(&text).map_err(|err| fail(format!("{text}: {err}")))?;
            if parsed != x || parse(&format(&parsed)).ok() != Some(parsed.clone()) {
                return Err(fail(format!("{text}: round trip")));
            }
            let refl = homeomorphic(&x, &x).unwrap();
            let class = freedman_class(&x, &r);
            if refl != Tri::Yes {
                return Err(fail(format!("{x}: not homeomorphic to itself")));
            }
            if let Ok(class) = class {
                if let Some(canonical) = &class.canonical {
                    let y = parse(canonical).unwrap();
                    let (xy, yx) = (homeomorphic(&x, &y).unwrap(), homeomorphic(&y, &x).unwrap());
                    let yy = parse(&format(&y)).unwrap();
                    if xy != Tri::Yes
                        || yx != Tri::Yes
                        || homeomorphic(&yy, &x).unwrap() != Tri::Yes
                    {
                        return Err(fail(format!("{x}: not homeomorphic to {canonical}")));
                    }
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok(
        "10000 expressions: exclusivity, reversal, idempotence, round trip, homeomorphism axioms"
            .into(),
    )
}

fn bound_constants() -> Check {
    let a = alpha_squared_of(&m("Cover(2,8)")).map_err(|e| e.to_string())?;
    let scalar = scalar_l2_lower_bound(&a).map_err(|e| e.to_string())?;
    ensure(scalar == q(64, 1), || format!("scalar bound {scalar}"))?;
    let b = alpha_squared_of(&m("Cover(3,6) # CP2~")).map_err(|e| e.to_string())?;
    let mixed = mixed_bound_constants(&b).map_err(|e| e.to_string())?;
    ensure(mixed.quadratic == q(2, 1), || {
        format!("mixed quadratic {}", mixed.quadratic)
    })?;
    Ok("32*alpha^2 = 64 (times pi^2); (2/3)*alpha^2 = 2".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("invariants of the two surfaces", reproduce_invariants),
        ("verdicts for the two smooth structures", reproduce_verdicts),
        ("Hitchin-Thorpe on plane sums", plane_sums),
        ("K3 and T4 equality cases", equality_cases),
        (
            "Seiberg-Witten beats Hitchin-Thorpe",
            stronger_than_hitchin_thorpe,
        ),
        ("curvature model identities", curvature_models),
        (
            "numeric alpha^2 against brute force",
            numeric_matches_oracle,
        ),
        ("fuzzed property suite", fuzzed_properties),
        ("bound constants", bound_constants),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if !failed.is_empty() {
        println!(
            "acceptance: {} of 9 criteria failed: {failed:?}",
            failed.len()
        );
        std::process::exit(1);
    }
    println!("acceptance: all 9 criteria passed");
}
