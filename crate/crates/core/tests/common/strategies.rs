use fourfold::parser::format_atom;
use fourfold::{Atom, AtomKind, ManifoldExpr, SurfaceSpec, Tri};
use proptest::prelude::*;

pub fn tri() -> impl Strategy<Value = Tri> {
    prop_oneof![Just(Tri::Yes), Just(Tri::No), Just(Tri::Unknown)]
}

/// Simply connected surfaces; other Betti numbers are not determined by the data.
pub fn surface() -> impl Strategy<Value = AtomKind> {
    (-4i64..=12, 1i64..=4, any::<bool>(), any::<bool>(), tri()).prop_filter_map(
        "invalid surface data",
        |(c1sq, chi_h, minimal, ample_k, spin)| {
            SurfaceSpec::new(c1sq, chi_h, minimal, ample_k, spin, true)
                .ok()
                .map(AtomKind::AbstractSurface)
        },
    )
}

pub fn atom_kind() -> impl Strategy<Value = AtomKind> {
    prop_oneof![
        3 => Just(AtomKind::S4),
        6 => Just(AtomKind::CP2),
        3 => Just(AtomKind::S2xS2),
        2 => Just(AtomKind::T4),
        4 => (1u32..=7).prop_map(AtomKind::Hypersurface),
        4 => (2u32..=4, 1u32..=4).prop_map(|(p, k)| AtomKind::CyclicCover { p, d: p * k }),
        2 => surface(),
    ]
}

pub fn atom() -> impl Strategy<Value = Atom> {
    (atom_kind(), any::<bool>()).prop_map(|(kind, rev)| Atom::new(kind, rev))
}

/// Raw expression trees with sums, reversals and repeated terms.
pub fn expr() -> impl Strategy<Value = ManifoldExpr> {
    atom()
        .prop_map(ManifoldExpr::Atom)
        .prop_recursive(3, 16, 4, |inner| {
            prop_oneof![
                prop::collection::vec(inner.clone(), 1..4).prop_map(ManifoldExpr::ConnectedSum),
                inner.clone().prop_map(ManifoldExpr::reversed),
                (inner, 0u32..4).prop_map(|(e, n)| e.repeat(n)),
            ]
        })
}

/// Text for a raw tree. Sums of identical terms use the `n*` sugar.
pub fn render(e: &ManifoldExpr) -> String {
    match e {
        ManifoldExpr::Atom(a) => format_atom(a),
        ManifoldExpr::Reverse(inner) => format!("reverse({})", render(inner)),
        ManifoldExpr::ConnectedSum(parts)
            if parts.len() > 1 && parts.iter().all(|p| p == &parts[0]) =>
        {
            format!("{}*{}", parts.len(), primary(&parts[0]))
        }
        ManifoldExpr::ConnectedSum(parts) => {
            parts.iter().map(primary).collect::<Vec<_>>().join(" # ")
        }
    }
}

fn primary(e: &ManifoldExpr) -> String {
    match e {
        ManifoldExpr::ConnectedSum(_) => format!("({})", render(e)),
        _ => render(e),
    }
}

/// Permutes the summands of every sum node and re-associates the top level.
pub fn shuffle(e: &ManifoldExpr, seed: u64) -> ManifoldExpr {
    match e {
        ManifoldExpr::Atom(_) => e.clone(),
        ManifoldExpr::Reverse(inner) => ManifoldExpr::reversed(shuffle(inner, seed)),
        ManifoldExpr::ConnectedSum(parts) => {
            let mut parts: Vec<ManifoldExpr> = parts
                .iter()
                .map(|p| shuffle(p, seed.rotate_left(7)))
                .collect();
            let n = parts.len();
            parts.rotate_left((seed as usize) % n);
            if seed & 1 == 1 {
                parts.reverse();
            }
            if n >= 3 {
                let tail = parts.split_off(1);
                parts.push(ManifoldExpr::ConnectedSum(tail));
            }
            ManifoldExpr::ConnectedSum(parts)
        }
    }
}
