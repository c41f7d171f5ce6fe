//! Expression algebra of smooth oriented 4-manifolds.
//!
//! A [`ManifoldExpr`] is a raw syntax tree of atoms, connected sums and
//! orientation reversals. [`normalize`] maps it to a [`Manifold`], the
//! canonical form: reversals pushed into the atoms, sums flattened, `S4`
//! summands dropped, atoms sorted and run-length encoded. Two expressions are
//! identified exactly when their canonical forms are equal.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::scalar::Tri;

/// Invalid parameters for an atom.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct DomainError(pub String);

/// Numerical data of a user-described complex surface.
///
/// Fields are private so that every value has passed [`SurfaceSpec::new`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SurfaceSpec {
    c1sq: i64,
    chi_h: i64,
    minimal: bool,
    ample_k: bool,
    spin: Tri,
    simply_connected: bool,
}

impl SurfaceSpec {
    pub fn new(
        c1sq: i64,
        chi_h: i64,
        minimal: bool,
        ample_k: bool,
        spin: Tri,
        simply_connected: bool,
    ) -> Result<Self, DomainError> {
        let euler = 12 * chi_h - c1sq;
        if euler < 3 {
            return Err(DomainError(format!(
                "surface has Euler number 12*chi_h - c1sq = {euler}, expected at least 3"
            )));
        }
        if ample_k && !minimal {
            return Err(DomainError("a surface with ample K is minimal".into()));
        }
        if ample_k && c1sq < 1 {
            return Err(DomainError(format!(
                "a surface with ample K has c1sq = K^2 > 0, got {c1sq}"
            )));
        }
        if c1sq > 3 * euler {
            return Err(DomainError(format!(
                "c1sq = {c1sq} exceeds 3e = {} (Miyaoka-Yau)",
                3 * euler
            )));
        }
        let tau = (c1sq - 2 * euler) / 3;
        if spin == Tri::Yes && tau % 16 != 0 {
            return Err(DomainError(format!(
                "spin surface must have signature divisible by 16, got {tau}"
            )));
        }
        if simply_connected {
            let b_plus = 2 * chi_h - 1;
            let b_minus = euler - 2 - b_plus;
            if b_plus < 1 || b_minus < 0 {
                return Err(DomainError(format!(
                    "simply connected surface would have b+ = {b_plus}, b- = {b_minus}"
                )));
            }
            if minimal && b_plus > 1 && c1sq < 0 {
                return Err(DomainError(
                    "minimal surface with b+ > 1 has c1sq >= 0".into(),
                ));
            }
            // Equality in Miyaoka-Yau with b+ > 1 forces a ball quotient,
            // whose fundamental group is infinite.
            if b_plus > 1 && c1sq == 3 * euler {
                return Err(DomainError(
                    "c1sq = 3e with b+ > 1 is a ball quotient, never simply connected".into(),
                ));
            }
        }
        Ok(SurfaceSpec {
            c1sq,
            chi_h,
            minimal,
            ample_k,
            spin,
            simply_connected,
        })
    }

    pub fn c1sq(&self) -> i64 {
        self.c1sq
    }

    pub fn chi_h(&self) -> i64 {
        self.chi_h
    }

    pub fn minimal(&self) -> bool {
        self.minimal
    }

    pub fn ample_k(&self) -> bool {
        self.ample_k
    }

    pub fn spin(&self) -> Tri {
        self.spin
    }

    pub fn simply_connected(&self) -> bool {
        self.simply_connected
    }

    /// Topological Euler number `12 chi_h - c1sq`.
    pub fn euler(&self) -> i64 {
        12 * self.chi_h - self.c1sq
    }
}

/// Building blocks. The declaration order is the canonical sort order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AtomKind {
    AbstractSurface(SurfaceSpec),
    /// `p`-fold cyclic cover of CP2 branched along a smooth curve of degree `d`.
    CyclicCover {
        p: u32,
        d: u32,
    },
    /// Smooth degree-`d` hypersurface in CP3; `Hypersurface(4)` is K3.
    Hypersurface(u32),
    T4,
    CP2,
    S2xS2,
    S4,
}

impl AtomKind {
    pub fn hypersurface(d: u32) -> Result<Self, DomainError> {
        let kind = AtomKind::Hypersurface(d);
        kind.validate()?;
        Ok(kind)
    }

    pub fn cyclic_cover(p: u32, d: u32) -> Result<Self, DomainError> {
        let kind = AtomKind::CyclicCover { p, d };
        kind.validate()?;
        Ok(kind)
    }

    pub fn validate(&self) -> Result<(), DomainError> {
        match *self {
            AtomKind::Hypersurface(0) => {
                Err(DomainError("hypersurface degree must be at least 1".into()))
            }
            AtomKind::CyclicCover { p, .. } if p < 2 => Err(DomainError(format!(
                "cyclic cover order must be at least 2, got {p}"
            ))),
            AtomKind::CyclicCover { d: 0, .. } => {
                Err(DomainError("branch curve degree must be at least 1".into()))
            }
            AtomKind::CyclicCover { p, d } if d % p != 0 => Err(DomainError(format!(
                "cyclic cover order {p} does not divide branch degree {d}"
            ))),
            _ => Ok(()),
        }
    }

    /// Atoms that carry an orientation-reversing self-diffeomorphism.
    pub fn is_orientation_symmetric(&self) -> bool {
        matches!(self, AtomKind::S4 | AtomKind::S2xS2)
    }

    /// Identifies aliases: degree 1 and 2 hypersurfaces are CP2 and the quadric S2xS2.
    fn canonical(self) -> Self {
        match self {
            AtomKind::Hypersurface(1) => AtomKind::CP2,
            AtomKind::Hypersurface(2) => AtomKind::S2xS2,
            other => other,
        }
    }
}

/// An atom together with its orientation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    kind: AtomKind,
    reversed: bool,
}

impl Atom {
    pub fn new(kind: AtomKind, reversed: bool) -> Self {
        let kind = kind.canonical();
        let reversed = reversed && !kind.is_orientation_symmetric();
        Atom { kind, reversed }
    }

    pub fn standard(kind: AtomKind) -> Self {
        Atom::new(kind, false)
    }

    pub fn kind(&self) -> &AtomKind {
        &self.kind
    }

    pub fn is_reversed(&self) -> bool {
        self.reversed
    }

    pub fn reverse(&self) -> Atom {
        Atom::new(self.kind.clone(), !self.reversed)
    }

    pub fn cp2() -> Atom {
        Atom::standard(AtomKind::CP2)
    }

    pub fn cp2_rev() -> Atom {
        Atom::new(AtomKind::CP2, true)
    }

    pub fn k3() -> Atom {
        Atom::standard(AtomKind::Hypersurface(4))
    }

    pub fn t4() -> Atom {
        Atom::standard(AtomKind::T4)
    }

    pub fn s2xs2() -> Atom {
        Atom::standard(AtomKind::S2xS2)
    }

    pub fn is_cp2_rev(&self) -> bool {
        self.kind == AtomKind::CP2 && self.reversed
    }
}

/// Raw expression tree. Blow-up is connected sum with `CP2~`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ManifoldExpr {
    Atom(Atom),
    ConnectedSum(Vec<ManifoldExpr>),
    Reverse(Box<ManifoldExpr>),
}

impl ManifoldExpr {
    pub fn atom(atom: Atom) -> Self {
        ManifoldExpr::Atom(atom)
    }

    pub fn sum<I: IntoIterator<Item = ManifoldExpr>>(parts: I) -> Self {
        ManifoldExpr::ConnectedSum(parts.into_iter().collect())
    }

    pub fn reversed(self) -> Self {
        ManifoldExpr::Reverse(Box::new(self))
    }

    /// `count` copies of `self`; zero copies is `S4`.
    pub fn repeat(self, count: u32) -> Self {
        match count {
            0 => ManifoldExpr::Atom(Atom::standard(AtomKind::S4)),
            1 => self,
            n => ManifoldExpr::ConnectedSum(vec![self; n as usize]),
        }
    }
}

impl From<Atom> for ManifoldExpr {
    fn from(atom: Atom) -> Self {
        ManifoldExpr::Atom(atom)
    }
}

/// Canonical form of a [`ManifoldExpr`].
///
/// A sorted list of distinct atoms with positive multiplicities. The empty
/// list is `S4`, the unit of connected sum.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Manifold {
    runs: Vec<(Atom, u32)>,
}

impl Manifold {
    pub fn s4() -> Self {
        Manifold::default()
    }

    pub fn from_atom(atom: Atom) -> Self {
        Manifold::from_counts([(atom, 1)])
    }

    pub fn from_counts<I: IntoIterator<Item = (Atom, u32)>>(counts: I) -> Self {
        let mut map: BTreeMap<Atom, u32> = BTreeMap::new();
        for (atom, n) in counts {
            let atom = Atom::new(atom.kind, atom.reversed);
            if atom.kind == AtomKind::S4 || n == 0 {
                continue;
            }
            *map.entry(atom).or_insert(0) += n;
        }
        Manifold {
            runs: map.into_iter().collect(),
        }
    }

    /// The multiset of atoms, sorted.
    pub fn atoms(&self) -> &[(Atom, u32)] {
        &self.runs
    }

    /// Multiplicity of `atom`.
    pub fn count(&self, atom: &Atom) -> u32 {
        self.runs
            .iter()
            .find(|(a, _)| a == atom)
            .map_or(0, |(_, n)| *n)
    }

    /// Total number of summands, counted with multiplicity.
    pub fn summand_count(&self) -> u32 {
        self.runs.iter().map(|(_, n)| n).sum()
    }

    pub fn is_s4(&self) -> bool {
        self.runs.is_empty()
    }

    /// Some(atom) if this is a single atom with multiplicity one.
    pub fn as_atom(&self) -> Option<&Atom> {
        match self.runs.as_slice() {
            [(atom, 1)] => Some(atom),
            _ => None,
        }
    }

    pub fn is_atom(&self, atom: &Atom) -> bool {
        self.as_atom() == Some(atom)
    }

    pub fn reverse(&self) -> Manifold {
        Manifold::from_counts(self.runs.iter().map(|(a, n)| (a.reverse(), *n)))
    }

    pub fn connect(&self, other: &Manifold) -> Manifold {
        Manifold::from_counts(self.runs.iter().chain(other.runs.iter()).cloned())
    }

    /// Connected sum with `k` copies of `CP2~`.
    pub fn blow_up(&self, k: u32) -> Manifold {
        self.connect(&Manifold::from_counts([(Atom::cp2_rev(), k)]))
    }

    /// Splits off the `CP2~` summands: `(rest, k)` with `self = rest # k CP2~`.
    pub fn split_blowups(&self) -> (Manifold, u32) {
        let k = self.count(&Atom::cp2_rev());
        let rest = Manifold {
            runs: self
                .runs
                .iter()
                .filter(|(a, _)| !a.is_cp2_rev())
                .cloned()
                .collect(),
        };
        (rest, k)
    }

    /// Every summand, expanded by multiplicity.
    pub fn summands(&self) -> impl Iterator<Item = &Atom> {
        self.runs
            .iter()
            .flat_map(|(a, n)| std::iter::repeat_n(a, *n as usize))
    }

    pub fn to_expr(&self) -> ManifoldExpr {
        let mut parts: Vec<ManifoldExpr> = self
            .runs
            .iter()
            .map(|(a, n)| ManifoldExpr::Atom(a.clone()).repeat(*n))
            .collect();
        match parts.len() {
            0 => ManifoldExpr::Atom(Atom::standard(AtomKind::S4)),
            1 => parts.pop().expect("one part"),
            _ => ManifoldExpr::ConnectedSum(parts),
        }
    }
}

impl fmt::Display for Manifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::format(self))
    }
}

/// Canonical form of `e`.
pub fn normalize(e: &ManifoldExpr) -> Manifold {
    fn collect(e: &ManifoldExpr, reversed: bool, out: &mut Vec<(Atom, u32)>) {
        match e {
            ManifoldExpr::Atom(a) => {
                let a = if reversed { a.reverse() } else { a.clone() };
                out.push((a, 1));
            }
            ManifoldExpr::ConnectedSum(parts) => {
                for p in parts {
                    collect(p, reversed, out);
                }
            }
            ManifoldExpr::Reverse(inner) => collect(inner, !reversed, out),
        }
    }
    let mut atoms = Vec::new();
    collect(e, false, &mut atoms);
    Manifold::from_counts(atoms)
}

/// Canonical form of the orientation reversal of `e`.
pub fn reverse(e: &ManifoldExpr) -> Manifold {
    normalize(e).reverse()
}

/// Multiset of atoms of `e`.
pub fn atoms(e: &ManifoldExpr) -> Vec<(Atom, u32)> {
    normalize(e).runs
}
