//! Exact topological and complex-geometric invariants of canonical expressions.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::manifold::{Atom, AtomKind, DomainError, Manifold, SurfaceSpec};
use crate::scalar::Tri;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("unsupported expression: {0}")]
    UnsupportedExpression(String),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("inconsistent invariants: {0}")]
    Consistency(String),
}

/// Complex-surface data, present when the expression is a complex atom in its
/// standard orientation blown up `k >= 0` times.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexData {
    pub is_complex: bool,
    /// c1^2 of this surface.
    pub c1sq: i64,
    /// c1^2 of the minimal model, when known.
    pub c1sq_minimal_model: Option<i64>,
    pub chi_h: i64,
    pub ample_k: bool,
    pub minimal: bool,
    /// Number of blow-ups separating this surface from its minimal model.
    pub blowup_count: Option<i64>,
}

impl ComplexData {
    fn minimal(c1sq: i64, chi_h: i64, ample_k: bool) -> Self {
        ComplexData {
            is_complex: true,
            c1sq,
            c1sq_minimal_model: Some(c1sq),
            chi_h,
            ample_k,
            minimal: true,
            blowup_count: Some(0),
        }
    }

    /// A rational surface obtained from CP2 by blowing up.
    fn blown_up_plane(c1sq: i64) -> Self {
        ComplexData {
            is_complex: true,
            c1sq,
            c1sq_minimal_model: Some(9),
            chi_h: 1,
            ample_k: false,
            minimal: false,
            blowup_count: Some(9 - c1sq),
        }
    }

    fn blow_up(&self, k: i64) -> Self {
        if k == 0 {
            return self.clone();
        }
        ComplexData {
            c1sq: self.c1sq - k,
            blowup_count: self.blowup_count.map(|b| b + k),
            ample_k: false,
            minimal: false,
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantRecord {
    pub chi: i64,
    pub tau: i64,
    pub b_plus: i64,
    pub b_minus: i64,
    pub b1: Option<i64>,
    pub spin: Tri,
    pub simply_connected: Tri,
    pub complex: Option<ComplexData>,
    /// Admits a metric of positive scalar curvature.
    pub psc: Tri,
    /// Admits a metric with vanishing scalar curvature.
    pub scalar_flat: Tri,
}

impl InvariantRecord {
    /// `2 chi + 3 tau`.
    pub fn plus(&self) -> i64 {
        2 * self.chi + 3 * self.tau
    }

    /// `2 chi - 3 tau`.
    pub fn minus(&self) -> i64 {
        2 * self.chi - 3 * self.tau
    }

    pub fn b2(&self) -> i64 {
        self.b_plus + self.b_minus
    }

    /// Orientation reversal: swaps `b+` and `b-`, negates the signature.
    pub fn reversed(&self) -> InvariantRecord {
        InvariantRecord {
            tau: -self.tau,
            b_plus: self.b_minus,
            b_minus: self.b_plus,
            complex: None,
            ..self.clone()
        }
    }

    fn s4() -> Self {
        InvariantRecord {
            chi: 2,
            tau: 0,
            b_plus: 0,
            b_minus: 0,
            b1: Some(0),
            spin: Tri::Yes,
            simply_connected: Tri::Yes,
            complex: None,
            psc: Tri::Yes,
            scalar_flat: Tri::Yes,
        }
    }

    /// Simply connected complex surface from `(c1sq, chi)` via Noether.
    fn surface(
        c1sq: i64,
        chi: i64,
        spin: Tri,
        complex: ComplexData,
    ) -> Result<Self, InvariantError> {
        if (c1sq - 2 * chi) % 3 != 0 {
            return Err(InvariantError::Consistency(format!(
                "signature (c1sq - 2 chi)/3 = ({c1sq} - {})/3 is not integral",
                2 * chi
            )));
        }
        if (c1sq + chi) % 12 != 0 {
            return Err(InvariantError::Consistency(format!(
                "chi_h = (c1sq + chi)/12 = ({c1sq} + {chi})/12 is not integral"
            )));
        }
        let tau = (c1sq - 2 * chi) / 3;
        let b_plus = 2 * complex.chi_h - 1;
        Ok(InvariantRecord {
            chi,
            tau,
            b_plus,
            b_minus: chi - 2 - b_plus,
            b1: Some(0),
            spin,
            simply_connected: Tri::Yes,
            complex: Some(complex),
            psc: Tri::Unknown,
            scalar_flat: Tri::Unknown,
        })
    }
}

fn narrow(v: i128, what: &str) -> Result<i64, InvariantError> {
    i64::try_from(v).map_err(|_| InvariantError::Consistency(format!("{what} overflows 64 bits")))
}

/// Invariants of the degree-`d` hypersurface in CP3.
pub fn hypersurface_invariants(d: u32) -> Result<InvariantRecord, InvariantError> {
    AtomKind::hypersurface(d)?;
    let dd = d as i128;
    let chi = narrow(dd * dd * dd - 4 * dd * dd + 6 * dd, "Euler characteristic")?;
    let c1sq = narrow(dd * (4 - dd) * (4 - dd), "c1^2")?;
    let chi_h = (c1sq + chi) / 12;
    let complex = if d == 3 {
        ComplexData::blown_up_plane(c1sq)
    } else {
        ComplexData::minimal(c1sq, chi_h, d >= 5)
    };
    let mut r = InvariantRecord::surface(c1sq, chi, Tri::from_bool(d.is_multiple_of(2)), complex)?;
    r.psc = Tri::from_bool(d <= 3);
    // Positive scalar curvature can be deformed to zero scalar curvature.
    r.scalar_flat = Tri::from_bool(d <= 4);
    Ok(r)
}

/// Invariants of the `p`-fold cyclic cover of CP2 branched along a smooth
/// degree-`d` curve.
pub fn cover_invariants(p: u32, d: u32) -> Result<InvariantRecord, InvariantError> {
    AtomKind::cyclic_cover(p, d)?;
    let (pp, dd) = (p as i128, d as i128);
    let genus = (dd - 1) * (dd - 2) / 2;
    let euler_branch = 2 - 2 * genus;
    // K is the pullback of O(m).
    let m = dd * (pp - 1) / pp - 3;
    let chi = narrow(3 * pp - (pp - 1) * euler_branch, "Euler characteristic")?;
    let c1sq = narrow(pp * m * m, "c1^2")?;
    let spin = if m % 2 == 0 {
        Tri::Yes
    } else if !p.is_multiple_of(4) {
        // The pulled-back hyperplane class has square p, so it is not 2-divisible.
        Tri::No
    } else {
        Tri::Unknown
    };
    let complex = if m >= 0 || c1sq >= 8 {
        ComplexData::minimal(c1sq, (c1sq + chi) / 12, m >= 1)
    } else {
        // Del Pezzo surfaces of degree below 8 are blow-ups of the plane.
        ComplexData::blown_up_plane(c1sq)
    };
    let mut r = InvariantRecord::surface(c1sq, chi, spin, complex)?;
    r.psc = Tri::from_bool(m < 0);
    r.scalar_flat = Tri::from_bool(m <= 0);
    Ok(r)
}

fn surface_spec_invariants(s: &SurfaceSpec) -> Result<InvariantRecord, InvariantError> {
    if !s.simply_connected() {
        return Err(InvariantError::UnsupportedExpression(
            "Betti numbers of a non-simply-connected Surface are not determined by (c1sq, chi_h)"
                .into(),
        ));
    }
    let complex = if s.minimal() {
        ComplexData::minimal(s.c1sq(), s.chi_h(), s.ample_k())
    } else {
        ComplexData {
            is_complex: true,
            c1sq: s.c1sq(),
            c1sq_minimal_model: None,
            chi_h: s.chi_h(),
            ample_k: false,
            minimal: false,
            blowup_count: None,
        }
    };
    let mut r = InvariantRecord::surface(s.c1sq(), s.euler(), s.spin(), complex)?;
    if s.ample_k() && r.b_plus > 1 {
        r.psc = Tri::No;
        r.scalar_flat = Tri::No;
    }
    Ok(r)
}

fn standard_atom_invariants(kind: &AtomKind) -> Result<InvariantRecord, InvariantError> {
    let base = InvariantRecord::s4();
    Ok(match kind {
        AtomKind::S4 => base,
        AtomKind::CP2 => InvariantRecord {
            chi: 3,
            tau: 1,
            b_plus: 1,
            spin: Tri::No,
            complex: Some(ComplexData::minimal(9, 1, false)),
            ..base
        },
        AtomKind::S2xS2 => InvariantRecord {
            chi: 4,
            b_plus: 1,
            b_minus: 1,
            complex: Some(ComplexData::minimal(8, 1, false)),
            ..base
        },
        AtomKind::T4 => InvariantRecord {
            chi: 0,
            b_plus: 3,
            b_minus: 3,
            b1: Some(4),
            simply_connected: Tri::No,
            complex: Some(ComplexData::minimal(0, 0, false)),
            psc: Tri::No,
            ..base
        },
        AtomKind::Hypersurface(d) => hypersurface_invariants(*d)?,
        AtomKind::CyclicCover { p, d } => cover_invariants(*p, *d)?,
        AtomKind::AbstractSurface(s) => surface_spec_invariants(s)?,
    })
}

/// Invariants of a single oriented atom.
pub fn atom_invariants(atom: &Atom) -> Result<InvariantRecord, InvariantError> {
    let r = standard_atom_invariants(atom.kind())?;
    Ok(if atom.is_reversed() { r.reversed() } else { r })
}

/// Exact invariants of a canonical expression.
pub fn invariants(m: &Manifold) -> Result<InvariantRecord, InvariantError> {
    if m.is_s4() {
        return Ok(InvariantRecord::s4());
    }
    if let Some(atom) = m.as_atom() {
        return atom_invariants(atom);
    }

    let mut chi: i128 = 2;
    let mut tau: i128 = 0;
    let mut b_plus: i128 = 0;
    let mut b_minus: i128 = 0;
    let mut spin = Tri::Yes;
    let mut sc = Tri::Yes;
    let mut psc = Tri::Yes;
    for (atom, n) in m.atoms() {
        let r = atom_invariants(atom)?;
        let n = *n as i128;
        chi += n * (r.chi as i128 - 2);
        tau += n * r.tau as i128;
        b_plus += n * r.b_plus as i128;
        b_minus += n * r.b_minus as i128;
        spin = spin.and(r.spin);
        sc = sc.and(r.simply_connected);
        // Connected sums of psc manifolds are psc; nothing else propagates.
        psc = if psc.is_yes() && r.psc.is_yes() {
            Tri::Yes
        } else {
            Tri::Unknown
        };
    }
    let tau = narrow(tau, "signature")?;

    let complex = complex_data(m)?;
    if spin.is_yes() && tau != 0 {
        // Lichnerowicz: the A-hat genus -tau/8 obstructs psc on spin manifolds.
        psc = Tri::No;
    }
    let b_plus = narrow(b_plus, "b+")?;
    let b_minus = narrow(b_minus, "b-")?;
    // Seiberg-Witten: complex surfaces with b+ > 1 carry no psc metric, in
    // either orientation.
    if (complex.is_some() && b_plus > 1) || (b_minus > 1 && complex_data(&m.reverse())?.is_some()) {
        psc = Tri::No;
    }
    let scalar_flat = if psc.is_yes() { Tri::Yes } else { Tri::Unknown };

    Ok(InvariantRecord {
        chi: narrow(chi, "Euler characteristic")?,
        tau,
        b_plus,
        b_minus,
        b1: if sc.is_yes() { Some(0) } else { None },
        spin,
        simply_connected: sc,
        complex,
        psc,
        scalar_flat,
    })
}

/// Complex data of `X # k CP2~` for a standard-orientation complex atom `X`.
fn complex_data(m: &Manifold) -> Result<Option<ComplexData>, InvariantError> {
    let (rest, k) = m.split_blowups();
    let Some(atom) = rest.as_atom() else {
        return Ok(None);
    };
    if atom.is_reversed() {
        return Ok(None);
    }
    let base = standard_atom_invariants(atom.kind())?;
    Ok(base.complex.map(|c| c.blow_up(k as i64)))
}

/// Noether's formula `12 chi_h = c1^2 + chi`, plus `b+ = 2 chi_h - 1` for
/// simply connected surfaces. False when complex data is absent.
pub fn noether_check(r: &InvariantRecord) -> bool {
    let Some(c) = &r.complex else {
        return false;
    };
    let noether = 12 * c.chi_h == c.c1sq + r.chi;
    let betti = r.simply_connected != Tri::Yes || r.b_plus == 2 * c.chi_h - 1;
    noether && betti
}
