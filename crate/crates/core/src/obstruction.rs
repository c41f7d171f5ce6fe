//! Einstein-metric verdicts with certificates, homeomorphism types of simply
//! connected expressions, and screening of intersection forms.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::alpha::{alpha_squared, AlphaStatus, AlphaValue};
use crate::invariants::{invariants, InvariantError, InvariantRecord};
use crate::manifold::{Atom, AtomKind, Manifold};
use crate::scalar::Tri;
use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ObstructionError {
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error("{0} is not known to be simply connected")]
    NotSimplyConnected(String),
    #[error("parity of the intersection form of {0} is unknown")]
    UnknownParity(String),
    #[error("consistency error: {0}")]
    Consistency(String),
}

/// Stable tags naming the theorem behind a certificate line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tag {
    #[serde(rename = "HT+")]
    HtPlus,
    #[serde(rename = "HT-")]
    HtMinus,
    #[serde(rename = "SW+")]
    SwPlus,
    #[serde(rename = "SW-")]
    SwMinus,
    #[serde(rename = "AY")]
    AubinYau,
    #[serde(rename = "YAU")]
    Yau,
    #[serde(rename = "TIAN")]
    Tian,
    #[serde(rename = "PAGE")]
    Page,
    #[serde(rename = "HK")]
    HyperKaehler,
    #[serde(rename = "FLAT")]
    Flat,
    #[serde(rename = "ROUND")]
    Round,
}

impl Tag {
    pub fn as_str(self) -> &'static str {
        match self {
            Tag::HtPlus => "HT+",
            Tag::HtMinus => "HT-",
            Tag::SwPlus => "SW+",
            Tag::SwMinus => "SW-",
            Tag::AubinYau => "AY",
            Tag::Yau => "YAU",
            Tag::Tian => "TIAN",
            Tag::Page => "PAGE",
            Tag::HyperKaehler => "HK",
            Tag::Flat => "FLAT",
            Tag::Round => "ROUND",
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateLine {
    pub tag: Tag,
    pub text: String,
}

impl fmt::Display for CertificateLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.tag, self.text)
    }
}

/// Outcome of a single check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// The check is satisfied and says nothing.
    Pass,
    /// The check rules out Einstein metrics.
    Obstructed,
    /// The check cannot be completed with what is known.
    Inconclusive,
}

/// Diagnosis of an equality case of `2 chi ± 3 tau >= 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EqualityDiagnosis {
    /// Structurally the flat torus or K3, where equality is realized.
    Permitted,
    /// Simply connected and not homeomorphic to the only allowed model.
    Obstructed,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SideReport {
    /// `2 chi + 3 tau` or `2 chi - 3 tau`.
    pub value: i64,
    pub outcome: Outcome,
    pub equality: Option<EqualityDiagnosis>,
    pub line: CertificateLine,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HitchinThorpeReport {
    pub plus: SideReport,
    pub minus: SideReport,
}

impl HitchinThorpeReport {
    pub fn plus_ok(&self) -> bool {
        self.plus.value >= 0
    }

    pub fn minus_ok(&self) -> bool {
        self.minus.value >= 0
    }
}

fn is_structural(m: &Manifold, kind: &AtomKind) -> bool {
    m.as_atom().is_some_and(|a| a.kind() == kind)
}

fn diagnose_equality(
    m: &Manifold,
    r: &InvariantRecord,
    reversed: bool,
) -> (EqualityDiagnosis, String) {
    let k3 = Atom::k3();
    let k3 = if reversed { k3.reverse() } else { k3 };
    if m.is_atom(&k3) {
        return (
            EqualityDiagnosis::Permitted,
            "equality realized by the hyper-Kaehler K3".into(),
        );
    }
    if is_structural(m, &AtomKind::T4) {
        return (
            EqualityDiagnosis::Permitted,
            "equality realized by the flat torus".into(),
        );
    }
    if r.simply_connected.is_yes() {
        let (chi, tau) = (24, if reversed { 16 } else { -16 });
        if r.spin.is_no() || (r.chi, r.tau) != (chi, tau) {
            return (
                EqualityDiagnosis::Obstructed,
                format!(
                    "equality forces a finite quotient of K3 or T4, but (χ, τ, spin) = ({}, {}, {}) differs from K3's ({chi}, {tau}, yes)",
                    r.chi, r.tau, r.spin
                ),
            );
        }
    }
    (
        EqualityDiagnosis::Unknown,
        "equality case not decided: not structurally K3 or T4".into(),
    )
}

fn ht_side(m: &Manifold, r: &InvariantRecord, plus: bool) -> SideReport {
    let (tag, sign, value) = if plus {
        (Tag::HtPlus, "+", r.plus())
    } else {
        (Tag::HtMinus, "-", r.minus())
    };
    let head = format!("2χ{sign}3τ = 2·{} {sign} 3·({}) = {value}", r.chi, r.tau);
    let (outcome, equality, text) = if value > 0 {
        (Outcome::Pass, None, format!("{head} > 0"))
    } else if value < 0 {
        (
            Outcome::Obstructed,
            None,
            format!("{head} < 0, violates 2χ{sign}3τ ≥ 0"),
        )
    } else {
        let (diag, why) = diagnose_equality(m, r, !plus);
        let outcome = match diag {
            EqualityDiagnosis::Obstructed => Outcome::Obstructed,
            EqualityDiagnosis::Permitted => Outcome::Pass,
            EqualityDiagnosis::Unknown => Outcome::Inconclusive,
        };
        (outcome, Some(diag), format!("{head}, equality; {why}"))
    };
    SideReport {
        value,
        outcome,
        equality,
        line: CertificateLine { tag, text },
    }
}

/// Both Hitchin-Thorpe inequalities `2 chi ± 3 tau >= 0` with equality diagnosis.
pub fn hitchin_thorpe(m: &Manifold, r: &InvariantRecord) -> HitchinThorpeReport {
    HitchinThorpeReport {
        plus: ht_side(m, r, true),
        minus: ht_side(m, r, false),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwSide {
    pub lhs: Rational,
    pub rhs: Rational,
    pub outcome: Outcome,
    pub line: CertificateLine,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwReport {
    /// `None` when alpha squared is unknown or undefined.
    pub plus: Option<SwSide>,
    pub minus: Option<SwSide>,
}

/// Checks `2 chi + 3 tau >= (2/3) alpha^2` and `2 chi - 3 tau >= (1/3) alpha^2`.
///
/// A lower bound for alpha squared is as good as the exact value here: both
/// strict failure and equality with a positive right side obstruct.
pub fn sw_einstein_obstruction(r: &InvariantRecord, alpha: &AlphaValue) -> SwReport {
    let Some(a) = alpha.status.value() else {
        return SwReport {
            plus: None,
            minus: None,
        };
    };
    let bound = match alpha.status {
        AlphaStatus::Exact(_) => "α² =",
        _ => "α² ≥",
    };
    let side = |plus: bool| {
        let (tag, sign, lhs, coeff) = if plus {
            (Tag::SwPlus, "+", r.plus(), Rational::new(2, 3))
        } else {
            (Tag::SwMinus, "-", r.minus(), Rational::new(1, 3))
        };
        let lhs = Rational::from_integer(lhs);
        let rhs = coeff * a;
        let head = format!("2χ{sign}3τ = {lhs}, ({coeff})·α² = {rhs} with {bound} {a}");
        let (outcome, text) = if lhs > rhs {
            (Outcome::Pass, format!("{head}; {lhs} > {rhs}"))
        } else if lhs < rhs {
            (
                Outcome::Obstructed,
                format!("{head}; {lhs} < {rhs} violates 2χ{sign}3τ ≥ ({coeff})·α²"),
            )
        } else if a.is_zero() {
            (
                Outcome::Inconclusive,
                format!(
                    "{head}; both sides vanish, deferred to {}",
                    if plus { "HT+" } else { "HT-" }
                ),
            )
        } else if plus {
            // equality with a positive right side is only possible for K3 and T4,
            // both of which have alpha = 0
            (
                Outcome::Obstructed,
                format!("{head}; equality {lhs} = {rhs} with α² > 0, and M is not K3 or T4"),
            )
        } else if r.simply_connected.is_yes() {
            (
                Outcome::Obstructed,
                format!(
                    "{head}; equality {lhs} = {rhs} with α² > 0 forces a complex-hyperbolic quotient, but M is simply connected"
                ),
            )
        } else {
            (
                Outcome::Inconclusive,
                format!("{head}; equality with α² > 0, fundamental group not controlled"),
            )
        };
        SwSide {
            lhs,
            rhs,
            outcome,
            line: CertificateLine { tag, text },
        }
    };
    SwReport {
        plus: Some(side(true)),
        minus: Some(side(false)),
    }
}

fn existence_of_atom(atom: &Atom) -> Option<(Tag, String)> {
    let hit = |tag, why: &str| Some((tag, why.to_string()));
    match atom.kind() {
        AtomKind::T4 => hit(Tag::Flat, "flat metric on the torus"),
        AtomKind::Hypersurface(4) => hit(Tag::HyperKaehler, "hyper-Kaehler metric on K3"),
        AtomKind::CP2 => hit(Tag::Tian, "Fubini-Study metric"),
        AtomKind::S2xS2 => hit(Tag::Tian, "product of round metrics"),
        AtomKind::S4 => hit(Tag::Round, "round metric"),
        _ => None,
    }
}

/// Known Einstein metrics, independent of orientation.
pub fn einstein_existence(m: &Manifold) -> Result<Option<(Tag, String)>, ObstructionError> {
    if m.is_s4() {
        return Ok(Some((Tag::Round, "round metric on S4".into())));
    }
    for candidate in [m.clone(), m.reverse()] {
        if let Some(found) = existence_standard(&candidate)? {
            return Ok(Some(found));
        }
    }
    Ok(None)
}

fn existence_standard(m: &Manifold) -> Result<Option<(Tag, String)>, ObstructionError> {
    let (rest, k) = m.split_blowups();
    if rest.is_atom(&Atom::cp2()) {
        return Ok(match k {
            1 => Some((Tag::Page, "Page metric on CP2 # CP2~".into())),
            3..=8 => Some((
                Tag::Tian,
                format!("Kaehler-Einstein del Pezzo metric on CP2 # {k}*CP2~"),
            )),
            _ => None,
        });
    }
    let Some(atom) = m.as_atom() else {
        return Ok(None);
    };
    if atom.is_reversed() {
        return Ok(None);
    }
    let r = crate::invariants::atom_invariants(atom)?;
    if let Some(found) = existence_of_atom(atom) {
        return Ok(Some(found));
    }
    let Some(c) = r.complex.as_ref() else {
        return Ok(None);
    };
    if c.ample_k {
        return Ok(Some((
            Tag::AubinYau,
            "Kaehler-Einstein metric, K is ample".into(),
        )));
    }
    if let AtomKind::CyclicCover { .. } | AtomKind::Hypersurface(_) = atom.kind() {
        if c.minimal && c.c1sq == 0 && r.simply_connected.is_yes() {
            return Ok(Some((
                Tag::Yau,
                "Ricci-flat Kaehler metric, K is trivial".into(),
            )));
        }
        if !c.minimal && c.c1sq_minimal_model == Some(9) && (1..=8).contains(&c.c1sq) {
            let k = 9 - c.c1sq;
            return Ok(match k {
                3..=8 => Some((
                    Tag::Tian,
                    format!("Kaehler-Einstein del Pezzo metric, CP2 # {k}*CP2~"),
                )),
                _ => None,
            });
        }
        if c.c1sq == 8 && c.chi_h == 1 && r.spin.is_yes() {
            return Ok(Some((
                Tag::Tian,
                "product metric on the quadric S2xS2".into(),
            )));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Conclusion {
    Exists { tag: Tag, reason: String },
    Obstructed { tag: Tag, reason: String },
    Unknown { reason: String },
}

impl Conclusion {
    pub fn name(&self) -> &'static str {
        match self {
            Conclusion::Exists { .. } => "exists",
            Conclusion::Obstructed { .. } => "obstructed",
            Conclusion::Unknown { .. } => "unknown",
        }
    }

    pub fn tag(&self) -> Option<Tag> {
        match self {
            Conclusion::Exists { tag, .. } | Conclusion::Obstructed { tag, .. } => Some(*tag),
            Conclusion::Unknown { .. } => None,
        }
    }

    pub fn reason(&self) -> &str {
        match self {
            Conclusion::Exists { reason, .. }
            | Conclusion::Obstructed { reason, .. }
            | Conclusion::Unknown { reason } => reason,
        }
    }

    pub fn is_exists(&self) -> bool {
        matches!(self, Conclusion::Exists { .. })
    }

    pub fn is_obstructed(&self) -> bool {
        matches!(self, Conclusion::Obstructed { .. })
    }
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conclusion::Exists { tag, reason } => write!(f, "Exists({tag}): {reason}"),
            Conclusion::Obstructed { tag, reason } => write!(f, "Obstructed({tag}): {reason}"),
            Conclusion::Unknown { reason } => write!(f, "Unknown: {reason}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub conclusion: Conclusion,
    pub certificate: Vec<CertificateLine>,
}

/// Everything computed on the way to a verdict.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    pub manifold: Manifold,
    pub record: InvariantRecord,
    pub alpha: AlphaValue,
    pub hitchin_thorpe: HitchinThorpeReport,
    pub seiberg_witten: SwReport,
    pub verdict: Verdict,
}

/// Runs the existence catalog and every obstruction.
pub fn evaluate(m: &Manifold) -> Result<Evaluation, ObstructionError> {
    let record = invariants(m)?;
    let alpha = alpha_squared(m, &record);
    let ht = hitchin_thorpe(m, &record);
    let sw = sw_einstein_obstruction(&record, &alpha);
    let existence = einstein_existence(m)?;

    let mut certificate = Vec::new();
    if let Some((tag, reason)) = &existence {
        certificate.push(CertificateLine {
            tag: *tag,
            text: format!("exists: {reason}"),
        });
    }
    certificate.push(ht.plus.line.clone());
    certificate.push(ht.minus.line.clone());
    let sw_sides: Vec<&SwSide> = sw.plus.iter().chain(sw.minus.iter()).collect();
    for s in &sw_sides {
        certificate.push(s.line.clone());
    }
    if sw_sides.is_empty() {
        for (tag, sign) in [(Tag::SwPlus, "+"), (Tag::SwMinus, "-")] {
            certificate.push(CertificateLine {
                tag,
                text: format!("2χ{sign}3τ vs α²: inconclusive, α² is {}", alpha.status),
            });
        }
    }

    let obstruction = [
        (&ht.plus.outcome, &ht.plus.line),
        (&ht.minus.outcome, &ht.minus.line),
    ]
    .into_iter()
    .chain(sw_sides.iter().map(|s| (&s.outcome, &s.line)))
    .find(|(o, _)| **o == Outcome::Obstructed)
    .map(|(_, line)| line.clone());

    let conclusion = match (existence, obstruction) {
        (Some((tag, reason)), Some(line)) => {
            return Err(ObstructionError::Consistency(format!(
                "{m}: existence ({tag}: {reason}) contradicts obstruction ({line})"
            )))
        }
        (Some((tag, reason)), None) => Conclusion::Exists { tag, reason },
        (None, Some(line)) => Conclusion::Obstructed {
            tag: line.tag,
            reason: line.text,
        },
        (None, None) => Conclusion::Unknown {
            reason: "no existence theorem or obstruction applies".into(),
        },
    };
    Ok(Evaluation {
        manifold: m.clone(),
        record,
        alpha,
        hitchin_thorpe: ht,
        seiberg_witten: sw,
        verdict: Verdict {
            conclusion,
            certificate,
        },
    })
}

pub fn verdict(m: &Manifold) -> Result<Verdict, ObstructionError> {
    Ok(evaluate(m)?.verdict)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormFlags {
    pub eleven_eighths_regime: bool,
    pub rokhlin_violation: bool,
    pub donaldson_excluded: bool,
}

/// Homeomorphism type of a simply connected closed 4-manifold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomeoType {
    pub chi: i64,
    pub tau: i64,
    pub parity: Parity,
    /// A catalog representative, when one exists.
    pub canonical: Option<String>,
    pub flags: FormFlags,
}

impl HomeoType {
    pub fn triple(&self) -> (i64, i64, Parity) {
        (self.chi, self.tau, self.parity)
    }
}

/// Screens a form of the given rank and parity against Donaldson's and
/// Rokhlin's theorems.
pub fn smoothable_form(b_plus: i64, b_minus: i64, parity: Parity) -> FormFlags {
    let even = parity == Parity::Even;
    FormFlags {
        eleven_eighths_regime: false,
        rokhlin_violation: even && (b_plus - b_minus) % 16 != 0,
        donaldson_excluded: even && (b_plus == 0 || b_minus == 0) && b_plus + b_minus > 0,
    }
}

fn parity_of(r: &InvariantRecord, m: &Manifold) -> Result<Parity, ObstructionError> {
    match r.spin {
        Tri::Yes => Ok(Parity::Even),
        Tri::No => Ok(Parity::Odd),
        Tri::Unknown => Err(ObstructionError::UnknownParity(m.to_string())),
    }
}

/// Freedman's classification of a simply connected expression.
pub fn freedman_class(m: &Manifold, r: &InvariantRecord) -> Result<HomeoType, ObstructionError> {
    if !r.simply_connected.is_yes() {
        return Err(ObstructionError::NotSimplyConnected(m.to_string()));
    }
    let parity = parity_of(r, m)?;
    let (chi, tau) = (r.chi, r.tau);
    let mut flags = smoothable_form(r.b_plus, r.b_minus, parity);
    let canonical = match parity {
        Parity::Odd => Some(match (r.b_plus, r.b_minus) {
            (p, 0) => format!("{p}*CP2"),
            (0, q) => format!("{q}*CP2~"),
            (p, q) => format!("{p}*CP2 # {q}*CP2~"),
        }),
        Parity::Even => {
            flags.eleven_eighths_regime = 8 * (chi - 2) < 11 * tau.abs();
            if chi == 2 && tau == 0 {
                Some("S4".to_string())
            } else if tau % 16 == 0 && !flags.eleven_eighths_regime {
                let k = tau.abs() / 16;
                let n = (chi - 2 - 22 * k) / 2;
                let k3 = if tau > 0 { "K3~" } else { "K3" };
                Some(format!("{k}*{k3} # {n}*S2xS2"))
            } else {
                None
            }
        }
    };
    Ok(HomeoType {
        chi,
        tau,
        parity,
        canonical,
        flags,
    })
}

/// Freedman's criterion. Structurally equal expressions are homeomorphic
/// regardless of what is known about them.
pub fn homeomorphic(a: &Manifold, b: &Manifold) -> Result<Tri, ObstructionError> {
    if a == b {
        return Ok(Tri::Yes);
    }
    let (ra, rb) = (invariants(a)?, invariants(b)?);
    if !(ra.simply_connected.is_yes() && rb.simply_connected.is_yes()) {
        return Ok(Tri::Unknown);
    }
    if (ra.chi, ra.tau) != (rb.chi, rb.tau) {
        return Ok(Tri::No);
    }
    Ok(match (ra.spin, rb.spin) {
        (Tri::Unknown, _) | (_, Tri::Unknown) => Tri::Unknown,
        (x, y) => Tri::from_bool(x == y),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn eval(text: &str) -> Evaluation {
        evaluate(&parse(text).unwrap()).unwrap()
    }

    fn homeo(a: &str, b: &str) -> Tri {
        homeomorphic(&parse(a).unwrap(), &parse(b).unwrap()).unwrap()
    }

    fn class(text: &str) -> Result<HomeoType, ObstructionError> {
        let m = parse(text).unwrap();
        freedman_class(&m, &invariants(&m).unwrap())
    }

    #[test]
    fn hitchin_thorpe_examples() {
        let e = eval("CP2 # 10*CP2~");
        assert_eq!(e.hitchin_thorpe.plus.value, -1);
        assert!(!e.hitchin_thorpe.plus_ok());
        let e = eval("T4");
        assert_eq!(
            e.hitchin_thorpe.plus.equality,
            Some(EqualityDiagnosis::Permitted)
        );
        assert_eq!(
            e.hitchin_thorpe.minus.equality,
            Some(EqualityDiagnosis::Permitted)
        );
        let e = eval("3*CP2 # 19*CP2~");
        assert_eq!(
            e.hitchin_thorpe.plus.equality,
            Some(EqualityDiagnosis::Obstructed)
        );
        assert_eq!(e.verdict.conclusion.tag(), Some(Tag::HtPlus));
    }

    #[test]
    fn k3_with_reversed_orientation() {
        let e = eval("reverse(K3)");
        assert_eq!(
            e.hitchin_thorpe.minus.equality,
            Some(EqualityDiagnosis::Permitted)
        );
        assert_eq!(e.verdict.conclusion.tag(), Some(Tag::HyperKaehler));
    }

    #[test]
    fn seiberg_witten_examples() {
        let e = eval("Cover(3,6) # CP2~");
        let plus = e.seiberg_witten.plus.as_ref().unwrap();
        assert_eq!(
            (plus.lhs, plus.rhs),
            (Rational::from_integer(2), Rational::from_integer(2))
        );
        assert_eq!(plus.outcome, Outcome::Obstructed);
        assert_eq!(e.verdict.conclusion.tag(), Some(Tag::SwPlus));

        let e = eval("Cover(2,8) # CP2~");
        let plus = e.seiberg_witten.plus.as_ref().unwrap();
        assert_eq!(
            (plus.lhs, plus.rhs),
            (Rational::from_integer(1), Rational::new(4, 3))
        );
        assert!(e.hitchin_thorpe.plus_ok());
        assert!(e.verdict.conclusion.is_obstructed());

        let e = eval("K3");
        assert_eq!(
            e.seiberg_witten.plus.as_ref().unwrap().outcome,
            Outcome::Inconclusive
        );
        assert!(e.verdict.conclusion.is_exists());
    }

    #[test]
    fn existence_catalog() {
        let tag = |t: &str| eval(t).verdict.conclusion.tag();
        assert_eq!(tag("Cover(2,8)"), Some(Tag::AubinYau));
        assert_eq!(tag("reverse(Cover(2,8))"), Some(Tag::AubinYau));
        assert_eq!(tag("CP2 # CP2~"), Some(Tag::Page));
        assert_eq!(tag("CP2~ # CP2"), Some(Tag::Page));
        assert_eq!(tag("CP2 # 5*CP2~"), Some(Tag::Tian));
        assert_eq!(tag("CP2~ # 8*CP2"), Some(Tag::Tian));
        assert_eq!(tag("Hyp(3)"), Some(Tag::Tian));
        assert_eq!(tag("Cover(2,4)"), Some(Tag::Tian));
        assert_eq!(tag("Cover(2,6)"), Some(Tag::Yau));
        assert_eq!(tag("S4"), Some(Tag::Round));
        assert_eq!(tag("K3"), Some(Tag::HyperKaehler));
        assert_eq!(tag("T4"), Some(Tag::Flat));
        assert_eq!(tag("reverse(T4)"), Some(Tag::Flat));
        let e = eval("CP2 # 2*CP2~");
        assert!(matches!(e.verdict.conclusion, Conclusion::Unknown { .. }));
        assert!(eval("CP2 # 12*CP2~").verdict.conclusion.is_obstructed());
    }

    #[test]
    fn freedman_examples() {
        let h = class("Cover(2,8)").unwrap();
        assert_eq!(h.triple(), (46, -30, Parity::Odd));
        assert_eq!(h.canonical.as_deref(), Some("7*CP2 # 37*CP2~"));
        let h = class("K3").unwrap();
        assert_eq!(h.canonical.as_deref(), Some("1*K3 # 0*S2xS2"));
        assert!(!h.flags.eleven_eighths_regime);
        assert!(matches!(
            class("T4 # CP2"),
            Err(ObstructionError::NotSimplyConnected(_))
        ));
        assert_eq!(class("S4").unwrap().canonical.as_deref(), Some("S4"));
        assert_eq!(
            class("5*CP2~").unwrap().canonical.as_deref(),
            Some("5*CP2~")
        );
        assert_eq!(
            class("2*reverse(K3) # S2xS2").unwrap().canonical.as_deref(),
            Some("2*K3~ # 1*S2xS2")
        );
    }

    #[test]
    fn canonical_forms_parse_back() {
        for text in [
            "Cover(2,8)",
            "K3 # 3*S2xS2",
            "2*reverse(K3)",
            "CP2 # 4*CP2~",
            "S2xS2",
        ] {
            let m = parse(text).unwrap();
            let r = invariants(&m).unwrap();
            let h = freedman_class(&m, &r).unwrap();
            let back = parse(h.canonical.as_ref().unwrap()).unwrap();
            assert_eq!(homeomorphic(&m, &back).unwrap(), Tri::Yes, "{text}");
        }
    }

    #[test]
    fn homeomorphism_examples() {
        assert_eq!(homeo("Cover(3,6) # CP2~", "Cover(2,8)"), Tri::Yes);
        assert_eq!(homeo("K3", "3*CP2 # 19*CP2~"), Tri::No);
        assert_eq!(homeo("T4", "T4"), Tri::Yes);
        assert_eq!(homeo("T4", "T4 # S2xS2"), Tri::Unknown);
    }

    #[test]
    fn form_screening() {
        assert!(smoothable_form(0, 8, Parity::Even).donaldson_excluded);
        assert_eq!(smoothable_form(3, 19, Parity::Even), FormFlags::default());
        assert_eq!(smoothable_form(1, 2, Parity::Odd), FormFlags::default());
        assert!(smoothable_form(0, 8, Parity::Even).rokhlin_violation);
        assert!(!smoothable_form(0, 0, Parity::Even).donaldson_excluded);
    }

    #[test]
    fn certificate_cites_every_check() {
        let e = eval("Cover(3,6) # CP2~");
        let tags: Vec<Tag> = e.verdict.certificate.iter().map(|l| l.tag).collect();
        assert_eq!(
            tags,
            vec![Tag::HtPlus, Tag::HtMinus, Tag::SwPlus, Tag::SwMinus]
        );
        assert!(e.verdict.certificate[2].text.contains("2 = 2"));
    }
}
