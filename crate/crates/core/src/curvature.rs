//! Curvature decompositions of model geometries and the identities they
//! satisfy: Gauss-Bonnet type formulas for `2 chi ± 3 tau`, the Kaehler
//! spectrum of `W+`, the Weitzenboeck formula on the Kaehler form, and the
//! pointwise saturation of the anti-self-dual bound.
//!
//! Volumes are stored as coefficients of `pi^2`, so every check is a rational
//! identity when `T` is exact.

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurvatureError {
    #[error("{model}: missing {field}")]
    MissingData { model: String, field: &'static str },
    #[error("{model}: {reason}")]
    PreconditionViolation { model: String, reason: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelGeometry<T> {
    pub name: String,
    /// Scalar curvature.
    pub s: T,
    /// Eigenvalues of `W+` on self-dual forms. For Kaehler models the first
    /// entry belongs to the Kaehler form.
    pub wplus_spectrum: [T; 3],
    /// `|W-|^2`, absent for density models without a fixed orientation partner.
    pub wminus_sq: Option<T>,
    /// `|r0|^2` of the trace-free Ricci tensor.
    pub ricci0_sq: T,
    /// Volume as a coefficient of `pi^2`; absent for density-only models.
    pub volume: Option<T>,
    pub chi: Option<i64>,
    pub tau: Option<i64>,
    pub kaehler: bool,
    pub einstein: bool,
}

fn q<T: Scalar>(n: i64, d: i64) -> T {
    T::from_ratio(n, d)
}

impl<T: Scalar> ModelGeometry<T> {
    /// `|W+|^2`, the sum of squared eigenvalues.
    pub fn wplus_sq(&self) -> T {
        self.wplus_spectrum
            .iter()
            .fold(T::zero(), |acc, w| acc + w.clone() * w.clone())
    }

    /// Lowest eigenvalue of `W+`.
    pub fn lowest_wplus(&self) -> T {
        let [a, b, c] = &self.wplus_spectrum;
        let m = if a < b { a } else { b };
        (if m < c { m } else { c }).clone()
    }

    /// `W+` is trace-free and Einstein metrics have `r0 = 0`.
    pub fn is_consistent(&self) -> bool {
        let [a, b, c] = &self.wplus_spectrum;
        let trace = a.clone() + b.clone() + c.clone();
        let scale = self.s.clone().abs() + T::one();
        trace.is_negligible(&scale) && (!self.einstein || self.ricci0_sq.is_negligible(&scale))
    }

    /// Reverses orientation, swapping the roles of `W+` and `W-`.
    ///
    /// Only the norm of `W-` is stored, so the new spectrum is known only
    /// when `W-` vanishes or the model is self-dual up to a swap.
    fn reversed(&self, name: &str, spectrum: [T; 3]) -> Self {
        ModelGeometry {
            name: name.to_string(),
            wplus_spectrum: spectrum,
            wminus_sq: Some(self.wplus_sq()),
            tau: self.tau.map(|t| -t),
            kaehler: false,
            ..self.clone()
        }
    }

    fn density(&self, wsq: T) -> T {
        q::<T>(1, 4)
            * (self.s.clone() * self.s.clone() / T::from_int(24) + T::from_int(2) * wsq
                - self.ricci0_sq.clone() / T::from_int(2))
    }

    /// Integrand `(1/4 pi^2)(s^2/24 + 2|W+|^2 - |r0|^2/2)` in units of `pi^-2`.
    pub fn plus_density(&self) -> T {
        self.density(self.wplus_sq())
    }

    pub fn minus_density(&self) -> Option<T> {
        self.wminus_sq.clone().map(|w| self.density(w))
    }

    fn precondition(&self, ok: bool, reason: &str) -> Result<(), CurvatureError> {
        if ok {
            Ok(())
        } else {
            Err(CurvatureError::PreconditionViolation {
                model: self.name.clone(),
                reason: reason.to_string(),
            })
        }
    }

    fn missing(&self, field: &'static str) -> CurvatureError {
        CurvatureError::MissingData {
            model: self.name.clone(),
            field,
        }
    }
}

/// The model catalog with every curvature quantity exact in `T`.
pub fn builtin_models<T: Scalar>() -> Vec<ModelGeometry<T>> {
    let z = || T::zero();
    let i = |n: i64| T::from_int(n);
    let fubini_study = ModelGeometry {
        name: "CP2".into(),
        s: i(24),
        wplus_spectrum: [i(4), i(-2), i(-2)],
        wminus_sq: Some(z()),
        ricci0_sq: z(),
        volume: Some(q(1, 2)),
        chi: Some(3),
        tau: Some(1),
        kaehler: true,
        einstein: true,
    };
    let reversed_plane = fubini_study.reversed("CP2~", [z(), z(), z()]);
    vec![
        ModelGeometry {
            name: "S4".into(),
            s: i(12),
            wplus_spectrum: [z(), z(), z()],
            wminus_sq: Some(z()),
            ricci0_sq: z(),
            volume: Some(q(8, 3)),
            chi: Some(2),
            tau: Some(0),
            kaehler: false,
            einstein: true,
        },
        ModelGeometry {
            name: "T4".into(),
            s: z(),
            wplus_spectrum: [z(), z(), z()],
            wminus_sq: Some(z()),
            ricci0_sq: z(),
            volume: Some(i(1)),
            chi: Some(0),
            tau: Some(0),
            kaehler: true,
            einstein: true,
        },
        fubini_study,
        reversed_plane,
        ModelGeometry {
            name: "S2xS2".into(),
            s: i(4),
            wplus_spectrum: [q(2, 3), q(-1, 3), q(-1, 3)],
            // swapping the factors reverses orientation and preserves the metric
            wminus_sq: Some(q(2, 3)),
            ricci0_sq: z(),
            volume: Some(i(16)),
            chi: Some(4),
            tau: Some(0),
            kaehler: true,
            einstein: true,
        },
        ModelGeometry {
            name: "K3".into(),
            s: z(),
            wplus_spectrum: [z(), z(), z()],
            wminus_sq: None,
            ricci0_sq: z(),
            volume: None,
            chi: Some(24),
            tau: Some(-16),
            kaehler: true,
            einstein: true,
        },
        ModelGeometry {
            name: "CH2".into(),
            s: i(-24),
            wplus_spectrum: [i(-4), i(2), i(2)],
            wminus_sq: Some(z()),
            ricci0_sq: z(),
            volume: None,
            chi: None,
            tau: None,
            kaehler: true,
            einstein: true,
        },
        ModelGeometry {
            name: "H4".into(),
            s: i(-12),
            wplus_spectrum: [z(), z(), z()],
            wminus_sq: Some(z()),
            ricci0_sq: z(),
            volume: None,
            chi: None,
            tau: None,
            kaehler: false,
            einstein: true,
        },
    ]
}

/// Residuals `(2 chi ± 3 tau) - (1/4 pi^2) int (s^2/24 + 2|W±|^2 - |r0|^2/2)`.
pub fn gauss_bonnet_check<T: Scalar>(m: &ModelGeometry<T>) -> Result<(T, T), CurvatureError> {
    let vol = m.volume.clone().ok_or_else(|| m.missing("volume"))?;
    let chi = m.chi.ok_or_else(|| m.missing("chi"))?;
    let tau = m.tau.ok_or_else(|| m.missing("tau"))?;
    let minus = m.minus_density().ok_or_else(|| m.missing("|W-|^2"))?;
    let plus_res = T::from_int(2 * chi + 3 * tau) - m.plus_density() * vol.clone();
    let minus_res = T::from_int(2 * chi - 3 * tau) - minus * vol;
    Ok((plus_res, minus_res))
}

/// Whether the `W+` spectrum is `(s/6, -s/12, -s/12)` and `s^2 = 24 |W+|^2`.
pub fn kaehler_spectrum_check<T: Scalar>(m: &ModelGeometry<T>) -> bool {
    let s = m.s.clone();
    let scale = s.clone().abs() + T::one();
    let want = [
        s.clone() / T::from_int(6),
        -s.clone() / T::from_int(12),
        -s.clone() / T::from_int(12),
    ];
    let spectrum_ok = m
        .wplus_spectrum
        .iter()
        .zip(&want)
        .all(|(a, b)| (a.clone() - b.clone()).is_negligible(&scale));
    let norm = s.clone() * s - T::from_int(24) * m.wplus_sq();
    spectrum_ok && norm.is_negligible(&(scale.clone() * scale))
}

/// Residual of the Weitzenboeck formula on the parallel Kaehler form `omega`:
/// `-2 W+(omega, omega) + (s/3) |omega|^2` with `|omega|^2 = 2`.
pub fn weitzenboeck_parallel_check<T: Scalar>(m: &ModelGeometry<T>) -> Result<T, CurvatureError> {
    m.precondition(m.kaehler && m.einstein, "needs a Kaehler-Einstein model")?;
    let two = T::from_int(2);
    let w_omega = m.wplus_spectrum[0].clone() * two.clone();
    Ok(-two.clone() * w_omega + m.s.clone() / T::from_int(3) * two)
}

/// Whether a Kaehler-Einstein density with `W- = 0` turns the anti-self-dual
/// bound into an equality: `(1/4)(s^2/24 + 2|W-|^2 - |r0|^2/2) = (1/3)(s^2/32)`.
pub fn saturation_check<T: Scalar>(m: &ModelGeometry<T>) -> Result<bool, CurvatureError> {
    m.precondition(m.kaehler && m.einstein, "needs a Kaehler-Einstein model")?;
    let wminus = m.wminus_sq.clone().ok_or_else(|| m.missing("|W-|^2"))?;
    let scale = m.s.clone().abs() + T::one();
    m.precondition(wminus.is_negligible(&scale), "needs W- = 0")?;
    let lhs = m.minus_density().expect("W- present");
    let rhs = q::<T>(1, 3) * m.s.clone() * m.s.clone() / T::from_int(32);
    Ok((lhs - rhs).is_negligible(&(scale.clone() * scale)))
}

/// Every applicable check on one model.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelReport<T> {
    pub name: String,
    pub consistent: bool,
    pub gauss_bonnet: Result<(T, T), CurvatureError>,
    pub kaehler_spectrum: Option<bool>,
    pub weitzenboeck: Result<T, CurvatureError>,
    pub saturation: Result<bool, CurvatureError>,
}

impl<T: Scalar> ModelReport<T> {
    /// False if any check that applies fails. Missing data and unmet
    /// preconditions do not count as failures.
    pub fn passes(&self) -> bool {
        let scale = T::from_int(1000);
        let gb = match &self.gauss_bonnet {
            Ok((p, m)) => p.is_negligible(&scale) && m.is_negligible(&scale),
            Err(_) => true,
        };
        let wb = match &self.weitzenboeck {
            Ok(r) => r.is_negligible(&scale),
            Err(_) => true,
        };
        self.consistent
            && gb
            && wb
            && self.kaehler_spectrum != Some(false)
            && !matches!(self.saturation, Ok(false))
    }
}

pub fn check_model<T: Scalar>(m: &ModelGeometry<T>) -> ModelReport<T> {
    ModelReport {
        name: m.name.clone(),
        consistent: m.is_consistent(),
        gauss_bonnet: gauss_bonnet_check(m),
        kaehler_spectrum: m.kaehler.then(|| kaehler_spectrum_check(m)),
        weitzenboeck: weitzenboeck_parallel_check(m),
        saturation: saturation_check(m),
    }
}
