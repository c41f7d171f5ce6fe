//! Integral intersection forms with a finite set of candidate monopole classes.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::AlphaError;
use crate::invariants::{atom_invariants, InvariantRecord};
use crate::manifold::Manifold;
use crate::scalar::Tri;

/// The Cartan matrix of E8 (positive definite, even, unimodular).
const E8: [[i64; 8]; 8] = [
    [2, -1, 0, 0, 0, 0, 0, 0],
    [-1, 2, -1, 0, 0, 0, 0, 0],
    [0, -1, 2, -1, 0, 0, 0, -1],
    [0, 0, -1, 2, -1, 0, 0, 0],
    [0, 0, 0, -1, 2, -1, 0, 0],
    [0, 0, 0, 0, -1, 2, -1, 0],
    [0, 0, 0, 0, 0, -1, 2, 0],
    [0, 0, -1, 0, 0, 0, 0, 2],
];

/// Exact congruence diagonalization `C^T Q C = diag(d)`.
#[derive(Clone, Debug)]
pub struct Diagonalization {
    /// Columns of `C`, one per diagonal entry.
    pub basis: Vec<Vec<BigRational>>,
    pub diagonal: Vec<BigRational>,
}

/// Diagonalizes a symmetric integer matrix by congruence over the rationals.
///
/// Returns `None` when the form is degenerate.
pub fn diagonalize(gram: &[Vec<i64>]) -> Option<Diagonalization> {
    let n = gram.len();
    let mut a: Vec<Vec<BigRational>> = gram
        .iter()
        .map(|row| {
            row.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect()
        })
        .collect();
    let mut c: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();

    // Column operations on C mirror simultaneous row/column operations on A.
    fn add_multiple(
        a: &mut [Vec<BigRational>],
        c: &mut [Vec<BigRational>],
        dst: usize,
        src: usize,
        f: &BigRational,
    ) {
        for row in c.iter_mut() {
            let v = &row[src] * f;
            row[dst] += v;
        }
        let src_row = a[src].clone();
        for (x, y) in a[dst].iter_mut().zip(&src_row) {
            *x += y * f;
        }
        for row in a.iter_mut() {
            let v = &row[src] * f;
            row[dst] += v;
        }
    }
    fn swap(a: &mut [Vec<BigRational>], c: &mut [Vec<BigRational>], i: usize, j: usize) {
        a.swap(i, j);
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in c.iter_mut() {
            row.swap(i, j);
        }
    }

    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(i) = (k + 1..n).find(|&i| !a[i][i].is_zero()) {
                swap(&mut a, &mut c, k, i);
            } else if let Some((i, j)) = (k..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !a[i][j].is_zero())
            {
                // Both diagonal entries vanish, so e_i + e_j has square 2 a_ij.
                add_multiple(&mut a, &mut c, i, j, &BigRational::one());
                swap(&mut a, &mut c, k, i);
            } else {
                return None;
            }
        }
        let pivot = a[k][k].clone();
        for j in (k + 1)..n {
            if !a[j][k].is_zero() {
                let f = -(&a[j][k] / &pivot);
                add_multiple(&mut a, &mut c, j, k, &f);
            }
        }
    }
    let diagonal = (0..n).map(|i| a[i][i].clone()).collect();
    let basis = (0..n)
        .map(|j| (0..n).map(|i| c[i][j].clone()).collect())
        .collect();
    Some(Diagonalization { basis, diagonal })
}

/// An integral symmetric form together with candidate monopole classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticFormSpace {
    gram: Vec<Vec<i64>>,
    classes: Vec<Vec<i64>>,
    b_plus: usize,
    b_minus: usize,
}

impl QuadraticFormSpace {
    /// Validates symmetry, unimodularity and class dimensions.
    pub fn new(gram: Vec<Vec<i64>>, classes: Vec<Vec<i64>>) -> Result<Self, AlphaError> {
        let n = gram.len();
        if n == 0 {
            return Err(AlphaError::Format("intersection form is empty".into()));
        }
        for (i, row) in gram.iter().enumerate() {
            if row.len() != n {
                return Err(AlphaError::Format(format!(
                    "row {} has {} entries, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
        }
        let below_diagonal = (0..n).flat_map(|i| (0..i).map(move |j| (i, j)));
        for (i, j) in below_diagonal {
            if gram[i][j] != gram[j][i] {
                return Err(AlphaError::Format(format!(
                    "form is not symmetric at ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
        }
        for (k, a) in classes.iter().enumerate() {
            if a.len() != n {
                return Err(AlphaError::Format(format!(
                    "class {} has {} entries, expected {n}",
                    k + 1,
                    a.len()
                )));
            }
        }
        let diag = diagonalize(&gram).ok_or(AlphaError::DegenerateForm)?;
        let det: BigRational = diag
            .diagonal
            .iter()
            .fold(BigRational::one(), |acc, d| acc * d);
        if det.abs() != BigRational::one() {
            return Err(AlphaError::NotUnimodular(det.to_string()));
        }
        let b_plus = diag.diagonal.iter().filter(|d| d.is_positive()).count();
        Ok(QuadraticFormSpace {
            b_minus: n - b_plus,
            b_plus,
            gram,
            classes,
        })
    }

    /// Parses the plain-text matrix and class formats: one row per line,
    /// integers separated by whitespace, blank lines and `#` comments ignored.
    pub fn from_text(gram: &str, classes: &str) -> Result<Self, AlphaError> {
        QuadraticFormSpace::new(parse_rows(gram)?, parse_rows(classes)?)
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn classes(&self) -> &[Vec<i64>] {
        &self.classes
    }

    pub fn dimension(&self) -> usize {
        self.gram.len()
    }

    pub fn b_plus(&self) -> usize {
        self.b_plus
    }

    pub fn b_minus(&self) -> usize {
        self.b_minus
    }

    pub fn pair(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0;
        for (i, row) in self.gram.iter().enumerate() {
            for (j, q) in row.iter().enumerate() {
                s += a[i] * q * b[j];
            }
        }
        s
    }

    pub fn square(&self, a: &[i64]) -> i64 {
        self.pair(a, a)
    }

    /// Even forms have only even self-intersections.
    pub fn is_even(&self) -> bool {
        (0..self.dimension()).all(|i| self.gram[i][i] % 2 == 0)
    }

    pub fn with_classes(&self, classes: Vec<Vec<i64>>) -> Result<Self, AlphaError> {
        QuadraticFormSpace::new(self.gram.clone(), classes)
    }

    /// Nonzero classes only; the zero class never contributes.
    pub fn nonzero_classes(&self) -> impl Iterator<Item = &Vec<i64>> {
        self.classes.iter().filter(|a| a.iter().any(|&x| x != 0))
    }

    /// Exact congruence diagonalization of the Gram matrix.
    pub fn diagonalization(&self) -> Diagonalization {
        diagonalize(&self.gram).expect("validated as nondegenerate")
    }

    pub fn gram_f64(&self) -> Vec<Vec<f64>> {
        self.gram
            .iter()
            .map(|r| r.iter().map(|&x| x as f64).collect())
            .collect()
    }
}

pub fn parse_rows(text: &str) -> Result<Vec<Vec<i64>>, AlphaError> {
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<i64>().map_err(|_| {
                    AlphaError::Format(format!("line {}: `{tok}` is not an integer", lineno + 1))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok(rows)
}

/// Standard unimodular form with the given signature and parity:
/// `diag(1,...,1,-1,...,-1)` when odd, sums of `∓E8` and hyperbolic planes when even.
pub fn standard_form(
    b_plus: usize,
    b_minus: usize,
    even: bool,
) -> Result<Vec<Vec<i64>>, AlphaError> {
    let n = b_plus + b_minus;
    let mut g = vec![vec![0; n]; n];
    if !even {
        for (i, row) in g.iter_mut().enumerate() {
            row[i] = if i < b_plus { 1 } else { -1 };
        }
        return Ok(g);
    }
    let tau = b_plus as i64 - b_minus as i64;
    if tau % 8 != 0 {
        return Err(AlphaError::Format(format!(
            "no even unimodular form has signature {tau}"
        )));
    }
    let e8_count = (tau.unsigned_abs() / 8) as usize;
    let hyperbolic = b_plus.min(b_minus);
    let sign = if tau < 0 { -1 } else { 1 };
    let mut at = 0;
    for _ in 0..e8_count {
        for i in 0..8 {
            for j in 0..8 {
                g[at + i][at + j] = sign * E8[i][j];
            }
        }
        at += 8;
    }
    for _ in 0..hyperbolic {
        g[at][at + 1] = 1;
        g[at + 1][at] = 1;
        at += 2;
    }
    debug_assert_eq!(at, n);
    Ok(g)
}

/// Writes `n` as a sum of `slots` triangular numbers `j(j+1)/2`.
fn triangular_parts(n: i64, slots: usize) -> Option<Vec<i64>> {
    if slots == 0 {
        return (n == 0).then(Vec::new);
    }
    let mut j = 0;
    while j * (j + 1) / 2 <= n {
        if let Some(mut rest) = triangular_parts(n - j * (j + 1) / 2, slots - 1) {
            rest.push(j);
            return Some(rest);
        }
        j += 1;
    }
    None
}

/// Builds the intersection form of `X # k CP2~` for a complex expression with
/// minimal model atom `X`, together with the classes `±c1(X) ± E_1 ± ... ± E_k`.
///
/// These are a subset of the monopole classes, so the resulting inf-max value
/// is a lower bound for alpha squared. At most three blow-ups are accepted.
pub fn complex_expression_space(m: &Manifold) -> Result<QuadraticFormSpace, AlphaError> {
    let unsupported = |why: &str| AlphaError::Unsupported(format!("{m}: {why}"));
    let (rest, k) = m.split_blowups();
    let atom = rest
        .as_atom()
        .filter(|a| !a.is_reversed())
        .ok_or_else(|| unsupported("not a blown-up complex atom"))?;
    if k > 3 {
        return Err(unsupported("more than three blow-ups"));
    }
    let base: InvariantRecord =
        atom_invariants(atom).map_err(|e| AlphaError::Unsupported(e.to_string()))?;
    let c = base
        .complex
        .as_ref()
        .filter(|c| c.minimal)
        .ok_or_else(|| unsupported("base atom is not a minimal complex surface"))?;
    let (bp, bm) = (base.b_plus as usize, base.b_minus as usize);
    let even = match base.spin {
        Tri::Yes => true,
        Tri::No => false,
        Tri::Unknown => return Err(unsupported("parity of the base atom is unknown")),
    };

    let gram_x = standard_form(bp, bm, even)?;
    let c1: Vec<i64> = if even {
        // c1 = 2x with x = (c1^2/8) e + f in the last hyperbolic plane.
        if c.c1sq % 8 != 0 || bp.min(bm) == 0 {
            return Err(unsupported("cannot place c1 in the even form"));
        }
        let mut v = vec![0; bp + bm];
        if c.c1sq != 0 {
            let n = v.len();
            v[n - 2] = 2 * (c.c1sq / 8);
            v[n - 1] = 2;
        }
        v
    } else {
        // Characteristic vector: every coordinate odd, square c1^2.
        let excess = c.c1sq - base.tau;
        if excess % 8 != 0 {
            return Err(unsupported("c1^2 is not congruent to the signature mod 8"));
        }
        let slots = if excess >= 0 { 0..bp } else { bp..bp + bm };
        let parts = triangular_parts(excess.abs() / 8, slots.len())
            .ok_or_else(|| unsupported("no characteristic vector of the required square"))?;
        let mut v = vec![1; bp + bm];
        for (slot, j) in slots.zip(parts) {
            v[slot] = 2 * j + 1;
        }
        v
    };

    let n = bp + bm + k as usize;
    let mut gram = vec![vec![0; n]; n];
    for i in 0..bp + bm {
        gram[i][..bp + bm].copy_from_slice(&gram_x[i]);
    }
    for (i, row) in gram.iter_mut().enumerate().skip(bp + bm) {
        row[i] = -1;
    }
    let mut classes = Vec::new();
    if c1.iter().any(|&x| x != 0) || k > 0 {
        for mask in 0..(1u32 << (k + 1)) {
            let mut a = vec![0; n];
            let s0 = if mask & 1 == 0 { 1 } else { -1 };
            for (i, &x) in c1.iter().enumerate() {
                a[i] = s0 * x;
            }
            for e in 0..k as usize {
                a[bp + bm + e] = if mask & (2 << e) == 0 { 1 } else { -1 };
            }
            classes.push(a);
        }
    }
    QuadraticFormSpace::new(gram, classes)
}

pub(crate) fn big_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
