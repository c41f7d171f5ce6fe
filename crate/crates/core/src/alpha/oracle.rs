//! Brute-force reference for the inf-max, independent of the optimizer.
//!
//! Uses its own frame (exact rational diagonalization), its own chart
//! `B = P R + N K` with `R` the Cholesky factor of `I + K^T K`, and computes
//! projections by solving the normal equations instead of using a closed form.
//! The chart is searched by a dense grid followed by rotated local grids with
//! shrinking spacing.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::form::{big_to_f64, QuadraticFormSpace};
use super::AlphaError;
use crate::linalg::{orthonormalize_columns, solve, Mat};

/// Largest `b+ + b-` accepted.
pub const MAX_DIMENSION: usize = 6;
const MAX_RADIUS: f64 = 256.0;
const PATIENCE: usize = 6;

#[derive(Clone, Debug, PartialEq)]
pub struct OracleResult {
    pub value: f64,
    /// False when the minimum kept dropping as the search box grew, up to the
    /// largest box, so the infimum is approached only at infinity.
    pub attained: bool,
    /// Half-width of the final search box.
    pub radius: f64,
    pub evaluations: usize,
}

struct Oracle {
    gram: Mat<f64>,
    pos: Mat<f64>,
    neg: Mat<f64>,
    classes: Vec<Vec<f64>>,
    evaluations: usize,
}

impl Oracle {
    fn new(space: &QuadraticFormSpace) -> Self {
        let d = space.diagonalization();
        let n = space.dimension();
        let column = |k: usize| -> Vec<f64> {
            let scale = big_to_f64(&d.diagonal[k]).abs().sqrt();
            d.basis[k].iter().map(|x| big_to_f64(x) / scale).collect()
        };
        let positive: Vec<usize> = (0..n)
            .filter(|&k| big_to_f64(&d.diagonal[k]) > 0.0)
            .collect();
        let negative: Vec<usize> = (0..n)
            .filter(|&k| big_to_f64(&d.diagonal[k]) < 0.0)
            .collect();
        let build = |idx: &[usize]| {
            let cols: Vec<Vec<f64>> = idx.iter().map(|&k| column(k)).collect();
            Mat::from_fn(n, idx.len(), |i, j| cols[j][i])
        };
        Oracle {
            gram: Mat::from_fn(n, n, |i, j| space.gram()[i][j] as f64),
            pos: build(&positive),
            neg: build(&negative),
            classes: space
                .nonzero_classes()
                .map(|a| a.iter().map(|&x| x as f64).collect())
                .collect(),
            evaluations: 0,
        }
    }

    fn dims(&self) -> (usize, usize) {
        (self.neg.cols(), self.pos.cols())
    }

    /// `(a^+)^2` for every class at chart point `x`.
    fn class_values(&mut self, x: &[f64]) -> Vec<f64> {
        self.evaluations += 1;
        let (q, p) = self.dims();
        let k = Mat::from_fn(q, p, |i, j| x[i * p + j]);
        let mut m = k.transpose().mul(&k);
        for i in 0..p {
            m[(i, i)] += 1.0;
        }
        let r = cholesky_upper(&m);
        let pr = self.pos.mul(&r);
        let nk = self.neg.mul(&k);
        let b = Mat::from_fn(pr.rows(), p, |i, j| pr[(i, j)] + nk[(i, j)]);
        let qb = self.gram.mul(&b);
        let g = b.transpose().mul(&qb);
        self.classes
            .iter()
            .map(|a| {
                let rhs = qb.tr_mul_vec(a);
                let c = solve(&g, &rhs).expect("restricted form is positive definite");
                c.iter().zip(&rhs).map(|(x, y)| x * y).sum()
            })
            .collect()
    }

    fn objective(&mut self, x: &[f64]) -> f64 {
        hard_max(&self.class_values(x))
    }
}

fn hard_max(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |a, &b| a.max(b))
}

/// `t log sum exp(v / t)`, an upper bound for the maximum within `t log n`.
fn soft_max(v: &[f64], t: f64) -> f64 {
    let m = hard_max(v);
    m + t * v.iter().map(|&x| ((x - m) / t).exp()).sum::<f64>().ln()
}

/// Upper triangular `R` with `R^T R = m`.
fn cholesky_upper(m: &Mat<f64>) -> Mat<f64> {
    let n = m.rows();
    let mut r = Mat::zeros(n, n);
    for j in 0..n {
        for i in 0..=j {
            let s: f64 = (0..i).map(|k| r[(k, i)] * r[(k, j)]).sum();
            if i == j {
                r[(i, i)] = (m[(i, i)] - s).max(0.0).sqrt();
            } else {
                r[(i, j)] = (m[(i, j)] - s) / r[(i, i)];
            }
        }
    }
    r
}

/// Calls `visit` with every point of the grid `centre + h * R * g`, where `g`
/// runs over `{-(m-1)/2, ..., (m-1)/2}^dim`.
fn for_grid(
    centre: &[f64],
    rotation: Option<&Mat<f64>>,
    h: f64,
    per_axis: usize,
    mut visit: impl FnMut(&[f64]),
) {
    let dim = centre.len();
    let half = (per_axis as i64 - 1) / 2;
    let mut idx = vec![-half; dim];
    let mut point = vec![0.0; dim];
    loop {
        for i in 0..dim {
            point[i] = centre[i]
                + h * match rotation {
                    Some(rot) => (0..dim).map(|k| rot[(i, k)] * idx[k] as f64).sum::<f64>(),
                    None => idx[i] as f64,
                };
        }
        visit(&point);
        let mut axis = 0;
        loop {
            if axis == dim {
                return;
            }
            idx[axis] += 1;
            if idx[axis] <= half {
                break;
            }
            idx[axis] = -half;
            axis += 1;
        }
    }
}

/// Brute-force `inf_H max_a (a^+)^2` for forms with `b+ + b- <= 6`.
///
/// `grid_density` points per axis are used for the global grid (rounded up to
/// an odd number so that the origin is sampled).
pub fn alpha_brute_oracle(
    space: &QuadraticFormSpace,
    grid_density: usize,
) -> Result<OracleResult, AlphaError> {
    if space.dimension() > MAX_DIMENSION {
        return Err(AlphaError::Scale(format!(
            "dimension {} exceeds the brute-force cap {MAX_DIMENSION}",
            space.dimension()
        )));
    }
    if space.b_plus() == 0 {
        return Err(AlphaError::Unsupported(
            "the form has no positive part".into(),
        ));
    }
    let mut oracle = Oracle::new(space);
    if oracle.classes.is_empty() {
        return Ok(OracleResult {
            value: 0.0,
            attained: true,
            radius: 0.0,
            evaluations: 0,
        });
    }
    let (q, p) = oracle.dims();
    let dim = q * p;
    if dim == 0 {
        let value = oracle.objective(&[]);
        return Ok(OracleResult {
            value,
            attained: true,
            radius: 0.0,
            evaluations: oracle.evaluations,
        });
    }
    let per_axis = (grid_density.max(3)) | 1;
    let mut rng = ChaCha8Rng::seed_from_u64(0);

    // The infimum counts as attained once the minimum over the box stops
    // changing when the box is doubled.
    let mut radius = 1.0;
    let mut previous: Option<f64> = None;
    loop {
        let (value, _) = search_box(&mut oracle, &mut rng, dim, radius, per_axis);
        if let Some(prev) = previous {
            if prev - value <= 1e-6 * (1.0 + value.abs()) {
                return Ok(OracleResult {
                    value,
                    attained: true,
                    radius,
                    evaluations: oracle.evaluations,
                });
            }
        }
        if radius >= MAX_RADIUS {
            return Ok(OracleResult {
                value,
                attained: false,
                radius,
                evaluations: oracle.evaluations,
            });
        }
        previous = Some(value);
        radius *= 2.0;
    }
}

/// Minimum over the box `[-radius, radius]^dim`.
///
/// A global grid locates the basin. Local grids in random orthonormal frames
/// then descend on a softened maximum whose temperature drops stage by stage,
/// since direct search stalls at the kinks of the hard maximum. The step
/// doubles on success and halves after several failed frames in a row. The
/// result is the smallest hard maximum seen at any evaluated point.
fn search_box(
    oracle: &mut Oracle,
    rng: &mut ChaCha8Rng,
    dim: usize,
    radius: f64,
    per_axis: usize,
) -> (f64, Vec<f64>) {
    let inside = |x: &[f64]| x.iter().all(|v| v.abs() <= radius);
    let spacing = 2.0 * radius / (per_axis - 1) as f64;
    let mut best = f64::INFINITY;
    let mut best_x = vec![0.0; dim];
    for_grid(&vec![0.0; dim], None, spacing, per_axis, |x| {
        let v = oracle.objective(x);
        if v < best {
            best = v;
            best_x.copy_from_slice(x);
        }
    });
    let local = if dim <= 4 { 5 } else { 3 };
    let budget = oracle.evaluations + 1_000_000;
    let scale = best.max(1.0);
    let mut centre = best_x.clone();
    let mut h = spacing;
    for exponent in [2, 4, 6, 9] {
        let t = scale * 10f64.powi(-exponent);
        let floor = if exponent == 9 { 1e-10 } else { 1e-5 } * (1.0 + radius);
        let mut current = soft_max(&oracle.class_values(&centre), t);
        let mut stalls = 0;
        while h >= floor && oracle.evaluations < budget {
            let mut rot = Mat::from_fn(dim, dim, |_, _| rng.gen_range(-1.0..1.0));
            orthonormalize_columns(&mut rot);
            let mut step_to = None;
            for_grid(&centre.clone(), Some(&rot), h, local, |x| {
                if !inside(x) {
                    return;
                }
                let v = oracle.class_values(x);
                let hard = hard_max(&v);
                if hard < best {
                    best = hard;
                    best_x.copy_from_slice(x);
                }
                let soft = soft_max(&v, t);
                if soft < current {
                    current = soft;
                    step_to = Some(x.to_vec());
                }
            });
            if let Some(x) = step_to {
                centre = x;
                stalls = 0;
                h = (2.0 * h).min(spacing);
            } else {
                stalls += 1;
                if stalls == PATIENCE {
                    stalls = 0;
                    h *= 0.5;
                }
            }
        }
        h = (h * 1e3).min(spacing);
    }
    (best, best_x)
}
