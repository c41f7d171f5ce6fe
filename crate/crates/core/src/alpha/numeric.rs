//! Numerical inf-max over the positive Grassmannian.
//!
//! The objective `F(K) = max_a (a^+)^2` is a maximum of smooth functions on
//! the chart of [`super::chart`]. It is minimized from several starts by
//! L-BFGS on the smoothed maximum `t log sum exp(f_a / t)` with `t` shrinking
//! towards zero, followed by descent along the minimum-norm element of the
//! convex hull of the nearly active gradients.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::chart::{evaluate, Frame, GrassmannPoint, ReducedClass};
use super::form::QuadraticFormSpace;
use super::AlphaError;
use crate::linalg::Mat;
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct NumericOptions {
    /// Absolute tolerance on the objective.
    pub tolerance: f64,
    /// Iteration budget per start.
    pub max_iter: usize,
    pub seed: u64,
    pub starts: usize,
}

impl Default for NumericOptions {
    fn default() -> Self {
        NumericOptions {
            tolerance: 1e-6,
            max_iter: 4000,
            seed: 0,
            starts: 16,
        }
    }
}

#[derive(Clone, Debug)]
pub struct NumericResult<T> {
    pub value: T,
    pub witness: GrassmannPoint<T>,
    /// Total iterations over all starts.
    pub iterations: usize,
    /// False when the best start did not settle within the budget.
    pub converged: bool,
    /// False when the chart coordinates ran off towards infinity, which
    /// happens when the infimum is not attained.
    pub attained: bool,
}

const ATTAINED_RADIUS: f64 = 1e2;
const MEMORY: usize = 8;

struct Problem<'a, T> {
    rows: usize,
    cols: usize,
    classes: &'a [ReducedClass<T>],
}

impl<T: Real> Problem<'_, T> {
    fn dim(&self) -> usize {
        self.rows * self.cols
    }

    fn mat(&self, x: &[T]) -> Mat<T> {
        Mat::from_fn(self.rows, self.cols, |i, j| x[i * self.cols + j])
    }

    fn values(&self, x: &[T]) -> Vec<T> {
        evaluate(&self.mat(x), self.classes, None)
    }

    fn max(&self, x: &[T]) -> T {
        fold_max(&self.values(x))
    }

    fn values_grads(&self, x: &[T]) -> (Vec<T>, Vec<Vec<T>>) {
        let mut grads = Vec::new();
        let v = evaluate(&self.mat(x), self.classes, Some(&mut grads));
        (
            v,
            grads.into_iter().map(|g| g.as_slice().to_vec()).collect(),
        )
    }

    /// Smoothed maximum and its gradient at temperature `t`.
    fn smooth(&self, x: &[T], t: T) -> (T, Vec<T>) {
        let (v, g) = self.values_grads(x);
        let m = fold_max(&v);
        let w: Vec<T> = v.iter().map(|&f| ((f - m) / t).exp()).collect();
        let total = w.iter().fold(T::zero(), |a, &b| a + b);
        let mut grad = vec![T::zero(); self.dim()];
        for (wi, gi) in w.iter().zip(&g) {
            axpy(&mut grad, *wi / total, gi);
        }
        (m + t * total.ln(), grad)
    }
}

fn fold_max<T: Real>(v: &[T]) -> T {
    v.iter().fold(T::neg_infinity(), |a, &b| a.max(b))
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |s, (&x, &y)| s + x * y)
}

fn axpy<T: Real>(y: &mut [T], a: T, x: &[T]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi = *yi + a * xi;
    }
}

fn step<T: Real>(x: &[T], s: T, d: &[T]) -> Vec<T> {
    x.iter().zip(d).map(|(&xi, &di)| xi + s * di).collect()
}

/// L-BFGS with Armijo backtracking on the smoothed objective. Returns the
/// number of iterations used.
fn lbfgs<T: Real>(p: &Problem<T>, x: &mut Vec<T>, t: T, budget: usize, gtol: T) -> usize {
    let (mut f, mut g) = p.smooth(x, t);
    let mut mem: Vec<(Vec<T>, Vec<T>, T)> = Vec::new();
    let c1 = T::lit(1e-4);
    let half = T::lit(0.5);
    for it in 0..budget {
        if dot(&g, &g).sqrt() <= gtol {
            return it;
        }
        // two-loop recursion
        let mut d: Vec<T> = g.iter().map(|&v| -v).collect();
        let mut alphas = Vec::with_capacity(mem.len());
        for (s, y, rho) in mem.iter().rev() {
            let a = *rho * dot(s, &d);
            axpy(&mut d, -a, y);
            alphas.push(a);
        }
        if let Some((s, y, _)) = mem.last() {
            let gamma = dot(s, y) / dot(y, y);
            d.iter_mut().for_each(|v| *v = *v * gamma);
        }
        for ((s, y, rho), a) in mem.iter().zip(alphas.into_iter().rev()) {
            let b = *rho * dot(y, &d);
            axpy(&mut d, a - b, s);
        }
        let mut slope = dot(&g, &d);
        if slope >= T::zero() {
            mem.clear();
            d = g.iter().map(|&v| -v).collect();
            slope = -dot(&g, &g);
        }
        let mut s = T::one();
        let mut accepted = None;
        for _ in 0..60 {
            let xn = step(x, s, &d);
            let (fnew, gnew) = p.smooth(&xn, t);
            if fnew <= f + c1 * s * slope {
                accepted = Some((xn, fnew, gnew));
                break;
            }
            s = s * half;
        }
        let Some((xn, fnew, gnew)) = accepted else {
            return it + 1;
        };
        let sv: Vec<T> = xn.iter().zip(x.iter()).map(|(&a, &b)| a - b).collect();
        let yv: Vec<T> = gnew.iter().zip(&g).map(|(&a, &b)| a - b).collect();
        let sy = dot(&sv, &yv);
        if sy > T::epsilon() * dot(&yv, &yv) {
            if mem.len() == MEMORY {
                mem.remove(0);
            }
            mem.push((sv, yv, T::one() / sy));
        }
        let stalled = f - fnew <= T::epsilon() * f.abs();
        *x = xn;
        f = fnew;
        g = gnew;
        if stalled {
            return it + 1;
        }
    }
    budget
}

/// Minimum-norm point of the convex hull of `points` (Frank-Wolfe).
fn min_norm_hull<T: Real>(points: &[Vec<T>]) -> Vec<T> {
    let mut z = points[0].clone();
    for _ in 0..500 {
        let (j, _) = points
            .iter()
            .enumerate()
            .map(|(j, p)| (j, dot(p, &z)))
            .fold(
                (0, T::infinity()),
                |best, c| if c.1 < best.1 { c } else { best },
            );
        let diff: Vec<T> = z.iter().zip(&points[j]).map(|(&a, &b)| a - b).collect();
        let gap = dot(&z, &diff);
        let dd = dot(&diff, &diff);
        if gap <= T::epsilon() * dot(&z, &z) || dd == T::zero() {
            break;
        }
        let gamma = (gap / dd).min(T::one());
        axpy(&mut z, -gamma, &diff);
    }
    z
}

/// Descent on the hard maximum along the min-norm subgradient of the nearly
/// active classes. Returns (iterations, stationary).
fn polish<T: Real>(
    p: &Problem<T>,
    x: &mut Vec<T>,
    scale: T,
    budget: usize,
    tol: T,
) -> (usize, bool) {
    let mut delta = T::lit(1e-6) * scale;
    let floor = T::lit(1e3) * T::epsilon() * scale;
    let half = T::lit(0.5);
    for it in 0..budget {
        let (v, g) = p.values_grads(x);
        let f = fold_max(&v);
        let active: Vec<Vec<T>> = v
            .iter()
            .zip(g)
            .filter(|(&fi, _)| fi >= f - delta)
            .map(|(_, gi)| gi)
            .collect();
        let z = min_norm_hull(&active);
        let nz = dot(&z, &z);
        if nz.sqrt() <= tol {
            return (it, true);
        }
        let d: Vec<T> = z.iter().map(|&v| -v).collect();
        let mut s = T::one();
        let mut moved = false;
        for _ in 0..60 {
            let xn = step(x, s, &d);
            if p.max(&xn) <= f - T::lit(1e-4) * s * nz {
                *x = xn;
                moved = true;
                break;
            }
            s = s * half;
        }
        if !moved {
            if delta <= floor {
                return (it + 1, false);
            }
            delta = delta * T::lit(0.1);
        }
    }
    (budget, false)
}

struct StartResult<T> {
    value: T,
    x: Vec<T>,
    iterations: usize,
    converged: bool,
}

fn run_start<T: Real>(p: &Problem<T>, mut x: Vec<T>, opts: &NumericOptions) -> StartResult<T> {
    let f0 = p.max(&x);
    let scale = f0.abs().max(T::one());
    let tol = T::lit(opts.tolerance);
    let t_min = T::lit(1e-9).max(T::lit(10.0) * T::epsilon()) * scale;
    let mut t = T::lit(0.1) * scale;
    let mut stages = 1;
    while t > t_min {
        t = t * T::lit(0.1);
        stages += 1;
    }
    let per_stage = (opts.max_iter / (stages + 1)).max(1);
    let gtol = T::lit(1e-3) * tol;
    let mut iterations = 0;
    let mut t = T::lit(0.1) * scale;
    let mut previous = f0;
    let mut gap = T::infinity();
    for _ in 0..stages {
        iterations += lbfgs(p, &mut x, t, per_stage, gtol);
        let f = p.max(&x);
        gap = (previous - f).abs();
        previous = f;
        t = (t * T::lit(0.1)).max(t_min);
    }
    let (used, stationary) = polish(p, &mut x, scale, per_stage, gtol);
    iterations += used;
    let value = p.max(&x);
    let settled = gap <= tol && (previous - value).abs() <= tol;
    StartResult {
        value,
        x,
        iterations,
        converged: stationary || settled,
    }
}

/// Approximates `inf_H max_a (a^+)^2` over maximal positive subspaces `H`.
///
/// Deterministic for a given seed: start `i` draws from its own stream and
/// the best start is chosen by value, ties broken by index.
pub fn alpha_squared_numeric<T: Real>(
    space: &QuadraticFormSpace,
    opts: &NumericOptions,
) -> Result<NumericResult<T>, AlphaError> {
    if space.b_plus() == 0 {
        return Err(AlphaError::Unsupported(
            "the form has no positive part".into(),
        ));
    }
    let frame = Frame::<T>::from_eigen(space);
    let classes: Vec<ReducedClass<T>> = space
        .nonzero_classes()
        .map(|a| frame.reduce_int(a))
        .collect();
    let (q, p) = (frame.b_minus(), frame.b_plus());
    if classes.is_empty() {
        return Ok(NumericResult {
            value: T::zero(),
            witness: GrassmannPoint::reference(&frame),
            iterations: 0,
            converged: true,
            attained: true,
        });
    }
    let problem = Problem {
        rows: q,
        cols: p,
        classes: &classes,
    };
    let n = problem.dim();
    let starts = if n == 0 { 1 } else { opts.starts.max(1) };
    let results: Vec<StartResult<T>> = (0..starts)
        .into_par_iter()
        .map(|i| {
            let x0 = if i == 0 {
                vec![T::zero(); n]
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
                rng.set_stream(i as u64);
                (0..n).map(|_| T::lit(rng.gen_range(-2.0..2.0))).collect()
            };
            if n == 0 {
                StartResult {
                    value: problem.max(&x0),
                    x: x0,
                    iterations: 0,
                    converged: true,
                }
            } else {
                run_start(&problem, x0, opts)
            }
        })
        .collect();
    let iterations = results.iter().map(|r| r.iterations).sum();
    let best = results
        .into_iter()
        .reduce(|a, b| if b.value < a.value { b } else { a })
        .expect("at least one start");
    let attained = best.x.iter().all(|v| v.abs() < T::lit(ATTAINED_RADIUS));
    Ok(NumericResult {
        value: best.value,
        witness: GrassmannPoint::new(&frame, problem.mat(&best.x)),
        iterations,
        converged: best.converged,
        attained,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(gram: Vec<Vec<i64>>, classes: Vec<Vec<i64>>) -> QuadraticFormSpace {
        QuadraticFormSpace::new(gram, classes).unwrap()
    }

    fn diag(d: &[i64]) -> Vec<Vec<i64>> {
        (0..d.len())
            .map(|i| {
                (0..d.len())
                    .map(|j| if i == j { d[i] } else { 0 })
                    .collect()
            })
            .collect()
    }

    fn run(s: &QuadraticFormSpace) -> NumericResult<f64> {
        alpha_squared_numeric(s, &NumericOptions::default()).unwrap()
    }

    #[test]
    fn single_positive_class() {
        let s = space(diag(&[1, 1, -1]), vec![vec![1, 1, 1]]);
        assert_eq!(s.square(&s.classes()[0]), 1);
        let r = run(&s);
        assert!((r.value - 1.0).abs() < 1e-6, "{}", r.value);
        assert!(r.attained);
        let s = space(diag(&[1, 1, -1, -1]), vec![vec![2, 1, 1, 1]]);
        assert!((run(&s).value - 3.0).abs() < 1e-6);
    }

    #[test]
    fn sign_of_class_is_irrelevant() {
        let a = vec![1, 2, 1];
        let neg: Vec<i64> = a.iter().map(|x| -x).collect();
        let s1 = space(diag(&[1, 1, -1]), vec![a.clone()]);
        let s2 = space(diag(&[1, 1, -1]), vec![a, neg]);
        assert!((run(&s1).value - run(&s2).value).abs() < 1e-6);
    }

    #[test]
    fn orthogonal_positive_classes() {
        let s = space(diag(&[1, 1, -1]), vec![vec![1, 0, 0], vec![0, 2, 0]]);
        assert!((run(&s).value - 4.0).abs() < 1e-6);
    }

    #[test]
    fn deterministic_for_seed() {
        let s = space(
            diag(&[1, 1, -1, -1]),
            vec![vec![1, 0, 1, 0], vec![0, 1, 1, 1], vec![1, 1, 0, 2]],
        );
        let opts = NumericOptions {
            seed: 5,
            ..NumericOptions::default()
        };
        let a: NumericResult<f64> = alpha_squared_numeric(&s, &opts).unwrap();
        let b: NumericResult<f64> = alpha_squared_numeric(&s, &opts).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.iterations, b.iterations);
    }

    #[test]
    fn negative_definite_chart_is_a_point() {
        let s = space(diag(&[1, 1]), vec![vec![1, 2]]);
        assert!((run(&s).value - 5.0).abs() < 1e-12);
    }

    #[test]
    fn empty_class_set() {
        let s = space(diag(&[1, -1]), vec![vec![0, 0]]);
        assert_eq!(run(&s).value, 0.0);
    }

    #[test]
    fn null_class_is_not_attained() {
        let s = space(diag(&[1, -1]), vec![vec![1, 1]]);
        let r = run(&s);
        assert!(r.value < 1e-3, "{}", r.value);
        assert!(!r.attained);
    }

    #[test]
    fn single_precision() {
        let s = space(diag(&[1, 1, -1]), vec![vec![1, 1, 1]]);
        let r: NumericResult<f32> = alpha_squared_numeric(&s, &NumericOptions::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-4);
    }
}
