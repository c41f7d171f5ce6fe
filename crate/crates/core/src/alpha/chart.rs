//! A global chart on the Grassmannian of maximal positive subspaces.
//!
//! Fix a basis `P` (n x p) of a positive subspace and `N` (n x q) of its
//! `Q`-complement, normalized so that `P^T Q P = I`, `N^T Q N = -I` and
//! `P^T Q N = 0`. For any `K` in `R^{q x p}` the columns of
//!
//! ```text
//! B(K) = P S + N K,    S = (I + K^T K)^{1/2}
//! ```
//!
//! are `Q`-orthonormal, and every maximal positive subspace arises from
//! exactly one `K`. In this basis the squared norm of the `Q`-orthogonal
//! projection of a class `a` is `|S u + K^T v|^2` with `u = P^T Q a` and
//! `v = N^T Q a`.

use super::form::QuadraticFormSpace;
use crate::linalg::{dot, leading_minors, sqrt_psd, symmetric_eigen, Mat};
use crate::scalar::Real;

/// Reference frame `(P, N)` adapted to the form.
#[derive(Clone, Debug)]
pub struct Frame<T> {
    gram: Mat<T>,
    pos: Mat<T>,
    neg: Mat<T>,
}

impl<T: Real> Frame<T> {
    /// Frame from the eigen-decomposition of the Gram matrix.
    pub fn from_eigen(space: &QuadraticFormSpace) -> Self {
        let n = space.dimension();
        let gram = Mat::from_fn(n, n, |i, j| T::from_int(space.gram()[i][j]));
        let (vals, vecs) = symmetric_eigen(&gram);
        let q = vals.iter().filter(|&&l| l < T::zero()).count();
        let p = n - q;
        // ascending order: negative eigenvalues first
        let neg = Mat::from_fn(n, q, |i, j| vecs[(i, j)] / vals[j].abs().sqrt());
        let pos = Mat::from_fn(n, p, |i, j| vecs[(i, q + j)] / vals[q + j].sqrt());
        Frame { gram, pos, neg }
    }

    pub fn from_parts(gram: Mat<T>, pos: Mat<T>, neg: Mat<T>) -> Self {
        Frame { gram, pos, neg }
    }

    pub fn dimension(&self) -> usize {
        self.gram.rows()
    }

    pub fn b_plus(&self) -> usize {
        self.pos.cols()
    }

    pub fn b_minus(&self) -> usize {
        self.neg.cols()
    }

    pub fn gram(&self) -> &Mat<T> {
        &self.gram
    }

    pub fn pos(&self) -> &Mat<T> {
        &self.pos
    }

    pub fn neg(&self) -> &Mat<T> {
        &self.neg
    }

    /// Coordinates `(u, v) = (P^T Q a, N^T Q a)` of a class.
    pub fn reduce(&self, a: &[T]) -> ReducedClass<T> {
        let qa = self.gram.mul_vec(a);
        ReducedClass {
            u: self.pos.tr_mul_vec(&qa),
            v: self.neg.tr_mul_vec(&qa),
        }
    }

    pub fn reduce_int(&self, a: &[i64]) -> ReducedClass<T> {
        let a: Vec<T> = a.iter().map(|&x| T::from_int(x)).collect();
        self.reduce(&a)
    }

    pub fn pair(&self, a: &[T], b: &[T]) -> T {
        dot(a, &self.gram.mul_vec(b))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReducedClass<T> {
    pub u: Vec<T>,
    pub v: Vec<T>,
}

/// The square root `S = (I + K^T K)^{1/2}` with its eigen-decomposition.
struct Root<T> {
    s: Mat<T>,
    sigma: Vec<T>,
    w: Mat<T>,
}

fn root<T: Real>(k: &Mat<T>) -> Root<T> {
    let p = k.cols();
    let mut m = k.transpose().mul(k);
    for i in 0..p {
        m[(i, i)] = m[(i, i)] + T::one();
    }
    let (s, sigma, w) = sqrt_psd(&m);
    Root { s, sigma, w }
}

/// Evaluates the squared projections `(a^+)^2` of every class at chart point
/// `k`, optionally with gradients with respect to `k`.
///
/// The gradient of `|y|^2`, `y = S u + K^T v`, is `4 K Z + 2 v y^T` where `Z`
/// solves the Sylvester equation `S Z + Z S = (y u^T + u y^T) / 2`.
pub fn evaluate<T: Real>(
    k: &Mat<T>,
    classes: &[ReducedClass<T>],
    mut grads: Option<&mut Vec<Mat<T>>>,
) -> Vec<T> {
    let (q, p) = (k.rows(), k.cols());
    let r = root(k);
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    let mut values = Vec::with_capacity(classes.len());
    if let Some(g) = grads.as_deref_mut() {
        g.clear();
    }
    for c in classes {
        let mut y = r.s.mul_vec(&c.u);
        let ktv = k.tr_mul_vec(&c.v);
        for (yi, t) in y.iter_mut().zip(&ktv) {
            *yi = *yi + *t;
        }
        values.push(dot(&y, &y));
        if let Some(g) = grads.as_deref_mut() {
            // C in the eigenbasis of S, divided by sigma_i + sigma_j
            let wy = r.w.tr_mul_vec(&y);
            let wu = r.w.tr_mul_vec(&c.u);
            let zt = Mat::from_fn(p, p, |i, j| {
                (wy[i] * wu[j] + wu[i] * wy[j]) / (two * (r.sigma[i] + r.sigma[j]))
            });
            let z = r.w.mul(&zt).mul(&r.w.transpose());
            let kz = k.mul(&z);
            g.push(Mat::from_fn(q, p, |i, j| {
                four * kz[(i, j)] + two * c.v[i] * y[j]
            }));
        }
    }
    values
}

/// A maximal positive subspace, given by its chart coordinates and a
/// `Q`-orthonormal basis.
#[derive(Clone, Debug)]
pub struct GrassmannPoint<T> {
    chart: Mat<T>,
    basis: Mat<T>,
}

impl<T: Real> GrassmannPoint<T> {
    pub fn new(frame: &Frame<T>, chart: Mat<T>) -> Self {
        assert_eq!(chart.rows(), frame.b_minus());
        assert_eq!(chart.cols(), frame.b_plus());
        let r = root(&chart);
        let ps = frame.pos().mul(&r.s);
        let nk = frame.neg().mul(&chart);
        let basis = Mat::from_fn(ps.rows(), ps.cols(), |i, j| ps[(i, j)] + nk[(i, j)]);
        GrassmannPoint { chart, basis }
    }

    /// The reference subspace spanned by `P`.
    pub fn reference(frame: &Frame<T>) -> Self {
        GrassmannPoint::new(frame, Mat::zeros(frame.b_minus(), frame.b_plus()))
    }

    pub fn chart(&self) -> &Mat<T> {
        &self.chart
    }

    /// Basis of the subspace as columns in the original coordinates.
    pub fn basis(&self) -> &Mat<T> {
        &self.basis
    }

    /// `B^T Q B`, the form restricted to the subspace (identity up to rounding).
    pub fn restricted_gram(&self, frame: &Frame<T>) -> Mat<T> {
        self.basis.transpose().mul(&frame.gram().mul(&self.basis))
    }

    /// Checks positivity of `Q` on the subspace via leading principal minors.
    pub fn is_positive_definite(&self, frame: &Frame<T>) -> bool {
        leading_minors(&self.restricted_gram(frame))
            .iter()
            .all(|&m| m > T::zero())
    }

    /// Splits `Q(a, a)` into `((a^+)^2, (a^-)^2)` by explicit projection.
    pub fn split(&self, frame: &Frame<T>, a: &[T]) -> (T, T) {
        let qa = frame.gram().mul_vec(a);
        let coeff = self.basis.tr_mul_vec(&qa);
        let plus = self.basis.mul_vec(&coeff);
        let minus: Vec<T> = a.iter().zip(&plus).map(|(&x, &y)| x - y).collect();
        (frame.pair(&plus, &plus), frame.pair(&minus, &minus))
    }
}
