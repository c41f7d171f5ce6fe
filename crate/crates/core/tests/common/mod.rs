#![allow(dead_code)]

pub mod strategies;

use fourfold::QuadraticFormSpace;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// A random unimodular form `U^T D U` of rank at most `max_rank`, where `D` is
/// diagonal `±1` or a sum of hyperbolic planes and `U` is a product of
/// elementary integer matrices.
pub fn random_form(rng: &mut ChaCha8Rng, max_rank: usize) -> Vec<Vec<i64>> {
    let n = rng.gen_range(2..=max_rank);
    let mut d = vec![vec![0i64; n]; n];
    if n % 2 == 0 && rng.gen_bool(0.3) {
        for k in (0..n).step_by(2) {
            d[k][k + 1] = 1;
            d[k + 1][k] = 1;
        }
    } else {
        let positives = rng.gen_range(1..n.min(4));
        for (i, row) in d.iter_mut().enumerate() {
            row[i] = if i < positives { 1 } else { -1 };
        }
    }
    let mut u: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| (i == j) as i64).collect())
        .collect();
    for _ in 0..rng.gen_range(0..=3) {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i != j {
            let f = if rng.gen_bool(0.5) { 1 } else { -1 };
            for row in u.iter_mut() {
                row[j] += f * row[i];
            }
        }
    }
    let mut g = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0;
            for k in 0..n {
                for l in 0..n {
                    s += u[k][i] * d[k][l] * u[l][j];
                }
            }
            g[i][j] = s;
        }
    }
    g
}

/// Random classes with entries in `[-2, 2]`, at least one of square `>= 1`.
pub fn random_space(
    rng: &mut ChaCha8Rng,
    max_rank: usize,
    max_classes: usize,
) -> QuadraticFormSpace {
    loop {
        let gram = random_form(rng, max_rank);
        let n = gram.len();
        let count = rng.gen_range(1..=max_classes);
        let classes: Vec<Vec<i64>> = (0..count)
            .map(|_| (0..n).map(|_| rng.gen_range(-2..=2)).collect())
            .collect();
        let space = QuadraticFormSpace::new(gram, classes).expect("unimodular by construction");
        if space.b_plus() >= 1 && space.classes().iter().any(|a| space.square(a) >= 1) {
            return space;
        }
    }
}
