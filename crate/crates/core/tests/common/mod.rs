#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;

use orbicoh::charpair::CharacteristicPair;
use orbicoh::fan::Fan;
use orbicoh::linalg::IntegerMatrix;
use orbicoh::polytope::{PolytopeSpec, SimplePolytope};
use orbicoh::towers::Tower;

pub fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn rays(v: &[&[i64]]) -> Vec<Vec<BigInt>> {
    v.iter().map(|r| big(r)).collect()
}

/// Triangular prism with five facets and the pair whose vertex orders are 1,1,1,3,3,3.
pub fn prism_pair() -> CharacteristicPair {
    let p = SimplePolytope::from_spec(&PolytopeSpec {
        dim: 3,
        facets: 5,
        vertices: vec![
            vec![1, 2, 3],
            vec![1, 2, 4],
            vec![1, 3, 4],
            vec![2, 3, 5],
            vec![2, 4, 5],
            vec![3, 4, 5],
        ],
    })
    .unwrap();
    CharacteristicPair::checked(
        Arc::new(p),
        rays(&[&[2, 3, 5], &[2, -1, 0], &[-1, -1, -2], &[-1, 2, 2], &[0, 0, 1]]),
    )
    .unwrap()
}

/// Weighted projective 4-space with weights (1,1,2,2,2).
pub fn cp4_pair() -> CharacteristicPair {
    CharacteristicPair::checked(
        Arc::new(SimplePolytope::simplex(4)),
        rays(&[
            &[-1, -2, -2, -2],
            &[1, 0, 0, 0],
            &[0, 1, 0, 0],
            &[0, 0, 1, 0],
            &[0, 0, 0, 1],
        ]),
    )
    .unwrap()
}

pub fn all_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

pub fn plane_235() -> Fan {
    Fan::new(2, rays(&[&[1, 0], &[1, 5], &[-1, -3]]), all_subsets(3, 2)).unwrap()
}

pub fn space_3126() -> Fan {
    Fan::new(
        3,
        rays(&[&[1, 0, 0], &[1, 2, 0], &[1, 2, 3], &[-1, -1, -1]]),
        all_subsets(4, 3),
    )
    .unwrap()
}

pub fn smooth_plane() -> Fan {
    Fan::new(2, rays(&[&[1, 0], &[0, 1], &[-1, -1]]), all_subsets(3, 2)).unwrap()
}

pub fn square_pair(cols: Vec<Vec<BigInt>>) -> CharacteristicPair {
    let seg = SimplePolytope::simplex(1);
    CharacteristicPair::checked(Arc::new(seg.product(&seg).unwrap()), cols).unwrap()
}

fn gcd_all(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

pub fn random_weights<R: Rng>(rng: &mut R, len: usize, max: i64) -> Vec<BigInt> {
    loop {
        let w: Vec<BigInt> = (0..len).map(|_| BigInt::from(rng.gen_range(1..=max))).collect();
        if gcd_all(&w).is_one() {
            return w;
        }
    }
}

/// Random tower with the given number of stages, simplex dimensions in 1..=max_dim
/// and entries bounded by `max` in absolute value.
pub fn random_tower<R: Rng>(rng: &mut R, stages: usize, max_dim: usize, max: i64) -> Tower {
    let weights: Vec<Vec<BigInt>> = (0..stages)
        .map(|_| {
            let n = rng.gen_range(1..=max_dim);
            random_weights(rng, n + 1, max)
        })
        .collect();
    let mut twists = BTreeMap::new();
    for i in 2..=stages {
        for j in 1..i {
            let len = weights[i - 1].len();
            twists.insert((i, j), (0..len).map(|_| BigInt::from(rng.gen_range(-max..=max))).collect());
        }
    }
    Tower::new(weights, twists).unwrap()
}

/// Rows of `a` times `b`, computed entry by entry.
pub fn naive_product(a: &IntegerMatrix, b: &IntegerMatrix) -> Vec<Vec<BigInt>> {
    (0..a.rows())
        .map(|i| {
            (0..b.cols())
                .map(|j| (0..a.cols()).map(|k| &a[(i, k)] * &b[(k, j)]).sum())
                .collect()
        })
        .collect()
}

/// Determinant by cofactor expansion.
pub fn naive_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut total = BigInt::zero();
    for c in 0..n {
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = &m[0][c] * naive_det(&minor);
        if c % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}
