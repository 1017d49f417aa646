use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::IntegerMatrix;

/// `u * a * v == d` with `u`, `v` unimodular and `d` diagonal.
///
/// The nonzero diagonal entries are positive and form a divisibility chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntegerMatrix,
    pub d: IntegerMatrix,
    pub v: IntegerMatrix,
    pub rank: usize,
}

impl SmithDecomposition {
    /// The nonzero diagonal entries d_1 | d_2 | ... | d_rank.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }
}

/// Smith normal form.
///
/// The pivot at each stage is the nonzero entry of least absolute value in the
/// remaining block, ties broken by the lowest (row, column).
pub fn smith_normal_form(a: &IntegerMatrix) -> SmithDecomposition {
    let m = a.rows();
    let n = a.cols();
    let mut d = a.clone();
    let mut u = IntegerMatrix::identity(m);
    let mut v = IntegerMatrix::identity(n);
    let mut rank = 0;

    for t in 0..m.min(n) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for r in t..m {
                for c in t..n {
                    let x = &d[(r, c)];
                    if x.is_zero() {
                        continue;
                    }
                    match best {
                        Some((br, bc)) if d[(br, bc)].abs() <= x.abs() => {}
                        _ => best = Some((r, c)),
                    }
                }
            }
            let Some((pr, pc)) = best else {
                return finish(u, d, v, rank);
            };
            d.swap_rows(t, pr);
            u.swap_rows(t, pr);
            d.swap_cols(t, pc);
            v.swap_cols(t, pc);

            let mut clean = true;
            for r in t + 1..m {
                if d[(r, t)].is_zero() {
                    continue;
                }
                let q = -(&d[(r, t)] / &d[(t, t)]);
                d.add_row_multiple(r, t, &q);
                u.add_row_multiple(r, t, &q);
                if !d[(r, t)].is_zero() {
                    clean = false;
                }
            }
            for c in t + 1..n {
                if d[(t, c)].is_zero() {
                    continue;
                }
                let q = -(&d[(t, c)] / &d[(t, t)]);
                d.add_col_multiple(c, t, &q);
                v.add_col_multiple(c, t, &q);
                if !d[(t, c)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let pivot = d[(t, t)].clone();
            let offending = (t + 1..m).find(|&r| {
                (t + 1..n).any(|c| !d[(r, c)].is_multiple_of(&pivot))
            });
            match offending {
                Some(r) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, r, &one);
                    u.add_row_multiple(t, r, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        rank += 1;
    }
    finish(u, d, v, rank)
}

fn finish(u: IntegerMatrix, d: IntegerMatrix, v: IntegerMatrix, rank: usize) -> SmithDecomposition {
    SmithDecomposition { u, d, v, rank }
}

/// `u * a == h` with `h` in row Hermite normal form.
///
/// Nonzero rows come first, pivots are positive and strictly move right, and
/// entries above a pivot lie in `[0, pivot)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermiteDecomposition {
    pub h: IntegerMatrix,
    pub u: IntegerMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

pub fn hermite_normal_form(a: &IntegerMatrix) -> HermiteDecomposition {
    let m = a.rows();
    let n = a.cols();
    let mut h = a.clone();
    let mut u = IntegerMatrix::identity(m);
    let mut p = 0;
    let mut pivots = Vec::new();
    for c in 0..n {
        if p == m {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for r in p..m {
                if h[(r, c)].is_zero() {
                    continue;
                }
                match best {
                    Some(b) if h[(b, c)].abs() <= h[(r, c)].abs() => {}
                    _ => best = Some(r),
                }
            }
            let Some(b) = best else { break };
            h.swap_rows(p, b);
            u.swap_rows(p, b);
            let mut clean = true;
            for r in p + 1..m {
                if h[(r, c)].is_zero() {
                    continue;
                }
                let q = -(&h[(r, c)] / &h[(p, c)]);
                h.add_row_multiple(r, p, &q);
                u.add_row_multiple(r, p, &q);
                if !h[(r, c)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h[(p, c)].is_zero() {
            continue;
        }
        if h[(p, c)].is_negative() {
            h.negate_row(p);
            u.negate_row(p);
        }
        let pivot = h[(p, c)].clone();
        for r in 0..p {
            let q = -h[(r, c)].div_floor(&pivot);
            h.add_row_multiple(r, p, &q);
            u.add_row_multiple(r, p, &q);
        }
        pivots.push(c);
        p += 1;
    }
    HermiteDecomposition {
        h,
        u,
        rank: p,
        pivots,
    }
}

/// A finitely generated abelian group ℤ^r ⊕ ℤ/t_1 ⊕ ... ⊕ ℤ/t_s with t_1 | ... | t_s, t_1 > 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub free_rank: usize,
    #[serde(with = "crate::serde_big::vec")]
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        AbelianGroup {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn cyclic(n: BigInt) -> Self {
        AbelianGroup::from_invariants(0, [n])
    }

    /// Builds the group from arbitrary invariants, discarding units.
    pub fn from_invariants(free_rank: usize, invariants: impl IntoIterator<Item = BigInt>) -> Self {
        let mut torsion: Vec<BigInt> = invariants
            .into_iter()
            .map(|x| x.abs())
            .filter(|x| !x.is_one())
            .collect();
        let extra = torsion.iter().filter(|x| x.is_zero()).count();
        torsion.retain(|x| !x.is_zero());
        torsion.sort();
        AbelianGroup {
            free_rank: free_rank + extra,
            torsion,
        }
    }

    /// ℤ^rows / (column span of `a`).
    pub fn cokernel(a: &IntegerMatrix) -> Self {
        let snf = smith_normal_form(a);
        Self::from_invariants(a.rows() - snf.rank, snf.invariant_factors())
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Order of the torsion part; the group order when finite.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }

    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion_order())
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}
