use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{hermite_normal_form, smith_normal_form, IntegerMatrix, LinalgError};

/// A sublattice of ℤ^ambient given by a basis, stored as matrix columns.
///
/// The basis is kept in canonical form (the transpose is in row Hermite normal
/// form), so two `LatticeBasis` values are equal exactly when they span the same
/// lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeBasis {
    ambient: usize,
    basis: IntegerMatrix,
}

impl LatticeBasis {
    /// Lattice spanned by the columns of `generators` (which need not be independent).
    pub fn spanned_by_columns(generators: &IntegerMatrix) -> Self {
        let hnf = hermite_normal_form(&generators.transpose());
        let rows: Vec<usize> = (0..hnf.rank).collect();
        LatticeBasis {
            ambient: generators.rows(),
            basis: hnf.h.select_rows(&rows).transpose(),
        }
    }

    pub fn spanned_by(ambient: usize, generators: &[Vec<BigInt>]) -> Result<Self, LinalgError> {
        let m = IntegerMatrix::from_columns(ambient, generators)?;
        Ok(Self::spanned_by_columns(&m))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    /// Basis vectors as the columns of an `ambient x rank` matrix.
    pub fn matrix(&self) -> &IntegerMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<BigInt>> {
        self.basis.to_columns()
    }

    /// Integer coordinates of `v` in this basis, or `None` when `v` is not in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        if v.len() != self.ambient {
            return None;
        }
        // The transposed basis is in echelon form: solve along pivot columns.
        let bt = self.basis.transpose();
        let mut rest = v.to_vec();
        let mut coords = Vec::with_capacity(self.rank());
        let mut col = 0;
        for i in 0..self.rank() {
            while bt[(i, col)].is_zero() {
                if !rest[col].is_zero() {
                    return None;
                }
                col += 1;
            }
            let pivot = &bt[(i, col)];
            if !(&rest[col] % pivot).is_zero() {
                return None;
            }
            let k = &rest[col] / pivot;
            for (c, r) in rest.iter_mut().enumerate().skip(col) {
                *r -= &k * &bt[(i, c)];
            }
            coords.push(k);
            col += 1;
        }
        rest.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_lattice(&self, other: &LatticeBasis) -> bool {
        other.basis_vectors().iter().all(|v| self.contains(v))
    }

    /// Index of this lattice in its saturation: the product of the invariant factors.
    pub fn index_in_saturation(&self) -> BigInt {
        smith_normal_form(&self.basis).invariant_factors().iter().product()
    }

    pub fn is_saturated(&self) -> bool {
        self.index_in_saturation() == BigInt::from(1)
    }
}

/// Saturation (span_ℚ ∩ ℤ^n) of the lattice spanned by the columns of `a`.
pub fn saturate_columns(a: &IntegerMatrix) -> LatticeBasis {
    let snf = smith_normal_form(a);
    let uinv = snf
        .u
        .unimodular_inverse()
        .expect("Smith transform is unimodular");
    let cols: Vec<usize> = (0..snf.rank).collect();
    LatticeBasis::spanned_by_columns(&uinv.select_columns(&cols))
}

/// Saturated basis of {x ∈ ℤ^cols : a x = 0}.
pub fn integer_kernel(a: &IntegerMatrix) -> LatticeBasis {
    let snf = smith_normal_form(a);
    let cols: Vec<usize> = (snf.rank..a.cols()).collect();
    LatticeBasis::spanned_by_columns(&snf.v.select_columns(&cols))
}

/// Solves `a x = b` over ℚ for a matrix of full column rank.
///
/// Returns `None` if there is no solution.
pub fn solve_full_column_rank(a: &IntegerMatrix, b: &[BigInt]) -> Option<Vec<BigRational>> {
    let m = a.rows();
    let n = a.cols();
    let mut rows: Vec<Vec<BigRational>> = (0..m)
        .map(|r| {
            let mut row: Vec<BigRational> = a
                .row(r)
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect();
            row.push(BigRational::from_integer(b[r].clone()));
            row
        })
        .collect();
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for c in 0..n {
        let p = (pivot_row..m).find(|&r| !rows[r][c].is_zero())?;
        rows.swap(p, pivot_row);
        let piv = rows[pivot_row][c].clone();
        for x in rows[pivot_row].iter_mut() {
            *x = &*x / &piv;
        }
        for r in 0..m {
            if r == pivot_row || rows[r][c].is_zero() {
                continue;
            }
            let f = rows[r][c].clone();
            let src = rows[pivot_row].clone();
            for (x, s) in rows[r].iter_mut().zip(src.iter()) {
                *x -= &f * s;
            }
        }
        pivots.push(pivot_row);
        pivot_row += 1;
    }
    if rows[pivot_row..].iter().any(|r| !r[n].is_zero()) {
        return None;
    }
    Some(pivots.iter().map(|&r| rows[r][n].clone()).collect())
}
