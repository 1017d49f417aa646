//! Simplicial fans, their dictionary with characteristic pairs, and the
//! per-cone substitutions that turn polynomials on the fan into piecewise
//! polynomials.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::charpair::{CharPairError, CharacteristicPair};
use crate::linalg::{is_primitive, lcm_of_denominators, IntegerMatrix, LinalgError, RationalMatrix};
use crate::poly::{IntPolynomial, RatPolynomial};
use crate::polytope::{PolytopeError, SimplePolytope};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FanError {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("ray {ray} has length {found}, expected {expected}")]
    RayLength {
        ray: usize,
        expected: usize,
        found: usize,
    },
    #[error("ray {0} is not primitive")]
    NotPrimitive(usize),
    #[error("rays {0} and {1} coincide")]
    DuplicateRay(usize, usize),
    #[error("cone {cone} has {found} rays, expected {expected}")]
    ConeSize {
        cone: usize,
        expected: usize,
        found: usize,
    },
    #[error("cone {cone} refers to ray {ray}, but there are only {rays} rays")]
    RayOutOfRange { cone: usize, ray: usize, rays: usize },
    #[error("cone {0} appears twice")]
    DuplicateCone(usize),
    #[error("rays of cone {0} are linearly dependent")]
    SingularCone(usize),
    #[error("ray {0} is in no cone")]
    UnusedRay(usize),
    #[error("fan is not complete: {0}")]
    NotComplete(PolytopeError),
    #[error("polynomial has {found} variables, expected one per ray ({expected})")]
    VariableCount { expected: usize, found: usize },
    #[error("pieces do not glue: coefficient of {0:?} differs between cones")]
    InconsistentPieces(Vec<u32>),
    #[error("piece count {found} does not match the cone count {expected}")]
    PieceCount { expected: usize, found: usize },
    #[error(transparent)]
    CharPair(#[from] CharPairError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A simplicial fan in ℝ^n with nonsingular maximal cones.
///
/// Maximal cones are stored as sorted 0-based ray index lists, in sorted order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    dim: usize,
    rays: Vec<Vec<BigInt>>,
    cones: Vec<Vec<usize>>,
}

/// JSON form: 1-based ray indices in `max_cones`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanSpec {
    pub dim: usize,
    #[serde(with = "crate::serde_big::vec2")]
    pub rays: Vec<Vec<BigInt>>,
    pub max_cones: Vec<Vec<usize>>,
}

impl Fan {
    /// Validates rays and cones: rays primitive and distinct, cones of n
    /// independent rays, every ray used. Completeness is checked separately.
    pub fn new(dim: usize, rays: Vec<Vec<BigInt>>, cones: Vec<Vec<usize>>) -> Result<Self, FanError> {
        if dim == 0 {
            return Err(FanError::ZeroDimension);
        }
        for (i, r) in rays.iter().enumerate() {
            if r.len() != dim {
                return Err(FanError::RayLength {
                    ray: i,
                    expected: dim,
                    found: r.len(),
                });
            }
            if !is_primitive(r) {
                return Err(FanError::NotPrimitive(i));
            }
            if let Some(j) = rays[..i].iter().position(|s| s == r) {
                return Err(FanError::DuplicateRay(j, i));
            }
        }
        let mut sorted = Vec::with_capacity(cones.len());
        let mut seen = BTreeSet::new();
        for (c, cone) in cones.iter().enumerate() {
            if let Some(&ray) = cone.iter().find(|&&r| r >= rays.len()) {
                return Err(FanError::RayOutOfRange {
                    cone: c,
                    ray,
                    rays: rays.len(),
                });
            }
            let mut s = cone.clone();
            s.sort_unstable();
            s.dedup();
            if s.len() != dim || cone.len() != dim {
                return Err(FanError::ConeSize {
                    cone: c,
                    expected: dim,
                    found: s.len(),
                });
            }
            if !seen.insert(s.clone()) {
                return Err(FanError::DuplicateCone(c));
            }
            let cols: Vec<Vec<BigInt>> = s.iter().map(|&r| rays[r].clone()).collect();
            if IntegerMatrix::from_columns(dim, &cols)?.determinant()?.is_zero() {
                return Err(FanError::SingularCone(c));
            }
            sorted.push(s);
        }
        let used: BTreeSet<usize> = sorted.iter().flatten().copied().collect();
        if let Some(r) = (0..rays.len()).find(|r| !used.contains(r)) {
            return Err(FanError::UnusedRay(r));
        }
        sorted.sort();
        Ok(Fan {
            dim,
            rays,
            cones: sorted,
        })
    }

    pub fn from_spec(spec: &FanSpec) -> Result<Self, FanError> {
        let mut cones = Vec::with_capacity(spec.max_cones.len());
        for (c, cone) in spec.max_cones.iter().enumerate() {
            let mut z = Vec::with_capacity(cone.len());
            for &r in cone {
                if r == 0 || r > spec.rays.len() {
                    return Err(FanError::RayOutOfRange {
                        cone: c,
                        ray: r,
                        rays: spec.rays.len(),
                    });
                }
                z.push(r - 1);
            }
            cones.push(z);
        }
        Self::new(spec.dim, spec.rays.clone(), cones)
    }

    pub fn to_spec(&self) -> FanSpec {
        FanSpec {
            dim: self.dim,
            rays: self.rays.clone(),
            max_cones: self
                .cones
                .iter()
                .map(|c| c.iter().map(|r| r + 1).collect())
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<BigInt>] {
        &self.rays
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    /// Index of the maximal cone with exactly these rays.
    pub fn cone_index(&self, rays: &[usize]) -> Option<usize> {
        let mut s = rays.to_vec();
        s.sort_unstable();
        self.cones.iter().position(|c| *c == s)
    }

    /// Whether the rays indexed by `support` span a cone of the fan.
    pub fn is_face(&self, support: &[usize]) -> bool {
        self.cones
            .iter()
            .any(|c| support.iter().all(|r| c.contains(r)))
    }

    /// Ridge pairing: every (n-1)-face of a maximal cone lies in exactly two maximal cones.
    pub fn check_complete(&self) -> Result<(), FanError> {
        self.polytope().map(|_| ()).map_err(FanError::NotComplete)
    }

    fn polytope(&self) -> Result<SimplePolytope, PolytopeError> {
        SimplePolytope::new(self.dim, self.rays.len(), self.cones.clone())
    }

    /// Λ_σ: the rays of cone `c` as columns, in increasing ray order.
    pub fn cone_matrix(&self, c: usize) -> IntegerMatrix {
        let cols: Vec<Vec<BigInt>> = self.cones[c].iter().map(|&r| self.rays[r].clone()).collect();
        IntegerMatrix::from_columns(self.dim, &cols).expect("ray lengths checked")
    }
}

/// The complete fan as a characteristic pair over its dual simple polytope:
/// facets are rays and vertices are maximal cones.
pub fn fan_to_pair(fan: &Fan) -> Result<CharacteristicPair, FanError> {
    let p = fan.polytope().map_err(FanError::NotComplete)?;
    Ok(CharacteristicPair::checked(Arc::new(p), fan.rays.clone())?)
}

pub fn pair_to_fan(pair: &CharacteristicPair) -> Result<Fan, FanError> {
    let p = pair.polytope();
    let cones = (0..p.num_vertices()).map(|v| p.vertex_facet_list(v)).collect();
    let rays = pair.lambda().to_columns();
    Fan::new(pair.dim(), rays, cones)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeSubstitution {
    pub cone: Vec<usize>,
    pub matrix: IntegerMatrix,
    pub inverse: RationalMatrix,
}

pub fn cone_substitution(fan: &Fan, c: usize) -> Result<ConeSubstitution, FanError> {
    let matrix = fan.cone_matrix(c);
    let inverse = matrix.rational_inverse()?;
    Ok(ConeSubstitution {
        cone: fan.cones[c].clone(),
        matrix,
        inverse,
    })
}

impl ConeSubstitution {
    /// Images of x_1..x_m: x_{i_k} ↦ (row k of Λ_σ⁻¹) · u and x_s ↦ 0 off σ.
    pub fn images(&self, num_rays: usize) -> Vec<RatPolynomial> {
        let n = self.matrix.rows();
        let mut images = vec![RatPolynomial::zero(n); num_rays];
        for (k, &r) in self.cone.iter().enumerate() {
            images[r] = RatPolynomial::linear(self.inverse.row(k));
        }
        images
    }
}

/// g_{σ,i}: the lcm of the denominators of the row of Λ_σ⁻¹ belonging to ray i,
/// or 0 when i is not a ray of σ. Rows follow the sorted cone order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegralityMatrix {
    /// 0-based ray indices of each cone.
    pub cones: Vec<Vec<usize>>,
    #[serde(with = "crate::serde_big::vec2")]
    pub rows: Vec<Vec<BigInt>>,
}

impl IntegralityMatrix {
    /// Row for the cone with these (0-based) rays.
    pub fn row_for(&self, cone: &[usize]) -> Option<&[BigInt]> {
        let mut s = cone.to_vec();
        s.sort_unstable();
        self.cones
            .iter()
            .position(|c| *c == s)
            .map(|i| self.rows[i].as_slice())
    }
}

pub fn integrality_matrix(fan: &Fan) -> Result<IntegralityMatrix, FanError> {
    let mut rows = Vec::with_capacity(fan.cones.len());
    for c in 0..fan.cones.len() {
        let sub = cone_substitution(fan, c)?;
        let mut row = vec![BigInt::zero(); fan.num_rays()];
        for (k, &r) in sub.cone.iter().enumerate() {
            row[r] = lcm_of_denominators(sub.inverse.row(k));
        }
        rows.push(row);
    }
    Ok(IntegralityMatrix {
        cones: fan.cones.clone(),
        rows,
    })
}

/// f restricted to cone `c`, written in the coordinates u of ℝ^n.
pub fn substitute_on_cone(fan: &Fan, c: usize, f: &IntPolynomial) -> Result<RatPolynomial, FanError> {
    if f.nvars() != fan.num_rays() {
        return Err(FanError::VariableCount {
            expected: fan.num_rays(),
            found: f.nvars(),
        });
    }
    let sub = cone_substitution(fan, c)?;
    Ok(f.to_rational().substitute(&sub.images(fan.num_rays()), fan.dim()))
}

/// The piecewise polynomial (f|σ)_σ over all maximal cones.
pub fn to_piecewise(fan: &Fan, f: &IntPolynomial) -> Result<Vec<RatPolynomial>, FanError> {
    (0..fan.cones.len())
        .map(|c| substitute_on_cone(fan, c, f))
        .collect()
}

/// Inverse of [`to_piecewise`]: u = Λ_σ x_σ turns each piece back into the
/// terms supported on σ, and the pieces are glued along shared faces.
pub fn from_piecewise(fan: &Fan, pieces: &[RatPolynomial]) -> Result<RatPolynomial, FanError> {
    if pieces.len() != fan.cones.len() {
        return Err(FanError::PieceCount {
            expected: fan.cones.len(),
            found: pieces.len(),
        });
    }
    let m = fan.num_rays();
    let mut glued = RatPolynomial::zero(m);
    for (c, piece) in pieces.iter().enumerate() {
        let lambda = fan.cone_matrix(c);
        let cone = &fan.cones[c];
        let images: Vec<RatPolynomial> = (0..fan.dim)
            .map(|j| {
                let mut coeffs = vec![BigRational::zero(); m];
                for (k, &r) in cone.iter().enumerate() {
                    coeffs[r] = BigRational::from_integer(lambda[(j, k)].clone());
                }
                RatPolynomial::linear(&coeffs)
            })
            .collect();
        let local = piece.substitute(&images, m);
        for (e, coef) in local.terms() {
            let known = glued.coefficient(e);
            if known.is_zero() {
                glued.add_term(e.clone(), coef.clone());
            } else if known != *coef {
                return Err(FanError::InconsistentPieces(e.clone()));
            }
        }
        // A coefficient that vanishes here must vanish everywhere it is visible.
        for (e, _) in glued.terms() {
            let supported = e
                .iter()
                .enumerate()
                .all(|(i, &k)| k == 0 || cone.contains(&i));
            if supported && local.coefficient(e).is_zero() {
                return Err(FanError::InconsistentPieces(e.clone()));
            }
        }
    }
    Ok(glued)
}

/// Drops monomials whose support is not a face: reduction modulo the
/// Stanley-Reisner ideal.
pub fn reduce_to_faces(fan: &Fan, f: &IntPolynomial) -> IntPolynomial {
    f.retain(|e| {
        let support: Vec<usize> = (0..e.len()).filter(|&i| e[i] > 0).collect();
        fan.is_face(&support)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn weighted_plane() -> Fan {
        Fan::new(2, vec![big(&[1, 5]), big(&[1, 0]), big(&[-1, -3])], vec![vec![0, 1], vec![0, 2], vec![1, 2]]).unwrap()
    }

    #[test]
    fn dictionary_round_trip() {
        let fan = weighted_plane();
        let pair = fan_to_pair(&fan).unwrap();
        assert_eq!(pair_to_fan(&pair).unwrap(), fan);
        let mut orders = pair.vertex_orders();
        orders.sort();
        assert_eq!(orders, big(&[2, 3, 5]));
    }

    #[test]
    fn incomplete_fan_is_rejected() {
        let fan = Fan::new(2, vec![big(&[1, 0]), big(&[0, 1]), big(&[-1, -1])], vec![vec![0, 1], vec![1, 2]]).unwrap();
        assert!(matches!(fan_to_pair(&fan), Err(FanError::NotComplete(_))));
    }

    #[test]
    fn cone_inverse_and_substitution() {
        let fan = Fan::new(2, vec![big(&[1, 0]), big(&[1, 5]), big(&[-1, -3])], vec![vec![0, 1], vec![0, 2], vec![1, 2]]).unwrap();
        let c = fan.cone_index(&[1, 2]).unwrap();
        let x2 = IntPolynomial::variable(3, 1);
        let p = substitute_on_cone(&fan, c, &x2).unwrap();
        let u = crate::poly::variable_names("u", 2);
        assert_eq!(p.display_with(&u), "-3/2*u1 + 1/2*u2");
        let x1 = IntPolynomial::variable(3, 0);
        assert!(substitute_on_cone(&fan, c, &x1).unwrap().is_zero());
    }

    #[test]
    fn piecewise_round_trip() {
        let fan = weighted_plane();
        let x: Vec<IntPolynomial> = (0..3).map(|i| IntPolynomial::variable(3, i)).collect();
        let f = x[0].pow(2).add(&x[0].mul(&x[1]).scale(&BigInt::from(7))).add(&x[2]);
        let f = reduce_to_faces(&fan, &f);
        let back = from_piecewise(&fan, &to_piecewise(&fan, &f).unwrap()).unwrap();
        assert_eq!(back, f.to_rational());
    }
}
