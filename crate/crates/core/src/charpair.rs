//! Characteristic pairs (Q, λ) and the finite groups attached to their faces.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{
    content, saturate_columns, smith_normal_form, AbelianGroup, IntegerMatrix, LinalgError,
};
use crate::polytope::{bits, Face, PolytopeError, PolytopeSpec, SimplePolytope};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharPairError {
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("lambda has {found} vectors, expected one per facet ({expected})")]
    WrongFacetCount { expected: usize, found: usize },
    #[error("lambda vector for facet {facet} has length {found}, expected {expected}")]
    WrongVectorLength {
        facet: usize,
        expected: usize,
        found: usize,
    },
    #[error("lambda vector for facet {facet} is not primitive")]
    NotPrimitive { facet: usize },
    #[error("lambda vectors at vertex {vertex} (facets {facets:?}) are linearly dependent")]
    SingularVertex { vertex: usize, facets: Vec<usize> },
    #[error("operation needs a proper face")]
    ImproperFace,
    #[error("vertex {vertex} does not lie on the face")]
    VertexNotOnFace { vertex: usize },
    #[error("matrix is not of full rank, so it is not an R-characteristic matrix")]
    NotRCharacteristic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacteristicPair {
    polytope: Arc<SimplePolytope>,
    lambda: IntegerMatrix,
}

/// JSON form: the polytope and one λ column per facet.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    pub polytope: PolytopeSpec,
    #[serde(with = "crate::serde_big::vec2")]
    pub lambda: Vec<Vec<BigInt>>,
}

impl CharacteristicPair {
    /// Builds a pair, checking only the shape of λ. Call [`Self::validate`] for the
    /// primitivity and vertex conditions.
    pub fn new(polytope: Arc<SimplePolytope>, columns: Vec<Vec<BigInt>>) -> Result<Self, CharPairError> {
        let n = polytope.dim();
        if columns.len() != polytope.num_facets() {
            return Err(CharPairError::WrongFacetCount {
                expected: polytope.num_facets(),
                found: columns.len(),
            });
        }
        if let Some((facet, c)) = columns.iter().enumerate().find(|(_, c)| c.len() != n) {
            return Err(CharPairError::WrongVectorLength {
                facet,
                expected: n,
                found: c.len(),
            });
        }
        let lambda = IntegerMatrix::from_columns(n, &columns)?;
        Ok(CharacteristicPair { polytope, lambda })
    }

    /// Builds and validates.
    pub fn checked(polytope: Arc<SimplePolytope>, columns: Vec<Vec<BigInt>>) -> Result<Self, CharPairError> {
        let p = Self::new(polytope, columns)?;
        p.validate()?;
        Ok(p)
    }

    pub fn from_spec(spec: &PairSpec) -> Result<Self, CharPairError> {
        let polytope = Arc::new(SimplePolytope::from_spec(&spec.polytope)?);
        Self::new(polytope, spec.lambda.clone())
    }

    pub fn to_spec(&self) -> PairSpec {
        PairSpec {
            polytope: self.polytope.to_spec(),
            lambda: self.lambda.to_columns(),
        }
    }

    pub fn polytope(&self) -> &Arc<SimplePolytope> {
        &self.polytope
    }

    pub fn dim(&self) -> usize {
        self.polytope.dim()
    }

    /// λ as an n x m matrix, column i belonging to facet i.
    pub fn lambda(&self) -> &IntegerMatrix {
        &self.lambda
    }

    pub fn lambda_column(&self, facet: usize) -> Vec<BigInt> {
        self.lambda.column(facet)
    }

    /// Every λ is primitive and the λ's at each vertex are linearly independent.
    /// Reports the first offence in facet, then vertex, order.
    pub fn validate(&self) -> Result<(), CharPairError> {
        for facet in 0..self.polytope.num_facets() {
            if !content(&self.lambda.column(facet)).is_one() {
                return Err(CharPairError::NotPrimitive { facet });
            }
        }
        for v in 0..self.polytope.num_vertices() {
            if self.vertex_matrix(v).determinant()?.is_zero() {
                return Err(CharPairError::SingularVertex {
                    vertex: v,
                    facets: self.polytope.vertex_facet_list(v),
                });
            }
        }
        Ok(())
    }

    /// The n x n matrix of λ's at vertex v, in increasing facet order.
    pub fn vertex_matrix(&self, v: usize) -> IntegerMatrix {
        self.lambda
            .select_columns(&self.polytope.vertex_facet_list(v))
    }

    /// ℤ^n modulo the span of the λ's at v; its order is |det|.
    pub fn local_group_at_vertex(&self, v: usize) -> AbelianGroup {
        AbelianGroup::cokernel(&self.vertex_matrix(v))
    }

    pub fn vertex_orders(&self) -> Vec<BigInt> {
        (0..self.polytope.num_vertices())
            .map(|v| {
                self.vertex_matrix(v)
                    .determinant()
                    .expect("square")
                    .abs()
            })
            .collect()
    }

    /// G_E = M*(E) / M(E), where M(E) is spanned by the λ's of the facets through E.
    pub fn face_group(&self, e: &Face) -> AbelianGroup {
        quotient_of_saturation(&self.lambda.select_columns(&bits(e.facets)))
    }

    /// The pair induced on the proper face `e`.
    pub fn induced_pair(&self, e: &Face) -> Result<InducedPair, CharPairError> {
        let s = bits(e.facets);
        let k = s.len();
        let n = self.dim();
        if k == 0 {
            return Err(CharPairError::ImproperFace);
        }
        let m_e = self.lambda.select_columns(&s);
        let sat = saturate_columns(&m_e);
        // U maps the saturated lattice onto the first k coordinates.
        let snf = smith_normal_form(sat.matrix());
        let rows: Vec<usize> = (k..n).collect();
        let projection = snf.u.select_rows(&rows);
        let mut facets = Vec::new();
        let mut raw = Vec::new();
        for (i, _) in self.polytope.facets_of_face(e) {
            facets.push(i);
            raw.push(projection.mul_vec(&self.lambda.column(i))?);
        }
        Ok(InducedPair::from_parts(
            self.polytope.clone(),
            *e,
            facets,
            raw,
            projection,
        ))
    }

    /// G_E(v): the local group at v of the pair induced on E.
    ///
    /// For E = Q this is the local group at the vertex.
    pub fn local_group_on_face(&self, e: &Face, v: usize) -> Result<AbelianGroup, CharPairError> {
        if !e.contains_vertex(v) {
            return Err(CharPairError::VertexNotOnFace { vertex: v });
        }
        if e.facets == 0 {
            return Ok(self.local_group_at_vertex(v));
        }
        self.induced_pair(e)?.local_group_at(v)
    }
}

/// Invariant factors of M* / M where M is spanned by the columns of `generators`
/// and M* is its saturation.
pub fn quotient_of_saturation(generators: &IntegerMatrix) -> AbelianGroup {
    let sat = saturate_columns(generators);
    let coords: Vec<Vec<BigInt>> = generators
        .to_columns()
        .iter()
        .map(|c| sat.coordinates(c).expect("column lies in its saturation"))
        .collect();
    if sat.rank() == 0 {
        return AbelianGroup::trivial();
    }
    let m = IntegerMatrix::from_columns(sat.rank(), &coords).expect("consistent lengths");
    AbelianGroup::cokernel(&m)
}

/// Splits off the content: `v = r * w` with `w` primitive and `r > 0`.
pub fn primitivize(v: &[BigInt]) -> (BigInt, Vec<BigInt>) {
    let r = content(v);
    if r.is_zero() {
        return (BigInt::one(), v.to_vec());
    }
    (r.clone(), v.iter().map(|x| x / &r).collect())
}

/// The pair (E, λ_E) induced on a face E of codimension k.
///
/// λ_E sends the facet E ∩ F_i of E to ϱ_E(λ_i) in ℤ^n / M*(E) ≅ ℤ^(n-k).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedPair {
    polytope: Arc<SimplePolytope>,
    pub face: Face,
    /// Facet index i of Q for each facet E ∩ F_i of E.
    pub facets: Vec<usize>,
    /// Unreduced λ_E vectors.
    pub raw: Vec<Vec<BigInt>>,
    /// r_j with raw[j] = r_j * reduced[j].
    pub multipliers: Vec<BigInt>,
    pub reduced: Vec<Vec<BigInt>>,
    /// The (n-k) x n matrix of ϱ_E in the chosen complement basis.
    pub projection: IntegerMatrix,
}

impl InducedPair {
    fn from_parts(
        polytope: Arc<SimplePolytope>,
        face: Face,
        facets: Vec<usize>,
        raw: Vec<Vec<BigInt>>,
        projection: IntegerMatrix,
    ) -> Self {
        let (multipliers, reduced) = raw.iter().map(|v| primitivize(v)).unzip();
        InducedPair {
            polytope,
            face,
            facets,
            raw,
            multipliers,
            reduced,
            projection,
        }
    }

    pub fn dim(&self) -> usize {
        self.face.dim
    }

    /// The same pair after the change of basis `w` on ℤ^(n-k).
    pub fn with_basis_change(&self, w: &IntegerMatrix) -> Result<InducedPair, CharPairError> {
        let raw = self
            .raw
            .iter()
            .map(|v| w.mul_vec(v))
            .collect::<Result<Vec<_>, _>>()?;
        let projection = w.mul(&self.projection)?;
        Ok(Self::from_parts(
            self.polytope.clone(),
            self.face,
            self.facets.clone(),
            raw,
            projection,
        ))
    }

    fn columns_at(&self, v: usize, vectors: &[Vec<BigInt>]) -> Result<IntegerMatrix, CharPairError> {
        if !self.face.contains_vertex(v) {
            return Err(CharPairError::VertexNotOnFace { vertex: v });
        }
        let fv = self.polytope.vertex_facets(v);
        let cols: Vec<Vec<BigInt>> = self
            .facets
            .iter()
            .zip(vectors)
            .filter(|(&i, _)| fv >> i & 1 == 1)
            .map(|(_, c)| c.clone())
            .collect();
        Ok(IntegerMatrix::from_columns(self.dim(), &cols)?)
    }

    /// G_E(v) from the unreduced λ_E.
    pub fn local_group_at(&self, v: usize) -> Result<AbelianGroup, CharPairError> {
        Ok(AbelianGroup::cokernel(&self.columns_at(v, &self.raw)?))
    }

    /// Local group at v of the primitive pair (E, λ̄_E).
    pub fn reduced_local_group_at(&self, v: usize) -> Result<AbelianGroup, CharPairError> {
        Ok(AbelianGroup::cokernel(&self.columns_at(v, &self.reduced)?))
    }

    /// The face E as a simple polytope in its own right, with the primitive λ̄_E.
    pub fn as_pair(&self) -> Result<CharacteristicPair, CharPairError> {
        let vertices = bits(self.face.vertices)
            .into_iter()
            .map(|v| {
                let fv = self.polytope.vertex_facets(v);
                self.facets
                    .iter()
                    .enumerate()
                    .filter(|(_, &i)| fv >> i & 1 == 1)
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect();
        let p = SimplePolytope::new(self.dim(), self.facets.len(), vertices)?;
        CharacteristicPair::new(Arc::new(p), self.reduced.clone())
    }
}

/// ℤ^(n+1) / ξ ℤ^(n+1) for a full-rank integer matrix ξ.
pub fn lens_group(xi: &IntegerMatrix) -> Result<AbelianGroup, CharPairError> {
    if !xi.is_square() {
        return Err(CharPairError::Linalg(LinalgError::NotSquare(xi.rows(), xi.cols())));
    }
    let snf = smith_normal_form(xi);
    if snf.rank < xi.rows() {
        return Err(CharPairError::NotRCharacteristic);
    }
    Ok(AbelianGroup::from_invariants(0, snf.invariant_factors()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn example() -> CharacteristicPair {
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
            vec![
                big(&[2, 3, 5]),
                big(&[2, -1, 0]),
                big(&[-1, -1, -2]),
                big(&[-1, 2, 2]),
                big(&[0, 0, 1]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn vertex_orders_match_determinants() {
        let pair = example();
        assert_eq!(pair.vertex_orders(), big(&[1, 1, 1, 3, 3, 3]));
        for v in 0..6 {
            assert_eq!(
                pair.local_group_at_vertex(v).order().unwrap(),
                pair.vertex_orders()[v]
            );
        }
    }

    #[test]
    fn face_five() {
        let pair = example();
        let f5 = pair.polytope().face_from_list(&[4]).unwrap();
        assert!(pair.face_group(&f5).is_trivial());
        let ind = pair.induced_pair(&f5).unwrap();
        assert_eq!(ind.facets, vec![1, 2, 3]);
        assert!(ind.multipliers.iter().all(|r| r.is_one()));
        for v in [3, 4, 5] {
            assert_eq!(
                pair.local_group_on_face(&f5, v).unwrap(),
                AbelianGroup::cyclic(3.into())
            );
        }
        assert!(ind.as_pair().unwrap().validate().is_ok());
    }

    #[test]
    fn single_column_face_group() {
        let m = IntegerMatrix::from_columns(2, &[big(&[2, 4])]).unwrap();
        assert_eq!(quotient_of_saturation(&m), AbelianGroup::cyclic(2.into()));
    }

    #[test]
    fn validation_reports_first_offence() {
        let tri = Arc::new(SimplePolytope::simplex(2));
        let bad = CharacteristicPair::new(tri.clone(), vec![big(&[2, 0]), big(&[0, 1]), big(&[1, 1])]).unwrap();
        assert_eq!(bad.validate(), Err(CharPairError::NotPrimitive { facet: 0 }));
        let sing = CharacteristicPair::new(tri, vec![big(&[1, 0]), big(&[1, 0]), big(&[0, 1])]).unwrap();
        assert!(matches!(sing.validate(), Err(CharPairError::SingularVertex { vertex: 2, .. })));
    }

    #[test]
    fn lens() {
        let xi = IntegerMatrix::from_rows(&[[1, 0], [0, 6]]);
        assert_eq!(lens_group(&xi).unwrap().order().unwrap(), BigInt::from(6));
        let deficient = IntegerMatrix::from_rows(&[[1, 2], [2, 4]]);
        assert_eq!(lens_group(&deficient), Err(CharPairError::NotRCharacteristic));
    }
}
