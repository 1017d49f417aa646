//! The integral lattice of polynomials on a fan whose restriction to every
//! maximal cone is integral, the ideal generated by the linear forms, and the
//! graded quotient with a generators-and-relations presentation.
//!
//! Degrees here are polynomial degrees d; the cohomological degree is 2d.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::evenness::{EvennessCertificate, Verdict};
use crate::fan::{cone_substitution, reduce_to_faces, Fan, FanError};
use crate::linalg::{
    hermite_normal_form, integer_kernel, lcm_of_denominators, smith_normal_form, AbelianGroup,
    IntegerMatrix, LatticeBasis, LinalgError,
};
use crate::poly::{graded_lex_desc, monomial_string, variable_names, Exponent, IntPolynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradedRingError {
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("degree {0} was not computed")]
    DegreeNotComputed(usize),
    #[error("polynomial is not integral on every cone")]
    NotIntegral,
    #[error("polynomial has {found} variables, expected {expected}")]
    VariableCount { expected: usize, found: usize },
}

/// Monomials of degree d whose support spans a cone of the fan, in graded-lex
/// descending order.
pub fn monomial_basis(fan: &Fan, d: usize) -> Vec<Exponent> {
    let m = fan.num_rays();
    let mut faces: Vec<Vec<usize>> = Vec::new();
    for cone in fan.cones() {
        for mask in 0u32..(1 << cone.len()) {
            let face: Vec<usize> = (0..cone.len())
                .filter(|&k| mask >> k & 1 == 1)
                .map(|k| cone[k])
                .collect();
            faces.push(face);
        }
    }
    faces.sort();
    faces.dedup();
    let mut out = Vec::new();
    for face in faces {
        if face.len() > d || (face.is_empty() && d > 0) {
            continue;
        }
        let mut parts = vec![1u32; face.len()];
        compositions(d as u32 - face.len() as u32, 0, &mut parts, &mut |p| {
            let mut e = vec![0; m];
            for (k, &r) in face.iter().enumerate() {
                e[r] = p[k];
            }
            out.push(e);
        });
    }
    out.sort_by(|a, b| graded_lex_desc(a, b));
    out
}

/// Distributes `left` extra units over parts[i..].
fn compositions(left: u32, i: usize, parts: &mut Vec<u32>, emit: &mut impl FnMut(&[u32])) {
    if i == parts.len() {
        if left == 0 {
            emit(parts);
        }
        return;
    }
    if i + 1 == parts.len() {
        parts[i] += left;
        emit(parts);
        parts[i] -= left;
        return;
    }
    for k in 0..=left {
        parts[i] += k;
        compositions(left - k, i + 1, parts, emit);
        parts[i] -= k;
    }
}

fn monomial_poly(nvars: usize, e: &Exponent, c: BigInt) -> IntPolynomial {
    IntPolynomial::monomial(nvars, e.clone(), c)
}

/// Polynomial Σ c_t x^{monomials[t]}.
pub fn polynomial_from_coords(nvars: usize, monomials: &[Exponent], coords: &[BigInt]) -> IntPolynomial {
    IntPolynomial::from_terms(
        nvars,
        monomials
            .iter()
            .zip(coords)
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (e.clone(), c.clone())),
    )
}

/// Coefficients of a polynomial along `monomials`; `None` if it has other terms.
pub fn coords_in_basis(monomials: &[Exponent], f: &IntPolynomial) -> Option<Vec<BigInt>> {
    let index: HashMap<&Exponent, usize> = monomials.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let mut out = vec![BigInt::zero(); monomials.len()];
    for (e, c) in f.terms() {
        out[*index.get(e)?] = c.clone();
    }
    Some(out)
}

/// L_d: coefficient vectors (along [`monomial_basis`]) of the degree-d
/// polynomials that become integral after substitution on every maximal cone.
///
/// Each rational linear condition "Σ a_t c_t ∈ ℤ" is rewritten as the
/// congruence (q a)·c ≡ 0 mod q and intersected into the running lattice.
pub fn integrality_lattice(fan: &Fan, d: usize) -> Result<LatticeBasis, GradedRingError> {
    let monomials = monomial_basis(fan, d);
    integrality_lattice_on(fan, &monomials)
}

fn integrality_lattice_on(fan: &Fan, monomials: &[Exponent]) -> Result<LatticeBasis, GradedRingError> {
    let n_mon = monomials.len();
    let m = fan.num_rays();
    let mut basis = IntegerMatrix::identity(n_mon);
    for c in 0..fan.cones().len() {
        let sub = cone_substitution(fan, c)?;
        let images = sub.images(m);
        let cone = &fan.cones()[c];
        let mut rows: HashMap<Exponent, Vec<num_rational::BigRational>> = HashMap::new();
        for (t, e) in monomials.iter().enumerate() {
            if e.iter().enumerate().any(|(i, &k)| k > 0 && !cone.contains(&i)) {
                continue;
            }
            let p = monomial_poly(m, e, BigInt::one())
                .to_rational()
                .substitute(&images, fan.dim());
            for (ue, coef) in p.terms() {
                rows.entry(ue.clone())
                    .or_insert_with(|| vec![num_rational::BigRational::zero(); n_mon])[t] = coef.clone();
            }
        }
        let mut keys: Vec<&Exponent> = rows.keys().collect();
        keys.sort();
        for key in keys {
            let row = &rows[key];
            let q = lcm_of_denominators(row);
            if q.is_one() {
                continue;
            }
            let a: Vec<BigInt> = row.iter().map(|x| (x * &q).to_integer()).collect();
            basis = impose_congruence(&basis, &a, &q)?;
        }
    }
    Ok(LatticeBasis::spanned_by_columns(&basis))
}

/// Columns of `basis` span L; returns a basis of {c ∈ L : a·c ≡ 0 mod q}.
fn impose_congruence(basis: &IntegerMatrix, a: &[BigInt], q: &BigInt) -> Result<IntegerMatrix, GradedRingError> {
    let n = basis.cols();
    let arow = IntegerMatrix::try_from_rows(vec![a.to_vec()])?;
    let w = arow.mul(basis)?;
    let mut row: Vec<BigInt> = w.row(0).iter().map(|x| x.mod_floor(q)).collect();
    if row.iter().all(Zero::is_zero) {
        return Ok(basis.clone());
    }
    row.push(q.clone());
    let kernel = integer_kernel(&IntegerMatrix::try_from_rows(vec![row])?);
    let rows: Vec<usize> = (0..n).collect();
    let y = kernel.matrix().select_rows(&rows);
    let next = basis.mul(&y)?;
    Ok(LatticeBasis::spanned_by_columns(&next).matrix().clone())
}

/// ℓ_j = Σ_i ⟨λ_i, e_j⟩ x_i for j = 1..n.
pub fn linear_forms(fan: &Fan) -> Vec<IntPolynomial> {
    (0..fan.dim())
        .map(|j| {
            let coeffs: Vec<BigInt> = fan.rays().iter().map(|r| r[j].clone()).collect();
            IntPolynomial::linear(&coeffs)
        })
        .collect()
}

/// Generators ℓ_j · p (p running over a basis of L_{d-1}) of J_d, as
/// coefficient vectors along the degree-d monomial basis.
fn ideal_generators(
    fan: &Fan,
    prev_monomials: &[Exponent],
    prev_lattice: &LatticeBasis,
    monomials: &[Exponent],
) -> Vec<Vec<BigInt>> {
    let m = fan.num_rays();
    let forms = linear_forms(fan);
    let mut gens = Vec::new();
    for b in prev_lattice.basis_vectors() {
        let p = polynomial_from_coords(m, prev_monomials, &b);
        for l in &forms {
            let prod = reduce_to_faces(fan, &l.mul(&p));
            gens.push(coords_in_basis(monomials, &prod).expect("face monomials of the right degree"));
        }
    }
    gens
}

/// J_d = span{ℓ_j · p : p ∈ L_{d-1}} inside the degree-d monomial coordinates.
pub fn linear_ideal_piece(fan: &Fan, d: usize) -> Result<LatticeBasis, GradedRingError> {
    let monomials = monomial_basis(fan, d);
    if d == 0 {
        return Ok(LatticeBasis::spanned_by(monomials.len(), &[])?);
    }
    let prev_monomials = monomial_basis(fan, d - 1);
    let prev = integrality_lattice_on(fan, &prev_monomials)?;
    let gens = ideal_generators(fan, &prev_monomials, &prev, &monomials);
    Ok(LatticeBasis::spanned_by(monomials.len(), &gens)?)
}

/// L_d / J_d.
pub fn quotient_module(fan: &Fan, d: usize) -> Result<AbelianGroup, GradedRingError> {
    Ok(IntegralCohomology::compute(fan, d)?.piece(d)?.module.clone())
}

/// One degree of the computation.
#[derive(Clone, Debug)]
pub struct DegreePiece {
    pub degree: usize,
    pub monomials: Vec<Exponent>,
    pub lattice: LatticeBasis,
    pub ideal: LatticeBasis,
    pub module: AbelianGroup,
    /// U with U·(L-coordinates) = quotient coordinates.
    to_quotient: IntegerMatrix,
    ideal_rank: usize,
    invariants: Vec<BigInt>,
    /// Representatives of the free basis of the quotient, in monomial coordinates.
    pub free_basis: Vec<Vec<BigInt>>,
    /// (order, representative) for each torsion summand.
    pub torsion_generators: Vec<(BigInt, Vec<BigInt>)>,
}

impl DegreePiece {
    pub fn rank(&self) -> usize {
        self.module.free_rank
    }

    /// Coordinates in the free basis of the quotient, for a coefficient vector
    /// along `monomials`. `None` when the vector is not in L_d.
    pub fn free_coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let x = self.lattice.coordinates(v)?;
        let y = self.to_quotient.mul_vec(&x).ok()?;
        Some(y[self.ideal_rank..].to_vec())
    }

    /// Residues in the torsion summands.
    pub fn torsion_coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let x = self.lattice.coordinates(v)?;
        let y = self.to_quotient.mul_vec(&x).ok()?;
        Some(
            (0..self.ideal_rank)
                .filter(|&i| !self.invariants[i].is_one())
                .map(|i| y[i].mod_floor(&self.invariants[i]))
                .collect(),
        )
    }

    /// Whether the element is zero in L_d / J_d.
    pub fn is_zero_class(&self, v: &[BigInt]) -> Option<bool> {
        Some(
            self.free_coordinates(v)?.iter().all(Zero::is_zero)
                && self.torsion_coordinates(v)?.iter().all(Zero::is_zero),
        )
    }
}

/// L_d / J_d for d = 0..=max_degree.
#[derive(Clone, Debug)]
pub struct IntegralCohomology {
    fan: Fan,
    pieces: Vec<DegreePiece>,
}

impl IntegralCohomology {
    pub fn compute(fan: &Fan, max_degree: usize) -> Result<Self, GradedRingError> {
        let mut pieces: Vec<DegreePiece> = Vec::with_capacity(max_degree + 1);
        for d in 0..=max_degree {
            let monomials = monomial_basis(fan, d);
            let lattice = integrality_lattice_on(fan, &monomials)?;
            let gens = match pieces.last() {
                Some(prev) => ideal_generators(fan, &prev.monomials, &prev.lattice, &monomials),
                None => Vec::new(),
            };
            pieces.push(build_piece(d, monomials, lattice, &gens)?);
        }
        Ok(IntegralCohomology {
            fan: fan.clone(),
            pieces,
        })
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn max_degree(&self) -> usize {
        self.pieces.len() - 1
    }

    pub fn pieces(&self) -> &[DegreePiece] {
        &self.pieces
    }

    pub fn piece(&self, d: usize) -> Result<&DegreePiece, GradedRingError> {
        self.pieces.get(d).ok_or(GradedRingError::DegreeNotComputed(d))
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.pieces.iter().map(|p| p.rank()).collect()
    }

    pub fn has_torsion(&self) -> bool {
        self.pieces.iter().any(|p| !p.module.torsion.is_empty())
    }

    /// Homogeneous polynomial in x reduced modulo the Stanley-Reisner ideal,
    /// with its degree and coefficient vector.
    pub fn coefficients(&self, f: &IntPolynomial) -> Result<(usize, Vec<BigInt>), GradedRingError> {
        if f.nvars() != self.fan.num_rays() {
            return Err(GradedRingError::VariableCount {
                expected: self.fan.num_rays(),
                found: f.nvars(),
            });
        }
        let f = reduce_to_faces(&self.fan, f);
        let d = match f.homogeneous_degree() {
            Some(d) => d as usize,
            None if f.is_zero() => 0,
            None => return Err(GradedRingError::NotHomogeneous),
        };
        let piece = self.piece(d)?;
        let v = coords_in_basis(&piece.monomials, &f).ok_or(GradedRingError::NotHomogeneous)?;
        Ok((d, v))
    }

    /// Free coordinates of the class of `f` in L_d / J_d.
    pub fn class_of(&self, f: &IntPolynomial) -> Result<(usize, Vec<BigInt>), GradedRingError> {
        let (d, v) = self.coefficients(f)?;
        let c = self.piece(d)?.free_coordinates(&v).ok_or(GradedRingError::NotIntegral)?;
        Ok((d, c))
    }

    /// Polynomial representative of a free-coordinate vector in degree d.
    pub fn representative(&self, d: usize, free: &[BigInt]) -> Result<IntPolynomial, GradedRingError> {
        let piece = self.piece(d)?;
        let mut v = vec![BigInt::zero(); piece.monomials.len()];
        for (b, c) in piece.free_basis.iter().zip(free) {
            for (x, y) in v.iter_mut().zip(b) {
                *x += c * y;
            }
        }
        let v = reduce_modulo(&v, &piece.ideal);
        Ok(polynomial_from_coords(self.fan.num_rays(), &piece.monomials, &v))
    }
}

fn build_piece(
    degree: usize,
    monomials: Vec<Exponent>,
    lattice: LatticeBasis,
    gens: &[Vec<BigInt>],
) -> Result<DegreePiece, GradedRingError> {
    let n_mon = monomials.len();
    let ideal = LatticeBasis::spanned_by(n_mon, gens)?;
    let coords: Vec<Vec<BigInt>> = ideal
        .basis_vectors()
        .iter()
        .map(|g| lattice.coordinates(g).expect("the linear ideal lies in the integral lattice"))
        .collect();
    let l_rank = lattice.rank();
    let c = IntegerMatrix::from_columns(l_rank, &coords)?;
    let snf = smith_normal_form(&c);
    let invariants = snf.invariant_factors();
    let module = AbelianGroup::from_invariants(l_rank - snf.rank, invariants.clone());
    let uinv = snf.u.unimodular_inverse()?;
    let to_monomials = |x: Vec<BigInt>| -> Result<Vec<BigInt>, GradedRingError> {
        let v = lattice.matrix().mul_vec(&x)?;
        Ok(reduce_modulo(&v, &ideal))
    };
    let mut free_basis = Vec::new();
    for i in snf.rank..l_rank {
        free_basis.push(to_monomials(uinv.column(i))?);
    }
    let mut torsion_generators = Vec::new();
    for (i, d) in invariants.iter().enumerate() {
        if !d.is_one() {
            torsion_generators.push((d.clone(), to_monomials(uinv.column(i))?));
        }
    }
    Ok(DegreePiece {
        degree,
        monomials,
        lattice,
        ideal,
        module,
        to_quotient: snf.u,
        ideal_rank: snf.rank,
        invariants,
        free_basis,
        torsion_generators,
    })
}

/// Reduces `v` modulo a lattice using its echelon basis, giving a canonical
/// representative of the coset.
fn reduce_modulo(v: &[BigInt], lattice: &LatticeBasis) -> Vec<BigInt> {
    let rows = lattice.matrix().transpose();
    let mut out = v.to_vec();
    for r in 0..rows.rows() {
        let Some(p) = (0..rows.cols()).find(|&c| !rows[(r, c)].is_zero()) else {
            continue;
        };
        let k = out[p].div_floor(&rows[(r, p)]);
        if k.is_zero() {
            continue;
        }
        for c in 0..rows.cols() {
            out[c] -= &k * &rows[(r, c)];
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Applicability {
    /// The evenness certificate holds, so the quotient is the integral cohomology ring.
    Unconditional,
    /// The certificate did not hold; the presentation describes L/J only.
    Conditional { reason: String },
    /// Torsion in some degree: only the graded module is reported.
    ModuleOnly { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    /// Polynomial degree d; the cohomological degree is 2d.
    pub degree: usize,
    /// Coordinates in the free basis of degree d.
    #[serde(with = "crate::serde_big::vec")]
    pub coordinates: Vec<BigInt>,
    /// A representative polynomial in the x variables.
    pub representative: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub degree: usize,
    /// Exponent vectors in the generators with their coefficients.
    pub terms: Vec<(Exponent, crate::serde_big::Big)>,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureConstant {
    /// Exponents of the generators in the product.
    pub monomial: Exponent,
    pub degree: usize,
    /// The product in the free basis of its degree.
    #[serde(with = "crate::serde_big::vec")]
    pub coordinates: Vec<BigInt>,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingPresentation {
    pub ranks: Vec<usize>,
    pub generators: Vec<Generator>,
    pub relations: Vec<Relation>,
    pub products: Vec<StructureConstant>,
    pub applicability: Applicability,
}

impl RingPresentation {
    pub fn generator_names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    /// Relation polynomials in the generator variables.
    pub fn relation_polynomials(&self) -> Vec<IntPolynomial> {
        let k = self.generators.len();
        self.relations
            .iter()
            .map(|r| IntPolynomial::from_terms(k, r.terms.iter().map(|(e, c)| (e.clone(), c.0.clone()))))
            .collect()
    }
}

/// Monomials in generators of the given degrees with weighted degree `d`,
/// lexicographically descending.
fn generator_monomials(degrees: &[usize], d: usize) -> Vec<Exponent> {
    fn go(i: usize, left: usize, degrees: &[usize], cur: &mut Exponent, out: &mut Vec<Exponent>) {
        if i == degrees.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for k in (0..=left / degrees[i]).rev() {
            cur[i] = k as u32;
            go(i + 1, left - k * degrees[i], degrees, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    if degrees.is_empty() {
        return out;
    }
    go(0, d, degrees, &mut vec![0; degrees.len()], &mut out);
    out
}

/// Free coordinates of the product of generators with exponent `e`.
fn product_class(
    coh: &IntegralCohomology,
    reps: &[IntPolynomial],
    e: &Exponent,
    d: usize,
) -> Result<Vec<BigInt>, GradedRingError> {
    let n = coh.fan.dim();
    if d > n || d > coh.max_degree() {
        return Ok(Vec::new());
    }
    let m = coh.fan.num_rays();
    let mut p = IntPolynomial::one(m);
    for (g, &k) in reps.iter().zip(e) {
        for _ in 0..k {
            p = reduce_to_faces(&coh.fan, &p.mul(g));
        }
    }
    if p.is_zero() {
        return Ok(vec![BigInt::zero(); coh.piece(d)?.rank()]);
    }
    Ok(coh.class_of(&p)?.1)
}

/// Greedy presentation: in each degree, new generators complete the span of
/// products of earlier ones; relations generate the kernel of the map from the
/// polynomial ring on the generators, degree by degree up to n + (largest
/// generator degree), modulo what earlier relations already give.
pub fn ring_presentation(
    coh: &IntegralCohomology,
    certificate: Option<&EvennessCertificate>,
) -> Result<RingPresentation, GradedRingError> {
    let n = coh.fan.dim();
    let ranks = coh.ranks();
    if coh.has_torsion() {
        let degrees: Vec<String> = coh
            .pieces
            .iter()
            .filter(|p| !p.module.torsion.is_empty())
            .map(|p| format!("{} ({})", 2 * p.degree, p.module))
            .collect();
        return Ok(RingPresentation {
            ranks,
            generators: Vec::new(),
            relations: Vec::new(),
            products: Vec::new(),
            applicability: Applicability::ModuleOnly {
                reason: format!("torsion in degrees {}", degrees.join(", ")),
            },
        });
    }
    if coh.max_degree() < n {
        return Err(GradedRingError::DegreeNotComputed(n));
    }
    let applicability = match certificate.map(|c| &c.verdict) {
        Some(Verdict::Satisfied) => Applicability::Unconditional,
        Some(Verdict::Violated { .. }) => Applicability::Conditional {
            reason: "evenness certificate violated".into(),
        },
        Some(Verdict::Inconclusive { reason }) => Applicability::Conditional {
            reason: format!("evenness certificate inconclusive: {reason}"),
        },
        None => Applicability::Conditional {
            reason: "no evenness certificate supplied".into(),
        },
    };

    let mut degrees: Vec<usize> = Vec::new();
    let mut coords: Vec<Vec<BigInt>> = Vec::new();
    let mut reps: Vec<IntPolynomial> = Vec::new();
    for d in 1..=n {
        let r = ranks[d];
        if r == 0 {
            continue;
        }
        let products: Vec<Vec<BigInt>> = generator_monomials(&degrees, d)
            .iter()
            .map(|e| product_class(coh, &reps, e, d))
            .collect::<Result<_, _>>()?;
        let p = IntegerMatrix::from_columns(r, &products)?;
        let snf = smith_normal_form(&p);
        let uinv = snf.u.unimodular_inverse()?;
        for i in 0..r {
            if i >= snf.rank || !snf.d[(i, i)].is_one() {
                let c = uinv.column(i);
                reps.push(coh.representative(d, &c)?);
                coords.push(c);
                degrees.push(d);
            }
        }
    }
    let names = variable_names("w", degrees.len());
    let x_names = variable_names("x", coh.fan.num_rays());
    let generators: Vec<Generator> = (0..degrees.len())
        .map(|i| Generator {
            name: names[i].clone(),
            degree: degrees[i],
            coordinates: coords[i].clone(),
            representative: reps[i].display_with(&x_names),
        })
        .collect();

    let mut products = Vec::new();
    for d in 1..=n {
        for e in generator_monomials(&degrees, d) {
            if e.iter().sum::<u32>() < 2 {
                continue;
            }
            let c = product_class(coh, &reps, &e, d)?;
            products.push(StructureConstant {
                text: format!("{} = {}", monomial_string(&e, &names), basis_combination(&c, d)),
                monomial: e,
                degree: d,
                coordinates: c,
            });
        }
    }

    let relations = relations(coh, &degrees, &reps, &names)?;
    Ok(RingPresentation {
        ranks,
        generators,
        relations,
        products,
        applicability,
    })
}

fn basis_combination(c: &[BigInt], d: usize) -> String {
    let names: Vec<String> = (1..=c.len()).map(|i| format!("b{}_{}", 2 * d, i)).collect();
    let p = IntPolynomial::linear(c);
    p.display_with(&names)
}

fn relations(
    coh: &IntegralCohomology,
    degrees: &[usize],
    reps: &[IntPolynomial],
    names: &[String],
) -> Result<Vec<Relation>, GradedRingError> {
    let n = coh.fan.dim();
    let k = degrees.len();
    let top = n + degrees.iter().copied().max().unwrap_or(0);
    let mut found: Vec<(usize, IntPolynomial)> = Vec::new();
    for d in 1..=top {
        let monos = generator_monomials(degrees, d);
        if monos.is_empty() {
            continue;
        }
        let r = if d <= n { coh.piece(d)?.rank() } else { 0 };
        let images: Vec<Vec<BigInt>> = monos
            .iter()
            .map(|e| product_class(coh, reps, e, d))
            .collect::<Result<_, _>>()?;
        let images: Vec<Vec<BigInt>> = images
            .into_iter()
            .map(|v| if v.is_empty() { vec![BigInt::zero(); r] } else { v })
            .collect();
        let map = IntegerMatrix::from_columns(r, &images)?;
        let kernel = integer_kernel(&map);
        if kernel.rank() == 0 {
            continue;
        }
        let mut implied: Vec<Vec<BigInt>> = Vec::new();
        for (dr, rel) in &found {
            for e in generator_monomials(degrees, d - dr) {
                let shifted = rel.mul(&IntPolynomial::monomial(k, e, BigInt::one()));
                implied.push(coords_in_basis(&monos, &shifted).expect("same weighted degree"));
            }
        }
        let needed = {
            let inside: Vec<Vec<BigInt>> = implied
                .iter()
                .map(|v| kernel.coordinates(v).expect("implied relations lie in the kernel"))
                .collect();
            let q = IntegerMatrix::from_columns(kernel.rank(), &inside)?;
            let g = AbelianGroup::cokernel(&q);
            g.free_rank + g.torsion.len()
        };
        let mut chosen: Vec<Vec<BigInt>> = Vec::new();
        let mut span = implied.clone();
        for v in kernel.basis_vectors().into_iter().rev() {
            if LatticeBasis::spanned_by(monos.len(), &span)?.contains(&v) {
                continue;
            }
            span.push(v.clone());
            chosen.push(v);
        }
        if chosen.len() > needed {
            chosen = minimal_relation_generators(&kernel, &implied)?;
        }
        for v in chosen {
            let poly = polynomial_from_coords(k, &monos, &normalize_sign(v));
            found.push((d, poly));
        }
    }
    Ok(found
        .into_iter()
        .map(|(d, p)| Relation {
            degree: d,
            terms: p
                .terms()
                .map(|(e, c)| (e.clone(), crate::serde_big::Big(c.clone())))
                .collect(),
            text: p.display_with(names),
        })
        .collect())
}

/// Generators of kernel / implied from a Smith form, as kernel vectors.
fn minimal_relation_generators(
    kernel: &LatticeBasis,
    implied: &[Vec<BigInt>],
) -> Result<Vec<Vec<BigInt>>, GradedRingError> {
    let inside: Vec<Vec<BigInt>> = implied
        .iter()
        .map(|v| kernel.coordinates(v).expect("implied relations lie in the kernel"))
        .collect();
    let q = IntegerMatrix::from_columns(kernel.rank(), &inside)?;
    let snf = smith_normal_form(&q);
    let uinv = snf.u.unimodular_inverse()?;
    let mut out = Vec::new();
    for i in 0..kernel.rank() {
        if i >= snf.rank || !snf.d[(i, i)].is_one() {
            out.push(kernel.matrix().mul_vec(&uinv.column(i))?);
        }
    }
    Ok(out)
}

fn normalize_sign(v: Vec<BigInt>) -> Vec<BigInt> {
    match v.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => v.into_iter().map(|x| -x).collect(),
        _ => v,
    }
}

/// Echelon form of the integrality conditions, for reports.
pub fn lattice_rows(lattice: &LatticeBasis) -> Vec<Vec<BigInt>> {
    hermite_normal_form(&lattice.matrix().transpose()).h.to_rows()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn weighted_plane() -> Fan {
        Fan::new(2, vec![big(&[1, 0]), big(&[1, 5]), big(&[-1, -3])], vec![vec![0, 1], vec![0, 2], vec![1, 2]]).unwrap()
    }

    #[test]
    fn degree_one_lattice() {
        let fan = weighted_plane();
        let l1 = integrality_lattice(&fan, 1).unwrap();
        let mono = monomial_basis(&fan, 1);
        assert_eq!(mono, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert!(l1.contains(&big(&[15, 0, 0])));
        assert!(l1.contains(&big(&[0, 10, 0])));
        assert!(l1.contains(&big(&[0, 0, 6])));
        assert!(!l1.contains(&big(&[5, 0, 0])));
        for l in linear_forms(&fan) {
            assert!(l1.contains(&coords_in_basis(&mono, &l).unwrap()));
        }
    }

    #[test]
    fn degree_two_lattice() {
        let fan = weighted_plane();
        let mono = monomial_basis(&fan, 2);
        let l2 = integrality_lattice(&fan, 2).unwrap();
        let find = |e: &[u32]| mono.iter().position(|m| m == e).unwrap();
        let mut v = vec![BigInt::zero(); mono.len()];
        v[find(&[1, 1, 0])] = 25.into();
        assert!(l2.contains(&v));
        let mut v = vec![BigInt::zero(); mono.len()];
        v[find(&[1, 0, 1])] = 9.into();
        assert!(l2.contains(&v));
        let mut v = vec![BigInt::zero(); mono.len()];
        v[find(&[0, 1, 1])] = 4.into();
        assert!(l2.contains(&v));
        v[find(&[0, 1, 1])] = 2.into();
        assert!(!l2.contains(&v));
    }

    #[test]
    fn weighted_plane_ring() {
        let coh = IntegralCohomology::compute(&weighted_plane(), 2).unwrap();
        assert_eq!(coh.ranks(), vec![1, 1, 1]);
        assert!(!coh.has_torsion());
        let pres = ring_presentation(&coh, None).unwrap();
        assert_eq!(pres.generators.len(), 2);
        assert_eq!(pres.generators[0].degree, 1);
        assert_eq!(pres.generators[1].degree, 2);
        let texts: Vec<&str> = pres.relations.iter().map(|r| r.text.as_str()).collect();
        assert_eq!(texts.len(), 3);
        assert!(texts[0] == "w1^2 - 30*w2" || texts[0] == "w1^2 + 30*w2", "{texts:?}");
        assert_eq!(texts[1], "w1*w2");
        assert_eq!(texts[2], "w2^2");
    }

    #[test]
    fn smooth_plane() {
        let fan = Fan::new(2, vec![big(&[1, 0]), big(&[0, 1]), big(&[-1, -1])], vec![vec![0, 1], vec![0, 2], vec![1, 2]]).unwrap();
        let coh = IntegralCohomology::compute(&fan, 2).unwrap();
        assert_eq!(coh.ranks(), vec![1, 1, 1]);
        let pres = ring_presentation(&coh, None).unwrap();
        assert_eq!(pres.generators.len(), 1);
        let texts: Vec<&str> = pres.relations.iter().map(|r| r.text.as_str()).collect();
        assert_eq!(texts, vec!["w1^3"]);
    }
}
