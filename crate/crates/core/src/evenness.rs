//! The k-relatively-prime criterion and the evenness certificate built on it.
//!
//! A multiset S is k-relatively prime when no prime divides k or more of its
//! elements. The certificate checks, for every complex B of dimension j ≥ 2 on
//! a complete retraction, that the orders |G_E(v)| over the admissible free
//! vertices v of B (E the top face of B at v) are r_j-relatively prime.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::charpair::{CharPairError, CharacteristicPair, InducedPair};
use crate::polytope::{Face, Mask};
use crate::retraction::{RetractionAnalysis, RetractionError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvennessError {
    #[error("k = {k} exceeds the size {size} of the multiset")]
    KExceedsSize { k: usize, size: usize },
    #[error("k must be at least 1")]
    ZeroK,
    #[error(transparent)]
    CharPair(#[from] CharPairError),
    #[error(transparent)]
    Retraction(#[from] RetractionError),
}

const TRIAL_DIVISION_LIMIT: u64 = 1 << 32;

/// Greatest number of elements of `s` sharing a prime factor.
///
/// Zero counts as divisible by every prime. Works without factoring by
/// refining `s` to a coprime base: each base element b > 1 stands for the
/// primes dividing it, and those primes divide exactly the s with gcd(b, s) > 1.
pub fn max_prime_multiplicity(s: &[BigInt]) -> usize {
    let small: Option<Vec<u64>> = s
        .iter()
        .map(|x| x.abs().to_u64().filter(|&y| y <= TRIAL_DIVISION_LIMIT))
        .collect();
    if let Some(small) = small {
        return max_prime_multiplicity_u64(&small);
    }
    let zeros = s.iter().filter(|x| x.is_zero()).count();
    coprime_base(s)
        .iter()
        .map(|b| s.iter().filter(|x| !x.gcd(b).is_one()).count())
        .max()
        .unwrap_or(0)
        .max(zeros)
}

/// Trial-division version of [`max_prime_multiplicity`]; meant for small values.
pub fn max_prime_multiplicity_u64(s: &[u64]) -> usize {
    let zeros = s.iter().filter(|&&x| x == 0).count();
    let mut counts: Vec<(u64, usize)> = Vec::new();
    let mut bump = |p: u64| match counts.iter_mut().find(|(q, _)| *q == p) {
        Some((_, c)) => *c += 1,
        None => counts.push((p, 1)),
    };
    for &x in s {
        if x == 0 {
            continue;
        }
        let mut y = x;
        let mut p = 2u64;
        while p * p <= y {
            if y % p == 0 {
                bump(p);
                while y % p == 0 {
                    y /= p;
                }
            }
            p += if p == 2 { 1 } else { 2 };
        }
        if y > 1 {
            bump(y);
        }
    }
    let best = counts.iter().map(|&(_, c)| c).max().unwrap_or(0);
    if zeros == 0 {
        best
    } else {
        best + zeros
    }
}

/// Pairwise coprime numbers > 1 such that every nonzero element of `s` is a
/// product of their powers, up to sign.
pub fn coprime_base(s: &[BigInt]) -> Vec<BigInt> {
    let mut base: Vec<BigInt> = s
        .iter()
        .map(|x| x.abs())
        .filter(|x| !x.is_zero() && !x.is_one())
        .collect();
    'refine: loop {
        base.sort();
        base.dedup();
        for i in 0..base.len() {
            for j in i + 1..base.len() {
                let g = base[i].gcd(&base[j]);
                if !g.is_one() {
                    let a = &base[i] / &g;
                    let b = &base[j] / &g;
                    base.swap_remove(j);
                    base.swap_remove(i);
                    base.extend([g, a, b].into_iter().filter(|x| !x.is_one()));
                    continue 'refine;
                }
            }
        }
        return base;
    }
}

fn check_k(size: usize, k: usize) -> Result<(), EvennessError> {
    if k == 0 {
        return Err(EvennessError::ZeroK);
    }
    if k > size {
        return Err(EvennessError::KExceedsSize { k, size });
    }
    Ok(())
}

/// No prime divides k or more elements of `s`.
pub fn k_relatively_prime(s: &[BigInt], k: usize) -> Result<bool, EvennessError> {
    check_k(s.len(), k)?;
    Ok(max_prime_multiplicity(s) < k)
}

/// The same criterion by brute force: every k-element sub-multiset has gcd 1.
pub fn k_relatively_prime_naive(s: &[BigInt], k: usize) -> Result<bool, EvennessError> {
    check_k(s.len(), k)?;
    let mut chosen = Vec::with_capacity(k);
    Ok(!some_subset_shares_factor(s, k, 0, &mut chosen))
}

fn some_subset_shares_factor(s: &[BigInt], k: usize, start: usize, chosen: &mut Vec<usize>) -> bool {
    if chosen.len() == k {
        let g = chosen.iter().fold(BigInt::zero(), |g, &i| g.gcd(&s[i]));
        return !g.is_one();
    }
    for i in start..s.len() {
        if s.len() - i < k - chosen.len() {
            break;
        }
        chosen.push(i);
        if some_subset_shares_factor(s, k, i + 1, chosen) {
            chosen.pop();
            return true;
        }
        chosen.pop();
    }
    false
}

/// Indices of k elements sharing a prime factor, if any.
pub fn shared_factor_witness(s: &[BigInt], k: usize) -> Option<Vec<usize>> {
    if k == 0 || k > s.len() {
        return None;
    }
    let zeros: Vec<usize> = (0..s.len()).filter(|&i| s[i].is_zero()).collect();
    if zeros.len() >= k {
        return Some(zeros[..k].to_vec());
    }
    for b in coprime_base(s) {
        let hits: Vec<usize> = (0..s.len()).filter(|&i| !s[i].gcd(&b).is_one()).collect();
        if hits.len() >= k {
            return Some(hits[..k].to_vec());
        }
    }
    None
}

/// The orders attached to one complex of the retraction DAG.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Collection {
    pub dim: usize,
    /// Maximal faces of the complex, as 0-based facet lists.
    pub complex: Vec<Vec<usize>>,
    /// The admissible free vertices (0-based).
    pub vertices: Vec<usize>,
    /// |G_E(v)| from the unreduced induced vectors.
    #[serde(with = "crate::serde_big::vec")]
    pub orders: Vec<BigInt>,
    /// Orders from the primitive induced vectors, for diagnostics.
    #[serde(with = "crate::serde_big::vec")]
    pub reduced_orders: Vec<BigInt>,
    /// The r_j this collection is tested against.
    pub k: usize,
    pub relatively_prime: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    Satisfied,
    Violated {
        collection: usize,
        /// Vertices whose orders share a prime factor.
        witness: Vec<usize>,
        #[serde(with = "crate::serde_big")]
        common_factor: BigInt,
    },
    Inconclusive {
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvennessCertificate {
    pub verdict: Verdict,
    /// (j, r_j) for j = n..2.
    pub r_vector: Vec<(usize, usize)>,
    pub collections: Vec<Collection>,
    /// Complexes visited on complete retractions.
    pub complexes: usize,
    /// Locally admissible free vertices that cannot be followed to the end.
    pub dead_ends: usize,
}

impl EvennessCertificate {
    pub fn is_satisfied(&self) -> bool {
        self.verdict == Verdict::Satisfied
    }
}

/// One collection per complex of dimension ≥ 2 on a complete retraction.
pub fn collections(
    pair: &CharacteristicPair,
    analysis: &RetractionAnalysis,
) -> Result<Vec<Collection>, EvennessError> {
    let r: HashMap<usize, usize> = analysis.r_vector().into_iter().collect();
    let mut induced: HashMap<Mask, InducedPair> = HashMap::new();
    let mut out = Vec::new();
    for node in analysis.nodes() {
        let j = node.dim();
        if j < 2 {
            continue;
        }
        let mut orders = Vec::new();
        let mut reduced_orders = Vec::new();
        for &v in &node.admissible {
            let e: Face = crate::retraction::top_face_at(&node.complex, v).expect("admissible vertices are free");
            let (full, reduced) = if e.facets == 0 {
                let g = pair.local_group_at_vertex(v).torsion_order();
                (g.clone(), g)
            } else {
                if !induced.contains_key(&e.facets) {
                    induced.insert(e.facets, pair.induced_pair(&e)?);
                }
                let ind = &induced[&e.facets];
                (
                    ind.local_group_at(v)?.torsion_order(),
                    ind.reduced_local_group_at(v)?.torsion_order(),
                )
            };
            orders.push(full);
            reduced_orders.push(reduced);
        }
        let k = r[&j];
        let relatively_prime = k_relatively_prime(&orders, k)?;
        out.push(Collection {
            dim: j,
            complex: node
                .complex
                .maximal_faces()
                .iter()
                .map(|f| f.facet_list())
                .collect(),
            vertices: node.admissible.clone(),
            orders,
            reduced_orders,
            k,
            relatively_prime,
        });
    }
    Ok(out)
}

/// Runs the certificate. Polytopes above `max_vertices` vertices give an
/// inconclusive verdict instead of an error.
pub fn evenness_certificate(
    pair: &CharacteristicPair,
    max_vertices: usize,
) -> Result<EvennessCertificate, EvennessError> {
    pair.validate()?;
    let analysis = match RetractionAnalysis::explore(pair.polytope().clone(), max_vertices) {
        Ok(a) => a,
        Err(RetractionError::TooManyVertices { vertices, cap }) => {
            return Ok(EvennessCertificate {
                verdict: Verdict::Inconclusive {
                    reason: format!("{vertices} vertices exceed the enumeration cap of {cap}"),
                },
                r_vector: Vec::new(),
                collections: Vec::new(),
                complexes: 0,
                dead_ends: 0,
            });
        }
        Err(e) => return Err(e.into()),
    };
    let cols = collections(pair, &analysis)?;
    let verdict = match cols.iter().position(|c| !c.relatively_prime) {
        None => Verdict::Satisfied,
        Some(i) => {
            let c = &cols[i];
            let idx = shared_factor_witness(&c.orders, c.k).expect("violation has a witness");
            let common_factor = idx.iter().fold(BigInt::zero(), |g, &t| g.gcd(&c.orders[t]));
            Verdict::Violated {
                collection: i,
                witness: idx.iter().map(|&t| c.vertices[t]).collect(),
                common_factor,
            }
        }
    };
    Ok(EvennessCertificate {
        verdict,
        r_vector: analysis.r_vector(),
        collections: cols,
        complexes: analysis.nodes().len(),
        dead_ends: analysis.nodes().iter().map(|n| n.dead_ends.len()).sum(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::SimplePolytope;
    use crate::retraction::DEFAULT_MAX_VERTICES;
    use std::sync::Arc;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_multisets() {
        assert!(k_relatively_prime(&big(&[2, 3, 5]), 2).unwrap());
        assert!(!k_relatively_prime(&big(&[2, 4, 5]), 2).unwrap());
        assert!(k_relatively_prime(&big(&[6, 10, 15]), 3).unwrap());
        assert!(!k_relatively_prime(&big(&[6, 10, 15]), 2).unwrap());
        assert!(k_relatively_prime(&big(&[1, 1]), 1).unwrap());
        assert!(!k_relatively_prime(&big(&[0, 1]), 1).unwrap());
        assert_eq!(
            k_relatively_prime(&big(&[2, 3]), 3),
            Err(EvennessError::KExceedsSize { k: 3, size: 2 })
        );
    }

    #[test]
    fn big_values_use_coprime_base() {
        let p = BigInt::from(1_000_000_007u64) * BigInt::from(998_244_353u64) * BigInt::from(3);
        let s = vec![p.clone(), BigInt::from(998_244_353u64), BigInt::from(7), p * 5];
        assert_eq!(max_prime_multiplicity(&s), 3);
        assert!(k_relatively_prime(&s, 4).unwrap());
        assert!(!k_relatively_prime_naive(&s, 3).unwrap());
        assert_eq!(shared_factor_witness(&s, 3), Some(vec![0, 1, 3]));
    }

    #[test]
    fn weighted_triangle() {
        let tri = Arc::new(SimplePolytope::simplex(2));
        let pair = CharacteristicPair::checked(tri.clone(), vec![big(&[1, 0]), big(&[1, 5]), big(&[-1, -3])]).unwrap();
        let mut orders = pair.vertex_orders();
        orders.sort();
        assert_eq!(orders, big(&[2, 3, 5]));
        let cert = evenness_certificate(&pair, DEFAULT_MAX_VERTICES).unwrap();
        assert!(cert.is_satisfied());

        let even = CharacteristicPair::checked(tri, vec![big(&[1, 0]), big(&[-1, 2]), big(&[-1, -2])]).unwrap();
        let cert = evenness_certificate(&even, DEFAULT_MAX_VERTICES).unwrap();
        match cert.verdict {
            Verdict::Violated { common_factor, witness, .. } => {
                assert_eq!(common_factor, BigInt::from(2));
                assert_eq!(witness.len(), 3);
            }
            v => panic!("expected a violation, got {v:?}"),
        }
    }

    #[test]
    fn polygon_reduces_to_gcd_of_all_orders() {
        let hexagon = Arc::new(SimplePolytope::polygon(6).unwrap());
        let rays = [[1, 0], [1, 1], [0, 1], [-1, 0], [-1, -1], [0, -1]];
        let pair = CharacteristicPair::checked(hexagon, rays.iter().map(|r| big(r)).collect()).unwrap();
        let cert = evenness_certificate(&pair, DEFAULT_MAX_VERTICES).unwrap();
        assert_eq!(cert.r_vector, vec![(2, 6)]);
        assert_eq!(cert.collections.len(), 1);
        assert!(cert.is_satisfied());
    }

    #[test]
    fn cap_gives_inconclusive() {
        let tri = Arc::new(SimplePolytope::simplex(2));
        let pair = CharacteristicPair::checked(tri, vec![big(&[1, 0]), big(&[0, 1]), big(&[-1, -1])]).unwrap();
        let cert = evenness_certificate(&pair, 2).unwrap();
        assert!(matches!(cert.verdict, Verdict::Inconclusive { .. }));
    }
}
