//! Naive recomputations behind `--oracle`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use orbicoh::charpair::CharacteristicPair;
use orbicoh::evenness::{k_relatively_prime_naive, EvennessCertificate};
use orbicoh::gradedring::IntegralCohomology;
use orbicoh::poly::exponents_of_degree;
use orbicoh::polytope::SimplePolytope;
use orbicoh::retraction::{DimensionProfile, RetractionSequence};

use crate::report::Oracle;

fn cofactor_det(m: &[Vec<BigInt>]) -> BigInt {
    if m.is_empty() {
        return BigInt::one();
    }
    let mut total = BigInt::zero();
    for c in 0..m.len() {
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, x)| x.clone()).collect())
            .collect();
        let t = &m[0][c] * cofactor_det(&minor);
        if c % 2 == 0 {
            total += t;
        } else {
            total -= t;
        }
    }
    total
}

pub fn vertex_orders(pair: &CharacteristicPair) -> Oracle {
    let mut o = Oracle::default();
    for v in 0..pair.polytope().num_vertices() {
        let det = cofactor_det(&pair.vertex_matrix(v).to_rows()).abs();
        let order = pair.local_group_at_vertex(v).torsion_order();
        o.checks += 1;
        if det != order {
            o.discrepancies.push(format!("vertex {}: group order {order}, determinant {det}", v + 1));
        }
    }
    o
}

pub fn sequences(p: &Arc<SimplePolytope>, seqs: &[RetractionSequence], profile: Option<&DimensionProfile>) -> Oracle {
    let mut o = Oracle::default();
    for (i, s) in seqs.iter().enumerate() {
        o.checks += 1;
        if RetractionSequence::from_vertex_order(p.clone(), &s.vertex_order()).is_err() {
            o.discrepancies.push(format!("sequence {} does not replay", i + 1));
        }
        if let Some(profile) = profile {
            o.checks += 1;
            if s.dims() != profile.dims {
                o.discrepancies.push(format!("sequence {} departs from the dimension profile", i + 1));
            }
        }
    }
    o
}

pub fn collections(cert: &EvennessCertificate) -> Oracle {
    let mut o = Oracle::default();
    for (i, c) in cert.collections.iter().enumerate() {
        o.checks += 1;
        match k_relatively_prime_naive(&c.orders, c.k) {
            Ok(x) if x == c.relatively_prime => {}
            Ok(x) => o
                .discrepancies
                .push(format!("collection {}: subset search says {x}", i + 1)),
            Err(e) => o.discrepancies.push(format!("collection {}: {e}", i + 1)),
        }
    }
    o
}

fn rational_rank(rows: Vec<Vec<BigRational>>) -> usize {
    let mut rows = rows;
    let mut rank = 0;
    let cols = rows.first().map_or(0, |r| r.len());
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][c].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let f = &rows[r][c] / &pivot;
                for k in c..cols {
                    let t = &rows[rank][k] * &f;
                    rows[r][k] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Ranks against Gaussian elimination over ℚ on the face ring modulo linear forms.
pub fn ranks(coh: &IntegralCohomology) -> Oracle {
    let fan = coh.fan();
    let m = fan.num_rays();
    let faces = |d: usize| -> Vec<Vec<u32>> {
        exponents_of_degree(m, d as u32)
            .into_iter()
            .filter(|e| fan.is_face(&(0..m).filter(|&i| e[i] > 0).collect::<Vec<_>>()))
            .collect()
    };
    let mut o = Oracle::default();
    for piece in coh.pieces() {
        let d = piece.degree;
        let top = faces(d);
        let mut rows = Vec::new();
        if d > 0 {
            for low in faces(d - 1) {
                for j in 0..fan.dim() {
                    let mut row = vec![BigRational::zero(); top.len()];
                    for i in 0..m {
                        let mut e = low.clone();
                        e[i] += 1;
                        if let Some(k) = top.iter().position(|t| *t == e) {
                            row[k] += BigRational::from_integer(fan.rays()[i][j].clone());
                        }
                    }
                    rows.push(row);
                }
            }
        }
        let expected = top.len() - rational_rank(rows);
        o.checks += 1;
        if expected != piece.rank() {
            o.discrepancies
                .push(format!("H^{}: rank {}, rational elimination gives {expected}", 2 * d, piece.rank()));
        }
    }
    o
}
