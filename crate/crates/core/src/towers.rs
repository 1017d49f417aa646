//! Towers of weighted projective spaces over products of simplices, and the
//! two-stage orbifold Hirzebruch surfaces.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::charpair::{primitivize, CharPairError, CharacteristicPair};
use crate::evenness::{evenness_certificate, EvennessCertificate, EvennessError};
use crate::fan::{integrality_matrix, pair_to_fan, Fan, FanError, IntegralityMatrix};
use crate::gradedring::{ring_presentation, GradedRingError, IntegralCohomology, RingPresentation};
use crate::linalg::{integer_kernel, solve_diophantine, IntegerMatrix, LinalgError};
use crate::poly::IntPolynomial;
use crate::polytope::{PolytopeError, SimplePolytope};
use crate::serde_big::Big;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TowerError {
    #[error("a tower needs at least one stage")]
    NoStages,
    #[error("stage {stage}: a weight vector needs at least two entries")]
    ShortWeight { stage: usize },
    #[error("stage {stage}: weights must be positive")]
    NonPositiveWeight { stage: usize },
    #[error("stage {stage}: weights have gcd {gcd}, expected 1")]
    WeightGcd { stage: usize, gcd: BigInt },
    #[error("twist key {0:?} is not of the form \"i,j\"")]
    BadTwistKey(String),
    #[error("twist ({i},{j}) needs 1 <= j < i <= {stages}")]
    TwistOutOfRange { i: usize, j: usize, stages: usize },
    #[error("twist ({i},{j}) has {found} entries, expected {expected}")]
    TwistLength { i: usize, j: usize, expected: usize, found: usize },
    #[error("stage {stage} out of range 2..={stages}")]
    StageOutOfRange { stage: usize, stages: usize },
    #[error("{0}")]
    Hirzebruch(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    CharPair(#[from] CharPairError),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Evenness(#[from] EvennessError),
    #[error(transparent)]
    GradedRing(#[from] GradedRingError),
}

/// JSON form: `{"weights": [[...], ...], "twists": {"i,j": [...]}}`, stages
/// numbered from 1. Missing twists are zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerSpec {
    pub weights: Vec<Vec<Big>>,
    #[serde(default)]
    pub twists: BTreeMap<String, Vec<Big>>,
}

/// Weights χ^i and twists c^i_{•,j}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tower {
    weights: Vec<Vec<BigInt>>,
    /// Keyed by (i, j), 1-based, j < i.
    twists: BTreeMap<(usize, usize), Vec<BigInt>>,
}

impl Tower {
    pub fn new(
        weights: Vec<Vec<BigInt>>,
        twists: BTreeMap<(usize, usize), Vec<BigInt>>,
    ) -> Result<Self, TowerError> {
        if weights.is_empty() {
            return Err(TowerError::NoStages);
        }
        for (s, w) in weights.iter().enumerate() {
            let stage = s + 1;
            if w.len() < 2 {
                return Err(TowerError::ShortWeight { stage });
            }
            if w.iter().any(|x| !x.is_positive()) {
                return Err(TowerError::NonPositiveWeight { stage });
            }
            let gcd = w.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            if !gcd.is_one() {
                return Err(TowerError::WeightGcd { stage, gcd });
            }
        }
        let k = weights.len();
        for (&(i, j), c) in &twists {
            if !(1 <= j && j < i && i <= k) {
                return Err(TowerError::TwistOutOfRange { i, j, stages: k });
            }
            if c.len() != weights[i - 1].len() {
                return Err(TowerError::TwistLength {
                    i,
                    j,
                    expected: weights[i - 1].len(),
                    found: c.len(),
                });
            }
        }
        Ok(Tower { weights, twists })
    }

    pub fn from_spec(spec: &TowerSpec) -> Result<Self, TowerError> {
        let weights = spec
            .weights
            .iter()
            .map(|w| w.iter().map(|x| x.0.clone()).collect())
            .collect();
        let mut twists = BTreeMap::new();
        for (key, v) in &spec.twists {
            let parsed: Vec<usize> = key
                .split(',')
                .map(|s| s.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|_| TowerError::BadTwistKey(key.clone()))?;
            let [i, j] = parsed[..] else {
                return Err(TowerError::BadTwistKey(key.clone()));
            };
            twists.insert((i, j), v.iter().map(|x| x.0.clone()).collect());
        }
        Tower::new(weights, twists)
    }

    pub fn to_spec(&self) -> TowerSpec {
        TowerSpec {
            weights: self
                .weights
                .iter()
                .map(|w| w.iter().cloned().map(Big).collect())
                .collect(),
            twists: self
                .twists
                .iter()
                .filter(|(_, c)| c.iter().any(|x| !x.is_zero()))
                .map(|((i, j), c)| (format!("{i},{j}"), c.iter().cloned().map(Big).collect()))
                .collect(),
        }
    }

    pub fn stages(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self, i: usize) -> &[BigInt] {
        &self.weights[i - 1]
    }

    /// n_i, the dimension of the i-th simplex.
    pub fn stage_dim(&self, i: usize) -> usize {
        self.weights[i - 1].len() - 1
    }

    /// c^i_{•,j}; zero when not given.
    pub fn twist(&self, i: usize, j: usize) -> Vec<BigInt> {
        self.twists
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(|| vec![BigInt::zero(); self.weights[i - 1].len()])
    }

    /// The first `i` stages.
    pub fn truncate(&self, i: usize) -> Tower {
        Tower {
            weights: self.weights[..i].to_vec(),
            twists: self
                .twists
                .iter()
                .filter(|(&(a, _), _)| a <= i)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    fn col_offset(&self, i: usize) -> usize {
        self.weights[..i - 1].iter().map(Vec::len).sum()
    }

    fn row_offset(&self, i: usize) -> usize {
        self.weights[..i - 1].iter().map(|w| w.len() - 1).sum()
    }

    /// ∏ Δ^{n_i}, facets of earlier stages first.
    pub fn polytope(&self) -> Result<SimplePolytope, TowerError> {
        let mut p = SimplePolytope::simplex(self.stage_dim(1));
        for i in 2..=self.stages() {
            p = p.product(&SimplePolytope::simplex(self.stage_dim(i)))?;
        }
        Ok(p)
    }
}

/// Φ_k: block lower triangular, Σ(n_i + 1) × k.
pub fn phi_matrix(tower: &Tower) -> IntegerMatrix {
    let k = tower.stages();
    let rows: usize = tower.weights.iter().map(Vec::len).sum();
    let mut phi = IntegerMatrix::zeros(rows, k);
    for i in 1..=k {
        let off = tower.col_offset(i);
        for (r, x) in tower.weights(i).iter().enumerate() {
            phi[(off + r, i - 1)] = x.clone();
        }
        for j in 1..i {
            for (r, x) in tower.twist(i, j).into_iter().enumerate() {
                phi[(off + r, j - 1)] = x;
            }
        }
    }
    phi
}

/// n × (n+1) matrix whose rows are the echelon basis of {v : v · χ = 0}.
pub fn wps_char_matrix(chi: &[BigInt]) -> Result<IntegerMatrix, TowerError> {
    if chi.len() < 2 {
        return Err(TowerError::ShortWeight { stage: 1 });
    }
    let gcd = chi.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !gcd.is_one() {
        return Err(TowerError::WeightGcd { stage: 1, gcd });
    }
    let row = IntegerMatrix::try_from_rows(vec![chi.to_vec()])?;
    Ok(integer_kernel(&row).matrix().transpose())
}

/// Λ with Λ·Φ_k = 0, plus its column-primitive form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerCharMatrix {
    pub raw: IntegerMatrix,
    /// Columns of `raw` divided by their contents.
    pub primitive: IntegerMatrix,
    /// Contents of the columns of `raw`.
    pub multipliers: Vec<BigInt>,
}

/// Diagonal blocks from [`wps_char_matrix`]; the block B^i_t is solved row by
/// row from B^i_t χ^t = -(Σ_{t<j<i} B^i_j c^j_{•,t} + Λ_i c^i_{•,t}) for
/// t = i-1 down to 1.
pub fn tower_char_matrix(tower: &Tower) -> Result<TowerCharMatrix, TowerError> {
    let k = tower.stages();
    let rows: usize = (1..=k).map(|i| tower.stage_dim(i)).sum();
    let cols: usize = tower.weights.iter().map(Vec::len).sum();
    let mut lam = IntegerMatrix::zeros(rows, cols);
    for i in 1..=k {
        let ro = tower.row_offset(i);
        let co = tower.col_offset(i);
        let ni = tower.stage_dim(i);
        let diag = wps_char_matrix(tower.weights(i))?;
        for r in 0..ni {
            for c in 0..=ni {
                lam[(ro + r, co + c)] = diag[(r, c)].clone();
            }
        }
        for t in (1..i).rev() {
            let tco = tower.col_offset(t);
            for r in 0..ni {
                // Σ_{t<j≤i} (row r of block (i,j)) · c^j_{•,t}, where block (i,i) is Λ_i.
                let mut acc = BigInt::zero();
                for j in (t + 1)..=i {
                    let jco = tower.col_offset(j);
                    for (s, x) in tower.twist(j, t).iter().enumerate() {
                        acc += &lam[(ro + r, jco + s)] * x;
                    }
                }
                let b = solve_diophantine(tower.weights(t), &-acc)?;
                for (s, x) in b.into_iter().enumerate() {
                    lam[(ro + r, tco + s)] = x;
                }
            }
        }
    }
    let check = lam.mul(&phi_matrix(tower))?;
    assert!(
        check.to_rows().iter().flatten().all(Zero::is_zero),
        "Λ·Φ must vanish"
    );
    let mut multipliers = Vec::with_capacity(cols);
    let mut prim = Vec::with_capacity(cols);
    for c in 0..cols {
        let (m, v) = primitivize(&lam.column(c));
        multipliers.push(m);
        prim.push(v);
    }
    Ok(TowerCharMatrix {
        primitive: IntegerMatrix::from_columns(rows, &prim)?,
        raw: lam,
        multipliers,
    })
}

impl TowerCharMatrix {
    /// The characteristic pair on ∏ Δ^{n_i} given by the primitive columns.
    pub fn pair(&self, tower: &Tower) -> Result<CharacteristicPair, TowerError> {
        Ok(CharacteristicPair::checked(
            Arc::new(tower.polytope()?),
            self.primitive.to_columns(),
        )?)
    }

    /// Orders |det| of the raw vertex matrices: the orders of the stabilizers
    /// at the fixed points of the quotient.
    pub fn raw_vertex_orders(&self, tower: &Tower) -> Result<Vec<BigInt>, TowerError> {
        let pair = CharacteristicPair::new(Arc::new(tower.polytope()?), self.raw.to_columns())?;
        Ok((0..pair.polytope().num_vertices())
            .map(|v| pair.vertex_matrix(v).determinant().expect("square").abs())
            .collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibrationCheck {
    pub stage: usize,
    /// lcm of the stabilizer orders over the base.
    #[serde(with = "crate::serde_big")]
    pub ell: BigInt,
    /// Every twist into this stage is divisible by `ell`.
    pub sufficient_condition_holds: bool,
    /// (α, β, c^i_{α,β}) for the twist entries not divisible by `ell`; α is 0-based, β 1-based.
    pub offending: Vec<(usize, usize, Big)>,
}

impl FibrationCheck {
    pub fn verdict(&self) -> &'static str {
        if self.sufficient_condition_holds {
            "genuine fibration"
        } else {
            "not genuine (sufficient condition fails)"
        }
    }
}

/// Divisibility test for the projection from stage i to stage i-1. The lcm
/// runs over the fixed points of stage i-1: every stabilizer is a subgroup of
/// a fixed-point stabilizer.
pub fn fibration_check(tower: &Tower, i: usize) -> Result<FibrationCheck, TowerError> {
    let k = tower.stages();
    if i < 2 || i > k {
        return Err(TowerError::StageOutOfRange { stage: i, stages: k });
    }
    let base = tower.truncate(i - 1);
    let orders = tower_char_matrix(&base)?.raw_vertex_orders(&base)?;
    let ell = orders.iter().fold(BigInt::one(), |l, x| l.lcm(x));
    let mut offending = Vec::new();
    for beta in 1..i {
        for (alpha, c) in tower.twist(i, beta).into_iter().enumerate() {
            if !c.is_multiple_of(&ell) {
                offending.push((alpha, beta, Big(c)));
            }
        }
    }
    Ok(FibrationCheck {
        stage: i,
        ell,
        sufficient_condition_holds: offending.is_empty(),
        offending,
    })
}

/// Either the full two-stage data or (α, β) directly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HirzebruchParams {
    Full {
        a1: Big,
        b1: Big,
        a2: Big,
        b2: Big,
        c: Big,
        d: Big,
    },
    Reduced {
        alpha: Big,
        beta: Big,
    },
}

impl HirzebruchParams {
    pub fn full(a1: i64, b1: i64, a2: i64, b2: i64, c: i64, d: i64) -> Self {
        HirzebruchParams::Full {
            a1: Big(a1.into()),
            b1: Big(b1.into()),
            a2: Big(a2.into()),
            b2: Big(b2.into()),
            c: Big(c.into()),
            d: Big(d.into()),
        }
    }

    pub fn reduced(alpha: i64, beta: i64) -> Self {
        HirzebruchParams::Reduced {
            alpha: Big(alpha.into()),
            beta: Big(beta.into()),
        }
    }

    /// The two-stage tower for full parameters.
    pub fn tower(&self) -> Result<Option<Tower>, TowerError> {
        match self {
            HirzebruchParams::Full { a1, b1, a2, b2, c, d } => {
                let mut twists = BTreeMap::new();
                twists.insert((2, 1), vec![c.0.clone(), d.0.clone()]);
                Ok(Some(Tower::new(
                    vec![vec![a1.0.clone(), b1.0.clone()], vec![a2.0.clone(), b2.0.clone()]],
                    twists,
                )?))
            }
            HirzebruchParams::Reduced { .. } => Ok(None),
        }
    }

    /// (α, β).
    pub fn alpha_beta(&self) -> Result<(BigInt, BigInt), TowerError> {
        match self {
            HirzebruchParams::Full { a1, b1, a2, b2, c, d } => {
                for (name, x, y) in [("a1, b1", a1, b1), ("a2, b2", a2, b2)] {
                    if !x.0.is_positive() || !y.0.is_positive() {
                        return Err(TowerError::Hirzebruch(format!("{name} must be positive")));
                    }
                    if !x.0.gcd(&y.0).is_one() {
                        return Err(TowerError::Hirzebruch(format!("gcd({name}) must be 1")));
                    }
                }
                let dd = &a2.0 * &d.0 - &b2.0 * &c.0;
                let g = b1.0.gcd(&dd);
                Ok((&b1.0 / &g, dd / g))
            }
            HirzebruchParams::Reduced { alpha, beta } => {
                if !alpha.0.is_positive() {
                    return Err(TowerError::Hirzebruch("alpha must be positive".into()));
                }
                Ok((alpha.0.clone(), beta.0.clone()))
            }
        }
    }
}

/// The matrix [[b1, -a1, 0, 0], [a2 d - b2 c, 0, a1 b2, -a1 a2]].
pub fn packed_lambda(a1: &BigInt, b1: &BigInt, a2: &BigInt, b2: &BigInt, c: &BigInt, d: &BigInt) -> IntegerMatrix {
    let z = BigInt::zero();
    IntegerMatrix::try_from_rows(vec![
        vec![b1.clone(), -a1, z.clone(), z.clone()],
        vec![a2 * d - b2 * c, z, a1 * b2, -(a1 * a2)],
    ])
    .expect("rectangular")
}

/// Λ' = [[α, -1, 0, 0], [β, 0, 1, -1]] on the square.
pub fn reduced_hirzebruch_pair(alpha: &BigInt, beta: &BigInt) -> Result<CharacteristicPair, TowerError> {
    let square = SimplePolytope::simplex(1).product(&SimplePolytope::simplex(1))?;
    let z = BigInt::zero;
    let one = BigInt::one;
    let cols = vec![
        vec![alpha.clone(), beta.clone()],
        vec![-one(), z()],
        vec![z(), one()],
        vec![z(), -one()],
    ];
    Ok(CharacteristicPair::checked(Arc::new(square), cols)?)
}

/// Whether x = αx1, y = αx4, z = x2x4 form a basis in degrees 2 and 4 and
/// satisfy x² = 0, xy = αz, y² = αβz.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedPresentationCheck {
    pub basis: bool,
    pub x_squared: bool,
    pub xy_alpha_z: bool,
    pub y_squared_alpha_beta_z: bool,
}

impl NamedPresentationCheck {
    pub fn holds(&self) -> bool {
        self.basis && self.x_squared && self.xy_alpha_z && self.y_squared_alpha_beta_z
    }
}

pub fn check_named_presentation(
    coh: &IntegralCohomology,
    alpha: &BigInt,
    beta: &BigInt,
) -> Result<NamedPresentationCheck, TowerError> {
    let x1 = IntPolynomial::variable(4, 0);
    let x2 = IntPolynomial::variable(4, 1);
    let x4 = IntPolynomial::variable(4, 3);
    let x = x1.scale(alpha);
    let y = x4.scale(alpha);
    let z = x2.mul(&x4);
    let (_, cx) = coh.class_of(&x)?;
    let (_, cy) = coh.class_of(&y)?;
    let (_, cz) = coh.class_of(&z)?;
    let basis = cx.len() == 2
        && cz.len() == 1
        && (&cx[0] * &cy[1] - &cx[1] * &cy[0]).abs().is_one()
        && cz[0].abs().is_one();
    let (_, xx) = coh.class_of(&x.mul(&x))?;
    let (_, xy) = coh.class_of(&x.mul(&y))?;
    let (_, yy) = coh.class_of(&y.mul(&y))?;
    let scaled = |k: &BigInt| cz.iter().map(|c| c * k).collect::<Vec<_>>();
    Ok(NamedPresentationCheck {
        basis,
        x_squared: xx.iter().all(Zero::is_zero),
        xy_alpha_z: xy == scaled(alpha),
        y_squared_alpha_beta_z: yy == scaled(&(alpha * beta)),
    })
}

#[derive(Clone, Debug)]
pub struct HirzebruchReport {
    pub alpha: BigInt,
    pub beta: BigInt,
    /// Present for full parameters.
    pub tower: Option<Tower>,
    pub packed_lambda: Option<IntegerMatrix>,
    pub tower_matrix: Option<TowerCharMatrix>,
    pub fibration: Option<FibrationCheck>,
    pub pair: CharacteristicPair,
    pub fan: Fan,
    pub integrality: IntegralityMatrix,
    pub certificate: EvennessCertificate,
    pub cohomology: IntegralCohomology,
    pub presentation: RingPresentation,
    pub named: NamedPresentationCheck,
}

pub fn hirzebruch(params: &HirzebruchParams, max_vertices: usize) -> Result<HirzebruchReport, TowerError> {
    let (alpha, beta) = params.alpha_beta()?;
    let tower = params.tower()?;
    let (packed, tower_matrix, fibration) = match (&tower, params) {
        (Some(t), HirzebruchParams::Full { a1, b1, a2, b2, c, d }) => (
            Some(packed_lambda(&a1.0, &b1.0, &a2.0, &b2.0, &c.0, &d.0)),
            Some(tower_char_matrix(t)?),
            Some(fibration_check(t, 2)?),
        ),
        _ => (None, None, None),
    };
    let pair = reduced_hirzebruch_pair(&alpha, &beta)?;
    let fan = pair_to_fan(&pair)?;
    let integrality = integrality_matrix(&fan)?;
    let certificate = evenness_certificate(&pair, max_vertices)?;
    let cohomology = IntegralCohomology::compute(&fan, 2)?;
    let presentation = ring_presentation(&cohomology, Some(&certificate))?;
    let named = check_named_presentation(&cohomology, &alpha, &beta)?;
    Ok(HirzebruchReport {
        alpha,
        beta,
        tower,
        packed_lambda: packed,
        tower_matrix,
        fibration,
        pair,
        fan,
        integrality,
        certificate,
        cohomology,
        presentation,
        named,
    })
}
