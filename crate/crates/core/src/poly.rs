//! Sparse multivariate polynomials with exact coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Exponent = Vec<u32>;

/// Coefficient ring: integers or rationals.
pub trait Coefficient:
    Clone + PartialEq + Zero + One + std::ops::Neg<Output = Self> + fmt::Display + Signed
{
}

impl Coefficient for BigInt {}
impl Coefficient for BigRational {}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial<C> {
    nvars: usize,
    terms: BTreeMap<Exponent, C>,
}

pub type IntPolynomial = Polynomial<BigInt>;
pub type RatPolynomial = Polynomial<BigRational>;

impl<C: Coefficient> Polynomial<C> {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C::one())
    }

    pub fn monomial(nvars: usize, exponent: Exponent, c: C) -> Self {
        assert_eq!(exponent.len(), nvars, "exponent length");
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exponent, c);
        }
        p
    }

    pub fn variable(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, e, C::one())
    }

    /// Σ coeffs[i] x_i.
    pub fn linear(coeffs: &[C]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(unit(n, i), c.clone());
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponent, C)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length");
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, e: &[u32]) -> C {
        self.terms.get(e).cloned().unwrap_or_else(C::zero)
    }

    pub fn add_term(&mut self, e: Exponent, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(x) => {
                *x = x.clone() + c;
                if x.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    /// Total degree when homogeneous; `None` for the zero polynomial or mixed degrees.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let d = degs.next()?;
        degs.all(|x| x == d).then_some(d)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = self.clone();
        for (e, c) in &other.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-C::one()))
    }

    pub fn scale(&self, k: &C) -> Self {
        if k.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.clone() * k.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "variable count");
        let mut p = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1.clone() * c2.clone());
            }
        }
        p
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Replaces x_i by `images[i]`; all images share one variable count.
    pub fn substitute(&self, images: &[Polynomial<C>], target_vars: usize) -> Polynomial<C> {
        assert_eq!(images.len(), self.nvars, "one image per variable");
        let mut out = Polynomial::zero(target_vars);
        let mut powers: Vec<Vec<Polynomial<C>>> = images
            .iter()
            .map(|p| vec![Polynomial::one(target_vars), p.clone()])
            .collect();
        for (e, c) in &self.terms {
            let mut term = Polynomial::constant(target_vars, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().expect("nonempty").mul(&images[i]);
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][k as usize]);
            }
            out = out.add(&term);
        }
        out
    }

    /// Keeps only the terms accepted by `keep`.
    pub fn retain(&self, mut keep: impl FnMut(&Exponent) -> bool) -> Self {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(e))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Renders with the given variable names, highest degree first and
    /// lexicographically descending within a degree.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut terms: Vec<(&Exponent, &C)> = self.terms.iter().collect();
        terms.sort_by(|a, b| graded_lex_desc(a.0, b.0));
        let mut out = String::new();
        for (i, (e, c)) in terms.into_iter().enumerate() {
            let mono = monomial_string(e, names);
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            match (mono.is_empty(), abs.is_one()) {
                (true, _) => out.push_str(&abs.to_string()),
                (false, true) => out.push_str(&mono),
                (false, false) => out.push_str(&format!("{abs}*{mono}")),
            }
        }
        out
    }
}

impl Polynomial<BigInt> {
    pub fn to_rational(&self) -> RatPolynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), BigRational::from_integer(c.clone())))
                .collect(),
        }
    }
}

impl Polynomial<BigRational> {
    /// The integer polynomial with the same coefficients, if all are integral.
    pub fn to_integer(&self) -> Option<IntPolynomial> {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| c.is_integer().then(|| (e.clone(), c.to_integer())))
            .collect::<Option<BTreeMap<_, _>>>()?;
        Some(Polynomial {
            nvars: self.nvars,
            terms,
        })
    }
}

pub fn unit(n: usize, i: usize) -> Exponent {
    let mut e = vec![0; n];
    e[i] = 1;
    e
}

/// Higher total degree first, then lexicographically larger exponent first.
pub fn graded_lex_desc(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    db.cmp(&da).then_with(|| b.cmp(a))
}

/// All exponent vectors in `nvars` variables of total degree `d`, in graded-lex
/// descending order (x_1^d first).
pub fn exponents_of_degree(nvars: usize, d: u32) -> Vec<Exponent> {
    fn go(i: usize, left: u32, cur: &mut Exponent, out: &mut Vec<Exponent>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for k in (0..=left).rev() {
            cur[i] = k;
            go(i + 1, left - k, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(0, d, &mut vec![0; nvars], &mut out);
    out
}

pub fn monomial_string(e: &[u32], names: &[String]) -> String {
    e.iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| {
            if k == 1 {
                names[i].clone()
            } else {
                format!("{}^{}", names[i], k)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// `prefix1, prefix2, ...`
pub fn variable_names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

impl<C: Coefficient> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&variable_names("x", self.nvars)))
    }
}
