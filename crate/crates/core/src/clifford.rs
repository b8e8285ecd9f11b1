//! Exact Clifford algebra of a (not necessarily orthogonal) symmetric form,
//! and the bracket formula for bilinear elements `Σ X_AB S^αβ φ^A_α φ^B_β`.
//!
//! Generators obey `φ_a φ_b + φ_b φ_a = q_ab`. Elements are sparse maps from
//! normal-ordered monomials (bitmasks, increasing generator order) to
//! rational coefficients.

use std::collections::BTreeMap;
use std::ops::{Add, Sub};

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::exactnum::{QMatrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliffordError {
    #[error("form must be a symmetric square matrix")]
    BadForm,
    #[error("at most 63 generators are supported, got {0}")]
    TooManyGenerators(usize),
    #[error("elements belong to algebras with {0} and {1} generators")]
    AlgebraMismatch(usize, usize),
    #[error("X⊗S is not anti-symmetric at ({row}, {col})")]
    Hypothesis { row: usize, col: usize },
    #[error("matrix dimensions do not match the algebra ({0})")]
    Dimension(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Element {
    generators: usize,
    terms: BTreeMap<u64, Rational>,
}

impl Element {
    pub fn terms(&self) -> &BTreeMap<u64, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, monomial: u64) -> Rational {
        self.terms.get(&monomial).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, monomial: u64, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(monomial).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&monomial);
        }
    }

    fn add_scaled(&mut self, other: &Element, c: &Rational) {
        for (m, v) in &other.terms {
            self.add_term(*m, &(v * c));
        }
    }

    pub fn scale(&self, c: &Rational) -> Element {
        let mut out = Element { generators: self.generators, terms: BTreeMap::new() };
        out.add_scaled(self, c);
        out
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::one());
        out
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::from_integer(-1));
        out
    }
}

/// Generator indices of a monomial, increasing.
pub fn monomial_generators(mask: u64) -> Vec<usize> {
    (0..64).filter(|b| mask & (1u64 << b) != 0).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliffordAlgebra {
    q: QMatrix,
}

impl CliffordAlgebra {
    pub fn new(q: QMatrix) -> Result<Self, CliffordError> {
        if !q.is_symmetric() {
            return Err(CliffordError::BadForm);
        }
        if q.rows() > 63 {
            return Err(CliffordError::TooManyGenerators(q.rows()));
        }
        Ok(Self { q })
    }

    /// Algebra of `V ⊗ S` with form `q1 ⊗ q2`; generator `(A, α)` has index `A*l + α`.
    pub fn tensor(q1: &QMatrix, q2: &QMatrix) -> Result<Self, CliffordError> {
        Self::new(q1.kron(q2))
    }

    pub fn generators(&self) -> usize {
        self.q.rows()
    }

    pub fn form(&self) -> &QMatrix {
        &self.q
    }

    pub fn zero(&self) -> Element {
        Element { generators: self.generators(), terms: BTreeMap::new() }
    }

    pub fn scalar(&self, c: Rational) -> Element {
        let mut e = self.zero();
        e.add_term(0, &c);
        e
    }

    pub fn generator(&self, i: usize) -> Element {
        assert!(i < self.generators());
        let mut e = self.zero();
        e.add_term(1u64 << i, &Rational::one());
        e
    }

    /// Normal-ordered product of a monomial with one generator on the right.
    fn monomial_times_generator(&self, mask: u64, g: usize) -> Element {
        let mut out = self.zero();
        if mask == 0 {
            out.add_term(1u64 << g, &Rational::one());
            return out;
        }
        let last = 63 - mask.leading_zeros() as usize;
        let rest = mask & !(1u64 << last);
        match last.cmp(&g) {
            std::cmp::Ordering::Less => out.add_term(mask | (1u64 << g), &Rational::one()),
            std::cmp::Ordering::Equal => out.add_term(rest, &(&self.q[(g, g)] * &Rational::new(1, 2))),
            std::cmp::Ordering::Greater => {
                // w φ_last φ_g = q(last, g) w − (w φ_g) φ_last, and every
                // monomial of w φ_g only uses generators below `last`
                out.add_term(rest, &self.q[(last, g)]);
                for (m, c) in &self.monomial_times_generator(rest, g).terms {
                    out.add_term(m | (1u64 << last), &-c);
                }
            }
        }
        out
    }

    pub fn mul(&self, x: &Element, y: &Element) -> Result<Element, CliffordError> {
        for e in [x, y] {
            if e.generators != self.generators() {
                return Err(CliffordError::AlgebraMismatch(e.generators, self.generators()));
            }
        }
        let mut out = self.zero();
        for (ym, yc) in &y.terms {
            let gens = monomial_generators(*ym);
            let mut partial = x.clone();
            for &g in &gens {
                let mut next = self.zero();
                for (m, c) in &partial.terms {
                    next.add_scaled(&self.monomial_times_generator(*m, g), c);
                }
                partial = next;
            }
            out.add_scaled(&partial, yc);
        }
        Ok(out)
    }

    pub fn commutator(&self, x: &Element, y: &Element) -> Result<Element, CliffordError> {
        Ok(&self.mul(x, y)? - &self.mul(y, x)?)
    }

    /// `Σ_ab M[a][b] φ_a φ_b`.
    pub fn bilinear(&self, m: &QMatrix) -> Element {
        let mut out = self.zero();
        for a in 0..m.rows() {
            for b in 0..m.cols() {
                let c = &m[(a, b)];
                if c.is_zero() {
                    continue;
                }
                let prod = self.monomial_times_generator(1u64 << a, b);
                out.add_scaled(&prod, c);
            }
        }
        out
    }
}

/// Result of comparing both sides of the bracket formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub lhs_terms: usize,
    pub rhs_terms: usize,
    /// Monomial (generator list) and coefficient of `lhs − rhs`, if nonzero.
    pub first_difference: Option<(Vec<usize>, String)>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.first_difference.is_none()
    }
}

fn check_antisymmetric_tensor(x: &QMatrix, s: &QMatrix) -> Result<(), CliffordError> {
    let t = x.kron(s);
    for row in 0..t.rows() {
        for col in 0..t.cols() {
            if t[(row, col)] != -&t[(col, row)] {
                return Err(CliffordError::Hypothesis { row, col });
            }
        }
    }
    Ok(())
}

/// Computes `[Â, B̂]` in the Clifford algebra of `q1 ⊗ q2` and compares it
/// with `Σ φ^A_α ([X,Y]_q1 {S,T}_q2 + {X,Y}_q1 [S,T]_q2)^{AB,αβ} φ^B_β`.
pub fn verify_bilinear_commutator_lemma(
    q1: &QMatrix,
    q2: &QMatrix,
    x: &QMatrix,
    y: &QMatrix,
    s: &QMatrix,
    t: &QMatrix,
) -> Result<LemmaReport, CliffordError> {
    let (k, l) = (q1.rows(), q2.rows());
    for (name, m, d) in [("X", x, k), ("Y", y, k), ("S", s, l), ("T", t, l)] {
        if m.rows() != d || m.cols() != d {
            return Err(CliffordError::Dimension(format!("{name} must be {d}x{d}")));
        }
    }
    check_antisymmetric_tensor(x, s)?;
    check_antisymmetric_tensor(y, t)?;

    let alg = CliffordAlgebra::tensor(q1, q2)?;
    let a_hat = alg.bilinear(&x.kron(s));
    let b_hat = alg.bilinear(&y.kron(t));
    let lhs = alg.commutator(&a_hat, &b_hat)?;

    let xy = x.weighted_commutator(y, q1);
    let xy_plus = x.weighted_anticommutator(y, q1);
    let st = s.weighted_commutator(t, q2);
    let st_plus = s.weighted_anticommutator(t, q2);
    let kernel = &xy.kron(&st_plus) + &xy_plus.kron(&st);
    let rhs = alg.bilinear(&kernel);

    let diff = &lhs - &rhs;
    let first_difference = diff
        .terms()
        .iter()
        .next()
        .map(|(m, c)| (monomial_generators(*m), c.to_string()));
    Ok(LemmaReport { lhs_terms: lhs.terms().len(), rhs_terms: rhs.terms().len(), first_difference })
}

fn random_entry<R: Rng>(rng: &mut R) -> Rational {
    Rational::new(rng.gen_range(-4..=4), rng.gen_range(1..=3))
}

pub fn random_symmetric<R: Rng>(rng: &mut R, d: usize) -> QMatrix {
    let mut m = QMatrix::zeros(d, d);
    for i in 0..d {
        for j in i..d {
            let v = random_entry(rng);
            m[(i, j)] = v.clone();
            m[(j, i)] = v;
        }
    }
    m
}

pub fn random_antisymmetric<R: Rng>(rng: &mut R, d: usize) -> QMatrix {
    let mut m = QMatrix::zeros(d, d);
    for i in 0..d {
        for j in i + 1..d {
            let v = random_entry(rng);
            m[(j, i)] = -&v;
            m[(i, j)] = v;
        }
    }
    m
}

/// A random pair `(X, S)` with `X ⊗ S` anti-symmetric: one factor symmetric,
/// the other anti-symmetric.
pub fn random_ansatz_pair<R: Rng>(rng: &mut R, k: usize, l: usize) -> (QMatrix, QMatrix) {
    if rng.gen_bool(0.5) {
        (random_symmetric(rng, k), random_antisymmetric(rng, l))
    } else {
        (random_antisymmetric(rng, k), random_symmetric(rng, l))
    }
}
