//! Real roots, the invariant pairing, the λ-set and the iterated-sum closure.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cartan::{Diagram, Realization};
use crate::exactnum::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("root has {found} coordinates, realization has dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{root} is not a real root (norm {norm})")]
    NotReal { root: Root, norm: i64 },
}

/// Integer coordinates in the realization basis. Ordered by height first.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Root {
    coords: Vec<i64>,
}

impl Root {
    pub fn new(coords: Vec<i64>) -> Self {
        Self { coords }
    }

    pub fn simple(k: usize, i: usize) -> Self {
        let mut coords = vec![0; k];
        coords[i] = 1;
        Self { coords }
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn rational_coords(&self) -> Vec<Rational> {
        self.coords.iter().map(|&c| Rational::from_integer(c)).collect()
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn height(&self) -> i64 {
        self.coords.iter().sum()
    }

    pub fn is_positive(&self) -> bool {
        self.coords.iter().all(|&c| c >= 0) && self.coords.iter().any(|&c| c > 0)
    }

    pub fn is_negative(&self) -> bool {
        self.coords.iter().all(|&c| c <= 0) && self.coords.iter().any(|&c| c < 0)
    }

    /// Representative with non-negative coefficients when one exists.
    pub fn positive_form(&self) -> Root {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Index of the simple root this is, if any.
    pub fn simple_index(&self) -> Option<usize> {
        let mut nz = self.coords.iter().enumerate().filter(|(_, &c)| c != 0);
        match (nz.next(), nz.next()) {
            (Some((i, 1)), None) => Some(i),
            _ => None,
        }
    }

    pub fn plus(&self, other: &Root) -> Root {
        Root::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect())
    }

    pub fn minus(&self, other: &Root) -> Root {
        Root::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect())
    }

    pub fn scaled(&self, c: i64) -> Root {
        Root::new(self.coords.iter().map(|a| a * c).collect())
    }
}

impl std::ops::Neg for &Root {
    type Output = Root;
    fn neg(self) -> Root {
        self.scaled(-1)
    }
}

impl Ord for Root {
    fn cmp(&self, other: &Self) -> Ordering {
        self.height()
            .cmp(&other.height())
            .then_with(|| other.coords.cmp(&self.coords))
    }
}

impl PartialOrd for Root {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn check_dim(r: &Realization, x: &Root) -> Result<(), RootError> {
    if x.dim() != r.k() {
        return Err(RootError::DimensionMismatch { expected: r.k(), found: x.dim() });
    }
    Ok(())
}

/// `(α|β) = αᵀ G β`.
pub fn pairing(r: &Realization, a: &Root, b: &Root) -> Result<Rational, RootError> {
    check_dim(r, a)?;
    check_dim(r, b)?;
    Ok(Rational::from_integer(r.pair_int(a.coords(), b.coords())))
}

/// Integer pairing; panics on dimension mismatch.
pub fn pair(r: &Realization, a: &Root, b: &Root) -> i64 {
    r.pair_int(a.coords(), b.coords())
}

pub fn norm(r: &Realization, a: &Root) -> i64 {
    pair(r, a, a)
}

pub fn ensure_real(r: &Realization, a: &Root) -> Result<(), RootError> {
    check_dim(r, a)?;
    let n = norm(r, a);
    if n != 2 {
        return Err(RootError::NotReal { root: a.clone(), norm: n });
    }
    Ok(())
}

/// `s_α(β) = β − (β|α) α`.
pub fn reflect(r: &Realization, alpha: &Root, beta: &Root) -> Root {
    let p = pair(r, beta, alpha);
    beta.minus(&alpha.scaled(p))
}

/// All positive real roots of height at most `max_height`, in height order.
pub fn real_roots(r: &Realization, max_height: usize) -> BTreeSet<Root> {
    let h = max_height as i64;
    let simples: Vec<Root> = (0..r.n()).map(|i| Root::simple(r.k(), i)).collect();
    let mut found: BTreeSet<Root> = simples.iter().cloned().collect();
    let mut queue: VecDeque<Root> = simples.iter().cloned().collect();
    while let Some(beta) = queue.pop_front() {
        for a in &simples {
            let gamma = reflect(r, a, &beta);
            if gamma.is_positive() && gamma.height() <= h && !found.contains(&gamma) {
                found.insert(gamma.clone());
                queue.push_back(gamma);
            }
        }
    }
    found
}

/// Simple roots together with the sums over diagram edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaSet {
    roots: Vec<Root>,
}

impl LambdaSet {
    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Membership up to sign.
    pub fn contains(&self, x: &Root) -> bool {
        let p = x.positive_form();
        self.roots.contains(&p)
    }
}

pub fn lambda_set(r: &Realization, d: &Diagram) -> LambdaSet {
    let mut roots: Vec<Root> = (0..r.n()).map(|i| Root::simple(r.k(), i)).collect();
    for (i, j) in d.edges() {
        let s = Root::simple(r.k(), i).plus(&Root::simple(r.k(), j));
        assert_eq!(norm(r, &s), 2, "edge sum {s} is not real");
        roots.push(s);
    }
    LambdaSet { roots }
}

/// Positive real roots reachable from simple roots by adding one simple
/// root at a time, each with the sequence of simple indices used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Closure {
    max_height: usize,
    chains: BTreeMap<Root, Vec<usize>>,
}

impl Closure {
    pub fn max_height(&self) -> usize {
        self.max_height
    }

    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    pub fn contains(&self, x: &Root) -> bool {
        self.chains.contains_key(x)
    }

    /// Members in height order.
    pub fn roots(&self) -> impl Iterator<Item = &Root> {
        self.chains.keys()
    }

    pub fn witness(&self, x: &Root) -> Option<&[usize]> {
        self.chains.get(x).map(Vec::as_slice)
    }

    pub fn to_set(&self) -> BTreeSet<Root> {
        self.chains.keys().cloned().collect()
    }
}

pub fn iterated_sum_closure(r: &Realization, max_height: usize) -> Closure {
    let h = max_height as i64;
    let simples: Vec<Root> = (0..r.n()).map(|i| Root::simple(r.k(), i)).collect();
    let mut chains = BTreeMap::new();
    let mut queue = VecDeque::new();
    for (i, a) in simples.iter().enumerate() {
        chains.insert(a.clone(), vec![i]);
        queue.push_back(a.clone());
    }
    while let Some(gamma) = queue.pop_front() {
        if gamma.height() >= h {
            continue;
        }
        for (i, a) in simples.iter().enumerate() {
            // γ + α_i has norm 2 exactly when (γ|α_i) = -1, and then it is s_i(γ)
            if pair(r, &gamma, a) != -1 {
                continue;
            }
            let next = gamma.plus(a);
            if !chains.contains_key(&next) {
                let mut chain = chains[&gamma].clone();
                chain.push(i);
                chains.insert(next.clone(), chain);
                queue.push_back(next);
            }
        }
    }
    Closure { max_height, chains }
}

/// Comparison of the closure with all positive real roots up to a height.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosureComparison {
    pub max_height: usize,
    pub real_roots: usize,
    pub closure: usize,
    /// Real roots outside the closure.
    pub missing: Vec<Root>,
    /// Closure elements that are not real roots; always empty in practice.
    pub extra: Vec<Root>,
}

impl ClosureComparison {
    pub fn is_equal(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }
}

pub fn compare_closure(r: &Realization, max_height: usize) -> ClosureComparison {
    let real = real_roots(r, max_height);
    let closure = iterated_sum_closure(r, max_height).to_set();
    ClosureComparison {
        max_height,
        real_roots: real.len(),
        closure: closure.len(),
        missing: real.difference(&closure).cloned().collect(),
        extra: closure.difference(&real).cloned().collect(),
    }
}
