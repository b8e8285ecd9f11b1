//! Root-indexed operator maps X(α), the relations that make
//! `σ(X_i) = X(α_i) ⊗ Γ(α_i)` a representation, and their extension along
//! the iterated-sum closure.
//!
//! Two conventions are supported. `Plain` maps use ordinary products and
//! require `{X(α), X(β)} = X(α ± β)`; `Coord` maps are coordinate matrices
//! multiplied through the metric `W` (`A W B`) and require the target with
//! a factor ½. The bridge is `X_plain = 2 X_coord W`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cartan::{Gcm, Realization};
use crate::exactnum::{inverse, sym_square_endo, sym_square_extend, ExactError, QMatrix, Rational};
use crate::halfspin::{verify_berman_kron, BermanViolation, GammaSet, Residual};
use crate::rootsys::{pair, Closure, LambdaSet, Root};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtendError {
    #[error("pair ({alpha}, {beta}) has pairing {pairing}, outside {{0, ±1}}")]
    PairOutsidePrecondition { alpha: Root, beta: Root, pairing: i64 },
    #[error("{0} is not in the domain of the map")]
    MissingDomainElement(Root),
    #[error("coordinate convention needs the metric of the carrier")]
    MissingGram,
    #[error("expected a {expected} map")]
    WrongConvention { expected: &'static str },
    #[error("no conversion for this carrier")]
    UnsupportedCarrier,
    #[error("matrix for {root} is {found}x{found}, expected {expected}x{expected}")]
    DimensionMismatch { root: Root, expected: usize, found: usize },
    #[error("Berman relations fail on the built representation: {0:?}")]
    Berman(Vec<BermanViolation>),
    #[error("decompositions of {root} disagree (via simple roots {first} and {second})")]
    Inconsistent { root: Root, first: usize, second: usize, residual: Residual },
    #[error("recursive value of {root} differs from the given one")]
    ConflictsWithGiven { root: Root, residual: Residual },
    #[error("{0} has no decomposition γ = β + α_i with (β|α_i) = -1 inside the closure")]
    NoDecomposition(Root),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    Plain,
    Coord,
}

impl Convention {
    /// Factor in front of X(α ± β) in the anticommutator relation.
    pub fn target_factor(self) -> Rational {
        match self {
            Convention::Plain => Rational::one(),
            Convention::Coord => Rational::new(1, 2),
        }
    }
}

/// What the matrices act on. For `SymSquare` the plain form lives on
/// Sym²(h*) (dimension k(k+1)/2) and the coordinate form on h*⊗h*
/// (dimension k²); `weight` is then the metric of h*.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Carrier {
    Vector,
    SymSquare,
    /// No coordinate counterpart (e.g. Sym³).
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XMap {
    convention: Convention,
    carrier: Carrier,
    weight: Option<QMatrix>,
    values: BTreeMap<Root, QMatrix>,
}

impl XMap {
    /// Keys are stored in positive form; all matrices must be square of one size.
    pub fn new(
        convention: Convention,
        carrier: Carrier,
        weight: Option<QMatrix>,
        values: impl IntoIterator<Item = (Root, QMatrix)>,
    ) -> Result<Self, ExtendError> {
        let values: BTreeMap<Root, QMatrix> =
            values.into_iter().map(|(r, m)| (r.positive_form(), m)).collect();
        if convention == Convention::Coord && weight.is_none() {
            return Err(ExtendError::MissingGram);
        }
        let expected = values.values().next().map_or(0, QMatrix::rows);
        for (root, m) in &values {
            if !m.is_square() || m.rows() != expected {
                return Err(ExtendError::DimensionMismatch { root: root.clone(), expected, found: m.rows() });
            }
        }
        Ok(Self { convention, carrier, weight, values })
    }

    pub fn from_fn(
        convention: Convention,
        carrier: Carrier,
        weight: Option<QMatrix>,
        domain: impl IntoIterator<Item = Root>,
        f: impl Fn(&Root) -> QMatrix,
    ) -> Result<Self, ExtendError> {
        let values: Vec<(Root, QMatrix)> = domain.into_iter().map(|r| {
            let m = f(&r);
            (r, m)
        }).collect();
        Self::new(convention, carrier, weight, values)
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn carrier(&self) -> Carrier {
        self.carrier
    }

    pub fn weight(&self) -> Option<&QMatrix> {
        self.weight.as_ref()
    }

    /// Size of the matrices.
    pub fn dim(&self) -> usize {
        self.values.values().next().map_or(0, QMatrix::rows)
    }

    pub fn domain(&self) -> impl Iterator<Item = &Root> {
        self.values.keys()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `X(α)`, with `X(−α) = X(α)`.
    pub fn get(&self, alpha: &Root) -> Option<&QMatrix> {
        self.values.get(&alpha.positive_form())
    }

    fn value(&self, alpha: &Root) -> Result<&QMatrix, ExtendError> {
        self.get(alpha).ok_or_else(|| ExtendError::MissingDomainElement(alpha.clone()))
    }

    /// Metric used between factors in coordinate products.
    fn product_weight(&self) -> Result<Option<QMatrix>, ExtendError> {
        match self.convention {
            Convention::Plain => Ok(None),
            Convention::Coord => {
                let w = self.weight.as_ref().ok_or(ExtendError::MissingGram)?;
                Ok(Some(match self.carrier {
                    Carrier::SymSquare => w.kron(w),
                    _ => w.clone(),
                }))
            }
        }
    }
}

/// `[A, B]` in the map's convention.
fn bracket(a: &QMatrix, b: &QMatrix, w: Option<&QMatrix>) -> QMatrix {
    match w {
        Some(w) => a.weighted_commutator(b, w),
        None => a.commutator(b),
    }
}

/// `{A, B}` in the map's convention.
fn anti_bracket(a: &QMatrix, b: &QMatrix, w: Option<&QMatrix>) -> QMatrix {
    match w {
        Some(w) => a.weighted_anticommutator(b, w),
        None => a.anticommutator(b),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum XRelation {
    Commute,
    Anticommute,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct XViolation {
    pub alpha: Root,
    pub beta: Root,
    pub pairing: i64,
    pub relation: XRelation,
    pub target: Option<Root>,
    pub residual: Residual,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct XCheckReport {
    pub pairs_checked: usize,
    pub violations: Vec<XViolation>,
}

impl XCheckReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `[X(α), X(β)] = 0` when `(α|β) = 0` and
/// `{X(α), X(β)} = c·X(α ± β)` when `(α|β) = ∓1`, with `c` from the convention.
pub fn check_xmap(
    x: &XMap,
    r: &Realization,
    pairs: &[(Root, Root)],
) -> Result<XCheckReport, ExtendError> {
    let w = x.product_weight()?;
    let factor = x.convention.target_factor();
    let mut prepared = Vec::with_capacity(pairs.len());
    for (a, b) in pairs {
        let p = pair(r, a, b);
        let target = match p {
            0 => None,
            -1 => Some(a.plus(b)),
            1 => Some(a.minus(b)),
            _ => {
                return Err(ExtendError::PairOutsidePrecondition {
                    alpha: a.clone(),
                    beta: b.clone(),
                    pairing: p,
                })
            }
        };
        let xa = x.value(a)?;
        let xb = x.value(b)?;
        let xt = match &target {
            Some(t) => Some(x.value(t)?),
            None => None,
        };
        prepared.push((a, b, p, target, xa, xb, xt));
    }
    let mut violations: Vec<(usize, XViolation)> = prepared
        .par_iter()
        .enumerate()
        .filter_map(|(idx, (a, b, p, target, xa, xb, xt))| {
            let (relation, residual) = match xt {
                None => (XRelation::Commute, bracket(xa, xb, w.as_ref())),
                Some(xt) => (
                    XRelation::Anticommute,
                    &anti_bracket(xa, xb, w.as_ref()) - &xt.scale(&factor),
                ),
            };
            Residual::first_of(&residual).map(|residual| {
                (idx, XViolation {
                    alpha: (*a).clone(),
                    beta: (*b).clone(),
                    pairing: *p,
                    relation,
                    target: target.clone(),
                    residual,
                })
            })
        })
        .collect();
    violations.sort_by_key(|(idx, _)| *idx);
    Ok(XCheckReport {
        pairs_checked: pairs.len(),
        violations: violations.into_iter().map(|(_, v)| v).collect(),
    })
}

/// Unordered pairs of λ with pairing in {0, ±1} whose sum or difference,
/// when required, lies in λ again.
pub fn lambda_pairs(r: &Realization, lambda: &LambdaSet) -> Vec<(Root, Root)> {
    let roots = lambda.roots();
    let mut out = Vec::new();
    for (i, a) in roots.iter().enumerate() {
        for b in &roots[i + 1..] {
            let keep = match pair(r, a, b) {
                0 => true,
                -1 => lambda.contains(&a.plus(b)),
                1 => lambda.contains(&a.minus(b)),
                _ => false,
            };
            if keep {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}

/// Unordered pairs of the given roots with pairing in {0, ±1}. Targets of
/// roots up to height H reach height 2H, so the map's domain must cover that.
pub fn root_pairs<'a>(r: &Realization, roots: impl IntoIterator<Item = &'a Root>) -> Vec<(Root, Root)> {
    let roots: Vec<&Root> = roots.into_iter().collect();
    let mut out = Vec::new();
    for (i, a) in roots.iter().enumerate() {
        for b in &roots[i + 1..] {
            if pair(r, a, b).abs() <= 1 {
                out.push(((*a).clone(), (*b).clone()));
            }
        }
    }
    out
}

/// Generator images σ(X_i) = X(α_i) ⊗ Γ(α_i), kept in factored form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedRep {
    x: Vec<QMatrix>,
    gamma: Vec<QMatrix>,
}

impl ExtendedRep {
    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn dim(&self) -> usize {
        self.x[0].rows() * self.gamma[0].rows()
    }

    pub fn factors(&self, i: usize) -> (&QMatrix, &QMatrix) {
        (&self.x[i], &self.gamma[i])
    }

    /// Materializes σ(X_i).
    pub fn sigma(&self, i: usize) -> QMatrix {
        self.x[i].kron(&self.gamma[i])
    }

    pub fn sigmas(&self) -> Vec<QMatrix> {
        (0..self.n()).map(|i| self.sigma(i)).collect()
    }
}

/// Builds σ from a plain map and verifies the Berman relations on the
/// Kronecker factors.
pub fn build_extended_rep(
    x: &XMap,
    r: &Realization,
    gammas: &GammaSet,
    g: &Gcm,
) -> Result<ExtendedRep, ExtendError> {
    if x.convention != Convention::Plain {
        return Err(ExtendError::WrongConvention { expected: "plain" });
    }
    let xs: Vec<QMatrix> = (0..g.n())
        .map(|i| x.value(&Root::simple(r.k(), i)).cloned())
        .collect::<Result<_, ExtendError>>()?;
    let report = verify_berman_kron(&xs, gammas.gamma(), g);
    if !report.passed() {
        return Err(ExtendError::Berman(report.violations));
    }
    Ok(ExtendedRep { x: xs, gamma: gammas.gamma().to_vec() })
}

/// Coordinate map to plain map and back; `X_plain = 2 X W`, restricted to
/// Sym² for `SymSquare` carriers.
pub fn convert_convention(x: &XMap) -> Result<XMap, ExtendError> {
    let w = x.weight.as_ref().ok_or(ExtendError::MissingGram)?;
    let two = Rational::from_integer(2);
    let half = Rational::new(1, 2);
    let k = w.rows();
    let values: Vec<(Root, QMatrix)> = match (x.convention, x.carrier) {
        (_, Carrier::Other) => return Err(ExtendError::UnsupportedCarrier),
        (Convention::Coord, Carrier::Vector) => x
            .values
            .iter()
            .map(|(r, m)| (r.clone(), m.matmul(w).scale(&two)))
            .collect(),
        (Convention::Plain, Carrier::Vector) => {
            let w_inv = inverse(w)?;
            x.values.iter().map(|(r, m)| (r.clone(), m.matmul(&w_inv).scale(&half))).collect()
        }
        (Convention::Coord, Carrier::SymSquare) => {
            let ww = w.kron(w);
            x.values
                .iter()
                .map(|(r, m)| Ok((r.clone(), sym_square_endo(&m.matmul(&ww).scale(&two))?)))
                .collect::<Result<_, ExactError>>()?
        }
        (Convention::Plain, Carrier::SymSquare) => {
            let w_inv = inverse(w)?;
            let ww_inv = w_inv.kron(&w_inv);
            x.values
                .iter()
                .map(|(r, m)| Ok((r.clone(), sym_square_extend(m, k)?.matmul(&ww_inv).scale(&half))))
                .collect::<Result<_, ExactError>>()?
        }
    };
    let convention = match x.convention {
        Convention::Plain => Convention::Coord,
        Convention::Coord => Convention::Plain,
    };
    XMap::new(convention, x.carrier, x.weight.clone(), values)
}

/// A plain map extended over a closure, with the simple root used at each step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureExtension {
    pub map: XMap,
    /// For each non-simple element, every simple index `i` with a valid
    /// decomposition `γ = (γ − α_i) + α_i`.
    pub decompositions: BTreeMap<Root, Vec<usize>>,
}

/// Defines `X(γ) = {X(γ − α_i), X(α_i)}` in height order over the closure,
/// requiring all decompositions (and any value already given) to agree.
pub fn extend_to_closure(
    x: &XMap,
    r: &Realization,
    closure: &Closure,
) -> Result<ClosureExtension, ExtendError> {
    if x.convention != Convention::Plain {
        return Err(ExtendError::WrongConvention { expected: "plain" });
    }
    let simples: Vec<Root> = (0..r.n()).map(|i| Root::simple(r.k(), i)).collect();
    let mut values: BTreeMap<Root, QMatrix> = BTreeMap::new();
    let mut decompositions = BTreeMap::new();
    for gamma in closure.roots() {
        if let Some(i) = gamma.simple_index() {
            values.insert(gamma.clone(), x.value(&simples[i])?.clone());
            continue;
        }
        let mut found: Option<(usize, QMatrix)> = None;
        let mut used = Vec::new();
        for (i, a) in simples.iter().enumerate() {
            let beta = gamma.minus(a);
            let Some(xb) = values.get(&beta) else { continue };
            if pair(r, &beta, a) != -1 {
                continue;
            }
            let candidate = xb.anticommutator(&values[a]);
            used.push(i);
            match &found {
                None => found = Some((i, candidate)),
                Some((first, v)) => {
                    if let Some(residual) = Residual::first_of(&(v - &candidate)) {
                        return Err(ExtendError::Inconsistent {
                            root: gamma.clone(),
                            first: *first,
                            second: i,
                            residual,
                        });
                    }
                }
            }
        }
        let (_, value) = found.ok_or_else(|| ExtendError::NoDecomposition(gamma.clone()))?;
        if let Some(given) = x.get(gamma) {
            if let Some(residual) = Residual::first_of(&(given - &value)) {
                return Err(ExtendError::ConflictsWithGiven { root: gamma.clone(), residual });
            }
        }
        decompositions.insert(gamma.clone(), used);
        values.insert(gamma.clone(), value);
    }
    let map = XMap::new(Convention::Plain, x.carrier, x.weight.clone(), values)?;
    Ok(ClosureExtension { map, decompositions })
}
