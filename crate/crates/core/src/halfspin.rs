//! Generalized ½-spin representations by repeated doubling, their real
//! Γ-matrices, and the Berman relation check shared by all constructions.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cartan::{max_coclique, Gcm};
use crate::exactnum::{inverse, rank, CMatrix, GaussianRational, Matrix, QMatrix, Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HalfSpinError {
    #[error("spin relations violated: {0:?}")]
    Relations(Vec<SpinViolation>),
    #[error("Berman relations violated: {0:?}")]
    Berman(Vec<BermanViolation>),
    #[error("Γ({index}) is not anti-symmetric with square -id")]
    Gamma { index: usize },
}

/// First nonzero entry of a residual, with its value printed exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Residual {
    pub row: usize,
    pub col: usize,
    pub value: String,
}

impl Residual {
    pub fn first_of<T: Scalar>(m: &Matrix<T>) -> Option<Residual> {
        m.first_nonzero()
            .map(|(row, col, v)| Residual { row, col, value: v.to_string() })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BermanRelation {
    /// `[A_i, [A_i, A_j]] = -A_j` for an edge.
    DoubleBracket,
    /// `[A_i, A_j] = 0` for a non-edge.
    Commute,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BermanViolation {
    pub i: usize,
    pub j: usize,
    pub relation: BermanRelation,
    pub residual: Residual,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BermanReport {
    pub pairs_checked: usize,
    pub violations: Vec<BermanViolation>,
}

impl BermanReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `[A_i,[A_i,A_j]] = -A_j` on edges and `[A_i,A_j] = 0` on
/// non-edges for every ordered pair `i != j`.
pub fn verify_berman<T: Scalar>(images: &[Matrix<T>], g: &Gcm) -> BermanReport {
    assert_eq!(images.len(), g.n(), "one image per node expected");
    let n = g.n();
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|(i, j)| i != j).collect();
    let mut violations: Vec<BermanViolation> = pairs
        .par_iter()
        .filter_map(|&(i, j)| {
            let bracket = images[i].commutator(&images[j]);
            let (relation, residual) = if g.is_edge(i, j) {
                let double = images[i].commutator(&bracket);
                (BermanRelation::DoubleBracket, &double + &images[j])
            } else {
                (BermanRelation::Commute, bracket)
            };
            Residual::first_of(&residual).map(|residual| BermanViolation { i, j, relation, residual })
        })
        .collect();
    violations.sort_by_key(|v| (v.i, v.j));
    BermanReport { pairs_checked: pairs.len(), violations }
}

fn flat_dot(a: &QMatrix, b: &QMatrix) -> Rational {
    a.entries().iter().zip(b.entries()).map(|(x, y)| x * y).sum()
}

/// A nonzero entry of `Σ c_t A_t ⊗ B_t`, found without forming the products.
///
/// The `B_t` are split into an independent subset and the rest, which are
/// written in that basis; the sum vanishes iff every basis coefficient
/// `Σ c_t μ_{t,b} A_t` does.
fn kron_sum_residual(terms: &[(Rational, QMatrix, QMatrix)]) -> Option<Residual> {
    let mut basis: Vec<usize> = Vec::new();
    let mut coeff: Vec<QMatrix> = Vec::new();
    let gram = |idx: &[usize]| {
        QMatrix::from_fn(idx.len(), idx.len(), |a, b| flat_dot(&terms[idx[a]].2, &terms[idx[b]].2))
    };
    for (t, (c, a, b)) in terms.iter().enumerate() {
        let mut with = basis.clone();
        with.push(t);
        if rank(&gram(&with)) == with.len() {
            basis.push(t);
            coeff.push(a.scale(c));
            continue;
        }
        // b lies in the span of the basis; μ solves the normal equations.
        let g_inv = inverse(&gram(&basis)).expect("basis Gram matrix is invertible");
        let rhs: Vec<Rational> = basis.iter().map(|&u| flat_dot(&terms[u].2, b)).collect();
        for (slot, row) in (0..basis.len()).map(|r| g_inv.row(r)).enumerate() {
            let mu: Rational = row.iter().zip(&rhs).map(|(x, y)| x * y).sum();
            if !mu.is_zero() {
                coeff[slot] = &coeff[slot] + &a.scale(&(c * &mu));
            }
        }
    }
    let (p, q, _) = coeff.iter().find_map(QMatrix::first_nonzero)?;
    let mut full = QMatrix::zeros(terms[0].2.rows(), terms[0].2.cols());
    for (c, a, b) in terms {
        let w = c * &a[(p, q)];
        if !w.is_zero() {
            full = &full + &b.scale(&w);
        }
    }
    let (r, s, v) = full.first_nonzero().expect("independent basis keeps the sum nonzero");
    let d = full.rows();
    Some(Residual { row: p * d + r, col: q * d + s, value: v.to_string() })
}

/// [`verify_berman`] for images `X_i ⊗ Γ_i`, working only with the factors.
pub fn verify_berman_kron(xs: &[QMatrix], gs: &[QMatrix], g: &Gcm) -> BermanReport {
    assert_eq!(xs.len(), g.n(), "one image per node expected");
    assert_eq!(gs.len(), g.n(), "one image per node expected");
    let n = g.n();
    let one = Rational::one();
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|(i, j)| i != j).collect();
    let mut violations: Vec<BermanViolation> = pairs
        .par_iter()
        .filter_map(|&(i, j)| {
            let (x, y, a, b) = (&xs[i], &xs[j], &gs[i], &gs[j]);
            let (relation, terms) = if g.is_edge(i, j) {
                let xx = x.matmul(x);
                let aa = a.matmul(a);
                (
                    BermanRelation::DoubleBracket,
                    vec![
                        (one.clone(), xx.matmul(y), aa.matmul(b)),
                        (Rational::from_integer(-2), x.matmul(y).matmul(x), a.matmul(b).matmul(a)),
                        (one.clone(), y.matmul(&xx), b.matmul(&aa)),
                        (one.clone(), y.clone(), b.clone()),
                    ],
                )
            } else {
                (
                    BermanRelation::Commute,
                    vec![(one.clone(), x.matmul(y), a.matmul(b)), (-&one, y.matmul(x), b.matmul(a))],
                )
            };
            kron_sum_residual(&terms).map(|residual| BermanViolation { i, j, relation, residual })
        })
        .collect();
    violations.sort_by_key(|v| (v.i, v.j));
    BermanReport { pairs_checked: pairs.len(), violations }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpinViolation {
    /// `A_i² ≠ -¼ id`
    Square { i: usize, residual: Residual },
    /// non-edge pair that fails to commute
    Commute { i: usize, j: usize, residual: Residual },
    /// edge pair that fails to anticommute
    Anticommute { i: usize, j: usize, residual: Residual },
    AntiHermitian { i: usize, residual: Residual },
}

/// Squares, commutation pattern and anti-Hermitian-ness of ρ(X_i).
pub fn check_spin_relations(images: &[CMatrix], g: &Gcm) -> Vec<SpinViolation> {
    let n = g.n();
    let quarter = GaussianRational::real(Rational::new(-1, 4));
    let mut out = Vec::new();
    for (i, a) in images.iter().enumerate() {
        let sq = &a.matmul(a) - &CMatrix::scalar(a.rows(), quarter.clone());
        if let Some(residual) = Residual::first_of(&sq) {
            out.push(SpinViolation::Square { i, residual });
        }
        if let Some(residual) = Residual::first_of(&(a + &a.conj_transpose())) {
            out.push(SpinViolation::AntiHermitian { i, residual });
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if g.is_edge(i, j) {
                let ac = images[i].anticommutator(&images[j]);
                if let Some(residual) = Residual::first_of(&ac) {
                    out.push(SpinViolation::Anticommute { i, j, residual });
                }
            } else {
                let c = images[i].commutator(&images[j]);
                if let Some(residual) = Residual::first_of(&c) {
                    out.push(SpinViolation::Commute { i, j, residual });
                }
            }
        }
    }
    out
}

/// Images ρ(X_i) of a generalized ½-spin representation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfSpinRep {
    rho: Vec<CMatrix>,
    ordering: Vec<usize>,
    coclique: Vec<usize>,
}

impl HalfSpinRep {
    pub fn n(&self) -> usize {
        self.rho.len()
    }

    /// Complex dimension.
    pub fn dim(&self) -> usize {
        self.rho[0].rows()
    }

    pub fn rho(&self) -> &[CMatrix] {
        &self.rho
    }

    /// Order in which nodes were added.
    pub fn ordering(&self) -> &[usize] {
        &self.ordering
    }

    /// The maximum coclique that was placed first.
    pub fn coclique(&self) -> &[usize] {
        &self.coclique
    }
}

/// Complex dimension `2^(n − r)` of the representation built below, with
/// `r` the size of a maximum coclique.
pub fn half_spin_dim(g: &Gcm) -> usize {
    1 << (g.n() - max_coclique(&g.diagram()).len())
}

/// Builds ρ by adding nodes in the order "maximum coclique, then the rest
/// ascending". A node without processed neighbours acts as `½i·id`; any
/// other node doubles the space. The result is verified before returning.
pub fn build_half_spin(g: &Gcm) -> Result<HalfSpinRep, HalfSpinError> {
    let n = g.n();
    let coclique = max_coclique(&g.diagram());
    let mut ordering = coclique.clone();
    ordering.extend((0..n).filter(|v| !coclique.contains(v)));

    let half_i = GaussianRational::imag(Rational::new(1, 2));
    let zero = GaussianRational::zero();
    let e11 = CMatrix::from_diag(&[GaussianRational::one(), zero.clone()]);
    let e22 = CMatrix::from_diag(&[zero.clone(), GaussianRational::one()]);
    let flip = CMatrix::from_rows(vec![
        vec![zero.clone(), half_i.clone()],
        vec![half_i.clone(), zero],
    ]);

    let mut rho: Vec<Option<CMatrix>> = vec![None; n];
    let mut s = 1;
    for (step, &v) in ordering.iter().enumerate() {
        let processed = &ordering[..step];
        if processed.iter().all(|&u| !g.is_edge(u, v)) {
            rho[v] = Some(CMatrix::scalar(s, half_i.clone()));
            continue;
        }
        for &u in processed {
            let old = rho[u].take().expect("processed node has an image");
            let twisted = if g.is_edge(u, v) { -&old } else { old.clone() };
            rho[u] = Some(&old.kron(&e11) + &twisted.kron(&e22));
        }
        rho[v] = Some(CMatrix::identity(s).kron(&flip));
        s *= 2;
    }
    let rho: Vec<CMatrix> = rho.into_iter().map(|m| m.expect("every node placed")).collect();

    let violations = check_spin_relations(&rho, g);
    if !violations.is_empty() {
        return Err(HalfSpinError::Relations(violations));
    }
    let berman = verify_berman(&rho, g);
    if !berman.passed() {
        return Err(HalfSpinError::Berman(berman.violations));
    }
    Ok(HalfSpinRep { rho, ordering, coclique })
}

/// Real anti-symmetric Γ(α_i) = realified 2ρ(X_i), of size 2s.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaSet {
    gamma: Vec<QMatrix>,
}

impl GammaSet {
    pub fn gamma(&self) -> &[QMatrix] {
        &self.gamma
    }

    pub fn dim(&self) -> usize {
        self.gamma[0].rows()
    }

    pub fn n(&self) -> usize {
        self.gamma.len()
    }
}

pub fn gammas(h: &HalfSpinRep) -> Result<GammaSet, HalfSpinError> {
    let two = GaussianRational::real(Rational::from_integer(2));
    let gamma: Vec<QMatrix> = h.rho().iter().map(|r| r.scale(&two).realify()).collect();
    for (index, m) in gamma.iter().enumerate() {
        let minus_id = QMatrix::scalar(m.rows(), Rational::from_integer(-1));
        if !m.is_antisymmetric() || m.matmul(m) != minus_id {
            return Err(HalfSpinError::Gamma { index });
        }
    }
    Ok(GammaSet { gamma })
}
