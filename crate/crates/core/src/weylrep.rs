//! Reflections acting on h*, Sym²(h*) and Sym³(h*), and the test of
//! whether `X(α) = ρ(s_α) − ½` satisfies the anticommutator relation.
//!
//! For `(α|β) = −1` the pair `s_α, s_β` generates a copy of S₃ and
//! `{X(α), X(β)} − X(α+β)` equals `−6·P_sgn`, where `P_sgn` projects onto
//! the sign-isotypic part. The relation therefore holds exactly when the
//! sign representation does not occur.

use serde::Serialize;
use thiserror::Error;

use crate::cartan::Realization;
use crate::exactnum::{rank, sym_power_of, QMatrix, Rational};
use crate::extender::{Carrier, Convention, ExtendError, XMap};
use crate::rootsys::{norm, pair, Root};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeylError {
    #[error("{root} has norm {norm}, reflections need a real root")]
    NotReal { root: Root, norm: i64 },
    #[error("({alpha}|{beta}) = {pairing}, expected -1")]
    NotAdjacent { alpha: Root, beta: Root, pairing: i64 },
    #[error(transparent)]
    Extend(#[from] ExtendError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Space {
    H,
    Sym2,
    Sym3,
}

impl Space {
    pub fn degree(self) -> usize {
        match self {
            Space::H => 1,
            Space::Sym2 => 2,
            Space::Sym3 => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Space::H => "h",
            Space::Sym2 => "sym2",
            Space::Sym3 => "sym3",
        }
    }
}

impl std::str::FromStr for Space {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "h" | "h*" => Ok(Space::H),
            "sym2" => Ok(Space::Sym2),
            "sym3" => Ok(Space::Sym3),
            other => Err(format!("unknown space `{other}` (expected h, sym2 or sym3)")),
        }
    }
}

/// `s_α` on h*: `x ↦ x − (α|x) α`, extended to symmetric powers.
pub fn reflection_matrix(r: &Realization, space: Space, alpha: &Root) -> Result<QMatrix, WeylError> {
    let n = norm(r, alpha);
    if n != 2 {
        return Err(WeylError::NotReal { root: alpha.clone(), norm: n });
    }
    let a = alpha.rational_coords();
    let up: Vec<Rational> = (0..r.k())
        .map(|j| (0..r.k()).map(|i| &a[i] * &r.gram()[(i, j)]).sum())
        .collect();
    let s = QMatrix::from_fn(r.k(), r.k(), |i, j| {
        let d = if i == j { Rational::one() } else { Rational::zero() };
        &d - &(&a[i] * &up[j])
    });
    Ok(sym_power_of(&s, space.degree()))
}

fn adjacent_pair(r: &Realization, space: Space, alpha: &Root, beta: &Root) -> Result<(QMatrix, QMatrix), WeylError> {
    let p = pair(r, alpha, beta);
    if p != -1 {
        return Err(WeylError::NotAdjacent { alpha: alpha.clone(), beta: beta.clone(), pairing: p });
    }
    Ok((reflection_matrix(r, space, alpha)?, reflection_matrix(r, space, beta)?))
}

/// `R_αR_βR_α − R_αR_β − R_βR_α + R_α + R_β − 1`.
pub fn residual_of(ra: &QMatrix, rb: &QMatrix) -> QMatrix {
    let ab = ra.matmul(rb);
    let ba = rb.matmul(ra);
    let aba = ab.matmul(ra);
    let id = QMatrix::identity(ra.rows());
    &(&(&(&(&aba - &ab) - &ba) + ra) + rb) - &id
}

pub fn weyl_identity_residual(
    r: &Realization,
    space: Space,
    alpha: &Root,
    beta: &Root,
) -> Result<QMatrix, WeylError> {
    let (ra, rb) = adjacent_pair(r, space, alpha, beta)?;
    Ok(residual_of(&ra, &rb))
}

/// `⅙(1 − R_α − R_β + R_αR_β + R_βR_α − R_αR_βR_α)`.
pub fn sign_projector(ra: &QMatrix, rb: &QMatrix) -> QMatrix {
    residual_of(ra, rb).scale(&Rational::new(-1, 6))
}

pub fn is_projector(p: &QMatrix) -> bool {
    &p.matmul(p) == p
}

/// Multiplicity of the sign representation of the S₃ generated by two
/// involutions with `(R_αR_β)³ = 1`.
pub fn sign_multiplicity_of(ra: &QMatrix, rb: &QMatrix) -> usize {
    rank(&sign_projector(ra, rb))
}

pub fn sign_multiplicity(r: &Realization, space: Space, alpha: &Root, beta: &Root) -> Result<usize, WeylError> {
    let (ra, rb) = adjacent_pair(r, space, alpha, beta)?;
    Ok(sign_multiplicity_of(&ra, &rb))
}

/// Plain map `X(α) = ρ(s_α) − ½`.
pub fn x_from_weyl<'a>(
    r: &Realization,
    space: Space,
    domain: impl IntoIterator<Item = &'a Root>,
) -> Result<XMap, WeylError> {
    let half = Rational::new(1, 2);
    let mut values = Vec::new();
    for alpha in domain {
        let s = reflection_matrix(r, space, alpha)?;
        let d = s.rows();
        values.push((alpha.clone(), &s - &QMatrix::scalar(d, half.clone())));
    }
    let (carrier, weight) = match space {
        Space::H => (Carrier::Vector, Some(r.gram().clone())),
        Space::Sym2 => (Carrier::SymSquare, Some(r.gram().clone())),
        Space::Sym3 => (Carrier::Other, None),
    };
    Ok(XMap::new(Convention::Plain, carrier, weight, values)?)
}
