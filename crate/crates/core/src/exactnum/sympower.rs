use std::collections::HashMap;

use super::{ExactError, Matrix, Rational, Scalar};

/// Basis of Sym²(V) for dim V = k: pairs `a <= b`, lexicographic, standing
/// for `v^a ⊗ v^b + v^b ⊗ v^a` when `a < b` and `v^a ⊗ v^a` when `a = b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymSquareBasis {
    k: usize,
    pairs: Vec<(usize, usize)>,
}

impl SymSquareBasis {
    pub fn new(k: usize) -> Self {
        let pairs = (0..k).flat_map(|a| (a..k).map(move |b| (a, b))).collect();
        Self { k, pairs }
    }

    pub fn base_dim(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Flat index of the unordered pair `{a, b}`.
    pub fn index(&self, a: usize, b: usize) -> usize {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        // the first `a` rows hold k + (k-1) + ... + (k-a+1) pairs
        a * self.k - a * a.saturating_sub(1) / 2 + (b - a)
    }
}

/// Basis of Sym^p(V): non-decreasing index tuples in lexicographic order,
/// each standing for the sum of its distinct permuted tensor monomials.
#[derive(Debug, Clone)]
pub struct SymPowerBasis {
    k: usize,
    degree: usize,
    tuples: Vec<Vec<usize>>,
    lookup: HashMap<Vec<usize>, usize>,
}

impl SymPowerBasis {
    pub fn new(k: usize, degree: usize) -> Self {
        let mut tuples = Vec::new();
        let mut cur = Vec::with_capacity(degree);
        fill_tuples(k, degree, 0, &mut cur, &mut tuples);
        let lookup = tuples.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        Self { k, degree, tuples, lookup }
    }

    pub fn base_dim(&self) -> usize {
        self.k
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.tuples.len()
    }

    pub fn tuples(&self) -> &[Vec<usize>] {
        &self.tuples
    }

    /// Index of the multiset given by `t` in any order.
    pub fn index(&self, t: &[usize]) -> Option<usize> {
        let mut sorted = t.to_vec();
        sorted.sort_unstable();
        self.lookup.get(&sorted).copied()
    }
}

fn fill_tuples(k: usize, left: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if left == 0 {
        out.push(cur.clone());
        return;
    }
    for a in start..k {
        cur.push(a);
        fill_tuples(k, left - 1, a, cur, out);
        cur.pop();
    }
}

/// All distinct orderings of a sorted tuple.
fn distinct_perms(sorted: &[usize]) -> Vec<Vec<usize>> {
    let mut cur = sorted.to_vec();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

/// Matrix of `M ⊗ ... ⊗ M` (`degree` factors) on the symmetric power basis.
pub fn sym_power_of<T: Scalar>(m: &Matrix<T>, degree: usize) -> Matrix<T> {
    assert!(m.is_square(), "sym_power_of needs a square matrix");
    let basis = SymPowerBasis::new(m.rows(), degree);
    let perms: Vec<Vec<Vec<usize>>> = basis.tuples().iter().map(|t| distinct_perms(t)).collect();
    Matrix::from_fn(basis.dim(), basis.dim(), |r, c| {
        let target = &basis.tuples()[r];
        perms[c].iter().fold(T::zero(), |acc, p| {
            let mut term = T::one();
            for (&row, &col) in target.iter().zip(p) {
                let e = &m[(row, col)];
                if e.is_zero() {
                    return acc;
                }
                term = term.mul_ref(e);
            }
            acc.add_ref(&term)
        })
    })
}

/// Restricts an endomorphism `e` of V⊗V (row/column index `a*k + b`) to
/// Sym²(V). Fails unless `e` commutes with the flip `a⊗b ↦ b⊗a`.
pub fn sym_square_endo<T: Scalar>(e: &Matrix<T>) -> Result<Matrix<T>, ExactError> {
    let k = (e.rows() as f64).sqrt().round() as usize;
    if !e.is_square() || k * k != e.rows() {
        return Err(ExactError::NotSquare { rows: e.rows(), cols: e.cols() });
    }
    for c in 0..k {
        for d in 0..k {
            for a in 0..k {
                for b in 0..k {
                    if e[(c * k + d, a * k + b)] != e[(d * k + c, b * k + a)] {
                        return Err(ExactError::NotFlipEquivariant { row: c * k + d, col: a * k + b });
                    }
                }
            }
        }
    }
    let basis = SymSquareBasis::new(k);
    let pairs = basis.pairs();
    Ok(Matrix::from_fn(basis.dim(), basis.dim(), |r, col| {
        let (c, d) = pairs[r];
        let (a, b) = pairs[col];
        let row = c * k + d;
        if a == b {
            e[(row, a * k + a)].clone()
        } else {
            e[(row, a * k + b)].add_ref(&e[(row, b * k + a)])
        }
    }))
}

/// Inverse of [`sym_square_endo`] on its image: the flip-equivariant
/// endomorphism of V⊗V that agrees with `s` on Sym²(V) and kills Λ²(V).
pub fn sym_square_extend<T: Scalar>(s: &Matrix<T>, k: usize) -> Result<Matrix<T>, ExactError> {
    let basis = SymSquareBasis::new(k);
    if !s.is_square() || s.rows() != basis.dim() {
        return Err(ExactError::DimensionMismatch { expected: basis.dim(), found: s.rows() });
    }
    let half = T::from_rational(Rational::new(1, 2));
    Ok(Matrix::from_fn(k * k, k * k, |row, col| {
        let (x, y) = (row / k, row % k);
        let (u, v) = (col / k, col % k);
        let entry = &s[(basis.index(x, y), basis.index(u, v))];
        if u == v {
            entry.clone()
        } else {
            entry.mul_ref(&half)
        }
    }))
}

/// `M ⊗ I + I ⊗ M` on Sym²(V).
pub fn lift<T: Scalar>(m: &Matrix<T>) -> Matrix<T> {
    let id = Matrix::identity(m.rows());
    prod_lift(m, &id)
}

/// `M ⊗ N + N ⊗ M` on Sym²(V).
pub fn prod_lift<T: Scalar>(m: &Matrix<T>, n: &Matrix<T>) -> Matrix<T> {
    let e = &m.kron(n) + &n.kron(m);
    sym_square_endo(&e).expect("symmetrized product commutes with the flip")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::QMatrix;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn rational_matrix(k: usize) -> impl Strategy<Value = QMatrix> {
        proptest::collection::vec((-5i64..=5, 1i64..=4), k * k).prop_map(move |v| {
            QMatrix::from_fn(k, k, |i, j| Rational::new(v[i * k + j].0, v[i * k + j].1))
        })
    }

    #[test]
    fn basis_indexing() {
        let b = SymSquareBasis::new(4);
        assert_eq!(b.dim(), 10);
        for (i, &(x, y)) in b.pairs().iter().enumerate() {
            assert_eq!(b.index(x, y), i);
            assert_eq!(b.index(y, x), i);
        }
        assert_eq!(SymPowerBasis::new(10, 2).dim(), 55);
        assert_eq!(SymPowerBasis::new(10, 3).dim(), 220);
        assert_eq!(SymPowerBasis::new(2, 3).dim(), 4);
    }

    #[test]
    fn distinct_permutations() {
        assert_eq!(distinct_perms(&[0, 0, 1]).len(), 3);
        assert_eq!(distinct_perms(&[0, 1, 2]).len(), 6);
        assert_eq!(distinct_perms(&[2, 2]).len(), 1);
    }

    #[test]
    fn lift_of_identity_doubles() {
        let l = lift(&QMatrix::identity(3));
        assert_eq!(l, QMatrix::scalar(6, q(2)));
    }

    #[test]
    fn square_of_projection() {
        let m = QMatrix::from_diag(&[q(1), q(0)]);
        let s = sym_square_endo(&m.kron(&m)).unwrap();
        assert_eq!(s, QMatrix::from_diag(&[q(1), q(0), q(0)]));
    }

    #[test]
    fn non_equivariant_rejected() {
        let m = QMatrix::from_diag(&[q(1), q(0)]);
        let e = m.kron(&QMatrix::identity(2));
        assert!(matches!(sym_square_endo(&e), Err(ExactError::NotFlipEquivariant { .. })));
    }

    /// Brute-force action of M⊗M on the symmetrized basis tensors inside
    /// the full k²-dimensional tensor space.
    fn oracle_square(m: &QMatrix) -> QMatrix {
        let k = m.rows();
        let basis = SymSquareBasis::new(k);
        let full = m.kron(m);
        QMatrix::from_fn(basis.dim(), basis.dim(), |r, c| {
            let (a, b) = basis.pairs()[c];
            let mut t = vec![Rational::zero(); k * k];
            t[a * k + b] += &Rational::one();
            if a != b {
                t[b * k + a] += &Rational::one();
            }
            let image = full.matmul(&QMatrix::column(&t));
            let (x, y) = basis.pairs()[r];
            image[(x * k + y, 0)].clone()
        })
    }

    proptest! {
        #[test]
        fn square_matches_tensor_oracle(m in rational_matrix(3)) {
            let s = sym_square_endo(&m.kron(&m)).unwrap();
            prop_assert_eq!(&s, &oracle_square(&m));
            prop_assert_eq!(&s, &sym_power_of(&m, 2));
        }

        #[test]
        fn extend_round_trips(m in rational_matrix(3), n in rational_matrix(3)) {
            let s = prod_lift(&m, &n);
            let back = sym_square_endo(&sym_square_extend(&s, 3).unwrap()).unwrap();
            prop_assert_eq!(back, s);
        }

        #[test]
        fn sym_power_is_functorial(m in rational_matrix(2), n in rational_matrix(2)) {
            for p in 2..=3 {
                let lhs = sym_power_of(&m, p).matmul(&sym_power_of(&n, p));
                prop_assert_eq!(lhs, sym_power_of(&m.matmul(&n), p));
            }
        }

        #[test]
        fn commuting_diagonals(d1 in proptest::collection::vec(-4i64..=4, 3),
                               d2 in proptest::collection::vec(-4i64..=4, 3)) {
            let m = QMatrix::from_diag(&d1.iter().map(|&x| q(x)).collect::<Vec<_>>());
            let n = QMatrix::from_diag(&d2.iter().map(|&x| q(x)).collect::<Vec<_>>());
            let mn = m.matmul(&n);
            let lhs = sym_square_endo(&m.kron(&m)).unwrap()
                .matmul(&sym_square_endo(&n.kron(&n)).unwrap());
            prop_assert_eq!(lhs, sym_square_endo(&mn.kron(&mn)).unwrap());
        }
    }
}
