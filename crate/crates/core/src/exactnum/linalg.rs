use super::{ExactError, Field, Matrix};

/// Row-reduces `m` in place to echelon form and returns the pivot columns.
/// `companion`, when present, receives the same row operations.
fn eliminate<T: Field>(m: &mut Matrix<T>, mut companion: Option<&mut Matrix<T>>) -> Vec<usize> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            swap_rows(m, p, r);
            if let Some(comp) = companion.as_deref_mut() {
                swap_rows(comp, p, r);
            }
        }
        let inv = m[(r, c)].inv().expect("pivot is nonzero");
        scale_row(m, r, &inv);
        if let Some(comp) = companion.as_deref_mut() {
            scale_row(comp, r, &inv);
        }
        for i in 0..rows {
            if i == r || m[(i, c)].is_zero() {
                continue;
            }
            let f = m[(i, c)].clone();
            axpy_row(m, i, r, &f);
            if let Some(comp) = companion.as_deref_mut() {
                axpy_row(comp, i, r, &f);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn swap_rows<T: Field>(m: &mut Matrix<T>, a: usize, b: usize) {
    for j in 0..m.cols() {
        let tmp = m[(a, j)].clone();
        m[(a, j)] = m[(b, j)].clone();
        m[(b, j)] = tmp;
    }
}

fn scale_row<T: Field>(m: &mut Matrix<T>, r: usize, f: &T) {
    for j in 0..m.cols() {
        if !m[(r, j)].is_zero() {
            m[(r, j)] = m[(r, j)].mul_ref(f);
        }
    }
}

/// row[i] -= f * row[src]
fn axpy_row<T: Field>(m: &mut Matrix<T>, i: usize, src: usize, f: &T) {
    for j in 0..m.cols() {
        if m[(src, j)].is_zero() {
            continue;
        }
        let d = f.mul_ref(&m[(src, j)]);
        m[(i, j)] = m[(i, j)].sub_ref(&d);
    }
}

pub fn rank<T: Field>(m: &Matrix<T>) -> usize {
    let mut work = m.clone();
    eliminate(&mut work, None).len()
}

pub fn inverse<T: Field>(m: &Matrix<T>) -> Result<Matrix<T>, ExactError> {
    if !m.is_square() {
        return Err(ExactError::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let mut work = m.clone();
    let mut inv = Matrix::identity(m.rows());
    let pivots = eliminate(&mut work, Some(&mut inv));
    if pivots.len() < m.rows() {
        return Err(ExactError::Singular);
    }
    Ok(inv)
}

pub fn determinant<T: Field>(m: &Matrix<T>) -> Result<T, ExactError> {
    if !m.is_square() {
        return Err(ExactError::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    let mut work = m.clone();
    let mut det = T::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !work[(i, c)].is_zero()) else {
            return Ok(T::zero());
        };
        if p != c {
            swap_rows(&mut work, p, c);
            det = det.neg_ref();
        }
        let pivot = work[(c, c)].clone();
        det = det.mul_ref(&pivot);
        let inv = pivot.inv().expect("pivot is nonzero");
        for i in c + 1..n {
            if work[(i, c)].is_zero() {
                continue;
            }
            let f = work[(i, c)].mul_ref(&inv);
            axpy_row(&mut work, i, c, &f);
        }
    }
    Ok(det)
}
