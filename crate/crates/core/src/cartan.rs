//! Simply-laced generalized Cartan matrices, their Dynkin diagrams, maximum
//! cocliques and a realization of h* with its invariant form.
//!
//! Node numbering of the named types (1-based, as accepted on input):
//!
//! * `An`: path 1 - 2 - ... - n.
//! * `Dn` (n >= 4): path 1 - ... - (n-1), node n attached to n-2.
//! * `E6`, `E7`, `E8`: chain 1 - 3 - 4 - ... - n, node 2 attached to 4.
//! * `En` (n >= 9): chain 1 - ... - (n-1), node n attached to n-3.
//!   `E10` is the chain 1 - ... - 9 with node 10 on node 7.
//! * `A~n` (n >= 2): `An` plus node n+1 adjacent to 1 and n.
//! * `D~n`: `Dn` plus node n+1 attached to 2.
//! * `E~6`, `E~7`, `E~8`: extra node attached to 2, 1, 8 respectively.
//! * `AEn` (n >= 4): `A~(n-2)` plus node n attached to its extending node.
//!
//! Products are written `A1xA1` (also `×` or `+`). Unicode tildes (`Ã2`,
//! `D̃4`) and subscript digits are accepted.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::exactnum::{determinant, inverse, rank, ExactError, QMatrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CartanError {
    #[error("unknown diagram name `{0}`")]
    UnknownName(String),
    #[error("malformed edge list: {0}")]
    MalformedEdgeList(String),
    #[error("malformed matrix: {0}")]
    MalformedMatrix(String),
    #[error("node index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("entry ({row}, {col}) = {value}: {reason}")]
    InvalidEntry { row: usize, col: usize, value: i64, reason: &'static str },
    #[error("no invertible realization found: {0}")]
    Realization(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// A simply-laced generalized Cartan matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gcm {
    a: Vec<Vec<i64>>,
}

impl Gcm {
    /// Validates `a`; offending entries are reported 1-based.
    pub fn new(a: Vec<Vec<i64>>) -> Result<Self, CartanError> {
        let n = a.len();
        if n == 0 {
            return Err(CartanError::MalformedMatrix("empty matrix".into()));
        }
        if let Some(row) = a.iter().position(|r| r.len() != n) {
            return Err(CartanError::MalformedMatrix(format!(
                "row {} has {} entries, expected {n}",
                row + 1,
                a[row].len()
            )));
        }
        for i in 0..n {
            for j in 0..n {
                let v = a[i][j];
                let bad = |reason| CartanError::InvalidEntry { row: i + 1, col: j + 1, value: v, reason };
                if i == j && v != 2 {
                    return Err(bad("diagonal entries must be 2"));
                }
                if i != j && v != 0 && v != -1 {
                    return Err(bad("off-diagonal entries must be 0 or -1 (simply laced)"));
                }
                if v != a[j][i] {
                    return Err(bad("matrix is not symmetric"));
                }
            }
        }
        Ok(Self { a })
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.a[i][j]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.a
    }

    pub fn matrix(&self) -> QMatrix {
        QMatrix::from_i64_rows(&self.a)
    }

    pub fn is_edge(&self, i: usize, j: usize) -> bool {
        i != j && self.a[i][j] == -1
    }

    pub fn diagram(&self) -> Diagram {
        let n = self.n();
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.is_edge(i, j))
            .collect();
        Diagram::new(n, edges)
    }

    pub fn rank(&self) -> usize {
        rank(&self.matrix())
    }

    pub fn determinant(&self) -> Rational {
        determinant(&self.matrix()).expect("square")
    }

    fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut a = vec![vec![0; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        for &(i, j) in edges {
            a[i][j] = -1;
            a[j][i] = -1;
        }
        Self { a }
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Gcm) -> Gcm {
        let (n, m) = (self.n(), other.n());
        let mut a = vec![vec![0; n + m]; n + m];
        for i in 0..n {
            a[i][..n].copy_from_slice(&self.a[i]);
        }
        for i in 0..m {
            a[n + i][n..].copy_from_slice(&other.a[i]);
        }
        Gcm { a }
    }

    /// Finite/affine/indefinite type of each connected component.
    pub fn component_kinds(&self) -> Vec<(Vec<usize>, DiagramKind)> {
        self.diagram()
            .components()
            .into_iter()
            .map(|nodes| {
                let sub = QMatrix::from_fn(nodes.len(), nodes.len(), |i, j| {
                    Rational::from_integer(self.a[nodes[i]][nodes[j]])
                });
                let kind = classify_connected(&sub);
                (nodes, kind)
            })
            .collect()
    }

    /// True if every component is of finite or affine type.
    pub fn is_finite_or_affine(&self) -> bool {
        self.component_kinds().iter().all(|(_, k)| *k != DiagramKind::Indefinite)
    }
}

impl fmt::Display for Gcm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .a
            .iter()
            .map(|r| format!("[{}]", r.iter().map(i64::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagramKind {
    Finite,
    Affine,
    Indefinite,
}

fn positive_definite(m: &QMatrix) -> bool {
    (1..=m.rows()).all(|s| {
        let lead = QMatrix::from_fn(s, s, |i, j| m[(i, j)].clone());
        determinant(&lead).expect("square") > Rational::zero()
    })
}

fn classify_connected(m: &QMatrix) -> DiagramKind {
    if positive_definite(m) {
        return DiagramKind::Finite;
    }
    let n = m.rows();
    let det = determinant(m).expect("square");
    let minors_definite = (0..n).all(|skip| {
        let idx: Vec<usize> = (0..n).filter(|&i| i != skip).collect();
        positive_definite(&QMatrix::from_fn(n - 1, n - 1, |i, j| m[(idx[i], idx[j])].clone()))
    });
    if det.is_zero() && minors_definite {
        DiagramKind::Affine
    } else {
        DiagramKind::Indefinite
    }
}

/// Graph view of a GCM: nodes `0..n`, edges where `a_ij = -1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
}

impl Diagram {
    /// Edges are unordered; self-loops are ignored.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let edges: BTreeSet<(usize, usize)> = edges
            .into_iter()
            .filter(|(i, j)| i != j)
            .map(|(i, j)| (i.min(j), i.max(j)))
            .collect();
        let mut neighbors = vec![Vec::new(); n];
        for &(i, j) in &edges {
            neighbors[i].push(j);
            neighbors[j].push(i);
        }
        for nb in &mut neighbors {
            nb.sort_unstable();
        }
        Self { n, edges, neighbors }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i.min(j), i.max(j)))
    }

    pub fn is_independent(&self, nodes: &[usize]) -> bool {
        nodes
            .iter()
            .enumerate()
            .all(|(p, &i)| nodes[p + 1..].iter().all(|&j| i != j && !self.adjacent(i, j)))
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut i = 0;
            while i < comp.len() {
                for &nb in &self.neighbors[comp[i]] {
                    if !seen[nb] {
                        seen[nb] = true;
                        comp.push(nb);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

/// Maximum independent set, lexicographically smallest among the maximum
/// ones, as ascending 0-based node indices. Supports up to 64 nodes.
pub fn max_coclique(d: &Diagram) -> Vec<usize> {
    assert!(d.n() <= 64, "max_coclique supports at most 64 nodes");
    let closed: Vec<u64> = (0..d.n())
        .map(|v| d.neighbors(v).iter().fold(1u64 << v, |m, &u| m | (1u64 << u)))
        .collect();
    let all = if d.n() == 64 { u64::MAX } else { (1u64 << d.n()) - 1 };
    let best = mis_size(&closed, all, 0, 0);

    let mut chosen = Vec::new();
    let mut avail = all;
    let mut need = best;
    for v in 0..d.n() {
        if need == 0 {
            break;
        }
        let bit = 1u64 << v;
        if avail & bit == 0 {
            continue;
        }
        let later = avail & !closed[v] & !((bit << 1) - 1);
        if 1 + mis_size(&closed, later, 0, 0) == need {
            chosen.push(v);
            need -= 1;
            avail = later;
        } else {
            avail &= !bit;
        }
    }
    chosen
}

fn mis_size(closed: &[u64], cand: u64, cur: usize, best: usize) -> usize {
    if cand == 0 {
        return cur.max(best);
    }
    if cur + cand.count_ones() as usize <= best {
        return best;
    }
    let v = cand.trailing_zeros() as usize;
    let bit = 1u64 << v;
    // an isolated candidate is always worth taking
    if closed[v] & cand == bit {
        return mis_size(closed, cand & !bit, cur + 1, best);
    }
    let best = mis_size(closed, cand & !closed[v], cur + 1, best);
    mis_size(closed, cand & !bit, cur, best)
}

/// The space h* with basis v^1..v^k, the Gram matrix `gram[a][b] = (v^a|v^b)`
/// and its inverse. Simple roots are the first n basis vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Realization {
    n: usize,
    k: usize,
    gram: QMatrix,
    gram_int: Vec<Vec<i64>>,
    gram_inv: QMatrix,
    extra_columns: Vec<usize>,
}

impl Realization {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn gram(&self) -> &QMatrix {
        &self.gram
    }

    /// Integer view of [`Self::gram`].
    pub fn gram_int(&self) -> &[Vec<i64>] {
        &self.gram_int
    }

    pub fn gram_inv(&self) -> &QMatrix {
        &self.gram_inv
    }

    /// Indices `j_m` (0-based) whose unit vectors complete the Gram matrix.
    pub fn extra_columns(&self) -> &[usize] {
        &self.extra_columns
    }

    /// Coordinates of the i-th simple root.
    pub fn simple_root(&self, i: usize) -> Vec<i64> {
        let mut v = vec![0; self.k];
        v[i] = 1;
        v
    }

    pub fn simple_roots(&self) -> Vec<Vec<i64>> {
        (0..self.n).map(|i| self.simple_root(i)).collect()
    }

    /// `xᵀ G y` for integer coordinate vectors.
    pub fn pair_int(&self, x: &[i64], y: &[i64]) -> i64 {
        assert_eq!(x.len(), self.k);
        assert_eq!(y.len(), self.k);
        let mut total = 0;
        for (a, &xa) in x.iter().enumerate() {
            if xa == 0 {
                continue;
            }
            let row = &self.gram_int[a];
            total += xa * y.iter().zip(row).map(|(&yb, &g)| yb * g).sum::<i64>();
        }
        total
    }

    /// `xᵀ G y` for rational coordinate vectors.
    pub fn pair(&self, x: &[Rational], y: &[Rational]) -> Rational {
        assert_eq!(x.len(), self.k);
        assert_eq!(y.len(), self.k);
        let mut total = Rational::zero();
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                let g = &self.gram[(a, b)];
                if !g.is_zero() && !yb.is_zero() {
                    total += &(&(xa * g) * yb);
                }
            }
        }
        total
    }
}

/// Builds the realization: `gram = A` if A is invertible, otherwise
/// `[[A, B], [Bᵀ, 0]]` with unit columns `B` chosen by greedy row deletion.
pub fn realization(g: &Gcm) -> Result<Realization, CartanError> {
    let n = g.n();
    let a = g.matrix();
    let rk = rank(&a);
    let corank = n - rk;

    let mut kept: Vec<usize> = (0..n).collect();
    let mut extra = Vec::new();
    for j in 0..n {
        if extra.len() == corank {
            break;
        }
        let trial: Vec<usize> = kept.iter().copied().filter(|&i| i != j).collect();
        let sub = QMatrix::from_fn(trial.len(), n, |r, c| a[(trial[r], c)].clone());
        if rank(&sub) == rk {
            kept = trial;
            extra.push(j);
        }
    }
    if extra.len() != corank {
        return Err(CartanError::Realization(format!(
            "found {} of {corank} completing columns",
            extra.len()
        )));
    }

    let k = n + corank;
    let mut gram_int = vec![vec![0i64; k]; k];
    for i in 0..n {
        gram_int[i][..n].copy_from_slice(&g.rows()[i]);
    }
    for (m, &j) in extra.iter().enumerate() {
        gram_int[j][n + m] = 1;
        gram_int[n + m][j] = 1;
    }
    let gram = QMatrix::from_i64_rows(&gram_int);
    let gram_inv = inverse(&gram).map_err(|e| CartanError::Realization(e.to_string()))?;
    Ok(Realization { n, k, gram, gram_int, gram_inv, extra_columns: extra })
}

/// Parses a named type, a product of named types, an edge list
/// `"n; i j; i j; ..."` or an explicit JSON matrix `[[2,-1],[-1,2]]`.
pub fn parse_gcm(input: &str) -> Result<Gcm, CartanError> {
    let s = input.trim();
    if s.starts_with('[') {
        let rows: Vec<Vec<i64>> =
            serde_json::from_str(s).map_err(|e| CartanError::MalformedMatrix(e.to_string()))?;
        return Gcm::new(rows);
    }
    if s.contains(';') || (!s.is_empty() && s.chars().all(|c| c.is_ascii_digit())) {
        return parse_edge_list(s);
    }
    let normalized = normalize_name(s);
    let mut parts = normalized
        .split(['x', '+'])
        .map(str::trim)
        .filter(|p| !p.is_empty());
    let first = parts.next().ok_or_else(|| CartanError::UnknownName(input.to_string()))?;
    let mut g = named(first)?;
    for p in parts {
        g = g.direct_sum(&named(p)?);
    }
    Ok(g)
}

fn normalize_name(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            'Ã' => out.push_str("A~"),
            'Ẽ' => out.push_str("E~"),
            '\u{0303}' => out.push('~'),
            '×' => out.push('x'),
            '₀'..='₉' => out.push(char::from(b'0' + (c as u32 - '₀' as u32) as u8)),
            c if c.is_whitespace() => {}
            c => out.push(c),
        }
    }
    out
}

fn parse_edge_list(s: &str) -> Result<Gcm, CartanError> {
    let mut parts = s.split(';').map(str::trim);
    let head = parts.next().unwrap_or("");
    let n: usize = head
        .parse()
        .map_err(|_| CartanError::MalformedEdgeList(format!("expected node count, found `{head}`")))?;
    if n == 0 {
        return Err(CartanError::MalformedEdgeList("node count must be positive".into()));
    }
    let mut edges = Vec::new();
    for part in parts.filter(|p| !p.is_empty()) {
        let nums: Vec<&str> = part.split_whitespace().collect();
        let [i, j] = nums[..] else {
            return Err(CartanError::MalformedEdgeList(format!("expected `i j`, found `{part}`")));
        };
        let parse = |t: &str| {
            t.parse::<usize>()
                .map_err(|_| CartanError::MalformedEdgeList(format!("bad node index `{t}`")))
        };
        let (i, j) = (parse(i)?, parse(j)?);
        for idx in [i, j] {
            if idx == 0 || idx > n {
                return Err(CartanError::IndexOutOfRange { index: idx, n });
            }
        }
        if i == j {
            return Err(CartanError::InvalidEntry {
                row: i,
                col: j,
                value: 0,
                reason: "self-loops are not allowed",
            });
        }
        let e = (i.min(j) - 1, i.max(j) - 1);
        if edges.contains(&e) {
            return Err(CartanError::InvalidEntry {
                row: e.0 + 1,
                col: e.1 + 1,
                value: -2,
                reason: "repeated edge (not simply laced)",
            });
        }
        edges.push(e);
    }
    Ok(Gcm::from_edges(n, &edges))
}

fn path_edges(n: usize) -> Vec<(usize, usize)> {
    (1..n).map(|i| (i - 1, i)).collect()
}

fn type_d_edges(n: usize) -> Vec<(usize, usize)> {
    let mut e = path_edges(n - 1);
    e.push((n - 3, n - 1));
    e
}

fn type_e_edges(n: usize) -> Vec<(usize, usize)> {
    if n <= 8 {
        let mut e = vec![(0, 2), (1, 3)];
        e.extend((2..n - 1).map(|i| (i, i + 1)));
        e
    } else {
        let mut e = path_edges(n - 1);
        e.push((n - 4, n - 1));
        e
    }
}

fn named(token: &str) -> Result<Gcm, CartanError> {
    let unknown = || CartanError::UnknownName(token.to_string());
    let upper = token.to_ascii_uppercase();
    let (family, affine, digits) = if let Some(rest) = upper.strip_prefix("AE") {
        ("AE", false, rest)
    } else {
        let mut chars = upper.chars();
        let f = chars.next().ok_or_else(unknown)?;
        let rest = chars.as_str();
        let (affine, digits) = match rest.strip_prefix('~') {
            Some(d) => (true, d),
            None => (false, rest),
        };
        (match f {
            'A' => "A",
            'D' => "D",
            'E' => "E",
            _ => return Err(unknown()),
        }, affine, digits)
    };
    let n: usize = digits.parse().map_err(|_| unknown())?;

    let edges = match (family, affine) {
        ("A", false) if n >= 1 => path_edges(n),
        ("D", false) if n >= 4 => type_d_edges(n),
        ("E", false) if n >= 6 => type_e_edges(n),
        ("A", true) if n >= 2 => {
            let mut e = path_edges(n);
            e.push((0, n));
            e.push((n - 1, n));
            e
        }
        ("A", true) if n == 1 => {
            return Err(CartanError::InvalidEntry {
                row: 1,
                col: 2,
                value: -2,
                reason: "A~1 is not simply laced",
            })
        }
        ("D", true) if n >= 4 => {
            let mut e = type_d_edges(n);
            e.push((1, n));
            e
        }
        ("E", true) if (6..=8).contains(&n) => {
            let mut e = type_e_edges(n);
            let anchor = match n {
                6 => 1,
                7 => 0,
                _ => 7,
            };
            e.push((anchor, n));
            e
        }
        ("AE", false) if n == 3 => {
            return Err(CartanError::InvalidEntry {
                row: 1,
                col: 2,
                value: -2,
                reason: "AE3 contains A~1 and is not simply laced; pass an explicit matrix",
            })
        }
        ("AE", false) if n >= 4 => {
            let m = n - 2;
            let mut e = path_edges(m);
            e.push((0, m));
            e.push((m - 1, m));
            e.push((m, m + 1));
            e
        }
        _ => return Err(unknown()),
    };
    let size = if affine { n + 1 } else { n };
    Ok(Gcm::from_edges(size, &edges))
}
