//! Exact sparse linear algebra over weighted bases, and the cardinality
//! functor from spans of weighted class sets to rational matrices.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::simplicial::WeightedClassData;

/// Separator used for ids of tensor-product basis elements.
pub const TENSOR: &str = "⊗";

/// An ordered family of class ids with automorphism orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedBasis {
    ids: Vec<String>,
    aut: Vec<u64>,
    index: HashMap<String, usize>,
}

impl WeightedBasis {
    pub fn new(entries: Vec<(String, u64)>) -> Result<Self> {
        let mut index = HashMap::with_capacity(entries.len());
        let mut ids = Vec::with_capacity(entries.len());
        let mut aut = Vec::with_capacity(entries.len());
        for (k, (id, a)) in entries.into_iter().enumerate() {
            if a == 0 {
                return Err(Error::Malformed(format!("basis element `{id}` has aut_order 0")));
            }
            if index.insert(id.clone(), k).is_some() {
                return Err(Error::Malformed(format!("duplicate basis element `{id}`")));
            }
            ids.push(id);
            aut.push(a);
        }
        Ok(WeightedBasis { ids, aut, index })
    }

    /// A plain set: every aut order is one.
    pub fn plain<S: Into<String>>(ids: impl IntoIterator<Item = S>) -> Result<Self> {
        Self::new(ids.into_iter().map(|s| (s.into(), 1)).collect())
    }

    /// The classes of level `n`.
    pub fn from_level(data: &WeightedClassData, n: usize) -> Self {
        let entries = data.set().level(n).iter().cloned().zip(data.aut_level(n).iter().copied()).collect();
        Self::new(entries).expect("levels have distinct ids")
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id(&self, k: usize) -> &str {
        &self.ids[k]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn aut(&self, k: usize) -> u64 {
        self.aut[k]
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Pairs in lexicographic order; the pair `(a, b)` sits at `a * other.len() + b`.
    pub fn tensor(&self, other: &WeightedBasis) -> WeightedBasis {
        let mut entries = Vec::with_capacity(self.len() * other.len());
        for (a, x) in self.ids.iter().enumerate() {
            for (b, y) in other.ids.iter().enumerate() {
                entries.push((format!("{x}{TENSOR}{y}"), self.aut[a] * other.aut[b]));
            }
        }
        WeightedBasis::new(entries).expect("tensor ids are distinct")
    }
}

/// Sparse exact matrix; entries keyed by (row, column) positions in the bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: WeightedBasis,
    cols: WeightedBasis,
    entries: BTreeMap<(usize, usize), Rational>,
}

impl QMatrix {
    pub fn zero(rows: WeightedBasis, cols: WeightedBasis) -> Self {
        QMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(basis: WeightedBasis) -> Self {
        let mut m = QMatrix::zero(basis.clone(), basis);
        for k in 0..m.rows.len() {
            m.entries.insert((k, k), Rational::one());
        }
        m
    }

    pub fn rows(&self) -> &WeightedBasis {
        &self.rows
    }

    pub fn cols(&self) -> &WeightedBasis {
        &self.cols
    }

    /// Adds `value` to the entry, dropping it when the sum is zero.
    pub fn add_to(&mut self, row: usize, col: usize, value: &Rational) {
        assert!(row < self.rows.len() && col < self.cols.len(), "entry outside the declared bases");
        let e = self.entries.entry((row, col)).or_default();
        *e += value;
        if e.is_zero() {
            self.entries.remove(&(row, col));
        }
    }

    pub fn get(&self, row: usize, col: usize) -> Rational {
        self.entries.get(&(row, col)).cloned().unwrap_or_default()
    }

    /// Entry by ids; zero when either id is not in the basis.
    pub fn get_by_id(&self, row: &str, col: &str) -> Rational {
        match (self.rows.position(row), self.cols.position(col)) {
            (Some(r), Some(c)) => self.get(r, c),
            _ => Rational::zero(),
        }
    }

    /// Nonzero entries in basis order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Nonzero entries of one column.
    pub fn column(&self, col: usize) -> Vec<(usize, Rational)> {
        self.entries.iter().filter(|((_, c), _)| *c == col).map(|(&(r, _), v)| (r, v.clone())).collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.cols.ids != other.rows.ids {
            return Err(Error::Malformed("composing matrices over different bases".into()));
        }
        let mut by_row: HashMap<usize, Vec<(usize, &Rational)>> = HashMap::new();
        for (&(r, c), v) in &self.entries {
            by_row.entry(c).or_default().push((r, v));
        }
        let mut out = QMatrix::zero(self.rows.clone(), other.cols.clone());
        for (&(mid, c), w) in &other.entries {
            if let Some(list) = by_row.get(&mid) {
                for &(r, v) in list {
                    out.add_to(r, c, &(v * w));
                }
            }
        }
        Ok(out)
    }

    pub fn plus(&self, other: &QMatrix) -> Result<QMatrix> {
        self.combine(other, &Rational::one())
    }

    pub fn minus(&self, other: &QMatrix) -> Result<QMatrix> {
        self.combine(other, &Rational::from_integer(-1))
    }

    fn combine(&self, other: &QMatrix, scale: &Rational) -> Result<QMatrix> {
        if self.rows.ids != other.rows.ids || self.cols.ids != other.cols.ids {
            return Err(Error::Malformed("adding matrices over different bases".into()));
        }
        let mut out = self.clone();
        for (&(r, c), v) in &other.entries {
            out.add_to(r, c, &(v * scale));
        }
        Ok(out)
    }

    pub fn scaled(&self, s: &Rational) -> QMatrix {
        let mut out = QMatrix::zero(self.rows.clone(), self.cols.clone());
        for (&(r, c), v) in &self.entries {
            out.add_to(r, c, &(v * s));
        }
        out
    }

    /// CSV with header `row,col,num,den`, in basis order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("row,col,num,den\n");
        for (&(r, c), v) in &self.entries {
            out.push_str(&format!(
                "{},{},{},{}\n",
                csv_field(self.rows.id(r)),
                csv_field(self.cols.id(c)),
                v.numer(),
                v.denom()
            ));
        }
        out
    }

    pub fn to_document(&self) -> MatrixDocument {
        let basis = |b: &WeightedBasis| {
            b.ids.iter().zip(&b.aut).map(|(id, &aut_order)| BasisEntry { id: id.clone(), aut_order }).collect()
        };
        MatrixDocument {
            rows: basis(&self.rows),
            cols: basis(&self.cols),
            entries: self
                .entries
                .iter()
                .map(|(&(r, c), v)| (self.rows.id(r).to_string(), self.cols.id(c).to_string(), v.clone()))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("matrix documents serialise")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: MatrixDocument = serde_json::from_str(s)?;
        doc.to_matrix()
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (&(r, c), v) in &self.entries {
            writeln!(f, "[{} <- {}] = {}", self.rows.id(r), self.cols.id(c), v)?;
        }
        Ok(())
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisEntry {
    pub id: String,
    pub aut_order: u64,
}

/// JSON form of a [`QMatrix`]: both bases and `(row id, col id, value)` triples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDocument {
    pub rows: Vec<BasisEntry>,
    pub cols: Vec<BasisEntry>,
    pub entries: Vec<(String, String, Rational)>,
}

impl MatrixDocument {
    pub fn to_matrix(&self) -> Result<QMatrix> {
        let basis = |b: &[BasisEntry]| WeightedBasis::new(b.iter().map(|e| (e.id.clone(), e.aut_order)).collect());
        let mut m = QMatrix::zero(basis(&self.rows)?, basis(&self.cols)?);
        for (r, c, v) in &self.entries {
            let (Some(ri), Some(ci)) = (m.rows.position(r), m.cols.position(c)) else {
                return Err(Error::UnknownBasis(format!("entry ({r}, {c}) outside the declared bases")));
            };
            m.add_to(ri, ci, v);
        }
        Ok(m)
    }
}

/// The matrix of the span `source <-p- middle -q-> target`: the entry at
/// `(q(m), p(m))` accumulates `aut(p(m)) / aut(m)`.
pub fn span_to_matrix(
    middle: &WeightedBasis,
    p: &[usize],
    q: &[usize],
    source: &WeightedBasis,
    target: &WeightedBasis,
) -> Result<QMatrix> {
    if p.len() != middle.len() || q.len() != middle.len() {
        return Err(Error::Malformed(format!(
            "span legs have lengths {} and {} but the middle has {} classes",
            p.len(),
            q.len(),
            middle.len()
        )));
    }
    let mut m = QMatrix::zero(target.clone(), source.clone());
    for k in 0..middle.len() {
        if p[k] >= source.len() || q[k] >= target.len() {
            return Err(Error::Malformed(format!("span leg sends `{}` out of range", middle.id(k))));
        }
        m.add_to(q[k], p[k], &Rational::ratio(source.aut(p[k]), middle.aut(k)));
    }
    Ok(m)
}

/// Kronecker product with lexicographically ordered pair bases.
pub fn tensor_product(a: &QMatrix, b: &QMatrix) -> QMatrix {
    let rows = a.rows.tensor(&b.rows);
    let cols = a.cols.tensor(&b.cols);
    let (br, bc) = (b.rows.len(), b.cols.len());
    let mut out = QMatrix::zero(rows, cols);
    for (&(r1, c1), v1) in &a.entries {
        for (&(r2, c2), v2) in &b.entries {
            out.add_to(r1 * br + r2, c1 * bc + c2, &(v1 * v2));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn basis(n: usize) -> WeightedBasis {
        WeightedBasis::plain((0..n).map(|k| format!("x{k}"))).unwrap()
    }

    #[test]
    fn identity_span_gives_identity() {
        let b = basis(4);
        let legs: Vec<usize> = (0..4).collect();
        assert_eq!(span_to_matrix(&b, &legs, &legs, &b, &b).unwrap(), QMatrix::identity(b));
    }

    #[test]
    fn single_class_with_symmetry() {
        let point = WeightedBasis::plain(["*"]).unwrap();
        let middle = WeightedBasis::new(vec![("m".into(), 6)]).unwrap();
        let m = span_to_matrix(&middle, &[0], &[0], &point, &point).unwrap();
        assert_eq!(m.get(0, 0), Rational::new(1, 6));
    }

    #[test]
    fn tensor_of_scalars_and_identity_blocks() {
        let p = WeightedBasis::plain(["*"]).unwrap();
        let mut a = QMatrix::zero(p.clone(), p.clone());
        a.add_to(0, 0, &Rational::from_integer(3));
        let mut b = a.clone();
        b.add_to(0, 0, &Rational::from_integer(2));
        assert_eq!(tensor_product(&a, &b).get(0, 0), Rational::from_integer(15));

        let mut m = QMatrix::zero(basis(2), basis(2));
        m.add_to(0, 1, &Rational::new(1, 2));
        m.add_to(1, 0, &Rational::from_integer(-1));
        let t = tensor_product(&QMatrix::identity(basis(2)), &m);
        for (r, c, v) in t.entries() {
            assert_eq!(r / 2, c / 2, "off the diagonal blocks");
            assert_eq!(*v, m.get(r % 2, c % 2));
        }
        assert_eq!(t.nnz(), 4);
    }

    #[test]
    fn csv_is_in_basis_order() {
        let mut m = QMatrix::zero(basis(2), basis(2));
        m.add_to(1, 0, &Rational::new(-2, 3));
        m.add_to(0, 1, &Rational::one());
        assert_eq!(m.to_csv(), "row,col,num,den\nx0,x1,1,1\nx1,x0,-2,3\n");
    }

    fn arb_matrix() -> impl Strategy<Value = QMatrix> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec((0..r, 0..c, -20i64..20, 1i64..7), 0..12).prop_map(move |es| {
                let rows = WeightedBasis::new((0..r).map(|k| (format!("r,{k}"), k as u64 + 1)).collect()).unwrap();
                let mut m = QMatrix::zero(rows, basis(c));
                for (i, j, n, d) in es {
                    m.add_to(i, j, &Rational::new(n, d));
                }
                m
            })
        })
    }

    proptest! {
        #[test]
        fn json_round_trip(m in arb_matrix()) {
            let back = QMatrix::from_json(&m.to_json()).unwrap();
            prop_assert_eq!(&back, &m);
            prop_assert_eq!(back.to_json(), m.to_json());
        }

        #[test]
        fn span_matrices_compose_like_pullbacks(
            p1 in proptest::collection::vec(0usize..3, 0..6),
            q1 in proptest::collection::vec(0usize..3, 0..6),
            p2 in proptest::collection::vec(0usize..3, 0..6),
            q2 in proptest::collection::vec(0usize..3, 0..6),
        ) {
            let n1 = p1.len().min(q1.len());
            let n2 = p2.len().min(q2.len());
            let (p1, q1, p2, q2) = (&p1[..n1], &q1[..n1], &p2[..n2], &q2[..n2]);
            let x = basis(3);
            let a = span_to_matrix(&basis(n1), p1, q1, &x, &x).unwrap();
            let b = span_to_matrix(&basis(n2), p2, q2, &x, &x).unwrap();
            // Pullback middle: pairs (s, t) with q1(s) = p2(t).
            let mut pp = Vec::new();
            let mut qq = Vec::new();
            for s in 0..n1 {
                for t in 0..n2 {
                    if q1[s] == p2[t] {
                        pp.push(p1[s]);
                        qq.push(q2[t]);
                    }
                }
            }
            let c = span_to_matrix(&basis(pp.len()), &pp, &qq, &x, &x).unwrap();
            prop_assert_eq!(b.compose(&a).unwrap(), c);
        }
    }
}
