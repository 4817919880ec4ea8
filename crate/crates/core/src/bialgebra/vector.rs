//! Sparse vectors over labels and linear maps out of the bialgebra basis.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{QMatrix, WeightedBasis};
use crate::rational::Rational;

/// Finite formal sum of labels with rational coefficients; zeros are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Vector(BTreeMap<String, Rational>);

impl Vector {
    pub fn zero() -> Self {
        Vector(BTreeMap::new())
    }

    pub fn basis(label: impl Into<String>) -> Self {
        Vector(BTreeMap::from([(label.into(), Rational::one())]))
    }

    pub fn term(label: impl Into<String>, c: Rational) -> Self {
        let mut v = Vector::zero();
        v.add_term(&label.into(), &c);
        v
    }

    pub fn add_term(&mut self, label: &str, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.0.entry(label.to_string()).or_default();
        *e += c;
        if e.is_zero() {
            self.0.remove(label);
        }
    }

    pub fn add_scaled(&mut self, other: &Vector, c: &Rational) {
        for (l, v) in &other.0 {
            self.add_term(l, &(v * c));
        }
    }

    pub fn scaled(&self, c: &Rational) -> Vector {
        let mut out = Vector::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn minus(&self, other: &Vector) -> Vector {
        let mut out = self.clone();
        out.add_scaled(other, &Rational::from_integer(-1));
        out
    }

    pub fn coefficient(&self, label: &str) -> Rational {
        self.0.get(label).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&str, &Rational)> {
        self.0.iter().map(|(l, c)| (l.as_str(), c))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of all coefficients.
    pub fn total(&self) -> Rational {
        self.0.values().cloned().sum()
    }

    /// Applies a linear map given on labels.
    pub fn map(&self, mut f: impl FnMut(&str) -> Result<Vector>) -> Result<Vector> {
        let mut out = Vector::zero();
        for (l, c) in &self.0 {
            out.add_scaled(&f(l)?, c);
        }
        Ok(out)
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (k, (l, c)) in self.0.iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c.clone() } else { c.clone() };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if abs == Rational::one() {
                write!(f, "{l}")?;
            } else {
                write!(f, "{abs}*{l}")?;
            }
        }
        Ok(())
    }
}

/// A linear map out of the bialgebra: one image vector per basis element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearMap {
    pub columns: Vec<Vector>,
}

impl LinearMap {
    pub fn zero(dim: usize) -> Self {
        LinearMap { columns: vec![Vector::zero(); dim] }
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, k: usize) -> &Vector {
        &self.columns[k]
    }

    pub fn plus(&self, other: &LinearMap) -> LinearMap {
        self.combine(other, &Rational::one())
    }

    pub fn minus(&self, other: &LinearMap) -> LinearMap {
        self.combine(other, &Rational::from_integer(-1))
    }

    fn combine(&self, other: &LinearMap, c: &Rational) -> LinearMap {
        assert_eq!(self.dim(), other.dim(), "linear maps on different bases");
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| {
                let mut v = a.clone();
                v.add_scaled(b, c);
                v
            })
            .collect();
        LinearMap { columns }
    }

    pub fn scaled(&self, c: &Rational) -> LinearMap {
        LinearMap { columns: self.columns.iter().map(|v| v.scaled(c)).collect() }
    }

    /// Post-composes with a linear map given on labels.
    pub fn then(&self, mut f: impl FnMut(&str) -> Result<Vector>) -> Result<LinearMap> {
        let columns = self.columns.iter().map(|v| v.map(&mut f)).collect::<Result<_>>()?;
        Ok(LinearMap { columns })
    }

    /// Columns on which the two maps differ.
    pub fn differing_columns(&self, other: &LinearMap) -> Vec<usize> {
        (0..self.dim()).filter(|&k| self.columns[k] != other.columns[k]).collect()
    }

    /// Every label occurring in some column, in label order.
    pub fn labels(&self) -> Vec<String> {
        let mut out: Vec<String> = self.columns.iter().flat_map(|v| v.terms().map(|(l, _)| l.to_string())).collect();
        out.sort();
        out.dedup();
        out
    }

    /// The matrix with the given row basis; every label must belong to it.
    pub fn to_matrix(&self, domain: &WeightedBasis, target: &WeightedBasis) -> Result<QMatrix> {
        assert_eq!(domain.len(), self.dim(), "domain basis does not match the map");
        let mut m = QMatrix::zero(target.clone(), domain.clone());
        for (c, v) in self.columns.iter().enumerate() {
            for (l, x) in v.terms() {
                let r = target.position(l).ok_or_else(|| Error::UnknownBasis(l.to_string()))?;
                m.add_to(r, c, x);
            }
        }
        Ok(m)
    }
}
