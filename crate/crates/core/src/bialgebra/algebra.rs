//! Target algebras for convolution and characters into them.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::simplicial::{parse_list, FreeProductRule};

use super::Vector;

/// An algebra with a distinguished basis of labels.
pub trait TargetAlgebra {
    fn name(&self) -> String;
    fn unit(&self) -> String;
    fn multiply(&self, a: &str, b: &str) -> Result<Vector>;

    fn multiply_vectors(&self, x: &Vector, y: &Vector) -> Result<Vector> {
        let mut out = Vector::zero();
        for (a, c) in x.terms() {
            for (b, d) in y.terms() {
                out.add_scaled(&self.multiply(a, b)?, &(c * d));
            }
        }
        Ok(out)
    }
}

/// The ground field, with the single basis label `1`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Scalars;

pub const SCALAR: &str = "1";

impl TargetAlgebra for Scalars {
    fn name(&self) -> String {
        "scalars".into()
    }

    fn unit(&self) -> String {
        SCALAR.into()
    }

    fn multiply(&self, a: &str, b: &str) -> Result<Vector> {
        if a == SCALAR && b == SCALAR {
            Ok(Vector::basis(SCALAR))
        } else {
            Err(Error::ClosureEscape { left: a.into(), right: b.into() })
        }
    }
}

/// Partial monoid on level-1 labels: the finite product table, then the
/// free rule for labels outside it.
#[derive(Clone, Debug)]
pub struct LabelMonoid {
    unit: String,
    table: HashMap<(String, String), String>,
    free: Option<FreeProductRule>,
    degenerate: HashSet<String>,
}

impl LabelMonoid {
    pub fn new(
        unit: String,
        table: HashMap<(String, String), String>,
        free: Option<FreeProductRule>,
        degenerate: HashSet<String>,
    ) -> Self {
        LabelMonoid { unit, table, free, degenerate }
    }

    pub fn unit(&self) -> &str {
        &self.unit
    }

    pub fn free(&self) -> Option<FreeProductRule> {
        self.free
    }

    pub fn product(&self, a: &str, b: &str) -> Option<String> {
        if let Some(p) = self.table.get(&(a.to_string(), b.to_string())) {
            return Some(p.clone());
        }
        if a == self.unit {
            return Some(b.to_string());
        }
        if b == self.unit {
            return Some(a.to_string());
        }
        self.free.and_then(|r| r.product(a, b))
    }

    pub fn is_degenerate(&self, label: &str) -> bool {
        self.degenerate.contains(label) || self.free.and_then(|r| r.is_degenerate(label)).unwrap_or(false)
    }
}

impl TargetAlgebra for LabelMonoid {
    fn name(&self) -> String {
        "incidence bialgebra".into()
    }

    fn unit(&self) -> String {
        self.unit.clone()
    }

    fn multiply(&self, a: &str, b: &str) -> Result<Vector> {
        self.product(a, b)
            .map(Vector::basis)
            .ok_or_else(|| Error::ClosureEscape { left: a.into(), right: b.into() })
    }
}

/// The connected quotient as a monoid: labels modulo the congruence generated
/// by identifying every degenerate label with the unit.
#[derive(Clone, Debug)]
pub struct QuotientMonoid {
    pub monoid: LabelMonoid,
    classes: HashMap<String, String>,
}

impl QuotientMonoid {
    /// Computes the classes of the given labels. With a free rule the class
    /// representative drops every part equal to one; otherwise classes are
    /// closed under the product table until stable.
    pub fn new(monoid: LabelMonoid, labels: &[String]) -> Self {
        let mut classes = HashMap::new();
        if let Some(rule) = monoid.free {
            for l in labels {
                if let Some(r) = rule.reduce(l) {
                    classes.insert(l.clone(), r);
                }
            }
            return QuotientMonoid { monoid, classes };
        }
        let n = labels.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut k: usize) -> usize {
            while parent[k] != k {
                parent[k] = parent[parent[k]];
                k = parent[k];
            }
            k
        }
        let index: HashMap<&str, usize> = labels.iter().enumerate().map(|(k, l)| (l.as_str(), k)).collect();
        let mut products = Vec::new();
        for (a, la) in labels.iter().enumerate() {
            for (b, lb) in labels.iter().enumerate() {
                if let Some(&p) = monoid.product(la, lb).as_deref().and_then(|p| index.get(p)) {
                    products.push((a, b, p));
                }
            }
        }
        if let Some(&u) = index.get(monoid.unit.as_str()) {
            for (k, l) in labels.iter().enumerate() {
                if monoid.is_degenerate(l) {
                    let (rk, ru) = (find(&mut parent, k), find(&mut parent, u));
                    parent[rk] = ru;
                }
            }
        }
        loop {
            let mut changed = false;
            let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
            for &(a, b, p) in &products {
                let key = (find(&mut parent, a), find(&mut parent, b));
                let rp = find(&mut parent, p);
                match seen.get(&key) {
                    Some(&q) => {
                        let rq = find(&mut parent, q);
                        if rq != rp {
                            parent[rp] = rq;
                            changed = true;
                        }
                    }
                    None => {
                        seen.insert(key, p);
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let mut best: HashMap<usize, &String> = HashMap::new();
        for (k, l) in labels.iter().enumerate() {
            let r = find(&mut parent, k);
            let entry = best.entry(r).or_insert(l);
            let better = if *l == monoid.unit {
                true
            } else {
                **entry != monoid.unit && (l.len(), l) < (entry.len(), *entry)
            };
            if better {
                *entry = l;
            }
        }
        for (k, l) in labels.iter().enumerate() {
            let r = find(&mut parent, k);
            classes.insert(l.clone(), best[&r].clone());
        }
        QuotientMonoid { monoid, classes }
    }

    pub fn project(&self, label: &str) -> String {
        if let Some(r) = self.classes.get(label) {
            return r.clone();
        }
        if let Some(r) = self.monoid.free.and_then(|f| f.reduce(label)) {
            return r;
        }
        if self.monoid.is_degenerate(label) {
            self.monoid.unit.clone()
        } else {
            label.to_string()
        }
    }
}

impl TargetAlgebra for QuotientMonoid {
    fn name(&self) -> String {
        "connected quotient".into()
    }

    fn unit(&self) -> String {
        self.monoid.unit.clone()
    }

    fn multiply(&self, a: &str, b: &str) -> Result<Vector> {
        let p = self.monoid.product(a, b).ok_or_else(|| Error::ClosureEscape { left: a.into(), right: b.into() })?;
        Ok(Vector::basis(self.project(&p)))
    }
}

/// A finite-dimensional algebra given by structure constants on a labelled basis.
#[derive(Clone, Debug)]
pub struct StructureConstants {
    pub name: String,
    pub basis: Vec<String>,
    pub unit: String,
    pub products: BTreeMap<(String, String), Vector>,
}

impl StructureConstants {
    /// `t^0, ..., t^degree` with `t^i t^j = t^{i+j}`; higher products escape.
    pub fn truncated_polynomials(degree: usize) -> Self {
        let basis: Vec<String> = (0..=degree).map(monomial).collect();
        let mut products = BTreeMap::new();
        for i in 0..=degree {
            for j in 0..=degree - i {
                products.insert((monomial(i), monomial(j)), Vector::basis(monomial(i + j)));
            }
        }
        StructureConstants { name: format!("polynomials of degree <= {degree}"), basis, unit: monomial(0), products }
    }
}

pub fn monomial(k: usize) -> String {
    format!("t^{k}")
}

impl TargetAlgebra for StructureConstants {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn unit(&self) -> String {
        self.unit.clone()
    }

    fn multiply(&self, a: &str, b: &str) -> Result<Vector> {
        self.products
            .get(&(a.to_string(), b.to_string()))
            .cloned()
            .ok_or_else(|| Error::ClosureEscape { left: a.into(), right: b.into() })
    }
}

/// A linear map from level-1 labels into a target algebra.
pub trait Character {
    fn name(&self) -> String;
    fn apply(&self, label: &str) -> Result<Vector>;
}

/// Every label goes to `1`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Zeta;

impl Character for Zeta {
    fn name(&self) -> String {
        "zeta".into()
    }

    fn apply(&self, _label: &str) -> Result<Vector> {
        Ok(Vector::basis(SCALAR))
    }
}

/// A composition `(c_1,...,c_n)` of `m` goes to `t^{m-n}`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Defect;

impl Character for Defect {
    fn name(&self) -> String {
        "defect".into()
    }

    fn apply(&self, label: &str) -> Result<Vector> {
        let parts = parse_list(label, '(', ')').ok_or_else(|| Error::UnknownBasis(label.to_string()))?;
        let m: usize = parts.iter().sum();
        Ok(Vector::basis(monomial(m - parts.len())))
    }
}

/// The projection onto the connected quotient.
#[derive(Clone, Debug)]
pub struct Projection(pub QuotientMonoid);

impl Character for Projection {
    fn name(&self) -> String {
        "quotient map".into()
    }

    fn apply(&self, label: &str) -> Result<Vector> {
        Ok(Vector::basis(self.0.project(label)))
    }
}

/// A character given by an explicit table of values.
#[derive(Clone, Debug)]
pub struct TableCharacter {
    pub name: String,
    pub values: BTreeMap<String, Vector>,
}

impl Character for TableCharacter {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn apply(&self, label: &str) -> Result<Vector> {
        self.values.get(label).cloned().ok_or_else(|| Error::UnknownBasis(label.to_string()))
    }
}

pub(crate) fn scalar(c: Rational) -> Vector {
    Vector::term(SCALAR, c)
}
