//! The incidence bialgebra of a monoidal complete decomposition space at the
//! cardinality level: comultiplication, counit and product as exact rational
//! data over the level-1 classes, together with the convolution algebra and
//! the maps built in it.

mod algebra;
mod convolution;
mod inversion;
mod mobius;
mod quotient;
mod vector;

pub use algebra::{
    monomial, Character, Defect, LabelMonoid, Projection, QuotientMonoid, Scalars, StructureConstants,
    TableCharacter, TargetAlgebra, Zeta, SCALAR,
};
pub use convolution::{
    convolve, counit_map, neutral, s_powers, structural_endomorphism, verify_weak_antipode, weak_antipode,
    weak_antipode_partial, ColumnCertificate, Structural, WeakAntipode,
};
pub use inversion::{invert_multiplicative, Inversion};
pub use mobius::{mobius_functor, MobiusData};
pub use quotient::{connected_quotient, ConnectedQuotient};
pub use vector::{LinearMap, Vector};

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::linalg::{span_to_matrix, QMatrix, WeightedBasis};
use crate::rational::Rational;
use crate::simplicial::{check_finiteness, validate_structure, FinitenessReport, WeightedClassData};

/// One term `coefficient * left ⊗ right` of a coproduct, by basis position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoproductTerm {
    pub left: usize,
    pub right: usize,
    pub coefficient: Rational,
}

/// Level-1 classes with comultiplication, counit, optional product, and the
/// length of every basis element.
#[derive(Clone, Debug)]
pub struct IncidenceBialgebra {
    data: WeightedClassData,
    basis: WeightedBasis,
    degenerate: Vec<bool>,
    coproduct: Vec<Vec<CoproductTerm>>,
    finiteness: FinitenessReport,
    monoid: Option<LabelMonoid>,
}

/// Builds the bialgebra and checks coassociativity, the counit laws and, when
/// a product is present, compatibility of product and coproduct.
pub fn build_bialgebra(data: &WeightedClassData) -> Result<IncidenceBialgebra> {
    let x = data.set();
    if x.truncation() < 2 {
        return Err(Error::TruncationExceeded { requested: 2, truncation: x.truncation() });
    }
    let report = validate_structure(x);
    if let Some(m) = report.malformed.first() {
        return Err(Error::Malformed(m.clone()));
    }
    if let Some(v) = report.violations.first() {
        return Err(Error::AxiomViolation {
            axiom: "simplicial identities".into(),
            witness: format!("{} at level {} on `{}`", v.identity, v.level, v.simplex),
        });
    }
    let basis = WeightedBasis::from_level(data, 1);
    let n1 = basis.len();
    let degenerate: Vec<bool> = x.nondegenerate_table()[1].iter().map(|nd| !nd).collect();

    let pairs: Vec<usize> = (0..x.len(2)).map(|k| x.face(2, 2, k) * n1 + x.face(2, 0, k)).collect();
    let delta = span_to_matrix(&WeightedBasis::from_level(data, 2), x.face_map(2, 1), &pairs, &basis, &basis.tensor(&basis))?;
    let mut coproduct = vec![Vec::new(); n1];
    for (r, c, v) in delta.entries() {
        coproduct[c].push(CoproductTerm { left: r / n1, right: r % n1, coefficient: v.clone() });
    }

    let point = WeightedBasis::plain([SCALAR])?;
    let eps = span_to_matrix(&WeightedBasis::from_level(data, 0), x.degeneracy_map(0, 0), &vec![0; x.len(0)], &basis, &point)?;
    for f in 0..n1 {
        let expected = if degenerate[f] { Rational::one() } else { Rational::zero() };
        if eps.get(0, f) != expected {
            return Err(Error::AxiomViolation {
                axiom: "counit is the indicator of degenerate classes".into(),
                witness: format!("counit of `{}` is {}", basis.id(f), eps.get(0, f)),
            });
        }
    }

    let monoid = label_monoid(data)?;

    let finiteness = check_finiteness(data);
    let b = IncidenceBialgebra { data: data.clone(), basis, degenerate, coproduct, finiteness, monoid };
    b.check_coalgebra()?;
    b.check_compatibility()?;
    Ok(b)
}

/// The level-1 product as a monoid on labels, when the data carries one.
pub fn label_monoid(data: &WeightedClassData) -> Result<Option<LabelMonoid>> {
    let x = data.set();
    let Some(m) = data.monoidal() else {
        return Ok(None);
    };
    if m.levels() < 2 {
        return Err(Error::Malformed("monoidal structure has no product on level 1".into()));
    }
    let unit = x.id(1, x.degeneracy(0, 0, m.unit)).to_string();
    let table: HashMap<(String, String), String> = m.products[1]
        .iter()
        .map(|(&(a, b), &c)| ((x.id(1, a).to_string(), x.id(1, b).to_string()), x.id(1, c).to_string()))
        .collect();
    let table_nd = x.nondegenerate_table();
    let degen: HashSet<String> = (0..x.len(1)).filter(|&k| !table_nd[1][k]).map(|k| x.id(1, k).to_string()).collect();
    Ok(Some(LabelMonoid::new(unit, table, m.free, degen)))
}

impl IncidenceBialgebra {
    pub fn data(&self) -> &WeightedClassData {
        &self.data
    }

    pub fn basis(&self) -> &WeightedBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn label(&self, k: usize) -> &str {
        self.basis.id(k)
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.basis.position(label)
    }

    /// Position of a label, or [`Error::UnknownBasis`].
    pub fn require(&self, label: &str) -> Result<usize> {
        self.position(label).ok_or_else(|| Error::UnknownBasis(label.to_string()))
    }

    pub fn is_degenerate(&self, k: usize) -> bool {
        self.degenerate[k]
    }

    /// Degeneracy of any label, including free products outside the basis.
    pub fn is_degenerate_label(&self, label: &str) -> bool {
        match self.position(label) {
            Some(k) => self.degenerate[k],
            None => self.monoid.as_ref().is_some_and(|m| m.is_degenerate(label)),
        }
    }

    pub fn coproduct(&self, k: usize) -> &[CoproductTerm] {
        &self.coproduct[k]
    }

    pub fn counit(&self, k: usize) -> Rational {
        if self.degenerate[k] {
            Rational::one()
        } else {
            Rational::zero()
        }
    }

    pub fn finiteness(&self) -> &FinitenessReport {
        &self.finiteness
    }

    pub fn length(&self, k: usize) -> usize {
        self.finiteness.length[k]
    }

    pub fn is_certified(&self, k: usize) -> bool {
        self.finiteness.is_certified(k)
    }

    pub fn monoid(&self) -> Result<&LabelMonoid> {
        self.monoid.as_ref().ok_or(Error::MissingMonoidal)
    }

    pub fn has_product(&self) -> bool {
        self.monoid.is_some()
    }

    pub fn unit_label(&self) -> Result<&str> {
        Ok(self.monoid()?.unit())
    }

    pub fn multiply(&self, a: &str, b: &str) -> Result<String> {
        self.monoid()?.product(a, b).ok_or_else(|| Error::ClosureEscape { left: a.into(), right: b.into() })
    }

    /// `X_0` has a single class.
    pub fn is_connected(&self) -> bool {
        self.data.is_connected()
    }

    /// Δ as a matrix from the basis to pairs of basis elements.
    pub fn coproduct_matrix(&self) -> QMatrix {
        let n = self.dim();
        let mut m = QMatrix::zero(self.basis.tensor(&self.basis), self.basis.clone());
        for (f, terms) in self.coproduct.iter().enumerate() {
            for t in terms {
                m.add_to(t.left * n + t.right, f, &t.coefficient);
            }
        }
        m
    }

    /// ε as a one-row matrix.
    pub fn counit_matrix(&self) -> QMatrix {
        let mut m = QMatrix::zero(WeightedBasis::plain([SCALAR]).unwrap(), self.basis.clone());
        for f in 0..self.dim() {
            m.add_to(0, f, &self.counit(f));
        }
        m
    }

    /// The product on pairs of basis elements whose product lies in the basis.
    pub fn product_matrix(&self) -> Result<QMatrix> {
        let monoid = self.monoid()?;
        let n = self.dim();
        let mut m = QMatrix::zero(self.basis.clone(), self.basis.tensor(&self.basis));
        for a in 0..n {
            for b in 0..n {
                if let Some(p) = monoid.product(self.label(a), self.label(b)).and_then(|p| self.position(&p)) {
                    m.add_to(p, a * n + b, &Rational::one());
                }
            }
        }
        Ok(m)
    }

    /// The basis followed by every other label the maps use, with automorphism
    /// orders from the free product rule where known.
    pub fn extended_basis(&self, maps: &[&LinearMap]) -> WeightedBasis {
        let mut entries: Vec<(String, u64)> =
            (0..self.dim()).map(|k| (self.label(k).to_string(), self.basis.aut(k))).collect();
        let mut extra: Vec<String> = maps
            .iter()
            .flat_map(|m| m.labels())
            .filter(|l| self.position(l).is_none())
            .collect();
        extra.sort();
        extra.dedup();
        let free = self.monoid.as_ref().and_then(|m| m.free());
        for l in extra {
            let aut = free.and_then(|r| r.aut(&l)).unwrap_or(1);
            entries.push((l, aut));
        }
        WeightedBasis::new(entries).expect("distinct labels")
    }

    fn coproduct_map(&self, f: usize) -> BTreeMap<(usize, usize), Rational> {
        self.coproduct[f].iter().map(|t| ((t.left, t.right), t.coefficient.clone())).collect()
    }

    fn check_coalgebra(&self) -> Result<()> {
        for f in 0..self.dim() {
            let mut left: BTreeMap<(usize, usize, usize), Rational> = BTreeMap::new();
            let mut right: BTreeMap<(usize, usize, usize), Rational> = BTreeMap::new();
            for t in &self.coproduct[f] {
                for s in &self.coproduct[t.left] {
                    *left.entry((s.left, s.right, t.right)).or_default() += &t.coefficient * &s.coefficient;
                }
                for s in &self.coproduct[t.right] {
                    *right.entry((t.left, s.left, s.right)).or_default() += &t.coefficient * &s.coefficient;
                }
            }
            left.retain(|_, v| !v.is_zero());
            right.retain(|_, v| !v.is_zero());
            if left != right {
                let key = left.keys().chain(right.keys()).find(|k| left.get(k) != right.get(k)).unwrap();
                return Err(Error::AxiomViolation {
                    axiom: "coassociativity".into(),
                    witness: format!(
                        "column `{}`, term {}⊗{}⊗{}: {} vs {}",
                        self.label(f),
                        self.label(key.0),
                        self.label(key.1),
                        self.label(key.2),
                        left.get(key).cloned().unwrap_or_default(),
                        right.get(key).cloned().unwrap_or_default()
                    ),
                });
            }
            let mut lc = BTreeMap::new();
            let mut rc = BTreeMap::new();
            for t in &self.coproduct[f] {
                if self.degenerate[t.left] {
                    *lc.entry(t.right).or_insert_with(Rational::zero) += &t.coefficient;
                }
                if self.degenerate[t.right] {
                    *rc.entry(t.left).or_insert_with(Rational::zero) += &t.coefficient;
                }
            }
            lc.retain(|_, v: &mut Rational| !v.is_zero());
            rc.retain(|_, v: &mut Rational| !v.is_zero());
            let id = BTreeMap::from([(f, Rational::one())]);
            if lc != id || rc != id {
                return Err(Error::AxiomViolation {
                    axiom: "counit laws".into(),
                    witness: format!("column `{}`", self.label(f)),
                });
            }
        }
        Ok(())
    }

    fn check_compatibility(&self) -> Result<()> {
        let Some(monoid) = &self.monoid else { return Ok(()) };
        let unit = self.require(monoid.unit())?;
        if self.coproduct_map(unit) != BTreeMap::from([((unit, unit), Rational::one())]) || !self.degenerate[unit] {
            return Err(Error::AxiomViolation {
                axiom: "unit is group-like".into(),
                witness: format!("coproduct of `{}`", monoid.unit()),
            });
        }
        let Some(table) = self.data.monoidal().map(|m| &m.products[1]) else { return Ok(()) };
        for (&(a, b), &p) in table {
            if self.degenerate[p] != (self.degenerate[a] && self.degenerate[b]) {
                return Err(Error::AxiomViolation {
                    axiom: "counit is multiplicative".into(),
                    witness: format!("{} * {} = {}", self.label(a), self.label(b), self.label(p)),
                });
            }
            let mut rhs: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
            for s in &self.coproduct[a] {
                for t in &self.coproduct[b] {
                    let l = self.multiply(self.label(s.left), self.label(t.left))?;
                    let r = self.multiply(self.label(s.right), self.label(t.right))?;
                    let (Some(li), Some(ri)) = (self.position(&l), self.position(&r)) else {
                        return Err(Error::ClosureEscape {
                            left: format!("{}*{}", self.label(s.left), self.label(t.left)),
                            right: format!("{}*{}", self.label(s.right), self.label(t.right)),
                        });
                    };
                    *rhs.entry((li, ri)).or_default() += &s.coefficient * &t.coefficient;
                }
            }
            rhs.retain(|_, v| !v.is_zero());
            if rhs != self.coproduct_map(p) {
                return Err(Error::AxiomViolation {
                    axiom: "coproduct is multiplicative".into(),
                    witness: format!("{} * {} = {}", self.label(a), self.label(b), self.label(p)),
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{
        interval_family_space, monotone_surjection_data, nerve_of_category, FiniteCategorySpec, IntervalFamilySpec,
    };

    fn chain3() -> IncidenceBialgebra {
        let x = nerve_of_category(&FiniteCategorySpec::chain_poset(3), 4).unwrap();
        build_bialgebra(&WeightedClassData::from_set(x, None).unwrap()).unwrap()
    }

    fn terms(b: &IncidenceBialgebra, label: &str) -> Vec<(String, String, Rational)> {
        let mut out: Vec<_> = b
            .coproduct(b.require(label).unwrap())
            .iter()
            .map(|t| (b.label(t.left).to_string(), b.label(t.right).to_string(), t.coefficient.clone()))
            .collect();
        out.sort();
        out
    }

    fn t(a: &str, b: &str, c: i64) -> (String, String, Rational) {
        (a.into(), b.into(), Rational::from_integer(c))
    }

    #[test]
    fn three_chain_coproduct() {
        let b = chain3();
        assert_eq!(terms(&b, "0<=2"), vec![t("0<=0", "0<=2", 1), t("0<=1", "1<=2", 1), t("0<=2", "2<=2", 1)]);
        assert!(!b.has_product());
    }

    #[test]
    fn monotone_coproduct_of_two() {
        let b = build_bialgebra(&monotone_surjection_data(3, 3).unwrap()).unwrap();
        assert_eq!(terms(&b, "(2)"), vec![t("(1,1)", "(2)", 1), t("(2)", "(1)", 1)]);
        assert_eq!(b.unit_label().unwrap(), "()");
    }

    #[test]
    fn boolean_coproducts_are_binomial() {
        let f = interval_family_space(&IntervalFamilySpec::boolean(4)).unwrap();
        let b = build_bialgebra(&f.data).unwrap();
        assert_eq!(terms(&b, "B_2"), vec![t("B_0", "B_2", 1), t("B_1", "B_1", 2), t("B_2", "B_0", 1)]);
        let binom = |n: i64, k: i64| (0..k).fold(1i64, |acc, i| acc * (n - i) / (i + 1));
        for n in 0..=4i64 {
            let got = terms(&b, &format!("B_{n}"));
            let want: Vec<_> =
                (0..=n).map(|k| t(&format!("B_{k}"), &format!("B_{}", n - k), binom(n, k))).collect();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn coproduct_matrix_is_coassociative() {
        use crate::linalg::tensor_product;
        let b = chain3();
        let d = b.coproduct_matrix();
        let id = QMatrix::identity(b.basis().clone());
        let left = tensor_product(&d, &id).compose(&d).unwrap();
        let right = tensor_product(&id, &d).compose(&d).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn counit_marks_identities() {
        let b = chain3();
        for k in 0..b.dim() {
            let (s, t) = b.label(k).split_once("<=").unwrap();
            assert_eq!(b.counit(k) == Rational::one(), s == t);
        }
    }

    #[test]
    fn too_short_truncation_is_rejected() {
        let x = nerve_of_category(&FiniteCategorySpec::chain_poset(2), 1).unwrap();
        let err = build_bialgebra(&WeightedClassData::from_set(x, None).unwrap()).unwrap_err();
        assert!(matches!(err, Error::TruncationExceeded { .. }));
    }
}
