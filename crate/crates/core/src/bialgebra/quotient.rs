//! The connected quotient by the ideal generated by degenerate classes minus
//! the unit.

use crate::error::{Error, Result};
use crate::linalg::{QMatrix, WeightedBasis};
use crate::rational::Rational;
use crate::simplicial::CheckResult;

use super::{weak_antipode, CoproductTerm, IncidenceBialgebra, LinearMap, QuotientMonoid, TargetAlgebra, Vector};

#[derive(Clone, Debug)]
pub struct ConnectedQuotient {
    /// The unit followed by one representative per remaining class.
    pub basis: WeightedBasis,
    /// The quotient map, from the bialgebra basis to `basis`.
    pub projection: QMatrix,
    pub coproduct: Vec<Vec<CoproductTerm>>,
    /// The antipode, one column per element of `basis`.
    pub antipode: LinearMap,
    pub monoid: QuotientMonoid,
    pub check: CheckResult,
}

impl ConnectedQuotient {
    pub fn label(&self, k: usize) -> &str {
        self.basis.id(k)
    }

    pub fn project(&self, label: &str) -> String {
        self.monoid.project(label)
    }
}

/// Builds the quotient, its antipode by the connected recursion
/// `S(h) = ε(h) 1 - Σ' S(h') h''` in order of length, and checks that the
/// projection carries the weak antipode to it.
pub fn connected_quotient(b: &IncidenceBialgebra) -> Result<ConnectedQuotient> {
    let monoid = QuotientMonoid::new(b.monoid()?.clone(), b.basis().ids());
    let unit = b.require(b.unit_label()?)?;
    let mut members = vec![unit];
    for k in 0..b.dim() {
        let rep = b.require(&monoid.project(b.label(k)))?;
        if !members.contains(&rep) {
            members.push(rep);
        }
    }
    let basis = WeightedBasis::new(members.iter().map(|&k| (b.label(k).to_string(), b.basis().aut(k))).collect())?;
    let to_h = |k: usize| basis.position(&monoid.project(b.label(k))).unwrap();

    let mut projection = QMatrix::zero(basis.clone(), b.basis().clone());
    for k in 0..b.dim() {
        projection.add_to(to_h(k), k, &Rational::one());
    }
    let mut coproduct = vec![vec![CoproductTerm { left: 0, right: 0, coefficient: Rational::one() }]];
    for &k in &members[1..] {
        let mut terms: Vec<CoproductTerm> = Vec::new();
        for t in b.coproduct(k) {
            let (l, r) = (to_h(t.left), to_h(t.right));
            match terms.iter_mut().find(|x| x.left == l && x.right == r) {
                Some(x) => x.coefficient += &t.coefficient,
                None => terms.push(CoproductTerm { left: l, right: r, coefficient: t.coefficient.clone() }),
            }
        }
        terms.retain(|t| !t.coefficient.is_zero());
        coproduct.push(terms);
    }

    let mut order: Vec<usize> = (1..members.len()).collect();
    order.sort_by_key(|&h| (b.length(members[h]), h));
    let mut antipode: Vec<Option<Vector>> = vec![None; members.len()];
    antipode[0] = Some(Vector::basis(basis.id(0)));
    for &h in &order {
        let mut v = Vector::zero();
        for t in &coproduct[h] {
            if t.right == 0 {
                continue;
            }
            let Some(sa) = &antipode[t.left] else {
                return Err(Error::ExactnessNotCertified { columns: vec![basis.id(h).to_string()] });
            };
            let prod = monoid.multiply_vectors(sa, &Vector::basis(basis.id(t.right)))?;
            v.add_scaled(&prod, &-t.coefficient.clone());
        }
        antipode[h] = Some(v);
    }
    let antipode = LinearMap { columns: antipode.into_iter().map(Option::unwrap).collect() };

    let mut check = CheckResult::new("connected quotient");
    let s = weak_antipode(b)?;
    for k in 0..b.dim() {
        check.checked += 1;
        let lhs = s.column(k).map(|l| Ok(Vector::basis(monoid.project(l))))?;
        let rhs = antipode.column(to_h(k));
        if &lhs != rhs {
            check.fail(format!("π∘S at `{}` is {lhs} but S_H∘π gives {rhs}", b.label(k)));
        }
    }
    // The recursion makes S_H a right inverse; check it is a left inverse too.
    for (h, terms) in coproduct.iter().enumerate() {
        check.checked += 1;
        let mut v = Vector::zero();
        for t in terms {
            let prod = monoid.multiply_vectors(&Vector::basis(basis.id(t.left)), antipode.column(t.right))?;
            v.add_scaled(&prod, &t.coefficient);
        }
        let want = if h == 0 { Vector::basis(basis.id(0)) } else { Vector::zero() };
        if v != want {
            check.fail(format!("Id ∗ S_H at `{}` is {v}", basis.id(h)));
        }
    }
    Ok(ConnectedQuotient { basis, projection, coproduct, antipode, monoid, check })
}
