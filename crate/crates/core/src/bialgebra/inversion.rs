//! Convolution inversion of multiplicative characters that kill group-likes.

use crate::error::{Error, Result};
use crate::simplicial::CheckResult;

use super::{convolve, neutral, weak_antipode, Character, IncidenceBialgebra, LinearMap, TargetAlgebra, Vector};

#[derive(Clone, Debug)]
pub struct Inversion {
    pub character: LinearMap,
    /// `φ ∘ S`.
    pub inverse: LinearMap,
    pub check: CheckResult,
}

/// Checks the hypotheses on `phi`, then returns `φ ∘ S` and whether
/// `φ ∗ (φ ∘ S) = η_A ε = (φ ∘ S) ∗ φ`.
pub fn invert_multiplicative(
    b: &IncidenceBialgebra,
    phi: &dyn Character,
    a: &dyn TargetAlgebra,
) -> Result<Inversion> {
    let monoid = b.monoid()?;
    let unit_a = Vector::basis(a.unit());
    let phi_unit = phi.apply(monoid.unit())?;
    for k in (0..b.dim()).filter(|&k| b.is_degenerate(k)) {
        let v = phi.apply(b.label(k))?;
        if v != unit_a {
            return Err(Error::HypothesisFailed {
                condition: "sends group-like elements to the unit".into(),
                witness: format!("{}({}) = {v}", phi.name(), b.label(k)),
            });
        }
        if v.minus(&phi_unit) != Vector::zero() {
            return Err(Error::HypothesisFailed {
                condition: "vanishes on the Hopf ideal".into(),
                witness: format!("{}({} - {})", phi.name(), b.label(k), monoid.unit()),
            });
        }
    }
    for x in 0..b.dim() {
        for y in 0..b.dim() {
            let Some(p) = monoid.product(b.label(x), b.label(y)) else { continue };
            if b.position(&p).is_none() {
                continue;
            }
            let lhs = phi.apply(&p)?;
            let rhs = a.multiply_vectors(&phi.apply(b.label(x))?, &phi.apply(b.label(y))?)?;
            if lhs != rhs {
                return Err(Error::HypothesisFailed {
                    condition: "multiplicative".into(),
                    witness: format!("{0}({1}*{2}) = {lhs} but {0}({1}) {0}({2}) = {rhs}", phi.name(), b.label(x), b.label(y)),
                });
            }
        }
    }
    let character = LinearMap { columns: (0..b.dim()).map(|k| phi.apply(b.label(k))).collect::<Result<_>>()? };
    let inverse = weak_antipode(b)?.then(|l| phi.apply(l))?;
    let e = neutral(b, a);
    let mut check = CheckResult::new(format!("inverse of {}", phi.name()));
    for (name, got) in [
        ("φ ∗ (φ∘S)", convolve(b, &character, &inverse, a)?),
        ("(φ∘S) ∗ φ", convolve(b, &inverse, &character, a)?),
    ] {
        for k in 0..b.dim() {
            check.checked += 1;
            if got.column(k) != e.column(k) {
                check.fail(format!("{name} at `{}`: {} vs {}", b.label(k), got.column(k), e.column(k)));
            }
        }
    }
    Ok(Inversion { character, inverse, check })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bialgebra::{build_bialgebra, mobius_functor, Defect, Scalars, StructureConstants, TableCharacter, Zeta};
    use crate::builders::monotone_surjection_data;

    fn b4() -> IncidenceBialgebra {
        build_bialgebra(&monotone_surjection_data(4, 5).unwrap()).unwrap()
    }

    #[test]
    fn zeta_inverse_is_the_mobius_functor() {
        let b = b4();
        let inv = invert_multiplicative(&b, &Zeta, &Scalars).unwrap();
        assert!(inv.check.passed);
        assert_eq!(inv.inverse, mobius_functor(&b).unwrap().mobius);
    }

    #[test]
    fn defect_character_inverts() {
        let b = b4();
        let inv = invert_multiplicative(&b, &Defect, &StructureConstants::truncated_polynomials(4)).unwrap();
        assert!(inv.check.passed, "{:?}", inv.check.witnesses);
    }

    #[test]
    fn non_multiplicative_character_is_rejected() {
        let b = b4();
        let mut values: std::collections::BTreeMap<String, Vector> =
            (0..b.dim()).map(|k| (b.label(k).to_string(), Vector::basis("1"))).collect();
        values.insert("(2,2)".into(), Vector::zero());
        let phi = TableCharacter { name: "broken".into(), values };
        let err = invert_multiplicative(&b, &phi, &Scalars).unwrap_err();
        assert!(matches!(err, Error::HypothesisFailed { ref condition, .. } if condition == "multiplicative"));
    }
}
