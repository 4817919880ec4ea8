//! The zeta functor, the functors `Φ_n` and the Möbius functor.

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::simplicial::{nondegenerate_simplices, CheckResult};

use super::algebra::scalar;
use super::{convolve, counit_map, s_powers, weak_antipode, IncidenceBialgebra, LinearMap, Scalars, Vector};

#[derive(Clone, Debug)]
pub struct MobiusData {
    pub zeta: LinearMap,
    /// `Φ_0, ..., Φ_L` for the largest length `L`.
    pub phi: Vec<LinearMap>,
    /// `Σ (-1)^n Φ_n`.
    pub mobius: LinearMap,
    pub check: CheckResult,
}

/// `Φ_n(f)` is the weighted count of nondegenerate n-simplices with long edge `f`.
fn phi(b: &IncidenceBialgebra, n: usize) -> Result<LinearMap> {
    let data = b.data();
    let x = data.set();
    let mut columns = vec![Rational::zero(); b.dim()];
    for s in nondegenerate_simplices(data, n)? {
        let f = x.long_edge(n, s);
        columns[f] += Rational::ratio(data.aut(1, f), data.aut(n, s));
    }
    Ok(LinearMap { columns: columns.into_iter().map(scalar).collect() })
}

/// Builds ζ, Φ_n and μ̄ from simplices and checks `ζ ∗ μ̄ = ε = μ̄ ∗ ζ`; with a
/// product present, also `ζ ∘ S_n = Φ_n` and `ζ ∘ S = μ̄`.
pub fn mobius_functor(b: &IncidenceBialgebra) -> Result<MobiusData> {
    let bad = b.finiteness().unsafe_columns();
    if !bad.is_empty() {
        return Err(Error::ExactnessNotCertified { columns: bad });
    }
    let top = b.finiteness().max_length();
    let zeta = LinearMap { columns: vec![Vector::basis(super::SCALAR); b.dim()] };
    let phis = (0..=top).map(|n| phi(b, n)).collect::<Result<Vec<_>>>()?;
    let mut mobius = LinearMap::zero(b.dim());
    for (n, p) in phis.iter().enumerate() {
        mobius = if n % 2 == 0 { mobius.plus(p) } else { mobius.minus(p) };
    }
    let eps = counit_map(b);
    let mut check = CheckResult::new("mobius inversion");
    let mut compare = |name: &str, got: &LinearMap, want: &LinearMap| {
        for k in 0..b.dim() {
            check.checked += 1;
            if got.column(k) != want.column(k) {
                check.fail(format!("{name} at `{}`: {} vs {}", b.label(k), got.column(k), want.column(k)));
            }
        }
    };
    compare("ζ ∗ μ̄ = ε", &convolve(b, &zeta, &mobius, &Scalars)?, &eps);
    compare("μ̄ ∗ ζ = ε", &convolve(b, &mobius, &zeta, &Scalars)?, &eps);
    if b.has_product() {
        let to_scalar = |_: &str| Ok(Vector::basis(super::SCALAR));
        for (n, s) in s_powers(b, top)?.iter().enumerate() {
            compare(&format!("ζ ∘ S_{n} = Φ_{n}"), &s.then(to_scalar)?, &phis[n]);
        }
        compare("ζ ∘ S = μ̄", &weak_antipode(b)?.then(to_scalar)?, &mobius);
    }
    Ok(MobiusData { zeta, phi: phis, mobius, check })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bialgebra::build_bialgebra;
    use crate::builders::{monotone_surjection_data, nerve_of_category, FiniteCategorySpec};
    use crate::simplicial::WeightedClassData;

    #[test]
    fn three_chain_values() {
        let x = nerve_of_category(&FiniteCategorySpec::chain_poset(3), 4).unwrap();
        let b = build_bialgebra(&WeightedClassData::from_set(x, None).unwrap()).unwrap();
        let m = mobius_functor(&b).unwrap();
        assert!(m.check.passed);
        let at = |l: &str| m.mobius.column(b.require(l).unwrap()).coefficient(super::super::SCALAR);
        assert_eq!(at("1<=1"), Rational::one());
        assert_eq!(at("0<=1"), Rational::from_integer(-1));
        assert_eq!(at("0<=2"), Rational::zero());
        let zz = convolve(&b, &m.zeta, &m.zeta, &Scalars).unwrap();
        assert_eq!(zz.column(b.require("0<=2").unwrap()).coefficient("1"), Rational::from_integer(3));
    }

    #[test]
    fn monotone_value_on_two_two() {
        let b = build_bialgebra(&monotone_surjection_data(4, 5).unwrap()).unwrap();
        let m = mobius_functor(&b).unwrap();
        assert!(m.check.passed, "{:?}", m.check.witnesses);
        let k = b.require("(2,2)").unwrap();
        assert_eq!(m.phi[1].column(k).total(), Rational::one());
        assert_eq!(m.phi[2].column(k).total(), Rational::from_integer(2));
        assert_eq!(m.mobius.column(k).total(), Rational::one());
    }
}
