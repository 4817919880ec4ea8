//! Convolution, the structural endomorphisms and the weak antipode.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::simplicial::CheckResult;

use super::algebra::scalar;
use super::{IncidenceBialgebra, LinearMap, TargetAlgebra, Vector};

/// `μ_A ∘ (F ⊗ G) ∘ Δ`.
pub fn convolve(b: &IncidenceBialgebra, f: &LinearMap, g: &LinearMap, a: &dyn TargetAlgebra) -> Result<LinearMap> {
    assert!(f.dim() == b.dim() && g.dim() == b.dim(), "convolution factors must live on the bialgebra basis");
    let mut cache: HashMap<(String, String), Vector> = HashMap::new();
    let mut columns = Vec::with_capacity(b.dim());
    for k in 0..b.dim() {
        let mut out = Vector::zero();
        for t in b.coproduct(k) {
            for (x, c) in f.column(t.left).terms() {
                for (y, d) in g.column(t.right).terms() {
                    let key = (x.to_string(), y.to_string());
                    if !cache.contains_key(&key) {
                        let p = a.multiply(x, y)?;
                        cache.insert(key.clone(), p);
                    }
                    out.add_scaled(&cache[&key], &(&(&t.coefficient * c) * d));
                }
            }
        }
        columns.push(out);
    }
    Ok(LinearMap { columns })
}

/// ε as a map into the scalars.
pub fn counit_map(b: &IncidenceBialgebra) -> LinearMap {
    LinearMap { columns: (0..b.dim()).map(|k| scalar(b.counit(k))).collect() }
}

/// The neutral element `η_A ∘ ε` of the convolution algebra into `a`.
pub fn neutral(b: &IncidenceBialgebra, a: &dyn TargetAlgebra) -> LinearMap {
    let unit = a.unit();
    LinearMap { columns: (0..b.dim()).map(|k| Vector::term(unit.clone(), b.counit(k))).collect() }
}

/// The endomorphisms of the bialgebra built from degeneracy data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Structural {
    /// `S_n`, the n-th convolution power of the projection onto nondegenerates.
    S(usize),
    /// Degenerate classes go to the unit, the rest are fixed.
    IdPrime,
    /// `η ∘ ε`.
    Neutral,
    /// Projection onto degenerate classes.
    Omega,
    Identity,
}

pub fn structural_endomorphism(b: &IncidenceBialgebra, kind: Structural) -> Result<LinearMap> {
    let diag = |keep: &dyn Fn(usize) -> bool| LinearMap {
        columns: (0..b.dim()).map(|k| if keep(k) { Vector::basis(b.label(k)) } else { Vector::zero() }).collect(),
    };
    match kind {
        Structural::S(0) | Structural::Neutral => Ok(neutral(b, b.monoid()?)),
        Structural::S(1) => Ok(diag(&|k| !b.is_degenerate(k))),
        Structural::S(n) => Ok(s_powers(b, n)?.pop().unwrap()),
        Structural::IdPrime => {
            let unit = b.unit_label()?;
            Ok(LinearMap {
                columns: (0..b.dim())
                    .map(|k| Vector::basis(if b.is_degenerate(k) { unit } else { b.label(k) }))
                    .collect(),
            })
        }
        Structural::Omega => Ok(diag(&|k| b.is_degenerate(k))),
        Structural::Identity => Ok(diag(&|_| true)),
    }
}

/// `[S_0, S_1, ..., S_up_to]`, with `S_n = S_1 ∗ S_{n-1}`.
pub fn s_powers(b: &IncidenceBialgebra, up_to: usize) -> Result<Vec<LinearMap>> {
    let monoid = b.monoid()?;
    let mut out = vec![structural_endomorphism(b, Structural::S(0))?];
    if up_to == 0 {
        return Ok(out);
    }
    let s1 = structural_endomorphism(b, Structural::S(1))?;
    out.push(s1.clone());
    for n in 2..=up_to {
        let next = convolve(b, &s1, &out[n - 1], monoid)?;
        out.push(next);
    }
    Ok(out)
}

/// Per-column status of the alternating sum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum ColumnCertificate {
    /// Every nondegenerate simplex over the column lies within the truncation.
    Exact { length: usize },
    /// A nondegenerate simplex over the column sits at the top level.
    TruncationUnsafe { length: usize },
}

impl ColumnCertificate {
    pub fn is_exact(&self) -> bool {
        matches!(self, ColumnCertificate::Exact { .. })
    }
}

/// The weak antipode with per-column certificates and the powers it used.
#[derive(Clone, Debug)]
pub struct WeakAntipode {
    pub map: LinearMap,
    pub certificates: Vec<ColumnCertificate>,
    /// `S_0, ..., S_{L+1}` for the largest witnessed length `L`.
    pub powers: Vec<LinearMap>,
}

impl WeakAntipode {
    pub fn uncertified(&self, b: &IncidenceBialgebra) -> Vec<String> {
        (0..b.dim()).filter(|&k| !self.certificates[k].is_exact()).map(|k| b.label(k).to_string()).collect()
    }
}

/// `S = Σ (-1)^n S_n`, each column summed up to its length. Columns whose
/// length is not witnessed within the truncation are flagged, not refused.
pub fn weak_antipode_partial(b: &IncidenceBialgebra) -> Result<WeakAntipode> {
    let top = b.finiteness().max_length();
    let powers = s_powers(b, top + 1)?;
    let mut columns = Vec::with_capacity(b.dim());
    let mut certificates = Vec::with_capacity(b.dim());
    for k in 0..b.dim() {
        let length = b.length(k);
        let mut v = Vector::zero();
        for (n, p) in powers.iter().enumerate().take(length + 1) {
            let sign = if n % 2 == 0 { Rational::one() } else { Rational::from_integer(-1) };
            v.add_scaled(p.column(k), &sign);
        }
        if b.is_certified(k) {
            if !powers[length + 1].column(k).is_zero() {
                return Err(Error::AxiomViolation {
                    axiom: "convolution powers vanish beyond the length".into(),
                    witness: format!("S_{}({}) = {}", length + 1, b.label(k), powers[length + 1].column(k)),
                });
            }
            certificates.push(ColumnCertificate::Exact { length });
        } else {
            certificates.push(ColumnCertificate::TruncationUnsafe { length });
        }
        columns.push(v);
    }
    Ok(WeakAntipode { map: LinearMap { columns }, certificates, powers })
}

/// The weak antipode, refusing when any column is not certified exact.
pub fn weak_antipode(b: &IncidenceBialgebra) -> Result<LinearMap> {
    let wa = weak_antipode_partial(b)?;
    let bad = wa.uncertified(b);
    if !bad.is_empty() {
        return Err(Error::ExactnessNotCertified { columns: bad });
    }
    Ok(wa.map)
}

/// Checks `Id′ ∗ S = e = S ∗ Id′`, and `Id ∗ S = e` when `X_0` is a point.
pub fn verify_weak_antipode(b: &IncidenceBialgebra) -> Result<CheckResult> {
    let s = weak_antipode(b)?;
    let monoid = b.monoid()?;
    let e = neutral(b, monoid);
    let idp = structural_endomorphism(b, Structural::IdPrime)?;
    let mut res = CheckResult::new("weak antipode");
    let mut compare = |name: &str, got: &LinearMap| {
        for k in 0..b.dim() {
            res.checked += 1;
            if got.column(k) != e.column(k) {
                res.fail(format!("{name} at `{}`: {} but e gives {}", b.label(k), got.column(k), e.column(k)));
            }
        }
    };
    compare("Id′ ∗ S", &convolve(b, &idp, &s, monoid)?);
    compare("S ∗ Id′", &convolve(b, &s, &idp, monoid)?);
    if b.is_connected() {
        let id = structural_endomorphism(b, Structural::Identity)?;
        compare("Id ∗ S", &convolve(b, &id, &s, monoid)?);
    }
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bialgebra::build_bialgebra;
    use crate::builders::monotone_surjection_data;

    fn monotone(m: usize) -> IncidenceBialgebra {
        build_bialgebra(&monotone_surjection_data(m, m + 1).unwrap()).unwrap()
    }

    fn col(b: &IncidenceBialgebra, map: &LinearMap, label: &str) -> String {
        map.column(b.require(label).unwrap()).to_string()
    }

    #[test]
    fn antipode_on_small_compositions() {
        let b = monotone(3);
        let s = weak_antipode(&b).unwrap();
        assert_eq!(col(&b, &s, "(2)"), "-(2)");
        for id in ["(1)", "(1,1)", "(1,1,1)", "()"] {
            assert_eq!(col(&b, &s, id), "()");
        }
    }

    #[test]
    fn second_power_on_three() {
        let b = monotone(3);
        let s2 = structural_endomorphism(&b, Structural::S(2)).unwrap();
        assert_eq!(col(&b, &s2, "(3)"), "(1,2,2) + (2,1,2)");
    }

    #[test]
    fn id_prime_sends_identities_to_the_unit() {
        let b = monotone(3);
        let idp = structural_endomorphism(&b, Structural::IdPrime).unwrap();
        assert_eq!(col(&b, &idp, "(1,1,1)"), "()");
        let sum = structural_endomorphism(&b, Structural::S(0))
            .unwrap()
            .plus(&structural_endomorphism(&b, Structural::S(1)).unwrap());
        assert_eq!(idp, sum);
    }

    #[test]
    fn neutral_element_is_a_unit_for_convolution() {
        let b = monotone(4);
        let e = neutral(&b, b.monoid().unwrap());
        let s2 = structural_endomorphism(&b, Structural::S(2)).unwrap();
        assert_eq!(convolve(&b, &e, &s2, b.monoid().unwrap()).unwrap(), s2);
        assert_eq!(convolve(&b, &s2, &e, b.monoid().unwrap()).unwrap(), s2);
    }

    #[test]
    fn weak_antipode_identity_holds() {
        let r = verify_weak_antipode(&monotone(4)).unwrap();
        assert!(r.passed, "{:?}", r.witnesses);
    }

    #[test]
    fn truncation_unsafe_columns_are_refused() {
        let b = build_bialgebra(&monotone_surjection_data(4, 2).unwrap()).unwrap();
        let err = weak_antipode(&b).unwrap_err();
        assert!(matches!(err, Error::ExactnessNotCertified { .. }));
        let partial = weak_antipode_partial(&b).unwrap();
        assert!(partial.uncertified(&b).contains(&"(2,2)".to_string()));
    }
}
