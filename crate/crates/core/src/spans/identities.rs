//! The span identities behind the weak antipode and Möbius inversion, each
//! verified by a certificate and cross-checked against span matrices.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::bialgebra::IncidenceBialgebra;
use crate::error::{Error, Result};

use super::certificate::provenance_index;
use super::{
    canonical_span, certificate_from_map, check_span_iso, convolve_spans, convolve_spans_partial, matrices_agree, FiniteMonoid, FiniteSpan,
    SpanIsoCertificate, SpanKind, SpanMonoid,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Identity {
    /// `S_1 ∗ S_n ≅ S_{n+1}` and its mirror, with the explicit token maps.
    LemmaRec(usize),
    /// `Id′ ∗ S_n ≅ S_n + S_{n+1} ≅ S_n ∗ Id′`.
    LemmaIdPrime(usize),
    /// The telescoped weak antipode identity up to `L`.
    Theorem(usize),
    /// The telescoped Möbius identity `ζ ∗ Φ_even ≅ ε + ζ ∗ Φ_odd` up to `L`.
    Mobius(usize),
}

/// One verified isomorphism. Comparisons are restricted to `exact_columns`
/// when `boundary_columns` is non-empty; those columns are not certified.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub certificate: SpanIsoCertificate,
    pub matrices_agree: bool,
    pub exact_columns: Vec<String>,
    pub boundary_columns: Vec<String>,
    /// Columns left out because a product fell outside the finite carrier.
    pub escaped_columns: Vec<String>,
    #[serde(skip)]
    pub lhs: FiniteSpan,
    #[serde(skip)]
    pub rhs: FiniteSpan,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.certificate.iso && self.matrices_agree
    }

    pub(crate) fn new(
        b: &IncidenceBialgebra,
        name: String,
        lhs: FiniteSpan,
        rhs: FiniteSpan,
        certificate: SpanIsoCertificate,
        exact: Vec<String>,
        boundary: Vec<String>,
    ) -> Result<Self> {
        let matrices_agree = matrices_agree(b, &lhs, &rhs)?;
        Ok(IdentityCheck {
            name,
            certificate,
            matrices_agree,
            exact_columns: exact,
            boundary_columns: boundary,
            escaped_columns: Vec::new(),
            lhs,
            rhs,
        })
    }

    pub(crate) fn compare(b: &IncidenceBialgebra, name: String, lhs: FiniteSpan, rhs: FiniteSpan) -> Result<Self> {
        let certificate = check_span_iso(&lhs, &rhs);
        Self::new(b, name, lhs, rhs, certificate, b.basis().ids().to_vec(), Vec::new())
    }
}

pub fn verify_identity(b: &IncidenceBialgebra, which: Identity) -> Result<Vec<IdentityCheck>> {
    let top = b.data().truncation();
    let need = |n: usize| {
        if n > top {
            Err(Error::TruncationExceeded { requested: n, truncation: top })
        } else {
            Ok(())
        }
    };
    match which {
        Identity::LemmaRec(n) => {
            if n == 0 {
                return Err(Error::ZeroDimension);
            }
            need(n + 1)?;
            lemma_rec(b, n)
        }
        Identity::LemmaIdPrime(n) => {
            need(n + 1)?;
            let m = b.monoid()?;
            let idp = canonical_span(b, SpanKind::IdPrime)?;
            let sn = canonical_span(b, SpanKind::S(n))?;
            let next = canonical_span(b, SpanKind::S(n + 1))?;
            let rhs = FiniteSpan::sum(&[(&format!("S_{n}"), &sn), (&format!("S_{}", n + 1), &next)]);
            Ok(vec![
                IdentityCheck::compare(b, format!("Id′ ∗ S_{n} ≅ S_{n} + S_{}", n + 1), convolve_spans(b, &idp, &sn, m)?, rhs.clone())?,
                IdentityCheck::compare(b, format!("S_{n} ∗ Id′ ≅ S_{n} + S_{}", n + 1), convolve_spans(b, &sn, &idp, m)?, rhs)?,
            ])
        }
        Identity::Theorem(l) => {
            need(l)?;
            let m = b.monoid()?;
            let family = (0..=l).map(|n| canonical_span(b, SpanKind::S(n))).collect::<Result<Vec<_>>>()?;
            let boundary = if l < top { Some(canonical_span(b, SpanKind::S(l + 1))?) } else { None };
            let left = canonical_span(b, SpanKind::IdPrime)?;
            telescope(b, &Telescope { left: &left, left_name: "Id′", family: &family, family_name: "S", boundary, excluded: &BTreeSet::new() }, m)
        }
        Identity::Mobius(l) => {
            need(l)?;
            let family = (0..=l).map(|n| canonical_span(b, SpanKind::Phi(n))).collect::<Result<Vec<_>>>()?;
            let boundary = if l < top { Some(canonical_span(b, SpanKind::Phi(l + 1))?) } else { None };
            let left = canonical_span(b, SpanKind::Zeta)?;
            let mut out = telescope(
                b,
                &Telescope { left: &left, left_name: "ζ", family: &family, family_name: "Φ", boundary, excluded: &BTreeSet::new() },
                &FiniteMonoid::terminal(),
            )?;
            if b.has_product() {
                for (n, phi) in family.iter().enumerate().skip(1) {
                    let s = canonical_span(b, SpanKind::S(n))?;
                    out.push(IdentityCheck::compare(b, format!("ζ ∘ S_{n} ≅ Φ_{n}"), super::zeta_after(&s), phi.clone())?);
                }
            }
            Ok(out)
        }
    }
}

fn lemma_rec(b: &IncidenceBialgebra, n: usize) -> Result<Vec<IdentityCheck>> {
    let x = b.data().set();
    let m = b.monoid()?;
    let s1 = canonical_span(b, SpanKind::S(1))?;
    let sn = canonical_span(b, SpanKind::S(n))?;
    let next = canonical_span(b, SpanKind::S(n + 1))?;
    let mut out = Vec::new();
    for mirror in [false, true] {
        let conv = if mirror { convolve_spans(b, &sn, &s1, m)? } else { convolve_spans(b, &s1, &sn, m)? };
        let index = provenance_index(&conv);
        // A nondegenerate (n+1)-simplex goes to the triangle on its vertices
        // 0, 1, n+1 (or 0, n, n+1), its first edge (or front face) and its
        // back face (or last edge).
        let mut map = Vec::with_capacity(next.len());
        for t in &next.tokens {
            let sigma = x.lookup(n + 1, &t.provenance[0]).ok_or_else(|| Error::UnknownBasis(t.provenance[0].clone()))?;
            let mut tau = sigma;
            for level in (3..=n + 1).rev() {
                tau = x.face(level, if mirror { 1 } else { 2 }, tau);
            }
            let key = if mirror {
                vec![x.id(2, tau).to_string(), x.id(n, x.face(n + 1, n + 1, sigma)).to_string(), x.id(1, x.principal_edge(n + 1, sigma, n + 1)).to_string()]
            } else {
                vec![x.id(2, tau).to_string(), x.id(1, x.principal_edge(n + 1, sigma, 1)).to_string(), x.id(n, x.face(n + 1, 0, sigma)).to_string()]
            };
            // An index past the end makes the certificate report the token.
            map.push(index.get(&key).copied().unwrap_or(usize::MAX));
        }
        let (a, c) = if mirror { (format!("S_{n}"), "S_1".to_string()) } else { ("S_1".to_string(), format!("S_{n}")) };
        out.push(IdentityCheck::compare(b, format!("{a} ∗ {c} ≅ S_{}", n + 1), conv.clone(), next.clone())?);
        let certificate = certificate_from_map(&next, &conv, &map);
        out.push(IdentityCheck::new(
            b,
            format!("S_{} → {a} ∗ {c} by the explicit map", n + 1),
            next.clone(),
            conv,
            certificate,
            b.basis().ids().to_vec(),
            Vec::new(),
        )?);
    }
    Ok(out)
}

/// Data for the telescoping chain `left ∗ F_n ≅ F_n + F_{n+1}`.
pub(crate) struct Telescope<'a> {
    pub left: &'a FiniteSpan,
    pub left_name: &'a str,
    /// `F_0, ..., F_L`, with `F_0` the convolution unit.
    pub family: &'a [FiniteSpan],
    pub family_name: &'a str,
    /// `F_{L+1}` when it lies within the truncation.
    pub boundary: Option<FiniteSpan>,
    /// Columns left out of every comparison (reported by the caller).
    pub excluded: &'a BTreeSet<String>,
}

/// Per-step identities and the telescoped sum. The boundary term `F_{L+1}`
/// sits on the right for even `L` and on the left for odd `L`. Without it,
/// comparisons are restricted to columns of certified length at most the step.
/// Columns where a product of right values is undefined are left out and
/// reported as escaped.
pub(crate) fn telescope(b: &IncidenceBialgebra, t: &Telescope, m: &dyn SpanMonoid) -> Result<Vec<IdentityCheck>> {
    let l = t.family.len() - 1;
    let f = t.family_name;
    let mut escaped: BTreeSet<String> = t.excluded.clone();
    let mut conv = |s: &FiniteSpan| -> Result<FiniteSpan> {
        let (span, e) = convolve_spans_partial(b, t.left, s, m)?;
        escaped.extend(e.into_iter().map(|e| e.column));
        Ok(span)
    };
    let tagged = |parity: usize| -> FiniteSpan {
        let parts: Vec<(String, &FiniteSpan)> =
            t.family.iter().enumerate().filter(|(n, _)| n % 2 == parity).map(|(n, s)| (format!("{f}_{n}"), s)).collect();
        FiniteSpan::sum(&parts.iter().map(|(tag, s)| (tag.as_str(), *s)).collect::<Vec<_>>())
    };
    let steps = t.family.iter().map(&mut conv).collect::<Result<Vec<_>>>()?;
    let even = conv(&tagged(0))?;
    let odd = conv(&tagged(1))?;

    let escaped_columns: Vec<String> = escaped.iter().cloned().collect();
    let columns = |bound: Option<usize>| -> (Vec<String>, Vec<String>) {
        let mut exact = Vec::new();
        let mut rest = Vec::new();
        for k in 0..b.dim() {
            let label = b.label(k).to_string();
            if escaped.contains(&label) {
                continue;
            }
            if bound.is_none_or(|n| b.is_certified(k) && b.length(k) <= n) {
                exact.push(label);
            } else {
                rest.push(label);
            }
        }
        (exact, rest)
    };
    let check = |name: String, lhs: FiniteSpan, rhs: FiniteSpan, bound: Option<usize>| -> Result<IdentityCheck> {
        let (exact, rest) = columns(bound);
        let keep: BTreeSet<&str> = exact.iter().map(String::as_str).collect();
        let lhs = lhs.restrict(|c| keep.contains(c));
        let rhs = rhs.restrict(|c| keep.contains(c));
        let certificate = check_span_iso(&lhs, &rhs);
        let mut c = IdentityCheck::new(b, name, lhs, rhs, certificate, exact, rest)?;
        c.escaped_columns = escaped_columns.clone();
        Ok(c)
    };

    let mut out = Vec::new();
    for (n, lhs) in steps.into_iter().enumerate() {
        let next = if n < l { Some(&t.family[n + 1]) } else { t.boundary.as_ref() };
        let name = format!("{} ∗ {f}_{n} ≅ {f}_{n} + {f}_{}", t.left_name, n + 1);
        let (rhs, bound) = match next {
            Some(next) => (FiniteSpan::sum(&[("n", &t.family[n]), ("n+1", next)]), None),
            None => (FiniteSpan::sum(&[("n", &t.family[n])]), Some(n)),
        };
        out.push(check(name, lhs, rhs, bound)?);
    }

    let mut lhs_parts = vec![("even", &even)];
    let mut rhs_parts = vec![("unit", &t.family[0]), ("odd", &odd)];
    let boundary_name = format!("{f}_{}", l + 1);
    let mut suffix = [String::new(), String::new()];
    if let Some(bd) = &t.boundary {
        suffix[(l % 2) ^ 1] = format!(" + {boundary_name}");
        if l % 2 == 0 {
            rhs_parts.push((boundary_name.as_str(), bd));
        } else {
            lhs_parts.push((boundary_name.as_str(), bd));
        }
    }
    let name = format!(
        "{0} ∗ Σ_even {f}_n{1} ≅ {f}_0 + {0} ∗ Σ_odd {f}_n{2} (n ≤ {l})",
        t.left_name, suffix[0], suffix[1]
    );
    let bound = if t.boundary.is_some() { None } else { Some(l) };
    out.push(check(name, FiniteSpan::sum(&lhs_parts), FiniteSpan::sum(&rhs_parts), bound)?);
    Ok(out)
}
