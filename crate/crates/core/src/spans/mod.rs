//! The objective level for set-level spaces: finite spans over the level-1
//! classes, pullback composition, convolution of spans, and isomorphism
//! certificates for the identities between them.

mod certificate;
mod identities;
mod multiplicative;

pub use certificate::{certificate_from_map, check_span_iso, FibreMatch, FibreMismatch, SpanIsoCertificate};
pub use identities::{verify_identity, Identity, IdentityCheck};
pub use multiplicative::{
    check_and_invert_multiplicative, check_multiplicative_hypotheses, LegRule, MultiplicativeReport, MultiplicativeSpan,
    TargetMonoid,
};

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::bialgebra::{IncidenceBialgebra, LabelMonoid, LinearMap, QuotientMonoid, Vector, SCALAR};
use crate::error::{Error, Result};
use crate::linalg::{span_to_matrix, QMatrix, WeightedBasis};
use crate::rational::Rational;
use crate::simplicial::nondegenerate_simplices;

/// One element of the middle set, with the simplices it came from.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SpanToken {
    pub provenance: Vec<String>,
    pub left: String,
    pub right: String,
}

/// A span `X_1 <- M -> T` with a finite middle set. Left values are level-1
/// labels, right values are labels in the target set.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteSpan {
    pub tokens: Vec<SpanToken>,
}

impl FiniteSpan {
    pub fn new(tokens: Vec<SpanToken>) -> Self {
        FiniteSpan { tokens }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Disjoint union; provenance is prefixed with the summand's tag.
    pub fn sum(parts: &[(&str, &FiniteSpan)]) -> FiniteSpan {
        let mut tokens = Vec::new();
        for (tag, span) in parts {
            for t in &span.tokens {
                let mut provenance = vec![tag.to_string()];
                provenance.extend(t.provenance.iter().cloned());
                tokens.push(SpanToken { provenance, left: t.left.clone(), right: t.right.clone() });
            }
        }
        FiniteSpan { tokens }
    }

    /// Tokens whose left value satisfies the predicate.
    pub fn restrict(&self, keep: impl Fn(&str) -> bool) -> FiniteSpan {
        FiniteSpan { tokens: self.tokens.iter().filter(|t| keep(&t.left)).cloned().collect() }
    }

    /// Number of tokens over each `(left, right)` pair.
    pub fn fibre_counts(&self) -> BTreeMap<(String, String), usize> {
        let mut out = BTreeMap::new();
        for t in &self.tokens {
            *out.entry((t.left.clone(), t.right.clone())).or_insert(0) += 1;
        }
        out
    }

    /// Distinct right values, sorted.
    pub fn right_values(&self) -> BTreeSet<String> {
        self.tokens.iter().map(|t| t.right.clone()).collect()
    }

    fn by_left(&self) -> HashMap<&str, Vec<usize>> {
        let mut out: HashMap<&str, Vec<usize>> = HashMap::new();
        for (k, t) in self.tokens.iter().enumerate() {
            out.entry(t.left.as_str()).or_default().push(k);
        }
        out
    }
}

/// A partial monoid on labels, used for the right legs of convolutions.
pub trait SpanMonoid {
    fn unit(&self) -> String;
    fn product(&self, a: &str, b: &str) -> Option<String>;
}

impl SpanMonoid for LabelMonoid {
    fn unit(&self) -> String {
        LabelMonoid::unit(self).to_string()
    }

    fn product(&self, a: &str, b: &str) -> Option<String> {
        LabelMonoid::product(self, a, b)
    }
}

impl SpanMonoid for QuotientMonoid {
    fn unit(&self) -> String {
        self.monoid.unit().to_string()
    }

    fn product(&self, a: &str, b: &str) -> Option<String> {
        self.monoid.product(a, b).map(|p| self.project(&p))
    }
}

/// A finite monoid given by its carrier and a partial product table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMonoid {
    pub name: String,
    pub elements: Vec<String>,
    pub unit: String,
    pub table: BTreeMap<(String, String), String>,
}

impl FiniteMonoid {
    /// The one-element monoid. Its element is labelled like the scalar unit so
    /// that span matrices line up with maps into the ground field.
    pub fn terminal() -> Self {
        let one = SCALAR.to_string();
        let mut table = BTreeMap::new();
        table.insert((one.clone(), one.clone()), one.clone());
        FiniteMonoid { name: "terminal".into(), elements: vec![one.clone()], unit: one, table }
    }

    /// `{0, ..., max}` under addition, defined while the sum stays at most `max`.
    pub fn truncated_naturals(max: usize) -> Self {
        let elements: Vec<String> = (0..=max).map(|k| k.to_string()).collect();
        let mut table = BTreeMap::new();
        for a in 0..=max {
            for b in 0..=max - a {
                table.insert((a.to_string(), b.to_string()), (a + b).to_string());
            }
        }
        FiniteMonoid { name: format!("naturals up to {max}"), elements, unit: "0".into(), table }
    }

    /// The restriction of a label monoid to a finite carrier.
    pub fn restrict(name: &str, carrier: Vec<String>, monoid: &dyn SpanMonoid) -> Self {
        let inside: BTreeSet<&String> = carrier.iter().collect();
        let mut table = BTreeMap::new();
        for a in &carrier {
            for b in &carrier {
                if let Some(p) = monoid.product(a, b) {
                    if inside.contains(&p) {
                        table.insert((a.clone(), b.clone()), p);
                    }
                }
            }
        }
        FiniteMonoid { name: name.into(), elements: carrier, unit: monoid.unit(), table }
    }
}

impl SpanMonoid for FiniteMonoid {
    fn unit(&self) -> String {
        self.unit.clone()
    }

    fn product(&self, a: &str, b: &str) -> Option<String> {
        self.table.get(&(a.to_string(), b.to_string())).cloned()
    }
}

/// The spans built directly from the simplicial structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpanKind {
    /// Nondegenerate n-simplices with long edge and product of principal edges.
    S(usize),
    /// `S_0 + S_1`.
    IdPrime,
    /// The convolution unit: vertices, with the unit edge on the right.
    Neutral,
    /// Vertices, with the degenerate edge on both sides.
    Omega,
    /// Every edge, on both sides.
    Identity,
    /// Every edge, to the terminal monoid.
    Zeta,
    /// Nondegenerate n-simplices by long edge, to the terminal monoid.
    Phi(usize),
}

fn require_set_level(b: &IncidenceBialgebra) -> Result<()> {
    if b.data().is_set_level() {
        Ok(())
    } else {
        Err(Error::NotSetLevel)
    }
}

/// The span of the given kind.
pub fn canonical_span(b: &IncidenceBialgebra, kind: SpanKind) -> Result<FiniteSpan> {
    require_set_level(b)?;
    let x = b.data().set();
    let terminal = SCALAR.to_string();
    let vertices = |right: &dyn Fn(&str) -> String| -> FiniteSpan {
        FiniteSpan::new(
            (0..x.len(0))
                .map(|v| {
                    let edge = x.id(1, x.degeneracy(0, 0, v)).to_string();
                    SpanToken { provenance: vec![x.id(0, v).to_string()], right: right(&edge), left: edge }
                })
                .collect(),
        )
    };
    Ok(match kind {
        SpanKind::S(0) | SpanKind::Neutral => {
            let unit = b.unit_label()?.to_string();
            vertices(&|_| unit.clone())
        }
        SpanKind::S(n) => {
            let m = b.monoid()?;
            let mut tokens = Vec::new();
            for k in nondegenerate_simplices(b.data(), n)? {
                let edges = x.principal_edges(n, k);
                let mut right = x.id(1, edges[0]).to_string();
                for &e in &edges[1..] {
                    let next = x.id(1, e);
                    right = m
                        .product(&right, next)
                        .ok_or_else(|| Error::ClosureEscape { left: right.clone(), right: next.to_string() })?;
                }
                tokens.push(SpanToken {
                    provenance: vec![x.id(n, k).to_string()],
                    left: x.id(1, x.long_edge(n, k)).to_string(),
                    right,
                });
            }
            FiniteSpan::new(tokens)
        }
        SpanKind::IdPrime => {
            let s0 = canonical_span(b, SpanKind::S(0))?;
            let s1 = canonical_span(b, SpanKind::S(1))?;
            FiniteSpan::sum(&[("S_0", &s0), ("S_1", &s1)])
        }
        SpanKind::Omega => vertices(&|e| e.to_string()),
        SpanKind::Identity | SpanKind::Zeta => FiniteSpan::new(
            (0..x.len(1))
                .map(|f| {
                    let label = x.id(1, f).to_string();
                    let right = if kind == SpanKind::Zeta { terminal.clone() } else { label.clone() };
                    SpanToken { provenance: vec![label.clone()], left: label, right }
                })
                .collect(),
        ),
        SpanKind::Phi(0) => vertices(&|_| terminal.clone()),
        SpanKind::Phi(n) => FiniteSpan::new(
            nondegenerate_simplices(b.data(), n)?
                .into_iter()
                .map(|k| SpanToken {
                    provenance: vec![x.id(n, k).to_string()],
                    left: x.id(1, x.long_edge(n, k)).to_string(),
                    right: terminal.clone(),
                })
                .collect(),
        ),
    })
}

/// The pullback composite: first `s`, then `t`.
pub fn compose_spans(s: &FiniteSpan, t: &FiniteSpan) -> FiniteSpan {
    let index = t.by_left();
    let mut tokens = Vec::new();
    for a in &s.tokens {
        for &k in index.get(a.right.as_str()).map(Vec::as_slice).unwrap_or(&[]) {
            let c = &t.tokens[k];
            let mut provenance = a.provenance.clone();
            provenance.extend(c.provenance.iter().cloned());
            tokens.push(SpanToken { provenance, left: a.left.clone(), right: c.right.clone() });
        }
    }
    FiniteSpan::new(tokens)
}

/// Convolution through the 2-simplices: triples `(σ, s, t)` with `s` over
/// `d_2 σ` and `t` over `d_0 σ`, sent to `d_1 σ` on the left and to the
/// product of the right values on the right.
pub fn convolve_spans(b: &IncidenceBialgebra, s: &FiniteSpan, t: &FiniteSpan, m: &dyn SpanMonoid) -> Result<FiniteSpan> {
    let (span, escapes) = convolve_spans_partial(b, s, t, m)?;
    match escapes.into_iter().next() {
        Some(e) => Err(Error::ClosureEscape { left: e.left, right: e.right }),
        None => Ok(span),
    }
}

/// A product of right values that the target monoid does not define.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Escape {
    pub column: String,
    pub left: String,
    pub right: String,
}

/// As [`convolve_spans`], dropping tokens whose product is undefined and
/// reporting them instead.
pub fn convolve_spans_partial(
    b: &IncidenceBialgebra,
    s: &FiniteSpan,
    t: &FiniteSpan,
    m: &dyn SpanMonoid,
) -> Result<(FiniteSpan, BTreeSet<Escape>)> {
    require_set_level(b)?;
    let x = b.data().set();
    let (si, ti) = (s.by_left(), t.by_left());
    let mut tokens = Vec::new();
    let mut escapes = BTreeSet::new();
    for sigma in 0..x.len(2) {
        let (Some(ls), Some(lt)) = (si.get(x.id(1, x.face(2, 2, sigma))), ti.get(x.id(1, x.face(2, 0, sigma)))) else {
            continue;
        };
        let left = x.id(1, x.face(2, 1, sigma));
        for &a in ls {
            for &c in lt {
                let (p, q) = (&s.tokens[a], &t.tokens[c]);
                let Some(right) = m.product(&p.right, &q.right) else {
                    escapes.insert(Escape { column: left.to_string(), left: p.right.clone(), right: q.right.clone() });
                    continue;
                };
                let mut provenance = vec![x.id(2, sigma).to_string()];
                provenance.extend(p.provenance.iter().cloned());
                provenance.extend(q.provenance.iter().cloned());
                tokens.push(SpanToken { provenance, left: left.to_string(), right });
            }
        }
    }
    Ok((FiniteSpan::new(tokens), escapes))
}

/// `ζ ∘ s`: every token goes to the terminal element. The left leg of `ζ` is
/// the identity of `X_1`, so this holds beyond the enumerated classes too.
pub fn zeta_after(s: &FiniteSpan) -> FiniteSpan {
    FiniteSpan::new(
        s.tokens
            .iter()
            .map(|t| {
                let mut provenance = t.provenance.clone();
                provenance.push(t.right.clone());
                SpanToken { provenance, left: t.left.clone(), right: SCALAR.to_string() }
            })
            .collect(),
    )
}

/// The matrix of a span over the level-1 basis into the given target basis.
pub fn span_matrix(b: &IncidenceBialgebra, span: &FiniteSpan, target: &WeightedBasis) -> Result<QMatrix> {
    require_set_level(b)?;
    let middle = WeightedBasis::plain((0..span.len()).map(|k| format!("t{k}")))?;
    let mut p = Vec::with_capacity(span.len());
    let mut q = Vec::with_capacity(span.len());
    for t in &span.tokens {
        p.push(b.position(&t.left).ok_or_else(|| Error::UnknownBasis(t.left.clone()))?);
        q.push(target.position(&t.right).ok_or_else(|| Error::UnknownBasis(t.right.clone()))?);
    }
    span_to_matrix(&middle, &p, &q, b.basis(), target)
}

/// Whether two spans have equal matrices over the union of their right values.
pub fn matrices_agree(b: &IncidenceBialgebra, s: &FiniteSpan, t: &FiniteSpan) -> Result<bool> {
    let mut values = s.right_values();
    values.extend(t.right_values());
    let target = WeightedBasis::plain(values)?;
    Ok(span_matrix(b, s, &target)? == span_matrix(b, t, &target)?)
}

/// The linear map counting tokens: column `f` is the sum of the right values
/// over `f`.
pub fn span_linear_map(b: &IncidenceBialgebra, span: &FiniteSpan) -> Result<LinearMap> {
    let mut columns = vec![Vector::zero(); b.dim()];
    for t in &span.tokens {
        let k = b.position(&t.left).ok_or_else(|| Error::UnknownBasis(t.left.clone()))?;
        columns[k].add_term(&t.right, &Rational::one());
    }
    Ok(LinearMap { columns })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bialgebra::{build_bialgebra, convolve, structural_endomorphism, Structural};
    use crate::builders::{monotone_surjection_data, nerve_of_category, FiniteCategorySpec};
    use crate::simplicial::WeightedClassData;

    fn monotone(m: usize, n: usize) -> IncidenceBialgebra {
        build_bialgebra(&monotone_surjection_data(m, n).unwrap()).unwrap()
    }

    #[test]
    fn s1_is_the_nondegenerate_edges() {
        let b = monotone(3, 4);
        let s1 = canonical_span(&b, SpanKind::S(1)).unwrap();
        let mut lefts: Vec<&str> = s1.tokens.iter().map(|t| t.left.as_str()).collect();
        lefts.sort();
        assert_eq!(lefts, ["(1,2)", "(2)", "(2,1)", "(3)"]);
        assert!(s1.tokens.iter().all(|t| t.left == t.right));
    }

    #[test]
    fn neutral_is_s0_and_lands_on_the_unit() {
        let b = monotone(3, 4);
        let e = canonical_span(&b, SpanKind::Neutral).unwrap();
        assert_eq!(e, canonical_span(&b, SpanKind::S(0)).unwrap());
        assert!(e.tokens.iter().all(|t| t.right == "()"));
        assert_eq!(e.len(), 4);
    }

    #[test]
    fn zeta_after_s_n_is_phi_n() {
        let b = monotone(4, 4);
        let z = canonical_span(&b, SpanKind::Zeta).unwrap();
        for n in 1..=3 {
            let s = canonical_span(&b, SpanKind::S(n)).unwrap();
            let phi = canonical_span(&b, SpanKind::Phi(n)).unwrap();
            assert!(check_span_iso(&zeta_after(&s), &phi).iso);
        }
        // Composing with the enumerated ζ agrees where S_1 stays inside X_1.
        let s1 = canonical_span(&b, SpanKind::S(1)).unwrap();
        assert!(check_span_iso(&compose_spans(&s1, &z), &zeta_after(&s1)).iso);
    }

    #[test]
    fn composing_with_identity_changes_nothing() {
        let b = monotone(3, 4);
        let id = canonical_span(&b, SpanKind::Identity).unwrap();
        let s2 = canonical_span(&b, SpanKind::S(2)).unwrap();
        assert!(check_span_iso(&compose_spans(&id, &s2), &s2).iso);
    }

    #[test]
    fn s1_squared_counts_nondegenerate_triangles() {
        let b = monotone(3, 4);
        let s1 = canonical_span(&b, SpanKind::S(1)).unwrap();
        let sq = convolve_spans(&b, &s1, &s1, b.monoid().unwrap()).unwrap();
        let nd2 = nondegenerate_simplices(b.data(), 2).unwrap();
        assert_eq!(sq.len(), nd2.len());
        assert!(check_span_iso(&sq, &canonical_span(&b, SpanKind::S(2)).unwrap()).iso);
    }

    #[test]
    fn convolution_matches_the_cardinality_level() {
        let b = monotone(4, 5);
        let m = b.monoid().unwrap();
        let s1 = canonical_span(&b, SpanKind::S(1)).unwrap();
        let idp = canonical_span(&b, SpanKind::IdPrime).unwrap();
        let objective = span_linear_map(&b, &convolve_spans(&b, &idp, &s1, m).unwrap()).unwrap();
        let f = structural_endomorphism(&b, Structural::IdPrime).unwrap();
        let g = structural_endomorphism(&b, Structural::S(1)).unwrap();
        assert_eq!(objective, convolve(&b, &f, &g, m).unwrap());
    }

    #[test]
    fn weighted_data_is_refused() {
        let b = build_bialgebra(&crate::builders::interval_family_space(&crate::builders::IntervalFamilySpec::boolean(3)).unwrap().data)
            .unwrap();
        assert!(matches!(canonical_span(&b, SpanKind::Zeta), Err(Error::NotSetLevel)));
    }

    #[test]
    fn nerve_without_product_still_has_zeta_spans() {
        let c = FiniteCategorySpec::chain_poset(3);
        let data = WeightedClassData::from_set(nerve_of_category(&c, 3).unwrap(), None).unwrap();
        let b = build_bialgebra(&data).unwrap();
        let z = canonical_span(&b, SpanKind::Zeta).unwrap();
        let zz = convolve_spans(&b, &z, &z, &FiniteMonoid::terminal()).unwrap();
        assert_eq!(zz.fibre_counts()[&("0<=2".to_string(), SCALAR.to_string())], 3);
        assert!(matches!(canonical_span(&b, SpanKind::S(2)), Err(Error::MissingMonoidal)));
    }

    fn small_span(tag: &str, entries: &[(u8, u8)]) -> FiniteSpan {
        FiniteSpan::new(
            entries
                .iter()
                .enumerate()
                .map(|(k, &(l, r))| SpanToken { provenance: vec![format!("{tag}{k}")], left: format!("x{l}"), right: format!("x{r}") })
                .collect(),
        )
    }

    proptest::proptest! {
        #[test]
        fn composition_is_associative_up_to_a_certificate(
            a in proptest::collection::vec((0u8..3, 0u8..3), 0..8),
            b in proptest::collection::vec((0u8..3, 0u8..3), 0..8),
            c in proptest::collection::vec((0u8..3, 0u8..3), 0..8),
        ) {
            let (s, t, u) = (small_span("a", &a), small_span("b", &b), small_span("c", &c));
            let lhs = compose_spans(&compose_spans(&s, &t), &u);
            let rhs = compose_spans(&s, &compose_spans(&t, &u));
            let cert = check_span_iso(&lhs, &rhs);
            proptest::prop_assert!(cert.iso);
            proptest::prop_assert!(cert.replay(&lhs, &rhs));
            // Provenance is preserved, so the identity map is itself a certificate.
            let index = certificate::provenance_index(&rhs);
            let map: Vec<usize> = lhs.tokens.iter().map(|t| index[&t.provenance]).collect();
            proptest::prop_assert!(certificate_from_map(&lhs, &rhs, &map).iso);
        }
    }
}
