//! Multiplicative spans `X_1 <- F -> A` into a finite monoid: the hypothesis
//! squares, and inversion by `φ ∘ S` checked span by span.
//!
//! The leg into `X_1` is called the left leg throughout, since `u` already
//! names the monoidal unit.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::bialgebra::{build_bialgebra, label_monoid, weak_antipode_partial, IncidenceBialgebra, QuotientMonoid};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::simplicial::{parse_list, CheckResult, WeightedClassData};

use super::identities::{telescope, Telescope};
use super::{
    canonical_span, convolve_spans_partial, FiniteMonoid, FiniteSpan, IdentityCheck, SpanKind,
    SpanMonoid, SpanToken,
};

/// The right leg as a rule on labels, for spans whose left leg is the
/// identity of `X_1`. It evaluates the span on labels beyond the enumerated
/// classes, such as products of principal edges.
#[derive(Clone, Debug)]
pub enum LegRule {
    Constant(String),
    Defect,
    Quotient(QuotientMonoid),
}

impl LegRule {
    pub fn apply(&self, label: &str) -> Option<String> {
        match self {
            LegRule::Constant(c) => Some(c.clone()),
            LegRule::Defect => {
                let parts = parse_list(label, '(', ')')?;
                Some((parts.iter().sum::<usize>() - parts.len()).to_string())
            }
            LegRule::Quotient(q) => Some(q.project(label)),
        }
    }
}

/// The monoid receiving the right leg.
#[derive(Clone, Debug)]
pub enum TargetMonoid {
    Finite(FiniteMonoid),
    /// The connected quotient, on class representatives.
    Quotient(QuotientMonoid),
}

impl TargetMonoid {
    pub fn name(&self) -> String {
        match self {
            TargetMonoid::Finite(m) => m.name.clone(),
            TargetMonoid::Quotient(_) => "connected quotient".into(),
        }
    }
}

impl SpanMonoid for TargetMonoid {
    fn unit(&self) -> String {
        match self {
            TargetMonoid::Finite(m) => m.unit(),
            TargetMonoid::Quotient(q) => q.unit(),
        }
    }

    fn product(&self, a: &str, b: &str) -> Option<String> {
        match self {
            TargetMonoid::Finite(m) => m.product(a, b),
            TargetMonoid::Quotient(q) => q.product(a, b),
        }
    }
}

#[derive(Clone, Debug)]
pub struct MultiplicativeSpan {
    pub name: String,
    /// The middle set `F`.
    pub elements: Vec<String>,
    /// `F -> X_1`, as level-1 labels.
    pub left_leg: Vec<String>,
    /// `F -> A`, as elements of the target.
    pub right_leg: Vec<String>,
    /// The partial product on `F`, by position.
    pub product: BTreeMap<(usize, usize), usize>,
    pub unit: usize,
    pub target: TargetMonoid,
    /// Evaluation beyond `F` when the left leg is the identity.
    pub extension: Option<LegRule>,
}

fn edges(data: &WeightedClassData) -> Vec<String> {
    data.set().level(1).to_vec()
}

/// `F = X_1` with the identity left leg and the level-1 product restricted
/// to `X_1`.
fn on_edges(data: &WeightedClassData, name: &str, rule: LegRule, target: TargetMonoid) -> Result<MultiplicativeSpan> {
    let m = label_monoid(data)?.ok_or(Error::MissingMonoidal)?;
    let labels = edges(data);
    let index: HashMap<&str, usize> = labels.iter().enumerate().map(|(k, l)| (l.as_str(), k)).collect();
    let mut product = BTreeMap::new();
    for (a, la) in labels.iter().enumerate() {
        for (b, lb) in labels.iter().enumerate() {
            if let Some(&p) = m.product(la, lb).as_deref().and_then(|p| index.get(p)) {
                product.insert((a, b), p);
            }
        }
    }
    let unit = *index.get(m.unit()).ok_or_else(|| Error::UnknownBasis(m.unit().to_string()))?;
    let right = labels.iter().map(|l| rule.apply(l).ok_or_else(|| Error::UnknownBasis(l.clone()))).collect::<Result<_>>()?;
    Ok(MultiplicativeSpan {
        name: name.into(),
        elements: labels.clone(),
        left_leg: labels,
        right_leg: right,
        product,
        unit,
        target,
        extension: Some(rule),
    })
}

impl MultiplicativeSpan {
    /// Every edge to the one-element monoid.
    pub fn zeta(data: &WeightedClassData) -> Result<Self> {
        let one = crate::bialgebra::SCALAR.to_string();
        on_edges(data, "zeta", LegRule::Constant(one), TargetMonoid::Finite(FiniteMonoid::terminal()))
    }

    /// A composition `(c_1,...,c_n)` of `m` goes to `m - n` in the naturals,
    /// truncated at the largest defect of an edge. Defects add along
    /// factorisations, so no product of values exceeds it.
    pub fn defect(data: &WeightedClassData) -> Result<Self> {
        let mut max = 0;
        for l in edges(data) {
            let d = LegRule::Defect.apply(&l).ok_or_else(|| Error::UnknownBasis(l.clone()))?;
            max = max.max(d.parse::<usize>().unwrap_or(0));
        }
        on_edges(data, "defect", LegRule::Defect, TargetMonoid::Finite(FiniteMonoid::truncated_naturals(max)))
    }

    /// The projection onto the connected quotient.
    pub fn projection(data: &WeightedClassData) -> Result<Self> {
        let m = label_monoid(data)?.ok_or(Error::MissingMonoidal)?;
        let q = QuotientMonoid::new(m, &edges(data));
        on_edges(data, "quotient map", LegRule::Quotient(q.clone()), TargetMonoid::Quotient(q))
    }

    /// `F = X_2` with a face map as left leg, the level-2 product, and every
    /// element sent to the one-element monoid.
    pub fn from_face(data: &WeightedClassData, face: usize) -> Result<Self> {
        let x = data.set();
        if x.truncation() < 2 || face > 2 {
            return Err(Error::TruncationExceeded { requested: 2, truncation: x.truncation() });
        }
        let mon = data.monoidal().ok_or(Error::MissingMonoidal)?;
        if mon.levels() < 3 {
            return Err(Error::Malformed("monoidal structure has no product on level 2".into()));
        }
        Ok(MultiplicativeSpan {
            name: format!("d_{face} on 2-simplices"),
            elements: x.level(2).to_vec(),
            left_leg: (0..x.len(2)).map(|k| x.id(1, x.face(2, face, k)).to_string()).collect(),
            right_leg: vec![crate::bialgebra::SCALAR.to_string(); x.len(2)],
            product: mon.products[2].clone(),
            unit: x.iterated_degeneracy(mon.unit, 2),
            target: TargetMonoid::Finite(FiniteMonoid::terminal()),
            extension: None,
        })
    }

    /// `φ ∘ s`, with the columns where a right value of `s` lies outside
    /// the reach of the left leg.
    pub fn after(&self, s: &FiniteSpan) -> (FiniteSpan, BTreeSet<String>) {
        let mut index: HashMap<&str, Vec<usize>> = HashMap::new();
        for (c, l) in self.left_leg.iter().enumerate() {
            index.entry(l.as_str()).or_default().push(c);
        }
        let mut tokens = Vec::new();
        let mut escaped = BTreeSet::new();
        for t in &s.tokens {
            let mut provenance = t.provenance.clone();
            if let Some(cs) = index.get(t.right.as_str()) {
                for &c in cs {
                    let mut provenance = provenance.clone();
                    provenance.push(self.elements[c].clone());
                    tokens.push(SpanToken { provenance, left: t.left.clone(), right: self.right_leg[c].clone() });
                }
            } else if let Some(v) = self.extension.as_ref().and_then(|r| r.apply(&t.right)) {
                provenance.push(t.right.clone());
                tokens.push(SpanToken { provenance, left: t.left.clone(), right: v });
            } else {
                escaped.insert(t.left.clone());
            }
        }
        (FiniteSpan::new(tokens), escaped)
    }

    /// The value of `φ` on a single label, as right values with multiplicity.
    pub fn values(&self, label: &str) -> Vec<String> {
        let here: Vec<String> =
            (0..self.elements.len()).filter(|&c| self.left_leg[c] == label).map(|c| self.right_leg[c].clone()).collect();
        if here.is_empty() {
            self.extension.as_ref().and_then(|r| r.apply(label)).into_iter().collect()
        } else {
            here
        }
    }

    /// The span as a plain finite span.
    pub fn span(&self) -> FiniteSpan {
        FiniteSpan::new(
            (0..self.elements.len())
                .map(|c| SpanToken {
                    provenance: vec![self.elements[c].clone()],
                    left: self.left_leg[c].clone(),
                    right: self.right_leg[c].clone(),
                })
                .collect(),
        )
    }
}

/// The hypotheses of the inversion theorem, each with witnesses: both legs
/// monoidal, the left leg CULF (product and unit squares are pullbacks),
/// contraction of degenerate elements, and unitality.
pub fn check_multiplicative_hypotheses(data: &WeightedClassData, phi: &MultiplicativeSpan) -> Result<Vec<CheckResult>> {
    if !data.is_set_level() {
        return Err(Error::NotSetLevel);
    }
    let x = data.set();
    let m = label_monoid(data)?.ok_or(Error::MissingMonoidal)?;
    let a = &phi.target;
    let n = phi.elements.len();
    if phi.left_leg.len() != n || phi.right_leg.len() != n || phi.unit >= n {
        return Err(Error::Malformed(format!("span `{}` has legs of the wrong length", phi.name)));
    }
    let labels = edges(data);
    let in_x1: BTreeSet<&str> = labels.iter().map(String::as_str).collect();
    let unit_edge = m.unit().to_string();
    let el = |c: usize| phi.elements[c].as_str();

    let mut left = CheckResult::new("left leg is monoidal");
    let mut right = CheckResult::new("right leg is monoidal");
    for (&(c1, c2), &c) in &phi.product {
        left.checked += 1;
        right.checked += 1;
        let want = m.product(&phi.left_leg[c1], &phi.left_leg[c2]);
        if want.as_deref() != Some(phi.left_leg[c].as_str()) {
            left.fail(format!("left leg of {}·{} = {} is `{}`, product of legs is {:?}", el(c1), el(c2), el(c), phi.left_leg[c], want));
        }
        let want = a.product(&phi.right_leg[c1], &phi.right_leg[c2]);
        if want.as_deref() != Some(phi.right_leg[c].as_str()) {
            right.fail(format!("right leg of {}·{} = {} is `{}`, product of legs is {:?}", el(c1), el(c2), el(c), phi.right_leg[c], want));
        }
    }
    left.checked += 1;
    if phi.left_leg[phi.unit] != unit_edge {
        left.fail(format!("unit `{}` goes to `{}`, not `{unit_edge}`", el(phi.unit), phi.left_leg[phi.unit]));
    }
    right.checked += 1;
    if phi.right_leg[phi.unit] != a.unit() {
        right.fail(format!("unit `{}` goes to `{}`, not `{}`", el(phi.unit), phi.right_leg[phi.unit], a.unit()));
    }

    // Pairs of edges over each edge, and pairs of elements over each element.
    let mut edge_pairs: HashMap<&str, Vec<(&str, &str)>> = HashMap::new();
    for la in &labels {
        for lb in &labels {
            if let Some(p) = m.product(la, lb) {
                if let Some(&p) = in_x1.get(p.as_str()) {
                    edge_pairs.entry(p).or_default().push((la, lb));
                }
            }
        }
    }
    let mut lifts: HashMap<(usize, &str, &str), usize> = HashMap::new();
    for (&(c1, c2), &c) in &phi.product {
        *lifts.entry((c, phi.left_leg[c1].as_str(), phi.left_leg[c2].as_str())).or_insert(0) += 1;
    }
    let mut culf = CheckResult::new("left leg is CULF");
    for c in 0..n {
        for &(ea, eb) in edge_pairs.get(phi.left_leg[c].as_str()).map(Vec::as_slice).unwrap_or(&[]) {
            culf.checked += 1;
            let k = lifts.get(&(c, ea, eb)).copied().unwrap_or(0);
            if k != 1 {
                culf.fail(format!(
                    "`{}` over `{}` = {ea}·{eb} has {k} factorisations in F, not exactly one",
                    el(c),
                    phi.left_leg[c]
                ));
            }
        }
    }
    let over_unit: Vec<usize> = (0..n).filter(|&c| phi.left_leg[c] == unit_edge).collect();
    culf.checked += 1;
    if over_unit != [phi.unit] {
        culf.fail(format!(
            "elements over the unit edge `{unit_edge}` are {:?}, not just the unit",
            over_unit.iter().map(|&c| el(c)).collect::<Vec<_>>()
        ));
    }

    let mut contracts = CheckResult::new("contracts degenerate elements");
    for v in 0..x.len(0) {
        contracts.checked += 1;
        let edge = x.id(1, x.degeneracy(0, 0, v));
        let fibre: Vec<usize> = (0..n).filter(|&c| phi.left_leg[c] == edge).collect();
        match fibre.as_slice() {
            [c] if phi.right_leg[*c] == a.unit() => {}
            [c] => contracts.fail(format!("s_F({}) = `{}` goes to `{}`, not the unit", x.id(0, v), el(*c), phi.right_leg[*c])),
            _ => contracts.fail(format!("{} elements over the degenerate edge `{edge}`", fibre.len())),
        }
    }

    let mut unital = CheckResult::new("unital");
    unital.checked = 1;
    if over_unit != [phi.unit] || phi.left_leg[phi.unit] != unit_edge || phi.right_leg[phi.unit] != a.unit() {
        unital.fail(format!("unit `{}` over `{unit_edge}` does not form pullback squares", el(phi.unit)));
    }
    Ok(vec![left, right, culf, contracts, unital])
}

#[derive(Clone, Debug, Serialize)]
pub struct MultiplicativeReport {
    pub name: String,
    pub hypotheses: Vec<CheckResult>,
    pub checks: Vec<IdentityCheck>,
    /// Comparison of `Σ (-1)^n φ∘S_n` with `φ` applied to the weak antipode.
    pub cardinality: CheckResult,
    pub escaped_columns: Vec<String>,
    /// `φ ∘ S_n` for `n = 0, ..., L`.
    #[serde(skip)]
    pub inverse: Vec<FiniteSpan>,
}

impl MultiplicativeReport {
    pub fn passed(&self) -> bool {
        self.hypotheses.iter().all(|h| h.passed) && self.checks.iter().all(IdentityCheck::passed) && self.cardinality.passed
    }
}

/// Checks the hypotheses (failing with the first violated square), then
/// verifies `φ ∘ S_0 ≅ φ ∘ ω`, `φ ∘ Id′ ≅ φ`, distribution over convolution
/// of `S_0, S_1, S_2`, and the telescoping of `φ ∗ (φ ∘ S_n)` up to `L`.
pub fn check_and_invert_multiplicative(
    data: &WeightedClassData,
    phi: &MultiplicativeSpan,
    l: usize,
) -> Result<MultiplicativeReport> {
    let hypotheses = check_multiplicative_hypotheses(data, phi)?;
    for h in &hypotheses[..4] {
        if !h.passed {
            return Err(Error::HypothesisFailed {
                condition: h.name.clone(),
                witness: h.witnesses.first().cloned().unwrap_or_default(),
            });
        }
    }
    if !hypotheses[4].passed {
        return Err(Error::AxiomViolation {
            axiom: "contraction implies unitality".into(),
            witness: hypotheses[4].witnesses.first().cloned().unwrap_or_default(),
        });
    }
    let b = build_bialgebra(data)?;
    let top = b.data().truncation();
    if l > top {
        return Err(Error::TruncationExceeded { requested: l, truncation: top });
    }
    let xm = b.monoid()?;
    let a = &phi.target;
    let span = phi.span();
    let covered: BTreeSet<&str> = phi.left_leg.iter().map(String::as_str).collect();
    let mut escaped: BTreeSet<String> = BTreeSet::new();
    let mut checks = Vec::new();

    let mut after = |s: &FiniteSpan| {
        let (out, e) = phi.after(s);
        escaped.extend(e);
        out
    };
    let s0 = canonical_span(&b, SpanKind::S(0))?;
    let lhs = after(&s0);
    let rhs = after(&canonical_span(&b, SpanKind::Omega)?);
    checks.push(IdentityCheck::compare(&b, "φ ∘ S_0 ≅ φ ∘ ω".into(), lhs, rhs)?);
    // F is finite, so φ is compared on the edges its left leg reaches.
    let idp = after(&canonical_span(&b, SpanKind::IdPrime)?);
    checks.push(IdentityCheck::compare(&b, "φ ∘ Id′ ≅ φ".into(), idp.restrict(|f| covered.contains(f)), span.clone())?);

    let family: Vec<FiniteSpan> = (0..=(l + 1).min(top)).map(|n| canonical_span(&b, SpanKind::S(n))).collect::<Result<_>>()?;
    let composites: Vec<FiniteSpan> = family.iter().map(&mut after).collect();

    for (i, alpha) in family.iter().take(3).enumerate() {
        for (j, beta) in family.iter().take(3).enumerate() {
            let (conv, e1) = convolve_spans_partial(&b, alpha, beta, xm)?;
            let (lhs, e0) = phi.after(&conv);
            let (rhs, e2) = convolve_spans_partial(&b, &composites[i], &composites[j], a)?;
            let mut skip: BTreeSet<String> = e0;
            skip.extend(e1.into_iter().chain(e2).map(|e| e.column));
            let lhs = lhs.restrict(|f| !skip.contains(f));
            let rhs = rhs.restrict(|f| !skip.contains(f));
            let mut c = IdentityCheck::compare(&b, format!("φ ∘ (S_{i} ∗ S_{j}) ≅ (φ ∘ S_{i}) ∗ (φ ∘ S_{j})"), lhs, rhs)?;
            c.escaped_columns = skip.iter().cloned().collect();
            escaped.extend(skip);
            checks.push(c);
        }
    }

    let boundary = if l < top { Some(composites[l + 1].clone()) } else { None };
    let tele = Telescope {
        left: &span,
        left_name: "φ",
        family: &composites[..=l],
        family_name: "φS",
        boundary,
        excluded: &escaped,
    };
    let steps = telescope(&b, &tele, a)?;
    for c in &steps {
        escaped.extend(c.escaped_columns.iter().cloned());
    }
    checks.extend(steps);

    let cardinality = alternating_sum_check(&b, phi, &composites[..=l], &escaped)?;
    Ok(MultiplicativeReport {
        name: phi.name.clone(),
        hypotheses,
        checks,
        cardinality,
        escaped_columns: escaped.into_iter().collect(),
        inverse: composites[..=l].to_vec(),
    })
}

/// On columns of certified length at most `L`, the alternating token count
/// of `φ ∘ S_n` equals `φ` applied to the weak antipode.
fn alternating_sum_check(
    b: &IncidenceBialgebra,
    phi: &MultiplicativeSpan,
    composites: &[FiniteSpan],
    escaped: &BTreeSet<String>,
) -> Result<CheckResult> {
    let l = composites.len() - 1;
    let mut res = CheckResult::new("alternating sum of φ ∘ S_n is φ ∘ S");
    let w = weak_antipode_partial(b)?;
    let mut counts: BTreeMap<(String, String), Rational> = BTreeMap::new();
    for (n, s) in composites.iter().enumerate() {
        let sign = if n % 2 == 0 { Rational::one() } else { -Rational::one() };
        for t in &s.tokens {
            *counts.entry((t.left.clone(), t.right.clone())).or_default() += &sign;
        }
    }
    for k in 0..b.dim() {
        let label = b.label(k);
        if escaped.contains(label) || !b.is_certified(k) || b.length(k) > l {
            continue;
        }
        res.checked += 1;
        let mut want: BTreeMap<String, Rational> = BTreeMap::new();
        for (g, coeff) in w.map.column(k).terms() {
            for r in phi.values(g) {
                *want.entry(r).or_default() += coeff;
            }
        }
        want.retain(|_, v| !v.is_zero());
        let got: BTreeMap<String, Rational> = counts
            .iter()
            .filter(|((f, _), v)| f == label && !v.is_zero())
            .map(|((_, r), v)| (r.clone(), v.clone()))
            .collect();
        if got != want {
            res.fail(format!("at `{label}`: spans give {got:?}, weak antipode gives {want:?}"));
        }
    }
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spans::check_span_iso;
    use crate::builders::{additive_chain, monotone_surjection_data};

    fn passes(data: &WeightedClassData, phi: &MultiplicativeSpan, l: usize) -> MultiplicativeReport {
        let r = check_and_invert_multiplicative(data, phi, l).unwrap();
        for c in &r.checks {
            assert!(c.passed(), "{} / {}: {:?}", phi.name, c.name, c.certificate.counterexample);
            assert!(c.certificate.replay(&c.lhs, &c.rhs));
        }
        assert!(r.cardinality.passed, "{:?}", r.cardinality.witnesses);
        assert!(r.cardinality.checked > 0);
        assert!(r.escaped_columns.is_empty(), "{:?}", r.escaped_columns);
        r
    }

    #[test]
    fn zeta_inverts_to_the_phi_family() {
        let x = monotone_surjection_data(4, 5).unwrap();
        let r = passes(&x, &MultiplicativeSpan::zeta(&x).unwrap(), 4);
        let b = build_bialgebra(&x).unwrap();
        for (n, s) in r.inverse.iter().enumerate() {
            assert!(check_span_iso(s, &canonical_span(&b, SpanKind::Phi(n)).unwrap()).iso);
        }
    }

    #[test]
    fn defect_and_projection_invert() {
        let x = monotone_surjection_data(4, 5).unwrap();
        passes(&x, &MultiplicativeSpan::defect(&x).unwrap(), 4);
        passes(&x, &MultiplicativeSpan::projection(&x).unwrap(), 4);
    }

    #[test]
    fn weighted_inputs_are_refused() {
        let x = crate::builders::finite_surjections_weighted(3).unwrap();
        assert!(matches!(check_and_invert_multiplicative(&x, &MultiplicativeSpan::zeta(&x).unwrap(), 2), Err(Error::NotSetLevel)));
    }

    #[test]
    fn face_map_on_additive_chain_is_not_culf() {
        let x = additive_chain(2, 3).unwrap();
        let phi = MultiplicativeSpan::from_face(&x, 1).unwrap();
        let hyp = check_multiplicative_hypotheses(&x, &phi).unwrap();
        assert!(hyp[0].passed && hyp[1].passed);
        assert!(!hyp[2].passed);
        let err = check_and_invert_multiplicative(&x, &phi, 2).unwrap_err();
        match err {
            Error::HypothesisFailed { condition, witness } => {
                assert_eq!(condition, "left leg is CULF");
                assert!(witness.contains("factorisations"), "{witness}");
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn non_contracting_span_is_rejected() {
        let x = monotone_surjection_data(3, 4).unwrap();
        let mut phi = MultiplicativeSpan::zeta(&x).unwrap();
        phi.target = TargetMonoid::Finite(FiniteMonoid::truncated_naturals(9));
        phi.extension = None;
        phi.right_leg = phi.left_leg.iter().map(|l| if l == "(1)" { "1".into() } else { "0".into() }).collect();
        let hyp = check_multiplicative_hypotheses(&x, &phi).unwrap();
        assert!(!hyp[3].passed);
    }

    #[test]
    fn contraction_implies_unitality_for_every_span_tried() {
        let mut tried = 0;
        for data in [monotone_surjection_data(3, 4).unwrap(), monotone_surjection_data(4, 5).unwrap(), additive_chain(2, 3).unwrap()] {
            let mut spans = vec![MultiplicativeSpan::from_face(&data, 0).unwrap(), MultiplicativeSpan::from_face(&data, 1).unwrap()];
            spans.push(MultiplicativeSpan::from_face(&data, 2).unwrap());
            spans.extend([MultiplicativeSpan::zeta(&data), MultiplicativeSpan::projection(&data)].into_iter().flatten());
            if let Ok(d) = MultiplicativeSpan::defect(&data) {
                spans.push(d);
            }
            for phi in &spans {
                let h = check_multiplicative_hypotheses(&data, phi).unwrap();
                if h[0].passed && h[1].passed && h[3].passed {
                    assert!(h[4].passed, "{}", phi.name);
                    tried += 1;
                }
            }
        }
        assert!(tried >= 6);
    }

    proptest::proptest! {
        #[test]
        fn contraction_implies_unitality_under_perturbation(
            edits in proptest::collection::vec((0u8..3, 0usize..64, 0usize..64), 0..4),
        ) {
            let data = monotone_surjection_data(3, 4).unwrap();
            let mut phi = MultiplicativeSpan::defect(&data).unwrap();
            let TargetMonoid::Finite(target) = &phi.target else { unreachable!() };
            let values = target.elements.clone();
            let labels = edges(&data);
            let n = phi.elements.len();
            for (kind, at, to) in edits {
                match kind {
                    0 => phi.left_leg[at % n] = labels[to % labels.len()].clone(),
                    1 => phi.right_leg[at % n] = values[to % values.len()].clone(),
                    _ => phi.unit = at % n,
                }
            }
            let h = check_multiplicative_hypotheses(&data, &phi).unwrap();
            if h[0].passed && h[1].passed && h[3].passed {
                proptest::prop_assert!(h[4].passed);
            }
        }
    }
}
