//! Isomorphism certificates between finite spans: an explicit bijection of
//! middle sets commuting with both legs, or a fibre where the counts differ.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::FiniteSpan;

/// Matched token indices `(lhs, rhs)` over one `(left, right)` pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibreMatch {
    pub index: usize,
    pub left: String,
    pub right: String,
    pub pairs: Vec<(usize, usize)>,
}

/// A fibre on which the two spans disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibreMismatch {
    pub left: String,
    pub right: String,
    pub lhs_count: usize,
    pub rhs_count: usize,
    pub lhs_tokens: Vec<String>,
    pub rhs_tokens: Vec<String>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanIsoCertificate {
    pub iso: bool,
    pub fibres: Vec<FibreMatch>,
    pub counterexample: Option<FibreMismatch>,
}

const SHOWN_TOKENS: usize = 8;

fn show(span: &FiniteSpan, indices: &[usize]) -> Vec<String> {
    indices.iter().take(SHOWN_TOKENS).map(|&k| span.tokens[k].provenance.join(" ")).collect()
}

fn fibres(span: &FiniteSpan) -> BTreeMap<(&str, &str), Vec<usize>> {
    let mut out: BTreeMap<(&str, &str), Vec<usize>> = BTreeMap::new();
    for (k, t) in span.tokens.iter().enumerate() {
        out.entry((t.left.as_str(), t.right.as_str())).or_default().push(k);
    }
    for v in out.values_mut() {
        v.sort_by(|&a, &b| span.tokens[a].provenance.cmp(&span.tokens[b].provenance));
    }
    out
}

/// Compares fibre cardinalities over every `(left, right)` pair and matches
/// tokens within each fibre in provenance order.
pub fn check_span_iso(lhs: &FiniteSpan, rhs: &FiniteSpan) -> SpanIsoCertificate {
    let (fl, fr) = (fibres(lhs), fibres(rhs));
    let keys: BTreeSet<(&str, &str)> = fl.keys().chain(fr.keys()).copied().collect();
    let empty = Vec::new();
    let mut matched = Vec::new();
    for (index, key) in keys.into_iter().enumerate() {
        let (a, b) = (fl.get(&key).unwrap_or(&empty), fr.get(&key).unwrap_or(&empty));
        if a.len() != b.len() {
            return SpanIsoCertificate {
                iso: false,
                fibres: matched,
                counterexample: Some(FibreMismatch {
                    left: key.0.into(),
                    right: key.1.into(),
                    lhs_count: a.len(),
                    rhs_count: b.len(),
                    lhs_tokens: show(lhs, a),
                    rhs_tokens: show(rhs, b),
                    reason: "fibre cardinalities differ".into(),
                }),
            };
        }
        matched.push(FibreMatch {
            index,
            left: key.0.into(),
            right: key.1.into(),
            pairs: a.iter().copied().zip(b.iter().copied()).collect(),
        });
    }
    SpanIsoCertificate { iso: true, fibres: matched, counterexample: None }
}

/// A certificate from an explicit token map `lhs[k] -> rhs[map[k]]`, which
/// must be a bijection commuting with both legs.
pub fn certificate_from_map(lhs: &FiniteSpan, rhs: &FiniteSpan, map: &[usize]) -> SpanIsoCertificate {
    let refuse = |k: usize, reason: String| {
        let t = lhs.tokens.get(k);
        SpanIsoCertificate {
            iso: false,
            fibres: Vec::new(),
            counterexample: Some(FibreMismatch {
                left: t.map(|t| t.left.clone()).unwrap_or_default(),
                right: t.map(|t| t.right.clone()).unwrap_or_default(),
                lhs_count: lhs.len(),
                rhs_count: rhs.len(),
                lhs_tokens: t.map(|t| vec![t.provenance.join(" ")]).unwrap_or_default(),
                rhs_tokens: Vec::new(),
                reason,
            }),
        }
    };
    if map.len() != lhs.len() || lhs.len() != rhs.len() {
        return refuse(0, format!("map of length {} between spans of sizes {} and {}", map.len(), lhs.len(), rhs.len()));
    }
    let mut seen = vec![false; rhs.len()];
    let mut grouped: BTreeMap<(&str, &str), Vec<(usize, usize)>> = BTreeMap::new();
    for (k, &j) in map.iter().enumerate() {
        if j >= rhs.len() || seen[j] {
            return refuse(k, "token map is not injective".into());
        }
        seen[j] = true;
        let (a, b) = (&lhs.tokens[k], &rhs.tokens[j]);
        if a.left != b.left || a.right != b.right {
            return refuse(k, format!("image `{}` lies over ({}, {})", b.provenance.join(" "), b.left, b.right));
        }
        grouped.entry((a.left.as_str(), a.right.as_str())).or_default().push((k, j));
    }
    let fibres = grouped
        .into_iter()
        .enumerate()
        .map(|(index, ((l, r), pairs))| FibreMatch { index, left: l.into(), right: r.into(), pairs })
        .collect();
    SpanIsoCertificate { iso: true, fibres, counterexample: None }
}

impl SpanIsoCertificate {
    pub fn is_iso(&self) -> bool {
        self.iso
    }

    /// Re-checks the certificate token by token: every pair commutes with
    /// both legs and the pairs form a bijection of the middle sets.
    pub fn replay(&self, lhs: &FiniteSpan, rhs: &FiniteSpan) -> bool {
        if !self.iso {
            return self.counterexample.as_ref().is_some_and(|c| {
                let counts = |s: &FiniteSpan| s.tokens.iter().filter(|t| t.left == c.left && t.right == c.right).count();
                counts(lhs) != counts(rhs) || c.reason != "fibre cardinalities differ"
            });
        }
        let mut used_l = vec![false; lhs.len()];
        let mut used_r = vec![false; rhs.len()];
        for fibre in &self.fibres {
            for &(a, b) in &fibre.pairs {
                let (Some(s), Some(t)) = (lhs.tokens.get(a), rhs.tokens.get(b)) else {
                    return false;
                };
                if used_l[a] || used_r[b] {
                    return false;
                }
                used_l[a] = true;
                used_r[b] = true;
                if s.left != t.left || s.right != t.right || s.left != fibre.left || s.right != fibre.right {
                    return false;
                }
            }
        }
        used_l.iter().all(|&u| u) && used_r.iter().all(|&u| u)
    }

    pub fn matched_tokens(&self) -> usize {
        self.fibres.iter().map(|f| f.pairs.len()).sum()
    }
}

/// Index of tokens by provenance, for building explicit maps.
pub(crate) fn provenance_index(span: &FiniteSpan) -> HashMap<Vec<String>, usize> {
    span.tokens.iter().enumerate().map(|(k, t)| (t.provenance.clone(), k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spans::SpanToken;
    use proptest::prelude::*;

    fn span(entries: &[(u8, u8)]) -> FiniteSpan {
        FiniteSpan::new(
            entries
                .iter()
                .enumerate()
                .map(|(k, &(l, r))| SpanToken { provenance: vec![format!("m{k}")], left: format!("x{l}"), right: format!("y{r}") })
                .collect(),
        )
    }

    #[test]
    fn a_span_is_isomorphic_to_itself() {
        let s = span(&[(0, 1), (0, 1), (2, 0)]);
        let c = check_span_iso(&s, &s);
        assert!(c.iso && c.replay(&s, &s));
        assert_eq!(c.matched_tokens(), 3);
    }

    #[test]
    fn differing_fibres_give_a_counterexample() {
        let s = span(&[(0, 1), (0, 1)]);
        let t = span(&[(0, 1), (0, 2)]);
        let c = check_span_iso(&s, &t);
        let bad = c.counterexample.clone().unwrap();
        assert_eq!((bad.left.as_str(), bad.right.as_str(), bad.lhs_count, bad.rhs_count), ("x0", "y1", 2, 1));
        assert!(c.replay(&s, &t));
    }

    #[test]
    fn explicit_maps_must_respect_legs() {
        let s = span(&[(0, 1), (1, 1)]);
        let t = span(&[(1, 1), (0, 1)]);
        assert!(certificate_from_map(&s, &t, &[1, 0]).iso);
        assert!(!certificate_from_map(&s, &t, &[0, 1]).iso);
        assert!(!certificate_from_map(&s, &t, &[1, 1]).iso);
    }

    proptest! {
        #[test]
        fn shuffled_spans_are_isomorphic_and_certificates_replay(
            entries in proptest::collection::vec((0u8..4, 0u8..3), 0..20),
            seed in any::<u64>(),
        ) {
            let s = span(&entries);
            let mut shuffled = s.tokens.clone();
            let n = shuffled.len();
            let mut state = seed;
            for k in (1..n).rev() {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                shuffled.swap(k, (state >> 33) as usize % (k + 1));
            }
            let t = FiniteSpan::new(shuffled);
            let c = check_span_iso(&s, &t);
            prop_assert!(c.iso);
            prop_assert!(c.replay(&s, &t));
            let json = serde_json::to_string(&c).unwrap();
            let back: SpanIsoCertificate = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(back, c);
        }

        #[test]
        fn dropping_a_token_breaks_isomorphism(entries in proptest::collection::vec((0u8..4, 0u8..3), 1..20)) {
            let s = span(&entries);
            let t = FiniteSpan::new(s.tokens[1..].to_vec());
            let c = check_span_iso(&s, &t);
            prop_assert!(!c.iso);
            prop_assert!(c.replay(&s, &t));
        }
    }
}
