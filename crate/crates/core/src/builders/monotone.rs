//! Finite ordinals and monotone surjections, monoidal under ordinal sum.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::simplicial::{composition_label, FreeProductRule, MonoidalStructure, TruncatedSimplicialSet, WeightedClassData};

use super::category::{nerve_from_strings, nerve_strings, Arrow, FiniteCategorySpec};
use super::Budget;

/// All compositions of `m` (ordered tuples of positive parts).
fn compositions(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=m {
        for mut rest in compositions(m - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `g ∘ f` where `f` is the composition of `m` with `n` parts and `g` groups those parts.
fn compose(f: &[usize], g: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(g.len());
    let mut at = 0;
    for &block in g {
        out.push(f[at..at + block].iter().sum());
        at += block;
    }
    out
}

/// Ordinals `0..=max_source` with monotone surjections, encoded as compositions.
pub fn surjection_category(max_source: usize) -> FiniteCategorySpec {
    let objects: Vec<String> = (0..=max_source).map(|m| m.to_string()).collect();
    let mut arrows = Vec::new();
    let mut parts = Vec::new();
    for m in 0..=max_source {
        for c in compositions(m) {
            arrows.push(Arrow { name: composition_label(&c), source: m, target: c.len() });
            parts.push(c);
        }
    }
    let index: HashMap<Vec<usize>, usize> = parts.iter().enumerate().map(|(k, c)| (c.clone(), k)).collect();
    let identities = (0..=max_source).map(|m| index[&vec![1; m]]).collect();
    let mut table = HashMap::new();
    for (f, pf) in parts.iter().enumerate() {
        for (g, pg) in parts.iter().enumerate() {
            if pg.iter().sum::<usize>() == pf.len() {
                table.insert((f, g), index[&compose(pf, pg)]);
            }
        }
    }
    FiniteCategorySpec::new(objects, arrows, identities, table).expect("monotone surjections form a category")
}

/// The nerve of [`surjection_category`] truncated at `n`, with ordinal sum
/// tabulated at every level wherever the summed source stays within range.
pub fn monotone_surjection_space(max_source: usize, n: usize) -> Result<(TruncatedSimplicialSet, MonoidalStructure)> {
    if max_source == 0 {
        return Err(Error::Malformed("max_source must be at least 1".into()));
    }
    let cat = surjection_category(max_source);
    let mut budget = Budget::from_env();
    let ns = nerve_strings(&cat, n, &mut budget)?;
    let set = nerve_from_strings(&cat, &ns)?;
    let arrow_parts: Vec<Vec<usize>> = cat
        .arrows()
        .iter()
        .map(|a| crate::simplicial::parse_list(&a.name, '(', ')').expect("composition label"))
        .collect();
    let arrow_index: HashMap<Vec<usize>, usize> =
        arrow_parts.iter().enumerate().map(|(k, c)| (c.clone(), k)).collect();
    let sum = |f: usize, g: usize| {
        let mut c = arrow_parts[f].clone();
        c.extend(&arrow_parts[g]);
        arrow_index.get(&c).copied()
    };
    let mut products = Vec::with_capacity(n + 1);
    let mut level0 = BTreeMap::new();
    for a in 0..=max_source {
        for b in 0..=max_source - a {
            level0.insert((a, b), a + b);
        }
    }
    products.push(level0);
    for lvl in 1..=n {
        let strings = &ns.strings[lvl];
        // Group by source size so only pairs with summed source in range are tried.
        let mut by_source: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (k, s) in strings.iter().enumerate() {
            by_source.entry(cat.arrows()[s[0]].source).or_default().push(k);
        }
        let mut table = BTreeMap::new();
        for (&ma, la) in &by_source {
            for (&mb, lb) in by_source.range(..=max_source - ma) {
                let _ = mb;
                budget.spend(la.len() * lb.len())?;
                for &a in la {
                    for &b in lb {
                        let s: Option<Vec<usize>> =
                            strings[a].iter().zip(&strings[b]).map(|(&f, &g)| sum(f, g)).collect();
                        let s = s.expect("summed source within range");
                        table.insert((a, b), ns.index[lvl][&s]);
                    }
                }
            }
        }
        products.push(table);
    }
    let monoidal = MonoidalStructure { unit: 0, products, free: Some(FreeProductRule::OrdinalSum) };
    Ok((set, monoidal))
}

/// [`monotone_surjection_space`] packaged as plain weighted data.
pub fn monotone_surjection_data(max_source: usize, n: usize) -> Result<WeightedClassData> {
    let (set, m) = monotone_surjection_space(max_source, n)?;
    WeightedClassData::from_set(set, Some(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::{check_culf_monoidal, check_decomposition, nondegenerate_simplices, validate_monoidal, validate_structure};

    #[test]
    fn nondegenerate_edges_for_three() {
        let x = monotone_surjection_data(3, 3).unwrap();
        let nd: Vec<&str> = nondegenerate_simplices(&x, 1).unwrap().into_iter().map(|k| x.set().id(1, k)).collect();
        let mut got = nd.clone();
        got.sort();
        assert_eq!(got, vec!["(1,2)", "(2)", "(2,1)", "(3)"]);
    }

    #[test]
    fn strict_compositions_counted_per_source() {
        let x = monotone_surjection_data(5, 2).unwrap();
        let nd = nondegenerate_simplices(&x, 1).unwrap();
        for m in 1..=5usize {
            let count = nd
                .iter()
                .filter(|&&k| crate::simplicial::parse_list(x.set().id(1, k), '(', ')').unwrap().iter().sum::<usize>() == m)
                .count();
            // Compositions of m other than all-ones.
            assert_eq!(count, (1usize << (m - 1)) - 1);
        }
    }

    #[test]
    fn identities_are_the_degenerate_edges() {
        let x = monotone_surjection_data(4, 2).unwrap();
        let nd = x.set().nondegenerate_table();
        for k in 0..x.set().len(1) {
            let parts = crate::simplicial::parse_list(x.set().id(1, k), '(', ')').unwrap();
            assert_eq!(!nd[1][k], parts.iter().all(|&p| p == 1));
        }
    }

    #[test]
    fn ordinal_sum_concatenates() {
        let (x, m) = monotone_surjection_space(5, 2).unwrap();
        let a = x.lookup(1, "(2)").unwrap();
        let b = x.lookup(1, "(3)").unwrap();
        assert_eq!(x.id(1, m.product(1, a, b).unwrap()), "(2,3)");
    }

    #[test]
    fn passes_structural_checks() {
        let x = monotone_surjection_data(4, 4).unwrap();
        assert!(validate_structure(x.set()).passed());
        assert!(validate_monoidal(&x).passed);
        assert!(check_decomposition(&x, 3).unwrap().passed);
        assert!(check_culf_monoidal(&x, 4).unwrap().passed);
    }
}
