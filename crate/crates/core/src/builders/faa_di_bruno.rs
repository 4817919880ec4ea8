//! Finite sets and surjections as weighted class data.
//!
//! A string of surjections `S_0 -> S_1 -> ... -> S_n` up to simultaneous
//! isomorphism is a forest whose roots are the points of `S_n`, whose leaves
//! are the points of `S_0`, and in which every leaf sits at depth `n`. The
//! automorphism group of the string is the automorphism group of the forest.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::simplicial::{FreeProductRule, MonoidalStructure, TruncatedSimplicialSet, WeightedClassData};

use super::Budget;

/// A rooted tree with unordered children, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tree(Vec<Tree>);

/// A multiset of trees of equal height, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Forest(pub Vec<Tree>);

impl Tree {
    fn leaf() -> Self {
        Tree(Vec::new())
    }

    fn node(mut children: Vec<Tree>) -> Self {
        children.sort();
        Tree(children)
    }

    fn leaves(&self) -> usize {
        if self.0.is_empty() {
            1
        } else {
            self.0.iter().map(Tree::leaves).sum()
        }
    }

    fn aut(&self) -> u64 {
        forest_aut(&self.0)
    }

    fn label(&self, height: usize) -> String {
        if height == 1 {
            return self.0.len().to_string();
        }
        let inner: Vec<String> = self.0.iter().map(|t| t.label(height - 1)).collect();
        format!("{{{}}}", inner.join(","))
    }

    /// Removes the leaf layer.
    fn prune(&self, height: usize) -> Tree {
        if height == 1 {
            Tree::leaf()
        } else {
            Tree::node(self.0.iter().map(|t| t.prune(height - 1)).collect())
        }
    }

    /// Removes the layer at the given height (`0 < h < height of self`).
    fn splice(&self, height: usize, h: usize) -> Tree {
        if height == h + 1 {
            Tree::node(self.0.iter().flat_map(|c| c.0.iter().cloned()).collect())
        } else {
            Tree::node(self.0.iter().map(|c| c.splice(height - 1, h)).collect())
        }
    }

    /// Puts a unary node above every node at the given height.
    fn wrap(&self, height: usize, h: usize) -> Tree {
        if height == h {
            Tree(vec![self.clone()])
        } else {
            Tree::node(self.0.iter().map(|c| c.wrap(height - 1, h)).collect())
        }
    }
}

fn forest_aut(trees: &[Tree]) -> u64 {
    let mut aut = 1u64;
    let mut k = 0;
    while k < trees.len() {
        let mut j = k;
        while j < trees.len() && trees[j] == trees[k] {
            j += 1;
        }
        let mult = (j - k) as u64;
        aut *= (1..=mult).product::<u64>() * trees[k].aut().pow(mult as u32);
        k = j;
    }
    aut
}

impl Forest {
    fn new(mut trees: Vec<Tree>) -> Self {
        trees.sort();
        Forest(trees)
    }

    pub fn leaves(&self) -> usize {
        self.0.iter().map(Tree::leaves).sum()
    }

    /// Order of the automorphism group.
    pub fn aut(&self) -> u64 {
        forest_aut(&self.0)
    }

    /// `[m]` on level 0, nested fibre sizes above.
    pub fn label(&self, level: usize) -> String {
        if level == 0 {
            return format!("[{}]", self.0.len());
        }
        let inner: Vec<String> = self.0.iter().map(|t| t.label(level)).collect();
        format!("{{{}}}", inner.join(","))
    }

    fn face(&self, n: usize, i: usize) -> Forest {
        if i == 0 {
            Forest::new(self.0.iter().map(|t| t.prune(n)).collect())
        } else if i == n {
            Forest::new(self.0.iter().flat_map(|t| t.0.iter().cloned()).collect())
        } else {
            Forest::new(self.0.iter().map(|t| t.splice(n, i)).collect())
        }
    }

    fn degeneracy(&self, n: usize, i: usize) -> Forest {
        Forest::new(self.0.iter().map(|t| t.wrap(n, i)).collect())
    }

    fn union(&self, other: &Forest) -> Forest {
        Forest::new(self.0.iter().chain(&other.0).cloned().collect())
    }
}

/// Trees of the given height with at most `max` leaves, sorted.
fn trees(height: usize, max: usize) -> Vec<Tree> {
    if height == 0 {
        return vec![Tree::leaf()];
    }
    let mut out: Vec<Tree> =
        forests(height - 1, max).into_iter().filter(|f| !f.0.is_empty()).map(|f| Tree::node(f.0)).collect();
    out.sort();
    out
}

/// Forests of trees of the given height with at most `max` leaves in total.
fn forests(height: usize, max: usize) -> Vec<Forest> {
    let pool = trees(height, max);
    let sizes: Vec<usize> = pool.iter().map(Tree::leaves).collect();
    let mut out = Vec::new();
    let mut current = Vec::new();
    multisets(&pool, &sizes, 0, max, &mut current, &mut out);
    out.sort();
    out
}

fn multisets(pool: &[Tree], sizes: &[usize], from: usize, room: usize, current: &mut Vec<Tree>, out: &mut Vec<Forest>) {
    out.push(Forest::new(current.clone()));
    for k in from..pool.len() {
        if sizes[k] <= room {
            current.push(pool[k].clone());
            multisets(pool, sizes, k, room - sizes[k], current, out);
            current.pop();
        }
    }
}

/// Sets of size at most `max_n` and strings of surjections between them,
/// truncated at level `max(3, max_n)`.
pub fn finite_surjections_weighted(max_n: usize) -> Result<WeightedClassData> {
    finite_surjections_weighted_with(max_n, max_n.max(3))
}

/// As [`finite_surjections_weighted`] with an explicit truncation level.
pub fn finite_surjections_weighted_with(max_n: usize, levels: usize) -> Result<WeightedClassData> {
    if max_n == 0 {
        return Err(Error::Malformed("max_n must be at least 1".into()));
    }
    let mut budget = Budget::from_env();
    let mut classes: Vec<Vec<Forest>> = Vec::new();
    for n in 0..=levels {
        let f = forests(n, max_n);
        budget.spend(f.len())?;
        classes.push(f);
    }
    let index: Vec<HashMap<Forest, usize>> =
        classes.iter().map(|l| l.iter().enumerate().map(|(k, f)| (f.clone(), k)).collect()).collect();
    let ids = classes.iter().enumerate().map(|(n, l)| l.iter().map(|f| f.label(n)).collect()).collect();
    let aut = classes.iter().map(|l| l.iter().map(Forest::aut).collect()).collect();
    let mut faces = vec![Vec::new()];
    for n in 1..=levels {
        faces.push((0..=n).map(|i| classes[n].iter().map(|f| index[n - 1][&f.face(n, i)]).collect()).collect());
    }
    let degs = (0..levels)
        .map(|n| (0..=n).map(|i| classes[n].iter().map(|f| index[n + 1][&f.degeneracy(n, i)]).collect()).collect())
        .collect();
    let mut products = Vec::new();
    for (n, level) in classes.iter().enumerate() {
        let mut table = BTreeMap::new();
        for (a, fa) in level.iter().enumerate() {
            for (b, fb) in level.iter().enumerate() {
                if fa.leaves() + fb.leaves() <= max_n {
                    table.insert((a, b), index[n][&fa.union(fb)]);
                }
            }
        }
        products.push(table);
    }
    let unit = index[0][&Forest::new(Vec::new())];
    let set = TruncatedSimplicialSet::new(ids, faces, degs)?;
    let monoidal = MonoidalStructure { unit, products, free: Some(FreeProductRule::FibreUnion) };
    WeightedClassData::new(set, aut, Some(monoidal))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::{check_culf_monoidal, check_decomposition, validate_monoidal, validate_structure};

    /// Pairs of permutations `(p, q)` of source and target with `f ∘ p = q ∘ f`.
    fn brute_aut(f: &[usize], m: usize, k: usize) -> u64 {
        let ps = permutations(m);
        let qs = permutations(k);
        let mut count = 0;
        for p in &ps {
            for q in &qs {
                if (0..m).all(|x| f[p[x]] == q[f[x]]) {
                    count += 1;
                }
            }
        }
        count
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for pos in 0..n {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn edge_aut_orders_match_brute_force() {
        let x = finite_surjections_weighted(4).unwrap();
        let s = x.set();
        let c = s.lookup(1, "{2}").unwrap();
        assert_eq!(x.aut(1, c), 2);
        assert_eq!(x.aut(1, c), brute_aut(&[0, 0], 2, 1));
        let id2 = s.lookup(1, "{1,1}").unwrap();
        assert_eq!(x.aut(1, id2), 2);
        assert_eq!(x.aut(1, id2), brute_aut(&[0, 1], 2, 2));
        let f = s.lookup(1, "{1,3}").unwrap();
        assert_eq!(x.aut(1, f), brute_aut(&[0, 1, 1, 1], 4, 2));
    }

    #[test]
    fn union_of_fibres() {
        let x = finite_surjections_weighted(4).unwrap();
        let s = x.set();
        let a = s.lookup(1, "{2}").unwrap();
        let m = x.monoidal().unwrap();
        assert_eq!(s.id(1, m.product(1, a, a).unwrap()), "{2,2}");
        assert_eq!(s.id(0, m.unit), "[0]");
        assert_eq!(s.id(1, x.unit_edge().unwrap()), "{}");
    }

    #[test]
    fn level_two_labels_nest() {
        let x = finite_surjections_weighted(3).unwrap();
        let s = x.set();
        // 3 -> 2 -> 1 with fibres {1,2} over the single point.
        let k = s.lookup(2, "{{1,2}}").unwrap();
        assert_eq!(s.id(1, s.face(2, 1, k)), "{3}");
        assert_eq!(s.id(1, s.face(2, 2, k)), "{1,2}");
        assert_eq!(s.id(1, s.face(2, 0, k)), "{2}");
    }

    #[test]
    fn structural_checks_pass() {
        let x = finite_surjections_weighted(4).unwrap();
        let r = validate_structure(x.set());
        assert!(r.passed(), "{:?}", &r.violations[..r.violations.len().min(5)]);
        assert!(validate_monoidal(&x).passed);
        assert!(check_decomposition(&x, 3).unwrap().passed);
        assert!(check_culf_monoidal(&x, 4).unwrap().passed);
    }
}
