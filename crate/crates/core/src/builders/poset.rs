//! Finite posets and exhaustive canonical labelling.
//!
//! Canonical forms come from an individualisation-refinement search without
//! pruning: every leaf of the search tree is a labelling, the smallest
//! adjacency code wins, and the leaves attaining it are in bijection with the
//! automorphism group.

use std::collections::HashMap;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poset {
    n: usize,
    leq: Vec<bool>,
}

/// Result of canonical labelling.
#[derive(Clone, Debug)]
pub struct Canonical {
    /// The relabelled poset; equal for isomorphic inputs.
    pub form: Poset,
    /// `labelling[v]` is the position of element `v` in `form`.
    pub labelling: Vec<usize>,
    /// Automorphisms of `form`, as permutations of its elements.
    pub automorphisms: Vec<Vec<usize>>,
}

impl Poset {
    /// Builds a poset from a reflexive, antisymmetric, transitive relation.
    pub fn from_relation(n: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let mut m = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                m[i * n + j] = leq(i, j);
            }
        }
        let p = Poset { n, leq: m };
        p.check()?;
        Ok(p)
    }

    /// Closes a cover relation (pairs `a < b`) reflexively and transitively.
    pub fn from_covers(n: usize, covers: &[(usize, usize)]) -> Result<Self> {
        let mut m = vec![false; n * n];
        for i in 0..n {
            m[i * n + i] = true;
        }
        for &(a, b) in covers {
            if a >= n || b >= n {
                return Err(Error::Malformed(format!("cover ({a},{b}) out of range")));
            }
            m[a * n + b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if m[i * n + k] {
                    for j in 0..n {
                        if m[k * n + j] {
                            m[i * n + j] = true;
                        }
                    }
                }
            }
        }
        let p = Poset { n, leq: m };
        p.check()?;
        Ok(p)
    }

    fn check(&self) -> Result<()> {
        let n = self.n;
        for i in 0..n {
            if !self.leq(i, i) {
                return Err(Error::Malformed(format!("relation not reflexive at {i}")));
            }
            for j in 0..n {
                if i != j && self.leq(i, j) && self.leq(j, i) {
                    return Err(Error::Malformed(format!("relation not antisymmetric at ({i},{j})")));
                }
                for k in 0..n {
                    if self.leq(i, j) && self.leq(j, k) && !self.leq(i, k) {
                        return Err(Error::Malformed(format!("relation not transitive at ({i},{j},{k})")));
                    }
                }
            }
        }
        Ok(())
    }

    /// The chain `0 < 1 < ... < k`.
    pub fn chain(k: usize) -> Self {
        Poset::from_relation(k + 1, |i, j| i <= j).expect("chain is a poset")
    }

    /// Subsets of a `k`-element set under inclusion.
    pub fn boolean(k: usize) -> Self {
        Poset::from_relation(1 << k, |i, j| i & j == i).expect("boolean lattice is a poset")
    }

    /// Divisors of `n` under divisibility, in increasing order.
    pub fn divisors(n: u64) -> (Vec<u64>, Self) {
        let ds: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
        let p = Poset::from_relation(ds.len(), |i, j| ds[j] % ds[i] == 0).expect("divisibility is a poset");
        (ds, p)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i * self.n + j]
    }

    pub fn bottom(&self) -> Option<usize> {
        (0..self.n).find(|&b| (0..self.n).all(|j| self.leq(b, j)))
    }

    pub fn top(&self) -> Option<usize> {
        (0..self.n).find(|&t| (0..self.n).all(|j| self.leq(j, t)))
    }

    pub fn is_bounded(&self) -> bool {
        self.bottom().is_some() && self.top().is_some()
    }

    /// Number of steps in a longest chain.
    pub fn length(&self) -> usize {
        let order = self.linear_extension();
        let mut best = vec![0usize; self.n];
        for (pos, &v) in order.iter().enumerate() {
            for &u in &order[..pos] {
                if u != v && self.leq(u, v) {
                    best[v] = best[v].max(best[u] + 1);
                }
            }
        }
        best.into_iter().max().unwrap_or(0)
    }

    fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&v| (0..self.n).filter(|&u| self.leq(u, v)).count());
        order
    }

    pub fn product(&self, other: &Poset) -> Poset {
        let m = other.n;
        let n = self.n * m;
        let mut leq = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                leq[a * n + b] = self.leq(a / m, b / m) && other.leq(a % m, b % m);
            }
        }
        Poset { n, leq }
    }

    /// The interval `[x, y]` and the original element of each of its points.
    pub fn subinterval(&self, x: usize, y: usize) -> (Poset, Vec<usize>) {
        let elems: Vec<usize> = (0..self.n).filter(|&z| self.leq(x, z) && self.leq(z, y)).collect();
        let k = elems.len();
        let mut leq = vec![false; k * k];
        for (i, &a) in elems.iter().enumerate() {
            for (j, &b) in elems.iter().enumerate() {
                leq[i * k + j] = self.leq(a, b);
            }
        }
        (Poset { n: k, leq }, elems)
    }

    pub fn is_chain(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.leq(i, j) || self.leq(j, i)))
    }

    /// Applies a permutation: element `v` moves to position `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Poset {
        let n = self.n;
        let mut leq = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                leq[perm[i] * n + perm[j]] = self.leq(i, j);
            }
        }
        Poset { n, leq }
    }

    fn code(&self, inv: &[usize]) -> Vec<u64> {
        let n = self.n;
        let mut code = vec![0u64; (n * n).div_ceil(64).max(1)];
        for i in 0..n {
            for j in 0..n {
                if self.leq(inv[i], inv[j]) {
                    let bit = i * n + j;
                    code[bit / 64] |= 1 << (bit % 64);
                }
            }
        }
        code
    }

    fn refine(&self, colors: &mut Vec<usize>) {
        let n = self.n;
        loop {
            let k = colors.iter().copied().max().map_or(0, |c| c + 1);
            let mut sigs: Vec<Vec<u32>> = Vec::with_capacity(n);
            for v in 0..n {
                let mut sig = vec![0u32; 2 * k + 1];
                sig[0] = colors[v] as u32;
                for u in 0..n {
                    if u == v {
                        continue;
                    }
                    if self.leq(u, v) {
                        sig[1 + colors[u]] += 1;
                    }
                    if self.leq(v, u) {
                        sig[1 + k + colors[u]] += 1;
                    }
                }
                sigs.push(sig);
            }
            let mut distinct = sigs.clone();
            distinct.sort();
            distinct.dedup();
            let next: Vec<usize> = sigs.iter().map(|s| distinct.binary_search(s).unwrap()).collect();
            let stable = distinct.len() == k;
            *colors = next;
            if stable {
                return;
            }
        }
    }

    pub fn canonical(&self) -> Canonical {
        let n = self.n;
        if n == 0 {
            return Canonical { form: self.clone(), labelling: Vec::new(), automorphisms: vec![Vec::new()] };
        }
        let mut colors = vec![0; n];
        self.refine(&mut colors);
        let mut best: Option<Vec<u64>> = None;
        let mut leaves: Vec<Vec<usize>> = Vec::new();
        self.search(colors, &mut best, &mut leaves);
        let p0 = leaves[0].clone();
        let mut inv0 = vec![0; n];
        for (v, &p) in p0.iter().enumerate() {
            inv0[p] = v;
        }
        let automorphisms = leaves
            .iter()
            .map(|q| (0..n).map(|i| q[inv0[i]]).collect())
            .collect();
        Canonical { form: self.relabel(&p0), labelling: p0, automorphisms }
    }

    fn search(&self, colors: Vec<usize>, best: &mut Option<Vec<u64>>, leaves: &mut Vec<Vec<usize>>) {
        let n = self.n;
        let mut count = vec![0usize; n];
        for &c in &colors {
            count[c] += 1;
        }
        let Some(cell) = (0..n).find(|&c| count[c] > 1) else {
            let mut inv = vec![0; n];
            for (v, &c) in colors.iter().enumerate() {
                inv[c] = v;
            }
            let code = self.code(&inv);
            match best.as_ref().map(|b| code.cmp(b)) {
                None | Some(std::cmp::Ordering::Less) => {
                    *best = Some(code);
                    leaves.clear();
                    leaves.push(colors);
                }
                Some(std::cmp::Ordering::Equal) => leaves.push(colors),
                Some(std::cmp::Ordering::Greater) => {}
            }
            return;
        };
        for v in (0..n).filter(|&v| colors[v] == cell) {
            let mut next: Vec<usize> = colors
                .iter()
                .enumerate()
                .map(|(u, &c)| 2 * c + usize::from(c == cell && u != v))
                .collect();
            normalise(&mut next);
            self.refine(&mut next);
            self.search(next, best, leaves);
        }
    }
}

fn normalise(colors: &mut [usize]) {
    let mut distinct: Vec<usize> = colors.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let rank: HashMap<usize, usize> = distinct.iter().enumerate().map(|(r, &c)| (c, r)).collect();
    for c in colors.iter_mut() {
        *c = rank[c];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_automorphisms(p: &Poset) -> usize {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for pos in 0..n {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        perms(p.len())
            .into_iter()
            .filter(|s| (0..p.len()).all(|i| (0..p.len()).all(|j| p.leq(i, j) == p.leq(s[i], s[j]))))
            .count()
    }

    #[test]
    fn boolean_automorphisms_are_factorials() {
        for (k, fact) in [(0, 1), (1, 1), (2, 2), (3, 6), (4, 24)] {
            let c = Poset::boolean(k).canonical();
            assert_eq!(c.automorphisms.len(), fact, "B_{k}");
        }
        // Brute-force oracle on the small cases.
        for k in 0..=3 {
            let p = Poset::boolean(k);
            assert_eq!(p.canonical().automorphisms.len(), brute_force_automorphisms(&p));
        }
    }

    #[test]
    fn isomorphic_inputs_share_a_form() {
        let b2 = Poset::boolean(2);
        let c1 = Poset::chain(1);
        let prod = c1.product(&c1);
        assert_eq!(b2.canonical().form, prod.canonical().form);
        let (_, d6) = Poset::divisors(6);
        assert_eq!(d6.canonical().form, b2.canonical().form);
        assert_ne!(Poset::chain(3).canonical().form, b2.canonical().form);
        // A relabelled copy.
        let shuffled = Poset::boolean(3).relabel(&[5, 2, 7, 0, 1, 3, 6, 4]);
        assert_eq!(shuffled.canonical().form, Poset::boolean(3).canonical().form);
    }

    #[test]
    fn automorphisms_preserve_form() {
        let (_, d12) = Poset::divisors(12);
        let c = d12.canonical();
        assert_eq!(c.automorphisms.len(), brute_force_automorphisms(&d12));
        for a in &c.automorphisms {
            assert_eq!(c.form.relabel(a), c.form);
        }
        assert_eq!(d12.relabel(&c.labelling), c.form);
    }

    #[test]
    fn lengths_and_bounds() {
        assert_eq!(Poset::boolean(3).length(), 3);
        assert_eq!(Poset::chain(4).length(), 4);
        let (_, d60) = Poset::divisors(60);
        assert_eq!(d60.length(), 4);
        assert!(d60.is_bounded());
        let anti = Poset::from_relation(2, |i, j| i == j).unwrap();
        assert!(!anti.is_bounded());
        assert!(Poset::from_relation(2, |_, _| true).is_err());
    }
}
