//! Finite categories and their nerves.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::simplicial::{MonoidalStructure, TruncatedSimplicialSet, WeightedClassData};

use super::{Budget, Poset};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// Objects, arrows, identities and a full composition table.
#[derive(Clone, Debug)]
pub struct FiniteCategorySpec {
    objects: Vec<String>,
    arrows: Vec<Arrow>,
    identities: Vec<usize>,
    /// `(f, g) -> g ∘ f` for `target(f) = source(g)`.
    compose: HashMap<(usize, usize), usize>,
    outgoing: Vec<Vec<usize>>,
}

impl FiniteCategorySpec {
    /// Checks composability, unit laws and associativity.
    pub fn new(
        objects: Vec<String>,
        arrows: Vec<Arrow>,
        identities: Vec<usize>,
        compose: HashMap<(usize, usize), usize>,
    ) -> Result<Self> {
        let bad = |m: String| Err(Error::Malformed(m));
        if identities.len() != objects.len() {
            return bad("one identity per object required".into());
        }
        for a in &arrows {
            if a.source >= objects.len() || a.target >= objects.len() {
                return bad(format!("arrow `{}` has endpoints out of range", a.name));
            }
        }
        for (x, &i) in identities.iter().enumerate() {
            if i >= arrows.len() || arrows[i].source != x || arrows[i].target != x {
                return bad(format!("identity of `{}` is not an endo-arrow", objects[x]));
            }
        }
        let mut outgoing = vec![Vec::new(); objects.len()];
        for (k, a) in arrows.iter().enumerate() {
            outgoing[a.source].push(k);
        }
        let cat = FiniteCategorySpec { objects, arrows, identities, compose, outgoing };
        for f in 0..cat.arrows.len() {
            for &g in &cat.outgoing[cat.arrows[f].target] {
                let Some(&gf) = cat.compose.get(&(f, g)) else {
                    return bad(format!("missing composite of `{}` then `{}`", cat.arrows[f].name, cat.arrows[g].name));
                };
                if gf >= cat.arrows.len()
                    || cat.arrows[gf].source != cat.arrows[f].source
                    || cat.arrows[gf].target != cat.arrows[g].target
                {
                    return bad(format!("composite of `{}` then `{}` has wrong endpoints", cat.arrows[f].name, cat.arrows[g].name));
                }
            }
            let a = &cat.arrows[f];
            if cat.then(cat.identities[a.source], f) != f || cat.then(f, cat.identities[a.target]) != f {
                return bad(format!("unit law fails at `{}`", a.name));
            }
        }
        for f in 0..cat.arrows.len() {
            for &g in &cat.outgoing[cat.arrows[f].target] {
                for &h in &cat.outgoing[cat.arrows[g].target] {
                    if cat.then(cat.then(f, g), h) != cat.then(f, cat.then(g, h)) {
                        return bad(format!(
                            "associativity fails at ({}, {}, {})",
                            cat.arrows[f].name, cat.arrows[g].name, cat.arrows[h].name
                        ));
                    }
                }
            }
        }
        Ok(cat)
    }

    /// A poset as a category: one arrow `x<=y` for each comparable pair.
    pub fn from_poset(names: &[String], poset: &Poset) -> Result<Self> {
        let n = poset.len();
        if names.len() != n {
            return Err(Error::Malformed("one name per poset element required".into()));
        }
        let mut arrows = Vec::new();
        let mut idx = HashMap::new();
        for x in 0..n {
            for y in 0..n {
                if poset.leq(x, y) {
                    idx.insert((x, y), arrows.len());
                    arrows.push(Arrow { name: format!("{}<={}", names[x], names[y]), source: x, target: y });
                }
            }
        }
        let identities = (0..n).map(|x| idx[&(x, x)]).collect();
        let mut compose = HashMap::new();
        for (&(x, y), &f) in &idx {
            for z in 0..n {
                if let Some(&g) = idx.get(&(y, z)) {
                    compose.insert((f, g), idx[&(x, z)]);
                }
            }
        }
        Self::new(names.to_vec(), arrows, identities, compose)
    }

    /// `0 < 1 < ... < k-1` as a category.
    pub fn chain_poset(k: usize) -> Self {
        let names: Vec<String> = (0..k).map(|i| i.to_string()).collect();
        Self::from_poset(&names, &Poset::chain(k.saturating_sub(1))).expect("chain")
    }

    /// Divisors of `n` under divisibility.
    pub fn divisor_lattice(n: u64) -> Self {
        let (ds, p) = Poset::divisors(n);
        let names: Vec<String> = ds.iter().map(|d| d.to_string()).collect();
        Self::from_poset(&names, &p).expect("divisor lattice")
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn identity(&self, x: usize) -> usize {
        self.identities[x]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.identities[self.arrows[f].source] == f
    }

    /// `g ∘ f`; panics when not composable.
    pub fn then(&self, f: usize, g: usize) -> usize {
        self.compose[&(f, g)]
    }

    pub fn outgoing(&self, x: usize) -> &[usize] {
        &self.outgoing[x]
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }
}

/// Composable strings of arrows, indexed per level. Level 0 holds objects.
pub(crate) struct NerveStrings {
    pub strings: Vec<Vec<Vec<usize>>>,
    pub index: Vec<HashMap<Vec<usize>, usize>>,
}

pub(crate) fn nerve_strings(c: &FiniteCategorySpec, n: usize, budget: &mut Budget) -> Result<NerveStrings> {
    let mut strings: Vec<Vec<Vec<usize>>> = vec![(0..c.objects.len()).map(|x| vec![x]).collect()];
    if n >= 1 {
        strings.push((0..c.arrows.len()).map(|f| vec![f]).collect());
    }
    for _ in 2..=n {
        let prev = strings.last().unwrap();
        let mut next = Vec::new();
        for s in prev {
            let last = *s.last().unwrap();
            for &g in c.outgoing(c.arrows[last].target) {
                let mut t = s.clone();
                t.push(g);
                next.push(t);
            }
        }
        budget.spend(next.len())?;
        strings.push(next);
    }
    let index = strings
        .iter()
        .map(|l| l.iter().enumerate().map(|(k, s)| (s.clone(), k)).collect())
        .collect();
    Ok(NerveStrings { strings, index })
}

/// The nerve truncated at level `n`.
pub fn nerve_of_category(c: &FiniteCategorySpec, n: usize) -> Result<TruncatedSimplicialSet> {
    let mut budget = Budget::from_env();
    let ns = nerve_strings(c, n, &mut budget)?;
    nerve_from_strings(c, &ns)
}

pub(crate) fn nerve_from_strings(c: &FiniteCategorySpec, ns: &NerveStrings) -> Result<TruncatedSimplicialSet> {
    let top = ns.strings.len() - 1;
    let levels: Vec<Vec<String>> = ns
        .strings
        .iter()
        .enumerate()
        .map(|(n, l)| {
            l.iter()
                .map(|s| {
                    if n == 0 {
                        c.objects[s[0]].clone()
                    } else {
                        s.iter().map(|&f| c.arrows[f].name.as_str()).collect::<Vec<_>>().join("|")
                    }
                })
                .collect()
        })
        .collect();
    let mut faces = vec![Vec::new()];
    for n in 1..=top {
        let maps = (0..=n)
            .map(|i| ns.strings[n].iter().map(|s| ns.index[n - 1][&nerve_face(c, s, n, i)]).collect())
            .collect();
        faces.push(maps);
    }
    let degs = (0..top)
        .map(|n| {
            (0..=n)
                .map(|i| ns.strings[n].iter().map(|s| ns.index[n + 1][&nerve_degeneracy(c, s, n, i)]).collect())
                .collect()
        })
        .collect();
    TruncatedSimplicialSet::new(levels, faces, degs)
}

/// The chain `0 < 1 < ... < k` with vertices added as the product, defined
/// while the sum stays within the chain. Simplices are weakly increasing
/// vertex sequences and multiply pointwise. This structure is not CULF: a
/// product edge has more than one factorisation into products of 2-simplices.
pub fn additive_chain(k: usize, n: usize) -> Result<WeightedClassData> {
    let c = FiniteCategorySpec::chain_poset(k + 1);
    let mut budget = Budget::from_env();
    let ns = nerve_strings(&c, n, &mut budget)?;
    let set = nerve_from_strings(&c, &ns)?;
    let vertices = |lvl: usize, s: &[usize]| -> Vec<usize> {
        if lvl == 0 {
            return vec![s[0]];
        }
        let mut v = vec![c.arrows()[s[0]].source];
        v.extend(s.iter().map(|&f| c.arrows()[f].target));
        v
    };
    let mut products = Vec::with_capacity(n + 1);
    for lvl in 0..=n {
        let seqs: Vec<Vec<usize>> = ns.strings[lvl].iter().map(|s| vertices(lvl, s)).collect();
        let index: HashMap<&Vec<usize>, usize> = seqs.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let mut table = BTreeMap::new();
        for (a, va) in seqs.iter().enumerate() {
            for (b, vb) in seqs.iter().enumerate() {
                let sum: Vec<usize> = va.iter().zip(vb).map(|(x, y)| x + y).collect();
                if let Some(&p) = index.get(&sum) {
                    table.insert((a, b), p);
                }
            }
        }
        products.push(table);
    }
    WeightedClassData::from_set(set, Some(MonoidalStructure { unit: 0, products, free: None }))
}

/// `d_i` on a string of `n` arrows (or an object when `n = 0`).
pub(crate) fn nerve_face(c: &FiniteCategorySpec, s: &[usize], n: usize, i: usize) -> Vec<usize> {
    if n == 1 {
        let a = &c.arrows[s[0]];
        return vec![if i == 0 { a.target } else { a.source }];
    }
    let mut t = s.to_vec();
    if i == 0 {
        t.remove(0);
    } else if i == n {
        t.pop();
    } else {
        let composite = c.then(t[i - 1], t[i]);
        t.splice(i - 1..=i, [composite]);
    }
    t
}

/// `s_i`: insert the identity at vertex `i`.
pub(crate) fn nerve_degeneracy(c: &FiniteCategorySpec, s: &[usize], n: usize, i: usize) -> Vec<usize> {
    if n == 0 {
        return vec![c.identity(s[0])];
    }
    let vertex = if i == 0 { c.arrows[s[0]].source } else { c.arrows[s[i - 1]].target };
    let mut t = s.to_vec();
    t.insert(i, c.identity(vertex));
    t
}
