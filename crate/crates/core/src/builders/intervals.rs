//! Hereditary families of bounded poset intervals as weighted class data.
//!
//! A level-n class is an interval together with a multichain from its bottom
//! to its top, up to automorphisms of the interval. The automorphism order of
//! the class is the order of the stabiliser of the chain.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::simplicial::{MonoidalStructure, TruncatedSimplicialSet, WeightedClassData};

use super::{Budget, Poset};

/// Generator posets and the bound on the length of intervals kept in the family.
#[derive(Clone, Debug)]
pub struct IntervalFamilySpec {
    pub generators: Vec<Poset>,
    pub degree_bound: usize,
}

impl IntervalFamilySpec {
    /// The family generated by the two-element chain: Boolean lattices.
    pub fn boolean(bound: usize) -> Self {
        IntervalFamilySpec { generators: vec![Poset::chain(1)], degree_bound: bound }
    }
}

/// Output of [`interval_family_space`].
#[derive(Clone, Debug)]
pub struct IntervalFamily {
    pub data: WeightedClassData,
    /// Name of each interval type, in level-1 order.
    pub names: Vec<String>,
    /// Canonical form of each interval type.
    pub forms: Vec<Poset>,
    /// Products left out because their length exceeds the bound.
    pub dropped: Vec<(String, String)>,
}

type Chain = Vec<u16>;

struct Member {
    form: Poset,
    automorphisms: Vec<Vec<usize>>,
    length: usize,
}

#[derive(Default)]
struct Family {
    members: Vec<Member>,
    index: HashMap<Poset, usize>,
    /// Exact input poset to (member, labelling into the member's form).
    memo: HashMap<Poset, (usize, Vec<usize>)>,
}

impl Family {
    fn classify(&mut self, p: &Poset) -> (usize, Vec<usize>) {
        if let Some(hit) = self.memo.get(p) {
            return hit.clone();
        }
        let c = p.canonical();
        let idx = match self.index.get(&c.form) {
            Some(&i) => i,
            None => {
                let i = self.members.len();
                self.index.insert(c.form.clone(), i);
                self.members.push(Member { length: c.form.length(), form: c.form, automorphisms: c.automorphisms });
                i
            }
        };
        self.memo.insert(p.clone(), (idx, c.labelling.clone()));
        (idx, c.labelling)
    }

    fn is_point(&self, i: usize) -> bool {
        self.members[i].form.len() == 1
    }
}

/// Builds the family with levels `0..=bound+1` and products on levels `0..=2`.
pub fn interval_family_space(spec: &IntervalFamilySpec) -> Result<IntervalFamily> {
    interval_family_space_with(spec, spec.degree_bound + 1, 3)
}

/// As [`interval_family_space`] with explicit truncation and number of
/// product levels.
pub fn interval_family_space_with(
    spec: &IntervalFamilySpec,
    levels: usize,
    product_levels: usize,
) -> Result<IntervalFamily> {
    if levels == 0 {
        return Err(Error::Malformed("interval families need at least one level".into()));
    }
    let bound = spec.degree_bound;
    for (k, g) in spec.generators.iter().enumerate() {
        if !g.is_bounded() {
            return Err(Error::Malformed(format!("generator {k} has no least or greatest element")));
        }
        if g.length() > bound {
            return Err(Error::Malformed(format!("generator {k} has length {} beyond the bound {bound}", g.length())));
        }
    }
    let mut budget = Budget::from_env();
    let mut fam = Family::default();
    fam.classify(&Poset::chain(0));
    for g in &spec.generators {
        fam.classify(g);
    }
    let mut dropped_pairs = BTreeSet::new();
    let mut done_pairs = BTreeSet::new();
    let mut scanned = 0;
    loop {
        while scanned < fam.members.len() {
            let form = fam.members[scanned].form.clone();
            for x in 0..form.len() {
                for y in 0..form.len() {
                    if form.leq(x, y) {
                        fam.classify(&form.subinterval(x, y).0);
                    }
                }
            }
            scanned += 1;
        }
        let before = fam.members.len();
        for i in 0..before {
            for j in 0..before {
                if fam.is_point(i) || fam.is_point(j) || !done_pairs.insert((i, j)) {
                    continue;
                }
                if fam.members[i].length + fam.members[j].length > bound {
                    dropped_pairs.insert((i, j));
                } else {
                    let p = fam.members[i].form.product(&fam.members[j].form);
                    budget.spend(p.len())?;
                    fam.classify(&p);
                }
            }
        }
        if fam.members.len() == before && scanned == before {
            break;
        }
    }

    // Deterministic order: by length, then size, then canonical form.
    let mut order: Vec<usize> = (0..fam.members.len()).collect();
    order.sort_by(|&a, &b| {
        let (ma, mb) = (&fam.members[a], &fam.members[b]);
        (ma.length, ma.form.len(), &ma.form).cmp(&(mb.length, mb.form.len(), &mb.form))
    });
    let mut rank = vec![0; order.len()];
    for (new, &old) in order.iter().enumerate() {
        rank[old] = new;
    }
    let mut old_members: Vec<Option<Member>> = fam.members.drain(..).map(Some).collect();
    fam.members = order.iter().map(|&o| old_members[o].take().unwrap()).collect();
    fam.index = fam.members.iter().enumerate().map(|(i, m)| (m.form.clone(), i)).collect();
    for v in fam.memo.values_mut() {
        v.0 = rank[v.0];
    }
    let names = name_members(&fam.members);
    let dropped = dropped_pairs.iter().map(|&(i, j)| (names[rank[i]].clone(), names[rank[j]].clone())).collect();

    let builder = LevelBuilder::new(&mut fam, levels, &mut budget)?;
    let data = builder.assemble(&names, product_levels.min(levels + 1), bound)?;
    let forms = fam.members.iter().map(|m| m.form.clone()).collect();
    Ok(IntervalFamily { data, names, forms, dropped })
}

fn name_members(members: &[Member]) -> Vec<String> {
    let mut other = 0;
    members
        .iter()
        .map(|m| {
            let k = m.length;
            if m.form.len() == 1 << k && m.form == Poset::boolean(k).canonical().form {
                format!("B_{k}")
            } else if m.form.is_chain() {
                format!("C_{k}")
            } else {
                other += 1;
                format!("P{other}")
            }
        })
        .collect()
}

struct LevelBuilder<'a> {
    fam: &'a mut Family,
    /// Per level: (member, representative chain) of each class.
    classes: Vec<Vec<(usize, Chain)>>,
    aut: Vec<Vec<u64>>,
    /// Per level: every multichain to its class.
    lookup: Vec<HashMap<(usize, Chain), usize>>,
    subs: HashMap<(usize, u16, u16), (usize, Vec<u16>)>,
}

impl<'a> LevelBuilder<'a> {
    fn new(fam: &'a mut Family, levels: usize, budget: &mut Budget) -> Result<Self> {
        let point = fam.index[&Poset::chain(0).canonical().form];
        let mut classes = vec![vec![(point, vec![0])]];
        let mut aut = vec![vec![1]];
        let mut lookup = vec![HashMap::from([((point, vec![0]), 0)])];
        for n in 1..=levels {
            let mut cls = Vec::new();
            let mut au = Vec::new();
            let mut look = HashMap::new();
            for (i, m) in fam.members.iter().enumerate() {
                let chains = multichains(&m.form, n);
                budget.spend(chains.len())?;
                for c in chains {
                    if look.contains_key(&(i, c.clone())) {
                        continue;
                    }
                    let orbit: BTreeSet<Chain> =
                        m.automorphisms.iter().map(|q| c.iter().map(|&v| q[v as usize] as u16).collect()).collect();
                    let k = cls.len();
                    au.push((m.automorphisms.len() / orbit.len()) as u64);
                    for o in orbit {
                        look.insert((i, o), k);
                    }
                    cls.push((i, c));
                }
            }
            classes.push(cls);
            aut.push(au);
            lookup.push(look);
        }
        Ok(LevelBuilder { fam, classes, aut, lookup, subs: HashMap::new() })
    }

    fn sub(&mut self, member: usize, x: u16, y: u16) -> (usize, Vec<u16>) {
        if let Some(hit) = self.subs.get(&(member, x, y)) {
            return hit.clone();
        }
        let (p, elems) = self.fam.members[member].form.subinterval(x as usize, y as usize);
        let (j, labelling) = self.fam.classify(&p);
        let mut map = vec![u16::MAX; self.fam.members[member].form.len()];
        for (v, &e) in elems.iter().enumerate() {
            map[e] = labelling[v] as u16;
        }
        self.subs.insert((member, x, y), (j, map.clone()));
        (j, map)
    }

    fn outer_face(&mut self, n: usize, member: usize, chain: &[u16]) -> usize {
        let (j, map) = self.sub(member, chain[0], chain[chain.len() - 1]);
        let image: Chain = chain.iter().map(|&v| map[v as usize]).collect();
        self.lookup[n][&(j, image)]
    }

    fn assemble(mut self, names: &[String], product_levels: usize, bound: usize) -> Result<WeightedClassData> {
        let top = self.classes.len() - 1;
        let ids: Vec<Vec<String>> = self
            .classes
            .iter()
            .enumerate()
            .map(|(n, cls)| {
                cls.iter()
                    .map(|(m, c)| match n {
                        0 => "pt".to_string(),
                        1 => names[*m].clone(),
                        _ => {
                            let inner: Vec<String> = c[1..n].iter().map(ToString::to_string).collect();
                            format!("{}[{}]", names[*m], inner.join(","))
                        }
                    })
                    .collect()
            })
            .collect();
        let mut faces = vec![Vec::new()];
        for n in 1..=top {
            let mut maps = vec![Vec::with_capacity(self.classes[n].len()); n + 1];
            for k in 0..self.classes[n].len() {
                let (m, c) = self.classes[n][k].clone();
                for (i, map) in maps.iter_mut().enumerate() {
                    let f = if n == 1 {
                        0
                    } else if i == 0 {
                        self.outer_face(n - 1, m, &c[1..])
                    } else if i == n {
                        self.outer_face(n - 1, m, &c[..n])
                    } else {
                        let mut d = c.clone();
                        d.remove(i);
                        self.lookup[n - 1][&(m, d)]
                    };
                    map.push(f);
                }
            }
            faces.push(maps);
        }
        let mut degs = Vec::new();
        for n in 0..top {
            let maps = (0..=n)
                .map(|i| {
                    self.classes[n]
                        .iter()
                        .map(|(m, c)| {
                            let mut d = c.clone();
                            if n == 0 {
                                d.push(c[0]);
                            } else {
                                d.insert(i, c[i]);
                            }
                            self.lookup[n + 1][&(*m, d)]
                        })
                        .collect()
                })
                .collect();
            degs.push(maps);
        }
        let set = TruncatedSimplicialSet::new(ids, faces, degs)?;
        let products = self.products(product_levels, bound);
        let monoidal = MonoidalStructure { unit: 0, products, free: None };
        WeightedClassData::new(set, self.aut, Some(monoidal))
    }

    fn products(&mut self, product_levels: usize, bound: usize) -> Vec<std::collections::BTreeMap<(usize, usize), usize>> {
        let mut pairs: HashMap<(usize, usize), Option<(usize, usize, Vec<u16>)>> = HashMap::new();
        let mut out = Vec::new();
        for n in 0..product_levels {
            let mut table = std::collections::BTreeMap::new();
            let count = self.classes[n].len();
            for a in 0..count {
                for b in 0..count {
                    let (i, ca) = &self.classes[n][a];
                    let (j, cb) = &self.classes[n][b];
                    if self.fam.is_point(*i) {
                        table.insert((a, b), b);
                        continue;
                    }
                    if self.fam.is_point(*j) {
                        table.insert((a, b), a);
                        continue;
                    }
                    let entry = pairs.entry((*i, *j)).or_insert_with(|| {
                        let (mi, mj) = (&self.fam.members[*i], &self.fam.members[*j]);
                        if mi.length + mj.length > bound {
                            return None;
                        }
                        let p = mi.form.product(&mj.form);
                        let width = mj.form.len();
                        let (k, labelling) = self.fam.classify(&p);
                        Some((k, width, labelling.iter().map(|&v| v as u16).collect()))
                    });
                    if let Some((k, width, map)) = entry {
                        let chain: Chain =
                            ca.iter().zip(cb).map(|(&x, &y)| map[x as usize * *width + y as usize]).collect();
                        table.insert((a, b), self.lookup[n][&(*k, chain)]);
                    }
                }
            }
            out.push(table);
        }
        out
    }
}

/// Multichains `bottom = x_0 <= ... <= x_n = top`, in lexicographic order.
fn multichains(p: &Poset, n: usize) -> Vec<Chain> {
    let (bottom, top) = (p.bottom().expect("bounded"), p.top().expect("bounded"));
    let above: Vec<Vec<usize>> = (0..p.len()).map(|x| (0..p.len()).filter(|&y| p.leq(x, y)).collect()).collect();
    let mut out = Vec::new();
    let mut chain = vec![bottom as u16];
    extend(p, &above, n, top, &mut chain, &mut out);
    out
}

fn extend(p: &Poset, above: &[Vec<usize>], n: usize, top: usize, chain: &mut Chain, out: &mut Vec<Chain>) {
    let last = *chain.last().unwrap() as usize;
    if chain.len() == n + 1 {
        if last == top {
            out.push(chain.clone());
        }
        return;
    }
    for &y in &above[last] {
        if p.leq(y, top) {
            chain.push(y as u16);
            extend(p, above, n, top, chain, out);
            chain.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::{check_culf_monoidal, check_decomposition, validate_monoidal, validate_structure};

    fn factorial(n: u64) -> u64 {
        (1..=n).product()
    }

    #[test]
    fn boolean_aut_orders() {
        let f = interval_family_space(&IntervalFamilySpec::boolean(3)).unwrap();
        assert_eq!(f.names, vec!["B_0", "B_1", "B_2", "B_3"]);
        let x = f.data.set();
        for k in 0..4 {
            let c = x.lookup(1, &format!("B_{k}")).unwrap();
            assert_eq!(f.data.aut(1, c), factorial(k as u64));
        }
    }

    #[test]
    fn atom_chain_in_square_has_trivial_stabiliser() {
        let f = interval_family_space(&IntervalFamilySpec::boolean(3)).unwrap();
        let x = f.data.set();
        let b2 = x.lookup(1, "B_2").unwrap();
        let strict: Vec<usize> = (0..x.len(2))
            .filter(|&k| x.long_edge(2, k) == b2 && x.nondegenerate_table()[2][k])
            .collect();
        assert_eq!(strict.len(), 1);
        assert_eq!(f.data.aut(2, strict[0]), 1);
    }

    #[test]
    fn point_generator_gives_terminal_data() {
        let spec = IntervalFamilySpec { generators: vec![Poset::chain(0)], degree_bound: 2 };
        let f = interval_family_space(&spec).unwrap();
        assert!((0..=3).all(|n| f.data.set().len(n) == 1));
        assert!(f.data.is_set_level());
    }

    #[test]
    fn dropped_products_are_reported() {
        let f = interval_family_space(&IntervalFamilySpec::boolean(2)).unwrap();
        assert!(f.dropped.contains(&("B_1".to_string(), "B_2".to_string())));
        assert!(!f.dropped.contains(&("B_1".to_string(), "B_1".to_string())));
    }

    #[test]
    fn chains_generate_products_of_chains() {
        let spec = IntervalFamilySpec { generators: vec![Poset::chain(2)], degree_bound: 3 };
        let f = interval_family_space(&spec).unwrap();
        // Subintervals of C_2 are B_0, B_1 = C_1, C_2; products within length 3.
        assert!(f.names.contains(&"C_2".to_string()));
        assert!(f.names.contains(&"B_2".to_string()));
        assert!(!f.names.contains(&"C_3".to_string()));
        assert!(f.names.iter().any(|n| n.starts_with('P')));
    }

    #[test]
    fn structural_checks_pass() {
        let f = interval_family_space(&IntervalFamilySpec::boolean(3)).unwrap();
        assert!(validate_structure(f.data.set()).passed());
        assert!(validate_monoidal(&f.data).passed);
        assert!(check_decomposition(&f.data, 3).unwrap().passed);
        assert!(check_culf_monoidal(&f.data, 2).unwrap().passed);
    }
}
