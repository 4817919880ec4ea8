//! Truncated simplicial sets, their weighted (groupoid-cardinality) refinement,
//! partial monoidal structures, and the structural checks run on them.

mod checks;
mod json;
mod weighted;

pub use checks::{
    check_culf_monoidal, check_decomposition, check_finiteness, nondegenerate_simplices,
    principal_data, validate_document, validate_monoidal, validate_structure, CheckResult, FinitenessReport,
    PathSpace, ValidationReport, Violation,
};
pub use json::{ClassEntry, SimplicialSetDocument, WeightedClassDocument};
pub use weighted::WeightedClassData;

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Levels `0..=N` of simplex identifiers with face and degeneracy maps.
///
/// `faces[n][i]` is `d_i : X_n -> X_{n-1}` (empty for `n = 0`), and
/// `degeneracies[n][i]` is `s_i : X_n -> X_{n+1}` (absent at the top level).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSimplicialSet {
    levels: Vec<Vec<String>>,
    faces: Vec<Vec<Vec<usize>>>,
    degeneracies: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<String, usize>>,
}

impl TruncatedSimplicialSet {
    /// Checks shapes and ranges only; simplicial identities are checked by
    /// [`validate_structure`].
    pub fn new(
        levels: Vec<Vec<String>>,
        faces: Vec<Vec<Vec<usize>>>,
        degeneracies: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        let problems = shape_problems(&levels, &faces, &degeneracies);
        if !problems.is_empty() {
            return Err(Error::Malformed(problems.join("; ")));
        }
        let index = levels
            .iter()
            .map(|ids| ids.iter().enumerate().map(|(k, id)| (id.clone(), k)).collect())
            .collect();
        Ok(TruncatedSimplicialSet { levels, faces, degeneracies, index })
    }

    pub fn truncation(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, n: usize) -> &[String] {
        &self.levels[n]
    }

    pub fn levels(&self) -> &[Vec<String>] {
        &self.levels
    }

    pub fn len(&self, n: usize) -> usize {
        self.levels[n].len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.iter().all(Vec::is_empty)
    }

    pub fn id(&self, n: usize, k: usize) -> &str {
        &self.levels[n][k]
    }

    pub fn lookup(&self, n: usize, id: &str) -> Option<usize> {
        self.index.get(n)?.get(id).copied()
    }

    pub fn face(&self, n: usize, i: usize, k: usize) -> usize {
        self.faces[n][i][k]
    }

    pub fn degeneracy(&self, n: usize, i: usize, k: usize) -> usize {
        self.degeneracies[n][i][k]
    }

    pub fn face_map(&self, n: usize, i: usize) -> &[usize] {
        &self.faces[n][i]
    }

    pub fn degeneracy_map(&self, n: usize, i: usize) -> &[usize] {
        &self.degeneracies[n][i]
    }

    /// The long edge `g`: `s_0` on vertices, identity on edges, and the inner
    /// faces collapsed down to the 0-to-n edge above that.
    pub fn long_edge(&self, n: usize, k: usize) -> usize {
        if n == 0 {
            return self.degeneracy(0, 0, k);
        }
        let mut cur = k;
        for m in (2..=n).rev() {
            cur = self.face(m, 1, cur);
        }
        cur
    }

    /// Principal edge `j` (1-based) of an n-simplex: the edge from vertex j-1 to j.
    pub fn principal_edge(&self, n: usize, k: usize, j: usize) -> usize {
        debug_assert!(1 <= j && j <= n);
        let mut cur = k;
        let mut m = n;
        for _ in 0..(n - j) {
            cur = self.face(m, m, cur);
            m -= 1;
        }
        for _ in 0..(j - 1) {
            cur = self.face(m, 0, cur);
            m -= 1;
        }
        debug_assert_eq!(m, 1);
        cur
    }

    pub fn principal_edges(&self, n: usize, k: usize) -> Vec<usize> {
        (1..=n).map(|j| self.principal_edge(n, k, j)).collect()
    }

    /// `s_0^n` applied to a vertex.
    pub fn iterated_degeneracy(&self, vertex: usize, n: usize) -> usize {
        let mut cur = vertex;
        for m in 0..n {
            cur = self.degeneracy(m, 0, cur);
        }
        cur
    }

    /// Per level, whether each simplex avoids the image of every degeneracy.
    pub fn nondegenerate_table(&self) -> Vec<Vec<bool>> {
        let mut table: Vec<Vec<bool>> = self.levels.iter().map(|l| vec![true; l.len()]).collect();
        for n in 0..self.truncation() {
            for map in &self.degeneracies[n] {
                for &t in map {
                    table[n + 1][t] = false;
                }
            }
        }
        table
    }
}

fn shape_problems(
    levels: &[Vec<String>],
    faces: &[Vec<Vec<usize>>],
    degeneracies: &[Vec<Vec<usize>>],
) -> Vec<String> {
    let mut out = Vec::new();
    if levels.is_empty() {
        out.push("no levels".to_string());
        return out;
    }
    let top = levels.len() - 1;
    for (n, ids) in levels.iter().enumerate() {
        let mut seen = HashMap::new();
        for id in ids {
            if seen.insert(id, ()).is_some() {
                out.push(format!("duplicate id `{id}` at level {n}"));
            }
        }
    }
    if faces.len() != levels.len() {
        out.push(format!("expected face maps for {} levels, got {}", levels.len(), faces.len()));
    }
    if degeneracies.len() != top {
        out.push(format!("expected degeneracy maps for {top} levels, got {}", degeneracies.len()));
    }
    for (n, maps) in faces.iter().enumerate().take(levels.len()) {
        let expected = if n == 0 { 0 } else { n + 1 };
        if maps.len() != expected {
            out.push(format!("level {n}: expected {expected} face maps, got {}", maps.len()));
            continue;
        }
        for (i, map) in maps.iter().enumerate() {
            check_map(&mut out, "d", n, i, map, levels[n].len(), levels[n - 1].len());
        }
    }
    for (n, maps) in degeneracies.iter().enumerate().take(top) {
        if maps.len() != n + 1 {
            out.push(format!("level {n}: expected {} degeneracy maps, got {}", n + 1, maps.len()));
            continue;
        }
        for (i, map) in maps.iter().enumerate() {
            check_map(&mut out, "s", n, i, map, levels[n].len(), levels[n + 1].len());
        }
    }
    out
}

fn check_map(out: &mut Vec<String>, kind: &str, n: usize, i: usize, map: &[usize], dom: usize, cod: usize) {
    if map.len() != dom {
        out.push(format!("{kind}_{i} on level {n}: length {} but level has {dom} simplices", map.len()));
    }
    if let Some((k, v)) = map.iter().enumerate().find(|(_, &v)| v >= cod) {
        out.push(format!("{kind}_{i} on level {n}: simplex {k} maps to {v}, out of range (< {cod})"));
    }
}

/// Rule for multiplying canonical level-1 labels that lie outside the finite
/// product table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FreeProductRule {
    /// Compositions `(c_1,...,c_n)` concatenate.
    OrdinalSum,
    /// Fibre-size multisets `{a,b,...}` take multiset union.
    FibreUnion,
}

impl FreeProductRule {
    pub fn product(&self, a: &str, b: &str) -> Option<String> {
        match self {
            FreeProductRule::OrdinalSum => {
                let mut parts = parse_list(a, '(', ')')?;
                parts.extend(parse_list(b, '(', ')')?);
                Some(composition_label(&parts))
            }
            FreeProductRule::FibreUnion => {
                let mut parts = parse_list(a, '{', '}')?;
                parts.extend(parse_list(b, '{', '}')?);
                Some(fibre_label(parts))
            }
        }
    }

    /// Identities: every part equal to one.
    pub fn is_degenerate(&self, label: &str) -> Option<bool> {
        let parts = match self {
            FreeProductRule::OrdinalSum => parse_list(label, '(', ')')?,
            FreeProductRule::FibreUnion => parse_list(label, '{', '}')?,
        };
        Some(parts.iter().all(|&p| p == 1))
    }

    /// Automorphism order of a free label: one for compositions, and for a
    /// fibre multiset the product of fibre factorials times the factorials of
    /// the multiplicities.
    pub fn aut(&self, label: &str) -> Option<u64> {
        match self {
            FreeProductRule::OrdinalSum => parse_list(label, '(', ')').map(|_| 1),
            FreeProductRule::FibreUnion => {
                let parts = parse_list(label, '{', '}')?;
                let fact = |n: usize| (1..=n as u64).product::<u64>();
                let mut aut: u64 = parts.iter().map(|&p| fact(p)).product();
                let mut k = 0;
                while k < parts.len() {
                    let j = k + parts[k..].iter().take_while(|&&p| p == parts[k]).count();
                    aut *= fact(j - k);
                    k = j;
                }
                Some(aut)
            }
        }
    }

    /// The label with every part equal to one removed: the representative of
    /// its class once identities are identified with the unit.
    pub fn reduce(&self, label: &str) -> Option<String> {
        match self {
            FreeProductRule::OrdinalSum => {
                let parts: Vec<usize> = parse_list(label, '(', ')')?.into_iter().filter(|&p| p != 1).collect();
                Some(composition_label(&parts))
            }
            FreeProductRule::FibreUnion => {
                Some(fibre_label(parse_list(label, '{', '}')?.into_iter().filter(|&p| p != 1).collect()))
            }
        }
    }

    pub fn unit_label(&self) -> &'static str {
        match self {
            FreeProductRule::OrdinalSum => "()",
            FreeProductRule::FibreUnion => "{}",
        }
    }
}

/// Parses `(1,2)` or `{1,2}` style labels into their parts.
pub fn parse_list(label: &str, open: char, close: char) -> Option<Vec<usize>> {
    let inner = label.strip_prefix(open)?.strip_suffix(close)?;
    if inner.is_empty() {
        return Some(Vec::new());
    }
    inner.split(',').map(|p| p.trim().parse().ok()).collect()
}

/// Canonical printed form of a composition.
pub fn composition_label(parts: &[usize]) -> String {
    let body: Vec<String> = parts.iter().map(ToString::to_string).collect();
    format!("({})", body.join(","))
}

/// Canonical printed form of a fibre-size multiset (sorted ascending).
pub fn fibre_label(mut parts: Vec<usize>) -> String {
    parts.sort_unstable();
    let body: Vec<String> = parts.iter().map(ToString::to_string).collect();
    format!("{{{}}}", body.join(","))
}

/// Unit vertex and levelwise partial products.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidalStructure {
    pub unit: usize,
    /// `products[n]` maps a pair of n-simplices to their product.
    pub products: Vec<BTreeMap<(usize, usize), usize>>,
    pub free: Option<FreeProductRule>,
}

impl MonoidalStructure {
    pub fn product(&self, n: usize, a: usize, b: usize) -> Option<usize> {
        self.products.get(n)?.get(&(a, b)).copied()
    }

    /// Number of levels carrying a product table.
    pub fn levels(&self) -> usize {
        self.products.len()
    }
}
