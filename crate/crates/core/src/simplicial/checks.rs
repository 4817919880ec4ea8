//! Structural checks: simplicial identities, nondegenerate simplices, the
//! decomposition-space axiom, CULF monoidal structure and finiteness.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

use super::{SimplicialSetDocument, TruncatedSimplicialSet, WeightedClassData};

const MAX_WITNESSES: usize = 64;

/// One failed simplicial identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub identity: String,
    pub level: usize,
    pub indices: (usize, usize),
    pub simplex: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub malformed: Vec<String>,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.malformed.is_empty() && self.violations.is_empty()
    }
}

/// Outcome of a structural check, with witnesses for every failure found.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub checked: usize,
    pub witnesses: Vec<String>,
}

impl CheckResult {
    pub fn new(name: impl Into<String>) -> Self {
        CheckResult { name: name.into(), passed: true, checked: 0, witnesses: Vec::new() }
    }

    pub fn fail(&mut self, witness: String) {
        self.passed = false;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(witness);
        }
    }

    pub fn absorb(&mut self, other: CheckResult) {
        self.checked += other.checked;
        if !other.passed {
            self.passed = false;
            for w in other.witnesses {
                if self.witnesses.len() < MAX_WITNESSES {
                    self.witnesses.push(format!("{}: {w}", other.name));
                }
            }
        }
    }
}

/// Checks every simplicial identity within the truncation and injectivity of
/// all degeneracies.
pub fn validate_structure(x: &TruncatedSimplicialSet) -> ValidationReport {
    let mut report = ValidationReport::default();
    let top = x.truncation();
    let mut push = |identity: &str, level: usize, i: usize, j: usize, k: usize| {
        report.violations.push(Violation {
            identity: identity.to_string(),
            level,
            indices: (i, j),
            simplex: x.id(level, k).to_string(),
        });
    };
    for n in 2..=top {
        for j in 1..=n {
            for i in 0..j {
                for k in 0..x.len(n) {
                    let lhs = x.face(n - 1, i, x.face(n, j, k));
                    let rhs = x.face(n - 1, j - 1, x.face(n, i, k));
                    if lhs != rhs {
                        push("d_i d_j = d_{j-1} d_i", n, i, j, k);
                    }
                }
            }
        }
    }
    for n in 0..top {
        for j in 0..=n {
            for i in 0..=n + 1 {
                for k in 0..x.len(n) {
                    let lhs = x.face(n + 1, i, x.degeneracy(n, j, k));
                    let (rhs, name) = if i < j {
                        (x.degeneracy(n - 1, j - 1, x.face(n, i, k)), "d_i s_j = s_{j-1} d_i")
                    } else if i == j || i == j + 1 {
                        (k, "d_i s_j = id")
                    } else {
                        (x.degeneracy(n - 1, j, x.face(n, i - 1, k)), "d_i s_j = s_j d_{i-1}")
                    };
                    if lhs != rhs {
                        push(name, n, i, j, k);
                    }
                }
            }
        }
    }
    for n in 0..top.saturating_sub(1) {
        for j in 0..=n {
            for i in 0..=j {
                for k in 0..x.len(n) {
                    let lhs = x.degeneracy(n + 1, i, x.degeneracy(n, j, k));
                    let rhs = x.degeneracy(n + 1, j + 1, x.degeneracy(n, i, k));
                    if lhs != rhs {
                        push("s_i s_j = s_{j+1} s_i", n, i, j, k);
                    }
                }
            }
        }
    }
    for n in 0..top {
        for i in 0..=n {
            let mut seen = HashMap::new();
            for k in 0..x.len(n) {
                if let Some(prev) = seen.insert(x.degeneracy(n, i, k), k) {
                    push("s_i injective", n, i, prev, k);
                }
            }
        }
    }
    report
}

/// Range checks on a raw document followed by [`validate_structure`].
pub fn validate_document(doc: &SimplicialSetDocument) -> ValidationReport {
    match doc.to_space() {
        Ok((set, _)) => validate_structure(&set),
        Err(e) => ValidationReport { malformed: vec![e.to_string()], violations: Vec::new() },
    }
}

/// Product is a simplicial map, unital and associative wherever defined.
pub fn validate_monoidal(data: &WeightedClassData) -> CheckResult {
    let mut res = CheckResult::new("monoidal structure");
    let Some(m) = data.monoidal() else {
        res.fail("no monoidal structure".into());
        return res;
    };
    let x = data.set();
    let levels = m.levels().min(x.levels().len());
    for n in 0..levels {
        let unit_n = x.iterated_degeneracy(m.unit, n);
        for k in 0..x.len(n) {
            res.checked += 1;
            for (lhs, side) in [(m.product(n, unit_n, k), "left"), (m.product(n, k, unit_n), "right")] {
                if lhs != Some(k) {
                    res.fail(format!("{side} unit law fails on `{}` at level {n}", x.id(n, k)));
                }
            }
        }
        for (&(a, b), &c) in &m.products[n] {
            res.checked += 1;
            if n >= 1 && n - 1 < levels {
                for i in 0..=n {
                    match m.product(n - 1, x.face(n, i, a), x.face(n, i, b)) {
                        Some(d) if d == x.face(n, i, c) => {}
                        other => res.fail(format!(
                            "d_{i} does not commute with product on ({}, {}) at level {n}: got {:?}",
                            x.id(n, a),
                            x.id(n, b),
                            other.map(|d| x.id(n - 1, d).to_string())
                        )),
                    }
                }
            }
            if n + 1 < levels {
                for i in 0..=n {
                    match m.product(n + 1, x.degeneracy(n, i, a), x.degeneracy(n, i, b)) {
                        Some(d) if d == x.degeneracy(n, i, c) => {}
                        _ => res.fail(format!(
                            "s_{i} does not commute with product on ({}, {}) at level {n}",
                            x.id(n, a),
                            x.id(n, b)
                        )),
                    }
                }
            }
        }
        if n <= 1 {
            for (&(a, b), &ab) in &m.products[n] {
                for c in 0..x.len(n) {
                    let (Some(bc), Some(l)) = (m.product(n, b, c), m.product(n, ab, c)) else { continue };
                    if m.product(n, a, bc) != Some(l) {
                        res.fail(format!(
                            "associativity fails on ({}, {}, {}) at level {n}",
                            x.id(n, a),
                            x.id(n, b),
                            x.id(n, c)
                        ));
                    }
                }
            }
        }
    }
    res
}

/// The nondegenerate simplices at level `n`. For `n >= 1` the principal-edge
/// criterion is cross-checked and any discrepancy is a completeness failure.
pub fn nondegenerate_simplices(data: &WeightedClassData, n: usize) -> Result<Vec<usize>> {
    let x = data.set();
    if n > x.truncation() {
        return Err(Error::TruncationExceeded { requested: n, truncation: x.truncation() });
    }
    let table = x.nondegenerate_table();
    if n >= 1 {
        for k in 0..x.len(n) {
            let by_edges = x.principal_edges(n, k).iter().all(|&e| table[1][e]);
            if by_edges != table[n][k] {
                return Err(Error::AxiomViolation {
                    axiom: "completeness (nondegenerate iff all principal edges nondegenerate)".into(),
                    witness: format!(
                        "`{}` at level {n} is {} but its principal edges say otherwise",
                        x.id(n, k),
                        if table[n][k] { "nondegenerate" } else { "degenerate" }
                    ),
                });
            }
        }
    }
    Ok((0..x.len(n)).filter(|&k| table[n][k]).collect())
}

/// Long edge and ordered principal edges of an n-simplex, `n >= 1`.
pub fn principal_data(x: &TruncatedSimplicialSet, n: usize, simplex: usize) -> Result<(usize, Vec<usize>)> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    if n > x.truncation() {
        return Err(Error::TruncationExceeded { requested: n, truncation: x.truncation() });
    }
    if simplex >= x.len(n) {
        return Err(Error::Malformed(format!("simplex {simplex} out of range at level {n}")));
    }
    Ok((x.long_edge(n, simplex), x.principal_edges(n, simplex)))
}

/// The two décalages used in the path-space criterion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PathSpace {
    /// Drops `d_0`: `Y_k = X_{k+1}` with faces `d_{i+1}`.
    Lower,
    /// Drops the top face: `Y_k = X_{k+1}` with faces `d_i`.
    Upper,
}

impl PathSpace {
    fn face(self, x: &TruncatedSimplicialSet, k: usize, i: usize, s: usize) -> usize {
        match self {
            PathSpace::Lower => x.face(k + 1, i + 1, s),
            PathSpace::Upper => x.face(k + 1, i, s),
        }
    }

    fn principal_edges(self, x: &TruncatedSimplicialSet, n: usize, s: usize) -> Vec<usize> {
        (1..=n)
            .map(|j| {
                let mut cur = s;
                let mut m = n;
                for _ in 0..(n - j) {
                    cur = self.face(x, m, m, cur);
                    m -= 1;
                }
                for _ in 0..(j - 1) {
                    cur = self.face(x, m, 0, cur);
                    m -= 1;
                }
                cur
            })
            .collect()
    }
}

/// Decomposition-space axiom on the truncation, via the Segal condition for
/// both path spaces. Weighted data is compared by homotopy-fibre cardinality.
pub fn check_decomposition(data: &WeightedClassData, up_to: usize) -> Result<CheckResult> {
    let x = data.set();
    if up_to + 1 > x.truncation() {
        return Err(Error::TruncationExceeded { requested: up_to + 1, truncation: x.truncation() });
    }
    let mut res = CheckResult::new("decomposition (path-space Segal)");
    for side in [PathSpace::Lower, PathSpace::Upper] {
        for n in 2..=up_to {
            segal_level(data, side, n, &mut res);
        }
    }
    Ok(res)
}

fn segal_level(data: &WeightedClassData, side: PathSpace, n: usize, res: &mut CheckResult) {
    let x = data.set();
    // Y_1 = X_2, Y_0 = X_1.
    let src = |e: usize| side.face(x, 1, 1, e);
    let tgt = |e: usize| side.face(x, 1, 0, e);
    let mut actual: BTreeMap<Vec<usize>, (Rational, Vec<usize>)> = BTreeMap::new();
    for s in 0..x.len(n + 1) {
        let tuple = side.principal_edges(x, n, s);
        let entry = actual.entry(tuple).or_insert_with(|| (Rational::zero(), Vec::new()));
        entry.0 += Rational::ratio(1, data.aut(n + 1, s));
        entry.1.push(s);
    }
    let mut by_source: HashMap<usize, Vec<usize>> = HashMap::new();
    for e in 0..x.len(2) {
        by_source.entry(src(e)).or_default().push(e);
    }
    let mut expected: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
    let mut stack: Vec<(Vec<usize>, Rational)> =
        (0..x.len(2)).map(|e| (vec![e], Rational::ratio(1, data.aut(2, e)))).collect();
    while let Some((tuple, w)) = stack.pop() {
        if tuple.len() == n {
            expected.insert(tuple, w);
            continue;
        }
        let joint = tgt(*tuple.last().unwrap());
        for &e in by_source.get(&joint).map(Vec::as_slice).unwrap_or(&[]) {
            let mut t = tuple.clone();
            t.push(e);
            let w2 = &(&w * &Rational::ratio(data.aut(1, joint), 1)) * &Rational::ratio(1, data.aut(2, e));
            stack.push((t, w2));
        }
    }
    let names = |t: &[usize]| t.iter().map(|&e| x.id(2, e).to_string()).collect::<Vec<_>>().join(", ");
    for (tuple, w) in &expected {
        res.checked += 1;
        let (got, pre) = actual.get(tuple).cloned().unwrap_or_else(|| (Rational::zero(), Vec::new()));
        if &got != w {
            let pre: Vec<String> = pre.iter().map(|&s| x.id(n + 1, s).to_string()).collect();
            res.fail(format!(
                "{side:?} path space, n={n}: tuple ({}) has fibre weight {got}, expected {w}; preimages [{}]",
                names(tuple),
                pre.join(", ")
            ));
        }
    }
    for tuple in actual.keys().filter(|t| !expected.contains_key(*t)) {
        res.fail(format!("{side:?} path space, n={n}: principal edges ({}) are not composable", names(tuple)));
    }
}

/// CULF condition for the product and the unit, levels `0..=up_to`.
pub fn check_culf_monoidal(data: &WeightedClassData, up_to: usize) -> Result<CheckResult> {
    let m = data.monoidal().ok_or(Error::MissingMonoidal)?;
    let x = data.set();
    if up_to >= m.levels() || up_to > x.truncation() || m.levels() < 2 {
        return Err(Error::TruncationExceeded { requested: up_to, truncation: m.levels().saturating_sub(1) });
    }
    let mut res = CheckResult::new("CULF monoidal");
    let mut undefined = Vec::new();
    let id_u = x.degeneracy(0, 0, m.unit);
    for n in 0..=up_to {
        let mut fibres: Vec<Vec<usize>> = vec![Vec::new(); x.len(1)];
        for s in 0..x.len(n) {
            fibres[x.long_edge(n, s)].push(s);
        }
        let weight = |k: usize, s: usize| Rational::ratio(data.aut(1, k), data.aut(n, s));
        for (&(a, b), &c) in &m.products[1] {
            res.checked += 1;
            let mut lhs = Rational::zero();
            let mut seen: HashMap<usize, (usize, usize)> = HashMap::new();
            for &s in &fibres[a] {
                for &t in &fibres[b] {
                    lhs += &weight(a, s) * &weight(b, t);
                    let Some(r) = m.product(n, s, t) else {
                        undefined.push(format!("({}, {}) at level {n}", x.id(n, s), x.id(n, t)));
                        continue;
                    };
                    if x.long_edge(n, r) != c {
                        res.fail(format!(
                            "level {n}: g({}*{}) != g({})*g({})",
                            x.id(n, s),
                            x.id(n, t),
                            x.id(n, s),
                            x.id(n, t)
                        ));
                    }
                    if data.is_set_level() {
                        if let Some((s0, t0)) = seen.insert(r, (s, t)) {
                            res.fail(format!(
                                "level {n}: `{}` over {}*{} lifts twice: ({}, {}) and ({}, {})",
                                x.id(n, r),
                                x.id(1, a),
                                x.id(1, b),
                                x.id(n, s0),
                                x.id(n, t0),
                                x.id(n, s),
                                x.id(n, t)
                            ));
                        }
                    }
                }
            }
            let rhs: Rational = fibres[c].iter().map(|&r| weight(c, r)).sum();
            if lhs != rhs {
                res.fail(format!(
                    "level {n}: over ({}, {}) the product fibre has weight {lhs} but the fibre over {} has {rhs}",
                    x.id(1, a),
                    x.id(1, b),
                    x.id(1, c)
                ));
            }
        }
        res.checked += 1;
        let unit_n = x.iterated_degeneracy(m.unit, n);
        let w: Rational = fibres[id_u].iter().map(|&r| weight(id_u, r)).sum();
        if w != Rational::one() || !fibres[id_u].contains(&unit_n) {
            let ids: Vec<&str> = fibres[id_u].iter().map(|&r| x.id(n, r)).collect();
            res.fail(format!("level {n}: unit fibre over id_u is [{}], expected only the unit", ids.join(", ")));
        }
    }
    if !undefined.is_empty() {
        return Err(Error::UndefinedProduct { pairs: undefined });
    }
    Ok(res)
}

/// Length of every 1-simplex, as witnessed within the truncation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinitenessReport {
    pub truncation: usize,
    pub ids: Vec<String>,
    pub length: Vec<usize>,
    /// A nondegenerate top-level simplex has this long edge, so the length
    /// bound may not be witnessed.
    pub truncation_unsafe: Vec<bool>,
}

impl FinitenessReport {
    pub fn max_length(&self) -> usize {
        self.length.iter().copied().max().unwrap_or(0)
    }

    pub fn is_certified(&self, k: usize) -> bool {
        !self.truncation_unsafe[k]
    }

    pub fn unsafe_columns(&self) -> Vec<String> {
        self.ids
            .iter()
            .zip(&self.truncation_unsafe)
            .filter(|(_, &u)| u)
            .map(|(id, _)| id.clone())
            .collect()
    }
}

pub fn check_finiteness(data: &WeightedClassData) -> FinitenessReport {
    let x = data.set();
    let top = x.truncation();
    let n1 = if top >= 1 { x.len(1) } else { 0 };
    let mut length = vec![0; n1];
    let mut unsafe_ = vec![false; n1];
    if top >= 1 {
        let table = x.nondegenerate_table();
        for n in 1..=top {
            for k in (0..x.len(n)).filter(|&k| table[n][k]) {
                let f = x.long_edge(n, k);
                length[f] = length[f].max(n);
                if n == top {
                    unsafe_[f] = true;
                }
            }
        }
    }
    FinitenessReport {
        truncation: top,
        ids: if top >= 1 { x.level(1).to_vec() } else { Vec::new() },
        length,
        truncation_unsafe: unsafe_,
    }
}
