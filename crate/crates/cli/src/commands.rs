//! One function per subcommand. Each fills a report and returns an error
//! only when the computation could not run at all.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use clap::ValueEnum;
use incidence::bialgebra::{
    build_bialgebra, connected_quotient, convolve, invert_multiplicative, mobius_functor, neutral, s_powers,
    structural_endomorphism, verify_weak_antipode, weak_antipode_partial, Character, ColumnCertificate, Defect,
    IncidenceBialgebra, LinearMap, Projection, QuotientMonoid, Scalars, StructureConstants, Structural,
    TargetAlgebra, Zeta,
};
use incidence::builders::Poset;
use incidence::simplicial::{
    check_culf_monoidal, check_decomposition, check_finiteness, validate_monoidal, validate_structure, CheckResult,
    WeightedClassDocument,
};
use incidence::spans::{check_and_invert_multiplicative, verify_identity, Identity, IdentityCheck, MultiplicativeSpan};
use incidence::{Error, Rational, Result};

use crate::report::{Report, Table};
use crate::space::{Order, Space};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum IdentityKind {
    /// `S_1 ∗ S_n ≅ S_{n+1} ≅ S_n ∗ S_1`.
    LemmaRec,
    /// `Id′ ∗ S_n ≅ S_n + S_{n+1} ≅ S_n ∗ Id′`.
    LemmaIdprime,
    /// The telescoped weak antipode identity.
    Theorem,
    /// The telescoped Möbius identity.
    Mobius,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Explicit span bijections; set-level data only.
    Objective,
    /// Exact rational matrices after taking cardinalities.
    Matrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CharacterKind {
    Zeta,
    Defect,
    Projection,
    /// A face map on 2-simplices, with `--face` choosing which.
    Face,
}

fn bialgebra_of(space: &Space) -> Result<IncidenceBialgebra> {
    build_bialgebra(&space.data)
}

pub fn validate(space: &Space, r: &mut Report) -> Result<()> {
    let x = &space.data;
    let top = x.truncation();
    let v = validate_structure(x.set());
    let mut ids = CheckResult::new("simplicial identities");
    ids.checked = x.set().levels().iter().map(Vec::len).sum();
    for m in &v.malformed {
        ids.fail(m.clone());
    }
    for w in &v.violations {
        ids.fail(format!("{} at level {} indices {:?} on `{}`", w.identity, w.level, w.indices, w.simplex));
    }
    let ok = ids.passed;
    r.check(ids);
    if !ok {
        return Ok(());
    }
    if top >= 2 {
        r.check(check_decomposition(x, top - 1)?);
    }
    if let Some(m) = x.monoidal() {
        r.check(validate_monoidal(x));
        r.check(check_culf_monoidal(x, (m.levels() - 1).min(top))?);
    }
    let fin = check_finiteness(x);
    let mut t = Table::new("Lengths", &["element", "length", "certified"]);
    for (k, id) in fin.ids.iter().enumerate() {
        t.row(vec![id.clone(), fin.length[k].to_string(), fin.is_certified(k).to_string()]);
    }
    r.table(t);
    Ok(())
}

pub fn build(space: &Space, out: &Path, r: &mut Report) -> Result<()> {
    let doc = WeightedClassDocument::from_data(&space.data);
    let path = out.join("space.json");
    std::fs::create_dir_all(out).map_err(|e| Error::Malformed(format!("{}: {e}", out.display())))?;
    std::fs::write(&path, doc.to_json() + "\n").map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
    r.param("data", "space.json");
    let mut t = Table::new("Classes per level", &["level", "classes"]);
    for (n, level) in space.data.set().levels().iter().enumerate() {
        t.row(vec![n.to_string(), level.len().to_string()]);
    }
    r.table(t);
    Ok(())
}

pub fn bialgebra(space: &Space, r: &mut Report) -> Result<()> {
    let b = bialgebra_of(space)?;
    let mut axioms = CheckResult::new("bialgebra axioms");
    axioms.checked = b.dim();
    r.check(axioms);
    let mut t = Table::new("Comultiplication and counit", &["element", "coproduct", "counit"]);
    for k in 0..b.dim() {
        let terms: Vec<String> = b
            .coproduct(k)
            .iter()
            .map(|c| {
                let pair = format!("{} ⊗ {}", b.label(c.left), b.label(c.right));
                if c.coefficient == Rational::one() {
                    pair
                } else {
                    format!("{}*({pair})", c.coefficient)
                }
            })
            .collect();
        t.row(vec![b.label(k).into(), terms.join(" + "), b.counit(k).to_string()]);
    }
    r.table(t);
    if b.has_product() {
        let mut t = Table::new("Products within the basis", &["left", "right", "product"]);
        for x in 0..b.dim() {
            for y in 0..b.dim() {
                if let Ok(p) = b.multiply(b.label(x), b.label(y)) {
                    if b.position(&p).is_some() {
                        t.row(vec![b.label(x).into(), b.label(y).into(), p]);
                    }
                }
            }
        }
        r.table(t);
    }
    Ok(())
}

fn certificate_name(c: &ColumnCertificate) -> &'static str {
    if c.is_exact() {
        "exact"
    } else {
        "truncation-unsafe"
    }
}

pub fn antipode(space: &Space, basis: &[String], r: &mut Report) -> Result<()> {
    let b = bialgebra_of(space)?;
    let wa = weak_antipode_partial(&b)?;
    let columns: Vec<usize> = if basis.is_empty() {
        (0..b.dim()).collect()
    } else {
        basis.iter().map(|l| b.require(l)).collect::<Result<_>>()?
    };
    let mut exact = CheckResult::new("requested columns certified exact");
    let mut t = Table::new("Weak antipode", &["element", "S", "certificate", "length"]);
    for &k in &columns {
        exact.checked += 1;
        let cert = &wa.certificates[k];
        if !cert.is_exact() {
            exact.fail(format!("`{}` has a nondegenerate simplex at the top level; raise --levels", b.label(k)));
        }
        t.row(vec![b.label(k).into(), wa.map.column(k).to_string(), certificate_name(cert).into(), b.length(k).to_string()]);
    }
    r.check(exact);
    if wa.uncertified(&b).is_empty() {
        r.check(verify_weak_antipode(&b)?);
    }
    r.table(t);
    Ok(())
}

/// `μ(x, y) = -Σ_{x ≤ z < y} μ(x, z)` by memoised recursion.
fn classical_mobius(n: usize, leq: &dyn Fn(usize, usize) -> bool, x: usize, y: usize) -> i64 {
    fn go(n: usize, leq: &dyn Fn(usize, usize) -> bool, x: usize, y: usize, memo: &mut HashMap<usize, i64>) -> i64 {
        if let Some(&v) = memo.get(&y) {
            return v;
        }
        let v = if x == y {
            1
        } else {
            -(0..n).filter(|&z| z != y && leq(x, z) && leq(z, y)).map(|z| go(n, leq, x, z, memo)).sum::<i64>()
        };
        memo.insert(y, v);
        v
    }
    go(n, leq, x, y, &mut HashMap::new())
}

/// The classical Möbius value of every level-1 class, when the space
/// remembers its poset.
fn classical_table(space: &Space) -> Option<BTreeMap<String, i64>> {
    match space.order.as_ref()? {
        Order::Poset(c) => {
            let n = c.objects().len();
            let arrows = c.arrows();
            let leq = |i: usize, j: usize| arrows.iter().any(|a| a.source == i && a.target == j);
            Some(arrows.iter().map(|a| (a.name.clone(), classical_mobius(n, &leq, a.source, a.target))).collect())
        }
        Order::Intervals(forms) => Some(
            forms
                .iter()
                .map(|(name, p): &(String, Poset)| {
                    let leq = |i: usize, j: usize| p.leq(i, j);
                    let (lo, hi) = (p.bottom().unwrap_or(0), p.top().unwrap_or(0));
                    (name.clone(), classical_mobius(p.len(), &leq, lo, hi))
                })
                .collect(),
        ),
    }
}

pub fn mobius(space: &Space, r: &mut Report) -> Result<()> {
    let b = bialgebra_of(space)?;
    let m = mobius_functor(&b)?;
    r.check(m.check);
    let classical = classical_table(space);
    let mut cross = CheckResult::new("classical recursion");
    let mut t = Table::new("Möbius function", &["element", "μ̄", "classical"]);
    for k in 0..b.dim() {
        let got = m.mobius.column(k).coefficient(incidence::bialgebra::SCALAR);
        let oracle = classical.as_ref().and_then(|c| c.get(b.label(k)));
        if let Some(&want) = oracle {
            cross.checked += 1;
            if got != Rational::from_integer(want) {
                cross.fail(format!("`{}`: μ̄ = {got} but the recursion gives {want}", b.label(k)));
            }
        }
        t.row(vec![b.label(k).into(), got.to_string(), oracle.map_or("n/a".into(), ToString::to_string)]);
    }
    if classical.is_some() {
        r.check(cross);
    }
    r.table(t);
    Ok(())
}

pub fn quotient(space: &Space, r: &mut Report) -> Result<()> {
    let b = bialgebra_of(space)?;
    let q = connected_quotient(&b)?;
    r.check(q.check.clone());
    let mut t = Table::new("Connected quotient", &["element", "antipode"]);
    for k in 0..q.basis.len() {
        t.row(vec![q.label(k).into(), q.antipode.column(k).to_string()]);
    }
    r.table(t);
    let mut t = Table::new("Projection", &["element", "class"]);
    for k in 0..b.dim() {
        t.row(vec![b.label(k).into(), q.project(b.label(k))]);
    }
    r.table(t);
    Ok(())
}

fn identity_row(c: &IdentityCheck) -> CheckResult {
    let mut res = CheckResult::new(c.name.clone());
    res.checked = c.certificate.matched_tokens();
    if let Some(bad) = &c.certificate.counterexample {
        res.fail(format!(
            "fibre over ({}, {}): {} vs {} ({}); lhs {:?} rhs {:?}",
            bad.left, bad.right, bad.lhs_count, bad.rhs_count, bad.reason, bad.lhs_tokens, bad.rhs_tokens
        ));
    }
    if !c.matrices_agree {
        res.fail("span matrices differ".into());
    }
    res
}

/// Compares two maps column by column, restricted to `columns`.
fn compare_maps(b: &IncidenceBialgebra, name: &str, got: &LinearMap, want: &LinearMap, columns: &[usize]) -> CheckResult {
    let mut res = CheckResult::new(name);
    for &k in columns {
        res.checked += 1;
        if got.column(k) != want.column(k) {
            res.fail(format!("at `{}`: {} vs {}", b.label(k), got.column(k), want.column(k)));
        }
    }
    res
}

pub fn verify(space: &Space, which: IdentityKind, level: usize, mode: Mode, r: &mut Report) -> Result<()> {
    let b = bialgebra_of(space)?;
    match mode {
        Mode::Objective => {
            let id = match which {
                IdentityKind::LemmaRec => Identity::LemmaRec(level),
                IdentityKind::LemmaIdprime => Identity::LemmaIdPrime(level),
                IdentityKind::Theorem => Identity::Theorem(level),
                IdentityKind::Mobius => Identity::Mobius(level),
            };
            let checks = verify_identity(&b, id)?;
            let mut t = Table::new(
                "Span isomorphisms",
                &["identity", "iso", "matrices agree", "tokens", "exact columns", "boundary columns", "escaped columns"],
            );
            for c in &checks {
                t.row(vec![
                    c.name.clone(),
                    c.certificate.iso.to_string(),
                    c.matrices_agree.to_string(),
                    c.certificate.matched_tokens().to_string(),
                    c.exact_columns.len().to_string(),
                    c.boundary_columns.join(" "),
                    c.escaped_columns.join(" "),
                ]);
                r.check(identity_row(c));
            }
            r.table(t);
        }
        Mode::Matrix => verify_matrix(&b, which, level, r)?,
    }
    Ok(())
}

fn verify_matrix(b: &IncidenceBialgebra, which: IdentityKind, level: usize, r: &mut Report) -> Result<()> {
    let all: Vec<usize> = (0..b.dim()).collect();
    match which {
        IdentityKind::LemmaRec | IdentityKind::LemmaIdprime => {
            if which == IdentityKind::LemmaRec && level == 0 {
                return Err(Error::ZeroDimension);
            }
            let m = b.monoid()?;
            let p = s_powers(b, level + 1)?;
            let (left, name, want) = if which == IdentityKind::LemmaRec {
                (p[1].clone(), "S_1", p[level + 1].clone())
            } else {
                (structural_endomorphism(b, Structural::IdPrime)?, "Id′", p[level].plus(&p[level + 1]))
            };
            let rhs = if which == IdentityKind::LemmaRec {
                format!("S_{}", level + 1)
            } else {
                format!("S_{level} + S_{}", level + 1)
            };
            let lr = convolve(b, &left, &p[level], m)?;
            let rl = convolve(b, &p[level], &left, m)?;
            r.check(compare_maps(b, &format!("{name} ∗ S_{level} = {rhs}"), &lr, &want, &all));
            r.check(compare_maps(b, &format!("S_{level} ∗ {name} = {rhs}"), &rl, &want, &all));
        }
        IdentityKind::Theorem => {
            let m = b.monoid()?;
            let wa = weak_antipode_partial(b)?;
            let exact: Vec<usize> = all.iter().copied().filter(|&k| wa.certificates[k].is_exact()).collect();
            let idp = structural_endomorphism(b, Structural::IdPrime)?;
            let p = s_powers(b, level + 1)?;
            for n in 0..=level {
                let want = p[n].plus(&p[n + 1]);
                r.check(compare_maps(b, &format!("Id′ ∗ S_{n} = S_{n} + S_{}", n + 1), &convolve(b, &idp, &p[n], m)?, &want, &all));
            }
            let e = neutral(b, m);
            r.check(compare_maps(b, "Id′ ∗ S = e", &convolve(b, &idp, &wa.map, m)?, &e, &exact));
            r.check(compare_maps(b, "S ∗ Id′ = e", &convolve(b, &wa.map, &idp, m)?, &e, &exact));
        }
        IdentityKind::Mobius => r.check(mobius_functor(b)?.check),
    }
    Ok(())
}

pub fn invert(space: &Space, kind: CharacterKind, face: usize, level: usize, mode: Mode, r: &mut Report) -> Result<()> {
    match mode {
        Mode::Objective => {
            let data = &space.data;
            let phi = match kind {
                CharacterKind::Zeta => MultiplicativeSpan::zeta(data)?,
                CharacterKind::Defect => MultiplicativeSpan::defect(data)?,
                CharacterKind::Projection => MultiplicativeSpan::projection(data)?,
                CharacterKind::Face => MultiplicativeSpan::from_face(data, face)?,
            };
            let rep = check_and_invert_multiplicative(data, &phi, level)?;
            for h in &rep.hypotheses {
                r.check(h.clone());
            }
            for c in &rep.checks {
                r.check(identity_row(c));
            }
            r.check(rep.cardinality.clone());
            let mut t = Table::new("Escaped columns", &["element"]);
            for c in &rep.escaped_columns {
                t.row(vec![c.clone()]);
            }
            r.table(t);
        }
        Mode::Matrix => {
            let b = bialgebra_of(space)?;
            let quotient;
            let polys;
            let (phi, target): (Box<dyn Character>, &dyn TargetAlgebra) = match kind {
                CharacterKind::Zeta => (Box::new(Zeta), &Scalars),
                CharacterKind::Defect => {
                    polys = StructureConstants::truncated_polynomials(b.finiteness().max_length());
                    (Box::new(Defect), &polys)
                }
                CharacterKind::Projection => {
                    quotient = QuotientMonoid::new(b.monoid()?.clone(), b.basis().ids());
                    (Box::new(Projection(quotient.clone())), &quotient)
                }
                CharacterKind::Face => {
                    return Err(Error::Malformed("the face span has no cardinality-level character; use --mode objective".into()))
                }
            };
            let inv = invert_multiplicative(&b, phi.as_ref(), target)?;
            let mut t = Table::new("Inverse", &["element", "φ", "φ∘S"]);
            for k in 0..b.dim() {
                t.row(vec![b.label(k).into(), inv.character.column(k).to_string(), inv.inverse.column(k).to_string()]);
            }
            r.check(inv.check);
            r.table(t);
        }
    }
    Ok(())
}
