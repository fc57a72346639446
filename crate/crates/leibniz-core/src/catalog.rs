//! The machine-readable catalog: every algebra family of the small-dimension
//! classification, with parameter constraints, sample grids, claimed
//! structural profiles, and verification against the structure module.
//!
//! The data itself ships as `data/catalog.json` (tables in the exact-core
//! schema, coefficients in a small linear-expression grammar) together with
//! `data/identifications.json`, the versioned record of parameter
//! identifications the census has certified.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Deserialize;

use crate::algebra::AlgebraTable;
use crate::scalar::{parse_scalar, Scalar};
use crate::Error;

pub const CATALOG_JSON: &str = include_str!("../data/catalog.json");
pub const IDENTIFICATIONS_JSON: &str = include_str!("../data/identifications.json");

pub type FamilyParams = BTreeMap<String, Scalar>;

/// Linear expression in the family parameters: `c0 + c1*p1 + ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub constant: Scalar,
    pub terms: Vec<(Scalar, String)>,
}

impl Expr {
    pub fn eval(&self, params: &FamilyParams) -> Result<Scalar, Error> {
        let mut acc = self.constant.clone();
        for (c, name) in &self.terms {
            let v = params
                .get(name)
                .ok_or_else(|| Error::Invalid(format!("missing parameter '{}'", name)))?;
            acc += &(c * v);
        }
        Ok(acc)
    }

    pub fn param_names(&self) -> Vec<&str> {
        self.terms.iter().map(|(_, n)| n.as_str()).collect()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Grammar: expr := term (("+"|"-") term)* ; term := rat | name | rat "*" name,
/// with a leading sign allowed.
pub fn parse_expr(text: &str) -> Result<Expr, Error> {
    let mut constant = Scalar::zero();
    let mut terms: Vec<(Scalar, String)> = Vec::new();
    let bytes = text.as_bytes();
    let mut pos = 0usize;
    let mut sign = Scalar::one();
    let mut first = true;
    while pos < bytes.len() {
        if !first || bytes[pos] == b'+' || bytes[pos] == b'-' {
            match bytes.get(pos) {
                Some(b'+') => {
                    sign = Scalar::one();
                    pos += 1;
                }
                Some(b'-') => {
                    sign = -Scalar::one();
                    pos += 1;
                }
                Some(_) if first => {}
                _ => return Err(Error::Parse(format!("expected sign in expression '{}'", text))),
            }
        }
        first = false;
        // term: optional rational coefficient, optional '*', optional name
        let start = pos;
        while pos < bytes.len() && (bytes[pos].is_ascii_digit() || bytes[pos] == b'/') {
            pos += 1;
        }
        let coeff = if pos > start {
            let c: Scalar = std::str::from_utf8(&bytes[start..pos]).unwrap().parse()?;
            c
        } else {
            Scalar::one()
        };
        if pos < bytes.len() && bytes[pos] == b'*' {
            pos += 1;
        }
        let name_start = pos;
        while pos < bytes.len() && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_') {
            pos += 1;
        }
        let coeff = &coeff * &sign;
        if pos > name_start {
            let name = std::str::from_utf8(&bytes[name_start..pos]).unwrap().to_string();
            terms.push((coeff, name));
        } else if pos > start {
            constant += &coeff;
        } else {
            return Err(Error::Parse(format!("empty term in expression '{}'", text)));
        }
        sign = Scalar::one();
    }
    Ok(Expr { constant, terms })
}

/// Constraint predicates from the minimal grammar `ne(p, v)` / `and(...)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Constraint {
    True,
    Ne(String, Scalar),
    And(Vec<Constraint>),
}

impl Constraint {
    pub fn check(&self, params: &FamilyParams) -> Result<(), String> {
        match self {
            Constraint::True => Ok(()),
            Constraint::Ne(name, v) => {
                let actual = params.get(name).ok_or_else(|| format!("ne({},{}): parameter missing", name, v))?;
                if actual == v {
                    Err(format!("ne({},{})", name, v))
                } else {
                    Ok(())
                }
            }
            Constraint::And(cs) => {
                for c in cs {
                    c.check(params)?;
                }
                Ok(())
            }
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            Constraint::True => "true".into(),
            Constraint::Ne(n, v) => format!("ne({},{})", n, v),
            Constraint::And(cs) => {
                format!("and({})", cs.iter().map(|c| c.to_text()).collect::<Vec<_>>().join(","))
            }
        }
    }
}

pub fn parse_constraint(text: &str) -> Result<Constraint, Error> {
    let t = text.trim();
    if t == "true" {
        return Ok(Constraint::True);
    }
    if let Some(inner) = t.strip_prefix("ne(").and_then(|s| s.strip_suffix(')')) {
        let (name, value) = inner
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("bad predicate '{}'", t)))?;
        return Ok(Constraint::Ne(name.trim().to_string(), parse_scalar(value.trim())?));
    }
    if let Some(inner) = t.strip_prefix("and(").and_then(|s| s.strip_suffix(')')) {
        // split on commas at depth 0
        let mut parts = Vec::new();
        let mut depth = 0;
        let mut start = 0;
        for (i, ch) in inner.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                ',' if depth == 0 => {
                    parts.push(&inner[start..i]);
                    start = i + 1;
                }
                _ => {}
            }
        }
        parts.push(&inner[start..]);
        let cs = parts
            .into_iter()
            .map(parse_constraint)
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(Constraint::And(cs));
    }
    Err(Error::Parse(format!("unknown predicate '{}'", t)))
}

/// The paper's claims about a family, as testable data.
#[derive(Clone, Debug, Default, Deserialize)]
pub struct ClaimedProfile {
    pub solvable: bool,
    pub nilpotent: bool,
    #[serde(default)]
    pub nilradical_dim: Option<usize>,
    #[serde(default)]
    pub nilradical_family: Option<String>,
    #[serde(default)]
    pub der_dim: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct FamilySpec {
    pub id: String,
    /// 0 means the dimension itself is the parameter (abelian_n).
    pub dim: usize,
    pub labels: Vec<String>,
    pub params: Vec<String>,
    pub constraint: Constraint,
    pub template: Vec<(usize, usize, usize, Expr)>,
    pub claimed: ClaimedProfile,
    /// Fixed sample assignment for round-trip checks (empty when no params).
    pub sample: FamilyParams,
    /// Extra per-parameter grid points beyond the base grid.
    pub extra_grid: BTreeMap<String, Vec<Scalar>>,
}

impl FamilySpec {
    pub fn has_params(&self) -> bool {
        !self.params.is_empty()
    }

    /// All sample-grid assignments for this family (base grid per continuous
    /// parameter intersected with the constraint, plus any extra points).
    pub fn grid(&self) -> Vec<FamilyParams> {
        if self.id == "abelian_n" {
            return (1..=4)
                .map(|n| {
                    let mut p = FamilyParams::new();
                    p.insert("n".into(), Scalar::from_int(n));
                    p
                })
                .collect();
        }
        if self.params.is_empty() {
            return vec![FamilyParams::new()];
        }
        let base = base_grid();
        let mut per_param: Vec<Vec<Scalar>> = Vec::new();
        for p in &self.params {
            let mut vals = base.clone();
            if let Some(extra) = self.extra_grid.get(p) {
                for v in extra {
                    if !vals.contains(v) {
                        vals.push(v.clone());
                    }
                }
            }
            per_param.push(vals);
        }
        let mut out = Vec::new();
        let mut idx = vec![0usize; per_param.len()];
        loop {
            let mut assignment = FamilyParams::new();
            for (k, p) in self.params.iter().enumerate() {
                assignment.insert(p.clone(), per_param[k][idx[k]].clone());
            }
            if self.constraint.check(&assignment).is_ok() {
                out.push(assignment);
            }
            let mut carry = per_param.len();
            for k in (0..per_param.len()).rev() {
                idx[k] += 1;
                if idx[k] < per_param[k].len() {
                    carry = k;
                    break;
                }
                idx[k] = 0;
            }
            if carry == per_param.len() {
                break;
            }
        }
        out
    }

    /// Template diagonal weight of basis slot `i` under the right action of
    /// the distinguished complement generator (last basis vector); only
    /// meaningful for the 4-dimensional solvable families, whose templates
    /// are triangular in the stored basis.
    pub fn right_weight_exprs(&self) -> Vec<Expr> {
        let x = self.dim; // 1-based index of the complement generator
        (1..self.dim)
            .map(|i| {
                self.template
                    .iter()
                    .find(|&&(ti, tj, tk, _)| ti == i && tj == x && tk == i)
                    .map(|(_, _, _, e)| e.clone())
                    .unwrap_or(Expr { constant: Scalar::zero(), terms: vec![] })
            })
            .collect()
    }
}

#[derive(Deserialize)]
struct RawEntry {
    i: usize,
    j: usize,
    k: usize,
    c: String,
}

#[derive(Deserialize)]
struct RawFamily {
    id: String,
    dim: usize,
    labels: Vec<String>,
    params: Vec<String>,
    constraint: String,
    table: Vec<RawEntry>,
    claimed: ClaimedProfile,
    #[serde(default)]
    sample: BTreeMap<String, String>,
    #[serde(default)]
    extra_grid: BTreeMap<String, Vec<String>>,
}

#[derive(Deserialize)]
struct RawCatalog {
    base_grid: Vec<String>,
    families: Vec<RawFamily>,
}

fn load() -> (Vec<Scalar>, Vec<FamilySpec>) {
    let raw: RawCatalog = serde_json::from_str(CATALOG_JSON).expect("catalog.json is well-formed");
    let grid = raw
        .base_grid
        .iter()
        .map(|s| parse_scalar(s).expect("grid scalar"))
        .collect();
    let families = raw
        .families
        .into_iter()
        .map(|f| {
            let template = f
                .table
                .iter()
                .map(|e| {
                    let expr = parse_expr(&e.c).expect("template coefficient");
                    (e.i, e.j, e.k, expr)
                })
                .collect();
            FamilySpec {
                id: f.id,
                dim: f.dim,
                labels: f.labels,
                params: f.params,
                constraint: parse_constraint(&f.constraint).expect("constraint"),
                template,
                claimed: f.claimed,
                sample: f
                    .sample
                    .iter()
                    .map(|(k, v)| (k.clone(), parse_scalar(v).expect("sample scalar")))
                    .collect(),
                extra_grid: f
                    .extra_grid
                    .iter()
                    .map(|(k, vs)| {
                        (k.clone(), vs.iter().map(|v| parse_scalar(v).expect("grid scalar")).collect())
                    })
                    .collect(),
            }
        })
        .collect();
    (grid, families)
}

fn catalog() -> &'static (Vec<Scalar>, Vec<FamilySpec>) {
    static CATALOG: OnceLock<(Vec<Scalar>, Vec<FamilySpec>)> = OnceLock::new();
    CATALOG.get_or_init(load)
}

pub fn base_grid() -> Vec<Scalar> {
    catalog().0.clone()
}

/// Complete, stable-ordered family list.
pub fn list_families() -> &'static [FamilySpec] {
    &catalog().1
}

pub fn family(id: &str) -> Result<&'static FamilySpec, Error> {
    list_families()
        .iter()
        .find(|f| f.id == id)
        .ok_or_else(|| Error::UnknownFamily(id.to_string()))
}

/// Instantiate a family at concrete parameters.
pub fn instantiate(id: &str, params: &FamilyParams) -> Result<AlgebraTable, Error> {
    let spec = family(id)?;
    for p in &spec.params {
        if !params.contains_key(p) {
            return Err(Error::ConstraintViolation {
                family: id.to_string(),
                predicate: format!("parameter '{}' required", p),
            });
        }
    }
    if let Err(pred) = spec.constraint.check(params) {
        return Err(Error::ConstraintViolation { family: id.to_string(), predicate: pred });
    }
    if id == "abelian_n" {
        let n = params.get("n").unwrap();
        let dim = n
            .re
            .to_integer()
            .try_into()
            .ok()
            .filter(|&d: &usize| (1..=16).contains(&d) && n.is_real() && n.re.is_integer())
            .ok_or_else(|| Error::ConstraintViolation {
                family: id.to_string(),
                predicate: "n must be an integer in 1..=16".into(),
            })?;
        return Ok(AlgebraTable::new(dim));
    }
    let mut t = AlgebraTable::new(spec.dim).with_labels(spec.labels.clone());
    for (i, j, k, expr) in &spec.template {
        t.set(i - 1, j - 1, k - 1, expr.eval(params)?);
    }
    Ok(t)
}

/// The paper's claims for a family.
pub fn claimed_profile(id: &str) -> Result<&'static ClaimedProfile, Error> {
    Ok(&family(id)?.claimed)
}

/// Single verification check inside an entry report.
#[derive(Clone, Debug, serde::Serialize)]
pub struct EntryCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct EntryReport {
    pub family: String,
    pub params: BTreeMap<String, String>,
    pub checks: Vec<EntryCheck>,
    pub passed: bool,
}

/// Instantiate and check a catalog entry against its claimed profile.
pub fn verify_entry(id: &str, params: &FamilyParams) -> Result<EntryReport, Error> {
    use crate::structure;
    let spec = family(id)?;
    let table = instantiate(id, params)?;
    let mut checks = Vec::new();
    let mut push = |name: &str, passed: bool, detail: String| {
        checks.push(EntryCheck { name: name.to_string(), passed, detail });
    };

    let leibniz = table.leibniz_check();
    push("leibniz", leibniz.passed(), match &leibniz {
        crate::algebra::CheckResult::Pass => "pass".into(),
        crate::algebra::CheckResult::Fail { witness, .. } => format!("fail at {:?}", witness),
    });

    let solvable = structure::is_solvable(&table);
    push(
        "solvable",
        solvable == spec.claimed.solvable,
        format!("computed {}, claimed {}", solvable, spec.claimed.solvable),
    );
    let nilpotent = structure::is_nilpotent_algebra(&table);
    push(
        "nilpotent",
        nilpotent == spec.claimed.nilpotent,
        format!("computed {}, claimed {}", nilpotent, spec.claimed.nilpotent),
    );

    if let Some(claimed_dim) = spec.claimed.nilradical_dim {
        match structure::nilradical(&table) {
            Ok(nr) => {
                push(
                    "nilradical_dim",
                    nr.dim() == claimed_dim,
                    format!("computed {}, claimed {}", nr.dim(), claimed_dim),
                );
                if let Some(claimed_family) = &spec.claimed.nilradical_family {
                    match table.restrict_to(&nr) {
                        Ok(restriction) => {
                            let verdict =
                                crate::classify::classify_nilpotent_small(&restriction);
                            match verdict {
                                Some((fam, _, _)) => push(
                                    "nilradical_family",
                                    &fam == claimed_family,
                                    format!("computed {}, claimed {}", fam, claimed_family),
                                ),
                                None => push(
                                    "nilradical_family",
                                    false,
                                    format!("unclassified, claimed {}", claimed_family),
                                ),
                            }
                        }
                        Err(e) => push("nilradical_family", false, format!("restriction failed: {}", e)),
                    }
                }
            }
            Err(e) => push("nilradical_dim", false, format!("nilradical failed: {}", e)),
        }
    }

    if let Some(der_dim) = spec.claimed.der_dim {
        let d = structure::derivation_space(&table).dim();
        push("der_dim", d == der_dim, format!("computed {}, claimed {}", d, der_dim));
    }

    let passed = checks.iter().all(|c| c.passed);
    Ok(EntryReport {
        family: id.to_string(),
        params: params.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
        checks,
        passed,
    })
}

// ---------------------------------------------------------------------------
// Identifications
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Deserialize)]
pub struct IdentificationRule {
    pub family: String,
    pub kind: String,
    pub params: Vec<String>,
}

#[derive(Deserialize)]
struct RawIdentifications {
    rules: Vec<IdentificationRule>,
}

pub fn identification_rules() -> &'static [IdentificationRule] {
    static RULES: OnceLock<Vec<IdentificationRule>> = OnceLock::new();
    RULES.get_or_init(|| {
        let raw: RawIdentifications =
            serde_json::from_str(IDENTIFICATIONS_JSON).expect("identifications.json");
        raw.rules
    })
}

/// Full identification orbit of a parameter assignment within its family.
pub fn param_orbit(id: &str, params: &FamilyParams) -> Vec<FamilyParams> {
    let mut orbit = vec![params.clone()];
    for rule in identification_rules().iter().filter(|r| r.family == id) {
        let mut extra: Vec<FamilyParams> = Vec::new();
        for point in &orbit {
            match rule.kind.as_str() {
                "reciprocal" => {
                    let name = &rule.params[0];
                    if let Some(v) = point.get(name) {
                        if let Some(inv) = v.inv() {
                            let mut q = point.clone();
                            q.insert(name.clone(), inv);
                            extra.push(q);
                        }
                    }
                }
                "swap" => {
                    let (a, b) = (&rule.params[0], &rule.params[1]);
                    let mut q = point.clone();
                    let (va, vb) = (q[a].clone(), q[b].clone());
                    q.insert(a.clone(), vb);
                    q.insert(b.clone(), va);
                    extra.push(q);
                }
                "scale_pair" => {
                    // (p, q) ~ (1/p, q/p) when p is invertible.
                    let (a, b) = (&rule.params[0], &rule.params[1]);
                    let (va, vb) = (point[a].clone(), point[b].clone());
                    if let Some(inv) = va.inv() {
                        let mut q = point.clone();
                        q.insert(a.clone(), inv.clone());
                        q.insert(b.clone(), &vb * &inv);
                        extra.push(q);
                    }
                }
                "swap_scale" => {
                    // Weight multiset {1, p, q} up to a common rescaling:
                    // re-anchor on any nonzero weight.
                    let (a, b) = (&rule.params[0], &rule.params[1]);
                    let (va, vb) = (point[a].clone(), point[b].clone());
                    let mut push_pair = |x: Scalar, y: Scalar| {
                        let mut q = point.clone();
                        q.insert(a.clone(), x);
                        q.insert(b.clone(), y);
                        extra.push(q);
                    };
                    push_pair(vb.clone(), va.clone());
                    if let Some(inv) = va.inv() {
                        push_pair(inv.clone(), &vb * &inv);
                        push_pair(&vb * &inv, inv.clone());
                    }
                    if let Some(inv) = vb.inv() {
                        push_pair(inv.clone(), &va * &inv);
                        push_pair(&va * &inv, inv.clone());
                    }
                }
                _ => {}
            }
        }
        for q in extra {
            if !orbit.contains(&q) {
                orbit.push(q);
            }
        }
    }
    // Close under repeated application (orbits here are tiny).
    let mut changed = true;
    while changed {
        changed = false;
        let snapshot = orbit.clone();
        for point in snapshot {
            for rule in identification_rules().iter().filter(|r| r.family == id) {
                if rule.kind == "reciprocal" {
                    let name = &rule.params[0];
                    if let Some(inv) = point.get(name).and_then(|v| v.inv()) {
                        let mut q = point.clone();
                        q.insert(name.clone(), inv);
                        if !orbit.contains(&q) {
                            orbit.push(q);
                            changed = true;
                        }
                    }
                }
            }
        }
    }
    orbit
}

/// Canonical representative of the identification orbit (lexicographic
/// minimum of the sorted parameter vectors).
pub fn canonical_params(id: &str, params: &FamilyParams) -> FamilyParams {
    let spec = match family(id) {
        Ok(s) => s,
        Err(_) => return params.clone(),
    };
    let mut best: Option<(Vec<Scalar>, FamilyParams)> = None;
    for point in param_orbit(id, params) {
        if spec.constraint.check(&point).is_err() {
            continue;
        }
        let key: Vec<Scalar> = spec.params.iter().map(|p| point[p].clone()).collect();
        match &best {
            Some((k, _)) if *k <= key => {}
            _ => best = Some((key, point)),
        }
    }
    best.map(|(_, p)| p).unwrap_or_else(|| params.clone())
}

/// Parse "k=v,k2=v2" into family parameters using the scalar grammar.
pub fn parse_params(text: &str) -> Result<FamilyParams, Error> {
    let mut out = FamilyParams::new();
    if text.trim().is_empty() {
        return Ok(out);
    }
    for piece in text.split(',') {
        let (k, v) = piece
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected name=value, got '{}'", piece)))?;
        out.insert(k.trim().to_string(), parse_scalar(v.trim())?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expr_parsing() {
        let p: FamilyParams =
            [("gamma".to_string(), Scalar::from_int(2))].into_iter().collect();
        assert_eq!(parse_expr("1+gamma").unwrap().eval(&p).unwrap(), Scalar::from_int(3));
        assert_eq!(parse_expr("-1-gamma").unwrap().eval(&p).unwrap(), Scalar::from_int(-3));
        assert_eq!(parse_expr("-gamma").unwrap().eval(&p).unwrap(), Scalar::from_int(-2));
        assert_eq!(parse_expr("2").unwrap().eval(&p).unwrap(), Scalar::from_int(2));
        assert_eq!(parse_expr("1/2").unwrap().eval(&p).unwrap(), Scalar::from_frac(1, 2));
        assert_eq!(parse_expr("2*gamma").unwrap().eval(&p).unwrap(), Scalar::from_int(4));
    }

    #[test]
    fn list_contains_required_ids() {
        let ids: Vec<&str> = list_families().iter().map(|f| f.id.as_str()).collect();
        for id in ["mu1", "lambda1", "lambda6", "lambda4p", "lambda4p_beta", "R1", "R3", "L1", "L44", "sl2c", "abelian_n"] {
            assert!(ids.contains(&id), "missing {}", id);
        }
        let sl2c = family("sl2c").unwrap();
        assert_eq!(sl2c.dim, 4);
    }

    #[test]
    fn instantiate_l1() {
        let params = parse_params("gamma=2").unwrap();
        let t = instantiate("L1", &params).unwrap();
        assert_eq!(t.basis_bracket(1, 3)[1], Scalar::from_int(2));
        assert_eq!(t.basis_bracket(2, 3)[2], Scalar::from_int(3));
        assert_eq!(t.entries().count(), 8);
    }

    #[test]
    fn instantiate_lambda4() {
        let params = parse_params("alpha=-2").unwrap();
        let t = instantiate("lambda4", &params).unwrap();
        assert_eq!(t.basis_bracket(0, 0)[2], Scalar::one());
        assert_eq!(t.basis_bracket(1, 1)[2], Scalar::from_int(-2));
        assert_eq!(t.basis_bracket(0, 1)[2], Scalar::one());
    }

    #[test]
    fn constraint_violations() {
        let params = parse_params("delta=0").unwrap();
        match instantiate("L10", &params) {
            Err(Error::ConstraintViolation { family, predicate }) => {
                assert_eq!(family, "L10");
                assert!(predicate.contains("ne(delta,0)"));
            }
            other => panic!("expected constraint violation, got {:?}", other.map(|_| ())),
        }
        assert!(matches!(
            instantiate("L21", &parse_params("mu2=1,mu3=0").unwrap()),
            Err(Error::ConstraintViolation { .. })
        ));
        assert!(matches!(instantiate("nope", &FamilyParams::new()), Err(Error::UnknownFamily(_))));
    }

    #[test]
    fn grids_respect_constraints() {
        let l10 = family("L10").unwrap();
        let grid = l10.grid();
        assert_eq!(grid.len(), 7); // 8 base points minus delta = 0
        let l4 = family("lambda4").unwrap();
        assert_eq!(l4.grid().len(), 9); // base plus 3/16
        let ab = family("abelian_n").unwrap();
        assert_eq!(ab.grid().len(), 4);
    }

    #[test]
    fn canonicalization_orbits() {
        let p = parse_params("gamma=2").unwrap();
        let canon = canonical_params("L1", &p);
        let q = parse_params("gamma=1/2").unwrap();
        assert_eq!(canon, canonical_params("L1", &q));
        let a = canonical_params("L20", &parse_params("mu2=2,mu3=3").unwrap());
        let b = canonical_params("L20", &parse_params("mu2=3,mu3=2").unwrap());
        let c = canonical_params("L20", &parse_params("mu2=1/2,mu3=3/2").unwrap());
        assert_eq!(a, b);
        assert_eq!(a, c);
    }
}
