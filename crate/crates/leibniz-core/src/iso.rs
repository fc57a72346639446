//! Explicit isomorphism certificates: verification, and bounded search by
//! flag-adapted elimination.
//!
//! The search aligns the canonical invariant subspaces of both tables
//! (series terms, annihilators, nilradical and its series), which forces a
//! block-triangular shape on the unknown basis-change matrix, then solves
//! the remaining quadratic system with the bounded elimination solver.
//! `Found` certificates are always re-verified exactly; `Incompatible`
//! cites the fingerprint component that differs; `NotFound` is
//! inconclusive.

use crate::algebra::AlgebraTable;
use crate::catalog::{FamilyParams, FamilySpec};
use crate::fingerprint::fingerprint;
use crate::linalg::{Matrix, Subspace};
use crate::scalar::Scalar;
use crate::solver::{self, Poly};
use crate::structure;
use crate::{Budget, Error};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoCertificate {
    /// Invertible matrix with `change_basis(source, p) == target`.
    pub p: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(IsoCertificate),
    /// Sound non-isomorphism: the named fingerprint component differs.
    Incompatible(&'static str),
    /// Inconclusive under the budget.
    NotFound,
}

pub fn verify_isomorphism(a: &AlgebraTable, b: &AlgebraTable, p: &Matrix) -> Result<bool, Error> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch("tables must have equal dimension".into()));
    }
    if p.nrows() != a.dim() || p.ncols() != a.dim() {
        return Err(Error::DimensionMismatch("certificate must be dim x dim".into()));
    }
    Ok(&a.change_basis(p)? == b)
}

/// Ordered canonical subspaces used to align bases on both sides.
fn flag_candidates(a: &AlgebraTable) -> Vec<Option<Subspace>> {
    let mut out: Vec<Option<Subspace>> = Vec::new();
    let lc = structure::lower_central_chain(a);
    for k in 1..4 {
        out.push(lc.get(k).cloned());
    }
    let dc = structure::derived_chain(a);
    for k in 1..4 {
        out.push(dc.get(k).cloned());
    }
    let nr = structure::nilradical(a).ok();
    out.push(nr.clone());
    if let Some(nr) = &nr {
        let mut term = nr.clone();
        for _ in 0..2 {
            term = a.product_space(&term, nr).unwrap();
            out.push(Some(term.clone()));
        }
    }
    let right = structure::right_annihilator(a);
    let left = structure::left_annihilator(a);
    out.push(Some(right.clone()));
    out.push(Some(left.clone()));
    out.push(Some(right.intersect(&left)));
    out.push(Some(a.square().intersect(&right)));
    if let Some(nr) = &nr {
        out.push(Some(nr.intersect(&right)));
    } else {
        out.push(None);
    }
    out
}

/// Relation of two subspaces inside a chain.
#[derive(PartialEq, Eq, Clone, Copy)]
enum Rel {
    Equal,
    Sub,
    Super,
    Incomparable,
}

fn relation(a: &Subspace, b: &Subspace) -> Rel {
    let ab = a.contains(b);
    let ba = b.contains(a);
    match (ba, ab) {
        (true, true) => Rel::Equal,
        (true, false) => Rel::Sub,
        (false, true) => Rel::Super,
        (false, false) => Rel::Incomparable,
    }
}

/// Matching chains of canonical subspaces for both tables: candidates are
/// accepted only when they exist on both sides with equal dimension and
/// identical nesting relations against everything accepted so far.
fn matched_chains(a: &AlgebraTable, b: &AlgebraTable) -> (Vec<Subspace>, Vec<Subspace>) {
    let ca = flag_candidates(a);
    let cb = flag_candidates(b);
    let n = a.dim();
    let mut chain_a: Vec<Subspace> = Vec::new();
    let mut chain_b: Vec<Subspace> = Vec::new();
    for (sa, sb) in ca.into_iter().zip(cb) {
        let (Some(sa), Some(sb)) = (sa, sb) else { continue };
        if sa.dim() != sb.dim() || sa.dim() == 0 || sa.dim() == n {
            continue;
        }
        let mut ok = true;
        let mut duplicate = false;
        for (ta, tb) in chain_a.iter().zip(&chain_b) {
            let ra = relation(&sa, ta);
            let rb = relation(&sb, tb);
            if ra != rb || ra == Rel::Incomparable {
                ok = false;
                break;
            }
            if ra == Rel::Equal {
                duplicate = true;
            }
        }
        if ok && !duplicate {
            chain_a.push(sa);
            chain_b.push(sb);
        }
    }
    // Sort both by dimension (they nest, so dimension orders the chain).
    let mut idx: Vec<usize> = (0..chain_a.len()).collect();
    idx.sort_by_key(|&i| chain_a[i].dim());
    let chain_a = idx.iter().map(|&i| chain_a[i].clone()).collect();
    let chain_b = idx.iter().map(|&i| chain_b[i].clone()).collect();
    (chain_a, chain_b)
}

/// Invertible matrix whose leading rows run through the chain.
fn adapted_basis(n: usize, chain: &[Subspace]) -> Matrix {
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let mut current = Subspace::zero(n);
    for sub in chain {
        for v in sub.basis() {
            if !current.contains_vec(v) {
                rows.push(v.clone());
                current = Subspace::from_spanning(n, rows.clone());
            }
        }
    }
    for v in current.complement_basis() {
        rows.push(v);
    }
    Matrix::from_rows(rows)
}

/// Column support per row: row i of the unknown matrix may be supported on
/// the smallest chain segment containing basis vector i.
fn row_supports(n: usize, chain_dims: &[usize]) -> Vec<usize> {
    (0..n)
        .map(|i| {
            chain_dims
                .iter()
                .copied()
                .find(|&d| d > i)
                .unwrap_or(n)
        })
        .collect()
}

struct VarTable {
    n: usize,
    index: Vec<Option<usize>>,
    count: usize,
}

impl VarTable {
    fn new(n: usize, supports: &[usize]) -> Self {
        let mut index = vec![None; n * n];
        let mut count = 0;
        for i in 0..n {
            for j in 0..supports[i] {
                index[i * n + j] = Some(count);
                count += 1;
            }
        }
        VarTable { n, index, count }
    }

    fn var(&self, i: usize, j: usize) -> Option<usize> {
        self.index[i * self.n + j]
    }
}

/// Equations `[row_i, row_j]_a = sum_r target(i,j,r) * row_r` over the
/// unknown rows of the basis-change matrix.
fn change_basis_system(
    a: &AlgebraTable,
    target: &dyn Fn(usize, usize, usize) -> Poly,
    vars: &VarTable,
    nvars: usize,
) -> Vec<Poly> {
    let n = a.dim();
    let mut polys = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let mut lhs = vec![Poly::zero(nvars); n];
            for (k, l, m, c) in a.entries() {
                let (Some(vik), Some(vjl)) = (vars.var(i, k), vars.var(j, l)) else { continue };
                let term = Poly::var(nvars, vik).mul(&Poly::var(nvars, vjl)).scale(c);
                lhs[m] = lhs[m].add(&term);
            }
            for m in 0..n {
                let mut rhs = Poly::zero(nvars);
                for r in 0..n {
                    let coeff = target(i, j, r);
                    if coeff.is_zero() {
                        continue;
                    }
                    if let Some(vrm) = vars.var(r, m) {
                        rhs = rhs.add(&coeff.mul(&Poly::var(nvars, vrm)));
                    }
                    // target coefficient on a vanishing entry contributes 0
                }
                let eq = lhs[m].sub(&rhs);
                if !eq.is_zero() {
                    polys.push(eq);
                }
            }
        }
    }
    polys
}

fn assemble_matrix(n: usize, vars: &VarTable, solution: &[Scalar]) -> Matrix {
    Matrix::from_fn(n, n, |i, j| match vars.var(i, j) {
        Some(v) => solution[v].clone(),
        None => Scalar::zero(),
    })
}

/// Branch priorities: the diagonal entries of the complement block first
/// (their assignment linearizes the bilinear bracket equations), the flag
/// blocks next, and the complement rows' flag columns last — those are
/// recovered by linear propagation once the rest is pinned.
fn var_priorities(n: usize, vars: &VarTable, supports: &[usize], extra: usize) -> Vec<u32> {
    let mut out = vec![0u32; vars.count + extra];
    let flag_end = supports.iter().copied().filter(|&s| s < n).max().unwrap_or(0);
    for i in 0..n {
        for j in 0..n {
            if let Some(v) = vars.var(i, j) {
                out[v] = if supports[i] == n {
                    // complement rows: the trailing block first, the flag
                    // columns only by derivation
                    if j >= flag_end { 4 } else { 0 }
                } else if i == j {
                    // scale-type freedoms of the flag blocks
                    2
                } else {
                    1
                };
            }
        }
    }
    out
}

fn var_candidates(n: usize, vars: &VarTable, extra: usize) -> Vec<Vec<Scalar>> {
    let mut diag_first = solver::default_candidates();
    // move 0 behind the small units for diagonal-ish variables
    diag_first.retain(|c| !c.is_zero());
    diag_first.push(Scalar::zero());
    let off = solver::default_candidates();
    let mut out = vec![Vec::new(); vars.count + extra];
    for i in 0..n {
        for j in 0..n {
            if let Some(v) = vars.var(i, j) {
                out[v] = if i == j { diag_first.clone() } else { off.clone() };
            }
        }
    }
    for slot in out.iter_mut().skip(vars.count) {
        *slot = off.clone();
    }
    out
}

/// Linear constraints from canonical subspaces that did not enter the
/// nesting chain (e.g. the right annihilator when it is transverse to the
/// square ideal): whenever a target basis vector lies in a canonical
/// subspace of `b`, its preimage row must lie in the matching subspace of
/// `a`.
fn membership_constraints(
    a: &AlgebraTable,
    b: &AlgebraTable,
    ua: &Matrix,
    ub: &Matrix,
    vars: &VarTable,
) -> Vec<Poly> {
    let n = a.dim();
    let Some(ua_inv) = ua.inverse() else { return Vec::new() };
    let Some(ub_inv) = ub.inverse() else { return Vec::new() };
    let to_adapted = |s: &Subspace, inv: &Matrix| -> Subspace {
        Subspace::from_spanning(n, s.basis().iter().map(|v| inv.vec_mul(v)).collect())
    };
    let mut out = Vec::new();
    for (sa, sb) in flag_candidates(a).into_iter().zip(flag_candidates(b)) {
        let (Some(sa), Some(sb)) = (sa, sb) else { continue };
        if sa.dim() != sb.dim() || sa.dim() == 0 || sa.dim() == n {
            continue;
        }
        let sa2 = to_adapted(&sa, &ua_inv);
        let sb2 = to_adapted(&sb, &ub_inv);
        for i in 0..n {
            let f = crate::algebra::unit(n, i);
            if !sb2.contains_vec(&f) {
                continue;
            }
            // row_i must lie in sa2: residual after echelon reduction is 0
            let basis = sa2.basis();
            let pivots: Vec<usize> = basis
                .iter()
                .map(|r| r.iter().position(|x| !x.is_zero()).unwrap())
                .collect();
            for c in 0..n {
                if pivots.contains(&c) {
                    continue;
                }
                let mut p = Poly::zero(vars.count);
                if let Some(v) = vars.var(i, c) {
                    p = p.add(&Poly::var(vars.count, v));
                }
                for (row, &piv) in basis.iter().zip(&pivots) {
                    if row[c].is_zero() {
                        continue;
                    }
                    if let Some(v) = vars.var(i, piv) {
                        p = p.add(&Poly::linear(vars.count, v, -row[c].clone()));
                    }
                }
                if !p.is_zero() {
                    out.push(p);
                }
            }
        }
    }
    out
}

/// Dead-branch detector: a fully assigned all-zero row or column of the
/// unknown matrix makes it singular no matter how the rest is filled.
fn singular_prune(n: usize, vars: &VarTable, assignment: &[Option<Scalar>]) -> bool {
    'rows: for i in 0..n {
        for j in 0..n {
            match vars.var(i, j) {
                Some(v) => match &assignment[v] {
                    Some(x) if x.is_zero() => {}
                    Some(_) => continue 'rows,
                    None => continue 'rows,
                },
                None => {}
            }
        }
        return true;
    }
    'cols: for j in 0..n {
        for i in 0..n {
            match vars.var(i, j) {
                Some(v) => match &assignment[v] {
                    Some(x) if x.is_zero() => {}
                    Some(_) => continue 'cols,
                    None => continue 'cols,
                },
                None => {}
            }
        }
        return true;
    }
    false
}

/// Bounded search for an explicit isomorphism from `a` to `b`.
pub fn search_isomorphism(a: &AlgebraTable, b: &AlgebraTable, budget: Budget) -> SearchOutcome {
    if a.dim() != b.dim() {
        return SearchOutcome::Incompatible("dim");
    }
    let fa = fingerprint(a);
    let fb = fingerprint(b);
    if let Some(component) = fa.first_difference(&fb) {
        return SearchOutcome::Incompatible(component);
    }
    if a == b {
        return SearchOutcome::Found(IsoCertificate { p: Matrix::identity(a.dim()) });
    }
    let n = a.dim();
    let (chain_a, chain_b) = matched_chains(a, b);
    let ua = adapted_basis(n, &chain_a);
    let ub = adapted_basis(n, &chain_b);
    let a2 = a.change_basis(&ua).expect("adapted basis is invertible");
    let b2 = b.change_basis(&ub).expect("adapted basis is invertible");
    let dims: Vec<usize> = chain_a.iter().map(Subspace::dim).collect();
    let supports = row_supports(n, &dims);
    let vars = VarTable::new(n, &supports);
    let target = |i: usize, j: usize, r: usize| {
        Poly::constant(vars.count, b2.basis_bracket(i, j)[r].clone())
    };
    let mut system = change_basis_system(&a2, &target, &vars, vars.count);
    system.extend(membership_constraints(a, b, &ua, &ub, &vars));
    let mut nodes = budget.nodes;
    let candidates = var_candidates(n, &vars, 0);
    let accept = |sol: &[Scalar]| {
        let p = assemble_matrix(n, &vars, sol);
        !p.det().is_zero()
    };
    let priorities = var_priorities(n, &vars, &supports, 0);
    let prune = |assignment: &[Option<Scalar>]| singular_prune(n, &vars, assignment);
    let sol = solver::solve_system_with(
        &system,
        vars.count,
        &mut nodes,
        budget.height,
        &candidates,
        &priorities,
        &prune,
        &accept,
    );
    match sol {
        Some(sol) => {
            let p_adapted = assemble_matrix(n, &vars, &sol);
            let Some(ub_inv) = ub.inverse() else { return SearchOutcome::NotFound };
            let p = ub_inv.mul(&p_adapted).mul(&ua);
            match verify_isomorphism(a, b, &p) {
                Ok(true) => SearchOutcome::Found(IsoCertificate { p }),
                _ => SearchOutcome::NotFound,
            }
        }
        None => SearchOutcome::NotFound,
    }
}

/// Search for an isomorphism from `a` onto some member of a parameterized
/// family, solving for the parameters alongside the basis change. Returns
/// the instantiating parameters and the verified certificate.
pub fn search_family_symbolic(
    a: &AlgebraTable,
    spec: &FamilySpec,
    budget: Budget,
) -> Option<(FamilyParams, Matrix)> {
    let n = a.dim();
    if spec.dim != n {
        return None;
    }
    // Structural alignment available for every parameter value: the
    // template's nilradical spans its leading basis vectors.
    let claimed_nr = spec.claimed.nilradical_dim?;
    let nr_a = structure::nilradical(a).ok()?;
    if nr_a.dim() != claimed_nr {
        return None;
    }
    let chain_a = vec![nr_a];
    let ua = adapted_basis(n, &chain_a);
    let a2 = a.change_basis(&ua).expect("adapted basis is invertible");
    let supports = row_supports(n, &[claimed_nr]);
    let vars = VarTable::new(n, &supports);
    let nparams = spec.params.len();
    let nvars = vars.count + nparams;
    let param_var = |name: &str| -> usize {
        vars.count + spec.params.iter().position(|p| p == name).unwrap()
    };
    // Template coefficients as polynomials in the parameter variables.
    let mut template = vec![Poly::zero(nvars); n * n * n];
    for (i, j, k, expr) in &spec.template {
        let mut p = Poly::constant(nvars, expr.constant.clone());
        for (c, name) in &expr.terms {
            p = p.add(&Poly::linear(nvars, param_var(name), c.clone()));
        }
        template[((i - 1) * n + (j - 1)) * n + (k - 1)] = p;
    }
    let target = |i: usize, j: usize, r: usize| template[(i * n + j) * n + r].clone();
    let system = change_basis_system(&a2, &target, &vars, nvars);
    let mut nodes = budget.nodes;
    let candidates = var_candidates(n, &vars, nparams);
    let accept = |sol: &[Scalar]| {
        let p = assemble_matrix(n, &vars, sol);
        if p.det().is_zero() {
            return false;
        }
        let params: FamilyParams = spec
            .params
            .iter()
            .enumerate()
            .map(|(k, name)| (name.clone(), sol[vars.count + k].clone()))
            .collect();
        spec.constraint.check(&params).is_ok()
    };
    let priorities = var_priorities(n, &vars, &supports, nparams);
    let prune = |assignment: &[Option<Scalar>]| singular_prune(n, &vars, assignment);
    let sol = solver::solve_system_with(
        &system,
        nvars,
        &mut nodes,
        budget.height,
        &candidates,
        &priorities,
        &prune,
        &accept,
    )?;
    let p_adapted = assemble_matrix(n, &vars, &sol);
    let params: FamilyParams = spec
        .params
        .iter()
        .enumerate()
        .map(|(k, name)| (name.clone(), sol[vars.count + k].clone()))
        .collect();
    let concrete = crate::catalog::instantiate(&spec.id, &params).ok()?;
    let p = p_adapted.mul(&ua);
    match verify_isomorphism(a, &concrete, &p) {
        Ok(true) => Some((params, p)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{instantiate, parse_params};

    fn fam(id: &str, params: &str) -> AlgebraTable {
        instantiate(id, &parse_params(params).unwrap()).unwrap()
    }

    #[test]
    fn verify_identity() {
        let a = fam("L2", "");
        assert!(verify_isomorphism(&a, &a, &Matrix::identity(4)).unwrap());
    }

    #[test]
    fn verify_lambda4_zero_case() {
        // e2' = e1 - e2, e1' = e2 maps lambda4(0) onto lambda4p_beta(0).
        let a = fam("lambda4", "alpha=0");
        let b = fam("lambda4p_beta", "beta=0");
        let p = Matrix::from_i64(&[&[0, 1, 0], &[1, -1, 0], &[0, 0, 1]]);
        assert!(verify_isomorphism(&a, &b, &p).unwrap());
    }

    #[test]
    fn verify_lemma_composite_alpha_minus_two() {
        // alpha = -2, sqrt(1-4a) = 3, beta = 1/2: composed transformation
        // e1' = (e1+e2)/3, e2' = e1 - e2/2.
        let a = fam("lambda4", "alpha=-2");
        let b = fam("lambda4p_beta", "beta=1/2");
        let third = Scalar::from_frac(1, 3);
        let p = Matrix::from_rows(vec![
            vec![third.clone(), third, Scalar::zero()],
            vec![Scalar::one(), Scalar::from_frac(-1, 2), Scalar::zero()],
            vec![Scalar::zero(), Scalar::zero(), Scalar::one()],
        ]);
        assert!(verify_isomorphism(&a, &b, &p).unwrap());
    }

    #[test]
    fn mu1_not_isomorphic_to_abelian() {
        let a = fam("mu1", "");
        let b = AlgebraTable::new(2);
        assert!(!verify_isomorphism(&a, &b, &Matrix::identity(2)).unwrap());
        match search_isomorphism(&a, &b, Budget::default()) {
            SearchOutcome::Incompatible(_) => {}
            other => panic!("expected Incompatible, got {:?}", other),
        }
    }

    #[test]
    fn search_finds_lemma_pairs() {
        for (alpha, beta) in [("0", "0"), ("-2", "1/2"), ("3/16", "-1/3")] {
            let a = fam("lambda4", &format!("alpha={}", alpha));
            let b = fam("lambda4p_beta", &format!("beta={}", beta));
            match search_isomorphism(&a, &b, Budget::default()) {
                SearchOutcome::Found(cert) => {
                    assert!(verify_isomorphism(&a, &b, &cert.p).unwrap());
                }
                other => panic!("alpha={} beta={}: expected Found, got {:?}", alpha, beta, other),
            }
        }
    }

    #[test]
    fn search_round_trip_random_basis() {
        let a = fam("L9", "gamma=3");
        let p = Matrix::from_i64(&[
            &[1, 0, 2, 0],
            &[1, 1, 0, 0],
            &[0, 0, 1, 0],
            &[0, 2, 0, 1],
        ]);
        let b = a.change_basis(&p).unwrap();
        match search_isomorphism(&a, &b, Budget::default()) {
            SearchOutcome::Found(cert) => {
                assert!(verify_isomorphism(&a, &b, &cert.p).unwrap());
                // the inverse certifies the reverse direction
                let inv = cert.p.inverse().unwrap();
                assert!(verify_isomorphism(&b, &a, &inv).unwrap());
            }
            other => panic!("expected Found, got {:?}", other),
        }
    }

    #[test]
    fn incompatible_r2_r3() {
        let out = search_isomorphism(&fam("R2", ""), &fam("R3", ""), Budget::default());
        assert!(matches!(out, SearchOutcome::Incompatible(_)));
    }

    #[test]
    fn symbolic_family_search_recovers_parameters() {
        let a = fam("L20", "mu2=2,mu3=3");
        let p = Matrix::from_i64(&[
            &[1, 1, 0, 0],
            &[0, 1, 1, 0],
            &[0, 0, 1, 0],
            &[2, 0, 1, 1],
        ]);
        let moved = a.change_basis(&p).unwrap();
        let spec = crate::catalog::family("L20").unwrap();
        let (params, cert) =
            search_family_symbolic(&moved, spec, Budget::default()).expect("match");
        let target = instantiate("L20", &params).unwrap();
        assert!(verify_isomorphism(&moved, &target, &cert).unwrap());
        let canon = crate::catalog::canonical_params("L20", &params);
        let expected = crate::catalog::canonical_params("L20", &parse_params("mu2=2,mu3=3").unwrap());
        assert_eq!(canon, expected);
    }
}

/// Development helper: evaluate the generated system at a known
/// certificate and report nonzero residuals.
pub fn debug_system_residual(a: &AlgebraTable, b: &AlgebraTable, known: &Matrix) {
    let n = a.dim();
    let (chain_a, chain_b) = matched_chains(a, b);
    println!("chain dims: {:?}", chain_a.iter().map(Subspace::dim).collect::<Vec<_>>());
    let ua = adapted_basis(n, &chain_a);
    let ub = adapted_basis(n, &chain_b);
    let a2 = a.change_basis(&ua).unwrap();
    let b2 = b.change_basis(&ub).unwrap();
    let dims: Vec<usize> = chain_a.iter().map(Subspace::dim).collect();
    let supports = row_supports(n, &dims);
    println!("supports: {:?}", supports);
    let vars = VarTable::new(n, &supports);
    let target =
        |i: usize, j: usize, r: usize| Poly::constant(vars.count, b2.basis_bracket(i, j)[r].clone());
    let mut system = change_basis_system(&a2, &target, &vars, vars.count);
    let memb = membership_constraints(a, b, &ua, &ub, &vars);
    println!("system size: {} polys (+{} membership), {} vars", system.len(), memb.len(), vars.count);
    system.extend(memb);
    // expected adapted solution: p' = ub * known * ua^{-1}
    let expected = ub.mul(known).mul(&ua.inverse().unwrap());
    println!("expected p' = {:?}", expected);
    let mut values = vec![Scalar::zero(); vars.count];
    let mut pattern_ok = true;
    for i in 0..n {
        for j in 0..n {
            match vars.var(i, j) {
                Some(v) => values[v] = expected.get(i, j).clone(),
                None => {
                    if !expected.get(i, j).is_zero() {
                        pattern_ok = false;
                    }
                }
            }
        }
    }
    println!("pattern ok: {}", pattern_ok);
    let bad = system.iter().filter(|p| !p.eval(&values).is_zero()).count();
    println!("nonzero residuals: {}/{}", bad, system.len());
}
