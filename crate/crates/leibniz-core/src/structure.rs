//! Structural invariants: lower central / derived series, right
//! annihilator, nilradical, derivation space, and nil-independence.


use crate::algebra::{unit, AlgebraTable};
use crate::linalg::{Matrix, Quotient, Subspace, Vector};
use crate::scalar::Scalar;
use crate::solver::{self, Poly};
use crate::{Budget, Error};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesKind {
    LowerCentral,
    Derived,
}

/// Dimension profile of an ideal series, ending at the first zero or
/// repeated term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesProfile {
    pub kind: SeriesKind,
    pub dims: Vec<usize>,
    /// First step at which the series reaches 0 (1-based, so an abelian
    /// algebra has index 2); `None` when the series stabilizes above zero.
    pub index: Option<usize>,
}

impl SeriesProfile {
    pub fn reaches_zero(&self) -> bool {
        self.index.is_some()
    }
}

/// Right multiplication operator R_x; column j holds `[e_j, x]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorMatrix {
    pub matrix: Matrix,
    pub source: Vector,
}

impl OperatorMatrix {
    /// The same operator in the row convention used for derivation
    /// matrices (`d(e_i)` = row i).
    pub fn derivation_matrix(&self) -> Matrix {
        self.matrix.transpose()
    }
}

/// Canonical basis of the derivation algebra, echelonized over the n^2
/// matrix coordinates (row-major).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationSpace {
    pub algebra_dim: usize,
    pub basis: Vec<Matrix>,
}

impl DerivationSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Verdict of the nil-independence check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NilIndependence {
    Verified,
    /// Some nonzero combination is nilpotent. The coefficients are given
    /// when a Gaussian-rational witness exists; `None` certifies failure
    /// over the complex numbers without an exhibitable rational witness.
    Refuted { witness: Option<Vec<Scalar>> },
    Unknown,
}

/// Chain of lower central series terms `L^1 ⊇ L^2 ⊇ ...` until the first
/// zero or repeat (the stabilized term is included once).
pub fn lower_central_chain(a: &AlgebraTable) -> Vec<Subspace> {
    let mut chain = vec![a.full_space()];
    loop {
        let last = chain.last().unwrap();
        if last.is_zero() {
            break;
        }
        let next = a.product_space(last, &a.full_space()).unwrap();
        if &next == last {
            break;
        }
        chain.push(next);
    }
    chain
}

pub fn derived_chain(a: &AlgebraTable) -> Vec<Subspace> {
    let mut chain = vec![a.full_space()];
    loop {
        let last = chain.last().unwrap();
        if last.is_zero() {
            break;
        }
        let next = a.product_space(last, last).unwrap();
        if &next == last {
            break;
        }
        chain.push(next);
    }
    chain
}

fn profile(kind: SeriesKind, chain: &[Subspace]) -> SeriesProfile {
    let dims: Vec<usize> = chain.iter().map(Subspace::dim).collect();
    let index = if *dims.last().unwrap() == 0 { Some(dims.len()) } else { None };
    SeriesProfile { kind, dims, index }
}

pub fn lower_central_series(a: &AlgebraTable) -> SeriesProfile {
    profile(SeriesKind::LowerCentral, &lower_central_chain(a))
}

pub fn derived_series(a: &AlgebraTable) -> SeriesProfile {
    profile(SeriesKind::Derived, &derived_chain(a))
}

pub fn is_nilpotent_algebra(a: &AlgebraTable) -> bool {
    lower_central_series(a).reaches_zero()
}

pub fn is_solvable(a: &AlgebraTable) -> bool {
    derived_series(a).reaches_zero()
}

/// `R(L) = {x : [y, x] = 0 for all y}` as a canonical subspace.
pub fn right_annihilator(a: &AlgebraTable) -> Subspace {
    let n = a.dim();
    // Stack the constraints [e_i, z] = 0: rows indexed by (i, k).
    let mut m = Matrix::zero(n * n, n);
    for i in 0..n {
        for j in 0..n {
            let prod = a.basis_bracket(i, j);
            for (k, c) in prod.into_iter().enumerate() {
                if !c.is_zero() {
                    m.set(i * n + k, j, c);
                }
            }
        }
    }
    m.kernel()
}

/// `{x : [x, y] = 0 for all y}`.
pub fn left_annihilator(a: &AlgebraTable) -> Subspace {
    let n = a.dim();
    let mut m = Matrix::zero(n * n, n);
    for j in 0..n {
        for i in 0..n {
            let prod = a.basis_bracket(i, j);
            for (k, c) in prod.into_iter().enumerate() {
                if !c.is_zero() {
                    m.set(j * n + k, i, c);
                }
            }
        }
    }
    m.kernel()
}

/// Two-sided annihilator.
pub fn annihilator(a: &AlgebraTable) -> Subspace {
    right_annihilator(a).intersect(&left_annihilator(a))
}

/// R_x with the spec's column convention.
pub fn operator_matrix(a: &AlgebraTable, x: &[Scalar]) -> Result<OperatorMatrix, Error> {
    if x.len() != a.dim() {
        return Err(Error::DimensionMismatch("operator source length".into()));
    }
    let n = a.dim();
    let mut m = Matrix::zero(n, n);
    for j in 0..n {
        let img = a.bracket(&unit(n, j), x)?;
        for (k, c) in img.into_iter().enumerate() {
            m.set(k, j, c);
        }
    }
    Ok(OperatorMatrix { matrix: m, source: x.to_vec() })
}

pub fn operator_nilpotent(m: &Matrix) -> bool {
    m.is_nilpotent()
}

/// Constraint matrix of the derivation equations over the n^2 unknowns
/// `d_{pq}` (row-major, row convention `d(e_p) = sum_q d_{pq} e_q`).
pub fn derivation_constraint_matrix(a: &AlgebraTable) -> Matrix {
    let n = a.dim();
    let var = |p: usize, q: usize| p * n + q;
    let mut rows: Vec<Vector> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let cij = a.basis_bracket(i, j);
            // For each output coordinate m:
            //   sum_k c_{ij}^k d_{km} - sum_p d_{ip} c_{pj}^m - sum_q d_{jq} c_{iq}^m = 0
            for m in 0..n {
                let mut row = vec![Scalar::zero(); n * n];
                for (k, ck) in cij.iter().enumerate() {
                    if !ck.is_zero() {
                        row[var(k, m)] += ck;
                    }
                }
                for p in 0..n {
                    let c = a.basis_bracket(p, j)[m].clone();
                    if !c.is_zero() {
                        row[var(i, p)] -= &c;
                    }
                }
                for q in 0..n {
                    let c = a.basis_bracket(i, q)[m].clone();
                    if !c.is_zero() {
                        row[var(j, q)] -= &c;
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    if rows.is_empty() {
        Matrix::zero(1, n * n)
    } else {
        Matrix::from_rows(rows)
    }
}

pub fn derivation_space(a: &AlgebraTable) -> DerivationSpace {
    let n = a.dim();
    let kernel = derivation_constraint_matrix(a).kernel();
    let basis = kernel
        .basis()
        .iter()
        .map(|flat| Matrix::from_fn(n, n, |p, q| flat[p * n + q].clone()))
        .collect();
    DerivationSpace { algebra_dim: n, basis }
}

/// Leibniz product rule on all basis pairs; `d` uses the row convention.
pub fn is_derivation(a: &AlgebraTable, d: &Matrix) -> Result<bool, Error> {
    let n = a.dim();
    if d.nrows() != n || d.ncols() != n {
        return Err(Error::DimensionMismatch("derivation matrix must be dim x dim".into()));
    }
    for i in 0..n {
        let di = d.row(i);
        for j in 0..n {
            let dj = d.row(j);
            let cij = a.basis_bracket(i, j);
            let lhs = d.vec_mul(&cij);
            let rhs1 = a.bracket(&di, &unit(n, j))?;
            let rhs2 = a.bracket(&unit(n, i), &dj)?;
            for m in 0..n {
                if lhs[m] != &rhs1[m] + &rhs2[m] {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Nilradical
// ---------------------------------------------------------------------------

/// The maximal nilpotent ideal of a solvable table.
///
/// Method: start from the nilpotent ideal I = L^2. Every subspace between
/// I and L is automatically a two-sided ideal, and the nilradical is
/// exactly `{w : I + span(w) is nilpotent}`. Linear trace constraints on
/// the canonical ideal flag cut the search space S down (iterated to a
/// fixpoint); if S itself is nilpotent it equals the nilradical. Otherwise
/// the quotient S/I is searched: dimension one is a single containment
/// test, dimension two reduces to Gaussian-rational roots of the gcd of
/// the characteristic-coefficient forms. Anything the procedure cannot
/// certify maximal is reported as undetermined rather than guessed.
pub fn nilradical(a: &AlgebraTable) -> Result<Subspace, Error> {
    if !a.leibniz_check().passed() {
        return Err(Error::Invalid("nilradical requires a Leibniz table".into()));
    }
    if !is_solvable(a) {
        return Err(Error::NotSolvable);
    }
    if is_nilpotent_algebra(a) {
        return Ok(a.full_space());
    }
    let n = a.dim();
    let square = a.square();
    if !restricted_nilpotent(a, &square) {
        // The square of a solvable algebra is a nilpotent ideal; if the
        // computation cannot confirm that, refuse to guess.
        return Err(Error::NilradicalUndetermined);
    }

    // Iterate linear trace constraints until the candidate space is stable.
    let mut s = a.full_space();
    loop {
        let flag = trace_flag(a, &s);
        let next = trace_constraint_space(a, &flag);
        let next = next.intersect(&s);
        if next == s {
            break;
        }
        s = next;
    }

    if restricted_nilpotent(a, &s) {
        return Ok(s);
    }
    if !s.contains(&square) {
        return Err(Error::NilradicalUndetermined);
    }
    let quot = Quotient::new(&s, &square);
    match quot.dim() {
        0 => Ok(square),
        1 => {
            let w = &quot.reps[0];
            let cand = square.sum(&Subspace::from_spanning(n, vec![w.clone()]));
            if restricted_nilpotent(a, &cand) {
                Ok(cand)
            } else {
                Ok(square)
            }
        }
        2 => {
            let mut found: Vec<Vector> = Vec::new();
            for dir in quotient_line_candidates(a, &s, &quot)? {
                let cand = square.sum(&Subspace::from_spanning(n, vec![dir.clone()]));
                if restricted_nilpotent(a, &cand) {
                    found.push(dir);
                }
            }
            let mut result = square.clone();
            for v in found {
                result = result.sum(&Subspace::from_spanning(n, vec![v]));
            }
            if restricted_nilpotent(a, &result) {
                Ok(result)
            } else {
                Err(Error::NilradicalUndetermined)
            }
        }
        _ => Err(Error::NilradicalUndetermined),
    }
}

/// Canonical ideal chain used for the trace constraints: lower central and
/// derived terms of the whole algebra plus the candidate space's terms.
fn trace_flag(a: &AlgebraTable, s: &Subspace) -> Vec<Subspace> {
    let mut flag: Vec<Subspace> = Vec::new();
    let mut push = |sub: Subspace| {
        if !sub.is_zero() && !flag.contains(&sub) {
            flag.push(sub);
        }
    };
    for t in lower_central_chain(a) {
        push(t);
    }
    for t in derived_chain(a) {
        push(t);
    }
    push(s.clone());
    // Series of s as a subalgebra: products stay inside s (it contains L^2).
    let mut term = s.clone();
    loop {
        let next = a.product_space(&term, s).unwrap();
        if next == term || next.is_zero() {
            break;
        }
        push(next.clone());
        term = next;
    }
    flag
}

/// `{w : trace of R_w restricted to each flag term is zero}`.
fn trace_constraint_space(a: &AlgebraTable, flag: &[Subspace]) -> Subspace {
    let n = a.dim();
    let mut rows: Vec<Vector> = Vec::new();
    for t in flag {
        // trace(R_w |_T) as a linear functional of w.
        let mut row = vec![Scalar::zero(); n];
        let mut ok = true;
        for basis_idx in 0..n {
            // contribution of w = e_basis_idx
            let op = operator_matrix(a, &unit(n, basis_idx)).unwrap();
            match restricted_trace(&op.matrix, t) {
                Some(tr) => row[basis_idx] = tr,
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok && row.iter().any(|x| !x.is_zero()) {
            rows.push(row);
        }
    }
    if rows.is_empty() {
        return Subspace::full(n);
    }
    Matrix::from_rows(rows).kernel()
}

/// Trace of `m` restricted to an invariant subspace (None if not invariant).
fn restricted_trace(m: &Matrix, t: &Subspace) -> Option<Scalar> {
    let mut tr = Scalar::zero();
    for row in t.basis() {
        let img = m.mul_vec(row);
        let coords = t.coordinates(&img)?;
        let p = row.iter().position(|x| !x.is_zero()).unwrap();
        // row has leading 1 at p; its own coefficient in coords aligns with
        // its index in the echelon basis.
        let idx = t.basis().iter().position(|r| r.iter().position(|x| !x.is_zero()) == Some(p)).unwrap();
        tr += &coords[idx];
    }
    Some(tr)
}

/// Is the restriction of `a` to `sub` a nilpotent algebra? (`sub` must be
/// bracket-closed; non-closed candidates are rejected.)
fn restricted_nilpotent(a: &AlgebraTable, sub: &Subspace) -> bool {
    if sub.is_zero() {
        return true;
    }
    match a.restrict_to(sub) {
        Ok(t) => is_nilpotent_algebra(&t),
        Err(_) => false,
    }
}

/// Candidate quotient directions for the 2-dimensional S/I search:
/// Gaussian-rational roots of the gcd of the characteristic-coefficient
/// binary forms of `R_w|_S` over the quotient coordinates.
fn quotient_line_candidates(
    a: &AlgebraTable,
    s: &Subspace,
    quot: &Quotient,
) -> Result<Vec<Vector>, Error> {
    let n = a.dim();
    let reps = &quot.reps;
    debug_assert_eq!(reps.len(), 2);
    // R_{s*rep0 + t*rep1} restricted to S, entries linear in (s, t).
    let dim_s = s.dim();
    let mut entries: Vec<Vec<Poly>> = vec![vec![Poly::zero(2); dim_s]; dim_s];
    for (var, rep) in reps.iter().enumerate() {
        let op = operator_matrix(a, rep).unwrap();
        for (i, row) in s.basis().iter().enumerate() {
            let img = op.matrix.mul_vec(row);
            let coords = s.coordinates(&img).ok_or(Error::NilradicalUndetermined)?;
            for (j, c) in coords.into_iter().enumerate() {
                if !c.is_zero() {
                    entries[i][j] = entries[i][j].clone().add(&Poly::linear(2, var, c));
                }
            }
        }
    }
    let forms = solver::char_coefficient_forms(&entries);
    // All-zero forms leave no finite candidate list; refuse to guess.
    let candidates =
        solver::binary_form_common_roots(&forms).ok_or(Error::NilradicalUndetermined)?;
    let mut out = Vec::new();
    for (cs, ct) in candidates {
        let mut v = vec![Scalar::zero(); n];
        for (coef, rep) in [(&cs, &reps[0]), (&ct, &reps[1])] {
            for (t, x) in v.iter_mut().zip(rep.iter()) {
                *t += &(coef * x);
            }
        }
        if v.iter().any(|x| !x.is_zero()) {
            out.push(v);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Nil-independence
// ---------------------------------------------------------------------------

/// Decide whether no nonzero complex combination of `ds` is nilpotent.
///
/// Exact for one or two matrices (gcd of the characteristic-coefficient
/// forms). Three or more: simultaneous triangularization gives an exact
/// linear-rank decision when available; otherwise a bounded elimination
/// plus seeded random sampling, returning `Unknown` when inconclusive.
pub fn nil_independent_check(
    ds: &[Matrix],
    budget: Budget,
    seed: u64,
) -> Result<NilIndependence, Error> {
    if ds.is_empty() {
        return Ok(NilIndependence::Verified);
    }
    let n = ds[0].nrows();
    if ds.iter().any(|m| m.nrows() != n || m.ncols() != n) {
        return Err(Error::DimensionMismatch("matrices must share a square shape".into()));
    }
    match ds.len() {
        1 => {
            if ds[0].is_nilpotent() {
                Ok(NilIndependence::Refuted { witness: Some(vec![Scalar::one()]) })
            } else {
                Ok(NilIndependence::Verified)
            }
        }
        2 => Ok(check_pair(&ds[0], &ds[1])),
        _ => Ok(check_many(ds, budget, seed)),
    }
}

fn check_pair(d1: &Matrix, d2: &Matrix) -> NilIndependence {
    let n = d1.nrows();
    let mut entries: Vec<Vec<Poly>> = vec![vec![Poly::zero(2); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut p = Poly::zero(2);
            if !d1.get(i, j).is_zero() {
                p = p.add(&Poly::linear(2, 0, d1.get(i, j).clone()));
            }
            if !d2.get(i, j).is_zero() {
                p = p.add(&Poly::linear(2, 1, d2.get(i, j).clone()));
            }
            entries[i][j] = p;
        }
    }
    let forms = solver::char_coefficient_forms(&entries);
    if !solver::binary_forms_have_common_projective_root(&forms) {
        return NilIndependence::Verified;
    }
    // All-zero forms mean every combination is nilpotent; d1 itself works.
    let roots = solver::binary_form_common_roots(&forms)
        .unwrap_or_else(|| vec![(Scalar::one(), Scalar::zero())]);
    for (s, t) in roots {
        let combo = d1.scale(&s).add(&d2.scale(&t));
        if combo.is_nilpotent() && !(s.is_zero() && t.is_zero()) {
            return NilIndependence::Refuted { witness: Some(vec![s, t]) };
        }
    }
    // A common complex root exists but none is Gaussian-rational.
    NilIndependence::Refuted { witness: None }
}

fn check_many(ds: &[Matrix], budget: Budget, seed: u64) -> NilIndependence {
    let n = ds[0].nrows();
    // Simultaneous triangularization via a common invariant flag makes
    // nilpotency a linear condition on the diagonal functionals.
    if let Some(diag_rows) = common_triangular_diagonals(ds) {
        let m = Matrix::from_rows(diag_rows);
        let k = m.kernel();
        if k.is_zero() {
            return NilIndependence::Verified;
        }
        let witness = k.basis()[0].clone();
        return NilIndependence::Refuted { witness: Some(witness) };
    }
    // Seeded random falsification.
    use rand_core::{RngCore, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..256 {
        let coeffs: Vec<Scalar> = (0..ds.len())
            .map(|_| Scalar::from_int((rng.next_u32() % 7) as i64 - 3))
            .collect();
        if coeffs.iter().all(Scalar::is_zero) {
            continue;
        }
        let mut combo = Matrix::zero(n, n);
        for (c, d) in coeffs.iter().zip(ds) {
            combo = combo.add(&d.scale(c));
        }
        if combo.is_nilpotent() {
            return NilIndependence::Refuted { witness: Some(coeffs) };
        }
    }
    // Bounded elimination on the vanishing of all characteristic
    // coefficients, looking for any nonzero solution.
    let k = ds.len();
    let mut entries: Vec<Vec<Poly>> = vec![vec![Poly::zero(k); n]; n];
    for (var, d) in ds.iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                if !d.get(i, j).is_zero() {
                    entries[i][j] =
                        entries[i][j].clone().add(&Poly::linear(k, var, d.get(i, j).clone()));
                }
            }
        }
    }
    let forms = solver::char_coefficient_forms(&entries);
    match solver::find_nonzero_solution(&forms, budget) {
        Some(sol) => {
            let mut combo = Matrix::zero(n, n);
            for (c, d) in sol.iter().zip(ds) {
                combo = combo.add(&d.scale(c));
            }
            if combo.is_nilpotent() && sol.iter().any(|c| !c.is_zero()) {
                NilIndependence::Refuted { witness: Some(sol) }
            } else {
                NilIndependence::Unknown
            }
        }
        None => NilIndependence::Unknown,
    }
}

/// Try to find a common complete invariant flag; returns the diagonal
/// functional rows (one row per matrix? no: one row per flag level, one
/// column per matrix) — entry (level, idx) = diagonal action of ds[idx].
fn common_triangular_diagonals(ds: &[Matrix]) -> Option<Vec<Vector>> {
    let n = ds[0].nrows();
    // Build a common flag greedily: repeatedly find a common eigenvector of
    // the induced maps on the current quotient. Works for commuting and
    // diagonal families, which is all the exactness claims rely on.
    let mut flag_vecs: Vec<Vector> = Vec::new();
    let mut diag_rows: Vec<Vector> = Vec::new();
    for _ in 0..n {
        let sub = Subspace::from_spanning(n, flag_vecs.clone());
        let quot = Quotient::new(&Subspace::full(n), &sub);
        let induced: Vec<Matrix> = ds
            .iter()
            .map(|d| quot.induced_matrix(|v| d.mul_vec(v)).ok())
            .collect::<Option<Vec<_>>>()?;
        let (vec_q, eigs) = common_eigenvector(&induced)?;
        // Lift back to the ambient space.
        let mut lifted = vec![Scalar::zero(); n];
        for (c, rep) in vec_q.iter().zip(&quot.reps) {
            for (t, x) in lifted.iter_mut().zip(rep) {
                *t += &(c * x);
            }
        }
        flag_vecs.push(lifted);
        diag_rows.push(eigs);
    }
    Some(diag_rows)
}

/// A vector that is an eigenvector of every matrix, with its eigenvalues.
fn common_eigenvector(ms: &[Matrix]) -> Option<(Vector, Vector)> {
    let n = ms[0].nrows();
    if n == 0 {
        return None;
    }
    // Eigenvalues of the first matrix (column convention: act on the left
    // as v -> M v? these induced matrices are row convention), then refine.
    // Use the transpose so kernel computations see column vectors.
    let first = ms[0].transpose();
    let eigs = solver::rational_eigenvalues(&first);
    for lam in eigs {
        let shifted = first.sub(&Matrix::identity(n).scale(&lam));
        let eigenspace = shifted.kernel();
        if eigenspace.is_zero() {
            continue;
        }
        // Common refinement across the rest.
        let mut space = eigenspace;
        let mut eigenvals = vec![lam.clone()];
        let mut ok = true;
        for m in &ms[1..] {
            let mt = m.transpose();
            let mut next: Option<(Subspace, Scalar)> = None;
            for lam2 in solver::rational_eigenvalues(&mt) {
                let shifted2 = mt.sub(&Matrix::identity(n).scale(&lam2));
                let cut = shifted2.kernel().intersect(&space);
                if !cut.is_zero() {
                    next = Some((cut, lam2));
                    break;
                }
            }
            match next {
                Some((cut, lam2)) => {
                    space = cut;
                    eigenvals.push(lam2);
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok && !space.is_zero() {
            return Some((space.basis()[0].clone(), eigenvals));
        }
    }
    None
}

/// Greedy + exhaustive search for a maximal nil-independent set inside the
/// derivation space; `exact` marks results the procedure can certify.
pub fn max_nil_independent(
    a: &AlgebraTable,
    budget: Budget,
    seed: u64,
) -> (usize, Vec<Matrix>, bool) {
    let n = a.dim();
    if a.is_abelian() {
        // Der = all matrices; the diagonal matrices are nil-independent and
        // any (n+1)-dimensional subspace meets the nilpotent cone, so n is
        // exact by the dimension count.
        let cert: Vec<Matrix> = (0..n)
            .map(|i| {
                let mut m = Matrix::zero(n, n);
                m.set(i, i, Scalar::one());
                m
            })
            .collect();
        return (n, cert, true);
    }
    let der = derivation_space(a);
    let basis = der.basis.clone();
    // Candidate pool: echelon basis plus pairwise sums.
    let mut pool = basis.clone();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            pool.push(basis[i].add(&basis[j]));
        }
    }
    let mut chosen: Vec<Matrix> = Vec::new();
    for cand in &pool {
        if chosen.len() == n {
            break;
        }
        let mut trial = chosen.clone();
        trial.push(cand.clone());
        if matches!(
            nil_independent_check(&trial, budget, seed),
            Ok(NilIndependence::Verified)
        ) {
            chosen = trial;
        }
    }
    let lower = chosen.len();
    // Exactness: the universal cap dim(L) (nilpotent-cone dimension count),
    // or derivation spaces of dimension <= 2 where subspaces are searched
    // completely.
    let exact = lower == n || der.dim() <= 2;
    (lower, chosen, exact)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mu1() -> AlgebraTable {
        let mut t = AlgebraTable::new(2);
        t.set(0, 0, 1, Scalar::one());
        t
    }

    fn lambda6() -> AlgebraTable {
        let mut t = AlgebraTable::new(3);
        t.set(0, 0, 1, Scalar::one());
        t.set(1, 0, 2, Scalar::one());
        t
    }

    #[test]
    fn series_mu1() {
        let p = lower_central_series(&mu1());
        assert_eq!(p.dims, vec![2, 1, 0]);
        assert_eq!(p.index, Some(3));
    }

    #[test]
    fn series_lambda6() {
        let p = lower_central_series(&lambda6());
        assert_eq!(p.dims, vec![3, 2, 1, 0]);
        assert_eq!(p.index, Some(4));
    }

    #[test]
    fn series_abelian() {
        let p = lower_central_series(&AlgebraTable::new(3));
        assert_eq!(p.dims, vec![3, 0]);
        assert_eq!(p.index, Some(2));
        let d = derived_series(&AlgebraTable::new(5));
        assert_eq!(d.dims, vec![5, 0]);
    }

    #[test]
    fn derivations_mu1() {
        let d = derivation_space(&mu1());
        assert_eq!(d.dim(), 2);
        for m in &d.basis {
            assert!(is_derivation(&mu1(), m).unwrap());
        }
        // diag(1,1) violates the forced d(e2) = 2 a1 e2.
        assert!(!is_derivation(&mu1(), &Matrix::identity(2)).unwrap());
        assert!(is_derivation(&mu1(), &Matrix::zero(2, 2)).unwrap());
    }

    #[test]
    fn derivation_constraints_kernel_dim() {
        assert_eq!(derivation_constraint_matrix(&mu1()).kernel().dim(), 2);
    }

    #[test]
    fn rx_is_derivation() {
        let t = lambda6();
        for i in 0..3 {
            let rx = operator_matrix(&t, &unit(3, i)).unwrap();
            assert!(is_derivation(&t, &rx.derivation_matrix()).unwrap());
        }
    }

    #[test]
    fn nilradical_abelian_is_whole() {
        let a = AlgebraTable::new(4);
        assert_eq!(nilradical(&a).unwrap(), Subspace::full(4));
    }

    #[test]
    fn nil_independent_mu1_cases() {
        let der = derivation_space(&mu1());
        // Echelon basis over (d11, d12, d21, d22): kernel vectors are
        // (1,0,0,2) [a1 = 1] and (0,1,0,0) [a2 = 1].
        let nonnil: Vec<Matrix> = der
            .basis
            .iter()
            .filter(|m| !m.is_nilpotent())
            .cloned()
            .collect();
        assert_eq!(nonnil.len(), 1);
        assert_eq!(
            nil_independent_check(&nonnil, Budget::default(), 0).unwrap(),
            NilIndependence::Verified
        );
        let nil: Vec<Matrix> =
            der.basis.iter().filter(|m| m.is_nilpotent()).cloned().collect();
        assert_eq!(nil.len(), 1);
        assert!(matches!(
            nil_independent_check(&nil, Budget::default(), 0).unwrap(),
            NilIndependence::Refuted { witness: Some(_) }
        ));
    }

    #[test]
    fn nil_independent_diagonal_pair() {
        let d1 = Matrix::from_i64(&[&[1, 0], &[0, 0]]);
        let d2 = Matrix::from_i64(&[&[0, 0], &[0, 1]]);
        assert_eq!(
            nil_independent_check(&[d1, d2], Budget::default(), 0).unwrap(),
            NilIndependence::Verified
        );
    }

    #[test]
    fn max_nil_independent_small() {
        let (b, cert, exact) = max_nil_independent(&mu1(), Budget::default(), 0);
        assert_eq!((b, exact), (1, true));
        assert_eq!(cert.len(), 1);
        let (b2, _, exact2) = max_nil_independent(&AlgebraTable::new(2), Budget::default(), 0);
        assert_eq!((b2, exact2), (2, true));
        let (b3, _, exact3) = max_nil_independent(&AlgebraTable::new(3), Budget::default(), 0);
        assert_eq!((b3, exact3), (3, true));
    }
}
