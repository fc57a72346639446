//! Basis-independent fingerprints: a vector of invariants used as a sound
//! non-isomorphism filter.
//!
//! Every component is invariant under change of basis (the property suite
//! checks this on seeded random basis changes). Beyond dimension counts the
//! fingerprint carries three finer invariants: a normalized binary form of
//! the bracket pairing (when the square ideal is a line), scale-normalized
//! right/left weight multisets of the complement action on the nilradical
//! (codimension-one solvable case), and the rank/discriminant class of the
//! square map's quadratic form.

use serde::Serialize;

use crate::algebra::AlgebraTable;
use crate::linalg::{Matrix, Quotient, Subspace, Vector};
use crate::scalar::Scalar;
use crate::solver::{self, Poly};
use crate::structure;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightProfile {
    /// Canonically rescaled sorted multiset of graded right-action
    /// eigenvalues on the nilradical.
    pub right: Vec<String>,
    pub left: Vec<String>,
    /// Rank sequences of (M - lambda)^k per eigenvalue for the complement
    /// action on the inner annihilator Z = {v in N : [v,N] = [N,v] = 0},
    /// where shifting the complement generator acts as zero, so the
    /// operators are invariant up to the canonical scale (not just graded).
    pub right_jordan: Vec<(String, Vec<usize>)>,
    pub left_jordan: Vec<(String, Vec<usize>)>,
    /// Normalized gcd forms of the k x k minors of the pencil s*R + t*L on
    /// Z; canonical under conjugation and scaling.
    pub pencil: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fingerprint {
    pub dim: usize,
    pub lower_central: Vec<usize>,
    pub derived: Vec<usize>,
    pub dim_square: usize,
    pub dim_right_annihilator: usize,
    pub dim_derivation_space: usize,
    pub is_lie: bool,
    pub nilradical_dim: Option<usize>,
    pub nilradical: Option<Box<Fingerprint>>,
    pub dim_square_cap_right_annihilator: usize,
    pub dim_left_annihilator: usize,
    pub dim_annihilator: usize,
    /// Value-span dimensions of the symmetrized and antisymmetrized
    /// brackets (both are canonical bilinear maps).
    pub dim_sym_span: usize,
    pub dim_antisym_span: usize,
    /// Normalized coefficients of det(x*G + y*G^T) for the bracket pairing
    /// on L/Ann, defined when dim L^2 = 1.
    pub bracket_form: Option<Vec<String>>,
    pub weight_profile: Option<WeightProfile>,
    pub square_form_rank: usize,
    /// Discriminant of the square-map form when its rank is even; compared
    /// pairwise modulo squares.
    pub square_form_disc: Option<String>,
}

impl Fingerprint {
    /// First component (in fixed order) on which two fingerprints differ;
    /// `None` means the fingerprints are compatible. Sound for
    /// non-isomorphism: a returned name certifies the tables are not
    /// isomorphic.
    pub fn first_difference(&self, other: &Fingerprint) -> Option<&'static str> {
        if self.dim != other.dim {
            return Some("dim");
        }
        if self.lower_central != other.lower_central {
            return Some("lower_central dims");
        }
        if self.derived != other.derived {
            return Some("derived dims");
        }
        if self.dim_square != other.dim_square {
            return Some("dim L^2");
        }
        if self.dim_right_annihilator != other.dim_right_annihilator {
            return Some("dim right_annihilator");
        }
        if self.dim_derivation_space != other.dim_derivation_space {
            return Some("dim derivation_space");
        }
        if self.is_lie != other.is_lie {
            return Some("is_lie");
        }
        if self.nilradical_dim != other.nilradical_dim {
            return Some("nilradical dim");
        }
        match (&self.nilradical, &other.nilradical) {
            (Some(a), Some(b)) => {
                if a.first_difference(b).is_some() {
                    return Some("nilradical fingerprint");
                }
            }
            (None, None) => {}
            _ => return Some("nilradical fingerprint"),
        }
        if self.dim_square_cap_right_annihilator != other.dim_square_cap_right_annihilator {
            return Some("dim L^2 ∩ right_annihilator");
        }
        if self.dim_left_annihilator != other.dim_left_annihilator {
            return Some("dim left_annihilator");
        }
        if self.dim_annihilator != other.dim_annihilator {
            return Some("dim annihilator");
        }
        if self.dim_sym_span != other.dim_sym_span {
            return Some("dim symmetrized bracket span");
        }
        if self.dim_antisym_span != other.dim_antisym_span {
            return Some("dim antisymmetrized bracket span");
        }
        if self.bracket_form != other.bracket_form {
            return Some("bracket pairing form");
        }
        if self.weight_profile != other.weight_profile {
            return Some("weight profile");
        }
        if self.square_form_rank != other.square_form_rank {
            return Some("square form rank");
        }
        if let (Some(d1), Some(d2)) = (&self.square_form_disc, &other.square_form_disc) {
            let a: Scalar = d1.parse().unwrap();
            let b: Scalar = d2.parse().unwrap();
            if !(&a * &b).is_square() {
                return Some("square form discriminant class");
            }
        }
        None
    }
}

pub fn fingerprint(a: &AlgebraTable) -> Fingerprint {
    fingerprint_at_depth(a, 0)
}

fn fingerprint_at_depth(a: &AlgebraTable, depth: usize) -> Fingerprint {
    let lc = structure::lower_central_series(a);
    let derived = structure::derived_series(a);
    let square = a.square();
    let right_ann = structure::right_annihilator(a);
    let left_ann = structure::left_annihilator(a);
    let ann = right_ann.intersect(&left_ann);
    let der_dim = structure::derivation_space(a).dim();
    let is_lie = a.is_lie().is_lie();

    let (nilradical_dim, nilradical_fp, nilradical_sub) = if depth == 0 {
        match structure::nilradical(a) {
            Ok(nr) => {
                let fp = a
                    .restrict_to(&nr)
                    .ok()
                    .map(|t| Box::new(fingerprint_at_depth(&t, depth + 1)));
                (Some(nr.dim()), fp, Some(nr))
            }
            Err(_) => (None, None, None),
        }
    } else {
        (None, None, None)
    };

    let bracket_form = if square.dim() == 1 { bracket_pairing_form(a, &ann) } else { None };

    let weight_profile = match (&nilradical_sub, depth) {
        (Some(nr), 0)
            if nr.dim() + 1 == a.dim() && !structure::is_nilpotent_algebra(a) =>
        {
            weight_profile(a, nr)
        }
        _ => None,
    };

    let (square_form_rank, square_form_disc) = square_form_invariants(a);
    let (dim_sym_span, dim_antisym_span) = part_spans(a);

    Fingerprint {
        dim: a.dim(),
        lower_central: lc.dims,
        derived: derived.dims,
        dim_square: square.dim(),
        dim_right_annihilator: right_ann.dim(),
        dim_derivation_space: der_dim,
        is_lie,
        nilradical_dim,
        nilradical: nilradical_fp,
        dim_square_cap_right_annihilator: square.intersect(&right_ann).dim(),
        dim_left_annihilator: left_ann.dim(),
        dim_annihilator: ann.dim(),
        dim_sym_span,
        dim_antisym_span,
        bracket_form,
        weight_profile,
        square_form_rank,
        square_form_disc,
    }
}

fn fmt_scalars(v: &[Scalar]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// Normalized det(x*G + y*G^T) on L/Ann with values along the 1-dim square
/// ideal; a complete congruence-and-scale invariant of the pairing.
fn bracket_pairing_form(a: &AlgebraTable, ann: &Subspace) -> Option<Vec<String>> {
    let square = a.square();
    debug_assert_eq!(square.dim(), 1);
    let quot = Quotient::new(&a.full_space(), ann);
    let q = quot.dim();
    if q == 0 {
        return Some(vec!["0".into()]);
    }
    // Gram entries: coefficient of [rep_i, rep_j] along the generator.
    let mut gram = vec![vec![Scalar::zero(); q]; q];
    for i in 0..q {
        for j in 0..q {
            let prod = a.bracket(&quot.reps[i], &quot.reps[j]).unwrap();
            let coords = square.coordinates(&prod)?;
            gram[i][j] = coords[0].clone();
        }
    }
    // det(x*G + y*G^T) as a binary form.
    let entries: Vec<Vec<Poly>> = (0..q)
        .map(|i| {
            (0..q)
                .map(|j| {
                    let mut p = Poly::zero(2);
                    if !gram[i][j].is_zero() {
                        p = p.add(&Poly::linear(2, 0, gram[i][j].clone()));
                    }
                    if !gram[j][i].is_zero() {
                        p = p.add(&Poly::linear(2, 1, gram[j][i].clone()));
                    }
                    p
                })
                .collect()
        })
        .collect();
    let det = solver::poly_matrix_det(&entries);
    Some(fmt_scalars(&solver::normalize_binary_form(&det)))
}

/// Matrix (row convention) of the action of `x` on an invariant subspace.
fn action_matrix(a: &AlgebraTable, sub: &Subspace, x: &Vector, right: bool) -> Option<Matrix> {
    let k = sub.dim();
    let mut m = Matrix::zero(k, k);
    for (i, b) in sub.basis().iter().enumerate() {
        let img = if right { a.bracket(b, x).unwrap() } else { a.bracket(x, b).unwrap() };
        let coords = sub.coordinates(&img)?;
        for (j, c) in coords.into_iter().enumerate() {
            m.set(i, j, c);
        }
    }
    Some(m)
}

/// Graded eigenvalue multiset of the action of `x` along the lower central
/// chain of `n` (invariant under replacing `x` by `c*x + n0`, up to the
/// scale `c`). `None` when a characteristic polynomial does not split.
fn graded_multiset(a: &AlgebraTable, n: &Subspace, x: &Vector, right: bool) -> Option<Vec<Scalar>> {
    let mut chain = vec![n.clone()];
    loop {
        let last = chain.last().unwrap();
        if last.is_zero() {
            break;
        }
        let next = a.product_space(last, n).unwrap();
        if &next == last {
            break;
        }
        chain.push(next);
    }
    if !chain.last().unwrap().is_zero() {
        chain.push(Subspace::zero(a.dim()));
    }
    let mut eigen = Vec::new();
    for w in chain.windows(2) {
        let quot = Quotient::new(&w[0], &w[1]);
        if quot.dim() == 0 {
            continue;
        }
        let m = quot
            .induced_matrix(|v| {
                if right {
                    a.bracket(v, x).unwrap()
                } else {
                    a.bracket(x, v).unwrap()
                }
            })
            .ok()?;
        let roots = solver::roots_with_multiplicity(&m.char_poly())?;
        eigen.extend(roots);
    }
    eigen.sort();
    Some(eigen)
}

fn weight_profile(a: &AlgebraTable, nr: &Subspace) -> Option<WeightProfile> {
    let comp = nr.complement_basis();
    debug_assert_eq!(comp.len(), 1);
    let x = &comp[0];
    let right = graded_multiset(a, nr, x, true)?;
    let left = graded_multiset(a, nr, x, false)?;

    // Canonical scale: rescale by the inverse of each nonzero right
    // eigenvalue and keep the lexicographically smallest (right, left) pair.
    let mut scales: Vec<Scalar> =
        right.iter().filter(|l| !l.is_zero()).map(|l| l.inv().unwrap()).collect();
    if scales.is_empty() {
        scales.push(Scalar::one());
    }
    let mut best: Option<(Vec<Scalar>, Vec<Scalar>, Scalar)> = None;
    for c in scales {
        let mut r: Vec<Scalar> = right.iter().map(|l| l * &c).collect();
        let mut l: Vec<Scalar> = left.iter().map(|v| v * &c).collect();
        r.sort();
        l.sort();
        match &best {
            Some((br, bl, _)) if (br, bl) <= (&r, &l) => {}
            _ => best = Some((r, l, c)),
        }
    }
    let (right_canon, left_canon, c) = best.unwrap();

    // Exact (ungraded) data on the inner annihilator of the nilradical:
    // for v in Z and any n in N both [v, n] and [n, v] vanish, so replacing
    // x by c*x + n changes the actions on Z only by the scale c.
    let z = inner_annihilator(a, nr);
    let (right_jordan, left_jordan, pencil) = if !z.is_zero() {
        let rm = action_matrix(a, &z, x, true)?.scale(&c);
        let lm = action_matrix(a, &z, x, false)?.scale(&c);
        let rj = jordan_ranks(&rm);
        let lj = jordan_ranks(&lm);
        let pencil = pencil_forms(&rm, &lm);
        (rj, lj, pencil)
    } else {
        (Vec::new(), Vec::new(), Vec::new())
    };

    Some(WeightProfile {
        right: fmt_scalars(&right_canon),
        left: fmt_scalars(&left_canon),
        right_jordan,
        left_jordan,
        pencil,
    })
}

/// Value spans of `[u,v] + [v,u]` and `[u,v] - [v,u]`.
fn part_spans(a: &AlgebraTable) -> (usize, usize) {
    let n = a.dim();
    let mut sym = Vec::new();
    let mut antisym = Vec::new();
    for i in 0..n {
        for j in i..n {
            let ij = a.basis_bracket(i, j);
            let ji = a.basis_bracket(j, i);
            let mut s = ij.clone();
            let mut t = ij;
            for ((sv, tv), x) in s.iter_mut().zip(t.iter_mut()).zip(&ji) {
                *sv += x;
                *tv -= x;
            }
            sym.push(s);
            antisym.push(t);
        }
    }
    (
        Subspace::from_spanning(n, sym).dim(),
        Subspace::from_spanning(n, antisym).dim(),
    )
}

/// Unnormalized graded right-action weights of the echelon complement
/// generator on the nilradical (classifier proposal input).
pub fn nilradical_weights(a: &AlgebraTable, nr: &Subspace) -> Option<Vec<Scalar>> {
    let comp = nr.complement_basis();
    if comp.len() != 1 {
        return None;
    }
    graded_multiset(a, nr, &comp[0], true)
}

/// Normalized bracket pairing form coefficients (when dim L^2 = 1), as
/// scalars.
pub fn bracket_pairing_coeffs(a: &AlgebraTable) -> Option<Vec<Scalar>> {
    if a.square().dim() != 1 {
        return None;
    }
    let ann = structure::annihilator(a);
    bracket_pairing_form(a, &ann)
        .map(|v| v.iter().map(|s| s.parse().unwrap()).collect())
}

/// `{v in N : [v, N] = [N, v] = 0}` as an ambient subspace.
fn inner_annihilator(a: &AlgebraTable, nr: &Subspace) -> Subspace {
    let Ok(t) = a.restrict_to(nr) else {
        return Subspace::zero(a.dim());
    };
    let ann = structure::annihilator(&t);
    let vectors = ann
        .basis()
        .iter()
        .map(|coords| {
            let mut v = vec![Scalar::zero(); a.dim()];
            for (c, row) in coords.iter().zip(nr.basis()) {
                for (t, x) in v.iter_mut().zip(row) {
                    *t += &(c * x);
                }
            }
            v
        })
        .collect();
    Subspace::from_spanning(a.dim(), vectors)
}

fn jordan_ranks(m: &Matrix) -> Vec<(String, Vec<usize>)> {
    let n = m.nrows();
    let Some(mut roots) = solver::roots_with_multiplicity(&m.char_poly()) else {
        return Vec::new();
    };
    roots.dedup();
    roots
        .into_iter()
        .map(|lam| {
            let shifted = m.sub(&Matrix::identity(n).scale(&lam));
            let ranks: Vec<usize> = (1..=n as u32).map(|k| shifted.pow(k).rank()).collect();
            (lam.to_string(), ranks)
        })
        .collect()
}

/// Normalized gcd forms of the k x k minors of s*R + t*L, k = 1..n.
fn pencil_forms(r: &Matrix, l: &Matrix) -> Vec<Vec<String>> {
    let n = r.nrows();
    let entries: Vec<Vec<Poly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut p = Poly::zero(2);
                    if !r.get(i, j).is_zero() {
                        p = p.add(&Poly::linear(2, 0, r.get(i, j).clone()));
                    }
                    if !l.get(i, j).is_zero() {
                        p = p.add(&Poly::linear(2, 1, l.get(i, j).clone()));
                    }
                    p
                })
                .collect()
        })
        .collect();
    (1..=n)
        .map(|k| {
            let minors = solver::poly_matrix_minors(&entries, k);
            let gcd = solver::binary_form_gcd(&minors);
            fmt_scalars(&solver::normalize_binary_form(&gcd))
        })
        .collect()
}

/// Rank and (even-rank) discriminant of the symmetric form
/// `u -> [u, u]` when its values span a line.
fn square_form_invariants(a: &AlgebraTable) -> (usize, Option<String>) {
    let n = a.dim();
    // Values of the symmetrized bracket.
    let mut values = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let mut v = a.basis_bracket(i, j);
            let w = a.basis_bracket(j, i);
            for (t, x) in v.iter_mut().zip(&w) {
                *t += x;
            }
            values.push(v);
        }
    }
    let span = Subspace::from_spanning(n, values);
    if span.dim() != 1 {
        return (0, None);
    }
    let gen = &span.basis()[0];
    let p = gen.iter().position(|x| !x.is_zero()).unwrap();
    let lead_inv = gen[p].inv().unwrap();
    // Gram of the symmetric part along the generator.
    let mut gram = Matrix::zero(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut v = a.basis_bracket(i, j);
            let w = a.basis_bracket(j, i);
            for (t, x) in v.iter_mut().zip(&w) {
                *t += x;
            }
            gram.set(i, j, &(&v[p] * &lead_inv) * &Scalar::from_frac(1, 2));
        }
    }
    let rank = gram.rank();
    if rank == 0 || rank % 2 != 0 {
        return (rank, None);
    }
    // Discriminant: determinant of a maximal nonsingular principal part,
    // well-defined modulo squares (and modulo the even-power scale).
    let disc = nonsingular_minor_det(&gram, rank);
    (rank, disc.map(|d| d.to_string()))
}

fn nonsingular_minor_det(g: &Matrix, rank: usize) -> Option<Scalar> {
    let n = g.nrows();
    // Greedily pick rows that keep the leading minor nonsingular; for the
    // symmetric forms here the row space has a basis of standard vectors.
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..n {
        if chosen.len() == rank {
            break;
        }
        let mut trial = chosen.clone();
        trial.push(i);
        let sub = Matrix::from_fn(trial.len(), trial.len(), |r, c| {
            g.get(trial[r], trial[c]).clone()
        });
        if sub.rank() == trial.len() {
            chosen = trial;
        }
    }
    if chosen.len() != rank {
        return None;
    }
    let sub = Matrix::from_fn(rank, rank, |r, c| g.get(chosen[r], chosen[c]).clone());
    Some(sub.det())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{instantiate, parse_params};

    fn fam(id: &str, params: &str) -> AlgebraTable {
        instantiate(id, &parse_params(params).unwrap()).unwrap()
    }

    #[test]
    fn r2_vs_r3_differ_on_right_annihilator() {
        let f2 = fingerprint(&fam("R2", ""));
        let f3 = fingerprint(&fam("R3", ""));
        let diff = f2.first_difference(&f3).unwrap();
        assert!(
            diff == "dim right_annihilator" || diff == "is_lie",
            "unexpected component {}",
            diff
        );
    }

    #[test]
    fn l1_vs_l2_differ_on_lie_flag() {
        let f1 = fingerprint(&fam("L1", "gamma=2"));
        let f2 = fingerprint(&fam("L2", ""));
        assert!(f1.is_lie);
        assert!(!f2.is_lie);
        assert!(f1.first_difference(&f2).is_some());
    }

    #[test]
    fn l20_parameter_swap_same_fingerprint() {
        let a = fingerprint(&fam("L20", "mu2=2,mu3=3"));
        let b = fingerprint(&fam("L20", "mu2=3,mu3=2"));
        assert_eq!(a.first_difference(&b), None);
    }

    #[test]
    fn lambda4_beta_form_separates_parameters() {
        // beta = 2 and beta = 1/2 are identified; beta = 3 is not.
        let f2 = fingerprint(&fam("lambda4p_beta", "beta=2"));
        let fh = fingerprint(&fam("lambda4p_beta", "beta=1/2"));
        let f3 = fingerprint(&fam("lambda4p_beta", "beta=3"));
        assert_eq!(f2.first_difference(&fh), None);
        assert!(f2.first_difference(&f3).is_some());
        assert_ne!(f2.bracket_form, f3.bracket_form);
    }

    #[test]
    fn basis_change_invariance_spot_check() {
        let t = fam("L31", "mu3=2");
        let p = Matrix::from_i64(&[
            &[1, 2, 0, -1],
            &[0, 1, 1, 0],
            &[2, 0, 1, 1],
            &[1, 1, 0, 1],
        ]);
        let moved = t.change_basis(&p).unwrap();
        assert_eq!(fingerprint(&t).first_difference(&fingerprint(&moved)), None);
    }
}
