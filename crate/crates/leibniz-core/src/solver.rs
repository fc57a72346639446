//! Small multivariate polynomials over Q(i) and a bounded elimination
//! solver for the quadratic systems that appear in isomorphism search.
//!
//! The solver is deterministic: propagation handles linear and univariate
//! constraints exactly (with Gaussian-rational root extraction), then
//! branches over a fixed height-ordered value stream under a node budget.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::Budget;

/// Exponent vector keyed sparse polynomial.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u8>, Scalar>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(nvars: usize, v: usize) -> Self {
        Poly::linear(nvars, v, Scalar::one())
    }

    /// `c * x_v`.
    pub fn linear(nvars: usize, v: usize, c: Scalar) -> Self {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            let mut key = vec![0u8; nvars];
            key[v] = 1;
            p.terms.insert(key, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_value(&self) -> Option<&Scalar> {
        if self.terms.len() == 1 {
            let (k, v) = self.terms.iter().next().unwrap();
            if k.iter().all(|&e| e == 0) {
                return Some(v);
            }
        }
        if self.terms.is_empty() {
            return None;
        }
        None
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|k| k.iter().all(|&e| e == 0))
    }

    fn insert(&mut self, key: Vec<u8>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = &*e.get() + &c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let key: Vec<u8> = k1.iter().zip(k2).map(|(a, b)| a + b).collect();
                out.insert(key, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, x)| (k.clone(), x * c)).collect(),
        }
    }

    pub fn vars_present(&self) -> Vec<usize> {
        let mut seen = vec![false; self.nvars];
        for k in self.terms.keys() {
            for (v, &e) in k.iter().enumerate() {
                if e > 0 {
                    seen[v] = true;
                }
            }
        }
        seen.iter().enumerate().filter_map(|(v, &s)| s.then_some(v)).collect()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|k| k.iter().map(|&e| e as usize).sum()).max().unwrap_or(0)
    }

    /// Substitute `x_v = value`.
    pub fn substitute(&self, v: usize, value: &Scalar) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (k, c) in &self.terms {
            let e = k[v];
            let mut key = k.clone();
            key[v] = 0;
            let mut coef = c.clone();
            for _ in 0..e {
                coef *= value;
            }
            out.insert(key, coef);
        }
        out
    }

    /// Substitute `x_v = replacement` for a polynomial replacement.
    pub fn substitute_poly(&self, v: usize, replacement: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (k, c) in &self.terms {
            let e = k[v] as usize;
            let mut key = k.clone();
            key[v] = 0;
            let mut term = Poly { nvars: self.nvars, terms: [(key, c.clone())].into_iter().collect() };
            for _ in 0..e {
                term = term.mul(replacement);
            }
            out = out.add(&term);
        }
        out
    }

    /// Coefficient list (ascending) if the polynomial involves exactly the
    /// single variable `v`.
    pub fn univariate_in(&self) -> Option<(usize, Vec<Scalar>)> {
        let vars = self.vars_present();
        if vars.len() != 1 {
            return None;
        }
        let v = vars[0];
        let d = self.terms.keys().map(|k| k[v]).max().unwrap() as usize;
        let mut coeffs = vec![Scalar::zero(); d + 1];
        for (k, c) in &self.terms {
            coeffs[k[v] as usize] = c.clone();
        }
        Some((v, coeffs))
    }

    pub fn terms_iter(&self) -> impl Iterator<Item = (&Vec<u8>, &Scalar)> {
        self.terms.iter()
    }

    pub fn eval(&self, values: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero();
        for (k, c) in &self.terms {
            let mut term = c.clone();
            for (v, &e) in k.iter().enumerate() {
                for _ in 0..e {
                    term *= &values[v];
                }
            }
            acc += &term;
        }
        acc
    }
}

impl std::fmt::Debug for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let vars: String = k
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(v, &e)| if e == 1 { format!("x{}", v) } else { format!("x{}^{}", v, e) })
                    .collect::<Vec<_>>()
                    .join("*");
                if vars.is_empty() {
                    format!("({})", c)
                } else {
                    format!("({})*{}", c, vars)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

// ---------------------------------------------------------------------------
// Univariate helpers
// ---------------------------------------------------------------------------

fn trim(coeffs: &mut Vec<Scalar>) {
    while coeffs.last().is_some_and(Scalar::is_zero) {
        coeffs.pop();
    }
}

fn poly_degree(coeffs: &[Scalar]) -> Option<usize> {
    coeffs.iter().rposition(|c| !c.is_zero())
}

/// Remainder of univariate division.
fn poly_rem(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let db = poly_degree(b).expect("division by zero polynomial");
    let lead_inv = b[db].inv().unwrap();
    let mut r = a.to_vec();
    trim(&mut r);
    while let Some(dr) = poly_degree(&r) {
        if dr < db {
            break;
        }
        let f = &r[dr] * &lead_inv;
        for i in 0..=db {
            let v = &r[dr - db + i] - &(&f * &b[i]);
            r[dr - db + i] = v;
        }
        trim(&mut r);
    }
    r
}

/// Monic gcd of univariate polynomials over Q(i).
pub fn poly_gcd(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(&x, &y);
        x = y;
        y = r;
    }
    if let Some(d) = poly_degree(&x) {
        let inv = x[d].inv().unwrap();
        for c in &mut x {
            *c = &*c * &inv;
        }
    }
    x
}

/// Gaussian-rational roots of a univariate polynomial.
///
/// Complete for degree <= 2; for higher degrees linear factors are pulled
/// out by bounded divisor enumeration and the `complete` flag records
/// whether the remaining factor was fully resolved.
pub fn gaussian_roots(coeffs: &[Scalar]) -> (Vec<Scalar>, bool) {
    let mut c = coeffs.to_vec();
    trim(&mut c);
    let mut roots = Vec::new();
    let mut complete = true;
    loop {
        let Some(d) = poly_degree(&c) else {
            // zero polynomial: every value is a root
            return (roots, false);
        };
        match d {
            0 => break,
            1 => {
                roots.push(-(&c[0] / &c[1]));
                break;
            }
            2 => {
                let disc = &(&c[1] * &c[1]) - &(&Scalar::from_int(4) * &(&c[2] * &c[0]));
                if let Some(sq) = disc.sqrt() {
                    let two_a = &Scalar::from_int(2) * &c[2];
                    roots.push(&(&(-&c[1]) + &sq) / &two_a);
                    if !sq.is_zero() {
                        roots.push(&(&(-&c[1]) - &sq) / &two_a);
                    }
                }
                break;
            }
            _ => {
                let mut found = None;
                for cand in divisor_candidates(&c) {
                    if eval_univariate(&c, &cand).is_zero() {
                        found = Some(cand);
                        break;
                    }
                }
                match found {
                    Some(r) => {
                        c = deflate(&c, &r);
                        roots.push(r);
                    }
                    None => {
                        complete = false;
                        break;
                    }
                }
            }
        }
    }
    roots.sort();
    roots.dedup();
    (roots, complete)
}

fn eval_univariate(coeffs: &[Scalar], x: &Scalar) -> Scalar {
    let mut acc = Scalar::zero();
    for c in coeffs.iter().rev() {
        acc = &(&acc * x) + c;
    }
    acc
}

fn deflate(coeffs: &[Scalar], root: &Scalar) -> Vec<Scalar> {
    // synthetic division by (x - root)
    let d = poly_degree(coeffs).unwrap();
    let mut out = vec![Scalar::zero(); d];
    let mut carry = Scalar::zero();
    for i in (0..=d).rev() {
        let v = &coeffs[i] + &(&carry * root);
        if i > 0 {
            out[i - 1] = v.clone();
        }
        carry = v;
    }
    out
}

/// Candidate rational roots p/q with p from Gaussian divisors of the
/// cleared trailing coefficient and q from the leading one (bounded).
fn divisor_candidates(coeffs: &[Scalar]) -> Vec<Scalar> {
    use num_traits::{One, Zero};
    let d = poly_degree(coeffs).unwrap();
    // Clear denominators to Gaussian integers.
    let mut lcm = BigInt::one();
    for c in coeffs.iter() {
        for r in [&c.re, &c.im] {
            let den = r.denom().clone();
            let g = num_integer::Integer::gcd(&lcm, &den);
            lcm = &lcm / &g * &den;
        }
    }
    let to_gauss = |c: &Scalar| -> (BigInt, BigInt) {
        let re = c.re.numer() * (&lcm / c.re.denom());
        let im = c.im.numer() * (&lcm / c.im.denom());
        (re, im)
    };
    let (t_re, t_im) = to_gauss(&coeffs[0]);
    let (l_re, l_im) = to_gauss(&coeffs[d]);
    let norm = |re: &BigInt, im: &BigInt| re * re + im * im;
    let trailing_norm = norm(&t_re, &t_im);
    let leading_norm = norm(&l_re, &l_im);
    if trailing_norm.is_zero() {
        // zero is a root; caller deflates via candidate 0
        return vec![Scalar::zero()];
    }
    const CAP: u64 = 20_000;
    let numerators = gaussian_norm_divisor_reps(&trailing_norm, CAP);
    let denominators = gaussian_norm_divisor_reps(&leading_norm, CAP);
    let units = [Scalar::one(), -Scalar::one(), Scalar::i(), -Scalar::i()];
    let mut out = vec![Scalar::zero()];
    for p in &numerators {
        for q in &denominators {
            if q.is_zero() {
                continue;
            }
            let base = p / q;
            for u in &units {
                out.push(&base * u);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Gaussian integers (up to unit) whose norm divides `n`, via enumeration
/// of norm divisors; bounded by `cap` enumeration steps.
fn gaussian_norm_divisor_reps(n: &BigInt, cap: u64) -> Vec<Scalar> {
    use num_traits::{Signed, ToPrimitive};
    let n = n.abs();
    let Some(n_u) = n.to_u64() else {
        return vec![Scalar::one()];
    };
    let mut out = Vec::new();
    let mut steps = 0u64;
    let mut d = 1u64;
    while d * d <= n_u && steps < cap {
        if n_u % d == 0 {
            for div in [d, n_u / d] {
                // x^2 + y^2 = div
                let mut x = 0u64;
                while x * x <= div {
                    let rest = div - x * x;
                    let y = (rest as f64).sqrt() as u64;
                    for y in [y.saturating_sub(1), y, y + 1] {
                        if y * y == rest {
                            out.push(Scalar::new(
                                num_rational::Ratio::from_integer(BigInt::from(x)),
                                num_rational::Ratio::from_integer(BigInt::from(y)),
                            ));
                        }
                    }
                    x += 1;
                    steps += 1;
                }
            }
        }
        d += 1;
        steps += 1;
    }
    out.retain(|s| !s.is_zero());
    out.sort();
    out.dedup();
    out
}

/// Gaussian-rational eigenvalues of an exact matrix (possibly incomplete
/// when the characteristic polynomial has an unresolved factor).
pub fn rational_eigenvalues(m: &Matrix) -> Vec<Scalar> {
    gaussian_roots(&m.char_poly()).0
}

/// Rows of a Jordan basis for a row-convention operator (`v -> v * m`):
/// the returned matrix `P` satisfies `P m P^{-1}` upper Jordan, with
/// eigenvalue groups in sorted order and chains emitted top vector first.
/// `None` when the characteristic polynomial does not split over Q(i).
pub fn jordan_rows(m: &Matrix) -> Option<Matrix> {
    use crate::linalg::Subspace;
    let n = m.nrows();
    let mut eigs = roots_with_multiplicity(&m.char_poly())?;
    eigs.dedup();
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for lam in eigs {
        let shifted = m.sub(&Matrix::identity(n).scale(&lam));
        // kernels of v -> v * shifted^i, i.e. column kernels of the
        // transposed powers
        let st = shifted.transpose();
        let mut kernels: Vec<Subspace> = vec![Subspace::zero(n)];
        let mut d = 0;
        loop {
            let k = st.pow((d + 1) as u32).kernel();
            if k == kernels[d] {
                break;
            }
            kernels.push(k);
            d += 1;
        }
        // chains from the top filtration level downward; longer chains
        // occupy lower levels through the shifted action
        let mut chains: Vec<Vec<Vec<Scalar>>> = Vec::new();
        for depth in (1..=d).rev() {
            loop {
                let mut occupied = kernels[depth - 1].basis().to_vec();
                occupied.extend(chains.iter().flatten().cloned());
                let span = Subspace::from_spanning(n, occupied);
                let Some(top) = kernels[depth].basis().iter().find(|v| !span.contains_vec(v))
                else {
                    break;
                };
                let mut chain = Vec::new();
                let mut cur = top.clone();
                for _ in 0..depth {
                    chain.push(cur.clone());
                    cur = shifted.vec_mul(&cur);
                }
                chains.push(chain);
            }
        }
        for chain in chains {
            rows.extend(chain);
        }
    }
    if rows.len() != n {
        return None;
    }
    let p = Matrix::from_rows(rows);
    if p.det().is_zero() {
        return None;
    }
    Some(p)
}

// ---------------------------------------------------------------------------
// Characteristic-coefficient forms of polynomial matrices
// ---------------------------------------------------------------------------

fn poly_mat_mul(a: &[Vec<Poly>], b: &[Vec<Poly>]) -> Vec<Vec<Poly>> {
    let n = a.len();
    let nv = a[0][0].nvars();
    let mut out = vec![vec![Poly::zero(nv); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = Poly::zero(nv);
            for k in 0..n {
                if !a[i][k].is_zero() && !b[k][j].is_zero() {
                    acc = acc.add(&a[i][k].mul(&b[k][j]));
                }
            }
            out[i][j] = acc;
        }
    }
    out
}

fn poly_mat_trace(a: &[Vec<Poly>]) -> Poly {
    let nv = a[0][0].nvars();
    let mut t = Poly::zero(nv);
    for (i, row) in a.iter().enumerate() {
        t = t.add(&row[i]);
    }
    t
}

/// Nontrivial characteristic polynomial coefficients `c_{n-1}, ..., c_0`
/// of a square matrix with polynomial entries (Faddeev–LeVerrier; exact
/// since only division by integers occurs).
pub fn char_coefficient_forms(entries: &[Vec<Poly>]) -> Vec<Poly> {
    let n = entries.len();
    let nv = entries[0][0].nvars();
    let mut coeffs = vec![Poly::zero(nv); n + 1];
    coeffs[n] = Poly::constant(nv, Scalar::one());
    let mut m = vec![vec![Poly::zero(nv); n]; n];
    for k in 1..=n {
        let mut shifted = m.clone();
        for (i, row) in shifted.iter_mut().enumerate() {
            row[i] = row[i].add(&coeffs[n - k + 1]);
        }
        m = poly_mat_mul(entries, &shifted);
        let t = poly_mat_trace(&m);
        let inv_k = Scalar::from_int(k as i64).inv().unwrap();
        coeffs[n - k] = t.neg().scale(&inv_k);
    }
    coeffs.truncate(n);
    coeffs.reverse(); // c_{n-1} first
    coeffs
}

/// Coefficients of `p` as a univariate polynomial in `x_v`, each a
/// polynomial in the remaining variables.
fn univariate_coeffs(p: &Poly, v: usize) -> Vec<Poly> {
    let d = p.terms.keys().map(|k| k[v] as usize).max().unwrap_or(0);
    let mut out = vec![Poly::zero(p.nvars); d + 1];
    for (k, c) in &p.terms {
        let e = k[v] as usize;
        let mut key = k.clone();
        key[v] = 0;
        out[e].insert(key, c.clone());
    }
    out
}

/// Resultant of two polynomials with respect to `x_v` (Sylvester
/// determinant over the remaining variables). Vanishes on every common
/// zero, so adding it to a system preserves the solution set.
pub fn resultant(p: &Poly, q: &Poly, v: usize) -> Poly {
    let a = univariate_coeffs(p, v);
    let b = univariate_coeffs(q, v);
    let m = a.len() - 1;
    let n = b.len() - 1;
    if m == 0 || n == 0 {
        return Poly::zero(p.nvars);
    }
    let size = m + n;
    let zero = Poly::zero(p.nvars);
    let mut syl = vec![vec![zero; size]; size];
    for row in 0..n {
        for (i, coef) in a.iter().enumerate() {
            syl[row][row + (m - i)] = coef.clone();
        }
    }
    for row in 0..m {
        for (i, coef) in b.iter().enumerate() {
            syl[n + row][row + (n - i)] = coef.clone();
        }
    }
    poly_matrix_det(&syl)
}

/// Determinant of a small polynomial matrix by permutation expansion.
pub fn poly_matrix_det(entries: &[Vec<Poly>]) -> Poly {
    let n = entries.len();
    let nv = if n == 0 { 0 } else { entries[0][0].nvars() };
    if n == 0 {
        return Poly::constant(nv, Scalar::one());
    }
    let mut det = Poly::zero(nv);
    let mut perm: Vec<usize> = (0..n).collect();
    permute(&mut perm, 0, &mut |p, sign| {
        let mut term = Poly::constant(nv, if sign { Scalar::one() } else { -Scalar::one() });
        for (i, &j) in p.iter().enumerate() {
            term = term.mul(&entries[i][j]);
        }
        det = det.add(&term);
    });
    det
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize], bool)) {
    let n = p.len();
    if k == n {
        // parity of the permutation
        let mut seen = vec![false; n];
        let mut even = true;
        for i in 0..n {
            if seen[i] {
                continue;
            }
            let mut j = i;
            let mut len = 0;
            while !seen[j] {
                seen[j] = true;
                j = p[j];
                len += 1;
            }
            if len % 2 == 0 {
                even = !even;
            }
        }
        f(p, even);
        return;
    }
    for i in k..n {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

/// All k x k minors of a square polynomial matrix.
pub fn poly_matrix_minors(entries: &[Vec<Poly>], k: usize) -> Vec<Poly> {
    let n = entries.len();
    let mut out = Vec::new();
    let rows = combinations(n, k);
    let cols = combinations(n, k);
    for r in &rows {
        for c in &cols {
            let sub: Vec<Vec<Poly>> =
                r.iter().map(|&i| c.iter().map(|&j| entries[i][j].clone()).collect()).collect();
            out.push(poly_matrix_det(&sub));
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Gcd of binary forms in two variables (up to scalar), as a form.
pub fn binary_form_gcd(forms: &[Poly]) -> Poly {
    let nonzero: Vec<&Poly> = forms.iter().filter(|f| !f.is_zero()).collect();
    if nonzero.is_empty() {
        return Poly::zero(2);
    }
    // Split each form into t^a * homog(u(s)) with u = dehomogenization.
    let mut inf_mult = usize::MAX; // multiplicity of the root (1:0), i.e. t-exponent
    let mut g: Option<Vec<Scalar>> = None;
    for f in &nonzero {
        let deg = f.degree();
        let u = dehomogenize(f);
        let du = poly_degree(&u).unwrap_or(0);
        inf_mult = inf_mult.min(deg - du);
        g = Some(match g {
            None => u,
            Some(prev) => poly_gcd(&prev, &u),
        });
    }
    let u = g.unwrap();
    // Rebuild the form: t^{inf_mult} * sum u_e s^e t^{du - e}
    let du = poly_degree(&u).unwrap_or(0);
    let mut out = Poly::zero(2);
    for (e, c) in u.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut term = Poly::constant(2, c.clone());
        for _ in 0..e {
            term = term.mul(&Poly::var(2, 0));
        }
        for _ in 0..(du - e + inf_mult) {
            term = term.mul(&Poly::var(2, 1));
        }
        out = out.add(&term);
    }
    out
}

/// Coefficient vector `[s^d, s^{d-1} t, ..., t^d]` of a binary form,
/// scaled so the first nonzero coefficient is 1. The zero form yields an
/// empty vector.
pub fn normalize_binary_form(f: &Poly) -> Vec<Scalar> {
    if f.is_zero() {
        return Vec::new();
    }
    let degree = f.degree();
    let mut coeffs = vec![Scalar::zero(); degree + 1];
    for (k, c) in f.terms_iter() {
        let e = k[0] as usize;
        debug_assert_eq!(k[0] as usize + k[1] as usize, degree);
        coeffs[degree - e] = &coeffs[degree - e] + c;
    }
    let lead = coeffs.iter().find(|c| !c.is_zero());
    match lead {
        Some(l) => {
            let inv = l.inv().unwrap();
            coeffs.iter_mut().for_each(|c| *c = &*c * &inv);
            coeffs
        }
        None => Vec::new(),
    }
}

/// Roots with multiplicity when the polynomial splits completely over
/// Q(i); `None` otherwise.
pub fn roots_with_multiplicity(coeffs: &[Scalar]) -> Option<Vec<Scalar>> {
    let mut c = coeffs.to_vec();
    trim(&mut c);
    let mut out = Vec::new();
    loop {
        match poly_degree(&c) {
            None => return None,
            Some(0) => break,
            Some(_) => {
                let (roots, _) = gaussian_roots(&c);
                let r = roots.into_iter().find(|r| eval_univariate(&c, r).is_zero())?;
                c = deflate(&c, &r);
                out.push(r);
            }
        }
    }
    out.sort();
    Some(out)
}

// ---------------------------------------------------------------------------
// Binary forms
// ---------------------------------------------------------------------------

/// Do homogeneous forms in two variables share a nonzero complex root?
/// (Zero forms impose nothing; all-zero means every point is a root.)
pub fn binary_forms_have_common_projective_root(forms: &[Poly]) -> bool {
    let nonzero: Vec<&Poly> = forms.iter().filter(|f| !f.is_zero()).collect();
    if nonzero.is_empty() {
        return true;
    }
    // Check the point (1 : 0): all coefficients of pure x0-powers vanish.
    let at_infinity = nonzero.iter().all(|f| {
        f.terms.iter().all(|(k, c)| k[1] != 0 || k[0] == 0 || c.is_zero())
    });
    if at_infinity {
        return true;
    }
    // Finite points: gcd of the dehomogenizations x1 = 1.
    let mut g: Option<Vec<Scalar>> = None;
    for f in &nonzero {
        let uni = dehomogenize(f);
        g = Some(match g {
            None => uni,
            Some(prev) => poly_gcd(&prev, &uni),
        });
    }
    let g = g.unwrap();
    poly_degree(&g).is_some_and(|d| d >= 1)
}

fn dehomogenize(f: &Poly) -> Vec<Scalar> {
    let d = f.terms.keys().map(|k| k[0]).max().unwrap_or(0) as usize;
    let mut coeffs = vec![Scalar::zero(); d + 1];
    for (k, c) in &f.terms {
        coeffs[k[0] as usize] = &coeffs[k[0] as usize] + c;
    }
    coeffs
}

/// Gaussian-rational common projective roots of binary forms, as (s, t)
/// pairs; `None` when every form vanishes identically (all points are
/// roots and no finite candidate list exists).
pub fn binary_form_common_roots(forms: &[Poly]) -> Option<Vec<(Scalar, Scalar)>> {
    let nonzero: Vec<&Poly> = forms.iter().filter(|f| !f.is_zero()).collect();
    if nonzero.is_empty() {
        return None;
    }
    let mut out = Vec::new();
    let at_infinity = nonzero.iter().all(|f| {
        f.terms.iter().all(|(k, c)| k[1] != 0 || k[0] == 0 || c.is_zero())
    });
    if at_infinity {
        out.push((Scalar::one(), Scalar::zero()));
    }
    let mut g: Option<Vec<Scalar>> = None;
    for f in &nonzero {
        let uni = dehomogenize(f);
        g = Some(match g {
            None => uni,
            Some(prev) => poly_gcd(&prev, &uni),
        });
    }
    let (roots, _complete) = gaussian_roots(&g.unwrap());
    for r in roots {
        out.push((r, Scalar::one()));
    }
    Some(out)
}

/// Any nonzero Gaussian-rational common zero of the forms, via
/// dehomogenization along each variable in turn.
pub fn find_nonzero_solution(forms: &[Poly], budget: Budget) -> Option<Vec<Scalar>> {
    if forms.is_empty() {
        return None;
    }
    let nv = forms[0].nvars();
    for pivot in 0..nv {
        let system: Vec<Poly> = forms.iter().map(|f| f.substitute(pivot, &Scalar::one())).collect();
        let mut nodes = budget.nodes / (nv as u64).max(1);
        if let Some(mut sol) = solve_system(&system, nv, &mut nodes, budget.height, &|_| true) {
            sol[pivot] = Scalar::one();
            return Some(sol);
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Elimination search
// ---------------------------------------------------------------------------

/// Height-ordered branching values.
pub fn default_candidates() -> Vec<Scalar> {
    let mut v = vec![
        Scalar::zero(),
        Scalar::one(),
        -Scalar::one(),
        Scalar::from_int(2),
        Scalar::from_int(-2),
        Scalar::from_frac(1, 2),
        Scalar::from_frac(-1, 2),
        Scalar::from_int(3),
        Scalar::from_int(-3),
        Scalar::from_frac(1, 3),
        Scalar::from_frac(-1, 3),
        Scalar::from_frac(3, 2),
        Scalar::from_frac(-3, 2),
        Scalar::from_frac(2, 3),
        Scalar::from_frac(-2, 3),
        Scalar::i(),
        -Scalar::i(),
        Scalar::from_int(4),
        Scalar::from_int(-4),
        Scalar::from_frac(1, 4),
        Scalar::from_frac(-1, 4),
    ];
    let i = Scalar::i();
    for re in [1i64, -1] {
        for im in [1i64, -1] {
            v.push(&Scalar::from_int(re) + &(&Scalar::from_int(im) * &i));
        }
    }
    v
}

fn within_height(s: &Scalar, height: u64) -> bool {
    s.height() <= BigInt::from(height)
}

/// Find one solution of `polys = 0` over Q(i)^nvars, subject to a final
/// acceptance predicate. `None` is inconclusive (budget or no solution in
/// the searched region).
pub fn solve_system(
    polys: &[Poly],
    nvars: usize,
    nodes: &mut u64,
    height: u64,
    accept: &dyn Fn(&[Scalar]) -> bool,
) -> Option<Vec<Scalar>> {
    let shared = default_candidates();
    let candidates = vec![shared; nvars];
    solve_system_with(polys, nvars, nodes, height, &candidates, &vec![0; nvars], &|_| false, accept)
}

/// `solve_system` with a branching-value stream and branching priority per
/// variable (higher priority branches first), plus a prune predicate over
/// partial assignments (`true` = this branch cannot succeed).
#[allow(clippy::too_many_arguments)]
pub fn solve_system_with(
    polys: &[Poly],
    nvars: usize,
    nodes: &mut u64,
    height: u64,
    candidates: &[Vec<Scalar>],
    priority: &[u32],
    prune: &dyn Fn(&[Option<Scalar>]) -> bool,
    accept: &dyn Fn(&[Scalar]) -> bool,
) -> Option<Vec<Scalar>> {
    debug_assert_eq!(candidates.len(), nvars);
    let assignment: Vec<Option<Scalar>> = vec![None; nvars];
    let active: Vec<Poly> = polys.iter().filter(|p| !p.is_zero()).cloned().collect();
    let ctx = Ctx { height, candidates, priority, prune, accept };
    search(active, assignment, Vec::new(), nodes, &ctx)
}

struct Ctx<'a> {
    height: u64,
    candidates: &'a [Vec<Scalar>],
    priority: &'a [u32],
    prune: &'a dyn Fn(&[Option<Scalar>]) -> bool,
    accept: &'a dyn Fn(&[Scalar]) -> bool,
}

/// Variables eliminated by linear propagation, kept substituted so each
/// replacement only mentions live variables.
type Elims = Vec<(usize, Poly)>;

fn apply_value(
    polys: &mut Vec<Poly>,
    elims: &mut Elims,
    assignment: &mut [Option<Scalar>],
    v: usize,
    value: Scalar,
) {
    for p in polys.iter_mut() {
        *p = p.substitute(v, &value);
    }
    for (_, r) in elims.iter_mut() {
        *r = r.substitute(v, &value);
    }
    assignment[v] = Some(value);
}

fn search(
    mut polys: Vec<Poly>,
    mut assignment: Vec<Option<Scalar>>,
    mut elims: Elims,
    nodes: &mut u64,
    ctx: &Ctx,
) -> Option<Vec<Scalar>> {
    if *nodes == 0 {
        return None;
    }
    *nodes = nodes.saturating_sub(1);
    if std::env::var("LEIBNIZ_SOLVER_TRACE").is_ok() {
        let assigned: Vec<String> = assignment
            .iter()
            .enumerate()
            .filter_map(|(v, a)| a.as_ref().map(|x| format!("x{}={}", v, x)))
            .collect();
        eprintln!("node={} polys={} elims={} assigned=[{}]", nodes, polys.len(), elims.len(), assigned.join(","));
    }

    // Propagation: linear elimination until only nonlinear constraints remain.
    loop {
        polys.retain(|p| !p.is_zero());
        if polys.iter().any(|p| p.constant_value().is_some_and(|c| !c.is_zero())) {
            return None;
        }
        let Some(idx) = polys.iter().position(|p| p.degree() == 1) else { break };
        let p = polys.swap_remove(idx);
        let vars = p.vars_present();
        let v = vars[0];
        // p = c*v + rest  =>  v = -rest/c
        let mut coeff = Scalar::zero();
        let mut rest = Poly::zero(p.nvars());
        for (k, c) in p.terms_iter() {
            if k[v] == 1 {
                coeff = c.clone();
            } else {
                rest = rest.add(&Poly { nvars: p.nvars(), terms: [(k.clone(), c.clone())].into_iter().collect() });
            }
        }
        let inv = coeff.inv().expect("linear pivot is nonzero");
        let replacement = rest.neg().scale(&inv);
        if let Some(c) = replacement.constant_value() {
            // Derived values are exact consequences, not guesses; the
            // height bound only limits branching candidates and roots.
            let value = c.clone();
            apply_value(&mut polys, &mut elims, &mut assignment, v, value);
        } else if replacement.is_zero() {
            apply_value(&mut polys, &mut elims, &mut assignment, v, Scalar::zero());
        } else {
            for q in polys.iter_mut() {
                *q = q.substitute_poly(v, &replacement);
            }
            for (_, r) in elims.iter_mut() {
                *r = r.substitute_poly(v, &replacement);
            }
            elims.push((v, replacement));
        }
    }

    if (ctx.prune)(&assignment) {
        return None;
    }

    if polys.is_empty() {
        let free: Vec<usize> = (0..assignment.len())
            .filter(|&v| assignment[v].is_none() && elims.iter().all(|(e, _)| *e != v))
            .collect();
        return fill_free(&free, &mut assignment, &elims, nodes, ctx);
    }

    // Univariate nonlinear constraint: branch over its exact roots (with a
    // generous runaway guard well above the guess bound).
    let mut branch_plan: Option<(usize, Vec<Scalar>)> = None;
    let root_cap = BigInt::from(ctx.height) << 96;
    for p in &polys {
        if let Some((v, coeffs)) = p.univariate_in() {
            let (roots, complete) = gaussian_roots(&coeffs);
            if complete || !roots.is_empty() {
                let usable: Vec<Scalar> =
                    roots.into_iter().filter(|r| r.height() <= root_cap).collect();
                if complete && usable.is_empty() {
                    return None;
                }
                branch_plan = Some((v, usable));
                break;
            }
        }
    }

    // Stuck on coupled nonlinear constraints: saturate once with
    // resultants (successive elimination), which often produces univariate
    // consequences the propagation loop can root-solve exactly.
    if branch_plan.is_none() && polys.len() <= 40 {
        let saturated = saturate_with_resultants(&polys, nodes);
        if !saturated.is_empty() {
            let mut next = polys.clone();
            next.extend(saturated);
            return search(next, assignment, elims, nodes, ctx);
        }
    }

    // Otherwise branch on the highest-priority, most frequent variable; in
    // the bilinear systems from basis-change equations the priorities pick
    // the coupling block whose assignment linearizes everything else.
    let (var, values) = match branch_plan {
        Some(plan) => plan,
        None => {
            let nvars = assignment.len();
            let mut freq = vec![0usize; nvars];
            for p in &polys {
                for v in p.vars_present() {
                    freq[v] += 1;
                }
            }
            let v = (0..nvars)
                .filter(|&v| freq[v] > 0)
                .max_by_key(|&v| (ctx.priority[v], freq[v]))
                .unwrap();
            (v, ctx.candidates[var_or(v)].clone())
        }
    };

    for value in &values {
        if *nodes == 0 {
            break;
        }
        let next: Vec<Poly> =
            polys.iter().map(|p| p.substitute(var, value)).filter(|p| !p.is_zero()).collect();
        let mut next_assignment = assignment.clone();
        next_assignment[var] = Some(value.clone());
        let mut next_elims = elims.clone();
        for (_, r) in next_elims.iter_mut() {
            *r = r.substitute(var, value);
        }
        if let Some(sol) = search(next, next_assignment, next_elims, nodes, ctx) {
            return Some(sol);
        }
    }
    None
}

// candidate list index passthrough (placeholder kept for readability)
fn var_or(v: usize) -> usize {
    v
}

/// New, nonzero, degree-capped resultants of pairs of system polynomials,
/// excluding anything already present.
fn saturate_with_resultants(polys: &[Poly], nodes: &mut u64) -> Vec<Poly> {
    const DEGREE_CAP: usize = 8;
    const COUNT_CAP: usize = 40;
    let mut out: Vec<Poly> = Vec::new();
    let nvars = match polys.first() {
        Some(p) => p.nvars(),
        None => return out,
    };
    for v in 0..nvars {
        let with_v: Vec<&Poly> =
            polys.iter().filter(|p| p.vars_present().contains(&v)).collect();
        if with_v.len() < 2 {
            continue;
        }
        for i in 0..with_v.len().min(6) {
            for j in i + 1..with_v.len().min(6) {
                if out.len() >= COUNT_CAP || *nodes == 0 {
                    return out;
                }
                *nodes = nodes.saturating_sub(1);
                let r = resultant(with_v[i], with_v[j], v);
                if r.is_zero() || r.degree() > DEGREE_CAP {
                    continue;
                }
                if r.constant_value().is_some_and(|c| !c.is_zero()) {
                    // contradiction: surface it so propagation kills the branch
                    out.push(r);
                    return out;
                }
                if polys.contains(&r) || out.contains(&r) {
                    continue;
                }
                out.push(r);
            }
        }
    }
    out
}

/// Complete unconstrained variables, then resolve eliminated variables and
/// run the acceptance predicate. Exhaustive for up to three variables;
/// otherwise per-variable streams are advanced in lockstep rounds (round 0
/// is the identity-like pattern given the iso module's candidate ordering).
fn fill_free(
    free: &[usize],
    assignment: &mut Vec<Option<Scalar>>,
    elims: &Elims,
    nodes: &mut u64,
    ctx: &Ctx,
) -> Option<Vec<Scalar>> {
    if free.is_empty() {
        return finish(assignment, elims, ctx);
    }
    if free.len() <= 3 {
        fn rec(
            free: &[usize],
            assignment: &mut Vec<Option<Scalar>>,
            elims: &Elims,
            nodes: &mut u64,
            ctx: &Ctx,
        ) -> Option<Vec<Scalar>> {
            let Some((first, rest)) = free.split_first() else {
                return finish(assignment, elims, ctx);
            };
            for value in &ctx.candidates[*first] {
                if *nodes == 0 {
                    return None;
                }
                *nodes = nodes.saturating_sub(1);
                assignment[*first] = Some(value.clone());
                if let Some(sol) = rec(rest, assignment, elims, nodes, ctx) {
                    return Some(sol);
                }
                assignment[*first] = None;
            }
            None
        }
        return rec(free, assignment, elims, nodes, ctx);
    }
    let max_round = free.iter().map(|&v| ctx.candidates[v].len()).max().unwrap_or(0);
    for round in 0..max_round {
        if *nodes == 0 {
            break;
        }
        *nodes = nodes.saturating_sub(1);
        for &v in free {
            let list = &ctx.candidates[v];
            assignment[v] = Some(list[round.min(list.len() - 1)].clone());
        }
        if let Some(sol) = finish(assignment, elims, ctx) {
            return Some(sol);
        }
    }
    for &v in free {
        assignment[v] = None;
    }
    None
}

/// Resolve eliminated variables against the concrete assignment and run
/// the acceptance predicate.
fn finish(assignment: &[Option<Scalar>], elims: &Elims, ctx: &Ctx) -> Option<Vec<Scalar>> {
    let mut full: Vec<Scalar> =
        assignment.iter().map(|a| a.clone().unwrap_or_else(Scalar::zero)).collect();
    for (v, r) in elims {
        full[*v] = r.eval(&full);
    }
    if (ctx.accept)(&full) {
        Some(full)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> Scalar {
        crate::parse_scalar(t).unwrap()
    }

    #[test]
    fn poly_arithmetic() {
        // (x0 + 1)(x0 - 1) = x0^2 - 1
        let x = Poly::var(2, 0);
        let one = Poly::constant(2, Scalar::one());
        let p = x.add(&one).mul(&x.sub(&one));
        assert_eq!(p.eval(&[s("3"), s("0")]), s("8"));
        assert_eq!(p.degree(), 2);
    }

    #[test]
    fn univariate_gcd_and_roots() {
        // (x-1)(x-2) and (x-2)(x-3) share (x-2)
        let a = vec![s("2"), s("-3"), s("1")];
        let b = vec![s("6"), s("-5"), s("1")];
        let g = poly_gcd(&a, &b);
        let (roots, complete) = gaussian_roots(&g);
        assert!(complete);
        assert_eq!(roots, vec![s("2")]);
    }

    #[test]
    fn quadratic_gaussian_roots() {
        // x^2 + 1 = (x - i)(x + i)
        let (roots, complete) = gaussian_roots(&[s("1"), s("0"), s("1")]);
        assert!(complete);
        assert_eq!(roots.len(), 2);
        assert!(roots.contains(&s("i")));
    }

    #[test]
    fn cubic_with_rational_roots() {
        // (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6
        let (roots, complete) = gaussian_roots(&[s("-6"), s("11"), s("-6"), s("1")]);
        assert!(complete);
        assert_eq!(roots, vec![s("1"), s("2"), s("3")]);
    }

    #[test]
    fn char_forms_of_diagonal_pencil() {
        // diag(s, t): c1 = -(s+t), c0 = s*t
        let nv = 2;
        let entries = vec![
            vec![Poly::var(nv, 0), Poly::zero(nv)],
            vec![Poly::zero(nv), Poly::var(nv, 1)],
        ];
        let forms = char_coefficient_forms(&entries);
        assert_eq!(forms.len(), 2);
        assert_eq!(forms[0].eval(&[s("2"), s("5")]), s("-7"));
        assert_eq!(forms[1].eval(&[s("2"), s("5")]), s("10"));
        // no nonzero common root: diag(s,t) nilpotent only at 0
        assert!(!binary_forms_have_common_projective_root(&forms));
    }

    #[test]
    fn solves_small_quadratic_system() {
        // x0^2 = 4, x0 + x1 = 1  ->  (2, -1) or (-2, 3)
        let nv = 2;
        let p1 = Poly::var(nv, 0).mul(&Poly::var(nv, 0)).sub(&Poly::constant(nv, s("4")));
        let p2 = Poly::var(nv, 0).add(&Poly::var(nv, 1)).sub(&Poly::constant(nv, s("1")));
        let mut nodes = 1000;
        let sol = solve_system(&[p1, p2], nv, &mut nodes, 64, &|_| true).unwrap();
        assert_eq!(&sol[0] + &sol[1], s("1"));
        assert_eq!(&sol[0] * &sol[0], s("4"));
    }

    #[test]
    fn respects_budget() {
        // Unsatisfiable over the candidate heights: x0^2 = 2 has no
        // Gaussian-rational solution; search must terminate and report none.
        let nv = 1;
        let p = Poly::var(nv, 0).mul(&Poly::var(nv, 0)).sub(&Poly::constant(nv, s("2")));
        let mut nodes = 10_000;
        assert!(solve_system(&[p], nv, &mut nodes, 64, &|_| true).is_none());
    }
}
