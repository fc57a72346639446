//! Structure-constant tables `[e_i, e_j] = sum_k c_{ij}^k e_k` and the
//! bracket operations built on them.
//!
//! Coefficients are stored sparsely; zero entries are never kept, so two
//! tables of the same algebra in the same basis compare equal structurally.
//! Indices are 0-based internally, 1-based in the JSON interchange format.

use std::collections::BTreeMap;

use crate::linalg::{Matrix, Subspace, Vector};
use crate::scalar::Scalar;
use crate::Error;

/// Sparse coefficient vector: index -> nonzero scalar.
pub type SparseVec = BTreeMap<usize, Scalar>;

#[derive(Clone)]
pub struct AlgebraTable {
    dim: usize,
    products: BTreeMap<(usize, usize), SparseVec>,
    labels: Option<Vec<String>>,
}

/// Outcome of the Leibniz-identity verification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckResult {
    Pass,
    /// 1-based basis triple and the nonzero defect
    /// `[e_i,[e_j,e_k]] - [[e_i,e_j],e_k] + [[e_i,e_k],e_j]`.
    Fail { witness: (usize, usize, usize), defect: Vector },
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        matches!(self, CheckResult::Pass)
    }
}

/// `true`, or a 1-based witness pair breaking antisymmetry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LieCheck {
    Lie,
    NotLie { witness: (usize, usize) },
}

impl LieCheck {
    pub fn is_lie(&self) -> bool {
        matches!(self, LieCheck::Lie)
    }
}

impl AlgebraTable {
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be at least 1");
        AlgebraTable { dim, products: BTreeMap::new(), labels: None }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.dim);
        self.labels = Some(labels);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Label of 0-based basis index `i` ("e{i+1}" when unnamed).
    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => format!("e{}", i + 1),
        }
    }

    /// Set coefficient `c_{ij}^k = c` (0-based indices).
    pub fn set(&mut self, i: usize, j: usize, k: usize, c: Scalar) {
        assert!(i < self.dim && j < self.dim && k < self.dim, "index out of range");
        let entry = self.products.entry((i, j)).or_default();
        if c.is_zero() {
            entry.remove(&k);
        } else {
            entry.insert(k, c);
        }
        if self.products.get(&(i, j)).is_some_and(|m| m.is_empty()) {
            self.products.remove(&(i, j));
        }
    }

    /// Set `[e_i, e_j]` to integer coordinates (test/builder convenience).
    pub fn set_i64(&mut self, i: usize, j: usize, coords: &[i64]) {
        assert_eq!(coords.len(), self.dim);
        for (k, &c) in coords.iter().enumerate() {
            self.set(i, j, k, Scalar::from_int(c));
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, &Scalar)> {
        self.products
            .iter()
            .flat_map(|(&(i, j), v)| v.iter().map(move |(&k, c)| (i, j, k, c)))
    }

    /// Dense coordinates of `[e_i, e_j]`.
    pub fn basis_bracket(&self, i: usize, j: usize) -> Vector {
        let mut v = vec![Scalar::zero(); self.dim];
        if let Some(sv) = self.products.get(&(i, j)) {
            for (&k, c) in sv {
                v[k] = c.clone();
            }
        }
        v
    }

    /// Bilinear extension of the table.
    pub fn bracket(&self, u: &[Scalar], v: &[Scalar]) -> Result<Vector, Error> {
        if u.len() != self.dim || v.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "bracket expects vectors of length {}",
                self.dim
            )));
        }
        let mut out = vec![Scalar::zero(); self.dim];
        for (&(i, j), sv) in &self.products {
            if u[i].is_zero() || v[j].is_zero() {
                continue;
            }
            let f = &u[i] * &v[j];
            for (&k, c) in sv {
                out[k] += &(&f * c);
            }
        }
        Ok(out)
    }

    /// Verify the Leibniz identity on all basis triples; bilinearity
    /// extends the certificate to arbitrary elements.
    pub fn leibniz_check(&self) -> CheckResult {
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                let ij = self.basis_bracket(i, j);
                for k in 0..n {
                    let jk = self.basis_bracket(j, k);
                    let ik = self.basis_bracket(i, k);
                    let ei = unit(n, i);
                    let ej = unit(n, j);
                    let ek = unit(n, k);
                    let t1 = self.bracket(&ei, &jk).unwrap();
                    let t2 = self.bracket(&ij, &ek).unwrap();
                    let t3 = self.bracket(&ik, &ej).unwrap();
                    let mut defect = t1;
                    for m in 0..n {
                        defect[m] -= &t2[m];
                        defect[m] += &t3[m];
                    }
                    if defect.iter().any(|x| !x.is_zero()) {
                        return CheckResult::Fail { witness: (i + 1, j + 1, k + 1), defect };
                    }
                }
            }
        }
        CheckResult::Pass
    }

    /// Antisymmetry scan: `c_ii = 0` and `c_ij = -c_ji`.
    pub fn is_lie(&self) -> LieCheck {
        let n = self.dim;
        for i in 0..n {
            if self.basis_bracket(i, i).iter().any(|x| !x.is_zero()) {
                return LieCheck::NotLie { witness: (i + 1, i + 1) };
            }
            for j in i + 1..n {
                let ij = self.basis_bracket(i, j);
                let ji = self.basis_bracket(j, i);
                if ij.iter().zip(&ji).any(|(a, b)| !(a + b).is_zero()) {
                    return LieCheck::NotLie { witness: (i + 1, j + 1) };
                }
            }
        }
        LieCheck::Lie
    }

    /// Table of the same algebra in the basis `e'_i = sum_j p_{ij} e_j`
    /// (rows of `p` are the new basis vectors in old coordinates).
    pub fn change_basis(&self, p: &Matrix) -> Result<AlgebraTable, Error> {
        if p.nrows() != self.dim || p.ncols() != self.dim {
            return Err(Error::DimensionMismatch("basis matrix must be dim x dim".into()));
        }
        let p_inv = p.inverse().ok_or(Error::SingularMatrix)?;
        let mut out = AlgebraTable::new(self.dim);
        out.labels = self.labels.clone();
        for i in 0..self.dim {
            let ri = p.row(i);
            for j in 0..self.dim {
                let rj = p.row(j);
                let prod_old = self.bracket(&ri, &rj).unwrap();
                // coordinates in the new basis: w with w * p = prod_old
                let w = p_inv.vec_mul(&prod_old);
                for (k, c) in w.into_iter().enumerate() {
                    out.set(i, j, k, c);
                }
            }
        }
        Ok(out)
    }

    /// Canonical span of `{[x, y] : x in basis(u), y in basis(v)}`.
    pub fn product_space(&self, u: &Subspace, v: &Subspace) -> Result<Subspace, Error> {
        if u.ambient_dim() != self.dim || v.ambient_dim() != self.dim {
            return Err(Error::DimensionMismatch("subspace ambient mismatch".into()));
        }
        let mut vectors = Vec::new();
        for x in u.basis() {
            for y in v.basis() {
                vectors.push(self.bracket(x, y).unwrap());
            }
        }
        Ok(Subspace::from_spanning(self.dim, vectors))
    }

    pub fn full_space(&self) -> Subspace {
        Subspace::full(self.dim)
    }

    /// The square ideal `[L, L]`.
    pub fn square(&self) -> Subspace {
        let l = self.full_space();
        self.product_space(&l, &l).unwrap()
    }

    pub fn is_abelian(&self) -> bool {
        self.products.is_empty()
    }

    /// Restriction table of a bracket-closed subspace, in its echelon basis.
    pub fn restrict_to(&self, sub: &Subspace) -> Result<AlgebraTable, Error> {
        if sub.ambient_dim() != self.dim {
            return Err(Error::DimensionMismatch("subspace ambient mismatch".into()));
        }
        if sub.is_zero() {
            return Err(Error::Invalid("cannot restrict to the zero subspace".into()));
        }
        let k = sub.dim();
        let mut out = AlgebraTable::new(k);
        for (i, x) in sub.basis().iter().enumerate() {
            for (j, y) in sub.basis().iter().enumerate() {
                let prod = self.bracket(x, y).unwrap();
                let coords = sub.coordinates(&prod).ok_or(Error::NotClosed)?;
                for (m, c) in coords.into_iter().enumerate() {
                    out.set(i, j, m, c);
                }
            }
        }
        Ok(out)
    }

    /// Solvable-extension assembly: a `(dim n + 1)`-dimensional table with
    /// the base algebra on the first `n` coordinates, `[e_i, x]` read from
    /// the columns of `rx`, `[x, e_i] = left_x[i]`, and `[x, x] = xx`.
    pub fn assemble_extension(
        n: &AlgebraTable,
        rx: &Matrix,
        left_x: &[Vector],
        xx: &[Scalar],
    ) -> Result<AlgebraTable, Error> {
        let d = n.dim();
        if rx.nrows() != d || rx.ncols() != d {
            return Err(Error::DimensionMismatch("rx must be (dim n) x (dim n)".into()));
        }
        if left_x.len() != d {
            return Err(Error::DimensionMismatch("left_x must have dim n entries".into()));
        }
        let embed = |v: &[Scalar]| -> Result<Vector, Error> {
            match v.len() {
                l if l == d => {
                    let mut w = v.to_vec();
                    w.push(Scalar::zero());
                    Ok(w)
                }
                l if l == d + 1 => {
                    if !v[d].is_zero() {
                        return Err(Error::DimensionMismatch(
                            "extension products must have zero coordinate along x".into(),
                        ));
                    }
                    Ok(v.to_vec())
                }
                _ => Err(Error::DimensionMismatch("vector length must be dim n or dim n + 1".into())),
            }
        };
        let mut out = AlgebraTable::new(d + 1);
        for (i, j, k, c) in n.entries() {
            out.set(i, j, k, c.clone());
        }
        for i in 0..d {
            for k in 0..d {
                out.set(i, d, k, rx.get(k, i).clone());
            }
            let lv = embed(&left_x[i])?;
            for (k, c) in lv.into_iter().enumerate() {
                out.set(d, i, k, c);
            }
        }
        let xv = embed(xx)?;
        for (k, c) in xv.into_iter().enumerate() {
            out.set(d, d, k, c);
        }
        Ok(out)
    }
}

/// Tables are equal when dimensions and coefficient data agree; labels are
/// presentation only.
impl PartialEq for AlgebraTable {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.products == other.products
    }
}

impl Eq for AlgebraTable {}

impl std::fmt::Debug for AlgebraTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "AlgebraTable(dim {}) {{ ", self.dim)?;
        for (i, j, k, c) in self.entries() {
            write!(f, "[{},{}]+={}*{} ", self.label(i), self.label(j), c, self.label(k))?;
        }
        write!(f, "}}")
    }
}

pub fn unit(n: usize, i: usize) -> Vector {
    let mut v = vec![Scalar::zero(); n];
    v[i] = Scalar::one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mu1() -> AlgebraTable {
        let mut t = AlgebraTable::new(2);
        t.set(0, 0, 1, Scalar::one());
        t
    }

    fn sl2c() -> AlgebraTable {
        // basis e, f, h, x
        let mut t = AlgebraTable::new(4);
        t.set(0, 2, 0, Scalar::from_int(2));
        t.set(2, 0, 0, Scalar::from_int(-2));
        t.set(2, 1, 1, Scalar::from_int(2));
        t.set(1, 2, 1, Scalar::from_int(-2));
        t.set(0, 1, 2, Scalar::one());
        t.set(1, 0, 2, Scalar::from_int(-1));
        t
    }

    #[test]
    fn bracket_examples() {
        let t = mu1();
        let e1 = unit(2, 0);
        assert_eq!(t.bracket(&e1, &e1).unwrap(), unit(2, 1));

        let s = sl2c();
        let e = unit(4, 0);
        let f = unit(4, 1);
        assert_eq!(s.bracket(&e, &f).unwrap(), unit(4, 2));

        let ab = AlgebraTable::new(3);
        let u = vec![Scalar::from_int(1), Scalar::from_int(2), Scalar::from_int(3)];
        assert!(ab.bracket(&u, &u).unwrap().iter().all(Scalar::is_zero));

        assert!(t.bracket(&unit(3, 0), &e1).is_err());
    }

    #[test]
    fn leibniz_pass_and_fail() {
        assert!(mu1().leibniz_check().passed());
        assert!(sl2c().leibniz_check().passed());

        let mut bad = AlgebraTable::new(1);
        bad.set(0, 0, 0, Scalar::one());
        match bad.leibniz_check() {
            CheckResult::Fail { witness, defect } => {
                assert_eq!(witness, (1, 1, 1));
                assert_eq!(defect, vec![Scalar::one()]);
            }
            CheckResult::Pass => panic!("dim-1 idempotent table must fail"),
        }
    }

    #[test]
    fn lie_checks() {
        assert!(sl2c().is_lie().is_lie());
        assert_eq!(mu1().is_lie(), LieCheck::NotLie { witness: (1, 1) });
    }

    #[test]
    fn change_basis_identity_and_functorial() {
        let s = sl2c();
        assert_eq!(s.change_basis(&Matrix::identity(4)).unwrap(), s);

        let p = Matrix::from_i64(&[&[1, 1, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 2], &[0, 0, 0, 1]]);
        let q = Matrix::from_i64(&[&[1, 0, 0, 0], &[3, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 5, 1]]);
        let lhs = s.change_basis(&p).unwrap().change_basis(&q).unwrap();
        let rhs = s.change_basis(&q.mul(&p)).unwrap();
        assert_eq!(lhs, rhs);

        let singular = Matrix::zero(4, 4);
        assert!(matches!(s.change_basis(&singular), Err(Error::SingularMatrix)));
    }

    #[test]
    fn change_basis_lambda5_variant() {
        // {[e1,e1]=e3, [e2,e1]=e3, [e1,e2]=e3} under e1' = e1 - (1/2) e2
        // becomes {[e2,e1]=e3, [e1,e2]=e3}.
        let mut t = AlgebraTable::new(3);
        t.set(0, 0, 2, Scalar::one());
        t.set(1, 0, 2, Scalar::one());
        t.set(0, 1, 2, Scalar::one());
        let mut p = Matrix::identity(3);
        p.set(0, 1, Scalar::from_frac(-1, 2));
        let got = t.change_basis(&p).unwrap();
        let mut want = AlgebraTable::new(3);
        want.set(1, 0, 2, Scalar::one());
        want.set(0, 1, 2, Scalar::one());
        assert_eq!(got, want);
    }

    #[test]
    fn change_basis_rescales_output_coordinate() {
        // lambda2 under e3' = 2 e3: [e1,e1] = (1/2) e3'.
        let mut t = AlgebraTable::new(3);
        t.set(0, 0, 2, Scalar::one());
        let mut p = Matrix::identity(3);
        p.set(2, 2, Scalar::from_int(2));
        let got = t.change_basis(&p).unwrap();
        assert_eq!(got.basis_bracket(0, 0)[2], Scalar::from_frac(1, 2));
    }

    #[test]
    fn product_space_examples() {
        // lambda6: [e1,e1]=e2, [e2,e1]=e3 -> L^2 = span{e2, e3}.
        let mut l6 = AlgebraTable::new(3);
        l6.set(0, 0, 1, Scalar::one());
        l6.set(1, 0, 2, Scalar::one());
        let sq = l6.square();
        assert_eq!(sq.dim(), 2);
        assert!(sq.contains_vec(&unit(3, 1)));
        assert!(sq.contains_vec(&unit(3, 2)));

        assert!(AlgebraTable::new(3).square().is_zero());
    }

    #[test]
    fn restrict_to_subalgebra() {
        let s = sl2c();
        let sub = Subspace::from_spanning(4, vec![unit(4, 0), unit(4, 1), unit(4, 2)]);
        let r = s.restrict_to(&sub).unwrap();
        assert_eq!(r.dim(), 3);
        assert!(r.leibniz_check().passed());
        let not_closed = Subspace::from_spanning(4, vec![unit(4, 0), unit(4, 1)]);
        assert!(matches!(s.restrict_to(&not_closed), Err(Error::NotClosed)));
    }

    #[test]
    fn assemble_abelian_extension() {
        let base = AlgebraTable::new(3);
        let rx = Matrix::zero(3, 3);
        let left = vec![vec![Scalar::zero(); 3]; 3];
        let xx = vec![Scalar::zero(); 3];
        let t = AlgebraTable::assemble_extension(&base, &rx, &left, &xx).unwrap();
        assert_eq!(t, AlgebraTable::new(4));
    }
}
