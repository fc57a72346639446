//! Dense exact linear algebra over Q(i): matrices, reduced row echelon
//! form, kernels, and canonical subspaces.
//!
//! Everything here is deterministic: equal inputs give identical outputs,
//! and subspaces are stored in reduced row-echelon form so equality of
//! subspaces is plain structural equality.

use crate::scalar::Scalar;
use crate::Error;

pub type Vector = Vec<Scalar>;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vector>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        assert!(rows.iter().all(|v| v.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Integer-entry convenience constructor.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect()).collect(),
        )
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vector {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn rows_vec(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + other.get(i, j))
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) - other.get(i, j))
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) * c)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in matrix product");
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = Scalar::zero();
            for k in 0..self.cols {
                if !self.get(i, k).is_zero() && !other.get(k, j).is_zero() {
                    acc += &(self.get(i, k) * other.get(k, j));
                }
            }
            acc
        })
    }

    /// `self * v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[Scalar]) -> Vector {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for k in 0..self.cols {
                    if !self.get(i, k).is_zero() && !v[k].is_zero() {
                        acc += &(self.get(i, k) * &v[k]);
                    }
                }
                acc
            })
            .collect()
    }

    /// `v * self` for a row vector `v`.
    pub fn vec_mul(&self, v: &[Scalar]) -> Vector {
        assert_eq!(self.rows, v.len());
        (0..self.cols)
            .map(|j| {
                let mut acc = Scalar::zero();
                for k in 0..self.rows {
                    if !v[k].is_zero() && !self.get(k, j).is_zero() {
                        acc += &(&v[k] * self.get(k, j));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, mut e: u32) -> Matrix {
        assert_eq!(self.rows, self.cols);
        let mut acc = Matrix::identity(self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// In-place reduced row echelon form; returns pivot column indices.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self.get(r, c).inv().unwrap();
            for j in c..self.cols {
                let v = self.get(r, j) * &inv;
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i != r && !self.get(i, c).is_zero() {
                    let f = self.get(i, c).clone();
                    for j in c..self.cols {
                        let v = self.get(i, j) - &(&f * self.get(r, j));
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref_in_place().len()
    }

    pub fn det(&self) -> Scalar {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Scalar::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Scalar::zero();
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let pivot = m.get(c, c).clone();
            det *= &pivot;
            let inv = pivot.inv().unwrap();
            for i in c + 1..n {
                if !m.get(i, c).is_zero() {
                    let f = m.get(i, c) * &inv;
                    for j in c..n {
                        let v = m.get(i, j) - &(&f * m.get(c, j));
                        m.set(i, j, v);
                    }
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Matrix::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Scalar::one());
        }
        let pivots = aug.rref_in_place();
        if pivots.len() != n || pivots.iter().enumerate().any(|(k, &c)| k != c) {
            return None;
        }
        Some(Matrix::from_fn(n, n, |i, j| aug.get(i, n + j).clone()))
    }

    /// Canonical basis of `{v : self * v = 0}` (column null space).
    pub fn kernel(&self) -> Subspace {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let n = self.cols;
        let pivot_set: Vec<bool> = {
            let mut v = vec![false; n];
            for &p in &pivots {
                v[p] = true;
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..n {
            if pivot_set[free] {
                continue;
            }
            let mut v = vec![Scalar::zero(); n];
            v[free] = Scalar::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m.get(r, free).clone();
            }
            basis.push(v);
        }
        Subspace::from_spanning(n, basis)
    }

    /// One solution of `self * x = b`, if consistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vector> {
        assert_eq!(self.rows, b.len());
        let mut aug = Matrix::zero(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let pivots = aug.rref_in_place();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = aug.get(r, self.cols).clone();
        }
        Some(x)
    }

    pub fn trace(&self) -> Scalar {
        assert_eq!(self.rows, self.cols);
        let mut t = Scalar::zero();
        for i in 0..self.rows {
            t += self.get(i, i);
        }
        t
    }

    /// Characteristic polynomial coefficients `[c0, c1, ..., c_{n-1}, 1]`
    /// of `t^n + c_{n-1} t^{n-1} + ... + c0` (Faddeev–LeVerrier).
    pub fn char_poly(&self) -> Vec<Scalar> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut coeffs = vec![Scalar::zero(); n + 1];
        coeffs[n] = Scalar::one();
        let mut m = Matrix::zero(n, n);
        for k in 1..=n {
            // M_k = A * (M_{k-1} + c_{n-k+1} I)
            let mut shifted = m.clone();
            for i in 0..n {
                let v = shifted.get(i, i) + &coeffs[n - k + 1];
                shifted.set(i, i, v);
            }
            m = self.mul(&shifted);
            let t = m.trace();
            let k_scalar = Scalar::from_int(k as i64);
            coeffs[n - k] = -(&t / &k_scalar);
        }
        coeffs
    }

    pub fn is_nilpotent(&self) -> bool {
        assert_eq!(self.rows, self.cols);
        self.pow(self.rows as u32).is_zero()
    }
}

impl std::fmt::Debug for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// A subspace of Q(i)^n, stored as a reduced row-echelon basis.
///
/// The representation is canonical: two equal subspaces compare equal
/// structurally, and containment checks reduce to row reduction.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vector>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace::from_spanning(ambient, Matrix::identity(ambient).rows_vec())
    }

    pub fn from_spanning(ambient: usize, vectors: Vec<Vector>) -> Self {
        assert!(vectors.iter().all(|v| v.len() == ambient), "vector length mismatch");
        if vectors.is_empty() {
            return Subspace::zero(ambient);
        }
        let mut m = Matrix::from_rows(vectors);
        let pivots = m.rref_in_place();
        let basis = (0..pivots.len()).map(|i| m.row(i)).collect();
        Subspace { ambient, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn basis_matrix(&self) -> Matrix {
        if self.basis.is_empty() {
            Matrix::zero(0, self.ambient)
        } else {
            Matrix::from_rows(self.basis.clone())
        }
    }

    pub fn contains_vec(&self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.ambient);
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        Subspace::from_spanning(self.ambient, rows).dim() == self.dim()
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains_vec(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        let mut rows = self.basis.clone();
        rows.extend(other.basis.clone());
        Subspace::from_spanning(self.ambient, rows)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(self.ambient);
        }
        // Solve a*U + b*V = 0 over stacked coefficients; intersection is
        // spanned by the a-part images.
        let k = self.dim();
        let m = other.dim();
        let stacked = Matrix::from_fn(self.ambient, k + m, |i, j| {
            if j < k {
                self.basis[j][i].clone()
            } else {
                -other.basis[j - k][i].clone()
            }
        });
        let null = stacked.kernel();
        let vectors = null
            .basis()
            .iter()
            .map(|coeffs| {
                let mut v = vec![Scalar::zero(); self.ambient];
                for (j, row) in self.basis.iter().enumerate() {
                    if !coeffs[j].is_zero() {
                        for (t, x) in v.iter_mut().zip(row) {
                            *t += &(&coeffs[j] * x);
                        }
                    }
                }
                v
            })
            .collect();
        Subspace::from_spanning(self.ambient, vectors)
    }

    /// Coordinates of `v` in this subspace's basis, if `v` lies in it.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vector> {
        // RREF basis: coefficients are read off at the pivot columns.
        let mut coords = Vec::with_capacity(self.dim());
        let mut rem = v.to_vec();
        for row in &self.basis {
            let p = row.iter().position(|x| !x.is_zero())?;
            let c = rem[p].clone();
            if !c.is_zero() {
                for (t, x) in rem.iter_mut().zip(row) {
                    *t -= &(&c * x);
                }
            }
            coords.push(c);
        }
        if rem.iter().all(Scalar::is_zero) {
            Some(coords)
        } else {
            None
        }
    }

    /// Standard basis vectors extending this subspace to the full space.
    pub fn complement_basis(&self) -> Vec<Vector> {
        let mut rows = self.basis.clone();
        let mut rank = self.dim();
        let mut out = Vec::new();
        for j in 0..self.ambient {
            let mut e = vec![Scalar::zero(); self.ambient];
            e[j] = Scalar::one();
            rows.push(e.clone());
            let new_rank = Subspace::from_spanning(self.ambient, rows.clone()).dim();
            if new_rank > rank {
                rank = new_rank;
                out.push(e);
            } else {
                rows.pop();
            }
        }
        out
    }
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subspace(dim {} of {}) ", self.dim(), self.ambient)?;
        f.debug_list()
            .entries(self.basis.iter().map(|r| {
                r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
            }))
            .finish()
    }
}

/// A quotient V/W presented by representative rows and a projection.
pub struct Quotient {
    pub space: Subspace,
    pub sub: Subspace,
    /// Rows: representatives of the quotient basis inside V.
    pub reps: Vec<Vector>,
}

impl Quotient {
    pub fn new(space: &Subspace, sub: &Subspace) -> Quotient {
        assert!(space.contains(sub), "quotient requires sub ⊆ space");
        let mut rows = sub.basis().to_vec();
        let mut rank = sub.dim();
        let mut reps = Vec::new();
        for v in space.basis() {
            rows.push(v.clone());
            let r = Subspace::from_spanning(space.ambient_dim(), rows.clone()).dim();
            if r > rank {
                rank = r;
                reps.push(v.clone());
            } else {
                rows.pop();
            }
        }
        Quotient { space: space.clone(), sub: sub.clone(), reps }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Coordinates of `v + sub` in the representative basis.
    pub fn project(&self, v: &[Scalar]) -> Option<Vector> {
        let n = self.space.ambient_dim();
        let mut rows = self.sub.basis().to_vec();
        rows.extend(self.reps.clone());
        if rows.is_empty() {
            return if v.iter().all(Scalar::is_zero) { Some(Vec::new()) } else { None };
        }
        let mat = Matrix::from_rows(rows).transpose();
        debug_assert_eq!(mat.nrows(), n);
        let coeffs = mat.solve(v)?;
        Some(coeffs[self.sub.dim()..].to_vec())
    }

    /// Matrix (row convention) of the map induced on the quotient by
    /// `v -> op(v)`, given as images of the representatives.
    pub fn induced_matrix(&self, op: impl Fn(&[Scalar]) -> Vector) -> Result<Matrix, Error> {
        let k = self.dim();
        let mut m = Matrix::zero(k, k);
        for (i, rep) in self.reps.iter().enumerate() {
            let img = op(rep);
            let coords = self
                .project(&img)
                .ok_or_else(|| Error::Invalid("operator does not preserve the quotient".into()))?;
            for (j, c) in coords.into_iter().enumerate() {
                m.set(i, j, c);
            }
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_rank_one() {
        let m = Matrix::from_i64(&[&[1, 1], &[0, 0]]);
        let k = m.kernel();
        assert_eq!(k.dim(), 1);
        // span{(1, -1)} canonically: leading entry 1.
        assert_eq!(k.basis()[0], vec![Scalar::one(), Scalar::from_int(-1)]);
        assert_eq!(k.dim() + m.rank(), m.ncols());
    }

    #[test]
    fn kernel_identity_trivial() {
        let m = Matrix::identity(3);
        assert!(m.kernel().is_zero());
    }

    #[test]
    fn kernel_canonical_under_row_ops() {
        // Same constraint row space, different presentation.
        let a = Matrix::from_i64(&[&[1, 2, 3], &[0, 1, 1]]);
        let b = Matrix::from_i64(&[&[2, 5, 7], &[1, 3, 4], &[3, 8, 11]]);
        assert_eq!(a.kernel(), b.kernel());
    }

    #[test]
    fn inverse_round_trip() {
        let m = Matrix::from_i64(&[&[1, 2], &[3, 5]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        assert!(Matrix::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn char_poly_2x2() {
        // [[1,2],[3,4]]: t^2 - 5t - 2
        let m = Matrix::from_i64(&[&[1, 2], &[3, 4]]);
        let cp = m.char_poly();
        assert_eq!(cp, vec![Scalar::from_int(-2), Scalar::from_int(-5), Scalar::one()]);
    }

    #[test]
    fn nilpotent_checks() {
        let strict = Matrix::from_i64(&[&[0, 1, 5], &[0, 0, 2], &[0, 0, 0]]);
        assert!(strict.is_nilpotent());
        assert!(!Matrix::from_i64(&[&[1, 0], &[0, 2]]).is_nilpotent());
    }

    #[test]
    fn subspace_ops() {
        let u = Subspace::from_spanning(3, vec![
            vec![Scalar::from_int(2), Scalar::zero(), Scalar::zero()],
            vec![Scalar::from_int(1), Scalar::one(), Scalar::zero()],
        ]);
        assert_eq!(u.dim(), 2);
        let v = Subspace::from_spanning(3, vec![
            vec![Scalar::zero(), Scalar::one(), Scalar::one()],
        ]);
        let s = u.sum(&v);
        assert_eq!(s.dim(), 3);
        let w = u.intersect(&v);
        assert!(w.is_zero());
        let v2 = Subspace::from_spanning(3, vec![
            vec![Scalar::zero(), Scalar::from_int(3), Scalar::zero()],
            vec![Scalar::zero(), Scalar::zero(), Scalar::one()],
        ]);
        let w2 = u.intersect(&v2);
        assert_eq!(w2.dim(), 1);
        assert!(u.contains(&w2));
        assert!(v2.contains(&w2));
    }

    #[test]
    fn quotient_projection() {
        let full = Subspace::full(3);
        let sub = Subspace::from_spanning(3, vec![vec![
            Scalar::one(),
            Scalar::one(),
            Scalar::zero(),
        ]]);
        let q = Quotient::new(&full, &sub);
        assert_eq!(q.dim(), 2);
        let p = q.project(&[Scalar::from_int(5), Scalar::from_int(5), Scalar::zero()]).unwrap();
        assert!(p.iter().all(Scalar::is_zero));
    }
}
