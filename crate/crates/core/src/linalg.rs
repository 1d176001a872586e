//! Dense exact linear algebra over a `Field`.

use crate::scalars::{Field, Scalar};

pub type Vector = Vec<Scalar>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(f: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![f.zero(); rows * cols] }
    }
    pub fn identity(f: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(f, n, n);
        for i in 0..n {
            m.data[i * n + i] = f.one();
        }
        m
    }
    pub fn scalar(f: &Field, n: usize, c: &Scalar) -> Matrix {
        Matrix::identity(f, n).scale(f, c)
    }
    pub fn from_rows(rows: Vec<Vector>, cols: usize) -> Matrix {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols);
            data.extend(row);
        }
        Matrix { rows: r, cols, data }
    }
    pub fn from_cols(f: &Field, cols: &[Vector], rows: usize) -> Matrix {
        let mut m = Matrix::zeros(f, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..rows {
                m.data[i * m.cols + j] = c[i].clone();
            }
        }
        m
    }
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }
    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn col(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    pub fn is_zero(&self, f: &Field) -> bool {
        self.data.iter().all(|x| f.is_zero(x))
    }

    pub fn mul(&self, f: &Field, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "matrix shape mismatch");
        let mut out = Matrix::zeros(f, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if f.is_zero(b) {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = f.add(&out.data[idx], &f.mul(a, b));
                }
            }
        }
        out
    }
    pub fn mul_vec(&self, f: &Field, v: &[Scalar]) -> Vector {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !f.is_zero(a) && !f.is_zero(b) {
                        acc = f.add(&acc, &f.mul(a, b));
                    }
                }
                acc
            })
            .collect()
    }
    pub fn add(&self, f: &Field, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| f.add(a, b)).collect() }
    }
    pub fn sub(&self, f: &Field, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| f.sub(a, b)).collect() }
    }
    pub fn scale(&self, f: &Field, c: &Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| f.mul(a, c)).collect() }
    }
    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }
    pub fn pow(&self, f: &Field, e: usize) -> Matrix {
        let mut acc = Matrix::identity(f, self.rows);
        for _ in 0..e {
            acc = acc.mul(f, self);
        }
        acc
    }
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: rows.len(), cols: cols.len(), data }
    }
    /// [[a, b], [c, d]] from four blocks.
    pub fn block(f: &Field, a: &Matrix, b: &Matrix, c: &Matrix, d: &Matrix) -> Matrix {
        let (r1, r2, c1, c2) = (a.rows, c.rows, a.cols, b.cols);
        let mut m = Matrix::zeros(f, r1 + r2, c1 + c2);
        for i in 0..r1 {
            for j in 0..c1 {
                m.set(i, j, a.get(i, j).clone());
            }
            for j in 0..c2 {
                m.set(i, c1 + j, b.get(i, j).clone());
            }
        }
        for i in 0..r2 {
            for j in 0..c1 {
                m.set(r1 + i, j, c.get(i, j).clone());
            }
            for j in 0..c2 {
                m.set(r1 + i, c1 + j, d.get(i, j).clone());
            }
        }
        m
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self, f: &Field) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = vec![];
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !f.is_zero(m.get(i, c))) else { continue };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = f.inv(m.get(r, c)).unwrap();
            for j in c..m.cols {
                let v = f.mul(m.get(r, j), &inv);
                m.set(r, j, v);
            }
            let prow: Vector = m.row(r).to_vec();
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let fac = m.get(i, c).clone();
                if f.is_zero(&fac) {
                    continue;
                }
                for j in c..m.cols {
                    if !f.is_zero(&prow[j]) {
                        let v = f.sub(m.get(i, j), &f.mul(&fac, &prow[j]));
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self, f: &Field) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let mut e = Echelon::new(self.cols);
        for i in 0..self.rows {
            e.insert(f, self.row(i).to_vec());
        }
        e.dim()
    }

    /// Basis of {x : A x = 0}.
    pub fn nullspace(&self, f: &Field) -> Vec<Vector> {
        let (r, pivots) = self.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut x = vec![f.zero(); self.cols];
                x[fc] = f.one();
                for (k, &pc) in pivots.iter().enumerate() {
                    x[pc] = f.neg(r.get(k, fc));
                }
                x
            })
            .collect()
    }

    /// Some x with A x = b.
    pub fn solve(&self, f: &Field, b: &[Scalar]) -> Option<Vector> {
        let mut aug = Matrix::zeros(f, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref(f);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![f.zero(); self.cols];
        for (k, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(k, self.cols).clone();
        }
        Some(x)
    }

    pub fn det(&self, f: &Field) -> Scalar {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut det = f.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !f.is_zero(m.get(i, c))) else { return f.zero() };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = f.neg(&det);
            }
            let piv = m.get(c, c).clone();
            det = f.mul(&det, &piv);
            let inv = f.inv(&piv).unwrap();
            for i in c + 1..n {
                let fac = f.mul(m.get(i, c), &inv);
                if f.is_zero(&fac) {
                    continue;
                }
                for j in c..n {
                    let v = f.sub(m.get(i, j), &f.mul(&fac, m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    pub fn inverse(&self, f: &Field) -> Option<Matrix> {
        assert!(self.is_square());
        let n = self.rows;
        let aug = Matrix::block(f, self, &Matrix::identity(f, n), &Matrix::zeros(f, 0, n), &Matrix::zeros(f, 0, n));
        let (r, pivots) = aug.rref(f);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        let rows: Vec<usize> = (0..n).collect();
        Some(r.submatrix(&rows, &cols))
    }

    pub fn to_strings(&self, f: &Field) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|x| f.fmt(x)).collect()).collect()
    }
}

/// Incremental row echelon basis of a subspace of K^n. Each stored row has a
/// pivot equal to one and vanishes at the pivots of all earlier rows, so a
/// single ordered pass reduces a vector.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub n: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
    /// combination of inserted generators giving each row, when tracked
    combos: Vec<Vector>,
    inserted: usize,
    track: bool,
}

impl Echelon {
    pub fn new(n: usize) -> Echelon {
        Echelon { n, rows: vec![], pivots: vec![], combos: vec![], inserted: 0, track: false }
    }
    /// Also remember how each row arises from the accepted generators.
    pub fn tracked(n: usize) -> Echelon {
        Echelon { track: true, ..Echelon::new(n) }
    }
    pub fn dim(&self) -> usize {
        self.rows.len()
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    /// Returns the remainder of v and the coefficients used per row.
    fn reduce_with(&self, f: &Field, mut v: Vector) -> (Vector, Vec<Scalar>) {
        let mut coeffs = Vec::with_capacity(self.rows.len());
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p].clone();
            if !f.is_zero(&c) {
                for (x, y) in v.iter_mut().zip(row) {
                    if !f.is_zero(y) {
                        *x = f.sub(x, &f.mul(&c, y));
                    }
                }
            }
            coeffs.push(c);
        }
        (v, coeffs)
    }

    pub fn reduce(&self, f: &Field, v: Vector) -> Vector {
        self.reduce_with(f, v).0
    }
    pub fn contains(&self, f: &Field, v: &[Scalar]) -> bool {
        self.reduce(f, v.to_vec()).iter().all(|x| f.is_zero(x))
    }

    /// Inserts v; returns true when it enlarged the span. In tracked mode the
    /// vector counts as a new generator only when it is independent.
    pub fn insert(&mut self, f: &Field, v: Vector) -> bool {
        assert_eq!(v.len(), self.n);
        let (mut r, coeffs) = self.reduce_with(f, v);
        let Some(p) = r.iter().position(|x| !f.is_zero(x)) else { return false };
        let inv = f.inv(&r[p]).unwrap();
        for x in r.iter_mut() {
            if !f.is_zero(x) {
                *x = f.mul(x, &inv);
            }
        }
        if self.track {
            // new row = (v - sum c_k row_k) / pivot
            let g = self.inserted;
            let mut combo = vec![f.zero(); g + 1];
            combo[g] = f.one();
            for (k, c) in coeffs.iter().enumerate() {
                if f.is_zero(c) {
                    continue;
                }
                for (j, y) in self.combos[k].iter().enumerate() {
                    combo[j] = f.sub(&combo[j], &f.mul(c, y));
                }
            }
            for x in combo.iter_mut() {
                *x = f.mul(x, &inv);
            }
            self.combos.push(combo);
            self.inserted += 1;
        }
        self.rows.push(r);
        self.pivots.push(p);
        true
    }

    /// Coefficients expressing v in terms of the accepted generators, if v lies
    /// in the span (tracked mode only).
    pub fn express(&self, f: &Field, v: Vector) -> Option<Vector> {
        assert!(self.track);
        let (r, coeffs) = self.reduce_with(f, v);
        if !r.iter().all(|x| f.is_zero(x)) {
            return None;
        }
        let mut out = vec![f.zero(); self.inserted];
        for (k, c) in coeffs.iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            for (j, y) in self.combos[k].iter().enumerate() {
                if !f.is_zero(y) {
                    out[j] = f.add(&out[j], &f.mul(c, y));
                }
            }
        }
        Some(out)
    }
}

/// A subspace held in reduced row echelon form, with coordinates read off at
/// the pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    pub n: usize,
    pub basis: Vec<Vector>,
    pub pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(n: usize) -> Subspace {
        Subspace { n, basis: vec![], pivots: vec![] }
    }
    pub fn full(f: &Field, n: usize) -> Subspace {
        Subspace::span(f, n, (0..n).map(|i| unit(f, n, i)).collect())
    }
    pub fn span(f: &Field, n: usize, vecs: Vec<Vector>) -> Subspace {
        if vecs.is_empty() {
            return Subspace::zero(n);
        }
        let m = Matrix::from_rows(vecs, n);
        let (r, pivots) = m.rref(f);
        let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Subspace { n, basis, pivots }
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn reduce(&self, f: &Field, v: &[Scalar]) -> Vector {
        let mut v = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let c = v[p].clone();
            if f.is_zero(&c) {
                continue;
            }
            for (x, y) in v.iter_mut().zip(row) {
                if !f.is_zero(y) {
                    *x = f.sub(x, &f.mul(&c, y));
                }
            }
        }
        v
    }
    pub fn contains(&self, f: &Field, v: &[Scalar]) -> bool {
        self.reduce(f, v).iter().all(|x| f.is_zero(x))
    }
    /// Coordinates of a member with respect to `basis`.
    pub fn coords(&self, f: &Field, v: &[Scalar]) -> Option<Vector> {
        self.contains(f, v).then(|| self.pivots.iter().map(|&p| v[p].clone()).collect())
    }
    pub fn contains_space(&self, f: &Field, o: &Subspace) -> bool {
        o.basis.iter().all(|v| self.contains(f, v))
    }
    pub fn sum(&self, f: &Field, o: &Subspace) -> Subspace {
        let mut v = self.basis.clone();
        v.extend(o.basis.iter().cloned());
        Subspace::span(f, self.n, v)
    }
    /// Non-pivot coordinates; their unit vectors span a complement.
    pub fn complement_indices(&self) -> Vec<usize> {
        (0..self.n).filter(|c| !self.pivots.contains(c)).collect()
    }
}

pub fn unit(f: &Field, n: usize, i: usize) -> Vector {
    let mut v = vec![f.zero(); n];
    v[i] = f.one();
    v
}

pub fn vec_add(f: &Field, a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| f.add(x, y)).collect()
}

pub fn vec_scale(f: &Field, a: &[Scalar], c: &Scalar) -> Vector {
    a.iter().map(|x| f.mul(x, c)).collect()
}

pub fn vec_is_zero(f: &Field, a: &[Scalar]) -> bool {
    a.iter().all(|x| f.is_zero(x))
}

/// v += c * w
pub fn axpy(f: &Field, v: &mut [Scalar], c: &Scalar, w: &[Scalar]) {
    if f.is_zero(c) {
        return;
    }
    for (x, y) in v.iter_mut().zip(w) {
        if !f.is_zero(y) {
            *x = f.add(x, &f.mul(c, y));
        }
    }
}
