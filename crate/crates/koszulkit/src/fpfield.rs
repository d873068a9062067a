//! Exact linear algebra over prime fields: dense matrices, reduced row
//! echelon form, and the subspace lattice of F_p^n.

use std::ops::{Index, IndexMut};

use crate::{Error, Result};

/// A prime field F_p with p <= 2^31. Elements are residues 0..p carried as
/// u64, so a product of two reduced elements never overflows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p > (1 << 31) {
            return Err(Error::InvalidInput(format!("p = {p} exceeds 2^31")));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(&self, base: u64, mut exp: u64) -> u64 {
        let mut base = base % self.p;
        let mut acc = 1 % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero residue.
    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(a % self.p != 0, "inverse of zero");
        self.pow(a, self.p - 2)
    }

    /// Canonical residue of a signed integer.
    pub fn reduce_i64(&self, a: i64) -> u64 {
        a.rem_euclid(self.p as i64) as u64
    }
}

/// Dense row-major matrix over a prime field; every entry is a reduced
/// residue < p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl Index<(usize, usize)> for FpMatrix {
    type Output = u64;
    fn index(&self, (r, c): (usize, usize)) -> &u64 {
        &self.entries[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for FpMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut u64 {
        &mut self.entries[r * self.cols + c]
    }
}

impl FpMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        FpMatrix {
            field,
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(field: PrimeField, rows: &[Vec<u64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    left: cols,
                    right: row.len(),
                });
            }
            for &x in row {
                if x >= field.p() {
                    return Err(Error::InvalidInput(format!(
                        "entry {x} is not a reduced residue mod {}",
                        field.p()
                    )));
                }
                entries.push(x);
            }
        }
        Ok(FpMatrix {
            field,
            rows: rows.len(),
            cols,
            entries,
        })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = FpMatrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)];
            }
        }
        t
    }

    pub fn mul(&self, other: &FpMatrix) -> Result<FpMatrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field.p(),
                right: other.field.p(),
            });
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                left: self.cols,
                right: other.rows,
            });
        }
        let mut out = FpMatrix::zeros(self.field, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    out[(r, c)] = self.field.add(out[(r, c)], self.field.mul(a, other[(k, c)]));
                }
            }
        }
        Ok(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, r: usize, s: u64) {
        for c in 0..self.cols {
            self[(r, c)] = self.field.mul(self[(r, c)], s);
        }
    }

    // row_i -= f * row_r
    fn sub_scaled_row(&mut self, i: usize, r: usize, f: u64) {
        for c in 0..self.cols {
            let delta = self.field.mul(f, self[(r, c)]);
            self[(i, c)] = self.field.sub(self[(i, c)], delta);
        }
    }

    /// Gauss-Jordan elimination. The pivot for each column is the first row
    /// (top to bottom) with a nonzero entry there, so the output is the
    /// canonical reduced row echelon form: leading 1s, zeros above and below
    /// each pivot, pivot columns strictly increasing, zero rows at the
    /// bottom. Returns (rank, rref, pivot columns).
    pub fn rref(&self) -> (usize, FpMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m[(i, c)] != 0) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = m.field.inv(m[(r, c)]);
            m.scale_row(r, inv);
            for i in 0..m.rows {
                if i != r && m[(i, c)] != 0 {
                    let f = m[(i, c)];
                    m.sub_scaled_row(i, r, f);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (r, m, pivots)
    }
}

/// A subspace of F_p^n in canonical form: the stored basis is the RREF of
/// any spanning set with zero rows dropped, so two subspaces are equal
/// exactly when their basis matrices are equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: FpMatrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: PrimeField, ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: FpMatrix::zeros(field, 0, ambient_dim),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: PrimeField, ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: FpMatrix::identity(field, ambient_dim),
            pivots: (0..ambient_dim).collect(),
        }
    }

    /// Span of the rows of a matrix.
    pub fn from_matrix(m: &FpMatrix) -> Self {
        let (rank, rref, pivots) = m.rref();
        let mut basis = FpMatrix::zeros(m.field, rank, m.cols);
        for r in 0..rank {
            for c in 0..m.cols {
                basis[(r, c)] = rref[(r, c)];
            }
        }
        Subspace {
            ambient_dim: m.cols,
            basis,
            pivots,
        }
    }

    pub fn from_spanning(field: PrimeField, ambient_dim: usize, spanning: &[Vec<u64>]) -> Result<Self> {
        for row in spanning {
            if row.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    left: ambient_dim,
                    right: row.len(),
                });
            }
        }
        if spanning.is_empty() {
            return Ok(Subspace::zero(field, ambient_dim));
        }
        let m = FpMatrix::from_rows(field, spanning)?;
        Ok(Subspace::from_matrix(&m))
    }

    pub fn field(&self) -> PrimeField {
        self.basis.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    /// Canonical RREF basis, one row per basis vector.
    pub fn basis(&self) -> &FpMatrix {
        &self.basis
    }

    pub fn basis_rows(&self) -> Vec<Vec<u64>> {
        (0..self.basis.rows).map(|r| self.basis.row(r).to_vec()).collect()
    }

    /// Pivot coordinates of the canonical basis, strictly increasing.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check_compatible(&self, other: &Subspace) -> Result<()> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch {
                left: self.field().p(),
                right: other.field().p(),
            });
        }
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                left: self.ambient_dim,
                right: other.ambient_dim,
            });
        }
        Ok(())
    }

    /// Normal form of v modulo the subspace: subtracts the unique combination
    /// of basis rows matching v on the pivot coordinates. The result has
    /// zeros at every pivot coordinate, and is zero iff v lies in the space.
    pub fn reduce_mod(&self, v: &[u64]) -> Result<Vec<u64>> {
        if v.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                left: self.ambient_dim,
                right: v.len(),
            });
        }
        let field = self.field();
        let mut out = v.to_vec();
        for (k, &pc) in self.pivots.iter().enumerate() {
            let c = out[pc];
            if c != 0 {
                let row = self.basis.row(k);
                for (o, &b) in out.iter_mut().zip(row) {
                    *o = field.sub(*o, field.mul(c, b));
                }
            }
        }
        Ok(out)
    }

    pub fn contains_vector(&self, v: &[u64]) -> Result<bool> {
        Ok(self.reduce_mod(v)?.iter().all(|&x| x == 0))
    }

    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        self.check_compatible(other)?;
        for r in 0..other.basis.rows {
            if !self.contains_vector(other.basis.row(r))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equals(&self, other: &Subspace) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(self == other)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let mut rows = self.basis_rows();
        rows.extend(other.basis_rows());
        Subspace::from_spanning(self.field(), self.ambient_dim, &rows)
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        // (U cap W)^perp = U^perp + W^perp, and the annihilator is an
        // involution, so intersect via three annihilators and one sum.
        let lhs = self.annihilator();
        let rhs = other.annihilator();
        Ok(lhs.sum(&rhs)?.annihilator())
    }

    /// The annihilator under the coordinatewise dot pairing: all v with
    /// <u, v> = 0 for every u in the space. dim + dim^perp = ambient, and
    /// applying it twice returns the original space.
    pub fn annihilator(&self) -> Subspace {
        let field = self.field();
        let n = self.ambient_dim;
        let mut is_pivot = vec![false; n];
        for &pc in &self.pivots {
            is_pivot[pc] = true;
        }
        // For each free coordinate j, e_j - sum_k B[k][j] e_{pivot_k} pairs
        // to zero with every RREF basis row.
        let mut rows = Vec::with_capacity(n - self.pivots.len());
        for j in 0..n {
            if is_pivot[j] {
                continue;
            }
            let mut v = vec![0u64; n];
            v[j] = 1;
            for (k, &pc) in self.pivots.iter().enumerate() {
                v[pc] = field.neg(self.basis[(k, j)]);
            }
            rows.push(v);
        }
        Subspace::from_spanning(field, n, &rows).expect("annihilator rows are well-formed")
    }

    /// Coordinates e_i whose cosets form a basis of the quotient F_p^n / U:
    /// exactly the non-pivot coordinates, ascending.
    pub fn quotient_basis(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient_dim];
        for &pc in &self.pivots {
            is_pivot[pc] = true;
        }
        (0..self.ambient_dim).filter(|&i| !is_pivot[i]).collect()
    }
}
