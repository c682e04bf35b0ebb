//! Exact integer linear algebra on small square matrices.
//!
//! Everything here is checked: intermediate products are carried in `i128`
//! and narrowed back to `i64` with an explicit overflow error, so a result
//! is either exact or an [`LinalgError::Overflow`] naming the step that
//! blew up.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::LinalgError;

/// Square matrix of signed integers, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<i64>,
}

impl IntMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = 1;
        }
        m
    }

    pub fn zeros(dim: usize) -> Self {
        IntMatrix { dim, entries: vec![0; dim * dim] }
    }

    pub fn diagonal(diag: &[i64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.entries[i * diag.len() + i] = d;
        }
        m
    }

    /// Builds a matrix from rows; every row must have the same length as the
    /// number of rows.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, LinalgError> {
        let dim = rows.len();
        if dim == 0 {
            return Err(LinalgError::Empty);
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(LinalgError::NotSquare { row: i, len: row.len(), dim });
            }
            entries.extend_from_slice(row);
        }
        Ok(IntMatrix { dim, entries })
    }

    /// Builds a matrix from its columns.
    pub fn from_columns<C: AsRef<[i64]>>(cols: &[C]) -> Result<Self, LinalgError> {
        Ok(Self::from_rows(cols)?.transpose())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.entries[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: i64) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.dim).map(<[i64]>::to_vec).collect()
    }

    pub fn row(&self, row: usize) -> &[i64] {
        &self.entries[row * self.dim..(row + 1) * self.dim]
    }

    pub fn column(&self, col: usize) -> Vec<i64> {
        (0..self.dim).map(|r| self.get(r, col)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn max_abs_entry(&self) -> u64 {
        self.entries.iter().map(|e| e.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.dim).all(|r| (0..self.dim).all(|c| r == c || self.get(r, c) == 0))
    }

    pub fn diagonal_entries(&self) -> Vec<i64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn scaled(&self, factor: i64) -> Result<Self, LinalgError> {
        let entries = self
            .entries
            .iter()
            .map(|&e| e.checked_mul(factor).ok_or(LinalgError::Overflow { step: "scale" }))
            .collect::<Result<_, _>>()?;
        Ok(IntMatrix { dim: self.dim, entries })
    }

    pub fn mul(&self, rhs: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        if self.dim != rhs.dim {
            return Err(LinalgError::DimensionMismatch { left: self.dim, right: rhs.dim });
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                let acc: i128 = (0..n).map(|k| self.get(r, k) as i128 * rhs.get(k, c) as i128).sum();
                out.set(r, c, narrow(acc, "matrix product")?);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[i64]) -> Result<Vec<i64>, LinalgError> {
        if x.len() != self.dim {
            return Err(LinalgError::DimensionMismatch { left: self.dim, right: x.len() });
        }
        (0..self.dim)
            .map(|r| {
                let acc: i128 = self.row(r).iter().zip(x).map(|(&a, &b)| a as i128 * b as i128).sum();
                narrow(acc, "matrix-vector product")
            })
            .collect()
    }

    /// Submatrix on the given (sorted) row and column index sets.
    fn minor_matrix(&self, rows: &[usize], cols: &[usize]) -> IntMatrix {
        let k = rows.len();
        let mut m = Self::zeros(k);
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m.set(i, j, self.get(r, c));
            }
        }
        m
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries.chunks(self.dim)).finish()
    }
}

impl TryFrom<Vec<Vec<i64>>> for IntMatrix {
    type Error = LinalgError;

    fn try_from(rows: Vec<Vec<i64>>) -> Result<Self, Self::Error> {
        IntMatrix::from_rows(&rows)
    }
}

impl From<IntMatrix> for Vec<Vec<i64>> {
    fn from(m: IntMatrix) -> Self {
        m.rows()
    }
}

fn narrow(value: i128, step: &'static str) -> Result<i64, LinalgError> {
    i64::try_from(value).map_err(|_| LinalgError::Overflow { step })
}

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i64
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn det(m: &IntMatrix) -> Result<i64, LinalgError> {
    let n = m.dim;
    let mut a: Vec<i128> = m.entries.iter().map(|&e| e as i128).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k * n + k] == 0 {
            let Some(swap) = (k + 1..n).find(|&r| a[r * n + k] != 0) else {
                return Ok(0);
            };
            for c in 0..n {
                a.swap(k * n + c, swap * n + c);
            }
            sign = -sign;
        }
        let pivot = a[k * n + k];
        for r in k + 1..n {
            for c in k + 1..n {
                let num = pivot
                    .checked_mul(a[r * n + c])
                    .and_then(|x| x.checked_sub(a[r * n + k].checked_mul(a[k * n + c])?))
                    .ok_or(LinalgError::Overflow { step: "determinant elimination" })?;
                // Bareiss: the division is always exact.
                a[r * n + c] = num / prev;
            }
            a[r * n + k] = 0;
        }
        prev = pivot;
    }
    narrow(sign * a[n * n - 1], "determinant")
}

pub fn is_unimodular(m: &IntMatrix) -> Result<bool, LinalgError> {
    Ok(det(m)?.abs() == 1)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// GCD of all `order`×`order` minors (0 when they all vanish).
pub fn minor_gcd(m: &IntMatrix, order: usize) -> Result<i64, LinalgError> {
    if order == 0 || order > m.dim {
        return Err(LinalgError::InvalidOrder { order, dim: m.dim });
    }
    let subsets = combinations(m.dim, order);
    let mut g = 0;
    for rows in &subsets {
        for cols in &subsets {
            g = gcd(g, det(&m.minor_matrix(rows, cols))?);
        }
    }
    Ok(g)
}

/// `U·M·V = D` with `U`, `V` unimodular and `D` diagonal with a divisibility
/// chain of nonnegative entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnfDecomposition {
    #[serde(rename = "U")]
    pub u: IntMatrix,
    #[serde(rename = "V")]
    pub v: IntMatrix,
    #[serde(rename = "D")]
    pub d: IntMatrix,
}

impl SnfDecomposition {
    pub fn invariant_factors(&self) -> Vec<i64> {
        self.d.diagonal_entries()
    }

    pub fn is_singular(&self) -> bool {
        self.invariant_factors().contains(&0)
    }

    /// Checks every defining property against the source matrix. Useful for
    /// accepting a decomposition produced elsewhere, e.g. a reference one.
    pub fn check(&self, source: &IntMatrix) -> Result<(), LinalgError> {
        let prod = self.u.mul(source)?.mul(&self.v)?;
        if prod != self.d {
            return Err(LinalgError::InvalidDecomposition("U·M·V differs from D"));
        }
        if !self.d.is_diagonal() {
            return Err(LinalgError::InvalidDecomposition("D is not diagonal"));
        }
        if !is_unimodular(&self.u)? || !is_unimodular(&self.v)? {
            return Err(LinalgError::InvalidDecomposition("transform is not unimodular"));
        }
        let diag = self.invariant_factors();
        if diag.iter().any(|&x| x < 0) {
            return Err(LinalgError::InvalidDecomposition("negative invariant factor"));
        }
        for w in diag.windows(2) {
            let divides = if w[0] == 0 { w[1] == 0 } else { w[1] % w[0] == 0 };
            if !divides {
                return Err(LinalgError::InvalidDecomposition("divisibility chain broken"));
            }
        }
        Ok(())
    }
}

/// Working state for the reduction: the matrix being reduced together with
/// the accumulated row and column transforms, all in `i128`.
struct Reduction {
    n: usize,
    a: Vec<i128>,
    u: Vec<i128>,
    v: Vec<i128>,
}

impl Reduction {
    fn at(&self, r: usize, c: usize) -> i128 {
        self.a[r * self.n + c]
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        let n = self.n;
        for c in 0..n {
            self.a.swap(i * n + c, j * n + c);
            self.u.swap(i * n + c, j * n + c);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        let n = self.n;
        for r in 0..n {
            self.a.swap(r * n + i, r * n + j);
            self.v.swap(r * n + i, r * n + j);
        }
    }

    /// row[dst] += factor · row[src]
    fn add_row(&mut self, dst: usize, src: usize, factor: i128) -> Result<(), LinalgError> {
        let n = self.n;
        for c in 0..n {
            self.a[dst * n + c] = checked_axpy(self.a[dst * n + c], factor, self.a[src * n + c])?;
            self.u[dst * n + c] = checked_axpy(self.u[dst * n + c], factor, self.u[src * n + c])?;
        }
        Ok(())
    }

    /// col[dst] += factor · col[src]
    fn add_col(&mut self, dst: usize, src: usize, factor: i128) -> Result<(), LinalgError> {
        let n = self.n;
        for r in 0..n {
            self.a[r * n + dst] = checked_axpy(self.a[r * n + dst], factor, self.a[r * n + src])?;
            self.v[r * n + dst] = checked_axpy(self.v[r * n + dst], factor, self.v[r * n + src])?;
        }
        Ok(())
    }

    fn negate_row(&mut self, r: usize) {
        let n = self.n;
        for c in 0..n {
            self.a[r * n + c] = -self.a[r * n + c];
            self.u[r * n + c] = -self.u[r * n + c];
        }
    }

    /// Minimum-|x| nonzero entry of the trailing block, scanning row-major so
    /// the earliest row wins ties.
    fn pivot_in_block(&self, k: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, i128)> = None;
        for r in k..self.n {
            for c in k..self.n {
                let x = self.at(r, c).abs();
                if x != 0 && best.is_none_or(|(_, _, b)| x < b) {
                    best = Some((r, c, x));
                }
            }
        }
        best.map(|(r, c, _)| (r, c))
    }

    fn to_matrix(buf: &[i128], n: usize, step: &'static str) -> Result<IntMatrix, LinalgError> {
        let entries = buf.iter().map(|&x| narrow(x, step)).collect::<Result<_, _>>()?;
        Ok(IntMatrix { dim: n, entries })
    }
}

fn checked_axpy(y: i128, factor: i128, x: i128) -> Result<i128, LinalgError> {
    factor
        .checked_mul(x)
        .and_then(|p| y.checked_add(p))
        .ok_or(LinalgError::Overflow { step: "smith elimination" })
}

fn identity_buf(n: usize) -> Vec<i128> {
    let mut b = vec![0; n * n];
    for i in 0..n {
        b[i * n + i] = 1;
    }
    b
}

/// Smith normal form with transforms, by elementary row and column
/// operations. The pivot is the smallest nonzero entry (in absolute value)
/// of the remaining block, so the output is deterministic.
pub fn snf(m: &IntMatrix) -> Result<SnfDecomposition, LinalgError> {
    let n = m.dim;
    let mut red = Reduction {
        n,
        a: m.entries.iter().map(|&x| x as i128).collect(),
        u: identity_buf(n),
        v: identity_buf(n),
    };

    for k in 0..n {
        // stops once the trailing block is zero
        while let Some((pr, pc)) = red.pivot_in_block(k) {
            red.swap_rows(k, pr);
            red.swap_cols(k, pc);
            let pivot = red.at(k, k);

            let mut dirty = false;
            for r in k + 1..n {
                let q = red.at(r, k).div_euclid(pivot);
                if q != 0 {
                    red.add_row(r, k, -q)?;
                }
                dirty |= red.at(r, k) != 0;
            }
            for c in k + 1..n {
                let q = red.at(k, c).div_euclid(pivot);
                if q != 0 {
                    red.add_col(c, k, -q)?;
                }
                dirty |= red.at(k, c) != 0;
            }
            if dirty {
                // a smaller remainder exists; pick it as the next pivot
                continue;
            }

            // Row and column are clear. Enforce divisibility of the block.
            let offender = (k + 1..n)
                .flat_map(|r| (k + 1..n).map(move |c| (r, c)))
                .find(|&(r, c)| red.at(r, c) % pivot != 0);
            match offender {
                Some((r, _)) => red.add_row(k, r, 1)?,
                None => break,
            }
        }
        if red.at(k, k) < 0 {
            red.negate_row(k);
        }
    }

    Ok(SnfDecomposition {
        u: Reduction::to_matrix(&red.u, n, "smith transform U")?,
        v: Reduction::to_matrix(&red.v, n, "smith transform V")?,
        d: Reduction::to_matrix(&red.a, n, "smith diagonal")?,
    })
}

/// Column-style Hermite normal form of a nonsingular matrix: an upper
/// triangular `H` with positive diagonal and `0 <= H[i][j] < H[i][i]` for
/// `j > i`, whose columns generate the same lattice as the columns of `m`.
pub fn hermite_upper(m: &IntMatrix) -> Result<IntMatrix, LinalgError> {
    let n = m.dim;
    let mut cols: Vec<Vec<i128>> = (0..n).map(|c| m.column(c).iter().map(|&x| x as i128).collect()).collect();
    // Work from the last row up, clearing entries left of the pivot column.
    for row in (0..n).rev() {
        let pivot_col = row;
        loop {
            let nonzero: Vec<usize> = (0..=pivot_col).filter(|&c| cols[c][row] != 0).collect();
            if nonzero.is_empty() {
                return Err(LinalgError::Singular);
            }
            if nonzero.len() == 1 {
                cols.swap(nonzero[0], pivot_col);
                break;
            }
            let best = *nonzero.iter().min_by_key(|&&c| cols[c][row].abs()).expect("nonempty");
            let pivot = cols[best].clone();
            for &c in &nonzero {
                if c != best {
                    let q = cols[c][row].div_euclid(pivot[row]);
                    for (x, &p) in cols[c].iter_mut().zip(&pivot) {
                        *x = checked_axpy(*x, -q, p)?;
                    }
                }
            }
        }
        if cols[pivot_col][row] < 0 {
            for x in cols[pivot_col].iter_mut() {
                *x = -*x;
            }
        }
    }
    // Reduce entries to the right of each pivot.
    for row in 0..n {
        let pivot = cols[row].clone();
        for col in cols.iter_mut().skip(row + 1) {
            let q = col[row].div_euclid(pivot[row]);
            if q != 0 {
                for (x, &p) in col.iter_mut().zip(&pivot) {
                    *x = checked_axpy(*x, -q, p)?;
                }
            }
        }
    }
    let mut h = IntMatrix::zeros(n);
    for (c, col) in cols.iter().enumerate() {
        for (r, &x) in col.iter().enumerate() {
            h.set(r, c, narrow(x, "hermite form")?);
        }
    }
    Ok(h)
}

/// Integer solution `y` of `B·y = x`, or `NotInLattice` if the solution is
/// not integral. Uses Cramer's rule, fine for the small dimensions here.
pub fn solve_integer(b: &IntMatrix, x: &[i64]) -> Result<Vec<i64>, LinalgError> {
    let n = b.dim;
    if x.len() != n {
        return Err(LinalgError::DimensionMismatch { left: n, right: x.len() });
    }
    let d = det(b)?;
    if d == 0 {
        return Err(LinalgError::Singular);
    }
    (0..n)
        .map(|c| {
            let mut bc = b.clone();
            for (r, &xr) in x.iter().enumerate() {
                bc.set(r, c, xr);
            }
            let num = det(&bc)?;
            if num % d != 0 {
                return Err(LinalgError::NotInLattice);
            }
            Ok(num / d)
        })
        .collect()
}
