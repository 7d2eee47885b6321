//! Integer matrices and lattice normal forms over arbitrary-precision
//! integers: row Hermite normal form with a unimodular witness, Smith normal
//! form with two-sided witnesses, integer kernels, and membership/coordinate
//! solving in a sublattice.
//!
//! Conventions: `hnf` returns `(H, U)` with `U·A = H`, `U` unimodular, `H` in
//! row echelon form with positive pivots and the entries above each pivot
//! reduced into `[0, pivot)`. `snf` returns `U·A·V = S` with `S` diagonal,
//! nonnegative, each entry dividing the next, zeros trailing; a matrix already
//! in Smith form comes back with identity witnesses.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::laurent::LatticeVector;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ZLatticeError {
    DimensionMismatch { expected: usize, found: usize },
    DependentBasis,
}

impl fmt::Display for ZLatticeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZLatticeError::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {}, found {}", expected, found)
            }
            ZLatticeError::DependentBasis => {
                write!(f, "basis vectors are linearly dependent")
            }
        }
    }
}

impl std::error::Error for ZLatticeError {}

/// A dense matrix over Z, row-major.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        assert!(!rows.is_empty(), "matrix needs at least one row");
        let cols = rows[0].len();
        assert!(cols > 0, "matrix needs at least one column");
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        IntMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    /// Stack lattice vectors as the rows of a matrix.
    pub fn from_row_vectors(rows: &[LatticeVector]) -> Self {
        IntMatrix::from_rows(rows.iter().map(|v| v.coords().to_vec()).collect())
    }

    /// Stack lattice vectors as the columns of a matrix.
    pub fn from_col_vectors(cols: &[LatticeVector]) -> Self {
        IntMatrix::from_row_vectors(cols).transpose()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> LatticeVector {
        LatticeVector::new(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn col(&self, j: usize) -> LatticeVector {
        LatticeVector::new((0..self.rows).map(|i| self.get(i, j).clone()).collect())
    }

    pub fn row_vectors(&self) -> Vec<LatticeVector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = IntMatrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let add = a * rhs.get(k, j);
                    let cur = out.get(i, j) + add;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &LatticeVector) -> LatticeVector {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        LatticeVector::new(
            (0..self.rows)
                .map(|i| {
                    (0..self.cols)
                        .map(|j| self.get(i, j) * v.get(j))
                        .sum::<BigInt>()
                })
                .collect(),
        )
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Exact determinant via fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut w: Vec<Vec<BigInt>> = (0..n)
            .map(|i| self.data[i * n..(i + 1) * n].to_vec())
            .collect();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n.saturating_sub(1) {
            if w[k][k].is_zero() {
                match (k + 1..n).find(|&i| !w[i][k].is_zero()) {
                    Some(i) => {
                        w.swap(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &w[i][j] * &w[k][k] - &w[i][k] * &w[k][j];
                    w[i][j] = num / &prev; // exact by Sylvester's identity
                }
                w[i][k] = BigInt::zero();
            }
            prev = w[k][k].clone();
        }
        let d = w[n - 1][n - 1].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.det().abs().is_one()
    }

    /// Inverse of a unimodular matrix (itself integral). Panics otherwise.
    pub fn inverse_unimodular(&self) -> IntMatrix {
        let (h, u) = hnf(self);
        assert_eq!(
            h,
            IntMatrix::identity(self.rows),
            "inverse_unimodular requires a unimodular matrix"
        );
        u
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j).clone();
            self.set(i, j, v);
        }
    }

    /// row[target] += factor · row[source]
    fn add_multiple_of_row(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(target, j) + factor * self.get(source, j);
            self.set(target, j, v);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// col[target] += factor · col[source]
    fn add_multiple_of_col(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, target) + factor * self.get(i, source);
            self.set(i, target, v);
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Row Hermite normal form: returns `(H, U)` with `U` unimodular and
/// `U·A = H`; `H` is in row echelon form with positive pivots and entries
/// above each pivot reduced into `[0, pivot)`.
pub fn hnf(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let m = a.rows();
    let n = a.cols();
    let mut h = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut row = 0;
    for col in 0..n {
        if row == m {
            break;
        }
        if (row..m).all(|i| h.get(i, col).is_zero()) {
            continue;
        }
        // Euclidean reduction in this column until a single nonzero remains.
        loop {
            let pivot_row = (row..m)
                .filter(|&i| !h.get(i, col).is_zero())
                .min_by_key(|&i| h.get(i, col).abs())
                .expect("nonzero entry exists");
            h.swap_rows(row, pivot_row);
            u.swap_rows(row, pivot_row);
            let p = h.get(row, col).clone();
            let mut done = true;
            for i in row + 1..m {
                if h.get(i, col).is_zero() {
                    continue;
                }
                let q = h.get(i, col).div_floor(&p);
                h.add_multiple_of_row(i, row, &-q.clone());
                u.add_multiple_of_row(i, row, &-q);
                if !h.get(i, col).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h.get(row, col).is_negative() {
            h.negate_row(row);
            u.negate_row(row);
        }
        let p = h.get(row, col).clone();
        for i in 0..row {
            let q = h.get(i, col).div_floor(&p);
            if !q.is_zero() {
                h.add_multiple_of_row(i, row, &-q.clone());
                u.add_multiple_of_row(i, row, &-q);
            }
        }
        row += 1;
    }
    (h, u)
}

/// Smith normal form `U·A·V = S` together with both unimodular witnesses.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// The nonzero diagonal entries of `S`, in divisibility order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let k = self.s.rows().min(self.s.cols());
        (0..k)
            .map(|i| self.s.get(i, i).clone())
            .filter(|d| !d.is_zero())
            .collect()
    }
}

/// Compute the Smith normal form. Pivots are chosen as the entry of minimal
/// absolute value in the remaining submatrix (first such in row-major order),
/// so a matrix already in Smith form returns identity witnesses.
pub fn snf(a: &IntMatrix) -> SmithDecomposition {
    let m = a.rows();
    let n = a.cols();
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut t = 0;
    while t < m.min(n) {
        // Locate the minimal-absolute-value nonzero entry of S[t.., t..].
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if s.get(i, j).is_zero() {
                    continue;
                }
                match pivot {
                    Some((pi, pj)) if s.get(pi, pj).abs() <= s.get(i, j).abs() => {}
                    _ => pivot = Some((i, j)),
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        s.swap_rows(t, pi);
        u.swap_rows(t, pi);
        s.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            // One pass of Euclidean clearing of column t and row t.
            let mut dirty = false;
            for i in t + 1..m {
                if s.get(i, t).is_zero() {
                    continue;
                }
                let q = s.get(i, t).div_floor(s.get(t, t));
                s.add_multiple_of_row(i, t, &-q.clone());
                u.add_multiple_of_row(i, t, &-q);
                if !s.get(i, t).is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..n {
                if s.get(t, j).is_zero() {
                    continue;
                }
                let q = s.get(t, j).div_floor(s.get(t, t));
                s.add_multiple_of_col(j, t, &-q.clone());
                v.add_multiple_of_col(j, t, &-q);
                if !s.get(t, j).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // A remainder smaller than the pivot appeared; promote the
                // new minimum and clear again.
                let mut best: Option<(usize, usize)> = None;
                for i in t..m {
                    for j in t..n {
                        if (i == t) == (j == t) && !(i == t && j == t) {
                            continue; // only pivot, column t, and row t are nonzero candidates here
                        }
                        if s.get(i, j).is_zero() {
                            continue;
                        }
                        match best {
                            Some((bi, bj)) if s.get(bi, bj).abs() <= s.get(i, j).abs() => {}
                            _ => best = Some((i, j)),
                        }
                    }
                }
                let (bi, bj) = best.expect("pivot cannot vanish");
                s.swap_rows(t, bi);
                u.swap_rows(t, bi);
                s.swap_cols(t, bj);
                v.swap_cols(t, bj);
                continue;
            }
            // Column and row are clear; enforce divisibility into the rest.
            let mut offender: Option<(usize, usize)> = None;
            'scan: for i in t + 1..m {
                for j in t + 1..n {
                    if !s.get(i, j).mod_floor(s.get(t, t)).is_zero() {
                        offender = Some((i, j));
                        break 'scan;
                    }
                }
            }
            match offender {
                Some((i, _)) => {
                    let one = BigInt::one();
                    s.add_multiple_of_row(t, i, &one);
                    u.add_multiple_of_row(t, i, &one);
                }
                None => break,
            }
        }
        if s.get(t, t).is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    SmithDecomposition { u, s, v }
}

/// A basis (possibly empty) of the integer kernel `{x : A·x = 0}`, each
/// vector of length `A.cols()`, canonicalized by a final Hermite reduction.
pub fn kernel_basis(a: &IntMatrix) -> Vec<LatticeVector> {
    let (h, u) = hnf(&a.transpose());
    let mut kernel_rows = Vec::new();
    for i in 0..h.rows() {
        if h.row(i).is_zero() {
            kernel_rows.push(u.row(i));
        }
    }
    if kernel_rows.is_empty() {
        return Vec::new();
    }
    let (reduced, _) = hnf(&IntMatrix::from_row_vectors(&kernel_rows));
    (0..reduced.rows())
        .map(|i| reduced.row(i))
        .filter(|r| !r.is_zero())
        .collect()
}

/// Factored Smith decomposition of a column matrix, for repeated solving of
/// `Σ g_j · basis_j = w`.
pub struct SublatticeSolver {
    dim: usize,
    k: usize,
    rank: usize,
    smith: Option<SmithDecomposition>,
}

impl SublatticeSolver {
    /// Errors if the given vectors are linearly dependent (coordinates in a
    /// sublattice are only well-defined over a basis).
    pub fn new(basis: &[LatticeVector]) -> Result<Self, ZLatticeError> {
        if basis.is_empty() {
            return Ok(SublatticeSolver {
                dim: 0,
                k: 0,
                rank: 0,
                smith: None,
            });
        }
        let dim = basis[0].len();
        if basis.iter().any(|b| b.len() != dim) {
            return Err(ZLatticeError::DimensionMismatch {
                expected: dim,
                found: basis.iter().map(|b| b.len()).find(|&l| l != dim).unwrap(),
            });
        }
        let k = basis.len();
        let b = IntMatrix::from_col_vectors(basis);
        let smith = snf(&b);
        let rank = smith.invariant_factors().len();
        if rank < k {
            return Err(ZLatticeError::DependentBasis);
        }
        Ok(SublatticeSolver {
            dim,
            k,
            rank,
            smith: Some(smith),
        })
    }

    /// Integer coordinates of `w` in the basis, or `None` when `w` lies
    /// outside the spanned sublattice.
    #[allow(clippy::needless_range_loop)] // i drives both a write and a rank test
    pub fn solve(&self, w: &LatticeVector) -> Result<Option<Vec<BigInt>>, ZLatticeError> {
        let Some(smith) = &self.smith else {
            // Empty basis spans the zero lattice.
            return Ok(if w.is_zero() { Some(Vec::new()) } else { None });
        };
        if w.len() != self.dim {
            return Err(ZLatticeError::DimensionMismatch {
                expected: self.dim,
                found: w.len(),
            });
        }
        let c = smith.u.mul_vec(w);
        let mut y = vec![BigInt::zero(); self.k];
        for i in 0..self.dim {
            if i < self.rank {
                let d = smith.s.get(i, i);
                let (q, rem) = c.get(i).div_mod_floor(d);
                if !rem.is_zero() {
                    return Ok(None);
                }
                y[i] = q;
            } else if !c.get(i).is_zero() {
                return Ok(None);
            }
        }
        Ok(Some(
            smith
                .v
                .mul_vec(&LatticeVector::new(y))
                .coords()
                .to_vec(),
        ))
    }
}

/// Solve `Σ g_j · basis_j = w` over Z. Returns the (unique) coordinate vector
/// when `w` lies in the spanned sublattice, `None` when it does not, and an
/// error when the claimed basis is dependent or dimensions disagree.
pub fn solve_in_sublattice(
    basis: &[LatticeVector],
    w: &LatticeVector,
) -> Result<Option<Vec<BigInt>>, ZLatticeError> {
    SublatticeSolver::new(basis)?.solve(w)
}

/// Solve `A·x = w` over Z for any integer matrix (columns may be dependent);
/// free coordinates are set to zero. `None` when no integer solution exists.
#[allow(clippy::needless_range_loop)] // i drives both a write and a rank test
pub fn solve_integer_system(a: &IntMatrix, w: &LatticeVector) -> Option<Vec<BigInt>> {
    assert_eq!(a.rows(), w.len(), "system dimension mismatch");
    let smith = snf(a);
    let rank = smith.invariant_factors().len();
    let c = smith.u.mul_vec(w);
    let mut y = vec![BigInt::zero(); a.cols()];
    for i in 0..a.rows() {
        if i < rank {
            let d = smith.s.get(i, i);
            let (q, rem) = c.get(i).div_mod_floor(d);
            if !rem.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !c.get(i).is_zero() {
            return None;
        }
    }
    Some(smith.v.mul_vec(&LatticeVector::new(y)).coords().to_vec())
}
