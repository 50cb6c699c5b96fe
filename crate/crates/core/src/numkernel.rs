//! Fixed-size dense linear algebra: 3-vectors, 3×3 and 6×6 matrices, and a
//! row-pivoted LU factorization that reports numerical rank.
//!
//! The 6×6 factorization runs elimination in row-echelon order: a column whose
//! remaining entries all fall under the rank threshold is skipped and becomes a
//! free column. That keeps `P·M = L·U` exact while exposing the null space of a
//! rank-deficient matrix directly.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Relative threshold on pivots below which a column is treated as dependent.
pub const RANK_EPS: f64 = 1e-9;

/// Relative tolerance on the dropped components of a rank-deficient solve.
pub const CONSISTENCY_EPS: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);
    pub const X: Vec3 = Vec3::new(1.0, 0.0, 0.0);
    pub const Y: Vec3 = Vec3::new(0.0, 1.0, 0.0);
    pub const Z: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Vec3::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn max_abs(self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

/// Row-major 3×3 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat3(pub [[f64; 3]; 3]);

impl Mat3 {
    pub const IDENTITY: Mat3 = Mat3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);

    pub fn from_rows(rows: [[f64; 3]; 3]) -> Self {
        Mat3(rows)
    }

    pub fn transpose(&self) -> Mat3 {
        let m = &self.0;
        Mat3([
            [m[0][0], m[1][0], m[2][0]],
            [m[0][1], m[1][1], m[2][1]],
            [m[0][2], m[1][2], m[2][2]],
        ])
    }

    pub fn column(&self, j: usize) -> Vec3 {
        Vec3::new(self.0[0][j], self.0[1][j], self.0[2][j])
    }

    pub fn determinant(&self) -> f64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn scale(&self, s: f64) -> Mat3 {
        Mat3(self.0.map(|row| row.map(|v| v * s)))
    }

    /// Largest entrywise deviation of `AᵀA` from the identity.
    pub fn orthogonality_defect(&self) -> f64 {
        let ata = self.transpose() * *self;
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((ata.0[i][j] - target).abs());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Mat3) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max((self.0[i][j] - other.0[i][j]).abs());
            }
        }
        worst
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|v| v.is_finite())
    }
}

impl Mul for Mat3 {
    type Output = Mat3;
    fn mul(self, o: Mat3) -> Mat3 {
        let mut out = [[0.0; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..3).map(|k| self.0[i][k] * o.0[k][j]).sum();
            }
        }
        Mat3(out)
    }
}

impl Mul<Vec3> for Mat3 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        let m = &self.0;
        Vec3::new(
            m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z,
        )
    }
}

/// A length-6 real vector.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec6(pub [f64; 6]);

impl Vec6 {
    pub const ZERO: Vec6 = Vec6([0.0; 6]);

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
    }

    pub fn dot(&self, other: &Vec6) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, s: f64) -> Vec6 {
        Vec6(self.0.map(|v| v * s))
    }
}

impl Add for Vec6 {
    type Output = Vec6;
    fn add(self, o: Vec6) -> Vec6 {
        let mut out = self.0;
        out.iter_mut().zip(o.0).for_each(|(a, b)| *a += b);
        Vec6(out)
    }
}

impl AddAssign for Vec6 {
    fn add_assign(&mut self, o: Vec6) {
        self.0.iter_mut().zip(o.0).for_each(|(a, b)| *a += b);
    }
}

impl Sub for Vec6 {
    type Output = Vec6;
    fn sub(self, o: Vec6) -> Vec6 {
        let mut out = self.0;
        out.iter_mut().zip(o.0).for_each(|(a, b)| *a -= b);
        Vec6(out)
    }
}

impl Index<usize> for Vec6 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for Vec6 {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

/// Row-major 6×6 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat6(pub [[f64; 6]; 6]);

impl Mat6 {
    pub fn zeros() -> Self {
        Mat6([[0.0; 6]; 6])
    }

    pub fn identity() -> Self {
        Self::from_diagonal([1.0; 6])
    }

    pub fn from_diagonal(diag: [f64; 6]) -> Self {
        let mut m = Self::zeros();
        for (i, d) in diag.into_iter().enumerate() {
            m.0[i][i] = d;
        }
        m
    }

    pub fn row(&self, i: usize) -> [f64; 6] {
        self.0[i]
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0f64, |acc, v| acc.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|v| v.is_finite())
    }

    /// Determinant by Gaussian elimination with partial pivoting. Unlike
    /// [`lu_factor`] no column is skipped, so tiny pivots still contribute.
    pub fn determinant(&self) -> f64 {
        let mut a = self.0;
        let mut det = 1.0;
        for k in 0..6 {
            let p = (k..6)
                .max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))
                .unwrap_or(k);
            if a[p][k] == 0.0 {
                return 0.0;
            }
            if p != k {
                a.swap(p, k);
                det = -det;
            }
            det *= a[k][k];
            for i in k + 1..6 {
                let f = a[i][k] / a[k][k];
                for j in k..6 {
                    a[i][j] -= f * a[k][j];
                }
            }
        }
        det
    }
}

impl Mul<Vec6> for &Mat6 {
    type Output = Vec6;
    fn mul(self, v: Vec6) -> Vec6 {
        let mut out = [0.0; 6];
        for (o, row) in out.iter_mut().zip(self.0.iter()) {
            *o = row.iter().zip(v.0.iter()).map(|(a, b)| a * b).sum();
        }
        Vec6(out)
    }
}

impl Mul<Vec6> for Mat6 {
    type Output = Vec6;
    fn mul(self, v: Vec6) -> Vec6 {
        &self * v
    }
}

impl Mul for &Mat6 {
    type Output = Mat6;
    fn mul(self, o: &Mat6) -> Mat6 {
        let mut out = Mat6::zeros();
        for i in 0..6 {
            for j in 0..6 {
                out.0[i][j] = (0..6).map(|k| self.0[i][k] * o.0[k][j]).sum();
            }
        }
        out
    }
}

/// Row-pivoted LU factorization `P·M = L·U` of a 6×6 matrix.
///
/// `U` is in row-echelon form up to rounding: echelon row `r` has its pivot in
/// column `pivot_cols[r]`. Columns without a pivot are free.
#[derive(Debug, Clone, PartialEq)]
pub struct LuFactorization {
    lower: Mat6,
    upper: Mat6,
    perm: [usize; 6],
    pivots: [f64; 6],
    pivot_cols: [usize; 6],
    rank: usize,
}

/// Factor `m` with partial (row) pivoting.
///
/// A column is declared dependent when every remaining entry is at most
/// `RANK_EPS · max(max|m|, largest pivot so far)` in magnitude. The zero
/// matrix yields rank 0.
pub fn lu_factor(m: &Mat6) -> LuFactorization {
    let scale = m.max_abs();
    let mut u = m.0;
    let mut l = [[0.0; 6]; 6];
    let mut perm = [0, 1, 2, 3, 4, 5];
    let mut pivots = [0.0; 6];
    let mut pivot_cols = [usize::MAX; 6];
    let mut largest = 0.0f64;
    let mut row = 0;

    for col in 0..6 {
        if row == 6 {
            break;
        }
        let (p, mag) = (row..6)
            .map(|i| (i, u[i][col].abs()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("non-empty pivot search");
        let threshold = RANK_EPS * scale.max(largest);
        if mag <= threshold || mag == 0.0 {
            continue;
        }
        if p != row {
            u.swap(p, row);
            perm.swap(p, row);
            // multipliers already computed travel with their rows
            for k in 0..row {
                let tmp = l[p][k];
                l[p][k] = l[row][k];
                l[row][k] = tmp;
            }
        }
        let pivot = u[row][col];
        pivots[col] = mag;
        pivot_cols[row] = col;
        largest = largest.max(mag);
        for i in row + 1..6 {
            let f = u[i][col] / pivot;
            l[i][row] = f;
            u[i][col] = 0.0;
            for j in col + 1..6 {
                u[i][j] -= f * u[row][j];
            }
        }
        row += 1;
    }
    for (i, r) in l.iter_mut().enumerate() {
        r[i] = 1.0;
    }

    LuFactorization {
        lower: Mat6(l),
        upper: Mat6(u),
        perm,
        pivots,
        pivot_cols,
        rank: row,
    }
}

impl LuFactorization {
    pub fn lower(&self) -> &Mat6 {
        &self.lower
    }

    pub fn upper(&self) -> &Mat6 {
        &self.upper
    }

    /// Row `i` of `P·M` is row `permutation()[i]` of `M`.
    pub fn permutation(&self) -> [usize; 6] {
        self.perm
    }

    /// Pivot magnitude per column; zero for free columns.
    pub fn pivots(&self) -> [f64; 6] {
        self.pivots
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Columns that received no pivot, ascending.
    pub fn free_columns(&self) -> Vec<usize> {
        let used = &self.pivot_cols[..self.rank];
        (0..6).filter(|c| !used.contains(c)).collect()
    }

    /// Apply the row permutation to a right-hand side.
    pub fn permute(&self, rhs: &Vec6) -> Vec6 {
        Vec6(self.perm.map(|i| rhs.0[i]))
    }

    /// `L⁻¹·P·rhs` by forward substitution.
    pub fn forward(&self, rhs: &Vec6) -> Vec6 {
        let mut y = self.permute(rhs);
        for i in 0..6 {
            for k in 0..i {
                y.0[i] -= self.lower.0[i][k] * y.0[k];
            }
        }
        y
    }

    /// Back substitution over the echelon rows. `x` carries preset values in
    /// the free columns; pivot columns are overwritten.
    fn back_substitute(&self, y: &Vec6, mut x: Vec6) -> Vec6 {
        for r in (0..self.rank).rev() {
            let c = self.pivot_cols[r];
            let tail: f64 = (c + 1..6).map(|j| self.upper.0[r][j] * x.0[j]).sum();
            x.0[c] = (y.0[r] - tail) / self.upper.0[r][c];
        }
        x
    }

    pub fn determinant(&self) -> f64 {
        if self.rank < 6 {
            return 0.0;
        }
        let mut sign = 1.0;
        let mut p = self.perm;
        for i in 0..6 {
            while p[i] != i {
                let j = p[i];
                p.swap(i, j);
                sign = -sign;
            }
        }
        (0..6).fold(sign, |acc, i| acc * self.upper.0[i][i])
    }
}

/// Solve `M·x = rhs` for a full-rank factorization.
pub fn solve6(f: &LuFactorization, rhs: &Vec6) -> Result<Vec6> {
    if f.rank < 6 {
        return Err(Error::RankDeficient { rank: f.rank });
    }
    let y = f.forward(rhs);
    Ok(f.back_substitute(&y, Vec6::ZERO))
}

/// Unit vector spanning the kernel of a rank-5 matrix. The free coordinate
/// is positive.
pub fn null_vector(f: &LuFactorization) -> Result<Vec6> {
    if f.rank != 5 {
        return Err(Error::WrongRank {
            expected: 5,
            found: f.rank,
        });
    }
    let free = f.free_columns()[0];
    let mut x = Vec6::ZERO;
    x.0[free] = 1.0;
    let n = f.back_substitute(&Vec6::ZERO, x);
    Ok(n.scale(1.0 / n.norm()))
}

/// Particular solution of a consistent rank-5 system with the free
/// coordinate set to zero.
pub fn solve_rank_deficient(f: &LuFactorization, rhs: &Vec6) -> Result<Vec6> {
    if f.rank != 5 {
        return Err(Error::WrongRank {
            expected: 5,
            found: f.rank,
        });
    }
    let y = f.forward(rhs);
    let tolerance = CONSISTENCY_EPS * (1.0 + rhs.max_abs());
    let residual = y.0[5].abs();
    if residual > tolerance {
        return Err(Error::Inconsistent {
            residual,
            tolerance,
        });
    }
    Ok(f.back_substitute(&y, Vec6::ZERO))
}
