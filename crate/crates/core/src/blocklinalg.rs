//! Block-tridiagonal LU with 5×5 blocks.
//!
//! For the system
//!
//! ```text
//! | D_0 F_0           | |x_0|   |t_0|
//! | E_1 D_1 F_1       | |x_1| = |t_1|
//! |     ...  ...  ... | |...|   |...|
//! |         E_J   D_J | |x_J|   |t_J|
//! ```
//!
//! the factorization is `A = L U` with block diagonal `alpha_j` in `L`, the
//! sub-diagonal blocks `E_j` unchanged, and `U` unit block upper bidiagonal
//! with super-diagonal `Gamma_j`:
//!
//! ```text
//! alpha_0 = D_0
//! alpha_j Gamma_j = F_j
//! alpha_j = D_j - E_j Gamma_{j-1}
//! ```
//!
//! Each `alpha_j` is held as a partially pivoted dense LU.

use crate::error::{invalid, Error, Result};

pub const BLOCK: usize = 5;

pub type Vec5 = [f64; BLOCK];
pub type Block = [[f64; BLOCK]; BLOCK];

pub const ZERO_BLOCK: Block = [[0.0; BLOCK]; BLOCK];

pub fn identity_block() -> Block {
    let mut b = ZERO_BLOCK;
    for (i, row) in b.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    b
}

#[inline]
pub fn mat_vec(a: &Block, x: &Vec5) -> Vec5 {
    std::array::from_fn(|i| (0..BLOCK).map(|k| a[i][k] * x[k]).sum())
}

#[inline]
pub fn mat_mul(a: &Block, b: &Block) -> Block {
    let mut c = ZERO_BLOCK;
    for i in 0..BLOCK {
        for k in 0..BLOCK {
            let aik = a[i][k];
            if aik != 0.0 {
                for j in 0..BLOCK {
                    c[i][j] += aik * b[k][j];
                }
            }
        }
    }
    c
}

/// Dense LU of a single 5×5 block with partial (row) pivoting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallLu {
    lu: Block,
    perm: [usize; BLOCK],
}

impl SmallLu {
    /// Returns `None` if the block is numerically singular.
    pub fn new(a: &Block) -> Option<Self> {
        let scale = a.iter().flat_map(|r| r.iter()).fold(0.0f64, |m, v| m.max(v.abs()));
        if !(scale > 0.0 && scale.is_finite()) {
            return None;
        }
        let tiny = scale * 1e-14;
        let mut lu = *a;
        let mut perm: [usize; BLOCK] = std::array::from_fn(|i| i);
        for k in 0..BLOCK {
            let p = (k..BLOCK)
                .max_by(|&i, &j| lu[i][k].abs().total_cmp(&lu[j][k].abs()))
                .unwrap();
            if lu[p][k].abs() <= tiny {
                return None;
            }
            if p != k {
                lu.swap(p, k);
                perm.swap(p, k);
            }
            let pivot = lu[k][k];
            for i in k + 1..BLOCK {
                let l = lu[i][k] / pivot;
                lu[i][k] = l;
                if l != 0.0 {
                    let pivot_row = lu[k];
                    for (x, &u) in lu[i][k + 1..].iter_mut().zip(&pivot_row[k + 1..]) {
                        *x -= l * u;
                    }
                }
            }
        }
        Some(Self { lu, perm })
    }

    pub fn solve(&self, b: &Vec5) -> Vec5 {
        let mut x: Vec5 = std::array::from_fn(|i| b[self.perm[i]]);
        for i in 1..BLOCK {
            let s: f64 = (0..i).map(|k| self.lu[i][k] * x[k]).sum();
            x[i] -= s;
        }
        for i in (0..BLOCK).rev() {
            let s: f64 = (i + 1..BLOCK).map(|k| self.lu[i][k] * x[k]).sum();
            x[i] = (x[i] - s) / self.lu[i][i];
        }
        x
    }

    /// Solve `A X = B` column by column.
    pub fn solve_block(&self, b: &Block) -> Block {
        let mut x = ZERO_BLOCK;
        for j in 0..BLOCK {
            let col: Vec5 = std::array::from_fn(|i| b[i][j]);
            let sol = self.solve(&col);
            for i in 0..BLOCK {
                x[i][j] = sol[i];
            }
        }
        x
    }
}

/// A block-tridiagonal linear system with 5×5 blocks.
///
/// `sub[j - 1]` couples block row `j` to unknown block `j - 1`, and `sup[j]`
/// couples block row `j` to unknown block `j + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockTridiagonalSystem {
    pub diag: Vec<Block>,
    pub sub: Vec<Block>,
    pub sup: Vec<Block>,
    pub rhs: Vec<Vec5>,
}

impl BlockTridiagonalSystem {
    pub fn new(diag: Vec<Block>, sub: Vec<Block>, sup: Vec<Block>, rhs: Vec<Vec5>) -> Result<Self> {
        let system = Self { diag, sub, sup, rhs };
        system.validate()?;
        Ok(system)
    }

    /// A system of `block_count` zero blocks and zero right-hand side.
    pub fn zeros(block_count: usize) -> Self {
        let off = block_count.saturating_sub(1);
        Self {
            diag: vec![ZERO_BLOCK; block_count],
            sub: vec![ZERO_BLOCK; off],
            sup: vec![ZERO_BLOCK; off],
            rhs: vec![[0.0; BLOCK]; block_count],
        }
    }

    pub fn block_count(&self) -> usize {
        self.diag.len()
    }

    pub fn validate(&self) -> Result<()> {
        let j = self.diag.len();
        if j == 0 {
            return Err(invalid("block system must have at least one block row"));
        }
        if self.sub.len() != j - 1 || self.sup.len() != j - 1 || self.rhs.len() != j {
            return Err(invalid(format!(
                "inconsistent block lengths: diag {}, sub {}, sup {}, rhs {}",
                j,
                self.sub.len(),
                self.sup.len(),
                self.rhs.len()
            )));
        }
        let finite = self
            .diag
            .iter()
            .chain(&self.sub)
            .chain(&self.sup)
            .flat_map(|b| b.iter().flatten())
            .chain(self.rhs.iter().flatten())
            .all(|v| v.is_finite());
        if !finite {
            return Err(invalid("block system contains non-finite entries"));
        }
        Ok(())
    }

    /// `A x` for a block vector `x`.
    pub fn apply(&self, x: &[Vec5]) -> Vec<Vec5> {
        let n = self.block_count();
        (0..n)
            .map(|j| {
                let mut y = mat_vec(&self.diag[j], &x[j]);
                if j > 0 {
                    let e = mat_vec(&self.sub[j - 1], &x[j - 1]);
                    y.iter_mut().zip(e).for_each(|(a, b)| *a += b);
                }
                if j + 1 < n {
                    let f = mat_vec(&self.sup[j], &x[j + 1]);
                    y.iter_mut().zip(f).for_each(|(a, b)| *a += b);
                }
                y
            })
            .collect()
    }

    /// Row-major dense copy of the full `5J × 5J` matrix.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.block_count();
        let dim = n * BLOCK;
        let mut a = vec![vec![0.0; dim]; dim];
        let mut put = |bi: usize, bj: usize, b: &Block| {
            for i in 0..BLOCK {
                for j in 0..BLOCK {
                    a[bi * BLOCK + i][bj * BLOCK + j] = b[i][j];
                }
            }
        };
        for j in 0..n {
            put(j, j, &self.diag[j]);
            if j > 0 {
                put(j, j - 1, &self.sub[j - 1]);
            }
            if j + 1 < n {
                put(j, j + 1, &self.sup[j]);
            }
        }
        a
    }

    /// Infinity norm of the full matrix.
    pub fn norm_inf(&self) -> f64 {
        let n = self.block_count();
        let row_sum = |b: &Block, i: usize| b[i].iter().map(|v| v.abs()).sum::<f64>();
        (0..n)
            .flat_map(|j| {
                (0..BLOCK).map(move |i| {
                    let mut s = row_sum(&self.diag[j], i);
                    if j > 0 {
                        s += row_sum(&self.sub[j - 1], i);
                    }
                    if j + 1 < n {
                        s += row_sum(&self.sup[j], i);
                    }
                    s
                })
            })
            .fold(0.0, f64::max)
    }
}

/// Block LU factors of a [`BlockTridiagonalSystem`].
#[derive(Debug, Clone, PartialEq)]
pub struct BlockLuFactorization {
    alpha: Vec<Block>,
    alpha_lu: Vec<SmallLu>,
    gamma: Vec<Block>,
    sub: Vec<Block>,
}

impl BlockLuFactorization {
    pub fn block_count(&self) -> usize {
        self.alpha.len()
    }

    /// Diagonal blocks `alpha_j` of the lower factor.
    pub fn alpha(&self) -> &[Block] {
        &self.alpha
    }

    /// Super-diagonal blocks `Gamma_j` of the unit upper factor.
    pub fn gamma(&self) -> &[Block] {
        &self.gamma
    }

    /// Forward sweep `alpha_j g_j = t_j - E_j g_{j-1}`, then backward sweep
    /// `x_J = g_J`, `x_j = g_j - Gamma_j x_{j+1}`.
    pub fn solve(&self, rhs: &[Vec5]) -> Result<Vec<Vec5>> {
        let n = self.block_count();
        if rhs.len() != n {
            return Err(invalid(format!(
                "right-hand side has {} blocks, factorization has {n}",
                rhs.len()
            )));
        }
        let mut g: Vec<Vec5> = Vec::with_capacity(n);
        for j in 0..n {
            let mut t = rhs[j];
            if j > 0 {
                let e = mat_vec(&self.sub[j - 1], &g[j - 1]);
                t.iter_mut().zip(e).for_each(|(a, b)| *a -= b);
            }
            g.push(self.alpha_lu[j].solve(&t));
        }
        for j in (0..n.saturating_sub(1)).rev() {
            let c = mat_vec(&self.gamma[j], &g[j + 1]);
            g[j].iter_mut().zip(c).for_each(|(a, b)| *a -= b);
        }
        Ok(g)
    }
}

/// Factorize the coefficient blocks of `system` (its right-hand side is ignored).
pub fn factorize(system: &BlockTridiagonalSystem) -> Result<BlockLuFactorization> {
    system.validate()?;
    let n = system.block_count();
    let mut alpha = Vec::with_capacity(n);
    let mut alpha_lu = Vec::with_capacity(n);
    let mut gamma: Vec<Block> = Vec::with_capacity(n.saturating_sub(1));
    for j in 0..n {
        let a = if j == 0 {
            system.diag[0]
        } else {
            let eg = mat_mul(&system.sub[j - 1], &gamma[j - 1]);
            let mut a = system.diag[j];
            for (ra, re) in a.iter_mut().zip(eg.iter()) {
                ra.iter_mut().zip(re).for_each(|(x, y)| *x -= y);
            }
            a
        };
        let lu = SmallLu::new(&a).ok_or(Error::SingularBlock { index: j })?;
        if j + 1 < n {
            gamma.push(lu.solve_block(&system.sup[j]));
        }
        alpha.push(a);
        alpha_lu.push(lu);
    }
    Ok(BlockLuFactorization {
        alpha,
        alpha_lu,
        gamma,
        sub: system.sub.clone(),
    })
}

/// Factorize and solve `system` against its own right-hand side.
pub fn solve_system(system: &BlockTridiagonalSystem) -> Result<Vec<Vec5>> {
    factorize(system)?.solve(&system.rhs)
}
