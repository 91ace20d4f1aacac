//! Exact linear algebra over GF(q): reduced row echelon form, rank, kernels,
//! and small dense matrix helpers. Everything is deterministic and exact.

use crate::gf::{Fe, Field};

/// Reduced row echelon form: leading entries 1, strictly increasing pivot
/// columns, zeros above and below each pivot. Zero rows are dropped, so the
/// result has exactly `rank` rows.
pub fn rref(f: &Field, mut rows: Vec<Vec<Fe>>) -> Vec<Vec<Fe>> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivot_row = 0usize;
    for col in 0..ncols {
        if pivot_row == rows.len() {
            break;
        }
        let Some(pr) = (pivot_row..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(pivot_row, pr);
        let inv = f.inv(rows[pivot_row][col]).expect("pivot is nonzero");
        for c in 0..ncols {
            rows[pivot_row][c] = f.mul(rows[pivot_row][c], inv);
        }
        for r in 0..rows.len() {
            if r != pivot_row && rows[r][col] != 0 {
                let factor = rows[r][col];
                for c in 0..ncols {
                    let t = f.mul(factor, rows[pivot_row][c]);
                    rows[r][c] = f.sub(rows[r][c], t);
                }
            }
        }
        pivot_row += 1;
    }
    rows.truncate(pivot_row);
    rows
}

pub fn rank(f: &Field, rows: Vec<Vec<Fe>>) -> usize {
    rref(f, rows).len()
}

/// Pivot columns of a matrix already in reduced row echelon form.
pub fn pivot_cols(rows: &[Vec<Fe>]) -> Vec<usize> {
    rows.iter()
        .map(|r| r.iter().position(|&c| c != 0).expect("rref rows are nonzero"))
        .collect()
}

/// Basis of the right kernel {x : M x = 0}, returned in reduced row echelon
/// form. `ncols` must be supplied so the kernel of an empty matrix (the full
/// space) is well-defined.
pub fn kernel_basis_n(f: &Field, rows: Vec<Vec<Fe>>, ncols: usize) -> Vec<Vec<Fe>> {
    let r = rref(f, rows);
    let pivots = pivot_cols(&r);
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; ncols];
        for &p in &pivots {
            v[p] = true;
        }
        v
    };
    let mut basis = Vec::new();
    for j in 0..ncols {
        if is_pivot[j] {
            continue;
        }
        let mut x = vec![0u32; ncols];
        x[j] = 1;
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = f.neg(r[i][j]);
        }
        basis.push(x);
    }
    rref(f, basis)
}

/// Basis of the right kernel, with the column count read off the matrix
/// (which must therefore be non-empty).
pub fn kernel_basis(f: &Field, rows: Vec<Vec<Fe>>) -> Vec<Vec<Fe>> {
    let ncols = rows.first().map(|r| r.len()).expect("matrix has at least one row");
    kernel_basis_n(f, rows, ncols)
}

pub fn transpose(rows: &[Vec<Fe>]) -> Vec<Vec<Fe>> {
    let ncols = rows.first().map_or(0, |r| r.len());
    (0..ncols)
        .map(|j| rows.iter().map(|r| r[j]).collect())
        .collect()
}

pub fn dot(f: &Field, x: &[Fe], y: &[Fe]) -> Fe {
    debug_assert_eq!(x.len(), y.len());
    let mut acc = 0;
    for (a, b) in x.iter().zip(y) {
        acc = f.add(acc, f.mul(*a, *b));
    }
    acc
}

pub fn mat_vec(f: &Field, m: &[Vec<Fe>], x: &[Fe]) -> Vec<Fe> {
    m.iter().map(|row| dot(f, row, x)).collect()
}

pub fn mat_mul(f: &Field, a: &[Vec<Fe>], b: &[Vec<Fe>]) -> Vec<Vec<Fe>> {
    let bt = transpose(b);
    a.iter()
        .map(|row| bt.iter().map(|col| dot(f, row, col)).collect())
        .collect()
}

/// Inverse of a square matrix via Gauss-Jordan; None when singular.
pub fn invert(f: &Field, m: &[Vec<Fe>]) -> Option<Vec<Vec<Fe>>> {
    let n = m.len();
    let mut a: Vec<Vec<Fe>> = m.to_vec();
    let mut inv: Vec<Vec<Fe>> = (0..n)
        .map(|i| (0..n).map(|j| u32::from(i == j)).collect())
        .collect();
    for col in 0..n {
        let pr = (col..n).find(|&r| a[r][col] != 0)?;
        a.swap(col, pr);
        inv.swap(col, pr);
        let piv_inv = f.inv(a[col][col]).expect("pivot nonzero");
        for c in 0..n {
            a[col][c] = f.mul(a[col][c], piv_inv);
            inv[col][c] = f.mul(inv[col][c], piv_inv);
        }
        for r in 0..n {
            if r != col && a[r][col] != 0 {
                let factor = a[r][col];
                for c in 0..n {
                    let t = f.mul(factor, a[col][c]);
                    a[r][c] = f.sub(a[r][c], t);
                    let t2 = f.mul(factor, inv[col][c]);
                    inv[r][c] = f.sub(inv[r][c], t2);
                }
            }
        }
    }
    Some(inv)
}

/// Solves M x = b for one solution; None when inconsistent.
pub fn solve(f: &Field, m: &[Vec<Fe>], b: &[Fe]) -> Option<Vec<Fe>> {
    let ncols = m.first().map_or(0, |r| r.len());
    let aug: Vec<Vec<Fe>> = m
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    let r = rref(f, aug);
    let mut x = vec![0u32; ncols];
    for row in &r {
        let p = row.iter().position(|&c| c != 0).unwrap();
        if p == ncols {
            return None; // row (0 ... 0 | 1): inconsistent
        }
        x[p] = row[ncols];
    }
    Some(x)
}
