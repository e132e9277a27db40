//! Dense exact linear algebra: echelon forms, ranks, kernels, solves.

use crate::scalar::Field;

pub type Matrix<F> = Vec<Vec<F>>;

/// Reduced row echelon form in place; returns pivot columns.
///
/// Pivot rows come first, ordered by pivot column; remaining rows are zero.
pub fn rref<F: Field>(m: &mut Matrix<F>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv();
        for x in m[r].iter_mut() {
            if !x.is_zero() {
                *x = x.clone() * inv.clone();
            }
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x = x.clone() - f.clone() * y.clone();
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Canonical row basis: nonzero rows of the RREF.
pub fn row_basis<F: Field>(m: &Matrix<F>) -> Matrix<F> {
    let mut a = m.clone();
    let p = rref(&mut a);
    a.truncate(p.len());
    a
}

pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

/// Basis of `{x : M x = 0}` for a matrix with `ncols` columns.
pub fn kernel<F: Field>(m: &Matrix<F>, ncols: usize) -> Matrix<F> {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![F::zero(); ncols];
            x[f] = F::one();
            for (r, &pc) in pivots.iter().enumerate() {
                x[pc] = -a[r][f].clone();
            }
            x
        })
        .collect()
}

/// Solve `A x = b` for square invertible `A`; `None` when singular.
pub fn solve<F: Field>(a: &Matrix<F>, b: &[F]) -> Option<Vec<F>> {
    let n = a.len();
    let mut aug: Matrix<F> =
        a.iter().zip(b).map(|(row, bi)| row.iter().cloned().chain(std::iter::once(bi.clone())).collect()).collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n].clone()).collect())
}

pub fn inverse<F: Field>(a: &Matrix<F>) -> Option<Matrix<F>> {
    let n = a.len();
    let mut aug: Matrix<F> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { F::one() } else { F::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn determinant<F: Field>(a: &Matrix<F>) -> F {
    let n = a.len();
    let mut m = a.clone();
    let mut det = F::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else { return F::zero() };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det = det * m[c][c].clone();
        let inv = m[c][c].inv();
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone() * inv.clone();
            for j in c..n {
                let v = m[c][j].clone();
                m[i][j] = m[i][j].clone() - f.clone() * v;
            }
        }
    }
    det
}

pub fn mat_mul<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(F::zero(), |acc, k| acc + row[k].clone() * b[k][j].clone()))
                .collect()
        })
        .collect()
}

/// `A x`, skipping zero entries of `x`.
pub fn mat_vec<F: Field>(a: &Matrix<F>, x: &[F]) -> Vec<F> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(x)
                .filter(|(_, v)| !v.is_zero())
                .fold(F::zero(), |acc, (r, v)| acc + r.clone() * v.clone())
        })
        .collect()
}

pub fn conj_transpose<F: Field>(a: &Matrix<F>) -> Matrix<F> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    (0..cols).map(|j| (0..rows).map(|i| a[i][j].conj()).collect()).collect()
}

pub fn identity<F: Field>(n: usize) -> Matrix<F> {
    (0..n).map(|i| (0..n).map(|j| if i == j { F::one() } else { F::zero() }).collect()).collect()
}

/// An incrementally grown row space kept in reduced form.
#[derive(Clone, Debug)]
pub struct Echelon<F> {
    rows: Vec<(usize, Vec<F>)>,
}

impl<F: Field> Default for Echelon<F> {
    fn default() -> Self {
        Echelon { rows: Vec::new() }
    }
}

impl<F: Field> Echelon<F> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Remainder of `v` after eliminating against the stored rows.
    pub fn reduce(&self, v: &[F]) -> Vec<F> {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            let c = v.get(*p).cloned().unwrap_or_else(F::zero);
            if c.is_zero() {
                continue;
            }
            if v.len() < row.len() {
                v.resize(row.len(), F::zero());
            }
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x = x.clone() - c.clone() * y.clone();
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Adds `v` if independent; returns whether it was.
    pub fn insert(&mut self, v: &[F]) -> bool {
        let r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else { return false };
        let inv = r[p].inv();
        let r: Vec<F> = r.into_iter().map(|x| x * inv.clone()).collect();
        for (_, row) in self.rows.iter_mut() {
            let c = row.get(p).cloned().unwrap_or_else(F::zero);
            if c.is_zero() {
                continue;
            }
            if row.len() < r.len() {
                row.resize(r.len(), F::zero());
            }
            for (x, y) in row.iter_mut().zip(&r) {
                if !y.is_zero() {
                    *x = x.clone() - c.clone() * y.clone();
                }
            }
        }
        self.rows.push((p, r));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational as Q;
    use num_traits::{One, Zero};

    fn m(rows: &[&[i64]]) -> Matrix<Q> {
        rows.iter().map(|r| r.iter().map(|&x| Q::from_i64(x)).collect()).collect()
    }

    #[test]
    fn rank_kernel_solve() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&a), 2);
        let k = kernel(&a, 3);
        assert_eq!(k.len(), 1);
        for row in &a {
            let dot = row.iter().zip(&k[0]).fold(Q::zero(), |s, (x, y)| s + x.clone() * y.clone());
            assert!(dot.is_zero());
        }
        let b = m(&[&[2, 1], &[1, 3]]);
        let x = solve(&b, &[Q::from_i64(3), Q::from_i64(4)]).unwrap();
        assert_eq!(x, vec![Q::one(), Q::one()]);
        assert!(solve(&a, &[Q::one(), Q::one(), Q::one()]).is_none());
        assert_eq!(determinant(&b), Q::from_i64(5));
        assert_eq!(determinant(&a), Q::zero());
        let inv = inverse(&b).unwrap();
        assert_eq!(mat_mul(&b, &inv), identity(2));
    }

    #[test]
    fn echelon_tracks_span() {
        let mut e = Echelon::new();
        assert!(e.insert(&[Q::one(), Q::one(), Q::zero()]));
        assert!(e.insert(&[Q::zero(), Q::one(), Q::one()]));
        assert!(!e.insert(&[Q::one(), Q::from_i64(2), Q::one()]));
        assert!(e.contains(&[Q::from_i64(2), Q::zero(), -Q::from_i64(2)]));
        assert_eq!(e.rank(), 2);
    }
}
