//! Dense exact linear algebra over Q on row-major `Vec<Vec<Rational>>`.

use num_traits::{One, Zero};

use crate::rational::Rational;

pub type Mat = Vec<Vec<Rational>>;

pub fn zeros(r: usize, c: usize) -> Mat {
    vec![vec![Rational::zero(); c]; r]
}

pub fn identity(n: usize) -> Mat {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Rational::one();
    }
    m
}

pub fn ncols(m: &Mat) -> usize {
    m.first().map_or(0, |r| r.len())
}

pub fn transpose(m: &Mat) -> Mat {
    let c = ncols(m);
    (0..c).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn mul(a: &Mat, b: &Mat) -> Mat {
    let (n, p) = (a.len(), ncols(b));
    let mut out = zeros(n, p);
    for i in 0..n {
        for (k, aik) in a[i].iter().enumerate() {
            if aik.is_zero() {
                continue;
            }
            for j in 0..p {
                out[i][j] += aik * &b[k][j];
            }
        }
    }
    out
}

pub fn mat_vec(a: &Mat, v: &[Rational]) -> Vec<Rational> {
    a.iter()
        .map(|r| r.iter().zip(v).fold(Rational::zero(), |s, (x, y)| s + x * y))
        .collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |s, (x, y)| s + x * y)
}

/// Reduced row echelon form and pivot columns.
pub fn rref(m: &Mat) -> (Mat, Vec<usize>) {
    let mut a = m.clone();
    let rows = a.len();
    let cols = ncols(&a);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..cols {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank(m: &Mat) -> usize {
    rref(m).1.len()
}

/// Determinant by fraction-tracking Gaussian elimination.
pub fn det(m: &Mat) -> Rational {
    let n = m.len();
    if n == 0 {
        return Rational::one();
    }
    let mut a = m.clone();
    let mut d = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return Rational::zero() };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        let inv = a[c][c].recip();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] -= t;
            }
        }
    }
    d
}

pub fn inverse(m: &Mat) -> Option<Mat> {
    let n = m.len();
    let mut aug: Mat = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    let (r, piv) = rref(&aug);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    aug = r;
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Solves a square system; `None` when singular.
pub fn solve(a: &Mat, b: &[Rational]) -> Option<Vec<Rational>> {
    let inv = inverse(a)?;
    Some(mat_vec(&inv, b))
}

/// Basis of {x : m x = 0} as columns of the returned matrix (rows = ncols(m)).
///
/// The basis is the canonical one: its transpose is in reduced row echelon form,
/// so two matrices with the same kernel give identical output.
pub fn kernel(m: &Mat, cols: usize) -> Mat {
    let (r, piv) = rref(m);
    let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
    let mut basis: Mat = Vec::new();
    for &f in &free {
        let mut v = vec![Rational::zero(); cols];
        v[f] = Rational::one();
        for (row, &pc) in piv.iter().enumerate() {
            v[pc] = -r[row][f].clone();
        }
        basis.push(v);
    }
    if basis.is_empty() {
        return vec![Vec::new(); cols];
    }
    let (canon, _) = rref(&basis);
    transpose(&canon)
}

/// Greedy choice of linearly independent rows, scanning in the given order.
pub fn independent_rows(m: &Mat, order: impl IntoIterator<Item = usize>, want: usize) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut acc: Mat = Vec::new();
    for i in order {
        if chosen.len() == want {
            break;
        }
        acc.push(m[i].clone());
        if rank(&acc) == acc.len() {
            chosen.push(i);
        } else {
            acc.pop();
        }
    }
    chosen
}

pub fn submatrix(m: &Mat, rows: &[usize], cols: &[usize]) -> Mat {
    rows.iter().map(|&i| cols.iter().map(|&j| m[i][j].clone()).collect()).collect()
}

/// All k-subsets of 0..n in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}
