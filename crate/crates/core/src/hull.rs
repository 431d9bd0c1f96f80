//! Convex hulls of small point sets and the Kouchnirenko bound n!·vol(conv W).

use num_traits::{Signed, Zero};

use crate::error::Result;
use crate::linalg::{self, Mat};
use crate::rational::Rational;
use crate::system::Support;

fn affine_dim(points: &[Vec<Rational>], idx: &[usize]) -> usize {
    if idx.len() < 2 {
        return 0;
    }
    let o = &points[idx[0]];
    let rows: Mat = idx[1..].iter().map(|&i| points[i].iter().zip(o).map(|(a, b)| a - b).collect()).collect();
    linalg::rank(&rows)
}

/// Facets of a full-dimensional point set, each as sorted point indices.
pub fn facets(points: &[Vec<Rational>]) -> Vec<Vec<usize>> {
    let n = points[0].len();
    let m = points.len();
    let mut out: Vec<Vec<usize>> = Vec::new();
    for s in linalg::subsets(m, n) {
        if affine_dim(points, &s) != n - 1 {
            continue;
        }
        let o = &points[s[0]];
        let rows: Mat = s[1..].iter().map(|&i| points[i].iter().zip(o).map(|(a, b)| a - b).collect()).collect();
        let normal: Vec<Rational> = if rows.is_empty() {
            vec![Rational::from_integer(1.into()); n]
        } else {
            let k = linalg::kernel(&rows, n);
            k.iter().map(|r| r[0].clone()).collect()
        };
        let h = linalg::dot(&normal, o);
        let vals: Vec<Rational> = points.iter().map(|p| linalg::dot(&normal, p) - &h).collect();
        let pos = vals.iter().any(|v| v.is_positive());
        let neg = vals.iter().any(|v| v.is_negative());
        if pos && neg {
            continue;
        }
        let f: Vec<usize> = (0..m).filter(|&i| vals[i].is_zero()).collect();
        if !out.contains(&f) {
            out.push(f);
        }
    }
    out
}

fn centroid(points: &[Vec<Rational>], idx: &[usize]) -> Vec<Rational> {
    let n = points[0].len();
    let k = Rational::from_integer((idx.len() as i64).into());
    (0..n).map(|j| idx.iter().fold(Rational::zero(), |s, &i| s + &points[i][j]) / &k).collect()
}

/// Simplices of a fan triangulation of the face `face` (of affine dimension `dim`).
fn triangulate(
    points: &[Vec<Rational>],
    face: &[usize],
    dim: usize,
    top_facets: &[Vec<usize>],
    out: &mut Vec<Vec<Vec<Rational>>>,
    apexes: &mut Vec<Vec<Rational>>,
) {
    if dim == 0 {
        let mut s = apexes.clone();
        s.push(points[face[0]].clone());
        out.push(s);
        return;
    }
    let c = centroid(points, face);
    let mut subs: Vec<Vec<usize>> = Vec::new();
    for g in top_facets {
        let inter: Vec<usize> = face.iter().copied().filter(|i| g.contains(i)).collect();
        if inter.len() < dim || inter.len() == face.len() {
            continue;
        }
        if affine_dim(points, &inter) == dim - 1 && !subs.contains(&inter) {
            subs.push(inter);
        }
    }
    apexes.push(c);
    for s in &subs {
        triangulate(points, s, dim - 1, top_facets, out, apexes);
    }
    apexes.pop();
}

/// n!·vol(conv W), exactly.
pub fn kouchnirenko_bound(w: &Support) -> Result<Rational> {
    w.check_span()?;
    let n = w.n;
    let pts = &w.points;
    let all: Vec<usize> = (0..pts.len()).collect();
    let fs = facets(pts);
    // sub-faces of a facet are its intersections with other facets; top level uses facets directly
    let mut simplices = Vec::new();
    let c = centroid(pts, &all);
    let mut apexes = vec![c];
    for f in &fs {
        triangulate(pts, f, n - 1, &fs, &mut simplices, &mut apexes);
    }
    let mut total = Rational::zero();
    for s in &simplices {
        let rows: Mat = s[1..].iter().map(|p| p.iter().zip(&s[0]).map(|(a, b)| a - b).collect()).collect();
        total += linalg::det(&rows).abs();
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use proptest::prelude::*;

    #[test]
    fn simple_volumes() {
        assert_eq!(kouchnirenko_bound(&Support::from_ints(2, &[&[0, 0], &[1, 0], &[0, 1]])).unwrap(), int(1));
        assert_eq!(kouchnirenko_bound(&Support::from_ints(2, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])).unwrap(), int(2));
        let cube: Vec<Vec<i64>> =
            (0..8).map(|b| vec![(b & 1) as i64, ((b >> 1) & 1) as i64, ((b >> 2) & 1) as i64]).collect();
        let refs: Vec<&[i64]> = cube.iter().map(|v| v.as_slice()).collect();
        assert_eq!(kouchnirenko_bound(&Support::from_ints(3, &refs)).unwrap(), int(6));
        assert_eq!(kouchnirenko_bound(&Support::from_ints(1, &[&[0], &[3], &[1]])).unwrap(), int(3));
    }

    // independent oracle: gift wrapping then shoelace
    fn shoelace_twice_area(pts: &[(i64, i64)]) -> i64 {
        let mut uniq: Vec<(i64, i64)> = pts.to_vec();
        uniq.sort();
        uniq.dedup();
        let cross = |o: (i64, i64), a: (i64, i64), b: (i64, i64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
        let start = uniq[0];
        let mut hull = vec![start];
        let mut cur = start;
        loop {
            let mut cand = if uniq[0] == cur { uniq[1] } else { uniq[0] };
            for &p in &uniq {
                if p == cur {
                    continue;
                }
                let c = cross(cur, cand, p);
                let d2 = |q: (i64, i64)| (q.0 - cur.0).pow(2) + (q.1 - cur.1).pow(2);
                if c < 0 || (c == 0 && d2(p) > d2(cand)) {
                    cand = p;
                }
            }
            if cand == start {
                break;
            }
            hull.push(cand);
            cur = cand;
        }
        let mut a = 0;
        for i in 0..hull.len() {
            let (p, q) = (hull[i], hull[(i + 1) % hull.len()]);
            a += p.0 * q.1 - p.1 * q.0;
        }
        a.abs()
    }

    proptest! {
        #[test]
        fn matches_shoelace(pts in proptest::collection::btree_set((-4i64..5, -4i64..5), 3..8)) {
            let pts: Vec<(i64, i64)> = pts.into_iter().collect();
            let sup = Support::new(2, pts.iter().map(|&(a, b)| vec![int(a), int(b)]).collect()).unwrap();
            prop_assume!(sup.affine_rank() == 2);
            let k = kouchnirenko_bound(&sup).unwrap();
            prop_assert_eq!(k, int(shoelace_twice_area(&pts)));
        }

        #[test]
        fn translation_and_permutation_invariant(pts in proptest::collection::btree_set((0i64..4, 0i64..4, 0i64..3), 4..8), t in (-3i64..4, -3i64..4, -3i64..4)) {
            let pts: Vec<(i64, i64, i64)> = pts.into_iter().collect();
            let mk = |v: &[(i64, i64, i64)]| Support::new(3, v.iter().map(|&(a, b, c)| vec![int(a), int(b), int(c)]).collect()).unwrap();
            let s = mk(&pts);
            prop_assume!(s.affine_rank() == 3);
            let base = kouchnirenko_bound(&s).unwrap();
            let moved: Vec<_> = pts.iter().rev().map(|&(a, b, c)| (a + t.0, b + t.1, c + t.2)).collect();
            prop_assert_eq!(kouchnirenko_bound(&mk(&moved)).unwrap(), base);
        }
    }
}
