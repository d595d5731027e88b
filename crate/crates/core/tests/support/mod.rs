//! Shared generators and brute-force oracles for the integration tests.
#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeSet;

use conelab::{LatVec, Lattice};
use num_bigint::BigInt;
use rand::Rng;

pub fn v(c: &[i64]) -> LatVec {
    LatVec::from(c)
}

pub fn gram_i64(l: &Lattice) -> Vec<Vec<i64>> {
    l.gram()
        .iter()
        .map(|r| r.iter().map(|e| i64::try_from(e).unwrap()).collect())
        .collect()
}

pub fn pair_i(g: &[Vec<i64>], x: &[i64], y: &[i64]) -> i64 {
    let mut s = 0;
    for i in 0..x.len() {
        for j in 0..y.len() {
            s += x[i] * g[i][j] * y[j];
        }
    }
    s
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

pub fn is_primitive_i(x: &[i64]) -> bool {
    x.iter().fold(0, |g, &c| gcd(g, c)) == 1
}

/// Every integer vector of sup-norm at most `b`, in plain odometer order.
pub fn box_vectors(rank: usize, b: i64) -> impl Iterator<Item = Vec<i64>> {
    let mut cur = vec![-b; rank];
    let mut done = rank == 0;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = cur.clone();
        let mut i = rank;
        loop {
            if i == 0 {
                done = true;
                break;
            }
            i -= 1;
            if cur[i] < b {
                cur[i] += 1;
                break;
            }
            cur[i] = -b;
        }
        Some(out)
    })
}

/// Random lattice of signature (1, rank-1) with entries in `[-6, 6]`.
pub fn random_hyperbolic(rng: &mut impl Rng, rank: usize, walls: &[i64]) -> Lattice {
    loop {
        let mut g = vec![vec![0i64; rank]; rank];
        for i in 0..rank {
            for j in i..rank {
                let e = rng.gen_range(-6..=6);
                g[i][j] = e;
                g[j][i] = e;
            }
        }
        let rows: Vec<&[i64]> = g.iter().map(Vec::as_slice).collect();
        if let Ok(l) = Lattice::from_i64("random", &rows, walls, None) {
            return l;
        }
    }
}

/// Random vector of sup-norm at most `b` with positive square in the
/// lattice's cone.
pub fn random_positive(rng: &mut impl Rng, l: &Lattice, b: i64) -> LatVec {
    let g = gram_i64(l);
    let o: Vec<i64> = l.orientation().to_i64s().unwrap();
    loop {
        let x: Vec<i64> = (0..l.rank()).map(|_| rng.gen_range(-b..=b)).collect();
        if pair_i(&g, &x, &x) > 0 {
            let s = pair_i(&g, &x, &o).signum();
            return v(&x.iter().map(|c| c * s).collect::<Vec<_>>());
        }
    }
}

/// Sup-norm bound for walls separating `x` from `h`.
///
/// With `q(v) = d` and `t = pair(v,h)`, the majorant
/// `M(v) = 2 t^2 / q(h) - q(v)` is positive definite, and projecting `v` to
/// the span of `x, h` gives `t^2 <= |d| (b^2 - q(x) q(h)) / q(x)` for a
/// separating `v`. Then `v_i^2 <= M(v) (M^-1)_ii`.
pub fn separating_oracle_bound(l: &Lattice, x: &[i64], h: &[i64]) -> i64 {
    let g = gram_i64(l);
    let n = l.rank();
    let qx = pair_i(&g, x, x) as f64;
    let qh = pair_i(&g, h, h) as f64;
    let b = pair_i(&g, x, h) as f64;
    let dmax = l
        .wall_squares()
        .iter()
        .map(|d| -(i64::try_from(d).unwrap()) as f64)
        .fold(0.0, f64::max);
    let t2 = dmax * (b * b - qx * qh) / qx;
    let mmax = 2.0 * t2 / qh + dmax;
    // M = 2 (G h)(G h)^T / q(h) - G
    let gh: Vec<f64> = (0..n).map(|i| (0..n).map(|j| (g[i][j] * h[j]) as f64).sum()).collect();
    let m: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| 2.0 * gh[i] * gh[j] / qh - g[i][j] as f64).collect())
        .collect();
    let minv = invert_f64(&m);
    let diag = (0..n).map(|i| minv[i][i]).fold(0.0, f64::max);
    ((mmax * diag).sqrt() * 1.001 + 1.0).floor() as i64
}

fn invert_f64(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n)
            .max_by(|&i, &j| a[i][c].abs().partial_cmp(&a[j][c].abs()).unwrap())
            .unwrap();
        a.swap(c, p);
        let piv = a[c][c];
        for e in a[c].iter_mut() {
            *e /= piv;
        }
        for r in 0..n {
            if r != c {
                let f = a[r][c];
                for k in 0..2 * n {
                    a[r][k] -= f * a[c][k];
                }
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

/// Brute-force separating walls: primitive `v` in the box with `q(v)` a wall
/// square, `pair(v,h) > 0` and `pair(v,x) < 0` (`<= 0` when not strict).
pub fn separating_box(l: &Lattice, x: &[i64], h: &[i64], strict: bool, b: i64) -> BTreeSet<Vec<i64>> {
    let g = gram_i64(l);
    let squares: Vec<i64> = l.wall_squares().iter().map(|d| i64::try_from(d).unwrap()).collect();
    box_vectors(l.rank(), b)
        .filter(|w| {
            if !squares.contains(&pair_i(&g, w, w)) || pair_i(&g, w, h) <= 0 {
                return false;
            }
            let s = pair_i(&g, w, x);
            (if strict { s < 0 } else { s <= 0 }) && is_primitive_i(w)
        })
        .collect()
}

pub fn as_set(walls: &[conelab::Wall]) -> BTreeSet<Vec<i64>> {
    walls.iter().map(|w| w.vector().to_i64s().unwrap()).collect()
}

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}
