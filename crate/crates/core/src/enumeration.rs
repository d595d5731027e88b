//! Wall vectors: lattice vectors of an admissible negative square.
//!
//! Separating walls between a class `x` of the closed positive cone and a
//! positive class `h` are found completely, not inside a coordinate box. For a
//! wall `v` put `s = pair(v, x)` and `t = pair(v, h)`. The projection of `v` to
//! the hyperbolic plane spanned by `x` and `h` is fixed by `(s, t)`, and its
//! square must be at least `q(v)` because the orthogonal complement is negative
//! definite. That confines `(s, t)` to a finite region; for each admissible
//! pair the remaining freedom is a coset of a definite lattice, searched with
//! an exact Fincke-Pohst recursion.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{scan_cmp, LatVec, Lattice, ShellScan};

/// Primitive vector of admissible negative square, identified with the
/// hyperplane `v^⊥`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Wall(LatVec);

impl Wall {
    /// Checks primitivity and that `q(v)` is one of the lattice's wall squares.
    pub fn new(lattice: &Lattice, v: LatVec) -> Result<Self> {
        lattice.check_dim(&v)?;
        let q = lattice.quad_unchecked(&v);
        if !lattice.wall_squares().contains(&q) {
            return Err(Error::InvalidArgument(format!(
                "{v} has square {q}, not an admissible wall square"
            )));
        }
        if !v.is_primitive() {
            return Err(Error::InvalidArgument(format!("{v} is not primitive")));
        }
        Ok(Wall(v))
    }

    pub fn vector(&self) -> &LatVec {
        &self.0
    }

    pub fn into_vector(self) -> LatVec {
        self.0
    }

    /// Sign-normalized representative of the hyperplane.
    pub fn line(&self) -> LatVec {
        self.0.primitivize().expect("walls are nonzero")
    }
}

impl PartialOrd for Wall {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Wall {
    fn cmp(&self, other: &Self) -> Ordering {
        scan_cmp(&self.0, &other.0)
    }
}

/// Largest box `(2 bound + 1)^rank` the brute-force scans will walk.
pub const MAX_BOX: u128 = 50_000_000;

/// Rejects boxes larger than [`MAX_BOX`].
pub fn check_box(rank: usize, bound: i64) -> Result<()> {
    let side = 2 * bound.max(0) as u128 + 1;
    let size = (0..rank).try_fold(1u128, |acc, _| acc.checked_mul(side).filter(|&s| s <= MAX_BOX));
    match size {
        Some(_) => Ok(()),
        None => Err(Error::InvalidArgument(format!(
            "box of sup-norm {bound} in rank {rank} exceeds {MAX_BOX} vectors"
        ))),
    }
}

/// All primitive `v` with `q(v) = d` and sup-norm at most `bound`, both signs,
/// in scan order.
pub fn vectors_of_square(lattice: &Lattice, d: &BigInt, bound: i64) -> Result<Vec<LatVec>> {
    if !d.is_negative() {
        return Err(Error::InvalidArgument(format!(
            "square {d} must be negative"
        )));
    }
    if bound < 1 {
        return Err(Error::InvalidArgument(format!("bound {bound} must be >= 1")));
    }
    check_box(lattice.rank(), bound)?;
    Ok(ShellScan::new(lattice.rank(), bound)
        .filter(|t| &lattice.quad_small(t) == d)
        .map(LatVec::from)
        .filter(LatVec::is_primitive)
        .collect())
}

/// Integer solutions of a few linear constraints `row_i · v = rhs_i` whose
/// kernel is negative definite for the lattice form, searched for a fixed
/// value of `q(v)`.
pub(crate) struct AffineSlice {
    /// Columns of the unimodular transform: the first `pivots.len()` columns
    /// carry the pivots, the rest span the integer kernel.
    columns: Vec<LatVec>,
    /// Lower-triangular pivot block of `rows * columns`.
    pivots: Vec<Vec<BigInt>>,
    kernel_dual: Vec<LatVec>,
    /// Inverse of the positive definite kernel Gram `N = -K^T G K`.
    kernel_inverse: Vec<Vec<BigRational>>,
    /// Fincke-Pohst form of `N`: `diag[i]` and multipliers `mu[i][j]`, `j > i`.
    diag: Vec<BigRational>,
    mu: Vec<Vec<BigRational>>,
}

impl AffineSlice {
    /// `rows` must be linearly independent integer functionals. Returns
    /// `None` if they are dependent.
    pub(crate) fn new(lattice: &Lattice, rows: &[LatVec]) -> Option<Self> {
        let r = lattice.rank();
        let k = rows.len();
        let mut columns: Vec<LatVec> = (0..r).map(|i| LatVec::basis(r, i)).collect();
        // a[j][i] = rows[i] · columns[j]
        let mut a: Vec<Vec<BigInt>> = (0..r)
            .map(|j| rows.iter().map(|row| row.0[j].clone()).collect())
            .collect();
        for i in 0..k {
            loop {
                let best = (i..r)
                    .filter(|&j| !a[j][i].is_zero())
                    .min_by(|&p, &q| a[p][i].abs().cmp(&a[q][i].abs()));
                let p = best?;
                columns.swap(i, p);
                a.swap(i, p);
                let mut done = true;
                for j in i + 1..r {
                    if a[j][i].is_zero() {
                        continue;
                    }
                    let f = a[j][i].div_floor(&a[i][i]);
                    let (ci, ai) = (columns[i].clone(), a[i].clone());
                    columns[j] = columns[j].add_scaled(&-&f, &ci);
                    for (x, y) in a[j].iter_mut().zip(&ai) {
                        *x -= &f * y;
                    }
                    if !a[j][i].is_zero() {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
            if a[i][i].is_negative() {
                columns[i] = -columns[i].clone();
                for x in a[i].iter_mut() {
                    *x = -x.clone();
                }
            }
        }
        let pivots = (0..k)
            .map(|i| (0..k).map(|j| if j <= i { a[j][i].clone() } else { BigInt::zero() }).collect())
            .collect();
        let kernel = &columns[k..];
        let m = kernel.len();
        let n_mat: Vec<Vec<BigRational>> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| BigRational::from_integer(-lattice.pair_unchecked(&kernel[i], &kernel[j])))
                    .collect()
            })
            .collect();
        let kernel_inverse = invert(&n_mat)?;
        let (diag, mu) = fincke_pohst_form(&n_mat);
        if diag.iter().any(|d| !d.is_positive()) {
            return None;
        }
        let kernel_dual = kernel.iter().map(|c| lattice.dual(c)).collect();
        Some(AffineSlice {
            columns,
            pivots,
            kernel_dual,
            kernel_inverse,
            diag,
            mu,
        })
    }

    /// All `v` with `rows · v = rhs` and `q(v) = d`.
    pub(crate) fn solutions(&self, lattice: &Lattice, rhs: &[BigInt], d: &BigInt) -> Vec<LatVec> {
        let k = self.pivots.len();
        let mut y = Vec::with_capacity(k);
        for i in 0..k {
            let mut acc = rhs[i].clone();
            for (j, yj) in y.iter().enumerate() {
                acc -= &self.pivots[i][j] * yj;
            }
            let (quo, rem) = acc.div_rem(&self.pivots[i][i]);
            if !rem.is_zero() {
                return Vec::new();
            }
            y.push(quo);
        }
        let mut base = LatVec::zero(lattice.rank());
        for (c, yi) in self.columns.iter().zip(&y) {
            base = base.add_scaled(yi, c);
        }
        let kernel = &self.columns[k..];
        if kernel.is_empty() {
            return if &lattice.quad_unchecked(&base) == d {
                vec![base]
            } else {
                Vec::new()
            };
        }
        // -q(base + K z) = c0 + 2 m·z + z^T N z
        let m_vec: Vec<BigRational> = self
            .kernel_dual
            .iter()
            .map(|kd| BigRational::from_integer(-dot(kd, &base)))
            .collect();
        let c0 = BigRational::from_integer(-lattice.quad_unchecked(&base));
        let center: Vec<BigRational> = self
            .kernel_inverse
            .iter()
            .map(|row| -row.iter().zip(&m_vec).map(|(a, b)| a * b).sum::<BigRational>())
            .collect();
        let m_dot_center: BigRational = m_vec.iter().zip(&center).map(|(a, b)| a * b).sum();
        let target = BigRational::from_integer(-d.clone()) - c0 - m_dot_center;
        if target.is_negative() {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut z = vec![BigInt::zero(); kernel.len()];
        self.descend(kernel.len(), &center, &target, &mut z, &mut |z| {
            let mut v = base.clone();
            for (zi, c) in z.iter().zip(kernel) {
                if !zi.is_zero() {
                    v = v.add_scaled(zi, c);
                }
            }
            debug_assert_eq!(&lattice.quad_unchecked(&v), d);
            out.push(v);
        });
        out
    }

    /// Fixes coordinates `level-1, ..., 0` of `z` so that
    /// `(z - center)^T N (z - center)` equals `remaining` exactly.
    fn descend(
        &self,
        level: usize,
        center: &[BigRational],
        remaining: &BigRational,
        z: &mut Vec<BigInt>,
        emit: &mut dyn FnMut(&[BigInt]),
    ) {
        if level == 0 {
            if remaining.is_zero() {
                emit(z);
            }
            return;
        }
        let i = level - 1;
        let mut ctr = center[i].clone();
        for j in i + 1..z.len() {
            let offset = BigRational::from_integer(z[j].clone()) - &center[j];
            ctr -= &self.mu[i][j] * offset;
        }
        let dii = &self.diag[i];
        let term = |zi: &BigInt| {
            let t = BigRational::from_integer(zi.clone()) - &ctr;
            dii * &t * &t
        };
        let start = ctr.floor().to_integer();
        let mut candidate = start.clone();
        loop {
            let t = term(&candidate);
            if &t > remaining {
                break;
            }
            z[i] = candidate.clone();
            self.descend(i, center, &(remaining - t), z, emit);
            candidate -= 1;
        }
        let mut candidate = start + 1;
        loop {
            let t = term(&candidate);
            if &t > remaining {
                break;
            }
            z[i] = candidate.clone();
            self.descend(i, center, &(remaining - t), z, emit);
            candidate += 1;
        }
        z[i] = BigInt::zero();
    }
}

fn dot(a: &LatVec, b: &LatVec) -> BigInt {
    a.0.iter().zip(&b.0).map(|(x, y)| x * y).sum()
}

/// `Q(y) = Σ diag_i (y_i + Σ_{j>i} mu_ij y_j)^2`.
fn fincke_pohst_form(n: &[Vec<BigRational>]) -> (Vec<BigRational>, Vec<Vec<BigRational>>) {
    let m = n.len();
    let mut q = n.to_vec();
    for i in 0..m {
        if q[i][i].is_zero() {
            return (vec![BigRational::zero(); m], q);
        }
        for j in i + 1..m {
            q[j][i] = q[i][j].clone();
            let v = &q[i][j] / &q[i][i];
            q[i][j] = v;
        }
        for k in i + 1..m {
            for l in k..m {
                let v = &q[k][i] * &q[i][l];
                q[k][l] -= v;
            }
        }
    }
    let diag = (0..m).map(|i| q[i][i].clone()).collect();
    (diag, q)
}

fn invert(a: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, p);
        let pivot = m[c][c].clone();
        for x in m[c].iter_mut() {
            *x /= &pivot;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                let pivot_row = m[c].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

fn sort_walls(mut walls: Vec<Wall>) -> Vec<Wall> {
    walls.sort();
    walls.dedup();
    walls
}

/// Walls `v` (oriented so `pair(v, h) > 0`) with `pair(v, x) < 0`, or
/// `pair(v, x) <= 0` when `strict_on_x` is false. Walls through `h` never
/// appear. The result is complete over the whole lattice.
pub fn separating_walls(
    lattice: &Lattice,
    x: &LatVec,
    h: &LatVec,
    strict_on_x: bool,
) -> Result<Vec<Wall>> {
    lattice.check_dim(x)?;
    lattice.check_dim(h)?;
    if !lattice.is_positive(h) {
        return Err(Error::NotPositiveBase(h.clone()));
    }
    if !lattice.in_closed_cone(x) {
        return Err(Error::XOutsideClosedCone(x.clone()));
    }
    let qx = lattice.quad_unchecked(x);
    let qh = lattice.quad_unchecked(h);
    let b = lattice.pair_unchecked(x, h);
    let disc = &b * &b - &qx * &qh;
    if disc.is_zero() {
        // x is a positive multiple of h
        return Ok(Vec::new());
    }
    if !strict_on_x && qx.is_zero() {
        return Err(Error::UnboundedWallSet(x.clone()));
    }
    let slice = AffineSlice::new(lattice, &[lattice.dual(x), lattice.dual(h)])
        .ok_or_else(|| Error::InvariantBreach("x and h span a degenerate plane".into()))?;
    let mut walls = Vec::new();
    for d in lattice.wall_squares() {
        // q_P(s,t) >= d  <=>  qh σ² + 2bσt + qx t² <= |d| disc, with σ = -s
        let budget = -d * &disc;
        let mut sigma = BigInt::from(if strict_on_x { 1 } else { 0 });
        while &qh * &sigma * &sigma <= budget {
            let mut t = BigInt::one();
            loop {
                let f = &qh * &sigma * &sigma + BigInt::from(2) * &b * &sigma * &t + &qx * &t * &t;
                if f > budget {
                    break;
                }
                for v in slice.solutions(lattice, &[-&sigma, t.clone()], d) {
                    if v.is_primitive() {
                        walls.push(Wall(v));
                    }
                }
                t += 1;
            }
            sigma += 1;
        }
    }
    Ok(sort_walls(walls))
}

/// Walls whose hyperplane contains the positive class `h`, sign-normalized.
pub fn walls_through(lattice: &Lattice, h: &LatVec) -> Result<Vec<Wall>> {
    lattice.check_dim(h)?;
    if !lattice.is_positive(h) {
        return Err(Error::NotPositive(h.clone()));
    }
    let slice = AffineSlice::new(lattice, &[lattice.dual(h)])
        .ok_or_else(|| Error::InvariantBreach("positive class with zero dual".into()))?;
    let mut walls = Vec::new();
    for d in lattice.wall_squares() {
        for v in slice.solutions(lattice, &[BigInt::zero()], d) {
            if v.is_primitive() && v.is_sign_normalized() {
                walls.push(Wall(v));
            }
        }
    }
    Ok(sort_walls(walls))
}

/// Walls `v` with `pair(v, r) = s` for `1 <= s <= max_pairing`, oriented so
/// that the pairing with `r` is positive.
pub(crate) fn walls_with_pairing(
    lattice: &Lattice,
    r: &LatVec,
    max_pairing: &BigInt,
) -> Result<Vec<Wall>> {
    let slice = AffineSlice::new(lattice, &[lattice.dual(r)])
        .ok_or_else(|| Error::InvariantBreach("positive class with zero dual".into()))?;
    let mut walls = Vec::new();
    for d in lattice.wall_squares() {
        let mut s = BigInt::one();
        while &s <= max_pairing {
            walls.extend(
                slice
                    .solutions(lattice, std::slice::from_ref(&s), d)
                    .into_iter()
                    .filter(LatVec::is_primitive)
                    .map(Wall),
            );
            s += 1;
        }
    }
    Ok(sort_walls(walls))
}

/// Outcome of [`nef_certificate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NefCertificate {
    pub nef: bool,
    /// Separating wall of smallest sup-norm (ties: lexicographic).
    pub witness: Option<Wall>,
}

/// `x` is nef relative to `h` iff no wall strictly separates them.
pub fn nef_certificate(lattice: &Lattice, x: &LatVec, h: &LatVec) -> Result<NefCertificate> {
    let walls = separating_walls(lattice, x, h, true)?;
    Ok(NefCertificate {
        nef: walls.is_empty(),
        witness: walls.into_iter().next(),
    })
}
