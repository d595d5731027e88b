//! Integral quadratic lattices of signature (1, n).
//!
//! A [`Lattice`] is a symmetric integer Gram matrix together with an
//! orientation class selecting one component of the positive cone and the
//! set of admissible wall squares. All arithmetic here is exact; vectors are
//! [`LatVec`]s of unbounded integers in the fixed lattice basis.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Sup-norm bound of the fallback orientation search.
pub const ORIENTATION_SEARCH_BOUND: i64 = 10;

/// Integer coordinate vector in the lattice basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatVec(pub Vec<BigInt>);

impl LatVec {
    pub fn new(coords: Vec<BigInt>) -> Self {
        LatVec(coords)
    }

    pub fn zero(rank: usize) -> Self {
        LatVec(vec![BigInt::zero(); rank])
    }

    /// The `i`-th standard basis vector.
    pub fn basis(rank: usize, i: usize) -> Self {
        let mut v = Self::zero(rank);
        v.0[i] = BigInt::one();
        v
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        LatVec(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn sup_norm(&self) -> BigInt {
        self.0.iter().map(|c| c.abs()).max().unwrap_or_default()
    }

    /// Gcd of the coordinates (zero for the zero vector).
    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    /// Divides out the content and flips the sign so that the first nonzero
    /// coordinate is positive.
    pub fn primitivize(&self) -> Result<LatVec> {
        let mut p = self.primitive_part()?;
        if p.first_nonzero_sign() == Ordering::Less {
            p = -p;
        }
        Ok(p)
    }

    /// Divides out the (positive) content, keeping the direction.
    pub fn primitive_part(&self) -> Result<LatVec> {
        let g = self.content();
        if g.is_zero() {
            return Err(Error::ZeroVector);
        }
        Ok(LatVec(self.0.iter().map(|c| c / &g).collect()))
    }

    /// Whether this vector equals its own sign normalization.
    pub fn is_sign_normalized(&self) -> bool {
        self.first_nonzero_sign() == Ordering::Greater
    }

    fn first_nonzero_sign(&self) -> Ordering {
        self.0
            .iter()
            .find(|c| !c.is_zero())
            .map(|c| c.cmp(&BigInt::zero()))
            .unwrap_or(Ordering::Equal)
    }

    pub fn scaled(&self, k: &BigInt) -> LatVec {
        LatVec(self.0.iter().map(|c| c * k).collect())
    }

    /// `self + k * other`.
    pub fn add_scaled(&self, k: &BigInt, other: &LatVec) -> LatVec {
        LatVec(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + k * b)
                .collect(),
        )
    }

    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.0.iter().map(|c| c.to_i64()).collect()
    }
}

impl std::ops::Neg for LatVec {
    type Output = LatVec;
    fn neg(self) -> LatVec {
        LatVec(self.0.into_iter().map(|c| -c).collect())
    }
}

impl std::ops::Add<&LatVec> for &LatVec {
    type Output = LatVec;
    fn add(self, rhs: &LatVec) -> LatVec {
        LatVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl From<&[i64]> for LatVec {
    fn from(c: &[i64]) -> Self {
        LatVec::from_i64s(c)
    }
}

impl<const N: usize> From<[i64; N]> for LatVec {
    fn from(c: [i64; N]) -> Self {
        LatVec::from_i64s(&c)
    }
}

impl From<Vec<i64>> for LatVec {
    fn from(c: Vec<i64>) -> Self {
        LatVec::from_i64s(&c)
    }
}

impl fmt::Display for LatVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Deterministic scan order: ascending sup-norm, then lexicographic.
pub fn scan_cmp(a: &LatVec, b: &LatVec) -> Ordering {
    a.sup_norm().cmp(&b.sup_norm()).then_with(|| a.0.cmp(&b.0))
}

/// Iterates integer tuples shell by shell: sup-norm `1, 2, ..., bound`, and
/// lexicographically from `(-r, ..., -r)` upward inside each shell.
#[derive(Debug, Clone)]
pub struct ShellScan {
    rank: usize,
    bound: i64,
    radius: i64,
    current: Option<Vec<i64>>,
}

impl ShellScan {
    pub fn new(rank: usize, bound: i64) -> Self {
        let current = (bound >= 1 && rank > 0).then(|| vec![-1; rank]);
        ShellScan {
            rank,
            bound,
            radius: 1,
            current,
        }
    }

    fn advance(&mut self) {
        let r = self.radius;
        let Some(cur) = self.current.as_mut() else {
            return;
        };
        for i in (0..cur.len()).rev() {
            if cur[i] < r {
                cur[i] += 1;
                return;
            }
            cur[i] = -r;
        }
        // odometer wrapped: next shell
        self.radius += 1;
        if self.radius > self.bound {
            self.current = None;
        } else {
            self.current = Some(vec![-self.radius; self.rank]);
        }
    }
}

impl Iterator for ShellScan {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        loop {
            let cur = self.current.clone()?;
            let r = self.radius;
            self.advance();
            if cur.iter().any(|c| c.abs() == r) {
                return Some(cur);
            }
        }
    }
}

/// Exact inertia of a symmetric matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Inertia {
    pub pos: usize,
    pub neg: usize,
    pub zero: usize,
}

/// Inertia by symmetric Gaussian elimination over the rationals.
pub fn inertia(gram: &[Vec<BigInt>]) -> Inertia {
    let n = gram.len();
    let mut a: Vec<Vec<BigRational>> = gram
        .iter()
        .map(|row| row.iter().map(|c| BigRational::from_integer(c.clone())).collect())
        .collect();
    let (mut pos, mut neg) = (0, 0);
    let mut k = 0;
    while k < n {
        if let Some(i) = (k..n).find(|&i| !a[i][i].is_zero()) {
            swap_sym(&mut a, i, k);
        } else if let Some((i, j)) = (k..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| !a[i][j].is_zero())
        {
            // row/col i += row/col j makes the diagonal entry 2 a_ij
            for c in 0..n {
                let v = a[j][c].clone();
                a[i][c] += v;
            }
            for r in 0..n {
                let v = a[r][j].clone();
                a[r][i] += v;
            }
            swap_sym(&mut a, i, k);
        } else {
            break;
        }
        let p = a[k][k].clone();
        if p.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            let f = &a[i][k] / &p;
            if f.is_zero() {
                continue;
            }
            for j in k + 1..n {
                let d = &f * &a[k][j];
                a[i][j] -= d;
            }
        }
        for i in k + 1..n {
            a[i][k] = BigRational::zero();
            a[k][i] = BigRational::zero();
        }
        k += 1;
    }
    Inertia {
        pos,
        neg,
        zero: n - pos - neg,
    }
}

fn swap_sym(a: &mut [Vec<BigRational>], i: usize, j: usize) {
    if i == j {
        return;
    }
    a.swap(i, j);
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

/// Input record for [`Lattice::from_description`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeDescription {
    pub name: String,
    pub gram: Vec<Vec<BigInt>>,
    pub wall_squares: Option<Vec<BigInt>>,
    pub orientation: Option<LatVec>,
}

/// Integral lattice of signature (1, rank - 1) with an oriented positive cone.
#[derive(Clone, Debug)]
pub struct Lattice {
    name: String,
    gram: Vec<Vec<BigInt>>,
    orientation: LatVec,
    wall_squares: BTreeSet<BigInt>,
    inertia: Inertia,
    small: Option<Vec<Vec<i64>>>,
}

impl Lattice {
    /// Validates the data and builds the lattice. When `orientation` is
    /// `None`, the first standard basis vector of positive square is used,
    /// falling back to a sign-normalized shell scan of sup-norm at most
    /// [`ORIENTATION_SEARCH_BOUND`].
    pub fn new(
        name: impl Into<String>,
        gram: Vec<Vec<BigInt>>,
        wall_squares: impl IntoIterator<Item = BigInt>,
        orientation: Option<LatVec>,
    ) -> Result<Self> {
        let n = gram.len();
        if n == 0 {
            return Err(Error::MalformedGram("empty matrix".into()));
        }
        if let Some(row) = gram.iter().position(|r| r.len() != n) {
            return Err(Error::MalformedGram(format!(
                "row {row} has length {}, expected {n}",
                gram[row].len()
            )));
        }
        for i in 0..n {
            for j in i + 1..n {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::NonSymmetricGram { row: i, col: j });
                }
            }
        }
        let wall_squares: BTreeSet<BigInt> = wall_squares.into_iter().collect();
        if wall_squares.is_empty() {
            return Err(Error::EmptyWallSquares);
        }
        if let Some(s) = wall_squares.iter().find(|s| !s.is_negative()) {
            return Err(Error::InvalidWallSquare(s.clone()));
        }
        let inertia = inertia(&gram);
        if inertia.pos != 1 || inertia.zero != 0 {
            return Err(Error::WrongSignature {
                pos: inertia.pos,
                neg: inertia.neg,
                zero: inertia.zero,
            });
        }
        let small = small_gram(&gram);
        let mut lattice = Lattice {
            name: name.into(),
            gram,
            orientation: LatVec::zero(n),
            wall_squares,
            inertia,
            small,
        };
        lattice.orientation = match orientation {
            Some(o) => {
                lattice.check_dim(&o)?;
                if !lattice.quad_unchecked(&o).is_positive() {
                    return Err(Error::InvalidOrientation(o));
                }
                o
            }
            None => lattice.search_orientation()?,
        };
        Ok(lattice)
    }

    /// Builds a lattice from a description record; wall squares default to {-2}.
    pub fn from_description(desc: LatticeDescription) -> Result<Self> {
        let walls = desc
            .wall_squares
            .unwrap_or_else(|| vec![BigInt::from(-2)]);
        Lattice::new(desc.name, desc.gram, walls, desc.orientation)
    }

    /// Convenience constructor from small integer data.
    pub fn from_i64(
        name: &str,
        gram: &[&[i64]],
        wall_squares: &[i64],
        orientation: Option<&[i64]>,
    ) -> Result<Self> {
        let gram = gram
            .iter()
            .map(|r| r.iter().map(|&c| BigInt::from(c)).collect())
            .collect();
        Lattice::new(
            name,
            gram,
            wall_squares.iter().map(|&s| BigInt::from(s)),
            orientation.map(LatVec::from_i64s),
        )
    }

    /// Diagonal lattice with wall squares {-2}.
    pub fn diagonal(name: &str, diag: &[i64]) -> Result<Self> {
        let n = diag.len();
        let gram = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| BigInt::from(if i == j { diag[i] } else { 0 }))
                    .collect()
            })
            .collect();
        Lattice::new(name, gram, [BigInt::from(-2)], None)
    }

    fn search_orientation(&self) -> Result<LatVec> {
        let n = self.rank();
        for i in 0..n {
            if self.gram[i][i].is_positive() {
                return Ok(LatVec::basis(n, i));
            }
        }
        ShellScan::new(n, ORIENTATION_SEARCH_BOUND)
            .map(LatVec::from)
            .filter(|v| v.is_sign_normalized())
            .find(|v| self.quad_unchecked(v).is_positive())
            .ok_or(Error::NoOrientationFound {
                bound: ORIENTATION_SEARCH_BOUND,
            })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<BigInt>] {
        &self.gram
    }

    pub fn orientation(&self) -> &LatVec {
        &self.orientation
    }

    pub fn wall_squares(&self) -> &BTreeSet<BigInt> {
        &self.wall_squares
    }

    /// Exact inertia `(pos, neg, zero)` of the Gram matrix.
    pub fn signature(&self) -> Inertia {
        self.inertia
    }

    pub fn description(&self) -> LatticeDescription {
        LatticeDescription {
            name: self.name.clone(),
            gram: self.gram.clone(),
            wall_squares: Some(self.wall_squares.iter().cloned().collect()),
            orientation: Some(self.orientation.clone()),
        }
    }

    pub fn check_dim(&self, x: &LatVec) -> Result<()> {
        if x.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                found: x.len(),
            });
        }
        Ok(())
    }

    /// `Gram * x`, the linear functional `y -> pair(x, y)`.
    pub fn dual(&self, x: &LatVec) -> LatVec {
        LatVec(
            self.gram
                .iter()
                .map(|row| row.iter().zip(&x.0).map(|(g, c)| g * c).sum())
                .collect(),
        )
    }

    pub fn pair(&self, x: &LatVec, y: &LatVec) -> Result<BigInt> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        Ok(self.pair_unchecked(x, y))
    }

    pub fn quad(&self, x: &LatVec) -> Result<BigInt> {
        self.check_dim(x)?;
        Ok(self.quad_unchecked(x))
    }

    pub(crate) fn pair_unchecked(&self, x: &LatVec, y: &LatVec) -> BigInt {
        let mut acc = BigInt::zero();
        for (i, xi) in x.0.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let row: BigInt = self.gram[i].iter().zip(&y.0).map(|(g, c)| g * c).sum();
            acc += xi * row;
        }
        acc
    }

    pub(crate) fn quad_unchecked(&self, x: &LatVec) -> BigInt {
        self.pair_unchecked(x, x)
    }

    /// `q(v)` for a small coordinate tuple, using checked machine arithmetic
    /// when the Gram matrix is small and falling back to big integers.
    pub(crate) fn quad_small(&self, v: &[i64]) -> BigInt {
        if let Some(g) = &self.small {
            if let Some(q) = quad_i128(g, v) {
                return BigInt::from(q);
            }
        }
        self.quad_unchecked(&LatVec::from_i64s(v))
    }

    /// Same as [`Self::pair`] for a small coordinate tuple against `y`'s dual.
    pub(crate) fn apply_small(dual: &[i64], v: &[i64]) -> Option<i128> {
        let mut acc: i128 = 0;
        for (a, b) in dual.iter().zip(v) {
            acc = acc.checked_add((*a as i128).checked_mul(*b as i128)?)?;
        }
        Some(acc)
    }

    pub fn primitivize(&self, x: &LatVec) -> Result<LatVec> {
        self.check_dim(x)?;
        x.primitivize()
    }

    /// Reflection `x - 2 pair(x, v) / q(v) * v` in the hyperplane `v^⊥`.
    pub fn reflect(&self, v: &LatVec, x: &LatVec) -> Result<LatVec> {
        self.check_dim(v)?;
        self.check_dim(x)?;
        let qv = self.quad_unchecked(v);
        if !qv.is_negative() {
            return Err(Error::NonNegativeMirror(v.clone()));
        }
        let num: BigInt = self.pair_unchecked(x, v) * 2;
        let (coef, rem) = num.div_rem(&qv);
        if !rem.is_zero() {
            return Err(Error::NonIntegralReflection {
                mirror: v.clone(),
                vector: x.clone(),
            });
        }
        Ok(x.add_scaled(&-coef, v))
    }

    /// Positive multiple of the reflection of `x`, always integral:
    /// `|q(v)| x + 2 pair(x, v) v`.
    pub(crate) fn reflect_scaled(&self, v: &LatVec, x: &LatVec) -> LatVec {
        let qv = self.quad_unchecked(v);
        let c = self.pair_unchecked(x, v) * 2;
        x.scaled(&-qv).add_scaled(&c, v)
    }

    /// Whether reflection in `v` maps the whole lattice to itself.
    pub fn reflection_is_integral(&self, v: &LatVec) -> bool {
        let qv = self.quad_unchecked(v);
        if !qv.is_negative() {
            return false;
        }
        self.dual(v)
            .0
            .iter()
            .all(|c| (c * 2_i32).is_multiple_of(&qv))
    }

    /// Membership in the oriented open positive cone.
    pub fn is_positive(&self, x: &LatVec) -> bool {
        x.len() == self.rank()
            && self.quad_unchecked(x).is_positive()
            && self.pair_unchecked(x, &self.orientation).is_positive()
    }

    /// Nonzero class of the closure of the oriented positive cone.
    pub fn in_closed_cone(&self, x: &LatVec) -> bool {
        x.len() == self.rank()
            && !self.quad_unchecked(x).is_negative()
            && self.pair_unchecked(x, &self.orientation).is_positive()
    }
}

fn small_gram(gram: &[Vec<BigInt>]) -> Option<Vec<Vec<i64>>> {
    if gram.len() > 256 {
        return None;
    }
    gram.iter()
        .map(|row| {
            row.iter()
                .map(|c| c.to_i32().map(i64::from))
                .collect::<Option<Vec<_>>>()
        })
        .collect()
}

fn quad_i128(gram: &[Vec<i64>], v: &[i64]) -> Option<i128> {
    let mut acc: i128 = 0;
    for (i, &vi) in v.iter().enumerate() {
        if vi == 0 {
            continue;
        }
        let mut row: i128 = 0;
        for (g, &vj) in gram[i].iter().zip(v) {
            row = row.checked_add((*g as i128).checked_mul(vj as i128)?)?;
        }
        acc = acc.checked_add(row.checked_mul(vi as i128)?)?;
    }
    Some(acc)
}
