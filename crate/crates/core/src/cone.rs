//! Hyperbolic geometry of the projectivized positive cone.
//!
//! Positive classes are points of hyperbolic space, walls are geodesic
//! hyperplanes and isotropic classes are points at infinity. This module
//! holds the hyperboloid distance, the reflection walk that makes an
//! isotropic class nef, chamber signatures and a truncated chamber graph.

use std::collections::{HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use crate::enumeration::{separating_walls, walls_through, walls_with_pairing, Wall};
use crate::error::{Error, Result};
use crate::lattice::{scan_cmp, LatVec, Lattice};

/// Hyperbolic distance between the rays of two positive classes,
/// `arccosh(pair(x,y) / sqrt(q(x) q(y)))`.
///
/// `sinh^2 d = (pair^2 - q(x) q(y)) / (q(x) q(y))` is formed exactly and
/// converted to floating point once, which keeps nearby points accurate.
pub fn hyperbolic_distance(lattice: &Lattice, x: &LatVec, y: &LatVec) -> Result<f64> {
    for v in [x, y] {
        lattice.check_dim(v)?;
        if !lattice.is_positive(v) {
            return Err(Error::NotPositive(v.clone()));
        }
    }
    let p = lattice.pair_unchecked(x, y);
    let qq = lattice.quad_unchecked(x) * lattice.quad_unchecked(y);
    let sinh_sq = BigRational::new(&p * &p - &qq, qq);
    let s = sinh_sq.to_f64().unwrap_or(f64::INFINITY).max(0.0);
    Ok(s.sqrt().asinh())
}

/// Order in which separating walls are used by [`nef_walk`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum WalkOrder {
    /// Reflect in the wall giving the smallest new pairing with `h`; ties go
    /// to the smaller wall in scan order.
    #[default]
    Greedy,
    /// Reflect in the first separating wall in scan order.
    FirstFound,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkStep {
    pub wall: Wall,
    pub image: LatVec,
    /// `pair(image, h)`.
    pub pairing: BigInt,
}

/// Certificate of a nef walk: each step reflects the previous class in a wall
/// strictly separating it from `h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkTrace {
    pub start: LatVec,
    pub h: LatVec,
    pub start_pairing: BigInt,
    pub steps: Vec<WalkStep>,
    pub final_class: LatVec,
}

impl WalkTrace {
    /// Re-checks every step without trusting the stored images.
    pub fn verify(&self, lattice: &Lattice) -> Result<()> {
        let mut cur = self.start.clone();
        let mut last = lattice.pair(&cur, &self.h)?;
        if last != self.start_pairing {
            return Err(Error::InvariantBreach("start pairing mismatch".into()));
        }
        for (i, step) in self.steps.iter().enumerate() {
            let v = step.wall.vector();
            if !(lattice.pair(v, &cur)?.is_negative() && lattice.pair(v, &self.h)?.is_positive()) {
                return Err(Error::InvariantBreach(format!("step {i}: wall does not separate")));
            }
            let image = lattice.reflect(v, &cur)?;
            if image != step.image {
                return Err(Error::InvariantBreach(format!("step {i}: image mismatch")));
            }
            let p = lattice.pair(&image, &self.h)?;
            if p != step.pairing || p >= last || !p.is_positive() {
                return Err(Error::InvariantBreach(format!("step {i}: pairing not descending")));
            }
            last = p;
            cur = image;
        }
        if cur != self.final_class || lattice.quad(&cur)? != lattice.quad(&self.start)? {
            return Err(Error::InvariantBreach("final class mismatch".into()));
        }
        Ok(())
    }
}

/// Reflects the isotropic class `x` in separating walls until no wall
/// separates it from `h`. Each reflection lowers the positive integer
/// `pair(x, h)`, so the walk stops after at most `pair(x, h)` steps.
///
/// Walls through `h` itself never count as separating, so `h` only has to be
/// positive.
pub fn nef_walk(lattice: &Lattice, x: &LatVec, h: &LatVec, order: WalkOrder) -> Result<WalkTrace> {
    lattice.check_dim(x)?;
    lattice.check_dim(h)?;
    if !lattice.is_positive(h) {
        return Err(Error::NotPositiveBase(h.clone()));
    }
    if x.is_zero() || !lattice.quad_unchecked(x).is_zero() || !lattice.in_closed_cone(x) {
        return Err(Error::NotIsotropic(x.clone()));
    }
    let start_pairing = lattice.pair_unchecked(x, h);
    let mut trace = WalkTrace {
        start: x.clone(),
        h: h.clone(),
        start_pairing: start_pairing.clone(),
        steps: Vec::new(),
        final_class: x.clone(),
    };
    let mut cur = x.clone();
    let mut cur_pairing = start_pairing;
    loop {
        let walls = separating_walls(lattice, &cur, h, true)?;
        if walls.is_empty() {
            break;
        }
        let chosen = match order {
            WalkOrder::FirstFound => walls[0].clone(),
            WalkOrder::Greedy => {
                // pair(σ_v x, h) = pair(x,h) - 2 s t / q(v)
                let mut best: Option<(BigRational, &Wall)> = None;
                for w in &walls {
                    let v = w.vector();
                    let s = lattice.pair_unchecked(v, &cur);
                    let t = lattice.pair_unchecked(v, h);
                    let drop = BigRational::new(s * t * 2, lattice.quad_unchecked(v));
                    let value = BigRational::from_integer(cur_pairing.clone()) - drop;
                    if best.as_ref().is_none_or(|(b, _)| &value < b) {
                        best = Some((value, w));
                    }
                }
                best.expect("walls is nonempty").1.clone()
            }
        };
        let image = match lattice.reflect(chosen.vector(), &cur) {
            Ok(img) => img,
            Err(Error::NonIntegralReflection { mirror, .. }) => {
                trace.final_class = cur;
                return Err(Error::WalkAborted {
                    trace: Box::new(trace),
                    mirror,
                });
            }
            Err(e) => return Err(e),
        };
        let pairing = lattice.pair_unchecked(&image, h);
        if pairing >= cur_pairing || !pairing.is_positive() {
            return Err(Error::InvariantBreach(format!(
                "pairing did not descend: {cur_pairing} -> {pairing}"
            )));
        }
        trace.steps.push(WalkStep {
            wall: chosen,
            image: image.clone(),
            pairing: pairing.clone(),
        });
        cur = image;
        cur_pairing = pairing;
    }
    trace.final_class = cur;
    Ok(trace)
}

/// A chamber recorded by the walls separating an interior point from the
/// base class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chamber {
    /// Walls oriented towards the base class, in scan order.
    pub signature_walls: Vec<Wall>,
    pub representative: LatVec,
}

impl Chamber {
    /// Signature as a set of sign-normalized lines.
    pub fn lines(&self) -> Vec<LatVec> {
        let mut l: Vec<LatVec> = self.signature_walls.iter().map(Wall::line).collect();
        l.sort_by(scan_cmp);
        l
    }

    fn key(&self) -> Vec<LatVec> {
        self.signature_walls.iter().map(|w| w.vector().clone()).collect()
    }
}

fn check_interior_base(lattice: &Lattice, h0: &LatVec) -> Result<()> {
    lattice.check_dim(h0)?;
    if !lattice.is_positive(h0) {
        return Err(Error::NotPositiveBase(h0.clone()));
    }
    if let Some(w) = walls_through(lattice, h0)?.into_iter().next() {
        return Err(Error::NotAmpleBase {
            wall: w.into_vector(),
        });
    }
    Ok(())
}

/// Whether the positive class lies on no wall.
pub fn is_interior(lattice: &Lattice, h: &LatVec) -> Result<bool> {
    Ok(walls_through(lattice, h)?.is_empty())
}

/// First positive class in scan order lying on no wall.
pub fn find_interior_class(lattice: &Lattice, bound: i64) -> Result<Option<LatVec>> {
    for t in crate::lattice::ShellScan::new(lattice.rank(), bound) {
        let v = LatVec::from(t);
        if lattice.is_positive(&v) && v.is_primitive() && is_interior(lattice, &v)? {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

/// The chamber containing the positive class `x`, in coordinates relative to
/// the chamber of the interior base class `h0`.
pub fn chamber_of(lattice: &Lattice, x: &LatVec, h0: &LatVec) -> Result<Chamber> {
    lattice.check_dim(x)?;
    if !lattice.is_positive(x) {
        return Err(Error::NotPositive(x.clone()));
    }
    check_interior_base(lattice, h0)?;
    chamber_unchecked(lattice, x, h0)
}

fn chamber_unchecked(lattice: &Lattice, x: &LatVec, h0: &LatVec) -> Result<Chamber> {
    let walls = separating_walls(lattice, x, h0, false)?;
    if let Some(w) = walls
        .iter()
        .find(|w| lattice.pair_unchecked(w.vector(), x).is_zero())
    {
        return Err(Error::OnWall { wall: w.line() });
    }
    Ok(Chamber {
        signature_walls: walls,
        representative: x.clone(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChamberNode {
    pub chamber: Chamber,
    pub orbit: usize,
}

/// Adjacent chambers: their signatures differ in exactly `wall`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChamberEdge {
    pub a: usize,
    pub b: usize,
    /// Sign-normalized wall.
    pub wall: LatVec,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChamberGraph {
    pub base: LatVec,
    pub radius: f64,
    /// Node 0 is the chamber of the base class.
    pub nodes: Vec<ChamberNode>,
    pub edges: Vec<ChamberEdge>,
    /// Number of classes after identifying explored chambers that an integral
    /// edge-wall reflection maps onto each other. Only relations visible
    /// inside the explored region are used, so the count bounds the number
    /// of pieces from above.
    pub orbit_count: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct ChamberGraphOptions {
    /// Abort once this many distinct representatives have been queued.
    pub max_representatives: usize,
    /// Attempts at moving a reflected representative off the walls.
    pub nudge_attempts: usize,
}

impl Default for ChamberGraphOptions {
    fn default() -> Self {
        ChamberGraphOptions {
            max_representatives: 20_000,
            nudge_attempts: 32,
        }
    }
}

/// Breadth-first exploration of the chambers met by representatives within
/// hyperbolic distance `radius` of `h0`.
///
/// A representative `r` spawns `σ_v(r)` for every wall `v` close enough to
/// `r` for the image to stay within `radius`. The search runs over
/// representatives rather than chambers, so a larger radius explores a
/// superset and node counts grow monotonically. Each chamber keeps its
/// scan-order smallest representative.
pub fn chamber_graph(lattice: &Lattice, h0: &LatVec, radius: f64) -> Result<ChamberGraph> {
    chamber_graph_with(lattice, h0, radius, ChamberGraphOptions::default())
}

pub fn chamber_graph_with(
    lattice: &Lattice,
    h0: &LatVec,
    radius: f64,
    options: ChamberGraphOptions,
) -> Result<ChamberGraph> {
    if radius.is_nan() || radius <= 0.0 || !radius.is_finite() {
        return Err(Error::InvalidArgument(format!("radius {radius} must be positive")));
    }
    check_interior_base(lattice, h0)?;
    let base = h0.primitive_part()?;
    let max_square = lattice
        .wall_squares()
        .iter()
        .map(|s| s.abs())
        .max()
        .expect("wall squares are nonempty");

    let mut nodes: Vec<Chamber> = Vec::new();
    let mut index: HashMap<Vec<LatVec>, usize> = HashMap::new();
    let mut seen: HashSet<LatVec> = HashSet::from([base.clone()]);
    let mut queue = VecDeque::from([base.clone()]);

    let mut node_of: HashMap<LatVec, usize> = HashMap::new();
    while let Some(r) = queue.pop_front() {
        let chamber = chamber_unchecked(lattice, &r, &base)?;
        let i = match index.get(&chamber.key()) {
            Some(&i) => {
                if scan_cmp(&r, &nodes[i].representative).is_lt() {
                    nodes[i].representative = r.clone();
                }
                i
            }
            None => {
                index.insert(chamber.key(), nodes.len());
                nodes.push(chamber);
                nodes.len() - 1
            }
        };
        node_of.insert(r.clone(), i);

        let reach = (radius + hyperbolic_distance(lattice, &base, &r)?) / 2.0;
        let qr = lattice.quad_unchecked(&r);
        let sinh_reach = reach.sinh();
        let smax = sinh_reach * (qr.to_f64().unwrap_or(f64::INFINITY) * max_square.to_f64().unwrap_or(f64::INFINITY)).sqrt();
        let smax = BigInt::from_f64(smax.floor()).ok_or_else(|| {
            Error::InvalidArgument(format!("radius {radius} is too large to explore"))
        })?;
        for wall in walls_with_pairing(lattice, &r, &smax)? {
            let v = wall.vector();
            // distance from r to v^⊥: sinh δ = pair(v,r) / sqrt(q(r) |q(v)|)
            let s = lattice.pair_unchecked(v, &r).to_f64().unwrap_or(f64::INFINITY);
            let qv = lattice.quad_unchecked(v).abs().to_f64().unwrap_or(f64::INFINITY);
            let qrf = qr.to_f64().unwrap_or(f64::INFINITY);
            if s * s > sinh_reach * sinh_reach * qrf * qv {
                continue;
            }
            let mut image = lattice.reflect_scaled(v, &r).primitive_part()?;
            if hyperbolic_distance(lattice, &base, &image)? > radius {
                continue;
            }
            if !is_interior(lattice, &image)? {
                image = nudge(lattice, v, &image, &base, options.nudge_attempts)?;
                if hyperbolic_distance(lattice, &base, &image)? > radius {
                    continue;
                }
            }
            if seen.insert(image.clone()) {
                if seen.len() > options.max_representatives {
                    return Err(Error::ExplorationLimit {
                        limit: options.max_representatives,
                    });
                }
                queue.push_back(image);
            }
        }
    }

    let lines: Vec<Vec<LatVec>> = nodes.iter().map(Chamber::lines).collect();
    let mut edges = Vec::new();
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            if let Some(w) = single_difference(&lines[i], &lines[j]) {
                edges.push(ChamberEdge { a: i, b: j, wall: w });
            }
        }
    }

    // σ_w carries a chamber across its facet on w to the neighbour on the
    // other side, so an integral edge wall joins its two ends. Images of
    // representatives that were themselves explored add further relations.
    let mut generators: Vec<LatVec> = edges.iter().map(|e| e.wall.clone()).collect();
    generators.sort_by(scan_cmp);
    generators.dedup();
    generators.retain(|g| lattice.reflection_is_integral(g));
    let mut parent: Vec<usize> = (0..nodes.len()).collect();
    for e in &edges {
        if generators.binary_search_by(|g| scan_cmp(g, &e.wall)).is_ok() {
            union(&mut parent, e.a, e.b);
        }
    }
    for (r, &i) in &node_of {
        for g in &generators {
            let image = lattice.reflect(g, r)?.primitive_part()?;
            if let Some(&j) = node_of.get(&image) {
                union(&mut parent, i, j);
            }
        }
    }
    let mut orbit_ids: HashMap<usize, usize> = HashMap::new();
    let nodes: Vec<ChamberNode> = nodes
        .into_iter()
        .enumerate()
        .map(|(i, chamber)| {
            let root = find(&mut parent, i);
            let next = orbit_ids.len();
            let orbit = *orbit_ids.entry(root).or_insert(next);
            ChamberNode { chamber, orbit }
        })
        .collect();

    Ok(ChamberGraph {
        base,
        radius,
        nodes,
        edges,
        orbit_count: orbit_ids.len(),
    })
}

/// Moves a reflected representative that landed on a wall into an open
/// chamber on the same side of `v`: tries `2^k image + σ_v(h0)`.
fn nudge(lattice: &Lattice, v: &LatVec, image: &LatVec, h0: &LatVec, attempts: usize) -> Result<LatVec> {
    let side = lattice.pair_unchecked(image, v).signum();
    let offset = lattice.reflect_scaled(v, h0);
    let mut scale = BigInt::one();
    for _ in 0..attempts {
        scale *= 2;
        let cand = image.scaled(&scale).add_scaled(&BigInt::one(), &offset);
        if lattice.is_positive(&cand)
            && lattice.pair_unchecked(&cand, v).signum() == side
            && is_interior(lattice, &cand)?
        {
            return cand.primitive_part();
        }
    }
    Err(Error::NudgeFailed { attempts })
}

fn single_difference(a: &[LatVec], b: &[LatVec]) -> Option<LatVec> {
    let only_a: Vec<&LatVec> = a.iter().filter(|x| !b.contains(x)).collect();
    let only_b: Vec<&LatVec> = b.iter().filter(|x| !a.contains(x)).collect();
    match (only_a.as_slice(), only_b.as_slice()) {
        ([w], []) | ([], [w]) => Some((*w).clone()),
        _ => None,
    }
}

pub(crate) fn find(parent: &mut [usize], i: usize) -> usize {
    let mut root = i;
    while parent[root] != root {
        root = parent[root];
    }
    let mut cur = i;
    while parent[cur] != root {
        let next = parent[cur];
        parent[cur] = root;
        cur = next;
    }
    root
}

/// Union keeping the smaller index as root.
pub(crate) fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        parent[hi] = lo;
    }
}
