//! Cusps as orbits of primitive isotropic lines.
//!
//! The group used here is generated by the integral reflections in wall
//! vectors of a bounded box, which is in general smaller than the group the
//! lines should be divided by. Orbits found this way can only merge as the
//! bounds grow, so every count reported is an upper bound.

use std::collections::{HashMap, VecDeque};

use num_traits::Zero;

use crate::cone::{find, nef_walk, union, WalkOrder, WalkTrace};
use crate::enumeration::vectors_of_square;
use crate::error::{Error, Result};
use crate::isotropic::enumerate_isotropic_lines;
use crate::lattice::{scan_cmp, LatVec, Lattice};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CuspBounds {
    pub iso_bound: i64,
    pub wall_bound: i64,
    pub bfs_depth: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuspOrbit {
    /// Scan-order smallest member.
    pub representative: LatVec,
    /// Members in scan order, including images outside the search box.
    pub members: Vec<LatVec>,
    /// `words[i]` maps the representative to `members[i]`: apply the
    /// reflections left to right, then sign-normalize.
    pub words: Vec<Vec<LatVec>>,
}

impl CuspOrbit {
    /// Replays every word and checks it lands on its member.
    pub fn verify(&self, lattice: &Lattice) -> Result<()> {
        for (member, word) in self.members.iter().zip(&self.words) {
            let image = replay(lattice, &self.representative, word)?;
            if &image != member {
                return Err(Error::InvariantBreach(format!(
                    "word for {member} replays to {image}"
                )));
            }
            if !lattice.quad(member)?.is_zero() || !member.is_primitive() || !member.is_sign_normalized() {
                return Err(Error::InvariantBreach(format!("{member} is not a normalized isotropic line")));
            }
        }
        Ok(())
    }
}

pub fn replay(lattice: &Lattice, start: &LatVec, word: &[LatVec]) -> Result<LatVec> {
    let mut cur = start.clone();
    for g in word {
        cur = lattice.reflect(g, &cur)?;
    }
    cur.primitivize()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuspReport {
    pub lattice: String,
    pub bounds: CuspBounds,
    pub generators: Vec<LatVec>,
    pub orbits: Vec<CuspOrbit>,
    /// Always true: the reflection group stands in for the full group.
    pub upper_bound_only: bool,
}

/// Reflection generators: sign-normalized wall vectors of the box whose
/// reflection is integral on the whole lattice.
pub fn reflection_generators(lattice: &Lattice, wall_bound: i64) -> Result<Vec<LatVec>> {
    let mut gens = Vec::new();
    for d in lattice.wall_squares() {
        for v in vectors_of_square(lattice, d, wall_bound)? {
            if v.is_sign_normalized() && lattice.reflection_is_integral(&v) {
                gens.push(v);
            }
        }
    }
    gens.sort_by(scan_cmp);
    gens.dedup();
    Ok(gens)
}

/// Partitions the isotropic lines of the `iso_bound` box by breadth-first
/// closure under the reflection generators, `bfs_depth` applications deep.
pub fn cusp_orbits(lattice: &Lattice, bounds: CuspBounds) -> Result<CuspReport> {
    if bounds.iso_bound < 1 || bounds.wall_bound < 1 || bounds.bfs_depth < 1 {
        return Err(Error::InvalidArgument("cusp bounds must be >= 1".into()));
    }
    crate::enumeration::check_box(lattice.rank(), bounds.iso_bound)?;
    let generators = reflection_generators(lattice, bounds.wall_bound)?;
    let lines = enumerate_isotropic_lines(lattice, bounds.iso_bound);

    let mut members: Vec<LatVec> = Vec::new();
    let mut index: HashMap<LatVec, usize> = HashMap::new();
    // adjacency[u] = (generator index, neighbour)
    let mut adjacency: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut queue = VecDeque::new();
    for l in lines {
        index.insert(l.clone(), members.len());
        members.push(l);
        adjacency.push(Vec::new());
        queue.push_back((members.len() - 1, 0usize));
    }
    while let Some((u, depth)) = queue.pop_front() {
        if depth >= bounds.bfs_depth {
            continue;
        }
        for (gi, g) in generators.iter().enumerate() {
            let image = lattice.reflect(g, &members[u])?.primitivize()?;
            let w = match index.get(&image) {
                Some(&w) => w,
                None => {
                    let w = members.len();
                    index.insert(image.clone(), w);
                    members.push(image);
                    adjacency.push(Vec::new());
                    queue.push_back((w, depth + 1));
                    w
                }
            };
            if w != u {
                adjacency[u].push((gi, w));
                adjacency[w].push((gi, u));
            }
        }
    }

    let mut parent: Vec<usize> = (0..members.len()).collect();
    for (u, adj) in adjacency.iter().enumerate() {
        for &(_, w) in adj {
            union(&mut parent, u, w);
        }
    }
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for u in 0..members.len() {
        let root = find(&mut parent, u);
        groups.entry(root).or_default().push(u);
    }

    let mut orbits = Vec::new();
    for group in groups.into_values() {
        let rep = *group
            .iter()
            .min_by(|&&a, &&b| scan_cmp(&members[a], &members[b]))
            .expect("groups are nonempty");
        // words by breadth-first search from the representative
        let mut word_of: HashMap<usize, Vec<usize>> = HashMap::from([(rep, Vec::new())]);
        let mut q = VecDeque::from([rep]);
        while let Some(u) = q.pop_front() {
            let base = word_of[&u].clone();
            for &(gi, w) in &adjacency[u] {
                if let std::collections::hash_map::Entry::Vacant(e) = word_of.entry(w) {
                    let mut word = base.clone();
                    word.push(gi);
                    e.insert(word);
                    q.push_back(w);
                }
            }
        }
        let mut ordered = group.clone();
        ordered.sort_by(|&a, &b| scan_cmp(&members[a], &members[b]));
        orbits.push(CuspOrbit {
            representative: members[rep].clone(),
            members: ordered.iter().map(|&u| members[u].clone()).collect(),
            words: ordered
                .iter()
                .map(|u| word_of[u].iter().map(|&gi| generators[gi].clone()).collect())
                .collect(),
        });
    }
    orbits.sort_by(|a, b| scan_cmp(&a.representative, &b.representative));

    Ok(CuspReport {
        lattice: lattice.name().to_string(),
        bounds,
        generators,
        orbits,
        upper_bound_only: true,
    })
}

/// Primitive part of `v` walked to a class that is nef against `h`.
pub fn canonical_cusp(lattice: &Lattice, v: &LatVec, h: &LatVec) -> Result<(LatVec, WalkTrace)> {
    lattice.check_dim(v)?;
    if v.is_zero() || !lattice.quad_unchecked(v).is_zero() || !lattice.in_closed_cone(v) {
        return Err(Error::NotIsotropic(v.clone()));
    }
    let start = v.primitive_part()?;
    let trace = nef_walk(lattice, &start, h, WalkOrder::Greedy)?;
    Ok((trace.final_class.clone(), trace))
}
