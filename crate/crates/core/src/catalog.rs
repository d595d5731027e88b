//! Built-in lattices. Every entry has wall squares {-2}.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::lattice::{LatVec, Lattice};

pub const NAMES: [&str; 6] = [
    "U",
    "U+<-2>",
    "<2>+<-2>",
    "diag(1,-1,-1,-1,-1)",
    "diag(1,-3)",
    "K3",
];

/// Bourbaki labelling: 1-3-4-5-6-7-8 with 2 attached to 4.
const E8_EDGES: [(usize, usize); 7] = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)];

pub fn names() -> &'static [&'static str] {
    &NAMES
}

pub fn get_lattice(name: &str) -> Result<Lattice> {
    let m2 = [BigInt::from(-2)];
    match name {
        "U" => Lattice::new(name, block_sum(&[hyperbolic_plane()]), m2, None),
        "U+<-2>" => Lattice::new(name, block_sum(&[hyperbolic_plane(), vec![vec![-2]]]), m2, None),
        "<2>+<-2>" => Lattice::new(name, block_sum(&[vec![vec![2]], vec![vec![-2]]]), m2, None),
        "diag(1,-1,-1,-1,-1)" => Lattice::diagonal(name, &[1, -1, -1, -1, -1]),
        "diag(1,-3)" => Lattice::diagonal(name, &[1, -3]),
        "K3" => {
            let u = hyperbolic_plane();
            // U^3 + E8(-1)^2 has signature (3,19); the two extra hyperbolic
            // planes are replaced by <-2>^4 to stay hyperbolic
            let e8 = e8_negative();
            let m = vec![vec![-2]];
            let gram = block_sum(&[u, e8.clone(), e8, m.clone(), m.clone(), m.clone(), m]);
            // e1 + f1; a scan over rank 22 would be needlessly slow
            let mut orientation = vec![0i64; 22];
            orientation[0] = 1;
            orientation[1] = 1;
            Lattice::new(name, gram, m2, Some(LatVec::from(orientation)))
        }
        _ => Err(Error::UnknownLattice {
            name: name.to_string(),
            available: NAMES.iter().map(|s| s.to_string()).collect(),
        }),
    }
}

fn hyperbolic_plane() -> Vec<Vec<i64>> {
    vec![vec![0, 1], vec![1, 0]]
}

/// Negative of the E8 Cartan matrix.
fn e8_negative() -> Vec<Vec<i64>> {
    let mut m = vec![vec![0i64; 8]; 8];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = -2;
    }
    for &(a, b) in &E8_EDGES {
        m[a][b] = 1;
        m[b][a] = 1;
    }
    m
}

fn block_sum(blocks: &[Vec<Vec<i64>>]) -> Vec<Vec<BigInt>> {
    let n: usize = blocks.iter().map(Vec::len).sum();
    let mut g = vec![vec![BigInt::from(0); n]; n];
    let mut off = 0;
    for b in blocks {
        for (i, row) in b.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                g[off + i][off + j] = BigInt::from(c);
            }
        }
        off += b.len();
    }
    g
}
