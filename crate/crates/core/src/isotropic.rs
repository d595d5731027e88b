//! Integral isotropic vectors by exhaustive shell scan.
//!
//! Meyer's theorem guarantees a nonzero integral isotropic vector whenever the
//! rank is at least 5, but gives no bound on its size, so absence within a
//! bound proves nothing in that range. Below rank 5 isotropic vectors may not
//! exist at all (e.g. `diag(1, -3)`).

use num_traits::{Signed, Zero};

use crate::lattice::{LatVec, Lattice, ShellScan};

/// First primitive `v` in scan order with `q(v) = 0` and
/// `pair(v, orientation) > 0`, or `None` if there is none within `bound`.
pub fn find_isotropic(lattice: &Lattice, bound: i64) -> Option<LatVec> {
    let dual = lattice.dual(lattice.orientation()).to_i64s();
    ShellScan::new(lattice.rank(), bound).find_map(|t| {
        let positive = match &dual {
            Some(d) => Lattice::apply_small(d, &t).map(|p| p > 0),
            None => None,
        };
        if positive == Some(false) || !lattice.quad_small(&t).is_zero() {
            return None;
        }
        let v = LatVec::from(t);
        (v.is_primitive() && lattice.pair_unchecked(&v, lattice.orientation()).is_positive())
            .then_some(v)
    })
}

/// One sign-normalized primitive representative per isotropic line meeting
/// the box of sup-norm `bound`, in scan order.
pub fn enumerate_isotropic_lines(lattice: &Lattice, bound: i64) -> Vec<LatVec> {
    ShellScan::new(lattice.rank(), bound)
        .filter(|t| t.iter().find(|c| **c != 0).is_some_and(|c| *c > 0))
        .filter(|t| lattice.quad_small(t).is_zero())
        .map(LatVec::from)
        .filter(LatVec::is_primitive)
        .collect()
}
