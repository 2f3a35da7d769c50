//! Standard fans of small toric varieties.
use crate::fan::Fan;
use crate::lattice::LatticeVector;

pub fn lv(c: &[i64]) -> LatticeVector {
    LatticeVector::from_i64(c)
}

pub fn fan(rank: usize, rays: &[&[i64]], cones: &[&[usize]]) -> Fan {
    Fan::new(rank, rays.iter().map(|r| lv(r)).collect(), cones.iter().map(|c| c.to_vec()).collect()).unwrap()
}

pub fn p1() -> Fan {
    fan(1, &[&[1], &[-1]], &[&[0], &[1]])
}

pub fn p2() -> Fan {
    fan(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[2, 0]])
}

pub fn p1xp1() -> Fan {
    fan(2, &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]], &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]])
}

pub fn hirzebruch(m: i64) -> Fan {
    fan(2, &[&[1, 0], &[0, 1], &[-1, m], &[0, -1]], &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]])
}

pub fn p112() -> Fan {
    fan(2, &[&[1, 0], &[0, 1], &[-1, -2]], &[&[0, 1], &[1, 2], &[2, 0]])
}

/// Smooth threefold P¹ × P(O ⊕ O(1)), rays in the order used by the flag tests.
pub fn p1xf1() -> Fan {
    fan(
        3,
        &[&[0, 1, 0], &[1, 0, 0], &[0, 0, -1], &[0, 0, 1], &[0, -1, 1], &[-1, 0, 0]],
        &[
            &[0, 1, 2],
            &[0, 1, 3],
            &[1, 2, 4],
            &[1, 3, 4],
            &[0, 2, 5],
            &[0, 3, 5],
            &[2, 4, 5],
            &[3, 4, 5],
        ],
    )
}
