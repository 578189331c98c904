//! Coordinate influences and vertex boundaries of truth tables.

use crate::bfcore::BooleanFunction;
use crate::rational::{prob, Rational};
use num_traits::Zero;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfluenceProfile {
    n: usize,
    /// Bichromatic edges along each coordinate.
    edges: Vec<u64>,
}

impl InfluenceProfile {
    pub fn edge_counts(&self) -> &[u64] {
        &self.edges
    }

    /// `I_k = edges_k / 2^{n-1}`.
    pub fn influence(&self, k: usize) -> Rational {
        prob(2 * self.edges[k], self.n)
    }

    pub fn influences(&self) -> Vec<Rational> {
        (0..self.n).map(|k| self.influence(k)).collect()
    }

    pub fn total(&self) -> Rational {
        prob(2 * self.edges.iter().sum::<u64>(), self.n)
    }

    pub fn total_edges(&self) -> u64 {
        self.edges.iter().sum()
    }

    /// `(argmax, I_max)`; ties go to the lowest index.
    pub fn max(&self) -> (usize, Rational) {
        let mut best = 0;
        for k in 1..self.n {
            if self.edges[k] > self.edges[best] {
                best = k;
            }
        }
        (best, self.influence(best))
    }
}

/// Exact influences from the table XORed with its coordinate-shifted copy.
pub fn influences(f: &BooleanFunction) -> InfluenceProfile {
    let edges = (0..f.n())
        .map(|i| {
            let mut c = 0u64;
            f.for_each_edge_word(i, |lo, hi| c += (lo ^ hi).count_ones() as u64);
            c
        })
        .collect();
    InfluenceProfile { n: f.n(), edges }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryMeasures {
    pub vb0: Rational,
    pub vb1: Rational,
}

/// Per-word mask of points having at least one neighbour with a different value.
fn boundary_counts(f: &BooleanFunction) -> (u64, u64) {
    let valid = if f.n() >= 6 { u64::MAX } else { (1u64 << (1 << f.n())) - 1 };
    let (mut c0, mut c1) = (0u64, 0u64);
    for (wi, &w) in f.words().iter().enumerate() {
        let mut differs = 0u64;
        for i in 0..f.n() {
            differs |= w ^ f.partner_word(wi, i);
            if differs & valid == valid {
                break;
            }
        }
        differs &= valid;
        c1 += (w & differs).count_ones() as u64;
        c0 += (!w & differs).count_ones() as u64;
    }
    (c0, c1)
}

/// Measure of `{x : f(x) = λ, ∃i f(x ⊕ e_i) ≠ λ}`.
pub fn vertex_boundary(f: &BooleanFunction, lambda: bool) -> Rational {
    let (c0, c1) = boundary_counts(f);
    prob(if lambda { c1 } else { c0 }, f.n())
}

pub fn boundary_measures(f: &BooleanFunction) -> BoundaryMeasures {
    let (c0, c1) = boundary_counts(f);
    BoundaryMeasures { vb0: prob(c0, f.n()), vb1: prob(c1, f.n()) }
}

/// `vb1 / I_max`, or `None` when the maximal influence vanishes.
pub fn boundary_to_influence(f: &BooleanFunction) -> Option<Rational> {
    let (_, imax) = influences(f).max();
    if imax.is_zero() {
        None
    } else {
        Some(vertex_boundary(f, true) / imax)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bfcore::{dictator, majority, subcube, BooleanFunction};
    use crate::rational::{int, rat};

    fn brute_influence(f: &BooleanFunction, k: usize) -> Rational {
        let c = (0..f.size()).filter(|&m| f.get(m) != f.get(m ^ (1 << k))).count();
        prob(c as u64, f.n())
    }

    fn brute_boundary(f: &BooleanFunction, lambda: bool) -> Rational {
        let c = (0..f.size())
            .filter(|&m| f.get(m) == lambda && (0..f.n()).any(|i| f.get(m ^ (1 << i)) != lambda))
            .count();
        prob(c as u64, f.n())
    }

    #[test]
    fn influence_examples() {
        assert_eq!(influences(&dictator(3).unwrap()).influences(), vec![int(1), int(0), int(0)]);
        assert_eq!(influences(&majority(3).unwrap()).influences(), vec![rat(1, 2); 3]);
        // flipping x1 changes 1{x1 = x2 = 1} exactly when x2 = 1
        assert_eq!(
            influences(&subcube(2, 4).unwrap()).influences(),
            vec![rat(1, 2), rat(1, 2), int(0), int(0)]
        );
    }

    #[test]
    fn argmax_lowest_index() {
        let p = influences(&majority(5).unwrap());
        assert_eq!(p.max().0, 0);
        let g = BooleanFunction::from_fn(3, |m| m & 0b100 != 0).unwrap();
        assert_eq!(influences(&g).max(), (2, int(1)));
    }

    #[test]
    fn boundary_examples() {
        let s = subcube(3, 5).unwrap();
        assert_eq!(boundary_measures(&s), BoundaryMeasures { vb0: rat(3, 8), vb1: rat(1, 8) });
        let d = dictator(4).unwrap();
        assert_eq!(vertex_boundary(&d, true), rat(1, 2));
        assert_eq!(vertex_boundary(&d, true), influences(&d).influence(0) / int(2));
        assert_eq!(vertex_boundary(&majority(3).unwrap(), true), rat(3, 8));
    }

    #[test]
    fn word_paths_match_brute_force() {
        for n in [1usize, 3, 6, 7, 9] {
            for seed in 0..4u64 {
                let f = BooleanFunction::from_fn(n, |m| {
                    (m as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(seed * 77).rotate_left(17) % 3 == 0
                })
                .unwrap();
                let p = influences(&f);
                for k in 0..n {
                    assert_eq!(p.influence(k), brute_influence(&f, k));
                }
                assert_eq!(vertex_boundary(&f, true), brute_boundary(&f, true));
                assert_eq!(vertex_boundary(&f, false), brute_boundary(&f, false));
            }
        }
    }
}
