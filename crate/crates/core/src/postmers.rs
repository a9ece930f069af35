//! The postmer table `P_i(β)`.
//!
//! A postmer is a word `z` whose every m-window is at least `w` once both are
//! XORed with the key (the `≥` encodes leftmost tie-breaking). `P_i(β)` counts
//! postmers of size `β` whose longest common prefix with `w` is `i`.

use crate::count::Count;
use crate::error::Result;
use crate::precompute::PrecomputeContext;

#[derive(Clone, Debug)]
pub struct PostmerTable<C> {
    m: usize,
    beta_target: usize,
    /// Row-major in `β`: `cells[β * (m + 1) + i]`.
    cells: Vec<C>,
    marginals: Vec<C>,
    ops: u64,
}

impl<C: Count> PostmerTable<C> {
    pub fn compute(ctx: &PrecomputeContext, beta_target: usize) -> Result<Self> {
        let m = ctx.m();
        let width = m + 1;
        let sigma_size = ctx.alphabet().size();
        let mut cells = vec![C::zero(); (beta_target + 1) * width];
        let mut marginals: Vec<C> = Vec::with_capacity(beta_target + 1);
        let mut ops = 0u64;

        cells[0] = C::one();
        marginals.push(C::one());

        for beta in 1..=beta_target {
            let base = beta * width;
            if beta < m {
                // No m-window fits: only the prefix bookkeeping matters.
                cells[base] = marginals[beta - 1].mul_small(sigma_size - 1)?;
                for i in 1..beta {
                    let (eq0, ne0) = ctx.d_alphabets(i);
                    let mut acc = marginals[beta - i - 1].mul_small(eq0.len())?;
                    ops += 1;
                    for a in ne0.iter() {
                        let t = ctx.t(i, a);
                        let shorter = beta + 1 - t;
                        let row = shorter * width;
                        for i2 in (i + 2 - t)..=shorter.min(m) {
                            acc.add_assign_checked(&cells[row + i2])?;
                            ops += 1;
                        }
                    }
                    cells[base + i] = acc;
                }
                cells[base + beta] = C::one();
            } else if beta == m {
                cells[base] = marginals[m - 1].mul_small(ctx.sigma(1).len())?;
                let mut free = C::one();
                for i in (1..m).rev() {
                    // free = |Σ|^{m-(i+1)}
                    cells[base + i] = free.mul_small(ctx.sigma(i + 1).len())?;
                    free = free.mul_small(sigma_size)?;
                    ops += 1;
                }
                cells[base + m] = C::one();
            } else {
                cells[base] = marginals[beta - 1].mul_small(ctx.sigma(1).len())?;
                for i in 1..=m {
                    if let Some(j) = ctx.first_less(i) {
                        // The window starting at j is below w as soon as it fits.
                        if beta + 1 >= m + j {
                            ops += 1;
                            continue;
                        }
                    }
                    let (eq0, ne0) = ctx.sigma_p_counted(i, beta, &mut ops);
                    let mut acc = marginals[beta - i - 1].mul_small(eq0.len())?;
                    ops += 1;
                    for a in ne0.iter() {
                        let t = ctx.t_tilde(i, a, beta);
                        let row = (beta + 1 - t) * width;
                        for i2 in (i + 2 - t)..=m {
                            acc.add_assign_checked(&cells[row + i2])?;
                            ops += 1;
                        }
                    }
                    cells[base + i] = acc;
                }
            }

            let mut total = C::zero();
            for value in &cells[base..base + width] {
                total.add_assign_checked(value)?;
            }
            ops += width as u64;
            marginals.push(total);
        }

        Ok(PostmerTable {
            m,
            beta_target,
            cells,
            marginals,
            ops,
        })
    }

    pub fn beta_target(&self) -> usize {
        self.beta_target
    }

    /// `P_i(β)` for `0 <= i <= m`.
    pub fn value(&self, i: usize, beta: usize) -> &C {
        &self.cells[beta * (self.m + 1) + i]
    }

    /// `P(β)`.
    pub fn marginal(&self, beta: usize) -> &C {
        &self.marginals[beta]
    }

    pub fn ops(&self) -> u64 {
        self.ops
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{Alphabet, Word};
    use proptest::prelude::*;
    use std::cmp::Ordering;

    fn ctx(w: &str, g: &str) -> PrecomputeContext {
        PrecomputeContext::new(&Word::dna(w).unwrap(), &Word::dna(g).unwrap()).unwrap()
    }

    /// Postmers of size `beta` by exhaustive enumeration, split by common-prefix length.
    fn brute_force(a: &[u8], c: &[u8], beta: usize) -> Vec<u128> {
        let m = a.len();
        let target: Vec<u8> = a.iter().zip(c).map(|(x, k)| x ^ k).collect();
        let mut by_prefix = vec![0u128; m + 1];
        for code in 0..4u64.pow(beta as u32) {
            let z: Vec<u8> = (0..beta).rev().map(|p| (code >> (2 * p) & 3) as u8).collect();
            let ok = z.windows(m).all(|window| {
                let xored: Vec<u8> = window.iter().zip(c).map(|(x, k)| x ^ k).collect();
                xored.cmp(&target) != Ordering::Less
            });
            if ok {
                let lcp = z.iter().zip(a).take_while(|(x, y)| x == y).count();
                by_prefix[lcp] += 1;
            }
        }
        by_prefix
    }

    #[test]
    fn short_postmers_are_unconstrained() {
        for (w, g) in [("ACGTA", "TTGCA"), ("AAAA", "AAAA"), ("GCGC", "CATG")] {
            let c = ctx(w, g);
            let t: PostmerTable<u128> = PostmerTable::compute(&c, 10).unwrap();
            assert_eq!(*t.marginal(0), 1);
            for beta in 1..c.m() {
                assert_eq!(*t.marginal(beta), 4u128.pow(beta as u32));
                assert_eq!(*t.value(beta, beta), 1);
            }
        }
    }

    #[test]
    fn single_letter_closed_forms() {
        let t: PostmerTable<u128> = PostmerTable::compute(&ctx("A", "A"), 12).unwrap();
        for beta in 0..12u32 {
            assert_eq!(*t.value(1, beta as usize + 1), 4u128.pow(beta));
        }
        let t: PostmerTable<u128> = PostmerTable::compute(&ctx("T", "A"), 12).unwrap();
        for beta in 1..=12 {
            assert_eq!(*t.value(1, beta), 1);
            assert_eq!(*t.value(0, beta), 0);
        }
    }

    #[test]
    fn beta_equal_m_matches_rank() {
        for (w, g) in [("ACGT", "AAAA"), ("GATC", "TGCA"), ("TTT", "CAG")] {
            let c = ctx(w, g);
            let m = c.m();
            let t: PostmerTable<u128> = PostmerTable::compute(&c, m).unwrap();
            let closed: u128 = (0..m)
                .map(|i| c.sigma(i + 1).len() as u128 * 4u128.pow((m - 1 - i) as u32))
                .sum::<u128>()
                + 1;
            let x = Word::dna(w).unwrap().xor(&Word::dna(g).unwrap()).unwrap();
            let rank_1_based = x.rank().unwrap() as u128 + 1;
            assert_eq!(*t.marginal(m), closed);
            assert_eq!(closed, 4u128.pow(m as u32) - rank_1_based + 1);
        }
    }

    #[test]
    fn matches_enumeration_for_all_small_pairs() {
        for m in 1..=3usize {
            for wc in 0..4u64.pow(m as u32) {
                for gc in 0..4u64.pow(m as u32) {
                    let w = Word::from_rank(Alphabet::DNA, wc, m);
                    let g = Word::from_rank(Alphabet::DNA, gc, m);
                    let c = PrecomputeContext::new(&w, &g).unwrap();
                    let t: PostmerTable<u128> = PostmerTable::compute(&c, 7).unwrap();
                    for beta in 0..=7 {
                        let expected = brute_force(w.letters(), g.letters(), beta);
                        for i in 0..=m {
                            assert_eq!(*t.value(i, beta), expected[i], "P_{i}({beta}) for w={w} γ={g}");
                        }
                        assert_eq!(*t.marginal(beta), expected.iter().sum::<u128>());
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn oracle_equivalence_random(a in prop::collection::vec(0u8..4, 1..=4), seed in any::<u64>()) {
            let c: Vec<u8> = (0..a.len()).map(|p| (seed >> (2 * p) & 3) as u8).collect();
            let ctx = PrecomputeContext::from_letters(Alphabet::DNA, &a, &c);
            let t: PostmerTable<u128> = PostmerTable::compute(&ctx, 8).unwrap();
            for beta in 0..=8 {
                let expected = brute_force(&a, &c, beta);
                for i in 0..=a.len() {
                    prop_assert_eq!(*t.value(i, beta), expected[i]);
                }
            }
        }

        #[test]
        fn small_beta_closed_form(a in prop::collection::vec(0u8..4, 2..=14), seed in any::<u64>()) {
            let c: Vec<u8> = (0..a.len()).map(|p| (seed >> (2 * p) & 3) as u8).collect();
            let ctx = PrecomputeContext::from_letters(Alphabet::DNA, &a, &c);
            let t: PostmerTable<u128> = PostmerTable::compute(&ctx, a.len()).unwrap();
            for beta in 1..a.len() {
                prop_assert_eq!(*t.marginal(beta), 4u128.pow(beta as u32));
                for i in 0..beta {
                    // Exact common prefix i: a free letter != a_{i+1}, then anything.
                    prop_assert_eq!(*t.value(i, beta), 3 * 4u128.pow((beta - i - 1) as u32));
                }
            }
        }
    }
}
