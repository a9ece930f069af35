//! The antemer table `A_i(α)`.
//!
//! An antemer is a word `y` such that every m-window of `y·w` but the last one
//! is strictly greater than `w` once both are XORed with the key. `A_i(α)`
//! counts antemers of size `α` whose longest common prefix with `w` is `i`.

use crate::count::Count;
use crate::error::Result;
use crate::precompute::{PrecomputeContext, Sign};

#[derive(Clone, Debug)]
pub struct AntemerTable<C> {
    i_max: usize,
    alpha_target: usize,
    /// Row-major in `α`: `cells[α * (i_max + 1) + i]`.
    cells: Vec<C>,
    marginals: Vec<C>,
    ops: u64,
}

impl<C: Count> AntemerTable<C> {
    /// Fill the table for `0 <= α <= alpha_target`, one column of `α` at a time.
    pub fn compute(ctx: &PrecomputeContext, alpha_target: usize) -> Result<Self> {
        let i_max = ctx.i_max();
        let width = i_max + 1;
        let mut cells = vec![C::zero(); (alpha_target + 1) * width];
        let mut marginals = Vec::with_capacity(alpha_target + 1);
        let mut ops = 0u64;

        cells[0] = C::one();
        marginals.push(C::one());

        let sigma_1 = ctx.sigma(1).len();
        for alpha in 1..=alpha_target {
            let base = alpha * width;
            cells[base] = marginals[alpha - 1].mul_small(sigma_1)?;
            ops += 1;

            for i in 1..=alpha.min(i_max) {
                let value = if i == alpha {
                    ops += i as u64;
                    if full_prefix_is_antemer(ctx, i) {
                        C::one()
                    } else {
                        C::zero()
                    }
                } else {
                    let (eq0, ne0) = ctx.antemer_alphabets(i);
                    let mut acc = marginals[alpha - i - 1].mul_small(eq0.len())?;
                    ops += 1;
                    for a in ne0.iter() {
                        let t = ctx.t(i, a);
                        let row = (alpha + 1 - t) * width;
                        for i2 in (i + 2 - t)..=i_max {
                            acc.add_assign_checked(&cells[row + i2])?;
                            ops += 1;
                        }
                    }
                    acc
                };
                cells[base + i] = value;
            }

            let mut total = C::zero();
            for value in &cells[base..base + width] {
                total.add_assign_checked(value)?;
            }
            ops += width as u64;
            marginals.push(total);
        }

        Ok(AntemerTable {
            i_max,
            alpha_target,
            cells,
            marginals,
            ops,
        })
    }

    pub fn alpha_target(&self) -> usize {
        self.alpha_target
    }

    pub fn i_max(&self) -> usize {
        self.i_max
    }

    /// `A_i(α)`; rows above `i_max` are identically zero.
    pub fn value(&self, i: usize, alpha: usize) -> C {
        if i > self.i_max {
            C::zero()
        } else {
            self.cells[alpha * (self.i_max + 1) + i].clone()
        }
    }

    /// `A(α)`.
    pub fn marginal(&self, alpha: usize) -> &C {
        &self.marginals[alpha]
    }

    pub fn ops(&self) -> u64 {
        self.ops
    }
}

/// `A_i(i) = ∏_{j=1..i} (R^>_{i,j} + R^=_{i,j} · S_{i-j})`, i.e. whether `a_1⋯a_i` itself is an antemer.
fn full_prefix_is_antemer(ctx: &PrecomputeContext, i: usize) -> bool {
    (1..=i).all(|j| match ctx.r().get(i, j) {
        Sign::Greater => true,
        Sign::Equal => ctx.s(i - j),
        Sign::Less => false,
    })
}
