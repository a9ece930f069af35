//! `π_k^γ(w)`: the number of k-mers whose vigemin is `w`.
//!
//! Every such k-mer splits as `y·w·z` with `y` an antemer and `w·z` a postmer
//! starting with `w`, so `π = Σ_{β=0}^{β_max} A(k-m-β) · P_m(β+m)`.

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::antemers::AntemerTable;
use crate::count::Count;
use crate::error::{Error, Result};
use crate::postmers::PostmerTable;
use crate::precompute::PrecomputeContext;
use crate::words::Word;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiResult {
    pub w: Word,
    pub gamma: Word,
    pub k: usize,
    pub count: BigUint,
}

/// Counts of elementary steps spent in one evaluation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpStats {
    pub preprocessing: u64,
    pub antemers: u64,
    pub postmers: u64,
    pub assembly: u64,
}

impl OpStats {
    pub fn total(&self) -> u64 {
        self.preprocessing + self.antemers + self.postmers + self.assembly
    }
}

/// The counting function for one `(w, γ)`; reusable across `k`.
#[derive(Clone)]
pub struct CountingFunction {
    ctx: PrecomputeContext,
}

impl CountingFunction {
    pub fn new(w: &Word, gamma: &Word) -> Result<Self> {
        Ok(CountingFunction {
            ctx: PrecomputeContext::new(w, gamma)?,
        })
    }

    pub fn context(&self) -> &PrecomputeContext {
        &self.ctx
    }

    fn check_k(&self, k: usize) -> Result<()> {
        if k < self.ctx.m() {
            return Err(Error::invalid(format!("k < m (k = {k}, m = {})", self.ctx.m())));
        }
        Ok(())
    }

    /// `π_k^γ(w)` in the count type `C`, with operation counts.
    pub fn evaluate<C: Count>(&self, k: usize) -> Result<(C, OpStats)> {
        self.check_k(k)?;
        evaluate_context(&self.ctx, k)
    }

    /// `π_k` as `u128`; fails with [`Error::Overflow`] rather than wrapping.
    pub fn count_u128(&self, k: usize) -> Result<u128> {
        self.evaluate::<u128>(k).map(|(count, _)| count)
    }

    /// `π_k` as an exact big integer, taking the `u128` path when `|Σ|^k` fits.
    pub fn count(&self, k: usize) -> Result<BigUint> {
        if self.ctx.alphabet().power(k).is_some() {
            Ok(BigUint::from(self.count_u128(k)?))
        } else {
            self.evaluate::<BigUint>(k).map(|(count, _)| count)
        }
    }

    /// `π_k` for several `k` from a single pair of tables sized for the largest.
    pub fn count_many(&self, ks: &[usize]) -> Result<Vec<BigUint>> {
        let Some(&k_max) = ks.iter().max() else {
            return Ok(Vec::new());
        };
        for &k in ks {
            self.check_k(k)?;
        }
        let m = self.ctx.m();
        let antemers = AntemerTable::<BigUint>::compute(&self.ctx, k_max - m)?;
        let postmers = PostmerTable::<BigUint>::compute(&self.ctx, m + self.ctx.beta_max(k_max))?;
        Ok(ks
            .iter()
            .map(|&k| {
                (0..=self.ctx.beta_max(k))
                    .map(|beta| antemers.marginal(k - m - beta) * postmers.value(m, beta + m))
                    .sum()
            })
            .collect())
    }
}

pub(crate) fn evaluate_context<C: Count>(ctx: &PrecomputeContext, k: usize) -> Result<(C, OpStats)> {
    let m = ctx.m();
    let beta_max = ctx.beta_max(k);
    let antemers = AntemerTable::<C>::compute(ctx, k - m)?;
    let postmers = PostmerTable::<C>::compute(ctx, m + beta_max)?;
    let mut total = C::zero();
    for beta in 0..=beta_max {
        let term = antemers
            .marginal(k - m - beta)
            .mul_checked(postmers.value(m, beta + m))?;
        total.add_assign_checked(&term)?;
    }
    let stats = OpStats {
        preprocessing: ctx.ops(),
        antemers: antemers.ops(),
        postmers: postmers.ops(),
        assembly: beta_max as u64 + 1,
    };
    Ok((total, stats))
}

/// Caller guarantees `k >= m`.
pub(crate) fn count_with_context<C: Count>(ctx: &PrecomputeContext, k: usize) -> Result<C> {
    evaluate_context(ctx, k).map(|(count, _)| count)
}

/// `π_k^γ(w)`.
pub fn pi(w: &Word, gamma: &Word, k: usize) -> Result<PiResult> {
    let count = CountingFunction::new(w, gamma)?.count(k)?;
    Ok(PiResult {
        w: w.clone(),
        gamma: gamma.clone(),
        k,
        count,
    })
}

/// Independent [`pi`] calls over `ws`, possibly in parallel; output order matches input.
pub fn pi_batch(ws: &[Word], gamma: &Word, k: usize) -> Result<Vec<PiResult>> {
    ws.par_iter()
        .enumerate()
        .map(|(index, w)| {
            pi(w, gamma, k).map_err(|e| Error::invalid(format!("entry {index} ({w}): {e}")))
        })
        .collect()
}
