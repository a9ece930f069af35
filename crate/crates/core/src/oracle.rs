//! Exhaustive reference counts: scan every k-mer and take its vigemin directly.
//!
//! Words are packed big-endian into integers (`b` bits per letter), so the
//! XOR-keyed comparison of two m-mers is a plain integer comparison of
//! `window ^ key`. Nothing here shares code with the dynamic program.

use rayon::prelude::*;

use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::words::Word;

/// Default cap on `|Σ|^k`: `4^12`.
pub const DEFAULT_BUDGET: u128 = 1 << 24;

const CHUNK: u64 = 1 << 14;

struct Scan {
    bits: u32,
    m: usize,
    k: usize,
    mask: u64,
    key: u64,
    space: u64,
}

impl Scan {
    fn new(gamma: &Word, k: usize, budget: u128) -> Result<Self> {
        let alphabet = gamma.alphabet();
        let m = gamma.len();
        if m == 0 || k < m {
            return Err(Error::invalid(format!("need 1 <= m <= k, got m = {m}, k = {k}")));
        }
        let space = match alphabet.power(k) {
            Some(space) if space <= budget && space <= u64::MAX as u128 => space,
            Some(space) => return Err(Error::BudgetExceeded { space, budget }),
            None => return Err(Error::BudgetExceeded { space: u128::MAX, budget }),
        };
        let bits = alphabet.bits() as u32;
        let key = gamma
            .letters()
            .iter()
            .fold(0u64, |acc, &l| (acc << bits) | l as u64);
        Ok(Scan {
            bits,
            m,
            k,
            mask: (1u64 << (bits as usize * m)) - 1,
            key,
            space: space as u64,
        })
    }

    /// Packed code of the vigemin of the k-mer `x`.
    fn vigemin_code(&self, x: u64) -> u64 {
        let mut best = u64::MAX;
        let mut best_window = 0;
        for p in 0..=self.k - self.m {
            let shift = (self.k - self.m - p) as u32 * self.bits;
            let window = (x >> shift) & self.mask;
            let keyed = window ^ self.key;
            if keyed < best {
                best = keyed;
                best_window = window;
            }
        }
        best_window
    }
}

/// `π_k^γ(w)` by enumerating all of `Σ^k`; refuses when `|Σ|^k > budget`.
pub fn brute_force_pi(w: &Word, gamma: &Word, k: usize, budget: u128) -> Result<u128> {
    if w.alphabet() != gamma.alphabet() || w.len() != gamma.len() {
        return Err(Error::invalid("w and γ must be m-mers over the same alphabet"));
    }
    let scan = Scan::new(gamma, k, budget)?;
    let target = w.rank()?;
    let chunks = scan.space.div_ceil(CHUNK);
    Ok((0..chunks)
        .into_par_iter()
        .map(|c| {
            let end = ((c + 1) * CHUNK).min(scan.space);
            (c * CHUNK..end)
                .filter(|&x| scan.vigemin_code(x) == target)
                .count() as u128
        })
        .sum())
}

/// Every bucket size `π_k^γ(·)` by enumerating all of `Σ^k`.
pub fn brute_force_distribution(gamma: &Word, k: usize, budget: u128) -> Result<Distribution> {
    let scan = Scan::new(gamma, k, budget)?;
    let buckets = 1usize << (scan.bits as usize * scan.m);
    let chunks = scan.space.div_ceil(CHUNK);
    let counts = (0..chunks)
        .into_par_iter()
        .fold(
            || vec![0u64; buckets],
            |mut local, c| {
                let end = ((c + 1) * CHUNK).min(scan.space);
                for x in c * CHUNK..end {
                    local[scan.vigemin_code(x) as usize] += 1;
                }
                local
            },
        )
        .reduce(
            || vec![0u64; buckets],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Distribution::from_counts(k, gamma.clone(), counts.into_iter().map(u128::from).collect())
}
