//! `π_k^γ(w)` for every `w ∈ Σ^m`, indexed by the lexicographic rank of `w`.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::count::Count;
use crate::error::{Error, Result};
use crate::precompute::PrecomputeContext;
use crate::words::{Alphabet, Letter, Word};

const CHUNK: usize = 1 << 12;

/// Exact bucket sizes of the vigemin partition of `Σ^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distribution {
    m: usize,
    k: usize,
    gamma: Word,
    counts: Vec<u128>,
    total: u128,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DistributionStats {
    pub max: u128,
    pub min: u128,
    pub empty_buckets: usize,
    /// `|Σ|^{k-m}`, the bucket size of a perfectly balanced partition.
    pub balanced_line: u128,
}

impl Distribution {
    /// Wrap raw counts, checking that they partition `Σ^k`.
    pub fn from_counts(k: usize, gamma: Word, counts: Vec<u128>) -> Result<Self> {
        let alphabet = gamma.alphabet();
        let m = gamma.len();
        let expected_len = alphabet
            .power(m)
            .ok_or_else(|| Error::invalid(format!("|Σ|^m too large for m = {m}")))?;
        if counts.len() as u128 != expected_len {
            return Err(Error::invalid(format!(
                "expected {expected_len} counts for m = {m}, got {}",
                counts.len()
            )));
        }
        let space = alphabet
            .power(k)
            .ok_or_else(|| Error::invalid(format!("|Σ|^k does not fit 128 bits for k = {k}")))?;
        let mut total = 0u128;
        for c in &counts {
            total.add_assign_checked(c)?;
        }
        if total != space {
            return Err(Error::Internal(format!(
                "bucket sizes sum to {total}, expected |Σ|^k = {space} (off by {})",
                total.abs_diff(space)
            )));
        }
        Ok(Distribution {
            m,
            k,
            gamma,
            counts,
            total,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn gamma(&self) -> &Word {
        &self.gamma
    }

    pub fn alphabet(&self) -> Alphabet {
        self.gamma.alphabet()
    }

    pub fn counts(&self) -> &[u128] {
        &self.counts
    }

    pub fn total(&self) -> u128 {
        self.total
    }

    /// The m-mer of lexicographic rank `rank`.
    pub fn mmer(&self, rank: usize) -> Word {
        Word::from_rank(self.alphabet(), rank as u64, self.m)
    }

    pub fn count_of(&self, w: &Word) -> Result<u128> {
        if w.len() != self.m || w.alphabet() != self.alphabet() {
            return Err(Error::invalid(format!("{w} is not an m-mer of this distribution")));
        }
        Ok(self.counts[w.rank()? as usize])
    }

    pub fn stats(&self) -> DistributionStats {
        let max = self.counts.iter().copied().max().unwrap_or(0);
        let min = self.counts.iter().copied().min().unwrap_or(0);
        DistributionStats {
            max,
            min,
            empty_buckets: self.counts.iter().filter(|&&c| c == 0).count(),
            balanced_line: self
                .alphabet()
                .power(self.k - self.m)
                .expect("|Σ|^k fits, so does |Σ|^(k-m)"),
        }
    }

    /// `(rank, count)` by decreasing count, ties by increasing rank.
    pub fn sort_desc(&self) -> Vec<(usize, u128)> {
        let mut sorted: Vec<(usize, u128)> = self.counts.iter().copied().enumerate().collect();
        sorted.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        sorted
    }

    /// `mmer,count` rows in lexicographic m-mer order.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut writer = csv_writer(out);
        writer.write_record(["mmer", "count"]).map_err(csv_error)?;
        for (rank, count) in self.counts.iter().enumerate() {
            writer
                .write_record([self.mmer(rank).to_string(), count.to_string()])
                .map_err(csv_error)?;
        }
        writer.flush().map_err(|e| Error::Internal(e.to_string()))
    }

    /// `rank,mmer,count` rows by decreasing bucket size; `rank` starts at 1.
    pub fn write_sorted_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut writer = csv_writer(out);
        writer.write_record(["rank", "mmer", "count"]).map_err(csv_error)?;
        for (position, (rank, count)) in self.sort_desc().into_iter().enumerate() {
            writer
                .write_record([
                    (position + 1).to_string(),
                    self.mmer(rank).to_string(),
                    count.to_string(),
                ])
                .map_err(csv_error)?;
        }
        writer.flush().map_err(|e| Error::Internal(e.to_string()))
    }

    pub fn write_csv_path(&self, path: &Path, sorted: bool) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let out = BufWriter::new(file);
        let result = if sorted {
            self.write_sorted_csv(out)
        } else {
            self.write_csv(out)
        };
        result.map_err(|e| match e {
            Error::Internal(msg) => Error::io(path, std::io::Error::other(msg)),
            other => other,
        })
    }

    /// Read back the output of [`Distribution::write_csv`].
    pub fn read_csv<R: Read>(input: R, k: usize, gamma: Word) -> Result<Self> {
        let alphabet = gamma.alphabet();
        let m = gamma.len();
        let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
        let headers = reader.headers().map_err(|e| parse_error(0, e))?.clone();
        if headers.iter().collect::<Vec<_>>() != ["mmer", "count"] {
            return Err(Error::Parse {
                line: 1,
                message: format!("expected header mmer,count, found {:?}", headers),
            });
        }
        let mut counts = Vec::new();
        for (index, record) in reader.records().enumerate() {
            let line = index + 2;
            let record = record.map_err(|e| parse_error(line, e))?;
            let word = Word::parse(alphabet, &record[0]).map_err(|e| Error::Parse {
                line,
                message: e.to_string(),
            })?;
            if word.len() != m || word.rank()? as usize != counts.len() {
                return Err(Error::Parse {
                    line,
                    message: format!("m-mer {word} out of lexicographic order"),
                });
            }
            let count: u128 = record[1].parse().map_err(|e| Error::Parse {
                line,
                message: format!("bad count {:?}: {e}", &record[1]),
            })?;
            counts.push(count);
        }
        let rows = counts.len();
        Distribution::from_counts(k, gamma, counts).map_err(|e| Error::Parse {
            line: rows + 1,
            message: format!("file does not hold a distribution for k = {k}: {e}"),
        })
    }

    pub fn read_csv_path(path: &Path, k: usize, gamma: Word) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Distribution::read_csv(std::io::BufReader::new(file), k, gamma)
    }
}

fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

fn csv_error(e: csv::Error) -> Error {
    Error::Internal(format!("CSV write failed: {e}"))
}

fn parse_error(line: usize, e: csv::Error) -> Error {
    let line = e
        .position()
        .map_or(line, |p| p.line() as usize);
    Error::Parse {
        line,
        message: e.to_string(),
    }
}

/// Advance `letters` to the next word in lexicographic order (wrapping).
fn increment(letters: &mut [Letter], size: usize) {
    for letter in letters.iter_mut().rev() {
        if (*letter as usize) + 1 < size {
            *letter += 1;
            return;
        }
        *letter = 0;
    }
}

/// `π_k^γ(w)` for all `w ∈ Σ^m`, in parallel over `w`.
///
/// The total is checked against `|Σ|^k`; a mismatch is an internal error.
pub fn enumerate_all(gamma: &Word, k: usize) -> Result<Distribution> {
    let alphabet = gamma.alphabet();
    let m = gamma.len();
    if m == 0 || k < m {
        return Err(Error::invalid(format!("need 1 <= m <= k, got m = {m}, k = {k}")));
    }
    if alphabet.power(k).is_none() {
        return Err(Error::invalid(format!(
            "|Σ|^k overflows 128 bits for k = {k}; dense enumeration needs k * b < 128"
        )));
    }
    if m * alphabet.bits() as usize > 40 {
        return Err(Error::invalid(format!("|Σ|^m too large to enumerate for m = {m}")));
    }
    let len = alphabet.size().pow(m as u32);
    let key = gamma.letters();
    let mut counts = vec![0u128; len];

    counts
        .par_chunks_mut(CHUNK)
        .enumerate()
        .try_for_each(|(chunk_index, chunk)| -> Result<()> {
            let first = Word::from_rank(alphabet, (chunk_index * CHUNK) as u64, m);
            let mut letters = first.letters().to_vec();
            for slot in chunk.iter_mut() {
                let ctx = PrecomputeContext::from_letters(alphabet, &letters, key);
                *slot = crate::counting::count_with_context::<u128>(&ctx, k)?;
                increment(&mut letters, alphabet.size());
            }
            Ok(())
        })?;

    Distribution::from_counts(k, gamma.clone(), counts)
}
