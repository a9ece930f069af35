//! Observed bucket sizes from sequence data, compared against exact `π`.
//!
//! Buckets count *distinct* k-mers: a k-mer seen many times lands in its
//! vigemin bucket once, so an observed bucket never exceeds `π_k^γ(w)`.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::stats::spearman;
use crate::words::{cmp_xored, Alphabet, Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceRecord {
    pub id: String,
    /// Maximal runs of alphabet letters; any other character ends a run.
    pub segments: Vec<Vec<Letter>>,
}

/// Streaming FASTA reader yielding one record per `>` header.
pub struct FastaReader<R> {
    lines: std::io::Lines<R>,
    line_number: usize,
    alphabet: Alphabet,
    pending_header: Option<String>,
    done: bool,
}

impl<R: BufRead> FastaReader<R> {
    pub fn new(reader: R, alphabet: Alphabet) -> Self {
        FastaReader {
            lines: reader.lines(),
            line_number: 0,
            alphabet,
            pending_header: None,
            done: false,
        }
    }

    fn next_record(&mut self) -> Result<Option<SequenceRecord>> {
        let id = match self.pending_header.take() {
            Some(id) => id,
            None => loop {
                match self.next_line()? {
                    None => return Ok(None),
                    Some(line) if line.trim().is_empty() => continue,
                    Some(line) => match line.strip_prefix('>') {
                        Some(header) => break header.trim().to_string(),
                        None => {
                            return Err(Error::Parse {
                                line: self.line_number,
                                message: "sequence data before the first '>' header".into(),
                            })
                        }
                    },
                }
            },
        };
        let mut segments = Vec::new();
        let mut current = Vec::new();
        while let Some(line) = self.next_line()? {
            if let Some(header) = line.strip_prefix('>') {
                self.pending_header = Some(header.trim().to_string());
                break;
            }
            for symbol in line.trim_end().chars() {
                match self.alphabet.letter(symbol) {
                    Some(letter) => current.push(letter),
                    None if !current.is_empty() => segments.push(std::mem::take(&mut current)),
                    None => {}
                }
            }
        }
        if !current.is_empty() {
            segments.push(current);
        }
        Ok(Some(SequenceRecord { id, segments }))
    }

    fn next_line(&mut self) -> Result<Option<String>> {
        match self.lines.next() {
            None => Ok(None),
            Some(line) => {
                self.line_number += 1;
                line.map(Some).map_err(|e| Error::Parse {
                    line: self.line_number,
                    message: e.to_string(),
                })
            }
        }
    }
}

impl<R: BufRead> Iterator for FastaReader<R> {
    type Item = Result<SequenceRecord>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let item = self.next_record().transpose();
        if !matches!(item, Some(Ok(_))) {
            self.done = true;
        }
        item
    }
}

pub fn read_fasta(path: &Path, alphabet: Alphabet) -> Result<FastaReader<BufReader<File>>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(FastaReader::new(BufReader::new(file), alphabet))
}

/// Sliding-window vigemin over one segment.
///
/// Yields, for each k-mer window start `s`, the absolute start of its vigemin.
/// The current minimum is kept until it slides out; only then is the window
/// rescanned.
pub struct RollingVigemin<'a> {
    segment: &'a [Letter],
    key: &'a [Letter],
    k: usize,
    start: usize,
    best: usize,
}

impl<'a> RollingVigemin<'a> {
    pub fn new(segment: &'a [Letter], key: &'a [Letter], k: usize) -> Self {
        assert!(!key.is_empty() && key.len() <= k, "need 1 <= m <= k");
        RollingVigemin {
            segment,
            key,
            k,
            start: 0,
            best: usize::MAX,
        }
    }

    fn window(&self, p: usize) -> &'a [Letter] {
        &self.segment[p..p + self.key.len()]
    }

    fn rescan(&mut self) {
        let m = self.key.len();
        let mut best = self.start;
        for p in self.start + 1..=self.start + self.k - m {
            if cmp_xored(self.window(p), self.window(best), self.key) == Ordering::Less {
                best = p;
            }
        }
        self.best = best;
    }
}

impl Iterator for RollingVigemin<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.start + self.k > self.segment.len() {
            return None;
        }
        let m = self.key.len();
        if self.best == usize::MAX || self.best < self.start {
            self.rescan();
        } else {
            let entering = self.start + self.k - m;
            if cmp_xored(self.window(entering), self.window(self.best), self.key) == Ordering::Less {
                self.best = entering;
            }
        }
        self.start += 1;
        Some(self.best)
    }
}

/// Distinct-k-mer bucket sizes observed in sequence data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmpiricalBuckets {
    m: usize,
    k: usize,
    gamma: Word,
    counts: Vec<u64>,
    distinct_kmers: u64,
}

impl EmpiricalBuckets {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn gamma(&self) -> &Word {
        &self.gamma
    }

    /// Indexed by m-mer rank.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn distinct_kmers(&self) -> u64 {
        self.distinct_kmers
    }
}

enum KmerSet {
    Packed { bits: u32, seen: HashSet<u128> },
    Long(HashSet<Box<[Letter]>>),
}

impl KmerSet {
    fn new(alphabet: Alphabet, k: usize) -> Self {
        let bits = alphabet.bits() as u32;
        if k * bits as usize <= 128 {
            KmerSet::Packed {
                bits,
                seen: HashSet::new(),
            }
        } else {
            KmerSet::Long(HashSet::new())
        }
    }

    fn insert(&mut self, kmer: &[Letter]) -> bool {
        match self {
            KmerSet::Packed { bits, seen } => {
                let code = kmer.iter().fold(0u128, |acc, &l| (acc << *bits) | l as u128);
                seen.insert(code)
            }
            KmerSet::Long(seen) => {
                if seen.contains(kmer) {
                    false
                } else {
                    seen.insert(kmer.into())
                }
            }
        }
    }
}

fn rank_of(letters: &[Letter], bits: u32) -> usize {
    letters
        .iter()
        .fold(0usize, |acc, &l| (acc << bits) | l as usize)
}

/// Bucket every distinct k-mer of `records` under its vigemin for key `gamma`.
pub fn bucket_histogram<'a, I>(records: I, gamma: &Word, k: usize) -> Result<EmpiricalBuckets>
where
    I: IntoIterator<Item = &'a SequenceRecord>,
{
    let alphabet = gamma.alphabet();
    let m = gamma.len();
    if m == 0 || k < m {
        return Err(Error::invalid(format!("k < m (k = {k}, m = {m})")));
    }
    let buckets = alphabet
        .power(m)
        .filter(|&n| m * alphabet.bits() as usize <= 40 && n > 0)
        .ok_or_else(|| Error::invalid(format!("|Σ|^m too large for m = {m}")))?
        as usize;
    let bits = alphabet.bits() as u32;
    let key = gamma.letters();
    let mut counts = vec![0u64; buckets];
    let mut seen = KmerSet::new(alphabet, k);
    let mut distinct_kmers = 0;
    for record in records {
        for segment in &record.segments {
            for (start, best) in RollingVigemin::new(segment, key, k).enumerate() {
                if seen.insert(&segment[start..start + k]) {
                    counts[rank_of(&segment[best..best + m], bits)] += 1;
                    distinct_kmers += 1;
                }
            }
        }
    }
    Ok(EmpiricalBuckets {
        m,
        k,
        gamma: gamma.clone(),
        counts,
        distinct_kmers,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Correlation {
    Spearman(f64),
    /// No observed k-mers, or a constant side: the rank correlation is undefined.
    InsufficientData,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Divergence {
    pub mmer: Word,
    pub theoretical: u128,
    pub empirical: u64,
    /// Difference of the bucket's share of the total, empirical minus theoretical.
    pub share_difference: f64,
}

#[derive(Clone, Debug)]
pub struct ComparisonReport {
    pub correlation: Correlation,
    pub top_divergent: Vec<Divergence>,
    theoretical: Vec<u128>,
    empirical: Vec<u64>,
    m: usize,
    alphabet: Alphabet,
}

impl ComparisonReport {
    /// `mmer,theoretical,empirical` rows in lexicographic m-mer order.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        let fail = |e: csv::Error| Error::Internal(format!("CSV write failed: {e}"));
        writer
            .write_record(["mmer", "theoretical", "empirical"])
            .map_err(fail)?;
        for (rank, (t, e)) in self.theoretical.iter().zip(&self.empirical).enumerate() {
            let mmer = Word::from_rank(self.alphabet, rank as u64, self.m);
            writer
                .write_record([mmer.to_string(), t.to_string(), e.to_string()])
                .map_err(fail)?;
        }
        writer.flush().map_err(|e| Error::Internal(e.to_string()))
    }

    pub fn write_csv_path(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv(std::io::BufWriter::new(file))
    }
}

/// Rank-correlate observed buckets with exact bucket sizes.
///
/// Fails with [`Error::Internal`] if any observed bucket exceeds its exact size.
pub fn compare(
    theoretical: &Distribution,
    empirical: &EmpiricalBuckets,
    top_n: usize,
) -> Result<ComparisonReport> {
    if theoretical.m() != empirical.m
        || theoretical.k() != empirical.k
        || theoretical.gamma() != &empirical.gamma
    {
        return Err(Error::invalid(format!(
            "parameter mismatch: theory (m = {}, k = {}, γ = {}) vs data (m = {}, k = {}, γ = {})",
            theoretical.m(),
            theoretical.k(),
            theoretical.gamma(),
            empirical.m,
            empirical.k,
            empirical.gamma
        )));
    }
    for (rank, (&t, &e)) in theoretical.counts().iter().zip(&empirical.counts).enumerate() {
        if e as u128 > t {
            return Err(Error::Internal(format!(
                "observed bucket {} holds {e} k-mers, more than the {t} possible",
                theoretical.mmer(rank)
            )));
        }
    }
    let correlation = if empirical.distinct_kmers == 0 {
        Correlation::InsufficientData
    } else {
        let t: Vec<f64> = theoretical.counts().iter().map(|&c| c as f64).collect();
        let e: Vec<f64> = empirical.counts.iter().map(|&c| c as f64).collect();
        spearman(&t, &e).map_or(Correlation::InsufficientData, Correlation::Spearman)
    };

    let theory_total = theoretical.total() as f64;
    let observed_total = empirical.distinct_kmers.max(1) as f64;
    let mut divergences: Vec<Divergence> = theoretical
        .counts()
        .iter()
        .zip(&empirical.counts)
        .enumerate()
        .map(|(rank, (&t, &e))| Divergence {
            mmer: theoretical.mmer(rank),
            theoretical: t,
            empirical: e,
            share_difference: e as f64 / observed_total - t as f64 / theory_total,
        })
        .collect();
    divergences.sort_by(|a, b| {
        b.share_difference
            .abs()
            .total_cmp(&a.share_difference.abs())
            .then_with(|| a.mmer.letters().cmp(b.mmer.letters()))
    });
    divergences.truncate(top_n);

    Ok(ComparisonReport {
        correlation,
        top_divergent: divergences,
        theoretical: theoretical.counts().to_vec(),
        empirical: empirical.counts.clone(),
        m: theoretical.m(),
        alphabet: theoretical.alphabet(),
    })
}
