use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use vigemin::approx::{self, DEFAULT_FIT_RANGE};
use vigemin::count::ln_biguint;
use vigemin::distribution::{enumerate_all, Distribution};
use vigemin::empirical::{self, Correlation};
use vigemin::oracle::{self, DEFAULT_BUDGET};
use vigemin::{stats, Alphabet, CountingFunction, Error, Letter, Word};

const THREADS_ENV: &str = "VIGEMIN_THREADS";

#[derive(Parser)]
#[command(name = "vigemin", version, about = "Exact bucket sizes for XOR-keyed minimizers")]
struct Cli {
    /// `dna`, or `b:N` for an alphabet of 2^N letters
    #[arg(long, global = true, default_value = "dna")]
    alphabet: Alphabet,

    /// Worker threads (defaults to $VIGEMIN_THREADS, then all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Number of k-mers whose vigemin is w
    Pi(PiArgs),
    /// Bucket sizes for every m-mer, written as CSV
    Enumerate(EnumerateArgs),
    /// Check the counting DP against exhaustive enumeration
    Verify(VerifyArgs),
    /// Fit ln π on a small k range and extrapolate
    Approx(ApproxArgs),
    /// Compare observed buckets in a FASTA file with exact sizes
    Empirical(EmpiricalArgs),
}

#[derive(Args)]
struct PiArgs {
    /// One or more m-mers; several print `w,count` lines
    #[arg(long, required = true, num_args = 1..)]
    w: Vec<String>,
    #[arg(long)]
    gamma: String,
    #[arg(long)]
    k: usize,
    /// Dump the preprocessing tables to stderr
    #[arg(long)]
    debug: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum KeyOrder {
    /// A^m
    Lex,
    /// A T^(m-1)
    Antilex,
    /// ATAT...
    Alternating,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct KeyChoice {
    #[arg(long)]
    gamma: Option<String>,
    #[arg(long, value_enum)]
    order: Option<KeyOrder>,
    /// Random key whose first letters are the given prefix (uses --seed)
    #[arg(long, value_name = "PREFIX")]
    random_key: Option<String>,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    k: usize,
    #[command(flatten)]
    key: KeyChoice,
    #[arg(long)]
    out: PathBuf,
    /// Rows by decreasing bucket size
    #[arg(long)]
    sorted: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, required_unless_present = "random_gammas", conflicts_with = "random_gammas")]
    gamma: Option<String>,
    /// Check this many seeded random keys
    #[arg(long)]
    random_gammas: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest |Σ|^k the exhaustive scan may visit
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
}

#[derive(Args)]
struct ApproxArgs {
    #[arg(long, num_args = 1.., required_unless_present = "random", conflicts_with = "random")]
    w: Vec<String>,
    /// Fit this many seeded random m-mers (m = |gamma|)
    #[arg(long)]
    random: Option<usize>,
    #[arg(long)]
    gamma: String,
    /// k at which ln π is predicted
    #[arg(long)]
    k: usize,
    #[arg(long, value_name = "LO:HI", value_parser = parse_range,
          default_value_t = FitRange(DEFAULT_FIT_RANGE.0, DEFAULT_FIT_RANGE.1))]
    fit_range: FitRange,
    /// Also compute the exact ln π at k
    #[arg(long)]
    exact: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV destination (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy)]
struct FitRange(usize, usize);

impl std::fmt::Display for FitRange {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.0, self.1)
    }
}

fn parse_range(text: &str) -> Result<FitRange, String> {
    let (lo, hi) = text.split_once(':').ok_or("expected LO:HI")?;
    let lo: usize = lo.trim().parse().map_err(|e| format!("bad LO: {e}"))?;
    let hi: usize = hi.trim().parse().map_err(|e| format!("bad HI: {e}"))?;
    if lo >= hi {
        return Err("need LO < HI".into());
    }
    Ok(FitRange(lo, hi))
}

#[derive(Args)]
struct EmpiricalArgs {
    #[arg(long)]
    fasta: PathBuf,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    gamma: String,
    /// Exact bucket sizes previously written by `enumerate`
    #[arg(long, required_unless_present = "compute_theory", conflicts_with = "compute_theory")]
    theory: Option<PathBuf>,
    #[arg(long)]
    compute_theory: bool,
    #[arg(long)]
    out: PathBuf,
    /// Number of most divergent buckets to print
    #[arg(long, default_value_t = 10)]
    top: usize,
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_) | Error::Overflow => Failure::Internal(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type CliResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads(cli.threads) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    let alphabet = cli.alphabet;
    let result = match cli.command {
        Command::Pi(args) => run_pi(alphabet, args),
        Command::Enumerate(args) => run_enumerate(alphabet, args),
        Command::Verify(args) => run_verify(alphabet, args),
        Command::Approx(args) => run_approx(alphabet, args),
        Command::Empirical(args) => run_empirical(alphabet, args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn configure_threads(flag: Option<usize>) -> Result<(), String> {
    let threads = match flag {
        Some(n) => Some(n),
        None => match std::env::var(THREADS_ENV) {
            Ok(v) => Some(v.parse().map_err(|_| format!("{THREADS_ENV}={v:?} is not a count"))?),
            Err(_) => None,
        },
    };
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn word(alphabet: Alphabet, text: &str) -> Result<Word, Failure> {
    Word::parse(alphabet, text).map_err(|e| Failure::Usage(format!("{text:?}: {e}")))
}

fn key_for_order(alphabet: Alphabet, order: KeyOrder, m: usize) -> Word {
    let low: Letter = 0;
    let high = (alphabet.size() - 1) as Letter;
    let letters = (0..m)
        .map(|i| match order {
            KeyOrder::Lex => low,
            KeyOrder::Antilex => {
                if i == 0 {
                    low
                } else {
                    high
                }
            }
            KeyOrder::Alternating => {
                if i % 2 == 0 {
                    low
                } else {
                    high
                }
            }
        })
        .collect();
    Word::new(alphabet, letters).expect("letters within alphabet")
}

fn random_word(alphabet: Alphabet, prefix: &[Letter], m: usize, rng: &mut ChaCha8Rng) -> Word {
    Word::random_with_prefix(alphabet, prefix, m, rng)
}

fn run_pi(alphabet: Alphabet, args: PiArgs) -> CliResult {
    let gamma = word(alphabet, &args.gamma)?;
    let several = args.w.len() > 1;
    for text in &args.w {
        let w = word(alphabet, text)?;
        let function = CountingFunction::new(&w, &gamma)?;
        if args.debug {
            eprintln!("{}", function.context().dump(Some(args.k)));
        }
        let count = function.count(args.k)?;
        if several {
            println!("{w},{count}");
        } else {
            println!("{count}");
        }
    }
    Ok(())
}

fn resolve_key(alphabet: Alphabet, choice: &KeyChoice, m: usize, seed: u64) -> Result<Word, Failure> {
    let gamma = if let Some(text) = &choice.gamma {
        word(alphabet, text)?
    } else if let Some(order) = choice.order {
        key_for_order(alphabet, order, m)
    } else {
        let prefix = word(alphabet, choice.random_key.as_deref().unwrap_or(""))?;
        if prefix.len() > m {
            return Err(Failure::Usage(format!("key prefix {prefix} longer than m = {m}")));
        }
        random_word(alphabet, prefix.letters(), m, &mut ChaCha8Rng::seed_from_u64(seed))
    };
    if gamma.len() != m {
        return Err(Failure::Usage(format!(
            "key {gamma} has length {}, expected m = {m}",
            gamma.len()
        )));
    }
    Ok(gamma)
}

fn run_enumerate(alphabet: Alphabet, args: EnumerateArgs) -> CliResult {
    if args.k < args.m {
        return Err(Failure::Usage(format!("k < m (k = {}, m = {})", args.k, args.m)));
    }
    let gamma = resolve_key(alphabet, &args.key, args.m, args.seed)?;
    let started = Instant::now();
    let distribution = enumerate_all(&gamma, args.k)?;
    let elapsed = started.elapsed();
    distribution.write_csv_path(&args.out, args.sorted)?;
    let s = distribution.stats();
    println!(
        "m={} k={} gamma={} total={} balanced={} max={} min={} empty={} elapsed={:.2}s",
        args.m,
        args.k,
        gamma,
        distribution.total(),
        s.balanced_line,
        s.max,
        s.min,
        s.empty_buckets,
        elapsed.as_secs_f64()
    );
    Ok(())
}

fn run_verify(alphabet: Alphabet, args: VerifyArgs) -> CliResult {
    if args.k < args.m {
        return Err(Failure::Usage(format!("k < m (k = {}, m = {})", args.k, args.m)));
    }
    let keys = match (&args.gamma, args.random_gammas) {
        (Some(text), _) => vec![word(alphabet, text)?],
        (None, Some(n)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            (0..n).map(|_| random_word(alphabet, &[], args.m, &mut rng)).collect()
        }
        (None, None) => unreachable!("clap requires one of --gamma and --random-gammas"),
    };
    let mut mismatched = false;
    for gamma in keys {
        if gamma.len() != args.m {
            return Err(Failure::Usage(format!("key {gamma} does not have length m = {}", args.m)));
        }
        let expected = oracle::brute_force_distribution(&gamma, args.k, args.budget)?;
        let actual = enumerate_all(&gamma, args.k)?;
        let total = expected.counts().len();
        let mut agree = 0;
        for (rank, (e, a)) in expected.counts().iter().zip(actual.counts()).enumerate() {
            if e == a {
                agree += 1;
            } else {
                println!("MISMATCH gamma={gamma} w={} dp={a} brute_force={e}", expected.mmer(rank));
            }
        }
        if agree == total {
            println!("OK {agree}/{total} m-mers (gamma={gamma})");
        } else {
            println!("FAIL {agree}/{total} m-mers (gamma={gamma})");
            mismatched = true;
        }
    }
    if mismatched {
        return Err(Failure::Internal("counting DP disagrees with exhaustive enumeration".into()));
    }
    Ok(())
}

fn run_approx(alphabet: Alphabet, args: ApproxArgs) -> CliResult {
    let gamma = word(alphabet, &args.gamma)?;
    let m = gamma.len();
    if args.k < m || args.fit_range.0 < m {
        return Err(Failure::Usage(format!("k < m (m = {m})")));
    }
    let (ws, skip_degenerate) = match args.random {
        Some(n) => {
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            ((0..n).map(|_| random_word(alphabet, &[], m, &mut rng)).collect(), true)
        }
        None => (
            args.w.iter().map(|t| word(alphabet, t)).collect::<Result<Vec<_>, _>>()?,
            false,
        ),
    };
    let k_values = approx::k_range(args.fit_range.0, args.fit_range.1);

    let mut out: Box<dyn std::io::Write> = match &args.out {
        Some(path) => Box::new(std::io::BufWriter::new(
            std::fs::File::create(path).map_err(|e| Error::io(path, e))?,
        )),
        None => Box::new(std::io::stdout().lock()),
    };
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(&mut out);
    let csv_fail = |e: csv::Error| Failure::Internal(format!("CSV write failed: {e}"));
    let mut header = vec!["w", "slope", "intercept", "predicted_log_pi_at_k"];
    if args.exact {
        header.push("exact_log_pi_at_k");
    }
    writer.write_record(&header).map_err(csv_fail)?;

    let mut predicted = Vec::new();
    let mut exact = Vec::new();
    let mut skipped = 0;
    for w in &ws {
        let fit = match approx::fit(w, &gamma, &k_values) {
            Ok(fit) => fit,
            Err(Error::DegenerateMinimizer { .. }) if skip_degenerate => {
                skipped += 1;
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let prediction = fit.predict(args.k);
        let mut row = vec![
            w.to_string(),
            fit.slope.to_string(),
            fit.intercept.to_string(),
            prediction.to_string(),
        ];
        if args.exact {
            let value = ln_biguint(&CountingFunction::new(w, &gamma)?.count(args.k)?);
            row.push(value.to_string());
            exact.push(value);
        }
        predicted.push(prediction);
        writer.write_record(&row).map_err(csv_fail)?;
    }
    writer.flush().map_err(|e| Failure::Internal(e.to_string()))?;

    let ln10 = std::f64::consts::LN_10;
    eprintln!(
        "fitted {} m-mers on k={} (skipped {skipped} degenerate), predicting at k={}",
        predicted.len(),
        args.fit_range,
        args.k
    );
    if args.exact && !predicted.is_empty() {
        let errors: Vec<f64> = predicted.iter().zip(&exact).map(|(p, e)| p - e).collect();
        let mean_error = errors.iter().sum::<f64>() / errors.len() as f64;
        let pearson = stats::pearson(&predicted, &exact)
            .map_or("undefined".to_string(), |r| format!("{r:.6}"));
        eprintln!(
            "pearson={pearson} mean_signed_error_ln={mean_error:.6} mean_signed_error_log10={:.6}",
            mean_error / ln10
        );
    } else if let Some(first) = predicted.first() {
        eprintln!("first prediction: ln={first:.6} log10={:.6}", first / ln10);
    }
    Ok(())
}

fn run_empirical(alphabet: Alphabet, args: EmpiricalArgs) -> CliResult {
    let gamma = word(alphabet, &args.gamma)?;
    if gamma.len() != args.m {
        return Err(Failure::Usage(format!("key {gamma} does not have length m = {}", args.m)));
    }
    if args.k < args.m {
        return Err(Failure::Usage(format!("k < m (k = {}, m = {})", args.k, args.m)));
    }
    let records = empirical::read_fasta(&args.fasta, alphabet)?.collect::<Result<Vec<_>, _>>()?;
    let observed = empirical::bucket_histogram(&records, &gamma, args.k)?;
    let theory = match &args.theory {
        Some(path) => Distribution::read_csv_path(path, args.k, gamma.clone())?,
        None => enumerate_all(&gamma, args.k)?,
    };
    let report = empirical::compare(&theory, &observed, args.top)?;
    report.write_csv_path(&args.out)?;
    match report.correlation {
        Correlation::Spearman(rho) => println!(
            "records={} distinct_kmers={} spearman={rho:.6}",
            records.len(),
            observed.distinct_kmers()
        ),
        Correlation::InsufficientData => println!(
            "records={} distinct_kmers={} spearman=insufficient data",
            records.len(),
            observed.distinct_kmers()
        ),
    }
    for d in &report.top_divergent {
        println!(
            "{} theoretical={} empirical={} share_difference={:+.3e}",
            d.mmer, d.theoretical, d.empirical, d.share_difference
        );
    }
    Ok(())
}
