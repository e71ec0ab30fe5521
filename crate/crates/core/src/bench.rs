//! Synthetic corpora with a planted common substring and timed, metered runs.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::approx::approximate_lcs;
use crate::corpus::{Corpus, Symbol};
use crate::error::{Error, Result};
use crate::exact::{exact_lcs, ExactOptions};
use crate::meter::measure;
use crate::oracle::{brute_force_lcs, classic_lcs, LcsResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Planted {
    pub n: usize,
    pub m: usize,
    pub d: usize,
    pub sigma: u32,
    pub secret_len: usize,
    pub seed: u64,
}

impl Planted {
    pub fn new(n: usize, seed: u64) -> Planted {
        Planted { n, m: 4, d: 2, sigma: 4, secret_len: 40, seed }
    }
}

/// `m` random documents of total length `n`; the first `d` carry one
/// shared secret at a random offset.
pub fn planted_corpus(p: &Planted) -> Result<Corpus> {
    if p.m == 0 || p.n < p.m * p.secret_len {
        return Err(Error::InvalidParameter(format!(
            "cannot plant a secret of length {} in {} documents of total length {}",
            p.secret_len, p.m, p.n
        )));
    }
    let mut rng = StdRng::seed_from_u64(p.seed);
    let secret: Vec<Symbol> = (0..p.secret_len).map(|_| rng.gen_range(0..p.sigma)).collect();
    let docs = (0..p.m)
        .map(|j| {
            let len = p.n / p.m + usize::from(j < p.n % p.m);
            let mut doc: Vec<Symbol> = (0..len).map(|_| rng.gen_range(0..p.sigma)).collect();
            if j < p.d {
                let at = rng.gen_range(0..=len - p.secret_len);
                doc[at..at + p.secret_len].copy_from_slice(&secret);
            }
            doc
        })
        .collect();
    Corpus::new(docs, p.sigma, p.d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Exact,
    Approx,
    Classic,
    BruteForce,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Exact, Algorithm::Approx, Algorithm::Classic, Algorithm::BruteForce];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Exact => "exact",
            Algorithm::Approx => "approx",
            Algorithm::Classic => "classic",
            Algorithm::BruteForce => "oracle",
        }
    }

    /// Whether the result depends on `tau`.
    pub fn uses_tau(self) -> bool {
        matches!(self, Algorithm::Exact | Algorithm::Approx)
    }

    pub fn run(self, c: &Corpus, tau: usize) -> Result<LcsResult> {
        match self {
            Algorithm::Exact => exact_lcs(c, tau, &ExactOptions::default()),
            Algorithm::Approx => approximate_lcs(c, tau).map(|a| LcsResult::new(a.span)),
            Algorithm::Classic => Ok(classic_lcs(c)),
            Algorithm::BruteForce => Ok(brute_force_lcs(c)),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Algorithm> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown algorithm {s:?}")))
    }
}

/// One timed, metered run.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub n: usize,
    pub m: usize,
    pub d: usize,
    pub sigma: u32,
    pub tau: usize,
    pub algorithm: Algorithm,
    pub millis: f64,
    pub peak_words: usize,
    pub length: usize,
}

impl BenchRecord {
    pub const TSV_HEADER: &'static str = "n\tm\td\tsigma\ttau\talgorithm\tmillis\tpeak_words\tlength";

    pub fn to_tsv(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{:.3}\t{}\t{}",
            self.n, self.m, self.d, self.sigma, self.tau, self.algorithm, self.millis, self.peak_words, self.length
        )
    }
}

/// Runs `alg` once on `c`, timing it and metering its workspace.
pub fn run_cell(c: &Corpus, alg: Algorithm, tau: usize) -> Result<BenchRecord> {
    let start = Instant::now();
    let (result, peak_words) = measure(|| alg.run(c, tau));
    let millis = start.elapsed().as_secs_f64() * 1e3;
    Ok(BenchRecord {
        n: c.n(),
        m: c.m(),
        d: c.d(),
        sigma: c.sigma(),
        tau,
        algorithm: alg,
        millis,
        peak_words,
        length: result?.length,
    })
}
