//! Reference solvers used to cross-check the space-efficient algorithms.

use rustc_hash::FxHashMap;

use crate::corpus::{Corpus, DocSpan, Symbol};
use crate::error::Result;
use crate::exact::{exact_lcs, ExactOptions};
use crate::stree::{count_distinct_colors, HuiScratch, SuffixTree};

/// A longest common substring and its length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LcsResult {
    pub span: DocSpan,
    pub length: usize,
}

impl LcsResult {
    pub const EMPTY: LcsResult = LcsResult { span: DocSpan::EMPTY, length: 0 };

    pub fn new(span: DocSpan) -> LcsResult {
        LcsResult { span, length: span.len }
    }
}

/// Deepest node of the generalized suffix tree with leaves from at least `d` documents.
pub fn classic_lcs(c: &Corpus) -> LcsResult {
    let mut text = Vec::with_capacity(c.joined_len());
    let mut starts = Vec::with_capacity(c.m());
    for (j, doc) in c.docs().iter().enumerate() {
        starts.push(text.len());
        text.extend_from_slice(doc);
        text.push(c.sentinel(j));
    }
    let doc_of = |pos: usize| starts.partition_point(|&s| s <= pos) - 1;
    let tree = SuffixTree::build(text).expect("sentinels are unique");
    let mut scratch = HuiScratch::default();
    let counts = count_distinct_colors(
        &tree,
        |v| Some(doc_of(tree.suffix_start(v)) as u32),
        c.m(),
        &mut scratch,
    );
    let mut best: Option<(usize, u32)> = None;
    for &v in tree.preorder() {
        if tree.is_leaf(v) || counts[v as usize] < c.d() as u32 {
            continue;
        }
        let depth = tree.depth(v);
        if depth > 0 && best.is_none_or(|(b, _)| depth > b) {
            best = Some((depth, v));
        }
    }
    match best {
        None => LcsResult::EMPTY,
        Some((depth, v)) => {
            let w = tree.witness(v);
            let j = doc_of(w);
            LcsResult::new(DocSpan { doc: j + 1, start: w - starts[j] + 1, len: depth })
        }
    }
}

fn common_of_length(c: &Corpus, len: usize) -> Option<DocSpan> {
    let mut seen: FxHashMap<&[Symbol], (usize, usize)> = FxHashMap::default();
    for (j, doc) in c.docs().iter().enumerate() {
        if doc.len() < len {
            continue;
        }
        for (i, w) in doc.windows(len).enumerate() {
            let e = seen.entry(w).or_insert((usize::MAX, 0));
            if e.0 != j {
                e.0 = j;
                e.1 += 1;
                if e.1 >= c.d() {
                    return Some(DocSpan { doc: j + 1, start: i + 1, len });
                }
            }
        }
    }
    None
}

/// Binary search on the length with hash sets of all substrings of that length.
pub fn brute_force_lcs(c: &Corpus) -> LcsResult {
    let (mut lo, mut hi) = (0, c.docs().iter().map(Vec::len).max().unwrap_or(0));
    let mut best = LcsResult::EMPTY;
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        match common_of_length(c, mid) {
            Some(span) => {
                best = LcsResult::new(span);
                lo = mid;
            }
            None => hi = mid - 1,
        }
    }
    best
}

/// Whether all pairs `x, y` (including `x = y`) satisfy `x.0 != y.1` and `x.1 != y.0`.
pub fn element_bidistinctness(pairs: &[(u32, u32)]) -> bool {
    pairs.iter().all(|x| pairs.iter().all(|y| x.0 != y.1 && x.1 != y.0))
}

/// Element bidistinctness decided as "the two coordinate strings share no substring".
pub fn element_bidistinctness_via_lcs(pairs: &[(u32, u32)], tau: usize) -> Result<bool> {
    if pairs.is_empty() {
        return Ok(true);
    }
    let s: Vec<Symbol> = pairs.iter().map(|p| p.0).collect();
    let t: Vec<Symbol> = pairs.iter().map(|p| p.1).collect();
    let sigma = s.iter().chain(&t).copied().max().unwrap() + 1;
    let c = Corpus::new(vec![s, t], sigma, 2)?;
    let tau = tau.clamp(1, c.n());
    Ok(exact_lcs(&c, tau, &ExactOptions::default())?.length == 0)
}
