//! Constant-space decision procedure and the ternary search built on it.

use crate::corpus::{Corpus, DocSpan};
use crate::error::{Error, Result};
use crate::matcher::count_at_least;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
}

/// Answer of [`decide`]; a `Yes` carries a substring common to `d` documents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decision {
    pub verdict: Verdict,
    pub witness: Option<DocSpan>,
}

/// A common substring of length `lo` and the bracket `lo <= |LCS| <= hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ApproxResult {
    pub span: DocSpan,
    pub lo: usize,
    pub hi: usize,
}

/// Tests the length-`ell` substrings of the joined text starting at
/// multiples of `stride` and returns the first one common to `d` documents.
///
/// Windows crossing a sentinel occur in no document and are skipped. Finds
/// a witness whenever `|LCS| >= ell + stride - 1`.
fn scan(c: &Corpus, ell: usize, stride: usize) -> Option<DocSpan> {
    let mut doc = 0;
    let mut doc_start = 0;
    let mut pos = 0;
    while doc < c.m() {
        let len = c.doc(doc).len();
        // windows inside doc: starts in [doc_start, doc_start + len - ell]
        if pos > doc_start + len {
            doc_start += len + 1;
            doc += 1;
            continue;
        }
        if pos + ell <= doc_start + len {
            let off = pos - doc_start;
            let pattern = &c.doc(doc)[off..off + ell];
            if count_at_least(c, pattern, c.d()) >= c.d() {
                return Some(DocSpan { doc: doc + 1, start: off + 1, len: ell });
            }
            pos += stride;
        } else {
            // jump to the first multiple of stride in the next document
            let next = doc_start + len + 1;
            pos += (next.saturating_sub(pos)).div_ceil(stride) * stride;
        }
    }
    None
}

/// `Yes` if `|LCS| >= r`, `No` if `|LCS| < ell`, either answer in between.
pub fn decide(c: &Corpus, ell: usize, r: usize) -> Result<Decision> {
    if ell == 0 || ell >= r || r > c.n() {
        return Err(Error::InvalidParameter(format!(
            "decide needs 1 <= ell < r <= n, got ell = {ell}, r = {r}, n = {}",
            c.n()
        )));
    }
    Ok(match scan(c, ell, r - ell) {
        Some(w) => Decision { verdict: Verdict::Yes, witness: Some(w) },
        None => Decision { verdict: Verdict::No, witness: None },
    })
}

/// Common substring of length at least `|LCS| - tau + 1` in O(1) words.
pub fn approximate_lcs(c: &Corpus, tau: usize) -> Result<ApproxResult> {
    check_tau(c, tau)?;
    let mut lo = 0;
    let mut hi = c.docs().iter().map(Vec::len).max().unwrap_or(0);
    let mut span = DocSpan::EMPTY;
    while hi - lo + 1 > tau {
        let s = hi - lo + 1;
        let ell = lo + (s / 3).max(1);
        let top = (hi - 1).min((ell - 1).max(lo + (2 * s).div_ceil(3) - 1));
        // a No rules out every length >= ell + stride - 1 = top + 1
        match scan(c, ell, top + 2 - ell) {
            Some(w) => {
                lo = ell;
                span = w;
            }
            None => hi = top,
        }
    }
    Ok(ApproxResult { span, lo, hi })
}

pub(crate) fn check_tau(c: &Corpus, tau: usize) -> Result<()> {
    if tau == 0 || tau > c.n().max(1) {
        return Err(Error::InvalidParameter(format!(
            "tau must lie in [1, n] = [1, {}], got {tau}",
            c.n().max(1)
        )));
    }
    Ok(())
}
