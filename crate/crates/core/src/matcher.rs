//! Constant-workspace exact matching and the capped shortest-period test.
//!
//! The matcher is the Crochemore-Perrin two-way algorithm: a critical
//! factorization of the pattern is computed with two maximal-suffix scans,
//! after which the search keeps only a position and a memory counter.
//! Positions are 0-based.

use std::cmp;

use crate::corpus::{Corpus, Symbol};
use crate::error::{Error, Result};

/// Read-only random access to a sequence of symbols.
pub trait TextView {
    fn len(&self) -> usize;
    fn at(&self, i: usize) -> Symbol;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl TextView for [Symbol] {
    #[inline]
    fn len(&self) -> usize {
        <[Symbol]>::len(self)
    }
    #[inline]
    fn at(&self, i: usize) -> Symbol {
        self[i]
    }
}

impl TextView for Vec<Symbol> {
    #[inline]
    fn len(&self) -> usize {
        Vec::len(self)
    }
    #[inline]
    fn at(&self, i: usize) -> Symbol {
        self[i]
    }
}

impl<T: TextView + ?Sized> TextView for &T {
    #[inline]
    fn len(&self) -> usize {
        (**self).len()
    }
    #[inline]
    fn at(&self, i: usize) -> Symbol {
        (**self).at(i)
    }
}

/// The sentinel-joined string `T_1 $_1 T_2 $_2 ... T_m $_m`.
///
/// Keeps the document start offsets, so indexing costs a binary search over
/// the documents; the constant-space routines never build one of these.
pub struct JoinedView<'c> {
    corpus: &'c Corpus,
    starts: Vec<usize>,
}

impl<'c> JoinedView<'c> {
    pub fn new(corpus: &'c Corpus) -> Self {
        let mut starts = Vec::with_capacity(corpus.m());
        let mut pos = 0;
        for doc in corpus.docs() {
            starts.push(pos);
            pos += doc.len() + 1;
        }
        JoinedView { corpus, starts }
    }
}

impl TextView for JoinedView<'_> {
    fn len(&self) -> usize {
        self.corpus.joined_len()
    }

    fn at(&self, i: usize) -> Symbol {
        let j = self.starts.partition_point(|&s| s <= i) - 1;
        let off = i - self.starts[j];
        let doc = self.corpus.doc(j);
        if off < doc.len() {
            doc[off]
        } else {
            self.corpus.sentinel(j)
        }
    }
}

/// A view of `len` symbols of another view starting at `start`.
#[derive(Clone, Copy)]
pub struct SubView<'a, V: ?Sized> {
    inner: &'a V,
    start: usize,
    len: usize,
}

impl<'a, V: TextView + ?Sized> SubView<'a, V> {
    pub fn new(inner: &'a V, start: usize, len: usize) -> Self {
        assert!(start + len <= inner.len());
        SubView { inner, start, len }
    }
}

impl<V: TextView + ?Sized> TextView for SubView<'_, V> {
    #[inline]
    fn len(&self) -> usize {
        self.len
    }
    #[inline]
    fn at(&self, i: usize) -> Symbol {
        self.inner.at(self.start + i)
    }
}

/// Critical factorization of a pattern; O(1) words.
#[derive(Debug, Clone, Copy)]
pub struct TwoWay {
    crit_pos: usize,
    period: usize,
    long_period: bool,
}

impl TwoWay {
    pub fn new<P: TextView + ?Sized>(pattern: &P) -> TwoWay {
        let (crit_lt, per_lt) = maximal_suffix(pattern, false);
        let (crit_gt, per_gt) = maximal_suffix(pattern, true);
        let (crit_pos, period) = if crit_lt > crit_gt {
            (crit_lt, per_lt)
        } else {
            (crit_gt, per_gt)
        };
        let periodic = (0..crit_pos).all(|i| pattern.at(i) == pattern.at(i + period));
        if periodic {
            TwoWay { crit_pos, period, long_period: false }
        } else {
            TwoWay {
                crit_pos,
                period: cmp::max(crit_pos, pattern.len() - crit_pos) + 1,
                long_period: true,
            }
        }
    }

    pub fn search<'a, P, T>(self, pattern: &'a P, text: &'a T) -> Occurrences<'a, P, T>
    where
        P: TextView + ?Sized,
        T: TextView + ?Sized,
    {
        Occurrences {
            pattern,
            text,
            tw: self,
            position: 0,
            memory: 0,
        }
    }
}

// Returns (start of the maximal suffix, period of that suffix) under the
// normal or reversed symbol order.
fn maximal_suffix<P: TextView + ?Sized>(p: &P, order_greater: bool) -> (usize, usize) {
    let mut left = 0;
    let mut right = 1;
    let mut offset = 0;
    let mut period = 1;
    while right + offset < p.len() {
        let a = p.at(right + offset);
        let b = p.at(left + offset);
        if (a < b && !order_greater) || (a > b && order_greater) {
            right += offset + 1;
            offset = 0;
            period = right - left;
        } else if a == b {
            if offset + 1 == period {
                right += offset + 1;
                offset = 0;
            } else {
                offset += 1;
            }
        } else {
            left = right;
            right += 1;
            offset = 0;
            period = 1;
        }
    }
    (left, period)
}

/// Iterator over all (possibly overlapping) occurrences, ascending.
pub struct Occurrences<'a, P: ?Sized, T: ?Sized> {
    pattern: &'a P,
    text: &'a T,
    tw: TwoWay,
    position: usize,
    memory: usize,
}

impl<P, T> Iterator for Occurrences<'_, P, T>
where
    P: TextView + ?Sized,
    T: TextView + ?Sized,
{
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        let needle = self.pattern;
        let hay = self.text;
        let n = needle.len();
        if n == 0 {
            return None;
        }
        let TwoWay { crit_pos, period, long_period } = self.tw;
        'search: loop {
            if self.position + n > hay.len() {
                self.position = hay.len();
                return None;
            }
            let start = if long_period {
                crit_pos
            } else {
                cmp::max(crit_pos, self.memory)
            };
            for i in start..n {
                if needle.at(i) != hay.at(self.position + i) {
                    self.position += i - crit_pos + 1;
                    if !long_period {
                        self.memory = 0;
                    }
                    continue 'search;
                }
            }
            let start = if long_period { 0 } else { self.memory };
            for i in (start..crit_pos).rev() {
                if needle.at(i) != hay.at(self.position + i) {
                    self.position += period;
                    if !long_period {
                        self.memory = n - period;
                    }
                    continue 'search;
                }
            }
            let found = self.position;
            self.position += period;
            if !long_period {
                self.memory = n - period;
            }
            return Some(found);
        }
    }
}

/// All 0-based starts of `pattern` in `text`, yielded lazily.
pub fn find_occurrences<'a, P, T>(pattern: &'a P, text: &'a T) -> Occurrences<'a, P, T>
where
    P: TextView + ?Sized,
    T: TextView + ?Sized,
{
    TwoWay::new(pattern).search(pattern, text)
}

pub fn occurs_in<P, T>(tw: TwoWay, pattern: &P, text: &T) -> bool
where
    P: TextView + ?Sized,
    T: TextView + ?Sized,
{
    pattern.len() <= text.len() && tw.search(pattern, text).next().is_some()
}

/// Number of documents holding at least one occurrence of `pattern`.
pub fn count_containing_documents<P: TextView + ?Sized>(c: &Corpus, pattern: &P) -> usize {
    count_at_least(c, pattern, usize::MAX)
}

/// Like [`count_containing_documents`] but stops counting once `target` is reached.
pub fn count_at_least<P: TextView + ?Sized>(c: &Corpus, pattern: &P, target: usize) -> usize {
    if pattern.is_empty() {
        return c.m();
    }
    let tw = TwoWay::new(pattern);
    let mut count = 0;
    for doc in c.docs() {
        if occurs_in(tw, pattern, doc.as_slice()) {
            count += 1;
            if count >= target {
                break;
            }
        }
    }
    count
}

/// `Some(per(q))` when the shortest period of `q` is at most `cap`, else `None`.
///
/// Requires `|q| >= 2 cap`. Finds the second occurrence `p` of the first half
/// of `q` inside `q`; when `p <= cap` it only remains to check by direct
/// comparison that `q[..p]` is a period.
pub fn shortest_period_capped<Q: TextView + ?Sized>(q: &Q, cap: usize) -> Result<Option<usize>> {
    if q.is_empty() || q.len() < 2 * cap {
        return Err(Error::InvalidParameter(format!(
            "period cap {cap} needs a non-empty string of length >= {}, got {}",
            2 * cap,
            q.len()
        )));
    }
    if cap == 0 {
        return Ok(None);
    }
    let half = SubView::new(q, 0, q.len().div_ceil(2));
    let second = find_occurrences(&half, q).find(|&p| p > 0);
    match second {
        Some(p) if p <= cap => {
            let is_period = (0..q.len() - p).all(|i| q.at(i) == q.at(i + p));
            Ok(is_period.then_some(p))
        }
        _ => Ok(None),
    }
}
