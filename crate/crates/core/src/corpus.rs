//! Documents, sentinels and the window coordinates used by the exact solver.
//!
//! Symbols are plain `u32` values. The document alphabet is `[0, sigma)`;
//! document `j` (0-based) owns the sentinel `sigma + j` and the separator
//! letter used by the compression map is `sigma + m`. None of these reserved
//! values ever occurs inside a document.

use std::fmt;

use crate::error::{Error, Result};

pub type Symbol = u32;

/// A substring of the input, reported with 1-based document and offset.
///
/// The empty answer is `DocSpan { doc: 0, start: 0, len: 0 }`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct DocSpan {
    pub doc: usize,
    pub start: usize,
    pub len: usize,
}

impl DocSpan {
    pub const EMPTY: DocSpan = DocSpan { doc: 0, start: 0, len: 0 };

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}

impl fmt::Display for DocSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "<empty>")
        } else {
            write!(f, "T{}[{}..{}]", self.doc, self.start, self.start + self.len - 1)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    docs: Vec<Vec<Symbol>>,
    sigma: u32,
    d: usize,
    n: usize,
}

impl Corpus {
    pub fn new(docs: Vec<Vec<Symbol>>, sigma: u32, d: usize) -> Result<Corpus> {
        if docs.is_empty() {
            return Err(Error::EmptyInput);
        }
        let m = docs.len();
        if sigma == 0 || (sigma as u64) + (m as u64) + 1 > u32::MAX as u64 {
            return Err(Error::AlphabetTooLarge { sigma: sigma as u64, m });
        }
        for (j, doc) in docs.iter().enumerate() {
            if let Some(&s) = doc.iter().find(|&&s| s >= sigma) {
                return Err(Error::SymbolOutOfRange {
                    doc: j + 1,
                    symbol: s as u64,
                    sigma: sigma as u64,
                });
            }
        }
        if d < 2 || d > m {
            return Err(Error::BadThreshold { d, m });
        }
        let n = docs.iter().map(Vec::len).sum();
        Ok(Corpus { docs, sigma, d, n })
    }

    /// Byte documents over the full 256-letter alphabet.
    pub fn from_bytes<I, B>(docs: I, d: usize) -> Result<Corpus>
    where
        I: IntoIterator<Item = B>,
        B: AsRef<[u8]>,
    {
        let docs = docs
            .into_iter()
            .map(|b| b.as_ref().iter().map(|&x| x as Symbol).collect())
            .collect();
        Corpus::new(docs, 256, d)
    }

    /// Same documents, different threshold.
    pub fn with_threshold(&self, d: usize) -> Result<Corpus> {
        Corpus::new(self.docs.clone(), self.sigma, d)
    }

    pub fn m(&self) -> usize {
        self.docs.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn sigma(&self) -> u32 {
        self.sigma
    }

    /// Document `j`, 0-based.
    pub fn doc(&self, j: usize) -> &[Symbol] {
        &self.docs[j]
    }

    pub fn docs(&self) -> &[Vec<Symbol>] {
        &self.docs
    }

    pub fn sentinel(&self, j: usize) -> Symbol {
        self.sigma + j as Symbol
    }

    /// The separator letter `#`, outside the alphabet and distinct from every sentinel.
    pub fn hash_symbol(&self) -> Symbol {
        self.sigma + self.docs.len() as Symbol
    }

    pub fn is_sentinel(&self, s: Symbol) -> bool {
        s >= self.sigma && s < self.hash_symbol()
    }

    /// Length of the sentinel-joined string `T_1 $_1 ... T_m $_m`.
    pub fn joined_len(&self) -> usize {
        self.n + self.docs.len()
    }

    pub fn span_symbols(&self, span: &DocSpan) -> &[Symbol] {
        if span.is_empty() {
            return &[];
        }
        &self.docs[span.doc - 1][span.start - 1..span.start - 1 + span.len]
    }
}

/// How raw input bytes become symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphabetMode {
    /// Every byte is a symbol, sigma = 256.
    Byte,
    /// Whitespace-separated decimal integers, `|` separates documents.
    Decimal,
}

/// Raw input: either one stream per document or one stream with separators.
#[derive(Debug, Clone)]
pub enum Source {
    Documents(Vec<Vec<u8>>),
    /// A single stream split on the given byte (ignored in decimal mode, where `|` is used).
    Delimited(Vec<u8>, u8),
}

pub const DEFAULT_SEPARATOR: u8 = 0x1F;

pub fn load_corpus(source: Source, mode: AlphabetMode, d: usize) -> Result<Corpus> {
    let raw: Vec<Vec<Symbol>> = match (mode, source) {
        (AlphabetMode::Byte, Source::Documents(docs)) => docs
            .into_iter()
            .map(|b| b.into_iter().map(Symbol::from).collect())
            .collect(),
        (AlphabetMode::Byte, Source::Delimited(bytes, sep)) => split_records(&bytes, sep)
            .map(|b| b.iter().map(|&x| Symbol::from(x)).collect())
            .collect(),
        (AlphabetMode::Decimal, Source::Documents(docs)) => docs
            .iter()
            .map(|b| parse_tokens(b))
            .collect::<Result<_>>()?,
        (AlphabetMode::Decimal, Source::Delimited(bytes, _)) => split_records(&bytes, b'|')
            .map(parse_tokens)
            .collect::<Result<_>>()?,
    };
    if raw.is_empty() {
        return Err(Error::EmptyInput);
    }
    let sigma = match mode {
        AlphabetMode::Byte => 256,
        AlphabetMode::Decimal => raw
            .iter()
            .flatten()
            .max()
            .map_or(1, |&s| s.saturating_add(1)),
    };
    Corpus::new(raw, sigma, d)
}

// A trailing separator terminates the last record rather than opening an empty one.
fn split_records(bytes: &[u8], sep: u8) -> impl Iterator<Item = &[u8]> {
    let body = bytes.strip_suffix(&[sep]).unwrap_or(bytes);
    let empty = bytes.is_empty();
    body.split(move |&b| b == sep).filter(move |_| !empty)
}

fn parse_tokens(bytes: &[u8]) -> Result<Vec<Symbol>> {
    let text = std::str::from_utf8(bytes).map_err(|_| Error::BadToken {
        token: String::from_utf8_lossy(bytes).into_owned(),
    })?;
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<u64>()
                .ok()
                .filter(|&v| v < u32::MAX as u64)
                .map(|v| v as Symbol)
                .ok_or_else(|| Error::BadToken { token: tok.to_string() })
        })
        .collect()
}

/// Which list a window belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowKind {
    /// Short documents `first..end` (0-based, only those passing the length
    /// filter), each followed by its sentinel.
    ShortGroup { first: usize, end: usize },
    /// `T_doc[start..start+len]` followed by the document's sentinel.
    LongSlice,
}

/// One string of the window lists: a view into the corpus plus a sentinel.
///
/// `len` counts the body only; the full string is `len + 1` symbols long.
/// For slices `doc` is 1-based and `start` is a 0-based document offset;
/// groups use `doc = 0` and `start = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub id: usize,
    pub doc: usize,
    pub start: usize,
    pub len: usize,
    pub sentinel: Symbol,
    pub kind: WindowKind,
    min_len: usize,
    short_below: usize,
}

impl Window {
    pub fn long_slice(id: usize, c: &Corpus, doc: usize, start: usize, len: usize) -> Window {
        assert!(doc >= 1 && start + len <= c.doc(doc - 1).len());
        Window {
            id,
            doc,
            start,
            len,
            sentinel: c.sentinel(doc - 1),
            kind: WindowKind::LongSlice,
            min_len: 0,
            short_below: usize::MAX,
        }
    }

    fn group(c: &Corpus, id: usize, first: usize, end: usize, min_len: usize, short_below: usize) -> Window {
        let mut len = 0;
        let mut last = first;
        for j in first..end {
            let l = c.doc(j).len();
            if l >= min_len && l < short_below {
                len += l + 1;
                last = j;
            }
        }
        Window {
            id,
            doc: 0,
            start: 0,
            len: len - 1,
            sentinel: c.sentinel(last),
            kind: WindowKind::ShortGroup { first, end },
            min_len,
            short_below,
        }
    }

    pub fn full_len(&self) -> usize {
        self.len + 1
    }

    pub fn is_group(&self) -> bool {
        matches!(self.kind, WindowKind::ShortGroup { .. })
    }

    /// Documents of a group in order (0-based); a slice yields its single document.
    pub fn members<'c>(&self, c: &'c Corpus) -> impl Iterator<Item = usize> + 'c {
        let (range, min_len, below) = match self.kind {
            WindowKind::ShortGroup { first, end } => (first..end, self.min_len, self.short_below),
            WindowKind::LongSlice => (self.doc - 1..self.doc, 0, usize::MAX),
        };
        range.filter(move |&j| {
            let l = c.doc(j).len();
            l >= min_len && l < below
        })
    }

    /// Calls `f(symbol, doc)` for every body symbol, `doc` being the 0-based
    /// document the position belongs to (a sentinel belongs to its document).
    pub fn for_each_symbol(&self, c: &Corpus, mut f: impl FnMut(Symbol, usize)) {
        match self.kind {
            WindowKind::LongSlice => {
                let j = self.doc - 1;
                for &s in &c.doc(j)[self.start..self.start + self.len] {
                    f(s, j);
                }
            }
            WindowKind::ShortGroup { .. } => {
                let mut prev = None;
                for j in self.members(c) {
                    if let Some(p) = prev {
                        f(c.sentinel(p), p);
                    }
                    prev = Some(j);
                    for &s in c.doc(j) {
                        f(s, j);
                    }
                }
            }
        }
    }

    /// The full window string, sentinel included.
    pub fn to_symbols(&self, c: &Corpus) -> Vec<Symbol> {
        let mut out = Vec::with_capacity(self.full_len());
        self.for_each_symbol(c, |s, _| out.push(s));
        out.push(self.sentinel);
        out
    }

    /// Maps `len` symbols starting at 1-based `offset` of this window back
    /// to the document they were read from.
    pub fn resolve(&self, c: &Corpus, offset: usize, len: usize) -> Result<DocSpan> {
        let err = || Error::CrossesBoundary { window: self.id, offset, len };
        if len == 0 {
            return Ok(DocSpan::EMPTY);
        }
        if offset == 0 || offset - 1 + len > self.len {
            return Err(err());
        }
        match self.kind {
            WindowKind::LongSlice => Ok(DocSpan {
                doc: self.doc,
                start: self.start + offset,
                len,
            }),
            WindowKind::ShortGroup { .. } => {
                let mut pos = 0;
                for j in self.members(c) {
                    let l = c.doc(j).len();
                    // body of T_j covers [pos, pos + l), its sentinel sits at pos + l
                    if offset - 1 < pos + l {
                        if offset - 1 < pos || offset - 1 + len > pos + l {
                            return Err(err());
                        }
                        return Ok(DocSpan {
                            doc: j + 1,
                            start: offset - pos,
                            len,
                        });
                    }
                    pos += l + 1;
                }
                Err(err())
            }
        }
    }
}

/// The two processing regimes of the exact solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ListMode {
    /// `ell <= 10 tau`: short documents grouped, long ones sliced.
    Small,
    /// `ell > 10 tau`: only slices of documents of length at least `ell`.
    General,
}

impl ListMode {
    pub fn for_params(ell: usize, tau: usize) -> ListMode {
        if ell > 10 * tau {
            ListMode::General
        } else {
            ListMode::Small
        }
    }
}

/// The ordered window list, generated on the fly.
///
/// Groups of short documents come first, then the slices of every long
/// document at stride `tau`, each `ell + 2 tau` long except possibly the
/// last one of a document.
#[derive(Debug, Clone, Copy)]
pub struct WindowLists<'c> {
    corpus: &'c Corpus,
    pub ell: usize,
    pub tau: usize,
    pub mode: ListMode,
    min_len: usize,
    short_below: usize,
}

pub fn build_window_lists(c: &Corpus, ell: usize, tau: usize) -> Result<WindowLists<'_>> {
    if tau == 0 {
        return Err(Error::InvalidParameter("tau must be at least 1".into()));
    }
    if ell == 0 {
        return Err(Error::InvalidParameter("ell must be at least 1".into()));
    }
    Ok(WindowLists {
        corpus: c,
        ell,
        tau,
        mode: ListMode::for_params(ell, tau),
        min_len: ell,
        short_below: tau.max(ell),
    })
}

impl<'c> WindowLists<'c> {
    pub fn corpus(&self) -> &'c Corpus {
        self.corpus
    }

    pub fn slice_len(&self) -> usize {
        self.ell + 2 * self.tau
    }

    pub fn is_short(&self, len: usize) -> bool {
        len >= self.min_len && len < self.short_below
    }

    pub fn is_long(&self, len: usize) -> bool {
        len >= self.short_below
    }

    /// Upper bound on any window body length.
    pub fn max_window_len(&self) -> usize {
        // a group holds < 2 tau symbols from at most 2 tau documents
        self.slice_len().max(4 * self.tau)
    }

    pub fn iter(&self) -> WindowIter<'c> {
        WindowIter {
            lists: *self,
            next_id: 0,
            doc: 0,
            slice_start: None,
        }
    }

    /// Slice starts of one long document (0-based), in order.
    pub fn slices_of(&self, doc_len: usize) -> impl Iterator<Item = (usize, usize)> {
        let tau = self.tau;
        let width = self.slice_len();
        let mut start = 0;
        let mut done = !self.is_long(doc_len);
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let end = (start + width).min(doc_len);
            let item = (start, end - start);
            done = end == doc_len;
            start += tau;
            Some(item)
        })
    }
}

#[derive(Debug, Clone)]
pub struct WindowIter<'c> {
    lists: WindowLists<'c>,
    next_id: usize,
    // phase one walks groups, phase two (slice_start is Some) walks slices
    doc: usize,
    slice_start: Option<usize>,
}

impl<'c> Iterator for WindowIter<'c> {
    type Item = Window;

    fn next(&mut self) -> Option<Window> {
        let c = self.lists.corpus;
        let m = c.m();
        if self.slice_start.is_none() {
            let first = self.doc;
            let mut total = 0;
            let mut any = false;
            while self.doc < m {
                let l = c.doc(self.doc).len();
                self.doc += 1;
                if self.lists.is_short(l) {
                    any = true;
                    total += l;
                    if total >= self.lists.tau {
                        break;
                    }
                }
            }
            if any {
                let w = Window::group(
                    c,
                    self.next_id,
                    first,
                    self.doc,
                    self.lists.min_len,
                    self.lists.short_below,
                );
                self.next_id += 1;
                return Some(w);
            }
            self.doc = 0;
            self.slice_start = Some(0);
        }
        while self.doc < m {
            let doc_len = c.doc(self.doc).len();
            let start = self.slice_start.unwrap();
            if self.lists.is_long(doc_len) && start < doc_len {
                let end = (start + self.lists.slice_len()).min(doc_len);
                let w = Window::long_slice(self.next_id, c, self.doc + 1, start, end - start);
                self.next_id += 1;
                if end == doc_len {
                    self.doc += 1;
                    self.slice_start = Some(0);
                } else {
                    self.slice_start = Some(start + self.lists.tau);
                }
                return Some(w);
            }
            self.doc += 1;
            self.slice_start = Some(0);
        }
        None
    }
}
