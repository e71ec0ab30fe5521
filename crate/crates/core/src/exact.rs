//! The O(tau)-space, O(n^2/tau)-time exact solver.
//!
//! A bracket `lo <= |LCS| <= hi < lo + tau` comes from the approximation.
//! Every window `S_k` of the window lists then gets its own suffix tree.
//! Substrings shared with an earlier window are excluded, since they were
//! already considered there. The remaining shared substrings of `S_k` with
//! each later window are marked, and batches of `tau` marked nodes get
//! their document counts from one pass over all windows.
//!
//! When `lo > 10 tau` the windows are too long for O(tau) trees. Each
//! string `S` is then replaced by `r_k(S)`, which swaps the first
//! occurrence of the anchor `Q_k` for a short stand-in `Q'_k`.

use std::collections::HashSet;

use crate::approx::{approximate_lcs, check_tau};
use crate::corpus::{build_window_lists, Corpus, ListMode, Symbol, Window, WindowIter, WindowLists};
use crate::error::{Error, Result};
use crate::matcher::{find_occurrences, shortest_period_capped, Occurrences};
use crate::oracle::LcsResult;
use crate::stree::{count_distinct_colors, ExclusionSet, HuiScratch, MarkedBatch, NodeRef, Overlay, SuffixTree};

/// Environment variable switching on the marked-label audit.
pub const LABEL_LOG_ENV: &str = "SUBLCS_DEBUG_LABEL_LOG";

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExactOptions {
    /// Record every marked label and fail if one is marked twice.
    pub audit_labels: bool,
}

impl ExactOptions {
    pub fn from_env() -> ExactOptions {
        ExactOptions {
            audit_labels: std::env::var(LABEL_LOG_ENV).is_ok_and(|v| v == "1"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactReport {
    pub result: LcsResult,
    pub lo: usize,
    pub hi: usize,
    pub mode: Option<ListMode>,
    pub windows: usize,
    pub batches: usize,
    pub marked: usize,
}

/// The symbols of a window in sorted order; everything else maps to one catch-all code.
#[derive(Debug, Clone, Default)]
pub struct LocalAlphabet {
    symbols: Vec<Symbol>,
}

impl LocalAlphabet {
    pub fn with_capacity(len: usize) -> LocalAlphabet {
        LocalAlphabet { symbols: Vec::with_capacity(len) }
    }

    pub fn rebuild(&mut self, w: impl IntoIterator<Item = Symbol>) {
        self.symbols.clear();
        self.symbols.extend(w);
        self.symbols.sort_unstable();
        self.symbols.dedup();
    }

    pub fn size(&self) -> usize {
        self.symbols.len()
    }

    pub fn code(&self, s: Symbol) -> Symbol {
        self.symbols.binary_search(&s).unwrap_or(self.symbols.len()) as Symbol
    }

    pub fn catch_all(&self) -> Symbol {
        self.symbols.len() as Symbol
    }

    /// Terminator of the window's own text.
    pub fn base_end(&self) -> Symbol {
        self.symbols.len() as Symbol + 1
    }

    /// Terminator of an added string.
    pub fn peer_end(&self) -> Symbol {
        self.symbols.len() as Symbol + 2
    }
}

pub fn remap_alphabet(w: &[Symbol]) -> LocalAlphabet {
    let mut a = LocalAlphabet::default();
    a.rebuild(w.iter().copied());
    a
}

/// The map `r_k` of one long window: `Q` is replaced by `Q'`.
///
/// `Q'` is the letter `#` when `per(Q) > 4 tau`, otherwise the prefix of
/// `Q` keeping the last partial period and `t'` full periods, `t'`
/// minimal with `|Q'| >= 8 tau`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Compressor<'a> {
    pub q: &'a [Symbol],
    pub per: Option<usize>,
    qp_len: usize,
    hash: Symbol,
    pub delta: usize,
}

pub fn make_compressor<'a>(sk: &'a [Symbol], ell: usize, tau: usize, hash: Symbol) -> Result<Compressor<'a>> {
    if tau == 0 || ell <= 10 * tau || sk.len() < ell {
        return Err(Error::InvalidParameter(format!(
            "compression needs ell > 10 tau and |S_k| >= ell, got ell = {ell}, tau = {tau}, |S_k| = {}",
            sk.len()
        )));
    }
    let q = &sk[2 * tau..ell];
    let per = shortest_period_capped(q, 4 * tau)?;
    let qp_len = match per {
        None => 1,
        Some(p) => {
            let rest = q.len() % p;
            (8 * tau - rest).div_ceil(p) * p + rest
        }
    };
    Ok(Compressor { q, per, qp_len, hash, delta: q.len() - qp_len })
}

impl<'a> Compressor<'a> {
    pub fn qp(&self) -> &[Symbol] {
        match self.per {
            Some(_) => &self.q[..self.qp_len],
            None => std::slice::from_ref(&self.hash),
        }
    }

    pub fn first_occurrence(&self, s: &[Symbol]) -> Option<usize> {
        find_occurrences(self.q, s).next()
    }

    /// `r_k(s)`; an empty vector stands for the empty string.
    pub fn apply_compression(&self, s: &[Symbol]) -> Vec<Symbol> {
        match self.first_occurrence(s) {
            None => Vec::new(),
            Some(p) => self.replace_at(s, p),
        }
    }

    /// `s` with the occurrence of `Q` at `p` replaced by `Q'`.
    pub fn replace_at(&self, s: &[Symbol], p: usize) -> Vec<Symbol> {
        let mut out = Vec::with_capacity(s.len() - self.delta);
        out.extend_from_slice(&s[..p]);
        out.extend_from_slice(self.qp());
        out.extend_from_slice(&s[p + self.q.len()..]);
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PeerForm {
    Plain,
    /// Compressed at this occurrence of `Q` (offset within the window).
    Compressed(usize),
    /// `r_k` of the window is empty.
    Empty,
}

/// The window list once more, with the first occurrence of `Q` in each
/// slice found by one matcher pass per document.
struct PeerStream<'c> {
    c: &'c Corpus,
    windows: WindowIter<'c>,
    q: Option<&'c [Symbol]>,
    doc: usize,
    occ: Option<Occurrences<'c, [Symbol], [Symbol]>>,
    look: Option<usize>,
}

impl<'c> PeerStream<'c> {
    fn new(lists: &WindowLists<'c>, q: Option<&'c [Symbol]>) -> PeerStream<'c> {
        PeerStream { c: lists.corpus(), windows: lists.iter(), q, doc: 0, occ: None, look: None }
    }
}

impl Iterator for PeerStream<'_> {
    type Item = (Window, PeerForm);

    fn next(&mut self) -> Option<(Window, PeerForm)> {
        let w = self.windows.next()?;
        let Some(q) = self.q else {
            return Some((w, PeerForm::Plain));
        };
        if w.doc != self.doc {
            self.doc = w.doc;
            let mut it = find_occurrences(q, self.c.doc(w.doc - 1));
            self.look = it.next();
            self.occ = Some(it);
        }
        while let Some(p) = self.look {
            if p >= w.start {
                break;
            }
            self.look = self.occ.as_mut().and_then(Iterator::next);
        }
        let form = match self.look {
            Some(p) if p + q.len() <= w.start + w.len => PeerForm::Compressed(p - w.start),
            _ => PeerForm::Empty,
        };
        Some((w, form))
    }
}

/// Encodes a peer window into `out` (terminator included) and records the
/// offsets where each of its documents begins. Returns false for an empty `r_k`.
fn encode_peer(
    c: &Corpus,
    alpha: &LocalAlphabet,
    comp: Option<&Compressor<'_>>,
    w: Window,
    form: PeerForm,
    out: &mut Vec<Symbol>,
    members: &mut Vec<usize>,
) -> bool {
    out.clear();
    members.clear();
    let code = |s: Symbol| if c.is_sentinel(s) { alpha.catch_all() } else { alpha.code(s) };
    match form {
        PeerForm::Empty => return false,
        PeerForm::Plain => {
            let mut last = usize::MAX;
            w.for_each_symbol(c, |s, j| {
                if j != last {
                    members.push(out.len());
                    last = j;
                }
                out.push(code(s));
            });
        }
        PeerForm::Compressed(p) => {
            let comp = comp.expect("compressed peer without compressor");
            let slice = &c.doc(w.doc - 1)[w.start..w.start + w.len];
            members.push(0);
            out.extend(slice[..p].iter().map(|&s| code(s)));
            out.extend(comp.qp().iter().map(|&s| code(s)));
            out.extend(slice[p + comp.q.len()..].iter().map(|&s| code(s)));
        }
    }
    out.push(alpha.peer_end());
    true
}

struct Engine<'c> {
    c: &'c Corpus,
    lists: WindowLists<'c>,
    tau: usize,
    hi: usize,
    best: LcsResult,
    comp: Option<Compressor<'c>>,
    window: Option<Window>,
    alpha: LocalAlphabet,
    raw: Vec<Symbol>,
    base: SuffixTree,
    excl: ExclusionSet,
    peer: Vec<Symbol>,
    members: Vec<usize>,
    ov: Overlay,
    flush_peer: Vec<Symbol>,
    flush_members: Vec<usize>,
    flush_ov: Overlay,
    hui: HuiScratch,
    batch: MarkedBatch,
    pending: Vec<(NodeRef, usize)>,
    order: Vec<u32>,
    loci: Vec<u32>,
    audit: Option<HashSet<Vec<Symbol>>>,
    windows: usize,
    batches: usize,
    marked: usize,
}

impl<'c> Engine<'c> {
    fn new(lists: WindowLists<'c>, hi: usize, best: LcsResult, opts: &ExactOptions) -> Engine<'c> {
        let tau = lists.tau;
        // bodies of bases and peers: whole windows, or compressed slices below 16 tau
        let body = match lists.mode {
            ListMode::Small => lists.max_window_len(),
            ListMode::General => 16 * tau,
        } + 1;
        let nodes = 2 * (2 * body) + 2;
        Engine {
            c: lists.corpus(),
            lists,
            tau,
            hi,
            best,
            comp: None,
            window: None,
            alpha: LocalAlphabet::with_capacity(body),
            raw: Vec::with_capacity(body),
            base: SuffixTree::with_capacity(body),
            excl: ExclusionSet::with_capacity(2 * body + 2),
            peer: Vec::with_capacity(body),
            members: Vec::with_capacity(body),
            ov: Overlay::with_capacity(body, body),
            flush_peer: Vec::with_capacity(body),
            flush_members: Vec::with_capacity(body),
            flush_ov: Overlay::with_capacity(body, body),
            hui: HuiScratch::with_capacity(nodes, body),
            batch: MarkedBatch::new(tau),
            pending: Vec::with_capacity(nodes),
            order: Vec::with_capacity(tau),
            loci: Vec::with_capacity(tau),
            audit: opts.audit_labels.then(HashSet::new),
            windows: 0,
            batches: 0,
            marked: 0,
        }
    }

    fn delta(&self) -> usize {
        self.comp.map_or(0, |x| x.delta)
    }

    /// Smallest tree depth still worth marking.
    fn min_depth(&self) -> usize {
        self.lists.ell.max(self.best.length + 1) - self.delta()
    }

    fn max_depth(&self) -> usize {
        self.hi - self.delta()
    }

    fn run(&mut self) -> Result<()> {
        for w in self.lists.iter() {
            self.windows += 1;
            self.process(w)?;
        }
        Ok(())
    }

    fn setup_base(&mut self, w: Window) -> Result<()> {
        let c = self.c;
        self.raw.clear();
        match self.lists.mode {
            ListMode::Small => {
                self.comp = None;
                w.for_each_symbol(c, |s, _| self.raw.push(s));
            }
            ListMode::General => {
                let slice = &c.doc(w.doc - 1)[w.start..w.start + w.len];
                let comp = make_compressor(slice, self.lists.ell, self.tau, c.hash_symbol())?;
                self.raw.extend_from_slice(&slice[..2 * self.tau]);
                self.raw.extend_from_slice(comp.qp());
                self.raw.extend_from_slice(&slice[self.lists.ell..]);
                self.comp = Some(comp);
            }
        }
        self.window = Some(w);
        self.alpha.rebuild(self.raw.iter().copied());
        let alpha = &self.alpha;
        self.base
            .rebuild_from(self.raw.iter().map(|&s| alpha.code(s)).chain(std::iter::once(alpha.base_end())));
        self.excl.reset(&self.base);
        Ok(())
    }

    fn process(&mut self, w: Window) -> Result<()> {
        self.setup_base(w)?;
        let peers = PeerStream::new(&self.lists, self.comp.map(|x| x.q));
        for (pw, form) in peers {
            if !encode_peer(self.c, &self.alpha, self.comp.as_ref(), pw, form, &mut self.peer, &mut self.members) {
                continue;
            }
            self.ov.add_string(&self.base, &self.peer);
            if pw.id < w.id {
                self.exclude_shared();
            } else {
                self.mark_shared()?;
            }
        }
        if !self.batch.is_empty() {
            self.flush()?;
        }
        Ok(())
    }

    fn exclude_shared(&mut self) {
        let t = self.ov.tree();
        for &u in t.preorder() {
            if t.is_leaf(u) || !self.ov.has_base(u) || !self.ov.has_peer(u) {
                continue;
            }
            if let Some(b) = self.ov.back_pointer(u) {
                self.excl.exclude_with_ancestors(&self.base, b);
            }
        }
    }

    fn mark_shared(&mut self) -> Result<()> {
        let (lo, hi) = (self.min_depth(), self.max_depth());
        self.pending.clear();
        let t = self.ov.tree();
        for &u in t.preorder() {
            let depth = t.depth(u);
            if t.is_leaf(u) || depth < lo || depth > hi {
                continue;
            }
            if let Some(b) = self.ov.back_pointer(u) {
                self.pending.push((b, depth));
            }
        }
        for i in 0..self.pending.len() {
            let (b, depth) = self.pending[i];
            if depth < self.min_depth() || self.batch.contains(b) || self.excl.is_excluded(&self.base, b) {
                continue;
            }
            if self.audit.is_some() {
                self.audit_label(b, depth)?;
            }
            self.batch.mark(b, depth);
            self.marked += 1;
            if self.batch.is_full() {
                self.flush()?;
            }
        }
        Ok(())
    }

    /// Original-coordinate occurrence of a base tree node of the given depth.
    fn resolve(&self, b: NodeRef, depth: usize) -> Result<crate::corpus::DocSpan> {
        let w = self.window.expect("no current window");
        let p = self.base.witness(b.node);
        w.resolve(self.c, p + 1, depth + self.delta())
    }

    fn audit_label(&mut self, b: NodeRef, depth: usize) -> Result<()> {
        let span = self.resolve(b, depth)?;
        let label = self.c.span_symbols(&span).to_vec();
        let log = self.audit.as_mut().unwrap();
        if !log.insert(label) {
            return Err(Error::Invariant(format!("label of {span} marked twice")));
        }
        Ok(())
    }

    fn flush(&mut self) -> Result<()> {
        self.batches += 1;
        let n_items = self.batch.len();
        self.order.clear();
        self.order.extend(0..n_items as u32);
        let items = self.batch.items();
        self.order.sort_unstable_by_key(|&i| items[i as usize].node);
        self.loci.clear();
        self.loci.resize(n_items, 0);

        let peers = PeerStream::new(&self.lists, self.comp.map(|x| x.q));
        for (pw, form) in peers {
            if !encode_peer(
                self.c,
                &self.alpha,
                self.comp.as_ref(),
                pw,
                form,
                &mut self.flush_peer,
                &mut self.flush_members,
            ) {
                continue;
            }
            let ov = &mut self.flush_ov;
            ov.add_string(&self.base, &self.flush_peer);
            let mut prev: Option<(u32, u32)> = None;
            for &i in &self.order {
                let r = self.batch.items()[i as usize].node;
                let from = match prev {
                    Some((node, u)) if node == r.node => u,
                    _ => ov.of_base(r.node),
                };
                let u = ov.climb(from, self.base.ref_depth(r));
                self.loci[i as usize] = u;
                prev = Some((r.node, u));
            }
            if pw.is_group() {
                let members = &self.flush_members;
                let body = self.flush_peer.len() - 1;
                let ov = &self.flush_ov;
                let color = |v: u32| {
                    let off = ov.peer_offset(v)?;
                    (off < body).then(|| (members.partition_point(|&s| s <= off) - 1) as u32)
                };
                let counts = count_distinct_colors(ov.tree(), color, members.len(), &mut self.hui);
                for (item, &u) in self.batch.items_mut().iter_mut().zip(&self.loci) {
                    item.count += counts[u as usize];
                }
            } else {
                for i in 0..n_items {
                    if self.flush_ov.has_peer(self.loci[i]) {
                        self.batch.credit(i, pw.doc as u32);
                    }
                }
            }
        }

        for i in 0..n_items {
            let item = self.batch.items()[i];
            if item.count as usize >= self.c.d() {
                let len = item.depth as usize + self.delta();
                if len > self.best.length {
                    let span = self.resolve(item.node, item.depth as usize)?;
                    self.best = LcsResult::new(span);
                }
                self.excl.exclude_with_ancestors(&self.base, item.node);
            } else {
                self.excl.exclude_with_descendants(&self.base, item.node);
            }
        }
        self.batch.clear();
        Ok(())
    }
}

/// Longest substring common to at least `d` documents in O(tau) words.
pub fn exact_lcs(c: &Corpus, tau: usize, opts: &ExactOptions) -> Result<LcsResult> {
    Ok(exact_lcs_report(c, tau, opts)?.result)
}

/// [`exact_lcs`] with run statistics.
pub fn exact_lcs_report(c: &Corpus, tau: usize, opts: &ExactOptions) -> Result<ExactReport> {
    check_tau(c, tau)?;
    let approx = approximate_lcs(c, tau)?;
    run(c, tau, approx.lo, approx.hi, LcsResult::new(approx.span), opts)
}

/// The exact search given a bracket `lo <= |LCS| <= hi` with `hi < lo + tau`.
pub fn exact_lcs_in_bracket(c: &Corpus, tau: usize, lo: usize, hi: usize, opts: &ExactOptions) -> Result<ExactReport> {
    check_tau(c, tau)?;
    if lo > hi || hi >= lo + tau {
        return Err(Error::InvalidParameter(format!(
            "bracket [{lo}, {hi}] must be non-empty and narrower than tau = {tau}"
        )));
    }
    run(c, tau, lo, hi, LcsResult::EMPTY, opts)
}

fn run(c: &Corpus, tau: usize, lo: usize, hi: usize, found: LcsResult, opts: &ExactOptions) -> Result<ExactReport> {
    let mut report = ExactReport { result: found, lo, hi, mode: None, windows: 0, batches: 0, marked: 0 };
    if hi == 0 || found.length == hi {
        return Ok(report);
    }
    let lists = build_window_lists(c, lo.max(1), tau)?;
    let mut engine = Engine::new(lists, hi, found, opts);
    engine.run()?;
    report.result = engine.best;
    report.mode = Some(lists.mode);
    report.windows = engine.windows;
    report.batches = engine.batches;
    report.marked = engine.marked;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcher::count_containing_documents;
    use crate::oracle::brute_force_lcs;
    use proptest::prelude::*;

    fn corpus(docs: &[&str], d: usize) -> Corpus {
        Corpus::from_bytes(docs.iter().map(|s| s.as_bytes()), d).unwrap()
    }

    fn audited() -> ExactOptions {
        ExactOptions { audit_labels: true }
    }

    fn check(c: &Corpus, tau: usize) {
        let truth = brute_force_lcs(c).length;
        let r = exact_lcs(c, tau, &audited()).unwrap();
        assert_eq!(r.length, truth, "tau = {tau}, docs = {:?}", c.docs());
        if r.length > 0 {
            assert!(count_containing_documents(c, c.span_symbols(&r.span)) >= c.d());
        }
    }

    #[test]
    fn examples() {
        let c = corpus(&["banana", "ananas"], 2);
        let r = exact_lcs(&c, 2, &audited()).unwrap();
        assert_eq!(r.length, 5);
        assert_eq!(c.span_symbols(&r.span), b"anana".map(|b| b as Symbol));
        let c = corpus(&["ab", "cd"], 2);
        assert_eq!(exact_lcs(&c, 1, &audited()).unwrap(), LcsResult::EMPTY);
        for tau in 1..=12 {
            check(&corpus(&["banana", "ananas"], 2), tau);
            check(&corpus(&["abab", "babc", "abca"], 2), tau);
        }
    }

    #[test]
    fn remap_examples() {
        let a = remap_alphabet(&[5, 900, 7]);
        assert_eq!((a.code(5), a.code(7), a.code(900), a.code(6)), (0, 1, 2, 3));
        assert_eq!(a.catch_all(), 3);
    }

    #[test]
    fn compressor_examples() {
        let hash = 1000;
        let mut sk = vec![9, 9];
        sk.extend([1; 10]);
        let comp = make_compressor(&sk, 12, 1, hash).unwrap();
        assert_eq!((comp.per, comp.qp().len(), comp.delta), (Some(1), 8, 2));
        let mut s = vec![7];
        s.extend([1; 10]);
        s.extend([7, 7]);
        let mut expect = vec![7];
        expect.extend([1; 8]);
        expect.extend([7, 7]);
        assert_eq!(comp.apply_compression(&s), expect);
        assert!(comp.apply_compression(&[7, 7, 7]).is_empty());
        assert_eq!(comp.apply_compression(comp.q), comp.qp());

        let mut sk = vec![9, 9];
        sk.extend(0..10);
        let comp = make_compressor(&sk, 12, 1, hash).unwrap();
        assert_eq!((comp.per, comp.qp(), comp.delta), (None, &[hash][..], 9));

        let mut sk = vec![9; 4];
        for _ in 0..9 {
            sk.extend([1, 2]);
        }
        let comp = make_compressor(&sk, 22, 2, hash).unwrap();
        assert_eq!((comp.per, comp.qp().len()), (Some(2), 16));
        assert!(make_compressor(&sk, 20, 2, hash).is_err());
    }

    #[test]
    fn long_periodic_documents() {
        // long LCS forces the compressed regime for small tau
        let a: Vec<u32> = (0..200).map(|i| (i % 3 == 0) as u32).collect();
        let mut b = vec![1, 1, 1];
        b.extend_from_slice(&a[17..190]);
        b.extend([0, 0, 0, 0]);
        let c = Corpus::new(vec![a.clone(), b, a[50..].to_vec()], 2, 2).unwrap();
        let truth = brute_force_lcs(&c).length;
        for tau in [1, 2, 3, 5, 8] {
            check(&c, tau);
            let lo = truth - (tau - 1) / 2;
            let rep = exact_lcs_in_bracket(&c, tau, lo, lo + tau - 1, &audited()).unwrap();
            assert_eq!(rep.result.length, truth, "tau {tau}");
            assert_eq!(rep.mode, Some(ListMode::General));
            assert!(rep.marked > 0);
        }
        let c = c.with_threshold(3).unwrap();
        for tau in [1, 2, 4] {
            check(&c, tau);
        }
    }

    fn check_brackets(c: &Corpus) {
        let truth = brute_force_lcs(c).length;
        for tau in 1..=c.n().min(12) {
            for below in 0..tau.min(truth + 1) {
                let lo = truth - below;
                let rep = exact_lcs_in_bracket(c, tau, lo, lo + tau - 1, &audited()).unwrap();
                assert_eq!(rep.result.length, truth, "tau {tau} lo {lo} docs {:?}", c.docs());
                if truth > 0 {
                    assert!(count_containing_documents(c, c.span_symbols(&rep.result.span)) >= c.d());
                }
            }
        }
    }

    #[test]
    fn bracket_examples() {
        check_brackets(&corpus(&["banana", "ananas"], 2));
        check_brackets(&corpus(&["abab", "babc", "abca"], 2));
        check_brackets(&corpus(&["ab", "cd", "ef"], 2));
        check_brackets(&corpus(&["aaaaaaaaaaaaaaaaaaaaaaaaaaaaaaab", "baaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaa", "zz"], 2));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn any_bracket_is_exact(
            docs in prop::collection::vec(prop::collection::vec(0u32..3, 0..60), 2..5),
            dsel in 0usize..10,
        ) {
            let m = docs.len();
            let c = Corpus::new(docs, 3, 2 + dsel % (m - 1)).unwrap();
            check_brackets(&c);
        }

        #[test]
        fn general_regime_on_repetitive_text(
            unit in prop::collection::vec(0u32..2, 1..6),
            reps in 10usize..40,
            cuts in prop::collection::vec((0usize..200, 0usize..200), 3),
            noise in prop::collection::vec(0u32..3, 0..10),
        ) {
            let base: Vec<u32> = unit.iter().cycle().take(unit.len() * reps).copied().collect();
            let docs: Vec<Vec<u32>> = cuts
                .iter()
                .map(|&(a, b)| {
                    let a = a % base.len();
                    let b = a + b % (base.len() - a + 1);
                    let mut d = base[a..b].to_vec();
                    d.extend(&noise);
                    d
                })
                .collect();
            let c = Corpus::new(docs, 3, 2).unwrap();
            check_brackets(&c);
        }

        #[test]
        fn matches_brute_force(
            docs in prop::collection::vec(prop::collection::vec(0u32..3, 0..40), 2..6),
            dsel in 0usize..10,
            tau_sel in 0usize..1000,
        ) {
            let m = docs.len();
            let d = 2 + dsel % (m - 1);
            let c = Corpus::new(docs, 3, d).unwrap();
            let tau = 1 + tau_sel % c.n().max(1);
            check(&c, tau);
        }

        #[test]
        fn planted_long_common_substring(
            secret in prop::collection::vec(0u32..2, 30..90),
            noise in prop::collection::vec(prop::collection::vec(0u32..4, 0..30), 3),
            tau in 1usize..5,
        ) {
            let docs: Vec<Vec<u32>> = noise
                .iter()
                .enumerate()
                .map(|(i, pre)| {
                    let mut d = pre.clone();
                    if i < 2 {
                        d.extend_from_slice(&secret);
                    }
                    d.extend(pre.iter().rev());
                    d
                })
                .collect();
            let c = Corpus::new(docs, 4, 2).unwrap();
            check(&c, tau);
        }

        #[test]
        fn compression_preserves_occurrence_positions(
            rho in prop::collection::vec(0u32..2, 1..5),
            reps in 8usize..20,
            pre in prop::collection::vec(0u32..3, 0..8),
            post in prop::collection::vec(0u32..3, 0..8),
            cut in 0usize..100,
        ) {
            let tau = 1;
            let q: Vec<u32> = rho.iter().cycle().take(rho.len() * reps).copied().collect();
            let mut sk = vec![2, 2];
            sk.extend(&q);
            let ell = sk.len();
            prop_assume!(ell > 10 * tau && q.len() >= 8 * tau);
            let comp = make_compressor(&sk, ell, tau, 9).unwrap();
            let mut s = pre.clone();
            s.extend(&q);
            s.extend(&post);
            s.truncate(q.len() + 4 * tau);
            prop_assume!(comp.first_occurrence(&s).is_some());
            let rs = comp.apply_compression(&s);
            // P: a substring of s containing Q
            let first = comp.first_occurrence(&s).unwrap();
            let a = cut % (first + 1);
            let p: Vec<u32> = s[a..].to_vec();
            let rp = comp.apply_compression(&p);
            prop_assert!(!rp.is_empty());
            for pos in 0..s.len() {
                let occ = s[pos..].starts_with(&p);
                let rocc = rs.len() >= pos && rs[pos..].starts_with(&rp);
                prop_assert_eq!(occ, rocc);
            }
        }
    }
}
