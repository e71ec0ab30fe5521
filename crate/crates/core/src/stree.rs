//! Suffix trees of single windows and the machinery layered on them.
//!
//! A [`SuffixTree`] is built with Ukkonen's algorithm over an already
//! remapped integer text whose last symbol is unique. Children are found
//! through one hash table keyed by `(node, first symbol)`, so a tree costs
//! O(text) words whatever the alphabet. Every buffer is reusable: the exact
//! solver rebuilds trees thousands of times without reallocating.

use rustc_hash::{FxHashMap, FxHashSet};

use crate::corpus::Symbol;
use crate::error::{Error, Result};

pub type NodeId = u32;
pub const ROOT: NodeId = 0;
const NONE: u32 = u32::MAX;

#[inline]
fn key(node: NodeId, sym: Symbol) -> u64 {
    ((node as u64) << 32) | sym as u64
}

/// A node of the underlying trie: the edge entering explicit node `node`
/// and the distance `up` above its lower endpoint. `up == 0` is the
/// explicit node itself; `up` is always smaller than the edge length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeRef {
    pub node: NodeId,
    pub up: u32,
}

impl NodeRef {
    pub const ROOT: NodeRef = NodeRef { node: ROOT, up: 0 };

    pub fn explicit(node: NodeId) -> NodeRef {
        NodeRef { node, up: 0 }
    }
}

#[derive(Debug, Default, Clone)]
pub struct SuffixTree {
    text: Vec<Symbol>,
    start: Vec<u32>,
    end: Vec<u32>,
    parent: Vec<u32>,
    link: Vec<u32>,
    depth: Vec<u32>,
    witness: Vec<u32>,
    first_child: Vec<u32>,
    next_sibling: Vec<u32>,
    preorder: Vec<u32>,
    children: FxHashMap<u64, u32>,
    stack: Vec<u32>,
}

impl SuffixTree {
    /// Builds the tree of `text`; the last symbol must not occur elsewhere.
    pub fn build(text: Vec<Symbol>) -> Result<SuffixTree> {
        match text.split_last() {
            None => return Err(Error::InvalidParameter("empty text".into())),
            Some((last, rest)) if rest.contains(last) => {
                return Err(Error::InvalidParameter("text must end with a unique terminator".into()))
            }
            _ => {}
        }
        let mut t = SuffixTree::default();
        t.rebuild_from(text);
        Ok(t)
    }

    /// An empty tree with room for texts of up to `len` symbols.
    pub fn with_capacity(len: usize) -> SuffixTree {
        let nodes = 2 * len + 2;
        SuffixTree {
            text: Vec::with_capacity(len),
            start: Vec::with_capacity(nodes),
            end: Vec::with_capacity(nodes),
            parent: Vec::with_capacity(nodes),
            link: Vec::with_capacity(nodes),
            depth: Vec::with_capacity(nodes),
            witness: Vec::with_capacity(nodes),
            first_child: Vec::with_capacity(nodes),
            next_sibling: Vec::with_capacity(nodes),
            preorder: Vec::with_capacity(nodes),
            children: FxHashMap::with_capacity_and_hasher(nodes, Default::default()),
            stack: Vec::with_capacity(nodes),
        }
    }

    /// Replaces the tree by the tree of `text`, keeping allocations.
    pub fn rebuild_from(&mut self, text: impl IntoIterator<Item = Symbol>) {
        self.text.clear();
        self.text.extend(text);
        self.construct();
    }

    fn clear_nodes(&mut self) {
        self.start.clear();
        self.end.clear();
        self.parent.clear();
        self.link.clear();
        self.depth.clear();
        self.witness.clear();
        self.first_child.clear();
        self.next_sibling.clear();
        self.preorder.clear();
        self.children.clear();
    }

    fn new_node(&mut self, start: u32, end: u32, parent: u32) -> NodeId {
        let id = self.start.len() as NodeId;
        self.start.push(start);
        self.end.push(end);
        self.parent.push(parent);
        self.link.push(ROOT);
        id
    }

    fn construct(&mut self) {
        self.clear_nodes();
        let n = self.text.len();
        debug_assert!(n > 0);
        self.new_node(0, 0, NONE);
        let (mut active_node, mut active_edge, mut active_len) = (ROOT, 0usize, 0usize);
        let mut remainder = 0usize;
        for i in 0..n {
            let c = self.text[i];
            remainder += 1;
            let mut last_new = NONE;
            while remainder > 0 {
                if active_len == 0 {
                    active_edge = i;
                }
                let ec = self.text[active_edge];
                match self.children.get(&key(active_node, ec)).copied() {
                    None => {
                        let leaf = self.new_node(i as u32, NONE, active_node);
                        self.children.insert(key(active_node, ec), leaf);
                        if last_new != NONE {
                            self.link[last_new as usize] = active_node;
                            last_new = NONE;
                        }
                    }
                    Some(next) => {
                        let nx = next as usize;
                        let edge_end = (self.end[nx] as usize).min(i + 1);
                        let edge_len = edge_end - self.start[nx] as usize;
                        if active_len >= edge_len {
                            active_edge += edge_len;
                            active_len -= edge_len;
                            active_node = next;
                            continue;
                        }
                        if self.text[self.start[nx] as usize + active_len] == c {
                            if last_new != NONE && active_node != ROOT {
                                self.link[last_new as usize] = active_node;
                            }
                            active_len += 1;
                            break;
                        }
                        let split = self.start[nx];
                        let mid = self.new_node(split, split + active_len as u32, active_node);
                        self.children.insert(key(active_node, ec), mid);
                        let leaf = self.new_node(i as u32, NONE, mid);
                        self.children.insert(key(mid, c), leaf);
                        self.start[nx] += active_len as u32;
                        self.parent[nx] = mid;
                        let tail = self.text[self.start[nx] as usize];
                        self.children.insert(key(mid, tail), next);
                        if last_new != NONE {
                            self.link[last_new as usize] = mid;
                        }
                        last_new = mid;
                    }
                }
                remainder -= 1;
                if active_node == ROOT && active_len > 0 {
                    active_len -= 1;
                    active_edge = i + 1 - remainder;
                } else if active_node != ROOT {
                    active_node = self.link[active_node as usize];
                }
            }
        }
        self.finish();
    }

    fn finish(&mut self) {
        let n = self.text.len() as u32;
        let count = self.start.len();
        for e in self.end.iter_mut() {
            if *e == NONE {
                *e = n;
            }
        }
        self.first_child.resize(count, NONE);
        self.next_sibling.resize(count, NONE);
        // push-front in reverse id order leaves children in creation order
        for v in (1..count).rev() {
            let p = self.parent[v] as usize;
            self.next_sibling[v] = self.first_child[p];
            self.first_child[p] = v as u32;
        }
        self.depth.resize(count, 0);
        self.witness.resize(count, 0);
        self.stack.clear();
        self.stack.push(ROOT);
        while let Some(v) = self.stack.pop() {
            self.preorder.push(v);
            let mut c = self.first_child[v as usize];
            while c != NONE {
                let cu = c as usize;
                self.depth[cu] = self.depth[v as usize] + self.end[cu] - self.start[cu];
                self.stack.push(c);
                c = self.next_sibling[cu];
            }
        }
        for idx in (0..self.preorder.len()).rev() {
            let v = self.preorder[idx] as usize;
            let fc = self.first_child[v];
            self.witness[v] = if fc == NONE {
                n - self.depth[v]
            } else {
                self.witness[fc as usize]
            };
        }
    }

    pub fn text(&self) -> &[Symbol] {
        &self.text
    }

    pub fn node_count(&self) -> usize {
        self.start.len()
    }

    pub fn leaf_count(&self) -> usize {
        self.text.len()
    }

    pub fn is_leaf(&self, v: NodeId) -> bool {
        self.first_child[v as usize] == NONE
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        let p = self.parent[v as usize];
        (p != NONE).then_some(p)
    }

    /// String depth of the explicit node.
    pub fn depth(&self, v: NodeId) -> usize {
        self.depth[v as usize] as usize
    }

    pub fn edge_len(&self, v: NodeId) -> usize {
        (self.end[v as usize] - self.start[v as usize]) as usize
    }

    pub fn edge_label(&self, v: NodeId) -> &[Symbol] {
        &self.text[self.start[v as usize] as usize..self.end[v as usize] as usize]
    }

    /// Start of some suffix whose leaf lies below `v`.
    pub fn witness(&self, v: NodeId) -> usize {
        self.witness[v as usize] as usize
    }

    /// Suffix start of a leaf.
    pub fn suffix_start(&self, leaf: NodeId) -> usize {
        debug_assert!(self.is_leaf(leaf));
        self.text.len() - self.depth(leaf)
    }

    pub fn child(&self, v: NodeId, sym: Symbol) -> Option<NodeId> {
        self.children.get(&key(v, sym)).copied()
    }

    pub fn children(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        let mut c = self.first_child[v as usize];
        std::iter::from_fn(move || {
            (c != NONE).then(|| {
                let cur = c;
                c = self.next_sibling[cur as usize];
                cur
            })
        })
    }

    /// Explicit nodes, parents before children.
    pub fn preorder(&self) -> &[NodeId] {
        &self.preorder
    }

    pub fn ref_depth(&self, r: NodeRef) -> usize {
        self.depth(r.node) - r.up as usize
    }

    pub fn label(&self, r: NodeRef) -> &[Symbol] {
        let w = self.witness(r.node);
        &self.text[w..w + self.ref_depth(r)]
    }

    /// The trie node spelling `pattern`, if `pattern` is a substring of the text.
    pub fn locate(&self, pattern: &[Symbol]) -> Option<NodeRef> {
        let mut v = ROOT;
        let mut matched = 0;
        while matched < pattern.len() {
            let c = self.child(v, pattern[matched])?;
            let label = self.edge_label(c);
            let take = label.len().min(pattern.len() - matched);
            if label[..take] != pattern[matched..matched + take] {
                return None;
            }
            matched += take;
            if take < label.len() {
                return Some(NodeRef { node: c, up: (label.len() - take) as u32 });
            }
            v = c;
        }
        Some(NodeRef::explicit(v))
    }

    /// Every trie node of the tree (explicit and implicit), root first.
    pub fn all_refs(&self) -> impl Iterator<Item = NodeRef> + '_ {
        std::iter::once(NodeRef::ROOT).chain(
            self.preorder[1..]
                .iter()
                .flat_map(move |&v| (0..self.edge_len(v) as u32).map(move |up| NodeRef { node: v, up })),
        )
    }

    /// Textual dump for golden tests: one line per explicit node in
    /// lexicographic preorder, `id parent depth label`, with nodes
    /// renumbered in output order.
    pub fn export(&self, fmt_symbol: impl Fn(Symbol) -> String) -> String {
        let mut out = String::new();
        let mut ids = vec![NONE; self.node_count()];
        let mut stack = vec![ROOT];
        let mut next = 0u32;
        while let Some(v) = stack.pop() {
            ids[v as usize] = next;
            next += 1;
            let parent = self.parent(v).map_or("-".to_string(), |p| ids[p as usize].to_string());
            let label: Vec<String> = self.edge_label(v).iter().map(|&s| fmt_symbol(s)).collect();
            out.push_str(&format!("{} {} {} {}\n", ids[v as usize], parent, self.depth(v), label.join("")));
            let mut kids: Vec<NodeId> = self.children(v).collect();
            kids.sort_by_key(|&c| std::cmp::Reverse(self.text[self.start[c as usize] as usize]));
            stack.extend(kids);
        }
        out
    }
}

/// Tree shape as needed by [`count_distinct_colors`].
pub trait Topology {
    fn node_count(&self) -> usize;
    fn root(&self) -> u32;
    fn first_child(&self, v: u32) -> Option<u32>;
    fn next_sibling(&self, v: u32) -> Option<u32>;
}

impl Topology for SuffixTree {
    fn node_count(&self) -> usize {
        self.start.len()
    }
    fn root(&self) -> u32 {
        ROOT
    }
    fn first_child(&self, v: u32) -> Option<u32> {
        let c = self.first_child[v as usize];
        (c != NONE).then_some(c)
    }
    fn next_sibling(&self, v: u32) -> Option<u32> {
        let s = self.next_sibling[v as usize];
        (s != NONE).then_some(s)
    }
}

/// A plain rooted tree given by parent links.
#[derive(Debug, Clone)]
pub struct PlainTree {
    root: u32,
    first_child: Vec<u32>,
    next_sibling: Vec<u32>,
}

impl PlainTree {
    /// `parents[v]` is `None` for exactly one node, the root.
    pub fn from_parents(parents: &[Option<u32>]) -> PlainTree {
        let n = parents.len();
        let mut first_child = vec![NONE; n];
        let mut next_sibling = vec![NONE; n];
        let mut root = NONE;
        for v in (0..n).rev() {
            match parents[v] {
                Some(p) => {
                    next_sibling[v] = first_child[p as usize];
                    first_child[p as usize] = v as u32;
                }
                None => root = v as u32,
            }
        }
        assert!(root != NONE, "tree without root");
        PlainTree { root, first_child, next_sibling }
    }
}

impl Topology for PlainTree {
    fn node_count(&self) -> usize {
        self.first_child.len()
    }
    fn root(&self) -> u32 {
        self.root
    }
    fn first_child(&self, v: u32) -> Option<u32> {
        let c = self.first_child[v as usize];
        (c != NONE).then_some(c)
    }
    fn next_sibling(&self, v: u32) -> Option<u32> {
        let s = self.next_sibling[v as usize];
        (s != NONE).then_some(s)
    }
}

/// Reusable buffers for [`count_distinct_colors`].
#[derive(Debug, Default, Clone)]
pub struct HuiScratch {
    counts: Vec<u32>,
    uf: Vec<u32>,
    parent: Vec<u32>,
    last: Vec<u32>,
    stack: Vec<(u32, bool)>,
    post: Vec<u32>,
}

impl HuiScratch {
    pub fn with_capacity(nodes: usize, colors: usize) -> HuiScratch {
        HuiScratch {
            counts: Vec::with_capacity(nodes),
            uf: Vec::with_capacity(nodes),
            parent: Vec::with_capacity(nodes),
            last: Vec::with_capacity(colors),
            stack: Vec::with_capacity(nodes),
            post: Vec::with_capacity(nodes),
        }
    }
}

fn find(uf: &mut [u32], mut x: u32) -> u32 {
    while uf[x as usize] != x {
        let p = uf[x as usize];
        uf[x as usize] = uf[p as usize];
        x = p;
    }
    x
}

/// Number of distinct leaf colors below every node (Hui's method).
///
/// Each leaf counts once for its color; visiting colored leaves in DFS
/// order, the lowest common ancestor of two consecutive leaves of the same
/// color gets a correction of minus one. Summing bottom-up leaves exact
/// counts. The LCAs are answered offline with a union-find over finished
/// subtrees. `color(v)` is consulted for leaves only and must be `< colors`.
pub fn count_distinct_colors<'s, T: Topology>(
    tree: &T,
    color: impl Fn(u32) -> Option<u32>,
    colors: usize,
    scratch: &'s mut HuiScratch,
) -> &'s [u32] {
    let n = tree.node_count();
    let HuiScratch { counts, uf, parent, last, stack, post } = scratch;
    counts.clear();
    counts.resize(n, 0);
    uf.clear();
    uf.extend(0..n as u32);
    parent.clear();
    parent.resize(n, NONE);
    last.clear();
    last.resize(colors, NONE);
    post.clear();
    stack.clear();
    stack.push((tree.root(), false));
    while let Some(&(v, entered)) = stack.last() {
        if !entered {
            stack.last_mut().unwrap().1 = true;
            match tree.first_child(v) {
                Some(c) => {
                    parent[c as usize] = v;
                    stack.push((c, false));
                    continue;
                }
                None => {
                    if let Some(col) = color(v) {
                        let col = col as usize;
                        counts[v as usize] = counts[v as usize].wrapping_add(1);
                        if last[col] != NONE {
                            let lca = find(uf, last[col]);
                            counts[lca as usize] = counts[lca as usize].wrapping_sub(1);
                        }
                        last[col] = v;
                    }
                }
            }
        }
        stack.pop();
        post.push(v);
        if let Some(&(p, _)) = stack.last() {
            uf[v as usize] = p;
            if let Some(s) = tree.next_sibling(v) {
                parent[s as usize] = p;
                stack.push((s, false));
            }
        }
    }
    for &v in post.iter() {
        let p = parent[v as usize];
        if p != NONE {
            counts[p as usize] = counts[p as usize].wrapping_add(counts[v as usize]);
        }
    }
    counts
}

/// Generalized suffix tree of a base text and one added string.
///
/// Every overlay node whose label is a substring of the base text points
/// back to the base node spelling the same string. Buffers are kept
/// between uses; [`Overlay::add_string`] discards the previous contents.
#[derive(Debug, Default, Clone)]
pub struct Overlay {
    tree: SuffixTree,
    base_len: usize,
    back: Vec<NodeRef>,
    of_base: Vec<u32>,
    flags: Vec<u8>,
}

const HAS_BASE: u8 = 1;
const HAS_PEER: u8 = 2;

impl Overlay {
    pub fn with_capacity(base_len: usize, peer_len: usize) -> Overlay {
        let nodes = 2 * (base_len + peer_len) + 2;
        Overlay {
            tree: SuffixTree::with_capacity(base_len + peer_len),
            base_len: 0,
            back: Vec::with_capacity(nodes),
            of_base: Vec::with_capacity(2 * base_len + 2),
            flags: Vec::with_capacity(nodes),
        }
    }

    /// Builds the generalized tree of `base.text()` followed by `peer`.
    ///
    /// `peer` must end with a terminator that occurs nowhere else, and must
    /// not contain the base terminator.
    pub fn add_string(&mut self, base: &SuffixTree, peer: &[Symbol]) {
        let bt = base.text();
        self.base_len = bt.len();
        self.tree.rebuild_from(bt.iter().chain(peer).copied());
        let t = &self.tree;
        let count = t.node_count();
        let total = t.text().len();

        self.flags.clear();
        self.flags.resize(count, 0);
        for &v in t.preorder().iter().rev() {
            let f = if t.is_leaf(v) {
                let s = t.suffix_start(v);
                if s < self.base_len {
                    HAS_BASE
                } else if s + 1 < total {
                    HAS_PEER
                } else {
                    0
                }
            } else {
                t.children(v).fold(0, |acc, c| acc | self.flags[c as usize])
            };
            self.flags[v as usize] = f;
        }

        self.back.clear();
        self.back.resize(count, NodeRef { node: NONE, up: 0 });
        self.of_base.clear();
        self.of_base.resize(base.node_count(), NONE);
        self.back[ROOT as usize] = NodeRef::ROOT;
        self.of_base[ROOT as usize] = ROOT;
        for &u in &t.preorder()[1..] {
            if self.flags[u as usize] & HAS_BASE == 0 {
                continue;
            }
            let p = t.parent(u).unwrap();
            let NodeRef { node: bn, up } = self.back[p as usize];
            let len = t.edge_len(u) as u32;
            let target = if up == 0 {
                let first = t.edge_label(u)[0];
                let bc = base.child(bn, first).expect("overlay edge leaves the base tree");
                let blen = base.edge_len(bc) as u32;
                NodeRef { node: bc, up: blen.saturating_sub(len) }
            } else {
                NodeRef { node: bn, up: up.saturating_sub(len) }
            };
            debug_assert!(len <= target.up + len || base.is_leaf(target.node));
            if target.up == 0 {
                self.of_base[target.node as usize] = u;
            }
            self.back[u as usize] = target;
        }
    }

    pub fn tree(&self) -> &SuffixTree {
        &self.tree
    }

    pub fn base_len(&self) -> usize {
        self.base_len
    }

    /// Base node with the same label, when that label is a substring of the base.
    pub fn back_pointer(&self, u: NodeId) -> Option<NodeRef> {
        let b = self.back[u as usize];
        (b.node != NONE).then_some(b)
    }

    pub fn has_base(&self, u: NodeId) -> bool {
        self.flags[u as usize] & HAS_BASE != 0
    }

    /// Whether some suffix of the added string (other than its bare terminator) lies below `u`.
    pub fn has_peer(&self, u: NodeId) -> bool {
        self.flags[u as usize] & HAS_PEER != 0
    }

    /// Offset into the added string of a leaf's suffix, `None` for base leaves.
    pub fn peer_offset(&self, leaf: NodeId) -> Option<usize> {
        let s = self.tree.suffix_start(leaf);
        (s >= self.base_len).then(|| s - self.base_len)
    }

    /// The overlay node counterpart of an explicit base node.
    pub fn of_base(&self, base_node: NodeId) -> NodeId {
        self.of_base[base_node as usize]
    }

    /// Climbs from overlay node `u` to its highest ancestor still at string depth `>= depth`.
    pub fn climb(&self, mut u: NodeId, depth: usize) -> NodeId {
        while let Some(p) = self.tree.parent(u) {
            if self.tree.depth(p) < depth {
                break;
            }
            u = p;
        }
        u
    }

    /// The overlay node whose subtree holds exactly the suffixes starting with `label(v)`.
    pub fn locus(&self, base: &SuffixTree, v: NodeRef) -> NodeId {
        self.climb(self.of_base(v.node), base.ref_depth(v))
    }
}

/// Per-edge intervals of nodes still open for candidacy.
///
/// On the edge entering node `v` the trie nodes have depths
/// `depth(parent(v)) + 1 ..= depth(v)`; those at depth `<= lo[v]` were
/// excluded together with their ancestors and those at depth `>= hi[v]`
/// together with their descendants. Both closures are propagated eagerly
/// but stop at the first edge already closed, so each edge is closed at
/// most once from each side.
#[derive(Debug, Default, Clone)]
pub struct ExclusionSet {
    lo: Vec<u32>,
    hi: Vec<u32>,
    root_excluded: bool,
    stack: Vec<u32>,
}

impl ExclusionSet {
    pub fn with_capacity(nodes: usize) -> ExclusionSet {
        ExclusionSet {
            lo: Vec::with_capacity(nodes),
            hi: Vec::with_capacity(nodes),
            root_excluded: false,
            stack: Vec::with_capacity(nodes),
        }
    }

    pub fn new(tree: &SuffixTree) -> ExclusionSet {
        let mut x = ExclusionSet::default();
        x.reset(tree);
        x
    }

    /// Forgets all exclusions and resizes for `tree`.
    pub fn reset(&mut self, tree: &SuffixTree) {
        let n = tree.node_count();
        self.lo.clear();
        self.lo.extend((0..n as u32).map(|v| tree.parent(v).map_or(0, |p| tree.depth(p) as u32)));
        self.hi.clear();
        self.hi.resize(n, u32::MAX);
        self.root_excluded = false;
    }

    pub fn is_excluded(&self, tree: &SuffixTree, v: NodeRef) -> bool {
        if v.node == ROOT {
            return self.root_excluded;
        }
        let d = tree.ref_depth(v) as u32;
        d <= self.lo[v.node as usize] || d >= self.hi[v.node as usize]
    }

    pub fn exclude_with_ancestors(&mut self, tree: &SuffixTree, v: NodeRef) {
        self.root_excluded = true;
        if v.node == ROOT {
            return;
        }
        let mut node = v.node;
        let mut d = tree.ref_depth(v) as u32;
        loop {
            if self.lo[node as usize] >= d {
                break;
            }
            self.lo[node as usize] = d;
            match tree.parent(node) {
                Some(p) if p != ROOT => {
                    node = p;
                    d = tree.depth(p) as u32;
                }
                _ => break,
            }
        }
    }

    pub fn exclude_with_descendants(&mut self, tree: &SuffixTree, v: NodeRef) {
        self.stack.clear();
        if v.node == ROOT {
            self.root_excluded = true;
            self.stack.extend(tree.children(ROOT));
        } else {
            let d = tree.ref_depth(v) as u32;
            let h = &mut self.hi[v.node as usize];
            if *h <= d {
                return;
            }
            *h = d;
            self.stack.extend(tree.children(v.node));
        }
        while let Some(c) = self.stack.pop() {
            let top = tree.depth(tree.parent(c).unwrap()) as u32 + 1;
            if self.hi[c as usize] <= top {
                continue;
            }
            self.hi[c as usize] = top;
            self.stack.extend(tree.children(c));
        }
    }
}

/// A marked trie node with its document counter `count` and the last
/// document `last_doc` that incremented it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Marked {
    pub node: NodeRef,
    pub depth: u32,
    pub count: u32,
    pub last_doc: u32,
}

/// At most `capacity` distinct marked nodes awaiting their document counts.
#[derive(Debug, Clone)]
pub struct MarkedBatch {
    items: Vec<Marked>,
    seen: FxHashSet<NodeRef>,
    capacity: usize,
}

impl MarkedBatch {
    pub fn new(capacity: usize) -> MarkedBatch {
        assert!(capacity > 0);
        MarkedBatch {
            items: Vec::with_capacity(capacity),
            seen: FxHashSet::with_capacity_and_hasher(capacity, Default::default()),
            capacity,
        }
    }

    /// Marks `node` unless it is already in the batch; returns whether it was added.
    pub fn mark(&mut self, node: NodeRef, depth: usize) -> bool {
        assert!(!self.is_full(), "marking into a full batch");
        if !self.seen.insert(node) {
            return false;
        }
        self.items.push(Marked { node, depth: depth as u32, count: 0, last_doc: NONE });
        true
    }

    pub fn contains(&self, node: NodeRef) -> bool {
        self.seen.contains(&node)
    }

    pub fn is_full(&self) -> bool {
        self.items.len() >= self.capacity
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn items(&self) -> &[Marked] {
        &self.items
    }

    pub fn items_mut(&mut self) -> &mut [Marked] {
        &mut self.items
    }

    /// Adds one to the counter unless `doc` already did.
    pub fn credit(&mut self, idx: usize, doc: u32) {
        let m = &mut self.items[idx];
        if m.last_doc != doc {
            m.last_doc = doc;
            m.count += 1;
        }
    }

    pub fn clear(&mut self) {
        self.items.clear();
        self.seen.clear();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::{BTreeSet, HashSet};

    const END: Symbol = 1000;

    fn codes(s: &str) -> Vec<Symbol> {
        s.bytes()
            .map(|b| if b == b'$' { END } else if b == b'#' { END + 1 } else { b as Symbol })
            .collect()
    }

    fn show(s: Symbol) -> String {
        match s {
            END => "$".into(),
            x if x == END + 1 => "#".into(),
            x => char::from(x as u8).to_string(),
        }
    }

    fn leaf_suffixes(t: &SuffixTree) -> BTreeSet<Vec<Symbol>> {
        t.preorder()
            .iter()
            .filter(|&&v| t.is_leaf(v))
            .map(|&v| t.text()[t.suffix_start(v)..].to_vec())
            .collect()
    }

    fn check_shape(t: &SuffixTree) {
        let n = t.text().len();
        assert_eq!(t.preorder().iter().filter(|&&v| t.is_leaf(v)).count(), n);
        assert!(t.node_count() <= 2 * n);
        for &v in &t.preorder()[1..] {
            if !t.is_leaf(v) {
                assert!(t.children(v).count() >= 2);
            }
            let label = t.label(NodeRef::explicit(v));
            assert_eq!(&t.text()[t.witness(v)..t.witness(v) + label.len()], label);
        }
        let expected: BTreeSet<Vec<Symbol>> = (0..n).map(|i| t.text()[i..].to_vec()).collect();
        assert_eq!(leaf_suffixes(t), expected);
    }

    #[test]
    fn aba() {
        let t = SuffixTree::build(codes("aba$")).unwrap();
        check_shape(&t);
        assert_eq!(t.leaf_count(), 4);
        let a = t.locate(&codes("a")).unwrap();
        assert_eq!(a.up, 0);
        assert!(!t.is_leaf(a.node));
        assert_eq!(t.children(a.node).count(), 2);
        let golden = "0 - 0 \n1 0 1 a\n2 1 4 ba$\n3 1 2 $\n4 0 3 ba$\n5 0 1 $\n";
        assert_eq!(t.export(show), golden);
    }

    #[test]
    fn aaa() {
        let t = SuffixTree::build(codes("aaa$")).unwrap();
        check_shape(&t);
        assert_eq!(t.leaf_count(), 4);
        assert_eq!(t.export(show), "0 - 0 \n1 0 1 a\n2 1 2 a\n3 2 4 a$\n4 2 3 $\n5 1 2 $\n6 0 1 $\n");
    }

    #[test]
    fn rejects_bad_terminator() {
        assert!(SuffixTree::build(vec![]).is_err());
        assert!(SuffixTree::build(codes("a$a$")).is_err());
    }

    #[test]
    fn locate_implicit_nodes() {
        let t = SuffixTree::build(codes("banana$")).unwrap();
        let r = t.locate(&codes("ban")).unwrap();
        assert!(r.up > 0);
        assert_eq!(t.ref_depth(r), 3);
        assert_eq!(t.label(r), codes("ban").as_slice());
        assert!(t.locate(&codes("nab")).is_none());
        assert_eq!(t.locate(&[]), Some(NodeRef::ROOT));
    }

    #[test]
    fn overlay_shared_substrings() {
        let base = SuffixTree::build(codes("ab$")).unwrap();
        let mut ov = Overlay::default();
        ov.add_string(&base, &codes("ba#"));
        let t = ov.tree();
        let shared: BTreeSet<Vec<Symbol>> = t
            .preorder()
            .iter()
            .filter(|&&u| ov.has_base(u) && ov.has_peer(u) && u != ROOT)
            .map(|&u| t.label(NodeRef::explicit(u)).to_vec())
            .collect();
        assert_eq!(shared, [codes("a"), codes("b")].into_iter().collect());
        // "ba" branches out of the base tree: its locus has no back-pointer
        let ba = t.locate(&codes("ba")).unwrap();
        assert!(ov.back_pointer(ba.node).is_none());
    }

    #[test]
    fn overlay_identity() {
        let text = codes("mississippi$");
        let base = SuffixTree::build(text.clone()).unwrap();
        let mut peer = text.clone();
        *peer.last_mut().unwrap() = END + 1;
        let mut ov = Overlay::default();
        ov.add_string(&base, &peer);
        for &v in base.preorder() {
            let u = ov.of_base(v);
            assert_ne!(u, NONE);
            assert_eq!(ov.back_pointer(u), Some(NodeRef::explicit(v)));
            if v != ROOT && !base.is_leaf(v) {
                assert!(ov.has_peer(u));
            }
        }
    }

    fn substrings(s: &[Symbol]) -> HashSet<Vec<Symbol>> {
        let mut out = HashSet::new();
        for i in 0..s.len() {
            for j in i + 1..=s.len() {
                out.insert(s[i..j].to_vec());
            }
        }
        out
    }

    proptest! {
        #[test]
        fn leaves_are_suffixes(body in prop::collection::vec(0u32..4, 0..64)) {
            let mut text = body;
            text.push(END);
            let t = SuffixTree::build(text).unwrap();
            check_shape(&t);
        }

        #[test]
        fn locate_iff_substring(
            body in prop::collection::vec(0u32..3, 0..40),
            pat in prop::collection::vec(0u32..3, 1..6),
        ) {
            let mut text = body.clone();
            text.push(END);
            let t = SuffixTree::build(text).unwrap();
            let found = t.locate(&pat);
            let is_sub = body.windows(pat.len()).any(|w| w == pat.as_slice());
            prop_assert_eq!(found.is_some(), is_sub);
            if let Some(r) = found {
                prop_assert_eq!(t.label(r), pat.as_slice());
            }
        }

        #[test]
        fn overlay_back_pointers_match_shared_substrings(
            a in prop::collection::vec(0u32..3, 0..64),
            b in prop::collection::vec(0u32..3, 0..64),
        ) {
            let mut at = a.clone();
            at.push(END);
            let mut bt = b.clone();
            bt.push(END + 1);
            let base = SuffixTree::build(at).unwrap();
            let mut ov = Overlay::default();
            ov.add_string(&base, &bt);
            let t = ov.tree();
            let sa = substrings(&a);
            let sb = substrings(&b);
            // every explicit overlay node: back-pointer exists iff label is in a
            for &u in &t.preorder()[1..] {
                let full = t.label(NodeRef::explicit(u));
                let label: Vec<Symbol> = full.iter().copied().take_while(|&s| s < END).collect();
                if label.len() < full.len() {
                    continue;
                }
                prop_assert_eq!(ov.back_pointer(u).is_some(), sa.contains(&label), "{:?}", label);
                if let Some(r) = ov.back_pointer(u) {
                    prop_assert_eq!(base.label(r), label.as_slice());
                }
            }
            // shared substrings are exactly the labels under nodes with both kinds of leaves
            let mut shared = HashSet::new();
            for &u in &t.preorder()[1..] {
                if ov.has_base(u) && ov.has_peer(u) {
                    let p = t.parent(u).unwrap();
                    let w = t.witness(u);
                    for d in t.depth(p) + 1..=t.depth(u) {
                        shared.insert(t.text()[w..w + d].to_vec());
                    }
                }
            }
            let expected: HashSet<_> = sa.intersection(&sb).cloned().collect();
            prop_assert_eq!(shared, expected);
        }

        #[test]
        fn hui_matches_subtree_color_sets(
            parents_raw in prop::collection::vec(0usize..1000, 1..150),
            colors_raw in prop::collection::vec(0u32..6, 150),
        ) {
            let parents: Vec<Option<u32>> = std::iter::once(None)
                .chain(parents_raw.iter().enumerate().map(|(i, &r)| Some((r % (i + 1)) as u32)))
                .collect();
            let tree = PlainTree::from_parents(&parents);
            let n = parents.len();
            let is_leaf = |v: usize| !parents.contains(&Some(v as u32));
            let color = |v: u32| (is_leaf(v as usize)).then(|| colors_raw[v as usize % 150]);
            let mut scratch = HuiScratch::default();
            let got = count_distinct_colors(&tree, color, 6, &mut scratch).to_vec();
            for (v, &count) in got.iter().enumerate() {
                let mut set = HashSet::new();
                for w in 0..n {
                    let mut x = Some(w as u32);
                    while let Some(y) = x {
                        if y as usize == v {
                            if let Some(c) = color(w as u32) {
                                set.insert(c);
                            }
                            break;
                        }
                        x = parents[y as usize];
                    }
                }
                prop_assert_eq!(count as usize, set.len(), "node {}", v);
            }
        }

        #[test]
        fn exclusion_matches_explicit_set(
            body in prop::collection::vec(0u32..3, 1..30),
            ops in prop::collection::vec((any::<bool>(), 0usize..10_000), 1..25),
        ) {
            let mut text = body;
            text.push(END);
            let t = SuffixTree::build(text).unwrap();
            let refs: Vec<NodeRef> = t.all_refs().collect();
            let labels: Vec<Vec<Symbol>> = refs.iter().map(|&r| t.label(r).to_vec()).collect();
            let mut x = ExclusionSet::new(&t);
            let mut oracle: HashSet<usize> = HashSet::new();
            for (with_ancestors, pick) in ops {
                let i = pick % refs.len();
                if with_ancestors {
                    x.exclude_with_ancestors(&t, refs[i]);
                    for j in 0..refs.len() {
                        if labels[i].starts_with(&labels[j]) {
                            oracle.insert(j);
                        }
                    }
                } else {
                    x.exclude_with_descendants(&t, refs[i]);
                    for j in 0..refs.len() {
                        if labels[j].starts_with(&labels[i]) {
                            oracle.insert(j);
                        }
                    }
                }
                for j in 0..refs.len() {
                    prop_assert_eq!(x.is_excluded(&t, refs[j]), oracle.contains(&j), "{:?}", labels[j]);
                }
            }
        }
    }

    #[test]
    fn exclusion_examples() {
        let t = SuffixTree::build(codes("abcabd$")).unwrap();
        // "abc" sits two below the upper endpoint of the edge under "ab"
        let abc = t.locate(&codes("abc")).unwrap();
        let mut x = ExclusionSet::new(&t);
        x.exclude_with_ancestors(&t, abc);
        for p in ["", "a", "ab", "abc"] {
            assert!(x.is_excluded(&t, t.locate(&codes(p)).unwrap()), "{p}");
        }
        assert!(!x.is_excluded(&t, t.locate(&codes("abca")).unwrap()));
        assert!(!x.is_excluded(&t, t.locate(&codes("abd")).unwrap()));
        assert!(!x.is_excluded(&t, t.locate(&codes("b")).unwrap()));

        let mut x = ExclusionSet::new(&t);
        x.exclude_with_descendants(&t, t.locate(&codes("b")).unwrap());
        for p in ["b", "bc", "bcab", "bd", "bd$"] {
            assert!(x.is_excluded(&t, t.locate(&codes(p)).unwrap()), "{p}");
        }
        assert!(!x.is_excluded(&t, t.locate(&codes("ab")).unwrap()));
    }

    #[test]
    fn batch_dedup_and_credit() {
        let mut b = MarkedBatch::new(2);
        let v = NodeRef { node: 3, up: 1 };
        assert!(b.mark(v, 4));
        assert!(!b.mark(v, 4));
        b.credit(0, 7);
        b.credit(0, 7);
        b.credit(0, 7);
        assert_eq!(b.items()[0].count, 1);
        b.credit(0, 2);
        assert_eq!(b.items()[0].count, 2);
        assert!(b.mark(NodeRef { node: 5, up: 0 }, 2));
        assert!(b.is_full());
        b.clear();
        assert!(b.is_empty() && !b.contains(v));
    }

    #[test]
    fn hui_simple_cases() {
        // root with two leaves of colors 0 and 1
        let tree = PlainTree::from_parents(&[None, Some(0), Some(0)]);
        let mut s = HuiScratch::default();
        assert_eq!(count_distinct_colors(&tree, |v| Some(v - 1), 2, &mut s), &[2, 1, 1]);
        let t = SuffixTree::build(codes("abab$")).unwrap();
        let counts = count_distinct_colors(&t, |_| Some(0), 1, &mut s).to_vec();
        assert!(counts.iter().all(|&c| c == 1));
    }
}
