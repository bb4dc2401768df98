//! Implicit gap graph construction.
//!
//! Nodes are relevant occurrences `(layer, endpos)`. A node `y` of layer `i`
//! points at the first and the last relevant occurrence of layer `i - 1`
//! compatible with it (`startpos(y) ∈ R(x)`); every occurrence in between is
//! compatible as well, so two edges encode the whole run.
//!
//! The builder replaces each range list of the matcher with a pair: the
//! first list keeps, for every covered position, the earliest range that
//! covered it, and the last list the most recent one. Each stored range is
//! tagged with the end position of the occurrence that created it.

use std::collections::VecDeque;
use std::io::{self, Write};

use crate::ac::{Automaton, OccEvent};
use crate::matcher::start_pos;
use crate::pattern::VlgPattern;
use crate::Error;

/// A range of admissible start positions tagged with the end position of
/// the previous-layer occurrence that defined it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TaggedRange {
    pub start: usize,
    pub end: usize,
    pub origin: usize,
}

impl TaggedRange {
    pub fn new(start: usize, end: usize, origin: usize) -> Self {
        debug_assert!(start <= end);
        Self { start, end, origin }
    }

    pub fn contains(&self, pos: usize) -> bool {
        self.start <= pos && pos <= self.end
    }
}

/// First-cover and last-cover range lists for one layer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualLists {
    first: VecDeque<TaggedRange>,
    last: VecDeque<TaggedRange>,
    sublen: usize,
}

impl DualLists {
    pub fn new(sublen: usize) -> Self {
        Self {
            first: VecDeque::new(),
            last: VecDeque::new(),
            sublen,
        }
    }

    pub fn first_list(&self) -> impl Iterator<Item = &TaggedRange> {
        self.first.iter()
    }

    pub fn last_list(&self) -> impl Iterator<Item = &TaggedRange> {
        self.last.iter()
    }

    pub fn first_len(&self) -> usize {
        self.first.len()
    }

    pub fn last_len(&self) -> usize {
        self.last.len()
    }

    /// Adds `r`, which must not start before any range added earlier.
    /// Coverage semantics hold when ends are nondecreasing too, as they are
    /// for ranges of one layer, which share the gap width.
    ///
    /// The first list only receives the part of `r` beyond what it already
    /// covers (possibly nothing); the last list cuts its final range short
    /// of `r.start` (dropping it if emptied) and then takes `r` whole.
    pub fn append(&mut self, r: TaggedRange) {
        let start = match self.first.back() {
            Some(prev) => r.start.max(prev.end + 1),
            None => r.start,
        };
        if start <= r.end {
            self.first.push_back(TaggedRange::new(start, r.end, r.origin));
        }

        if let Some(prev) = self.last.back_mut() {
            debug_assert!(r.start >= prev.start);
            if prev.end >= r.start {
                if r.start > prev.start {
                    prev.end = r.start - 1;
                } else {
                    self.last.pop_back();
                }
            }
        }
        self.last.push_back(r);
    }

    /// Drops ranges no occurrence ending at or after `tau` can start in.
    pub fn purge_dead(&mut self, tau: usize) -> usize {
        let Some(earliest) = (tau + 1).checked_sub(self.sublen) else {
            return 0;
        };
        let mut removed = 0;
        for list in [&mut self.first, &mut self.last] {
            while list.front().is_some_and(|r| r.end < earliest) {
                list.pop_front();
                removed += 1;
            }
        }
        removed
    }

    /// Origin of the first range of the first list, if it holds `start`.
    pub fn first_origin(&self, start: usize) -> Option<usize> {
        self.first
            .front()
            .filter(|r| r.contains(start))
            .map(|r| r.origin)
    }

    /// Origin of the last-list range holding `start`.
    pub fn last_origin(&self, start: usize) -> Option<usize> {
        let i = self.last.partition_point(|r| r.end < start);
        self.last
            .get(i)
            .filter(|r| r.contains(start))
            .map(|r| r.origin)
    }

    /// Both lists sorted with pairwise disjoint ranges.
    pub fn is_well_formed(&self) -> bool {
        [&self.first, &self.last].iter().all(|list| {
            list.iter().all(|r| r.start <= r.end)
                && list.iter().zip(list.iter().skip(1)).all(|(a, b)| a.end < b.start)
        })
    }
}

/// Bound on either dual list of layer `layer >= 1`: `|P_i| + b_{i-1} + 1`.
pub fn dual_list_bound(p: &VlgPattern, layer: usize) -> Option<usize> {
    let b = p.gaps()[layer - 1].upper?;
    Some(p.sublen(layer) + b + 1)
}

/// A relevant occurrence. `preds` holds the end positions of the first and
/// last compatible predecessor; `None` on layer 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Node {
    pub endpos: usize,
    pub preds: Option<(usize, usize)>,
}

impl Node {
    pub fn out_degree(&self) -> usize {
        match self.preds {
            None => 0,
            Some((f, l)) if f == l => 1,
            Some(_) => 2,
        }
    }
}

/// Edge from a node of `layer` to a node of `layer - 1` (layers 0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GapEdge {
    pub layer: usize,
    pub endpos: usize,
    pub pred_endpos: usize,
}

/// Per-layer node sequences ordered by end position.
pub trait NodeStore {
    fn layer_len(&self, layer: usize) -> usize;
    fn node_at(&self, layer: usize, index: usize) -> &Node;
    /// Index of the first node of `layer` with `endpos >= pos`.
    fn lower_bound(&self, layer: usize, pos: usize) -> usize;
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ImplicitGapGraph {
    layers: Vec<Vec<Node>>,
}

impl ImplicitGapGraph {
    pub fn new(k: usize) -> Self {
        Self {
            layers: vec![Vec::new(); k],
        }
    }

    pub fn k(&self) -> usize {
        self.layers.len()
    }

    pub fn push(&mut self, layer: usize, node: Node) {
        debug_assert!(self.layers[layer].last().is_none_or(|n| n.endpos < node.endpos));
        self.layers[layer].push(node);
    }

    pub fn nodes(&self, layer: usize) -> &[Node] {
        &self.layers[layer]
    }

    pub fn node(&self, layer: usize, endpos: usize) -> Option<&Node> {
        let nodes = &self.layers[layer];
        nodes
            .binary_search_by_key(&endpos, |n| n.endpos)
            .ok()
            .map(|i| &nodes[i])
    }

    pub fn node_count(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    /// Edges sorted by `(layer, endpos, pred_endpos)`; a node whose first
    /// and last predecessor coincide contributes one edge.
    pub fn edges(&self) -> impl Iterator<Item = GapEdge> + '_ {
        self.layers.iter().enumerate().flat_map(|(layer, nodes)| {
            nodes.iter().flat_map(move |n| {
                let (f, l) = match n.preds {
                    Some(p) => (Some(p.0), (p.1 != p.0).then_some(p.1)),
                    None => (None, None),
                };
                f.into_iter().chain(l).map(move |pred_endpos| GapEdge {
                    layer,
                    endpos: n.endpos,
                    pred_endpos,
                })
            })
        })
    }

    pub fn edge_count(&self) -> usize {
        self.layers
            .iter()
            .flatten()
            .map(Node::out_degree)
            .sum()
    }

    /// Text dump: `N <layer> <endpos>` lines, then
    /// `E <layer> <endpos> <layer-1> <pred_endpos>` lines, layers 1-based.
    pub fn write_text(&self, out: &mut impl Write, prefix: &str) -> io::Result<()> {
        for (layer, nodes) in self.layers.iter().enumerate() {
            for n in nodes {
                writeln!(out, "{prefix}N {} {}", layer + 1, n.endpos)?;
            }
        }
        for e in self.edges() {
            writeln!(
                out,
                "{prefix}E {} {} {} {}",
                e.layer + 1,
                e.endpos,
                e.layer,
                e.pred_endpos
            )?;
        }
        Ok(())
    }
}

impl NodeStore for ImplicitGapGraph {
    fn layer_len(&self, layer: usize) -> usize {
        self.layers[layer].len()
    }

    fn node_at(&self, layer: usize, index: usize) -> &Node {
        &self.layers[layer][index]
    }

    fn lower_bound(&self, layer: usize, pos: usize) -> usize {
        self.layers[layer].partition_point(|n| n.endpos < pos)
    }
}

/// Streaming construction of the implicit gap graph.
#[derive(Clone, Debug)]
pub struct GraphBuilder<'p> {
    pattern: &'p VlgPattern,
    lists: Vec<DualLists>,
    peak_sizes: Vec<usize>,
}

impl<'p> GraphBuilder<'p> {
    pub fn new(pattern: &'p VlgPattern) -> Result<Self, Error> {
        if !pattern.is_bounded() {
            return Err(Error::UnboundedGap);
        }
        let lists: Vec<DualLists> = (1..pattern.k()).map(|i| DualLists::new(pattern.sublen(i))).collect();
        Ok(Self {
            pattern,
            peak_sizes: vec![0; lists.len()],
            lists,
        })
    }

    /// Dual lists of `layer` (0-based); `None` for layer 0.
    pub fn lists(&self, layer: usize) -> Option<&DualLists> {
        layer.checked_sub(1).and_then(|i| self.lists.get(i))
    }

    /// Largest `max(|first|, |last|)` seen per list (layers `2..=k`).
    pub fn peak_sizes(&self) -> &[usize] {
        &self.peak_sizes
    }

    fn purge(&mut self, layer: usize, tau: usize) {
        if let Some(lists) = layer.checked_sub(1).and_then(|i| self.lists.get_mut(i)) {
            lists.purge_dead(tau);
        }
    }

    /// Processes one automaton event, calling `on_node(layer, node)` for
    /// every relevant occurrence in ascending layer order.
    pub fn process_event(&mut self, ev: &OccEvent, on_node: &mut impl FnMut(usize, Node)) {
        let p = self.pattern;
        let tau = ev.position;
        for &layer in &ev.layers {
            self.purge(layer, tau);
            self.purge(layer + 1, tau);

            let preds = match self.lists(layer) {
                None => None,
                Some(lists) => {
                    let start = start_pos(tau, p.sublen(layer));
                    let Some(first) = lists.first_origin(start) else {
                        continue;
                    };
                    let last = lists
                        .last_origin(start)
                        .expect("first and last lists cover the same positions");
                    Some((first, last))
                }
            };
            on_node(layer, Node { endpos: tau, preds });

            if layer + 1 < p.k() {
                let gap = p.gaps()[layer];
                let upper = gap.upper.expect("bounded pattern");
                let lists = &mut self.lists[layer];
                lists.append(TaggedRange::new(tau + gap.lower + 1, tau + upper + 1, tau));
                let peak = &mut self.peak_sizes[layer];
                *peak = (*peak).max(lists.first_len()).max(lists.last_len());
            }
        }
    }

    /// Scans `text`, handing every relevant occurrence to `on_node`.
    /// Lower layers can hold relevant nodes even when no match fits in
    /// the text, so there is no shortcut for `m > n` here.
    pub fn run(&mut self, text: &[u8], mut on_node: impl FnMut(usize, Node)) {
        let ac = Automaton::build(self.pattern.subpatterns()).expect("validated pattern");
        ac.stream(text, |ev| self.process_event(ev, &mut on_node));
    }
}

/// Builds the complete implicit gap graph of `p` over `text`.
pub fn build_implicit_gap_graph(p: &VlgPattern, text: &[u8]) -> Result<ImplicitGapGraph, Error> {
    let mut graph = ImplicitGapGraph::new(p.k());
    GraphBuilder::new(p)?.run(text, |layer, node| graph.push(layer, node));
    Ok(graph)
}

/// `S_i = Σ_{j>i} (b_{j-1} + |P_j|)` per layer: a node of layer `i` ending
/// at `e` can take part in no match once the scan is past `e + S_i`.
pub fn suffix_spans(p: &VlgPattern) -> Option<Vec<usize>> {
    let k = p.k();
    let mut spans = vec![0; k];
    for i in (0..k - 1).rev() {
        spans[i] = spans[i + 1] + p.gaps()[i].upper? + p.sublen(i + 1);
    }
    Some(spans)
}

/// Node store for on-the-fly reporting; dead nodes are dropped from the
/// front of each layer.
#[derive(Clone, Debug)]
pub struct LiveGraph {
    layers: Vec<VecDeque<Node>>,
    spans: Vec<usize>,
    live: usize,
    peak: usize,
}

impl LiveGraph {
    pub fn new(p: &VlgPattern) -> Result<Self, Error> {
        let spans = suffix_spans(p).ok_or(Error::UnboundedGap)?;
        Ok(Self {
            layers: vec![VecDeque::new(); p.k()],
            spans,
            live: 0,
            peak: 0,
        })
    }

    pub fn spans(&self) -> &[usize] {
        &self.spans
    }

    /// `Σ_i (1 + S_i)`.
    pub fn node_bound(&self) -> usize {
        self.spans.iter().map(|s| s + 1).sum()
    }

    pub fn live_nodes(&self) -> usize {
        self.live
    }

    pub fn peak_nodes(&self) -> usize {
        self.peak
    }

    pub fn layer(&self, layer: usize) -> &VecDeque<Node> {
        &self.layers[layer]
    }

    fn purge_layer(&mut self, layer: usize, tau: usize) -> usize {
        let span = self.spans[layer];
        let nodes = &mut self.layers[layer];
        let mut removed = 0;
        while nodes.front().is_some_and(|n| tau > n.endpos.saturating_add(span)) {
            nodes.pop_front();
            removed += 1;
        }
        self.live -= removed;
        removed
    }

    /// Removes every node that is dead at `tau`. Edges live inside their
    /// source node, and a dead node's successors are dead too, so no
    /// dangling edges remain.
    pub fn purge_dead_nodes(&mut self, tau: usize) -> usize {
        (0..self.layers.len()).map(|l| self.purge_layer(l, tau)).sum()
    }

    /// Inserts a node created at `tau = node.endpos`, first dropping dead
    /// nodes of its layer.
    pub fn push(&mut self, layer: usize, node: Node) {
        self.purge_layer(layer, node.endpos);
        self.layers[layer].push_back(node);
        self.live += 1;
        self.peak = self.peak.max(self.live);
    }
}

impl NodeStore for LiveGraph {
    fn layer_len(&self, layer: usize) -> usize {
        self.layers[layer].len()
    }

    fn node_at(&self, layer: usize, index: usize) -> &Node {
        &self.layers[layer][index]
    }

    fn lower_bound(&self, layer: usize, pos: usize) -> usize {
        self.layers[layer].partition_point(|n| n.endpos < pos)
    }
}
