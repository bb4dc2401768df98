//! Match combination reporting.
//!
//! A match combination is the tuple `(e_1, ..., e_k)` of subpattern end
//! positions witnessing one way the pattern matches. Two reporters are
//! provided: [`report_chunked`] runs the graph builder over overlapping
//! windows of the text and expands each window's graph, and
//! [`report_on_the_fly`] expands every last-layer node as soon as it is
//! created while discarding nodes that can no longer take part in a match.

use crate::gapgraph::{GraphBuilder, ImplicitGapGraph, LiveGraph, Node, NodeStore};
use crate::matcher::start_pos;
use crate::pattern::VlgPattern;
use crate::Error;

/// Emits every combination ending in `node` (on `layer`) into `sink`.
/// `buf` must hold at least `layer + 1` slots.
fn expand_node<S: NodeStore>(
    store: &S,
    layer: usize,
    node: &Node,
    buf: &mut [usize],
    sink: &mut impl FnMut(&[usize]),
) {
    buf[layer] = node.endpos;
    let Some((first, last)) = node.preds else {
        sink(buf);
        return;
    };
    let below = layer - 1;
    let mut i = store.lower_bound(below, first);
    while i < store.layer_len(below) {
        let pred = *store.node_at(below, i);
        if pred.endpos > last {
            break;
        }
        expand_node(store, below, &pred, buf, sink);
        i += 1;
    }
}

/// Emits every combination of `graph`, grouped by ascending `e_k`.
pub fn expand_combinations(graph: &ImplicitGapGraph, mut sink: impl FnMut(&[usize])) {
    let k = graph.k();
    if k == 0 {
        return;
    }
    let mut buf = vec![0; k];
    for node in graph.nodes(k - 1) {
        expand_node(graph, k - 1, node, &mut buf, &mut sink);
    }
}

/// Number of combinations encoded by `graph` (β), saturating at `u128::MAX`.
pub fn count_combinations(graph: &ImplicitGapGraph) -> u128 {
    let k = graph.k();
    if k == 0 {
        return 0;
    }
    let mut counts: Vec<u128> = vec![1; graph.nodes(0).len()];
    for layer in 1..k {
        let below = graph.nodes(layer - 1);
        counts = graph
            .nodes(layer)
            .iter()
            .map(|n| {
                let (first, last) = n.preds.expect("upper-layer nodes have predecessors");
                let lo = below.partition_point(|x| x.endpos < first);
                let hi = below.partition_point(|x| x.endpos <= last);
                counts[lo..hi].iter().fold(0u128, |acc, &c| acc.saturating_add(c))
            })
            .collect();
    }
    counts.iter().fold(0u128, |acc, &c| acc.saturating_add(c))
}

/// Splitting of a text of length `n` into overlapping chunks.
///
/// With the default length `2(m + B)` consecutive chunks overlap in `m + B`
/// positions. A chunk claims the combinations whose match starts in its
/// first `stride` positions (the last chunk claims everything left), so
/// every combination is reported by exactly one chunk.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChunkPlan {
    pub n: usize,
    pub len: usize,
    pub stride: usize,
    pub count: usize,
}

impl ChunkPlan {
    /// `span` is the longest possible match, `m + B`. `len` defaults to
    /// `2 * span` and must be at least `span`.
    pub fn new(n: usize, span: usize, len: Option<usize>) -> Result<Self, Error> {
        let span = span.max(1);
        let len = len.unwrap_or(2 * span);
        if len < span {
            return Err(Error::ChunkTooShort { len, span });
        }
        // A match starting at the last claimed position must still fit.
        let stride = if len > span { len - span } else { 1 };
        let count = if n == 0 {
            0
        } else if n <= len {
            1
        } else {
            1 + (n - len).div_ceil(stride)
        };
        Ok(Self { n, len, stride, count })
    }

    pub fn for_pattern(p: &VlgPattern, n: usize, len: Option<usize>) -> Result<Self, Error> {
        let span = p.max_span().ok_or(Error::UnboundedGap)?;
        Self::new(n, span, len)
    }

    /// 1-based inclusive text interval covered by chunk `i` (0-based).
    pub fn chunk(&self, i: usize) -> (usize, usize) {
        let start = i * self.stride + 1;
        (start, (start + self.len - 1).min(self.n))
    }

    /// Match start positions owned by chunk `i`.
    pub fn claimed(&self, i: usize) -> (usize, usize) {
        let (start, end) = self.chunk(i);
        if i + 1 == self.count {
            (start, end)
        } else {
            (start, start + self.stride - 1)
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ChunkedSummary {
    pub chunks: usize,
    pub combinations: u64,
    /// Most chunk graphs held in memory at once.
    pub peak_retained_graphs: usize,
    pub peak_graph_nodes: usize,
}

/// Reports every combination of `p` in `text` by building the implicit gap
/// graph of one chunk at a time. `chunk_len` overrides the default
/// `2(m + B)`.
pub fn report_chunked(
    p: &VlgPattern,
    text: &[u8],
    chunk_len: Option<usize>,
    mut sink: impl FnMut(&[usize]),
) -> Result<ChunkedSummary, Error> {
    let plan = ChunkPlan::for_pattern(p, text.len(), chunk_len)?;
    let first_len = p.sublen(0);
    let mut summary = ChunkedSummary {
        chunks: plan.count,
        ..Default::default()
    };
    let mut global = vec![0; p.k()];
    for i in 0..plan.count {
        let (start, end) = plan.chunk(i);
        let (claim_lo, claim_hi) = plan.claimed(i);
        let offset = start - 1;

        let mut graph = ImplicitGapGraph::new(p.k());
        GraphBuilder::new(p)?.run(&text[offset..end], |layer, node| graph.push(layer, node));
        summary.peak_retained_graphs = summary.peak_retained_graphs.max(1);
        summary.peak_graph_nodes = summary.peak_graph_nodes.max(graph.node_count());

        expand_combinations(&graph, |ends| {
            let match_start = offset + start_pos(ends[0], first_len);
            if (claim_lo..=claim_hi).contains(&match_start) {
                for (g, &e) in global.iter_mut().zip(ends) {
                    *g = e + offset;
                }
                summary.combinations += 1;
                sink(&global);
            }
        });
    }
    Ok(summary)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OnTheFlySummary {
    pub combinations: u64,
    pub peak_live_nodes: usize,
    /// `Σ_i (1 + S_i)`, the ceiling `peak_live_nodes` must respect.
    pub node_bound: usize,
}

/// Reports combinations while scanning, in nondecreasing `e_k` order.
pub fn report_on_the_fly(
    p: &VlgPattern,
    text: &[u8],
    mut sink: impl FnMut(&[usize]),
) -> Result<OnTheFlySummary, Error> {
    let mut live = LiveGraph::new(p)?;
    let mut builder = GraphBuilder::new(p)?;
    let k = p.k();
    let mut buf = vec![0; k];
    let mut combinations = 0u64;
    builder.run(text, |layer, node| {
        if layer + 1 == k {
            // Predecessors of a node created now are still alive.
            expand_node(&live, layer, &node, &mut buf, &mut |ends: &[usize]| {
                combinations += 1;
                sink(ends);
            });
        } else {
            live.push(layer, node);
        }
    });
    Ok(OnTheFlySummary {
        combinations,
        peak_live_nodes: live.peak_nodes(),
        node_bound: live.node_bound(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gapgraph::build_implicit_gap_graph;
    use std::collections::BTreeSet;

    const EXAMPLE_TEXT: &[u8] = b"ATCGGCTCCAGACCAGTACCCGTTCCGTGGT";

    fn ending_at_17() -> BTreeSet<Vec<usize>> {
        [
            [5, 9, 12, 17],
            [5, 8, 12, 17],
            [5, 8, 10, 17],
            [5, 6, 12, 17],
            [5, 6, 10, 17],
        ]
        .iter()
        .map(|c| c.to_vec())
        .collect()
    }

    #[test]
    fn expand_combinations_ending_at_17() {
        let p = VlgPattern::parse("G.{0,3}C.{1,6}A.{2,7}T").unwrap();
        let g = build_implicit_gap_graph(&p, EXAMPLE_TEXT).unwrap();
        let mut at17 = BTreeSet::new();
        expand_combinations(&g, |c| {
            // The match spanning positions 5..=17.
            if c[0] == 5 && c[3] == 17 {
                assert!(at17.insert(c.to_vec()));
            }
        });
        assert_eq!(at17, ending_at_17());
    }

    #[test]
    fn on_the_fly_combinations_ending_at_17() {
        let p = VlgPattern::parse("G.{0,3}C.{1,6}A.{2,7}T").unwrap();
        let mut all = Vec::new();
        let s = report_on_the_fly(&p, EXAMPLE_TEXT, |c| all.push(c.to_vec())).unwrap();
        let at17: BTreeSet<_> = all.iter().filter(|c| c[0] == 5 && c[3] == 17).cloned().collect();
        assert_eq!(at17, ending_at_17());
        assert!(all.windows(2).all(|w| w[0][3] <= w[1][3]));
        assert!(s.peak_live_nodes <= s.node_bound);
    }

    #[test]
    fn single_layer_combinations() {
        let p = VlgPattern::parse("GT").unwrap();
        let g = build_implicit_gap_graph(&p, EXAMPLE_TEXT).unwrap();
        let mut out = Vec::new();
        expand_combinations(&g, |c| out.push(c.to_vec()));
        assert_eq!(out, vec![vec![17], vec![23], vec![28], vec![31]]);
        assert_eq!(count_combinations(&g), 4);
    }

    #[test]
    fn count_matches_expansion() {
        let p = VlgPattern::parse("G.{0,3}C.{1,6}A.{2,7}T").unwrap();
        let g = build_implicit_gap_graph(&p, EXAMPLE_TEXT).unwrap();
        let mut n = 0u128;
        expand_combinations(&g, |_| n += 1);
        assert_eq!(count_combinations(&g), n);
    }

    #[test]
    fn chunk_plan_default_geometry() {
        let plan = ChunkPlan::new(100, 10, None).unwrap();
        assert_eq!((plan.len, plan.stride), (20, 10));
        assert_eq!(plan.count, 9);
        assert_eq!(plan.chunk(0), (1, 20));
        assert_eq!(plan.chunk(1), (11, 30));
        assert_eq!(plan.chunk(8), (81, 100));
        assert_eq!(plan.claimed(0), (1, 10));
        assert_eq!(plan.claimed(8), (81, 100));
    }

    #[test]
    fn chunk_plan_short_text_and_minimum_length() {
        assert_eq!(ChunkPlan::new(15, 10, None).unwrap().count, 1);
        assert_eq!(ChunkPlan::new(0, 10, None).unwrap().count, 0);
        let tight = ChunkPlan::new(12, 10, Some(10)).unwrap();
        assert_eq!(tight.stride, 1);
        assert_eq!(tight.count, 3);
        assert!(matches!(
            ChunkPlan::new(12, 10, Some(9)),
            Err(Error::ChunkTooShort { len: 9, span: 10 })
        ));
    }

    #[test]
    fn chunked_equals_on_the_fly_with_small_chunks() {
        let p = VlgPattern::parse("G.{0,3}C.{1,6}A.{2,7}T").unwrap();
        let span = p.max_span().unwrap();
        let mut reference = BTreeSet::new();
        report_on_the_fly(&p, EXAMPLE_TEXT, |c| {
            reference.insert(c.to_vec());
        })
        .unwrap();
        for len in [span, span + 1, span + 3, 2 * span, 100] {
            let mut got = Vec::new();
            let s = report_chunked(&p, EXAMPLE_TEXT, Some(len), |c| got.push(c.to_vec())).unwrap();
            let set: BTreeSet<_> = got.iter().cloned().collect();
            assert_eq!(set.len(), got.len(), "duplicates with len {len}");
            assert_eq!(set, reference, "len {len}");
            assert!(s.peak_retained_graphs <= 2);
        }
    }

    #[test]
    fn match_straddling_chunk_midpoint_reported_once() {
        // m + B = 4; the only match starts at position 4 = m + B.
        let p = VlgPattern::parse("AC.{0,1}G").unwrap();
        let text = b"TTTACGTTTTTT";
        let mut got = Vec::new();
        report_chunked(&p, text, None, |c| got.push(c.to_vec())).unwrap();
        assert_eq!(got, vec![vec![5, 6]]);
    }

    #[test]
    fn adversarial_counts() {
        // Every position holds an A; β grows with the gap widths.
        let p = VlgPattern::parse("A.{0,2}A.{0,2}A").unwrap();
        let text = vec![b'A'; 12];
        let s = report_on_the_fly(&p, &text, |_| {}).unwrap();
        let g = build_implicit_gap_graph(&p, &text).unwrap();
        assert_eq!(u128::from(s.combinations), count_combinations(&g));
        // Ends e1 < e2 < e3 with steps 1..=3: 12-position walk count.
        let mut brute = 0;
        for e1 in 1..=12usize {
            for d1 in 1..=3 {
                for d2 in 1..=3 {
                    if e1 + d1 + d2 <= 12 {
                        brute += 1;
                    }
                }
            }
        }
        assert_eq!(s.combinations, brute);
    }

    #[test]
    fn unbounded_rejected() {
        let p = VlgPattern::parse("A.{1,*}B").unwrap();
        assert!(matches!(report_on_the_fly(&p, b"AB", |_| {}), Err(Error::UnboundedGap)));
        assert!(matches!(report_chunked(&p, b"AB", None, |_| {}), Err(Error::UnboundedGap)));
    }
}
