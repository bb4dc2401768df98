//! End-position matching with one sorted range list per layer.
//!
//! For every layer `i >= 2` the matcher keeps the ranges of admissible start
//! positions defined by the relevant occurrences of the previous subpattern.
//! An occurrence of `P_i` is relevant iff its start lies in one of them; a
//! relevant occurrence of `P_k` is a match end. Ranges are merged when they
//! overlap or touch and dropped from the front once no future occurrence of
//! their layer can start inside them, which keeps the lists within
//! `O(m + A)` total space.
//!
//! Positions are 1-based and inclusive throughout: an occurrence of `P_i`
//! ending at `τ` starts at `τ - |P_i| + 1`, and a range `[s, t]` stored for
//! layer `i` is dead at `τ` iff `t < τ - |P_i| + 1`.

use std::collections::VecDeque;
use std::fmt;

use crate::ac::{Automaton, OccEvent, ScanStats};
use crate::pattern::VlgPattern;

/// End marker of a range produced by an unbounded gap.
pub const UNBOUNDED: usize = usize::MAX;

/// Start position of an occurrence of a `len`-byte string ending at `end`.
pub fn start_pos(end: usize, len: usize) -> usize {
    end + 1 - len
}

/// Closed interval of text positions. `end == UNBOUNDED` never closes.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Range {
    pub start: usize,
    pub end: usize,
}

impl Range {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        Self { start, end }
    }

    pub fn contains(&self, pos: usize) -> bool {
        self.start <= pos && pos <= self.end
    }

    pub fn is_unbounded(&self) -> bool {
        self.end == UNBOUNDED
    }

    /// `R(x)` for an occurrence ending at `end` followed by gap `lower..=upper`.
    pub fn after(end: usize, lower: usize, upper: Option<usize>) -> Self {
        let start = end.saturating_add(lower).saturating_add(1);
        let stop = match upper {
            Some(b) => end.saturating_add(b).saturating_add(1),
            None => UNBOUNDED,
        };
        Self::new(start, stop)
    }
}

impl fmt::Debug for Range {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unbounded() {
            write!(f, "[{},*]", self.start)
        } else {
            write!(f, "[{},{}]", self.start, self.end)
        }
    }
}

/// Sorted list of disjoint, non-adjacent ranges for one layer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RangeList {
    ranges: VecDeque<Range>,
    layer: usize,
    sublen: usize,
}

impl RangeList {
    pub fn new(layer: usize, sublen: usize) -> Self {
        Self {
            ranges: VecDeque::new(),
            layer,
            sublen,
        }
    }

    pub fn from_ranges(layer: usize, sublen: usize, ranges: impl IntoIterator<Item = Range>) -> Self {
        let mut list = Self::new(layer, sublen);
        for r in ranges {
            list.append_merge(r);
        }
        list
    }

    pub fn layer(&self) -> usize {
        self.layer
    }

    pub fn len(&self) -> usize {
        self.ranges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranges.is_empty()
    }

    pub fn first(&self) -> Option<&Range> {
        self.ranges.front()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Range> {
        self.ranges.iter()
    }

    pub fn to_vec(&self) -> Vec<Range> {
        self.ranges.iter().copied().collect()
    }

    /// Drops the maximal prefix of ranges that no occurrence of this layer
    /// ending at or after `tau` can start in.
    pub fn purge_dead(&mut self, tau: usize) -> usize {
        // Earliest start of an occurrence ending at >= tau.
        let Some(earliest) = (tau + 1).checked_sub(self.sublen) else {
            return 0;
        };
        let mut removed = 0;
        while let Some(r) = self.ranges.front() {
            if r.end >= earliest {
                break;
            }
            self.ranges.pop_front();
            removed += 1;
        }
        removed
    }

    /// Appends `r`, merging into the last range when they overlap or touch.
    /// Returns `true` if a new range was stored.
    pub fn append_merge(&mut self, r: Range) -> bool {
        if let Some(last) = self.ranges.back_mut() {
            debug_assert!(r.start >= last.start, "appends arrive in start order");
            if r.start <= last.end.saturating_add(1) {
                last.end = last.end.max(r.end);
                return false;
            }
        }
        self.ranges.push_back(r);
        true
    }

    /// Relevance test: is `pos` inside the first stored range?
    pub fn first_contains(&self, pos: usize) -> bool {
        self.ranges.front().is_some_and(|r| r.contains(pos))
    }

    /// Membership in any stored range, by binary search.
    pub fn any_contains(&self, pos: usize) -> bool {
        let i = self.ranges.partition_point(|r| r.end < pos);
        self.ranges.get(i).is_some_and(|r| r.contains(pos))
    }

    /// Sorted with at least one uncovered position between neighbours.
    pub fn is_normalized(&self) -> bool {
        self.ranges.iter().all(|r| r.start <= r.end)
            && self
                .ranges
                .iter()
                .zip(self.ranges.iter().skip(1))
                .all(|(a, b)| a.end != UNBOUNDED && b.start > a.end + 1)
    }
}

/// Upper bound on `|L_i|` for layer `layer >= 1` (0-based), or `None` when
/// the preceding gap is unbounded:
/// `floor((2c + |P_i| + a) / (c + 1))` with `c = b - a + 1` of the gap before.
pub fn range_list_bound(p: &VlgPattern, layer: usize) -> Option<usize> {
    let gap = p.gaps()[layer - 1];
    let c = gap.width()?;
    Some((2 * c + p.sublen(layer) + gap.lower) / (c + 1))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counters {
    pub events: usize,
    pub occurrences: usize,
    pub relevant: usize,
    pub appended: usize,
    pub merged: usize,
    pub purged: usize,
    pub reported: usize,
}

/// Points inside `process_event` where a [`Probe`] is called, once per
/// layer entry of the event.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TracePoint {
    BeforePurge,
    AfterPurge,
    AfterUpdate,
}

/// Read-only observer of matcher state, for tracing and invariant checks.
pub trait Probe {
    fn observe(&mut self, point: TracePoint, tau: usize, layer: usize, state: &MatcherState);
}

/// Probe that ignores everything.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoProbe;

impl Probe for NoProbe {
    fn observe(&mut self, _: TracePoint, _: usize, _: usize, _: &MatcherState) {}
}

impl<F: FnMut(TracePoint, usize, usize, &MatcherState)> Probe for F {
    fn observe(&mut self, point: TracePoint, tau: usize, layer: usize, state: &MatcherState) {
        self(point, tau, layer, state)
    }
}

/// Per-pass state: the range lists for layers `1..k` (0-based).
#[derive(Clone, Debug)]
pub struct MatcherState {
    lists: Vec<RangeList>,
    tau: usize,
    last_reported: Option<usize>,
    purge: bool,
    counters: Counters,
    peak_sizes: Vec<usize>,
}

impl MatcherState {
    pub fn new(p: &VlgPattern) -> Self {
        let lists: Vec<RangeList> = (1..p.k()).map(|i| RangeList::new(i, p.sublen(i))).collect();
        Self {
            peak_sizes: vec![0; lists.len()],
            lists,
            tau: 0,
            last_reported: None,
            purge: true,
            counters: Counters::default(),
        }
    }

    /// Disables dead-range removal. Relevance is then decided by searching
    /// the whole list; output is unchanged but space is no longer bounded.
    pub fn without_purging(mut self) -> Self {
        self.purge = false;
        self
    }

    /// Range list of `layer` (0-based); `None` for layer 0.
    pub fn list(&self, layer: usize) -> Option<&RangeList> {
        layer.checked_sub(1).and_then(|i| self.lists.get(i))
    }

    pub fn lists(&self) -> &[RangeList] {
        &self.lists
    }

    pub fn position(&self) -> usize {
        self.tau
    }

    pub fn counters(&self) -> Counters {
        self.counters
    }

    /// Largest size each list reached, indexed like [`lists`](Self::lists).
    pub fn peak_sizes(&self) -> &[usize] {
        &self.peak_sizes
    }

    fn purge_list(&mut self, layer: usize, tau: usize) {
        if !self.purge || layer == 0 {
            return;
        }
        if let Some(list) = self.lists.get_mut(layer - 1) {
            self.counters.purged += list.purge_dead(tau);
        }
    }

    fn is_relevant(&self, layer: usize, start: usize) -> bool {
        let Some(list) = self.list(layer) else {
            return true;
        };
        if !self.purge {
            return list.any_contains(start);
        }
        let hit = list.first_contains(start);
        debug_assert!(
            list.iter().skip(1).all(|r| !r.contains(start)),
            "start {start} found beyond the first live range of layer {layer}"
        );
        hit
    }

    /// Handles one automaton event; calls `emit` with `τ` when a relevant
    /// occurrence of the last subpattern ends here (at most once per `τ`).
    pub fn process_event(
        &mut self,
        p: &VlgPattern,
        ev: &OccEvent,
        probe: &mut impl Probe,
        emit: &mut impl FnMut(usize),
    ) {
        let tau = ev.position;
        debug_assert!(tau > self.tau || self.counters.events == 0, "events arrive in position order");
        self.tau = tau;
        self.counters.events += 1;
        let k = p.k();
        for &layer in &ev.layers {
            self.counters.occurrences += 1;
            probe.observe(TracePoint::BeforePurge, tau, layer, self);
            self.purge_list(layer, tau);
            self.purge_list(layer + 1, tau);
            probe.observe(TracePoint::AfterPurge, tau, layer, self);

            let start = start_pos(tau, p.sublen(layer));
            if self.is_relevant(layer, start) {
                self.counters.relevant += 1;
                if layer + 1 < k {
                    let gap = p.gaps()[layer];
                    let list = &mut self.lists[layer];
                    if list.append_merge(Range::after(tau, gap.lower, gap.upper)) {
                        self.counters.appended += 1;
                    } else {
                        self.counters.merged += 1;
                    }
                    let peak = &mut self.peak_sizes[layer];
                    *peak = (*peak).max(list.len());
                } else if self.last_reported != Some(tau) {
                    self.last_reported = Some(tau);
                    self.counters.reported += 1;
                    emit(tau);
                }
            }
            probe.observe(TracePoint::AfterUpdate, tau, layer, self);
        }
    }
}

/// Summary of one matcher pass.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MatchSummary {
    pub scan: ScanStats,
    pub counters: Counters,
    /// Occurrence count per layer.
    pub layer_occurrences: Vec<usize>,
    /// Peak size of each range list (layers `2..=k`).
    pub peak_list_sizes: Vec<usize>,
}

impl MatchSummary {
    pub fn alpha(&self) -> usize {
        self.scan.occurrences
    }
}

/// A pattern paired with its automaton, reusable across texts.
#[derive(Clone, Debug)]
pub struct Matcher {
    pattern: VlgPattern,
    automaton: Automaton,
}

impl Matcher {
    pub fn new(pattern: VlgPattern) -> Self {
        let automaton =
            Automaton::build(pattern.subpatterns()).expect("validated patterns have non-empty subpatterns");
        Self { pattern, automaton }
    }

    pub fn pattern(&self) -> &VlgPattern {
        &self.pattern
    }

    pub fn automaton(&self) -> &Automaton {
        &self.automaton
    }

    pub fn find_endpoints(&self, text: &[u8]) -> Vec<usize> {
        let mut out = Vec::new();
        self.run(text, &mut NoProbe, |tau| out.push(tau));
        out
    }

    /// Full pass over `text`, reporting match end positions in ascending order.
    pub fn run(&self, text: &[u8], probe: &mut impl Probe, emit: impl FnMut(usize)) -> MatchSummary {
        self.run_with(MatcherState::new(&self.pattern), text, probe, emit)
    }

    pub fn run_with(
        &self,
        mut state: MatcherState,
        text: &[u8],
        probe: &mut impl Probe,
        mut emit: impl FnMut(usize),
    ) -> MatchSummary {
        let p = &self.pattern;
        let mut layer_occurrences = vec![0; p.k()];
        let scan = if p.m() > text.len() {
            ScanStats::default()
        } else {
            self.automaton.stream(text, |ev| {
                for &l in &ev.layers {
                    layer_occurrences[l] += 1;
                }
                state.process_event(p, ev, probe, &mut emit);
            })
        };
        MatchSummary {
            scan,
            counters: state.counters(),
            layer_occurrences,
            peak_list_sizes: state.peak_sizes().to_vec(),
        }
    }
}

/// End positions of all substrings of `text` matching `p`, ascending.
pub fn find_endpoints(p: &VlgPattern, text: &[u8]) -> Vec<usize> {
    if p.m() > text.len() {
        return Vec::new();
    }
    Matcher::new(p.clone()).find_endpoints(text)
}
