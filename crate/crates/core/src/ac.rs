//! Comparison-based Aho-Corasick automaton over the subpattern strings.
//!
//! Transitions out of a state live in a sorted array searched by binary
//! search, so building costs `O(m log k)` and scanning `O(n log k + α)`
//! without any assumption on the alphabet. Each state keeps a compact output
//! record: the longest pattern string that is a suffix of its path, and a link
//! to the state spelling the next shorter one. Walking that chain enumerates
//! `occ(s)` in `O(|occ(s)|)`.

use std::collections::VecDeque;

use thiserror::Error;

pub type StateId = usize;

pub const ROOT: StateId = 0;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("pattern string {index} is empty")]
    EmptyString { index: usize },
}

#[derive(Debug, Clone)]
struct State {
    /// Sorted by label.
    transitions: Vec<(u8, StateId)>,
    failure: StateId,
    parent: StateId,
    depth: usize,
    /// Distinct string id whose path ends exactly here.
    terminal: Option<usize>,
    /// Longest string in `occ(s)`.
    occ_head: Option<usize>,
    /// State whose path is the second longest string in `occ(s)`.
    occ_link: Option<StateId>,
}

impl State {
    fn new(parent: StateId, depth: usize) -> Self {
        Self {
            transitions: Vec::new(),
            failure: ROOT,
            parent,
            depth,
            terminal: None,
            occ_head: None,
            occ_link: None,
        }
    }

    fn child(&self, label: u8) -> Option<StateId> {
        self.transitions
            .binary_search_by_key(&label, |&(c, _)| c)
            .ok()
            .map(|i| self.transitions[i].1)
    }
}

/// One text position where at least one subpattern ends.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OccEvent {
    /// 1-based end position in the text.
    pub position: usize,
    /// 0-based layer indices whose subpattern ends here, ascending.
    pub layers: Vec<usize>,
}

/// Work counters for one scan.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ScanStats {
    pub chars: usize,
    pub trie_steps: usize,
    pub failure_steps: usize,
    pub events: usize,
    /// Total layer entries over all events (α).
    pub occurrences: usize,
}

#[derive(Debug, Clone)]
pub struct Automaton {
    states: Vec<State>,
    strings: Vec<Vec<u8>>,
    layers_of: Vec<Vec<usize>>,
}

impl Automaton {
    /// Builds the automaton for `strings`, where `strings[i]` is the
    /// subpattern of layer `i`. Equal strings share one trie path.
    pub fn build<S: AsRef<[u8]>>(strings: &[S]) -> Result<Self, BuildError> {
        let mut ac = Automaton {
            states: vec![State::new(ROOT, 0)],
            strings: Vec::new(),
            layers_of: Vec::new(),
        };
        for (layer, s) in strings.iter().enumerate() {
            let s = s.as_ref();
            if s.is_empty() {
                return Err(BuildError::EmptyString { index: layer });
            }
            ac.insert(s, layer);
        }
        ac.link();
        Ok(ac)
    }

    fn insert(&mut self, s: &[u8], layer: usize) {
        let mut cur = ROOT;
        for &c in s {
            cur = match self.states[cur].transitions.binary_search_by_key(&c, |&(l, _)| l) {
                Ok(i) => self.states[cur].transitions[i].1,
                Err(i) => {
                    let id = self.states.len();
                    let depth = self.states[cur].depth + 1;
                    self.states.push(State::new(cur, depth));
                    self.states[cur].transitions.insert(i, (c, id));
                    id
                }
            };
        }
        let id = match self.states[cur].terminal {
            Some(id) => id,
            None => {
                let id = self.strings.len();
                self.strings.push(s.to_vec());
                self.layers_of.push(Vec::new());
                self.states[cur].terminal = Some(id);
                id
            }
        };
        self.layers_of[id].push(layer);
    }

    /// Breadth-first pass computing failure links and compact occ records.
    fn link(&mut self) {
        // Nearest state on the failure chain (inclusive) that is terminal.
        let mut output: Vec<Option<StateId>> = vec![None; self.states.len()];
        let mut queue = VecDeque::new();
        queue.push_back(ROOT);
        while let Some(u) = queue.pop_front() {
            let transitions = self.states[u].transitions.clone();
            for (c, v) in transitions {
                let failure = if u == ROOT {
                    ROOT
                } else {
                    let mut f = self.states[u].failure;
                    loop {
                        if let Some(t) = self.states[f].child(c) {
                            break t;
                        }
                        if f == ROOT {
                            break ROOT;
                        }
                        f = self.states[f].failure;
                    }
                };
                self.states[v].failure = failure;
                output[v] = if self.states[v].terminal.is_some() {
                    Some(v)
                } else {
                    output[failure]
                };
                queue.push_back(v);
            }
        }
        for s in 0..self.states.len() {
            if let Some(o) = output[s] {
                self.states[s].occ_head = self.states[o].terminal;
                self.states[s].occ_link = output[self.states[o].failure];
            }
        }
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    /// Distinct strings in first-appearance order.
    pub fn strings(&self) -> &[Vec<u8>] {
        &self.strings
    }

    /// Layers sharing distinct string `id`, ascending.
    pub fn layers_of(&self, id: usize) -> &[usize] {
        &self.layers_of[id]
    }

    pub fn failure(&self, s: StateId) -> StateId {
        self.states[s].failure
    }

    pub fn depth(&self, s: StateId) -> usize {
        self.states[s].depth
    }

    /// State reached by following trie edges spelling `path`, if any.
    pub fn find_state(&self, path: &[u8]) -> Option<StateId> {
        path.iter()
            .try_fold(ROOT, |s, &c| self.states[s].child(c))
    }

    pub fn path(&self, s: StateId) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.states[s].depth);
        let mut cur = s;
        while cur != ROOT {
            let parent = self.states[cur].parent;
            let label = self.states[parent]
                .transitions
                .iter()
                .find(|&&(_, t)| t == cur)
                .map(|&(c, _)| c)
                .expect("child is linked from its parent");
            out.push(label);
            cur = parent;
        }
        out.reverse();
        out
    }

    /// Distinct string ids that are suffixes of `path(s)`, longest first.
    pub fn occ(&self, s: StateId) -> Vec<usize> {
        let mut out = Vec::new();
        self.for_each_occ(s, |id| out.push(id));
        out
    }

    fn for_each_occ(&self, s: StateId, mut f: impl FnMut(usize)) {
        let Some(head) = self.states[s].occ_head else {
            return;
        };
        f(head);
        let mut link = self.states[s].occ_link;
        while let Some(t) = link {
            f(self.states[t].occ_head.expect("occ links point at terminal states"));
            link = self.states[t].occ_link;
        }
    }

    fn next_state(&self, mut s: StateId, c: u8, stats: &mut ScanStats) -> StateId {
        loop {
            if let Some(t) = self.states[s].child(c) {
                stats.trie_steps += 1;
                return t;
            }
            if s == ROOT {
                return ROOT;
            }
            s = self.states[s].failure;
            stats.failure_steps += 1;
        }
    }

    pub fn scanner(&self) -> Scanner<'_> {
        Scanner {
            automaton: self,
            state: ROOT,
            position: 0,
            stats: ScanStats::default(),
            event: OccEvent::default(),
        }
    }

    /// Scans `text` left to right, handing every non-empty event to `sink`
    /// in strictly increasing position order.
    pub fn stream<F: FnMut(&OccEvent)>(&self, text: &[u8], mut sink: F) -> ScanStats {
        let mut scanner = self.scanner();
        for &c in text {
            if let Some(ev) = scanner.push(c) {
                sink(ev);
            }
        }
        scanner.stats()
    }
}

/// Incremental scan state; feed bytes one at a time.
#[derive(Debug)]
pub struct Scanner<'a> {
    automaton: &'a Automaton,
    state: StateId,
    position: usize,
    stats: ScanStats,
    event: OccEvent,
}

impl<'a> Scanner<'a> {
    pub fn push(&mut self, c: u8) -> Option<&OccEvent> {
        let ac = self.automaton;
        self.position += 1;
        self.stats.chars += 1;
        self.state = ac.next_state(self.state, c, &mut self.stats);
        self.event.layers.clear();
        let layers = &mut self.event.layers;
        ac.for_each_occ(self.state, |id| layers.extend_from_slice(&ac.layers_of[id]));
        if layers.is_empty() {
            return None;
        }
        layers.sort_unstable();
        self.event.position = self.position;
        self.stats.events += 1;
        self.stats.occurrences += self.event.layers.len();
        Some(&self.event)
    }

    pub fn position(&self) -> usize {
        self.position
    }

    pub fn stats(&self) -> ScanStats {
        self.stats
    }
}
