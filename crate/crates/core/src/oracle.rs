//! Brute-force reference implementations.
//!
//! Everything here works from sliding-window occurrence lists and direct
//! application of the definitions, sharing no code with the automaton, the
//! range lists or the gap graph. Meant for verification on small inputs.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::pattern::VlgPattern;

pub const MAX_TEXT_LEN: usize = 10_000;
pub const MAX_COMBINATIONS: u128 = 10_000_000;

/// `(layer, endpos)` of a node mapped to its first and last predecessor ends.
pub type EdgeMap = BTreeMap<(usize, usize), (usize, usize)>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("text of {0} bytes exceeds the oracle limit of {MAX_TEXT_LEN}")]
    TextTooLong(usize),
    #[error("{0} match combinations exceed the oracle limit of {MAX_COMBINATIONS}")]
    TooManyCombinations(u128),
}

/// End positions (1-based) of every occurrence of `s` in `text`.
pub fn naive_occurrences(s: &[u8], text: &[u8]) -> Vec<usize> {
    if s.is_empty() || s.len() > text.len() {
        return Vec::new();
    }
    text.windows(s.len())
        .enumerate()
        .filter(|(_, w)| *w == s)
        .map(|(i, _)| i + s.len())
        .collect()
}

fn check_len(text: &[u8]) -> Result<(), OracleError> {
    if text.len() > MAX_TEXT_LEN {
        return Err(OracleError::TextTooLong(text.len()));
    }
    Ok(())
}

/// Is an occurrence of layer `layer + 1` ending at `next_end` compatible
/// with the occurrence of layer `layer` ending at `end`?
fn compatible(p: &VlgPattern, layer: usize, end: usize, next_end: usize) -> bool {
    let gap = p.gaps()[layer];
    let next_start = next_end + 1 - p.sublen(layer + 1);
    let lo = end + gap.lower + 1;
    match gap.upper {
        Some(b) => lo <= next_start && next_start <= end + b + 1,
        None => lo <= next_start,
    }
}

fn occurrences(p: &VlgPattern, text: &[u8]) -> Vec<Vec<usize>> {
    p.subpatterns()
        .iter()
        .map(|s| naive_occurrences(s, text))
        .collect()
}

/// Relevant occurrences per layer, by a forward pass over the definition.
pub fn brute_force_relevant(p: &VlgPattern, text: &[u8]) -> Result<Vec<BTreeSet<usize>>, OracleError> {
    check_len(text)?;
    let occ = occurrences(p, text);
    let mut relevant: Vec<BTreeSet<usize>> = Vec::with_capacity(p.k());
    relevant.push(occ[0].iter().copied().collect());
    for layer in 1..p.k() {
        let prev = &relevant[layer - 1];
        let set = occ[layer]
            .iter()
            .copied()
            .filter(|&y| prev.iter().any(|&x| compatible(p, layer - 1, x, y)))
            .collect();
        relevant.push(set);
    }
    Ok(relevant)
}

/// First and last compatible relevant predecessor of every relevant
/// occurrence above layer 0, keyed by `(layer, endpos)`.
pub fn implicit_edges(
    p: &VlgPattern,
    text: &[u8],
) -> Result<EdgeMap, OracleError> {
    let relevant = brute_force_relevant(p, text)?;
    let mut edges = BTreeMap::new();
    for layer in 1..p.k() {
        for &y in &relevant[layer] {
            let mut preds = relevant[layer - 1]
                .iter()
                .copied()
                .filter(|&x| compatible(p, layer - 1, x, y));
            let first = preds.next().expect("relevant nodes have a predecessor");
            let last = preds.next_back().unwrap_or(first);
            edges.insert((layer, y), (first, last));
        }
    }
    Ok(edges)
}

/// Distinct match end positions, by depth-first search from every
/// occurrence of the first subpattern.
pub fn brute_force_endpoints(p: &VlgPattern, text: &[u8]) -> Result<Vec<usize>, OracleError> {
    check_len(text)?;
    let occ = occurrences(p, text);
    let k = p.k();
    let mut visited: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); k];
    let mut stack: Vec<(usize, usize)> = occ[0].iter().map(|&e| (0, e)).collect();
    while let Some((layer, end)) = stack.pop() {
        if !visited[layer].insert(end) || layer + 1 == k {
            continue;
        }
        for &next in &occ[layer + 1] {
            if compatible(p, layer, end, next) {
                stack.push((layer + 1, next));
            }
        }
    }
    Ok(visited[k - 1].iter().copied().collect())
}

/// Number of match combinations, by dynamic programming over occurrences.
pub fn count_combinations(p: &VlgPattern, text: &[u8]) -> Result<u128, OracleError> {
    check_len(text)?;
    let occ = occurrences(p, text);
    let mut counts: Vec<u128> = vec![1; occ[0].len()];
    for layer in 1..p.k() {
        counts = occ[layer]
            .iter()
            .map(|&y| {
                occ[layer - 1]
                    .iter()
                    .zip(&counts)
                    .filter(|(&x, _)| compatible(p, layer - 1, x, y))
                    .fold(0u128, |acc, (_, &c)| acc.saturating_add(c))
            })
            .collect();
    }
    Ok(counts.iter().fold(0u128, |acc, &c| acc.saturating_add(c)))
}

/// Every match combination, by backtracking over the occurrence lists.
pub fn brute_force_combinations(p: &VlgPattern, text: &[u8]) -> Result<BTreeSet<Vec<usize>>, OracleError> {
    let beta = count_combinations(p, text)?;
    if beta > MAX_COMBINATIONS {
        return Err(OracleError::TooManyCombinations(beta));
    }
    let occ = occurrences(p, text);
    let mut out = BTreeSet::new();
    let mut partial = Vec::with_capacity(p.k());
    for &e in &occ[0] {
        partial.push(e);
        extend(p, &occ, &mut partial, &mut out);
        partial.pop();
    }
    Ok(out)
}

fn extend(p: &VlgPattern, occ: &[Vec<usize>], partial: &mut Vec<usize>, out: &mut BTreeSet<Vec<usize>>) {
    let layer = partial.len() - 1;
    if layer + 1 == p.k() {
        out.insert(partial.clone());
        return;
    }
    let end = partial[layer];
    for &next in &occ[layer + 1] {
        if compatible(p, layer, end, next) {
            partial.push(next);
            extend(p, occ, partial, out);
            partial.pop();
        }
    }
}

/// Everything the oracle knows about one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub occurrences: Vec<Vec<usize>>,
    pub relevant: Vec<BTreeSet<usize>>,
    pub endpoints: Vec<usize>,
    pub combinations: BTreeSet<Vec<usize>>,
    pub edges: EdgeMap,
}

/// Runs every oracle. Combinations require bounded gaps.
pub fn evaluate(p: &VlgPattern, text: &[u8]) -> Result<OracleResult, OracleError> {
    Ok(OracleResult {
        occurrences: occurrences(p, text),
        relevant: brute_force_relevant(p, text)?,
        endpoints: brute_force_endpoints(p, text)?,
        combinations: brute_force_combinations(p, text)?,
        edges: implicit_edges(p, text)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE_TEXT: &[u8] = b"ATCGGCTCCAGACCAGTACCCGTTCCGTGGT";

    fn running() -> VlgPattern {
        VlgPattern::parse("A.{6,7}CC.{2,6}GT").unwrap()
    }

    #[test]
    fn naive_scan() {
        assert_eq!(naive_occurrences(b"CC", EXAMPLE_TEXT), vec![9, 14, 20, 21, 26]);
        assert!(naive_occurrences(b"X", b"YYY").is_empty());
        assert_eq!(naive_occurrences(b"AA", b"AAA"), vec![2, 3]);
    }

    #[test]
    fn relevant_running_example() {
        let rel = brute_force_relevant(&running(), EXAMPLE_TEXT).unwrap();
        assert_eq!(rel[0], [1, 10, 12, 15, 18].into_iter().collect());
        assert_eq!(rel[1], [9, 20, 21, 26].into_iter().collect());
        assert!(!rel[1].contains(&14));
        assert_eq!(rel[2], [17, 28, 31].into_iter().collect());
    }

    #[test]
    fn endpoints_running_example() {
        assert_eq!(brute_force_endpoints(&running(), EXAMPLE_TEXT).unwrap(), vec![17, 28, 31]);
        assert!(brute_force_endpoints(&running(), b"").unwrap().is_empty());
    }

    #[test]
    fn combinations_ending_at_17() {
        let p = VlgPattern::parse("G.{0,3}C.{1,6}A.{2,7}T").unwrap();
        let all = brute_force_combinations(&p, EXAMPLE_TEXT).unwrap();
        let ending17: Vec<&Vec<usize>> = all.iter().filter(|c| c[3] == 17).collect();
        // Four more end at 17 but belong to the match starting at 4.
        assert_eq!(ending17.len(), 9);
        let at17: Vec<Vec<usize>> = all.into_iter().filter(|c| c[0] == 5 && c[3] == 17).collect();
        assert_eq!(
            at17,
            vec![
                vec![5, 6, 10, 17],
                vec![5, 6, 12, 17],
                vec![5, 8, 10, 17],
                vec![5, 8, 12, 17],
                vec![5, 9, 12, 17],
            ]
        );
    }

    #[test]
    fn projections_consistent() {
        let p = VlgPattern::parse("G.{0,3}C.{1,6}A.{2,7}T").unwrap();
        let r = evaluate(&p, EXAMPLE_TEXT).unwrap();
        let projected: BTreeSet<usize> = r.combinations.iter().map(|c| c[3]).collect();
        assert_eq!(projected.into_iter().collect::<Vec<_>>(), r.endpoints);
        assert_eq!(r.relevant[3].iter().copied().collect::<Vec<_>>(), r.endpoints);
        for c in &r.combinations {
            for (layer, e) in c.iter().enumerate() {
                assert!(r.relevant[layer].contains(e));
            }
        }
        assert_eq!(count_combinations(&p, EXAMPLE_TEXT).unwrap(), r.combinations.len() as u128);
    }

    #[test]
    fn caps() {
        let p = VlgPattern::parse("A").unwrap();
        let big = vec![b'A'; MAX_TEXT_LEN + 1];
        assert_eq!(
            brute_force_endpoints(&p, &big),
            Err(OracleError::TextTooLong(MAX_TEXT_LEN + 1))
        );
        let q = VlgPattern::parse("A.{0,40}A.{0,40}A.{0,40}A.{0,40}A").unwrap();
        let text = vec![b'A'; 400];
        assert!(matches!(
            brute_force_combinations(&q, &text),
            Err(OracleError::TooManyCombinations(_))
        ));
    }
}
