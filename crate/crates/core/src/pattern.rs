//! Variable-length-gap patterns.
//!
//! A pattern is a sequence of literal byte strings separated by gaps, where a
//! gap `.{a,b}` matches any filler of `a..=b` bytes and `.{a,*}` any filler of
//! at least `a` bytes. Concrete syntax:
//!
//! ```text
//! pattern    := subpattern ( gap subpattern )*
//! gap        := ".{" INT "," ( INT | "*" ) "}"
//! subpattern := ( LITERAL | "\" ESCAPED )+      ESCAPED in { ".", "\", "{" }
//! ```

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Length bounds of a single gap, in bytes. `upper == None` means unbounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GapBounds {
    pub lower: usize,
    pub upper: Option<usize>,
}

impl GapBounds {
    pub fn new(lower: usize, upper: usize) -> Self {
        Self { lower, upper: Some(upper) }
    }

    pub fn unbounded(lower: usize) -> Self {
        Self { lower, upper: None }
    }

    pub fn is_bounded(&self) -> bool {
        self.upper.is_some()
    }

    /// Number of admissible gap lengths, `upper - lower + 1`.
    pub fn width(&self) -> Option<usize> {
        self.upper.map(|b| b - self.lower + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("empty pattern")]
    Empty,
    #[error("empty subpattern at index {index}")]
    EmptySubpattern { index: usize },
    #[error("gap {index} has lower bound {lower} greater than upper bound {upper}")]
    InvertedGap { index: usize, lower: usize, upper: usize },
    #[error("pattern must start with a subpattern, found a gap at byte {position}")]
    GapAtStart { position: usize },
    #[error("pattern must end with a subpattern")]
    GapAtEnd,
    #[error("gap {index} follows another gap with no subpattern in between")]
    AdjacentGaps { index: usize },
    #[error("expected {expected} gaps for {subpatterns} subpatterns, got {gaps}")]
    GapCount {
        subpatterns: usize,
        gaps: usize,
        expected: usize,
    },
}

/// Derived size parameters of a pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PatternStats {
    /// Total subpattern length.
    pub m: usize,
    /// Number of subpatterns.
    pub k: usize,
    /// Sum of gap lower bounds.
    pub a: usize,
    /// Sum of gap upper bounds, `None` if some gap is unbounded.
    pub b: Option<usize>,
}

/// A parsed and validated variable-length-gap pattern `P1 .{a1,b1} P2 ... Pk`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VlgPattern {
    subpatterns: Vec<Vec<u8>>,
    gaps: Vec<GapBounds>,
}

impl VlgPattern {
    /// Builds a pattern from its parts. Gap indices in errors are 1-based.
    pub fn new(subpatterns: Vec<Vec<u8>>, gaps: Vec<GapBounds>) -> Result<Self, PatternError> {
        if subpatterns.is_empty() {
            return Err(PatternError::Empty);
        }
        if gaps.len() + 1 != subpatterns.len() {
            return Err(PatternError::GapCount {
                subpatterns: subpatterns.len(),
                gaps: gaps.len(),
                expected: subpatterns.len() - 1,
            });
        }
        if let Some(index) = subpatterns.iter().position(|s| s.is_empty()) {
            return Err(PatternError::EmptySubpattern { index: index + 1 });
        }
        for (i, g) in gaps.iter().enumerate() {
            if let Some(upper) = g.upper {
                if g.lower > upper {
                    return Err(PatternError::InvertedGap {
                        index: i + 1,
                        lower: g.lower,
                        upper,
                    });
                }
            }
        }
        Ok(Self { subpatterns, gaps })
    }

    pub fn parse(expr: &str) -> Result<Self, PatternError> {
        parse_pattern(expr.as_bytes())
    }

    pub fn subpatterns(&self) -> &[Vec<u8>] {
        &self.subpatterns
    }

    pub fn subpattern(&self, layer: usize) -> &[u8] {
        &self.subpatterns[layer]
    }

    pub fn sublen(&self, layer: usize) -> usize {
        self.subpatterns[layer].len()
    }

    pub fn gaps(&self) -> &[GapBounds] {
        &self.gaps
    }

    /// The gap following subpattern `layer` (0-based); `None` for the last one.
    pub fn gap_after(&self, layer: usize) -> Option<GapBounds> {
        self.gaps.get(layer).copied()
    }

    pub fn k(&self) -> usize {
        self.subpatterns.len()
    }

    pub fn m(&self) -> usize {
        self.subpatterns.iter().map(Vec::len).sum()
    }

    pub fn lower_sum(&self) -> usize {
        self.gaps.iter().map(|g| g.lower).sum()
    }

    pub fn upper_sum(&self) -> Option<usize> {
        self.gaps
            .iter()
            .try_fold(0usize, |acc, g| g.upper.map(|b| acc.saturating_add(b)))
    }

    pub fn is_bounded(&self) -> bool {
        self.gaps.iter().all(GapBounds::is_bounded)
    }

    /// Longest possible match, `m + B`.
    pub fn max_span(&self) -> Option<usize> {
        self.upper_sum().map(|b| b.saturating_add(self.m()))
    }

    pub fn stats(&self) -> PatternStats {
        PatternStats {
            m: self.m(),
            k: self.k(),
            a: self.lower_sum(),
            b: self.upper_sum(),
        }
    }
}

impl FromStr for VlgPattern {
    type Err = PatternError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

/// Renders back into the concrete syntax; reparses to an equal pattern.
impl fmt::Display for VlgPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, sub) in self.subpatterns.iter().enumerate() {
            if i > 0 {
                let g = self.gaps[i - 1];
                match g.upper {
                    Some(b) => write!(f, ".{{{},{}}}", g.lower, b)?,
                    None => write!(f, ".{{{},*}}", g.lower)?,
                }
            }
            let mut bytes = Vec::with_capacity(sub.len());
            for &c in sub {
                if matches!(c, b'.' | b'\\' | b'{') {
                    bytes.push(b'\\');
                }
                bytes.push(c);
            }
            f.write_str(&String::from_utf8_lossy(&bytes))?;
        }
        Ok(())
    }
}

pub fn parse_pattern(expr: &[u8]) -> Result<VlgPattern, PatternError> {
    if expr.is_empty() {
        return Err(PatternError::Empty);
    }
    let mut subpatterns = Vec::new();
    let mut gaps = Vec::new();
    let mut current: Vec<u8> = Vec::new();
    let mut pos = 0;

    while pos < expr.len() {
        match expr[pos] {
            b'\\' => {
                match expr.get(pos + 1) {
                    Some(&c @ (b'.' | b'\\' | b'{')) => current.push(c),
                    Some(&c) => {
                        return Err(syntax(pos, format!("invalid escape '\\{}'", c as char)));
                    }
                    None => return Err(syntax(pos, "dangling backslash")),
                }
                pos += 2;
            }
            b'.' => {
                let (gap, next) = parse_gap(expr, pos, gaps.len() + 1)?;
                if current.is_empty() {
                    if subpatterns.is_empty() {
                        return Err(PatternError::GapAtStart { position: pos });
                    }
                    return Err(PatternError::AdjacentGaps { index: gaps.len() + 1 });
                }
                subpatterns.push(std::mem::take(&mut current));
                gaps.push(gap);
                pos = next;
            }
            b'{' => return Err(syntax(pos, "unescaped '{' outside a gap")),
            c => {
                current.push(c);
                pos += 1;
            }
        }
    }
    if current.is_empty() {
        return Err(PatternError::GapAtEnd);
    }
    subpatterns.push(current);
    VlgPattern::new(subpatterns, gaps)
}

fn syntax(position: usize, message: impl Into<String>) -> PatternError {
    PatternError::Syntax {
        position,
        message: message.into(),
    }
}

/// Parses `.{a,b}` / `.{a,*}` starting at `start`; returns the gap and the
/// position just past the closing brace.
fn parse_gap(expr: &[u8], start: usize, index: usize) -> Result<(GapBounds, usize), PatternError> {
    let mut pos = start + 1;
    if expr.get(pos) != Some(&b'{') {
        return Err(syntax(pos, "expected '{' after '.'"));
    }
    pos += 1;
    let (lower, next) = parse_int(expr, pos)?;
    pos = next;
    if expr.get(pos) != Some(&b',') {
        return Err(syntax(pos, "expected ',' in gap"));
    }
    pos += 1;
    let upper = if expr.get(pos) == Some(&b'*') {
        pos += 1;
        None
    } else {
        let (b, next) = parse_int(expr, pos)?;
        pos = next;
        Some(b)
    };
    if expr.get(pos) != Some(&b'}') {
        return Err(syntax(pos, "expected '}' closing gap"));
    }
    if let Some(upper) = upper {
        if lower > upper {
            return Err(PatternError::InvertedGap { index, lower, upper });
        }
    }
    Ok((GapBounds { lower, upper }, pos + 1))
}

fn parse_int(expr: &[u8], start: usize) -> Result<(usize, usize), PatternError> {
    let digits = expr[start.min(expr.len())..]
        .iter()
        .take_while(|c| c.is_ascii_digit())
        .count();
    if digits == 0 {
        return Err(syntax(start, "expected a decimal integer"));
    }
    let text = std::str::from_utf8(&expr[start..start + digits]).expect("ascii digits");
    let value = text
        .parse::<usize>()
        .map_err(|_| syntax(start, "integer out of range"))?;
    Ok((value, start + digits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_running_example() {
        let p = VlgPattern::parse("A.{6,7}CC.{2,6}GT").unwrap();
        assert_eq!(p.k(), 3);
        assert_eq!(p.subpatterns(), &[b"A".to_vec(), b"CC".to_vec(), b"GT".to_vec()]);
        assert_eq!(p.gaps(), &[GapBounds::new(6, 7), GapBounds::new(2, 6)]);
        assert_eq!(
            p.stats(),
            PatternStats { m: 5, k: 3, a: 8, b: Some(13) }
        );
    }

    #[test]
    fn single_subpattern() {
        let p = VlgPattern::parse("GT").unwrap();
        assert_eq!(p.stats(), PatternStats { m: 2, k: 1, a: 0, b: Some(0) });
        assert!(p.gaps().is_empty());
    }

    #[test]
    fn gap_graph_example_pattern() {
        let p = VlgPattern::parse("C.{0,3}G.{3,10}A").unwrap();
        assert_eq!(p.gaps(), &[GapBounds::new(0, 3), GapBounds::new(3, 10)]);
    }

    #[test]
    fn unbounded_gap() {
        let p = VlgPattern::parse("A.{0,*}B").unwrap();
        assert_eq!(p.stats(), PatternStats { m: 2, k: 2, a: 0, b: None });
        assert!(!p.is_bounded());
        assert_eq!(p.max_span(), None);
    }

    #[test]
    fn zero_gap_is_legal() {
        let p = VlgPattern::parse("A.{0,0}T").unwrap();
        assert_eq!(p.gaps()[0].width(), Some(1));
    }

    #[test]
    fn escapes() {
        let p = VlgPattern::parse(r"a\.b\\c\{.{1,2}}x,*").unwrap();
        assert_eq!(p.subpattern(0), b"a.b\\c{");
        assert_eq!(p.subpattern(1), b"}x,*");
        assert_eq!(p.to_string(), r"a\.b\\c\{.{1,2}}x,*");
    }

    #[test]
    fn rejects_trailing_gap() {
        assert_eq!(VlgPattern::parse("A.{6,7}"), Err(PatternError::GapAtEnd));
    }

    #[test]
    fn rejects_leading_gap() {
        assert_eq!(
            VlgPattern::parse(".{1,2}A"),
            Err(PatternError::GapAtStart { position: 0 })
        );
    }

    #[test]
    fn rejects_adjacent_gaps() {
        assert_eq!(
            VlgPattern::parse("A.{1,2}.{3,4}B"),
            Err(PatternError::AdjacentGaps { index: 2 })
        );
    }

    #[test]
    fn rejects_inverted_gap_with_index() {
        assert_eq!(
            VlgPattern::parse("A.{1,2}B.{5,3}C"),
            Err(PatternError::InvertedGap { index: 2, lower: 5, upper: 3 })
        );
    }

    #[test]
    fn rejects_empty() {
        assert_eq!(VlgPattern::parse(""), Err(PatternError::Empty));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let cases = [
            ("A.B", 2),
            ("A.{x,2}B", 3),
            ("A.{1;2}B", 4),
            ("A.{1,2B", 6),
            ("A{", 1),
            ("A\\", 1),
            ("A\\n", 1),
            ("A.{1,", 5),
        ];
        for (expr, at) in cases {
            match VlgPattern::parse(expr) {
                Err(PatternError::Syntax { position, .. }) => assert_eq!(position, at, "{expr}"),
                other => panic!("{expr}: expected syntax error, got {other:?}"),
            }
        }
    }

    #[test]
    fn new_validates_parts() {
        assert_eq!(
            VlgPattern::new(vec![b"A".to_vec(), vec![]], vec![GapBounds::new(0, 1)]),
            Err(PatternError::EmptySubpattern { index: 2 })
        );
        assert!(matches!(
            VlgPattern::new(vec![b"A".to_vec()], vec![GapBounds::new(0, 1)]),
            Err(PatternError::GapCount { .. })
        ));
    }

    fn arb_pattern() -> impl Strategy<Value = VlgPattern> {
        let sub = proptest::collection::vec(
            prop_oneof![Just(b'.'), Just(b'\\'), Just(b'{'), Just(b'}'), Just(b','), b'A'..=b'Z'],
            1..5,
        );
        let gap = (0usize..20, proptest::option::of(0usize..10))
            .prop_map(|(a, w)| GapBounds { lower: a, upper: w.map(|w| a + w) });
        proptest::collection::vec((sub, gap), 1..5).prop_map(|parts| {
            let n = parts.len();
            let (subs, mut gaps): (Vec<_>, Vec<_>) = parts.into_iter().unzip();
            gaps.truncate(n - 1);
            VlgPattern::new(subs, gaps).unwrap()
        })
    }

    proptest! {
        #[test]
        fn render_reparses(p in arb_pattern()) {
            let rendered = p.to_string();
            prop_assert_eq!(VlgPattern::parse(&rendered).unwrap(), p);
        }
    }
}
