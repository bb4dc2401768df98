//! Variable-length-gap pattern matching.
//!
//! A pattern `P1 .{a1,b1} P2 ... Pk` matches a substring made of the
//! subpatterns in order, separated by fillers whose lengths lie within the
//! gap bounds. The crate offers:
//!
//! * [`matcher`]: end positions of all matches in one streaming pass, using
//!   `O(m + A)` working space;
//! * [`gapgraph`]: the implicit gap graph of all relevant occurrences;
//! * [`reporter`]: every match combination, chunked or on the fly;
//! * [`oracle`]: brute-force references for testing.
//!
//! ```
//! use vlg_core::{find_endpoints, VlgPattern};
//!
//! let p = VlgPattern::parse("A.{6,7}CC.{2,6}GT").unwrap();
//! let ends = find_endpoints(&p, b"ATCGGCTCCAGACCAGTACCCGTTCCGTGGT");
//! assert_eq!(ends, vec![17, 28, 31]);
//! ```

pub mod ac;
pub mod gapgraph;
pub mod matcher;
pub mod oracle;
pub mod pattern;
pub mod reporter;

use thiserror::Error;

pub use gapgraph::{build_implicit_gap_graph, ImplicitGapGraph};
pub use matcher::{find_endpoints, Matcher};
pub use pattern::{GapBounds, PatternError, PatternStats, VlgPattern};
pub use reporter::{report_chunked, report_on_the_fly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error("operation requires every gap to have an upper bound")]
    UnboundedGap,
    #[error("chunk length {len} is shorter than the longest possible match ({span})")]
    ChunkTooShort { len: usize, span: usize },
}
