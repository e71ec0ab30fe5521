pub mod corpus;
pub mod error;
pub mod matcher;
pub mod stree;
pub mod approx;
pub mod exact;
pub mod oracle;
pub mod meter;
pub mod bench;

pub use corpus::{Corpus, DocSpan, Symbol};
pub use error::{Error, Result};
