//! WHATWG-compliant URL parsing and normalization built around a single
//! normalized buffer and optimistic fast paths.
//!
//! Parsing writes the normalized serialization once, left to right, into one
//! ASCII buffer; eight component offsets (plus the buffer length) locate
//! every component, so accessors are zero-copy views:
//!
//! ```
//! use urlkit::Url;
//!
//! let url = Url::parse("https://User@Example.COM:443/a/../b?q#f", None).unwrap();
//! assert_eq!(url.href(), "https://User@example.com/b?q#f");
//! assert_eq!(url.hostname(), "example.com");
//! assert_eq!(url.pathname(), "/b");
//! ```
//!
//! Cheap classification scans decide when work can be skipped: tab/newline
//! removal, host lowercasing and punycode, and path normalization all have
//! verbatim-copy fast paths chosen by [`scanners`].

pub mod cli;
pub mod encoding;
pub mod host;
pub mod parser;
pub mod scanners;
mod setters;
mod tables;
mod url;

pub use crate::parser::{parse, ParseStats};
pub use crate::url::{ParseError, SchemeType, Url, UrlComponents, OMITTED};
