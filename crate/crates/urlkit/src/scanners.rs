//! Optimistic fast-path scanners. Each routine makes one cheap pass over its
//! input and tells the parser whether the expensive normalization work can be
//! skipped entirely.

use crate::tables;
use crate::url::SchemeType;

const BLOCK: usize = 16;

/// Lookup table for the scheme perfect hash, indexed by
/// `(2 * len + first byte) & 7`. Slot 1 is the residue no special scheme
/// hashes to.
static SPECIAL_SCHEMES: [&str; 7] = ["http", "", "https", "ws", "ftp", "wss", "file"];

#[inline]
fn block_has_tab_or_newline(block: &[u8; BLOCK]) -> u8 {
    // Two 8-byte SWAR lanes per block. For each target byte t, a lane
    // contains t iff (w ^ t*0x0101..) has a zero byte, detected with the
    // classic (x - 0x01..) & !x & 0x80.. trick. Everything is OR-accumulated;
    // no byte-dependent branches.
    let mut acc: u64 = 0;
    for lane in 0..2 {
        let w = u64::from_le_bytes(block[lane * 8..lane * 8 + 8].try_into().unwrap());
        for t in [0x09u64, 0x0A, 0x0D] {
            let x = w ^ (t * 0x0101_0101_0101_0101);
            acc |= x.wrapping_sub(0x0101_0101_0101_0101) & !x & 0x8080_8080_8080_8080;
        }
    }
    (acc != 0) as u8
}

/// True iff the input contains a tab, line feed, or carriage return.
///
/// The input is consumed whole in 16-byte blocks with the matches
/// OR-accumulated; a short tail is copied into a zero-padded stack block so
/// every byte flows through the same path. The single data-dependent branch
/// is the final comparison, on the assumption that these characters almost
/// never occur.
pub fn has_tabs_or_newline(input: &[u8]) -> bool {
    let mut running: u8 = 0;
    let mut chunks = input.chunks_exact(BLOCK);
    for chunk in &mut chunks {
        running |= block_has_tab_or_newline(chunk.try_into().unwrap());
    }
    let tail = chunks.remainder();
    let mut block = [0u8; BLOCK];
    block[..tail.len()].copy_from_slice(tail);
    running |= block_has_tab_or_newline(&block);
    running != 0
}

/// Slow path paired with [`has_tabs_or_newline`]: returns the input with
/// every 0x09/0x0A/0x0D byte deleted, in one freshly allocated buffer.
pub fn remove_tabs_and_newlines(input: &str) -> String {
    input
        .chars()
        .filter(|c| !matches!(c, '\t' | '\n' | '\r'))
        .collect()
}

/// Classify a scheme string (lowercase, no trailing ':') with the perfect
/// hash `(2 * len + first byte) & 7` and a guard comparison against the
/// hashed table slot, so no false positive is possible.
pub fn scheme_type_from_string(s: &str) -> SchemeType {
    if s.is_empty() {
        return SchemeType::NotSpecial;
    }
    let h = (2 * s.len() + s.as_bytes()[0] as usize) & 7;
    if SPECIAL_SCHEMES[h] == s {
        SchemeType::from_code(h as u8).unwrap()
    } else {
        SchemeType::NotSpecial
    }
}

/// Result of [`scan_host`]: the bitwise OR of the host table class of every
/// byte. Bit 0 means a forbidden byte was seen (or one forcing the slow
/// path: `%` and anything >= 0x80), bit 1 means an ASCII uppercase letter
/// was seen. Zero means the host is already a valid lowercase serialization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HostScanResult(pub u8);

impl HostScanResult {
    pub fn is_clean(self) -> bool {
        self.0 == 0
    }

    pub fn has_forbidden(self) -> bool {
        self.0 & 1 != 0
    }

    pub fn has_uppercase(self) -> bool {
        self.0 & 2 != 0
    }
}

/// One stream of table lookups OR-ed together over the host bytes.
pub fn scan_host(host: &[u8]) -> HostScanResult {
    let mut acc = 0u8;
    for &b in host {
        acc |= tables::HOST_CLASS[b as usize];
    }
    HostScanResult(acc)
}

/// A 4-bit classification of a path string. Zero means the path can be
/// copied verbatim.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathSignature(pub u8);

impl PathSignature {
    /// Bit 0: a character requiring percent-encoding is present.
    pub fn needs_encoding(self) -> bool {
        self.0 & 1 != 0
    }

    /// Bit 1: a backslash is present.
    pub fn has_backslash(self) -> bool {
        self.0 & 2 != 0
    }

    /// Bit 2: a dot is present.
    pub fn has_dot(self) -> bool {
        self.0 & 4 != 0
    }

    /// Bit 3: a percent character is present.
    pub fn has_percent(self) -> bool {
        self.0 & 8 != 0
    }

    /// The path is copyable as-is.
    pub fn is_verbatim(self) -> bool {
        self.0 == 0
    }

    /// Only dot segments may need work.
    pub fn is_dots_only(self) -> bool {
        self.0 == 4
    }
}

/// Single pass, one table lookup and OR per byte, no per-byte branching.
pub fn path_signature(path: &[u8]) -> PathSignature {
    let mut acc = 0u8;
    for &b in path {
        acc |= tables::PATH_SIG[b as usize];
    }
    PathSignature(acc)
}

/// View of the input with leading and trailing C0 controls and spaces
/// (bytes <= 0x20) removed.
pub fn trim_c0_and_space(input: &str) -> &str {
    input.trim_matches(|c: char| c <= '\u{20}')
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_has(input: &[u8]) -> bool {
        input.iter().any(|b| matches!(b, 0x09 | 0x0A | 0x0D))
    }

    #[test]
    fn tab_newline_examples() {
        assert!(has_tabs_or_newline("https://\tlemire.me/en/".as_bytes()));
        assert!(!has_tabs_or_newline(b""));
        assert!(!has_tabs_or_newline(b"https://lemire.me/en/"));
        assert!(has_tabs_or_newline(b"0123456789abcdef\r"));
        assert!(has_tabs_or_newline(b"\n"));
    }

    #[test]
    fn tab_newline_matches_naive_on_block_boundaries() {
        for len in 0..64 {
            for pos in 0..len {
                let mut v = vec![b'a'; len];
                v[pos] = b'\t';
                assert!(has_tabs_or_newline(&v), "len {len} pos {pos}");
            }
            assert_eq!(has_tabs_or_newline(&vec![b'a'; len]), naive_has(&vec![b'a'; len]));
        }
    }

    #[test]
    fn remove_examples() {
        assert_eq!(
            remove_tabs_and_newlines("https://\tlemire.me/en/"),
            "https://lemire.me/en/"
        );
        assert_eq!(remove_tabs_and_newlines("\t\n\r"), "");
        assert_eq!(remove_tabs_and_newlines("a\rb\nc\td"), "abcd");
    }

    #[test]
    fn scheme_hash_examples() {
        assert_eq!(scheme_type_from_string("http"), SchemeType::Http);
        assert_eq!(scheme_type_from_string("https"), SchemeType::Https);
        assert_eq!(scheme_type_from_string("ws"), SchemeType::Ws);
        assert_eq!(scheme_type_from_string("ftp"), SchemeType::Ftp);
        assert_eq!(scheme_type_from_string("wss"), SchemeType::Wss);
        assert_eq!(scheme_type_from_string("file"), SchemeType::File);
        assert_eq!(scheme_type_from_string(""), SchemeType::NotSpecial);
        assert_eq!(scheme_type_from_string("httq"), SchemeType::NotSpecial);
        assert_eq!(scheme_type_from_string("mailto"), SchemeType::NotSpecial);
    }

    #[test]
    fn scan_host_examples() {
        assert_eq!(scan_host(b"example.com"), HostScanResult(0));
        assert_eq!(scan_host(b"EXAMPLE.com"), HostScanResult(2));
        assert!(scan_host(b"exa mple.com").has_forbidden());
        assert!(scan_host(b"ex%41mple.com").has_forbidden());
        assert!(scan_host("exämple.com".as_bytes()).has_forbidden());
    }

    #[test]
    fn path_signature_examples() {
        assert!(path_signature(b"/simple/path").is_verbatim());
        assert_eq!(path_signature(b"/./a/../b/./c"), PathSignature(4));
        let sig = path_signature(b"/path/%2e./");
        assert!(sig.has_dot() && sig.has_percent() && !sig.has_backslash());
        assert!(path_signature(b"/a\\b").has_backslash());
        assert!(path_signature(b"/a b").needs_encoding());
    }

    #[test]
    fn trim_examples() {
        assert_eq!(trim_c0_and_space("  https://a/ "), "https://a/");
        assert_eq!(trim_c0_and_space(""), "");
        assert_eq!(trim_c0_and_space("\x00https://a/\x1f"), "https://a/");
        assert_eq!(trim_c0_and_space("\t\n x \r"), "x");
    }
}
