//! Percent-encoding with per-context encode sets, percent-decoding, and
//! path normalization with the three-tier fast-path dispatch.

use std::borrow::Cow;

use crate::scanners::PathSignature;
use crate::tables;

const HEX_UPPER: &[u8; 16] = b"0123456789ABCDEF";

/// A percent-encode set: the bytes that must be escaped in one component
/// context. All bytes >= 0x80 belong to every set.
#[derive(Clone, Copy)]
pub struct EncodeSet {
    table: &'static [u8; 256],
}

impl EncodeSet {
    pub const C0_CONTROL: EncodeSet = EncodeSet { table: &tables::C0_CONTROL_SET };
    pub const FRAGMENT: EncodeSet = EncodeSet { table: &tables::FRAGMENT_SET };
    pub const QUERY: EncodeSet = EncodeSet { table: &tables::QUERY_SET };
    pub const SPECIAL_QUERY: EncodeSet = EncodeSet { table: &tables::SPECIAL_QUERY_SET };
    pub const PATH: EncodeSet = EncodeSet { table: &tables::PATH_SET };
    pub const USERINFO: EncodeSet = EncodeSet { table: &tables::USERINFO_SET };
    pub const COMPONENT: EncodeSet = EncodeSet { table: &tables::COMPONENT_SET };

    #[inline]
    pub fn contains(self, byte: u8) -> bool {
        self.table[byte as usize] != 0
    }
}

/// Percent-encode every byte of `input` that is in `set`, as uppercase
/// `%XX`. Returns the input view untouched when nothing needs escaping.
pub fn percent_encode(input: &str, set: EncodeSet) -> Cow<'_, str> {
    match input.bytes().position(|b| set.contains(b)) {
        None => Cow::Borrowed(input),
        Some(first) => {
            let mut out = String::with_capacity(input.len() + 8);
            out.push_str(&input[..first]);
            encode_bytes_into(&mut out, &input.as_bytes()[first..], set);
            Cow::Owned(out)
        }
    }
}

pub(crate) fn percent_encode_into(out: &mut String, input: &str, set: EncodeSet) {
    encode_bytes_into(out, input.as_bytes(), set);
}

fn encode_bytes_into(out: &mut String, bytes: &[u8], set: EncodeSet) {
    for &b in bytes {
        if set.contains(b) {
            push_pct(out, b);
        } else {
            out.push(b as char);
        }
    }
}

pub(crate) fn push_pct(out: &mut String, b: u8) {
    out.push('%');
    out.push(HEX_UPPER[(b >> 4) as usize] as char);
    out.push(HEX_UPPER[(b & 0xF) as usize] as char);
}

fn hex_value(b: u8) -> Option<u8> {
    match b {
        b'0'..=b'9' => Some(b - b'0'),
        b'a'..=b'f' => Some(b - b'a' + 10),
        b'A'..=b'F' => Some(b - b'A' + 10),
        _ => None,
    }
}

/// Decode `%XX` sequences into bytes. Malformed `%` sequences pass through
/// verbatim; decoding never fails.
pub fn percent_decode(input: &str) -> Cow<'_, [u8]> {
    if !input.contains('%') {
        return Cow::Borrowed(input.as_bytes());
    }
    let bytes = input.as_bytes();
    let mut out = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'%' && i + 2 < bytes.len() {
            if let (Some(hi), Some(lo)) = (hex_value(bytes[i + 1]), hex_value(bytes[i + 2])) {
                out.push(hi << 4 | lo);
                i += 3;
                continue;
            }
        }
        out.push(bytes[i]);
        i += 1;
    }
    Cow::Owned(out)
}

/// Percent-decode and interpret the result as UTF-8, replacing invalid
/// sequences with U+FFFD.
pub(crate) fn percent_decode_utf8_lossy(input: &str) -> Cow<'_, str> {
    match percent_decode(input) {
        Cow::Borrowed(_) => Cow::Borrowed(input),
        Cow::Owned(bytes) => match String::from_utf8_lossy(&bytes) {
            Cow::Borrowed(s) => Cow::Owned(s.to_owned()),
            Cow::Owned(s) => Cow::Owned(s),
        },
    }
}

fn is_windows_drive(segment: &str) -> bool {
    let b = segment.as_bytes();
    b.len() == 2 && b[0].is_ascii_alphabetic() && matches!(b[1], b':' | b'|')
}

fn is_normalized_windows_drive(segment: &str) -> bool {
    let b = segment.as_bytes();
    b.len() == 2 && b[0].is_ascii_alphabetic() && b[1] == b':'
}

fn is_single_dot(segment: &str) -> bool {
    segment == "." || segment.eq_ignore_ascii_case("%2e")
}

fn is_double_dot(segment: &str) -> bool {
    segment == ".."
        || segment.eq_ignore_ascii_case(".%2e")
        || segment.eq_ignore_ascii_case("%2e.")
        || segment.eq_ignore_ascii_case("%2e%2e")
}

/// Remove the path's last segment, keeping a lone normalized drive letter on
/// file URLs.
fn shorten_path(buffer: &mut String, path_start: usize, is_file: bool) {
    if buffer.len() == path_start {
        return;
    }
    let path = &buffer[path_start..];
    if is_file && path.len() == 3 && is_normalized_windows_drive(&path[1..]) {
        return;
    }
    if let Some(last) = buffer[path_start..].rfind('/') {
        buffer.truncate(path_start + last);
    }
}

/// Append and normalize a path onto `buffer`, whose existing content from
/// `path_start` on is the path accumulated so far (possibly copied from a
/// base URL). `input` must not include the leading separator the caller
/// already consumed; `preloaded` carries a first segment consumed earlier
/// (the file-host drive letter case). Dispatches on the signature: verbatim
/// copy, dot-segment removal only, or full processing with backslash
/// folding (special URLs), percent-encoding, and `%2e` dot forms.
pub(crate) fn append_path(
    buffer: &mut String,
    path_start: usize,
    preloaded: Option<&str>,
    input: &str,
    sig: PathSignature,
    is_special: bool,
    is_file: bool,
) {
    if let Some(pre) = preloaded {
        // Only ever a Windows drive letter, detected by the file-host state.
        debug_assert!(is_windows_drive(pre));
        buffer.push('/');
        buffer.push(pre.as_bytes()[0] as char);
        buffer.push(':');
        if input.is_empty() {
            return;
        }
    }

    let mut input = input;
    if is_file && preloaded.is_none() && buffer.len() == path_start {
        // Drive letters contribute no signature bits, so normalize one up
        // front and let the remainder take whichever tier it qualifies for.
        let first_len = input
            .bytes()
            .position(|b| b == b'/' || b == b'\\')
            .unwrap_or(input.len());
        if is_windows_drive(&input[..first_len]) {
            buffer.push('/');
            buffer.push(input.as_bytes()[0] as char);
            buffer.push(':');
            if first_len == input.len() {
                return;
            }
            input = &input[first_len + 1..];
        }
    }

    if sig.is_verbatim() {
        buffer.push('/');
        buffer.push_str(input);
        return;
    }

    let full = !sig.is_dots_only();
    let mut rest = input;
    loop {
        let sep = rest
            .bytes()
            .position(|b| b == b'/' || (full && is_special && b == b'\\'));
        let (segment, is_last) = match sep {
            Some(i) => (&rest[..i], false),
            None => (rest, true),
        };

        if is_double_dot(segment) {
            shorten_path(buffer, path_start, is_file);
            if is_last {
                buffer.push('/');
            }
        } else if is_single_dot(segment) {
            if is_last {
                buffer.push('/');
            }
        } else if is_file
            && buffer.len() == path_start
            && is_windows_drive(segment)
        {
            buffer.push('/');
            buffer.push(segment.as_bytes()[0] as char);
            buffer.push(':');
        } else {
            buffer.push('/');
            if full {
                percent_encode_into(buffer, segment, EncodeSet::PATH);
            } else {
                buffer.push_str(segment);
            }
        }

        match sep {
            Some(i) => rest = &rest[i + 1..],
            None => break,
        }
    }
}

/// Normalize a non-opaque path string. The output always begins with `/`.
///
/// Tier 1 (signature zero) copies the input verbatim; tier 2 (only the dot
/// bit set) runs segment-wise dot removal; everything else takes the full
/// route: backslashes are treated as separators for special URLs, segments
/// are percent-encoded with the path set, and `%2e` forms count as dots.
pub fn normalize_path(input: &str, sig: PathSignature, is_special: bool) -> String {
    let mut out = String::with_capacity(input.len() + 1);
    let stripped = if let Some(rest) = input.strip_prefix('/') {
        rest
    } else if is_special && !sig.is_verbatim() && !sig.is_dots_only() {
        input.strip_prefix('\\').unwrap_or(input)
    } else {
        input
    };
    append_path(&mut out, 0, None, stripped, sig, is_special, false);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scanners::path_signature;

    fn norm(input: &str, special: bool) -> String {
        normalize_path(input, path_signature(input.as_bytes()), special)
    }

    #[test]
    fn encode_examples() {
        assert_eq!(percent_encode("é", EncodeSet::PATH), "%C3%A9");
        assert!(matches!(
            percent_encode("abc", EncodeSet::COMPONENT),
            Cow::Borrowed("abc")
        ));
        assert_eq!(percent_encode(" ", EncodeSet::FRAGMENT), "%20");
        assert_eq!(percent_encode("#", EncodeSet::QUERY), "%23");
        assert_eq!(percent_encode("'", EncodeSet::SPECIAL_QUERY), "%27");
        assert_eq!(percent_encode("'", EncodeSet::QUERY), "'");
        assert_eq!(percent_encode("{}", EncodeSet::PATH), "%7B%7D");
        assert_eq!(percent_encode("/:;=@", EncodeSet::USERINFO), "%2F%3A%3B%3D%40");
        assert_eq!(percent_encode("$%&+,", EncodeSet::COMPONENT), "%24%25%26%2B%2C");
    }

    #[test]
    fn decode_examples() {
        assert_eq!(percent_decode("%C3%A9").as_ref(), [0xC3, 0xA9]);
        assert_eq!(percent_decode("100%").as_ref(), b"100%");
        assert_eq!(percent_decode("").as_ref(), b"");
        assert_eq!(percent_decode("%4a%4B").as_ref(), b"JK");
        assert_eq!(percent_decode("%zz%1").as_ref(), b"%zz%1");
    }

    #[test]
    fn normalize_path_examples() {
        assert_eq!(norm("/./a/../b/./c", true), "/b/c");
        assert_eq!(norm("/path/%2e./", true), "/");
        assert_eq!(norm("/a/b/c", true), "/a/b/c");
        assert_eq!(norm("", true), "/");
        assert_eq!(norm("/a/b/..", true), "/a/");
        assert_eq!(norm("/a/b/.", true), "/a/b/");
        assert_eq!(norm("/a//b", false), "/a//b");
        assert_eq!(norm("/../..", true), "/");
        assert_eq!(norm("/a\\b", true), "/a/b");
        // backslash folding is a special-scheme rule; elsewhere it is an
        // ordinary path byte and the path set does not escape it
        assert_eq!(norm("/a\\b", false), "/a\\b");
        assert_eq!(norm("/a b", true), "/a%20b");
        assert_eq!(norm("/%2E/x", true), "/x");
    }

    #[test]
    fn normalize_path_idempotent_on_fast_tiers() {
        for p in ["/a/b/c", "/x", "/", "/a/", "/a//b"] {
            let once = norm(p, true);
            assert_eq!(norm(&once, true), once);
        }
    }
}
