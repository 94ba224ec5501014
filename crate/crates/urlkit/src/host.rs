//! Host parsing and normalization: domain names with an ASCII fast path and
//! RFC 3492 punycode for non-ASCII labels, IPv4 in its radix forms, IPv6,
//! and port handling.

use std::borrow::Cow;

use crate::encoding::{self, EncodeSet};
use crate::scanners::scan_host;
use crate::tables;
use crate::url::{ParseError, SchemeType};

/// IPv4 network address. Serializes as four decimal octets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ipv4Address(pub u32);

/// IPv6 address as eight 16-bit pieces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ipv6Address(pub [u16; 8]);

/// Parse and normalize a raw host substring (brackets included for IPv6,
/// percent-encoded bytes allowed). Dispatches on the first byte: `[` means
/// IPv6; otherwise special-scheme hosts are percent-decoded and run through
/// domain normalization (or IPv4 parsing when the domain ends in a number),
/// while non-special hosts follow the opaque-host rules.
pub fn parse_host(input: &str, is_special: bool) -> Result<Cow<'_, str>, ParseError> {
    if let Some(inner) = input.strip_prefix('[') {
        let inner = inner.strip_suffix(']').ok_or(ParseError::InvalidIpv6)?;
        let addr = parse_ipv6(inner)?;
        return Ok(Cow::Owned(format!("[{}]", serialize_ipv6(&addr))));
    }
    if !is_special {
        return parse_opaque_host(input);
    }
    if input.is_empty() {
        return Err(ParseError::MissingHost);
    }

    let domain = encoding::percent_decode_utf8_lossy(input);
    let ascii = match domain {
        Cow::Borrowed(d) => domain_to_ascii(d)?,
        Cow::Owned(d) => Cow::Owned(domain_to_ascii(&d)?.into_owned()),
    };
    if ends_in_number(&ascii) {
        let addr = parse_ipv4(&ascii)?;
        return Ok(Cow::Owned(serialize_ipv4(addr)));
    }
    Ok(ascii)
}

fn parse_opaque_host(input: &str) -> Result<Cow<'_, str>, ParseError> {
    for &b in input.as_bytes() {
        if b < 0x80 && tables::FORBIDDEN_HOST[b as usize] != 0 {
            return Err(ParseError::InvalidHost);
        }
    }
    Ok(encoding::percent_encode(input, EncodeSet::C0_CONTROL))
}

/// Convert a (percent-decoded) domain to its ASCII form.
///
/// The fast path returns already-lowercase ASCII domains verbatim and
/// uppercase-only ones as a lowercased copy. Non-ASCII domains are lowercased
/// and each non-ASCII label is punycode-encoded under the `xn--` prefix;
/// full UTS #46 mapping is intentionally out of scope (see README). Every
/// path enforces the structural rules: no empty labels other than one
/// trailing, labels of at most 63 bytes, 253 bytes total.
pub fn domain_to_ascii(domain: &str) -> Result<Cow<'_, str>, ParseError> {
    let scan = scan_host(domain.as_bytes());
    if !scan.has_forbidden() {
        validate_domain_structure(domain)?;
        return if scan.is_clean() {
            Ok(Cow::Borrowed(domain))
        } else {
            Ok(Cow::Owned(domain.to_ascii_lowercase()))
        };
    }

    // The scan cannot tell forbidden ASCII from bytes that merely need the
    // punycode route, so recheck per character.
    for c in domain.chars() {
        if c.is_ascii() {
            if tables::HOST_CLASS[c as usize] == 1 {
                return Err(ParseError::InvalidHost);
            }
        } else if c == '\u{FFFD}' {
            return Err(ParseError::InvalidHost);
        }
    }

    let lowered: String = domain.chars().flat_map(char::to_lowercase).collect();
    let mut out = String::with_capacity(lowered.len() + 8);
    for (i, label) in lowered.split('.').enumerate() {
        if i > 0 {
            out.push('.');
        }
        if label.is_ascii() {
            out.push_str(label);
        } else {
            out.push_str("xn--");
            out.push_str(&punycode_encode(label)?);
        }
    }
    validate_domain_structure(&out)?;
    Ok(Cow::Owned(out))
}

fn validate_domain_structure(domain: &str) -> Result<(), ParseError> {
    if domain.is_empty() {
        return Err(ParseError::InvalidHost);
    }
    let effective = domain.strip_suffix('.').unwrap_or(domain);
    if effective.len() > 253 {
        return Err(ParseError::InvalidHost);
    }
    for label in effective.split('.') {
        if label.is_empty() || label.len() > 63 {
            return Err(ParseError::InvalidHost);
        }
    }
    Ok(())
}

// RFC 3492 Bootstring parameters for punycode.
const BASE: u32 = 36;
const TMIN: u32 = 1;
const TMAX: u32 = 26;
const SKEW: u32 = 38;
const DAMP: u32 = 700;
const INITIAL_BIAS: u32 = 72;
const INITIAL_N: u32 = 128;

fn adapt(mut delta: u32, num_points: u32, first_time: bool) -> u32 {
    delta /= if first_time { DAMP } else { 2 };
    delta += delta / num_points;
    let mut k = 0;
    while delta > ((BASE - TMIN) * TMAX) / 2 {
        delta /= BASE - TMIN;
        k += BASE;
    }
    k + (BASE - TMIN + 1) * delta / (delta + SKEW)
}

fn encode_digit(d: u32) -> char {
    debug_assert!(d < 36);
    if d < 26 {
        (b'a' + d as u8) as char
    } else {
        (b'0' + (d - 26) as u8) as char
    }
}

/// RFC 3492 section 6.3 encoding, without the `xn--` prefix. Basic code
/// points are copied through unchanged.
pub fn punycode_encode(label: &str) -> Result<String, ParseError> {
    let input: Vec<char> = label.chars().collect();
    let mut output = String::with_capacity(label.len() + 8);

    for &c in &input {
        if c.is_ascii() {
            output.push(c);
        }
    }
    let basic = output.len() as u32;
    let mut handled = basic;
    if basic > 0 {
        output.push('-');
    }

    let mut n = INITIAL_N;
    let mut delta: u32 = 0;
    let mut bias = INITIAL_BIAS;
    let overflow = ParseError::InvalidHost;

    while (handled as usize) < input.len() {
        let m = input
            .iter()
            .map(|&c| c as u32)
            .filter(|&c| c >= n)
            .min()
            .expect("unhandled code points remain");
        delta = delta
            .checked_add(
                (m - n)
                    .checked_mul(handled + 1)
                    .ok_or(overflow)?,
            )
            .ok_or(overflow)?;
        n = m;
        for &ch in &input {
            let c = ch as u32;
            if c < n {
                delta = delta.checked_add(1).ok_or(overflow)?;
            }
            if c == n {
                let mut q = delta;
                let mut k = BASE;
                loop {
                    let t = if k <= bias {
                        TMIN
                    } else if k >= bias + TMAX {
                        TMAX
                    } else {
                        k - bias
                    };
                    if q < t {
                        break;
                    }
                    output.push(encode_digit(t + (q - t) % (BASE - t)));
                    q = (q - t) / (BASE - t);
                    k += BASE;
                }
                output.push(encode_digit(q));
                bias = adapt(delta, handled + 1, handled == basic);
                delta = 0;
                handled += 1;
            }
        }
        delta = delta.checked_add(1).ok_or(overflow)?;
        n += 1;
    }
    Ok(output)
}

/// WHATWG "ends in a number": the last non-empty dot-separated label is all
/// ASCII digits or a `0x`-prefixed hex string (possibly empty after `0x`).
pub fn ends_in_number(host: &str) -> bool {
    let trimmed = host.strip_suffix('.').unwrap_or(host);
    if trimmed.is_empty() {
        return false;
    }
    let last = match trimmed.rfind('.') {
        Some(i) => &trimmed[i + 1..],
        None => trimmed,
    };
    if last.is_empty() {
        return false;
    }
    if last.bytes().all(|b| b.is_ascii_digit()) {
        return true;
    }
    if let Some(hex) = last.strip_prefix("0x").or_else(|| last.strip_prefix("0X")) {
        return hex.bytes().all(|b| b.is_ascii_hexdigit());
    }
    false
}

fn parse_ipv4_number(part: &str) -> Result<u64, ParseError> {
    if part.is_empty() {
        return Err(ParseError::InvalidIpv4);
    }
    let (digits, radix) = if let Some(hex) = part.strip_prefix("0x").or_else(|| part.strip_prefix("0X"))
    {
        (hex, 16)
    } else if part.len() >= 2 && part.starts_with('0') {
        (&part[1..], 8)
    } else {
        (part, 10)
    };
    if digits.is_empty() {
        // "0x" (and "0" via the decimal branch) means zero
        return Ok(0);
    }
    let mut value: u64 = 0;
    for b in digits.bytes() {
        let d = (b as char).to_digit(radix).ok_or(ParseError::InvalidIpv4)? as u64;
        value = value.saturating_mul(radix as u64).saturating_add(d);
    }
    Ok(value)
}

/// Parse an IPv4 address, accepting 1 to 4 dot-separated parts in decimal,
/// octal (leading `0`), or hex (`0x`) form, e.g. `192.0x00A80001`.
pub fn parse_ipv4(input: &str) -> Result<Ipv4Address, ParseError> {
    let mut parts: Vec<&str> = input.split('.').collect();
    if parts.last() == Some(&"") && parts.len() > 1 {
        parts.pop();
    }
    if parts.is_empty() || parts.len() > 4 {
        return Err(ParseError::InvalidIpv4);
    }
    let numbers: Vec<u64> = parts
        .iter()
        .map(|p| parse_ipv4_number(p))
        .collect::<Result<_, _>>()?;
    let (&last, rest) = numbers.split_last().expect("at least one part");
    if rest.iter().any(|&n| n > 255) {
        return Err(ParseError::InvalidIpv4);
    }
    if last >= 1u64 << (8 * (5 - numbers.len())) {
        return Err(ParseError::InvalidIpv4);
    }
    let mut value = last as u32;
    for (i, &n) in rest.iter().enumerate() {
        value += (n as u32) << (8 * (3 - i));
    }
    Ok(Ipv4Address(value))
}

pub fn serialize_ipv4(addr: Ipv4Address) -> String {
    let v = addr.0;
    format!("{}.{}.{}.{}", v >> 24, (v >> 16) & 0xFF, (v >> 8) & 0xFF, v & 0xFF)
}

/// Parse the text between `[` and `]` as an IPv6 address: hex pieces, at
/// most one `::` compression, optional embedded IPv4 tail.
pub fn parse_ipv6(input: &str) -> Result<Ipv6Address, ParseError> {
    let err = ParseError::InvalidIpv6;
    let bytes = input.as_bytes();
    let mut pieces = [0u16; 8];
    let mut piece_index = 0usize;
    let mut compress: Option<usize> = None;
    let mut i = 0usize;

    if bytes.first() == Some(&b':') {
        if bytes.get(1) != Some(&b':') {
            return Err(err);
        }
        i = 2;
        piece_index = 1;
        compress = Some(1);
    }

    while i < bytes.len() {
        if piece_index == 8 {
            return Err(err);
        }
        if bytes[i] == b':' {
            if compress.is_some() {
                return Err(err);
            }
            i += 1;
            piece_index += 1;
            compress = Some(piece_index);
            continue;
        }
        let mut value: u16 = 0;
        let mut length = 0;
        while length < 4 && i < bytes.len() && bytes[i].is_ascii_hexdigit() {
            value = value * 16 + (bytes[i] as char).to_digit(16).unwrap() as u16;
            i += 1;
            length += 1;
        }
        if i < bytes.len() && bytes[i] == b'.' {
            if length == 0 {
                return Err(err);
            }
            i -= length;
            if piece_index > 6 {
                return Err(err);
            }
            let mut numbers_seen = 0;
            while i < bytes.len() {
                if numbers_seen > 0 {
                    if bytes[i] == b'.' && numbers_seen < 4 {
                        i += 1;
                    } else {
                        return Err(err);
                    }
                }
                if i >= bytes.len() || !bytes[i].is_ascii_digit() {
                    return Err(err);
                }
                let mut ipv4_piece: Option<u16> = None;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    let d = (bytes[i] - b'0') as u16;
                    ipv4_piece = match ipv4_piece {
                        None => Some(d),
                        Some(0) => return Err(err),
                        Some(v) => {
                            let v = v * 10 + d;
                            if v > 255 {
                                return Err(err);
                            }
                            Some(v)
                        }
                    };
                    i += 1;
                }
                pieces[piece_index] = pieces[piece_index] * 256 + ipv4_piece.unwrap();
                numbers_seen += 1;
                if numbers_seen == 2 || numbers_seen == 4 {
                    piece_index += 1;
                }
            }
            if numbers_seen != 4 {
                return Err(err);
            }
            break;
        } else if i < bytes.len() && bytes[i] == b':' {
            i += 1;
            if i == bytes.len() {
                return Err(err);
            }
        } else if i < bytes.len() {
            return Err(err);
        }
        pieces[piece_index] = value;
        piece_index += 1;
    }

    if let Some(compress) = compress {
        let mut swaps = piece_index - compress;
        let mut pi = 7;
        while pi != 0 && swaps > 0 {
            pieces.swap(pi, compress + swaps - 1);
            pi -= 1;
            swaps -= 1;
        }
    } else if piece_index != 8 {
        return Err(ParseError::InvalidIpv6);
    }
    Ok(Ipv6Address(pieces))
}

/// Serialize with the leftmost longest run (length >= 2) of zero pieces
/// compressed to `::`, pieces in lowercase hex.
pub fn serialize_ipv6(addr: &Ipv6Address) -> String {
    let pieces = &addr.0;
    let mut best_start = None;
    let mut best_len = 1usize;
    let mut run_start = None;
    for i in 0..=8 {
        if i < 8 && pieces[i] == 0 {
            if run_start.is_none() {
                run_start = Some(i);
            }
        } else if let Some(start) = run_start.take() {
            let len = i - start;
            if len > best_len {
                best_start = Some(start);
                best_len = len;
            }
        }
    }

    let mut out = String::new();
    let mut i = 0;
    while i < 8 {
        if best_start == Some(i) {
            out.push_str(if i == 0 { "::" } else { ":" });
            i += best_len;
            continue;
        }
        out.push_str(&format!("{:x}", pieces[i]));
        if i != 7 {
            out.push(':');
        }
        i += 1;
    }
    out
}

/// Parse a port string that followed the host's `:` separator. Default ports
/// and empty strings come back as `None` (omitted from serializations).
pub fn parse_port(input: &str, scheme_type: SchemeType) -> Result<Option<u16>, ParseError> {
    if input.is_empty() {
        return Ok(None);
    }
    if scheme_type == SchemeType::File {
        return Err(ParseError::InvalidInput);
    }
    let mut value: u32 = 0;
    for b in input.bytes() {
        if !b.is_ascii_digit() {
            return Err(ParseError::InvalidInput);
        }
        value = value * 10 + (b - b'0') as u32;
        if value > 65535 {
            return Err(ParseError::PortOutOfRange);
        }
    }
    if scheme_type.default_port() == Some(value as u16) {
        return Ok(None);
    }
    Ok(Some(value as u16))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_host_examples() {
        assert_eq!(
            parse_host("[c141:ffff:0:ffff:ffff:ffff:ffff:ffff]", true).unwrap(),
            "[c141:ffff:0:ffff:ffff:ffff:ffff:ffff]"
        );
        assert_eq!(parse_host("EXAMPLE.com", true).unwrap(), "example.com");
        assert_eq!(parse_host("", true), Err(ParseError::MissingHost));
        assert_eq!(parse_host("", false).unwrap(), "");
        assert_eq!(parse_host("ex%41mple.com", true).unwrap(), "example.com");
        assert_eq!(parse_host("[::1", true), Err(ParseError::InvalidIpv6));
        assert_eq!(parse_host("a b", true), Err(ParseError::InvalidHost));
    }

    #[test]
    fn opaque_host_examples() {
        assert_eq!(parse_host("EXAMPLE.com", false).unwrap(), "EXAMPLE.com");
        assert_eq!(parse_host("a%62c", false).unwrap(), "a%62c");
        assert_eq!(parse_host("héllo", false).unwrap(), "h%C3%A9llo");
        assert_eq!(parse_host("a b", false), Err(ParseError::InvalidHost));
        assert_eq!(parse_host("a^b", false), Err(ParseError::InvalidHost));
        assert_eq!(parse_host("a%ZZ", false).unwrap(), "a%ZZ");
    }

    #[test]
    fn domain_examples() {
        assert!(matches!(
            domain_to_ascii("example.com").unwrap(),
            Cow::Borrowed("example.com")
        ));
        assert_eq!(domain_to_ascii("你好你好.在线").unwrap(), "xn--6qqa088eba.xn--3ds443g");
        assert_eq!(domain_to_ascii("a..b"), Err(ParseError::InvalidHost));
        assert_eq!(domain_to_ascii("example.com.").unwrap(), "example.com.");
        assert_eq!(domain_to_ascii(""), Err(ParseError::InvalidHost));
        assert_eq!(domain_to_ascii(&"a".repeat(64)), Err(ParseError::InvalidHost));
        assert_eq!(domain_to_ascii("BÜCHER.de").unwrap(), "xn--bcher-kva.de");
    }

    #[test]
    fn domain_to_ascii_idempotent() {
        for d in ["example.com", "xn--6qqa088eba.xn--3ds443g", "a.b.c"] {
            let once = domain_to_ascii(d).unwrap().into_owned();
            assert_eq!(domain_to_ascii(&once).unwrap(), once);
        }
    }

    #[test]
    fn punycode_paper_labels() {
        assert_eq!(punycode_encode("在线").unwrap(), "3ds443g");
        assert_eq!(punycode_encode("你好你好").unwrap(), "6qqa088eba");
        assert_eq!(punycode_encode("你").unwrap(), "6qq");
        assert_eq!(punycode_encode("bücher").unwrap(), "bcher-kva");
    }

    #[test]
    fn ends_in_number_examples() {
        assert!(ends_in_number("192.168.1.1"));
        assert!(ends_in_number("example.0x7f"));
        assert!(ends_in_number("example.09"));
        assert!(ends_in_number("0x"));
        assert!(ends_in_number("1.2.3.4."));
        assert!(!ends_in_number("example.com"));
        assert!(!ends_in_number("example.com1x"));
        assert!(!ends_in_number("0x1g"));
        assert!(!ends_in_number(""));
        assert!(!ends_in_number("."));
    }

    #[test]
    fn ipv4_examples() {
        assert_eq!(serialize_ipv4(parse_ipv4("192.0x00A80001").unwrap()), "192.168.0.1");
        assert_eq!(serialize_ipv4(parse_ipv4("192.168.1.1").unwrap()), "192.168.1.1");
        assert_eq!(serialize_ipv4(parse_ipv4("0x7f.1").unwrap()), "127.0.0.1");
        assert_eq!(serialize_ipv4(parse_ipv4("0").unwrap()), "0.0.0.0");
        assert_eq!(serialize_ipv4(parse_ipv4("4294967295").unwrap()), "255.255.255.255");
        assert_eq!(serialize_ipv4(parse_ipv4("192.168.1.1.").unwrap()), "192.168.1.1");
        assert_eq!(serialize_ipv4(parse_ipv4("0177.0.0.1").unwrap()), "127.0.0.1");
        assert_eq!(parse_ipv4("4294967296"), Err(ParseError::InvalidIpv4));
        assert_eq!(parse_ipv4("1.2.3.4.5"), Err(ParseError::InvalidIpv4));
        assert_eq!(parse_ipv4("256.1.1.1"), Err(ParseError::InvalidIpv4));
        assert_eq!(parse_ipv4("1.2.3.256"), Err(ParseError::InvalidIpv4));
        assert_eq!(parse_ipv4("1..2"), Err(ParseError::InvalidIpv4));
        assert_eq!(parse_ipv4("09"), Err(ParseError::InvalidIpv4));
        // "0x" with no digits is zero
        assert_eq!(serialize_ipv4(parse_ipv4("1.0x").unwrap()), "1.0.0.0");
    }

    #[test]
    fn ipv6_examples() {
        let loopback = parse_ipv6("::1").unwrap();
        assert_eq!(loopback.0, [0, 0, 0, 0, 0, 0, 0, 1]);
        assert_eq!(serialize_ipv6(&loopback), "::1");
        assert_eq!(
            serialize_ipv6(&parse_ipv6("c141:ffff:0:ffff:ffff:ffff:ffff:ffff").unwrap()),
            "c141:ffff:0:ffff:ffff:ffff:ffff:ffff"
        );
        assert_eq!(serialize_ipv6(&parse_ipv6("1:0:0:0:0:0:0:1").unwrap()), "1::1");
        assert_eq!(serialize_ipv6(&parse_ipv6("::").unwrap()), "::");
        assert_eq!(serialize_ipv6(&parse_ipv6("::ffff:192.168.0.1").unwrap()), "::ffff:c0a8:1");
        assert_eq!(serialize_ipv6(&parse_ipv6("1:2:3:4:5:6:7:8").unwrap()), "1:2:3:4:5:6:7:8");
        assert_eq!(serialize_ipv6(&parse_ipv6("2001:DB8::1").unwrap()), "2001:db8::1");
        // leftmost longest zero run wins
        assert_eq!(serialize_ipv6(&parse_ipv6("1:0:0:2:0:0:0:3").unwrap()), "1:0:0:2::3");
        assert_eq!(serialize_ipv6(&parse_ipv6("0:0:1:0:0:0:2:0").unwrap()), "0:0:1::2:0");
        assert!(parse_ipv6(":::").is_err());
        assert!(parse_ipv6("1:2:3:4:5:6:7").is_err());
        assert!(parse_ipv6("1:2:3:4:5:6:7:8:9").is_err());
        assert!(parse_ipv6("1::2::3").is_err());
        assert!(parse_ipv6("12345::").is_err());
        assert!(parse_ipv6("::ffff:999.1.1.1").is_err());
        assert!(parse_ipv6("::ffff:1.2.3").is_err());
        assert!(parse_ipv6("::%25eth0").is_err());
        assert!(parse_ipv6("1:2:3:4:5:6:1.2.3.4:8").is_err());
    }

    #[test]
    fn port_examples() {
        assert_eq!(parse_port("8080", SchemeType::Http), Ok(Some(8080)));
        assert_eq!(parse_port("80", SchemeType::Http), Ok(None));
        assert_eq!(parse_port("80", SchemeType::Ws), Ok(None));
        assert_eq!(parse_port("443", SchemeType::Https), Ok(None));
        assert_eq!(parse_port("", SchemeType::Http), Ok(None));
        assert_eq!(parse_port("65535", SchemeType::Http), Ok(Some(65535)));
        assert_eq!(parse_port("65536", SchemeType::Http), Err(ParseError::PortOutOfRange));
        assert_eq!(parse_port("0080", SchemeType::Http), Ok(None));
        assert_eq!(parse_port("8a", SchemeType::Http), Err(ParseError::InvalidInput));
        assert_eq!(parse_port("99", SchemeType::File), Err(ParseError::InvalidInput));
    }
}
