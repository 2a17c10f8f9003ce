//! graph6 encoding of simple graphs.
//!
//! The order is written as one byte `n + 63` for `n <= 62`, or `~` followed by
//! three 6-bit groups for `n <= 258047`. The upper triangle follows in
//! column-major order (`(0,1), (0,2), (1,2), (0,3), ...`), six bits per byte,
//! zero padded, each byte offset by 63.

use thiserror::Error;
use turmlab::Graph;

const SMALL_MAX: usize = 62;
const MEDIUM_MAX: usize = 258_047;
const HEADER: &str = ">>graph6<<";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Graph6Error {
    #[error("empty graph6 string")]
    Empty,
    #[error("byte {byte:#04x} at offset {offset} is outside the graph6 range")]
    InvalidByte { offset: usize, byte: u8 },
    #[error("truncated order prefix")]
    TruncatedOrder,
    #[error("order {0} needs the 8-byte prefix, which is not supported")]
    OrderTooLarge(usize),
    #[error("expected {expected} data bytes for {n} vertices, found {found}")]
    Length { n: usize, expected: usize, found: usize },
    #[error("padding bits are not zero")]
    Padding,
}

fn data_len(n: usize) -> usize {
    (n * n.saturating_sub(1) / 2).div_ceil(6)
}

pub fn encode(g: &Graph) -> String {
    let n = g.n();
    assert!(n <= MEDIUM_MAX, "graph6 order {n} not supported");
    let mut out: Vec<u8> = Vec::with_capacity(4 + data_len(n));
    if n <= SMALL_MAX {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for v in 1..n {
        for u in 0..v {
            acc = (acc << 1) | g.has_edge(u, v) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are ASCII")
}

fn sixbits(offset: usize, byte: u8) -> Result<u8, Graph6Error> {
    if (63..=126).contains(&byte) {
        Ok(byte - 63)
    } else {
        Err(Graph6Error::InvalidByte { offset, byte })
    }
}

pub fn decode(s: &str) -> Result<Graph, Graph6Error> {
    let s = s.trim_end_matches(['\n', '\r']);
    let s = s.strip_prefix(HEADER).unwrap_or(s);
    let bytes = s.as_bytes();
    let Some(&first) = bytes.first() else {
        return Err(Graph6Error::Empty);
    };
    let (n, start) = if first == 126 {
        if bytes.get(1) == Some(&126) {
            let groups = bytes.get(2..8).ok_or(Graph6Error::TruncatedOrder)?;
            let mut n = 0usize;
            for (i, &b) in groups.iter().enumerate() {
                n = (n << 6) | sixbits(i + 2, b)? as usize;
            }
            return Err(Graph6Error::OrderTooLarge(n));
        }
        if bytes.len() < 4 {
            return Err(Graph6Error::TruncatedOrder);
        }
        let mut n = 0usize;
        for (i, &b) in bytes[1..4].iter().enumerate() {
            n = (n << 6) | sixbits(i + 1, b)? as usize;
        }
        (n, 4)
    } else {
        (sixbits(0, first)? as usize, 1)
    };
    let data = &bytes[start..];
    let expected = data_len(n);
    if data.len() != expected {
        return Err(Graph6Error::Length {
            n,
            expected,
            found: data.len(),
        });
    }
    let mut g = Graph::empty(n);
    let total = n * n.saturating_sub(1) / 2;
    let mut k = 0;
    let mut v = 1;
    let mut u = 0;
    for (i, &b) in data.iter().enumerate() {
        let bits = sixbits(start + i, b)?;
        for shift in (0..6).rev() {
            let bit = bits >> shift & 1 == 1;
            if k >= total {
                if bit {
                    return Err(Graph6Error::Padding);
                }
                continue;
            }
            if bit {
                g.add_edge(u, v);
            }
            k += 1;
            u += 1;
            if u == v {
                v += 1;
                u = 0;
            }
        }
    }
    Ok(g)
}
