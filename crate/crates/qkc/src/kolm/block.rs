//! Enumerative block coder: type header plus in-class index.
//!
//! A string is cut into k-bit characters, described by the frequency of
//! each character followed by the string's lexicographic rank within its
//! type class. The class has at most `2^{mH}` members, so the body never
//! exceeds `mH + 1` bits and the per-character overhead is the header
//! alone, vanishing as the string grows.

use crate::error::{QkcError, Result};

use super::program::BitString;

/// Longest input in bits; keeps every rank inside u128.
const MAX_INPUT_BITS: usize = 64;
/// Widest character in bits.
const MAX_CHAR_BITS: usize = 4;

#[derive(Clone, Debug)]
pub struct BlockCode {
    pub codeword: BitString,
    pub char_bits: usize,
    /// Characters in the input: `|x| / k`.
    pub block_count: usize,
    pub header_bits: usize,
    pub body_bits: usize,
    /// Empirical character entropy H(A) in bits.
    pub entropy: f64,
    /// `m·H + header + 1`: the guaranteed ceiling on the emitted length.
    pub length_bound: f64,
    /// Per-character overhead `(header + 1)/m`.
    pub gamma: f64,
}

fn char_counts(x: &[bool], k: usize) -> Result<Vec<u64>> {
    if k == 0 || k > MAX_CHAR_BITS || x.len() % k != 0 {
        return Err(QkcError::BlockMismatch { block: k, len: x.len() });
    }
    if x.is_empty() || x.len() > MAX_INPUT_BITS {
        return Err(QkcError::SizeLimit(format!(
            "input of {} bits outside 1..={}",
            x.len(),
            MAX_INPUT_BITS
        )));
    }
    let mut counts = vec![0u64; 1 << k];
    for chunk in x.chunks(k) {
        counts[char_value(chunk)] += 1;
    }
    Ok(counts)
}

fn char_value(chunk: &[bool]) -> usize {
    chunk.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize)
}

/// m! / Π counts!: the number of strings sharing the type.
fn type_class_size(counts: &[u64]) -> u128 {
    let mut size: u128 = 1;
    let mut seen: u128 = 0;
    for &c in counts {
        for i in 1..=c as u128 {
            seen += 1;
            size = size * seen / i;
        }
    }
    size
}

fn ceil_log2(n: u128) -> usize {
    if n <= 1 { 0 } else { (128 - (n - 1).leading_zeros()) as usize }
}

fn entropy_of_counts(counts: &[u64], m: u64) -> f64 {
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / m as f64;
            -p * p.log2()
        })
        .sum()
}

/// Encodes `x` over `k`-bit characters. The codeword decodes exactly via
/// [`block_entropy_decode`] and its length obeys `length_bound`.
pub fn block_entropy_encode(x: &[bool], k: usize) -> Result<BlockCode> {
    let counts = char_counts(x, k)?;
    let m = (x.len() / k) as u64;
    let count_field = ceil_log2(m as u128 + 1);
    let mut codeword = BitString::new();
    for &c in &counts {
        codeword.extend(&BitString::from_value(c, count_field));
    }
    let header_bits = codeword.len();

    // Lexicographic rank within the type class: at each position, count
    // the class members that continue with a smaller character.
    let mut remaining = counts.clone();
    let mut rank: u128 = 0;
    for chunk in x.chunks(k) {
        let c = char_value(chunk);
        for smaller in 0..c {
            if remaining[smaller] > 0 {
                remaining[smaller] -= 1;
                rank += type_class_size(&remaining);
                remaining[smaller] += 1;
            }
        }
        remaining[c] -= 1;
    }
    let class_size = type_class_size(&counts);
    let body_bits = ceil_log2(class_size);
    debug_assert!(rank < class_size);
    // u128 rank always fits: class size ≤ 2^|x| ≤ 2^64.
    codeword.extend(&BitString::from_value(rank as u64, body_bits));

    let entropy = entropy_of_counts(&counts, m);
    Ok(BlockCode {
        codeword,
        char_bits: k,
        block_count: m as usize,
        header_bits,
        body_bits,
        entropy,
        length_bound: m as f64 * entropy + header_bits as f64 + 1.0,
        gamma: (header_bits as f64 + 1.0) / m as f64,
    })
}

/// Exact inverse of [`block_entropy_encode`] given the original geometry.
pub fn block_entropy_decode(codeword: &BitString, k: usize, bit_len: usize) -> Result<Vec<bool>> {
    if k == 0 || k > MAX_CHAR_BITS || bit_len % k != 0 || bit_len == 0 {
        return Err(QkcError::BlockMismatch { block: k, len: bit_len });
    }
    let m = (bit_len / k) as u64;
    let count_field = ceil_log2(m as u128 + 1);
    let alphabet = 1usize << k;
    if codeword.len() < alphabet * count_field {
        return Err(QkcError::InvalidArgument("codeword shorter than its header".into()));
    }
    let read = |lo: usize, n: usize| -> u64 {
        (lo..lo + n).fold(0u64, |acc, i| (acc << 1) | codeword.get(i) as u64)
    };
    let mut counts = Vec::with_capacity(alphabet);
    for c in 0..alphabet {
        counts.push(read(c * count_field, count_field));
    }
    if counts.iter().sum::<u64>() != m {
        return Err(QkcError::InvalidArgument("header counts do not sum to the length".into()));
    }
    let class_size = type_class_size(&counts);
    let body_bits = ceil_log2(class_size);
    if codeword.len() != alphabet * count_field + body_bits {
        return Err(QkcError::InvalidArgument("codeword length does not match its type".into()));
    }
    let mut rank = read(alphabet * count_field, body_bits) as u128;
    if rank >= class_size {
        return Err(QkcError::InvalidArgument("rank outside the type class".into()));
    }

    let mut remaining = counts;
    let mut out = Vec::with_capacity(bit_len);
    for _ in 0..m {
        // Find the character whose subtree contains the rank.
        let mut c = 0usize;
        loop {
            if remaining[c] > 0 {
                remaining[c] -= 1;
                let sub = type_class_size(&remaining);
                if rank < sub {
                    break;
                }
                rank -= sub;
                remaining[c] += 1;
            }
            c += 1;
        }
        for i in (0..k).rev() {
            out.push(c >> i & 1 == 1);
        }
    }
    Ok(out)
}
