//! Bit-exact program strings and their wire format.

use crate::error::{QkcError, Result};

/// Which opcode table decodes a program. B uses the same instruction
/// semantics with the table reversed; A additionally recognizes a fixed
/// emulation prefix that re-decodes the remainder as a B-program.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum InterpreterId {
    A,
    B,
}

impl std::fmt::Display for InterpreterId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            InterpreterId::A => "A",
            InterpreterId::B => "B",
        })
    }
}

/// An MSB-first bit string. Lexicographic order among equal lengths equals
/// numeric order of the value, which is what search enumeration relies on.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitString {
    len: usize,
    bytes: Vec<u8>,
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    /// The low `len` bits of `value`, most significant first. `len ≤ 64`.
    pub fn from_value(value: u64, len: usize) -> Self {
        assert!(len <= 64, "bit strings are desk-scale");
        let mut s = Self { len, bytes: vec![0; len.div_ceil(8)] };
        for i in 0..len {
            if (value >> (len - 1 - i)) & 1 == 1 {
                s.bytes[i / 8] |= 0x80 >> (i % 8);
            }
        }
        s
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut s = Self { len: bits.len(), bytes: vec![0; bits.len().div_ceil(8)] };
        for (i, &b) in bits.iter().enumerate() {
            if b {
                s.bytes[i / 8] |= 0x80 >> (i % 8);
            }
        }
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.bytes[i / 8] & (0x80 >> (i % 8)) != 0
    }

    pub fn push(&mut self, bit: bool) {
        if self.len % 8 == 0 {
            self.bytes.push(0);
        }
        if bit {
            self.bytes[self.len / 8] |= 0x80 >> (self.len % 8);
        }
        self.len += 1;
    }

    pub fn extend(&mut self, other: &BitString) {
        for i in 0..other.len {
            self.push(other.get(i));
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Hex of the MSB-first packing, final byte zero-padded.
    pub fn to_hex(&self) -> String {
        self.bytes.iter().map(|b| format!("{:02x}", b)).collect()
    }

    pub fn from_hex(hex: &str, bit_len: usize) -> Result<Self> {
        if hex.len() != bit_len.div_ceil(8) * 2 {
            return Err(QkcError::InvalidArgument(format!(
                "hex length {} does not match bit length {}",
                hex.len(),
                bit_len
            )));
        }
        let mut bytes = Vec::with_capacity(hex.len() / 2);
        for chunk in hex.as_bytes().chunks(2) {
            let s = std::str::from_utf8(chunk).expect("hex is ascii");
            bytes.push(
                u8::from_str_radix(s, 16)
                    .map_err(|_| QkcError::InvalidArgument(format!("bad hex byte {:?}", s)))?,
            );
        }
        // Padding bits beyond bit_len must be zero so hex round-trips.
        if bit_len % 8 != 0 {
            if let Some(&last) = bytes.last() {
                if last & (0xffu16 >> (bit_len % 8)) as u8 != 0 {
                    return Err(QkcError::InvalidArgument(
                        "nonzero padding bits after the declared length".into(),
                    ));
                }
            }
        }
        Ok(Self { len: bit_len, bytes })
    }
}

impl std::fmt::Display for BitString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

// Debug shows the raw bits: that is what anyone inspecting a witness wants.
impl std::fmt::Debug for BitString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "\"{}\"", self)
    }
}

/// A program: raw bits plus the interpreter meant to decode them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    pub bits: BitString,
    pub interpreter: InterpreterId,
}

impl Program {
    pub fn new(bits: BitString, interpreter: InterpreterId) -> Self {
        Self { bits, interpreter }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

// Serialized in the on-disk program-file shape.
impl serde::Serialize for Program {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = ser.serialize_struct("Program", 3)?;
        s.serialize_field("bits_hex", &self.bits.to_hex())?;
        s.serialize_field("bit_len", &self.bits.len())?;
        s.serialize_field("interpreter", &self.interpreter)?;
        s.end()
    }
}

/// Cursor over a [`BitString`].
pub(crate) struct BitReader<'a> {
    bits: &'a BitString,
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(bits: &'a BitString) -> Self {
        Self { bits, pos: 0 }
    }

    pub fn remaining(&self) -> usize {
        self.bits.len() - self.pos
    }

    /// Next `n ≤ 16` bits as an integer, or None when exhausted.
    pub fn read(&mut self, n: usize) -> Option<u16> {
        if self.remaining() < n {
            return None;
        }
        let mut v = 0u16;
        for _ in 0..n {
            v = (v << 1) | self.bits.get(self.pos) as u16;
            self.pos += 1;
        }
        Some(v)
    }
}
