use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest register handled by the enumeration helpers.
pub const MAX_PARTIES: usize = 16;

/// Computational-basis label of an `n`-qubit register, first qubit most
/// significant, so `value()` is the row index of `|I⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParityIndex {
    len: u8,
    value: u32,
}

impl ParityIndex {
    pub fn new(len: usize, value: usize) -> Result<Self> {
        if len == 0 || len > MAX_PARTIES {
            return Err(Error::InvalidParameter(format!(
                "register length {len} outside 1..={MAX_PARTIES}"
            )));
        }
        if value >= 1 << len {
            return Err(Error::InvalidParameter(format!(
                "index {value} does not fit in {len} bits"
            )));
        }
        Ok(Self {
            len: len as u8,
            value: value as u32,
        })
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let mut value = 0usize;
        for &b in bits {
            if b > 1 {
                return Err(Error::InvalidParameter(format!("bit value {b}")));
            }
            value = (value << 1) | b as usize;
        }
        Self::new(bits.len(), value)
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn value(&self) -> usize {
        self.value as usize
    }

    /// Bit `k`, counting from the first (dealer) qubit.
    pub fn bit(&self, k: usize) -> u8 {
        ((self.value >> (self.len() - 1 - k)) & 1) as u8
    }

    pub fn bits(&self) -> Vec<u8> {
        (0..self.len()).map(|k| self.bit(k)).collect()
    }

    /// Σ bits mod 2.
    pub fn parity(&self) -> u8 {
        (self.value.count_ones() % 2) as u8
    }

    pub fn is_even(&self) -> bool {
        self.parity() == 0
    }

    /// Drops bit `k`.
    pub fn remove(&self, k: usize) -> Result<Self> {
        let bits: Vec<u8> = self
            .bits()
            .into_iter()
            .enumerate()
            .filter(|&(i, _)| i != k)
            .map(|(_, b)| b)
            .collect();
        Self::from_bits(&bits)
    }

    /// All `2^n` indices in ascending order.
    pub fn all(n: usize) -> Result<Vec<Self>> {
        Self::new(n, 0)?;
        Ok((0..1usize << n).map(|v| Self::new(n, v).unwrap()).collect())
    }

    /// The `2^(n-1)` even-parity indices in lexicographic order.
    pub fn even(n: usize) -> Result<Vec<Self>> {
        Ok(Self::all(n)?.into_iter().filter(|i| i.is_even()).collect())
    }
}

impl fmt::Display for ParityIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for ParityIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits: Vec<u8> = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidParameter(format!("bad bit `{other}`"))),
            })
            .collect::<Result<_>>()?;
        Self::from_bits(&bits)
    }
}
