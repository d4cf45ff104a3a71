//! Bit strings and the two bitwise quantities the protocols are built on:
//! inner products and Hamming distance.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};

/// A fixed-length binary string. Bit 0 is the leftmost character of the
/// textual form and the most significant bit of the integer form, matching
/// the qubit-order convention in [`crate::sim`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitString(Vec<u8>);

impl BitString {
    pub fn zeros(len: usize) -> Self {
        BitString(vec![0; len])
    }

    pub fn ones(len: usize) -> Self {
        BitString(vec![1; len])
    }

    /// Builds from a slice of 0/1 values.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::Argument("bit values must be 0 or 1".into()));
        }
        Ok(BitString(bits.to_vec()))
    }

    /// The `width`-bit big-endian binary representation of `value`.
    pub fn from_index(value: usize, width: usize) -> Self {
        let mut bits = vec![0u8; width];
        for (i, bit) in bits.iter_mut().enumerate() {
            *bit = ((value >> (width - 1 - i)) & 1) as u8;
        }
        BitString(bits)
    }

    /// Interprets the string as a big-endian integer.
    pub fn to_index(&self) -> usize {
        self.0.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
    }

    pub fn random<R: Rng>(rng: &mut R, len: usize) -> Self {
        BitString((0..len).map(|_| rng.gen_range(0..2u8)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bit(&self, i: usize) -> u8 {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, value: u8) {
        debug_assert!(value <= 1);
        self.0[i] = value;
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn push(&mut self, value: u8) {
        debug_assert!(value <= 1);
        self.0.push(value);
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut bits = self.0.clone();
        bits.extend_from_slice(&other.0);
        BitString(bits)
    }

    pub fn xor(&self, other: &BitString) -> Result<BitString> {
        self.check_len(other)?;
        Ok(BitString(
            self.0.iter().zip(&other.0).map(|(a, b)| a ^ b).collect(),
        ))
    }

    /// Parity of the bitwise AND: line the strings up and count the
    /// positions where both have a 1.
    pub fn inner_product(&self, other: &BitString) -> Result<u8> {
        self.check_len(other)?;
        let ones = self
            .0
            .iter()
            .zip(&other.0)
            .filter(|(a, b)| **a == 1 && **b == 1)
            .count();
        Ok((ones % 2) as u8)
    }

    /// Number of positions on which the two strings differ.
    pub fn hamming_distance(&self, other: &BitString) -> Result<usize> {
        self.check_len(other)?;
        Ok(self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count())
    }

    fn check_len(&self, other: &BitString) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::Argument(format!(
                "length mismatch: {} vs {}",
                self.len(),
                other.len()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(0u8),
                '1' => Ok(1u8),
                _ => Err(Error::Argument(format!("invalid bit character {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitString)
    }
}
