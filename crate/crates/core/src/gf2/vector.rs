use std::fmt;

use crate::error::{Error, Result};

pub(crate) const WORD_BITS: usize = 64;

pub(crate) fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// A vector over GF(2), packed into 64-bit words. Bit `i` lives in
/// `words[i / 64]` at position `i % 64`; bits past `len` are always zero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf2Vector {
    words: Vec<u64>,
    len: usize,
}

impl Gf2Vector {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; words_for(len)],
            len,
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for w in v.words.iter_mut() {
            *w = u64::MAX;
        }
        v.mask_tail();
        v
    }

    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Builds a vector from 0/1 entries; any other value is rejected.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            match b {
                0 => {}
                1 => v.set(i, true),
                other => {
                    return Err(Error::Parse(format!(
                        "entry {i} of binary vector is {other}, expected 0 or 1"
                    )))
                }
            }
        }
        Ok(v)
    }

    /// Low `len` bits of `word`, bit `i` of the word becoming entry `i`.
    pub fn from_word(word: u64, len: usize) -> Self {
        assert!(len <= WORD_BITS);
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = word;
            v.mask_tail();
        }
        v
    }

    /// Parses a string of `0`/`1` characters; commas and whitespace are ignored.
    pub fn parse_bits(s: &str) -> Result<Self> {
        let bits: Vec<u8> = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != ',')
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::Parse(format!("invalid bit {other:?} in {s:?}"))),
            })
            .collect::<Result<_>>()?;
        Self::from_bits(&bits)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// In-place XOR; panics on length mismatch.
    pub fn xor_assign(&mut self, other: &Gf2Vector) {
        assert_eq!(self.len, other.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &Gf2Vector) -> Result<Gf2Vector> {
        self.check_len(other, "xor")?;
        let mut out = self.clone();
        out.xor_assign(other);
        Ok(out)
    }

    /// Inner product mod 2.
    pub fn dot(&self, other: &Gf2Vector) -> Result<bool> {
        self.check_len(other, "dot product")?;
        Ok(self.dot_unchecked(other))
    }

    pub(crate) fn dot_unchecked(&self, other: &Gf2Vector) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Indices of the set bits, ascending.
    pub fn ones_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut word = w;
            std::iter::from_fn(move || {
                if word == 0 {
                    None
                } else {
                    let tz = word.trailing_zeros() as usize;
                    word &= word - 1;
                    Some(wi * WORD_BITS + tz)
                }
            })
        })
    }

    pub fn to_bits(&self) -> Vec<u8> {
        self.iter().map(u8::from).collect()
    }

    pub fn to_bit_string(&self) -> String {
        self.iter().map(|b| if b { '1' } else { '0' }).collect()
    }

    fn check_len(&self, other: &Gf2Vector, context: &'static str) -> Result<()> {
        if self.len != other.len {
            return Err(Error::mismatch(context, self.len, other.len));
        }
        Ok(())
    }

    fn mask_tail(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Debug for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Vector({})", self.to_bit_string())
    }
}

impl fmt::Display for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_xor_is_zero() {
        let v = Gf2Vector::parse_bits("1011001110001").unwrap();
        let z = v.xor(&v).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.len(), v.len());
    }

    #[test]
    fn weight_and_ones_cross_word_boundary() {
        let mut v = Gf2Vector::zeros(130);
        for i in [0, 63, 64, 127, 129] {
            v.set(i, true);
        }
        assert_eq!(v.weight(), 5);
        assert_eq!(v.ones_indices().collect::<Vec<_>>(), vec![0, 63, 64, 127, 129]);
        assert_eq!(Gf2Vector::ones(130).weight(), 130);
    }

    #[test]
    fn dot_product_parity() {
        let a = Gf2Vector::parse_bits("1101").unwrap();
        let b = Gf2Vector::parse_bits("1011").unwrap();
        assert!(!a.dot(&b).unwrap());
        assert!(a.dot(&Gf2Vector::parse_bits("1000").unwrap()).unwrap());
        assert!(a.dot(&Gf2Vector::zeros(3)).is_err());
    }

    #[test]
    fn rejects_non_binary_entries() {
        assert!(Gf2Vector::from_bits(&[0, 1, 2]).is_err());
        assert!(Gf2Vector::parse_bits("01x").is_err());
        assert_eq!(Gf2Vector::parse_bits("0, 1, 1").unwrap().to_bit_string(), "011");
    }
}
