//! Packed bit buffer.
//!
//! Bits are stored MSB-first within each byte, so a byte-aligned `Bits` has
//! the same in-memory layout as the byte string it came from. Bits past
//! `len` in the final byte are always zero.

use rand::Rng;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Bits {
    bytes: Vec<u8>,
    len: usize,
}

impl Bits {
    /// All-zero buffer of `len` bits.
    pub fn zeros(len: usize) -> Self {
        Bits {
            bytes: vec![0; len.div_ceil(8)],
            len,
        }
    }

    pub fn from_bytes(bytes: Vec<u8>) -> Self {
        let len = bytes.len() * 8;
        Bits { bytes, len }
    }

    /// Takes the first `len` bits of `bytes`; trailing bytes are dropped and
    /// the unused tail of the last byte is cleared.
    pub fn from_bytes_truncated(mut bytes: Vec<u8>, len: usize) -> Self {
        assert!(len <= bytes.len() * 8, "bit length exceeds byte buffer");
        bytes.truncate(len.div_ceil(8));
        let mut bits = Bits { bytes, len };
        bits.clear_tail();
        bits
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut bytes = vec![0u8; len.div_ceil(8)];
        rng.fill(bytes.as_mut_slice());
        let mut bits = Bits { bytes, len };
        bits.clear_tail();
        bits
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        self.bytes[i / 8] & (0x80 >> (i % 8)) != 0
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        let mask = 0x80 >> (i % 8);
        if value {
            self.bytes[i / 8] |= mask;
        } else {
            self.bytes[i / 8] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        self.bytes[i / 8] ^= 0x80 >> (i % 8);
    }

    /// Zero-extends to the next multiple of `block_bits` (no-op when already
    /// aligned; an empty buffer stays empty).
    pub fn padded_to(&self, block_bits: usize) -> Bits {
        assert!(block_bits > 0 && block_bits.is_multiple_of(8));
        let target = self.len.div_ceil(block_bits) * block_bits;
        let mut bytes = self.bytes.clone();
        bytes.resize(target / 8, 0);
        Bits { bytes, len: target }
    }

    pub fn truncated(&self, len: usize) -> Bits {
        Bits::from_bytes_truncated(self.bytes.clone(), len)
    }

    /// Number of positions where `self` and `other` differ. Panics on length
    /// mismatch.
    pub fn hamming_distance(&self, other: &Bits) -> usize {
        assert_eq!(self.len, other.len, "hamming distance of unequal lengths");
        self.bytes
            .iter()
            .zip(&other.bytes)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    fn clear_tail(&mut self) {
        let rem = self.len % 8;
        if rem != 0 {
            if let Some(last) = self.bytes.last_mut() {
                *last &= 0xffu8 << (8 - rem);
            }
        }
    }
}

/// Hamming distance between two equal-length byte strings.
pub fn byte_distance(a: &[u8], b: &[u8]) -> usize {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x ^ y).count_ones() as usize)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn msb_first_layout() {
        let mut b = Bits::zeros(10);
        b.set(0, true);
        b.set(9, true);
        assert_eq!(b.as_bytes(), &[0x80, 0x40]);
        assert!(b.get(0) && b.get(9) && !b.get(1));
    }

    #[test]
    fn truncation_clears_tail() {
        let b = Bits::from_bytes_truncated(vec![0xff, 0xff, 0xff], 12);
        assert_eq!(b.as_bytes(), &[0xff, 0xf0]);
        assert_eq!(b.len(), 12);
    }

    #[test]
    fn padding_rounds_up_to_block() {
        let b = Bits::from_bytes_truncated(vec![0xab, 0xc0], 10);
        let p = b.padded_to(128);
        assert_eq!(p.len(), 128);
        assert_eq!(&p.as_bytes()[..2], &[0xab, 0xc0]);
        assert!(p.as_bytes()[2..].iter().all(|&x| x == 0));
        assert_eq!(Bits::zeros(0).padded_to(128).len(), 0);
        assert_eq!(Bits::zeros(256).padded_to(128).len(), 256);
    }

    #[test]
    fn random_respects_length() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let b = Bits::random(13, &mut rng);
        assert_eq!(b.as_bytes().len(), 2);
        assert_eq!(b.as_bytes()[1] & 0x07, 0);
    }

    #[test]
    fn flip_and_distance() {
        let a = Bits::zeros(64);
        let mut b = a.clone();
        b.flip(3);
        b.flip(63);
        assert_eq!(a.hamming_distance(&b), 2);
        b.flip(3);
        assert_eq!(a.hamming_distance(&b), 1);
    }
}
