//! ECB and CBC framing over the variable-width cipher.
//!
//! A frame carries one chain: plaintext is zero-padded to a whole number of
//! blocks and the true bit length travels in the clear header together with
//! the block length, the mode and (for CBC) the IV. Frames never chain into
//! each other.
//!
//! Wire layout, integers little-endian:
//!
//! ```text
//! frame_index: u32 | block_len_bits: u16 | original_bit_length: u32 | mode: u8 | iv (CBC only) | blocks...
//! ```

use std::fmt;
use std::str::FromStr;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::rijndael::Rijndael;

/// Block lengths supported by the framing layer.
pub const BLOCK_LENGTHS: [usize; 5] = [128, 160, 192, 224, 256];

/// Header bytes before the IV.
pub const FIXED_HEADER_BYTES: usize = 4 + 2 + 4 + 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Ecb,
    Cbc,
}

impl Mode {
    pub fn flag(self) -> u8 {
        match self {
            Mode::Ecb => 0,
            Mode::Cbc => 1,
        }
    }

    pub fn from_flag(flag: u8) -> Result<Self> {
        match flag {
            0 => Ok(Mode::Ecb),
            1 => Ok(Mode::Cbc),
            other => Err(Error::MalformedFrame(format!("unknown mode flag {other}"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Ecb => "ecb",
            Mode::Cbc => "cbc",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ecb" => Ok(Mode::Ecb),
            "cbc" => Ok(Mode::Cbc),
            other => Err(Error::config(
                "mode",
                format!("expected ecb or cbc, got {other:?}"),
            )),
        }
    }
}

pub fn check_block_len(block_len_bits: usize) -> Result<()> {
    if BLOCK_LENGTHS.contains(&block_len_bits) {
        Ok(())
    } else {
        Err(Error::UnsupportedBlockLength(block_len_bits))
    }
}

/// One encrypted frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FramePayload {
    pub frame_index: u32,
    pub block_len_bits: usize,
    pub original_bits: usize,
    pub mode: Mode,
    pub iv: Option<Vec<u8>>,
    /// Concatenated ciphertext blocks.
    pub body: Vec<u8>,
}

impl FramePayload {
    pub fn block_bytes(&self) -> usize {
        self.block_len_bits / 8
    }

    pub fn block_count(&self) -> usize {
        self.body.len() / self.block_bytes()
    }

    pub fn blocks(&self) -> impl Iterator<Item = &[u8]> {
        self.body.chunks_exact(self.block_bytes())
    }

    pub fn with_index(mut self, frame_index: u32) -> Self {
        self.frame_index = frame_index;
        self
    }

    pub fn header_len(&self) -> usize {
        FIXED_HEADER_BYTES + self.iv.as_ref().map_or(0, Vec::len)
    }

    /// Structural checks shared by decryption and parsing.
    pub fn validate(&self) -> Result<()> {
        check_block_len(self.block_len_bits)?;
        let bb = self.block_bytes();
        if !self.body.len().is_multiple_of(bb) {
            return Err(Error::MalformedFrame(format!(
                "body of {} bytes is not a multiple of the {bb}-byte block",
                self.body.len()
            )));
        }
        let expected_blocks = self.original_bits.div_ceil(self.block_len_bits);
        if self.block_count() != expected_blocks {
            return Err(Error::MalformedFrame(format!(
                "{} blocks carried but {} bits need {expected_blocks}",
                self.block_count(),
                self.original_bits
            )));
        }
        match (self.mode, &self.iv) {
            (Mode::Ecb, None) => Ok(()),
            (Mode::Ecb, Some(_)) => Err(Error::MalformedFrame("ECB frame carries an IV".into())),
            (Mode::Cbc, None) => Err(Error::MalformedFrame("CBC frame without IV".into())),
            (Mode::Cbc, Some(iv)) if iv.len() != bb => Err(Error::IvLength {
                expected: bb,
                actual: iv.len(),
            }),
            (Mode::Cbc, Some(_)) => Ok(()),
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.header_len() + self.body.len());
        out.extend_from_slice(&self.frame_index.to_le_bytes());
        out.extend_from_slice(&(self.block_len_bits as u16).to_le_bytes());
        out.extend_from_slice(&(self.original_bits as u32).to_le_bytes());
        out.push(self.mode.flag());
        if let Some(iv) = &self.iv {
            out.extend_from_slice(iv);
        }
        out.extend_from_slice(&self.body);
        out
    }

    pub fn from_bytes(wire: &[u8]) -> Result<Self> {
        if wire.len() < FIXED_HEADER_BYTES {
            return Err(Error::MalformedFrame(format!(
                "{} bytes is shorter than the {FIXED_HEADER_BYTES}-byte header",
                wire.len()
            )));
        }
        let frame_index = u32::from_le_bytes(wire[0..4].try_into().unwrap());
        let block_len_bits = u16::from_le_bytes(wire[4..6].try_into().unwrap()) as usize;
        let original_bits = u32::from_le_bytes(wire[6..10].try_into().unwrap()) as usize;
        let mode = Mode::from_flag(wire[10])?;
        check_block_len(block_len_bits)?;
        let mut rest = &wire[FIXED_HEADER_BYTES..];
        let iv = match mode {
            Mode::Ecb => None,
            Mode::Cbc => {
                let bb = block_len_bits / 8;
                if rest.len() < bb {
                    return Err(Error::MalformedFrame("truncated IV".into()));
                }
                let (iv, tail) = rest.split_at(bb);
                rest = tail;
                Some(iv.to_vec())
            }
        };
        let payload = FramePayload {
            frame_index,
            block_len_bits,
            original_bits,
            mode,
            iv,
            body: rest.to_vec(),
        };
        payload.validate()?;
        Ok(payload)
    }
}

fn keyed(key: &[u8], block_len_bits: usize) -> Result<Rijndael> {
    check_block_len(block_len_bits)?;
    Rijndael::with_block_bits(key, block_len_bits)
}

fn check_original_len(bits: usize) -> Result<()> {
    if bits > u32::MAX as usize {
        return Err(Error::MalformedFrame(format!(
            "{bits} bits exceed the 32-bit length field"
        )));
    }
    Ok(())
}

pub fn ecb_encrypt(plaintext: &Bits, key: &[u8], block_len_bits: usize) -> Result<FramePayload> {
    let cipher = keyed(key, block_len_bits)?;
    check_original_len(plaintext.len())?;
    let mut body = plaintext.padded_to(block_len_bits).into_bytes();
    for block in body.chunks_exact_mut(block_len_bits / 8) {
        cipher.encrypt_in_place(block)?;
    }
    Ok(FramePayload {
        frame_index: 0,
        block_len_bits,
        original_bits: plaintext.len(),
        mode: Mode::Ecb,
        iv: None,
        body,
    })
}

pub fn cbc_encrypt(
    plaintext: &Bits,
    key: &[u8],
    block_len_bits: usize,
    iv: &[u8],
) -> Result<FramePayload> {
    let cipher = keyed(key, block_len_bits)?;
    check_original_len(plaintext.len())?;
    let bb = block_len_bits / 8;
    if iv.len() != bb {
        return Err(Error::IvLength {
            expected: bb,
            actual: iv.len(),
        });
    }
    let mut body = plaintext.padded_to(block_len_bits).into_bytes();
    let mut prev = iv.to_vec();
    for block in body.chunks_exact_mut(bb) {
        xor_into(block, &prev);
        cipher.encrypt_in_place(block)?;
        prev.copy_from_slice(block);
    }
    Ok(FramePayload {
        frame_index: 0,
        block_len_bits,
        original_bits: plaintext.len(),
        mode: Mode::Cbc,
        iv: Some(iv.to_vec()),
        body,
    })
}

/// Encrypts under either mode; `iv` is required for CBC and ignored for ECB.
pub fn encrypt(
    mode: Mode,
    plaintext: &Bits,
    key: &[u8],
    block_len_bits: usize,
    iv: Option<&[u8]>,
) -> Result<FramePayload> {
    match mode {
        Mode::Ecb => ecb_encrypt(plaintext, key, block_len_bits),
        Mode::Cbc => {
            let iv = iv.ok_or_else(|| Error::MalformedFrame("CBC needs an IV".into()))?;
            cbc_encrypt(plaintext, key, block_len_bits, iv)
        }
    }
}

/// Decrypts every block, keeping the padding: the result is
/// `block_count * block_len_bits` long.
pub fn decrypt_padded(payload: &FramePayload, key: &[u8]) -> Result<Bits> {
    payload.validate()?;
    let cipher = keyed(key, payload.block_len_bits)?;
    let bb = payload.block_bytes();
    let mut out = payload.body.clone();
    match payload.mode {
        Mode::Ecb => {
            for block in out.chunks_exact_mut(bb) {
                cipher.decrypt_in_place(block)?;
            }
        }
        Mode::Cbc => {
            let iv = payload.iv.as_deref().expect("validated");
            for (i, block) in out.chunks_exact_mut(bb).enumerate() {
                cipher.decrypt_in_place(block)?;
                let prev = if i == 0 {
                    iv
                } else {
                    &payload.body[(i - 1) * bb..i * bb]
                };
                xor_into(block, prev);
            }
        }
    }
    Ok(Bits::from_bytes(out))
}

pub fn decrypt(payload: &FramePayload, key: &[u8]) -> Result<Bits> {
    let padded = decrypt_padded(payload, key)?;
    Ok(padded.truncated(payload.original_bits))
}

pub fn ecb_decrypt(payload: &FramePayload, key: &[u8]) -> Result<Bits> {
    if payload.mode != Mode::Ecb {
        return Err(Error::MalformedFrame("expected an ECB frame".into()));
    }
    decrypt(payload, key)
}

pub fn cbc_decrypt(payload: &FramePayload, key: &[u8]) -> Result<Bits> {
    if payload.mode != Mode::Cbc {
        return Err(Error::MalformedFrame("expected a CBC frame".into()));
    }
    decrypt(payload, key)
}

fn xor_into(dst: &mut [u8], src: &[u8]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}
