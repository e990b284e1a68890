//! Rijndael with independent block and key widths of 4 to 8 32-bit words.
//!
//! With a 4-word block this is AES. The S-box is built once from its
//! algebraic definition (multiplicative inverse in GF(2^8) modulo
//! x^8 + x^4 + x^3 + x + 1 followed by the affine map). Shift offsets for the
//! wider blocks follow the original Rijndael proposal: (0,1,2,3) for 4 to 6
//! columns, (0,1,2,4) for 7 and (0,1,3,4) for 8.
//!
//! Nothing here is constant-time.

use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const MIN_WORDS: usize = 4;
pub const MAX_WORDS: usize = 8;

/// Block/key widths in 32-bit words plus the derived round count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CipherParams {
    nb: usize,
    nk: usize,
    nr: usize,
}

impl CipherParams {
    pub fn new(nb: usize, nk: usize) -> Result<Self> {
        for w in [nb, nk] {
            if !(MIN_WORDS..=MAX_WORDS).contains(&w) {
                return Err(Error::UnsupportedWidth(w));
            }
        }
        Ok(CipherParams {
            nb,
            nk,
            nr: nb.max(nk) + 6,
        })
    }

    /// Key width equal to block width.
    pub fn symmetric(nb: usize) -> Result<Self> {
        Self::new(nb, nb)
    }

    /// Symmetric parameters for a block length in bits (128, 160, ..., 256).
    pub fn for_block_bits(bits: usize) -> Result<Self> {
        if !bits.is_multiple_of(32) || !(MIN_WORDS..=MAX_WORDS).contains(&(bits / 32)) {
            return Err(Error::UnsupportedBlockLength(bits));
        }
        Self::symmetric(bits / 32)
    }

    pub fn nb(&self) -> usize {
        self.nb
    }

    pub fn nk(&self) -> usize {
        self.nk
    }

    pub fn nr(&self) -> usize {
        self.nr
    }

    pub fn block_bytes(&self) -> usize {
        4 * self.nb
    }

    pub fn key_bytes(&self) -> usize {
        4 * self.nk
    }

    pub fn block_bits(&self) -> usize {
        32 * self.nb
    }

    fn shifts(&self) -> [usize; 4] {
        match self.nb {
            7 => [0, 1, 2, 4],
            8 => [0, 1, 3, 4],
            _ => [0, 1, 2, 3],
        }
    }
}

struct Tables {
    sbox: [u8; 256],
    inv_sbox: [u8; 256],
}

fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(|| {
        // exp/log over the generator 0x03
        let mut exp = [0u8; 256];
        let mut log = [0u8; 256];
        let mut x = 1u8;
        for (i, e) in exp.iter_mut().enumerate().take(255) {
            *e = x;
            log[x as usize] = i as u8;
            x ^= xtime(x);
        }
        let inverse = |a: u8| -> u8 {
            if a == 0 {
                0
            } else {
                exp[(255 - log[a as usize] as usize) % 255]
            }
        };
        let mut sbox = [0u8; 256];
        let mut inv_sbox = [0u8; 256];
        for a in 0..=255u8 {
            let b = inverse(a);
            let s = b
                ^ b.rotate_left(1)
                ^ b.rotate_left(2)
                ^ b.rotate_left(3)
                ^ b.rotate_left(4)
                ^ 0x63;
            sbox[a as usize] = s;
            inv_sbox[s as usize] = a;
        }
        Tables { sbox, inv_sbox }
    })
}

/// The forward S-box.
pub fn sbox() -> &'static [u8; 256] {
    &tables().sbox
}

pub fn inv_sbox() -> &'static [u8; 256] {
    &tables().inv_sbox
}

#[inline]
fn xtime(a: u8) -> u8 {
    (a << 1) ^ if a & 0x80 != 0 { 0x1b } else { 0 }
}

#[inline]
fn gmul(mut a: u8, mut b: u8) -> u8 {
    let mut p = 0;
    while b != 0 {
        if b & 1 != 0 {
            p ^= a;
        }
        a = xtime(a);
        b >>= 1;
    }
    p
}

fn sub_word(w: u32) -> u32 {
    let s = sbox();
    u32::from_be_bytes(w.to_be_bytes().map(|b| s[b as usize]))
}

/// Expanded key schedule: `nb * (nr + 1)` words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundKeys {
    params: CipherParams,
    words: Vec<u32>,
}

impl RoundKeys {
    pub fn params(&self) -> CipherParams {
        self.params
    }

    pub fn words(&self) -> &[u32] {
        &self.words
    }

    fn round(&self, r: usize) -> &[u32] {
        &self.words[r * self.params.nb..(r + 1) * self.params.nb]
    }
}

pub fn key_expand(key: &[u8], params: CipherParams) -> Result<RoundKeys> {
    if key.len() != params.key_bytes() {
        return Err(Error::KeyLength {
            expected: params.key_bytes(),
            actual: key.len(),
        });
    }
    let nk = params.nk;
    let total = params.nb * (params.nr + 1);
    let mut words: Vec<u32> = key
        .chunks_exact(4)
        .map(|c| u32::from_be_bytes([c[0], c[1], c[2], c[3]]))
        .collect();
    words.reserve(total - nk);
    let mut rcon = 1u8;
    for i in nk..total {
        let mut temp = words[i - 1];
        if i % nk == 0 {
            temp = sub_word(temp.rotate_left(8)) ^ ((rcon as u32) << 24);
            rcon = xtime(rcon);
        } else if nk > 6 && i % nk == 4 {
            temp = sub_word(temp);
        }
        words.push(words[i - nk] ^ temp);
    }
    Ok(RoundKeys { params, words })
}

// State layout matches the input block: byte i sits at row i % 4, column i / 4.

fn add_round_key(state: &mut [u8], round: &[u32]) {
    for (col, w) in state.chunks_exact_mut(4).zip(round) {
        for (b, k) in col.iter_mut().zip(w.to_be_bytes()) {
            *b ^= k;
        }
    }
}

fn sub_bytes(state: &mut [u8], table: &[u8; 256]) {
    for b in state.iter_mut() {
        *b = table[*b as usize];
    }
}

fn shift_rows(state: &mut [u8], nb: usize, shifts: [usize; 4], inverse: bool) {
    let mut row = [0u8; MAX_WORDS];
    for (r, &s) in shifts.iter().enumerate().skip(1) {
        for c in 0..nb {
            row[c] = state[r + 4 * c];
        }
        for c in 0..nb {
            let src = if inverse {
                (c + nb - s) % nb
            } else {
                (c + s) % nb
            };
            state[r + 4 * c] = row[src];
        }
    }
}

fn mix_columns(state: &mut [u8]) {
    for col in state.chunks_exact_mut(4) {
        let a = [col[0], col[1], col[2], col[3]];
        for r in 0..4 {
            col[r] = xtime(a[r])
                ^ (xtime(a[(r + 1) % 4]) ^ a[(r + 1) % 4])
                ^ a[(r + 2) % 4]
                ^ a[(r + 3) % 4];
        }
    }
}

fn inv_mix_columns(state: &mut [u8]) {
    for col in state.chunks_exact_mut(4) {
        let a = [col[0], col[1], col[2], col[3]];
        for r in 0..4 {
            col[r] = gmul(a[r], 0x0e)
                ^ gmul(a[(r + 1) % 4], 0x0b)
                ^ gmul(a[(r + 2) % 4], 0x0d)
                ^ gmul(a[(r + 3) % 4], 0x09);
        }
    }
}

fn check_block(block: &[u8], params: CipherParams) -> Result<()> {
    if block.len() != params.block_bytes() {
        return Err(Error::BlockLength {
            expected: params.block_bytes(),
            actual: block.len(),
        });
    }
    Ok(())
}

/// Encrypts one block in place.
pub fn encrypt_in_place(block: &mut [u8], keys: &RoundKeys) -> Result<()> {
    let p = keys.params;
    check_block(block, p)?;
    let t = tables();
    let shifts = p.shifts();
    add_round_key(block, keys.round(0));
    for r in 1..p.nr {
        sub_bytes(block, &t.sbox);
        shift_rows(block, p.nb, shifts, false);
        mix_columns(block);
        add_round_key(block, keys.round(r));
    }
    sub_bytes(block, &t.sbox);
    shift_rows(block, p.nb, shifts, false);
    add_round_key(block, keys.round(p.nr));
    Ok(())
}

/// Decrypts one block in place (straight inverse cipher).
pub fn decrypt_in_place(block: &mut [u8], keys: &RoundKeys) -> Result<()> {
    let p = keys.params;
    check_block(block, p)?;
    let t = tables();
    let shifts = p.shifts();
    add_round_key(block, keys.round(p.nr));
    shift_rows(block, p.nb, shifts, true);
    sub_bytes(block, &t.inv_sbox);
    for r in (1..p.nr).rev() {
        add_round_key(block, keys.round(r));
        inv_mix_columns(block);
        shift_rows(block, p.nb, shifts, true);
        sub_bytes(block, &t.inv_sbox);
    }
    add_round_key(block, keys.round(0));
    Ok(())
}

pub fn encrypt_block(plaintext: &[u8], keys: &RoundKeys) -> Result<Vec<u8>> {
    let mut out = plaintext.to_vec();
    encrypt_in_place(&mut out, keys)?;
    Ok(out)
}

pub fn decrypt_block(ciphertext: &[u8], keys: &RoundKeys) -> Result<Vec<u8>> {
    let mut out = ciphertext.to_vec();
    decrypt_in_place(&mut out, keys)?;
    Ok(out)
}

/// A keyed cipher instance.
#[derive(Clone, Debug)]
pub struct Rijndael {
    keys: RoundKeys,
}

impl Rijndael {
    pub fn new(key: &[u8], params: CipherParams) -> Result<Self> {
        Ok(Rijndael {
            keys: key_expand(key, params)?,
        })
    }

    /// Block width = key width = `block_bits`.
    pub fn with_block_bits(key: &[u8], block_bits: usize) -> Result<Self> {
        Self::new(key, CipherParams::for_block_bits(block_bits)?)
    }

    pub fn params(&self) -> CipherParams {
        self.keys.params
    }

    pub fn round_keys(&self) -> &RoundKeys {
        &self.keys
    }

    pub fn encrypt_in_place(&self, block: &mut [u8]) -> Result<()> {
        encrypt_in_place(block, &self.keys)
    }

    pub fn decrypt_in_place(&self, block: &mut [u8]) -> Result<()> {
        decrypt_in_place(block, &self.keys)
    }

    pub fn encrypt_block(&self, block: &[u8]) -> Result<Vec<u8>> {
        encrypt_block(block, &self.keys)
    }

    pub fn decrypt_block(&self, block: &[u8]) -> Result<Vec<u8>> {
        decrypt_block(block, &self.keys)
    }
}
