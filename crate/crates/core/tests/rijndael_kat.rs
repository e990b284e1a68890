use linkcrypt::rijndael::{inv_sbox, key_expand, sbox, CipherParams, Rijndael};

const VECTORS: &str = include_str!("data/rijndael_vectors.txt");

#[rustfmt::skip]
const AES_SBOX: [u8; 256] = [
    0x63, 0x7c, 0x77, 0x7b, 0xf2, 0x6b, 0x6f, 0xc5, 0x30, 0x01, 0x67, 0x2b, 0xfe, 0xd7, 0xab, 0x76,
    0xca, 0x82, 0xc9, 0x7d, 0xfa, 0x59, 0x47, 0xf0, 0xad, 0xd4, 0xa2, 0xaf, 0x9c, 0xa4, 0x72, 0xc0,
    0xb7, 0xfd, 0x93, 0x26, 0x36, 0x3f, 0xf7, 0xcc, 0x34, 0xa5, 0xe5, 0xf1, 0x71, 0xd8, 0x31, 0x15,
    0x04, 0xc7, 0x23, 0xc3, 0x18, 0x96, 0x05, 0x9a, 0x07, 0x12, 0x80, 0xe2, 0xeb, 0x27, 0xb2, 0x75,
    0x09, 0x83, 0x2c, 0x1a, 0x1b, 0x6e, 0x5a, 0xa0, 0x52, 0x3b, 0xd6, 0xb3, 0x29, 0xe3, 0x2f, 0x84,
    0x53, 0xd1, 0x00, 0xed, 0x20, 0xfc, 0xb1, 0x5b, 0x6a, 0xcb, 0xbe, 0x39, 0x4a, 0x4c, 0x58, 0xcf,
    0xd0, 0xef, 0xaa, 0xfb, 0x43, 0x4d, 0x33, 0x85, 0x45, 0xf9, 0x02, 0x7f, 0x50, 0x3c, 0x9f, 0xa8,
    0x51, 0xa3, 0x40, 0x8f, 0x92, 0x9d, 0x38, 0xf5, 0xbc, 0xb6, 0xda, 0x21, 0x10, 0xff, 0xf3, 0xd2,
    0xcd, 0x0c, 0x13, 0xec, 0x5f, 0x97, 0x44, 0x17, 0xc4, 0xa7, 0x7e, 0x3d, 0x64, 0x5d, 0x19, 0x73,
    0x60, 0x81, 0x4f, 0xdc, 0x22, 0x2a, 0x90, 0x88, 0x46, 0xee, 0xb8, 0x14, 0xde, 0x5e, 0x0b, 0xdb,
    0xe0, 0x32, 0x3a, 0x0a, 0x49, 0x06, 0x24, 0x5c, 0xc2, 0xd3, 0xac, 0x62, 0x91, 0x95, 0xe4, 0x79,
    0xe7, 0xc8, 0x37, 0x6d, 0x8d, 0xd5, 0x4e, 0xa9, 0x6c, 0x56, 0xf4, 0xea, 0x65, 0x7a, 0xae, 0x08,
    0xba, 0x78, 0x25, 0x2e, 0x1c, 0xa6, 0xb4, 0xc6, 0xe8, 0xdd, 0x74, 0x1f, 0x4b, 0xbd, 0x8b, 0x8a,
    0x70, 0x3e, 0xb5, 0x66, 0x48, 0x03, 0xf6, 0x0e, 0x61, 0x35, 0x57, 0xb9, 0x86, 0xc1, 0x1d, 0x9e,
    0xe1, 0xf8, 0x98, 0x11, 0x69, 0xd9, 0x8e, 0x94, 0x9b, 0x1e, 0x87, 0xe9, 0xce, 0x55, 0x28, 0xdf,
    0x8c, 0xa1, 0x89, 0x0d, 0xbf, 0xe6, 0x42, 0x68, 0x41, 0x99, 0x2d, 0x0f, 0xb0, 0x54, 0xbb, 0x16,
];

struct Vector {
    nb: usize,
    nk: usize,
    label: String,
    key: Vec<u8>,
    plaintext: Vec<u8>,
    ciphertext: Vec<u8>,
}

fn vectors() -> Vec<Vector> {
    VECTORS
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split_whitespace().collect();
            Vector {
                nb: f[0].parse().unwrap(),
                nk: f[1].parse().unwrap(),
                label: f[2].to_string(),
                key: hex::decode(f[3]).unwrap(),
                plaintext: hex::decode(f[4]).unwrap(),
                ciphertext: hex::decode(f[5]).unwrap(),
            }
        })
        .collect()
}

#[test]
fn every_width_pair_is_covered() {
    let v = vectors();
    assert_eq!(v.len(), 75);
    for nb in 4..=8 {
        for nk in 4..=8 {
            assert_eq!(
                v.iter().filter(|x| x.nb == nb && x.nk == nk).count(),
                3,
                "nb={nb} nk={nk}"
            );
        }
    }
}

#[test]
fn oracle_vectors_encrypt_and_decrypt() {
    for v in vectors() {
        let c = Rijndael::new(&v.key, CipherParams::new(v.nb, v.nk).unwrap()).unwrap();
        let ct = c.encrypt_block(&v.plaintext).unwrap();
        assert_eq!(
            hex::encode(&ct),
            hex::encode(&v.ciphertext),
            "nb={} nk={} {}",
            v.nb,
            v.nk,
            v.label
        );
        assert_eq!(
            c.decrypt_block(&ct).unwrap(),
            v.plaintext,
            "nb={} nk={} {}",
            v.nb,
            v.nk,
            v.label
        );
    }
}

#[test]
fn fips_appendix_c_vectors() {
    let pt = hex::decode("00112233445566778899aabbccddeeff").unwrap();
    for (key_bytes, expected) in [
        (16, "69c4e0d86a7b0430d8cdb78070b4c55a"),
        (24, "dda97ca4864cdfe06eaf70a0ec0d7191"),
        (32, "8ea2b7ca516745bfeafc49904b496089"),
    ] {
        let key: Vec<u8> = (0..key_bytes as u8).collect();
        let c = Rijndael::new(&key, CipherParams::new(4, key_bytes / 4).unwrap()).unwrap();
        assert_eq!(hex::encode(c.encrypt_block(&pt).unwrap()), expected);
    }
}

#[test]
fn fips_appendix_a_schedules() {
    let cases = [
        ("2b7e151628aed2a6abf7158809cf4f3c", 44, 0xb6630ca6u32),
        (
            "8e73b0f7da0e6452c810f32b809079e562f8ead2522c6b7b",
            52,
            0x01002202,
        ),
        (
            "603deb1015ca71be2b73aef0857d77811f352c073b6108d72d9810a30914dff4",
            60,
            0x706c631e,
        ),
    ];
    for (key, words, last) in cases {
        let key = hex::decode(key).unwrap();
        let keys = key_expand(&key, CipherParams::new(4, key.len() / 4).unwrap()).unwrap();
        assert_eq!(keys.words().len(), words);
        assert_eq!(*keys.words().last().unwrap(), last);
    }
}

#[test]
fn sbox_matches_published_table() {
    assert_eq!(sbox(), &AES_SBOX);
    for (i, &s) in AES_SBOX.iter().enumerate() {
        assert_eq!(inv_sbox()[s as usize] as usize, i);
    }
}
