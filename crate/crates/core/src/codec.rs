//! Binary file format for keys, ciphertexts and messages.
//!
//! ```text
//! offset  size  field
//!      0     4  magic "GRLW"
//!      4     1  version (0x01)
//!      5     1  kind: 01 pk, 02 sk, 03 ct, 04 msg
//!      6     4  n, little endian
//!     10     4  q, little endian
//!     14     2  CRC-16 of bytes 0..14, little endian
//!     16     -  body
//! ```
//!
//! A ring element is its `f` coefficients then its `g` coefficients, each a
//! 4-byte little-endian residue. A message is `ceil(n/8)` bytes, LSB first.

use crc::{Crc, CRC_16_IBM_3740};

use crate::error::{Error, Result};
use crate::group_ring::RingElement;
use crate::params::{build_params, ParamSet, Profile};
use crate::pke::{Ciphertext, Plaintext, PublicKey, SecretKey};

pub const MAGIC: [u8; 4] = *b"GRLW";
pub const VERSION: u8 = 0x01;
pub const HEADER_LEN: usize = 16;

const HEADER_CRC: Crc<u16> = Crc::<u16>::new(&CRC_16_IBM_3740);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Kind {
    PublicKey = 1,
    SecretKey = 2,
    Ciphertext = 3,
    Message = 4,
}

impl Kind {
    pub fn from_byte(b: u8) -> Option<Kind> {
        match b {
            1 => Some(Kind::PublicKey),
            2 => Some(Kind::SecretKey),
            3 => Some(Kind::Ciphertext),
            4 => Some(Kind::Message),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Kind::PublicKey => "public key",
            Kind::SecretKey => "secret key",
            Kind::Ciphertext => "ciphertext",
            Kind::Message => "message",
        }
    }

    /// Body length in bytes for rank `n`.
    pub fn body_len(&self, n: usize) -> usize {
        match self {
            Kind::Message => n.div_ceil(8),
            _ => 2 * n * 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WireHeader {
    pub kind: Kind,
    pub n: u32,
    pub q: u32,
}

impl WireHeader {
    pub fn encode(&self) -> [u8; HEADER_LEN] {
        let mut out = [0u8; HEADER_LEN];
        out[..4].copy_from_slice(&MAGIC);
        out[4] = VERSION;
        out[5] = self.kind as u8;
        out[6..10].copy_from_slice(&self.n.to_le_bytes());
        out[10..14].copy_from_slice(&self.q.to_le_bytes());
        let crc = HEADER_CRC.checksum(&out[..14]);
        out[14..16].copy_from_slice(&crc.to_le_bytes());
        out
    }

    /// Parses and checks the header. The checksum is verified before the
    /// version, so a corrupted byte anywhere past the magic reads as a
    /// parameter mismatch rather than as some other valid-looking header.
    pub fn decode(bytes: &[u8]) -> Result<WireHeader> {
        if bytes.len() < 4 || bytes[..4] != MAGIC {
            return Err(Error::BadMagic);
        }
        if bytes.len() < HEADER_LEN {
            return Err(Error::TruncatedBody {
                expected: HEADER_LEN,
                found: bytes.len(),
            });
        }
        let stored = u16::from_le_bytes([bytes[14], bytes[15]]);
        if HEADER_CRC.checksum(&bytes[..14]) != stored {
            return Err(Error::ParamMismatch("header checksum does not match".into()));
        }
        if bytes[4] != VERSION {
            return Err(Error::UnsupportedVersion(bytes[4]));
        }
        let kind = Kind::from_byte(bytes[5])
            .ok_or_else(|| Error::ParamMismatch(format!("unknown object kind {:#04x}", bytes[5])))?;
        let n = u32::from_le_bytes(bytes[6..10].try_into().unwrap());
        let q = u32::from_le_bytes(bytes[10..14].try_into().unwrap());
        if n < 4 || !n.is_power_of_two() {
            return Err(Error::ParamMismatch(format!("rank {n} is not a power of two >= 4")));
        }
        Ok(WireHeader { kind, n, q })
    }

    pub fn params(&self) -> Result<ParamSet> {
        let n = self.n as usize;
        if let Ok(p) = build_params(n, Profile::Default) {
            if p.q == self.q {
                return Ok(p);
            }
        }
        ParamSet::custom(n, self.q).map_err(|e| Error::ParamMismatch(e.to_string()))
    }
}

fn header_for(kind: Kind, n: usize, q: u32) -> WireHeader {
    WireHeader { kind, n: n as u32, q }
}

fn put_element(out: &mut Vec<u8>, x: &RingElement) {
    for c in x.f().coeffs().iter().chain(x.g().coeffs()) {
        out.extend_from_slice(&c.to_le_bytes());
    }
}

fn read_element(body: &[u8], n: usize, q: u32) -> Result<RingElement> {
    let coeffs = body
        .chunks_exact(4)
        .map(|c| {
            let v = u32::from_le_bytes(c.try_into().unwrap());
            if v >= q {
                Err(Error::CoefficientOutOfRange { value: v as u64, q })
            } else {
                Ok(v)
            }
        })
        .collect::<Result<Vec<u32>>>()?;
    debug_assert_eq!(coeffs.len(), n);
    RingElement::from_embedding(&coeffs, q)
}

/// Splits a file into header and a body of exactly the expected length.
fn open(bytes: &[u8], want: Kind) -> Result<(WireHeader, &[u8])> {
    let h = WireHeader::decode(bytes)?;
    if h.kind != want {
        return Err(Error::ParamMismatch(format!(
            "expected a {}, found a {}",
            want.name(),
            h.kind.name()
        )));
    }
    let expected = want.body_len(h.n as usize);
    let body = &bytes[HEADER_LEN..];
    if body.len() < expected {
        return Err(Error::TruncatedBody {
            expected,
            found: body.len(),
        });
    }
    if body.len() > expected {
        return Err(Error::ParamMismatch(format!(
            "{} trailing bytes after a {}-byte body",
            body.len() - expected,
            expected
        )));
    }
    Ok((h, body))
}

fn pair(kind: Kind, n: usize, q: u32, x: &RingElement, y: &RingElement) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + kind.body_len(n));
    out.extend_from_slice(&header_for(kind, n, q).encode());
    put_element(&mut out, x);
    put_element(&mut out, y);
    out
}

fn read_pair(bytes: &[u8], kind: Kind) -> Result<(WireHeader, RingElement, RingElement)> {
    let (h, body) = open(bytes, kind)?;
    let half = body.len() / 2;
    let x = read_element(&body[..half], h.n as usize, h.q)?;
    let y = read_element(&body[half..], h.n as usize, h.q)?;
    Ok((h, x, y))
}

pub fn encode_public_key(pk: &PublicKey) -> Vec<u8> {
    pair(Kind::PublicKey, pk.params.n, pk.params.q, &pk.a, &pk.b)
}

pub fn decode_public_key(bytes: &[u8]) -> Result<PublicKey> {
    let (h, a, b) = read_pair(bytes, Kind::PublicKey)?;
    Ok(PublicKey {
        a,
        b,
        params: h.params()?,
    })
}

pub fn encode_secret_key(sk: &SecretKey) -> Vec<u8> {
    pair(Kind::SecretKey, sk.params.n, sk.params.q, &sk.s, &sk.e)
}

pub fn decode_secret_key(bytes: &[u8]) -> Result<SecretKey> {
    let (h, s, e) = read_pair(bytes, Kind::SecretKey)?;
    Ok(SecretKey {
        s,
        e,
        params: h.params()?,
    })
}

pub fn encode_ciphertext(ct: &Ciphertext) -> Vec<u8> {
    pair(Kind::Ciphertext, ct.u.n(), ct.u.q(), &ct.u, &ct.v)
}

pub fn decode_ciphertext(bytes: &[u8]) -> Result<(WireHeader, Ciphertext)> {
    let (h, u, v) = read_pair(bytes, Kind::Ciphertext)?;
    h.params()?;
    Ok((h, Ciphertext { u, v }))
}

/// Messages carry `q` only so that a file names the parameter set it belongs to.
pub fn encode_message(z: &Plaintext, q: u32) -> Vec<u8> {
    let mut out = header_for(Kind::Message, z.len(), q).encode().to_vec();
    out.extend_from_slice(&z.to_bytes());
    out
}

pub fn decode_message(bytes: &[u8]) -> Result<(WireHeader, Plaintext)> {
    let (h, body) = open(bytes, Kind::Message)?;
    let n = h.n as usize;
    if !n.is_multiple_of(8) && body[body.len() - 1] >> (n % 8) != 0 {
        return Err(Error::ParamMismatch(
            "padding bits in the last message byte are set".into(),
        ));
    }
    Ok((h, Plaintext::from_bytes(body, n)?))
}

/// Reads just the header, for tools that dispatch on the object kind.
pub fn peek_header(bytes: &[u8]) -> Result<WireHeader> {
    WireHeader::decode(bytes)
}
