//! Public-key encryption over the dihedral ring.
//!
//! ```text
//! keygen:  a uniform, s, e small,   b = s a + e
//! encrypt: r, e1, e2 small,         u = a r + e1,  v = b r + e2 + ⌊q/2⌋ z
//! decrypt: v - s u = e r - s e1 + e2 + ⌊q/2⌋ z
//! ```
//!
//! The ring is not commutative, so each product keeps the order shown above.

use rand::Rng;

use crate::error::{Error, Result};
use crate::group_ring::{GroupRing, RingElement};
use crate::params::{validate, ParamSet};
use crate::sampler::{sample_uniform, ErrorDist, SamplingMode};

#[derive(Debug, Clone, PartialEq)]
pub struct PublicKey {
    pub a: RingElement,
    pub b: RingElement,
    pub params: ParamSet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SecretKey {
    pub s: RingElement,
    /// Kept for diagnostics; decryption only needs `s`.
    pub e: RingElement,
    pub params: ParamSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ciphertext {
    pub u: RingElement,
    pub v: RingElement,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Plaintext {
    bits: Vec<bool>,
}

impl Plaintext {
    pub fn new(bits: Vec<bool>) -> Plaintext {
        Plaintext { bits }
    }

    pub fn zeros(n: usize) -> Plaintext {
        Plaintext { bits: vec![false; n] }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Plaintext {
        Plaintext {
            bits: (0..n).map(|_| rng.random()).collect(),
        }
    }

    /// The `n` low bits of `pattern`, bit `i` first.
    pub fn from_pattern(pattern: u64, n: usize) -> Plaintext {
        Plaintext {
            bits: (0..n).map(|i| i < 64 && (pattern >> i) & 1 == 1).collect(),
        }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// LSB-first packing into `ceil(n/8)` bytes.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.bits.len().div_ceil(8)];
        for (i, &b) in self.bits.iter().enumerate() {
            if b {
                out[i / 8] |= 1 << (i % 8);
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8], n: usize) -> Result<Plaintext> {
        if bytes.len() < n.div_ceil(8) {
            return Err(Error::TruncatedBody {
                expected: n.div_ceil(8),
                found: bytes.len(),
            });
        }
        Ok(Plaintext {
            bits: (0..n).map(|i| (bytes[i / 8] >> (i % 8)) & 1 == 1).collect(),
        })
    }

    pub fn hamming_agreement(&self, other: &Plaintext) -> usize {
        self.bits.iter().zip(&other.bits).filter(|(a, b)| a == b).count()
    }
}

/// The ephemeral values drawn during one encryption.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncryptionRandomness {
    pub r: RingElement,
    pub e1: RingElement,
    pub e2: RingElement,
}

#[derive(Debug, Clone)]
pub struct Pke {
    params: ParamSet,
    ring: GroupRing,
    dist: ErrorDist,
}

impl Pke {
    pub fn new(params: &ParamSet) -> Result<Pke> {
        let v = validate(params);
        if !v.is_empty() {
            let msg: Vec<String> = v.iter().map(|v| v.to_string()).collect();
            return Err(Error::InvalidParameter(msg.join(", ")));
        }
        let dist = ErrorDist::from_params(params, SamplingMode::Rounded)?;
        Pke::with_error(params, dist)
    }

    pub fn with_error(params: &ParamSet, dist: ErrorDist) -> Result<Pke> {
        Ok(Pke {
            params: params.clone(),
            ring: GroupRing::from_params(params)?,
            dist,
        })
    }

    pub fn params(&self) -> &ParamSet {
        &self.params
    }

    pub fn ring(&self) -> &GroupRing {
        &self.ring
    }

    pub fn error_dist(&self) -> &ErrorDist {
        &self.dist
    }

    /// Half the modulus rounded down; the scale of an encoded `1`.
    pub fn half_q(&self) -> u32 {
        self.params.q / 2
    }

    pub fn keygen<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(PublicKey, SecretKey)> {
        let s = self.dist.sample(rng);
        let e = self.dist.sample(rng);
        let a = sample_uniform(&self.ring, rng);
        self.keygen_from_parts(a, s, e)
    }

    pub fn keygen_from_parts(&self, a: RingElement, s: RingElement, e: RingElement) -> Result<(PublicKey, SecretKey)> {
        let b = self.ring.add(&self.ring.mul(&s, &a)?, &e)?;
        Ok((
            PublicKey {
                a,
                b,
                params: self.params.clone(),
            },
            SecretKey {
                s,
                e,
                params: self.params.clone(),
            },
        ))
    }

    pub fn sample_randomness<R: Rng + ?Sized>(&self, rng: &mut R) -> EncryptionRandomness {
        EncryptionRandomness {
            r: self.dist.sample(rng),
            e1: self.dist.sample(rng),
            e2: self.dist.sample(rng),
        }
    }

    pub fn encrypt<R: Rng + ?Sized>(&self, pk: &PublicKey, z: &Plaintext, rng: &mut R) -> Result<Ciphertext> {
        Ok(self.encrypt_instrumented(pk, z, rng)?.0)
    }

    pub fn encrypt_instrumented<R: Rng + ?Sized>(
        &self,
        pk: &PublicKey,
        z: &Plaintext,
        rng: &mut R,
    ) -> Result<(Ciphertext, EncryptionRandomness)> {
        let rand = self.sample_randomness(rng);
        let ct = self.encrypt_with(pk, z, &rand)?;
        Ok((ct, rand))
    }

    pub fn encrypt_with(&self, pk: &PublicKey, z: &Plaintext, rand: &EncryptionRandomness) -> Result<Ciphertext> {
        let gr = &self.ring;
        let msg = gr.scaled_bits(z.bits(), self.half_q())?;
        let u = gr.add(&gr.mul(&pk.a, &rand.r)?, &rand.e1)?;
        let v = gr.add(&gr.add(&gr.mul(&pk.b, &rand.r)?, &rand.e2)?, &msg)?;
        Ok(Ciphertext { u, v })
    }

    /// `v - s u`, the value the decoder rounds.
    pub fn decryption_residue(&self, sk: &SecretKey, ct: &Ciphertext) -> Result<RingElement> {
        self.ring.sub(&ct.v, &self.ring.mul(&sk.s, &ct.u)?)
    }

    pub fn decrypt(&self, sk: &SecretKey, ct: &Ciphertext) -> Result<Plaintext> {
        let d = self.decryption_residue(sk, ct)?;
        Ok(Plaintext::new(
            d.embedding().into_iter().map(|c| self.decode_coeff(c)).collect(),
        ))
    }

    /// `true` unless `c` is strictly closer to `0` than to `⌊q/2⌋` (mod `q`).
    pub fn decode_coeff(&self, c: u32) -> bool {
        let q = self.params.q;
        let h = self.half_q();
        let circ = |a: u32, b: u32| {
            let d = a.abs_diff(b);
            d.min(q - d)
        };
        circ(c, 0) >= circ(c, h)
    }

    /// `e r - s e1 + e2`: what remains of `v - s u` once the message is removed.
    pub fn decryption_noise(&self, sk: &SecretKey, rand: &EncryptionRandomness) -> Result<RingElement> {
        let gr = &self.ring;
        let er = gr.mul(&sk.e, &rand.r)?;
        let se1 = gr.mul(&sk.s, &rand.e1)?;
        gr.add(&gr.sub(&er, &se1)?, &rand.e2)
    }

    /// Monte Carlo estimate over fresh keys and messages.
    pub fn estimate_failure_rate<R: Rng + ?Sized>(&self, trials: usize, rng: &mut R) -> Result<FailureReport> {
        if trials < 100 {
            return Err(Error::InvalidParameter(format!(
                "need at least 100 trials, got {trials}"
            )));
        }
        let n = self.params.n;
        let quarter = self.params.q as f64 / 4.0;
        let mut report = FailureReport {
            trials,
            bits_per_message: n,
            ..FailureReport::default()
        };
        for _ in 0..trials {
            let (pk, sk) = self.keygen(rng)?;
            let z = Plaintext::random(n, rng);
            let (ct, rand) = self.encrypt_instrumented(&pk, &z, rng)?;
            let got = self.decrypt(&sk, &ct)?;
            let wrong = n - got.hamming_agreement(&z);
            report.bit_failures += wrong;
            if wrong > 0 {
                report.message_failures += 1;
            }
            let noise = self.decryption_noise(&sk, &rand)?;
            let linf = noise
                .centered_embedding()
                .iter()
                .map(|c| c.unsigned_abs())
                .max()
                .unwrap_or(0);
            report.max_noise_linf = report.max_noise_linf.max(linf);
            if (linf as f64) < quarter {
                report.noise_below_quarter += 1;
            }
        }
        Ok(report)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct FailureReport {
    pub trials: usize,
    pub bits_per_message: usize,
    pub message_failures: usize,
    pub bit_failures: usize,
    /// Largest `||e r - s e1 + e2||_inf` seen.
    pub max_noise_linf: u64,
    /// Trials whose noise stayed strictly below `q/4`.
    pub noise_below_quarter: usize,
}

impl FailureReport {
    pub fn message_rate(&self) -> f64 {
        self.message_failures as f64 / self.trials as f64
    }

    pub fn bit_rate(&self) -> f64 {
        self.bit_failures as f64 / (self.trials * self.bits_per_message) as f64
    }

    pub fn message_interval(&self) -> (f64, f64) {
        wilson_interval(self.message_failures, self.trials)
    }

    pub fn bit_interval(&self) -> (f64, f64) {
        wilson_interval(self.bit_failures, self.trials * self.bits_per_message)
    }
}

/// Wilson score interval at 95% confidence.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054_f64;
    let n = trials as f64;
    let p = successes as f64 / n;
    let denom = 1.0 + z * z / n;
    let centre = (p + z * z / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt();
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{build_params, Profile};
    use crate::sampler::seeded_rng;

    #[test]
    fn byte_packing() {
        let z = Plaintext::from_pattern(0b1000_0001_0000_0011, 16);
        assert_eq!(z.to_bytes(), vec![0b0000_0011, 0b1000_0001]);
        assert_eq!(Plaintext::from_bytes(&z.to_bytes(), 16).unwrap(), z);
        let odd = Plaintext::from_pattern(0b101, 4);
        assert_eq!(odd.to_bytes(), vec![0b0101]);
        assert!(Plaintext::from_bytes(&[], 4).is_err());
    }

    #[test]
    fn decoding_threshold() {
        let p = build_params(4, Profile::Toy).unwrap();
        let pke = Pke::new(&p).unwrap();
        // q = 17, ⌊q/2⌋ = 8: 0..=3 and 14..=16 decode to 0
        let zeros: Vec<u32> = (0..17).filter(|&c| !pke.decode_coeff(c)).collect();
        assert_eq!(zeros, vec![0, 1, 2, 3, 13, 14, 15, 16]);
        // 4 is at distance 4 from both 0 and 8: tie goes to 1
        assert!(pke.decode_coeff(4));
    }

    #[test]
    fn noiseless_encryption_shapes() {
        let p = build_params(8, Profile::Default).unwrap();
        let pke = Pke::new(&p).unwrap();
        let gr = pke.ring().clone();
        let mut rng = seeded_rng(8);
        let (pk, sk) = pke.keygen(&mut rng).unwrap();
        let r = pke.error_dist().sample(&mut rng);
        let zero_noise = EncryptionRandomness {
            r: r.clone(),
            e1: gr.zero(),
            e2: gr.zero(),
        };
        let ct = pke.encrypt_with(&pk, &Plaintext::zeros(8), &zero_noise).unwrap();
        assert_eq!(ct.u, gr.mul(&pk.a, &r).unwrap());
        assert_eq!(ct.v, gr.mul(&pk.b, &r).unwrap());

        let nothing = EncryptionRandomness {
            r: gr.zero(),
            e1: gr.zero(),
            e2: gr.zero(),
        };
        let z = Plaintext::from_pattern(0b1011_0010, 8);
        let ct = pke.encrypt_with(&pk, &z, &nothing).unwrap();
        assert!(ct.u.is_zero());
        assert_eq!(ct.v, gr.scaled_bits(z.bits(), p.q / 2).unwrap());
        assert_eq!(pke.decrypt(&sk, &ct).unwrap(), z);
    }

    #[test]
    fn key_relation_and_noise_identity() {
        let p = build_params(64, Profile::Default).unwrap();
        let pke = Pke::new(&p).unwrap();
        let gr = pke.ring();
        let mut rng = seeded_rng(12);
        for _ in 0..20 {
            let (pk, sk) = pke.keygen(&mut rng).unwrap();
            assert_eq!(gr.sub(&pk.b, &gr.mul(&sk.s, &pk.a).unwrap()).unwrap(), sk.e);
            let z = Plaintext::random(64, &mut rng);
            let (ct, rand) = pke.encrypt_instrumented(&pk, &z, &mut rng).unwrap();
            let lhs = gr
                .sub(
                    &pke.decryption_residue(&sk, &ct).unwrap(),
                    &gr.scaled_bits(z.bits(), p.q / 2).unwrap(),
                )
                .unwrap();
            assert_eq!(lhs, pke.decryption_noise(&sk, &rand).unwrap());
            assert_eq!(pke.decrypt(&sk, &ct).unwrap(), z);
        }
    }

    #[test]
    fn wrong_length_message_rejected() {
        let p = build_params(8, Profile::Default).unwrap();
        let pke = Pke::new(&p).unwrap();
        let (pk, _) = pke.keygen(&mut seeded_rng(1)).unwrap();
        assert!(matches!(
            pke.encrypt(&pk, &Plaintext::zeros(7), &mut seeded_rng(2)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn wilson_bounds() {
        let (lo, hi) = wilson_interval(0, 10_000);
        assert!(lo.abs() < 1e-15);
        assert!((hi - 3.83998e-4).abs() < 1e-8, "{hi}");
        let (lo, hi) = wilson_interval(50, 100);
        assert!(lo < 0.5 && hi > 0.5);
        assert!((lo + hi - 1.0).abs() < 1e-12);
    }

    #[test]
    fn failure_estimate_needs_trials() {
        let p = build_params(8, Profile::Default).unwrap();
        let pke = Pke::new(&p).unwrap();
        assert!(pke.estimate_failure_rate(99, &mut seeded_rng(0)).is_err());
    }
}
