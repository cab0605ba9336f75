//! Randomness for the scheme: uniform ring elements, the discretised Gaussian
//! error, and LWE samples.
//!
//! Widths are standard deviations in coefficient units. A continuous Gaussian
//! `Y ~ N(0, sigma^2)` is discretised to `Z/qZ` either by rounding a draw
//! (`Rounded`) or by inverse sampling from a table holding, for each residue
//! `k`, the mass of `Y` on `[k + jq - 1/2, k + jq + 1/2)` summed over `j`
//! (`Integrated`). Both describe the same distribution.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Normal};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::group_ring::{GroupRing, RingElement};
use crate::modarith::from_signed;
use crate::params::ParamSet;

/// ChaCha20 keyed with the 64-bit seed in little-endian order followed by 24
/// zero bytes, stream and nonce zero.
pub fn seeded_rng(seed: u64) -> ChaCha20Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    ChaCha20Rng::from_seed(key)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplingMode {
    Rounded,
    Integrated,
}

/// Mass of `N(0, sigma^2)` on `[a, b)`.
fn interval_mass(a: f64, b: f64, sigma: f64) -> f64 {
    let s = sigma * std::f64::consts::SQRT_2;
    if a >= 0.0 {
        0.5 * (erfc(a / s) - erfc(b / s))
    } else if b <= 0.0 {
        interval_mass(-b, -a, sigma)
    } else {
        1.0 - 0.5 * erfc(b / s) - 0.5 * erfc(-a / s)
    }
}

/// Probability table over centered residues `-w..=w`.
#[derive(Debug, Clone, PartialEq)]
struct DiscreteTable {
    half_width: i64,
    pmf: Vec<f64>,
    cdf: Vec<f64>,
}

impl DiscreteTable {
    fn new(sigma: f64, q: u32) -> DiscreteTable {
        let q = q as i64;
        let tail = (14.0 * sigma).ceil() as i64 + 2;
        let half_width = ((q - 1) / 2).min(tail);
        // windows k + jq that reach into the significant mass
        let reach = (tail + q) / q;
        let mass = |k: i64| -> f64 {
            (-reach..=reach)
                .map(|j| {
                    let c = (k + j * q) as f64;
                    interval_mass(c - 0.5, c + 0.5, sigma)
                })
                .sum()
        };
        let positive: Vec<f64> = (0..=half_width).map(mass).collect();
        let mut pmf = Vec::with_capacity(2 * half_width as usize + 1);
        for k in -half_width..=half_width {
            pmf.push(positive[k.unsigned_abs() as usize]);
        }
        let total: f64 = pmf.iter().sum();
        let mut acc = 0.0;
        let cdf = pmf
            .iter()
            .map(|p| {
                acc += p / total;
                acc
            })
            .collect();
        DiscreteTable { half_width, pmf, cdf }
    }

    fn probability(&self, centered: i64) -> f64 {
        if centered.abs() > self.half_width {
            0.0
        } else {
            self.pmf[(centered + self.half_width) as usize]
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> i64 {
        let u: f64 = rng.random();
        let idx = self.cdf.partition_point(|&c| c <= u).min(self.cdf.len() - 1);
        idx as i64 - self.half_width
    }
}

/// Coefficient-wise discretised Gaussian on `R_q`.
#[derive(Debug, Clone)]
pub struct ErrorDist {
    sigma: f64,
    q: u32,
    m: usize,
    mode: SamplingMode,
    normal: Normal<f64>,
    table: Option<Arc<DiscreteTable>>,
}

impl ErrorDist {
    pub fn new(sigma: f64, q: u32, m: usize, mode: SamplingMode) -> Result<ErrorDist> {
        if !sigma.is_finite() || sigma <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "error width must be positive, got {sigma}"
            )));
        }
        let normal = Normal::new(0.0, sigma).map_err(|e| Error::InvalidParameter(e.to_string()))?;
        let table = match mode {
            SamplingMode::Integrated => Some(Arc::new(DiscreteTable::new(sigma, q))),
            SamplingMode::Rounded => None,
        };
        Ok(ErrorDist {
            sigma,
            q,
            m,
            mode,
            normal,
            table,
        })
    }

    pub fn from_params(p: &ParamSet, mode: SamplingMode) -> Result<ErrorDist> {
        ErrorDist::new(p.sigma, p.q, p.m, mode)
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn mode(&self) -> SamplingMode {
        self.mode
    }

    /// Exact probability of the residue `k` (independent of the mode).
    pub fn probability(&self, k: u32) -> f64 {
        let c = crate::modarith::centered(k % self.q, self.q);
        match &self.table {
            Some(t) => t.probability(c),
            None => DiscreteTable::new(self.sigma, self.q).probability(c),
        }
    }

    /// One coefficient as a centered integer.
    pub fn sample_centered<R: Rng + ?Sized>(&self, rng: &mut R) -> i64 {
        match &self.table {
            Some(t) => t.sample(rng),
            None => self.normal.sample(rng).round() as i64,
        }
    }

    pub fn sample_coeff<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        from_signed(self.sample_centered(rng), self.q)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> RingElement {
        let v: Vec<i64> = (0..2 * self.m).map(|_| self.sample_centered(rng)).collect();
        RingElement::from_signed(&v, self.q).expect("even length")
    }
}

pub fn sample_uniform<R: Rng + ?Sized>(gr: &GroupRing, rng: &mut R) -> RingElement {
    let q = gr.q();
    let v: Vec<u32> = (0..gr.n()).map(|_| rng.random_range(0..q)).collect();
    RingElement::from_embedding(&v, q).expect("residues below q")
}

pub fn sample_error<R: Rng + ?Sized>(dist: &ErrorDist, rng: &mut R) -> RingElement {
    dist.sample(rng)
}

/// Which side of `a` the secret multiplies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecretSide {
    /// `b = s a + e`, the public-key convention.
    Left,
    /// `b = a s + e`, the right-module convention of the search problem.
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LweSample {
    pub a: RingElement,
    pub b: RingElement,
    pub side: SecretSide,
}

/// A sample together with the error that went into it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstrumentedSample {
    pub sample: LweSample,
    pub error: RingElement,
}

pub fn lwe_from_parts(
    gr: &GroupRing,
    a: RingElement,
    s: &RingElement,
    e: &RingElement,
    side: SecretSide,
) -> Result<LweSample> {
    let prod = match side {
        SecretSide::Left => gr.mul(s, &a)?,
        SecretSide::Right => gr.mul(&a, s)?,
    };
    let b = gr.add(&prod, e)?;
    Ok(LweSample { a, b, side })
}

pub fn sample_lwe_instrumented<R: Rng + ?Sized>(
    gr: &GroupRing,
    s: &RingElement,
    dist: &ErrorDist,
    side: SecretSide,
    rng: &mut R,
) -> Result<InstrumentedSample> {
    let a = sample_uniform(gr, rng);
    let e = dist.sample(rng);
    let sample = lwe_from_parts(gr, a, s, &e, side)?;
    Ok(InstrumentedSample { sample, error: e })
}

pub fn sample_lwe<R: Rng + ?Sized>(
    gr: &GroupRing,
    s: &RingElement,
    dist: &ErrorDist,
    side: SecretSide,
    rng: &mut R,
) -> Result<LweSample> {
    Ok(sample_lwe_instrumented(gr, s, dist, side, rng)?.sample)
}

/// Turns two right-module samples into one whose secret is the first error.
pub fn to_normal_form(gr: &GroupRing, first: &LweSample, second: &LweSample) -> Result<LweSample> {
    if first.side != SecretSide::Right || second.side != SecretSide::Right {
        return Err(Error::InvalidParameter(
            "normal form needs samples of the form b = a s + e".into(),
        ));
    }
    let (a, b) = gr.normal_form_transform((&first.a, &first.b), (&second.a, &second.b))?;
    Ok(LweSample {
        a,
        b,
        side: SecretSide::Right,
    })
}
