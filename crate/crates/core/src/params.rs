//! Parameter sets `(n, q, sigma)` for the dihedral ring and their validation.
//!
//! The modulus is always an NTT-friendly prime (`q = 1 mod n`, i.e. `1 mod 2m`)
//! so that `x^m + 1` splits into linear factors over `F_q`.

use std::fmt;

use crate::error::{Error, Result};
use crate::modarith::{gcd, is_prime};

/// Tail multiple used to size the error width: the decryption noise
/// `e*r - s*e1 + e2` has per-coefficient deviation close to `sigma^2 * sqrt(2n)`,
/// and the width is chosen so that `q/4` sits this many deviations out.
pub const NOISE_TAIL_MULTIPLE: f64 = 8.0;

/// Largest modulus accepted; keeps every product of two residues inside a `u64`.
pub const MAX_MODULUS: u64 = 1 << 31;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Profile {
    /// Small moduli for hand-checkable examples.
    Toy,
    /// `q` in `[n^2, 2n^2]`.
    Default,
    /// Anything else: parameters read from a file or built by hand.
    Custom,
}

impl Profile {
    pub fn as_str(&self) -> &'static str {
        match self {
            Profile::Toy => "toy",
            Profile::Default => "default",
            Profile::Custom => "custom",
        }
    }
}

impl std::str::FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "toy" => Ok(Profile::Toy),
            "default" => Ok(Profile::Default),
            "custom" => Ok(Profile::Custom),
            other => Err(Error::InvalidParameter(format!("unknown profile {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParamSet {
    /// Ring rank; the coefficient embedding has dimension `n`.
    pub n: usize,
    /// Polynomial length `n / 2`.
    pub m: usize,
    pub q: u32,
    /// Standard deviation of the error distribution, in coefficient units.
    pub sigma: f64,
    pub ntt_enabled: bool,
    pub profile: Profile,
    pub security_note: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    RankNotPowerOfTwo,
    RankTooSmall,
    LengthMismatch,
    NotPrime,
    ModulusSharesFactorWith2n,
    ModulusTooLarge,
    ModulusOutOfRange,
    NotNttFriendly,
    NonPositiveSigma,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Violation::RankNotPowerOfTwo => "n is not a power of two",
            Violation::RankTooSmall => "n < 4",
            Violation::LengthMismatch => "m != n/2",
            Violation::NotPrime => "q is not prime",
            Violation::ModulusSharesFactorWith2n => "gcd(q, 2n) != 1",
            Violation::ModulusTooLarge => "q >= 2^31",
            Violation::ModulusOutOfRange => "q outside [n^2, 2n^2]",
            Violation::NotNttFriendly => "q != 1 mod 2m",
            Violation::NonPositiveSigma => "sigma <= 0",
        };
        f.write_str(s)
    }
}

fn check_rank(n: usize) -> Result<()> {
    if n < 4 || !n.is_power_of_two() {
        return Err(Error::InvalidRank(n));
    }
    Ok(())
}

fn smallest_prime_in(lo: u64, hi: u64, step: u64) -> Option<u64> {
    // candidates are 1 mod step, starting at the first one >= lo
    let mut c = lo + (step + 1 - lo % step) % step;
    while c <= hi && c < MAX_MODULUS {
        if is_prime(c) {
            return Some(c);
        }
        c += step;
    }
    None
}

/// Error width (standard deviation) for rank `n` and modulus `q`.
///
/// `sigma = sqrt(q / (4 * T * sqrt(2n)))` with `T = NOISE_TAIL_MULTIPLE`.
pub fn error_width(n: usize, q: u32) -> f64 {
    (q as f64 / (4.0 * NOISE_TAIL_MULTIPLE * (2.0 * n as f64).sqrt())).sqrt()
}

/// Converts a Gaussian parameter `alpha` of the density `exp(-pi (x/alpha)^2)` on the
/// torus into a standard deviation in coefficient units.
pub fn alpha_to_sigma(alpha: f64, q: u32) -> f64 {
    alpha * q as f64 / (2.0 * std::f64::consts::PI).sqrt()
}

pub fn sigma_to_alpha(sigma: f64, q: u32) -> f64 {
    sigma * (2.0 * std::f64::consts::PI).sqrt() / q as f64
}

pub fn build_params(n: usize, profile: Profile) -> Result<ParamSet> {
    check_rank(n)?;
    let n64 = n as u64;
    // q = 1 mod 2m is the same as q = 1 mod n
    let (q, profile, note) = match profile {
        Profile::Toy => {
            let q = smallest_prime_in(2 * n64 + 1, MAX_MODULUS, 2 * n64).ok_or(Error::NoSuitablePrime(n))?;
            (q, Profile::Toy, "toy preset: not intended to be secure".to_string())
        }
        Profile::Default | Profile::Custom => match smallest_prime_in(n64 * n64, 2 * n64 * n64, n64) {
            Some(q) => (
                q,
                Profile::Default,
                "implementation-chosen preset; no concrete security estimate".to_string(),
            ),
            None => {
                let q = smallest_prime_in(2 * n64 * n64 + 1, MAX_MODULUS, n64).ok_or(Error::NoSuitablePrime(n))?;
                (
                    q,
                    Profile::Custom,
                    "no NTT-friendly prime in [n^2, 2n^2]; fell back to the next one above".to_string(),
                )
            }
        },
    };
    let q = q as u32;
    Ok(ParamSet {
        n,
        m: n / 2,
        q,
        sigma: error_width(n, q),
        ntt_enabled: true,
        profile,
        security_note: note,
    })
}

impl ParamSet {
    /// Parameters for an arbitrary modulus, e.g. one read from a file header.
    pub fn custom(n: usize, q: u32) -> Result<ParamSet> {
        check_rank(n)?;
        let p = ParamSet {
            n,
            m: n / 2,
            q,
            sigma: error_width(n, q),
            ntt_enabled: q as u64 % n as u64 == 1,
            profile: Profile::Custom,
            security_note: "custom modulus".to_string(),
        };
        let v = validate(&p);
        if !v.is_empty() {
            let msg: Vec<String> = v.iter().map(|v| v.to_string()).collect();
            return Err(Error::InvalidParameter(msg.join(", ")));
        }
        Ok(p)
    }

    pub fn with_sigma(mut self, sigma: f64) -> ParamSet {
        self.sigma = sigma;
        self
    }

    /// The torus-scale Gaussian parameter matching `sigma`.
    pub fn alpha(&self) -> f64 {
        sigma_to_alpha(self.sigma, self.q)
    }

    /// `key=value` lines, one per field.
    pub fn report(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("n={}\n", self.n));
        s.push_str(&format!("m={}\n", self.m));
        s.push_str(&format!("q={}\n", self.q));
        s.push_str(&format!("sigma={}\n", self.sigma));
        s.push_str(&format!("alpha={}\n", self.alpha()));
        s.push_str(&format!("ntt_enabled={}\n", self.ntt_enabled));
        s.push_str(&format!("profile={}\n", self.profile.as_str()));
        s.push_str(&format!("security_note={}\n", self.security_note));
        s
    }
}

/// Lists every invariant that `p` breaks; empty when the set is usable.
pub fn validate(p: &ParamSet) -> Vec<Violation> {
    let mut out = Vec::new();
    if !p.n.is_power_of_two() {
        out.push(Violation::RankNotPowerOfTwo);
    }
    if p.n < 4 {
        out.push(Violation::RankTooSmall);
    }
    if p.m * 2 != p.n {
        out.push(Violation::LengthMismatch);
    }
    let q = p.q as u64;
    if !is_prime(q) {
        out.push(Violation::NotPrime);
    }
    if gcd(q, 2 * p.n as u64) != 1 {
        out.push(Violation::ModulusSharesFactorWith2n);
    }
    if q >= MAX_MODULUS {
        out.push(Violation::ModulusTooLarge);
    }
    let n = p.n as u64;
    if p.profile == Profile::Default && !(n * n..=2 * n * n).contains(&q) {
        out.push(Violation::ModulusOutOfRange);
    }
    if p.ntt_enabled && (p.m == 0 || q % (2 * p.m as u64) != 1) {
        out.push(Violation::NotNttFriendly);
    }
    if p.sigma.is_nan() || p.sigma <= 0.0 {
        out.push(Violation::NonPositiveSigma);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_prime(n: u64) -> bool {
        n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
    }

    /// Linear scan with trial division, independent of `smallest_prime_in`.
    fn scan(lo: u64, hi: u64, modulus: u64) -> Option<u64> {
        (lo..=hi).find(|&c| c % modulus == 1 && naive_prime(c))
    }

    #[test]
    fn toy_rank_four() {
        let p = build_params(4, Profile::Toy).unwrap();
        assert_eq!(p.m, 2);
        assert_eq!(p.q, 17);
        assert!(validate(&p).is_empty());
    }

    #[test]
    fn rank_errors() {
        assert_eq!(build_params(2, Profile::Default), Err(Error::InvalidRank(2)));
        assert_eq!(build_params(12, Profile::Default), Err(Error::InvalidRank(12)));
    }

    #[test]
    fn default_moduli_match_scan() {
        for n in [4usize, 8, 16, 32, 64, 128, 256, 512, 1024] {
            let p = build_params(n, Profile::Default).unwrap();
            let n64 = n as u64;
            let expect = scan(n64 * n64, 2 * n64 * n64, n64).unwrap();
            assert_eq!(p.q as u64, expect, "n = {n}");
            assert!(validate(&p).is_empty(), "n = {n}: {:?}", validate(&p));
        }
    }

    #[test]
    fn frozen_default_moduli() {
        // values from the trial-division scan above
        assert_eq!(build_params(4, Profile::Default).unwrap().q, 17);
        assert_eq!(build_params(8, Profile::Default).unwrap().q, 73);
        assert_eq!(build_params(512, Profile::Default).unwrap().q, 262_657);
        assert_eq!(build_params(1024, Profile::Default).unwrap().q, 1_051_649);
    }

    #[test]
    fn validate_reports_violations() {
        let base = build_params(4, Profile::Toy).unwrap();
        let composite = ParamSet { q: 16, ..base.clone() };
        let v = validate(&composite);
        assert!(v.contains(&Violation::NotPrime));
        assert!(v.contains(&Violation::ModulusSharesFactorWith2n));

        let three = ParamSet {
            q: 3,
            profile: Profile::Default,
            ..base.clone()
        };
        assert_eq!(
            validate(&three),
            vec![Violation::ModulusOutOfRange, Violation::NotNttFriendly]
        );

        let no_sigma = ParamSet { sigma: 0.0, ..base };
        assert_eq!(validate(&no_sigma), vec![Violation::NonPositiveSigma]);
    }

    #[test]
    fn deterministic() {
        assert_eq!(build_params(256, Profile::Default), build_params(256, Profile::Default));
    }

    #[test]
    fn width_keeps_decoding_margin() {
        let p = build_params(512, Profile::Default).unwrap();
        let noise_dev = p.sigma * p.sigma * (2.0 * p.n as f64).sqrt();
        assert!((p.q as f64 / 4.0) / noise_dev >= NOISE_TAIL_MULTIPLE - 1e-9);
        assert!((alpha_to_sigma(p.alpha(), p.q) - p.sigma).abs() < 1e-9);
    }

    #[test]
    fn report_lines() {
        let r = build_params(4, Profile::Toy).unwrap().report();
        assert!(r.lines().all(|l| l.contains('=')));
        assert!(r.contains("q=17\n"));
    }
}
