//! The commutative coefficient ring `S_q = F_q[x]/(x^m + 1)`.
//!
//! Both halves of a dihedral ring element live here. Multiplication is
//! available as a schoolbook negacyclic convolution and, when `q = 1 mod 2m`,
//! through a negacyclic number-theoretic transform.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::modarith::{add_mod, centered, from_signed, inv_mod, mul_mod, neg_mod, pow_mod, sub_mod};

/// A polynomial of length `m` with canonical residues in `[0, q)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<u32>,
    q: u32,
}

impl Poly {
    pub fn new(coeffs: Vec<u32>, q: u32) -> Result<Poly> {
        if let Some(&c) = coeffs.iter().find(|&&c| c >= q) {
            return Err(Error::CoefficientOutOfRange { value: c as u64, q });
        }
        Ok(Poly { coeffs, q })
    }

    pub fn from_signed(coeffs: &[i64], q: u32) -> Poly {
        Poly {
            coeffs: coeffs.iter().map(|&c| from_signed(c, q)).collect(),
            q,
        }
    }

    pub fn zero(m: usize, q: u32) -> Poly {
        Poly { coeffs: vec![0; m], q }
    }

    pub fn one(m: usize, q: u32) -> Poly {
        Poly::monomial(m, q, 0)
    }

    /// `x^i` for `0 <= i < m`.
    pub fn monomial(m: usize, q: u32, i: usize) -> Poly {
        let mut p = Poly::zero(m, q);
        p.coeffs[i] = 1 % q;
        p
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn centered(&self) -> Vec<i64> {
        self.coeffs.iter().map(|&c| centered(c, self.q)).collect()
    }

    fn check_compatible(&self, other: &Poly) -> Result<()> {
        if self.q != other.q || self.len() != other.len() {
            return Err(Error::DimensionMismatch(format!(
                "(m={}, q={}) vs (m={}, q={})",
                self.len(),
                self.q,
                other.len(),
                other.q
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.check_compatible(other)?;
        let q = self.q;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| add_mod(a, b, q))
            .collect();
        Ok(Poly { coeffs, q })
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.check_compatible(other)?;
        let q = self.q;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| sub_mod(a, b, q))
            .collect();
        Ok(Poly { coeffs, q })
    }

    pub fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|&a| neg_mod(a, self.q)).collect(),
            q: self.q,
        }
    }

    pub fn scalar_mul(&self, c: u32) -> Poly {
        let c = c % self.q;
        Poly {
            coeffs: self.coeffs.iter().map(|&a| mul_mod(a, c, self.q)).collect(),
            q: self.q,
        }
    }

    /// The automorphism `f(x) -> f(x^{-1})`; in `S_q`, `x^{-i} = -x^{m-i}`.
    pub fn involution(&self) -> Poly {
        let m = self.len();
        let mut coeffs = vec![0; m];
        if m > 0 {
            coeffs[0] = self.coeffs[0];
        }
        for i in 1..m {
            coeffs[i] = neg_mod(self.coeffs[m - i], self.q);
        }
        Poly { coeffs, q: self.q }
    }

    /// Negacyclic convolution in `O(m^2)`.
    pub fn mul_schoolbook(&self, other: &Poly) -> Result<Poly> {
        self.check_compatible(other)?;
        let m = self.len();
        let q = self.q;
        let q64 = q as u64;
        // positive and wrapped (x^m = -1) contributions, reduced at the end
        let mut pos = vec![0u64; m];
        let mut neg = vec![0u64; m];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let a = a as u64;
            for (j, &b) in other.coeffs.iter().enumerate() {
                let t = a * b as u64 % q64;
                let k = i + j;
                if k < m {
                    pos[k] += t;
                } else {
                    neg[k - m] += t;
                }
            }
        }
        let coeffs = pos
            .iter()
            .zip(&neg)
            .map(|(&p, &n)| sub_mod((p % q64) as u32, (n % q64) as u32, q))
            .collect();
        Ok(Poly { coeffs, q })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MulMode {
    Schoolbook,
    Ntt,
}

impl std::str::FromStr for MulMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "schoolbook" => Ok(MulMode::Schoolbook),
            "ntt" => Ok(MulMode::Ntt),
            other => Err(Error::InvalidParameter(format!(
                "unknown multiplication mode {other:?}"
            ))),
        }
    }
}

fn bit_reverse(x: usize, bits: u32) -> usize {
    if bits == 0 {
        0
    } else {
        x.reverse_bits() >> (usize::BITS - bits)
    }
}

/// Twiddle tables for the negacyclic NTT of length `m` modulo `q`.
///
/// `zetas[k] = root^{brv(k)}` where `root` is a primitive `2m`-th root of unity,
/// so the forward transform evaluates at the odd powers of `root` (the roots of
/// `x^m + 1`) and returns them in bit-reversed order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NttTables {
    q: u32,
    m: usize,
    root: u32,
    zetas: Vec<u32>,
    inv_zetas: Vec<u32>,
    m_inv: u32,
}

impl NttTables {
    pub fn new(m: usize, q: u32) -> Result<NttTables> {
        let two_m = 2 * m;
        if m == 0 || !m.is_power_of_two() || q as u64 % two_m as u64 != 1 {
            return Err(Error::NttUnavailable { q, two_m });
        }
        let exp = (q as u64 - 1) / two_m as u64;
        // smallest generator candidate whose power has order exactly 2m
        let root = (2..q)
            .map(|g| pow_mod(g, exp, q))
            .find(|&w| pow_mod(w, m as u64, q) == q - 1)
            .ok_or(Error::NttUnavailable { q, two_m })?;
        let bits = m.trailing_zeros();
        let zetas: Vec<u32> = (0..m).map(|k| pow_mod(root, bit_reverse(k, bits) as u64, q)).collect();
        let inv_zetas = zetas
            .iter()
            .map(|&z| inv_mod(z, q).expect("root of unity is a unit"))
            .collect();
        let m_inv = inv_mod(m as u32 % q, q).expect("q is odd and prime");
        Ok(NttTables {
            q,
            m,
            root,
            zetas,
            inv_zetas,
            m_inv,
        })
    }

    pub fn root(&self) -> u32 {
        self.root
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn m(&self) -> usize {
        self.m
    }

    fn check(&self, len: usize, q: u32) -> Result<()> {
        if len != self.m || q != self.q {
            return Err(Error::DimensionMismatch(format!(
                "NTT tables for (m={}, q={}), operand (m={len}, q={q})",
                self.m, self.q
            )));
        }
        Ok(())
    }

    /// Forward transform; output is in bit-reversed evaluation order.
    pub fn forward(&self, a: &Poly) -> Result<Vec<u32>> {
        self.check(a.len(), a.q())?;
        let mut v = a.coeffs.clone();
        self.forward_in_place(&mut v);
        Ok(v)
    }

    pub fn inverse(&self, v: &[u32]) -> Result<Poly> {
        self.check(v.len(), self.q)?;
        let mut a = v.to_vec();
        self.inverse_in_place(&mut a);
        Ok(Poly { coeffs: a, q: self.q })
    }

    pub(crate) fn forward_in_place(&self, a: &mut [u32]) {
        let q = self.q;
        let m = self.m;
        let mut k = 1;
        let mut len = m / 2;
        while len > 0 {
            for start in (0..m).step_by(2 * len) {
                let zeta = self.zetas[k];
                k += 1;
                for j in start..start + len {
                    let t = mul_mod(zeta, a[j + len], q);
                    a[j + len] = sub_mod(a[j], t, q);
                    a[j] = add_mod(a[j], t, q);
                }
            }
            len /= 2;
        }
    }

    pub(crate) fn inverse_in_place(&self, a: &mut [u32]) {
        let q = self.q;
        let m = self.m;
        let mut len = 1;
        while len < m {
            let blocks = m / (2 * len);
            for (b, start) in (0..m).step_by(2 * len).enumerate() {
                let zeta_inv = self.inv_zetas[blocks + b];
                for j in start..start + len {
                    let u = a[j];
                    let v = a[j + len];
                    a[j] = add_mod(u, v, q);
                    a[j + len] = mul_mod(sub_mod(u, v, q), zeta_inv, q);
                }
            }
            len *= 2;
        }
        for c in a.iter_mut() {
            *c = mul_mod(*c, self.m_inv, q);
        }
    }
}

/// Context for `S_q` carrying the (optional) NTT tables.
#[derive(Debug, Clone)]
pub struct NegacyclicRing {
    m: usize,
    q: u32,
    ntt: Option<Arc<NttTables>>,
}

impl NegacyclicRing {
    /// Builds the ring, attaching NTT tables whenever `q = 1 mod 2m`.
    pub fn new(m: usize, q: u32) -> Result<NegacyclicRing> {
        if m == 0 || q < 2 {
            return Err(Error::InvalidParameter(format!("m = {m}, q = {q}")));
        }
        let ntt = NttTables::new(m, q).ok().map(Arc::new);
        Ok(NegacyclicRing { m, q, ntt })
    }

    /// Same ring without NTT support, even if `q` would allow it.
    pub fn without_ntt(m: usize, q: u32) -> Result<NegacyclicRing> {
        let mut r = NegacyclicRing::new(m, q)?;
        r.ntt = None;
        Ok(r)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn ntt_tables(&self) -> Option<&NttTables> {
        self.ntt.as_deref()
    }

    pub fn has_ntt(&self) -> bool {
        self.ntt.is_some()
    }

    /// NTT when available, schoolbook otherwise.
    pub fn preferred_mode(&self) -> MulMode {
        if self.has_ntt() {
            MulMode::Ntt
        } else {
            MulMode::Schoolbook
        }
    }

    pub fn zero(&self) -> Poly {
        Poly::zero(self.m, self.q)
    }

    pub fn one(&self) -> Poly {
        Poly::one(self.m, self.q)
    }

    fn check(&self, a: &Poly) -> Result<()> {
        if a.len() != self.m || a.q() != self.q {
            return Err(Error::DimensionMismatch(format!(
                "ring (m={}, q={}), operand (m={}, q={})",
                self.m,
                self.q,
                a.len(),
                a.q()
            )));
        }
        Ok(())
    }

    fn tables(&self) -> Result<&NttTables> {
        self.ntt.as_deref().ok_or(Error::NttUnavailable {
            q: self.q,
            two_m: 2 * self.m,
        })
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        self.check(a)?;
        a.add(b)
    }

    pub fn mul(&self, a: &Poly, b: &Poly, mode: MulMode) -> Result<Poly> {
        self.check(a)?;
        self.check(b)?;
        match mode {
            MulMode::Schoolbook => a.mul_schoolbook(b),
            MulMode::Ntt => {
                let t = self.tables()?;
                let mut x = a.coeffs.clone();
                let mut y = b.coeffs.clone();
                t.forward_in_place(&mut x);
                t.forward_in_place(&mut y);
                for (u, v) in x.iter_mut().zip(&y) {
                    *u = mul_mod(*u, *v, self.q);
                }
                t.inverse_in_place(&mut x);
                Ok(Poly { coeffs: x, q: self.q })
            }
        }
    }

    pub fn forward(&self, a: &Poly) -> Result<Vec<u32>> {
        self.tables()?.forward(a)
    }

    pub fn inverse_transform(&self, v: &[u32]) -> Result<Poly> {
        self.tables()?.inverse(v)
    }

    /// Multiplicative inverse in `S_q`.
    pub fn inverse(&self, a: &Poly) -> Result<Poly> {
        self.check(a)?;
        match self.ntt.as_deref() {
            Some(t) => {
                let mut v = a.coeffs.clone();
                t.forward_in_place(&mut v);
                for c in v.iter_mut() {
                    *c = inv_mod(*c, self.q).ok_or(Error::NotInvertible)?;
                }
                t.inverse_in_place(&mut v);
                Ok(Poly { coeffs: v, q: self.q })
            }
            None => inverse_euclid(a),
        }
    }
}

// Dense polynomials over F_q with trailing zeros trimmed; used only by the
// extended Euclidean inversion.
fn trim(mut v: Vec<u32>) -> Vec<u32> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn divmod(num: &[u32], den: &[u32], q: u32) -> (Vec<u32>, Vec<u32>) {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead_inv = inv_mod(den[dd], q).expect("trimmed divisor has nonzero lead");
    if rem.len() < den.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![0u32; rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = mul_mod(rem[i + dd], lead_inv, q);
        quot[i] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                rem[i + j] = sub_mod(rem[i + j], mul_mod(c, d, q), q);
            }
        }
    }
    rem.truncate(dd);
    (quot, trim(rem))
}

fn poly_mul_dense(a: &[u32], b: &[u32], q: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = add_mod(out[i + j], mul_mod(x, y, q), q);
        }
    }
    trim(out)
}

fn poly_sub_dense(a: &[u32], b: &[u32], q: u32) -> Vec<u32> {
    let len = a.len().max(b.len());
    let out = (0..len)
        .map(|i| sub_mod(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), q))
        .collect();
    trim(out)
}

fn inverse_euclid(a: &Poly) -> Result<Poly> {
    let m = a.len();
    let q = a.q();
    let mut modulus = vec![0u32; m + 1];
    modulus[0] = 1;
    modulus[m] = 1;
    let (mut r0, mut r1) = (modulus, trim(a.coeffs.clone()));
    let (mut t0, mut t1): (Vec<u32>, Vec<u32>) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (quot, rem) = divmod(&r0, &r1, q);
        let t2 = poly_sub_dense(&t0, &poly_mul_dense(&quot, &t1, q), q);
        r0 = std::mem::replace(&mut r1, rem);
        t0 = std::mem::replace(&mut t1, t2);
    }
    // r0 = gcd(a, x^m + 1) up to a unit
    if r0.len() != 1 {
        return Err(Error::NotInvertible);
    }
    let scale = inv_mod(r0[0], q).ok_or(Error::NotInvertible)?;
    let mut coeffs = vec![0u32; m];
    for (i, &c) in t0.iter().enumerate() {
        coeffs[i] = mul_mod(c, scale, q);
    }
    Ok(Poly { coeffs, q })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[u32], q: u32) -> Poly {
        Poly::new(c.to_vec(), q).unwrap()
    }

    /// Plain convolution followed by the fold `x^m = -1`, over i64.
    fn fold_oracle(a: &Poly, b: &Poly) -> Poly {
        let m = a.len();
        let q = a.q() as i64;
        let mut full = vec![0i64; 2 * m];
        for i in 0..m {
            for j in 0..m {
                full[i + j] = (full[i + j] + a.coeffs()[i] as i64 * b.coeffs()[j] as i64) % q;
            }
        }
        let folded: Vec<i64> = (0..m).map(|i| full[i] - full[i + m]).collect();
        Poly::from_signed(&folded, a.q())
    }

    #[test]
    fn addition_examples() {
        assert_eq!(p(&[1, 2], 17).add(&p(&[3, 4], 17)).unwrap(), p(&[4, 6], 17));
        assert_eq!(p(&[16, 0], 17).add(&p(&[1, 0], 17)).unwrap(), p(&[0, 0], 17));
        assert_eq!(p(&[0, 0], 17).add(&p(&[5, 9], 17)).unwrap(), p(&[5, 9], 17));
        assert!(matches!(
            p(&[1, 2], 17).add(&p(&[1, 2, 3, 4], 17)),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            p(&[1, 2], 17).add(&p(&[1, 2], 13)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn out_of_range_rejected() {
        assert_eq!(
            Poly::new(vec![17, 0], 17),
            Err(Error::CoefficientOutOfRange { value: 17, q: 17 })
        );
    }

    #[test]
    fn multiplication_examples() {
        let ring = NegacyclicRing::new(2, 17).unwrap();
        for mode in [MulMode::Schoolbook, MulMode::Ntt] {
            assert_eq!(
                ring.mul(&p(&[1, 1], 17), &p(&[1, 1], 17), mode).unwrap(),
                p(&[0, 2], 17)
            );
            assert_eq!(
                ring.mul(&p(&[0, 1], 17), &p(&[0, 1], 17), mode).unwrap(),
                p(&[16, 0], 17)
            );
            assert_eq!(ring.mul(&p(&[7, 3], 17), &ring.one(), mode).unwrap(), p(&[7, 3], 17));
        }
    }

    #[test]
    fn ntt_needs_friendly_modulus() {
        // 19 = 3 mod 4
        let ring = NegacyclicRing::new(2, 19).unwrap();
        assert!(!ring.has_ntt());
        assert_eq!(
            ring.mul(&p(&[1, 1], 19), &p(&[1, 1], 19), MulMode::Ntt),
            Err(Error::NttUnavailable { q: 19, two_m: 4 })
        );
        assert_eq!(
            ring.mul(&p(&[1, 1], 19), &p(&[1, 1], 19), MulMode::Schoolbook).unwrap(),
            p(&[0, 2], 19)
        );
    }

    #[test]
    fn tables_hold_root_of_unity() {
        for (m, q) in [(2usize, 17u32), (4, 17), (256, 262657), (512, 1051649)] {
            let t = NttTables::new(m, q).unwrap();
            assert_eq!(pow_mod(t.root(), m as u64, q), q - 1);
            assert_eq!(pow_mod(t.root(), 2 * m as u64, q), 1);
        }
    }

    #[test]
    fn involution_examples() {
        assert_eq!(p(&[1, 2, 3, 4], 17).involution(), p(&[1, 13, 14, 15], 17));
        assert_eq!(p(&[5, 0, 0, 0], 17).involution(), p(&[5, 0, 0, 0], 17));
    }

    #[test]
    fn inverse_examples() {
        for ring in [
            NegacyclicRing::new(2, 17).unwrap(),
            NegacyclicRing::without_ntt(2, 17).unwrap(),
        ] {
            assert_eq!(ring.inverse(&ring.one()).unwrap(), ring.one());
            assert_eq!(ring.inverse(&p(&[0, 1], 17)).unwrap(), p(&[0, 16], 17));
            assert_eq!(ring.inverse(&ring.zero()), Err(Error::NotInvertible));
        }
    }

    #[test]
    fn inverse_detects_shared_factor() {
        // x^2 + 1 = (x - 4)(x + 4) mod 17, so x - 4 is a zero divisor
        for ring in [
            NegacyclicRing::new(2, 17).unwrap(),
            NegacyclicRing::without_ntt(2, 17).unwrap(),
        ] {
            assert_eq!(ring.inverse(&p(&[13, 1], 17)), Err(Error::NotInvertible));
        }
    }

    #[test]
    fn constant_transforms_to_constant_vector() {
        let ring = NegacyclicRing::new(8, 17).unwrap();
        let c = Poly::new(vec![5, 0, 0, 0, 0, 0, 0, 0], 17).unwrap();
        assert_eq!(ring.forward(&c).unwrap(), vec![5; 8]);
    }

    #[test]
    fn forward_evaluates_at_odd_root_powers() {
        let ring = NegacyclicRing::new(8, 17).unwrap();
        let t = ring.ntt_tables().unwrap();
        let a = p(&[3, 1, 4, 1, 5, 9, 2, 6], 17);
        let mut evals: Vec<u32> = ring.forward(&a).unwrap();
        let mut direct: Vec<u32> = (0..8)
            .map(|k| {
                let x = pow_mod(t.root(), 2 * k + 1, 17);
                a.coeffs()
                    .iter()
                    .rev()
                    .fold(0, |acc, &c| add_mod(mul_mod(acc, x, 17), c, 17))
            })
            .collect();
        evals.sort_unstable();
        direct.sort_unstable();
        assert_eq!(evals, direct);
    }

    #[test]
    fn exhaustive_small_ring_agrees_with_fold() {
        // every pair in F_5[x]/(x^2+1)
        let ring = NegacyclicRing::new(2, 5).unwrap();
        assert!(ring.has_ntt());
        let all: Vec<Poly> = (0..25).map(|i| p(&[i % 5, i / 5], 5)).collect();
        for a in &all {
            for b in &all {
                let want = fold_oracle(a, b);
                assert_eq!(ring.mul(a, b, MulMode::Schoolbook).unwrap(), want);
                assert_eq!(ring.mul(a, b, MulMode::Ntt).unwrap(), want);
            }
        }
    }

    #[test]
    fn unit_monomial_wraparound() {
        let (m, q) = (8, 17);
        let ring = NegacyclicRing::new(m, q).unwrap();
        for i in 0..m {
            for j in 0..m {
                let prod = ring
                    .mul(&Poly::monomial(m, q, i), &Poly::monomial(m, q, j), MulMode::Ntt)
                    .unwrap();
                let mut want = Poly::monomial(m, q, (i + j) % m);
                if i + j >= m {
                    want = want.neg();
                }
                assert_eq!(prod, want);
            }
        }
    }

    fn arb_poly(m: usize, q: u32) -> impl Strategy<Value = Poly> {
        proptest::collection::vec(0..q, m).prop_map(move |c| Poly::new(c, q).unwrap())
    }

    proptest! {
        #[test]
        fn ntt_matches_schoolbook(a in arb_poly(64, 257), b in arb_poly(64, 257)) {
            let ring = NegacyclicRing::new(64, 257).unwrap();
            prop_assert_eq!(ring.mul(&a, &b, MulMode::Ntt).unwrap(), fold_oracle(&a, &b));
            prop_assert_eq!(ring.mul(&a, &b, MulMode::Schoolbook).unwrap(), fold_oracle(&a, &b));
        }

        #[test]
        fn ntt_round_trip(a in arb_poly(128, 17921)) {
            let ring = NegacyclicRing::new(128, 17921).unwrap();
            let v = ring.forward(&a).unwrap();
            prop_assert_eq!(ring.inverse_transform(&v).unwrap(), a);
        }

        #[test]
        fn involution_is_automorphism(a in arb_poly(16, 97), b in arb_poly(16, 97)) {
            let ring = NegacyclicRing::new(16, 97).unwrap();
            let ab = ring.mul(&a, &b, MulMode::Schoolbook).unwrap();
            let rhs = ring.mul(&a.involution(), &b.involution(), MulMode::Schoolbook).unwrap();
            prop_assert_eq!(ab.involution(), rhs);
            prop_assert_eq!(a.involution().involution(), a);
        }

        #[test]
        fn inverse_both_routes(a in arb_poly(16, 97)) {
            let fast = NegacyclicRing::new(16, 97).unwrap();
            let slow = NegacyclicRing::without_ntt(16, 97).unwrap();
            match (fast.inverse(&a), slow.inverse(&a)) {
                (Ok(x), Ok(y)) => {
                    prop_assert_eq!(&x, &y);
                    prop_assert_eq!(fast.mul(&a, &x, MulMode::Schoolbook).unwrap(), fast.one());
                    prop_assert_eq!(fast.mul(&x, &a, MulMode::Schoolbook).unwrap(), fast.one());
                }
                (Err(e1), Err(e2)) => {
                    prop_assert_eq!(e1, Error::NotInvertible);
                    prop_assert_eq!(e2, Error::NotInvertible);
                }
                (x, y) => prop_assert!(false, "routes disagree: {:?} vs {:?}", x, y),
            }
        }
    }
}
