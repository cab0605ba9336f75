//! Elements and arithmetic of `R_q = F_q[D_2n] / (r^{n/2} + 1)`.
//!
//! An element is stored as `f(r) + s*g(r)` with `f, g` of length `m = n/2`.
//! Multiplication separates the rotation and reflection parts:
//!
//! ```text
//! (f1 + s f2)(f3 + s f4) = (f1 f3 + f2^σ f4) + s (f2 f3 + f1^σ f4)
//! ```
//!
//! where `σ` is conjugation by `s`, i.e. `f(x) -> f(x^{-1})`.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::modarith::{add_mod, from_signed, mul_mod, sub_mod};
use crate::negacyclic::{MulMode, NegacyclicRing, Poly};
use crate::params::ParamSet;

/// Largest rank accepted by the Cayley-table and dense-matrix oracles.
pub const ORACLE_MAX_N: usize = 64;

/// Bound on integer coefficients for the no-wrap product.
pub const INTEGER_COEFF_LIMIT: i64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingElement {
    f: Poly,
    g: Poly,
}

impl RingElement {
    pub fn new(f: Poly, g: Poly) -> Result<RingElement> {
        if f.len() != g.len() || f.q() != g.q() {
            return Err(Error::DimensionMismatch("rotation and reflection parts differ".into()));
        }
        Ok(RingElement { f, g })
    }

    /// Builds an element from its length-`n` coefficient embedding `(a_0.., b_0..)`.
    pub fn from_embedding(coeffs: &[u32], q: u32) -> Result<RingElement> {
        if !coeffs.len().is_multiple_of(2) {
            return Err(Error::DimensionMismatch(format!(
                "odd embedding length {}",
                coeffs.len()
            )));
        }
        let m = coeffs.len() / 2;
        Ok(RingElement {
            f: Poly::new(coeffs[..m].to_vec(), q)?,
            g: Poly::new(coeffs[m..].to_vec(), q)?,
        })
    }

    pub fn from_signed(coeffs: &[i64], q: u32) -> Result<RingElement> {
        if !coeffs.len().is_multiple_of(2) {
            return Err(Error::DimensionMismatch(format!(
                "odd embedding length {}",
                coeffs.len()
            )));
        }
        let m = coeffs.len() / 2;
        Ok(RingElement {
            f: Poly::from_signed(&coeffs[..m], q),
            g: Poly::from_signed(&coeffs[m..], q),
        })
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn g(&self) -> &Poly {
        &self.g
    }

    pub fn into_parts(self) -> (Poly, Poly) {
        (self.f, self.g)
    }

    pub fn n(&self) -> usize {
        2 * self.f.len()
    }

    pub fn m(&self) -> usize {
        self.f.len()
    }

    pub fn q(&self) -> u32 {
        self.f.q()
    }

    pub fn is_zero(&self) -> bool {
        self.f.is_zero() && self.g.is_zero()
    }

    pub fn embedding(&self) -> Vec<u32> {
        self.f.coeffs().iter().chain(self.g.coeffs()).copied().collect()
    }

    /// Coefficient embedding with every entry lifted into `[-q/2, q/2)`.
    pub fn centered_embedding(&self) -> Vec<i64> {
        let mut v = self.f.centered();
        v.extend(self.g.centered());
        v
    }

    pub fn norm(&self, kind: NormKind) -> f64 {
        let v = self.centered_embedding();
        match kind {
            NormKind::L2 => (v.iter().map(|&c| (c as f64) * (c as f64)).sum::<f64>()).sqrt(),
            NormKind::Linf => v.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0) as f64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    L2,
    Linf,
}

/// Arithmetic context for `R_q` at a fixed `(n, q)`.
#[derive(Debug, Clone)]
pub struct GroupRing {
    n: usize,
    ring: NegacyclicRing,
    mode: MulMode,
}

impl GroupRing {
    pub fn new(n: usize, q: u32) -> Result<GroupRing> {
        if n < 4 || !n.is_power_of_two() {
            return Err(Error::InvalidRank(n));
        }
        let ring = NegacyclicRing::new(n / 2, q)?;
        let mode = ring.preferred_mode();
        Ok(GroupRing { n, ring, mode })
    }

    pub fn from_params(p: &ParamSet) -> Result<GroupRing> {
        let gr = GroupRing::new(p.n, p.q)?;
        Ok(if p.ntt_enabled {
            gr
        } else {
            gr.with_mode(MulMode::Schoolbook)
        })
    }

    /// Selects the multiplication path used by [`GroupRing::mul`].
    pub fn with_mode(mut self, mode: MulMode) -> GroupRing {
        self.mode = mode;
        self
    }

    pub fn mode(&self) -> MulMode {
        self.mode
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.n / 2
    }

    pub fn q(&self) -> u32 {
        self.ring.q()
    }

    pub fn coefficient_ring(&self) -> &NegacyclicRing {
        &self.ring
    }

    fn check(&self, x: &RingElement) -> Result<()> {
        if x.m() != self.m() || x.q() != self.q() {
            return Err(Error::DimensionMismatch(format!(
                "ring (n={}, q={}), operand (n={}, q={})",
                self.n,
                self.q(),
                x.n(),
                x.q()
            )));
        }
        Ok(())
    }

    pub fn element(&self, f: Poly, g: Poly) -> Result<RingElement> {
        let x = RingElement::new(f, g)?;
        self.check(&x)?;
        Ok(x)
    }

    pub fn from_embedding(&self, coeffs: &[u32]) -> Result<RingElement> {
        if coeffs.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "expected {} coefficients, got {}",
                self.n,
                coeffs.len()
            )));
        }
        RingElement::from_embedding(coeffs, self.q())
    }

    pub fn from_signed(&self, coeffs: &[i64]) -> Result<RingElement> {
        if coeffs.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "expected {} coefficients, got {}",
                self.n,
                coeffs.len()
            )));
        }
        RingElement::from_signed(coeffs, self.q())
    }

    pub fn zero(&self) -> RingElement {
        RingElement {
            f: self.ring.zero(),
            g: self.ring.zero(),
        }
    }

    pub fn one(&self) -> RingElement {
        self.constant(1)
    }

    pub fn constant(&self, c: i64) -> RingElement {
        let mut f = vec![0i64; self.m()];
        f[0] = c;
        RingElement {
            f: Poly::from_signed(&f, self.q()),
            g: self.ring.zero(),
        }
    }

    /// The rotation generator `r`.
    pub fn r(&self) -> RingElement {
        self.basis(1)
    }

    /// The reflection generator `s`.
    pub fn s(&self) -> RingElement {
        self.basis(self.m())
    }

    /// The `j`-th monomial of the basis `{1, r, .., r^{m-1}, s, sr, .., sr^{m-1}}`.
    pub fn basis(&self, j: usize) -> RingElement {
        let mut e = vec![0u32; self.n];
        e[j] = 1;
        RingElement::from_embedding(&e, self.q()).expect("unit vector is in range")
    }

    pub fn add(&self, x: &RingElement, y: &RingElement) -> Result<RingElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(RingElement {
            f: x.f.add(&y.f)?,
            g: x.g.add(&y.g)?,
        })
    }

    pub fn sub(&self, x: &RingElement, y: &RingElement) -> Result<RingElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(RingElement {
            f: x.f.sub(&y.f)?,
            g: x.g.sub(&y.g)?,
        })
    }

    pub fn neg(&self, x: &RingElement) -> RingElement {
        RingElement {
            f: x.f.neg(),
            g: x.g.neg(),
        }
    }

    pub fn scalar_mul(&self, c: i64, x: &RingElement) -> RingElement {
        let c = from_signed(c, self.q());
        RingElement {
            f: x.f.scalar_mul(c),
            g: x.g.scalar_mul(c),
        }
    }

    /// `s x s = f^σ + s g^σ`.
    pub fn involution_s(&self, x: &RingElement) -> RingElement {
        RingElement {
            f: x.f.involution(),
            g: x.g.involution(),
        }
    }

    pub fn mul(&self, x: &RingElement, y: &RingElement) -> Result<RingElement> {
        self.mul_with(x, y, self.mode)
    }

    /// Product through four coefficient-ring multiplications.
    pub fn mul_with(&self, x: &RingElement, y: &RingElement, mode: MulMode) -> Result<RingElement> {
        self.check(x)?;
        self.check(y)?;
        let (f1, f2) = (&x.f, &x.g);
        let (f3, f4) = (&y.f, &y.g);
        let f1s = f1.involution();
        let f2s = f2.involution();
        match mode {
            MulMode::Schoolbook => {
                let r = &self.ring;
                let f = r.mul(f1, f3, mode)?.add(&r.mul(&f2s, f4, mode)?)?;
                let g = r.mul(f2, f3, mode)?.add(&r.mul(&f1s, f4, mode)?)?;
                Ok(RingElement { f, g })
            }
            MulMode::Ntt => {
                let t = self.ring.ntt_tables().ok_or(Error::NttUnavailable {
                    q: self.q(),
                    two_m: self.n,
                })?;
                let q = self.q();
                let fwd = |p: &Poly| {
                    let mut v = p.coeffs().to_vec();
                    t.forward_in_place(&mut v);
                    v
                };
                let (h1, h2, h1s, h2s, h3, h4) = (fwd(f1), fwd(f2), fwd(&f1s), fwd(&f2s), fwd(f3), fwd(f4));
                let mut f = vec![0u32; self.m()];
                let mut g = vec![0u32; self.m()];
                for k in 0..self.m() {
                    f[k] = add_mod(mul_mod(h1[k], h3[k], q), mul_mod(h2s[k], h4[k], q), q);
                    g[k] = add_mod(mul_mod(h2[k], h3[k], q), mul_mod(h1s[k], h4[k], q), q);
                }
                t.inverse_in_place(&mut f);
                t.inverse_in_place(&mut g);
                Ok(RingElement {
                    f: Poly::new(f, q)?,
                    g: Poly::new(g, q)?,
                })
            }
        }
    }

    /// Product through the full Cayley table of `D_2n`, followed by the fold
    /// `r^m = -1`. Independent of the split formula; used as ground truth.
    pub fn mul_oracle(&self, x: &RingElement, y: &RingElement) -> Result<RingElement> {
        self.check(x)?;
        self.check(y)?;
        cayley_product(self.n, self.q(), &x.embedding(), &y.embedding())
            .and_then(|v| RingElement::from_embedding(&v, self.q()))
    }

    /// Two-sided inverse via the central norm `N = f f^σ - g g^σ`.
    pub fn inverse(&self, x: &RingElement) -> Result<RingElement> {
        self.check(x)?;
        let norm = self.central_norm(x)?;
        let norm_inv = self.ring.inverse(&norm)?;
        let mode = self.ring.preferred_mode();
        let f = self.ring.mul(&x.f.involution(), &norm_inv, mode)?;
        let g = self.ring.mul(&x.g, &norm_inv, mode)?.neg();
        Ok(RingElement { f, g })
    }

    /// `x * (f^σ - s g) = N`, a central element fixed by `σ`.
    pub fn central_norm(&self, x: &RingElement) -> Result<Poly> {
        self.check(x)?;
        let mode = self.ring.preferred_mode();
        let a = self.ring.mul(&x.f, &x.f.involution(), mode)?;
        let b = self.ring.mul(&x.g, &x.g.involution(), mode)?;
        a.sub(&b)
    }

    /// Turns two regular samples `b_i = a_i s + e_i` into one with the first
    /// error as secret: `(a2 a1^{-1}, a2 a1^{-1} b1 - b2)`.
    pub fn normal_form_transform(
        &self,
        first: (&RingElement, &RingElement),
        second: (&RingElement, &RingElement),
    ) -> Result<(RingElement, RingElement)> {
        let (a1, b1) = first;
        let (a2, b2) = second;
        let a1_inv = self.inverse(a1)?;
        let a_new = self.mul(a2, &a1_inv)?;
        let b_new = self.sub(&self.mul(&a_new, b1)?, b2)?;
        Ok((a_new, b_new))
    }

    /// Encodes `n` bits as a 0/1 coefficient vector scaled by `c`.
    pub fn scaled_bits(&self, bits: &[bool], c: u32) -> Result<RingElement> {
        if bits.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "expected {} bits, got {}",
                self.n,
                bits.len()
            )));
        }
        let v: Vec<u32> = bits.iter().map(|&b| if b { c % self.q() } else { 0 }).collect();
        RingElement::from_embedding(&v, self.q())
    }
}

/// Full group-ring convolution over `F_q[D_2n]` using an explicit `2n x 2n`
/// Cayley table, then reduction by `r^m = -1`. Inputs and output are length-`n`
/// coefficient embeddings of the quotient.
pub fn cayley_product(n: usize, q: u32, x: &[u32], y: &[u32]) -> Result<Vec<u32>> {
    if n > ORACLE_MAX_N {
        return Err(Error::OracleSizeExceeded { n, limit: ORACLE_MAX_N });
    }
    let m = n / 2;
    let table = DihedralGroup::new(n).cayley_table();
    // lift: a_i -> r^i, b_i -> s r^i
    let lift = |v: &[u32]| {
        let mut full = vec![0u32; 2 * n];
        for i in 0..m {
            full[DihedralGroup::index(0, i, n)] = v[i];
            full[DihedralGroup::index(1, i, n)] = v[m + i];
        }
        full
    };
    let (xf, yf) = (lift(x), lift(y));
    let mut prod = vec![0u32; 2 * n];
    for (i, &a) in xf.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in yf.iter().enumerate() {
            let l = table[i * 2 * n + j];
            prod[l] = add_mod(prod[l], mul_mod(a, b, q), q);
        }
    }
    let mut out = vec![0u32; n];
    for refl in 0..2 {
        for i in 0..n {
            let c = prod[DihedralGroup::index(refl, i, n)];
            let slot = refl * m + i % m;
            out[slot] = if i < m {
                add_mod(out[slot], c, q)
            } else {
                sub_mod(out[slot], c, q)
            };
        }
    }
    Ok(out)
}

/// `D_2n = { s^a r^i }` with `r^n = s^2 = 1`, `s r s = r^{-1}`.
#[derive(Debug, Clone, Copy)]
pub struct DihedralGroup {
    n: usize,
}

impl DihedralGroup {
    pub fn new(n: usize) -> DihedralGroup {
        DihedralGroup { n }
    }

    pub fn order(&self) -> usize {
        2 * self.n
    }

    fn index(refl: usize, rot: usize, n: usize) -> usize {
        refl * n + rot
    }

    /// `(s^a r^i)(s^b r^j) = s^{a+b} r^{(-1)^b i + j}`.
    pub fn compose(&self, (a, i): (usize, usize), (b, j): (usize, usize)) -> (usize, usize) {
        let n = self.n;
        let i = if b == 1 { (n - i % n) % n } else { i % n };
        ((a + b) % 2, (i + j) % n)
    }

    /// Row-major table of products, elements indexed as `a*n + i`.
    pub fn cayley_table(&self) -> Vec<usize> {
        let n = self.n;
        let mut t = Vec::with_capacity(4 * n * n);
        for x in 0..2 * n {
            for y in 0..2 * n {
                let (a, i) = self.compose((x / n, x % n), (y / n, y % n));
                t.push(Self::index(a, i, n));
            }
        }
        t
    }
}

/// An element of the integer ring `R` (no modular reduction).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntElement {
    pub f: Vec<i64>,
    pub g: Vec<i64>,
}

impl IntElement {
    pub fn new(f: Vec<i64>, g: Vec<i64>) -> Result<IntElement> {
        if f.len() != g.len() {
            return Err(Error::DimensionMismatch("rotation and reflection parts differ".into()));
        }
        Ok(IntElement { f, g })
    }

    pub fn from_embedding(v: &[i64]) -> Result<IntElement> {
        if !v.len().is_multiple_of(2) {
            return Err(Error::DimensionMismatch(format!("odd embedding length {}", v.len())));
        }
        let m = v.len() / 2;
        IntElement::new(v[..m].to_vec(), v[m..].to_vec())
    }

    pub fn embedding(&self) -> Vec<i64> {
        self.f.iter().chain(&self.g).copied().collect()
    }

    pub fn l2_norm(&self) -> f64 {
        self.f
            .iter()
            .chain(&self.g)
            .map(|&c| (c as f64) * (c as f64))
            .sum::<f64>()
            .sqrt()
    }

    /// Exact product over `Z`; inputs must stay below `2^24` in magnitude.
    pub fn mul(&self, other: &IntElement) -> Result<IntElement> {
        if self.f.len() != other.f.len() {
            return Err(Error::DimensionMismatch("integer operands differ in rank".into()));
        }
        let within = |v: &[i64]| v.iter().all(|c| c.abs() < INTEGER_COEFF_LIMIT);
        if !(within(&self.f) && within(&self.g) && within(&other.f) && within(&other.g)) {
            return Err(Error::IntegerOverflowRisk);
        }
        let (f, g) = split_product(&self.f, &self.g, &other.f, &other.g);
        Ok(IntElement { f, g })
    }
}

/// `f(x) -> f(x^{-1})` on `T[x]/(x^m + 1)` for any coefficient type.
pub fn involution_generic<T: Clone + Neg<Output = T>>(f: &[T]) -> Vec<T> {
    let m = f.len();
    (0..m)
        .map(|i| if i == 0 { f[0].clone() } else { -f[m - i].clone() })
        .collect()
}

fn negacyclic_generic<T>(a: &[T], b: &[T]) -> Vec<T>
where
    T: Clone + Zero + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    let m = a.len();
    let mut out = vec![T::zero(); m];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let t = x.clone() * y.clone();
            let k = i + j;
            if k < m {
                out[k] = out[k].clone() + t;
            } else {
                out[k - m] = out[k - m].clone() - t;
            }
        }
    }
    out
}

/// The split product formula over an arbitrary commutative coefficient type
/// (exact integers, big rationals).
pub fn split_product<T>(f1: &[T], f2: &[T], f3: &[T], f4: &[T]) -> (Vec<T>, Vec<T>)
where
    T: Clone + Zero + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Neg<Output = T>,
{
    let add = |a: Vec<T>, b: Vec<T>| a.into_iter().zip(b).map(|(x, y)| x + y).collect::<Vec<T>>();
    let f = add(
        negacyclic_generic(f1, f3),
        negacyclic_generic(&involution_generic(f2), f4),
    );
    let g = add(
        negacyclic_generic(f2, f3),
        negacyclic_generic(&involution_generic(f1), f4),
    );
    (f, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gr(n: usize, q: u32) -> GroupRing {
        GroupRing::new(n, q).unwrap()
    }

    fn el(g: &GroupRing, v: &[i64]) -> RingElement {
        g.from_signed(v).unwrap()
    }

    #[test]
    fn group_relations() {
        let d = DihedralGroup::new(8);
        let s = (1, 0);
        let r = (0, 1);
        assert_eq!(d.compose(s, s), (0, 0));
        // s r s = r^{-1}
        assert_eq!(d.compose(d.compose(s, r), s), (0, 7));
        let mut x = (0, 0);
        for _ in 0..8 {
            x = d.compose(x, r);
        }
        assert_eq!(x, (0, 0));
        // every row of the Cayley table is a permutation
        let t = d.cayley_table();
        for row in t.chunks(16) {
            let mut seen = [false; 16];
            row.iter().for_each(|&e| seen[e] = true);
            assert!(seen.iter().all(|&b| b));
        }
    }

    #[test]
    fn addition_examples() {
        let g = gr(4, 17);
        let sum = g.add(&g.r(), &g.s()).unwrap();
        assert_eq!(sum.f().coeffs(), &[0, 1]);
        assert_eq!(sum.g().coeffs(), &[1, 0]);
        let x = el(&g, &[3, -2, 5, 7]);
        assert_eq!(g.add(&x, &g.zero()).unwrap(), x);
        assert!(g.add(&x, &g.neg(&x)).unwrap().is_zero());
        let other = gr(8, 17);
        assert!(matches!(g.add(&x, &other.one()), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn rotation_times_reflection() {
        let g = gr(4, 17);
        for mode in [MulMode::Schoolbook, MulMode::Ntt] {
            let rs = g.mul_with(&g.r(), &g.s(), mode).unwrap();
            assert_eq!(rs.f().coeffs(), &[0, 0]);
            assert_eq!(rs.g().coeffs(), &[0, 16]);
            let sr = g.mul_with(&g.s(), &g.r(), mode).unwrap();
            assert_eq!(sr.f().coeffs(), &[0, 0]);
            assert_eq!(sr.g().coeffs(), &[0, 1]);
            assert_ne!(rs, sr);
        }
        assert_eq!(g.mul_oracle(&g.r(), &g.s()).unwrap().g().coeffs(), &[0, 16]);
        assert_eq!(g.mul_oracle(&g.s(), &g.r()).unwrap().g().coeffs(), &[0, 1]);
    }

    #[test]
    fn identity_and_reflection_square() {
        let g = gr(8, 73);
        let x = el(&g, &[1, -3, 4, 0, 2, 9, -5, 6]);
        assert_eq!(g.mul(&x, &g.one()).unwrap(), x);
        assert_eq!(g.mul(&g.one(), &x).unwrap(), x);
        assert_eq!(g.mul_oracle(&g.one(), &x).unwrap(), x);
        assert_eq!(g.mul_oracle(&g.s(), &g.s()).unwrap(), g.one());
    }

    #[test]
    fn oracle_matches_on_all_monomials() {
        let g = gr(4, 17);
        for i in 0..4 {
            for j in 0..4 {
                let (x, y) = (g.basis(i), g.basis(j));
                let want = g.mul_oracle(&x, &y).unwrap();
                assert_eq!(g.mul_with(&x, &y, MulMode::Schoolbook).unwrap(), want);
                assert_eq!(g.mul_with(&x, &y, MulMode::Ntt).unwrap(), want);
                // also the negated monomials
                let nx = g.neg(&x);
                assert_eq!(g.mul(&nx, &y).unwrap(), g.mul_oracle(&nx, &y).unwrap());
            }
        }
    }

    #[test]
    fn non_commutative_for_every_rank() {
        for n in [4usize, 8, 16, 32, 64, 128] {
            let g = gr(n, crate::build_params(n, crate::Profile::Default).unwrap().q);
            assert_ne!(g.mul(&g.r(), &g.s()).unwrap(), g.mul(&g.s(), &g.r()).unwrap());
        }
    }

    #[test]
    fn oracle_size_cap() {
        let g = gr(128, 17921);
        assert_eq!(
            g.mul_oracle(&g.one(), &g.one()),
            Err(Error::OracleSizeExceeded {
                n: 128,
                limit: ORACLE_MAX_N
            })
        );
    }

    #[test]
    fn involution_examples() {
        let g = gr(4, 17);
        assert_eq!(g.involution_s(&g.one()), g.one());
        assert_eq!(g.involution_s(&g.r()), g.neg(&g.r()));
        // s r s computed with the Cayley table
        let srs = g.mul_oracle(&g.mul_oracle(&g.s(), &g.r()).unwrap(), &g.s()).unwrap();
        assert_eq!(g.involution_s(&g.r()), srs);
        let x = el(&g, &[1, 2, 3, 4]);
        assert_eq!(g.involution_s(&g.involution_s(&x)), x);
    }

    #[test]
    fn inverse_examples() {
        let g = gr(4, 17);
        assert_eq!(g.inverse(&g.one()).unwrap(), g.one());
        assert_eq!(g.inverse(&g.s()).unwrap(), g.s());
        let one_plus_s = g.add(&g.one(), &g.s()).unwrap();
        assert!(g.central_norm(&one_plus_s).unwrap().is_zero());
        assert_eq!(g.inverse(&one_plus_s), Err(Error::NotInvertible));
    }

    #[test]
    fn inverse_layout_matches_product() {
        let g = gr(8, 73);
        let x = el(&g, &[2, 1, 0, -1, 1, 0, 1, 1]);
        let n = g.central_norm(&x).unwrap();
        // x * (f^σ - s g) = N, with N central
        let conj = g.element(x.f().involution(), x.g().neg()).unwrap();
        let prod = g.mul(&x, &conj).unwrap();
        assert_eq!(prod.f(), &n);
        assert!(prod.g().is_zero());
        assert_eq!(n.involution(), n);
        let inv = g.inverse(&x).unwrap();
        assert_eq!(g.mul(&x, &inv).unwrap(), g.one());
        assert_eq!(g.mul(&inv, &x).unwrap(), g.one());
    }

    #[test]
    fn norms() {
        let g = gr(4, 17);
        assert_eq!(g.zero().norm(NormKind::L2), 0.0);
        let x = g.add(&g.r(), &g.s()).unwrap();
        assert!((x.norm(NormKind::L2) - 2f64.sqrt()).abs() < 1e-12);
        let y = el(&g, &[-8, 3, 0, 1]);
        assert_eq!(y.norm(NormKind::Linf), 8.0);
        assert!(y.norm(NormKind::Linf) <= y.norm(NormKind::L2));
    }

    #[test]
    fn normal_form_examples() {
        let g = gr(4, 17);
        let a1 = el(&g, &[3, 1, 0, 2]);
        let a2 = el(&g, &[5, -4, 7, 1]);
        let s = el(&g, &[1, -1, 0, 1]);
        let b1 = g.mul(&a1, &s).unwrap();
        let b2 = g.mul(&a2, &s).unwrap();
        let (_, b) = g.normal_form_transform((&a1, &b1), (&a2, &b2)).unwrap();
        assert!(b.is_zero());

        let b1 = el(&g, &[1, 2, 3, 4]);
        let (a, b) = g.normal_form_transform((&g.one(), &b1), (&a2, &b2)).unwrap();
        assert_eq!(a, a2);
        assert_eq!(b, g.sub(&g.mul(&a2, &b1).unwrap(), &b2).unwrap());

        let not_inv = g.add(&g.one(), &g.s()).unwrap();
        assert_eq!(
            g.normal_form_transform((&not_inv, &b1), (&a2, &b2)),
            Err(Error::NotInvertible)
        );
    }

    #[test]
    fn integer_product_bounds() {
        let big = IntElement::new(vec![INTEGER_COEFF_LIMIT, 0], vec![0, 0]).unwrap();
        let one = IntElement::new(vec![1, 0], vec![0, 0]).unwrap();
        assert_eq!(big.mul(&one), Err(Error::IntegerOverflowRisk));
        let x = IntElement::new(vec![3, -2], vec![1, 4]).unwrap();
        assert_eq!(x.mul(&one).unwrap(), x);
    }

    fn arb_elem(n: usize, q: u32) -> impl Strategy<Value = RingElement> {
        proptest::collection::vec(0..q, n).prop_map(move |v| RingElement::from_embedding(&v, q).unwrap())
    }

    proptest! {
        #[test]
        fn matches_oracle_n16(x in arb_elem(16, 97), y in arb_elem(16, 97)) {
            let g = gr(16, 97);
            let want = g.mul_oracle(&x, &y).unwrap();
            prop_assert_eq!(g.mul_with(&x, &y, MulMode::Schoolbook).unwrap(), want.clone());
            prop_assert_eq!(g.mul_with(&x, &y, MulMode::Ntt).unwrap(), want);
        }

        #[test]
        fn ring_axioms(x in arb_elem(8, 73), y in arb_elem(8, 73), z in arb_elem(8, 73)) {
            let g = gr(8, 73);
            let xy_z = g.mul(&g.mul(&x, &y).unwrap(), &z).unwrap();
            let x_yz = g.mul(&x, &g.mul(&y, &z).unwrap()).unwrap();
            prop_assert_eq!(xy_z, x_yz);
            let left = g.mul(&x, &g.add(&y, &z).unwrap()).unwrap();
            let right = g.add(&g.mul(&x, &y).unwrap(), &g.mul(&x, &z).unwrap()).unwrap();
            prop_assert_eq!(left, right);
            let left = g.mul(&g.add(&x, &y).unwrap(), &z).unwrap();
            let right = g.add(&g.mul(&x, &z).unwrap(), &g.mul(&y, &z).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn conjugation_by_s_is_automorphism(x in arb_elem(8, 73), y in arb_elem(8, 73)) {
            // conjugation by s is an automorphism: s(xy)s = (sxs)(sys)
            let g = gr(8, 73);
            let lhs = g.involution_s(&g.mul(&x, &y).unwrap());
            let rhs = g.mul(&g.involution_s(&x), &g.involution_s(&y)).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn inverse_is_two_sided(x in arb_elem(16, 257)) {
            let g = gr(16, 257);
            if let Ok(inv) = g.inverse(&x) {
                prop_assert_eq!(g.mul(&x, &inv).unwrap(), g.one());
                prop_assert_eq!(g.mul(&inv, &x).unwrap(), g.one());
            } else {
                prop_assert!(g.central_norm(&x).is_ok());
            }
        }

        #[test]
        fn integer_product_reduces_to_modular(
            a in proptest::collection::vec(-50i64..=50, 16),
            b in proptest::collection::vec(-50i64..=50, 16),
        ) {
            let g = gr(16, 257);
            let x = IntElement::from_embedding(&a).unwrap();
            let y = IntElement::from_embedding(&b).unwrap();
            let over_z = g.from_signed(&x.mul(&y).unwrap().embedding()).unwrap();
            let over_q = g.mul(&g.from_signed(&a).unwrap(), &g.from_signed(&b).unwrap()).unwrap();
            prop_assert_eq!(over_z, over_q);
        }
    }
}
