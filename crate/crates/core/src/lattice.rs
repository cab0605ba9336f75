//! Exact checks on ideal lattices of `R = Z[D_2n]/(r^{n/2}+1)` under the
//! coefficient embedding. Everything here is rational and meant for `n <= 16`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{rat, QMatrix};
use crate::group_ring::{split_product, IntElement, RingElement};
use crate::modarith::from_signed;

pub const LATTICE_MAX_N: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `hR`, spanned by `h * g_j`.
    RightIdeal,
    /// `Rh` (or `R h^{-1}`), spanned by `g_j * h`.
    LeftModule,
}

/// A full-rank lattice in `Q^n` given by basis rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealLattice {
    pub basis: QMatrix,
    pub side: Side,
    pub generator: IntElement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualLattice {
    /// Rows `d_j` with `<b_i, d_j> = δ_ij`.
    pub basis: QMatrix,
}

/// Coordinate maps compared in [`check_dual_permutation_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DualMap {
    /// `(x_0, -x_{m-1}, .., -x_1)` on the rotation block: the embedding of
    /// `f(r) -> f(r^{-1})` in the quotient, where `r^{-i} = -r^{m-i}`.
    QuotientInverse,
    /// `(x_0, x_{m-1}, .., x_1)` on the rotation block, without signs; the
    /// form that is exact in the full group ring where `r^{-i} = r^{n-i}`.
    PlainReversal,
}

type QElem = (Vec<BigRational>, Vec<BigRational>);

fn split(v: &[BigRational]) -> QElem {
    let m = v.len() / 2;
    (v[..m].to_vec(), v[m..].to_vec())
}

fn join((f, g): QElem) -> Vec<BigRational> {
    f.into_iter().chain(g).collect()
}

fn q_product(x: &[BigRational], y: &[BigRational]) -> Vec<BigRational> {
    let (f1, f2) = split(x);
    let (f3, f4) = split(y);
    join(split_product(&f1, &f2, &f3, &f4))
}

fn unit(n: usize, j: usize) -> Vec<BigRational> {
    (0..n)
        .map(|i| {
            if i == j {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        })
        .collect()
}

fn to_rat(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&c| rat(c)).collect()
}

fn check_size(n: usize) -> Result<()> {
    if n > LATTICE_MAX_N {
        return Err(Error::OracleSizeExceeded {
            n,
            limit: LATTICE_MAX_N,
        });
    }
    Ok(())
}

/// Exact inverse of `h` in `R ⊗ Q`.
pub fn rational_inverse(h: &IntElement) -> Result<Vec<BigRational>> {
    let n = 2 * h.f.len();
    let hv = to_rat(&h.embedding());
    // rows h * g_j; x with x^T B = e_0^T satisfies h x = 1
    let rows: Vec<Vec<BigRational>> = (0..n).map(|j| q_product(&hv, &unit(n, j))).collect();
    let inv = QMatrix::from_rows(rows).inverse().map_err(|_| Error::NotInvertible)?;
    Ok(inv.left_apply(&unit(n, 0)))
}

pub fn ideal_basis(h: &IntElement, side: Side) -> Result<IdealLattice> {
    let n = 2 * h.f.len();
    check_size(n)?;
    let hv = to_rat(&h.embedding());
    let rows: Vec<Vec<BigRational>> = (0..n)
        .map(|j| match side {
            Side::RightIdeal => q_product(&hv, &unit(n, j)),
            Side::LeftModule => q_product(&unit(n, j), &hv),
        })
        .collect();
    let basis = QMatrix::from_rows(rows);
    if basis.determinant().is_zero() {
        return Err(Error::NotInvertible);
    }
    Ok(IdealLattice {
        basis,
        side,
        generator: h.clone(),
    })
}

/// `I^{-1} = R h^{-1}`, the left dual of the right ideal `hR`.
pub fn left_inverse_ideal(h: &IntElement) -> Result<IdealLattice> {
    let n = 2 * h.f.len();
    check_size(n)?;
    let inv = rational_inverse(h)?;
    let rows: Vec<Vec<BigRational>> = (0..n).map(|j| q_product(&unit(n, j), &inv)).collect();
    Ok(IdealLattice {
        basis: QMatrix::from_rows(rows),
        side: Side::LeftModule,
        generator: h.clone(),
    })
}

pub fn dual_basis(l: &IdealLattice) -> Result<DualLattice> {
    Ok(DualLattice {
        basis: l.basis.inverse()?.transpose(),
    })
}

impl IdealLattice {
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn determinant(&self) -> BigRational {
        self.basis.determinant()
    }

    /// Integer coordinates of `v` in this basis, if `v` is a lattice point.
    pub fn coordinates(&self, v: &[BigRational]) -> Result<Option<Vec<BigInt>>> {
        let c = self.basis.inverse()?.left_apply(v);
        if c.iter().all(|x| x.is_integer()) {
            Ok(Some(c.into_iter().map(|x| x.to_integer()).collect()))
        } else {
            Ok(None)
        }
    }

    pub fn contains(&self, v: &[BigRational]) -> Result<bool> {
        Ok(self.coordinates(v)?.is_some())
    }

    pub fn contains_lattice(&self, other: &QMatrix) -> Result<bool> {
        let inv = self.basis.inverse()?;
        Ok((0..other.rows()).all(|i| inv.left_apply(other.row(i)).iter().all(|x| x.is_integer())))
    }
}

/// Lattice equality by mutual containment of basis rows.
pub fn same_lattice(a: &QMatrix, b: &QMatrix) -> Result<bool> {
    let inside = |outer: &QMatrix, inner: &QMatrix| -> Result<bool> {
        let inv = outer.inverse()?;
        Ok((0..inner.rows()).all(|i| inv.left_apply(inner.row(i)).iter().all(|x| x.is_integer())))
    };
    Ok(inside(a, b)? && inside(b, a)?)
}

pub fn apply_dual_map(v: &[BigRational], map: DualMap) -> Vec<BigRational> {
    let m = v.len() / 2;
    let mut out = v.to_vec();
    for i in 1..m {
        out[i] = match map {
            DualMap::QuotientInverse => -v[m - i].clone(),
            DualMap::PlainReversal => v[m - i].clone(),
        };
    }
    out
}

/// Whether the coordinate map sends `Λ^{-1}` (embedding of `R h^{-1}`) onto
/// the dual lattice `Λ*` of `hR`.
pub fn check_dual_permutation_with(h: &IntElement, map: DualMap) -> Result<bool> {
    let primal = ideal_basis(h, Side::RightIdeal)?;
    let dual = dual_basis(&primal)?;
    let inverse = left_inverse_ideal(h)?;
    let mapped: Vec<Vec<BigRational>> = inverse
        .basis
        .row_vecs()
        .iter()
        .map(|r| apply_dual_map(r, map))
        .collect();
    same_lattice(&QMatrix::from_rows(mapped), &dual.basis)
}

pub fn check_dual_permutation(h: &IntElement) -> Result<bool> {
    check_dual_permutation_with(h, DualMap::QuotientInverse)
}

/// Image of a lattice point under inclusion into `R` followed by reduction mod `q`.
pub fn mod_q_projection(v: &[i64], lattice: &IdealLattice, q: u32) -> Result<RingElement> {
    if v.len() != lattice.dim() {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} for rank {}",
            v.len(),
            lattice.dim()
        )));
    }
    if !lattice.contains(&to_rat(v))? {
        return Err(Error::NotInLattice);
    }
    let reduced: Vec<u32> = v.iter().map(|&c| from_signed(c, q)).collect();
    RingElement::from_embedding(&reduced, q)
}

/// Integer part helper: the rational embedding of an integer element.
pub fn embed(x: &IntElement) -> Vec<BigRational> {
    to_rat(&x.embedding())
}

/// Exact product in `R ⊗ Q` on embeddings.
pub fn rational_product(x: &[BigRational], y: &[BigRational]) -> Vec<BigRational> {
    q_product(x, y)
}

pub fn is_integral_vector(v: &[BigRational]) -> bool {
    v.iter().all(|x| x.is_integer())
}

/// `|det|` of an integral lattice as a big integer.
pub fn integral_determinant(l: &IdealLattice) -> Option<BigInt> {
    let d = l.determinant();
    d.is_integer().then(|| d.to_integer().abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn int(v: &[i64]) -> IntElement {
        IntElement::from_embedding(v).unwrap()
    }

    fn scalar(n: usize, c: i64) -> IntElement {
        let mut v = vec![0; n];
        v[0] = c;
        int(&v)
    }

    fn random_invertible(n: usize, rng: &mut ChaCha20Rng) -> IntElement {
        loop {
            let v: Vec<i64> = (0..n).map(|_| rng.random_range(-1..=1)).collect();
            let h = int(&v);
            if rational_inverse(&h).is_ok() {
                return h;
            }
        }
    }

    #[test]
    fn trivial_ideals() {
        let n = 8;
        let id = QMatrix::identity(n);
        let one = ideal_basis(&scalar(n, 1), Side::RightIdeal).unwrap();
        assert_eq!(one.basis, id);
        let two = ideal_basis(&scalar(n, 2), Side::RightIdeal).unwrap();
        assert_eq!(two.basis, id.scale(&rat(2)));
        assert_eq!(dual_basis(&one).unwrap().basis, id);
        assert_eq!(
            dual_basis(&two).unwrap().basis,
            id.scale(&BigRational::new(1.into(), 2.into()))
        );
        assert_eq!(left_inverse_ideal(&scalar(n, 1)).unwrap().basis, id);
        assert_eq!(
            left_inverse_ideal(&scalar(n, 2)).unwrap().basis,
            id.scale(&BigRational::new(1.into(), 2.into()))
        );
        assert!(check_dual_permutation(&scalar(n, 1)).unwrap());
        assert!(check_dual_permutation(&scalar(n, 2)).unwrap());
    }

    #[test]
    fn reflection_generates_signed_permutation() {
        // h = s at n = 4: rows s*1 = s, s*r = sr, s*s = 1, s*sr = r
        let h = int(&[0, 0, 1, 0]);
        let l = ideal_basis(&h, Side::RightIdeal).unwrap();
        let want = QMatrix::from_i64_rows(&[vec![0, 0, 1, 0], vec![0, 0, 0, 1], vec![1, 0, 0, 0], vec![0, 1, 0, 0]]);
        assert_eq!(l.basis, want);
    }

    #[test]
    fn non_invertible_generator() {
        assert_eq!(
            ideal_basis(&int(&[1, 0, 1, 0]), Side::RightIdeal),
            Err(Error::NotInvertible)
        );
        assert_eq!(left_inverse_ideal(&int(&[1, 0, 1, 0])), Err(Error::NotInvertible));
    }

    #[test]
    fn size_cap() {
        assert!(matches!(
            ideal_basis(&scalar(32, 1), Side::RightIdeal),
            Err(Error::OracleSizeExceeded { .. })
        ));
    }

    #[test]
    fn dual_involution_and_determinants() {
        let mut rng = ChaCha20Rng::seed_from_u64(21);
        for n in [4usize, 8] {
            for _ in 0..10 {
                let h = random_invertible(n, &mut rng);
                let l = ideal_basis(&h, Side::RightIdeal).unwrap();
                let d = dual_basis(&l).unwrap();
                assert_eq!(d.basis.determinant() * l.determinant(), BigRational::one());
                let dd = IdealLattice {
                    basis: d.basis.clone(),
                    side: Side::RightIdeal,
                    generator: h.clone(),
                };
                assert!(same_lattice(&dual_basis(&dd).unwrap().basis, &l.basis).unwrap());
                // Gram product of primal and dual rows is the identity
                assert_eq!(l.basis.mul(&d.basis.transpose()), QMatrix::identity(n));
            }
        }
    }

    #[test]
    fn inverse_ideal_products_are_integral() {
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        for n in [4usize, 8] {
            for _ in 0..10 {
                let h = random_invertible(n, &mut rng);
                let i = ideal_basis(&h, Side::RightIdeal).unwrap();
                let inv = left_inverse_ideal(&h).unwrap();
                for a in inv.basis.row_vecs() {
                    for b in i.basis.row_vecs() {
                        assert!(is_integral_vector(&rational_product(&a, &b)));
                    }
                }
                // I ⊆ Z^n ⊆ I^{-1}
                let zn = QMatrix::identity(n);
                assert!(same_lattice(&zn, &zn).unwrap());
                assert!(i.basis.is_integral());
                assert!(inv.contains_lattice(&zn).unwrap());
            }
        }
    }

    #[test]
    fn dual_permutation_holds_in_quotient() {
        let mut rng = ChaCha20Rng::seed_from_u64(99);
        for n in [4usize, 8] {
            for _ in 0..20 {
                let h = random_invertible(n, &mut rng);
                assert!(check_dual_permutation(&h).unwrap(), "h = {:?}", h);
            }
        }
    }

    #[test]
    fn plain_reversal_fails_in_quotient() {
        // At n = 8 the unsigned reversal misses the dual for a large share of
        // generators, while the signed map holds for all of them.
        let mut rng = ChaCha20Rng::seed_from_u64(99);
        let mut plain_failures = 0;
        for _ in 0..40 {
            let h = random_invertible(8, &mut rng);
            assert!(check_dual_permutation_with(&h, DualMap::QuotientInverse).unwrap());
            if !check_dual_permutation_with(&h, DualMap::PlainReversal).unwrap() {
                plain_failures += 1;
            }
        }
        assert!(plain_failures > 0);
    }

    #[test]
    fn projection_examples() {
        let q = 13;
        let h = int(&[2, 1, 0, 1]);
        let l = ideal_basis(&h, Side::RightIdeal).unwrap();
        let row: Vec<i64> = l
            .basis
            .row(2)
            .iter()
            .map(|x| x.to_integer().try_into().unwrap())
            .collect();
        let scaled: Vec<i64> = row.iter().map(|c| c * q as i64).collect();
        assert!(mod_q_projection(&scaled, &l, q).unwrap().is_zero());
        let image = mod_q_projection(&h.embedding(), &l, q).unwrap();
        assert_eq!(image, RingElement::from_signed(&h.embedding(), q).unwrap());
        assert_eq!(mod_q_projection(&[1, 0, 0, 0], &l, q), Err(Error::NotInLattice));
    }
}
