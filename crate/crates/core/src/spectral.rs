//! Spectral view of ring elements.
//!
//! Over `C`, the quotient ring splits into `2 x 2` blocks indexed by the odd
//! `k < n/2`. For `h = f(r) + s g(r)` the block `k` contributes the singular
//! values `|f(ζ^k)| ± |g(ζ^k)|` (each twice), with `ζ = exp(2πi/n)`. The
//! matrix norm is the largest of them and `h` is a unit of `R ⊗ Q` exactly
//! when no `|f(ζ^k)| - |g(ζ^k)|` vanishes.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::group_ring::{IntElement, RingElement, ORACLE_MAX_N};

pub const DEFAULT_INVERTIBILITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralProfile {
    pub n: usize,
    pub q: u32,
    /// Odd exponents `k` with `1 <= k < n/2`.
    pub ks: Vec<usize>,
    pub abs_f: Vec<f64>,
    pub abs_g: Vec<f64>,
}

impl SpectralProfile {
    pub fn matrix_norm(&self) -> f64 {
        self.abs_f
            .iter()
            .zip(&self.abs_g)
            .map(|(a, b)| a + b)
            .fold(0.0, f64::max)
    }

    /// Smallest `||f(ζ^k)| - |g(ζ^k)||` over the profile.
    pub fn min_gap(&self) -> f64 {
        self.abs_f
            .iter()
            .zip(&self.abs_g)
            .map(|(a, b)| (a - b).abs())
            .fold(f64::INFINITY, f64::min)
    }

    /// Eigenvalues of `A A^T` predicted by the profile, ascending, with
    /// multiplicity two for each conjugate pair.
    pub fn gram_eigenvalues(&self) -> Vec<f64> {
        let mut ev = Vec::with_capacity(self.n);
        for (a, b) in self.abs_f.iter().zip(&self.abs_g) {
            for v in [(a + b) * (a + b), (a - b) * (a - b)] {
                ev.push(v);
                ev.push(v);
            }
        }
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Rank-style quantiles of `|f| + |g|` at the requested fractions.
    pub fn quantiles(&self, fractions: &[f64]) -> Vec<f64> {
        let mut s: Vec<f64> = self.abs_f.iter().zip(&self.abs_g).map(|(a, b)| a + b).collect();
        s.sort_by(f64::total_cmp);
        fractions
            .iter()
            .map(|&p| {
                let idx = ((s.len() - 1) as f64 * p.clamp(0.0, 1.0)).round() as usize;
                s[idx]
            })
            .collect()
    }

    /// `k,abs_f,abs_g` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,abs_f,abs_g\n");
        for ((k, a), b) in self.ks.iter().zip(&self.abs_f).zip(&self.abs_g) {
            out.push_str(&format!("{k},{a:.12e},{b:.12e}\n"));
        }
        out
    }
}

fn evaluate_odd(coeffs: &[f64], n: usize, planner: &mut FftPlanner<f64>) -> Vec<f64> {
    // f(ζ^k) = Σ a_j e^{+2πi jk/n}: an unnormalised inverse DFT of the zero-padded coefficients
    let mut buf: Vec<Complex64> = (0..n)
        .map(|j| Complex64::new(*coeffs.get(j).unwrap_or(&0.0), 0.0))
        .collect();
    planner.plan_fft_inverse(n).process(&mut buf);
    (1..n / 2).step_by(2).map(|k| buf[k].norm()).collect()
}

/// Profile of real rotation/reflection coefficient vectors of length `n/2`.
pub fn profile_of_real(f: &[f64], g: &[f64], q: u32) -> SpectralProfile {
    let n = 2 * f.len();
    let mut planner = FftPlanner::new();
    SpectralProfile {
        n,
        q,
        ks: (1..n / 2).step_by(2).collect(),
        abs_f: evaluate_odd(f, n, &mut planner),
        abs_g: evaluate_odd(g, n, &mut planner),
    }
}

/// Profile of `x` after lifting its coefficients into `[-q/2, q/2)`.
pub fn spectral_profile(x: &RingElement) -> SpectralProfile {
    let f: Vec<f64> = x.f().centered().into_iter().map(|c| c as f64).collect();
    let g: Vec<f64> = x.g().centered().into_iter().map(|c| c as f64).collect();
    profile_of_real(&f, &g, x.q())
}

pub fn matrix_norm(x: &RingElement) -> f64 {
    spectral_profile(x).matrix_norm()
}

/// Invertibility in `R ⊗ Q`: every gap `||f(ζ^k)| - |g(ζ^k)||` must exceed
/// `tol * (1 + matrix_norm)`.
pub fn is_invertible_real(x: &RingElement, tol: f64) -> bool {
    let p = spectral_profile(x);
    p.min_gap() > tol * (1.0 + p.matrix_norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixField {
    /// Centered integer lifts of the coefficients.
    Integers,
    /// Residues in `[0, q)`.
    ModQ,
}

/// The left-multiplication map `y -> x y` on the monomial basis
/// `{1, r, .., r^{m-1}, s, .., s r^{m-1}}`, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegRepMatrix {
    pub n: usize,
    pub field: MatrixField,
    pub q: u32,
    /// Column `j` is the embedding of `x * basis_j`.
    pub entries: Vec<i64>,
    pub element: RingElement,
}

impl RegRepMatrix {
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(
            self.n,
            self.n,
            &self.entries.iter().map(|&v| v as f64).collect::<Vec<_>>(),
        )
    }

    /// Eigenvalues of `A A^T` by a dense symmetric eigensolver, ascending.
    pub fn gram_eigenvalues(&self) -> Vec<f64> {
        let a = self.to_dmatrix();
        let gram = &a * a.transpose();
        let mut ev: Vec<f64> = gram.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

pub fn reg_rep_matrix(x: &RingElement, field: MatrixField) -> Result<RegRepMatrix> {
    let n = x.n();
    if n > ORACLE_MAX_N {
        return Err(Error::OracleSizeExceeded { n, limit: ORACLE_MAX_N });
    }
    let q = x.q() as i64;
    let xi = IntElement::from_embedding(&x.centered_embedding())?;
    let mut entries = vec![0i64; n * n];
    for j in 0..n {
        let mut e = vec![0i64; n];
        e[j] = 1;
        let col = xi.mul(&IntElement::from_embedding(&e)?)?.embedding();
        for (i, v) in col.into_iter().enumerate() {
            entries[i * n + j] = match field {
                MatrixField::Integers => v,
                MatrixField::ModQ => v.rem_euclid(q),
            };
        }
    }
    Ok(RegRepMatrix {
        n,
        field,
        q: x.q(),
        entries,
        element: x.clone(),
    })
}

/// Fraction of `trials` continuous Gaussian elements (per-coefficient standard
/// deviation `sigma`) whose matrix norm exceeds `threshold_mult * sigma * sqrt(n)`.
pub fn gauss_norm_tail<R: Rng + ?Sized>(
    sigma: f64,
    n: usize,
    trials: usize,
    threshold_mult: f64,
    rng: &mut R,
) -> Result<f64> {
    if n < 4 || !n.is_power_of_two() {
        return Err(Error::InvalidRank(n));
    }
    if trials == 0 || sigma.is_nan() || sigma < 0.0 {
        return Err(Error::InvalidParameter(format!("sigma = {sigma}, trials = {trials}")));
    }
    if sigma == 0.0 {
        return Ok(0.0);
    }
    let m = n / 2;
    let normal = Normal::new(0.0, sigma).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let threshold = threshold_mult * sigma * (n as f64).sqrt();
    let mut planner = FftPlanner::new();
    let mut exceed = 0usize;
    for _ in 0..trials {
        let f: Vec<f64> = (0..m).map(|_| normal.sample(rng)).collect();
        let g: Vec<f64> = (0..m).map(|_| normal.sample(rng)).collect();
        let af = evaluate_odd(&f, n, &mut planner);
        let ag = evaluate_odd(&g, n, &mut planner);
        let norm = af.iter().zip(&ag).map(|(a, b)| a + b).fold(0.0, f64::max);
        if norm > threshold {
            exceed += 1;
        }
    }
    Ok(exceed as f64 / trials as f64)
}
