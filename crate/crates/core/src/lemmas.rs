//! Randomised checks of the ring's algebraic identities, run as one suite.
//!
//! Exact rational checks only run up to `n = 16` and dense-matrix checks up
//! to `n = 64`; above those sizes the row is reported as skipped.

use std::fmt;

use rand::Rng;
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::exact::bareiss_determinant;
use crate::group_ring::{GroupRing, IntElement, RingElement, ORACLE_MAX_N};
use crate::lattice::{check_dual_permutation, LATTICE_MAX_N};
use crate::negacyclic::MulMode;
use crate::params::{build_params, ParamSet, Profile};
use crate::pke::{Pke, Plaintext};
use crate::sampler::{
    sample_lwe_instrumented, sample_uniform, seeded_rng, to_normal_form, ErrorDist, SamplingMode, SecretSide,
};
use crate::spectral::{
    gauss_norm_tail, is_invertible_real, reg_rep_matrix, spectral_profile, MatrixField, DEFAULT_INVERTIBILITY_TOL,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaRow {
    pub name: &'static str,
    pub trials: usize,
    pub status: Status,
    pub detail: String,
}

impl LemmaRow {
    fn verdict(name: &'static str, trials: usize, failures: usize, detail: String) -> LemmaRow {
        let status = if failures == 0 { Status::Pass } else { Status::Fail };
        LemmaRow {
            name,
            trials,
            status,
            detail,
        }
    }

    fn skip(name: &'static str, detail: String) -> LemmaRow {
        LemmaRow {
            name,
            trials: 0,
            status: Status::Skip,
            detail,
        }
    }
}

pub struct LemmaSuite {
    params: ParamSet,
    ring: GroupRing,
    trials: usize,
    seed: u64,
}

impl LemmaSuite {
    pub fn new(n: usize, trials: usize, seed: u64) -> Result<LemmaSuite> {
        if trials == 0 {
            return Err(Error::InvalidParameter("trials must be positive".into()));
        }
        let params = build_params(n, Profile::Default)?;
        let ring = GroupRing::from_params(&params)?;
        Ok(LemmaSuite {
            params,
            ring,
            trials,
            seed,
        })
    }

    pub fn params(&self) -> &ParamSet {
        &self.params
    }

    /// Each check draws from its own stream so skipping one leaves the others unchanged.
    fn rng(&self, check: u64) -> ChaCha20Rng {
        seeded_rng(self.seed ^ check.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }

    fn n(&self) -> usize {
        self.params.n
    }

    pub fn run(&self) -> Result<Vec<LemmaRow>> {
        Ok(vec![
            self.multiplication_oracle()?,
            self.ntt_agreement()?,
            self.eigenvalues()?,
            self.invertibility()?,
            self.dual_permutation()?,
            self.smallmul()?,
            self.normal_form()?,
            self.inverse()?,
            self.decryption_identity()?,
            self.gauss_ball()?,
        ])
    }

    fn multiplication_oracle(&self) -> Result<LemmaRow> {
        const NAME: &str = "mul-oracle";
        if self.n() > ORACLE_MAX_N {
            return Ok(LemmaRow::skip(
                NAME,
                format!("Cayley oracle limited to n <= {ORACLE_MAX_N}"),
            ));
        }
        let mut rng = self.rng(1);
        let mut bad = 0;
        for _ in 0..self.trials {
            let x = sample_uniform(&self.ring, &mut rng);
            let y = sample_uniform(&self.ring, &mut rng);
            if self.ring.mul(&x, &y)? != self.ring.mul_oracle(&x, &y)? {
                bad += 1;
            }
        }
        Ok(LemmaRow::verdict(
            NAME,
            self.trials,
            bad,
            format!("{bad} mismatches against the Cayley table"),
        ))
    }

    fn ntt_agreement(&self) -> Result<LemmaRow> {
        const NAME: &str = "ntt";
        if self.ring.coefficient_ring().preferred_mode() != MulMode::Ntt {
            return Ok(LemmaRow::skip(
                NAME,
                format!("q = {} has no NTT for m = {}", self.params.q, self.params.m),
            ));
        }
        let mut rng = self.rng(2);
        let mut bad = 0;
        for _ in 0..self.trials {
            let x = sample_uniform(&self.ring, &mut rng);
            let y = sample_uniform(&self.ring, &mut rng);
            if self.ring.mul_with(&x, &y, MulMode::Ntt)? != self.ring.mul_with(&x, &y, MulMode::Schoolbook)? {
                bad += 1;
            }
        }
        Ok(LemmaRow::verdict(
            NAME,
            self.trials,
            bad,
            format!("{bad} mismatches against schoolbook"),
        ))
    }

    fn eigenvalues(&self) -> Result<LemmaRow> {
        const NAME: &str = "eigenvalue";
        if self.n() > ORACLE_MAX_N {
            return Ok(LemmaRow::skip(
                NAME,
                format!("dense matrices limited to n <= {ORACLE_MAX_N}"),
            ));
        }
        let mut rng = self.rng(3);
        let mut bad = 0;
        let mut worst = 0.0f64;
        for _ in 0..self.trials {
            let x = self.ring.from_signed(&small_coeffs(self.n(), 5, &mut rng))?;
            let dense = reg_rep_matrix(&x, MatrixField::Integers)?.gram_eigenvalues();
            let formula = spectral_profile(&x).gram_eigenvalues();
            let scale = dense.last().copied().unwrap_or(0.0).max(1.0);
            let err = dense
                .iter()
                .zip(&formula)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
                / scale;
            worst = worst.max(err);
            if err > 1e-9 {
                bad += 1;
            }
        }
        Ok(LemmaRow::verdict(
            NAME,
            self.trials,
            bad,
            format!("max relative error {worst:.2e}"),
        ))
    }

    fn invertibility(&self) -> Result<LemmaRow> {
        const NAME: &str = "invertibility";
        if self.n() > LATTICE_MAX_N {
            return Ok(LemmaRow::skip(
                NAME,
                format!("exact determinants limited to n <= {LATTICE_MAX_N}"),
            ));
        }
        let mut rng = self.rng(4);
        let n = self.n();
        let agree = |x: &RingElement| -> Result<bool> {
            let det = bareiss_determinant(&reg_rep_matrix(x, MatrixField::Integers)?.entries, n);
            Ok(is_invertible_real(x, DEFAULT_INVERTIBILITY_TOL) == (det != 0.into()))
        };
        let mut bad = 0;
        let mut singular = 0;
        for _ in 0..self.trials {
            let x = self.ring.from_signed(&small_coeffs(n, 1, &mut rng))?;
            if !agree(&x)? {
                bad += 1;
            }
            if !is_invertible_real(&x, DEFAULT_INVERTIBILITY_TOL) {
                singular += 1;
            }
        }
        let one_plus_s = self.ring.add(&self.ring.one(), &self.ring.s())?;
        if is_invertible_real(&one_plus_s, DEFAULT_INVERTIBILITY_TOL) || !agree(&one_plus_s)? {
            bad += 1;
        }
        Ok(LemmaRow::verdict(
            NAME,
            self.trials + 1,
            bad,
            format!("{bad} disagreements with the exact determinant, {singular} singular draws, 1+s singular"),
        ))
    }

    fn dual_permutation(&self) -> Result<LemmaRow> {
        const NAME: &str = "dual-permutation";
        if self.n() > LATTICE_MAX_N {
            return Ok(LemmaRow::skip(
                NAME,
                format!("exact lattices limited to n <= {LATTICE_MAX_N}"),
            ));
        }
        let mut rng = self.rng(5);
        let mut bad = 0;
        let mut checked = 0;
        let mut draws = 0;
        while checked < self.trials && draws < 20 * self.trials {
            draws += 1;
            let h = IntElement::from_embedding(&small_coeffs(self.n(), 1, &mut rng))?;
            match check_dual_permutation(&h) {
                Ok(ok) => {
                    checked += 1;
                    if !ok {
                        bad += 1;
                    }
                }
                Err(Error::NotInvertible) => {}
                Err(e) => return Err(e),
            }
        }
        if checked < self.trials {
            bad += self.trials - checked;
        }
        Ok(LemmaRow::verdict(
            NAME,
            checked,
            bad,
            format!("{bad} failures over {checked} invertible ideals"),
        ))
    }

    fn smallmul(&self) -> Result<LemmaRow> {
        const NAME: &str = "smallmul";
        let mut rng = self.rng(6);
        let n = self.n();
        let bound = (n as f64).sqrt();
        let mut bad = 0;
        let mut worst = 0.0f64;
        for _ in 0..self.trials {
            let x = IntElement::from_embedding(&small_coeffs(n, 50, &mut rng))?;
            let y = IntElement::from_embedding(&small_coeffs(n, 50, &mut rng))?;
            let denom = x.l2_norm() * y.l2_norm();
            if denom == 0.0 {
                continue;
            }
            let ratio = x.mul(&y)?.l2_norm() / denom;
            worst = worst.max(ratio);
            if ratio > bound {
                bad += 1;
            }
        }
        Ok(LemmaRow::verdict(
            NAME,
            self.trials,
            bad,
            format!("max |xy|/(|x||y|) = {worst:.3}, bound {bound:.3}"),
        ))
    }

    fn normal_form(&self) -> Result<LemmaRow> {
        const NAME: &str = "normal-form";
        let mut rng = self.rng(7);
        let gr = &self.ring;
        let dist = ErrorDist::from_params(&self.params, SamplingMode::Rounded)?;
        let mut bad = 0;
        let mut done = 0;
        let mut draws = 0;
        while done < self.trials && draws < 20 * self.trials {
            draws += 1;
            let s = dist.sample(&mut rng);
            let first = sample_lwe_instrumented(gr, &s, &dist, SecretSide::Right, &mut rng)?;
            let second = sample_lwe_instrumented(gr, &s, &dist, SecretSide::Right, &mut rng)?;
            let reduced = match to_normal_form(gr, &first.sample, &second.sample) {
                Ok(r) => r,
                Err(Error::NotInvertible) => continue,
                Err(e) => return Err(e),
            };
            done += 1;
            let expected = gr.sub(&gr.mul(&reduced.a, &first.error)?, &second.error)?;
            // Same public parts with the errors removed: the reduced value must vanish.
            let clean_b1 = gr.sub(&first.sample.b, &first.error)?;
            let clean_b2 = gr.sub(&second.sample.b, &second.error)?;
            let (_, clean) = gr.normal_form_transform((&first.sample.a, &clean_b1), (&second.sample.a, &clean_b2))?;
            if reduced.b != expected || !clean.is_zero() {
                bad += 1;
            }
        }
        if done < self.trials {
            bad += self.trials - done;
        }
        Ok(LemmaRow::verdict(
            NAME,
            done,
            bad,
            format!("{bad} pairs where b' != a' e1 - e2"),
        ))
    }

    fn inverse(&self) -> Result<LemmaRow> {
        const NAME: &str = "inverse";
        let mut rng = self.rng(8);
        let gr = &self.ring;
        let one = gr.one();
        let mut bad = 0;
        let mut units = 0;
        for _ in 0..self.trials {
            let x = sample_uniform(gr, &mut rng);
            match gr.inverse(&x) {
                Ok(y) => {
                    units += 1;
                    if gr.mul(&x, &y)? != one || gr.mul(&y, &x)? != one {
                        bad += 1;
                    }
                }
                Err(Error::NotInvertible) => {}
                Err(e) => return Err(e),
            }
        }
        Ok(LemmaRow::verdict(
            NAME,
            self.trials,
            bad,
            format!("{units} units found, {bad} with x x^-1 != 1"),
        ))
    }

    fn decryption_identity(&self) -> Result<LemmaRow> {
        const NAME: &str = "pke-identity";
        let mut rng = self.rng(9);
        let pke = Pke::new(&self.params)?;
        let gr = pke.ring();
        let mut bad = 0;
        let mut wrong_messages = 0;
        for _ in 0..self.trials {
            let (pk, sk) = pke.keygen(&mut rng)?;
            let z = Plaintext::random(self.n(), &mut rng);
            let (ct, rand) = pke.encrypt_instrumented(&pk, &z, &mut rng)?;
            let lhs = gr.sub(
                &pke.decryption_residue(&sk, &ct)?,
                &gr.scaled_bits(z.bits(), pke.half_q())?,
            )?;
            if lhs != pke.decryption_noise(&sk, &rand)? {
                bad += 1;
            }
            if pke.decrypt(&sk, &ct)? != z {
                wrong_messages += 1;
            }
        }
        Ok(LemmaRow::verdict(
            NAME,
            self.trials,
            bad,
            format!("{bad} identity failures, {wrong_messages} messages decrypted wrongly"),
        ))
    }

    fn gauss_ball(&self) -> Result<LemmaRow> {
        const NAME: &str = "gauss-ball";
        let mut rng = self.rng(10);
        let n = self.n();
        let mult = 3.0 * (n as f64).ln().sqrt();
        let frac = gauss_norm_tail(1.0, n, self.trials, mult, &mut rng)?;
        let bad = usize::from(frac >= 0.01);
        Ok(LemmaRow::verdict(
            NAME,
            self.trials,
            bad,
            format!("{:.4} above {mult:.2} sqrt(n)", frac),
        ))
    }
}

pub fn run_lemma_suite(n: usize, trials: usize, seed: u64) -> Result<Vec<LemmaRow>> {
    LemmaSuite::new(n, trials, seed)?.run()
}

pub fn all_passed(rows: &[LemmaRow]) -> bool {
    rows.iter().all(|r| r.status != Status::Fail)
}

pub fn render_table(rows: &[LemmaRow]) -> String {
    let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(4).max(5);
    let mut out = format!("{:<width$}  {:>7}  {:<6}  detail\n", "lemma", "trials", "result");
    for r in rows {
        out.push_str(&format!(
            "{:<width$}  {:>7}  {:<6}  {}\n",
            r.name,
            r.trials,
            r.status.to_string(),
            r.detail
        ));
    }
    out
}

fn small_coeffs<R: Rng + ?Sized>(n: usize, bound: i64, rng: &mut R) -> Vec<i64> {
    (0..n).map(|_| rng.random_range(-bound..=bound)).collect()
}
