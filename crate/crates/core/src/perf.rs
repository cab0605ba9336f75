//! Wall-clock timing of ring multiplication on both code paths.

use std::hint::black_box;
use std::time::{Duration, Instant};

use crate::error::Result;
use crate::group_ring::{GroupRing, RingElement};
use crate::negacyclic::MulMode;
use crate::params::{build_params, Profile};
use crate::sampler::{sample_uniform, seeded_rng};

#[derive(Debug, Clone, PartialEq)]
pub struct TimingRow {
    pub n: usize,
    pub q: u32,
    /// Nanoseconds per product; `None` when `q` has no NTT for this rank.
    pub ntt_ns: Option<f64>,
    pub schoolbook_ns: f64,
}

impl TimingRow {
    pub fn speedup(&self) -> Option<f64> {
        self.ntt_ns.map(|t| self.schoolbook_ns / t)
    }
}

/// Median time per product over `batches` batches that each run for at least `budget`.
pub fn time_mul(
    gr: &GroupRing,
    x: &RingElement,
    y: &RingElement,
    mode: MulMode,
    budget: Duration,
    batches: usize,
) -> Result<f64> {
    gr.mul_with(x, y, mode)?;
    let mut samples = Vec::with_capacity(batches);
    for _ in 0..batches.max(1) {
        let start = Instant::now();
        let mut reps = 0u64;
        while start.elapsed() < budget || reps == 0 {
            black_box(gr.mul_with(black_box(x), black_box(y), mode)?);
            reps += 1;
        }
        samples.push(start.elapsed().as_nanos() as f64 / reps as f64);
    }
    samples.sort_by(f64::total_cmp);
    Ok(samples[samples.len() / 2])
}

/// One row per rank, using the default modulus for that rank.
pub fn timing_table(ranks: &[usize], budget: Duration, batches: usize, seed: u64) -> Result<Vec<TimingRow>> {
    let mut rows = Vec::with_capacity(ranks.len());
    for &n in ranks {
        let p = build_params(n, Profile::Default)?;
        let gr = GroupRing::from_params(&p)?;
        let mut rng = seeded_rng(seed ^ n as u64);
        let x = sample_uniform(&gr, &mut rng);
        let y = sample_uniform(&gr, &mut rng);
        let ntt_ns = if gr.coefficient_ring().preferred_mode() == MulMode::Ntt {
            Some(time_mul(&gr, &x, &y, MulMode::Ntt, budget, batches)?)
        } else {
            None
        };
        let schoolbook_ns = time_mul(&gr, &x, &y, MulMode::Schoolbook, budget, batches)?;
        rows.push(TimingRow {
            n,
            q: p.q,
            ntt_ns,
            schoolbook_ns,
        });
    }
    Ok(rows)
}

pub fn render_timing(rows: &[TimingRow]) -> String {
    let mut out = format!(
        "{:>6}  {:>9}  {:>14}  {:>14}  {:>8}\n",
        "n", "q", "ntt_us", "schoolbook_us", "speedup"
    );
    for r in rows {
        let ntt = r.ntt_ns.map_or("-".to_string(), |t| format!("{:.2}", t / 1e3));
        let speed = r.speedup().map_or("-".to_string(), |s| format!("{s:.1}x"));
        out.push_str(&format!(
            "{:>6}  {:>9}  {:>14}  {:>14.2}  {:>8}\n",
            r.n,
            r.q,
            ntt,
            r.schoolbook_ns / 1e3,
            speed
        ));
    }
    out
}
