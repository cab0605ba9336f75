use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use grlwe_core::codec::{self, Kind};
use grlwe_core::lemmas::{all_passed, render_table, run_lemma_suite};
use grlwe_core::perf::{render_timing, time_mul, timing_table};
use grlwe_core::spectral::DEFAULT_INVERTIBILITY_TOL;
use grlwe_core::{
    build_params, is_invertible_real, sample_uniform, seeded_rng, spectral_profile, GroupRing, MulMode, ParamSet, Pke,
    Plaintext, Profile, RingElement,
};

#[derive(Parser)]
#[command(
    name = "grlwe",
    version,
    about = "LWE over the dihedral group ring Z[D_2n]/(r^(n/2)+1)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the parameter set for a ring rank
    Params {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = ProfileArg::Default)]
        profile: ProfileArg,
    },
    /// Generate a key pair
    Keygen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out_pk: PathBuf,
        #[arg(long)]
        out_sk: PathBuf,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Encrypt one n-bit block
    Encrypt {
        #[arg(long)]
        pk: PathBuf,
        /// Message file: either the wire format or exactly ceil(n/8) raw bytes
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Decrypt a ciphertext
    Decrypt {
        #[arg(long)]
        sk: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Write the packed message bits without a header
        #[arg(long)]
        raw: bool,
    },
    /// Spectral profile, matrix norm and invertibility of an element
    Analyze {
        /// Coefficients "f_0,..,f_{m-1},g_0,..,g_{m-1}", inline or in a file
        #[arg(long = "in", conflicts_with = "pk", required_unless_present = "pk")]
        input: Option<String>,
        /// Modulus for --in; defaults to the standard one for the rank
        #[arg(long, requires = "input")]
        q: Option<u32>,
        /// Analyze the public element `a` of this key (or `b` with --part b)
        #[arg(long)]
        pk: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Part::A, requires = "pk")]
        part: Part,
        /// Also write the per-frequency profile as CSV
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run the randomised lemma checks and print a table
    VerifyLemmas {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Time ring multiplication
    Bench {
        /// Single rank to time; without it a table over 64..=1024 is printed
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Time budget per measurement batch, in milliseconds
        #[arg(long, default_value_t = 50)]
        budget_ms: u64,
    },
    /// Quick end-to-end check of the library
    Selftest,
}

#[derive(Args)]
struct SeedArg {
    /// 64-bit seed; drawn from the OS and printed when absent
    #[arg(long)]
    seed: Option<u64>,
}

impl SeedArg {
    fn resolve(&self) -> u64 {
        self.seed.unwrap_or_else(|| {
            let s = rand::random::<u64>();
            eprintln!("seed={s}");
            s
        })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    Toy,
    Default,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Ntt,
    Schoolbook,
}

#[derive(Clone, Copy, ValueEnum)]
enum Part {
    A,
    B,
}

/// Exit statuses other than success.
enum Failure {
    Usage(anyhow::Error),
    Verification(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

impl From<grlwe_core::Error> for Failure {
    fn from(e: grlwe_core::Error) -> Self {
        Failure::Usage(e.into())
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> anyhow::Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn same_params(what: &str, a: &ParamSet, n: u32, q: u32) -> anyhow::Result<()> {
    if a.n as u32 != n || a.q != q {
        bail!("{what} is for n={n}, q={q} but the key has n={}, q={}", a.n, a.q);
    }
    Ok(())
}

fn params(n: usize, profile: ProfileArg) -> Outcome {
    let profile = match profile {
        ProfileArg::Toy => Profile::Toy,
        ProfileArg::Default => Profile::Default,
    };
    print!("{}", build_params(n, profile)?.report());
    Ok(())
}

fn keygen(n: usize, out_pk: &Path, out_sk: &Path, seed: u64) -> Outcome {
    let p = build_params(n, Profile::Default)?;
    let pke = Pke::new(&p)?;
    let (pk, sk) = pke.keygen(&mut seeded_rng(seed))?;
    write(out_pk, &codec::encode_public_key(&pk))?;
    write(out_sk, &codec::encode_secret_key(&sk))?;
    println!(
        "n={} q={} public_key_bytes={} secret_key_bytes={}",
        p.n,
        p.q,
        16 + 8 * n,
        16 + 8 * n
    );
    Ok(())
}

fn read_message(bytes: &[u8], n: usize) -> anyhow::Result<Plaintext> {
    if bytes.starts_with(&codec::MAGIC) {
        let (h, z) = codec::decode_message(bytes)?;
        if h.n as usize != n {
            bail!("message has {} bits but the key encrypts {n}", h.n);
        }
        return Ok(z);
    }
    if bytes.len() != n.div_ceil(8) {
        bail!(
            "raw message must be exactly {} bytes for n={n}, got {}",
            n.div_ceil(8),
            bytes.len()
        );
    }
    Ok(Plaintext::from_bytes(bytes, n)?)
}

fn encrypt(pk_path: &Path, input: &Path, out: &Path, seed: u64) -> Outcome {
    let pk = codec::decode_public_key(&read(pk_path)?)?;
    let pke = Pke::new(&pk.params)?;
    let z = read_message(&read(input)?, pk.params.n)?;
    let ct = pke.encrypt(&pk, &z, &mut seeded_rng(seed))?;
    write(out, &codec::encode_ciphertext(&ct))?;
    Ok(())
}

fn decrypt(sk_path: &Path, input: &Path, out: &Path, raw: bool) -> Outcome {
    let sk = codec::decode_secret_key(&read(sk_path)?)?;
    let (h, ct) = codec::decode_ciphertext(&read(input)?)?;
    same_params("ciphertext", &sk.params, h.n, h.q)?;
    let pke = Pke::new(&sk.params)?;
    let z = pke.decrypt(&sk, &ct)?;
    let bytes = if raw {
        z.to_bytes()
    } else {
        codec::encode_message(&z, sk.params.q)
    };
    write(out, &bytes)?;
    Ok(())
}

fn parse_element(text: &str, q: Option<u32>) -> anyhow::Result<RingElement> {
    let coeffs = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i64>().with_context(|| format!("bad coefficient {t:?}")))
        .collect::<anyhow::Result<Vec<i64>>>()?;
    let n = coeffs.len();
    let q = match q {
        Some(q) => q,
        None => {
            build_params(n, Profile::Default)
                .with_context(|| format!("{n} coefficients given"))?
                .q
        }
    };
    let gr = GroupRing::new(n, q)?;
    Ok(gr.from_signed(&coeffs)?)
}

fn analyze(input: Option<&str>, q: Option<u32>, pk: Option<&Path>, part: Part, csv: Option<&Path>) -> Outcome {
    let x = match (input, pk) {
        (Some(text), _) => {
            let text = if Path::new(text).is_file() {
                fs::read_to_string(text).context("reading element")?
            } else {
                text.to_string()
            };
            parse_element(&text, q)?
        }
        (None, Some(path)) => {
            let pk = codec::decode_public_key(&read(path)?)?;
            match part {
                Part::A => pk.a,
                Part::B => pk.b,
            }
        }
        (None, None) => unreachable!("clap requires one of --in and --pk"),
    };
    let profile = spectral_profile(&x);
    let gr = GroupRing::new(x.n(), x.q())?;
    let qs = [0.0, 0.25, 0.5, 0.75, 1.0];
    let quant = profile.quantiles(&qs);
    println!("n={} q={}", x.n(), x.q());
    println!("matrix_norm={:.6}", profile.matrix_norm());
    println!("min_gap={:.6e}", profile.min_gap());
    println!(
        "invertible_over_reals={}",
        is_invertible_real(&x, DEFAULT_INVERTIBILITY_TOL)
    );
    println!("invertible_mod_q={}", gr.inverse(&x).is_ok());
    for (p, v) in qs.iter().zip(&quant) {
        println!("quantile_{:.2}={v:.6}", p);
    }
    if let Some(path) = csv {
        write(path, profile.to_csv().as_bytes())?;
    }
    Ok(())
}

fn verify_lemmas(n: usize, trials: usize, seed: u64) -> Outcome {
    let rows = run_lemma_suite(n, trials, seed)?;
    print!("{}", render_table(&rows));
    if all_passed(&rows) {
        Ok(())
    } else {
        Err(Failure::Verification("lemma suite reported failures".into()))
    }
}

fn bench(n: Option<usize>, mode: Option<ModeArg>, budget_ms: u64) -> Outcome {
    let budget = Duration::from_millis(budget_ms.max(1));
    let ranks: Vec<usize> = match n {
        Some(n) => vec![n],
        None => vec![64, 128, 256, 512, 1024],
    };
    let Some(mode) = mode else {
        print!("{}", render_timing(&timing_table(&ranks, budget, 5, 0)?));
        return Ok(());
    };
    let mode = match mode {
        ModeArg::Ntt => MulMode::Ntt,
        ModeArg::Schoolbook => MulMode::Schoolbook,
    };
    println!("{:>6}  {:>9}  {:>10}  {:>12}", "n", "q", "mode", "us_per_mul");
    for n in ranks {
        let p = build_params(n, Profile::Default)?;
        let gr = GroupRing::from_params(&p)?;
        let mut rng = seeded_rng(n as u64);
        let (x, y) = (sample_uniform(&gr, &mut rng), sample_uniform(&gr, &mut rng));
        let ns = time_mul(&gr, &x, &y, mode, budget, 5)?;
        let label = match mode {
            MulMode::Ntt => "ntt",
            MulMode::Schoolbook => "schoolbook",
        };
        println!("{:>6}  {:>9}  {:>10}  {:>12.2}", n, p.q, label, ns / 1e3);
    }
    Ok(())
}

fn selftest() -> Outcome {
    let mut failures = Vec::new();
    let rows = run_lemma_suite(8, 20, 1)?;
    if !all_passed(&rows) {
        failures.push("lemma suite at n=8".to_string());
    }
    for n in [8, 64, 512] {
        let p = build_params(n, Profile::Default)?;
        let pke = Pke::new(&p)?;
        let mut rng = seeded_rng(n as u64);
        for _ in 0..20 {
            let (pk, sk) = pke.keygen(&mut rng)?;
            let z = Plaintext::random(n, &mut rng);
            let ct = pke.encrypt(&pk, &z, &mut rng)?;
            let bytes = codec::encode_ciphertext(&ct);
            let (_, back) = codec::decode_ciphertext(&bytes)?;
            if pke.decrypt(&sk, &back)? != z {
                failures.push(format!("round trip at n={n}"));
                break;
            }
        }
    }
    let header = codec::peek_header(&codec::encode_message(&Plaintext::zeros(8), 73))?;
    if header.kind != Kind::Message {
        failures.push("message header kind".into());
    }
    if failures.is_empty() {
        println!("selftest: ok");
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "selftest failed: {}",
            failures.join(", ")
        )))
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Params { n, profile } => params(n, profile),
        Command::Keygen {
            n,
            out_pk,
            out_sk,
            seed,
        } => keygen(n, &out_pk, &out_sk, seed.resolve()),
        Command::Encrypt { pk, input, out, seed } => encrypt(&pk, &input, &out, seed.resolve()),
        Command::Decrypt { sk, input, out, raw } => decrypt(&sk, &input, &out, raw),
        Command::Analyze {
            input,
            q,
            pk,
            part,
            csv,
        } => analyze(input.as_deref(), q, pk.as_deref(), part, csv.as_deref()),
        Command::VerifyLemmas { n, trials, seed } => verify_lemmas(n, trials, seed.resolve()),
        Command::Bench { n, mode, budget_ms } => bench(n, mode, budget_ms),
        Command::Selftest => selftest(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
    }
}
