//! Learning with errors over the dihedral group ring
//! `R_q = F_q[D_2n] / (r^{n/2} + 1)`.

pub mod codec;
pub mod error;
pub mod exact;
pub mod group_ring;
pub mod lattice;
pub mod lemmas;
pub mod modarith;
pub mod negacyclic;
pub mod params;
pub mod perf;
pub mod pke;
pub mod sampler;
pub mod spectral;

pub use codec::{Kind, WireHeader};
pub use error::{Error, Result};
pub use group_ring::{GroupRing, IntElement, NormKind, RingElement};
pub use lemmas::{run_lemma_suite, LemmaRow, Status};
pub use negacyclic::{MulMode, NegacyclicRing, NttTables, Poly};
pub use params::{build_params, validate, ParamSet, Profile, Violation};
pub use pke::{Ciphertext, EncryptionRandomness, FailureReport, Pke, Plaintext, PublicKey, SecretKey};
pub use sampler::{
    sample_error, sample_lwe, sample_lwe_instrumented, sample_uniform, seeded_rng, to_normal_form, ErrorDist,
    InstrumentedSample, LweSample, SamplingMode, SecretSide,
};
pub use spectral::{
    is_invertible_real, matrix_norm, reg_rep_matrix, spectral_profile, MatrixField, RegRepMatrix, SpectralProfile,
};
