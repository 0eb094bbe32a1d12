//! Shapley-value feature attribution for models over fixed-dimensional
//! embedding vectors.
//!
//! The crate trains small regression/classification models on embedding
//! datasets and explains their predictions with three interchangeable
//! attribution engines:
//!
//! * [`shapley::exact_shapley`] — exact coalition enumeration,
//! * [`shapley::kernel_shap`] — weighted least squares over sampled
//!   coalitions,
//! * [`shapley::linear_shap`] — a closed-form shortcut for affine models.
//!
//! Local attributions aggregate into normalized per-dimension importance
//! profiles via [`aggregate::global_importance`].
//!
//! Everything in here is deterministic: all randomness flows from explicit
//! 64-bit seeds, and repeated calls with equal inputs produce bit-identical
//! results. The crate is `no_std` (with `alloc`); file formats and the CLI
//! live in the companion `vecshap` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod aggregate;
pub mod data;
mod error;
pub mod linalg;
pub mod metrics;
pub mod models;
pub mod shapley;

pub use error::{Error, Result};

pub(crate) mod rng {
    //! Seed derivation and normal sampling shared across modules.

    use rand::Rng;

    /// splitmix64 finalizer; decorrelates sequential seeds.
    pub fn mix(seed: u64) -> u64 {
        let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Standard normal draw via Box-Muller. Consumes exactly two uniforms
    /// per call so the stream layout stays stable.
    pub fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
        let u1: f64 = 1.0 - rng.gen::<f64>(); // (0, 1]
        let u2: f64 = rng.gen();
        libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(core::f64::consts::TAU * u2)
    }
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn standard_normal_has_sane_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = 200_000;
        let (mut sum, mut sumsq) = (0.0, 0.0);
        for _ in 0..n {
            let z = crate::rng::standard_normal(&mut rng);
            sum += z;
            sumsq += z * z;
        }
        let mean = sum / n as f64;
        let var = sumsq / n as f64 - mean * mean;
        assert!(mean.abs() < 0.01, "mean {mean}");
        assert!((var - 1.0).abs() < 0.02, "var {var}");
    }

    #[test]
    fn mix_spreads_adjacent_seeds() {
        let a = crate::rng::mix(1);
        let b = crate::rng::mix(2);
        assert_ne!(a, b);
        assert_ne!(a ^ b, 1); // not a trivial xor relation
    }
}
