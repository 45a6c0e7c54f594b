//! Fixed inputs for the benchmarks.

use num_bigint::BigInt;
use preresolve_core::complex::ChainComplex;
use preresolve_core::sample::{random_complex, rng_for, SampleConfig};
use preresolve_core::{ConflationStructure, IntMatrix};
use rand::Rng;

pub fn matrix(n: usize, seed: u64) -> IntMatrix {
    let mut rng = rng_for(seed, 0, 0);
    IntMatrix::from_fn(n, n, |_, _| BigInt::from(rng.gen_range(-9i64..=9)))
}

pub fn complex(len: usize, seed: u64) -> ChainComplex {
    let mut rng = rng_for(seed, 1, 0);
    random_complex(&mut rng, &ConflationStructure::abelian(), &SampleConfig::default(), 0, len, 3)
}
