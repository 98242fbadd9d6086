//! Benchmark fixtures.

use onion_core::random::{random_exact_state, random_state};
use onion_core::{Exact, Float, StateTensor};

pub const FORMATS: [&[usize]; 4] = [&[2, 2], &[2, 2, 2], &[3, 2, 2], &[2, 2, 2, 2]];

pub fn exact_fixture(format: &[usize]) -> StateTensor<Exact> {
    random_exact_state(format, 11).expect("supported format")
}

pub fn float_fixture(format: &[usize]) -> StateTensor<Float> {
    random_state(format, 11).expect("supported format")
}

pub fn label(format: &[usize]) -> String {
    format.iter().map(ToString::to_string).collect::<Vec<_>>().join("x")
}
