//! Fixtures shared by the benchmarks.

use rotlab_core::circle::CircleLift;
use rotlab_core::symplectic::{random_symplectic, SymplecticMatrix};

pub const SEED: u64 = 7;

pub fn arnold() -> CircleLift {
    CircleLift::arnold(0.4, 0.9).expect("valid parameters")
}

pub fn random_sp(n: usize) -> SymplecticMatrix {
    random_symplectic(n, SEED, 0.5).expect("finite generator")
}
