#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qslnoise::matops::{c, ComplexMatrix, DensityMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix<R: Rng>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let entries = (0..dim * dim)
        .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    ComplexMatrix::from_entries(dim, entries).unwrap()
}

pub fn random_hermitian<R: Rng>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let g = random_matrix(rng, dim);
    (&g + &g.dagger()).scale_real(0.5)
}

/// `G G^dagger / tr`, full rank with probability one.
pub fn random_state<R: Rng>(rng: &mut R, dim: usize) -> DensityMatrix {
    let g = random_matrix(rng, dim);
    let m = g.matmul(&g.dagger());
    let tr = m.trace().re;
    DensityMatrix::new(m.scale_real(1.0 / tr)).unwrap()
}

pub fn min_eigenvalue(m: &ComplexMatrix) -> f64 {
    m.hermitian_eigenvalues().unwrap()[0]
}
