#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reslie::field::{FpMatrix, FpVector, PrimeField};
use reslie::lie::CeCochain;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fp(p: u32) -> PrimeField {
    PrimeField::new(p).unwrap()
}

pub fn vec_of(p: u32, v: &[i64]) -> FpVector {
    FpVector::from_i64(fp(p), v)
}

pub fn random_vec(rng: &mut ChaCha8Rng, f: PrimeField, n: usize) -> FpVector {
    FpVector::from_raw(f, (0..n).map(|_| rng.gen_range(0..f.p())).collect())
}

pub fn random_matrix(rng: &mut ChaCha8Rng, f: PrimeField, r: usize, c: usize) -> FpMatrix {
    let mut m = FpMatrix::zeros(f, r, c);
    for i in 0..r {
        for j in 0..c {
            m.set_raw(i, j, rng.gen_range(0..f.p()));
        }
    }
    m
}

pub fn random_cochain(rng: &mut ChaCha8Rng, f: PrimeField, n: usize, m: usize, q: usize) -> CeCochain {
    let len = CeCochain::coord_len(n, m, q);
    CeCochain::from_coords(n, m, q, &random_vec(rng, f, len)).unwrap()
}

/// Row-major matrix literal.
pub fn mat(p: u32, rows: &[&[i64]]) -> FpMatrix {
    FpMatrix::from_i64_rows(fp(p), &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}
