#![allow(dead_code)]

use std::path::PathBuf;

use mipaug::exact::{IntMat, IntVec};
use mipaug::instance::{parse_instance, IntBox, MipInstance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn fixture(name: &str) -> MipInstance {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture exists");
    parse_instance(&text).expect("fixture parses")
}

#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub max_m: usize,
    pub max_real: usize,
    pub max_int: usize,
    pub entry: i64,
    pub max_side: i64,
}

pub const DESK: Shape = Shape {
    max_m: 2,
    max_real: 4,
    max_int: 2,
    entry: 3,
    max_side: 4,
};

/// A valid random instance. The right-hand side is `A x*` for a random
/// nonnegative `x*` whose integer part lies in the box, so the boxed problem
/// is always feasible.
pub fn random_instance(rng: &mut ChaCha8Rng, shape: Shape, boxed: bool) -> MipInstance {
    loop {
        let m = rng.gen_range(1..=shape.max_m);
        let n_real = rng.gen_range(m..=shape.max_real.max(m));
        let n_int = rng.gen_range(1..=shape.max_int);
        let n = n_real + n_int;
        let rows: Vec<Vec<i64>> = (0..m)
            .map(|_| (0..n).map(|_| rng.gen_range(-shape.entry..=shape.entry)).collect())
            .collect();
        let hi: Vec<i64> = (0..n_int).map(|_| rng.gen_range(1..=shape.max_side)).collect();
        let x: Vec<i64> = (0..n)
            .map(|j| {
                if j < n_real {
                    rng.gen_range(0..=3)
                } else {
                    rng.gen_range(0..=hi[j - n_real])
                }
            })
            .collect();
        let b: Vec<i64> = rows
            .iter()
            .map(|r| r.iter().zip(&x).map(|(a, v)| a * v).sum())
            .collect();
        let c: Vec<i64> = (0..n).map(|_| rng.gen_range(-shape.entry..=shape.entry)).collect();
        let bounds = boxed.then(|| IntBox::new(&vec![0; n_int], &hi));
        let a = IntMat::from_rows(&rows).expect("rectangular");
        if let Ok(inst) = MipInstance::new(
            n_real,
            n_int,
            a,
            IntVec::from_i64(&b),
            IntVec::from_i64(&c),
            bounds,
        ) {
            return inst;
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
