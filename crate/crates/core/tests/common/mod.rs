#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use vlg_core::{GapBounds, VlgPattern};

pub const EXAMPLE_TEXT: &[u8] = b"ATCGGCTCCAGACCAGTACCCGTTCCGTGGT";

#[derive(Clone, Debug)]
pub struct Instance {
    pub pattern: VlgPattern,
    pub text: Vec<u8>,
}

/// Random instance: alphabet of 1-4 letters, |T| <= 300, k <= 4,
/// |P_i| <= 4, a_i <= 6, b_i - a_i <= 6. Subpatterns are often cut from
/// the text so that matches are common.
pub fn random_instance(rng: &mut StdRng) -> Instance {
    let sigma = rng.gen_range(1..=4);
    let alphabet = &b"ACGT"[..sigma];
    let n = rng.gen_range(0..=300);
    let text: Vec<u8> = (0..n).map(|_| alphabet[rng.gen_range(0..sigma)]).collect();
    let k = rng.gen_range(1..=4);
    let subs = (0..k)
        .map(|_| {
            let len = rng.gen_range(1..=4);
            if n >= len && rng.gen_bool(0.6) {
                let at = rng.gen_range(0..=n - len);
                text[at..at + len].to_vec()
            } else {
                (0..len).map(|_| alphabet[rng.gen_range(0..sigma)]).collect()
            }
        })
        .collect();
    let gaps = (0..k - 1)
        .map(|_| {
            let lower = match rng.gen_range(0..4) {
                0 => 0,
                _ => rng.gen_range(0..=6),
            };
            let width = match rng.gen_range(0..4) {
                0 => 0,
                _ => rng.gen_range(0..=6),
            };
            GapBounds::new(lower, lower + width)
        })
        .collect();
    Instance {
        pattern: VlgPattern::new(subs, gaps).unwrap(),
        text,
    }
}

pub fn random_instances(seed: u64, count: usize) -> Vec<Instance> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count).map(|_| random_instance(&mut rng)).collect()
}
