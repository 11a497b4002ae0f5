#![allow(dead_code)]

use fbc_core::{FiniteGroup, FreeMap, Presentation};
use rand::rngs::StdRng;
use rand::SeedableRng;

pub const PSI: &str = "a->b; b->c; c->cA";

pub fn psi() -> FreeMap {
    FreeMap::parse(PSI).unwrap()
}

pub fn random_auto(rank: usize, moves: usize, seed: u64) -> FreeMap {
    FreeMap::random_automorphism(rank, moves, &mut StdRng::seed_from_u64(seed))
}

/// Every assignment of generators, every relator evaluated at the end.
pub fn brute_force_counts(p: &Presentation, q: &FiniteGroup) -> (u64, u64) {
    let n = p.generator_count();
    let size = q.order();
    let mut img = vec![0usize; n];
    let (mut homs, mut epis) = (0, 0);
    loop {
        let ok = p.relators().iter().all(|r| {
            r.letters().iter().fold(0, |acc, x| {
                let y = img[x.index()];
                q.op(acc, if x.is_inverse() { q.inv(y) } else { y })
            }) == 0
        });
        if ok {
            homs += 1;
            if q.generates(&img) {
                epis += 1;
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                return (homs, epis);
            }
            img[i] += 1;
            if img[i] < size {
                break;
            }
            img[i] = 0;
            i += 1;
        }
    }
}
