#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use toric_okounkov::corpus::*;
use toric_okounkov::exact::{rat, rint, Rat};
use toric_okounkov::fan::Fan;
use toric_okounkov::flag::{build_flag_chain, FlagChain, FlagFrame};
use toric_okounkov::lattice::LatticeVector;
use toric_okounkov::okounkov::ToricDivisor;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn surfaces() -> Vec<(&'static str, Arc<Fan>)> {
    vec![
        ("P2", Arc::new(p2())),
        ("P1xP1", Arc::new(p1xp1())),
        ("F1", Arc::new(hirzebruch(1))),
        ("F2", Arc::new(hirzebruch(2))),
        ("F3", Arc::new(hirzebruch(3))),
        ("P112", Arc::new(p112())),
    ]
}

pub fn volume_corpus() -> Vec<(&'static str, Arc<Fan>)> {
    vec![
        ("P2", Arc::new(p2())),
        ("P1xP1", Arc::new(p1xp1())),
        ("F1", Arc::new(hirzebruch(1))),
        ("F2", Arc::new(hirzebruch(2))),
        ("P112", Arc::new(p112())),
        ("P1xF1", Arc::new(p1xf1())),
    ]
}

pub fn random_rat(r: &mut ChaCha8Rng, lo: i64, hi: i64, den: i64) -> Rat {
    rat(r.gen_range(lo * den..=hi * den), den)
}

/// Big divisor with small integer or half-integer coefficients, possibly not nef.
pub fn random_big_divisor(r: &mut ChaCha8Rng, fan: &Arc<Fan>) -> ToricDivisor {
    loop {
        let c: Vec<Rat> = (0..fan.rays.len())
            .map(|_| if r.gen_bool(0.2) { random_rat(r, -1, 3, 2) } else { rint(r.gen_range(-1..=3)) })
            .collect();
        let d = ToricDivisor::new(fan.clone(), c).unwrap();
        if d.is_big() {
            return d;
        }
    }
}

pub fn random_primitive(r: &mut ChaCha8Rng, rank: usize, bound: i64) -> LatticeVector {
    loop {
        let c: Vec<i64> = (0..rank).map(|_| r.gen_range(-bound..=bound)).collect();
        let v = LatticeVector::from_i64(&c);
        if !v.is_zero() && v.is_primitive() {
            return v;
        }
    }
}

/// A complete flag from random ambient vectors; retries until one builds.
pub fn random_flag(r: &mut ChaCha8Rng, fan: &Fan, bound: i64) -> FlagChain {
    loop {
        let vs: Vec<LatticeVector> = (0..fan.rank).map(|_| random_primitive(r, fan.rank, bound)).collect();
        if let Ok(f) = build_flag_chain(fan, &vs, FlagFrame::Ambient) {
            return f;
        }
    }
}

pub fn boundary_coeffs(r: &mut ChaCha8Rng, n: usize) -> Vec<Rat> {
    (0..n).map(|_| if r.gen_bool(0.5) { Rat::from_integer(0.into()) } else { rat(r.gen_range(0..4), 4) }).collect()
}

/// Report line in the acceptance format.
pub fn report(id: u32, title: &str, pass: bool, detail: &str) {
    println!("criterion {id:>2} [{}] {title}: {detail}", if pass { "PASS" } else { "FAIL" });
}
