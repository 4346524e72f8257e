//! Test-only helpers shared by several integration test targets.

#![allow(dead_code)]

use num_complex::Complex64 as C64;
use rand::{ seq::SliceRandom, Rng, SeedableRng };
use rand_chacha::ChaCha8Rng;
use tristate::{ hilbert::PartyDims, upb::ProductSet };

/// Seed of the fixed corpus of random orthogonal product sets.
pub const CORPUS_SEED: u64 = 0x7e57_c0de;

const PARALLEL_TOL: f64 = 1e-9;

fn c(re: f64, im: f64) -> C64 { C64::new(re, im) }

/// `a0 b1 − a1 b0 = 0`: two qubit vectors span one line.
fn parallel(a: &[C64], b: &[C64]) -> bool {
    (a[0] * b[1] - a[1] * b[0]).norm() <= PARALLEL_TOL * (1.0 + a[0].norm() + a[1].norm()) * (1.0 + b[0].norm() + b[1].norm())
}

/// Decide unextendibility of a set of three-qubit product vectors by trying
/// all `3^n` ways of assigning members to the party on which a would-be
/// extension is orthogonal to them. An assignment works when each party's
/// factors are pairwise parallel, since then a nonzero qubit vector
/// orthogonal to all of them exists.
pub fn exhaustive_unextendible(factors: &[[Vec<C64>; 3]]) -> bool {
    let n = factors.len();
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let mut rest = code;
        let mut groups: [Vec<&[C64]>; 3] = [Vec::new(), Vec::new(), Vec::new()];
        for f in factors {
            let p = rest % 3;
            rest /= 3;
            groups[p].push(&f[p]);
        }
        let ok = groups.iter().all(|g| g.iter().all(|v| parallel(v, g[0])));
        if ok {
            return false;
        }
    }
    true
}

fn local_bases(rng: &mut ChaCha8Rng) -> Vec<[Vec<C64>; 2]> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut pool = vec![
        [vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]],
        [vec![c(h, 0.0), c(h, 0.0)], vec![c(h, 0.0), c(-h, 0.0)]],
        [vec![c(h, 0.0), c(0.0, h)], vec![c(h, 0.0), c(0.0, -h)]],
    ];
    for _ in 0..2 {
        let theta: f64 = rng.gen_range(0.0..std::f64::consts::PI);
        let phase: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let (s, co) = theta.sin_cos();
        let e = C64::from_polar(1.0, phase);
        pool.push([vec![c(co, 0.0), e * s], vec![c(-s, 0.0), e * co]]);
    }
    pool
}

fn random_unitary(rng: &mut ChaCha8Rng) -> [[C64; 2]; 2] {
    let theta: f64 = rng.gen_range(0.0..std::f64::consts::PI);
    let (s, co) = theta.sin_cos();
    let a = C64::from_polar(co, rng.gen_range(0.0..std::f64::consts::TAU));
    let b = C64::from_polar(s, rng.gen_range(0.0..std::f64::consts::TAU));
    [[a, -b.conj()], [b, a.conj()]]
}

fn apply(u: &[[C64; 2]; 2], v: &[C64]) -> Vec<C64> {
    vec![u[0][0] * v[0] + u[0][1] * v[1], u[1][0] * v[0] + u[1][1] * v[1]]
}

/// The Shifts set under random local unitaries, with 0 to 2 members dropped.
fn rotated_shifts(rng: &mut ChaCha8Rng) -> ProductSet {
    let us = [random_unitary(rng), random_unitary(rng), random_unitary(rng)];
    let mut members = common_shifts();
    let drop = rng.gen_range(0..=2);
    members.shuffle(rng);
    members.truncate(4 - drop);
    let mut set = ProductSet::new(PartyDims::uniform(2));
    for (k, f) in members.iter().enumerate() {
        set.push(format!("s{k}"), apply(&us[0], &f[0]), apply(&us[1], &f[1]), apply(&us[2], &f[2])).unwrap();
    }
    set
}

fn common_shifts() -> Vec<[Vec<C64>; 3]> {
    member_factors(&tristate::upb::shifts_upb())
}

/// Random orthogonal product sets of 1 to 6 members on three qubits.
///
/// Most sets draw each party's factors from one or two local orthonormal
/// bases and add members greedily while they stay orthogonal. Such sets are
/// almost never unextendible, so one set in five is instead the Shifts set
/// under random local unitaries, sometimes with members removed.
pub fn random_corpus(count: usize) -> Vec<ProductSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    let mut corpus = Vec::with_capacity(count);
    while corpus.len() < count {
        if corpus.len() % 5 == 4 {
            corpus.push(rotated_shifts(&mut rng));
            continue;
        }
        let pool = local_bases(&mut rng);
        let per_party: Vec<Vec<Vec<C64>>> = (0..3)
            .map(|_| {
                let k = rng.gen_range(1..=2);
                pool.choose_multiple(&mut rng, k).flat_map(|b| b.iter().cloned()).collect()
            })
            .collect();
        let mut candidates: Vec<[Vec<C64>; 3]> = Vec::new();
        for a in &per_party[0] {
            for b in &per_party[1] {
                for cc in &per_party[2] {
                    candidates.push([a.clone(), b.clone(), cc.clone()]);
                }
            }
        }
        candidates.shuffle(&mut rng);
        let target = rng.gen_range(1..=6);
        let mut chosen: Vec<[Vec<C64>; 3]> = Vec::new();
        for cand in candidates {
            if chosen.len() == target {
                break;
            }
            let orthogonal = chosen.iter().all(|m| {
                (0..3).any(|p| tristate::linalg::inner(&m[p], &cand[p]).norm() < 1e-12)
            });
            if orthogonal {
                chosen.push(cand);
            }
        }
        let mut set = ProductSet::new(PartyDims::uniform(2));
        for (k, [a, b, cc]) in chosen.into_iter().enumerate() {
            set.push(format!("m{k}"), a, b, cc).unwrap();
        }
        corpus.push(set);
    }
    corpus
}

pub fn member_factors(set: &ProductSet) -> Vec<[Vec<C64>; 3]> {
    set.members().iter().map(|m| m.factors.clone()).collect()
}
