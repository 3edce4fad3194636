//! Block LU against an independent dense Gaussian elimination.

use cntflow_core::blocklinalg::{factorize, solve_system, Block, BlockTridiagonalSystem, Vec5, BLOCK};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_block(rng: &mut ChaCha8Rng, shift: f64) -> Block {
    let mut b = [[0.0; BLOCK]; BLOCK];
    for (i, row) in b.iter_mut().enumerate() {
        for (k, v) in row.iter_mut().enumerate() {
            *v = rng.gen_range(-1.0..1.0);
            if i == k {
                *v += shift;
            }
        }
    }
    b
}

fn random_vec(rng: &mut ChaCha8Rng) -> Vec5 {
    let mut v = [0.0; BLOCK];
    for x in v.iter_mut() {
        *x = rng.gen_range(-1.0..1.0);
    }
    v
}

fn random_system(rng: &mut ChaCha8Rng, n: usize) -> BlockTridiagonalSystem {
    let diag = (0..n).map(|_| random_block(rng, 6.0)).collect();
    let sub = (1..n).map(|_| random_block(rng, 0.0)).collect();
    let sup = (1..n).map(|_| random_block(rng, 0.0)).collect();
    let rhs = (0..n).map(|_| random_vec(rng)).collect();
    BlockTridiagonalSystem::new(diag, sub, sup, rhs).unwrap()
}

/// Dense Gaussian elimination with partial pivoting.
fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &k| a[i][c].abs().total_cmp(&a[k][c].abs())).unwrap();
        a.swap(c, p);
        b.swap(c, p);
        for r in c + 1..n {
            let l = a[r][c] / a[c][c];
            let pivot_row = a[c].clone();
            for (x, u) in a[r][c..].iter_mut().zip(&pivot_row[c..]) {
                *x -= l * u;
            }
            b[r] -= l * b[c];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|k| a[r][k] * x[k]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    x
}

fn flat(v: &[Vec5]) -> Vec<f64> {
    v.iter().flatten().copied().collect()
}

fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    let num = a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let den = b.iter().map(|y| y.abs()).fold(0.0, f64::max);
    num / den.max(1e-300)
}

#[test]
fn matches_dense_solve_on_random_systems() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst = 0.0_f64;
    for _ in 0..200 {
        let n = rng.gen_range(1..=12);
        let sys = random_system(&mut rng, n);
        let x = solve_system(&sys).unwrap();
        let reference = dense_solve(sys.to_dense(), flat(&sys.rhs));
        worst = worst.max(rel_err(&flat(&x), &reference));
    }
    assert!(worst < 1e-8, "worst relative error {worst:e}");
}

#[test]
fn residual_of_solution_is_small() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let sys = random_system(&mut rng, 50);
    let x = solve_system(&sys).unwrap();
    let ax = sys.apply(&x);
    assert!(rel_err(&flat(&ax), &flat(&sys.rhs)) < 1e-12);
}

#[test]
fn factorization_is_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let sys = random_system(&mut rng, 9);
    let a = solve_system(&sys).unwrap();
    let b = solve_system(&sys).unwrap();
    assert_eq!(flat(&a), flat(&b));
}

proptest! {
    #[test]
    fn solve_is_linear(seed in any::<u64>(), n in 1usize..=12, a in -3.0..3.0f64, b in -3.0..3.0f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sys = random_system(&mut rng, n);
        let fact = factorize(&sys).unwrap();
        let r1: Vec<Vec5> = (0..n).map(|_| random_vec(&mut rng)).collect();
        let r2: Vec<Vec5> = (0..n).map(|_| random_vec(&mut rng)).collect();
        let combo: Vec<Vec5> = r1
            .iter()
            .zip(&r2)
            .map(|(u, v)| std::array::from_fn(|i| a * u[i] + b * v[i]))
            .collect();
        let x1 = flat(&fact.solve(&r1).unwrap());
        let x2 = flat(&fact.solve(&r2).unwrap());
        let xc = flat(&fact.solve(&combo).unwrap());
        let expect: Vec<f64> = x1.iter().zip(&x2).map(|(p, q)| a * p + b * q).collect();
        let scale = expect.iter().map(|v| v.abs()).fold(1.0, f64::max);
        let err = xc.iter().zip(&expect).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        prop_assert!(err / scale < 1e-10, "linearity error {}", err);
    }
}
