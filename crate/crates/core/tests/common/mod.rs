//! Test-only oracles and random parameter generation.
#![allow(dead_code)]

use dqd_core::{Generator, StateDistribution, SystemParams};
use nalgebra::Matrix4;
use rand::Rng;

/// Random parameter set satisfying every model invariant, with all rates
/// strictly positive.
pub fn random_params<R: Rng>(rng: &mut R) -> SystemParams {
    let mu_l = rng.random_range(-1.0..3.0);
    SystemParams {
        eps_x: rng.random_range(0.0..3.0),
        eps_y: rng.random_range(0.0..3.0),
        u: rng.random_range(0.0..5.0),
        mu_d: rng.random_range(-1.0..4.0),
        mu_h: mu_l + rng.random_range(0.05..1.0),
        mu_l,
        t_d: rng.random_range(0.1..2.0),
        t_s: rng.random_range(0.1..2.0),
        gamma_d: rng.random_range(0.1..100.0),
        gamma_h0: rng.random_range(0.1..10.0),
        gamma_h1: rng.random_range(0.1..10.0),
        gamma_l0: rng.random_range(0.1..10.0),
        gamma_l1: rng.random_range(0.1..10.0),
    }
}

/// Random point of the open probability simplex, occasionally with exact
/// zeros.
pub fn random_distribution<R: Rng>(rng: &mut R, allow_zeros: bool) -> StateDistribution {
    let mut w: [f64; 4] = std::array::from_fn(|_| -rng.random::<f64>().max(1e-300).ln());
    if allow_zeros && rng.random_bool(0.3) {
        let k = rng.random_range(0..4);
        w[k] = 0.0;
    }
    let s: f64 = w.iter().sum();
    StateDistribution::new(w.map(|v| v / s)).unwrap()
}

fn to_matrix(generator: &Generator) -> Matrix4<f64> {
    let m = generator.matrix();
    Matrix4::from_fn(|i, j| m[i][j])
}

/// Eigenvalues of the generator, via the real Schur form.
pub fn eigenvalues(generator: &Generator) -> Vec<nalgebra::Complex<f64>> {
    to_matrix(generator)
        .complex_eigenvalues()
        .iter()
        .copied()
        .collect()
}

/// `1 / |Re λ|` of the slowest nonzero mode.
pub fn relaxation_time(generator: &Generator) -> f64 {
    let mut re: Vec<f64> = eigenvalues(generator).iter().map(|l| l.re.abs()).collect();
    re.sort_by(f64::total_cmp);
    // re[0] is the stationary mode
    1.0 / re[1]
}

/// Null vector of the generator from a dense eigen/singular decomposition:
/// locate the eigenvalue nearest zero, then take the right singular vector
/// of `G - λ I` for its smallest singular value.
pub fn eigen_null_vector(generator: &Generator) -> [f64; 4] {
    let g = to_matrix(generator);
    let lambda = eigenvalues(generator)
        .into_iter()
        .min_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap();
    let scale = g.abs().max();
    assert!(
        lambda.norm() <= 1e-10 * scale.max(1.0),
        "no zero eigenvalue: {lambda}"
    );
    let shifted = g - Matrix4::identity() * lambda.re;
    let svd = shifted.svd(false, true);
    let v_t = svd.v_t.unwrap();
    let (k, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .unwrap();
    let v = v_t.row(k);
    let s: f64 = v.iter().sum();
    std::array::from_fn(|i| v[i] / s)
}

/// Term-by-term divergence with `ln p - ln q` and compensated summation.
pub fn kl_oracle(p: &StateDistribution, q: &StateDistribution) -> f64 {
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    for i in 0..4 {
        let (pi, qi) = (p[i], q[i]);
        if pi == 0.0 {
            continue;
        }
        if qi == 0.0 {
            return f64::INFINITY;
        }
        let term = pi * (pi.ln() - qi.ln());
        let t = sum + term;
        if sum.abs() >= term.abs() {
            carry += (sum - t) + term;
        } else {
            carry += (term - t) + sum;
        }
        sum = t;
    }
    sum + carry
}
