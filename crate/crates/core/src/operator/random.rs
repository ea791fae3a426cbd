//! Seeded random instances. Entries are uniform on [-1, 1]; an optional
//! target rescales the operator so that its norm bound equals the target.

use super::{ParavectorOperator, QuaternionOperator};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type InstanceRng = ChaCha8Rng;

pub fn rng(seed: u64) -> InstanceRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_matrix(rng: &mut InstanceRng, d: usize) -> DMatrix<f64> {
    DMatrix::from_fn(d, d, |_, _| rng.random_range(-1.0..=1.0))
}

pub fn paravector_operator(seed: u64, n: usize, d: usize, target_norm: Option<f64>) -> ParavectorOperator {
    let mut r = rng(seed);
    let comps = (0..=n).map(|_| uniform_matrix(&mut r, d)).collect();
    let t = ParavectorOperator::new(n, comps).expect("valid random operator");
    rescale(t, target_norm)
}

fn rescale(t: ParavectorOperator, target_norm: Option<f64>) -> ParavectorOperator {
    match target_norm {
        Some(target) => {
            let norm = t.operator_norm_bound();
            if norm > 0.0 {
                t.scaled(target / norm)
            } else {
                t
            }
        }
        None => t,
    }
}

pub fn quaternion_operator(seed: u64, d: usize, target_norm: Option<f64>) -> QuaternionOperator {
    let mut r = rng(seed);
    let comps = std::array::from_fn(|_| uniform_matrix(&mut r, d));
    let t = QuaternionOperator::new(comps).expect("valid random operator");
    match target_norm {
        Some(target) => {
            let norm = t.operator_norm_bound();
            t.scaled(target / norm)
        }
        None => t,
    }
}

/// Random orthogonal matrix (Q factor of a uniform matrix, sign-normalized).
pub fn orthogonal(rng: &mut InstanceRng, d: usize) -> DMatrix<f64> {
    let qr = uniform_matrix(rng, d).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..d {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// Commuting components: diagonal matrices with uniform entries, conjugated
/// by one shared random orthogonal matrix.
pub fn commuting_operator(seed: u64, n: usize, d: usize) -> ParavectorOperator {
    let mut r = rng(seed);
    let q = orthogonal(&mut r, d);
    let comps = (0..=n)
        .map(|_| {
            let diag = nalgebra::DVector::from_fn(d, |_, _| r.random_range(-1.0..=1.0));
            &q * DMatrix::from_diagonal(&diag) * q.transpose()
        })
        .collect();
    ParavectorOperator::new(n, comps).expect("valid commuting operator")
}

/// Operator whose S-spectrum splits into two groups: spheres within 0.4 of
/// the real point 1 and spheres within 0.4 of -1. `d` must be at least 2.
pub fn two_group_operator(seed: u64, n: usize, d: usize) -> ParavectorOperator {
    assert!(d >= 2, "two spectral groups need d >= 2");
    let mut r = rng(seed);
    let perturb = rescale(
        ParavectorOperator::new(n, (0..=n).map(|_| uniform_matrix(&mut r, d)).collect())
            .expect("valid random operator"),
        Some(0.4),
    );
    let mut comps = perturb.components().to_vec();
    for i in 0..d {
        comps[0][(i, i)] += if i < d / 2 { 1.0 } else { -1.0 };
    }
    ParavectorOperator::new(n, comps).expect("valid operator")
}

/// Uniform point of [-r, r]^{n+1} as a paravector coefficient list.
pub fn box_point(rng: &mut InstanceRng, n: usize, r: f64) -> Vec<f64> {
    (0..=n).map(|_| rng.random_range(-r..=r)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_instances_are_reproducible() {
        assert_eq!(paravector_operator(42, 2, 4, None), paravector_operator(42, 2, 4, None));
        assert_ne!(paravector_operator(42, 2, 4, None), paravector_operator(43, 2, 4, None));
    }

    #[test]
    fn rescaling_hits_target() {
        let t = paravector_operator(7, 3, 3, Some(0.5));
        assert!((t.operator_norm_bound() - 0.5).abs() < 1e-12);
        let q = quaternion_operator(7, 4, Some(0.5));
        assert!((q.operator_norm_bound() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn commuting_instances_commute() {
        for seed in 0..5 {
            assert!(commuting_operator(seed, 3, 4).is_commuting());
        }
    }

    #[test]
    fn orthogonal_is_orthogonal() {
        let q = orthogonal(&mut rng(1), 5);
        assert!((q.transpose() * &q - DMatrix::identity(5, 5)).amax() < 1e-12);
    }
}
