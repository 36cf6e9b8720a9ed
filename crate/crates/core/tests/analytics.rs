mod common;

use std::f64::consts::FRAC_1_SQRT_2;

use common::*;
use nalgebra::Matrix4;
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use qlayers_core::analytics::{
    bar_length, concurrence, correlation, half_matrix, qubit_stats, BarMode,
};
use qlayers_core::linalg::SquareMatrix;
use qlayers_core::{DensityMatrix, PairDensity, StateVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn real_state(n: usize, entries: &[(usize, f64)]) -> StateVector {
    let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
    for &(k, a) in entries {
        amps[k] = C64::new(a, 0.0);
    }
    StateVector::from_amplitudes(amps).unwrap()
}

fn w4() -> StateVector {
    real_state(4, &[(1, 0.5), (2, 0.5), (4, 0.5), (8, 0.5)])
}

fn ghz(n: usize) -> StateVector {
    real_state(n, &[(0, FRAC_1_SQRT_2), ((1 << n) - 1, FRAC_1_SQRT_2)])
}

/// High probability on 0111 and 1000, low on 0100 and 1011.
fn half_matrix_example() -> StateVector {
    let hi = ((1.0 + FRAC_1_SQRT_2) / 4.0).sqrt();
    let lo = ((1.0 - FRAC_1_SQRT_2) / 4.0).sqrt();
    real_state(4, &[(0b0111, hi), (0b1000, hi), (0b0100, lo), (0b1011, lo)])
}

/// Wootters concurrence from the (non-Hermitian) spectrum of ρρ̃, computed
/// with nalgebra's complex Schur decomposition.
fn wootters_oracle(rho: &PairDensity) -> f64 {
    let m = Matrix4::from_fn(|i, j| rho.get(i, j));
    let yy = Matrix4::from_fn(|i, j| match (i, j) {
        (0, 3) | (3, 0) => C64::new(-1.0, 0.0),
        (1, 2) | (2, 1) => C64::new(1.0, 0.0),
        _ => C64::new(0.0, 0.0),
    });
    let tilde = yy * m.conjugate() * yy;
    let ev = (m * tilde).schur().eigenvalues().expect("complex Schur always triangular");
    let mut l: Vec<f64> = ev.iter().map(|z| z.re.max(0.0).sqrt()).collect();
    l.sort_by(|a, b| b.total_cmp(a));
    (l[0] - l[1] - l[2] - l[3]).max(0.0)
}

fn random_mixed_pair(rng: &mut ChaCha8Rng, rank: usize) -> PairDensity {
    let mut m = SquareMatrix::<4>::zeros();
    for _ in 0..rank {
        let v = random_state(rng, 2);
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] += v[i] * v[j].conj() / rank as f64;
            }
        }
    }
    DensityMatrix(m)
}

#[test]
fn w4_single_qubit_marginals() {
    let psi = w4();
    let amps = psi.amplitudes().to_vec();
    for q in 0..4 {
        let oracle = reduced_density(&amps, &[q]);
        assert!((oracle[0][0].re - 0.75).abs() < 1e-15 && (oracle[1][1].re - 0.25).abs() < 1e-15);
        assert!(oracle[0][1].norm() < 1e-15);
        let rho = psi.partial_trace_single(q).unwrap();
        assert!((rho.get(0, 0).re - 0.75).abs() < 1e-12);
        assert!((rho.get(1, 1).re - 0.25).abs() < 1e-12);
        assert!(rho.get(0, 1).norm() < 1e-12);
    }
}

#[test]
fn ghz3_pair_is_classical_mixture() {
    let rho = ghz(3).partial_trace_pair(0, 1).unwrap();
    let oracle = reduced_density(ghz(3).amplitudes(), &[0, 1]);
    for a in 0..4 {
        for b in 0..4 {
            let want = if a == b && (a == 0 || a == 3) { 0.5 } else { 0.0 };
            assert!((oracle[a][b].re - want).abs() < 1e-15);
            assert!((rho.get(a, b) - C64::new(want, 0.0)).norm() < 1e-12);
        }
    }
}

#[test]
fn ghz4_half_matrix() {
    let hm = half_matrix(&ghz(4)).unwrap();
    assert_eq!(hm.cells.len(), 6);
    for cell in &hm.cells {
        assert!((cell.correlation - 1.0).abs() < 1e-9);
        assert!(cell.concurrence < 1e-9);
    }
}

#[test]
fn product_pair_is_pure_rank_one() {
    // |00⟩ on wires 0, 1 tensored with an entangled pair on wires 2, 3
    let h = FRAC_1_SQRT_2;
    let psi = real_state(4, &[(0b0000, h), (0b1100, h)]);
    let rho = psi.partial_trace_pair(0, 1).unwrap();
    assert!((rho.purity() - 1.0).abs() < 1e-12);
    let e = rho.eigenvalues();
    assert!((e[3] - 1.0).abs() < 1e-12 && e[..3].iter().all(|x| x.abs() < 1e-12));
}

#[test]
fn half_matrix_example_values() {
    let psi = half_matrix_example();
    let hm = half_matrix(&psi).unwrap();
    let top = hm.cell(0, 1).unwrap();
    let middle = hm.cell(1, 2).unwrap();
    let bottom = hm.cell(2, 3).unwrap();
    assert!((top.correlation - 1.0).abs() < 1e-3);
    assert!((bottom.correlation + 1.0).abs() < 1e-3);
    assert!((middle.correlation - 0.707).abs() < 1e-3);
    assert!((top.concurrence - 0.707).abs() < 1e-3);
    assert!((bottom.concurrence - 0.707).abs() < 1e-3);
    assert!(middle.concurrence.abs() < 1e-3);
    // the middle pair is a product state (as the concurrence suggests)
    let middle_rho = psi.partial_trace_pair(1, 2).unwrap();
    assert!(wootters_oracle(&middle_rho) < 1e-6);
    for q in 0..4 {
        let s = qubit_stats(&psi.partial_trace_single(q).unwrap()).unwrap();
        assert!((s.purity - 0.5).abs() < 1e-3);
    }
}

#[test]
fn concurrence_matches_pure_state_formula() {
    // pure two-qubit |ψ⟩: C = 2|ψ00 ψ11 − ψ01 ψ10|
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..200 {
        let v = random_state(&mut rng, 2);
        let want = 2.0 * (v[0] * v[3] - v[1] * v[2]).norm();
        let rho = DensityMatrix::pure([v[0], v[1], v[2], v[3]]);
        assert!((concurrence(&rho).unwrap() - want).abs() < 1e-7, "{want}");
    }
}

#[test]
fn concurrence_matches_nonhermitian_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for trial in 0..200 {
        let rho = random_mixed_pair(&mut rng, 1 + trial % 4);
        let got = concurrence(&rho).unwrap();
        let want = wootters_oracle(&rho);
        assert!((got - want).abs() < 1e-6, "trial {trial}: {got} vs {want}");
    }
}

#[test]
fn eigen_matches_nalgebra() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..100 {
        let rho = random_mixed_pair(&mut rng, 3);
        let m = Matrix4::from_fn(|i, j| rho.get(i, j));
        let mut want: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        want.sort_by(f64::total_cmp);
        let got = rho.matrix().hermitian_eigen().values;
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-12);
        }
    }
}

fn swapped(rho: &PairDensity) -> PairDensity {
    // exchange the two local bits: index 2·b2 + b1 → 2·b1 + b2
    let p = [0, 2, 1, 3];
    let mut m = SquareMatrix::<4>::zeros();
    for a in 0..4 {
        for b in 0..4 {
            m.0[p[a]][p[b]] = rho.get(a, b);
        }
    }
    DensityMatrix(m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pair_metrics_symmetric_and_bounded(seed in any::<u64>(), n in 2usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = StateVector::from_amplitudes(random_state(&mut rng, n)).unwrap();
        for i in 0..n {
            for j in (i + 1)..n {
                let fwd = psi.partial_trace_pair(i, j).unwrap();
                let rev = psi.partial_trace_pair(j, i).unwrap();
                prop_assert!(rev.matrix().max_abs_diff(swapped(&fwd).matrix()) <= 1e-15);
                let (c1, c2) = (correlation(&fwd).unwrap(), correlation(&rev).unwrap());
                let (k1, k2) = (concurrence(&fwd).unwrap(), concurrence(&rev).unwrap());
                prop_assert!((c1 - c2).abs() <= 1e-12);
                prop_assert!((k1 - k2).abs() <= 1e-9);
                prop_assert!((-1.0 - 1e-9..=1.0 + 1e-9).contains(&c1));
                prop_assert!((0.0..=1.0 + 1e-9).contains(&k1));
            }
        }
    }

    #[test]
    fn product_states_have_no_pair_entanglement(seed in any::<u64>(), n in 2usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let locals: Vec<Vec<C64>> = (0..n).map(|_| random_state(&mut rng, 1)).collect();
        let amps: Vec<C64> = (0..1usize << n)
            .map(|k| (0..n).map(|w| locals[w][(k >> w) & 1]).product())
            .collect();
        let psi = StateVector::from_amplitudes(amps).unwrap();
        for cell in half_matrix(&psi).unwrap().cells {
            prop_assert!(cell.concurrence <= 1e-7);
            prop_assert!(cell.von_neumann_entropy <= 1e-9);
        }
        for q in 0..n {
            let s = qubit_stats(&psi.partial_trace_single(q).unwrap()).unwrap();
            prop_assert!((s.purity - 1.0).abs() <= 1e-9);
            prop_assert!(s.von_neumann_entropy <= 1e-9);
        }
    }

    #[test]
    fn entropy_zero_iff_pure(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = StateVector::from_amplitudes(random_state(&mut rng, 3)).unwrap();
        for q in 0..3 {
            let s = qubit_stats(&psi.partial_trace_single(q).unwrap()).unwrap();
            prop_assert_eq!(s.von_neumann_entropy <= 1e-9, (s.purity - 1.0).abs() <= 1e-9);
            prop_assert!((s.linear_entropy - 2.0 * (1.0 - s.purity)).abs() <= 1e-15);
        }
    }

    #[test]
    fn bar_length_monotonic(a in 0.0f64..=1.0, b in 0.0f64..=1.0, decades in 1u32..12) {
        let (lo, hi) = (a.min(b), a.max(b));
        for mode in [BarMode::Probability, BarMode::Magnitude, BarMode::Log] {
            let (x, y) = (bar_length(lo, mode, decades), bar_length(hi, mode, decades));
            prop_assert!(x <= y);
            prop_assert!((0.0..=1.0).contains(&x) && (0.0..=1.0).contains(&y));
        }
    }
}
