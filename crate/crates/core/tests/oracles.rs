//! Independent numerical checks against closed forms and brute force.

mod common;

use common::*;
use dimres::gqd::gqd;
use dimres::measures::*;
use dimres::partition::{labels, Partition};
use dimres::qcore::*;
use dimres::states::*;
use dimres::thermo::extractable_work;
use num_complex::Complex64;

fn basis_vector(d: usize, k: usize) -> ComplexMatrix {
    let mut v = ComplexMatrix::zeros(d, 1);
    v[(k, 0)] = C1;
    v
}

#[test]
fn partial_trace_matches_explicit_basis_sum() {
    let s = random_mixed_state(layout(&[("a", 3), ("b", 2), ("c", 2)]), &mut rng(4)).unwrap();
    // Tr_b = Σ_k (I_a ⊗ <k| ⊗ I_c) ρ (I_a ⊗ |k> ⊗ I_c)
    let mut expect = ComplexMatrix::zeros(6, 6);
    for k in 0..2 {
        let e = ComplexMatrix::identity(3, 3)
            .kronecker(&basis_vector(2, k))
            .kronecker(&ComplexMatrix::identity(2, 2));
        expect += e.adjoint() * s.matrix() * &e;
    }
    let got = partial_trace(&s, &["b"]).unwrap();
    assert!(max_abs_diff(got.matrix(), &expect) < 1e-15);
}

#[test]
fn partial_transpose_matches_elementwise_definition() {
    let s = random_mixed_state(layout(&[("a", 2), ("b", 3)]), &mut rng(8)).unwrap();
    let pt = partial_transpose(&s, &["b"]).unwrap();
    let m = s.matrix();
    for i in 0..2 {
        for k in 0..3 {
            for j in 0..2 {
                for l in 0..3 {
                    // <ik| ρ^{T_b} |jl> = <il| ρ |jk>
                    assert_eq!(pt[(i * 3 + k, j * 3 + l)], m[(i * 3 + l, j * 3 + k)]);
                }
            }
        }
    }
}

#[test]
fn werner_negativity_closed_form() {
    let cut = Partition::cut(&["a"], &["b"]).unwrap();
    for k in 0..=20 {
        let p = k as f64 / 20.0;
        let expect = ((3.0 * p - 1.0) / 4.0).max(0.0);
        assert!((negativity(&werner(p), &cut).unwrap() - expect).abs() < 1e-12, "p = {p}");
    }
}

#[test]
fn werner_discord_closed_form() {
    let f = |x: f64| if x > 0.0 { x * x.log2() } else { 0.0 };
    for p in [0.1, 0.35, 0.6, 0.9] {
        let expect = 0.25 * (f(1.0 - p) - 2.0 * f(1.0 + p) + f(1.0 + 3.0 * p));
        let got = discord_one_sided(&werner(p), &["a"], &OptBudget::default().with_restarts(8)).unwrap();
        assert!((got.value - expect).abs() < 1e-6, "p = {p}: {} vs {expect}", got.value);
    }
}

#[test]
fn geometric_discord_matches_numerical_minimization() {
    let rho = build_rho_rsp();
    assert!((geometric_discord_numeric(&rho) - 0.0625).abs() < 1e-4);
    for seed in 0..4 {
        let s = random_mixed_state(layout(&[("a", 2), ("b", 2)]), &mut rng(seed)).unwrap();
        let closed = geometric_discord(&s).unwrap();
        let numeric = geometric_discord_numeric(&s);
        assert!((closed - numeric).abs() < 1e-4, "seed {seed}: {closed} vs {numeric}");
    }
}

#[test]
fn separable_state_with_biased_marginal_exceeds_rsp_discord() {
    // (|0><0| ⊗ |0><0| + |+><+| ⊗ |1><1|) / 2: x = (1/2, 0, 1/2), y = 0.
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let zero = DensityMatrix::pure(layout(&[("a", 2)]), &[C1, Complex64::default()]).unwrap();
    let plus = DensityMatrix::pure(layout(&[("a", 2)]), &[C1 * s, C1 * s]).unwrap();
    let b0 = DensityMatrix::pure(layout(&[("b", 2)]), &[C1, Complex64::default()]).unwrap();
    let b1 = DensityMatrix::pure(layout(&[("b", 2)]), &[Complex64::default(), C1]).unwrap();
    let dec = SeparableDecomposition::from_triples(vec![(0.5, zero, b0), (0.5, plus, b1)]).unwrap();
    let st = assemble_separable(&dec).unwrap();
    let gd = geometric_discord(&st).unwrap();
    assert!((gd - 0.125).abs() < 1e-12);
    assert!((geometric_discord_numeric(&st) - 0.125).abs() < 1e-4);
    assert!(rsp_payoff(&st).unwrap() < 1e-15);
}

/// `I^Φ` of Φ+ measured along Bloch directions `na`, `nb`, by explicit projectors.
fn measured_mi_bell(na: (f64, f64), nb: (f64, f64)) -> f64 {
    let proj = |(t, f): (f64, f64), up: bool| {
        let v = if up {
            [Complex64::new((t / 2.0).cos(), 0.0), Complex64::from_polar((t / 2.0).sin(), f)]
        } else {
            [Complex64::new(-(t / 2.0).sin(), 0.0), Complex64::from_polar((t / 2.0).cos(), f)]
        };
        ComplexMatrix::from_fn(2, 2, |i, j| v[i] * v[j].conj())
    };
    let rho = bell();
    let mut p = [[0.0; 2]; 2];
    for (i, ua) in [true, false].into_iter().enumerate() {
        for (j, ub) in [true, false].into_iter().enumerate() {
            p[i][j] = trace(&(rho.matrix() * proj(na, ua).kronecker(&proj(nb, ub)))).re;
        }
    }
    let h = |xs: &[f64]| xs.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum::<f64>();
    let pa = [p[0][0] + p[0][1], p[1][0] + p[1][1]];
    let pb = [p[0][0] + p[1][0], p[0][1] + p[1][1]];
    h(&pa) + h(&pb) - h(&[p[0][0], p[0][1], p[1][0], p[1][1]])
}

#[test]
fn bell_gqd_matches_angle_sweep() {
    let n = 24;
    let mut best = 0.0f64;
    for i in 0..=n {
        for j in 0..n {
            for k in 0..=n {
                for l in 0..n {
                    let a = (std::f64::consts::PI * i as f64 / n as f64, 2.0 * std::f64::consts::PI * j as f64 / n as f64);
                    let b = (std::f64::consts::PI * k as f64 / n as f64, 2.0 * std::f64::consts::PI * l as f64 / n as f64);
                    best = best.max(measured_mi_bell(a, b));
                }
            }
        }
    }
    let sweep = 2.0 - best;
    let got = gqd(&bell(), &Partition::cut(&["a"], &["b"]).unwrap(), &OptBudget::default().with_restarts(8)).unwrap();
    assert!((sweep - 1.0).abs() < 1e-9);
    assert!((got.value - sweep).abs() < 1e-4, "{} vs {sweep}", got.value);
}

#[test]
fn haar_sampler_moments() {
    let d = 3;
    let n = 20_000;
    let mut r = rng(99);
    let (mut m2, mut m4, mut tr2) = (0.0, 0.0, 0.0);
    let mut mean = Complex64::default();
    for _ in 0..n {
        let u = random_unitary(d, &mut r).unwrap();
        let a = u[(0, 0)].norm_sqr();
        m2 += a;
        m4 += a * a;
        mean += u[(1, 2)];
        tr2 += trace(&u).norm_sqr();
    }
    let nf = n as f64;
    assert!((m2 / nf - 1.0 / d as f64).abs() < 0.01);
    assert!((m4 / nf - 2.0 / (d * (d + 1)) as f64).abs() < 0.01);
    assert!((mean / nf).norm() < 0.02);
    assert!((tr2 / nf - 1.0).abs() < 0.05);
}

#[test]
fn rsp_extension_spectra() {
    // each extension is a uniform mixture of orthogonal pure product states
    for (v, terms) in RspVariant::ALL.into_iter().zip([3.0f64, 4.0, 4.0]) {
        let ext = build_rsp_extension(v).state;
        let expect = (ext.dim() as f64).log2() - terms.log2();
        assert!((extractable_work(&ext).unwrap() - expect).abs() < 1e-12, "{v}");
        let ev = eigvals_hermitian(ext.matrix()).unwrap();
        let support = ev.iter().filter(|&&l| l > 1e-12).count();
        assert_eq!(support as f64, terms);
    }
}

#[test]
fn rsp_reduction_payoff_is_preserved() {
    let target = rsp_payoff(&build_rho_rsp()).unwrap();
    for v in RspVariant::ALL {
        let red = partial_trace(&build_rsp_extension(v).state, &[labels::ABAR, labels::BBAR]).unwrap();
        assert!((rsp_payoff(&red).unwrap() - target).abs() < 1e-12);
    }
    // a literal ensemble is only locally equivalent, and keeps the payoff too
    let lit = assemble_separable(&rsp_three_term_literal()).unwrap();
    assert!((rsp_payoff(&lit).unwrap() - target).abs() < 1e-12);
}
