use lightcone::scalar::{rat, ratio};
use lightcone::{harmonic_dim, Rational};
use lightcone_oracle::space::{
    gram_matrix, is_positive_definite, laplacian_kernel_dim, span_dimension,
};
use lightcone_oracle::*;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn real(n: usize) -> Space {
    Space::new(&[("x", BlockKind::Real, n)])
}

fn complex(n: usize) -> Space {
    Space::new(&[("z", BlockKind::Complex, n)])
}

fn x(s: &Space, i: usize) -> MultiPoly {
    s.coord(0, i)
}

fn constant(r: Rational) -> MultiPoly {
    MultiPoly::from_param(ParamPoly::rational(r))
}

#[test]
fn laplacian_of_quadratics() {
    let s = real(3);
    let b = s.block(0);
    assert_eq!(b.laplacian(&(&x(&s, 1) * &x(&s, 1))), MultiPoly::int(2));
    assert!(b.laplacian(&(&x(&s, 1) * &x(&s, 2))).is_zero());
}

#[test]
fn complex_laplacian_uses_real_normalization() {
    // |z1|² = u² + v² has real Laplacian 4.
    let s = complex(2);
    let b = s.block(0);
    let zz = &s.coord(0, 1) * &s.conj_coord(0, 1);
    assert_eq!(b.laplacian(&zz), MultiPoly::int(4));
    assert_eq!(b.laplacian(&b.r2()), MultiPoly::int(8));
}

#[test]
fn projection_of_x1_squared() {
    let s = real(3);
    let b = s.block(0);
    let p = &x(&s, 1) * &x(&s, 1);
    let expected = &p - &b.r2().scale_rational(&ratio(1, 3));
    assert_eq!(b.harmonic_project(&p).unwrap(), expected);
    assert_eq!(b.harmonic_part(&p).unwrap(), expected);
}

#[test]
fn projection_rejects_non_biharmonic() {
    let s = real(3);
    let b = s.block(0);
    let p = x(&s, 1).pow(4);
    assert!(matches!(
        b.harmonic_project(&p),
        Err(OracleError::NotBiharmonic { .. })
    ));
}

#[test]
fn projection_rejects_inhomogeneous() {
    let s = real(3);
    let b = s.block(0);
    let p = &(&x(&s, 1) * &x(&s, 1)) + &x(&s, 2).pow(4);
    assert!(matches!(
        b.harmonic_part(&p),
        Err(OracleError::NotHomogeneous { .. })
    ));
}

#[test]
fn decomposition_of_x1_squared_by_two_routes() {
    let s = real(3);
    let b = s.block(0);
    let p = &x(&s, 1) * &x(&s, 1);
    let expected = vec![
        (&p - &b.r2().scale_rational(&ratio(1, 3)), 0),
        (constant(ratio(1, 3)), 1),
    ];
    assert_eq!(b.harmonic_decompose(&p).unwrap(), expected);
    assert_eq!(b.harmonic_decompose_top_down(&p).unwrap(), expected);
}

#[test]
fn complex_projection_denominator() {
    // z1² z̄1 in ℂ² is biharmonic but not harmonic. The real formula with
    // n = 4 gives a harmonic result; the denominator `p + deg − 1` does not.
    let s = complex(2);
    let b = s.block(0);
    let p = &(&s.coord(0, 1) * &s.coord(0, 1)) * &s.conj_coord(0, 1);
    let lap = b.laplacian(&p);
    assert!(!lap.is_zero());
    let good = b.harmonic_project(&p).unwrap();
    assert!(b.is_harmonic(&good));
    // With `Σ ∂z∂z̄ = Δ/4`: `P − r² (Δ/4) P / (p + deg − 1)`, p = 2, deg = 3.
    let shifted = &p - &(&b.r2() * &lap).scale_rational(&ratio(1, 4 * 4));
    assert!(!b.is_harmonic(&shifted));
}

proptest! {
    /// `[Δ, r²] = 4E + 2n` on monomials.
    #[test]
    fn laplacian_r2_commutator(
        n in prop::sample::select(vec![2usize, 3, 4, 8]),
        exps in prop::collection::vec(0u16..4, 8),
    ) {
        let s = real(n);
        let b = s.block(0);
        let mono: Vec<u16> = exps[..n].to_vec();
        let f = MultiPoly::term(&mono, ParamPoly::one());
        let lhs = &b.laplacian(&(&b.r2() * &f)) - &(&b.r2() * &b.laplacian(&f));
        let rhs = &b.euler(&f).scale_rational(&rat(4)) + &f.scale_rational(&rat(2 * n as i64));
        prop_assert_eq!(lhs, rhs);
    }

    /// Both decomposition routes agree and reassemble the input.
    #[test]
    fn decomposition_routes_agree(
        n in 2usize..5,
        coeffs in prop::collection::vec(-3i64..4, 1..6),
        seed in prop::collection::vec(0u16..3, 24),
    ) {
        let s = real(n);
        let b = s.block(0);
        let degree = 4u32;
        let monos = b.monomials(BlockDegree::Real(degree));
        let mut p = MultiPoly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            let m = &monos[(seed[k] as usize * 7 + k * 5) % monos.len()];
            p.add_term(m.clone(), ParamPoly::int(*c));
        }
        let up = b.harmonic_decompose(&p).unwrap();
        let down = b.harmonic_decompose_top_down(&p).unwrap();
        prop_assert_eq!(&up, &down);
        let mut sum = MultiPoly::zero();
        for (h, k) in &up {
            prop_assert!(b.is_harmonic(h));
            sum = &sum + &(h * &b.r2().pow(*k));
        }
        prop_assert_eq!(sum, p);
    }
}

/// For `n = 3`, `x1` is uniform on `[−1, 1]` over the sphere.
#[test]
fn real_sphere_moments_match_archimedes() {
    let s = real(3);
    for k in 0..=8u32 {
        let got = s.sphere_integral(&x(&s, 1).pow(k));
        let want = if k % 2 == 1 {
            Rational::zero()
        } else {
            ratio(1, k as i64 + 1)
        };
        assert_eq!(got, ParamPoly::rational(want), "k={k}");
    }
    assert_eq!(s.sphere_integral(&x(&s, 1)), ParamPoly::zero());
    assert_eq!(
        s.sphere_integral(&x(&s, 1).pow(2)),
        ParamPoly::rational(ratio(1, 3))
    );
    assert_eq!(
        s.sphere_integral(&x(&s, 1).pow(4)),
        ParamPoly::rational(ratio(1, 5))
    );
}

/// `|z1|²` on `S^{2n−1}` is Beta(1, n−1): `E|z1|^{2k} = k!(n−1)!/(n−1+k)!`.
#[test]
fn complex_sphere_moments_match_beta_law() {
    for n in 1..=4usize {
        let s = complex(n);
        let zz = &s.coord(0, 1) * &s.conj_coord(0, 1);
        for k in 0..=5u32 {
            let mut want = rat(1);
            for i in 1..=k as i64 {
                want = want * rat(i) / rat(n as i64 - 1 + i);
            }
            assert_eq!(
                s.sphere_integral(&zz.pow(k)),
                ParamPoly::rational(want),
                "n={n} k={k}"
            );
        }
        if n >= 2 {
            let off = &s.coord(0, 1) * &s.conj_coord(0, 2);
            assert!(s.sphere_integral(&off).is_zero());
        }
    }
}

#[test]
fn inner_products() {
    let s = real(3);
    let b = s.block(0);
    let one = MultiPoly::one();
    assert_eq!(s.inner_product(&one, &one), ParamPoly::one());
    assert!(s.inner_product(&x(&s, 1), &x(&s, 2)).is_zero());
    let h = &(&x(&s, 1) * &x(&s, 1)) - &b.r2().scale_rational(&ratio(1, 3));
    // ∫x1⁴ − (2/3)∫x1² + 1/9 with x1 uniform on [−1, 1].
    let want = ratio(1, 5) - ratio(2, 3) * ratio(1, 3) + ratio(1, 9);
    assert_eq!(want, ratio(4, 45));
    assert_eq!(s.inner_product(&h, &h), ParamPoly::rational(want));
}

#[test]
fn harmonics_of_different_degree_are_orthogonal() {
    let s = real(3);
    let b = s.block(0);
    let low = b.harmonic_basis(BlockDegree::Real(1)).unwrap();
    let high = b.harmonic_basis(BlockDegree::Real(3)).unwrap();
    for f in &low {
        for g in &high {
            assert!(s.inner_product(f, g).is_zero());
        }
    }
}

#[test]
fn laplacian_kernel_matches_harmonic_dimension() {
    for p in 1..=4usize {
        for m in 0..=6u32 {
            assert_eq!(
                laplacian_kernel_dim(p, m) as u128,
                harmonic_dim(p as u32, m),
                "p={p} m={m}"
            );
        }
    }
}

#[test]
fn harmonic_basis_has_the_expected_size() {
    for p in 2..=4usize {
        let s = real(p);
        for m in 0..=4u32 {
            let basis = s.block(0).harmonic_basis(BlockDegree::Real(m)).unwrap();
            assert_eq!(basis.len() as u128, harmonic_dim(p as u32, m));
            assert_eq!(span_dimension(&basis), basis.len());
        }
    }
}

#[test]
fn gram_matrices_are_positive_definite() {
    for p in 1..=3usize {
        for q in 1..=3usize {
            let s = Space::real_pair(p, q);
            for m in 0..=3u32 {
                for n in 0..=(3 - m) {
                    let h1 = s.block(0).harmonic_basis(BlockDegree::Real(m)).unwrap();
                    let h2 = s.block(1).harmonic_basis(BlockDegree::Real(n)).unwrap();
                    let basis: Vec<MultiPoly> = h1
                        .iter()
                        .flat_map(|a| h2.iter().map(move |b| a * b))
                        .collect();
                    if basis.is_empty() {
                        continue;
                    }
                    let g = gram_matrix(&s, &basis);
                    assert!(is_positive_definite(&g), "p={p} q={q} m={m} n={n}");
                }
            }
        }
    }
}

#[test]
fn positive_definiteness_detects_indefinite_matrices() {
    let g = vec![vec![rat(1), rat(2)], vec![rat(2), rat(1)]];
    assert!(!is_positive_definite(&g));
    let g = vec![vec![rat(2), rat(1)], vec![rat(1), rat(2)]];
    assert!(is_positive_definite(&g));
}
