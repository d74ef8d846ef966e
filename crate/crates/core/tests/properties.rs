use std::f64::consts::PI;

use nctorus_core::existence::{relation_search, IntegerMatrix2, SearchBounds};
use nctorus_core::matrix_rep::{max_abs, ClockShiftRep};
use nctorus_core::su2::{closed_form_unchecked, EulerPoint, HaarGrid};
use nctorus_core::symbolic::{Derivation, ExactPoly, NCPoly, TorusMorphism};
use nctorus_core::thermo::{extremize, ActionTable, ExtremizeOptions};
use num_complex::Complex64;
use proptest::prelude::*;

const TOL: f64 = 1e-12;

fn poly_strategy(theta: f64) -> impl Strategy<Value = NCPoly> {
    prop::collection::vec(((-3i64..=3, -3i64..=3), -1.0f64..1.0, -1.0f64..1.0), 0..5).prop_map(
        move |terms| {
            NCPoly::from_terms(
                theta,
                terms
                    .into_iter()
                    .map(|(k, re, im)| (k, Complex64::new(re, im))),
            )
            .unwrap()
        },
    )
}

fn theta_strategy() -> impl Strategy<Value = f64> {
    0.01f64..0.99
}

fn with_polys(n: usize) -> impl Strategy<Value = (f64, Vec<NCPoly>)> {
    theta_strategy().prop_flat_map(move |t| (Just(t), prop::collection::vec(poly_strategy(t), n)))
}

fn derivation() -> impl Strategy<Value = Derivation> {
    prop_oneof![Just(Derivation::First), Just(Derivation::Second)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn product_is_associative((_, p) in with_polys(3)) {
        let left = p[0].normal_product(&p[1]).unwrap().normal_product(&p[2]).unwrap();
        let right = p[0].normal_product(&p[1].normal_product(&p[2]).unwrap()).unwrap();
        prop_assert!(left.approx_eq(&right, TOL));
    }

    #[test]
    fn exact_product_is_associative((_, p) in with_polys(3)) {
        let e: Vec<ExactPoly> = p.iter().map(|x| x.to_exact()).collect();
        let left = e[0].normal_product(&e[1]).unwrap().normal_product(&e[2]).unwrap();
        let right = e[0].normal_product(&e[1].normal_product(&e[2]).unwrap()).unwrap();
        prop_assert!(left.approx_eq(&right, TOL));
    }

    #[test]
    fn adjoint_is_an_involution((_, p) in with_polys(2)) {
        prop_assert!(p[0].adjoint().adjoint().approx_eq(&p[0], TOL));
        let lhs = p[0].normal_product(&p[1]).unwrap().adjoint();
        let rhs = p[1].adjoint().normal_product(&p[0].adjoint()).unwrap();
        prop_assert!(lhs.approx_eq(&rhs, TOL));
    }

    #[test]
    fn trace_is_cyclic((_, p) in with_polys(2)) {
        let ab = p[0].normal_product(&p[1]).unwrap().trace();
        let ba = p[1].normal_product(&p[0]).unwrap().trace();
        prop_assert!((ab - ba).norm() <= TOL);
    }

    #[test]
    fn trace_is_positive((_, p) in with_polys(1)) {
        let t = p[0].adjoint().normal_product(&p[0]).unwrap().trace();
        prop_assert!(t.re >= 0.0 && t.im.abs() <= TOL);
    }

    #[test]
    fn leibniz_rule((_, p) in with_polys(2), j in derivation()) {
        let (a, b) = (&p[0], &p[1]);
        let lhs = a.normal_product(b).unwrap().derivation(j);
        let rhs = a.derivation(j).normal_product(b).unwrap()
            .add(&a.normal_product(&b.derivation(j)).unwrap()).unwrap();
        prop_assert!(lhs.approx_eq(&rhs, 1e-11));
    }

    #[test]
    fn derivations_commute_with_adjoint((_, p) in with_polys(1), j in derivation()) {
        let lhs = p[0].adjoint().derivation(j);
        let rhs = p[0].derivation(j).adjoint();
        prop_assert!(lhs.approx_eq(&rhs, TOL));
    }

    #[test]
    fn integration_by_parts((_, p) in with_polys(2), j in derivation()) {
        let (a, b) = (&p[0], &p[1]);
        let lhs = a.derivation(j).normal_product(b).unwrap().trace();
        let rhs = a.normal_product(&b.derivation(j)).unwrap().trace();
        prop_assert!((lhs + rhs).norm() <= 1e-11);
    }

    #[test]
    fn trace_kills_derivatives((_, p) in with_polys(1), j in derivation()) {
        prop_assert_eq!(p[0].derivation(j).trace(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn mobius_composition(
        k in (-5i64..=5, -5i64..=5, -5i64..=5, -5i64..=5),
        l in (-5i64..=5, -5i64..=5, -5i64..=5, -5i64..=5),
        theta in 0.01f64..0.99,
    ) {
        let (Ok(k), Ok(l)) = (IntegerMatrix2::new(k.0, k.1, k.2, k.3), IntegerMatrix2::new(l.0, l.1, l.2, l.3)) else {
            return Ok(());
        };
        let (Ok(inner), Ok(direct)) = (l.act(theta), (k * l).act(theta)) else { return Ok(()); };
        let Ok(nested) = k.act(inner) else { return Ok(()); };
        prop_assert!((nested - direct).abs() <= 1e-10 * direct.abs().max(1.0));
    }

    #[test]
    fn relation_search_is_sound_and_complete(
        big in 0.01f64..0.99,
        theta in 0.01f64..0.99,
        tol in prop_oneof![Just(1e-9), Just(1e-2), Just(0.3)],
    ) {
        let b = SearchBounds { n_max: 4, c_max: 4, d_max: 6 };
        let hits = relation_search(big, theta, b, tol).unwrap();
        for h in &hits {
            let res = (h.n as f64 * big - h.c as f64 * theta - h.d as f64).abs();
            prop_assert!(res < tol);
            prop_assert_eq!(res, h.residual);
        }
        let mut brute = Vec::new();
        for n in 1..=b.n_max {
            for c in -b.c_max..=b.c_max {
                if c == 0 { continue; }
                for d in -b.d_max..=b.d_max {
                    if (n as f64 * big - c as f64 * theta - d as f64).abs() < tol {
                        brute.push((n, c, d));
                    }
                }
            }
        }
        let mut found: Vec<_> = hits.iter().map(|h| (h.n, h.c, h.d)).collect();
        found.sort();
        brute.sort();
        prop_assert_eq!(found, brute);
        prop_assert!(hits.windows(2).all(|w| w[0].residual <= w[1].residual));
    }

    #[test]
    fn conjugation_action_is_gauge_invariant(
        phi in 0.0f64..2.0 * PI, theta in 0.0f64..PI, psi in 0.0f64..4.0 * PI, lambda in 0.0f64..2.0 * PI,
    ) {
        let rep = ClockShiftRep::new(2, 1.0).unwrap();
        let w = EulerPoint::new(phi, theta, psi).unwrap().matrix();
        let phased = &w * Complex64::from_polar(1.0, lambda);
        let a = rep.conj_action(&w).unwrap();
        let b = rep.conj_action(&phased).unwrap();
        prop_assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn closed_form_within_extremal_band(
        phi in 0.0f64..2.0 * PI, theta in 0.0f64..PI, psi in 0.0f64..4.0 * PI, r in 0.3f64..3.0,
    ) {
        let s = closed_form_unchecked(phi, theta, psi, r);
        prop_assert!(s >= 4.0 / (r * r) - 1e-9 && s <= 6.0 / (r * r) + 1e-9);
    }
}

#[test]
fn monomials_are_unitary() {
    let theta = 0.618_033_988_749_895;
    for m in -5..=5 {
        for n in -5..=5 {
            let w = ExactPoly::word(theta, m, n).unwrap();
            assert_eq!(
                w.adjoint().normal_product(&w).unwrap(),
                ExactPoly::one(theta).unwrap()
            );
            let f = NCPoly::<Complex64>::word(theta, m, n).unwrap();
            assert!(f
                .adjoint()
                .normal_product(&f)
                .unwrap()
                .approx_eq(&NCPoly::one(theta).unwrap(), TOL));
        }
    }
}

#[test]
fn sl2_action_formula() {
    let theta = 0.414_213_562_373_095;
    let mut count = 0;
    for p in -5i64..=5 {
        for q in -5i64..=5 {
            for r in -5i64..=5 {
                for s in -5i64..=5 {
                    if p * s - q * r != 1 {
                        continue;
                    }
                    count += 1;
                    let phi = TorusMorphism::<Complex64>::from_matrix(theta, p, q, r, s).unwrap();
                    let expected = 4.0 * PI * PI * (p * p + q * q + r * r + s * s) as f64;
                    let got = phi.action().unwrap();
                    assert!((got - expected).abs() <= 1e-12 * expected);
                    assert_eq!(phi.is_well_defined(1e-12), Some(true));
                }
            }
        }
    }
    assert!(count > 100);
}

#[test]
fn representation_invariants() {
    for n in 2..=16 {
        for r in [0.5, 1.0, 2.0] {
            let rep = ClockShiftRep::new(n, r).unwrap();
            let id = rep.identity();
            let (u, v) = (rep.u(), rep.v());
            assert!(max_abs(&(u * v - v * u * rep.q())) <= 1e-12);
            let un = (0..n).fold(id.clone(), |acc, _| acc * u);
            let vn = (0..n).fold(id.clone(), |acc, _| acc * v);
            assert!(max_abs(&(un - &id)) <= 1e-12);
            assert!(max_abs(&(vn - &id)) <= 1e-12);
            assert!(max_abs(&(rep.x() - rep.x().adjoint())) <= 1e-12);
            assert!(max_abs(&(rep.y() - rep.y().adjoint())) <= 1e-12);
            for proj in [rep.proj_p(), rep.proj_q()] {
                assert!(max_abs(&(proj * proj - proj)) <= 1e-12);
                assert!(max_abs(&(proj - proj.adjoint())) <= 1e-12);
                assert!((proj.trace() - Complex64::new(1.0, 0.0)).norm() <= 1e-12);
            }
            let f = rep.fourier();
            assert!(max_abs(&(f.adjoint() * f - &id)) <= 1e-12);
            let diag = f.adjoint() * v * f;
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        assert!(diag[(i, j)].norm() <= 1e-12);
                    }
                }
            }
            let kr = Complex64::new(rep.k() / r, 0.0);
            let nn = Complex64::new(n as f64, 0.0);
            let xv = rep.x() * v - v * rep.x();
            assert!(max_abs(&(xv - v * (&id - rep.proj_p() * nn) * kr)) <= 1e-12);
            let yu = rep.y() * u - u * rep.y();
            assert!(max_abs(&(yu + u * (&id - rep.proj_q() * nn) * kr)) <= 1e-12);
        }
    }
}

#[test]
fn conjugation_action_ignores_derivation_signs() {
    let rep = ClockShiftRep::new(3, 1.2).unwrap();
    let w = {
        let g = EulerPoint::new(0.4, 1.1, 2.0).unwrap().matrix();
        // embed the SU(2) block in the top-left corner
        let mut full = rep.identity();
        full.view_mut((0, 0), (2, 2)).copy_from(&g);
        full
    };
    let s = rep.conj_action(&w).unwrap();
    let mut flipped = 0.0;
    for gen in [rep.u(), rep.v()] {
        let image = &w * gen * w.adjoint();
        for k in Derivation::ALL {
            let d = -rep.derivation(k, &image).unwrap();
            flipped += (d.adjoint() * &d).trace().re;
        }
    }
    assert!((s - flipped).abs() <= 1e-12 * s);
}

type Harmonic = fn(&EulerPoint) -> f64;

#[test]
fn haar_grid_integrates_low_degree_harmonics() {
    let g = HaarGrid::cube(16).unwrap();
    // ∫ cos²θ dμ = 1/3, ∫ cos(2φ) dμ = 0, ∫ cos²ψ dμ = 1/2, ∫ cosθ·cosφ dμ = 0
    let cases: [(Harmonic, f64); 5] = [
        (|p| p.theta.cos().powi(2), 1.0 / 3.0),
        (|p| (2.0 * p.phi).cos(), 0.0),
        (|p| p.psi.cos().powi(2), 0.5),
        (|p| p.theta.cos() * p.phi.cos(), 0.0),
        (
            |p| (1.0 + p.theta.cos()).powi(3) * (p.phi + p.psi).cos().powi(2),
            1.0,
        ),
    ];
    for (f, exact) in cases {
        assert!((g.integrate(f) - exact).abs() <= 1e-8);
    }
}

#[test]
fn partition_sandwich_and_extrema_band() {
    let table = ActionTable::cube(16).unwrap();
    for r in [0.5, 1.0, 2.0, 4.0] {
        let z = table.partition(r).unwrap();
        assert!((-6.0 / (r * r)).exp() <= z && z <= (-4.0 / (r * r)).exp());
    }
    let e = extremize(1.0, &ExtremizeOptions::default()).unwrap();
    for p in HaarGrid::cube(6).unwrap().points() {
        let s = closed_form_unchecked(p.phi, p.theta, p.psi, 1.0);
        assert!(e.min - 1e-9 <= s && s <= e.max + 1e-9);
    }
}
