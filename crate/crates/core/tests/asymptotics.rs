use std::f64::consts::PI;

use nnls_spectra::asymptotics::*;
use nnls_spectra::cauchy::{
    compute_delta, compute_nu, default_k0_tilde, CutSide, DeltaEvaluator, Pole,
};
use nnls_spectra::gamma::gamma;
use nnls_spectra::quad::{integrate, QuadOptions};
use nnls_spectra::scattering::ScatteringData;
use nnls_spectra::spectrum::{step_spectral_functions, SpectrumReport};
use nnls_spectra::{Error, StepParams, C64};
use proptest::prelude::*;

fn fixture(a: f64, b: f64, r: f64) -> (ScatteringData, SpectrumReport) {
    let p = StepParams::new(a, b, r).unwrap();
    (
        step_spectral_functions(p),
        SpectrumReport::for_step(p).unwrap(),
    )
}

fn term_on_ray(xi: f64, t: f64, d: &ScatteringData, rep: &SpectrumReport) -> AsymptoticTerm {
    let s = classify_ray(xi, rep).unwrap();
    leading_term(4.0 * xi * t, t, &s, d, rep).unwrap()
}

#[test]
fn phase_and_stationary_point() {
    for xi in [-1.3, 0.0, 0.4, 2.0] {
        assert_eq!(phase_theta(C64::new(0.0, 0.0), xi), C64::new(0.0, 0.0));
        assert!(
            (phase_theta(C64::new(-xi, 0.0), xi) - C64::new(-2.0 * xi * xi, 0.0)).norm() < 1e-15
        );
        let h = 1e-5;
        let k = C64::new(-xi, 0.0);
        let d = (phase_theta(k + h, xi) - phase_theta(k - h, xi)) / (2.0 * h);
        assert!(d.norm() <= 1e-9);
    }
}

#[test]
fn rays_for_negative_wavenumber() {
    let (_, rep) = fixture(2.0, -0.5, 0.2);
    assert_eq!(
        classify_ray(1.0, &rep).unwrap().label,
        SectorLabel::PlaneWaveRight
    );
    assert_eq!(
        classify_ray(-1.0, &rep).unwrap().label,
        SectorLabel::ZmDecayLeft
    );
    assert_eq!(
        classify_ray(0.2, &rep).unwrap().label,
        SectorLabel::PeriodicMid
    );
    let (_, rep) = fixture(1.0, 1.0, 0.2);
    assert_eq!(
        classify_ray(0.2, &rep).unwrap().label,
        SectorLabel::ZmDecayMid
    );
}

#[test]
fn boundary_rays_are_refused_with_neighbours() {
    let (_, rep) = fixture(2.0, -0.5, 0.2);
    for (xi, below, above) in [
        (-0.5, "ZM_decay_left", "periodic_mid"),
        (0.5, "periodic_mid", "plane_wave_right"),
        (0.0, "periodic_mid", "periodic_mid"),
    ] {
        match classify_ray(xi, &rep) {
            Err(Error::BoundaryRay {
                below: b, above: a, ..
            }) => {
                assert_eq!((b.as_str(), a.as_str()), (below, above), "xi = {xi}");
            }
            other => panic!("xi = {xi}: {other:?}"),
        }
    }
    // ξ = 0 is an ordinary ray in Case II
    let (_, rep) = fixture(1.0, -1.0, 0.2);
    assert_eq!(
        classify_ray(0.0, &rep).unwrap().label,
        SectorLabel::PeriodicMid
    );
}

#[test]
fn winding_sectors_alternate() {
    // n = 1: ω₁ ≈ −2.618, Re p₁ ≈ −3.05
    let (_, rep) = fixture(10.0, 0.5, 0.3);
    assert_eq!(rep.n, 1);
    let w = rep.omegas[0];
    let p = rep.pairs[0].re;
    let expect = [
        (p - 1.0, WindingKind::DecayLeft, 0),
        (0.5 * (p + w), WindingKind::InversePlaneWave, 0),
        (0.5 * (w - 0.5), WindingKind::DecayLeft, 1),
        (0.2, WindingKind::MiddleDecay, 1),
        (0.5 * (0.5 - w), WindingKind::PlaneWave, 1),
        (0.5 * (-w - p), WindingKind::DecayRight, 0),
        (-p + 1.0, WindingKind::PlaneWave, 0),
    ];
    let rays = boundary_rays(&rep);
    for (xi, kind, m) in expect {
        let s = classify_ray(xi, &rep).unwrap();
        assert_eq!((s.label, s.m), (SectorLabel::Winding(kind), m), "xi = {xi}");
        for end in [s.lower, s.upper].into_iter().flatten() {
            assert!(rays.contains(&end), "{end} is not a boundary ray");
        }
    }
}

#[test]
fn plane_wave_modulus_is_twice_delta_squared() {
    let (d, rep) = fixture(2.0, -0.5, 0.2);
    let term = term_on_ray(1.0, 30.0, &d, &rep);
    let delta = compute_delta(&d, 1.0, C64::new(0.5, 0.0)).unwrap();
    assert!((term.value.norm() - 2.0 * delta.norm_sqr()).abs() < 1e-12);
    assert_eq!(term.formula_id, FormulaId::PlaneWave);
    // the modulus does not depend on t along the ray
    let later = term_on_ray(1.0, 300.0, &d, &rep);
    assert!((later.value.norm() - term.value.norm()).abs() < 1e-12);
}

#[test]
fn periodic_modulus_has_period_pi_over_two_b() {
    let (d, rep) = fixture(2.0, -0.5, 0.2);
    let s = classify_ray(0.2, &rep).unwrap();
    let f = RayFormula::prepare(0.2, s, &d, &rep).unwrap();
    let period = PI / (2.0 * 0.5);
    let t = 30.0;
    let mut seen_variation = false;
    for j in 0..12 {
        let x = 24.0 + 0.27 * j as f64;
        let (Ok(a), Ok(b)) = (f.eval_at(x, t), f.eval_at(x + period, t)) else {
            continue;
        };
        assert!((a.value.norm() - b.value.norm()).abs() < 1e-12 * a.value.norm());
        if let Ok(c) = f.eval_at(x + 0.5 * period, t) {
            seen_variation |= (c.value.norm() - a.value.norm()).abs() > 1e-3;
        }
    }
    assert!(seen_variation);
}

#[test]
fn decay_scaling_along_the_left_ray() {
    let (d, rep) = fixture(2.0, -0.5, 0.2);
    let xi = -1.0;
    let nu = compute_nu(&d, -xi).unwrap();
    let alpha = zakharov_manakov_amplitude(xi, Amplitude::Left, &d).unwrap();
    for t in [5.0, 30.0, 400.0] {
        let q = term_on_ray(xi, t, &d, &rep).value;
        let scaled = q.norm() * t.powf(0.5 + nu.im);
        assert!(
            (scaled - alpha.norm()).abs() < 1e-12 * alpha.norm(),
            "t = {t}"
        );
    }
}

#[test]
fn gamma_matches_the_reflection_formula_on_the_imaginary_axis() {
    for nu in [0.05, 0.3, 1.0, 2.2, 4.0] {
        let g = gamma(C64::new(0.0, -nu)).unwrap();
        let expect = PI / (nu * (PI * nu).sinh());
        assert!((g.norm_sqr() - expect).abs() <= 1e-10 * expect, "nu = {nu}");
    }
}

#[test]
fn amplitude_refuses_vanishing_reflection() {
    let d = step_spectral_functions(StepParams::new(0.0, 1.0, 0.2).unwrap());
    assert!(matches!(
        zakharov_manakov_amplitude(-2.0, Amplitude::Left, &d),
        Err(Error::VanishingReflection(_))
    ));
    assert!(matches!(
        zakharov_manakov_amplitude(0.3, Amplitude::Middle, &d),
        Err(Error::VanishingReflection(_))
    ));
}

#[test]
fn left_amplitude_from_an_independent_chi() {
    let (d, _) = fixture(1.0, 1.0, 0.2);
    let xi = -2.0;
    let alpha = zakharov_manakov_amplitude(xi, Amplitude::Left, &d).unwrap();
    assert!(alpha.is_finite() && alpha.norm() > 0.0);
    // χ(ξ, −ξ) = (1/2πi)∫_{−∞}^{ξ} log(ξ − ζ)·(a₁a₂)'/(a₁a₂) dζ, integrated directly
    let dl = |z: f64| d.log_derivative_a1a2(z).unwrap();
    let opts = QuadOptions {
        abs_tol: 1e-12,
        rel_tol: 1e-12,
        max_intervals: 200_000,
    };
    let body = integrate(
        |z| C64::new((xi - z).ln(), 0.0) * dl(z),
        -1e4,
        xi,
        &[-1000.0, -100.0, -10.0, xi - 1.0],
        &opts,
    )
    .unwrap()
    .value;
    let chi = body / C64::new(0.0, 2.0 * PI);
    let ev = DeltaEvaluator::delta(&d, -xi).unwrap();
    let chi_ev = ev.chi_at_stationary_point(CutSide::Minus).unwrap();
    assert!((chi - chi_ev).norm() < 1e-7, "{chi} vs {chi_ev}");
    let nub = ev.nu().value().conj();
    let i = C64::new(0.0, 1.0);
    let r2 = d.reflection().r2(xi).unwrap();
    let e = -PI / 2.0 * nub + i * PI / 4.0 - 2.0 * chi.conj() - 3.0 * i * nub * 2f64.ln();
    let oracle = PI.sqrt() * e.exp() / (r2.conj() * gamma(-i * nub).unwrap());
    assert!((oracle - alpha).norm() < 1e-6 * alpha.norm());
}

#[test]
fn middle_amplitude_does_not_depend_on_k0_tilde() {
    let (d, _) = fixture(1.0, 1.0, 0.2);
    for xi in [-0.4, 0.0, 0.3] {
        let c = |k0t| {
            DeltaEvaluator::hat(&d, xi, Pole::for_wavenumber(1.0), k0t)
                .unwrap()
                .chi_at_stationary_point(CutSide::Minus)
                .unwrap()
        };
        let (u, v) = (c(default_k0_tilde(1.0)), c(C64::new(0.7, 3.0)));
        assert!((u - v).norm() < 1e-8, "xi = {xi}: {u} vs {v}");
    }
    let alpha = zakharov_manakov_amplitude(0.3, Amplitude::Middle, &d).unwrap();
    assert!(alpha.is_finite() && alpha.norm() > 0.0);
}

#[test]
fn model_solution_without_coupling_is_the_identity() {
    let m = model_rh_solution(-0.5, C64::new(0.0, 0.0), C64::new(0.0, 0.0)).unwrap();
    assert_eq!(
        m.coeffs,
        [
            C64::new(0.5, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(-0.5, 0.0)
        ]
    );
    let k = C64::new(0.3, 1.1);
    let mat = m.matrix(k);
    assert!((mat[0][0] - 1.0).norm() < 1e-15 && (mat[1][1] - 1.0).norm() < 1e-15);
    assert_eq!(mat[0][1], C64::new(0.0, 0.0));
    assert_eq!(m.potential(), C64::new(0.0, 0.0));
}

#[test]
fn model_solution_refuses_the_blow_up_locus() {
    // c₁c₂ = −4B²
    let r = model_rh_solution(-0.5, C64::new(1.0, 0.0), C64::new(-1.0, 0.0));
    assert!(matches!(r, Err(Error::NearSingular(_))));
}

#[test]
fn model_potential_reproduces_the_periodic_formula_without_an_imaginary_zero() {
    let (d, rep) = fixture(1.0, -1.0, 0.2);
    let t = 20.0;
    for x in [-12.0, -3.0, 0.0, 5.0, 17.0] {
        let (c1, c2) = model_coefficients(&d, x, t).unwrap();
        let m = model_rh_solution(-1.0, c1, c2).unwrap();
        let (r1, r2) = m.residue_defects();
        assert!(r1 <= 1e-10 && r2 <= 1e-10);
        let s = classify_ray(x / (4.0 * t), &rep).unwrap();
        let q = leading_term(x, t, &s, &d, &rep).unwrap().value;
        assert!((m.potential() - q).norm() <= 1e-8 * q.norm(), "x = {x}");
    }
}

#[test]
fn a3_is_minus_conjugate_a2_at_the_mirrored_point() {
    let (d, _) = fixture(1.0, -1.0, 0.2);
    for x in [1.0, 4.0, 9.0] {
        let (minus_sign, plus_sign) = reflection_residuals(&d, x, 20.0).unwrap();
        // A₃(x) = −conj(A₂(−x)) holds, the other sign does not
        assert!(plus_sign <= 1e-7, "x = {x}: {plus_sign}");
        assert!(minus_sign > 0.1, "x = {x}: {minus_sign}");
    }
}

#[test]
fn sectors_match_across_the_origin_in_case_one() {
    for (a, b) in [(2.0, -0.5), (2.0, 0.5)] {
        let (d, rep) = fixture(a, b, 0.2);
        let f =
            |xi: f64| RayFormula::prepare(xi, classify_ray(xi, &rep).unwrap(), &d, &rep).unwrap();
        let (left, right) = (f(-1e-3), f(1e-3));
        for (x, t) in [(0.0, 10.0), (1.3, 25.0)] {
            let (u, v) = (
                left.eval_at(x, t).unwrap().value,
                right.eval_at(x, t).unwrap().value,
            );
            assert!((u - v).norm() <= 1e-2 * v.norm(), "B = {b}: {u} vs {v}");
        }
    }
}

#[test]
fn winding_plane_wave_with_m_zero_is_the_plain_plane_wave() {
    let (d, rep) = fixture(10.0, 0.5, 0.3);
    let xi = 4.0;
    let s = classify_ray(xi, &rep).unwrap();
    assert_eq!(
        (s.label, s.m),
        (SectorLabel::Winding(WindingKind::PlaneWave), 0)
    );
    let plain = RaySector {
        label: SectorLabel::PlaneWaveRight,
        m: 0,
        lower: Some(0.5),
        upper: None,
    };
    let (x, t) = (4.0 * xi * 10.0, 10.0);
    let u = leading_term(x, t, &s, &d, &rep).unwrap();
    let v = leading_term(x, t, &plain, &d, &rep).unwrap();
    assert_eq!(u.value, v.value);
}

#[test]
fn middle_periodic_with_no_winding_is_the_periodic_formula() {
    let (d, rep) = fixture(1.0, -1.0, 0.2);
    let s = classify_ray(0.3, &rep).unwrap();
    let wound = RaySector {
        label: SectorLabel::Winding(WindingKind::MiddlePeriodic),
        ..s
    };
    let (x, t) = (12.0, 10.0);
    let u = leading_term(x, t, &s, &d, &rep).unwrap();
    let v = leading_term(x, t, &wound, &d, &rep).unwrap();
    assert_eq!(u.value, v.value);
    assert_eq!(v.formula_id, FormulaId::WindingPeriodic);
}

#[test]
fn sweep_csv_round_trips() {
    let (d, rep) = fixture(2.0, -0.5, 0.2);
    let points: Vec<(f64, f64)> = [-1.0, -0.2, 0.2, 1.0]
        .iter()
        .map(|&xi| (4.0 * xi * 12.0, 12.0))
        .collect();
    let rows: Vec<SweepRow> = sweep(&points, &d, &rep)
        .into_iter()
        .map(Result::unwrap)
        .collect();
    let mut buf = Vec::new();
    write_sweep_csv(&rows, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("x,t,xi,sector,re_q,im_q,abs_q,error_exponent\n"));
    let back: Vec<SweepRow> = csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .map(Result::unwrap)
        .collect();
    assert_eq!(back, rows);
}

#[test]
fn remainder_exponents_are_negative_on_a_dense_ray_scan() {
    for (a, b, r) in [(10.0, 0.5, 0.3), (10.0, -0.5, 0.3), (20.0, 0.5, 0.5)] {
        let (d, rep) = fixture(a, b, r);
        let bounds = boundary_rays(&rep);
        let mut seen_inverse = false;
        for j in 0..=800 {
            let xi = -8.0 + 16.0 * j as f64 / 800.0;
            if bounds.iter().any(|&z| (xi - z).abs() < 1e-3) {
                continue;
            }
            let s = classify_ray(xi, &rep).unwrap();
            seen_inverse |= s.label == SectorLabel::Winding(WindingKind::InversePlaneWave);
            let e = RayFormula::prepare(xi, s, &d, &rep)
                .unwrap()
                .eval_at(4.0 * xi * 10.0, 10.0)
                .unwrap();
            assert!(
                e.error_exponent < 0.0,
                "({a}, {b}, {r}) xi = {xi}, {}: {}",
                s.label,
                e.error_exponent
            );
        }
        assert!(seen_inverse);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn remainders_decay_in_every_sector(xi in -4.0f64..4.0, which in 0usize..3) {
        let (a, b, r) = [(2.0, -0.5, 0.2), (1.0, 1.0, 0.2), (10.0, 0.5, 0.3)][which];
        let (d, rep) = fixture(a, b, r);
        prop_assume!(boundary_rays(&rep).iter().all(|&z| (xi - z).abs() > 1e-2));
        let term = term_on_ray(xi, 10.0, &d, &rep);
        prop_assert!(term.error_exponent < 0.0, "xi = {}: {}", xi, term.error_exponent);
    }

    #[test]
    fn model_residue_conditions_hold(re1 in -2.0f64..2.0, im1 in -2.0f64..2.0, re2 in -2.0f64..2.0, im2 in -2.0f64..2.0, b in 0.3f64..2.0) {
        let (c1, c2) = (C64::new(re1, im1), C64::new(re2, im2));
        prop_assume!((4.0 * b * b + c1 * c2).norm() > 0.05 * 4.0 * b * b);
        let m = model_rh_solution(-b, c1, c2).unwrap();
        let (d1, d2) = m.residue_defects();
        prop_assert!(d1 <= 1e-10 && d2 <= 1e-10);
    }
}
