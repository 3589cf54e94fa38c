//! Acceptance suite: every gate the workbench must clear, one test per
//! criterion, each printing a single PASS line with its measured numbers
//! (visible with `cargo test --test acceptance -- --nocapture`).

use sphere_control::experiments::{cmd_converge, cmd_saturate, verify_manifest, ExperimentConfig};
use sphere_control::poly::{
    ad2_h0, ad3_h0, grad_inner, int, rat, Monomial, SpherePolynomial,
};
use sphere_control::propagator::convergence::{convergence_study, geometric_deltas};
use sphere_control::propagator::{
    bch_matrix_check, execute_plan, fidelity, transfer_experiment, KickMode, Propagator,
    TransferMode,
};
use sphere_control::saturation::{saturate, synthesis_plan, verify_pn_subset};
use sphere_control::spectral::{PhaseFn, WaveFunction};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pass(name: &str, detail: String) {
    println!("PASS {name}: {detail}");
}

fn x() -> SpherePolynomial {
    SpherePolynomial::x()
}
fn y() -> SpherePolynomial {
    SpherePolynomial::y()
}
fn z() -> SpherePolynomial {
    SpherePolynomial::z()
}

fn coords() -> [SpherePolynomial; 3] {
    [x(), y(), z()]
}

#[test]
fn a01_exact_identity_suite() {
    let started = Instant::now();

    // g(∇z, ∇z) = 1 − z².
    assert_eq!(grad_inner(&z(), &z()), &SpherePolynomial::one() - &(&z() * &z()));

    // Σ_j g(∇x_j, ∇x_j) = 2.
    let sum = &(&grad_inner(&x(), &x()) + &grad_inner(&y(), &y())) + &grad_inner(&z(), &z());
    assert_eq!(sum, SpherePolynomial::constant(int(2)));

    // Polarization differences 4xz, 4xy, 4yz.
    for (a, b) in [(x(), z()), (x(), y()), (y(), z())] {
        let minus = &a - &b;
        let plus = &a + &b;
        let difference = &grad_inner(&minus, &minus) - &grad_inner(&plus, &plus);
        assert_eq!(difference, (&a * &b).scale(&int(4)));
    }

    // Pure-power identity for (k, m) in {(1,2), (2,2), (2,3)}.
    for (k, m) in [(1u32, 2u32), (2, 2), (2, 3)] {
        let zk = SpherePolynomial::monomial(0, 0, k);
        let zm = SpherePolynomial::monomial(0, 0, m);
        let minus = &zk - &zm;
        let plus = &zk + &zm;
        let difference = &grad_inner(&minus, &minus) - &grad_inner(&plus, &plus);
        let factor = int(4 * (k * m) as i64);
        let expected = &SpherePolynomial::monomial(0, 0, k + m).scale(&factor)
            - &SpherePolynomial::monomial(0, 0, k + m - 2).scale(&factor);
        assert_eq!(difference, expected, "pure-power identity ({k},{m})");
    }

    // Mixed identity for (k, l, m) in {(1,1,1), (2,1,0), (2,0,1), (1,2,1)}.
    for (k, l, m) in [(1u32, 1u32, 1u32), (2, 1, 0), (2, 0, 1), (1, 2, 1)] {
        let xk = SpherePolynomial::monomial(k, 0, 0);
        let ylzm = SpherePolynomial::monomial(0, l, m);
        let minus = &xk - &ylzm;
        let plus = &xk + &ylzm;
        let difference = &grad_inner(&minus, &minus) - &grad_inner(&plus, &plus);
        let expected =
            SpherePolynomial::monomial(k, l, m).scale(&int((4 * k * (l + m)) as i64));
        assert_eq!(difference, expected, "mixed identity ({k},{l},{m})");
    }

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "identity suite took {elapsed:?}");
    pass(
        "exact identity suite",
        format!("10 identity families exact in {elapsed:?}"),
    );
}

#[test]
fn a02_polynomial_inclusion_chain() {
    let started = Instant::now();
    let mut dims_at_cap = Vec::new();
    for n in 2..=6u32 {
        let report = verify_pn_subset(n).unwrap();
        assert!(
            report.all_certified(),
            "n = {n}: {} monomials failed",
            report.failures.len()
        );
        let expected_monomials = Monomial::all_of_degree_at_most(n).len();
        assert_eq!(report.certified.len(), expected_monomials);
        // Every certificate recombines exactly (checked inside), and the
        // level-n dimension at cap n equals the full polynomial dimension
        // (n+1)² once n ≥ 2.
        let top_dim = *report.chain_dimensions.last().unwrap();
        assert_eq!(top_dim, ((n + 1) * (n + 1)) as usize);
        if n == 2 {
            assert_eq!(report.chain_dimensions, vec![3, 9], "frozen H2 dimension");
        }
        dims_at_cap.push(top_dim);
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "inclusion chain took {elapsed:?}");
    pass(
        "polynomial inclusion chain",
        format!("P_n in H_n certified for n = 2..6, top dims {dims_at_cap:?}, {elapsed:?}"),
    );
}

#[test]
fn a03_commutator_identities() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let monomials = Monomial::all_of_degree_at_most(4);
    let random_poly = |rng: &mut ChaCha8Rng| {
        let terms = rng.random_range(1..=4usize);
        let raw: Vec<((u32, u32, u32), _)> = (0..terms)
            .map(|_| {
                let m = monomials[rng.random_range(0..monomials.len())];
                let numer = loop {
                    let n = rng.random_range(-9i64..=9);
                    if n != 0 {
                        break n;
                    }
                };
                ((m.a, m.b, m.c), rat(numer, rng.random_range(1i64..=9)))
            })
            .collect();
        SpherePolynomial::from_raw_terms(raw)
    };

    for _ in 0..20 {
        let phi = random_poly(&mut rng);
        let h = random_poly(&mut rng);
        let ad2 = ad2_h0(&phi, &h);
        let expected = (&grad_inner(&phi, &phi) * &h).scale(&int(-2));
        assert_eq!(ad2, expected, "ad2 must equal -2 g(phi,phi) h");
        assert!(ad3_h0(&phi, &h).is_zero(), "ad3 must vanish");
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "commutator suite took {elapsed:?}");
    pass(
        "commutator identities",
        format!("20 seeded (phi, h) pairs of degree <= 4 exact in {elapsed:?}"),
    );
}

#[test]
fn a04_conjugated_convergence_rates() {
    // Conjugated case: φ = z, u = 0, half-order rate.
    let started = Instant::now();
    let propagator = Propagator::new(16, 2, None);
    let psi0 = WaveFunction::basis_state(16, 0, 0);
    let deltas = geometric_deltas(1e-1, 1e-4, 13);

    let record = convergence_study(&propagator, &psi0, &z(), [0.0; 3], &deltas).unwrap();
    let usable: Vec<f64> = record.usable_rows().map(|r| r.error).collect();
    assert!(
        usable.windows(2).all(|w| w[1] < w[0]),
        "errors must decrease monotonically above the truncation floor"
    );
    assert!(
        (0.35..=0.65).contains(&record.slope),
        "conjugated slope {} outside [0.35, 0.65]",
        record.slope
    );
    let elapsed_z = started.elapsed();
    assert!(elapsed_z.as_secs_f64() < 60.0);

    // Strong-pulse case: φ = 0, u = (1,0,0), first-order rate.
    let started = Instant::now();
    let record_pulse = convergence_study(
        &propagator,
        &psi0,
        &SpherePolynomial::zero(),
        [1.0, 0.0, 0.0],
        &deltas,
    )
    .unwrap();
    let usable_pulse: Vec<f64> = record_pulse.usable_rows().map(|r| r.error).collect();
    assert!(usable_pulse.windows(2).all(|w| w[1] < w[0]));
    assert!(
        (0.8..=1.2).contains(&record_pulse.slope),
        "strong-pulse slope {} outside [0.8, 1.2]",
        record_pulse.slope
    );
    let elapsed_pulse = started.elapsed();
    assert!(elapsed_pulse.as_secs_f64() < 60.0);

    pass(
        "conjugated convergence rates",
        format!(
            "slopes {:.3} (phi = z) and {:.3} (strong pulse) in {elapsed_z:?} / {elapsed_pulse:?}",
            record.slope, record_pulse.slope
        ),
    );
}

#[test]
fn a05_strong_pulse_limit() {
    let propagator = Propagator::new(16, 2, None);
    let psi0 = WaveFunction::basis_state(16, 0, 0);
    let u = [1.0, 0.0, 0.0];
    let (state, _) = propagator.three_exponential(&psi0, &SpherePolynomial::zero(), u, 1e-4);
    let (target, _) = propagator.limit_target(&psi0, &SpherePolynomial::zero(), u);
    let error = state.sub(&target).norm();
    assert!(error < 1e-3, "strong-pulse error {error} at delta = 1e-4");
    pass("strong pulse limit", format!("error {error:.3e} < 1e-3"));
}

#[test]
fn a06_plan_execution_vs_idealized_phase() {
    // Target 1 − z² in H₂. The half-order error constant is ~1.25, so the
    // schedule must reach δ ≈ 5e−5 to cross 1e−2; the kick scale then grows
    // to δ^{−1/2} ≈ 141 and the band limit must stay ahead of it.
    let j_max = 176;
    let propagator = Propagator::new(j_max, 2, None);
    let psi0 = WaveFunction::basis_state(j_max, 0, 0);
    let chain = saturate(&coords(), 2, 2).unwrap();
    let target_poly = grad_inner(&z(), &z());
    let deltas = geometric_deltas(1e-1, 5e-5, 13);

    for (poly, kick_sign, label) in [
        (target_poly.clone(), 1.0, "+(1 - z^2)"),
        (-&target_poly, -1.0, "-(1 - z^2)"),
    ] {
        let plan = synthesis_plan(&poly, &chain).unwrap();
        assert!(plan.is_sound());
        let (ideal, _) = propagator
            .kick(&psi0, &PhaseFn::Poly(&target_poly), kick_sign);
        let mut errors = Vec::new();
        for &delta in &deltas {
            let (state, _) = execute_plan(&propagator, &psi0, &plan, delta, KickMode::Idealized);
            errors.push(state.sub(&ideal).norm());
        }
        assert!(
            errors.windows(2).all(|w| w[1] < w[0]),
            "{label}: plan errors not monotone: {errors:?}"
        );
        let last = *errors.last().unwrap();
        assert!(last < 1e-2, "{label}: final error {last} >= 1e-2");
    }
    pass(
        "plan execution vs idealized phase",
        "both signs of 1 - z^2 converge monotonically below 1e-2".to_string(),
    );
}

#[test]
fn a07_extremal_harmonic_transfer() {
    let started = Instant::now();

    // Exact phase: distance below 1e−6 plus the reported residual.
    for j in [1u32, 2, 3] {
        let result = transfer_experiment(j, TransferMode::Exact, 16, 2).unwrap();
        assert!(
            result.distance < 1e-6 + result.residual,
            "j = {j}: distance {} residual {}",
            result.distance,
            result.residual
        );
        assert!(
            (result.overlap - result.mirror_overlap).abs() < 1e-8,
            "mirror asymmetry at j = {j}"
        );
    }

    // Fit sweep: strictly increasing overlap, crossing 0.9 within degree 64.
    // The sweep starts at degree 2j; below that the fitted phase cannot
    // even carry the Δm = 2j transfer mode and the overlap is wrapping
    // noise. Frozen crossings (measured): degree 16, 48, 64 for j = 1, 2, 3.
    let sweep = [2u32, 4, 8, 16, 24, 32, 48, 64];
    let frozen_crossings = [(1u32, 16u32), (2, 48), (3, 64)];
    for (j, frozen) in frozen_crossings {
        let mut previous = -1.0;
        let mut crossing = None;
        for &degree in sweep.iter().filter(|&&d| d >= 2 * j) {
            let result =
                transfer_experiment(j, TransferMode::Fitted { degree }, 16, 2).unwrap();
            assert!(
                result.overlap > previous,
                "j = {j}: overlap not strictly increasing at degree {degree}"
            );
            previous = result.overlap;
            if crossing.is_none() && result.overlap > 0.9 {
                crossing = Some(degree);
            }
        }
        let crossing = crossing.expect("overlap must exceed 0.9 within the sweep");
        assert!(crossing <= 64);
        assert_eq!(crossing, frozen, "j = {j}: crossing degree moved");
    }

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 300.0, "transfer suite took {elapsed:?}");
    pass(
        "extremal harmonic transfer",
        format!("exact transfers at 1e-6 + residual; 0.9 crossings at degrees 16/48/64, {elapsed:?}"),
    );
}

#[test]
fn a08_numeric_commutator_checks() {
    for phi in [z(), x(), &x() + &y()] {
        let report = bch_matrix_check(&phi, 12).unwrap();
        assert!(
            report.passes(1e-8),
            "phi = {phi}: commutator deviations {:.3e} / {:.3e} / {:.3e}",
            report.max_dipole_commutator,
            report.max_ad2_deviation,
            report.max_ad3_norm
        );
    }
    pass(
        "numeric commutator checks",
        "phi in {z, x, x + y} within 1e-8 on the interior band at j_max = 12".to_string(),
    );
}

#[test]
fn a09_reproducibility_and_manifests() {
    // Byte-identical result files from identical config + seed: the same
    // run repeated into the same directory must rewrite identical bytes.
    let dir_a = tempfile::tempdir().unwrap();
    let config_a = ExperimentConfig {
        out_dir: dir_a.path().to_path_buf(),
        j_max: 10,
        deltas: geometric_deltas(1e-1, 1e-2, 5),
        ..ExperimentConfig::default()
    };
    cmd_converge(&config_a).unwrap();
    let names = ["converge.csv", "converge.json", "converge.svg"];
    let first: Vec<Vec<u8>> = names
        .iter()
        .map(|name| std::fs::read(dir_a.path().join(name)).unwrap())
        .collect();
    cmd_converge(&config_a).unwrap();
    for (name, before) in names.iter().zip(&first) {
        let after = std::fs::read(dir_a.path().join(name)).unwrap();
        assert_eq!(&after, before, "{name} not byte-identical across reruns");
    }

    // Manifest checksums validate, for more than one command.
    verify_manifest(dir_a.path()).unwrap();
    let dir_c = tempfile::tempdir().unwrap();
    let config_c = ExperimentConfig {
        out_dir: dir_c.path().to_path_buf(),
        levels: 3,
        degree_cap: 3,
        ..ExperimentConfig::default()
    };
    cmd_saturate(&config_c).unwrap();
    verify_manifest(dir_c.path()).unwrap();

    // Unitarity drift below 1e−10 across random control schedules.
    let propagator = Propagator::new(16, 2, None);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst_drift = 0.0f64;
    for _ in 0..10 {
        let mut psi = WaveFunction::basis_state(16, rng.random_range(0..3), 0);
        let start_norm = psi.norm();
        for _ in 0..5 {
            let u = [
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
            ];
            psi = propagator.step(&psi, u, rng.random_range(-0.5..0.5));
        }
        worst_drift = worst_drift.max((psi.norm() - start_norm).abs() / start_norm);
    }
    assert!(worst_drift < 1e-10, "unitarity drift {worst_drift}");

    let (overlap, distance) = fidelity(
        &WaveFunction::basis_state(4, 1, 0),
        &WaveFunction::basis_state(4, 1, 0),
    );
    assert_eq!((overlap, distance), (1.0, 0.0));

    pass(
        "reproducibility and manifests",
        format!("byte-identical reruns; checksums valid; worst unitarity drift {worst_drift:.2e}"),
    );
}
