//! The experiment commands behind the CLI subcommands.
//!
//! Every command resolves its parameters from [`ExperimentConfig`], writes
//! its outputs through a [`ManifestWriter`] (so the run directory is fully
//! checksummed), and returns a headline JSON value plus a failure count
//! that the binary maps to the exit code.

use super::config::ExperimentConfig;
use super::manifest::{ManifestError, ManifestWriter, RunManifest};
use super::svg::{loglog_plot, xy_plot, PlotPoint};
use crate::poly::raw::RawPoly;
use crate::poly::{
    ad2_h0, ad3_h0, grad_inner, int, laplace_beltrami, phase_conjugation_term, rat,
    set_corrupt_rewrite, tangential_gradient, Monomial, SpherePolynomial,
};
use crate::propagator::convergence::convergence_study;
use crate::propagator::{
    bch_matrix_check, execute_plan, transfer_experiment, BchReport, KickMode, Propagator,
    TransferMode, TransferResult,
};
use crate::saturation::{
    membership, saturate, synthesis_plan, verify_pn_subset, Membership, PlanNode,
};
use crate::spectral::WaveFunction;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Config(#[from] super::config::ConfigError),
    #[error(transparent)]
    Manifest(#[from] ManifestError),
    #[error(transparent)]
    Saturation(#[from] crate::saturation::SaturationError),
    #[error(transparent)]
    Convergence(#[from] crate::propagator::ConvergenceError),
    #[error(transparent)]
    Transfer(#[from] crate::propagator::TransferError),
    #[error(transparent)]
    Bch(#[from] crate::propagator::bch::BchError),
}

/// Result of a command run: headline metrics and the failure count.
pub struct CommandOutcome {
    pub headline: Value,
    pub failures: usize,
    pub manifest: RunManifest,
}

struct CorruptGuard;

impl Drop for CorruptGuard {
    fn drop(&mut self) {
        set_corrupt_rewrite(false);
    }
}

fn random_polynomial(rng: &mut ChaCha8Rng, max_degree: u32) -> SpherePolynomial {
    let monomials = Monomial::all_of_degree_at_most(max_degree);
    let terms = rng.random_range(1..=4usize);
    let mut raw = Vec::new();
    for _ in 0..terms {
        let m = monomials[rng.random_range(0..monomials.len())];
        let numer = loop {
            let n = rng.random_range(-9i64..=9);
            if n != 0 {
                break n;
            }
        };
        let denom = rng.random_range(1i64..=9);
        raw.push(((m.a, m.b, m.c), rat(numer, denom)));
    }
    SpherePolynomial::from_raw_terms(raw)
}

struct Check {
    name: String,
    passed: bool,
    detail: String,
}

fn check(checks: &mut Vec<Check>, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
    checks.push(Check {
        name: name.into(),
        passed,
        detail: detail.into(),
    });
}

/// The full exact identity suite plus the polynomial-inclusion certificates.
pub fn cmd_verify_lemma(config: &ExperimentConfig) -> Result<CommandOutcome, ExperimentError> {
    let started = std::time::Instant::now();
    let _guard = if config.mutate {
        set_corrupt_rewrite(true);
        Some(CorruptGuard)
    } else {
        None
    };

    let x = SpherePolynomial::x();
    let y = SpherePolynomial::y();
    let z = SpherePolynomial::z();
    let mut checks: Vec<Check> = Vec::new();

    // Squared gradient of z.
    let one_minus_z2 = &SpherePolynomial::one() - &(&z * &z);
    check(
        &mut checks,
        "grad_inner(z,z) = 1 - z^2",
        grad_inner(&z, &z) == one_minus_z2,
        grad_inner(&z, &z).to_string(),
    );

    // Sum over the coordinates.
    let coordinate_sum =
        &(&grad_inner(&x, &x) + &grad_inner(&y, &y)) + &grad_inner(&z, &z);
    check(
        &mut checks,
        "sum_j grad_inner(x_j,x_j) = 2",
        coordinate_sum == SpherePolynomial::constant(int(2)),
        coordinate_sum.to_string(),
    );

    // Polarization differences for all coordinate pairs.
    for (a, b, name) in [
        (&x, &z, "4 x z"),
        (&x, &y, "4 x y"),
        (&y, &z, "4 y z"),
    ] {
        let minus = a - b;
        let plus = a + b;
        let difference = &grad_inner(&minus, &minus) - &grad_inner(&plus, &plus);
        let expected = (a * b).scale(&int(4));
        check(
            &mut checks,
            format!("polarization difference = {name}"),
            difference == expected,
            difference.to_string(),
        );
    }

    // Pure-power identity g(z^k - z^m) - g(z^k + z^m) = 4km z^{k+m} - 4km z^{k+m-2}.
    for (k, m) in [(1u32, 2u32), (2, 2), (2, 3)] {
        let zk = SpherePolynomial::monomial(0, 0, k);
        let zm = SpherePolynomial::monomial(0, 0, m);
        let minus = &zk - &zm;
        let plus = &zk + &zm;
        let difference = &grad_inner(&minus, &minus) - &grad_inner(&plus, &plus);
        let factor = int(4 * k as i64 * m as i64);
        let expected = &SpherePolynomial::monomial(0, 0, k + m).scale(&factor)
            - &SpherePolynomial::monomial(0, 0, k + m - 2).scale(&factor);
        check(
            &mut checks,
            format!("z^{k}/z^{m} identity"),
            difference == expected,
            difference.to_string(),
        );
    }

    // Mixed identity g(x^k - y^l z^m) - g(x^k + y^l z^m) = 4k(l+m) x^k y^l z^m.
    for (k, l, m) in [(1u32, 1u32, 1u32), (2, 1, 0), (2, 0, 1), (1, 2, 1)] {
        let xk = SpherePolynomial::monomial(k, 0, 0);
        let ylzm = SpherePolynomial::monomial(0, l, m);
        let minus = &xk - &ylzm;
        let plus = &xk + &ylzm;
        let difference = &grad_inner(&minus, &minus) - &grad_inner(&plus, &plus);
        let expected =
            SpherePolynomial::monomial(k, l, m).scale(&int(4 * k as i64 * (l + m) as i64));
        check(
            &mut checks,
            format!("x^{k} vs y^{l} z^{m} identity"),
            difference == expected,
            difference.to_string(),
        );
    }

    // Randomized structural identities, seeded for reproducibility.
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut leibniz_ok = true;
    let mut representative_ok = true;
    let mut tangency_ok = true;
    let mut expansion_ok = true;
    let mut ad_ok = true;
    for _ in 0..config.pairs {
        let p = random_polynomial(&mut rng, 4);
        let q = random_polynomial(&mut rng, 4);

        let product_rule = &(&(&p * &laplace_beltrami(&q)) + &(&q * &laplace_beltrami(&p)))
            + &grad_inner(&p, &q).scale(&int(2));
        leibniz_ok &= laplace_beltrami(&(&p * &q)) == product_rule;

        let dirty = RawPoly::from_canonical(&p).add(&RawPoly::sphere_relation().mul(
            &RawPoly::from_canonical(&q),
        ));
        representative_ok &= dirty.tangential_gradient_reduced()
            == tangential_gradient(&p).components
            && dirty.laplace_beltrami_reduced() == laplace_beltrami(&p);

        tangency_ok &= tangential_gradient(&p).is_tangent();

        expansion_ok &= phase_conjugation_term(0, &p, &q) == laplace_beltrami(&q)
            && phase_conjugation_term(1, &p, &q)
                == &(&laplace_beltrami(&p) * &q) + &grad_inner(&p, &q).scale(&int(2))
            && phase_conjugation_term(2, &p, &q) == &grad_inner(&p, &p) * &q
            && phase_conjugation_term(3, &p, &q).is_zero()
            && phase_conjugation_term(4, &p, &q).is_zero();

        let ad2 = ad2_h0(&p, &q);
        ad_ok &= &ad2 + &(&grad_inner(&p, &p) * &q).scale(&int(2)) == SpherePolynomial::zero()
            && ad3_h0(&p, &q).is_zero();
    }
    check(
        &mut checks,
        format!("Leibniz rule ({} random pairs)", config.pairs),
        leibniz_ok,
        "p*lap(q) + q*lap(p) + 2*grad_inner(p,q)",
    );
    check(
        &mut checks,
        "representative independence",
        representative_ok,
        "gradient and Laplacian computed on dirty representatives",
    );
    check(&mut checks, "gradient tangency", tangency_ok, "x·V = 0");
    check(
        &mut checks,
        "conjugation expansion orders 0..4",
        expansion_ok,
        "coefficients of the formal phase expansion",
    );
    check(
        &mut checks,
        format!("ad2 = -2 g, ad3 = 0 ({} random pairs)", config.pairs),
        ad_ok,
        "second and third commutators with -laplacian",
    );

    // Polynomial inclusion with certificates.
    let pn = verify_pn_subset(config.levels)?;
    check(
        &mut checks,
        format!("P_n in H_n at n = {}", pn.n),
        pn.all_certified(),
        format!(
            "{} monomials certified, {} failed, chain dims {:?}",
            pn.certified.len(),
            pn.failures.len(),
            pn.chain_dimensions
        ),
    );

    let failures = checks.iter().filter(|c| !c.passed).count();
    let mut writer = ManifestWriter::new(&config.out_dir, "verify-lemma", config.echo())?;

    let mut report_lines = String::new();
    for c in &checks {
        report_lines.push_str(&format!(
            "{} {} ({})\n",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        ));
    }
    writer.write_file("report.txt", &report_lines)?;

    let mut certificates = String::from("monomial,basis_index,coefficient\n");
    for (m, cert) in &pn.certified {
        let mono = SpherePolynomial::monomial(m.a, m.b, m.c);
        for (index, coeff) in &cert.coefficients {
            certificates.push_str(&format!("{mono},{index},{coeff}\n"));
        }
    }
    writer.write_file("certificates.csv", &certificates)?;

    let headline = json!({
        "command": "verify-lemma",
        "config": config.echo(),
        "checks_total": checks.len(),
        "checks_failed": failures,
        "pn": {
            "n": pn.n,
            "monomials_certified": pn.certified.len(),
            "chain_dimensions": pn.chain_dimensions,
            "elapsed_ms": pn.elapsed_ms,
        },
        "mutated": config.mutate,
        "elapsed_ms": started.elapsed().as_millis() as u64,
    });
    writer.write_file("report.json", &pretty(&headline))?;
    let manifest = writer.finalize()?;

    Ok(CommandOutcome {
        headline,
        failures,
        manifest,
    })
}

/// Builds the saturation chain and emits dimensions, bases and provenance.
pub fn cmd_saturate(config: &ExperimentConfig) -> Result<CommandOutcome, ExperimentError> {
    let seeds = [
        SpherePolynomial::x(),
        SpherePolynomial::y(),
        SpherePolynomial::z(),
    ];
    let chain = saturate(&seeds, config.levels, config.degree_cap)?;

    let mut dims = String::from("level,dimension\n");
    let mut bases = String::from("level,index,pivot,polynomial\n");
    let mut provenance = String::from("level,index,generator,coefficient\n");
    let mut dropped_total = 0usize;
    for space in &chain {
        dims.push_str(&format!("{},{}\n", space.level(), space.dimension()));
        dropped_total += space.dropped_generators();
        for (index, (basis, pivot)) in space.basis().iter().zip(space.pivots()).enumerate() {
            let pivot_poly = SpherePolynomial::monomial(pivot.a, pivot.b, pivot.c);
            bases.push_str(&format!(
                "{},{},{},{}\n",
                space.level(),
                index,
                pivot_poly,
                basis
            ));
        }
        for (index, prov) in space.provenance().iter().enumerate() {
            for (generator, coeff) in prov {
                provenance.push_str(&format!(
                    "{},{},{},{}\n",
                    space.level(),
                    index,
                    generator,
                    coeff
                ));
            }
        }
    }

    let truncated = dropped_total > 0;
    let mut writer = ManifestWriter::new(&config.out_dir, "saturate", config.echo())?;
    writer.write_file("dims.csv", &dims)?;
    writer.write_file("bases.csv", &bases)?;
    writer.write_file("provenance.csv", &provenance)?;
    let headline = json!({
        "command": "saturate",
        "config": config.echo(),
        "levels": config.levels,
        "degree_cap": config.degree_cap,
        "dimensions": chain.iter().map(|s| s.dimension()).collect::<Vec<_>>(),
        "dropped_generators": dropped_total,
        "truncated": truncated,
    });
    writer.write_file("summary.json", &pretty(&headline))?;
    let manifest = writer.finalize()?;

    if truncated {
        eprintln!(
            "warning: degree cap {} dropped {dropped_total} squared-gradient generators",
            config.degree_cap
        );
    }
    Ok(CommandOutcome {
        headline,
        failures: 0,
        manifest,
    })
}

/// Runs the conjugated-composition convergence study.
pub fn cmd_converge(config: &ExperimentConfig) -> Result<CommandOutcome, ExperimentError> {
    if config.psi0.0 > config.j_max {
        return Err(super::config::ConfigError::BadValue {
            key: "[converge] psi0".into(),
            reason: format!(
                "initial state degree {} exceeds the band limit {}",
                config.psi0.0, config.j_max
            ),
        }
        .into());
    }
    let propagator = Propagator::new(config.j_max, config.oversample, config.potential.as_ref());
    let psi0 = WaveFunction::basis_state(config.j_max, config.psi0.0, config.psi0.1);
    let record = convergence_study(&propagator, &psi0, &config.phi, config.u, &config.deltas)?;

    let points: Vec<PlotPoint> = record
        .rows
        .iter()
        .map(|r| PlotPoint {
            x: r.delta,
            y: r.error,
            flagged: r.flagged,
        })
        .collect();
    let svg = loglog_plot(
        &format!(
            "three-exponential error vs delta (phi = {}, slope {:.3})",
            config.phi, record.slope
        ),
        "delta",
        "L2 error",
        &points,
        Some((record.slope, record.intercept)),
    );

    let headline = json!({
        "command": "converge",
        "config": config.echo(),
        "slope": record.slope,
        "intercept": record.intercept,
        "j_max": record.j_max,
        "oversample": record.oversample,
        "target_residual": record.target_residual,
        "rows": record.rows.len(),
        "usable_rows": record.usable_rows().count(),
    });
    let mut writer = ManifestWriter::new(&config.out_dir, "converge", config.echo())?;
    writer.write_file("converge.csv", &record.to_csv())?;
    writer.write_file("converge.json", &pretty(&headline))?;
    writer.write_file("converge.svg", &svg)?;
    let manifest = writer.finalize()?;

    Ok(CommandOutcome {
        headline,
        failures: 0,
        manifest,
    })
}

fn transfer_row(result: &TransferResult) -> String {
    let degree = result
        .degree
        .map(|d| d.to_string())
        .unwrap_or_else(|| "exact".into());
    let delta = result
        .delta
        .map(|d| d.to_string())
        .unwrap_or_else(|| "idealized".into());
    format!(
        "{},{},{},{},{},{}\n",
        result.j, degree, delta, result.overlap, result.distance, result.residual
    )
}

/// Runs the eigenfunction-transfer experiment (exact phase or fit sweep).
pub fn cmd_transfer(config: &ExperimentConfig) -> Result<CommandOutcome, ExperimentError> {
    let modes: Vec<TransferMode> = match config.transfer_mode.as_str() {
        "exact" => vec![TransferMode::Exact],
        "synthesized" => config
            .degrees
            .iter()
            .map(|&degree| TransferMode::Synthesized {
                degree,
                delta: config.exec_delta,
            })
            .collect(),
        _ => config
            .degrees
            .iter()
            .map(|&degree| TransferMode::Fitted { degree })
            .collect(),
    };
    // Per-degree runs are independent; aggregate in sweep order.
    let rows: Vec<TransferResult> = std::thread::scope(|scope| {
        let handles: Vec<_> = modes
            .iter()
            .map(|&mode| {
                scope.spawn(move || {
                    transfer_experiment(config.transfer_j, mode, config.j_max, config.oversample)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|handle| handle.join().expect("transfer worker"))
            .collect::<Result<Vec<_>, _>>()
    })?;

    let mut csv = String::from("j,degree,delta_or_idealized,overlap,distance,residual\n");
    for row in &rows {
        csv.push_str(&transfer_row(row));
    }

    let sweep_points: Vec<PlotPoint> = rows
        .iter()
        .filter_map(|r| {
            r.degree.map(|d| PlotPoint {
                x: d as f64,
                y: r.overlap,
                flagged: false,
            })
        })
        .collect();

    let achieved = rows
        .iter()
        .find(|r| r.overlap > 0.9)
        .and_then(|r| r.degree);
    let max_mirror_gap = rows
        .iter()
        .map(|r| (r.overlap - r.mirror_overlap).abs())
        .fold(0.0f64, f64::max);

    let headline = json!({
        "command": "transfer",
        "config": config.echo(),
        "j": config.transfer_j,
        "mode": config.transfer_mode,
        "rows": rows.len(),
        "best_overlap": rows.iter().map(|r| r.overlap).fold(0.0f64, f64::max),
        "first_degree_above_0.9": achieved,
        "max_mirror_gap": max_mirror_gap,
    });

    let mut writer = ManifestWriter::new(&config.out_dir, "transfer", config.echo())?;
    writer.write_file("transfer.csv", &csv)?;
    writer.write_file("transfer.json", &pretty(&headline))?;
    if sweep_points.len() > 1 {
        let svg = xy_plot(
            &format!("transfer overlap vs fit degree (j = {})", config.transfer_j),
            "fit degree",
            "overlap",
            &sweep_points,
        );
        writer.write_file("transfer.svg", &svg)?;
    }
    let manifest = writer.finalize()?;

    Ok(CommandOutcome {
        headline,
        failures: 0,
        manifest,
    })
}

fn bch_text(report: &BchReport, tolerance: f64) -> String {
    format!(
        "phi = {}\nj_max = {}\ninterior band = {}\nmax |[S, W] psi|   = {:.3e}\n\
         max |ad2 + 2G| psi = {:.3e}\nmax |ad3 psi|      = {:.3e}\ntolerance = {:.1e}\n{}\n",
        report.phi,
        report.j_max,
        report.interior_band,
        report.max_dipole_commutator,
        report.max_ad2_deviation,
        report.max_ad3_norm,
        tolerance,
        if report.passes(tolerance) { "PASS" } else { "FAIL" }
    )
}

/// Verifies the commutator relations numerically.
pub fn cmd_bch_check(config: &ExperimentConfig) -> Result<CommandOutcome, ExperimentError> {
    const TOLERANCE: f64 = 1e-8;
    let report = bch_matrix_check(&config.phi, config.j_max)?;
    let passed = report.passes(TOLERANCE);

    let headline = json!({
        "command": "bch-check",
        "config": config.echo(),
        "phi": config.phi.to_string(),
        "j_max": report.j_max,
        "interior_band": report.interior_band,
        "max_dipole_commutator": report.max_dipole_commutator,
        "max_ad2_deviation": report.max_ad2_deviation,
        "max_ad3_norm": report.max_ad3_norm,
        "tolerance": TOLERANCE,
        "passed": passed,
    });
    let mut writer = ManifestWriter::new(&config.out_dir, "bch-check", config.echo())?;
    writer.write_file("bch.txt", &bch_text(&report, TOLERANCE))?;
    writer.write_file("bch.json", &pretty(&headline))?;
    let manifest = writer.finalize()?;

    Ok(CommandOutcome {
        headline,
        failures: usize::from(!passed),
        manifest,
    })
}

/// Compiles (and statically checks) a synthesis plan for a target phase.
pub fn cmd_plan(config: &ExperimentConfig) -> Result<CommandOutcome, ExperimentError> {
    let seeds = [
        SpherePolynomial::x(),
        SpherePolynomial::y(),
        SpherePolynomial::z(),
    ];
    let chain = saturate(&seeds, config.levels, config.degree_cap)?;
    let target = &config.plan_target;
    if let Membership::NotMember { residual } = membership(target, chain.last().unwrap()) {
        return Err(crate::saturation::SaturationError::NotInSpace { residual }.into());
    }
    let plan = synthesis_plan(target, &chain)?;
    let sound = plan.is_sound();

    let mut adjoint_blocks = 0usize;
    let mut conjugate_blocks = 0usize;
    count_blocks(&plan.nodes, &mut conjugate_blocks, &mut adjoint_blocks);

    let headline = json!({
        "command": "plan",
        "config": config.echo(),
        "target": target.to_string(),
        "depth": plan.depth(),
        "top_level_nodes": plan.nodes.len(),
        "conjugate_blocks": conjugate_blocks,
        "adjoint_blocks_nonphysical": adjoint_blocks,
        "statically_sound": sound,
    });
    let mut writer = ManifestWriter::new(&config.out_dir, "plan", config.echo())?;
    writer.write_file("plan.txt", &plan.to_string())?;
    writer.write_file("plan.json", &pretty(&headline))?;
    let manifest = writer.finalize()?;

    Ok(CommandOutcome {
        headline,
        failures: usize::from(!sound),
        manifest,
    })
}

fn count_blocks(nodes: &[PlanNode], conjugates: &mut usize, adjoints: &mut usize) {
    for node in nodes {
        match node {
            PlanNode::Pulse { .. } => {}
            PlanNode::Phase { child, .. } => count_blocks(&child.nodes, conjugates, adjoints),
            PlanNode::Conjugate { sign, child, .. } => {
                *conjugates += 1;
                // Positive weights take the adjoint (nonphysical) drift.
                if *sign > 0 {
                    *adjoints += 1;
                }
                count_blocks(&child.nodes, conjugates, adjoints);
            }
        }
    }
}

/// Executes a previously compiled plan file at a given step size; used by
/// the plan example and available to downstream tooling.
pub fn execute_plan_preview(
    config: &ExperimentConfig,
    plan: &crate::saturation::SynthesisPlan,
) -> (WaveFunction, crate::propagator::ExecDiagnostics) {
    let propagator = Propagator::new(config.j_max, config.oversample, None);
    let psi0 = WaveFunction::basis_state(config.j_max, config.psi0.0, config.psi0.1);
    execute_plan(
        &propagator,
        &psi0,
        plan,
        config.exec_delta,
        KickMode::Idealized,
    )
}

fn pretty(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON serializes");
    text.push('\n');
    text
}
