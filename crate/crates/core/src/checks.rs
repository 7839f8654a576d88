//! The verification suite: quantitative acceptance experiments (1-8) plus an
//! invariant battery, shared between the `check` subcommand and the
//! integration tests. Each item returns a [`Verdict`] so callers can render
//! a table or assert.

use crate::error::Result;
use crate::modal::{
    build_modal_block, char_poly_coeffs, dissipation_residual, modal_norm, solve_stationary,
    weighted_inner, DomainSpec, ModalForcing, ModalState, Params,
};
use crate::oracle;
use crate::regularity::{
    fit_decay_exponent, gevrey_certificate, mode_abscissa, spectral_abscissa, witness_closed_form,
    witness_growth_exponent, witness_sequence,
};
use crate::resolvent::{
    global_resolvent_norm, log_grid, modal_resolvent_norm, proof_functionals, scan_resolvent,
    solve_resolvent, ScanResult, TruncationPolicy,
};
use crate::simulator::{decay_rate_estimate, simulate, uniform_times, InitialData, Propagator};
use num_complex::Complex64 as C64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

pub const DEFAULT_SEED: u64 = 42;

/// Fit band half-width shared by the exponent criteria.
pub const EXPONENT_TOL: f64 = 0.05;

/// One named pass/fail outcome with a human-readable detail line.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Verdict {
    fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Verdict {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }

    fn from_error(name: impl Into<String>, err: &crate::error::Error) -> Self {
        Verdict::new(name, false, format!("error: {err}"))
    }
}

/// A whole verification run.
#[derive(Clone, Debug, Default)]
pub struct CheckReport {
    pub verdicts: Vec<Verdict>,
}

impl CheckReport {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    /// `key=value` pairs for the summary file.
    pub fn summary_pairs(&self) -> Vec<(String, String)> {
        let mut pairs = Vec::new();
        for v in &self.verdicts {
            pairs.push((
                v.name.clone(),
                format!("{}; {}", if v.pass { "pass" } else { "FAIL" }, v.detail),
            ));
        }
        pairs.push((
            "all_pass".into(),
            if self.all_pass() { "true" } else { "false" }.into(),
        ));
        pairs
    }
}

fn unit_params(tau: f64) -> Params {
    Params::new(1.0, tau, 1.0, 1.0, 1.0).expect("unit parameters are valid")
}

fn scan_unit(tau: f64) -> Result<ScanResult> {
    let params = unit_params(tau);
    let domain = DomainSpec::interval(1)?;
    let grid = log_grid(1e2, 1e6, 33)?;
    scan_resolvent(&grid, &params, &domain, &TruncationPolicy::default())
}

/// Criterion 1: for tau in {0.5, 0.6, 0.75, 0.9} the fitted resolvent decay
/// exponent over lambda in [1e2, 1e6] lies between the proven lower exponent
/// (2-2tau)/(3-tau) and the witness ceiling (2-2tau)/(2-tau), within 0.05.
pub fn criterion1_gevrey_band() -> Vec<Verdict> {
    [0.5, 0.6, 0.75, 0.9]
        .iter()
        .map(|&tau| {
            let name = format!("criterion1.gevrey_band[tau={tau}]");
            let start = Instant::now();
            let result = scan_unit(tau).and_then(|scan| {
                let fit = fit_decay_exponent(&scan, (1e2, 1e6))?;
                let cert = gevrey_certificate(tau)?;
                Ok((fit, cert))
            });
            let secs = start.elapsed().as_secs_f64();
            match result {
                Ok((fit, cert)) => {
                    let lo = cert.phi_theory - EXPONENT_TOL;
                    let hi = cert.phi_ceiling + EXPONENT_TOL;
                    let in_band = fit.exponent >= lo && fit.exponent <= hi;
                    let in_time = secs <= 60.0;
                    Verdict::new(
                        name,
                        in_band && in_time,
                        format!(
                            "exponent={:.4} (stderr {:.4}) band=[{:.4}, {:.4}] s_bound={:.3} time={:.1}s",
                            fit.exponent, fit.stderr, lo, hi, cert.s_bound, secs
                        ),
                    )
                }
                Err(e) => Verdict::from_error(name, &e),
            }
        })
        .collect()
}

/// Criterion 2: the Euler-Bernoulli limit tau = 0 is analytic; the fitted
/// exponent is 1 within 0.05 and lambda * ||R|| varies by < 20% over the top
/// two decades.
pub fn criterion2_analytic_baseline() -> Vec<Verdict> {
    let name = "criterion2.analytic_baseline[tau=0]";
    match scan_unit(0.0).and_then(|scan| {
        let fit = fit_decay_exponent(&scan, (1e2, 1e6))?;
        Ok((fit, scan))
    }) {
        Ok((fit, scan)) => {
            let exponent_ok = (fit.exponent - 1.0).abs() <= EXPONENT_TOL;
            let top: Vec<f64> = scan
                .rows
                .iter()
                .filter(|r| r.lambda >= 1e4)
                .map(|r| r.lambda * r.resolvent_norm)
                .collect();
            let max = top.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let min = top.iter().cloned().fold(f64::INFINITY, f64::min);
            let variation = max / min - 1.0;
            vec![Verdict::new(
                name,
                exponent_ok && variation < 0.20,
                format!(
                    "exponent={:.4} (want 1.00 +- 0.05), top-two-decade variation of lambda*||R|| = {:.2}%",
                    fit.exponent,
                    variation * 100.0
                ),
            )]
        }
        Err(e) => vec![Verdict::from_error(name, &e)],
    }
}

/// Criterion 3: the witness growth lambda_n ||U_n|| has log-log slope
/// tau/(2-tau) within 0.05 over n in [10, 1000], and the sequence is
/// unbounded: extended to n = 10^6 the last value exceeds 10x the first.
pub fn criterion3_witness_growth() -> Vec<Verdict> {
    [0.25, 0.5, 0.75, 1.0]
        .iter()
        .map(|&tau| {
            let name = format!("criterion3.witness_growth[tau={tau}]");
            let start = Instant::now();
            let params = unit_params(tau);
            let result = (|| {
                let domain = DomainSpec::interval(1)?;
                let rows = witness_sequence(&params, (10, 1000), &domain)?;
                let fit = witness_growth_exponent(&rows)?;
                let first = rows.first().unwrap().growth;
                let last_in_range = rows.last().unwrap().growth;
                let far = witness_sequence(&params, (1_000_000, 1_000_000), &domain)?[0].growth;
                Ok((fit, first, last_in_range, far))
            })();
            let secs = start.elapsed().as_secs_f64();
            match result {
                Ok((fit, first, last_in_range, far)) => {
                    let target = tau / (2.0 - tau);
                    let slope_ok = (fit.exponent - target).abs() <= EXPONENT_TOL;
                    let unbounded = far > 10.0 * first;
                    Verdict::new(
                        name,
                        slope_ok && unbounded && secs <= 5.0,
                        format!(
                            "slope={:.4} (want {:.4} +- 0.05), growth n=10..1000: {:.2}x, extended to n=1e6: {:.1}x, time={:.2}s",
                            fit.exponent,
                            target,
                            last_in_range / first,
                            far / first,
                            secs
                        ),
                    )
                }
                Err(e) => Verdict::from_error(name, &e),
            }
        })
        .collect()
}

/// Criterion 4: |mu_n| sigma_n^{-(3tau-4)/2} settles; relative spread < 5%
/// over n in [100, 1000] for tau = 0.5 and tau = 1.
pub fn criterion4_witness_asymptotics() -> Vec<Verdict> {
    [0.5, 1.0]
        .iter()
        .map(|&tau| {
            let name = format!("criterion4.mu_asymptotics[tau={tau}]");
            let params = unit_params(tau);
            let result = DomainSpec::interval(1)
                .and_then(|domain| witness_sequence(&params, (100, 1000), &domain));
            match result {
                Ok(rows) => {
                    let scaled: Vec<f64> = rows
                        .iter()
                        .map(|r| r.mu_abs * r.sigma.powf(-(3.0 * tau - 4.0) / 2.0))
                        .collect();
                    let max = scaled.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                    let min = scaled.iter().cloned().fold(f64::INFINITY, f64::min);
                    let mean = scaled.iter().sum::<f64>() / scaled.len() as f64;
                    let spread = (max - min) / mean;
                    Verdict::new(
                        name,
                        spread < 0.05 && mean > 0.0,
                        format!(
                            "scaled |mu| ~ {:.6}, relative spread {:.3}% (want < 5%)",
                            mean,
                            spread * 100.0
                        ),
                    )
                }
                Err(e) => Verdict::from_error(name, &e),
            }
        })
        .collect()
}

fn draw_params(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Params {
    let draw = |rng: &mut ChaCha8Rng| (rng.gen::<f64>() * (hi / lo).ln()).exp() * lo;
    Params {
        gamma: draw(rng),
        tau: rng.gen::<f64>(),
        alpha: draw(rng),
        beta: draw(rng),
        kappa: draw(rng),
    }
}

fn draw_state(rng: &mut ChaCha8Rng, half_width: f64) -> ModalState {
    let c = |rng: &mut ChaCha8Rng| {
        C64::new(
            (rng.gen::<f64>() - 0.5) * 2.0 * half_width,
            (rng.gen::<f64>() - 0.5) * 2.0 * half_width,
        )
    };
    ModalState::new(c(rng), c(rng), c(rng))
}

/// Criterion 5: the dissipativity identity Re<Bx, x> = -kappa alpha sigma
/// |theta|^2 holds to 1e-12 relative over 1000 seeded draws.
///
/// The draw ranges (sigma in [0.5, 20], couplings in [0.5, 2]) keep the
/// conservative terms small enough that double precision can actually
/// express the identity at that tolerance; larger modes are covered by the
/// energy-identity invariant at 1e-10.
pub fn criterion5_dissipativity(seed: u64) -> Vec<Verdict> {
    let name = "criterion5.dissipativity";
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let params = draw_params(&mut rng, 0.5, 2.0);
        let sigma = (rng.gen::<f64>() * (20.0f64 / 0.5).ln()).exp() * 0.5;
        let block = match build_modal_block(sigma, &params) {
            Ok(b) => b,
            Err(e) => return vec![Verdict::from_error(name, &e)],
        };
        let state = draw_state(&mut rng, 0.5);
        let (lhs, rhs) = dissipation_residual(&state, &block, &params);
        let rel = (lhs - rhs).abs() / (1.0 + rhs.abs());
        worst = worst.max(rel);
    }
    let secs = start.elapsed().as_secs_f64();
    vec![Verdict::new(
        name,
        worst <= 1e-12 && secs <= 1.0,
        format!("worst residual {worst:.3e} over 1000 draws (want <= 1e-12), time={secs:.2}s"),
    )]
}

/// Criterion 6: for tau in {0, 0.25, 0.5, 0.75, 1} every mode n <= 1000 has
/// a strictly negative abscissa, and a single-mode simulation's fitted decay
/// rate matches that mode's abscissa within 2%.
pub fn criterion6_exponential_stability() -> Vec<Verdict> {
    [0.0, 0.25, 0.5, 0.75, 1.0]
        .iter()
        .map(|&tau| {
            let name = format!("criterion6.exponential_stability[tau={tau}]");
            let params = unit_params(tau);
            let result = (|| {
                let domain = DomainSpec::interval(1000)?;
                let report = spectral_abscissa(&params, &domain, 1000)?;
                // single mode sigma = 4: simulate and fit the decay rate
                let sigma = 4.0;
                let abscissa = mode_abscissa(sigma, &params)?.re_root_max;
                let t_end = 12.0 / abscissa.abs();
                let times = uniform_times(t_end, 400)?;
                let data = InitialData::single(
                    sigma,
                    ModalState::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)),
                )?;
                let trace = simulate(&data, &params, &times)?;
                let rate = decay_rate_estimate(&trace, (0.2 * t_end, t_end))?;
                Ok((report, abscissa, rate))
            })();
            match result {
                Ok((report, abscissa, rate)) => {
                    let all_stable = report.sup_real < 0.0;
                    let rel = (rate - abscissa).abs() / abscissa.abs();
                    Verdict::new(
                        name,
                        all_stable && rel <= 0.02,
                        format!(
                            "sup abscissa={:.6} (argmax sigma={}), single-mode rate {:.6} vs abscissa {:.6} ({:.2}% off)",
                            report.sup_real,
                            report.argmax_sigma,
                            rate,
                            abscissa,
                            rel * 100.0
                        ),
                    )
                }
                Err(e) => Verdict::from_error(name, &e),
            }
        })
        .collect()
}

/// Criterion 7: (a) the truncated global resolvent norm equals a dense
/// block-diagonal oracle (GEPP inverse + Jacobi Gram eigenvalues) to 1e-8 at
/// 10 random lambdas on a 32-mode domain; (b) the witness closed forms match
/// direct shifted-block solves to 1e-8 for n <= 1000.
pub fn criterion7_oracle_equivalence(seed: u64) -> Vec<Verdict> {
    let mut out = Vec::new();

    // (a) dense oracle over 32 interval modes
    let name = "criterion7.dense_oracle[32 modes]";
    let sigmas: Vec<f64> = (1..=32u64).map(|n| (n * n) as f64).collect();
    let params = unit_params(0.5);
    let result = (|| {
        let domain = DomainSpec::explicit(sigmas.clone())?;
        // generous safety so the truncation covers all 32 modes at small lambda
        let policy = TruncationPolicy {
            safety: 200.0,
            tail_decades: 1,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7a11);
        let mut worst: f64 = 0.0;
        for _ in 0..10 {
            let lambda = 10f64.powf(-1.0 + 4.0 * rng.gen::<f64>());
            let row = global_resolvent_norm(lambda, &params, &domain, &policy)?;
            let dense = oracle::dense_resolvent_norm(lambda, &sigmas, &params)?;
            worst = worst.max((row.resolvent_norm - dense).abs() / dense);
        }
        Ok(worst)
    })();
    out.push(match result {
        Ok(worst) => Verdict::new(
            name,
            worst <= 1e-8,
            format!("worst relative gap {worst:.3e} over 10 lambdas (want <= 1e-8)"),
        ),
        Err(e) => Verdict::from_error(name, &e),
    });

    // (b) witness closed form vs direct resolvent solve
    for tau in [0.25, 0.5, 0.75, 1.0] {
        let name = format!("criterion7.witness_vs_solve[tau={tau}]");
        let params = unit_params(tau);
        let result = (|| {
            let mut worst: f64 = 0.0;
            for n in 1..=1000u64 {
                let sigma = (n * n) as f64;
                let (lambda, mu, nu) = witness_closed_form(sigma, &params)?;
                let block = build_modal_block(sigma, &params)?;
                let scale = sigma.powf(-tau / 2.0);
                let forcing = ModalForcing::new(
                    C64::new(0.0, 0.0),
                    C64::new(-scale, 0.0),
                    C64::new(0.0, 0.0),
                );
                let x = solve_resolvent(lambda, &block, &forcing)?;
                let expect_u = mu * scale;
                let expect_v = C64::new(0.0, lambda) * mu * scale;
                let expect_th = nu * scale;
                let err = ((x.u - expect_u).norm_sqr()
                    + (x.v - expect_v).norm_sqr()
                    + (x.theta - expect_th).norm_sqr())
                .sqrt();
                let magnitude =
                    (expect_u.norm_sqr() + expect_v.norm_sqr() + expect_th.norm_sqr()).sqrt();
                worst = worst.max(err / magnitude);
            }
            Ok(worst)
        })();
        out.push(match result {
            Ok(worst) => Verdict::new(
                name,
                worst <= 1e-8,
                format!("worst relative gap {worst:.3e} over n <= 1000 (want <= 1e-8)"),
            ),
            Err(e) => Verdict::from_error(name, &e),
        });
    }
    out
}

/// Criterion 8: the semigroup property holds to 1e-9 on 100 random blocks,
/// and exact propagation matches the adaptive integrator to 1e-8 up to
/// t = 100.
pub fn criterion8_semigroup(seed: u64) -> Vec<Verdict> {
    let mut out = Vec::new();

    let name = "criterion8.semigroup_property";
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5e9);
    let mut worst: f64 = 0.0;
    let mut failure = None;
    for _ in 0..100 {
        let params = draw_params(&mut rng, 0.5, 2.0);
        let sigma = (rng.gen::<f64>() * (20.0f64 / 0.5).ln()).exp() * 0.5;
        let block = match build_modal_block(sigma, &params) {
            Ok(b) => b,
            Err(e) => {
                failure = Some(e);
                break;
            }
        };
        let prop = Propagator::new(&block);
        let t1 = 0.05 + 1.95 * rng.gen::<f64>();
        let t2 = 0.05 + 1.95 * rng.gen::<f64>();
        let lhs = prop.at(t1).mul(&prop.at(t2));
        let rhs = prop.at(t1 + t2);
        let rel = lhs.sub(&rhs).frobenius_norm() / rhs.frobenius_norm();
        worst = worst.max(rel);
    }
    out.push(match failure {
        Some(e) => Verdict::from_error(name, &e),
        None => Verdict::new(
            name,
            worst <= 1e-9,
            format!("worst relative defect {worst:.3e} over 100 draws (want <= 1e-9)"),
        ),
    });

    let name = "criterion8.integrator_oracle";
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0de);
    let mut worst: f64 = 0.0;
    let mut failure = None;
    for _ in 0..20 {
        let params = draw_params(&mut rng, 0.5, 2.0);
        let sigma = (rng.gen::<f64>() * (20.0f64 / 0.5).ln()).exp() * 0.5;
        let block = match build_modal_block(sigma, &params) {
            Ok(b) => b,
            Err(e) => {
                failure = Some(e);
                break;
            }
        };
        let prop = Propagator::new(&block);
        let x0 = draw_state(&mut rng, 1.0).as_vec();
        for t in [1.0, 10.0, 100.0] {
            let exact = prop.at(t).mul_vec(&x0);
            let integrated = oracle::rk45_evolve(&block.matrix, &x0, t, 1e-13);
            let rel = exact.sub(&integrated).norm() / integrated.norm().max(1e-250);
            worst = worst.max(rel);
        }
    }
    out.push(match failure {
        Some(e) => Verdict::from_error(name, &e),
        None => Verdict::new(
            name,
            worst <= 1e-8,
            format!(
                "worst relative gap {worst:.3e} over 20 draws x t in {{1,10,100}} (want <= 1e-8)"
            ),
        ),
    });
    out
}

/// Module invariants exercised with seeded draws; part of the `check`
/// verdict table alongside the numbered criteria.
pub fn invariant_battery(seed: u64) -> Vec<Verdict> {
    let mut out = Vec::new();

    // Routh-Hurwitz positivity and root stability over a wide sweep
    {
        let name = "invariant.routh_hurwitz";
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x11);
        let mut ok = true;
        let mut detail = String::from("p,q,r > 0, p*q > r and Re(roots) < 0 on 1000 draws");
        for _ in 0..1000 {
            let params = draw_params(&mut rng, 0.1, 10.0);
            let sigma = 10f64.powf(-2.0 + 10.0 * rng.gen::<f64>());
            let (p, q, r) = char_poly_coeffs(sigma, &params);
            if !(p > 0.0 && q > 0.0 && r > 0.0 && p * q > r) {
                ok = false;
                detail = format!("coefficient condition failed at sigma={sigma}");
                break;
            }
            match mode_abscissa(sigma, &params) {
                Ok(row) => {
                    if row.re_root_max >= 0.0 {
                        ok = false;
                        detail = format!("nonnegative root at sigma={sigma}");
                        break;
                    }
                }
                Err(e) => {
                    ok = false;
                    detail = format!("error: {e}");
                    break;
                }
            }
        }
        out.push(Verdict::new(name, ok, detail));
    }

    // dissipation sign: lhs <= 0, zero only with theta = 0
    {
        let name = "invariant.dissipation_sign";
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x22);
        let mut ok = true;
        let mut detail = String::from("Re<Bx,x> <= 0, = 0 iff theta = 0, on 500 draws");
        for k in 0..500 {
            let params = draw_params(&mut rng, 0.5, 2.0);
            let sigma = (rng.gen::<f64>() * (20.0f64 / 0.5).ln()).exp() * 0.5;
            let block = build_modal_block(sigma, &params).unwrap();
            let mut state = draw_state(&mut rng, 0.5);
            let zero_theta = k % 3 == 0;
            if zero_theta {
                state.theta = C64::new(0.0, 0.0);
            }
            let (lhs, rhs) = dissipation_residual(&state, &block, &params);
            let slack = 1e-12 * (1.0 + rhs.abs());
            if lhs > slack {
                ok = false;
                detail = format!("positive dissipation {lhs:.3e} at sigma={sigma}");
                break;
            }
            if zero_theta && lhs.abs() > slack {
                ok = false;
                detail = format!("nonzero dissipation {lhs:.3e} with theta = 0");
                break;
            }
            if !zero_theta && state.theta.norm() > 1e-3 && lhs >= 0.0 {
                ok = false;
                detail = format!("vanishing dissipation with theta != 0 at sigma={sigma}");
                break;
            }
        }
        out.push(Verdict::new(name, ok, detail));
    }

    // norm axioms: absolute homogeneity and the parallelogram law
    {
        let name = "invariant.norm_axioms";
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x33);
        let mut ok = true;
        let mut detail = String::from("homogeneity and parallelogram law on 500 draws");
        for _ in 0..500 {
            let params = draw_params(&mut rng, 0.5, 2.0);
            let sigma = (rng.gen::<f64>() * 40.0f64.ln()).exp() * 0.5;
            let block = build_modal_block(sigma, &params).unwrap();
            let x = draw_state(&mut rng, 1.0);
            let y = draw_state(&mut rng, 1.0);
            let c = C64::new(
                (rng.gen::<f64>() - 0.5) * 4.0,
                (rng.gen::<f64>() - 0.5) * 4.0,
            );
            let scaled = ModalState::new(c * x.u, c * x.v, c * x.theta);
            let lhs = modal_norm(&scaled, &block);
            let rhs = c.norm() * modal_norm(&x, &block);
            if (lhs - rhs).abs() > 1e-12 * (1.0 + rhs) {
                ok = false;
                detail = format!("homogeneity violated at sigma={sigma}");
                break;
            }
            let sum = ModalState::new(x.u + y.u, x.v + y.v, x.theta + y.theta);
            let diff = ModalState::new(x.u - y.u, x.v - y.v, x.theta - y.theta);
            let para = modal_norm(&sum, &block).powi(2) + modal_norm(&diff, &block).powi(2);
            let twice = 2.0 * (modal_norm(&x, &block).powi(2) + modal_norm(&y, &block).powi(2));
            if (para - twice).abs() > 1e-11 * (1.0 + twice) {
                ok = false;
                detail = format!("parallelogram law violated at sigma={sigma}");
                break;
            }
        }
        out.push(Verdict::new(name, ok, detail));
    }

    // stationary solve round trip at 1e-10
    {
        let name = "invariant.stationary_roundtrip";
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x44);
        let mut ok = true;
        let mut detail = String::from("B x reproduces the forcing to 1e-10 on 500 draws");
        for _ in 0..500 {
            let params = draw_params(&mut rng, 0.2, 5.0);
            let sigma = 10f64.powf(-1.0 + 5.0 * rng.gen::<f64>());
            let block = build_modal_block(sigma, &params).unwrap();
            let f = draw_state(&mut rng, 1.0);
            let forcing = ModalForcing::new(f.u, f.v, f.theta);
            match solve_stationary(&forcing, &block, &params) {
                Ok(x) => {
                    let back = block.matrix.mul_vec(&x.as_vec());
                    let resid = back.sub(&forcing.as_vec()).norm();
                    let scale =
                        block.matrix.frobenius_norm() * x.as_vec().norm() + forcing.as_vec().norm();
                    if resid > 1e-10 * scale.max(1.0) {
                        ok = false;
                        detail = format!("residual {resid:.3e} at sigma={sigma}");
                        break;
                    }
                }
                Err(e) => {
                    ok = false;
                    detail = format!("error: {e}");
                    break;
                }
            }
        }
        out.push(Verdict::new(name, ok, detail));
    }

    // conjugate symmetry of the per-mode norm
    {
        let name = "invariant.conjugate_symmetry";
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x55);
        let mut ok = true;
        let mut detail = String::from("||R(i lambda)|| = ||R(-i lambda)|| on 200 draws");
        for _ in 0..200 {
            let params = draw_params(&mut rng, 0.5, 2.0);
            let sigma = 10f64.powf(4.0 * rng.gen::<f64>());
            let lambda = 10f64.powf(-1.0 + 5.0 * rng.gen::<f64>());
            let block = build_modal_block(sigma, &params).unwrap();
            let plus = modal_resolvent_norm(lambda, &block).unwrap();
            let minus = modal_resolvent_norm(-lambda, &block).unwrap();
            if (plus - minus).abs() > 1e-12 * plus {
                ok = false;
                detail = format!("asymmetry at sigma={sigma}, lambda={lambda}");
                break;
            }
        }
        out.push(Verdict::new(name, ok, detail));
    }

    // frequency-domain energy identity at 1e-10
    {
        let name = "invariant.energy_identity";
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x66);
        let mut ok = true;
        let mut detail =
            String::from("theta half-norm equals Re<F,U> to 1e-10 on 100 solved systems");
        'outer: for _ in 0..100 {
            let params = draw_params(&mut rng, 0.5, 2.0);
            let domain = DomainSpec::interval(6).unwrap();
            let forcings: Vec<ModalForcing> = (0..6)
                .map(|_| {
                    let s = draw_state(&mut rng, 1.0);
                    ModalForcing::new(s.u, s.v, s.theta)
                })
                .collect();
            let lambda = 10f64.powf(-1.0 + 4.0 * rng.gen::<f64>());
            match proof_functionals(lambda, &forcings, &params, &domain) {
                Ok(diag) => {
                    let mut re_fu = 0.0;
                    for (i, f) in forcings.iter().enumerate() {
                        let sigma = domain.sigma_at(i + 1).unwrap();
                        let block = build_modal_block(sigma, &params).unwrap();
                        let x = solve_resolvent(lambda, &block, f).unwrap();
                        let fs = ModalState::new(f.f, f.g, f.h);
                        re_fu += weighted_inner(&fs, &x, &block.weights).re;
                    }
                    if (diag.theta_halfnorm_sq - re_fu).abs() > 1e-10 * (1.0 + re_fu.abs()) {
                        ok = false;
                        detail = format!(
                            "identity off by {:.3e} at lambda={lambda}",
                            diag.theta_halfnorm_sq - re_fu
                        );
                        break 'outer;
                    }
                }
                Err(e) => {
                    ok = false;
                    detail = format!("error: {e}");
                    break 'outer;
                }
            }
        }
        out.push(Verdict::new(name, ok, detail));
    }

    // energy monotonicity along simulated traces
    {
        let name = "invariant.energy_monotone";
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x77);
        let mut ok = true;
        let mut detail = String::from("E(t) non-increasing on 20 random multi-mode runs");
        'runs: for _ in 0..20 {
            let params = draw_params(&mut rng, 0.5, 2.0);
            let data = InitialData::new(vec![
                (1.0, draw_state(&mut rng, 1.0)),
                (4.0, draw_state(&mut rng, 1.0)),
                (9.0, draw_state(&mut rng, 1.0)),
            ])
            .unwrap();
            let times = uniform_times(10.0, 200).unwrap();
            let trace = simulate(&data, &params, &times).unwrap();
            for w in trace.energies.windows(2) {
                if w[1] > w[0] + 1e-12 * trace.energies[0] {
                    ok = false;
                    detail = format!("energy increased by {:.3e}", w[1] - w[0]);
                    break 'runs;
                }
            }
        }
        out.push(Verdict::new(name, ok, detail));
    }

    // scan continuity under grid refinement (smoke property)
    {
        let name = "invariant.grid_refinement";
        let params = unit_params(0.6);
        let result = (|| {
            let domain = DomainSpec::interval(1)?;
            let policy = TruncationPolicy::default();
            let coarse = scan_resolvent(&log_grid(1e2, 1e4, 9)?, &params, &domain, &policy)?;
            let fine = scan_resolvent(&log_grid(1e2, 1e4, 17)?, &params, &domain, &policy)?;
            // odd fine rows sit midway (in log) between coarse rows
            let mut worst: f64 = 0.0;
            for k in 0..8 {
                let a = coarse.rows[k].resolvent_norm.ln();
                let b = coarse.rows[k + 1].resolvent_norm.ln();
                let interp = (0.5 * (a + b)).exp();
                let actual = fine.rows[2 * k + 1].resolvent_norm;
                worst = worst.max((interp - actual).abs() / actual);
            }
            Ok(worst)
        })();
        out.push(match result {
            Ok(worst) => Verdict::new(
                name,
                worst < 0.10,
                format!("worst interpolation gap {:.2}% (want < 10%)", worst * 100.0),
            ),
            Err(e) => Verdict::from_error(name, &e),
        });
    }

    // Lemma ratio boundedness over a lambda sweep
    {
        let name = "invariant.lemma_ratios_bounded";
        let params = unit_params(0.75);
        let result = (|| {
            let domain = DomainSpec::interval(8)?;
            let forcings: Vec<ModalForcing> = (1..=8)
                .map(|k| {
                    let s = 1.0 / k as f64;
                    ModalForcing::new(C64::new(s, 0.0), C64::new(0.0, s), C64::new(-s, s))
                })
                .collect();
            let mut l1 = Vec::new();
            let mut l8 = Vec::new();
            for &lambda in &log_grid(10.0, 1e5, 17)? {
                let diag = proof_functionals(lambda, &forcings, &params, &domain)?;
                if !diag.lemma1_ratio.is_finite() || !diag.lemma8_ratio.is_finite() {
                    return Err(crate::error::Error::OutOfRange(
                        "non-finite lemma ratio".into(),
                    ));
                }
                l1.push(diag.lemma1_ratio);
                l8.push(diag.lemma8_ratio);
            }
            Ok((l1, l8))
        })();
        out.push(match result {
            Ok((l1, l8)) => {
                let max = |v: &[f64]| v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let (l1_max, l8_max) = (max(&l1), max(&l8));
                // bounded by a fixed constant, and the top decade contributes
                // no new maximum (the ratios are not drifting upward)
                let head = l1.len() - 5;
                let tail_quiet =
                    max(&l1[head..]) <= max(&l1[..head]) && max(&l8[head..]) <= max(&l8[..head]);
                Verdict::new(
                    name,
                    l1_max <= 100.0 && l8_max <= 100.0 && tail_quiet,
                    format!(
                        "lemma1 max {l1_max:.3}, lemma8 max {l8_max:.3} over lambda in [1e1, 1e5] (tau=0.75, no blow-up)"
                    ),
                )
            }
            Err(e) => Verdict::from_error(name, &e),
        });
    }

    out
}

/// Run criteria 1-8 plus the invariant battery.
pub fn run_all(seed: u64) -> CheckReport {
    let mut verdicts = Vec::new();
    verdicts.extend(criterion1_gevrey_band());
    verdicts.extend(criterion2_analytic_baseline());
    verdicts.extend(criterion3_witness_growth());
    verdicts.extend(criterion4_witness_asymptotics());
    verdicts.extend(criterion5_dissipativity(seed));
    verdicts.extend(criterion6_exponential_stability());
    verdicts.extend(criterion7_oracle_equivalence(seed));
    verdicts.extend(criterion8_semigroup(seed));
    verdicts.extend(invariant_battery(seed));
    CheckReport { verdicts }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_plumbing() {
        let report = CheckReport {
            verdicts: vec![
                Verdict::new("a", true, "fine"),
                Verdict::new("b", false, "broken"),
            ],
        };
        assert!(!report.all_pass());
        let pairs = report.summary_pairs();
        assert_eq!(pairs.last().unwrap().1, "false");
    }
}
