//! Regularity verdicts: Gevrey exponent bands, the non-analyticity witness
//! sequence, empirical decay-exponent fits, and the spectral abscissa.

use crate::error::{Error, Result};
use crate::linalg::cubic_roots;
use crate::modal::{char_poly_coeffs, DomainSpec, Params};
use crate::resolvent::ScanResult;
use num_complex::Complex64 as C64;

/// Theoretical exponents attached to a fractional power tau.
///
/// `phi_theory` is the proven resolvent-decay exponent (the semigroup is of
/// Gevrey class s for every s > 1/phi_theory); `phi_ceiling` is the upper
/// bound on any possible decay exponent implied by the witness sequence, so
/// a measured exponent must land between the two.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GevreyCertificate {
    pub tau: f64,
    pub phi_theory: f64,
    pub s_bound: f64,
    pub phi_ceiling: f64,
}

/// Exponents for a given tau. tau = 0 reports the analytic special case
/// (phi = 1); tau in (0, 1/2) uses the comparative bound s > (2-tau)/(2-4tau);
/// tau in [1/2, 1) uses s > (3-tau)/(2-2tau).
pub fn gevrey_certificate(tau: f64) -> Result<GevreyCertificate> {
    if !tau.is_finite() || !(0.0..1.0).contains(&tau) {
        return Err(Error::OutOfRange(format!(
            "gevrey certificate requires tau in [0, 1), got {tau}"
        )));
    }
    if tau == 0.0 {
        return Ok(GevreyCertificate {
            tau,
            phi_theory: 1.0,
            s_bound: 1.0,
            phi_ceiling: 1.0,
        });
    }
    let phi_theory = if tau < 0.5 {
        (2.0 - 4.0 * tau) / (2.0 - tau)
    } else {
        (2.0 - 2.0 * tau) / (3.0 - tau)
    };
    Ok(GevreyCertificate {
        tau,
        phi_theory,
        s_bound: 1.0 / phi_theory,
        phi_ceiling: (2.0 - 2.0 * tau) / (2.0 - tau),
    })
}

/// One entry of the non-analyticity witness sequence: the modal solution of
/// (i lambda_n I - B) U_n = (0, -e_n, 0) at the resonant frequency
/// lambda_n^2 = sigma_n^2 / (1 + gamma sigma_n^tau).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WitnessRow {
    pub n: usize,
    pub sigma: f64,
    pub lambda: f64,
    pub mu_abs: f64,
    pub nu_abs: f64,
    /// ||U_n||_H with the gamma-weighted velocity norm (the phase-space norm).
    pub norm_h: f64,
    /// Same assembly with the pure power norm ||A^(tau/2) v|| on the velocity
    /// slot; recorded so the equivalence factor between the two conventions
    /// stays visible.
    pub norm_h_pure: f64,
    /// lambda_n * ||U_n||_H, the quantity that must grow ~ lambda^(tau/(2-tau)).
    pub growth: f64,
}

/// Closed-form witness coefficients (lambda_n, mu_n, nu_n) for one mode.
/// The eigenfunction e_n is normalized in D(A^(tau/2)) with the pure power
/// norm, exactly as the counterexample is set up.
pub fn witness_closed_form(sigma: f64, params: &Params) -> Result<(f64, C64, C64)> {
    if params.tau <= 0.0 {
        return Err(Error::WitnessInapplicable(
            "the non-analyticity witness requires tau in (0, 1]".into(),
        ));
    }
    if !(sigma > 0.0) {
        return Err(Error::InvalidMode { sigma });
    }
    let den = params.inertia(sigma);
    let lambda = sigma / den.sqrt();
    let nu = C64::new(den / (params.alpha * sigma), 0.0);
    // from i*lambda*beta*sigma*mu + (i*lambda + kappa*sigma)*nu = 0
    let mu = C64::new(-lambda, params.kappa * sigma) * nu / (lambda * params.beta * sigma);
    Ok((lambda, mu, nu))
}

/// Witness rows for n in `n_range` (inclusive, 1-based), using the domain's
/// eigenvalue sequence.
pub fn witness_sequence(
    params: &Params,
    n_range: (usize, usize),
    domain: &DomainSpec,
) -> Result<Vec<WitnessRow>> {
    params.validate()?;
    if params.tau == 0.0 {
        return Err(Error::WitnessInapplicable(
            "the witness construction needs tau > 0; the semigroup is analytic at tau = 0".into(),
        ));
    }
    let (lo, hi) = n_range;
    if lo == 0 || hi < lo {
        return Err(Error::OutOfRange(format!(
            "witness n-range must be a nonempty 1-based interval, got [{lo}, {hi}]"
        )));
    }
    let mut rows = Vec::with_capacity(hi - lo + 1);
    for n in lo..=hi {
        let sigma = domain.sigma_at(n)?;
        rows.push(witness_row(n, sigma, params)?);
    }
    Ok(rows)
}

fn witness_row(n: usize, sigma: f64, params: &Params) -> Result<WitnessRow> {
    let (lambda, mu, nu) = witness_closed_form(sigma, params)?;
    let den = params.inertia(sigma);
    // L2-normalized representation: e_n has L2 coefficient sigma^(-tau/2)
    let scale = sigma.powf(-params.tau / 2.0);
    let u_sq = (mu.norm_sqr()) * scale * scale;
    let v_sq = lambda * lambda * u_sq;
    let th_sq = nu.norm_sqr() * scale * scale;
    let wu = params.beta * sigma * sigma;
    let norm_h = (wu * u_sq + params.beta * den * v_sq + params.alpha * th_sq).sqrt();
    let norm_h_pure =
        (wu * u_sq + params.beta * sigma.powf(params.tau) * v_sq + params.alpha * th_sq).sqrt();
    Ok(WitnessRow {
        n,
        sigma,
        lambda,
        mu_abs: mu.norm(),
        nu_abs: nu.norm(),
        norm_h,
        norm_h_pure,
        growth: lambda * norm_h,
    })
}

/// Ordinary-least-squares exponent fit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitReport {
    /// Fitted exponent. For resolvent decay this is the negated slope of
    /// log ||R|| vs log lambda; for witness growth it is the slope itself.
    pub exponent: f64,
    pub stderr: f64,
    pub window: (f64, f64),
    pub n_points: usize,
}

fn ols(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let xm = xs.iter().sum::<f64>() / n;
    let ym = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    let slope = sxy / sxx;
    let sse: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - ym - slope * (x - xm);
            r * r
        })
        .sum();
    let dof = (xs.len().max(3) - 2) as f64;
    let stderr = (sse / dof / sxx).sqrt();
    (slope, stderr)
}

/// Fit the resolvent decay exponent over scan rows with lambda inside
/// `window`: log ||R|| is regressed on log lambda and the slope negated.
pub fn fit_decay_exponent(scan: &ScanResult, window: (f64, f64)) -> Result<FitReport> {
    let rows: Vec<_> = scan
        .rows
        .iter()
        .filter(|r| r.lambda >= window.0 && r.lambda <= window.1)
        .collect();
    let flagged: Vec<f64> = rows
        .iter()
        .filter(|r| !r.tail_ok)
        .map(|r| r.lambda)
        .collect();
    if !flagged.is_empty() {
        return Err(Error::UnreliableData { lambdas: flagged });
    }
    if rows.len() < 8 {
        return Err(Error::FitWindow(format!(
            "need at least 8 rows inside [{}, {}], found {}",
            window.0,
            window.1,
            rows.len()
        )));
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.lambda.ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.resolvent_norm.ln()).collect();
    let (slope, stderr) = ols(&xs, &ys);
    Ok(FitReport {
        exponent: -slope,
        stderr,
        window,
        n_points: rows.len(),
    })
}

/// Fit the witness growth exponent: slope of log(lambda_n ||U_n||) against
/// log lambda_n, expected ~ tau/(2-tau).
pub fn witness_growth_exponent(rows: &[WitnessRow]) -> Result<FitReport> {
    if rows.len() < 8 {
        return Err(Error::FitWindow(format!(
            "need at least 8 witness rows, found {}",
            rows.len()
        )));
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.lambda.ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.growth.ln()).collect();
    let (slope, stderr) = ols(&xs, &ys);
    Ok(FitReport {
        exponent: slope,
        stderr,
        window: (rows.first().unwrap().lambda, rows.last().unwrap().lambda),
        n_points: rows.len(),
    })
}

/// Roots summary for one mode of the abscissa scan.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AbscissaRow {
    pub sigma: f64,
    pub re_root_max: f64,
    /// Imaginary part of the root attaining the max (largest im on ties).
    pub im_root_at_max: f64,
}

/// Spectral abscissa over the first `count` modes.
#[derive(Clone, Debug)]
pub struct AbscissaReport {
    pub sup_real: f64,
    pub argmax_sigma: f64,
    pub per_mode: Vec<AbscissaRow>,
}

/// Max real part of the modal cubic roots per mode, plus the supremum over
/// the scanned window. Every mode must be strictly stable; a nonnegative
/// real part is reported as an error since Routh-Hurwitz forbids it.
pub fn spectral_abscissa(
    params: &Params,
    domain: &DomainSpec,
    count: usize,
) -> Result<AbscissaReport> {
    params.validate()?;
    if count == 0 {
        return Err(Error::OutOfRange("mode count must be >= 1".into()));
    }
    let mut per_mode = Vec::with_capacity(count);
    let mut sup = f64::NEG_INFINITY;
    let mut arg = f64::NAN;
    for n in 1..=count {
        let sigma = domain.sigma_at(n)?;
        let row = mode_abscissa(sigma, params)?;
        if row.re_root_max > sup {
            sup = row.re_root_max;
            arg = sigma;
        }
        per_mode.push(row);
    }
    Ok(AbscissaReport {
        sup_real: sup,
        argmax_sigma: arg,
        per_mode,
    })
}

/// Roots of one modal characteristic cubic, reduced to the abscissa row.
pub fn mode_abscissa(sigma: f64, params: &Params) -> Result<AbscissaRow> {
    let (p, q, r) = char_poly_coeffs(sigma, params);
    let roots = cubic_roots(p, q, r);
    let mut best = roots[0];
    for z in &roots[1..] {
        if z.re > best.re || (z.re == best.re && z.im > best.im) {
            best = *z;
        }
    }
    if best.re >= 0.0 {
        return Err(Error::StabilityViolation { sigma, re: best.re });
    }
    Ok(AbscissaRow {
        sigma,
        re_root_max: best.re,
        im_root_at_max: best.im,
    })
}
