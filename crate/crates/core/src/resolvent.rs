//! Resolvent norms on the imaginary axis.
//!
//! The generator is block diagonal over modes, so the global resolvent norm
//! at i*lambda is the supremum over modes of the weighted norm of
//! (i*lambda I - B_sigma)^-1. The per-mode norm peaks near the resonance
//! scale sigma* ~ (gamma * lambda^2)^(1/(2-tau)) where the oscillatory pair
//! of B_sigma crosses height lambda; truncation therefore examines a safety
//! multiple of that scale plus a configurable number of trailing decades
//! whose norms must certify the decay of the tail.

use crate::error::{Error, Result};
use crate::linalg::Mat3;
use crate::modal::{
    build_modal_block, weighted_inner, DomainSpec, ModalBlock, ModalForcing, ModalState, Params,
};
use num_complex::Complex64 as C64;
use rayon::prelude::*;

/// Mode-truncation policy for supremum computations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncationPolicy {
    /// Multiplier on the resonance scale, >= 1.
    pub safety: f64,
    /// Trailing sigma-decades, past the safety multiple, that must sit below
    /// half the peak for the truncation to be certified.
    pub tail_decades: u32,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            safety: 8.0,
            tail_decades: 1,
        }
    }
}

impl TruncationPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.safety >= 1.0 && self.safety.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "truncation safety must be >= 1, got {}",
                self.safety
            )));
        }
        if self.tail_decades == 0 {
            return Err(Error::InvalidParams(
                "tail_decades must be a positive integer".into(),
            ));
        }
        Ok(())
    }

    /// Largest sigma examined for a given lambda.
    pub fn cutoff(&self, lambda: f64, params: &Params) -> f64 {
        self.safety * 10f64.powi(self.tail_decades as i32) * resonance_scale(lambda, params)
    }
}

/// Resonance scale: the sigma at which the oscillatory eigenvalue pair of
/// B_sigma reaches height |lambda|, from lambda^2 ~ sigma^2/(1+gamma*sigma^tau).
pub fn resonance_scale(lambda: f64, params: &Params) -> f64 {
    let l1 = 1.0 + lambda.abs();
    let fractional = (params.gamma * l1 * l1).powf(1.0 / (2.0 - params.tau));
    l1.max(fractional)
}

/// One evaluated grid point of a resolvent scan.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanRow {
    pub lambda: f64,
    pub resolvent_norm: f64,
    /// Mode attaining the supremum (smallest sigma on ties).
    pub argmax_sigma: f64,
    /// Largest sigma examined.
    pub truncated_at: f64,
    /// True when every per-mode norm in the trailing decades stayed below
    /// half the peak.
    pub tail_ok: bool,
}

/// A full scan over a lambda grid.
#[derive(Clone, Debug)]
pub struct ScanResult {
    pub params: Params,
    pub domain: DomainSpec,
    pub rows: Vec<ScanRow>,
}

/// Aggregated frequency-domain diagnostics mirroring the energy estimates.
#[derive(Clone, Copy, Debug)]
pub struct ProofDiagnostics {
    pub lambda: f64,
    /// kappa * alpha * ||A^(1/2) theta||^2 summed over modes.
    pub theta_halfnorm_sq: f64,
    /// ||U||_H^2 / (||F||_H ||U||_H).
    pub lemma1_ratio: f64,
    /// |lambda| [ beta ||A u||^2 + alpha ||theta||^2 ]
    ///   - beta |lambda| ||v||^2 in the weighted velocity norm.
    pub lemma2_gap: f64,
    /// ||A^(1/2) v||^2 / (||F||_H ||U||_H).
    pub lemma8_ratio: f64,
}

/// Solve the shifted block system (i*lambda I - B_sigma) x = forcing.
pub fn solve_resolvent(
    lambda: f64,
    block: &ModalBlock,
    forcing: &ModalForcing,
) -> Result<ModalState> {
    let shifted = shifted_matrix(lambda, block);
    let inv = shifted.inverse().ok_or(Error::IllConditionedBlock {
        lambda,
        sigma: block.sigma,
        cond: f64::INFINITY,
    })?;
    Ok(ModalState::from_vec(&inv.mul_vec(&forcing.as_vec())))
}

fn shifted_matrix(lambda: f64, block: &ModalBlock) -> Mat3 {
    let il = C64::new(0.0, lambda);
    let mut s = block.matrix.scale(C64::new(-1.0, 0.0));
    for i in 0..3 {
        s.0[i][i] += il;
    }
    s
}

/// Weighted operator norm of (i*lambda I - B_sigma)^-1 for one mode:
/// the spectral norm of W M W^-1 with W = diag(sqrt(w)).
pub fn modal_resolvent_norm(lambda: f64, block: &ModalBlock) -> Result<f64> {
    let shifted = shifted_matrix(lambda, block);
    let inv = match shifted.inverse() {
        Some(m) => m,
        None => {
            return Err(Error::IllConditionedBlock {
                lambda,
                sigma: block.sigma,
                cond: f64::INFINITY,
            })
        }
    };
    let sw = block.weights.map(f64::sqrt);
    let mut m = inv;
    for i in 0..3 {
        for j in 0..3 {
            m.0[i][j] *= sw[i] / sw[j];
        }
    }
    let norm = m.spectral_norm();
    if !norm.is_finite() {
        return Err(Error::IllConditionedBlock {
            lambda,
            sigma: block.sigma,
            cond: shifted.frobenius_norm() * inv.frobenius_norm(),
        });
    }
    Ok(norm)
}

/// Supremum of the per-mode resolvent norms over the truncated spectrum.
pub fn global_resolvent_norm(
    lambda: f64,
    params: &Params,
    domain: &DomainSpec,
    policy: &TruncationPolicy,
) -> Result<ScanRow> {
    policy.validate()?;
    params.validate()?;
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(Error::InvalidGrid(format!(
            "lambda must be finite and >= 0, got {lambda}"
        )));
    }
    let cutoff = policy.cutoff(lambda, params);
    let modes = domain.modes_up_to(cutoff)?;
    let truncated_at = modes.last_sigma().ok_or_else(|| {
        Error::InvalidDomain(format!(
            "domain produced no modes below the cutoff {cutoff:.3e}"
        ))
    })?;
    let tail_start = truncated_at / 10f64.powi(policy.tail_decades as i32);

    let mut best = f64::NEG_INFINITY;
    let mut arg = f64::NAN;
    let mut tail_max = f64::NEG_INFINITY;
    for sigma in modes.iter() {
        let block = build_modal_block(sigma, params)?;
        let norm = modal_resolvent_norm(lambda, &block)?;
        if norm > best {
            best = norm;
            arg = sigma;
        }
        if sigma >= tail_start && norm > tail_max {
            tail_max = norm;
        }
    }
    Ok(ScanRow {
        lambda,
        resolvent_norm: best,
        argmax_sigma: arg,
        truncated_at,
        tail_ok: tail_max < 0.5 * best,
    })
}

/// Evaluate `global_resolvent_norm` over a strictly increasing grid.
/// Rows are computed independently (in parallel) and returned in grid order.
pub fn scan_resolvent(
    lambdas: &[f64],
    params: &Params,
    domain: &DomainSpec,
    policy: &TruncationPolicy,
) -> Result<ScanResult> {
    if lambdas.is_empty() {
        return Err(Error::InvalidGrid("empty lambda grid".into()));
    }
    for pair in lambdas.windows(2) {
        if !(pair[1] > pair[0]) {
            return Err(Error::InvalidGrid(
                "lambda grid must be strictly increasing".into(),
            ));
        }
    }
    if lambdas.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
        return Err(Error::InvalidGrid(
            "lambda grid entries must be positive and finite".into(),
        ));
    }
    let rows: Result<Vec<ScanRow>> = lambdas
        .par_iter()
        .map(|&l| global_resolvent_norm(l, params, domain, policy))
        .collect();
    Ok(ScanResult {
        params: *params,
        domain: domain.clone(),
        rows: rows?,
    })
}

/// Log-spaced grid with `points` entries from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo && points >= 2) {
        return Err(Error::InvalidGrid(format!(
            "need 0 < lo < hi and points >= 2, got lo={lo}, hi={hi}, points={points}"
        )));
    }
    let (a, b) = (lo.ln(), hi.ln());
    let mut grid: Vec<f64> = (0..points)
        .map(|k| (a + (b - a) * k as f64 / (points - 1) as f64).exp())
        .collect();
    // pin the endpoints so window filters on [lo, hi] keep them
    grid[0] = lo;
    grid[points - 1] = hi;
    Ok(grid)
}

/// Solve one shifted system per mode and aggregate the estimate functionals.
/// `forcings[i]` drives the (i+1)-th mode of the domain.
pub fn proof_functionals(
    lambda: f64,
    forcings: &[ModalForcing],
    params: &Params,
    domain: &DomainSpec,
) -> Result<ProofDiagnostics> {
    if forcings.is_empty() || forcings.iter().all(|f| f.as_vec().norm() == 0.0) {
        return Err(Error::UndefinedRatio);
    }
    let mut norm_u_sq = 0.0;
    let mut norm_f_sq = 0.0;
    let mut theta_half = 0.0;
    let mut au_sq = 0.0;
    let mut theta_sq = 0.0;
    let mut v_weighted_sq = 0.0;
    let mut v_half_sq = 0.0;
    for (i, forcing) in forcings.iter().enumerate() {
        let sigma = domain.sigma_at(i + 1)?;
        let block = build_modal_block(sigma, params)?;
        let x = solve_resolvent(lambda, &block, forcing)?;
        let f_state = ModalState::new(forcing.f, forcing.g, forcing.h);
        norm_u_sq += weighted_inner(&x, &x, &block.weights).re;
        norm_f_sq += weighted_inner(&f_state, &f_state, &block.weights).re;
        theta_half += params.kappa * params.alpha * sigma * x.theta.norm_sqr();
        au_sq += sigma * sigma * x.u.norm_sqr();
        theta_sq += x.theta.norm_sqr();
        v_weighted_sq += params.inertia(sigma) * x.v.norm_sqr();
        v_half_sq += sigma * x.v.norm_sqr();
    }
    let denom = norm_f_sq.sqrt() * norm_u_sq.sqrt();
    if denom == 0.0 {
        return Err(Error::UndefinedRatio);
    }
    let la = lambda.abs();
    Ok(ProofDiagnostics {
        lambda,
        theta_halfnorm_sq: theta_half,
        lemma1_ratio: norm_u_sq / denom,
        lemma2_gap: la * (params.beta * au_sq + params.alpha * theta_sq)
            - params.beta * la * v_weighted_sq,
        lemma8_ratio: v_half_sq / denom,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modal::modal_norm;
    use approx::assert_relative_eq;

    #[test]
    fn golden_norm_at_zero() {
        // frozen from a dense inverse + SVD computed in extended precision
        let p = Params::unit(0.5).unwrap();
        let b = build_modal_block(1.0, &p).unwrap();
        let n = modal_resolvent_norm(0.0, &b).unwrap();
        assert_relative_eq!(n, 2.481_194_304_092_015_6, max_relative = 1e-12);
    }

    #[test]
    fn large_lambda_limit() {
        // (i lam - B)^-1 ~ (i lam)^-1 I for lam >> ||B||
        let p = Params::unit(0.5).unwrap();
        let b = build_modal_block(1.0, &p).unwrap();
        let lam = 1e7;
        let n = modal_resolvent_norm(lam, &b).unwrap();
        assert_relative_eq!(n * lam, 1.0, max_relative = 1e-5);
    }

    #[test]
    fn conjugate_symmetry() {
        let p = Params::new(0.7, 0.8, 1.3, 2.0, 0.4).unwrap();
        for sigma in [1.0, 9.0, 400.0] {
            let b = build_modal_block(sigma, &p).unwrap();
            for lam in [0.3, 5.0, 120.0] {
                let plus = modal_resolvent_norm(lam, &b).unwrap();
                let minus = modal_resolvent_norm(-lam, &b).unwrap();
                assert_relative_eq!(plus, minus, max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn global_at_zero_matches_small_mode_sup() {
        // at lambda = 0 the per-mode norms decay in sigma, so the sup sits on
        // the first mode and matches a brute-force max over n <= 1000
        let p = Params::unit(0.5).unwrap();
        let domain = DomainSpec::interval(1000).unwrap();
        let row = global_resolvent_norm(0.0, &p, &domain, &TruncationPolicy::default()).unwrap();
        let mut brute = f64::NEG_INFINITY;
        for n in 1..=1000u64 {
            let b = build_modal_block((n * n) as f64, &p).unwrap();
            brute = brute.max(modal_resolvent_norm(0.0, &b).unwrap());
        }
        assert_relative_eq!(row.resolvent_norm, brute, max_relative = 1e-12);
        assert_eq!(row.argmax_sigma, 1.0);
    }

    #[test]
    fn square_domain_matches_explicit_list() {
        // the square spectrum (duplicates kept) feeds the sup exactly like an
        // explicit list of the same eigenvalues
        let p = Params::unit(0.75).unwrap();
        let square = DomainSpec::square(200).unwrap();
        let sigmas = crate::modal::mode_spectrum(&square).unwrap();
        let explicit = DomainSpec::explicit(sigmas).unwrap();
        let policy = TruncationPolicy::default();
        for lam in [0.5, 3.0, 20.0] {
            let a = global_resolvent_norm(lam, &p, &square, &policy).unwrap();
            let b = global_resolvent_norm(lam, &p, &explicit, &policy).unwrap();
            assert_relative_eq!(a.resolvent_norm, b.resolvent_norm, max_relative = 1e-14);
            assert_eq!(a.argmax_sigma, b.argmax_sigma);
        }
    }

    #[test]
    fn global_at_zero_matches_stationary_operator_norm() {
        // definition coincidence: lambda = 0 gives the norm of B^-1, realized
        // through solve_stationary by power iteration in the weighted metric
        let p = Params::unit(0.5).unwrap();
        let b = build_modal_block(1.0, &p).unwrap();
        let n = modal_resolvent_norm(0.0, &b).unwrap();

        let dot = |a: &[f64; 3], c: &[f64; 3]| a[0] * c[0] + a[1] * c[1] + a[2] * c[2];
        let mut y = [1.0f64, 0.7, -0.4];
        for _ in 0..200 {
            let z = gram_apply(&b, &p, y);
            let nz = dot(&z, &z).sqrt();
            y = [z[0] / nz, z[1] / nz, z[2] / nz];
        }
        let est = dot(&y, &gram_apply(&b, &p, y)).sqrt();
        assert_relative_eq!(est, n, max_relative = 1e-10);
    }

    // One application of M^T M in weighted coordinates, where
    // M = W (-B)^-1 W^-1; the forward half goes through solve_stationary.
    fn gram_apply(b: &ModalBlock, p: &Params, z: [f64; 3]) -> [f64; 3] {
        let sw = b.weights.map(f64::sqrt);
        let f = ModalForcing::new(
            C64::new(-z[0] / sw[0], 0.0),
            C64::new(-z[1] / sw[1], 0.0),
            C64::new(-z[2] / sw[2], 0.0),
        );
        let x = crate::modal::solve_stationary(&f, b, p).unwrap();
        let mx = [x.u.re * sw[0], x.v.re * sw[1], x.theta.re * sw[2]];
        // adjoint half: M^T = W^-1 (-B)^-T W, via a dense transpose inverse
        let mut bt = crate::linalg::Mat3::zero();
        for i in 0..3 {
            for j in 0..3 {
                bt.0[i][j] = -b.matrix.0[j][i];
            }
        }
        let inv = bt.inverse().unwrap();
        let rhs = crate::linalg::Vec3([
            C64::new(mx[0] * sw[0], 0.0),
            C64::new(mx[1] * sw[1], 0.0),
            C64::new(mx[2] * sw[2], 0.0),
        ]);
        let w = inv.mul_vec(&rhs);
        [w.0[0].re / sw[0], w.0[1].re / sw[1], w.0[2].re / sw[2]]
    }

    #[test]
    fn resonance_argmax_heuristic() {
        // lambda = 100, tau = 1/2, gamma = 1: argmax within a factor 4 of
        // (gamma lambda^2)^(1/(2-tau)) ~ 10^(8/3)
        let p = Params::unit(0.5).unwrap();
        let domain = DomainSpec::interval(1).unwrap();
        let row = global_resolvent_norm(100.0, &p, &domain, &TruncationPolicy::default()).unwrap();
        let sstar = 1e4f64.powf(1.0 / 1.5);
        assert!(row.argmax_sigma / sstar < 4.0 && sstar / row.argmax_sigma < 4.0);
        // brute-force over n <= 1000 agrees
        let mut brute = f64::NEG_INFINITY;
        let mut brute_arg = 0.0;
        for n in 1..=1000u64 {
            let b = build_modal_block((n * n) as f64, &p).unwrap();
            let v = modal_resolvent_norm(100.0, &b).unwrap();
            if v > brute {
                brute = v;
                brute_arg = b.sigma;
            }
        }
        assert_relative_eq!(row.resolvent_norm, brute, max_relative = 1e-12);
        assert_eq!(row.argmax_sigma, brute_arg);
        assert!(row.tail_ok);
    }

    #[test]
    fn singleton_grid_matches_global() {
        let p = Params::unit(0.5).unwrap();
        let domain = DomainSpec::interval(1).unwrap();
        let policy = TruncationPolicy::default();
        let scan = scan_resolvent(&[5.0], &p, &domain, &policy).unwrap();
        let row = global_resolvent_norm(5.0, &p, &domain, &policy).unwrap();
        assert_eq!(scan.rows.len(), 1);
        assert_eq!(scan.rows[0], row);
    }

    #[test]
    fn scan_rejects_bad_grids() {
        let p = Params::default();
        let d = DomainSpec::interval(1).unwrap();
        let pol = TruncationPolicy::default();
        assert!(scan_resolvent(&[], &p, &d, &pol).is_err());
        assert!(scan_resolvent(&[1.0, 1.0], &p, &d, &pol).is_err());
        assert!(scan_resolvent(&[2.0, 1.0], &p, &d, &pol).is_err());
        assert!(scan_resolvent(&[-1.0, 1.0], &p, &d, &pol).is_err());
    }

    #[test]
    fn tail_decay_past_argmax() {
        // per-mode norms decrease monotonically past the peak within the window
        let p = Params::unit(0.5).unwrap();
        let lam = 300.0;
        let policy = TruncationPolicy::default();
        let cutoff = policy.cutoff(lam, &p);
        let mut norms = Vec::new();
        let mut n = 1u64;
        loop {
            let sigma = (n * n) as f64;
            if sigma > cutoff {
                break;
            }
            let b = build_modal_block(sigma, &p).unwrap();
            norms.push(modal_resolvent_norm(lam, &b).unwrap());
            n += 1;
        }
        let peak = norms
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        for w in norms[peak..].windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-9), "tail not decreasing");
        }
    }

    #[test]
    fn proof_functionals_energy_identity() {
        let p = Params::unit(0.5).unwrap();
        let domain = DomainSpec::interval(4).unwrap();
        let forcings = vec![
            ModalForcing::new(C64::new(0.2, 0.1), C64::new(1.0, 0.0), C64::new(0.0, -0.5)),
            ModalForcing::new(C64::new(0.0, 0.0), C64::new(0.3, 0.4), C64::new(1.0, 0.0)),
            ModalForcing::new(C64::new(-1.0, 2.0), C64::new(0.0, 0.0), C64::new(0.1, 0.1)),
        ];
        let lam = 3.7;
        let diag = proof_functionals(lam, &forcings, &p, &domain).unwrap();
        // recompute Re<F,U> directly
        let mut re_fu = 0.0;
        for (i, f) in forcings.iter().enumerate() {
            let sigma = domain.sigma_at(i + 1).unwrap();
            let b = build_modal_block(sigma, &p).unwrap();
            let x = solve_resolvent(lam, &b, f).unwrap();
            let fs = ModalState::new(f.f, f.g, f.h);
            re_fu += weighted_inner(&fs, &x, &b.weights).re;
        }
        assert_relative_eq!(diag.theta_halfnorm_sq, re_fu, max_relative = 1e-10);
    }

    #[test]
    fn scan_tau_zero_is_analytic_like() {
        // lambda * ||R|| stays bounded across a short grid in the analytic case
        let p = Params::new(1.0, 0.0, 1.0, 1.0, 1.0).unwrap();
        let domain = DomainSpec::interval(1).unwrap();
        let scan = scan_resolvent(
            &[1.0, 10.0, 100.0],
            &p,
            &domain,
            &TruncationPolicy::default(),
        )
        .unwrap();
        let products: Vec<f64> = scan
            .rows
            .iter()
            .map(|r| r.lambda * r.resolvent_norm)
            .collect();
        let max = products.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert!(max < 20.0, "lambda*||R|| grew to {max}");
    }

    #[test]
    fn resonant_forcing_matches_witness_quantities() {
        // forcing (0, -e_n, 0) at lambda_n reproduces the closed-form witness
        let p = Params::unit(0.5).unwrap();
        let domain = DomainSpec::interval(4).unwrap();
        let n = 3usize;
        let sigma = domain.sigma_at(n).unwrap();
        let (lambda, _, _) = crate::regularity::witness_closed_form(sigma, &p).unwrap();
        let row = &crate::regularity::witness_sequence(&p, (n, n), &domain).unwrap()[0];
        let scale = sigma.powf(-p.tau / 2.0);
        let mut forcings = vec![ModalForcing::zero(); n];
        forcings[n - 1] = ModalForcing::new(
            C64::new(0.0, 0.0),
            C64::new(-scale, 0.0),
            C64::new(0.0, 0.0),
        );
        let diag = proof_functionals(lambda, &forcings, &p, &domain).unwrap();
        // ||U||_H is the witness phase norm; ||F||_H is the weighted norm of -e_n
        let block = build_modal_block(sigma, &p).unwrap();
        let f_norm = (block.weights[1] * scale * scale).sqrt();
        assert_relative_eq!(diag.lemma1_ratio, row.norm_h / f_norm, max_relative = 1e-10);
        let theta_sq = row.nu_abs * row.nu_abs * scale * scale;
        assert_relative_eq!(
            diag.theta_halfnorm_sq,
            p.kappa * p.alpha * sigma * theta_sq,
            max_relative = 1e-10
        );
    }

    #[test]
    fn proof_functionals_rejects_zero_forcing() {
        let p = Params::default();
        let domain = DomainSpec::interval(2).unwrap();
        let err = proof_functionals(1.0, &[ModalForcing::zero()], &p, &domain);
        assert!(matches!(err, Err(Error::UndefinedRatio)));
        let err = proof_functionals(1.0, &[], &p, &domain);
        assert!(matches!(err, Err(Error::UndefinedRatio)));
    }

    #[test]
    fn single_mode_forcing_matches_dense_solve() {
        // forcing (0, g, 0) on mode sigma = 1, lambda = 1: full record
        let p = Params::unit(0.5).unwrap();
        let domain = DomainSpec::interval(1).unwrap();
        let g = C64::new(1.0, 0.0);
        let f = ModalForcing::new(C64::new(0.0, 0.0), g, C64::new(0.0, 0.0));
        let diag = proof_functionals(1.0, &[f], &p, &domain).unwrap();
        let b = build_modal_block(1.0, &p).unwrap();
        let x = solve_resolvent(1.0, &b, &f).unwrap();
        let nu = modal_norm(&x, &b);
        let nf = modal_norm(&ModalState::new(f.f, f.g, f.h), &b);
        assert_relative_eq!(diag.lemma1_ratio, nu / nf, max_relative = 1e-12);
        assert_relative_eq!(
            diag.theta_halfnorm_sq,
            p.kappa * p.alpha * 1.0 * x.theta.norm_sqr(),
            max_relative = 1e-12
        );
    }
}
