//! Modal decomposition of the thermoelastic plate generator.
//!
//! With hinged plate / Dirichlet temperature boundary conditions every field
//! expands in the eigenbasis of the Dirichlet Laplacian, and the generator
//! acts on each mode (eigenvalue `sigma`) as an independent 3x3 block
//!
//! ```text
//!         |        0                 1              0        |
//! B_s  =  | -s^2/(1+g*s^t)           0       a*s/(1+g*s^t)   |
//!         |        0               -b*s           -k*s       |
//! ```
//!
//! acting on the coefficients (u, v, theta) of one L2-normalized eigenfunction.
//! The phase-space norm restricted to that mode is diagonal with weights
//! `(b*s^2, b*(1+g*s^t), a)`, using the weighted equivalent norm on the
//! velocity component.

use crate::error::{Error, Result};
use crate::linalg::{Mat3, Vec3};
use num_complex::Complex64 as C64;

/// Relative tolerance for exact per-mode identities (stationary solve
/// residuals and similar); everything checked against it is O(1)..O(sigma^2)
/// in double precision.
pub const DEFAULT_IDENTITY_TOL: f64 = 1e-10;

/// Physical and coupling constants of the plate system.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Params {
    /// Rotational inertia coefficient, > 0.
    pub gamma: f64,
    /// Fractional power of the Laplacian in the inertia term, in [0, 1].
    pub tau: f64,
    /// Coupling coefficient on the thermal term of the plate equation, > 0.
    pub alpha: f64,
    /// Coupling coefficient on the velocity term of the heat equation, > 0.
    pub beta: f64,
    /// Heat conduction coefficient, > 0.
    pub kappa: f64,
}

impl Params {
    pub fn new(gamma: f64, tau: f64, alpha: f64, beta: f64, kappa: f64) -> Result<Self> {
        let p = Params {
            gamma,
            tau,
            alpha,
            beta,
            kappa,
        };
        p.validate()?;
        Ok(p)
    }

    /// All couplings 1, tau = 1/2.
    pub fn unit(tau: f64) -> Result<Self> {
        Params::new(1.0, tau, 1.0, 1.0, 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        let pos = [
            ("gamma", self.gamma),
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("kappa", self.kappa),
        ];
        for (name, v) in pos {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParams(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        if !(0.0..=1.0).contains(&self.tau) {
            return Err(Error::InvalidParams(format!(
                "tau must lie in [0, 1], got {}",
                self.tau
            )));
        }
        Ok(())
    }

    /// The inertia denominator 1 + gamma * sigma^tau.
    pub fn inertia(&self, sigma: f64) -> f64 {
        1.0 + self.gamma * sigma.powf(self.tau)
    }
}

impl Default for Params {
    fn default() -> Self {
        Params {
            gamma: 1.0,
            tau: 0.5,
            alpha: 1.0,
            beta: 1.0,
            kappa: 1.0,
        }
    }
}

/// Which eigenvalue sequence of the Dirichlet Laplacian to use.
#[derive(Clone, Debug, PartialEq)]
pub enum DomainKind {
    /// Interval (0, pi): sigma_n = n^2.
    Interval,
    /// Square (0, pi)^2: the sorted multiset { j^2 + k^2 : j, k >= 1 },
    /// duplicates kept.
    Square,
    /// Explicit, finite, caller-supplied eigenvalue list.
    Explicit(Vec<f64>),
}

/// A mode-sequence request: the kind of domain plus how many modes.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainSpec {
    pub kind: DomainKind,
    pub count: usize,
}

impl DomainSpec {
    pub fn interval(count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidDomain("count must be >= 1".into()));
        }
        Ok(DomainSpec {
            kind: DomainKind::Interval,
            count,
        })
    }

    pub fn square(count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidDomain("count must be >= 1".into()));
        }
        Ok(DomainSpec {
            kind: DomainKind::Square,
            count,
        })
    }

    pub fn explicit(sigmas: Vec<f64>) -> Result<Self> {
        if sigmas.is_empty() {
            return Err(Error::InvalidDomain(
                "explicit eigenvalue list is empty".into(),
            ));
        }
        for pair in sigmas.windows(2) {
            if pair[1] < pair[0] {
                return Err(Error::InvalidDomain(
                    "explicit eigenvalue list must be sorted ascending".into(),
                ));
            }
        }
        if sigmas.iter().any(|&s| !(s > 0.0 && s.is_finite())) {
            return Err(Error::InvalidDomain(
                "explicit eigenvalues must be positive and finite".into(),
            ));
        }
        let count = sigmas.len();
        Ok(DomainSpec {
            kind: DomainKind::Explicit(sigmas),
            count,
        })
    }

    /// n-th eigenvalue, 1-based. O(1) for the interval, O(n log n) for the
    /// square (generates the sorted prefix), O(1) for explicit lists.
    pub fn sigma_at(&self, n: usize) -> Result<f64> {
        if n == 0 {
            return Err(Error::InvalidDomain("mode index is 1-based".into()));
        }
        match &self.kind {
            DomainKind::Interval => Ok((n as f64) * (n as f64)),
            DomainKind::Square => Ok(square_spectrum(n)[n - 1]),
            DomainKind::Explicit(sigmas) => sigmas.get(n - 1).copied().ok_or_else(|| {
                Error::InvalidDomain(format!(
                    "explicit list has {} modes, index {n} requested",
                    sigmas.len()
                ))
            }),
        }
    }

    /// All modes with sigma <= sigma_max, ascending. The interval variant is
    /// allocation-free; scans over large cutoffs rely on that. Square domains
    /// hold ~(pi/4) sigma_max modes below the cutoff, so oversized requests
    /// are refused rather than exhausting memory.
    pub fn modes_up_to(&self, sigma_max: f64) -> Result<ModeSeq> {
        const SQUARE_MODE_LIMIT: f64 = 2e8;
        match &self.kind {
            DomainKind::Interval => {
                let n_max = if sigma_max >= 1.0 {
                    sigma_max.sqrt().floor() as u64
                } else {
                    0
                };
                Ok(ModeSeq::Interval { n_max })
            }
            DomainKind::Square => {
                if sigma_max > SQUARE_MODE_LIMIT {
                    return Err(Error::InvalidDomain(format!(
                        "square domain would enumerate ~{:.1e} modes below sigma = {sigma_max:.3e}; \
                         use a smaller lambda range or an interval/explicit domain",
                        0.79 * sigma_max
                    )));
                }
                let mut v = Vec::new();
                let jmax = if sigma_max >= 2.0 {
                    (sigma_max - 1.0).sqrt().floor() as u64
                } else {
                    0
                };
                for j in 1..=jmax {
                    for k in 1..=jmax {
                        let s = (j * j + k * k) as f64;
                        if s <= sigma_max {
                            v.push(s);
                        }
                    }
                }
                v.sort_by(|a, b| a.partial_cmp(b).unwrap());
                Ok(ModeSeq::List(v))
            }
            DomainKind::Explicit(sigmas) => {
                let v: Vec<f64> = sigmas.iter().copied().filter(|&s| s <= sigma_max).collect();
                Ok(ModeSeq::List(v))
            }
        }
    }

    /// Exact membership test against the spectrum.
    pub fn contains(&self, sigma: f64) -> bool {
        match &self.kind {
            DomainKind::Interval => {
                let n = sigma.sqrt().round();
                n >= 1.0 && n * n == sigma
            }
            DomainKind::Square => {
                if sigma < 2.0 || sigma.fract() != 0.0 {
                    return false;
                }
                let s = sigma as u64;
                let jmax = ((s - 1) as f64).sqrt() as u64 + 1;
                (1..=jmax).any(|j| {
                    let rest = s.checked_sub(j * j);
                    match rest {
                        Some(r) if r >= 1 => {
                            let k = (r as f64).sqrt().round() as u64;
                            k >= 1 && k * k == r
                        }
                        _ => false,
                    }
                })
            }
            DomainKind::Explicit(sigmas) => sigmas.contains(&sigma),
        }
    }
}

/// Ascending eigenvalue stream produced by [`DomainSpec::modes_up_to`].
pub enum ModeSeq {
    Interval { n_max: u64 },
    List(Vec<f64>),
}

impl ModeSeq {
    pub fn last_sigma(&self) -> Option<f64> {
        match self {
            ModeSeq::Interval { n_max } => {
                if *n_max == 0 {
                    None
                } else {
                    Some((*n_max as f64) * (*n_max as f64))
                }
            }
            ModeSeq::List(v) => v.last().copied(),
        }
    }

    pub fn iter(&self) -> Box<dyn Iterator<Item = f64> + '_> {
        match self {
            ModeSeq::Interval { n_max } => Box::new((1..=*n_max).map(|n| (n as f64) * (n as f64))),
            ModeSeq::List(v) => Box::new(v.iter().copied()),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            ModeSeq::Interval { n_max } => *n_max as usize,
            ModeSeq::List(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn square_spectrum(count: usize) -> Vec<f64> {
    // grow the enumeration box until `count` values of j^2+k^2 are available
    let mut limit = 2.0 * (count as f64).max(4.0);
    loop {
        let mut v: Vec<u64> = Vec::new();
        let jmax = (limit.sqrt() as u64).max(1);
        for j in 1..=jmax {
            for k in 1..=jmax {
                let s = j * j + k * k;
                if (s as f64) <= limit {
                    v.push(s);
                }
            }
        }
        if v.len() >= count {
            v.sort_unstable();
            return v.into_iter().take(count).map(|s| s as f64).collect();
        }
        limit *= 2.0;
    }
}

/// First `domain.count` eigenvalues of the Laplacian, ascending.
pub fn mode_spectrum(domain: &DomainSpec) -> Result<Vec<f64>> {
    match &domain.kind {
        DomainKind::Interval => Ok((1..=domain.count)
            .map(|n| (n as f64) * (n as f64))
            .collect()),
        DomainKind::Square => Ok(square_spectrum(domain.count)),
        DomainKind::Explicit(sigmas) => {
            if domain.count > sigmas.len() {
                return Err(Error::InvalidDomain(format!(
                    "explicit list has {} modes, {} requested",
                    sigmas.len(),
                    domain.count
                )));
            }
            Ok(sigmas[..domain.count].to_vec())
        }
    }
}

/// One mode's 3x3 generator block with its norm weights.
#[derive(Clone, Debug, PartialEq)]
pub struct ModalBlock {
    pub sigma: f64,
    pub matrix: Mat3,
    /// Diagonal phase-space weights (w_u, w_v, w_theta).
    pub weights: [f64; 3],
}

/// One mode's coefficients in the phase space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModalState {
    pub u: C64,
    pub v: C64,
    pub theta: C64,
}

impl ModalState {
    pub fn new(u: C64, v: C64, theta: C64) -> Self {
        ModalState { u, v, theta }
    }

    pub fn zero() -> Self {
        ModalState {
            u: C64::new(0.0, 0.0),
            v: C64::new(0.0, 0.0),
            theta: C64::new(0.0, 0.0),
        }
    }

    pub fn as_vec(&self) -> Vec3 {
        Vec3([self.u, self.v, self.theta])
    }

    pub fn from_vec(v: &Vec3) -> Self {
        ModalState {
            u: v.0[0],
            v: v.0[1],
            theta: v.0[2],
        }
    }

    pub fn is_finite(&self) -> bool {
        [self.u, self.v, self.theta]
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// Right-hand side for one mode's stationary or resolvent problem.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModalForcing {
    pub f: C64,
    pub g: C64,
    pub h: C64,
}

impl ModalForcing {
    pub fn new(f: C64, g: C64, h: C64) -> Self {
        ModalForcing { f, g, h }
    }

    pub fn zero() -> Self {
        ModalForcing::new(C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0))
    }

    pub fn as_vec(&self) -> Vec3 {
        Vec3([self.f, self.g, self.h])
    }
}

/// Assemble the 3x3 generator block and norm weights for one eigenvalue.
pub fn build_modal_block(sigma: f64, params: &Params) -> Result<ModalBlock> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidMode { sigma });
    }
    let den = params.inertia(sigma);
    let matrix = Mat3::from_real([
        [0.0, 1.0, 0.0],
        [-sigma * sigma / den, 0.0, params.alpha * sigma / den],
        [0.0, -params.beta * sigma, -params.kappa * sigma],
    ]);
    let weights = [params.beta * sigma * sigma, params.beta * den, params.alpha];
    Ok(ModalBlock {
        sigma,
        matrix,
        weights,
    })
}

/// Coefficients (p, q, r) of the modal characteristic cubic
/// z^3 + p z^2 + q z + r; all three are positive and p*q > r, which is the
/// Routh-Hurwitz certificate that every root has negative real part.
pub fn char_poly_coeffs(sigma: f64, params: &Params) -> (f64, f64, f64) {
    let den = params.inertia(sigma);
    let p = params.kappa * sigma;
    let q = (1.0 + params.alpha * params.beta) * sigma * sigma / den;
    let r = params.kappa * sigma * sigma * sigma / den;
    (p, q, r)
}

/// Weighted inner product <x, y> = sum_i w_i x_i conj(y_i).
pub fn weighted_inner(x: &ModalState, y: &ModalState, weights: &[f64; 3]) -> C64 {
    weights[0] * x.u * y.u.conj()
        + weights[1] * x.v * y.v.conj()
        + weights[2] * x.theta * y.theta.conj()
}

/// Phase-space norm of one mode's state.
pub fn modal_norm(state: &ModalState, block: &ModalBlock) -> f64 {
    let w = &block.weights;
    (w[0] * state.u.norm_sqr() + w[1] * state.v.norm_sqr() + w[2] * state.theta.norm_sqr()).sqrt()
}

/// Both sides of the per-mode dissipativity identity
/// Re<B x, x> = -kappa * alpha * sigma * |theta|^2.
///
/// Returns (lhs, rhs); the caller asserts |lhs - rhs| <= tol * (1 + |rhs|).
pub fn dissipation_residual(state: &ModalState, block: &ModalBlock, params: &Params) -> (f64, f64) {
    let bx = ModalState::from_vec(&block.matrix.mul_vec(&state.as_vec()));
    let lhs = weighted_inner(&bx, state, &block.weights).re;
    let rhs = -params.kappa * params.alpha * block.sigma * state.theta.norm_sqr();
    (lhs, rhs)
}

/// Solve the stationary problem B_s x = forcing by direct elimination:
/// v = f, then theta from the heat row, then u from the plate row.
pub fn solve_stationary(
    forcing: &ModalForcing,
    block: &ModalBlock,
    params: &Params,
) -> Result<ModalState> {
    let sigma = block.sigma;
    let den = params.inertia(sigma);
    let v = forcing.f;
    let theta = -(forcing.h + params.beta * sigma * forcing.f) / (params.kappa * sigma);
    let u = (params.alpha * sigma * theta - den * forcing.g) / (sigma * sigma);
    let x = ModalState::new(u, v, theta);

    // invertibility failure here means the block itself was built wrong
    let residual = block
        .matrix
        .mul_vec(&x.as_vec())
        .sub(&forcing.as_vec())
        .norm();
    // natural magnitude of the products entering the residual
    let scale = block.matrix.frobenius_norm() * x.as_vec().norm() + forcing.as_vec().norm() + 1.0;
    if !x.is_finite() || residual > DEFAULT_IDENTITY_TOL * scale {
        return Err(Error::SingularBlock {
            sigma,
            detail: format!("stationary solve residual {residual:.3e}"),
        });
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn interval_spectrum_first_four() {
        let d = DomainSpec::interval(4).unwrap();
        assert_eq!(mode_spectrum(&d).unwrap(), vec![1.0, 4.0, 9.0, 16.0]);
    }

    #[test]
    fn square_spectrum_keeps_duplicates() {
        let d = DomainSpec::square(5).unwrap();
        assert_eq!(mode_spectrum(&d).unwrap(), vec![2.0, 5.0, 5.0, 8.0, 10.0]);
    }

    #[test]
    fn explicit_passthrough() {
        let d = DomainSpec::explicit(vec![3.5, 7.25]).unwrap();
        assert_eq!(mode_spectrum(&d).unwrap(), vec![3.5, 7.25]);
    }

    #[test]
    fn explicit_rejects_bad_lists() {
        assert!(DomainSpec::explicit(vec![]).is_err());
        assert!(DomainSpec::explicit(vec![1.0, -2.0]).is_err());
        assert!(DomainSpec::explicit(vec![2.0, 1.0]).is_err());
    }

    #[test]
    fn spectra_match_brute_force() {
        let n = 10_000;
        let interval = mode_spectrum(&DomainSpec::interval(n).unwrap()).unwrap();
        let brute: Vec<f64> = (1..=n).map(|k| (k * k) as f64).collect();
        assert_eq!(interval, brute);

        let square = mode_spectrum(&DomainSpec::square(n).unwrap()).unwrap();
        let mut brute: Vec<u64> = Vec::new();
        for j in 1u64..=200 {
            for k in 1u64..=200 {
                brute.push(j * j + k * k);
            }
        }
        brute.sort_unstable();
        let brute: Vec<f64> = brute.into_iter().take(n).map(|s| s as f64).collect();
        assert_eq!(square, brute);
    }

    #[test]
    fn block_examples() {
        let p = Params::unit(0.5).unwrap();
        let b = build_modal_block(1.0, &p).unwrap();
        let m = &b.matrix.0;
        assert_eq!(m[1][0].re, -0.5);
        assert_eq!(m[1][2].re, 0.5);
        assert_eq!(m[2][1].re, -1.0);
        assert_eq!(m[2][2].re, -1.0);
        assert_eq!(b.weights, [1.0, 2.0, 1.0]);

        let b = build_modal_block(4.0, &p).unwrap();
        assert_relative_eq!(b.matrix.0[1][0].re, -16.0 / 3.0, max_relative = 1e-15);
        assert_relative_eq!(b.matrix.0[1][2].re, 4.0 / 3.0, max_relative = 1e-15);
        assert_eq!(b.weights, [16.0, 3.0, 1.0]);

        let p = Params::new(2.0, 0.0, 1.0, 1.0, 1.0).unwrap();
        let b = build_modal_block(1.0, &p).unwrap();
        assert_relative_eq!(b.matrix.0[1][0].re, -1.0 / 3.0, max_relative = 1e-15);
        assert_eq!(b.matrix.0[1][1].re, 0.0);
        assert_relative_eq!(b.matrix.0[1][2].re, 1.0 / 3.0, max_relative = 1e-15);
    }

    #[test]
    fn block_rejects_nonpositive_sigma() {
        let p = Params::default();
        assert!(matches!(
            build_modal_block(0.0, &p),
            Err(Error::InvalidMode { .. })
        ));
        assert!(build_modal_block(-3.0, &p).is_err());
    }

    #[test]
    fn norm_examples() {
        let p = Params::unit(0.5).unwrap();
        let b = build_modal_block(2.0, &p).unwrap();
        let s = ModalState::new(c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0));
        assert_relative_eq!(
            modal_norm(&s, &b),
            (6.0 + 2.0f64.sqrt()).sqrt(),
            max_relative = 1e-15
        );
        assert_relative_eq!(
            modal_norm(&s, &b),
            2.722_905_353_179_411_4,
            max_relative = 1e-15
        );

        assert_eq!(modal_norm(&ModalState::zero(), &b), 0.0);

        let p = Params::new(2.0, 1.0, 1.0, 3.0, 1.0).unwrap();
        let b = build_modal_block(9.0, &p).unwrap();
        let s = ModalState::new(c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0));
        assert_relative_eq!(modal_norm(&s, &b), 57.0f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn dissipation_examples() {
        let p = Params::unit(0.5).unwrap();
        let b = build_modal_block(2.0, &p).unwrap();
        let s = ModalState::new(c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0));
        let (lhs, rhs) = dissipation_residual(&s, &b, &p);
        assert_relative_eq!(lhs, -2.0, max_relative = 1e-14);
        assert_eq!(rhs, -2.0);

        let s = ModalState::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
        let (lhs, rhs) = dissipation_residual(&s, &b, &p);
        assert_eq!(lhs, 0.0);
        assert_eq!(rhs, 0.0);
    }

    #[test]
    fn dissipation_random_state_spec_example() {
        // sigma=7, tau=0.8, (gamma, alpha, beta, kappa) = (2, 1, 3, 0.5)
        let p = Params::new(2.0, 0.8, 1.0, 3.0, 0.5).unwrap();
        let b = build_modal_block(7.0, &p).unwrap();
        let s = ModalState::new(c(0.3, -0.7), c(-1.1, 0.2), c(0.5, 0.9));
        let (lhs, rhs) = dissipation_residual(&s, &b, &p);
        assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()));
    }

    #[test]
    fn stationary_examples() {
        let p = Params::unit(0.5).unwrap();
        let b = build_modal_block(1.0, &p).unwrap();

        let x = solve_stationary(&ModalForcing::zero(), &b, &p).unwrap();
        assert_eq!(x, ModalState::zero());

        let f = ModalForcing::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
        let x = solve_stationary(&f, &b, &p).unwrap();
        assert_relative_eq!(x.u.re, -1.0, max_relative = 1e-14);
        assert_relative_eq!(x.v.re, 1.0, max_relative = 1e-14);
        assert_relative_eq!(x.theta.re, -1.0, max_relative = 1e-14);

        let f = ModalForcing::new(c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0));
        let x = solve_stationary(&f, &b, &p).unwrap();
        assert_relative_eq!(x.u.re, -2.0, max_relative = 1e-14);
        assert_eq!(x.v.re, 0.0);
        assert_eq!(x.theta.re, 0.0);
    }

    #[test]
    fn stationary_solve_flags_broken_blocks() {
        // a hand-corrupted block (zero heat row) cannot reproduce the forcing
        let p = Params::unit(0.5).unwrap();
        let mut b = build_modal_block(1.0, &p).unwrap();
        b.matrix.0[2] = [c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let f = ModalForcing::new(c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0));
        assert!(matches!(
            solve_stationary(&f, &b, &p),
            Err(Error::SingularBlock { .. })
        ));
    }

    #[test]
    fn routh_hurwitz_coefficients() {
        let p = Params::unit(0.5).unwrap();
        let (a, b, c) = char_poly_coeffs(1.0, &p);
        assert_relative_eq!(a, 1.0);
        assert_relative_eq!(b, 1.0);
        assert_relative_eq!(c, 0.5);
    }

    #[test]
    fn params_validation() {
        assert!(Params::new(0.0, 0.5, 1.0, 1.0, 1.0).is_err());
        assert!(Params::new(1.0, 1.5, 1.0, 1.0, 1.0).is_err());
        assert!(Params::new(1.0, -0.1, 1.0, 1.0, 1.0).is_err());
        assert!(Params::new(1.0, 1.0, 1.0, 1.0, 1.0).is_ok());
        assert!(Params::new(1.0, 0.0, 1.0, 1.0, 1.0).is_ok());
    }

    #[test]
    fn domain_membership() {
        let d = DomainSpec::interval(10).unwrap();
        assert!(d.contains(1.0));
        assert!(d.contains(144.0));
        assert!(!d.contains(3.0));
        let d = DomainSpec::square(10).unwrap();
        assert!(d.contains(2.0));
        assert!(d.contains(5.0));
        assert!(!d.contains(3.0));
        assert!(!d.contains(7.0));
    }
}
