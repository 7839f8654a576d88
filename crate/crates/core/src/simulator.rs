//! Exact time-domain evolution: each mode evolves by the 3x3 matrix
//! exponential of its generator block, so there is no time-stepping error,
//! only the choice between an eigendecomposition (well-separated roots) and
//! scaling-and-squaring (near-defective blocks).

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues_real3, eigenvector3, expm, Mat3, Vec3};
use crate::modal::{build_modal_block, ModalBlock, ModalState, Params};
use num_complex::Complex64 as C64;

/// Initial data as modal coefficients of (u0, u1, theta0).
#[derive(Clone, Debug)]
pub struct InitialData {
    pub modes: Vec<(f64, ModalState)>,
}

impl InitialData {
    pub fn new(modes: Vec<(f64, ModalState)>) -> Result<Self> {
        for (i, (sigma, state)) in modes.iter().enumerate() {
            if !(*sigma > 0.0 && sigma.is_finite()) {
                return Err(Error::InvalidMode { sigma: *sigma });
            }
            if !state.is_finite() {
                return Err(Error::InvalidParams(format!(
                    "initial state for mode {i} has non-finite components"
                )));
            }
        }
        let mut sigmas: Vec<f64> = modes.iter().map(|(s, _)| *s).collect();
        sigmas.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if sigmas.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParams(
                "initial data lists the same sigma twice".into(),
            ));
        }
        Ok(InitialData { modes })
    }

    pub fn single(sigma: f64, state: ModalState) -> Result<Self> {
        InitialData::new(vec![(sigma, state)])
    }
}

/// Energy and dissipation histories along a simulated trajectory.
#[derive(Clone, Debug)]
pub struct SimTrace {
    pub times: Vec<f64>,
    /// (1/2) ||U(t)||_H^2.
    pub energies: Vec<f64>,
    /// kappa * alpha * ||A^(1/2) theta(t)||^2, the instantaneous dissipation.
    pub theta_dissipation: Vec<f64>,
}

/// Relative eigenvalue-separation threshold below which the exponential
/// falls back from eigendecomposition to scaling-and-squaring.
const EIG_SEPARATION: f64 = 1e-6;

enum PropagatorKind {
    Eigen {
        eigvals: [C64; 3],
        basis: Mat3,
        basis_inv: Mat3,
    },
    Pade {
        matrix: Mat3,
    },
}

/// Per-block propagator: fixes the decomposition once, then evaluates
/// exp(t B) at any number of times.
pub struct Propagator {
    kind: PropagatorKind,
}

impl Propagator {
    pub fn new(block: &ModalBlock) -> Self {
        let m = &block.matrix;
        let eigvals = eigenvalues_real3(m);
        let scale = m.frobenius_norm();
        let mut min_sep = f64::INFINITY;
        for i in 0..3 {
            for j in (i + 1)..3 {
                min_sep = min_sep.min((eigvals[i] - eigvals[j]).norm());
            }
        }
        if min_sep > EIG_SEPARATION * scale {
            let vs: Option<Vec<Vec3>> = eigvals.iter().map(|z| eigenvector3(m, *z)).collect();
            if let Some(vs) = vs {
                let mut basis = Mat3::zero();
                for (j, v) in vs.iter().enumerate() {
                    for i in 0..3 {
                        basis.0[i][j] = v.0[i];
                    }
                }
                if let Some(basis_inv) = basis.inverse() {
                    return Propagator {
                        kind: PropagatorKind::Eigen {
                            eigvals,
                            basis,
                            basis_inv,
                        },
                    };
                }
            }
        }
        Propagator {
            kind: PropagatorKind::Pade { matrix: *m },
        }
    }

    pub fn at(&self, t: f64) -> Mat3 {
        match &self.kind {
            PropagatorKind::Eigen {
                eigvals,
                basis,
                basis_inv,
            } => {
                let mut d = Mat3::zero();
                for i in 0..3 {
                    d.0[i][i] = (eigvals[i] * t).exp();
                }
                basis.mul(&d).mul(basis_inv)
            }
            PropagatorKind::Pade { matrix } => expm(&matrix.scale(C64::new(t, 0.0))),
        }
    }
}

/// exp(t B_sigma) for one block.
pub fn modal_propagator(block: &ModalBlock, t: f64) -> Mat3 {
    debug_assert!(t >= 0.0, "propagation time must be nonnegative");
    Propagator::new(block).at(t)
}

/// Neumaier compensated sum; keeps trace assembly reproducible across
/// summation chunkings.
fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Propagate every mode exactly and assemble energy and dissipation traces.
pub fn simulate(data: &InitialData, params: &Params, times: &[f64]) -> Result<SimTrace> {
    params.validate()?;
    if data.modes.is_empty() {
        return Ok(SimTrace {
            times: Vec::new(),
            energies: Vec::new(),
            theta_dissipation: Vec::new(),
        });
    }
    if times.is_empty() {
        return Err(Error::InvalidGrid("empty time grid".into()));
    }
    if times[0] < 0.0 {
        return Err(Error::InvalidGrid("times must start at t >= 0".into()));
    }
    for w in times.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::InvalidGrid(
                "time grid must be strictly increasing".into(),
            ));
        }
    }

    let n_modes = data.modes.len();
    let mut energy_terms = vec![0.0; n_modes];
    let mut diss_terms = vec![0.0; n_modes];
    let mut energies = Vec::with_capacity(times.len());
    let mut dissipations = Vec::with_capacity(times.len());

    let blocks: Result<Vec<(ModalBlock, Propagator)>> = data
        .modes
        .iter()
        .map(|(sigma, _)| {
            let b = build_modal_block(*sigma, params)?;
            let p = Propagator::new(&b);
            Ok((b, p))
        })
        .collect();
    let blocks = blocks?;

    for &t in times {
        for (m, ((block, prop), (_, x0))) in blocks.iter().zip(&data.modes).enumerate() {
            let x = ModalState::from_vec(&prop.at(t).mul_vec(&x0.as_vec()));
            let w = &block.weights;
            energy_terms[m] =
                0.5 * (w[0] * x.u.norm_sqr() + w[1] * x.v.norm_sqr() + w[2] * x.theta.norm_sqr());
            diss_terms[m] = params.kappa * params.alpha * block.sigma * x.theta.norm_sqr();
        }
        energies.push(compensated_sum(energy_terms.iter().copied()));
        dissipations.push(compensated_sum(diss_terms.iter().copied()));
    }
    Ok(SimTrace {
        times: times.to_vec(),
        energies,
        theta_dissipation: dissipations,
    })
}

/// Least-squares estimate of the amplitude decay rate from log E(t) over
/// `window`; the slope is halved because the energy is quadratic. Negative
/// for decaying traces; compare against the spectral abscissa of the active
/// modes.
pub fn decay_rate_estimate(trace: &SimTrace, window: (f64, f64)) -> Result<f64> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (t, e) in trace.times.iter().zip(&trace.energies) {
        if *t < window.0 || *t > window.1 {
            continue;
        }
        if !(*e > f64::MIN_POSITIVE && e.is_finite()) {
            return Err(Error::ShrinkWindow(format!(
                "energy {e:.3e} at t={t} is below the representable range"
            )));
        }
        xs.push(*t);
        ys.push(e.ln());
    }
    if xs.len() < 8 {
        return Err(Error::FitWindow(format!(
            "need at least 8 samples inside [{}, {}], found {}",
            window.0,
            window.1,
            xs.len()
        )));
    }
    let n = xs.len() as f64;
    let xm = xs.iter().sum::<f64>() / n;
    let ym = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    Ok(sxy / sxx / 2.0)
}

/// Project sampled interval-domain initial data (u0, u1, theta0 on a uniform
/// grid over [0, pi], endpoints included) onto the first `n_modes` sine
/// modes by trapezoid quadrature against the L2-normalized eigenfunctions
/// sqrt(2/pi) sin(n x).
pub fn project_interval_samples(
    u0: &[f64],
    v0: &[f64],
    theta0: &[f64],
    n_modes: usize,
) -> Result<InitialData> {
    let n_samples = u0.len();
    if n_samples < 2 || v0.len() != n_samples || theta0.len() != n_samples {
        return Err(Error::InvalidGrid(
            "need >= 2 samples and equal-length u0, v0, theta0".into(),
        ));
    }
    if n_modes == 0 {
        return Err(Error::InvalidDomain("n_modes must be >= 1".into()));
    }
    let h = std::f64::consts::PI / (n_samples - 1) as f64;
    let scale = (2.0 / std::f64::consts::PI).sqrt();
    let coeff = |samples: &[f64], n: usize| -> f64 {
        let mut acc = 0.0;
        for (k, &f) in samples.iter().enumerate() {
            let w = if k == 0 || k == n_samples - 1 {
                0.5
            } else {
                1.0
            };
            acc += w * f * scale * ((n as f64) * (k as f64) * h).sin();
        }
        acc * h
    };
    let modes = (1..=n_modes)
        .map(|n| {
            let state = ModalState::new(
                C64::new(coeff(u0, n), 0.0),
                C64::new(coeff(v0, n), 0.0),
                C64::new(coeff(theta0, n), 0.0),
            );
            ((n * n) as f64, state)
        })
        .collect();
    InitialData::new(modes)
}

/// Uniform grid of `steps + 1` times from 0 to `t_max`.
pub fn uniform_times(t_max: f64, steps: usize) -> Result<Vec<f64>> {
    if !(t_max > 0.0 && t_max.is_finite()) || steps == 0 {
        return Err(Error::InvalidGrid(format!(
            "need t_max > 0 and steps >= 1, got t_max={t_max}, steps={steps}"
        )));
    }
    Ok((0..=steps)
        .map(|k| t_max * k as f64 / steps as f64)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ZERO;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn propagator_at_zero_is_identity() {
        let p = Params::unit(0.5).unwrap();
        let b = build_modal_block(3.0, &p).unwrap();
        let m = modal_propagator(&b, 0.0);
        let err = m.sub(&Mat3::identity()).frobenius_norm();
        assert!(err < 1e-12, "err={err}");
    }

    #[test]
    fn semigroup_property_spec_example() {
        let p = Params::new(1.3, 0.7, 0.8, 2.1, 0.6).unwrap();
        let b = build_modal_block(5.0, &p).unwrap();
        let p1 = modal_propagator(&b, 0.3);
        let p2 = modal_propagator(&b, 0.7);
        let p12 = modal_propagator(&b, 1.0);
        let err = p1.mul(&p2).sub(&p12).frobenius_norm() / p12.frobenius_norm();
        assert!(err < 1e-9, "err={err}");
    }

    #[test]
    fn pade_fallback_on_defective_matrix() {
        // hand-built Jordan block: eigendecomposition is impossible, the
        // rational path must produce the exact polynomial exponential
        let block = ModalBlock {
            sigma: 1.0,
            matrix: Mat3::from_real([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]]),
            weights: [1.0, 1.0, 1.0],
        };
        let t = 0.8;
        let e = modal_propagator(&block, t);
        let expect = Mat3::from_real([[1.0, t, t * t / 2.0], [0.0, 1.0, t], [0.0, 0.0, 1.0]]);
        assert!(e.sub(&expect).frobenius_norm() < 1e-14);
    }

    #[test]
    fn zero_initial_data_gives_zero_trace() {
        let p = Params::unit(0.5).unwrap();
        let data = InitialData::single(1.0, ModalState::zero()).unwrap();
        let times = uniform_times(5.0, 10).unwrap();
        let trace = simulate(&data, &p, &times).unwrap();
        assert!(trace.energies.iter().all(|&e| e == 0.0));
        assert!(trace.theta_dissipation.iter().all(|&d| d == 0.0));
    }

    #[test]
    fn empty_initial_data_gives_empty_trace() {
        let p = Params::default();
        let data = InitialData { modes: Vec::new() };
        let times = uniform_times(1.0, 4).unwrap();
        let trace = simulate(&data, &p, &times).unwrap();
        assert!(trace.times.is_empty());
    }

    #[test]
    fn single_mode_decay_golden() {
        // sigma = 1, params 1, tau = 1/2, state (1,0,0), t in [0, 20]:
        // E(20)/E(0) frozen from an extended-precision matrix exponential
        let p = Params::unit(0.5).unwrap();
        let data = InitialData::single(1.0, ModalState::new(c(1.0, 0.0), ZERO, ZERO)).unwrap();
        let times = uniform_times(20.0, 200).unwrap();
        let trace = simulate(&data, &p, &times).unwrap();
        let ratio = trace.energies.last().unwrap() / trace.energies[0];
        assert!(ratio < 1e-3, "ratio={ratio}");
        assert_relative_eq!(ratio, 9.761_404_787_280_347e-4, max_relative = 1e-9);
        // strictly decreasing energy along the whole trace
        for w in trace.energies.windows(2) {
            assert!(w[1] <= w[0] + 1e-12 * trace.energies[0]);
        }
    }

    #[test]
    fn energy_derivative_matches_dissipation() {
        let p = Params::new(0.9, 0.8, 1.2, 1.1, 0.7).unwrap();
        let data = InitialData::new(vec![
            (
                1.0,
                ModalState::new(c(0.4, -0.2), c(0.1, 0.3), c(-0.5, 0.0)),
            ),
            (4.0, ModalState::new(c(0.0, 0.2), c(-0.3, 0.1), c(0.2, 0.2))),
        ])
        .unwrap();
        let h = 1e-6;
        for t0 in [0.5, 2.0, 7.0] {
            let trace = simulate(&data, &p, &[t0, t0 + h]).unwrap();
            let fd = (trace.energies[1] - trace.energies[0]) / h;
            let diss = trace.theta_dissipation[0];
            assert!(
                (fd + diss).abs() < 20.0 * h * trace.energies[0].max(1.0),
                "t0={t0}: fd={fd}, -diss={}",
                -diss
            );
        }
    }

    #[test]
    fn additive_over_disjoint_modes() {
        let p = Params::unit(0.75).unwrap();
        let s1 = ModalState::new(c(1.0, 0.0), c(0.2, -0.1), ZERO);
        let s2 = ModalState::new(ZERO, c(0.0, 1.0), c(0.3, 0.0));
        let d1 = InitialData::single(1.0, s1).unwrap();
        let d2 = InitialData::single(9.0, s2).unwrap();
        let dsum = InitialData::new(vec![(1.0, s1), (9.0, s2)]).unwrap();
        let times = uniform_times(3.0, 30).unwrap();
        let t1 = simulate(&d1, &p, &times).unwrap();
        let t2 = simulate(&d2, &p, &times).unwrap();
        let ts = simulate(&dsum, &p, &times).unwrap();
        for k in 0..times.len() {
            assert_relative_eq!(
                ts.energies[k],
                t1.energies[k] + t2.energies[k],
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn dissipation_identity_integrates() {
        // E(0) - E(T) = integral of the dissipation, checked by trapezoid on
        // a fine grid
        let p = Params::unit(0.5).unwrap();
        let data = InitialData::single(4.0, ModalState::new(c(1.0, 0.0), c(0.0, 0.5), c(0.2, 0.0)))
            .unwrap();
        let t_max = 5.0;
        let steps = 5000;
        let times = uniform_times(t_max, steps).unwrap();
        let trace = simulate(&data, &p, &times).unwrap();
        let h = t_max / steps as f64;
        let mut integral = 0.0;
        for k in 0..steps {
            integral += 0.5 * h * (trace.theta_dissipation[k] + trace.theta_dissipation[k + 1]);
        }
        let drop = trace.energies[0] - trace.energies[steps];
        assert_relative_eq!(drop, integral, max_relative = 1e-6);
    }

    #[test]
    fn planted_decay_rate() {
        // synthetic E(t) = exp(-2t) must give rate -1 after halving
        let times: Vec<f64> = (0..50).map(|k| k as f64 * 0.1).collect();
        let energies: Vec<f64> = times.iter().map(|t| (-2.0 * t).exp()).collect();
        let diss = vec![0.0; times.len()];
        let trace = SimTrace {
            times,
            energies,
            theta_dissipation: diss,
        };
        let rate = decay_rate_estimate(&trace, (0.0, 5.0)).unwrap();
        assert_relative_eq!(rate, -1.0, max_relative = 1e-12);
    }

    #[test]
    fn decay_window_errors() {
        let trace = SimTrace {
            times: vec![0.0, 1.0, 2.0],
            energies: vec![1.0, 0.1, 0.01],
            theta_dissipation: vec![0.0; 3],
        };
        assert!(matches!(
            decay_rate_estimate(&trace, (0.0, 2.0)),
            Err(Error::FitWindow(_))
        ));
        let trace = SimTrace {
            times: (0..10).map(|k| k as f64).collect(),
            energies: vec![1.0, 0.5, 0.2, 0.1, 0.0, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7],
            theta_dissipation: vec![0.0; 10],
        };
        assert!(matches!(
            decay_rate_estimate(&trace, (0.0, 9.0)),
            Err(Error::ShrinkWindow(_))
        ));
    }

    #[test]
    fn projection_recovers_mode_mixture() {
        // u0 = 0.5 e1 + 0.25 e3 in the L2-normalized sine basis
        let n = 801;
        let scale = (2.0 / std::f64::consts::PI).sqrt();
        let xs: Vec<f64> = (0..n)
            .map(|k| std::f64::consts::PI * k as f64 / (n - 1) as f64)
            .collect();
        let u0: Vec<f64> = xs
            .iter()
            .map(|x| scale * (0.5 * x.sin() + 0.25 * (3.0 * x).sin()))
            .collect();
        let zero = vec![0.0; n];
        let data = project_interval_samples(&u0, &zero, &zero, 4).unwrap();
        let coeffs: Vec<f64> = data.modes.iter().map(|(_, s)| s.u.re).collect();
        assert!((coeffs[0] - 0.5).abs() < 1e-12, "{coeffs:?}");
        assert!(coeffs[1].abs() < 1e-12);
        assert!((coeffs[2] - 0.25).abs() < 1e-12);
        assert!(coeffs[3].abs() < 1e-12);
        assert_eq!(data.modes[2].0, 9.0);
    }

    #[test]
    fn initial_data_validation() {
        assert!(
            InitialData::new(vec![(1.0, ModalState::zero()), (1.0, ModalState::zero())]).is_err()
        );
        assert!(InitialData::single(-1.0, ModalState::zero()).is_err());
    }
}
