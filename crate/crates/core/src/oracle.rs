//! Reference implementations used only to cross-check the main computation
//! paths. Everything here deliberately takes a different algorithmic route:
//! Gaussian elimination with partial pivoting instead of adjugate inverses,
//! cyclic Jacobi diagonalization instead of the closed-form cubic, and an
//! adaptive Dormand-Prince integrator instead of matrix exponentials.

use crate::error::{Error, Result};
use crate::linalg::{Mat3, Vec3};
use crate::modal::{build_modal_block, Params};
use num_complex::Complex64 as C64;

/// Solve a dense complex n x n system by Gaussian elimination with partial
/// pivoting. `a` is row-major, consumed; `b` holds the right-hand sides as
/// columns and is overwritten with the solution.
pub fn gepp_solve(a: &mut [Vec<C64>], b: &mut [Vec<C64>]) -> Result<()> {
    let n = a.len();
    let m = b[0].len();
    for col in 0..n {
        let (pivot, piv_abs) = (col..n)
            .map(|r| (r, a[r][col].norm()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
            .unwrap();
        if piv_abs == 0.0 {
            return Err(Error::SingularBlock {
                sigma: f64::NAN,
                detail: "singular matrix in elimination".into(),
            });
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv_p = C64::new(1.0, 0.0) / a[col][col];
        for r in (col + 1)..n {
            let factor = a[r][col] * inv_p;
            if factor == C64::new(0.0, 0.0) {
                continue;
            }
            for c in col..n {
                let v = a[col][c];
                a[r][c] -= factor * v;
            }
            for c in 0..m {
                let v = b[col][c];
                b[r][c] -= factor * v;
            }
        }
    }
    for col in (0..n).rev() {
        let inv_p = C64::new(1.0, 0.0) / a[col][col];
        for c in 0..m {
            let mut acc = b[col][c];
            for k in (col + 1)..n {
                acc -= a[col][k] * b[k][c];
            }
            b[col][c] = acc * inv_p;
        }
    }
    Ok(())
}

/// All eigenvalues of a dense complex Hermitian matrix by cyclic Jacobi
/// rotations, ascending. Convergence is quadratic and gap-independent.
pub fn hermitian_eigenvalues(mut g: Vec<Vec<C64>>) -> Vec<f64> {
    let n = g.len();
    let scale: f64 = (0..n).map(|i| g[i][i].re.abs()).sum::<f64>().max(1e-300);
    for _sweep in 0..40 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += g[p][q].norm_sqr();
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let gpq = g[p][q];
                let b = gpq.norm();
                if b <= 1e-300 {
                    continue;
                }
                let phase = gpq / b;
                let alpha = g[p][p].re;
                let beta = g[q][q].re;
                // t solves t^2 + 2 zeta t - 1 = 0 (smaller-magnitude root)
                let zeta = (alpha - beta) / (2.0 * b);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // columns: B = G U with U = [[c, -s*phase], [s*conj(phase), c]]
                for k in 0..n {
                    let gkp = g[k][p];
                    let gkq = g[k][q];
                    g[k][p] = c * gkp + s * phase.conj() * gkq;
                    g[k][q] = -s * phase * gkp + c * gkq;
                }
                // rows: G' = U^H B
                for k in 0..n {
                    let gpk = g[p][k];
                    let gqk = g[q][k];
                    g[p][k] = c * gpk + s * phase * gqk;
                    g[q][k] = -s * phase.conj() * gpk + c * gqk;
                }
                // clean the Hermitian structure on the rotated pair
                g[p][q] = C64::new(0.0, 0.0);
                g[q][p] = C64::new(0.0, 0.0);
                g[p][p] = C64::new(g[p][p].re, 0.0);
                g[q][q] = C64::new(g[q][q].re, 0.0);
            }
        }
    }
    let mut eigs: Vec<f64> = (0..n).map(|i| g[i][i].re).collect();
    eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    eigs
}

/// Operator norm of the weighted block-diagonal resolvent over the given
/// modes, computed densely: per block a GEPP inverse, then the assembled
/// (3m x 3m) matrix's largest singular value through Jacobi on its Gram.
pub fn dense_resolvent_norm(lambda: f64, sigmas: &[f64], params: &Params) -> Result<f64> {
    let m = sigmas.len();
    let n = 3 * m;
    let mut dense = vec![vec![C64::new(0.0, 0.0); n]; n];
    for (b, &sigma) in sigmas.iter().enumerate() {
        let block = build_modal_block(sigma, params)?;
        // shifted = i*lambda I - B
        let mut a: Vec<Vec<C64>> = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| {
                        let mut v = -block.matrix.0[i][j];
                        if i == j {
                            v += C64::new(0.0, lambda);
                        }
                        v
                    })
                    .collect()
            })
            .collect();
        let mut rhs: Vec<Vec<C64>> = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0))
                    .collect()
            })
            .collect();
        gepp_solve(&mut a, &mut rhs)?;
        let sw = block.weights.map(f64::sqrt);
        for i in 0..3 {
            for j in 0..3 {
                dense[3 * b + i][3 * b + j] = rhs[i][j] * (sw[i] / sw[j]);
            }
        }
    }
    // Gram matrix of the dense resolvent
    let mut gram = vec![vec![C64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..n {
                acc += dense[k][i].conj() * dense[k][j];
            }
            gram[i][j] = acc;
        }
    }
    let eigs = hermitian_eigenvalues(gram);
    Ok(eigs.last().copied().unwrap_or(0.0).max(0.0).sqrt())
}

// Dormand-Prince 5(4) tableau.
const DP_C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [[f64; 6]; 6] = [
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const DP_B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const DP_B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

fn axpy(y: &mut Vec3, a: f64, x: &Vec3) {
    for i in 0..3 {
        y.0[i] += a * x.0[i];
    }
}

/// Integrate x' = M x from 0 to `t_end` with adaptive Dormand-Prince 5(4),
/// controlling the local error relative to the state norm.
pub fn rk45_evolve(matrix: &Mat3, x0: &Vec3, t_end: f64, rtol: f64) -> Vec3 {
    if t_end == 0.0 {
        return *x0;
    }
    let f = |x: &Vec3| matrix.mul_vec(x);
    let mut t = 0.0;
    let mut x = *x0;
    let mnorm = matrix.frobenius_norm().max(1e-12);
    let mut dt = (0.1 / mnorm).min(t_end);
    let mut k: [Vec3; 7] = [Vec3::zero(); 7];
    k[0] = f(&x);
    let mut fsal_valid = true;
    let mut steps = 0usize;
    while t < t_end {
        if steps > 50_000_000 {
            break; // refuse to spin forever; accuracy asserts will catch this
        }
        steps += 1;
        dt = dt.min(t_end - t);
        if !fsal_valid {
            k[0] = f(&x);
            fsal_valid = true;
        }
        for stage in 1..7 {
            let mut xs = x;
            for (j, kj) in k.iter().enumerate().take(stage) {
                axpy(&mut xs, dt * DP_A[stage - 1][j], kj);
            }
            let _ = DP_C; // stage times are implicit for autonomous systems
            k[stage] = f(&xs);
        }
        let mut x5 = x;
        let mut x4 = x;
        for j in 0..7 {
            axpy(&mut x5, dt * DP_B5[j], &k[j]);
            axpy(&mut x4, dt * DP_B4[j], &k[j]);
        }
        let err = x5.sub(&x4).norm();
        let scale = rtol * x.norm().max(x5.norm()).max(1e-290);
        if err <= scale {
            t += dt;
            x = x5;
            k[0] = k[6]; // first-same-as-last
        } else {
            fsal_valid = false;
        }
        let ratio = if err > 0.0 { scale / err } else { 10.0 };
        dt *= (0.9 * ratio.powf(0.2)).clamp(0.2, 5.0);
    }
    x
}
