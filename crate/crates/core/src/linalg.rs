//! Small dense complex linear algebra: everything here is specialized to the
//! 3x3 blocks the modal decomposition produces, so all kernels are closed-form
//! (adjugate inverses, Hermitian-Gram eigenvalues via a trigonometric cubic,
//! Pade-13 matrix exponential with scaling and squaring).

use num_complex::Complex64 as C64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Row-major 3x3 complex matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat3(pub [[C64; 3]; 3]);

/// Complex 3-vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vec3(pub [C64; 3]);

impl Mat3 {
    pub fn zero() -> Self {
        Mat3([[ZERO; 3]; 3])
    }

    pub fn identity() -> Self {
        let mut m = Mat3::zero();
        for i in 0..3 {
            m.0[i][i] = ONE;
        }
        m
    }

    pub fn from_real(r: [[f64; 3]; 3]) -> Self {
        let mut m = Mat3::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = C64::new(r[i][j], 0.0);
            }
        }
        m
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut m = *self;
        for row in m.0.iter_mut() {
            for e in row.iter_mut() {
                *e *= s;
            }
        }
        m
    }

    pub fn add(&self, other: &Mat3) -> Self {
        let mut m = *self;
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] += other.0[i][j];
            }
        }
        m
    }

    pub fn sub(&self, other: &Mat3) -> Self {
        let mut m = *self;
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] -= other.0[i][j];
            }
        }
        m
    }

    pub fn mul(&self, other: &Mat3) -> Self {
        let mut m = Mat3::zero();
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = ZERO;
                for k in 0..3 {
                    acc += self.0[i][k] * other.0[k][j];
                }
                m.0[i][j] = acc;
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &Vec3) -> Vec3 {
        let mut out = [ZERO; 3];
        for i in 0..3 {
            out[i] = self.0[i][0] * v.0[0] + self.0[i][1] * v.0[1] + self.0[i][2] * v.0[2];
        }
        Vec3(out)
    }

    pub fn det(&self) -> C64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Adjugate inverse. Returns `None` when the determinant vanishes.
    pub fn inverse(&self) -> Option<Mat3> {
        let d = self.det();
        if d == ZERO {
            return None;
        }
        let m = &self.0;
        let c = [
            [
                m[1][1] * m[2][2] - m[1][2] * m[2][1],
                m[0][2] * m[2][1] - m[0][1] * m[2][2],
                m[0][1] * m[1][2] - m[0][2] * m[1][1],
            ],
            [
                m[1][2] * m[2][0] - m[1][0] * m[2][2],
                m[0][0] * m[2][2] - m[0][2] * m[2][0],
                m[0][2] * m[1][0] - m[0][0] * m[1][2],
            ],
            [
                m[1][0] * m[2][1] - m[1][1] * m[2][0],
                m[0][1] * m[2][0] - m[0][0] * m[2][1],
                m[0][0] * m[1][1] - m[0][1] * m[1][0],
            ],
        ];
        let inv_d = ONE / d;
        let mut out = Mat3::zero();
        for i in 0..3 {
            for j in 0..3 {
                out.0[i][j] = c[i][j] * inv_d;
            }
        }
        Some(out)
    }

    pub fn frobenius_norm(&self) -> f64 {
        let mut s = 0.0;
        for row in &self.0 {
            for e in row {
                s += e.norm_sqr();
            }
        }
        s.sqrt()
    }

    /// Max absolute column sum.
    pub fn one_norm(&self) -> f64 {
        let mut best = 0.0f64;
        for j in 0..3 {
            let s = self.0[0][j].norm() + self.0[1][j].norm() + self.0[2][j].norm();
            best = best.max(s);
        }
        best
    }

    /// Spectral norm (largest singular value), through the Hermitian Gram
    /// matrix M^H M whose top eigenvalue has a closed form.
    pub fn spectral_norm(&self) -> f64 {
        let m = &self.0;
        // G = M^H M, Hermitian positive semidefinite
        let mut g = [[ZERO; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = ZERO;
                for k in 0..3 {
                    acc += m[k][i].conj() * m[k][j];
                }
                g[i][j] = acc;
            }
        }
        hermitian_eig_max(&g).max(0.0).sqrt()
    }
}

impl Vec3 {
    pub fn zero() -> Self {
        Vec3([ZERO; 3])
    }

    pub fn norm(&self) -> f64 {
        (self.0[0].norm_sqr() + self.0[1].norm_sqr() + self.0[2].norm_sqr()).sqrt()
    }

    pub fn sub(&self, other: &Vec3) -> Vec3 {
        Vec3([
            self.0[0] - other.0[0],
            self.0[1] - other.0[1],
            self.0[2] - other.0[2],
        ])
    }

    pub fn cross(&self, other: &Vec3) -> Vec3 {
        let a = &self.0;
        let b = &other.0;
        Vec3([
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ])
    }
}

/// Largest eigenvalue of a 3x3 Hermitian matrix, trigonometric closed form.
pub fn hermitian_eig_max(g: &[[C64; 3]; 3]) -> f64 {
    let tr = g[0][0].re + g[1][1].re + g[2][2].re;
    let q = tr / 3.0;
    let p1 = g[0][1].norm_sqr() + g[0][2].norm_sqr() + g[1][2].norm_sqr();
    let d0 = g[0][0].re - q;
    let d1 = g[1][1].re - q;
    let d2 = g[2][2].re - q;
    let p2 = d0 * d0 + d1 * d1 + d2 * d2 + 2.0 * p1;
    if p2 <= 0.0 {
        return q; // scalar multiple of the identity
    }
    let p = (p2 / 6.0).sqrt();
    let inv_p = 1.0 / p;
    let b00 = d0 * inv_p;
    let b11 = d1 * inv_p;
    let b22 = d2 * inv_p;
    let b01 = g[0][1] * inv_p;
    let b02 = g[0][2] * inv_p;
    let b12 = g[1][2] * inv_p;
    // det of the shifted, scaled Hermitian matrix is real
    let det_b = b00 * (b11 * b22 - b12.norm_sqr()) - b01.norm_sqr() * b22
        + 2.0 * (b01 * b12 * b02.conj()).re
        - b02.norm_sqr() * b11;
    let r = (det_b / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    q + 2.0 * p * phi.cos()
}

/// Roots of the monic cubic z^3 + p z^2 + q z + r with real coefficients.
///
/// One real root plus a conjugate pair, or three real roots, depending on the
/// discriminant; each root is polished with two complex Newton steps. Returned
/// sorted by (re, im) ascending.
pub fn cubic_roots(p: f64, q: f64, r: f64) -> [C64; 3] {
    // depressed cubic w^3 + a w + b, z = w - p/3
    let a = q - p * p / 3.0;
    let b = 2.0 * p * p * p / 27.0 - p * q / 3.0 + r;
    let shift = -p / 3.0;

    let mut roots: [C64; 3];
    let disc = (b / 2.0) * (b / 2.0) + (a / 3.0) * (a / 3.0) * (a / 3.0);
    if a == 0.0 && b == 0.0 {
        roots = [C64::new(shift, 0.0); 3];
    } else if disc > 0.0 {
        // one real root; pick the cube root branch that avoids cancellation
        let s = disc.sqrt();
        let u3 = if b <= 0.0 { -b / 2.0 + s } else { -b / 2.0 - s };
        let u = u3.cbrt();
        let v = if u != 0.0 { -a / (3.0 * u) } else { 0.0 };
        let w_real = u + v;
        let re_pair = -w_real / 2.0;
        let im_pair = (3.0f64.sqrt() / 2.0) * (u - v).abs();
        roots = [
            C64::new(w_real + shift, 0.0),
            C64::new(re_pair + shift, im_pair),
            C64::new(re_pair + shift, -im_pair),
        ];
    } else {
        // three real roots, trigonometric form
        let m = 2.0 * (-a / 3.0).max(0.0).sqrt();
        let arg = if m == 0.0 {
            0.0
        } else {
            (3.0 * b / (a * m)).clamp(-1.0, 1.0)
        };
        let theta = arg.acos() / 3.0;
        roots = [0, 1, 2].map(|k| {
            let w = m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos();
            C64::new(w + shift, 0.0)
        });
    }

    for z in roots.iter_mut() {
        *z = polish_cubic_root(*z, p, q, r);
    }
    roots.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    roots
}

fn polish_cubic_root(z0: C64, p: f64, q: f64, r: f64) -> C64 {
    // the closed forms can start ~1e-2 off when coefficients span many
    // orders of magnitude; Newton contracts quadratically to the rounding
    // floor within a few steps
    let mut z = z0;
    for _ in 0..8 {
        let f = ((z + p) * z + q) * z + r;
        let df = (3.0 * z + 2.0 * p) * z + q;
        if df.norm() == 0.0 {
            break;
        }
        let step = f / df;
        if !step.re.is_finite() || !step.im.is_finite() {
            break;
        }
        z -= step;
        if step.norm() <= 1e-15 * z.norm() {
            break;
        }
    }
    z
}

// Pade-13 numerator coefficients (Higham 2005, scaling and squaring revisited).
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

/// Matrix exponential by scaling and squaring with a [13/13] Pade approximant.
pub fn expm(a: &Mat3) -> Mat3 {
    let norm = a.one_norm();
    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let a = a.scale(C64::new(0.5f64.powi(s), 0.0));

    let a2 = a.mul(&a);
    let a4 = a2.mul(&a2);
    let a6 = a2.mul(&a4);
    let id = Mat3::identity();
    let c = |k: usize| C64::new(PADE13[k], 0.0);

    let u_inner = a6.scale(c(13)).add(&a4.scale(c(11))).add(&a2.scale(c(9)));
    let u = a.mul(
        &a6.mul(&u_inner)
            .add(&a6.scale(c(7)))
            .add(&a4.scale(c(5)))
            .add(&a2.scale(c(3)))
            .add(&id.scale(c(1))),
    );
    let v_inner = a6.scale(c(12)).add(&a4.scale(c(10))).add(&a2.scale(c(8)));
    let v = a6
        .mul(&v_inner)
        .add(&a6.scale(c(6)))
        .add(&a4.scale(c(4)))
        .add(&a2.scale(c(2)))
        .add(&id.scale(c(0)));

    let num = v.add(&u);
    let den = v.sub(&u);
    let mut e = den
        .inverse()
        .expect("Pade denominator is nonsingular for scaled input")
        .mul(&num);
    for _ in 0..s {
        e = e.mul(&e);
    }
    e
}

/// Eigenvalues of a real 3x3 matrix via its characteristic cubic.
pub fn eigenvalues_real3(m: &Mat3) -> [C64; 3] {
    let a = &m.0;
    let tr = a[0][0].re + a[1][1].re + a[2][2].re;
    // sum of principal 2x2 minors
    let minors = a[0][0].re * a[1][1].re - a[0][1].re * a[1][0].re + a[0][0].re * a[2][2].re
        - a[0][2].re * a[2][0].re
        + a[1][1].re * a[2][2].re
        - a[1][2].re * a[2][1].re;
    let det = m.det().re;
    cubic_roots(-tr, minors, -det)
}

/// Eigenvector for a given eigenvalue of a 3x3 matrix: the kernel direction of
/// (M - z I), found as the largest cross product of its rows. Returns `None`
/// when the shifted matrix is not close to rank 2 (defective or repeated z).
pub fn eigenvector3(m: &Mat3, z: C64) -> Option<Vec3> {
    let mut shifted = *m;
    for i in 0..3 {
        shifted.0[i][i] -= z;
    }
    let rows: [Vec3; 3] = [Vec3(shifted.0[0]), Vec3(shifted.0[1]), Vec3(shifted.0[2])];
    let candidates = [
        rows[0].cross(&rows[1]),
        rows[0].cross(&rows[2]),
        rows[1].cross(&rows[2]),
    ];
    let mut best = Vec3::zero();
    let mut best_norm = 0.0;
    for c in candidates {
        let n = c.norm();
        if n > best_norm {
            best_norm = n;
            best = c;
        }
    }
    let scale = shifted.frobenius_norm().max(1.0);
    if best_norm <= 1e-14 * scale * scale {
        return None;
    }
    let inv = C64::new(1.0 / best_norm, 0.0);
    Some(Vec3([best.0[0] * inv, best.0[1] * inv, best.0[2] * inv]))
}
