//! Schur-parameter representation of Carathéodory coefficients.
//!
//! `P` is the class of analytic `p(z) = 1 + c1 z + c2 z^2 + ...` with
//! positive real part on the unit disk.  Its coefficient bodies are
//! parametrized triangularly by points `zeta_1, ..., zeta_4` of the closed
//! unit disk:
//!
//! ```text
//! c1 = 2 zeta1
//! c2 = 2 zeta1^2 + 2 (1-|zeta1|^2) zeta2
//! c3 = 2 zeta1^3 + 4 (1-|zeta1|^2) zeta1 zeta2
//!      - 2 (1-|zeta1|^2) conj(zeta1) zeta2^2
//!      + 2 (1-|zeta1|^2) (1-|zeta2|^2) zeta3
//! c4 / 2 = zeta1^4
//!      + (1-|zeta1|^2) (3 zeta1^2 zeta2 - 2 |zeta1|^2 zeta2^2 + conj(zeta1)^2 zeta2^3)
//!      + (1-|zeta1|^2)^2 zeta2^2
//!      + (1-|zeta1|^2) (1-|zeta2|^2)
//!        (2 zeta1 zeta3 - 2 conj(zeta1) zeta2 zeta3 - conj(zeta2) zeta3^2
//!         + (1-|zeta3|^2) zeta4)
//! ```
//!
//! The `c4` row follows from non-negativity of the 5x5 Hermitian Toeplitz
//! determinant: with `A`, `B`, `M54` as in [`C4Parts`], every member of `P`
//! satisfies `M54 * c4 = A + B * zeta4` for some `zeta4` in the closed disk.
//! [`verify_c4_identity`] checks that chain numerically, which is how the
//! formula above is certified here.

use crate::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Slack allowed when testing membership of a parameter in the closed disk.
pub const DISK_TOL: f64 = 1e-12;

/// Toeplitz determinants this far below zero still certify membership
/// (double-precision determinants of up to 5x5 matrices).
pub const TOEPLITZ_TOL: f64 = -1e-9;

/// Below this value of `1 - |zeta|^2` the triangular inverse map treats the
/// parameter as a boundary point; the remaining parameters carry no freedom.
pub const BOUNDARY_CUTOFF: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum DomainError {
    #[error("zeta{index} lies outside the closed unit disk (|zeta{index}| = {modulus})")]
    OutsideDisk { index: usize, modulus: f64 },
    #[error("zeta1 must be real here (Im zeta1 = {imag})")]
    NonRealZeta1 { imag: f64 },
    #[error("c4 identity degenerates at |zeta{index}| = 1")]
    BoundaryDegenerate { index: usize },
    #[error("blended herglotz family needs t in [0, 1/2], got {t}")]
    InvalidHWeight { t: f64 },
    #[error("blended herglotz family needs |beta| = 1, got {modulus}")]
    InvalidHPhase { modulus: f64 },
    #[error("two-point family needs t in [0, 1], got {t}")]
    InvalidPWeight { t: f64 },
}

/// Point of the closed polydisk parametrizing `(c1, c2, c3, c4)`.
///
/// `real_zeta1` records that the tuple was built under the `a2 real`
/// hypothesis of the fourth/fifth-coefficient theorems; it forces
/// `Im zeta1 = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchurParams {
    pub zeta1: C64,
    pub zeta2: C64,
    pub zeta3: C64,
    pub zeta4: C64,
    pub real_zeta1: bool,
}

impl SchurParams {
    pub fn new(zeta1: C64, zeta2: C64, zeta3: C64, zeta4: C64) -> Result<Self, DomainError> {
        let params = Self { zeta1, zeta2, zeta3, zeta4, real_zeta1: false };
        params.check_disk()?;
        Ok(params)
    }

    /// Variant with `zeta1` restricted to the real segment `[-1, 1]`.
    pub fn with_real_zeta1(
        zeta1: f64,
        zeta2: C64,
        zeta3: C64,
        zeta4: C64,
    ) -> Result<Self, DomainError> {
        let params = Self {
            zeta1: C64::new(zeta1, 0.0),
            zeta2,
            zeta3,
            zeta4,
            real_zeta1: true,
        };
        params.check_disk()?;
        Ok(params)
    }

    pub fn zetas(&self) -> [C64; 4] {
        [self.zeta1, self.zeta2, self.zeta3, self.zeta4]
    }

    fn check_disk(&self) -> Result<(), DomainError> {
        for (i, z) in self.zetas().iter().enumerate() {
            let modulus = z.norm();
            if modulus > 1.0 + DISK_TOL {
                return Err(DomainError::OutsideDisk { index: i + 1, modulus });
            }
        }
        if self.real_zeta1 && self.zeta1.im != 0.0 {
            return Err(DomainError::NonRealZeta1 { imag: self.zeta1.im });
        }
        Ok(())
    }
}

/// First four Taylor coefficients of a positive-real-part function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaratheodoryCoeffs {
    pub c1: C64,
    pub c2: C64,
    pub c3: C64,
    pub c4: C64,
}

impl CaratheodoryCoeffs {
    pub fn new(c1: C64, c2: C64, c3: C64, c4: C64) -> Self {
        Self { c1, c2, c3, c4 }
    }

    pub fn as_array(&self) -> [C64; 4] {
        [self.c1, self.c2, self.c3, self.c4]
    }
}

/// Forward map from Schur parameters to `(c1, c2, c3, c4)`.
pub fn coeffs_from_schur(z: &SchurParams) -> CaratheodoryCoeffs {
    let (z1, z2, z3, z4) = (z.zeta1, z.zeta2, z.zeta3, z.zeta4);
    let u1 = 1.0 - z1.norm_sqr();
    let u2 = 1.0 - z2.norm_sqr();
    let u3 = 1.0 - z3.norm_sqr();

    let c1 = 2.0 * z1;
    let c2 = 2.0 * z1 * z1 + 2.0 * u1 * z2;
    let c3 = 2.0 * z1.powu(3) + 4.0 * u1 * z1 * z2 - 2.0 * u1 * z1.conj() * z2 * z2
        + 2.0 * u1 * u2 * z3;
    let c4 = 2.0
        * (z1.powu(4)
            + u1 * (3.0 * z1 * z1 * z2 - 2.0 * z1.norm_sqr() * z2 * z2
                + z1.conj().powu(2) * z2.powu(3))
            + u1 * u1 * z2 * z2
            + u1 * u2
                * (2.0 * z1 * z3 - 2.0 * z1.conj() * z2 * z3 - z2.conj() * z3 * z3 + u3 * z4));
    CaratheodoryCoeffs::new(c1, c2, c3, c4)
}

/// Extremal positive-real-part families used to attain the sharp bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtremalParams {
    /// `t (1 + e^{i theta} z)/(1 - e^{i theta} z)
    ///  + (1-t) (1 + e^{2 i theta} z^2)/(1 - e^{2 i theta} z^2)`, `t in [0,1]`.
    P { t: f64, theta: f64 },
    /// `(1-2t) (1+z)/(1-z) + t (1+beta z)/(1-beta z)
    ///  + t (1+conj(beta) z)/(1-conj(beta) z)`, `t in [0,1/2]`, `|beta| = 1`.
    H { t: f64, beta: C64 },
}

impl ExtremalParams {
    pub fn p(t: f64, theta: f64) -> Result<Self, DomainError> {
        if !(0.0..=1.0).contains(&t) {
            return Err(DomainError::InvalidPWeight { t });
        }
        Ok(Self::P { t, theta })
    }

    pub fn h(t: f64, beta: C64) -> Result<Self, DomainError> {
        if !(0.0..=0.5).contains(&t) {
            return Err(DomainError::InvalidHWeight { t });
        }
        let modulus = beta.norm();
        if (modulus - 1.0).abs() > DISK_TOL {
            return Err(DomainError::InvalidHPhase { modulus });
        }
        Ok(Self::H { t, beta })
    }
}

/// Coefficients `c1..c4` of an extremal family member.
///
/// Both families are convex combinations of Möbius factors
/// `(1 + w z^k)/(1 - w z^k) = 1 + 2 sum_{j>=1} w^j z^{kj}`, so
///
/// - P family: `c_n = 2 t e^{i n theta}` for odd `n`; the `z^2` factor adds
///   `2 (1-t) e^{i n theta}` for even `n`;
/// - H family: `c_n = 2 (1-2t) + 2 t beta^n + 2 t conj(beta)^n`.
pub fn coeffs_from_extremal(e: &ExtremalParams) -> CaratheodoryCoeffs {
    match *e {
        ExtremalParams::P { t, theta } => {
            let phase = |n: u32| C64::from_polar(1.0, theta * n as f64);
            let coeff = |n: u32| {
                let odd = 2.0 * t * phase(n);
                if n % 2 == 0 {
                    odd + 2.0 * (1.0 - t) * phase(n)
                } else {
                    odd
                }
            };
            CaratheodoryCoeffs::new(coeff(1), coeff(2), coeff(3), coeff(4))
        }
        ExtremalParams::H { t, beta } => {
            let coeff = |n: u32| {
                C64::new(2.0 * (1.0 - 2.0 * t), 0.0)
                    + 2.0 * t * beta.powu(n)
                    + 2.0 * t * beta.conj().powu(n)
            };
            CaratheodoryCoeffs::new(coeff(1), coeff(2), coeff(3), coeff(4))
        }
    }
}

/// Hermitian Toeplitz determinants `D1..D4` of sizes 2..5 built from
/// `c0 = 2, c1, ..., c4`.  All of them are non-negative exactly when the
/// tuple extends to a member of `P`.
pub fn toeplitz_validity(c: &CaratheodoryCoeffs) -> [f64; 4] {
    let coeffs = c.as_array();
    let mut out = [0.0; 4];
    for (k, slot) in out.iter_mut().enumerate() {
        *slot = hermitian_toeplitz_det(&coeffs, k + 2);
    }
    out
}

/// `true` when every Toeplitz determinant clears [`TOEPLITZ_TOL`].
pub fn is_member(c: &CaratheodoryCoeffs) -> bool {
    toeplitz_validity(c).iter().all(|d| *d >= TOEPLITZ_TOL)
}

/// Determinant of the `size x size` Hermitian Toeplitz matrix with diagonal 2
/// and first row `2, c[0], .., c[size-2]`.  Plain LU with partial pivoting;
/// the imaginary part of the product is discarded (it is zero for Hermitian
/// input up to rounding).
fn hermitian_toeplitz_det(c: &[C64; 4], size: usize) -> f64 {
    debug_assert!((2..=5).contains(&size));
    let entry = |i: usize, j: usize| -> C64 {
        if i == j {
            C64::new(2.0, 0.0)
        } else if j > i {
            c[j - i - 1]
        } else {
            c[i - j - 1].conj()
        }
    };
    let mut m = [[C64::new(0.0, 0.0); 5]; 5];
    for i in 0..size {
        for j in 0..size {
            m[i][j] = entry(i, j);
        }
    }
    let mut det = C64::new(1.0, 0.0);
    for col in 0..size {
        let pivot_row = (col..size)
            .max_by(|&a, &b| m[a][col].norm().total_cmp(&m[b][col].norm()))
            .unwrap();
        if m[pivot_row][col].norm() == 0.0 {
            return 0.0;
        }
        if pivot_row != col {
            m.swap(pivot_row, col);
            det = -det;
        }
        det *= m[col][col];
        for row in col + 1..size {
            let factor = m[row][col] / m[col][col];
            for j in col..size {
                let sub = factor * m[col][j];
                m[row][j] -= sub;
            }
        }
    }
    det.re
}

/// Slacks of the classical coefficient inequalities for `P`:
///
/// 1. `min_n (2 - |c_n|)`,
/// 2. `(2 - |c1|^2/2) - |c2 - c1^2/2|`,
/// 3. `2 - |c3 - 2 c1 c2 + c1^3|`,
/// 4. `2 - |c1^4 - 3 c1^2 c2 + c2^2 + 2 c1 c3 - c4|`.
///
/// Membership makes all four non-negative.
pub fn coefficient_inequality_slacks(c: &CaratheodoryCoeffs) -> [f64; 4] {
    let modulus_slack = c
        .as_array()
        .iter()
        .map(|cn| 2.0 - cn.norm())
        .fold(f64::INFINITY, f64::min);
    let rotation_slack = (2.0 - c.c1.norm_sqr() / 2.0) - (c.c2 - c.c1 * c.c1 / 2.0).norm();
    let third = 2.0 - (c.c3 - 2.0 * c.c1 * c.c2 + c.c1.powu(3)).norm();
    let fourth = 2.0
        - (c.c1.powu(4) - 3.0 * c.c1 * c.c1 * c.c2 + c.c2 * c.c2 + 2.0 * c.c1 * c.c3 - c.c4)
            .norm();
    [modulus_slack, rotation_slack, third, fourth]
}

/// The three quantities tying `c4` to the lower-order coefficients.
///
/// `m54 * c4 = a + b * zeta4` holds with `|zeta4| <= 1`, where the
/// polynomial route computes the parts from `c1..c3` and the closed route
/// from the Schur parameters:
///
/// ```text
/// a    = c1^4 + 4 c2^2 + 8 c1 c3 - 4 conj(c1) c2 c3 - 2 |c1|^2 c1 c3
///        - 6 c1^2 c2 + 2 |c1|^2 c2^2 + conj(c1)^2 c3^2
///        - (c2^3 - 2 c1 c2 c3 + 2 c3^2) conj(c2)
/// b    = 16 - 12 |c1|^2 + |c1|^4 + 4 conj(c1)^2 c2 - c3 conj(c1)^3
///        + (4 c1^2 - 2 |c1|^2 c2 - 8 c2 + 4 conj(c1) c3) conj(c2)
///        + (c2^2 - c1 c3) conj(c2)^2
///        - (c1^3 - 4 c1 c2 + 4 c3 + conj(c1) c2^2 - |c1|^2 c3) conj(c3)
/// m54  = 8 - 4 |c1|^2 + conj(c1)^2 c2 + c1^2 conj(c2) - 2 |c2|^2
/// ```
///
/// versus `a = 16 u1^2 u2 (...)`, `b = 16 u1^3 u2^2 u3`,
/// `m54 = 8 u1^2 u2` with `u_i = 1 - |zeta_i|^2`.
#[derive(Debug, Clone, Copy)]
pub struct C4Parts {
    pub a: C64,
    pub b: C64,
    pub m54: C64,
}

pub fn c4_parts_from_coeffs(c: &CaratheodoryCoeffs) -> C4Parts {
    let (c1, c2, c3) = (c.c1, c.c2, c.c3);
    let n1 = c1.norm_sqr();
    let a = c1.powu(4) + 4.0 * c2 * c2 + 8.0 * c1 * c3
        - 4.0 * c1.conj() * c2 * c3
        - 2.0 * n1 * c1 * c3
        - 6.0 * c1 * c1 * c2
        + 2.0 * n1 * c2 * c2
        + c1.conj().powu(2) * c3 * c3
        - (c2.powu(3) - 2.0 * c1 * c2 * c3 + 2.0 * c3 * c3) * c2.conj();
    let b = C64::new(16.0 - 12.0 * n1 + n1 * n1, 0.0)
        + 4.0 * c1.conj().powu(2) * c2
        - c3 * c1.conj().powu(3)
        + (4.0 * c1 * c1 - 2.0 * n1 * c2 - 8.0 * c2 + 4.0 * c1.conj() * c3) * c2.conj()
        + (c2 * c2 - c1 * c3) * c2.conj().powu(2)
        - (c1.powu(3) - 4.0 * c1 * c2 + 4.0 * c3 + c1.conj() * c2 * c2 - n1 * c3) * c3.conj();
    let m54 = C64::new(8.0 - 4.0 * n1 - 2.0 * c2.norm_sqr(), 0.0)
        + c1.conj().powu(2) * c2
        + c1 * c1 * c2.conj();
    C4Parts { a, b, m54 }
}

pub fn c4_parts_from_schur(z: &SchurParams) -> C4Parts {
    let (z1, z2, z3) = (z.zeta1, z.zeta2, z.zeta3);
    let u1 = 1.0 - z1.norm_sqr();
    let u2 = 1.0 - z2.norm_sqr();
    let u3 = 1.0 - z3.norm_sqr();
    let inner = u1 * u1 * z2 * z2
        + z1.powu(4)
        + u1 * (3.0 * z1 * z1 * z2 - 2.0 * z1.norm_sqr() * z2 * z2 + z1.conj().powu(2) * z2.powu(3))
        + u1 * u2 * (2.0 * z1 * z3 - 2.0 * z1.conj() * z2 * z3 - z2.conj() * z3 * z3);
    C4Parts {
        a: 16.0 * u1 * u1 * u2 * inner,
        b: C64::new(16.0 * u1.powi(3) * u2 * u2 * u3, 0.0),
        m54: C64::new(8.0 * u1 * u1 * u2, 0.0),
    }
}

/// Residual of the `c4` identity chain at an interior parameter point:
/// the worst disagreement between the polynomial and closed computations of
/// `a`, `b`, `m54`, plus the closure defect `|m54 c4 - a - b zeta4|`.
///
/// Boundary points `|zeta1| = 1` or `|zeta2| = 1` collapse the identity to
/// `0 = 0` and are rejected.
pub fn verify_c4_identity(z: &SchurParams) -> Result<f64, DomainError> {
    verify_c4_identity_inner(z, false)
}

/// Same as [`verify_c4_identity`] but with one sign of the closed-route `a`
/// deliberately flipped.  Test hook: a correct implementation must make this
/// residual large on generic interior samples.
pub fn tampered_c4_identity(z: &SchurParams) -> Result<f64, DomainError> {
    verify_c4_identity_inner(z, true)
}

fn verify_c4_identity_inner(z: &SchurParams, tamper: bool) -> Result<f64, DomainError> {
    if 1.0 - z.zeta1.norm_sqr() <= 0.0 {
        return Err(DomainError::BoundaryDegenerate { index: 1 });
    }
    if 1.0 - z.zeta2.norm_sqr() <= 0.0 {
        return Err(DomainError::BoundaryDegenerate { index: 2 });
    }
    let poly = c4_parts_from_coeffs(&coeffs_from_schur(z));
    let mut closed = c4_parts_from_schur(z);
    if tamper {
        // flip the zeta3^2 term inside the closed-route `a`
        let (z1, z2, z3) = (z.zeta1, z.zeta2, z.zeta3);
        let u1 = 1.0 - z1.norm_sqr();
        let u2 = 1.0 - z2.norm_sqr();
        closed.a += 16.0 * u1 * u1 * u2 * (2.0 * u1 * u2 * z2.conj() * z3 * z3);
    }
    let part_gap = (poly.a - closed.a)
        .norm()
        .max((poly.b - closed.b).norm())
        .max((poly.m54 - closed.m54).norm());
    let c4 = coeffs_from_schur(z).c4;
    let closure = (closed.m54 * c4 - closed.a - closed.b * z.zeta4).norm();
    Ok(part_gap + closure)
}

/// Triangular inverse of [`coeffs_from_schur`].
///
/// Solves for `zeta1, zeta2, ...` in turn; once some `1 - |zeta_k|^2` falls
/// below [`BOUNDARY_CUTOFF`] the tail parameters carry no freedom and are set
/// to zero.
pub fn schur_from_coeffs(c: &CaratheodoryCoeffs) -> SchurParams {
    let zero = C64::new(0.0, 0.0);
    let z1 = c.c1 / 2.0;
    let u1 = 1.0 - z1.norm_sqr();
    if u1 < BOUNDARY_CUTOFF {
        return SchurParams { zeta1: z1, zeta2: zero, zeta3: zero, zeta4: zero, real_zeta1: false };
    }
    let z2 = (c.c2 - 2.0 * z1 * z1) / (2.0 * u1);
    let u2 = 1.0 - z2.norm_sqr();
    if u2 < BOUNDARY_CUTOFF {
        return SchurParams { zeta1: z1, zeta2: z2, zeta3: zero, zeta4: zero, real_zeta1: false };
    }
    let z3 = (c.c3 - 2.0 * z1.powu(3) - 4.0 * u1 * z1 * z2 + 2.0 * u1 * z1.conj() * z2 * z2)
        / (2.0 * u1 * u2);
    let u3 = 1.0 - z3.norm_sqr();
    if u3 < BOUNDARY_CUTOFF {
        return SchurParams { zeta1: z1, zeta2: z2, zeta3: z3, zeta4: zero, real_zeta1: false };
    }
    let head = z1.powu(4)
        + u1 * (3.0 * z1 * z1 * z2 - 2.0 * z1.norm_sqr() * z2 * z2 + z1.conj().powu(2) * z2.powu(3))
        + u1 * u1 * z2 * z2
        + u1 * u2 * (2.0 * z1 * z3 - 2.0 * z1.conj() * z2 * z3 - z2.conj() * z3 * z3);
    let z4 = (c.c4 / 2.0 - head) / (u1 * u2 * u3);
    SchurParams { zeta1: z1, zeta2: z2, zeta3: z3, zeta4: z4, real_zeta1: false }
}

/// Deterministic parameter samples, uniform on each disk (or on `[-1, 1]`
/// for `zeta1` when `real_zeta1` is set).
///
/// Sample `i` is drawn from stream `i` of a ChaCha8 generator seeded with
/// `seed`, so any batch prefix and any concurrent partition of the index
/// range reproduce the same points.
pub fn sample_schur(seed: u64, count: usize, real_zeta1: bool) -> Vec<SchurParams> {
    (0..count).map(|i| sample_schur_at(seed, i as u64, real_zeta1)).collect()
}

/// The `index`-th sample of the stream defined by `seed`.
pub fn sample_schur_at(seed: u64, index: u64, real_zeta1: bool) -> SchurParams {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let disk_point = |rng: &mut ChaCha8Rng| {
        let u: f64 = rng.random();
        let v: f64 = rng.random();
        C64::from_polar(u.sqrt(), 2.0 * std::f64::consts::PI * v)
    };
    let zeta1 = if real_zeta1 {
        C64::new(2.0 * rng.random::<f64>() - 1.0, 0.0)
    } else {
        disk_point(&mut rng)
    };
    let zeta2 = disk_point(&mut rng);
    let zeta3 = disk_point(&mut rng);
    let zeta4 = disk_point(&mut rng);
    SchurParams { zeta1, zeta2, zeta3, zeta4, real_zeta1 }
}
