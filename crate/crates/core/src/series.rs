//! Truncated power-series arithmetic and compositional inversion.
//!
//! Everything here works with normalized series `f(z) = z + a2 z^2 + ...`
//! truncated at a fixed order.  The inverse coefficients of `f` follow from
//! `w = f^{-1}(w) + a2 f^{-1}(w)^2 + ...` by comparing coefficients:
//!
//! ```text
//! delta2 = -a2
//! delta3 = 2 a2^2 - a3
//! delta4 = 5 a2 a3 - 5 a2^3 - a4
//! delta5 = 14 a2^4 - 21 a2^2 a3 + 6 a2 a4 + 3 a3^2 - a5
//! ```
//!
//! [`compose`] exists to certify these: composing `f` with the series built
//! from its inverse coefficients must give the identity through order 5.

use crate::caratheodory::CaratheodoryCoeffs;
use crate::C64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SeriesError {
    #[error("series must be normalized with a1 = 1, got a1 = {got}")]
    NotNormalized { got: C64 },
    #[error("series must carry at least one coefficient")]
    Empty,
    #[error("operation needs order >= {needed}, series has order {got}")]
    InsufficientOrder { needed: usize, got: usize },
    #[error("order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
}

/// Coefficients `a1 = 1, a2, ..., a_N` of a normalized series of order `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<C64>,
}

impl TruncatedSeries {
    pub fn new(coeffs: Vec<C64>) -> Result<Self, SeriesError> {
        let first = *coeffs.first().ok_or(SeriesError::Empty)?;
        if first != C64::new(1.0, 0.0) {
            return Err(SeriesError::NotNormalized { got: first });
        }
        Ok(Self { coeffs })
    }

    /// Builds `z + tail[0] z^2 + tail[1] z^3 + ...`.
    pub fn from_tail(tail: &[C64]) -> Self {
        let mut coeffs = Vec::with_capacity(tail.len() + 1);
        coeffs.push(C64::new(1.0, 0.0));
        coeffs.extend_from_slice(tail);
        Self { coeffs }
    }

    pub fn identity(order: usize) -> Self {
        let mut coeffs = vec![C64::new(0.0, 0.0); order.max(1)];
        coeffs[0] = C64::new(1.0, 0.0);
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// 1-based coefficient access: `coeff(1) = a1 = 1`.
    ///
    /// Panics when `n` is outside `1..=order`.
    pub fn coeff(&self, n: usize) -> C64 {
        self.coeffs[n - 1]
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }
}

/// Inverse coefficients `delta2..delta5`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseCoeffs {
    pub delta2: C64,
    pub delta3: C64,
    pub delta4: C64,
    pub delta5: C64,
}

impl InverseCoeffs {
    /// 2-based access mirroring the subscripts.
    ///
    /// Panics when `n` is outside `2..=5`.
    pub fn delta(&self, n: u8) -> C64 {
        match n {
            2 => self.delta2,
            3 => self.delta3,
            4 => self.delta4,
            5 => self.delta5,
            _ => panic!("inverse coefficients are indexed 2..=5, got {n}"),
        }
    }

    /// Lifts the inverse coefficients to the order-5 series
    /// `w + delta2 w^2 + ... + delta5 w^5`.
    pub fn as_series(&self) -> TruncatedSeries {
        TruncatedSeries::from_tail(&[self.delta2, self.delta3, self.delta4, self.delta5])
    }
}

/// Inverse coefficients of a normalized series of order at least 5.
pub fn invert_series(f: &TruncatedSeries) -> Result<InverseCoeffs, SeriesError> {
    if f.order() < 5 {
        return Err(SeriesError::InsufficientOrder { needed: 5, got: f.order() });
    }
    let (a2, a3, a4, a5) = (f.coeff(2), f.coeff(3), f.coeff(4), f.coeff(5));
    Ok(InverseCoeffs {
        delta2: -a2,
        delta3: 2.0 * a2 * a2 - a3,
        delta4: 5.0 * a2 * a3 - 5.0 * a2.powu(3) - a4,
        delta5: 14.0 * a2.powu(4) - 21.0 * a2 * a2 * a3 + 6.0 * a2 * a4 + 3.0 * a3 * a3 - a5,
    })
}

/// Coefficients of `f(g(z))` truncated to the shared order.
pub fn compose(f: &TruncatedSeries, g: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
    if f.order() != g.order() {
        return Err(SeriesError::OrderMismatch { left: f.order(), right: g.order() });
    }
    let n = f.order();
    let mut result = vec![C64::new(0.0, 0.0); n];
    // g^j vanishes to order j, so only powers j <= n contribute.
    let mut g_pow: Vec<C64> = g.coeffs().to_vec();
    for j in 1..=n {
        let aj = f.coeff(j);
        for k in j..=n {
            result[k - 1] += aj * g_pow[k - 1];
        }
        if j < n {
            g_pow = mul_trunc(&g_pow, g.coeffs(), n);
        }
    }
    TruncatedSeries::new(result)
}

/// Coefficient-wise product of two series vanishing at 0, truncated to
/// `order`.  Index `i` holds the coefficient of `z^{i+1}`.
fn mul_trunc(a: &[C64], b: &[C64], order: usize) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); order];
    for (i, &ai) in a.iter().enumerate() {
        if ai == C64::new(0.0, 0.0) {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            let power = (i + 1) + (j + 1);
            if power > order {
                break;
            }
            out[power - 1] += ai * bj;
        }
    }
    out
}

/// Taylor coefficients of the solution of `z f'(z) = g(z) p(z)` where
/// `g(z) = z + b2 z^2 + ... + b5 z^5` and `p(z) = 1 + c1 z + ... + c4 z^4`:
///
/// ```text
/// 2 a2 = b2 + c1
/// 3 a3 = b3 + b2 c1 + c2
/// 4 a4 = b4 + b3 c1 + b2 c2 + c3
/// 5 a5 = b5 + b4 c1 + b3 c2 + b2 c3 + c4
/// ```
pub fn series_from_ode(b: &[f64; 4], c: &CaratheodoryCoeffs) -> TruncatedSeries {
    let [b2, b3, b4, b5] = *b;
    let a2 = (b2 + c.c1) / 2.0;
    let a3 = (b3 + b2 * c.c1 + c.c2) / 3.0;
    let a4 = (b4 + b3 * c.c1 + b2 * c.c2 + c.c3) / 4.0;
    let a5 = (b5 + b4 * c.c1 + b3 * c.c2 + b2 * c.c3 + c.c4) / 5.0;
    TruncatedSeries::from_tail(&[a2, a3, a4, a5])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn real(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn series_of(tail: &[f64]) -> TruncatedSeries {
        let tail: Vec<C64> = tail.iter().map(|&x| real(x)).collect();
        TruncatedSeries::from_tail(&tail)
    }

    fn assert_close(got: C64, want: C64, tol: f64) {
        assert!(
            (got - want).norm() <= tol,
            "got {got}, want {want} (|diff| = {})",
            (got - want).norm()
        );
    }

    #[test]
    fn identity_series_inverts_to_zero() {
        let f = TruncatedSeries::identity(5);
        let d = invert_series(&f).unwrap();
        for n in 2..=5 {
            assert_close(d.delta(n), real(0.0), 0.0);
        }
    }

    #[test]
    fn koebe_like_series_has_alternating_inverse() {
        // f = z/(1-z): a_n = 1; its inverse is w/(1+w): delta_n = (-1)^{n+1}.
        let f = series_of(&[1.0, 1.0, 1.0, 1.0]);
        let d = invert_series(&f).unwrap();
        assert_close(d.delta2, real(-1.0), 0.0);
        assert_close(d.delta3, real(1.0), 0.0);
        assert_close(d.delta4, real(-1.0), 0.0);
        assert_close(d.delta5, real(1.0), 0.0);
    }

    #[test]
    fn integrated_half_plane_series_inverse() {
        // a_n = 2 - 1/n (from integrating f' = (1+z)/(1-z)^2): the inverse
        // coefficients have magnitudes 3/2, 17/6, 49/8, 1729/120.
        let f = series_of(&[3.0 / 2.0, 5.0 / 3.0, 7.0 / 4.0, 9.0 / 5.0]);
        let d = invert_series(&f).unwrap();
        assert_close(d.delta2, real(-1.5), 1e-15);
        assert_close(d.delta3, real(17.0 / 6.0), 1e-14);
        assert_close(d.delta4, real(-49.0 / 8.0), 1e-13);
        assert_close(d.delta5, real(1729.0 / 120.0), 1e-13);
    }

    #[test]
    fn insufficient_order_is_rejected() {
        let f = series_of(&[1.0, 1.0, 1.0]);
        assert!(matches!(
            invert_series(&f),
            Err(SeriesError::InsufficientOrder { needed: 5, got: 4 })
        ));
    }

    #[test]
    fn compose_with_identity_is_identity_on_left() {
        let g = series_of(&[0.5, -0.25, 0.125, 2.0]);
        let f = TruncatedSeries::identity(5);
        assert_eq!(compose(&f, &g).unwrap(), g);
    }

    #[test]
    fn compose_square_plus_z_by_hand() {
        // f = g = z + z^2 at order 3: f(g) = g + g^2 = z + 2z^2 + 2z^3.
        let f = series_of(&[1.0, 0.0]);
        let h = compose(&f, &f).unwrap();
        assert_close(h.coeff(1), real(1.0), 0.0);
        assert_close(h.coeff(2), real(2.0), 0.0);
        assert_close(h.coeff(3), real(2.0), 0.0);
    }

    #[test]
    fn compose_order_mismatch_is_rejected() {
        let f = series_of(&[1.0]);
        let g = series_of(&[1.0, 1.0]);
        assert!(matches!(compose(&f, &g), Err(SeriesError::OrderMismatch { .. })));
    }

    #[test]
    fn roundtrip_for_koebe_like_series() {
        let f = series_of(&[1.0, 1.0, 1.0, 1.0]);
        let g = invert_series(&f).unwrap().as_series();
        let h = compose(&f, &g).unwrap();
        let id = TruncatedSeries::identity(5);
        for n in 1..=5 {
            assert_close(h.coeff(n), id.coeff(n), 1e-12);
        }
    }

    #[test]
    fn ode_series_for_half_plane_data() {
        let two = real(2.0);
        let c = CaratheodoryCoeffs::new(two, two, two, two);
        let a = series_from_ode(&[1.0, 1.0, 1.0, 1.0], &c);
        let want = [1.0, 1.5, 5.0 / 3.0, 7.0 / 4.0, 9.0 / 5.0];
        for (n, w) in want.iter().enumerate() {
            assert_close(a.coeff(n + 1), real(*w), 1e-15);
        }
    }

    #[test]
    fn ode_series_for_even_generator_and_constant_p() {
        let zero = real(0.0);
        let c = CaratheodoryCoeffs::new(zero, zero, zero, zero);
        let a = series_from_ode(&[0.0, 1.0, 0.0, 1.0], &c);
        let want = [1.0, 0.0, 1.0 / 3.0, 0.0, 1.0 / 5.0];
        for (n, w) in want.iter().enumerate() {
            assert_close(a.coeff(n + 1), real(*w), 0.0);
        }
    }

    #[test]
    fn ode_series_for_trivial_data_is_identity() {
        let zero = real(0.0);
        let c = CaratheodoryCoeffs::new(zero, zero, zero, zero);
        let a = series_from_ode(&[0.0, 0.0, 0.0, 0.0], &c);
        assert_eq!(a, TruncatedSeries::identity(5));
    }

    #[test]
    fn inversion_is_exact_on_integer_coefficients() {
        // The inversion formulas are integer polynomials in a2..a5, so f64
        // evaluation is exact for small integer inputs; check against i64.
        for a2 in -3i64..=3 {
            for a3 in -3i64..=3 {
                for a4 in -2i64..=2 {
                    for a5 in -2i64..=2 {
                        let f = series_of(&[a2 as f64, a3 as f64, a4 as f64, a5 as f64]);
                        let d = invert_series(&f).unwrap();
                        let want2 = -a2;
                        let want3 = 2 * a2 * a2 - a3;
                        let want4 = 5 * a2 * a3 - 5 * a2.pow(3) - a4;
                        let want5 = 14 * a2.pow(4) - 21 * a2 * a2 * a3
                            + 6 * a2 * a4
                            + 3 * a3 * a3
                            - a5;
                        assert_eq!(d.delta2, real(want2 as f64));
                        assert_eq!(d.delta3, real(want3 as f64));
                        assert_eq!(d.delta4, real(want4 as f64));
                        assert_eq!(d.delta5, real(want5 as f64));
                    }
                }
            }
        }
    }

    fn bounded_complex(bound: f64) -> impl Strategy<Value = C64> {
        (-bound..bound, -bound..bound).prop_map(|(re, im)| C64::new(re, im))
    }

    proptest! {
        // Round trip: f composed with the series of its inverse coefficients
        // is the identity through order 5, up to rounding relative to the
        // accumulated coefficient magnitude.
        #[test]
        fn roundtrip_inverts_within_rounding(
            a2 in bounded_complex(2.0),
            a3 in bounded_complex(2.0),
            a4 in bounded_complex(2.0),
            a5 in bounded_complex(2.0),
        ) {
            let f = TruncatedSeries::from_tail(&[a2, a3, a4, a5]);
            let g = invert_series(&f).unwrap().as_series();
            let h = compose(&f, &g).unwrap();
            let sigma: f64 = g.coeffs().iter().map(|z| z.norm()).sum();
            let scale: f64 = (1..=5u32)
                .map(|j| f.coeff(j as usize).norm() * sigma.powi(j as i32))
                .sum();
            let tol = 1e-12 * scale.max(1.0);
            let id = TruncatedSeries::identity(5);
            for n in 1..=5 {
                prop_assert!((h.coeff(n) - id.coeff(n)).norm() <= tol);
            }
        }
    }
}
