//! Numerical integration used by the verification suites.

/// Composite Simpson's rule on [a, b] with n subintervals (n is rounded up
/// to even). Exactness order h⁴ on smooth integrands.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = if n.is_multiple_of(2) { n.max(2) } else { n + 1 };
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let weight = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += weight * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

/// Agreement probability of the one-bit simulation by integrating its
/// conditional agreement density over the shared real: the density is 1
/// outside the interval between the inputs and 1 − sin(2|y−r|) inside, so
/// only the interior piece needs quadrature (it is smooth there). The
/// interval endpoints carry no measure; the integrand takes them by
/// continuity from the inside.
pub fn epr_agreement_by_quadrature(x: f64, y: f64) -> f64 {
    let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
    if hi - lo == 0.0 {
        return 1.0;
    }
    let inside = |r: f64| 1.0 - (2.0 * (y - r).abs()).sin();
    lo + (1.0 - hi) + simpson(inside, lo, hi, 4000)
}

#[cfg(test)]
mod tests {
    use super::*;
    use qcc_core::classical::agreement_density;

    #[test]
    fn simpson_integrates_polynomials_exactly() {
        // cubic: Simpson is exact
        let value = simpson(|t| t * t * t - 2.0 * t + 1.0, 0.0, 2.0, 2);
        assert!((value - (4.0 - 4.0 + 2.0)).abs() < 1e-12);
    }

    #[test]
    fn simpson_handles_odd_interval_requests() {
        let value = simpson(|t| t, 0.0, 1.0, 3);
        assert!((value - 0.5).abs() < 1e-12);
    }

    /// The closed form of the interior piece gives
    /// ∫ₓʸ (1 − sin(2(y−r))) dr = (y−x) − (1 − cos(2(y−x)))/2,
    /// so the full integral is ½ + ½cos(2(y−x)).
    #[test]
    fn quadrature_matches_the_closed_form() {
        for (x, y) in [(0.2, 0.7), (0.9, 0.1), (0.5, 0.5), (0.01, 0.99)] {
            let integral = epr_agreement_by_quadrature(x, y);
            let closed = 0.5 + 0.5 * (2.0 * (y - x)).cos();
            assert!(
                (integral - closed).abs() < 1e-9,
                "x={x} y={y}: {integral} vs {closed}"
            );
            assert!((integral - (x - y).cos().powi(2)).abs() < 1e-9);
        }
    }

    /// The quadrature integrand agrees with the protocol's agreement
    /// density at interior points.
    #[test]
    fn integrand_is_the_interior_density() {
        let (x, y) = (0.3, 0.8);
        for i in 1..20 {
            let r = x + (y - x) * i as f64 / 20.0;
            let inside = 1.0 - (2.0 * (y - r).abs()).sin();
            assert_eq!(inside, agreement_density(x, y, r));
        }
    }
}
