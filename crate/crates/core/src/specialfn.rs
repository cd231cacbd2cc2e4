//! Exponential integrals, incomplete gamma and Gamma-law helpers.

use libm::{exp, fabs, lgamma, log};

use crate::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082_402_431;

const EPS: f64 = 1e-17;
const MAX_ITER: usize = 10_000;
const TINY: f64 = 1e-300;

/// Shape/rate parameters of a Gamma law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaParams {
    pub shape: f64,
    pub rate: f64,
}

impl GammaParams {
    pub fn new(shape: f64, rate: f64) -> Result<Self> {
        if !(shape > 0.0 && shape.is_finite()) {
            return Err(Error::Domain("gamma shape must be positive and finite"));
        }
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(Error::Domain("gamma rate must be positive and finite"));
        }
        Ok(Self { shape, rate })
    }

    pub fn mean(&self) -> f64 {
        self.shape / self.rate
    }

    pub fn variance(&self) -> f64 {
        self.shape / (self.rate * self.rate)
    }
}

/// Exponential integral Ei(x) = −PV∫_{−x}^∞ e^{−t}/t dt.
///
/// Positive arguments use the power series up to 40 and the asymptotic
/// series beyond. Negative arguments go through Ei(x) = −E₁(−x).
pub fn exp_integral_ei(x: f64) -> Result<f64> {
    if x == 0.0 {
        return Err(Error::Domain("Ei has a logarithmic singularity at 0"));
    }
    if x.is_nan() {
        return Err(Error::Domain("Ei of NaN"));
    }
    if x < 0.0 {
        return Ok(-exp_integral_e1(-x)?);
    }
    if x <= 40.0 {
        let mut term = 1.0;
        let mut sum = 0.0;
        for k in 1..MAX_ITER {
            term *= x / k as f64;
            let add = term / k as f64;
            sum += add;
            if add < EPS * sum {
                break;
            }
        }
        Ok(EULER_GAMMA + log(x) + sum)
    } else {
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..MAX_ITER {
            let next = term * k as f64 / x;
            if next >= term {
                break;
            }
            term = next;
            sum += term;
            if term < EPS * sum {
                break;
            }
        }
        Ok(exp(x) / x * sum)
    }
}

/// E₁(x) = ∫_x^∞ e^{−t}/t dt for x > 0.
pub fn exp_integral_e1(x: f64) -> Result<f64> {
    if x > 1.0 {
        Ok(exp(-x) * scaled_exp_integral_en(1, x)?)
    } else {
        exp_integral_en(1, x)
    }
}

/// Generalized exponential integral E_n(x) = ∫_1^∞ e^{−xt}/tⁿ dt.
pub fn exp_integral_en(n: u32, x: f64) -> Result<f64> {
    if x > 1.0 {
        return Ok(exp(-x) * scaled_exp_integral_en(n, x)?);
    }
    check_en_args(n, x)?;
    if x == 0.0 {
        return Ok(1.0 / (n - 1) as f64);
    }
    if n == 0 {
        return Ok(exp(-x) / x);
    }
    Ok(en_series(n, x))
}

/// eˣ·E_n(x), finite for every x > 0 (and for x = 0 when n ≥ 2).
///
/// This is the form that stays representable when x is large; the
/// closed-form rate expressions are written in terms of it.
pub fn scaled_exp_integral_en(n: u32, x: f64) -> Result<f64> {
    check_en_args(n, x)?;
    if x == 0.0 {
        return Ok(1.0 / (n - 1) as f64);
    }
    if n == 0 {
        return Ok(1.0 / x);
    }
    if x <= 1.0 {
        return Ok(exp(x) * en_series(n, x));
    }
    // Modified Lentz evaluation of the continued fraction.
    let nm1 = (n - 1) as f64;
    let mut b = x + n as f64;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (nm1 + i as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if fabs(del - 1.0) < EPS {
            return Ok(h);
        }
    }
    Err(Error::Numerical(alloc::format!(
        "E_{n}({x}) continued fraction did not converge"
    )))
}

fn check_en_args(n: u32, x: f64) -> Result<()> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::Domain("E_n requires x >= 0"));
    }
    if x == 0.0 && n <= 1 {
        return Err(Error::Domain("E_0 and E_1 diverge at 0"));
    }
    Ok(())
}

fn en_series(n: u32, x: f64) -> f64 {
    let nm1 = n as i64 - 1;
    let mut ans = if nm1 != 0 {
        1.0 / nm1 as f64
    } else {
        -log(x) - EULER_GAMMA
    };
    let mut fact = 1.0;
    for i in 1..MAX_ITER as i64 {
        fact *= -x / i as f64;
        let del = if i != nm1 {
            -fact / (i - nm1) as f64
        } else {
            let psi = -EULER_GAMMA + (1..=nm1).map(|k| 1.0 / k as f64).sum::<f64>();
            fact * (-log(x) + psi)
        };
        ans += del;
        if fabs(del) < fabs(ans) * EPS {
            break;
        }
    }
    ans
}

/// eˣ·Ei(−x) for x > 0, i.e. −eˣE₁(x).
pub fn scaled_ei_neg(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain("scaled Ei(-x) requires x > 0"));
    }
    Ok(-scaled_exp_integral_en(1, x)?)
}

/// Truncated exponential series Σ_{k=0}^{n} x^k/k!.
pub fn trunc_exp_taylor(n: u32, x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..=n {
        term *= x / k as f64;
        sum += term;
    }
    sum
}

/// Regularized lower incomplete gamma P(a, x).
pub fn regularized_lower_gamma(a: f64, x: f64) -> Result<f64> {
    check_gamma_args(a, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    let lead = exp(-x + a * log(x) - lgamma(a));
    if x < a + 1.0 {
        Ok(lead * gamma_series(a, x)?)
    } else {
        Ok(1.0 - lead * gamma_cf(a, x)?)
    }
}

/// Lower incomplete gamma γ(a, x) = ∫₀ˣ t^{a−1}e^{−t} dt.
pub fn lower_incomplete_gamma(a: f64, x: f64) -> Result<f64> {
    check_gamma_args(a, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x < a + 1.0 {
        Ok(exp(-x + a * log(x)) * gamma_series(a, x)?)
    } else {
        let full = exp(lgamma(a));
        if x.is_infinite() {
            return Ok(full);
        }
        Ok(full - exp(-x + a * log(x)) * gamma_cf(a, x)?)
    }
}

fn check_gamma_args(a: f64, x: f64) -> Result<()> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::Domain("incomplete gamma requires a > 0"));
    }
    if x.is_nan() || x < 0.0 {
        return Err(Error::Domain("incomplete gamma requires x >= 0"));
    }
    Ok(())
}

// Σ x^k / (a(a+1)…(a+k)); multiply by x^a e^{−x} for γ(a, x).
fn gamma_series(a: f64, x: f64) -> Result<f64> {
    let mut ap = a;
    let mut del = 1.0 / a;
    let mut sum = del;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if fabs(del) < fabs(sum) * EPS {
            return Ok(sum);
        }
    }
    Err(Error::Numerical(alloc::format!("gamma series ({a}, {x}) did not converge")))
}

// Continued fraction for Γ(a, x)·eˣ·x^{−a}.
fn gamma_cf(a: f64, x: f64) -> Result<f64> {
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if fabs(d) < TINY {
            d = TINY;
        }
        c = b + an / c;
        if fabs(c) < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if fabs(del - 1.0) < EPS {
            return Ok(h);
        }
    }
    Err(Error::Numerical(alloc::format!("gamma continued fraction ({a}, {x}) did not converge")))
}

/// CDF of a Gamma law: γ(shape, rate·x)/Γ(shape).
pub fn gamma_cdf(p: GammaParams, x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::Domain("gamma_cdf requires x >= 0"));
    }
    regularized_lower_gamma(p.shape, p.rate * x)
}

/// Density of a Gamma law.
pub fn gamma_pdf(p: GammaParams, x: f64) -> f64 {
    if x < 0.0 {
        return 0.0;
    }
    if x == 0.0 {
        return match p.shape {
            s if s < 1.0 => f64::INFINITY,
            s if s == 1.0 => p.rate,
            _ => 0.0,
        };
    }
    exp(p.shape * log(p.rate) + (p.shape - 1.0) * log(x) - p.rate * x - lgamma(p.shape))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn ei_reference_values() {
        assert!(rel(exp_integral_ei(1.0).unwrap(), 1.895117816355937) < 1e-14);
        assert!(rel(exp_integral_ei(-1.0).unwrap(), -0.219383934395520) < 1e-14);
        let table = [
            (0.1, -1.6228128139692766136),
            (5.0, 40.185275355803177455),
            (10.0, 2492.2289762418777591),
            (25.0, 3005950906.5255486898),
            (39.5, 3710918879133970.6341),
            (40.5, 9831586535606509.8812),
            (50.0, 1.0585636897131690963e20),
            (-0.1, -1.8229239584193906159),
            (-5.0, -0.0011482955912753257973),
            (-10.0, -4.1569689296853242774e-6),
            (-25.0, -5.3488997553402166403e-13),
            (-50.0, -3.7832640295504590187e-24),
        ];
        for (x, want) in table {
            let got = exp_integral_ei(x).unwrap();
            assert!(rel(got, want) < 1e-13, "Ei({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn ei_rejects_zero() {
        assert_eq!(exp_integral_ei(0.0), Err(Error::Domain("Ei has a logarithmic singularity at 0")));
        assert!(exp_integral_ei(-1e-300).unwrap() < -600.0);
    }

    // Ei(−x) = −∫₁^∞ e^{−xt}/t dt and Ei(x) = γ + ln x + ∫₀ˣ (eᵗ−1)/t dt.
    fn ei_by_quadrature(x: f64) -> f64 {
        if x < 0.0 {
            -quad::integrate_to_infinity(|t| (x * t).exp() / t, 1.0, 0.0, 1e-14).unwrap().value
        } else {
            let q = quad::integrate(|t| t.exp_m1() / t, 0.0, x, 0.0, 1e-15).unwrap();
            EULER_GAMMA + x.ln() + q.value
        }
    }

    #[test]
    fn ei_matches_quadrature_oracle_on_grid() {
        let mut x: f64 = -50.0;
        while x <= 50.0 {
            if x.abs() > 1e-9 {
                let got = exp_integral_ei(x).unwrap();
                let want = ei_by_quadrature(x);
                assert!(rel(got, want) < 1e-12, "x={x}: {got} vs {want}");
            }
            x += 0.73;
        }
    }

    #[test]
    fn ei_derivative_is_exp_over_x() {
        for x in [0.5f64, -0.5, 2.0, -2.0, 10.0, -10.0] {
            let h = 1e-5 * x.abs();
            let fd = (exp_integral_ei(x + h).unwrap() - exp_integral_ei(x - h).unwrap()) / (2.0 * h);
            let exact = x.exp() / x;
            assert!(rel(fd, exact) < 1e-6, "x={x}");
        }
    }

    #[test]
    fn scaled_en_reference_values() {
        let table = [
            (1, 0.5, 0.92291063248373046883),
            (2, 0.5, 0.53854468375813476558),
            (9, 0.5, 0.11674910509969390227),
            (10, 3.0, 0.081568027283274267084),
            (1, 30.0, 0.032289738758980125216),
            (5, 100.0, 0.0095280542433600247159),
            (20, 2.0, 0.047395665800695029241),
            (3, 1e-3, 0.49950316893703516273),
        ];
        for (n, x, want) in table {
            let got = scaled_exp_integral_en(n, x).unwrap();
            assert!(rel(got, want) < 1e-13, "E_{n}({x}): {got} vs {want}");
        }
        assert_eq!(scaled_exp_integral_en(4, 0.0).unwrap(), 1.0 / 3.0);
        assert!(scaled_exp_integral_en(1, 0.0).is_err());
    }

    #[test]
    fn en_recurrence_holds() {
        // n·E_{n+1}(x) = e^{−x} − x·E_n(x)
        for x in [0.2, 0.9, 1.5, 7.0, 60.0] {
            for n in 1..12u32 {
                let lhs = n as f64 * scaled_exp_integral_en(n + 1, x).unwrap();
                let rhs = 1.0 - x * scaled_exp_integral_en(n, x).unwrap();
                assert!((lhs - rhs).abs() < 1e-12 * lhs.abs().max(1e-3), "n={n} x={x}");
            }
        }
    }

    #[test]
    fn trunc_exp_taylor_examples() {
        for n in [0, 1, 5, 40] {
            assert_eq!(trunc_exp_taylor(n, 0.0), 1.0);
        }
        assert_eq!(trunc_exp_taylor(2, 1.0), 2.5);
        assert!((trunc_exp_taylor(30, 1.0) - core::f64::consts::E).abs() < 1e-12);
    }

    #[test]
    fn incomplete_gamma_examples() {
        for x in [0.0f64, 0.3, 1.0, 4.0, 25.0] {
            let want = 1.0 - (-(x as f64)).exp();
            assert!((lower_incomplete_gamma(1.0, x).unwrap() - want).abs() < 1e-15);
        }
        assert_eq!(lower_incomplete_gamma(2.7, 0.0).unwrap(), 0.0);
        assert!((lower_incomplete_gamma(2.0, 1.0).unwrap() - 0.264241117657115).abs() < 1e-14);
        let table = [
            (0.5, 0.3, 0.99509453965570797551),
            (2.5, 7.0, 1.3085901609211585288),
            (10.0, 3.0, 400.07089265630528883),
            (3.7, 12.0, 4.1643105303924078848),
            (50.0, 45.0, 1.5012520153238499914e62),
        ];
        for (a, x, want) in table {
            let got = lower_incomplete_gamma(a, x).unwrap();
            assert!(rel(got, want) < 1e-12, "γ({a},{x}) = {got}");
        }
    }

    #[test]
    fn gamma_cdf_examples() {
        let p = GammaParams::new(1.0, 2.5).unwrap();
        for x in [0.0, 0.1, 1.0, 3.0] {
            assert!((gamma_cdf(p, x).unwrap() - (1.0 - (-2.5 * x).exp())).abs() < 1e-15);
        }
        let p = GammaParams::new(3.0, 1.0).unwrap();
        assert_eq!(gamma_cdf(p, 0.0).unwrap(), 0.0);
        assert!((gamma_cdf(p, 3.0).unwrap() - 0.576809918873156).abs() < 1e-14);
        assert!(GammaParams::new(0.0, 1.0).is_err());
        assert!(GammaParams::new(1.0, -1.0).is_err());
    }
}
