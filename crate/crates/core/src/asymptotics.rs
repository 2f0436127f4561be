//! Saddle-point data and the asymptotic state-count formulas.
//!
//! Everything is computed and compared in log space: the estimates reach
//! e^{250} and beyond, far past double range. The saddle x_E is the unique
//! positive root of p_E(x) = E x^{n+1} - sum_j (n-j) K_j x^j; the solver
//! verifies uniqueness on a log grid instead of assuming it, because the
//! underlying theorems only guarantee it for large E.

use std::fmt;
use std::io::Write;

use crate::error::{Error, Result};
use crate::exact::{CountTable, CumulativeTable};
use crate::specfun;
use crate::spectrum::ZetaProfile;

/// Saddle point and the derived frequency data at one energy.
#[derive(Clone, Copy, Debug)]
pub struct SaddleData {
    pub e: f64,
    pub x_e: f64,
    /// m_E = E x_E.
    pub m_e: f64,
    /// eta = sum_j (n-j)(n-j+1) K_j x_E^{-(n-j)}; proportional to the
    /// second derivative of the exponent at the saddle, positive for every
    /// built-in profile at E >= 1 (checked by callers, not assumed here).
    pub eta: f64,
    pub f_at_x_e: f64,
    /// x_E^{-n} f(x_E) = E x_E + sum_j K_j x_E^{-(n-j)}.
    pub exponent: f64,
}

/// Which asymptotic produced an estimate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormulaId {
    Main1,
    Main2,
    HardyRamanujan,
    Meinardus,
    UpperBound,
}

impl fmt::Display for FormulaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FormulaId::Main1 => "main1",
            FormulaId::Main2 => "main2",
            FormulaId::HardyRamanujan => "hardy_ramanujan",
            FormulaId::Meinardus => "meinardus",
            FormulaId::UpperBound => "upper_bound",
        };
        f.write_str(s)
    }
}

/// A leading-order estimate ln(C E^kappa e^{exponent}), kept in log space.
#[derive(Clone, Copy, Debug)]
pub struct AsymptoticResult {
    pub e: f64,
    pub estimate_log: f64,
    pub c: f64,
    pub kappa: f64,
    pub exponent: f64,
    pub formula: FormulaId,
}

/// Ascending coefficients of p_E(x) = E x^{n+1} - sum_{j<n} (n-j) K_j x^j.
pub fn saddle_polynomial(profile: &ZetaProfile, e: f64) -> Vec<f64> {
    let n = profile.n as usize;
    let mut coeffs = vec![0.0; n + 2];
    for (j, &k) in profile.k_coeffs.iter().enumerate() {
        coeffs[j] = -((n - j) as f64) * k;
    }
    coeffs[n + 1] = e;
    coeffs
}

fn eval_poly(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

fn eval_poly_deriv(coeffs: &[f64], x: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(0.0, |acc, (i, &c)| acc * x + i as f64 * c)
}

/// psi(x) = sum_j K_j x^{-(n-j)}, the principal part of log G_P on the
/// real axis.
fn psi(profile: &ZetaProfile, x: f64) -> f64 {
    let n = profile.n as i32;
    profile
        .k_coeffs
        .iter()
        .enumerate()
        .map(|(j, &k)| k * x.powi(j as i32 - n))
        .sum()
}

/// Solves p_E(x_E) = 0 for the unique positive saddle.
///
/// Uniqueness is certified by a sign scan of 300 log-spaced points on
/// [guess/1000, 10 guess] around the leading-order guess (n K_0/E)^{1/(n+1)};
/// anything other than exactly one sign change is refused. The root is then
/// polished by Newton iterations safeguarded to stay inside the bracket
/// (bisection otherwise) until |p| <= 1e-13 E x^{n+1}.
pub fn solve_saddle(profile: &ZetaProfile, e: f64) -> Result<SaddleData> {
    if !(e > 0.0) || !e.is_finite() {
        return Err(Error::NonPositive { name: "E", value: e });
    }
    let n = profile.n as f64;
    let coeffs = saddle_polynomial(profile, e);
    let guess = (n * profile.k_coeffs[0] / e).powf(1.0 / (n + 1.0));

    const SCAN: usize = 300;
    let (lo_scan, hi_scan) = (guess * 1e-3, guess * 10.0);
    let ratio = (hi_scan / lo_scan).powf(1.0 / (SCAN - 1) as f64);
    let mut sign_changes = 0usize;
    let mut bracket: Option<(f64, f64)> = None;
    let mut prev_x = lo_scan;
    let mut prev_p = eval_poly(&coeffs, lo_scan);
    for i in 1..SCAN {
        let x = lo_scan * ratio.powi(i as i32);
        let p = eval_poly(&coeffs, x);
        if prev_p == 0.0 || p.signum() != prev_p.signum() {
            sign_changes += 1;
            if bracket.is_none() {
                bracket = Some((prev_x, x));
            }
        }
        prev_x = x;
        prev_p = p;
    }
    if sign_changes != 1 {
        return Err(Error::NonUniqueSaddle { e });
    }
    let (mut lo, mut hi) = bracket.expect("one sign change implies a bracket");

    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let p = eval_poly(&coeffs, x);
        let target = 1e-13 * e * x.powf(n + 1.0);
        if p.abs() <= target {
            break;
        }
        if p > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let dp = eval_poly_deriv(&coeffs, x);
        let newton = x - p / dp;
        x = if dp != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (hi - lo) <= f64::EPSILON * x {
            break;
        }
    }

    let residual = eval_poly(&coeffs, x).abs();
    if residual > 1e-12 * e * x.powf(n + 1.0) {
        return Err(Error::SaddleFailure {
            e,
            detail: format!("residual {residual:.3e} above tolerance"),
        });
    }
    let dp = eval_poly_deriv(&coeffs, x);
    if !(dp > 0.0) {
        return Err(Error::SaddleFailure {
            e,
            detail: format!("p' = {dp:.3e} not positive at the root"),
        });
    }

    let ni = profile.n as i32;
    let mut eta = 0.0;
    let mut f_at_x_e = 0.0;
    for (j, &k) in profile.k_coeffs.iter().enumerate() {
        let order = (profile.n as usize - j) as f64;
        eta += order * (order + 1.0) * k * x.powi(j as i32 - ni);
        f_at_x_e += (order + 1.0) * k * x.powi(j as i32);
    }
    let exponent = x.powi(-ni) * f_at_x_e;
    Ok(SaddleData { e, x_e: x, m_e: e * x, eta, f_at_x_e, exponent })
}

/// f(x) = sum_j (n-j+1) K_j x^j, evaluated by Horner.
pub fn f_polynomial(profile: &ZetaProfile, x: f64) -> f64 {
    let n = profile.n as usize;
    profile
        .k_coeffs
        .iter()
        .enumerate()
        .rev()
        .fold(0.0, |acc, (j, &k)| acc * x + ((n - j) as f64 + 1.0) * k)
}

/// The saddle-point asymptotic: ln Omega(E) ~ ln C + kappa ln E + exponent,
/// with C = (detP sqrt(2 pi (n+1)))^{-1} (n K_0)^{(1-2 Z0)/(2(n+1))} and
/// kappa = (Z0 - 1 - n/2)/(n+1).
pub fn main_asymptotic(profile: &ZetaProfile, e: f64) -> Result<AsymptoticResult> {
    let saddle = solve_saddle(profile, e)?;
    let n = profile.n as f64;
    let k0 = profile.k_coeffs[0];
    let c = (profile.det_p * (2.0 * std::f64::consts::PI * (n + 1.0)).sqrt()).recip()
        * (n * k0).powf((1.0 - 2.0 * profile.z0) / (2.0 * (n + 1.0)));
    let kappa = (profile.z0 - 1.0 - n / 2.0) / (n + 1.0);
    let estimate_log = c.ln() + kappa * e.ln() + saddle.exponent;
    Ok(AsymptoticResult { e, estimate_log, c, kappa, exponent: saddle.exponent, formula: FormulaId::Main1 })
}

/// The n = 2 closed-form variant: the saddle is replaced by the explicit
/// y_E = (zeta(3) Vol / (2 pi^2 E))^{1/3} and the exponent by
/// 3 K_0/y^2 + K_1/y - K_1^2/(12 K_0); prefactor C E^{(Z0-2)/3} with the
/// same C as the saddle form.
pub fn surface_asymptotic_n2(profile: &ZetaProfile, e: f64) -> Result<AsymptoticResult> {
    if profile.n != 2 {
        return Err(Error::InvalidArgument {
            what: format!("surface form requires n = 2 (profile has n = {})", profile.n),
        });
    }
    if !(e > 0.0) || !e.is_finite() {
        return Err(Error::NonPositive { name: "E", value: e });
    }
    let zeta3 = specfun::riemann_zeta(3.0)?.value;
    let y = (zeta3 * profile.vol_sigma / (2.0 * std::f64::consts::PI.powi(2) * e)).powf(1.0 / 3.0);
    let (k0, k1) = (profile.k_coeffs[0], profile.k_coeffs[1]);
    let exponent = 3.0 * k0 / (y * y) + k1 / y - k1 * k1 / (12.0 * k0);
    let c = (profile.det_p * (6.0 * std::f64::consts::PI).sqrt()).recip()
        * (2.0 * k0).powf((1.0 - 2.0 * profile.z0) / 6.0);
    let kappa = (profile.z0 - 2.0) / 3.0;
    let estimate_log = c.ln() + kappa * e.ln() + exponent;
    Ok(AsymptoticResult { e, estimate_log, c, kappa, exponent, formula: FormulaId::Main2 })
}

/// The classical partition asymptotic p(E) ~ e^{pi sqrt(2E/3)}/(4 E sqrt 3).
pub fn hardy_ramanujan(e: f64) -> Result<AsymptoticResult> {
    if !(e > 0.0) || !e.is_finite() {
        return Err(Error::NonPositive { name: "E", value: e });
    }
    let exponent = std::f64::consts::PI * (2.0 * e / 3.0).sqrt();
    let c = 1.0 / (4.0 * 3.0f64.sqrt());
    let kappa = -1.0;
    Ok(AsymptoticResult {
        e,
        estimate_log: c.ln() + kappa * e.ln() + exponent,
        c,
        kappa,
        exponent,
        formula: FormulaId::HardyRamanujan,
    })
}

/// Inputs of the general single-pole theorem: the Dirichlet series has one
/// pole at alpha with residue `residue`, value l0 and derivative l0_prime
/// at 0, residual decay exponent c0 in (0,1), and sector parameter delta
/// in (0, 1/2).
#[derive(Clone, Copy, Debug)]
pub struct MeinardusInput {
    pub alpha: f64,
    pub residue: f64,
    pub l0: f64,
    pub l0_prime: f64,
    pub c0: f64,
    pub delta: f64,
}

/// Estimate plus the theorem's error exponent kappa_1 (reported, never used
/// to certify accuracy: its O-constant is non-constructive).
#[derive(Clone, Copy, Debug)]
pub struct MeinardusEstimate {
    pub result: AsymptoticResult,
    pub kappa1: f64,
    /// kappa_1 <= 0: the stated error term is degenerate for these (c0, delta).
    pub degenerate: bool,
}

/// r(E) ~ C E^kappa exp[((a+1)/a) (A Gamma(a+1) zeta(a+1))^{1/(a+1)} E^{a/(a+1)}]
/// with C = e^{L'(0)} (2 pi (a+1))^{-1/2} (A Gamma(a+1) zeta(a+1))^{(1-2L(0))/(2(a+1))}
/// and kappa = (L(0) - 1 - a/2)/(1 + a).
pub fn meinardus_general(input: &MeinardusInput, e: f64) -> Result<MeinardusEstimate> {
    let MeinardusInput { alpha, residue, l0, l0_prime, c0, delta } = *input;
    if !(alpha > 0.0) {
        return Err(Error::NonPositive { name: "alpha", value: alpha });
    }
    if !(residue > 0.0) {
        return Err(Error::NonPositive { name: "residue", value: residue });
    }
    if !(c0 > 0.0 && c0 < 1.0) {
        return Err(Error::InvalidArgument {
            what: format!("C_0 must lie in (0,1) (got {c0})"),
        });
    }
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::InvalidArgument {
            what: format!("delta must lie in (0,1/2) (got {delta})"),
        });
    }
    if !(e > 0.0) || !e.is_finite() {
        return Err(Error::NonPositive { name: "E", value: e });
    }
    let zeta = specfun::riemann_zeta(alpha + 1.0)?.value;
    let gamma = specfun::log_gamma(alpha + 1.0)?.value.exp();
    let pole_mass = residue * gamma * zeta;
    let exponent = (alpha + 1.0) / alpha * pole_mass.powf(1.0 / (alpha + 1.0))
        * e.powf(alpha / (alpha + 1.0));
    let c = l0_prime.exp() / (2.0 * std::f64::consts::PI * (alpha + 1.0)).sqrt()
        * pole_mass.powf((1.0 - 2.0 * l0) / (2.0 * (alpha + 1.0)));
    let kappa = (l0 - 1.0 - alpha / 2.0) / (1.0 + alpha);
    let kappa1 = alpha / (alpha + 1.0) * (c0 / alpha - delta / 4.0).min(0.5 - delta);
    Ok(MeinardusEstimate {
        result: AsymptoticResult {
            e,
            estimate_log: c.ln() + kappa * e.ln() + exponent,
            c,
            kappa,
            exponent,
            formula: FormulaId::Meinardus,
        },
        kappa1,
        degenerate: kappa1 <= 0.0,
    })
}

/// The proof-level upper-bound exponent E x_E + psi(x_E) (the multiplying
/// constant is non-constructive, so callers compare growth, not values).
pub fn upper_bound_log(profile: &ZetaProfile, e: f64) -> Result<f64> {
    let saddle = solve_saddle(profile, e)?;
    Ok(e * saddle.x_e + psi(profile, saddle.x_e))
}

/// E^{-n/(n+1)} ln Omega(E) per energy, skipping E = 0 and empty counts;
/// converges to the profile's growth constant B_n.
pub fn knopp_statistic(table: &CountTable, profile: &ZetaProfile) -> Vec<(u64, f64)> {
    let pow = profile.n as f64 / (profile.n as f64 + 1.0);
    (1..=table.e_max)
        .filter_map(|e| table.ln_omega(e).map(|ln| (e, ln / (e as f64).powf(pow))))
        .collect()
}

/// Same statistic on the cumulative counts D(E).
pub fn weyl_average_statistic(cum: &CumulativeTable, profile: &ZetaProfile) -> Vec<(u64, f64)> {
    let pow = profile.n as f64 / (profile.n as f64 + 1.0);
    (1..=cum.e_max)
        .filter_map(|e| cum.ln_d(e).map(|ln| (e, ln / (e as f64).powf(pow))))
        .collect()
}

/// Residual/contour bookkeeping exponents, one admissible concrete choice
/// per dimension: mu = 1/4 for n = 1, 2 and 1/(2n) above, with delta at the
/// midpoint of its allowed interval for n >= 3.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayExponents {
    pub mu: f64,
    pub delta: f64,
    pub c0: f64,
    pub beta: f64,
}

pub fn decay_exponents(n: u32) -> DecayExponents {
    assert!(n >= 1, "dimension must be >= 1");
    match n {
        1 => {
            let mu = 0.25;
            DecayExponents {
                mu,
                delta: 0.5 - mu,
                c0: 1.0 / 8.0 + 0.75 * mu,
                beta: 11.0 / 8.0 + mu / 4.0,
            }
        }
        2 => {
            let mu = 0.25;
            DecayExponents {
                mu,
                delta: 0.5 - mu,
                c0: 0.25 + 1.5 * mu,
                beta: 7.0 / 4.0 + mu / 2.0,
            }
        }
        _ => {
            let nf = n as f64;
            let mu = 1.0 / (2.0 * nf);
            let sup = (0.5f64)
                .min(4.0 / nf)
                .min(4.0 / 3.0 * (0.5 - 1.0 / nf))
                .min(4.0 * (1.0 / nf - mu));
            let delta = sup / 2.0;
            DecayExponents {
                mu,
                delta,
                c0: nf * (mu + delta / 4.0),
                beta: 1.0 + nf / 2.0 * (1.0 - delta / 2.0),
            }
        }
    }
}

/// One exact-vs-estimate comparison line; ratio = Omega(E)/estimate.
#[derive(Clone, Copy, Debug)]
pub struct ComparisonRow {
    pub e: u64,
    pub ln_exact: f64,
    pub ln_estimate: f64,
    pub ratio: f64,
    pub formula: FormulaId,
}

impl ComparisonRow {
    pub fn new(e: u64, ln_exact: f64, ln_estimate: f64, formula: FormulaId) -> Self {
        ComparisonRow { e, ln_exact, ln_estimate, ratio: (ln_exact - ln_estimate).exp(), formula }
    }
}

/// CSV export, header `E,ln_exact,ln_estimate,ratio,formula_id`.
pub fn write_comparison_csv<W: Write>(rows: &[ComparisonRow], mut w: W) -> Result<()> {
    writeln!(w, "E,ln_exact,ln_estimate,ratio,formula_id")?;
    for r in rows {
        writeln!(w, "{},{},{},{},{}", r.e, r.ln_exact, r.ln_estimate, r.ratio, r.formula)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact;
    use crate::spectrum::{zeta_profile, SpectrumModel, ZetaProfile};
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn partitions_profile() -> ZetaProfile {
        zeta_profile(&SpectrumModel::Partitions).unwrap()
    }

    fn sphere2_profile() -> ZetaProfile {
        zeta_profile(&SpectrumModel::sphere(2).unwrap()).unwrap()
    }

    const ZETA3: f64 = 1.2020569031595943;

    #[test]
    fn saddle_polynomial_examples() {
        let p1 = saddle_polynomial(&partitions_profile(), 7.0);
        assert_eq!(p1.len(), 3);
        assert_relative_eq!(p1[0], -PI * PI / 6.0, max_relative = 1e-13);
        assert_eq!(p1[1], 0.0);
        assert_eq!(p1[2], 7.0);

        let p2 = saddle_polynomial(&sphere2_profile(), 3.0);
        assert_eq!(p2.len(), 4);
        assert_relative_eq!(p2[0], -4.0 * ZETA3, max_relative = 1e-12);
        assert_relative_eq!(p2[1], PI * PI / 6.0, max_relative = 1e-13);
        assert_eq!(p2[2], 0.0);
        assert_eq!(p2[3], 3.0);
        // p_E(0) = -n K_0 < 0 for any valid profile.
        assert!(p1[0] < 0.0 && p2[0] < 0.0);
    }

    #[test]
    fn partitions_closed_form_saddle() {
        let profile = partitions_profile();
        for e in [10.0, 100.0, 4096.0] {
            let s = solve_saddle(&profile, e).unwrap();
            let want = (profile.k_coeffs[0] / e).sqrt();
            assert_relative_eq!(s.x_e, want, max_relative = 1e-14);
            assert_relative_eq!(s.exponent, PI * (2.0 * e / 3.0).sqrt(), max_relative = 1e-12);
        }
        let s100 = solve_saddle(&profile, 100.0).unwrap();
        assert_relative_eq!(s100.x_e, PI / (10.0 * 6.0f64.sqrt()), max_relative = 1e-14);
    }

    #[test]
    fn saddle_identity_and_eta() {
        for (profile, es) in [
            (partitions_profile(), vec![5.0, 50.0, 1e3, 1e5]),
            (sphere2_profile(), vec![5.0, 50.0, 1e3, 1e5]),
            (zeta_profile(&SpectrumModel::sphere(3).unwrap()).unwrap(), vec![10.0, 1e3, 1e6]),
        ] {
            for &e in &es {
                let s = solve_saddle(&profile, e).unwrap();
                let identity = e * s.x_e + psi(&profile, s.x_e);
                assert!(
                    (s.exponent - identity).abs() <= 1e-10 * identity.abs(),
                    "n={} E={e}",
                    profile.n
                );
                assert!(s.eta > 0.0);
                let n1 = profile.n as f64 + 1.0;
                if e >= 1e3 {
                    let gap = (s.eta / s.m_e - n1).abs();
                    assert!(
                        gap <= 5.0 * s.m_e.powf(-1.0 / profile.n as f64),
                        "n={} E={e} gap={gap}",
                        profile.n
                    );
                }
            }
        }
    }

    #[test]
    fn x_e_decreasing_with_shrinking_ratio_gap() {
        let profile = sphere2_profile();
        let mut prev_x = f64::INFINITY;
        let mut prev_gap = f64::INFINITY;
        for &e in &[1e3, 1e4, 1e5] {
            let s = solve_saddle(&profile, e).unwrap();
            assert!(s.x_e < prev_x);
            let leading = (2.0 * profile.k_coeffs[0] / e).powf(1.0 / 3.0);
            let gap = (s.x_e / leading - 1.0).abs();
            assert!(gap < prev_gap, "E={e}: gap {gap} vs {prev_gap}");
            prev_x = s.x_e;
            prev_gap = gap;
        }
    }

    #[test]
    fn non_unique_saddle_is_refused() {
        // Quartic with a W-shaped dip: three positive roots, only two of
        // which fall inside the scan window.
        let zeta2 = PI * PI / 6.0;
        let zeta4 = specfun::riemann_zeta(4.0).unwrap().value;
        let profile = ZetaProfile::from_residues(
            3,
            vec![0.001 / (zeta4 * 2.0), -0.5 / ZETA3, 10.0 / zeta2],
            0.0,
            0.0,
        )
        .unwrap();
        assert!(matches!(
            solve_saddle(&profile, 1.0),
            Err(Error::NonUniqueSaddle { .. })
        ));
    }

    #[test]
    fn f_polynomial_examples() {
        let profile = partitions_profile();
        assert_relative_eq!(f_polynomial(&profile, 0.3), PI * PI / 3.0, max_relative = 1e-13);
        let s2 = sphere2_profile();
        let x = 0.17;
        assert_relative_eq!(
            f_polynomial(&s2, x),
            6.0 * ZETA3 - PI * PI / 3.0 * x,
            max_relative = 1e-12
        );
    }

    #[test]
    fn main1_partitions_constants() {
        let r = main_asymptotic(&partitions_profile(), 100.0).unwrap();
        assert_relative_eq!(r.kappa, -1.0, max_relative = 1e-14);
        assert_relative_eq!(r.c, 1.0 / (4.0 * 3.0f64.sqrt()), max_relative = 1e-13);
        assert_relative_eq!(r.exponent, PI * (200.0f64 / 3.0).sqrt(), max_relative = 1e-12);
        let estimate = r.estimate_log.exp();
        assert!((estimate / 1.993e8 - 1.0).abs() < 1e-3, "estimate {estimate}");
        let ratio = 190569292.0 / estimate;
        assert!((ratio - 0.9565).abs() < 2e-3, "ratio {ratio}");
    }

    #[test]
    fn hardy_ramanujan_identity_with_main1() {
        let profile = partitions_profile();
        for &e in &[10.0, 1e2, 1e3, 1e4] {
            let hr = hardy_ramanujan(e).unwrap();
            let m1 = main_asymptotic(&profile, e).unwrap();
            assert!(
                (hr.estimate_log - m1.estimate_log).abs()
                    <= 1e-10 * m1.estimate_log.abs().max(1.0),
                "E={e}"
            );
        }
        let a = hardy_ramanujan(100.0).unwrap();
        let b = hardy_ramanujan(400.0).unwrap();
        assert_relative_eq!(b.exponent, 2.0 * a.exponent, max_relative = 1e-12);
        assert!((a.estimate_log.exp() / 1.9930e8 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn main2_constants_and_consistency() {
        let profile = sphere2_profile();
        let e = 1000.0;
        let r2 = surface_asymptotic_n2(&profile, e).unwrap();
        let y = (4.0 * ZETA3 / e).powf(1.0 / 3.0);
        // Vol = 8 pi^2 makes y_E = (4 zeta(3)/E)^{1/3} = (2 K_0/E)^{1/3}.
        let y_from_k = (2.0 * profile.k_coeffs[0] / e).powf(1.0 / 3.0);
        assert_relative_eq!(y, y_from_k, max_relative = 1e-13);
        let k1 = profile.k_coeffs[1];
        let expected_const = -k1 * k1 / (24.0 * ZETA3);
        let tail = r2.exponent - 3.0 * profile.k_coeffs[0] / (y * y) - k1 / y;
        assert_relative_eq!(tail, expected_const, max_relative = 1e-10);

        // Same prefactor and power as the saddle form, exactly.
        let r1 = main_asymptotic(&profile, e).unwrap();
        assert_relative_eq!(r1.c, r2.c, max_relative = 1e-12);
        assert_relative_eq!(r1.kappa, r2.kappa, max_relative = 1e-12);

        // Exponents differ by O(y_E): scaled gap stays bounded and the raw
        // gap shrinks with E.
        let mut prev = f64::INFINITY;
        for &ee in &[1e3, 1e4, 1e5] {
            let a = main_asymptotic(&profile, ee).unwrap().estimate_log;
            let b = surface_asymptotic_n2(&profile, ee).unwrap().estimate_log;
            let gap = (a - b).abs();
            let ye = (4.0 * ZETA3 / ee).powf(1.0 / 3.0);
            assert!(gap / ye <= 10.0, "E={ee} gap/y={}", gap / ye);
            assert!(gap < prev);
            prev = gap;
        }

        assert!(matches!(
            surface_asymptotic_n2(&partitions_profile(), 10.0),
            Err(Error::InvalidArgument { .. })
        ));
    }

    #[test]
    fn meinardus_specializes_to_hardy_ramanujan() {
        let input = MeinardusInput {
            alpha: 1.0,
            residue: 1.0,
            l0: -0.5,
            l0_prime: -0.5 * (2.0 * PI).ln(),
            c0: 0.5,
            delta: 0.25,
        };
        for &e in &[10.0, 1e2, 1e4] {
            let m = meinardus_general(&input, e).unwrap();
            let hr = hardy_ramanujan(e).unwrap();
            assert!(
                (m.result.estimate_log - hr.estimate_log).abs()
                    <= 1e-12 * hr.estimate_log.abs().max(1.0),
                "E={e}"
            );
            assert_relative_eq!(m.result.kappa, -1.0, max_relative = 1e-14);
            assert_relative_eq!(m.kappa1, 0.125, max_relative = 1e-14);
            assert!(!m.degenerate);
        }
    }

    #[test]
    fn meinardus_validation_and_degeneracy() {
        let mut input = MeinardusInput {
            alpha: 1.0,
            residue: 1.0,
            l0: -0.5,
            l0_prime: 0.0,
            c0: 0.5,
            delta: 0.25,
        };
        input.alpha = 0.0;
        assert!(meinardus_general(&input, 5.0).is_err());
        input.alpha = 1.0;
        input.c0 = 1.0;
        assert!(meinardus_general(&input, 5.0).is_err());
        input.c0 = 0.5;
        input.delta = 0.7;
        assert!(meinardus_general(&input, 5.0).is_err());

        // kappa_1 <= 0 is flagged, not refused.
        input.delta = 0.45;
        input.c0 = 0.1;
        let m = meinardus_general(&input, 5.0).unwrap();
        assert!(m.degenerate && m.kappa1 <= 0.0);
    }

    #[test]
    fn upper_bound_partitions() {
        let profile = partitions_profile();
        for &e in &[1e2, 1e3, 1e4] {
            let ub = upper_bound_log(&profile, e).unwrap();
            assert_relative_eq!(ub, PI * (2.0 * e / 3.0).sqrt(), max_relative = 1e-12);
        }
        // Exact slope match for n = 1: the bound IS B_1 sqrt(E).
        let b1 = profile.b_n;
        let (u1, u4) = (
            upper_bound_log(&profile, 100.0).unwrap(),
            upper_bound_log(&profile, 400.0).unwrap(),
        );
        let slope = (u4 - u1) / (b1 * (20.0 - 10.0));
        assert_relative_eq!(slope, 1.0, max_relative = 1e-12);

        // ln Omega - bound stays bounded above (constant absorbed).
        let table = exact::count_states(&SpectrumModel::Partitions, 400).unwrap();
        for e in 1..=400u64 {
            let diff = table.ln_omega(e).unwrap() - upper_bound_log(&profile, e as f64).unwrap();
            assert!(diff < 1.0, "E={e} diff={diff}");
        }
    }

    #[test]
    fn knopp_and_weyl_statistics() {
        let profile = partitions_profile();
        let table = exact::count_states(&SpectrumModel::Partitions, 400).unwrap();
        let cum = exact::cumulative(&table);
        let ks = knopp_statistic(&table, &profile);
        let ws = weyl_average_statistic(&cum, &profile);
        assert_eq!(ks.len(), 400);
        assert_eq!(ws.len(), 400);
        let k: std::collections::HashMap<u64, f64> = ks.iter().copied().collect();
        let w: std::collections::HashMap<u64, f64> = ws.iter().copied().collect();
        // D >= Omega pointwise.
        for e in 1..=400u64 {
            assert!(w[&e] >= k[&e]);
        }
        // Gap to B_1 shrinks along the grid.
        let mut prev = f64::INFINITY;
        for &e in &[100u64, 200, 400] {
            let gap = profile.b_n - k[&e];
            assert!(gap > 0.0 && gap < prev, "E={e} gap={gap}");
            prev = gap;
        }
        // Frozen spot value: p(400) = 6727090051741041926 exactly.
        let p400 = num_bigint::BigUint::from(6_727_090_051_741_041_926u64);
        assert_eq!(table.omega(400), &p400);
        assert_relative_eq!(k[&400], 6.727090051741042e18f64.ln() / 20.0, max_relative = 1e-12);
    }

    #[test]
    fn knopp_skips_energies_off_the_semigroup() {
        let model = SpectrumModel::sphere(3).unwrap();
        let profile = zeta_profile(&model).unwrap();
        let table = exact::count_states(&model, 10).unwrap();
        let ks = knopp_statistic(&table, &profile);
        // E = 1 has no states on S^3 (min eigenvalue 2) and is skipped.
        assert!(ks.iter().all(|&(e, _)| e != 1));
        assert_eq!(ks.len(), 9);
    }

    #[test]
    fn decay_exponent_table() {
        let d1 = decay_exponents(1);
        assert_eq!(d1, DecayExponents { mu: 0.25, delta: 0.25, c0: 5.0 / 16.0, beta: 23.0 / 16.0 });
        let d2 = decay_exponents(2);
        assert_eq!(d2, DecayExponents { mu: 0.25, delta: 0.25, c0: 5.0 / 8.0, beta: 15.0 / 8.0 });
        let d3 = decay_exponents(3);
        assert_relative_eq!(d3.mu, 1.0 / 6.0, max_relative = 1e-15);
        assert_relative_eq!(d3.delta, 1.0 / 9.0, max_relative = 1e-15);
        assert_relative_eq!(d3.c0, 7.0 / 12.0, max_relative = 1e-15);
        assert_relative_eq!(d3.beta, 29.0 / 12.0, max_relative = 1e-15);
        for n in 1..=8 {
            let d = decay_exponents(n);
            let nf = n as f64;
            assert!(d.c0 > 0.0 && d.c0 < 1.0, "n={n}");
            assert!(d.delta > 0.0 && d.delta < 0.5);
            assert!(d.beta > 1.0 + nf / 3.0 && d.beta < 1.0 + nf / 2.0);
            // The triple must close the defining relation
            // mu = min(1/2 - delta, C0/n - delta/4).
            let back = (0.5 - d.delta).min(d.c0 / nf - d.delta / 4.0);
            assert_relative_eq!(d.mu, back, max_relative = 1e-12);
        }
    }

    #[test]
    fn comparison_csv_shape() {
        let rows = vec![
            ComparisonRow::new(100, 19.0656, 19.1100, FormulaId::Main1),
            ComparisonRow::new(400, 43.3516, 43.3747, FormulaId::HardyRamanujan),
        ];
        let mut buf = Vec::new();
        write_comparison_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("E,ln_exact,ln_estimate,ratio,formula_id\n100,"));
        assert!(text.contains(",main1\n"));
        assert!(text.contains(",hardy_ramanujan\n"));
        let r = &rows[0];
        assert_relative_eq!(r.ratio, (r.ln_exact - r.ln_estimate).exp(), max_relative = 1e-15);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        /// Saddle residual, derivative sign, and the exponent identity hold
        /// across the energy range on both main profiles.
        #[test]
        fn saddle_contract(e in 1.0f64..1e6) {
            for profile in [partitions_profile(), sphere2_profile()] {
                let s = solve_saddle(&profile, e).unwrap();
                let coeffs = saddle_polynomial(&profile, e);
                let n = profile.n as f64;
                prop_assert!(eval_poly(&coeffs, s.x_e).abs() <= 1e-12 * e * s.x_e.powf(n + 1.0));
                prop_assert!(eval_poly_deriv(&coeffs, s.x_e) > 0.0);
                let identity = e * s.x_e + psi(&profile, s.x_e);
                prop_assert!((s.exponent - identity).abs() <= 1e-10 * identity.abs());
            }
        }

        /// x_E is strictly decreasing in E.
        #[test]
        fn saddle_monotone(e in 1.0f64..1e5, bump in 1.1f64..4.0) {
            let profile = sphere2_profile();
            let a = solve_saddle(&profile, e).unwrap();
            let b = solve_saddle(&profile, e * bump).unwrap();
            prop_assert!(b.x_e < a.x_e);
        }
    }
}
