//! Grand partition function, heat trace, and coefficient extraction on the
//! right half-plane.
//!
//! All evaluations take the model's species list literally (for a custom
//! model that means the finite product as given). `log_grand_partition`
//! sums per-factor principal-branch logarithms, never the principal branch
//! of the assembled product. Coefficient recovery uses the periodic
//! trapezoid rule, which is exact below the Nyquist limit for the
//! lambda <= E truncated product.

use std::io::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectrum::{SpectrumModel, ZetaProfile};
use crate::util::{self, Kahan};

/// Default absolute tail tolerance for internal evaluations (margins,
/// windowed integrals); the documented error bound is tol*(1 + 1/x).
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

/// Species cap: a tail that has not converged after this many species means
/// x is far too small for direct summation.
const MAX_SPECIES: usize = 50_000_000;

/// A point tau = x + iy with Re tau > 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfPlanePoint {
    pub x: f64,
    pub y: f64,
}

impl HalfPlanePoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(x > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(Error::OutsideHalfPlane { x });
        }
        Ok(HalfPlanePoint { x, y })
    }

    pub fn real(x: f64) -> Result<Self> {
        Self::new(x, 0.0)
    }

    fn complex(self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }
}

/// Species list sufficient for an absolute tail bound of tol*(1 + 1/x):
/// stops at the first species with lambda >= 16(n+1)/x whose log-factor
/// bound mult*e^{-lambda x}/(1-e^{-x}) falls below tol*min(x,1)/2. Past
/// that point consecutive terms shrink by at least e^{-15x/16} (the
/// multiplicity ratio is at most e^{(n-1)/lambda} <= e^{x/16}), so the
/// whole omitted tail is below the documented bound.
fn species_for_tail(model: &SpectrumModel, x: f64, tail_tol: f64) -> Result<Vec<(f64, f64)>> {
    let n = model.dim() as f64;
    let cutoff = 16.0 * (n + 1.0) / x;
    let denom = 1.0 - (-x).exp();
    let threshold = tail_tol * x.min(1.0) / 2.0;
    let mut out = Vec::new();
    for (lambda, mult) in model.spectral_terms() {
        let term = mult * (-lambda * x).exp() / denom;
        if lambda >= cutoff && term < threshold {
            return Ok(out);
        }
        if out.len() >= MAX_SPECIES {
            return Err(Error::TruncationCap { lambda: lambda as u64 });
        }
        out.push((lambda, mult));
    }
    // Finite (custom) spectrum exhausted: the product is complete.
    Ok(out)
}

fn sum_complex<I: IntoIterator<Item = Complex64>>(terms: I) -> Complex64 {
    let (mut re, mut im) = (Kahan::new(), Kahan::new());
    for t in terms {
        re.add(t.re);
        im.add(t.im);
    }
    Complex64::new(re.sum(), im.sum())
}

/// log G_P(tau) = -sum_species mult * Ln(1 - e^{-lambda tau}), each factor
/// on the principal branch (well-defined: |e^{-lambda tau}| < 1 keeps
/// 1 - e^{-lambda tau} in the right half-plane). Absolute truncation error
/// is at most tail_tol*(1 + 1/x).
pub fn log_grand_partition(
    model: &SpectrumModel,
    tau: HalfPlanePoint,
    tail_tol: f64,
) -> Result<Complex64> {
    require_tol(tail_tol)?;
    let species = species_for_tail(model, tau.x, tail_tol)?;
    let t = tau.complex();
    Ok(sum_complex(species.iter().map(|&(lambda, mult)| {
        -mult * (Complex64::new(1.0, 0.0) - (-lambda * t).exp()).ln()
    })))
}

/// Heat trace theta(tau) = sum_species mult * e^{-lambda tau}, truncated
/// with the same geometric tail control as the log product.
pub fn heat_trace(model: &SpectrumModel, tau: HalfPlanePoint, tail_tol: f64) -> Result<Complex64> {
    require_tol(tail_tol)?;
    let species = species_for_tail(model, tau.x, tail_tol)?;
    let t = tau.complex();
    Ok(sum_complex(species.iter().map(|&(lambda, mult)| mult * (-lambda * t).exp())))
}

fn require_tol(tail_tol: f64) -> Result<()> {
    if !(tail_tol > 0.0) || !tail_tol.is_finite() {
        return Err(Error::InvalidArgument {
            what: format!("tail tolerance must be positive and finite (got {tail_tol})"),
        });
    }
    Ok(())
}

/// Re theta(x+iy) - theta(x), the off-axis heat-trace deficit, for
/// x <= |y| <= pi. Strict negativity of this margin is the empirical
/// certificate that the model damps the contour away from the real axis.
pub fn condition_h_margin(model: &SpectrumModel, x: f64, y: f64) -> Result<f64> {
    let tau = HalfPlanePoint::new(x, y)?;
    // 1e-12 slack: the grid generators place y = +-x up to rounding.
    if !(y.abs() >= x - 1e-12 && y.abs() <= std::f64::consts::PI + 1e-12) {
        return Err(Error::YOutOfRange { x, y });
    }
    let off = heat_trace(model, tau, DEFAULT_TAIL_TOL)?;
    let on = heat_trace(model, HalfPlanePoint::real(x)?, DEFAULT_TAIL_TOL)?;
    Ok(off.re - on.re)
}

/// The four-part split of log G_P at one point; `residual_j` is the
/// measured remainder after the closed-form parts are removed.
#[derive(Clone, Copy, Debug)]
pub struct LogDecomposition {
    pub log_g: Complex64,
    /// sum_j K_j tau^{-(n-j)}.
    pub principal_part: Complex64,
    /// -Z(0) Ln tau, principal branch (tau stays in the sector |y| <= x).
    pub log_term: Complex64,
    /// Z'(0).
    pub const_term: f64,
    pub residual_j: Complex64,
}

/// Splits log G_P(tau) into principal part, log term, constant, and the
/// measured residual. Only claimed on the sector |y| <= x.
pub fn meinardus_residual(
    model: &SpectrumModel,
    profile: &ZetaProfile,
    tau: HalfPlanePoint,
    tail_tol: f64,
) -> Result<LogDecomposition> {
    if tau.y.abs() > tau.x {
        return Err(Error::OutsideSector { x: tau.x, y: tau.y });
    }
    let log_g = log_grand_partition(model, tau, tail_tol)?;
    let t = tau.complex();
    let inv = Complex64::new(1.0, 0.0) / t;
    // principal part: K_j tau^{j-n}, accumulated from the j = n-1 end so a
    // single running power of 1/tau suffices.
    let mut principal = Complex64::new(0.0, 0.0);
    let mut pow = Complex64::new(1.0, 0.0);
    for j in (0..profile.k_coeffs.len()).rev() {
        pow *= inv;
        principal += profile.k_coeffs[j] * pow;
    }
    let log_term = -profile.z0 * t.ln();
    let const_term = profile.zprime0;
    let residual_j = log_g - principal - log_term - const_term;
    Ok(LogDecomposition { log_g, principal_part: principal, log_term, const_term, residual_j })
}

/// Result of full-period coefficient extraction: the recovered real value
/// and the size of the imaginary part relative to it (a quadrature health
/// diagnostic; it should sit at rounding level).
#[derive(Clone, Copy, Debug)]
pub struct ContourEstimate {
    pub value: f64,
    pub imag_ratio: f64,
}

/// Recovers Omega(E) as the E-th Fourier coefficient of the lambda <= E
/// truncated product: (1/Q) sum_k e^{E tau_k} G(tau_k) over the Q periodic
/// trapezoid nodes tau_k = x + i(-pi + 2 pi k/Q). Aliasing folds
/// coefficient E+Q onto E with weight e^{-Qx}, so Q controls the error;
/// Q < max(64, E+1) is refused outright.
pub fn contour_extract(
    model: &SpectrumModel,
    e: u64,
    x: f64,
    quad_points: usize,
) -> Result<ContourEstimate> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::OutsideHalfPlane { x });
    }
    let required = 64.max(e as usize + 1);
    if quad_points < required {
        return Err(Error::AliasingRefused { quad_points, required });
    }
    let species: Vec<(f64, f64)> = model
        .eigenvalues_up_to(e.max(1))
        .into_iter()
        .map(|(l, m)| (l as f64, m as f64))
        .collect();
    let q = quad_points;
    let nodes = util::indexed_map(q, |k| {
        let y = -std::f64::consts::PI + 2.0 * std::f64::consts::PI * k as f64 / q as f64;
        let t = Complex64::new(x, y);
        let log_g = sum_complex(species.iter().map(|&(lambda, mult)| {
            -mult * (Complex64::new(1.0, 0.0) - (-lambda * t).exp()).ln()
        }));
        ((e as f64) * t + log_g).exp()
    });
    let mean = sum_complex(nodes) / q as f64;
    let denom = mean.re.abs().max(f64::MIN_POSITIVE);
    Ok(ContourEstimate { value: mean.re, imag_ratio: mean.im.abs() / denom })
}

/// Finite-window extraction and its a-priori bound.
#[derive(Clone, Copy, Debug)]
pub struct WindowedEstimate {
    pub estimate: f64,
    /// G_P(x) e^{Ex} / (T * min-gap), with min-gap 1 for integer spectra.
    pub error_bound: f64,
}

/// (1/2 pi) integral over |y| <= T of e^{E(x+iy)} G_P(x+iy) dy by composite
/// Simpson, together with the window bound |estimate - Omega(E)| <=
/// G_P(x) e^{Ex} / T (unit minimal gap). Here G_P is the full model, not
/// the lambda <= E truncation.
pub fn windowed_extract(
    model: &SpectrumModel,
    e: u64,
    x: f64,
    t_window: f64,
) -> Result<WindowedEstimate> {
    if !(t_window > 0.0) || t_window > std::f64::consts::PI {
        return Err(Error::WindowOutOfRange { t: t_window });
    }
    let species = species_for_tail(model, HalfPlanePoint::real(x)?.x, DEFAULT_TAIL_TOL)?;
    let panels = 1024usize.max(64 * (e as usize + 1));
    let h = 2.0 * t_window / panels as f64;
    let values = util::indexed_map(panels + 1, |k| {
        let y = -t_window + h * k as f64;
        let t = Complex64::new(x, y);
        let log_g = sum_complex(species.iter().map(|&(lambda, mult)| {
            -mult * (Complex64::new(1.0, 0.0) - (-lambda * t).exp()).ln()
        }));
        let w = if k == 0 || k == panels {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        w * ((e as f64) * t + log_g).exp()
    });
    let integral = sum_complex(values) * (h / 3.0) / (2.0 * std::f64::consts::PI);

    let log_g_real = log_grand_partition(model, HalfPlanePoint::real(x)?, DEFAULT_TAIL_TOL)?;
    let error_bound = ((e as f64) * x + log_g_real.re).exp() / t_window;
    Ok(WindowedEstimate { estimate: integral.re, error_bound })
}

/// One row of the diagnostic sweep export. J and margin entries are absent
/// where the point lies outside the respective domains (sector, band).
#[derive(Clone, Copy, Debug)]
pub struct DiagnosticRow {
    pub x: f64,
    pub y: f64,
    pub re_log_g: f64,
    pub im_log_g: f64,
    pub re_j: Option<f64>,
    pub im_j: Option<f64>,
    pub margin: Option<f64>,
}

/// CSV export, header `x,y,re_logG,im_logG,re_J,im_J,margin`; absent
/// entries become empty cells.
pub fn write_diagnostic_csv<W: Write>(rows: &[DiagnosticRow], mut w: W) -> Result<()> {
    writeln!(w, "x,y,re_logG,im_logG,re_J,im_J,margin")?;
    fn cell(v: Option<f64>) -> String {
        v.map(|x| x.to_string()).unwrap_or_default()
    }
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            r.x,
            r.y,
            r.re_log_g,
            r.im_log_g,
            cell(r.re_j),
            cell(r.im_j),
            cell(r.margin)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact;
    use crate::spectrum::zeta_profile;
    use approx::assert_relative_eq;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    const TOL: f64 = 1e-12;

    #[test]
    fn log_product_far_right_is_tiny() {
        let v = log_grand_partition(
            &SpectrumModel::Partitions,
            HalfPlanePoint::real(10.0).unwrap(),
            TOL,
        )
        .unwrap();
        let direct: f64 = (1..=20).map(|l| -(1.0 - (-10.0 * l as f64).exp()).ln()).sum();
        assert!((v.re - direct).abs() <= 1e-15);
        assert!((v.re - 4.54e-5).abs() <= 1e-7);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn log_product_matches_direct_truncation() {
        // 200 factors suffice at x = 1: the 201st is below 2^-53 relative.
        for model in [SpectrumModel::Partitions, SpectrumModel::sphere(2).unwrap()] {
            let v =
                log_grand_partition(&model, HalfPlanePoint::new(1.0, 0.4).unwrap(), TOL).unwrap();
            let mut direct = Complex64::new(0.0, 0.0);
            for (l, m) in model.eigenvalues_up_to(200) {
                let t = Complex64::new(1.0, 0.4);
                direct += -(m as f64)
                    * (Complex64::new(1.0, 0.0) - (-(l as f64) * t).exp()).ln();
            }
            assert!((v - direct).norm() <= 1e-12, "{model}");
        }
    }

    #[test]
    fn heat_trace_closed_forms() {
        let x = 0.7;
        let v = heat_trace(&SpectrumModel::Partitions, HalfPlanePoint::real(x).unwrap(), TOL)
            .unwrap();
        let want = (-x).exp() / (1.0 - (-x).exp());
        assert_relative_eq!(v.re, want, max_relative = 1e-12);

        let vpi =
            heat_trace(&SpectrumModel::Partitions, HalfPlanePoint::new(x, PI).unwrap(), TOL)
                .unwrap();
        let want_pi = -(-x).exp() / (1.0 + (-x).exp());
        assert!((vpi.re - want_pi).abs() <= 1e-10);
        assert!(vpi.im.abs() <= 1e-10);
    }

    #[test]
    fn sphere_heat_trace_leading_order() {
        // theta ~ A_0 Gamma(n) x^{-n} = 2/x^2 as x -> 0+.
        let x = 1e-3;
        let v = heat_trace(&SpectrumModel::sphere(2).unwrap(), HalfPlanePoint::real(x).unwrap(), TOL)
            .unwrap();
        let ratio = v.re * x * x / 2.0;
        assert!((ratio - 1.0).abs() < 0.01, "ratio {ratio}");
    }

    #[test]
    fn margin_example_and_symmetry() {
        let m = condition_h_margin(&SpectrumModel::Partitions, 0.1, PI).unwrap();
        assert!((m + 9.983).abs() <= 1e-3, "margin {m}");
        let a = condition_h_margin(&SpectrumModel::Partitions, 0.05, 1.3).unwrap();
        let b = condition_h_margin(&SpectrumModel::Partitions, 0.05, -1.3).unwrap();
        assert!((a - b).abs() <= 1e-12);
        assert!(a < 0.0);
    }

    #[test]
    fn margin_domain_checks() {
        assert!(matches!(
            condition_h_margin(&SpectrumModel::Partitions, 0.5, 0.1),
            Err(Error::YOutOfRange { .. })
        ));
        assert!(matches!(
            condition_h_margin(&SpectrumModel::Partitions, 0.1, 4.0),
            Err(Error::YOutOfRange { .. })
        ));
        assert!(matches!(
            condition_h_margin(&SpectrumModel::Partitions, -0.1, 1.0),
            Err(Error::OutsideHalfPlane { .. })
        ));
    }

    #[test]
    fn principal_part_examples() {
        let model = SpectrumModel::Partitions;
        let profile = zeta_profile(&model).unwrap();
        let d = meinardus_residual(&model, &profile, HalfPlanePoint::real(1e-2).unwrap(), TOL)
            .unwrap();
        assert_relative_eq!(d.principal_part.re, PI * PI / 6.0 * 100.0, max_relative = 1e-12);
        assert_eq!(d.principal_part.im, 0.0);

        let s2 = SpectrumModel::sphere(2).unwrap();
        let p2 = zeta_profile(&s2).unwrap();
        let d2 = meinardus_residual(&s2, &p2, HalfPlanePoint::real(1e-2).unwrap(), TOL).unwrap();
        let zeta3 = 1.2020569031595943;
        let want = 2.0 * zeta3 * 1e4 - PI * PI / 6.0 * 1e2;
        assert_relative_eq!(d2.principal_part.re, want, max_relative = 1e-12);
    }

    #[test]
    fn decomposition_reconstructs_and_decays() {
        let model = SpectrumModel::Partitions;
        let profile = zeta_profile(&model).unwrap();
        let mut last = f64::INFINITY;
        for &x in &[1e-1, 1e-2, 1e-3] {
            let d =
                meinardus_residual(&model, &profile, HalfPlanePoint::real(x).unwrap(), TOL)
                    .unwrap();
            let rebuilt = d.principal_part + d.log_term + d.const_term + d.residual_j;
            assert!((rebuilt - d.log_g).norm() <= 1e-12 * d.log_g.norm().max(1.0));
            let j = d.residual_j.norm();
            // n = 1 residual decay rate 5/16; constant 10 is generous.
            assert!(j <= 10.0 * x.powf(5.0 / 16.0), "x={x} J={j}");
            assert!(j < last);
            last = j;
        }
    }

    #[test]
    fn sphere_residual_decays() {
        let model = SpectrumModel::sphere(2).unwrap();
        let profile = zeta_profile(&model).unwrap();
        for &x in &[1e-1, 1e-2, 1e-3] {
            let d =
                meinardus_residual(&model, &profile, HalfPlanePoint::real(x).unwrap(), TOL)
                    .unwrap();
            let j = d.residual_j.norm();
            // n = 2 residual decay rate 5/8.
            assert!(j <= 10.0 * x.powf(5.0 / 8.0), "x={x} J={j}");
        }
    }

    #[test]
    fn sector_is_enforced() {
        let model = SpectrumModel::Partitions;
        let profile = zeta_profile(&model).unwrap();
        assert!(matches!(
            meinardus_residual(&model, &profile, HalfPlanePoint::new(0.1, 0.2).unwrap(), TOL),
            Err(Error::OutsideSector { .. })
        ));
    }

    #[test]
    fn contour_recovers_small_counts() {
        // Node counts chosen so the first folded coefficient (weight
        // e^{-Qx}) sits far below the 1e-9 target.
        let x10 = (PI * PI / 6.0f64 / 10.0).sqrt();
        let c = contour_extract(&SpectrumModel::Partitions, 10, x10, 128).unwrap();
        assert!((c.value - 42.0).abs() <= 1e-9 * 42.0, "got {}", c.value);
        assert!(c.imag_ratio <= 1e-10);

        let c0 = contour_extract(&SpectrumModel::Partitions, 0, 0.8, 64).unwrap();
        assert!((c0.value - 1.0).abs() <= 1e-12);

        let s = contour_extract(&SpectrumModel::sphere(2).unwrap(), 3, 0.5, 96).unwrap();
        assert!((s.value - 9.0).abs() <= 1e-9 * 9.0, "got {}", s.value);
    }

    #[test]
    fn contour_matches_literal_product_for_truncated_custom() {
        // Analytic ops take the custom list literally, so the coefficient
        // equals the brute-force count even past the horizon.
        let model = SpectrumModel::custom(vec![(1, 2)], 1).unwrap();
        let c = contour_extract(&model, 3, 0.8, 64).unwrap();
        assert!((c.value - 4.0).abs() <= 1e-9 * 4.0);
    }

    #[test]
    fn contour_refuses_aliasing() {
        match contour_extract(&SpectrumModel::Partitions, 100, 0.1, 80) {
            Err(Error::AliasingRefused { quad_points, required }) => {
                assert_eq!((quad_points, required), (80, 101));
            }
            other => panic!("expected aliasing refusal, got {other:?}"),
        }
        assert!(matches!(
            contour_extract(&SpectrumModel::Partitions, 3, 0.1, 32),
            Err(Error::AliasingRefused { required: 64, .. })
        ));
    }

    #[test]
    fn contour_spec_parametrization_in_calm_regime() {
        // Q = 4(E+1) at x = x_E: aliasing is below 1e-8 relative once E is
        // past the small-E regime (the first folded coefficient carries
        // weight e^{-4(E+1) x_E} ~ e^{-16.4 sqrt(E)} for this model).
        let table = exact::count_states(&SpectrumModel::Partitions, 200).unwrap();
        for e in [100u64, 150, 200] {
            let x = (PI * PI / 6.0 / e as f64).sqrt();
            let c = contour_extract(&SpectrumModel::Partitions, e, x, 4 * (e as usize + 1))
                .unwrap();
            let exact_v = table.omega(e).to_f64().unwrap();
            assert!(
                (c.value - exact_v).abs() <= 1e-8 * exact_v,
                "E={e}: {} vs {exact_v}",
                c.value
            );
            assert!(c.imag_ratio <= 1e-8);
        }
    }

    #[test]
    fn windowed_extraction_within_bound() {
        let x = (PI * PI / 6.0f64 / 10.0).sqrt();
        let full = windowed_extract(&SpectrumModel::Partitions, 10, x, PI).unwrap();
        assert!((full.estimate - 42.0).abs() <= full.error_bound);
        let expected_bound = (10.0 * x
            + log_grand_partition(
                &SpectrumModel::Partitions,
                HalfPlanePoint::real(x).unwrap(),
                DEFAULT_TAIL_TOL,
            )
            .unwrap()
            .re)
            .exp()
            / PI;
        assert_relative_eq!(full.error_bound, expected_bound, max_relative = 1e-12);

        let half = windowed_extract(&SpectrumModel::Partitions, 10, x, PI / 2.0).unwrap();
        assert!((half.estimate - 42.0).abs() <= half.error_bound);
        // 1/T monotonicity.
        assert!(half.error_bound > full.error_bound);
    }

    #[test]
    fn window_domain_checks() {
        assert!(matches!(
            windowed_extract(&SpectrumModel::Partitions, 5, 0.5, 0.0),
            Err(Error::WindowOutOfRange { .. })
        ));
        assert!(matches!(
            windowed_extract(&SpectrumModel::Partitions, 5, 0.5, 3.5),
            Err(Error::WindowOutOfRange { .. })
        ));
    }

    #[test]
    fn diagnostic_csv_shape() {
        let rows = vec![
            DiagnosticRow {
                x: 0.5,
                y: 0.25,
                re_log_g: 1.25,
                im_log_g: -0.5,
                re_j: Some(0.125),
                im_j: Some(0.0),
                margin: None,
            },
            DiagnosticRow {
                x: 0.5,
                y: 2.0,
                re_log_g: 0.75,
                im_log_g: 0.5,
                re_j: None,
                im_j: None,
                margin: Some(-1.5),
            },
        ];
        let mut buf = Vec::new();
        write_diagnostic_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "x,y,re_logG,im_logG,re_J,im_J,margin\n\
             0.5,0.25,1.25,-0.5,0.125,0,\n\
             0.5,2,0.75,0.5,,,-1.5\n"
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        /// Real coefficients force conjugate symmetry of every evaluation.
        #[test]
        fn conjugate_symmetry(x in 0.05f64..2.0, y in -3.0f64..3.0) {
            for model in [SpectrumModel::Partitions, SpectrumModel::sphere(2).unwrap()] {
                let up = log_grand_partition(&model, HalfPlanePoint::new(x, y).unwrap(), TOL)
                    .unwrap();
                let dn = log_grand_partition(&model, HalfPlanePoint::new(x, -y).unwrap(), TOL)
                    .unwrap();
                prop_assert!((up.re - dn.re).abs() <= 1e-12 * up.re.abs().max(1.0));
                prop_assert!((up.im + dn.im).abs() <= 1e-12 * up.im.abs().max(1.0));

                let hu = heat_trace(&model, HalfPlanePoint::new(x, y).unwrap(), TOL).unwrap();
                let hd = heat_trace(&model, HalfPlanePoint::new(x, -y).unwrap(), TOL).unwrap();
                prop_assert!((hu.re - hd.re).abs() <= 1e-12 * hu.re.abs().max(1.0));
                prop_assert!((hu.im + hd.im).abs() <= 1e-12 * hu.im.abs().max(1.0));
            }
        }

        /// The documented tail bound holds against a much stricter run.
        #[test]
        fn tail_bound_is_honest(x in 0.02f64..3.0) {
            let loose = log_grand_partition(
                &SpectrumModel::sphere(2).unwrap(),
                HalfPlanePoint::real(x).unwrap(),
                1e-6,
            ).unwrap();
            let tight = log_grand_partition(
                &SpectrumModel::sphere(2).unwrap(),
                HalfPlanePoint::real(x).unwrap(),
                1e-14,
            ).unwrap();
            let budget = 1e-6 * (1.0 + 1.0 / x);
            prop_assert!((loose.re - tight.re).abs() <= budget);
        }
    }
}
