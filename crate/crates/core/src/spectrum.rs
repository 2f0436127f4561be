//! Spectrum models and their zeta profiles.
//!
//! A model is a positive integer spectrum with multiplicities: the harmonic
//! ladder (`Partitions`), round spheres of any dimension, or a finite custom
//! list loaded from a file. Built-in models additionally expose a closed-form
//! zeta profile: the residues `A_j` of the spectral zeta function, the
//! derived constants `K_j = A_j zeta(n-j+1) Gamma(n-j)`, the regularized
//! values `Z(0)` and `Z'(0)`, the determinant `det P = exp(-Z'(0))`, the
//! effective volume, and the growth constant `B_n`.

use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};
use crate::specfun;

/// A positive integer spectrum with multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpectrumModel {
    /// Eigenvalues 1, 2, 3, ... each with multiplicity 1.
    Partitions,
    /// Round n-sphere: eigenvalues `lambda = k + n - 1` with the harmonic
    /// multiplicities (for `n = 1`: `lambda = k >= 1` with multiplicity 2;
    /// the zero mode is excluded by positivity).
    Sphere { dim: u32 },
    /// Finite user-supplied spectrum; `dim` is the declared dimension used
    /// by analytic heuristics (tail truncation, decay exponents).
    Custom { pairs: Vec<(u64, u64)>, dim: u32 },
}

impl SpectrumModel {
    pub fn partitions() -> Self {
        SpectrumModel::Partitions
    }

    pub fn sphere(dim: u32) -> Result<Self> {
        if dim < 1 {
            return Err(Error::InvalidArgument {
                what: format!("sphere dimension must be >= 1 (got {dim})"),
            });
        }
        Ok(SpectrumModel::Sphere { dim })
    }

    /// Builds a custom model, validating positivity and strict ordering.
    pub fn custom(pairs: Vec<(u64, u64)>, dim: u32) -> Result<Self> {
        if dim < 1 {
            return Err(Error::InvalidArgument {
                what: format!("custom dimension must be >= 1 (got {dim})"),
            });
        }
        let mut prev: Option<u64> = None;
        for &(lambda, mult) in &pairs {
            if lambda < 1 {
                return Err(Error::InvalidArgument {
                    what: format!("eigenvalues must be >= 1 (got {lambda})"),
                });
            }
            if mult < 1 {
                return Err(Error::InvalidArgument {
                    what: format!("multiplicities must be >= 1 (got {mult} at lambda = {lambda})"),
                });
            }
            if let Some(p) = prev {
                if lambda <= p {
                    return Err(Error::InvalidArgument {
                        what: format!(
                            "eigenvalues must be strictly increasing ({lambda} follows {p})"
                        ),
                    });
                }
            }
            prev = Some(lambda);
        }
        Ok(SpectrumModel::Custom { pairs, dim })
    }

    /// Declared dimension `n` of the model.
    pub fn dim(&self) -> u32 {
        match self {
            SpectrumModel::Partitions => 1,
            SpectrumModel::Sphere { dim } => *dim,
            SpectrumModel::Custom { dim, .. } => *dim,
        }
    }

    /// Smallest eigenvalue, if the spectrum is nonempty.
    pub fn min_lambda(&self) -> Option<u64> {
        match self {
            SpectrumModel::Partitions => Some(1),
            SpectrumModel::Sphere { dim } => Some((*dim as u64 - 1).max(1)),
            SpectrumModel::Custom { pairs, .. } => pairs.first().map(|&(l, _)| l),
        }
    }

    /// Largest eigenvalue the model can vouch for: `None` means unbounded.
    pub fn horizon(&self) -> Option<u64> {
        match self {
            SpectrumModel::Custom { pairs, .. } => Some(pairs.last().map_or(0, |&(l, _)| l)),
            _ => None,
        }
    }

    /// All `(lambda, mult)` with `lambda <= lambda_max`, ascending.
    ///
    /// Multiplicities are exact; sphere multiplicities are computed in u128
    /// and the conversion panics if one exceeds `u64::MAX` (which requires
    /// absurd dimension/energy combinations far outside exact-counting use).
    pub fn eigenvalues_up_to(&self, lambda_max: u64) -> Vec<(u64, u64)> {
        match self {
            SpectrumModel::Partitions => (1..=lambda_max).map(|l| (l, 1)).collect(),
            SpectrumModel::Sphere { dim } => {
                let n = *dim;
                if n == 1 {
                    return (1..=lambda_max).map(|l| (l, 2)).collect();
                }
                let mut out = Vec::new();
                let mut k = 0u64;
                loop {
                    let lambda = k + n as u64 - 1;
                    if lambda > lambda_max {
                        break;
                    }
                    out.push((lambda, sphere_mult_u64(n, k)));
                    k += 1;
                }
                out
            }
            SpectrumModel::Custom { pairs, .. } => {
                pairs.iter().copied().filter(|&(l, _)| l <= lambda_max).collect()
            }
        }
    }

    /// Infinite (for built-ins) iterator of `(lambda, mult)` as f64, for
    /// analytic sums where exactness is not required and multiplicities may
    /// exceed u64.
    pub fn spectral_terms(&self) -> SpectralTerms<'_> {
        let state = match self {
            SpectrumModel::Partitions => TermState::Partitions { next: 1 },
            SpectrumModel::Sphere { dim } => {
                if *dim == 1 {
                    TermState::Circle { next: 1 }
                } else {
                    TermState::Sphere { n: *dim, k: 0 }
                }
            }
            SpectrumModel::Custom { pairs, .. } => TermState::Custom { pairs, idx: 0 },
        };
        SpectralTerms { state }
    }
}

impl fmt::Display for SpectrumModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectrumModel::Partitions => write!(f, "partitions"),
            SpectrumModel::Sphere { dim } => write!(f, "sphere:{dim}"),
            SpectrumModel::Custom { pairs, dim } => {
                write!(f, "custom[{} species, n={dim}]", pairs.len())
            }
        }
    }
}

/// Harmonic multiplicity on the n-sphere (`n >= 2`), exact:
/// `dim H_k = C(n+k, n) - C(n+k-2, n)`.
fn sphere_mult_u64(n: u32, k: u64) -> u64 {
    // Stepwise-exact binomial C(k+n-1, n-1), then the (2k+n-1)/(k+n-1)
    // correction, all in u128.
    let mut r: u128 = 1;
    for i in 1..=(n as u128 - 1) {
        r = r
            .checked_mul(k as u128 + i)
            .expect("sphere multiplicity overflows u128")
            / i;
    }
    let num = r
        .checked_mul(2 * k as u128 + n as u128 - 1)
        .expect("sphere multiplicity overflows u128");
    let den = k as u128 + n as u128 - 1;
    debug_assert_eq!(num % den, 0);
    u64::try_from(num / den).expect("sphere multiplicity exceeds u64")
}

/// Same multiplicity in f64 for analytic sums (no overflow).
fn sphere_mult_f64(n: u32, k: f64) -> f64 {
    let mut r = 1.0;
    for i in 1..n as u64 {
        r *= (k + i as f64) / i as f64;
    }
    r * (2.0 * k + n as f64 - 1.0) / (k + n as f64 - 1.0)
}

enum TermState<'a> {
    Partitions { next: u64 },
    Circle { next: u64 },
    Sphere { n: u32, k: u64 },
    Custom { pairs: &'a [(u64, u64)], idx: usize },
}

/// Iterator over `(lambda, mult)` as f64; infinite for built-in models.
pub struct SpectralTerms<'a> {
    state: TermState<'a>,
}

impl Iterator for SpectralTerms<'_> {
    type Item = (f64, f64);

    fn next(&mut self) -> Option<(f64, f64)> {
        match &mut self.state {
            TermState::Partitions { next } => {
                let l = *next;
                *next += 1;
                Some((l as f64, 1.0))
            }
            TermState::Circle { next } => {
                let l = *next;
                *next += 1;
                Some((l as f64, 2.0))
            }
            TermState::Sphere { n, k } => {
                let lambda = (*k + *n as u64 - 1) as f64;
                let mult = sphere_mult_f64(*n, *k as f64);
                *k += 1;
                Some((lambda, mult))
            }
            TermState::Custom { pairs, idx } => {
                let item = pairs.get(*idx).map(|&(l, m)| (l as f64, m as f64));
                *idx += 1;
                item
            }
        }
    }
}

/// Closed-form zeta data of a built-in model (or a user-declared profile).
#[derive(Clone, Debug)]
pub struct ZetaProfile {
    /// Spatial dimension `n` (the spectral zeta function's rightmost pole
    /// sits at `s = n`).
    pub n: u32,
    /// Residues `A_j` of the spectral zeta function at `s = n - j`,
    /// `j = 0..n-1`.
    pub residues: Vec<f64>,
    /// `K_j = A_j zeta(n - j + 1) Gamma(n - j)`.
    pub k_coeffs: Vec<f64>,
    /// Regularized value `Z(0)`.
    pub z0: f64,
    /// Regularized derivative `Z'(0)`.
    pub zprime0: f64,
    /// Functional determinant `det P = exp(-Z'(0))`.
    pub det_p: f64,
    /// Effective volume `A_0 (2 pi)^n`.
    pub vol_sigma: f64,
    /// Growth constant `B_n = (n+1) (K_0 / n^n)^{1/(n+1)}`.
    pub b_n: f64,
}

impl ZetaProfile {
    /// Assembles the derived constants from the raw profile data.
    pub fn from_residues(n: u32, residues: Vec<f64>, z0: f64, zprime0: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidArgument {
                what: format!("profile dimension must be >= 1 (got {n})"),
            });
        }
        if residues.len() != n as usize {
            return Err(Error::InvalidArgument {
                what: format!(
                    "expected {n} residues A_0..A_{}, got {}",
                    n - 1,
                    residues.len()
                ),
            });
        }
        let mut k_coeffs = Vec::with_capacity(residues.len());
        for (j, &a) in residues.iter().enumerate() {
            let order = n - j as u32; // zeta pole order index: K_j uses zeta(order+1) Gamma(order)
            let zeta = specfun::riemann_zeta((order + 1) as f64)?.value;
            let gamma = factorial_f64(order as u64 - 1);
            k_coeffs.push(a * zeta * gamma);
        }
        let k0 = k_coeffs[0];
        if !(k0 > 0.0) {
            return Err(Error::InvalidArgument {
                what: format!("leading constant K_0 must be positive (got {k0})"),
            });
        }
        let nf = n as f64;
        let two_pi = 2.0 * std::f64::consts::PI;
        let vol_sigma = residues[0] * two_pi.powi(n as i32);
        let b_n = (nf + 1.0) * (k0 / nf.powi(n as i32)).powf(1.0 / (nf + 1.0));
        Ok(ZetaProfile {
            n,
            residues,
            k_coeffs,
            z0,
            zprime0,
            det_p: (-zprime0).exp(),
            vol_sigma,
            b_n,
        })
    }

    /// `B_n` recomputed through the volume form
    /// `(n+1) (Vol zeta(n+1) Gamma(n) / (2 pi n)^n)^{1/(n+1)}`;
    /// must agree with `b_n` to rounding.
    pub fn b_n_volume_route(&self) -> Result<f64> {
        let nf = self.n as f64;
        let zeta = specfun::riemann_zeta(nf + 1.0)?.value;
        let gamma = factorial_f64(self.n as u64 - 1);
        let inner =
            self.vol_sigma * zeta * gamma / (2.0 * std::f64::consts::PI * nf).powi(self.n as i32);
        Ok((nf + 1.0) * inner.powf(1.0 / (nf + 1.0)))
    }
}

fn factorial_f64(k: u64) -> f64 {
    let mut acc = 1.0;
    for i in 2..=k {
        acc *= i as f64;
    }
    acc
}

/// Multiplicity polynomial coefficients `c_i` (mult(lambda) = sum c_i lambda^i)
/// for the n-sphere, exact numerators over (n-1)!.
fn sphere_poly_coeffs(n: u32) -> Vec<f64> {
    if n == 1 {
        return vec![2.0];
    }
    // (2 lambda - (n-1)) * prod_{j=1}^{n-2} (lambda - j), coefficients in i128.
    let mut coeffs: Vec<i128> = vec![-(n as i128 - 1), 2];
    for j in 1..=(n as i128 - 2) {
        let mut next = vec![0i128; coeffs.len() + 1];
        for (i, &c) in coeffs.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * j;
        }
        coeffs = next;
    }
    let fact: i128 = (2..=(n as i128 - 1)).product();
    coeffs.iter().map(|&c| c as f64 / fact as f64).collect()
}

/// Closed-form zeta profile of a built-in model.
///
/// The multiplicity polynomial vanishes at `lambda = 1..n-2`, so the spectral
/// zeta function is exactly `sum_i c_i zeta(s - i)`: residues are polynomial
/// coefficients, and `Z(0)`, `Z'(0)` reduce to Riemann zeta data at
/// non-positive integers.
pub fn zeta_profile(model: &SpectrumModel) -> Result<ZetaProfile> {
    let coeffs: Vec<f64> = match model {
        SpectrumModel::Partitions => vec![1.0],
        SpectrumModel::Sphere { dim } => sphere_poly_coeffs(*dim),
        SpectrumModel::Custom { .. } => return Err(Error::ProfileUnavailable),
    };
    let n = coeffs.len() as u32;
    debug_assert_eq!(n, model.dim());
    let mut z0 = 0.0;
    let mut zprime0 = 0.0;
    for (i, &c) in coeffs.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        z0 += c * specfun::riemann_zeta(-(i as f64))?.value;
        zprime0 += c * specfun::hurwitz_zeta_sderiv(-(i as f64), 1.0)?.value;
    }
    let residues: Vec<f64> = (0..n as usize).map(|j| coeffs[n as usize - 1 - j]).collect();
    ZetaProfile::from_residues(n, residues, z0, zprime0)
}

/// Parses the custom spectrum text format:
/// line 1 is the header `# n=<int>`, then one `<lambda> <mult>` pair per
/// line; blank lines and further `#` comments are ignored.
pub fn parse_custom_spectrum(text: &str) -> Result<SpectrumModel> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| Error::Parse {
        line: 1,
        message: "empty file; expected header '# n=<int>'".into(),
    })?;
    let dim = parse_header(header).ok_or_else(|| Error::Parse {
        line: 1,
        message: format!("expected header '# n=<int>', got '{}'", header.trim()),
    })?;
    if dim < 1 {
        return Err(Error::Parse { line: 1, message: "dimension n must be >= 1".into() });
    }

    let mut pairs: Vec<(u64, u64)> = Vec::new();
    for (idx, raw) in lines {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let (Some(ls), Some(ms), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected '<lambda> <mult>', got '{line}'"),
            });
        };
        let lambda: u64 = ls.parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("eigenvalue '{ls}' is not a positive integer"),
        })?;
        let mult: u64 = ms.parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("multiplicity '{ms}' is not a positive integer"),
        })?;
        if lambda == 0 {
            return Err(Error::Parse {
                line: line_no,
                message: "eigenvalue must be >= 1".into(),
            });
        }
        if mult == 0 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("multiplicity must be >= 1 at lambda = {lambda}"),
            });
        }
        if let Some(&(prev, _)) = pairs.last() {
            if lambda == prev {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("duplicate eigenvalue {lambda}"),
                });
            }
            if lambda < prev {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!(
                        "eigenvalues must be strictly increasing ({lambda} follows {prev})"
                    ),
                });
            }
        }
        pairs.push((lambda, mult));
    }
    SpectrumModel::custom(pairs, dim)
}

fn parse_header(line: &str) -> Option<u32> {
    let rest = line.trim().strip_prefix('#')?.trim();
    let value = rest.strip_prefix("n=")?.trim();
    value.parse().ok()
}

/// Loads a custom spectrum from a file (see [`parse_custom_spectrum`]).
pub fn load_custom_spectrum(path: impl AsRef<Path>) -> Result<SpectrumModel> {
    let text = std::fs::read_to_string(path)?;
    parse_custom_spectrum(&text)
}
