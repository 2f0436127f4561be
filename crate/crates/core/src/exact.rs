//! Exact arbitrary-precision counting of Bose-gas states.
//!
//! `count_states` extracts the coefficients of the truncated Euler product
//! prod_{lambda <= e_max} (1 - q^lambda)^{-mult(lambda)}; truncation is exact
//! because a part larger than E cannot occur in a state of energy E. Two
//! independent routes are provided (a divisor-weighted recurrence and
//! per-copy convolution) plus brute-force enumeration and the classical
//! pentagonal recurrence as oracles.

use std::io::Write;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::spectrum::SpectrumModel;
use crate::util;

/// Exact state counts Omega(E) for E = 0..e_max.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTable {
    pub model: SpectrumModel,
    pub e_max: u64,
    omega: Vec<BigUint>,
}

impl CountTable {
    pub fn omega(&self, e: u64) -> &BigUint {
        &self.omega[e as usize]
    }

    pub fn omegas(&self) -> &[BigUint] {
        &self.omega
    }

    /// Natural log of Omega(E); `None` where the count is zero.
    pub fn ln_omega(&self, e: u64) -> Option<f64> {
        util::ln_biguint(&self.omega[e as usize])
    }

    /// CSV export, header `E,omega`, decimal integers.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "E,omega")?;
        for (e, v) in self.omega.iter().enumerate() {
            writeln!(w, "{e},{v}")?;
        }
        Ok(())
    }
}

/// Exact joint counts Omega(N,E). The vacuum row N=0 is stored internally
/// (Omega(0,E) = [E=0]); the interchange format exposes N = 1..n_max.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointTable {
    pub model: SpectrumModel,
    pub e_max: u64,
    pub n_max: u64,
    rows: Vec<Vec<BigUint>>,
}

impl JointTable {
    pub fn omega_ne(&self, n: u64, e: u64) -> &BigUint {
        &self.rows[n as usize][e as usize]
    }

    /// CSV export, header `N,E,omega`, rows N = 1..n_max.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "N,E,omega")?;
        for n in 1..=self.n_max as usize {
            for e in 0..=self.e_max as usize {
                writeln!(w, "{n},{e},{}", self.rows[n][e])?;
            }
        }
        Ok(())
    }
}

/// Cumulative counts D(E) = sum_{L <= E} Omega(L).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CumulativeTable {
    pub model: SpectrumModel,
    pub e_max: u64,
    d: Vec<BigUint>,
}

impl CumulativeTable {
    pub fn d(&self, e: u64) -> &BigUint {
        &self.d[e as usize]
    }

    pub fn ln_d(&self, e: u64) -> Option<f64> {
        util::ln_biguint(&self.d[e as usize])
    }

    /// CSV export, header `E,D`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "E,D")?;
        for (e, v) in self.d.iter().enumerate() {
            writeln!(w, "{e},{v}")?;
        }
        Ok(())
    }
}

/// Species with lambda <= e_max, after checking the model can vouch for
/// every eigenvalue up to e_max. A custom list is treated as a truncation
/// of an unknown spectrum: counting past its horizon would silently drop
/// states, so it is refused instead.
fn validated_species(model: &SpectrumModel, e_max: u64) -> Result<Vec<(u64, u64)>> {
    if let Some(h) = model.horizon() {
        if h < e_max {
            return Err(Error::SpectrumTruncated { horizon: h, e_max });
        }
    }
    Ok(model.eigenvalues_up_to(e_max))
}

/// Exact Omega(E) for E = 0..e_max via the divisor-weighted recurrence
/// `E Omega(E) = sum_{e=1..E} sigma(e) Omega(E-e)` with
/// `sigma(e) = sum_{lambda | e} lambda mult(lambda)` (the logarithmic
/// derivative of the Euler product).
pub fn count_states(model: &SpectrumModel, e_max: u64) -> Result<CountTable> {
    let species = validated_species(model, e_max)?;
    let m = e_max as usize;

    // Divisor sieve; u128 cannot overflow (lambda, mult are u64).
    let mut sigma = vec![0u128; m + 1];
    for &(lambda, mult) in &species {
        let w = lambda as u128 * mult as u128;
        let mut q = lambda as usize;
        while q <= m {
            sigma[q] = sigma[q].checked_add(w).expect("sigma overflows u128");
            q += lambda as usize;
        }
    }

    let mut omega = Vec::with_capacity(m + 1);
    omega.push(BigUint::from(1u32));
    for e in 1..=m {
        let mut acc = BigUint::zero();
        for l in 1..=e {
            if sigma[l] != 0 && !omega[e - l].is_zero() {
                acc += &omega[e - l] * sigma[l];
            }
        }
        let (q, r) = acc.div_rem(&BigUint::from(e));
        // The recurrence divides exactly; a remainder means a logic error.
        assert!(r.is_zero(), "divisor recurrence not divisible at E={e}");
        omega.push(q);
    }
    Ok(CountTable { model: model.clone(), e_max, omega })
}

/// Independent route: one in-place ascending scan per eigenvalue copy
/// (`new[E] = old[E] + new[E-lambda]`, repeated mult times), i.e. direct
/// multiplication of the geometric-series factors. Cost grows with the sum
/// of multiplicities; intended for cross-checks at moderate e_max.
pub fn count_states_by_convolution(model: &SpectrumModel, e_max: u64) -> Result<CountTable> {
    let species = validated_species(model, e_max)?;
    let m = e_max as usize;
    let mut omega = vec![BigUint::zero(); m + 1];
    omega[0] = BigUint::from(1u32);
    for &(lambda, mult) in &species {
        let l = lambda as usize;
        for _ in 0..mult {
            for e in l..=m {
                let add = omega[e - l].clone();
                omega[e] += add;
            }
        }
    }
    Ok(CountTable { model: model.clone(), e_max, omega })
}

/// Exact Omega(N,E) for 0 <= E <= e_max, 0 <= N <= n_max, by 2-D DP adding
/// one eigenvalue copy at a time (each copy is a single bosonic mode, so one
/// particle of it at a time: `new[N][E] += new[N-1][E-lambda]`).
pub fn count_joint(model: &SpectrumModel, e_max: u64, n_max: u64) -> Result<JointTable> {
    if n_max < 1 {
        return Err(Error::InvalidArgument {
            what: format!("n_max must be >= 1 (got {n_max})"),
        });
    }
    let species = validated_species(model, e_max)?;
    let (me, mn) = (e_max as usize, n_max as usize);
    let mut rows = vec![vec![BigUint::zero(); me + 1]; mn + 1];
    rows[0][0] = BigUint::from(1u32);
    for &(lambda, mult) in &species {
        let l = lambda as usize;
        for _ in 0..mult {
            for n in 1..=mn {
                for e in l..=me {
                    let add = rows[n - 1][e - l].clone();
                    rows[n][e] += add;
                }
            }
        }
    }
    Ok(JointTable { model: model.clone(), e_max, n_max, rows })
}

/// Prefix sums D(E).
pub fn cumulative(table: &CountTable) -> CumulativeTable {
    let mut d = Vec::with_capacity(table.omega.len());
    let mut acc = BigUint::zero();
    for v in &table.omega {
        acc += v;
        d.push(acc.clone());
    }
    CumulativeTable { model: table.model.clone(), e_max: table.e_max, d }
}

/// Fugacity-weighted counts Omega(E,mu) = sum_N Omega(N,E) e^{N mu} for
/// mu < 0. The sum is complete (hence exact up to f64 rounding) only when
/// n_max covers every particle number reachable at e_max.
pub fn fugacity_weighted(joint: &JointTable, mu: f64) -> Result<Vec<f64>> {
    if !(mu < 0.0) {
        return Err(Error::FugacityDomain { mu });
    }
    fugacity_weighted_at(joint, mu)
}

/// Shared implementation; also accepts the mu = 0 boundary, where the
/// weights are all 1 and the result must reproduce Omega(E). Kept private:
/// the boundary is for tests, the public contract is mu < 0.
fn fugacity_weighted_at(joint: &JointTable, mu: f64) -> Result<Vec<f64>> {
    let required = match joint.model.min_lambda() {
        Some(l) => joint.e_max / l,
        None => 0,
    };
    if joint.n_max < required {
        return Err(Error::IncompleteJoint { n_max: joint.n_max, required });
    }
    let mut out = Vec::with_capacity(joint.e_max as usize + 1);
    for e in 0..=joint.e_max as usize {
        let mut k = util::Kahan::new();
        for n in 0..=joint.n_max as usize {
            let w = joint.rows[n][e].to_f64().expect("count not representable");
            if w != 0.0 {
                k.add(w * (mu * n as f64).exp());
            }
        }
        out.push(k.sum());
    }
    Ok(out)
}

const BRUTE_FORCE_LIMIT: u64 = 30;

/// Exhaustive recursion over species: at each species with multiplicity m,
/// placing t quanta contributes the stars-and-bars weight C(t+m-1, t),
/// accumulated exactly by `w <- w (m-1+t)/t`.
///
/// Unlike `count_states`, this enumerates the literal species list and does
/// not refuse a custom model past its horizon: it is an enumeration oracle
/// for whatever list it is handed.
pub fn brute_force_oracle(model: &SpectrumModel, e_max: u64) -> Result<CountTable> {
    if e_max > BRUTE_FORCE_LIMIT {
        return Err(Error::BruteForceTooLarge { e_max, limit: BRUTE_FORCE_LIMIT });
    }
    let species = model.eigenvalues_up_to(e_max);
    let mut omega = vec![BigUint::zero(); e_max as usize + 1];
    fn recurse(species: &[(u64, u64)], i: usize, e_used: u64, w: &BigUint, omega: &mut [BigUint]) {
        if i == species.len() {
            omega[e_used as usize] += w;
            return;
        }
        let (lambda, mult) = species[i];
        let mut wt = w.clone();
        let mut t = 0u64;
        loop {
            recurse(species, i + 1, e_used + t * lambda, &wt, omega);
            t += 1;
            if e_used + t * lambda > omega.len() as u64 - 1 {
                break;
            }
            wt = wt * (mult - 1 + t) / t; // exact: stepwise binomial
        }
    }
    recurse(&species, 0, 0, &BigUint::from(1u32), &mut omega);
    Ok(CountTable { model: model.clone(), e_max, omega })
}

/// Joint analogue of [`brute_force_oracle`]: placing t quanta of one species
/// adds t particles.
pub fn brute_force_joint(model: &SpectrumModel, e_max: u64, n_max: u64) -> Result<JointTable> {
    if e_max > BRUTE_FORCE_LIMIT {
        return Err(Error::BruteForceTooLarge { e_max, limit: BRUTE_FORCE_LIMIT });
    }
    if n_max < 1 {
        return Err(Error::InvalidArgument {
            what: format!("n_max must be >= 1 (got {n_max})"),
        });
    }
    let species = model.eigenvalues_up_to(e_max);
    let mut rows = vec![vec![BigUint::zero(); e_max as usize + 1]; n_max as usize + 1];
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        species: &[(u64, u64)],
        i: usize,
        e_used: u64,
        n_used: u64,
        e_max: u64,
        n_max: u64,
        w: &BigUint,
        rows: &mut [Vec<BigUint>],
    ) {
        if n_used > n_max {
            return;
        }
        if i == species.len() {
            rows[n_used as usize][e_used as usize] += w;
            return;
        }
        let (lambda, mult) = species[i];
        let mut wt = w.clone();
        let mut t = 0u64;
        loop {
            recurse(species, i + 1, e_used + t * lambda, n_used + t, e_max, n_max, &wt, rows);
            t += 1;
            if e_used + t * lambda > e_max || n_used + t > n_max {
                break;
            }
            wt = wt * (mult - 1 + t) / t;
        }
    }
    recurse(&species, 0, 0, 0, e_max, n_max, &BigUint::from(1u32), &mut rows);
    Ok(JointTable { model: model.clone(), e_max, n_max, rows })
}

/// Euler's pentagonal-number recurrence for the plain partition numbers,
/// used as a fully independent oracle for the Partitions model.
pub fn pentagonal_oracle(e_max: u64) -> CountTable {
    let m = e_max as usize;
    let mut p: Vec<BigInt> = Vec::with_capacity(m + 1);
    p.push(BigInt::from(1));
    for n in 1..=m as i64 {
        let mut acc = BigInt::zero();
        let mut k = 1i64;
        loop {
            let g1 = k * (3 * k - 1) / 2;
            let g2 = k * (3 * k + 1) / 2;
            if g1 > n {
                break;
            }
            let sign = if k % 2 == 0 { -1 } else { 1 };
            acc += sign * &p[(n - g1) as usize];
            if g2 <= n {
                acc += sign * &p[(n - g2) as usize];
            }
            k += 1;
        }
        p.push(acc);
    }
    let omega = p
        .into_iter()
        .map(|v| v.to_biguint().expect("partition number went negative"))
        .collect();
    CountTable { model: SpectrumModel::Partitions, e_max, omega }
}
