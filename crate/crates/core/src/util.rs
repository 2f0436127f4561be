//! Small numeric helpers: compensated summation, big-integer logarithms,
//! and an optional thread pool for embarrassingly parallel sweeps.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

/// Kahan compensated accumulator. Also tracks the sum of absolute values so
/// callers can attach an honest rounding bound (~eps * abs_sum).
#[derive(Clone, Copy, Debug, Default)]
pub struct Kahan {
    sum: f64,
    comp: f64,
    abs: f64,
    abs_comp: f64,
}

impl Kahan {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let ya = x.abs() - self.abs_comp;
        let ta = self.abs + ya;
        self.abs_comp = (ta - self.abs) - ya;
        self.abs = ta;
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn sum(&self) -> f64 {
        self.sum
    }

    pub fn abs_sum(&self) -> f64 {
        self.abs
    }
}

/// Natural log of a positive big integer, accurate to a few ulps even when
/// the integer far exceeds the f64 range. Returns `None` for zero.
pub fn ln_biguint(v: &BigUint) -> Option<f64> {
    use num_traits::Zero;
    if v.is_zero() {
        return None;
    }
    let bits = v.bits();
    if bits <= 53 {
        return Some(v.to_f64().expect("fits in f64").ln());
    }
    // Keep the top 53 bits exactly and account for the shift.
    let shift = bits - 53;
    let top = (v >> shift).to_f64().expect("53-bit value");
    Some(top.ln() + shift as f64 * std::f64::consts::LN_2)
}

/// Number of worker threads requested through `BOSECOUNT_THREADS`.
/// Unset, unparsable, or values <= 1 mean "run sequentially".
pub fn requested_threads() -> usize {
    std::env::var("BOSECOUNT_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or(1)
}

/// Maps `f` over `0..n`, optionally in parallel, always returning results in
/// index order so downstream reductions are deterministic.
pub fn indexed_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let threads = requested_threads().min(n.max(1));
    if threads <= 1 || n < 2 {
        return (0..n).map(f).collect();
    }
    let mut out: Vec<Option<T>> = Vec::with_capacity(n);
    out.resize_with(n, || None);
    let chunk = n.div_ceil(threads);
    std::thread::scope(|scope| {
        for (idx, slot_chunk) in out.chunks_mut(chunk).enumerate() {
            let f = &f;
            scope.spawn(move || {
                let base = idx * chunk;
                for (off, slot) in slot_chunk.iter_mut().enumerate() {
                    *slot = Some(f(base + off));
                }
            });
        }
    });
    out.into_iter().map(|slot| slot.expect("filled by worker")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use num_traits::One;

    #[test]
    fn kahan_matches_naive_on_benign_input() {
        let mut k = Kahan::new();
        for i in 1..=1000 {
            k.add(1.0 / i as f64);
        }
        let naive: f64 = (1..=1000).map(|i| 1.0 / i as f64).sum();
        assert!((k.sum() - naive).abs() < 1e-12);
        assert!(k.abs_sum() >= k.sum());
    }

    #[test]
    fn ln_biguint_agrees_with_f64_in_range() {
        let v = BigUint::from(123456789u64);
        let got = ln_biguint(&v).unwrap();
        assert!((got - (123456789f64).ln()).abs() < 1e-12);
    }

    #[test]
    fn ln_biguint_handles_huge_values() {
        // 2^10000: ln = 10000 ln 2.
        let v = BigUint::one() << 10000;
        let got = ln_biguint(&v).unwrap();
        let want = 10000.0 * std::f64::consts::LN_2;
        assert!((got - want).abs() / want < 1e-15);
    }

    #[test]
    fn ln_biguint_rejects_zero() {
        assert!(ln_biguint(&BigUint::default()).is_none());
    }

    #[test]
    fn indexed_map_is_order_preserving() {
        let got = indexed_map(100, |i| i * i);
        let want: Vec<usize> = (0..100).map(|i| i * i).collect();
        assert_eq!(got, want);
    }
}
