//! Reproducible floating-point summation.
//!
//! All reductions in the library go through either [`NeumaierSum`] (for
//! sequential accumulation inside a worker task) or [`pairwise_sum`] (for
//! combining per-task partial sums in a fixed order). Both are deterministic
//! and independent of thread count, which is what makes report bodies
//! byte-identical across worker-pool sizes.

/// Compensated (Kahan–Neumaier) accumulator.
///
/// Tracks a running compensation term so long sums of mixed-magnitude values
/// lose far less precision than naive accumulation.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Pairwise (cascade) summation over a slice, in index order.
///
/// The summation tree depends only on the slice length, never on how the
/// values were produced, so parallel producers that fill the slice in a fixed
/// index layout get bit-identical totals.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        2 => xs[0] + xs[1],
        n if n <= 8 => {
            let mut acc = NeumaierSum::new();
            for &x in xs {
                acc.add(x);
            }
            acc.value()
        }
        n => {
            let mid = n / 2;
            pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
        }
    }
}
