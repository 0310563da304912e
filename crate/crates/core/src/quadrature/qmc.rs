//! Deterministic low-discrepancy points for the QMC cross-check scheme:
//! a 6-dimensional Halton sequence with a seed-derived Cranley–Patterson
//! rotation. Used only to cross-validate the tensor integrals, so plain
//! Halton quality is sufficient.

const BASES: [u64; 6] = [2, 3, 5, 7, 11, 13];

/// van der Corput radical inverse in the given base.
#[inline]
fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut x = 0.0;
    let mut scale = inv;
    while i > 0 {
        x += (i % base) as f64 * scale;
        i /= base;
        scale *= inv;
    }
    x
}

/// SplitMix64 step, used to derive rotation offsets from the seed.
#[inline]
fn splitmix64(state: &mut u64) {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
}

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Rotated Halton sequence over the 6-dimensional unit cube.
pub struct Halton6 {
    index: u64,
    offsets: [f64; 6],
}

impl Halton6 {
    pub fn new(seed: u64) -> Self {
        let mut state = seed;
        let mut offsets = [0.0; 6];
        for off in &mut offsets {
            splitmix64(&mut state);
            *off = (mix(state) >> 11) as f64 / (1u64 << 53) as f64;
        }
        Self { index: 0, offsets }
    }

    /// Next point in [0,1)⁶.
    pub fn next_point(&mut self) -> [f64; 6] {
        // Skip index 0 (the all-zeros point).
        self.index += 1;
        let mut p = [0.0; 6];
        for (d, out) in p.iter_mut().enumerate() {
            let x = radical_inverse(self.index, BASES[d]) + self.offsets[d];
            *out = x - x.floor();
        }
        p
    }

    /// The n-th point (stateless access for parallel chunking).
    pub fn point_at(seed: u64, n: u64) -> [f64; 6] {
        let mut h = Halton6::new(seed);
        h.index = n;
        h.next_point()
    }
}
