//! Counter-based random numbers for path simulation.
//!
//! Philox4x32-10 maps a 64-bit key and a 128-bit counter to 128 random
//! bits. Every normal draw is addressed by `(seed, path, interval,
//! substep)`, so path `i` sees the same numbers no matter which worker
//! simulates it or in which order paths are visited.

use crate::math::inverse_normal_cdf;

const MUL0: u32 = 0xD251_1F53;
const MUL1: u32 = 0xCD9E_8D57;
const WEYL0: u32 = 0x9E37_79B9;
const WEYL1: u32 = 0xBB67_AE85;

/// Philox4x32 with ten rounds.
#[inline]
pub fn philox4x32_10(counter: [u32; 4], key: [u32; 2]) -> [u32; 4] {
    let mut c = counter;
    let mut k = key;
    for round in 0..10 {
        if round > 0 {
            k[0] = k[0].wrapping_add(WEYL0);
            k[1] = k[1].wrapping_add(WEYL1);
        }
        let p0 = (MUL0 as u64) * (c[0] as u64);
        let p1 = (MUL1 as u64) * (c[2] as u64);
        c = [((p1 >> 32) as u32) ^ c[1] ^ k[0], p1 as u32, ((p0 >> 32) as u32) ^ c[3] ^ k[1], p0 as u32];
    }
    c
}

/// Draws for one path.
#[derive(Debug, Clone, Copy)]
pub struct PathRng {
    key: [u32; 2],
    path: [u32; 2],
}

impl PathRng {
    pub fn new(seed: u64, path: u64) -> Self {
        Self { key: [seed as u32, (seed >> 32) as u32], path: [path as u32, (path >> 32) as u32] }
    }

    /// Uniform on the open interval (0, 1) at the given address.
    #[inline]
    pub fn uniform_at(&self, interval: u32, substep: u32) -> f64 {
        let out = philox4x32_10([self.path[0], self.path[1], interval, substep], self.key);
        let bits = ((out[0] as u64) << 32) | out[1] as u64;
        ((bits >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal at the given address, by inverse transform.
    #[inline]
    pub fn normal_at(&self, interval: u32, substep: u32) -> f64 {
        inverse_normal_cdf(self.uniform_at(interval, substep))
    }
}
