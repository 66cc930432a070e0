/// Running count, mean and sum of squared deviations.
///
/// `merge` uses Chan's pairwise update, so combining fixed blocks in a fixed
/// order gives the same bits regardless of which thread produced a block.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
}

impl Moments {
    #[inline]
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&mut self, other: &Moments) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = (self.count + other.count) as f64;
        let delta = other.mean - self.mean;
        let w = other.count as f64 / n;
        self.mean += delta * w;
        self.m2 += other.m2 + delta * delta * self.count as f64 * w;
        self.count += other.count;
    }

    /// Sample variance (n − 1 denominator); zero for fewer than two samples.
    pub fn sample_variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.m2 / (self.count - 1) as f64).max(0.0)
        }
    }

    pub fn std_error(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            libm::sqrt(self.sample_variance() / self.count as f64)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_matches_single_pass() {
        let data: alloc::vec::Vec<f64> = (0..1000).map(|i| libm::sin(i as f64) * 3.0 + 1.0).collect();
        let mut all = Moments::default();
        data.iter().for_each(|&x| all.push(x));
        let mut merged = Moments::default();
        for chunk in data.chunks(37) {
            let mut m = Moments::default();
            chunk.iter().for_each(|&x| m.push(x));
            merged.merge(&m);
        }
        assert_eq!(merged.count, 1000);
        assert!((merged.mean - all.mean).abs() < 1e-14);
        assert!((merged.sample_variance() - all.sample_variance()).abs() < 1e-12);
    }

    #[test]
    fn constant_data_has_zero_error() {
        let mut m = Moments::default();
        for _ in 0..10 {
            m.push(2.0);
        }
        assert_eq!(m.mean, 2.0);
        assert_eq!(m.std_error(), 0.0);
    }
}
