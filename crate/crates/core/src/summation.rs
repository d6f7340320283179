//! Deterministic reductions: pairwise and compensated sums, and a mergeable
//! mean/variance accumulator.

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

/// Compensated sum of an iterator.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    let mut acc = CompensatedSum::new();
    acc.extend(iter);
    acc.value()
}

const PAIRWISE_BLOCK: usize = 32;

/// Recursive pairwise sum; leaves of up to 32 terms are summed with compensation.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= PAIRWISE_BLOCK {
        return compensated_sum(xs.iter().copied());
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Count, mean and centred second moment of a sample; merging is exact up to
/// rounding and independent of how the sample was produced.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
}

impl Moments {
    /// Two-pass moments of a block.
    pub fn of(xs: &[f64]) -> Self {
        if xs.is_empty() {
            return Self::default();
        }
        let mean = pairwise_sum(xs) / xs.len() as f64;
        let dev: Vec<f64> = xs.iter().map(|x| (x - mean) * (x - mean)).collect();
        // second pass corrects the mean for its own rounding
        let corr = pairwise_sum(&xs.iter().map(|x| x - mean).collect::<Vec<_>>()) / xs.len() as f64;
        let m2 = (pairwise_sum(&dev) - corr * corr * xs.len() as f64).max(0.0);
        Moments { count: xs.len() as u64, mean: mean + corr, m2 }
    }

    /// Chan et al. combination of two disjoint samples.
    pub fn merge(&self, other: &Self) -> Self {
        if self.count == 0 {
            return *other;
        }
        if other.count == 0 {
            return *self;
        }
        let n = self.count + other.count;
        let (na, nb) = (self.count as f64, other.count as f64);
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * nb / n as f64;
        let m2 = self.m2 + other.m2 + delta * delta * na * nb / n as f64;
        Moments { count: n, mean, m2 }
    }

    /// Unbiased sample variance (zero for fewer than two values).
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    /// Merges a slice of partial results along a fixed balanced tree.
    pub fn merge_all(parts: &[Moments]) -> Moments {
        match parts.len() {
            0 => Moments::default(),
            1 => parts[0],
            len => {
                let mid = len / 2;
                Self::merge_all(&parts[..mid]).merge(&Self::merge_all(&parts[mid..]))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn compensation_recovers_lost_terms() {
        let xs = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(compensated_sum(xs), 2.0);
        let many: Vec<f64> = std::iter::once(1e16).chain(std::iter::repeat(1.0).take(1000)).collect();
        assert_eq!(pairwise_sum(&many), 1e16 + 1000.0);
    }

    #[test]
    fn moments_examples() {
        let m = Moments::of(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m.count, 4);
        assert_eq!(m.mean, 2.5);
        assert!((m.variance() - 5.0 / 3.0).abs() < 1e-15);
        assert_eq!(Moments::of(&[7.0; 50]).variance(), 0.0);
        assert_eq!(Moments::of(&[]).count, 0);
        assert_eq!(Moments::of(&[3.0]).variance(), 0.0);
    }

    proptest! {
        #[test]
        fn merge_matches_whole(xs in proptest::collection::vec(-1e3f64..1e3, 2..400), cut in 0usize..400) {
            let cut = cut.min(xs.len());
            let whole = Moments::of(&xs);
            let merged = Moments::of(&xs[..cut]).merge(&Moments::of(&xs[cut..]));
            prop_assert_eq!(merged.count, whole.count);
            prop_assert!((merged.mean - whole.mean).abs() <= 1e-12 * (1.0 + whole.mean.abs()));
            prop_assert!((merged.m2 - whole.m2).abs() <= 1e-9 * (1.0 + whole.m2));
        }

        #[test]
        fn pairwise_close_to_exact(xs in proptest::collection::vec(-1e6f64..1e6, 0..2000)) {
            let exact: f64 = xs.iter().sum();
            let scale: f64 = xs.iter().map(|x| x.abs()).sum::<f64>().max(1.0);
            prop_assert!((pairwise_sum(&xs) - exact).abs() <= 1e-12 * scale);
        }
    }
}
