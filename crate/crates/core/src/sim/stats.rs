use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};

/// Running mean and sum of squared deviations (Welford).
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct ReplicationStats {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
}

impl ReplicationStats {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Combines two summaries as if all observations had been pushed into one.
    pub fn merge(&self, other: &Self) -> Self {
        if self.count == 0 {
            return *other;
        }
        if other.count == 0 {
            return *self;
        }
        let count = self.count + other.count;
        let (na, nb) = (self.count as f64, other.count as f64);
        let delta = other.mean - self.mean;
        ReplicationStats {
            count,
            mean: self.mean + delta * nb / count as f64,
            m2: self.m2 + other.m2 + delta * delta * na * nb / count as f64,
        }
    }

    /// Unbiased sample variance; zero with fewer than two observations.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.m2 / (self.count - 1) as f64).max(0.0)
        }
    }

    pub fn ci95(&self) -> Result<ConfidenceInterval> {
        ci95(self)
    }
}

impl FromIterator<f64> for ReplicationStats {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut stats = ReplicationStats::new();
        for x in iter {
            stats.push(x);
        }
        stats
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConfidenceInterval {
    pub mean: f64,
    pub halfwidth: f64,
}

impl ConfidenceInterval {
    pub fn lower(&self) -> f64 {
        self.mean - self.halfwidth
    }

    pub fn upper(&self) -> f64 {
        self.mean + self.halfwidth
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower() <= x && x <= self.upper()
    }

    pub fn overlaps(&self, other: &ConfidenceInterval) -> bool {
        self.lower() <= other.upper() && other.lower() <= self.upper()
    }
}

/// Two-sided Student-t quantile `t_{q, dof}`.
pub fn student_t_quantile(q: f64, dof: u64) -> Result<f64> {
    let t = StudentsT::new(0.0, 1.0, dof as f64).map_err(|e| Error::domain(e.to_string()))?;
    Ok(t.inverse_cdf(q))
}

/// Mean with the 95% Student-t half-width across replications.
pub fn ci95(stats: &ReplicationStats) -> Result<ConfidenceInterval> {
    if stats.count < 2 {
        return Err(Error::domain(format!(
            "confidence interval needs >= 2 replications, got {}",
            stats.count
        )));
    }
    let t = student_t_quantile(0.975, stats.count - 1)?;
    Ok(ConfidenceInterval {
        mean: stats.mean,
        halfwidth: t * (stats.variance() / stats.count as f64).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn t_quantiles() {
        assert!((student_t_quantile(0.975, 29).unwrap() - 2.045_23).abs() < 1e-4);
        assert!((student_t_quantile(0.975, 1).unwrap() - 12.706_2).abs() < 1e-3);
    }

    #[test]
    fn two_point_interval() {
        let stats: ReplicationStats = [0.0, 2.0].into_iter().collect();
        let ci = stats.ci95().unwrap();
        assert_eq!(ci.mean, 1.0);
        // Sample variance 2 over 2 replications: standard error 1.
        assert!((ci.halfwidth - 12.706_2).abs() < 1e-3);
    }

    #[test]
    fn identical_replications_have_zero_width() {
        let stats: ReplicationStats = std::iter::repeat_n(0.0187, 30).collect();
        assert_eq!(stats.ci95().unwrap().halfwidth, 0.0);
    }

    #[test]
    fn needs_two_replications() {
        let stats: ReplicationStats = [1.0].into_iter().collect();
        assert!(stats.ci95().is_err());
        assert_eq!(stats.count, 1);
        assert_eq!(stats.mean, 1.0);
    }

    fn rel_close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-10 * a.abs().max(b.abs()).max(1e-300)
    }

    proptest! {
        #[test]
        fn merge_equals_single_pass(
            xs in prop::collection::vec(-1e3f64..1e3, 0..60),
            ys in prop::collection::vec(-1e3f64..1e3, 0..60),
            zs in prop::collection::vec(-1e3f64..1e3, 0..60),
        ) {
            let a: ReplicationStats = xs.iter().copied().collect();
            let b: ReplicationStats = ys.iter().copied().collect();
            let c: ReplicationStats = zs.iter().copied().collect();
            let all: ReplicationStats = xs.iter().chain(&ys).chain(&zs).copied().collect();
            let left = a.merge(&b).merge(&c);
            let right = a.merge(&b.merge(&c));
            prop_assert_eq!(left.count, all.count);
            for s in [left, right] {
                prop_assert!(rel_close(s.mean, all.mean) || (s.mean - all.mean).abs() < 1e-10);
                prop_assert!(rel_close(s.m2, all.m2) || (s.m2 - all.m2).abs() < 1e-7);
                prop_assert!(s.variance() >= 0.0);
            }
        }
    }
}
