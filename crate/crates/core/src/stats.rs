//! Compensated summation and sample summaries.

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl Extend<f64> for NeumaierSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

pub fn compensated_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut s = NeumaierSum::new();
    s.extend(xs);
    s.total()
}

/// Mean and standard error of the mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean: f64,
    pub stderr: f64,
    pub count: u64,
}

impl Summary {
    /// Two-pass estimate. The standard error is reported as 0 for fewer than
    /// two samples, where the sample variance is undefined.
    pub fn from_samples(samples: &[f64]) -> Self {
        let n = samples.len();
        if n == 0 {
            return Self {
                mean: f64::NAN,
                stderr: 0.0,
                count: 0,
            };
        }
        let mean = compensated_sum(samples.iter().copied()) / n as f64;
        let stderr = if n < 2 {
            0.0
        } else {
            let ss = compensated_sum(samples.iter().map(|x| (x - mean) * (x - mean)));
            libm::sqrt(ss / (n - 1) as f64 / n as f64)
        };
        Self {
            mean,
            stderr,
            count: n as u64,
        }
    }
}
