//! Order-fixed compensated summation.
//!
//! Every reduction in the crate runs left to right through [`NeumaierSum`],
//! so repeated runs and parallel panel evaluation produce bitwise-identical
//! totals.

#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
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

/// Compensated left-to-right sum.
pub fn ordered_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = NeumaierSum::new();
    acc.extend(values);
    acc.value()
}

/// Component-wise compensated accumulator for real coordinate vectors.
#[derive(Debug, Clone)]
pub struct VectorSum {
    parts: Vec<NeumaierSum>,
}

impl VectorSum {
    pub fn zeros(dim: usize) -> Self {
        Self {
            parts: vec![NeumaierSum::new(); dim],
        }
    }

    /// Adds `weight * x` component-wise. `x` must have the accumulator's length.
    pub fn add_scaled(&mut self, weight: f64, x: &[f64]) {
        debug_assert_eq!(x.len(), self.parts.len());
        for (acc, xi) in self.parts.iter_mut().zip(x) {
            acc.add(weight * xi);
        }
    }

    pub fn values(&self) -> Vec<f64> {
        self.parts.iter().map(NeumaierSum::value).collect()
    }
}
