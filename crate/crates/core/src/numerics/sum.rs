use num_complex::Complex64;

/// Neumaier-compensated accumulator for complex numbers.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    re: f64,
    im: f64,
    c_re: f64,
    c_im: f64,
    abs: f64,
    n: usize,
}

#[inline]
fn two_sum(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: Complex64) {
        two_sum(&mut self.re, &mut self.c_re, x.re);
        two_sum(&mut self.im, &mut self.c_im, x.im);
        self.abs += x.norm();
        self.n += 1;
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re + self.c_re, self.im + self.c_im)
    }

    /// Sum of moduli of the added terms.
    pub fn abs_sum(&self) -> f64 {
        self.abs
    }

    /// Rough bound on the accumulated rounding error.
    pub fn rounding_estimate(&self) -> f64 {
        4.0 * f64::EPSILON * self.abs
    }
}

/// Compensated sum in iteration order.
pub fn compensated_sum<I: IntoIterator<Item = Complex64>>(it: I) -> Complex64 {
    let mut s = CompensatedSum::new();
    for x in it {
        s.add(x);
    }
    s.value()
}
