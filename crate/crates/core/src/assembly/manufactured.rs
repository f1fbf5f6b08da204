use crate::scalar::Real;

/// `u(x) = (3 a^2 b - b^3) exp(1 - |x - x0|^2)` with `(a, b, c) = x - x0`,
/// and the data `f = -Laplace u`, `g = u` it induces.
#[derive(Clone, Copy, Debug)]
pub struct ManufacturedSolution<T> {
    pub x0: [T; 3],
}

impl<T: Real> ManufacturedSolution<T> {
    pub fn new(x0: [T; 3]) -> Self {
        Self { x0 }
    }

    fn shifted(&self, x: &[T; 3]) -> [T; 3] {
        [x[0] - self.x0[0], x[1] - self.x0[1], x[2] - self.x0[2]]
    }

    pub fn u(&self, x: &[T; 3]) -> T {
        let [a, b, c] = self.shifted(x);
        let r2 = a * a + b * b + c * c;
        (T::lit(3.0) * a * a * b - b * b * b) * (T::one() - r2).exp()
    }

    pub fn grad(&self, x: &[T; 3]) -> [T; 3] {
        let [a, b, c] = self.shifted(x);
        let r2 = a * a + b * b + c * c;
        let e = (T::one() - r2).exp();
        let p = T::lit(3.0) * a * a * b - b * b * b;
        let two = T::lit(2.0);
        [
            e * (T::lit(6.0) * a * b - two * p * a),
            e * (T::lit(3.0) * (a * a - b * b) - two * p * b),
            e * (-two * p * c),
        ]
    }

    pub fn f(&self, x: &[T; 3]) -> T {
        let [a, b, c] = self.shifted(x);
        let r2 = a * a + b * b + c * c;
        self.u(x) * (T::lit(18.0) - T::lit(4.0) * r2)
    }

    pub fn g(&self, x: &[T; 3]) -> T {
        self.u(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn f_is_minus_laplacian() {
        let ms = ManufacturedSolution::new([0.001, 0.002, 0.003]);
        let h = 1e-4;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let x: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let mut lap = 0.0;
            for d in 0..3 {
                let mut xp = x;
                let mut xm = x;
                xp[d] += h;
                xm[d] -= h;
                lap += (ms.u(&xp) - 2.0 * ms.u(&x) + ms.u(&xm)) / (h * h);
            }
            assert!((-lap - ms.f(&x)).abs() < 1e-5, "{x:?}");
        }
    }

    #[test]
    fn gradient_matches_central_differences() {
        let ms = ManufacturedSolution::<f64>::new([0.1, -0.2, 0.05]);
        let h = 1e-6;
        let x = [0.3, 0.4, -0.5];
        let g = ms.grad(&x);
        for d in 0..3 {
            let mut xp = x;
            let mut xm = x;
            xp[d] += h;
            xm[d] -= h;
            let fd = (ms.u(&xp) - ms.u(&xm)) / (2.0 * h);
            assert!((fd - g[d]).abs() < 1e-8);
        }
    }
}
