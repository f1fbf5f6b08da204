use crate::error::{Error, Result};
use crate::scalar::{vec3, Real};

/// Implicit description of the physical domain: `eval(x) < 0` inside.
pub trait LevelSet<T: Real>: Send + Sync {
    fn eval(&self, x: &[T; 3]) -> T;

    /// Axis-aligned box enclosing the zero level set.
    fn bounding_box(&self) -> ([T; 3], [T; 3]);
}

/// Signed distance to a sphere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sphere<T> {
    pub center: [T; 3],
    pub radius: T,
}

impl<T: Real> Sphere<T> {
    pub fn new(center: [T; 3], radius: T) -> Result<Self> {
        if !(radius > T::zero()) || !radius.is_finite() {
            return Err(Error::InvalidInput(format!(
                "sphere radius must be positive, got {radius}"
            )));
        }
        Ok(Self { center, radius })
    }
}

impl<T: Real> LevelSet<T> for Sphere<T> {
    #[inline]
    fn eval(&self, x: &[T; 3]) -> T {
        vec3::dist(x, &self.center) - self.radius
    }

    fn bounding_box(&self) -> ([T; 3], [T; 3]) {
        let r = self.radius;
        let c = self.center;
        ([c[0] - r, c[1] - r, c[2] - r], [c[0] + r, c[1] + r, c[2] + r])
    }
}
