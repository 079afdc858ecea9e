//! Complex values over [`PrecReal`] components.

use super::real::PrecReal;
use std::fmt;

/// Complex number with precision-tracked real and imaginary parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrecComplex {
    pub re: PrecReal,
    pub im: PrecReal,
}

impl PrecComplex {
    pub fn new(re: PrecReal, im: PrecReal) -> Self {
        PrecComplex { re, im }
    }

    pub fn real(re: PrecReal) -> Self {
        let prec = re.precision();
        PrecComplex { re, im: PrecReal::zero(prec) }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// |z|^2 = re^2 + im^2, exact over the stored dyadics.
    pub fn abs_sq(&self) -> PrecReal {
        self.re.mul_exact(&self.re).add_exact(&self.im.mul_exact(&self.im))
    }

    /// a^H b + a b^H = 2 Re(conj(a) b), exact over the stored dyadics.
    pub fn herm_cross(a: &PrecComplex, b: &PrecComplex) -> PrecReal {
        let t = a.re.mul_exact(&b.re).add_exact(&a.im.mul_exact(&b.im));
        t.scale2(1)
    }

    pub fn add_exact(&self, other: &Self) -> Self {
        PrecComplex { re: self.re.add_exact(&other.re), im: self.im.add_exact(&other.im) }
    }

    pub fn mul_exact(&self, other: &Self) -> Self {
        let re = self.re.mul_exact(&other.re).sub_exact(&self.im.mul_exact(&other.im));
        let im = self.re.mul_exact(&other.im).add_exact(&self.im.mul_exact(&other.re));
        PrecComplex { re, im }
    }

    pub fn mul_real_exact(&self, r: &PrecReal) -> Self {
        PrecComplex { re: self.re.mul_exact(r), im: self.im.mul_exact(r) }
    }
}

impl fmt::Display for PrecComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.re, self.im)
    }
}
