//! Real and complex 3-vectors.
//!
//! Complex dot products are bilinear (no conjugation), matching the integral
//! identities; use [`CVec3::norm`] for the Hermitian length.

use core::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::math;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3(pub [f64; 3]);

impl Vec3 {
    pub const ZERO: Vec3 = Vec3([0.0; 3]);
    pub const E1: Vec3 = Vec3([1.0, 0.0, 0.0]);
    pub const E2: Vec3 = Vec3([0.0, 1.0, 0.0]);
    pub const E3: Vec3 = Vec3([0.0, 0.0, 1.0]);

    #[inline]
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3([x, y, z])
    }

    #[inline]
    pub fn dot(self, o: Vec3) -> f64 {
        self.0[0] * o.0[0] + self.0[1] * o.0[1] + self.0[2] * o.0[2]
    }

    #[inline]
    pub fn cross(self, o: Vec3) -> Vec3 {
        let [a1, a2, a3] = self.0;
        let [b1, b2, b3] = o.0;
        Vec3([a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1])
    }

    #[inline]
    pub fn norm(self) -> f64 {
        math::sqrt(self.dot(self))
    }

    /// Unit vector in the same direction, or `None` for the zero vector.
    pub fn normalized(self) -> Option<Vec3> {
        let n = self.norm();
        if n > 0.0 && n.is_finite() {
            Some(self * (1.0 / n))
        } else {
            None
        }
    }

    #[inline]
    pub fn to_complex(self) -> CVec3 {
        CVec3([Complex64::new(self.0[0], 0.0), Complex64::new(self.0[1], 0.0), Complex64::new(self.0[2], 0.0)])
    }

    #[inline]
    pub fn x(self) -> f64 {
        self.0[0]
    }
    #[inline]
    pub fn y(self) -> f64 {
        self.0[1]
    }
    #[inline]
    pub fn z(self) -> f64 {
        self.0[2]
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    #[inline]
    fn add(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    #[inline]
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    #[inline]
    fn neg(self) -> Vec3 {
        Vec3([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    #[inline]
    fn mul(self, s: f64) -> Vec3 {
        Vec3([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }
}

impl Index<usize> for Vec3 {
    type Output = f64;
    #[inline]
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CVec3(pub [Complex64; 3]);

impl CVec3 {
    pub const ZERO: CVec3 = CVec3([Complex64::new(0.0, 0.0); 3]);

    #[inline]
    pub fn new(x: Complex64, y: Complex64, z: Complex64) -> Self {
        CVec3([x, y, z])
    }

    /// Builds `re + i·im` from two real vectors.
    #[inline]
    pub fn from_parts(re: Vec3, im: Vec3) -> Self {
        CVec3([Complex64::new(re.0[0], im.0[0]), Complex64::new(re.0[1], im.0[1]), Complex64::new(re.0[2], im.0[2])])
    }

    /// Bilinear product `Σ aᵢbᵢ`.
    #[inline]
    pub fn dot(self, o: CVec3) -> Complex64 {
        self.0[0] * o.0[0] + self.0[1] * o.0[1] + self.0[2] * o.0[2]
    }

    #[inline]
    pub fn dot_real(self, o: Vec3) -> Complex64 {
        self.0[0] * o.0[0] + self.0[1] * o.0[1] + self.0[2] * o.0[2]
    }

    #[inline]
    pub fn cross(self, o: CVec3) -> CVec3 {
        let [a1, a2, a3] = self.0;
        let [b1, b2, b3] = o.0;
        CVec3([a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1])
    }

    /// `r ∧ self` for a real vector `r`.
    #[inline]
    pub fn crossed_by(self, r: Vec3) -> CVec3 {
        r.to_complex().cross(self)
    }

    #[inline]
    pub fn scale(self, s: Complex64) -> CVec3 {
        CVec3([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }

    #[inline]
    pub fn scale_real(self, s: f64) -> CVec3 {
        CVec3([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }

    #[inline]
    pub fn norm_sqr(self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Hermitian length `sqrt(Σ|aᵢ|²)`.
    #[inline]
    pub fn norm(self) -> f64 {
        math::sqrt(self.norm_sqr())
    }

    #[inline]
    pub fn re(self) -> Vec3 {
        Vec3([self.0[0].re, self.0[1].re, self.0[2].re])
    }

    #[inline]
    pub fn im(self) -> Vec3 {
        Vec3([self.0[0].im, self.0[1].im, self.0[2].im])
    }

    /// Removes the component along the unit vector `u`: `(I − uuᵀ)·self`.
    #[inline]
    pub fn project_out(self, u: Vec3) -> CVec3 {
        self - u.to_complex().scale(self.dot_real(u))
    }
}

impl Add for CVec3 {
    type Output = CVec3;
    #[inline]
    fn add(self, o: CVec3) -> CVec3 {
        CVec3([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl AddAssign for CVec3 {
    #[inline]
    fn add_assign(&mut self, o: CVec3) {
        for (a, b) in self.0.iter_mut().zip(o.0) {
            *a += b;
        }
    }
}

impl Sub for CVec3 {
    type Output = CVec3;
    #[inline]
    fn sub(self, o: CVec3) -> CVec3 {
        CVec3([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Neg for CVec3 {
    type Output = CVec3;
    #[inline]
    fn neg(self) -> CVec3 {
        CVec3([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl Mul<Complex64> for CVec3 {
    type Output = CVec3;
    #[inline]
    fn mul(self, s: Complex64) -> CVec3 {
        self.scale(s)
    }
}

impl Mul<f64> for CVec3 {
    type Output = CVec3;
    #[inline]
    fn mul(self, s: f64) -> CVec3 {
        self.scale_real(s)
    }
}

impl Index<usize> for CVec3 {
    type Output = Complex64;
    #[inline]
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl From<Vec3> for CVec3 {
    fn from(v: Vec3) -> Self {
        v.to_complex()
    }
}

/// Proper rotation stored as a row-major 3×3 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation(pub [[f64; 3]; 3]);

impl Rotation {
    pub const IDENTITY: Rotation = Rotation([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);

    /// Rotation by `angle` about the unit vector `axis` (Rodrigues).
    pub fn about_axis(axis: Vec3, angle: f64) -> Rotation {
        let u = axis.normalized().unwrap_or(Vec3::E3);
        let (s, c) = (math::sin(angle), math::cos(angle));
        let t = 1.0 - c;
        let [x, y, z] = u.0;
        Rotation([
            [t * x * x + c, t * x * y - s * z, t * x * z + s * y],
            [t * x * y + s * z, t * y * y + c, t * y * z - s * x],
            [t * x * z - s * y, t * y * z + s * x, t * z * z + c],
        ])
    }

    #[inline]
    pub fn apply(&self, v: Vec3) -> Vec3 {
        let m = &self.0;
        Vec3([
            m[0][0] * v.0[0] + m[0][1] * v.0[1] + m[0][2] * v.0[2],
            m[1][0] * v.0[0] + m[1][1] * v.0[1] + m[1][2] * v.0[2],
            m[2][0] * v.0[0] + m[2][1] * v.0[1] + m[2][2] * v.0[2],
        ])
    }

    #[inline]
    pub fn apply_complex(&self, v: CVec3) -> CVec3 {
        CVec3::from_parts(self.apply(v.re()), self.apply(v.im()))
    }

    pub fn transpose(&self) -> Rotation {
        let m = &self.0;
        Rotation([[m[0][0], m[1][0], m[2][0]], [m[0][1], m[1][1], m[2][1]], [m[0][2], m[1][2], m[2][2]]])
    }

    pub fn compose(&self, other: &Rotation) -> Rotation {
        let mut out = [[0.0; 3]; 3];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = (0..3).map(|k| self.0[r][k] * other.0[k][c]).sum();
            }
        }
        Rotation(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::c;

    #[test]
    fn cross_of_basis_vectors() {
        assert_eq!(Vec3::E1.cross(Vec3::E2), Vec3::E3);
        assert_eq!(Vec3::E2.cross(Vec3::E3), Vec3::E1);
    }

    #[test]
    fn complex_dot_is_bilinear() {
        let a = CVec3::new(c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0));
        // i·i = -1, not |i|² = 1
        assert_eq!(a.dot(a), c(-1.0, 0.0));
        assert!((a.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rotation_is_orthogonal() {
        let r = Rotation::about_axis(Vec3::new(1.0, 2.0, -0.5), 0.7);
        let p = r.compose(&r.transpose());
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((p.0[i][j] - expect).abs() < 1e-14);
            }
        }
    }
}
