//! Bicomplex numbers `w = u + j v` with `u, v ∈ ℂ_i`, where `i² = j² = -1` and
//! `ij = ji`, plus fields of them and the formal powers of the main Vekua
//! equation.

mod field;
mod powers;

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::numcore::ComplexI;

pub use field::{vekua_residual, BicomplexField};
pub use powers::{formal_power_closed, formal_power_recursive, FormalPower, PathOrder};

/// Relative tolerance of [`Bicomplex::is_zero_divisor`].
pub const ZERO_DIVISOR_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Bicomplex {
    /// Scalar part `u = Sc w`.
    pub sc: ComplexI,
    /// Vector part `v = Vec w`.
    pub vec: ComplexI,
}

impl Bicomplex {
    pub const ZERO: Bicomplex = Bicomplex::new(ComplexI::new(0.0, 0.0), ComplexI::new(0.0, 0.0));
    pub const ONE: Bicomplex = Bicomplex::new(ComplexI::new(1.0, 0.0), ComplexI::new(0.0, 0.0));
    pub const J: Bicomplex = Bicomplex::new(ComplexI::new(0.0, 0.0), ComplexI::new(1.0, 0.0));
    /// `i` as a bicomplex number.
    pub const I: Bicomplex = Bicomplex::new(ComplexI::new(0.0, 1.0), ComplexI::new(0.0, 0.0));
    /// `P+ = (1 + ij) / 2`.
    pub const P_PLUS: Bicomplex = Bicomplex::new(ComplexI::new(0.5, 0.0), ComplexI::new(0.0, 0.5));
    /// `P- = (1 - ij) / 2`.
    pub const P_MINUS: Bicomplex = Bicomplex::new(ComplexI::new(0.5, 0.0), ComplexI::new(0.0, -0.5));

    pub const fn new(sc: ComplexI, vec: ComplexI) -> Self {
        Self { sc, vec }
    }

    pub fn scalar(u: ComplexI) -> Self {
        Self::new(u, ComplexI::new(0.0, 0.0))
    }

    /// `x + j y` for real `x`, `y`.
    pub fn from_xy(x: f64, y: f64) -> Self {
        Self::new(ComplexI::new(x, 0.0), ComplexI::new(y, 0.0))
    }

    pub fn sc(&self) -> ComplexI {
        self.sc
    }

    pub fn vec(&self) -> ComplexI {
        self.vec
    }

    /// `w̄ = u - j v`.
    pub fn conj_j(&self) -> Self {
        Self::new(self.sc, -self.vec)
    }

    /// `(w+, w-) = (u - i v, u + i v)`, so that `w = P+ w+ + P- w-`.
    pub fn idempotent_split(&self) -> (ComplexI, ComplexI) {
        let iv = ComplexI::i() * self.vec;
        (self.sc - iv, self.sc + iv)
    }

    /// Inverse of [`Bicomplex::idempotent_split`].
    pub fn from_split(plus: ComplexI, minus: ComplexI) -> Self {
        Self::P_PLUS * plus + Self::P_MINUS * minus
    }

    /// `w w̄ = u² + v²`, a scalar.
    pub fn norm_form(&self) -> ComplexI {
        self.sc * self.sc + self.vec * self.vec
    }

    /// Euclidean size `sqrt(|u|² + |v|²)`.
    pub fn abs(&self) -> f64 {
        (self.sc.norm_sqr() + self.vec.norm_sqr()).sqrt()
    }

    /// Nonzero with a vanishing idempotent component, i.e. `u = ±i v`.
    pub fn is_zero_divisor(&self) -> bool {
        let size = self.abs();
        if size == 0.0 {
            return false;
        }
        let (p, m) = self.idempotent_split();
        p.norm() <= ZERO_DIVISOR_TOL * size || m.norm() <= ZERO_DIVISOR_TOL * size
    }

    /// Multiplicative inverse, `None` for zero and zero divisors.
    pub fn inv(&self) -> Option<Self> {
        if self.abs() == 0.0 || self.is_zero_divisor() {
            return None;
        }
        let d = self.norm_form().inv();
        Some(Self::new(self.sc * d, -self.vec * d))
    }

    pub fn powi(&self, n: u32) -> Self {
        (0..n).fold(Self::ONE, |acc, _| acc * *self)
    }
}

impl Add for Bicomplex {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.sc + o.sc, self.vec + o.vec)
    }
}

impl AddAssign for Bicomplex {
    fn add_assign(&mut self, o: Self) {
        self.sc += o.sc;
        self.vec += o.vec;
    }
}

impl Sub for Bicomplex {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.sc - o.sc, self.vec - o.vec)
    }
}

impl Neg for Bicomplex {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.sc, -self.vec)
    }
}

impl Mul for Bicomplex {
    type Output = Self;
    /// `(a + jb)(c + jd) = (ac - bd) + j(ad + bc)`.
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.sc * o.sc - self.vec * o.vec,
            self.sc * o.vec + self.vec * o.sc,
        )
    }
}

impl Mul<ComplexI> for Bicomplex {
    type Output = Self;
    fn mul(self, c: ComplexI) -> Self {
        Self::new(self.sc * c, self.vec * c)
    }
}

impl Mul<f64> for Bicomplex {
    type Output = Self;
    fn mul(self, c: f64) -> Self {
        Self::new(self.sc * c, self.vec * c)
    }
}
