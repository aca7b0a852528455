use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform grid on `[a_left, a_right]` with an odd number of nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    a_left: f64,
    a_right: f64,
    n_points: usize,
}

impl Grid1D {
    pub fn new(a_left: f64, a_right: f64, n_points: usize) -> Result<Self> {
        if !(a_left.is_finite() && a_right.is_finite()) || a_left >= a_right {
            return Err(Error::InvalidGrid(format!(
                "endpoints must satisfy a_left < a_right, got [{a_left}, {a_right}]"
            )));
        }
        if n_points < 3 || n_points % 2 == 0 {
            return Err(Error::InvalidGrid(format!(
                "n_points must be odd and >= 3, got {n_points}"
            )));
        }
        Ok(Self {
            a_left,
            a_right,
            n_points,
        })
    }

    /// Grid on `[-half_width, half_width]`; the middle node is exactly zero.
    pub fn symmetric(half_width: f64, n_points: usize) -> Result<Self> {
        Self::new(-half_width, half_width, n_points)
    }

    pub fn a_left(&self) -> f64 {
        self.a_left
    }

    pub fn a_right(&self) -> f64 {
        self.a_right
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        (self.a_right - self.a_left) / (self.n_points - 1) as f64
    }

    pub fn is_symmetric(&self) -> bool {
        self.a_left == -self.a_right
    }

    pub fn middle_index(&self) -> usize {
        (self.n_points - 1) / 2
    }

    /// Coordinate of node `i`. Endpoints are returned exactly; symmetric grids
    /// are evaluated about the middle node so that `node(n-1-i) == -node(i)`.
    pub fn node(&self, i: usize) -> f64 {
        debug_assert!(i < self.n_points);
        if i == 0 {
            return self.a_left;
        }
        if i == self.n_points - 1 {
            return self.a_right;
        }
        if self.is_symmetric() {
            (i as f64 - self.middle_index() as f64) * self.step()
        } else {
            self.a_left + i as f64 * self.step()
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.node(i)).collect()
    }

    /// Index of the node within `1e-9 * step` of `x`, if any.
    pub fn index_of(&self, x: f64) -> Option<usize> {
        let h = self.step();
        let pos = (x - self.a_left) / h;
        let i = pos.round();
        if i < 0.0 || i >= self.n_points as f64 {
            return None;
        }
        let i = i as usize;
        ((self.node(i) - x).abs() <= 1e-9 * h).then_some(i)
    }

    /// Index of the node at the origin, if the origin is a node.
    pub fn origin_index(&self) -> Option<usize> {
        self.index_of(0.0)
    }

    pub fn contains(&self, x: f64) -> bool {
        let tol = 1e-12 * self.step();
        x >= self.a_left - tol && x <= self.a_right + tol
    }

    pub fn check_index(&self, index: usize) -> Result<()> {
        if index < self.n_points {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index,
                len: self.n_points,
            })
        }
    }

    pub(crate) fn same_as(&self, other: &Grid1D) -> bool {
        self.n_points == other.n_points
            && (self.a_left - other.a_left).abs() <= 1e-12 * (1.0 + self.a_left.abs())
            && (self.a_right - other.a_right).abs() <= 1e-12 * (1.0 + self.a_right.abs())
    }

    pub(crate) fn ensure_same(&self, other: &Grid1D, what: &str) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "{what}: [{}, {}; {}] vs [{}, {}; {}]",
                self.a_left, self.a_right, self.n_points, other.a_left, other.a_right, other.n_points
            )))
        }
    }
}
