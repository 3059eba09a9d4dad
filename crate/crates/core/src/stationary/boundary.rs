use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{robust_floor, LatticePoint};
use crate::random::{sample_exp, ExpRate, RngStream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundarySide {
    SouthWest,
    NorthEast,
}

/// Boundary weights of a stationary process.
///
/// South-west: `horizontal[k - 1]` sits on `base + k e1` and
/// `vertical[l - 1]` on `base + l e2`, `k, l >= 1`.
/// North-east: `horizontal[k]` is the weight between `base - (k+1) e1` and
/// `base - k e1`, `k >= 0`, and likewise for `vertical` along `-e2`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySpec {
    rho: f64,
    base: LatticePoint,
    side: BoundarySide,
    horizontal: Vec<f64>,
    vertical: Vec<f64>,
}

pub(crate) fn check_rho(module: &'static str, rho: f64) -> Result<()> {
    if rho > 0.0 && rho < 1.0 {
        Ok(())
    } else {
        Err(Error::contract(module, format!("rho in (0,1) required, got {rho}")))
    }
}

impl BoundarySpec {
    pub fn new(
        rho: f64,
        base: LatticePoint,
        side: BoundarySide,
        horizontal: Vec<f64>,
        vertical: Vec<f64>,
    ) -> Result<Self> {
        check_rho("stationary", rho)?;
        if let Some(bad) = horizontal.iter().chain(&vertical).find(|&&w| !(w > 0.0 && w.is_finite())) {
            return Err(Error::contract("stationary", format!("boundary weight {bad} is not positive")));
        }
        Ok(BoundarySpec {
            rho,
            base,
            side,
            horizontal,
            vertical,
        })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn base(&self) -> LatticePoint {
        self.base
    }

    pub fn side(&self) -> BoundarySide {
        self.side
    }

    pub fn horizontal(&self) -> &[f64] {
        &self.horizontal
    }

    pub fn vertical(&self) -> &[f64] {
        &self.vertical
    }

    /// See [`crate::WeightField::snap_dyadic`].
    pub fn snap_dyadic(&mut self, bits: u32) {
        for w in self.horizontal.iter_mut().chain(&mut self.vertical) {
            *w = crate::lpp::snap_dyadic(*w, bits);
        }
    }
}

/// `I ~ Exp(1 - rho)` along `e1`, then `J ~ Exp(rho)` along `e2`, drawn in
/// that order from `stream`.
pub fn make_sw_boundary(
    rho: f64,
    base: LatticePoint,
    extent_x: usize,
    extent_y: usize,
    stream: &mut RngStream,
) -> Result<BoundarySpec> {
    check_rho("stationary", rho)?;
    if extent_x == 0 || extent_y == 0 {
        return Err(Error::contract("stationary", "boundary extents must be at least 1"));
    }
    let i_rate = ExpRate::new(1.0 - rho)?;
    let j_rate = ExpRate::new(rho)?;
    let horizontal = (0..extent_x).map(|_| sample_exp(stream, i_rate)).collect();
    let vertical = (0..extent_y).map(|_| sample_exp(stream, j_rate)).collect();
    BoundarySpec::new(rho, base, BoundarySide::SouthWest, horizontal, vertical)
}

/// `v_N = (floor(N (1-rho)^2), floor(N rho^2))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharacteristicTarget {
    pub rho: f64,
    pub n: u64,
    pub point: LatticePoint,
}

pub fn characteristic_point(rho: f64, n: u64) -> Result<CharacteristicTarget> {
    check_rho("stationary", rho)?;
    if n == 0 {
        return Err(Error::contract("stationary", "N must be at least 1"));
    }
    let scale = n as f64;
    let point = LatticePoint::new(
        robust_floor(scale * (1.0 - rho) * (1.0 - rho)),
        robust_floor(scale * rho * rho),
    );
    Ok(CharacteristicTarget { rho, n, point })
}
