use crate::error::{Error, Result};
use crate::lattice::{robust_floor, LatticePoint, LatticeRect, Step};
use crate::lpp::kernel::dp_row;
use crate::lpp::{check_capacity, lpp_backward, WeightField};
use crate::random::{sample_exp1, RngStream};
use crate::stationary::{characteristic_point, check_rho};

pub const DEFAULT_FAR_MULTIPLIER: f64 = 4.0;

/// `G(x, u)` for a far target `u`, kept on `[[window.lo, window.hi + (1,1)]]`.
///
/// Busemann values are differences of these, so additivity around any loop
/// holds by telescoping. Points of the window index primal vertices; dual
/// vertices `q` are addressed by the integer point `p = q + (1/2, 1/2)`, and
/// the dual domain is `[[window.lo + (1,1), window.hi + (1,1)]]`.
#[derive(Debug, Clone)]
pub struct BusemannWindow {
    rho: f64,
    window: LatticeRect,
    far_target: LatticePoint,
    store: LatticeRect,
    values: Vec<f64>,
}

fn store_rect(window: LatticeRect, far: LatticePoint) -> Result<LatticeRect> {
    let store = LatticeRect::new(window.lo(), window.hi() + LatticePoint::new(1, 1))?;
    if !LatticePoint::ORIGIN.le(&window.lo()) || !store.hi().lt_both(&far) {
        return Err(Error::contract(
            "busemann",
            format!("window {window} plus margin must sit inside [[0, {far}]] clear of its far sides"),
        ));
    }
    Ok(store)
}

impl BusemannWindow {
    /// From a materialized bulk field on `[[0, u]]`.
    pub fn from_bulk(bulk: &WeightField, rho: f64, window: LatticeRect) -> Result<Self> {
        check_rho("busemann", rho)?;
        let far_target = bulk.rect().hi();
        if bulk.rect().lo() != LatticePoint::ORIGIN {
            return Err(Error::contract("busemann", format!("bulk {} must start at 0", bulk.rect())));
        }
        let store = store_rect(window, far_target)?;
        let table = lpp_backward(bulk, far_target)?;
        let mut values = Vec::with_capacity(store.area());
        for p in store.points() {
            values.push(table.get(p));
        }
        Ok(BusemannWindow {
            rho,
            window,
            far_target,
            store,
            values,
        })
    }

    /// Draws the bulk on `[[0, u_M]]`, `u_M = v_M`, `M = floor(far_multiplier N)`,
    /// row-major from `stream`, and runs the backward recursion row by row
    /// from the top, keeping only two rows plus the stored window.
    ///
    /// Bit-identical to `from_bulk(generate_bulk([[0, u_M]], stream))`.
    pub fn sample(
        rho: f64,
        n: u64,
        far_multiplier: f64,
        window: LatticeRect,
        stream: &mut RngStream,
        max_cells: usize,
    ) -> Result<Self> {
        let far_target = far_target(rho, n, far_multiplier)?;
        check_capacity(LatticeRect::from_origin(far_target)?, max_cells)?;
        let store = store_rect(window, far_target)?;

        let bulk_width = (far_target.x1 + 1) as u64;
        let first_col = window.lo().x1;
        let row_len = (far_target.x1 - first_col + 1) as usize;
        let store_cols = store.width();
        let mut below = vec![f64::NEG_INFINITY; row_len];
        let mut row = vec![0.0; row_len];
        let mut weights = vec![0.0; row_len];
        let mut values = vec![0.0; store.area()];

        for x2 in (window.lo().x2..=far_target.x2).rev() {
            stream.seek(x2 as u64 * bulk_width + first_col as u64);
            for w in weights.iter_mut() {
                *w = sample_exp1(stream);
            }
            // Index i of a reversed row is x1 = far_target.x1 - i.
            weights.reverse();
            if x2 == far_target.x2 {
                let mut acc = 0.0;
                for (g, &w) in row.iter_mut().zip(&weights) {
                    acc += w;
                    *g = acc;
                }
            } else {
                dp_row(&below, &weights, &mut row);
            }
            if x2 <= store.hi().x2 {
                let r = (x2 - store.lo().x2) as usize;
                let out = &mut values[r * store_cols..(r + 1) * store_cols];
                for (c, v) in out.iter_mut().enumerate() {
                    *v = row[(far_target.x1 - store.lo().x1) as usize - c];
                }
            }
            std::mem::swap(&mut below, &mut row);
        }
        Ok(BusemannWindow {
            rho,
            window,
            far_target,
            store,
            values,
        })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn window(&self) -> LatticeRect {
        self.window
    }

    pub fn far_target(&self) -> LatticePoint {
        self.far_target
    }

    /// Rectangle on which `G(., u)` is kept.
    pub fn store_rect(&self) -> LatticeRect {
        self.store
    }

    /// Domain of dual weights and dual steps, in shifted coordinates.
    pub fn dual_rect(&self) -> LatticeRect {
        LatticeRect::new(self.window.lo() + LatticePoint::new(1, 1), self.store.hi())
            .expect("window is non-empty")
    }

    /// `G(x, u)`.
    #[inline]
    pub fn passage(&self, x: LatticePoint) -> f64 {
        self.values[self.store.index(x)]
    }

    /// `B(x, y) = G(x, u) - G(y, u)`.
    pub fn busemann(&self, x: LatticePoint, y: LatticePoint) -> f64 {
        self.passage(x) - self.passage(y)
    }

    pub fn horizontal(&self, x: LatticePoint) -> f64 {
        self.busemann(x, x + LatticePoint::new(1, 0))
    }

    pub fn vertical(&self, x: LatticePoint) -> f64 {
        self.busemann(x, x + LatticePoint::new(0, 1))
    }

    /// Semi-infinite step out of `x`: `e1` iff `B(x, x+e1) <= B(x, x+e2)`,
    /// decided as `G(x+e1) >= G(x+e2)` so that it matches `trace_geodesic`.
    #[inline]
    pub fn primal_step(&self, x: LatticePoint) -> Step {
        let east = self.passage(LatticePoint::new(x.x1 + 1, x.x2));
        let north = self.passage(LatticePoint::new(x.x1, x.x2 + 1));
        if east >= north {
            Step::E1
        } else {
            Step::E2
        }
    }

    /// Dual step out of shifted point `p`: `-e1` iff `B(p-e1, p) <= B(p-e2, p)`.
    #[inline]
    pub fn dual_step(&self, p: LatticePoint) -> Step {
        let west = self.passage(LatticePoint::new(p.x1 - 1, p.x2));
        let south = self.passage(LatticePoint::new(p.x1, p.x2 - 1));
        if west <= south {
            Step::NegE1
        } else {
            Step::NegE2
        }
    }

    /// `min(B(p-e1, p), B(p-e2, p))` at shifted point `p`.
    pub fn dual_weight(&self, p: LatticePoint) -> f64 {
        let g = self.passage(p);
        let west = self.passage(LatticePoint::new(p.x1 - 1, p.x2)) - g;
        let south = self.passage(LatticePoint::new(p.x1, p.x2 - 1)) - g;
        west.min(south)
    }
}

/// `v_M` with `M = floor(far_multiplier N)`.
pub(crate) fn far_target(rho: f64, n: u64, far_multiplier: f64) -> Result<LatticePoint> {
    if !(far_multiplier >= 1.0 && far_multiplier.is_finite()) {
        return Err(Error::contract(
            "busemann",
            format!("far multiplier must be at least 1, got {far_multiplier}"),
        ));
    }
    let m = robust_floor(far_multiplier * n as f64).max(1) as u64;
    Ok(characteristic_point(rho, m)?.point)
}

/// Materialized variant: Busemann window of `bulk` on `[[0, u]]`.
pub fn busemann_window(bulk: &WeightField, rho: f64, window: LatticeRect) -> Result<BusemannWindow> {
    BusemannWindow::from_bulk(bulk, rho, window)
}
