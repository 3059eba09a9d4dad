use crate::error::{Error, Result};
use crate::lattice::{LatticePoint, LatticeRect};
use crate::random::{sample_exp1, RngStream};

/// Largest table, in cells, that the library allocates unless told otherwise
/// (about 1.2 GB of `f64`).
pub const DEFAULT_MAX_CELLS: usize = 150_000_000;

/// Positive weights indexed by the points of a rectangle, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightField {
    rect: LatticeRect,
    values: Vec<f64>,
}

impl WeightField {
    pub fn new(rect: LatticeRect, values: Vec<f64>) -> Result<Self> {
        if values.len() != rect.area() {
            return Err(Error::contract(
                "lpp",
                format!("{} values for a rectangle of area {}", values.len(), rect.area()),
            ));
        }
        if let Some(bad) = values.iter().find(|&&w| !(w > 0.0 && w.is_finite())) {
            return Err(Error::contract("lpp", format!("weight {bad} is not positive")));
        }
        Ok(WeightField { rect, values })
    }

    /// Constant field, mostly for hand-built examples.
    pub fn filled(rect: LatticeRect, value: f64) -> Result<Self> {
        Self::new(rect, vec![value; rect.area()])
    }

    /// Field from rows listed bottom (`x2 = lo`) to top.
    pub fn from_rows(lo: LatticePoint, rows: &[&[f64]]) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.len());
        if height == 0 || width == 0 || rows.iter().any(|r| r.len() != width) {
            return Err(Error::contract("lpp", "rows must be non-empty and of equal length"));
        }
        let rect = LatticeRect::new(
            lo,
            lo + LatticePoint::new(width as i64 - 1, height as i64 - 1),
        )?;
        Self::new(rect, rows.concat())
    }

    pub fn rect(&self) -> LatticeRect {
        self.rect
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, p: LatticePoint) -> f64 {
        self.values[self.rect.index(p)]
    }

    pub fn try_get(&self, p: LatticePoint) -> Option<f64> {
        self.rect.contains(p).then(|| self.get(p))
    }

    /// Restriction to a sub-rectangle.
    pub fn subfield(&self, rect: LatticeRect) -> Result<WeightField> {
        if !self.rect.contains_rect(&rect) {
            return Err(Error::contract("lpp", format!("{rect} not inside {}", self.rect)));
        }
        let mut values = Vec::with_capacity(rect.area());
        for x2 in rect.lo().x2..=rect.hi().x2 {
            let start = self.rect.index(LatticePoint::new(rect.lo().x1, x2));
            values.extend_from_slice(&self.values[start..start + rect.width()]);
        }
        Ok(WeightField { rect, values })
    }

    /// The field rotated by 180 degrees about `pivot`: the weight at `p`
    /// moves to `pivot - p`. In row-major storage this is a reversal.
    pub fn reflected(&self, pivot: LatticePoint) -> WeightField {
        let rect = LatticeRect::new(pivot - self.rect.hi(), pivot - self.rect.lo())
            .expect("reflection preserves corner order");
        let mut values = self.values.clone();
        values.reverse();
        WeightField { rect, values }
    }

    /// Rounds every weight to a multiple of `2^-bits` (at least `2^-bits`).
    ///
    /// Sums, differences and maxima of such weights are exact in `f64` as
    /// long as magnitudes stay below `2^(52 - bits)`, which turns the
    /// combinatorial identities of last-passage percolation into bitwise
    /// identities.
    pub fn snap_dyadic(&mut self, bits: u32) {
        for w in &mut self.values {
            *w = snap_dyadic(*w, bits);
        }
    }
}

pub(crate) fn snap_dyadic(w: f64, bits: u32) -> f64 {
    let scale = (1u64 << bits) as f64;
    ((w * scale).round() / scale).max(1.0 / scale)
}

/// i.i.d. `Exp(1)` field on `rect`, filled row-major from the stream.
pub fn generate_bulk(rect: LatticeRect, stream: &mut RngStream) -> Result<WeightField> {
    generate_bulk_limited(rect, stream, DEFAULT_MAX_CELLS)
}

pub fn generate_bulk_limited(
    rect: LatticeRect,
    stream: &mut RngStream,
    max_cells: usize,
) -> Result<WeightField> {
    check_capacity(rect, max_cells)?;
    let values = (0..rect.area()).map(|_| sample_exp1(stream)).collect();
    Ok(WeightField { rect, values })
}

pub(crate) fn check_capacity(rect: LatticeRect, max_cells: usize) -> Result<()> {
    let (w, h) = (rect.width() as u128, rect.height() as u128);
    if w * h > max_cells as u128 {
        return Err(Error::capacity(
            "lpp",
            format!("{rect} has {} cells, limit is {max_cells}", w * h),
        ));
    }
    Ok(())
}
