use super::weights::WeightField;
use crate::error::{Error, Result};
use crate::lattice::{GeodesicPath, LatticePoint, Step};

/// Largest `|y - x|_1` the exhaustive search accepts (C(22, 11) = 705432
/// paths).
pub const BRUTE_FORCE_MAX_LENGTH: i64 = 22;

/// Exhaustive maximum over every up-right path from `x` to `y`.
///
/// Weights are accumulated in path order as `w + partial`, which is the
/// association the DP kernel uses, so the value agrees with `lpp_forward`
/// bit for bit. Among equal maxima the first path in `e1`-first order wins.
pub fn brute_force_lpp(
    weights: &WeightField,
    x: LatticePoint,
    y: LatticePoint,
) -> Result<(f64, GeodesicPath)> {
    if !x.le(&y) || !weights.rect().contains(x) || !weights.rect().contains(y) {
        return Err(Error::contract(
            "lpp",
            format!("need {x} <= {y} inside {}", weights.rect()),
        ));
    }
    let length = (y - x).l1();
    if length > BRUTE_FORCE_MAX_LENGTH {
        return Err(Error::capacity(
            "lpp",
            format!("path length {length} exceeds brute-force cap {BRUTE_FORCE_MAX_LENGTH}"),
        ));
    }
    let mut search = Search {
        weights,
        target: y,
        steps: Vec::with_capacity(length as usize),
        best: f64::NEG_INFINITY,
        best_steps: Vec::new(),
    };
    search.visit(x, weights.get(x));
    let mut path = GeodesicPath::new(x);
    path.steps = search.best_steps;
    Ok((search.best, path))
}

struct Search<'a> {
    weights: &'a WeightField,
    target: LatticePoint,
    steps: Vec<Step>,
    best: f64,
    best_steps: Vec<Step>,
}

impl Search<'_> {
    fn visit(&mut self, z: LatticePoint, partial: f64) {
        if z == self.target {
            if partial > self.best {
                self.best = partial;
                self.best_steps.clone_from(&self.steps);
            }
            return;
        }
        for step in [Step::E1, Step::E2] {
            let next = z.step(step);
            if next.le(&self.target) {
                self.steps.push(step);
                self.visit(next, self.weights.get(next) + partial);
                self.steps.pop();
            }
        }
    }
}
