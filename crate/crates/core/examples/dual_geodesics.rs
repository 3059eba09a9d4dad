//! Dual weights and dual geodesics; they never cross primal geodesics.

use cornergrowth::{
    dual_field, dual_geodesic, make_stream, non_crossing_violations, paths_cross, semi_infinite_geodesic, BusemannWindow,
    LatticePoint, LatticeRect,
};

fn main() -> cornergrowth::Result<()> {
    let window = LatticeRect::from_origin(LatticePoint::new(40, 40))?;
    let b = BusemannWindow::sample(0.5, 160, 4.0, window, &mut make_stream(9, 0), usize::MAX)?;
    let duals = dual_field(&b);
    let mean = duals.values().iter().sum::<f64>() / duals.values().len() as f64;
    println!("mean dual weight {mean:.3} over {} points (Exp(1) mean is 1)", duals.values().len());
    println!("non-crossing rule violations: {}", non_crossing_violations(&b));

    let mut crossings = 0;
    for i in (0..=40).step_by(5) {
        let primal = semi_infinite_geodesic(&b, LatticePoint::new(i, 0))?;
        for j in (1..=41).step_by(5) {
            let dual = dual_geodesic(&b, LatticePoint::new(j, 41))?;
            crossings += paths_cross(&primal, &dual) as u32;
        }
    }
    println!("crossing primal/dual pairs: {crossings}");
    Ok(())
}
