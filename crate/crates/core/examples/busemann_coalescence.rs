//! Semi-infinite geodesics from a Busemann window and where they merge.

use cornergrowth::{characteristic_point, coalescence_point, make_stream, semi_infinite_geodesic, BusemannWindow, LatticePoint, LatticeRect};

fn main() -> cornergrowth::Result<()> {
    let (rho, n) = (0.5, 400);
    let v = characteristic_point(rho, n)?.point;
    let window = LatticeRect::from_origin(v)?;
    let b = BusemannWindow::sample(rho, n, 4.0, window, &mut make_stream(5, 0), usize::MAX)?;
    println!("far target {}, window {}", b.far_target(), window);

    let path = semi_infinite_geodesic(&b, LatticePoint::ORIGIN)?;
    println!("geodesic from 0 leaves the window at {}", path.end());
    for s in [2, 5, 10, 20, 40, 80] {
        let c = coalescence_point(&b, LatticePoint::new(s, 0), LatticePoint::new(0, s), window)?;
        match c.point {
            Some(p) => println!("s = {s:>2}: merge at {p} ({})", if c.inside { "inside" } else { "outside" }),
            None => println!("s = {s:>2}: no merge inside the window"),
        }
    }
    Ok(())
}
