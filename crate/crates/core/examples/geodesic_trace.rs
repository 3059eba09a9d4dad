//! Point-to-point geodesic toward v_N and how far it wanders from the diagonal.

use cornergrowth::{characteristic_point, generate_bulk, lpp_backward, make_stream, trace_geodesic, LatticePoint, LatticeRect};

fn main() -> cornergrowth::Result<()> {
    let n: u64 = std::env::args().nth(1).map_or(2000, |a| a.parse().expect("N"));
    let v = characteristic_point(0.5, n)?.point;
    let rect = LatticeRect::from_origin(v)?;
    let bulk = generate_bulk(rect, &mut make_stream(3, 0))?;
    let table = lpp_backward(&bulk, v)?;
    let path = trace_geodesic(&table, LatticePoint::ORIGIN)?;

    let widest = path.points().map(|p| (p.x1 - p.x2).abs()).max().unwrap();
    println!("v_N = {v}, G(0, v_N) = {:.3}", table.get(LatticePoint::ORIGIN));
    println!("G / N = {:.4} (shape value 1 at rho = 1/2)", table.get(LatticePoint::ORIGIN) / n as f64);
    println!("largest distance from the diagonal: {widest}, N^(2/3) = {:.1}", (n as f64).powf(2.0 / 3.0));
    Ok(())
}
