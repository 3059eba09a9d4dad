//! Passage values on a small field, checked against exhaustive search.

use cornergrowth::{brute_force_lpp, generate_bulk, lpp_backward, lpp_forward, make_stream, LatticePoint, LatticeRect};

fn main() -> cornergrowth::Result<()> {
    let rect = LatticeRect::from_origin(LatticePoint::new(5, 4))?;
    let bulk = generate_bulk(rect, &mut make_stream(7, 0))?;

    for row in (0..=4).rev() {
        let cells: Vec<String> = (0..=5).map(|c| format!("{:5.2}", bulk.get(LatticePoint::new(c, row)))).collect();
        println!("{}", cells.join(" "));
    }

    let forward = lpp_forward(&bulk, rect.lo())?;
    let backward = lpp_backward(&bulk, rect.hi())?;
    let (best, path) = brute_force_lpp(&bulk, rect.lo(), rect.hi())?;
    println!("G(0, hi) forward  = {:.6}", forward.get(rect.hi()));
    println!("G(0, hi) backward = {:.6}", backward.get(rect.lo()));
    println!("G(0, hi) search   = {best:.6}");
    println!("maximizing steps: {:?}", path.steps);
    Ok(())
}
