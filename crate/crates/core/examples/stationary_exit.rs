//! Stationary last-passage process: exit times and increment means.

use cornergrowth::{
    characteristic_point, down_right_increment_sample, exit_labels_all, exit_time, generate_bulk, make_stream,
    make_sw_boundary, staircase_path, stationary_forward, Direction, LatticePoint, LatticeRect,
};

fn main() -> cornergrowth::Result<()> {
    let rho = 0.5;
    let v = characteristic_point(rho, 500)?.point;
    let mut exits = Vec::new();
    let mut horizontal = Vec::new();
    for k in 0..200 {
        let s = make_stream(17, k);
        let bulk = generate_bulk(LatticeRect::new(LatticePoint::new(1, 1), v)?, &mut s.fork(1))?;
        let boundary = make_sw_boundary(rho, LatticePoint::ORIGIN, v.x1 as usize, v.x2 as usize, &mut s.fork(2))?;
        let process = stationary_forward(&boundary, &bulk)?;
        exits.push(exit_time(&process, v)?.value());
        let stairs = staircase_path(LatticePoint::new(0, v.x2), (v.x2 as usize).min(v.x1 as usize));
        horizontal.extend(
            down_right_increment_sample(&process, &stairs)?
                .into_iter()
                .filter(|(d, _)| *d == Direction::Horizontal)
                .map(|(_, w)| w),
        );
        if k == 0 {
            let labels = exit_labels_all(&process);
            let east: Vec<i64> = labels.north_east_boundary().iter().step_by(25).map(|&z| labels.raw(z)).collect();
            println!("labels along the north-east boundary (every 25th): {east:?}");
        }
    }
    let mean_abs = exits.iter().map(|z| z.abs() as f64).sum::<f64>() / exits.len() as f64;
    println!("mean |Z(0 -> v_N)| = {mean_abs:.1} (N^(2/3) = {:.1})", 500f64.powf(2.0 / 3.0));
    println!(
        "mean horizontal increment = {:.3} (expected {})",
        horizontal.iter().sum::<f64>() / horizontal.len() as f64,
        1.0 / (1.0 - rho)
    );
    Ok(())
}
