//! The one last-passage kernel. Every table in the crate (plain, stationary,
//! north-east, Busemann) is produced by these two functions, possibly after
//! reflecting the input.

/// Forward DP over a row-major `width x rows` block:
/// `G(x) = w(x) + max(G(x - e1), G(x - e2))`, missing predecessors ignored.
pub(crate) fn forward_dp(width: usize, weights: &[f64], out: &mut [f64]) {
    debug_assert_eq!(weights.len(), out.len());
    debug_assert_eq!(weights.len() % width, 0);
    let mut acc = 0.0;
    for (g, &w) in out[..width].iter_mut().zip(&weights[..width]) {
        acc += w;
        *g = acc;
    }
    for r in 1..weights.len() / width {
        let (done, rest) = out.split_at_mut(r * width);
        dp_row(&done[(r - 1) * width..], &weights[r * width..(r + 1) * width], &mut rest[..width]);
    }
}

/// One row of the forward recursion given the finished row below it.
#[inline]
pub(crate) fn dp_row(below: &[f64], weights: &[f64], out: &mut [f64]) {
    let mut left = f64::NEG_INFINITY;
    for ((g, &w), &b) in out.iter_mut().zip(weights).zip(below) {
        left = w + left.max(b);
        *g = left;
    }
}
