//! Ordered data-parallel helpers.
//!
//! With the `parallel` feature (default) these fan out over rayon; without it
//! they run sequentially. Results are always collected in input order, so the
//! two builds produce bit-identical output.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map over a slice, parallel when enabled, preserving order.
#[cfg(feature = "parallel")]
pub fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

/// Map over `0..n`, parallel when enabled, preserving order.
#[cfg(feature = "parallel")]
pub fn par_map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn par_map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    F: Fn(usize) -> R,
{
    (0..n).map(f).collect()
}

/// Always-sequential map over `0..n`; baseline for the bench suite.
pub fn seq_map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    F: Fn(usize) -> R,
{
    (0..n).map(f).collect()
}

/// Always-sequential map over a slice; baseline for the bench suite.
pub fn seq_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree_in_order() {
        let xs: Vec<u64> = (0..1000).collect();
        let a = par_map(&xs, |x| x * x + 1);
        let b = seq_map(&xs, |x| x * x + 1);
        assert_eq!(a, b);
        let c = par_map_range(1000, |i| i as u64 * 3);
        let d = seq_map_range(1000, |i| i as u64 * 3);
        assert_eq!(c, d);
    }
}
