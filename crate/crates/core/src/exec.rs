//! Execution policy for the data-parallel kernels.
//!
//! Every parallel kernel splits work by output row (or output column), so each
//! entry is computed by exactly one task with the same operation order as the
//! sequential path. Results are therefore bit-identical across policies and
//! thread counts.
//!
//! With the `parallel` feature disabled, [`Exec::Parallel`] silently runs the
//! sequential path.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Below this many multiply-adds a kernel always runs sequentially.
pub const PARALLEL_MIN_WORK: usize = 1 << 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// Whether a kernel with `work` multiply-adds should fan out.
    pub fn fans_out(self, work: usize) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel && work >= PARALLEL_MIN_WORK
    }
}

/// Run `f(row_index, row)` over consecutive `width`-sized rows of `data`.
pub(crate) fn for_each_row<F>(data: &mut [f64], width: usize, exec: Exec, work: usize, f: F)
where
    F: Fn(usize, &mut [f64]) + Send + Sync,
{
    if width == 0 {
        return;
    }
    #[cfg(feature = "parallel")]
    if exec.fans_out(work) {
        data.par_chunks_mut(width).enumerate().for_each(|(i, row)| f(i, row));
        return;
    }
    let _ = (exec, work);
    data.chunks_mut(width).enumerate().for_each(|(i, row)| f(i, row));
}

/// Order-preserving map over independent items.
pub fn map<T, R, F>(items: &[T], exec: Exec, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Send + Sync,
{
    #[cfg(feature = "parallel")]
    if exec == Exec::Parallel && items.len() > 1 {
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_preserves_order_under_both_policies() {
        let items: Vec<u32> = (0..100).collect();
        let seq = map(&items, Exec::Sequential, |x| x * 3);
        let par = map(&items, Exec::Parallel, |x| x * 3);
        assert_eq!(seq, par);
        assert_eq!(seq[7], 21);
    }

    #[test]
    fn small_work_never_fans_out() {
        assert!(!Exec::Parallel.fans_out(10));
        assert!(!Exec::Sequential.fans_out(usize::MAX));
    }
}
