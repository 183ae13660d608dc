//! Data-parallel helpers. With the `parallel` feature the work is spread over
//! the rayon pool; without it every helper runs sequentially in order.

/// Execution strategy for kernels that expose both variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// `Parallel` degrades to `Sequential` when the crate is built without rayon.
    pub fn effective(self) -> Self {
        if cfg!(feature = "parallel") {
            self
        } else {
            Exec::Sequential
        }
    }
}

/// Map `f` over `items`, preserving order.
#[cfg(feature = "parallel")]
pub fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.iter().map(f).collect()
}

/// Fill `out` row by row: `f(row_index, row)` for rows of length `width`.
pub fn for_each_row<T, F>(exec: Exec, out: &mut [T], width: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    match exec.effective() {
        Exec::Sequential => {
            out.chunks_mut(width).enumerate().for_each(|(i, row)| f(i, row));
        }
        Exec::Parallel => {
            #[cfg(feature = "parallel")]
            {
                use rayon::prelude::*;
                out.par_chunks_mut(width).enumerate().for_each(|(i, row)| f(i, row));
            }
            #[cfg(not(feature = "parallel"))]
            unreachable!()
        }
    }
}
