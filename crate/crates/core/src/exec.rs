use rayon::prelude::*;

/// Runs `f(i, input_row, output_row)` over matching rows of two row-major
/// buffers, one task per row when `parallel` is set. Rows land in disjoint
/// output slots, so the result does not depend on scheduling.
pub(crate) fn zip_rows<A, B, E, F>(
    parallel: bool,
    input: &[A],
    in_len: usize,
    output: &mut [B],
    out_len: usize,
    f: F,
) -> Result<(), E>
where
    A: Sync,
    B: Send,
    E: Send,
    F: Fn(usize, &[A], &mut [B]) -> Result<(), E> + Sync + Send,
{
    debug_assert_eq!(input.len() / in_len, output.len() / out_len);
    if parallel {
        input
            .par_chunks_exact(in_len)
            .zip(output.par_chunks_exact_mut(out_len))
            .enumerate()
            .try_for_each(|(i, (x, y))| f(i, x, y))
    } else {
        input
            .chunks_exact(in_len)
            .zip(output.chunks_exact_mut(out_len))
            .enumerate()
            .try_for_each(|(i, (x, y))| f(i, x, y))
    }
}

/// Runs `f(i, scratch, row)` over the rows of one buffer in place. Each
/// worker owns a scratch vector it may use to keep a copy of the row.
pub(crate) fn rewrite_rows<E, F>(parallel: bool, data: &mut [f64], len: usize, f: F) -> Result<(), E>
where
    E: Send,
    F: Fn(usize, &mut Vec<f64>, &mut [f64]) -> Result<(), E> + Sync + Send,
{
    if parallel {
        data.par_chunks_exact_mut(len)
            .enumerate()
            .try_for_each_init(|| Vec::with_capacity(len), |scratch, (i, row)| f(i, scratch, row))
    } else {
        let mut scratch = Vec::with_capacity(len);
        data.chunks_exact_mut(len)
            .enumerate()
            .try_for_each(|(i, row)| f(i, &mut scratch, row))
    }
}
