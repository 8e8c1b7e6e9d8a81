//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature the helpers dispatch to rayon; without it they
//! run inline. [`sequential`] forces the inline path at runtime for the
//! current thread, which is how the benches compare the two modes inside one
//! binary. Results are always collected in index order, so output never
//! depends on scheduling.

use std::cell::Cell;
use std::ops::Range;

thread_local! {
    static FORCE_SEQUENTIAL: Cell<bool> = const { Cell::new(false) };
}

/// Run `f` with every helper in this module executing inline on this thread.
pub fn sequential<R>(f: impl FnOnce() -> R) -> R {
    let previous = FORCE_SEQUENTIAL.with(|flag| flag.replace(true));
    let out = f();
    FORCE_SEQUENTIAL.with(|flag| flag.set(previous));
    out
}

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel") && !FORCE_SEQUENTIAL.with(|flag| flag.get())
}

pub fn join<A, B, RA, RB>(a: A, b: B) -> (RA, RB)
where
    A: FnOnce() -> RA + Send,
    B: FnOnce() -> RB + Send,
    RA: Send,
    RB: Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() {
        return rayon::join(a, b);
    }
    (a(), b())
}

/// `range.map(f).collect()`, fanned out when parallelism is on.
pub fn map_range<T, F>(range: Range<usize>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() {
        use rayon::prelude::*;
        return range.into_par_iter().map(f).collect();
    }
    range.map(f).collect()
}

/// Fallible [`map_range`]; the error reported is the one at the lowest index.
pub fn try_map_range<T, E, F>(range: Range<usize>, f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(usize) -> Result<T, E> + Sync + Send,
{
    map_range(range, f).into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_range_keeps_index_order() {
        let v = map_range(0..1000, |i| i * i);
        assert!(v.iter().enumerate().all(|(i, &x)| x == i * i));
        let s = sequential(|| map_range(0..1000, |i| i * i));
        assert_eq!(v, s);
    }

    #[test]
    fn sequential_flag_is_scoped() {
        let before = is_parallel();
        sequential(|| assert!(!is_parallel()));
        assert_eq!(is_parallel(), before);
    }

    #[test]
    fn try_map_reports_first_error() {
        let r: Result<Vec<usize>, usize> = try_map_range(0..50, |i| if i % 7 == 3 { Err(i) } else { Ok(i) });
        assert_eq!(r, Err(3));
    }
}
