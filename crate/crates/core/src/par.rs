//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature the closures run on the rayon pool whenever the
//! caller asks for it; without the feature everything runs on the calling
//! thread. Results always come back in input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// True when this build can actually run work in parallel.
pub const AVAILABLE: bool = cfg!(feature = "parallel");

pub(crate) fn map_slice<T, R, F>(items: &[T], parallel: bool, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        return items.par_iter().map(f).collect();
    }
    let _ = parallel;
    items.iter().map(f).collect()
}

pub(crate) fn map_range<R, F>(len: usize, parallel: bool, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        return (0..len).into_par_iter().map(f).collect();
    }
    let _ = parallel;
    (0..len).map(f).collect()
}

pub(crate) fn sort_unstable<T: Ord + Send>(items: &mut [T], parallel: bool) {
    #[cfg(feature = "parallel")]
    if parallel {
        items.par_sort_unstable();
        return;
    }
    let _ = parallel;
    items.sort_unstable();
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved_either_way() {
        let xs: Vec<u32> = (0..1000).collect();
        let a = map_slice(&xs, true, |x| x * 3);
        let b = map_slice(&xs, false, |x| x * 3);
        assert_eq!(a, b);
        assert_eq!(map_range(10, true, |i| i), (0..10).collect::<Vec<_>>());
        let mut ys: Vec<u32> = xs.iter().rev().copied().collect();
        sort_unstable(&mut ys, true);
        assert_eq!(ys, xs);
    }
}
