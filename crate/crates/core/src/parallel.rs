//! Data-parallel map with a sequential fallback when the `parallel`
//! feature is off.

#[cfg(feature = "parallel")]
pub(crate) fn map<T, R, F>(items: &[T], parallel: bool, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    if parallel && items.len() > 1 {
        items.par_iter().map(f).collect()
    } else {
        items.iter().map(f).collect()
    }
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map<T, R, F>(items: &[T], _parallel: bool, f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

/// Whether this build can run anything in parallel.
pub const fn available() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(test)]
mod tests {
    #[test]
    fn map_preserves_order() {
        let xs: Vec<u64> = (0..100).collect();
        let seq = super::map(&xs, false, |x| x * x);
        let par = super::map(&xs, true, |x| x * x);
        assert_eq!(seq, par);
        assert_eq!(seq[99], 9801);
    }
}
