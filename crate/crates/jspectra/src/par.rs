//! Data-parallel mapping over independent work items, with a sequential
//! fallback when the `parallel` feature is disabled. Every operation in this
//! crate is a pure function over immutable data, so batch callers can fan
//! out freely.

#[cfg(feature = "parallel")]
pub fn map_vec<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_vec<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    items.into_iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_types_cross_threads() {
        // Everything is immutable plain data; batch callers may move values
        // between threads freely.
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<crate::spectral::JacobiMatrix>();
        assert_send_sync::<crate::spectral::SpectralData>();
        assert_send_sync::<crate::spectral::DiscreteMeasure>();
        assert_send_sync::<crate::perturbation::PerturbationParams>();
        assert_send_sync::<crate::interlace::TwoSpectraProblem>();
        assert_send_sync::<crate::inverse::InverseSolution>();
        assert_send_sync::<crate::mass_spring::MassSpringSystem>();
        assert_send_sync::<crate::isospectral::FamilyMember>();
    }

    #[test]
    fn preserves_order() {
        let out = map_vec((0..100).collect::<Vec<i64>>(), |x| x * x);
        assert_eq!(out.len(), 100);
        for (i, v) in out.iter().enumerate() {
            assert_eq!(*v, (i as i64) * (i as i64));
        }
    }
}
