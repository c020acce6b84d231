//! Switch between rayon and plain iterators.
//!
//! Every parallel loop in the crate goes through these macros so the
//! `parallel` feature can be turned off without touching call sites. All
//! reductions are done on collected, index-ordered results so the output does
//! not depend on the schedule.

#[cfg(feature = "parallel")]
macro_rules! iter_maybe_parallel {
    ($e:expr) => {{
        use rayon::iter::IntoParallelIterator;
        ($e).into_par_iter()
    }};
}

#[cfg(not(feature = "parallel"))]
macro_rules! iter_maybe_parallel {
    ($e:expr) => {
        ($e).into_iter()
    };
}

#[cfg(feature = "parallel")]
macro_rules! slice_maybe_parallel {
    ($e:expr) => {{
        use rayon::iter::IntoParallelRefIterator;
        ($e).par_iter()
    }};
}

#[cfg(not(feature = "parallel"))]
macro_rules! slice_maybe_parallel {
    ($e:expr) => {
        ($e).iter()
    };
}

pub(crate) use iter_maybe_parallel;
pub(crate) use slice_maybe_parallel;

/// Number of worker threads the parallel loops will use.
pub fn current_num_threads() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}
