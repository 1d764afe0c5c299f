//! Empty library target; this package only carries benchmarks.
