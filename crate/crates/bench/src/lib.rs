//! Empty library target; this crate exists only for its benches.
