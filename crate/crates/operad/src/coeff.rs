use std::fmt;
use std::hash::Hash;
use num_traits::{FromPrimitive, Num, Signed};

/// Coefficient field for operad elements. Exact arithmetic is assumed:
/// `Eq` rules out floating point, and division must be exact.
pub trait Coefficient:
    Clone + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync + Num + Signed + FromPrimitive
{
}

impl<T> Coefficient for T where
    T: Clone + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync + Num + Signed + FromPrimitive
{
}
