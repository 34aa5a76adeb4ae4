//! Big integers and rationals travel as decimal strings.

use std::fmt::Display;

use serde::Serializer;

pub fn decimal<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}
