pub mod chains;
pub mod compress;
pub mod degrees;
pub mod grid;
pub mod scd;
pub mod search;
pub mod supersat;

use chainlattice::supersat::format_ratio;
use num_rational::{BigRational, Ratio};

pub fn ratio(v: &BigRational) -> String {
    format_ratio(v)
}

pub fn ratio_u64(v: &Ratio<u64>) -> String {
    if *v.denom() == 1 {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}
