//! Fixtures shared by the criterion benches.

use kmspin_core::{parse_gcm, realization, Gcm, Realization};

pub fn fixture(name: &str) -> (Gcm, Realization) {
    let g = parse_gcm(name).expect("known diagram");
    let r = realization(&g).expect("realizable");
    (g, r)
}
