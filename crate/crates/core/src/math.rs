//! Float helpers routed through `libm` so results are identical with and
//! without `std`.

pub(crate) fn round(x: f64) -> f64 {
    libm::round(x)
}

pub(crate) fn floor(x: f64) -> f64 {
    libm::floor(x)
}

pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}
