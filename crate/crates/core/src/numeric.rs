/// Floor with a snap-to-integer guard: values within `1e-12` (relative to
/// `max(1, |x|)`) of an integer are treated as that integer, so that
/// `2.9999999999998` floors to 3.
pub(crate) fn snapped_floor(x: f64) -> f64 {
    let nearest = libm::round(x);
    if libm::fabs(x - nearest) <= SNAP * f64::max(1.0, libm::fabs(x)) {
        nearest
    } else {
        libm::floor(x)
    }
}

pub(crate) const SNAP: f64 = 1e-12;
