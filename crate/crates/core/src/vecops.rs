//! Dense slice helpers shared by the solver pieces.

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub(crate) fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

#[inline]
pub(crate) fn norm(a: &[f64]) -> f64 {
    libm::sqrt(norm_sq(a))
}

#[inline]
pub(crate) fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| if v.abs() > m { v.abs() } else { m })
}

/// `out = a - b`
#[inline]
pub(crate) fn sub_into(a: &[f64], b: &[f64], out: &mut [f64]) {
    for ((o, x), y) in out.iter_mut().zip(a).zip(b) {
        *o = x - y;
    }
}

/// `out = x + t * d`
#[inline]
pub(crate) fn step_into(x: &[f64], t: f64, d: &[f64], out: &mut [f64]) {
    for ((o, xi), di) in out.iter_mut().zip(x).zip(d) {
        *o = xi + t * di;
    }
}

pub(crate) fn all_finite(a: &[f64]) -> bool {
    a.iter().all(|v| v.is_finite())
}
