pub fn norm_sq(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

pub fn norm(v: &[f64]) -> f64 {
    libm::sqrt(norm_sq(v))
}

/// `|v|^p` with the Euclidean norm; exact squares at `p = 2`.
pub fn norm_pow(v: &[f64], p: f64) -> f64 {
    if p == 2.0 {
        norm_sq(v)
    } else {
        pow_nonneg(norm(v), p)
    }
}

pub fn pow_nonneg(x: f64, p: f64) -> f64 {
    if p == 2.0 {
        x * x
    } else if p == 1.0 {
        x
    } else {
        libm::pow(x, p)
    }
}
