//! Power-series expansion of rational functions with integer coefficients.

/// First `terms` coefficients of numerator/denominator. The denominator must have
/// constant term ±1; otherwise `None`.
pub fn expand_rational(numerator: &[i64], denominator: &[i64], terms: usize) -> Option<Vec<i64>> {
    let d0 = *denominator.first()?;
    if d0 != 1 && d0 != -1 {
        return None;
    }
    let mut out = Vec::with_capacity(terms);
    for k in 0..terms {
        let mut c = numerator.get(k).copied().unwrap_or(0);
        for j in 1..=k.min(denominator.len().saturating_sub(1)) {
            c -= denominator[j] * out[k - j];
        }
        out.push(c * d0);
    }
    Some(out)
}

/// True iff the expansion of numerator/denominator agrees with `ranks` term by term.
pub fn verify_rational_series(ranks: &[u64], numerator: &[i64], denominator: &[i64]) -> bool {
    match expand_rational(numerator, denominator, ranks.len()) {
        Some(series) => series
            .iter()
            .zip(ranks)
            .all(|(&s, &r)| s >= 0 && s as u64 == r),
        None => false,
    }
}

/// Coefficients of a product of polynomials.
pub fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// p^k.
pub fn poly_pow(p: &[i64], k: usize) -> Vec<i64> {
    (0..k).fold(vec![1], |acc, _| poly_mul(&acc, p))
}
