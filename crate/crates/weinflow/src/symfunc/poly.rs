//! Elementary symmetric polynomials and their index exclusions.
//!
//! The derivative calculus of every catalog function reduces to values of
//! sigma_k over the full eigenvalue list and over the list with one or two
//! indices removed, so those three evaluations are the entire interface.

/// All of e_0 .. e_m of `xs` in one pass.
///
/// Downward update so each entry of `xs` enters every coefficient exactly
/// once; cost O(len * m), no cancellation beyond what the polynomial itself
/// demands.
pub fn elem_all(xs: &[f64], m: usize) -> Vec<f64> {
    let mut e = vec![0.0; m + 1];
    e[0] = 1.0;
    for &x in xs {
        for j in (1..=m).rev() {
            e[j] += x * e[j - 1];
        }
    }
    e
}

/// sigma_k(xs) with the usual conventions: 1 for k == 0, 0 for k < 0 or
/// k > len. Signed k so callers can write sigma_{k-2} without guarding.
pub fn elem(xs: &[f64], k: i64) -> f64 {
    if k < 0 {
        return 0.0;
    }
    let k = k as usize;
    if k > xs.len() {
        return 0.0;
    }
    elem_all(xs, k)[k]
}

/// sigma_k of `xs` with the listed indices removed.
///
/// Recomputes over the filtered slice instead of dividing out factors, which
/// stays exact when an excluded entry is zero or tiny.
pub fn elem_excl(xs: &[f64], k: i64, skip: &[usize]) -> f64 {
    let kept: Vec<f64> = xs
        .iter()
        .enumerate()
        .filter(|(i, _)| !skip.contains(i))
        .map(|(_, &x)| x)
        .collect();
    elem(&kept, k)
}

/// Binomial coefficient as f64, multiplicative form.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}
