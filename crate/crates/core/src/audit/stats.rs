use serde::Serialize;

use crate::Scalar;

/// Order statistics of a sample of finite values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary<T> {
    pub count: usize,
    pub min: T,
    pub max: T,
    pub mean: T,
    pub median: T,
    pub p05: T,
    pub p95: T,
}

impl<T: Scalar> Summary<T> {
    /// `None` for an empty sample. Non-finite entries are skipped.
    pub fn of(values: impl IntoIterator<Item = T>) -> Option<Self> {
        let mut v: Vec<T> = values.into_iter().filter(|x| x.is_finite()).collect();
        if v.is_empty() {
            return None;
        }
        v.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        let sum = v.iter().fold(T::zero(), |acc, &x| acc + x);
        Some(Self {
            count: v.len(),
            min: v[0],
            max: v[v.len() - 1],
            mean: sum / T::from_count(v.len()),
            median: quantile_sorted(&v, T::lit(0.5)),
            p05: quantile_sorted(&v, T::lit(0.05)),
            p95: quantile_sorted(&v, T::lit(0.95)),
        })
    }
}

/// Linear-interpolation quantile (`h = (n-1)q`) of an ascending sample.
/// For `q = 0.5` and even `n` this is the midpoint of the two central values.
pub fn quantile_sorted<T: Scalar>(sorted: &[T], q: T) -> T {
    assert!(!sorted.is_empty(), "quantile of empty sample");
    let h = T::from_count(sorted.len() - 1) * q;
    let lo = h.floor();
    let i = lo.to_usize().unwrap_or(0).min(sorted.len() - 1);
    if i + 1 >= sorted.len() {
        return sorted[i];
    }
    let frac = h - lo;
    sorted[i] + frac * (sorted[i + 1] - sorted[i])
}
