use std::cmp::Ordering;

use num_traits::{FromPrimitive, Num};

use super::MetricError;

/// Small-sample corrected Gini coefficient,
/// `n/(n-1) * sum_i sum_j |x_i - x_j| / (2 n^2 mean)`.
///
/// Evaluated in O(n log n) from the order statistics: with `x` sorted
/// ascending the double sum equals `2 * sum_k (n-1-2k) (x[n-1-k] - x[k])`
/// over the lower half, so the whole expression reduces to that sum divided
/// by `(n-1) * sum(x)`. All terms are non-negative, so equal inputs give an
/// exact zero.
///
/// Generic over any ordered numeric type, including exact rationals. An
/// all-zero input returns zero.
pub fn gini<T>(values: &[T]) -> Result<T, MetricError>
where
    T: Num + PartialOrd + Clone + FromPrimitive,
{
    let n = values.len();
    if n < 2 {
        return Err(MetricError::TooFewValues(n));
    }
    for (index, v) in values.iter().enumerate() {
        // NaN and infinities are the only values with v - v != 0.
        if v.clone() - v.clone() != T::zero() {
            return Err(MetricError::NonFiniteValue { index });
        }
        if *v < T::zero() {
            return Err(MetricError::NegativeValue { index });
        }
    }

    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    let total = sorted.iter().cloned().fold(T::zero(), |acc, v| acc + v);
    if total == T::zero() {
        return Ok(T::zero());
    }

    let mut weighted = T::zero();
    for k in 0..n / 2 {
        let coeff = T::from_usize(n - 1 - 2 * k).expect("group count fits the scalar type");
        weighted = weighted + coeff * (sorted[n - 1 - k].clone() - sorted[k].clone());
    }
    let denom = T::from_usize(n - 1).expect("group count fits the scalar type") * total;
    let g = weighted / denom;
    Ok(if g > T::one() { T::one() } else { g })
}

/// Sums `counts` over the parts of `partition`.
///
/// Regrouping can hide dispersion: `{5, 5, 10}` has a corrected Gini of
/// 0.25, but merging the first two parts gives `{10, 10}` whose Gini is 0.
/// Any Gini-based figure should therefore be reported together with the
/// grouping variables and group sizes it was computed over.
pub fn merge_counts<T>(counts: &[T], partition: &[Vec<usize>]) -> Result<Vec<T>, MetricError>
where
    T: Num + Clone,
{
    let mut used = vec![false; counts.len()];
    for part in partition {
        for &i in part {
            match used.get_mut(i) {
                None => {
                    return Err(MetricError::InvalidPartition(format!(
                        "index {i} out of range for {} counts",
                        counts.len()
                    )))
                }
                Some(true) => {
                    return Err(MetricError::InvalidPartition(format!(
                        "index {i} appears twice"
                    )))
                }
                Some(slot) => *slot = true,
            }
        }
    }
    if let Some(i) = used.iter().position(|u| !u) {
        return Err(MetricError::InvalidPartition(format!(
            "index {i} not covered"
        )));
    }
    Ok(partition
        .iter()
        .map(|part| {
            part.iter()
                .fold(T::zero(), |acc, &i| acc + counts[i].clone())
        })
        .collect())
}
