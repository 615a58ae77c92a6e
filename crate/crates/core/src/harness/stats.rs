//! Summaries over result rows.

use std::collections::BTreeMap;

use crate::harness::record::ResultRow;

/// Median of a non-empty sample; the mean of the two central values for even sizes.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len().is_multiple_of(2) {
        (v[mid - 1] + v[mid]) / 2.0
    } else {
        v[mid]
    })
}

/// Groups rows by `key` and takes the median of `value` in each group.
pub fn median_by<K: Ord>(
    rows: &[ResultRow],
    key: impl Fn(&ResultRow) -> K,
    value: impl Fn(&ResultRow) -> f64,
) -> BTreeMap<K, f64> {
    let mut groups: BTreeMap<K, Vec<f64>> = BTreeMap::new();
    for r in rows {
        groups.entry(key(r)).or_default().push(value(r));
    }
    groups
        .into_iter()
        .map(|(k, v)| (k, median(&v).expect("groups are non-empty")))
        .collect()
}
