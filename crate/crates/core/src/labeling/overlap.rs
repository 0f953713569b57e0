use std::cmp::Ordering;

use crate::model::Span;

/// Shared and combined token counts of two spans.
pub(crate) fn intersection_union(a: Span, b: Span) -> (usize, usize) {
    let inter = a.end().min(b.end()).saturating_sub(a.start().max(b.start()));
    (inter, a.len() + b.len() - inter)
}

/// Token-level Jaccard similarity of two spans.
pub fn overlap(mention: Span, candidate: Span) -> f64 {
    let (inter, union) = intersection_union(mention, candidate);
    inter as f64 / union as f64
}

/// Compares two overlap scores exactly, as fractions `i/u`.
pub(crate) fn cmp_overlap((i1, u1): (usize, usize), (i2, u2): (usize, usize)) -> Ordering {
    (i1 * u2).cmp(&(i2 * u1))
}
