//! Superposition of linear pieces supported on overlapping intervals.
//!
//! Used by mixtures and by the wrap onto the circle: both reduce to summing a
//! bag of `(lo, hi, f)` segments over the common refinement of their
//! endpoints.

use std::cmp::Ordering;

use crate::density::Linear;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub(crate) struct Segment {
    pub lo: Scalar,
    pub hi: Scalar,
    pub f: Linear,
}

/// Sorts points and merges those that may coincide. Returns the merged
/// points and, for every input, the index of its group.
pub(crate) fn group_points(points: &[Scalar]) -> (Vec<Scalar>, Vec<usize>) {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| points[i].midpoint().cmp(&points[j].midpoint()));
    let mut reps: Vec<Scalar> = Vec::new();
    let mut group = vec![0; points.len()];
    for &i in &order {
        let p = &points[i];
        match reps.last_mut() {
            Some(last) if last.coincides(p) => {
                if !last.is_exact() {
                    *last = if p.is_exact() { p.clone() } else { last.hull(p) };
                }
            }
            _ => reps.push(p.clone()),
        }
        group[i] = reps.len() - 1;
    }
    (reps, group)
}

/// Sums all segments over the refinement of their endpoints. Gaps become
/// zero pieces. The output is not merged or trimmed.
pub(crate) fn superpose(segments: &[Segment]) -> (Vec<Scalar>, Vec<Linear>) {
    let mut points = Vec::with_capacity(segments.len() * 2);
    for s in segments {
        points.push(s.lo.clone());
        points.push(s.hi.clone());
    }
    let (breaks, group) = group_points(&points);
    if breaks.len() < 2 {
        return (breaks, Vec::new());
    }
    let mut pieces = vec![Linear::zero(); breaks.len() - 1];
    for (k, s) in segments.iter().enumerate() {
        let (a, b) = (group[2 * k], group[2 * k + 1]);
        for piece in pieces.iter_mut().take(b).skip(a) {
            *piece = &*piece + &s.f;
        }
    }
    (breaks, pieces)
}

/// Merges adjacent pieces with coinciding coefficients.
pub(crate) fn merge_adjacent(breaks: Vec<Scalar>, pieces: Vec<Linear>) -> (Vec<Scalar>, Vec<Linear>) {
    if pieces.is_empty() {
        return (breaks, pieces);
    }
    let mut out_b = vec![breaks[0].clone()];
    let mut out_p: Vec<Linear> = Vec::with_capacity(pieces.len());
    for (i, p) in pieces.into_iter().enumerate() {
        match out_p.last_mut() {
            Some(last) if last.coincides(&p) => {
                if !last.is_exact() || !p.is_exact() {
                    *last = last.hull(&p);
                }
                *out_b.last_mut().unwrap() = breaks[i + 1].clone();
            }
            _ => {
                out_p.push(p);
                out_b.push(breaks[i + 1].clone());
            }
        }
    }
    (out_b, out_p)
}

/// Removes zero pieces at both ends.
pub(crate) fn trim_zeros(mut breaks: Vec<Scalar>, mut pieces: Vec<Linear>) -> (Vec<Scalar>, Vec<Linear>) {
    while pieces.first().is_some_and(Linear::may_be_zero) {
        pieces.remove(0);
        breaks.remove(0);
    }
    while pieces.last().is_some_and(Linear::may_be_zero) {
        pieces.pop();
        breaks.pop();
    }
    if pieces.is_empty() {
        breaks.clear();
    }
    (breaks, pieces)
}

/// Strict increase check for user-supplied breakpoints.
pub(crate) fn check_increasing(breaks: &[Scalar]) -> Result<()> {
    for w in breaks.windows(2) {
        if w[0].compare(&w[1])? != Ordering::Less {
            return Err(Error::UnsortedBreakpoints);
        }
    }
    Ok(())
}
