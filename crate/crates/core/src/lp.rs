//! Exact dense simplex over `BigRational` for `{A x = b, x ≥ 0}`.
//!
//! Bland's rule throughout, so pivoting terminates without cycling. Phase 1
//! either yields a feasible basis or a Farkas vector `y` with `yᵀA ≤ 0` and
//! `yᵀb > 0`; phase 2 optimizes linear objectives from a feasible basis.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub const DEFAULT_PIVOT_LIMIT: usize = 200_000;

type Q = BigRational;

#[derive(Clone, Debug)]
struct Tableau {
    rows: Vec<Vec<Q>>,
    rhs: Vec<Q>,
    basis: Vec<usize>,
    /// Reduced costs for every column and the current objective value.
    cost: Vec<Q>,
    value: Q,
}

impl Tableau {
    fn pivot(&mut self, r: usize, j: usize) {
        let p = self.rows[r][j].clone();
        if !p.is_one() {
            for x in self.rows[r].iter_mut() {
                if !x.is_zero() {
                    *x /= &p;
                }
            }
            self.rhs[r] /= &p;
        }
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][j].is_zero() {
                continue;
            }
            let f = self.rows[i][j].clone();
            for (x, y) in self.rows[i].iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
            self.rhs[i] -= &f * &prhs;
        }
        if !self.cost[j].is_zero() {
            let f = self.cost[j].clone();
            for (x, y) in self.cost.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
            self.value -= &f * &prhs;
        }
        self.basis[r] = j;
    }

    /// Minimizes the loaded objective using columns `< allowed`.
    fn run(&mut self, allowed: usize, budget: &mut usize) -> Result<()> {
        loop {
            let Some(j) = (0..allowed).find(|&j| self.cost[j].is_negative()) else {
                return Ok(());
            };
            let mut best: Option<(usize, Q)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][j];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                best = match best {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        if ratio < br || (ratio == br && self.basis[i] < self.basis[bi]) {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            let Some((r, _)) = best else {
                return Err(Error::Unbounded);
            };
            if *budget == 0 {
                return Err(Error::ResourceLimit("simplex pivot limit reached".into()));
            }
            *budget -= 1;
            self.pivot(r, j);
        }
    }

    /// Loads `min cᵀx` expressed in the current basis.
    fn load_objective(&mut self, c: &[Q]) {
        let width = self.cost.len();
        self.cost = (0..width).map(|j| c.get(j).cloned().unwrap_or_else(Q::zero)).collect();
        self.value = Q::zero();
        for r in 0..self.rows.len() {
            let cb = self.cost[self.basis[r]].clone();
            if cb.is_zero() {
                continue;
            }
            for (x, y) in self.cost.iter_mut().zip(&self.rows[r]) {
                if !y.is_zero() {
                    *x -= &cb * y;
                }
            }
            self.value -= &cb * &self.rhs[r];
        }
    }

    fn point(&self, n: usize) -> Vec<Q> {
        let mut x = vec![Q::zero(); n];
        for (r, &j) in self.basis.iter().enumerate() {
            if j < n {
                x[j] = self.rhs[r].clone();
            }
        }
        x
    }
}

/// Result of phase 1.
#[derive(Clone, Debug)]
pub enum Phase1 {
    Feasible(FeasibleBasis),
    Infeasible(Vec<Q>),
}

/// A feasible basis over the original columns, redundant rows dropped.
#[derive(Clone, Debug)]
pub struct FeasibleBasis {
    tab: Tableau,
    n: usize,
    pivot_limit: usize,
}

impl FeasibleBasis {
    pub fn point(&self) -> Vec<Q> {
        self.tab.point(self.n)
    }

    /// `min cᵀx` (or max) over the feasible region.
    pub fn optimize(&self, c: &[Q], maximize: bool) -> Result<(Q, Vec<Q>)> {
        let mut tab = self.tab.clone();
        let c: Vec<Q> = if maximize { c.iter().map(|x| -x).collect() } else { c.to_vec() };
        tab.load_objective(&c);
        let mut budget = self.pivot_limit;
        tab.run(self.n, &mut budget)?;
        // value tracks −(cᵀx)
        let v = -tab.value.clone();
        Ok((if maximize { -v } else { v }, tab.point(self.n)))
    }
}

/// Phase 1 on `{A x = b, x ≥ 0}` with `A` given densely.
pub fn phase1(a: &[Vec<Q>], b: &[Q], pivot_limit: usize) -> Result<Phase1> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    if b.len() != m || a.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidArgument("ragged constraint matrix".into()));
    }
    let mut sign = vec![Q::one(); m];
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for i in 0..m {
        let flip = b[i].is_negative();
        if flip {
            sign[i] = -Q::one();
        }
        let mut row: Vec<Q> = a[i].iter().map(|x| if flip { -x } else { x.clone() }).collect();
        row.extend((0..m).map(|k| if k == i { Q::one() } else { Q::zero() }));
        rows.push(row);
        rhs.push(if flip { -&b[i] } else { b[i].clone() });
    }
    let width = n + m;
    let mut tab = Tableau { rows, rhs, basis: (n..width).collect(), cost: vec![Q::zero(); width], value: Q::zero() };
    let mut c = vec![Q::zero(); width];
    for x in c.iter_mut().skip(n) {
        *x = Q::one();
    }
    tab.load_objective(&c);
    let mut budget = pivot_limit;
    tab.run(width, &mut budget)?;

    if tab.value.is_negative() {
        // optimum Σ artificials = −value > 0; duals y_i = 1 − d_{n+i}
        let y = (0..m).map(|i| (Q::one() - &tab.cost[n + i]) * &sign[i]).collect();
        return Ok(Phase1::Infeasible(y));
    }

    // Drive zero-level artificials out, dropping rows that cannot pivot.
    let mut r = 0;
    while r < tab.rows.len() {
        if tab.basis[r] >= n {
            match (0..n).find(|&j| !tab.rows[r][j].is_zero()) {
                Some(j) => tab.pivot(r, j),
                None => {
                    tab.rows.remove(r);
                    tab.rhs.remove(r);
                    tab.basis.remove(r);
                    continue;
                }
            }
        }
        r += 1;
    }
    for row in tab.rows.iter_mut() {
        row.truncate(n);
    }
    tab.cost = vec![Q::zero(); n];
    tab.value = Q::zero();
    Ok(Phase1::Feasible(FeasibleBasis { tab, n, pivot_limit }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    fn qs(xs: &[i64]) -> Vec<Q> {
        xs.iter().map(|&x| q(x, 1)).collect()
    }

    fn farkas_holds(a: &[Vec<Q>], b: &[Q], y: &[Q]) -> bool {
        let n = a[0].len();
        let cols_ok = (0..n).all(|j| {
            let s: Q = a.iter().zip(y).map(|(r, yi)| &r[j] * yi).sum();
            !s.is_positive()
        });
        let yb: Q = b.iter().zip(y).map(|(x, yi)| x * yi).sum();
        cols_ok && yb.is_positive()
    }

    #[test]
    fn feasible_point_satisfies_rows() {
        let a = vec![qs(&[1, 1, 0]), qs(&[0, 1, 1])];
        let b = qs(&[1, 1]);
        let Phase1::Feasible(fb) = phase1(&a, &b, DEFAULT_PIVOT_LIMIT).unwrap() else { panic!() };
        let x = fb.point();
        for (row, bi) in a.iter().zip(&b) {
            let s: Q = row.iter().zip(&x).map(|(u, v)| u * v).sum();
            assert_eq!(&s, bi);
        }
        assert!(x.iter().all(|v| !v.is_negative()));
        let (lo, _) = fb.optimize(&qs(&[0, 1, 0]), false).unwrap();
        let (hi, _) = fb.optimize(&qs(&[0, 1, 0]), true).unwrap();
        assert_eq!((lo, hi), (q(0, 1), q(1, 1)));
    }

    #[test]
    fn contradictory_rows_give_certificate() {
        // x0 = 1, x0 = 2 after scaling
        let a = vec![qs(&[1]), vec![q(2, 3)]];
        let b = vec![q(1, 1), q(1, 1)];
        let Phase1::Infeasible(y) = phase1(&a, &b, DEFAULT_PIVOT_LIMIT).unwrap() else { panic!() };
        assert!(farkas_holds(&a, &b, &y));
    }

    #[test]
    fn negative_rhs_and_nonnegativity() {
        // x0 + x1 = −1 has no nonnegative solution
        let a = vec![qs(&[1, 1])];
        let b = qs(&[-1]);
        let Phase1::Infeasible(y) = phase1(&a, &b, DEFAULT_PIVOT_LIMIT).unwrap() else { panic!() };
        assert!(farkas_holds(&a, &b, &y));
    }

    #[test]
    fn redundant_rows_are_dropped() {
        let a = vec![qs(&[1, 1]), qs(&[2, 2]), qs(&[1, 0])];
        let b = qs(&[1, 2, 0]);
        let Phase1::Feasible(fb) = phase1(&a, &b, DEFAULT_PIVOT_LIMIT).unwrap() else { panic!() };
        assert_eq!(fb.point(), qs(&[0, 1]));
        assert_eq!(fb.optimize(&qs(&[0, 1]), true).unwrap().0, q(1, 1));
    }

    #[test]
    fn unbounded_and_limit() {
        let a = vec![qs(&[1, -1])];
        let b = qs(&[0]);
        let Phase1::Feasible(fb) = phase1(&a, &b, DEFAULT_PIVOT_LIMIT).unwrap() else { panic!() };
        assert_eq!(fb.optimize(&qs(&[1, 0]), true).unwrap_err(), Error::Unbounded);
        let a = vec![qs(&[1, 1]), qs(&[1, 2])];
        let b = qs(&[1, 1]);
        assert!(matches!(phase1(&a, &b, 0), Err(Error::ResourceLimit(_))));
    }
}
