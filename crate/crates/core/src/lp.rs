//! Exact-rational two-phase primal simplex with Bland's anti-cycling rule.
//! All variables are implicitly nonnegative.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{one, zero, Rational};

pub const PIVOT_GUARD: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub rel: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn le(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Self {
            coeffs,
            rel: Relation::Le,
            rhs,
        }
    }

    pub fn eq(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Self {
            coeffs,
            rel: Relation::Eq,
            rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpResult {
    Optimal { value: Rational, point: Vec<Rational> },
    Unbounded,
    Infeasible,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    obj: Vec<Rational>,
    basis: Vec<usize>,
    ncols: usize,
    pivots: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rational {
        &self.rows[i][self.ncols]
    }

    fn pivot(&mut self, r: usize, c: usize) -> Result<()> {
        self.pivots += 1;
        if self.pivots > PIVOT_GUARD {
            return Err(Error::LpCycling(PIVOT_GUARD));
        }
        let inv = one() / &self.rows[r][c];
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let prow = self.rows[r].clone();
        let eliminate = |row: &mut Vec<Rational>| {
            let f = row[c].clone();
            if f.is_zero() {
                return;
            }
            for (x, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.obj);
        self.basis[r] = c;
        Ok(())
    }

    /// Runs the simplex loop on the current objective row (maximization,
    /// `obj[j] < 0` means `j` improves). Returns `false` when unbounded.
    fn run(&mut self, allowed: &dyn Fn(usize) -> bool) -> Result<bool> {
        loop {
            let Some(enter) = (0..self.ncols).find(|&j| allowed(j) && self.obj[j].is_negative()) else {
                return Ok(true);
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((leave, _)) = best else {
                return Ok(false);
            };
            self.pivot(leave, enter)?;
        }
    }

    fn set_objective(&mut self, costs: &[Rational]) {
        let mut obj: Vec<Rational> = (0..=self.ncols)
            .map(|j| costs.get(j).map_or_else(zero, |c| -c.clone()))
            .collect();
        for (i, &b) in self.basis.iter().enumerate() {
            let f = obj[b].clone();
            if !f.is_zero() {
                for (x, p) in obj.iter_mut().zip(&self.rows[i]) {
                    *x -= &f * p;
                }
            }
        }
        self.obj = obj;
    }
}

/// Maximizes `objective · x` subject to `constraints` and `x >= 0`.
pub fn maximize(objective: &[Rational], constraints: &[Constraint]) -> Result<LpResult> {
    let n = objective.len();
    let m = constraints.len();
    let n_slack = constraints.iter().filter(|c| c.rel == Relation::Le).count();
    let needs_art: Vec<bool> = constraints
        .iter()
        .map(|c| c.rel == Relation::Eq || c.rhs.is_negative())
        .collect();
    let n_art = needs_art.iter().filter(|&&b| b).count();
    let ncols = n + n_slack + n_art;
    let art_start = n + n_slack;

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let (mut slack, mut art) = (n, art_start);
    for (k, c) in constraints.iter().enumerate() {
        let sign = if c.rhs.is_negative() { -one() } else { one() };
        let mut row = vec![zero(); ncols + 1];
        for (j, a) in c.coeffs.iter().enumerate() {
            row[j] = a * &sign;
        }
        row[ncols] = &c.rhs * &sign;
        let mut basic = None;
        if c.rel == Relation::Le {
            row[slack] = sign.clone();
            if !needs_art[k] {
                basic = Some(slack);
            }
            slack += 1;
        }
        if needs_art[k] {
            row[art] = one();
            basic = Some(art);
            art += 1;
        }
        rows.push(row);
        basis.push(basic.expect("every row has a basic variable"));
    }
    let mut t = Tableau {
        rows,
        obj: Vec::new(),
        basis,
        ncols,
        pivots: 0,
    };

    if n_art > 0 {
        let mut costs = vec![zero(); ncols];
        for c in costs.iter_mut().skip(art_start) {
            *c = -one();
        }
        t.set_objective(&costs);
        t.run(&|_| true)?;
        if t.obj[ncols].is_negative() {
            return Ok(LpResult::Infeasible);
        }
        // Drive zero-level artificials out of the basis where possible.
        for i in 0..t.rows.len() {
            if t.basis[i] >= art_start {
                if let Some(j) = (0..art_start).find(|&j| !t.rows[i][j].is_zero()) {
                    t.pivot(i, j)?;
                }
            }
        }
    }

    t.set_objective(objective);
    if !t.run(&|j| j < art_start)? {
        return Ok(LpResult::Unbounded);
    }
    let mut point = vec![zero(); n];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < n {
            point[b] = t.rhs(i).clone();
        }
    }
    Ok(LpResult::Optimal {
        value: t.obj[ncols].clone(),
        point,
    })
}

/// Whether the constraints admit a point.
pub fn feasible_point(nvars: usize, constraints: &[Constraint]) -> Result<Option<Vec<Rational>>> {
    match maximize(&vec![zero(); nvars], constraints)? {
        LpResult::Optimal { point, .. } => Ok(Some(point)),
        LpResult::Infeasible => Ok(None),
        LpResult::Unbounded => unreachable!("zero objective is bounded"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn textbook_maximum() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 → 36 at (2, 6).
        let cs = vec![
            Constraint::le(v(&[1, 0]), int(4)),
            Constraint::le(v(&[0, 2]), int(12)),
            Constraint::le(v(&[3, 2]), int(18)),
        ];
        match maximize(&v(&[3, 5]), &cs).unwrap() {
            LpResult::Optimal { value, point } => {
                assert_eq!(value, int(36));
                assert_eq!(point, v(&[2, 6]));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn equality_and_negative_rhs() {
        // max x subject to x + y = 1, -x <= -1/2 → x = 1.
        let cs = vec![
            Constraint::eq(v(&[1, 1]), int(1)),
            Constraint::le(v(&[-1, 0]), rat(-1, 2)),
        ];
        match maximize(&v(&[1, 0]), &cs).unwrap() {
            LpResult::Optimal { value, .. } => assert_eq!(value, int(1)),
            other => panic!("{other:?}"),
        }
        let cs = vec![
            Constraint::eq(v(&[1, 1]), int(1)),
            Constraint::le(v(&[-1, 0]), int(-2)),
        ];
        assert_eq!(maximize(&v(&[1, 0]), &cs).unwrap(), LpResult::Infeasible);
    }

    #[test]
    fn unbounded_detected() {
        let cs = vec![Constraint::le(v(&[1, -1]), int(1))];
        assert_eq!(maximize(&v(&[0, 1]), &cs).unwrap(), LpResult::Unbounded);
    }

    #[test]
    fn degenerate_problem_terminates() {
        // Classic cycling example for the largest-coefficient rule.
        let cs = vec![
            Constraint::le(vec![rat(1, 2), rat(-11, 2), rat(-5, 2), int(9)], int(0)),
            Constraint::le(vec![rat(1, 2), rat(-3, 2), rat(-1, 2), int(1)], int(0)),
            Constraint::le(v(&[1, 0, 0, 0]), int(1)),
        ];
        match maximize(&v(&[10, -57, -9, -24]), &cs).unwrap() {
            LpResult::Optimal { value, .. } => assert_eq!(value, int(1)),
            other => panic!("{other:?}"),
        }
    }
}
