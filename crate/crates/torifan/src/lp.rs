//! Exact linear feasibility over the rationals.
//!
//! A small Phase-I simplex with Bland's rule: no floats, no tolerances, and
//! guaranteed termination. This is enough for the two questions the rest of
//! the crate asks: "is this point a nonnegative combination of those vectors"
//! and "does this system of linear constraints on a free vector have a
//! solution".

use num_traits::{One, Zero};

use crate::lattice::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Eq,
    Ge,
    Le,
}

#[derive(Debug, Clone)]
pub struct LinCon {
    pub coeffs: Vec<Rat>,
    pub op: Op,
    pub rhs: Rat,
}

impl LinCon {
    pub fn new(coeffs: Vec<Rat>, op: Op, rhs: Rat) -> Self {
        LinCon { coeffs, op, rhs }
    }
}

/// Solves {x ≥ 0 : A·x = b}. Rows with negative b are negated first.
/// Returns a feasible x when one exists.
fn phase1(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    if m == 0 {
        return Some(vec![Rat::zero(); n]);
    }
    // tableau: n structural columns, m artificial columns, rhs column
    let width = n + m + 1;
    let mut tab: Vec<Vec<Rat>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = vec![Rat::zero(); width];
        let flip = b[i] < Rat::zero();
        for j in 0..n {
            row[j] = if flip { -a[i][j].clone() } else { a[i][j].clone() };
        }
        row[n + i] = Rat::one();
        row[width - 1] = if flip { -b[i].clone() } else { b[i].clone() };
        tab.push(row);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    // objective row: minimize sum of artificials, written in reduced form
    let mut obj = vec![Rat::zero(); width];
    for row in &tab {
        for j in 0..width {
            if j < n || j == width - 1 {
                obj[j] = &obj[j] - &row[j];
            }
        }
    }
    loop {
        // Bland: entering column = smallest index with negative reduced cost
        let Some(enter) = (0..n + m).find(|&j| obj[j] < Rat::zero()) else {
            break;
        };
        // leaving row: minimum ratio, ties by smallest basis variable
        let mut leave: Option<usize> = None;
        for i in 0..m {
            if tab[i][enter] > Rat::zero() {
                let better = match leave {
                    None => true,
                    Some(l) => {
                        let r_new = &tab[i][width - 1] / &tab[i][enter];
                        let r_old = &tab[l][width - 1] / &tab[l][enter];
                        r_new < r_old || (r_new == r_old && basis[i] < basis[l])
                    }
                };
                if better {
                    leave = Some(i);
                }
            }
        }
        let Some(leave) = leave else {
            // unbounded direction in Phase-I cannot occur: objective is bounded below by 0
            unreachable!("phase-1 objective unbounded");
        };
        pivot(&mut tab, &mut obj, leave, enter);
        basis[leave] = enter;
    }
    if obj[width - 1] < Rat::zero() {
        return None;
    }
    let mut x = vec![Rat::zero(); n];
    for i in 0..m {
        if basis[i] < n {
            x[basis[i]] = tab[i][width - 1].clone();
        }
    }
    Some(x)
}

fn pivot(tab: &mut [Vec<Rat>], obj: &mut [Rat], leave: usize, enter: usize) {
    let width = obj.len();
    let inv = tab[leave][enter].recip();
    for j in 0..width {
        tab[leave][j] = &tab[leave][j] * &inv;
    }
    for i in 0..tab.len() {
        if i != leave && !tab[i][enter].is_zero() {
            let f = tab[i][enter].clone();
            for j in 0..width {
                let s = &tab[leave][j] * &f;
                tab[i][j] = &tab[i][j] - &s;
            }
        }
    }
    if !obj[enter].is_zero() {
        let f = obj[enter].clone();
        for j in 0..width {
            let s = &tab[leave][j] * &f;
            obj[j] = &obj[j] - &s;
        }
    }
}

/// Coefficients λ ≥ 0 with Σ λ_i·vectors_i = target, if any exist.
pub fn nonneg_combination(vectors: &[Vec<Rat>], target: &[Rat]) -> Option<Vec<Rat>> {
    if vectors.is_empty() {
        return if target.iter().all(|t| t.is_zero()) { Some(Vec::new()) } else { None };
    }
    let d = target.len();
    let a: Vec<Vec<Rat>> = (0..d).map(|r| vectors.iter().map(|v| v[r].clone()).collect()).collect();
    phase1(&a, target)
}

/// A solution of the constraint system over a free (sign-unrestricted) vector
/// of length `n`, if any exists. Uses the split x = u − v with u, v ≥ 0.
pub fn feasible_free(n: usize, cons: &[LinCon]) -> Option<Vec<Rat>> {
    if cons.is_empty() {
        return Some(vec![Rat::zero(); n]);
    }
    let mut a = Vec::with_capacity(cons.len());
    let mut b = Vec::with_capacity(cons.len());
    let slacks = cons.iter().filter(|c| c.op != Op::Eq).count();
    let mut slack_at = 0;
    for con in cons {
        assert_eq!(con.coeffs.len(), n);
        let mut row = vec![Rat::zero(); 2 * n + slacks];
        for j in 0..n {
            row[j] = con.coeffs[j].clone();
            row[n + j] = -con.coeffs[j].clone();
        }
        match con.op {
            Op::Eq => {}
            Op::Ge => {
                row[2 * n + slack_at] = -Rat::one();
                slack_at += 1;
            }
            Op::Le => {
                row[2 * n + slack_at] = Rat::one();
                slack_at += 1;
            }
        }
        a.push(row);
        b.push(con.rhs.clone());
    }
    let sol = phase1(&a, &b)?;
    Some((0..n).map(|j| &sol[j] - &sol[n + j]).collect())
}
