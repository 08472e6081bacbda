//! Exact linear feasibility: does `A y = b, y ≥ 0` have a solution?
//!
//! Phase one of the simplex method on a dense rational tableau with Bland's
//! rule, so it terminates on degenerate problems. Problem sizes in this crate
//! are a few hundred columns at most.

use num_traits::{Signed, Zero};

use crate::rational::{Point, Rational};

pub fn feasible(a: &[Vec<Rational>], b: &[Rational]) -> bool {
    let m = a.len();
    if m == 0 {
        return true;
    }
    let n = a[0].len();
    let width = n + m + 1;
    let rhs = width - 1;

    // Rows normalised to b ≥ 0, with one artificial column per row.
    let mut tab: Vec<Vec<Rational>> = Vec::with_capacity(m);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        let flip = bi.is_negative();
        let mut t = vec![Rational::zero(); width];
        for (j, v) in row.iter().enumerate() {
            t[j] = if flip { -v.clone() } else { v.clone() };
        }
        t[n + i] = Rational::from_integer(1.into());
        t[rhs] = if flip { -bi.clone() } else { bi.clone() };
        tab.push(t);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Objective row for "minimise the sum of artificials", priced out.
    let mut obj = vec![Rational::zero(); width];
    for t in &tab {
        for j in 0..n {
            obj[j] -= &t[j];
        }
        obj[rhs] -= &t[rhs];
    }

    loop {
        let Some(enter) = (0..width - 1).find(|&j| obj[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for (i, t) in tab.iter().enumerate() {
            if t[enter].is_positive() {
                let ratio = &t[rhs] / &t[enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((row, _)) = leave else {
            // Unbounded phase-one objective cannot happen; treat as infeasible.
            return false;
        };
        pivot(&mut tab, &mut obj, row, enter);
        basis[row] = enter;
    }
    obj[rhs].is_zero()
}

fn pivot(tab: &mut [Vec<Rational>], obj: &mut [Rational], row: usize, col: usize) {
    let lead = tab[row][col].clone();
    for x in tab[row].iter_mut() {
        *x /= &lead;
    }
    let prow = tab[row].clone();
    for (i, t) in tab.iter_mut().enumerate() {
        if i != row && !t[col].is_zero() {
            let f = t[col].clone();
            for (x, p) in t.iter_mut().zip(&prow) {
                *x -= &f * p;
            }
        }
    }
    if !obj[col].is_zero() {
        let f = obj[col].clone();
        for (x, p) in obj.iter_mut().zip(&prow) {
            *x -= &f * p;
        }
    }
}

/// Is `x` a convex combination of `points`?
pub fn in_convex_hull(points: &[Point], x: &[Rational]) -> bool {
    if points.is_empty() {
        return false;
    }
    let d = x.len();
    let mut a: Vec<Vec<Rational>> = (0..d).map(|i| points.iter().map(|p| p[i].clone()).collect()).collect();
    a.push(vec![Rational::from_integer(1.into()); points.len()]);
    let mut b: Vec<Rational> = x.to_vec();
    b.push(Rational::from_integer(1.into()));
    feasible(&a, &b)
}
