//! Exact phase-one simplex for `A w = b, w >= 0`.
//!
//! Dense tableau over big rationals with one artificial variable per row
//! and Bland's smallest-index rule for both the entering and the leaving
//! variable, so the method terminates without cycling. When the artificial
//! objective cannot be driven to zero, the final simplex multipliers form
//! a Farkas vector `y` with `yᵀA <= 0` and `yᵀb > 0`.

use num_traits::{One, Signed, Zero};

use crate::scalar::Rational;

#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility {
    /// A basic feasible point.
    Feasible(Vec<Rational>),
    /// Farkas vector `y`, one entry per constraint row.
    Infeasible(Vec<Rational>),
}

/// Solves the phase-one problem for `rows · w = rhs`, `w >= 0`.
///
/// Every row must have the same length, and `rhs` must be nonnegative
/// (rows with negative right-hand side should be negated by the caller).
pub fn phase_one(rows: &[Vec<Rational>], rhs: &[Rational]) -> Feasibility {
    let m = rows.len();
    assert_eq!(m, rhs.len(), "one right-hand side per row");
    let n = rows.first().map_or(0, Vec::len);
    assert!(rows.iter().all(|r| r.len() == n), "ragged constraint matrix");
    assert!(rhs.iter().all(|b| !b.is_negative()), "right-hand side must be nonnegative");

    let width = n + m;
    let mut tableau: Vec<Vec<Rational>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = Vec::with_capacity(width);
            row.extend(r.iter().cloned());
            row.extend((0..m).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    let mut values: Vec<Rational> = rhs.to_vec();
    let mut basis: Vec<usize> = (n..width).collect();

    // Reduced costs of min Σ artificials with the all-artificial basis.
    let mut reduced: Vec<Rational> = (0..width)
        .map(|j| {
            if j < n {
                -tableau.iter().fold(Rational::zero(), |acc, row| acc + &row[j])
            } else {
                Rational::zero()
            }
        })
        .collect();

    while let Some(enter) = reduced.iter().position(Signed::is_negative) {
        // Ratio test; ties go to the smallest basic variable index.
        let mut leave: Option<(usize, Rational)> = None;
        for (i, row) in tableau.iter().enumerate() {
            if !row[enter].is_positive() {
                continue;
            }
            let ratio = &values[i] / &row[enter];
            let better = match &leave {
                None => true,
                Some((l, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*l]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        // The phase-one objective is bounded below by zero, so some row
        // always admits the entering column.
        let (pivot_row, _) = leave.expect("phase-one objective is bounded");
        pivot(&mut tableau, &mut values, &mut reduced, pivot_row, enter);
        basis[pivot_row] = enter;
    }

    let objective = basis
        .iter()
        .zip(&values)
        .filter(|(&j, _)| j >= n)
        .fold(Rational::zero(), |acc, (_, v)| acc + v);

    if objective.is_zero() {
        let mut point = vec![Rational::zero(); n];
        for (&j, v) in basis.iter().zip(&values) {
            if j < n {
                point[j] = v.clone();
            }
        }
        Feasibility::Feasible(point)
    } else {
        // Artificial i has cost 1 and column e_i: its reduced cost is 1 - y_i.
        let farkas = (0..m).map(|i| Rational::one() - &reduced[n + i]).collect();
        Feasibility::Infeasible(farkas)
    }
}

fn pivot(
    tableau: &mut [Vec<Rational>],
    values: &mut [Rational],
    reduced: &mut [Rational],
    pivot_row: usize,
    enter: usize,
) {
    let p = tableau[pivot_row][enter].clone();
    for v in tableau[pivot_row].iter_mut() {
        *v = &*v / &p;
    }
    values[pivot_row] = &values[pivot_row] / &p;

    let pivot_vals = tableau[pivot_row].clone();
    let pivot_rhs = values[pivot_row].clone();
    for (i, row) in tableau.iter_mut().enumerate() {
        if i == pivot_row || row[enter].is_zero() {
            continue;
        }
        let factor = row[enter].clone();
        for (v, pv) in row.iter_mut().zip(&pivot_vals) {
            if !pv.is_zero() {
                *v = &*v - &factor * pv;
            }
        }
        values[i] = &values[i] - &factor * &pivot_rhs;
    }
    let factor = reduced[enter].clone();
    if !factor.is_zero() {
        for (v, pv) in reduced.iter_mut().zip(&pivot_vals) {
            if !pv.is_zero() {
                *v = &*v - &factor * pv;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn rows(data: &[&[i64]]) -> Vec<Vec<Rational>> {
        data.iter().map(|r| r.iter().map(|&v| q(v, 1)).collect()).collect()
    }

    fn apply(rows: &[Vec<Rational>], w: &[Rational]) -> Vec<Rational> {
        rows.iter()
            .map(|r| r.iter().zip(w).fold(Rational::zero(), |acc, (a, x)| acc + a * x))
            .collect()
    }

    #[test]
    fn finds_feasible_point() {
        let a = rows(&[&[1, 1, 0], &[0, 1, 1]]);
        let b = vec![q(1, 2), q(3, 4)];
        match phase_one(&a, &b) {
            Feasibility::Feasible(w) => {
                assert!(w.iter().all(|v| !v.is_negative()));
                assert_eq!(apply(&a, &w), b);
            }
            other => panic!("expected feasible, got {other:?}"),
        }
    }

    #[test]
    fn redundant_rows_are_fine() {
        let a = rows(&[&[1, 1], &[1, 1], &[2, 2]]);
        let b = vec![q(1, 1), q(1, 1), q(2, 1)];
        assert!(matches!(phase_one(&a, &b), Feasibility::Feasible(_)));
    }

    #[test]
    fn infeasible_system_yields_farkas_vector() {
        // w1 + w2 = 1 and w1 + w2 = 2 cannot both hold.
        let a = rows(&[&[1, 1], &[1, 1]]);
        let b = vec![q(1, 1), q(2, 1)];
        let Feasibility::Infeasible(y) = phase_one(&a, &b) else {
            panic!("expected infeasible");
        };
        for j in 0..2 {
            let col = a.iter().zip(&y).fold(Rational::zero(), |acc, (r, yi)| acc + &r[j] * yi);
            assert!(col <= Rational::zero());
        }
        let yb = b.iter().zip(&y).fold(Rational::zero(), |acc, (bi, yi)| acc + bi * yi);
        assert!(yb > Rational::zero());
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale-style degenerate system; Bland's rule must not cycle.
        let a = vec![
            vec![q(1, 4), q(-8, 1), q(-1, 1), q(9, 1), q(1, 1), q(0, 1), q(0, 1)],
            vec![q(1, 2), q(-12, 1), q(-1, 2), q(3, 1), q(0, 1), q(1, 1), q(0, 1)],
            vec![q(0, 1), q(0, 1), q(1, 1), q(0, 1), q(0, 1), q(0, 1), q(1, 1)],
        ];
        let b = vec![q(0, 1), q(0, 1), q(1, 1)];
        let Feasibility::Feasible(w) = phase_one(&a, &b) else {
            panic!("expected feasible");
        };
        assert_eq!(apply(&a, &w), b);
    }
}
