use crate::error::{Error, Result};
use crate::poly::Polynomial;

use super::{Budget, GroebnerBasis};

/// Dimension of a module's support. The zero module has empty support and
/// is reported as dimension 0 with `zero_module` set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ModuleDimension {
    pub dim: usize,
    pub zero_module: bool,
}

/// `dim P/A` for an ideal basis: the largest set of variables `S` such that
/// no leading monomial involves only variables from `S`.
///
/// The unit ideal yields 0.
pub fn krull_dimension(gb: &GroebnerBasis) -> usize {
    let nvars = gb.ring().nvars();
    let supports: Vec<Vec<bool>> = gb
        .elements()
        .iter()
        .map(|e| {
            let m = &e.leading_term().unwrap().mon;
            m.exponents().iter().map(|&x| x > 0).collect()
        })
        .collect();
    if supports.iter().any(|s| s.iter().all(|&b| !b)) {
        return 0;
    }
    let mut chosen = vec![false; nvars];
    let mut best = 0;
    independent_search(0, 0, &mut chosen, &supports, &mut best);
    best
}

fn independent_search(i: usize, size: usize, chosen: &mut Vec<bool>, supports: &[Vec<bool>], best: &mut usize) {
    let n = chosen.len();
    if size + (n - i) <= *best {
        return;
    }
    if i == n {
        *best = size;
        return;
    }
    chosen[i] = true;
    let ok = !supports
        .iter()
        .any(|s| s[i] && s.iter().zip(chosen.iter()).all(|(&x, &c)| !x || c));
    if ok {
        independent_search(i + 1, size + 1, chosen, supports, best);
    }
    chosen[i] = false;
    independent_search(i + 1, size, chosen, supports, best);
}

fn determinant(m: &[Vec<Polynomial>]) -> Result<Polynomial> {
    let n = m.len();
    let ring = m[0][0].ring();
    if n == 1 {
        return Ok(m[0][0].clone());
    }
    let mut acc = Polynomial::zero(ring);
    for col in 0..n {
        if m[0][col].is_zero() {
            continue;
        }
        let sub: Vec<Vec<Polynomial>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != col)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = m[0][col].mul(&determinant(&sub)?)?;
        acc = if col % 2 == 0 { acc.add(&term)? } else { acc.sub(&term)? };
    }
    Ok(acc)
}

fn for_each_subset(n: usize, k: usize, f: &mut impl FnMut(&[usize]) -> Result<bool>) -> Result<bool> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize]) -> Result<bool>) -> Result<bool> {
        if cur.len() == k {
            return f(cur);
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            if rec(i + 1, n, k, cur, f)? {
                return Ok(true);
            }
            cur.pop();
        }
        Ok(false)
    }
    rec(0, n, k, &mut Vec::with_capacity(k), f)
}

fn minor(rows: &[Vec<Polynomial>], ri: &[usize], ci: &[usize]) -> Result<Polynomial> {
    let sub: Vec<Vec<Polynomial>> = ri
        .iter()
        .map(|&r| ci.iter().map(|&c| rows[r][c].clone()).collect())
        .collect();
    determinant(&sub)
}

/// Rank over the fraction field of `P/Q` of a matrix given by rows: the
/// largest `t` with a `t x t` minor nonzero modulo `quotient`. Assumes `Q`
/// is prime.
pub fn matrix_rank_over_domain(rows: &[Vec<Polynomial>], quotient: &GroebnerBasis, budget: &Budget) -> Result<usize> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Invalid("ragged matrix".into()));
    }
    let mut examined = 0usize;
    for t in (1..=nrows.min(ncols)).rev() {
        let found = for_each_subset(nrows, t, &mut |ri| {
            for_each_subset(ncols, t, &mut |ci| {
                examined += 1;
                if examined > budget.max_minors {
                    return Err(Error::BudgetExceeded {
                        what: "minors",
                        limit: budget.max_minors,
                    });
                }
                let d = minor(rows, ri, ci)?;
                Ok(!quotient.normal_form_poly(&d)?.is_zero())
            })
        })?;
        if found {
            return Ok(t);
        }
    }
    Ok(0)
}

/// The nonzero `s x s` minors of an `s x m` matrix given by its columns.
/// Empty when `m < s` or `s = 0`.
pub fn maximal_minors(columns: &[Vec<Polynomial>], s: usize, budget: &Budget) -> Result<Vec<Polynomial>> {
    if s == 0 {
        return Ok(Vec::new());
    }
    let m = columns.len();
    let rows: Vec<Vec<Polynomial>> = (0..s).map(|r| columns.iter().map(|c| c[r].clone()).collect()).collect();
    let all_rows: Vec<usize> = (0..s).collect();
    let mut out = Vec::new();
    let mut examined = 0usize;
    for_each_subset(m, s, &mut |ci| {
        examined += 1;
        if examined > budget.max_minors {
            return Err(Error::BudgetExceeded {
                what: "minors",
                limit: budget.max_minors,
            });
        }
        let d = minor(&rows, &all_rows, ci)?;
        if !d.is_zero() {
            out.push(d);
        }
        Ok(false)
    })?;
    Ok(out)
}
