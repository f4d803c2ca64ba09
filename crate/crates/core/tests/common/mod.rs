//! Independent colength oracles and random instance generators shared by the
//! integration tests. Nothing here touches the Gröbner engine.

#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::Arc;

use hkcalc_core::poly::Term;
use hkcalc_core::{Monomial, MonomialOrder, PolyRing, Polynomial};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn ring(p: u64, nvars: usize, order: MonomialOrder) -> Arc<PolyRing> {
    PolyRing::new(p, (1..=nvars).map(|i| format!("x{i}")).collect(), order).unwrap()
}

/// A random ideal that contains the pure powers `x_i^{a_i}` among its
/// generators, so its colength is at most `prod a_i`.
#[derive(Clone, Debug)]
pub struct RandomIdeal {
    pub p: u64,
    pub nvars: usize,
    pub pure: Vec<u32>,
    /// Generators as `(exponents, coefficient)` term lists, pure powers first.
    pub gens: Vec<Vec<(Vec<u32>, i64)>>,
}

impl RandomIdeal {
    pub fn polys(&self, ring: &Arc<PolyRing>) -> Vec<Polynomial> {
        self.gens
            .iter()
            .map(|g| {
                let terms = g
                    .iter()
                    .map(|(e, c)| Term {
                        mon: Monomial::from_exponents(e),
                        coeff: ring.modulus().reduce(*c),
                    })
                    .collect();
                Polynomial::from_terms(ring, terms)
            })
            .collect()
    }
}

fn pure_powers(nvars: usize, pure: &[u32]) -> Vec<Vec<(Vec<u32>, i64)>> {
    (0..nvars)
        .map(|i| {
            let mut e = vec![0; nvars];
            e[i] = pure[i];
            vec![(e, 1)]
        })
        .collect()
}

pub fn random_ideal(rng: &mut ChaCha8Rng) -> RandomIdeal {
    let p = [2u64, 3, 5, 7, 11][rng.gen_range(0..5)];
    let nvars = rng.gen_range(2..=3);
    let max_pure = if nvars == 2 { 7 } else { 5 };
    let pure: Vec<u32> = (0..nvars).map(|_| rng.gen_range(2..=max_pure)).collect();
    let mut gens = pure_powers(nvars, &pure);
    for _ in 0..rng.gen_range(1..=3) {
        let nterms = rng.gen_range(1..=4);
        let g = (0..nterms)
            .map(|_| {
                let e: Vec<u32> = (0..nvars).map(|_| rng.gen_range(0..=3)).collect();
                let c = rng.gen_range(1..p as i64);
                (e, c)
            })
            .collect();
        gens.push(g);
    }
    RandomIdeal { p, nvars, pure, gens }
}

pub fn random_monomial_ideal(rng: &mut ChaCha8Rng) -> RandomIdeal {
    let nvars = rng.gen_range(2..=4);
    let max_pure = match nvars {
        2 => 12,
        3 => 6,
        _ => 4,
    };
    let pure: Vec<u32> = (0..nvars).map(|_| rng.gen_range(1..=max_pure)).collect();
    let mut gens = pure_powers(nvars, &pure);
    for _ in 0..rng.gen_range(1..=5) {
        let e: Vec<u32> = (0..nvars).map(|i| rng.gen_range(0..=pure[i])).collect();
        gens.push(vec![(e, 1)]);
    }
    RandomIdeal {
        p: 2,
        nvars,
        pure,
        gens,
    }
}

fn monomials_below(nvars: usize, bound: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    if bound > 0 {
        rec(0, bound - 1, &mut cur, &mut out);
    }
    out
}

/// `dim_F_p P / I` by row reduction. With `D = sum(a_i - 1) + 1`, every
/// monomial of degree `>= D` lies in `I`, so `P/I = P_{<D} / span{trunc(m g)}`
/// over generators `g` and monomials `m` of degree `< D`.
pub fn dense_colength(ideal: &RandomIdeal) -> usize {
    let p = ideal.p;
    let d_bound: u32 = ideal.pure.iter().map(|a| a - 1).sum::<u32>() + 1;
    let basis = monomials_below(ideal.nvars, d_bound);
    let index: HashMap<Vec<u32>, usize> = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let ncols = basis.len();
    let mut pivots: HashMap<usize, Vec<u64>> = HashMap::new();
    let modp = |v: i64| v.rem_euclid(p as i64) as u64;
    let inv = |a: u64| {
        let mut r = 1u64;
        let mut b = a % p;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    };
    for g in &ideal.gens {
        for m in &basis {
            let mut row = vec![0u64; ncols];
            let mut any = false;
            for (e, c) in g {
                let prod: Vec<u32> = e.iter().zip(m).map(|(a, b)| a + b).collect();
                if prod.iter().sum::<u32>() >= d_bound {
                    continue;
                }
                let j = index[&prod];
                row[j] = (row[j] + modp(*c)) % p;
                any = true;
            }
            if !any {
                continue;
            }
            for j in 0..ncols {
                if row[j] == 0 {
                    continue;
                }
                match pivots.get(&j) {
                    Some(prow) => {
                        let f = row[j];
                        for k in j..ncols {
                            row[k] = (row[k] + p * p - f * prow[k] % p) % p;
                        }
                    }
                    None => {
                        let s = inv(row[j]);
                        for v in row.iter_mut() {
                            *v = *v * s % p;
                        }
                        pivots.insert(j, row);
                        break;
                    }
                }
            }
        }
    }
    ncols - pivots.len()
}

/// Direct enumeration of the monomials in the box `prod [0, a_i)` not
/// divisible by any generator of a monomial ideal.
pub fn staircase_count(ideal: &RandomIdeal) -> usize {
    let gens: Vec<&Vec<u32>> = ideal.gens.iter().map(|g| &g[0].0).collect();
    let mut count = 0;
    let mut cur = vec![0u32; ideal.nvars];
    loop {
        if !gens.iter().any(|g| g.iter().zip(&cur).all(|(a, b)| a <= b)) {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == ideal.nvars {
                return count;
            }
            cur[i] += 1;
            if cur[i] < ideal.pure[i] {
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

pub fn random_poly(rng: &mut ChaCha8Rng, ring: &Arc<PolyRing>, max_terms: usize, max_exp: u32) -> Polynomial {
    let n = ring.nvars();
    let p = ring.characteristic() as i64;
    let terms = (0..rng.gen_range(0..=max_terms))
        .map(|_| Term {
            mon: Monomial::from_exponents(&(0..n).map(|_| rng.gen_range(0..=max_exp)).collect::<Vec<_>>()),
            coeff: ring.modulus().reduce(rng.gen_range(0..p)),
        })
        .collect();
    Polynomial::from_terms(ring, terms)
}
