use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::monomial::{Exponent, Monomial};

use super::GroebnerBasis;

/// Number of standard monomials, or infinite.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Colength {
    Finite(BigUint),
    Infinite,
}

impl Colength {
    pub fn finite(&self) -> Option<&BigUint> {
        match self {
            Colength::Finite(n) => Some(n),
            Colength::Infinite => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Colength::Finite(_))
    }
}

impl fmt::Display for Colength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Colength::Finite(n) => write!(f, "{n}"),
            Colength::Infinite => f.write_str("infinite"),
        }
    }
}

/// The leading-term module of a Gröbner basis: for each position, the
/// minimal generators of the monomial ideal of leading monomials there.
#[derive(Clone, Debug)]
pub struct Staircase {
    nvars: usize,
    per_position: Vec<Vec<Monomial>>,
}

impl Staircase {
    pub fn new(gb: &GroebnerBasis) -> Self {
        let mut per_position = vec![Vec::new(); gb.rank()];
        for e in gb.elements() {
            let lt = e.leading_term().expect("basis elements are nonzero");
            per_position[lt.pos as usize].push(lt.mon.clone());
        }
        Staircase {
            nvars: gb.ring().nvars(),
            per_position,
        }
    }

    /// Staircase of monomial ideals given directly by generators.
    pub fn from_monomials(nvars: usize, per_position: Vec<Vec<Monomial>>) -> Self {
        Staircase { nvars, per_position }
    }

    pub fn rank(&self) -> usize {
        self.per_position.len()
    }

    pub fn leading_monomials(&self, pos: usize) -> &[Monomial] {
        &self.per_position[pos]
    }

    /// Whether `(pos, m)` lies in the leading-term module.
    pub fn contains(&self, pos: usize, m: &Monomial) -> bool {
        self.per_position[pos].iter().any(|g| g.divides(m))
    }

    pub fn colength(&self) -> Colength {
        let mut total = BigUint::zero();
        for gens in &self.per_position {
            let exps: Vec<Vec<Exponent>> = gens.iter().map(|m| m.exponents().to_vec()).collect();
            match count_standard(exps, self.nvars) {
                Some(n) => total += n,
                None => return Colength::Infinite,
            }
        }
        Colength::Finite(total)
    }
}

/// Drops generators divisible by another generator (keeping one copy of
/// duplicates), considering only the first `v` exponents.
fn minimalize(mut gens: Vec<Vec<Exponent>>, v: usize) -> Vec<Vec<Exponent>> {
    gens.sort_by_key(|g| g[..v].iter().map(|&e| e as u64).sum::<u64>());
    let mut out: Vec<Vec<Exponent>> = Vec::with_capacity(gens.len());
    for g in gens {
        if !out.iter().any(|h| h[..v].iter().zip(&g[..v]).all(|(a, b)| a <= b)) {
            out.push(g);
        }
    }
    out
}

/// Counts monomials in the first `v` variables outside the ideal generated
/// by `gens`, slicing along the last variable. `None` when infinite.
fn count_standard(gens: Vec<Vec<Exponent>>, v: usize) -> Option<BigUint> {
    let gens = minimalize(gens, v);
    if gens.iter().any(|g| g[..v].iter().all(|&e| e == 0)) {
        return Some(BigUint::zero());
    }
    if v == 0 {
        return Some(BigUint::one());
    }
    let last = v - 1;
    let pure = gens
        .iter()
        .filter(|g| g[..last].iter().all(|&e| e == 0))
        .map(|g| g[last])
        .min()?;
    let mut breaks: Vec<Exponent> = gens.iter().map(|g| g[last]).filter(|&e| e < pure).collect();
    breaks.push(0);
    breaks.sort_unstable();
    breaks.dedup();
    let mut total = BigUint::zero();
    for (k, &b) in breaks.iter().enumerate() {
        let next = breaks.get(k + 1).copied().unwrap_or(pure);
        let slice: Vec<Vec<Exponent>> = gens
            .iter()
            .filter(|g| g[last] <= b)
            .map(|g| g[..last].to_vec())
            .collect();
        let c = count_standard(slice, last)?;
        total += c * BigUint::from(next - b);
    }
    Some(total)
}
