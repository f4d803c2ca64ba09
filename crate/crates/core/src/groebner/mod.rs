//! Buchberger's algorithm for ideals of `P = F_p[x_1..x_v]` and submodules of
//! free modules `P^t`, ordered position-over-term.
//!
//! Pairs are processed by the normal strategy (smallest lcm degree, ties
//! broken by the smaller index pair) and pruned with the Gebauer–Möller
//! update, which combines the coprime-leading-term and chain criteria. The
//! coprime criterion is only sound when both vectors live in a single
//! coordinate, so it is restricted to that case.

mod dimension;
mod engine;
mod staircase;
mod syzygy;

use std::fmt;
use std::sync::Arc;

pub use dimension::{krull_dimension, matrix_rank_over_domain, maximal_minors, ModuleDimension};
pub use staircase::{Colength, Staircase};
pub use syzygy::syzygies;

use crate::error::{Error, Result};
use crate::poly::{FreeModuleElement, PolyRing, Polynomial};

/// Limits on a single Buchberger run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// S-pairs that may be reduced.
    pub max_pairs: usize,
    /// Elements that may be added to the basis.
    pub max_basis: usize,
    /// Minors that may be enumerated by rank and Fitting ideal computations.
    pub max_minors: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_pairs: 50_000_000,
            max_basis: 1_000_000,
            max_minors: 100_000,
        }
    }
}

/// Counters from a Buchberger run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct GbStats {
    pub pairs_reduced: usize,
    pub pairs_pruned: usize,
    pub zero_reductions: usize,
    pub elements_added: usize,
}

/// A reduced Gröbner basis of a submodule of `P^rank`.
///
/// Elements are monic, interreduced, and sorted by descending leading term.
#[derive(Clone)]
pub struct GroebnerBasis {
    ring: Arc<PolyRing>,
    rank: usize,
    elements: Vec<FreeModuleElement>,
    stats: GbStats,
}

impl GroebnerBasis {
    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn elements(&self) -> &[FreeModuleElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn stats(&self) -> GbStats {
        self.stats
    }

    /// Generators as polynomials; only meaningful for ideals.
    pub fn polynomials(&self) -> Vec<Polynomial> {
        self.elements.iter().map(|e| e.entry(0)).collect()
    }

    /// Whether the basis contains a unit vector times a constant in every
    /// coordinate, i.e. generates all of `P^rank`.
    pub fn is_whole_module(&self) -> bool {
        (0..self.rank as u32).all(|pos| {
            self.elements.iter().any(|e| {
                let lt = e.leading_term().unwrap();
                lt.pos == pos && lt.mon.is_one()
            })
        })
    }

    pub fn staircase(&self) -> Staircase {
        Staircase::new(self)
    }

    /// `F_p`-dimension of `P^rank / submodule`.
    pub fn colength(&self) -> Colength {
        self.staircase().colength()
    }

    pub fn normal_form(&self, f: &FreeModuleElement) -> Result<FreeModuleElement> {
        if f.rank() != self.rank {
            return Err(Error::RankMismatch(format!(
                "element of rank {} against basis of rank {}",
                f.rank(),
                self.rank
            )));
        }
        if f.ring().modulus() != self.ring.modulus() || f.ring().vars() != self.ring.vars() {
            return Err(Error::RingMismatch);
        }
        let f = if f.ring().order() != self.ring.order() {
            f.with_ring(&self.ring)
        } else {
            f.clone()
        };
        let reducer = engine::Reducer::from_basis(&self.ring, &self.elements);
        let terms = reducer.normal_form(f.terms().to_vec())?;
        Ok(FreeModuleElement::from_mod_terms(&self.ring, self.rank, terms))
    }

    pub fn normal_form_poly(&self, f: &Polynomial) -> Result<Polynomial> {
        let v = FreeModuleElement::from_entries(f.ring(), std::slice::from_ref(f))?;
        Ok(self.normal_form(&v)?.entry(0))
    }

    pub fn contains(&self, f: &FreeModuleElement) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    /// Re-checks that every S-vector reduces to zero. Quadratic in the basis
    /// size; intended for tests and diagnostics.
    pub fn verify_s_pairs(&self) -> Result<bool> {
        let reducer = engine::Reducer::from_basis(&self.ring, &self.elements);
        for i in 0..self.elements.len() {
            for j in i + 1..self.elements.len() {
                if let Some(s) = reducer.s_vector(i, j)? {
                    if !reducer.normal_form(s)?.is_empty() {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Whether no term of any element is divisible by another element's
    /// leading term, and no leading term divides another.
    pub fn is_autoreduced(&self) -> bool {
        for (i, g) in self.elements.iter().enumerate() {
            for (j, h) in self.elements.iter().enumerate() {
                if i == j {
                    continue;
                }
                let lh = h.leading_term().unwrap();
                if g.terms().iter().any(|t| t.pos == lh.pos && lh.mon.divides(&t.mon)) {
                    return false;
                }
            }
        }
        true
    }
}

impl fmt::Debug for GroebnerBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.elements.iter()).finish()
    }
}

/// Computes a reduced Gröbner basis of the submodule generated by `gens`.
///
/// All generators must have rank `rank` and live over `ring`; the ring's
/// monomial order is used.
pub fn buchberger(
    ring: &Arc<PolyRing>,
    rank: usize,
    gens: &[FreeModuleElement],
    budget: &Budget,
) -> Result<GroebnerBasis> {
    for g in gens {
        if g.rank() != rank {
            return Err(Error::RankMismatch(format!("generator of rank {} in P^{rank}", g.rank())));
        }
        if g.ring().modulus() != ring.modulus() || g.ring().vars() != ring.vars() {
            return Err(Error::RingMismatch);
        }
    }
    let inputs: Vec<_> = gens
        .iter()
        .map(|g| {
            if g.ring().order() == ring.order() {
                g.terms().to_vec()
            } else {
                g.with_ring(ring).terms().to_vec()
            }
        })
        .collect();
    let (elements, stats) = engine::run(ring, inputs, budget)?;
    Ok(GroebnerBasis {
        ring: ring.clone(),
        rank,
        elements: elements
            .into_iter()
            .map(|t| FreeModuleElement::from_mod_terms(ring, rank, t))
            .collect(),
        stats,
    })
}

/// Gröbner basis of the ideal generated by `gens`.
pub fn ideal_basis(ring: &Arc<PolyRing>, gens: &[Polynomial], budget: &Budget) -> Result<GroebnerBasis> {
    let vecs = gens
        .iter()
        .map(|g| FreeModuleElement::from_entries(ring, std::slice::from_ref(g)))
        .collect::<Result<Vec<_>>>()?;
    buchberger(ring, 1, &vecs, budget)
}
