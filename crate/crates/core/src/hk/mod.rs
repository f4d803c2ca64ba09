//! Rings `R = P/Q`, ideals of `R`, Frobenius bracket powers and finitely
//! presented `R`-modules, together with the lengths built from them.
//!
//! Everything is computed in `P` by adjoining the generators of `Q` (times
//! each basis vector, for modules) to the relevant generator sets.

mod length;
mod module;

use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use serde::Serialize;

pub use length::{
    delta_n, delta_series, en_cyclic, en_module, module_dimension, module_rank, series, tor1_length, tor_series,
    DeltaEntry, DeltaSeries, PreparedModule, SeriesOutcome,
};
pub use module::{ModuleKind, ModulePresentation};

use crate::error::{Error, Result};
use crate::groebner::{ideal_basis, krull_dimension, Budget, GroebnerBasis};
use crate::monomial::MonomialOrder;
use crate::poly::{PolyRing, Polynomial};

/// `R = F_p[x_1..x_v] / Q`, graded model of a local ring with maximal ideal
/// `(x_1..x_v)`.
#[derive(Clone, Debug)]
pub struct RingPresentation {
    ring: Arc<PolyRing>,
    quotient: Vec<Polynomial>,
    quotient_gb: GroebnerBasis,
    dim: usize,
}

impl RingPresentation {
    pub fn new(ring: Arc<PolyRing>, quotient: Vec<Polynomial>, budget: &Budget) -> Result<Self> {
        let quotient: Vec<Polynomial> = quotient.into_iter().filter(|f| !f.is_zero()).collect();
        let quotient_gb = ideal_basis(&ring, &quotient, budget)?;
        let dim = krull_dimension(&quotient_gb);
        Ok(RingPresentation {
            ring,
            quotient,
            quotient_gb,
            dim,
        })
    }

    /// Convenience constructor from text, using grevlex.
    pub fn parse(p: u64, vars: &[&str], quotient: &[&str]) -> Result<Self> {
        let ring = PolyRing::new(p, vars.iter().map(|s| s.to_string()).collect(), MonomialOrder::GrevLex)?;
        let q = quotient
            .iter()
            .map(|s| Polynomial::parse(s, &ring))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ring, q, &Budget::default())
    }

    /// The same ring computed under another monomial order.
    pub fn with_order(&self, order: MonomialOrder, budget: &Budget) -> Result<Self> {
        let ring = self.ring.with_order(order);
        let q = self.quotient.iter().map(|f| f.with_ring(&ring)).collect();
        Self::new(ring, q, budget)
    }

    pub fn poly_ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn characteristic(&self) -> u32 {
        self.ring.characteristic()
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn quotient(&self) -> &[Polynomial] {
        &self.quotient
    }

    pub fn quotient_basis(&self) -> &GroebnerBasis {
        &self.quotient_gb
    }

    /// Krull dimension of `R`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_homogeneous(&self) -> bool {
        self.quotient.iter().all(Polynomial::is_homogeneous)
    }

    pub fn parse_poly(&self, text: &str) -> Result<Polynomial> {
        Polynomial::parse(text, &self.ring)
    }

    pub fn parse_ideal(&self, gens: &[&str]) -> Result<IdealHandle> {
        Ok(IdealHandle::new(gens.iter().map(|s| self.parse_poly(s)).collect::<Result<_>>()?))
    }

    /// The homogeneous maximal ideal `(x_1..x_v)`.
    pub fn maximal_ideal(&self) -> IdealHandle {
        IdealHandle::new((0..self.nvars()).map(|i| Polynomial::var(&self.ring, i)).collect())
    }

    /// `q = p^n`, checked.
    pub fn q(&self, n: u32) -> Result<u64> {
        (self.characteristic() as u64).checked_pow(n).ok_or(Error::ExponentOverflow)
    }
}

/// An ideal `I` of `R`, given by generators in `P`.
#[derive(Debug, Default)]
pub struct IdealHandle {
    generators: Vec<Polynomial>,
    basis: OnceLock<GroebnerBasis>,
    m_primary: OnceLock<bool>,
}

impl Clone for IdealHandle {
    fn clone(&self) -> Self {
        IdealHandle {
            generators: self.generators.clone(),
            basis: self.basis.clone(),
            m_primary: self.m_primary.clone(),
        }
    }
}

impl IdealHandle {
    pub fn new(generators: Vec<Polynomial>) -> Self {
        IdealHandle {
            generators,
            basis: OnceLock::new(),
            m_primary: OnceLock::new(),
        }
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    /// Result of a previous [`check_m_primary`], if any.
    pub fn is_m_primary(&self) -> Option<bool> {
        self.m_primary.get().copied()
    }

    /// Gröbner basis of `Q + I` in `P`, computed on first use.
    pub fn basis(&self, ring: &RingPresentation, budget: &Budget) -> Result<&GroebnerBasis> {
        if let Some(gb) = self.basis.get() {
            return Ok(gb);
        }
        let mut gens = ring.quotient().to_vec();
        gens.extend(self.generators.iter().map(|g| g.with_ring(ring.poly_ring())));
        let gb = ideal_basis(ring.poly_ring(), &gens, budget)?;
        Ok(self.basis.get_or_init(|| gb))
    }
}

/// Whether `R / I` has finite length.
pub fn check_m_primary(ideal: &IdealHandle, ring: &RingPresentation, budget: &Budget) -> Result<bool> {
    if let Some(v) = ideal.is_m_primary() {
        return Ok(v);
    }
    let finite = ideal.basis(ring, budget)?.colength().is_finite();
    Ok(*ideal.m_primary.get_or_init(|| finite))
}

/// The Frobenius bracket power `I^{[q]}`, `q = p^n`, generated by the
/// `q`-th powers of the generators of `I`.
#[derive(Clone, Debug)]
pub struct BracketPower {
    pub n: u32,
    pub q: u64,
    pub generators: Vec<Polynomial>,
}

pub fn bracket_power(ideal: &IdealHandle, ring: &RingPresentation, n: u32) -> Result<BracketPower> {
    let q = ring.q(n)?;
    let generators = ideal
        .generators()
        .iter()
        .map(|g| g.with_ring(ring.poly_ring()).pow(q))
        .collect::<Result<Vec<_>>>()?;
    Ok(BracketPower { n, q, generators })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HkEntry {
    pub n: u32,
    pub q: u64,
    #[serde(serialize_with = "serialize_biguint")]
    pub value: BigUint,
}

pub(crate) fn serialize_biguint<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Values `e_n` (or other nonnegative lengths) for consecutive `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HkSeries {
    pub module: String,
    pub ideal: String,
    pub p: u32,
    pub entries: Vec<HkEntry>,
}

impl HkSeries {
    /// Builds a series for `n = 0, 1, ...` from raw values.
    pub fn from_values(p: u32, values: &[u64]) -> Self {
        let entries = values
            .iter()
            .enumerate()
            .map(|(n, &v)| HkEntry {
                n: n as u32,
                q: (p as u64).pow(n as u32),
                value: BigUint::from(v),
            })
            .collect();
        HkSeries {
            module: String::new(),
            ideal: String::new(),
            p,
            entries,
        }
    }

    pub fn get(&self, n: u32) -> Option<&BigUint> {
        self.entries.iter().find(|e| e.n == n).map(|e| &e.value)
    }

    pub fn values(&self) -> Vec<BigUint> {
        self.entries.iter().map(|e| e.value.clone()).collect()
    }
}

#[cfg(test)]
mod tests;
