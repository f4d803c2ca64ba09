//! Sparse polynomials over `F_p` and elements of free modules `P^t`.
//!
//! Terms are stored sorted strictly descending in the ring's monomial order
//! with no zero coefficients, so structural equality is mathematical equality.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{PrimeModulus, Scalar};
use crate::monomial::{Monomial, MonomialOrder};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub mon: Monomial,
    pub coeff: Scalar,
}

/// A term `coeff * mon * e_pos` of a free module element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModTerm {
    pub pos: u32,
    pub mon: Monomial,
    pub coeff: Scalar,
}

/// The polynomial ring `F_p[x_1..x_v]` together with its active term order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    modulus: PrimeModulus,
    vars: Vec<String>,
    order: MonomialOrder,
}

impl PolyRing {
    pub fn new(p: u64, vars: Vec<String>, order: MonomialOrder) -> Result<Arc<Self>> {
        let modulus = PrimeModulus::new(p)?;
        for (i, v) in vars.iter().enumerate() {
            if v.is_empty() || vars[..i].contains(v) {
                return Err(Error::Invalid(format!("bad or duplicate variable name `{v}`")));
            }
        }
        Ok(Arc::new(PolyRing {
            modulus,
            vars,
            order,
        }))
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn characteristic(&self) -> u32 {
        self.modulus.value()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Same variables and characteristic under a different order.
    pub fn with_order(&self, order: MonomialOrder) -> Arc<PolyRing> {
        Arc::new(PolyRing {
            order,
            ..self.clone()
        })
    }

    pub(crate) fn write_monomial(&self, m: &Monomial, f: &mut impl fmt::Write) -> fmt::Result {
        let mut first = true;
        for (i, &e) in m.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_char('*')?;
            }
            first = false;
            f.write_str(&self.vars[i])?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            f.write_char('1')?;
        }
        Ok(())
    }
}

/// Sorts and combines raw terms into canonical form.
pub(crate) fn canonicalize(p: PrimeModulus, order: MonomialOrder, mut terms: Vec<Term>) -> Vec<Term> {
    terms.sort_by(|a, b| order.cmp(&b.mon, &a.mon));
    let mut out: Vec<Term> = Vec::with_capacity(terms.len());
    for t in terms {
        match out.last_mut() {
            Some(last) if last.mon == t.mon => last.coeff = p.add(last.coeff, t.coeff),
            _ => out.push(t),
        }
        if out.last().is_some_and(|l| l.coeff.is_zero()) {
            out.pop();
        }
    }
    out
}

/// Merges `a + c*m*b` where both inputs are canonical.
fn merge_scaled(
    p: PrimeModulus,
    order: MonomialOrder,
    a: &[Term],
    c: Scalar,
    m: &Monomial,
    b: &[Term],
) -> Result<Vec<Term>> {
    if c.is_zero() {
        return Ok(a.to_vec());
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut i = 0;
    for t in b {
        let y = Term {
            mon: t.mon.mul(m)?,
            coeff: p.mul(t.coeff, c),
        };
        while i < a.len() && order.cmp(&a[i].mon, &y.mon) == Ordering::Greater {
            out.push(a[i].clone());
            i += 1;
        }
        if i < a.len() && a[i].mon == y.mon {
            let s = p.add(a[i].coeff, y.coeff);
            if !s.is_zero() {
                out.push(Term { mon: y.mon, coeff: s });
            }
            i += 1;
        } else {
            out.push(y);
        }
    }
    out.extend_from_slice(&a[i..]);
    Ok(out)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    ring: Arc<PolyRing>,
    terms: Vec<Term>,
}

impl Polynomial {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &Arc<PolyRing>, c: i64) -> Self {
        let coeff = ring.modulus.reduce(c);
        Self::from_terms(ring, vec![Term { mon: Monomial::one(ring.nvars()), coeff }])
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Self::constant(ring, 1)
    }

    pub fn var(ring: &Arc<PolyRing>, i: usize) -> Self {
        Self::monomial(ring, Monomial::var(i, ring.nvars()), Scalar::ONE)
    }

    pub fn monomial(ring: &Arc<PolyRing>, mon: Monomial, coeff: Scalar) -> Self {
        Self::from_terms(ring, vec![Term { mon, coeff }])
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms(ring: &Arc<PolyRing>, terms: Vec<Term>) -> Self {
        debug_assert!(terms.iter().all(|t| t.mon.nvars() == ring.nvars()));
        Polynomial {
            ring: ring.clone(),
            terms: canonicalize(ring.modulus, ring.order, terms),
        }
    }

    pub(crate) fn from_sorted_terms(ring: &Arc<PolyRing>, terms: Vec<Term>) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].mon.is_one() && self.terms[0].coeff == Scalar::ONE
    }

    pub fn leading_term(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.iter().map(|t| t.mon.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms.windows(2).all(|w| w[0].mon.degree() == w[1].mon.degree())
    }

    fn check_ring(&self, other: &Polynomial) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        let one = Monomial::one(self.ring.nvars());
        let terms = merge_scaled(self.ring.modulus, self.ring.order, &self.terms, Scalar::ONE, &one, &other.terms)?;
        Ok(Polynomial::from_sorted_terms(&self.ring, terms))
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        let p = self.ring.modulus;
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                mon: t.mon.clone(),
                coeff: p.neg(t.coeff),
            })
            .collect();
        Polynomial::from_sorted_terms(&self.ring, terms)
    }

    pub fn scale(&self, c: Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let p = self.ring.modulus;
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                mon: t.mon.clone(),
                coeff: p.mul(t.coeff, c),
            })
            .collect();
        Polynomial::from_sorted_terms(&self.ring, terms)
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        let p = self.ring.modulus;
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                raw.push(Term {
                    mon: a.mon.mul(&b.mon)?,
                    coeff: p.mul(a.coeff, b.coeff),
                });
            }
        }
        Ok(Polynomial::from_terms(&self.ring, raw))
    }

    /// `f^e`. Powers of the characteristic take the term-wise Frobenius
    /// route; everything else uses binary exponentiation.
    pub fn pow(&self, e: u64) -> Result<Polynomial> {
        let p = self.ring.characteristic() as u64;
        let mut k = e;
        while k > 1 && k.is_multiple_of(p) {
            k /= p;
        }
        if e > 0 && k == 1 {
            return self.frobenius(e);
        }
        self.pow_binary(e)
    }

    /// `f^e` by repeated squaring, without the Frobenius shortcut.
    pub fn pow_binary(&self, mut e: u64) -> Result<Polynomial> {
        let mut acc = Polynomial::one(&self.ring);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Term-wise image under `f -> f^q` for `q` a power of the
    /// characteristic: exponents scale by `q`, coefficients are raised to `q`.
    pub fn frobenius(&self, q: u64) -> Result<Polynomial> {
        let p = self.ring.modulus;
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            terms.push(Term {
                mon: t.mon.pow(q)?,
                coeff: p.pow(t.coeff, q),
            });
        }
        // scaling exponents preserves every supported order
        Ok(Polynomial::from_sorted_terms(&self.ring, terms))
    }

    /// Evaluates in the same ring under another order.
    pub fn with_ring(&self, ring: &Arc<PolyRing>) -> Polynomial {
        Polynomial::from_terms(ring, self.terms.clone())
    }

    pub fn parse(text: &str, ring: &Arc<PolyRing>) -> Result<Polynomial> {
        crate::parse::parse_polynomial(text, ring)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if t.mon.is_one() {
                write!(f, "{}", t.coeff)?;
            } else {
                if t.coeff != Scalar::ONE {
                    write!(f, "{}*", t.coeff)?;
                }
                self.ring.write_monomial(&t.mon, f)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

/// An element of the free module `P^rank`, terms ordered position-over-term.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FreeModuleElement {
    ring: Arc<PolyRing>,
    rank: usize,
    terms: Vec<ModTerm>,
}

impl FreeModuleElement {
    pub fn zero(ring: &Arc<PolyRing>, rank: usize) -> Self {
        FreeModuleElement {
            ring: ring.clone(),
            rank,
            terms: Vec::new(),
        }
    }

    /// The vector `(entries[0], ..., entries[rank-1])`.
    pub fn from_entries(ring: &Arc<PolyRing>, entries: &[Polynomial]) -> Result<Self> {
        let mut terms = Vec::new();
        let mut resort = false;
        for (pos, f) in entries.iter().enumerate() {
            if f.ring().modulus() != ring.modulus() || f.ring().vars() != ring.vars() {
                return Err(Error::RingMismatch);
            }
            resort |= f.ring().order() != ring.order();
            terms.extend(f.terms().iter().map(|t| ModTerm {
                pos: pos as u32,
                mon: t.mon.clone(),
                coeff: t.coeff,
            }));
        }
        if resort {
            return Ok(Self::from_mod_terms(ring, entries.len(), terms));
        }
        Ok(FreeModuleElement {
            ring: ring.clone(),
            rank: entries.len(),
            terms,
        })
    }

    /// `f * e_pos` in `P^rank`.
    pub fn basis_multiple(f: &Polynomial, pos: usize, rank: usize) -> Self {
        assert!(pos < rank);
        FreeModuleElement {
            ring: f.ring().clone(),
            rank,
            terms: f
                .terms()
                .iter()
                .map(|t| ModTerm {
                    pos: pos as u32,
                    mon: t.mon.clone(),
                    coeff: t.coeff,
                })
                .collect(),
        }
    }

    pub(crate) fn from_mod_terms(ring: &Arc<PolyRing>, rank: usize, mut terms: Vec<ModTerm>) -> Self {
        let order = ring.order();
        terms.sort_by(|a, b| order.cmp_module(b.pos, &b.mon, a.pos, &a.mon));
        let p = ring.modulus();
        let mut out: Vec<ModTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(l) if l.pos == t.pos && l.mon == t.mon => l.coeff = p.add(l.coeff, t.coeff),
                _ => out.push(t),
            }
            if out.last().is_some_and(|l| l.coeff.is_zero()) {
                out.pop();
            }
        }
        FreeModuleElement {
            ring: ring.clone(),
            rank,
            terms: out,
        }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> &[ModTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_term(&self) -> Option<&ModTerm> {
        self.terms.first()
    }

    /// The polynomial in coordinate `pos`.
    pub fn entry(&self, pos: usize) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|t| t.pos as usize == pos)
            .map(|t| Term {
                mon: t.mon.clone(),
                coeff: t.coeff,
            })
            .collect();
        Polynomial::from_sorted_terms(&self.ring, terms)
    }

    pub fn entries(&self) -> Vec<Polynomial> {
        (0..self.rank).map(|i| self.entry(i)).collect()
    }

    pub fn add(&self, other: &FreeModuleElement) -> Result<FreeModuleElement> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        if self.rank != other.rank {
            return Err(Error::RankMismatch(format!("{} vs {}", self.rank, other.rank)));
        }
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Ok(Self::from_mod_terms(&self.ring, self.rank, terms))
    }

    pub fn scale_by(&self, f: &Polynomial) -> Result<FreeModuleElement> {
        if f.ring() != &self.ring {
            return Err(Error::RingMismatch);
        }
        let p = self.ring.modulus();
        let mut terms = Vec::with_capacity(self.terms.len() * f.terms().len());
        for a in &self.terms {
            for b in f.terms() {
                terms.push(ModTerm {
                    pos: a.pos,
                    mon: a.mon.mul(&b.mon)?,
                    coeff: p.mul(a.coeff, b.coeff),
                });
            }
        }
        Ok(Self::from_mod_terms(&self.ring, self.rank, terms))
    }

    /// Same element re-sorted for a ring with a different order.
    pub fn with_ring(&self, ring: &Arc<PolyRing>) -> FreeModuleElement {
        Self::from_mod_terms(ring, self.rank, self.terms.clone())
    }

    /// Moves every entry up by `offset` positions inside `P^rank`.
    pub fn shifted(&self, offset: usize, rank: usize) -> FreeModuleElement {
        assert!(self.rank + offset <= rank);
        FreeModuleElement {
            ring: self.ring.clone(),
            rank,
            terms: self
                .terms
                .iter()
                .map(|t| ModTerm {
                    pos: t.pos + offset as u32,
                    ..t.clone()
                })
                .collect(),
        }
    }
}

impl fmt::Display for FreeModuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, e) in self.entries().iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for FreeModuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FreeModuleElement({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ring(p: u64, vars: &[&str]) -> Arc<PolyRing> {
        PolyRing::new(p, vars.iter().map(|s| s.to_string()).collect(), MonomialOrder::GrevLex).unwrap()
    }

    fn parse(s: &str, r: &Arc<PolyRing>) -> Polynomial {
        Polynomial::parse(s, r).unwrap()
    }

    #[test]
    fn addition_examples() {
        let r2 = ring(2, &["x", "y"]);
        let f = parse("x + y", &r2);
        assert_eq!(f.add(&Polynomial::zero(&r2)).unwrap(), f);
        assert!(f.add(&f).unwrap().is_zero());
        let r5 = ring(5, &["x"]);
        assert_eq!(parse("3*x", &r5).add(&parse("4*x", &r5)).unwrap(), parse("2*x", &r5));
    }

    #[test]
    fn ring_mismatch() {
        let a = ring(5, &["x"]);
        let b = ring(7, &["x"]);
        assert_eq!(parse("x", &a).add(&parse("x", &b)), Err(Error::RingMismatch));
    }

    #[test]
    fn multiplication_examples() {
        let r2 = ring(2, &["x", "y"]);
        let f = parse("x + y", &r2);
        assert_eq!(f.mul(&Polynomial::one(&r2)).unwrap(), f);
        assert_eq!(f.mul(&f).unwrap(), parse("x^2 + y^2", &r2));
        let r5 = ring(5, &["x", "y"]);
        let g = parse("x + y", &r5).mul(&parse("x - y", &r5)).unwrap();
        assert_eq!(g, parse("x^2 + 4*y^2", &r5));
    }

    #[test]
    fn power_examples() {
        let r5 = ring(5, &["x", "y"]);
        let f = parse("x + y", &r5);
        assert!(f.pow(0).unwrap().is_one());
        assert_eq!(f.pow(5).unwrap(), parse("x^5 + y^5", &r5));
        assert_eq!(parse("x^2", &r5).pow(3).unwrap(), parse("x^6", &r5));
        assert_eq!(
            parse("2*x*y + 3", &r5).pow(25).unwrap(),
            parse("2*x*y + 3", &r5).pow_binary(25).unwrap()
        );
        assert_eq!(parse("x^100000", &r5).pow(1 << 20), Err(Error::ExponentOverflow));
    }

    #[test]
    fn display() {
        let r = ring(7, &["x1", "x2"]);
        assert_eq!(parse("x1^2*x2 - 3 + 2*x2^3", &r).to_string(), "x1^2*x2 + 2*x2^3 + 4");
        assert_eq!(Polynomial::zero(&r).to_string(), "0");
    }

    #[test]
    fn module_elements() {
        let r = ring(3, &["x", "y"]);
        let v = FreeModuleElement::from_entries(&r, &[parse("y", &r), parse("-x", &r)]).unwrap();
        assert_eq!(v.to_string(), "[y, 2*x]");
        let w = v.scale_by(&parse("x", &r)).unwrap();
        assert_eq!(w.entry(1), parse("-x^2", &r));
        assert!(v.add(&v.scale_by(&Polynomial::constant(&r, -1)).unwrap()).unwrap().is_zero());
        // position 0 leads
        assert_eq!(w.leading_term().unwrap().pos, 0);
    }

    fn poly_strategy(r: Arc<PolyRing>) -> impl Strategy<Value = Polynomial> {
        prop::collection::vec((prop::collection::vec(0u32..4, 3), 0i64..7), 0..6).prop_map(move |ts| {
            let p = r.modulus();
            Polynomial::from_terms(
                &r,
                ts.into_iter()
                    .map(|(e, c)| Term {
                        mon: Monomial::from_exponents(&e),
                        coeff: p.reduce(c),
                    })
                    .collect(),
            )
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(
            (f, g, h) in {
                let r = ring(7, &["x", "y", "z"]);
                (poly_strategy(r.clone()), poly_strategy(r.clone()), poly_strategy(r))
            }
        ) {
            prop_assert_eq!(f.add(&g).unwrap(), g.add(&f).unwrap());
            prop_assert_eq!(f.mul(&g).unwrap(), g.mul(&f).unwrap());
            prop_assert_eq!(f.add(&g).unwrap().add(&h).unwrap(), f.add(&g.add(&h).unwrap()).unwrap());
            prop_assert_eq!(f.mul(&g).unwrap().mul(&h).unwrap(), f.mul(&g.mul(&h).unwrap()).unwrap());
            prop_assert_eq!(
                f.mul(&g.add(&h).unwrap()).unwrap(),
                f.mul(&g).unwrap().add(&f.mul(&h).unwrap()).unwrap()
            );
            prop_assert!(f.add(&f.neg()).unwrap().is_zero());
        }

        #[test]
        fn frobenius_is_additive(
            (f, g) in {
                let r = ring(3, &["x", "y", "z"]);
                (poly_strategy(r.clone()), poly_strategy(r))
            }
        ) {
            let lhs = f.add(&g).unwrap().pow_binary(3).unwrap();
            let rhs = f.pow_binary(3).unwrap().add(&g.pow_binary(3).unwrap()).unwrap();
            prop_assert_eq!(&lhs, &rhs);
            prop_assert_eq!(f.pow_binary(9).unwrap(), f.frobenius(9).unwrap());
        }

        #[test]
        fn print_parse_round_trip(f in poly_strategy(ring(7, &["x", "y", "z"]))) {
            let back = Polynomial::parse(&f.to_string(), f.ring()).unwrap();
            prop_assert_eq!(back, f);
        }
    }
}
