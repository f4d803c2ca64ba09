//! Exponent vectors and monomial orders.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

pub type Exponent = u32;

/// A monomial `x_1^{e_1} ... x_v^{e_v}`.
///
/// The total degree and a divisibility mask are cached. Bit `i % 64` of the
/// mask is set when `e_i > 0`, so `a | b` implies `mask(a) & !mask(b) == 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: SmallVec<[Exponent; 8]>,
    degree: u64,
    mask: u64,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: smallvec::smallvec![0; nvars],
            degree: 0,
            mask: 0,
        }
    }

    pub fn var(i: usize, nvars: usize) -> Self {
        let mut m = Self::one(nvars);
        m.exps[i] = 1;
        m.degree = 1;
        m.mask = 1 << (i % 64);
        m
    }

    pub fn from_exponents(exps: &[Exponent]) -> Self {
        let mut degree = 0u64;
        let mut mask = 0u64;
        for (i, &e) in exps.iter().enumerate() {
            degree += e as u64;
            if e > 0 {
                mask |= 1 << (i % 64);
            }
        }
        Monomial {
            exps: SmallVec::from_slice(exps),
            degree,
            mask,
        }
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    #[inline]
    pub fn exponents(&self) -> &[Exponent] {
        &self.exps
    }

    #[inline]
    pub fn exponent(&self, i: usize) -> Exponent {
        self.exps[i]
    }

    #[inline]
    pub fn degree(&self) -> u64 {
        self.degree
    }

    #[inline]
    pub fn mask(&self) -> u64 {
        self.mask
    }

    #[inline]
    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn mul(&self, other: &Monomial) -> Result<Monomial> {
        debug_assert_eq!(self.nvars(), other.nvars());
        let mut exps = SmallVec::with_capacity(self.exps.len());
        for (a, b) in self.exps.iter().zip(&other.exps) {
            exps.push(a.checked_add(*b).ok_or(Error::ExponentOverflow)?);
        }
        Ok(Monomial {
            exps,
            degree: self.degree + other.degree,
            mask: self.mask | other.mask,
        })
    }

    pub fn pow(&self, e: u64) -> Result<Monomial> {
        let e32 = Exponent::try_from(e).map_err(|_| Error::ExponentOverflow)?;
        let mut exps = SmallVec::with_capacity(self.exps.len());
        for a in &self.exps {
            exps.push(a.checked_mul(e32).ok_or(Error::ExponentOverflow)?);
        }
        let degree = self.degree.checked_mul(e).ok_or(Error::ExponentOverflow)?;
        Ok(Monomial {
            exps,
            degree,
            mask: if e == 0 { 0 } else { self.mask },
        })
    }

    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.mask & !other.mask == 0
            && self.degree <= other.degree
            && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`, provided `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        let exps: SmallVec<[Exponent; 8]> =
            other.exps.iter().zip(&self.exps).map(|(b, a)| b - a).collect();
        Some(Self::from_exponents(&exps))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let exps: SmallVec<[Exponent; 8]> = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| *a.max(b))
            .collect();
        Self::from_exponents(&exps)
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(&other.exps)
            .all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Index of the single variable this monomial is a power of.
    pub fn pure_power_var(&self) -> Option<usize> {
        let mut found = None;
        for (i, &e) in self.exps.iter().enumerate() {
            if e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    }

    /// Whether every variable occurring in this monomial lies in `set`.
    pub fn support_within(&self, set: &[bool]) -> bool {
        self.exps.iter().zip(set).all(|(&e, &s)| e == 0 || s)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &self.exps[..])
    }
}

/// A term order on monomials.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    /// Graded reverse lexicographic.
    #[default]
    GrevLex,
    /// Pure lexicographic with `x_1 > x_2 > ...`.
    Lex,
    /// Graded, ties broken lexicographically.
    DegLex,
}

impl MonomialOrder {
    pub const ALL: [MonomialOrder; 3] =
        [MonomialOrder::GrevLex, MonomialOrder::Lex, MonomialOrder::DegLex];

    #[inline]
    pub fn cmp(self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => a.exps.cmp(&b.exps),
            MonomialOrder::DegLex => a.degree.cmp(&b.degree).then_with(|| a.exps.cmp(&b.exps)),
            MonomialOrder::GrevLex => a.degree.cmp(&b.degree).then_with(|| {
                for (x, y) in a.exps.iter().zip(&b.exps).rev() {
                    if x != y {
                        return y.cmp(x);
                    }
                }
                Ordering::Equal
            }),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MonomialOrder::GrevLex => "grevlex",
            MonomialOrder::Lex => "lex",
            MonomialOrder::DegLex => "deglex",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "grevlex" => Some(MonomialOrder::GrevLex),
            "lex" => Some(MonomialOrder::Lex),
            "deglex" | "grlex" => Some(MonomialOrder::DegLex),
            _ => None,
        }
    }

    /// Position-over-term comparison of module monomials `(pos, m)`; lower
    /// positions rank higher.
    #[inline]
    pub fn cmp_module(self, pa: u32, a: &Monomial, pb: u32, b: &Monomial) -> Ordering {
        pb.cmp(&pa).then_with(|| self.cmp(a, b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn orders_on_small_examples() {
        // x^2 vs x*y vs y^2 vs z in three variables
        let x2 = m(&[2, 0, 0]);
        let xz = m(&[1, 0, 1]);
        let y2 = m(&[0, 2, 0]);
        assert_eq!(MonomialOrder::Lex.cmp(&xz, &y2), Ordering::Greater);
        assert_eq!(MonomialOrder::GrevLex.cmp(&xz, &y2), Ordering::Less);
        assert_eq!(MonomialOrder::DegLex.cmp(&xz, &y2), Ordering::Greater);
        for o in MonomialOrder::ALL {
            assert_eq!(o.cmp(&x2, &xz), Ordering::Greater);
        }
        let z = m(&[0, 0, 1]);
        assert_eq!(MonomialOrder::Lex.cmp(&z, &y2), Ordering::Less);
        assert_eq!(MonomialOrder::GrevLex.cmp(&m(&[0, 0, 3]), &y2), Ordering::Greater);
    }

    #[test]
    fn overflow_is_an_error() {
        let a = m(&[u32::MAX, 0]);
        assert_eq!(a.mul(&m(&[1, 0])), Err(Error::ExponentOverflow));
        assert_eq!(m(&[1 << 20, 0]).pow(1 << 12), Err(Error::ExponentOverflow));
    }

    #[test]
    fn divisibility_and_lcm() {
        let a = m(&[1, 2, 0]);
        let b = m(&[2, 2, 1]);
        assert!(a.divides(&b));
        assert!(!b.divides(&a));
        assert_eq!(a.quotient_of(&b), Some(m(&[1, 0, 1])));
        assert_eq!(a.lcm(&m(&[0, 3, 1])), m(&[1, 3, 1]));
        assert!(m(&[1, 0, 0]).is_coprime(&m(&[0, 5, 1])));
        assert_eq!(m(&[0, 4, 0]).pure_power_var(), Some(1));
        assert_eq!(m(&[1, 4, 0]).pure_power_var(), None);
    }

    fn mono3() -> impl Strategy<Value = Monomial> {
        prop::collection::vec(0u32..6, 3).prop_map(|v| Monomial::from_exponents(&v))
    }

    proptest! {
        #[test]
        fn order_axioms(a in mono3(), b in mono3(), c in mono3(), w in mono3()) {
            for o in MonomialOrder::ALL {
                // totality and antisymmetry
                prop_assert_eq!(o.cmp(&a, &b), o.cmp(&b, &a).reverse());
                prop_assert_eq!(o.cmp(&a, &b) == Ordering::Equal, a == b);
                // transitivity
                if o.cmp(&a, &b) != Ordering::Greater && o.cmp(&b, &c) != Ordering::Greater {
                    prop_assert_ne!(o.cmp(&a, &c), Ordering::Greater);
                }
                // multiplicative
                let aw = a.mul(&w).unwrap();
                let bw = b.mul(&w).unwrap();
                prop_assert_eq!(o.cmp(&a, &b), o.cmp(&aw, &bw));
                // 1 is the minimum
                prop_assert_ne!(o.cmp(&Monomial::one(3), &a), Ordering::Greater);
            }
        }
    }
}
