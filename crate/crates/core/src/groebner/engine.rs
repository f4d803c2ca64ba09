use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{PrimeModulus, Scalar};
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::{ModTerm, PolyRing};

use super::{Budget, GbStats};

pub(super) struct Elem {
    pub terms: Vec<ModTerm>,
    /// Every term lives in the leading position.
    pub single_pos: bool,
}

impl Elem {
    fn new(terms: Vec<ModTerm>) -> Self {
        let pos = terms[0].pos;
        let single_pos = terms.iter().all(|t| t.pos == pos);
        Elem { terms, single_pos }
    }

    #[inline]
    fn pos(&self) -> u32 {
        self.terms[0].pos
    }

    #[inline]
    fn lead(&self) -> &Monomial {
        &self.terms[0].mon
    }
}

/// `a + c*m*b`, both canonical in position-over-term order.
fn merge_tail(
    p: PrimeModulus,
    order: MonomialOrder,
    a: &[ModTerm],
    c: Scalar,
    m: &Monomial,
    b: &[ModTerm],
) -> Result<Vec<ModTerm>> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut i = 0;
    for t in b {
        let mon = t.mon.mul(m)?;
        let coeff = p.mul(t.coeff, c);
        loop {
            match a.get(i) {
                Some(x) => match order.cmp_module(x.pos, &x.mon, t.pos, &mon) {
                    Ordering::Greater => {
                        out.push(x.clone());
                        i += 1;
                    }
                    Ordering::Equal => {
                        let s = p.add(x.coeff, coeff);
                        if !s.is_zero() {
                            out.push(ModTerm { pos: t.pos, mon, coeff: s });
                        }
                        i += 1;
                        break;
                    }
                    Ordering::Less => {
                        out.push(ModTerm { pos: t.pos, mon, coeff });
                        break;
                    }
                },
                None => {
                    out.push(ModTerm { pos: t.pos, mon, coeff });
                    break;
                }
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    Ok(out)
}

/// Merges two vectors sorted ascending in position-over-term order, adding
/// coefficients of equal terms.
fn merge_ascending(p: PrimeModulus, order: MonomialOrder, a: Vec<ModTerm>, b: Vec<ModTerm>) -> Vec<ModTerm> {
    if a.is_empty() {
        return b;
    }
    if b.is_empty() {
        return a;
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut a = a.into_iter().peekable();
    let mut b = b.into_iter().peekable();
    loop {
        let ord = match (a.peek(), b.peek()) {
            (Some(x), Some(y)) => order.cmp_module(x.pos, &x.mon, y.pos, &y.mon),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => break,
        };
        match ord {
            Ordering::Less => out.push(a.next().unwrap()),
            Ordering::Greater => out.push(b.next().unwrap()),
            Ordering::Equal => {
                let mut x = a.next().unwrap();
                let y = b.next().unwrap();
                x.coeff = p.add(x.coeff, y.coeff);
                if !x.coeff.is_zero() {
                    out.push(x);
                }
            }
        }
    }
    out
}

/// Geometric bucket accumulator for reductions. Bucket `i` holds at most
/// `4^(i+1)` terms, sorted ascending so the leading term is last.
struct Bucket {
    p: PrimeModulus,
    order: MonomialOrder,
    buckets: Vec<Vec<ModTerm>>,
}

impl Bucket {
    fn new(p: PrimeModulus, order: MonomialOrder, descending: Vec<ModTerm>) -> Self {
        let mut b = Bucket {
            p,
            order,
            buckets: Vec::new(),
        };
        let mut asc = descending;
        asc.reverse();
        b.add_ascending(asc);
        b
    }

    fn capacity(i: usize) -> usize {
        4usize.saturating_pow(i as u32 + 1)
    }

    fn add_ascending(&mut self, mut v: Vec<ModTerm>) {
        if v.is_empty() {
            return;
        }
        let mut i = 0;
        while Self::capacity(i) < v.len() {
            i += 1;
        }
        loop {
            if self.buckets.len() <= i {
                self.buckets.resize_with(i + 1, Vec::new);
            }
            let cur = std::mem::take(&mut self.buckets[i]);
            v = merge_ascending(self.p, self.order, cur, v);
            if v.len() <= Self::capacity(i) {
                self.buckets[i] = v;
                return;
            }
            i += 1;
        }
    }

    fn pop_leading(&mut self) -> Option<ModTerm> {
        loop {
            let mut best: Option<usize> = None;
            for (i, b) in self.buckets.iter().enumerate() {
                let Some(t) = b.last() else { continue };
                best = match best {
                    None => Some(i),
                    Some(k) => {
                        let u = self.buckets[k].last().unwrap();
                        if self.order.cmp_module(t.pos, &t.mon, u.pos, &u.mon) == Ordering::Greater {
                            Some(i)
                        } else {
                            Some(k)
                        }
                    }
                };
            }
            let k = best?;
            let mut lt = self.buckets[k].pop().unwrap();
            for i in 0..self.buckets.len() {
                if i == k {
                    continue;
                }
                if let Some(t) = self.buckets[i].pop_if(|t| t.pos == lt.pos && t.mon == lt.mon) {
                    lt.coeff = self.p.add(lt.coeff, t.coeff);
                }
            }
            if !lt.coeff.is_zero() {
                return Some(lt);
            }
        }
    }
}

/// Reduction against a fixed set of monic vectors with pairwise
/// incomparable leading terms.
pub(super) struct Reducer {
    p: PrimeModulus,
    order: MonomialOrder,
    elems: Vec<Elem>,
    by_pos: Vec<Vec<usize>>,
}

impl Reducer {
    pub fn from_basis(ring: &Arc<PolyRing>, basis: &[crate::poly::FreeModuleElement]) -> Self {
        let mut r = Reducer {
            p: ring.modulus(),
            order: ring.order(),
            elems: Vec::new(),
            by_pos: Vec::new(),
        };
        for e in basis {
            if !e.is_zero() {
                r.push(e.terms().to_vec());
            }
        }
        r
    }

    fn push(&mut self, terms: Vec<ModTerm>) -> usize {
        let idx = self.elems.len();
        let pos = terms[0].pos as usize;
        if self.by_pos.len() <= pos {
            self.by_pos.resize(pos + 1, Vec::new());
        }
        self.by_pos[pos].push(idx);
        self.elems.push(Elem::new(terms));
        idx
    }

    fn find_divisor(&self, pos: u32, mon: &Monomial) -> Option<usize> {
        self.by_pos
            .get(pos as usize)?
            .iter()
            .copied()
            .find(|&j| self.elems[j].lead().divides(mon))
    }

    /// Full reduction: no term of the result is divisible by a leading term.
    pub fn normal_form(&self, f: Vec<ModTerm>) -> Result<Vec<ModTerm>> {
        let mut acc = Bucket::new(self.p, self.order, f);
        let mut rem = Vec::new();
        while let Some(lt) = acc.pop_leading() {
            match self.find_divisor(lt.pos, &lt.mon) {
                Some(j) => self.subtract_multiple(&mut acc, &lt, j)?,
                None => rem.push(lt),
            }
        }
        Ok(rem)
    }

    /// Cancels the popped term `lt` against element `j`.
    fn subtract_multiple(&self, acc: &mut Bucket, lt: &ModTerm, j: usize) -> Result<()> {
        let g = &self.elems[j];
        let m = g.lead().quotient_of(&lt.mon).unwrap();
        let lc = g.terms[0].coeff;
        let c = if lc == Scalar::ONE {
            self.p.neg(lt.coeff)
        } else {
            self.p.neg(self.p.mul(lt.coeff, self.p.inv(lc)))
        };
        let mut scaled = Vec::with_capacity(g.terms.len() - 1);
        for t in g.terms[1..].iter().rev() {
            scaled.push(ModTerm {
                pos: t.pos,
                mon: t.mon.mul(&m)?,
                coeff: self.p.mul(t.coeff, c),
            });
        }
        acc.add_ascending(scaled);
        Ok(())
    }

    /// S-vector of elements `i` and `j`; `None` for different positions.
    pub fn s_vector(&self, i: usize, j: usize) -> Result<Option<Vec<ModTerm>>> {
        let (a, b) = (&self.elems[i], &self.elems[j]);
        if a.pos() != b.pos() {
            return Ok(None);
        }
        let l = a.lead().lcm(b.lead());
        let ma = a.lead().quotient_of(&l).unwrap();
        let mb = b.lead().quotient_of(&l).unwrap();
        let ca = self.p.inv(a.terms[0].coeff);
        let cb = self.p.neg(self.p.inv(b.terms[0].coeff));
        let left = merge_tail(self.p, self.order, &[], ca, &ma, &a.terms[1..])?;
        Ok(Some(merge_tail(self.p, self.order, &left, cb, &mb, &b.terms[1..])?))
    }
}

fn make_monic(p: PrimeModulus, mut f: Vec<ModTerm>) -> Vec<ModTerm> {
    let inv = p.inv(f[0].coeff);
    if inv != Scalar::ONE {
        for t in &mut f {
            t.coeff = p.mul(t.coeff, inv);
        }
    }
    f
}

struct State<'a> {
    red: Reducer,
    active: Vec<bool>,
    pairs: BTreeMap<(u64, usize, usize), Monomial>,
    budget: &'a Budget,
    stats: GbStats,
}

impl State<'_> {
    fn coprime_applies(&self, i: usize, j: usize) -> bool {
        let (a, b) = (&self.red.elems[i], &self.red.elems[j]);
        a.single_pos && b.single_pos && a.lead().is_coprime(b.lead())
    }

    /// Gebauer–Möller update with the new element `h`.
    fn update(&mut self, h: usize) {
        let hpos = self.red.elems[h].pos();
        let hlead = self.red.elems[h].lead().clone();
        let mut cands: Vec<(usize, Monomial, bool)> = Vec::new();
        if let Some(list) = self.red.by_pos.get(hpos as usize) {
            for &g in list {
                if g != h && self.active[g] {
                    let l = hlead.lcm(self.red.elems[g].lead());
                    cands.push((g, l, self.coprime_applies(h, g)));
                }
            }
        }
        let mut kept: Vec<(usize, Monomial, bool)> = Vec::new();
        for k in 0..cands.len() {
            let (_, ref l, coprime) = cands[k];
            let dominated = !coprime
                && (cands[k + 1..].iter().any(|c| c.1.divides(l))
                    || kept.iter().any(|c| c.1.divides(l)));
            if dominated {
                self.stats.pairs_pruned += 1;
            } else {
                kept.push(cands[k].clone());
            }
        }
        let elems = &self.red.elems;
        let before = self.pairs.len();
        self.pairs.retain(|&(_, a, b), l| {
            if elems[a].pos() != hpos || !hlead.divides(l) {
                return true;
            }
            let la = elems[a].lead().lcm(&hlead);
            let lb = elems[b].lead().lcm(&hlead);
            la == *l || lb == *l
        });
        self.stats.pairs_pruned += before - self.pairs.len();
        for (g, l, coprime) in kept {
            if coprime {
                self.stats.pairs_pruned += 1;
                continue;
            }
            let (i, j) = if g < h { (g, h) } else { (h, g) };
            self.pairs.insert((l.degree(), i, j), l);
        }
        for list in self.red.by_pos.get(hpos as usize).into_iter() {
            for &g in list {
                if g != h && self.active[g] && hlead.divides(self.red.elems[g].lead()) {
                    self.active[g] = false;
                }
            }
        }
    }

    fn insert(&mut self, f: Vec<ModTerm>) -> Result<()> {
        if self.red.elems.len() >= self.budget.max_basis {
            return Err(Error::BudgetExceeded {
                what: "basis size",
                limit: self.budget.max_basis,
            });
        }
        let f = make_monic(self.red.p, f);
        let h = self.red.elems.len();
        self.red.push(f);
        self.active.push(true);
        self.stats.elements_added += 1;
        self.update(h);
        // inactive elements stay in the arena for pending pairs but no
        // longer reduce
        self.refresh_reducers();
        Ok(())
    }

    fn refresh_reducers(&mut self) {
        let active = &self.active;
        for list in &mut self.red.by_pos {
            list.retain(|&g| active[g]);
        }
    }
}

/// Runs Buchberger's algorithm and returns the reduced basis, sorted by
/// descending leading term.
pub(super) fn run(
    ring: &Arc<PolyRing>,
    inputs: Vec<Vec<ModTerm>>,
    budget: &Budget,
) -> Result<(Vec<Vec<ModTerm>>, GbStats)> {
    let p = ring.modulus();
    let order = ring.order();
    let mut st = State {
        red: Reducer {
            p,
            order,
            elems: Vec::new(),
            by_pos: Vec::new(),
        },
        active: Vec::new(),
        pairs: BTreeMap::new(),
        budget,
        stats: GbStats::default(),
    };

    for f in inputs {
        if f.is_empty() {
            continue;
        }
        let f = st.red.normal_form(f)?;
        if !f.is_empty() {
            st.insert(f)?;
        }
    }

    while let Some((key, _)) = st.pairs.pop_first() {
        if st.stats.pairs_reduced >= budget.max_pairs {
            return Err(Error::BudgetExceeded {
                what: "S-pairs",
                limit: budget.max_pairs,
            });
        }
        st.stats.pairs_reduced += 1;
        let (_, i, j) = key;
        let Some(s) = st.red.s_vector(i, j)? else {
            continue;
        };
        let r = st.red.normal_form(s)?;
        if r.is_empty() {
            st.stats.zero_reductions += 1;
        } else {
            st.insert(r)?;
        }
    }

    // interreduce the minimal basis
    let minimal: Vec<usize> = (0..st.red.elems.len()).filter(|&i| st.active[i]).collect();
    let mut out = Vec::with_capacity(minimal.len());
    for &i in &minimal {
        let terms = &st.red.elems[i].terms;
        let mut tail = st.red.normal_form(terms[1..].to_vec())?;
        let mut full = Vec::with_capacity(tail.len() + 1);
        full.push(terms[0].clone());
        full.append(&mut tail);
        out.push(full);
    }
    out.sort_by(|a, b| order.cmp_module(b[0].pos, &b[0].mon, a[0].pos, &a[0].mon));
    Ok((out, st.stats))
}
