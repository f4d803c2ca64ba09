use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::{FreeModuleElement, ModTerm, PolyRing};

use super::{buchberger, Budget};

/// Generators of the syzygy module `{a in P^m : sum a_i g_i = 0}`.
///
/// Each `g_i in P^t` is tagged with the unit vector `e_{t+i}` and a
/// position-over-term basis of the tagged module is computed; basis
/// elements whose leading position is a tag position vanish in the first
/// `t` coordinates and their tag parts generate the syzygies.
pub fn syzygies(
    ring: &Arc<PolyRing>,
    gens: &[FreeModuleElement],
    budget: &Budget,
) -> Result<Vec<FreeModuleElement>> {
    let Some(first) = gens.first() else {
        return Ok(Vec::new());
    };
    let t = first.rank();
    if gens.iter().any(|g| g.rank() != t) {
        return Err(Error::RankMismatch("syzygy generators of differing rank".into()));
    }
    let m = gens.len();
    let one = crate::monomial::Monomial::one(ring.nvars());
    let tagged: Vec<FreeModuleElement> = gens
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let mut terms: Vec<ModTerm> = g.with_ring(ring).terms().to_vec();
            terms.push(ModTerm {
                pos: (t + i) as u32,
                mon: one.clone(),
                coeff: crate::field::Scalar::ONE,
            });
            FreeModuleElement::from_mod_terms(ring, t + m, terms)
        })
        .collect();
    let gb = buchberger(ring, t + m, &tagged, budget)?;
    Ok(gb
        .elements()
        .iter()
        .filter(|e| e.leading_term().unwrap().pos as usize >= t)
        .map(|e| {
            let terms = e
                .terms()
                .iter()
                .map(|x| ModTerm {
                    pos: x.pos - t as u32,
                    ..x.clone()
                })
                .collect();
            FreeModuleElement::from_mod_terms(ring, m, terms)
        })
        .collect())
}
