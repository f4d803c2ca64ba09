use num_bigint::{BigInt, BigUint};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groebner::{
    buchberger, ideal_basis, krull_dimension, matrix_rank_over_domain, maximal_minors, syzygies, Budget, Colength,
    ModuleDimension,
};
use crate::poly::{FreeModuleElement, Polynomial};

use super::{bracket_power, BracketPower, HkEntry, HkSeries, IdealHandle, ModuleKind, ModulePresentation, RingPresentation};

fn finite(c: Colength) -> Result<BigUint> {
    match c {
        Colength::Finite(n) => Ok(n),
        Colength::Infinite => Err(Error::InfiniteColength),
    }
}

/// A module as `P^rows / relations`, where the relations already include
/// `Q * e_i` for every basis vector. Lengths of `M / I^{[q]} M` are then
/// colengths of `relations + I^{[q]} * e_i`.
#[derive(Clone, Debug)]
pub struct PreparedModule {
    rows: usize,
    relations: Vec<FreeModuleElement>,
}

impl PreparedModule {
    pub fn new(ring: &RingPresentation, module: &ModulePresentation, budget: &Budget) -> Result<Self> {
        let pr = ring.poly_ring();
        let lift = |v: &[Polynomial]| -> Vec<Polynomial> { v.iter().map(|f| f.with_ring(pr)).collect() };
        match &module.kind {
            ModuleKind::Cyclic { .. } | ModuleKind::Coker { .. } => {
                let (rows, columns) = module.as_coker()?;
                let relations = columns
                    .iter()
                    .map(|c| FreeModuleElement::from_entries(pr, &lift(c)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Self::with_quotient(ring, rows, relations))
            }
            ModuleKind::IdealAsModule { generators } => {
                let cols: Vec<Vec<Polynomial>> = generators.iter().map(|g| vec![g.clone()]).collect();
                Self::column_module(ring, 1, &cols, budget)
            }
        }
    }

    /// The submodule of `R^rows` generated by `columns`, presented through
    /// the kernel of `R^m -> R^rows`.
    pub fn column_module(
        ring: &RingPresentation,
        rows: usize,
        columns: &[Vec<Polynomial>],
        budget: &Budget,
    ) -> Result<Self> {
        let pr = ring.poly_ring();
        let m = columns.len();
        let mut gens = Vec::with_capacity(m + rows * ring.quotient().len());
        for c in columns {
            if c.len() != rows {
                return Err(Error::Invalid("relation column of wrong length".into()));
            }
            let c: Vec<Polynomial> = c.iter().map(|f| f.with_ring(pr)).collect();
            gens.push(FreeModuleElement::from_entries(pr, &c)?);
        }
        for i in 0..rows {
            for q in ring.quotient() {
                gens.push(FreeModuleElement::basis_multiple(q, i, rows));
            }
        }
        let syz = syzygies(pr, &gens, budget)?;
        let kernel: Vec<FreeModuleElement> = syz
            .iter()
            .map(|s| FreeModuleElement::from_entries(pr, &s.entries()[..m]))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .filter(|v| !v.is_zero())
            .collect();
        Ok(Self::with_quotient(ring, m, kernel))
    }

    fn with_quotient(ring: &RingPresentation, rows: usize, mut relations: Vec<FreeModuleElement>) -> Self {
        let mut all = Vec::with_capacity(relations.len() + rows * ring.quotient().len());
        for i in 0..rows {
            for q in ring.quotient() {
                all.push(FreeModuleElement::basis_multiple(q, i, rows));
            }
        }
        all.append(&mut relations);
        PreparedModule { rows, relations: all }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn relations(&self) -> &[FreeModuleElement] {
        &self.relations
    }

    /// `λ(M / I^{[q]} M)`.
    pub fn length_modulo(&self, ring: &RingPresentation, bracket: &BracketPower, budget: &Budget) -> Result<BigUint> {
        if self.rows == 0 {
            return Ok(BigUint::default());
        }
        let pr = ring.poly_ring();
        let mut gens = Vec::with_capacity(self.relations.len() + self.rows * bracket.generators.len());
        // quotient relations first, then the bracket power, then the rest
        let nq = self.rows * ring.quotient().len();
        gens.extend_from_slice(&self.relations[..nq]);
        for i in 0..self.rows {
            for g in &bracket.generators {
                gens.push(FreeModuleElement::basis_multiple(g, i, self.rows));
            }
        }
        gens.extend_from_slice(&self.relations[nq..]);
        finite(buchberger(pr, self.rows, &gens, budget)?.colength())
    }
}

/// `e_n(R/J, I) = λ(P / (Q + J + I^{[q]}))`.
pub fn en_cyclic(
    ring: &RingPresentation,
    j: &[Polynomial],
    ideal: &IdealHandle,
    n: u32,
    budget: &Budget,
) -> Result<BigUint> {
    let br = bracket_power(ideal, ring, n)?;
    let pr = ring.poly_ring();
    let mut gens = ring.quotient().to_vec();
    gens.extend(br.generators);
    gens.extend(j.iter().map(|f| f.with_ring(pr)));
    finite(ideal_basis(pr, &gens, budget)?.colength())
}

/// `e_n(M, I) = λ(M / I^{[q]} M)` for any presentation.
pub fn en_module(
    ring: &RingPresentation,
    module: &ModulePresentation,
    ideal: &IdealHandle,
    n: u32,
    budget: &Budget,
) -> Result<BigUint> {
    if let ModuleKind::Cyclic { ideal: j } = &module.kind {
        return en_cyclic(ring, j, ideal, n, budget);
    }
    let prepared = PreparedModule::new(ring, module, budget)?;
    prepared.length_modulo(ring, &bracket_power(ideal, ring, n)?, budget)
}

/// Rank of `M` over the fraction field of `R`, taken from the asserted rank
/// when present. Assumes `Q` prime.
pub fn module_rank(ring: &RingPresentation, module: &ModulePresentation, budget: &Budget) -> Result<usize> {
    if let Some(r) = module.asserted_rank {
        return Ok(r);
    }
    let qgb = ring.quotient_basis();
    match &module.kind {
        ModuleKind::IdealAsModule { generators } => {
            if generators.is_empty() {
                return Ok(0);
            }
            matrix_rank_over_domain(std::slice::from_ref(generators), qgb, budget)
        }
        _ => {
            let (rows, cols) = module.as_coker()?;
            if cols.is_empty() {
                return Ok(rows);
            }
            let matrix: Vec<Vec<Polynomial>> = (0..rows).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
            Ok(rows - matrix_rank_over_domain(&matrix, qgb, budget)?)
        }
    }
}

/// Dimension of the support of `M`, via `Supp M = V(Fitt_0(M))`.
pub fn module_dimension(
    ring: &RingPresentation,
    module: &ModulePresentation,
    budget: &Budget,
) -> Result<ModuleDimension> {
    let pr = ring.poly_ring();
    let (rows, columns) = match &module.kind {
        ModuleKind::IdealAsModule { generators } => {
            let prep = PreparedModule::column_module(
                ring,
                1,
                &generators.iter().map(|g| vec![g.clone()]).collect::<Vec<_>>(),
                budget,
            )?;
            let nq = prep.rows * ring.quotient().len();
            let cols = prep.relations[nq..].iter().map(|v| v.entries()).collect();
            (prep.rows, cols)
        }
        _ => module.as_coker()?,
    };
    if rows == 0 {
        return Ok(ModuleDimension {
            dim: 0,
            zero_module: true,
        });
    }
    let columns: Vec<Vec<Polynomial>> = columns
        .iter()
        .map(|c| c.iter().map(|f| f.with_ring(pr)).collect())
        .collect();
    let mut gens = ring.quotient().to_vec();
    gens.extend(maximal_minors(&columns, rows, budget)?);
    let gb = ideal_basis(pr, &gens, budget)?;
    if gb.is_whole_module() {
        return Ok(ModuleDimension {
            dim: 0,
            zero_module: true,
        });
    }
    Ok(ModuleDimension {
        dim: krull_dimension(&gb),
        zero_module: false,
    })
}

/// `δ_n(M) = e_n(M) - r e_n(R)`.
pub fn delta_n(
    ring: &RingPresentation,
    module: &ModulePresentation,
    ideal: &IdealHandle,
    n: u32,
    rank: usize,
    budget: &Budget,
) -> Result<BigInt> {
    let em = en_module(ring, module, ideal, n, budget)?;
    let er = en_cyclic(ring, &[], ideal, n, budget)?;
    Ok(BigInt::from(em) - BigInt::from(rank) * BigInt::from(er))
}

struct TorData {
    rows: usize,
    target: PreparedModule,
    columns: PreparedModule,
}

impl TorData {
    fn new(ring: &RingPresentation, module: &ModulePresentation, budget: &Budget) -> Result<Self> {
        let (rows, cols) = match &module.kind {
            ModuleKind::IdealAsModule { .. } => {
                let p = PreparedModule::new(ring, module, budget)?;
                let nq = p.rows * ring.quotient().len();
                (p.rows, p.relations[nq..].iter().map(|v| v.entries()).collect())
            }
            _ => module.as_coker()?,
        };
        let target = PreparedModule::new(ring, &ModulePresentation::coker(rows, cols.clone())?, budget)?;
        let columns = PreparedModule::column_module(ring, rows, &cols, budget)?;
        Ok(TorData { rows, target, columns })
    }

    /// `λ(Tor_1(T, R/I^{[q]})) = e_n(N) + e_n(T) - s e_n(R)` for
    /// `0 -> N -> R^s -> T -> 0`.
    fn length(&self, ring: &RingPresentation, ideal: &IdealHandle, n: u32, budget: &Budget) -> Result<BigUint> {
        let br = bracket_power(ideal, ring, n)?;
        let en_n = self.columns.length_modulo(ring, &br, budget)?;
        let en_t = self.target.length_modulo(ring, &br, budget)?;
        let en_r = if self.rows == 0 {
            BigUint::default()
        } else {
            en_cyclic(ring, &[], ideal, n, budget)?
        };
        let total = BigInt::from(en_n) + BigInt::from(en_t) - BigInt::from(self.rows) * BigInt::from(en_r);
        total
            .try_into()
            .map_err(|_| Error::Invalid("negative Tor length; inconsistent presentation".into()))
    }
}

/// Length of `Tor_1^R(T, R/I^{[q]})`.
pub fn tor1_length(
    ring: &RingPresentation,
    module: &ModulePresentation,
    ideal: &IdealHandle,
    n: u32,
    budget: &Budget,
) -> Result<BigUint> {
    TorData::new(ring, module, budget)?.length(ring, ideal, n, budget)
}

/// A series plus the entries that could not be computed.
#[derive(Clone, Debug)]
pub struct SeriesOutcome {
    pub series: HkSeries,
    pub failures: Vec<(u32, Error)>,
}

impl SeriesOutcome {
    pub fn into_result(self) -> Result<HkSeries> {
        match self.failures.into_iter().next() {
            Some((_, e)) => Err(e),
            None => Ok(self.series),
        }
    }
}

fn collect_series(
    ring: &RingPresentation,
    n_max: u32,
    f: impl Fn(u32) -> Result<BigUint> + Sync,
) -> SeriesOutcome {
    let results: Vec<(u32, Result<BigUint>)> = (0..=n_max).into_par_iter().map(|n| (n, f(n))).collect();
    let mut entries = Vec::new();
    let mut failures = Vec::new();
    for (n, r) in results {
        match r.and_then(|v| Ok((ring.q(n)?, v))) {
            Ok((q, value)) => entries.push(HkEntry { n, q, value }),
            Err(e) => failures.push((n, e)),
        }
    }
    SeriesOutcome {
        series: HkSeries {
            module: String::new(),
            ideal: String::new(),
            p: ring.characteristic(),
            entries,
        },
        failures,
    }
}

/// `e_n(M, I)` for `n = 0..=n_max`. Entries are independent and evaluated
/// concurrently; the result is ordered by `n`.
pub fn series(
    ring: &RingPresentation,
    module: &ModulePresentation,
    ideal: &IdealHandle,
    n_max: u32,
    budget: &Budget,
) -> SeriesOutcome {
    let prepared = match &module.kind {
        ModuleKind::Cyclic { .. } => None,
        _ => match PreparedModule::new(ring, module, budget) {
            Ok(p) => Some(p),
            Err(e) => {
                return SeriesOutcome {
                    series: HkSeries {
                        module: String::new(),
                        ideal: String::new(),
                        p: ring.characteristic(),
                        entries: Vec::new(),
                    },
                    failures: (0..=n_max).map(|n| (n, e.clone())).collect(),
                }
            }
        },
    };
    collect_series(ring, n_max, |n| match (&prepared, &module.kind) {
        (Some(p), _) => p.length_modulo(ring, &bracket_power(ideal, ring, n)?, budget),
        (None, ModuleKind::Cyclic { ideal: j }) => en_cyclic(ring, j, ideal, n, budget),
        _ => unreachable!(),
    })
}

/// Tor lengths for `n = 0..=n_max`.
pub fn tor_series(
    ring: &RingPresentation,
    module: &ModulePresentation,
    ideal: &IdealHandle,
    n_max: u32,
    budget: &Budget,
) -> SeriesOutcome {
    match TorData::new(ring, module, budget) {
        Ok(data) => collect_series(ring, n_max, |n| data.length(ring, ideal, n, budget)),
        Err(e) => SeriesOutcome {
            series: HkSeries {
                module: String::new(),
                ideal: String::new(),
                p: ring.characteristic(),
                entries: Vec::new(),
            },
            failures: (0..=n_max).map(|n| (n, e.clone())).collect(),
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaEntry {
    pub n: u32,
    pub q: u64,
    #[serde(serialize_with = "crate::asymptotics::serialize_bigint")]
    pub value: BigInt,
}

/// `δ_n(M)` for consecutive `n`, with the rank used.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaSeries {
    pub p: u32,
    pub rank: usize,
    pub entries: Vec<DeltaEntry>,
}

/// `δ_n(M)` for `n = 0..=n_max`, from a module series and the ring series.
pub fn delta_series(module_series: &HkSeries, ring_series: &HkSeries, rank: usize) -> Result<DeltaSeries> {
    let mut entries = Vec::new();
    for e in &module_series.entries {
        let r = ring_series
            .get(e.n)
            .ok_or_else(|| Error::Invalid(format!("ring series lacks n = {}", e.n)))?;
        entries.push(DeltaEntry {
            n: e.n,
            q: e.q,
            value: BigInt::from(e.value.clone()) - BigInt::from(rank) * BigInt::from(r.clone()),
        });
    }
    Ok(DeltaSeries {
        p: module_series.p,
        rank,
        entries,
    })
}
