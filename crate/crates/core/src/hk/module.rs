use crate::error::{Error, Result};
use crate::poly::Polynomial;

/// How a finitely generated `R`-module is presented.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleKind {
    /// `R / J`; an empty list gives `R` itself.
    Cyclic { ideal: Vec<Polynomial> },
    /// Cokernel of `R^m -> R^rows`; each relation is a column of length `rows`.
    Coker { rows: usize, relations: Vec<Vec<Polynomial>> },
    /// The ideal `J` of `R` viewed as a module.
    IdealAsModule { generators: Vec<Polynomial> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulePresentation {
    pub kind: ModuleKind,
    pub asserted_rank: Option<usize>,
}

impl ModulePresentation {
    pub fn cyclic(ideal: Vec<Polynomial>) -> Self {
        ModulePresentation {
            kind: ModuleKind::Cyclic { ideal },
            asserted_rank: None,
        }
    }

    /// The ring itself.
    pub fn ring() -> Self {
        Self::cyclic(Vec::new())
    }

    pub fn coker(rows: usize, relations: Vec<Vec<Polynomial>>) -> Result<Self> {
        if let Some(bad) = relations.iter().find(|c| c.len() != rows) {
            return Err(Error::Invalid(format!(
                "relation column of length {} in a presentation with {rows} rows",
                bad.len()
            )));
        }
        Ok(ModulePresentation {
            kind: ModuleKind::Coker { rows, relations },
            asserted_rank: None,
        })
    }

    /// `R^rows`.
    pub fn free(rows: usize) -> Self {
        ModulePresentation {
            kind: ModuleKind::Coker {
                rows,
                relations: Vec::new(),
            },
            asserted_rank: None,
        }
    }

    pub fn ideal_as_module(generators: Vec<Polynomial>) -> Self {
        ModulePresentation {
            kind: ModuleKind::IdealAsModule { generators },
            asserted_rank: None,
        }
    }

    pub fn with_rank(mut self, rank: usize) -> Self {
        self.asserted_rank = Some(rank);
        self
    }

    /// Block-diagonal presentation of `self ⊕ other`. Only cyclic and
    /// cokernel presentations combine directly.
    pub fn direct_sum(&self, other: &ModulePresentation) -> Result<ModulePresentation> {
        let (ra, ca) = self.as_coker()?;
        let (rb, cb) = other.as_coker()?;
        let zero = |template: &[Vec<Polynomial>], fallback: &[Vec<Polynomial>]| {
            template
                .iter()
                .chain(fallback)
                .flatten()
                .next()
                .map(|f| Polynomial::zero(f.ring()))
        };
        let z = zero(&ca, &cb);
        let mut cols = Vec::with_capacity(ca.len() + cb.len());
        for c in ca {
            let mut col = c.clone();
            col.extend((0..rb).map(|_| z.clone().unwrap()));
            cols.push(col);
        }
        for c in cb {
            let mut col: Vec<Polynomial> = (0..ra).map(|_| z.clone().unwrap()).collect();
            col.extend(c.iter().cloned());
            cols.push(col);
        }
        let mut out = ModulePresentation::coker(ra + rb, cols)?;
        if let (Some(a), Some(b)) = (self.asserted_rank, other.asserted_rank) {
            out.asserted_rank = Some(a + b);
        }
        Ok(out)
    }

    /// Rows and relation columns for cyclic and cokernel presentations.
    pub fn as_coker(&self) -> Result<(usize, Vec<Vec<Polynomial>>)> {
        match &self.kind {
            ModuleKind::Cyclic { ideal } => Ok((1, ideal.iter().map(|g| vec![g.clone()]).collect())),
            ModuleKind::Coker { rows, relations } => Ok((*rows, relations.clone())),
            ModuleKind::IdealAsModule { .. } => Err(Error::Invalid(
                "ideal-as-module presentation needs a syzygy computation; use PreparedModule".into(),
            )),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            ModuleKind::Cyclic { .. } => "cyclic",
            ModuleKind::Coker { .. } => "coker",
            ModuleKind::IdealAsModule { .. } => "idealmod",
        }
    }
}
