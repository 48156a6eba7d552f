use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::group::{mul_mod, Elem, FinAbGroup};
use super::present::{canonicalize, relation_lattice};
use super::snf::IntMatrix;
use super::subgroup::Subgroup;
use crate::error::{Error, Result};

/// A homomorphism of finite abelian groups.
///
/// Column `j` of the matrix is the image of the `j`-th canonical generator of
/// the source, in canonical coordinates of the target.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawHom", into = "RawHom")]
pub struct AbHom {
    source: FinAbGroup,
    target: FinAbGroup,
    columns: Vec<Elem>,
}

#[derive(Serialize, Deserialize)]
struct RawHom {
    source: FinAbGroup,
    target: FinAbGroup,
    /// Row-major, `target.rank()` rows by `source.rank()` columns.
    matrix: Vec<Vec<i64>>,
}

impl TryFrom<RawHom> for AbHom {
    type Error = Error;

    fn try_from(raw: RawHom) -> Result<Self> {
        let m = raw.target.rank();
        let n = raw.source.rank();
        if raw.matrix.len() != m || raw.matrix.iter().any(|r| r.len() != n) {
            return Err(Error::invalid(format!("hom matrix must be {m}×{n}")));
        }
        let cols = (0..n)
            .map(|j| (0..m).map(|i| raw.matrix[i][j] as i128).collect())
            .collect();
        AbHom::from_integer_columns(raw.source, raw.target, cols)
    }
}

impl From<AbHom> for RawHom {
    fn from(h: AbHom) -> Self {
        let matrix = (0..h.target.rank())
            .map(|i| h.columns.iter().map(|c| c[i] as i64).collect())
            .collect();
        RawHom {
            source: h.source,
            target: h.target,
            matrix,
        }
    }
}

impl AbHom {
    /// Builds a hom from canonical target elements, one per source generator,
    /// checking that `d_j · column_j = 0` in the target.
    pub fn from_columns(source: FinAbGroup, target: FinAbGroup, columns: Vec<Elem>) -> Result<Self> {
        if columns.len() != source.rank() {
            return Err(Error::structural(format!(
                "hom needs {} columns, got {}",
                source.rank(),
                columns.len()
            )));
        }
        for (j, c) in columns.iter().enumerate() {
            if c.len() != target.rank() {
                return Err(Error::structural(format!(
                    "column {j} has length {}, target rank is {}",
                    c.len(),
                    target.rank()
                )));
            }
        }
        let columns: Vec<Elem> = columns
            .into_iter()
            .map(|c| {
                c.iter()
                    .zip(target.invariant_factors())
                    .map(|(&a, &e)| a % e)
                    .collect()
            })
            .collect();
        for (j, (c, &d)) in columns.iter().zip(source.invariant_factors()).enumerate() {
            if !target.is_zero_elem(&target.scale(d, c)) {
                return Err(Error::invalid(format!(
                    "generator {j} has order {d} but its image {c:?} is not killed by {d}"
                )));
            }
        }
        Ok(AbHom {
            source,
            target,
            columns,
        })
    }

    pub(crate) fn from_integer_columns(
        source: FinAbGroup,
        target: FinAbGroup,
        columns: Vec<Vec<i128>>,
    ) -> Result<Self> {
        if columns.iter().any(|c| c.len() != target.rank()) {
            return Err(Error::structural("column length differs from target rank"));
        }
        let cols = columns.iter().map(|c| target.reduce(c)).collect();
        Self::from_columns(source, target, cols)
    }

    /// Builds a hom from an integer matrix (rows = target generators).
    pub fn from_matrix(source: FinAbGroup, target: FinAbGroup, matrix: &IntMatrix) -> Result<Self> {
        if matrix.rows() != target.rank() || matrix.cols() != source.rank() {
            return Err(Error::structural(format!(
                "matrix is {}×{}, expected {}×{}",
                matrix.rows(),
                matrix.cols(),
                target.rank(),
                source.rank()
            )));
        }
        let cols = (0..source.rank())
            .map(|j| {
                (0..target.rank())
                    .map(|i| {
                        let e = BigInt::from(target.invariant_factors()[i]);
                        let r = ((matrix.get(i, j) % &e) + &e) % &e;
                        r.to_u64().expect("residue below u64 modulus")
                    })
                    .collect()
            })
            .collect();
        Self::from_columns(source, target, cols)
    }

    pub(crate) fn from_columns_unchecked(
        source: FinAbGroup,
        target: FinAbGroup,
        columns: Vec<Elem>,
    ) -> Self {
        debug_assert!(Self::from_columns(source.clone(), target.clone(), columns.clone()).is_ok());
        AbHom {
            source,
            target,
            columns,
        }
    }

    pub fn identity(g: &FinAbGroup) -> Self {
        let cols = (0..g.rank()).map(|i| g.generator(i)).collect();
        AbHom::from_columns_unchecked(g.clone(), g.clone(), cols)
    }

    pub fn zero(source: &FinAbGroup, target: &FinAbGroup) -> Self {
        AbHom {
            source: source.clone(),
            target: target.clone(),
            columns: vec![target.zero(); source.rank()],
        }
    }

    pub fn source(&self) -> &FinAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FinAbGroup {
        &self.target
    }

    pub fn columns(&self) -> &[Elem] {
        &self.columns
    }

    pub fn matrix(&self) -> IntMatrix {
        IntMatrix::from_fn(self.target.rank(), self.source.rank(), |i, j| {
            BigInt::from(self.columns[j][i])
        })
    }

    pub fn apply(&self, x: &[u64]) -> Elem {
        debug_assert!(self.source.is_element(x), "{x:?} not in {}", self.source);
        let mut acc = vec![0u128; self.target.rank()];
        for (c, &xj) in self.columns.iter().zip(x) {
            if xj == 0 {
                continue;
            }
            for (i, (&a, &e)) in c.iter().zip(self.target.invariant_factors()).enumerate() {
                acc[i] = (acc[i] + mul_mod(a, xj % e, e) as u128) % e as u128;
            }
        }
        acc.into_iter().map(|v| v as u64).collect()
    }

    /// `self ∘ f`
    pub fn compose(&self, f: &AbHom) -> Result<AbHom> {
        if f.target != self.source {
            return Err(Error::structural(format!(
                "cannot compose: {} is not {}",
                f.target, self.source
            )));
        }
        let cols = f.columns.iter().map(|c| self.apply(c)).collect();
        Ok(AbHom::from_columns_unchecked(
            f.source.clone(),
            self.target.clone(),
            cols,
        ))
    }

    pub fn add(&self, other: &AbHom) -> Result<AbHom> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::structural("sum of homs with different source or target"));
        }
        let cols = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| self.target.add(a, b))
            .collect();
        Ok(AbHom::from_columns_unchecked(
            self.source.clone(),
            self.target.clone(),
            cols,
        ))
    }

    pub fn neg(&self) -> AbHom {
        let cols = self.columns.iter().map(|c| self.target.neg(c)).collect();
        AbHom::from_columns_unchecked(self.source.clone(), self.target.clone(), cols)
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| self.target.is_zero_elem(c))
    }

    pub fn image(&self) -> Subgroup {
        Subgroup::generated(&self.target, self.columns.clone()).expect("columns lie in the target")
    }

    pub fn kernel(&self) -> Subgroup {
        let lattice = relation_lattice(
            &self.columns,
            self.target.invariant_factors(),
            self.source.invariant_factors(),
        );
        Subgroup::generated(&self.source, lattice).expect("kernel vectors lie in the source")
    }

    pub fn cokernel(&self) -> Cokernel {
        cokernel_of_elements(&self.target, &self.columns)
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().group.is_trivial()
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().abstract_group().is_trivial()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.source.is_isomorphic(&self.target) && self.is_injective()
    }
}

/// `g ∘ f`
pub fn hom_compose(g: &AbHom, f: &AbHom) -> Result<AbHom> {
    g.compose(f)
}

/// The quotient `target / im` together with the projection onto it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cokernel {
    pub group: FinAbGroup,
    /// Surjection from the ambient target onto `group`.
    pub proj: AbHom,
    /// `lifts[i]` maps to the `i`-th canonical generator of `group`.
    pub lifts: Vec<Elem>,
}

impl Cokernel {
    /// A preimage of `q` under [`Self::proj`].
    pub fn lift(&self, q: &[u64]) -> Elem {
        let ambient = self.proj.source();
        let mut acc = ambient.zero();
        for (l, &k) in self.lifts.iter().zip(q) {
            if k != 0 {
                acc = ambient.add(&acc, &ambient.scale(k, l));
            }
        }
        acc
    }
}

/// `ambient / ⟨elems⟩`.
pub fn cokernel_of_elements(ambient: &FinAbGroup, elems: &[Elem]) -> Cokernel {
    let p = canonicalize(elems, ambient.invariant_factors())
        .expect("quotient factors divide the ambient exponent");
    let group = FinAbGroup::new(p.factors).expect("canonical factors");
    let cols = (0..ambient.rank())
        .map(|j| p.to_canon.iter().map(|row| row[j]).collect())
        .collect();
    let proj = AbHom::from_columns_unchecked(ambient.clone(), group.clone(), cols);
    Cokernel {
        group,
        proj,
        lifts: p.from_canon,
    }
}

/// Cokernel of `f` as a pair `(Q, target → Q)`.
pub fn cokernel(f: &AbHom) -> Cokernel {
    f.cokernel()
}

pub fn kernel(f: &AbHom) -> Subgroup {
    f.kernel()
}

pub fn image(f: &AbHom) -> Subgroup {
    f.image()
}

/// `ambient / sub` with its projection.
pub fn quotient_by(sub: &Subgroup) -> Cokernel {
    cokernel_of_elements(sub.ambient(), &sub.inclusion().columns)
}

/// A direct sum in invariant-factor form with its structure maps.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub group: FinAbGroup,
    pub summands: Vec<FinAbGroup>,
    pub injections: Vec<AbHom>,
    pub projections: Vec<AbHom>,
}

impl DirectSum {
    pub fn new(summands: &[FinAbGroup]) -> Result<Self> {
        let moduli: Vec<u64> = summands
            .iter()
            .flat_map(|g| g.invariant_factors().iter().copied())
            .collect();
        let p = canonicalize(&[], &moduli)?;
        let group = FinAbGroup::new(p.factors)?;
        let mut injections = Vec::with_capacity(summands.len());
        let mut projections = Vec::with_capacity(summands.len());
        let mut offset = 0;
        for g in summands {
            let k = g.rank();
            let inj_cols = (offset..offset + k)
                .map(|j| p.to_canon.iter().map(|row| row[j]).collect())
                .collect();
            injections.push(AbHom::from_columns_unchecked(
                g.clone(),
                group.clone(),
                inj_cols,
            ));
            let proj_cols = p
                .from_canon
                .iter()
                .map(|c| c[offset..offset + k].to_vec())
                .collect();
            projections.push(AbHom::from_columns_unchecked(
                group.clone(),
                g.clone(),
                proj_cols,
            ));
            offset += k;
        }
        Ok(DirectSum {
            group,
            summands: summands.to_vec(),
            injections,
            projections,
        })
    }

    /// The element with the given components.
    pub fn combine(&self, parts: &[Elem]) -> Elem {
        let mut acc = self.group.zero();
        for (inj, x) in self.injections.iter().zip(parts) {
            acc = self.group.add(&acc, &inj.apply(x));
        }
        acc
    }

    pub fn split(&self, x: &[u64]) -> Vec<Elem> {
        self.projections.iter().map(|p| p.apply(x)).collect()
    }

    /// `Σ_i maps[i] ∘ proj_i`: the hom out of the sum that is `maps[i]` on summand `i`.
    pub fn copair(&self, maps: &[AbHom]) -> Result<AbHom> {
        if maps.len() != self.summands.len() {
            return Err(Error::structural("one map per summand required"));
        }
        let target = maps
            .first()
            .map(|m| m.target().clone())
            .ok_or_else(|| Error::structural("copair of an empty sum"))?;
        let mut acc = AbHom::zero(&self.group, &target);
        for (m, p) in maps.iter().zip(&self.projections) {
            acc = acc.add(&m.compose(p)?)?;
        }
        Ok(acc)
    }

    /// `Σ_i inj_i ∘ maps[i]`: the hom into the sum with components `maps[i]`.
    pub fn pair(&self, maps: &[AbHom]) -> Result<AbHom> {
        if maps.len() != self.summands.len() {
            return Err(Error::structural("one map per summand required"));
        }
        let source = maps
            .first()
            .map(|m| m.source().clone())
            .ok_or_else(|| Error::structural("pair into an empty sum"))?;
        let mut acc = AbHom::zero(&source, &self.group);
        for (m, inj) in maps.iter().zip(&self.injections) {
            acc = acc.add(&inj.compose(m)?)?;
        }
        Ok(acc)
    }
}

/// `G ⊕ H` in invariant-factor form.
pub fn direct_sum(g: &FinAbGroup, h: &FinAbGroup) -> FinAbGroup {
    DirectSum::new(&[g.clone(), h.clone()])
        .expect("sum of u64-bounded groups")
        .group
}
