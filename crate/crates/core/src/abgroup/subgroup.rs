use std::collections::{BTreeSet, HashSet};
use std::sync::OnceLock;

use super::group::{Elem, FinAbGroup};
use super::hom::{cokernel_of_elements, AbHom, Cokernel};
use super::present::{canonicalize, relation_lattice};
use crate::error::{Error, Result};

/// A subgroup `⟨generators⟩ ≤ ambient` with its abstract structure and an
/// injective inclusion `abstract_group → ambient`.
#[derive(Clone, Debug)]
pub struct Subgroup {
    ambient: FinAbGroup,
    generators: Vec<Elem>,
    abstract_group: FinAbGroup,
    inclusion: AbHom,
    quotient: OnceLock<Cokernel>,
}

impl Subgroup {
    /// Structure of the subgroup generated by `gens`, via the lattice of
    /// relations among the generators reduced to Smith form.
    pub fn generated(ambient: &FinAbGroup, gens: Vec<Elem>) -> Result<Self> {
        if let Some(g) = gens.iter().find(|g| !ambient.is_element(g)) {
            return Err(Error::invalid(format!("{g:?} is not an element of {ambient}")));
        }
        let orders: Vec<u64> = gens.iter().map(|g| ambient.element_order(g)).collect();
        let lattice = relation_lattice(&gens, ambient.invariant_factors(), &orders);
        let p = canonicalize(&lattice, &orders)?;
        let abstract_group = FinAbGroup::new(p.factors)?;
        let cols = p
            .from_canon
            .iter()
            .map(|coeffs| {
                let mut acc = ambient.zero();
                for (g, &c) in gens.iter().zip(coeffs) {
                    if c != 0 {
                        acc = ambient.add(&acc, &ambient.scale(c, g));
                    }
                }
                acc
            })
            .collect();
        let inclusion = AbHom::from_columns(abstract_group.clone(), ambient.clone(), cols)?;
        Ok(Subgroup {
            ambient: ambient.clone(),
            generators: gens,
            abstract_group,
            inclusion,
            quotient: OnceLock::new(),
        })
    }

    pub fn trivial(ambient: &FinAbGroup) -> Self {
        Self::generated(ambient, Vec::new()).expect("empty generating set")
    }

    pub fn whole(ambient: &FinAbGroup) -> Self {
        let gens = (0..ambient.rank()).map(|i| ambient.generator(i)).collect();
        Self::generated(ambient, gens).expect("canonical generators")
    }

    pub fn ambient(&self) -> &FinAbGroup {
        &self.ambient
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn abstract_group(&self) -> &FinAbGroup {
        &self.abstract_group
    }

    pub fn inclusion(&self) -> &AbHom {
        &self.inclusion
    }

    pub fn is_trivial(&self) -> bool {
        self.abstract_group.is_trivial()
    }

    pub fn is_cyclic(&self) -> bool {
        self.abstract_group.is_cyclic()
    }

    pub fn order_u64(&self) -> Option<u64> {
        self.abstract_group.order_u64()
    }

    /// `ambient / self`, computed once.
    pub fn quotient(&self) -> &Cokernel {
        self.quotient
            .get_or_init(|| cokernel_of_elements(&self.ambient, self.inclusion.columns()))
    }

    pub fn contains(&self, x: &[u64]) -> bool {
        let q = self.quotient();
        q.group.is_zero_elem(&q.proj.apply(x))
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.ambient == other.ambient && self.generators.iter().all(|g| other.contains(g))
    }

    /// Same set of elements (possibly different generators).
    pub fn same_elements(&self, other: &Subgroup) -> bool {
        self.is_subgroup_of(other) && other.is_subgroup_of(self)
    }

    /// `self + other`.
    pub fn join(&self, other: &Subgroup) -> Result<Subgroup> {
        if self.ambient != other.ambient {
            return Err(Error::structural("join of subgroups of different groups"));
        }
        let gens = self
            .generators
            .iter()
            .chain(&other.generators)
            .cloned()
            .collect();
        Subgroup::generated(&self.ambient, gens)
    }

    /// `self ∩ other`: kernel of `self → ambient → ambient/other`, pushed into the ambient.
    pub fn intersect(&self, other: &Subgroup) -> Result<Subgroup> {
        if self.ambient != other.ambient {
            return Err(Error::structural("intersection of subgroups of different groups"));
        }
        let to_quot = other.quotient().proj.compose(&self.inclusion)?;
        let k = to_quot.kernel();
        let gens = k
            .inclusion()
            .columns()
            .iter()
            .map(|x| self.inclusion.apply(x))
            .collect();
        Subgroup::generated(&self.ambient, gens)
    }

    /// All elements, sorted lexicographically. For small subgroups.
    pub fn elements(&self) -> Vec<Elem> {
        let set: BTreeSet<Elem> = self
            .abstract_group
            .elements()
            .map(|x| self.inclusion.apply(&x))
            .collect();
        set.into_iter().collect()
    }
}

/// Structure and inclusion of `⟨gens⟩ ≤ ambient`.
pub fn subgroup_structure(ambient: &FinAbGroup, gens: Vec<Elem>) -> Result<Subgroup> {
    Subgroup::generated(ambient, gens)
}

impl FinAbGroup {
    /// Every subgroup, each listed once, ordered by order and then by element set.
    ///
    /// Brute force over element sets; refuses groups with more than `limit` elements.
    pub fn all_subgroups(&self, limit: u64) -> Result<Vec<Subgroup>> {
        let n = match self.order_u64() {
            Some(n) if n <= limit => n as usize,
            _ => {
                return Err(Error::SizeLimit(format!(
                    "subgroup enumeration of {self} (limit {limit})"
                )))
            }
        };
        let elems: Vec<Elem> = self.elements().collect();
        // key: sorted element indices; value: generators used to reach it
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut found: Vec<(Vec<usize>, Vec<Elem>)> = Vec::new();
        let trivial = vec![0usize];
        seen.insert(trivial.clone());
        found.push((trivial, Vec::new()));
        let mut frontier = 0;
        while frontier < found.len() {
            let (members, gens) = found[frontier].clone();
            frontier += 1;
            let mut in_sub = vec![false; n];
            for &i in &members {
                in_sub[i] = true;
            }
            for (gi, g) in elems.iter().enumerate() {
                if in_sub[gi] {
                    continue;
                }
                // ⟨S, g⟩ = ⋃_t (t·g + S)
                let mut bigger = in_sub.clone();
                let mut tg = g.clone();
                while !in_sub[self.element_index(&tg)] {
                    for &i in &members {
                        let s = self.add(&elems[i], &tg);
                        bigger[self.element_index(&s)] = true;
                    }
                    tg = self.add(&tg, g);
                }
                let key: Vec<usize> = (0..n).filter(|&i| bigger[i]).collect();
                if seen.insert(key.clone()) {
                    let mut new_gens = gens.clone();
                    new_gens.push(g.clone());
                    found.push((key, new_gens));
                }
            }
        }
        found.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
        found
            .into_iter()
            .map(|(_, gens)| Subgroup::generated(self, gens))
            .collect()
    }

    /// `⟨g⟩` for every element `g`, deduplicated, in the order of [`Self::all_subgroups`].
    pub fn cyclic_subgroups(&self, limit: u64) -> Result<Vec<Subgroup>> {
        Ok(self
            .all_subgroups(limit)?
            .into_iter()
            .filter(Subgroup::is_cyclic)
            .collect())
    }
}
