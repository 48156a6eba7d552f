//! Finite groups given by multiplication tables, with abelianizations and the
//! abelian maps that group homomorphisms induce.
//!
//! Permutations compose left to right: for permutations `x`, `y` of
//! `0..degree`, the product `x·y` sends `i` to `y[x[i]]`. This is the order in
//! which automorphisms compose when they act on embeddings from the right.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::abgroup::{canonicalize, AbHom, Elem, FinAbGroup};
use crate::error::{Error, Result};

const ASSOCIATIVITY_CHECK_LIMIT: usize = 256;

/// A finite group as an explicit multiplication table on `0..order`.
#[derive(Clone)]
pub struct CayleyGroup {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverses: Vec<usize>,
    names: Option<Vec<String>>,
    perms: Option<Vec<Vec<usize>>>,
    ab: OnceLock<Abelianization>,
}

/// `G / [G, G]` with the image of every element of `G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Abelianization {
    pub group: FinAbGroup,
    /// `coords[x]` is the class of element `x` in canonical coordinates.
    pub coords: Vec<Elem>,
}

impl fmt::Debug for CayleyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CayleyGroup(order {})", self.order)
    }
}

impl PartialEq for CayleyGroup {
    fn eq(&self, other: &Self) -> bool {
        self.table == other.table && self.identity == other.identity
    }
}

impl Eq for CayleyGroup {}

impl CayleyGroup {
    /// Validates a full multiplication table (`table[a][b] = a·b`).
    pub fn from_table(table: Vec<Vec<usize>>, names: Option<Vec<String>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::invalid("a group table needs at least one element"));
        }
        if let Some(names) = &names {
            if names.len() != n {
                return Err(Error::invalid(format!(
                    "{} names for {n} elements",
                    names.len()
                )));
            }
        }
        let mut flat = Vec::with_capacity(n * n);
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::invalid(format!("row {a} has length {}", row.len())));
            }
            if !is_permutation(row) {
                return Err(Error::invalid(format!("row {a} is not a permutation")));
            }
            flat.extend_from_slice(row);
        }
        for b in 0..n {
            let col: Vec<usize> = (0..n).map(|a| flat[a * n + b]).collect();
            if !is_permutation(&col) {
                return Err(Error::invalid(format!("column {b} is not a permutation")));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| flat[e * n + x] == x && flat[x * n + e] == x))
            .ok_or_else(|| Error::invalid("no two-sided identity"))?;
        if n <= ASSOCIATIVITY_CHECK_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    let ab = flat[a * n + b];
                    for c in 0..n {
                        if flat[ab * n + c] != flat[a * n + flat[b * n + c]] {
                            return Err(Error::invalid(format!(
                                "not associative at ({a}, {b}, {c})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(Self::assemble(n, flat, identity, names, None))
    }

    /// The group generated by permutations of a common set `0..degree`,
    /// numbered by breadth-first search from the identity in generator order.
    pub fn from_generators(bound: usize, generators: &[Vec<usize>]) -> Result<Self> {
        let degree = generators.first().map_or(0, Vec::len);
        for (k, g) in generators.iter().enumerate() {
            if g.len() != degree {
                return Err(Error::invalid(format!(
                    "generator {k} acts on {} points, expected {degree}",
                    g.len()
                )));
            }
            if !is_permutation(g) {
                return Err(Error::invalid(format!("generator {k} is not a permutation")));
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let mut elems = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for g in generators {
                let y = compose_perms(&elems[x], g);
                if !index.contains_key(&y) {
                    if elems.len() == bound {
                        return Err(Error::SizeLimit(format!(
                            "permutation group exceeds {bound} elements"
                        )));
                    }
                    index.insert(y.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(y);
                }
            }
        }
        let n = elems.len();
        let mut flat = Vec::with_capacity(n * n);
        for x in &elems {
            for y in &elems {
                flat.push(index[&compose_perms(x, y)]);
            }
        }
        Ok(Self::assemble(n, flat, 0, None, Some(elems)))
    }

    fn assemble(
        order: usize,
        table: Vec<usize>,
        identity: usize,
        names: Option<Vec<String>>,
        perms: Option<Vec<Vec<usize>>>,
    ) -> Self {
        let inverses = (0..order)
            .map(|a| {
                (0..order)
                    .find(|&b| table[a * order + b] == identity)
                    .expect("Latin square has inverses")
            })
            .collect();
        CayleyGroup {
            order,
            table,
            identity,
            inverses,
            names,
            perms,
            ab: OnceLock::new(),
        }
    }

    /// `Z/n` on `0..n` with addition.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("cyclic group of order 0"));
        }
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(table, None)
    }

    /// The table of a finite abelian group, elements numbered as in
    /// [`FinAbGroup::element_index`].
    pub fn from_abelian(g: &FinAbGroup, limit: usize) -> Result<Self> {
        let n = match g.order_u64() {
            Some(n) if n as usize <= limit => n as usize,
            _ => return Err(Error::SizeLimit(format!("table of {g} (limit {limit})"))),
        };
        let elems: Vec<Elem> = g.elements().collect();
        let mut flat = Vec::with_capacity(n * n);
        for x in &elems {
            for y in &elems {
                flat.push(g.element_index(&g.add(x, y)));
            }
        }
        Ok(Self::assemble(n, flat, 0, None, None))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// `a b a⁻¹ b⁻¹`
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        let ab = self.mul(a, b);
        let ab_ai = self.mul(ab, self.inv(a));
        self.mul(ab_ai, self.inv(b))
    }

    pub fn name(&self, a: usize) -> Option<&str> {
        self.names.as_ref().map(|n| n[a].as_str())
    }

    /// The permutation of element `a`, for groups built from generators.
    pub fn permutation(&self, a: usize) -> Option<&[usize]> {
        self.perms.as_ref().map(|p| p[a].as_slice())
    }

    /// The element acting as `perm`, for groups built from generators.
    pub fn element_of_permutation(&self, perm: &[usize]) -> Option<usize> {
        self.perms.as_ref()?.iter().position(|p| p == perm)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// The subgroup generated by `gens`, as a sorted index set.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order).filter(|&i| seen[i]).collect()
    }

    pub fn is_subgroup(&self, set: &[usize]) -> bool {
        let mut member = vec![false; self.order];
        for &x in set {
            if x >= self.order {
                return false;
            }
            member[x] = true;
        }
        member[self.identity]
            && set
                .iter()
                .all(|&a| set.iter().all(|&b| member[self.mul(a, self.inv(b))]))
    }

    /// Whether `set` is a normal subgroup.
    pub fn is_normal(&self, set: &[usize]) -> bool {
        if !self.is_subgroup(set) {
            return false;
        }
        let mut member = vec![false; self.order];
        for &x in set {
            member[x] = true;
        }
        (0..self.order).all(|g| {
            set.iter()
                .all(|&h| member[self.mul(self.mul(g, h), self.inv(g))])
        })
    }

    /// `[G, G]` as a sorted index set.
    pub fn commutator_subgroup(&self) -> Vec<usize> {
        let mut comms: Vec<usize> = (0..self.order)
            .flat_map(|a| (0..self.order).map(move |b| (a, b)))
            .map(|(a, b)| self.commutator(a, b))
            .collect();
        comms.sort_unstable();
        comms.dedup();
        self.closure(&comms)
    }

    /// Left cosets `gS` as a class index per element, numbered in order of
    /// first appearance, with one representative per class.
    fn coset_labels(&self, sub: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let mut label = vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        for g in 0..self.order {
            if label[g] != usize::MAX {
                continue;
            }
            for &h in sub {
                label[self.mul(g, h)] = reps.len();
            }
            reps.push(g);
        }
        (label, reps)
    }

    /// `G / [G, G]` in invariant-factor form, computed once.
    pub fn abelianization(&self) -> &Abelianization {
        self.ab.get_or_init(|| self.compute_abelianization())
    }

    fn compute_abelianization(&self) -> Abelianization {
        let comm = self.commutator_subgroup();
        let (label, reps) = self.coset_labels(&comm);
        let q = reps.len();
        let qmul = |a: usize, b: usize| label[self.mul(reps[a], reps[b])];
        let qid = label[self.identity];

        // Greedy generators of the abelian quotient, then a spanning tree of
        // its Cayley graph recording a coefficient vector for every class.
        let mut gens: Vec<usize> = Vec::new();
        let mut reached = vec![false; q];
        reached[qid] = true;
        let span = |gens: &[usize]| -> Vec<bool> {
            let mut seen = vec![false; q];
            seen[qid] = true;
            let mut queue = VecDeque::from([qid]);
            while let Some(x) = queue.pop_front() {
                for &g in gens {
                    let y = qmul(x, g);
                    if !seen[y] {
                        seen[y] = true;
                        queue.push_back(y);
                    }
                }
            }
            seen
        };
        for c in 0..q {
            if !reached[c] {
                gens.push(c);
                reached = span(&gens);
            }
        }
        let r = gens.len();
        let moduli: Vec<u64> = gens
            .iter()
            .map(|&g| {
                let mut x = g;
                let mut k = 1u64;
                while x != qid {
                    x = qmul(x, g);
                    k += 1;
                }
                k
            })
            .collect();
        let mut coeff: Vec<Option<Vec<u64>>> = vec![None; q];
        coeff[qid] = Some(vec![0; r]);
        let mut queue = VecDeque::from([qid]);
        let mut relations = Vec::new();
        while let Some(x) = queue.pop_front() {
            let cx = coeff[x].clone().expect("visited");
            for (k, &g) in gens.iter().enumerate() {
                let y = qmul(x, g);
                let mut cy = cx.clone();
                cy[k] = (cy[k] + 1) % moduli[k];
                match &coeff[y] {
                    None => {
                        coeff[y] = Some(cy);
                        queue.push_back(y);
                    }
                    Some(known) => {
                        let rel: Vec<u64> = cy
                            .iter()
                            .zip(known)
                            .zip(&moduli)
                            .map(|((&a, &b), &m)| (a + m - b) % m)
                            .collect();
                        if rel.iter().any(|&v| v != 0) {
                            relations.push(rel);
                        }
                    }
                }
            }
        }
        let p = canonicalize(&relations, &moduli).expect("orders bounded by the table size");
        let group = FinAbGroup::new(p.factors).expect("canonical factors");
        let class_coords: Vec<Elem> = coeff
            .iter()
            .map(|c| {
                let c = c.as_ref().expect("quotient spanned by its generators");
                p.to_canon
                    .iter()
                    .zip(group.invariant_factors())
                    .map(|(row, &e)| {
                        row.iter()
                            .zip(c)
                            .fold(0u128, |acc, (&a, &x)| (acc + a as u128 * x as u128) % e as u128)
                            as u64
                    })
                    .collect()
            })
            .collect();
        Abelianization {
            group,
            coords: (0..self.order).map(|g| class_coords[label[g]].clone()).collect(),
        }
    }

    /// The subgroup on `set` (renumbered in sorted order) and its inclusion.
    pub fn subgroup(self: &Arc<Self>, set: &[usize]) -> Result<(Arc<CayleyGroup>, GroupMap)> {
        let mut set = set.to_vec();
        set.sort_unstable();
        set.dedup();
        if !self.is_subgroup(&set) {
            return Err(Error::invalid("element set is not a subgroup"));
        }
        let pos: HashMap<usize, usize> = set.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let m = set.len();
        let mut flat = Vec::with_capacity(m * m);
        for &a in &set {
            for &b in &set {
                flat.push(pos[&self.mul(a, b)]);
            }
        }
        let names = self
            .names
            .as_ref()
            .map(|n| set.iter().map(|&x| n[x].clone()).collect());
        let perms = self
            .perms
            .as_ref()
            .map(|p| set.iter().map(|&x| p[x].clone()).collect());
        let sub = Arc::new(Self::assemble(m, flat, pos[&self.identity], names, perms));
        let map = GroupMap {
            source: sub.clone(),
            target: self.clone(),
            images: set,
        };
        Ok((sub, map))
    }

    /// `G / N` (cosets numbered by first appearance) and the projection.
    pub fn quotient(self: &Arc<Self>, normal: &[usize]) -> Result<(Arc<CayleyGroup>, GroupMap)> {
        let mut normal = normal.to_vec();
        normal.sort_unstable();
        normal.dedup();
        if !self.is_normal(&normal) {
            return Err(Error::invalid("element set is not a normal subgroup"));
        }
        let (label, reps) = self.coset_labels(&normal);
        let q = reps.len();
        let mut flat = Vec::with_capacity(q * q);
        for &a in &reps {
            for &b in &reps {
                flat.push(label[self.mul(a, b)]);
            }
        }
        let quot = Arc::new(Self::assemble(q, flat, label[self.identity], None, None));
        let map = GroupMap {
            source: self.clone(),
            target: quot.clone(),
            images: label,
        };
        Ok((quot, map))
    }
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    for &x in p {
        if x >= p.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

fn compose_perms(x: &[usize], y: &[usize]) -> Vec<usize> {
    x.iter().map(|&i| y[i]).collect()
}

/// A homomorphism between table groups, as the image of every element.
#[derive(Clone, Debug)]
pub struct GroupMap {
    source: Arc<CayleyGroup>,
    target: Arc<CayleyGroup>,
    images: Vec<usize>,
}

impl GroupMap {
    pub fn new(
        source: Arc<CayleyGroup>,
        target: Arc<CayleyGroup>,
        images: Vec<usize>,
    ) -> Result<Self> {
        if images.len() != source.order() || images.iter().any(|&y| y >= target.order()) {
            return Err(Error::invalid("image list does not match the groups"));
        }
        for a in 0..source.order() {
            for b in 0..source.order() {
                if images[source.mul(a, b)] != target.mul(images[a], images[b]) {
                    return Err(Error::invalid(format!(
                        "not multiplicative at ({a}, {b})"
                    )));
                }
            }
        }
        Ok(GroupMap {
            source,
            target,
            images,
        })
    }

    pub fn identity(g: &Arc<CayleyGroup>) -> Self {
        GroupMap {
            source: g.clone(),
            target: g.clone(),
            images: (0..g.order()).collect(),
        }
    }

    pub fn source(&self) -> &Arc<CayleyGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<CayleyGroup> {
        &self.target
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, a: usize) -> usize {
        self.images[a]
    }

    /// `self ∘ f`
    pub fn compose(&self, f: &GroupMap) -> Result<GroupMap> {
        if f.target != self.source {
            return Err(Error::structural("cannot compose table maps"));
        }
        Ok(GroupMap {
            source: f.source.clone(),
            target: self.target.clone(),
            images: f.images.iter().map(|&x| self.images[x]).collect(),
        })
    }

    /// The kernel as a sorted index set.
    pub fn kernel(&self) -> Vec<usize> {
        let e = self.target.identity();
        (0..self.source.order())
            .filter(|&x| self.images[x] == e)
            .collect()
    }

    /// The induced map `source^ab → target^ab`.
    pub fn induced_ab_map(&self) -> AbHom {
        let src = self.source.abelianization();
        let tgt = self.target.abelianization();
        let cols = (0..src.group.rank())
            .map(|k| {
                let gen = src.group.generator(k);
                let x = src
                    .coords
                    .iter()
                    .position(|c| *c == gen)
                    .expect("abelianization is surjective");
                tgt.coords[self.images[x]].clone()
            })
            .collect();
        AbHom::from_columns(src.group.clone(), tgt.group.clone(), cols)
            .expect("images of a group map respect element orders")
    }
}

/// The Galois group of `Q(i, 2^{1/4}, √3)/Q` as permutations of the 16
/// embeddings, with the subgroups fixing `Q(i, 2^{1/4})` and `Q(√2, √3)`.
///
/// Embedding `a + 4b + 8c` sends `2^{1/4} ↦ i^a 2^{1/4}`, `i ↦ (−1)^b i` and
/// `√3 ↦ (−1)^c √3`. An automorphism `s` acts by `e ↦ e ∘ s`.
#[derive(Clone, Debug)]
pub struct QuarticModel {
    pub group: Arc<CayleyGroup>,
    /// `2^{1/4} ↦ i·2^{1/4}`, fixing `i` and `√3`.
    pub sigma: usize,
    /// Complex conjugation.
    pub tau: usize,
    /// `√3 ↦ −√3`, fixing `i` and `2^{1/4}`.
    pub upsilon: usize,
    /// Elements fixing `Q(i, 2^{1/4})`.
    pub fixing_first: Vec<usize>,
    /// Elements fixing `Q(√2, √3)`.
    pub fixing_second: Vec<usize>,
}

impl QuarticModel {
    pub fn new() -> Self {
        let encode = |a: usize, b: usize, c: usize| a % 4 + 4 * (b % 2) + 8 * (c % 2);
        let decode = |e: usize| (e % 4, (e / 4) % 2, e / 8);
        // e ∘ s for s = (a_s, b_s, c_s): 2^{1/4} ↦ e(i^{a_s} 2^{1/4}) = i^{±a_s} i^{a_e} 2^{1/4}.
        let act = |s: (usize, usize, usize)| -> Vec<usize> {
            (0..16)
                .map(|e| {
                    let (a, b, c) = decode(e);
                    let shift = if b == 0 { s.0 } else { (4 - s.0) % 4 };
                    encode(a + shift, b + s.1, c + s.2)
                })
                .collect()
        };
        let gens = vec![act((1, 0, 0)), act((0, 1, 0)), act((0, 0, 1))];
        let group = Arc::new(
            CayleyGroup::from_generators(16, &gens).expect("sixteen embeddings"),
        );
        let find = |p: &Vec<usize>| group.element_of_permutation(p).expect("generator");
        let (sigma, tau, upsilon) = (find(&gens[0]), find(&gens[1]), find(&gens[2]));
        // The automorphism behind element x is the embedding it makes of the identity.
        let triple = |x: usize| decode(group.permutation(x).expect("permutation model")[0]);
        let fixing_first = (0..16)
            .filter(|&x| matches!(triple(x), (0, 0, _)))
            .collect();
        let fixing_second = (0..16)
            .filter(|&x| {
                let (a, _, c) = triple(x);
                a % 2 == 0 && c == 0
            })
            .collect();
        QuarticModel {
            group,
            sigma,
            tau,
            upsilon,
            fixing_first,
            fixing_second,
        }
    }
}

impl Default for QuarticModel {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dihedral8() -> Arc<CayleyGroup> {
        // rotation and reflection of a square
        let r = vec![1, 2, 3, 0];
        let s = vec![0, 3, 2, 1];
        Arc::new(CayleyGroup::from_generators(8, &[r, s]).unwrap())
    }

    #[test]
    fn generator_examples() {
        let c4 = CayleyGroup::from_generators(4, &[vec![1, 2, 3, 0]]).unwrap();
        assert_eq!(c4.order(), 4);
        assert!(c4.is_abelian());
        let trivial = CayleyGroup::from_generators(1, &[]).unwrap();
        assert_eq!(trivial.order(), 1);
        assert!(CayleyGroup::from_generators(3, &[vec![1, 2, 3, 0]]).is_err());
        assert!(CayleyGroup::from_generators(8, &[vec![0, 0]]).is_err());
    }

    #[test]
    fn table_validation() {
        assert!(CayleyGroup::from_table(vec![vec![0, 1], vec![1, 0]], None).is_ok());
        assert!(CayleyGroup::from_table(vec![vec![0, 1], vec![0, 1]], None).is_err());
        // a Latin square without associativity (a loop of order 5)
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(CayleyGroup::from_table(t, None).is_err());
    }

    #[test]
    fn dihedral_commutators() {
        let d8 = dihedral8();
        let comm = d8.commutator_subgroup();
        assert_eq!(comm.len(), 2);
        assert!(d8.is_normal(&comm));
        let r2 = d8.element_of_permutation(&[2, 3, 0, 1]).unwrap();
        assert!(comm.contains(&r2));
        let ab = d8.abelianization();
        assert_eq!(ab.group.invariant_factors(), &[2, 2]);
    }

    #[test]
    fn abelian_tables() {
        let c6 = CayleyGroup::cyclic(6).unwrap();
        assert_eq!(c6.commutator_subgroup(), vec![0]);
        let ab = c6.abelianization();
        assert_eq!(ab.group.invariant_factors(), &[6]);
        let mut seen = ab.coords.clone();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 6);

        let g = FinAbGroup::new(vec![2, 4]).unwrap();
        let t = CayleyGroup::from_abelian(&g, 64).unwrap();
        assert_eq!(t.abelianization().group, g);
    }

    #[test]
    fn quotient_and_subgroup() {
        let d8 = dihedral8();
        let comm = d8.commutator_subgroup();
        let (q, p) = d8.quotient(&comm).unwrap();
        assert_eq!(q.order(), 4);
        assert!(q.is_abelian());
        assert_eq!(p.kernel(), comm);
        let (sub, inc) = d8.subgroup(&comm).unwrap();
        assert_eq!(sub.order(), 2);
        assert!(inc.induced_ab_map().is_zero());
        let id = GroupMap::identity(&d8).induced_ab_map();
        assert_eq!(id, AbHom::identity(&FinAbGroup::new(vec![2, 2]).unwrap()));
    }

    #[test]
    fn quartic_model_presentation() {
        let m = QuarticModel::new();
        let g = &m.group;
        assert_eq!(g.order(), 16);
        assert_eq!(g.element_order(m.sigma), 4);
        assert_eq!(g.element_order(m.tau), 2);
        assert_eq!(g.element_order(m.upsilon), 2);
        // τστ = σ⁻¹ and υ is central
        assert_eq!(g.mul(g.mul(m.tau, m.sigma), m.tau), g.inv(m.sigma));
        assert!((0..16).all(|x| g.mul(x, m.upsilon) == g.mul(m.upsilon, x)));
        let sigma2 = g.mul(m.sigma, m.sigma);
        assert_eq!(g.commutator(m.sigma, m.tau), sigma2);
        assert_eq!(m.fixing_first, g.closure(&[m.upsilon]));
        assert_eq!(m.fixing_second, g.closure(&[sigma2, m.tau]));
        assert_eq!(g.abelianization().group.invariant_factors(), &[2, 2, 2]);
    }
}
