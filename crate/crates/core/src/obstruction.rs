//! Obstructions to norm principles for abelian extensions.
//!
//! For an abelian extension with Galois group `G` and decomposition groups
//! `G^v`, the obstruction to the Hasse norm principle is the cokernel of
//! `ε = Σ_v ι^v ∧ ι^v : ⊕_v G^v ∧ G^v → G ∧ G`. For a pair `L₁, L₂` with
//! compositum `L` and intersection `E`, the multinorm obstruction is the
//! cokernel of `T : Sha(L) → Sha(L₁) × Sha(L₂)`, and it agrees with the
//! obstruction for `E`. [`theorem1_certificate`] checks this agreement on a
//! single instance by building the comparison maps in both directions.

use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;

use crate::abgroup::{cokernel_of_elements, AbHom, Cokernel, DirectSum, Elem, FinAbGroup, Subgroup};
use crate::error::{Error, Result};
use crate::grouptable::{CayleyGroup, GroupMap};
use crate::wedge::{wedge_hom_between, ExteriorSquare};

/// Groups up to this order are enumerated when choosing sections and
/// checking the bilinear identities of a tower.
pub const TOWER_ENUMERATION_LIMIT: u64 = 1 << 16;

/// Decomposition groups of finitely many places, as subgroups of one group.
///
/// Places with cyclic decomposition group contribute nothing to `ε`, so a
/// family describes an extension faithfully as long as it lists every place
/// whose decomposition group is not cyclic.
#[derive(Clone, Debug)]
pub struct LocalFamily {
    ambient: FinAbGroup,
    places: Vec<Subgroup>,
    labels: Option<Vec<String>>,
}

impl LocalFamily {
    pub fn new(ambient: &FinAbGroup, places: Vec<Subgroup>) -> Result<Self> {
        if let Some(p) = places.iter().find(|p| p.ambient() != ambient) {
            return Err(Error::structural(format!(
                "place subgroup lives in {}, family in {ambient}",
                p.ambient()
            )));
        }
        Ok(LocalFamily {
            ambient: ambient.clone(),
            places,
            labels: None,
        })
    }

    /// One place per generator list.
    pub fn from_generators(ambient: &FinAbGroup, places: Vec<Vec<Elem>>) -> Result<Self> {
        let subs = places
            .into_iter()
            .map(|gens| Subgroup::generated(ambient, gens))
            .collect::<Result<_>>()?;
        Self::new(ambient, subs)
    }

    /// Every cyclic subgroup of `ambient`, each once.
    pub fn all_cyclic(ambient: &FinAbGroup, limit: u64) -> Result<Self> {
        let subs = ambient.cyclic_subgroups(limit)?;
        Self::new(ambient, subs)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.places.len() {
            return Err(Error::invalid(format!(
                "{} labels for {} places",
                labels.len(),
                self.places.len()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn ambient(&self) -> &FinAbGroup {
        &self.ambient
    }

    pub fn places(&self) -> &[Subgroup] {
        &self.places
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn len(&self) -> usize {
        self.places.len()
    }

    pub fn is_empty(&self) -> bool {
        self.places.is_empty()
    }

    /// Generators of each place.
    pub fn generator_lists(&self) -> Vec<Vec<Elem>> {
        self.places.iter().map(|p| p.generators().to_vec()).collect()
    }

    fn check_ambient(&self, g: &FinAbGroup) -> Result<()> {
        if &self.ambient != g {
            return Err(Error::structural(format!(
                "family lives in {}, expected {g}",
                self.ambient
            )));
        }
        Ok(())
    }
}

/// Generators of `im ε`: the wedges of pairs of generators of each place.
fn wedge_span(w: &ExteriorSquare, places: &[Vec<Elem>]) -> Vec<Elem> {
    let mut out = Vec::new();
    for gens in places {
        for (a, x) in gens.iter().enumerate() {
            for y in &gens[a + 1..] {
                let v = w.wedge(x, y);
                if v.iter().any(|&c| c != 0) {
                    out.push(v);
                }
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// `G ∧ G / im ε` with the generators of `im ε` it was built from.
struct ShaQuotient {
    eps: Vec<Elem>,
    coker: Cokernel,
}

impl ShaQuotient {
    fn new(w: &ExteriorSquare, places: &[Vec<Elem>]) -> Self {
        let eps = wedge_span(w, places);
        let coker = cokernel_of_elements(w.group(), &eps);
        ShaQuotient { eps, coker }
    }

    fn group(&self) -> &FinAbGroup {
        &self.coker.group
    }

    fn kills(&self, x: &[u64]) -> bool {
        self.coker.group.is_zero_elem(&self.coker.proj.apply(x))
    }
}

/// `ε = Σ_v ι^v ∧ ι^v`, out of the direct sum of the places' exterior squares.
pub fn epsilon_map(g: &FinAbGroup, family: &LocalFamily) -> Result<AbHom> {
    family.check_ambient(g)?;
    let wg = ExteriorSquare::new(g);
    if family.is_empty() {
        return Ok(AbHom::zero(&FinAbGroup::trivial(), wg.group()));
    }
    let squares: Vec<ExteriorSquare> = family
        .places
        .iter()
        .map(|p| ExteriorSquare::new(p.abstract_group()))
        .collect();
    let maps = family
        .places
        .iter()
        .zip(&squares)
        .map(|(p, w)| wedge_hom_between(p.inclusion(), w, &wg))
        .collect::<Result<Vec<_>>>()?;
    let groups: Vec<FinAbGroup> = squares.iter().map(|w| w.group().clone()).collect();
    DirectSum::new(&groups)?.copair(&maps)
}

/// The obstruction to the Hasse norm principle: `Coker(ε)`.
pub fn sha_abelian(g: &FinAbGroup, family: &LocalFamily) -> Result<FinAbGroup> {
    family.check_ambient(g)?;
    let w = ExteriorSquare::new(g);
    Ok(ShaQuotient::new(&w, &family.generator_lists()).coker.group)
}

/// The family of images `π(G^v)` over the target of a surjection `π`.
pub fn push_family(pi: &AbHom, family: &LocalFamily) -> Result<LocalFamily> {
    family.check_ambient(pi.source())?;
    if !pi.is_surjective() {
        return Err(Error::invalid("pushing a family needs a surjection"));
    }
    let places = family
        .places
        .iter()
        .map(|p| {
            let gens = p.generators().iter().map(|x| pi.apply(x)).collect();
            Subgroup::generated(pi.target(), gens)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut pushed = LocalFamily::new(pi.target(), places)?;
    pushed.labels = family.labels.clone();
    Ok(pushed)
}

/// The map `Coker(ε over the source) → Coker(ε over the target)` induced by
/// `π ∧ π`, for the family and its push-forward.
pub fn sha_restriction_map(pi: &AbHom, family: &LocalFamily) -> Result<AbHom> {
    let pushed = push_family(pi, family)?;
    let ws = ExteriorSquare::new(pi.source());
    let wt = ExteriorSquare::new(pi.target());
    let src = ShaQuotient::new(&ws, &family.generator_lists());
    let tgt = ShaQuotient::new(&wt, &pushed.generator_lists());
    let piw = wedge_hom_between(pi, &ws, &wt)?;
    if !src.eps.iter().all(|e| tgt.kills(&piw.apply(e))) {
        return Err(Error::Internal {
            check: "restriction_well_defined",
        });
    }
    let cols = src
        .coker
        .lifts
        .iter()
        .map(|l| tgt.coker.proj.apply(&piw.apply(l)))
        .collect();
    AbHom::from_columns(src.group().clone(), tgt.group().clone(), cols).map_err(|_| {
        Error::Internal {
            check: "restriction_well_defined",
        }
    })
}

/// A set-theoretic section of a quotient map, one value per quotient element.
#[derive(Clone, Debug)]
pub struct Section {
    quotient: FinAbGroup,
    values: Arc<Vec<Elem>>,
}

impl Section {
    pub fn quotient(&self) -> &FinAbGroup {
        &self.quotient
    }

    pub fn get(&self, e: &[u64]) -> &Elem {
        &self.values[self.quotient.element_index(e)]
    }

    /// `(e, section(e))` in the enumeration order of the quotient.
    pub fn pairs(&self) -> impl Iterator<Item = (Elem, &Elem)> + '_ {
        self.quotient.elements().zip(self.values.iter())
    }

    fn map(&self, f: &AbHom) -> Section {
        Section {
            quotient: self.quotient.clone(),
            values: Arc::new(self.values.iter().map(|x| f.apply(x)).collect()),
        }
    }
}

/// `L = L₁L₂` over `K` as `G` with `N₁ = Gal(L/L₁)`, `N₂ = Gal(L/L₂)` and
/// the quotient maps `π_i : G → G_i`, `ρ : G → G_E`, `ρ_i : G_i → G_E`.
#[derive(Clone, Debug)]
pub struct AbelianTower {
    group: FinAbGroup,
    n1: Subgroup,
    n2: Subgroup,
    join: Subgroup,
    pi1: Cokernel,
    pi2: Cokernel,
    rho: Cokernel,
    rho1: AbHom,
    rho2: AbHom,
    squares: OnceLock<Arc<Result<TowerSquares>>>,
}

fn through(pi: &Cokernel, rho: &Cokernel) -> Result<AbHom> {
    let broken = Error::Internal {
        check: "tower_commutes",
    };
    let cols = pi.lifts.iter().map(|l| rho.proj.apply(l)).collect();
    let r = AbHom::from_columns(pi.group.clone(), rho.group.clone(), cols)
        .map_err(|_| broken.clone())?;
    if r.compose(&pi.proj)? != rho.proj {
        return Err(broken);
    }
    Ok(r)
}

impl AbelianTower {
    /// Rejects `N₁ ∩ N₂ ≠ 1`, since `L` must be the compositum.
    pub fn new(group: &FinAbGroup, n1: Subgroup, n2: Subgroup) -> Result<Self> {
        if n1.ambient() != group || n2.ambient() != group {
            return Err(Error::structural(format!("tower subgroups must lie in {group}")));
        }
        if !n1.intersect(&n2)?.is_trivial() {
            return Err(Error::InvariantViolation {
                check: "n1_meets_n2_trivially",
            });
        }
        let join = n1.join(&n2)?;
        let pi1 = n1.quotient().clone();
        let pi2 = n2.quotient().clone();
        let rho = join.quotient().clone();
        let rho1 = through(&pi1, &rho)?;
        let rho2 = through(&pi2, &rho)?;
        Ok(AbelianTower {
            group: group.clone(),
            n1,
            n2,
            join,
            pi1,
            pi2,
            rho,
            rho1,
            rho2,
            squares: OnceLock::new(),
        })
    }

    /// `G = G₁ ⊕ G₂` with `N₁ = 0 ⊕ G₂` and `N₂ = G₁ ⊕ 0`, so that `G/N_i ≅ G_i`
    /// and `G_E` is trivial.
    pub fn linearly_disjoint(g1: &FinAbGroup, g2: &FinAbGroup) -> Result<Self> {
        let sum = DirectSum::new(&[g1.clone(), g2.clone()])?;
        let n1 = sum.injections[1].image();
        let n2 = sum.injections[0].image();
        Self::new(&sum.group, n1, n2)
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn n1(&self) -> &Subgroup {
        &self.n1
    }

    pub fn n2(&self) -> &Subgroup {
        &self.n2
    }

    /// `N₁N₂ = Gal(L/E)`.
    pub fn join(&self) -> &Subgroup {
        &self.join
    }

    pub fn g1(&self) -> &FinAbGroup {
        &self.pi1.group
    }

    pub fn g2(&self) -> &FinAbGroup {
        &self.pi2.group
    }

    pub fn ge(&self) -> &FinAbGroup {
        &self.rho.group
    }

    pub fn pi1(&self) -> &AbHom {
        &self.pi1.proj
    }

    pub fn pi2(&self) -> &AbHom {
        &self.pi2.proj
    }

    pub fn rho(&self) -> &AbHom {
        &self.rho.proj
    }

    pub fn rho1(&self) -> &AbHom {
        &self.rho1
    }

    pub fn rho2(&self) -> &AbHom {
        &self.rho2
    }

    /// `μ`: each element of `G_E` goes to the lexicographically smallest
    /// element of `G` above it.
    pub fn section(&self) -> Result<Section> {
        Ok(self.squares()?.mu.clone())
    }

    fn squares(&self) -> Result<&TowerSquares> {
        let cached = self
            .squares
            .get_or_init(|| Arc::new(TowerSquares::new(self)));
        cached.as_ref().as_ref().map_err(Clone::clone)
    }

    /// Checks of the tower that do not depend on local data. Empty when the
    /// comparison `Coker(T₀) ≅ G_E ∧ G_E` and its supporting identities hold.
    pub fn tower_failures(&self) -> Result<Vec<&'static str>> {
        Ok(self.squares()?.failures.clone())
    }

    /// Certificate for the family whose places have the given generators.
    pub fn certify(&self, places: &[Vec<Elem>]) -> Result<Theorem1Certificate> {
        for x in places.iter().flatten() {
            if !self.group.is_element(x) {
                return Err(Error::invalid(format!("{x:?} is not an element of {}", self.group)));
            }
        }
        Ok(self.squares()?.certify(self, places))
    }
}

/// Everything about a tower's exterior squares that is independent of the
/// local family.
#[derive(Debug)]
struct TowerSquares {
    w: ExteriorSquare,
    w1: ExteriorSquare,
    w2: ExteriorSquare,
    we: ExteriorSquare,
    pi1w: AbHom,
    pi2w: AbHom,
    rho1w: AbHom,
    rho2w: AbHom,
    /// `(G₁ ∧ G₁) ⊕ (G₂ ∧ G₂)`
    sum: DirectSum,
    p0: AbHom,
    mu: Section,
    mu1: Section,
    /// `S₀` on the canonical generators of `G_E ∧ G_E`, before dividing by `im T₀`.
    s_lift: Vec<Elem>,
    failures: Vec<&'static str>,
}

impl TowerSquares {
    fn new(t: &AbelianTower) -> Result<Self> {
        match t.group.order_u64() {
            Some(n) if n <= TOWER_ENUMERATION_LIMIT => {}
            _ => {
                return Err(Error::SizeLimit(format!(
                    "tower over {} (limit {TOWER_ENUMERATION_LIMIT})",
                    t.group
                )))
            }
        }
        let w = ExteriorSquare::new(&t.group);
        let w1 = ExteriorSquare::new(t.g1());
        let w2 = ExteriorSquare::new(t.g2());
        let we = ExteriorSquare::new(t.ge());
        let pi1w = wedge_hom_between(t.pi1(), &w, &w1)?;
        let pi2w = wedge_hom_between(t.pi2(), &w, &w2)?;
        let rho1w = wedge_hom_between(t.rho1(), &w1, &we)?;
        let rho2w = wedge_hom_between(t.rho2(), &w2, &we)?;
        let sum = DirectSum::new(&[w1.group().clone(), w2.group().clone()])?;
        let t0 = sum.pair(&[pi1w.clone(), pi2w.clone()])?;
        let p0 = sum.copair(&[rho1w.clone(), rho2w.neg()])?;

        let ge = t.ge();
        let mut values: Vec<Option<Elem>> = vec![None; ge.order_u64().expect("bounded") as usize];
        for g in t.group.elements() {
            let slot = &mut values[ge.element_index(&t.rho().apply(&g))];
            if slot.is_none() {
                *slot = Some(g);
            }
        }
        let mu = Section {
            quotient: ge.clone(),
            values: Arc::new(values.into_iter().map(|v| v.expect("ρ is onto")).collect()),
        };
        let mu1 = mu.map(t.pi1());

        let inj1 = &sum.injections[0];
        let s_lift: Vec<Elem> = (0..we.group().rank())
            .map(|k| {
                let mut acc = sum.group.zero();
                for ((i, j), c) in we.terms(&we.group().generator(k)) {
                    let x = w1.wedge(mu1.get(&ge.generator(i)), mu1.get(&ge.generator(j)));
                    acc = sum.group.add(&acc, &sum.group.scale(c, &inj1.apply(&x)));
                }
                acc
            })
            .collect();

        let mut sq = TowerSquares {
            w,
            w1,
            w2,
            we,
            pi1w,
            pi2w,
            rho1w,
            rho2w,
            sum,
            p0,
            mu,
            mu1,
            s_lift,
            failures: Vec::new(),
        };
        sq.failures = sq.check_comparison(t, &t0);
        Ok(sq)
    }

    /// `S₀` extended linearly to an element of `G_E ∧ G_E` in canonical coordinates.
    fn s_of(&self, x: &[u64]) -> Elem {
        let mut acc = self.sum.group.zero();
        for (col, &k) in self.s_lift.iter().zip(x) {
            if k != 0 {
                acc = self.sum.group.add(&acc, &self.sum.group.scale(k, col));
            }
        }
        acc
    }

    fn check_comparison(&self, t: &AbelianTower, t0: &AbHom) -> Vec<&'static str> {
        let mut failures = Vec::new();
        let inj1 = &self.sum.injections[0];
        let ge = t.ge();

        // T₀(μ(e) ∧ h) = (μ₁(e) ∧ π₁(h), 0), and the mirrored and N₂ ∧ N₂ forms.
        let n2_gens = t.n2.generators();
        let wedge_identities = ge.elements().all(|e| {
            let m = self.mu.get(&e);
            let m1 = self.mu1.get(&e);
            n2_gens.iter().all(|h| {
                let h1 = t.pi1().apply(h);
                t0.apply(&self.w.wedge(m, h)) == inj1.apply(&self.w1.wedge(m1, &h1))
                    && t0.apply(&self.w.wedge(h, m)) == inj1.apply(&self.w1.wedge(&h1, m1))
            })
        }) && n2_gens.iter().all(|h| {
            n2_gens.iter().all(|k| {
                let (h1, k1) = (t.pi1().apply(h), t.pi1().apply(k));
                t0.apply(&self.w.wedge(h, k)) == inj1.apply(&self.w1.wedge(&h1, &k1))
            })
        });
        if !wedge_identities {
            failures.push("wedge_relations");
        }

        if !self.p0.compose(t0).map(|c| c.is_zero()).unwrap_or(false) {
            failures.push("p0_kills_t0");
            return failures;
        }
        let coker_t0 = t0.cokernel();
        let p_cols = coker_t0.lifts.iter().map(|l| self.p0.apply(l)).collect();
        let Ok(map_p) = AbHom::from_columns(coker_t0.group.clone(), self.we.group().clone(), p_cols)
        else {
            failures.push("p0_respects_orders");
            return failures;
        };
        let s_cols = self.s_lift.iter().map(|x| coker_t0.proj.apply(x)).collect();
        let Ok(map_s) = AbHom::from_columns(self.we.group().clone(), coker_t0.group.clone(), s_cols)
        else {
            failures.push("s0_respects_orders");
            return failures;
        };

        // S agrees with S₀(e, f) = (μ₁(e) ∧ μ₁(f), 0) on every pair, which is the
        // bilinearity of S₀ modulo im T₀. Large quotients are checked against
        // generators in either slot.
        let elems: Vec<Elem> = ge.elements().collect();
        let gens: Vec<Elem> = (0..ge.rank()).map(|i| ge.generator(i)).collect();
        let s0_matches = |e: &Elem, f: &Elem| {
            let direct = coker_t0
                .proj
                .apply(&inj1.apply(&self.w1.wedge(self.mu1.get(e), self.mu1.get(f))));
            direct == map_s.apply(&self.we.wedge(e, f))
        };
        let bilinear = if elems.len() <= 64 {
            elems.iter().all(|e| elems.iter().all(|f| s0_matches(e, f)))
        } else {
            elems
                .iter()
                .all(|e| gens.iter().all(|f| s0_matches(e, f) && s0_matches(f, e)))
        };
        if !bilinear {
            failures.push("s0_bilinear");
        }
        match map_p.compose(&map_s) {
            Ok(ps) if ps == AbHom::identity(self.we.group()) => {}
            _ => failures.push("comparison_p_after_s_identity"),
        }
        if !map_s.is_surjective() {
            failures.push("comparison_s_surjective");
        }
        if !map_p.is_surjective() {
            failures.push("comparison_p_surjective");
        }
        failures
    }

    fn certify(&self, t: &AbelianTower, places: &[Vec<Elem>]) -> Theorem1Certificate {
        let mut failures = self.failures.clone();
        let push = |pi: &AbHom| -> Vec<Vec<Elem>> {
            places
                .iter()
                .map(|gens| gens.iter().map(|x| pi.apply(x)).collect())
                .collect()
        };
        let sha_l = ShaQuotient::new(&self.w, places);
        let sha1 = ShaQuotient::new(&self.w1, &push(t.pi1()));
        let sha2 = ShaQuotient::new(&self.w2, &push(t.pi2()));
        let shae = ShaQuotient::new(&self.we, &push(t.rho()));
        let mut cert = Theorem1Certificate {
            sha_l: sha_l.group().clone(),
            sha_1: sha1.group().clone(),
            sha_2: sha2.group().clone(),
            sha_e: shae.group().clone(),
            coker_t: FinAbGroup::trivial(),
            image_t_order: BigUint::zero(),
            map_t: None,
            map_p: None,
            map_s: None,
            section_mu: self.mu.clone(),
            section_mu1: self.mu1.clone(),
            verdict: false,
            failures: Vec::new(),
        };

        let ssum = DirectSum::new(&[sha1.group().clone(), sha2.group().clone()])
            .expect("sum of u64-bounded groups");
        if !sha_l
            .eps
            .iter()
            .all(|e| sha1.kills(&self.pi1w.apply(e)) && sha2.kills(&self.pi2w.apply(e)))
        {
            failures.push("t_well_defined");
        }
        let t_cols = sha_l
            .coker
            .lifts
            .iter()
            .map(|l| {
                ssum.combine(&[
                    sha1.coker.proj.apply(&self.pi1w.apply(l)),
                    sha2.coker.proj.apply(&self.pi2w.apply(l)),
                ])
            })
            .collect();
        let Ok(map_t) = AbHom::from_columns(sha_l.group().clone(), ssum.group.clone(), t_cols)
        else {
            failures.push("t_respects_orders");
            cert.failures = failures;
            return cert;
        };
        let coker_t = map_t.cokernel();

        if !sha1.eps.iter().all(|e| shae.kills(&self.rho1w.apply(e)))
            || !sha2.eps.iter().all(|e| shae.kills(&self.rho2w.apply(e)))
        {
            failures.push("p_well_defined");
        }
        let p_on = |z: &[u64]| -> Elem {
            let parts = ssum.split(z);
            let x = self
                .sum
                .combine(&[sha1.coker.lift(&parts[0]), sha2.coker.lift(&parts[1])]);
            shae.coker.proj.apply(&self.p0.apply(&x))
        };
        if !map_t
            .columns()
            .iter()
            .all(|c| shae.group().is_zero_elem(&p_on(c)))
        {
            failures.push("p_kills_image_of_t");
        }
        let p_cols = coker_t.lifts.iter().map(|l| p_on(l)).collect();
        let map_p = AbHom::from_columns(coker_t.group.clone(), shae.group().clone(), p_cols).ok();
        if map_p.is_none() {
            failures.push("p_respects_orders");
        }

        let s_on = |x: &[u64]| -> Elem {
            let parts = self.sum.split(&self.s_of(x));
            coker_t.proj.apply(&ssum.combine(&[
                sha1.coker.proj.apply(&parts[0]),
                sha2.coker.proj.apply(&parts[1]),
            ]))
        };
        if !shae
            .eps
            .iter()
            .all(|e| coker_t.group.is_zero_elem(&s_on(e)))
        {
            failures.push("s_well_defined");
        }
        let s_cols = shae.coker.lifts.iter().map(|l| s_on(l)).collect();
        let map_s = AbHom::from_columns(shae.group().clone(), coker_t.group.clone(), s_cols).ok();
        if map_s.is_none() {
            failures.push("s_respects_orders");
        }

        if let (Some(p), Some(s)) = (&map_p, &map_s) {
            match p.compose(s) {
                Ok(ps) if ps == AbHom::identity(shae.group()) => {}
                _ => failures.push("p_after_s_identity"),
            }
            if !p.is_surjective() {
                failures.push("p_surjective");
            }
            if !s.is_surjective() {
                failures.push("s_surjective");
            }
        }
        if !coker_t.group.is_isomorphic(shae.group()) {
            failures.push("coker_t_isomorphic_to_sha_e");
        }

        cert.coker_t = coker_t.group.clone();
        cert.image_t_order = map_t.image().abstract_group().order();
        cert.map_t = Some(map_t);
        cert.map_p = map_p;
        cert.map_s = map_s;
        cert.verdict = failures.is_empty();
        cert.failures = failures;
        cert
    }
}

/// The comparison between the multinorm obstruction `Coker(T)` and the Hasse
/// obstruction `Sha(E)` of the intersection for one tower and family.
#[derive(Clone, Debug)]
pub struct Theorem1Certificate {
    pub sha_l: FinAbGroup,
    pub sha_1: FinAbGroup,
    pub sha_2: FinAbGroup,
    pub sha_e: FinAbGroup,
    /// `Coker(T : Sha(L) → Sha(L₁) × Sha(L₂))`
    pub coker_t: FinAbGroup,
    pub image_t_order: BigUint,
    pub map_t: Option<AbHom>,
    /// `Coker(T) → Sha(E)`, induced by `(a ∧ b, c ∧ d) ↦ ρ₁a ∧ ρ₁b − ρ₂c ∧ ρ₂d`.
    pub map_p: Option<AbHom>,
    /// `Sha(E) → Coker(T)`, induced by `e ∧ f ↦ (μ₁e ∧ μ₁f, 0)`.
    pub map_s: Option<AbHom>,
    pub section_mu: Section,
    pub section_mu1: Section,
    pub verdict: bool,
    /// Names of the checks that failed; empty exactly when `verdict` holds.
    pub failures: Vec<&'static str>,
}

/// `T` and its cokernel.
#[derive(Clone, Debug)]
pub struct CokerG {
    pub coker_t: FinAbGroup,
    pub map_t: AbHom,
}

/// `T = (T_{L/L₁}, T_{L/L₂}) : Sha(L) → Sha(L₁) × Sha(L₂)` and its cokernel.
pub fn coker_g(tower: &AbelianTower, family: &LocalFamily) -> Result<CokerG> {
    family.check_ambient(tower.group())?;
    let t1 = sha_restriction_map(tower.pi1(), family)?;
    let t2 = sha_restriction_map(tower.pi2(), family)?;
    let sum = DirectSum::new(&[t1.target().clone(), t2.target().clone()])?;
    let map_t = sum.pair(&[t1, t2])?;
    Ok(CokerG {
        coker_t: map_t.cokernel().group,
        map_t,
    })
}

pub fn theorem1_certificate(tower: &AbelianTower, family: &LocalFamily) -> Result<Theorem1Certificate> {
    family.check_ambient(tower.group())?;
    tower.certify(&family.generator_lists())
}

/// `Sha(E)` for `E = L₁ ∩ L₂`, cross-checked against `Coker(T)`.
pub fn multinorm_obstruction(tower: &AbelianTower, family: &LocalFamily) -> Result<FinAbGroup> {
    let sha_e = sha_abelian(tower.ge(), &push_family(tower.rho(), family)?)?;
    if !coker_g(tower, family)?.coker_t.is_isomorphic(&sha_e) {
        return Err(Error::Internal {
            check: "coker_g_matches_sha_e",
        });
    }
    Ok(sha_e)
}

/// `|Sha(L₁)|·|Sha(L₂)| / |Sha(E)|`, the order of the intersection obstruction.
pub fn intersection_obstruction_order(
    tower: &AbelianTower,
    family: &LocalFamily,
) -> Result<BigUint> {
    family.check_ambient(tower.group())?;
    let s1 = sha_abelian(tower.g1(), &push_family(tower.pi1(), family)?)?;
    let s2 = sha_abelian(tower.g2(), &push_family(tower.pi2(), family)?)?;
    let se = sha_abelian(tower.ge(), &push_family(tower.rho(), family)?)?;
    let (q, r) = (s1.order() * s2.order()).div_rem(&se.order());
    if !r.is_zero() {
        return Err(Error::Internal {
            check: "intersection_order_integral",
        });
    }
    Ok(q)
}

fn check_table_tower(g: &CayleyGroup, n1: &[usize], n2: &[usize]) -> Result<()> {
    for (name, n) in [("N1", n1), ("N2", n2)] {
        if !g.is_normal(n) {
            return Err(Error::invalid(format!("{name} is not a normal subgroup")));
        }
    }
    if n1.iter().any(|x| *x != g.identity() && n2.contains(x)) {
        return Err(Error::InvariantViolation {
            check: "n1_meets_n2_trivially",
        });
    }
    Ok(())
}

/// `|G^ab| / |image(G^ab → G₁^ab × G₂^ab)|` with `G_i = G/N_i`: an upper bound
/// for the second obstruction, which is therefore trivial when this is 1.
pub fn second_obstruction_bound(g: &Arc<CayleyGroup>, n1: &[usize], n2: &[usize]) -> Result<u64> {
    check_table_tower(g, n1, n2)?;
    let (_, p1) = g.quotient(n1)?;
    let (_, p2) = g.quotient(n2)?;
    let a1 = p1.induced_ab_map();
    let a2 = p2.induced_ab_map();
    let sum = DirectSum::new(&[a1.target().clone(), a2.target().clone()])?;
    let both = sum.pair(&[a1, a2])?;
    let total = g.abelianization().group.order_u64().expect("table group");
    let image = both.image().order_u64().expect("table group");
    Ok(total / image)
}

/// `Ker(H^ab → G^ab)` for `H = N₁N₂`.
#[derive(Clone, Debug)]
pub struct PhiKernel {
    pub subgroup: Arc<CayleyGroup>,
    pub inclusion: GroupMap,
    pub kernel: Subgroup,
}

impl PhiKernel {
    /// The class in `H^ab` of an element of `G` lying in `H`.
    pub fn class_of(&self, x: usize) -> Option<Elem> {
        let i = self.inclusion.images().iter().position(|&y| y == x)?;
        Some(self.subgroup.abelianization().coords[i].clone())
    }
}

pub fn phi_kernel(g: &Arc<CayleyGroup>, n1: &[usize], n2: &[usize]) -> Result<PhiKernel> {
    check_table_tower(g, n1, n2)?;
    let gens: Vec<usize> = n1.iter().chain(n2).copied().collect();
    let h = g.closure(&gens);
    let (subgroup, inclusion) = g.subgroup(&h)?;
    let kernel = inclusion.induced_ab_map().kernel();
    Ok(PhiKernel {
        subgroup,
        inclusion,
        kernel,
    })
}

/// Whether `H^ab → G^ab` is injective for `H = N₁N₂`.
pub fn phi_injective(g: &Arc<CayleyGroup>, n1: &[usize], n2: &[usize]) -> Result<bool> {
    Ok(phi_kernel(g, n1, n2)?.kernel.is_trivial())
}
