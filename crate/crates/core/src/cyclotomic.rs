//! Abelian number fields as fixed fields `Q(ζ_n)^H` of subgroups `H` of
//! `(Z/n)^*`, with Galois groups, decomposition groups and the local families
//! they produce.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;

use crate::abgroup::{canonicalize, AbHom, Cokernel, Elem, FinAbGroup, Subgroup};
use crate::error::{Error, Result};
use crate::obstruction::{AbelianTower, LocalFamily};

/// Largest modulus whose unit group is tabulated.
pub const MAX_MODULUS: u64 = 1 << 21;

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    r
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

/// Prime factorization by trial division, as `(p, k)` with `p` increasing.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut k = 0;
            while n.is_multiple_of(p) {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

/// The residue that is `a` modulo `m1` and `1` modulo `m2`, for coprime `m1, m2`.
fn crt_with_one(a: u64, m1: u64, m2: u64) -> u64 {
    if m2 == 1 {
        return a % m1;
    }
    // x = a + m1·t with m1·t ≡ 1 − a (mod m2)
    let inv = (m1 as i128).extended_gcd(&(m2 as i128)).x.rem_euclid(m2 as i128);
    let rhs = (1 - a as i128).rem_euclid(m2 as i128);
    let t = (rhs * inv).rem_euclid(m2 as i128);
    ((a as i128 + m1 as i128 * t) % (m1 as i128 * m2 as i128)) as u64
}

/// The Kronecker symbol `(a / n)`.
pub fn kronecker(a: i64, n: u64) -> i32 {
    if n == 0 {
        return i32::from(a == 1 || a == -1);
    }
    let v = n.trailing_zeros();
    let mut n = n >> v;
    let mut sign = 1;
    if v > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if v % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            sign = -sign;
        }
    }
    // Jacobi symbol for odd n
    let mut a = a.rem_euclid(n as i64) as u64;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// Generators of `(Z/p^k)^*` with their orders.
fn prime_power_unit_generators(p: u64, k: u32) -> Vec<(u64, u64)> {
    let pk = p.pow(k);
    if p == 2 {
        return match k {
            0 | 1 => Vec::new(),
            2 => vec![(3, 2)],
            _ => vec![(pk - 1, 2), (5, pk / 4)],
        };
    }
    let phi = pk / p * (p - 1);
    let qs: Vec<u64> = factorize(phi).into_iter().map(|(q, _)| q).collect();
    let root = (2..pk)
        .find(|&g| g % p != 0 && qs.iter().all(|&q| pow_mod(g, phi / q, pk) != 1))
        .expect("odd prime powers have primitive roots");
    vec![(root, phi)]
}

/// `(Z/n)^*` in invariant-factor form with a table in each direction.
#[derive(Clone)]
pub struct UnitGroup {
    modulus: u64,
    group: FinAbGroup,
    /// Residue of each element, by element index.
    residues: Arc<Vec<u64>>,
    /// Element index of each residue, `u32::MAX` for non-units.
    index: Arc<Vec<u32>>,
}

impl fmt::Debug for UnitGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UnitGroup(mod {}: {})", self.modulus, self.group)
    }
}

impl UnitGroup {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("modulus must be positive"));
        }
        if n > MAX_MODULUS {
            return Err(Error::SizeLimit(format!("modulus {n} (limit {MAX_MODULUS})")));
        }
        // generators of the prime-power parts, lifted to residues mod n
        let mut raw: Vec<(u64, u64)> = Vec::new();
        for (p, k) in factorize(n) {
            let pk = p.pow(k);
            for (g, ord) in prime_power_unit_generators(p, k) {
                raw.push((crt_with_one(g, pk, n / pk), ord));
            }
        }
        let orders: Vec<u64> = raw.iter().map(|&(_, o)| o).collect();
        let pres = canonicalize(&[], &orders)?;
        let group = FinAbGroup::new(pres.factors)?;
        let gens: Vec<u64> = pres
            .from_canon
            .iter()
            .map(|coeffs| {
                coeffs
                    .iter()
                    .zip(&raw)
                    .fold(1 % n, |acc, (&c, &(g, _))| mul_mod(acc, pow_mod(g, c, n), n))
            })
            .collect();
        let size = group.order_u64().expect("bounded by n") as usize;
        let mut residues = Vec::with_capacity(size);
        let mut index = vec![u32::MAX; n as usize];
        for (i, x) in group.elements().enumerate() {
            let r = x
                .iter()
                .zip(&gens)
                .fold(1 % n, |acc, (&e, &g)| mul_mod(acc, pow_mod(g, e, n), n));
            index[r as usize] = i as u32;
            residues.push(r);
        }
        debug_assert_eq!(size as u64, euler_phi(n));
        Ok(UnitGroup {
            modulus: n,
            group,
            residues: Arc::new(residues),
            index: Arc::new(index),
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn contains(&self, r: u64) -> bool {
        self.index[(r % self.modulus) as usize] != u32::MAX
    }

    /// The element of residue `r`; fails when `gcd(r, n) ≠ 1`.
    pub fn encode(&self, r: u64) -> Result<Elem> {
        match self.index[(r % self.modulus) as usize] {
            u32::MAX => Err(Error::invalid(format!(
                "{r} is not a unit modulo {}",
                self.modulus
            ))),
            i => Ok(self.group.element_at(i as usize)),
        }
    }

    pub fn decode(&self, x: &[u64]) -> u64 {
        self.residues[self.group.element_index(x)]
    }

    /// Residues in element order.
    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    /// Reduction `(Z/n)^* → (Z/m)^*` for `m | n`.
    pub fn reduction_to(&self, target: &UnitGroup) -> Result<AbHom> {
        if !self.modulus.is_multiple_of(target.modulus) {
            return Err(Error::structural(format!(
                "{} does not divide {}",
                target.modulus, self.modulus
            )));
        }
        let cols = (0..self.group.rank())
            .map(|i| target.encode(self.decode(&self.group.generator(i))))
            .collect::<Result<Vec<_>>>()?;
        AbHom::from_columns(self.group.clone(), target.group.clone(), cols)
    }
}

pub fn unit_group(n: u64) -> Result<UnitGroup> {
    UnitGroup::new(n)
}

/// A place of `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Prime(u64),
    Infinite,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Prime(p) => write!(f, "{p}"),
            Place::Infinite => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for Place {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "inf" {
            return Ok(Place::Infinite);
        }
        s.parse::<u64>()
            .ok()
            .filter(|&p| is_prime(p))
            .map(Place::Prime)
            .ok_or_else(|| Error::invalid(format!("{s:?} is not a prime or \"inf\"")))
    }
}

/// The decomposition and inertia groups of a place in `Gal(L/Q)`.
#[derive(Clone, Debug)]
pub struct PlaceData {
    pub place: Place,
    pub decomposition: Subgroup,
    pub inertia: Subgroup,
    pub ramified: bool,
}

#[derive(Debug)]
struct FieldData {
    units: UnitGroup,
    fixing: Subgroup,
    galois: Cokernel,
}

/// `L = Q(ζ_n)^H` with `n` the conductor of `L`.
#[derive(Clone)]
pub struct CycloField {
    conductor: u64,
    /// Sorted residues of `H`.
    fixing: Vec<u64>,
    data: Arc<FieldData>,
}

impl PartialEq for CycloField {
    fn eq(&self, other: &Self) -> bool {
        self.conductor == other.conductor && self.fixing == other.fixing
    }
}

impl Eq for CycloField {}

impl fmt::Debug for CycloField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CycloField(conductor {}, H = ⟨{:?}⟩)",
            self.conductor,
            self.fixing_generators()
        )
    }
}

impl CycloField {
    /// `Q(ζ_n)^H` for `H = ⟨fixing⟩`, reduced to its conductor.
    pub fn new(n: u64, fixing: &[u64]) -> Result<Self> {
        let units = UnitGroup::new(n)?;
        let gens = fixing
            .iter()
            .map(|&r| units.encode(r))
            .collect::<Result<Vec<_>>>()?;
        let h = Subgroup::generated(units.group(), gens)?;
        Self::from_subgroup(units, h)
    }

    pub fn rational() -> Self {
        Self::new(1, &[]).expect("trivial modulus")
    }

    /// `Q(ζ_n)`.
    pub fn cyclotomic(n: u64) -> Result<Self> {
        Self::new(n, &[])
    }

    /// `Q(√d)`; `Q` itself when `d` is a square.
    pub fn quadratic(d: i64) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("Q(√0) is not a field extension"));
        }
        let mut s = d.signum();
        for (p, k) in factorize(d.unsigned_abs()) {
            if k % 2 == 1 {
                s *= p as i64;
            }
        }
        if s == 1 {
            return Ok(Self::rational());
        }
        let disc = if s.rem_euclid(4) == 1 { s } else { 4 * s };
        let units = UnitGroup::new(disc.unsigned_abs())?;
        let chi_cols = (0..units.group().rank())
            .map(|i| {
                let r = units.decode(&units.group().generator(i));
                vec![u64::from(kronecker(disc, r) == -1)]
            })
            .collect();
        let chi = AbHom::from_columns(units.group().clone(), FinAbGroup::cyclic(2)?, chi_cols)?;
        let h = chi.kernel();
        Self::from_subgroup(units, h)
    }

    /// Reduces `(n, H)` to the conductor: `Q(ζ_n)^H ⊆ Q(ζ_m)` exactly when `H`
    /// contains the kernel of `(Z/n)^* → (Z/m)^*`.
    fn from_subgroup(mut units: UnitGroup, mut h: Subgroup) -> Result<Self> {
        for (p, _) in factorize(units.modulus()) {
            while units.modulus().is_multiple_of(p) {
                let smaller = UnitGroup::new(units.modulus() / p)?;
                let red = units.reduction_to(&smaller)?;
                if !red.kernel().is_subgroup_of(&h) {
                    break;
                }
                let gens = h.generators().iter().map(|x| red.apply(x)).collect();
                h = Subgroup::generated(smaller.group(), gens)?;
                units = smaller;
            }
        }
        let mut fixing: Vec<u64> = h.elements().iter().map(|x| units.decode(x)).collect();
        fixing.sort_unstable();
        let galois = h.quotient().clone();
        Ok(CycloField {
            conductor: units.modulus(),
            fixing,
            data: Arc::new(FieldData {
                units,
                fixing: h,
                galois,
            }),
        })
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// All residues of `H`, sorted.
    pub fn fixing_residues(&self) -> &[u64] {
        &self.fixing
    }

    /// A small generating set of `H`, chosen greedily in residue order.
    pub fn fixing_generators(&self) -> Vec<u64> {
        let n = self.conductor;
        let mut reached = vec![false; n as usize];
        reached[(1 % n) as usize] = true;
        let mut members = vec![1 % n];
        let mut gens = Vec::new();
        for &r in &self.fixing {
            if reached[r as usize] {
                continue;
            }
            gens.push(r);
            let base = members.clone();
            let mut power = r;
            while !reached[power as usize] {
                for &m in &base {
                    let x = mul_mod(m, power, n);
                    if !reached[x as usize] {
                        reached[x as usize] = true;
                        members.push(x);
                    }
                }
                power = mul_mod(power, r, n);
            }
        }
        gens
    }

    pub fn units(&self) -> &UnitGroup {
        &self.data.units
    }

    /// `H` as a subgroup of `(Z/n)^*`.
    pub fn fixing_subgroup(&self) -> &Subgroup {
        &self.data.fixing
    }

    /// `Gal(L/Q) = (Z/n)^* / H`.
    pub fn galois_group(&self) -> &FinAbGroup {
        &self.data.galois.group
    }

    /// `(Z/n)^* → Gal(L/Q)`.
    pub fn galois_projection(&self) -> &AbHom {
        &self.data.galois.proj
    }

    pub fn degree(&self) -> u64 {
        self.galois_group().order_u64().expect("bounded by the modulus")
    }

    fn class_of(&self, r: u64) -> Result<Elem> {
        Ok(self.galois_projection().apply(&self.units().encode(r)?))
    }

    /// The Frobenius class of an unramified prime.
    pub fn frobenius(&self, p: u64) -> Result<Elem> {
        if !is_prime(p) || self.conductor.is_multiple_of(p) {
            return Err(Error::invalid(format!(
                "{p} is not a prime unramified in a field of conductor {}",
                self.conductor
            )));
        }
        self.class_of(p)
    }

    pub fn decomposition_subgroup(&self, place: Place) -> Result<PlaceData> {
        let n = self.conductor;
        let g = self.galois_group();
        let sub = |residues: Vec<u64>| -> Result<Subgroup> {
            let gens = residues
                .into_iter()
                .map(|r| self.class_of(r))
                .collect::<Result<Vec<_>>>()?;
            Subgroup::generated(g, gens)
        };
        match place {
            Place::Infinite => {
                let d = sub(vec![n.wrapping_sub(1) % n.max(1)])?;
                Ok(PlaceData {
                    place,
                    ramified: !d.is_trivial(),
                    inertia: d.clone(),
                    decomposition: d,
                })
            }
            Place::Prime(p) if !is_prime(p) => {
                Err(Error::invalid(format!("{p} is not prime")))
            }
            Place::Prime(p) if !n.is_multiple_of(p) => Ok(PlaceData {
                place,
                decomposition: sub(vec![p % n])?,
                inertia: Subgroup::trivial(g),
                ramified: false,
            }),
            Place::Prime(p) => {
                let mut pk = 1;
                let mut k = 0;
                while n.is_multiple_of(pk * p) {
                    pk *= p;
                    k += 1;
                }
                let m = n / pk;
                // inertia: the units that are 1 mod m; Frobenius: p mod m, 1 mod p^k
                let inertia_residues: Vec<u64> = prime_power_unit_generators(p, k)
                    .into_iter()
                    .map(|(gen, _)| crt_with_one(gen, pk, m))
                    .collect();
                let frob = crt_with_one(p % m, m, pk);
                let inertia = sub(inertia_residues.clone())?;
                let mut all = inertia_residues;
                all.push(frob);
                Ok(PlaceData {
                    place,
                    ramified: !inertia.is_trivial(),
                    decomposition: sub(all)?,
                    inertia,
                })
            }
        }
    }

    /// The primes dividing the conductor followed by the infinite place.
    pub fn ramified_places(&self) -> Vec<Place> {
        factorize(self.conductor)
            .into_iter()
            .map(|(p, _)| Place::Prime(p))
            .chain([Place::Infinite])
            .collect()
    }

    /// For every element of the Galois group, the smallest unramified prime
    /// with that Frobenius class.
    pub fn frobenius_primes(&self) -> Result<BTreeMap<Elem, u64>> {
        let g = self.galois_group();
        let total = self.degree() as usize;
        let mut found = BTreeMap::new();
        let mut q = 1u64;
        while found.len() < total {
            q += 1;
            if self.conductor.is_multiple_of(q) || !is_prime(q) {
                continue;
            }
            found.entry(self.class_of(q)?).or_insert(q);
        }
        debug_assert!(found.keys().all(|x| g.is_element(x)));
        Ok(found)
    }

    /// Decomposition groups at the primes dividing the conductor, at infinity,
    /// and at one unramified prime per Frobenius class. Labels are the primes
    /// and `inf`.
    pub fn realizable_family(&self) -> Result<LocalFamily> {
        let mut places = Vec::new();
        let mut labels = Vec::new();
        for place in self.ramified_places() {
            places.push(self.decomposition_subgroup(place)?.decomposition);
            labels.push(place.to_string());
        }
        let frob: BTreeMap<u64, Elem> = self
            .frobenius_primes()?
            .into_iter()
            .map(|(x, q)| (q, x))
            .collect();
        for (q, x) in frob {
            places.push(Subgroup::generated(self.galois_group(), vec![x])?);
            labels.push(q.to_string());
        }
        LocalFamily::new(self.galois_group(), places)?.with_labels(labels)
    }

    /// Whether `self ⊆ other`.
    pub fn is_subfield_of(&self, other: &CycloField) -> bool {
        other.conductor.is_multiple_of(self.conductor)
            && other
                .fixing
                .iter()
                .all(|&r| self.fixing.binary_search(&(r % self.conductor)).is_ok())
    }

    /// Restriction `Gal(sup/Q) → Gal(self/Q)` for a field containing `self`.
    pub fn restriction_from(&self, sup: &CycloField) -> Result<AbHom> {
        if !self.is_subfield_of(sup) {
            return Err(Error::invalid(format!("{self:?} is not contained in {sup:?}")));
        }
        let cols = sup
            .data
            .galois
            .lifts
            .iter()
            .map(|l| self.class_of(sup.units().decode(l)))
            .collect::<Result<Vec<_>>>()?;
        AbHom::from_columns(sup.galois_group().clone(), self.galois_group().clone(), cols)
    }

    /// The subfield fixed by a subgroup of `Gal(self/Q)`.
    pub fn fixed_field(&self, sub: &Subgroup) -> Result<CycloField> {
        if sub.ambient() != self.galois_group() {
            return Err(Error::structural("subgroup of a different Galois group"));
        }
        let mut gens = self.fixing_subgroup().generators().to_vec();
        gens.extend(sub.generators().iter().map(|x| self.data.galois.lift(x)));
        let units = self.units().clone();
        let h = Subgroup::generated(units.group(), gens)?;
        Self::from_subgroup(units, h)
    }

    /// Every subfield, one per subgroup of the Galois group.
    pub fn subfields(&self, limit: u64) -> Result<Vec<CycloField>> {
        self.galois_group()
            .all_subgroups(limit)?
            .iter()
            .map(|s| self.fixed_field(s))
            .collect()
    }

    /// The fixing subgroup of `self` pulled back to `(Z/N)^*` for a multiple `N`
    /// of the conductor.
    fn pullback(&self, big: &UnitGroup) -> Result<Subgroup> {
        let red = big.reduction_to(self.units())?;
        Ok(self.fixing_subgroup().quotient().proj.compose(&red)?.kernel())
    }

    pub fn compositum(&self, other: &CycloField) -> Result<CycloField> {
        let units = UnitGroup::new(self.conductor.lcm(&other.conductor))?;
        let h = self.pullback(&units)?.intersect(&other.pullback(&units)?)?;
        Self::from_subgroup(units, h)
    }

    pub fn intersection(&self, other: &CycloField) -> Result<CycloField> {
        let units = UnitGroup::new(self.conductor.lcm(&other.conductor))?;
        let h = self.pullback(&units)?.join(&other.pullback(&units)?)?;
        Self::from_subgroup(units, h)
    }
}

pub fn compositum(l1: &CycloField, l2: &CycloField) -> Result<CycloField> {
    l1.compositum(l2)
}

pub fn intersection(l1: &CycloField, l2: &CycloField) -> Result<CycloField> {
    l1.intersection(l2)
}

/// The tower `L = L₁L₂` over `Q` with the realizable family of `L`.
pub fn tower_from_fields(l1: &CycloField, l2: &CycloField) -> Result<(AbelianTower, LocalFamily)> {
    let l = l1.compositum(l2)?;
    let n1 = l1.restriction_from(&l)?.kernel();
    let n2 = l2.restriction_from(&l)?.kernel();
    let tower = AbelianTower::new(l.galois_group(), n1, n2)?;
    Ok((tower, l.realizable_family()?))
}
