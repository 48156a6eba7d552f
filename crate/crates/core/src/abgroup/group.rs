use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::present::canonicalize;
use crate::error::{Error, Result};

/// An element of a [`FinAbGroup`]: coordinates in `[0, d_i)` on the invariant-factor basis.
pub type Elem = Vec<u64>;

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// A finite abelian group `Z/d_1 ⊕ … ⊕ Z/d_k` with `d_1 | d_2 | … | d_k` and every `d_i ≥ 2`.
///
/// The trivial group has no factors. Two groups are isomorphic exactly when
/// their factor lists agree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawGroup")]
pub struct FinAbGroup {
    invariant_factors: Vec<u64>,
}

#[derive(Deserialize)]
struct RawGroup {
    invariant_factors: Vec<u64>,
}

impl TryFrom<RawGroup> for FinAbGroup {
    type Error = Error;

    fn try_from(raw: RawGroup) -> Result<Self> {
        FinAbGroup::new(raw.invariant_factors)
    }
}

impl FinAbGroup {
    /// Validates an invariant-factor list.
    pub fn new(invariant_factors: Vec<u64>) -> Result<Self> {
        if let Some(&d) = invariant_factors.iter().find(|&&d| d < 2) {
            return Err(Error::invalid(format!(
                "invariant factor {d} must be at least 2"
            )));
        }
        if let Some(w) = invariant_factors.windows(2).find(|w| w[1] % w[0] != 0) {
            return Err(Error::invalid(format!(
                "invariant factors {} and {} violate the divisibility chain",
                w[0], w[1]
            )));
        }
        Ok(FinAbGroup { invariant_factors })
    }

    /// `⊕ Z/n_i` for arbitrary positive orders, renormalized.
    pub fn from_cyclic_orders(orders: &[u64]) -> Result<Self> {
        if orders.contains(&0) {
            return Err(Error::invalid("cyclic factor of order 0 (infinite)"));
        }
        Ok(FinAbGroup {
            invariant_factors: canonicalize(&[], orders)?.factors,
        })
    }

    pub fn trivial() -> Self {
        FinAbGroup {
            invariant_factors: Vec::new(),
        }
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::from_cyclic_orders(&[n])
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    /// Number of invariant factors (minimal number of generators).
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn is_cyclic(&self) -> bool {
        self.rank() <= 1
    }

    pub fn order(&self) -> BigUint {
        self.invariant_factors
            .iter()
            .map(|&d| BigUint::from(d))
            .product()
    }

    /// The order when it fits in a `u64`.
    pub fn order_u64(&self) -> Option<u64> {
        self.invariant_factors
            .iter()
            .try_fold(1u64, |acc, &d| acc.checked_mul(d))
    }

    pub fn exponent(&self) -> u64 {
        self.invariant_factors.last().copied().unwrap_or(1)
    }

    pub fn is_isomorphic(&self, other: &FinAbGroup) -> bool {
        self.invariant_factors == other.invariant_factors
    }

    pub fn zero(&self) -> Elem {
        vec![0; self.rank()]
    }

    /// Canonical generator `i` (the unit vector `e_i`).
    pub fn generator(&self, i: usize) -> Elem {
        let mut e = self.zero();
        e[i] = 1 % self.invariant_factors[i];
        e
    }

    pub fn is_element(&self, x: &[u64]) -> bool {
        x.len() == self.rank() && x.iter().zip(&self.invariant_factors).all(|(&a, &d)| a < d)
    }

    /// Reduces an arbitrary integer vector to canonical coordinates.
    pub fn reduce(&self, x: &[i128]) -> Elem {
        assert_eq!(x.len(), self.rank(), "coordinate vector has wrong length");
        x.iter()
            .zip(&self.invariant_factors)
            .map(|(&a, &d)| a.rem_euclid(d as i128) as u64)
            .collect()
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> Elem {
        x.iter()
            .zip(y)
            .zip(&self.invariant_factors)
            .map(|((&a, &b), &d)| ((a as u128 + b as u128) % d as u128) as u64)
            .collect()
    }

    pub fn neg(&self, x: &[u64]) -> Elem {
        x.iter()
            .zip(&self.invariant_factors)
            .map(|(&a, &d)| if a == 0 { 0 } else { d - a })
            .collect()
    }

    pub fn sub(&self, x: &[u64], y: &[u64]) -> Elem {
        self.add(x, &self.neg(y))
    }

    pub fn scale(&self, k: u64, x: &[u64]) -> Elem {
        x.iter()
            .zip(&self.invariant_factors)
            .map(|(&a, &d)| mul_mod(k % d, a, d))
            .collect()
    }

    pub fn is_zero_elem(&self, x: &[u64]) -> bool {
        x.iter().all(|&a| a == 0)
    }

    /// Order of an element: lcm over coordinates of `d_i / gcd(d_i, x_i)`.
    pub fn element_order(&self, x: &[u64]) -> u64 {
        x.iter()
            .zip(&self.invariant_factors)
            .fold(1u64, |acc, (&a, &d)| acc.lcm(&(d / d.gcd(&a))))
    }

    /// Index of `x` in the lexicographic enumeration of [`Self::elements`].
    pub fn element_index(&self, x: &[u64]) -> usize {
        x.iter()
            .zip(&self.invariant_factors)
            .fold(0usize, |acc, (&a, &d)| acc * d as usize + a as usize)
    }

    pub fn element_at(&self, mut index: usize) -> Elem {
        let mut out = vec![0; self.rank()];
        for (slot, &d) in out.iter_mut().zip(&self.invariant_factors).rev() {
            *slot = (index % d as usize) as u64;
            index /= d as usize;
        }
        out
    }

    /// All elements in lexicographic order of their coordinate vectors.
    ///
    /// Intended for small groups; the iterator is lazy but has `|G|` items.
    pub fn elements(&self) -> Elements<'_> {
        Elements {
            group: self,
            next: Some(self.zero()),
        }
    }

    /// All groups of order `n`, one per isomorphism class.
    pub fn all_of_order(n: u64) -> Vec<FinAbGroup> {
        fn rec(remaining: u64, last: u64, chain: &mut Vec<u64>, out: &mut Vec<FinAbGroup>) {
            if remaining == 1 {
                out.push(FinAbGroup {
                    invariant_factors: chain.clone(),
                });
                return;
            }
            let mut d = last;
            while d <= remaining {
                if remaining.is_multiple_of(d) {
                    let rest = remaining / d;
                    // every later factor is a multiple of d
                    if rest == 1 || rest.is_multiple_of(d) {
                        chain.push(d);
                        rec(rest, d, chain, out);
                        chain.pop();
                    }
                }
                d += last;
            }
        }
        if n == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        if n == 1 {
            out.push(FinAbGroup::trivial());
            return out;
        }
        for first in 2..=n {
            if n.is_multiple_of(first) {
                let rest = n / first;
                if rest == 1 || rest.is_multiple_of(first) {
                    let mut chain = vec![first];
                    rec(rest, first, &mut chain, &mut out);
                }
            }
        }
        out
    }

    /// All groups of order at most `n`, ordered by order then factor list.
    pub fn all_up_to_order(n: u64) -> Vec<FinAbGroup> {
        let mut out: Vec<FinAbGroup> = (1..=n).flat_map(FinAbGroup::all_of_order).collect();
        out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.cmp(b)));
        out
    }
}

pub struct Elements<'a> {
    group: &'a FinAbGroup,
    next: Option<Elem>,
}

impl Iterator for Elements<'_> {
    type Item = Elem;

    fn next(&mut self) -> Option<Elem> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut carried = true;
        for (slot, &d) in succ.iter_mut().zip(self.group.invariant_factors()).rev() {
            *slot += 1;
            if *slot < d {
                carried = false;
                break;
            }
            *slot = 0;
        }
        if !carried {
            self.next = Some(succ);
        }
        Some(current)
    }
}

/// `Z/d_1 ⊕ Z/d_2 ⊕ …` or `trivial`.
impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "trivial");
        }
        for (i, d) in self.invariant_factors.iter().enumerate() {
            if i > 0 {
                write!(f, " ⊕ ")?;
            }
            write!(f, "Z/{d}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinAbGroup({self})")
    }
}

pub fn is_isomorphic(g: &FinAbGroup, h: &FinAbGroup) -> bool {
    g.is_isomorphic(h)
}
