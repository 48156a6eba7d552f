//! Presentations `Z^g / L` and their reduction to invariant-factor form.

use super::snf::{with_fallback, JobOnSmith, Smith, SnfInt};
use crate::error::{Error, Result};

/// `Z^g / L` rewritten as `⊕ Z/d_i` with explicit change of basis.
#[derive(Clone, Debug)]
pub(crate) struct Presentation {
    pub factors: Vec<u64>,
    /// Row `i`: coordinate `i` of the image of each old generator, mod `factors[i]`.
    pub to_canon: Vec<Vec<u64>>,
    /// Row `i`: a representative of new generator `i` in old coordinates.
    pub from_canon: Vec<Vec<u64>>,
}

struct Canonicalize<'a> {
    moduli: &'a [u64],
}

impl JobOnSmith<Result<Presentation>> for Canonicalize<'_> {
    fn run<T: SnfInt>(&self, s: &Smith<T>) -> Option<Result<Presentation>> {
        let g = self.moduli.len();
        let u = s.u.as_ref().expect("tracked");
        let u_inv = s.u_inv.as_ref().expect("tracked");
        let mut factors = Vec::new();
        let mut to_canon = Vec::new();
        let mut from_canon = Vec::new();
        for i in 0..g {
            let Some(d) = s.diag[i].to_u64() else {
                // Entries fit in i64 when the scalar is i64, so this is a genuine
                // out-of-range factor in the BigInt pass.
                return Some(Err(Error::Overflow(format!(
                    "invariant factor {:?} exceeds u64",
                    s.diag[i]
                ))));
            };
            debug_assert!(d >= 1, "relation lattice must have full rank");
            if d == 1 {
                continue;
            }
            factors.push(d);
            to_canon.push((0..g).map(|j| u.at(i, j).rem_u64(d)).collect());
            from_canon.push(
                (0..g)
                    .map(|j| u_inv.at(j, i).rem_u64(self.moduli[j]))
                    .collect(),
            );
        }
        Some(Ok(Presentation {
            factors,
            to_canon,
            from_canon,
        }))
    }
}

/// Reduces `Z^g / ⟨relations, moduli[j]·e_j⟩` to invariant-factor form.
///
/// Each relation is a vector of length `g`; every `moduli[j]` must be ≥ 1.
pub(crate) fn canonicalize(relations: &[Vec<u64>], moduli: &[u64]) -> Result<Presentation> {
    let g = moduli.len();
    debug_assert!(moduli.iter().all(|&m| m >= 1));
    // Drop relations that are already zero modulo the diagonal part.
    let rels: Vec<&Vec<u64>> = relations
        .iter()
        .filter(|r| r.iter().zip(moduli).any(|(&x, &m)| x % m != 0))
        .collect();
    let r = rels.len();
    with_fallback(
        g,
        r + g,
        |i, j| {
            if j < r {
                rels[j][i] % moduli[i]
            } else if j - r == i {
                moduli[i]
            } else {
                0
            }
        },
        true,
        false,
        Canonicalize { moduli },
    )
}

struct Kernel<'a> {
    ngens: usize,
    moduli: &'a [u64],
}

impl JobOnSmith<Vec<Vec<u64>>> for Kernel<'_> {
    fn run<T: SnfInt>(&self, s: &Smith<T>) -> Option<Vec<Vec<u64>>> {
        let v = s.v.as_ref().expect("tracked");
        let rank = s.rank();
        let mut out = Vec::new();
        for c in rank..s.cols {
            let vec: Vec<u64> = (0..self.ngens)
                .map(|j| v.at(j, c).rem_u64(self.moduli[j]))
                .collect();
            if vec.iter().any(|&x| x != 0) {
                out.push(vec);
            }
        }
        Some(out)
    }
}

/// Generators of `{a ∈ Z^g : Σ a_j·images[j] ≡ 0 in ⊕ Z/target[i]}`, reduced
/// modulo `gen_moduli` (which must annihilate the corresponding images).
pub(crate) fn relation_lattice(
    images: &[Vec<u64>],
    target: &[u64],
    gen_moduli: &[u64],
) -> Vec<Vec<u64>> {
    let g = images.len();
    let m = target.len();
    if g == 0 {
        return Vec::new();
    }
    with_fallback(
        m,
        g + m,
        |i, j| {
            if j < g {
                images[j][i]
            } else if j - g == i {
                target[i]
            } else {
                0
            }
        },
        false,
        true,
        Kernel {
            ngens: g,
            moduli: gen_moduli,
        },
    )
}
