//! Tensor and exterior squares of finite abelian groups.
//!
//! For `G = ⊕ Z/d_i` the tensor square has basis `g_i ⊗ g_j` of order
//! `gcd(d_i, d_j)` and the exterior square `G ∧ G = G ⊗ G / ⟨g ⊗ g⟩` has basis
//! `g_i ∧ g_j` for `i < j`. Both are stored on this pair basis and also
//! renormalized to invariant-factor form with a recorded change of basis, so
//! downstream cokernels see canonical groups.

use num_integer::Integer;

use crate::abgroup::{canonicalize, AbHom, Elem, FinAbGroup};
use crate::error::{Error, Result};

/// The pair basis of a tensor or exterior square before renormalization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedgeBasis {
    pub pairs: Vec<(usize, usize)>,
    /// `gcd(d_i, d_j)` for each pair.
    pub orders: Vec<u64>,
}

/// A group presented on a pair basis, with its canonical form.
#[derive(Clone, Debug)]
struct PairGroup {
    basis: WedgeBasis,
    group: FinAbGroup,
    to_canon: Vec<Vec<u64>>,
    from_canon: Vec<Vec<u64>>,
}

impl PairGroup {
    fn new(base: &FinAbGroup, pairs: Vec<(usize, usize)>) -> Result<Self> {
        let d = base.invariant_factors();
        let orders: Vec<u64> = pairs.iter().map(|&(i, j)| d[i].gcd(&d[j])).collect();
        let p = canonicalize(&[], &orders)?;
        let group = FinAbGroup::new(p.factors)?;
        let (to_canon, from_canon) = (p.to_canon, p.from_canon);
        Ok(PairGroup {
            basis: WedgeBasis { pairs, orders },
            group,
            to_canon,
            from_canon,
        })
    }

    fn encode(&self, raw: &[u64]) -> Elem {
        self.to_canon
            .iter()
            .zip(self.group.invariant_factors())
            .map(|(row, &e)| {
                row.iter().zip(raw).fold(0u128, |acc, (&a, &x)| {
                    (acc + (a as u128 * x as u128) % e as u128) % e as u128
                }) as u64
            })
            .collect()
    }

    fn decode(&self, x: &[u64]) -> Vec<u64> {
        let mut raw = vec![0u128; self.basis.pairs.len()];
        for (coeffs, &k) in self.from_canon.iter().zip(x) {
            for (p, (&c, &o)) in coeffs.iter().zip(&self.basis.orders).enumerate() {
                raw[p] = (raw[p] + (c as u128 * k as u128) % o as u128) % o as u128;
            }
        }
        raw.into_iter().map(|v| v as u64).collect()
    }
}

fn bilinear_coord(a: &[u64], b: &[u64], i: usize, j: usize, order: u64, alternating: bool) -> u64 {
    let o = order as i128;
    let ab = (a[i] as i128 % o) * (b[j] as i128 % o);
    let v = if alternating {
        ab - (a[j] as i128 % o) * (b[i] as i128 % o)
    } else {
        ab
    };
    v.rem_euclid(o) as u64
}

/// `G ⊗ G` with its bilinear encoder.
#[derive(Clone, Debug)]
pub struct TensorSquare {
    base: FinAbGroup,
    inner: PairGroup,
}

impl TensorSquare {
    pub fn new(base: &FinAbGroup) -> Self {
        let k = base.rank();
        let pairs = (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).collect();
        TensorSquare {
            base: base.clone(),
            inner: PairGroup::new(base, pairs).expect("pair orders divide the exponent"),
        }
    }

    pub fn base(&self) -> &FinAbGroup {
        &self.base
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.inner.group
    }

    pub fn basis(&self) -> &WedgeBasis {
        &self.inner.basis
    }

    /// `a ⊗ b` in canonical coordinates.
    pub fn tensor(&self, a: &[u64], b: &[u64]) -> Elem {
        let raw = self.pair_coords(a, b);
        self.inner.encode(&raw)
    }

    /// `a ⊗ b` on the pair basis.
    pub fn pair_coords(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let basis = &self.inner.basis;
        basis
            .pairs
            .iter()
            .zip(&basis.orders)
            .map(|(&(i, j), &o)| bilinear_coord(a, b, i, j, o, false))
            .collect()
    }
}

pub fn tensor_square(g: &FinAbGroup) -> TensorSquare {
    TensorSquare::new(g)
}

/// `G ∧ G` with its alternating bilinear encoder.
#[derive(Clone, Debug)]
pub struct ExteriorSquare {
    base: FinAbGroup,
    inner: PairGroup,
}

impl ExteriorSquare {
    pub fn new(base: &FinAbGroup) -> Self {
        let k = base.rank();
        let pairs = (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .collect();
        ExteriorSquare {
            base: base.clone(),
            inner: PairGroup::new(base, pairs).expect("pair orders divide the exponent"),
        }
    }

    pub fn base(&self) -> &FinAbGroup {
        &self.base
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.inner.group
    }

    pub fn basis(&self) -> &WedgeBasis {
        &self.inner.basis
    }

    /// `a ∧ b` on the pair basis: coordinate `(i, j)` is `a_i b_j − a_j b_i`.
    pub fn pair_coords(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let basis = &self.inner.basis;
        basis
            .pairs
            .iter()
            .zip(&basis.orders)
            .map(|(&(i, j), &o)| bilinear_coord(a, b, i, j, o, true))
            .collect()
    }

    /// `a ∧ b` in canonical coordinates of [`Self::group`].
    pub fn wedge(&self, a: &[u64], b: &[u64]) -> Elem {
        let raw = self.pair_coords(a, b);
        self.inner.encode(&raw)
    }

    /// Pair-basis coordinates to canonical coordinates.
    pub fn from_pairs(&self, raw: &[u64]) -> Elem {
        self.inner.encode(raw)
    }

    /// A pair-basis representative of a canonical element.
    pub fn to_pairs(&self, x: &[u64]) -> Vec<u64> {
        self.inner.decode(x)
    }

    /// Expands a canonical element as `Σ c_ij (g_i ∧ g_j)` and returns the
    /// nonzero terms `((i, j), c_ij)`.
    pub fn terms(&self, x: &[u64]) -> Vec<((usize, usize), u64)> {
        self.to_pairs(x)
            .into_iter()
            .zip(&self.inner.basis.pairs)
            .filter(|(c, _)| *c != 0)
            .map(|(c, &p)| (p, c))
            .collect()
    }
}

pub fn exterior_square(g: &FinAbGroup) -> ExteriorSquare {
    ExteriorSquare::new(g)
}

/// `φ ∧ φ`, with both exterior squares computed here.
pub fn wedge_hom(f: &AbHom) -> AbHom {
    let src = ExteriorSquare::new(f.source());
    let tgt = ExteriorSquare::new(f.target());
    wedge_hom_between(f, &src, &tgt).expect("squares built from the hom's own groups")
}

/// `φ ∧ φ : src → tgt` where `src`, `tgt` are the exterior squares of the
/// source and target of `f`.
///
/// On the pair basis, `(φ∧φ)(g_i ∧ g_j) = Σ_{k<l} (a_ki a_lj − a_li a_kj) h_k ∧ h_l`.
pub fn wedge_hom_between(f: &AbHom, src: &ExteriorSquare, tgt: &ExteriorSquare) -> Result<AbHom> {
    if src.base() != f.source() || tgt.base() != f.target() {
        return Err(Error::structural(
            "exterior squares do not match the hom's source and target",
        ));
    }
    let images = f.columns();
    // raw image of each source pair g_i ∧ g_j, in target pair coordinates
    let pair_images: Vec<Vec<u64>> = src
        .basis()
        .pairs
        .iter()
        .map(|&(i, j)| tgt.pair_coords(&images[i], &images[j]))
        .collect();
    let torders = &tgt.basis().orders;
    let cols = src
        .inner
        .from_canon
        .iter()
        .map(|coeffs| {
            let mut raw = vec![0u128; torders.len()];
            for (c, img) in coeffs.iter().zip(&pair_images) {
                if *c == 0 {
                    continue;
                }
                for (p, (&v, &o)) in img.iter().zip(torders).enumerate() {
                    raw[p] = (raw[p] + (*c as u128 * v as u128) % o as u128) % o as u128;
                }
            }
            let raw: Vec<u64> = raw.into_iter().map(|v| v as u64).collect();
            tgt.from_pairs(&raw)
        })
        .collect();
    AbHom::from_columns(src.group().clone(), tgt.group().clone(), cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grp(f: &[u64]) -> FinAbGroup {
        FinAbGroup::new(f.to_vec()).unwrap()
    }

    #[test]
    fn tensor_examples() {
        for n in 2..=8 {
            assert_eq!(tensor_square(&grp(&[n])).group(), &grp(&[n]));
        }
        assert!(tensor_square(&FinAbGroup::trivial()).group().is_trivial());
        assert_eq!(tensor_square(&grp(&[2, 2])).group(), &grp(&[2, 2, 2, 2]));
    }

    #[test]
    fn exterior_examples() {
        for n in 2..=12 {
            assert!(exterior_square(&grp(&[n])).group().is_trivial());
        }
        assert_eq!(exterior_square(&grp(&[2, 2])).group(), &grp(&[2]));
        assert_eq!(exterior_square(&grp(&[2, 4, 8])).group(), &grp(&[2, 2, 4]));
        let w = exterior_square(&grp(&[2, 4, 8]));
        assert_eq!(w.basis().orders, vec![2, 2, 4]);
        assert_eq!(w.basis().pairs, vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn encoder_round_trip() {
        let w = exterior_square(&grp(&[2, 6, 12]));
        for x in w.group().elements() {
            assert_eq!(w.from_pairs(&w.to_pairs(&x)), x);
        }
    }

    #[test]
    fn wedge_hom_examples() {
        let g = grp(&[2, 2]);
        let id = wedge_hom(&AbHom::identity(&g));
        assert_eq!(id, AbHom::identity(&grp(&[2])));

        let zero = wedge_hom(&AbHom::zero(&g, &grp(&[2, 4])));
        assert!(zero.is_zero());

        let swap = AbHom::from_columns(g.clone(), g.clone(), vec![vec![0, 1], vec![1, 0]]).unwrap();
        let ws = wedge_hom(&swap);
        assert_eq!(ws, AbHom::identity(&grp(&[2])));
        // swap(a) ∧ swap(b) == ws(a ∧ b) for all 16 input pairs
        let w = exterior_square(&g);
        for a in g.elements() {
            for b in g.elements() {
                assert_eq!(
                    w.wedge(&swap.apply(&a), &swap.apply(&b)),
                    ws.apply(&w.wedge(&a, &b))
                );
            }
        }
    }

    #[test]
    fn mismatched_squares_are_rejected() {
        let f = AbHom::identity(&grp(&[2, 2]));
        let other = exterior_square(&grp(&[2, 4]));
        assert!(wedge_hom_between(&f, &other, &other).is_err());
    }
}
