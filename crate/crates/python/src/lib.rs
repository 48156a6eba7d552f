//! Python bindings.
//!
//! Groups are exposed as `AbelianGroup`; elements, subgroup generators and
//! families are plain nested lists of integers.

use std::sync::Arc;

use num_bigint::BigUint;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use multinorm::cyclotomic::{self, CycloField, Place};
use multinorm::grouptable::{CayleyGroup, QuarticModel};
use multinorm::obstruction::{self, AbelianTower, LocalFamily};
use multinorm::sweep::{run_sweep, SweepConfig};
use multinorm::wedge::{exterior_square, tensor_square};
use multinorm::{Elem, Error, FinAbGroup, Subgroup};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Internal { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

trait OrRaise<T> {
    fn or_raise(self) -> PyResult<T>;
}

impl<T> OrRaise<T> for multinorm::Result<T> {
    fn or_raise(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

/// A finite abelian group `Z/d1 ⊕ Z/d2 ⊕ …` in invariant-factor form.
#[pyclass(name = "AbelianGroup", module = "multinorm", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyGroup {
    inner: FinAbGroup,
}

impl From<FinAbGroup> for PyGroup {
    fn from(inner: FinAbGroup) -> Self {
        PyGroup { inner }
    }
}

#[pymethods]
impl PyGroup {
    /// Any list of cyclic orders; it is brought to invariant-factor form.
    #[new]
    fn new(orders: Vec<u64>) -> PyResult<Self> {
        Ok(FinAbGroup::from_cyclic_orders(&orders).or_raise()?.into())
    }

    #[getter]
    fn invariant_factors(&self) -> Vec<u64> {
        self.inner.invariant_factors().to_vec()
    }

    #[getter]
    fn order(&self) -> BigUint {
        self.inner.order()
    }

    fn is_trivial(&self) -> bool {
        self.inner.is_trivial()
    }

    fn exterior_square(&self) -> PyGroup {
        exterior_square(&self.inner).group().clone().into()
    }

    fn tensor_square(&self) -> PyGroup {
        tensor_square(&self.inner).group().clone().into()
    }

    fn subgroups(&self) -> PyResult<Vec<Vec<Elem>>> {
        Ok(self
            .inner
            .all_subgroups(1 << 12)
            .or_raise()?
            .iter()
            .map(|s| s.generators().to_vec())
            .collect())
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("AbelianGroup({:?})", self.inner.invariant_factors())
    }
}

fn build_family(g: &FinAbGroup, places: Option<Vec<Vec<Elem>>>) -> PyResult<LocalFamily> {
    match places {
        Some(p) => LocalFamily::from_generators(g, p).or_raise(),
        None => LocalFamily::all_cyclic(g, 1 << 12).or_raise(),
    }
}

/// `Sha` of a group with a family of decomposition groups, each given by
/// generators. Without a family all cyclic subgroups are used.
#[pyfunction]
#[pyo3(signature = (group, family=None))]
fn sha(group: &PyGroup, family: Option<Vec<Vec<Elem>>>) -> PyResult<PyGroup> {
    let fam = build_family(&group.inner, family)?;
    Ok(obstruction::sha_abelian(&group.inner, &fam).or_raise()?.into())
}

/// A tower `G ⊇ N₁, N₂` with `N₁ ∩ N₂ = 1`.
#[pyclass(name = "Tower", module = "multinorm", frozen)]
pub struct PyTower {
    inner: AbelianTower,
}

fn subgroup(g: &FinAbGroup, gens: Vec<Elem>) -> PyResult<Subgroup> {
    Subgroup::generated(g, gens).or_raise()
}

#[pymethods]
impl PyTower {
    #[new]
    fn new(group: &PyGroup, n1: Vec<Elem>, n2: Vec<Elem>) -> PyResult<Self> {
        let g = &group.inner;
        let inner = AbelianTower::new(g, subgroup(g, n1)?, subgroup(g, n2)?).or_raise()?;
        Ok(PyTower { inner })
    }

    /// `G₁ × G₂` with `N₁ = G₂` and `N₂ = G₁`.
    #[staticmethod]
    fn linearly_disjoint(g1: &PyGroup, g2: &PyGroup) -> PyResult<Self> {
        let inner = AbelianTower::linearly_disjoint(&g1.inner, &g2.inner).or_raise()?;
        Ok(PyTower { inner })
    }

    #[getter]
    fn group(&self) -> PyGroup {
        self.inner.group().clone().into()
    }

    #[getter]
    fn intersection_group(&self) -> PyGroup {
        self.inner.ge().clone().into()
    }

    #[pyo3(signature = (family=None))]
    fn multinorm_obstruction(&self, family: Option<Vec<Vec<Elem>>>) -> PyResult<PyGroup> {
        let fam = build_family(self.inner.group(), family)?;
        Ok(obstruction::multinorm_obstruction(&self.inner, &fam).or_raise()?.into())
    }

    #[pyo3(signature = (family=None))]
    fn coker_g(&self, family: Option<Vec<Vec<Elem>>>) -> PyResult<PyGroup> {
        let fam = build_family(self.inner.group(), family)?;
        Ok(obstruction::coker_g(&self.inner, &fam).or_raise()?.coker_t.into())
    }

    #[pyo3(signature = (family=None))]
    fn intersection_order(&self, family: Option<Vec<Vec<Elem>>>) -> PyResult<BigUint> {
        let fam = build_family(self.inner.group(), family)?;
        obstruction::intersection_obstruction_order(&self.inner, &fam).or_raise()
    }

    /// The comparison certificate as a dict of groups, verdict and failed checks.
    #[pyo3(signature = (family=None))]
    fn certificate<'py>(
        &self,
        py: Python<'py>,
        family: Option<Vec<Vec<Elem>>>,
    ) -> PyResult<Bound<'py, PyDict>> {
        let fam = build_family(self.inner.group(), family)?;
        let cert = obstruction::theorem1_certificate(&self.inner, &fam).or_raise()?;
        let d = PyDict::new(py);
        for (k, g) in [
            ("sha_l", &cert.sha_l),
            ("sha_l1", &cert.sha_1),
            ("sha_l2", &cert.sha_2),
            ("sha_e", &cert.sha_e),
            ("coker_t", &cert.coker_t),
        ] {
            d.set_item(k, PyGroup::from(g.clone()))?;
        }
        d.set_item("image_t_order", cert.image_t_order.clone())?;
        d.set_item("verdict", cert.verdict)?;
        d.set_item("failures", cert.failures.clone())?;
        Ok(d)
    }
}

/// An abelian number field `Q(ζ_n)^H`, stored at its conductor.
#[pyclass(name = "Field", module = "multinorm", frozen)]
pub struct PyField {
    inner: CycloField,
}

#[pymethods]
impl PyField {
    /// The subfield of `Q(ζ_n)` fixed by the residues in `fixing`.
    #[new]
    #[pyo3(signature = (conductor, fixing=Vec::new()))]
    fn new(conductor: u64, fixing: Vec<u64>) -> PyResult<Self> {
        Ok(PyField {
            inner: CycloField::new(conductor, &fixing).or_raise()?,
        })
    }

    #[staticmethod]
    fn quadratic(d: i64) -> PyResult<Self> {
        Ok(PyField {
            inner: CycloField::quadratic(d).or_raise()?,
        })
    }

    fn compositum(&self, other: &PyField) -> PyResult<PyField> {
        Ok(PyField {
            inner: cyclotomic::compositum(&self.inner, &other.inner).or_raise()?,
        })
    }

    fn intersection(&self, other: &PyField) -> PyResult<PyField> {
        Ok(PyField {
            inner: cyclotomic::intersection(&self.inner, &other.inner).or_raise()?,
        })
    }

    #[getter]
    fn conductor(&self) -> u64 {
        self.inner.conductor()
    }

    #[getter]
    fn degree(&self) -> u64 {
        self.inner.degree()
    }

    #[getter]
    fn galois_group(&self) -> PyGroup {
        self.inner.galois_group().clone().into()
    }

    /// The decomposition group at a prime or at `"inf"`, as an abstract group.
    fn decomposition_group(&self, place: &str) -> PyResult<PyGroup> {
        let place: Place = place.parse().or_raise()?;
        let data = self.inner.decomposition_subgroup(place).or_raise()?;
        Ok(data.decomposition.abstract_group().clone().into())
    }

    /// `Sha` over the decomposition groups of all places.
    fn sha(&self) -> PyResult<PyGroup> {
        let fam = self.inner.realizable_family().or_raise()?;
        Ok(obstruction::sha_abelian(self.inner.galois_group(), &fam)
            .or_raise()?
            .into())
    }

    /// `Sha` of `self ∩ other` as computed for the pair `(self, other)`.
    fn multinorm_obstruction(&self, other: &PyField) -> PyResult<PyGroup> {
        let (tower, fam) = cyclotomic::tower_from_fields(&self.inner, &other.inner).or_raise()?;
        Ok(obstruction::multinorm_obstruction(&tower, &fam).or_raise()?.into())
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.inner)
    }
}

fn table_group(perms: Vec<Vec<usize>>) -> PyResult<Arc<CayleyGroup>> {
    Ok(Arc::new(CayleyGroup::from_generators(4096, &perms).or_raise()?))
}

fn table_subgroup(g: &CayleyGroup, perms: Vec<Vec<usize>>) -> PyResult<Vec<usize>> {
    let elems = perms
        .iter()
        .map(|p| {
            g.element_of_permutation(p)
                .ok_or_else(|| PyValueError::new_err(format!("{p:?} is not in the group")))
        })
        .collect::<PyResult<Vec<_>>>()?;
    Ok(g.closure(&elems))
}

/// Bound on the second obstruction and injectivity of `H^ab → G^ab` for a
/// permutation group with normal subgroups given by permutation generators.
#[pyfunction]
fn second_obstruction(
    generators: Vec<Vec<usize>>,
    n1: Vec<Vec<usize>>,
    n2: Vec<Vec<usize>>,
) -> PyResult<(u64, bool)> {
    let g = table_group(generators)?;
    let n1 = table_subgroup(&g, n1)?;
    let n2 = table_subgroup(&g, n2)?;
    let bound = obstruction::second_obstruction_bound(&g, &n1, &n2).or_raise()?;
    let injective = obstruction::phi_injective(&g, &n1, &n2).or_raise()?;
    Ok((bound, injective))
}

/// Permutation generators `(σ, τ, υ)` of the order-16 model and generators of
/// its two fixing subgroups.
#[pyfunction]
#[allow(clippy::type_complexity)]
fn quartic_model() -> (Vec<Vec<usize>>, Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let m = QuarticModel::new();
    let perm = |x: usize| m.group.permutation(x).expect("permutation model").to_vec();
    let sigma_sq = m.group.mul(m.sigma, m.sigma);
    (
        vec![perm(m.sigma), perm(m.tau), perm(m.upsilon)],
        vec![perm(m.upsilon)],
        vec![perm(sigma_sq), perm(m.tau)],
    )
}

/// Runs the comparison sweep and returns its summary counts and failures.
#[pyfunction]
#[pyo3(signature = (max_order=16, families=5, seed=0))]
fn sweep<'py>(
    py: Python<'py>,
    max_order: u64,
    families: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let config = SweepConfig {
        max_order,
        families,
        seed,
    };
    let report = py.detach(|| run_sweep(&config)).or_raise()?;
    let d = PyDict::new(py);
    d.set_item("groups", report.groups)?;
    d.set_item("towers", report.towers)?;
    d.set_item("certificates", report.certificates)?;
    d.set_item("nontrivial", report.nontrivial)?;
    let failures: Vec<String> = report
        .failures
        .iter()
        .map(|f| format!("{} {:?} {:?} #{}: {}", f.group, f.n1, f.n2, f.family, f.checks.join(", ")))
        .collect();
    d.set_item("failures", failures)?;
    Ok(d)
}

#[pymodule]
#[pyo3(name = "multinorm")]
fn multinorm_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGroup>()?;
    m.add_class::<PyTower>()?;
    m.add_class::<PyField>()?;
    m.add_function(wrap_pyfunction!(sha, m)?)?;
    m.add_function(wrap_pyfunction!(second_obstruction, m)?)?;
    m.add_function(wrap_pyfunction!(quartic_model, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    Ok(())
}
