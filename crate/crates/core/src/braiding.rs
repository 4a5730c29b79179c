//! Braiding matrices of diagonal type, their Dynkin diagrams, and root data.

mod families;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::lattice::DegreeVector;
use crate::rootsys::{graph_components, CartanMatrix, RootSystem};
use crate::scalars::{Order, Scalar};

pub use families::{recognize, FamilyTag, Recognized};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BraidingMatrix {
    entries: Vec<Vec<Scalar>>,
}

/// On-disk form: `{ "theta": 2, "entries": [["zeta(3)", "1"], ...] }`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BraidingFile {
    pub theta: usize,
    pub entries: Vec<Vec<Scalar>>,
}

impl BraidingMatrix {
    pub fn new(entries: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::InvalidBraiding("empty matrix".into()));
        }
        if let Some(row) = entries.iter().position(|r| r.len() != n) {
            return Err(Error::InvalidBraiding(format!(
                "row {} has {} entries, expected {n}",
                row + 1,
                entries[row].len()
            )));
        }
        Ok(BraidingMatrix { entries })
    }

    pub fn from_file_form(file: BraidingFile) -> Result<Self> {
        if file.entries.len() != file.theta {
            return Err(Error::RankMismatch {
                expected: file.theta,
                found: file.entries.len(),
            });
        }
        BraidingMatrix::new(file.entries)
    }

    pub fn to_file_form(&self) -> BraidingFile {
        BraidingFile {
            theta: self.rank(),
            entries: self.entries.clone(),
        }
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn q(&self, i: usize, j: usize) -> Scalar {
        self.entries[i][j]
    }

    /// `q̃_ij = q_ij q_ji`.
    pub fn q_tilde(&self, i: usize, j: usize) -> Scalar {
        self.entries[i][j] * self.entries[j][i]
    }

    pub fn entries(&self) -> &[Vec<Scalar>] {
        &self.entries
    }

    pub fn transpose(&self) -> BraidingMatrix {
        let n = self.rank();
        BraidingMatrix {
            entries: (0..n).map(|i| (0..n).map(|j| self.entries[j][i]).collect()).collect(),
        }
    }

    /// `q_{αβ} = ∏ q_ij^{a_i b_j}`.
    pub fn q_bilinear(&self, alpha: &DegreeVector, beta: &DegreeVector) -> Result<Scalar> {
        for v in [alpha, beta] {
            if v.rank() != self.rank() {
                return Err(Error::RankMismatch {
                    expected: self.rank(),
                    found: v.rank(),
                });
            }
        }
        let mut acc = Scalar::one();
        for i in alpha.support() {
            for j in beta.support() {
                let e = alpha
                    .get(i)
                    .checked_mul(beta.get(j))
                    .expect("exponent overflow");
                acc = acc * self.entries[i][j].power(e);
            }
        }
        Ok(acc)
    }

    /// `N_β = ord q_ββ`.
    pub fn root_order(&self, beta: &DegreeVector) -> Result<Order> {
        Ok(self.q_bilinear(beta, beta)?.order())
    }

    /// `q_{βα_j} q_{α_jβ} ∈ ⟨q_ββ⟩` for every simple root `α_j`.
    pub fn is_cartan_root(&self, beta: &DegreeVector) -> Result<bool> {
        let qbb = self.q_bilinear(beta, beta)?;
        for j in 0..self.rank() {
            let aj = DegreeVector::simple(self.rank(), j);
            let s = self.q_bilinear(beta, &aj)? * self.q_bilinear(&aj, beta)?;
            if !s.is_in_cyclic_subgroup(&qbb) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn diagram(&self) -> DynkinDiagram {
        let n = self.rank();
        let mut edges = BTreeMap::new();
        for i in 0..n {
            for j in i + 1..n {
                let t = self.q_tilde(i, j);
                if !t.is_one() {
                    edges.insert((i, j), t);
                }
            }
        }
        DynkinDiagram {
            labels: (0..n).map(|i| self.entries[i][i]).collect(),
            edges,
        }
    }

    /// Twist-equivalence: equal Dynkin diagrams on the same vertex numbering.
    pub fn twist_equivalent(&self, other: &BraidingMatrix) -> Result<bool> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch {
                expected: self.rank(),
                found: other.rank(),
            });
        }
        Ok(self.diagram() == other.diagram())
    }

    pub fn components(&self) -> Components {
        let diagram = self.diagram();
        let n = self.rank();
        let isolated = |i: usize| diagram.edges.keys().all(|&(a, b)| a != i && b != i);
        let mut out = Components::default();
        let mut rest = Vec::new();
        for i in 0..n {
            if isolated(i) && diagram.labels[i].is_one() {
                out.plus.push(i);
            } else if isolated(i) && diagram.labels[i] == Scalar::minus_one() {
                out.minus.push(i);
            } else {
                rest.push(i);
            }
        }
        let local = graph_components(rest.len(), |a, b| !self.q_tilde(rest[a], rest[b]).is_one());
        out.connected = local
            .into_iter()
            .map(|c| c.into_iter().map(|a| rest[a]).collect())
            .collect();
        out
    }

    /// Principal submatrix on the given vertices, in the given order.
    pub fn restrict(&self, vertices: &[usize]) -> BraidingMatrix {
        BraidingMatrix {
            entries: vertices
                .iter()
                .map(|&i| vertices.iter().map(|&j| self.entries[i][j]).collect())
                .collect(),
        }
    }

    /// Block-diagonal matrix with ones off the blocks.
    pub fn block_diagonal(parts: &[BraidingMatrix]) -> Result<BraidingMatrix> {
        let n: usize = parts.iter().map(BraidingMatrix::rank).sum();
        let mut entries = vec![vec![Scalar::one(); n]; n];
        let mut off = 0;
        for p in parts {
            for i in 0..p.rank() {
                for j in 0..p.rank() {
                    entries[off + i][off + j] = p.entries[i][j];
                }
            }
            off += p.rank();
        }
        BraidingMatrix::new(entries)
    }
}

/// `q_ij = ζ_N^{d_i a_ij}` for a primitive `N`-th root of unity `ζ_N`.
pub fn cartan_braiding(cm: &CartanMatrix, n: u64) -> Result<BraidingMatrix> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::InvalidBraiding(format!(
            "Cartan braiding needs an odd order N ≥ 3, got {n}"
        )));
    }
    let has_g2 = cm
        .components()
        .iter()
        .any(|c| cm.classify_component(c).0 == 'G');
    if has_g2 && n % 3 == 0 {
        return Err(Error::InvalidBraiding(format!(
            "order {n} is not coprime to 3 on a G2 component"
        )));
    }
    let r = cm.rank();
    let d = cm.symmetrizers();
    let entries = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| Scalar::root_of_unity(n as i64, d[i] * cm.entry(i, j)))
                .collect()
        })
        .collect();
    BraidingMatrix::new(entries)
}

/// Vertex labels `q_ii` and edge labels `q̃_ij ≠ 1` (keys `i < j`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DynkinDiagram {
    pub labels: Vec<Scalar>,
    pub edges: BTreeMap<(usize, usize), Scalar>,
}

impl DynkinDiagram {
    pub fn edge(&self, i: usize, j: usize) -> Scalar {
        let key = (i.min(j), i.max(j));
        self.edges.get(&key).copied().unwrap_or_else(Scalar::one)
    }
}

impl fmt::Display for DynkinDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self
            .labels
            .iter()
            .enumerate()
            .map(|(i, l)| format!("{}:{l}", i + 1))
            .collect();
        write!(f, "vertices [{}]", labels.join(", "))?;
        for ((i, j), e) in &self.edges {
            write!(f, "; {}-{}: {e}", i + 1, j + 1)?;
        }
        Ok(())
    }
}

/// Partition of the vertices: isolated `+1`/`−1` vertices and the
/// connected components of the rest (0-based vertex indices).
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Components {
    pub plus: Vec<usize>,
    pub minus: Vec<usize>,
    pub connected: Vec<Vec<usize>>,
}

/// One positive root of `Δ₊^q`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct RootEntry {
    pub degree: DegreeVector,
    /// `N_β`, always finite here.
    pub order: u64,
    pub cartan: bool,
    pub component: usize,
}

/// One element of `Ô₊^q`: either `N_β β` for a Cartan root or a bold degree.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct HocEntry {
    pub degree: DegreeVector,
    pub bold: bool,
    pub component: usize,
    /// Index into the root list for non-bold entries.
    pub root: Option<usize>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ComponentInfo {
    /// 0-based vertices of the component, increasing.
    pub vertices: Vec<usize>,
    pub family: FamilyTag,
    /// Classical type for Cartan-type components, e.g. `A2`.
    pub cartan_type: Option<String>,
    /// `q` or `ξ` of the matched family template.
    pub parameter: Option<Scalar>,
    /// Whether `Δ₊^q` came from a datum file rather than a built-in family.
    pub supplied_roots: bool,
}

/// `Δ₊^q` with `N_β`, Cartan flags, and `Ô₊^q`, per connected component.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RootDatum {
    braiding: BraidingMatrix,
    components: Vec<ComponentInfo>,
    roots: Vec<RootEntry>,
    hoc: Vec<HocEntry>,
}

/// On-disk root datum; omitted fields are computed, supplied ones are checked.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DatumFile {
    pub braiding: BraidingFile,
    pub positive_roots: Vec<Vec<i64>>,
    #[serde(rename = "N_beta", default, skip_serializing_if = "Option::is_none")]
    pub n_beta: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cartan_flags: Option<Vec<bool>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family_tag: Option<FamilyTag>,
}

impl RootDatum {
    /// Assembles the datum component by component. `supplied` roots (global
    /// coordinates) are required for components that match no built-in family.
    pub fn build(braiding: &BraidingMatrix, supplied: Option<&[DegreeVector]>) -> Result<RootDatum> {
        let theta = braiding.rank();
        let comps = braiding.components();
        if let Some(&v) = comps.plus.first() {
            return Err(Error::ExcludedComponent {
                component: vec![v + 1],
                reason: "isolated vertex labelled 1 (the set I⁺ must be empty)".into(),
            });
        }
        if let Some(&v) = comps.minus.first() {
            return Err(Error::ExcludedComponent {
                component: vec![v + 1],
                reason: "isolated vertex labelled −1 (the set I⁻ must be empty)".into(),
            });
        }
        let mut by_component: Vec<Vec<DegreeVector>> = vec![Vec::new(); comps.connected.len()];
        if let Some(list) = supplied {
            let mut seen = BTreeSet::new();
            for r in list {
                if r.rank() != theta {
                    return Err(Error::RankMismatch {
                        expected: theta,
                        found: r.rank(),
                    });
                }
                if !r.is_nonnegative() || r.is_zero() {
                    return Err(Error::InvalidDatum(format!("{r:?} is not a positive degree")));
                }
                if !seen.insert(r.clone()) {
                    return Err(Error::InvalidDatum(format!("root {r} listed twice")));
                }
                let supp = r.support();
                let owner = comps
                    .connected
                    .iter()
                    .position(|c| supp.iter().all(|v| c.contains(v)))
                    .ok_or_else(|| {
                        Error::InvalidDatum(format!("root {r} spans several components"))
                    })?;
                by_component[owner].push(r.clone());
            }
        }

        let mut datum = RootDatum {
            braiding: braiding.clone(),
            components: Vec::new(),
            roots: Vec::new(),
            hoc: Vec::new(),
        };
        for (ci, vertices) in comps.connected.iter().enumerate() {
            let local = braiding.restrict(vertices);
            let recognized = recognize(&local).map_err(|e| match e {
                Error::ExcludedComponent { reason, .. } => Error::ExcludedComponent {
                    component: one_based(vertices),
                    reason,
                },
                e => e,
            })?;
            let given: Vec<DegreeVector> = by_component[ci]
                .iter()
                .map(|r| r.restrict(vertices))
                .collect();
            let (roots, bold, family, cartan_type, parameter, template_hoc) = match recognized {
                Some(rec) => {
                    if !given.is_empty() {
                        let a: BTreeSet<_> = given.iter().collect();
                        let b: BTreeSet<_> = rec.roots.iter().collect();
                        if a != b {
                            return Err(Error::InvalidDatum(format!(
                                "supplied roots for component {:?} disagree with the {} family",
                                one_based(vertices),
                                rec.family
                            )));
                        }
                    }
                    (rec.roots, rec.bold, rec.family, rec.cartan_type, rec.parameter, rec.hoc)
                }
                None if !given.is_empty() => {
                    (given, Vec::new(), FamilyTag::Distinguished, None, None, None)
                }
                None => {
                    return Err(Error::UnrecognizedComponent {
                        component: one_based(vertices),
                    })
                }
            };
            let supplied_roots = family == FamilyTag::Distinguished && cartan_type.is_none();
            datum.add_component(
                &local,
                vertices,
                roots,
                bold,
                template_hoc,
                ComponentInfo {
                    vertices: vertices.clone(),
                    family,
                    cartan_type,
                    parameter,
                    supplied_roots,
                },
            )?;
        }
        datum.canonicalize()?;
        Ok(datum)
    }

    fn add_component(
        &mut self,
        local: &BraidingMatrix,
        vertices: &[usize],
        roots: Vec<DegreeVector>,
        bold: Vec<DegreeVector>,
        template_hoc: Option<Vec<DegreeVector>>,
        info: ComponentInfo,
    ) -> Result<()> {
        let theta = self.braiding.rank();
        let ci = self.components.len();
        let mut local_hoc = Vec::new();
        for beta in &roots {
            let order = match local.root_order(beta)? {
                Order::Infinite => {
                    return Err(Error::InvalidDatum(format!(
                        "N_β = ∞ at β = {} in component {:?}; the Nichols algebra must be finite-dimensional",
                        beta.embed(theta, vertices),
                        one_based(vertices)
                    )))
                }
                Order::Finite(1) => {
                    return Err(Error::InvalidDatum(format!(
                        "q_ββ = 1 at β = {}",
                        beta.embed(theta, vertices)
                    )))
                }
                Order::Finite(n) => n,
            };
            let cartan = local.is_cartan_root(beta)?;
            let index = self.roots.len();
            if cartan {
                let deg = beta.scale(order as i64);
                local_hoc.push(deg.clone());
                self.hoc.push(HocEntry {
                    degree: deg.embed(theta, vertices),
                    bold: false,
                    component: ci,
                    root: Some(index),
                });
            }
            self.roots.push(RootEntry {
                degree: beta.embed(theta, vertices),
                order,
                cartan,
                component: ci,
            });
        }
        for b in &bold {
            local_hoc.push(b.clone());
            self.hoc.push(HocEntry {
                degree: b.embed(theta, vertices),
                bold: true,
                component: ci,
                root: None,
            });
        }
        if let Some(row) = template_hoc {
            let a: BTreeSet<_> = row.iter().collect();
            let b: BTreeSet<_> = local_hoc.iter().collect();
            if a != b || row.len() != local_hoc.len() {
                return Err(Error::Internal(format!(
                    "computed Ô₊ of the {} component differs from its table row",
                    info.family
                )));
            }
        }
        self.components.push(info);
        Ok(())
    }

    fn canonicalize(&mut self) -> Result<()> {
        let mut order: Vec<usize> = (0..self.roots.len()).collect();
        order.sort_by(|&a, &b| self.roots[a].degree.cmp(&self.roots[b].degree));
        let mut new_index = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = new;
        }
        self.roots = order.iter().map(|&i| self.roots[i].clone()).collect();
        for h in &mut self.hoc {
            h.root = h.root.map(|r| new_index[r]);
        }
        self.hoc.sort_by(|a, b| a.degree.cmp(&b.degree));
        for w in self.hoc.windows(2) {
            if w[0].degree == w[1].degree {
                return Err(Error::InvalidDatum(format!(
                    "duplicate degree {} in Ô₊",
                    w[0].degree
                )));
            }
        }
        Ok(())
    }

    /// Reads a datum file (has a `braiding` key) or a bare braiding file
    /// (has `theta`) and builds the datum, checking any supplied fields.
    pub fn load(path: &Path) -> Result<RootDatum> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let json = |source| Error::Json {
            path: path.to_path_buf(),
            source,
        };
        let value: Value = serde_json::from_str(&text).map_err(json)?;
        if value.get("braiding").is_some() {
            let file: DatumFile = serde_json::from_value(value).map_err(json)?;
            RootDatum::from_datum_file(file)
        } else if value.get("theta").is_some() {
            let file: BraidingFile = serde_json::from_value(value).map_err(json)?;
            RootDatum::build(&BraidingMatrix::from_file_form(file)?, None)
        } else {
            Err(Error::InvalidDatum(format!(
                "{} has neither a \"braiding\" nor a \"theta\" key",
                path.display()
            )))
        }
    }

    pub fn from_datum_file(file: DatumFile) -> Result<RootDatum> {
        let braiding = BraidingMatrix::from_file_form(file.braiding)?;
        let theta = braiding.rank();
        let supplied: Vec<DegreeVector> = file
            .positive_roots
            .iter()
            .map(|c| {
                if c.len() != theta {
                    Err(Error::RankMismatch {
                        expected: theta,
                        found: c.len(),
                    })
                } else {
                    Ok(DegreeVector::new(c.clone()))
                }
            })
            .collect::<Result<_>>()?;
        let datum = RootDatum::build(&braiding, Some(&supplied))?;
        let count = supplied.len();
        if count != datum.roots.len() {
            return Err(Error::InvalidDatum(format!(
                "{count} roots supplied, the datum has {}",
                datum.roots.len()
            )));
        }
        let lookup = |r: &DegreeVector| datum.roots.iter().find(|e| &e.degree == r).unwrap();
        if let Some(ns) = &file.n_beta {
            if ns.len() != count {
                return Err(Error::InvalidDatum("N_beta length differs from positive_roots".into()));
            }
            for (r, &n) in supplied.iter().zip(ns) {
                if lookup(r).order != n {
                    return Err(Error::InvalidDatum(format!(
                        "supplied N_β = {n} at {r}, computed {}",
                        lookup(r).order
                    )));
                }
            }
        }
        if let Some(flags) = &file.cartan_flags {
            if flags.len() != count {
                return Err(Error::InvalidDatum(
                    "cartan_flags length differs from positive_roots".into(),
                ));
            }
            for (r, &f) in supplied.iter().zip(flags) {
                if lookup(r).cartan != f {
                    return Err(Error::InvalidDatum(format!(
                        "supplied Cartan flag {f} at {r} disagrees with the braiding"
                    )));
                }
            }
        }
        if let Some(tag) = file.family_tag {
            if datum.family_tag() != Some(tag) {
                return Err(Error::InvalidDatum(format!(
                    "supplied family_tag {tag} disagrees with the diagram"
                )));
            }
        }
        Ok(datum)
    }

    /// Serializable summary, with every field filled in.
    pub fn to_datum_file(&self) -> DatumFile {
        DatumFile {
            braiding: self.braiding.to_file_form(),
            positive_roots: self.roots.iter().map(|r| r.degree.coords().to_vec()).collect(),
            n_beta: Some(self.roots.iter().map(|r| r.order).collect()),
            cartan_flags: Some(self.roots.iter().map(|r| r.cartan).collect()),
            family_tag: self.family_tag(),
        }
    }

    /// Disjoint union of data on consecutive vertex blocks.
    pub fn disjoint_union(parts: &[RootDatum]) -> Result<RootDatum> {
        let braiding =
            BraidingMatrix::block_diagonal(&parts.iter().map(|p| p.braiding.clone()).collect::<Vec<_>>())?;
        let theta = braiding.rank();
        let mut out = RootDatum {
            braiding,
            components: Vec::new(),
            roots: Vec::new(),
            hoc: Vec::new(),
        };
        let mut off = 0;
        for p in parts {
            let positions: Vec<usize> = (off..off + p.rank()).collect();
            let c0 = out.components.len();
            let r0 = out.roots.len();
            for c in &p.components {
                let mut c = c.clone();
                c.vertices = c.vertices.iter().map(|&v| positions[v]).collect();
                out.components.push(c);
            }
            for r in &p.roots {
                out.roots.push(RootEntry {
                    degree: r.degree.embed(theta, &positions),
                    order: r.order,
                    cartan: r.cartan,
                    component: r.component + c0,
                });
            }
            for h in &p.hoc {
                out.hoc.push(HocEntry {
                    degree: h.degree.embed(theta, &positions),
                    bold: h.bold,
                    component: h.component + c0,
                    root: h.root.map(|r| r + r0),
                });
            }
            off += p.rank();
        }
        out.canonicalize()?;
        Ok(out)
    }

    pub fn braiding(&self) -> &BraidingMatrix {
        &self.braiding
    }

    pub fn rank(&self) -> usize {
        self.braiding.rank()
    }

    pub fn components(&self) -> &[ComponentInfo] {
        &self.components
    }

    /// `Δ₊^q` in height-lex order.
    pub fn roots(&self) -> &[RootEntry] {
        &self.roots
    }

    /// `Ô₊^q` in height-lex order.
    pub fn hoc(&self) -> &[HocEntry] {
        &self.hoc
    }

    pub fn hoc_degrees(&self) -> Vec<DegreeVector> {
        self.hoc.iter().map(|h| h.degree.clone()).collect()
    }

    /// The tag of a connected datum; `None` when there are several components.
    pub fn family_tag(&self) -> Option<FamilyTag> {
        match self.components.as_slice() {
            [c] => Some(c.family),
            _ => None,
        }
    }

    /// Whether some component is one of the five exceptional families.
    pub fn has_exceptional_component(&self) -> bool {
        self.components.iter().any(|c| c.family.is_exceptional())
    }

    /// `dim 𝓑_q = ∏ N_β`.
    pub fn nichols_dimension(&self) -> BigUint {
        self.roots.iter().map(|r| BigUint::from(r.order)).product()
    }

    /// Component index of each `Ô₊^q` element.
    pub fn hoc_components(&self) -> Vec<usize> {
        self.hoc.iter().map(|h| h.component).collect()
    }
}

/// Elements of the input that are not the sum of two input elements.
pub fn underline_basis(elements: &[DegreeVector]) -> Vec<DegreeVector> {
    let set: BTreeSet<&DegreeVector> = elements.iter().collect();
    elements
        .iter()
        .filter(|&g| {
            !elements.iter().any(|a| {
                g.checked_sub(a)
                    .map(|rest| set.contains(&rest))
                    .unwrap_or(false)
            })
        })
        .cloned()
        .collect()
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

/// Positive roots of a Cartan-type component, in local coordinates.
pub(crate) fn classical_roots(cm: &CartanMatrix) -> Vec<DegreeVector> {
    RootSystem::generate(cm).roots().to_vec()
}

#[cfg(test)]
mod tests;
