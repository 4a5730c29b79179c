//! Recognition of built-in families: Cartan type, and the five diagrams whose
//! eminent pre-Nichols algebra is not the distinguished one.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{classical_roots, BraidingMatrix};
use crate::error::{Error, Result};
use crate::lattice::DegreeVector;
use crate::rootsys::CartanMatrix;
use crate::scalars::{Order, Scalar};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum FamilyTag {
    #[serde(rename = "distinguished")]
    Distinguished,
    #[serde(rename = "A2_G3")]
    A2G3,
    #[serde(rename = "superA3_2")]
    SuperA3Two,
    #[serde(rename = "superA3_123")]
    SuperA3All,
    #[serde(rename = "g23_d1")]
    G23D1,
    #[serde(rename = "g23_d2")]
    G23D2,
}

impl FamilyTag {
    pub const EXCEPTIONAL: [FamilyTag; 5] = [
        FamilyTag::A2G3,
        FamilyTag::SuperA3Two,
        FamilyTag::SuperA3All,
        FamilyTag::G23D1,
        FamilyTag::G23D2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyTag::Distinguished => "distinguished",
            FamilyTag::A2G3 => "A2_G3",
            FamilyTag::SuperA3Two => "superA3_2",
            FamilyTag::SuperA3All => "superA3_123",
            FamilyTag::G23D1 => "g23_d1",
            FamilyTag::G23D2 => "g23_d2",
        }
    }

    pub fn is_exceptional(self) -> bool {
        self != FamilyTag::Distinguished
    }

    /// A braiding of this family. `param` is `q` for the super families
    /// (any scalar other than ±1) and `ξ ∈ 𝔾₃′` otherwise.
    pub fn braiding(self, param: Scalar) -> Result<BraidingMatrix> {
        let one = Scalar::one();
        match self {
            FamilyTag::Distinguished => Err(Error::Invalid(
                "distinguished data are built with a Cartan matrix".into(),
            )),
            FamilyTag::A2G3 => {
                if param.order() != Order::Finite(3) {
                    return Err(Error::InvalidBraiding("A2_G3 needs q of order 3".into()));
                }
                BraidingMatrix::new(vec![vec![param, param.inv()], vec![one, param]])
            }
            _ => {
                let t = template(self, param).ok_or_else(|| {
                    Error::InvalidBraiding(format!("parameter {param} not allowed for {self}"))
                })?;
                BraidingMatrix::new(vec![
                    vec![t.labels[0], t.edges[0], one],
                    vec![one, t.labels[1], t.edges[1]],
                    vec![one, one, t.labels[2]],
                ])
            }
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        [FamilyTag::Distinguished]
            .into_iter()
            .chain(FamilyTag::EXCEPTIONAL)
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::parse("family tag", s, "unknown tag"))
    }
}

/// A matched component, in the component's local coordinates.
#[derive(Clone, Debug)]
pub struct Recognized {
    pub family: FamilyTag,
    pub roots: Vec<DegreeVector>,
    pub bold: Vec<DegreeVector>,
    /// The hard-coded `Ô₊^q` row for exceptional families.
    pub hoc: Option<Vec<DegreeVector>>,
    pub cartan_type: Option<String>,
    pub parameter: Option<Scalar>,
}

/// `a_ij = −min{m : (m+1)_{q_ii} = 0 or q_ii^m q̃_ij = 1}`; the braiding is of
/// Cartan type when `q̃_ij = q_ii^{a_ij}` and `(a_ij)` is of finite type.
pub fn cartan_matrix_of(b: &BraidingMatrix) -> Option<CartanMatrix> {
    let n = b.rank();
    let mut a = vec![vec![0i64; n]; n];
    for i in 0..n {
        a[i][i] = 2;
        let qii = b.q(i, i);
        for j in 0..n {
            if i == j {
                continue;
            }
            let qt = b.q_tilde(i, j);
            let m = (0..=3).find(|&m| qii.quantum_integer_vanishes(m + 1) || (qii.power(m) * qt).is_one())?;
            if qii.power(-m) != qt {
                return None;
            }
            a[i][j] = -m;
        }
    }
    CartanMatrix::new(a).ok()
}

/// Matches a connected braiding against the built-in families.
///
/// Cartan type A or D with every label `−1` is rejected.
pub fn recognize(b: &BraidingMatrix) -> Result<Option<Recognized>> {
    if let Some(cm) = cartan_matrix_of(b) {
        let (letter, rank) = cm.classify_component(&(0..cm.rank()).collect::<Vec<_>>());
        let all_minus = (0..b.rank()).all(|i| b.q(i, i) == Scalar::minus_one());
        if all_minus && matches!(letter, 'A' | 'D') {
            return Err(Error::ExcludedComponent {
                component: Vec::new(),
                reason: format!("Cartan type {letter}{rank} with label −1 is outside the classification in scope"),
            });
        }
        let roots = classical_roots(&cm);
        if letter == 'A' && rank == 2 && b.q(0, 0).order() == Order::Finite(3) {
            let dv = |c: [i64; 2]| DegreeVector::new(c.to_vec());
            return Ok(Some(Recognized {
                family: FamilyTag::A2G3,
                roots,
                bold: vec![dv([2, 1]), dv([1, 2])],
                hoc: Some(vec![dv([3, 0]), dv([3, 3]), dv([0, 3]), dv([2, 1]), dv([1, 2])]),
                cartan_type: Some(cm.type_name()),
                parameter: Some(b.q(0, 0)),
            }));
        }
        return Ok(Some(Recognized {
            family: FamilyTag::Distinguished,
            roots,
            bold: Vec::new(),
            hoc: None,
            cartan_type: Some(cm.type_name()),
            parameter: None,
        }));
    }
    if b.rank() != 3 {
        return Ok(None);
    }
    let mut candidates: BTreeSet<Scalar> = BTreeSet::new();
    for i in 0..3 {
        for j in 0..3 {
            let s = if i == j { b.q(i, i) } else { b.q_tilde(i, j) };
            candidates.insert(s);
            candidates.insert(s.inv());
        }
    }
    candidates.insert(Scalar::root_of_unity(3, 1));
    candidates.insert(Scalar::root_of_unity(3, 2));
    for tag in [FamilyTag::SuperA3Two, FamilyTag::SuperA3All, FamilyTag::G23D1, FamilyTag::G23D2] {
        for &p in &candidates {
            let Some(t) = template(tag, p) else { continue };
            for perm in PERMUTATIONS {
                if t.matches(b, perm) {
                    let map = |v: &[i64; 3]| {
                        let mut c = vec![0i64; 3];
                        for k in 0..3 {
                            c[perm[k]] = v[k];
                        }
                        DegreeVector::new(c)
                    };
                    return Ok(Some(Recognized {
                        family: tag,
                        roots: t.roots.iter().map(map).collect(),
                        bold: t.bold.iter().map(map).collect(),
                        hoc: t.hoc.as_ref().map(|row| row.iter().map(map).collect()),
                        cartan_type: None,
                        parameter: Some(p),
                    }));
                }
            }
        }
    }
    Ok(None)
}

const PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// A rank-3 chain diagram `1 - 2 - 3` with its root and `Ô₊` tables.
struct Template {
    labels: [Scalar; 3],
    /// `q̃₁₂`, `q̃₂₃`; `q̃₁₃ = 1`.
    edges: [Scalar; 2],
    roots: Vec<[i64; 3]>,
    bold: Vec<[i64; 3]>,
    hoc: Option<Vec<[i64; 3]>>,
}

impl Template {
    /// Template vertex `k` sits at vertex `perm[k]` of `b`.
    fn matches(&self, b: &BraidingMatrix, perm: [usize; 3]) -> bool {
        let edge = |s: usize, t: usize| match (s.min(t), s.max(t)) {
            (0, 1) => self.edges[0],
            (1, 2) => self.edges[1],
            _ => Scalar::one(),
        };
        (0..3).all(|k| b.q(perm[k], perm[k]) == self.labels[k])
            && (0..3).all(|s| (s + 1..3).all(|t| b.q_tilde(perm[s], perm[t]) == edge(s, t)))
    }
}

const SUPER_A3_ROOTS: [[i64; 3]; 6] = [
    [1, 0, 0],
    [0, 1, 0],
    [0, 0, 1],
    [1, 1, 0],
    [0, 1, 1],
    [1, 1, 1],
];

fn template(tag: FamilyTag, p: Scalar) -> Option<Template> {
    let m1 = Scalar::minus_one();
    let xi_ok = p.order() == Order::Finite(3);
    let finite_n = p.order().finite().map(|n| n as i64);
    match tag {
        FamilyTag::SuperA3Two if !p.is_one() && p != m1 => Some(Template {
            labels: [p, m1, p.inv()],
            edges: [p.inv(), p],
            roots: SUPER_A3_ROOTS.to_vec(),
            bold: vec![[1, 2, 1]],
            hoc: finite_n.map(|n| vec![[n, 0, 0], [0, 0, n], [1, 2, 1]]),
        }),
        FamilyTag::SuperA3All if !p.is_one() && p != m1 => Some(Template {
            labels: [m1, m1, m1],
            edges: [p, p.inv()],
            roots: SUPER_A3_ROOTS.to_vec(),
            bold: vec![[1, 0, 1]],
            hoc: finite_n.map(|n| vec![[n, n, 0], [0, n, n], [1, 0, 1]]),
        }),
        FamilyTag::G23D1 if xi_ok => Some(Template {
            labels: [m1, m1, m1],
            edges: [p, p],
            roots: vec![
                [1, 0, 0],
                [0, 1, 0],
                [0, 0, 1],
                [1, 1, 0],
                [0, 1, 1],
                [1, 1, 1],
                [1, 2, 1],
                [2, 2, 1],
                [1, 2, 2],
                [2, 3, 2],
            ],
            bold: vec![[2, 3, 1], [1, 3, 2]],
            hoc: Some(vec![
                [3, 3, 0],
                [3, 6, 3],
                [0, 3, 3],
                [6, 6, 6],
                [2, 3, 1],
                [1, 3, 2],
            ]),
        }),
        FamilyTag::G23D2 if xi_ok => Some(Template {
            labels: [m1, p, m1],
            edges: [p.power(2), p],
            roots: vec![
                [1, 0, 0],
                [0, 1, 0],
                [0, 0, 1],
                [1, 1, 0],
                [0, 1, 1],
                [1, 1, 1],
                [0, 2, 1],
                [1, 2, 1],
                [1, 2, 2],
                [1, 3, 2],
            ],
            bold: vec![[1, 3, 1], [2, 3, 2]],
            hoc: Some(vec![
                [3, 3, 3],
                [3, 6, 3],
                [0, 3, 0],
                [0, 6, 6],
                [1, 3, 1],
                [2, 3, 2],
            ]),
        }),
        _ => None,
    }
}
