//! The poset of pre-Nichols algebras `𝓑(q, B)` of finite GK-dimension, one per
//! subset `B ⊆ Ô₊^q` closed by sums, ordered along surjections.

use std::fmt::Write as _;

use num_bigint::BigUint;
use serde::Serialize;

use crate::braiding::RootDatum;
use crate::closedsets::{hasse, BitSet, SumGround, DEFAULT_CAP};
use crate::error::{Error, Result};
use crate::hilbert::prenichols_series;
use crate::lattice::DegreeVector;

/// `𝓑(q, B) = 𝓑̂_q/⟨z_β : β ∈ Ô₊^q − B⟩`, kept as index sets over `Ô₊^q`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PreNicholsDescriptor {
    pub members: BitSet,
    pub killed: BitSet,
    pub gkdim: usize,
}

impl PreNicholsDescriptor {
    pub fn new(members: BitSet, ground_len: usize) -> Self {
        PreNicholsDescriptor {
            members,
            killed: members.complement(ground_len),
            gkdim: members.len(),
        }
    }

    pub fn is_nichols(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_eminent(&self) -> bool {
        self.killed.is_empty()
    }
}

/// Ground of `Ô₊^q` with every relation `α + β = γ` among its degrees.
pub fn build_ground(d: &RootDatum) -> Result<SumGround> {
    SumGround::new(d.hoc_degrees())
}

#[derive(Clone, Debug)]
pub struct Poset {
    pub datum: RootDatum,
    pub ground: SumGround,
    /// Sorted by `|B|`, then by the bits of `B`.
    pub nodes: Vec<PreNicholsDescriptor>,
    /// `(from, to)`: `𝓑(q, B_from) ↠ 𝓑(q, B_to)` is a cover, so `B_to ⊂ B_from`.
    pub edges: Vec<(usize, usize)>,
    pub warnings: Vec<String>,
}

pub fn full_poset(d: &RootDatum) -> Result<Poset> {
    full_poset_with_cap(d, DEFAULT_CAP)
}

pub fn full_poset_with_cap(d: &RootDatum, cap: usize) -> Result<Poset> {
    let ground = build_ground(d)?;
    let sets = ground.enumerate_closed(cap)?;
    let n = ground.len();
    let nodes: Vec<PreNicholsDescriptor> = sets.iter().map(|&s| PreNicholsDescriptor::new(s, n)).collect();
    let mut warnings = Vec::new();
    let edges: Vec<(usize, usize)> = hasse(&sets)
        .into_iter()
        .map(|(lower, upper)| {
            if sets[upper].len() != sets[lower].len() + 1 {
                warnings.push(format!(
                    "cover {} ⊂ {} adds more than one element; GKdim drops by {}",
                    sets[lower],
                    sets[upper],
                    sets[upper].len() - sets[lower].len()
                ));
            }
            (upper, lower)
        })
        .collect();
    Ok(Poset {
        datum: d.clone(),
        ground,
        nodes,
        edges,
        warnings,
    })
}

impl Poset {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Node count per GKdim, from the top dimension down.
    pub fn gkdim_profile(&self) -> Vec<(usize, usize)> {
        let top = self.ground.len();
        (0..=top)
            .rev()
            .map(|g| (g, self.nodes.iter().filter(|n| n.gkdim == g).count()))
            .filter(|(_, c)| *c > 0)
            .collect()
    }

    /// `z_β` names of the killed generators, e.g. `z_{1³2³}`.
    pub fn killed_names(&self, node: usize) -> Vec<String> {
        self.nodes[node]
            .killed
            .iter()
            .map(|i| generator_name(&self.ground.elements()[i]))
            .collect()
    }

    pub fn title(&self, node: usize) -> String {
        title(&self.datum, &self.nodes[node])
    }

    pub fn describe(&self, node: usize, max_degree: i64) -> Result<String> {
        describe(&self.datum, &self.nodes[node], max_degree)
    }

    /// Graphviz rendering; edges follow surjections.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph prenichols {\n  rankdir=TB;\n  node [shape=box];\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let label = format!("{}\\nGKdim {}", escape(&self.title(i)), n.gkdim);
            let _ = writeln!(out, "  n{i} [label=\"{label}\", gkdim={}];", n.gkdim);
        }
        for &(a, b) in &self.edges {
            let _ = writeln!(out, "  n{a} -> n{b};");
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Node {
            members: Vec<String>,
            killed: Vec<String>,
            gkdim: usize,
            title: String,
        }
        let ascii = |i: usize| self.ground.elements()[i].format_ascii().expect("nonnegative");
        let nodes: Vec<Node> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| Node {
                members: n.members.iter().map(ascii).collect(),
                killed: n.killed.iter().map(ascii).collect(),
                gkdim: n.gkdim,
                title: self.title(i),
            })
            .collect();
        serde_json::json!({ "nodes": nodes, "edges": self.edges })
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn generator_name(beta: &DegreeVector) -> String {
    format!("z_{{{}}}", beta.format_compact().expect("nonnegative degree"))
}

/// One-line name: `𝓑_q`, `𝓑̂_q`, `𝓑̃_q`, or a quotient of the eminent algebra.
pub fn title(d: &RootDatum, node: &PreNicholsDescriptor) -> String {
    let hoc = d.hoc_degrees();
    let exceptional = d.has_exceptional_component();
    let eminent = if exceptional { "𝓑̂_q" } else { "𝓑̃_q" };
    if node.is_nichols() {
        return format!("𝓑_q, dim {}", d.nichols_dimension());
    }
    if node.is_eminent() {
        return if exceptional {
            "𝓑̂_q".to_string()
        } else {
            "𝓑̃_q (= 𝓑̂_q)".to_string()
        };
    }
    let names: Vec<String> = node.killed.iter().map(|i| generator_name(&hoc[i])).collect();
    format!("{eminent}/⟨{}⟩", names.join(", "))
}

/// Title with GKdim, killed generators, PBW generators with exponent bounds,
/// and the Hilbert series up to `max_degree`.
pub fn describe(d: &RootDatum, node: &PreNicholsDescriptor, max_degree: i64) -> Result<String> {
    let hoc = d.hoc_degrees();
    let mut out = format!("{}, GKdim {}\n", title(d, node), node.gkdim);
    let killed: Vec<String> = node.killed.iter().map(|i| generator_name(&hoc[i])).collect();
    let _ = writeln!(
        out,
        "  killed: {}",
        if killed.is_empty() { "none".into() } else { killed.join(", ") }
    );
    let mut gens: Vec<String> = d
        .roots()
        .iter()
        .map(|r| format!("x_{{{}}}^(<{})", r.degree.format_compact().expect("positive root"), r.order))
        .collect();
    gens.extend(node.members.iter().map(|i| format!("{}^(∞)", generator_name(&hoc[i]))));
    let _ = writeln!(out, "  PBW generators: {}", gens.join(" "));
    let series = prenichols_series(d, node.members, max_degree)?;
    let _ = write!(out, "  Hilbert series: {series}");
    Ok(out)
}

/// Poset of a datum assembled from pieces on consecutive vertex blocks.
#[derive(Clone, Debug)]
pub struct AssembledPoset {
    pub poset: Poset,
    pub part_counts: Vec<usize>,
    /// For each node, `B^(ℓ)` over each part's own `Ô₊`.
    pub part_sets: Vec<Vec<BitSet>>,
}

impl AssembledPoset {
    pub fn expected_count(&self) -> BigUint {
        self.part_counts.iter().map(|&c| BigUint::from(c)).product()
    }
}

/// The product poset over the disjoint union of `parts`; fails if the node
/// count is not the product of the part counts.
pub fn assemble_disconnected(parts: &[RootDatum]) -> Result<AssembledPoset> {
    if parts.is_empty() {
        return Err(Error::Invalid("nothing to assemble".into()));
    }
    let union = RootDatum::disjoint_union(parts)?;
    let poset = full_poset(&union)?;
    let part_counts = parts
        .iter()
        .map(|p| Ok(build_ground(p)?.enumerate_closed(DEFAULT_CAP)?.len()))
        .collect::<Result<Vec<_>>>()?;

    // Combined Ô₊ index ↦ (part, local index).
    let mut offsets = Vec::new();
    let mut off = 0;
    for p in parts {
        offsets.push(off);
        off += p.rank();
    }
    let locals: Vec<Vec<DegreeVector>> = parts.iter().map(RootDatum::hoc_degrees).collect();
    let mut place = Vec::new();
    for h in union.hoc_degrees() {
        let v = *h.support().first().ok_or_else(|| Error::Internal("zero degree in Ô₊".into()))?;
        let p = offsets.iter().rposition(|&o| o <= v).expect("offset 0 exists");
        let positions: Vec<usize> = (offsets[p]..offsets[p] + parts[p].rank()).collect();
        let local = h.restrict(&positions);
        let i = locals[p]
            .iter()
            .position(|x| *x == local)
            .ok_or_else(|| Error::Internal(format!("{h} not found in part {}", p + 1)))?;
        place.push((p, i));
    }
    let part_sets = poset
        .nodes
        .iter()
        .map(|n| {
            let mut sets = vec![BitSet::EMPTY; parts.len()];
            for i in n.members.iter() {
                let (p, j) = place[i];
                sets[p] = sets[p].with(j);
            }
            sets
        })
        .collect();
    let out = AssembledPoset {
        poset,
        part_counts,
        part_sets,
    };
    if BigUint::from(out.poset.len()) != out.expected_count() {
        return Err(Error::Internal(format!(
            "assembled poset has {} nodes, expected {}",
            out.poset.len(),
            out.expected_count()
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braiding::{cartan_braiding, FamilyTag};
    use crate::rootsys::CartanMatrix;
    use crate::scalars::Scalar;

    fn cartan(name: &str, n: u64) -> RootDatum {
        let cm = CartanMatrix::from_type(name).unwrap();
        RootDatum::build(&cartan_braiding(&cm, n).unwrap(), None).unwrap()
    }

    fn family(tag: FamilyTag, p: Scalar) -> RootDatum {
        RootDatum::build(&tag.braiding(p).unwrap(), None).unwrap()
    }

    fn dv(c: &[i64]) -> DegreeVector {
        DegreeVector::new(c.to_vec())
    }

    #[test]
    fn grounds() {
        let g = build_ground(&cartan("A2", 3)).unwrap();
        let el = g.elements();
        let mut pairs: Vec<(DegreeVector, DegreeVector)> = g
            .sum_pairs()
            .iter()
            .map(|&(i, j, k)| {
                assert_eq!(el[k], dv(&[3, 3]));
                let mut p = [el[i].clone(), el[j].clone()];
                p.sort();
                (p[0].clone(), p[1].clone())
            })
            .collect();
        pairs.sort();
        let mut want = vec![(dv(&[2, 1]), dv(&[1, 2])), (dv(&[3, 0]), dv(&[0, 3]))];
        want.sort();
        assert_eq!(pairs, want);
        let sup = build_ground(&family(FamilyTag::SuperA3Two, Scalar::root_of_unity(5, 1))).unwrap();
        assert!(sup.sum_pairs().is_empty());
        let g5 = build_ground(&cartan("A2", 5)).unwrap();
        assert_eq!(g5.sum_pairs().len(), 1);
    }

    #[test]
    fn counts() {
        assert_eq!(full_poset(&cartan("A2", 3)).unwrap().len(), 25);
        let xi = Scalar::root_of_unity(3, 1);
        assert_eq!(full_poset(&family(FamilyTag::G23D1, xi)).unwrap().len(), 50);
        assert_eq!(full_poset(&family(FamilyTag::G23D2, xi)).unwrap().len(), 50);
    }

    #[test]
    fn edges_follow_surjections_and_drop_one_dimension() {
        let p = full_poset(&cartan("A2", 3)).unwrap();
        assert!(p.warnings.is_empty());
        for &(a, b) in &p.edges {
            assert!(p.nodes[b].members.is_subset(p.nodes[a].members));
            assert_eq!(p.nodes[a].gkdim, p.nodes[b].gkdim + 1);
        }
        // Order anti-isomorphism against all inclusions.
        let n = p.len();
        let mut reach = vec![vec![false; n]; n];
        for i in 0..n {
            reach[i][i] = true;
        }
        for &(a, b) in &p.edges {
            reach[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if reach[i][k] && reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                assert_eq!(reach[i][j], p.nodes[j].members.is_subset(p.nodes[i].members));
            }
        }
    }

    #[test]
    fn descriptions() {
        let d = cartan("A2", 3);
        let p = full_poset(&d).unwrap();
        let bottom = p.nodes.iter().position(|n| n.is_nichols()).unwrap();
        let text = p.describe(bottom, 4).unwrap();
        assert!(text.starts_with("𝓑_q, dim 27, GKdim 0"), "{text}");
        let top = p.nodes.iter().position(|n| n.is_eminent()).unwrap();
        assert_eq!(p.title(top), "𝓑̂_q");

        let d5 = cartan("A2", 5);
        let p5 = full_poset(&d5).unwrap();
        let top = p5.nodes.iter().position(|n| n.is_eminent()).unwrap();
        assert!(p5.describe(top, 6).unwrap().starts_with("𝓑̃_q (= 𝓑̂_q), GKdim 3"));
        let one = p5.nodes.iter().position(|n| n.gkdim == 2).unwrap();
        assert!(p5.title(one).starts_with("𝓑̃_q/⟨z_{"));
    }

    #[test]
    fn dot_output() {
        let p = full_poset(&cartan("A2", 5)).unwrap();
        let dot = p.to_dot();
        assert!(dot.starts_with("digraph"));
        assert_eq!(dot.matches(" -> ").count(), p.edges.len());
        assert_eq!(dot.matches("gkdim=").count(), p.len());
    }

    #[test]
    fn assembly() {
        let a = cartan("A2", 3);
        let s = family(FamilyTag::SuperA3Two, Scalar::root_of_unity(5, 1));
        let r = assemble_disconnected(&[a.clone(), s]).unwrap();
        assert_eq!(r.poset.len(), 200);
        assert_eq!(r.part_counts, vec![25, 8]);
        for (node, sets) in r.poset.nodes.iter().zip(&r.part_sets) {
            assert_eq!(node.gkdim, sets.iter().map(|s| s.len()).sum::<usize>());
        }
        let single = assemble_disconnected(std::slice::from_ref(&a)).unwrap();
        assert_eq!(single.poset.nodes, full_poset(&a).unwrap().nodes);
        assert_eq!(assemble_disconnected(&[a.clone(), a]).unwrap().poset.len(), 625);
    }
}
