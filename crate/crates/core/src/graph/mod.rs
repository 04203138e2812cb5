//! Graphs over a residue set, spring and spiral layouts, and export to DOT,
//! JSON, CSV and SVG.

mod export;
mod layout;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modulo::{ResidueEntry, ResidueTable};
use crate::primes::units;
use crate::quaternion::HurwitzInt;

pub use export::{export, from_json, to_csv, to_dot, to_json, to_svg, ExportFormat};
pub use layout::{
    energy, initial_positions, spiral_layout, spring_layout, spring_layout_from,
    spring_layout_with, Layout, LayoutMethod, SpringConfig,
};

/// Which pairs of residues are joined by an edge.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeRule {
    /// `z` to `z + 1 mod N`.
    #[default]
    Cycle,
    /// `u` to `v` when the residues differ by one of the 24 units.
    UnitDifference,
    Complete,
}

impl fmt::Display for EdgeRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeRule::Cycle => "cycle",
            EdgeRule::UnitDifference => "unit",
            EdgeRule::Complete => "complete",
        })
    }
}

impl FromStr for EdgeRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cycle" => Ok(EdgeRule::Cycle),
            "unit" | "unit-difference" => Ok(EdgeRule::UnitDifference),
            "complete" => Ok(EdgeRule::Complete),
            other => Err(Error::InvalidArgument(format!(
                "unknown edge rule {other:?}"
            ))),
        }
    }
}

/// Residues as vertices, in `z` order, with an undirected simple edge set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstellationGraph {
    alpha: HurwitzInt,
    vertices: Vec<ResidueEntry>,
    edges: Vec<(usize, usize)>,
    rule: EdgeRule,
}

impl ConstellationGraph {
    /// Edges are stored as `(u, v)` with `u < v`, sorted. Self-loops,
    /// duplicates and out-of-range indices are rejected.
    pub fn new(
        alpha: HurwitzInt,
        vertices: Vec<ResidueEntry>,
        edges: impl IntoIterator<Item = (usize, usize)>,
        rule: EdgeRule,
    ) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::InvalidArgument(format!("self-loop at vertex {u}")));
            }
            if u.max(v) >= vertices.len() {
                return Err(Error::InvalidArgument(format!(
                    "edge ({u}, {v}) out of range for {} vertices",
                    vertices.len()
                )));
            }
            if !set.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidArgument(format!("duplicate edge ({u}, {v})")));
            }
        }
        Ok(ConstellationGraph {
            alpha,
            vertices,
            edges: set.into_iter().collect(),
            rule,
        })
    }

    pub fn alpha(&self) -> HurwitzInt {
        self.alpha
    }

    pub fn vertices(&self) -> &[ResidueEntry] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn rule(&self) -> EdgeRule {
        self.rule
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

pub fn build_graph(table: &ResidueTable, rule: EdgeRule) -> Result<ConstellationGraph> {
    let vertices = table.entries().to_vec();
    let n = vertices.len();
    let mut edges = Vec::new();
    match rule {
        // a 2-cycle is a single edge and a 1-cycle has none
        EdgeRule::Cycle if n == 2 => edges.push((0, 1)),
        EdgeRule::Cycle if n > 2 => edges.extend((0..n).map(|u| (u, (u + 1) % n))),
        EdgeRule::Cycle => {}
        EdgeRule::UnitDifference => {
            let units = units();
            for u in 0..n {
                for v in u + 1..n {
                    let d = vertices[u].residue.checked_sub(&vertices[v].residue)?;
                    if units.contains(&d) {
                        edges.push((u, v));
                    }
                }
            }
        }
        EdgeRule::Complete => {
            for u in 0..n {
                edges.extend((u + 1..n).map(|v| (u, v)));
            }
        }
    }
    ConstellationGraph::new(table.modulus().alpha(), vertices, edges, rule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modulo::{residue_table, PrimeModulus};

    fn table(s: &str) -> ResidueTable {
        residue_table(&PrimeModulus::new(s.parse().unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn edge_counts() {
        let t = table("3+2i");
        assert_eq!(build_graph(&t, EdgeRule::Cycle).unwrap().edges().len(), 13);
        assert_eq!(
            build_graph(&t, EdgeRule::Complete).unwrap().edges().len(),
            78
        );
    }

    #[test]
    fn unit_difference_matches_pair_scan() {
        let t = table("3+2i");
        let g = build_graph(&t, EdgeRule::UnitDifference).unwrap();
        let us: Vec<HurwitzInt> = units().iter().copied().collect();
        let res: Vec<HurwitzInt> = t.residues().collect();
        let mut want = Vec::new();
        for a in 0..res.len() {
            for b in a + 1..res.len() {
                if us.iter().any(|e| res[b] + *e == res[a]) {
                    want.push((a, b));
                }
            }
        }
        assert!(!want.is_empty());
        assert_eq!(g.edges(), &want[..]);
    }

    #[test]
    fn rejects_bad_edges() {
        let t = table("2+i");
        let v = t.entries().to_vec();
        let a = t.modulus().alpha();
        assert!(ConstellationGraph::new(a, v.clone(), [(1, 1)], EdgeRule::Cycle).is_err());
        assert!(ConstellationGraph::new(a, v.clone(), [(0, 1), (1, 0)], EdgeRule::Cycle).is_err());
        assert!(ConstellationGraph::new(a, v.clone(), [(0, 5)], EdgeRule::Cycle).is_err());
        assert_eq!(
            ConstellationGraph::new(a, vec![], [], EdgeRule::Cycle),
            Err(Error::EmptyGraph)
        );
    }

    #[test]
    fn rule_text() {
        for r in [
            EdgeRule::Cycle,
            EdgeRule::UnitDifference,
            EdgeRule::Complete,
        ] {
            assert_eq!(r.to_string().parse::<EdgeRule>().unwrap(), r);
        }
        assert!("ring".parse::<EdgeRule>().is_err());
    }
}
