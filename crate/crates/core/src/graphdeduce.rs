//! Forward-chaining deduction of planarity facts about the tetrahedral
//! graph: three spokes `e1, e2, e3` meeting at the outer vertex and a rim
//! `b12, b23, b31` joining the hub vertices.
//!
//! Compressibility facts are inputs; nothing here computes them.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Edge {
    E1,
    E2,
    E3,
    B12,
    B23,
    B31,
}

impl Edge {
    pub const ALL: [Edge; 6] = [Edge::E1, Edge::E2, Edge::E3, Edge::B12, Edge::B23, Edge::B31];

    /// Vertices: 0 is the outer vertex, `i` the hub on spoke `e_i`.
    pub fn ends(self) -> [u8; 2] {
        match self {
            Edge::E1 => [0, 1],
            Edge::E2 => [0, 2],
            Edge::E3 => [0, 3],
            Edge::B12 => [1, 2],
            Edge::B23 => [2, 3],
            Edge::B31 => [3, 1],
        }
    }

    pub fn opposite(self) -> Edge {
        match self {
            Edge::E1 => Edge::B23,
            Edge::E2 => Edge::B31,
            Edge::E3 => Edge::B12,
            Edge::B12 => Edge::E3,
            Edge::B23 => Edge::E1,
            Edge::B31 => Edge::E2,
        }
    }

    fn bit(self) -> u8 {
        1 << (self as u8)
    }
}

/// The three edges at a vertex.
pub fn star(v: u8) -> [Edge; 3] {
    let mut out = [Edge::E1; 3];
    let mut k = 0;
    for e in Edge::ALL {
        if e.ends().contains(&v) {
            out[k] = e;
            k += 1;
        }
    }
    out
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Edge::E1 => "e1",
            Edge::E2 => "e2",
            Edge::E3 => "e3",
            Edge::B12 => "b12",
            Edge::B23 => "b23",
            Edge::B31 => "b31",
        })
    }
}

impl FromStr for Edge {
    type Err = DeduceError;
    fn from_str(s: &str) -> Result<Self, DeduceError> {
        Edge::ALL
            .into_iter()
            .find(|e| e.to_string() == s.trim())
            .ok_or_else(|| DeduceError::Parse(format!("unknown edge {s:?}")))
    }
}

/// A set of edges as a bitmask over [`Edge::ALL`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSet(u8);

impl EdgeSet {
    pub const FULL: EdgeSet = EdgeSet(0b11_1111);

    pub fn of(edges: &[Edge]) -> EdgeSet {
        EdgeSet(edges.iter().fold(0, |m, e| m | e.bit()))
    }

    pub fn contains(self, e: Edge) -> bool {
        self.0 & e.bit() != 0
    }

    pub fn is_subset(self, other: EdgeSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn without(self, e: Edge) -> EdgeSet {
        EdgeSet(self.0 & !e.bit())
    }

    pub fn edges(self) -> impl Iterator<Item = Edge> {
        Edge::ALL.into_iter().filter(move |&e| self.contains(e))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Fact {
    /// `G - e` is planar.
    PlanarMinus(Edge),
    /// The subgraph on these edges is planar.
    PlanarSubgraph(EdgeSet),
    /// The exterior of `G - e` has compressible boundary.
    CompressibleExtMinus(Edge),
    /// The exterior of `G` has compressible boundary.
    CompressibleExt,
    Planar,
    NotPlanar,
}

impl Fact {
    /// `PlanarSubgraph` of five edges is the same statement as
    /// `PlanarMinus` of the sixth.
    pub fn normalized(self) -> Fact {
        match self {
            Fact::PlanarSubgraph(s) if s.len() == 5 => {
                let e = Edge::ALL.into_iter().find(|&e| !s.contains(e)).expect("one edge missing");
                Fact::PlanarMinus(e)
            }
            Fact::PlanarSubgraph(s) if s == EdgeSet::FULL => Fact::Planar,
            f => f,
        }
    }
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fact::PlanarMinus(e) => write!(f, "PlanarMinus:{e}"),
            Fact::PlanarSubgraph(s) => {
                let names: Vec<String> = s.edges().map(|e| e.to_string()).collect();
                write!(f, "PlanarSubgraph:{}", names.join(","))
            }
            Fact::CompressibleExtMinus(e) => write!(f, "CompressibleExtMinus:{e}"),
            Fact::CompressibleExt => f.write_str("CompressibleExt"),
            Fact::Planar => f.write_str("Planar"),
            Fact::NotPlanar => f.write_str("NotPlanar"),
        }
    }
}

impl FromStr for Fact {
    type Err = DeduceError;
    fn from_str(s: &str) -> Result<Self, DeduceError> {
        let s = s.trim();
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h.trim(), Some(a)),
            None => (s, None),
        };
        let fact = match (head, arg) {
            ("PlanarMinus", Some(a)) => Fact::PlanarMinus(a.parse()?),
            ("CompressibleExtMinus", Some(a)) => Fact::CompressibleExtMinus(a.parse()?),
            ("PlanarSubgraph", Some(a)) => {
                let edges = a.split(',').map(str::parse).collect::<Result<Vec<Edge>, _>>()?;
                Fact::PlanarSubgraph(EdgeSet::of(&edges))
            }
            ("CompressibleExt", None) => Fact::CompressibleExt,
            ("Planar", None) => Fact::Planar,
            ("NotPlanar", None) => Fact::NotPlanar,
            _ => return Err(DeduceError::Parse(format!("unknown fact {s:?}"))),
        };
        Ok(fact.normalized())
    }
}

impl Serialize for Fact {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Fact {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeduceError {
    #[error("cannot parse: {0}")]
    Parse(String),
    #[error("inconsistent facts: {0} and {1} both hold")]
    Inconsistent(Fact, Fact),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactBase {
    pub facts: BTreeSet<Fact>,
}

impl FactBase {
    pub fn new(facts: impl IntoIterator<Item = Fact>) -> Self {
        FactBase { facts: facts.into_iter().map(Fact::normalized).collect() }
    }

    pub fn holds(&self, f: Fact) -> bool {
        self.facts.contains(&f.normalized())
    }

    /// Planarity of an arbitrary subgraph, using that subgraphs of planar
    /// graphs are planar.
    pub fn subgraph_planar(&self, s: EdgeSet) -> bool {
        self.holds(Fact::Planar)
            || Edge::ALL.into_iter().any(|e| !s.contains(e) && self.holds(Fact::PlanarMinus(e)))
            || self.facts.iter().any(|f| matches!(f, Fact::PlanarSubgraph(t) if s.is_subset(*t)))
    }

    pub fn is_consistent(&self) -> bool {
        !(self.holds(Fact::Planar) && self.holds(Fact::NotPlanar))
    }

    fn planar_minus(&self) -> Vec<Edge> {
        Edge::ALL.into_iter().filter(|&e| self.holds(Fact::PlanarMinus(e))).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub rule: String,
    pub premises: Vec<Fact>,
    pub derived: Fact,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<String> = self.premises.iter().map(|f| f.to_string()).collect();
        write!(f, "{}: {} => {}", self.rule, p.join(", "), self.derived)
    }
}

pub type ProofTrace = Vec<Step>;

fn step(rule: &str, premises: Vec<Fact>, derived: Fact) -> Step {
    Step { rule: rule.into(), premises, derived }
}

/// A tetrahedral graph is planar iff every proper subgraph is planar and
/// its exterior has compressible boundary.
pub fn rule_thompson(fb: &FactBase) -> Vec<Step> {
    let mut out = Vec::new();
    let pm = fb.planar_minus();
    if pm.len() == 6 && fb.holds(Fact::CompressibleExt) {
        let mut premises: Vec<Fact> = pm.iter().map(|&e| Fact::PlanarMinus(e)).collect();
        premises.push(Fact::CompressibleExt);
        out.push(step("thompson", premises, Fact::Planar));
    }
    if fb.holds(Fact::Planar) {
        out.push(step("thompson", vec![Fact::Planar], Fact::CompressibleExt));
        for e in Edge::ALL {
            out.push(step("thompson", vec![Fact::Planar], Fact::PlanarMinus(e)));
        }
    }
    out
}

/// If `G - e` is planar for the three edges at a vertex and the exterior of
/// `G - f` is compressible for a fourth edge `f`, then `G - f` is planar.
pub fn rule_g_bij(fb: &FactBase) -> Vec<Step> {
    let mut out = Vec::new();
    for v in 0..4u8 {
        let s = star(v);
        if !s.iter().all(|&e| fb.holds(Fact::PlanarMinus(e))) {
            continue;
        }
        for f in Edge::ALL {
            if s.contains(&f) || !fb.holds(Fact::CompressibleExtMinus(f)) {
                continue;
            }
            let mut premises: Vec<Fact> = s.iter().map(|&e| Fact::PlanarMinus(e)).collect();
            premises.push(Fact::CompressibleExtMinus(f));
            out.push(step("g_bij", premises, Fact::PlanarMinus(f)));
        }
    }
    out
}

/// If `G - e` is planar for every edge but one and the exterior of `G` is
/// compressible, `G` is planar.
pub fn rule_opposite(fb: &FactBase) -> Vec<Step> {
    let pm = fb.planar_minus();
    if pm.len() >= 5 && fb.holds(Fact::CompressibleExt) {
        let mut premises: Vec<Fact> = pm.iter().take(5).map(|&e| Fact::PlanarMinus(e)).collect();
        premises.push(Fact::CompressibleExt);
        vec![step("opposite", premises, Fact::Planar)]
    } else {
        Vec::new()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Deduction {
    pub closure: FactBase,
    pub trace: ProofTrace,
    pub rounds: usize,
    pub consistent: bool,
}

impl Deduction {
    pub fn into_result(self) -> Result<Deduction, DeduceError> {
        if self.consistent {
            Ok(self)
        } else {
            Err(DeduceError::Inconsistent(Fact::Planar, Fact::NotPlanar))
        }
    }
}

/// Least fixed point of the rules. Closure runs to completion even when it
/// derives a contradiction; the result is then flagged.
pub fn deduce(fb: &FactBase) -> Deduction {
    let mut base = FactBase::new(fb.facts.iter().copied());
    let mut trace = Vec::new();
    let mut rounds = 0;
    loop {
        rounds += 1;
        let mut fresh = false;
        let rules: [fn(&FactBase) -> Vec<Step>; 3] = [rule_thompson, rule_g_bij, rule_opposite];
        for rule in rules {
            for s in rule(&base) {
                if base.facts.insert(s.derived) {
                    trace.push(s);
                    fresh = true;
                }
            }
        }
        if !fresh {
            break;
        }
    }
    let consistent = base.is_consistent();
    Deduction { closure: base, trace, rounds, consistent }
}

/// Every step's premises are initial facts or derived by earlier steps.
pub fn trace_is_valid(initial: &FactBase, trace: &[Step]) -> bool {
    let mut known: BTreeSet<Fact> = initial.facts.iter().map(|f| f.normalized()).collect();
    for s in trace {
        if !s.premises.iter().all(|p| known.contains(p)) {
            return false;
        }
        known.insert(s.derived);
    }
    true
}

/// Named fact patterns.
pub mod scenarios {
    use super::{Edge, Fact, FactBase};
    use Edge::*;
    use Fact::*;

    /// A rational solution tangle: every spoke deletion is planar and every
    /// exterior involved is compressible.
    pub fn rational_solution() -> FactBase {
        FactBase::new([
            PlanarMinus(E1),
            PlanarMinus(E2),
            PlanarMinus(E3),
            CompressibleExt,
            CompressibleExtMinus(B12),
            CompressibleExtMinus(B23),
            CompressibleExtMinus(B31),
        ])
    }

    /// Three planar deletions at a vertex plus two compressible deletions.
    pub fn vertex_star_planar() -> FactBase {
        FactBase::new([
            PlanarMinus(E1),
            PlanarMinus(B12),
            PlanarMinus(B31),
            CompressibleExtMinus(E2),
            CompressibleExtMinus(B23),
            CompressibleExt,
        ])
    }

    /// Four planar deletions, three at a vertex, but only one further
    /// compressible deletion.
    pub fn three_at_vertex() -> FactBase {
        FactBase::new([
            PlanarMinus(E1),
            PlanarMinus(B12),
            PlanarMinus(B31),
            PlanarMinus(B23),
            CompressibleExt,
            CompressibleExtMinus(B23),
            NotPlanar,
        ])
    }

    /// Four planar deletions with no three at a vertex.
    pub fn no_common_vertex() -> FactBase {
        FactBase::new([
            PlanarMinus(E1),
            PlanarMinus(E3),
            PlanarMinus(B23),
            PlanarMinus(B12),
            CompressibleExt,
            CompressibleExtMinus(B31),
            CompressibleExtMinus(E2),
            NotPlanar,
        ])
    }

    /// Every proper subgraph planar, exterior incompressible.
    pub fn incompressible_exterior() -> FactBase {
        let mut fb = FactBase::new(Edge::ALL.map(PlanarMinus));
        fb.facts.extend(Edge::ALL.map(CompressibleExtMinus));
        fb.facts.insert(NotPlanar);
        fb
    }

    /// The three patterns where `Planar` must not follow.
    pub fn counterexamples() -> [(&'static str, FactBase); 3] {
        [
            ("three_at_vertex", three_at_vertex()),
            ("no_common_vertex", no_common_vertex()),
            ("incompressible_exterior", incompressible_exterior()),
        ]
    }
}
