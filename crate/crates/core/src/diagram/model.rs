//! Port-level planar diagram representation.
//!
//! A diagram is a 4-valent graph whose vertices are crossings, plus `2k`
//! boundary points on the tangle circle. Every crossing has four slots
//! numbered counterclockwise; the strand entering slot `s` leaves through
//! slot `s + 2`. Each slot stores its mate (the port at the other end of the
//! edge), whether the strand leaves the crossing through it, and the
//! component it belongs to. Boundary points have a single leg edge.
//!
//! For face tracing the tangle circle is part of the graph: boundary point
//! `j` is a 3-valent vertex with slots `[next, leg, prev]` counterclockwise,
//! and the circle edge joins `next` of `j` to `prev` of `j + 1`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

pub(crate) const NONE: usize = usize::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Port {
    /// Slot `1` of crossing `0` is `X(0, 1)`.
    X(usize, u8),
    /// Boundary point `j`.
    B(usize),
}

impl Port {
    /// The port on the opposite side of the same crossing.
    pub fn through(self) -> Port {
        match self {
            Port::X(c, s) => Port::X(c, (s + 2) % 4),
            Port::B(_) => self,
        }
    }

    pub fn crossing(self) -> Option<usize> {
        match self {
            Port::X(c, _) => Some(c),
            Port::B(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Crossing {
    pub(crate) mate: [Port; 4],
    /// Axis of the over strand: `0` means slots 0 and 2 are over.
    pub(crate) over: u8,
    /// `out[s]` is true when the strand leaves the crossing through slot `s`.
    pub(crate) out: [bool; 4],
    /// Component of the strand on each axis.
    pub(crate) comp: [usize; 2],
}

impl Crossing {
    pub(crate) fn blank(mate: [Port; 4], over: u8) -> Self {
        Crossing { mate, over, out: [false; 4], comp: [NONE; 2] }
    }

    pub fn is_over_slot(&self, s: u8) -> bool {
        s % 2 == self.over
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Endpoint {
    pub(crate) mate: Port,
    /// True when the string starts here.
    pub(crate) out: bool,
    pub(crate) comp: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ComponentKind {
    /// An open string from boundary point `tail` to `head`.
    Open { tail: usize, head: usize },
    /// A closed component passing through at least one crossing.
    Closed,
    /// A crossingless circle.
    FreeLoop,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentInfo {
    pub label: String,
    pub kind: ComponentKind,
}

/// Planar diagram of a tangle (open strings ending on the circle) or of a
/// link (no boundary points).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TangleDiagram {
    pub(crate) xs: Vec<Crossing>,
    pub(crate) bd: Vec<Endpoint>,
    pub(crate) labels: Vec<String>,
    /// Component ids of free loops.
    pub(crate) loops: Vec<usize>,
}

/// Face structure of the diagram together with the tangle circle.
#[derive(Debug, Clone)]
pub(crate) struct Faces {
    pub face_of: Vec<usize>,
    pub count: usize,
    pub len: Vec<usize>,
    pub touches_boundary: Vec<bool>,
}

impl TangleDiagram {
    /// Diagram with `2k` boundary points and strings joining the given pairs
    /// directly, oriented from the first point of each pair.
    pub fn crossingless(n_boundary: usize, pairs: &[(usize, usize)], labels: &[&str]) -> Self {
        let mut bd = vec![Endpoint { mate: Port::B(NONE), out: false, comp: NONE }; n_boundary];
        for (i, &(a, b)) in pairs.iter().enumerate() {
            bd[a] = Endpoint { mate: Port::B(b), out: true, comp: i };
            bd[b] = Endpoint { mate: Port::B(a), out: false, comp: i };
        }
        assert!(bd.iter().all(|e| e.comp != NONE), "pairs must cover every boundary point");
        let labels = labels.iter().map(|s| s.to_string()).collect();
        let mut d = TangleDiagram { xs: Vec::new(), bd, labels, loops: Vec::new() };
        d.fix();
        d
    }

    /// The empty link plus `n` free loops.
    pub fn unlink(n: usize) -> Self {
        TangleDiagram {
            xs: Vec::new(),
            bd: Vec::new(),
            labels: (0..n).map(|i| format!("o{i}")).collect(),
            loops: (0..n).collect(),
        }
    }

    pub fn n_crossings(&self) -> usize {
        self.xs.len()
    }

    pub fn n_boundary(&self) -> usize {
        self.bd.len()
    }

    pub fn is_closed(&self) -> bool {
        self.bd.is_empty()
    }

    pub fn n_strings(&self) -> usize {
        self.bd.len() / 2
    }

    pub fn n_components(&self) -> usize {
        self.labels.len()
    }

    pub fn n_free_loops(&self) -> usize {
        self.loops.len()
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.xs
    }

    pub fn mate(&self, p: Port) -> Port {
        match p {
            Port::X(c, s) => self.xs[c].mate[s as usize],
            Port::B(j) => self.bd[j].mate,
        }
    }

    pub(crate) fn set_mate(&mut self, p: Port, q: Port) {
        match p {
            Port::X(c, s) => self.xs[c].mate[s as usize] = q,
            Port::B(j) => self.bd[j].mate = q,
        }
        match q {
            Port::X(c, s) => self.xs[c].mate[s as usize] = p,
            Port::B(j) => self.bd[j].mate = p,
        }
    }

    pub fn is_out(&self, p: Port) -> bool {
        match p {
            Port::X(c, s) => self.xs[c].out[s as usize],
            Port::B(j) => self.bd[j].out,
        }
    }

    pub(crate) fn set_out(&mut self, p: Port, v: bool) {
        match p {
            Port::X(c, s) => self.xs[c].out[s as usize] = v,
            Port::B(j) => self.bd[j].out = v,
        }
    }

    pub fn comp_of(&self, p: Port) -> usize {
        match p {
            Port::X(c, s) => self.xs[c].comp[(s % 2) as usize],
            Port::B(j) => self.bd[j].comp,
        }
    }

    pub(crate) fn set_comp(&mut self, p: Port, id: usize) {
        match p {
            Port::X(c, s) => self.xs[c].comp[(s % 2) as usize] = id,
            Port::B(j) => self.bd[j].comp = id,
        }
    }

    pub fn label(&self, comp: usize) -> &str {
        &self.labels[comp]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn comp_by_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn components(&self) -> Vec<ComponentInfo> {
        let mut kinds = vec![ComponentKind::Closed; self.labels.len()];
        for &l in &self.loops {
            kinds[l] = ComponentKind::FreeLoop;
        }
        for (j, e) in self.bd.iter().enumerate() {
            if e.out {
                let head = self.walk_from(j).1;
                kinds[e.comp] = ComponentKind::Open { tail: j, head };
            }
        }
        self.labels.iter().zip(kinds).map(|(l, k)| ComponentInfo { label: l.clone(), kind: k }).collect()
    }

    /// Crossings entered walking the string that starts at boundary point
    /// `j`, and the boundary point where it ends.
    pub fn walk_from(&self, j: usize) -> (Vec<Port>, usize) {
        let mut seq = Vec::new();
        let mut p = self.bd[j].mate;
        loop {
            match p {
                Port::B(k) => return (seq, k),
                Port::X(..) => {
                    seq.push(p);
                    p = self.mate(p.through());
                }
            }
        }
    }

    /// Entry ports of the closed walk that starts by entering `start`.
    pub fn walk_closed(&self, start: Port) -> Vec<Port> {
        let mut seq = Vec::new();
        let mut p = start;
        loop {
            seq.push(p);
            p = self.mate(p.through());
            if p == start {
                return seq;
            }
            debug_assert!(matches!(p, Port::X(..)), "closed walk reached the boundary");
        }
    }

    /// Entry ports along component `comp` in its orientation.
    pub fn component_walk(&self, comp: usize) -> Vec<Port> {
        if let Some(j) = self.bd.iter().position(|e| e.out && e.comp == comp) {
            return self.walk_from(j).0;
        }
        for (c, x) in self.xs.iter().enumerate() {
            for s in 0..4u8 {
                if x.comp[(s % 2) as usize] == comp && !x.out[s as usize] {
                    return self.walk_closed(Port::X(c, s));
                }
            }
        }
        Vec::new()
    }

    /// `+1` or `-1` under the right-hand rule for the stored orientation.
    pub fn crossing_sign(&self, c: usize) -> i32 {
        let x = &self.xs[c];
        let under_axis = 1 - x.over;
        let under_in = if x.out[under_axis as usize] { under_axis + 2 } else { under_axis };
        let over_in = if x.out[x.over as usize] { x.over + 2 } else { x.over };
        if over_in == (under_in + 3) % 4 {
            1
        } else {
            -1
        }
    }

    pub fn writhe(&self) -> i64 {
        (0..self.xs.len()).map(|c| self.crossing_sign(c) as i64).sum()
    }

    /// Recompute orientations and component ids after a structural edit.
    ///
    /// Each component keeps the direction most of its surviving ports agree
    /// on. Freshly created crossings store `out = false` on all four slots,
    /// which casts one vote each way per strand and so never tips the
    /// balance. Components inherit the labels of the old components they
    /// contain.
    pub(crate) fn fix(&mut self) {
        let n = self.xs.len();
        let b = self.bd.len();
        let mut comp_x = vec![[NONE; 2]; n];
        let mut comp_b = vec![NONE; b];
        let mut labels: Vec<String> = Vec::new();
        let mut seen_b = vec![false; b];

        for j in 0..b {
            if seen_b[j] {
                continue;
            }
            let (seq, end) = self.walk_from(j);
            seen_b[j] = true;
            seen_b[end] = true;
            let mut agree = 0usize;
            let mut total = 0usize;
            let mut vote = |stored: bool, fwd: bool| {
                total += 1;
                if stored == fwd {
                    agree += 1;
                }
            };
            vote(self.bd[j].out, true);
            vote(self.bd[end].out, false);
            for &p in &seq {
                vote(self.is_out(p), false);
                vote(self.is_out(p.through()), true);
            }
            let forward = agree * 2 >= total;
            let mut old = Vec::new();
            push_old(&mut old, self.bd[j].comp);
            for &p in &seq {
                push_old(&mut old, self.comp_of(p));
            }
            push_old(&mut old, self.bd[end].comp);
            let id = labels.len();
            labels.push(self.merged_label(&old));
            self.bd[j].out = forward;
            self.bd[end].out = !forward;
            comp_b[j] = id;
            comp_b[end] = id;
            for &p in &seq {
                self.set_out(p, !forward);
                self.set_out(p.through(), forward);
                if let Port::X(c, s) = p {
                    comp_x[c][(s % 2) as usize] = id;
                }
            }
        }

        for c in 0..n {
            for a in 0..2u8 {
                if comp_x[c][a as usize] != NONE {
                    continue;
                }
                let seq = self.walk_closed(Port::X(c, a));
                let mut agree = 0usize;
                let mut total = 0usize;
                for &p in &seq {
                    total += 2;
                    if !self.is_out(p) {
                        agree += 1;
                    }
                    if self.is_out(p.through()) {
                        agree += 1;
                    }
                }
                let forward = agree * 2 >= total;
                let mut old = Vec::new();
                for &p in &seq {
                    push_old(&mut old, self.comp_of(p));
                }
                let id = labels.len();
                labels.push(self.merged_label(&old));
                for &p in &seq {
                    self.set_out(p, !forward);
                    self.set_out(p.through(), forward);
                    if let Port::X(c2, s) = p {
                        comp_x[c2][(s % 2) as usize] = id;
                    }
                }
            }
        }

        let mut loops = Vec::new();
        for &l in &self.loops {
            loops.push(labels.len());
            labels.push(self.labels.get(l).cloned().unwrap_or_default());
        }

        // Unnamed components get fresh names that avoid existing labels.
        let taken: BTreeSet<String> = labels.iter().filter(|l| !l.is_empty()).cloned().collect();
        let mut k = 0;
        for l in labels.iter_mut() {
            if l.is_empty() {
                loop {
                    let cand = format!("k{k}");
                    k += 1;
                    if !taken.contains(&cand) {
                        *l = cand;
                        break;
                    }
                }
            }
        }

        for (c, x) in self.xs.iter_mut().enumerate() {
            x.comp = comp_x[c];
        }
        for (j, e) in self.bd.iter_mut().enumerate() {
            e.comp = comp_b[j];
        }
        self.labels = labels;
        self.loops = loops;
    }

    /// Renumber components so that new component `i` is old `order[i]`.
    pub(crate) fn permute_components(&mut self, order: &[usize]) {
        let mut new_id = vec![NONE; self.labels.len()];
        for (i, &old) in order.iter().enumerate() {
            new_id[old] = i;
        }
        let map = |c: usize| if c == NONE { NONE } else { new_id[c] };
        for x in &mut self.xs {
            x.comp = x.comp.map(map);
        }
        for e in &mut self.bd {
            e.comp = map(e.comp);
        }
        self.labels = order.iter().map(|&old| self.labels[old].clone()).collect();
        for l in &mut self.loops {
            *l = new_id[*l];
        }
        self.loops.sort_unstable();
    }

    fn merged_label(&self, old: &[usize]) -> String {
        let parts: Vec<&str> =
            old.iter().filter_map(|&i| self.labels.get(i)).map(|s| s.as_str()).filter(|s| !s.is_empty()).collect();
        parts.join("+")
    }

    pub(crate) fn dart_count(&self) -> usize {
        4 * self.xs.len() + 3 * self.bd.len()
    }

    pub(crate) fn port_dart(&self, p: Port) -> usize {
        match p {
            Port::X(c, s) => 4 * c + s as usize,
            Port::B(j) => 4 * self.xs.len() + 3 * j + 1,
        }
    }

    /// The dart pointing back along the same edge.
    fn reverse_dart(&self, d: usize) -> usize {
        let n4 = 4 * self.xs.len();
        let b = self.bd.len();
        if d < n4 {
            self.port_dart(self.xs[d / 4].mate[d % 4])
        } else {
            let j = (d - n4) / 3;
            match (d - n4) % 3 {
                0 => n4 + 3 * ((j + 1) % b) + 2,
                2 => n4 + 3 * ((j + b - 1) % b),
                _ => self.port_dart(self.bd[j].mate),
            }
        }
    }

    fn dart_vertex(&self, d: usize) -> (usize, usize, usize) {
        let n4 = 4 * self.xs.len();
        if d < n4 {
            (d / 4, d % 4, 4)
        } else {
            let j = (d - n4) / 3;
            (self.xs.len() + j, (d - n4) % 3, 3)
        }
    }

    fn vertex_dart(&self, v: usize, slot: usize) -> usize {
        let n = self.xs.len();
        if v < n {
            4 * v + slot
        } else {
            4 * n + 3 * (v - n) + slot
        }
    }

    /// Next dart around the face to the left of `d`.
    pub(crate) fn face_next(&self, d: usize) -> usize {
        let r = self.reverse_dart(d);
        let (v, slot, deg) = self.dart_vertex(r);
        self.vertex_dart(v, (slot + deg - 1) % deg)
    }

    pub(crate) fn faces(&self) -> Faces {
        let nd = self.dart_count();
        let n4 = 4 * self.xs.len();
        let mut face_of = vec![NONE; nd];
        let mut len = Vec::new();
        let mut touches_boundary = Vec::new();
        let mut count = 0;
        for start in 0..nd {
            if face_of[start] != NONE {
                continue;
            }
            let mut d = start;
            let mut l = 0;
            let mut touch = false;
            while face_of[d] == NONE {
                face_of[d] = count;
                l += 1;
                touch |= d >= n4;
                d = self.face_next(d);
            }
            len.push(l);
            touches_boundary.push(touch);
            count += 1;
        }
        Faces { face_of, count, len, touches_boundary }
    }

    /// Face containing the corner between slots `t` and `t + 1` of crossing `c`.
    pub(crate) fn corner_face(f: &Faces, c: usize, t: usize) -> usize {
        f.face_of[4 * c + t % 4]
    }

    fn graph_components(&self) -> usize {
        let nv = self.xs.len() + self.bd.len();
        let mut uf = UnionFind::new(nv);
        for d in 0..self.dart_count() {
            let r = self.reverse_dart(d);
            uf.union(self.dart_vertex(d).0, self.dart_vertex(r).0);
        }
        uf.count()
    }

    /// `V - E + F` for the graph including the tangle circle, and the value
    /// `2C` it takes when each of the `C` connected pieces is planar.
    pub fn euler_characteristic(&self) -> (i64, i64) {
        let v = (self.xs.len() + self.bd.len()) as i64;
        if v == 0 {
            return (0, 0);
        }
        let e = (self.dart_count() / 2) as i64;
        let f = self.faces().count as i64;
        let c = self.graph_components() as i64;
        (v - e + f, 2 * c)
    }

    /// Genus-zero check of the rotation system.
    pub fn is_planar(&self) -> bool {
        let (chi, want) = self.euler_characteristic();
        chi == want
    }

    /// Consistency of mates, orientations and components.
    pub fn check_invariants(&self) -> Result<(), String> {
        for (c, x) in self.xs.iter().enumerate() {
            for s in 0..4u8 {
                let p = Port::X(c, s);
                let q = x.mate[s as usize];
                if self.mate(q) != p {
                    return Err(format!("{p:?} -> {q:?} is not symmetric"));
                }
                if q == p {
                    return Err(format!("{p:?} is its own mate"));
                }
                if x.out[s as usize] == x.out[((s + 2) % 4) as usize] {
                    return Err(format!("strand through {p:?} has no direction"));
                }
                if self.is_out(q) == x.out[s as usize] {
                    return Err(format!("edge {p:?}-{q:?} is not coherently oriented"));
                }
                if self.comp_of(q) != self.comp_of(p) {
                    return Err(format!("edge {p:?}-{q:?} joins components"));
                }
            }
        }
        for j in 0..self.bd.len() {
            let q = self.bd[j].mate;
            if self.mate(q) != Port::B(j) {
                return Err(format!("boundary {j} mate not symmetric"));
            }
            if q != Port::B(j) && self.is_out(q) == self.bd[j].out {
                return Err(format!("boundary {j} edge is not coherently oriented"));
            }
        }
        if !self.bd.len().is_multiple_of(2) {
            return Err("odd number of boundary points".into());
        }
        Ok(())
    }
}

fn push_old(v: &mut Vec<usize>, id: usize) {
    if id != NONE && !v.contains(&id) {
        v.push(id);
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }

    pub fn count(&mut self) -> usize {
        (0..self.parent.len()).filter(|&x| self.find(x) == x).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossingless_tangle() {
        let d = TangleDiagram::crossingless(6, &[(0, 1), (2, 3), (4, 5)], &["s12", "s23", "s31"]);
        assert_eq!(d.n_crossings(), 0);
        assert_eq!(d.n_components(), 3);
        assert!(d.is_planar());
        assert_eq!(d.faces().count, 5);
        d.check_invariants().unwrap();
        assert_eq!(
            d.components()[1],
            ComponentInfo { label: "s23".into(), kind: ComponentKind::Open { tail: 2, head: 3 } }
        );
    }

    #[test]
    fn crossing_chords_are_not_planar() {
        let d = TangleDiagram::crossingless(4, &[(0, 2), (1, 3)], &["a", "b"]);
        assert!(!d.is_planar());
    }
}
