//! Exhaustive generation of small 3-string tangle diagrams and their
//! classification as split, parallel, reducible or unresolved.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::model::{Crossing, Endpoint, Port, TangleDiagram, NONE};
use crate::diagram::{canonical_code, simplify, ComponentKind, SimplifyMode};

/// Largest crossing count accepted.
pub const MAX_CROSSINGS: usize = 7;

const N_BOUNDARY: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerateError {
    #[error("{0} crossings requested, at most {MAX_CROSSINGS} supported")]
    TooManyCrossings(usize),
}

/// A partial shadow: crossings with some slots still unjoined.
#[derive(Clone)]
struct Partial {
    n: usize,
    xs: Vec<[Option<Port>; 4]>,
    bd: [Option<Port>; N_BOUNDARY],
    /// Port the current string leaves from, if a string is in progress.
    cur: Option<Port>,
}

impl Partial {
    fn new(n: usize) -> Self {
        Partial { n, xs: Vec::new(), bd: [None; N_BOUNDARY], cur: None }
    }

    fn mate(&self, p: Port) -> Option<Port> {
        match p {
            Port::X(c, s) => self.xs[c][s as usize],
            Port::B(j) => self.bd[j],
        }
    }

    fn join(&mut self, p: Port, q: Port) {
        for (a, b) in [(p, q), (q, p)] {
            match a {
                Port::X(c, s) => self.xs[c][s as usize] = Some(b),
                Port::B(j) => self.bd[j] = Some(b),
            }
        }
    }

    fn dart(&self, p: Port) -> usize {
        match p {
            Port::X(c, s) => 4 * c + s as usize,
            Port::B(j) => 4 * self.n + 3 * j + 1,
        }
    }

    fn vertex(&self, d: usize) -> (usize, usize, usize) {
        let n4 = 4 * self.n;
        if d < n4 {
            (d / 4, d % 4, 4)
        } else {
            (self.n + (d - n4) / 3, (d - n4) % 3, 3)
        }
    }

    fn vertex_dart(&self, v: usize, slot: usize) -> usize {
        if v < self.n {
            4 * v + slot
        } else {
            4 * self.n + 3 * (v - self.n) + slot
        }
    }

    /// Same face rule as complete diagrams; an unjoined slot is a stub
    /// that the face walks around.
    fn face_next(&self, d: usize) -> usize {
        let n4 = 4 * self.n;
        let back = if d < n4 {
            self.xs[d / 4][d % 4].map(|q| self.dart(q))
        } else {
            let j = (d - n4) / 3;
            match (d - n4) % 3 {
                0 => Some(n4 + 3 * ((j + 1) % N_BOUNDARY) + 2),
                2 => Some(n4 + 3 * ((j + N_BOUNDARY - 1) % N_BOUNDARY)),
                _ => self.bd[j].map(|q| self.dart(q)),
            }
        };
        let (v, slot, deg) = self.vertex(back.unwrap_or(d));
        self.vertex_dart(v, (slot + deg - 1) % deg)
    }

    fn face_of(&self) -> Vec<usize> {
        let mut face = vec![NONE; 4 * self.n + 3 * N_BOUNDARY];
        let live = |d: usize| d >= 4 * self.n || d / 4 < self.xs.len();
        let mut count = 0;
        for start in 0..face.len() {
            if face[start] != NONE || !live(start) {
                continue;
            }
            let mut d = start;
            while face[d] == NONE {
                face[d] = count;
                d = self.face_next(d);
            }
            count += 1;
        }
        face
    }

    fn is_complete(&self) -> bool {
        self.cur.is_none()
            && self.xs.len() == self.n
            && self.bd.iter().all(Option::is_some)
            && self.xs.iter().all(|x| x.iter().all(Option::is_some))
    }

    /// All states one construction step further on.
    fn children(&self) -> Vec<Partial> {
        let Some(cur) = self.cur else {
            // start the next string at the lowest free boundary point
            return match (0..N_BOUNDARY).find(|&j| self.bd[j].is_none()) {
                Some(j) => {
                    let mut s = self.clone();
                    s.cur = Some(Port::B(j));
                    vec![s]
                }
                None => Vec::new(),
            };
        };
        let faces = self.face_of();
        let here = faces[self.dart(cur)];
        let mut out = Vec::new();
        for k in 0..N_BOUNDARY {
            if self.bd[k].is_none() && Port::B(k) != cur && faces[self.dart(Port::B(k))] == here {
                let mut s = self.clone();
                s.join(cur, Port::B(k));
                s.cur = None;
                out.push(s);
            }
        }
        for c in 0..self.xs.len() {
            for slot in 0..4u8 {
                let p = Port::X(c, slot);
                if p == cur || self.mate(p).is_some() || self.mate(p.through()).is_some() {
                    continue;
                }
                if faces[self.dart(p)] != here {
                    continue;
                }
                let mut s = self.clone();
                s.join(cur, p);
                s.cur = Some(p.through());
                out.push(s);
            }
        }
        if self.xs.len() < self.n {
            let c = self.xs.len();
            let mut s = self.clone();
            s.xs.push([None; 4]);
            s.join(cur, Port::X(c, 0));
            s.cur = Some(Port::X(c, 2));
            out.push(s);
        }
        out
    }

    fn to_diagram(&self, overs: u32) -> TangleDiagram {
        let xs = self
            .xs
            .iter()
            .enumerate()
            .map(|(c, m)| Crossing::blank(m.map(|p| p.expect("complete")), ((overs >> c) & 1) as u8))
            .collect();
        let bd = self.bd.iter().map(|m| Endpoint { mate: m.expect("complete"), out: false, comp: NONE }).collect();
        let mut d = TangleDiagram { xs, bd, labels: Vec::new(), loops: Vec::new() };
        d.fix();
        d
    }
}

fn shadows_below(root: Partial, out: &mut Vec<Partial>) {
    let mut stack = vec![root];
    while let Some(s) = stack.pop() {
        if s.is_complete() {
            out.push(s);
        } else {
            stack.extend(s.children());
        }
    }
}

/// States reached after `depth` construction steps, in a fixed order.
fn frontier(n: usize, depth: usize) -> (Vec<Partial>, Vec<Partial>) {
    let mut level = vec![Partial::new(n)];
    let mut done = Vec::new();
    for _ in 0..depth {
        let mut next = Vec::new();
        for s in level {
            if s.is_complete() {
                done.push(s);
            } else {
                next.extend(s.children());
            }
        }
        level = next;
    }
    (level, done)
}

fn diagrams_of(shadow: &Partial) -> impl Iterator<Item = TangleDiagram> + '_ {
    (0..1u32 << shadow.n).map(move |m| shadow.to_diagram(m))
}

/// Every 3-string tangle diagram with exactly `n` crossings and no closed
/// components, up to isomorphism fixing the six boundary points.
pub fn generate_diagrams(n: usize) -> Result<Vec<TangleDiagram>, EnumerateError> {
    if n > MAX_CROSSINGS {
        return Err(EnumerateError::TooManyCrossings(n));
    }
    let mut shadows = Vec::new();
    shadows_below(Partial::new(n), &mut shadows);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for s in &shadows {
        for d in diagrams_of(s) {
            if seen.insert(canonical_code(&d)) {
                out.push(d);
            }
        }
    }
    Ok(out)
}

/// Number of crossing-free shadows with `n` crossings.
pub fn count_shadows(n: usize) -> Result<usize, EnumerateError> {
    if n > MAX_CROSSINGS {
        return Err(EnumerateError::TooManyCrossings(n));
    }
    let mut shadows = Vec::new();
    shadows_below(Partial::new(n), &mut shadows);
    Ok(shadows.len())
}

/// Independent generator for small `n`: every perfect matching of the
/// `4n + 6` ports and every choice of over strand, kept when planar with
/// three strings and no closed components. Returns canonical codes.
pub fn naive_codes(n: usize) -> HashSet<String> {
    let ports: Vec<Port> =
        (0..n).flat_map(|c| (0..4u8).map(move |s| Port::X(c, s))).chain((0..N_BOUNDARY).map(Port::B)).collect();
    let mut codes = HashSet::new();
    let mut mate: Vec<Option<usize>> = vec![None; ports.len()];
    fn rec(ports: &[Port], mate: &mut Vec<Option<usize>>, n: usize, codes: &mut HashSet<String>) {
        let Some(i) = mate.iter().position(Option::is_none) else {
            let mut xs = vec![Crossing::blank([Port::B(0); 4], 0); n];
            let mut bd = vec![Endpoint { mate: Port::B(0), out: false, comp: NONE }; N_BOUNDARY];
            for (a, b) in mate.iter().enumerate() {
                let q = ports[b.expect("matched")];
                match ports[a] {
                    Port::X(c, s) => xs[c].mate[s as usize] = q,
                    Port::B(j) => bd[j].mate = q,
                }
            }
            let mut d = TangleDiagram { xs, bd, labels: Vec::new(), loops: Vec::new() };
            d.fix();
            let strings = d.components().iter().filter(|c| matches!(c.kind, ComponentKind::Open { .. })).count();
            if strings != 3 || d.n_components() != 3 || !d.is_planar() {
                return;
            }
            for m in 0..1u32 << n {
                for c in 0..n {
                    d.xs[c].over = ((m >> c) & 1) as u8;
                }
                codes.insert(canonical_code(&d));
            }
            return;
        };
        for j in i + 1..ports.len() {
            if mate[j].is_some() {
                continue;
            }
            mate[i] = Some(j);
            mate[j] = Some(i);
            rec(ports, mate, n, codes);
            mate[i] = None;
            mate[j] = None;
        }
    }
    rec(&ports, &mut mate, n, &mut codes);
    codes
}

fn string_ids(d: &TangleDiagram) -> Vec<usize> {
    d.components()
        .iter()
        .enumerate()
        .filter(|(_, c)| matches!(c.kind, ComponentKind::Open { .. }))
        .map(|(i, _)| i)
        .collect()
}

/// After free simplification, some string crosses the union of the other
/// two at most once.
pub fn is_split(d: &TangleDiagram) -> bool {
    split_reduced(&simplify(d, SimplifyMode::Free))
}

fn split_reduced(s: &TangleDiagram) -> bool {
    string_ids(s)
        .into_iter()
        .any(|a| s.xs.iter().filter(|x| x.comp[0] != x.comp[1] && x.comp.contains(&a)).count() <= 1)
}

/// After free simplification, two strings bound a band that the third
/// string crosses only entirely over or entirely under.
///
/// The band is a chain of quadrilateral faces, each with one edge on
/// either string, joined along edges of the third string that are over at
/// both ends or under at both ends, and closed off by two arcs of the
/// tangle circle with no boundary points between them. The band itself is
/// then a disk whose boundary is the two strings and two circle arcs.
pub fn has_parallel_strands(d: &TangleDiagram) -> bool {
    parallel_reduced(&simplify(d, SimplifyMode::Free))
}

fn parallel_reduced(s: &TangleDiagram) -> bool {
    let ids = string_ids(s);
    let faces = s.faces();
    let n4 = 4 * s.xs.len();
    let dart_port = |d: usize| -> Option<Port> {
        if d < n4 {
            Some(Port::X(d / 4, (d % 4) as u8))
        } else if (d - n4) % 3 == 1 {
            Some(Port::B((d - n4) / 3))
        } else {
            None
        }
    };
    for (i, &a) in ids.iter().enumerate() {
        for &b in &ids[i + 1..] {
            let touches = |x: &Crossing| x.comp.contains(&a) || x.comp.contains(&b);
            // no self-crossings and no crossings between the two
            if s.xs.iter().any(|x| touches(x) && x.comp[0] == x.comp[1]) {
                continue;
            }
            if s.xs.iter().any(|x| x.comp.contains(&a) && x.comp.contains(&b)) {
                continue;
            }
            for forward in [true, false] {
                if band_on_side(s, a, b, forward, &faces.face_of, &dart_port) {
                    return true;
                }
            }
        }
    }
    false
}

fn band_on_side(
    s: &TangleDiagram,
    a: usize,
    b: usize,
    forward: bool,
    face_of: &[usize],
    dart_port: &dyn Fn(usize) -> Option<Port>,
) -> bool {
    // faces on one side of `a`, each entered at its `a` dart
    let mut band: Vec<(usize, usize)> = Vec::new();
    for (d, &f) in face_of.iter().enumerate() {
        let Some(p) = dart_port(d) else { continue };
        if s.comp_of(p) == a && s.is_out(p) == forward {
            band.push((f, d));
        }
    }
    let n_a = band.len();
    band.sort_unstable();
    band.dedup_by_key(|x| x.0);
    if band.len() != n_a {
        return false;
    }
    let in_band = |f: usize| band.binary_search_by_key(&f, |x| x.0).is_ok();
    // a third string with no crossings can be pushed onto the sphere
    let free_string = |c: usize| !s.xs.iter().any(|x| x.comp.contains(&c));
    let mut circle_runs = 0;
    let mut b_edges = 0;
    for &(_, start) in &band {
        // dart kinds around the face after the `a` dart
        let mut seq = Vec::new();
        let mut d = s.face_next(start);
        while d != start {
            seq.push(d);
            d = s.face_next(d);
        }
        let mut count_b = 0;
        // runs separated by the `b` dart; each must be a circle run or a
        // single interior edge of the third string
        let mut runs: Vec<Vec<usize>> = vec![Vec::new()];
        for &d in &seq {
            match dart_port(d) {
                Some(p) if s.comp_of(p) == b => {
                    count_b += 1;
                    runs.push(Vec::new());
                }
                Some(p) if s.comp_of(p) == a => return false,
                _ => runs.last_mut().expect("nonempty").push(d),
            }
        }
        if count_b != 1 {
            return false;
        }
        for run in &runs {
            let circle = run.iter().any(|&d| dart_port(d).is_none());
            if circle {
                let ok = run.iter().all(|&d| match dart_port(d) {
                    None => true,
                    Some(p) => free_string(s.comp_of(p)),
                });
                if !ok {
                    return false;
                }
                circle_runs += 1;
                continue;
            }
            let &[d] = run.as_slice() else { return false };
            let p = dart_port(d).expect("not a circle dart");
            let q = s.mate(p);
            let (Port::X(x, sx), Port::X(y, sy)) = (p, q) else { return false };
            if s.xs[x].is_over_slot(sx) != s.xs[y].is_over_slot(sy) {
                return false;
            }
            if !in_band(face_of[s.port_dart(q)]) {
                return false;
            }
        }
        b_edges += 1;
    }
    let total_b = s.xs.iter().filter(|x| x.comp.contains(&b)).count() + 1;
    circle_runs == 2 && b_edges == total_b
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    Split,
    Parallel,
    Reducible,
    Unresolved,
}

/// First matching category in the order split, parallel, reducible.
pub fn classify(d: &TangleDiagram) -> Category {
    let s = simplify(d, SimplifyMode::Free);
    if split_reduced(&s) {
        Category::Split
    } else if parallel_reduced(&s) {
        Category::Parallel
    } else if s.n_crossings() < d.n_crossings() {
        Category::Reducible
    } else {
        Category::Unresolved
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationReport {
    pub n: usize,
    pub total: usize,
    pub split: usize,
    pub parallel: usize,
    pub reducible: usize,
    /// Canonical codes of diagrams no rule classified.
    pub unresolved: Vec<String>,
}

impl EnumerationReport {
    pub fn new(n: usize) -> Self {
        EnumerationReport { n, ..Default::default() }
    }

    pub fn add(&mut self, d: &TangleDiagram) {
        self.total += 1;
        match classify(d) {
            Category::Split => self.split += 1,
            Category::Parallel => self.parallel += 1,
            Category::Reducible => self.reducible += 1,
            Category::Unresolved => self.unresolved.push(canonical_code(d)),
        }
    }

    /// Combine reports for the same `n` from disjoint parts of the search.
    pub fn merge(mut self, other: EnumerationReport) -> Self {
        debug_assert_eq!(self.n, other.n);
        self.total += other.total;
        self.split += other.split;
        self.parallel += other.parallel;
        self.reducible += other.reducible;
        self.unresolved.extend(other.unresolved);
        self.unresolved.sort();
        self
    }

    pub fn is_consistent(&self) -> bool {
        self.total == self.split + self.parallel + self.reducible + self.unresolved.len()
    }

    pub fn resolved(&self) -> bool {
        self.unresolved.is_empty()
    }
}

/// Classify all diagrams with `n` crossings, splitting the search tree
/// across the rayon pool.
pub fn enumerate_level(n: usize) -> Result<EnumerationReport, EnumerateError> {
    if n > MAX_CROSSINGS {
        return Err(EnumerateError::TooManyCrossings(n));
    }
    let (front, done) = frontier(n, 2 * n.min(4) + 2);
    let classify_all = |shadows: Vec<Partial>| {
        // each shadow is built along exactly one path, so no dedup is needed
        let mut r = EnumerationReport::new(n);
        for s in &shadows {
            for d in diagrams_of(s) {
                r.add(&d);
            }
        }
        r
    };
    let head = classify_all(done);
    let rest = front
        .into_par_iter()
        .map(|root| {
            let mut shadows = Vec::new();
            shadows_below(root, &mut shadows);
            classify_all(shadows)
        })
        .reduce(|| EnumerationReport::new(n), EnumerationReport::merge);
    Ok(head.merge(rest))
}

/// Per-level reports for every crossing count up to `n_max`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitOrParallelReport {
    pub levels: Vec<EnumerationReport>,
}

impl SplitOrParallelReport {
    /// Every diagram at every level was split, parallel or reducible.
    pub fn holds(&self) -> bool {
        self.levels.iter().all(EnumerationReport::resolved)
    }
}

/// Check that every 3-string tangle diagram with at most `n_max` crossings
/// is split, has parallel strands, or reduces to fewer crossings.
pub fn verify_split_or_parallel(n_max: usize) -> Result<SplitOrParallelReport, EnumerateError> {
    if n_max > MAX_CROSSINGS {
        return Err(EnumerateError::TooManyCrossings(n_max));
    }
    let levels = (0..=n_max).map(enumerate_level).collect::<Result<_, _>>()?;
    Ok(SplitOrParallelReport { levels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{standard_tangle, trivial_tangle3};

    #[test]
    fn crossingless_tangles() {
        let ds = generate_diagrams(0).unwrap();
        assert_eq!(ds.len(), 5);
        assert!(ds.iter().all(|d| d.is_planar() && classify(d) == Category::Split));
    }

    #[test]
    fn agrees_with_naive_generator() {
        for n in 0..=2 {
            let fast: HashSet<String> = generate_diagrams(n).unwrap().iter().map(canonical_code).collect();
            assert_eq!(fast, naive_codes(n), "n = {n}");
        }
    }

    #[test]
    fn generated_diagrams_are_valid() {
        for n in 0..=3 {
            for d in generate_diagrams(n).unwrap() {
                assert!(d.is_planar());
                d.check_invariants().unwrap();
                assert_eq!(d.n_strings(), 3);
                assert_eq!(d.n_components(), 3);
                assert_eq!(d.n_crossings(), n);
            }
        }
    }

    #[test]
    fn no_duplicate_diagrams() {
        for n in 0..=3 {
            let ds = generate_diagrams(n).unwrap();
            let codes: HashSet<String> = ds.iter().map(canonical_code).collect();
            assert_eq!(codes.len(), ds.len());
            assert_eq!(ds.len(), count_shadows(n).unwrap() << n);
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(generate_diagrams(8).is_err());
        assert!(verify_split_or_parallel(8).is_err());
    }

    #[test]
    fn trivial_and_pjh() {
        let t = trivial_tangle3();
        assert!(is_split(&t));
        assert!(has_parallel_strands(&t));
        let pjh = standard_tangle(-2, -2, -2);
        // rational: free isotopy removes every crossing
        assert!(is_split(&pjh));
        assert!(has_parallel_strands(&pjh));
    }

    #[test]
    fn small_levels_resolve() {
        let r = verify_split_or_parallel(3).unwrap();
        for l in &r.levels {
            assert!(l.is_consistent());
        }
        assert!(r.holds(), "{:?}", r.levels.iter().map(|l| l.unresolved.len()).collect::<Vec<_>>());
        assert_eq!(r.levels[0].split, 5);
    }

    #[test]
    fn parallel_report_matches_sequential() {
        for n in 0..=2 {
            let mut seq = EnumerationReport::new(n);
            for d in generate_diagrams(n).unwrap() {
                seq.add(&d);
            }
            let mut par = enumerate_level(n).unwrap();
            par.unresolved.sort();
            seq.unresolved.sort();
            assert_eq!(par, seq);
        }
    }
}
