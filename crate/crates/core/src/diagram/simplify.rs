//! Crossing reduction by Reidemeister I/II and nugatory-crossing untwists.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::model::{Port, TangleDiagram};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimplifyMode {
    /// Reidemeister I and II inside the disk; boundary points stay put.
    RelBoundary,
    /// Also untwist nugatory crossings, turning over the part of the
    /// diagram cut off by them even when it carries boundary points.
    Free,
}

/// A crossing `v` whose removal disconnects the part of the diagram
/// attached at slots `k+1, k+2` (the `side`) from the rest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nugatory {
    pub crossing: usize,
    pub k: u8,
    pub side: BTreeSet<usize>,
    pub side_boundary: BTreeSet<usize>,
}

/// Apply moves until none applies. Every move removes at least one
/// crossing, so this terminates after at most `n` rounds.
pub fn simplify(d: &TangleDiagram, mode: SimplifyMode) -> TangleDiagram {
    let mut d = d.clone();
    loop {
        if let Some(c) = find_r1(&d) {
            d.rewire(&BTreeSet::from([c]), &BTreeSet::new());
            continue;
        }
        if let Some((x, y)) = find_r2(&d) {
            d.rewire(&BTreeSet::from([x, y]), &BTreeSet::new());
            continue;
        }
        if mode == SimplifyMode::Free {
            if let Some(nug) = find_nugatory(&d, true) {
                untwist(&mut d, &nug);
                continue;
            }
        }
        return d;
    }
}

/// A crossing with two adjacent slots joined to each other.
pub(crate) fn find_r1(d: &TangleDiagram) -> Option<usize> {
    d.xs.iter()
        .enumerate()
        .find_map(|(c, x)| (0..4u8).any(|s| x.mate[s as usize] == Port::X(c, (s + 1) % 4)).then_some(c))
}

/// Two distinct crossings bounding a bigon face, with the same strand over
/// at both.
pub(crate) fn find_r2(d: &TangleDiagram) -> Option<(usize, usize)> {
    let n = d.xs.len();
    if n < 2 {
        return None;
    }
    let faces = d.faces();
    let mut first_dart = vec![usize::MAX; faces.count];
    for dart in 0..4 * n {
        let f = faces.face_of[dart];
        if faces.len[f] == 2 && first_dart[f] == usize::MAX {
            first_dart[f] = dart;
        }
    }
    for (f, &dart) in first_dart.iter().enumerate() {
        if dart == usize::MAX || faces.touches_boundary[f] {
            continue;
        }
        let (x, t1) = (dart / 4, (dart % 4) as u8);
        let Port::X(y, a1) = d.xs[x].mate[t1 as usize] else { continue };
        if x == y {
            continue;
        }
        let over_x = d.xs[x].is_over_slot(t1);
        let over_y = d.xs[y].is_over_slot(a1);
        if over_x == over_y {
            return Some((x.min(y), x.max(y)));
        }
    }
    None
}

/// Crossings and boundary points reachable from the given slots of `v`
/// without passing through `v`. `None` if the search returns to `v`
/// through a slot outside `slots`.
fn side_of(d: &TangleDiagram, v: usize, slots: [u8; 2]) -> Option<(BTreeSet<usize>, BTreeSet<usize>)> {
    let mut xs = BTreeSet::new();
    let mut bs = BTreeSet::new();
    let mut queue: VecDeque<Port> = slots.iter().map(|&s| d.xs[v].mate[s as usize]).collect();
    while let Some(p) = queue.pop_front() {
        match p {
            Port::B(j) => {
                bs.insert(j);
            }
            Port::X(c, s) if c == v => {
                if !slots.contains(&s) {
                    return None;
                }
            }
            Port::X(c, _) => {
                if xs.insert(c) {
                    queue.extend(d.xs[c].mate.iter().copied());
                }
            }
        }
    }
    Some((xs, bs))
}

/// Find a nugatory crossing. With `allow_boundary`, the turned-over side
/// may carry boundary points, which is a free isotopy of the ball.
pub fn find_nugatory(d: &TangleDiagram, allow_boundary: bool) -> Option<Nugatory> {
    let faces = d.faces();
    for v in 0..d.xs.len() {
        for k in 0..2u8 {
            let fa = TangleDiagram::corner_face(&faces, v, k as usize);
            let fb = TangleDiagram::corner_face(&faces, v, k as usize + 2);
            let same = fa == fb;
            let outer = faces.touches_boundary[fa] && faces.touches_boundary[fb];
            if !same && !outer {
                continue;
            }
            let s1 = [(k + 1) % 4, (k + 2) % 4];
            let s2 = [(k + 3) % 4, k];
            let (Some(a), Some(b)) = (side_of(d, v, s1), side_of(d, v, s2)) else { continue };
            let (kk, side) = if a.1.is_empty() {
                (k, a)
            } else if b.1.is_empty() {
                ((k + 2) % 4, b)
            } else if allow_boundary {
                (k, a)
            } else {
                continue;
            };
            if !allow_boundary && !side.1.is_empty() {
                continue;
            }
            return Some(Nugatory { crossing: v, k: kk, side: side.0, side_boundary: side.1 });
        }
    }
    None
}

/// Turn over the cut-off side and remove the crossing.
fn untwist(d: &mut TangleDiagram, nug: &Nugatory) {
    let b = d.bd.len();
    // Boundary points of the side form a contiguous block; reverse it.
    let mut bmap: Vec<usize> = (0..b).collect();
    if !nug.side_boundary.is_empty() {
        let m = nug.side_boundary.len();
        let start = *nug
            .side_boundary
            .iter()
            .find(|&&j| !nug.side_boundary.contains(&((j + b - 1) % b)))
            .expect("side boundary block is a proper subset");
        for r in 0..m {
            bmap[(start + r) % b] = (start + m - 1 - r) % b;
        }
    }
    let map = |p: Port| match p {
        Port::X(c, s) if nug.side.contains(&c) => Port::X(c, (4 - s) % 4),
        Port::B(j) => Port::B(bmap[j]),
        other => other,
    };
    let old = d.clone();
    for &c in &nug.side {
        let x = &old.xs[c];
        let nx = &mut d.xs[c];
        for s in 0..4u8 {
            let t = ((4 - s) % 4) as usize;
            nx.mate[t] = map(x.mate[s as usize]);
            nx.out[t] = x.out[s as usize];
        }
        nx.over = 1 - x.over;
    }
    for s in 0..4 {
        d.xs[nug.crossing].mate[s] = map(old.xs[nug.crossing].mate[s]);
    }
    for (j, e) in old.bd.iter().enumerate() {
        let nb = &mut d.bd[bmap[j]];
        nb.mate = map(e.mate);
        nb.out = e.out;
        nb.comp = e.comp;
    }
    // Other crossings never touch the side, except through boundary points.
    for c in 0..d.xs.len() {
        if c == nug.crossing || nug.side.contains(&c) {
            continue;
        }
        for s in 0..4 {
            d.xs[c].mate[s] = map(old.xs[c].mate[s]);
        }
    }
    d.rewire(&BTreeSet::from([nug.crossing]), &BTreeSet::new());
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::build::{braid_closure, rational_tangle, standard_tangle, trivial_tangle3};
    use crate::frac::Fraction;

    #[test]
    fn r1_curl_removed() {
        let mut d = trivial_tangle3();
        d.twist_boundary(0, 0); // p0 and p1 are joined: a curl
        assert_eq!(d.n_crossings(), 1);
        let s = simplify(&d, SimplifyMode::RelBoundary);
        assert_eq!(s.n_crossings(), 0);
        assert!(s.is_planar());
        s.check_invariants().unwrap();
    }

    #[test]
    fn twists_cancel_rel_boundary() {
        let d = trivial_tangle3().add_boundary_twists(1, 3).unwrap().add_boundary_twists(1, -3).unwrap();
        assert_eq!(d.n_crossings(), 6);
        let s = simplify(&d, SimplifyMode::RelBoundary);
        assert_eq!(s.n_crossings(), 0);
    }

    #[test]
    fn boundary_twists_untwist_freely() {
        let d = standard_tangle(1, -1, 0);
        assert_eq!(simplify(&d, SimplifyMode::RelBoundary).n_crossings(), 2);
        let s = simplify(&d, SimplifyMode::Free);
        assert_eq!(s.n_crossings(), 0);
        assert!(s.is_planar());
        s.check_invariants().unwrap();
    }

    #[test]
    fn pjh_is_reduced_rel_boundary() {
        let d = standard_tangle(-2, -2, -2);
        assert_eq!(simplify(&d, SimplifyMode::RelBoundary).n_crossings(), 6);
    }

    #[test]
    fn braid_closures_reduce() {
        // the closure arc of the first strand bounds a monogon
        let d = braid_closure(3, &[1, 2]);
        assert_eq!(d.n_components(), 1);
        let s = simplify(&d, SimplifyMode::RelBoundary);
        assert_eq!(s.n_crossings(), 0);
        assert_eq!(s.n_free_loops(), 1);
        let r2 = simplify(&braid_closure(2, &[1, -1]), SimplifyMode::RelBoundary);
        assert_eq!(r2.n_crossings(), 0);
        assert_eq!(r2.n_free_loops(), 2);
    }

    #[test]
    fn boundary_nugatory_needs_free_mode() {
        let d = standard_tangle(1, -1, 0);
        assert!(find_nugatory(&d, false).is_none());
        let nug = find_nugatory(&d, true).unwrap();
        assert!(!nug.side_boundary.is_empty());
    }

    #[test]
    fn rational_diagrams_are_reduced() {
        let d = rational_tangle(Fraction::new(7, 3).unwrap());
        let s = simplify(&d, SimplifyMode::RelBoundary);
        assert_eq!(s.n_crossings(), d.n_crossings());
    }
}
