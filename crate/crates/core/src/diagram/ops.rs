//! Structural edits: twisting, joining, capping, closing and string removal.

use std::collections::BTreeSet;

use super::build::{rational_tangle, TWIST_HANDEDNESS};
use super::model::{Crossing, Endpoint, Port, TangleDiagram, NONE};
use super::{DiagramError, Result};
use crate::frac::Fraction;

impl TangleDiagram {
    /// Put one crossing between boundary points `j` and `j + 1` (cyclic).
    ///
    /// The endpoints of the two strands trade places. `over` is the axis of
    /// the new crossing's over strand: axis 0 is the strand now ending at
    /// `j`. With a fixed `over` every position gets the same geometric
    /// twist.
    pub fn twist_boundary(&mut self, j: usize, over: u8) {
        let b = self.bd.len();
        assert!(b >= 2, "need two boundary points to twist");
        let k = (j + 1) % b;
        let x = self.xs.len();
        let mj = self.bd[j].mate;
        let mk = self.bd[k].mate;
        if mj == Port::B(k) {
            let mut cr = Crossing::blank([Port::B(j), Port::B(k), Port::X(x, 3), Port::X(x, 2)], over);
            cr.comp = [NONE; 2];
            self.xs.push(cr);
        } else {
            self.xs.push(Crossing::blank([Port::B(j), Port::B(k), mk, mj], over));
            self.set_mate(Port::X(x, 2), mk);
            self.set_mate(Port::X(x, 3), mj);
        }
        self.bd[j].mate = Port::X(x, 0);
        self.bd[k].mate = Port::X(x, 1);
        let (oj, cj) = (self.bd[j].out, self.bd[j].comp);
        self.bd[j].out = self.bd[k].out;
        self.bd[j].comp = self.bd[k].comp;
        self.bd[k].out = oj;
        self.bd[k].comp = cj;
        self.fix();
    }

    /// `|n|` twists at the pair `(j, j + 1)`; the sign of `n` picks the
    /// handedness relative to [`TWIST_HANDEDNESS`].
    pub fn twist_pair(&mut self, j: usize, n: i64) {
        let over = if n > 0 { TWIST_HANDEDNESS } else { 1 - TWIST_HANDEDNESS };
        for _ in 0..n.unsigned_abs() {
            self.twist_boundary(j, over);
        }
    }

    /// Renumber boundary points so that old point `start` becomes point 0.
    pub fn rotate_boundary(&mut self, start: usize) {
        let b = self.bd.len();
        if b == 0 || start.is_multiple_of(b) {
            return;
        }
        let map: Vec<usize> = (0..b).map(|old| (old + b - start % b) % b).collect();
        self.relabel_boundary(&map);
    }

    /// Move boundary point `i` to position `map[i]`.
    pub(crate) fn relabel_boundary(&mut self, map: &[usize]) {
        let b = self.bd.len();
        let remap = |p: Port| match p {
            Port::B(j) => Port::B(map[j]),
            other => other,
        };
        for x in &mut self.xs {
            for m in &mut x.mate {
                *m = remap(*m);
            }
        }
        let mut nb = vec![Endpoint { mate: Port::B(NONE), out: false, comp: NONE }; b];
        for (j, e) in self.bd.iter().enumerate() {
            nb[map[j]] = Endpoint { mate: remap(e.mate), out: e.out, comp: e.comp };
        }
        self.bd = nb;
    }

    /// Join boundary points pairwise outside the disk; joined points are
    /// removed and the rest keep their cyclic order.
    pub fn join_boundary(&mut self, pairs: &[(usize, usize)]) {
        let mut dead = vec![false; self.bd.len()];
        for &(a, b) in pairs {
            assert!(!dead[a] && !dead[b] && a != b, "boundary point joined twice");
            dead[a] = true;
            dead[b] = true;
            let ma = self.bd[a].mate;
            let mb = self.bd[b].mate;
            if ma == Port::B(b) {
                self.loops.push(self.bd[a].comp);
                continue;
            }
            // Keep the orientation of the longer-lived side when the two
            // strings meet head to head; `fix` resolves the rest by vote.
            self.set_mate(ma, mb);
        }
        let keep: Vec<bool> = dead.iter().map(|d| !d).collect();
        self.compact(&vec![true; self.xs.len()], &keep);
        self.fix();
    }

    /// Drop crossings and boundary points not marked `keep`. Every
    /// surviving port must already have a surviving mate.
    pub(crate) fn compact(&mut self, keep_x: &[bool], keep_b: &[bool]) {
        let mut xmap = vec![NONE; self.xs.len()];
        let mut next = 0;
        for (c, &k) in keep_x.iter().enumerate() {
            if k {
                xmap[c] = next;
                next += 1;
            }
        }
        let mut bmap = vec![NONE; self.bd.len()];
        next = 0;
        for (j, &k) in keep_b.iter().enumerate() {
            if k {
                bmap[j] = next;
                next += 1;
            }
        }
        let remap = |p: Port| match p {
            Port::X(c, s) => Port::X(xmap[c], s),
            Port::B(j) => Port::B(bmap[j]),
        };
        let xs = std::mem::take(&mut self.xs);
        self.xs = xs
            .into_iter()
            .enumerate()
            .filter(|(c, _)| keep_x[*c])
            .map(|(_, mut x)| {
                for m in &mut x.mate {
                    *m = remap(*m);
                }
                x
            })
            .collect();
        let bd = std::mem::take(&mut self.bd);
        self.bd = bd
            .into_iter()
            .enumerate()
            .filter(|(j, _)| keep_b[*j])
            .map(|(_, mut e)| {
                e.mate = remap(e.mate);
                e
            })
            .collect();
    }

    /// Remove a set of crossings, letting the surviving strands pass
    /// straight through. Strands of `drop` components vanish along with
    /// their boundary points. Strands that close up inside the removed set
    /// become free loops.
    pub(crate) fn rewire(&mut self, dissolve: &BTreeSet<usize>, drop: &BTreeSet<usize>) {
        let n = self.xs.len();
        let in_set = |p: Port| matches!(p, Port::X(c, _) if dissolve.contains(&c));
        let mut visited = vec![[false; 2]; n];
        let mut updates: Vec<(Port, Port)> = Vec::new();
        let mut survivors: Vec<Port> = Vec::new();
        for c in 0..n {
            if !dissolve.contains(&c) {
                survivors.extend((0..4u8).map(|s| Port::X(c, s)));
            }
        }
        for j in 0..self.bd.len() {
            if !drop.contains(&self.bd[j].comp) {
                survivors.push(Port::B(j));
            }
        }
        for &p in &survivors {
            let mut q = self.mate(p);
            while in_set(q) {
                if let Port::X(c, s) = q {
                    visited[c][(s % 2) as usize] = true;
                }
                q = self.mate(q.through());
            }
            updates.push((p, q));
        }
        // Strands living entirely inside the dissolved set.
        for &c in dissolve {
            for a in 0..2u8 {
                let comp = self.xs[c].comp[a as usize];
                if visited[c][a as usize] || drop.contains(&comp) {
                    continue;
                }
                let mut p = Port::X(c, a);
                loop {
                    if let Port::X(c2, s) = p {
                        visited[c2][(s % 2) as usize] = true;
                    }
                    p = self.mate(p.through());
                    if let Port::X(c2, s) = p {
                        if visited[c2][(s % 2) as usize] {
                            break;
                        }
                    }
                }
                self.loops.push(comp);
            }
        }
        for (p, q) in updates {
            match p {
                Port::X(c, s) => self.xs[c].mate[s as usize] = q,
                Port::B(j) => self.bd[j].mate = q,
            }
        }
        let keep_x: Vec<bool> = (0..n).map(|c| !dissolve.contains(&c)).collect();
        let keep_b: Vec<bool> = self.bd.iter().map(|e| !drop.contains(&e.comp)).collect();
        self.loops.retain(|l| !drop.contains(l));
        self.compact(&keep_x, &keep_b);
        self.fix();
    }

    /// Disjoint union; `other`'s boundary points follow ours.
    pub fn disjoint_union(&self, other: &TangleDiagram) -> TangleDiagram {
        let n = self.xs.len();
        let b = self.bd.len();
        let k = self.labels.len();
        let shift = |p: Port| match p {
            Port::X(c, s) => Port::X(c + n, s),
            Port::B(j) => Port::B(j + b),
        };
        let shift_comp = |c: usize| if c == NONE { NONE } else { c + k };
        let mut out = self.clone();
        for x in &other.xs {
            let mut x = x.clone();
            for m in &mut x.mate {
                *m = shift(*m);
            }
            x.comp = [shift_comp(x.comp[0]), shift_comp(x.comp[1])];
            out.xs.push(x);
        }
        for e in &other.bd {
            out.bd.push(Endpoint { mate: shift(e.mate), out: e.out, comp: shift_comp(e.comp) });
        }
        out.labels.extend(other.labels.iter().cloned());
        out.loops.extend(other.loops.iter().map(|&l| l + k));
        out
    }

    pub(crate) fn expect_strings(&self, k: usize) -> Result<()> {
        let open = self.bd.len() / 2;
        if self.bd.len() != 2 * k {
            return Err(DiagramError::WrongEndpointCount { expected: 2 * k, found: self.bd.len() });
        }
        if open != k {
            return Err(DiagramError::WrongStringCount { expected: k, found: open });
        }
        Ok(())
    }

    /// Join two existing components under a new label.
    fn merge_labels(&mut self, a: usize, b: usize, label: String) {
        let id = self.labels.len();
        self.labels.push(label);
        for x in &mut self.xs {
            for c in &mut x.comp {
                if *c == a || *c == b {
                    *c = id;
                }
            }
        }
        for e in &mut self.bd {
            if e.comp == a || e.comp == b {
                e.comp = id;
            }
        }
    }

    /// Cap off the boundary pair `c_i` of a 3-string tangle.
    ///
    /// Boundary points run `p0 .. p5` counterclockwise with caps
    /// `c1 = (p5, p0)`, `c2 = (p1, p2)`, `c3 = (p3, p4)`. The result is a
    /// 2-string tangle whose points, counterclockwise from the one after
    /// the cap, are `NE, NW, SW, SE`; its numerator closure caps the two
    /// remaining `c_j`.
    pub fn cap(&self, i: u8) -> Result<TangleDiagram> {
        self.expect_strings(3)?;
        let a = match i {
            1 => 5,
            2 => 1,
            3 => 3,
            _ => return Err(DiagramError::BadCapIndex(i)),
        };
        let b = (a + 1) % 6;
        let mut d = self.clone();
        let (ca, cb) = (d.bd[a].comp, d.bd[b].comp);
        if ca != cb {
            let label = format!("{}.c{}.{}", d.labels[ca], i, d.labels[cb]);
            d.merge_labels(ca, cb, label);
        }
        d.rotate_boundary((a + 2) % 6);
        // After rotation the capped pair sits at positions 4 and 5.
        d.join_boundary(&[(4, 5)]);
        Ok(d)
    }

    /// Forget one string. For a 3-string tangle the remaining points are
    /// renumbered to start two places after the removed pair, so removing
    /// `s23` at `(p2, p3)` leaves `[p5, p0, p1, p4]`.
    pub fn remove_string(&self, label: &str) -> Result<TangleDiagram> {
        let comp = self.comp_by_label(label).ok_or_else(|| DiagramError::UnknownLabel(label.into()))?;
        let mut d = self.clone();
        let touched: BTreeSet<usize> =
            d.xs.iter().enumerate().filter(|(_, x)| x.comp.contains(&comp)).map(|(c, _)| c).collect();
        let ends: Vec<usize> = (0..d.bd.len()).filter(|&j| d.bd[j].comp == comp).collect();
        let start = match ends.as_slice() {
            [lo, hi] if d.bd.len() >= 4 => {
                // The point two places after the pair, counted among survivors.
                let b = d.bd.len();
                let after = if (lo + 1) % b == *hi { *hi } else { *lo };
                let target = (after + 2) % b;
                Some((0..target).filter(|j| !ends.contains(j)).count())
            }
            _ => None,
        };
        let drop = BTreeSet::from([comp]);
        d.rewire(&touched, &drop);
        if let Some(s) = start {
            d.rotate_boundary(s);
        }
        Ok(d)
    }

    /// Numerator closure of a 2-string tangle: join `(NE, NW)` and `(SW, SE)`.
    pub fn numerator(&self) -> Result<TangleDiagram> {
        self.expect_strings(2)?;
        let mut d = self.clone();
        d.join_boundary(&[(0, 1), (2, 3)]);
        Ok(d)
    }

    /// Denominator closure: join `(NE, SE)` and `(NW, SW)`.
    pub fn denominator(&self) -> Result<TangleDiagram> {
        self.expect_strings(2)?;
        let mut d = self.clone();
        d.join_boundary(&[(0, 3), (1, 2)]);
        Ok(d)
    }

    /// `N(self + filler)` for integral or vertical fillers.
    pub fn close_with(&self, filler: Fraction) -> Result<TangleDiagram> {
        self.expect_strings(2)?;
        if !(filler.is_integral() || filler.as_vertical().is_some()) {
            return Err(DiagramError::UnsupportedFiller(filler));
        }
        let mut f = rational_tangle(filler);
        for l in &mut f.labels {
            l.clear();
        }
        let mut d = self.disjoint_union(&f);
        d.join_boundary(&[(0, 5), (3, 6), (1, 4), (2, 7)]);
        Ok(d)
    }

    /// `n` twists at the capping position `c_i` of a 3-string tangle.
    pub fn add_boundary_twists(&self, i: u8, n: i64) -> Result<TangleDiagram> {
        self.expect_strings(3)?;
        let j = match i {
            1 => 5,
            2 => 1,
            3 => 3,
            _ => return Err(DiagramError::BadCapIndex(i)),
        };
        let mut d = self.clone();
        // Counted like vertical twists of the capped tangle.
        d.twist_pair(j, -n);
        Ok(d)
    }

    /// Reorient every string of a tangle from its higher boundary point
    /// `p_{a+1}` to `p_a`, where `(p_a, p_{a+1})` is the pair spanned by
    /// the string along the circle; this is the orientation induced by
    /// running the circle counterclockwise and returning along the string.
    pub fn orient_by_circle(&mut self) {
        let b = self.bd.len();
        for j in 0..b {
            let (_, k) = self.walk_from(j);
            if !self.bd[j].out {
                continue;
            }
            let want_tail = if (k + 1) % b == j {
                j
            } else if (j + 1) % b == k {
                k
            } else {
                j.max(k)
            };
            if want_tail != j {
                self.reverse_string(j);
            }
        }
    }

    /// Reverse the string whose tail is boundary point `j`.
    pub(crate) fn reverse_string(&mut self, j: usize) {
        let (seq, k) = self.walk_from(j);
        self.bd[j].out = false;
        self.bd[k].out = true;
        for p in seq {
            let o = self.is_out(p);
            self.set_out(p, !o);
            self.set_out(p.through(), o);
        }
    }

    /// Reverse a closed or open component.
    pub fn reverse_component(&mut self, comp: usize) {
        if let Some(j) = self.bd.iter().position(|e| e.out && e.comp == comp) {
            self.reverse_string(j);
            return;
        }
        for p in self.component_walk(comp) {
            let o = self.is_out(p);
            self.set_out(p, !o);
            self.set_out(p.through(), o);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trivial3() -> TangleDiagram {
        TangleDiagram::crossingless(6, &[(0, 1), (2, 3), (4, 5)], &["s12", "s23", "s31"])
    }

    #[test]
    fn cap_trivial_gives_infinity_tangle() {
        let d = trivial3().cap(1).unwrap();
        assert_eq!(d.n_boundary(), 4);
        assert_eq!(d.n_crossings(), 0);
        // s23 now runs NW-SW, the merged string SE-NE
        assert_eq!(d.mate(Port::B(1)), Port::B(2));
        assert_eq!(d.mate(Port::B(3)), Port::B(0));
        assert!(d.labels().contains(&"s31.c1.s12".to_string()));
        d.check_invariants().unwrap();
    }

    #[test]
    fn remove_string_order() {
        let d = trivial3().remove_string("s23").unwrap();
        assert_eq!(d.n_boundary(), 4);
        // [p5, p0, p1, p4]: s12 joins NW-SW, s31 joins SE-NE
        assert_eq!(d.mate(Port::B(1)), Port::B(2));
        assert_eq!(d.mate(Port::B(0)), Port::B(3));
        assert!(trivial3().remove_string("zz").is_err());
    }

    #[test]
    fn twist_then_untwist_counts() {
        let mut d = trivial3();
        d.twist_pair(5, 3);
        assert_eq!(d.n_crossings(), 3);
        assert!(d.is_planar());
        d.check_invariants().unwrap();
        d.twist_pair(5, -3);
        assert_eq!(d.n_crossings(), 6);
        assert!(d.is_planar());
    }

    #[test]
    fn numerator_of_zero_tangle_is_unlink() {
        let z = TangleDiagram::crossingless(4, &[(0, 1), (2, 3)], &["a", "b"]);
        let n = z.numerator().unwrap();
        assert_eq!(n.n_free_loops(), 2);
        let d = z.denominator().unwrap();
        assert_eq!(d.n_free_loops(), 1);
    }
}
