//! Diagram constructors: rational tangles, braid closures, standard
//! 3-string tangles.

use super::model::{Crossing, Port, TangleDiagram, NONE};
use crate::frac::Fraction;

/// Over axis of a twist that adds `+1` to a 2-string tangle when applied
/// at the right-hand pair `(SE, NE)`. This one constant fixes every sign
/// in the diagram layer: the integer tangle `3` closes to the trefoil with
/// three positive crossings.
pub const TWIST_HANDEDNESS: u8 = 0;

pub(crate) const SW: usize = 2;
pub(crate) const SE: usize = 3;

/// The crossingless `0/1` tangle: strings `NE-NW` and `SW-SE`.
pub fn zero_tangle() -> TangleDiagram {
    TangleDiagram::crossingless(4, &[(0, 1), (2, 3)], &["a", "b"])
}

/// The crossingless `1/0` tangle: strings `NW-SW` and `SE-NE`.
pub fn infinity_tangle() -> TangleDiagram {
    TangleDiagram::crossingless(4, &[(1, 2), (3, 0)], &["a", "b"])
}

impl TangleDiagram {
    /// Add `n` integral twists at the right-hand pair: `F -> F + n`.
    pub fn add_integral_twists(&mut self, n: i64) {
        self.twist_pair(SE, n);
    }

    /// Add `v` vertical twists at the bottom pair: `p/q -> p/(q + v p)`.
    ///
    /// A quarter turn carries the bottom pair to the right-hand pair and
    /// sends `F` to `-1/F`, so the same geometric twist counts as `-1` here.
    pub fn add_vertical_twists(&mut self, v: i64) {
        self.twist_pair(SW, -v);
    }
}

/// Twist diagram of the rational tangle `f`, built from its continued
/// fraction by alternating vertical and integral twists.
pub fn rational_tangle(f: Fraction) -> TangleDiagram {
    rational_tangle_by(f, false)
}

/// As [`rational_tangle`], with the integral part rounded up instead of
/// down when `round_up` is set. Both give diagrams of the same tangle, but
/// generally different ones.
pub fn rational_tangle_by(f: Fraction, round_up: bool) -> TangleDiagram {
    if f.is_infinite() {
        return infinity_tangle();
    }
    let (p, q) = (f.numer(), f.denom());
    if q == 1 {
        let mut d = zero_tangle();
        d.add_integral_twists(p);
        return d;
    }
    // f = a + r/q with 0 < |r| < q, and q/r = v + s/r with |s| < |r|.
    let a = if round_up { p.div_euclid(q) + 1 } else { p.div_euclid(q) };
    let r = p - a * q;
    let v = q / r;
    let s = q - v * r;
    let inner = Fraction::new(r, s).expect("r != 0");
    let mut d = rational_tangle_by(inner, round_up);
    d.add_vertical_twists(v);
    d.add_integral_twists(a);
    d
}

/// Closure of a braid on `strands` strands. Generator `i > 0` is the
/// positive crossing `sigma_i` (strands `i` and `i + 1`, 1-based), `-i`
/// its inverse. Strands run upward and the closure is oriented with them.
pub fn braid_closure(strands: usize, word: &[i32]) -> TangleDiagram {
    let mut d = TangleDiagram { xs: Vec::new(), bd: Vec::new(), labels: Vec::new(), loops: Vec::new() };
    let mut first: Vec<Option<Port>> = vec![None; strands];
    let mut top: Vec<Option<Port>> = vec![None; strands];
    for &g in word {
        let i = g.unsigned_abs() as usize - 1;
        assert!(g != 0 && i + 1 < strands, "generator {g} out of range");
        let c = d.xs.len();
        // slots: 0 up-right, 1 up-left, 2 down-left, 3 down-right
        let over = if g > 0 { 0 } else { 1 };
        d.xs.push(Crossing { mate: [Port::B(NONE); 4], over, out: [true, true, false, false], comp: [NONE; 2] });
        for (pos, slot) in [(i, 2u8), (i + 1, 3u8)] {
            match top[pos] {
                Some(p) => d.set_mate(p, Port::X(c, slot)),
                None => first[pos] = Some(Port::X(c, slot)),
            }
        }
        top[i] = Some(Port::X(c, 1));
        top[i + 1] = Some(Port::X(c, 0));
    }
    for pos in 0..strands {
        match (top[pos], first[pos]) {
            (Some(t), Some(f)) => d.set_mate(t, f),
            _ => {
                d.loops.push(d.labels.len());
                d.labels.push(String::new());
            }
        }
    }
    d.fix();
    // number components by their lowest strand position so that braid
    // moves keep the numbering
    let mut order: Vec<usize> = Vec::new();
    let mut loops = d.loops.clone().into_iter();
    for f in first {
        let c = match f {
            Some(p) => d.comp_of(p),
            None => loops.next().expect("one loop per uncrossed strand"),
        };
        if !order.contains(&c) {
            order.push(c);
        }
    }
    d.permute_components(&order);
    for (i, l) in d.labels.iter_mut().enumerate() {
        *l = format!("k{i}");
    }
    d
}

/// Standard diagram of the `(2, k)` torus link: the closure of `sigma_1^k`.
pub fn torus_link(k: i64) -> TangleDiagram {
    let g = if k >= 0 { 1 } else { -1 };
    braid_closure(2, &vec![g; k.unsigned_abs() as usize])
}

/// The crossingless 3-string tangle: `s12` on `(p0, p1)`, `s23` on
/// `(p2, p3)`, `s31` on `(p4, p5)`, oriented by the tangle circle.
pub fn trivial_tangle3() -> TangleDiagram {
    TangleDiagram::crossingless(6, &[(1, 0), (3, 2), (5, 4)], &["s12", "s23", "s31"])
}

/// Standard 3-string tangle with `n_i` twists at the capping position
/// `c_i`. Capping `c_i` yields the rational tangle `1/(n_j + n_k)` and
/// removing `s23` yields `1/n_1`.
pub fn standard_tangle(n1: i64, n2: i64, n3: i64) -> TangleDiagram {
    let mut d = trivial_tangle3();
    for (i, n) in [(1u8, n1), (2, n2), (3, n3)] {
        d = d.add_boundary_twists(i, n).expect("3-string tangle");
    }
    d.orient_by_circle();
    d
}

/// Label and boundary pair of a string of the standard 3-string tangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StringSlot {
    pub label: &'static str,
    pub ends: (usize, usize),
}

impl StringSlot {
    pub const ALL: [StringSlot; 3] = [
        StringSlot { label: "s12", ends: (0, 1) },
        StringSlot { label: "s23", ends: (2, 3) },
        StringSlot { label: "s31", ends: (4, 5) },
    ];
}
