//! Reidemeister moves that add crossings, used to check invariants.
//!
//! Curls are inserted directly into a diagram. Second and third moves act
//! on braid words, whose closures are then rebuilt; inserting a cancelling
//! pair is a second move and rewriting `s_i s_j s_i` as `s_j s_i s_j` for
//! adjacent generators of equal sign is a third move.

use super::model::{Crossing, Port, TangleDiagram};

/// Insert a curl into the edge at port `p`. `kind & 1` picks which strand
/// is over and `kind & 2` which side the loop lies on.
pub fn insert_curl(d: &TangleDiagram, p: Port, kind: u8) -> TangleDiagram {
    let mut d = d.clone();
    let q = d.mate(p);
    let (tail, head) = if d.is_out(p) { (p, q) } else { (q, p) };
    let comp = d.comp_of(tail);
    let c = d.xs.len();
    // enter at 0, leave at 2, come back in at `back`, leave for good at `exit`
    let (back, exit) = if kind & 2 == 0 { (1u8, 3u8) } else { (3, 1) };
    let mut x = Crossing::blank([Port::B(0); 4], kind & 1);
    x.mate[0] = tail;
    x.mate[2] = Port::X(c, back);
    x.mate[back as usize] = Port::X(c, 2);
    x.mate[exit as usize] = head;
    x.out = [false; 4];
    x.out[2] = true;
    x.out[exit as usize] = true;
    x.comp = [comp; 2];
    d.xs.push(x);
    d.set_mate(tail, Port::X(c, 0));
    d.set_mate(head, Port::X(c, exit));
    d
}

/// Sign of the curl that `insert_curl` creates with this `kind`.
pub fn curl_sign(kind: u8) -> i32 {
    let d = insert_curl(&TangleDiagram::crossingless(2, &[(0, 1)], &["a"]), Port::B(0), kind);
    d.crossing_sign(0)
}

/// Insert `s_i s_i^-1` (or its inverse order when `i < 0`) at `pos`.
pub fn braid_r2(word: &[i32], pos: usize, i: i32) -> Vec<i32> {
    let mut w = word.to_vec();
    let pos = pos.min(w.len());
    w.splice(pos..pos, [i, -i]);
    w
}

/// Positions where a third move applies: `a b a` with `|a|`, `|b|`
/// adjacent and all three of the same sign.
pub fn braid_r3_sites(word: &[i32]) -> Vec<usize> {
    (0..word.len().saturating_sub(2))
        .filter(|&k| {
            let (a, b, c) = (word[k], word[k + 1], word[k + 2]);
            a == c && (a.abs() - b.abs()).abs() == 1 && a.signum() == b.signum()
        })
        .collect()
}

/// Apply the third move at a site from [`braid_r3_sites`].
pub fn braid_r3(word: &[i32], k: usize) -> Vec<i32> {
    let mut w = word.to_vec();
    let (a, b) = (w[k], w[k + 1]);
    w[k] = b;
    w[k + 1] = a;
    w[k + 2] = b;
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::build::braid_closure;

    #[test]
    fn curls_are_planar() {
        let t = braid_closure(2, &[1, 1, 1]);
        for kind in 0..4 {
            let d = insert_curl(&t, Port::X(0, 2), kind);
            assert!(d.is_planar());
            d.check_invariants().unwrap();
            assert_eq!(d.n_components(), 1);
            assert_eq!(d.writhe(), 3 + curl_sign(kind) as i64);
        }
        let signs: Vec<i32> = (0..4).map(curl_sign).collect();
        assert!(signs.contains(&1) && signs.contains(&-1));
    }

    #[test]
    fn braid_moves() {
        assert_eq!(braid_r2(&[1, 2], 1, -2), vec![1, -2, 2, 2]);
        assert_eq!(braid_r3_sites(&[1, 2, 1, -2]), vec![0]);
        assert_eq!(braid_r3(&[1, 2, 1], 0), vec![2, 1, 2]);
        assert!(braid_r3_sites(&[1, -2, 1]).is_empty());
    }
}
