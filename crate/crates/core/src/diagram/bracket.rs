//! Kauffman bracket by two independent methods, the Jones normalization,
//! and the rational-tangle fraction read off the tangle bracket.
//!
//! Smoothing convention: with `u` an under slot, the A-smoothing joins
//! slots `(u, u+1)` and `(u+2, u+3)`, the B-smoothing the other two pairs.

use std::collections::HashMap;

use super::model::{Port, TangleDiagram};
use super::poly::LaurentPoly;
use super::{DiagramError, Result};
use crate::frac::Fraction;

/// Slot joined to `s` by the chosen smoothing of a crossing.
fn partner(over: u8, s: u8, a_smoothing: bool) -> u8 {
    let u = 1 - over;
    let d = (s + 4 - u) % 4;
    let d2 = if a_smoothing { d ^ 1 } else { (((d + 3) % 4) ^ 1) + 1 };
    (u + d2 % 4) % 4
}

fn delta_powers(max: usize) -> Vec<LaurentPoly> {
    let d = LaurentPoly::delta();
    let mut v = vec![LaurentPoly::one()];
    for i in 1..=max {
        let next = &v[i - 1] * &d;
        v.push(next);
    }
    v
}

fn port_index(p: Port, n: usize) -> usize {
    match p {
        Port::X(c, s) => 4 * c + s as usize,
        Port::B(j) => 4 * n + j,
    }
}

/// Smoothing of every crossing according to `mask` (bit set = A).
/// Returns the loop count and, for tangles, the boundary pairing.
fn smooth_state(d: &TangleDiagram, mates: &[usize], mask: u64, seen: &mut [bool]) -> (usize, Vec<usize>) {
    let n = d.xs.len();
    let b = d.bd.len();
    seen.iter_mut().for_each(|x| *x = false);
    let part = |i: usize| -> usize {
        let c = i / 4;
        let s = (i % 4) as u8;
        4 * c + partner(d.xs[c].over, s, mask >> c & 1 == 1) as usize
    };
    let mut pairing = vec![usize::MAX; b];
    for j in 0..b {
        if pairing[j] != usize::MAX {
            continue;
        }
        let mut i = mates[4 * n + j];
        while i < 4 * n {
            seen[i] = true;
            let p = part(i);
            seen[p] = true;
            i = mates[p];
        }
        let k = i - 4 * n;
        pairing[j] = k;
        pairing[k] = j;
    }
    let mut loops = 0;
    for start in 0..4 * n {
        if seen[start] {
            continue;
        }
        loops += 1;
        let mut i = start;
        loop {
            seen[i] = true;
            let p = part(i);
            seen[p] = true;
            i = mates[p];
            if i == start {
                break;
            }
        }
    }
    (loops, pairing)
}

fn mate_table(d: &TangleDiagram) -> Vec<usize> {
    let n = d.xs.len();
    let mut m = vec![0; 4 * n + d.bd.len()];
    for (c, x) in d.xs.iter().enumerate() {
        for s in 0..4 {
            m[4 * c + s] = port_index(x.mate[s], n);
        }
    }
    for (j, e) in d.bd.iter().enumerate() {
        m[4 * n + j] = port_index(e.mate, n);
    }
    m
}

/// Sum over states of `A^(#A - #B) delta^(loops)`, grouped by boundary
/// pairing.
fn state_sums(d: &TangleDiagram) -> HashMap<Vec<usize>, LaurentPoly> {
    let n = d.xs.len();
    let mates = mate_table(d);
    let mut seen = vec![false; 4 * n];
    let mut counts: HashMap<(Vec<usize>, i32, usize), i64> = HashMap::new();
    for mask in 0..(1u64 << n) {
        let (loops, pairing) = smooth_state(d, &mates, mask, &mut seen);
        let a = mask.count_ones() as i32;
        let e = a - (n as i32 - a);
        *counts.entry((pairing, e, loops)).or_insert(0) += 1;
    }
    let max_loops = counts.keys().map(|k| k.2).max().unwrap_or(0) + d.loops.len();
    let dp = delta_powers(max_loops);
    let mut out: HashMap<Vec<usize>, LaurentPoly> = HashMap::new();
    for ((pairing, e, loops), c) in counts {
        let term = dp[loops + d.loops.len()].shift(e).scale(c);
        let entry = out.entry(pairing).or_default();
        *entry = std::mem::take(entry) + term;
    }
    out
}

fn check_budget(d: &TangleDiagram, budget: usize) -> Result<()> {
    if d.n_crossings() > budget {
        return Err(DiagramError::BudgetExceeded { crossings: d.n_crossings(), budget });
    }
    Ok(())
}

/// Divide by `delta = -A^-2 (A^4 + 1)`; panics if the division is not exact.
fn div_delta(p: &LaurentPoly) -> LaurentPoly {
    // p / delta = -A^2 p / (A^4 + 1)
    let mut rem = p.shift(2).scale(-1);
    let mut q = LaurentPoly::zero();
    while let Some(e) = rem.max_exp() {
        let c = rem.coeff(e);
        q.add_term(c, e - 4);
        rem = rem - LaurentPoly::from_terms([(e, c), (e - 4, c)]);
        assert!(rem.min_exp().is_none_or(|m| m >= p.min_exp().unwrap() - 8), "not divisible by delta");
    }
    q
}

/// Bracket of a closed diagram by summing over all `2^n` states,
/// normalized so the crossingless circle has bracket 1.
pub fn bracket_state_sum(d: &TangleDiagram, budget: usize) -> Result<LaurentPoly> {
    if !d.is_closed() {
        return Err(DiagramError::WrongEndpointCount { expected: 0, found: d.n_boundary() });
    }
    check_budget(d, budget)?;
    if d.n_crossings() == 0 && d.loops.is_empty() {
        return Ok(LaurentPoly::one());
    }
    let total = state_sums(d).remove(&Vec::new()).unwrap_or_default();
    Ok(div_delta(&total))
}

/// Bracket of a closed diagram by recursive skein expansion, memoized on
/// the connectivity of the crossings not yet smoothed.
pub fn bracket_skein(d: &TangleDiagram, budget: usize) -> Result<LaurentPoly> {
    if !d.is_closed() {
        return Err(DiagramError::WrongEndpointCount { expected: 0, found: d.n_boundary() });
    }
    check_budget(d, budget)?;
    if d.n_crossings() == 0 && d.loops.is_empty() {
        return Ok(LaurentPoly::one());
    }
    let overs: Vec<u8> = d.xs.iter().map(|x| x.over).collect();
    let mates: Vec<u16> = mate_table(d).into_iter().map(|m| m as u16).collect();
    let mut memo: HashMap<(usize, Vec<u16>), LaurentPoly> = HashMap::new();
    let delta = LaurentPoly::delta();
    let body = skein(0, &mates, &overs, &delta, &mut memo);
    let free = (0..d.loops.len()).fold(LaurentPoly::one(), |acc, _| &acc * &delta);
    Ok(div_delta(&(&body * &free)))
}

/// `mates` covers ports `4k .. 4n`, stored with absolute indices.
fn skein(
    k: usize,
    mates: &[u16],
    overs: &[u8],
    delta: &LaurentPoly,
    memo: &mut HashMap<(usize, Vec<u16>), LaurentPoly>,
) -> LaurentPoly {
    if k == overs.len() {
        return LaurentPoly::one();
    }
    let key = (k, mates.to_vec());
    if let Some(p) = memo.get(&key) {
        return p.clone();
    }
    let base = 4 * k;
    let mut result = LaurentPoly::zero();
    for a_smoothing in [true, false] {
        let mut next: Vec<u16> = mates[4..].to_vec();
        let local = |i: usize| i >= base && i < base + 4;
        let mut seen = [false; 4];
        let mut loops = 0;
        for s in 0..4 {
            if seen[s] || local(mates[s] as usize) {
                continue;
            }
            // Open chain through crossing k starting at an external edge.
            let start_ext = mates[s] as usize;
            let mut cur = s;
            let end_ext = loop {
                seen[cur] = true;
                let p = partner(overs[k], cur as u8, a_smoothing) as usize;
                seen[p] = true;
                let m = mates[p] as usize;
                if local(m) {
                    cur = m - base;
                } else {
                    break m;
                }
            };
            next[start_ext - base - 4] = end_ext as u16;
            next[end_ext - base - 4] = start_ext as u16;
        }
        for s in 0..4 {
            if seen[s] {
                continue;
            }
            loops += 1;
            let mut cur = s;
            while !seen[cur] {
                seen[cur] = true;
                let p = partner(overs[k], cur as u8, a_smoothing) as usize;
                seen[p] = true;
                cur = mates[p] as usize - base;
            }
        }
        let sub = skein(k + 1, &next, overs, delta, memo);
        let mut term = sub.shift(if a_smoothing { 1 } else { -1 });
        for _ in 0..loops {
            term = &term * delta;
        }
        result = result + term;
    }
    memo.insert(key, result.clone());
    result
}

/// Bracket of a closed diagram (state sum), subject to a crossing budget.
pub fn kauffman_bracket(d: &TangleDiagram, budget: usize) -> Result<LaurentPoly> {
    bracket_state_sum(d, budget)
}

/// `(-A^3)^(-w) <D>` with `w` the writhe of the stored orientation.
pub fn jones(d: &TangleDiagram, budget: usize) -> Result<LaurentPoly> {
    let b = kauffman_bracket(d, budget)?;
    Ok(b.times_neg_a3(-(d.writhe() as i32)))
}

/// Bracket rescaled by a power of `-A^3` so its lowest exponent lies in
/// `0..3`. Invariant under all three Reidemeister moves and independent of
/// orientation.
pub fn fingerprint(bracket: &LaurentPoly) -> LaurentPoly {
    match bracket.min_exp() {
        None => LaurentPoly::zero(),
        Some(e) => bracket.times_neg_a3(-e.div_euclid(3)),
    }
}

/// Element of `Z[A]/(A^4 + 1)`, i.e. `A` evaluated at a primitive 8th root
/// of unity.
type Cyclo8 = [i64; 4];

fn eval_zeta8(p: &LaurentPoly) -> Cyclo8 {
    let mut v = [0i64; 4];
    for (e, c) in p.terms() {
        let r = e.rem_euclid(8) as usize;
        if r < 4 {
            v[r] += c;
        } else {
            v[r - 4] -= c;
        }
    }
    v
}

/// Bracket of a 2-string tangle as `f <[0]> + g <[inf]>`.
pub fn tangle_bracket(d: &TangleDiagram, budget: usize) -> Result<(LaurentPoly, LaurentPoly)> {
    d.expect_strings(2)?;
    check_budget(d, budget)?;
    let sums = state_sums(d);
    let zero = sums.get(&vec![1, 0, 3, 2]).cloned().unwrap_or_default();
    let inf = sums.get(&vec![3, 2, 1, 0]).cloned().unwrap_or_default();
    Ok((zero, inf))
}

/// Fraction of a 2-string tangle diagram from its bracket:
/// `F = i g / f` at `A = e^(i pi / 4)`, where `<T> = f <[0]> + g <[inf]>`.
/// Exact for rational tangles; `None` when the ratio is not rational.
pub fn diagram_fraction(d: &TangleDiagram, budget: usize) -> Result<Option<Fraction>> {
    let (f, g) = tangle_bracket(d, budget)?;
    let f = eval_zeta8(&f);
    // i g = A^2 g
    let g = eval_zeta8(&g.shift(2));
    if f == [0; 4] {
        return Ok((g != [0; 4]).then_some(Fraction::INFINITY));
    }
    let k = f.iter().position(|&x| x != 0).unwrap();
    let (num, den) = (g[k], f[k]);
    let ok = (0..4).all(|i| g[i] * den == f[i] * num);
    Ok(if ok { Fraction::new(num, den).ok() } else { None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::build::braid_closure;

    #[test]
    fn partner_pairs() {
        // over axis 0: under slots 1, 3; A joins (1,2) and (3,0)
        assert_eq!(partner(0, 1, true), 2);
        assert_eq!(partner(0, 0, true), 3);
        assert_eq!(partner(0, 1, false), 0);
        assert_eq!(partner(0, 2, false), 3);
        // over axis 1: under slot 0; A joins (0,1), (2,3)
        assert_eq!(partner(1, 0, true), 1);
        assert_eq!(partner(1, 3, true), 2);
        assert_eq!(partner(1, 0, false), 3);
        assert_eq!(partner(1, 1, false), 2);
    }

    #[test]
    fn hopf_bracket() {
        let hopf = braid_closure(2, &[1, 1]);
        let want = LaurentPoly::from_terms([(4, -1), (-4, -1)]);
        assert_eq!(bracket_state_sum(&hopf, 16).unwrap(), want);
        assert_eq!(bracket_skein(&hopf, 16).unwrap(), want);
    }

    #[test]
    fn right_trefoil() {
        let t = braid_closure(2, &[1, 1, 1]);
        assert_eq!(t.writhe(), 3);
        let want = LaurentPoly::from_terms([(-7, 1), (-3, -1), (5, -1)]);
        assert_eq!(bracket_state_sum(&t, 16).unwrap(), want);
        assert_eq!(bracket_skein(&t, 16).unwrap(), want);
        // V = t + t^3 - t^4 with t = A^-4
        assert_eq!(jones(&t, 16).unwrap(), LaurentPoly::from_terms([(-4, 1), (-12, 1), (-16, -1)]));
    }

    #[test]
    fn unknot_and_unlink() {
        assert_eq!(bracket_state_sum(&TangleDiagram::unlink(1), 16).unwrap(), LaurentPoly::one());
        assert_eq!(bracket_skein(&TangleDiagram::unlink(2), 16).unwrap(), LaurentPoly::delta());
        let curl = braid_closure(1, &[]);
        assert_eq!(bracket_state_sum(&curl, 16).unwrap(), LaurentPoly::one());
    }

    #[test]
    fn budget() {
        let t = braid_closure(2, &[1, 1, 1]);
        assert!(matches!(bracket_state_sum(&t, 2), Err(DiagramError::BudgetExceeded { .. })));
    }
}
