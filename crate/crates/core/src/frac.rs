//! Exact rational tangle arithmetic and 2-bridge link classification.
//!
//! A rational tangle is named by an extended rational `p/q`, with `1/0` the
//! infinity tangle. Two operations grow a tangle by twisting: an integral
//! (horizontal) twist adds `n/1`, and a vertical twist sends `p/q` to
//! `p/(q + v p)`. The closures used by the experiment equations reduce to
//! numerator closures of such fractions, which are 2-bridge links.
//!
//! Sign convention: the integer tangle `n > 0` closes to the positive
//! `(2, n)` torus link `Torus2(n)`, and `N(X + 1/0)` is the numerator
//! closure of the rotated fraction `-1/X`. With these two choices the
//! deletion pair `N(X + 0/1) = unknot`, `N(X + 1/0) = Torus2(4)` has the
//! unique solution `X = -1/4`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FracError {
    #[error("0/0 does not name a tangle")]
    ZeroOverZero,
    #[error("(2,{0}) is not a torus link product; need |L| >= 2")]
    NotTorusProduct(i64),
    #[error("no integer solution: {0}")]
    NoSolution(String),
    #[error("parity violation: {0}")]
    ParityViolation(String),
    #[error("unsupported case: {0}")]
    UnsupportedCase(String),
    #[error("filler {0} is neither integral nor of the form 1/v")]
    UnsupportedFiller(Fraction),
    #[error("arithmetic overflow")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, FracError>;

fn gcd(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Extended rational `p/q` in lowest terms, `q >= 0`, with `1/0` the only
/// representative of infinity and `0/1` the only representative of zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FractionRepr", into = "FractionRepr")]
pub struct Fraction {
    p: i64,
    q: i64,
}

#[derive(Serialize, Deserialize)]
struct FractionRepr {
    p: i64,
    q: i64,
}

impl TryFrom<FractionRepr> for Fraction {
    type Error = FracError;
    fn try_from(r: FractionRepr) -> Result<Self> {
        Fraction::new(r.p, r.q)
    }
}

impl From<Fraction> for FractionRepr {
    fn from(f: Fraction) -> Self {
        FractionRepr { p: f.p, q: f.q }
    }
}

impl Fraction {
    pub const ZERO: Fraction = Fraction { p: 0, q: 1 };
    pub const INFINITY: Fraction = Fraction { p: 1, q: 0 };

    /// Reduce `p/q` to canonical form. Every `k/0` is the infinity tangle.
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if p == 0 && q == 0 {
            return Err(FracError::ZeroOverZero);
        }
        if q == 0 {
            return Ok(Self::INFINITY);
        }
        if p == 0 {
            return Ok(Self::ZERO);
        }
        let g = gcd(p, q);
        let (mut p, mut q) = (p / g, q / g);
        if q < 0 {
            p = -p;
            q = -q;
        }
        Ok(Fraction { p, q })
    }

    pub fn integer(n: i64) -> Self {
        Fraction { p: n, q: 1 }
    }

    /// The vertical tangle `1/v`; `1/0` for `v = 0`.
    pub fn vertical(v: i64) -> Self {
        Fraction::new(1, v).expect("1/v is never 0/0")
    }

    pub fn numer(&self) -> i64 {
        self.p
    }

    pub fn denom(&self) -> i64 {
        self.q
    }

    pub fn is_infinite(&self) -> bool {
        self.q == 0
    }

    pub fn is_integral(&self) -> bool {
        self.q == 1
    }

    /// `Some(v)` when this is `1/v` (including `1/0`).
    pub fn as_vertical(&self) -> Option<i64> {
        match self.p {
            1 => Some(self.q),
            -1 => Some(-self.q),
            _ => None,
        }
    }

    /// `q/p`.
    pub fn invert(&self) -> Self {
        Fraction::new(self.q, self.p).expect("canonical fractions are never 0/0")
    }

    /// Fraction of the tangle rotated a quarter turn: `-1/F`.
    pub fn rotate(&self) -> Self {
        Fraction::new(-self.q, self.p).expect("canonical fractions are never 0/0")
    }

    pub fn neg(&self) -> Self {
        Fraction::new(-self.p, self.q).expect("canonical fractions are never 0/0")
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl std::str::FromStr for Fraction {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        let (p, q) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s, "1"),
        };
        let p: i64 = p.parse().map_err(|e| format!("bad numerator {p:?}: {e}"))?;
        let q: i64 = q.parse().map_err(|e| format!("bad denominator {q:?}: {e}"))?;
        Fraction::new(p, q).map_err(|e| e.to_string())
    }
}

/// `p/q + n = (p + nq)/q`; the infinity tangle absorbs integral twists.
pub fn add_integral(t: Fraction, n: i64) -> Fraction {
    Fraction::new(t.p + n * t.q, t.q).expect("sum with q >= 0 and gcd 1 is never 0/0")
}

/// Add `v` vertical twists: `p/q` becomes `p/(q + v p)`.
pub fn add_vertical(t: Fraction, v: i64) -> Fraction {
    Fraction::new(t.p, t.q + v * t.p).expect("vertical sum is never 0/0")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn of(x: i64) -> Sign {
        if x < 0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// Unoriented 2-bridge link `b(p, q)` in canonical form.
///
/// `p = 0` is the 2-component unlink and `p = 1` the unknot (both with
/// `q = 0`, `mirror = +`). Otherwise `0 < q < p` is the least of
/// `{r, r^-1 mod p}` for the residue `r` of the link or of its mirror,
/// whichever gives the smaller value; `mirror = -` records that the mirror
/// residue was used. Amphichiral links always carry `+`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TwoBridgeLink {
    pub p: u64,
    pub q: u64,
    pub mirror: Sign,
}

fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    let (mut old_r, mut r) = (a.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m))
}

impl TwoBridgeLink {
    pub const UNLINK: TwoBridgeLink = TwoBridgeLink { p: 0, q: 0, mirror: Sign::Plus };
    pub const UNKNOT: TwoBridgeLink = TwoBridgeLink { p: 1, q: 0, mirror: Sign::Plus };

    /// Canonical form of the link with determinant `p` and residue `r`.
    pub fn from_residue(p: u64, r: i64) -> Self {
        match p {
            0 => Self::UNLINK,
            1 => Self::UNKNOT,
            _ => {
                let m = p as i64;
                let r = r.rem_euclid(m);
                let inv = mod_inverse(r, m).expect("2-bridge residue must be a unit mod p");
                let own = r.min(inv);
                let mr = (m - r) % m;
                let minv = (m - inv) % m;
                let mirrored = mr.min(minv);
                if own <= mirrored {
                    TwoBridgeLink { p, q: own as u64, mirror: Sign::Plus }
                } else {
                    TwoBridgeLink { p, q: mirrored as u64, mirror: Sign::Minus }
                }
            }
        }
    }

    /// A representative residue `r` such that this link is `N(p/r)`.
    pub fn residue(&self) -> i64 {
        match self.mirror {
            Sign::Plus => self.q as i64,
            Sign::Minus => -(self.q as i64),
        }
    }

    pub fn mirror_image(&self) -> Self {
        Self::from_residue(self.p, -self.residue())
    }

    pub fn components(&self) -> usize {
        if self.p.is_multiple_of(2) {
            2
        } else {
            1
        }
    }

    pub fn is_unknot(&self) -> bool {
        self.p == 1
    }

    /// The `(2, k)` torus link, when this is one (`q = 1`, `p >= 2`).
    pub fn as_torus(&self) -> Option<TorusLinkParam> {
        (self.p >= 2 && self.q == 1).then(|| TorusLinkParam(self.p as i64 * self.mirror.as_i64()))
    }
}

impl fmt::Display for TwoBridgeLink {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.p {
            0 => write!(f, "unlink"),
            1 => write!(f, "unknot"),
            _ => {
                let m = if self.mirror == Sign::Minus { "*" } else { "" };
                write!(f, "b({},{}){}", self.p, self.q, m)
            }
        }
    }
}

/// The `(2, k)` torus link or knot; the sign of `k` carries handedness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TorusLinkParam(pub i64);

impl TorusLinkParam {
    pub fn to_two_bridge(self) -> TwoBridgeLink {
        TwoBridgeLink::from_residue(self.0.unsigned_abs(), self.0.signum())
    }

    pub fn is_knot(self) -> bool {
        self.0 % 2 != 0
    }
}

impl fmt::Display for TorusLinkParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T(2,{})", self.0)
    }
}

/// `N(p/q)`, the 2-bridge link `b(|p|, q sign(p))`.
pub fn numerator_closure(t: Fraction) -> TwoBridgeLink {
    TwoBridgeLink::from_residue(t.p.unsigned_abs(), t.q * t.p.signum())
}

/// `D(p/q) = N(-q/p)`.
pub fn denominator_closure(t: Fraction) -> TwoBridgeLink {
    numerator_closure(t.rotate())
}

/// `N(t + filler)` for fillers that are integral (`n/1`) or vertical (`1/v`).
///
/// An integral filler twists the right-hand pair: `N(t + n) = N(t + n/1)`.
/// A vertical filler's twists slide onto the bottom pair of `t`, leaving the
/// infinity tangle, so `N(t + 1/v) = D(add_vertical(t, v))`.
pub fn closure_with(t: Fraction, filler: Fraction) -> Result<TwoBridgeLink> {
    if filler.is_integral() {
        Ok(numerator_closure(add_integral(t, filler.p)))
    } else if let Some(v) = filler.as_vertical() {
        Ok(denominator_closure(add_vertical(t, v)))
    } else {
        Err(FracError::UnsupportedFiller(filler))
    }
}

/// Unique solution of the deletion pair, with the bounded-scan sanity check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeletionSolution {
    pub fraction: Fraction,
    /// Every reduced `p/q` with `|p|, |q| <= bound` satisfying both
    /// equations; uniqueness means this holds exactly `fraction`.
    pub certificate: Vec<Fraction>,
    pub bound: i64,
}

pub const CERTIFICATE_BOUND: i64 = 50;

/// All reduced fractions with `|p|, |q| <= bound`, plus `1/0`.
pub fn bounded_fractions(bound: i64) -> impl Iterator<Item = Fraction> {
    let finite = (-bound..=bound)
        .flat_map(move |p| (1..=bound).filter_map(move |q| (gcd(p, q) == 1).then_some(Fraction { p, q })));
    finite.chain(std::iter::once(Fraction::INFINITY))
}

/// Brute-force scan for `X` with `N(X + 0/1) = unknot` and
/// `N(X + 1/0) = (2, L)`.
pub fn scan_deletion_pair(product: TorusLinkParam, bound: i64) -> Vec<Fraction> {
    let target = product.to_two_bridge();
    bounded_fractions(bound)
        .filter(|&x| {
            closure_with(x, Fraction::ZERO).map(|l| l.is_unknot()).unwrap_or(false)
                && closure_with(x, Fraction::INFINITY).map(|l| l == target).unwrap_or(false)
        })
        .collect()
}

/// Solve `N(X + 0/1) = unknot`, `N(X + 1/0) = (2, L)`: `X = -1/L`.
pub fn solve_deletion_pair(product: TorusLinkParam) -> Result<DeletionSolution> {
    if product.0.abs() < 2 {
        return Err(FracError::NotTorusProduct(product.0));
    }
    let fraction = Fraction::new(-1, product.0)?;
    let certificate = scan_deletion_pair(product, CERTIFICATE_BOUND);
    Ok(DeletionSolution { fraction, certificate, bound: CERTIFICATE_BOUND })
}

/// Integer `v` with `N(O + 1/v) = product`.
///
/// `N(O + 1/v)` has determinant `|q + v p|`, so at most two values of `v`
/// are candidates; the one whose closure matches the product's handedness
/// is returned.
pub fn solve_inversion_v(o: Fraction, product: TorusLinkParam) -> Result<i64> {
    let target = product.to_two_bridge();
    let k = product.0.abs();
    let mut candidates: Vec<i64> = Vec::new();
    if o.p == 0 {
        // N(0 + 1/v) is always the unknot.
        if target.is_unknot() {
            candidates.push(0);
        }
    } else {
        for rhs in [k, -k] {
            let num = rhs - o.q;
            if num % o.p == 0 {
                candidates.push(num / o.p);
            }
        }
    }
    candidates.sort_by_key(|v| (v.abs(), *v));
    candidates.dedup();
    candidates
        .into_iter()
        .find(|&v| closure_with(o, Fraction::vertical(v)).map(|l| l == target).unwrap_or(false))
        .ok_or_else(|| FracError::NoSolution(format!("N({o} + 1/v) = {product} has no integer v")))
}

/// Result of the in trans deletion analysis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InTransSolution {
    /// `T - s23`.
    pub remainder: Fraction,
    /// Admissible `d_t`, ascending. Two values when the product is a Hopf
    /// link of unknown handedness.
    pub d_t: Vec<i64>,
}

/// In trans deletion with in cis products `(2, L_i)` and in trans product
/// `(2, L_t)`, normal framing.
///
/// With `O_i = -1/L_i`, the capped tangles force twist counts `n_j + n_k =
/// -L_i`; the strings left after removing `s23` meet only at `c_1`, so
/// `T - s23 = 1/n_1` with `n_1 = (L_1 - L_2 - L_3)/2`. Closing with `1/d_t`
/// gives `T(2, -(n_1 + d_t))`.
pub fn solve_in_trans(l1: i64, l2: i64, l3: i64, lt: i64) -> Result<InTransSolution> {
    for (i, l) in [l1, l2, l3].into_iter().enumerate() {
        if l.abs() == 2 {
            return Err(FracError::UnsupportedCase(format!(
                "|L_{}| = 2 splits into cases that are not handled",
                i + 1
            )));
        }
        if l.abs() < 2 {
            return Err(FracError::NotTorusProduct(l));
        }
    }
    if lt.abs() < 2 {
        return Err(FracError::NotTorusProduct(lt));
    }
    let twice = l1 - l2 - l3;
    if twice % 2 != 0 {
        return Err(FracError::ParityViolation(format!("L2 + L3 - L1 = {} is odd", l2 + l3 - l1)));
    }
    let n1 = twice / 2;
    let remainder = Fraction::vertical(n1);
    let mut d_t: Vec<i64> = if lt.abs() == 2 { vec![-n1 - 2, -n1 + 2] } else { vec![-n1 - lt] };
    d_t.sort_unstable();
    Ok(InTransSolution { remainder, d_t })
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order on the extended rationals with `1/0` largest.
impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.q, other.q) {
            (0, 0) => Ordering::Equal,
            (0, _) => Ordering::Greater,
            (_, 0) => Ordering::Less,
            _ => ((self.p as i128) * (other.q as i128)).cmp(&((other.p as i128) * (self.q as i128))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: i64, q: i64) -> Fraction {
        Fraction::new(p, q).unwrap()
    }

    #[test]
    fn reduce_normalizes() {
        assert_eq!(f(2, -8), f(-1, 4));
        assert_eq!((f(2, -8).numer(), f(2, -8).denom()), (-1, 4));
        assert_eq!(f(1, 0), Fraction::INFINITY);
        assert_eq!(f(-3, 0), Fraction::INFINITY);
        assert_eq!(f(0, -7), Fraction::ZERO);
        assert_eq!(Fraction::new(0, 0), Err(FracError::ZeroOverZero));
    }

    #[test]
    fn parse_fraction() {
        assert_eq!("-1/4".parse::<Fraction>().unwrap(), f(-1, 4));
        assert_eq!("3".parse::<Fraction>().unwrap(), f(3, 1));
        assert!("0/0".parse::<Fraction>().is_err());
    }

    #[test]
    fn twists() {
        assert_eq!(add_integral(f(-1, 4), 0), f(-1, 4));
        assert_eq!(add_integral(f(1, 3), 2), f(7, 3));
        assert_eq!(add_integral(Fraction::INFINITY, 5), Fraction::INFINITY);
        assert_eq!(add_vertical(f(-1, 4), 0), f(-1, 4));
        assert_eq!(add_vertical(f(-1, 2), -1), f(-1, 3));
        assert_eq!(add_vertical(f(1, 2), 1), f(1, 3));
    }

    #[test]
    fn closures() {
        assert!(numerator_closure(f(-1, 4)).is_unknot());
        assert_eq!(numerator_closure(f(4, 1)).as_torus(), Some(TorusLinkParam(4)));
        assert_eq!(numerator_closure(f(0, 1)), TwoBridgeLink::UNLINK);
        assert_eq!(numerator_closure(Fraction::INFINITY), TwoBridgeLink::UNKNOT);
        let b52 = numerator_closure(f(5, 2));
        assert_eq!((b52.p, b52.q), (5, 2));
        assert_eq!(closure_with(f(-1, 4), Fraction::INFINITY).unwrap().as_torus(), Some(TorusLinkParam(4)));
        assert_eq!(closure_with(f(-1, 4), f(1, 1)).unwrap().as_torus(), Some(TorusLinkParam(3)));
        assert_eq!(closure_with(f(-1, 4), f(-1, 1)).unwrap().as_torus(), Some(TorusLinkParam(5)));
        assert_eq!(closure_with(f(-1, 2), f(-1, 1)).unwrap().as_torus(), Some(TorusLinkParam(3)));
        assert!(matches!(closure_with(f(1, 2), f(2, 3)), Err(FracError::UnsupportedFiller(_))));
    }

    #[test]
    fn two_bridge_canonical() {
        // b(5,2) = b(5,3): figure-eight is amphichiral.
        assert_eq!(TwoBridgeLink::from_residue(5, 2), TwoBridgeLink::from_residue(5, 3));
        assert_eq!(TwoBridgeLink::from_residue(5, 2).mirror, Sign::Plus);
        // trefoil is chiral
        let t = TwoBridgeLink::from_residue(3, 1);
        assert_ne!(t, t.mirror_image());
        assert_eq!(t.mirror_image().mirror, Sign::Minus);
        // Schubert: 7/2 and 7/4 agree since 2*4 = 8 = 1 mod 7
        assert_eq!(TwoBridgeLink::from_residue(7, 2), TwoBridgeLink::from_residue(7, 4));
        assert_eq!(TorusLinkParam(-3).to_two_bridge(), t.mirror_image());
    }

    #[test]
    fn deletion_pair() {
        assert_eq!(solve_deletion_pair(TorusLinkParam(4)).unwrap().fraction, f(-1, 4));
        assert_eq!(solve_deletion_pair(TorusLinkParam(2)).unwrap().fraction, f(-1, 2));
        assert_eq!(solve_deletion_pair(TorusLinkParam(6)).unwrap().fraction, f(-1, 6));
        assert_eq!(solve_deletion_pair(TorusLinkParam(1)), Err(FracError::NotTorusProduct(1)));
        assert_eq!(solve_deletion_pair(TorusLinkParam(4)).unwrap().certificate, vec![f(-1, 4)]);
    }

    #[test]
    fn inversion() {
        let o = f(-1, 4);
        assert_eq!(solve_inversion_v(o, TorusLinkParam(3)), Ok(1));
        assert_eq!(solve_inversion_v(o, TorusLinkParam(5)), Ok(-1));
        // the left-handed 5-torus knot would need nine trapped twists
        assert_eq!(solve_inversion_v(o, TorusLinkParam(-5)), Ok(9));
        assert_eq!(solve_inversion_v(f(-1, 2), TorusLinkParam(3)), Ok(-1));
        assert!(solve_inversion_v(Fraction::ZERO, TorusLinkParam(3)).is_err());
    }

    #[test]
    fn in_trans() {
        let s = solve_in_trans(4, 4, 4, 2).unwrap();
        assert_eq!(s.remainder, f(-1, 2));
        assert_eq!(s.d_t, vec![0, 4]);
        assert!(matches!(solve_in_trans(4, 4, 2, 2), Err(FracError::UnsupportedCase(_))));
        assert!(matches!(solve_in_trans(5, 4, 4, 2), Err(FracError::ParityViolation(_))));
        assert_eq!(solve_in_trans(6, 4, 4, 3).unwrap().d_t, vec![-2]);
    }
}
