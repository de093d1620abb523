//! Link identification by bracket fingerprint against a table of 2-bridge
//! links.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::bracket::{bracket_state_sum, fingerprint};
use super::build::{rational_tangle_by, torus_link};
use super::model::TangleDiagram;
use super::poly::LaurentPoly;
use super::simplify::{simplify, SimplifyMode};
use super::Result;
use crate::frac::{Fraction, TorusLinkParam, TwoBridgeLink};

pub const DEFAULT_BRACKET_BUDGET: usize = 16;

/// Largest determinant in the identification table.
pub const TABLE_MAX_P: u64 = 10;

/// Crossing budget for bracket evaluation: `TANGLEKIT_BUDGET` if set.
pub fn bracket_budget() -> usize {
    std::env::var("TANGLEKIT_BUDGET").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_BRACKET_BUDGET)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum LinkId {
    Unknot,
    TwoBridge { link: TwoBridgeLink },
    Torus2 { k: i64 },
    Unknown { fingerprint: LaurentPoly, components: usize },
}

impl LinkId {
    /// Normal form: `b(1, .)` is the unknot and `b(p, 1)` the `(2, +-p)`
    /// torus link.
    pub fn from_two_bridge(l: TwoBridgeLink) -> LinkId {
        if l.is_unknot() {
            LinkId::Unknot
        } else if let Some(t) = l.as_torus() {
            LinkId::from_torus(t)
        } else {
            LinkId::TwoBridge { link: l }
        }
    }

    pub fn from_torus(t: TorusLinkParam) -> LinkId {
        match t.0 {
            -1..=1 if t.0 != 0 => LinkId::Unknot,
            0 => LinkId::TwoBridge { link: TwoBridgeLink::UNLINK },
            k => {
                // the Hopf link is its own mirror image
                if k.abs() == 2 {
                    LinkId::Torus2 { k: 2 }
                } else {
                    LinkId::Torus2 { k }
                }
            }
        }
    }

    pub fn as_two_bridge(&self) -> Option<TwoBridgeLink> {
        match self {
            LinkId::Unknot => Some(TwoBridgeLink::UNKNOT),
            LinkId::TwoBridge { link } => Some(*link),
            LinkId::Torus2 { k } => Some(TorusLinkParam(*k).to_two_bridge()),
            LinkId::Unknown { .. } => None,
        }
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, LinkId::Unknown { .. })
    }
}

impl fmt::Display for LinkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinkId::Unknot => write!(f, "unknot"),
            LinkId::TwoBridge { link } => write!(f, "{link}"),
            LinkId::Torus2 { k } => write!(f, "T(2,{k})"),
            LinkId::Unknown { fingerprint, components } => {
                write!(f, "unknown ({components} components, {fingerprint})")
            }
        }
    }
}

type Table = HashMap<(LaurentPoly, usize), Option<TwoBridgeLink>>;

fn insert(table: &mut Table, key: (LaurentPoly, usize), link: TwoBridgeLink) {
    match table.get(&key) {
        None => {
            table.insert(key, Some(link));
        }
        Some(Some(l)) if *l == link => {}
        Some(_) => {
            table.insert(key, None);
        }
    }
}

fn key_of(d: &TangleDiagram) -> (LaurentPoly, usize) {
    let b = bracket_state_sum(d, usize::MAX).expect("table diagrams are closed");
    (fingerprint(&b), d.n_components())
}

/// Fingerprints of the unknot, the unlink, the `(2, k)` torus links and
/// `b(p, q)` of both chiralities for `p <= 10`. The 2-bridge entries come
/// from round-up continued-fraction twist diagrams, independent of the
/// round-down diagrams used elsewhere; torus links come from braid
/// closures. Keys shared by different links are marked ambiguous (`None`).
fn table() -> &'static Table {
    static TABLE: OnceLock<Table> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Table::new();
        insert(&mut t, key_of(&TangleDiagram::unlink(1)), TwoBridgeLink::UNKNOT);
        insert(&mut t, key_of(&TangleDiagram::unlink(2)), TwoBridgeLink::UNLINK);
        for k in 2..=TABLE_MAX_P as i64 {
            for s in [k, -k] {
                insert(&mut t, key_of(&torus_link(s)), TorusLinkParam(s).to_two_bridge());
            }
        }
        for p in 2..=TABLE_MAX_P as i64 {
            for q in 1..p {
                if num_gcd(p, q) != 1 {
                    continue;
                }
                for r in [q, -q] {
                    let f = Fraction::new(p, r).expect("p > 0");
                    let d = rational_tangle_by(f, true).numerator().expect("2-string tangle");
                    insert(&mut t, key_of(&d), TwoBridgeLink::from_residue(p as u64, r));
                }
            }
        }
        t
    })
}

fn num_gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        num_gcd(b, a % b)
    }
}

/// Number of table keys claimed by more than one link.
pub fn table_collisions() -> usize {
    table().values().filter(|v| v.is_none()).count()
}

/// Identify a closed diagram: simplify freely, then match the bracket
/// fingerprint and component count against the table.
pub fn identify_link(link: &TangleDiagram, budget: usize) -> Result<LinkId> {
    let s = simplify(link, SimplifyMode::Free);
    let b = bracket_state_sum(&s, budget)?;
    let key = (fingerprint(&b), s.n_components());
    Ok(match table().get(&key) {
        Some(Some(l)) => LinkId::from_two_bridge(*l),
        _ => LinkId::Unknown { fingerprint: key.0, components: key.1 },
    })
}
