//! Linking numbers of closed components.

use super::model::{ComponentKind, TangleDiagram};
use super::{DiagramError, Result};
use crate::frac::Fraction;

/// Half the signed count of crossings between two closed components.
pub fn linking_number(link: &TangleDiagram, a: usize, b: usize) -> Result<i64> {
    let comps = link.components();
    for &c in &[a, b] {
        match comps.get(c).map(|i| i.kind) {
            Some(ComponentKind::Closed) | Some(ComponentKind::FreeLoop) => {}
            Some(ComponentKind::Open { .. }) => {
                return Err(DiagramError::BadComponents(format!("{} is not closed", comps[c].label)))
            }
            None => return Err(DiagramError::BadComponents(format!("no component {c}"))),
        }
    }
    if a == b {
        return Err(DiagramError::BadComponents(format!("{} given twice", comps[a].label)));
    }
    let total: i64 = link
        .xs
        .iter()
        .enumerate()
        .filter(|(_, x)| (x.comp[0] == a && x.comp[1] == b) || (x.comp[0] == b && x.comp[1] == a))
        .map(|(c, _)| link.crossing_sign(c) as i64)
        .sum();
    if total % 2 != 0 {
        return Err(DiagramError::OddLinking(total));
    }
    Ok(total / 2)
}

fn comp_containing(d: &TangleDiagram, needle: &str) -> Result<usize> {
    d.labels()
        .iter()
        .position(|l| l.split(['.', '+']).any(|part| part == needle))
        .ok_or_else(|| DiagramError::UnknownLabel(needle.into()))
}

/// Linking number of `x_ab ∪ s_ab` with `x_cd ∪ s_cd` for two strings of a
/// 3-string tangle, each closed along its own boundary arc and oriented by
/// the tangle circle.
pub fn pairwise_linking_number(d: &TangleDiagram, s1: &str, s2: &str) -> Result<i64> {
    d.expect_strings(3)?;
    let mut t = d.clone();
    t.orient_by_circle();
    let pairs: Vec<(usize, usize)> = t
        .components()
        .into_iter()
        .filter_map(|c| match c.kind {
            ComponentKind::Open { tail, head } => Some((tail, head)),
            _ => None,
        })
        .collect();
    t.join_boundary(&pairs);
    linking_number(&t, comp_containing(&t, s1)?, comp_containing(&t, s2)?)
}

/// Linking number of `x_jk ∪ s_jk` with `ŝ_i ∪ x̂_i`: the two components of
/// the closure `N(T ∪ c_i + 1/0)`, oriented by the tangle circle.
pub fn capped_linking_number(d: &TangleDiagram, i: u8) -> Result<i64> {
    let mut t = d.clone();
    t.orient_by_circle();
    let link = t.cap(i)?.close_with(Fraction::INFINITY)?;
    let capped = link
        .labels()
        .iter()
        .position(|l| l.contains(&format!(".c{i}.")))
        .ok_or_else(|| DiagramError::BadComponents("capped string not found".into()))?;
    let other = (0..link.n_components())
        .find(|&c| c != capped)
        .ok_or_else(|| DiagramError::BadComponents("closure has one component".into()))?;
    linking_number(&link, capped, other)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::build::{braid_closure, trivial_tangle3};

    #[test]
    fn unlink_and_hopf() {
        let u = TangleDiagram::unlink(2);
        assert_eq!(linking_number(&u, 0, 1).unwrap(), 0);
        let h = braid_closure(2, &[1, 1]);
        assert_eq!(linking_number(&h, 0, 1).unwrap(), 1);
        let h = braid_closure(2, &[-1, -1]);
        assert_eq!(linking_number(&h, 0, 1).unwrap(), -1);
        assert!(linking_number(&h, 0, 0).is_err());
    }

    #[test]
    fn trivial_tangle_unlinked() {
        let t = trivial_tangle3();
        assert_eq!(pairwise_linking_number(&t, "s12", "s23").unwrap(), 0);
        assert_eq!(capped_linking_number(&t, 1).unwrap(), 0);
    }
}
