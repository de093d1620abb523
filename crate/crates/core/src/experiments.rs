//! The recombination experiment model: equation system, framing changes,
//! standard tangles and solution verification.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{
    capped_linking_number, diagram_fraction, identify_link, pairwise_linking_number, standard_tangle, DiagramError,
    LinkId, TangleDiagram,
};
use crate::frac::{
    add_vertical, closure_with, solve_deletion_pair, solve_in_trans, solve_inversion_v, FracError, Fraction,
    TorusLinkParam,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Frac(#[from] FracError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("equation {equation}: {reason}")]
    NoSolution { equation: String, reason: String },
}

pub type Result<T> = std::result::Result<T, ExperimentError>;

/// Products of the eight experiments plus the framing of the three in cis
/// deletions. Torus products carry handedness in their sign.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSystem {
    /// In cis deletion products `(2, L_i)`.
    pub l1: i64,
    pub l2: i64,
    pub l3: i64,
    /// In cis inversion products.
    pub inv1: TorusLinkParam,
    pub inv2: TorusLinkParam,
    pub inv3: TorusLinkParam,
    /// In trans deletion product `(2, L_t)`.
    pub lt: i64,
    pub inv_t: TorusLinkParam,
    /// Deletion framing: Cre replaces `0/1` by `1/d_i`.
    #[serde(default)]
    pub d1: i64,
    #[serde(default)]
    pub d2: i64,
    #[serde(default)]
    pub d3: i64,
}

impl Default for ExperimentSystem {
    /// Right-handed `(2,4)` deletion products, `(+)` trefoils and a `(+)`
    /// 5-crossing torus knot for inversion, a Hopf link and a trefoil in
    /// trans, normal framing.
    fn default() -> Self {
        ExperimentSystem {
            l1: 4,
            l2: 4,
            l3: 4,
            inv1: TorusLinkParam(3),
            inv2: TorusLinkParam(5),
            inv3: TorusLinkParam(3),
            lt: 2,
            inv_t: TorusLinkParam(3),
            d1: 0,
            d2: 0,
            d3: 0,
        }
    }
}

impl ExperimentSystem {
    pub fn is_normal_form(&self) -> bool {
        self.d1 == 0 && self.d2 == 0 && self.d3 == 0
    }

    pub fn deletion_products(&self) -> [i64; 3] {
        [self.l1, self.l2, self.l3]
    }

    pub fn inversion_products(&self) -> [TorusLinkParam; 3] {
        [self.inv1, self.inv2, self.inv3]
    }

    pub fn framing(&self) -> [i64; 3] {
        [self.d1, self.d2, self.d3]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionReport {
    #[serde(rename = "O1")]
    pub o1: Fraction,
    #[serde(rename = "O2")]
    pub o2: Fraction,
    #[serde(rename = "O3")]
    pub o3: Fraction,
    /// `T - s23`, in normal framing.
    #[serde(rename = "T_minus_s23")]
    pub t_minus_s23: Fraction,
    pub v1: i64,
    pub v2: i64,
    pub v3: i64,
    pub d_t_set: Vec<i64>,
    pub v_t: i64,
}

impl SolutionReport {
    pub fn capped(&self) -> [Fraction; 3] {
        [self.o1, self.o2, self.o3]
    }
}

/// Twist counts `n_1, n_2, n_3` at the capping positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistSolution {
    pub n1: i64,
    pub n2: i64,
    pub n3: i64,
}

impl TwistSolution {
    pub fn as_array(&self) -> [i64; 3] {
        [self.n1, self.n2, self.n3]
    }
}

fn equation_err(equation: impl Into<String>, e: FracError) -> ExperimentError {
    ExperimentError::NoSolution { equation: equation.into(), reason: e.to_string() }
}

/// Solve the full system by tangle calculus.
///
/// Each in cis pair gives `O_i`: `-1/L_i` in normal framing, shifted by
/// `-d_i` vertical twists otherwise. The inversion twists `v_i` follow
/// from `O_i`. The in trans quantities are solved in normal framing.
pub fn solve_system(sys: &ExperimentSystem) -> Result<SolutionReport> {
    let mut o = [Fraction::ZERO; 3];
    let mut v = [0i64; 3];
    for i in 0..3 {
        let l = sys.deletion_products()[i];
        let d = sys.framing()[i];
        let sol = solve_deletion_pair(TorusLinkParam(l)).map_err(|e| equation_err(format!("deletion {}", i + 1), e))?;
        if sol.certificate != [sol.fraction] {
            return Err(ExperimentError::NoSolution {
                equation: format!("deletion {}", i + 1),
                reason: format!("bounded scan found {} solutions", sol.certificate.len()),
            });
        }
        let oi = add_vertical(sol.fraction, -d);
        // check both equations in the requested framing
        let substrate = closure_with(oi, Fraction::ZERO)?;
        let product = closure_with(oi, Fraction::vertical(d))?;
        if !substrate.is_unknot() || product != TorusLinkParam(l).to_two_bridge() {
            return Err(ExperimentError::NoSolution {
                equation: format!("deletion {}", i + 1),
                reason: format!("O = {oi} does not close to the products"),
            });
        }
        o[i] = oi;
        v[i] = solve_inversion_v(oi, sys.inversion_products()[i])
            .map_err(|e| equation_err(format!("inversion {}", i + 1), e))?;
    }
    let trans = solve_in_trans(sys.l1, sys.l2, sys.l3, sys.lt).map_err(|e| equation_err("in trans deletion", e))?;
    let v_t = solve_inversion_v(trans.remainder, sys.inv_t).map_err(|e| equation_err("in trans inversion", e))?;
    Ok(SolutionReport {
        o1: o[0],
        o2: o[1],
        o3: o[2],
        t_minus_s23: trans.remainder,
        v1: v[0],
        v2: v[1],
        v3: v[2],
        d_t_set: trans.d_t,
        v_t,
    })
}

/// Solve `n_i + n_j = c_k` for `{i, j, k} = {1, 2, 3}`.
fn solve_pair_sums(c: [i64; 3], what: &str) -> std::result::Result<TwistSolution, FracError> {
    let total: i64 = c.iter().sum();
    if total % 2 != 0 {
        return Err(FracError::ParityViolation(format!("{what} sum to {total}, which is odd")));
    }
    let half = total / 2;
    Ok(TwistSolution { n1: half - c[0], n2: half - c[1], n3: half - c[2] })
}

/// Twists `n_i` moving a solution between deletion framing `d` and normal
/// form: `n_i + n_j = d_k`.
pub fn framing_convert(d1: i64, d2: i64, d3: i64) -> std::result::Result<TwistSolution, FracError> {
    solve_pair_sums([d1, d2, d3], "framing values")
}

/// Twist counts of the standard tangle carried by a solution graph with
/// twists `f_k` on the rim edges: `n_i + n_j + f_k = -4`.
pub fn solve_graph_twists(f1: i64, f2: i64, f3: i64) -> std::result::Result<TwistSolution, FracError> {
    solve_pair_sums([-4 - f1, -4 - f2, -4 - f3], "rim twists")
}

/// The standard tangle with `n_i` twists at capping position `c_i`.
pub fn build_standard(n1: i64, n2: i64, n3: i64) -> TangleDiagram {
    standard_tangle(n1, n2, n3)
}

/// The standard tangle with twists `-2, -2, -2`.
pub fn pjh_tangle() -> TangleDiagram {
    build_standard(-2, -2, -2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// The closure was not in the identification table.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquationCheck {
    pub name: String,
    pub expected: LinkId,
    pub found: LinkId,
    pub status: CheckStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub verdict: CheckStatus,
    pub equations: Vec<EquationCheck>,
    /// Fractions of the capped tangles, when rational.
    pub capped: Vec<Option<Fraction>>,
    /// `T - s23`, when the in trans check ran.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_minus_s23: Option<Fraction>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.verdict == CheckStatus::Pass
    }
}

fn check(name: String, link: &TangleDiagram, expected: LinkId, budget: usize) -> Result<EquationCheck> {
    let found = identify_link(link, budget)?;
    let status = if found == expected {
        CheckStatus::Pass
    } else if found.is_unknown() {
        CheckStatus::Inconclusive
    } else {
        CheckStatus::Fail
    };
    Ok(EquationCheck { name, expected, found, status })
}

/// Check the normal form equations on a 3-string diagram: for each `i`,
/// `N(O_i + 0/1)` is the unknot and `N(O_i + 1/0)` is `Torus2(4)`. With
/// `in_trans`, also `N(T - s23 + 0/1)` is the unknot and `N(T - s23 + 1/0)`
/// the Hopf link.
pub fn verify_solution_tangle(d: &TangleDiagram, in_trans: bool, budget: usize) -> Result<VerificationReport> {
    let mut equations = Vec::new();
    let mut capped = Vec::new();
    for i in 1..=3u8 {
        let o = d.cap(i)?;
        capped.push(diagram_fraction(&o, budget)?);
        equations.push(check(format!("substrate c{i}"), &o.close_with(Fraction::ZERO)?, LinkId::Unknot, budget)?);
        equations.push(check(
            format!("deletion c{i}"),
            &o.close_with(Fraction::INFINITY)?,
            LinkId::Torus2 { k: 4 },
            budget,
        )?);
    }
    let mut t_minus_s23 = None;
    if in_trans {
        let t = d.remove_string("s23")?;
        t_minus_s23 = diagram_fraction(&t, budget)?;
        equations.push(check("in trans substrate".into(), &t.close_with(Fraction::ZERO)?, LinkId::Unknot, budget)?);
        equations.push(check(
            "in trans deletion".into(),
            &t.close_with(Fraction::INFINITY)?,
            LinkId::Torus2 { k: 2 },
            budget,
        )?);
    }
    let verdict = if equations.iter().any(|e| e.status == CheckStatus::Fail) {
        CheckStatus::Fail
    } else if equations.iter().all(|e| e.status == CheckStatus::Pass) {
        CheckStatus::Pass
    } else {
        CheckStatus::Inconclusive
    };
    Ok(VerificationReport { verdict, equations, capped, t_minus_s23 })
}

/// Linking numbers of a 3-string tangle: `[capped c1, c2, c3]` and
/// `[s12-s23, s23-s31, s31-s12]`.
pub fn linking_matrix(d: &TangleDiagram) -> Result<([i64; 3], [i64; 3])> {
    let mut capped = [0; 3];
    for i in 1..=3u8 {
        capped[i as usize - 1] = capped_linking_number(d, i)?;
    }
    let pairs = [("s12", "s23"), ("s23", "s31"), ("s31", "s12")];
    let mut pairwise = [0; 3];
    for (k, (a, b)) in pairs.iter().enumerate() {
        pairwise[k] = pairwise_linking_number(d, a, b)?;
    }
    Ok((capped, pairwise))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{simplify, SimplifyMode};

    fn frac(p: i64, q: i64) -> Fraction {
        Fraction::new(p, q).unwrap()
    }

    #[test]
    fn default_system() {
        let r = solve_system(&ExperimentSystem::default()).unwrap();
        assert_eq!(r.capped(), [frac(-1, 4); 3]);
        assert_eq!(r.t_minus_s23, frac(-1, 2));
        assert_eq!((r.v1, r.v2, r.v3), (1, -1, 1));
        assert_eq!(r.d_t_set, vec![0, 4]);
        assert_eq!(r.v_t, -1);
    }

    #[test]
    fn generalized_products() {
        let sys = ExperimentSystem { l1: 6, l2: 6, l3: 6, lt: 3, ..ExperimentSystem::default() };
        let r = solve_system(&sys).unwrap();
        assert_eq!(r.capped(), [frac(-1, 6); 3]);
    }

    #[test]
    fn unknot_products_rejected() {
        let sys = ExperimentSystem { l1: 1, l2: 1, l3: 1, ..ExperimentSystem::default() };
        match solve_system(&sys) {
            Err(ExperimentError::NoSolution { equation, .. }) => assert_eq!(equation, "deletion 1"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn framed_system_closes_to_products() {
        let sys = ExperimentSystem { d1: -1, d3: -1, ..ExperimentSystem::default() };
        let r = solve_system(&sys).unwrap();
        assert_eq!(r.o1, frac(-1, 3));
        assert_eq!(r.o2, frac(-1, 4));
        for (o, d) in r.capped().into_iter().zip(sys.framing()) {
            assert_eq!(closure_with(o, Fraction::vertical(d)).unwrap(), TorusLinkParam(4).to_two_bridge());
        }
    }

    #[test]
    fn twist_solvers() {
        assert_eq!(framing_convert(0, 0, 0).unwrap().as_array(), [0, 0, 0]);
        assert_eq!(framing_convert(-1, 0, -1).unwrap().as_array(), [0, -1, 0]);
        assert_eq!(framing_convert(2, 2, 2).unwrap().as_array(), [1, 1, 1]);
        assert_eq!(solve_graph_twists(0, 0, 0).unwrap().as_array(), [-2, -2, -2]);
        assert_eq!(solve_graph_twists(2, 0, 0).unwrap().as_array(), [-1, -3, -3]);
        assert!(matches!(solve_graph_twists(1, 0, 0), Err(FracError::ParityViolation(_))));
        assert!(matches!(framing_convert(1, 0, 0), Err(FracError::ParityViolation(_))));
    }

    #[test]
    fn pjh_verifies() {
        let d = pjh_tangle();
        assert_eq!(d.n_crossings(), 6);
        let r = verify_solution_tangle(&d, true, 16).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.capped, vec![Some(frac(-1, 4)); 3]);
        assert_eq!(r.t_minus_s23, Some(frac(-1, 2)));
        assert_eq!(linking_matrix(&d).unwrap(), ([-2; 3], [-1; 3]));
    }

    #[test]
    fn trivial_tangle_fails() {
        let r = verify_solution_tangle(&build_standard(0, 0, 0), false, 16).unwrap();
        assert_eq!(r.verdict, CheckStatus::Fail);
    }

    #[test]
    fn framing_twists_round_trip() {
        let n = framing_convert(-1, 0, -1).unwrap().as_array();
        let base = pjh_tangle();
        let mut d = base.clone();
        for (i, k) in (1..=3u8).zip(n) {
            d = d.add_boundary_twists(i, -k).unwrap();
        }
        for (i, k) in (1..=3u8).zip(n) {
            d = d.add_boundary_twists(i, k).unwrap();
        }
        assert_eq!(simplify(&d, SimplifyMode::RelBoundary).n_crossings(), base.n_crossings());
    }

    #[test]
    fn config_round_trip() {
        let sys = ExperimentSystem::default();
        let text = serde_json::to_string(&sys).unwrap();
        assert_eq!(serde_json::from_str::<ExperimentSystem>(&text).unwrap(), sys);
    }
}
