//! End-to-end acceptance checks. Runs without the libtest harness so each
//! criterion prints one PASS/FAIL line under a plain `cargo test`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tanglekit::diagram::moves::{braid_r2, braid_r3, braid_r3_sites, curl_sign, insert_curl};
use tanglekit::diagram::{
    bracket_skein, bracket_state_sum, braid_closure, fingerprint, identify_link, linking_number, rational_tangle, Port,
};
use tanglekit::enumerate::verify_split_or_parallel;
use tanglekit::experiments::{
    build_standard, framing_convert, linking_matrix, solve_graph_twists, solve_system, TwistSolution,
};
use tanglekit::frac::{bounded_fractions, numerator_closure, scan_deletion_pair};
use tanglekit::graphdeduce::{deduce, scenarios, trace_is_valid};
use tanglekit::{ExperimentSystem, Fact, Fraction, LinkId, TangleDiagram, TorusLinkParam};

const BUDGET: usize = 24;

type Check = Result<String, String>;

/// Name, check and time limit.
type Criterion = (&'static str, fn() -> Check, Duration);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn frac(p: i64, q: i64) -> Fraction {
    Fraction::new(p, q).expect("valid fraction")
}

fn equation_system() -> Check {
    let r = solve_system(&ExperimentSystem::default()).map_err(|e| e.to_string())?;
    let quarter = frac(-1, 4);
    ensure(r.capped() == [quarter; 3], || format!("O = {:?}", r.capped()))?;
    ensure(r.t_minus_s23 == frac(-1, 2), || format!("T - s23 = {}", r.t_minus_s23))?;
    ensure((r.v1, r.v2, r.v3) == (1, -1, 1), || format!("v = {:?}", (r.v1, r.v2, r.v3)))?;
    ensure(r.d_t_set == vec![0, 4], || format!("d_t = {:?}", r.d_t_set))?;
    ensure(r.v_t == -1, || format!("v_t = {}", r.v_t))?;
    Ok("O_i = -1/4, T - s23 = -1/2, v = (1,-1,1), d_t = {0,4}, v_t = -1".into())
}

fn uniqueness_scan() -> Check {
    for l in 3..=8 {
        let sols = scan_deletion_pair(TorusLinkParam(l), 50);
        ensure(sols == vec![frac(-1, l)], || format!("L = {l}: {sols:?}"))?;
    }
    Ok(format!("{} candidates per L, one solution each for L = 3..8", bounded_fractions(50).count()))
}

fn identify_agreeing(link: &TangleDiagram) -> Result<LinkId, String> {
    let a = bracket_state_sum(link, BUDGET).map_err(|e| e.to_string())?;
    let b = bracket_skein(link, BUDGET).map_err(|e| e.to_string())?;
    ensure(a == b, || format!("bracket implementations disagree: {a} vs {b}"))?;
    ensure(fingerprint(&a) == fingerprint(&b), || "fingerprints disagree".into())?;
    identify_link(link, BUDGET).map_err(|e| e.to_string())
}

fn pjh_closures() -> Check {
    let t = build_standard(-2, -2, -2);
    for i in 1..=3u8 {
        let o = t.cap(i).map_err(|e| e.to_string())?;
        let zero = identify_agreeing(&o.close_with(Fraction::ZERO).map_err(|e| e.to_string())?)?;
        ensure(zero == LinkId::Unknot, || format!("c{i} + 0/1: {zero}"))?;
        let inf = identify_agreeing(&o.close_with(Fraction::INFINITY).map_err(|e| e.to_string())?)?;
        ensure(inf == LinkId::Torus2 { k: 4 }, || format!("c{i} + 1/0: {inf}"))?;
    }
    Ok("unknot and T(2,4) at all three caps, both brackets agree".into())
}

fn pjh_linking() -> Check {
    let (capped, pairs) = linking_matrix(&build_standard(-2, -2, -2)).map_err(|e| e.to_string())?;
    ensure(capped == [-2; 3], || format!("capped {capped:?}"))?;
    ensure(pairs == [-1; 3], || format!("pairwise {pairs:?}"))?;
    Ok("capped -2, pairwise -1".into())
}

fn twist_solvers() -> Check {
    let g = solve_graph_twists(0, 0, 0).map_err(|e| e.to_string())?;
    ensure(g == TwistSolution { n1: -2, n2: -2, n3: -2 }, || format!("graph twists {g:?}"))?;
    let f = framing_convert(-1, 0, -1).map_err(|e| e.to_string())?;
    ensure(f == TwistSolution { n1: 0, n2: -1, n3: 0 }, || format!("framing {f:?}"))?;
    ensure(solve_graph_twists(1, 0, 0).is_err(), || "odd graph twists accepted".into())?;
    ensure(framing_convert(1, 0, 0).is_err(), || "odd framing accepted".into())?;
    Ok("(-2,-2,-2), (0,-1,0), odd parity rejected".into())
}

fn split_or_parallel() -> Check {
    let r = verify_split_or_parallel(5).map_err(|e| e.to_string())?;
    let mut summary = Vec::new();
    for l in &r.levels {
        ensure(l.is_consistent(), || format!("n = {}: counts do not add up", l.n))?;
        ensure(l.unresolved.is_empty(), || format!("n = {}: {} unresolved", l.n, l.unresolved.len()))?;
        summary.push(format!("n={}:{}", l.n, l.total));
    }
    ensure(r.holds(), || "unresolved diagrams".into())?;
    Ok(format!("no unresolved diagrams ({})", summary.join(" ")))
}

fn random_word(rng: &mut ChaCha8Rng, strands: usize, len: usize) -> Vec<i32> {
    (0..len)
        .map(|_| {
            let g = rng.gen_range(1..strands as i32);
            if rng.gen_bool(0.5) {
                g
            } else {
                -g
            }
        })
        .collect()
}

fn linking_numbers(d: &TangleDiagram) -> Result<Vec<i64>, String> {
    let n = d.n_components();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            out.push(linking_number(d, a, b).map_err(|e| e.to_string())?);
        }
    }
    Ok(out)
}

fn bracket(d: &TangleDiagram) -> Result<tanglekit::LaurentPoly, String> {
    bracket_state_sum(d, BUDGET).map_err(|e| e.to_string())
}

fn reidemeister_invariance() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7a6e);
    let samples = 600;
    let mut r3_moves = 0;
    for _ in 0..samples {
        let strands = rng.gen_range(2..=4);
        let len = rng.gen_range(1..=8);
        let mut word = random_word(&mut rng, strands, len);
        // plant a third-move site in most samples with room for one
        if strands >= 3 && len <= 5 && rng.gen_bool(0.8) {
            let i = rng.gen_range(1..strands as i32 - 1);
            let (a, b) = if rng.gen_bool(0.5) { (i, i + 1) } else { (i + 1, i) };
            let s = if rng.gen_bool(0.5) { 1 } else { -1 };
            let pos = rng.gen_range(0..=word.len());
            word.splice(pos..pos, [s * a, s * b, s * a]);
        }
        let d = braid_closure(strands, &word);
        let base = bracket(&d)?;
        let base_lk = linking_numbers(&d)?;

        let i = rng.gen_range(1..strands as i32) * if rng.gen_bool(0.5) { 1 } else { -1 };
        let w2 = braid_r2(&word, rng.gen_range(0..=word.len()), i);
        let d2 = braid_closure(strands, &w2);
        ensure(bracket(&d2)? == base, || format!("R2 changed the bracket of {word:?}"))?;
        ensure(linking_numbers(&d2)? == base_lk, || format!("R2 changed linking of {word:?}"))?;

        for k in braid_r3_sites(&word) {
            let d3 = braid_closure(strands, &braid_r3(&word, k));
            ensure(bracket(&d3)? == base, || format!("R3 at {k} changed the bracket of {word:?}"))?;
            ensure(linking_numbers(&d3)? == base_lk, || format!("R3 changed linking of {word:?}"))?;
            r3_moves += 1;
        }

        let kind = rng.gen_range(0..4u8);
        let c = rng.gen_range(0..d.n_crossings());
        let d1 = insert_curl(&d, Port::X(c, rng.gen_range(0..4)), kind);
        let expected = base.times_neg_a3(curl_sign(kind));
        ensure(bracket(&d1)? == expected, || format!("R1 factor wrong on {word:?}, kind {kind}"))?;
        ensure(linking_numbers(&d1)? == base_lk, || format!("R1 changed linking of {word:?}"))?;
    }
    ensure(r3_moves >= 100, || format!("only {r3_moves} third moves exercised"))?;
    Ok(format!("{samples} diagrams, {r3_moves} third moves"))
}

fn deduction() -> Check {
    let premises = scenarios::vertex_star_planar();
    let d = deduce(&premises);
    ensure(d.closure.holds(Fact::Planar), || "vertex-star premises do not derive Planar".into())?;
    ensure(trace_is_valid(&premises, &d.trace), || "invalid trace".into())?;
    for (name, fb) in scenarios::counterexamples() {
        let d = deduce(&fb);
        ensure(!d.closure.holds(Fact::Planar), || format!("{name} derives Planar"))?;
        ensure(d.consistent, || format!("{name} is inconsistent"))?;
    }
    Ok(format!("Planar derived in {} steps; 3 counterexamples stay consistent", d.trace.len()))
}

fn fraction_consistency() -> Check {
    let mut n = 0;
    for f in bounded_fractions(5) {
        let link = rational_tangle(f).numerator().map_err(|e| e.to_string())?;
        let found = identify_link(&link, BUDGET).map_err(|e| e.to_string())?;
        let expected = LinkId::from_two_bridge(numerator_closure(f));
        ensure(found == expected, || format!("N({f}): diagram {found}, calculus {expected}"))?;
        n += 1;
    }
    Ok(format!("{n} fractions agree"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("equation system", equation_system, Duration::from_secs(1)),
        ("uniqueness scan", uniqueness_scan, Duration::from_secs(10)),
        ("PJH closures", pjh_closures, Duration::from_secs(30)),
        ("PJH linking numbers", pjh_linking, Duration::from_secs(1)),
        ("twist solvers", twist_solvers, Duration::from_secs(1)),
        ("split or parallel, n <= 5", split_or_parallel, Duration::from_secs(600)),
        ("Reidemeister invariance", reidemeister_invariance, Duration::from_secs(300)),
        ("deduction engine", deduction, Duration::from_secs(1)),
        ("fraction/diagram consistency", fraction_consistency, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (k, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if took <= *limit => Ok(detail),
            Ok(_) => Err(format!("took {took:.2?}, limit {limit:?}")),
            Err(e) => Err(e),
        };
        match outcome {
            Ok(detail) => println!("PASS {} {name} ({took:.2?}): {detail}", k + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL {} {name} ({took:.2?}): {e}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
