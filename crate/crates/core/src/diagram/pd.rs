//! Plain-text diagram codes.
//!
//! ```text
//! tangle k=2 n=1
//! X 1 4 2 3
//! B 1 2 3 4
//! S a: 1,2
//! S b: 3,4
//! ```
//!
//! Every edge of the diagram is an arc with a positive id. `X` lists the
//! four arcs at a crossing counterclockwise, starting with the incoming
//! under-arc. `B` lists the arc at each boundary point in circular order.
//! Each `S` line names one component and lists its arcs in the direction
//! of travel; a free loop is a single arc that occurs nowhere else.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use super::model::{ComponentKind, Crossing, Endpoint, Port, TangleDiagram, NONE};
use super::{DiagramError, Result};

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> DiagramError {
    DiagramError::Syntax { line, col, msg: msg.into() }
}

/// A whitespace-separated token with its 1-based column.
fn tokens(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in s.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(st)) => {
                out.push((st + 1, &s[st..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(st) = start {
        out.push((st + 1, &s[st..]));
    }
    out
}

fn arc_id(line: usize, col: usize, tok: &str) -> Result<u32> {
    match tok.parse::<u32>() {
        Ok(a) if a > 0 => Ok(a),
        _ => Err(syntax(line, col, format!("expected a positive arc id, found {tok:?}"))),
    }
}

fn header_field(line: usize, col: usize, tok: &str, key: &str) -> Result<usize> {
    tok.strip_prefix(key)
        .and_then(|v| v.strip_prefix('='))
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| syntax(line, col, format!("expected {key}=<count>, found {tok:?}")))
}

struct StringLine {
    line: usize,
    label: String,
    arcs: Vec<(usize, u32)>,
}

/// Parse a diagram code. The rotation system must be planar.
pub fn parse_pd(text: &str) -> Result<TangleDiagram> {
    let mut header: Option<(usize, usize)> = None;
    let mut xs: Vec<(usize, [(usize, u32); 4])> = Vec::new();
    let mut bd: Option<(usize, Vec<(usize, u32)>)> = None;
    let mut strings: Vec<StringLine> = Vec::new();
    let mut last_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        last_line = ln;
        let body = raw.split('#').next().unwrap_or("");
        let toks = tokens(body);
        let Some(&(col, kw)) = toks.first() else { continue };
        if header.is_none() && kw != "tangle" {
            return Err(syntax(ln, col, "expected header `tangle k=<strings> n=<crossings>`"));
        }
        match kw {
            "tangle" => {
                if header.is_some() {
                    return Err(syntax(ln, col, "duplicate header"));
                }
                if toks.len() != 3 {
                    return Err(syntax(ln, col, "header needs k= and n="));
                }
                let k = header_field(ln, toks[1].0, toks[1].1, "k")?;
                let n = header_field(ln, toks[2].0, toks[2].1, "n")?;
                header = Some((k, n));
            }
            "X" => {
                if toks.len() != 5 {
                    return Err(syntax(ln, col, "crossing needs exactly four arcs"));
                }
                let mut arcs = [(0, 0); 4];
                for (s, &(c, t)) in toks[1..].iter().enumerate() {
                    arcs[s] = (c, arc_id(ln, c, t)?);
                }
                xs.push((ln, arcs));
            }
            "B" => {
                if bd.is_some() {
                    return Err(syntax(ln, col, "duplicate boundary line"));
                }
                let arcs = toks[1..].iter().map(|&(c, t)| Ok((c, arc_id(ln, c, t)?))).collect::<Result<_>>()?;
                bd = Some((ln, arcs));
            }
            "S" => {
                let rest_col = col + 1;
                let rest = &body[rest_col - 1..];
                let Some(colon) = rest.find(':') else {
                    return Err(syntax(ln, col, "string line needs `label:`"));
                };
                let label = rest[..colon].trim();
                if label.is_empty() || label.contains(',') {
                    return Err(syntax(ln, rest_col, "bad string label"));
                }
                let mut arcs = Vec::new();
                let mut offset = rest_col + colon + 1;
                for piece in rest[colon + 1..].split(',') {
                    let lead = piece.len() - piece.trim_start().len();
                    let tok = piece.trim();
                    if tok.is_empty() {
                        return Err(syntax(ln, offset + lead, "empty arc id"));
                    }
                    arcs.push((offset + lead, arc_id(ln, offset + lead, tok)?));
                    offset += piece.len() + 1;
                }
                strings.push(StringLine { line: ln, label: label.to_string(), arcs });
            }
            other => return Err(syntax(ln, col, format!("unknown line type {other:?}"))),
        }
    }

    let Some((k, n)) = header else { return Err(syntax(last_line.max(1), 1, "missing header")) };
    if xs.len() != n {
        return Err(syntax(last_line, 1, format!("header says {n} crossings, found {}", xs.len())));
    }
    let (b_line, b_arcs) = bd.unwrap_or((last_line, Vec::new()));
    if b_arcs.len() != 2 * k {
        return Err(DiagramError::WrongEndpointCount { expected: 2 * k, found: b_arcs.len() });
    }

    // Ports of every arc, with where the arc was first mentioned.
    let mut ports: BTreeMap<u32, (usize, usize, Vec<Port>)> = BTreeMap::new();
    for (c, (ln, arcs)) in xs.iter().enumerate() {
        for (s, &(col, a)) in arcs.iter().enumerate() {
            ports.entry(a).or_insert((*ln, col, Vec::new())).2.push(Port::X(c, s as u8));
        }
    }
    for (j, &(col, a)) in b_arcs.iter().enumerate() {
        ports.entry(a).or_insert((b_line, col, Vec::new())).2.push(Port::B(j));
    }
    for (a, (ln, col, ps)) in &ports {
        if ps.len() != 2 {
            return Err(syntax(*ln, *col, format!("arc {a} has {} ends, expected 2", ps.len())));
        }
    }

    let mut d = TangleDiagram {
        xs: (0..n).map(|_| Crossing::blank([Port::B(NONE); 4], 1)).collect(),
        bd: vec![Endpoint { mate: Port::B(NONE), out: false, comp: NONE }; 2 * k],
        labels: Vec::new(),
        loops: Vec::new(),
    };
    for (_, _, ps) in ports.values() {
        d.set_mate(ps[0], ps[1]);
    }

    let mut used: HashMap<u32, usize> = HashMap::new();
    for (id, s) in strings.iter().enumerate() {
        for &(col, a) in &s.arcs {
            if used.insert(a, s.line).is_some() {
                return Err(syntax(s.line, col, format!("arc {a} listed twice")));
            }
        }
        let first = s.arcs[0].1;
        if !ports.contains_key(&first) {
            if s.arcs.len() != 1 {
                return Err(syntax(s.line, s.arcs[0].0, format!("arc {first} does not occur in the diagram")));
            }
            d.loops.push(id);
        } else {
            let walk = trace(&ports, s)
                .ok_or_else(|| syntax(s.line, s.arcs[0].0, "arcs do not trace a single component in order"))?;
            for (from, to) in walk {
                d.set_out(from, true);
                d.set_out(to, false);
                d.set_comp(from, id);
                d.set_comp(to, id);
            }
        }
        d.labels.push(s.label.clone());
    }
    if let Some((a, (ln, col, _))) = ports.iter().find(|(a, _)| !used.contains_key(a)) {
        return Err(syntax(*ln, *col, format!("arc {a} belongs to no string")));
    }
    for (c, (ln, arcs)) in xs.iter().enumerate() {
        if d.xs[c].out[0] {
            return Err(syntax(*ln, arcs[0].0, "first arc must be the incoming under-arc"));
        }
    }
    let found = d.bd.len() / 2;
    let open = d.components().iter().filter(|c| matches!(c.kind, ComponentKind::Open { .. })).count();
    if open != found {
        return Err(DiagramError::WrongStringCount { expected: found, found: open });
    }
    let (chi, expected) = d.euler_characteristic();
    if chi != expected {
        return Err(DiagramError::NonPlanarCode { chi, expected });
    }
    d.check_invariants().map_err(|m| syntax(last_line, 1, m))?;
    Ok(d)
}

/// Orient the arcs of one string line: `(tail port, head port)` per arc.
fn trace(ports: &BTreeMap<u32, (usize, usize, Vec<Port>)>, s: &StringLine) -> Option<Vec<(Port, Port)>> {
    let ends = |a: u32| ports.get(&a).map(|e| (e.2[0], e.2[1]));
    let (p0, q0) = ends(s.arcs[0].1)?;
    'start: for (mut from, mut to) in [(p0, q0), (q0, p0)] {
        let open = matches!(from, Port::B(_));
        let start = from;
        let mut walk = Vec::with_capacity(s.arcs.len());
        for (i, &(_, a)) in s.arcs.iter().enumerate() {
            if i > 0 {
                let (p, q) = ends(a)?;
                let next = match to {
                    Port::X(..) => to.through(),
                    Port::B(_) => continue 'start,
                };
                from = next;
                to = if p == next {
                    q
                } else if q == next {
                    p
                } else {
                    continue 'start;
                };
            }
            if matches!(from, Port::X(_, 0)) {
                // slot 0 holds the incoming under-arc
                continue 'start;
            }
            walk.push((from, to));
        }
        let done = if open { matches!(to, Port::B(_)) } else { matches!(to, Port::X(..)) && to.through() == start };
        if done {
            return Some(walk);
        }
    }
    None
}

/// Emit a diagram code. Open strings come first by tail, then closed
/// components, then free loops, each by label. Arcs and crossings are
/// numbered in order of first traversal, so emitting a parsed code
/// reproduces it.
pub fn emit_pd(d: &TangleDiagram) -> String {
    let n = d.xs.len();
    let comps = d.components();
    let mut open: Vec<(usize, usize)> = Vec::new();
    let mut closed: Vec<usize> = Vec::new();
    let mut loops: Vec<usize> = Vec::new();
    for (id, c) in comps.iter().enumerate() {
        match c.kind {
            ComponentKind::Open { tail, .. } => open.push((tail, id)),
            ComponentKind::Closed => closed.push(id),
            ComponentKind::FreeLoop => loops.push(id),
        }
    }
    open.sort();
    closed.sort_by(|&a, &b| comps[a].label.cmp(&comps[b].label).then(a.cmp(&b)));
    loops.sort_by(|&a, &b| comps[a].label.cmp(&comps[b].label).then(a.cmp(&b)));

    let mut st = Numbering { arc_of: HashMap::new(), rank: vec![NONE; n], order: Vec::new(), next_arc: 1 };
    let mut lines: Vec<(usize, Vec<u32>)> = Vec::new();

    for &(tail, id) in &open {
        let mut arcs = vec![st.arc(Port::B(tail), d)];
        for p in d.walk_from(tail).0 {
            st.see(p);
            arcs.push(st.arc(p.through(), d));
        }
        lines.push((id, arcs));
    }
    for &id in &closed {
        let walk = d.component_walk(id);
        let start = closed_start(d, &st, &walk);
        let mut arcs = Vec::new();
        for r in 0..walk.len() {
            let p = walk[(start + r) % walk.len()];
            st.see(p);
            arcs.push(st.arc(p.through(), d));
        }
        lines.push((id, arcs));
    }
    for &id in &loops {
        let a = st.next_arc;
        st.next_arc += 1;
        lines.push((id, vec![a]));
    }

    let mut out = String::new();
    let _ = writeln!(out, "tangle k={} n={}", d.bd.len() / 2, n);
    for &c in &st.order {
        let x = &d.xs[c];
        let u = 1 - x.over;
        let u_in = if x.out[u as usize] { u + 2 } else { u };
        let arcs: Vec<String> = (0..4).map(|r| st.arc_of[&Port::X(c, (u_in + r) % 4)].to_string()).collect();
        let _ = writeln!(out, "X {}", arcs.join(" "));
    }
    let b: Vec<String> = (0..d.bd.len()).map(|j| st.arc_of[&Port::B(j)].to_string()).collect();
    if b.is_empty() {
        out.push_str("B\n");
    } else {
        let _ = writeln!(out, "B {}", b.join(" "));
    }
    for (id, arcs) in lines {
        let a: Vec<String> = arcs.iter().map(|a| a.to_string()).collect();
        let _ = writeln!(out, "S {}: {}", comps[id].label, a.join(","));
    }
    out
}

struct Numbering {
    arc_of: HashMap<Port, u32>,
    rank: Vec<usize>,
    order: Vec<usize>,
    next_arc: u32,
}

impl Numbering {
    /// Number the arc leaving through `p`, if not yet numbered.
    fn arc(&mut self, p: Port, d: &TangleDiagram) -> u32 {
        if let Some(&a) = self.arc_of.get(&p) {
            return a;
        }
        let a = self.next_arc;
        self.next_arc += 1;
        self.arc_of.insert(p, a);
        self.arc_of.insert(d.mate(p), a);
        a
    }

    fn see(&mut self, p: Port) {
        if let Port::X(c, _) = p {
            if self.rank[c] == NONE {
                self.rank[c] = self.order.len();
                self.order.push(c);
            }
        }
    }
}

/// Where to start numbering a closed component: at its entry into the
/// earliest crossing already numbered, or else at the start giving the
/// smallest local code, which does not depend on crossing indices.
fn closed_start(d: &TangleDiagram, st: &Numbering, walk: &[Port]) -> usize {
    let seen = walk
        .iter()
        .enumerate()
        .filter_map(|(i, p)| p.crossing().filter(|&c| st.rank[c] != NONE).map(|c| (st.rank[c], i)))
        .min();
    if let Some((_, i)) = seen {
        return i;
    }
    (0..walk.len()).min_by_key(|&i| local_code(d, walk, i)).unwrap_or(0)
}

/// The walk from `start` described by, at each step, whether the strand is
/// over, whether the other strand crosses from the right, and the step at
/// which this crossing was first met.
fn local_code(d: &TangleDiagram, walk: &[Port], start: usize) -> Vec<(bool, i32, usize)> {
    let mut first: HashMap<usize, usize> = HashMap::new();
    (0..walk.len())
        .map(|r| {
            let p = walk[(start + r) % walk.len()];
            let Port::X(c, s) = p else { unreachable!("closed walks stay inside") };
            let f = *first.entry(c).or_insert(r);
            (d.xs[c].is_over_slot(s), d.crossing_sign(c), f)
        })
        .collect()
}

/// Code of the diagram up to crossing numbering: open strings oriented
/// from their lower endpoint and components given generic labels.
pub fn canonical_code(d: &TangleDiagram) -> String {
    let mut t = d.clone();
    let flip: Vec<usize> = t
        .components()
        .iter()
        .enumerate()
        .filter_map(|(id, c)| match c.kind {
            ComponentKind::Open { tail, head } if head < tail => Some(id),
            _ => None,
        })
        .collect();
    for id in flip {
        t.reverse_component(id);
    }
    for l in t.labels.iter_mut() {
        l.clear();
    }
    let comps = t.components();
    let mut order: Vec<usize> = (0..comps.len()).collect();
    order.sort_by_key(|&id| match comps[id].kind {
        ComponentKind::Open { tail, .. } => (0, tail),
        ComponentKind::Closed => (1, id),
        ComponentKind::FreeLoop => (2, id),
    });
    for (r, id) in order.into_iter().enumerate() {
        t.labels[id] = format!("c{r}");
    }
    emit_pd(&t)
}
