//! Tensegrity data model and its line-oriented text format.
//!
//! ```text
//! # crossed square
//! dim 2
//! vertex 1 0 0
//! vertex 2 1 0
//! vertex 3 1 1
//! vertex 4 0 1
//! strut 1 3
//! strut 2 4
//! cable 1 2
//! cable 2 3
//! cable 3 4
//! cable 1 4
//! ```
//!
//! Besides `strut`, `cable` and `bar` lines, `chain a b c ...` declares a
//! discretized curve whose consecutive chords keep their length to first
//! order. A chain is closed when its last id repeats the first.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Functional type of a row of the rigidity operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RowKind {
    Strut,
    Cable,
}

/// Whether a row comes from a declared strut/cable or from splitting a bar.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Origin {
    Native,
    BarExpansion,
}

/// A declared edge, by its position in the strut, cable or bar list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeRef {
    Strut(usize),
    Cable(usize),
    Bar(usize),
}

/// One row of the rigidity operator. A bar yields a strut row and a cable
/// row with the same endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EdgeRow {
    pub kind: RowKind,
    pub endpoints: (usize, usize),
    pub origin: Origin,
    pub edge: EdgeRef,
}

/// Vertices placed in R^dim with typed edges and optional isometry chains.
///
/// Construction goes through [`Tensegrity::new`] and the `add_*` methods,
/// which enforce the invariants: unique ids, an injective placement,
/// pairwise-disjoint edge sets without self-loops.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensegrity {
    dim: usize,
    ids: Vec<String>,
    positions: Vec<f64>,
    struts: Vec<(usize, usize)>,
    cables: Vec<(usize, usize)>,
    bars: Vec<(usize, usize)>,
    chains: Vec<Vec<usize>>,
    index: HashMap<String, usize>,
    pairs: HashSet<(usize, usize)>,
}

fn key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl Tensegrity {
    pub fn new(dim: usize) -> Result<Tensegrity> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        Ok(Tensegrity {
            dim,
            ids: Vec::new(),
            positions: Vec::new(),
            struts: Vec::new(),
            cables: Vec::new(),
            bars: Vec::new(),
            chains: Vec::new(),
            index: HashMap::new(),
            pairs: HashSet::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertex_count(&self) -> usize {
        self.ids.len()
    }

    pub fn id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn position(&self, v: usize) -> &[f64] {
        &self.positions[v * self.dim..(v + 1) * self.dim]
    }

    /// All coordinates, vertex-major.
    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn struts(&self) -> &[(usize, usize)] {
        &self.struts
    }

    pub fn cables(&self) -> &[(usize, usize)] {
        &self.cables
    }

    pub fn bars(&self) -> &[(usize, usize)] {
        &self.bars
    }

    pub fn chains(&self) -> &[Vec<usize>] {
        &self.chains
    }

    pub fn edge_count(&self) -> usize {
        self.struts.len() + self.cables.len() + self.bars.len()
    }

    /// Declared edges in row order: struts, cables, then bars.
    pub fn edges(&self) -> Vec<EdgeRef> {
        (0..self.struts.len())
            .map(EdgeRef::Strut)
            .chain((0..self.cables.len()).map(EdgeRef::Cable))
            .chain((0..self.bars.len()).map(EdgeRef::Bar))
            .collect()
    }

    pub fn endpoints(&self, edge: EdgeRef) -> (usize, usize) {
        match edge {
            EdgeRef::Strut(i) => self.struts[i],
            EdgeRef::Cable(i) => self.cables[i],
            EdgeRef::Bar(i) => self.bars[i],
        }
    }

    pub fn add_vertex(&mut self, id: impl Into<String>, position: &[f64]) -> Result<usize> {
        let id = id.into();
        if id.is_empty() || id.chars().any(char::is_whitespace) || id.starts_with('#') {
            return Err(Error::Syntax(format!("invalid vertex id `{id}`")));
        }
        if position.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "vertex `{id}` has {} coordinates, expected {}",
                position.len(),
                self.dim
            )));
        }
        if position.iter().any(|x| !x.is_finite()) {
            return Err(Error::Syntax(format!("vertex `{id}` has a non-finite coordinate")));
        }
        if self.index.contains_key(&id) {
            return Err(Error::DuplicateVertex { id });
        }
        if let Some(other) = (0..self.vertex_count()).find(|&v| self.position(v) == position) {
            return Err(Error::CoincidentVertices {
                a: self.ids[other].clone(),
                b: id,
            });
        }
        let v = self.ids.len();
        self.index.insert(id.clone(), v);
        self.ids.push(id);
        self.positions.extend_from_slice(position);
        Ok(v)
    }

    fn check_pair(&self, a: usize, b: usize) -> Result<()> {
        for v in [a, b] {
            if v >= self.vertex_count() {
                return Err(Error::UnknownVertex { id: format!("#{v}") });
            }
        }
        if a == b {
            return Err(Error::SelfLoop {
                id: self.ids[a].clone(),
            });
        }
        if self.pairs.contains(&key(a, b)) {
            return Err(Error::DuplicateEdge {
                a: self.ids[a].clone(),
                b: self.ids[b].clone(),
            });
        }
        Ok(())
    }

    pub fn add_strut(&mut self, a: usize, b: usize) -> Result<EdgeRef> {
        self.check_pair(a, b)?;
        self.pairs.insert(key(a, b));
        self.struts.push((a, b));
        Ok(EdgeRef::Strut(self.struts.len() - 1))
    }

    pub fn add_cable(&mut self, a: usize, b: usize) -> Result<EdgeRef> {
        self.check_pair(a, b)?;
        self.pairs.insert(key(a, b));
        self.cables.push((a, b));
        Ok(EdgeRef::Cable(self.cables.len() - 1))
    }

    pub fn add_bar(&mut self, a: usize, b: usize) -> Result<EdgeRef> {
        self.check_pair(a, b)?;
        self.pairs.insert(key(a, b));
        self.bars.push((a, b));
        Ok(EdgeRef::Bar(self.bars.len() - 1))
    }

    /// Adds an isometry chain. Closed chains repeat their first vertex at the end.
    pub fn add_chain(&mut self, chain: Vec<usize>) -> Result<()> {
        if chain.len() < 2 {
            return Err(Error::Syntax("a chain needs at least two vertices".into()));
        }
        if let Some(&v) = chain.iter().find(|&&v| v >= self.vertex_count()) {
            return Err(Error::UnknownVertex { id: format!("#{v}") });
        }
        if let Some(w) = chain.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DegenerateChain {
                id: self.ids[w[0]].clone(),
            });
        }
        self.chains.push(chain);
        Ok(())
    }

    fn add_edge(&mut self, edge: EdgeRef, a: usize, b: usize) -> Result<EdgeRef> {
        match edge {
            EdgeRef::Strut(_) => self.add_strut(a, b),
            EdgeRef::Cable(_) => self.add_cable(a, b),
            EdgeRef::Bar(_) => self.add_bar(a, b),
        }
    }

    /// The same vertices and chains with only the listed edges.
    pub fn restrict(&self, keep: &[EdgeRef]) -> Tensegrity {
        let keep: HashSet<EdgeRef> = keep.iter().copied().collect();
        let mut sub = Tensegrity {
            struts: Vec::new(),
            cables: Vec::new(),
            bars: Vec::new(),
            pairs: HashSet::new(),
            ..self.clone()
        };
        for edge in self.edges() {
            if keep.contains(&edge) {
                let (a, b) = self.endpoints(edge);
                sub.add_edge(edge, a, b).expect("subset of a valid edge set");
            }
        }
        sub
    }

    /// A copy whose placement is replaced by `positions` (vertex-major).
    pub fn with_positions(&self, positions: &[f64], dim: usize) -> Result<Tensegrity> {
        if positions.len() != dim * self.vertex_count() {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for {} vertices in dimension {dim}",
                positions.len(),
                self.vertex_count()
            )));
        }
        let mut out = Tensegrity::new(dim)?;
        for (v, id) in self.ids.iter().enumerate() {
            out.add_vertex(id.clone(), &positions[v * dim..(v + 1) * dim])?;
        }
        for edge in self.edges() {
            let (a, b) = self.endpoints(edge);
            out.add_edge(edge, a, b)?;
        }
        for chain in &self.chains {
            out.add_chain(chain.clone())?;
        }
        Ok(out)
    }
}

/// Rows of the rigidity operator: struts, cables, then each bar as a strut
/// row followed by a cable row, all in input order.
pub fn edge_rows(t: &Tensegrity) -> Vec<EdgeRow> {
    let native = |kind, edge, endpoints| EdgeRow {
        kind,
        endpoints,
        origin: Origin::Native,
        edge,
    };
    let mut rows = Vec::with_capacity(t.struts.len() + t.cables.len() + 2 * t.bars.len());
    for (i, &e) in t.struts.iter().enumerate() {
        rows.push(native(RowKind::Strut, EdgeRef::Strut(i), e));
    }
    for (i, &e) in t.cables.iter().enumerate() {
        rows.push(native(RowKind::Cable, EdgeRef::Cable(i), e));
    }
    for (i, &e) in t.bars.iter().enumerate() {
        for kind in [RowKind::Strut, RowKind::Cable] {
            rows.push(EdgeRow {
                kind,
                endpoints: e,
                origin: Origin::BarExpansion,
                edge: EdgeRef::Bar(i),
            });
        }
    }
    rows
}

fn lookup(t: &Tensegrity, id: &str) -> Result<usize> {
    t.vertex_index(id).ok_or_else(|| Error::UnknownVertex { id: id.to_string() })
}

fn parse_line(t: &mut Option<Tensegrity>, tokens: &[&str]) -> Result<()> {
    let Some(t) = t.as_mut() else {
        if tokens[0] != "dim" {
            return Err(Error::Syntax("expected `dim <n>` before anything else".into()));
        }
        let [_, n] = tokens else {
            return Err(Error::Syntax("usage: dim <n>".into()));
        };
        let n: usize = n
            .parse()
            .map_err(|_| Error::Syntax(format!("bad dimension `{n}`")))?;
        *t = Some(Tensegrity::new(n)?);
        return Ok(());
    };
    match tokens[0] {
        "dim" => Err(Error::Syntax("`dim` given twice".into())),
        "vertex" => {
            if tokens.len() != 2 + t.dim() {
                return Err(Error::Syntax(format!(
                    "usage: vertex <id> followed by {} coordinates",
                    t.dim()
                )));
            }
            let coords = tokens[2..]
                .iter()
                .map(|s| {
                    s.parse::<f64>()
                        .ok()
                        .filter(|x| x.is_finite())
                        .ok_or_else(|| Error::Syntax(format!("bad coordinate `{s}`")))
                })
                .collect::<Result<Vec<f64>>>()?;
            t.add_vertex(tokens[1], &coords).map(|_| ())
        }
        kind @ ("strut" | "cable" | "bar") => {
            let [_, a, b] = tokens else {
                return Err(Error::Syntax(format!("usage: {kind} <id> <id>")));
            };
            let (a, b) = (lookup(t, a)?, lookup(t, b)?);
            match kind {
                "strut" => t.add_strut(a, b),
                "cable" => t.add_cable(a, b),
                _ => t.add_bar(a, b),
            }
            .map(|_| ())
        }
        "chain" => {
            let chain = tokens[1..]
                .iter()
                .map(|id| lookup(t, id))
                .collect::<Result<Vec<usize>>>()?;
            t.add_chain(chain)
        }
        other => Err(Error::Syntax(format!("unknown keyword `{other}`"))),
    }
}

/// Parses the text format; errors carry the offending line number.
pub fn parse(text: &str) -> Result<Tensegrity> {
    let mut t = None;
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        parse_line(&mut t, &tokens).map_err(|e| Error::Parse {
            line: n + 1,
            source: Box::new(e),
        })?;
    }
    t.ok_or_else(|| Error::Parse {
        line: text.lines().count().max(1),
        source: Box::new(Error::Syntax("missing `dim` line".into())),
    })
}

/// Writes the text format. Coordinates use the shortest decimal form that
/// reads back to the same bits, so `parse(&render(t)) == t`.
pub fn render(t: &Tensegrity) -> String {
    let mut out = format!("dim {}\n", t.dim());
    for v in 0..t.vertex_count() {
        out.push_str("vertex ");
        out.push_str(t.id(v));
        for x in t.position(v) {
            let _ = write!(out, " {x:?}");
        }
        out.push('\n');
    }
    let mut edges = |word: &str, list: &[(usize, usize)]| {
        for &(a, b) in list {
            let _ = writeln!(out, "{word} {} {}", t.id(a), t.id(b));
        }
    };
    edges("strut", t.struts());
    edges("cable", t.cables());
    edges("bar", t.bars());
    for chain in t.chains() {
        out.push_str("chain");
        for &v in chain {
            out.push(' ');
            out.push_str(t.id(v));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const CROSSED: &str = "# crossed square\ndim 2\nvertex 1 0 0\nvertex 2 1 0\nvertex 3 1 1\nvertex 4 0 1\n\
        strut 1 3\nstrut 2 4\ncable 1 2\ncable 2 3\ncable 3 4\ncable 1 4\n";

    #[test]
    fn parses_crossed_square() {
        let t = parse(CROSSED).unwrap();
        assert_eq!(t.vertex_count(), 4);
        assert_eq!((t.struts().len(), t.cables().len(), t.bars().len()), (2, 4, 0));
        assert_eq!(t.position(2), &[1.0, 1.0]);
        assert_eq!(edge_rows(&t).len(), 6);
    }

    #[test]
    fn single_vertex_without_edges() {
        let t = parse("dim 2\nvertex a 0.5 -1e-3\n").unwrap();
        assert_eq!(t.vertex_count(), 1);
        assert_eq!(t.edge_count(), 0);
        assert!(edge_rows(&t).is_empty());
    }

    #[test]
    fn strut_and_cable_on_one_pair_is_rejected() {
        let err = parse("dim 1\nvertex a 0\nvertex b 1\nstrut a b\ncable b a\n").unwrap_err();
        assert_eq!(err.to_string(), "line 5: duplicate pair b a; duplicate pair across edge sets forbidden unless declared as bar");
    }

    #[test]
    fn reports_errors_with_line_numbers() {
        let cases = [
            ("vertex a 0 0\n", 1),
            ("dim 2\nvertex a 0 0\nvertex a 1 0\n", 3),
            ("dim 2\nvertex a 0 0\nstrut a z\n", 3),
            ("dim 2\nvertex a 0 0\nstrut a a\n", 3),
            ("dim 2\nvertex a 0 0\nvertex b 0 0\n", 3),
            ("dim 2\nvertex a 0 x\n", 2),
            ("dim 2\n\nvertex a 0 0 0\n", 3),
            ("dim 2\nvertex a 0 0\nvertex b 1 0\nchain a a b\n", 4),
            ("dim 2\nwheel a\n", 2),
        ];
        for (text, line) in cases {
            match parse(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn bar_expands_to_strut_then_cable_row() {
        let text = CROSSED.replace("strut 2 4\n", "bar 4 2\n");
        let t = parse(&text).unwrap();
        let rows = edge_rows(&t);
        assert_eq!(rows.len(), 7);
        assert_eq!(rows[5].kind, RowKind::Strut);
        assert_eq!(rows[6].kind, RowKind::Cable);
        assert_eq!(rows[5].endpoints, rows[6].endpoints);
        assert!(rows[5..].iter().all(|r| r.origin == Origin::BarExpansion && r.edge == EdgeRef::Bar(0)));
    }

    #[test]
    fn round_trips_chains_and_awkward_coordinates() {
        let mut t = Tensegrity::new(2).unwrap();
        let xs = [0.1, 1.0 / 3.0, -2.5e-300, 1e300, std::f64::consts::PI, -0.0];
        for (i, &x) in xs.iter().enumerate() {
            t.add_vertex(format!("v{i}"), &[x, i as f64]).unwrap();
        }
        t.add_bar(0, 1).unwrap();
        t.add_chain(vec![0, 2, 4, 0]).unwrap();
        let back = parse(&render(&t)).unwrap();
        assert_eq!(back, t);
        assert!(back.position(5)[0].is_sign_negative());
    }

    #[test]
    fn restrict_keeps_vertices_and_chains() {
        let t = parse(&format!("{CROSSED}chain 1 2 3\n")).unwrap();
        let sub = t.restrict(&[EdgeRef::Cable(1), EdgeRef::Strut(0)]);
        assert_eq!(sub.vertex_count(), 4);
        assert_eq!(sub.struts(), &[(0, 2)]);
        assert_eq!(sub.cables(), &[(1, 2)]);
        assert_eq!(sub.chains().len(), 1);
    }
}
