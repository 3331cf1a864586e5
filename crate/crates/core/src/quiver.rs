//! The quiver of the regular block: one vertex per Weyl group element,
//! `dim Hom¹(V_y, V_w)` arrows `y → w`, and quadratic relators read off the
//! entries of `d̃²`, where `d̃ = Σ a^k_{y,w} ⊗ A^k_{y,w}` over arrows.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactalg::{format_rational, parse_rational, QMatrix, QVector, Rational};
use crate::homspace::all_hom_bases;
use crate::rootsystem::Elem;
use crate::schubert::CohRing;
use crate::soergel::ModuleFamily;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub source: Elem,
    pub target: Elem,
    pub index: usize,
}

/// The length-two path `source →(first) via →(second) target`. The derived
/// order sorts paths of one pair by `(via, first, second)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PathId {
    pub source: Elem,
    pub target: Elem,
    pub via: Elem,
    pub first: usize,
    pub second: usize,
}

impl PathId {
    pub fn first_arrow(&self) -> Arrow {
        Arrow {
            source: self.source,
            target: self.via,
            index: self.first,
        }
    }

    pub fn second_arrow(&self) -> Arrow {
        Arrow {
            source: self.via,
            target: self.target,
            index: self.second,
        }
    }
}

/// A rational combination of length-two paths with common endpoints.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PathCombo {
    terms: BTreeMap<PathId, Rational>,
}

impl PathCombo {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, p: PathId, c: Rational) {
        let e = self.terms.entry(p).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&p);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PathId, &Rational)> {
        self.terms.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(source, target)` of the paths, if any.
    pub fn endpoints(&self) -> Option<(Elem, Elem)> {
        self.terms.keys().next().map(|p| (p.source, p.target))
    }

    fn from_row(paths: &[PathId], row: &[Rational]) -> Self {
        let mut out = Self::new();
        for (p, c) in paths.iter().zip(row) {
            if !c.is_zero() {
                out.terms.insert(*p, c.clone());
            }
        }
        out
    }

    fn to_row(&self, paths: &[PathId]) -> Option<QVector> {
        let mut row = vec![Rational::zero(); paths.len()];
        for (p, c) in &self.terms {
            let k = paths.binary_search(p).ok()?;
            row[k] = c.clone();
        }
        Some(row)
    }
}

/// Arrows with their maps.
#[derive(Clone, Debug)]
pub struct Quiver {
    label: String,
    rank: usize,
    names: Vec<String>,
    lengths: Vec<usize>,
    arrows: Vec<Arrow>,
    /// `maps[y][w][k] = A^k_{y,w}`, a `dim V_w × dim V_y` matrix.
    maps: Vec<Vec<Vec<QMatrix>>>,
}

pub fn build_quiver(ring: &CohRing, family: &ModuleFamily) -> Quiver {
    let group = ring.group();
    let maps: Vec<Vec<Vec<QMatrix>>> = all_hom_bases(ring, family, 1)
        .into_iter()
        .map(|row| row.into_iter().map(|h| h.basis).collect())
        .collect();
    let mut arrows = Vec::new();
    for y in group.elements() {
        for w in group.elements() {
            arrows.extend((0..maps[y.0][w.0].len()).map(|index| Arrow {
                source: y,
                target: w,
                index,
            }));
        }
    }
    Quiver {
        label: group.root_system().cartan_type().to_string(),
        rank: group.rank(),
        names: group.elements().map(|w| group.name(w)).collect(),
        lengths: group.elements().map(|w| group.length(w)).collect(),
        arrows,
        maps,
    }
}

impl Quiver {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Elem> {
        (0..self.names.len()).map(Elem)
    }

    pub fn name(&self, w: Elem) -> &str {
        &self.names[w.0]
    }

    pub fn length(&self, w: Elem) -> usize {
        self.lengths[w.0]
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow_count(&self, y: Elem, w: Elem) -> usize {
        self.maps[y.0][w.0].len()
    }

    pub fn arrow_map(&self, a: Arrow) -> &QMatrix {
        &self.maps[a.source.0][a.target.0][a.index]
    }

    /// `A^k_{y,w}` for all `k`.
    pub fn maps(&self, y: Elem, w: Elem) -> &[QMatrix] {
        &self.maps[y.0][w.0]
    }

    pub fn has_arrow(&self, a: Arrow) -> bool {
        a.source.0 < self.names.len() && a.target.0 < self.names.len() && a.index < self.arrow_count(a.source, a.target)
    }

    /// Length-two paths `y → w` in canonical order.
    pub fn paths(&self, y: Elem, w: Elem) -> Vec<PathId> {
        let mut out = Vec::new();
        for z in self.vertices() {
            for first in 0..self.arrow_count(y, z) {
                for second in 0..self.arrow_count(z, w) {
                    out.push(PathId {
                        source: y,
                        target: w,
                        via: z,
                        first,
                        second,
                    });
                }
            }
        }
        out
    }

    /// The composite `A^i_{z,w}·A^j_{y,z}` a path acts by.
    pub fn path_map(&self, p: &PathId) -> QMatrix {
        self.arrow_map(p.second_arrow()) * self.arrow_map(p.first_arrow())
    }
}

/// Relator bases per ordered pair, each in RREF over the pair's paths.
/// Pairs with at least one path are present, possibly with an empty basis.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Relators {
    blocks: BTreeMap<(Elem, Elem), Vec<PathCombo>>,
}

impl Relators {
    pub fn block(&self, y: Elem, w: Elem) -> &[PathCombo] {
        self.blocks.get(&(y, w)).map_or(&[], Vec::as_slice)
    }

    pub fn blocks(&self) -> impl Iterator<Item = (&(Elem, Elem), &Vec<PathCombo>)> {
        self.blocks.iter()
    }

    pub fn total(&self) -> usize {
        self.blocks.values().map(Vec::len).sum()
    }

    pub fn all(&self) -> impl Iterator<Item = &PathCombo> {
        self.blocks.values().flatten()
    }
}

/// Every entry of every block of `d̃²`, row-reduced per pair.
pub fn relators(q: &Quiver) -> Relators {
    let pairs: Vec<(Elem, Elem)> = q.vertices().flat_map(|y| q.vertices().map(move |w| (y, w))).collect();
    let blocks = pairs
        .par_iter()
        .filter_map(|&(y, w)| {
            let paths = q.paths(y, w);
            if paths.is_empty() {
                return None;
            }
            let composites: Vec<QMatrix> = paths.iter().map(|p| q.path_map(p)).collect();
            let (rows, cols) = (composites[0].rows(), composites[0].cols());
            let entries: Vec<QVector> = (0..rows)
                .flat_map(|r| (0..cols).map(move |c| (r, c)))
                .map(|(r, c)| composites.iter().map(|m| m[(r, c)].clone()).collect::<QVector>())
                .filter(|row| row.iter().any(|x| !x.is_zero()))
                .collect();
            Some(((y, w), row_basis(&paths, entries)))
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    Relators { blocks }
}

fn row_basis(paths: &[PathId], rows: Vec<QVector>) -> Vec<PathCombo> {
    if rows.is_empty() {
        return Vec::new();
    }
    let (r, pivots) = QMatrix::from_rows(rows, paths.len())
        .expect("rows match path count")
        .rref();
    (0..pivots.len())
        .map(|k| PathCombo::from_row(paths, r.row(k)))
        .collect()
}

fn rank_of(rows: Vec<QVector>, width: usize) -> usize {
    if rows.is_empty() {
        0
    } else {
        QMatrix::from_rows(rows, width).expect("uniform rows").rank()
    }
}

/// Whether `candidate` spans the same space as `computed`, pair by pair.
pub fn verify_relator_space(q: &Quiver, computed: &Relators, candidate: &[PathCombo]) -> Result<bool> {
    let mut grouped: BTreeMap<(Elem, Elem), Vec<&PathCombo>> = BTreeMap::new();
    for combo in candidate {
        let Some(pair) = combo.endpoints() else { continue };
        for (p, _) in combo.terms() {
            if (p.source, p.target) != pair {
                return Err(Error::MalformedPath(
                    "a relator mixes paths with different endpoints".into(),
                ));
            }
            if !q.has_arrow(p.first_arrow()) || !q.has_arrow(p.second_arrow()) {
                return Err(Error::MalformedPath(format!(
                    "no arrows for path {} → {} → {}",
                    vertex_name(q, p.source),
                    vertex_name(q, p.via),
                    vertex_name(q, p.target)
                )));
            }
        }
        grouped.entry(pair).or_default().push(combo);
    }
    let keys: BTreeSet<(Elem, Elem)> = grouped.keys().chain(computed.blocks.keys()).copied().collect();
    for (y, w) in keys {
        let paths = q.paths(y, w);
        let ours: Vec<QVector> = computed
            .block(y, w)
            .iter()
            .map(|c| c.to_row(&paths).expect("computed relator uses known paths"))
            .collect();
        let theirs: Vec<QVector> = grouped
            .get(&(y, w))
            .into_iter()
            .flatten()
            .map(|c| c.to_row(&paths).expect("paths were validated"))
            .collect();
        let a = rank_of(ours.clone(), paths.len());
        let b = rank_of(theirs.clone(), paths.len());
        let both = rank_of(ours.into_iter().chain(theirs).collect(), paths.len());
        if a != b || a != both {
            return Ok(false);
        }
    }
    Ok(true)
}

fn vertex_name(q: &Quiver, w: Elem) -> String {
    q.names.get(w.0).cloned().unwrap_or_else(|| format!("#{}", w.0))
}

/// Re-expresses relators in rescaled arrows `b = a / λ_a`, i.e. `a = λ_a·b`,
/// and row-reduces again.
pub fn rescale_arrows(q: &Quiver, rels: &Relators, scale: impl Fn(Arrow) -> Rational) -> Relators {
    let blocks = rels
        .blocks
        .iter()
        .map(|(&(y, w), basis)| {
            let paths = q.paths(y, w);
            let rows: Vec<QVector> = basis
                .iter()
                .map(|c| {
                    let mut row = c.to_row(&paths).expect("relator uses known paths");
                    for (x, p) in row.iter_mut().zip(&paths) {
                        *x *= scale(p.first_arrow()) * scale(p.second_arrow());
                    }
                    row
                })
                .collect();
            ((y, w), row_basis(&paths, rows))
        })
        .collect();
    Relators { blocks }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairDims {
    pub source: Elem,
    pub target: Elem,
    pub paths: usize,
    pub relators: usize,
    pub quotient: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadraticDims {
    pub pairs: Vec<PairDims>,
    pub paths: usize,
    pub relators: usize,
    pub quotient: usize,
}

pub fn quadratic_dims(q: &Quiver, rels: &Relators) -> QuadraticDims {
    let pairs: Vec<PairDims> = q
        .vertices()
        .flat_map(|y| q.vertices().map(move |w| (y, w)))
        .filter_map(|(y, w)| {
            let paths = q.paths(y, w).len();
            (paths > 0).then(|| {
                let relators = rels.block(y, w).len();
                PairDims {
                    source: y,
                    target: w,
                    paths,
                    relators,
                    quotient: paths - relators,
                }
            })
        })
        .collect();
    let paths = pairs.iter().map(|p| p.paths).sum();
    let relators = pairs.iter().map(|p| p.relators).sum();
    QuadraticDims {
        pairs,
        paths,
        relators,
        quotient: paths - relators,
    }
}

/// Whether every relator coefficient is `±1`. Observational only.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PmOneReport {
    pub system: String,
    pub relators: usize,
    pub all_pm_one: bool,
    /// Coefficients outside `{±1}`, as `"p/q"` strings.
    pub other_coefficients: Vec<String>,
    pub offending_pairs: Vec<(Elem, Elem)>,
}

pub fn pm_one_report(q: &Quiver, rels: &Relators) -> PmOneReport {
    let mut other = BTreeSet::new();
    let mut offending = Vec::new();
    for (&pair, basis) in &rels.blocks {
        let mut bad = false;
        for (_, c) in basis.iter().flat_map(PathCombo::terms) {
            if !c.abs().is_one() {
                other.insert(c.clone());
                bad = true;
            }
        }
        if bad {
            offending.push(pair);
        }
    }
    PmOneReport {
        system: q.label.clone(),
        relators: rels.total(),
        all_pm_one: offending.is_empty(),
        other_coefficients: other.iter().map(format_rational).collect(),
        offending_pairs: offending,
    }
}

/// Vertex ids for export: `ids[w]` is the printed number of `w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Numbering {
    ids: Vec<usize>,
}

impl Numbering {
    /// `1, 2, …` in canonical order.
    pub fn canonical(n: usize) -> Self {
        Numbering { ids: (1..=n).collect() }
    }

    pub fn from_ids(ids: Vec<usize>) -> Result<Self> {
        let distinct: BTreeSet<_> = ids.iter().collect();
        if distinct.len() != ids.len() {
            return Err(Error::Shape("vertex ids must be distinct".into()));
        }
        Ok(Numbering { ids })
    }

    pub fn id(&self, w: Elem) -> usize {
        self.ids[w.0]
    }

    pub fn lookup(&self, id: usize) -> Option<Elem> {
        self.ids.iter().position(|&x| x == id).map(Elem)
    }

    fn compact(&self) -> bool {
        self.ids.iter().all(|&i| i < 10)
    }
}

fn fmt_vertices(num: &Numbering, vs: &[Elem]) -> String {
    let ids: Vec<String> = vs.iter().map(|&v| num.id(v).to_string()).collect();
    if num.compact() {
        format!("({})", ids.concat())
    } else {
        format!("({})", ids.join(","))
    }
}

fn fmt_arrow(num: &Numbering, a: &Arrow, multi: bool) -> String {
    let base = fmt_vertices(num, &[a.source, a.target]);
    if multi {
        format!("{base}{{{}}}", a.index)
    } else {
        base
    }
}

fn fmt_path(q: &Quiver, num: &Numbering, p: &PathId) -> String {
    let base = fmt_vertices(num, &[p.source, p.via, p.target]);
    let multi = q.arrow_count(p.source, p.via) > 1 || q.arrow_count(p.via, p.target) > 1;
    if multi {
        format!("{base}{{{},{}}}", p.first, p.second)
    } else {
        base
    }
}

/// `"(252) + (212)"`, `"(464) - (424)"`, `"2(121) - 1/2(131)"`.
pub fn format_combo(q: &Quiver, num: &Numbering, c: &PathCombo) -> String {
    let mut out = String::new();
    for (p, coeff) in c.terms() {
        let neg = coeff.is_negative();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let a = coeff.abs();
        if !a.is_one() {
            out.push_str(&format_rational(&a));
        }
        out.push_str(&fmt_path(q, num, p));
    }
    out
}

/// Parses a relator list in the text notation: relators separated by commas
/// or newlines (commas inside parentheses or braces belong to the path),
/// optional surrounding braces, terms like `-1/2(243)` or `(12,4,7){0,1}`.
pub fn parse_relators(q: &Quiver, num: &Numbering, text: &str) -> Result<Vec<PathCombo>> {
    let body = text.trim().trim_start_matches('{').trim_end_matches('}');
    let mut items = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in body.chars() {
        match ch {
            '(' | '{' => depth += 1,
            ')' | '}' => depth -= 1,
            _ => {}
        }
        if (ch == ',' || ch == '\n') && depth == 0 {
            items.push(std::mem::take(&mut cur));
        } else {
            cur.push(ch);
        }
    }
    items.push(cur);
    items
        .iter()
        .map(|s| s.trim().trim_end_matches('.'))
        .filter(|s| !s.is_empty())
        .map(|s| parse_combo(q, num, s))
        .collect()
}

fn parse_combo(q: &Quiver, num: &Numbering, s: &str) -> Result<PathCombo> {
    let bad = |why: &str| Error::MalformedPath(format!("{why} in `{s}`"));
    let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut out = PathCombo::new();
    let mut k = 0;
    while k < chars.len() {
        let mut sign = Rational::one();
        while k < chars.len() && (chars[k] == '+' || chars[k] == '-') {
            if chars[k] == '-' {
                sign = -sign;
            }
            k += 1;
        }
        let start = k;
        while k < chars.len() && (chars[k].is_ascii_digit() || chars[k] == '/') {
            k += 1;
        }
        let coeff = if k > start {
            parse_rational(&chars[start..k].iter().collect::<String>())?
        } else {
            Rational::one()
        };
        if chars.get(k) != Some(&'(') {
            return Err(bad("expected `(`"));
        }
        let close = chars[k..]
            .iter()
            .position(|&c| c == ')')
            .ok_or_else(|| bad("unclosed `(`"))?
            + k;
        let inner: String = chars[k + 1..close].iter().collect();
        k = close + 1;
        let ids: Vec<usize> = if inner.contains(',') {
            inner
                .split(',')
                .map(|t| t.parse().map_err(|_| bad("bad vertex id")))
                .collect::<Result<_>>()?
        } else {
            inner
                .chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| bad("bad vertex id")))
                .collect::<Result<_>>()?
        };
        if ids.len() != 3 {
            return Err(bad("a path needs exactly three vertices"));
        }
        let v: Vec<Elem> = ids
            .iter()
            .map(|&i| num.lookup(i).ok_or_else(|| bad(&format!("unknown vertex {i}"))))
            .collect::<Result<_>>()?;
        let (mut first, mut second) = (0, 0);
        if chars.get(k) == Some(&'{') {
            let close = chars[k..]
                .iter()
                .position(|&c| c == '}')
                .ok_or_else(|| bad("unclosed `{`"))?
                + k;
            let idx: String = chars[k + 1..close].iter().collect();
            let parts: Vec<usize> = idx
                .split(',')
                .map(|t| t.parse().map_err(|_| bad("bad arrow index")))
                .collect::<Result<_>>()?;
            let [a, b] = parts[..] else {
                return Err(bad("arrow indices come in pairs"));
            };
            (first, second) = (a, b);
            k = close + 1;
        }
        let p = PathId {
            source: v[0],
            via: v[1],
            target: v[2],
            first,
            second,
        };
        if !q.has_arrow(p.first_arrow()) || !q.has_arrow(p.second_arrow()) {
            return Err(bad("path uses a missing arrow"));
        }
        out.add_term(p, sign * coeff);
    }
    if out.is_empty() {
        return Err(bad("empty relator"));
    }
    Ok(out)
}

pub fn to_text(q: &Quiver, rels: &Relators, num: &Numbering) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# {}: {} vertices, {} arrows, {} relators",
        q.label,
        q.vertex_count(),
        q.arrows.len(),
        rels.total()
    );
    let mut order: Vec<Elem> = q.vertices().collect();
    order.sort_by_key(|&w| num.id(w));
    for w in order {
        let _ = writeln!(out, "vertex {} = {}", num.id(w), q.name(w));
    }
    let arrows: Vec<String> = q
        .arrows
        .iter()
        .map(|a| fmt_arrow(num, a, q.arrow_count(a.source, a.target) > 1))
        .collect();
    let _ = writeln!(out, "arrows: {}", arrows.join(" "));
    let _ = writeln!(out, "relators:");
    for c in rels.all() {
        let _ = writeln!(out, "{}", format_combo(q, num, c));
    }
    out
}

pub fn to_json(q: &Quiver, rels: &Relators, num: &Numbering) -> Value {
    let vertices: Vec<Value> = q
        .vertices()
        .map(|w| json!({"id": num.id(w), "word": q.name(w), "length": q.length(w)}))
        .collect();
    let arrows: Vec<Value> = q
        .arrows
        .iter()
        .map(|a| json!({"from": num.id(a.source), "to": num.id(a.target), "index": a.index}))
        .collect();
    let relations: Vec<Value> = rels
        .blocks
        .iter()
        .flat_map(|(&(y, w), basis)| {
            basis.iter().map(move |c| {
                let terms: Vec<Value> = c
                    .terms()
                    .map(|(p, coeff)| {
                        json!({
                            "path": [num.id(p.source), p.first, num.id(p.via), p.second, num.id(p.target)],
                            "coeff": format_rational(coeff),
                        })
                    })
                    .collect();
                json!({"source": num.id(y), "target": num.id(w), "terms": terms})
            })
        })
        .collect();
    json!({
        "system": {"type": q.label, "rank": q.rank},
        "vertices": vertices,
        "arrows": arrows,
        "relations": relations,
    })
}

/// Reads the `relations` of a JSON export back as path combinations.
pub fn relators_from_json(q: &Quiver, num: &Numbering, doc: &Value) -> Result<Vec<PathCombo>> {
    let bad = |why: &str| Error::MalformedPath(why.to_string());
    let rels = doc
        .get("relations")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing `relations` array"))?;
    let vertex = |v: &Value| -> Result<Elem> {
        v.as_u64()
            .and_then(|i| num.lookup(i as usize))
            .ok_or_else(|| bad(&format!("unknown vertex {v}")))
    };
    let index = |v: &Value| -> Result<usize> { v.as_u64().map(|i| i as usize).ok_or_else(|| bad("bad arrow index")) };
    rels.iter()
        .map(|r| {
            let terms = r
                .get("terms")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("relation without `terms`"))?;
            let mut combo = PathCombo::new();
            for t in terms {
                let path = t
                    .get("path")
                    .and_then(Value::as_array)
                    .filter(|p| p.len() == 5)
                    .ok_or_else(|| bad("path must have five entries"))?;
                let p = PathId {
                    source: vertex(&path[0])?,
                    first: index(&path[1])?,
                    via: vertex(&path[2])?,
                    second: index(&path[3])?,
                    target: vertex(&path[4])?,
                };
                if !q.has_arrow(p.first_arrow()) || !q.has_arrow(p.second_arrow()) {
                    return Err(bad("path uses a missing arrow"));
                }
                let coeff = t
                    .get("coeff")
                    .and_then(Value::as_str)
                    .ok_or_else(|| bad("term without `coeff`"))?;
                combo.add_term(p, parse_rational(coeff)?);
            }
            Ok(combo)
        })
        .collect()
}

pub fn to_dot(q: &Quiver, rels: &Relators, num: &Numbering) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph quiver {{");
    let _ = writeln!(out, "  // {}: {} relators", q.label, rels.total());
    for w in q.vertices() {
        let _ = writeln!(out, "  v{} [label=\"{}: {}\"];", num.id(w), num.id(w), q.name(w));
    }
    for a in &q.arrows {
        let _ = writeln!(
            out,
            "  v{} -> v{} [label=\"{}\"];",
            num.id(a.source),
            num.id(a.target),
            a.index
        );
    }
    for c in rels.all() {
        let _ = writeln!(out, "  // {}", format_combo(q, num, c));
    }
    let _ = writeln!(out, "}}");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;
    use crate::rootsystem::{CartanType, WeylGroup};
    use crate::soergel::{build_all, BuildMode};

    fn setup(label: &str) -> (CohRing, Quiver, Relators) {
        let ct: CartanType = label.parse().unwrap();
        let ring = CohRing::build(WeylGroup::of_type(ct).unwrap()).unwrap();
        let fam = build_all(&ring, BuildMode::Shortcut).unwrap();
        let q = build_quiver(&ring, &fam);
        let r = relators(&q);
        (ring, q, r)
    }

    #[test]
    fn a1_single_relator() {
        let (_, q, r) = setup("A1");
        assert_eq!(q.arrows().len(), 2);
        assert_eq!(r.total(), 1);
        let s = Elem(1);
        let rel = r.block(s, s);
        assert_eq!(rel.len(), 1);
        let terms: Vec<_> = rel[0].terms().collect();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].0.via, Elem::IDENTITY);
        assert!(r.block(Elem::IDENTITY, Elem::IDENTITY).is_empty());
        let d = quadratic_dims(&q, &r);
        assert_eq!((d.paths, d.relators, d.quotient), (2, 1, 1));
    }

    #[test]
    fn a2_counts() {
        let (_, q, r) = setup("A2");
        assert_eq!(q.vertex_count(), 6);
        assert_eq!(q.arrows().len(), 16);
        assert_eq!(r.total(), 22);
        let w0 = Elem(5);
        assert_eq!(r.block(w0, w0).len(), 2);
        assert!(verify_relator_space(&q, &r, &r.all().cloned().collect::<Vec<_>>()).unwrap());
        assert!(!verify_relator_space(&q, &r, &[]).unwrap());
    }

    #[test]
    fn text_round_trip() {
        let (_, q, r) = setup("B2");
        let num = Numbering::canonical(q.vertex_count());
        let text = to_text(&q, &r, &num);
        let body = text.split("relators:\n").nth(1).unwrap();
        let parsed = parse_relators(&q, &num, body).unwrap();
        assert_eq!(parsed.len(), r.total());
        assert!(verify_relator_space(&q, &r, &parsed).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let (_, q, r) = setup("A2");
        let num = Numbering::canonical(6);
        let doc = to_json(&q, &r, &num);
        let back = relators_from_json(&q, &num, &doc).unwrap();
        assert!(verify_relator_space(&q, &r, &back).unwrap());
        let s = serde_json::to_string(&doc).unwrap();
        assert!(s.contains("\"relations\""));
    }

    #[test]
    fn malformed_paths_are_rejected() {
        let (_, q, r) = setup("A2");
        let num = Numbering::canonical(6);
        // e → e has no arrow.
        assert!(parse_relators(&q, &num, "(112)").is_err());
        assert!(parse_relators(&q, &num, "(12)").is_err());
        let mut bogus = PathCombo::new();
        bogus.add_term(
            PathId {
                source: Elem(0),
                target: Elem(0),
                via: Elem(1),
                first: 3,
                second: 0,
            },
            rat(1),
        );
        assert!(matches!(
            verify_relator_space(&q, &r, &[bogus]),
            Err(Error::MalformedPath(_))
        ));
    }

    #[test]
    fn rescaling_changes_basis_not_dimension() {
        let (_, q, r) = setup("A2");
        let s = rescale_arrows(&q, &r, |a| rat(a.source.0 as i64 + 2));
        assert_eq!(s.total(), r.total());
        let back = rescale_arrows(&q, &s, |a| Rational::one() / rat(a.source.0 as i64 + 2));
        assert_eq!(back, r);
    }

    #[test]
    fn parser_accepts_coefficients_and_indices() {
        let (_, q, _) = setup("A2");
        let num = Numbering::canonical(6);
        let c = parse_relators(&q, &num, "{ 2(121) - 1/2(131), -(212){0,0} }").unwrap();
        assert_eq!(c.len(), 2);
        let first: Vec<_> = c[0].terms().map(|(_, x)| x.clone()).collect();
        assert_eq!(first, vec![rat(2), -crate::exactalg::ratio(1, 2)]);
    }
}
