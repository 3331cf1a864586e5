//! IC-modules over the flag variety: a vector space `M_w` per Schubert cell
//! and boundary maps `v(y,w) = Σ_k A^k_{y,w} ⊗ B^k` in
//! `Hom¹(V_y, V_w) ⊗ Hom(M_y, M_w)`, subject to `d² = 0` on the total complex
//! `⊕_w V_w ⊗ M_w`.
//!
//! Boundaries are kept in coordinates of the quiver's arrow bases, so an
//! IC-module and a representation of the quiver are literally the same data.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactalg::{format_rational, parse_rational, rat, solve, QMatrix, Rational};
use crate::quiver::{Arrow, Quiver, Relators};
use crate::rootsystem::{CartanType, Elem, WeylGroup};
use crate::schubert::CohRing;
use crate::soergel::{hom_degree0, ModuleFamily};

/// Stalk dimensions and boundary data. Boundary entries are keyed by arrow;
/// zero matrices are dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ICModule {
    stalks: Vec<usize>,
    boundary: BTreeMap<Arrow, QMatrix>,
}

/// A representation of the quiver: a space per vertex and a map per arrow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverRep {
    pub stalks: Vec<usize>,
    pub maps: BTreeMap<Arrow, QMatrix>,
}

/// A nonzero entry of `d²`, located in the block `from → to`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub from: Elem,
    pub to: Elem,
    pub row: usize,
    pub col: usize,
    pub value: Rational,
}

impl ICModule {
    /// Checks shapes against the quiver and drops zero maps.
    pub fn new(q: &Quiver, stalks: Vec<usize>, boundary: BTreeMap<Arrow, QMatrix>) -> Result<Self> {
        if stalks.len() != q.vertex_count() {
            return Err(Error::Shape(format!(
                "{} stalks given for {} vertices",
                stalks.len(),
                q.vertex_count()
            )));
        }
        let mut kept = BTreeMap::new();
        for (a, m) in boundary {
            if !q.has_arrow(a) {
                return Err(Error::InvalidModule(format!(
                    "boundary {} → {} index {} is not an arrow",
                    q.name(a.source),
                    q.name(a.target),
                    a.index
                )));
            }
            let (r, c) = (stalks[a.target.0], stalks[a.source.0]);
            if m.rows() != r || m.cols() != c {
                return Err(Error::Shape(format!(
                    "boundary {} → {} index {} is {}x{}, stalks need {r}x{c}",
                    q.name(a.source),
                    q.name(a.target),
                    a.index,
                    m.rows(),
                    m.cols()
                )));
            }
            if !m.is_zero() {
                kept.insert(a, m);
            }
        }
        Ok(ICModule { stalks, boundary: kept })
    }

    /// One-dimensional stalk at `w`, nothing else.
    pub fn simple(q: &Quiver, w: Elem) -> Self {
        let mut stalks = vec![0; q.vertex_count()];
        stalks[w.0] = 1;
        ICModule {
            stalks,
            boundary: BTreeMap::new(),
        }
    }

    pub fn stalks(&self) -> &[usize] {
        &self.stalks
    }

    pub fn boundary(&self) -> &BTreeMap<Arrow, QMatrix> {
        &self.boundary
    }

    /// `v(y,w)` as a map `V_y ⊗ M_y → V_w ⊗ M_w`; `None` when zero.
    fn block(&self, q: &Quiver, y: Elem, w: Elem) -> Option<QMatrix> {
        let mut acc: Option<QMatrix> = None;
        for (k, a) in q.maps(y, w).iter().enumerate() {
            let key = Arrow {
                source: y,
                target: w,
                index: k,
            };
            if let Some(b) = self.boundary.get(&key) {
                let t = a.kronecker(b);
                match &mut acc {
                    Some(m) => m.add_scaled(&t, &rat(1)),
                    None => acc = Some(t),
                }
            }
        }
        acc
    }

    /// `None` if `d² = 0`, otherwise the first nonzero entry in canonical
    /// block order.
    pub fn d_squared_witness(&self, q: &Quiver) -> Option<Witness> {
        let n = q.vertex_count();
        let blocks: BTreeMap<(Elem, Elem), QMatrix> = self
            .boundary
            .keys()
            .map(|a| (a.source, a.target))
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .filter_map(|(y, w)| self.block(q, y, w).map(|b| ((y, w), b)))
            .collect();
        for y in (0..n).map(Elem) {
            for w in (0..n).map(Elem) {
                let mut acc: Option<QMatrix> = None;
                for z in (0..n).map(Elem) {
                    let (Some(first), Some(second)) = (blocks.get(&(y, z)), blocks.get(&(z, w))) else {
                        continue;
                    };
                    let t = second * first;
                    match &mut acc {
                        Some(m) => m.add_scaled(&t, &rat(1)),
                        None => acc = Some(t),
                    }
                }
                if let Some((row, col, value)) = acc.as_ref().and_then(|m| m.nonzero_entries().next()) {
                    return Some(Witness {
                        from: y,
                        to: w,
                        row,
                        col,
                        value: value.clone(),
                    });
                }
            }
        }
        None
    }

    /// The Chain Complex Axiom `d² = 0`.
    pub fn validate(&self, q: &Quiver) -> bool {
        self.d_squared_witness(q).is_none()
    }

    pub fn to_rep(&self) -> QuiverRep {
        QuiverRep {
            stalks: self.stalks.clone(),
            maps: self.boundary.clone(),
        }
    }
}

pub fn from_quiver_rep(q: &Quiver, rep: &QuiverRep) -> Result<ICModule> {
    ICModule::new(q, rep.stalks.clone(), rep.maps.clone())
}

/// Whether every relator acts as zero, a path `y → z → w` acting by
/// `B_{z,w}·B_{y,z}`.
pub fn rep_satisfies_relations(q: &Quiver, rels: &Relators, rep: &QuiverRep) -> bool {
    debug_assert_eq!(rep.stalks.len(), q.vertex_count());
    let zero = |a: &Arrow| QMatrix::zeros(rep.stalks[a.target.0], rep.stalks[a.source.0]);
    let map = |a: Arrow| rep.maps.get(&a).cloned().unwrap_or_else(|| zero(&a));
    rels.all().all(|rel| {
        let Some((y, w)) = rel.endpoints() else { return true };
        let mut acc = QMatrix::zeros(rep.stalks[w.0], rep.stalks[y.0]);
        for (p, c) in rel.terms() {
            let t = &map(p.second_arrow()) * &map(p.first_arrow());
            acc.add_scaled(&t, c);
        }
        acc.is_zero()
    })
}

/// `⊕_w V_w ⊗ M_w`, graded by the `V_w` degree, with its differential.
#[derive(Clone, Debug)]
pub struct TotalComplex {
    degrees: Vec<i32>,
    d: QMatrix,
}

impl TotalComplex {
    pub fn build(family: &ModuleFamily, q: &Quiver, m: &ICModule) -> Self {
        let n = q.vertex_count();
        let mut offsets = Vec::with_capacity(n);
        let mut degrees = Vec::new();
        for w in (0..n).map(Elem) {
            offsets.push(degrees.len());
            for &d in family.module(w).degrees() {
                degrees.extend(std::iter::repeat_n(d, m.stalks[w.0]));
            }
        }
        let mut d = QMatrix::zeros(degrees.len(), degrees.len());
        let pairs: std::collections::BTreeSet<(Elem, Elem)> = m.boundary.keys().map(|a| (a.source, a.target)).collect();
        for (y, w) in pairs {
            if let Some(b) = m.block(q, y, w) {
                for (r, c, x) in b.nonzero_entries() {
                    d[(offsets[w.0] + r, offsets[y.0] + c)] = x.clone();
                }
            }
        }
        TotalComplex { degrees, d }
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    pub fn differential(&self) -> &QMatrix {
        &self.d
    }

    /// Every nonzero entry of `d` raises degree by exactly one.
    pub fn is_degree_one(&self) -> bool {
        self.d
            .nonzero_entries()
            .all(|(r, c, _)| self.degrees[r] == self.degrees[c] + 1)
    }

    /// The component `C^n → C^{n+1}`.
    pub fn component(&self, n: i32) -> QMatrix {
        let src: Vec<usize> = (0..self.degrees.len()).filter(|&i| self.degrees[i] == n).collect();
        let dst: Vec<usize> = (0..self.degrees.len()).filter(|&i| self.degrees[i] == n + 1).collect();
        let mut out = QMatrix::zeros(dst.len(), src.len());
        for (r, &i) in dst.iter().enumerate() {
            for (c, &j) in src.iter().enumerate() {
                out[(r, c)] = self.d[(i, j)].clone();
            }
        }
        out
    }

    /// `n ↦ dim Hⁿ` over the degrees present.
    pub fn cohomology(&self) -> BTreeMap<i32, usize> {
        let (Some(&lo), Some(&hi)) = (self.degrees.iter().min(), self.degrees.iter().max()) else {
            return BTreeMap::new();
        };
        let rank = |n: i32| {
            let c = self.component(n);
            if c.rows() == 0 || c.cols() == 0 {
                0
            } else {
                c.rank()
            }
        };
        (lo..=hi)
            .map(|n| {
                let dim = self.degrees.iter().filter(|&&d| d == n).count();
                (n, dim - rank(n) - rank(n - 1))
            })
            .collect()
    }
}

/// Hypercohomology dimensions; rejects modules with `d² ≠ 0`.
pub fn total_cohomology(family: &ModuleFamily, q: &Quiver, m: &ICModule) -> Result<BTreeMap<i32, usize>> {
    if let Some(w) = m.d_squared_witness(q) {
        return Err(Error::InvalidModule(format!(
            "d² ≠ 0: entry ({}, {}) of the {} → {} block is {}",
            w.row,
            w.col,
            q.name(w.from),
            q.name(w.to),
            format_rational(&w.value)
        )));
    }
    Ok(TotalComplex::build(family, q, m).cohomology())
}

pub fn euler_characteristic(dims: &BTreeMap<i32, usize>) -> i64 {
    dims.iter()
        .map(|(&n, &d)| if n.rem_euclid(2) == 0 { d as i64 } else { -(d as i64) })
        .sum()
}

/// Data for Verdier duality: a self-duality `P_w: V_w → V_w*` per vertex and,
/// per arrow pair, the coefficients expressing dualized arrows in the
/// arrow basis.
#[derive(Clone, Debug)]
pub struct Duality {
    /// `coeffs[(w, y)][k][l]`: arrow `k` of `w → y`, transposed, is
    /// `Σ_l coeffs[k][l] · (arrow l of y → w)`.
    coeffs: BTreeMap<(Elem, Elem), Vec<Vec<Rational>>>,
}

impl Duality {
    pub fn build(ring: &CohRing, family: &ModuleFamily, q: &Quiver) -> Result<Self> {
        let group = ring.group();
        let pairings = group
            .elements()
            .map(|w| {
                let v = family.module(w);
                let maps = hom_degree0(ring, v, &v.dual());
                let [p] = maps.as_slice() else {
                    return Err(Error::Internal(format!(
                        "V[{}] has {} self-dualities",
                        group.name(w),
                        maps.len()
                    )));
                };
                let inv = p
                    .inverse()
                    .ok_or_else(|| Error::Internal(format!("self-duality of V[{}] is singular", group.name(w))))?;
                Ok((p.clone(), inv))
            })
            .collect::<Result<Vec<_>>>()?;

        let mut coeffs = BTreeMap::new();
        for w in group.elements() {
            for y in group.elements() {
                let forward = q.maps(w, y);
                if forward.is_empty() {
                    continue;
                }
                let back = q.maps(y, w);
                // Solve A^D = Σ_l T_l · back[l] entrywise.
                let cells = back[0].rows() * back[0].cols();
                let mut system = QMatrix::zeros(cells, back.len());
                for (l, b) in back.iter().enumerate() {
                    for (r, c, x) in b.nonzero_entries() {
                        system[(r * b.cols() + c, l)] = x.clone();
                    }
                }
                let mut rows = Vec::with_capacity(forward.len());
                for a in forward {
                    // V_y → V_y* → V_w* → V_w
                    let dual = &(&pairings[w.0].1 * &a.transpose()) * &pairings[y.0].0;
                    let target: Vec<Rational> = (0..dual.rows())
                        .flat_map(|r| (0..dual.cols()).map(move |c| (r, c)))
                        .map(|(r, c)| dual[(r, c)].clone())
                        .collect();
                    let t = solve(&system, &target).map_err(|_| {
                        Error::Internal(format!(
                            "dual of an arrow {} → {} is not in Hom¹",
                            group.name(w),
                            group.name(y)
                        ))
                    })?;
                    rows.push(t);
                }
                coeffs.insert((w, y), rows);
            }
        }
        Ok(Duality { coeffs })
    }

    /// `D(m)`: stalks dualized, the dual boundary `y → w` built from the
    /// transposes of the boundary `w → y`.
    pub fn dual(&self, q: &Quiver, m: &ICModule) -> Result<ICModule> {
        let mut boundary: BTreeMap<Arrow, QMatrix> = BTreeMap::new();
        for (a, b) in &m.boundary {
            let (w, y) = (a.source, a.target);
            let t = &self.coeffs[&(w, y)][a.index];
            let bt = b.transpose();
            for (l, c) in t.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let key = Arrow {
                    source: y,
                    target: w,
                    index: l,
                };
                boundary
                    .entry(key)
                    .or_insert_with(|| QMatrix::zeros(bt.rows(), bt.cols()))
                    .add_scaled(&bt, c);
            }
        }
        ICModule::new(q, m.stalks.clone(), boundary)
    }
}

pub fn verdier_dual(ring: &CohRing, family: &ModuleFamily, q: &Quiver, m: &ICModule) -> Result<ICModule> {
    Duality::build(ring, family, q)?.dual(q, m)
}

/// Kinds of random representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RepKind {
    /// All arrow maps zero.
    Semisimple,
    /// One or two nonzero arrow maps.
    NearSemisimple,
    /// Every arrow map random.
    Generic,
}

fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> QMatrix {
    let mut m = QMatrix::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            m[(r, c)] = rat(rng.gen_range(-2..=2));
        }
    }
    m
}

/// Random representation with stalks of dimension at most `max_dim`.
pub fn random_rep(q: &Quiver, kind: RepKind, max_dim: usize, rng: &mut impl Rng) -> QuiverRep {
    let stalks: Vec<usize> = (0..q.vertex_count()).map(|_| rng.gen_range(0..=max_dim)).collect();
    let mut maps = BTreeMap::new();
    let usable: Vec<Arrow> = q
        .arrows()
        .iter()
        .copied()
        .filter(|a| stalks[a.source.0] > 0 && stalks[a.target.0] > 0)
        .collect();
    let chosen: Vec<Arrow> = match kind {
        RepKind::Semisimple => Vec::new(),
        RepKind::NearSemisimple if usable.is_empty() => Vec::new(),
        RepKind::NearSemisimple => {
            let first = usable[rng.gen_range(0..usable.len())];
            let mut out = vec![first];
            let follow: Vec<Arrow> = usable.iter().copied().filter(|a| a.source == first.target).collect();
            if !follow.is_empty() && rng.gen_bool(0.5) {
                out.push(follow[rng.gen_range(0..follow.len())]);
            }
            out
        }
        RepKind::Generic => usable,
    };
    for a in chosen {
        maps.insert(a, random_matrix(rng, stalks[a.target.0], stalks[a.source.0]));
    }
    QuiverRep { stalks, maps }
}

/// `{ system, stalks: {element: dim}, boundary: [{from, to, k, matrix}] }`
pub fn to_document(group: &WeylGroup, m: &ICModule) -> Value {
    let ct = group.root_system().cartan_type();
    let stalks: serde_json::Map<String, Value> = group
        .elements()
        .filter(|w| m.stalks[w.0] > 0)
        .map(|w| (group.name(w), json!(m.stalks[w.0])))
        .collect();
    let boundary: Vec<Value> = m
        .boundary
        .iter()
        .map(|(a, b)| {
            let rows: Vec<Vec<String>> = b
                .to_rows()
                .iter()
                .map(|r| r.iter().map(format_rational).collect())
                .collect();
            json!({"from": group.name(a.source), "to": group.name(a.target), "k": a.index, "matrix": rows})
        })
        .collect();
    json!({
        "system": {"type": ct.to_string(), "rank": ct.rank},
        "stalks": stalks,
        "boundary": boundary,
    })
}

/// The root system named in a document.
pub fn document_system(doc: &Value) -> Result<CartanType> {
    doc.pointer("/system/type")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::InvalidModule("document lacks system.type".into()))?
        .parse()
}

pub fn from_document(group: &WeylGroup, q: &Quiver, doc: &Value) -> Result<ICModule> {
    let bad = |why: String| Error::InvalidModule(why);
    let mut stalks = vec![0; group.len()];
    if let Some(obj) = doc.get("stalks") {
        let obj = obj
            .as_object()
            .ok_or_else(|| bad("`stalks` must be an object".into()))?;
        for (name, dim) in obj {
            let w = group.parse(name)?;
            stalks[w.0] =
                dim.as_u64()
                    .ok_or_else(|| bad(format!("stalk dimension of {name} is not a count")))? as usize;
        }
    }
    let mut boundary = BTreeMap::new();
    let entries = match doc.get("boundary") {
        None => Vec::new(),
        Some(v) => v
            .as_array()
            .cloned()
            .ok_or_else(|| bad("`boundary` must be a list".into()))?,
    };
    for e in &entries {
        let field = |k: &str| e.get(k).ok_or_else(|| bad(format!("boundary entry lacks `{k}`")));
        let name = |k: &str| -> Result<Elem> {
            let s = field(k)?
                .as_str()
                .ok_or_else(|| bad(format!("`{k}` must be an element string")))?;
            group.parse(s)
        };
        let a = Arrow {
            source: name("from")?,
            target: name("to")?,
            index: field("k")?.as_u64().ok_or_else(|| bad("`k` must be a count".into()))? as usize,
        };
        let rows = field("matrix")?
            .as_array()
            .ok_or_else(|| bad("`matrix` must be a list of rows".into()))?;
        let cols = stalks[a.source.0];
        let parsed: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| bad("matrix row must be a list".into()))?
                    .iter()
                    .map(|x| {
                        x.as_str()
                            .ok_or_else(|| bad("matrix entries are \"p/q\" strings".into()))
                            .and_then(parse_rational)
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        let m = QMatrix::from_rows(parsed, cols)?;
        if boundary.insert(a, m).is_some() {
            return Err(bad(format!(
                "duplicate boundary {} → {} index {}",
                group.name(a.source),
                group.name(a.target),
                a.index
            )));
        }
    }
    ICModule::new(q, stalks, boundary)
}
