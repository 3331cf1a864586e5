//! Graded `C`-modules `V_w = IH*(X̄_w)`.
//!
//! `V_w` is cut out of a tensor-extension module `U`: either the full word
//! module of a reduced word for `w`, or `C ⊗_{C^s} V_{w'}` with `w = w's`.
//! Every `V_y` with `l(y) < l(w)` that maps into `U` in degree 0 is split off
//! as a submodule `Y`, and `V_w` is realized on a basis of the quotient `U/Y`.
//!
//! Degrees follow the symmetric convention: `deg 1 = -1` in each tensor
//! factor and `deg σ_{s_i} = +1`, so `σ_v` raises degree by `2 l(v)`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{EchelonBasis, QMatrix, QVector, Rational};
use crate::homspace::graded_homs;
use crate::rootsystem::Elem;
use crate::schubert::{CohClass, CohRing};

/// How a module's basis was produced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Trivial,
    /// Supplied directly as generator matrices.
    Explicit,
    Extension {
        generator: usize,
    },
    Word {
        word: Vec<usize>,
    },
    /// `C ⊗_{C^s} V_{parent}`.
    Shortcut {
        generator: usize,
        parent: Elem,
    },
    /// A basis of `U/Y`; `removed` lists `(y, n(y))` for every `V_y` split off.
    Quotient {
        source: Box<Provenance>,
        removed: Vec<(Elem, usize)>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradedModule {
    degrees: Vec<i32>,
    /// Indexed by `Elem`: the matrix of `σ_v`.
    action: Vec<QMatrix>,
    provenance: Provenance,
}

impl GradedModule {
    /// Builds a module from the actions of `σ_{s_1}, …, σ_{s_r}`, deriving
    /// every other class through the ring's generator expansions. Checks the
    /// result against the multiplication table.
    pub fn from_generators(ring: &CohRing, degrees: Vec<i32>, generators: Vec<QMatrix>) -> Result<Self> {
        let group = ring.group();
        let n = degrees.len();
        if generators.len() != group.rank() {
            return Err(Error::Shape(format!(
                "expected {} generator matrices, got {}",
                group.rank(),
                generators.len()
            )));
        }
        if let Some(g) = generators.iter().find(|g| g.rows() != n || g.cols() != n) {
            return Err(Error::Shape(format!(
                "generator matrix is {}x{}, module has dimension {n}",
                g.rows(),
                g.cols()
            )));
        }
        let mut action = vec![QMatrix::zeros(n, n); group.len()];
        action[0] = QMatrix::identity(n);
        for u in group.elements().skip(1) {
            let mut acc = QMatrix::zeros(n, n);
            for (i, lower, c) in ring.generator_expansion(u) {
                acc.add_scaled(&(&generators[*i] * &action[lower.0]), c);
            }
            action[u.0] = acc;
        }
        let m = GradedModule {
            degrees,
            action,
            provenance: Provenance::Explicit,
        };
        m.check(ring)?;
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    pub fn action(&self, v: Elem) -> &QMatrix {
        &self.action[v.0]
    }

    pub fn actions(&self) -> &[QMatrix] {
        &self.action
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Matrix of an arbitrary class.
    pub fn class_action(&self, c: &CohClass) -> QMatrix {
        let mut out = QMatrix::zeros(self.dim(), self.dim());
        for (t, coeff) in c.terms() {
            out.add_scaled(&self.action[t.0], coeff);
        }
        out
    }

    /// Degree → dimension.
    pub fn graded_dims(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for &d in &self.degrees {
            *out.entry(d).or_insert(0) += 1;
        }
        out
    }

    /// `Σ_d dim(V)_d q^{(d+l)/2}` as a coefficient list.
    pub fn poincare(&self, length: usize) -> Vec<usize> {
        let mut out = vec![0; length + 1];
        for &d in &self.degrees {
            let k = (d + length as i32) / 2;
            if k >= 0 && (k as usize) <= length {
                out[k as usize] += 1;
            }
        }
        out
    }

    /// Graded dual: degrees negated, `σ_v` acting by the transpose.
    pub fn dual(&self) -> GradedModule {
        GradedModule {
            degrees: self.degrees.iter().map(|d| -d).collect(),
            action: self.action.iter().map(QMatrix::transpose).collect(),
            provenance: self.provenance.clone(),
        }
    }

    /// The module axioms: identity, homogeneity, and composition per the
    /// multiplication table (which also gives commutativity).
    pub fn check(&self, ring: &CohRing) -> Result<()> {
        let group = ring.group();
        let n = self.dim();
        if self.action.len() != group.len() {
            return Err(Error::Shape(format!(
                "module carries {} action matrices, group has {} elements",
                self.action.len(),
                group.len()
            )));
        }
        if self.action[0] != QMatrix::identity(n) {
            return Err(Error::Internal("σ_e does not act as the identity".into()));
        }
        for v in group.elements() {
            let shift = 2 * group.length(v) as i32;
            if let Some((p, q, _)) = self.action[v.0]
                .nonzero_entries()
                .find(|&(p, q, _)| self.degrees[p] != self.degrees[q] + shift)
            {
                return Err(Error::Internal(format!(
                    "σ[{}] has entry ({p},{q}) between degrees {} and {}",
                    group.name(v),
                    self.degrees[q],
                    self.degrees[p]
                )));
            }
        }
        for u in group.elements().skip(1) {
            for v in group.elements().skip(u.0) {
                let lhs = &self.action[u.0] * &self.action[v.0];
                if lhs != self.class_action(ring.product(u, v)) {
                    return Err(Error::Internal(format!(
                        "σ[{}]σ[{}] does not act as its product",
                        group.name(u),
                        group.name(v)
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `V_e = ℂ` in degree 0.
pub fn trivial_module(ring: &CohRing) -> GradedModule {
    let mut action = vec![QMatrix::zeros(1, 1); ring.dim()];
    action[0] = QMatrix::identity(1);
    GradedModule {
        degrees: vec![0],
        action,
        provenance: Provenance::Trivial,
    }
}

/// `C ⊗_{C^{s_i}} M`. Basis vector `2j` is `1⊗b_j`, `2j+1` is `σ_{s_i}⊗b_j`.
pub fn extend(ring: &CohRing, i: usize, m: &GradedModule) -> GradedModule {
    let group = ring.group();
    let n = m.dim();
    let si = group.generator(i);
    let degrees = m.degrees.iter().flat_map(|&d| [d - 1, d + 1]).collect();
    let action = group
        .elements()
        .map(|u| {
            let mut out = QMatrix::zeros(2 * n, 2 * n);
            // a = 0 is the factor 1, a = 1 is σ_{s_i}.
            for a in 0..2 {
                let ua = if a == 0 {
                    CohClass::schubert(u)
                } else {
                    ring.product(si, u).clone()
                };
                let (x, y) = ring.split(i, &ua);
                for (b, part) in [(0, x), (1, y)] {
                    if part.is_zero() {
                        continue;
                    }
                    let pm = m.class_action(&part);
                    for (p, q, c) in pm.nonzero_entries() {
                        out[(2 * p + b, 2 * q + a)] = c.clone();
                    }
                }
            }
            out
        })
        .collect();
    GradedModule {
        degrees,
        action,
        provenance: Provenance::Extension { generator: i },
    }
}

/// `C ⊗_{C^{s_l}} ⋯ ⊗_{C^{s_1}} ℂ` for `word = [s_1, …, s_l]` (0-based).
pub fn word_module(ring: &CohRing, word: &[usize]) -> GradedModule {
    let mut m = trivial_module(ring);
    for &i in word {
        m = extend(ring, i, &m);
    }
    if !word.is_empty() {
        m.provenance = Provenance::Word { word: word.to_vec() };
    }
    m
}

/// Basis of degree-0 module maps `source → target`.
pub fn hom_degree0(ring: &CohRing, source: &GradedModule, target: &GradedModule) -> Vec<QMatrix> {
    graded_homs(source, target, 0, &ring.group().generators())
}

/// Splits every shorter `V_y` off `u` and returns `V_w` on a basis of the
/// quotient. `shorter[k]` must be `V_{Elem(k)}` for every `k` with
/// `l(Elem(k)) < l(w)`.
pub fn extract_top(ring: &CohRing, u: GradedModule, shorter: &[GradedModule], w: Elem) -> Result<GradedModule> {
    let group = ring.group();
    let n = u.dim();
    let lw = group.length(w);

    // Step 1: images of all degree-0 maps from shorter modules.
    let mut y_span = EchelonBasis::new(n);
    let mut y_vectors: Vec<QVector> = Vec::new();
    let mut removed = Vec::new();
    for (k, vy) in shorter.iter().enumerate() {
        let y = Elem(k);
        if group.length(y) >= lw {
            break;
        }
        let maps = hom_degree0(ring, vy, &u);
        if maps.is_empty() {
            continue;
        }
        removed.push((y, maps.len()));
        for f in &maps {
            for j in 0..vy.dim() {
                let col = f.column(j);
                if !y_span.insert(&col) {
                    return Err(Error::Internal(format!(
                        "images of V[{}] in the module for {} are linearly dependent",
                        group.name(y),
                        group.name(w)
                    )));
                }
                y_vectors.push(col);
            }
        }
    }

    let source = Box::new(u.provenance.clone());
    if y_vectors.is_empty() {
        return Ok(GradedModule {
            provenance: Provenance::Quotient { source, removed },
            ..u
        });
    }

    // Step 2: orbits of basis vectors not yet reached.
    let mut span = y_span;
    let mut chosen: Vec<QVector> = Vec::new();
    let mut degrees = Vec::new();
    for x in 0..n {
        if span.is_full() {
            break;
        }
        let mut unit = vec![Rational::zero(); n];
        unit[x] = Rational::one();
        if span.contains(&unit) {
            continue;
        }
        for v in group.elements() {
            let image = u.action[v.0].column(x);
            if span.insert(&image) {
                degrees.push(u.degrees[x] + 2 * group.length(v) as i32);
                chosen.push(image);
            }
        }
    }

    // Step 3: the action on U/Y in the chosen basis.
    let m = chosen.len();
    let mut all = chosen.clone();
    all.extend(y_vectors);
    let basis_inv = QMatrix::from_columns(&all, n)?
        .inverse()
        .ok_or_else(|| Error::Internal("quotient basis does not span".into()))?;
    let c = QMatrix::from_columns(&chosen, n)?;
    let action = u
        .action
        .iter()
        .map(|a| {
            let full = &basis_inv * &(a * &c);
            let rows = (0..m).map(|r| full.row(r).to_vec()).collect();
            QMatrix::from_rows(rows, m)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GradedModule {
        degrees,
        action,
        provenance: Provenance::Quotient { source, removed },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BuildMode {
    /// `U = C ⊗_{C^s} V_{w'}`.
    Shortcut,
    /// `U` = word module of the lex-least reduced word.
    FullWord,
}

/// `V_w` for every `w`, indexed by `Elem`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModuleFamily {
    mode: BuildMode,
    modules: Vec<GradedModule>,
}

impl ModuleFamily {
    pub fn mode(&self) -> BuildMode {
        self.mode
    }

    pub fn module(&self, w: Elem) -> &GradedModule {
        &self.modules[w.0]
    }

    pub fn modules(&self) -> &[GradedModule] {
        &self.modules
    }

    pub fn len(&self) -> usize {
        self.modules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modules.is_empty()
    }

    /// `(y, n(y))` for the summands split off while building `V_w`.
    pub fn multiplicities(&self, w: Elem) -> &[(Elem, usize)] {
        match &self.modules[w.0].provenance {
            Provenance::Quotient { removed, .. } => removed,
            _ => &[],
        }
    }

    /// Validates a deserialized family against a ring.
    pub fn check(&self, ring: &CohRing) -> Result<()> {
        if self.modules.len() != ring.dim() {
            return Err(Error::Shape(format!(
                "family has {} modules, group has {} elements",
                self.modules.len(),
                ring.dim()
            )));
        }
        self.modules.iter().try_for_each(|m| m.check(ring))
    }
}

/// Builds `V_w` for all `w` in order of length. Elements of one length are
/// independent and built in parallel.
pub fn build_all(ring: &CohRing, mode: BuildMode) -> Result<ModuleFamily> {
    let group = ring.group();
    let mut modules = vec![trivial_module(ring)];
    for k in 1..=group.max_length() {
        let level: Vec<Elem> = group.elements_of_length(k).collect();
        let built: Vec<GradedModule> = level
            .par_iter()
            .map(|&w| build_one(ring, &modules, w, mode))
            .collect::<Result<_>>()?;
        modules.extend(built);
    }
    Ok(ModuleFamily { mode, modules })
}

fn build_one(ring: &CohRing, shorter: &[GradedModule], w: Elem, mode: BuildMode) -> Result<GradedModule> {
    let group = ring.group();
    let word = group.reduced_word(w);
    let u = match mode {
        BuildMode::FullWord => word_module(ring, word),
        BuildMode::Shortcut => {
            let s = *word.last().expect("non-identity element has a nonempty word");
            let parent = group.right_mul(w, s);
            let mut u = extend(ring, s, &shorter[parent.0]);
            u.provenance = Provenance::Shortcut { generator: s, parent };
            u
        }
    };
    let v = extract_top(ring, u, shorter, w)?;
    // V_w is indecomposable with only scalar degree-0 endomorphisms; extra
    // ones mean U had summands Step 1 cannot see (shifted copies of V_y).
    let ends = hom_degree0(ring, &v, &v).len();
    if ends != 1 {
        return Err(Error::Internal(format!(
            "quotient for {} has {ends} independent degree-0 endomorphisms; \
             the module it was cut from has shifted summands",
            group.name(w)
        )));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsystem::{CartanType, WeylGroup};

    fn ring(label: &str) -> CohRing {
        let ct: CartanType = label.parse().unwrap();
        CohRing::build(WeylGroup::of_type(ct).unwrap()).unwrap()
    }

    fn gen(m: &GradedModule, ring: &CohRing, i: usize) -> QMatrix {
        m.action(ring.group().generator(i)).clone()
    }

    #[test]
    fn trivial() {
        let r = ring("A2");
        let v = trivial_module(&r);
        assert_eq!(v.degrees(), &[0]);
        assert!(v.action(r.group().longest()).is_zero());
        v.check(&r).unwrap();
    }

    #[test]
    fn a2_simple_reflection() {
        let r = ring("A2");
        let v = extend(&r, 0, &trivial_module(&r));
        assert_eq!(v.degrees(), &[-1, 1]);
        assert_eq!(gen(&v, &r, 0), QMatrix::from_i64(&[&[0, 0], &[1, 0]]));
        assert!(gen(&v, &r, 1).is_zero());
        v.check(&r).unwrap();
    }

    #[test]
    fn a2_two_letter_word() {
        let r = ring("A2");
        let v = word_module(&r, &[0, 1]);
        assert_eq!(v.degrees(), &[-2, 0, 0, 2]);
        let s1 = QMatrix::from_i64(&[&[0, 0, 0, 0], &[0, 0, 0, 0], &[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let s2 = QMatrix::from_i64(&[&[0, 0, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 0], &[0, 1, 1, 0]]);
        assert_eq!(gen(&v, &r, 0), s1);
        assert_eq!(gen(&v, &r, 1), s2);
        v.check(&r).unwrap();
    }

    #[test]
    fn a2_three_letter_word() {
        let r = ring("A2");
        let u = word_module(&r, &[0, 1, 0]);
        assert_eq!(u.dim(), 8);
        u.check(&r).unwrap();
        // σ_1 on 1⊗1⊗1⊗1 ... index a3 + 2a2 + 4a1; column 1 is σ_1⊗1⊗1⊗1.
        let s1 = gen(&u, &r, 0);
        let mut expect = vec![Rational::zero(); 8];
        expect[3] = Rational::one();
        expect[6] = -Rational::one();
        assert_eq!(s1.column(1), expect);

        let vs1 = extend(&r, 0, &trivial_module(&r));
        let maps = hom_degree0(&r, &vs1, &u);
        assert_eq!(maps.len(), 1);
        let col = maps[0].column(0);
        let mut emb = vec![Rational::zero(); 8];
        emb[4] = Rational::one();
        emb[2] = -Rational::one();
        let scale = &col[4];
        assert!(!scale.is_zero());
        assert_eq!(col, emb.iter().map(|c| c * scale).collect::<Vec<_>>());
    }

    #[test]
    fn a2_family() {
        let r = ring("A2");
        let fam = build_all(&r, BuildMode::Shortcut).unwrap();
        fam.check(&r).unwrap();
        let g = r.group();
        let top = fam.module(g.longest());
        let dims: Vec<_> = top.graded_dims().into_iter().collect();
        assert_eq!(dims, vec![(-3, 1), (-1, 2), (1, 2), (3, 1)]);
        assert_eq!(fam.multiplicities(g.longest()), &[(g.generator(0), 1)]);
        let s1s2 = g.parse("1.2").unwrap();
        assert!(fam.multiplicities(s1s2).is_empty());
        assert_eq!(fam.module(s1s2), &{
            let mut m = word_module(&r, &[0, 1]);
            m.provenance = fam.module(s1s2).provenance.clone();
            m
        });
    }

    #[test]
    fn shortcut_and_full_agree() {
        for label in ["A2", "B2"] {
            let r = ring(label);
            let a = build_all(&r, BuildMode::Shortcut).unwrap();
            let b = build_all(&r, BuildMode::FullWord).unwrap();
            for w in r.group().elements() {
                let (x, y) = (a.module(w), b.module(w));
                assert_eq!(x.graded_dims(), y.graded_dims());
                let iso = hom_degree0(&r, x, y);
                assert_eq!(iso.len(), 1);
                assert!(iso[0].inverse().is_some());
            }
        }
    }

    #[test]
    fn symmetric_and_bounded() {
        for label in ["A1", "B2", "G2", "A3"] {
            let r = ring(label);
            let fam = build_all(&r, BuildMode::Shortcut).unwrap();
            for w in r.group().elements() {
                let m = fam.module(w);
                let l = r.group().length(w) as i32;
                let dims = m.graded_dims();
                for (&d, &c) in &dims {
                    assert_eq!(dims.get(&-d), Some(&c));
                    assert!(d.abs() <= l && (d - l).rem_euclid(2) == 0);
                }
                m.check(&r).unwrap();
            }
        }
    }

    #[test]
    fn from_generators_recovers_module() {
        let r = ring("B2");
        let u = word_module(&r, &[1, 0, 1]);
        let gens = (0..2).map(|i| gen(&u, &r, i)).collect();
        let m = GradedModule::from_generators(&r, u.degrees().to_vec(), gens).unwrap();
        assert_eq!(m.actions(), u.actions());
    }

    #[test]
    fn dual_is_a_module() {
        let r = ring("A2");
        let fam = build_all(&r, BuildMode::Shortcut).unwrap();
        let d = fam.module(r.group().longest()).dual();
        d.check(&r).unwrap();
    }

    #[test]
    fn word_module_dimension() {
        let r = ring("B2");
        for word in [vec![], vec![0], vec![0, 0], vec![1, 0, 1, 0]] {
            assert_eq!(word_module(&r, &word).dim(), 1 << word.len());
        }
    }
}
