//! The cohomology ring `C = H*(G/B)` in the Schubert basis.
//!
//! Products by the degree-one classes `σ_{s_i}` come from the Chevalley
//! formula. Since those classes generate `C`, every other product is forced:
//! in each degree we write `σ_u` as a combination of `σ_{s_i}·σ_{u'}` and
//! expand. Degrees are tracked as lengths `l(w)`; the cohomological degree is
//! `2 l(w)`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{rat, solve, QMatrix, QVector, Rational};
use crate::rootsystem::{Elem, WeylGroup};

/// A cohomology class as a finite combination of Schubert classes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CohClass {
    terms: BTreeMap<Elem, Rational>,
}

impl CohClass {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn schubert(w: Elem) -> Self {
        Self::term(w, Rational::one())
    }

    pub fn term(w: Elem, c: Rational) -> Self {
        let mut k = Self::zero();
        k.add_term(w, c);
        k
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: Elem) -> Rational {
        self.terms.get(&w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Elem, &Rational)> {
        self.terms.iter().map(|(&w, c)| (w, c))
    }

    pub fn support(&self) -> impl Iterator<Item = Elem> + '_ {
        self.terms.keys().copied()
    }

    pub fn add_term(&mut self, w: Elem, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(w).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn add_scaled(&mut self, other: &CohClass, s: &Rational) {
        for (w, c) in other.terms() {
            self.add_term(w, c * s);
        }
    }

    pub fn scaled(&self, s: &Rational) -> CohClass {
        let mut k = CohClass::zero();
        k.add_scaled(self, s);
        k
    }

    pub fn to_dense(&self, n: usize) -> QVector {
        let mut v = vec![Rational::zero(); n];
        for (w, c) in self.terms() {
            v[w.0] = c.clone();
        }
        v
    }

    pub fn from_dense(v: &[Rational]) -> Self {
        let mut k = CohClass::zero();
        for (i, c) in v.iter().enumerate() {
            k.add_term(Elem(i), c.clone());
        }
        k
    }

    /// Renders as e.g. `σ[2.1] + 2σ[1.2]`, `0` for the zero class.
    pub fn display(&self, group: &WeylGroup) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (w, c)) in self.terms().enumerate() {
            let neg = c < &Rational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            match (k, neg) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            if !mag.is_one() {
                let _ = write!(s, "{mag}");
            }
            let _ = write!(s, "σ[{}]", group.name(w));
        }
        s
    }
}

/// `C` with its complete multiplication table and, per generator, the data
/// for the splitting `C = C^{s_i} ⊕ σ_{s_i}·C^{s_i}`.
#[derive(Clone, Debug)]
pub struct CohRing {
    group: WeylGroup,
    products: Vec<Vec<CohClass>>,
    invariant: Vec<Vec<Elem>>,
    split_inverse: Vec<QMatrix>,
    expansions: Vec<Vec<(usize, Elem, Rational)>>,
}

impl CohRing {
    /// Builds the ring: Chevalley products, full table, splitting data.
    pub fn build(group: WeylGroup) -> Result<Self> {
        let products = build_mult_table(&group)?;
        Self::from_parts(group, products)
    }

    /// Reassembles a ring from a stored multiplication table.
    pub fn from_table(group: WeylGroup, products: Vec<Vec<CohClass>>) -> Result<Self> {
        let n = group.len();
        if products.len() != n || products.iter().any(|row| row.len() != n) {
            return Err(Error::Shape(format!("multiplication table must be {n}x{n}")));
        }
        Self::from_parts(group, products)
    }

    fn from_parts(group: WeylGroup, products: Vec<Vec<CohClass>>) -> Result<Self> {
        let n = group.len();
        let invariant: Vec<Vec<Elem>> = (0..group.rank())
            .map(|i| group.elements().filter(|&w| !group.is_right_descent(w, i)).collect())
            .collect();
        let mut split_inverse = Vec::with_capacity(group.rank());
        for (i, inv) in invariant.iter().enumerate() {
            let si = group.generator(i);
            let mut cols: Vec<QVector> = inv.iter().map(|&w| CohClass::schubert(w).to_dense(n)).collect();
            cols.extend(inv.iter().map(|&w| products[si.0][w.0].to_dense(n)));
            let b = QMatrix::from_columns(&cols, n)?;
            let binv = b.inverse().ok_or_else(|| {
                Error::Internal(format!(
                    "C^(s_{}) and σ_(s_{})·C^(s_{}) do not span C",
                    i + 1,
                    i + 1,
                    i + 1
                ))
            })?;
            split_inverse.push(binv);
        }
        let expansions = generator_expansions(&group, |i, u| products[group.generator(i).0][u.0].clone())?;
        Ok(CohRing {
            group,
            products,
            invariant,
            split_inverse,
            expansions,
        })
    }

    pub fn group(&self) -> &WeylGroup {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.group.len()
    }

    /// `σ_u · σ_v` from the table.
    pub fn product(&self, u: Elem, v: Elem) -> &CohClass {
        &self.products[u.0][v.0]
    }

    pub fn table(&self) -> &[Vec<CohClass>] {
        &self.products
    }

    pub fn multiply(&self, a: &CohClass, b: &CohClass) -> CohClass {
        let mut out = CohClass::zero();
        for (u, cu) in a.terms() {
            for (v, cv) in b.terms() {
                out.add_scaled(self.product(u, v), &(cu * cv));
            }
        }
        out
    }

    pub fn chevalley_multiply(&self, i: usize, w: Elem) -> CohClass {
        chevalley(&self.group, i, w)
    }

    /// `{w : w·s_i > w}`, the Schubert basis of `C^{s_i}`.
    pub fn invariant_basis(&self, i: usize) -> &[Elem] {
        &self.invariant[i]
    }

    /// `σ_u = Σ c · σ_{s_i}·σ_{u'}` with `l(u') = l(u) - 1`, as `(i, u', c)`
    /// triples. Empty for the identity.
    pub fn generator_expansion(&self, u: Elem) -> &[(usize, Elem, Rational)] {
        &self.expansions[u.0]
    }

    /// Unique `(x, y)` with `c = x + σ_{s_i}·y` and `x, y ∈ C^{s_i}`.
    pub fn split(&self, i: usize, c: &CohClass) -> (CohClass, CohClass) {
        let coords = self.split_inverse[i].mul_vec(&c.to_dense(self.dim()));
        let inv = &self.invariant[i];
        let mut x = CohClass::zero();
        let mut y = CohClass::zero();
        for (k, &w) in inv.iter().enumerate() {
            x.add_term(w, coords[k].clone());
            y.add_term(w, coords[k + inv.len()].clone());
        }
        (x, y)
    }
}

/// Chevalley's formula: `σ_{s_i}·σ_w = Σ ⟨ω̌_i, α⟩ (α_i,α_i)/(α,α) σ_{w s_α}`
/// over positive roots `α` with `l(w s_α) = l(w) + 1`. The pairing
/// `⟨ω̌_i, α⟩` is the `α_i`-coordinate of `α`.
pub fn chevalley(group: &WeylGroup, i: usize, w: Elem) -> CohClass {
    let rs = group.root_system();
    let mut e_i = vec![0i64; rs.rank()];
    e_i[i] = 1;
    let simple_norm = rs.inner(&e_i, &e_i);
    let lw = group.length(w);
    let mut out = CohClass::zero();
    for (k, alpha) in rs.positive_roots().iter().enumerate() {
        if alpha[i] == 0 {
            continue;
        }
        let t = group.multiply(w, group.reflection(k));
        if group.length(t) != lw + 1 {
            continue;
        }
        let c = rat(alpha[i]) * &simple_norm / rs.inner(alpha, alpha);
        out.add_term(t, c);
    }
    out
}

/// Solves, degree by degree, for the expansion of each `σ_u` in products
/// `σ_{s_i}·σ_{u'}` one degree lower.
fn generator_expansions(
    group: &WeylGroup,
    gen_products: impl Fn(usize, Elem) -> CohClass,
) -> Result<Vec<Vec<(usize, Elem, Rational)>>> {
    let r = group.rank();
    let mut out = vec![Vec::new(); group.len()];
    for k in 1..=group.max_length() {
        let level: Vec<Elem> = group.elements_of_length(k).collect();
        let lower: Vec<Elem> = group.elements_of_length(k - 1).collect();
        let pairs: Vec<(usize, Elem)> = (0..r).flat_map(|i| lower.iter().map(move |&u| (i, u))).collect();
        let pos: BTreeMap<Elem, usize> = level.iter().enumerate().map(|(p, &w)| (w, p)).collect();
        let mut a = QMatrix::zeros(level.len(), pairs.len());
        for (col, &(i, u)) in pairs.iter().enumerate() {
            for (t, c) in gen_products(i, u).terms() {
                let row = *pos
                    .get(&t)
                    .ok_or_else(|| Error::Internal("generator product left its degree".into()))?;
                a[(row, col)] = c.clone();
            }
        }
        for (p, &u) in level.iter().enumerate() {
            let mut target = vec![Rational::zero(); level.len()];
            target[p] = Rational::one();
            let coeffs = solve(&a, &target)
                .map_err(|_| Error::Internal(format!("σ[{}] is not spanned by generator products", group.name(u))))?;
            out[u.0] = coeffs
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(col, c)| (pairs[col].0, pairs[col].1, c))
                .collect();
        }
    }
    Ok(out)
}

fn mul_generator(cache: &[Vec<CohClass>], i: usize, c: &CohClass) -> CohClass {
    let mut out = CohClass::zero();
    for (w, k) in c.terms() {
        out.add_scaled(&cache[i][w.0], k);
    }
    out
}

/// Full `|W| × |W|` table of Schubert products.
pub fn build_mult_table(group: &WeylGroup) -> Result<Vec<Vec<CohClass>>> {
    let r = group.rank();
    let gen_products: Vec<Vec<CohClass>> = (0..r)
        .map(|i| group.elements().map(|w| chevalley(group, i, w)).collect())
        .collect();
    let expansions = generator_expansions(group, |i, u| gen_products[i][u.0].clone())?;

    let mut products: Vec<Vec<CohClass>> = vec![Vec::new(); group.len()];
    products[0] = group.elements().map(CohClass::schubert).collect();
    // Elements are in length order, so every u' below is already filled in.
    for u in group.elements().skip(1) {
        let row: Vec<CohClass> = group
            .elements()
            .map(|v| {
                let mut acc = CohClass::zero();
                for (i, u_low, c) in &expansions[u.0] {
                    let inner = mul_generator(&gen_products, *i, &products[u_low.0][v.0]);
                    acc.add_scaled(&inner, c);
                }
                acc
            })
            .collect();
        products[u.0] = row;
    }
    Ok(products)
}

/// Serialized table: `table[u][v]` maps element names to `p/q` strings.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TableDocument {
    pub elements: Vec<String>,
    pub table: Vec<Vec<BTreeMap<String, String>>>,
}

impl CohRing {
    pub fn to_document(&self) -> TableDocument {
        let g = &self.group;
        TableDocument {
            elements: g.elements().map(|w| g.name(w)).collect(),
            table: self
                .products
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|c| c.terms().map(|(w, q)| (g.name(w), q.to_string())).collect())
                        .collect()
                })
                .collect(),
        }
    }

    pub fn from_document(group: WeylGroup, doc: &TableDocument) -> Result<Self> {
        let names: Vec<String> = group.elements().map(|w| group.name(w)).collect();
        if names != doc.elements {
            return Err(Error::Shape("element list does not match the group".into()));
        }
        let products = doc
            .table
            .iter()
            .map(|row| {
                row.iter()
                    .map(|entry| {
                        let mut c = CohClass::zero();
                        for (name, q) in entry {
                            c.add_term(group.parse(name)?, crate::exactalg::parse_rational(q)?);
                        }
                        Ok(c)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_table(group, products)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(t: &str) -> CohRing {
        CohRing::build(WeylGroup::of_type(t.parse().unwrap()).unwrap()).unwrap()
    }

    fn sum(g: &WeylGroup, names: &[&str]) -> CohClass {
        let mut c = CohClass::zero();
        for n in names {
            c.add_term(g.parse(n).unwrap(), rat(1));
        }
        c
    }

    #[test]
    fn a2_chevalley_examples() {
        let r = ring("A2");
        let g = r.group();
        let p = |s: &str| g.parse(s).unwrap();
        assert_eq!(r.chevalley_multiply(0, p("1")), sum(g, &["2.1"]));
        assert_eq!(r.chevalley_multiply(1, p("1")), sum(g, &["2.1", "1.2"]));
        assert!(r.chevalley_multiply(0, p("1.2.1")).is_zero());
    }

    #[test]
    fn a2_generator_columns() {
        let r = ring("A2");
        let g = r.group();
        let p = |s: &str| g.parse(s).unwrap();
        let expected: [(&str, &[&str], &[&str]); 6] = [
            ("e", &["1"], &["2"]),
            ("1", &["2.1"], &["2.1", "1.2"]),
            ("2", &["2.1", "1.2"], &["1.2"]),
            ("1.2", &["1.2.1"], &[]),
            ("2.1", &[], &["1.2.1"]),
            ("1.2.1", &[], &[]),
        ];
        for (row, s1, s2) in expected {
            assert_eq!(r.product(p(row), p("1")), &sum(g, s1), "{row}·σ1");
            assert_eq!(r.product(p(row), p("2")), &sum(g, s2), "{row}·σ2");
        }
    }

    #[test]
    fn invariant_bases() {
        let r = ring("A2");
        let g = r.group();
        let names = |i| r.invariant_basis(i).iter().map(|&w| g.name(w)).collect::<Vec<_>>();
        assert_eq!(names(0), vec!["e", "2", "1.2"]);
        assert_eq!(names(1), vec!["e", "1", "2.1"]);
        for t in ["B2", "G2", "A3"] {
            let r = ring(t);
            for i in 0..r.group().rank() {
                let inv = r.invariant_basis(i);
                assert_eq!(inv.len() * 2, r.dim());
                assert!(inv.contains(&Elem::IDENTITY));
                assert!(!inv.contains(&r.group().longest()));
            }
        }
    }

    #[test]
    fn a2_split_examples() {
        let r = ring("A2");
        let g = r.group();
        let (x, y) = r.split(0, &sum(g, &["1"]));
        assert!(x.is_zero());
        assert_eq!(y, CohClass::schubert(Elem::IDENTITY));
        let (x, y) = r.split(0, &sum(g, &["2"]));
        assert_eq!(x, sum(g, &["2"]));
        assert!(y.is_zero());
        let (x, y) = r.split(0, &sum(g, &["2.1", "1.2"]));
        assert!(x.is_zero());
        assert_eq!(y, sum(g, &["2"]));
    }

    #[test]
    fn unit_commutativity_homogeneity() {
        for t in ["A2", "B2", "G2", "A3"] {
            let r = ring(t);
            let g = r.group();
            for u in g.elements() {
                assert_eq!(r.product(Elem::IDENTITY, u), &CohClass::schubert(u));
                for v in g.elements() {
                    let p = r.product(u, v);
                    assert_eq!(p, r.product(v, u), "{t}");
                    let deg = g.length(u) + g.length(v);
                    assert!(p.support().all(|w| g.length(w) == deg));
                    if deg > g.max_length() {
                        assert!(p.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn associativity_on_all_triples_b2() {
        let r = ring("B2");
        let g = r.group();
        for u in g.elements() {
            for v in g.elements() {
                for w in g.elements() {
                    let left = r.multiply(r.product(u, v), &CohClass::schubert(w));
                    let right = r.multiply(&CohClass::schubert(u), r.product(v, w));
                    assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn poincare_pairing_is_a_permutation() {
        // For l(u)+l(v) = l(w0) the top coefficient is δ(v, w0·u) as a 0/1 matrix.
        for t in ["A2", "A3", "B2", "G2"] {
            let r = ring(t);
            let g = r.group();
            let w0 = g.longest();
            for u in g.elements() {
                for v in g.elements() {
                    if g.length(u) + g.length(v) != g.max_length() {
                        continue;
                    }
                    let c = r.product(u, v).coeff(w0);
                    let expected = if v == g.multiply(w0, u) { rat(1) } else { rat(0) };
                    assert_eq!(c, expected, "{t} {} {}", g.name(u), g.name(v));
                }
            }
        }
    }

    #[test]
    fn split_recombines() {
        for t in ["A2", "B2", "G2"] {
            let r = ring(t);
            let g = r.group();
            for i in 0..g.rank() {
                let si = CohClass::schubert(g.generator(i));
                for w in g.elements() {
                    let c = CohClass::schubert(w);
                    let (x, y) = r.split(i, &c);
                    let inv = r.invariant_basis(i);
                    assert!(x.support().all(|e| inv.contains(&e)));
                    assert!(y.support().all(|e| inv.contains(&e)));
                    let mut back = x.clone();
                    back.add_scaled(&r.multiply(&si, &y), &rat(1));
                    assert_eq!(back, c);
                }
            }
        }
    }

    #[test]
    fn nonnegative_chevalley_coefficients() {
        for t in ["G2", "B3", "C3"] {
            let g = WeylGroup::of_type(t.parse().unwrap()).unwrap();
            for i in 0..g.rank() {
                for w in g.elements() {
                    for (_, c) in chevalley(&g, i, w).terms() {
                        assert!(c > &Rational::zero() && c.is_integer());
                    }
                }
            }
        }
    }

    #[test]
    fn document_round_trip() {
        let r = ring("G2");
        let doc = r.to_document();
        let back = CohRing::from_document(r.group().clone(), &doc).unwrap();
        assert_eq!(back.table(), r.table());
    }
}
