//! Root systems, Weyl groups and their combinatorics.
//!
//! A Weyl group element is identified by its integer action matrix on the
//! simple roots; reduced words are derived data. Elements are stored in a
//! canonical order (length, then lexicographically least reduced word) and
//! addressed by their position in that order, [`Elem`].

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{rat, ratio, Rational};

/// Groups larger than this are refused; E7/E8 and large classical ranks sit
/// far outside what the exact pipeline can handle.
pub const MAX_GROUP_ORDER: u64 = 50_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

/// A simple type such as `A2` or `G2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CartanType {
    pub family: Family,
    pub rank: usize,
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B => rank >= 2,
            Family::C => rank >= 3,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(CartanType { family, rank })
        } else {
            Err(Error::InvalidType(format!("{family:?}{rank}")))
        }
    }

    /// Degrees of the basic invariants; their product is `|W|`.
    pub fn degrees(&self) -> Vec<u64> {
        let n = self.rank as u64;
        match self.family {
            Family::A => (2..=n + 1).collect(),
            Family::B | Family::C => (1..=n).map(|k| 2 * k).collect(),
            Family::D => {
                let mut d: Vec<u64> = (1..n).map(|k| 2 * k).collect();
                d.push(n);
                d.sort_unstable();
                d
            }
            Family::E => match n {
                6 => vec![2, 5, 6, 8, 9, 12],
                7 => vec![2, 6, 8, 10, 12, 14, 18],
                _ => vec![2, 8, 12, 14, 18, 20, 24, 30],
            },
            Family::F => vec![2, 6, 8, 12],
            Family::G => vec![2, 6],
        }
    }

    pub fn group_order(&self) -> u64 {
        self.degrees().iter().product()
    }

    /// Number of positive roots, i.e. the sum of `degree - 1`.
    pub fn positive_root_count(&self) -> usize {
        self.degrees().iter().map(|d| (d - 1) as usize).sum()
    }

    /// Gram matrix `(α_i, α_j)` of the simple roots, Bourbaki numbering.
    fn gram(&self) -> Vec<Vec<Rational>> {
        let n = self.rank;
        let mut g = vec![vec![Rational::zero(); n]; n];
        let mut len2 = vec![rat(2); n];
        let mut edges: Vec<(usize, usize, Rational)> = Vec::new();
        let chain = |k: usize| {
            (0..k.saturating_sub(1))
                .map(|i| (i, i + 1, rat(-1)))
                .collect::<Vec<_>>()
        };
        match self.family {
            Family::A => edges = chain(n),
            Family::B => {
                edges = chain(n);
                len2[n - 1] = rat(1);
            }
            Family::C => {
                edges = chain(n);
                edges[n - 2].2 = rat(-2);
                len2[n - 1] = rat(4);
            }
            Family::D => {
                edges = chain(n - 1);
                edges.push((n - 3, n - 1, rat(-1)));
            }
            Family::E => {
                edges.push((0, 2, rat(-1)));
                edges.push((1, 3, rat(-1)));
                for i in 2..n - 1 {
                    edges.push((i, i + 1, rat(-1)));
                }
            }
            Family::F => {
                len2 = vec![rat(2), rat(2), rat(1), rat(1)];
                edges = vec![(0, 1, rat(-1)), (1, 2, rat(-1)), (2, 3, ratio(-1, 2))];
            }
            Family::G => {
                len2 = vec![rat(2), rat(6)];
                edges = vec![(0, 1, rat(-3))];
            }
        }
        for (i, l) in len2.into_iter().enumerate() {
            g[i][i] = l;
        }
        for (i, j, x) in edges {
            g[i][j] = x.clone();
            g[j][i] = x;
        }
        g
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::InvalidType(s.to_string());
        let mut chars = t.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('E') => Family::E,
            Some('F') => Family::F,
            Some('G') => Family::G,
            _ => return Err(bad()),
        };
        let rank: usize = chars.as_str().parse().map_err(|_| bad())?;
        CartanType::new(family, rank)
    }
}

/// Cartan data and positive roots, in simple-root coordinates.
#[derive(Clone, Debug)]
pub struct RootSystem {
    cartan_type: CartanType,
    gram: Vec<Vec<Rational>>,
    cartan: Vec<Vec<i64>>,
    positive_roots: Vec<Vec<i64>>,
    root_index: HashMap<Vec<i64>, usize>,
}

impl RootSystem {
    pub fn build(cartan_type: CartanType) -> Result<Self> {
        let n = cartan_type.rank;
        let gram = cartan_type.gram();
        let cartan: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let a = rat(2) * &gram[i][j] / &gram[i][i];
                        debug_assert!(a.is_integer());
                        a.to_integer().try_into().expect("small Cartan entry")
                    })
                    .collect()
            })
            .collect();
        let mut rs = RootSystem {
            cartan_type,
            gram,
            cartan,
            positive_roots: Vec::new(),
            root_index: HashMap::new(),
        };
        rs.positive_roots = rs.reflection_closure();
        rs.root_index = rs
            .positive_roots
            .iter()
            .enumerate()
            .map(|(k, r)| (r.clone(), k))
            .collect();
        rs.validate()?;
        Ok(rs)
    }

    /// Closes the simple roots under the simple reflections, keeping the
    /// positive results. Roots are ordered by height, then lexicographically.
    fn reflection_closure(&self) -> Vec<Vec<i64>> {
        let n = self.rank();
        let mut seen: HashMap<Vec<i64>, ()> = HashMap::new();
        let mut queue: VecDeque<Vec<i64>> = VecDeque::new();
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            seen.insert(e.clone(), ());
            queue.push_back(e);
        }
        while let Some(r) = queue.pop_front() {
            for i in 0..n {
                let s = self.reflect_simple(i, &r);
                if s.iter().all(|&c| c >= 0) && !seen.contains_key(&s) {
                    seen.insert(s.clone(), ());
                    queue.push_back(s);
                }
            }
        }
        let mut roots: Vec<Vec<i64>> = seen.into_keys().collect();
        roots.sort_by(|a, b| {
            let ha: i64 = a.iter().sum();
            let hb: i64 = b.iter().sum();
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });
        roots
    }

    fn validate(&self) -> Result<()> {
        let n = self.rank();
        if (0..n).any(|i| self.cartan[i][i] != 2) {
            return Err(Error::Internal("Cartan diagonal must be 2".into()));
        }
        // Sylvester: all leading principal minors of the Gram matrix positive.
        for k in 1..=n {
            let m: Vec<Vec<Rational>> = (0..k).map(|i| self.gram[i][..k].to_vec()).collect();
            if !determinant(m).is_positive() {
                return Err(Error::Internal(
                    "symmetrized Cartan matrix not positive definite".into(),
                ));
            }
        }
        for r in &self.positive_roots {
            for i in 0..n {
                let s = self.reflect_simple(i, r);
                let neg: Vec<i64> = s.iter().map(|c| -c).collect();
                if !self.root_index.contains_key(&s) && !self.root_index.contains_key(&neg) {
                    return Err(Error::Internal("positive roots not closed under reflections".into()));
                }
            }
        }
        if self.positive_roots.len() != self.cartan_type.positive_root_count() {
            return Err(Error::Internal(format!(
                "{} positive roots, expected {}",
                self.positive_roots.len(),
                self.cartan_type.positive_root_count()
            )));
        }
        Ok(())
    }

    pub fn cartan_type(&self) -> CartanType {
        self.cartan_type
    }

    pub fn rank(&self) -> usize {
        self.cartan_type.rank
    }

    /// `a_ij = 2(α_i, α_j) / (α_i, α_i)`.
    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// `d_i = (α_i, α_i) / 2`, so that `d_i a_ij` is symmetric.
    pub fn symmetrizer(&self) -> Vec<Rational> {
        (0..self.rank()).map(|i| &self.gram[i][i] / rat(2)).collect()
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    pub fn root_position(&self, root: &[i64]) -> Option<usize> {
        self.root_index.get(root).copied()
    }

    pub fn inner(&self, a: &[i64], b: &[i64]) -> Rational {
        let mut acc = Rational::zero();
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y != 0 {
                    acc += &self.gram[i][j] * rat(x * y);
                }
            }
        }
        acc
    }

    pub fn reflect_simple(&self, i: usize, v: &[i64]) -> Vec<i64> {
        // s_i(v) = v - <α_i^∨, v> α_i
        let pairing: i64 = v.iter().enumerate().map(|(j, &c)| self.cartan[i][j] * c).sum();
        let mut out = v.to_vec();
        out[i] -= pairing;
        out
    }

    fn simple_reflection_matrix(&self, i: usize) -> Vec<i64> {
        let n = self.rank();
        let mut m = identity_matrix(n);
        for j in 0..n {
            m[i * n + j] -= self.cartan[i][j];
        }
        m
    }

    /// Action matrix of the reflection in `root`, which must be a positive root.
    pub fn reflection_matrix(&self, root: &[i64]) -> Result<Vec<i64>> {
        if self.root_position(root).is_none() {
            return Err(Error::InvalidType(format!("{root:?} is not a positive root")));
        }
        let n = self.rank();
        let norm = self.inner(root, root);
        let mut m = vec![0i64; n * n];
        for j in 0..n {
            let mut e = vec![0; n];
            e[j] = 1;
            let c = rat(2) * self.inner(root, &e) / &norm;
            debug_assert!(c.is_integer());
            let c: i64 = c.to_integer().try_into().expect("small coefficient");
            for i in 0..n {
                m[i * n + j] = e[i] - c * root[i];
            }
        }
        Ok(m)
    }
}

fn identity_matrix(n: usize) -> Vec<i64> {
    let mut m = vec![0; n * n];
    for i in 0..n {
        m[i * n + i] = 1;
    }
    m
}

fn mat_mul(a: &[i64], b: &[i64], n: usize) -> Vec<i64> {
    let mut out = vec![0; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x == 0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += x * b[k * n + j];
            }
        }
    }
    out
}

fn mat_vec(a: &[i64], v: &[i64]) -> Vec<i64> {
    let n = v.len();
    (0..n).map(|i| (0..n).map(|j| a[i * n + j] * v[j]).sum()).collect()
}

fn determinant(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = rat(1);
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= &m[c][c];
        let (top, rest) = m.split_at_mut(c + 1);
        let pivot = &top[c];
        for row in rest {
            let f = &row[c] / &pivot[c];
            for (x, p) in row[c..].iter_mut().zip(&pivot[c..]) {
                *x -= &f * p;
            }
        }
    }
    det
}

/// Position of an element in the canonical order of its group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Elem(pub usize);

impl Elem {
    pub const IDENTITY: Elem = Elem(0);

    pub fn index(self) -> usize {
        self.0
    }
}

/// A Weyl group element: its action on simple-root coordinates (column `j`
/// is the image of `α_j`) and its length.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    rank: usize,
    action: Vec<i64>,
    length: usize,
}

impl WeylElement {
    pub fn action(&self) -> &[i64] {
        &self.action
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        mat_vec(&self.action, v)
    }
}

#[derive(Clone, Debug)]
pub struct WeylGroup {
    root_system: RootSystem,
    elements: Vec<WeylElement>,
    index: HashMap<Vec<i64>, Elem>,
    left: Vec<Vec<Elem>>,
    right: Vec<Vec<Elem>>,
    words: Vec<Vec<usize>>,
    inverses: Vec<Elem>,
    reflections: Vec<Elem>,
}

impl WeylGroup {
    pub fn generate(root_system: RootSystem) -> Result<Self> {
        let ct = root_system.cartan_type();
        let order = ct.group_order();
        if order > MAX_GROUP_ORDER {
            return Err(Error::TooLarge {
                label: ct.to_string(),
                order,
                limit: MAX_GROUP_ORDER,
            });
        }
        let n = root_system.rank();
        let gens: Vec<Vec<i64>> = (0..n).map(|i| root_system.simple_reflection_matrix(i)).collect();

        // Breadth-first closure under right multiplication by generators.
        let mut mats: Vec<Vec<i64>> = vec![identity_matrix(n)];
        let mut seen: HashMap<Vec<i64>, usize> = HashMap::from([(mats[0].clone(), 0)]);
        let mut right_raw: Vec<Vec<usize>> = Vec::new();
        let mut k = 0;
        while k < mats.len() {
            let mut row = Vec::with_capacity(n);
            for g in &gens {
                let p = mat_mul(&mats[k], g, n);
                let id = match seen.get(&p) {
                    Some(&id) => id,
                    None => {
                        mats.push(p.clone());
                        seen.insert(p, mats.len() - 1);
                        mats.len() - 1
                    }
                };
                row.push(id);
            }
            right_raw.push(row);
            k += 1;
        }
        if mats.len() as u64 != order {
            return Err(Error::Internal(format!(
                "closure produced {} elements, expected {order}",
                mats.len()
            )));
        }

        let lengths: Vec<usize> = mats
            .iter()
            .map(|m| {
                root_system
                    .positive_roots()
                    .iter()
                    .filter(|r| mat_vec(m, r).iter().all(|&c| c <= 0))
                    .count()
            })
            .collect();
        let left_raw: Vec<Vec<usize>> = mats
            .iter()
            .map(|m| gens.iter().map(|g| seen[&mat_mul(g, m, n)]).collect())
            .collect();

        // Lex-least reduced word: repeatedly strip the smallest left descent.
        let words_raw: Vec<Vec<usize>> = (0..mats.len())
            .map(|mut w| {
                let mut word = Vec::with_capacity(lengths[w]);
                while lengths[w] > 0 {
                    let i = (0..n)
                        .find(|&i| lengths[left_raw[w][i]] < lengths[w])
                        .expect("nonidentity element has a left descent");
                    word.push(i);
                    w = left_raw[w][i];
                }
                word
            })
            .collect();

        let mut order_ids: Vec<usize> = (0..mats.len()).collect();
        order_ids.sort_by(|&a, &b| {
            lengths[a]
                .cmp(&lengths[b])
                .then_with(|| words_raw[a].cmp(&words_raw[b]))
        });
        let mut new_id = vec![0usize; mats.len()];
        for (pos, &old) in order_ids.iter().enumerate() {
            new_id[old] = pos;
        }

        let elements: Vec<WeylElement> = order_ids
            .iter()
            .map(|&old| WeylElement {
                rank: n,
                action: mats[old].clone(),
                length: lengths[old],
            })
            .collect();
        let index = elements
            .iter()
            .enumerate()
            .map(|(k, e)| (e.action.clone(), Elem(k)))
            .collect();
        let remap = |raw: &Vec<Vec<usize>>| -> Vec<Vec<Elem>> {
            (0..n)
                .map(|i| order_ids.iter().map(|&old| Elem(new_id[raw[old][i]])).collect())
                .collect()
        };
        let left = remap(&left_raw);
        let right = remap(&right_raw);
        let words = order_ids.iter().map(|&old| words_raw[old].clone()).collect();

        let mut group = WeylGroup {
            root_system,
            elements,
            index,
            left,
            right,
            words,
            inverses: Vec::new(),
            reflections: Vec::new(),
        };
        group.inverses = (0..group.len())
            .map(|w| {
                let word = &group.words[w];
                group.product_of_word(word.iter().rev().copied())
            })
            .collect();
        group.reflections = group
            .root_system
            .positive_roots()
            .iter()
            .map(|r| {
                let m = group.root_system.reflection_matrix(r)?;
                group
                    .index
                    .get(&m)
                    .copied()
                    .ok_or_else(|| Error::Internal("reflection not in group".into()))
            })
            .collect::<Result<_>>()?;
        Ok(group)
    }

    pub fn of_type(ct: CartanType) -> Result<Self> {
        Self::generate(RootSystem::build(ct)?)
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.root_system
    }

    pub fn rank(&self) -> usize {
        self.root_system.rank()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> impl ExactSizeIterator<Item = Elem> + Clone {
        (0..self.elements.len()).map(Elem)
    }

    pub fn element(&self, w: Elem) -> &WeylElement {
        &self.elements[w.0]
    }

    /// Looks up a Weyl element by its action matrix; fails for elements of
    /// another root system.
    pub fn find(&self, e: &WeylElement) -> Result<Elem> {
        if e.rank != self.rank() {
            return Err(Error::DimensionMismatch(format!(
                "element of rank {} used with a group of rank {}",
                e.rank,
                self.rank()
            )));
        }
        self.index
            .get(&e.action)
            .copied()
            .ok_or_else(|| Error::MalformedElement("element does not belong to this group".into()))
    }

    pub fn length(&self, w: Elem) -> usize {
        self.elements[w.0].length
    }

    pub fn max_length(&self) -> usize {
        self.length(self.longest())
    }

    pub fn longest(&self) -> Elem {
        Elem(self.len() - 1)
    }

    /// The simple reflection `s_i` (generator index `i` is zero-based).
    pub fn generator(&self, i: usize) -> Elem {
        self.right[i][0]
    }

    pub fn generators(&self) -> Vec<Elem> {
        (0..self.rank()).map(|i| self.generator(i)).collect()
    }

    /// `s_i · w`.
    pub fn left_mul(&self, i: usize, w: Elem) -> Elem {
        self.left[i][w.0]
    }

    /// `w · s_i`.
    pub fn right_mul(&self, w: Elem, i: usize) -> Elem {
        self.right[i][w.0]
    }

    pub fn multiply(&self, a: Elem, b: Elem) -> Elem {
        self.words[b.0].iter().fold(a, |acc, &i| self.right_mul(acc, i))
    }

    /// Product of two Weyl elements given by action matrix.
    pub fn compose(&self, a: &WeylElement, b: &WeylElement) -> Result<Elem> {
        let ea = self.find(a)?;
        let eb = self.find(b)?;
        Ok(self.multiply(ea, eb))
    }

    pub fn inverse(&self, w: Elem) -> Elem {
        self.inverses[w.0]
    }

    /// Lexicographically least reduced word, zero-based generator indices.
    pub fn reduced_word(&self, w: Elem) -> &[usize] {
        &self.words[w.0]
    }

    fn product_of_word(&self, word: impl IntoIterator<Item = usize>) -> Elem {
        word.into_iter().fold(Elem::IDENTITY, |acc, i| self.right_mul(acc, i))
    }

    /// Evaluates a (not necessarily reduced) word of zero-based generator indices.
    pub fn from_word(&self, word: &[usize]) -> Result<Elem> {
        if let Some(&bad) = word.iter().find(|&&i| i >= self.rank()) {
            return Err(Error::MalformedElement(format!("generator {} out of range", bad + 1)));
        }
        Ok(self.product_of_word(word.iter().copied()))
    }

    pub fn is_left_descent(&self, i: usize, w: Elem) -> bool {
        self.length(self.left_mul(i, w)) < self.length(w)
    }

    pub fn is_right_descent(&self, w: Elem, i: usize) -> bool {
        self.length(self.right_mul(w, i)) < self.length(w)
    }

    /// Bruhat order by the lifting property: if `s·w < w` then
    /// `y ≤ w` iff `s·y ≤ s·w` (when `s·y < y`) or `y ≤ s·w` (otherwise).
    pub fn bruhat_leq(&self, mut y: Elem, mut w: Elem) -> bool {
        loop {
            if self.length(y) > self.length(w) {
                return false;
            }
            if w == Elem::IDENTITY {
                return y == Elem::IDENTITY;
            }
            let s = (0..self.rank())
                .find(|&i| self.is_left_descent(i, w))
                .expect("nonidentity element has a left descent");
            let sy = self.left_mul(s, y);
            if self.length(sy) < self.length(y) {
                y = sy;
            }
            w = self.left_mul(s, w);
        }
    }

    /// The reflection `s_α` for the positive root at `root_index`.
    pub fn reflection(&self, root_index: usize) -> Elem {
        self.reflections[root_index]
    }

    pub fn reflection_of_root(&self, root: &[i64]) -> Result<Elem> {
        let k = self
            .root_system
            .root_position(root)
            .ok_or_else(|| Error::InvalidType(format!("{root:?} is not a positive root")))?;
        Ok(self.reflection(k))
    }

    /// Dot-separated one-based generator indices, `e` for the identity.
    pub fn name(&self, w: Elem) -> String {
        let word = self.reduced_word(w);
        if word.is_empty() {
            "e".to_string()
        } else {
            word.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(".")
        }
    }

    /// Parses `e` or a dot-separated word such as `1.2.1`.
    pub fn parse(&self, s: &str) -> Result<Elem> {
        let t = s.trim();
        if t == "e" || t.is_empty() {
            return Ok(Elem::IDENTITY);
        }
        let word = t
            .split('.')
            .map(|part| match part.trim().parse::<usize>() {
                Ok(i) if i >= 1 && i <= self.rank() => Ok(i - 1),
                _ => Err(Error::MalformedElement(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()?;
        self.from_word(&word)
    }

    pub fn elements_of_length(&self, l: usize) -> impl Iterator<Item = Elem> + '_ {
        self.elements().filter(move |&w| self.length(w) == l)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(s: &str) -> WeylGroup {
        WeylGroup::of_type(s.parse().unwrap()).unwrap()
    }

    #[test]
    fn build_examples() {
        let a1 = RootSystem::build("A1".parse().unwrap()).unwrap();
        assert_eq!(a1.positive_roots().len(), 1);
        let a2 = RootSystem::build("A2".parse().unwrap()).unwrap();
        assert_eq!(a2.positive_roots().len(), 3);
        assert_eq!(a2.cartan(), &[vec![2, -1], vec![-1, 2]]);
        let g2 = RootSystem::build("G2".parse().unwrap()).unwrap();
        assert_eq!(g2.positive_roots().len(), 6);
        assert!("C2".parse::<CartanType>().is_err());
        assert!("D3".parse::<CartanType>().is_err());
        assert!("E9".parse::<CartanType>().is_err());
        assert!("X3".parse::<CartanType>().is_err());
    }

    #[test]
    fn symmetrized_cartan_is_symmetric() {
        for t in ["B3", "C3", "F4", "G2", "D4", "E6"] {
            let rs = RootSystem::build(t.parse().unwrap()).unwrap();
            let d = rs.symmetrizer();
            for i in 0..rs.rank() {
                for j in 0..rs.rank() {
                    assert_eq!(&d[i] * rat(rs.cartan()[i][j]), &d[j] * rat(rs.cartan()[j][i]), "{t}");
                }
            }
        }
    }

    #[test]
    fn positive_root_counts() {
        for (t, n) in [("B3", 9), ("C3", 9), ("D4", 12), ("F4", 24), ("E6", 36), ("E8", 120)] {
            let rs = RootSystem::build(t.parse().unwrap()).unwrap();
            assert_eq!(rs.positive_roots().len(), n, "{t}");
        }
    }

    #[test]
    fn a2_group() {
        let g = group("A2");
        assert_eq!(g.len(), 6);
        let lengths: Vec<usize> = g.elements().map(|w| g.length(w)).collect();
        assert_eq!(lengths, vec![0, 1, 1, 2, 2, 3]);
        let names: Vec<String> = g.elements().map(|w| g.name(w)).collect();
        assert_eq!(names, vec!["e", "1", "2", "1.2", "2.1", "1.2.1"]);
        let w0 = g.longest();
        assert_eq!(g.reduced_word(w0), &[0, 1, 0]);
        assert_eq!(g.parse("1.2.1").unwrap(), w0);
        assert_eq!(g.parse("2.1.2").unwrap(), w0);
        assert_eq!(g.inverse(g.parse("1.2").unwrap()), g.parse("2.1").unwrap());
        assert_eq!(g.length(Elem::IDENTITY), 0);
        assert!(g.parse("3").is_err());
        assert!(g.parse("1..2").is_err());
    }

    #[test]
    fn small_group_orders() {
        assert_eq!(group("A1").len(), 2);
        let b2 = group("B2");
        assert_eq!(b2.len(), 8);
        assert_eq!(b2.max_length(), 4);
        assert_eq!(group("G2").len(), 12);
        assert_eq!(group("A3").len(), 24);
    }

    #[test]
    fn too_large_is_refused() {
        assert!(matches!(
            WeylGroup::of_type("E7".parse().unwrap()),
            Err(Error::TooLarge { .. })
        ));
        assert!(matches!(
            WeylGroup::of_type("A8".parse().unwrap()),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn reflections() {
        let g = group("A2");
        let rs = g.root_system();
        assert_eq!(g.reflection_of_root(&[1, 0]).unwrap(), g.generator(0));
        assert_eq!(g.reflection_of_root(&[1, 1]).unwrap(), g.longest());
        assert!(g.reflection_of_root(&[2, 1]).is_err());
        for t in ["A3", "B2", "G2", "C3"] {
            let g = group(t);
            let rs = g.root_system();
            for (k, r) in rs.positive_roots().iter().enumerate() {
                let s = g.reflection(k);
                assert_eq!(g.multiply(s, s), Elem::IDENTITY);
                let neg: Vec<i64> = r.iter().map(|c| -c).collect();
                assert_eq!(g.element(s).apply(r), neg);
            }
        }
        let _ = rs;
    }

    #[test]
    fn length_complement_to_longest() {
        for t in ["A3", "B3", "G2", "D4"] {
            let g = group(t);
            let w0 = g.longest();
            let top = g.length(w0);
            for w in g.elements() {
                assert_eq!(g.length(w) + g.length(g.multiply(w, w0)), top);
                for i in 0..g.rank() {
                    let l = g.length(g.right_mul(w, i));
                    assert!(l + 1 == g.length(w) || l == g.length(w) + 1);
                }
            }
            assert_eq!(g.elements().filter(|&w| g.length(w) == top).count(), 1);
        }
    }

    #[test]
    fn words_evaluate_and_are_reduced() {
        let g = group("B3");
        for w in g.elements() {
            let word = g.reduced_word(w);
            assert_eq!(word.len(), g.length(w));
            assert_eq!(g.from_word(word).unwrap(), w);
            assert_eq!(g.parse(&g.name(w)).unwrap(), w);
        }
    }

    fn subword_products(g: &WeylGroup, w: Elem) -> Vec<Elem> {
        let word = g.reduced_word(w);
        let mut out: Vec<Elem> = (0u32..1 << word.len())
            .map(|mask| {
                let sub: Vec<usize> = word
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask & (1 << k) != 0)
                    .map(|(_, &i)| i)
                    .collect();
                g.from_word(&sub).unwrap()
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    #[test]
    fn bruhat_matches_subword_property() {
        for t in ["A2", "B2", "A3", "G2"] {
            let g = group(t);
            for w in g.elements() {
                let below = subword_products(&g, w);
                for y in g.elements() {
                    assert_eq!(g.bruhat_leq(y, w), below.binary_search(&y).is_ok(), "{t}");
                }
            }
        }
    }

    #[test]
    fn bruhat_examples_a2() {
        let g = group("A2");
        let p = |s: &str| g.parse(s).unwrap();
        for w in g.elements() {
            assert!(g.bruhat_leq(Elem::IDENTITY, w));
            assert!(g.bruhat_leq(w, g.longest()));
        }
        assert!(g.bruhat_leq(p("1"), p("1.2")));
        assert!(g.bruhat_leq(p("1"), p("2.1")));
        assert!(!g.bruhat_leq(p("1"), p("2")));
    }

    #[test]
    fn find_rejects_foreign_elements() {
        let a2 = group("A2");
        let a3 = group("A3");
        let foreign = a3.element(a3.generator(0)).clone();
        assert!(a2.find(&foreign).is_err());
        let s1 = a2.element(a2.generator(0)).clone();
        let s2 = a2.element(a2.generator(1)).clone();
        assert_eq!(a2.compose(&s1, &s2).unwrap(), a2.parse("1.2").unwrap());
        assert!(a2.compose(&s1, &foreign).is_err());
    }
}
