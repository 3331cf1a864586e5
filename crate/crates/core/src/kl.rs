//! Kazhdan–Lusztig polynomials by the standard recursion.
//!
//! Shares nothing with the module pipeline beyond the Weyl group, so it can
//! serve as an independent check on arrow counts and graded dimensions.

use crate::rootsystem::{Elem, WeylGroup};

/// Integer polynomial in `q`, lowest degree first, no trailing zeros.
pub type Poly = Vec<i64>;

fn trim(mut p: Poly) -> Poly {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

/// `acc += c · q^shift · p`
fn add_shifted(acc: &mut Poly, p: &[i64], shift: usize, c: i64) {
    if acc.len() < p.len() + shift {
        acc.resize(p.len() + shift, 0);
    }
    for (k, &a) in p.iter().enumerate() {
        acc[k + shift] += c * a;
    }
}

pub fn format_poly(p: &[i64]) -> String {
    let mut out = String::new();
    for (k, &c) in p.iter().enumerate() {
        if c == 0 {
            continue;
        }
        if !out.is_empty() {
            out.push_str(if c < 0 { " - " } else { " + " });
        } else if c < 0 {
            out.push('-');
        }
        let a = c.abs();
        match (k, a) {
            (0, _) => out.push_str(&a.to_string()),
            (_, 1) => {}
            _ => out.push_str(&a.to_string()),
        }
        match k {
            0 => {}
            1 => out.push('q'),
            _ => out.push_str(&format!("q^{k}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// All `P_{y,w}`, indexed `[y][w]`.
#[derive(Clone, Debug)]
pub struct KlTable {
    lengths: Vec<usize>,
    bruhat: Vec<Vec<bool>>,
    polys: Vec<Vec<Poly>>,
}

impl KlTable {
    pub fn compute(group: &WeylGroup) -> Self {
        let n = group.len();
        let lengths: Vec<usize> = group.elements().map(|w| group.length(w)).collect();
        let bruhat: Vec<Vec<bool>> = group
            .elements()
            .map(|y| group.elements().map(|w| group.bruhat_leq(y, w)).collect())
            .collect();
        let mut polys: Vec<Vec<Poly>> = vec![vec![Vec::new(); n]; n];
        polys[0][0] = vec![1];

        // Canonical order is by length, so P_{·,v} for v = sw is ready.
        for w in group.elements().skip(1) {
            let s = group.reduced_word(w)[0];
            let v = group.left_mul(s, w);
            // z < v with sz < z and μ(z,v) ≠ 0
            let corrections: Vec<(usize, i64)> = (0..n)
                .filter(|&z| group.is_left_descent(s, Elem(z)))
                .filter_map(|z| {
                    let m = mu_of(&polys, &lengths, z, v.0);
                    (m != 0).then_some((z, m))
                })
                .collect();
            for x in 0..n {
                if !bruhat[x][w.0] {
                    continue;
                }
                let sx = group.left_mul(s, Elem(x)).0;
                let c = usize::from(group.is_left_descent(s, Elem(x)));
                let mut p: Poly = Vec::new();
                add_shifted(&mut p, &polys[sx][v.0], 1 - c, 1);
                add_shifted(&mut p, &polys[x][v.0], c, 1);
                for &(z, m) in &corrections {
                    if !polys[x][z].is_empty() {
                        let shift = (lengths[w.0] - lengths[z]) / 2;
                        add_shifted(&mut p, &polys[x][z], shift, -m);
                    }
                }
                polys[x][w.0] = trim(p);
            }
        }
        KlTable { lengths, bruhat, polys }
    }

    /// `P_{y,w}`; empty when `y ≰ w`.
    pub fn p(&self, y: Elem, w: Elem) -> &[i64] {
        &self.polys[y.0][w.0]
    }

    pub fn bruhat_leq(&self, y: Elem, w: Elem) -> bool {
        self.bruhat[y.0][w.0]
    }

    /// Coefficient of `q^{(l(w)-l(y)-1)/2}` in `P_{y,w}` for `y < w`; 0 otherwise.
    pub fn mu(&self, y: Elem, w: Elem) -> i64 {
        mu_of(&self.polys, &self.lengths, y.0, w.0)
    }

    /// `μ` of the pair ordered by length, so `edge_mu(a, b) = edge_mu(b, a)`.
    pub fn edge_mu(&self, a: Elem, b: Elem) -> i64 {
        if self.lengths[a.0] <= self.lengths[b.0] {
            self.mu(a, b)
        } else {
            self.mu(b, a)
        }
    }

    /// `Σ_{y≤w} q^{l(y)} P_{y,w}(q)`.
    pub fn ih_poincare(&self, w: Elem) -> Poly {
        let mut out = Vec::new();
        for y in 0..self.polys.len() {
            if self.bruhat[y][w.0] {
                add_shifted(&mut out, &self.polys[y][w.0], self.lengths[y], 1);
            }
        }
        trim(out)
    }
}

fn mu_of(polys: &[Vec<Poly>], lengths: &[usize], y: usize, w: usize) -> i64 {
    let (ly, lw) = (lengths[y], lengths[w]);
    if lw <= ly || (lw - ly) % 2 == 0 {
        return 0;
    }
    polys[y][w].get((lw - ly - 1) / 2).copied().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsystem::CartanType;

    fn group(label: &str) -> WeylGroup {
        WeylGroup::of_type(label.parse::<CartanType>().unwrap()).unwrap()
    }

    /// `R_{x,w}` by its own recursion.
    fn r_polys(g: &WeylGroup) -> Vec<Vec<Poly>> {
        let n = g.len();
        let mut r = vec![vec![Vec::new(); n]; n];
        r[0][0] = vec![1];
        for w in g.elements().skip(1) {
            let s = g.reduced_word(w)[0];
            let v = g.left_mul(s, w);
            for x in g.elements() {
                let sx = g.left_mul(s, x);
                let mut p = Vec::new();
                if g.is_left_descent(s, x) {
                    add_shifted(&mut p, &r[sx.0][v.0], 0, 1);
                } else {
                    add_shifted(&mut p, &r[x.0][v.0], 1, 1);
                    add_shifted(&mut p, &r[x.0][v.0], 0, -1);
                    add_shifted(&mut p, &r[sx.0][v.0], 1, 1);
                }
                r[x.0][w.0] = trim(p);
            }
        }
        r
    }

    fn mul(a: &[i64], b: &[i64]) -> Poly {
        let mut out = Vec::new();
        for (k, &c) in a.iter().enumerate() {
            add_shifted(&mut out, b, k, c);
        }
        trim(out)
    }

    #[test]
    fn a2_all_one() {
        let g = group("A2");
        let t = KlTable::compute(&g);
        for y in g.elements() {
            for w in g.elements() {
                let expect: &[i64] = if g.bruhat_leq(y, w) { &[1] } else { &[] };
                assert_eq!(t.p(y, w), expect);
            }
        }
        assert_eq!(t.ih_poincare(g.longest()), vec![1, 2, 2, 1]);
        assert_eq!(t.ih_poincare(Elem::IDENTITY), vec![1]);
        assert_eq!(t.ih_poincare(g.generator(1)), vec![1, 1]);
        assert_eq!(t.mu(Elem::IDENTITY, g.longest()), 0);
        let edges = g
            .elements()
            .flat_map(|y| g.elements().map(move |w| (y, w)))
            .filter(|&(y, w)| t.edge_mu(y, w) != 0)
            .count();
        assert_eq!(edges, 16);
    }

    #[test]
    fn a3_singular_elements() {
        let g = group("A3");
        let t = KlTable::compute(&g);
        let mut nontrivial: Vec<String> = g
            .elements()
            .filter(|&w| g.elements().any(|y| t.p(y, w).len() > 1))
            .map(|w| g.name(w))
            .collect();
        nontrivial.sort();
        // 3412 and 4231 in one-line notation.
        assert_eq!(nontrivial, vec!["1.2.3.2.1", "2.1.3.2"]);
        for y in g.elements() {
            for w in g.elements() {
                assert!(t.p(y, w).len() <= 2);
                if t.p(y, w).len() == 2 {
                    assert_eq!(t.p(y, w), &[1, 1]);
                }
            }
        }
    }

    #[test]
    fn structural_properties() {
        for label in ["A1", "A2", "B2", "G2", "A3", "B3"] {
            let g = group(label);
            let t = KlTable::compute(&g);
            for w in g.elements() {
                assert_eq!(t.p(w, w), &[1]);
                let ih = t.ih_poincare(w);
                let mut rev = ih.clone();
                rev.reverse();
                assert_eq!(ih, rev, "{label} {}", g.name(w));
                assert_eq!(ih.len(), g.length(w) + 1);
                for y in g.elements() {
                    let p = t.p(y, w);
                    if !g.bruhat_leq(y, w) {
                        assert!(p.is_empty());
                        continue;
                    }
                    assert_eq!(p[0], 1);
                    assert!(p.iter().all(|&c| c >= 0));
                    if y != w {
                        assert!(2 * (p.len() - 1) < g.length(w) - g.length(y));
                    }
                    assert_eq!(t.edge_mu(y, w), t.edge_mu(w, y));
                }
            }
        }
    }

    #[test]
    fn r_polynomial_identity() {
        // q^{l(w)-l(x)} P_{x,w}(1/q) = Σ_{x≤y≤w} R_{x,y} P_{y,w}
        for label in ["B2", "A3", "G2"] {
            let g = group(label);
            let t = KlTable::compute(&g);
            let r = r_polys(&g);
            for x in g.elements() {
                for w in g.elements() {
                    if !g.bruhat_leq(x, w) {
                        continue;
                    }
                    let d = g.length(w) - g.length(x);
                    let mut lhs = vec![0; d + 1];
                    for (k, &c) in t.p(x, w).iter().enumerate() {
                        lhs[d - k] = c;
                    }
                    let mut rhs = Vec::new();
                    for y in g.elements() {
                        if g.bruhat_leq(x, y) && g.bruhat_leq(y, w) {
                            add_shifted(&mut rhs, &mul(&r[x.0][y.0], t.p(y, w)), 0, 1);
                        }
                    }
                    assert_eq!(trim(lhs), trim(rhs));
                }
            }
        }
    }

    #[test]
    fn formatting() {
        assert_eq!(format_poly(&[1, 1]), "1 + q");
        assert_eq!(format_poly(&[1, 0, 2]), "1 + 2q^2");
        assert_eq!(format_poly(&[]), "0");
        assert_eq!(format_poly(&[0, -1]), "-q");
    }
}
