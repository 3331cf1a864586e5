//! Graded Hom spaces `Hom^d_C(V_y, V_w)`: degree-`d` linear maps commuting
//! with the `C`-action, found as the nullspace of the commutation
//! constraints restricted to the entries allowed by the grading.

use std::collections::HashMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::exactalg::{QMatrix, Rational};
use crate::rootsystem::Elem;
use crate::schubert::CohRing;
use crate::soergel::{GradedModule, ModuleFamily};

/// Which classes the commutation constraints are imposed for. The
/// generators suffice; imposing every class is a consistency check.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Constraints {
    #[default]
    Generators,
    AllClasses,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomBasis {
    pub source: Elem,
    pub target: Elem,
    pub degree: i32,
    /// Each matrix is `dim V_target × dim V_source`.
    pub basis: Vec<QMatrix>,
}

impl HomBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Basis of degree-`degree` maps `F` with `F·S_g = T_g·F` for every class
/// `g` in `classes`, in RREF order over the row-major entries of `F`.
pub fn graded_homs(source: &GradedModule, target: &GradedModule, degree: i32, classes: &[Elem]) -> Vec<QMatrix> {
    let (sd, td) = (source.degrees(), target.degrees());
    let (ns, nt) = (sd.len(), td.len());

    let mut vars: Vec<(usize, usize)> = Vec::new();
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    for (p, &dp) in td.iter().enumerate() {
        for (q, &dq) in sd.iter().enumerate() {
            if dp == dq + degree {
                index.insert((p, q), vars.len());
                vars.push((p, q));
            }
        }
    }
    if vars.is_empty() {
        return Vec::new();
    }

    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for &g in classes {
        let (s, t) = (source.action(g), target.action(g));
        // (F S - T F)[p, q'] for every (p, q'); only entries touching a
        // variable can be nonzero.
        let mut eqs: HashMap<(usize, usize), Vec<Rational>> = HashMap::new();
        for (q, qq, c) in s.nonzero_entries() {
            for p in 0..nt {
                if let Some(&v) = index.get(&(p, q)) {
                    let row = eqs.entry((p, qq)).or_insert_with(|| vec![Rational::zero(); vars.len()]);
                    row[v] += c;
                }
            }
        }
        for (p, pp, c) in t.nonzero_entries() {
            for qq in 0..ns {
                if let Some(&v) = index.get(&(pp, qq)) {
                    let row = eqs.entry((p, qq)).or_insert_with(|| vec![Rational::zero(); vars.len()]);
                    row[v] -= c;
                }
            }
        }
        let mut keys: Vec<_> = eqs.keys().copied().collect();
        keys.sort_unstable();
        for k in keys {
            let row = eqs.remove(&k).unwrap();
            if row.iter().any(|c| !c.is_zero()) {
                rows.push(row);
            }
        }
    }

    let kernel = if rows.is_empty() {
        (0..vars.len())
            .map(|k| {
                let mut v = vec![Rational::zero(); vars.len()];
                v[k] = Rational::one();
                v
            })
            .collect()
    } else {
        QMatrix::from_rows(rows, vars.len())
            .expect("constraint rows have uniform width")
            .nullspace()
    };
    if kernel.is_empty() {
        return Vec::new();
    }
    let (echelon, pivots) = QMatrix::from_rows(kernel, vars.len())
        .expect("kernel vectors have uniform width")
        .rref();
    (0..pivots.len())
        .map(|r| {
            let mut f = QMatrix::zeros(nt, ns);
            for (k, &(p, q)) in vars.iter().enumerate() {
                f[(p, q)] = echelon[(r, k)].clone();
            }
            f
        })
        .collect()
}

pub fn hom_basis(ring: &CohRing, family: &ModuleFamily, y: Elem, w: Elem, degree: i32) -> HomBasis {
    hom_basis_with(ring, family, y, w, degree, Constraints::Generators)
}

pub fn hom_basis_with(
    ring: &CohRing,
    family: &ModuleFamily,
    y: Elem,
    w: Elem,
    degree: i32,
    constraints: Constraints,
) -> HomBasis {
    let group = ring.group();
    let classes: Vec<Elem> = match constraints {
        Constraints::Generators => group.generators(),
        Constraints::AllClasses => group.elements().collect(),
    };
    HomBasis {
        source: y,
        target: w,
        degree,
        basis: graded_homs(family.module(y), family.module(w), degree, &classes),
    }
}

/// Number of arrows `y → w`: `dim Hom¹(V_y, V_w)`.
pub fn arrow_count(ring: &CohRing, family: &ModuleFamily, y: Elem, w: Elem) -> usize {
    hom_basis(ring, family, y, w, 1).dim()
}

/// `dims[y][w] = dim Hom^d(V_y, V_w)` for all pairs.
pub fn hom_dimensions(ring: &CohRing, family: &ModuleFamily, degree: i32) -> Vec<Vec<usize>> {
    all_hom_bases(ring, family, degree)
        .into_iter()
        .map(|row| row.into_iter().map(|h| h.dim()).collect())
        .collect()
}

/// `bases[y][w]` for all pairs, solved in parallel.
pub fn all_hom_bases(ring: &CohRing, family: &ModuleFamily, degree: i32) -> Vec<Vec<HomBasis>> {
    let elems: Vec<Elem> = ring.group().elements().collect();
    elems
        .par_iter()
        .map(|&y| elems.iter().map(|&w| hom_basis(ring, family, y, w, degree)).collect())
        .collect()
}
