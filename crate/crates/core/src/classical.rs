//! Reference data for `A2` in the classical numbering of `S_3`
//! (`s1s2s1 = 1, s1s2 = 2, s2s1 = 3, s1 = 4, s2 = 5, e = 6`): the modules
//! `V_w` in the tensor bases, the sixteen degree-one maps between them, and a
//! basis of the relator space. Used to compare against the computed quiver
//! once both are put in the same arrow normalization.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactalg::{QMatrix, Rational};
use crate::quiver::{parse_relators, rescale_arrows, Arrow, Numbering, PathCombo, Quiver, Relators};
use crate::rootsystem::{CartanType, Elem, Family, WeylGroup};
use crate::schubert::CohRing;
use crate::soergel::{hom_degree0, GradedModule, ModuleFamily};

const NAMES: [(&str, usize); 6] = [("1.2.1", 1), ("1.2", 2), ("2.1", 3), ("1", 4), ("2", 5), ("e", 6)];

pub const RELATORS: &str = "
(121), (131),
(242), (252) + (212),
(353), (343) + (313),
(243) + (213), (253) + (213),
(352) + (312), (342) + (312),
(124) + (134), (125) + (135),
(246) + (256), (346) + (356),
(421) + (431), (521) + (531),
(464) - (424), (565) - (535),
(425) + (435) + (465), (524) + (534) + (564),
(642) + (652), (643) + (653)
";

fn require_a2(group: &WeylGroup) -> Result<()> {
    let ct = group.root_system().cartan_type();
    if ct != CartanType::new(Family::A, 2)? {
        return Err(Error::InvalidType(format!(
            "the classical vertex numbering exists only for A2, not {ct}"
        )));
    }
    Ok(())
}

pub fn numbering(group: &WeylGroup) -> Result<Numbering> {
    require_a2(group)?;
    let mut ids = vec![0; group.len()];
    for (name, id) in NAMES {
        ids[group.parse(name)?.0] = id;
    }
    Numbering::from_ids(ids)
}

fn m(rows: &[&[i64]]) -> QMatrix {
    QMatrix::from_i64(rows)
}

/// `(degrees, σ_1, σ_2)` per classical vertex number.
fn module_data(id: usize) -> (Vec<i32>, QMatrix, QMatrix) {
    let z1 = || m(&[&[0]]);
    let z2 = || m(&[&[0, 0], &[0, 0]]);
    let lower = || m(&[&[0, 0], &[1, 0]]);
    let a = || m(&[&[0, 0, 0, 0], &[0, 0, 0, 0], &[1, 0, 0, 0], &[0, 1, 0, 0]]);
    let b = || m(&[&[0, 0, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 0], &[0, 1, 1, 0]]);
    match id {
        6 => (vec![0], z1(), z1()),
        4 => (vec![-1, 1], lower(), z2()),
        5 => (vec![-1, 1], z2(), lower()),
        2 => (vec![-2, 0, 0, 2], a(), b()),
        3 => (vec![-2, 0, 0, 2], b(), a()),
        1 => (
            vec![-3, -1, -1, 1, 1, 3],
            m(&[
                &[0, 0, 0, 0, 0, 0],
                &[1, 0, 0, 0, 0, 0],
                &[0, 0, 0, 0, 0, 0],
                &[0, 0, 1, 0, 0, 0],
                &[0, 1, 1, 0, 0, 0],
                &[0, 0, 0, 1, 0, 0],
            ]),
            m(&[
                &[0, 0, 0, 0, 0, 0],
                &[0, 0, 0, 0, 0, 0],
                &[1, 0, 0, 0, 0, 0],
                &[0, 1, 1, 0, 0, 0],
                &[0, 1, 0, 0, 0, 0],
                &[0, 0, 0, 0, 1, 0],
            ]),
        ),
        _ => unreachable!("vertex ids run from 1 to 6"),
    }
}

/// The reference modules, indexed like the group.
pub fn modules(ring: &CohRing) -> Result<Vec<GradedModule>> {
    let group = ring.group();
    let num = numbering(group)?;
    group
        .elements()
        .map(|w| {
            let (degrees, s1, s2) = module_data(num.id(w));
            GradedModule::from_generators(ring, degrees, vec![s1, s2])
        })
        .collect()
}

/// The sixteen maps `f: V_from → V_to` as `(from, to, f)` in classical
/// numbering.
pub fn arrow_maps() -> Vec<(usize, usize, QMatrix)> {
    let col = || m(&[&[0], &[1]]);
    let row = || m(&[&[1, 0]]);
    let emb_a = || m(&[&[0, 0], &[1, 0], &[-1, 0], &[0, 1]]);
    let emb_b = || m(&[&[0, 0], &[0, 0], &[1, 0], &[0, 1]]);
    let proj_a = || m(&[&[1, 0, 0, 0], &[0, 0, 1, 0]]);
    let proj_b = || m(&[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
    vec![
        (6, 4, col()),
        (6, 5, col()),
        (4, 6, row()),
        (5, 6, row()),
        (4, 2, emb_a()),
        (4, 3, emb_b()),
        (5, 2, emb_b()),
        (5, 3, emb_a()),
        (2, 4, proj_a()),
        (3, 4, proj_b()),
        (2, 5, proj_b()),
        (3, 5, proj_a()),
        (
            2,
            1,
            m(&[
                &[0, 0, 0, 0],
                &[1, 0, 0, 0],
                &[0, 0, 0, 0],
                &[0, 1, 0, 0],
                &[0, 1, 1, 0],
                &[0, 0, 0, 1],
            ]),
        ),
        (
            3,
            1,
            m(&[
                &[0, 0, 0, 0],
                &[0, 0, 0, 0],
                &[1, 0, 0, 0],
                &[0, 1, 1, 0],
                &[0, 1, 0, 0],
                &[0, 0, 0, 1],
            ]),
        ),
        (
            1,
            2,
            m(&[
                &[1, 0, 0, 0, 0, 0],
                &[0, 0, 1, 0, 0, 0],
                &[0, 1, 0, 0, 0, 0],
                &[0, 0, 0, 1, 0, 0],
            ]),
        ),
        (
            1,
            3,
            m(&[
                &[1, 0, 0, 0, 0, 0],
                &[0, 1, 0, 0, 0, 0],
                &[0, 0, 1, 0, 0, 0],
                &[0, 0, 0, 0, 1, 0],
            ]),
        ),
    ]
}

/// `λ` per arrow such that the reference map, carried into the computed
/// modules by degree-0 isomorphisms, equals `λ·A`.
pub fn arrow_scales(ring: &CohRing, family: &ModuleFamily, q: &Quiver) -> Result<BTreeMap<Arrow, Rational>> {
    let group = ring.group();
    let num = numbering(group)?;
    let reference = modules(ring)?;
    let isos = group
        .elements()
        .map(|w| {
            let maps = hom_degree0(ring, &reference[w.0], family.module(w));
            match maps.as_slice() {
                [g] => {
                    let inv = g
                        .inverse()
                        .ok_or_else(|| Error::Internal(format!("V[{}] comparison map is singular", group.name(w))))?;
                    Ok((g.clone(), inv))
                }
                _ => Err(Error::Internal(format!(
                    "reference and computed V[{}] are not uniquely isomorphic",
                    group.name(w)
                ))),
            }
        })
        .collect::<Result<Vec<_>>>()?;

    let mut scales = BTreeMap::new();
    for (from, to, f) in arrow_maps() {
        let (y, w) = (lookup(&num, from)?, lookup(&num, to)?);
        let [a] = q.maps(y, w) else {
            return Err(Error::Internal(format!("expected one arrow ({from}{to})")));
        };
        let transported = &(&isos[w.0].0 * &f) * &isos[y.0].1;
        let (p, c, x) = a
            .nonzero_entries()
            .next()
            .ok_or_else(|| Error::Internal("zero arrow map".into()))?;
        let lambda = &transported[(p, c)] / x;
        if lambda.is_zero() || transported != a.scale(&lambda) {
            return Err(Error::Internal(format!(
                "reference map ({from}{to}) is not a multiple of the computed arrow"
            )));
        }
        scales.insert(
            Arrow {
                source: y,
                target: w,
                index: 0,
            },
            lambda,
        );
    }
    Ok(scales)
}

fn lookup(num: &Numbering, id: usize) -> Result<Elem> {
    num.lookup(id).ok_or_else(|| Error::Internal(format!("no vertex {id}")))
}

/// Relators re-expressed in the reference arrow normalization.
pub fn normalize(ring: &CohRing, family: &ModuleFamily, q: &Quiver, rels: &Relators) -> Result<Relators> {
    let scales = arrow_scales(ring, family, q)?;
    Ok(rescale_arrows(q, rels, |a| scales[&a].clone()))
}

pub fn reference_relators(q: &Quiver, group: &WeylGroup) -> Result<Vec<PathCombo>> {
    parse_relators(q, &numbering(group)?, RELATORS)
}
