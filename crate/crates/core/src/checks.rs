//! The invariant battery: every property of the pipeline that can be checked
//! exhaustively (or, for random families, reproducibly from a seed).

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactalg::{QMatrix, QVector};
use crate::homspace::{hom_basis_with, hom_dimensions, Constraints};
use crate::icmod::{
    from_quiver_rep, random_rep, rep_satisfies_relations, total_cohomology, Duality, ICModule, RepKind,
};
use crate::kl::KlTable;
use crate::pipeline::Pipeline;
use crate::quiver::{pm_one_report, verify_relator_space, PathCombo};
use crate::rootsystem::Elem;
use crate::schubert::CohClass;
use crate::soergel::{build_all, hom_degree0, BuildMode};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Ring,
    Modules,
    Homs,
    Quiver,
    Icmod,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "ring" => Suite::Ring,
            "modules" => Suite::Modules,
            "homs" => Suite::Homs,
            "quiver" => Suite::Quiver,
            "icmod" => Suite::Icmod,
            "all" => Suite::All,
            _ => {
                return Err(Error::InvalidType(format!(
                    "unknown suite `{s}` (ring, modules, homs, quiver, icmod, all)"
                )))
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Not applicable to this root system; the detail says why.
    Skip,
}

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &'static str, ok: bool, detail: impl Into<String>) -> Self {
        CheckOutcome {
            name,
            status: if ok { Status::Pass } else { Status::Fail },
            detail: detail.into(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

fn pairs(p: &Pipeline) -> impl Iterator<Item = (Elem, Elem)> + '_ {
    p.group()
        .elements()
        .flat_map(move |y| p.group().elements().map(move |w| (y, w)))
}

pub fn run_suite(p: &Pipeline, suite: Suite, seed: u64) -> Vec<CheckOutcome> {
    let kl = KlTable::compute(p.group());
    let mut out = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Ring {
        out.push(ring_axioms(p));
        out.push(poincare_pairing(p));
    }
    if all || suite == Suite::Modules {
        out.push(module_axioms(p));
        out.push(module_shape(p));
        out.push(ih_matches_kl(p, &kl));
        out.push(shortcut_matches_full(p));
    }
    if all || suite == Suite::Homs {
        out.push(hom0_is_delta(p));
        out.push(arrow_symmetry(p));
        out.push(parity_vanishing(p, 2));
        out.push(arrows_match_mu(p, &kl));
        out.push(generators_suffice(p));
    }
    if all || suite == Suite::Quiver {
        out.push(relators_cover_d_squared(p));
        out.push(relators_match_hom2(p));
        out.push(arrows_change_parity(p));
        out.push(pm_one(p));
    }
    if all || suite == Suite::Icmod {
        out.push(simples_compute_ih(p));
        out.push(relations_iff_chain_complex(p, seed, 200));
        out.push(verdier_involution(p, seed, 50));
    }
    out
}

/// Associativity, commutativity and the unit, over all triples for small
/// groups.
pub fn ring_axioms(p: &Pipeline) -> CheckOutcome {
    let ring = &p.ring;
    let g = p.group();
    let elems: Vec<Elem> = g.elements().collect();
    for &u in &elems {
        if ring.product(Elem::IDENTITY, u) != &CohClass::schubert(u) {
            return CheckOutcome::new("ring.axioms", false, format!("σ_e·σ[{}] ≠ σ[{}]", g.name(u), g.name(u)));
        }
        for &v in &elems {
            if ring.product(u, v) != ring.product(v, u) {
                return CheckOutcome::new(
                    "ring.axioms",
                    false,
                    format!("σ[{}], σ[{}] do not commute", g.name(u), g.name(v)),
                );
            }
        }
    }
    let triples = if elems.len() <= 24 { elems.len() } else { 8 };
    for &u in &elems[..triples] {
        for &v in &elems {
            let uv = ring.product(u, v);
            for &w in &elems {
                let left = ring.multiply(uv, &CohClass::schubert(w));
                let right = ring.multiply(&CohClass::schubert(u), ring.product(v, w));
                if left != right {
                    return CheckOutcome::new(
                        "ring.axioms",
                        false,
                        format!("(σ[{}]σ[{}])σ[{}] is not associative", g.name(u), g.name(v), g.name(w)),
                    );
                }
            }
        }
    }
    CheckOutcome::new("ring.axioms", true, format!("{} classes", elems.len()))
}

/// The top coefficient of `σ_u σ_v` is `δ(v, w₀u)`.
pub fn poincare_pairing(p: &Pipeline) -> CheckOutcome {
    let g = p.group();
    let w0 = g.longest();
    for u in g.elements() {
        let dual = g.multiply(w0, u);
        for v in g.elements() {
            let c = p.ring.product(u, v).coeff(w0);
            let expect = if v == dual { 1 } else { 0 };
            if c != crate::exactalg::rat(expect) {
                return CheckOutcome::new(
                    "ring.poincare_pairing",
                    false,
                    format!("σ[{}]σ[{}] has top coefficient {c}", g.name(u), g.name(v)),
                );
            }
        }
    }
    CheckOutcome::new(
        "ring.poincare_pairing",
        true,
        "top coefficients form the w₀-permutation",
    )
}

pub fn module_axioms(p: &Pipeline) -> CheckOutcome {
    for w in p.group().elements() {
        if let Err(e) = p.family.module(w).check(&p.ring) {
            return CheckOutcome::new("modules.axioms", false, format!("V[{}]: {e}", p.group().name(w)));
        }
    }
    CheckOutcome::new("modules.axioms", true, "identity, homogeneity, products per the table")
}

/// Symmetric graded dimensions, parity `l(w)`, degrees within `±l(w)`.
pub fn module_shape(p: &Pipeline) -> CheckOutcome {
    let g = p.group();
    for w in g.elements() {
        let l = g.length(w) as i32;
        let dims = p.family.module(w).graded_dims();
        for (&d, &c) in &dims {
            if dims.get(&-d) != Some(&c) || d.abs() > l || (d - l).rem_euclid(2) != 0 {
                return CheckOutcome::new(
                    "modules.shape",
                    false,
                    format!("V[{}] has {c} vectors in degree {d}", g.name(w)),
                );
            }
        }
    }
    CheckOutcome::new("modules.shape", true, "symmetric, correct parity and range")
}

/// Graded dimensions of `V_w` against `Σ_{y≤w} q^{l(y)} P_{y,w}`.
pub fn ih_matches_kl(p: &Pipeline, kl: &KlTable) -> CheckOutcome {
    let g = p.group();
    for w in g.elements() {
        let ours: Vec<i64> = p
            .family
            .module(w)
            .poincare(g.length(w))
            .iter()
            .map(|&c| c as i64)
            .collect();
        let expect = kl.ih_poincare(w);
        if ours != expect {
            return CheckOutcome::new(
                "modules.kl_poincare",
                false,
                format!("V[{}]: {ours:?} vs KL {expect:?}", g.name(w)),
            );
        }
    }
    CheckOutcome::new("modules.kl_poincare", true, format!("{} elements", g.len()))
}

/// Both constructions give isomorphic modules. Word modules can carry
/// shifted summands that degree-0 maps cannot split off; the comparison is
/// skipped when the full construction refuses for that reason.
pub fn shortcut_matches_full(p: &Pipeline) -> CheckOutcome {
    const NAME: &str = "modules.shortcut_vs_full";
    let full = match build_all(&p.ring, BuildMode::FullWord) {
        Ok(f) => f,
        Err(Error::Internal(why)) => {
            return CheckOutcome {
                name: NAME,
                status: Status::Skip,
                detail: format!("word-module construction not applicable: {why}"),
            }
        }
        Err(e) => return CheckOutcome::new(NAME, false, e.to_string()),
    };
    let g = p.group();
    for w in g.elements() {
        let (a, b) = (p.family.module(w), full.module(w));
        let iso = hom_degree0(&p.ring, a, b);
        let ok = a.graded_dims() == b.graded_dims() && iso.len() == 1 && iso[0].inverse().is_some();
        if !ok {
            return CheckOutcome::new(NAME, false, format!("V[{}] differs between constructions", g.name(w)));
        }
    }
    CheckOutcome::new(NAME, true, format!("{} modules isomorphic in degree 0", g.len()))
}

pub fn hom0_is_delta(p: &Pipeline) -> CheckOutcome {
    let dims = hom_dimensions(&p.ring, &p.family, 0);
    for (y, w) in pairs(p) {
        if dims[y.0][w.0] != usize::from(y == w) {
            return CheckOutcome::new(
                "homs.degree0_delta",
                false,
                format!(
                    "dim Hom⁰(V[{}], V[{}]) = {}",
                    p.group().name(y),
                    p.group().name(w),
                    dims[y.0][w.0]
                ),
            );
        }
    }
    CheckOutcome::new("homs.degree0_delta", true, "Hom⁰ is the identity or zero")
}

pub fn arrow_symmetry(p: &Pipeline) -> CheckOutcome {
    for (y, w) in pairs(p) {
        if p.quiver.arrow_count(y, w) != p.quiver.arrow_count(w, y) {
            return CheckOutcome::new(
                "homs.arrow_symmetry",
                false,
                format!("{} → {} is not symmetric", p.group().name(y), p.group().name(w)),
            );
        }
    }
    CheckOutcome::new(
        "homs.arrow_symmetry",
        true,
        format!("{} arrows", p.quiver.arrows().len()),
    )
}

/// `Hom^d(V_y, V_w) = 0` unless `d ≡ l(w) - l(y) (mod 2)`.
pub fn parity_vanishing(p: &Pipeline, max_degree: i32) -> CheckOutcome {
    let g = p.group();
    for d in 0..=max_degree {
        let dims = hom_dimensions(&p.ring, &p.family, d);
        for (y, w) in pairs(p) {
            let diff = g.length(w) as i32 - g.length(y) as i32;
            if (diff - d).rem_euclid(2) != 0 && dims[y.0][w.0] != 0 {
                return CheckOutcome::new(
                    "homs.parity",
                    false,
                    format!("Hom^{d}(V[{}], V[{}]) ≠ 0", g.name(y), g.name(w)),
                );
            }
        }
    }
    CheckOutcome::new("homs.parity", true, format!("degrees 0..={max_degree}"))
}

pub fn arrows_match_mu(p: &Pipeline, kl: &KlTable) -> CheckOutcome {
    for (y, w) in pairs(p) {
        let mu = kl.edge_mu(y, w);
        if p.quiver.arrow_count(y, w) as i64 != mu {
            return CheckOutcome::new(
                "homs.mu_oracle",
                false,
                format!(
                    "{} → {}: {} arrows, μ = {mu}",
                    p.group().name(y),
                    p.group().name(w),
                    p.quiver.arrow_count(y, w)
                ),
            );
        }
    }
    CheckOutcome::new(
        "homs.mu_oracle",
        true,
        format!("{} ordered pairs", p.group().len().pow(2)),
    )
}

/// Imposing every class gives the same degree-one bases as the generators.
pub fn generators_suffice(p: &Pipeline) -> CheckOutcome {
    for (y, w) in pairs(p) {
        let a = hom_basis_with(&p.ring, &p.family, y, w, 1, Constraints::AllClasses);
        if a.basis != p.quiver.maps(y, w) {
            return CheckOutcome::new(
                "homs.generators_suffice",
                false,
                format!("{} → {}", p.group().name(y), p.group().name(w)),
            );
        }
    }
    CheckOutcome::new("homs.generators_suffice", true, "all-class constraints agree")
}

/// Every entry of `d̃²` lies in the relator span (and spans it).
pub fn relators_cover_d_squared(p: &Pipeline) -> CheckOutcome {
    let q = &p.quiver;
    let mut entries = Vec::new();
    for (y, w) in pairs(p) {
        let paths = q.paths(y, w);
        if paths.is_empty() {
            continue;
        }
        let composites: Vec<QMatrix> = paths.iter().map(|x| q.path_map(x)).collect();
        for r in 0..composites[0].rows() {
            for c in 0..composites[0].cols() {
                let row: QVector = composites.iter().map(|m| m[(r, c)].clone()).collect();
                let mut combo = PathCombo::new();
                for (path, x) in paths.iter().zip(row) {
                    combo.add_term(*path, x);
                }
                if !combo.is_empty() {
                    entries.push(combo);
                }
            }
        }
    }
    match verify_relator_space(q, &p.relators, &entries) {
        Ok(ok) => CheckOutcome::new(
            "quiver.d_squared_span",
            ok,
            format!(
                "{} nonzero entries of d̃², {} relators",
                entries.len(),
                p.relators.total()
            ),
        ),
        Err(e) => CheckOutcome::new("quiver.d_squared_span", false, e.to_string()),
    }
}

/// `Σ dim R_{y,w} = Σ dim Hom²(V_y, V_w)`, with the per-pair comparison in
/// both orientations recorded in the detail.
pub fn relators_match_hom2(p: &Pipeline) -> CheckOutcome {
    let h2 = hom_dimensions(&p.ring, &p.family, 2);
    let total_h2: usize = h2.iter().flatten().sum();
    let total_r = p.relators.total();
    let same = pairs(p).all(|(y, w)| p.relators.block(y, w).len() == h2[y.0][w.0]);
    let swapped = pairs(p).all(|(y, w)| p.relators.block(y, w).len() == h2[w.0][y.0]);
    CheckOutcome::new(
        "quiver.relators_vs_hom2",
        total_r == total_h2,
        format!(
            "Σ dim R = {total_r}, Σ dim Hom² = {total_h2}; per pair R(y,w) = Hom²(y,w): {same}, = Hom²(w,y): {swapped}"
        ),
    )
}

pub fn arrows_change_parity(p: &Pipeline) -> CheckOutcome {
    let g = p.group();
    let bad = p
        .quiver
        .arrows()
        .iter()
        .find(|a| (g.length(a.source) + g.length(a.target)).is_multiple_of(2));
    CheckOutcome::new(
        "quiver.homogeneous",
        bad.is_none(),
        "arrows join lengths of opposite parity, so relators are homogeneous",
    )
}

/// Observational: never fails.
pub fn pm_one(p: &Pipeline) -> CheckOutcome {
    let r = pm_one_report(&p.quiver, &p.relators);
    let detail = if r.all_pm_one {
        format!("all {} relator coefficients are ±1", r.relators)
    } else {
        format!(
            "coefficients outside ±1 in {} blocks: {}",
            r.offending_pairs.len(),
            r.other_coefficients.join(", ")
        )
    };
    CheckOutcome {
        name: "quiver.pm_one",
        status: Status::Pass,
        detail,
    }
}

pub fn simples_compute_ih(p: &Pipeline) -> CheckOutcome {
    for w in p.group().elements() {
        let m = ICModule::simple(&p.quiver, w);
        let h = match total_cohomology(&p.family, &p.quiver, &m) {
            Ok(h) => h,
            Err(e) => return CheckOutcome::new("icmod.simples", false, e.to_string()),
        };
        let h: std::collections::BTreeMap<i32, usize> = h.into_iter().filter(|&(_, d)| d > 0).collect();
        if h != p.family.module(w).graded_dims() {
            return CheckOutcome::new("icmod.simples", false, format!("simple at {}", p.group().name(w)));
        }
    }
    CheckOutcome::new("icmod.simples", true, "total cohomology of each simple is V_w")
}

/// Mixed random representations: semisimple, one or two nonzero arrows,
/// and generic. Relations hold iff the IC-module is a chain complex.
pub fn relations_iff_chain_complex(p: &Pipeline, seed: u64, count: usize) -> CheckOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kinds = [RepKind::Semisimple, RepKind::NearSemisimple, RepKind::Generic];
    let (mut valid, mut invalid, mut disagree) = (0, 0, 0);
    for i in 0..count {
        let rep = random_rep(&p.quiver, kinds[i % 3], 2, &mut rng);
        let rel = rep_satisfies_relations(&p.quiver, &p.relators, &rep);
        let cc = match from_quiver_rep(&p.quiver, &rep) {
            Ok(m) => m.validate(&p.quiver),
            Err(e) => return CheckOutcome::new("icmod.relations_iff_d2", false, e.to_string()),
        };
        if rel != cc {
            disagree += 1;
        }
        if cc {
            valid += 1;
        } else {
            invalid += 1;
        }
    }
    CheckOutcome::new(
        "icmod.relations_iff_d2",
        disagree == 0 && valid > 0 && invalid > 0,
        format!("{count} representations: {valid} satisfy d² = 0, {invalid} do not, {disagree} disagreements"),
    )
}

pub fn verdier_involution(p: &Pipeline, seed: u64, count: usize) -> CheckOutcome {
    let duality = match Duality::build(&p.ring, &p.family, &p.quiver) {
        Ok(d) => d,
        Err(e) => return CheckOutcome::new("icmod.verdier", false, e.to_string()),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    for i in 0..count {
        let kind = if i % 2 == 0 {
            RepKind::Generic
        } else {
            RepKind::NearSemisimple
        };
        let m = match from_quiver_rep(&p.quiver, &random_rep(&p.quiver, kind, 2, &mut rng)) {
            Ok(m) => m,
            Err(e) => return CheckOutcome::new("icmod.verdier", false, e.to_string()),
        };
        let ok = duality
            .dual(&p.quiver, &m)
            .and_then(|d| Ok((duality.dual(&p.quiver, &d)?, d.validate(&p.quiver))))
            .map(|(dd, dvalid)| dd == m && dvalid == m.validate(&p.quiver));
        match ok {
            Ok(true) => {}
            Ok(false) => return CheckOutcome::new("icmod.verdier", false, format!("module #{i}: D∘D ≠ Id")),
            Err(e) => return CheckOutcome::new("icmod.verdier", false, e.to_string()),
        }
    }
    CheckOutcome::new("icmod.verdier", true, format!("D∘D = Id on {count} random modules"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_pass_for_b2() {
        let p = Pipeline::build("B2".parse().unwrap(), BuildMode::Shortcut).unwrap();
        for c in run_suite(&p, Suite::All, 1) {
            assert_eq!(c.status, Status::Pass, "{c}");
        }
    }

    #[test]
    fn suite_names() {
        assert_eq!("quiver".parse::<Suite>().unwrap(), Suite::Quiver);
        assert!("nope".parse::<Suite>().is_err());
    }
}
