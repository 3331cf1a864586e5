//! The acceptance criteria, one line each. Runs without the libtest harness
//! so the verdicts are printed even when everything passes.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use icq::checks::{
    arrow_symmetry, arrows_match_mu, hom0_is_delta, ih_matches_kl, parity_vanishing, relations_iff_chain_complex,
    relators_match_hom2, shortcut_matches_full, verdier_involution, CheckOutcome, Status,
};
use icq::classical;
use icq::exactalg::rat;
use icq::homspace::hom_dimensions;
use icq::kl::KlTable;
use icq::pipeline::Pipeline;
use icq::quiver::{parse_relators, verify_relator_space};
use icq::rootsystem::{CartanType, Elem};
use icq::schubert::CohClass;
use icq::soergel::BuildMode;

type Verdict = Result<String, String>;

fn ensure(ok: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(why())
    }
}

fn pipeline(ty: &str) -> Pipeline {
    let ct: CartanType = ty.parse().expect("known type");
    Pipeline::build(ct, BuildMode::Shortcut).expect("pipeline builds")
}

fn strict(o: CheckOutcome) -> Result<String, String> {
    match o.status {
        Status::Pass => Ok(o.detail),
        _ => Err(o.to_string()),
    }
}

fn icq(cache: &Path, args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_icq"))
        .args(args)
        .env("ICQ_CACHE_DIR", cache)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "icq {} failed: {}",
            args.join(" "),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(out.stdout)
}

fn criterion_1() -> Verdict {
    let t = Instant::now();
    let p = pipeline("A2");
    let q = &p.quiver;
    ensure(q.vertex_count() == 6, || format!("{} vertices", q.vertex_count()))?;
    ensure(q.arrows().len() == 16, || format!("{} arrows", q.arrows().len()))?;
    ensure(p.relators.total() == 22, || format!("{} relators", p.relators.total()))?;
    let normalized = classical::normalize(&p.ring, &p.family, q, &p.relators).map_err(|e| e.to_string())?;
    let reference = classical::reference_relators(q, p.group()).map_err(|e| e.to_string())?;
    ensure(
        matches!(verify_relator_space(q, &normalized, &reference), Ok(true)),
        || "computed relators do not span the reference list".into(),
    )?;
    let elapsed = t.elapsed();

    // The same comparison through the command-line text export.
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let text = icq(
        dir.path(),
        &["quiver", "--type", "A2", "--format", "text", "--appendix-numbering"],
    )?;
    let text = String::from_utf8(text).map_err(|e| e.to_string())?;
    let listed = text.split_once("relators:\n").ok_or("no relator section")?.1;
    let num = classical::numbering(p.group()).map_err(|e| e.to_string())?;
    let exported = parse_relators(q, &num, listed).map_err(|e| e.to_string())?;
    ensure(exported.len() == 22, || {
        format!("export lists {} relators", exported.len())
    })?;
    ensure(
        matches!(verify_relator_space(q, &normalized, &exported), Ok(true)),
        || "exported relators do not span the computed space".into(),
    )?;
    ensure(text.starts_with("# A2: 6 vertices, 16 arrows, 22 relators\n"), || {
        "unexpected export header".into()
    })?;
    Ok(format!(
        "6 vertices, 16 arrows, 22 relators; span equals the reference list ({:.0?})",
        elapsed
    ))
}

fn criterion_2() -> Verdict {
    let p = pipeline("A2");
    let g = p.group();
    let class = |terms: &[&str]| {
        let mut c = CohClass::zero();
        for t in terms {
            c.add_term(g.parse(t).unwrap(), rat(1));
        }
        c
    };
    // Rows e, s1, s2, s1s2, s2s1, w0 against columns σ_1, σ_2.
    let expected: [(&str, [&[&str]; 2]); 6] = [
        ("e", [&["1"], &["2"]]),
        ("1", [&["2.1"], &["2.1", "1.2"]]),
        ("2", [&["2.1", "1.2"], &["1.2"]]),
        ("1.2", [&["1.2.1"], &[]]),
        ("2.1", [&[], &["1.2.1"]]),
        ("1.2.1", [&[], &[]]),
    ];
    let gens = g.generators();
    for (row, cols) in expected {
        let u = g.parse(row).unwrap();
        for (i, want) in cols.iter().enumerate() {
            let got = p.ring.product(u, gens[i]);
            ensure(*got == class(want), || {
                format!("σ[{row}]·σ[{}] = {}", i + 1, got.display(g))
            })?;
        }
    }
    let names = |i: usize| -> Vec<String> { p.ring.invariant_basis(i).iter().map(|&w| g.name(w)).collect() };
    ensure(names(0) == ["e", "2", "1.2"], || format!("C^s1 basis {:?}", names(0)))?;
    ensure(names(1) == ["e", "1", "2.1"], || format!("C^s2 basis {:?}", names(1)))?;
    Ok("generator columns and both invariant subalgebra bases match".into())
}

fn criterion_3() -> Verdict {
    let p = pipeline("A2");
    let g = p.group();
    let expected: [(&str, &[(i32, usize)]); 6] = [
        ("e", &[(0, 1)]),
        ("1", &[(-1, 1), (1, 1)]),
        ("2", &[(-1, 1), (1, 1)]),
        ("1.2", &[(-2, 1), (0, 2), (2, 1)]),
        ("2.1", &[(-2, 1), (0, 2), (2, 1)]),
        ("1.2.1", &[(-3, 1), (-1, 2), (1, 2), (3, 1)]),
    ];
    for (name, dims) in expected {
        let got = p.family.module(g.parse(name).unwrap()).graded_dims();
        let want: BTreeMap<i32, usize> = dims.iter().copied().collect();
        ensure(got == want, || format!("V[{name}] has graded dims {got:?}"))?;
    }
    let h1 = hom_dimensions(&p.ring, &p.family, 1);
    let mut incident = 0;
    for y in g.elements() {
        for w in g.elements() {
            let (ly, lw) = (g.length(y), g.length(w));
            let adjacent = (lw == ly + 1 && g.bruhat_leq(y, w)) || (ly == lw + 1 && g.bruhat_leq(w, y));
            incident += usize::from(adjacent);
            ensure(h1[y.0][w.0] == usize::from(adjacent), || {
                format!("dim Hom¹(V[{}], V[{}]) = {}", g.name(y), g.name(w), h1[y.0][w.0])
            })?;
        }
    }
    ensure(incident == 16, || format!("{incident} incident pairs"))?;
    Ok("graded dims (1),(1,1),(1,1),(1,2,1),(1,2,1),(1,2,2,1); Hom¹ = 1 on the 16 incident pairs only".into())
}

fn criterion_4() -> Verdict {
    let p = pipeline("A1");
    let q = &p.quiver;
    let (e, s) = (Elem::IDENTITY, p.group().generator(0));
    ensure(q.vertex_count() == 2, || format!("{} vertices", q.vertex_count()))?;
    ensure(q.arrows().len() == 2, || format!("{} arrows", q.arrows().len()))?;
    ensure(q.arrow_count(e, s) == 1 && q.arrow_count(s, e) == 1, || {
        "arrows are not a ↔ b".into()
    })?;
    ensure(p.relators.total() == 1, || format!("{} relators", p.relators.total()))?;
    let rel = p.relators.block(s, s);
    ensure(rel.len() == 1, || "the relator is not at the open-cell vertex".into())?;
    let terms: Vec<_> = rel[0].terms().collect();
    ensure(terms.len() == 1 && terms[0].0.via == e, || {
        "the relator is not the loop through the point".into()
    })?;
    Ok("2 vertices, 2 arrows, single relator b∘a = 0 at the open cell".into())
}

fn criterion_5() -> Verdict {
    let mut report = Vec::new();
    for ty in ["A1", "A2", "B2", "A3", "G2"] {
        let t = Instant::now();
        let p = pipeline(ty);
        let kl = KlTable::compute(p.group());
        strict(arrows_match_mu(&p, &kl)).map_err(|e| format!("{ty}: {e}"))?;
        strict(ih_matches_kl(&p, &kl)).map_err(|e| format!("{ty}: {e}"))?;
        report.push(format!(
            "{ty} ({} arrows, {:.1?})",
            p.quiver.arrows().len(),
            t.elapsed()
        ));
    }
    Ok(format!(
        "arrows = μ and graded dims = KL Poincaré for {}",
        report.join(", ")
    ))
}

fn criterion_6() -> Verdict {
    strict(relations_iff_chain_complex(&pipeline("A2"), 2024, 200))
}

fn criterion_7() -> Verdict {
    let p = pipeline("A2");
    let mut parts = vec![
        strict(hom0_is_delta(&p))?,
        strict(arrow_symmetry(&p))?,
        format!("parity {}", strict(parity_vanishing(&p, 3))?),
    ];
    ensure(p.relators.total() == 22, || format!("Σ dim R = {}", p.relators.total()))?;
    strict(relators_match_hom2(&p))?;
    parts.push("Σ dim R = Σ dim Hom² = 22".into());
    parts.push(strict(verdier_involution(&p, 7, 50))?);
    parts.push(format!("A2 shortcut = full: {}", strict(shortcut_matches_full(&p))?));
    parts.push(format!(
        "B2 shortcut = full: {}",
        strict(shortcut_matches_full(&pipeline("B2")))?
    ));
    Ok(parts.join("; "))
}

fn criterion_8() -> Verdict {
    let args = ["quiver", "--type", "A3", "--format", "json"];
    let (c1, c2) = (
        tempfile::tempdir().map_err(|e| e.to_string())?,
        tempfile::tempdir().map_err(|e| e.to_string())?,
    );
    let cold1 = icq(c1.path(), &args)?;
    let cold2 = icq(c2.path(), &args)?;
    let warm = icq(c1.path(), &args)?;
    ensure(c1.path().join("A3-shortcut.json").exists(), || {
        "cold run left no cache entry".into()
    })?;
    ensure(cold1 == cold2, || "two cold runs differ".into())?;
    ensure(cold1 == warm, || "warm run differs from cold".into())?;
    let single = Command::new(env!("CARGO_BIN_EXE_icq"))
        .args(args)
        .args(["--no-cache", "--jobs", "1"])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(single.stdout == cold1, || "single-threaded run differs".into())?;
    Ok(format!(
        "A3 JSON export ({} bytes) identical cold, cold, warm and single-threaded",
        cold1.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Verdict); 8] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
    ];
    let mut failed = 0;
    for (n, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS criterion {n}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {n}: {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
