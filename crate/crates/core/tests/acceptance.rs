//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any FAIL.
//! Also regenerates `DISCREPANCIES.md` at the workspace root.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use drinfeld_core::bialgebra::{
    canonical_delta, find_discrepancies, render_discrepancies, subbialgebra_report, verify_delta_embedding, Injection,
    SubSpan, ERRATA,
};
use drinfeld_core::double::{verify_closure, verify_pairing};
use drinfeld_core::reps::{casimir_check, CasimirElement};
use drinfeld_core::*;
use rayon::prelude::*;

type Outcome = std::result::Result<String, String>;

const JACOBI_GRID: &[(Series, usize)] = &[
    (Series::A, 1),
    (Series::A, 2),
    (Series::A, 3),
    (Series::A, 4),
    (Series::B, 1),
    (Series::B, 2),
    (Series::B, 3),
    (Series::C, 1),
    (Series::C, 2),
    (Series::C, 3),
    (Series::D, 2),
    (Series::D, 3),
    (Series::D, 4),
];

const CYBE_GRID: &[(Series, usize)] =
    &[(Series::A, 1), (Series::A, 2), (Series::B, 1), (Series::B, 2), (Series::C, 1), (Series::C, 2), (Series::D, 2)];

fn canonical(s: Series, n: usize) -> ManinTriple {
    split(&build_series(s, n).unwrap(), &SplittingSpec::canonical(s, n)).unwrap()
}

fn expect(report: &Report, context: &str) -> std::result::Result<(), String> {
    if report.passed() {
        Ok(())
    } else {
        Err(format!("{context}: {}", report.summary_line()))
    }
}

fn expect_fail(report: &Report, context: &str) -> std::result::Result<(), String> {
    if report.passed() {
        Err(format!("{context}: unexpectedly passed"))
    } else {
        Ok(())
    }
}

/// Runs `f` over the grid in parallel, collecting every failure.
fn over_grid(grid: &[(Series, usize)], f: impl Fn(Series, usize) -> std::result::Result<(), String> + Sync) -> std::result::Result<(), String> {
    let errors: Vec<String> = grid.par_iter().filter_map(|&(s, n)| f(s, n).err()).collect();
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors.join("; "))
    }
}

fn lie_axioms() -> Outcome {
    let start = Instant::now();
    over_grid(JACOBI_GRID, |s, n| expect(&verify_jacobi(build_series(s, n).unwrap().table()), &format!("{s}{n}")))?;
    let t = start.elapsed();
    if t > Duration::from_secs(60) {
        return Err(format!("grid took {t:.1?}"));
    }
    Ok(format!("13 instances in {t:.2?}"))
}

fn manin_triples() -> Outcome {
    over_grid(JACOBI_GRID, |s, n| {
        let t = canonical(s, n);
        for r in [
            verify_closure(&t),
            verify_pairing(&t),
            verify_compatibility(&t),
            verify_reconstruction(&t),
            verify_self_duality(&t),
            verify_form_invariance(&t),
        ] {
            expect(&r, &format!("{s}{n}"))?;
        }
        Ok(())
    })?;
    Ok("closure, pairing, compatibility, reconstruction, self-duality, form invariance".into())
}

fn cross_derivation() -> Outcome {
    over_grid(JACOBI_GRID, |s, n| {
        let (alg, derived) = canonical_delta(s, n).map_err(|e| e.to_string())?;
        expect(&verify_delta_agreement(&derived, &cocommutator_explicit(&alg, Transcription::Corrected)), &format!("{s}{n}"))
    })?;
    let found = find_discrepancies(JACOBI_GRID).map_err(|e| e.to_string())?;
    if let Some(d) = found.iter().find(|d| d.erratum.is_none()) {
        return Err(format!("unexplained difference at {}{} {}", d.series, d.rank, d.generator));
    }
    let q_diag = found.iter().any(|d| d.generator.kind == Kind::Q && d.generator.i == d.generator.j);
    if !q_diag {
        return Err("the diagonal Q erratum was not observed".into());
    }
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../DISCREPANCIES.md");
    std::fs::write(&path, render_discrepancies(JACOBI_GRID, &found)).map_err(|e| e.to_string())?;
    let used: std::collections::BTreeSet<usize> = found.iter().filter_map(|d| d.erratum).collect();
    Ok(format!("{} printed differences, all explained by {}/{} errata", found.len(), used.len(), ERRATA.len()))
}

fn bialgebra_axioms() -> Outcome {
    over_grid(JACOBI_GRID, |s, n| {
        let t = canonical(s, n);
        let alg = t.double();
        let d = cocommutator_from_structure(&t);
        let r = build_r_matrix(&t);
        let ctx = format!("{s}{n}");
        expect(&verify_cocycle(alg.table(), &d), &ctx)?;
        expect(&verify_cojacobi(&d), &ctx)?;
        expect(&verify_coboundary(alg.table(), &d, &r), &ctx)?;
        for span in [SubSpan::Plus, SubSpan::Minus] {
            let sub = span.elements(&t).map_err(|e| e.to_string())?;
            expect(&subbialgebra_report(alg, &d, &sub).map_err(|e| e.to_string())?, &ctx)?;
        }
        // negative controls
        if s == Series::A {
            let sub = SubSpan::SimpleA.elements(&t).map_err(|e| e.to_string())?;
            expect_fail(&subbialgebra_report(alg, &d, &sub).map_err(|e| e.to_string())?, &format!("{ctx} An"))?;
        }
        // D_1 ⊕ t is toral, so the control needs rank ≥ 2
        if s == Series::B && n >= 2 {
            let sub = SubSpan::EvenOrthogonal.elements(&t).map_err(|e| e.to_string())?;
            expect_fail(&subbialgebra_report(alg, &d, &sub).map_err(|e| e.to_string())?, &format!("{ctx} Dn"))?;
        }
        let cob = verify_coboundary(alg.table(), &d, &r.without_twist());
        expect_fail(&cob, &format!("{ctx} r without r_t"))?;
        let basis = alg.basis();
        for v in &cob.violations {
            let k = basis.position(&v.indices[0].parse().unwrap()).unwrap();
            let has_i = d.get(k).terms().any(|((a, b), _)| basis.id(*a).is_central() || basis.id(*b).is_central());
            if !has_i {
                return Err(format!("{ctx}: twist-free coboundary failed on {} without I-terms", v.indices[0]));
            }
        }
        Ok(())
    })?;
    Ok("cocycle, co-Jacobi, coboundary, sub-bialgebra; 3 negative controls fail".into())
}

fn cybe() -> Outcome {
    let mut slowest = Duration::ZERO;
    for &(s, n) in CYBE_GRID {
        let start = Instant::now();
        let t = canonical(s, n);
        let r = build_r_matrix(&t);
        if !bialgebra::cybe_tensor(t.double().table(), &r.nonskew).is_zero() {
            return Err(format!("{s}{n}: nonzero residual"));
        }
        let took = start.elapsed();
        if took > Duration::from_secs(30) {
            return Err(format!("{s}{n} took {took:.1?}"));
        }
        slowest = slowest.max(took);
    }
    Ok(format!("7 instances, slowest {slowest:.2?}"))
}

fn twist() -> Outcome {
    let a = build_series(Series::A, 2).unwrap();
    let r = build_r_matrix(&canonical(Series::A, 2));
    expect(&verify_twist_triviality(&a, &r, TwistMode::Identify), "A2 identify")?;
    for (s, n) in [(Series::B, 1), (Series::B, 2), (Series::C, 1), (Series::C, 2), (Series::D, 2), (Series::D, 3)] {
        let alg = build_series(s, n).unwrap();
        let r = build_r_matrix(&canonical(s, n));
        if r.r_t.is_zero() {
            return Err(format!("{s}{n}: r_t already zero"));
        }
        expect(&verify_twist_triviality(&alg, &r, TwistMode::Zero), &format!("{s}{n} zero"))?;
    }
    Ok("A2 identified twist is ad-invariant; r_t vanishes at I = 0".into())
}

fn chains() -> Outcome {
    for (s, n) in [(Series::A, 2), (Series::B, 1), (Series::C, 1), (Series::D, 2)] {
        let r = verify_chain_embedding(s, n).map_err(|e| e.to_string())?;
        expect(&r, &format!("{s}{n}→{s}{}", n + 1))?;
    }
    Ok("A2→A3, B1→B2, C1→C2, D2→D3".into())
}

fn representations() -> Outcome {
    let fermionic = [(Series::A, 1), (Series::A, 2), (Series::A, 3), (Series::B, 1), (Series::B, 2), (Series::B, 3), (Series::D, 2), (Series::D, 3)];
    over_grid(&fermionic, |s, n| {
        let alg = build_series(s, n).unwrap();
        let rep = fermionic_rep(s, n, None).map_err(|e| e.to_string())?;
        let ctx = format!("{s}{n} fermionic");
        expect(&verify_rep_homomorphism(&rep, &alg), &ctx)?;
        expect(&casimir_check(&rep, &CasimirElement::quadratic(&alg)), &ctx)?;
        expect(&casimir_check(&rep, &CasimirElement::of_double(&canonical(s, n))), &ctx)
    })?;
    over_grid(&[(Series::A, 1), (Series::A, 2), (Series::C, 1), (Series::C, 2)], |s, n| {
        let alg = build_series(s, n).unwrap();
        let rep = bosonic_rep(s, n, 6, None).map_err(|e| e.to_string())?;
        expect(&verify_rep_homomorphism(&rep, &alg), &format!("{s}{n} bosonic"))
    })?;
    let b1 = build_series(Series::B, 1).unwrap();
    let rep = fermionic_rep(Series::B, 1, None).unwrap();
    let c2 = CasimirElement::quadratic(&b1).evaluate(&rep).unwrap();
    if c2 != SparseMatrix::scalar(2, &Scalar::rational(3, 4)) {
        return Err(format!("B1 Casimir is {:?}", c2.triplets()));
    }
    Ok("fermionic exact, bosonic within 1e-12 at cutoff 6, B1 Casimir = 3/4".into())
}

fn mixed_splitting() -> Outcome {
    let t = split(&build_series(Series::D, 2).unwrap(), &SplittingSpec::mixed(vec![(1, 2)], vec![])).unwrap();
    for r in [verify_closure(&t), verify_compatibility(&t), verify_reconstruction(&t), verify_self_duality(&t)] {
        expect(&r, "D2 mixed")?;
    }
    Ok("closure, compatibility, reconstruction, conjugated self-duality".into())
}

fn mutation_sensitivity() -> Outcome {
    let mut caught = Vec::new();
    let mut check = |name: &str, report: Report| -> std::result::Result<(), String> {
        expect_fail(&report, name)?;
        caught.push(name.to_owned());
        Ok(())
    };
    let one = Scalar::one();
    let two = Scalar::from_int(2);

    let a2 = build_series(Series::A, 2).unwrap();
    let (x, y) = (GeneratorId::f(1, 2), GeneratorId::f(2, 3));
    let doubled = a2.bracket_ids(x, y).unwrap().scale(&two);
    check("jacobi", verify_jacobi(a2.with_bracket(x, y, &doubled).unwrap().table()))?;

    let a1 = canonical(Series::A, 1);
    let n = a1.half_dim();
    let mut rt = a1.rotated_table().clone();
    rt.set(0, 1, SparseVec::unit(n));
    check("closure", verify_closure(&a1.with_rotated_table(rt)))?;
    let mut m = a1.pairing().clone();
    m[0][1] = one.clone();
    check("pairing", verify_pairing(&a1.with_pairing(m)))?;
    let mut m = a1.pairing().clone();
    m[0][0] = two.clone();
    check("reconstruction", verify_reconstruction(&a1.with_pairing(m)))?;

    let c2 = canonical(Series::C, 2);
    let (p, q, v) = c2.minus_table().nonzero_pairs().next().map(|(p, q, v)| (p, q, v.clone())).unwrap();
    let (k, c) = v.iter().next().cloned().unwrap();
    let mut minus = c2.minus_table().clone();
    minus.set(p, q, v.add_scaled(&Scalar::from_int(-2), &SparseVec::from_terms([(k, c)])));
    check("compatibility", verify_compatibility(&c2.with_minus_table(minus)))?;

    check("selfdual", verify_self_duality(&canonical(Series::B, 2).rescale_minus(&two).unwrap()))?;

    let d2 = canonical(Series::D, 2);
    let mut m = d2.pairing().clone();
    let last = m.len() - 1;
    m[last][last] = Scalar::zero();
    check("forminv", verify_form_invariance(&d2.with_pairing(m)))?;

    let (_, da2) = canonical_delta(Series::A, 2).unwrap();
    let f13 = GeneratorId::f(1, 3);
    let flipped = da2.with_delta(&f13, da2.of(&f13).unwrap().scale(&Scalar::from_int(-1))).unwrap();
    check("delta-agree", verify_delta_agreement(&da2, &flipped))?;
    let rescaled = da2.with_delta(&f13, da2.of(&f13).unwrap().scale(&two)).unwrap();
    check("cojacobi", verify_cojacobi(&rescaled))?;

    let (b2, db2) = canonical_delta(Series::B, 2).unwrap();
    let f12 = GeneratorId::f(1, 2);
    check("cocycle", verify_cocycle(b2.table(), &db2.with_delta(&f12, db2.of(&f12).unwrap().scale(&two)).unwrap()))?;

    let (a1alg, da1) = canonical_delta(Series::A, 1).unwrap();
    let mut w = da1.of(&f12).unwrap().clone();
    w.add(a1alg.index(&f12).unwrap(), a1alg.index(&GeneratorId::f(2, 1)).unwrap(), &one);
    let leaky = da1.with_delta(&f12, w.finish()).unwrap();
    let plus = a1.s_plus_elements();
    check("subbialg", subbialgebra_report(&a1alg, &leaky, &plus).map_err(|e| e.to_string())?)?;

    let c2r = build_r_matrix(&c2);
    let dc2 = cocommutator_from_structure(&c2);
    check("coboundary", verify_coboundary(c2.double().table(), &dc2, &c2r.without_twist()))?;

    let a1r = build_r_matrix(&a1);
    let (&(i, j), _) = a1r.nonskew.terms().find(|((i, j), _)| i != j).unwrap();
    let mut dropped = a1r.nonskew.clone();
    dropped.add_term(i, j, &-a1r.nonskew.get(i, j));
    check("cybe", verify_cybe(&a1r.with_nonskew(dropped.finish()), a1alg.table()))?;

    let mut br = build_r_matrix(&canonical(Series::B, 2));
    let (h1, h2) = (b2.index(&GeneratorId::h(1)).unwrap(), b2.index(&GeneratorId::h(2)).unwrap());
    br.r_t.add_wedge(h1, h2, &one);
    br.r_t = br.r_t.clone().finish();
    check("twist", verify_twist_triviality(&b2, &br, TwistMode::Zero))?;

    let (_, small) = canonical_delta(Series::B, 1).unwrap();
    let (_, big) = canonical_delta(Series::B, 2).unwrap();
    let u2 = GeneratorId::u(2);
    let big = big.with_delta(&u2, big.of(&u2).unwrap().scale(&two)).unwrap();
    let shift = Injection::Shifted { by: 1 };
    check("chain", verify_delta_embedding(&small, &big, |g| shift.apply(g)))?;

    let d3 = build_series(Series::D, 3).unwrap();
    let wrong = d3.bracket_ids(x, y).unwrap().scale(&Scalar::from_int(-1));
    check("rep", verify_rep_homomorphism(&fermionic_rep(Series::D, 3, None).unwrap(), &d3.with_bracket(x, y, &wrong).unwrap()))?;

    let mut cas = CasimirElement::quadratic(&b2);
    // {U_i, V_i} is a scalar in the spinor representation, so drop a root term that is not
    let k = cas.terms.iter().position(|t| t.left == Element::generator(GeneratorId::s(1, 2))).unwrap();
    cas.terms.remove(k);
    check("casimir", casimir_check(&fermionic_rep(Series::B, 2, None).unwrap(), &cas))?;

    Ok(format!("{} verifiers caught their fixtures", caught.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("lie-axioms", lie_axioms),
        ("manin-triples", manin_triples),
        ("cross-derivation", cross_derivation),
        ("bialgebra-axioms", bialgebra_axioms),
        ("cybe", cybe),
        ("twist", twist),
        ("chain-embeddings", chains),
        ("representations", representations),
        ("mixed-splitting", mixed_splitting),
        ("mutation-sensitivity", mutation_sensitivity),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS criterion {} {name}: {detail} [{took:.2?}]", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {} {name}: {detail} [{took:.2?}]", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
