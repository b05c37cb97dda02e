use drinfeld_core::reps::{raise, Entry, BOSONIC_TOLERANCE};
use drinfeld_core::*;
use num_complex::Complex64;
use num_rational::BigRational;

fn alg(series: Series, rank: usize) -> LieAlgebra {
    build_series(series, rank).unwrap()
}

fn scalar_identity(dim: usize, c: Scalar) -> SparseMatrix<Scalar> {
    SparseMatrix::scalar(dim, &c)
}

#[test]
fn b1_cartan_is_diagonal_half_shifted() {
    let rep = fermionic_rep(Series::B, 1, None).unwrap();
    let h = rep.get(&GeneratorId::h(1)).unwrap();
    assert_eq!(rep.basis().state(0), &[0]);
    assert_eq!(rep.basis().state(1), &[1]);
    assert_eq!(h.get(0, 0), Scalar::rational(-1, 2));
    assert_eq!(h.get(1, 1), Scalar::rational(1, 2));
    assert_eq!(h.nnz(), 2);
}

#[test]
fn fermionic_ladders_satisfy_canonical_anticommutators() {
    for n in 1..=4 {
        let basis = FockBasis::fermionic(n).unwrap();
        assert_eq!(basis.dim(), 1 << n);
        let cre: Vec<_> = (1..=n).map(|i| basis.fermionic_creation(i)).collect();
        let ann: Vec<_> = cre.iter().map(SparseMatrix::transpose).collect();
        for i in 0..n {
            for j in 0..n {
                let expected = if i == j { SparseMatrix::identity(basis.dim()) } else { SparseMatrix::zeros(basis.dim()) };
                assert_eq!(ann[i].anticommutator(&cre[j]), expected, "{{a{}, a{}†}}", i + 1, j + 1);
                assert!(cre[i].anticommutator(&cre[j]).is_zero());
                assert!(ann[i].anticommutator(&ann[j]).is_zero());
            }
        }
    }
}

#[test]
fn b1_u_v_commutator_is_h() {
    let rep = fermionic_rep(Series::B, 1, None).unwrap();
    let u = rep.get(&GeneratorId::u(1)).unwrap();
    let v = rep.get(&GeneratorId::v(1)).unwrap();
    assert_eq!(&u.commutator(v), rep.get(&GeneratorId::h(1)).unwrap());
}

#[test]
fn central_generators_are_scalar_multiples() {
    let lambda = vec![BigRational::new(3.into(), 2.into()), BigRational::new((-2).into(), 1.into())];
    let rep = fermionic_rep(Series::D, 2, Some(&lambda)).unwrap();
    assert_eq!(rep.get(&GeneratorId::central(1)).unwrap(), &scalar_identity(4, Scalar::rational(3, 2)));
    assert_eq!(rep.get(&GeneratorId::central(2)).unwrap(), &scalar_identity(4, Scalar::from_int(-2)));
    let default = fermionic_rep(Series::D, 2, None).unwrap();
    assert_eq!(default.get(&GeneratorId::central(2)).unwrap(), &SparseMatrix::identity(4));
    assert!(fermionic_rep(Series::D, 2, Some(&lambda[..1])).is_err());
}

#[test]
fn fermionic_generators_have_one_entry_per_column_at_most() {
    let rep = fermionic_rep(Series::B, 3, None).unwrap();
    for (g, m) in rep.generators() {
        for c in 0..m.dim() {
            assert!(m.column(c).len() <= 1, "{g} column {c}");
        }
    }
}

#[test]
fn fermionic_homomorphism_exact_on_grid() {
    for (s, n) in [(Series::A, 1), (Series::A, 2), (Series::A, 3), (Series::B, 1), (Series::B, 2), (Series::B, 3), (Series::D, 2), (Series::D, 3)] {
        let a = alg(s, n);
        let rep = fermionic_rep(s, n, None).unwrap();
        let r = verify_rep_homomorphism(&rep, &a);
        assert!(r.passed(), "{s}{n}: {r}");
        assert_eq!(r.checked, a.dim() * (a.dim() - 1) / 2);
    }
}

#[test]
fn fermionic_rep_rejects_c_and_bad_rank() {
    assert!(matches!(fermionic_rep(Series::C, 2, None), Err(Error::Representation(_))));
    assert!(matches!(fermionic_rep(Series::D, 1, None), Err(Error::RankOutOfRange { .. })));
    assert!(matches!(bosonic_rep(Series::B, 2, 6, None), Err(Error::Representation(_))));
    assert!(matches!(bosonic_rep(Series::C, 2, 3, None), Err(Error::Representation(_))));
}

#[test]
fn bosonic_basis_counts_and_ladder_action() {
    let basis = FockBasis::bosonic(2, 6).unwrap();
    assert_eq!(basis.dim(), 28);
    let single = FockBasis::bosonic(1, 6).unwrap();
    let bdag = single.bosonic_creation(1);
    for k in 0..6u32 {
        let col = single.position(&[k]).unwrap();
        let row = single.position(&[k + 1]).unwrap();
        assert_eq!(bdag.get(row, col), Complex64::new(f64::from(k + 1).sqrt(), 0.0));
        assert_eq!(bdag.column(col).len(), 1);
    }
    assert!(bdag.column(single.position(&[6]).unwrap()).is_empty());
}

#[test]
fn bosonic_canonical_commutator_on_protected_subspace() {
    let basis = FockBasis::bosonic(2, 6).unwrap();
    for i in 1..=2 {
        let bdag = basis.bosonic_creation(i);
        let b = bdag.transpose();
        let diff = b.commutator(&bdag).sub(&SparseMatrix::identity(basis.dim()));
        assert!(diff.negligible_where(BOSONIC_TOLERANCE, |c| basis.protected(c, 1)));
        // the boundary is where truncation shows
        assert!(!diff.negligible_where(BOSONIC_TOLERANCE, |_| true));
    }
}

#[test]
fn c1_p_q_commutator_is_twice_h_below_cutoff() {
    let rep = bosonic_rep(Series::C, 1, 6, None).unwrap();
    let p = rep.get(&GeneratorId::p(1, 1)).unwrap();
    let q = rep.get(&GeneratorId::q(1, 1)).unwrap();
    let h = rep.get(&GeneratorId::h(1)).unwrap();
    let diff = p.commutator(q).sub(&h.scale(&Complex64::new(2.0, 0.0)));
    let keep = |c: usize| rep.basis().total(c) <= 4;
    assert!(diff.max_magnitude_where(keep) <= 1e-12);
}

#[test]
fn bosonic_homomorphism_on_grid() {
    for (s, n) in [(Series::A, 1), (Series::A, 2), (Series::C, 1), (Series::C, 2), (Series::C, 3)] {
        let rep = bosonic_rep(s, n, 6, None).unwrap();
        let r = verify_rep_homomorphism(&rep, &alg(s, n));
        assert!(r.passed(), "{s}{n}: {r}");
    }
}

#[test]
fn diagonal_collisions_agree_with_oscillators() {
    // every [F, P] and [F, Q] pair where an index of F meets a diagonal or repeated index
    for n in 2..=3 {
        let a = alg(Series::C, n);
        let rep = bosonic_rep(Series::C, n, 6, None).unwrap();
        let ids = a.basis().ids().to_vec();
        let mut checked = 0;
        for x in ids.iter().filter(|g| g.kind == Kind::F) {
            for y in ids.iter().filter(|g| matches!(g.kind, Kind::P | Kind::Q)) {
                let touches = [y.i, y.j].contains(&x.i) || [y.i, y.j].contains(&x.j);
                if !touches {
                    continue;
                }
                let lhs = rep.get(x).unwrap().commutator(rep.get(y).unwrap());
                let rhs = rep.image(&a.bracket_ids(*x, *y).unwrap()).unwrap();
                let deg = raise(x) + raise(y);
                let diff = lhs.sub(&rhs);
                assert!(diff.negligible_where(BOSONIC_TOLERANCE, |c| rep.basis().protected(c, deg)), "[{x}, {y}] in C{n}");
                checked += 1;
            }
        }
        assert!(checked > 0);
    }
}

#[test]
fn mutated_table_entry_is_pinpointed() {
    let a = alg(Series::D, 3);
    let (x, y) = (GeneratorId::f(1, 2), GeneratorId::f(2, 3));
    let wrong = a.bracket_ids(x, y).unwrap().scale(&Scalar::from_int(-1));
    let broken = a.with_bracket(x, y, &wrong).unwrap();
    let r = verify_rep_homomorphism(&fermionic_rep(Series::D, 3, None).unwrap(), &broken);
    assert!(!r.passed());
    assert_eq!(r.violations.len(), 1);
    assert_eq!(r.violations[0].indices, vec!["F1,2".to_string(), "F2,3".to_string()]);

    let c = alg(Series::C, 2);
    let (x, y) = (GeneratorId::f(1, 2), GeneratorId::q(1, 1));
    let wrong = c.bracket_ids(x, y).unwrap().scale(&Scalar::from_int(2));
    let broken = c.with_bracket(x, y, &wrong).unwrap();
    let r = verify_rep_homomorphism(&bosonic_rep(Series::C, 2, 6, None).unwrap(), &broken);
    assert_eq!(r.violations.len(), 1, "{r}");
}

#[test]
fn rep_and_algebra_must_match() {
    let r = verify_rep_homomorphism(&fermionic_rep(Series::B, 2, None).unwrap(), &alg(Series::D, 2));
    assert!(!r.passed());
}

#[test]
fn b1_quadratic_casimir_is_three_quarters() {
    let a = alg(Series::B, 1);
    let rep = fermionic_rep(Series::B, 1, None).unwrap();
    let cas = CasimirElement::quadratic(&a);
    assert_eq!(cas.evaluate(&rep).unwrap(), scalar_identity(2, Scalar::rational(3, 4)));
    assert!(casimir_check(&rep, &cas).passed());
}

#[test]
fn casimirs_commute_exactly_in_fermionic_reps() {
    for (s, n) in [(Series::A, 1), (Series::A, 2), (Series::A, 3), (Series::B, 1), (Series::B, 2), (Series::B, 3), (Series::D, 2), (Series::D, 3)] {
        let a = alg(s, n);
        let rep = fermionic_rep(s, n, None).unwrap();
        let c2 = casimir_check(&rep, &CasimirElement::quadratic(&a));
        assert!(c2.passed(), "{s}{n}: {c2}");
        let triple = split(&a, &SplittingSpec::canonical(s, n)).unwrap();
        let cd = CasimirElement::of_double(&triple);
        let r = casimir_check(&rep, &cd);
        assert!(r.passed(), "{s}{n}: {r}");
        assert_eq!(r.checked, a.dim());
    }
}

#[test]
fn double_casimir_is_quadratic_plus_central_squares() {
    let a = alg(Series::D, 2);
    let lambda = vec![BigRational::new(1.into(), 3.into()), BigRational::new(2.into(), 1.into())];
    let rep = fermionic_rep(Series::D, 2, Some(&lambda)).unwrap();
    let triple = split(&a, &SplittingSpec::canonical(Series::D, 2)).unwrap();
    let cd = CasimirElement::of_double(&triple).evaluate(&rep).unwrap();
    let c2 = CasimirElement::quadratic(&a).evaluate(&rep).unwrap();
    let shift = Scalar::rational(1, 9) + Scalar::from_int(4);
    assert_eq!(cd.sub(&c2), scalar_identity(4, shift));
}

#[test]
fn mixed_double_casimir_commutes() {
    let a = alg(Series::D, 2);
    let rep = fermionic_rep(Series::D, 2, None).unwrap();
    let triple = split(&a, &SplittingSpec::mixed(vec![(1, 2)], vec![])).unwrap();
    assert!(casimir_check(&rep, &CasimirElement::of_double(&triple)).passed());
}

#[test]
fn bosonic_casimirs_commute_on_protected_subspace() {
    for (s, n) in [(Series::A, 2), (Series::C, 1), (Series::C, 2)] {
        let a = alg(s, n);
        let rep = bosonic_rep(s, n, 6, None).unwrap();
        assert!(casimir_check(&rep, &CasimirElement::quadratic(&a)).passed(), "{s}{n}");
    }
}

#[test]
fn dropped_anticommutator_term_leaves_residual() {
    let a = alg(Series::B, 2);
    let rep = fermionic_rep(Series::B, 2, None).unwrap();
    let mut cas = CasimirElement::quadratic(&a);
    let k = cas.terms.iter().position(|t| t.left == Element::generator(GeneratorId::s(1, 2))).unwrap();
    cas.terms.remove(k);
    let r = casimir_check(&rep, &cas);
    assert!(!r.passed());
}

#[test]
fn coordinate_dump_is_stable() {
    let rep = fermionic_rep(Series::B, 1, None).unwrap();
    let u = rep.get(&GeneratorId::u(1)).unwrap();
    assert_eq!(u.to_coo(), "1 0 0 0 1/2 0\n");
    let dir = tempdir();
    let files = rep.dump(&dir).unwrap();
    assert_eq!(files.len(), 4);
    let again = std::fs::read_to_string(dir.join("U1.coo")).unwrap();
    assert_eq!(again, u.to_coo());
    let bos = bosonic_rep(Series::C, 1, 4, None).unwrap();
    let line = bos.get(&GeneratorId::p(1, 1)).unwrap().to_coo();
    assert!(line.lines().next().unwrap().split(' ').count() == 3, "{line}");
    assert!(Complex64::new(0.5, 0.0).dump_fields() == "0.5");
    std::fs::remove_dir_all(dir).ok();
}

fn tempdir() -> std::path::PathBuf {
    let p = std::env::temp_dir().join(format!("reps-dump-{}", std::process::id()));
    std::fs::create_dir_all(&p).unwrap();
    p
}
