use hecke_core::analytic::poisson::ConstantVariant;
use hecke_core::analytic::*;
use hecke_core::family::{conductor_of, FamilyOptions, HeckeChar, HeckeFamily, PrincipalChar};
use hecke_core::ring::{enumerate_ideals, FieldId, FieldSpec, Gaussian, Ideal, IdealFilter};
use num_complex::Complex64;
use num_rational::Ratio;
use proptest::prelude::*;
use std::f64::consts::PI;

fn fields() -> [FieldSpec; 2] {
    [FieldSpec::q(), FieldSpec::qi()]
}

#[test]
fn contour_kernel_matches_bessel_closed_form() {
    let f = FieldSpec::qi();
    let cc = ContourConfig::contour();
    for k in 0..=16 {
        let t = 10f64.powf(-2.0 + k as f64 / 4.0);
        let a = kernel_contour(&f, t, &cc).unwrap();
        let b = PI * libm::j0(2.0 * PI * t.sqrt());
        assert!((a - b).abs() < 1e-8, "t={t}: {a} vs {b}");
    }
}

#[test]
fn kernel_depends_only_on_the_field() {
    let f = FieldSpec::qi();
    let cc = ContourConfig::contour();
    let a = kernel_contour(&f, 2.5, &cc).unwrap();
    let _ = dot_transform(&TestFunction::standard_bump(), 1.0, &f, &cc).unwrap();
    assert_eq!(a, kernel_contour(&f, 2.5, &cc).unwrap());
}

#[test]
fn gaussian_kernel_decay() {
    let f = FieldSpec::qi();
    let mut sup: f64 = 0.0;
    let mut t = 1.0;
    while t <= 1e4 {
        sup = sup.max(kernel_closed_form(&f, t).abs() * t.powf(0.25));
        t *= 1.07;
    }
    // pi J0(2 pi sqrt t) t^{1/4} -> sqrt(pi/ ... ) bounded by sqrt(pi)
    assert!(sup < PI.sqrt() + 1e-6, "{sup}");
}

#[test]
fn parseval_for_library_functions() {
    let cc = ContourConfig::default();
    for f in fields() {
        for (name, h) in TestFunction::library() {
            let r = parseval(&h, &f, &cc).unwrap();
            assert!(r.relative < 1e-6, "{} {name}: {r:?}", f.id);
        }
    }
}

#[test]
fn transform_decays_polynomially() {
    let h = TestFunction::standard_bump();
    let grid: Vec<f64> = (0..40).map(|k| 1.0 + 2.5 * k as f64).collect();
    for f in fields() {
        let sup = transforms::decay_sup(&h, &f, &ContourConfig::default(), &grid, 3.0).unwrap();
        println!("{}: sup |h_dot(x)| x^3 = {sup:.4e}", f.id);
        assert!(sup.is_finite() && sup > 0.0, "{}: {sup}", f.id);
    }
}

#[test]
fn ddot_is_the_transform_of_the_squared_argument() {
    let h = TestFunction::standard_bump();
    let cc = ContourConfig::default();
    for f in fields() {
        for x in [0.3, 1.0, 4.0] {
            let direct = ddot_transform(&h, x, &f, &cc).unwrap();
            let (lo, hi) = (0.5f64.sqrt(), 2.5f64.sqrt());
            let (v, _) = quad::adaptive(|t: f64| h.eval(t * t) * kernel_closed_form(&f, t * x), lo, hi, 1e-13).unwrap();
            assert!((direct - v).abs() < 1e-9, "{} x={x}", f.id);
        }
    }
}

#[test]
fn poisson_plain_both_fields() {
    let cc = ContourConfig::default();
    let h = TestFunction::standard_bump();
    for f in fields() {
        for x in [1.0, 10.0, 100.0] {
            let r = check_poisson(&h, x, &f, &cc).unwrap();
            assert!(r.zeta_zero.residual < 1e-6, "{} X={x}: {:?}", f.id, r.zeta_zero);
        }
    }
}

#[test]
fn constant_variants_differ_only_through_h0_and_the_real_place() {
    let cc = ContourConfig::default();
    let h = TestFunction::standard_bump();
    let r = check_poisson(&h, 10.0, &FieldSpec::qi(), &cc).unwrap();
    assert!((r.zeta_zero.rhs - r.paper_constant.rhs).abs() < 1e-12);
    let g = TestFunction::gaussian_cap(1.0);
    let r = check_poisson(&g, 10.0, &FieldSpec::qi(), &cc).unwrap();
    let gap = r.paper_constant.rhs - r.zeta_zero.rhs;
    // -alpha A + 1/4 = 1/4 - 1/(4 pi)
    assert!((gap - (0.25 - 0.25 / PI)).abs() < 1e-9, "{gap}");
    assert!(r.zeta_zero.residual < 1e-6);
    assert_eq!(r.get(ConstantVariant::ZetaZero).x, 10.0);
}

fn q_family() -> HeckeFamily {
    HeckeFamily::build(&FamilyOptions::new(FieldId::Q)).unwrap()
}

fn smallest_nontrivial(fam: &HeckeFamily) -> (Ideal, Ideal) {
    let mut best: Option<(Ideal, Ideal)> = None;
    for a in enumerate_ideals(fam.field_id(), 1, 60, &IdealFilter::squarefree_coprime(fam.modulus())) {
        let f = conductor_of(fam, &a).unwrap();
        if best.as_ref().is_none_or(|(_, g)| f.norm() < g.norm()) {
            best = Some((a, f));
        }
    }
    best.unwrap()
}

#[test]
fn twisted_poisson() {
    let cc = ContourConfig::default();
    let h = TestFunction::standard_bump();
    let fam = q_family();
    let chi = HeckeChar::new(&fam, &Ideal::rational(17).unwrap()).unwrap();
    let r = check_poisson_char(&h, 10.0, &chi, &FieldSpec::q(), &cc).unwrap();
    assert!(r.residual < 1e-5, "{r:?}");

    let fam = HeckeFamily::build(&FamilyOptions::new(FieldId::Qi)).unwrap();
    let (a, f) = smallest_nontrivial(&fam);
    let chi = HeckeChar::with_conductor(&fam, &a, f);
    let r = check_poisson_char(&h, 5.0, &chi, &FieldSpec::qi(), &cc).unwrap();
    assert!(r.residual < 1e-5, "{a}: {r:?}");
}

#[test]
fn twisted_poisson_is_linear_in_h() {
    let cc = ContourConfig::default();
    let fam = q_family();
    let chi = HeckeChar::new(&fam, &Ideal::rational(5).unwrap()).unwrap();
    let h = TestFunction::standard_bump();
    let r1 = check_poisson_char(&h, 8.0, &chi, &FieldSpec::q(), &cc).unwrap();
    let r3 = check_poisson_char(&h.clone().scaled(3.0), 8.0, &chi, &FieldSpec::q(), &cc).unwrap();
    assert!((r3.lhs - 3.0 * r1.lhs).abs() < 1e-12 && (r3.rhs - 3.0 * r1.rhs).abs() < 1e-9);
}

#[test]
fn coprime_poisson_over_gaussian_integers() {
    let cc = ContourConfig::default();
    let f = FieldSpec::qi();
    let h = TestFunction::standard_bump();
    let m = Ideal::new(FieldId::Qi, Gaussian::int(3)).unwrap();
    let x = 20.0;
    let r = check_poisson_coprime(&h, x, &m, x / 4.0, 4.0 * x, 16.0, &f, &cc).unwrap();
    assert!(r.closure < 1e-6, "{r:?}");
    assert!(r.residual <= r.o_term_budget + 1e-6, "{r:?}");
    assert!(check_poisson_coprime(&h, x, &m, 10f64.sqrt(), 2.0 * x.sqrt(), 16.0, &f, &cc).is_err());
}

#[test]
fn mobius_sum_is_phi_ratio() {
    for field in [FieldId::Q, FieldId::Qi] {
        for m in enumerate_ideals(field, 0, 400, &IdealFilter::none()) {
            let s: Ratio<i64> =
                m.divisors().iter().map(|d| Ratio::new(d.mobius() as i64, d.norm() as i64)).sum();
            assert_eq!(s, Ratio::new(m.phi() as i64, m.norm() as i64), "{m}");
        }
    }
}

#[test]
fn functional_equation_of_family_characters() {
    let points = [Complex64::new(0.3, 0.0), Complex64::new(0.5, 2.0), Complex64::new(0.8, 0.0)];
    let fam = q_family();
    for p in [17, 3, 5, 21] {
        let chi = HeckeChar::new(&fam, &Ideal::rational(p).unwrap()).unwrap();
        let table = LValueTable::new(&FieldSpec::q(), &chi, 2000).unwrap();
        for s in points {
            let r = table.functional_equation_residual(s).unwrap();
            assert!(r < 1e-8, "chi_{p} at {s}: {r}");
        }
    }
    let fam = HeckeFamily::build(&FamilyOptions::new(FieldId::Qi)).unwrap();
    for a in enumerate_ideals(FieldId::Qi, 1, 30, &IdealFilter::squarefree_coprime(fam.modulus())) {
        let chi = HeckeChar::new(&fam, &a).unwrap();
        let table = LValueTable::new(&FieldSpec::qi(), &chi, 3000).unwrap();
        for s in points {
            let r = table.functional_equation_residual(s).unwrap();
            assert!(r < 1e-8, "chi_{a} at {s}: {r}");
        }
    }
}

#[test]
fn theta_sums() {
    let cc = ContourConfig::default();
    for f in fields() {
        let one = PrincipalChar::new(f.id);
        let t10 = theta_sum(&one, 10.0, &f, &cc).unwrap().re;
        let t100 = theta_sum(&one, 100.0, &f, &cc).unwrap().re;
        let ratio = t100 / t10;
        assert!((ratio - 10.0).abs() < 1.0, "{}: {ratio}", f.id);
    }
    let fam = q_family();
    let chi = HeckeChar::new(&fam, &Ideal::rational(17).unwrap()).unwrap();
    for m in [1e2, 1e3, 1e4] {
        let t = theta_sum(&chi, m, &FieldSpec::q(), &cc).unwrap();
        assert!(t.norm() <= 10.0 * 17f64.powf(0.75), "M={m}: {t}");
        assert!(t.im.abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]
    #[test]
    fn rho_weights_are_positive(t in 0.1f64..10.0) {
        let cc = ContourConfig::default();
        for (a, b) in [(1, 0), (0, 1)] {
            let v = rho_weight(a, b, t, &cc).unwrap();
            let exact = rho_weight_closed_form(a, b, t).unwrap();
            prop_assert!(v > 0.0);
            prop_assert!((v / exact - 1.0).abs() < 1e-9, "rho_({},{})({}) = {} vs {}", a, b, t, v, exact);
        }
    }
}

#[test]
fn rho_weight_ratios() {
    let cc = ContourConfig::default();
    let r = rho_weight(0, 1, 1.0, &cc).unwrap() / rho_weight(0, 1, 2.0, &cc).unwrap();
    assert!((r - std::f64::consts::E).abs() < 1e-9);
    let l = (rho_weight(1, 0, 1.0, &cc).unwrap() / rho_weight(1, 0, 2.0, &cc).unwrap()).ln();
    assert!((l - 3.0).abs() < 1e-9);
}
