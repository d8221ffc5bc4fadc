//! The subcommands. Each writes its files through the [`Context`] and reports an [`Outcome`].

use std::fmt::Write as _;

use hecke_core::analytic::kernel::contour_integral;
use hecke_core::analytic::poisson::ConstantVariant;
use hecke_core::analytic::{
    check_poisson, check_poisson_char, check_poisson_coprime, kernel_closed_form, parseval, ContourConfig,
    KernelMethod, PoissonReport, TestFunction,
};
use hecke_core::family::{conductor_of, verify_axioms, HeckeChar, HeckeFamily, IdealCharacter, PairChar};
use hecke_core::ring::{enumerate_ideals, FieldId, Gaussian, Ideal, IdealFilter};
use hecke_core::sieve::spectral::column_set;
use hecke_core::sieve::{
    b1, b1_grid_csv, b2, b3, bracket_from_expansion, main_terms_t, monotonicity_check, scaling_experiment,
    scaling_fit_text, square_sequence_check, ExperimentGrid, LambdaSeq, ScalingReport,
};
use hecke_core::symbol::{jacobi, symbol};
use hecke_core::{Error, Result};

use crate::config::parse_ideal;
use crate::output::{Context, Outcome};

pub const POISSON_COLUMNS: &str = "t_or_X,lhs,rhs,residual,tail_budget";
pub const BRACKET_COLUMNS: &str = "g_ideal,g_class,b1_ideal,b2_ideal,bracket_value_exact_num,bracket_value_exact_den";

fn verdict(ok: bool) -> Outcome {
    if ok {
        Outcome::Success
    } else {
        Outcome::VerificationFailed
    }
}

fn test_function(ctx: &Context) -> Result<TestFunction> {
    let name = &ctx.cfg.bounds.test_function;
    TestFunction::by_name(name).ok_or_else(|| Error::Configuration(format!("unknown test function {name:?}")))
}

/// `(a/b)_n`, plus the Jacobi symbol over `Q`.
pub fn symbol_line(field: FieldId, a: &str, b: &str, n: u32) -> Result<String> {
    let az: Gaussian = a.parse()?;
    let bi = parse_ideal(field, b)?;
    let v = symbol(&az, &bi, n)?;
    let mut s = format!("symbol({a}, {bi}, {n}) = {v}");
    if field == FieldId::Q && n == 2 && az.im == 0 {
        let _ = write!(s, "\njacobi({a}, {}) = {}", bi.gen().re, jacobi(az.re, bi.gen().re)?);
    }
    Ok(s)
}

pub fn family_verify(ctx: &mut Context) -> Result<Outcome> {
    let report = verify_axioms(&ctx.family, ctx.cfg.bounds.family_bound)?;
    let ok = report.all_ok();
    let mut text = report.render();
    let _ = writeln!(text, "all_ok: {ok}");
    ctx.write("family_report.txt", &text)?;
    ctx.write("reciprocity_table.csv", &report.recip_table.to_csv(&ctx.family))?;
    if let Some(v) = report.violations.first() {
        let b = v.b.as_ref().map(|b| format!(", {b}")).unwrap_or_default();
        eprintln!("{} fails at ({}{b}): {}", v.axiom, v.a, v.detail);
    }
    Ok(verdict(ok))
}

/// The character used by the twisted Poisson checks: conductor `(17)` over `Q`, otherwise the
/// family character of smallest conductor among squarefree indices of norm at most 60.
pub fn default_character(family: &HeckeFamily) -> Result<HeckeChar<'_>> {
    if family.field_id() == FieldId::Q {
        let p = Ideal::rational(17)?;
        if p.coprime(family.modulus()) {
            return HeckeChar::new(family, &p);
        }
    }
    let mut best: Option<(Ideal, Ideal)> = None;
    for a in enumerate_ideals(family.field_id(), 1, 60, &IdealFilter::squarefree_coprime(family.modulus())) {
        let c = conductor_of(family, &a)?;
        if !c.is_unit() && best.as_ref().is_none_or(|(_, b)| c.norm() < b.norm()) {
            best = Some((a, c));
        }
    }
    let (a, c) = best.ok_or_else(|| Error::Domain("no non-trivial family character of small index".into()))?;
    Ok(HeckeChar::with_conductor(family, &a, c))
}

fn poisson_row(out: &mut String, x: f64, r: &PoissonReport) {
    // adding 0.0 turns a negative zero into +0
    let _ = writeln!(out, "{x},{:e},{:e},{:e},{:e}", r.lhs, r.rhs, r.residual, r.tail_budget + 0.0);
}

fn failed_row(out: &mut String, x: f64, e: &Error) {
    eprintln!("X={x}: {e}");
    let _ = writeln!(out, "{x},NaN,NaN,NaN,NaN");
}

fn check_x(values: &[f64]) -> Result<()> {
    match values.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
        Some(x) => Err(Error::Domain(format!("X must be positive and finite, got {x}"))),
        None => Ok(()),
    }
}

/// Plain, twisted and restricted Poisson checks. Both constant variants are always written;
/// `judged` selects the one whose residuals decide the exit code.
pub fn poisson_check(ctx: &mut Context, judged: ConstantVariant) -> Result<Outcome> {
    let b = ctx.cfg.bounds.clone();
    let tol = ctx.cfg.tolerances.clone();
    check_x(&b.poisson_x)?;
    check_x(&b.char_x)?;
    check_x(&b.coprime_x)?;
    let h = test_function(ctx)?;
    let cc = ctx.cfg.contour_config()?;
    let f = ctx.family.field().clone();
    let mut ok = true;

    let variants = [ConstantVariant::ZetaZero, ConstantVariant::PaperConstant];
    let mut bodies = [format!("{POISSON_COLUMNS}\n"), format!("{POISSON_COLUMNS}\n")];
    for &x in &b.poisson_x {
        match check_poisson(&h, x, &f, &cc) {
            Ok(pair) => {
                for (v, body) in variants.iter().zip(bodies.iter_mut()) {
                    let r = pair.get(*v);
                    poisson_row(body, x, r);
                    if *v == judged {
                        ok &= r.residual < tol.poisson;
                    }
                }
            }
            Err(e) => {
                ok = false;
                bodies.iter_mut().for_each(|body| failed_row(body, x, &e));
            }
        }
    }
    for (v, body) in variants.iter().zip(&bodies) {
        ctx.write(&format!("poisson_{}.csv", v.name()), body)?;
    }

    let chi = default_character(&ctx.family)?;
    let mut body = format!("# character chi_{} conductor {}\n{POISSON_COLUMNS}\n", chi.index(), chi.conductor());
    for &x in &b.char_x {
        match check_poisson_char(&h, x, &chi, &f, &cc) {
            Ok(r) => {
                ok &= r.residual < tol.character;
                poisson_row(&mut body, x, &r);
            }
            Err(e) => {
                ok = false;
                failed_row(&mut body, x, &e);
            }
        }
    }
    drop(chi);
    ctx.write("poisson_character.csv", &body)?;

    let m = parse_ideal(f.id, &b.coprime_m)?;
    let mut body = format!("# m = {m}, Y = X/4, Z = 4X, L = 16; residual = |lhs - rhs - omitted| / |lhs|\n{POISSON_COLUMNS}\n");
    for &x in &b.coprime_x {
        match check_poisson_coprime(&h, x, &m, x / 4.0, 4.0 * x, 16.0, &f, &cc) {
            Ok(r) => {
                let rel = r.closure / r.lhs.abs().max(1e-300);
                ok &= rel < tol.poisson;
                let _ = writeln!(body, "{x},{:e},{:e},{:e},{:e}", r.lhs, r.rhs + r.omitted, rel, r.tail_budget);
            }
            Err(e) => {
                ok = false;
                failed_row(&mut body, x, &e);
            }
        }
    }
    ctx.write("poisson_coprime.csv", &body)?;
    Ok(verdict(ok))
}

/// Log-spaced points `t_min, ..., t_max`.
pub fn log_points(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect(),
    }
}

/// Contour kernel against the closed form, and Parseval for every library function.
pub fn kernel_table(ctx: &mut Context) -> Result<Outcome> {
    let b = ctx.cfg.bounds.clone();
    if !(b.kernel_t_min > 0.0 && b.kernel_t_max >= b.kernel_t_min) {
        return Err(Error::Domain(format!("need 0 < t_min <= t_max, got {} and {}", b.kernel_t_min, b.kernel_t_max)));
    }
    let f = ctx.family.field().clone();
    let cc = ContourConfig { method: KernelMethod::Contour, ..ctx.cfg.contour_config()? };
    let tol = ctx.cfg.tolerances.clone();
    let mut ok = true;
    let mut body = format!("# lhs = contour, rhs = closed form, residual = |lhs - rhs|\n{POISSON_COLUMNS}\n");
    for t in log_points(b.kernel_t_min, b.kernel_t_max, b.kernel_points) {
        let v = contour_integral(&f, t / (f.a_k * f.a_k), &cc)?;
        let lhs = v.value.re / f.a_k;
        let rhs = kernel_closed_form(&f, t);
        let residual = (lhs - rhs).abs();
        ok &= residual < tol.kernel;
        let _ = writeln!(body, "{t:e},{lhs:e},{rhs:e},{residual:e},{:e}", v.tail / f.a_k);
    }
    ctx.write("kernel.csv", &body)?;

    let cc = ctx.cfg.contour_config()?;
    let mut body = String::from("function,lhs,rhs,relative,tail_budget\n");
    for (name, h) in TestFunction::library() {
        let r = parseval(&h, &f, &cc)?;
        ok &= r.relative < tol.parseval;
        let _ = writeln!(body, "{name},{:e},{:e},{:e},{:e}", r.lhs, r.rhs, r.relative, r.tail_budget);
    }
    ctx.write("parseval.csv", &body)?;
    Ok(verdict(ok))
}

fn grid(ctx: &Context) -> ExperimentGrid {
    let b = &ctx.cfg.bounds;
    ExperimentGrid {
        m_list: b.sieve_sizes.clone(),
        n_list: b.sieve_sizes.clone(),
        k_fraction: b.k_fraction,
        epsilon: b.epsilon,
        slope_threshold: ctx.cfg.tolerances.slope,
        max_dimension: b.max_dimension,
    }
}

fn write_scaling(ctx: &mut Context, report: &ScalingReport) -> Result<Outcome> {
    ctx.write("b1_grid.csv", &b1_grid_csv(report, &ctx.family))?;
    ctx.write("scaling_fit.txt", &scaling_fit_text(report))?;
    Ok(if report.partial() {
        Outcome::ResourceCap
    } else {
        verdict(report.pass != Some(false))
    })
}

fn sizes_ok(sizes: &[f64]) -> Result<()> {
    match sizes.iter().find(|s| !(s.is_finite() && **s >= 1.0)) {
        Some(s) => Err(Error::Domain(format!("grid sizes must be at least 1, got {s}"))),
        None => Ok(()),
    }
}

/// `B1` grid with the scaling fit, the duality table, `B2`/`B3` on the diagonal and, on request,
/// the square-sequence ratios.
pub fn sieve(ctx: &mut Context, square_sequence: bool) -> Result<Outcome> {
    sizes_ok(&ctx.cfg.bounds.sieve_sizes)?;
    let report = scaling_experiment(&grid(ctx), &ctx.family)?;
    let mut outcome = write_scaling(ctx, &report)?;

    let g = ctx.family.group_order() as f64;
    let mut body = String::from("M,N,B1_MN,B1_NM,G,holds\n");
    let mut dual_ok = true;
    for p in &report.points {
        if let Some(q) = report.points.iter().find(|q| q.m == p.n && q.n == p.m) {
            let holds = p.b1 <= g * q.b1 * (1.0 + 1e-12) + 1e-12;
            dual_ok &= holds;
            let _ = writeln!(body, "{},{},{:e},{:e},{g},{holds}", p.m, p.n, p.b1, q.b1);
        }
    }
    ctx.write("duality.csv", &body)?;
    outcome = outcome.and(verdict(dual_ok));

    let w = test_function(ctx)?;
    let unit = Ideal::unit(ctx.family.field_id());
    let mut body = String::from("M,N,K,B1,B2,B3\n");
    for p in report.points.iter().filter(|p| p.m == p.n) {
        let k = ctx.cfg.bounds.k_fraction * p.m;
        let v2 = b2(p.m, p.n, k, &ctx.family)?.top_eigenvalue;
        let v3 = b3(p.m, p.n, k, &unit, &w, &ctx.family)?.value;
        let _ = writeln!(body, "{},{},{k},{:e},{v2:e},{v3:e}", p.m, p.n, p.b1);
    }
    ctx.write("sieve_norms.csv", &body)?;

    if square_sequence {
        let tol = ctx.cfg.tolerances.clone();
        let mut body = String::from("M,N,squares,rows,value,ratio,normalized_ratio,in_range\n");
        let mut sq_ok = true;
        for [m, n] in ctx.cfg.bounds.square_points.clone() {
            let r = square_sequence_check(m, n, 1.0, &ctx.family)?;
            let in_range = !r.degenerate && (tol.square_lo..=tol.square_hi).contains(&r.ratio);
            sq_ok &= in_range;
            let _ = writeln!(
                body,
                "{m},{n},{},{},{:e},{:e},{:e},{in_range}",
                r.squares.len(),
                r.rows,
                r.value,
                r.ratio,
                r.normalized_ratio
            );
        }
        ctx.write("square_sequence.csv", &body)?;
        outcome = outcome.and(verdict(sq_ok));
    }
    Ok(outcome)
}

/// The `B1` grid and fit, plus `B1(M1, N) <= 4 B1(M2, N)` on the diagonal.
pub fn scaling(ctx: &mut Context) -> Result<Outcome> {
    sizes_ok(&ctx.cfg.bounds.sieve_sizes)?;
    let report = scaling_experiment(&grid(ctx), &ctx.family)?;
    let mut outcome = write_scaling(ctx, &report)?;
    let mut body = String::from("M1,M2,N,B1_M1,B1_M2,holds\n");
    let mut ok = true;
    let mut capped = false;
    for &n in &ctx.cfg.bounds.sieve_sizes {
        let m2 = (8.0 * n * (2.0 * n * n).ln()).ceil();
        if column_set(&ctx.family, m2).len() > ctx.cfg.bounds.max_dimension {
            capped = true;
            let _ = writeln!(body, "{n},{m2},{n},NaN,NaN,skipped");
            continue;
        }
        let r = monotonicity_check(n, n, &ctx.family)?;
        ok &= r.holds;
        let _ = writeln!(body, "{},{},{},{:e},{:e},{}", r.m1, r.m2, r.n, r.b1_small, r.b1_large, r.holds);
    }
    ctx.write("monotonicity.csv", &body)?;
    outcome = outcome.and(verdict(ok));
    if capped {
        outcome = outcome.and(Outcome::ResourceCap);
    }
    Ok(outcome)
}

/// Deterministic real coefficients in `[-1, 1]` on every squarefree `b ~ N` prime to `c`.
pub fn default_lambda(family: &HeckeFamily, n: f64) -> Result<LambdaSeq> {
    let entries = column_set(family, n)
        .into_iter()
        .enumerate()
        .map(|(i, b)| {
            let v = ((i * 37 + 11) % 17) as f64 / 8.0 - 1.0;
            (b, if v == 0.0 { 0.5 } else { v })
        })
        .collect();
    LambdaSeq::real(family, n, entries)
}

/// Brackets of every same-class pair for each configured `g` and class, with the main terms.
pub fn bracket(ctx: &mut Context) -> Result<Outcome> {
    let b = ctx.cfg.bounds.clone();
    let tol = ctx.cfg.tolerances.bracket;
    let w = test_function(ctx)?;
    let field = ctx.family.field_id();
    let lambda = default_lambda(&ctx.family, b.bracket_n)?;
    let s = ctx.family.radical().clone();
    let mut rows = format!("{BRACKET_COLUMNS}\n");
    let mut terms = String::from("g_ideal,g_class,pairs,t_sum,tprime_sum,from_brackets,abs_error\n");
    let mut ok = true;
    for g_text in &b.bracket_g {
        let g = parse_ideal(field, g_text)?;
        for class in 0..ctx.family.group_order() as u32 {
            let mt = main_terms_t(b.bracket_m, b.bracket_k, &g, class, &lambda, &w, &ctx.family)?;
            for pb in &mt.brackets {
                let chi = PairChar::same_class(&ctx.family, &pb.b1, &pb.b2)?;
                let oracle = bracket_from_expansion(&chi, &g, b.bracket_k, &s)?;
                if oracle != pb.value || (g.is_unit() && !pb.value.is_zero()) {
                    eprintln!("bracket mismatch for g={g} at ({}, {}): {} vs {oracle}", pb.b1, pb.b2, pb.value);
                    ok = false;
                }
                let (num, den) = pb.value.numerator_denominator();
                let _ = writeln!(rows, "{g},{class},{},{},{num},{den}", pb.b1, pb.b2);
            }
            let err = (mt.t_sum - mt.tprime_sum - mt.from_brackets).abs();
            ok &= err <= tol * (mt.t_sum.abs() + mt.tprime_sum.abs() + 1.0);
            let _ = writeln!(
                terms,
                "{g},{class},{},{:e},{:e},{:e},{err:e}",
                mt.brackets.len(),
                mt.t_sum,
                mt.tprime_sum,
                mt.from_brackets
            );
        }
    }
    ctx.write("bracket.csv", &rows)?;
    ctx.write("main_terms.csv", &terms)?;
    Ok(verdict(ok))
}

/// Single spectral norm, used by the acceptance harness.
pub fn b1_value(family: &HeckeFamily, m: f64, n: f64) -> Result<f64> {
    Ok(b1(m, n, family)?.top_eigenvalue)
}
