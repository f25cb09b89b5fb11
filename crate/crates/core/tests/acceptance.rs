//! One PASS/FAIL line per acceptance criterion. All checks are exact; only the running
//! times carry limits. Exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use lagbgg::bgg::sample::random_module;
use lagbgg::bgg::{check_equivalence, default_l_window, functor_l, koszul_complex, ExtModuleComplex};
use lagbgg::forms_calculus::{verify_commutators, verify_weil_exchange_omega, verify_weil_exchange_sigma, verify_weil_formulas};
use lagbgg::gradedcat::sample::{random_abelian_instance, random_derived_instance};
use lagbgg::gradedcat::{split_abelian, split_derived, GradedOperator};
use lagbgg::serre::{hexagon_reflections, tri_reflections, weyl_orbit};
use lagbgg::torus_model::{self as torus, TorusFibration};
use num_integer::binomial;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct Criterion {
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Result<String, String>,
}

fn ensure(ok: bool, what: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn koszul() -> Result<String, String> {
    for n in 1..=4 {
        let w = (-(n as i64) - 1, n as i64 + 1);
        let h = koszul_complex(n, w).homology();
        ensure(h.total_dim() == 1 && h.dim(&[0, 0]) == 1, format!("n = {n}: homology {:?}", h))?;
    }
    Ok("n = 1..4, window [-n-1, n+1]".into())
}

fn round_trip() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut largest = 0;
    for s in 0..200 {
        let n = 1 + s % 3;
        let m = random_module(&mut rng, n, 40, 2);
        ensure(m.total_dim() <= 40, "sample too large")?;
        largest = largest.max(m.total_dim());
        ensure(check_equivalence(&m).map_err(|e| e.to_string())?, format!("sample {s} (n = {n}): unit not a quasi-isomorphism"))?;
    }
    Ok(format!("200 samples, n <= 3, largest total dim {largest}"))
}

fn l_of_omega() -> Result<String, String> {
    for n in 1..=4usize {
        let omega = ExtModuleComplex::exterior_algebra(n);
        let h = functor_l(&omega).truncate(default_l_window(&omega)).homology();
        let top = [n as i64, -(n as i64)];
        ensure(h.total_dim() == 1 && h.dim(&top) == 1, format!("n = {n}: homology {:?}", h))?;
    }
    Ok("n = 1..4, one-dimensional at (n, -n)".into())
}

fn report_ok(name: &str, rep: lagbgg::forms_calculus::Report) -> Result<usize, String> {
    match rep.checks.iter().find(|c| !c.passed) {
        Some(c) => Err(format!("{name}: {}", c.name)),
        None => Ok(rep.checks.len()),
    }
}

fn weil() -> Result<String, String> {
    let mut count = 0;
    for n in 1..=3 {
        count += report_ok("weil", verify_weil_formulas(n).map_err(|e| e.to_string())?)?;
    }
    Ok(format!("n = 1..3, {count} identities"))
}

fn contraction() -> Result<String, String> {
    let mut count = 0;
    for n in 1..=2 {
        count += report_ok("sigma exchange", verify_weil_exchange_sigma(n).map_err(|e| e.to_string())?)?;
        count += report_ok("omega exchange", verify_weil_exchange_omega(n).map_err(|e| e.to_string())?)?;
        count += report_ok("commutators", verify_commutators(n).map_err(|e| e.to_string())?)?;
    }
    Ok(format!("n = 1..2, {count} identities"))
}

/// Independent count of `dim H^{i,j,k}`: choose how many of each of the four kinds of
/// one-forms (base/fiber, holomorphic/antiholomorphic) appear.
fn kunneth(n: usize, i: i64, j: i64, k: i64) -> usize {
    let n_ = n as i64;
    let mut total = 0;
    for a in 0..=n_ {
        for b in 0..=n_ {
            for c in 0..=n_ {
                for d in 0..=n_ {
                    if (b + d - n_, a + c - n_, a + b - n_) == (i, j, k) {
                        total += [a, b, c, d].iter().map(|&x| binomial(n, x as usize)).product::<usize>();
                    }
                }
            }
        }
    }
    total
}

fn torus_suite() -> Result<String, String> {
    let e = |x: torus::TorusError| x.to_string();
    for n in 1..=2usize {
        let t = TorusFibration::build(n).map_err(e)?;
        report_ok("hexagon", torus::check_hexagon(&t).map_err(e)?)?;
        report_ok("tri-graded", torus::check_tri_graded(&t).map_err(e)?)?;
        report_ok("components", torus::check_components(&t).map_err(e)?)?;
        let abc = torus::check_equivalence_abc(&t).map_err(e)?;
        ensure(abc.a && abc.b && abc.c, format!("n = {n}: equivalence {abc:?}"))?;
        let m: Vec<usize> = (0..=n).map(|j| binomial(n, j)).collect();
        ensure(torus::matsushita_dims(&t) == m, format!("n = {n}: Matsushita dims"))?;

        let c = t.tri_grading();
        let ni = n as i64;
        for i in -ni..=ni {
            for j in -ni..=ni {
                for k in -ni..=ni {
                    ensure(c.dim(i, j, k) == kunneth(n, i, j, k), format!("n = {n}: H^{{{i},{j},{k}}} disagrees with Kunneth"))?;
                }
            }
        }
        for ((p, q), h) in torus::hodge_numbers(n) {
            ensure(h == binomial(2 * n, p as usize) * binomial(2 * n, q as usize), format!("h^{{{p},{q}}}"))?;
        }

        let prod = TorusFibration::product(n).map_err(e)?.tri_grading();
        ensure(torus::check_dodecahedron(&prod), "product model leaves the dodecahedron")?;
        ensure(!torus::attained_vertices(&prod).is_empty(), "no vertex attained")?;
    }
    // frozen from the Kunneth count
    let c = TorusFibration::build(1).map_err(e)?.tri_grading();
    ensure(c.dim(0, 0, 0) == 2 && c.dim(1, -1, 0) == 1 && c.dim(-1, 1, 0) == 1, "n = 1 spot values")?;
    ensure(c.dim(0, 0, 0) + c.dim(1, -1, 0) + c.dim(-1, 1, 0) == 4 && torus::hodge_numbers(1)[&(1, 1)] == 4, "h^{1,1} = 4")?;
    Ok("n = 1, 2; H^{0,0,0} = 2, H^{1,-1,0} = H^{-1,1,0} = 1, h^{1,1} = 4".into())
}

fn serre() -> Result<String, String> {
    let e = |x: torus::TorusError| x.to_string();
    for n in 1..=2 {
        let t = TorusFibration::build(n).map_err(e)?;
        let (s3, refl) = torus::serre_sl3(&t).map_err(e)?;
        ensure(s3.all_pass(), format!("n = {n}: sl3 {:?}", s3.failures().map(|c| &c.relation).collect::<Vec<_>>()))?;
        ensure(refl, format!("n = {n}: reflection identity"))?;
        let (a, b) = torus::lowering_operators_commute(&t).map_err(e)?;
        ensure(a && b, format!("n = {n}: lowering operators"))?;
        let s4 = torus::serre_sl4(&t).map_err(e)?;
        ensure(s4.all_pass(), format!("n = {n}: sl4 {:?}", s4.failures().map(|c| &c.relation).collect::<Vec<_>>()))?;
    }
    let h = weyl_orbit(&hexagon_reflections()).map_err(|x| x.to_string())?.order();
    let t = weyl_orbit(&tri_reflections()).map_err(|x| x.to_string())?.order();
    ensure(h == 6 && t == 24, format!("orders {h}, {t}"))?;
    Ok("sl3 and sl4 at n = 1, 2; orders 6 and 24".into())
}

fn splitting() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for s in 0..100 {
        let (f, g, h) = random_abelian_instance(&mut rng, 3);
        let sp = split_abelian(&f, &g, &h).map_err(|x| format!("abelian {s}: {x}"))?;
        ensure(sp.projection.compose(&g).compose(&sp.section) == GradedOperator::identity(&sp.coker), format!("abelian {s}"))?;
    }
    for s in 0..100 {
        let (f, g, h) = random_derived_instance(&mut rng, 2);
        let sp = split_derived(&f, &g, &h).map_err(|x| format!("derived {s}: {x}"))?;
        ensure(sp.b_to_cone_d.is_quasi_iso() && sp.a_cone_to_c.is_quasi_iso() && sp.cone_model.is_quasi_iso(), format!("derived {s}"))?;
    }
    Ok("100 abelian, 100 derived".into())
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { name: "1 Koszul exactness", limit: Some(Duration::from_secs(10)), run: koszul },
        Criterion { name: "2 BGG round trip", limit: Some(Duration::from_secs(60)), run: round_trip },
        Criterion { name: "3 L(Omega)", limit: None, run: l_of_omega },
        Criterion { name: "4 Weil formulas", limit: None, run: weil },
        Criterion { name: "5 contraction calculus", limit: Some(Duration::from_secs(30)), run: contraction },
        Criterion { name: "6 torus model", limit: None, run: torus_suite },
        Criterion { name: "7 Serre relations", limit: Some(Duration::from_secs(60)), run: serre },
        Criterion { name: "8 splittings", limit: None, run: splitting },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let res = (c.run)();
        let took = start.elapsed();
        let slow = c.limit.is_some_and(|l| took > l);
        let limit = c.limit.map_or("no limit".to_string(), |l| format!("limit {}s", l.as_secs()));
        let (tag, detail) = match &res {
            Ok(d) if !slow => ("PASS", d.clone()),
            Ok(d) => ("FAIL", format!("{d}; too slow")),
            Err(e) => ("FAIL", e.clone()),
        };
        if tag == "FAIL" {
            failed += 1;
        }
        println!("{tag} {:<24} {:>8.2}s ({limit}) {detail}", c.name, took.as_secs_f64());
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
