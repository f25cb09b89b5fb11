use lagbgg::bgg::{check_duality, check_equivalence, default_l_window, functor_l, koszul_augmentation, koszul_complex, sample::random_module, ExtModuleComplex};
use lagbgg::forms_calculus::{self, Report};
use lagbgg::gradedcat::sample::{random_abelian_instance, random_derived_instance};
use lagbgg::gradedcat::{cone, split_abelian, split_derived};
use lagbgg::serre::{hexagon_reflections, tri_reflections, weyl_orbit};
use lagbgg::torus_model::{self as torus, TorusFibration};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const SUITES: [(&str, usize, usize); 11] = [
    ("koszul", 1, 4),
    ("bgg-roundtrip", 1, 3),
    ("weil", 1, 3),
    ("contraction", 1, 2),
    ("commutators", 1, 2),
    ("serre-sl3", 1, 2),
    ("serre-sl4", 1, 2),
    ("hexagon", 1, 3),
    ("dodecahedron", 1, 3),
    ("hl-all", 1, 2),
    ("splitting", 1, 4),
];

pub enum SuiteError {
    Usage(String),
    Failed(String),
}

pub fn n_range(suite: &str) -> Option<(usize, usize)> {
    SUITES.iter().find(|s| s.0 == suite).map(|s| (s.1, s.2))
}

fn fail<E: std::fmt::Display>(e: E) -> SuiteError {
    SuiteError::Failed(e.to_string())
}

fn torus_model(n: usize) -> Result<TorusFibration, SuiteError> {
    TorusFibration::build(n).map_err(fail)
}

pub fn run(suite: &str, n: usize) -> Result<Report, SuiteError> {
    let (lo, hi) = n_range(suite).ok_or_else(|| SuiteError::Usage(format!("unknown suite '{suite}'")))?;
    if n < lo || n > hi {
        return Err(SuiteError::Usage(format!("suite '{suite}' supports n in {lo}..={hi}")));
    }
    let mut rep = Report::default();
    match suite {
        "koszul" => {
            let w = (-(n as i64) - 1, n as i64 + 1);
            let k = koszul_complex(n, w);
            let h = k.homology();
            rep.push(
                format!("Koszul homology is one-dimensional at (0, 0) on window {w:?}"),
                h.total_dim() == 1 && h.dim(&[0, 0]) == 1,
            );
            rep.push("cone of the augmentation is exact", cone(&koszul_augmentation(n, w)).is_exact());
            let omega = ExtModuleComplex::exterior_algebra(n);
            let l = functor_l(&omega).truncate(default_l_window(&omega));
            let hl = l.homology();
            rep.push("L(Omega) has homology only at (n, -n)", hl.total_dim() == 1 && hl.dim(&[n as i64, -(n as i64)]) == 1);
        }
        "bgg-roundtrip" => {
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            for s in 0..10 {
                let m = random_module(&mut rng, n, 24, 2);
                rep.push(format!("unit is a quasi-isomorphism (sample {s}, dim {})", m.total_dim()), check_equivalence(&m).map_err(fail)?);
                rep.push(format!("duality (sample {s})"), check_duality(&m));
            }
        }
        "weil" => rep.extend(forms_calculus::verify_weil_formulas(n).map_err(fail)?),
        "contraction" => {
            rep.extend(forms_calculus::verify_weil_exchange_sigma(n).map_err(fail)?);
            rep.extend(forms_calculus::verify_weil_exchange_omega(n).map_err(fail)?);
        }
        "commutators" => rep.extend(forms_calculus::verify_commutators(n).map_err(fail)?),
        "serre-sl3" => {
            let t = torus_model(n)?;
            let (serre, refl) = torus::serre_sl3(&t).map_err(fail)?;
            for c in serre.checks {
                rep.push(c.relation, c.passed);
            }
            rep.push("(Ad w1 Ad w2 Ad w1)(omega2) = sigma1", refl);
            let (a, b) = torus::lowering_operators_commute(&t).map_err(fail)?;
            rep.push("[Y_omega2, Y_sigma1] = 0", a);
            rep.push("[Y_lambda, Y_sigma1] = 0", b);
            rep.push("hexagon reflections generate 6 elements", weyl_orbit(&hexagon_reflections()).map_err(fail)?.order() == 6);
        }
        "serre-sl4" => {
            let t = torus_model(n)?;
            for c in torus::serre_sl4(&t).map_err(fail)?.checks {
                rep.push(c.relation, c.passed);
            }
            rep.push("tri-graded reflections generate 24 elements", weyl_orbit(&tri_reflections()).map_err(fail)?.order() == 24);
        }
        "hexagon" => rep.extend(torus::check_hexagon(&torus_model(n)?).map_err(fail)?),
        "dodecahedron" => {
            let c = TorusFibration::product(n).map_err(fail)?.tri_grading();
            rep.push("H^{i,j,k} vanishes outside the rhombic dodecahedron", torus::check_dodecahedron(&c));
            let hit = torus::attained_vertices(&c).len();
            rep.push(format!("vertices attained by the product model: {hit} of 14"), hit > 0);
        }
        "hl-all" => {
            let t = torus_model(n)?;
            rep.extend(torus::check_tri_graded(&t).map_err(fail)?);
            let e = torus::check_equivalence_abc(&t).map_err(fail)?;
            rep.push("(a) G_{i,k} ~ G_{k,i}", e.a);
            rep.push("(b) direct sums over i agree", e.b);
            rep.push("(c) sigma1^k isomorphisms", e.c);
            rep.extend(torus::check_components(&t).map_err(fail)?);
        }
        "splitting" => {
            let mut rng = ChaCha8Rng::seed_from_u64(100 + n as u64);
            let mut ok = true;
            for _ in 0..20 {
                let (f, g, h) = random_abelian_instance(&mut rng, n);
                ok &= split_abelian(&f, &g, &h).is_ok();
            }
            rep.push("abelian splittings (20 instances)", ok);
            let mut ok = true;
            for _ in 0..20 {
                let (f, g, h) = random_derived_instance(&mut rng, n.min(3));
                ok &= split_derived(&f, &g, &h).is_ok();
            }
            rep.push("derived splittings (20 instances)", ok);
        }
        _ => unreachable!("suite names are checked above"),
    }
    Ok(rep)
}
