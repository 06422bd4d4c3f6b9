//! The integer generator sets G* and G^{A,b}, their lifts T*, and the
//! infinity-norm bound, for the four small instances shipped as fixtures.

use mipaug::instance::parse_instance;
use mipaug::testset::{self, DEFAULT_GSTAR_LIMIT};

const INSTANCES: &[(&str, &str)] = &[
    ("raymond", include_str!("../tests/fixtures/raymond.mip")),
    ("kw", include_str!("../tests/fixtures/kw.mip")),
    ("lone", include_str!("../tests/fixtures/lone.mip")),
    ("unpointed", include_str!("../tests/fixtures/unpointed.mip")),
];

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (name, text) in INSTANCES {
        let inst = parse_instance(text)?;
        println!("== {name}");
        let gstar = testset::build_g_star_with_cones(&inst, DEFAULT_GSTAR_LIMIT)?;
        for (g, cone) in &gstar {
            println!("  G*  {g}  from {cone}");
        }
        let gab = testset::build_g_ab(&inst)?;
        println!("  G^(A,b) = {}", gab.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "));
        let tstar = testset::build_t_star(&inst, DEFAULT_GSTAR_LIMIT)?;
        for t in &tstar {
            println!("  T*  {}  (basis {}, generator {})", t.vec, t.basis, t.gen);
        }
        let bound = testset::check_norm_bound(&inst, &tstar);
        println!(
            "  norm bound: {} violations, max subdeterminant {}",
            bound.violations().len(),
            bound.max_subdeterminant
        );
    }
    Ok(())
}
