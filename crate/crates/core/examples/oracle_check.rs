//! Cross-checks T* against brute force: the double test set property and
//! the optimum reached by augmentation, on a file or a built-in instance.

use mipaug::instance::parse_instance;
use mipaug::{oracle, solver, testset};

const DEFAULT: &str = "\
dims 2 2 1
row 1 -1 2 2
rhs 1
cost 1 1 -1 0
box 0 0 2 2
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => DEFAULT.to_owned(),
    };
    let inst = parse_instance(&text)?;
    if let Some(ray) = solver::descent_ray(&inst) {
        println!("unbounded along {ray}");
        return Ok(());
    }
    let tstar = testset::build_t_star(&inst, testset::DEFAULT_GSTAR_LIMIT)?;
    let report = oracle::verify_double_test_set(&inst, &tstar)?;
    println!("{} basic-integer solutions in the box", report.solutions.len());
    for check in &report.checks {
        println!("{}: {}{}", check.name, if check.pass { "pass" } else { "FAIL" },
            check.witness.as_deref().map(|w| format!(" at {w}")).unwrap_or_default());
    }
    if let Some(x0) = solver::find_initial_solution(&inst)? {
        let (x, trace) = solver::augment(&inst, &x0, &tstar)?;
        let opt = report.optimum.expect("feasible");
        println!("augment: {} steps to {x}, objective {} (oracle {})", trace.steps.len(), inst.objective(&x), opt.value);
    }
    Ok(())
}
