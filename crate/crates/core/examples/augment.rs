//! Augmentation along T* from a chosen start, compared with brute force.
//!
//! `cargo run --example augment [FILE]`; the default is the instance
//! `x1 - x2 + 2 x3 = 3` with cost `x1 + x2 + x3` and `x3` in `[0, 3]`.

use mipaug::instance::{parse_instance, IntBox, MipInstance};
use mipaug::{oracle, solver, testset};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let inst = match std::env::args().nth(1) {
        Some(path) => parse_instance(&std::fs::read_to_string(path)?)?,
        None => MipInstance::single_row(&[1, -1], &[2], 3, Some(IntBox::new(&[0], &[3])))?
            .with_cost(&[1, 1, 1]),
    };
    let dirs = testset::build_t_star(&inst, testset::DEFAULT_GSTAR_LIMIT)?;
    let oracle_opt = oracle::brute_force_optimum(&inst)?;
    let starts = oracle::enumerate_basic_integer_solutions(&inst)?;
    for x0 in &starts {
        let (x, trace) = solver::augment(&inst, x0, &dirs)?;
        println!("from {x0} (obj {}):", inst.objective(x0));
        print!("{trace}");
        println!("  -> {x}, obj {}", inst.objective(&x));
        assert_eq!(inst.objective(&x), oracle_opt.value);
    }
    println!("brute-force optimum {} at {:?}", oracle_opt.value, oracle_opt.argmins.iter().map(ToString::to_string).collect::<Vec<_>>());
    Ok(())
}
