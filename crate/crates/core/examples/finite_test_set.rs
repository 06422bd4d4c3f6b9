//! Completion procedure: from a basic point and an integer step `g`, walk
//! circuits to every basic point of the target slice. Repeating this from
//! every basic-integer solution gives a finite test set.

use mipaug::exact::IntVec;
use mipaug::instance::{IntBox, MipInstance, MixedVec};
use mipaug::{linalg, oracle, solver};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let inst = MipInstance::single_row(&[1, -1], &[2], 3, Some(IntBox::new(&[0], &[3])))?
        .with_cost(&[1, 1, 1]);
    let circuits = linalg::circuits(&inst);
    let x0 = MixedVec::from_i64(&[0, 1], &[2]);
    let g = IntVec::from_i64(&[-1]);
    println!("completion from {x0} with g = {g}:");
    for d in solver::completion_procedure(&inst, &x0, &g, &circuits)? {
        println!("  {d} reaching {}", x0.add(&d));
    }

    let set = solver::build_finite_test_set(&inst, 12)?;
    println!("finite test set ({} directions):", set.len());
    for d in &set {
        println!("  {d}");
    }
    let best = oracle::brute_force_optimum(&inst)?.value;
    for x in oracle::enumerate_basic_integer_solutions(&inst)? {
        match solver::single_move_improvement(&inst, &x, &set) {
            Some(y) => println!("{x} improves to {y}"),
            None => println!("{x} has no improving move (objective {}, optimum {best})", inst.objective(&x)),
        }
    }
    Ok(())
}
