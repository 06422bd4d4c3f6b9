//! Hilbert bases of pointed cones and conic Graver bases of arbitrary ones,
//! checked by bounded enumeration.

use mipaug::cone::{conic_graver, extreme_rays, hilbert_basis, parse_cone};
use mipaug::oracle::verify_hilbert;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let wedge = parse_cone("ge 0 -1\nle 1 -1\n")?;
    let rays = extreme_rays(&wedge);
    println!("wedge {wedge}");
    println!("  extreme rays {:?}", rays.rays.iter().map(ToString::to_string).collect::<Vec<_>>());
    for h in hilbert_basis(&wedge)?.gens {
        println!("  hilbert {h}");
    }

    let fan = parse_cone("ge 2 -1\nge 0 1\n")?;
    println!("cone {fan}");
    for h in hilbert_basis(&fan)?.gens {
        println!("  hilbert {h}");
    }

    // A half-plane is not pointed; its conic Graver base still exists.
    let half = parse_cone("le 1 1\n")?;
    let graver = conic_graver(&half);
    println!("half-plane {half}");
    for g in &graver {
        println!("  graver {g}");
    }
    let report = verify_hilbert(&half, &graver, 4);
    println!("  bounded check passed: {}", report.passed());
    Ok(())
}
