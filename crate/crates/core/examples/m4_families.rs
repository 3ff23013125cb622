//! The projections of M4 with diagonal 1/2 and the real extreme segments.

use std::f64::consts::FRAC_PI_3;

use diagonal_homotopy::error::Result;
use diagonal_homotopy::linalg::{Field, C64};
use diagonal_homotopy::projection_paths::{m4_family, m4_real_extreme_path, M4Family};

fn main() -> Result<()> {
    let xi = C64::from_polar(1.0, FRAC_PI_3);
    let one = C64::new(1.0, 0.0);
    let t = 0.5 / 3f64.sqrt();
    let families = [
        ("full", M4Family::Full { t: [t, t, t], xi: [xi, one, xi.conj()], upper_sign: 1.0 }),
        ("four-null", M4Family::FourNull { variant: 1, t: [0.3, 0.4], xi: [one, xi, one] }),
        ("eight-null", M4Family::EightNull { variant: 2, xi: [xi, one] }),
    ];
    for (name, fam) in &families {
        let p = m4_family(fam, Field::Complex)?;
        let zeros = p.data().iter().filter(|z| z.norm() == 0.0).count();
        println!("{name:>10}: residual {:.1e}, {zeros} zero entries", p.projection_residual());
    }

    let full = M4Family::Full { t: [t, t, t], xi: [one; 3], upper_sign: 1.0 };
    println!("real full family: {}", m4_family(&full, Field::Real).unwrap_err());

    let path = m4_real_extreme_path([1.0, 1.0, 1.0, -1.0], 32)?;
    let (start, end) = (path.start().unwrap(), path.end().unwrap());
    println!("extreme segment: {} samples", path.sample_count());
    println!("  first row at 0:    {:?}", start.row(0).iter().map(|z| z.re).collect::<Vec<_>>());
    println!("  first row at pi/2: {:?}", end.row(0).iter().map(|z| z.re).collect::<Vec<_>>());
    Ok(())
}
