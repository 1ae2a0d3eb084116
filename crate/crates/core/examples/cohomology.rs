//! Group cohomology H³(G, U(1)) and the twisted-double dictionary.

use modext::cohomology::{cocycle_class_of_extension, h3_classes, restrict_cocycle, standard_cocycle_cyclic};
use modext::constructors::twisted_doubles_cyclic;

fn main() -> modext::Result<()> {
    for orders in [vec![2], vec![3], vec![4], vec![2, 2]] {
        let h = h3_classes(&orders)?;
        println!("H^3({orders:?}) has invariant factors {:?}, order {}", h.invariant_factors, h.order());
    }

    let omega = standard_cocycle_cyclic(4, 1)?;
    let sub = restrict_cocycle(&omega, &[vec![2]])?;
    println!("omega_1 on Z4 restricts to class {:?} on Z2", h3_classes(&[2])?.class_of(&sub)?);

    for w in twisted_doubles_cyclic(3)? {
        println!("D^omega(Z3) with c = {} carries cocycle label {}", w.central_charge()?.c, cocycle_class_of_extension(&w)?);
    }
    Ok(())
}
