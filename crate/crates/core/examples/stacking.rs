//! Stack Ising-type extensions and watch central charges add.

use modext::constructors::mext_svect_catalog;
use modext::extensions::{extension_equivalence, extension_identity, extension_inverse};
use modext::stack;

fn main() -> modext::Result<()> {
    let catalog = mext_svect_catalog();
    let ising = &catalog[1];
    let mut acc = extension_identity(&ising.base)?;
    for step in 1..=16 {
        acc = stack(&acc, ising)?;
        let slot = catalog.iter().position(|w| matches!(extension_equivalence(&acc, w), Ok(Some(_))));
        println!("ising^{step:<2}  c = {:>5}  catalog entry {slot:?}", acc.central_charge()?.c.to_string());
    }
    let back = stack(ising, &extension_inverse(ising))?;
    let id = extension_identity(&ising.base)?;
    println!("ising stacked with its inverse is trivial: {}", extension_equivalence(&back, &id)?.is_some());
    Ok(())
}
