//! Break a Klein-group symmetry of a twisted double down to Z2.

use modext::condensation::break_symmetry;
use modext::constructors::enumerate_pointed_extensions;
use modext::validate_extension;

fn main() -> modext::Result<()> {
    let klein = enumerate_pointed_extensions(&[2, 2])?;
    println!("{} pointed extensions of Rep(Z2 x Z2)", klein.len());
    for (i, w) in klein.iter().enumerate() {
        let broken = break_symmetry(w, &[vec![1, 0]])?;
        println!(
            "{i}: rank {} -> rank {} over base of rank {}, valid = {}",
            w.bulk.rank(),
            broken.bulk.rank(),
            broken.base.rank(),
            validate_extension(&broken).passed
        );
    }
    Ok(())
}
