//! Extensions of sVect ⊠ TC form a torsor over the sixteenfold way.

use modext::constructors::{mext_svect_catalog, mext_svect_toric_catalog};
use modext::extensions::torsor_check;

fn main() -> modext::Result<()> {
    let ext_c = mext_svect_toric_catalog();
    let ext_e = mext_svect_catalog();
    let report = torsor_check(&ext_c, &ext_e)?;
    println!("{report}");
    Ok(())
}
