//! The sixteen minimal modular extensions of sVect and their stacking group.

use modext::constructors::mext_svect_catalog;
use modext::extensions::group_table;
use modext::validate_extension;

fn main() -> modext::Result<()> {
    let catalog = mext_svect_catalog();
    for (i, w) in catalog.iter().enumerate() {
        let c = w.central_charge()?.c;
        let ok = validate_extension(w).passed;
        println!("{i:2}  rank {}  c = {c}  valid = {ok}", w.bulk.rank());
    }
    let table = group_table(&catalog)?;
    println!("stacking group: Z_{:?}, {} stacks checked", table.invariant_factors, table.stacks.len());
    Ok(())
}
