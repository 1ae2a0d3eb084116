//! Write a catalog to disk, read it back and compare.

use modext::constructors::mext_svect_catalog;
use modext::extensions::extension_equivalence;
use modext::io::{read_witness_dir, witness_to_string, write_witness_dir};

fn main() -> modext::Result<()> {
    let dir = std::env::temp_dir().join("modext-io-roundtrip");
    std::fs::create_dir_all(&dir)?;
    let catalog = mext_svect_catalog();
    let paths = write_witness_dir(&dir, &catalog)?;
    println!("wrote {} files to {}", paths.len(), dir.display());

    for ((path, w), original) in read_witness_dir(&dir)?.iter().zip(&catalog) {
        let same_text = witness_to_string(w) == witness_to_string(original);
        let equivalent = extension_equivalence(w, original)?.is_some();
        println!("{}: identical = {same_text}, equivalent = {equivalent}", path.display());
    }
    Ok(())
}
