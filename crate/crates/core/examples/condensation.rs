//! Condense the diagonal boson of Ising ⊠ conj(Ising).

use modext::condensation::condense;
use modext::constructors::{ising_mtc, toric_code};
use modext::equivalence::find_equivalence;
use modext::{conjugate, deligne_product, is_modular, Phase};

fn main() -> modext::Result<()> {
    let ising = ising_mtc(Phase::new(1, 16))?;
    let host = deligne_product(&ising, &conjugate(&ising));
    let boson = (0..host.rank())
        .find(|&a| host.is_invertible(a) && a != host.unit() && host.twist(a).is_zero())
        .expect("diagonal fermion pair");
    println!("host rank {}, condensing {}", host.rank(), host.label(boson));

    let result = condense(&host, &[boson])?;
    println!("{}", result.data);
    println!("modular: {}", is_modular(&result.data).is_modular);
    println!("equivalent to the toric code: {}", find_equivalence(&result.data, &toric_code(), &[])?.is_some());
    for (a, lift) in result.lifts.iter().enumerate() {
        println!("  {} lifts orbit {:?}", result.data.label(a), lift.orbit.iter().map(|&x| host.label(x)).collect::<Vec<_>>());
    }
    Ok(())
}
