//! Dimensions of the filtration quotients.
//!
//! zassenhaus_dims(n) returns dim of the i-th layer of the mod-p
//! filtration for i = 1..=n. Closed forms exist for free groups,
//! theta-abelian groups, and fibre products over them; anything else is
//! refused rather than approximated.

use koszulkit::progroup::GroupSpec;
use koszulkit::Error;

fn main() -> koszulkit::Result<()> {
    let free = GroupSpec::free(2, 2)?;
    println!("free on 2 generators, p = 2:   {:?}", free.zassenhaus_dims(10)?);
    let free3 = GroupSpec::free(3, 2)?;
    println!("free on 2 generators, p = 3:   {:?}", free3.zassenhaus_dims(10)?);

    // theta-abelian layers live at the powers of p weighted by q
    let ta = GroupSpec::theta_abelian(2, 3, 4)?;
    println!("theta-abelian d=3 q=4, p = 2:  {:?}", ta.zassenhaus_dims(8)?);

    // each fibre generator adds one to every occupied layer
    let inner = GroupSpec::theta_abelian(2, 3, 4)?;
    let fp = GroupSpec::fibre_product(inner, 2)?;
    println!("fibre product with c = 2:      {:?}", fp.zassenhaus_dims(8)?);

    // free layers assemble the envelope: restricted monomials with
    // exponents below p multiply out to d^n in each degree
    let layers = free.zassenhaus_dims(6)?;
    let mut series = vec![0i64; 7];
    series[0] = 1;
    for (idx, &l) in layers.iter().enumerate() {
        let i = idx + 1;
        for _ in 0..l {
            let prev = series.clone();
            for n in i..=6 {
                series[n] += prev[n - i];
            }
        }
    }
    println!("\nenvelope series from the free layers: {series:?}");
    assert_eq!(series, vec![1, 2, 4, 8, 16, 32, 64]);

    let demushkin = GroupSpec::demushkin(3, 2, 3)?;
    match demushkin.zassenhaus_dims(8) {
        Err(Error::UnsupportedSpec(msg)) => println!("\none-relator groups: {msg}"),
        other => panic!("expected a refusal, got {other:?}"),
    }

    Ok(())
}
