//! Numerical invariants of the group families.
//!
//! d and r count generators and relations; the abelianization splits into
//! a free part and cyclic torsion factors; theta_centre_rank counts
//! generators the orientation fixes; t1 and f1 grade the relation module.

use koszulkit::progroup::{GroupInvariants, GroupSpec};

fn row(name: &str, inv: &GroupInvariants) {
    println!(
        "{name:34} d={} r={} free={} torsion={:?} centre={} t1={} f1={}",
        inv.d,
        inv.r,
        inv.abelianization_free_rank,
        inv.abelianization_torsion,
        inv.theta_centre_rank,
        inv.t1,
        inv.f1
    );
}

fn main() -> koszulkit::Result<()> {
    row("free d=3 p=2", &GroupSpec::free(2, 3)?.invariants());
    row("one-relator d=2 q=3", &GroupSpec::demushkin(3, 2, 3)?.invariants());
    row("one-relator d=4 q=9", &GroupSpec::demushkin(3, 4, 9)?.invariants());
    row("one-relator d=6 q=5", &GroupSpec::demushkin(5, 6, 5)?.invariants());
    row("theta-abelian d=2 q=3", &GroupSpec::theta_abelian(3, 2, 3)?.invariants());
    row("theta-abelian d=4 q=4", &GroupSpec::theta_abelian(2, 4, 4)?.invariants());

    let inner = GroupSpec::demushkin(3, 2, 3)?;
    row("fibre over one-relator, c=2", &GroupSpec::fibre_product(inner, 2)?.invariants());

    let a = GroupSpec::free(3, 2)?;
    let b = GroupSpec::theta_abelian(3, 2, 3)?;
    row("free product", &GroupSpec::free_product(a, b)?.invariants());

    // one-relator groups always have one torsion factor of order q and
    // free rank d - 1
    for (p, d, q) in [(3u64, 2usize, 3u64), (3, 4, 9), (5, 2, 25), (2, 2, 4)] {
        let inv = GroupSpec::demushkin(p, d, q)?.invariants();
        assert_eq!(inv.abelianization_free_rank, d - 1);
        assert_eq!(inv.abelianization_torsion, vec![q]);
    }
    println!("\none-relator abelianizations are Z_p^(d-1) x Z/q throughout");

    Ok(())
}
