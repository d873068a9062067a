//! The duality between cohomology and the graded group algebra.
//!
//! For the families in this crate, the quadratic dual of the cohomology
//! ring presents the graded algebra of the group filtration. The check
//! compares relation subspaces exactly and graded dimensions up to a cap.

use koszulkit::progroup::GroupSpec;

fn check(name: &str, spec: &GroupSpec) -> koszulkit::Result<()> {
    let h = spec.cohomology_ring()?;
    let gr = spec.gr_algebra()?;
    let report = spec.verify_koszul_duality(6)?;
    println!("{name}");
    println!("  cohomology dims {:?}", h.hilbert(6)?.dims);
    println!("  gr dims         {:?}", gr.hilbert(6)?.dims);
    println!(
        "  dual relations match gr: {}, dims agree to degree {}",
        report.relation_subspaces_equal, report.dims_equal_up_to
    );
    println!();
    Ok(())
}

fn main() -> koszulkit::Result<()> {
    check("free on 3 generators over F_2", &GroupSpec::free(2, 3)?)?;
    check("one-relator, d = 2, q = 3", &GroupSpec::demushkin(3, 2, 3)?)?;
    check("one-relator, d = 4, q = 5", &GroupSpec::demushkin(5, 4, 5)?)?;
    check("theta-abelian, d = 3, q = 9", &GroupSpec::theta_abelian(3, 3, 9)?)?;
    let inner = GroupSpec::demushkin(3, 2, 3)?;
    check("fibre product over the d = 2 one-relator group", &GroupSpec::fibre_product(inner, 1)?)?;
    Ok(())
}
