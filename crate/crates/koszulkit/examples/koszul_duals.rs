//! Koszul duals: the involution and the product identities.
//!
//! The dual of a quadratic algebra keeps the generators and takes the
//! annihilator of the relation span under the pairing that flips the two
//! tensor factors. Dualizing twice gives the original relations back, and
//! duals swap direct products with free products and symmetric tensor
//! products with skew ones.

use koszulkit::fpfield::{PrimeField, Subspace};
use koszulkit::quadalg::{exterior, symmetric, QuadraticPresentation};

fn main() -> koszulkit::Result<()> {
    let field = PrimeField::new(3)?;

    // exterior and symmetric algebras are dual to each other
    let ext = exterior(field, 3)?;
    let sym = symmetric(field, 3)?;
    let dual = ext.koszul_dual();
    println!(
        "dual of the exterior algebra is the symmetric algebra: {}",
        dual.relations().equals(sym.relations())?
    );
    println!("  exterior relations: {} of ambient 9", ext.relations().dim());
    println!("  symmetric relations: {} of ambient 9", sym.relations().dim());

    // the involution
    let again = dual.koszul_dual();
    println!(
        "dualizing twice returns the original: {}",
        again.relations().equals(ext.relations())?
    );

    // a hand-made presentation: F_3<x,y> with the single relation xy - 2 yx
    let span = Subspace::from_spanning(field, 4, &[vec![0, 1, 0, 1]])?;
    let a = QuadraticPresentation::new(field, vec!["x".into(), "y".into()], span)?;
    println!("\nquantum plane at q = 2 over F_3");
    println!("  dims     {:?}", a.hilbert(6)?.dims);
    println!("  dual dims {:?}", a.koszul_dual().hilbert(6)?.dims);

    // products dualize crosswise
    let b = exterior(field, 2)?;
    let lhs = a.direct_product(&b)?.koszul_dual();
    let rhs = a.koszul_dual().free_product(&b.koszul_dual())?;
    println!(
        "\n(A direct B)^dual = A^dual free B^dual: {}",
        lhs.relations().equals(rhs.relations())?
    );
    let lhs = a.sym_tensor(&b)?.koszul_dual();
    let rhs = a.koszul_dual().skew_tensor(&b.koszul_dual())?;
    println!(
        "(A sym B)^dual = A^dual skew B^dual: {}",
        lhs.relations().equals(rhs.relations())?
    );

    Ok(())
}
