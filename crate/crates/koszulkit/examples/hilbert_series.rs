//! Graded dimensions of the standard quadratic algebras.
//!
//! Builds the tensor, symmetric, exterior, dual-number, and one-relator
//! dual algebras over F_3 and prints dim A_n for n up to 8.

use koszulkit::fpfield::PrimeField;
use koszulkit::quadalg::{demushkin_dual, dual_numbers, exterior, symmetric, tensor_algebra};

fn main() -> koszulkit::Result<()> {
    let field = PrimeField::new(3)?;
    let cap = 8;

    let algebras = vec![
        ("tensor, 2 generators", tensor_algebra(field, 2)?),
        ("symmetric, 3 generators", symmetric(field, 3)?),
        ("exterior, 3 generators", exterior(field, 3)?),
        ("dual numbers, 3 generators", dual_numbers(field, 3)?),
        ("one-relator dual, 4 generators", demushkin_dual(field, 4)?),
    ];

    println!("graded dimensions over F_3, degrees 0..={cap}\n");
    for (name, a) in &algebras {
        let dims = a.hilbert(cap)?.dims;
        println!("{name:32} {dims:?}");
    }

    // the exterior algebra dies at the generator count, the symmetric
    // algebra grows like the binomial column, the one-relator dual
    // satisfies dim A_n = 4 dim A_{n-1} - dim A_{n-2}
    let d = algebras[4].1.hilbert(cap)?.dims;
    for n in 2..=cap {
        assert_eq!(d[n], 4 * d[n - 1] - d[n - 2]);
    }
    println!("\nthe one-relator dual obeys dim A_n = 4 dim A_(n-1) - dim A_(n-2)");

    Ok(())
}
