//! Group words as truncated power series.
//!
//! The Magnus map sends the i-th generator to 1 + X_i and inverses to
//! geometric series, all with coefficients in F_p and monomials cut off
//! above a cap. The lowest nonzero homogeneous part of image - 1 is the
//! initial form of the word; its degree says how deep the word sits in
//! the filtration.

use koszulkit::ncpoly::{initial_form, magnus_expand, parse_word, Word};
use koszulkit::{fpfield::PrimeField, Error};

fn main() -> koszulkit::Result<()> {
    let f3 = PrimeField::new(3)?;

    let w = parse_word("comm(x1, x2)")?;
    let poly = magnus_expand(&w, f3, 2, 3)?;
    println!("comm(x1, x2) expands to  {poly}");
    let (deg, part) = initial_form(&w, f3, 2, 3)?;
    println!("initial form: degree {deg}, coefficients {:?}", part.coeffs);

    // an inverse becomes a geometric series
    let w = parse_word("inv(x1)")?;
    println!("\ninv(x1) expands to       {}", magnus_expand(&w, f3, 1, 4)?);

    // cubing a commutator kills the degree-2 part mod 3, so the word
    // drops deeper into the filtration than the cap 4 can see
    let w = Word::power(Word::commutator(Word::Gen(0), Word::Gen(1)), 3);
    match initial_form(&w, f3, 2, 4) {
        Err(Error::TrivialBeyondCap) => {
            println!("\npow(comm(x1, x2), 3) at cap 4: trivial up to the cap, not certified")
        }
        other => panic!("expected a refusal, got {other:?}"),
    }
    let (deg, _) = initial_form(&w, f3, 2, 6)?;
    println!("pow(comm(x1, x2), 3) at cap 6: initial form has degree {deg}");

    Ok(())
}
