//! Obstruction certificates for orientation lifts.
//!
//! Each generator's dual extends to a crossed homomorphism with p-adic
//! values; evaluating every extension on every relation fills a table.
//! A nonzero entry certifies that the orientation cannot lift, and the
//! grid pins down which dual on which relation is to blame.

use koszulkit::cocycle::{cyclotomic_obstruction, weierstrass_report, PadicApprox};
use koszulkit::fpfield::PrimeField;
use koszulkit::ncpoly::Word;
use koszulkit::progroup::{GroupPresentation, GroupSpec};
use koszulkit::Error;

fn main() -> koszulkit::Result<()> {
    // a central cube beside a commutator: the classic blocked lift
    let relation = Word::product(vec![
        Word::power(Word::Gen(2), 3),
        Word::commutator(Word::Gen(0), Word::Gen(1)),
    ]);
    let pres = GroupPresentation::new(
        PrimeField::new(3)?,
        vec!["x".into(), "y".into(), "z".into()],
        vec![relation],
        vec![1, 1, 1],
    )?;
    let table = cyclotomic_obstruction(&pres, 4)?;
    println!("{}", table.summary());
    for (i, row) in table.rows.iter().enumerate() {
        let line: Vec<String> =
            (0..table.columns.len()).map(|j| table.entry(i, j).to_string()).collect();
        println!("  {row:3}  {}", line.join("  "));
    }

    // the canonical relations of the built-in families always pass
    println!();
    for (name, spec) in [
        ("one-relator d=2 q=3", GroupSpec::demushkin(3, 2, 3)?),
        ("theta-abelian d=3 q=4", GroupSpec::theta_abelian(2, 3, 4)?),
    ] {
        let table = cyclotomic_obstruction(&spec.presentation(), 8)?;
        println!("{name}: {}", table.summary());
    }

    // orientations with torsion values are refused, not mis-scored
    let spec = GroupSpec::demushkin(2, 3, 2)?;
    match cyclotomic_obstruction(&spec.presentation(), 8) {
        Err(Error::ModelOutOfScope(msg)) => println!("\nd=3 q=2 at p=2: {msg}"),
        other => panic!("expected a refusal, got {other:?}"),
    }

    // polynomial relation words: value of f at q decides, with a caveat
    // for repeated factors
    println!();
    let q = PadicApprox::new(3, 6, 3)?;
    let linear = [q.neg(), PadicApprox::one(3, 6)?]; // X - 3
    let report = weierstrass_report(&linear, &q)?;
    println!("X - 3 at 3:     value {}, {}", report.value, report.note);
    let square = [q.mul(&q)?, q.neg().add(&q.neg())?, PadicApprox::one(3, 6)?]; // (X - 3)^2
    let report = weierstrass_report(&square, &q)?;
    println!("(X - 3)^2 at 3: value {}, {}", report.value, report.note);

    Ok(())
}
