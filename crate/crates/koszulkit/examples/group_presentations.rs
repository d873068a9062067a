//! Group descriptions and the presentations they unfold to.
//!
//! A spec names a family (free, one-relator, theta-abelian, fibre product,
//! free product); `presentation()` turns it into labelled generators,
//! relation words, and the orientation exponents theta. Specs serialize to
//! the JSON schema in docs/formats.md.

use koszulkit::progroup::GroupSpec;

fn show(name: &str, spec: &GroupSpec) {
    let pres = spec.presentation();
    println!("{name}");
    println!("  generators {:?}", pres.labels);
    println!("  theta      {:?}", pres.theta);
    for r in &pres.relations {
        println!("  relation   {r}");
    }
    println!();
}

fn main() -> koszulkit::Result<()> {
    show("free on 2 generators over F_3", &GroupSpec::free(3, 2)?);
    show("one-relator, d = 2, q = 3", &GroupSpec::demushkin(3, 2, 3)?);
    show("one-relator, d = 4, q = 9", &GroupSpec::demushkin(3, 4, 9)?);
    show("theta-abelian, d = 3, q = 4", &GroupSpec::theta_abelian(2, 3, 4)?);

    let inner = GroupSpec::demushkin(3, 2, 3)?;
    show("fibre product, one new central generator", &GroupSpec::fibre_product(inner, 1)?);

    let a = GroupSpec::demushkin(5, 2, 5)?;
    let b = GroupSpec::theta_abelian(5, 2, 5)?;
    show("free product of the two families", &GroupSpec::free_product(a, b)?);

    // the JSON form round-trips
    let spec = GroupSpec::demushkin(3, 4, 9)?;
    let text = serde_json::to_string_pretty(&spec.to_json())?;
    println!("spec as JSON:\n{text}");
    let back = GroupSpec::from_json(&serde_json::from_str(&text)?)?;
    assert_eq!(back.presentation().relations, spec.presentation().relations);
    println!("\nround trip through JSON preserves the presentation");

    Ok(())
}
