//! Acceptance gate: the headline guarantees of the crate, one test per
//! claim, exact equality throughout. Each test prints a single PASS line;
//! a failure names the first broken case.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use koszulkit::cocycle::cyclotomic_obstruction;
use koszulkit::fpfield::{PrimeField, Subspace};
use koszulkit::koszul::{bar_tor, hilbert_criterion};
use koszulkit::ncpoly::Word;
use koszulkit::progroup::{cohomology_from_presentation, GroupPresentation, GroupSpec};
use koszulkit::quadalg::{
    demushkin_dual, exterior, symmetric, tensor_algebra, QuadraticPresentation,
};

fn f(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut acc = 1usize;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn random_presentation(rng: &mut ChaCha8Rng, p: u64, d: usize) -> QuadraticPresentation {
    let count = rng.gen_range(0..=d * d);
    let rows: Vec<Vec<u64>> = (0..count)
        .map(|_| (0..d * d).map(|_| rng.gen_range(0..p)).collect())
        .collect();
    let span = Subspace::from_spanning(f(p), d * d, &rows).unwrap();
    let labels = (1..=d).map(|k| format!("x{k}")).collect();
    QuadraticPresentation::new(f(p), labels, span).unwrap()
}

#[test]
fn a01_free_group_duality_and_growth() {
    for p in [2u64, 3] {
        for d in 1..=4usize {
            let g = GroupSpec::free(p, d).unwrap();
            let report = g.verify_koszul_duality(6).unwrap();
            assert!(report.relation_subspaces_equal, "subspaces differ at p={p}, d={d}");
            assert_eq!(report.dims_equal_up_to, 6, "dims differ at p={p}, d={d}");
            let dims = g.gr_algebra().unwrap().hilbert(6).unwrap().dims;
            let expect: Vec<usize> = (0..=6).map(|n| d.pow(n as u32)).collect();
            assert_eq!(dims, expect, "growth differs at p={p}, d={d}");
        }
    }
    println!("PASS free groups: dual of cohomology presents gr, dims (1, d, ..., d^6)");
}

#[test]
fn a02_one_relator_duality_and_growth() {
    for p in [3u64, 5] {
        for d in [2usize, 4] {
            let g = GroupSpec::demushkin(p, d, p).unwrap();
            let report = g.verify_koszul_duality(8).unwrap();
            assert!(report.relation_subspaces_equal, "subspaces differ at p={p}, d={d}");
            assert_eq!(report.dims_equal_up_to, 8, "dims differ at p={p}, d={d}");
            // coefficients of 1/(1 - dt + t^2)
            let mut expect = vec![1usize, d];
            for n in 2..=8 {
                expect.push(d * expect[n - 1] - expect[n - 2]);
            }
            let dims = g.gr_algebra().unwrap().hilbert(8).unwrap().dims;
            assert_eq!(dims, expect, "growth differs at p={p}, d={d}");
        }
    }
    println!("PASS one-relator groups: duality holds, gr grows like 1/(1 - dt + t^2)");
}

#[test]
fn a03_theta_abelian_exterior_symmetric_pair() {
    for p in [2u64, 3] {
        let q = if p == 2 { 4 } else { p };
        for d in 1..=4usize {
            let g = GroupSpec::theta_abelian(p, d, q).unwrap();
            let h = g.cohomology_ring().unwrap();
            assert!(
                h.relations().equals(exterior(f(p), d).unwrap().relations()).unwrap(),
                "cohomology is not the exterior algebra at p={p}, d={d}"
            );
            let hdims = h.hilbert(6).unwrap().dims;
            let expect: Vec<usize> = (0..=6).map(|n| binom(d, n)).collect();
            assert_eq!(hdims, expect, "cohomology dims at p={p}, d={d}");
            let dual = h.koszul_dual();
            assert!(
                dual.relations().equals(symmetric(f(p), d).unwrap().relations()).unwrap(),
                "dual is not the symmetric algebra at p={p}, d={d}"
            );
            let ddims = dual.hilbert(6).unwrap().dims;
            let expect: Vec<usize> = (0..=6).map(|n| binom(n + d - 1, n)).collect();
            assert_eq!(ddims, expect, "dual dims at p={p}, d={d}");
            let report = g.verify_koszul_duality(6).unwrap();
            assert!(report.relation_subspaces_equal && report.dims_equal_up_to == 6);
        }
    }
    println!("PASS theta-abelian groups: exterior cohomology, symmetric dual, duality holds");
}

#[test]
fn a04_flagship_algebras_are_koszul_to_bound_four() {
    for p in [2u64, 3] {
        let algebras = vec![
            exterior(f(p), 2).unwrap(),
            exterior(f(p), 3).unwrap(),
            demushkin_dual(f(p), 2).unwrap(),
            tensor_algebra(f(p), 3).unwrap(),
        ];
        for a in &algebras {
            let t = bar_tor(a, 4, 4).unwrap();
            assert_eq!(t.first_off_diagonal(), None, "off-diagonal Tor at p={p}");
        }
    }
    // the diagonal of the exterior algebra counts the dual's components
    for d in 2..=3usize {
        let t = bar_tor(&exterior(f(3), d).unwrap(), 4, 4).unwrap();
        let sym = symmetric(f(3), d).unwrap().hilbert(4).unwrap().dims;
        for i in 0..=4 {
            assert_eq!(t.tor(i, i), sym[i], "diagonal Tor at d={d}, i={i}");
        }
    }
    println!("PASS bar complex: off-diagonal Tor vanishes to (4,4); diagonal matches the dual");
}

#[test]
fn a05_hilbert_defect_vanishes_to_degree_eight() {
    for p in [2u64, 3] {
        let mut algebras = Vec::new();
        for d in 1..=4usize {
            algebras.push(tensor_algebra(f(p), d).unwrap());
            algebras.push(exterior(f(p), d).unwrap());
        }
        algebras.push(demushkin_dual(f(p), 2).unwrap());
        algebras.push(demushkin_dual(f(p), 4).unwrap());
        for a in &algebras {
            let defect = hilbert_criterion(a, 8).unwrap();
            assert_eq!(defect, vec![0i64; 9], "nonzero defect at p={p}");
        }
    }
    println!("PASS numerical criterion: h_A(t) h_dual(-t) = 1 to degree 8 on all families");
}

#[test]
fn a06_products_dualize_crosswise() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA06);
    for trial in 0..25 {
        let p = if rng.gen_bool(0.5) { 2u64 } else { 3 };
        let da = rng.gen_range(1..=3usize);
        let db = rng.gen_range(1..=3usize);
        let a = random_presentation(&mut rng, p, da);
        let b = random_presentation(&mut rng, p, db);
        let lhs = a.direct_product(&b).unwrap().koszul_dual();
        let rhs = a.koszul_dual().free_product(&b.koszul_dual()).unwrap();
        assert!(
            lhs.relations().equals(rhs.relations()).unwrap(),
            "direct/free mismatch on trial {trial} (p={p}, d=({da},{db}))"
        );
        let lhs = a.sym_tensor(&b).unwrap().koszul_dual();
        let rhs = a.koszul_dual().skew_tensor(&b.koszul_dual()).unwrap();
        assert!(
            lhs.relations().equals(rhs.relations()).unwrap(),
            "tensor mismatch on trial {trial} (p={p}, d=({da},{db}))"
        );
    }
    println!("PASS products: duals swap direct with free and symmetric with skew (25 trials)");
}

#[test]
fn a07_fibre_product_second_cohomology() {
    for p in [3u64, 5] {
        for d in [2usize, 4] {
            for c in 1..=2usize {
                let inner = GroupSpec::demushkin(p, d, p).unwrap();
                let g = GroupSpec::fibre_product(inner, c).unwrap();
                let h2 = g.cohomology_ring().unwrap().component(2).unwrap().dim();
                // one class from the base, d c mixed classes, C(c,2) from the fibre
                let expect = 1 + d * c + binom(c, 2);
                assert_eq!(h2, expect, "H^2 at p={p}, d={d}, c={c}");
                if c == 1 {
                    assert_eq!(h2, d + 1);
                }
            }
        }
    }
    println!("PASS fibre products: dim H^2 = 1 + dc + C(c,2), so d + 1 when c = 1");
}

#[test]
fn a08_cohomology_rebuilt_from_initial_forms() {
    for p in [3u64, 5] {
        let specs = vec![
            GroupSpec::demushkin(p, 2, p).unwrap(),
            GroupSpec::demushkin(p, 4, p).unwrap(),
            GroupSpec::theta_abelian(p, 2, p).unwrap(),
            GroupSpec::theta_abelian(p, 3, p).unwrap(),
        ];
        for spec in specs {
            let from_words = cohomology_from_presentation(&spec.presentation()).unwrap();
            let closed = spec.cohomology_ring().unwrap();
            assert_eq!(from_words.generator_count(), closed.generator_count());
            assert!(
                from_words.relations().equals(closed.relations()).unwrap(),
                "reconstruction differs at p={p}"
            );
        }
    }
    println!("PASS reconstruction: degree-2 letter coefficients of relations recover cohomology");
}

#[test]
fn a09_orientation_obstruction_tables() {
    // a central p-th power next to a commutator blocks every lift of the
    // last generator's dual: the value is exactly p
    for p in [2u64, 3, 5] {
        let relation = Word::Product(vec![
            Word::power(Word::Gen(2), p as i64),
            Word::commutator(Word::Gen(0), Word::Gen(1)),
        ]);
        let pres = GroupPresentation::new(
            f(p),
            vec!["x".into(), "y".into(), "z".into()],
            vec![relation],
            vec![1, 1, 1],
        )
        .unwrap();
        let table = cyclotomic_obstruction(&pres, 2).unwrap();
        assert_eq!(table.certificates(), vec![(2, 0)], "certificate set at p={p}");
        assert_eq!(table.entry(2, 0).value(), &BigUint::from(p), "value at p={p}");
    }
    // canonical families pass at precision 8
    let specs = vec![
        GroupSpec::demushkin(3, 2, 3).unwrap(),
        GroupSpec::demushkin(3, 4, 3).unwrap(),
        GroupSpec::demushkin(5, 2, 5).unwrap(),
        GroupSpec::demushkin(2, 2, 4).unwrap(),
        GroupSpec::theta_abelian(3, 2, 3).unwrap(),
        GroupSpec::theta_abelian(2, 3, 4).unwrap(),
        GroupSpec::theta_abelian(5, 4, 5).unwrap(),
    ];
    for spec in specs {
        let table = cyclotomic_obstruction(&spec.presentation(), 8).unwrap();
        assert!(table.all_zero, "unexpected: {}", table.summary());
    }
    println!("PASS obstructions: central p-th power flagged with value p; canonical tables zero");
}

fn poly_mul(a: &[i64], b: &[i64], cap: usize) -> Vec<i64> {
    let mut out = vec![0i64; cap + 1];
    for (i, &x) in a.iter().enumerate().take(cap + 1) {
        for (j, &y) in b.iter().enumerate().take(cap + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

#[test]
fn a10_filtration_layer_dims_and_envelope_growth() {
    for d in [2usize, 3] {
        let g = GroupSpec::theta_abelian(2, d, 4).unwrap();
        let dims = g.zassenhaus_dims(8).unwrap();
        let expect: Vec<usize> =
            (1..=8).map(|i| if [1, 2, 4, 8].contains(&i) { d } else { 0 }).collect();
        assert_eq!(dims, expect, "layer dims at d={d}");
        for c in 1..=2usize {
            let inner = GroupSpec::theta_abelian(2, d, 4).unwrap();
            let fp = GroupSpec::fibre_product(inner, c).unwrap();
            let dims = fp.zassenhaus_dims(8).unwrap();
            let expect: Vec<usize> =
                (1..=8).map(|i| if [1, 2, 4, 8].contains(&i) { d + c } else { 0 }).collect();
            assert_eq!(dims, expect, "layer dims at d={d}, c={c}");
        }
    }
    // layer dims of a free group assemble the envelope: restricted monomials
    // with exponents below p multiply out to d^n in each degree
    for p in [2u64, 3] {
        for d in [2usize, 3] {
            let layers = GroupSpec::free(p, d).unwrap().zassenhaus_dims(6).unwrap();
            let mut series = vec![0i64; 7];
            series[0] = 1;
            for (idx, &l) in layers.iter().enumerate() {
                let i = idx + 1;
                let mut factor = vec![0i64; 7];
                for k in 0..(p as usize) {
                    if i * k <= 6 {
                        factor[i * k] = 1;
                    }
                }
                for _ in 0..l {
                    series = poly_mul(&series, &factor, 6);
                }
            }
            let expect: Vec<i64> = (0..=6).map(|n| (d as i64).pow(n as u32)).collect();
            assert_eq!(series, expect, "envelope growth at p={p}, d={d}");
        }
    }
    println!("PASS filtration: theta-abelian layers sit at 1,2,4,8; free layers rebuild d^n");
}

#[test]
fn a11_abelianization_and_rank_invariants() {
    for (p, d, q) in [(3u64, 2usize, 3u64), (3, 4, 9), (2, 4, 4), (5, 2, 25)] {
        let inv = GroupSpec::demushkin(p, d, q).unwrap().invariants();
        assert_eq!(inv.abelianization_free_rank, d - 1, "free rank at p={p}, d={d}, q={q}");
        assert_eq!(inv.abelianization_torsion, vec![q], "torsion at p={p}, d={d}, q={q}");
        assert_eq!((inv.t1, inv.f1), (1, d - 2), "t1/f1 at p={p}, d={d}, q={q}");
    }
    for d in 1..=4usize {
        let inv = GroupSpec::theta_abelian(3, d, 3).unwrap().invariants();
        assert_eq!(inv.t1, d - 1, "t1 at d={d}");
    }
    println!("PASS invariants: one-relator abelianization is Z_p^(d-1) x Z/q; t1/f1 as expected");
}

// rank over F_2 of rows encoded as monomial-index bitmasks
fn f2_rank(mut rows: Vec<u32>) -> usize {
    let mut rank = 0;
    for col in 0..32 {
        let bit = 1u32 << col;
        if let Some(idx) = (rank..rows.len()).find(|&i| rows[i] & bit != 0) {
            rows.swap(rank, idx);
            let pivot = rows[rank];
            for (i, row) in rows.iter_mut().enumerate() {
                if i != rank && *row & bit != 0 {
                    *row ^= pivot;
                }
            }
            rank += 1;
        }
    }
    rank
}

// dim A_n over F_2 by listing every embedding of a relation between
// monomials and row-reducing the lot: d^n minus the rank of the span
fn embedded_span_dim(a: &QuadraticPresentation, n: usize) -> usize {
    let d = a.generator_count();
    let total = d.pow(n as u32);
    assert!(total <= 32, "oracle bitmask too narrow");
    let mut rows = Vec::new();
    for r in a.relations().basis_rows() {
        for k in 0..=n.saturating_sub(2) {
            let left = d.pow(k as u32);
            let right = d.pow((n - 2 - k) as u32);
            for u in 0..left {
                for w in 0..right {
                    let mut mask = 0u32;
                    for i in 0..d {
                        for j in 0..d {
                            if r[i * d + j] != 0 {
                                let idx = (u * d * d + i * d + j) * right + w;
                                mask ^= 1 << idx;
                            }
                        }
                    }
                    rows.push(mask);
                }
            }
        }
    }
    total - f2_rank(rows)
}

#[test]
fn a12_component_and_tor_oracles() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA12);
    for trial in 0..30 {
        let d = rng.gen_range(1..=2usize);
        let a = random_presentation(&mut rng, 2, d);
        assert_eq!(a.component(0).unwrap().dim(), 1);
        assert_eq!(a.component(1).unwrap().dim(), d);
        for n in 2..=4usize {
            assert_eq!(
                a.component(n).unwrap().dim(),
                embedded_span_dim(&a, n),
                "component dim differs on trial {trial} (d={d}, n={n})"
            );
        }
    }
    // homology cannot shift the alternating sum of chain dimensions
    let mut algebras = vec![
        exterior(f(2), 2).unwrap(),
        exterior(f(3), 3).unwrap(),
        demushkin_dual(f(3), 2).unwrap(),
        tensor_algebra(f(2), 2).unwrap(),
    ];
    for _ in 0..5 {
        algebras.push(random_presentation(&mut rng, 2, 2));
    }
    for a in &algebras {
        let t = bar_tor(a, 4, 4).unwrap();
        for j in 0..=4usize {
            let tor_sum: i64 =
                (0..=4).map(|i| (if i % 2 == 0 { 1 } else { -1 }) * t.tor(i, j) as i64).sum();
            let chain_sum: i64 = (0..=4)
                .map(|i| (if i % 2 == 0 { 1 } else { -1 }) * t.chain_dim(i, j) as i64)
                .sum();
            assert_eq!(tor_sum, chain_sum, "Euler characteristic at j={j}");
        }
    }
    println!("PASS oracles: component dims match embedded spans; Tor matches chain Euler sums");
}
