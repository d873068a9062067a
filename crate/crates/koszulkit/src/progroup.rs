//! Families of oriented pro-p groups: validated specifications, concrete
//! presentations, closed-form cohomology rings and graded group algebras,
//! Koszul-duality verification, and numeric invariants.

use serde::{Deserialize, Serialize};

use crate::fpfield::{PrimeField, Subspace};
use crate::ncpoly::{psi2, Word};
use crate::quadalg::{
    demushkin_dual, dual_numbers, exterior, symmetric, tensor_algebra, QuadraticPresentation,
};
use crate::{Error, Result};

/// Largest admitted orientation modulus; keeps 1 - q and every word
/// exponent representable as an i64.
const MAX_Q: u64 = 1 << 62;
/// Largest admitted exponent f in the q = 2 presentations.
const MAX_F: u32 = 60;
/// Bound on |alpha| in the even-rank q = 2 presentation.
const MAX_ALPHA: i64 = 1 << 40;
// The inverse-of-(1 + alpha) orientation value is stored modulo 2^INV_BITS,
// which is exact for every downstream precision up to INV_BITS digits.
const INV_BITS: u32 = 62;

/// The f parameter of the q = 2 presentations: an exponent 2^f with
/// f in {2, 3, ...} or infinite (2^f = 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DemushkinF {
    Finite(u32),
    Infinite,
}

/// Shape of a group in the supported elementary-type families. `q` encodes
/// the orientation image 1 + qZ_p; q = 0 means the trivial orientation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupKind {
    Free { d: usize },
    Demushkin { d: usize, q: u64, f: DemushkinF, alpha: i64 },
    ThetaAbelian { d: usize, q: u64 },
    FibreProduct { inner: Box<GroupKind>, c: usize },
    FreeProduct { a: Box<GroupKind>, b: Box<GroupKind> },
}

/// A validated group specification over a fixed prime.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSpec {
    field: PrimeField,
    kind: GroupKind,
}

/// A finite presentation with an orientation: generator labels, relation
/// words over those generators, and one integer orientation value per
/// generator. Relation words lie in the second filtration layer and have
/// orientation value 1.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupPresentation {
    field: PrimeField,
    pub labels: Vec<String>,
    pub relations: Vec<Word>,
    pub theta: Vec<i64>,
}

/// Structural invariants of a group specification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupInvariants {
    pub d: usize,
    pub r: usize,
    pub abelianization_free_rank: usize,
    pub abelianization_torsion: Vec<u64>,
    pub theta_centre_rank: usize,
    pub t1: usize,
    pub f1: usize,
}

/// Outcome of checking that the dual of the cohomology ring matches the
/// graded group algebra.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityReport {
    pub relation_subspaces_equal: bool,
    pub dims_equal_up_to: usize,
}

// ---- validation ----

fn is_power_of(mut q: u64, p: u64) -> bool {
    if q == 0 {
        return false;
    }
    while q % p == 0 {
        q /= p;
    }
    q == 1
}

fn validate_q(q: u64, p: u64) -> Result<()> {
    if q == 0 {
        return Ok(());
    }
    if q >= MAX_Q {
        return Err(Error::InvalidGroupSpec(format!("q = {q} is too large")));
    }
    if q < p || !is_power_of(q, p) {
        return Err(Error::InvalidGroupSpec(format!(
            "q must be 0 or a power of p = {p} with q >= p, got {q}"
        )));
    }
    Ok(())
}

fn validate_f(f: DemushkinF) -> Result<()> {
    match f {
        DemushkinF::Finite(n) if n < 2 => Err(Error::InvalidGroupSpec(format!(
            "f must be at least 2, got {n}"
        ))),
        DemushkinF::Finite(n) if n > MAX_F => Err(Error::InvalidGroupSpec(format!(
            "f = {n} is too large"
        ))),
        _ => Ok(()),
    }
}

fn validate_kind(kind: &GroupKind, p: u64) -> Result<()> {
    match kind {
        GroupKind::Free { d } => {
            if *d < 1 {
                return Err(Error::InvalidGroupSpec("free rank must be at least 1".into()));
            }
        }
        GroupKind::Demushkin { d, q, f, alpha } => {
            if *d < 2 {
                return Err(Error::InvalidGroupSpec(format!(
                    "one-relator rank must be at least 2, got {d}"
                )));
            }
            validate_q(*q, p)?;
            if *q != 2 {
                // the pairing chains generators two at a time
                if *d % 2 != 0 {
                    return Err(Error::InvalidGroupSpec(format!(
                        "rank must be even when q != 2, got {d}"
                    )));
                }
                if *f != DemushkinF::Finite(2) || *alpha != 0 {
                    return Err(Error::InvalidGroupSpec(
                        "f and alpha apply only to q = 2 presentations".into(),
                    ));
                }
            } else {
                validate_f(*f)?;
                if *d % 2 == 1 {
                    if *alpha != 0 {
                        return Err(Error::InvalidGroupSpec(
                            "alpha applies only to the even-rank q = 2 presentation".into(),
                        ));
                    }
                } else {
                    if alpha.rem_euclid(4) != 0 || alpha.abs() > MAX_ALPHA {
                        return Err(Error::InvalidGroupSpec(format!(
                            "alpha must be a multiple of 4 with |alpha| <= {MAX_ALPHA}, got {alpha}"
                        )));
                    }
                    if *d == 2 && *f != DemushkinF::Finite(2) {
                        return Err(Error::InvalidGroupSpec(
                            "f is not used by the rank-2 q = 2 presentation".into(),
                        ));
                    }
                }
            }
        }
        GroupKind::ThetaAbelian { d, q } => {
            if *d < 1 {
                return Err(Error::InvalidGroupSpec("rank must be at least 1".into()));
            }
            validate_q(*q, p)?;
            if p == 2 && *q == 2 {
                return Err(Error::InvalidGroupSpec(
                    "p = 2 needs q = 0 or q >= 4 here; q = 2 is reserved for one-relator groups"
                        .into(),
                ));
            }
        }
        GroupKind::FibreProduct { inner, c } => {
            if *c < 1 {
                return Err(Error::InvalidGroupSpec(
                    "fibre products need at least one new central generator".into(),
                ));
            }
            validate_kind(inner, p)?;
            if effective_q(inner) == 2 {
                return Err(Error::InvalidGroupSpec(
                    "fibre products need a torsion-free orientation image (q != 2)".into(),
                ));
            }
        }
        GroupKind::FreeProduct { a, b } => {
            validate_kind(a, p)?;
            validate_kind(b, p)?;
        }
    }
    Ok(())
}

/// The modulus of the orientation image: im = 1 + qZ_p, combined across
/// constituents (0 encodes the trivial image).
fn effective_q(kind: &GroupKind) -> u64 {
    match kind {
        GroupKind::Free { .. } => 0,
        GroupKind::Demushkin { q, .. } | GroupKind::ThetaAbelian { q, .. } => *q,
        GroupKind::FibreProduct { inner, .. } => effective_q(inner),
        GroupKind::FreeProduct { a, b } => match (effective_q(a), effective_q(b)) {
            (0, q) | (q, 0) => q,
            (qa, qb) => qa.min(qb),
        },
    }
}

fn generator_count(kind: &GroupKind) -> usize {
    match kind {
        GroupKind::Free { d }
        | GroupKind::Demushkin { d, .. }
        | GroupKind::ThetaAbelian { d, .. } => *d,
        GroupKind::FibreProduct { inner, c } => generator_count(inner) + c,
        GroupKind::FreeProduct { a, b } => generator_count(a) + generator_count(b),
    }
}

fn relation_count(kind: &GroupKind) -> usize {
    match kind {
        GroupKind::Free { .. } => 0,
        GroupKind::Demushkin { .. } => 1,
        GroupKind::ThetaAbelian { d, .. } => (d - 1) + (d - 1) * d.saturating_sub(2) / 2,
        GroupKind::FibreProduct { inner, c } => {
            relation_count(inner) + generator_count(inner) * c + c * (c - 1) / 2
        }
        GroupKind::FreeProduct { a, b } => relation_count(a) + relation_count(b),
    }
}

// Inverse of an odd residue modulo 2^bits by Newton iteration.
fn inv_mod_pow2(a: i64, bits: u32) -> u64 {
    let mask: u128 = (1u128 << bits) - 1;
    let a = (a as i128).rem_euclid(1i128 << bits) as u128;
    let mut x: u128 = 1;
    for _ in 0..7 {
        x = (x.wrapping_mul(2u128.wrapping_sub(a.wrapping_mul(x) & mask) & mask)) & mask;
    }
    debug_assert_eq!((a * x) & mask, 1);
    x as u64
}

// ---- presentation assembly ----

fn labels_from(prefix: &str, start: usize, count: usize) -> Vec<String> {
    (start..start + count).map(|k| format!("{prefix}{k}")).collect()
}

fn build_presentation(kind: &GroupKind, p: u64) -> (Vec<String>, Vec<i64>, Vec<Word>) {
    match kind {
        GroupKind::Free { d } => (labels_from("x", 1, *d), vec![1; *d], Vec::new()),
        GroupKind::Demushkin { d, q, f, alpha } => demushkin_presentation(*d, *q, *f, *alpha),
        GroupKind::ThetaAbelian { d, q } => theta_abelian_presentation(*d, *q),
        GroupKind::FibreProduct { inner, c } => {
            let (mut labels, mut theta, mut relations) = build_presentation(inner, p);
            let din = labels.len();
            let zstart = labels.iter().filter(|l| l.starts_with('z')).count() + 1;
            labels.extend(labels_from("z", zstart, *c));
            theta.extend(std::iter::repeat(1).take(*c));
            for i in 0..*c {
                let z = din + i;
                for (j, &t) in theta[..din].iter().enumerate() {
                    let comm = Word::commutator(Word::gen(j), Word::gen(z));
                    if t == 1 {
                        relations.push(comm);
                    } else {
                        relations.push(Word::product(vec![
                            Word::power(Word::gen(z), 1 - t),
                            comm,
                        ]));
                    }
                }
            }
            for i in 0..*c {
                for j in (i + 1)..*c {
                    relations.push(Word::commutator(Word::gen(din + i), Word::gen(din + j)));
                }
            }
            (labels, theta, relations)
        }
        GroupKind::FreeProduct { a, b } => {
            let (la, ta, ra) = build_presentation(a, p);
            let (lb, tb, rb) = build_presentation(b, p);
            let da = la.len();
            let mut labels: Vec<String> = la.iter().map(|l| format!("A.{l}")).collect();
            labels.extend(lb.iter().map(|l| format!("B.{l}")));
            let mut theta = ta;
            theta.extend(tb);
            let mut relations = ra;
            relations.extend(rb.iter().map(|w| w.map_indices(&|i| i + da)));
            (labels, theta, relations)
        }
    }
}

fn two_pow(f: DemushkinF) -> i64 {
    match f {
        DemushkinF::Finite(n) => 1i64 << n,
        DemushkinF::Infinite => 0,
    }
}

fn demushkin_presentation(d: usize, q: u64, f: DemushkinF, alpha: i64) -> (Vec<String>, Vec<i64>, Vec<Word>) {
    let labels = labels_from("x", 1, d);
    let mut theta = vec![1i64; d];
    let mut factors = Vec::new();
    if q != 2 {
        // x1^-q [x1,x2][x3,x4]...[x_{d-1},x_d]
        theta[1] = 1 - q as i64;
        if q > 0 {
            factors.push(Word::power(Word::gen(0), -(q as i64)));
        }
        for k in 0..d / 2 {
            factors.push(Word::commutator(Word::gen(2 * k), Word::gen(2 * k + 1)));
        }
    } else if d % 2 == 1 {
        // x1^-2 x2^-2^f [x2,x3][x4,x5]...[x_{d-1},x_d]
        theta[0] = -1;
        theta[2] = 1 - two_pow(f);
        factors.push(Word::power(Word::gen(0), -2));
        if two_pow(f) != 0 {
            factors.push(Word::power(Word::gen(1), -two_pow(f)));
        }
        for k in 0..(d - 1) / 2 {
            factors.push(Word::commutator(Word::gen(2 * k + 1), Word::gen(2 * k + 2)));
        }
    } else {
        // x1^{-2-alpha} [x1,x2] x3^-2^f [x3,x4][x5,x6]...[x_{d-1},x_d]
        theta[1] = -(inv_mod_pow2(1 + alpha, INV_BITS) as i64);
        factors.push(Word::power(Word::gen(0), -2 - alpha));
        factors.push(Word::commutator(Word::gen(0), Word::gen(1)));
        if d >= 4 {
            theta[3] = 1 - two_pow(f);
            if two_pow(f) != 0 {
                factors.push(Word::power(Word::gen(2), -two_pow(f)));
            }
            for k in 1..d / 2 {
                factors.push(Word::commutator(Word::gen(2 * k), Word::gen(2 * k + 1)));
            }
        }
    }
    (labels, theta, vec![Word::product(factors)])
}

fn theta_abelian_presentation(d: usize, q: u64) -> (Vec<String>, Vec<i64>, Vec<Word>) {
    let labels = labels_from("x", 0, d);
    let mut theta = vec![1i64; d];
    theta[0] = 1 + q as i64;
    let mut relations = Vec::new();
    for i in 1..d {
        // x0 xi x0^-1 xi^-(1+q)
        relations.push(Word::product(vec![
            Word::gen(0),
            Word::gen(i),
            Word::inverse(Word::gen(0)),
            Word::power(Word::gen(i), -(1 + q as i64)),
        ]));
    }
    for i in 1..d {
        for j in (i + 1)..d {
            relations.push(Word::commutator(Word::gen(i), Word::gen(j)));
        }
    }
    (labels, theta, relations)
}

// ---- closed-form algebra scope ----

fn cohomology_scope(kind: &GroupKind, p: u64) -> Result<()> {
    if p != 2 {
        return Ok(());
    }
    match kind {
        GroupKind::Free { .. } => Ok(()),
        GroupKind::Demushkin { q, .. } => match *q {
            0 => Err(Error::ModelOutOfScope(
                "the quadratic model at p = 2 needs a nontrivial orientation".into(),
            )),
            // cup squares are nonzero when q = 2, so the skew model is wrong
            2 => Err(Error::ModelOutOfScope(
                "the quadratic model at p = 2 needs q >= 4 so that cup squares vanish".into(),
            )),
            _ => Ok(()),
        },
        GroupKind::ThetaAbelian { q, .. } => {
            if *q >= 4 {
                Ok(())
            } else {
                Err(Error::ModelOutOfScope(
                    "the exterior model at p = 2 needs q >= 4".into(),
                ))
            }
        }
        GroupKind::FibreProduct { inner, .. } => {
            cohomology_scope(inner, p)?;
            if effective_q(inner) >= 4 {
                Ok(())
            } else {
                Err(Error::ModelOutOfScope(
                    "the exterior model on the new duals at p = 2 needs q >= 4".into(),
                ))
            }
        }
        GroupKind::FreeProduct { a, b } => {
            cohomology_scope(a, p)?;
            cohomology_scope(b, p)
        }
    }
}

fn gr_scope(kind: &GroupKind) -> Result<()> {
    match kind {
        GroupKind::Demushkin { q, .. } if *q == 2 => Err(Error::ModelOutOfScope(
            "the graded algebra of a q = 2 one-relator group is not the pairwise model".into(),
        )),
        GroupKind::FibreProduct { inner, .. } => gr_scope(inner),
        GroupKind::FreeProduct { a, b } => {
            gr_scope(a)?;
            gr_scope(b)
        }
        _ => Ok(()),
    }
}

// ---- spec API ----

impl GroupSpec {
    pub fn new(p: u64, kind: GroupKind) -> Result<Self> {
        let field = PrimeField::new(p)?;
        validate_kind(&kind, p)?;
        Ok(GroupSpec { field, kind })
    }

    pub fn free(p: u64, d: usize) -> Result<Self> {
        Self::new(p, GroupKind::Free { d })
    }

    pub fn demushkin(p: u64, d: usize, q: u64) -> Result<Self> {
        Self::new(
            p,
            GroupKind::Demushkin { d, q, f: DemushkinF::Finite(2), alpha: 0 },
        )
    }

    /// One-relator spec with the q = 2 parameters spelled out.
    pub fn demushkin_with(p: u64, d: usize, q: u64, f: DemushkinF, alpha: i64) -> Result<Self> {
        Self::new(p, GroupKind::Demushkin { d, q, f, alpha })
    }

    pub fn theta_abelian(p: u64, d: usize, q: u64) -> Result<Self> {
        Self::new(p, GroupKind::ThetaAbelian { d, q })
    }

    /// Extends `inner` by `c` new central generators carrying the
    /// orientation action.
    pub fn fibre_product(inner: GroupSpec, c: usize) -> Result<Self> {
        let p = inner.field.p();
        Self::new(p, GroupKind::FibreProduct { inner: Box::new(inner.kind), c })
    }

    pub fn free_product(a: GroupSpec, b: GroupSpec) -> Result<Self> {
        if a.field != b.field {
            return Err(Error::FieldMismatch { left: a.field.p(), right: b.field.p() });
        }
        let p = a.field.p();
        Self::new(p, GroupKind::FreeProduct { a: Box::new(a.kind), b: Box::new(b.kind) })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn generator_count(&self) -> usize {
        generator_count(&self.kind)
    }

    /// The canonical presentation of the family: generators, relation
    /// words, and the orientation value of each generator.
    pub fn presentation(&self) -> GroupPresentation {
        let (labels, theta, relations) = build_presentation(&self.kind, self.p());
        GroupPresentation { field: self.field, labels, relations, theta }
    }

    /// Closed-form mod-p cohomology ring as a quadratic presentation on the
    /// duals of the canonical generators.
    pub fn cohomology_ring(&self) -> Result<QuadraticPresentation> {
        cohomology_scope(&self.kind, self.p())?;
        let h = build_cohomology(&self.kind, self.field)?;
        let labels = self
            .presentation()
            .labels
            .iter()
            .map(|l| format!("{l}*"))
            .collect();
        relabel(&h, labels)
    }

    /// Closed-form graded algebra of the filtration quotients.
    pub fn gr_algebra(&self) -> Result<QuadraticPresentation> {
        gr_scope(&self.kind)?;
        let g = build_gr(&self.kind, self.field)?;
        let labels = self
            .presentation()
            .labels
            .iter()
            .map(|l| l.to_uppercase())
            .collect();
        relabel(&g, labels)
    }

    /// Checks that the dual of the cohomology ring presents the graded
    /// algebra: relation-subspace equality under the generator
    /// correspondence, and dimension agreement through degree `n`.
    pub fn verify_koszul_duality(&self, n: usize) -> Result<DualityReport> {
        let dual = self.cohomology_ring()?.koszul_dual();
        let gr = self.gr_algebra()?;
        let relation_subspaces_equal = dual.relations().equals(gr.relations())?;
        let hd = dual.hilbert(n)?;
        let hg = gr.hilbert(n)?;
        let agree = (0..=n).take_while(|&k| hd.dims[k] == hg.dims[k]).count();
        Ok(DualityReport {
            relation_subspaces_equal,
            dims_equal_up_to: agree.saturating_sub(1),
        })
    }

    pub fn invariants(&self) -> GroupInvariants {
        let d = generator_count(&self.kind);
        let r = relation_count(&self.kind);
        let (abelianization_free_rank, mut abelianization_torsion) = abelianization(&self.kind);
        abelianization_torsion.sort_unstable();
        let theta_centre_rank = theta_centre_rank(&self.kind);
        let (t1, f1) = if effective_q(&self.kind) == 0 {
            (0, d)
        } else {
            oriented_t1_f1(&self.kind)
        };
        GroupInvariants {
            d,
            r,
            abelianization_free_rank,
            abelianization_torsion,
            theta_centre_rank,
            t1,
            f1,
        }
    }

    /// Dimensions of the filtration-layer quotients in degrees 1..=n.
    /// Closed forms exist for free and theta-abelian groups and fibre
    /// products over them.
    pub fn zassenhaus_dims(&self, n: usize) -> Result<Vec<usize>> {
        zassenhaus(&self.kind, self.p(), n)
    }

    pub fn to_json(&self) -> GroupSpecJson {
        GroupSpecJson { p: self.p(), group: kind_to_json(&self.kind) }
    }

    pub fn from_json(j: &GroupSpecJson) -> Result<Self> {
        let kind = kind_from_json(&j.group, j.p)?;
        Self::new(j.p, kind)
    }
}

fn relabel(q: &QuadraticPresentation, labels: Vec<String>) -> Result<QuadraticPresentation> {
    QuadraticPresentation::new(q.field(), labels, q.relations().clone())
}

fn build_cohomology(kind: &GroupKind, field: PrimeField) -> Result<QuadraticPresentation> {
    match kind {
        GroupKind::Free { d } => dual_numbers(field, *d),
        GroupKind::Demushkin { .. } => {
            // the cup products are read off the single relation
            let (labels, _, relations) = build_presentation(kind, field.p());
            let rho = psi2(&relations[0], field, labels.len())?;
            let span = Subspace::from_spanning(field, rho.len(), &[rho])?;
            QuadraticPresentation::new(field, labels, span.annihilator())
        }
        GroupKind::ThetaAbelian { d, .. } => exterior(field, *d),
        GroupKind::FibreProduct { inner, c } => {
            build_cohomology(inner, field)?.skew_tensor(&exterior(field, *c)?)
        }
        GroupKind::FreeProduct { a, b } => {
            build_cohomology(a, field)?.direct_product(&build_cohomology(b, field)?)
        }
    }
}

fn build_gr(kind: &GroupKind, field: PrimeField) -> Result<QuadraticPresentation> {
    match kind {
        GroupKind::Free { d } => tensor_algebra(field, *d),
        GroupKind::Demushkin { d, .. } => demushkin_dual(field, *d),
        GroupKind::ThetaAbelian { d, .. } => symmetric(field, *d),
        GroupKind::FibreProduct { inner, c } => {
            build_gr(inner, field)?.sym_tensor(&symmetric(field, *c)?)
        }
        GroupKind::FreeProduct { a, b } => {
            build_gr(a, field)?.free_product(&build_gr(b, field)?)
        }
    }
}

// ---- invariants ----

fn abelianization(kind: &GroupKind) -> (usize, Vec<u64>) {
    match kind {
        GroupKind::Free { d } => (*d, Vec::new()),
        GroupKind::Demushkin { d, q, .. } => {
            if *q > 0 {
                (*d - 1, vec![*q])
            } else {
                (*d, Vec::new())
            }
        }
        GroupKind::ThetaAbelian { d, q } => {
            if *q > 0 {
                (1, vec![*q; *d - 1])
            } else {
                (*d, Vec::new())
            }
        }
        GroupKind::FibreProduct { inner, c } => {
            let (free, mut torsion) = abelianization(inner);
            let q = effective_q(inner);
            if q > 0 {
                torsion.extend(std::iter::repeat(q).take(*c));
                (free, torsion)
            } else {
                (free + c, torsion)
            }
        }
        GroupKind::FreeProduct { a, b } => {
            let (fa, mut ta) = abelianization(a);
            let (fb, tb) = abelianization(b);
            ta.extend(tb);
            (fa + fb, ta)
        }
    }
}

fn theta_centre_rank(kind: &GroupKind) -> usize {
    match kind {
        GroupKind::Free { d } => usize::from(*d == 1),
        GroupKind::Demushkin { d, q, .. } => {
            // the rank-2 unoriented case is the abelian group of rank 2
            if *q == 0 && *d == 2 {
                2
            } else {
                0
            }
        }
        GroupKind::ThetaAbelian { d, q } => {
            if *q > 0 {
                *d - 1
            } else {
                *d
            }
        }
        GroupKind::FibreProduct { inner, c } => theta_centre_rank(inner) + c,
        GroupKind::FreeProduct { .. } => 0,
    }
}

// 1-torsion and 1-free ranks of the orientation kernel's abelianized
// module, in the presence of a nontrivial orientation somewhere in the
// composite.
fn oriented_t1_f1(kind: &GroupKind) -> (usize, usize) {
    match kind {
        GroupKind::Free { d } => (0, *d - 1),
        GroupKind::Demushkin { d, q, .. } => {
            if *q > 0 {
                (1, *d - 2)
            } else {
                (0, *d - 1)
            }
        }
        GroupKind::ThetaAbelian { d, q } => {
            if *q > 0 {
                (*d - 1, 0)
            } else {
                (0, *d - 1)
            }
        }
        GroupKind::FibreProduct { inner, c } => {
            let (t, f) = oriented_t1_f1(inner);
            if effective_q(inner) > 0 {
                (t + c, f)
            } else {
                (t, f + c)
            }
        }
        GroupKind::FreeProduct { a, b } => {
            // one extra free kernel generator comes from the amalgamation
            let (ta, fa) = oriented_t1_f1(a);
            let (tb, fb) = oriented_t1_f1(b);
            (ta + tb, fa + fb + 1)
        }
    }
}

// ---- filtration dimensions ----

fn is_p_power(mut i: usize, p: u64) -> bool {
    while i as u64 % p == 0 {
        i /= p as usize;
    }
    i == 1
}

fn mobius(mut e: u64) -> i64 {
    let mut mu = 1i64;
    let mut q = 2;
    while q * q <= e {
        if e % q == 0 {
            e /= q;
            if e % q == 0 {
                return 0;
            }
            mu = -mu;
        }
        q += 1;
    }
    if e > 1 {
        mu = -mu;
    }
    mu
}

// Degree-m dimension of the free Lie algebra on d generators.
fn witt(d: usize, m: u64) -> Result<i128> {
    let overflow = || Error::InvalidInput("filtration dimension overflow".into());
    let mut sum: i128 = 0;
    for e in 1..=m {
        if m % e != 0 {
            continue;
        }
        let mu = mobius(e);
        if mu == 0 {
            continue;
        }
        let term = (d as i128).checked_pow((m / e) as u32).ok_or_else(overflow)?;
        sum = sum.checked_add(mu as i128 * term).ok_or_else(overflow)?;
    }
    debug_assert!(sum >= 0 && sum % m as i128 == 0);
    Ok(sum / m as i128)
}

// The free restricted Lie algebra is spanned by iterated p-th powers of a
// Lie basis, so degree i collects the Witt dimensions over p-power divisors.
fn free_layer_dims(d: usize, p: u64, n: usize) -> Result<Vec<usize>> {
    let overflow = || Error::InvalidInput("filtration dimension overflow".into());
    let mut out = Vec::with_capacity(n);
    for i in 1..=n as u64 {
        let mut l: i128 = 0;
        let mut m = i;
        loop {
            l = l.checked_add(witt(d, m)?).ok_or_else(overflow)?;
            if m % p != 0 {
                break;
            }
            m /= p;
        }
        out.push(usize::try_from(l).map_err(|_| overflow())?);
    }
    Ok(out)
}

fn zassenhaus(kind: &GroupKind, p: u64, n: usize) -> Result<Vec<usize>> {
    match kind {
        GroupKind::Free { d } => free_layer_dims(*d, p, n),
        GroupKind::ThetaAbelian { d, .. } => Ok((1..=n)
            .map(|i| if is_p_power(i, p) { *d } else { 0 })
            .collect()),
        GroupKind::FibreProduct { inner, c } => {
            let mut dims = zassenhaus(inner, p, n)?;
            for (i, v) in dims.iter_mut().enumerate() {
                if is_p_power(i + 1, p) {
                    *v += c;
                }
            }
            Ok(dims)
        }
        _ => Err(Error::UnsupportedSpec(
            "filtration dimensions are closed-form only for free and theta-abelian groups \
             and fibre products over them"
                .into(),
        )),
    }
}

// ---- presentation API ----

impl GroupPresentation {
    /// Builds a presentation from parts, checking that labels are distinct,
    /// every word only references listed generators, and each orientation
    /// value is a unit.
    pub fn new(
        field: PrimeField,
        labels: Vec<String>,
        relations: Vec<Word>,
        theta: Vec<i64>,
    ) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidPresentation("no generators".into()));
        }
        if theta.len() != labels.len() {
            return Err(Error::InvalidPresentation(format!(
                "{} orientation values for {} generators",
                theta.len(),
                labels.len()
            )));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::InvalidPresentation(format!("duplicate label {l:?}")));
            }
        }
        for t in &theta {
            if t.rem_euclid(field.p() as i64) == 0 {
                return Err(Error::InvalidPresentation(format!(
                    "orientation value {t} is not a unit"
                )));
            }
        }
        let d = labels.len();
        for w in &relations {
            if max_gen_index(w).is_some_and(|m| m >= d) {
                return Err(Error::InvalidPresentation(
                    "relation references an unlisted generator".into(),
                ));
            }
        }
        Ok(GroupPresentation { field, labels, relations, theta })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn generator_count(&self) -> usize {
        self.labels.len()
    }

    pub fn relation_count(&self) -> usize {
        self.relations.len()
    }
}

fn max_gen_index(w: &Word) -> Option<usize> {
    match w {
        Word::Gen(i) => Some(*i),
        Word::Inverse(u) => max_gen_index(u),
        Word::Power(u, _) => max_gen_index(u),
        Word::Product(ws) => ws.iter().filter_map(max_gen_index).max(),
        Word::Commutator(u, v) => max_gen_index(u).max(max_gen_index(v)),
    }
}

/// Reconstructs the quadratic cohomology presentation from a presentation
/// alone: the relation subspace is the annihilator of the spanned
/// degree-two expansions of the relation words.
pub fn cohomology_from_presentation(pres: &GroupPresentation) -> Result<QuadraticPresentation> {
    let field = pres.field;
    let d = pres.generator_count();
    let mut rows = Vec::with_capacity(pres.relations.len());
    for w in &pres.relations {
        rows.push(psi2(w, field, d)?);
    }
    let span = Subspace::from_spanning(field, d * d, &rows)?;
    if span.dim() < rows.len() {
        return Err(Error::DegenerateRelationSpan);
    }
    let labels = pres.labels.iter().map(|l| format!("{l}*")).collect();
    QuadraticPresentation::new(field, labels, span.annihilator())
}

// ---- serialization ----

/// On-disk form of a group spec.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSpecJson {
    pub p: u64,
    pub group: GroupKindJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FJson {
    Number(u32),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GroupKindJson {
    Free {
        d: usize,
    },
    Demushkin {
        d: usize,
        q: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        variant: Option<u8>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        f: Option<FJson>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alpha: Option<i64>,
    },
    ThetaAbelian {
        d: usize,
        q: u64,
    },
    Fibre {
        inner: Box<GroupKindJson>,
        c: usize,
    },
    FreeProduct {
        a: Box<GroupKindJson>,
        b: Box<GroupKindJson>,
    },
}

fn kind_to_json(kind: &GroupKind) -> GroupKindJson {
    match kind {
        GroupKind::Free { d } => GroupKindJson::Free { d: *d },
        GroupKind::Demushkin { d, q, f, alpha } => GroupKindJson::Demushkin {
            d: *d,
            q: *q,
            variant: None,
            f: match f {
                DemushkinF::Finite(2) => None,
                DemushkinF::Finite(n) => Some(FJson::Number(*n)),
                DemushkinF::Infinite => Some(FJson::Text("inf".into())),
            },
            alpha: if *alpha == 0 { None } else { Some(*alpha) },
        },
        GroupKind::ThetaAbelian { d, q } => GroupKindJson::ThetaAbelian { d: *d, q: *q },
        GroupKind::FibreProduct { inner, c } => GroupKindJson::Fibre {
            inner: Box::new(kind_to_json(inner)),
            c: *c,
        },
        GroupKind::FreeProduct { a, b } => GroupKindJson::FreeProduct {
            a: Box::new(kind_to_json(a)),
            b: Box::new(kind_to_json(b)),
        },
    }
}

fn kind_from_json(j: &GroupKindJson, p: u64) -> Result<GroupKind> {
    match j {
        GroupKindJson::Free { d } => Ok(GroupKind::Free { d: *d }),
        GroupKindJson::Demushkin { d, q, variant, f, alpha } => {
            let case: u8 = if *q != 2 {
                1
            } else if *d % 2 == 1 {
                2
            } else {
                3
            };
            if let Some(v) = variant {
                if case != *v {
                    return Err(Error::InvalidGroupSpec(format!(
                        "variant {v} does not match p = {p}, q = {q}, d = {d} (expected {case})"
                    )));
                }
            }
            if f.is_some() && (case == 1 || (case == 3 && *d == 2)) {
                return Err(Error::InvalidGroupSpec(
                    "f applies only to q = 2 presentations with a second block".into(),
                ));
            }
            if alpha.is_some() && case != 3 {
                return Err(Error::InvalidGroupSpec(
                    "alpha applies only to the even-rank q = 2 presentation".into(),
                ));
            }
            let f = match f {
                None => DemushkinF::Finite(2),
                Some(FJson::Number(n)) => DemushkinF::Finite(*n),
                Some(FJson::Text(s)) if s == "inf" => DemushkinF::Infinite,
                Some(FJson::Text(s)) => {
                    return Err(Error::Parse(format!(
                        "f must be an integer or \"inf\", got {s:?}"
                    )))
                }
            };
            Ok(GroupKind::Demushkin { d: *d, q: *q, f, alpha: alpha.unwrap_or(0) })
        }
        GroupKindJson::ThetaAbelian { d, q } => Ok(GroupKind::ThetaAbelian { d: *d, q: *q }),
        GroupKindJson::Fibre { inner, c } => Ok(GroupKind::FibreProduct {
            inner: Box::new(kind_from_json(inner, p)?),
            c: *c,
        }),
        GroupKindJson::FreeProduct { a, b } => Ok(GroupKind::FreeProduct {
            a: Box::new(kind_from_json(a, p)?),
            b: Box::new(kind_from_json(b, p)?),
        }),
    }
}
