//! Quadratic graded algebras over F_p: presentations, graded components,
//! Hilbert series, direct/free products, commuting and anticommuting tensor
//! products, Koszul duals, and the canonical families.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::fpfield::{FpMatrix, PrimeField, Subspace};
use crate::{Error, Result};

// soft guards so runaway degree requests fail cleanly instead of thrashing
const MAX_COMPONENT_ELEMENTS: usize = 50_000_000;
const MAX_ENGINE_WORK: u64 = 4_000_000_000;
const MAX_ENGINE_BYTES: u64 = 1_500_000_000;

/// A quadratic algebra presented by generators and a subspace of quadratic
/// relations: the tensor algebra on d generators modulo the two-sided ideal
/// generated by R_1 <= V (x) V. Coordinates on V (x) V list e_i (x) e_j
/// row-major.
pub struct QuadraticPresentation {
    field: PrimeField,
    labels: Vec<String>,
    relations: Subspace,
    memo: Arc<RwLock<HashMap<usize, Arc<ComponentBasis>>>>,
}

impl Clone for QuadraticPresentation {
    fn clone(&self) -> Self {
        // clones share the memo: same presentation, same components
        QuadraticPresentation {
            field: self.field,
            labels: self.labels.clone(),
            relations: self.relations.clone(),
            memo: Arc::clone(&self.memo),
        }
    }
}

impl PartialEq for QuadraticPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.labels == other.labels && self.relations == other.relations
    }
}

impl fmt::Debug for QuadraticPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QuadraticPresentation")
            .field("p", &self.field.p())
            .field("labels", &self.labels)
            .field("relation_dim", &self.relations.dim())
            .finish()
    }
}

/// Degree-n data of a quadratic algebra: the ideal component I_n inside
/// V^(x)n, and the normal monomials (coordinates whose classes form a basis
/// of A_n). Reduction eliminates the lex-largest monomial of each relation,
/// so normal monomials are the lex-smallest representatives.
pub struct ComponentBasis {
    pub degree: usize,
    /// I_n as a canonical subspace of F_p^{d^n}, natural coordinates.
    pub ideal: Subspace,
    // same space with coordinates reversed; pivots there are the eliminated
    // (lex-largest) monomials, which is what reduction works against
    reduction: Subspace,
    /// Monomial indices (length-lex order) whose classes form a basis of A_n.
    pub normal_monomials: Vec<usize>,
}

impl ComponentBasis {
    pub fn dim(&self) -> usize {
        self.normal_monomials.len()
    }

    /// v modulo I_n, expressed on the normal-monomial basis. Linear, and
    /// zero exactly on I_n.
    pub fn normal_form(&self, v: &[u64]) -> Result<Vec<u64>> {
        let ambient = self.ideal.ambient_dim();
        if v.len() != ambient {
            return Err(Error::DimensionMismatch {
                left: ambient,
                right: v.len(),
            });
        }
        let rev: Vec<u64> = v.iter().rev().copied().collect();
        let red = self.reduction.reduce_mod(&rev)?;
        Ok(self
            .normal_monomials
            .iter()
            .map(|&i| red[ambient - 1 - i])
            .collect())
    }
}

/// The sequence (dim A_0, ..., dim A_N); serialises as a plain array.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GradedDims {
    pub dims: Vec<usize>,
}

/// On-disk form of a presentation:
/// `{"p": 3, "generators": ["x1","x2"], "relations": [[...d^2 coeffs...]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PresentationJson {
    pub p: u64,
    pub generators: Vec<String>,
    pub relations: Vec<Vec<u64>>,
}

fn default_labels(d: usize) -> Vec<String> {
    (1..=d).map(|k| format!("x{k}")).collect()
}

fn checked_elements(d: usize, n: usize) -> Result<usize> {
    let size = d.checked_pow(n as u32).filter(|&s| s <= MAX_COMPONENT_ELEMENTS);
    size.ok_or(Error::ResourceLimit {
        needed: usize::MAX,
        limit: MAX_COMPONENT_ELEMENTS,
    })
}

impl QuadraticPresentation {
    pub fn new(field: PrimeField, labels: Vec<String>, relations: Subspace) -> Result<Self> {
        if relations.field() != field {
            return Err(Error::FieldMismatch {
                left: field.p(),
                right: relations.field().p(),
            });
        }
        let d = labels.len();
        if relations.ambient_dim() != d * d {
            return Err(Error::DimensionMismatch {
                left: d * d,
                right: relations.ambient_dim(),
            });
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l) {
                return Err(Error::InvalidInput(format!("duplicate generator label {l:?}")));
            }
        }
        Ok(QuadraticPresentation {
            field,
            labels,
            relations,
            memo: Arc::new(RwLock::new(HashMap::new())),
        })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn generator_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn relations(&self) -> &Subspace {
        &self.relations
    }

    /// Degree-n component, memoised. Concurrent readers are safe: a missing
    /// degree may be computed twice, but the first insert wins and the
    /// computation is deterministic.
    pub fn component(&self, n: usize) -> Result<Arc<ComponentBasis>> {
        if let Some(c) = self.memo.read().expect("memo poisoned").get(&n) {
            return Ok(Arc::clone(c));
        }
        let fresh = Arc::new(self.compute_component(n)?);
        let mut w = self.memo.write().expect("memo poisoned");
        Ok(Arc::clone(w.entry(n).or_insert(fresh)))
    }

    // I_n = sum over a+b = n-2 of V^(x)a (x) R_1 (x) V^(x)b, assembled
    // literally and reduced
    fn compute_component(&self, n: usize) -> Result<ComponentBasis> {
        let d = self.labels.len();
        let ambient = checked_elements(d, n)?;
        let mut ideal = Subspace::zero(self.field, ambient);
        if n >= 2 {
            for a in 0..=(n - 2) {
                let b = n - 2 - a;
                let left = d.pow(a as u32);
                let right = d.pow(b as u32);
                let mut rows = Vec::with_capacity(self.relations.dim() * left * right);
                for rho in self.relations.basis_rows() {
                    for u in 0..left {
                        for w in 0..right {
                            let mut v = vec![0u64; ambient];
                            for (pair, &c) in rho.iter().enumerate() {
                                if c != 0 {
                                    v[(u * d * d + pair) * right + w] = c;
                                }
                            }
                            rows.push(v);
                        }
                    }
                }
                let position = Subspace::from_spanning(self.field, ambient, &rows)?;
                ideal = ideal.sum(&position)?;
            }
        }
        let rev_rows: Vec<Vec<u64>> = ideal
            .basis_rows()
            .iter()
            .map(|r| r.iter().rev().copied().collect())
            .collect();
        let reduction = Subspace::from_spanning(self.field, ambient, &rev_rows)?;
        let mut eliminated = vec![false; ambient];
        for &pc in reduction.pivots() {
            eliminated[ambient - 1 - pc] = true;
        }
        let normal_monomials: Vec<usize> = (0..ambient).filter(|&i| !eliminated[i]).collect();
        debug_assert_eq!(normal_monomials.len() + ideal.dim(), ambient);
        Ok(ComponentBasis {
            degree: n,
            ideal,
            reduction,
            normal_monomials,
        })
    }

    /// Normal form of v in V^(x)n on the normal-monomial basis of A_n.
    pub fn normal_form(&self, n: usize, v: &[u64]) -> Result<Vec<u64>> {
        self.component(n)?.normal_form(v)
    }

    /// The multiplication A_i (x) A_j -> A_{i+j} on normal bases: row
    /// u * dim(A_j) + v holds normal_form(m_u . m_v).
    pub fn mult_map(&self, i: usize, j: usize) -> Result<FpMatrix> {
        let ci = self.component(i)?;
        let cj = self.component(j)?;
        let cij = self.component(i + j)?;
        let d = self.labels.len();
        let dj = d.pow(j as u32);
        let ambient = checked_elements(d, i + j)?;
        let mut m = FpMatrix::zeros(self.field, ci.dim() * cj.dim(), cij.dim());
        for (u, &mu) in ci.normal_monomials.iter().enumerate() {
            for (v, &mv) in cj.normal_monomials.iter().enumerate() {
                let mut e = vec![0u64; ambient];
                e[mu * dj + mv] = 1;
                let nf = cij.normal_form(&e)?;
                let r = u * cj.dim() + v;
                for (c, &x) in nf.iter().enumerate() {
                    m[(r, c)] = x;
                }
            }
        }
        Ok(m)
    }

    /// Graded dimensions (dim A_0, ..., dim A_cap). Computed by an iterative
    /// quotient engine equivalent to the degreewise ideal construction:
    /// A_n = (A_{n-1} (x) V) / K_n where K_n is spanned by the images of
    /// m (x) rho for m a basis element of A_{n-2} and rho a relation. Each
    /// entry matches component(n).dim().
    pub fn hilbert(&self, cap: usize) -> Result<GradedDims> {
        let d = self.labels.len();
        let mut dims = vec![1usize];
        if cap == 0 {
            return Ok(GradedDims { dims });
        }
        dims.push(d);
        if self.field.p() >= (1 << 16) {
            // the fast path packs residues into 16-bit rows; enormous primes
            // fall back to the literal construction
            for n in 2..=cap {
                dims.push(self.component(n)?.dim());
            }
            return Ok(GradedDims { dims });
        }
        let rel_rows = self.relations.basis_rows();
        let mut prev2_dim = 1usize;
        let mut prev = Level {
            dim: d,
            exprs: (0..d).map(Expr::Basis).collect(),
        };
        for n in 2..=cap {
            let need_exprs = n < cap;
            let lvl = next_level(self.field, d, &rel_rows, prev2_dim, &prev, need_exprs)?;
            dims.push(lvl.dim);
            prev2_dim = prev.dim;
            prev = lvl;
        }
        Ok(GradedDims { dims })
    }

    fn combined_labels(&self, other: &Self) -> Vec<String> {
        self.labels
            .iter()
            .map(|l| format!("A.{l}"))
            .chain(other.labels.iter().map(|l| format!("B.{l}")))
            .collect()
    }

    fn check_same_field(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field.p(),
                right: other.field.p(),
            });
        }
        Ok(())
    }

    // rows of `sub` (a subspace of F_p^{da^2}) re-indexed into the combined
    // (da+db)^2 coordinates with generator offsets (row_off, col_off)
    fn embedded_rows(sub: &Subspace, da: usize, dd: usize, row_off: usize, col_off: usize) -> Vec<Vec<u64>> {
        sub.basis_rows()
            .iter()
            .map(|r| {
                let mut v = vec![0u64; dd * dd];
                for i in 0..da {
                    for j in 0..da {
                        v[(i + row_off) * dd + (j + col_off)] = r[i * da + j];
                    }
                }
                v
            })
            .collect()
    }

    /// Direct product: componentwise sum in every positive degree. Relations
    /// are both blocks plus all mixed products in both orders.
    pub fn direct_product(&self, other: &Self) -> Result<Self> {
        self.check_same_field(other)?;
        let (da, db) = (self.labels.len(), other.labels.len());
        let dd = da + db;
        let mut rows = Self::embedded_rows(&self.relations, da, dd, 0, 0);
        rows.extend(Self::embedded_rows(&other.relations, db, dd, da, da));
        for i in 0..da {
            for j in 0..db {
                let mut ab = vec![0u64; dd * dd];
                ab[i * dd + (da + j)] = 1;
                rows.push(ab);
                let mut ba = vec![0u64; dd * dd];
                ba[(da + j) * dd + i] = 1;
                rows.push(ba);
            }
        }
        let relations = Subspace::from_spanning(self.field, dd * dd, &rows)?;
        Self::new(self.field, self.combined_labels(other), relations)
    }

    /// Free product: the two relation blocks and nothing else.
    pub fn free_product(&self, other: &Self) -> Result<Self> {
        self.check_same_field(other)?;
        let (da, db) = (self.labels.len(), other.labels.len());
        let dd = da + db;
        let mut rows = Self::embedded_rows(&self.relations, da, dd, 0, 0);
        rows.extend(Self::embedded_rows(&other.relations, db, dd, da, da));
        let relations = Subspace::from_spanning(self.field, dd * dd, &rows)?;
        Self::new(self.field, self.combined_labels(other), relations)
    }

    fn tensor_with_sign(&self, other: &Self, skew: bool) -> Result<Self> {
        self.check_same_field(other)?;
        let (da, db) = (self.labels.len(), other.labels.len());
        let dd = da + db;
        let mut rows = Self::embedded_rows(&self.relations, da, dd, 0, 0);
        rows.extend(Self::embedded_rows(&other.relations, db, dd, da, da));
        let opposite = if skew { 1 } else { self.field.neg(1) };
        for i in 0..da {
            for j in 0..db {
                let mut v = vec![0u64; dd * dd];
                v[i * dd + (da + j)] = 1;
                v[(da + j) * dd + i] = opposite;
                rows.push(v);
            }
        }
        let relations = Subspace::from_spanning(self.field, dd * dd, &rows)?;
        Self::new(self.field, self.combined_labels(other), relations)
    }

    /// Tensor product where the two factors commute: adds ab - ba.
    pub fn sym_tensor(&self, other: &Self) -> Result<Self> {
        self.tensor_with_sign(other, false)
    }

    /// Tensor product where the two factors anticommute: adds ab + ba.
    pub fn skew_tensor(&self, other: &Self) -> Result<Self> {
        self.tensor_with_sign(other, true)
    }

    /// The quadratic dual: same generator count, relations the annihilator
    /// of R_1 under the coordinatewise pairing that matches (i,j) with
    /// (i,j). Applying it twice gives back the original relations.
    pub fn koszul_dual(&self) -> Self {
        let relations = self.relations.annihilator();
        let labels = self.labels.iter().map(|l| format!("{l}*")).collect();
        Self::new(self.field, labels, relations).expect("dual of a valid presentation is valid")
    }

    pub fn to_json(&self) -> PresentationJson {
        PresentationJson {
            p: self.field.p(),
            generators: self.labels.clone(),
            relations: self.relations.basis_rows(),
        }
    }

    pub fn from_json(j: &PresentationJson) -> Result<Self> {
        let field = PrimeField::new(j.p)?;
        let d = j.generators.len();
        for r in &j.relations {
            if r.len() != d * d {
                return Err(Error::Parse(format!(
                    "relation row has {} coefficients, want d^2 = {}",
                    r.len(),
                    d * d
                )));
            }
            if let Some(&c) = r.iter().find(|&&c| c >= j.p) {
                return Err(Error::Parse(format!("coefficient {c} is not a residue mod {}", j.p)));
            }
        }
        let relations = Subspace::from_spanning(field, d * d, &j.relations)?;
        Self::new(field, j.generators.clone(), relations)
    }
}

/// Free algebra on d generators: no relations; dims d^n.
pub fn tensor_algebra(field: PrimeField, d: usize) -> Result<QuadraticPresentation> {
    QuadraticPresentation::new(field, default_labels(d), Subspace::zero(field, d * d))
}

/// Polynomial algebra: relations x_i x_j - x_j x_i; dims C(n+d-1, n).
pub fn symmetric(field: PrimeField, d: usize) -> Result<QuadraticPresentation> {
    let mut rows = Vec::new();
    for i in 0..d {
        for j in (i + 1)..d {
            let mut v = vec![0u64; d * d];
            v[i * d + j] = 1;
            v[j * d + i] = field.neg(1);
            rows.push(v);
        }
    }
    let relations = Subspace::from_spanning(field, d * d, &rows)?;
    QuadraticPresentation::new(field, default_labels(d), relations)
}

/// Exterior algebra: squares and x_i x_j + x_j x_i; dims C(d, n).
pub fn exterior(field: PrimeField, d: usize) -> Result<QuadraticPresentation> {
    let mut rows = Vec::new();
    for i in 0..d {
        let mut sq = vec![0u64; d * d];
        sq[i * d + i] = 1;
        rows.push(sq);
        for j in (i + 1)..d {
            let mut v = vec![0u64; d * d];
            v[i * d + j] = 1;
            v[j * d + i] = 1;
            rows.push(v);
        }
    }
    let relations = Subspace::from_spanning(field, d * d, &rows)?;
    QuadraticPresentation::new(field, default_labels(d), relations)
}

/// All products vanish: dims (1, d, 0, 0, ...). The dual of the free
/// algebra.
pub fn dual_numbers(field: PrimeField, d: usize) -> Result<QuadraticPresentation> {
    QuadraticPresentation::new(field, default_labels(d), Subspace::full(field, d * d))
}

/// Free algebra on an even number of generators modulo the single relation
/// x1 x2 - x2 x1 + x3 x4 - x4 x3 + ...; dims follow 1/(1 - dt + t^2).
pub fn demushkin_dual(field: PrimeField, d: usize) -> Result<QuadraticPresentation> {
    if d < 2 || d % 2 != 0 {
        return Err(Error::InvalidInput(format!(
            "pairwise relation needs an even generator count >= 2, got {d}"
        )));
    }
    let mut v = vec![0u64; d * d];
    for k in 0..(d / 2) {
        v[(2 * k) * d + (2 * k + 1)] = 1;
        v[(2 * k + 1) * d + (2 * k)] = field.neg(1);
    }
    let relations = Subspace::from_spanning(field, d * d, &[v])?;
    QuadraticPresentation::new(field, default_labels(d), relations)
}

// ---- iterative dimension engine ----

enum Expr {
    Basis(usize),
    Reduced(Vec<u16>),
}

struct Level {
    dim: usize,
    // expression of candidate (m, letter) = exprs[m * d + letter] in the
    // level's basis; empty when the caller only needed the dimension
    exprs: Vec<Expr>,
}

fn next_level(
    field: PrimeField,
    d: usize,
    rel_rows: &[Vec<u64>],
    prev2_dim: usize,
    prev: &Level,
    need_exprs: bool,
) -> Result<Level> {
    let cols = prev.dim * d;
    let total_rows = (prev2_dim * rel_rows.len()) as u64;
    let work = total_rows * cols as u64;
    if work > MAX_ENGINE_WORK {
        return Err(Error::ResourceLimit {
            needed: work as usize,
            limit: MAX_ENGINE_WORK as usize,
        });
    }
    let bytes = total_rows.min(cols as u64) * cols as u64 * 2;
    if bytes > MAX_ENGINE_BYTES {
        return Err(Error::ResourceLimit {
            needed: bytes as usize,
            limit: MAX_ENGINE_BYTES as usize,
        });
    }
    let p = field.p();
    let mut elim = Eliminator::new(field, cols);
    let mut acc = vec![0u64; cols];
    for m in 0..prev2_dim {
        for rho in rel_rows {
            acc.iter_mut().for_each(|x| *x = 0);
            for i in 0..d {
                match &prev.exprs[m * d + i] {
                    Expr::Basis(k) => {
                        for j in 0..d {
                            let c = rho[i * d + j];
                            if c != 0 {
                                acc[k * d + j] += c;
                            }
                        }
                    }
                    Expr::Reduced(vals) => {
                        for j in 0..d {
                            let c = rho[i * d + j];
                            if c == 0 {
                                continue;
                            }
                            for (k, &x) in vals.iter().enumerate() {
                                if x != 0 {
                                    acc[k * d + j] += c * x as u64;
                                }
                            }
                        }
                    }
                }
            }
            let row: Vec<u32> = acc.iter().map(|&x| (x % p) as u32).collect();
            elim.offer(row);
        }
    }
    let dim = cols - elim.rank();
    let exprs = if need_exprs {
        elim.back_substitute();
        elim.into_exprs()
    } else {
        Vec::new()
    };
    Ok(Level { dim, exprs })
}

// Streaming row reduction mod p with delayed reduction: incoming rows live
// in u32, pivot rows are stored reduced in u16 with leading coefficient 1.
// Eliminations add (p - c) * pivot_row, at most (p-1)^2 per entry per step;
// `budget` counts how many steps fit before a forced reduction pass.
struct Eliminator {
    field: PrimeField,
    p: u32,
    cols: usize,
    budget: usize,
    // ascending pivot column
    pivots: Vec<(usize, Vec<u16>)>,
}

impl Eliminator {
    fn new(field: PrimeField, cols: usize) -> Self {
        let p = field.p();
        assert!(p < (1 << 16), "engine rows are 16-bit residues");
        let pm1 = p - 1;
        let budget = ((u32::MAX as u64 - pm1) / (pm1 * pm1)).saturating_sub(1).max(1) as usize;
        Eliminator {
            field,
            p: p as u32,
            cols,
            budget,
            pivots: Vec::new(),
        }
    }

    fn rank(&self) -> usize {
        self.pivots.len()
    }

    fn offer(&mut self, mut row: Vec<u32>) -> bool {
        debug_assert_eq!(row.len(), self.cols);
        let p = self.p;
        let mut since = 0usize;
        for (pc, prow) in &self.pivots {
            let c = row[*pc] % p;
            if c == 0 {
                continue;
            }
            let cn = p - c;
            for (w, &x) in row[*pc..].iter_mut().zip(&prow[*pc..]) {
                *w += cn * x as u32;
            }
            since += 1;
            if since >= self.budget {
                row.iter_mut().for_each(|w| *w %= p);
                since = 0;
            }
        }
        row.iter_mut().for_each(|w| *w %= p);
        let Some(lead) = row.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.field.inv(row[lead] as u64);
        let reduced: Vec<u16> = row
            .iter()
            .map(|&x| ((x as u64 * inv) % self.p as u64) as u16)
            .collect();
        let at = self.pivots.partition_point(|(pc, _)| *pc < lead);
        self.pivots.insert(at, (lead, reduced));
        true
    }

    // clear every pivot column above its pivot, turning echelon form into
    // full reduced form; required before reading off expressions
    fn back_substitute(&mut self) {
        let p = self.p;
        for r in (0..self.pivots.len()).rev() {
            let row16 = std::mem::take(&mut self.pivots[r].1);
            let mut row: Vec<u32> = row16.into_iter().map(u32::from).collect();
            let mut since = 0usize;
            for r2 in (r + 1)..self.pivots.len() {
                let (pc2, prow2) = &self.pivots[r2];
                let c = row[*pc2] % p;
                if c == 0 {
                    continue;
                }
                let cn = p - c;
                for (w, &x) in row[*pc2..].iter_mut().zip(&prow2[*pc2..]) {
                    *w += cn * x as u32;
                }
                since += 1;
                if since >= self.budget {
                    row.iter_mut().for_each(|w| *w %= p);
                    since = 0;
                }
            }
            self.pivots[r].1 = row.into_iter().map(|x| (x % p) as u16).collect();
        }
    }

    // expression of each candidate column in the surviving (free-column)
    // basis: pivots become -rest, free columns become unit vectors
    fn into_exprs(self) -> Vec<Expr> {
        let p = self.p;
        let mut pivot_row = vec![usize::MAX; self.cols];
        for (r, (pc, _)) in self.pivots.iter().enumerate() {
            pivot_row[*pc] = r;
        }
        let free_cols: Vec<usize> = (0..self.cols).filter(|&c| pivot_row[c] == usize::MAX).collect();
        let mut exprs = Vec::with_capacity(self.cols);
        let mut free_rank = 0usize;
        for c in 0..self.cols {
            if pivot_row[c] == usize::MAX {
                exprs.push(Expr::Basis(free_rank));
                free_rank += 1;
            } else {
                let row = &self.pivots[pivot_row[c]].1;
                let vals: Vec<u16> = free_cols
                    .iter()
                    .map(|&fc| ((p - row[fc] as u32) % p) as u16)
                    .collect();
                exprs.push(Expr::Reduced(vals));
            }
        }
        exprs
    }
}
