//! Koszulity certification: truncated Tor tables from the reduced bar
//! complex, the diagonal-vanishing test, and the Hilbert-series criterion.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::fpfield::FpMatrix;
use crate::quadalg::QuadraticPresentation;
use crate::{Error, Result};

/// Default ceiling on the basis size of any single chain space.
pub const DEFAULT_RESOURCE_LIMIT: usize = 2_000_000;

/// Bigraded dimensions dim Tor_{i,j} for 0 <= i <= imax, 0 <= j <= jmax,
/// together with the chain-space dimensions they were computed from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorTable {
    pub imax: usize,
    pub jmax: usize,
    /// dims[i][j] = dim Tor_{i,j}
    pub dims: Vec<Vec<usize>>,
    /// chain_dims[i][j] = dim B_{i,j} of the reduced bar complex
    pub chain_dims: Vec<Vec<usize>>,
}

impl TorTable {
    pub fn tor(&self, i: usize, j: usize) -> usize {
        self.dims[i][j]
    }

    pub fn chain_dim(&self, i: usize, j: usize) -> usize {
        self.chain_dims[i][j]
    }

    /// First nonzero entry off the i = j diagonal, scanning internal degree
    /// j ascending and homological degree i ascending within each j.
    pub fn first_off_diagonal(&self) -> Option<(usize, usize)> {
        for j in 0..=self.jmax {
            for i in 0..=self.imax {
                if i != j && self.dims[i][j] != 0 {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

/// Outcome of the truncated Koszulity test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KoszulReport {
    /// Largest internal degree with all off-diagonal Tor zero.
    pub koszul_up_to: usize,
    /// First off-diagonal nonzero bidegree (i, j), if any.
    pub witness: Option<(usize, usize)>,
    /// Coefficients of h_A(t) * h_dual(-t) - 1 up to the bound.
    pub hilbert_defect: Vec<i64>,
    pub tor: TorTable,
}

// compositions of j into exactly i parts, each >= 1, lexicographic
fn compositions(j: usize, i: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if i == 0 {
        if j == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    let mut current = Vec::with_capacity(i);
    fn rec(remaining: usize, parts: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            if remaining >= 1 {
                current.push(remaining);
                out.push(current.clone());
                current.pop();
            }
            return;
        }
        // leave at least parts-1 for the rest
        for first in 1..=remaining.saturating_sub(parts - 1) {
            current.push(first);
            rec(remaining - first, parts - 1, current, out);
            current.pop();
        }
    }
    rec(j, i, &mut current, &mut out);
    out
}

// one bigraded piece B_{i,j} = direct sum over compositions of tensor
// products of graded components, on normal-monomial bases
struct ChainSpace {
    comps: Vec<Vec<usize>>,
    part_dims: Vec<Vec<usize>>,
    offsets: Vec<usize>,
    index_of_comp: HashMap<Vec<usize>, usize>,
    dim: usize,
}

impl ChainSpace {
    fn build(a: &QuadraticPresentation, i: usize, j: usize, limit: usize) -> Result<ChainSpace> {
        let comps = compositions(j, i);
        let mut part_dims = Vec::with_capacity(comps.len());
        let mut offsets = Vec::with_capacity(comps.len());
        let mut index_of_comp = HashMap::new();
        let mut dim = 0usize;
        for (ci, comp) in comps.iter().enumerate() {
            let dims: Vec<usize> = comp
                .iter()
                .map(|&part| a.component(part).map(|c| c.dim()))
                .collect::<Result<_>>()?;
            offsets.push(dim);
            dim += dims.iter().product::<usize>();
            if dim > limit {
                return Err(Error::ResourceLimit { needed: dim, limit });
            }
            part_dims.push(dims);
            index_of_comp.insert(comp.clone(), ci);
        }
        Ok(ChainSpace {
            comps,
            part_dims,
            offsets,
            index_of_comp,
            dim,
        })
    }

    fn tuple_index(&self, ci: usize, tuple: &[usize]) -> usize {
        let mut idx = 0usize;
        for (k, &m) in tuple.iter().enumerate() {
            idx = idx * self.part_dims[ci][k] + m;
        }
        self.offsets[ci] + idx
    }
}

// matrix of d_i : B_{i,j} -> B_{i-1,j}, rows indexed by the domain basis;
// d(a_1 (x) ... (x) a_i) alternates adjacent products with signs +, -, ...
fn differential(
    a: &QuadraticPresentation,
    domain: &ChainSpace,
    codomain: &ChainSpace,
    mult_cache: &mut HashMap<(usize, usize), FpMatrix>,
) -> Result<FpMatrix> {
    let field = a.field();
    let mut m = FpMatrix::zeros(field, domain.dim, codomain.dim);
    for (ci, comp) in domain.comps.iter().enumerate() {
        let i = comp.len();
        if i < 2 {
            continue;
        }
        let dims = &domain.part_dims[ci];
        if dims.iter().any(|&x| x == 0) {
            continue;
        }
        for k in 0..(i - 1) {
            let key = (comp[k], comp[k + 1]);
            if !mult_cache.contains_key(&key) {
                mult_cache.insert(key, a.mult_map(key.0, key.1)?);
            }
        }
        // odometer over the tuple of normal-basis indices
        let mut tuple = vec![0usize; i];
        loop {
            let row = domain.tuple_index(ci, &tuple);
            for k in 0..(i - 1) {
                let mut merged_comp = Vec::with_capacity(i - 1);
                merged_comp.extend_from_slice(&comp[..k]);
                merged_comp.push(comp[k] + comp[k + 1]);
                merged_comp.extend_from_slice(&comp[k + 2..]);
                let tci = codomain.index_of_comp[&merged_comp];
                let mm = &mult_cache[&(comp[k], comp[k + 1])];
                let mrow = mm.row(tuple[k] * dims[k + 1] + tuple[k + 1]);
                let mut merged_tuple = Vec::with_capacity(i - 1);
                merged_tuple.extend_from_slice(&tuple[..k]);
                merged_tuple.push(0);
                merged_tuple.extend_from_slice(&tuple[k + 2..]);
                for (t, &c) in mrow.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    merged_tuple[k] = t;
                    let col = codomain.tuple_index(tci, &merged_tuple);
                    let signed = if k % 2 == 0 { c } else { field.neg(c) };
                    m[(row, col)] = field.add(m[(row, col)], signed);
                }
            }
            // advance odometer
            let mut pos = i;
            while pos > 0 {
                pos -= 1;
                tuple[pos] += 1;
                if tuple[pos] < dims[pos] {
                    break;
                }
                tuple[pos] = 0;
                if pos == 0 {
                    pos = usize::MAX;
                    break;
                }
            }
            if pos == usize::MAX {
                break;
            }
        }
    }
    Ok(m)
}

/// Tor dimensions of A over F from the reduced bar complex, truncated to
/// homological degree imax and internal degree jmax, with the default
/// chain-space resource bound.
pub fn bar_tor(a: &QuadraticPresentation, imax: usize, jmax: usize) -> Result<TorTable> {
    bar_tor_with_limit(a, imax, jmax, DEFAULT_RESOURCE_LIMIT)
}

/// As bar_tor, with an explicit ceiling on any single chain-space basis.
pub fn bar_tor_with_limit(
    a: &QuadraticPresentation,
    imax: usize,
    jmax: usize,
    limit: usize,
) -> Result<TorTable> {
    if imax > jmax {
        return Err(Error::InvalidInput(format!(
            "homological bound {imax} exceeds internal bound {jmax}"
        )));
    }
    let mut dims = vec![vec![0usize; jmax + 1]; imax + 1];
    let mut chain_dims = vec![vec![0usize; jmax + 1]; imax + 1];
    let mut mult_cache: HashMap<(usize, usize), FpMatrix> = HashMap::new();
    for j in 0..=jmax {
        // chain spaces vanish for i > j, so d_{i+1} is zero there
        let top = j.min(imax + 1);
        let mut spaces = Vec::with_capacity(top + 1);
        for i in 0..=top {
            spaces.push(ChainSpace::build(a, i, j, limit)?);
        }
        let mut ranks = vec![0usize; top + 2];
        for i in 1..=top {
            let d_i = differential(a, &spaces[i], &spaces[i - 1], &mut mult_cache)?;
            ranks[i] = d_i.rref().0;
        }
        for i in 0..=imax.min(j) {
            chain_dims[i][j] = spaces[i].dim;
            // dim ker d_i - rank d_{i+1}
            dims[i][j] = spaces[i].dim - ranks[i] - ranks[i + 1];
        }
    }
    Ok(TorTable {
        imax,
        jmax,
        dims,
        chain_dims,
    })
}

/// Coefficients 0..=cap of h_A(t) * h_{A^!}(-t) - 1. Identically zero is
/// necessary for Koszulity.
pub fn hilbert_criterion(a: &QuadraticPresentation, cap: usize) -> Result<Vec<i64>> {
    let ha = a.hilbert(cap)?.dims;
    let hdual = a.koszul_dual().hilbert(cap)?.dims;
    let mut defect = Vec::with_capacity(cap + 1);
    for n in 0..=cap {
        let mut acc: i64 = if n == 0 { -1 } else { 0 };
        for k in 0..=n {
            let sign = if (n - k) % 2 == 0 { 1 } else { -1 };
            acc += sign * (ha[k] as i64) * (hdual[n - k] as i64);
        }
        defect.push(acc);
    }
    Ok(defect)
}

/// Runs the bar complex at (bound, bound) and reports the first
/// off-diagonal nonzero Tor, if any, along with the Hilbert defect.
pub fn is_koszul_up_to(a: &QuadraticPresentation, bound: usize) -> Result<KoszulReport> {
    is_koszul_up_to_with_limit(a, bound, DEFAULT_RESOURCE_LIMIT)
}

/// As is_koszul_up_to, with an explicit chain-space resource bound.
pub fn is_koszul_up_to_with_limit(
    a: &QuadraticPresentation,
    bound: usize,
    limit: usize,
) -> Result<KoszulReport> {
    let tor = bar_tor_with_limit(a, bound, bound, limit)?;
    let witness = tor.first_off_diagonal();
    let koszul_up_to = match witness {
        Some((_, j)) => j - 1,
        None => bound,
    };
    let hilbert_defect = hilbert_criterion(a, bound)?;
    Ok(KoszulReport {
        koszul_up_to,
        witness,
        hilbert_defect,
        tor,
    })
}
