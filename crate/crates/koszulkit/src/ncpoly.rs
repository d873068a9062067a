//! Truncated noncommutative power series over F_p, group words, and the
//! Magnus expansion x_i -> 1 + X_i.

use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::ToPrimitive;

use crate::fpfield::PrimeField;
use crate::{Error, Result};

const MAX_ALPHABET: usize = 255;

/// Exponent of a `Word::Power` node. `Exact` is an ordinary integer of any
/// size. `Padic` is an integer representative of a p-adic number known to
/// `digits` base-p digits, which determines every binomial C(n, k) mod p for
/// k up to that many digits; expanding past that is an error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Exponent {
    Exact(BigInt),
    Padic { value: BigUint, digits: u32 },
}

impl From<i64> for Exponent {
    fn from(n: i64) -> Self {
        Exponent::Exact(BigInt::from(n))
    }
}

impl From<BigInt> for Exponent {
    fn from(n: BigInt) -> Self {
        Exponent::Exact(n)
    }
}

/// A group word over generators x_1..x_d. `Gen(i)` is 0-based internally;
/// the text grammar writes it `x{i+1}`. The commutator is left-normed:
/// [u, v] = u v u^-1 v^-1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Word {
    Gen(usize),
    Inverse(Box<Word>),
    Power(Box<Word>, Exponent),
    Product(Vec<Word>),
    Commutator(Box<Word>, Box<Word>),
}

impl Word {
    pub fn gen(i: usize) -> Word {
        Word::Gen(i)
    }

    pub fn inverse(w: Word) -> Word {
        Word::Inverse(Box::new(w))
    }

    pub fn power(w: Word, e: impl Into<Exponent>) -> Word {
        Word::Power(Box::new(w), e.into())
    }

    pub fn product(ws: Vec<Word>) -> Word {
        Word::Product(ws)
    }

    pub fn commutator(u: Word, v: Word) -> Word {
        Word::Commutator(Box::new(u), Box::new(v))
    }

    pub fn node_count(&self) -> usize {
        match self {
            Word::Gen(_) => 1,
            Word::Inverse(w) | Word::Power(w, _) => 1 + w.node_count(),
            Word::Product(ws) => 1 + ws.iter().map(Word::node_count).sum::<usize>(),
            Word::Commutator(u, v) => 1 + u.node_count() + v.node_count(),
        }
    }

    /// Relabel generator indices, e.g. to embed a word into a larger
    /// alphabet.
    pub fn map_indices(&self, f: &impl Fn(usize) -> usize) -> Word {
        match self {
            Word::Gen(i) => Word::Gen(f(*i)),
            Word::Inverse(w) => Word::inverse(w.map_indices(f)),
            Word::Power(w, e) => Word::Power(Box::new(w.map_indices(f)), e.clone()),
            Word::Product(ws) => Word::Product(ws.iter().map(|w| w.map_indices(f)).collect()),
            Word::Commutator(u, v) => Word::commutator(u.map_indices(f), v.map_indices(f)),
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Word::Gen(i) => write!(f, "x{}", i + 1),
            Word::Inverse(w) => write!(f, "inv({w})"),
            Word::Power(w, Exponent::Exact(n)) => write!(f, "pow({w}, {n})"),
            Word::Power(w, Exponent::Padic { value, .. }) => write!(f, "pow({w}, {value})"),
            Word::Product(ws) => {
                if ws.is_empty() {
                    return write!(f, "pow(x1, 0)"); // empty product = identity
                }
                for (k, w) in ws.iter().enumerate() {
                    if k > 0 {
                        write!(f, " * ")?;
                    }
                    if matches!(w, Word::Product(_)) {
                        write!(f, "({w})")?;
                    } else {
                        write!(f, "{w}")?;
                    }
                }
                Ok(())
            }
            Word::Commutator(u, v) => write!(f, "comm({u}, {v})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    LParen,
    RParen,
    Comma,
    Star,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '(' {
            out.push(Tok::LParen);
            i += 1;
        } else if c == ')' {
            out.push(Tok::RParen);
            i += 1;
        } else if c == ',' {
            out.push(Tok::Comma);
            i += 1;
        } else if c == '*' {
            out.push(Tok::Star);
            i += 1;
        } else if c == '-' || c.is_ascii_digit() {
            let start = i;
            i += 1;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = cs[start..i].iter().collect();
            let n = text
                .parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("bad integer {text:?}")))?;
            out.push(Tok::Int(n));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < cs.len() && cs[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push(Tok::Ident(cs[start..i].iter().collect()));
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Result<Tok> {
        let t = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or_else(|| Error::Parse("unexpected end of word".into()))?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        let got = self.next()?;
        if got != want {
            return Err(Error::Parse(format!("expected {want:?}, got {got:?}")));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Word> {
        let mut factors = vec![self.factor()?];
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            factors.push(self.factor()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            Word::Product(factors)
        })
    }

    fn factor(&mut self) -> Result<Word> {
        match self.next()? {
            Tok::LParen => {
                let w = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(w)
            }
            Tok::Ident(name) if name == "inv" => {
                self.expect(Tok::LParen)?;
                let w = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(Word::inverse(w))
            }
            Tok::Ident(name) if name == "pow" => {
                self.expect(Tok::LParen)?;
                let w = self.expr()?;
                self.expect(Tok::Comma)?;
                let n = match self.next()? {
                    Tok::Int(n) => n,
                    other => return Err(Error::Parse(format!("expected integer exponent, got {other:?}"))),
                };
                self.expect(Tok::RParen)?;
                Ok(Word::power(w, n))
            }
            Tok::Ident(name) if name == "comm" => {
                self.expect(Tok::LParen)?;
                let u = self.expr()?;
                self.expect(Tok::Comma)?;
                let v = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(Word::commutator(u, v))
            }
            Tok::Ident(name) => {
                let digits = name.strip_prefix('x').unwrap_or("");
                let k: usize = digits
                    .parse()
                    .map_err(|_| Error::Parse(format!("unknown name {name:?} (want x1, x2, ... or inv/pow/comm)")))?;
                if k == 0 {
                    return Err(Error::Parse("generator numbering starts at x1".into()));
                }
                Ok(Word::Gen(k - 1))
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parse the word grammar: `x3`, `inv(w)`, `pow(w, n)`, `comm(w, w)`,
/// `w * w`, with parentheses for grouping.
pub fn parse_word(s: &str) -> Result<Word> {
    let toks = tokenize(s)?;
    let mut p = Parser { toks, pos: 0 };
    let w = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input after word: {:?}", &p.toks[p.pos..])));
    }
    Ok(w)
}

/// Index of a monomial among the d^k monomials of its degree, in
/// length-lexicographic order with X_1 < X_2 < ... (leftmost letter most
/// significant).
pub fn monomial_index(d: usize, m: &[u8]) -> usize {
    m.iter().fold(0, |acc, &l| acc * d + l as usize)
}

/// Inverse of `monomial_index` for fixed degree.
pub fn monomial_of_index(d: usize, degree: usize, mut idx: usize) -> Vec<u8> {
    let mut m = vec![0u8; degree];
    for slot in m.iter_mut().rev() {
        *slot = (idx % d) as u8;
        idx /= d;
    }
    m
}

/// One graded piece of an NcPoly: a dense coefficient vector over the d^k
/// degree-k monomials in length-lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneousPart {
    pub degree: usize,
    pub coeffs: Vec<u64>,
}

impl HomogeneousPart {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

/// A noncommutative polynomial over F_p in letters X_1..X_d, truncated to
/// total degree <= cap. Only nonzero coefficients are stored, keyed by the
/// letter sequence (0-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NcPoly {
    field: PrimeField,
    d: usize,
    cap: usize,
    coeffs: HashMap<Vec<u8>, u64>,
}

impl NcPoly {
    pub fn zero(field: PrimeField, d: usize, cap: usize) -> Result<Self> {
        if d > MAX_ALPHABET {
            return Err(Error::InvalidInput(format!("alphabet size {d} exceeds {MAX_ALPHABET}")));
        }
        Ok(NcPoly {
            field,
            d,
            cap,
            coeffs: HashMap::new(),
        })
    }

    pub fn one(field: PrimeField, d: usize, cap: usize) -> Result<Self> {
        let mut p = Self::zero(field, d, cap)?;
        p.add_term(Vec::new(), 1);
        Ok(p)
    }

    /// The letter X_{i+1} as a polynomial.
    pub fn letter(field: PrimeField, d: usize, cap: usize, i: usize) -> Result<Self> {
        if i >= d {
            return Err(Error::IndexOutOfRange { index: i, alphabet: d });
        }
        let mut p = Self::zero(field, d, cap)?;
        if cap >= 1 {
            p.add_term(vec![i as u8], 1);
        }
        Ok(p)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn alphabet_size(&self) -> usize {
        self.d
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn coeff(&self, m: &[u8]) -> u64 {
        self.coeffs.get(m).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeff(&[]) == 1
    }

    /// Terms in length-lexicographic order; the canonical linearisation.
    pub fn sorted_terms(&self) -> Vec<(Vec<u8>, u64)> {
        let mut terms: Vec<(Vec<u8>, u64)> = self.coeffs.iter().map(|(m, &c)| (m.clone(), c)).collect();
        terms.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
        terms
    }

    // maintains the no-zero-coefficients invariant
    fn add_term(&mut self, m: Vec<u8>, c: u64) {
        if c == 0 || m.len() > self.cap {
            return;
        }
        let entry = self.coeffs.entry(m);
        match entry {
            std::collections::hash_map::Entry::Occupied(mut o) => {
                let s = self.field.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
            std::collections::hash_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    fn check_compatible(&self, other: &NcPoly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field.p(),
                right: other.field.p(),
            });
        }
        if self.d != other.d {
            return Err(Error::AlphabetMismatch {
                left: self.d,
                right: other.d,
            });
        }
        if self.cap != other.cap {
            return Err(Error::CapMismatch {
                left: self.cap,
                right: other.cap,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &NcPoly) -> Result<NcPoly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.coeffs {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &NcPoly) -> Result<NcPoly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.coeffs {
            out.add_term(m.clone(), self.field.neg(c));
        }
        Ok(out)
    }

    pub fn scale(&self, s: u64) -> NcPoly {
        let mut out = NcPoly {
            field: self.field,
            d: self.d,
            cap: self.cap,
            coeffs: HashMap::new(),
        };
        for (m, &c) in &self.coeffs {
            out.add_term(m.clone(), self.field.mul(c, s));
        }
        out
    }

    /// Concatenation product, discarding all terms above the cap.
    pub fn nc_mul(&self, other: &NcPoly) -> Result<NcPoly> {
        self.check_compatible(other)?;
        let mut out = NcPoly {
            field: self.field,
            d: self.d,
            cap: self.cap,
            coeffs: HashMap::new(),
        };
        for (m1, &c1) in &self.coeffs {
            for (m2, &c2) in &other.coeffs {
                if m1.len() + m2.len() > self.cap {
                    continue;
                }
                let mut m = Vec::with_capacity(m1.len() + m2.len());
                m.extend_from_slice(m1);
                m.extend_from_slice(m2);
                out.add_term(m, self.field.mul(c1, c2));
            }
        }
        Ok(out)
    }

    /// Smallest degree >= 1 carrying a nonzero coefficient.
    pub fn min_positive_degree(&self) -> Option<usize> {
        self.coeffs.keys().filter(|m| !m.is_empty()).map(|m| m.len()).min()
    }

    pub fn homogeneous_part(&self, k: usize) -> HomogeneousPart {
        let len = (self.d).checked_pow(k as u32).expect("degree slice too large");
        let mut coeffs = vec![0u64; len];
        for (m, &c) in &self.coeffs {
            if m.len() == k {
                coeffs[monomial_index(self.d, m)] = c;
            }
        }
        HomogeneousPart { degree: k, coeffs }
    }
}

impl fmt::Display for NcPoly {
    /// Terms in length-lexicographic order, coefficients as balanced
    /// representatives, runs of a letter collapsed to a power.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.sorted_terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        let p = self.field.p();
        for (k, (m, c)) in terms.iter().enumerate() {
            let negative = 2 * c > p;
            let mag = if negative { p - c } else { *c };
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_empty() {
                write!(f, "{mag}")?;
            } else {
                if mag != 1 {
                    write!(f, "{mag}*")?;
                }
                let mut i = 0;
                while i < m.len() {
                    let mut j = i;
                    while j < m.len() && m[j] == m[i] {
                        j += 1;
                    }
                    let run = j - i;
                    if run == 1 {
                        write!(f, "X{}", m[i] + 1)?;
                    } else {
                        write!(f, "X{}^{}", m[i] + 1, run)?;
                    }
                    i = j;
                }
            }
        }
        Ok(())
    }
}

fn small_binom(field: PrimeField, n: u64, k: u64) -> u64 {
    // n, k < p, so numerator factors and inverses stay in the field
    if k > n {
        return 0;
    }
    let mut acc = 1;
    for i in 1..=k {
        acc = field.mul(acc, (n - k + i) % field.p());
        acc = field.mul(acc, field.inv(i % field.p()));
    }
    acc
}

// C(n, k) mod p by Lucas' theorem on base-p digits.
fn lucas(field: PrimeField, n: &BigUint, k: usize) -> u64 {
    let p = BigUint::from(field.p());
    let mut n = n.clone();
    let mut k = k as u64;
    let mut acc = 1;
    while k > 0 {
        if acc == 0 {
            return 0;
        }
        let nd = (&n % &p).to_u64().unwrap();
        let kd = k % field.p();
        acc = field.mul(acc, small_binom(field, nd, kd));
        n /= &p;
        k /= field.p();
    }
    acc
}

/// C(e, k) mod p for an exponent node. Negative exact exponents use
/// C(-m, k) = (-1)^k C(m+k-1, k). A p-adic representative is reduced mod
/// p^digits first; its digits determine the value by Lucas' theorem, which
/// is why `digits >= cap` is required upstream.
fn binom_mod(field: PrimeField, e: &Exponent, k: usize) -> u64 {
    if k == 0 {
        return 1;
    }
    match e {
        Exponent::Exact(n) => match n.sign() {
            Sign::NoSign => 0,
            Sign::Plus => lucas(field, n.magnitude(), k),
            Sign::Minus => {
                let m = n.magnitude() + BigUint::from(k as u64 - 1);
                let b = lucas(field, &m, k);
                if k % 2 == 1 {
                    field.neg(b)
                } else {
                    b
                }
            }
        },
        Exponent::Padic { value, digits } => {
            let modulus = BigUint::from(field.p()).pow(*digits);
            let v = value % &modulus;
            lucas(field, &v, k)
        }
    }
}

// (1 + u)^e truncated, where a = 1 + u and u has no constant term: the sum
// of C(e, k) u^k stops at k = cap because u^k has minimum degree k.
fn power_poly(a: &NcPoly, e: &Exponent) -> Result<NcPoly> {
    if let Exponent::Padic { digits, .. } = e {
        if (*digits as usize) < a.cap {
            return Err(Error::InsufficientExponentPrecision { cap: a.cap });
        }
    }
    debug_assert_eq!(a.coeff(&[]), 1, "group words always expand with constant term 1");
    let field = a.field;
    let mut u = a.clone();
    u.coeffs.remove(&Vec::new());
    let mut out = NcPoly::one(field, a.d, a.cap)?;
    let mut upow = NcPoly::one(field, a.d, a.cap)?;
    for k in 1..=a.cap {
        upow = upow.nc_mul(&u)?;
        if upow.is_zero() {
            break;
        }
        let c = binom_mod(field, e, k);
        if c != 0 {
            out = out.add(&upow.scale(c))?;
        }
    }
    Ok(out)
}

/// The Magnus expansion of a word: x_i -> 1 + X_i, extended over inverses
/// (truncated geometric series), arbitrary integer powers (binomial series
/// mod p), products, and commutators, all truncated at the cap.
pub fn magnus_expand(w: &Word, field: PrimeField, d: usize, cap: usize) -> Result<NcPoly> {
    match w {
        Word::Gen(i) => {
            if *i >= d {
                return Err(Error::IndexOutOfRange { index: *i, alphabet: d });
            }
            let one = NcPoly::one(field, d, cap)?;
            one.add(&NcPoly::letter(field, d, cap, *i)?)
        }
        Word::Inverse(u) => {
            let a = magnus_expand(u, field, d, cap)?;
            power_poly(&a, &Exponent::Exact(BigInt::from(-1)))
        }
        Word::Power(u, e) => {
            let a = magnus_expand(u, field, d, cap)?;
            power_poly(&a, e)
        }
        Word::Product(ws) => {
            let mut out = NcPoly::one(field, d, cap)?;
            for w in ws {
                out = out.nc_mul(&magnus_expand(w, field, d, cap)?)?;
            }
            Ok(out)
        }
        Word::Commutator(u, v) => {
            let a = magnus_expand(u, field, d, cap)?;
            let b = magnus_expand(v, field, d, cap)?;
            let ai = power_poly(&a, &Exponent::Exact(BigInt::from(-1)))?;
            let bi = power_poly(&b, &Exponent::Exact(BigInt::from(-1)))?;
            a.nc_mul(&b)?.nc_mul(&ai)?.nc_mul(&bi)
        }
    }
}

/// Minimal degree k >= 1 with a nonzero homogeneous part of magnus(w) - 1,
/// together with that part. In a free group this certifies membership in
/// the k-th filtration layer but not the (k+1)-st. Errors with
/// `TrivialBeyondCap` when the expansion is 1 up to the cap.
pub fn initial_form(w: &Word, field: PrimeField, d: usize, cap: usize) -> Result<(usize, HomogeneousPart)> {
    let a = magnus_expand(w, field, d, cap)?;
    let k = a.min_positive_degree().ok_or(Error::TrivialBeyondCap)?;
    Ok((k, a.homogeneous_part(k)))
}

/// Degree-2 part of magnus(w) - 1 as a vector of length d^2, coordinates on
/// X_iX_j row-major. Requires the degree-1 part to vanish (w in the second
/// filtration layer); the result may still be the zero vector.
pub fn psi2(w: &Word, field: PrimeField, d: usize) -> Result<Vec<u64>> {
    let a = magnus_expand(w, field, d, 2)?;
    if !a.homogeneous_part(1).is_zero() {
        return Err(Error::NotInD2);
    }
    Ok(a.homogeneous_part(2).coeffs)
}

