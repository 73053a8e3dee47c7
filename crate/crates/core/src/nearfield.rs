//! Finite Dickson nearfields DN(q,n).
//!
//! The underlying field GF(q^n) is built as GF(p)[x]/(f) for the
//! lexicographically smallest monic irreducible `f`. Every nonzero element is
//! a power `g^k` of the smallest primitive element `g`, and the twisted
//! product is
//!
//! ```text
//! a ∘ b = a · b^(q^j(a)),   j(a) = the j with k ≡ (q^j − 1)/(q − 1) (mod n)
//! ```
//!
//! which is left distributive, associative, and for n = 1 collapses to the
//! field product.

use std::fmt;

use crate::arith;
use crate::error::{Error, Result};

/// Largest order for which log tables are built.
pub const MAX_ORDER: u64 = 1 << 20;
/// Largest order for which full operation tables are produced.
pub const MAX_TABLE_ORDER: u64 = 1 << 12;
/// Orders up to this size get precomputed `+` and `∘` tables.
const DENSE_TABLE_ORDER: u32 = 256;

/// A nearfield element, stored as its integer code `Σ c_i p^i`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Elem(pub(crate) u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Which Dickson-pair condition a candidate `(q, n)` fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairViolation {
    NotPrimePower { q: u64 },
    PrimeDivisorOfN { r: u64, q: u64 },
    FourDividesN,
}

impl fmt::Display for PairViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairViolation::NotPrimePower { q } => write!(f, "{q} is not a prime power"),
            PairViolation::PrimeDivisorOfN { r, q } => {
                write!(f, "{r} does not divide q−1={}", q - 1)
            }
            PairViolation::FourDividesN => write!(f, "q ≡ 3 mod 4 and 4 | n"),
        }
    }
}

/// A validated Dickson pair `(q, n)` with `q = p^l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DicksonPair {
    q: u64,
    n: u64,
    p: u64,
    l: u32,
}

impl DicksonPair {
    /// Checks the three Dickson conditions. Inputs outside `q ≥ 2, n ≥ 1`
    /// are an error; a well-formed but failing pair is `Ok(Err(_))`.
    pub fn validate(q: u64, n: u64) -> Result<std::result::Result<DicksonPair, PairViolation>> {
        if q < 2 || n < 1 {
            return Err(Error::InvalidInput(format!(
                "Dickson pair needs q ≥ 2 and n ≥ 1, got ({q},{n})"
            )));
        }
        let Some((p, l)) = arith::prime_power(q) else {
            return Ok(Err(PairViolation::NotPrimePower { q }));
        };
        if let Some(r) = arith::prime_divisors(n).into_iter().find(|r| !(q - 1).is_multiple_of(*r)) {
            return Ok(Err(PairViolation::PrimeDivisorOfN { r, q }));
        }
        if q % 4 == 3 && n.is_multiple_of(4) {
            return Ok(Err(PairViolation::FourDividesN));
        }
        Ok(Ok(DicksonPair { q, n, p, l }))
    }

    pub fn new(q: u64, n: u64) -> Result<DicksonPair> {
        Self::validate(q, n)?.map_err(|v| Error::InvalidPair { q, n, reason: v.to_string() })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// The order `q^n`, or `None` on overflow.
    pub fn order(&self) -> Option<u64> {
        self.q.checked_pow(u32::try_from(self.n).ok()?)
    }
}

/// A triple violating right distributivity: `(α+β)∘λ ≠ α∘λ + β∘λ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Witness {
    pub alpha: Elem,
    pub beta: Elem,
    pub lambda: Elem,
}

/// Textual style for elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Style {
    /// `2+2x`, `1+x^2`, `0`
    #[default]
    Poly,
    /// the bare integer code
    Code,
}

/// An immutable, fully tabulated Dickson nearfield.
#[derive(Clone)]
pub struct Nearfield {
    pair: DicksonPair,
    p: u32,
    degree: u32,
    order: u32,
    modulus: Vec<u32>,
    generator: Elem,
    exp: Vec<u32>,
    log: Vec<u32>,
    /// `coset[k mod n]` = automorphism index j
    coset: Vec<u32>,
    /// `q^j mod (order − 1)` for j < n
    frob_exp: Vec<u64>,
    neg: Vec<u32>,
    inv: Vec<u32>,
    add_table: Option<Vec<u32>>,
    mul_table: Option<Vec<u32>>,
    witness: Option<Witness>,
}

impl fmt::Debug for Nearfield {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Nearfield")
            .field("q", &self.pair.q)
            .field("n", &self.pair.n)
            .field("modulus", &self.modulus)
            .field("generator", &self.generator)
            .finish()
    }
}

impl Nearfield {
    /// Builds DN(q,n), refusing orders above `max_order` (itself capped at
    /// [`MAX_ORDER`]).
    pub fn build(q: u64, n: u64, max_order: u64) -> Result<Nearfield> {
        let pair = DicksonPair::new(q, n)?;
        let limit = max_order.min(MAX_ORDER);
        let order = match pair.order() {
            Some(o) if o <= limit => o,
            Some(o) => return Err(Error::OrderTooLarge { order: o, limit }),
            None => return Err(Error::OrderTooLarge { order: u64::MAX, limit }),
        };
        let p = pair.p as u32;
        let degree = pair.l * n as u32;
        let order = order as u32;

        let modulus = arith::smallest_irreducible(p, degree)
            .ok_or(Error::NoIrreducible { p: pair.p, degree })?;

        let group = order as u64 - 1;
        let divisors = arith::prime_divisors(group);
        let generator = (1..order)
            .find(|&c| {
                let poly = arith::digits_of(c, p, degree);
                divisors
                    .iter()
                    .all(|r| arith::pow_mod(&poly, group / r, &modulus, p) != [1])
            })
            .ok_or_else(|| Error::Internal("no primitive element".into()))?;

        let gpoly = arith::digits_of(generator, p, degree);
        let mut exp = Vec::with_capacity(group as usize);
        let mut log = vec![u32::MAX; order as usize];
        let mut cur = vec![1u32];
        for k in 0..group as u32 {
            let code = arith::code_of(&cur, p);
            if code == 0 || log[code as usize] != u32::MAX {
                return Err(Error::Internal("generator is not primitive".into()));
            }
            log[code as usize] = k;
            exp.push(code);
            cur = arith::mul_mod(&cur, &gpoly, &modulus, p);
        }
        if cur != [1] {
            return Err(Error::Internal("g^(order−1) ≠ 1".into()));
        }

        // residues (q^j − 1)/(q − 1) = 1 + q + … + q^(j−1) mod n
        let mut coset = vec![u32::MAX; n as usize];
        let mut residue = 0u64;
        let mut q_pow = 1u64;
        for j in 0..n as u32 {
            let slot = &mut coset[residue as usize];
            if *slot != u32::MAX {
                return Err(Error::Internal("coupling residues are not distinct".into()));
            }
            *slot = j;
            residue = (residue + q_pow) % n;
            q_pow = q_pow * (q % n) % n;
        }
        let mut frob_exp = Vec::with_capacity(n as usize);
        let mut f = 1 % group.max(1);
        for _ in 0..n {
            frob_exp.push(f);
            f = f * (q % group.max(1)) % group.max(1);
        }

        let mut nf = Nearfield {
            pair,
            p,
            degree,
            order,
            modulus,
            generator: Elem(generator),
            exp,
            log,
            coset,
            frob_exp,
            neg: Vec::new(),
            inv: Vec::new(),
            add_table: None,
            mul_table: None,
            witness: None,
        };
        nf.neg = (0..order).map(|a| nf.neg_slow(a)).collect();
        nf.inv = (0..order).map(|a| if a == 0 { 0 } else { nf.inv_slow(a) }).collect();
        if order <= DENSE_TABLE_ORDER {
            let n2 = (order * order) as usize;
            let mut add = Vec::with_capacity(n2);
            let mut mul = Vec::with_capacity(n2);
            for a in 0..order {
                for b in 0..order {
                    add.push(nf.add_slow(a, b));
                    mul.push(nf.mul_slow(a, b));
                }
            }
            nf.add_table = Some(add);
            nf.mul_table = Some(mul);
        }
        nf.witness = if nf.is_field() { None } else { nf.search_witness() };
        if !nf.is_field() && nf.witness.is_none() {
            return Err(Error::Internal("proper nearfield without witness".into()));
        }
        Ok(nf)
    }

    pub fn pair(&self) -> DicksonPair {
        self.pair
    }

    pub fn q(&self) -> u64 {
        self.pair.q
    }

    pub fn n(&self) -> u64 {
        self.pair.n
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Extension degree `l·n` of GF(q^n) over GF(p).
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Monic modulus, low-degree coefficient first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> Elem {
        self.generator
    }

    pub fn is_field(&self) -> bool {
        self.pair.n == 1
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.order).map(Elem)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Elem> + Clone {
        (1..self.order).map(Elem)
    }

    pub fn elem(&self, code: u32) -> Result<Elem> {
        if code < self.order {
            Ok(Elem(code))
        } else {
            Err(Error::InvalidInput(format!(
                "code {code} out of range for order {}",
                self.order
            )))
        }
    }

    /// Discrete logarithm to the base of [`generator`](Self::generator).
    pub fn log(&self, a: Elem) -> Option<u32> {
        (!a.is_zero()).then(|| self.log[a.0 as usize])
    }

    /// `g^k` for the canonical generator.
    pub fn pow_generator(&self, k: u64) -> Elem {
        Elem(self.exp[(k % self.exp.len() as u64) as usize])
    }

    fn add_slow(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        while a > 0 || b > 0 {
            out += (a % self.p + b % self.p) % self.p * place;
            place *= self.p;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    fn neg_slow(&self, a: u32) -> u32 {
        let (mut a, mut out, mut place) = (a, 0, 1);
        while a > 0 {
            out += (self.p - a % self.p) % self.p * place;
            place *= self.p;
            a /= self.p;
        }
        out
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let group = self.exp.len() as u64;
        let la = self.log[a as usize] as u64;
        let lb = self.log[b as usize] as u64;
        let j = self.coset[(la % self.pair.n) as usize] as usize;
        self.exp[((la + lb * self.frob_exp[j]) % group) as usize]
    }

    fn inv_slow(&self, a: u32) -> u32 {
        // a·b^(q^j) = 1  ⇔  log b = −log a · q^(n−j)
        let group = self.exp.len() as u64;
        let la = self.log[a as usize] as u64;
        let j = self.coset[(la % self.pair.n) as usize] as usize;
        let back = self.frob_exp[(self.pair.n as usize - j) % self.pair.n as usize];
        let lb = (group - la % group) % group * back % group;
        self.exp[lb as usize]
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.add_table {
            Some(t) => Elem(t[(a.0 * self.order + b.0) as usize]),
            None => Elem(self.add_slow(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    /// The nearfield product `a ∘ b`.
    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.mul_table {
            Some(t) => Elem(t[(a.0 * self.order + b.0) as usize]),
            None => Elem(self.mul_slow(a.0, b.0)),
        }
    }

    /// The untwisted product of the underlying Galois field.
    pub fn field_mul(&self, a: Elem, b: Elem) -> Elem {
        if a.is_zero() || b.is_zero() {
            return Elem::ZERO;
        }
        let group = self.exp.len() as u64;
        let l = self.log[a.0 as usize] as u64 + self.log[b.0 as usize] as u64;
        Elem(self.exp[(l % group) as usize])
    }

    /// `a^(q^j)` in the underlying field.
    pub fn frobenius(&self, a: Elem, j: u32) -> Elem {
        if a.is_zero() {
            return a;
        }
        let group = self.exp.len() as u64;
        let e = self.frob_exp[j as usize % self.frob_exp.len()];
        Elem(self.exp[(self.log[a.0 as usize] as u64 * e % group) as usize])
    }

    /// The inverse with respect to `∘`.
    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let b = Elem(self.inv[a.0 as usize]);
        debug_assert!(self.mul(a, b) == Elem::ONE && self.mul(b, a) == Elem::ONE);
        Ok(b)
    }

    #[inline]
    pub(crate) fn inv_nonzero(&self, a: Elem) -> Elem {
        Elem(self.inv[a.0 as usize])
    }

    /// Automorphism index `j(a)` used by `a ∘ ·`. For n = 2 it is 0 exactly on
    /// the squares.
    pub fn coset_index(&self, a: Elem) -> Result<u32> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let k = self.log[a.0 as usize] as u64;
        Ok(self.coset[(k % self.pair.n) as usize])
    }

    /// The first right-distributivity violation in lexicographic code order,
    /// or `None` for a field.
    pub fn find_witness(&self) -> Option<Witness> {
        self.witness
    }

    fn search_witness(&self) -> Option<Witness> {
        for a in self.elements() {
            for b in self.elements() {
                let sum = self.add(a, b);
                for l in self.elements() {
                    if self.mul(sum, l) != self.add(self.mul(a, l), self.mul(b, l)) {
                        return Some(Witness { alpha: a, beta: b, lambda: l });
                    }
                }
            }
        }
        None
    }

    pub fn is_witness(&self, w: &Witness) -> bool {
        let lhs = self.mul(self.add(w.alpha, w.beta), w.lambda);
        let rhs = self.add(self.mul(w.alpha, w.lambda), self.mul(w.beta, w.lambda));
        lhs != rhs
    }

    /// Full `∘` table, `table[a][b] = a ∘ b` (row index is the left operand).
    pub fn mul_table(&self) -> Result<Vec<Vec<Elem>>> {
        self.table_with(|a, b| self.mul(a, b))
    }

    pub fn add_table(&self) -> Result<Vec<Vec<Elem>>> {
        self.table_with(|a, b| self.add(a, b))
    }

    fn table_with(&self, op: impl Fn(Elem, Elem) -> Elem) -> Result<Vec<Vec<Elem>>> {
        if self.order as u64 > MAX_TABLE_ORDER {
            return Err(Error::OrderTooLarge {
                order: self.order as u64,
                limit: MAX_TABLE_ORDER,
            });
        }
        Ok(self
            .elements()
            .map(|a| self.elements().map(|b| op(a, b)).collect())
            .collect())
    }

    /// Formats an element in the requested style.
    pub fn format_elem(&self, a: Elem, style: Style) -> String {
        match style {
            Style::Code => a.0.to_string(),
            Style::Poly => {
                let digits = arith::digits_of(a.0, self.p, self.degree);
                let terms: Vec<String> = digits
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(i, &c)| match (i, c) {
                        (0, c) => c.to_string(),
                        (1, 1) => "x".to_string(),
                        (1, c) => format!("{c}x"),
                        (i, 1) => format!("x^{i}"),
                        (i, c) => format!("{c}x^{i}"),
                    })
                    .collect();
                if terms.is_empty() {
                    "0".to_string()
                } else {
                    terms.join("+")
                }
            }
        }
    }

    /// Parses an element token. A bare decimal integer is an element code;
    /// anything else must be a sum of terms `c`, `x`, `cx`, `x^k`, `cx^k` in
    /// strictly ascending powers.
    pub fn parse_elem(&self, token: &str) -> Result<Elem> {
        let token = token.trim();
        let bad = |msg: &str| Error::Element { token: token.to_string(), msg: msg.to_string() };
        if token.is_empty() {
            return Err(bad("empty token"));
        }
        if token.bytes().all(|b| b.is_ascii_digit()) {
            let code: u64 = token.parse().map_err(|_| bad("integer out of range"))?;
            if code >= self.order as u64 {
                return Err(bad("code ≥ order"));
            }
            return Ok(Elem(code as u32));
        }
        let mut digits = vec![0u32; self.degree as usize];
        let mut last_power: Option<u32> = None;
        for term in token.split('+') {
            let (coeff_text, power) = match term.find('x') {
                None => (term, 0u32),
                Some(pos) => {
                    let rest = &term[pos + 1..];
                    let power = if rest.is_empty() {
                        1
                    } else if let Some(k) = rest.strip_prefix('^') {
                        if k.is_empty() || !k.bytes().all(|b| b.is_ascii_digit()) {
                            return Err(bad("malformed exponent"));
                        }
                        k.parse().map_err(|_| bad("power ≥ d"))?
                    } else {
                        return Err(bad("malformed term"));
                    };
                    (&term[..pos], power)
                }
            };
            let coeff = if coeff_text.is_empty() {
                if power == 0 {
                    return Err(bad("empty term"));
                }
                1
            } else if coeff_text.bytes().all(|b| b.is_ascii_digit()) {
                coeff_text.parse::<u64>().map_err(|_| bad("coefficient ≥ p"))?
            } else {
                return Err(bad("malformed coefficient"));
            };
            if coeff == 0 {
                return Err(bad("zero coefficient"));
            }
            if coeff >= self.p as u64 {
                return Err(bad("coefficient ≥ p"));
            }
            if power >= self.degree {
                return Err(bad("power ≥ d"));
            }
            if last_power.is_some_and(|lp| power <= lp) {
                return Err(bad("powers must be strictly ascending"));
            }
            last_power = Some(power);
            digits[power as usize] = coeff as u32;
        }
        Ok(Elem(arith::code_of(&digits, self.p)))
    }
}
