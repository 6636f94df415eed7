//! Laurent polynomials over big integers, the Gale-Robinson sequence in both
//! directions, cluster seeds, and g-vector recovery.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::params::GRParams;
use crate::quiver::{classical_mutation, Multigraph, Quiver, QuiverError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaurentError {
    #[error("operands have arities {0} and {1}")]
    ArityMismatch(usize, usize),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomial division is not exact")]
    NotDivisible,
    #[error("quotient is not a monomial")]
    NotMonomial,
    #[error("polynomial has no constant term 1")]
    ConstantTermMissing,
    #[error("vertex {0} lies on a two-cycle")]
    VertexInTwoCycle(i64),
}

/// A Laurent polynomial in `arity` variables; terms are kept with nonzero
/// coefficients only, ordered lexicographically by exponent vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    arity: usize,
    terms: BTreeMap<Vec<i64>, BigInt>,
}

impl LaurentPoly {
    pub fn zero(arity: usize) -> LaurentPoly {
        LaurentPoly { arity, terms: BTreeMap::new() }
    }

    pub fn one(arity: usize) -> LaurentPoly {
        LaurentPoly::constant(arity, 1)
    }

    pub fn constant(arity: usize, value: impl Into<BigInt>) -> LaurentPoly {
        LaurentPoly::monomial(arity, vec![0; arity], value)
    }

    /// The variable with the given zero-based index.
    pub fn variable(arity: usize, index: usize) -> LaurentPoly {
        assert!(index < arity);
        let mut exps = vec![0; arity];
        exps[index] = 1;
        LaurentPoly::monomial(arity, exps, 1)
    }

    pub fn monomial(arity: usize, exps: Vec<i64>, coeff: impl Into<BigInt>) -> LaurentPoly {
        assert_eq!(exps.len(), arity);
        let mut p = LaurentPoly::zero(arity);
        p.insert_term(exps, coeff.into());
        p
    }

    /// Builds a polynomial from (exponents, coefficient) pairs, summing
    /// duplicates and dropping zeros.
    pub fn from_terms(
        arity: usize,
        terms: impl IntoIterator<Item = (Vec<i64>, BigInt)>,
    ) -> LaurentPoly {
        let mut p = LaurentPoly::zero(arity);
        for (exps, coeff) in terms {
            assert_eq!(exps.len(), arity);
            p.insert_term(exps, coeff);
        }
        p
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[i64]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn constant_coeff(&self) -> BigInt {
        self.coeff(&vec![0; self.arity])
    }

    /// The single (exponents, coefficient) pair, if there is exactly one term.
    pub fn as_monomial(&self) -> Option<(&Vec<i64>, &BigInt)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    fn insert_term(&mut self, exps: Vec<i64>, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn checked_add(&self, rhs: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        if self.arity != rhs.arity {
            return Err(LaurentError::ArityMismatch(self.arity, rhs.arity));
        }
        let mut out = self.clone();
        for (exps, coeff) in &rhs.terms {
            out.insert_term(exps.clone(), coeff.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, rhs: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        self.checked_add(&-rhs)
    }

    pub fn checked_mul(&self, rhs: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        if self.arity != rhs.arity {
            return Err(LaurentError::ArityMismatch(self.arity, rhs.arity));
        }
        let mut out = LaurentPoly::zero(self.arity);
        for (le, lc) in &self.terms {
            for (re, rc) in &rhs.terms {
                let exps: Vec<i64> = le.iter().zip(re).map(|(a, b)| a + b).collect();
                out.insert_term(exps, lc * rc);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u64) -> LaurentPoly {
        let mut out = LaurentPoly::one(self.arity);
        for _ in 0..k {
            out = out.checked_mul(self).unwrap();
        }
        out
    }

    /// Shifts every exponent vector by `delta`.
    pub fn shifted(&self, delta: &[i64]) -> LaurentPoly {
        assert_eq!(delta.len(), self.arity);
        let mut out = LaurentPoly::zero(self.arity);
        for (exps, coeff) in &self.terms {
            let moved: Vec<i64> = exps.iter().zip(delta).map(|(a, b)| a + b).collect();
            out.insert_term(moved, coeff.clone());
        }
        out
    }

    /// Exact quotient self / rhs; `NotDivisible` when no Laurent polynomial
    /// quotient with integer coefficients exists.
    pub fn exact_div(&self, rhs: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        if self.arity != rhs.arity {
            return Err(LaurentError::ArityMismatch(self.arity, rhs.arity));
        }
        if rhs.is_zero() {
            return Err(LaurentError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(LaurentPoly::zero(self.arity));
        }
        // Factor out the componentwise-minimal exponents; what remains is
        // ordinary polynomial division over nonnegative exponents.
        let min_exps = |p: &LaurentPoly| -> Vec<i64> {
            let mut m = vec![i64::MAX; p.arity];
            for exps in p.terms.keys() {
                for (slot, &e) in m.iter_mut().zip(exps) {
                    *slot = (*slot).min(e);
                }
            }
            m
        };
        let neg = |v: &[i64]| -> Vec<i64> { v.iter().map(|x| -x).collect() };
        let mp = min_exps(self);
        let mq = min_exps(rhs);
        let mut p = self.shifted(&neg(&mp));
        let q = rhs.shifted(&neg(&mq));
        let total = |exps: &[i64]| -> i64 { exps.iter().sum() };
        let maxdeg = |p: &LaurentPoly| p.terms.keys().map(|e| total(e)).max().unwrap();
        // Any true quotient term fits under this total-degree bound, because
        // top total-degree slices multiply without cancellation.
        let bound = maxdeg(&p) - maxdeg(&q);
        let (lt_q, lc_q) = q.terms.iter().next().unwrap();
        let (lt_q, lc_q) = (lt_q.clone(), lc_q.clone());
        let mut quotient = LaurentPoly::zero(self.arity);
        while !p.is_zero() {
            let (lt_p, lc_p) = p.terms.iter().next().unwrap();
            let t: Vec<i64> = lt_p.iter().zip(&lt_q).map(|(a, b)| a - b).collect();
            if t.iter().any(|&e| e < 0) || total(&t) > bound {
                return Err(LaurentError::NotDivisible);
            }
            let (coeff, rem) = lc_p.div_rem(&lc_q);
            if !rem.is_zero() {
                return Err(LaurentError::NotDivisible);
            }
            let term = LaurentPoly::monomial(self.arity, t, coeff);
            quotient = quotient.checked_add(&term).unwrap();
            p = p.checked_sub(&term.checked_mul(&q).unwrap()).unwrap();
        }
        let delta: Vec<i64> = mp.iter().zip(&mq).map(|(a, b)| a - b).collect();
        Ok(quotient.shifted(&delta))
    }

    /// Substitutes `values[i]` for variable i. Negative exponents require the
    /// corresponding value to be a monomial with unit coefficient.
    pub fn eval(&self, values: &[LaurentPoly]) -> Result<LaurentPoly, LaurentError> {
        if values.len() != self.arity {
            return Err(LaurentError::ArityMismatch(self.arity, values.len()));
        }
        let out_arity = values.first().map_or(0, |v| v.arity);
        let mut out = LaurentPoly::zero(out_arity);
        for (exps, coeff) in &self.terms {
            let mut term = LaurentPoly::constant(out_arity, coeff.clone());
            for (value, &e) in values.iter().zip(exps) {
                let factor = if e >= 0 {
                    value.pow(e as u64)
                } else {
                    let (m_exps, m_coeff) = value.as_monomial().ok_or(LaurentError::NotMonomial)?;
                    if !m_coeff.abs().is_one() {
                        return Err(LaurentError::NotMonomial);
                    }
                    let inv_exps: Vec<i64> = m_exps.iter().map(|x| -x).collect();
                    LaurentPoly::monomial(out_arity, inv_exps, m_coeff.clone()).pow((-e) as u64)
                };
                term = term.checked_mul(&factor)?;
            }
            out = out.checked_add(&term)?;
        }
        Ok(out)
    }

    /// Specialization at all variables equal to one: the coefficient sum.
    pub fn eval_at_ones(&self) -> BigInt {
        self.terms.values().sum()
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            arity: self.arity,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

/// The arithmetic operators panic on arity mismatch; use the checked methods
/// to get an error value instead.
macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for &LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                self.$checked(rhs).unwrap()
            }
        }
        impl $trait for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                self.$checked(&rhs).unwrap()
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (exps, coeff)) in self.terms.iter().enumerate() {
            if i == 0 {
                if coeff.is_negative() {
                    write!(f, "-")?;
                }
            } else if coeff.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let magnitude = coeff.abs();
            let factors: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(|(v, &e)| {
                    if e == 1 {
                        format!("y{}", v + 1)
                    } else {
                        format!("y{}^{}", v + 1, e)
                    }
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{magnitude}")?;
            } else if magnitude.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", magnitude, factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse polynomial near {0:?}")]
pub struct LaurentParseError(pub String);

impl LaurentPoly {
    /// Parses the `Display` format back; variables must be y1..y{arity}.
    pub fn parse(text: &str, arity: usize) -> Result<LaurentPoly, LaurentParseError> {
        let bad = |s: &str| LaurentParseError(s.to_string());
        let mut out = LaurentPoly::zero(arity);
        let text = text.trim();
        if text == "0" {
            return Ok(out);
        }
        // Split into signed terms on " + " and " - " separators.
        let mut terms: Vec<(i64, String)> = Vec::new();
        let mut rest = text;
        let mut sign = 1i64;
        if let Some(r) = rest.strip_prefix('-') {
            sign = -1;
            rest = r.trim_start();
        }
        loop {
            let plus = rest.find(" + ");
            let minus = rest.find(" - ");
            let (cut, next_sign) = match (plus, minus) {
                (Some(p), Some(m)) if p < m => (p, 1),
                (Some(_), Some(m)) => (m, -1),
                (Some(p), None) => (p, 1),
                (None, Some(m)) => (m, -1),
                (None, None) => {
                    terms.push((sign, rest.to_string()));
                    break;
                }
            };
            terms.push((sign, rest[..cut].to_string()));
            sign = next_sign;
            rest = &rest[cut + 3..];
        }
        for (sign, term) in terms {
            let mut coeff = BigInt::from(sign);
            let mut exps = vec![0i64; arity];
            for factor in term.split('*') {
                let factor = factor.trim();
                if factor.is_empty() {
                    return Err(bad(&term));
                }
                if let Some(var_part) = factor.strip_prefix('y') {
                    let (idx_text, exp) = match var_part.split_once('^') {
                        Some((i, e)) => (i, e.parse::<i64>().map_err(|_| bad(factor))?),
                        None => (var_part, 1),
                    };
                    let idx: usize = idx_text.parse().map_err(|_| bad(factor))?;
                    if idx == 0 || idx > arity {
                        return Err(bad(factor));
                    }
                    exps[idx - 1] += exp;
                } else {
                    let n: BigInt = factor.parse().map_err(|_| bad(factor))?;
                    coeff *= n;
                }
            }
            out.insert_term(exps, coeff);
        }
        Ok(out)
    }

    /// Renders with a custom variable prefix in place of "y".
    pub fn render_with(&self, prefix: &str) -> String {
        self.to_string().replace('y', prefix)
    }
}

// ---------------------------------------------------------------------------
// The Gale-Robinson sequence
// ---------------------------------------------------------------------------

/// Integer sequence with all initial values 1, computed with an exactness
/// check on every division; `NotDivisible` would refute Laurentness.
pub fn gr_values(params: GRParams, lo: i64, hi: i64) -> Result<BTreeMap<i64, BigInt>, LaurentError> {
    gr_values_at(params, lo, hi, &BigInt::one())
}

/// Integer sequence with every initial value set to `seed`; each term is
/// homogeneous of degree one in the seeds, so divisions stay exact for any
/// nonzero seed.
pub fn gr_values_at(
    params: GRParams,
    lo: i64,
    hi: i64,
    seed: &BigInt,
) -> Result<BTreeMap<i64, BigInt>, LaurentError> {
    assert!(lo <= 1 && hi >= params.n, "range must cover the initial window 1..=N");
    if seed.is_zero() {
        return Err(LaurentError::DivisionByZero);
    }
    let (a, b, c, d, n) = (params.a, params.b(), params.c, params.d(), params.n);
    let mut vals: BTreeMap<i64, BigInt> = (1..=n).map(|i| (i, seed.clone())).collect();
    let exact = |num: BigInt, den: &BigInt| -> Result<BigInt, LaurentError> {
        let (q, r) = num.div_rem(den);
        if r.is_zero() {
            Ok(q)
        } else {
            Err(LaurentError::NotDivisible)
        }
    };
    for idx in (n + 1)..=hi {
        let g = |off: i64| vals[&(idx - n + off)].clone();
        let num = g(a) * g(b) + g(c) * g(d);
        let x = exact(num, &vals[&(idx - n)])?;
        vals.insert(idx, x);
    }
    for idx in (lo..=0).rev() {
        let g = |off: i64| vals[&(idx + off)].clone();
        let num = g(a) * g(b) + g(c) * g(d);
        let x = exact(num, &vals[&(idx + n)])?;
        vals.insert(idx, x);
    }
    Ok(vals)
}

/// Laurent polynomials x_lo..x_hi in the initial cluster x_1..x_N.
pub fn gr_sequence(
    params: GRParams,
    lo: i64,
    hi: i64,
) -> Result<BTreeMap<i64, LaurentPoly>, LaurentError> {
    assert!(lo <= 1 && hi >= params.n, "range must cover the initial window 1..=N");
    let (a, b, c, d, n) = (params.a, params.b(), params.c, params.d(), params.n);
    let arity = n as usize;
    let mut vals: BTreeMap<i64, LaurentPoly> = (1..=n)
        .map(|i| (i, LaurentPoly::variable(arity, (i - 1) as usize)))
        .collect();
    for idx in (n + 1)..=hi {
        let g = |off: i64| &vals[&(idx - n + off)];
        let num = g(a).checked_mul(g(b))? .checked_add(&g(c).checked_mul(g(d))?)?;
        let x = num.exact_div(&vals[&(idx - n)])?;
        vals.insert(idx, x);
    }
    for idx in (lo..=0).rev() {
        let g = |off: i64| &vals[&(idx + off)];
        let num = g(a).checked_mul(g(b))?.checked_add(&g(c).checked_mul(g(d))?)?;
        let x = num.exact_div(&vals[&(idx + n)])?;
        vals.insert(idx, x);
    }
    Ok(vals)
}

// ---------------------------------------------------------------------------
// Seeds and g-vectors
// ---------------------------------------------------------------------------

/// A cluster seed: the exchange multigraph plus one Laurent polynomial per
/// vertex, everything expressed in the initial cluster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Seed {
    pub graph: Multigraph,
    pub cluster: Vec<LaurentPoly>,
}

pub fn initial_seed(quiver: &Quiver) -> Seed {
    let n = quiver.params().n as usize;
    Seed {
        graph: quiver.to_multigraph(),
        cluster: (0..n).map(|i| LaurentPoly::variable(n, i)).collect(),
    }
}

/// Exchanges the variable at vertex k and mutates the multigraph.
pub fn seed_mutate(seed: &Seed, k: i64) -> Result<Seed, LaurentError> {
    let graph = classical_mutation(&seed.graph, k).map_err(|e| match e {
        QuiverError::VertexInTwoCycle(v) => LaurentError::VertexInTwoCycle(v),
        other => unreachable!("unexpected mutation failure: {other}"),
    })?;
    let n = seed.graph.n;
    let arity = seed.cluster[0].arity();
    let product = |pairs: &mut dyn Iterator<Item = (i64, u64)>| -> LaurentPoly {
        pairs.fold(LaurentPoly::one(arity), |acc, (v, m)| {
            acc * seed.cluster[(v - 1) as usize].pow(m)
        })
    };
    let into = product(&mut (1..=n).map(|i| (i, seed.graph.mult(i, k))));
    let outof = product(&mut (1..=n).map(|j| (j, seed.graph.mult(k, j))));
    let new_var = (into + outof).exact_div(&seed.cluster[(k - 1) as usize])?;
    let mut cluster = seed.cluster.clone();
    cluster[(k - 1) as usize] = new_var;
    Ok(Seed { graph, cluster })
}

/// The Laurent monomial yhat_k = prod over k->j of x_j divided by prod over
/// i->k of x_i, with multiplicities as exponents.
pub fn yhat(graph: &Multigraph, k: i64) -> LaurentPoly {
    let arity = graph.n as usize;
    let mut exps = vec![0i64; arity];
    for v in 1..=graph.n {
        exps[(v - 1) as usize] += graph.mult(k, v) as i64;
        exps[(v - 1) as usize] -= graph.mult(v, k) as i64;
    }
    LaurentPoly::monomial(arity, exps, 1)
}

/// Writes z = M * fpoly(yhat_1..yhat_N) and returns the exponent vector of
/// the Laurent monomial M.
pub fn recover_g_vector(
    z: &LaurentPoly,
    fpoly: &LaurentPoly,
    yhats: &[LaurentPoly],
) -> Result<Vec<i64>, LaurentError> {
    if !fpoly.constant_coeff().is_one() {
        return Err(LaurentError::ConstantTermMissing);
    }
    let substituted = fpoly.eval(yhats)?;
    let quotient = z.exact_div(&substituted).map_err(|e| match e {
        LaurentError::NotDivisible => LaurentError::NotMonomial,
        other => other,
    })?;
    match quotient.as_monomial() {
        Some((exps, coeff)) if coeff.is_one() => Ok(exps.clone()),
        _ => Err(LaurentError::NotMonomial),
    }
}
