use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;

use super::coeff::GaussianRational;
use super::monomial::{parse_powers, product_expansion, write_powers, ModeId, ModePower, MonomialKey, NormalMonomial};
use super::AlgebraError;

/// Truncation grade used when nothing else is requested: the second-order
/// short-time operator solution.
pub const DEFAULT_MAX_ORDER: u32 = 2;

/// Canonical sum of normal-ordered monomials, truncated at `max_order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorPolynomial {
    mode_count: usize,
    max_order: u32,
    terms: BTreeMap<MonomialKey, GaussianRational>,
}

impl OperatorPolynomial {
    pub fn zero(mode_count: usize, max_order: u32) -> Self {
        Self { mode_count, max_order, terms: BTreeMap::new() }
    }

    pub fn identity(mode_count: usize, max_order: u32) -> Self {
        Self::constant(GaussianRational::one(), mode_count, max_order)
    }

    pub fn constant(c: GaussianRational, mode_count: usize, max_order: u32) -> Self {
        let mut p = Self::zero(mode_count, max_order);
        p.accumulate(MonomialKey::identity(mode_count), c);
        p
    }

    /// `coeff · (gt)^grade · a_mode†^creation a_mode^annihilation`.
    pub fn single_mode(
        mode: ModeId,
        power: ModePower,
        mode_count: usize,
        max_order: u32,
    ) -> Result<Self, AlgebraError> {
        if mode.0 >= mode_count {
            return Err(AlgebraError::ModeOutOfRange { mode: mode.0, mode_count });
        }
        let mut key = MonomialKey::identity(mode_count);
        key.powers[mode.0] = power;
        let mut p = Self::zero(mode_count, max_order);
        p.accumulate(key, GaussianRational::one());
        Ok(p)
    }

    pub fn annihilator(mode: ModeId, mode_count: usize, max_order: u32) -> Result<Self, AlgebraError> {
        Self::single_mode(mode, ModePower::new(0, 1), mode_count, max_order)
    }

    pub fn creator(mode: ModeId, mode_count: usize, max_order: u32) -> Result<Self, AlgebraError> {
        Self::single_mode(mode, ModePower::new(1, 0), mode_count, max_order)
    }

    /// `a†a` for one mode.
    pub fn number(mode: ModeId, mode_count: usize, max_order: u32) -> Result<Self, AlgebraError> {
        Self::single_mode(mode, ModePower::new(1, 1), mode_count, max_order)
    }

    pub fn from_monomials(
        monomials: impl IntoIterator<Item = NormalMonomial>,
        mode_count: usize,
        max_order: u32,
    ) -> Result<Self, AlgebraError> {
        let mut p = Self::zero(mode_count, max_order);
        for m in monomials {
            if m.mode_count() != mode_count {
                return Err(AlgebraError::ModeMismatch { left: mode_count, right: m.mode_count() });
            }
            p.accumulate(m.key, m.coeff);
        }
        Ok(p)
    }

    /// Parses the golden text form produced by `Display`.
    pub fn parse(text: &str, mode_count: usize, max_order: u32) -> Result<Self, AlgebraError> {
        let mut p = Self::zero(mode_count, max_order);
        let text = text.trim();
        if text == "0" {
            return Ok(p);
        }
        for term in text.split(" + ") {
            let (coeff, rest) = parse_coefficient(term.trim())?;
            let mut grade = 0;
            let mut ops = "";
            for piece in rest.split('·').map(str::trim).filter(|s| !s.is_empty()) {
                if let Some(g) = piece.strip_prefix("(gt)") {
                    grade = match g.strip_prefix('^') {
                        Some(e) => e
                            .parse()
                            .map_err(|_| AlgebraError::Parse(format!("bad grade in `{term}`")))?,
                        None => 1,
                    };
                } else {
                    ops = piece;
                }
            }
            p.accumulate(MonomialKey { grade, powers: parse_powers(ops, mode_count)? }, coeff);
        }
        Ok(p)
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn max_order(&self) -> u32 {
        self.max_order
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&MonomialKey, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = NormalMonomial> + '_ {
        self.terms.iter().map(|(k, c)| NormalMonomial { coeff: c.clone(), key: k.clone() })
    }

    pub fn coefficient(&self, key: &MonomialKey) -> Option<&GaussianRational> {
        self.terms.get(key)
    }

    /// Highest grade present, or `None` for the zero polynomial.
    pub fn top_grade(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.grade).max()
    }

    /// The terms of exactly one grade, keeping the truncation setting.
    pub fn grade_part(&self, grade: u32) -> Self {
        Self {
            mode_count: self.mode_count,
            max_order: self.max_order,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.grade == grade)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    /// Re-truncates at a new order; terms above it are dropped.
    pub fn with_max_order(&self, max_order: u32) -> Self {
        Self {
            mode_count: self.mode_count,
            max_order,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.grade <= max_order)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    /// Raises every term's grade by `by`, dropping what overflows the truncation.
    pub fn shift_grade(&self, by: u32) -> Self {
        let mut out = Self::zero(self.mode_count, self.max_order);
        for (k, c) in &self.terms {
            let key = MonomialKey { grade: k.grade + by, powers: k.powers.clone() };
            out.accumulate(key, c.clone());
        }
        out
    }

    fn accumulate(&mut self, key: MonomialKey, coeff: GaussianRational) {
        if key.grade > self.max_order || coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_modes(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.mode_count != other.mode_count {
            return Err(AlgebraError::ModeMismatch { left: self.mode_count, right: other.mode_count });
        }
        Ok(())
    }

    fn check_compatible(&self, other: &Self) -> Result<(), AlgebraError> {
        self.check_modes(other)?;
        if self.max_order != other.max_order {
            return Err(AlgebraError::TruncationMismatch {
                left: self.max_order,
                right: other.max_order,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.accumulate(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.add(&other.scale(&GaussianRational::from_int(-1)))
    }

    pub fn scale(&self, factor: &GaussianRational) -> Self {
        let mut out = Self::zero(self.mode_count, self.max_order);
        for (k, c) in &self.terms {
            out.accumulate(k.clone(), c * factor);
        }
        out
    }

    pub fn scale_rational(&self, factor: &BigRational) -> Self {
        self.scale(&GaussianRational::real(factor.clone()))
    }

    /// Normal-ordered product; the result is truncated at the smaller of the
    /// two truncation orders.
    pub fn multiply(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_modes(other)?;
        let mut out = Self::zero(self.mode_count, self.max_order.min(other.max_order));
        for (lk, lc) in &self.terms {
            for (rk, rc) in &other.terms {
                let grade = lk.grade + rk.grade;
                if grade > out.max_order {
                    continue;
                }
                let c = lc * rc;
                for (weight, powers) in product_expansion(&lk.powers, &rk.powers) {
                    out.accumulate(MonomialKey { grade, powers }, c.scale(&BigRational::from_integer(weight)));
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::identity(self.mode_count, self.max_order);
        for _ in 0..exp {
            acc = acc.multiply(self).expect("same mode set");
        }
        acc
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero(self.mode_count, self.max_order);
        for (k, c) in &self.terms {
            out.accumulate(k.adjoint(), c.conj());
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.multiply(other)?.sub(&other.multiply(self)?)
    }

    pub fn is_hermitian(&self) -> bool {
        self.adjoint() == *self
    }
}

/// Normal-ordered product of two monomials, truncated at `max_order`.
pub fn normal_order_product(
    left: &NormalMonomial,
    right: &NormalMonomial,
    max_order: u32,
) -> Result<OperatorPolynomial, AlgebraError> {
    if left.mode_count() != right.mode_count() {
        return Err(AlgebraError::ModeMismatch { left: left.mode_count(), right: right.mode_count() });
    }
    let l = OperatorPolynomial::from_monomials([left.clone()], left.mode_count(), max_order)?;
    let r = OperatorPolynomial::from_monomials([right.clone()], right.mode_count(), max_order)?;
    l.multiply(&r)
}

fn parse_coefficient(term: &str) -> Result<(GaussianRational, &str), AlgebraError> {
    let bad = || AlgebraError::Parse(format!("bad coefficient in `{term}`"));
    let body = term.strip_prefix('(').ok_or_else(bad)?;
    let close = body.find(')').ok_or_else(bad)?;
    let inner = body[..close].strip_suffix('i').ok_or_else(bad)?;
    // the sign separating re and im is the last '+' or '-' not at position 0
    let split = inner
        .char_indices()
        .skip(1)
        .filter(|(_, c)| *c == '+' || *c == '-')
        .map(|(i, _)| i)
        .last()
        .ok_or_else(bad)?;
    let re = parse_rational(&inner[..split]).ok_or_else(bad)?;
    let im = parse_rational(&inner[split..]).ok_or_else(bad)?;
    Ok((GaussianRational::new(re, im), &body[close + 1..]))
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim().trim_start_matches('+');
    match s.split_once('/') {
        Some((n, d)) => {
            let d: num_bigint::BigInt = d.parse().ok()?;
            if d == 0.into() {
                return None;
            }
            Some(BigRational::new(n.parse().ok()?, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// Golden-file form: `(re±imi)·(gt)^k·A†^p A^q …`, terms joined by ` + `.
impl fmt::Display for OperatorPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}")?;
            if k.grade > 0 {
                write!(f, "·(gt)^{}", k.grade)?;
            }
            if k.powers.iter().any(|p| !p.is_identity()) {
                f.write_str("·")?;
                write_powers(f, &k.powers)?;
            }
        }
        Ok(())
    }
}
