use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::StatisticsError;
use crate::algebra::{fmt_rational, GaussianRational};

/// Grade plus, per amplitude symbol, the exponents of `(z*)^conj z^plain`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SeriesKey {
    pub grade: u32,
    pub powers: Vec<(u32, u32)>,
}

/// Numeric substitution for amplitude symbols and for `gt`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct NumericPoint {
    pub amplitudes: BTreeMap<String, Complex64>,
    pub gt: f64,
}

impl NumericPoint {
    pub fn new(gt: f64) -> Self {
        Self { amplitudes: BTreeMap::new(), gt }
    }

    pub fn with(mut self, symbol: impl Into<String>, value: Complex64) -> Self {
        self.amplitudes.insert(symbol.into(), value);
        self
    }
}

/// Power series in `gt` whose coefficients are polynomials in the coherent
/// amplitudes and their conjugates, truncated at `max_order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpectationSeries {
    symbols: Vec<String>,
    max_order: u32,
    terms: BTreeMap<SeriesKey, GaussianRational>,
}

impl ExpectationSeries {
    pub fn zero(symbols: Vec<String>, max_order: u32) -> Self {
        Self { symbols, max_order, terms: BTreeMap::new() }
    }

    pub fn constant(c: GaussianRational, symbols: Vec<String>, max_order: u32) -> Self {
        let mut s = Self::zero(symbols, max_order);
        let key = SeriesKey { grade: 0, powers: vec![(0, 0); s.symbols.len()] };
        s.accumulate(key, c);
        s
    }

    pub fn one(symbols: Vec<String>, max_order: u32) -> Self {
        Self::constant(GaussianRational::one(), symbols, max_order)
    }

    /// Builds a series from `(coefficient, grade, per-symbol |z|^(2m) powers m)`
    /// triples; convenient for real, modulus-only results.
    pub fn from_modulus_terms(
        terms: &[(i64, u32, &[u32])],
        symbols: Vec<String>,
        max_order: u32,
    ) -> Self {
        let mut s = Self::zero(symbols, max_order);
        for &(c, grade, ms) in terms {
            let powers = ms.iter().map(|&m| (m, m)).collect();
            s.accumulate(SeriesKey { grade, powers }, GaussianRational::from_int(c));
        }
        s
    }

    pub(crate) fn accumulate(&mut self, key: SeriesKey, coeff: GaussianRational) {
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

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn max_order(&self) -> u32 {
        self.max_order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SeriesKey, &GaussianRational)> {
        self.terms.iter()
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

    pub fn is_real(&self) -> bool {
        self.terms.values().all(GaussianRational::is_real)
    }

    /// Invariance under conjugating coefficients and swapping every `z ↔ z*`:
    /// the series of a Hermitian observable.
    pub fn is_self_conjugate(&self) -> bool {
        self.conj() == *self
    }

    pub fn conj(&self) -> Self {
        let mut out = Self::zero(self.symbols.clone(), self.max_order);
        for (k, c) in &self.terms {
            let powers = k.powers.iter().map(|&(a, b)| (b, a)).collect();
            out.accumulate(SeriesKey { grade: k.grade, powers }, c.conj());
        }
        out
    }

    pub fn grade_part(&self, grade: u32) -> Self {
        let mut out = Self::zero(self.symbols.clone(), self.max_order);
        for (k, c) in self.terms.iter().filter(|(k, _)| k.grade == grade) {
            out.accumulate(k.clone(), c.clone());
        }
        out
    }

    pub fn grades(&self) -> Vec<u32> {
        let mut g: Vec<u32> = self.terms.keys().map(|k| k.grade).collect();
        g.dedup();
        g
    }

    fn check(&self, other: &Self) -> Result<(), StatisticsError> {
        if self.symbols != other.symbols {
            return Err(StatisticsError::SymbolMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, StatisticsError> {
        self.check(other)?;
        let mut out = self.clone();
        out.max_order = self.max_order.min(other.max_order);
        out.terms.retain(|k, _| k.grade <= out.max_order);
        for (k, c) in &other.terms {
            out.accumulate(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, StatisticsError> {
        self.add(&other.scale(&GaussianRational::from_int(-1)))
    }

    pub fn scale(&self, factor: &GaussianRational) -> Self {
        let mut out = Self::zero(self.symbols.clone(), self.max_order);
        for (k, c) in &self.terms {
            out.accumulate(k.clone(), c * factor);
        }
        out
    }

    /// Commutative product, truncated at the smaller order.
    pub fn mul(&self, other: &Self) -> Result<Self, StatisticsError> {
        self.check(other)?;
        let mut out = Self::zero(self.symbols.clone(), self.max_order.min(other.max_order));
        for (lk, lc) in &self.terms {
            for (rk, rc) in &other.terms {
                let grade = lk.grade + rk.grade;
                if grade > out.max_order {
                    continue;
                }
                let powers = lk.powers.iter().zip(&rk.powers).map(|(a, b)| (a.0 + b.0, a.1 + b.1)).collect();
                out.accumulate(SeriesKey { grade, powers }, lc * rc);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one(self.symbols.clone(), self.max_order);
        for _ in 0..exp {
            acc = acc.mul(self).expect("same symbols");
        }
        acc
    }

    fn amplitude_values(&self, point: &NumericPoint) -> Result<Vec<Complex64>, StatisticsError> {
        self.symbols
            .iter()
            .map(|s| point.amplitudes.get(s).copied().ok_or_else(|| StatisticsError::MissingAmplitude(s.clone())))
            .collect()
    }

    fn term_value(key: &SeriesKey, coeff: &GaussianRational, values: &[Complex64]) -> Complex64 {
        let mut v = coeff.to_complex64();
        for (&(p, q), z) in key.powers.iter().zip(values) {
            v *= z.conj().powu(p) * z.powu(q);
        }
        v
    }

    /// Value of the grade-`grade` coefficient (without the `(gt)^grade` factor).
    pub fn coefficient_value(&self, grade: u32, point: &NumericPoint) -> Result<Complex64, StatisticsError> {
        let values = self.amplitude_values(point)?;
        Ok(self
            .terms
            .iter()
            .filter(|(k, _)| k.grade == grade)
            .map(|(k, c)| Self::term_value(k, c, &values))
            .sum())
    }

    /// Full numeric value including the `(gt)^k` factors.
    pub fn evaluate(&self, point: &NumericPoint) -> Result<Complex64, StatisticsError> {
        let values = self.amplitude_values(point)?;
        Ok(self
            .terms
            .iter()
            .map(|(k, c)| Self::term_value(k, c, &values) * point.gt.powi(k.grade as i32))
            .sum())
    }

    /// Magnitude scale of a grade's coefficient, used to decide when a
    /// numerically substituted coefficient is a cancellation to zero.
    pub(crate) fn coefficient_scale(&self, grade: u32, point: &NumericPoint) -> Result<f64, StatisticsError> {
        let values = self.amplitude_values(point)?;
        Ok(self
            .terms
            .iter()
            .filter(|(k, _)| k.grade == grade)
            .map(|(k, c)| Self::term_value(k, c, &values).norm())
            .sum())
    }

    /// Human-oriented rendering: grades grouped, common factors pulled out,
    /// `|α|⁶` for modulus powers, e.g. `−12·(gt)²·(|α|⁶ + 3·|α|⁸)`.
    pub fn pretty(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for grade in self.grades() {
            let group: Vec<(&SeriesKey, &GaussianRational)> =
                self.terms.iter().filter(|(k, _)| k.grade == grade).collect();
            let (negative, body) = self.pretty_group(grade, &group);
            if out.is_empty() {
                if negative {
                    out.push('−');
                }
            } else {
                out.push_str(if negative { " − " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }

    fn pretty_group(&self, grade: u32, group: &[(&SeriesKey, &GaussianRational)]) -> (bool, String) {
        let gt = match grade {
            0 => String::new(),
            1 => "(gt)".to_string(),
            g => format!("(gt){}", superscript(g)),
        };
        let all_real = group.iter().all(|(_, c)| c.is_real());
        let join = |parts: Vec<String>| parts.into_iter().filter(|p| !p.is_empty()).collect::<Vec<_>>().join("·");
        if all_real {
            let factor = common_factor(group.iter().map(|(_, c)| &c.re));
            let negative = factor.is_negative();
            let abs_factor = factor.abs();
            if group.len() == 1 {
                let mono = self.pretty_monomial(group[0].0);
                let lead = if abs_factor.is_one() && !(mono.is_empty() && gt.is_empty()) {
                    String::new()
                } else {
                    fmt_rational(&abs_factor)
                };
                return (negative, join(vec![lead, gt, mono]));
            }
            let mut inner = String::new();
            for (i, (k, c)) in group.iter().enumerate() {
                let r = &c.re / &factor;
                if i > 0 {
                    inner.push_str(if r.is_negative() { " − " } else { " + " });
                } else if r.is_negative() {
                    inner.push('−');
                }
                let mono = self.pretty_monomial(k);
                let mag = r.abs();
                let lead = if mag.is_one() && !mono.is_empty() { String::new() } else { fmt_rational(&mag) };
                inner.push_str(&join(vec![lead, mono]));
            }
            let lead = if abs_factor.is_one() { String::new() } else { fmt_rational(&abs_factor) };
            return (negative, join(vec![lead, gt, format!("({inner})")]));
        }
        let inner = group
            .iter()
            .map(|(k, c)| join(vec![c.to_string(), self.pretty_monomial(k)]))
            .collect::<Vec<_>>()
            .join(" + ");
        (false, join(vec![gt, format!("({inner})")]))
    }

    fn pretty_monomial(&self, key: &SeriesKey) -> String {
        let mut parts = Vec::new();
        for (sym, &(p, q)) in self.symbols.iter().zip(&key.powers) {
            let common = p.min(q);
            if common > 0 {
                parts.push(format!("|{sym}|{}", superscript(2 * common)));
            }
            if p > common {
                parts.push(format!("{sym}*{}", if p - common == 1 { String::new() } else { superscript(p - common) }));
            }
            if q > common {
                parts.push(format!("{sym}{}", if q - common == 1 { String::new() } else { superscript(q - common) }));
            }
        }
        parts.join("·")
    }
}

/// Plain-text canonical form: `c·(gt)^k·|α|^6 + …` with exact rationals.
impl fmt::Display for ExpectationSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if c.is_real() {
                f.write_str(&fmt_rational(&c.re))?;
            } else {
                write!(f, "{c}")?;
            }
            if k.grade > 0 {
                write!(f, "·(gt)^{}", k.grade)?;
            }
            for (sym, &(p, q)) in self.symbols.iter().zip(&k.powers) {
                let common = p.min(q);
                if common > 0 {
                    write!(f, "·|{sym}|^{}", 2 * common)?;
                }
                if p > common {
                    write!(f, "·{sym}*^{}", p - common)?;
                }
                if q > common {
                    write!(f, "·{sym}^{}", q - common)?;
                }
            }
        }
        Ok(())
    }
}

/// Signed gcd of the numerators over the lcm of the denominators; the sign
/// follows the first value.
fn common_factor<'a>(values: impl Iterator<Item = &'a BigRational>) -> BigRational {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    let mut sign_negative = None;
    for v in values {
        if sign_negative.is_none() {
            sign_negative = Some(v.is_negative());
        }
        num = num.gcd(v.numer());
        den = den.lcm(v.denom());
    }
    if num.is_zero() {
        return BigRational::one();
    }
    let f = BigRational::new(num, den);
    if sign_negative == Some(true) {
        -f
    } else {
        f
    }
}

pub fn superscript(n: u32) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string().chars().map(|c| DIGITS[c.to_digit(10).unwrap() as usize]).collect()
}
