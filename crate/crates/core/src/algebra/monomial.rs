use std::fmt;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::One;

use super::coeff::GaussianRational;
use super::AlgebraError;

/// Index of a bosonic mode. Mode 0 is printed `A`, mode 1 `B`, and so on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeId(pub usize);

impl ModeId {
    pub fn index(self) -> usize {
        self.0
    }

    pub fn label(self) -> String {
        if self.0 < 26 {
            ((b'A' + self.0 as u8) as char).to_string()
        } else {
            format!("M{}", self.0)
        }
    }

    /// Inverse of [`ModeId::label`]; case-insensitive for single letters.
    pub fn from_label(label: &str) -> Option<Self> {
        let label = label.trim();
        let mut chars = label.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) if c.is_ascii_alphabetic() => {
                Some(ModeId((c.to_ascii_uppercase() as u8 - b'A') as usize))
            }
            _ => label.strip_prefix('M')?.parse().ok().map(ModeId),
        }
    }
}

impl fmt::Display for ModeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Exponents of `a†^creation a^annihilation` for one mode.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModePower {
    pub creation: u32,
    pub annihilation: u32,
}

impl ModePower {
    pub const fn new(creation: u32, annihilation: u32) -> Self {
        Self { creation, annihilation }
    }

    pub fn is_identity(self) -> bool {
        self.creation == 0 && self.annihilation == 0
    }

    pub fn degree(self) -> u32 {
        self.creation + self.annihilation
    }

    pub fn swapped(self) -> Self {
        Self { creation: self.annihilation, annihilation: self.creation }
    }
}

/// Grade and per-mode exponents: the identity of a term inside a polynomial.
///
/// The derived ordering (grade first, then the exponent tuples
/// lexicographically) is the canonical term order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonomialKey {
    pub grade: u32,
    pub powers: Vec<ModePower>,
}

impl MonomialKey {
    pub fn identity(mode_count: usize) -> Self {
        Self { grade: 0, powers: vec![ModePower::default(); mode_count] }
    }

    pub fn mode_count(&self) -> usize {
        self.powers.len()
    }

    pub fn degree(&self) -> u32 {
        self.powers.iter().map(|p| p.degree()).sum()
    }

    pub fn adjoint(&self) -> Self {
        Self { grade: self.grade, powers: self.powers.iter().map(|p| p.swapped()).collect() }
    }
}

/// One normal-ordered term `coeff · (gt)^grade · Π a_k†^p_k a_k^q_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalMonomial {
    pub coeff: GaussianRational,
    pub key: MonomialKey,
}

impl NormalMonomial {
    pub fn new(coeff: GaussianRational, grade: u32, powers: Vec<ModePower>) -> Self {
        Self { coeff, key: MonomialKey { grade, powers } }
    }

    pub fn grade(&self) -> u32 {
        self.key.grade
    }

    pub fn powers(&self) -> &[ModePower] {
        &self.key.powers
    }

    pub fn mode_count(&self) -> usize {
        self.key.powers.len()
    }

    /// Parses an operator string such as `A†^2 B^2 C` (a `+` may stand in
    /// for `†`). Factors must already be normal ordered within each mode.
    pub fn parse_operators(
        coeff: GaussianRational,
        grade: u32,
        mode_count: usize,
        text: &str,
    ) -> Result<Self, AlgebraError> {
        Ok(Self::new(coeff, grade, parse_powers(text, mode_count)?))
    }

    pub fn adjoint(&self) -> Self {
        Self { coeff: self.coeff.conj(), key: self.key.adjoint() }
    }
}

pub(crate) fn parse_powers(text: &str, mode_count: usize) -> Result<Vec<ModePower>, AlgebraError> {
    let bad = |why: &str| AlgebraError::Parse(format!("{why} in `{text}`"));
    let mut powers = vec![ModePower::default(); mode_count];
    for factor in text.split_whitespace() {
        let (base, exp) = match factor.split_once('^') {
            Some((b, e)) => (b, e.parse::<u32>().map_err(|_| bad("bad exponent"))?),
            None => (factor, 1),
        };
        let (label, dagger) = match base.strip_suffix('†').or_else(|| base.strip_suffix('+')) {
            Some(l) => (l, true),
            None => (base, false),
        };
        let mode = ModeId::from_label(label).ok_or_else(|| bad("unknown mode label"))?;
        let slot = powers.get_mut(mode.0).ok_or(AlgebraError::ModeOutOfRange {
            mode: mode.0,
            mode_count,
        })?;
        if dagger {
            if slot.annihilation > 0 {
                return Err(bad("creation operator right of annihilation operator"));
            }
            slot.creation += exp;
        } else {
            slot.annihilation += exp;
        }
    }
    Ok(powers)
}

pub(crate) fn write_powers(f: &mut impl fmt::Write, powers: &[ModePower]) -> fmt::Result {
    let mut first = true;
    let mut emit = |f: &mut dyn fmt::Write, label: &str, dagger: bool, exp: u32| -> fmt::Result {
        if exp == 0 {
            return Ok(());
        }
        if !first {
            f.write_char(' ')?;
        }
        first = false;
        f.write_str(label)?;
        if dagger {
            f.write_char('†')?;
        }
        if exp != 1 {
            write!(f, "^{exp}")?;
        }
        Ok(())
    };
    for (idx, p) in powers.iter().enumerate() {
        let label = ModeId(idx).label();
        emit(f, &label, true, p.creation)?;
        emit(f, &label, false, p.annihilation)?;
    }
    Ok(())
}

/// Normal-ordered expansion of `a^q a†^p` for a single mode:
/// `Σ_k k!·C(q,k)·C(p,k) a†^(p−k) a^(q−k)`.
pub(crate) fn reorder_single_mode(q: u32, p: u32) -> Vec<(BigInt, u32, u32)> {
    let mut out = Vec::with_capacity(q.min(p) as usize + 1);
    let mut factorial = BigInt::one();
    for k in 0..=q.min(p) {
        if k > 0 {
            factorial *= k;
        }
        let weight = &factorial * binomial(BigInt::from(q), BigInt::from(k))
            * binomial(BigInt::from(p), BigInt::from(k));
        out.push((weight, p - k, q - k));
    }
    out
}

/// Per-mode normal-ordered expansion of `left · right`, as a list of integer
/// weights and the resulting exponents (without coefficients or grades).
pub(crate) fn product_expansion(left: &[ModePower], right: &[ModePower]) -> Vec<(BigInt, Vec<ModePower>)> {
    let mut acc: Vec<(BigInt, Vec<ModePower>)> = vec![(BigInt::one(), Vec::with_capacity(left.len()))];
    for (l, r) in left.iter().zip(right) {
        let local = reorder_single_mode(l.annihilation, r.creation);
        if local.len() == 1 {
            let (_, p, q) = local[0];
            let power = ModePower::new(l.creation + p, q + r.annihilation);
            for (_, powers) in acc.iter_mut() {
                powers.push(power);
            }
            continue;
        }
        let mut next = Vec::with_capacity(acc.len() * local.len());
        for (weight, powers) in &acc {
            for (w, p, q) in &local {
                let mut powers = powers.clone();
                powers.push(ModePower::new(l.creation + p, q + r.annihilation));
                next.push((weight * w, powers));
            }
        }
        acc = next;
    }
    acc
}
