//! Exact Alexander polynomials: Laurent polynomial arithmetic over big
//! integers, the reduced Burau representation, and the torus-knot closed form.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::ser::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::braids::BraidWord;
use crate::complex::HFKTable;
use crate::error::{Error, Result};

/// Laurent polynomial in one variable `t` with arbitrary-precision integer
/// coefficients. Stored as the lowest degree plus a dense coefficient run;
/// the first and last stored coefficients are nonzero (or the run is empty
/// for the zero polynomial).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    min_deg: i64,
    coeffs: Vec<BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { min_deg: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(0, BigInt::one())
    }

    pub fn monomial(deg: i64, coeff: impl Into<BigInt>) -> Self {
        let c = coeff.into();
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly { min_deg: deg, coeffs: vec![c] }
    }

    /// Builds from a dense run starting at `min_deg`, trimming zero edges.
    pub fn from_coeffs(min_deg: i64, coeffs: Vec<BigInt>) -> Self {
        let mut p = LaurentPoly { min_deg, coeffs };
        p.trim();
        p
    }

    pub fn from_i64_coeffs(min_deg: i64, coeffs: &[i64]) -> Self {
        LaurentPoly::from_coeffs(min_deg, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead_zeros = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros > 0 {
            self.coeffs.drain(..lead_zeros);
            self.min_deg += lead_zeros as i64;
        }
        if self.coeffs.is_empty() {
            self.min_deg = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_deg(&self) -> Option<i64> {
        if self.is_zero() { None } else { Some(self.min_deg) }
    }

    pub fn max_deg(&self) -> Option<i64> {
        if self.is_zero() { None } else { Some(self.min_deg + self.coeffs.len() as i64 - 1) }
    }

    /// Number of coefficients from lowest to highest degree, inclusive.
    pub fn span(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, deg: i64) -> BigInt {
        if self.is_zero() || deg < self.min_deg {
            return BigInt::zero();
        }
        let idx = (deg - self.min_deg) as usize;
        self.coeffs.get(idx).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.min_deg + i as i64, c))
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let lo = self.min_deg.min(other.min_deg);
        let hi = (self.min_deg + self.coeffs.len() as i64)
            .max(other.min_deg + other.coeffs.len() as i64);
        let mut coeffs = vec![BigInt::zero(); (hi - lo) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[(self.min_deg - lo) as usize + i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[(other.min_deg - lo) as usize + i] += c;
        }
        LaurentPoly::from_coeffs(lo, coeffs)
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly {
            min_deg: self.min_deg,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || other.is_zero() {
            return LaurentPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        LaurentPoly::from_coeffs(self.min_deg + other.min_deg, coeffs)
    }

    /// Multiplies by `t^k`.
    pub fn shifted(&self, k: i64) -> LaurentPoly {
        if self.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly { min_deg: self.min_deg + k, coeffs: self.coeffs.clone() }
    }

    /// Substitutes `t -> 1/t`.
    pub fn reversed(&self) -> LaurentPoly {
        if self.is_zero() {
            return LaurentPoly::zero();
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        LaurentPoly {
            min_deg: -(self.min_deg + self.coeffs.len() as i64 - 1),
            coeffs,
        }
    }

    pub fn eval_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// True when the polynomial equals itself under `t -> 1/t`.
    pub fn is_symmetric(&self) -> bool {
        *self == self.reversed()
    }

    /// Exact division; the remainder must vanish at every step, which holds
    /// whenever the quotient has integer coefficients.
    pub fn try_div_exact(&self, divisor: &LaurentPoly) -> Result<LaurentPoly> {
        if divisor.is_zero() {
            return Err(Error::Internal("division by zero polynomial".into()));
        }
        if self.is_zero() {
            return Ok(LaurentPoly::zero());
        }
        let mut rem = self.coeffs.clone();
        let div = &divisor.coeffs;
        let lead = div.last().expect("trimmed");
        if rem.len() < div.len() {
            return Err(Error::Internal("inexact polynomial division".into()));
        }
        let qlen = rem.len() - div.len() + 1;
        let mut quot = vec![BigInt::zero(); qlen];
        for qi in (0..qlen).rev() {
            let top = rem[qi + div.len() - 1].clone();
            if top.is_zero() {
                continue;
            }
            let (q, r) = num_integer::div_rem(top, lead.clone());
            if !r.is_zero() {
                return Err(Error::Internal("inexact polynomial division".into()));
            }
            for (di, d) in div.iter().enumerate() {
                let t = d * &q;
                rem[qi + di] -= t;
            }
            quot[qi] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::Internal("inexact polynomial division".into()));
        }
        Ok(LaurentPoly::from_coeffs(self.min_deg - divisor.min_deg, quot))
    }

    /// Normalizes a knot Alexander polynomial determined up to a unit:
    /// centers the support around degree 0 and fixes the sign so the value
    /// at `t = 1` is `+1`.
    pub fn normalized_symmetric(&self) -> Result<LaurentPoly> {
        if self.is_zero() {
            return Err(Error::Internal("zero polynomial cannot be normalized".into()));
        }
        let lo = self.min_deg().unwrap();
        let hi = self.max_deg().unwrap();
        if (lo + hi) % 2 != 0 {
            return Err(Error::Internal(
                "support cannot be centered; not a knot polynomial".into(),
            ));
        }
        let centered = self.shifted(-(lo + hi) / 2);
        let at_one = centered.eval_one();
        let result = if at_one == BigInt::one() {
            centered
        } else if at_one == -BigInt::one() {
            centered.neg()
        } else {
            return Err(Error::Internal(format!(
                "value at t=1 is {at_one}, expected a unit"
            )));
        };
        if !result.is_symmetric() {
            return Err(Error::Internal("normalized polynomial is not symmetric".into()));
        }
        Ok(result)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        // highest degree first
        for (deg, c) in self.iter().collect::<Vec<_>>().into_iter().rev() {
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            }
            if !mag.is_one() || deg == 0 {
                write!(f, "{mag}")?;
            }
            match deg {
                0 => {}
                1 => write!(f, "t")?,
                d => write!(f, "t^{d}")?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PolyDump {
    min_deg: i64,
    coeffs: Vec<serde_json::Number>,
}

// Serialized as {"min_deg": d, "coeffs": [..]} with coefficients emitted as
// exact JSON integers (arbitrary precision enabled), lowest degree first.
impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let n = serde_json::Number::from_str(&c.to_string())
                .map_err(|e| S::Error::custom(format!("bad coefficient: {e}")))?;
            coeffs.push(n);
        }
        PolyDump { min_deg: self.min_deg, coeffs }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let dump = PolyDump::deserialize(deserializer)?;
        let mut coeffs = Vec::with_capacity(dump.coeffs.len());
        for n in &dump.coeffs {
            let c = BigInt::from_str(&n.to_string())
                .map_err(|e| D::Error::custom(format!("bad coefficient: {e}")))?;
            coeffs.push(c);
        }
        Ok(LaurentPoly::from_coeffs(dump.min_deg, coeffs))
    }
}

// ---------------------------------------------------------------------------
// Reduced Burau representation
// ---------------------------------------------------------------------------

type Mat = Vec<Vec<LaurentPoly>>;

fn identity(k: usize) -> Mat {
    (0..k)
        .map(|i| {
            (0..k)
                .map(|j| if i == j { LaurentPoly::one() } else { LaurentPoly::zero() })
                .collect()
        })
        .collect()
}

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let k = a.len();
    let mut out = vec![vec![LaurentPoly::zero(); k]; k];
    for i in 0..k {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..k {
                if !b[l][j].is_zero() {
                    out[i][j] = out[i][j].add(&a[i][l].mul(&b[l][j]));
                }
            }
        }
    }
    out
}

/// Generator matrix for `sigma_i` (1-based) or its inverse, size
/// `(strands - 1) x (strands - 1)`. Rows and columns use 1-based strand
/// indices `1..strands`; only rows `i-1, i, i+1` differ from the identity.
fn burau_generator(strands: usize, letter: i32) -> Mat {
    let k = strands - 1;
    let i = letter.unsigned_abs() as usize; // 1-based generator index
    let mut m = identity(k);
    let t = LaurentPoly::monomial(1, 1);
    let t_inv = LaurentPoly::monomial(-1, 1);
    // row/col holding the generator, 0-based
    let r = i - 1;
    if letter > 0 {
        m[r][r] = t.neg();
        if r > 0 {
            m[r][r - 1] = t.clone();
        }
        if r + 1 < k {
            m[r][r + 1] = LaurentPoly::one();
        }
    } else {
        m[r][r] = t_inv.neg();
        if r > 0 {
            m[r][r - 1] = LaurentPoly::one();
        }
        if r + 1 < k {
            m[r][r + 1] = t_inv.clone();
        }
    }
    m
}

/// Product of generator matrices over the word, acting on
/// `(strands - 1)`-dimensional row space. An empty word gives the identity.
pub fn burau_reduced(word: &BraidWord) -> Mat {
    let k = word.strands() - 1;
    let mut acc = identity(k);
    for &l in word.letters() {
        acc = mat_mul(&acc, &burau_generator(word.strands(), l));
    }
    acc
}

/// Determinant by expansion over column subsets; no division needed.
fn det(m: &Mat) -> LaurentPoly {
    let k = m.len();
    if k == 0 {
        return LaurentPoly::one();
    }
    // dp over subsets of columns: after processing rows 0..popcount(mask),
    // dp[mask] is the signed minor determinant on those columns.
    let mut dp = vec![LaurentPoly::zero(); 1usize << k];
    dp[0] = LaurentPoly::one();
    for mask in 1usize..(1usize << k) {
        let row = mask.count_ones() as usize - 1;
        let mut acc = LaurentPoly::zero();
        // cofactor sign (-1)^{row + column position within the subset}
        let mut sign_flip = row % 2 == 1;
        for j in 0..k {
            let bit = 1usize << j;
            if mask & bit == 0 {
                continue;
            }
            if !m[row][j].is_zero() && !dp[mask ^ bit].is_zero() {
                let term = m[row][j].mul(&dp[mask ^ bit]);
                acc = if sign_flip { acc.sub(&term) } else { acc.add(&term) };
            }
            sign_flip = !sign_flip;
        }
        dp[mask] = acc;
    }
    dp[(1usize << k) - 1].clone()
}

// ---------------------------------------------------------------------------
// Alexander polynomials
// ---------------------------------------------------------------------------

/// Alexander polynomial of the knot closure of `word`, computed from the
/// reduced Burau matrix `B` as `det(I - B) * (1 - t) / (1 - t^strands)`,
/// then centered and sign-normalized so the value at `t = 1` is `+1`.
pub fn alexander_from_braid(word: &BraidWord) -> Result<LaurentPoly> {
    let components = word.closure_component_count();
    if components != 1 {
        return Err(Error::NotAKnot { components });
    }
    let b = burau_reduced(word);
    let k = word.strands() - 1;
    let mut i_minus_b = identity(k);
    for r in 0..k {
        for c in 0..k {
            i_minus_b[r][c] = i_minus_b[r][c].sub(&b[r][c]);
        }
    }
    let d = det(&i_minus_b);
    let n = word.strands() as i64;
    let one_minus_t = LaurentPoly::from_i64_coeffs(0, &[1, -1]);
    let mut one_minus_tn = vec![BigInt::zero(); n as usize + 1];
    one_minus_tn[0] = BigInt::one();
    one_minus_tn[n as usize] = -BigInt::one();
    let denom = LaurentPoly::from_coeffs(0, one_minus_tn);
    let raw = d.mul(&one_minus_t).try_div_exact(&denom)?;
    raw.normalized_symmetric()
}

/// Closed form for the torus knot `T(p, q)`: the symmetrized
/// `(t^{pq} - 1)(t - 1) / ((t^p - 1)(t^q - 1))`.
pub fn torus_knot_delta(p: u64, q: u64) -> Result<LaurentPoly> {
    if p == 0 || q == 0 {
        return Err(Error::NotCoprime { p, q });
    }
    if num_integer::gcd(p, q) != 1 {
        return Err(Error::NotCoprime { p, q });
    }
    let pow_minus_one = |e: u64| -> LaurentPoly {
        let mut coeffs = vec![BigInt::zero(); e as usize + 1];
        coeffs[0] = -BigInt::one();
        coeffs[e as usize] = BigInt::one();
        LaurentPoly::from_coeffs(0, coeffs)
    };
    let numer = pow_minus_one(p * q).mul(&pow_minus_one(1));
    let quotient = numer
        .try_div_exact(&pow_minus_one(p))?
        .try_div_exact(&pow_minus_one(q))?;
    quotient.normalized_symmetric()
}

/// Graded Euler characteristic of a full hat-flavor table:
/// `sum_{a,m} (-1)^m dim(a, m) t^a`. Truncated tables are refused since
/// missing levels would silently corrupt the polynomial.
pub fn alexander_from_hfk(table: &HFKTable) -> Result<LaurentPoly> {
    if table.truncated {
        return Err(Error::TruncatedTable);
    }
    let mut acc = LaurentPoly::zero();
    for (&(a, m), &dim) in table.dims.iter() {
        let sign: i64 = if m.rem_euclid(2) == 0 { 1 } else { -1 };
        acc = acc.add(&LaurentPoly::monomial(a, sign * dim as i64));
    }
    Ok(acc)
}
