//! Local fields: square classes and Hilbert symbols over ℚ_p, the multiquadratic
//! tower F^{(2)} at fixed precision, norms, and the socle of J read off from norms.

mod norms;
mod tower;

pub use norms::{
    demuskin_formula_layers, length_identity_check, norm_lemma_check, socle_by_norms,
    subgroups_of_order, FormulaLayers, NormLemmaReport, SocleByNorms,
};
pub use tower::{build_tower, Elem, TowerField};

use crate::qsymbols::SymbolField;
use gf2core::{BitMatrix, BitVec};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PadicError {
    #[error("zero has no square class")]
    Zero,
    #[error("insufficient precision: need {needed} digits, have {available}")]
    Precision { needed: u32, available: u32 },
    #[error("adjoined classes are linearly dependent")]
    Dependent,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

/// Base field of a tower.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Base {
    Q2,
    /// ℚ_p for an odd prime p.
    Qp(u64),
}

impl Base {
    pub fn prime(self) -> u64 {
        match self {
            Base::Q2 => 2,
            Base::Qp(p) => p,
        }
    }

    /// dim Ḟ/Ḟ².
    pub fn n(self) -> usize {
        match self {
            Base::Q2 => 3,
            Base::Qp(_) => 2,
        }
    }

    /// Integers representing the square-class basis: (−1, 2, 5) or (u, p).
    pub fn class_representatives(self) -> Vec<i128> {
        match self {
            Base::Q2 => vec![-1, 2, 5],
            Base::Qp(p) => vec![nonresidue(p) as i128, p as i128],
        }
    }

    pub fn validate(self) -> Result<(), PadicError> {
        if let Base::Qp(p) = self {
            if !(3..=1 << 20).contains(&p) || !is_prime(p) {
                return Err(PadicError::OutOfRange(format!(
                    "{p} is not an odd prime below 2^20"
                )));
            }
        }
        Ok(())
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

pub(crate) fn pow_mod(mut b: u128, mut e: u128, m: u128) -> u128 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Least quadratic non-residue mod an odd prime.
pub fn nonresidue(p: u64) -> u64 {
    (2..p)
        .find(|&u| legendre(u as u128, p) == -1)
        .expect("odd prime")
}

fn legendre(a: u128, p: u64) -> i8 {
    match pow_mod(a, (p as u128 - 1) / 2, p as u128) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// p^val · unit with the unit known modulo p^prec.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PadicNumber {
    pub p: u64,
    pub val: i64,
    pub unit: u128,
    pub prec: u32,
}

impl PadicNumber {
    fn modulus(p: u64, prec: u32) -> Result<u128, PadicError> {
        (p as u128)
            .checked_pow(prec)
            .filter(|m| *m < 1u128 << 120)
            .ok_or_else(|| PadicError::OutOfRange(format!("{p}^{prec} does not fit")))
    }

    pub fn from_integer(p: u64, x: i128, prec: u32) -> Result<Self, PadicError> {
        if x == 0 {
            return Err(PadicError::Zero);
        }
        let m = Self::modulus(p, prec)?;
        let mut val = 0;
        let mut y = x;
        while y % p as i128 == 0 {
            y /= p as i128;
            val += 1;
        }
        Ok(PadicNumber {
            p,
            val,
            unit: y.rem_euclid(m as i128) as u128,
            prec,
        })
    }

    pub fn mul(&self, other: &PadicNumber) -> PadicNumber {
        assert_eq!(self.p, other.p);
        let prec = self.prec.min(other.prec);
        let m = Self::modulus(self.p, prec).expect("checked at construction");
        PadicNumber {
            p: self.p,
            val: self.val + other.val,
            unit: (self.unit % m) * (other.unit % m) % m,
            prec,
        }
    }

    pub fn neg(&self) -> PadicNumber {
        let m = Self::modulus(self.p, self.prec).expect("checked at construction");
        PadicNumber {
            unit: (m - self.unit % m) % m,
            ..*self
        }
    }
}

fn need(x: &PadicNumber) -> Result<(), PadicError> {
    let needed = if x.p == 2 { 3 } else { 1 };
    if x.prec < needed {
        return Err(PadicError::Precision {
            needed,
            available: x.prec,
        });
    }
    Ok(())
}

/// Coordinates over ([−1], [2], [5]) for p = 2 and over ([u], [p]) for odd p.
pub fn square_class(x: &PadicNumber) -> Result<BitVec, PadicError> {
    need(x)?;
    let odd_val = x.val.rem_euclid(2) == 1;
    if x.p == 2 {
        let (m1, m5) = match x.unit % 8 {
            1 => (false, false),
            3 => (true, true),
            5 => (false, true),
            7 => (true, false),
            _ => return Err(PadicError::Internal("even unit".into())),
        };
        Ok(BitVec::from_bools(&[m1, odd_val, m5]))
    } else {
        Ok(BitVec::from_bools(&[legendre(x.unit, x.p) == -1, odd_val]))
    }
}

/// True iff (a, b) = −1, i.e. ax² + by² = z² has only the trivial solution.
pub fn hilbert_symbol(a: &PadicNumber, b: &PadicNumber) -> Result<bool, PadicError> {
    assert_eq!(a.p, b.p);
    need(a)?;
    need(b)?;
    let (al, be) = (a.val.rem_euclid(2) == 1, b.val.rem_euclid(2) == 1);
    if a.p == 2 {
        let (u, v) = (a.unit % 8, b.unit % 8);
        let eps = |x: u128| (x % 4) == 3;
        let omega = |x: u128| x % 8 == 3 || x % 8 == 5;
        Ok((eps(u) && eps(v)) ^ (al && omega(v)) ^ (be && omega(u)))
    } else {
        let p = a.p;
        let sign = al && be && p % 4 == 3;
        let lu = be && legendre(a.unit, p) == -1;
        let lv = al && legendre(b.unit, p) == -1;
        Ok(sign ^ lu ^ lv)
    }
}

/// The quadratic-symbol model of the base field: its square classes, [−1] and the
/// Hilbert symbol on the representative basis.
pub fn symbol_field(base: Base) -> Result<SymbolField, PadicError> {
    base.validate()?;
    let p = base.prime();
    let prec = 8;
    let reps: Vec<PadicNumber> = base
        .class_representatives()
        .into_iter()
        .map(|x| PadicNumber::from_integer(p, x, prec))
        .collect::<Result<_, _>>()?;
    let n = reps.len();
    let mut gram = BitMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            gram.set(i, j, hilbert_symbol(&reps[i], &reps[j])?);
        }
    }
    let minus_one = square_class(&PadicNumber::from_integer(p, -1, prec)?)?;
    let name = match base {
        Base::Q2 => "Q2".to_string(),
        Base::Qp(p) => format!("Q{p}"),
    };
    SymbolField::new(name, minus_one, gram).map_err(|e| PadicError::Internal(e.to_string()))
}
