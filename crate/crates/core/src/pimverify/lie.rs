use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow};
use serde::{Serialize, Serializer};

use super::VerifyError;

/// Lie types with a Steinberg margin exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Series {
    A,
    B,
    C,
    D,
    G2,
    D4Triality,
    F4,
    E6,
    E6Twisted,
    E7,
    E8,
}

impl Series {
    pub const ALL: [Series; 11] = [
        Series::A,
        Series::B,
        Series::C,
        Series::D,
        Series::G2,
        Series::D4Triality,
        Series::F4,
        Series::E6,
        Series::E6Twisted,
        Series::E7,
        Series::E8,
    ];

    /// Rank for the exceptional types.
    pub fn fixed_rank(self) -> Option<u32> {
        match self {
            Series::A | Series::B | Series::C | Series::D => None,
            Series::G2 => Some(2),
            Series::D4Triality | Series::F4 => Some(4),
            Series::E6 | Series::E6Twisted => Some(6),
            Series::E7 => Some(7),
            Series::E8 => Some(8),
        }
    }

    fn min_rank(self) -> u32 {
        match self {
            Series::A => 1,
            Series::B | Series::C => 2,
            Series::D => 4,
            s => s.fixed_rank().unwrap(),
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Series::A => "A",
            Series::B => "B",
            Series::C => "C",
            Series::D => "D",
            Series::G2 => "G2",
            Series::D4Triality => "3D4",
            Series::F4 => "F4",
            Series::E6 => "E6",
            Series::E6Twisted => "2E6",
            Series::E7 => "E7",
            Series::E8 => "E8",
        };
        f.write_str(s)
    }
}

impl FromStr for Series {
    type Err = VerifyError;
    fn from_str(s: &str) -> Result<Series, VerifyError> {
        Series::ALL
            .into_iter()
            .find(|x| x.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| VerifyError::Unsupported(format!("unknown series {s:?}")))
    }
}

/// A finite group of Lie type: series, rank and field size.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SteinbergSpec {
    pub series: Series,
    pub n: u32,
    pub q: u64,
}

impl fmt::Display for SteinbergSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.series.fixed_rank() {
            Some(_) => write!(f, "{}", self.series),
            None => write!(f, "{}{}", self.series, self.n),
        }
    }
}

impl SteinbergSpec {
    /// `n` may be omitted (`None`) for the exceptional types.
    pub fn new(series: Series, n: Option<u32>, q: u64) -> Result<SteinbergSpec, VerifyError> {
        let n = match (series.fixed_rank(), n) {
            (Some(r), None) => r,
            (Some(r), Some(m)) if m == r => r,
            (Some(r), Some(m)) => return Err(VerifyError::Unsupported(format!("{series} has rank {r}, not {m}"))),
            (None, Some(m)) if m >= series.min_rank() => m,
            (None, Some(m)) => {
                return Err(VerifyError::Unsupported(format!("{series}{m} needs rank at least {}", series.min_rank())))
            }
            (None, None) => return Err(VerifyError::Unsupported(format!("{series} needs a rank"))),
        };
        if !is_prime_power(q) {
            return Err(VerifyError::Unsupported(format!("{q} is not a prime power")));
        }
        Ok(SteinbergSpec { series, n, q })
    }

    /// Number of positive roots; the Steinberg degree is `q^N`.
    pub fn positive_roots(&self) -> u32 {
        let n = self.n;
        match self.series {
            Series::A => n * (n + 1) / 2,
            Series::B | Series::C => n * n,
            Series::D => n * n - n,
            Series::G2 => 6,
            Series::D4Triality => 12,
            Series::F4 => 24,
            Series::E6 | Series::E6Twisted => 36,
            Series::E7 => 63,
            Series::E8 => 120,
        }
    }

    /// Exponent `m` such that no p'-subgroup of order at most `q^m` works.
    pub fn margin_exponent(&self) -> u32 {
        let n = self.n;
        match self.series {
            Series::A => n,
            Series::B | Series::C | Series::D => 2 * (n - 1),
            Series::G2 => 3,
            Series::D4Triality | Series::F4 => 8,
            Series::E6 | Series::E6Twisted => 16,
            Series::E7 => 32,
            Series::E8 => 56,
        }
    }
}

fn is_prime_power(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= q && q % p != 0 {
        p += 1;
    }
    if p * p > q {
        return true;
    }
    let mut x = q;
    while x % p == 0 {
        x /= p;
    }
    x == 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SteinbergMargin {
    pub series: String,
    pub n: u32,
    pub q: u64,
    pub positive_roots: u32,
    pub m: u32,
    pub h_order: String,
    pub guaranteed_positive: bool,
    #[serde(serialize_with = "as_string")]
    pub lower_bound: BigRational,
}

fn as_string<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// Lower bound `(q^N - (h - 1) q^(N - m)) / h` for `<St|_H, 1>` and whether
/// `h <= q^m`, which forces it to be positive.
pub fn steinberg_margin(spec: &SteinbergSpec, h_order: &BigUint) -> Result<SteinbergMargin, VerifyError> {
    if *h_order < BigUint::one() {
        return Err(VerifyError::Unsupported("subgroup order must be positive".into()));
    }
    let big_n = spec.positive_roots();
    let m = spec.margin_exponent();
    debug_assert!(m <= big_n);
    let q = BigUint::from(spec.q);
    let st = Pow::pow(&q, big_n);
    let tail = Pow::pow(&q, big_n - m);
    let h = BigInt::from(h_order.clone());
    let numer = BigInt::from(st) - (&h - 1) * BigInt::from(tail);
    let lower_bound = BigRational::new(numer, h);
    Ok(SteinbergMargin {
        series: spec.series.to_string(),
        n: spec.n,
        q: spec.q,
        positive_roots: big_n,
        m,
        h_order: h_order.to_string(),
        guaranteed_positive: *h_order <= Pow::pow(&q, m),
        lower_bound,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuzukiMultiplicity {
    pub q2: u64,
    pub value: u64,
    /// `q2 < 8`, where the Suzuki groups do not apply.
    pub below_range: bool,
}

/// `q^2 - sqrt(2) q` for `q^2 = 2^(2f+1)`, computed as `2^(2f+1) - 2^(f+1)`.
pub fn suzuki_multiplicity(q2: u64) -> Result<SuzukiMultiplicity, VerifyError> {
    if !q2.is_power_of_two() || q2.trailing_zeros() % 2 == 0 {
        return Err(VerifyError::Unsupported(format!("{q2} is not an odd power of 2")));
    }
    let f = (q2.trailing_zeros() - 1) / 2;
    Ok(SuzukiMultiplicity { q2, value: q2 - (1u64 << (f + 1)), below_range: q2 < 8 })
}
