//! Rational scalars and their textual forms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(n: i64) -> Int {
    BigInt::from(n)
}

pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rint(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

pub fn from_int(n: &Int) -> Rat {
    BigRational::from_integer(n.clone())
}

/// Parses `"p/q"`, `"p"`, or a finite decimal such as `"-0.25"`.
pub fn parse_rational(s: &str) -> Result<Rat> {
    let t = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        if fp.is_empty() || !fp.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = ip.starts_with('-');
        let ip_digits = ip.trim_start_matches(['-', '+']);
        let whole: BigInt = if ip_digits.is_empty() {
            BigInt::zero()
        } else {
            ip_digits.parse().map_err(|_| bad())?
        };
        let frac: BigInt = fp.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), fp.len());
        let mag = BigRational::new(whole * &scale + frac, scale);
        return Ok(if neg { -mag } else { mag });
    }
    let n: BigInt = t.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

/// Normative exact form: `"p/q"`, or `"p"` for integers.
pub fn format_rational(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Decimal rendering rounded half-away-from-zero to `sig` significant digits.
/// Computed with integer arithmetic only.
pub fn decimal_string(r: &Rat, sig: usize) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let neg = r.is_negative();
    let a = r.abs();
    let ten = BigInt::from(10);
    let lo = num_traits::pow(ten.clone(), sig - 1);
    let hi = num_traits::pow(ten.clone(), sig);
    // find k with lo <= a * 10^k < hi
    let mut k: i64 = sig as i64 - 1 - (digits(a.numer()) as i64 - digits(a.denom()) as i64);
    let scaled = |k: i64| -> Rat {
        if k >= 0 {
            &a * from_int(&num_traits::pow(ten.clone(), k as usize))
        } else {
            &a / from_int(&num_traits::pow(ten.clone(), (-k) as usize))
        }
    };
    loop {
        let s = scaled(k);
        if s < from_int(&lo) {
            k += 1;
        } else if s >= from_int(&hi) {
            k -= 1;
        } else {
            break;
        }
    }
    let s = scaled(k);
    let half = rat(1, 2);
    let mut m = (s + half).floor().to_integer();
    if m == hi {
        m = lo.clone();
        k -= 1;
    }
    let mut ds = m.to_string();
    // value = m * 10^{-k}
    let mut exp10 = -k;
    // strip trailing zeros into the exponent
    while ds.len() > 1 && ds.ends_with('0') {
        ds.pop();
        exp10 += 1;
    }
    let nd = ds.len() as i64;
    let point = nd + exp10; // digits before the decimal point
    let body = if exp10 >= 0 && point <= 21 {
        let mut s = ds.clone();
        s.push_str(&"0".repeat(exp10 as usize));
        s
    } else if point > 0 && exp10 < 0 {
        format!("{}.{}", &ds[..point as usize], &ds[point as usize..])
    } else if point <= 0 && point > -7 {
        format!("0.{}{}", "0".repeat((-point) as usize), ds)
    } else {
        let e = point - 1;
        if ds.len() > 1 {
            format!("{}.{}e{}", &ds[..1], &ds[1..], e)
        } else {
            format!("{}e{}", ds, e)
        }
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

fn digits(n: &BigInt) -> usize {
    n.abs().to_string().len()
}

pub fn is_integral(r: &Rat) -> bool {
    r.denom().is_one()
}

/// gcd of a slice of integers; `None` when all are zero.
pub fn gcd_slice(v: &[Int]) -> Option<Int> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        None
    } else {
        Some(g)
    }
}

/// Least common multiple of the denominators.
pub fn denom_lcm(v: &[Rat]) -> Int {
    v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()))
}

pub fn factorial(n: usize) -> Int {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}
