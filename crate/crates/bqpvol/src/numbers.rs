//! Exact integer and rational arithmetic: factorials, binomials, Euler
//! (zigzag) numbers A_k via the boustrophedon transform, and high-precision
//! d-th roots of positive rationals.
//!
//! A_k counts alternating permutations of {1..k} (up-down convention:
//! s_1 < s_2 > s_3 < ...); the odd-indexed values are the tangent numbers,
//! tan(x) = sum A_{2m+1} x^{2m+1} / (2m+1)!.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational in canonical form (reduced, positive
/// denominator); every exact value in this crate is one of these.
pub type ExactRational = BigRational;

pub fn factorial(k: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 2..=k {
        acc *= i;
    }
    acc
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    // C(n, i+1) = C(n, i) * (n - i) / (i + 1), exact at every step.
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Table of Euler zigzag numbers A_0..A_k.
#[derive(Debug, Clone)]
pub struct EulerNumberTable {
    values: Vec<BigUint>,
}

/// Boustrophedon (Seidel) triangle: T(0,0) = 1; T(k,0) = 0 and
/// T(k,i) = T(k,i-1) + T(k-1,k-i) for k >= 1; A_k = T(k,k).
pub fn euler_numbers(k_max: usize) -> EulerNumberTable {
    let mut values = Vec::with_capacity(k_max + 1);
    let mut row = vec![BigUint::one()];
    values.push(BigUint::one());
    for k in 1..=k_max {
        let mut next = Vec::with_capacity(k + 1);
        next.push(BigUint::zero());
        for i in 1..=k {
            let t = &next[i - 1] + &row[k - i];
            next.push(t);
        }
        values.push(next[k].clone());
        row = next;
    }
    EulerNumberTable { values }
}

impl EulerNumberTable {
    /// A_k; panics if k is beyond the table.
    pub fn a(&self, k: usize) -> &BigUint {
        &self.values[k]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[BigUint] {
        &self.values
    }
}

/// Independent oracle: count alternating permutations of {1..k} by full
/// enumeration of all k! permutations (Heap's algorithm) and filtering on the
/// up-down pattern. Exact; capped at k <= 12.
pub fn alternating_permutation_count_bruteforce(k: usize) -> Result<u64> {
    if k > 12 {
        return Err(Error::size("brute-force alternating count capped at k <= 12", k as u64));
    }
    if k == 0 {
        return Ok(1);
    }
    let mut perm: Vec<u32> = (1..=k as u32).collect();
    let mut count = 0u64;
    let is_alternating = |p: &[u32]| -> bool {
        for i in 1..p.len() {
            if i % 2 == 1 {
                if p[i - 1] >= p[i] {
                    return false;
                }
            } else if p[i - 1] <= p[i] {
                return false;
            }
        }
        true
    };
    // Heap's algorithm, iterative.
    let mut c = vec![0usize; k];
    if is_alternating(&perm) {
        count += 1;
    }
    let mut i = 0;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            if is_alternating(&perm) {
                count += 1;
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(count)
}

/// Decimal digits of head room used by `dth_root_f64`; 24 digits keeps the
/// floor error far below f64 resolution.
const ROOT_SCALE_DIGITS: u32 = 24;

/// d-th root of a nonnegative rational, correct to f64 resolution (~16
/// significant digits, comfortably beyond the 12-digit reporting target).
///
/// Exact integer route: floor((num * 10^(S*d) / den)^(1/d)) via
/// `BigUint::nth_root`, then a single lossy division by 10^S. The value stays
/// rational until that final step.
pub fn dth_root_f64(v: &ExactRational, d: u64) -> Result<f64> {
    if d == 0 {
        return Err(Error::domain("0th root is undefined"));
    }
    if v.is_negative() {
        return Err(Error::domain("d-th root of a negative rational"));
    }
    if v.is_zero() {
        return Ok(0.0);
    }
    if d > 100_000 {
        return Err(Error::size("d-th root dimension cap", d));
    }
    let num = v.numer().magnitude().clone();
    let den = v.denom().magnitude();
    let scale = BigUint::from(10u32).pow(ROOT_SCALE_DIGITS * (d as u32));
    let radicand = num * scale / den;
    let root = radicand.nth_root(d as u32);
    let rf = root.to_f64().ok_or_else(|| Error::domain("root does not fit f64"))?;
    Ok(rf / 10f64.powi(ROOT_SCALE_DIGITS as i32))
}

/// Lossy f64 value of a rational, robust to components that individually
/// overflow f64 (e.g. tiny volumes with astronomical denominators).
pub fn rational_to_f64(v: &ExactRational) -> f64 {
    if v.is_zero() {
        return 0.0;
    }
    let s = decimal_string(v, 17);
    s.parse::<f64>().unwrap_or(f64::NAN)
}

/// Decimal approximation with `sig` significant digits in scientific
/// notation, e.g. "8.3333333333e-3". Labeled approximations; exact values
/// travel as rational strings.
pub fn decimal_string(v: &ExactRational, sig: usize) -> String {
    assert!(sig >= 1);
    if v.is_zero() {
        return "0".to_string();
    }
    let neg = v.is_negative();
    let num = v.numer().magnitude();
    let den = v.denom().magnitude();
    // Scale so the integer quotient carries at least sig+1 digits.
    let num_digits = num.to_str_radix(10).len() as i64;
    let den_digits = den.to_str_radix(10).len() as i64;
    let shift = (sig as i64 + 2) - (num_digits - den_digits);
    let shift = shift.max(0) as u32;
    let scaled = num * BigUint::from(10u32).pow(shift) / den;
    let digits = scaled.to_str_radix(10);
    // v ~ digits * 10^(-shift); exponent of the leading digit:
    let exp = digits.len() as i64 - 1 - shift as i64;
    let (mantissa, exp) = round_decimal_digits(&digits, sig, exp);
    let sign = if neg { "-" } else { "" };
    if mantissa.len() == 1 {
        format!("{}{}e{}", sign, &mantissa[..1], exp)
    } else {
        format!("{}{}.{}e{}", sign, &mantissa[..1], &mantissa[1..], exp)
    }
}

/// Round a digit string to `sig` digits (half away from zero); returns the
/// rounded digits and the possibly bumped exponent.
fn round_decimal_digits(digits: &str, sig: usize, exp: i64) -> (String, i64) {
    let ds: Vec<u8> = digits.bytes().map(|b| b - b'0').collect();
    if ds.len() <= sig {
        let mut s = digits.to_string();
        while s.len() < sig {
            s.push('0');
        }
        return (s, exp);
    }
    let mut head: Vec<u8> = ds[..sig].to_vec();
    if ds[sig] >= 5 {
        let mut i = sig;
        loop {
            if i == 0 {
                head.insert(0, 1);
                head.pop();
                return (head.iter().map(|d| (d + b'0') as char).collect(), exp + 1);
            }
            i -= 1;
            if head[i] == 9 {
                head[i] = 0;
            } else {
                head[i] += 1;
                break;
            }
        }
    }
    (head.iter().map(|d| (d + b'0') as char).collect(), exp)
}

/// Parse "num/den", an integer, or a plain decimal ("0.5", "-3.25e-2" is not
/// supported — no exponent forms) into an exact rational.
pub fn rational_from_str(s: &str) -> Result<ExactRational> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let num: BigInt = a.trim().parse().map_err(|_| bad_rational(s))?;
        let den: BigInt = b.trim().parse().map_err(|_| bad_rational(s))?;
        if den.is_zero() {
            return Err(Error::domain(format!("zero denominator in '{s}'")));
        }
        return Ok(ExactRational::new(num, den));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let neg = int_part.trim_start().starts_with('-');
        let int_digits = if int_part.is_empty() || int_part == "-" { "0" } else { int_part };
        let int: BigInt = int_digits.parse().map_err(|_| bad_rational(s))?;
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad_rational(s));
        }
        let frac: BigInt = frac_part.parse().map_err(|_| bad_rational(s))?;
        let den = BigInt::from(10u32).pow(frac_part.len() as u32);
        let mag = int.magnitude() * den.magnitude() + frac.magnitude();
        let mut v = ExactRational::new(BigInt::from(mag), den);
        if neg {
            v = -v;
        }
        return Ok(v);
    }
    let num: BigInt = s.parse().map_err(|_| bad_rational(s))?;
    Ok(ExactRational::from(num))
}

fn bad_rational(s: &str) -> Error {
    Error::parse(format!("cannot parse rational '{s}' (expected num/den, integer, or decimal)"))
}

/// Convenience constructors used across the crate.
pub fn rat(num: i64, den: i64) -> ExactRational {
    ExactRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(v: i64) -> ExactRational {
    ExactRational::from(BigInt::from(v))
}

pub fn biguint_to_f64(v: &BigUint) -> f64 {
    v.to_f64().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_and_binomial_small() {
        assert_eq!(factorial(0), BigUint::one());
        assert_eq!(factorial(5), BigUint::from(120u32));
        assert_eq!(factorial(12), BigUint::from(479_001_600u64));
        assert_eq!(binomial(6, 3), BigUint::from(20u32));
        assert_eq!(binomial(10, 0), BigUint::one());
        assert_eq!(binomial(4, 7), BigUint::zero());
        assert_eq!(binomial(52, 5), BigUint::from(2_598_960u64));
    }

    #[test]
    fn euler_numbers_match_published_list() {
        let t = euler_numbers(9);
        let expect: [u64; 10] = [1, 1, 1, 2, 5, 16, 61, 272, 1385, 7936];
        for (k, e) in expect.iter().enumerate() {
            assert_eq!(t.a(k), &BigUint::from(*e), "A_{k}");
        }
    }

    #[test]
    fn euler_numbers_match_bruteforce_oracle() {
        let t = euler_numbers(10);
        for k in 0..=10 {
            let brute = alternating_permutation_count_bruteforce(k).unwrap();
            assert_eq!(t.a(k), &BigUint::from(brute), "A_{k} vs brute force");
        }
    }

    #[test]
    fn tangent_series_partial_sums_converge() {
        // tan(x) = sum A_{2m+1} x^{2m+1}/(2m+1)!; partial sums must approach
        // tan(x) monotonically in accuracy on [0, 1).
        let t = euler_numbers(31);
        for &x in &[0.1f64, 0.3, 0.5, 0.9] {
            let target = x.tan();
            let mut prev_err = f64::INFINITY;
            let mut sum = 0.0;
            for m in 0..=15 {
                let k = 2 * m + 1;
                sum += biguint_to_f64(t.a(k)) * x.powi(k as i32) / biguint_to_f64(&factorial(k as u64));
                let err = (sum - target).abs();
                assert!(err <= prev_err + 1e-15, "x={x} m={m}: {err} > {prev_err}");
                prev_err = err;
            }
            // Tail decays like (2x/pi)^k; x=0.9 converges more slowly.
            let tol = if x <= 0.5 { 1e-12 } else { 1e-6 };
            assert!(prev_err < tol, "x={x}: residual {prev_err}");
        }
    }

    #[test]
    fn euler_asymptotic_ratio_within_one_percent() {
        // A_k / k! ~ (4/pi) (2/pi)^k, within 1% for k >= 25.
        let t = euler_numbers(40);
        let pi = std::f64::consts::PI;
        for k in 25..=40 {
            let lhs = biguint_to_f64(t.a(k)) / biguint_to_f64(&factorial(k as u64));
            let rhs = (4.0 / pi) * (2.0 / pi).powi(k as i32);
            assert!((lhs / rhs - 1.0).abs() < 0.01, "k={k}: ratio {}", lhs / rhs);
        }
    }

    #[test]
    fn dth_root_exact_cases() {
        // (1/64)^(1/6) = 1/2 exactly.
        let r = dth_root_f64(&rat(1, 64), 6).unwrap();
        assert_eq!(r, 0.5);
        // (27/8)^(1/3) = 3/2.
        let r = dth_root_f64(&rat(27, 8), 3).unwrap();
        assert!((r - 1.5).abs() < 1e-15);
        // x^(1/1) = x.
        let r = dth_root_f64(&rat(7, 3), 1).unwrap();
        assert!((r - 7.0 / 3.0).abs() < 1e-15);
        assert_eq!(dth_root_f64(&rat_int(0), 5).unwrap(), 0.0);
        assert!(dth_root_f64(&rat(-1, 2), 3).is_err());
    }

    #[test]
    fn dth_root_matches_reference_constants() {
        // (1/120)^(1/6) and (1/360)^(1/6), reference digits from independent
        // exact evaluation.
        let r = dth_root_f64(&rat(1, 120), 6).unwrap();
        assert!((r - 0.450266661567468_6).abs() < 1e-14, "{r}");
        let r = dth_root_f64(&rat(1, 360), 6).unwrap();
        assert!((r - 0.374929474546380_3).abs() < 1e-14, "{r}");
        // Large-denominator case: (2^58/120!)^(1/120).
        let v = ExactRational::new(
            BigInt::from(2u8).pow(58),
            BigInt::from(factorial(120)),
        );
        let r = dth_root_f64(&v, 120).unwrap();
        assert!((r - 0.030804881974).abs() < 1e-11, "{r}");
    }

    #[test]
    fn decimal_string_formatting() {
        assert_eq!(decimal_string(&rat(1, 120), 12), "8.33333333333e-3");
        assert_eq!(decimal_string(&rat(1, 2), 3), "5.00e-1");
        assert_eq!(decimal_string(&rat_int(0), 5), "0");
        assert_eq!(decimal_string(&rat(-1, 3), 4), "-3.333e-1");
        assert_eq!(decimal_string(&rat(999999, 1000), 3), "1.00e3"); // carries
        assert_eq!(decimal_string(&rat_int(120), 4), "1.200e2");
        let tiny = ExactRational::new(BigInt::one(), BigInt::from(factorial(30)));
        let s = decimal_string(&tiny, 12);
        assert!(s.starts_with("3.76998762882e-33"), "{s}");
    }

    #[test]
    fn rational_roundtrip_parsing() {
        assert_eq!(rational_from_str("1/3").unwrap(), rat(1, 3));
        assert_eq!(rational_from_str("-7/2").unwrap(), rat(-7, 2));
        assert_eq!(rational_from_str("5").unwrap(), rat_int(5));
        assert_eq!(rational_from_str("0.5").unwrap(), rat(1, 2));
        assert_eq!(rational_from_str("-3.25").unwrap(), rat(-13, 4));
        assert!(rational_from_str("1/0").is_err());
        assert!(rational_from_str("abc").is_err());
    }
}
