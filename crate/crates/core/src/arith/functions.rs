use super::factor::FactoredInteger;

/// Floor of the square root, exact for every `u64`.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

pub fn is_square(n: u64) -> bool {
    let r = isqrt(n);
    r * r == n
}

/// Divisor count `prod (a_i + 1)`.
pub fn tau(f: &FactoredInteger) -> u64 {
    f.tau()
}

/// Divisor count via the pairing `d <-> n/d`:
/// `2 * #{d | n : d <= sqrt(n)} - [n is a square]`.
pub fn tau_via_sqrt(n: u64) -> u64 {
    assert!(n >= 1);
    let root = isqrt(n);
    let small = (1..=root).filter(|d| n % d == 0).count() as u64;
    2 * small - u64::from(root * root == n)
}

/// Number of lattice points `(x, y)` with `x^2 + y^2 = n`, as
/// `4 * sum_{d | n} chi_4(d)`.
pub fn r2(n: u64) -> u64 {
    let f = FactoredInteger::new(n).expect("r2 needs 1 <= n <= 2^63 - 1");
    let chi_sum: i64 = f
        .divisors()
        .into_iter()
        .map(|d| match d % 4 {
            1 => 1,
            3 => -1,
            _ => 0,
        })
        .sum();
    debug_assert!(chi_sum >= 0);
    4 * chi_sum as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{factorize, PrimeSieve};

    #[test]
    fn isqrt_edges() {
        for n in 0..10_000u64 {
            let r = isqrt(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n);
        }
        assert_eq!(isqrt(u64::MAX), u32::MAX as u64);
        assert_eq!(isqrt((1u64 << 62) - 1), (1 << 31) - 1);
        assert!(is_square(1 << 62));
        assert!(!is_square((1 << 62) + 1));
    }

    #[test]
    fn tau_examples() {
        assert_eq!(tau_via_sqrt(36), 9);
        assert_eq!(tau_via_sqrt(1), 1);
        assert_eq!(tau_via_sqrt(13), 2);
        assert_eq!(tau(&FactoredInteger::new(36).unwrap()), 9);
    }

    #[test]
    fn tau_routes_agree_up_to_1e5() {
        let sieve = PrimeSieve::new(400).unwrap();
        for n in 1..=100_000u64 {
            assert_eq!(tau_via_sqrt(n), factorize(n, &sieve).unwrap().tau(), "{n}");
        }
    }

    fn lattice(n: u64) -> u64 {
        let r = isqrt(n) as i64;
        let mut count = 0;
        for x in -r..=r {
            let rest = n as i64 - x * x;
            if rest < 0 {
                continue;
            }
            let y = isqrt(rest as u64) as i64;
            if y * y == rest {
                count += if y == 0 { 1 } else { 2 };
            }
        }
        count
    }

    #[test]
    fn r2_examples_and_lattice_count() {
        let r = r2;
        assert_eq!(r(1), 4);
        assert_eq!(r(3), 0);
        assert_eq!(r(25), 12);
        for n in 1..=10_000 {
            assert_eq!(r(n), lattice(n), "{n}");
        }
    }
}
