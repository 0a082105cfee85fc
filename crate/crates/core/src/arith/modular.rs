use crate::error::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// `gcd(|a|, |b|)`, with `gcd(0, 0) = 0`.
pub fn gcd_i64(a: i64, b: i64) -> u64 {
    gcd(a.unsigned_abs(), b.unsigned_abs())
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    result
}

/// Least nonnegative residue of a signed integer.
#[inline]
pub fn reduce(a: i64, m: u64) -> u64 {
    (a as i128).rem_euclid(m as i128) as u64
}

/// Inverse of `a` modulo `m`, or `None` when `gcd(a, m) > 1`. Modulo 1 the
/// inverse is 0.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = ((a % m) as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Deterministic Miller-Rabin for the full 64-bit range.
pub fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Jacobi symbol `(a / n)` for odd positive `n`.
pub fn jacobi(a: i64, n: u64) -> Result<i8> {
    if n % 2 == 0 {
        return Err(Error::Domain(format!("Jacobi symbol needs an odd modulus, got {n}")));
    }
    Ok(jacobi_unchecked(reduce(a, n), n))
}

pub(crate) fn jacobi_unchecked(a: u64, n: u64) -> i8 {
    let mut a = a % n;
    let mut n = n;
    let mut sign = 1i8;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        if tz % 2 == 1 && (n % 8 == 3 || n % 8 == 5) {
            sign = -sign;
        }
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// The signed modulus `d* = (-1/d) d` attached to an odd `d`; always `= 1 (mod 4)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignedSquareClass(i64);

impl SignedSquareClass {
    pub fn value(self) -> i64 {
        self.0
    }

    /// The modulus `|d*| = d`.
    pub fn modulus(self) -> u64 {
        self.0.unsigned_abs()
    }
}

pub fn d_star(d: u64) -> Result<SignedSquareClass> {
    if d % 2 == 0 {
        return Err(Error::Domain(format!("d* is defined for odd d only, got {d}")));
    }
    let d = i64::try_from(d).map_err(|_| Error::Domain(format!("{d} exceeds 2^63 - 1")))?;
    Ok(SignedSquareClass(if d % 4 == 1 { d } else { -d }))
}

/// Square root of a unit `a` modulo the odd prime `p` (Tonelli-Shanks).
/// Returns `None` for quadratic non-residues.
pub(crate) fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Both square roots of the unit `a` modulo `p^k`, sorted, or an empty
/// vector. `pk` must equal `p^k`.
pub(crate) fn sqrt_unit_mod_prime_power(a: u64, p: u64, k: u32, pk: u64) -> Vec<u64> {
    let Some(mut x) = sqrt_mod_prime(a % p, p) else {
        return Vec::new();
    };
    let mut m = p;
    for _ in 1..k {
        m *= p;
        // Newton step: x <- x - (x^2 - a) / (2x)  mod p^{j+1}
        let fx = (mul_mod(x, x, m) + m - a % m) % m;
        let inv = inv_mod(mul_mod(2, x, m), m).expect("2x is a unit for odd p");
        x = (x + m - mul_mod(fx, inv, m)) % m;
    }
    debug_assert_eq!(m, pk);
    let y = (pk - x) % pk;
    let (lo, hi) = if x < y { (x, y) } else { (y, x) };
    if lo == hi {
        vec![lo]
    } else {
        vec![lo, hi]
    }
}

/// All `x mod l^k` with `x^2 = a (mod l^k)`, sorted ascending.
///
/// `l` must be an odd prime (primality is not re-verified here). When `l`
/// divides `a` the full solution set is returned, which can have more than
/// two elements once `k >= 2` (e.g. `x^2 = 0 (mod 9)` has roots 0, 3, 6).
pub fn mod_sqrt(a: i64, l: u64, k: u32) -> Result<Vec<u64>> {
    if l < 3 || l % 2 == 0 {
        return Err(Error::Domain(format!("mod_sqrt needs an odd prime, got {l}")));
    }
    if k == 0 {
        return Err(Error::Domain("mod_sqrt needs an exponent k >= 1".into()));
    }
    debug_assert!(is_prime_u64(l), "{l} is not prime");
    let pk = l
        .checked_pow(k)
        .filter(|&m| m <= i64::MAX as u64)
        .ok_or_else(|| Error::Domain(format!("{l}^{k} exceeds 2^63 - 1")))?;
    let a = reduce(a, pk);
    if a % l != 0 {
        return Ok(sqrt_unit_mod_prime_power(a, l, k, pk));
    }
    // a = l^j * a' with (a', l) = 1, or a = 0.
    let (j, unit) = if a == 0 {
        (k, 0)
    } else {
        let mut j = 0;
        let mut r = a;
        while r % l == 0 {
            r /= l;
            j += 1;
        }
        (j, r)
    };
    let mut roots = Vec::new();
    if j == k {
        // x = 0 mod l^ceil(k/2)
        let step = l.pow(k.div_ceil(2));
        roots.extend((0..pk / step).map(|t| t * step));
        return Ok(roots);
    }
    if j % 2 == 1 {
        return Ok(roots);
    }
    // x = l^{j/2} y with y^2 = a' (mod l^{k-j}); y is free modulo l^{k-j/2}.
    let half = l.pow(j / 2);
    let inner = l.pow(k - j);
    let base = sqrt_unit_mod_prime_power(unit, l, k - j, inner);
    for y0 in base {
        for t in 0..half {
            let y = y0 + t * inner;
            roots.push(mul_mod(half, y, pk));
        }
    }
    roots.sort_unstable();
    roots.dedup();
    Ok(roots)
}

/// Combines `x = r_i (mod m_i)` for pairwise coprime moduli into
/// `(x, prod m_i)` with `0 <= x < prod m_i`. The empty system yields `(0, 1)`.
pub fn crt_combine(congruences: &[(u64, u64)]) -> Result<(u64, u64)> {
    let mut x = 0u64;
    let mut m = 1u64;
    for &(r, mi) in congruences {
        if mi == 0 {
            return Err(Error::Domain("CRT modulus must be positive".into()));
        }
        let inv = inv_mod(m % mi, mi).ok_or_else(|| {
            Error::Domain(format!("CRT moduli are not pairwise coprime (modulus {mi})"))
        })?;
        let new_m = m
            .checked_mul(mi)
            .ok_or_else(|| Error::Domain("CRT modulus product exceeds 64 bits".into()))?;
        let r = r % mi;
        let diff = (r + mi - x % mi) % mi;
        let t = mul_mod(diff, inv, mi);
        x = ((x as u128 + m as u128 * t as u128) % new_m as u128) as u64;
        m = new_m;
    }
    Ok((x, m))
}
