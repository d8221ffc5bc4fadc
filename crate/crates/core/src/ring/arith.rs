//! Rational-integer helpers.

use num_integer::Integer;

/// `base^exp mod m` with 128-bit intermediates. Requires `m < 2^63`.
pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as u128;
    let mut b = (base % m) as u128;
    let mut acc: u128 = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: i128, m: i128) -> Option<i128> {
    let e = a.rem_euclid(m).extended_gcd(&m);
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m))
}

/// Deterministic primality test by trial division (inputs here stay below ~10^12).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization of `n >= 1` as ascending `(p, e)` pairs.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Smallest-prime-factor table for `0..=n`.
pub fn spf_table(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

/// Factor using a smallest-prime-factor table covering `n`.
pub fn factor_with_spf(mut n: u64, spf: &[u32]) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    while n > 1 {
        let p = spf[n as usize] as u64;
        n /= p;
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// Integer square root (floor).
pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Decomposes `n = q^2 s` with `s` squarefree; returns `(q, s)`.
pub fn square_decomposition(n: u64) -> (u64, u64) {
    let mut q = 1u64;
    let mut s = 1u64;
    for (p, e) in factor_u64(n) {
        q *= p.pow(e / 2);
        if e % 2 == 1 {
            s *= p;
        }
    }
    (q, s)
}

/// A square root of `-1` modulo a prime `p = 1 mod 4`.
pub fn sqrt_minus_one(p: u64) -> u64 {
    debug_assert!(p % 4 == 1);
    let mut c = 2u64;
    loop {
        if pow_mod(c, (p - 1) / 2, p) == p - 1 {
            return pow_mod(c, (p - 1) / 4, p);
        }
        c += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_roundtrip() {
        for n in 1..3000u64 {
            let f = factor_u64(n);
            assert_eq!(f.iter().map(|(p, e)| p.pow(*e)).product::<u64>(), n);
            assert!(f.iter().all(|(p, _)| is_prime(*p)));
        }
    }

    #[test]
    fn spf_matches_trial_division() {
        let spf = spf_table(5000);
        for n in 1..=5000u64 {
            assert_eq!(factor_with_spf(n, &spf), factor_u64(n));
        }
    }

    #[test]
    fn square_decomposition_examples() {
        assert_eq!(square_decomposition(45), (3, 5));
        assert_eq!(square_decomposition(8), (2, 2));
        assert_eq!(square_decomposition(1), (1, 1));
    }

    #[test]
    fn sqrt_minus_one_squares_to_minus_one() {
        for p in [5u64, 13, 17, 29, 97, 1009] {
            let x = sqrt_minus_one(p);
            assert_eq!(x * x % p, p - 1);
        }
    }

    #[test]
    fn inverses() {
        assert_eq!(inv_mod(3, 8), Some(3));
        assert_eq!(inv_mod(2, 8), None);
        assert_eq!(inv_mod(-1, 7), Some(6));
    }
}
