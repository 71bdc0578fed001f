//! Small-integer prime utilities shared by the counting modules.

/// Trial-division primality test. Intended for the small moduli used
/// throughout this crate (`q <= 64` in default builds).
pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization as `(prime, exponent)` pairs in increasing prime
/// order.
pub fn prime_factorization(mut n: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    let mut p = 2u32;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut k = 0;
            while n.is_multiple_of(p) {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// The distinct primes dividing `n`, in increasing order.
pub fn prime_divisors(n: u32) -> Vec<u32> {
    prime_factorization(n).into_iter().map(|(p, _)| p).collect()
}

/// If `n = p^k` for a prime `p` and `k >= 1`, returns `(p, k)`.
pub fn as_prime_power(n: u32) -> Option<(u32, u32)> {
    let f = prime_factorization(n);
    match f.as_slice() {
        [(p, k)] => Some((*p, *k)),
        _ => None,
    }
}
