//! Small-integer number theory: primality, sieving, prime-power decomposition.

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Sieve of Eratosthenes; `flags[n]` is true iff n is prime, for n in 0..=limit.
pub fn sieve(limit: u64) -> Vec<bool> {
    let limit = limit as usize;
    let mut flags = vec![true; limit + 1];
    flags[0] = false;
    if limit >= 1 {
        flags[1] = false;
    }
    let mut i = 2;
    while i * i <= limit {
        if flags[i] {
            let mut j = i * i;
            while j <= limit {
                flags[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    flags
}

pub fn primes_up_to(limit: u64) -> Vec<u64> {
    sieve(limit)
        .iter()
        .enumerate()
        .filter(|(_, &p)| p)
        .map(|(n, _)| n as u64)
        .collect()
}

/// Decomposes `q = p^k` for an odd prime `p`; `None` otherwise.
pub fn odd_prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 3 || q.is_multiple_of(2) {
        return None;
    }
    let mut p = 3;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 2;
    }
    if !q.is_multiple_of(p) {
        // no factor up to sqrt(q): q itself is prime
        return Some((q, 1));
    }
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

/// Integer square root by Newton iteration with an exactness fix-up.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = n;
    let mut y = n / 2 + 1;
    while y < x {
        x = y;
        y = (x + n / x) / 2;
    }
    while (x as u128) * (x as u128) > n as u128 {
        x -= 1;
    }
    while ((x + 1) as u128) * ((x + 1) as u128) <= n as u128 {
        x += 1;
    }
    x
}
