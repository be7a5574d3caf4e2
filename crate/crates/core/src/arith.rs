//! Elementary integer helpers: sieving, trial factorization, modular powers.

use num_integer::Roots;

pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return vec![];
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u64).collect()
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    // Miller–Rabin with bases that are deterministic below 2^64
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'bases: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = (x as u128 * x as u128 % n as u128) as u64;
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Prime factorization by trial division, ascending.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
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

pub fn is_square(n: i128) -> bool {
    if n < 0 {
        return false;
    }
    let r = n.sqrt();
    r * r == n
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u128 % m as u128;
    let mut x = b as u128 % m as u128;
    while e > 0 {
        if e & 1 == 1 {
            r = r * x % m as u128;
        }
        x = x * x % m as u128;
        e >>= 1;
    }
    b = r as u64;
    b
}

/// Legendre symbol (a/p) for odd prime p, as 0, 1 or −1.
pub fn legendre(a: i128, p: u64) -> i32 {
    let a = a.rem_euclid(p as i128) as u64;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes() {
        assert_eq!(primes_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert!(is_prime(101) && !is_prime(91));
        let sieve = primes_up_to(100_000);
        let tested: Vec<u64> = (0..=100_000).filter(|&n| is_prime(n)).collect();
        assert_eq!(sieve, tested);
        assert!(is_prime(2_147_483_647) && !is_prime(4_294_967_297) && !is_prime(3_215_031_751));
    }

    #[test]
    fn factorization() {
        assert_eq!(factor(148), vec![(2, 2), (37, 1)]);
        assert_eq!(factor(1), vec![]);
    }

    #[test]
    fn legendre_symbols() {
        assert_eq!(legendre(2, 7), 1);
        assert_eq!(legendre(3, 7), -1);
        assert_eq!(legendre(14, 7), 0);
    }
}
