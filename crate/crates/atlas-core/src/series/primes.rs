//! Plain sieve of Eratosthenes; prime bounds in this crate stay near 1e5.

pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut is_comp = vec![false; n + 1];
    let mut primes = Vec::new();
    for p in 2..=n {
        if !is_comp[p] {
            primes.push(p as u64);
            let mut m = p * p;
            while m <= n {
                is_comp[m] = true;
                m += p;
            }
        }
    }
    primes
}

#[cfg(test)]
mod tests {
    use super::primes_up_to;

    #[test]
    fn small_primes() {
        assert_eq!(primes_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
    }

    #[test]
    fn pi_of_1e5() {
        assert_eq!(primes_up_to(100_000).len(), 9592);
    }
}
