//! Segmented sieve of Eratosthenes.

pub const DEFAULT_SEGMENT: usize = 1 << 20;

fn simple_sieve(limit: usize) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i * i;
        while j <= limit {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

/// All primes `p < limit`, sieving `segment` integers at a time.
pub fn primes_below(limit: u64, segment: usize) -> Vec<u64> {
    if limit <= 2 {
        return Vec::new();
    }
    let segment = segment.max(1) as u64;
    let root = (limit as f64).sqrt() as u64 + 1;
    let base = simple_sieve(root as usize);
    let mut primes: Vec<u64> = base.iter().copied().filter(|&p| p < limit).collect();
    let mut low = root + 1;
    let mut marks = Vec::new();
    while low < limit {
        let high = (low + segment).min(limit);
        marks.clear();
        marks.resize((high - low) as usize, true);
        for &p in &base {
            if p * p >= high {
                break;
            }
            let mut start = (low.div_ceil(p) * p).max(p * p);
            while start < high {
                marks[(start - low) as usize] = false;
                start += p;
            }
        }
        primes.extend(
            marks
                .iter()
                .enumerate()
                .filter(|(_, &m)| m)
                .map(|(i, _)| low + i as u64),
        );
        low = high;
    }
    primes
}
