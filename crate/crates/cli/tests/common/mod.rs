#![allow(dead_code)]

/// Every solution in `[1, n]^k`, by plain enumeration.
pub fn all_solutions(coeffs: &[i64], n: u64) -> Vec<Vec<u64>> {
    let k = coeffs.len();
    let mut out = Vec::new();
    let mut x = vec![1u64; k];
    loop {
        let sum: i128 = coeffs
            .iter()
            .zip(&x)
            .map(|(&a, &v)| a as i128 * v as i128)
            .sum();
        if sum == 0 {
            out.push(x.clone());
        }
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if x[i] < n {
                x[i] += 1;
                break;
            }
            x[i] = 1;
        }
    }
}

pub fn has_mono(solutions: &[Vec<u64>], table: &[u32]) -> bool {
    solutions.iter().any(|s| {
        let c = table[(s[0] - 1) as usize];
        s.iter().all(|&x| table[(x - 1) as usize] == c)
    })
}

/// Tries all `r^n` colorings of `[1, n]`.
pub fn naive_avoider_exists(coeffs: &[i64], r: u32, n: u64) -> bool {
    let solutions = all_solutions(coeffs, n);
    let mut table = vec![0u32; n as usize];
    loop {
        if !has_mono(&solutions, &table) {
            return true;
        }
        let mut i = 0;
        loop {
            if i == table.len() {
                return false;
            }
            table[i] += 1;
            if table[i] < r {
                break;
            }
            table[i] = 0;
            i += 1;
        }
    }
}

/// Lexicographically smallest nonempty index set with zero coefficient sum.
pub fn naive_rado(coeffs: &[i64]) -> Option<Vec<usize>> {
    let n = coeffs.len();
    (1u32..1 << n)
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>())
        .filter(|s| s.iter().map(|&i| coeffs[i]).sum::<i64>() == 0)
        .min()
}

/// `O_p(x)` by repeated division; `None` for zero.
pub fn order(p: u64, x: i128) -> Option<u64> {
    if x == 0 {
        return None;
    }
    let (p, mut x) = (p as u128, x.unsigned_abs());
    let mut k = 0;
    while x % p == 0 {
        x /= p;
        k += 1;
    }
    Some(k)
}
