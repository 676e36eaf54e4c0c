#![allow(dead_code)]

use regularity::Equation;

pub fn eq(coeffs: &[i64]) -> Equation {
    Equation::new(coeffs.to_vec()).unwrap()
}

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

/// Whether `table` (index `x - 1`) makes one of `solutions` monochromatic.
pub fn has_mono(solutions: &[Vec<u64>], table: &[u32]) -> bool {
    solutions.iter().any(|s| {
        let c = table[(s[0] - 1) as usize];
        s.iter().all(|&x| table[(x - 1) as usize] == c)
    })
}

/// Some `r`-coloring of `[1, n]` avoids every solution, found by trying all `r^n`.
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

/// `O_p(x)` by repeated division; `None` for zero.
pub fn order(p: u128, x: i128) -> Option<u32> {
    if x == 0 {
        return None;
    }
    let mut x = x.unsigned_abs();
    let mut k = 0;
    while x.is_multiple_of(p) {
        x /= p;
        k += 1;
    }
    Some(k)
}
