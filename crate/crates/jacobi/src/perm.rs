//! Permutations of `{1..n}` in one-line notation: `p[i - 1]` is the image of `i`.

/// All permutations of `{1..n}` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<u32>> {
    let mut p: Vec<u32> = (1..=n as u32).collect();
    let mut out = vec![p.clone()];
    while next_permutation(&mut p) {
        out.push(p.clone());
    }
    out
}

/// Advances to the lexicographic successor; false at the last permutation.
pub fn next_permutation<T: Ord>(p: &mut [T]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

pub fn cycle_count(p: &[u32]) -> usize {
    let mut seen = vec![false; p.len()];
    let mut cycles = 0;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p[i] as usize - 1;
        }
    }
    cycles
}

pub fn inverse(p: &[u32]) -> Vec<u32> {
    let mut out = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        out[x as usize - 1] = i as u32 + 1;
    }
    out
}

/// `(p ∘ q)(i) = p(q(i))`.
pub fn compose(p: &[u32], q: &[u32]) -> Vec<u32> {
    q.iter().map(|&x| p[x as usize - 1]).collect()
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}
