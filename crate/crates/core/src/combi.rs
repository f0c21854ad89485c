//! Tiny enumeration helpers shared by the group and moduli modules.

/// All k-element subsets of `{1, …, n}` in lexicographic order.
pub fn k_subsets(n: u8, k: u8) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<u8> = (1..=k).collect();
    loop {
        out.push(cur.clone());
        // advance to the next subset in lex order
        let mut i = k as usize;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - (k - 1 - i as u8) {
                cur[i] += 1;
                for j in i + 1..k as usize {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// All permutations of `items`, generated by Heap's algorithm.
/// Order is deterministic but not lexicographic.
pub fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    let mut arr = items.to_vec();
    let n = arr.len();
    let mut out = Vec::with_capacity((1..=n).product::<usize>().max(1));
    let mut c = vec![0usize; n];
    out.push(arr.clone());
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                arr.swap(0, i);
            } else {
                arr.swap(c[i], i);
            }
            out.push(arr.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Binomial coefficient as usize; saturates are not needed at desk scale.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}
