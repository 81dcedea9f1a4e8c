//! Oracles shared by the integration tests.

/// Symplectic form of `(x|z)` vectors.
fn form(u: &[usize], v: &[usize], n: usize, d: usize) -> usize {
    let mut s = 0;
    for i in 0..n {
        s += u[i] * v[n + i] + d * d - u[n + i] * v[i];
    }
    s % d
}

/// Counts `2n × 2n` matrices over `Z_d` whose columns `(x_1..x_n, z_1..z_n)`
/// pair like the standard basis, by depth-first search over columns.
pub fn count_symplectic(d: usize, n: usize) -> u64 {
    let m = 2 * n;
    let vectors: Vec<Vec<usize>> = (0..d.pow(m as u32))
        .map(|mut k| {
            (0..m)
                .map(|_| {
                    let e = k % d;
                    k /= d;
                    e
                })
                .collect()
        })
        .collect();
    let target = |i: usize, j: usize| -> usize {
        // ⟨x_i, z_i⟩ = 1, ⟨z_i, x_i⟩ = −1, 0 otherwise
        if j == i + n && i < n {
            1
        } else if i == j + n && j < n {
            d - 1
        } else {
            0
        }
    };
    fn go(
        col: usize,
        chosen: &mut Vec<usize>,
        vectors: &[Vec<usize>],
        m: usize,
        n: usize,
        d: usize,
        target: &dyn Fn(usize, usize) -> usize,
    ) -> u64 {
        if col == m {
            return 1;
        }
        let mut total = 0;
        for (idx, v) in vectors.iter().enumerate() {
            if chosen.iter().enumerate().all(|(j, &w)| form(&vectors[w], v, n, d) == target(j, col)) {
                chosen.push(idx);
                total += go(col + 1, chosen, vectors, m, n, d, target);
                chosen.pop();
            }
        }
        total
    }
    go(0, &mut Vec::new(), &vectors, m, n, d, &target)
}
